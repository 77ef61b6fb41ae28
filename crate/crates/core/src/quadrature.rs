//! Gauss–Legendre and Clenshaw–Curtis rules, plus the tangent transform
//! that maps Gauss–Legendre on (0,1) onto a half-infinite interval (s, ∞).
//!
//! The transform ξ ↦ s + c·tan(πξ/2) is holomorphic on a strip, so the
//! transformed rule converges exponentially for analytic decaying
//! integrands. The stretch constant defaults to 10.

use crate::error::{Error, Result};

/// Interval a rule integrates over.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Finite { a: f64, b: f64 },
    SemiInfinite { s: f64 },
}

/// Nodes and weights of a quadrature rule, nodes strictly increasing.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub domain: Domain,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Σ wᵢ f(xᵢ)
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

fn check_finite_interval(a: f64, b: f64) -> Result<()> {
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "interval endpoints must be finite, got [{a}, {b}]"
        )));
    }
    if a >= b {
        return Err(Error::InvalidArgument(format!(
            "interval must satisfy a < b, got [{a}, {b}]"
        )));
    }
    Ok(())
}

/// Legendre P_n and P_n' at x by upward recurrence.
fn legendre_with_deriv(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Gauss–Legendre nodes/weights on [-1,1]: Newton iteration on P_n with
/// cosine initial guesses; weights 2/((1-x²) P_n'²).
fn gauss_legendre_unit(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre_with_deriv(n, x);
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-15 * (1.0 + x.abs()) {
                break;
            }
        }
        // one polishing step against the residual
        let (p, d) = legendre_with_deriv(n, x);
        x -= p / d;
        let dp = legendre_with_deriv(n, x).1;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // cosine guesses run from +1 down; store ascending
        nodes[i] = -x;
        weights[i] = w;
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
        let (_, dp) = legendre_with_deriv(n, 0.0);
        weights[n / 2] = 2.0 / (dp * dp);
    }
    (nodes, weights)
}

/// n-point Gauss–Legendre rule mapped to [a, b]; exact for degree ≤ 2n-1.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Result<QuadratureRule> {
    if n < 1 {
        return Err(Error::InvalidArgument("gauss_legendre needs n >= 1".into()));
    }
    check_finite_interval(a, b)?;
    let (xs, ws) = gauss_legendre_unit(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    Ok(QuadratureRule {
        nodes: xs.iter().map(|&x| mid + half * x).collect(),
        weights: ws.iter().map(|&w| half * w).collect(),
        domain: Domain::Finite { a, b },
    })
}

/// Clenshaw–Curtis rule with n+1 cosine-spaced nodes on [a, b]; exact for
/// degree ≤ n. Weights by the explicit cosine-sum formula.
pub fn clenshaw_curtis(n: usize, a: f64, b: f64) -> Result<QuadratureRule> {
    if n < 2 {
        return Err(Error::InvalidArgument(
            "clenshaw_curtis needs n >= 2".into(),
        ));
    }
    check_finite_interval(a, b)?;
    let nf = n as f64;
    let mut nodes = Vec::with_capacity(n + 1);
    let mut weights = Vec::with_capacity(n + 1);
    for k in 0..=n {
        // ascending nodes: cos runs from -1 to 1 with k reversed
        let idx = n - k;
        nodes.push(0.5 * (a + b) + 0.5 * (b - a) * (idx as f64 * std::f64::consts::PI / nf).cos());
        let mut sum = 0.0;
        for j in 1..=(n / 2) {
            let bj = if 2 * j == n { 1.0 } else { 2.0 };
            sum += bj / ((4 * j * j - 1) as f64)
                * (2.0 * j as f64 * idx as f64 * std::f64::consts::PI / nf).cos();
        }
        let c = if idx == 0 || idx == n { 1.0 } else { 2.0 };
        weights.push(c / nf * (1.0 - sum) * 0.5 * (b - a));
    }
    Ok(QuadratureRule {
        nodes,
        weights,
        domain: Domain::Finite { a, b },
    })
}

/// The map ξ ↦ s + scale·tan(πξ/2), a strictly increasing bijection from
/// (0,1) onto (s, ∞).
#[derive(Debug, Clone, Copy)]
pub struct SemiInfiniteTransform {
    pub s: f64,
    pub scale: f64,
}

impl SemiInfiniteTransform {
    /// Transform with the default stretch constant 10.
    pub fn new(s: f64) -> SemiInfiniteTransform {
        SemiInfiniteTransform { s, scale: 10.0 }
    }

    pub fn with_scale(s: f64, scale: f64) -> Result<SemiInfiniteTransform> {
        if !s.is_finite() || !scale.is_finite() || scale <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "transform needs finite s and scale > 0, got s={s}, scale={scale}"
            )));
        }
        Ok(SemiInfiniteTransform { s, scale })
    }

    pub fn map(&self, xi: f64) -> f64 {
        self.s + self.scale * (std::f64::consts::FRAC_PI_2 * xi).tan()
    }

    pub fn deriv(&self, xi: f64) -> f64 {
        let c = (std::f64::consts::FRAC_PI_2 * xi).cos();
        self.scale * std::f64::consts::FRAC_PI_2 / (c * c)
    }
}

/// Gauss–Legendre on (0,1) pushed through a semi-infinite transform:
/// nodes φ_s(ξ_j), weights w_j φ_s'(ξ_j).
pub fn semi_infinite_rule_with(
    transform: &SemiInfiniteTransform,
    n: usize,
) -> Result<QuadratureRule> {
    if n < 1 {
        return Err(Error::InvalidArgument(
            "semi_infinite_rule needs n >= 1".into(),
        ));
    }
    let base = gauss_legendre(n, 0.0, 1.0)?;
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for (&xi, &w) in base.nodes.iter().zip(&base.weights) {
        nodes.push(transform.map(xi));
        weights.push(w * transform.deriv(xi));
    }
    Ok(QuadratureRule {
        nodes,
        weights,
        domain: Domain::SemiInfinite { s: transform.s },
    })
}

/// Default-scale rule for ∫_s^∞.
pub fn semi_infinite_rule(s: f64, n: usize) -> Result<QuadratureRule> {
    if !s.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "semi_infinite_rule needs finite s, got {s}"
        )));
    }
    semi_infinite_rule_with(&SemiInfiniteTransform::new(s), n)
}
