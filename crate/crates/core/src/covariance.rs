//! Covariances g₁(u), g₂(u) of the Airy processes.
//!
//! The Hoeffding identity
//!     Cov(A(u), A(0)) = ∬ [F₂(u; s₁, s₂) − F(s₁)F(s₂)] ds₁ ds₂
//! avoids differentiating computed CDFs; the integral is truncated to
//! [−T, T]² and evaluated with tensor-product Clenshaw–Curtis. At u = 0
//! the integrand has a kink along the diagonal, so the square is reduced
//! to the equivalent single integral 2∫ F(s) ∫_s^T (1 − F) dσ ds, which is
//! smooth and converges spectrally.
//!
//! For u > 0 the whole tensor grid of two-point determinants shares one
//! off-diagonal λ-rule, so assembling a grid point costs two small matrix
//! products and an LU instead of fresh kernel quadratures. Each computed
//! F₂ is clamped to its Fréchet bounds
//!     max(F₁+F₂−1, 0) ≤ F₁₂ ≤ min(F₁, F₂),
//! which是 exact and silences determinant round-off noise in the far
//! corners where the true integrand vanishes.

use crate::error::{Error, Result};
use crate::fredholm::{airy2_diag_block, Airy2OffDiag, AiryCache, JointProblem};
use crate::kernels::{airy1_entry, Process};
use crate::linalg;
use crate::quadrature::{clenshaw_curtis, semi_infinite_rule, QuadratureRule};
use ndarray::Array2;
use rayon::prelude::*;

/// A sampled covariance curve with method metadata.
#[derive(Debug, Clone)]
pub struct CovCurve {
    pub process: Process,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    /// per-point standard errors; absent for deterministic curves
    pub stderr: Option<Vec<f64>>,
    /// indices of grid points whose evaluation failed (value = NaN there)
    pub failed: Vec<usize>,
    pub meta: CovMeta,
}

#[derive(Debug, Clone, Copy)]
pub struct CovMeta {
    pub trunc: f64,
    pub cc_points: usize,
    pub fred_n: usize,
    /// largest |integrand| seen on the truncation boundary
    pub boundary_max: f64,
}

/// Discretization parameters for one covariance evaluation.
#[derive(Debug, Clone, Copy)]
pub struct CovParams {
    pub trunc: f64,
    pub cc_points: usize,
    pub fred_n: usize,
}

impl CovParams {
    /// Defaults: T = 10 with 100 Clenshaw–Curtis points per dimension; the
    /// near-diagonal layer at u <= 0.05 gets a finer grid (and for Airy₁
    /// the larger box the truncation-robustness tests ask for).
    pub fn defaults(process: Process, u: f64) -> CovParams {
        if u <= 0.05 && u > 0.0 {
            CovParams {
                trunc: if process == Process::Airy1 { 14.0 } else { 10.0 },
                cc_points: 160,
                fred_n: 96,
            }
        } else {
            CovParams {
                trunc: 10.0,
                cc_points: 100,
                fred_n: 64,
            }
        }
    }
}

struct PointOutcome {
    value: f64,
    boundary_max: f64,
}

/// Fréchet clamp: the exact bounds on any joint CDF given its marginals.
#[inline]
fn clamped_integrand(f2: f64, fa: f64, fb: f64) -> f64 {
    let hi = fa.min(fb);
    // rounding of fa+fb-1 can overshoot hi by an ulp when a marginal is ~1
    let lo = (fa + fb - 1.0).max(0.0).min(hi);
    f2.clamp(lo, hi) - fa * fb
}

fn one_point_value(process: Process, s: f64, n: usize) -> Result<f64> {
    let p = JointProblem::one_point(process, s, n)?;
    let b = crate::fredholm::assemble(&p)?;
    Ok(crate::fredholm::det_i_minus(&b)?.clamp(0.0, 1.0))
}

/// Weighted diagonal (equal-time) block for one threshold rule.
fn diag_block(process: Process, rule: &QuadratureRule) -> Array2<f64> {
    let n = rule.len();
    let sw: Vec<f64> = rule.weights.iter().map(|w| w.sqrt()).collect();
    let mut block = match process {
        Process::Airy2 => {
            let cache = AiryCache::over(&rule.nodes);
            airy2_diag_block(&rule.nodes, &cache)
        }
        Process::Airy1 => {
            let mut k = Array2::zeros((n, n));
            for p in 0..n {
                for q in 0..n {
                    k[[p, q]] = airy1_entry(0.0, rule.nodes[p], rule.nodes[q]);
                }
            }
            k
        }
    };
    for p in 0..n {
        for q in 0..n {
            block[[p, q]] *= sw[p] * sw[q];
        }
    }
    block
}

fn det_from_diag(block: &Array2<f64>) -> Result<f64> {
    let mut m = Array2::eye(block.nrows());
    m -= block;
    linalg::lu_det(m)
}

/// Variance route at u = 0: Var = 2 ∫ F(s) Φ(s) ds with Φ(s) = ∫_s^T (1−F),
/// both one-dimensional and smooth.
fn variance_point(process: Process, params: &CovParams) -> Result<PointOutcome> {
    let t = params.trunc;
    let outer = clenshaw_curtis(params.cc_points, -t, t)?;
    let f_at = |s: f64| one_point_value(process, s, params.fred_n);
    let f_outer: Vec<f64> = outer
        .nodes
        .par_iter()
        .map(|&s| f_at(s))
        .collect::<Result<_>>()?;
    let phi: Vec<f64> = outer
        .nodes
        .par_iter()
        .map(|&s| -> Result<f64> {
            if t - s < 1e-12 {
                return Ok(0.0);
            }
            let inner = clenshaw_curtis(params.cc_points, s, t)?;
            let mut acc = 0.0;
            for (&sig, &w) in inner.nodes.iter().zip(&inner.weights) {
                acc += w * (1.0 - f_at(sig)?);
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let mut value = 0.0;
    for i in 0..outer.len() {
        value += 2.0 * outer.weights[i] * f_outer[i] * phi[i];
    }
    // truncation diagnostics: mass outside the box
    let boundary_max = f_outer[0].max(1.0 - f_outer[outer.len() - 1]);
    Ok(PointOutcome {
        value,
        boundary_max,
    })
}

/// Two-point covariance over the shared-rule tensor grid.
fn hoeffding_point(process: Process, u: f64, params: &CovParams) -> Result<PointOutcome> {
    let t = params.trunc;
    let cc = clenshaw_curtis(params.cc_points, -t, t)?;
    let nsig = cc.len();
    let n = params.fred_n;

    let rules: Vec<QuadratureRule> = cc
        .nodes
        .iter()
        .map(|&s| semi_infinite_rule(s, n))
        .collect::<Result<_>>()?;
    let sqrt_w: Vec<Vec<f64>> = rules
        .iter()
        .map(|r| r.weights.iter().map(|w| w.sqrt()).collect())
        .collect();

    let diags: Vec<Array2<f64>> = rules
        .par_iter()
        .map(|r| diag_block(process, r))
        .collect();
    let f_one: Vec<f64> = diags
        .par_iter()
        .map(|d| det_from_diag(d).map(|v| v.clamp(0.0, 1.0)))
        .collect::<Result<_>>()?;

    // Airy2 off-diagonal factors over the union node set
    let airy2_off = if process == Process::Airy2 {
        let off = Airy2OffDiag::new(u, -t, 320);
        let future: Vec<Array2<f64>> = rules
            .par_iter()
            .map(|r| off.future_factor(&r.nodes))
            .collect();
        let past: Vec<Array2<f64>> = rules
            .par_iter()
            .map(|r| off.past_factor(&r.nodes))
            .collect();
        Some((off, future, past))
    } else {
        None
    };

    let pair_value = |a: usize, b: usize| -> Result<f64> {
        let dim = 2 * n;
        let mut m = Array2::eye(dim);
        for p in 0..n {
            for q in 0..n {
                m[[p, q]] -= diags[a][[p, q]];
                m[[n + p, n + q]] -= diags[b][[p, q]];
            }
        }
        match &airy2_off {
            Some((off, future, past)) => {
                let b12 = off.future_block(&future[a], &future[b], &rules[a].nodes, &rules[b].nodes);
                let b21 = past[b].dot(&past[a].t());
                for p in 0..n {
                    for q in 0..n {
                        m[[p, n + q]] -= sqrt_w[a][p] * b12[[p, q]] * sqrt_w[b][q];
                        m[[n + p, q]] -= sqrt_w[b][p] * b21[[p, q]] * sqrt_w[a][q];
                    }
                }
            }
            None => {
                for p in 0..n {
                    for q in 0..n {
                        m[[p, n + q]] -= sqrt_w[a][p]
                            * airy1_entry(u, rules[a].nodes[p], rules[b].nodes[q])
                            * sqrt_w[b][q];
                        m[[n + p, q]] -= sqrt_w[b][p]
                            * airy1_entry(-u, rules[b].nodes[p], rules[a].nodes[q])
                            * sqrt_w[a][q];
                    }
                }
            }
        }
        linalg::lu_det(m)
    };

    // The Airy₂ process is reversible, so F₂(u;s₁,s₂) = F₂(u;s₂,s₁) and the
    // symmetric tensor grid needs only a <= b (discretization asymmetry is
    // below 1e-11). Airy₁ reversibility is not established, so its grid is
    // evaluated in full.
    let mirror = process == Process::Airy2;
    let pairs: Vec<(usize, usize)> = (0..nsig)
        .flat_map(|a| (0..nsig).map(move |b| (a, b)))
        .filter(|&(a, b)| !mirror || a <= b)
        .collect();
    let contributions: Vec<(f64, f64)> = pairs
        .par_iter()
        .map(|&(a, b)| -> Result<(f64, f64)> {
            let f2 = pair_value(a, b)?;
            let integrand = clamped_integrand(f2, f_one[a], f_one[b]);
            let mult = if mirror && a != b { 2.0 } else { 1.0 };
            let on_boundary = a == 0 || b == 0 || a == nsig - 1 || b == nsig - 1;
            Ok((
                mult * cc.weights[a] * cc.weights[b] * integrand,
                if on_boundary { integrand.abs() } else { 0.0 },
            ))
        })
        .collect::<Result<_>>()?;

    let value = contributions.iter().map(|c| c.0).sum();
    let boundary_max = contributions.iter().map(|c| c.1).fold(0.0, f64::max);
    Ok(PointOutcome {
        value,
        boundary_max,
    })
}

fn covariance_point_outcome(process: Process, u: f64, params: &CovParams) -> Result<PointOutcome> {
    if !u.is_finite() || u < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "covariance needs u >= 0, got {u}"
        )));
    }
    let outcome = if u == 0.0 {
        variance_point(process, params)?
    } else {
        hoeffding_point(process, u, params)?
    };
    if outcome.boundary_max > 1e-9 {
        log::warn!(
            "covariance({process}, {u}): truncation boundary integrand {:.2e} exceeds 1e-9",
            outcome.boundary_max
        );
    }
    Ok(outcome)
}

/// Cov(A(u), A(0)) with the default discretization.
pub fn covariance_point(process: Process, u: f64) -> Result<f64> {
    covariance_point_with(process, u, &CovParams::defaults(process, u)).map(|o| o.0)
}

/// Covariance with explicit parameters; returns (value, boundary diagnostic).
pub fn covariance_point_with(process: Process, u: f64, params: &CovParams) -> Result<(f64, f64)> {
    covariance_point_outcome(process, u, params).map(|o| (o.value, o.boundary_max))
}

/// Samples the covariance on {0, du, 2du, …, umax}. Failed points are
/// flagged and left as NaN; the curve is still returned.
pub fn covariance_curve(process: Process, umax: f64, du: f64) -> Result<CovCurve> {
    if !(du > 0.0 && du <= umax && umax <= 10.0) {
        return Err(Error::InvalidArgument(format!(
            "need 0 < du <= umax <= 10, got du={du}, umax={umax}"
        )));
    }
    let mut grid = Vec::new();
    let mut k = 0usize;
    loop {
        let u = k as f64 * du;
        if u > umax + 1e-12 {
            break;
        }
        grid.push(u.min(umax));
        k += 1;
    }
    let mut values = Vec::with_capacity(grid.len());
    let mut failed = Vec::new();
    let mut boundary_max = 0.0f64;
    for (idx, &u) in grid.iter().enumerate() {
        match covariance_point_outcome(process, u, &CovParams::defaults(process, u)) {
            Ok(out) => {
                values.push(out.value);
                boundary_max = boundary_max.max(out.boundary_max);
            }
            Err(err) => {
                log::warn!("covariance curve point u={u} failed: {err}");
                values.push(f64::NAN);
                failed.push(idx);
            }
        }
    }
    let params = CovParams::defaults(process, umax.max(0.1));
    Ok(CovCurve {
        process,
        grid,
        values,
        stderr: None,
        failed,
        meta: CovMeta {
            trunc: params.trunc,
            cc_points: params.cc_points,
            fred_n: params.fred_n,
            boundary_max,
        },
    })
}

/// One-sided derivative estimate g'(0) from h ∈ {0.08, 0.04, 0.02} with two
/// Richardson eliminations.
pub fn derivative_at_zero(process: Process) -> Result<f64> {
    let g0 = covariance_point(process, 0.0)?;
    let hs = [0.08, 0.04, 0.02];
    let mut gh = [0.0; 3];
    for (i, &h) in hs.iter().enumerate() {
        gh[i] = covariance_point(process, h)?;
    }
    Ok(richardson_slope(g0, &gh, &hs))
}

/// Richardson extrapolation of one-sided differences (g(h)-g(0))/h over a
/// halving h-sequence; exact for affine g.
pub(crate) fn richardson_slope(g0: f64, gh: &[f64; 3], hs: &[f64; 3]) -> f64 {
    let d: Vec<f64> = gh.iter().zip(hs).map(|(&g, &h)| (g - g0) / h).collect();
    let r1a = 2.0 * d[1] - d[0];
    let r1b = 2.0 * d[2] - d[1];
    (4.0 * r1b - r1a) / 3.0
}

/// Mean and variance of the one-point law by tail integration:
/// E[X] = ∫_0^T (1−F) − ∫_{−T}^0 F, E[X²] = ∫_0^T 2s(1−F) + ∫_{−T}^0 (−2s)F.
pub fn one_point_moments(process: Process) -> Result<(f64, f64)> {
    let t = 10.0;
    let nq = 100;
    let n = 64;
    let pos = clenshaw_curtis(nq, 0.0, t)?;
    let neg = clenshaw_curtis(nq, -t, 0.0)?;
    let f_pos: Vec<f64> = pos
        .nodes
        .par_iter()
        .map(|&s| one_point_value(process, s, n))
        .collect::<Result<_>>()?;
    let f_neg: Vec<f64> = neg
        .nodes
        .par_iter()
        .map(|&s| one_point_value(process, s, n))
        .collect::<Result<_>>()?;
    let mut ex = 0.0;
    let mut ex2 = 0.0;
    for i in 0..pos.len() {
        ex += pos.weights[i] * (1.0 - f_pos[i]);
        ex2 += pos.weights[i] * 2.0 * pos.nodes[i] * (1.0 - f_pos[i]);
    }
    for i in 0..neg.len() {
        ex -= neg.weights[i] * f_neg[i];
        ex2 += neg.weights[i] * (-2.0 * neg.nodes[i]) * f_neg[i];
    }
    Ok((ex, ex2 - ex * ex))
}
