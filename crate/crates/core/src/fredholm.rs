//! Nyström discretization and determinant evaluation for one- and two-time
//! Fredholm determinants det(1 − χ_s K χ_s).
//!
//! Each time slot k gets the transformed Gauss–Legendre rule on (s_k, ∞);
//! block (i,j) of the discretized operator is
//!     (A_ij)_pq = w_ip^{1/2} · K(u_i, x_ip; u_j, x_jq) · w_jq^{1/2}
//! and the determinant of I − A is taken by pivoted LU.
//!
//! The Airy₂ off-diagonal blocks are never filled entry-by-entry: both
//! branches are integrals of products Ai(x±λ)Ai(y±λ), so a shared λ-rule
//! turns a whole block into B·Bᵀ for a factor matrix B — the dominant cost
//! becomes one small matrix product per block.

use crate::airy::ai_unchecked;
use crate::error::{Error, Result};
use crate::kernels::{self, Process};
use crate::linalg;
use crate::quadrature::{semi_infinite_rule, QuadratureRule};
use ndarray::Array2;

/// A one- or two-time distribution query ready for discretization.
#[derive(Debug, Clone)]
pub struct JointProblem {
    pub process: Process,
    pub times: Vec<f64>,
    pub thresholds: Vec<f64>,
    pub n: usize,
}

impl JointProblem {
    pub fn new(
        process: Process,
        times: Vec<f64>,
        thresholds: Vec<f64>,
        n: usize,
    ) -> Result<JointProblem> {
        let m = times.len();
        if m == 0 || m > 2 {
            return Err(Error::InvalidArgument(format!(
                "supported numbers of time points are 1 and 2, got {m}"
            )));
        }
        if thresholds.len() != m {
            return Err(Error::InvalidArgument(
                "times and thresholds must have equal length".into(),
            ));
        }
        if times.iter().any(|t| !t.is_finite()) || thresholds.iter().any(|s| !s.is_finite()) {
            return Err(Error::InvalidArgument(
                "times and thresholds must be finite".into(),
            ));
        }
        if m == 2 && times[1] <= times[0] {
            return Err(Error::InvalidArgument(
                "times must be strictly increasing".into(),
            ));
        }
        if thresholds.iter().any(|&s| s < kernels::SPACE_MIN) {
            return Err(Error::OutOfRange {
                what: "threshold",
                value: *thresholds
                    .iter()
                    .find(|&&s| s < kernels::SPACE_MIN)
                    .unwrap(),
            });
        }
        if n == 0 {
            return Err(Error::InvalidArgument("quadrature size must be >= 1".into()));
        }
        if m * n > 4096 {
            return Err(Error::InvalidArgument(format!(
                "m*n = {} exceeds the 4096 cap",
                m * n
            )));
        }
        Ok(JointProblem {
            process,
            times,
            thresholds,
            n,
        })
    }

    pub fn one_point(process: Process, s: f64, n: usize) -> Result<JointProblem> {
        JointProblem::new(process, vec![0.0], vec![s], n)
    }

    pub fn two_point(process: Process, u: f64, s1: f64, s2: f64, n: usize) -> Result<JointProblem> {
        JointProblem::new(process, vec![0.0, u], vec![s1, s2], n)
    }

    fn with_n(&self, n: usize) -> JointProblem {
        JointProblem {
            process: self.process,
            times: self.times.clone(),
            thresholds: self.thresholds.clone(),
            n,
        }
    }
}

/// The assembled mn × mn Nyström matrix A (the determinant argument is I − A).
#[derive(Debug, Clone)]
pub struct BlockMatrix {
    pub m: usize,
    pub n: usize,
    pub a: Array2<f64>,
}

/// Assembles the block matrix for arbitrary slot-indexed kernels; the test
/// hook for custom/separable kernels and the structural contract.
pub fn assemble_generic<K>(rules: &[QuadratureRule], kernel: K) -> Result<BlockMatrix>
where
    K: Fn(usize, usize, f64, f64) -> f64,
{
    let m = rules.len();
    if m == 0 {
        return Err(Error::InvalidArgument("need at least one rule".into()));
    }
    let n = rules[0].len();
    if rules.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidArgument("rules must share one size".into()));
    }
    let sqrt_w: Vec<Vec<f64>> = rules
        .iter()
        .map(|r| r.weights.iter().map(|&w| w.sqrt()).collect())
        .collect();
    let mut a = Array2::zeros((m * n, m * n));
    for i in 0..m {
        for j in 0..m {
            for p in 0..n {
                for q in 0..n {
                    let v = kernel(i, j, rules[i].nodes[p], rules[j].nodes[q]);
                    a[[i * n + p, j * n + q]] = sqrt_w[i][p] * v * sqrt_w[j][q];
                }
            }
        }
    }
    check_finite(&a)?;
    Ok(BlockMatrix { m, n, a })
}

fn check_finite(a: &Array2<f64>) -> Result<()> {
    if a.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical(
            "non-finite entry in assembled Nyström matrix".into(),
        ));
    }
    Ok(())
}

/// (Ai, Ai') cached over a node set.
pub(crate) struct AiryCache {
    pub ai: Vec<f64>,
    pub aip: Vec<f64>,
}

impl AiryCache {
    pub(crate) fn over(nodes: &[f64]) -> AiryCache {
        let mut ai = Vec::with_capacity(nodes.len());
        let mut aip = Vec::with_capacity(nodes.len());
        for &x in nodes {
            let (a, ap) = ai_unchecked(x);
            ai.push(a);
            aip.push(ap);
        }
        AiryCache { ai, aip }
    }
}

/// Unweighted equal-time Airy₂ block over one node set.
pub(crate) fn airy2_diag_block(nodes: &[f64], cache: &AiryCache) -> Array2<f64> {
    let n = nodes.len();
    let mut k = Array2::zeros((n, n));
    for p in 0..n {
        for q in 0..n {
            k[[p, q]] = kernels::airy2_equal_time(
                nodes[p],
                nodes[q],
                (cache.ai[p], cache.aip[p]),
                (cache.ai[q], cache.aip[q]),
            );
        }
    }
    k
}

/// Factor matrix B with B[x][r] = Ai(x + shift·μ_r)·√(w_r): block = B_i B_jᵀ.
fn airy_factor(nodes: &[f64], mu: &[f64], w: &[f64], reflect: bool) -> Array2<f64> {
    let mut b = Array2::zeros((nodes.len(), mu.len()));
    for (i, &x) in nodes.iter().enumerate() {
        for (r, (&m, &wr)) in mu.iter().zip(w).enumerate() {
            let arg = if reflect { x - m } else { x + m };
            b[[i, r]] = ai_unchecked(arg).0 * wr.sqrt();
        }
    }
    b
}

/// Off-diagonal Airy₂ machinery for a fixed time gap t > 0, reusable over
/// many node sets (the covariance grid shares it across a whole tensor grid).
pub(crate) struct Airy2OffDiag {
    t: f64,
    /// factor rule for the u' > u block
    future: FutureRoute,
    /// λ-rule for the u' < u block: ∫ e^{-tλ} Ai(x+λ)Ai(y+λ)
    lam: Vec<f64>,
    lam_w: Vec<f64>,
}

enum FutureRoute {
    /// half-line with e^{+tλ} minus closed-form Gaussian
    Subtract { lam: Vec<f64>, lam_w: Vec<f64> },
    /// oscillatory reflected integral on resolving panels
    Oscillatory { mu: Vec<f64>, mu_w: Vec<f64> },
}

impl Airy2OffDiag {
    /// `smin` is the least admissible space argument over both slots.
    pub(crate) fn new(t: f64, smin: f64, n_lambda: usize) -> Airy2OffDiag {
        // route decision on the worst magnitude of the Gaussian term over
        // the quadrant [smin,∞)²: corner and interior-ridge candidates
        let e_corner = kernels::gauss_exponent(t, smin, smin);
        let e_ridge = t * t * t / 3.0 - t * smin;
        let g_log_max =
            e_corner.max(e_ridge) - 0.5 * (4.0 * std::f64::consts::PI * t).ln();
        let future = if g_log_max <= 1e2f64.ln() {
            let (lam, lam_w) = kernels::halfline_lambda_rule(n_lambda, t, smin);
            FutureRoute::Subtract { lam, lam_w }
        } else {
            let (mu, mu_w) = kernels::oscillatory_mu_rule(t, smin);
            FutureRoute::Oscillatory { mu, mu_w }
        };
        let (lam, lam_w) = kernels::halfline_lambda_rule(n_lambda, -t, smin);
        Airy2OffDiag {
            t,
            future,
            lam,
            lam_w,
        }
    }

    /// Factor for the u' > u block; combine as `future_block`.
    pub(crate) fn future_factor(&self, nodes: &[f64]) -> Array2<f64> {
        match &self.future {
            FutureRoute::Subtract { lam, lam_w } => airy_factor(nodes, lam, lam_w, false),
            FutureRoute::Oscillatory { mu, mu_w } => airy_factor(nodes, mu, mu_w, true),
        }
    }

    /// Unweighted kernel block K(u, x_row; u', y_col), u' = u + t, from the
    /// slot factors.
    pub(crate) fn future_block(
        &self,
        rows: &Array2<f64>,
        cols: &Array2<f64>,
        row_nodes: &[f64],
        col_nodes: &[f64],
    ) -> Array2<f64> {
        let mut b = rows.dot(&cols.t());
        match &self.future {
            FutureRoute::Subtract { .. } => {
                for (i, &x) in row_nodes.iter().enumerate() {
                    for (j, &y) in col_nodes.iter().enumerate() {
                        b[[i, j]] -= kernels::gauss_term(self.t, x, y);
                    }
                }
                b
            }
            FutureRoute::Oscillatory { .. } => {
                b.mapv_inplace(|v| -v);
                b
            }
        }
    }

    /// Factor for the u' < u block (decaying half-line integral).
    pub(crate) fn past_factor(&self, nodes: &[f64]) -> Array2<f64> {
        airy_factor(nodes, &self.lam, &self.lam_w, false)
    }
}

fn scale_block(block: &mut Array2<f64>, row_w: &[f64], col_w: &[f64]) {
    for (i, mut row) in block.rows_mut().into_iter().enumerate() {
        let rw = row_w[i];
        for (j, v) in row.iter_mut().enumerate() {
            *v *= rw * col_w[j];
        }
    }
}

fn write_block(a: &mut Array2<f64>, n: usize, i: usize, j: usize, block: &Array2<f64>) {
    for p in 0..n {
        for q in 0..n {
            a[[i * n + p, j * n + q]] = block[[p, q]];
        }
    }
}

/// Assembles the Nyström matrix for a process problem.
pub fn assemble(problem: &JointProblem) -> Result<BlockMatrix> {
    let m = problem.times.len();
    let n = problem.n;
    let rules: Vec<QuadratureRule> = problem
        .thresholds
        .iter()
        .map(|&s| semi_infinite_rule(s, n))
        .collect::<Result<_>>()?;
    let sqrt_w: Vec<Vec<f64>> = rules
        .iter()
        .map(|r| r.weights.iter().map(|&w| w.sqrt()).collect())
        .collect();
    let mut a = Array2::zeros((m * n, m * n));

    match problem.process {
        Process::Airy2 => {
            let caches: Vec<AiryCache> =
                rules.iter().map(|r| AiryCache::over(&r.nodes)).collect();
            for i in 0..m {
                let mut block = airy2_diag_block(&rules[i].nodes, &caches[i]);
                scale_block(&mut block, &sqrt_w[i], &sqrt_w[i]);
                write_block(&mut a, n, i, i, &block);
            }
            if m == 2 {
                let t = problem.times[1] - problem.times[0];
                let smin = problem.thresholds[0].min(problem.thresholds[1]);
                let off = Airy2OffDiag::new(t, smin, 320);
                let f1 = off.future_factor(&rules[0].nodes);
                let f2 = off.future_factor(&rules[1].nodes);
                let mut b12 = off.future_block(&f1, &f2, &rules[0].nodes, &rules[1].nodes);
                scale_block(&mut b12, &sqrt_w[0], &sqrt_w[1]);
                write_block(&mut a, n, 0, 1, &b12);
                let p2 = off.past_factor(&rules[1].nodes);
                let p1 = off.past_factor(&rules[0].nodes);
                let mut b21 = p2.dot(&p1.t());
                scale_block(&mut b21, &sqrt_w[1], &sqrt_w[0]);
                write_block(&mut a, n, 1, 0, &b21);
            }
        }
        Process::Airy1 => {
            for i in 0..m {
                for j in 0..m {
                    let tau = problem.times[j] - problem.times[i];
                    let mut block = Array2::zeros((n, n));
                    for p in 0..n {
                        for q in 0..n {
                            block[[p, q]] =
                                kernels::airy1_entry(tau, rules[i].nodes[p], rules[j].nodes[q]);
                        }
                    }
                    scale_block(&mut block, &sqrt_w[i], &sqrt_w[j]);
                    write_block(&mut a, n, i, j, &block);
                }
            }
        }
    }
    check_finite(&a)?;
    Ok(BlockMatrix { m, n, a })
}

/// det(I − A) by pivoted LU.
pub fn det_i_minus(block: &BlockMatrix) -> Result<f64> {
    let d = block.a.nrows();
    let mut m = Array2::eye(d);
    m -= &block.a;
    linalg::lu_det(m)
}

/// Doubles n from 20 until two successive determinants agree to `tol`
/// (caps at n = 640). Returns the last value and the n it used.
pub fn evaluate_with_error_control(problem: &JointProblem, tol: f64) -> Result<(f64, usize)> {
    if !(tol >= 1e-14) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be >= 1e-14, got {tol}"
        )));
    }
    let mut n = 20usize;
    let mut prev = det_i_minus(&assemble(&problem.with_n(n))?)?;
    loop {
        let n2 = 2 * n;
        let value = det_i_minus(&assemble(&problem.with_n(n2))?)?;
        if (value - prev).abs() <= tol {
            return Ok((value, n2));
        }
        if n2 >= 640 {
            return Err(Error::Convergence {
                value,
                previous: prev,
                n: n2,
                tol,
            });
        }
        n = n2;
        prev = value;
    }
}
