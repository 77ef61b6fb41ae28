//! One- and two-point distribution functions of the Airy₁ and Airy₂
//! processes, built on the Fredholm engine.
//!
//! Both processes are stationary, so every two-point query is canonicalized
//! to the time pair {0, u}. Thresholds at "infinity" are realized as s = 40,
//! where the kernels have decayed below machine precision.

use crate::error::{Error, Result};
use crate::fredholm::{evaluate_with_error_control, JointProblem};
use crate::kernels::Process;

/// A two-point CDF query P(A(0) <= s1, A(u) <= s2).
#[derive(Debug, Clone, Copy)]
pub struct TwoPointQuery {
    pub process: Process,
    pub u: f64,
    pub s1: f64,
    pub s2: f64,
    pub tol: f64,
}

impl TwoPointQuery {
    pub fn new(process: Process, u: f64, s1: f64, s2: f64, tol: f64) -> Result<TwoPointQuery> {
        if !u.is_finite() || u < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "time separation must be finite and >= 0, got {u}"
            )));
        }
        if !s1.is_finite() || !s2.is_finite() {
            return Err(Error::InvalidArgument(
                "thresholds must be finite".into(),
            ));
        }
        if !(1e-14..=1e-4).contains(&tol) {
            return Err(Error::InvalidArgument(format!(
                "tolerance must lie in [1e-14, 1e-4], got {tol}"
            )));
        }
        Ok(TwoPointQuery {
            process,
            u,
            s1,
            s2,
            tol,
        })
    }
}

fn clip_probability(raw: f64) -> f64 {
    if raw < -1e-8 || raw > 1.0 + 1e-8 {
        log::warn!("determinant {raw} escapes [0,1] beyond round-off");
    }
    raw.clamp(0.0, 1.0)
}

/// P(A(0) <= s) to within `tol`.
pub fn one_point_cdf(process: Process, s: f64, tol: f64) -> Result<f64> {
    if !s.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "threshold must be finite, got {s}"
        )));
    }
    let problem = JointProblem::one_point(process, s, 20)?;
    let (raw, _) = evaluate_with_error_control(&problem, tol)?;
    Ok(clip_probability(raw))
}

/// P(A(0) <= s1, A(u) <= s2) to within the query tolerance.
pub fn two_point_cdf(query: &TwoPointQuery) -> Result<f64> {
    if query.u == 0.0 {
        return one_point_cdf(query.process, query.s1.min(query.s2), query.tol);
    }
    let problem = JointProblem::two_point(query.process, query.u, query.s1, query.s2, 20)?;
    let (raw, _) = evaluate_with_error_control(&problem, query.tol)?;
    Ok(clip_probability(raw))
}
