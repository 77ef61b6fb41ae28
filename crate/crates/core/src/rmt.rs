//! Monte Carlo for stationary GOE/GUE matrix Ornstein–Uhlenbeck diffusion:
//! exact-in-distribution chain steps, largest-eigenvalue extraction, edge
//! rescaling and across-realization autocovariance estimation.
//!
//! The chain is M_0 = C_0, M_k = e^{-γΔt} M_{k-1} + sqrt(1 - e^{-2γΔt}) C_k
//! with C_k independent stationary samples, so no burn-in is needed. Each
//! realization draws from its own counter-selected stream of one ChaCha
//! generator, which makes runs reproducible and realizations independent.

use crate::eigen;
use crate::error::{Error, Result};
use ndarray::Array2;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ensemble {
    Goe,
    Gue,
}

impl std::fmt::Display for Ensemble {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Ensemble::Goe => write!(f, "goe"),
            Ensemble::Gue => write!(f, "gue"),
        }
    }
}

/// Simulation parameters for one ensemble run.
#[derive(Debug, Clone, Copy)]
pub struct EnsembleConfig {
    pub ensemble: Ensemble,
    pub n: usize,
    pub gamma: f64,
    pub dt: f64,
    /// chain steps K; the series has K+1 entries
    pub steps: usize,
    pub seed: u64,
    pub realizations: usize,
}

impl EnsembleConfig {
    pub fn new(
        ensemble: Ensemble,
        n: usize,
        gamma: f64,
        dt: f64,
        steps: usize,
        seed: u64,
        realizations: usize,
    ) -> Result<EnsembleConfig> {
        if n < 2 {
            return Err(Error::InvalidArgument("matrix dimension must be >= 2".into()));
        }
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(Error::InvalidArgument("gamma must be positive".into()));
        }
        if !(dt > 0.0) || !dt.is_finite() || dt * gamma >= 5.0 {
            return Err(Error::InvalidArgument(format!(
                "need 0 < dt with dt*gamma < 5, got dt={dt}, gamma={gamma}"
            )));
        }
        if steps < 100 {
            return Err(Error::InvalidArgument("need at least 100 steps".into()));
        }
        if realizations == 0 {
            return Err(Error::InvalidArgument("need at least one realization".into()));
        }
        Ok(EnsembleConfig {
            ensemble,
            n,
            gamma,
            dt,
            steps,
            seed,
            realizations,
        })
    }

    /// Paper defaults: γ = 1/2 and Δt = ½ N^{-1/3}.
    pub fn with_defaults(
        ensemble: Ensemble,
        n: usize,
        steps: usize,
        seed: u64,
        realizations: usize,
    ) -> Result<EnsembleConfig> {
        let dt = 0.5 * (n as f64).powf(-1.0 / 3.0);
        EnsembleConfig::new(ensemble, n, 0.5, dt, steps, seed, realizations)
    }

    /// Rescaled-time spacing Δu of the eigenvalue series.
    pub fn grid_spacing(&self) -> f64 {
        let base = self.gamma * (self.n as f64).powf(1.0 / 3.0) * self.dt;
        match self.ensemble {
            Ensemble::Gue => base,
            Ensemble::Goe => 0.5 * base,
        }
    }
}

/// A matrix sample: real symmetric (GOE) or Hermitian split into real and
/// imaginary parts (GUE, re symmetric, im antisymmetric).
#[derive(Debug, Clone)]
pub enum GaussianMatrix {
    Goe(Array2<f64>),
    Gue { re: Array2<f64>, im: Array2<f64> },
}

/// Normal variates by the Marsaglia polar method over a counter-mode
/// generator; `stream` selects an independent substream.
pub struct NormalSource {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl NormalSource {
    pub fn new(seed: u64, stream: u64) -> NormalSource {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        NormalSource { rng, spare: None }
    }

    #[inline]
    fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0)
    }

    /// One standard normal draw.
    pub fn next_normal(&mut self) -> f64 {
        if let Some(v) = self.spare.take() {
            return v;
        }
        loop {
            let v1 = 2.0 * self.uniform() - 1.0;
            let v2 = 2.0 * self.uniform() - 1.0;
            let s = v1 * v1 + v2 * v2;
            if s > 0.0 && s < 1.0 {
                let mult = (-2.0 * s.ln() / s).sqrt();
                self.spare = Some(v2 * mult);
                return v1 * mult;
            }
        }
    }
}

/// One draw from the stationary law ∝ exp(-γ Tr M²): GOE has entry
/// variances Var(M_ii) = 1/(2γ), Var(M_ij) = 1/(4γ); GUE has
/// Var(M_ii) = 1/(2γ) and Var(Re M_ij) = Var(Im M_ij) = 1/(4γ).
pub fn sample_stationary(cfg: &EnsembleConfig, src: &mut NormalSource) -> GaussianMatrix {
    let n = cfg.n;
    let sd_diag = (0.5 / cfg.gamma).sqrt();
    let sd_off = (0.25 / cfg.gamma).sqrt();
    match cfg.ensemble {
        Ensemble::Goe => {
            let mut m = Array2::zeros((n, n));
            for i in 0..n {
                m[[i, i]] = sd_diag * src.next_normal();
                for j in (i + 1)..n {
                    let v = sd_off * src.next_normal();
                    m[[i, j]] = v;
                    m[[j, i]] = v;
                }
            }
            GaussianMatrix::Goe(m)
        }
        Ensemble::Gue => {
            let mut re = Array2::zeros((n, n));
            let mut im = Array2::zeros((n, n));
            for i in 0..n {
                re[[i, i]] = sd_diag * src.next_normal();
                for j in (i + 1)..n {
                    let x = sd_off * src.next_normal();
                    let y = sd_off * src.next_normal();
                    re[[i, j]] = x;
                    re[[j, i]] = x;
                    im[[i, j]] = y;
                    im[[j, i]] = -y;
                }
            }
            GaussianMatrix::Gue { re, im }
        }
    }
}

/// Exact stationary OU transition M ← e^{-γΔt} M + sqrt(1-e^{-2γΔt}) C.
pub fn ou_step(prev: &GaussianMatrix, cfg: &EnsembleConfig, src: &mut NormalSource) -> GaussianMatrix {
    let a = (-cfg.gamma * cfg.dt).exp();
    let b = (1.0 - a * a).sqrt();
    let fresh = sample_stationary(cfg, src);
    match (prev, fresh) {
        (GaussianMatrix::Goe(m), GaussianMatrix::Goe(c)) => GaussianMatrix::Goe(a * m + b * &c),
        (GaussianMatrix::Gue { re, im }, GaussianMatrix::Gue { re: cre, im: cim }) => {
            GaussianMatrix::Gue {
                re: a * re + b * &cre,
                im: a * im + b * &cim,
            }
        }
        _ => unreachable!("ensemble mismatch between chain and sampler"),
    }
}

fn hermiticity_defect(m: &GaussianMatrix) -> (f64, f64) {
    // (defect, scale)
    match m {
        GaussianMatrix::Goe(a) => {
            let mut defect = 0.0f64;
            let mut scale = 0.0f64;
            for i in 0..a.nrows() {
                for j in 0..a.ncols() {
                    defect = defect.max((a[[i, j]] - a[[j, i]]).abs());
                    scale = scale.max(a[[i, j]].abs());
                }
            }
            (defect, scale)
        }
        GaussianMatrix::Gue { re, im } => {
            let mut defect = 0.0f64;
            let mut scale = 0.0f64;
            for i in 0..re.nrows() {
                for j in 0..re.ncols() {
                    defect = defect.max((re[[i, j]] - re[[j, i]]).abs());
                    defect = defect.max((im[[i, j]] + im[[j, i]]).abs());
                    scale = scale.max(re[[i, j]].abs().max(im[[i, j]].abs()));
                }
            }
            (defect, scale)
        }
    }
}

fn largest_eigenvalue_unchecked(m: &GaussianMatrix) -> f64 {
    match m {
        GaussianMatrix::Goe(a) => {
            let mut work = a.clone();
            let (d, e) = eigen_tridiag(&mut work);
            eigen::largest_from_tridiag(&d, &e)
        }
        GaussianMatrix::Gue { re, im } => {
            // embed A + iB as [[A, -B],[B, A]]: same spectrum, doubled
            let n = re.nrows();
            let mut big = Array2::zeros((2 * n, 2 * n));
            for i in 0..n {
                for j in 0..n {
                    big[[i, j]] = re[[i, j]];
                    big[[n + i, n + j]] = re[[i, j]];
                    big[[i, n + j]] = -im[[i, j]];
                    big[[n + i, j]] = im[[i, j]];
                }
            }
            let (d, e) = eigen_tridiag(&mut big);
            eigen::largest_from_tridiag(&d, &e)
        }
    }
}

fn eigen_tridiag(a: &mut Array2<f64>) -> (Vec<f64>, Vec<f64>) {
    crate::eigen::tridiagonalize(a)
}

/// Largest eigenvalue, validating (anti)symmetry to 1e-12 relative first.
pub fn largest_eigenvalue(m: &GaussianMatrix) -> Result<f64> {
    let (defect, scale) = hermiticity_defect(m);
    if defect > 1e-12 * scale.max(1e-300) {
        return Err(Error::InvalidArgument(format!(
            "matrix is not symmetric/Hermitian: defect {defect:e} at scale {scale:e}"
        )));
    }
    Ok(largest_eigenvalue_unchecked(m))
}

/// A rescaled largest-eigenvalue time series on an equally spaced u-grid.
#[derive(Debug, Clone)]
pub struct EigenSeries {
    pub ensemble: Ensemble,
    pub u_grid: Vec<f64>,
    pub values: Vec<f64>,
    pub seed: u64,
    pub realization: u64,
}

/// Runs one chain: K steps from a stationary start, largest eigenvalue each
/// step, then the ensemble's edge rescaling. Deterministic given
/// (seed, realization).
pub fn run_chain(cfg: &EnsembleConfig, realization: u64) -> Result<EigenSeries> {
    let mut src = NormalSource::new(cfg.seed, realization + 1);
    let nf = cfg.n as f64;
    let (shift, spread) = match cfg.ensemble {
        Ensemble::Gue => (
            (2.0 * nf / cfg.gamma).sqrt(),
            (2.0 * cfg.gamma).sqrt() * nf.powf(1.0 / 6.0),
        ),
        Ensemble::Goe => (
            (nf / cfg.gamma).sqrt(),
            cfg.gamma.sqrt() * nf.powf(1.0 / 6.0),
        ),
    };
    let du = cfg.grid_spacing();
    let mut m = sample_stationary(cfg, &mut src);
    let mut values = Vec::with_capacity(cfg.steps + 1);
    values.push(spread * (largest_eigenvalue_unchecked(&m) - shift));
    for _ in 0..cfg.steps {
        m = ou_step(&m, cfg, &mut src);
        values.push(spread * (largest_eigenvalue_unchecked(&m) - shift));
    }
    let u_grid = (0..=cfg.steps).map(|k| k as f64 * du).collect();
    Ok(EigenSeries {
        ensemble: cfg.ensemble,
        u_grid,
        values,
        seed: cfg.seed,
        realization,
    })
}

/// All realizations of a config, in parallel, ordered by realization index.
pub fn run_realizations(cfg: &EnsembleConfig) -> Result<Vec<EigenSeries>> {
    (0..cfg.realizations as u64)
        .into_par_iter()
        .map(|r| run_chain(cfg, r))
        .collect()
}

/// Autocovariance estimate across realizations.
#[derive(Debug, Clone)]
pub struct AutoCovEstimate {
    pub lags: Vec<f64>,
    pub cov: Vec<f64>,
    /// standard error across realizations; None when only one realization
    pub stderr: Option<Vec<f64>>,
}

/// Biased (1/len) empirical autocovariance of one series.
fn series_autocov(values: &[f64], max_lag: usize) -> Vec<f64> {
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    let centered: Vec<f64> = values.iter().map(|v| v - mean).collect();
    (0..=max_lag)
        .map(|l| {
            let mut acc = 0.0;
            for k in 0..(n - l) {
                acc += centered[k] * centered[k + l];
            }
            acc / n as f64
        })
        .collect()
}

/// Point estimate = mean over realizations; stderr = sd/√R.
pub fn autocovariance(series: &[EigenSeries], max_lag: usize) -> Result<AutoCovEstimate> {
    if series.is_empty() {
        return Err(Error::InvalidArgument("need at least one series".into()));
    }
    let first = &series[0];
    if max_lag >= first.values.len() {
        return Err(Error::InvalidArgument(format!(
            "max_lag {max_lag} exceeds series length {}",
            first.values.len()
        )));
    }
    for s in series {
        if s.ensemble != first.ensemble || s.u_grid.len() != first.u_grid.len() {
            return Err(Error::InvalidArgument(
                "all series must share ensemble and grid".into(),
            ));
        }
    }
    let per: Vec<Vec<f64>> = series
        .par_iter()
        .map(|s| series_autocov(&s.values, max_lag))
        .collect();
    let r = per.len();
    let mut cov = vec![0.0; max_lag + 1];
    for run in &per {
        for (c, v) in cov.iter_mut().zip(run) {
            *c += v;
        }
    }
    for c in cov.iter_mut() {
        *c /= r as f64;
    }
    let stderr = if r >= 2 {
        let mut se = vec![0.0; max_lag + 1];
        for run in &per {
            for (s, (v, m)) in se.iter_mut().zip(run.iter().zip(&cov)) {
                *s += (v - m) * (v - m);
            }
        }
        Some(
            se.into_iter()
                .map(|s| (s / (r - 1) as f64).sqrt() / (r as f64).sqrt())
                .collect(),
        )
    } else {
        None
    };
    let du = first.u_grid[1] - first.u_grid[0];
    Ok(AutoCovEstimate {
        lags: (0..=max_lag).map(|l| l as f64 * du).collect(),
        cov,
        stderr,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::jacobi_eigenvalues;

    fn goe_cfg(n: usize, dt: f64, steps: usize, seed: u64) -> EnsembleConfig {
        EnsembleConfig {
            ensemble: Ensemble::Goe,
            n,
            gamma: 0.5,
            dt,
            steps,
            seed,
            realizations: 1,
        }
    }

    #[test]
    fn config_validation() {
        assert!(EnsembleConfig::new(Ensemble::Goe, 1, 0.5, 0.1, 1000, 1, 1).is_err());
        assert!(EnsembleConfig::new(Ensemble::Goe, 8, -0.5, 0.1, 1000, 1, 1).is_err());
        assert!(EnsembleConfig::new(Ensemble::Goe, 8, 0.5, 20.0, 1000, 1, 1).is_err());
        assert!(EnsembleConfig::new(Ensemble::Goe, 8, 0.5, 0.1, 50, 1, 1).is_err());
        assert!(EnsembleConfig::with_defaults(Ensemble::Gue, 64, 1000, 1, 4).is_ok());
    }

    #[test]
    fn samples_are_exactly_symmetric() {
        let cfg = EnsembleConfig::with_defaults(Ensemble::Goe, 16, 100, 7, 1).unwrap();
        let mut src = NormalSource::new(7, 0);
        match sample_stationary(&cfg, &mut src) {
            GaussianMatrix::Goe(m) => {
                for i in 0..16 {
                    for j in 0..16 {
                        assert_eq!(m[[i, j]], m[[j, i]]);
                    }
                }
            }
            _ => panic!(),
        }
        let cfg = EnsembleConfig::with_defaults(Ensemble::Gue, 12, 100, 7, 1).unwrap();
        match sample_stationary(&cfg, &mut src) {
            GaussianMatrix::Gue { re, im } => {
                for i in 0..12 {
                    for j in 0..12 {
                        assert_eq!(re[[i, j]], re[[j, i]]);
                        assert_eq!(im[[i, j]], -im[[j, i]]);
                    }
                }
            }
            _ => panic!(),
        }
    }

    #[test]
    fn stationary_entry_variances() {
        // gamma = 1/2: Var(M_11) = 1, Var(M_12) = 1/2 (GOE)
        let cfg = EnsembleConfig::with_defaults(Ensemble::Goe, 4, 100, 20240, 1).unwrap();
        let mut src = NormalSource::new(20240, 0);
        let draws = 100_000;
        let (mut s11, mut s11_2, mut s12_2) = (0.0, 0.0, 0.0);
        for _ in 0..draws {
            if let GaussianMatrix::Goe(m) = sample_stationary(&cfg, &mut src) {
                s11 += m[[0, 0]];
                s11_2 += m[[0, 0]] * m[[0, 0]];
                s12_2 += m[[0, 1]] * m[[0, 1]];
            }
        }
        let var11 = s11_2 / draws as f64 - (s11 / draws as f64).powi(2);
        let var12 = s12_2 / draws as f64;
        assert!((var11 - 1.0).abs() < 0.02, "Var(M11) = {var11}");
        assert!((var12 - 0.5).abs() < 0.01, "Var(M12) = {var12}");
    }

    #[test]
    fn trace_second_moment_matches_entry_variances() {
        // E[Tr M²] = N/(2γ) + N(N-1)/(4γ) (GOE), + N(N-1)/(2γ) off-part (GUE)
        let n = 8;
        let draws = 10_000;
        for (ensemble, expect, sd) in [
            (Ensemble::Goe, 8.0 + 28.0, (72.0f64 / draws as f64).sqrt()),
            (Ensemble::Gue, 8.0 + 56.0, (128.0f64 / draws as f64).sqrt()),
        ] {
            let cfg = EnsembleConfig::with_defaults(ensemble, n, 100, 99, 1).unwrap();
            let mut src = NormalSource::new(99, 0);
            let mut acc = 0.0;
            for _ in 0..draws {
                acc += match sample_stationary(&cfg, &mut src) {
                    GaussianMatrix::Goe(m) => m.iter().map(|v| v * v).sum::<f64>(),
                    GaussianMatrix::Gue { re, im } => {
                        re.iter().map(|v| v * v).sum::<f64>()
                            + im.iter().map(|v| v * v).sum::<f64>()
                    }
                };
            }
            let mean = acc / draws as f64;
            assert!(
                (mean - expect).abs() <= 3.5 * sd,
                "{ensemble}: Tr M² mean {mean} vs {expect} (sd {sd})"
            );
        }
    }

    #[test]
    fn ou_step_zero_dt_is_identity() {
        let cfg = goe_cfg(6, 0.0, 100, 3);
        let mut src = NormalSource::new(3, 0);
        let m = sample_stationary(&cfg, &mut src);
        let stepped = ou_step(&m, &cfg, &mut src);
        match (&m, &stepped) {
            (GaussianMatrix::Goe(a), GaussianMatrix::Goe(b)) => {
                for (x, y) in a.iter().zip(b.iter()) {
                    assert_eq!(x, y);
                }
            }
            _ => panic!(),
        }
    }

    #[test]
    fn ou_step_huge_dt_decorrelates() {
        let cfg = goe_cfg(4, 2000.0, 100, 5);
        let mut src = NormalSource::new(5, 0);
        let trials = 10_000;
        let mut sum_xy = 0.0;
        for _ in 0..trials {
            let m = sample_stationary(&cfg, &mut src);
            let s = ou_step(&m, &cfg, &mut src);
            if let (GaussianMatrix::Goe(a), GaussianMatrix::Goe(b)) = (&m, &s) {
                sum_xy += a[[0, 0]] * b[[0, 0]];
            }
        }
        // Var(M11) = 1 at gamma = 1/2; 3σ band for the empirical correlation
        let corr = sum_xy / trials as f64;
        assert!(corr.abs() <= 3.0 / (trials as f64).sqrt(), "corr {corr}");
    }

    #[test]
    fn ou_step_preserves_variance() {
        let cfg = goe_cfg(4, 0.3, 100, 6);
        let mut src = NormalSource::new(6, 0);
        let trials = 50_000;
        let mut acc = 0.0;
        for _ in 0..trials {
            let m = sample_stationary(&cfg, &mut src);
            let s = ou_step(&m, &cfg, &mut src);
            if let GaussianMatrix::Goe(b) = s {
                acc += b[[0, 0]] * b[[0, 0]];
            }
        }
        let var = acc / trials as f64;
        let sd = (2.0f64 / trials as f64).sqrt();
        assert!((var - 1.0).abs() <= 3.0 * sd, "stepped Var(M11) = {var}");
    }

    #[test]
    fn largest_eigenvalue_validates_and_computes() {
        let m = GaussianMatrix::Goe(Array2::from_diag(&ndarray::arr1(&[1.0, 2.0, 3.0])));
        assert!((largest_eigenvalue(&m).unwrap() - 3.0).abs() < 1e-12);
        let mut bad = Array2::zeros((2, 2));
        bad[[0, 1]] = 1.0;
        assert!(largest_eigenvalue(&GaussianMatrix::Goe(bad)).is_err());
    }

    #[test]
    fn gue_embedding_matches_jacobi() {
        let mut src = NormalSource::new(42, 0);
        let cfg = EnsembleConfig::with_defaults(Ensemble::Gue, 10, 100, 42, 1).unwrap();
        let m = sample_stationary(&cfg, &mut src);
        let top = largest_eigenvalue(&m).unwrap();
        if let GaussianMatrix::Gue { re, im } = &m {
            let n = re.nrows();
            let mut big = Array2::zeros((2 * n, 2 * n));
            for i in 0..n {
                for j in 0..n {
                    big[[i, j]] = re[[i, j]];
                    big[[n + i, n + j]] = re[[i, j]];
                    big[[i, n + j]] = -im[[i, j]];
                    big[[n + i, j]] = im[[i, j]];
                }
            }
            let eigs = jacobi_eigenvalues(&big).unwrap();
            assert!((top - eigs[2 * n - 1]).abs() < 1e-10);
        }
    }

    #[test]
    fn chains_are_deterministic_given_seed() {
        let cfg = EnsembleConfig::with_defaults(Ensemble::Gue, 8, 120, 31415, 2).unwrap();
        let a = run_chain(&cfg, 0).unwrap();
        let b = run_chain(&cfg, 0).unwrap();
        assert_eq!(a.values, b.values);
        let c = run_chain(&cfg, 1).unwrap();
        assert_ne!(a.values, c.values);
        assert_eq!(a.u_grid[1] - a.u_grid[0], cfg.grid_spacing());
    }

    #[test]
    fn autocovariance_constant_series_is_zero() {
        let s = EigenSeries {
            ensemble: Ensemble::Goe,
            u_grid: (0..200).map(|k| k as f64 * 0.1).collect(),
            values: vec![2.5; 200],
            seed: 0,
            realization: 0,
        };
        let est = autocovariance(&[s], 10).unwrap();
        assert!(est.cov.iter().all(|&c| c.abs() < 1e-30));
        assert!(est.stderr.is_none());
    }

    #[test]
    fn autocovariance_iid_normal() {
        let len = 30_000usize;
        let r_count = 10u64;
        let make = |r: u64| {
            let mut src = NormalSource::new(777, r);
            EigenSeries {
                ensemble: Ensemble::Goe,
                u_grid: (0..len).map(|k| k as f64).collect(),
                values: (0..len).map(|_| src.next_normal()).collect(),
                seed: 777,
                realization: r,
            }
        };
        let series: Vec<_> = (0..r_count).map(make).collect();
        let est = autocovariance(&series, 5).unwrap();
        let se = est.stderr.unwrap();
        // theoretical floors: sd(ĉ0) = √(2/len), sd(ĉl) = 1/√len per run
        let floor0 = (2.0 / len as f64).sqrt() / (r_count as f64).sqrt();
        let floor = (1.0 / len as f64).sqrt() / (r_count as f64).sqrt();
        assert!(
            (est.cov[0] - 1.0).abs() <= 3.5 * se[0].max(floor0),
            "{}",
            est.cov[0]
        );
        for l in 1..=5 {
            assert!(
                est.cov[l].abs() <= 3.5 * se[l].max(floor),
                "lag {l}: {}",
                est.cov[l]
            );
        }
    }

    #[test]
    fn autocovariance_ar1_closed_form() {
        // X_t = φ X_{t-1} + ε_t: autocov(k) = φ^k/(1-φ²)
        let phi = 0.9;
        let make = |r: u64| {
            let mut src = NormalSource::new(4242, r);
            let mut x = 0.0;
            let mut values = Vec::with_capacity(60_000);
            for _ in 0..500 {
                x = phi * x + src.next_normal(); // spin into stationarity
            }
            for _ in 0..60_000 {
                x = phi * x + src.next_normal();
                values.push(x);
            }
            EigenSeries {
                ensemble: Ensemble::Goe,
                u_grid: (0..60_000).map(|k| k as f64).collect(),
                values,
                seed: 4242,
                realization: r,
            }
        };
        let series: Vec<_> = (0..8).map(make).collect();
        let est = autocovariance(&series, 10).unwrap();
        let se = est.stderr.unwrap();
        for k in 0..=10 {
            let expect = phi.powi(k as i32) / (1.0 - phi * phi);
            let band = 3.0 * se[k].max(1e-4);
            assert!(
                (est.cov[k] - expect).abs() <= band,
                "lag {k}: {} vs {expect} ± {band}",
                est.cov[k]
            );
        }
    }

    #[test]
    fn chain_halves_agree_in_variance() {
        let cfg = EnsembleConfig::with_defaults(Ensemble::Goe, 8, 20_000, 2024, 1).unwrap();
        let s = run_chain(&cfg, 0).unwrap();
        let half = s.values.len() / 2;
        let var = |v: &[f64]| {
            let m = v.iter().sum::<f64>() / v.len() as f64;
            v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / v.len() as f64
        };
        let (v1, v2) = (var(&s.values[..half]), var(&s.values[half..]));
        let ratio = v1 / v2;
        assert!((0.75..=1.33).contains(&ratio), "half variances {v1} vs {v2}");
    }

    #[test]
    fn autocovariance_input_validation() {
        assert!(autocovariance(&[], 5).is_err());
        let cfg = EnsembleConfig::with_defaults(Ensemble::Goe, 4, 100, 1, 1).unwrap();
        let s = run_chain(&cfg, 0).unwrap();
        assert!(autocovariance(&[s.clone()], 1000).is_err());
        let est = autocovariance(&[s], 5).unwrap();
        assert!(est.stderr.is_none(), "single realization has no stderr");
    }
}
