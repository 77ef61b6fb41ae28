//! Dense determinants and a Jacobi eigensolver used for cross-checks.

use crate::error::{Error, Result};
use ndarray::Array2;

/// det(M) by LU with partial pivoting, accumulating sign and log|det| so
/// badly scaled products neither overflow nor underflow mid-elimination.
pub fn lu_det(m: Array2<f64>) -> Result<f64> {
    let (sign, log_abs) = lu_sign_log_det(m)?;
    if sign == 0.0 {
        return Ok(0.0);
    }
    Ok(if log_abs < -745.0 {
        0.0
    } else if log_abs > 709.0 {
        return Err(Error::Numerical(format!(
            "determinant overflows: log|det| = {log_abs}"
        )));
    } else {
        sign * log_abs.exp()
    })
}

/// (sign, log|det|) of M via LU with partial pivoting.
pub fn lu_sign_log_det(mut m: Array2<f64>) -> Result<(f64, f64)> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::InvalidArgument("matrix must be square".into()));
    }
    let a = m
        .as_slice_mut()
        .ok_or_else(|| Error::InvalidArgument("matrix must be contiguous".into()))?;
    let mut sign = 1.0f64;
    let mut log_abs = 0.0f64;
    for k in 0..n {
        let mut p = k;
        let mut best = a[k * n + k].abs();
        for i in (k + 1)..n {
            let v = a[i * n + k].abs();
            if v > best {
                best = v;
                p = i;
            }
        }
        if !best.is_finite() {
            return Err(Error::Numerical(
                "non-finite pivot during elimination".into(),
            ));
        }
        if best == 0.0 {
            return Ok((0.0, f64::NEG_INFINITY));
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            sign = -sign;
        }
        let piv = a[k * n + k];
        sign *= piv.signum();
        log_abs += piv.abs().ln();
        for i in (k + 1)..n {
            let f = a[i * n + k] / piv;
            if f != 0.0 {
                let (row_k, row_i) = {
                    let (lo, hi) = a.split_at_mut(i * n);
                    (&lo[k * n..k * n + n], &mut hi[..n])
                };
                for j in (k + 1)..n {
                    row_i[j] -= f * row_k[j];
                }
            }
            a[i * n + k] = 0.0;
        }
    }
    Ok((sign, log_abs))
}

/// det(M) after power-of-two row and column equilibration; the scalings are
/// exact, so this is the same determinant reached through a different
/// elimination — a round-off cross-check for graded matrices.
pub fn lu_det_equilibrated(mut m: Array2<f64>) -> Result<f64> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::InvalidArgument("matrix must be square".into()));
    }
    let mut log2_scale = 0.0f64;
    for i in 0..n {
        let rmax = m.row(i).iter().fold(0.0f64, |acc, &v| acc.max(v.abs()));
        if rmax > 0.0 && rmax.is_finite() {
            let e = -rmax.log2().round();
            if e != 0.0 {
                let f = (e as i32).clamp(-1000, 1000);
                let scale = 2f64.powi(f);
                m.row_mut(i).mapv_inplace(|v| v * scale);
                log2_scale += f as f64;
            }
        }
    }
    for j in 0..n {
        let cmax = m.column(j).iter().fold(0.0f64, |acc, &v| acc.max(v.abs()));
        if cmax > 0.0 && cmax.is_finite() {
            let e = -cmax.log2().round();
            if e != 0.0 {
                let f = (e as i32).clamp(-1000, 1000);
                let scale = 2f64.powi(f);
                m.column_mut(j).mapv_inplace(|v| v * scale);
                log2_scale += f as f64;
            }
        }
    }
    let (sign, log_abs) = lu_sign_log_det(m)?;
    if sign == 0.0 {
        return Ok(0.0);
    }
    let log_unscaled = log_abs - log2_scale * std::f64::consts::LN_2;
    Ok(if log_unscaled < -745.0 {
        0.0
    } else {
        sign * log_unscaled.exp()
    })
}

/// All eigenvalues of a symmetric matrix by the cyclic Jacobi method,
/// ascending. Deliberately independent of the Householder/Sturm solver so
/// the two can check each other.
pub fn jacobi_eigenvalues(m: &Array2<f64>) -> Result<Vec<f64>> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::InvalidArgument("matrix must be square".into()));
    }
    let mut a = m.clone();
    let fro: f64 = a.iter().map(|v| v * v).sum::<f64>().sqrt();
    let tol = 1e-14 * fro.max(f64::MIN_POSITIVE);
    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[[p, q]] * a[[p, q]];
            }
        }
        if off.sqrt() <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[[p, q]];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let theta = (a[[q, q]] - a[[p, p]]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[[k, p]];
                    let akq = a[[k, q]];
                    a[[k, p]] = c * akp - s * akq;
                    a[[k, q]] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[[p, k]];
                    let aqk = a[[q, k]];
                    a[[p, k]] = c * apk - s * aqk;
                    a[[q, k]] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eigs: Vec<f64> = (0..n).map(|i| a[[i, i]]).collect();
    eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(eigs)
}
