//! Largest eigenvalue of dense symmetric matrices: Householder
//! tridiagonalization followed by bisection on Sturm sequence counts.
//! Only the top eigenvalue is bracketed, so each Monte Carlo step costs one
//! O(n³) reduction and an O(n log ε) bisection.

use crate::error::{Error, Result};
use ndarray::Array2;

/// Reduces a symmetric matrix to tridiagonal form (diagonal, subdiagonal)
/// by Householder reflections; the input is consumed as workspace. The hot
/// loops run over contiguous rows of the flat storage — this sits inside
/// every Monte Carlo step.
pub(crate) fn tridiagonalize(m: &mut Array2<f64>) -> (Vec<f64>, Vec<f64>) {
    let n = m.nrows();
    let a = m.as_slice_mut().expect("contiguous row-major matrix");
    let mut e = vec![0.0; n.saturating_sub(1)];
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];
    for k in 0..n.saturating_sub(2) {
        // Householder vector for column k below the diagonal
        let mut norm2 = 0.0;
        for i in (k + 1)..n {
            v[i] = a[i * n + k];
            norm2 += v[i] * v[i];
        }
        let norm = norm2.sqrt();
        if norm == 0.0 {
            e[k] = 0.0;
            continue;
        }
        let alpha = if v[k + 1] >= 0.0 { -norm } else { norm };
        let v0 = v[k + 1] - alpha;
        v[k + 1] = v0;
        let kappa = -alpha * v0;
        if kappa == 0.0 {
            e[k] = alpha;
            continue;
        }
        let beta = 1.0 / kappa;
        // p = beta * A v over the trailing block
        for i in (k + 1)..n {
            let row = &a[i * n + k + 1..i * n + n];
            let mut s = 0.0;
            for (aij, vj) in row.iter().zip(&v[k + 1..n]) {
                s += aij * vj;
            }
            p[i] = beta * s;
        }
        // w = p - (beta/2) (vᵀp) v
        let vtp: f64 = ((k + 1)..n).map(|i| v[i] * p[i]).sum();
        let scale = 0.5 * beta * vtp;
        for i in (k + 1)..n {
            p[i] -= scale * v[i];
        }
        // A ← A − v wᵀ − w vᵀ, row by row
        for i in (k + 1)..n {
            let (vi, pi) = (v[i], p[i]);
            let row = &mut a[i * n + k + 1..i * n + n];
            for ((aij, vj), pj) in row.iter_mut().zip(&v[k + 1..n]).zip(&p[k + 1..n]) {
                *aij -= vi * pj + pi * vj;
            }
        }
        e[k] = alpha;
    }
    if n >= 2 {
        e[n - 2] = a[(n - 1) * n + n - 2];
    }
    let d = (0..n).map(|i| a[i * n + i]).collect();
    (d, e)
}

/// Number of eigenvalues of the tridiagonal matrix strictly below x,
/// via the LDLᵀ Sturm recurrence with a pivot floor.
fn count_below(d: &[f64], e: &[f64], x: f64, pivmin: f64) -> usize {
    let mut count = 0usize;
    let mut q = d[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..d.len() {
        let denom = if q.abs() < pivmin {
            -pivmin
        } else {
            q
        };
        q = d[i] - x - e[i - 1] * e[i - 1] / denom;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Largest eigenvalue of a (d, e) tridiagonal pair by bisection.
pub(crate) fn largest_from_tridiag(d: &[f64], e: &[f64]) -> f64 {
    let n = d.len();
    if n == 1 {
        return d[0];
    }
    // Gershgorin bracket
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i == 0 {
            e[0].abs()
        } else if i == n - 1 {
            e[n - 2].abs()
        } else {
            e[i - 1].abs() + e[i].abs()
        };
        lo = lo.min(d[i] - r);
        hi = hi.max(d[i] + r);
    }
    let scale = lo.abs().max(hi.abs()).max(1e-300);
    let pivmin = 1e-292 * scale.max(1.0);
    let mut lo = lo - 1e-12 * scale;
    let mut hi = hi + 1e-12 * scale;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if count_below(d, e, mid, pivmin) == n {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-14 * scale {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Largest eigenvalue of a dense symmetric matrix.
pub fn largest_eigenvalue_sym(a: &Array2<f64>) -> Result<f64> {
    let n = a.nrows();
    if n != a.ncols() || n == 0 {
        return Err(Error::InvalidArgument(
            "matrix must be square and nonempty".into(),
        ));
    }
    let mut work = a.clone();
    let (d, e) = tridiagonalize(&mut work);
    Ok(largest_from_tridiag(&d, &e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::jacobi_eigenvalues;
    use ndarray::array;

    #[test]
    fn diagonal_matrix() {
        let m = Array2::from_diag(&ndarray::arr1(&[1.0, 2.0, 3.0]));
        assert!((largest_eigenvalue_sym(&m).unwrap() - 3.0).abs() < 1e-13);
    }

    #[test]
    fn two_by_two_closed_form() {
        // [[a,b],[b,d]] largest = (a+d)/2 + sqrt(((a-d)/2)² + b²)
        let (a, b, d) = (1.0f64, 2.0f64, -1.0f64);
        let m = array![[a, b], [b, d]];
        let expect = 0.5 * (a + d) + (((a - d) / 2.0).powi(2) + b * b).sqrt();
        assert!((expect - 5f64.sqrt()).abs() < 1e-15);
        assert!((largest_eigenvalue_sym(&m).unwrap() - expect).abs() < 1e-13);
    }

    #[test]
    fn matches_jacobi_on_random_symmetric() {
        // deterministic congruential fill
        let mut state = 88172645463325252u64;
        let mut rand = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for trial in 0..5 {
            let n = 50;
            let mut m = Array2::zeros((n, n));
            for i in 0..n {
                for j in 0..=i {
                    let v = rand();
                    m[[i, j]] = v;
                    m[[j, i]] = v;
                }
            }
            let top = largest_eigenvalue_sym(&m).unwrap();
            let eigs = jacobi_eigenvalues(&m).unwrap();
            let reference = eigs[n - 1];
            assert!(
                (top - reference).abs() <= 1e-10 * reference.abs().max(1.0),
                "trial {trial}: {top} vs {reference}"
            );
        }
    }

    #[test]
    fn handles_already_tridiagonal() {
        let m = array![
            [2.0, 1.0, 0.0, 0.0],
            [1.0, 2.0, 1.0, 0.0],
            [0.0, 1.0, 2.0, 1.0],
            [0.0, 0.0, 1.0, 2.0]
        ];
        // eigenvalues 2 + 2cos(kπ/5)
        let expect = 2.0 + 2.0 * (std::f64::consts::PI / 5.0).cos();
        assert!((largest_eigenvalue_sym(&m).unwrap() - expect).abs() < 1e-12);
    }
}
