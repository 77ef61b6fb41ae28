//! Numerical health checks behind the CLI `selftest` subcommand: quadrature
//! exactness, Airy reference values, the rank-one determinant oracle and the
//! kernel subtraction-identity validation.

use crate::airy::airy_ai;
use crate::fredholm::{assemble_generic, det_i_minus};
use crate::kernels;
use crate::quadrature::{clenshaw_curtis, gauss_legendre, semi_infinite_rule};

#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, err: f64, tol: f64) -> Check {
    Check {
        name,
        passed: err.is_finite() && err <= tol,
        detail: format!("error {err:.2e} (tolerance {tol:.0e})"),
    }
}

pub fn quadrature_checks() -> Vec<Check> {
    let mut out = Vec::new();
    let gl = gauss_legendre(12, 0.0, 1.0).expect("static rule");
    out.push(check(
        "gauss-legendre degree-23 exactness",
        (gl.integrate(|x| x.powi(23)) - 1.0 / 24.0).abs(),
        1e-14,
    ));
    let cc = clenshaw_curtis(100, -1.0, 1.0).expect("static rule");
    let exact = std::f64::consts::E - 1.0 / std::f64::consts::E;
    out.push(check(
        "clenshaw-curtis e^x on [-1,1]",
        (cc.integrate(f64::exp) - exact).abs(),
        1e-12,
    ));
    let semi = semi_infinite_rule(0.0, 40).expect("static rule");
    out.push(check(
        "transformed rule on e^{-x}",
        (semi.integrate(|x| (-x).exp()) - 1.0).abs(),
        1e-10,
    ));
    out
}

/// Airy spot checks against frozen references, with the evaluator
/// injectable so a perturbed build is detectable (negative control).
pub fn airy_checks_with(eval: impl Fn(f64) -> (f64, f64)) -> Vec<Check> {
    let refs = [
        ("Ai(0)", 0.0, 0.35502805388781724),
        ("Ai(1)", 1.0, 0.13529241631288141),
        ("Ai(-2)", -2.0, 0.22740742820168558),
    ];
    let mut out = Vec::new();
    for (name, x, expect) in refs {
        let (ai, _) = eval(x);
        out.push(check(
            match name {
                "Ai(0)" => "airy value at 0",
                "Ai(1)" => "airy value at 1",
                _ => "airy value at -2",
            },
            ((ai - expect) / expect).abs(),
            1e-12,
        ));
    }
    let (_, aip0) = eval(0.0);
    out.push(check(
        "airy derivative at 0",
        ((aip0 + 0.25881940379280680) / 0.25881940379280680).abs(),
        1e-12,
    ));
    out
}

pub fn fredholm_checks() -> Vec<Check> {
    let mut out = Vec::new();
    let rule = semi_infinite_rule(0.0, 40).expect("static rule");
    let b = assemble_generic(std::slice::from_ref(&rule), |_, _, x, y| (-(x + y)).exp())
        .expect("assembly");
    out.push(check(
        "rank-one determinant oracle",
        (det_i_minus(&b).expect("det") - 0.5).abs(),
        1e-12,
    ));
    let z = assemble_generic(std::slice::from_ref(&rule), |_, _, _, _| 0.0).expect("assembly");
    out.push(check(
        "zero-kernel determinant",
        (det_i_minus(&z).expect("det") - 1.0).abs(),
        0.0,
    ));
    out
}

/// Validates the u' > u subtraction identity against brute-force panel
/// quadrature of the reflected integral at three parameter points.
pub fn kernel_identity_checks() -> Vec<Check> {
    let brute = |t: f64, x: f64, y: f64| -> f64 {
        let gl = gauss_legendre(24, 0.0, 1.0).expect("static rule");
        let mu_max = 42.0 / t + 4.0;
        let mut total = 0.0;
        let mut a = 0.0;
        while a < mu_max {
            let b = (a + 0.2f64).min(mu_max);
            for (&xi, &w) in gl.nodes.iter().zip(&gl.weights) {
                let m = a + (b - a) * xi;
                total += (b - a)
                    * w
                    * (-t * m).exp()
                    * airy_ai(x - m).expect("in range").ai
                    * airy_ai(y - m).expect("in range").ai;
            }
            a = b;
        }
        total
    };
    let names = [
        "kernel identity at (0.5, 0.5, 0.1)",
        "kernel identity at (1.0, -1.0, -0.5)",
        "kernel identity at (2.0, 2.0, 1.0)",
    ];
    [(0.5, 0.5, 0.1), (1.0, -1.0, -0.5), (2.0, 2.0, 1.0)]
        .iter()
        .zip(names)
        .map(|(&(t, x, y), name)| {
            let hg = kernels::halfline_integral_adaptive(t, x, y) - kernels::gauss_term(t, x, y);
            check(name, (hg + brute(t, x, y)).abs(), 1e-8)
        })
        .collect()
}

/// Everything the `selftest` subcommand runs.
pub fn run_all() -> Vec<Check> {
    let mut all = quadrature_checks();
    all.extend(airy_checks_with(|x| {
        let v = airy_ai(x).expect("in range");
        (v.ai, v.ai_prime)
    }));
    all.extend(fredholm_checks());
    all.extend(kernel_identity_checks());
    all
}
