//! Numerical machinery for the Airy₁ and Airy₂ processes and for the
//! largest eigenvalue of GOE/GUE matrix diffusion.
//!
//! The library has two halves. The deterministic half evaluates joint
//! distributions of the Airy processes as Nyström-discretized Fredholm
//! determinants and integrates them into covariance functions g₁(u), g₂(u).
//! The stochastic half simulates stationary matrix-valued
//! Ornstein–Uhlenbeck chains, tracks the rescaled largest eigenvalue and
//! estimates its autocovariance f_N(u), so the two can be compared.
//!
//! Modules follow the pipeline order: `quadrature` and `airy` are the
//! primitives, `kernels` evaluates the extended Airy₂ and the Airy₁
//! kernels, `fredholm` assembles block Nyström matrices and their
//! determinants, `processes` wraps them as CDFs, `covariance` integrates
//! covariances, and `rmt` holds the Monte Carlo side.

pub mod airy;
pub mod covariance;
mod dd;
pub mod eigen;
pub mod error;
pub mod fredholm;
pub mod kernels;
pub mod linalg;
pub mod processes;
pub mod quadrature;
pub mod rmt;
pub mod selftest;

pub use error::{Error, Result};
pub use kernels::Process;
