//! Lower bounds on `λZ'_F/Z_F` and `log Z_F` for a graph `F` on `y` vertices,
//! used to certify local occupancy for whole classes of neighbourhoods.

use super::BoundsError;
use crate::hardcore::Fugacity;
use crate::special::k_function;
use std::f64::consts::E;

/// `log Z / K(yλ/log Z)`, a lower bound on `λZ'/Z` for any graph on `y` vertices.
/// Zero when `log Z = 0`, i.e. for the empty graph.
pub fn entropy_occupancy_bound(y: usize, lambda: Fugacity, log_z: f64) -> Result<f64, BoundsError> {
    if log_z <= 0.0 {
        return Ok(0.0);
    }
    Ok(log_z / k_function(y as f64 * lambda.value() / log_z)?)
}

/// `(λ/(1+λ))·y·(1+λ)^{−d̄}` for a graph on `y` vertices of average degree `d̄`.
pub fn average_degree_occupancy_bound(y: usize, avg_degree: f64, lambda: Fugacity) -> f64 {
    lambda.ratio() * y as f64 * (-avg_degree * lambda.log1p()).exp()
}

/// `y·log(1+λ)` if `d̄ = 0`, else `(y/d̄)(1 − (1+λ)^{−d̄})`.
pub fn average_degree_log_z_bound(y: usize, avg_degree: f64, lambda: Fugacity) -> f64 {
    if avg_degree == 0.0 {
        y as f64 * lambda.log1p()
    } else {
        y as f64 / avg_degree * -(-avg_degree * lambda.log1p()).exp_m1()
    }
}

/// The two lower bounds on `log Z` for a graph on `y` vertices with no clique
/// of size `ω`, at independent-set size `α ≥ 1`. In the second bound the
/// factor `(α−1)·log(…)` is taken as 0 when `α = 1`.
pub fn clique_log_z_bounds(y: usize, omega: u32, alpha: u32, lambda: Fugacity) -> (f64, f64) {
    let (a, w) = (alpha as f64, omega as f64);
    let base = (y as f64 * lambda.value()).ln();
    let first = a * (base - (w - 1.0) * (E * (a - 1.0) / (w - 1.0) + E).ln());
    let second = if alpha == 1 { a * base } else { a * (base - (a - 1.0) * (E * (w - 1.0) / (a - 1.0) + E).ln()) };
    (first, second)
}
