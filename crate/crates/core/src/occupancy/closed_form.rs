//! Closed-form `(β, γ)` choices minimising `β + γd` in each sparsity setting.

use super::OccupancyError;
use crate::bounds::SparsitySetting;
use crate::hardcore::Fugacity;
use crate::special::{k_function, lambert_w0, lambert_w0_exp};
use serde::Serialize;
use std::f64::consts::E;

/// Default `ξ` when clique parameters are derived from a [`SparsitySetting`].
pub const DEFAULT_XI: f64 = 0.1;

/// The largest `d` scanned when locating the clique threshold.
pub const THRESHOLD_SCAN_LIMIT: f64 = 1e300;
const THRESHOLD_STEPS_PER_DECADE: i32 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosedForm {
    pub beta: f64,
    pub gamma: f64,
    /// `β + γd`.
    pub budget: f64,
}

fn check_positive(name: &str, x: f64) -> Result<(), OccupancyError> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(OccupancyError::InvalidParameter(format!("{name} must be positive and finite, got {x}")))
    }
}

/// Parameters for neighbourhoods of maximum average degree at most `a`.
///
/// With `D = d(1+λ)^a log(1+λ)` and `W = W₀(D)`, `γ = ((1+λ)/λ)(1+λ)^a log(1+λ)/(1+W)`,
/// `β = ((1+λ)/λ)·e^W/(1+W)` and `β + γd = ((1+λ)/λ)·D/W`.
pub fn mad_params(a: f64, d: f64, lambda: Fugacity) -> Result<ClosedForm, OccupancyError> {
    if !(a >= 0.0 && a.is_finite()) {
        return Err(OccupancyError::InvalidParameter(format!("a must be non-negative, got {a}")));
    }
    check_positive("d", d)?;
    let r = 1.0 / lambda.ratio();
    let log1p = lambda.log1p();
    let scale = (1.0 + lambda.value()).powf(a) * log1p;
    let big_d = d * scale;
    let w = lambert_w0(big_d)?;
    let gamma = r * scale / (1.0 + w);
    let beta = r * big_d / (w * (1.0 + w));
    Ok(ClosedForm { beta, gamma, budget: r * big_d / w })
}

/// The triangle-free pair, written in its own form:
/// `γ = ((1+λ)/λ)·log(1+λ)/(1+W(d log(1+λ)))`, `β = γ(1+λ)^{(1+λ)/(γλ)}/(e log(1+λ))`.
pub fn triangle_free_params(d: f64, lambda: Fugacity) -> Result<ClosedForm, OccupancyError> {
    check_positive("d", d)?;
    let lam = lambda.value();
    let log1p = lambda.log1p();
    let w = lambert_w0(d * log1p)?;
    let gamma = (1.0 + lam) / lam * log1p / (1.0 + w);
    let beta = gamma * ((1.0 + lam) / (gamma * lam) * log1p).exp() / (E * log1p);
    Ok(ClosedForm { beta, gamma, budget: beta + gamma * d })
}

/// Parameters for neighbourhoods of Hall ratio at most `ρ`, with
/// `k = K(ρλ/log(1+λ))` and `w = W₀(kdλ/(1+λ))`.
pub fn hall_params(rho: f64, d: f64, lambda: Fugacity) -> Result<ClosedForm, OccupancyError> {
    if !(rho >= 1.0 && rho.is_finite()) {
        return Err(OccupancyError::InvalidParameter(format!("rho must be at least 1, got {rho}")));
    }
    check_positive("d", d)?;
    let k = k_function(rho * lambda.value() / lambda.log1p())?;
    let w = lambert_w0(k * d * lambda.ratio())?;
    Ok(ClosedForm { beta: w.exp() / (lambda.ratio() * (1.0 + w)), gamma: k / (1.0 + w), budget: k * d / w })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum CliqueVariant {
    /// From `g₁(z) = βce^{−z} + γ((1−ζ)/(ω−2))·z/log z`.
    LogRatio,
    /// From `g₂(z) = βce^{−z} + γ((1−ζ)/(2√log(ω−1)))·√z`.
    SquareRoot,
}

/// One stationary-point solution, already inflated by `1/(1−ζ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VariantParams {
    pub beta: f64,
    pub gamma: f64,
    pub budget: f64,
    pub z_star: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CliqueCandidates {
    pub zeta: f64,
    /// `None` when `g₁` has no stationary point in `[e, ∞)` at this `d`.
    pub log_ratio: Option<VariantParams>,
    pub square_root: VariantParams,
}

impl CliqueCandidates {
    pub fn best(&self) -> (CliqueVariant, VariantParams) {
        match self.log_ratio {
            Some(v) if v.budget <= self.square_root.budget => (CliqueVariant::LogRatio, v),
            _ => (CliqueVariant::SquareRoot, self.square_root),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CliqueParams {
    pub beta: f64,
    pub gamma: f64,
    pub budget: f64,
    pub variant: CliqueVariant,
    /// The threshold below which these parameters are not offered.
    pub d0: f64,
    pub candidates: CliqueCandidates,
}

impl CliqueParams {
    pub fn closed_form(&self) -> ClosedForm {
        ClosedForm { beta: self.beta, gamma: self.gamma, budget: self.budget }
    }
}

/// `ζ = 1 − (1+ξ)^{−1/2}`, so the two `1/(1−ζ)` inflations compose to `1 + ξ`.
pub fn zeta_from_xi(xi: f64) -> f64 {
    1.0 - (1.0 + xi).powf(-0.5)
}

fn check_clique_inputs(omega: u32, d: f64, xi: f64) -> Result<(), OccupancyError> {
    if omega < 3 {
        return Err(OccupancyError::InvalidParameter(format!("omega must be at least 3, got {omega}")));
    }
    check_positive("d", d)?;
    check_positive("xi", xi)
}

/// Both stationary-point parameter pairs at `d`, without the threshold check.
pub fn clique_candidates(omega: u32, d: f64, lambda: Fugacity, xi: f64) -> Result<CliqueCandidates, OccupancyError> {
    check_clique_inputs(omega, d, xi)?;
    let zeta = zeta_from_xi(xi);
    let c = lambda.ratio();
    let w = omega as f64;

    let log_ratio = log_ratio_root(d, c, w, zeta).map(|z| {
        let l = z.ln();
        let denom = (1.0 + z) * l - 1.0;
        let s = (w - 2.0) / (1.0 - zeta);
        let gamma0 = s * l * l / denom;
        let beta0 = d * s * l * (l - 1.0) / (z * denom);
        let inflate = 1.0 / (1.0 - zeta);
        VariantParams { beta: beta0 * inflate, gamma: gamma0 * inflate, budget: z.exp() / (c * (1.0 - zeta)), z_star: z }
    });

    // 2z* = W(8d²λ²log(ω−1)/((1−ζ)²(1+λ)²)), evaluated from its logarithm.
    let log_arg = (8.0 * (w - 1.0).ln()).ln() + 2.0 * (d * c / (1.0 - zeta)).ln();
    let z = 0.5 * lambert_w0_exp(log_arg)?;
    let b = (1.0 - zeta) / (2.0 * (w - 1.0).ln().sqrt());
    let gamma0 = 2.0 * z.sqrt() / (b * (2.0 * z + 1.0));
    let beta0 = z.exp() / (c * (2.0 * z + 1.0));
    let inflate = 1.0 / (1.0 - zeta);
    let square_root =
        VariantParams { beta: beta0 * inflate, gamma: gamma0 * inflate, budget: z.exp() / (c * (1.0 - zeta)), z_star: z };

    Ok(CliqueCandidates { zeta, log_ratio, square_root })
}

/// Root in `[e, ∞)` of `d·c·e^{−z} = ((1−ζ)/(ω−2))·z/log z`, taken in logarithms.
fn log_ratio_root(d: f64, c: f64, omega: f64, zeta: f64) -> Option<f64> {
    let log_tau = (d * c).ln() + (omega - 2.0).ln() - (1.0 - zeta).ln();
    let h = |z: f64| log_tau - z - z.ln() + z.ln().ln();
    if h(E) < 0.0 {
        return None;
    }
    // h is decreasing on [e, ∞) and h(log τ) < 0.
    let (mut lo, mut hi) = (E, log_tau.max(E));
    let mut z = 0.5 * (lo + hi);
    for _ in 0..200 {
        let hz = h(z);
        if hz > 0.0 {
            lo = z;
        } else {
            hi = z;
        }
        let dh = -1.0 - 1.0 / z + 1.0 / (z * z.ln());
        let newton = z - hz / dh;
        z = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if hi - lo <= 4.0 * f64::EPSILON * hi || hz == 0.0 {
            break;
        }
    }
    Some(z)
}

/// `(1+ξ)²·min{(ω−2)·d·loglog d/log d, 2d·√(log(ω−1)/log d)}`, or `None` where a
/// logarithm is non-positive. Compared in logarithms to survive `d` near `1e300`.
fn log_target(omega: f64, d: f64, xi: f64) -> Option<f64> {
    let ld = d.ln();
    if ld <= 1.0 {
        return None;
    }
    let first = (omega - 2.0).ln() + d.ln() + ld.ln().ln() - ld.ln();
    let second = 2f64.ln() + d.ln() + 0.5 * ((omega - 1.0).ln().ln() - ld.ln());
    Some(2.0 * xi.ln_1p() + first.min(second))
}

fn log_budget(candidates: &CliqueCandidates, c: f64) -> Option<f64> {
    candidates.log_ratio?;
    let (_, best) = candidates.best();
    Some(best.z_star - (c * (1.0 - candidates.zeta)).ln())
}

/// The threshold `d₀` used by [`clique_params`]: the least `d` on a geometric
/// grid (20 points per decade up to 1e300) such that at every grid point from
/// there on the log-ratio root exists and the best budget is at most the
/// `(1+ξ)²·min{…}` target.
pub fn clique_threshold(omega: u32, lambda: Fugacity, xi: f64) -> Result<f64, OccupancyError> {
    check_clique_inputs(omega, 1.0, xi)?;
    let top = (THRESHOLD_SCAN_LIMIT.log10() as i32) * THRESHOLD_STEPS_PER_DECADE;
    let mut d0 = None;
    for i in (0..=top).rev() {
        let d = 10f64.powf(i as f64 / THRESHOLD_STEPS_PER_DECADE as f64);
        let cands = clique_candidates(omega, d, lambda, xi)?;
        let ok = match (log_budget(&cands, lambda.ratio()), log_target(omega as f64, d, xi)) {
            (Some(b), Some(t)) => b <= t,
            _ => false,
        };
        if !ok {
            break;
        }
        d0 = Some(d);
    }
    d0.ok_or(OccupancyError::NoThreshold { limit: THRESHOLD_SCAN_LIMIT })
}

/// Parameters for vertices in no clique larger than `ω`, for `d ≥ d₀`.
pub fn clique_params(omega: u32, d: f64, lambda: Fugacity, xi: f64) -> Result<CliqueParams, OccupancyError> {
    let candidates = clique_candidates(omega, d, lambda, xi)?;
    let d0 = clique_threshold(omega, lambda, xi)?;
    if d < d0 {
        return Err(OccupancyError::BelowThreshold { d, d0 });
    }
    let (variant, best) = candidates.best();
    Ok(CliqueParams { beta: best.beta, gamma: best.gamma, budget: best.budget, variant, d0, candidates })
}

/// The closed form matching a sparsity setting at degree parameter `d`.
/// Clique settings use [`DEFAULT_XI`].
pub fn setting_params(setting: &SparsitySetting, d: f64, lambda: Fugacity) -> Result<ClosedForm, OccupancyError> {
    setting.validate().map_err(|e| OccupancyError::InvalidParameter(e.to_string()))?;
    match *setting {
        SparsitySetting::TriangleFree => triangle_free_params(d, lambda),
        SparsitySetting::HallRatio { rho } => hall_params(rho, d, lambda),
        SparsitySetting::Clique { omega } => Ok(clique_params(omega, d, lambda, DEFAULT_XI)?.closed_form()),
        _ => mad_params(setting.mad_exponent().expect("mad-based setting"), d, lambda),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lam(x: f64) -> Fugacity {
        Fugacity::new(x).unwrap()
    }

    #[test]
    fn triangle_free_form_matches_mad_form() {
        for &l in &[0.05, 0.3, 1.0, 4.0] {
            for &d in &[1.0, 3.0, 17.0, 1000.0] {
                let a = mad_params(0.0, d, lam(l)).unwrap();
                let b = triangle_free_params(d, lam(l)).unwrap();
                assert!((a.beta - b.beta).abs() <= 1e-12 * a.beta, "{a:?} {b:?}");
                assert!((a.gamma - b.gamma).abs() <= 1e-12 * a.gamma);
                assert!((a.budget - b.budget).abs() <= 1e-12 * a.budget);
            }
        }
    }

    #[test]
    fn triangle_free_budget_is_exp_w() {
        let l = 1.0 / 100f64.ln();
        let f = mad_params(0.0, 100.0, lam(l)).unwrap();
        let expected = (1.0 + l) / l * lambert_w0(100.0 * l.ln_1p()).unwrap().exp();
        assert!((f.budget - expected).abs() <= 1e-12 * expected);
    }

    #[test]
    fn mad_display_form_for_beta() {
        for &(a, d, l) in &[(0.5, 10.0, 0.2), (2.0, 40.0, 1.0), (3.5, 7.0, 0.05)] {
            let f = mad_params(a, d, lam(l)).unwrap();
            let display = f.gamma * (1.0 + l).powf((1.0 + l).powf(1.0 + a) / (f.gamma * l) - a) / (E * l.ln_1p());
            assert!((f.beta - display).abs() <= 1e-10 * f.beta);
        }
    }

    #[test]
    fn mad_stationary_point() {
        let (a, d, l) = (1.5, 30.0, 0.4);
        let f = mad_params(a, d, lam(l)).unwrap();
        let big_d = d * (1.0 + l).powf(a) * l.ln_1p();
        let y = lambert_w0(big_d).unwrap() / l.ln_1p();
        let c = l / (1.0 + l);
        let g = |y: f64| c * (f.beta * (1.0 + l).powf(-y) + f.gamma * y * (1.0 + l).powf(-a));
        assert!((g(y) - 1.0).abs() < 1e-10);
        assert!(g(y + 0.3) > 1.0 && g(y - 0.3) > 1.0);
    }

    #[test]
    fn hall_beta_identity_and_domain() {
        let (rho, d, l) = (2.5, 50.0, 0.5);
        let f = hall_params(rho, d, lam(l)).unwrap();
        let k = k_function(rho * l / l.ln_1p()).unwrap();
        let alt = f.gamma / k * (1.0 + l) / l * (k / f.gamma - 1.0).exp();
        assert!((f.beta - alt).abs() <= 1e-10 * f.beta);
        assert!((f.beta + f.gamma * d - f.budget).abs() <= 1e-10 * f.budget);
        // ρλ/log(1+λ) < 1 is impossible for ρ ≥ 1 since λ > log(1+λ).
        assert!(hall_params(0.9, d, lam(l)).is_err());
    }

    #[test]
    fn clique_stationarity() {
        let (omega, d, l, xi) = (4u32, 500.0, 1.0, 0.1);
        let cands = clique_candidates(omega, d, lam(l), xi).unwrap();
        let zeta = cands.zeta;
        let c = l / (1.0 + l);
        let v = cands.log_ratio.unwrap();
        let (b0, g0) = (v.beta * (1.0 - zeta), v.gamma * (1.0 - zeta));
        let s = (1.0 - zeta) / (omega as f64 - 2.0);
        let g1 = |z: f64| b0 * c * (-z).exp() + g0 * s * z / z.ln();
        let z = v.z_star;
        let h = 1e-5;
        assert!((g1(z) - 1.0).abs() < 1e-8);
        assert!(((g1(z + h) - g1(z - h)) / (2.0 * h)).abs() < 1e-6);
        let lhs = d * c * (-z).exp();
        assert!((lhs - s * z / z.ln()).abs() < 1e-10 * lhs);

        let v = cands.square_root;
        let (b0, g0) = (v.beta * (1.0 - zeta), v.gamma * (1.0 - zeta));
        let bb = (1.0 - zeta) / (2.0 * ((omega - 1) as f64).ln().sqrt());
        let g2 = |z: f64| b0 * c * (-z).exp() + g0 * bb * z.sqrt();
        assert!((g2(v.z_star) - 1.0).abs() < 1e-8);
        assert!(((g2(v.z_star + h) - g2(v.z_star - h)) / (2.0 * h)).abs() < 1e-6);
    }

    #[test]
    fn clique_threshold_is_reported_and_enforced() {
        let l = lam(1.0);
        let d0 = clique_threshold(3, l, 0.1).unwrap();
        assert!(d0 > 1000.0);
        assert!(matches!(clique_params(3, d0 / 2.0, l, 0.1), Err(OccupancyError::BelowThreshold { .. })));
        let p = clique_params(3, d0 * 10.0, l, 0.1).unwrap();
        assert_eq!(p.d0, d0);
        assert!(clique_params(2, 1e6, l, 0.1).is_err());
    }
}
