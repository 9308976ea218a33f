//! Finite bound formulas: occupancy-fraction lower bounds, fractional and list
//! colouring budgets, and the list-size requirement of the colouring procedure.
//!
//! Every formula is evaluated as written. Asymptotic `o(1)` factors are set to
//! their displayed skeletons and the substitution is reported in the result.

mod inequalities;

pub use inequalities::{
    average_degree_log_z_bound, average_degree_occupancy_bound, clique_log_z_bounds, entropy_occupancy_bound,
};

use crate::hardcore::Fugacity;
use crate::special::{k_function, lambert_w0, SpecialError};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Left end of the maximisation interval, avoiding the `x → 0` singularity.
pub const X_FLOOR: f64 = 1e-12;
/// Bracket width at which golden-section search stops.
pub const GOLDEN_TOLERANCE: f64 = 1e-10;
const COARSE_GRID: usize = 96;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundsError {
    #[error("invalid setting: {0}")]
    InvalidSetting(String),
    #[error("outside the formula's regime: {0}")]
    Regime(String),
    #[error("{0}")]
    Special(#[from] SpecialError),
}

/// The local sparsity hypothesis a bound is stated for.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum SparsitySetting {
    TriangleFree,
    /// No subgraph isomorphic to the cycle `C_k`.
    CkFree { k: u32 },
    /// Every vertex in at most `t` triangles.
    TriangleCount { t: f64 },
    /// Every neighbourhood spans at most `t` copies of the path on `k − 1` vertices.
    PathCount { k: u32, t: f64 },
    /// Every neighbourhood has Hall ratio at most `ρ`.
    HallRatio { rho: f64 },
    /// Every vertex in no clique larger than `ω`.
    Clique { omega: u32 },
}

impl SparsitySetting {
    pub fn validate(&self) -> Result<(), BoundsError> {
        let bad = |m: String| Err(BoundsError::InvalidSetting(m));
        match *self {
            SparsitySetting::TriangleFree => Ok(()),
            SparsitySetting::CkFree { k } | SparsitySetting::PathCount { k, .. } if k < 3 => {
                bad(format!("k must be at least 3, got {k}"))
            }
            SparsitySetting::TriangleCount { t } | SparsitySetting::PathCount { t, .. } if !(t >= 0.5 && t.is_finite()) => {
                bad(format!("t must be at least 1/2, got {t}"))
            }
            SparsitySetting::HallRatio { rho } if !(rho >= 1.0 && rho.is_finite()) => {
                bad(format!("rho must be at least 1, got {rho}"))
            }
            SparsitySetting::Clique { omega } if omega < 3 => bad(format!("omega must be at least 3, got {omega}")),
            _ => Ok(()),
        }
    }

    /// The neighbourhood mad bound `a` for settings handled through bounded
    /// maximum average degree.
    pub fn mad_exponent(&self) -> Option<f64> {
        match *self {
            SparsitySetting::TriangleFree => Some(0.0),
            SparsitySetting::CkFree { k } => Some(k as f64 - 3.0),
            SparsitySetting::TriangleCount { t } => Some((2.0 * t).sqrt()),
            SparsitySetting::PathCount { k, t } => Some(k as f64 - 3.0 + (2.0 * t).sqrt()),
            SparsitySetting::HallRatio { .. } | SparsitySetting::Clique { .. } => None,
        }
    }

    /// The quantity dividing the degree inside the budget logarithm.
    fn log_scale(&self) -> Option<f64> {
        match *self {
            SparsitySetting::TriangleFree => Some(1.0),
            SparsitySetting::CkFree { k } => Some(k as f64),
            SparsitySetting::TriangleCount { t } => Some(t.sqrt()),
            SparsitySetting::PathCount { k, t } => Some(k as f64 + t.sqrt()),
            _ => None,
        }
    }

    fn tag(&self) -> &'static str {
        match self {
            SparsitySetting::TriangleFree => "triangle-free",
            SparsitySetting::CkFree { .. } => "ck-free",
            SparsitySetting::TriangleCount { .. } => "triangle-count",
            SparsitySetting::PathCount { .. } => "path-count",
            SparsitySetting::HallRatio { .. } => "hall-ratio",
            SparsitySetting::Clique { .. } => "clique",
        }
    }
}

impl fmt::Display for SparsitySetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            SparsitySetting::TriangleFree => write!(f, "triangle-free"),
            SparsitySetting::CkFree { k } => write!(f, "ck-free:{k}"),
            SparsitySetting::TriangleCount { t } => write!(f, "triangle-count:{t}"),
            SparsitySetting::PathCount { k, t } => write!(f, "path-count:{k},{t}"),
            SparsitySetting::HallRatio { rho } => write!(f, "hall-ratio:{rho}"),
            SparsitySetting::Clique { omega } => write!(f, "clique:{omega}"),
        }
    }
}

impl FromStr for SparsitySetting {
    type Err = BoundsError;

    /// Parses the [`Display`](fmt::Display) form, e.g. `ck-free:5` or `path-count:4,2.5`.
    fn from_str(s: &str) -> Result<Self, BoundsError> {
        let bad = || BoundsError::InvalidSetting(format!("cannot parse '{s}'"));
        let (name, args) = s.split_once(':').unwrap_or((s, ""));
        let args: Vec<&str> = if args.is_empty() { vec![] } else { args.split(',').map(str::trim).collect() };
        let int = |i: usize| args.get(i).and_then(|a| a.parse::<u32>().ok()).ok_or_else(bad);
        let real = |i: usize| args.get(i).and_then(|a| a.parse::<f64>().ok()).ok_or_else(bad);
        let want = |n: usize| if args.len() == n { Ok(()) } else { Err(bad()) };
        let setting = match name.trim() {
            "triangle-free" => want(0).map(|_| SparsitySetting::TriangleFree),
            "ck-free" => want(1).and_then(|_| Ok(SparsitySetting::CkFree { k: int(0)? })),
            "triangle-count" => want(1).and_then(|_| Ok(SparsitySetting::TriangleCount { t: real(0)? })),
            "path-count" => want(2).and_then(|_| Ok(SparsitySetting::PathCount { k: int(0)?, t: real(1)? })),
            "hall-ratio" => want(1).and_then(|_| Ok(SparsitySetting::HallRatio { rho: real(0)? })),
            "clique" => want(1).and_then(|_| Ok(SparsitySetting::Clique { omega: int(0)? })),
            _ => Err(bad()),
        }?;
        setting.validate()?;
        Ok(setting)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BoundResult {
    pub value: f64,
    /// The maximising `x` for bounds stated as a maximum over fugacities.
    pub maximizer: Option<f64>,
    /// Which formula was evaluated, e.g. `occupancy/hall-ratio` or `list/clique`.
    pub formula: String,
    /// Any asymptotic factor replaced by its finite skeleton.
    pub substitution: Option<String>,
}

fn positive(value: f64, formula: String, what: &str) -> Result<f64, BoundsError> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(BoundsError::Regime(format!("{formula}: {what} evaluates to {value}")))
    }
}

/// Lower bound on the occupancy fraction of any graph of maximum degree `Δ`
/// satisfying `setting`, at fugacity `λ`.
pub fn occupancy_lower_bound(setting: &SparsitySetting, max_degree: u64, lambda: Fugacity) -> Result<BoundResult, BoundsError> {
    setting.validate()?;
    if max_degree < 1 {
        return Err(BoundsError::Regime("maximum degree must be at least 1".into()));
    }
    let delta = max_degree as f64;
    let formula = format!("occupancy/{}", setting.tag());
    match *setting {
        SparsitySetting::Clique { omega } => {
            let w = omega as f64;
            let ld = delta.ln();
            let mut arms = Vec::new();
            if ld > 0.0 && ld.ln() > 0.0 {
                arms.push(ld / ((w - 2.0) * delta * ld.ln()));
            }
            if ld > 0.0 {
                arms.push((ld / (w - 1.0).ln()).sqrt() / (2.0 * delta));
            }
            let value = arms.into_iter().fold(f64::NAN, f64::max);
            Ok(BoundResult {
                value: positive(value, formula.clone(), "both arms")?,
                maximizer: None,
                formula,
                substitution: Some("the 1 - o(1) factor is set to 1".into()),
            })
        }
        SparsitySetting::HallRatio { rho } => {
            let f = |x: f64| -> Option<f64> {
                let y = rho * x / x.ln_1p();
                if !(y >= 1.0) {
                    return None;
                }
                let k = k_function(y).ok()?;
                Some(lambert_w0(k * delta * x / (1.0 + x)).ok()? / (k * delta))
            };
            let (x, value) = maximise(f, X_FLOOR, lambda.value());
            Ok(BoundResult { value: positive(value, formula.clone(), "the maximum")?, maximizer: Some(x), formula, substitution: None })
        }
        _ => {
            let a = setting.mad_exponent().expect("mad-based setting");
            let f = |x: f64| -> Option<f64> {
                let big_d = delta * (1.0 + x).powf(a) * x.ln_1p();
                Some(x / (1.0 + x) * lambert_w0(big_d).ok()? / big_d)
            };
            let (x, value) = maximise(f, X_FLOOR, lambda.value());
            Ok(BoundResult { value: positive(value, formula.clone(), "the maximum")?, maximizer: Some(x), formula, substitution: None })
        }
    }
}

/// Maximum of `f` on `[lo, hi]`: a geometric grid locates the best cell and
/// golden-section refines within its two neighbours. The right end point is
/// always a candidate so boundary maxima are returned exactly.
fn maximise(f: impl Fn(f64) -> Option<f64>, lo: f64, hi: f64) -> (f64, f64) {
    let value = |x: f64| f(x).filter(|v| v.is_finite()).unwrap_or(f64::NEG_INFINITY);
    if hi <= lo {
        return (hi, value(hi));
    }
    let ratio = (hi / lo).powf(1.0 / (COARSE_GRID - 1) as f64);
    let grid: Vec<f64> = (0..COARSE_GRID).map(|i| if i + 1 == COARSE_GRID { hi } else { lo * ratio.powi(i as i32) }).collect();
    let values: Vec<f64> = grid.iter().map(|&x| value(x)).collect();
    let best = (0..grid.len()).fold(0, |b, i| if values[i] > values[b] { i } else { b });
    let (mut a, mut b) = (grid[best.saturating_sub(1)], grid[(best + 1).min(grid.len() - 1)]);
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let (mut fc, mut fd) = (value(c), value(d));
    while b - a > GOLDEN_TOLERANCE {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = value(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = value(d);
        }
    }
    let mid = 0.5 * (a + b);
    [(grid[best], values[best]), (mid, value(mid)), (hi, value(hi))]
        .into_iter()
        .fold((hi, f64::NEG_INFINITY), |acc, p| if p.1 > acc.1 { p } else { acc })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum ChromaticMode {
    Fractional,
    /// List and correspondence colouring, with the `log Δ` factors.
    List,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BudgetAux {
    pub delta0: f64,
    pub max_degree: f64,
    pub epsilon: f64,
    pub mode: ChromaticMode,
}

/// `x/log(x/s)`-type term with the logarithm checked positive.
fn ratio_term(formula: &str, numerator: f64, log_arg: f64) -> Result<f64, BoundsError> {
    let l = log_arg.ln();
    if !(l > 0.0) {
        return Err(BoundsError::Regime(format!("{formula}: log({log_arg}) is not positive")));
    }
    Ok(numerator / l)
}

/// The colour budget for a vertex of degree `deg` under `setting`.
pub fn chromatic_budget(setting: &SparsitySetting, deg: f64, aux: &BudgetAux) -> Result<BoundResult, BoundsError> {
    setting.validate()?;
    if !(deg > 0.0 && aux.delta0 > 0.0 && aux.max_degree >= 1.0 && aux.epsilon >= 0.0) {
        return Err(BoundsError::Regime("deg, delta0 and the maximum degree must be positive, epsilon non-negative".into()));
    }
    let mode = match aux.mode {
        ChromaticMode::Fractional => "fractional",
        ChromaticMode::List => "list",
    };
    let formula = format!("{mode}/{}", setting.tag());
    let eps = 1.0 + aux.epsilon;
    let d0 = aux.delta0;
    let log_delta = aux.max_degree.ln();
    let list = aux.mode == ChromaticMode::List;
    if list && !(log_delta > 0.0) {
        return Err(BoundsError::Regime(format!("{formula}: log of the maximum degree is not positive")));
    }
    let value = match *setting {
        SparsitySetting::HallRatio { rho } => {
            let k = k_function(rho)?;
            if list {
                let s = rho * log_delta;
                let delta = d0 * s;
                eps * ratio_term(&formula, k * deg, k * deg / s)?.max(ratio_term(&formula, k * delta, k * delta / s)?)
            } else {
                eps * ratio_term(&formula, k * deg, k * deg)?.max(ratio_term(&formula, k * d0, k * d0)?)
            }
        }
        SparsitySetting::Clique { omega } => return clique_budget(omega, deg, aux, formula),
        _ => {
            let k = setting.log_scale().expect("mad-based setting");
            let s = if list { k * log_delta } else { k };
            eps * ratio_term(&formula, deg, deg / s)?.max(d0 * s / positive(d0.ln(), formula.clone(), "log delta0")?)
        }
    };
    Ok(BoundResult { value: positive(value, formula.clone(), "the budget")?, maximizer: None, formula, substitution: None })
}

/// `log k` for the clique list budget, with
/// `k = min{(e²·log(8Δ⁴))^{ω−1}, exp(√(4·log(ω−1)·(1+ε)·log(8Δ⁴)))}`.
pub fn clique_list_log_scale(omega: u32, max_degree: f64, epsilon: f64) -> f64 {
    let l8 = 8f64.ln() + 4.0 * max_degree.ln();
    let first = (omega as f64 - 1.0) * (2.0 + l8.ln());
    let second = (4.0 * (omega as f64 - 1.0).ln() * (1.0 + epsilon) * l8).sqrt();
    first.min(second)
}

fn clique_budget(omega: u32, deg: f64, aux: &BudgetAux, formula: String) -> Result<BoundResult, BoundsError> {
    let w = omega as f64;
    let eps = 1.0 + aux.epsilon;
    // Logarithms of x/k for x = deg and x = δ; in fractional mode k = 1 and δ = δ₀.
    let (log_k, log_deg, log_delta) = match aux.mode {
        ChromaticMode::Fractional => (0.0, deg.ln(), aux.delta0.ln()),
        ChromaticMode::List => {
            let lk = clique_list_log_scale(omega, aux.max_degree, aux.epsilon);
            (lk, deg.ln() - lk, aux.delta0.ln())
        }
    };
    // x·loglog(x/k)/log(x/k), with x = e^{log x/k + log k}.
    let loglog_arm = |log_x_over_k: f64| -> Option<f64> {
        (log_x_over_k > 0.0 && log_x_over_k.ln() > 0.0)
            .then(|| (w - 2.0) * (log_x_over_k + log_k).exp() * log_x_over_k.ln() / log_x_over_k)
    };
    let sqrt_arm = |log_x_over_k: f64| -> Option<f64> {
        (log_x_over_k > 0.0).then(|| 2.0 * (log_x_over_k + log_k).exp() * ((w - 1.0).ln() / log_x_over_k).sqrt())
    };
    let both = |arm: &dyn Fn(f64) -> Option<f64>| Some(eps * arm(log_deg)?.max(arm(log_delta)?));
    let candidates = [both(&loglog_arm), both(&sqrt_arm)];
    let value = candidates.iter().flatten().fold(f64::INFINITY, |m, &v| m.min(v));
    if value == f64::INFINITY {
        return Err(BoundsError::Regime(format!("{formula}: neither interval has positive logarithms")));
    }
    Ok(BoundResult { value: positive(value, formula.clone(), "the budget")?, maximizer: None, formula, substitution: None })
}

/// The list-size requirement `β·(λ/(1+λ))·ℓ/(1 − √(7 log Δ/ℓ)) + γ·deg` under
/// which the two-phase colouring procedure is guaranteed to succeed.
pub fn list_size_threshold(
    beta: f64,
    gamma: f64,
    deg: f64,
    lambda: Fugacity,
    ell: f64,
    max_degree: u64,
) -> Result<f64, BoundsError> {
    if max_degree < 64 {
        return Err(BoundsError::Regime(format!("maximum degree {max_degree} is below 64")));
    }
    let log_delta = (max_degree as f64).ln();
    if !(ell > 7.0 * log_delta) {
        return Err(BoundsError::Regime(format!("ell = {ell} must exceed 7 log(maximum degree) = {}", 7.0 * log_delta)));
    }
    let eta = (7.0 * log_delta / ell).sqrt();
    Ok(beta * lambda.ratio() * ell / (1.0 - eta) + gamma * deg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn lam(x: f64) -> Fugacity {
        Fugacity::new(x).unwrap()
    }

    #[test]
    fn triangle_free_degree_one_boundary_maximum() {
        let r = occupancy_lower_bound(&SparsitySetting::TriangleFree, 1, lam(1.0)).unwrap();
        let l2 = 2f64.ln();
        let expected = 0.5 * lambert_w0(l2).unwrap() / l2;
        assert!((r.value - expected).abs() < 1e-15);
        assert_eq!(r.maximizer, Some(1.0));
    }

    #[test]
    fn ck_free_three_is_triangle_free() {
        for delta in [1, 5, 40, 1000] {
            for l in [0.01, 0.5, 3.0] {
                let a = occupancy_lower_bound(&SparsitySetting::TriangleFree, delta, lam(l)).unwrap();
                let b = occupancy_lower_bound(&SparsitySetting::CkFree { k: 3 }, delta, lam(l)).unwrap();
                assert_eq!(a.value, b.value);
            }
        }
    }

    #[test]
    fn fewer_triangles_give_larger_bound() {
        let small = occupancy_lower_bound(&SparsitySetting::TriangleCount { t: 0.5 }, 8, lam(1.0)).unwrap();
        let large = occupancy_lower_bound(&SparsitySetting::TriangleCount { t: 2.0 }, 8, lam(1.0)).unwrap();
        assert!(small.value >= large.value);
    }

    #[test]
    fn interior_maximum_is_stationary() {
        // For large Δ the triangle-free maximiser is interior; compare with a fine scan.
        let r = occupancy_lower_bound(&SparsitySetting::TriangleFree, 10_000, lam(50.0)).unwrap();
        let x = r.maximizer.unwrap();
        assert!(x < 50.0);
        let f = |x: f64| {
            let d = 1e4 * x.ln_1p();
            x / (1.0 + x) * lambert_w0(d).unwrap() / d
        };
        let scan = (1..=20000).map(|i| f(i as f64 * 0.0025)).fold(0.0, f64::max);
        assert!(r.value >= scan - 1e-15);
    }

    #[test]
    fn clique_occupancy_reports_substitution() {
        let r = occupancy_lower_bound(&SparsitySetting::Clique { omega: 3 }, 1000, lam(1.0)).unwrap();
        let ld = 1000f64.ln();
        let expected = (ld / (1000.0 * ld.ln())).max((ld / 2f64.ln()).sqrt() / 2000.0);
        assert_eq!(r.value, expected);
        assert!(r.substitution.is_some());
        assert!(occupancy_lower_bound(&SparsitySetting::Clique { omega: 2 }, 10, lam(1.0)).is_err());
    }

    #[test]
    fn budgets_as_written() {
        let aux = BudgetAux { delta0: 100.0, max_degree: 1000.0, epsilon: 0.0, mode: ChromaticMode::Fractional };
        let r = chromatic_budget(&SparsitySetting::CkFree { k: 4 }, 1000.0, &aux).unwrap();
        assert_eq!(r.value, (1000.0 / 250f64.ln()).max(400.0 / 100f64.ln()));
        let list = BudgetAux { mode: ChromaticMode::List, ..aux };
        let r = chromatic_budget(&SparsitySetting::TriangleFree, 1000.0, &list).unwrap();
        let ld = 1000f64.ln();
        assert_eq!(r.value, (1000.0 / (1000.0 / ld).ln()).max(100.0 * ld / 100f64.ln()));
        let eps = BudgetAux { epsilon: 0.25, ..aux };
        let a = chromatic_budget(&SparsitySetting::HallRatio { rho: 2.0 }, 1000.0, &aux).unwrap().value;
        let b = chromatic_budget(&SparsitySetting::HallRatio { rho: 2.0 }, 1000.0, &eps).unwrap().value;
        assert!((b - 1.25 * a).abs() < 1e-12 * b);
    }

    #[test]
    fn budget_regime_errors() {
        let aux = BudgetAux { delta0: 100.0, max_degree: 1000.0, epsilon: 0.1, mode: ChromaticMode::Fractional };
        assert!(matches!(chromatic_budget(&SparsitySetting::CkFree { k: 10 }, 5.0, &aux), Err(BoundsError::Regime(_))));
        let one = BudgetAux { delta0: 1.0, ..aux };
        assert!(chromatic_budget(&SparsitySetting::TriangleFree, 50.0, &one).is_err());
    }

    #[test]
    fn clique_list_scale_arms() {
        let l8 = (8.0 * 1e4f64.powi(4)).ln();
        let first = (E * E * l8).powi(3);
        let second = (4.0 * 3f64.ln() * 1.1 * l8).sqrt().exp();
        let lk = clique_list_log_scale(4, 1e4, 0.1);
        assert!((lk.exp() - first.min(second)).abs() < 1e-9 * first.min(second));
    }

    #[test]
    fn list_threshold_identity_and_regime() {
        let l = lam(0.3);
        let (beta, gamma, deg) = (5.0, 0.7, 100.0);
        let ell = 7.0 * 64f64.ln() * 1.01;
        let t = list_size_threshold(beta, gamma, deg, l, ell, 64).unwrap();
        assert!(t.is_finite() && t > 0.0);
        let eta = (7.0 * 64f64.ln() / ell).sqrt();
        let scale = l.ratio() * ell / (1.0 - eta);
        assert!((t - scale * (beta + gamma * deg / scale)).abs() < 1e-12 * t);
        assert!(list_size_threshold(beta, gamma, deg, l, ell, 63).is_err());
        assert!(list_size_threshold(beta, gamma, deg, l, 7.0 * 64f64.ln(), 64).is_err());
    }

    #[test]
    fn setting_round_trip() {
        for s in [
            SparsitySetting::TriangleFree,
            SparsitySetting::CkFree { k: 5 },
            SparsitySetting::TriangleCount { t: 2.5 },
            SparsitySetting::PathCount { k: 4, t: 0.5 },
            SparsitySetting::HallRatio { rho: 1.5 },
            SparsitySetting::Clique { omega: 4 },
        ] {
            assert_eq!(s.to_string().parse::<SparsitySetting>().unwrap(), s);
            let json = serde_json::to_string(&s).unwrap();
            assert_eq!(serde_json::from_str::<SparsitySetting>(&json).unwrap(), s);
        }
        assert!("ck-free:2".parse::<SparsitySetting>().is_err());
        assert!("triangle-count:0.4".parse::<SparsitySetting>().is_err());
        assert!("hall-ratio".parse::<SparsitySetting>().is_err());
    }
}
