//! Real branches of the Lambert W function and `K(y) = −W₋₁(−1/(ey))`.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecialError {
    #[error("{function}: argument {x} outside the domain {domain}")]
    Domain { function: &'static str, x: f64, domain: &'static str },
}

/// Tolerance below −1/e still treated as the branch point.
pub const BRANCH_TOLERANCE: f64 = 1e-15;

// e split into a double and its rounding error, for computing e·x + 1 without cancellation.
const E_HI: f64 = std::f64::consts::E;
const E_LO: f64 = 1.445_646_891_729_250_2e-16;

/// Distance-like offset `e·x + 1` from the branch point, with `e` carried in two parts.
fn branch_offset(x: f64) -> f64 {
    E_HI.mul_add(x, 1.0) + E_LO * x
}

/// Series of W about the branch point in `p = ±√(2(ex+1))`; `p > 0` gives W₀, `p < 0` gives W₋₁.
fn branch_series(p: f64) -> f64 {
    const C: [f64; 10] = [
        -1.0,
        1.0,
        -1.0 / 3.0,
        11.0 / 72.0,
        -43.0 / 540.0,
        769.0 / 17280.0,
        -221.0 / 8505.0,
        680863.0 / 43545600.0,
        -1963.0 / 204120.0,
        226287557.0 / 37623398400.0,
    ];
    C.iter().rev().fold(0.0, |acc, &c| acc * p + c)
}

fn halley(x: f64, mut w: f64) -> f64 {
    for _ in 0..32 {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + 1.0;
        if wp1.abs() < 1e-12 {
            break;
        }
        let step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        let next = w - step;
        if !next.is_finite() {
            break;
        }
        let done = (next - w).abs() <= 4.0 * f64::EPSILON * next.abs().max(1.0);
        w = next;
        if done {
            break;
        }
    }
    w
}

/// Newton on `w + ln|w| = ln|x|`, well conditioned when |w| is large.
fn log_newton(x: f64, w: f64) -> f64 {
    log_newton_target(x.abs().ln(), w)
}

fn log_newton_target(target: f64, mut w: f64) -> f64 {
    for _ in 0..64 {
        let h = w + w.abs().ln() - target;
        let next = w - h / (1.0 + 1.0 / w);
        let done = (next - w).abs() <= 2.0 * f64::EPSILON * next.abs();
        w = next;
        if done {
            break;
        }
    }
    w
}

/// Principal branch W₀ on `[−1/e, ∞)`.
pub fn lambert_w0(x: f64) -> Result<f64, SpecialError> {
    let domain_error = || SpecialError::Domain { function: "lambert_w0", x, domain: "[-1/e, inf)" };
    if x.is_nan() || x < -std::f64::consts::E.recip() - BRANCH_TOLERANCE {
        return Err(domain_error());
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == f64::INFINITY {
        return Ok(f64::INFINITY);
    }
    let r = branch_offset(x);
    if r <= 0.0 {
        return Ok(-1.0);
    }
    let p = (2.0 * r).sqrt();
    if p < 1e-3 {
        return Ok(branch_series(p));
    }
    let w = if p < 0.6 {
        halley(x, branch_series(p))
    } else if x < 3.0 {
        let l = x.ln_1p();
        halley(x, l * (1.0 - l.ln_1p() / (2.0 + l)))
    } else {
        let (l1, l2) = (x.ln(), x.ln().ln());
        let guess = l1 - l2 + l2 / l1;
        if x > 1e10 {
            log_newton(x, guess)
        } else {
            halley(x, guess)
        }
    };
    Ok(w.max(-1.0))
}

/// `W₀(e^t)`, usable when `e^t` itself would overflow.
pub fn lambert_w0_exp(t: f64) -> Result<f64, SpecialError> {
    if t.is_nan() {
        return Err(SpecialError::Domain { function: "lambert_w0_exp", x: t, domain: "(-inf, inf)" });
    }
    if t < 700.0 {
        return lambert_w0(t.exp());
    }
    Ok(log_newton_target(t, t - t.ln()))
}

/// Lower branch W₋₁ on `[−1/e, 0)`.
pub fn lambert_wm1(x: f64) -> Result<f64, SpecialError> {
    if x.is_nan() || x >= 0.0 || x < -std::f64::consts::E.recip() - BRANCH_TOLERANCE {
        return Err(SpecialError::Domain { function: "lambert_wm1", x, domain: "[-1/e, 0)" });
    }
    Ok(wm1_with_offset(x, branch_offset(x)))
}

fn wm1_with_offset(x: f64, r: f64) -> f64 {
    if r <= 0.0 {
        return -1.0;
    }
    let p = -(2.0 * r).sqrt();
    if p > -1e-3 {
        return branch_series(p);
    }
    let w = if x < -0.25 {
        halley(x, branch_series(p))
    } else {
        let (l1, l2) = ((-x).ln(), (-(-x).ln()).ln());
        let guess = l1 - l2 + l2 / l1;
        if x > -1e-10 {
            log_newton(x, guess)
        } else {
            halley(x, guess)
        }
    };
    w.min(-1.0)
}

/// `K(y) = −W₋₁(−1/(ey))` for `y ≥ 1`; `K(1) = 1` and `K` increases like `log y`.
pub fn k_function(y: f64) -> Result<f64, SpecialError> {
    if y.is_nan() || y < 1.0 {
        return Err(SpecialError::Domain { function: "k_function", x: y, domain: "[1, inf)" });
    }
    if y == f64::INFINITY {
        return Ok(f64::INFINITY);
    }
    // With x = −1/(ey) the branch offset ex + 1 is exactly (y − 1)/y.
    let x = -1.0 / (std::f64::consts::E * y);
    Ok(-wm1_with_offset(x, (y - 1.0) / y))
}
