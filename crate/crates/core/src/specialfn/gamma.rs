use super::SpecialFnError;

/// `ln Γ(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64, SpecialFnError> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(SpecialFnError::Domain { function: "log_gamma", detail: format!("x={x}") });
    }
    if x == 1.0 || x == 2.0 {
        return Ok(0.0);
    }
    Ok(statrs::function::gamma::ln_gamma(x))
}

/// `ln B(a, b)` for positive arguments.
pub fn ln_beta(a: f64, b: f64) -> Result<f64, SpecialFnError> {
    Ok(log_gamma(a)? + log_gamma(b)? - log_gamma(a + b)?)
}

/// Unchecked `ln Γ` for internal constants whose arguments are positive by construction.
#[inline]
pub(crate) fn lgam(x: f64) -> f64 {
    debug_assert!(x > 0.0, "lgam({x})");
    statrs::function::gamma::ln_gamma(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert_eq!(log_gamma(1.0).unwrap(), 0.0);
        let half = log_gamma(0.5).unwrap();
        assert!((half - std::f64::consts::PI.sqrt().ln()).abs() < 1e-14);
        let ten = log_gamma(10.0).unwrap();
        assert!((ten - 362_880f64.ln()).abs() / ten < 1e-13);
    }

    #[test]
    fn wide_range_against_recurrence() {
        // ln Γ(x+1) = ln Γ(x) + ln x
        for &x in &[1e-6, 1e-3, 0.3, 2.5, 17.2, 1e3, 1e6] {
            let lhs = log_gamma(x + 1.0).unwrap();
            let rhs = log_gamma(x).unwrap() + f64::ln(x);
            let scale = lhs.abs().max(1.0);
            assert!((lhs - rhs).abs() / scale < 1e-13, "x={x}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn rejects_non_positive() {
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-1.5).is_err());
        assert!(log_gamma(f64::NAN).is_err());
    }
}
