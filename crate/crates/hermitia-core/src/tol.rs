//! Central tolerance constants.
//!
//! Structural tolerances gate exact algebraic identities of input data
//! (point symmetry types) evaluated in f64; boundary tolerances gate
//! boundary-orbit classification and group membership of parsed generators,
//! which sit downstream of eigensolves and rounded serialization and deserve
//! more slack. `HERMITIA_TOL` overrides the structural default at runtime
//! wherever `structural()` is consulted.

/// Default structural tolerance for algebraic identities.
pub const STRUCTURAL: f64 = 1e-9;

/// Tolerance for boundary-orbit classification thresholds.
pub const BOUNDARY: f64 = 1e-7;

/// Relative zero threshold for signature computations.
pub const SIGNATURE_ZERO: f64 = 1e-8;

/// Residual allowed for surface-group relators.
pub const RELATOR: f64 = 1e-6;

/// Structural tolerance, honoring the `HERMITIA_TOL` environment override.
///
/// A present but unparsable or non-positive value is ignored in favor of the
/// default, so a broken environment can never silence validation entirely.
pub fn structural() -> f64 {
    match std::env::var("HERMITIA_TOL") {
        Ok(s) => match s.trim().parse::<f64>() {
            Ok(v) if v.is_finite() && v > 0.0 => v,
            _ => STRUCTURAL,
        },
        Err(_) => STRUCTURAL,
    }
}

#[cfg(test)]
mod tests {
    #[test]
    fn structural_default() {
        // Not run with the env var set; the suite relies on defaults.
        assert_eq!(super::structural(), super::STRUCTURAL);
    }
}
