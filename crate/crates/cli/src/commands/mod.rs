pub mod factorize;
pub mod fixtures;
pub mod npp;
pub mod preprocess;
pub mod uniqueness;

/// `rho(alpha B*)` at or above this makes `I - alpha B*` nearly singular.
pub const RHO_WARN: f64 = 0.99;

pub fn warn_rho(context: &str, rho: f64) {
    if rho >= RHO_WARN {
        eprintln!(
            "warning: {context}: spectral radius {rho:.6} >= {RHO_WARN}; I - B* is close to singular and recovering V through its inverse is unreliable"
        );
    }
}
