//! Bergmann kernels and the bounded cocycle `beta` on the matrix families.
//!
//! On `Su`, `Sp` and `SoStar` the kernel is `k(Z, W) = det(Id - W* Z)^{-2}`.
//! For points of the closed domain the eigenvalues `mu` of `W* Z` satisfy
//! `|mu| <= 1`, so every `1 - mu` lies in the closed right half-plane and
//! the principal logarithm gives a continuous branch:
//!
//! `log k(Z, W) = -2 sum_i Log(1 - mu_i)`.
//!
//! The cocycle on pairwise transverse triples of the closed domain is
//!
//! `beta(x, y, z) = -(arg k(x,y) + arg k(y,z) + arg k(z,x))`,
//!
//! halved on `SoStar`, whose points are skew and carry the kernel of the
//! ambient `n x n` matrix ball with every singular value doubled. `beta` is
//! invariant under the group, alternating, a cocycle in the interior, and
//! bounded by `pi * rank`; on transverse Shilov triples of the tube-type
//! families it takes the quantized values `pi (rank - 2k)`.

use crate::domains::{self, Family, Location};
use crate::error::{Error, Result};
use crate::numeric::{log_det_right_half, CMatrix};
use num_complex::Complex64 as C64;

/// Verifies `z` lies in the closed domain (any stratum but `Outside`).
fn check_closure_point(family: Family, z: &CMatrix, tol: f64) -> Result<()> {
    if !family.has_kernel() {
        return Err(Error::UnsupportedFamily(format!(
            "{} carries no matrix Bergmann kernel",
            family.name()
        )));
    }
    match domains::locate(family, z, tol)? {
        Location::Outside => Err(Error::Validation(
            "point lies outside the closed domain".into(),
        )),
        _ => Ok(()),
    }
}

/// Principal branch of `log k(Z, W) = -2 log det(Id - W* Z)` for two points
/// of the closed domain. Fails with `NonTransverse` when the pair is not
/// transverse.
pub fn log_kernel(family: Family, z: &CMatrix, w: &CMatrix) -> Result<C64> {
    check_closure_point(family, z, 1e-7)?;
    check_closure_point(family, w, 1e-7)?;
    let p = z.cols;
    let m = CMatrix::identity(p).sub(&w.adjoint().mul(z));
    let ld = log_det_right_half(&m, 1e-12, 1e-9)?;
    Ok(ld * -2.0)
}

/// Continuous argument of the Bergmann kernel, `Im log k(Z, W)`.
pub fn arg_kernel(family: Family, z: &CMatrix, w: &CMatrix) -> Result<f64> {
    Ok(log_kernel(family, z, w)?.im)
}

/// The bounded cocycle on pairwise transverse triples of the closed domain:
/// `-(arg k(x,y) + arg k(y,z) + arg k(z,x))`, halved on `SoStar`. Radians;
/// bounded by `pi * rank` and alternating in its arguments.
pub fn beta(family: Family, x: &CMatrix, y: &CMatrix, z: &CMatrix) -> Result<f64> {
    let raw = arg_kernel(family, x, y)? + arg_kernel(family, y, z)? + arg_kernel(family, z, x)?;
    let normalization = match family {
        Family::SoStar { .. } => 0.5,
        _ => 1.0,
    };
    Ok(-normalization * raw)
}

/// Hermitian triple product `exp(i beta)` on the unit circle.
pub fn htp(family: Family, x: &CMatrix, y: &CMatrix, z: &CMatrix) -> Result<C64> {
    Ok(C64::from_polar(1.0, beta(family, x, y, z)?))
}
