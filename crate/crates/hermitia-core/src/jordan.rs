//! Euclidean Jordan algebras attached to the tube-type domains, and Cayley
//! transforms between the bounded and tube realizations.
//!
//! Two algebras are implemented: real symmetric matrices `Sym(n, R)` for
//! `Sp(2n, R)` and complex Hermitian matrices `Herm(n, C)` for `SU(n,n)`,
//! with the product `x . y = (xy + yx)/2`. The spectral theorem provides a
//! frame of rank-one idempotents `c_i = v_i v_i*` with `x = sum lambda_i c_i`;
//! all spectral functions below are computed through it.
//!
//! The Cayley transform `T(Z) = (Z + i Id)(i Z + Id)^{-1}` maps the bounded
//! domain onto the tube over the positive cone and sends the Shilov points
//! transverse to `i Id` into the Jordan algebra itself. `CayleyMap` conjugates
//! it by a compact element so any Shilov point can serve as the base.

use crate::domains::{self, Family, Location};
use crate::error::{Error, Result};
use crate::numeric::{commuting_herm_eigen, herm_eigen, solve, CMatrix};
use num_complex::Complex64 as C64;

/// The Euclidean Jordan algebra of a tube-type family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JordanKind {
    /// `Sym(n, R)`, attached to `Sp(2n, R)`.
    SymReal(usize),
    /// `Herm(n, C)`, attached to `SU(n,n)`.
    HermComplex(usize),
}

/// The Jordan algebra carried by the family's tube realization, when one of
/// the two implemented matrix algebras applies.
pub fn jordan_kind(family: Family) -> Result<JordanKind> {
    family.validate()?;
    match family {
        Family::Sp { n } => Ok(JordanKind::SymReal(n)),
        Family::Su { p, q } if p == q => Ok(JordanKind::HermComplex(p)),
        _ => Err(Error::UnsupportedFamily(format!(
            "{} carries no Sym(n,R)/Herm(n,C) Jordan algebra",
            family.name()
        ))),
    }
}

/// Validates membership of `x` in the algebra: Hermitian, and real for
/// `SymReal`.
pub fn check_element(kind: JordanKind, x: &CMatrix) -> Result<()> {
    let n = match kind {
        JordanKind::SymReal(n) | JordanKind::HermComplex(n) => n,
    };
    if x.rows != n || x.cols != n {
        return Err(Error::Validation(format!(
            "jordan element must be {n}x{n}, got {}x{}",
            x.rows, x.cols
        )));
    }
    if !x.is_finite() {
        return Err(Error::Validation(
            "jordan element has non-finite entries".into(),
        ));
    }
    let scale = x.max_abs().max(1.0);
    if !x.is_hermitian(1e-8) {
        return Err(Error::Validation("jordan element must be Hermitian".into()));
    }
    if let JordanKind::SymReal(_) = kind {
        if x.data.iter().any(|z| z.im.abs() > 1e-8 * scale) {
            return Err(Error::Validation(
                "jordan element of Sym(n,R) must be real".into(),
            ));
        }
    }
    Ok(())
}

/// Jordan product `(x y + y x)/2`.
pub fn jordan_product(x: &CMatrix, y: &CMatrix) -> CMatrix {
    x.mul(y).add(&y.mul(x)).scale(C64::new(0.5, 0.0))
}

/// Spectral decomposition `x = sum lambda_i c_i` with a frame of rank-one
/// idempotents `c_i = v_i v_i*`; eigenvalues ascend.
pub fn spectral_decompose(x: &CMatrix) -> Result<(Vec<f64>, Vec<CMatrix>)> {
    let (lambdas, v) = herm_eigen(x)?;
    let n = x.rows;
    let mut frame = Vec::with_capacity(n);
    for k in 0..n {
        let c = CMatrix::from_fn(n, n, |i, j| v[(i, k)] * v[(j, k)].conj());
        frame.push(c);
    }
    Ok((lambdas, frame))
}

/// Jordan determinant: the product of spectral eigenvalues.
pub fn jdet(x: &CMatrix) -> Result<f64> {
    let (lambdas, _) = herm_eigen(x)?;
    Ok(lambdas.iter().product())
}

/// Jordan trace: the sum of spectral eigenvalues.
pub fn jtrace(x: &CMatrix) -> Result<f64> {
    let (lambdas, _) = herm_eigen(x)?;
    Ok(lambdas.iter().sum())
}

/// Counts `(k_plus, k_minus)` of spectral eigenvalues above `tol` and below
/// `-tol`.
pub fn spectral_plusminus(x: &CMatrix, tol: f64) -> Result<(usize, usize)> {
    let (lambdas, _) = herm_eigen(x)?;
    let plus = lambdas.iter().filter(|&&l| l > tol).count();
    let minus = lambdas.iter().filter(|&&l| l < -tol).count();
    Ok((plus, minus))
}

/// Spectral norm `max_i |lambda_i|`.
pub fn spectral_abs_norm(x: &CMatrix) -> Result<f64> {
    let (lambdas, _) = herm_eigen(x)?;
    Ok(lambdas.iter().fold(0.0f64, |m, l| m.max(l.abs())))
}

// ---------------------------------------------------------------------------
// Cayley transforms
// ---------------------------------------------------------------------------

/// Cayley transform `(Z + i Id)(i Z + Id)^{-1}` from the bounded realization
/// to the tube realization. Fails with `CayleyBasePoint` exactly when `Z` is
/// not transverse to the base point `i Id` of the Shilov boundary.
pub fn cayley(z: &CMatrix) -> Result<CMatrix> {
    if !z.is_square() {
        return Err(Error::Validation("cayley: matrix must be square".into()));
    }
    let n = z.rows;
    let id = CMatrix::identity(n);
    let i = C64::new(0.0, 1.0);
    let den = z.scale(i).add(&id);
    let den_inv = solve(&den, &id).map_err(|_| {
        Error::CayleyBasePoint(format!(
            "det(i Z + Id) = 0 within working precision for a {n}x{n} point"
        ))
    })?;
    // (Z + i Id) and (i Z + Id)^{-1} commute, so the product order is free
    Ok(z.add(&id.scale(i)).mul(&den_inv))
}

/// Inverse Cayley transform `(i Y - Id)^{-1} (i Id - Y)`.
pub fn cayley_inverse(y: &CMatrix) -> Result<CMatrix> {
    if !y.is_square() {
        return Err(Error::Validation(
            "cayley_inverse: matrix must be square".into(),
        ));
    }
    let n = y.rows;
    let id = CMatrix::identity(n);
    let i = C64::new(0.0, 1.0);
    let den = y.scale(i).sub(&id);
    let den_inv = solve(&den, &id).map_err(|_| {
        Error::CayleyBasePoint(format!(
            "det(i Y - Id) = 0 within working precision for a {n}x{n} tube point"
        ))
    })?;
    Ok(den_inv.mul(&id.scale(i).sub(y)))
}

/// Cayley transform based at an arbitrary Shilov point of a tube-type
/// `Sp`/`SU(n,n)` domain: a compact element moves the base to `i Id`, then
/// the standard transform applies. Singular exactly on the points
/// non-transverse to the base.
pub struct CayleyMap {
    kind: JordanKind,
    /// Left factor of the compact action (`Z -> u Z v`).
    u: CMatrix,
    /// Right factor of the compact action.
    v: CMatrix,
}

impl CayleyMap {
    /// Builds the map from a Shilov base point.
    ///
    /// For `Herm(n, C)` the compact element is `Z -> (i B*) Z`; for
    /// `Sym(n, R)` it is `Z -> U Z U^T` where `U` comes from a Takagi
    /// factorization of the symmetric unitary base `B = U_t U_t^T`:
    /// `U = diag(exp(i(pi/4 - theta_j/2))) O^T`.
    pub fn new(family: Family, base: &CMatrix) -> Result<CayleyMap> {
        let kind = jordan_kind(family)?;
        domains::check_point_shape(family, base)?;
        if domains::locate(family, base, 1e-7)? != Location::Shilov {
            return Err(Error::Validation(
                "cayley base point must lie on the Shilov boundary".into(),
            ));
        }
        let n = base.rows;
        match kind {
            JordanKind::HermComplex(_) => {
                let u = base.adjoint().scale(C64::new(0.0, 1.0));
                Ok(CayleyMap {
                    kind,
                    u,
                    v: CMatrix::identity(n),
                })
            }
            JordanKind::SymReal(_) => {
                // base = R + iQ with R, Q commuting real symmetric matrices
                let r = CMatrix::from_fn(n, n, |i, j| C64::new(base[(i, j)].re, 0.0));
                let q = CMatrix::from_fn(n, n, |i, j| C64::new(base[(i, j)].im, 0.0));
                let (alpha, beta, o) = commuting_herm_eigen(&r, &q)?;
                // eigenvector matrix of a real pair stays real orthogonal
                let o = CMatrix::from_fn(n, n, |i, j| C64::new(o[(i, j)].re, 0.0));
                let mut u = CMatrix::zeros(n, n);
                for j in 0..n {
                    let theta = beta[j].atan2(alpha[j]);
                    let modulus = (alpha[j] * alpha[j] + beta[j] * beta[j]).sqrt();
                    if (modulus - 1.0).abs() > 1e-7 {
                        return Err(Error::Numerical(format!(
                            "takagi: base eigenvalue modulus {modulus:.6} away from 1"
                        )));
                    }
                    let phase = C64::from_polar(1.0, std::f64::consts::FRAC_PI_4 - theta / 2.0);
                    for k in 0..n {
                        u[(j, k)] = phase * o[(k, j)];
                    }
                }
                let v = u.transpose();
                Ok(CayleyMap { kind, u, v })
            }
        }
    }

    /// Applies the based transform. Fails with `CayleyBasePoint` when `z` is
    /// not transverse to the base.
    pub fn apply(&self, z: &CMatrix) -> Result<CMatrix> {
        let moved = self.u.mul(z).mul(&self.v);
        cayley(&moved)
    }

    /// Applies the based transform to a Shilov point and projects the image
    /// onto the Jordan algebra, verifying the Hermitian (and real, for
    /// `Sym`) residual is below `1e-7` of scale.
    pub fn apply_shilov(&self, z: &CMatrix) -> Result<CMatrix> {
        let y = self.apply(z)?;
        let scale = y.max_abs().max(1.0);
        let herm_res = y.sub(&y.adjoint()).max_abs();
        if herm_res > 1e-7 * scale {
            return Err(Error::Numerical(format!(
                "cayley image of a Shilov point is not Hermitian (residual {herm_res:.3e})"
            )));
        }
        let mut h = y.add(&y.adjoint()).scale(C64::new(0.5, 0.0));
        if let JordanKind::SymReal(_) = self.kind {
            let im_res = h.data.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
            if im_res > 1e-7 * scale {
                return Err(Error::Numerical(format!(
                    "cayley image of an sp Shilov point is not real (residual {im_res:.3e})"
                )));
            }
            h = CMatrix::from_fn(h.rows, h.cols, |i, j| C64::new(h[(i, j)].re, 0.0));
        }
        Ok(h)
    }
}
