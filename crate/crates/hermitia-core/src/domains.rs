//! Bounded symmetric domain models for the classical families.
//!
//! Four families are supported, each in its standard bounded realization:
//!
//! * `Su { p, q }` (`p <= q`): complex `q x p` matrices `Z` with
//!   `Id - Z* Z` positive definite; rank `p`, tube type iff `p = q`.
//! * `Sp { n }`: symmetric `n x n` matrices, rank `n`, tube type.
//! * `SoStar { n }` (`n >= 2`): skew-symmetric `n x n` matrices, rank
//!   `floor(n/2)`, tube type iff `n` is even.
//! * `So2 { n }` (`n >= 2`): the Lie ball of column vectors `z` in `C^n`
//!   with `z* z < 1` and `1 + |z^T z|^2 - 2 z* z > 0`; rank 2, tube type.
//!
//! Points of the matrix families sit inside the ambient group as negative
//! graphs `span(Z; Id)`; the group acts by fractional linear maps
//! `Z -> (A Z + B)(C Z + D)^{-1}`. The Lie ball is acted on through its
//! projective quadric lift.

use crate::error::{Error, Result};
use crate::numeric::{
    self, det, expm, gaussian_matrix, herm_eigen, random_special_orthogonal, random_unitary, solve,
    CMatrix,
};
use num_complex::Complex64 as C64;
use rand::Rng;

/// Classical family of bounded symmetric domains, with its parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// `SU(p,q)` with `1 <= p <= q`; points are `q x p` matrices.
    Su { p: usize, q: usize },
    /// `Sp(2n, R)` with `n >= 1`; points are symmetric `n x n` matrices.
    Sp { n: usize },
    /// `SO*(2n)` with `n >= 2`; points are skew `n x n` matrices.
    SoStar { n: usize },
    /// `SO(2,n)` with `n >= 2`; points are vectors in the Lie ball of `C^n`.
    So2 { n: usize },
}

/// Stratification of the closed domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    Interior,
    /// Boundary stratum `k` for `1 <= k < rank`.
    Boundary(usize),
    /// The closed orbit: boundary stratum `k = rank`.
    Shilov,
    Outside,
}

impl Family {
    /// Checks the parameter constraints listed on each variant.
    pub fn validate(&self) -> Result<()> {
        match *self {
            Family::Su { p, q } => {
                if p < 1 || q < p {
                    return Err(Error::Validation(format!(
                        "su(p,q) requires 1 <= p <= q, got p={p} q={q}"
                    )));
                }
            }
            Family::Sp { n } => {
                if n < 1 {
                    return Err(Error::Validation("sp(2n) requires n >= 1".into()));
                }
            }
            Family::SoStar { n } => {
                if n < 2 {
                    return Err(Error::Validation(format!(
                        "so*(2n) requires n >= 2, got n={n}"
                    )));
                }
            }
            Family::So2 { n } => {
                if n < 2 {
                    return Err(Error::Validation(format!(
                        "so(2,n) requires n >= 2, got n={n}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Real rank of the domain.
    pub fn rank(&self) -> usize {
        match *self {
            Family::Su { p, .. } => p,
            Family::Sp { n } => n,
            Family::SoStar { n } => n / 2,
            Family::So2 { .. } => 2,
        }
    }

    /// Tube type iff the restricted root system is `C_r` rather than `BC_r`.
    pub fn is_tube(&self) -> bool {
        match *self {
            Family::Su { p, q } => p == q,
            Family::Sp { .. } => true,
            Family::SoStar { n } => n % 2 == 0,
            Family::So2 { .. } => true,
        }
    }

    /// Real dimension of the Shilov boundary.
    pub fn shilov_dim(&self) -> usize {
        let (r, a, b) = self.root_multiplicities();
        (2 * b + 1) * r + r * (r - 1) / 2 * a
    }

    /// Restricted root data `(rank, a, b)`: multiplicity `a` for the roots
    /// `(t_i - t_j)/..` pairs, `1` for `2 t_i`, and `2 b` for `t_i`.
    pub fn root_multiplicities(&self) -> (usize, usize, usize) {
        match *self {
            Family::Su { p, q } => (p, 2, q - p),
            Family::Sp { n } => (n, 1, 0),
            Family::SoStar { n } => (n / 2, 4, if n % 2 == 0 { 0 } else { 2 }),
            Family::So2 { n } => (2, n - 2, 0),
        }
    }

    /// Whether the space of pairwise transverse Shilov triples is connected.
    /// Holds exactly when the short roots `t_i` are present (non-tube type).
    pub fn triples_connected(&self) -> bool {
        let (_, _, b) = self.root_multiplicities();
        b >= 1
    }

    /// Shape `(rows, cols)` of a point matrix.
    pub fn point_shape(&self) -> (usize, usize) {
        match *self {
            Family::Su { p, q } => (q, p),
            Family::Sp { n } | Family::SoStar { n } => (n, n),
            Family::So2 { n } => (n, 1),
        }
    }

    /// Size of the square matrices realizing the ambient group.
    pub fn ambient_dim(&self) -> usize {
        match *self {
            Family::Su { p, q } => p + q,
            Family::Sp { n } | Family::SoStar { n } => 2 * n,
            Family::So2 { n } => n + 2,
        }
    }

    /// Whether the Bergmann kernel operations are available (`So2` is
    /// classified and acted on but carries no matrix kernel here).
    pub fn has_kernel(&self) -> bool {
        !matches!(self, Family::So2 { .. })
    }

    /// Lowercase tag used in serialized form.
    pub fn tag(&self) -> &'static str {
        match self {
            Family::Su { .. } => "su",
            Family::Sp { .. } => "sp",
            Family::SoStar { .. } => "sostar",
            Family::So2 { .. } => "so2",
        }
    }

    /// Human-readable name such as `su(2,3)`.
    pub fn name(&self) -> String {
        match *self {
            Family::Su { p, q } => format!("su({p},{q})"),
            Family::Sp { n } => format!("sp({},R)", 2 * n),
            Family::SoStar { n } => format!("so*({})", 2 * n),
            Family::So2 { n } => format!("so(2,{n})"),
        }
    }
}

/// Checks that `z` has the right shape and symmetry type for a point of the
/// family (symmetric for `Sp`, skew for `SoStar`), and finite entries.
pub fn check_point_shape(family: Family, z: &CMatrix) -> Result<()> {
    family.validate()?;
    let (rows, cols) = family.point_shape();
    if z.rows != rows || z.cols != cols {
        return Err(Error::Validation(format!(
            "point for {} must be {}x{}, got {}x{}",
            family.name(),
            rows,
            cols,
            z.rows,
            z.cols
        )));
    }
    if !z.is_finite() {
        return Err(Error::Validation("point has non-finite entries".into()));
    }
    let scale = z.max_abs().max(1.0);
    let stol = crate::tol::structural();
    match family {
        Family::Sp { .. } if z.sub(&z.transpose()).max_abs() > stol * scale => Err(
            Error::Validation("sp point must be a symmetric matrix".into()),
        ),
        Family::SoStar { .. } if z.add(&z.transpose()).max_abs() > stol * scale => Err(
            Error::Validation("so* point must be a skew-symmetric matrix".into()),
        ),
        _ => Ok(()),
    }
}

/// Classifies a point against the closed domain with boundary tolerance
/// `tol`: eigenvalues of `Id - Z* Z` below `-tol` put the point outside,
/// those within `tol` of zero count the boundary stratum (in pairs for
/// `SoStar`). For the Lie ball the classification uses `s = z* z` and
/// `1 + |z^T z|^2 - 2 s`.
pub fn locate(family: Family, z: &CMatrix, tol: f64) -> Result<Location> {
    check_point_shape(family, z)?;
    let r = family.rank();
    if let Family::So2 { .. } = family {
        let mut s = 0.0;
        let mut c = C64::new(0.0, 0.0);
        for i in 0..z.rows {
            s += z[(i, 0)].norm_sqr();
            c += z[(i, 0)] * z[(i, 0)];
        }
        let q = 1.0 + c.norm_sqr() - 2.0 * s;
        return Ok(if q.abs() <= tol {
            if (s - 1.0).abs() <= tol {
                Location::Shilov
            } else if s < 1.0 {
                Location::Boundary(1)
            } else {
                Location::Outside
            }
        } else if q > tol && s < 1.0 {
            Location::Interior
        } else {
            Location::Outside
        });
    }
    let p = z.cols;
    let m = CMatrix::identity(p).sub(&z.adjoint().mul(z));
    let (lambdas, _) = herm_eigen(&m)?;
    if lambdas.iter().any(|&l| l < -tol) {
        return Ok(Location::Outside);
    }
    let zeros = lambdas.iter().filter(|&&l| l.abs() <= tol).count();
    let stratum = match family {
        // singular values of a skew matrix pair up, so unit ones do too
        Family::SoStar { .. } => zeros.div_ceil(2),
        _ => zeros,
    };
    Ok(if stratum == 0 {
        Location::Interior
    } else if stratum >= r {
        Location::Shilov
    } else {
        Location::Boundary(stratum)
    })
}

/// Transversality pairing. For the matrix families this is
/// `det(Id - W* Z)`; two closure points are transverse iff it is nonzero.
/// For the Lie ball it is `1 - 2 w* z + (z^T z) conj(w^T w)`.
pub fn transversality(family: Family, z: &CMatrix, w: &CMatrix) -> Result<C64> {
    check_point_shape(family, z)?;
    check_point_shape(family, w)?;
    if let Family::So2 { .. } = family {
        let mut wz = C64::new(0.0, 0.0);
        let mut cz = C64::new(0.0, 0.0);
        let mut cw = C64::new(0.0, 0.0);
        for i in 0..z.rows {
            wz += w[(i, 0)].conj() * z[(i, 0)];
            cz += z[(i, 0)] * z[(i, 0)];
            cw += w[(i, 0)] * w[(i, 0)];
        }
        return Ok(C64::new(1.0, 0.0) - wz * 2.0 + cz * cw.conj());
    }
    let p = z.cols;
    Ok(det(&CMatrix::identity(p).sub(&w.adjoint().mul(z))))
}

/// Whether `|transversality| > tol`.
pub fn is_transverse(family: Family, z: &CMatrix, w: &CMatrix, tol: f64) -> Result<bool> {
    Ok(transversality(family, z, w)?.norm() > tol)
}

/// The origin of the bounded realization.
pub fn zero_point(family: Family) -> CMatrix {
    let (rows, cols) = family.point_shape();
    CMatrix::zeros(rows, cols)
}

/// A base point of the Shilov boundary.
///
/// * `Su`: the isometry `(Id_p; 0)` stacked into `q x p`.
/// * `Sp`: `Id_n`.
/// * `SoStar`: block-diagonal `[[0,1],[-1,0]]` pairs (last row/col zero for
///   odd `n`).
/// * `So2`: the first standard basis vector.
pub fn shilov_base(family: Family) -> CMatrix {
    let (rows, cols) = family.point_shape();
    match family {
        Family::Su { p, .. } => {
            let mut m = CMatrix::zeros(rows, cols);
            for i in 0..p {
                m[(i, i)] = C64::new(1.0, 0.0);
            }
            m
        }
        Family::Sp { n } => CMatrix::identity(n),
        Family::SoStar { n } => {
            let mut m = CMatrix::zeros(n, n);
            for b in 0..n / 2 {
                m[(2 * b, 2 * b + 1)] = C64::new(1.0, 0.0);
                m[(2 * b + 1, 2 * b)] = C64::new(-1.0, 0.0);
            }
            m
        }
        Family::So2 { .. } => {
            let mut m = CMatrix::zeros(rows, 1);
            m[(0, 0)] = C64::new(1.0, 0.0);
            m
        }
    }
}

/// The triple `(e, i e, -e)` with `e` the Shilov base point; pairwise
/// transverse and contained in a single maximal flat.
pub fn flat_triple(family: Family) -> (CMatrix, CMatrix, CMatrix) {
    let e = shilov_base(family);
    (e.clone(), e.scale(C64::new(0.0, 1.0)), e.neg())
}

// ---------------------------------------------------------------------------
// Group elements
// ---------------------------------------------------------------------------

/// Indefinite form `diag(Id_q, -Id_p)` preserved by `SU(p,q)` acting on
/// negative graphs `span(Z; Id_p)`.
fn su_form(p: usize, q: usize) -> CMatrix {
    let mut h = CMatrix::identity(p + q);
    for i in q..p + q {
        h[(i, i)] = C64::new(-1.0, 0.0);
    }
    h
}

/// Bilinear form whose invariance cuts the real form out of `SU(n,n)`:
/// `[[0, Id],[-Id, 0]]` for `Sp`, `[[0, Id],[Id, 0]]` for `SoStar`.
fn real_form_bilinear(family: Family) -> Option<CMatrix> {
    match family {
        Family::Sp { n } => {
            let id = CMatrix::identity(n);
            let z = CMatrix::zeros(n, n);
            Some(CMatrix::from_blocks(&z, &id, &id.neg(), &z))
        }
        Family::SoStar { n } => {
            let id = CMatrix::identity(n);
            let z = CMatrix::zeros(n, n);
            Some(CMatrix::from_blocks(&z, &id, &id, &z))
        }
        _ => None,
    }
}

/// Validates a group element of the family within tolerance `tol`:
/// preservation of the defining forms, determinant one, and for `So2`
/// membership in the identity component.
pub fn group_check(family: Family, g: &CMatrix, tol: f64) -> Result<()> {
    family.validate()?;
    let dim = family.ambient_dim();
    if g.rows != dim || g.cols != dim {
        return Err(Error::Validation(format!(
            "group element for {} must be {dim}x{dim}, got {}x{}",
            family.name(),
            g.rows,
            g.cols
        )));
    }
    if !g.is_finite() {
        return Err(Error::Validation(
            "group element has non-finite entries".into(),
        ));
    }
    let scale = g.max_abs().max(1.0);
    match family {
        Family::Su { p, q } => {
            let h = su_form(p, q);
            let res = g.adjoint().mul(&h.mul(g)).sub(&h).max_abs();
            if res > tol * scale * scale {
                return Err(Error::Validation(format!(
                    "group element does not preserve the su({p},{q}) form (residual {res:.3e})"
                )));
            }
            let d = det(g);
            if (d - C64::new(1.0, 0.0)).norm() > tol * 100.0 {
                return Err(Error::Validation(format!(
                    "group element must have determinant 1, got {:.6}{:+.6}i",
                    d.re, d.im
                )));
            }
        }
        Family::Sp { n } | Family::SoStar { n } => {
            let h = su_form(n, n);
            let res = g.adjoint().mul(&h.mul(g)).sub(&h).max_abs();
            if res > tol * scale * scale {
                return Err(Error::Validation(format!(
                    "group element does not preserve the su(n,n) form (residual {res:.3e})"
                )));
            }
            let omega = real_form_bilinear(family).unwrap();
            let res2 = g.transpose().mul(&omega.mul(g)).sub(&omega).max_abs();
            if res2 > tol * scale * scale {
                return Err(Error::Validation(format!(
                    "group element does not preserve the {} bilinear form (residual {res2:.3e})",
                    family.name()
                )));
            }
        }
        Family::So2 { n } => {
            if g.data.iter().any(|z| z.im.abs() > tol * scale) {
                return Err(Error::Validation(
                    "so(2,n) group element must be real".into(),
                ));
            }
            let mut q_form = CMatrix::identity(n + 2);
            for i in 2..n + 2 {
                q_form[(i, i)] = C64::new(-1.0, 0.0);
            }
            let res = g.transpose().mul(&q_form.mul(g)).sub(&q_form).max_abs();
            if res > tol * scale * scale {
                return Err(Error::Validation(format!(
                    "group element does not preserve the (2,n) form (residual {res:.3e})"
                )));
            }
            let d = det(g);
            if (d - C64::new(1.0, 0.0)).norm() > tol * 100.0 {
                return Err(Error::Validation(
                    "so(2,n) group element must have determinant 1".into(),
                ));
            }
            let upper = g[(0, 0)] * g[(1, 1)] - g[(0, 1)] * g[(1, 0)];
            if upper.re <= 0.0 {
                return Err(Error::Validation(
                    "so(2,n) group element must lie in the identity component".into(),
                ));
            }
        }
    }
    Ok(())
}

/// Applies a group element to a point: the fractional linear action
/// `Z -> (A Z + B)(C Z + D)^{-1}` for the matrix families, the projective
/// quadric action for the Lie ball. The element is assumed valid; the point
/// may lie anywhere in the closed domain (where `C Z + D` stays invertible).
pub fn apply(family: Family, g: &CMatrix, z: &CMatrix) -> Result<CMatrix> {
    check_point_shape(family, z)?;
    if let Family::So2 { n } = family {
        // lift to the quadric: w = ((1+c)/2, i(1-c)/2, z), with w1 - i w2 = 1
        let mut c = C64::new(0.0, 0.0);
        for i in 0..n {
            c += z[(i, 0)] * z[(i, 0)];
        }
        let one = C64::new(1.0, 0.0);
        let mut w = CMatrix::zeros(n + 2, 1);
        w[(0, 0)] = (one + c) * 0.5;
        w[(1, 0)] = C64::new(0.0, 0.5) * (one - c);
        for i in 0..n {
            w[(i + 2, 0)] = z[(i, 0)];
        }
        let wp = g.mul(&w);
        let lambda = wp[(0, 0)] - C64::new(0.0, 1.0) * wp[(1, 0)];
        if lambda.norm() <= 1e-12 * wp.max_abs().max(1.0) {
            return Err(Error::Numerical(
                "lie ball action: image leaves the affine chart".into(),
            ));
        }
        let mut out = CMatrix::zeros(n, 1);
        for i in 0..n {
            out[(i, 0)] = wp[(i + 2, 0)] / lambda;
        }
        return Ok(out);
    }
    let (rows, cols) = family.point_shape(); // (q, p)
    let a = g.block(0, 0, rows, rows);
    let b = g.block(0, rows, rows, cols);
    let c = g.block(rows, 0, cols, rows);
    let d = g.block(rows, rows, cols, cols);
    let num = a.mul(z).add(&b);
    let den = c.mul(z).add(&d);
    let den_inv_t = solve(&den.transpose(), &CMatrix::identity(cols))
        .map_err(|_| Error::Numerical("group action: denominator C Z + D is singular".into()))?;
    Ok(num.mul(&den_inv_t.transpose()))
}

// ---------------------------------------------------------------------------
// Random sampling (deterministic for a fixed RNG stream)
// ---------------------------------------------------------------------------

/// Random interior point: a Gaussian matrix of the right symmetry type,
/// rescaled to operator norm uniform in `(0.05, 0.9)`.
pub fn random_interior<R: Rng>(family: Family, rng: &mut R) -> CMatrix {
    let (rows, cols) = family.point_shape();
    if let Family::So2 { .. } = family {
        // scale into s < t^2 <= 0.49, which forces q >= 1 - 2 t^2 > 0
        let g = gaussian_matrix(rng, rows, 1);
        let t: f64 = rng.gen_range(0.05..0.7);
        let s = g.frobenius_norm().max(1e-12);
        return g.scale(C64::new(t / s, 0.0));
    }
    let g = gaussian_matrix(rng, rows, cols);
    let z = match family {
        Family::Sp { .. } => g.add(&g.transpose()).scale(C64::new(0.5, 0.0)),
        Family::SoStar { .. } => g.sub(&g.transpose()).scale(C64::new(0.5, 0.0)),
        _ => g,
    };
    let target: f64 = rng.gen_range(0.05..0.9);
    let norm = numeric::op_norm(&z).max(1e-12);
    z.scale(C64::new(target / norm, 0.0))
}

/// Random Shilov boundary point, sampled from the transitive `K`-orbit of
/// the base point.
pub fn random_shilov<R: Rng>(family: Family, rng: &mut R) -> CMatrix {
    match family {
        Family::Su { p, q } => {
            // first p columns of a Haar unitary: a random isometry
            let u = random_unitary(rng, q);
            let mut m = CMatrix::zeros(q, p);
            for i in 0..q {
                for j in 0..p {
                    m[(i, j)] = u[(i, j)];
                }
            }
            m
        }
        Family::Sp { n } => {
            let u = random_unitary(rng, n);
            u.mul(&u.transpose())
        }
        Family::SoStar { n } => {
            let u = random_unitary(rng, n);
            let base = shilov_base(family);
            u.mul(&base.mul(&u.transpose()))
        }
        Family::So2 { n } => {
            let mut x = CMatrix::zeros(n, 1);
            loop {
                let mut s = 0.0;
                for i in 0..n {
                    let v: f64 = rng.sample(rand_distr::StandardNormal);
                    x[(i, 0)] = C64::new(v, 0.0);
                    s += v * v;
                }
                if s > 1e-12 {
                    let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                    return x.scale(C64::from_polar(1.0 / s.sqrt(), theta));
                }
            }
        }
    }
}

/// Random element of the maximal compact subgroup fixing the origin:
/// `diag(U_q, U_p)` normalized to determinant one for `Su`,
/// `diag(U, conj(U))` for `Sp`/`SoStar`, and `diag(R_theta, O)` for `So2`.
pub fn random_k<R: Rng>(family: Family, rng: &mut R) -> CMatrix {
    match family {
        Family::Su { p, q } => {
            let uq = random_unitary(rng, q);
            let up = random_unitary(rng, p);
            let mut g = CMatrix::zeros(p + q, p + q);
            g.set_block(0, 0, &uq);
            g.set_block(q, q, &up);
            let d = det(&g);
            let phase = d.norm().recip() * d; // unit modulus
            let corr = C64::from_polar(1.0, -phase.arg() / (p + q) as f64);
            g.scale(corr)
        }
        Family::Sp { n } | Family::SoStar { n } => {
            let u = random_unitary(rng, n);
            let mut g = CMatrix::zeros(2 * n, 2 * n);
            g.set_block(0, 0, &u);
            g.set_block(n, n, &u.conj());
            g
        }
        Family::So2 { n } => {
            let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let o = random_special_orthogonal(rng, n);
            let mut g = CMatrix::zeros(n + 2, n + 2);
            g[(0, 0)] = C64::new(theta.cos(), 0.0);
            g[(0, 1)] = C64::new(-theta.sin(), 0.0);
            g[(1, 0)] = C64::new(theta.sin(), 0.0);
            g[(1, 1)] = C64::new(theta.cos(), 0.0);
            g.set_block(2, 2, &o);
            g
        }
    }
}

/// Random transvection `exp(X)` with `X` in the `p` part of the Cartan
/// decomposition, of moderate norm.
pub fn random_transvection<R: Rng>(family: Family, rng: &mut R) -> CMatrix {
    let x = random_p_element(family, rng, 0.7);
    expm(&x)
}

/// Random element of the `p` part of the Cartan decomposition, rescaled to
/// Frobenius norm `norm`.
pub fn random_p_element<R: Rng>(family: Family, rng: &mut R, norm: f64) -> CMatrix {
    let m = match family {
        Family::Su { p, q } => {
            let w = gaussian_matrix(rng, q, p);
            let z = CMatrix::zeros(q, q);
            let zp = CMatrix::zeros(p, p);
            CMatrix::from_blocks(&z, &w, &w.adjoint(), &zp)
        }
        Family::Sp { n } => {
            let g = gaussian_matrix(rng, n, n);
            let w = g.add(&g.transpose()).scale(C64::new(0.5, 0.0));
            let z = CMatrix::zeros(n, n);
            CMatrix::from_blocks(&z, &w, &w.adjoint(), &z)
        }
        Family::SoStar { n } => {
            let g = gaussian_matrix(rng, n, n);
            let w = g.sub(&g.transpose()).scale(C64::new(0.5, 0.0));
            let z = CMatrix::zeros(n, n);
            CMatrix::from_blocks(&z, &w, &w.adjoint(), &z)
        }
        Family::So2 { n } => {
            let mut b = CMatrix::zeros(2, n);
            for i in 0..2 {
                for j in 0..n {
                    let v: f64 = rng.sample(rand_distr::StandardNormal);
                    b[(i, j)] = C64::new(v, 0.0);
                }
            }
            let z2 = CMatrix::zeros(2, 2);
            let zn = CMatrix::zeros(n, n);
            CMatrix::from_blocks(&z2, &b, &b.transpose(), &zn)
        }
    };
    let f = m.frobenius_norm().max(1e-12);
    m.scale(C64::new(norm / f, 0.0))
}

/// Random group element `k exp(X)` with `k` compact and `X` in `p`.
pub fn random_group<R: Rng>(family: Family, rng: &mut R) -> CMatrix {
    let k = random_k(family, rng);
    let t = random_transvection(family, rng);
    k.mul(&t)
}

/// Samples Shilov points until the triple is pairwise transverse with
/// pairing modulus above `margin`. Returns an error after 256 attempts.
pub fn random_transverse_shilov_triple<R: Rng>(
    family: Family,
    rng: &mut R,
    margin: f64,
) -> Result<(CMatrix, CMatrix, CMatrix)> {
    for _ in 0..256 {
        let x = random_shilov(family, rng);
        let y = random_shilov(family, rng);
        let z = random_shilov(family, rng);
        let txy = transversality(family, &x, &y)?.norm();
        let tyz = transversality(family, &y, &z)?.norm();
        let tzx = transversality(family, &z, &x)?.norm();
        if txy > margin && tyz > margin && tzx > margin {
            return Ok((x, y, z));
        }
    }
    Err(Error::DegenerateConfiguration(format!(
        "no transverse Shilov triple with margin {margin} found in 256 draws"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const ALL: [Family; 5] = [
        Family::Su { p: 1, q: 2 },
        Family::Su { p: 2, q: 2 },
        Family::Sp { n: 2 },
        Family::SoStar { n: 3 },
        Family::So2 { n: 4 },
    ];

    #[test]
    fn invariants_table() {
        assert_eq!(Family::Su { p: 2, q: 3 }.rank(), 2);
        assert!(!Family::Su { p: 2, q: 3 }.is_tube());
        assert!(Family::Su { p: 2, q: 2 }.is_tube());
        assert_eq!(Family::Su { p: 2, q: 3 }.shilov_dim(), 8); // 2pq - p^2
        assert_eq!(Family::Sp { n: 3 }.shilov_dim(), 6); // n(n+1)/2
        assert_eq!(Family::SoStar { n: 4 }.shilov_dim(), 6); // n(n-1)/2
        assert_eq!(Family::SoStar { n: 3 }.shilov_dim(), 5);
        assert_eq!(Family::So2 { n: 5 }.shilov_dim(), 5);
        assert!(Family::SoStar { n: 4 }.is_tube());
        assert!(!Family::SoStar { n: 5 }.is_tube());
        assert!(Family::Su { p: 1, q: 3 }.triples_connected());
        assert!(!Family::Sp { n: 2 }.triples_connected());
    }

    #[test]
    fn parameter_validation() {
        assert!(Family::Su { p: 3, q: 2 }.validate().is_err());
        assert!(Family::Su { p: 0, q: 2 }.validate().is_err());
        assert!(Family::Sp { n: 0 }.validate().is_err());
        assert!(Family::SoStar { n: 1 }.validate().is_err());
        assert!(Family::So2 { n: 1 }.validate().is_err());
        for f in ALL {
            f.validate().unwrap();
        }
    }

    #[test]
    fn base_points_classify() {
        for f in ALL {
            let zero = zero_point(f);
            assert_eq!(
                locate(f, &zero, 1e-9).unwrap(),
                Location::Interior,
                "{}",
                f.name()
            );
            let e = shilov_base(f);
            assert_eq!(
                locate(f, &e, 1e-9).unwrap(),
                Location::Shilov,
                "{}",
                f.name()
            );
            let outside = e.scale(C64::new(1.5, 0.0));
            assert_eq!(
                locate(f, &outside, 1e-9).unwrap(),
                Location::Outside,
                "{}",
                f.name()
            );
        }
    }

    #[test]
    fn flat_triple_on_shilov_and_transverse() {
        for f in ALL {
            if !f.has_kernel() {
                continue;
            }
            let (x, y, z) = flat_triple(f);
            for m in [&x, &y, &z] {
                assert_eq!(locate(f, m, 1e-9).unwrap(), Location::Shilov);
            }
            assert!(is_transverse(f, &x, &y, 1e-6).unwrap());
            assert!(is_transverse(f, &y, &z, 1e-6).unwrap());
            assert!(is_transverse(f, &z, &x, 1e-6).unwrap());
        }
    }

    #[test]
    fn boundary_strata_detected() {
        // su(2,2) point with exactly one unit singular value
        let f = Family::Su { p: 2, q: 2 };
        let mut z = CMatrix::zeros(2, 2);
        z[(0, 0)] = C64::new(1.0, 0.0);
        z[(1, 1)] = C64::new(0.4, 0.0);
        assert_eq!(locate(f, &z, 1e-9).unwrap(), Location::Boundary(1));
        // so*(4): one skew pair at modulus 1 is already the shilov stratum
        let f2 = Family::SoStar { n: 4 };
        let mut w = CMatrix::zeros(4, 4);
        w[(0, 1)] = C64::new(1.0, 0.0);
        w[(1, 0)] = C64::new(-1.0, 0.0);
        w[(2, 3)] = C64::new(0.3, 0.0);
        w[(3, 2)] = C64::new(-0.3, 0.0);
        assert_eq!(locate(f2, &w, 1e-9).unwrap(), Location::Boundary(1));
        w[(2, 3)] = C64::new(1.0, 0.0);
        w[(3, 2)] = C64::new(-1.0, 0.0);
        assert_eq!(locate(f2, &w, 1e-9).unwrap(), Location::Shilov);
        // lie ball: real unit vector is shilov, mixed-phase unit vector is
        // the intermediate stratum
        let f3 = Family::So2 { n: 4 };
        let mut v = CMatrix::zeros(4, 1);
        v[(0, 0)] = C64::new(0.8, 0.0);
        v[(1, 0)] = C64::new(0.0, 0.6);
        // s = 1, c = 0.64 - 0.36 = 0.28, q = 1 + 0.0784 - 2 < 0 => outside
        assert_eq!(locate(f3, &v, 1e-9).unwrap(), Location::Outside);
        let mut b = CMatrix::zeros(4, 1);
        // s = 1/2, c = 0, q = 0: boundary stratum 1
        b[(0, 0)] = C64::new(0.5, 0.0);
        b[(1, 0)] = C64::new(0.0, 0.5);
        assert_eq!(locate(f3, &b, 1e-9).unwrap(), Location::Boundary(1));
    }

    #[test]
    fn shape_and_symmetry_rejected() {
        let f = Family::Sp { n: 2 };
        let mut z = CMatrix::zeros(2, 2);
        z[(0, 1)] = C64::new(0.5, 0.0);
        z[(1, 0)] = C64::new(-0.5, 0.0);
        assert!(check_point_shape(f, &z).is_err());
        assert!(check_point_shape(Family::SoStar { n: 2 }, &CMatrix::identity(2)).is_err());
        assert!(check_point_shape(Family::Su { p: 1, q: 2 }, &CMatrix::zeros(1, 2)).is_err());
    }

    #[test]
    fn random_samples_classify_and_groups_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        for f in ALL {
            for _ in 0..20 {
                let z = random_interior(f, &mut rng);
                assert_eq!(
                    locate(f, &z, 1e-9).unwrap(),
                    Location::Interior,
                    "{}",
                    f.name()
                );
                let s = random_shilov(f, &mut rng);
                assert_eq!(
                    locate(f, &s, 1e-7).unwrap(),
                    Location::Shilov,
                    "{}",
                    f.name()
                );
                let k = random_k(f, &mut rng);
                group_check(f, &k, 1e-9).unwrap();
                let g = random_group(f, &mut rng);
                group_check(f, &g, 1e-8).unwrap();
            }
        }
    }

    #[test]
    fn action_preserves_location() {
        let mut rng = ChaCha8Rng::seed_from_u64(103);
        for f in ALL {
            for _ in 0..15 {
                let g = random_group(f, &mut rng);
                let z = random_interior(f, &mut rng);
                let gz = apply(f, &g, &z).unwrap();
                assert_eq!(
                    locate(f, &gz, 1e-7).unwrap(),
                    Location::Interior,
                    "{}",
                    f.name()
                );
                let s = random_shilov(f, &mut rng);
                let gs = apply(f, &g, &s).unwrap();
                assert_eq!(
                    locate(f, &gs, 1e-6).unwrap(),
                    Location::Shilov,
                    "{}",
                    f.name()
                );
            }
        }
    }

    #[test]
    fn action_is_a_group_action() {
        let mut rng = ChaCha8Rng::seed_from_u64(107);
        for f in ALL {
            let g1 = random_group(f, &mut rng);
            let g2 = random_group(f, &mut rng);
            let z = random_interior(f, &mut rng);
            let lhs = apply(f, &g1.mul(&g2), &z).unwrap();
            let rhs = apply(f, &g1, &apply(f, &g2, &z).unwrap()).unwrap();
            assert!(
                lhs.sub(&rhs).max_abs() < 1e-9,
                "{}: action not compatible with multiplication",
                f.name()
            );
            let id = CMatrix::identity(f.ambient_dim());
            let fixed = apply(f, &id, &z).unwrap();
            assert!(fixed.sub(&z).max_abs() < 1e-12);
        }
    }

    #[test]
    fn k_fixes_origin() {
        let mut rng = ChaCha8Rng::seed_from_u64(109);
        for f in ALL {
            let k = random_k(f, &mut rng);
            let z = zero_point(f);
            let kz = apply(f, &k, &z).unwrap();
            assert!(kz.max_abs() < 1e-12, "{}", f.name());
        }
    }

    #[test]
    fn transversality_against_action() {
        // transversality vanishes exactly on non-transverse pairs:
        // a shilov point is never transverse to itself
        let mut rng = ChaCha8Rng::seed_from_u64(113);
        for f in ALL {
            let s = random_shilov(f, &mut rng);
            let t = transversality(f, &s, &s).unwrap();
            assert!(t.norm() < 1e-8, "{}: self-pairing {t}", f.name());
            let z = random_interior(f, &mut rng);
            assert!(is_transverse(f, &z, &s, 1e-8).unwrap(), "{}", f.name());
        }
    }

    #[test]
    fn transverse_triples_sample() {
        let mut rng = ChaCha8Rng::seed_from_u64(127);
        for f in ALL {
            let (x, y, z) = random_transverse_shilov_triple(f, &mut rng, 1e-4).unwrap();
            assert!(is_transverse(f, &x, &y, 1e-5).unwrap());
            assert!(is_transverse(f, &y, &z, 1e-5).unwrap());
            assert!(is_transverse(f, &z, &x, 1e-5).unwrap());
        }
    }

    #[test]
    fn group_check_rejects_wrong_family() {
        // a valid sp(4) element fails so*(4) validation: different bilinear form
        let mut rng = ChaCha8Rng::seed_from_u64(131);
        let g = random_group(Family::Sp { n: 2 }, &mut rng);
        // transvections with generic p-part break the other form
        assert!(group_check(Family::SoStar { n: 2 }, &g, 1e-9).is_err());
    }
}
