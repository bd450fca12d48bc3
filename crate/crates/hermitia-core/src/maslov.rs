//! Maslov indices of Shilov-boundary triples on the tube-type families
//! `Sp(2n, R)` and `SU(n,n)`, in three equivalent computations:
//!
//! * a subspace model on transverse triples: the middle subspace is written
//!   as the graph of a map between the outer two and the index is the
//!   signature of the induced form;
//! * a Jordan-algebra model: a Cayley transform based at the third point
//!   sends the other two into the algebra, and the index is the signature
//!   of their difference;
//! * for `Sp` a triple-form oracle: the signature of the quadratic form
//!   `w(v1,v2) + w(v2,v3) + w(v3,v1)` on the direct sum of the three
//!   Lagrangians.
//!
//! `maslov_extended` drops the transversality requirement: signatures are
//! taken with zero eigenvalues discarded, which yields the unique strict
//! cocycle extending the index to arbitrary Shilov triples. On pairwise
//! transverse triples all models agree with `beta / pi`.

use crate::domains::{self, Family, Location};
use crate::error::{Error, Result};
use crate::jordan::{spectral_plusminus, CayleyMap};
use crate::numeric::{herm_eigen, signature, solve, CMatrix};
use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Families with a subspace/Jordan Maslov model: `Sp { n }` and
/// `Su { n, n }`. Returns the model dimension `n`.
fn model_dim(family: Family) -> Result<usize> {
    family.validate()?;
    match family {
        Family::Sp { n } => Ok(n),
        Family::Su { p, q } if p == q => Ok(p),
        _ => Err(Error::UnsupportedFamily(format!(
            "{} has no subspace Maslov model",
            family.name()
        ))),
    }
}

/// Standard symplectic form `[[0, Id],[-Id, 0]]` on `R^{2n}`.
fn omega_plus(n: usize) -> CMatrix {
    let id = CMatrix::identity(n);
    let z = CMatrix::zeros(n, n);
    CMatrix::from_blocks(&z, &id, &id.neg(), &z)
}

/// Change of basis identifying the bounded `Sp` model inside `SU(n,n)` with
/// the real symplectic model: `(1/sqrt 2) [[Id, i Id],[Id, -i Id]]`.
fn bounded_to_real(n: usize) -> CMatrix {
    let s = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let i = C64::new(0.0, 1.0);
    let id = CMatrix::identity(n);
    CMatrix::from_blocks(
        &id.scale(s),
        &id.scale(s * i),
        &id.scale(s),
        &id.scale(-s * i),
    )
}

/// Greedy column-pivoted orthonormalization: selects `want` independent
/// columns of `b` and returns them orthonormalized. Fails when the numerical
/// column rank is smaller than `want`.
fn pivoted_orthonormal_columns(b: &CMatrix, want: usize) -> Result<CMatrix> {
    let rows = b.rows;
    let mut cols: Vec<Vec<C64>> = (0..b.cols)
        .map(|j| (0..rows).map(|i| b[(i, j)]).collect())
        .collect();
    let mut chosen: Vec<Vec<C64>> = Vec::with_capacity(want);
    for _ in 0..want {
        let (best, best_norm) = cols
            .iter()
            .enumerate()
            .map(|(idx, c)| (idx, c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()))
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap();
        if best_norm < 1e-8 {
            return Err(Error::Numerical(format!(
                "column rank below {want} in subspace extraction"
            )));
        }
        let mut v = cols[best].clone();
        for x in v.iter_mut() {
            *x /= best_norm;
        }
        // project the new direction out of the remaining columns (twice,
        // for orthogonality to working precision)
        for _ in 0..2 {
            for c in cols.iter_mut() {
                let dot: C64 = v.iter().zip(c.iter()).map(|(a, b)| a.conj() * *b).sum();
                for (x, y) in c.iter_mut().zip(v.iter()) {
                    *x -= dot * *y;
                }
            }
        }
        chosen.push(v);
    }
    Ok(CMatrix::from_fn(rows, want, |i, j| chosen[j][i]))
}

/// The subspace attached to a Shilov point, as an orthonormal `2n x n`
/// basis matrix.
///
/// * `Su { n, n }`: the graph `span(Z; Id)`, isotropic for
///   `diag(Id, -Id)`.
/// * `Sp { n }`: the real Lagrangian in `(R^{2n}, [[0,Id],[-Id,0]])`
///   spanned by the real and imaginary parts of `U* (Z; Id)` with
///   `U = (1/sqrt 2)[[Id, i Id],[Id, -i Id]]`.
pub fn subspace_of_shilov(family: Family, z: &CMatrix) -> Result<CMatrix> {
    let n = model_dim(family)?;
    domains::check_point_shape(family, z)?;
    if domains::locate(family, z, 1e-7)? != Location::Shilov {
        return Err(Error::Validation(
            "subspace model requires a Shilov boundary point".into(),
        ));
    }
    let graph = z.vcat(&CMatrix::identity(n));
    match family {
        Family::Su { .. } => pivoted_orthonormal_columns(&graph, n),
        Family::Sp { .. } => {
            let m = bounded_to_real(n).adjoint().mul(&graph);
            let re = CMatrix::from_fn(2 * n, n, |i, j| C64::new(m[(i, j)].re, 0.0));
            let im = CMatrix::from_fn(2 * n, n, |i, j| C64::new(m[(i, j)].im, 0.0));
            let basis = pivoted_orthonormal_columns(&re.hcat(&im), n)?;
            // the span is conjugation-invariant, so the basis must be real
            let im_res = basis.data.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
            if im_res > 1e-9 {
                return Err(Error::Numerical(format!(
                    "extracted Lagrangian basis is not real (residual {im_res:.3e})"
                )));
            }
            Ok(basis)
        }
        _ => unreachable!(),
    }
}

/// Validates a subspace basis for the model: shape `2n x n`, orthonormal
/// columns after re-orthonormalization, isotropy, and realness for `Sp`.
/// Returns the orthonormalized basis.
fn checked_basis(family: Family, l: &CMatrix) -> Result<CMatrix> {
    let n = model_dim(family)?;
    if l.rows != 2 * n || l.cols != n {
        return Err(Error::Validation(format!(
            "subspace basis must be {}x{}, got {}x{}",
            2 * n,
            n,
            l.rows,
            l.cols
        )));
    }
    if !l.is_finite() {
        return Err(Error::Validation(
            "subspace basis has non-finite entries".into(),
        ));
    }
    if let Family::Sp { .. } = family {
        let scale = l.max_abs().max(1.0);
        if l.data.iter().any(|z| z.im.abs() > 1e-9 * scale) {
            return Err(Error::Validation(
                "sp subspace basis must be real (a Lagrangian in R^{2n})".into(),
            ));
        }
    }
    let basis = pivoted_orthonormal_columns(l, n)
        .map_err(|_| Error::Validation("subspace basis does not have full column rank".into()))?;
    // isotropy
    let res = match family {
        Family::Sp { .. } => basis.transpose().mul(&omega_plus(n).mul(&basis)).max_abs(),
        Family::Su { .. } => {
            let mut h = CMatrix::identity(2 * n);
            for i in n..2 * n {
                h[(i, i)] = C64::new(-1.0, 0.0);
            }
            basis.adjoint().mul(&h.mul(&basis)).max_abs()
        }
        _ => unreachable!(),
    };
    if res > 1e-7 {
        return Err(Error::Validation(format!(
            "subspace is not isotropic (residual {res:.3e})"
        )));
    }
    Ok(basis)
}

/// Smallest eigenvalue of `[a b]* [a b]` for two orthonormal bases: zero iff
/// the spans intersect. Working with the eigenvalue rather than its square
/// root keeps the noise floor near machine precision.
fn pair_min_gap(a: &CMatrix, b: &CMatrix) -> Result<f64> {
    let m = a.hcat(b);
    let (l, _) = herm_eigen(&m.adjoint().mul(&m))?;
    Ok(l[0].max(0.0))
}

/// Maslov index of a transverse triple of model subspaces: the signature of
/// the graph form. For `Sp` the inputs are real Lagrangian bases and the
/// form is `w(v, T w)`; for `Su { n, n }` they are `diag(Id,-Id)`-isotropic
/// bases and the form is `i v* diag(-Id, Id) (T w)`. Fails with
/// `NonTransverse` when two of the subspaces intersect.
pub fn maslov_transverse(family: Family, l1: &CMatrix, l2: &CMatrix, l3: &CMatrix) -> Result<i64> {
    let n = model_dim(family)?;
    let b1 = checked_basis(family, l1)?;
    let b2 = checked_basis(family, l2)?;
    let b3 = checked_basis(family, l3)?;
    for (x, y, tag) in [(&b1, &b2, "1,2"), (&b2, &b3, "2,3"), (&b1, &b3, "1,3")] {
        let gap = pair_min_gap(x, y)?;
        if gap <= 1e-12 {
            return Err(Error::NonTransverse(format!(
                "subspaces {tag} intersect (smallest singular value squared {gap:.3e})"
            )));
        }
    }
    // T: span(b1) -> span(b3) with graph span(b2): solve [b2 | -b3](a;c) = b1
    let sys = b2.hcat(&b3.neg());
    let sol = solve(&sys, &b1).map_err(|_| {
        Error::NonTransverse("middle and third subspace are not complementary".into())
    })?;
    let c = sol.block(n, 0, n, n);
    let t_b1 = b3.mul(&c);
    let form = match family {
        Family::Sp { .. } => b1.transpose().mul(&omega_plus(n).mul(&t_b1)),
        Family::Su { .. } => {
            let mut neg_h = CMatrix::identity(2 * n);
            for i in 0..n {
                neg_h[(i, i)] = C64::new(-1.0, 0.0);
            }
            b1.adjoint()
                .mul(&neg_h.mul(&t_b1))
                .scale(C64::new(0.0, 1.0))
        }
        _ => unreachable!(),
    };
    let scale = form.max_abs().max(1e-6);
    if !form.is_hermitian(1e-7) {
        return Err(Error::Numerical(
            "graph form is not Hermitian; inputs are inconsistent".into(),
        ));
    }
    let sym = form.add(&form.adjoint()).scale(C64::new(0.5, 0.0));
    let (pos, neg, zero) = signature(&sym, 1e-9 * scale)?;
    if zero > 0 {
        return Err(Error::NonTransverse(
            "graph form degenerate within tolerance".into(),
        ));
    }
    Ok(pos as i64 - neg as i64)
}

/// Maslov index through the Jordan algebra: Cayley based at `x3` sends
/// `x1, x2` to algebra elements `y1, y2`, and the index is the signature of
/// `y2 - y1`. Requires a pairwise transverse Shilov triple.
pub fn maslov_jordan(family: Family, x1: &CMatrix, x2: &CMatrix, x3: &CMatrix) -> Result<i64> {
    model_dim(family)?;
    for (a, b, tag) in [(x1, x2, "1,2"), (x2, x3, "2,3"), (x1, x3, "1,3")] {
        if !domains::is_transverse(family, a, b, 1e-10)? {
            return Err(Error::NonTransverse(format!(
                "points {tag} are not transverse"
            )));
        }
    }
    let map = CayleyMap::new(family, x3)?;
    let y1 = map.apply_shilov(x1)?;
    let y2 = map.apply_shilov(x2)?;
    let d = y2.sub(&y1);
    let scale = d.max_abs().max(1e-6);
    let (pos, neg) = spectral_plusminus(&d, 1e-9 * scale)?;
    if pos + neg < d.rows {
        return Err(Error::NonTransverse(
            "jordan difference degenerate within tolerance".into(),
        ));
    }
    Ok(pos as i64 - neg as i64)
}

/// Triple-form oracle for `Sp`: the signature of
/// `w(v1,v2) + w(v2,v3) + w(v3,v1)` on `L1 (+) L2 (+) L3`, assembled from
/// the blocks `B_i^T Omega B_j` at `(1,2), (2,3), (3,1)` and symmetrized.
pub fn symplectic_triple_form(
    family: Family,
    l1: &CMatrix,
    l2: &CMatrix,
    l3: &CMatrix,
) -> Result<i64> {
    let n = match family {
        Family::Sp { n } => n,
        _ => {
            return Err(Error::UnsupportedFamily(format!(
                "{} has no symplectic triple form",
                family.name()
            )))
        }
    };
    let b1 = checked_basis(family, l1)?;
    let b2 = checked_basis(family, l2)?;
    let b3 = checked_basis(family, l3)?;
    let om = omega_plus(n);
    let mut s = CMatrix::zeros(3 * n, 3 * n);
    s.set_block(0, n, &b1.transpose().mul(&om.mul(&b2)));
    s.set_block(n, 2 * n, &b2.transpose().mul(&om.mul(&b3)));
    s.set_block(2 * n, 0, &b3.transpose().mul(&om.mul(&b1)));
    let q = s.add(&s.adjoint()).scale(C64::new(0.5, 0.0));
    let scale = q.max_abs().max(1e-6);
    let (pos, neg, zero) = signature(&q, 1e-9 * scale)?;
    if zero > 0 {
        return Err(Error::NonTransverse(
            "triple form degenerate within tolerance".into(),
        ));
    }
    Ok(pos as i64 - neg as i64)
}

/// Discarded-kernel signature `k_plus - k_minus` of a Jordan element.
fn strict_signature(d: &CMatrix) -> Result<i64> {
    let scale = d.max_abs().max(1e-6);
    let (pos, neg) = spectral_plusminus(d, 1e-7 * scale)?;
    Ok(pos as i64 - neg as i64)
}

/// Strict extension of the Maslov index to arbitrary (not necessarily
/// transverse) Shilov triples: with `y_i` the Cayley images based at an
/// auxiliary Shilov point transverse to all three inputs,
///
/// `D(y2 - y1) + D(y3 - y2) - D(y3 - y1)`,
///
/// where `D` is the signature with zero eigenvalues discarded. The value is
/// independent of the auxiliary point; `seed` only steers its search, which
/// fails with `DegenerateConfiguration` after 64 rejected draws.
pub fn maslov_extended(
    family: Family,
    x1: &CMatrix,
    x2: &CMatrix,
    x3: &CMatrix,
    seed: u64,
) -> Result<i64> {
    model_dim(family)?;
    for x in [x1, x2, x3] {
        domains::check_point_shape(family, x)?;
        if domains::locate(family, x, 1e-7)? != Location::Shilov {
            return Err(Error::Validation(
                "maslov_extended requires Shilov boundary points".into(),
            ));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut base = None;
    for _ in 0..64 {
        let z = domains::random_shilov(family, &mut rng);
        let t1 = domains::transversality(family, x1, &z)?.norm();
        let t2 = domains::transversality(family, x2, &z)?.norm();
        let t3 = domains::transversality(family, x3, &z)?.norm();
        if t1 > 1e-4 && t2 > 1e-4 && t3 > 1e-4 {
            base = Some(z);
            break;
        }
    }
    let base = base.ok_or_else(|| {
        Error::DegenerateConfiguration(
            "no auxiliary Shilov point transverse to all three inputs in 64 draws".into(),
        )
    })?;
    let map = CayleyMap::new(family, &base)?;
    let y1 = map.apply_shilov(x1)?;
    let y2 = map.apply_shilov(x2)?;
    let y3 = map.apply_shilov(x3)?;
    Ok(
        strict_signature(&y2.sub(&y1))? + strict_signature(&y3.sub(&y2))?
            - strict_signature(&y3.sub(&y1))?,
    )
}
