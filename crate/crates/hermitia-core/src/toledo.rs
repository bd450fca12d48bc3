//! Toledo invariants of surface group representations.
//!
//! A representation of the genus `g` surface group is stored as the tuple of
//! generator images `(A_1, B_1, .., A_g, B_g)` subject to the relator
//! `prod_i [A_i, B_i] = Id`. The Toledo invariant is the Bergmann cocycle
//! summed over the fan of triangles based at an interior orbit point; it is
//! independent of the basepoint, bounded by `4 pi (g-1) rank`, and equal to
//! `2 pi` times an integer winding number for the symplectic family.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rand::Rng;

use crate::bergmann::beta;
use crate::domains::{self, Family, Location};
use crate::error::{Error, Result};
use crate::numeric::{
    det, expm, gaussian_c64, herm_eigen, inverse, pairwise_sum, polar, unitary_eigen, CMatrix,
};
use crate::tol;

// ---------------------------------------------------------------------------
// Representations
// ---------------------------------------------------------------------------

/// Images of the standard surface group generators. `a` and `b` hold the
/// images of `A_1..A_g` and `B_1..B_g` as group elements of the family;
/// the relator `prod_i [A_i, B_i]` must be the identity within `1e-6`.
#[derive(Clone, Debug)]
pub struct SurfaceGroupRep {
    pub family: Family,
    pub genus: usize,
    pub a: Vec<CMatrix>,
    pub b: Vec<CMatrix>,
}

/// Toledo invariant together with the data needed to interpret it.
#[derive(Clone, Debug)]
pub struct ToledoResult {
    /// Fan sum of Bergmann cocycle values at the basepoint orbit.
    pub value: f64,
    /// Milnor-Wood bound `4 pi (genus - 1) rank`.
    pub bound: f64,
    /// Whether `value` is within `1e-3` of the bound.
    pub maximal: bool,
    /// Integer winding number when separately computed (symplectic family).
    pub winding: Option<i64>,
}

/// The relator word `prod_i A_i B_i A_i^{-1} B_i^{-1}` evaluated in order.
pub fn relator(rep: &SurfaceGroupRep) -> Result<CMatrix> {
    let letters = word_letters(rep)?;
    let dim = rep.family.ambient_dim();
    let mut w = CMatrix::identity(dim);
    for l in &letters {
        w = w.mul(l);
    }
    Ok(w)
}

/// Validates generator counts, group membership of every image, and the
/// relator residual (Frobenius distance to the identity, tolerance `1e-6`).
pub fn validate_rep(rep: &SurfaceGroupRep, tol: f64) -> Result<()> {
    rep.family.validate()?;
    if rep.genus == 0 {
        return Err(Error::Validation("genus must be at least 1".into()));
    }
    if rep.a.len() != rep.genus || rep.b.len() != rep.genus {
        return Err(Error::Validation(format!(
            "genus {} representation needs {} generators of each kind, got {} and {}",
            rep.genus,
            rep.genus,
            rep.a.len(),
            rep.b.len()
        )));
    }
    for (label, list) in [("A", &rep.a), ("B", &rep.b)] {
        for (i, m) in list.iter().enumerate() {
            domains::group_check(rep.family, m, tol)
                .map_err(|e| Error::Validation(format!("generator {label}_{}: {e}", i + 1)))?;
        }
    }
    let r = relator(rep)?;
    let dim = rep.family.ambient_dim();
    let res = r.sub(&CMatrix::identity(dim)).frobenius_norm();
    if res > tol::RELATOR {
        return Err(Error::RelatorViolation(format!(
            "relator residual {res:.3e} exceeds {:.1e}",
            tol::RELATOR
        )));
    }
    Ok(())
}

/// The `4g` letters of the relator word: `A_i, B_i, A_i^{-1}, B_i^{-1}` for
/// each handle in order.
fn word_letters(rep: &SurfaceGroupRep) -> Result<Vec<CMatrix>> {
    let mut letters = Vec::with_capacity(4 * rep.genus);
    for i in 0..rep.genus {
        let a_inv = inverse(&rep.a[i])?;
        let b_inv = inverse(&rep.b[i])?;
        letters.push(rep.a[i].clone());
        letters.push(rep.b[i].clone());
        letters.push(a_inv);
        letters.push(b_inv);
    }
    Ok(letters)
}

// ---------------------------------------------------------------------------
// Fan decomposition
// ---------------------------------------------------------------------------

/// One triangle `(e, w1, w2)` of the fan based at the identity, where `w1`
/// and `w2` are consecutive prefix products of the relator word.
#[derive(Clone, Debug)]
pub struct FanTriple {
    /// Position `j` in `1..=4g-1`; the triple is `(e, w_j, w_{j+1})`.
    pub index: usize,
    pub w1: CMatrix,
    pub w2: CMatrix,
    /// True when two of the three group elements coincide; such a triple
    /// contributes zero to every cocycle sum and is skipped.
    pub degenerate: bool,
}

/// Fan decomposition of the fundamental cycle: the `4g - 1` triples
/// `(e, w_j, w_{j+1})` over the prefix products `w_j` of the relator word
/// (`w_{4g}` is the full relator, identity up to the relator residual).
pub fn fan_cycle(rep: &SurfaceGroupRep) -> Result<Vec<FanTriple>> {
    let letters = word_letters(rep)?;
    let dim = rep.family.ambient_dim();
    let id = CMatrix::identity(dim);
    // prefixes[j] = w_{j+1} = product of the first j+1 letters
    let mut prefixes = Vec::with_capacity(letters.len());
    let mut w = id.clone();
    for l in &letters {
        w = w.mul(l);
        prefixes.push(w.clone());
    }
    let mut fan = Vec::with_capacity(letters.len() - 1);
    for j in 1..letters.len() {
        let w1 = prefixes[j - 1].clone();
        let w2 = prefixes[j].clone();
        let scale = w1.max_abs().max(w2.max_abs()).max(1.0);
        let d_tol = 1e-7 * scale;
        let degenerate = w1.sub(&id).max_abs() <= d_tol
            || w2.sub(&id).max_abs() <= d_tol
            || w1.sub(&w2).max_abs() <= d_tol;
        fan.push(FanTriple {
            index: j,
            w1,
            w2,
            degenerate,
        });
    }
    Ok(fan)
}

// ---------------------------------------------------------------------------
// Toledo invariant
// ---------------------------------------------------------------------------

/// Toledo invariant: the Bergmann cocycle summed over the fan triangles
/// moved to the orbit of `basepoint` (default: the center of the domain).
/// The basepoint must be interior; the sum is basepoint independent up to
/// numerical error. Degenerate fan triples contribute exactly zero, so the
/// trivial representation yields exactly `0.0`.
pub fn toledo(rep: &SurfaceGroupRep, basepoint: Option<&CMatrix>) -> Result<ToledoResult> {
    validate_rep(rep, tol::BOUNDARY)?;
    if !rep.family.has_kernel() {
        return Err(Error::UnsupportedFamily(format!(
            "Toledo invariant needs the Bergmann kernel, not available for {}",
            rep.family.name()
        )));
    }
    let center = domains::zero_point(rep.family);
    let x0 = basepoint.unwrap_or(&center);
    match domains::locate(rep.family, x0, tol::BOUNDARY)? {
        Location::Interior => {}
        other => {
            return Err(Error::Validation(format!(
                "basepoint must be interior, found {other:?}"
            )))
        }
    }
    let fan = fan_cycle(rep)?;
    let mut terms = Vec::with_capacity(fan.len());
    for t in &fan {
        if t.degenerate {
            continue;
        }
        let y = domains::apply(rep.family, &t.w1, x0)?;
        let z = domains::apply(rep.family, &t.w2, x0)?;
        terms.push(beta(rep.family, x0, &y, &z)?);
    }
    let value = pairwise_sum(&terms);
    let bound = milnor_wood_bound(rep.family, rep.genus);
    Ok(ToledoResult {
        value,
        bound,
        maximal: (value - bound).abs() < 1e-3,
        winding: None,
    })
}

/// The Milnor-Wood bound `4 pi (genus - 1) rank` for the family.
pub fn milnor_wood_bound(family: Family, genus: usize) -> f64 {
    4.0 * PI * (genus as f64 - 1.0) * family.rank() as f64
}

/// Whether the representation is maximal: Toledo value within `1e-3` of the
/// Milnor-Wood bound.
pub fn is_maximal(rep: &SurfaceGroupRep) -> Result<bool> {
    Ok(toledo(rep, None)?.maximal)
}

/// Checks `|toledo| <= 4 pi (genus - 1) rank + 1e-4`.
pub fn milnor_wood_check(rep: &SurfaceGroupRep) -> Result<bool> {
    let t = toledo(rep, None)?;
    Ok(t.value.abs() <= t.bound + 1e-4)
}

// ---------------------------------------------------------------------------
// Winding number (symplectic family)
// ---------------------------------------------------------------------------

/// Integer winding number of the relator path for a symplectic
/// representation, normalized so that `toledo = 2 pi * winding`. The path
/// interpolates each letter of the relator word to the identity through
/// polar-factor geodesics; the angle swept by `det` of the upper block of
/// the polar-unitary factor is accumulated along it. The matrix group
/// double covers the circle of the cocycle normalization, so the reported
/// winding is minus twice the raw determinant winding and is always even.
///
/// Errors: `UnsupportedFamily` for non-symplectic input, `SingularPolar`
/// when the path meets a nearly singular polar decomposition, `Numerical`
/// when the accumulated angle does not stabilize to an integer within
/// `1e-3` after at most 20 subdivision refinements per segment.
pub fn toledo_winding(rep: &SurfaceGroupRep) -> Result<i64> {
    let n = match rep.family {
        Family::Sp { n } => n,
        _ => {
            return Err(Error::UnsupportedFamily(format!(
                "winding number is defined for the symplectic family, not {}",
                rep.family.name()
            )))
        }
    };
    validate_rep(rep, tol::BOUNDARY)?;
    let letters = word_letters(rep)?;
    let mut w = CMatrix::identity(2 * n);
    let mut total = 0.0;
    for l in &letters {
        let seg = LetterPath::new(l, n)?;
        total += winding_segment(&w, &seg, n)?;
        w = w.mul(l);
    }
    // the relator path is closed, so the determinant makes a whole number
    // of turns; the reported winding is -2 times that count
    let raw = -total / PI;
    let nearest = raw.round();
    if (raw - nearest).abs() > 1e-3 {
        return Err(Error::Numerical(format!(
            "winding {raw:.6} is not within 1e-3 of an integer"
        )));
    }
    Ok(nearest as i64)
}

/// Polar-geodesic interpolation data for one letter `l = u p`: the unitary
/// factor is block diagonal `diag(a, conj a)` with `a` in `U(n)`, and the
/// positive factor is powered through its eigendecomposition.
struct LetterPath {
    /// Eigendecomposition of the upper block `a` of the unitary factor.
    u_angles: Vec<f64>,
    u_vectors: CMatrix,
    /// Eigendecomposition of the positive factor.
    p_evals: Vec<f64>,
    p_vectors: CMatrix,
}

impl LetterPath {
    fn new(l: &CMatrix, n: usize) -> Result<LetterPath> {
        let (u, p) = polar(l)?;
        // the polar unitary of a group element lies in the maximal compact
        // subgroup, hence is block diagonal diag(a, conj a)
        let a = u.block(0, 0, n, n);
        let rebuilt =
            CMatrix::from_blocks(&a, &CMatrix::zeros(n, n), &CMatrix::zeros(n, n), &a.conj());
        if u.sub(&rebuilt).max_abs() > 1e-6 {
            return Err(Error::Numerical(
                "polar unitary factor is not block diagonal; element is not symplectic".into(),
            ));
        }
        let (u_angles, u_vectors) = unitary_eigen(&a)?;
        let (p_evals, p_vectors) = herm_eigen(&p)?;
        let scale = p.max_abs().max(1.0);
        if p_evals.iter().any(|&e| e <= 1e-12 * scale) {
            return Err(Error::SingularPolar(format!(
                "positive polar factor has eigenvalue {:.3e} near zero",
                p_evals.iter().cloned().fold(f64::INFINITY, f64::min)
            )));
        }
        Ok(LetterPath {
            u_angles,
            u_vectors,
            p_evals,
            p_vectors,
        })
    }

    /// Path point at parameter `t` in `[0, 1]`: `diag(a^t, conj(a^t)) p^t`,
    /// interpolating the identity (`t = 0`) to the letter (`t = 1`).
    fn at(&self, t: f64, n: usize) -> CMatrix {
        let mut a_t = CMatrix::zeros(n, n);
        for k in 0..n {
            let phase = C64::from_polar(1.0, t * self.u_angles[k]);
            for i in 0..n {
                for j in 0..n {
                    a_t[(i, j)] += self.u_vectors[(i, k)] * self.u_vectors[(j, k)].conj() * phase;
                }
            }
        }
        let m = self.p_evals.len();
        let mut p_t = CMatrix::zeros(m, m);
        for k in 0..m {
            let pw = C64::new(self.p_evals[k].powf(t), 0.0);
            for i in 0..m {
                for j in 0..m {
                    p_t[(i, j)] += self.p_vectors[(i, k)] * self.p_vectors[(j, k)].conj() * pw;
                }
            }
        }
        let u_t = CMatrix::from_blocks(
            &a_t,
            &CMatrix::zeros(n, n),
            &CMatrix::zeros(n, n),
            &a_t.conj(),
        );
        u_t.mul(&p_t)
    }
}

/// Unimodular `det` of the upper block of the polar unitary of `g`.
fn circle_point(g: &CMatrix, n: usize) -> Result<C64> {
    let (u, _) = polar(g)?;
    let d = det(&u.block(0, 0, n, n));
    if d.norm() < 0.9 {
        return Err(Error::Numerical(format!(
            "polar unitary block determinant has modulus {:.3e}, expected 1",
            d.norm()
        )));
    }
    Ok(d / d.norm())
}

/// Continuous angle increment along one letter segment starting at the
/// prefix `w`. Step count starts at 256 and doubles (at most 20 times)
/// whenever consecutive samples are more than `pi / 2` apart in angle.
fn winding_segment(w: &CMatrix, seg: &LetterPath, n: usize) -> Result<f64> {
    let mut steps = 256usize;
    let mut last_err: Option<Error> = None;
    for _ in 0..20 {
        match try_segment(w, seg, n, steps) {
            Ok(delta) => return Ok(delta),
            Err(e) => {
                let retryable = matches!(e, Error::SingularPolar(_))
                    || matches!(e, Error::Numerical(ref msg) if msg.starts_with("winding step"));
                if !retryable {
                    return Err(e);
                }
                last_err = Some(e);
                steps *= 2;
            }
        }
    }
    Err(last_err.unwrap_or_else(|| Error::Numerical("winding segment failed to stabilize".into())))
}

fn try_segment(w: &CMatrix, seg: &LetterPath, n: usize, steps: usize) -> Result<f64> {
    let mut prev = circle_point(w, n)?;
    let mut acc = 0.0;
    for s in 1..=steps {
        let t = s as f64 / steps as f64;
        let g_t = w.mul(&seg.at(t, n));
        let z = circle_point(&g_t, n)?;
        let delta = (z * prev.conj()).arg();
        if delta.abs() >= PI / 2.0 {
            return Err(Error::Numerical(format!(
                "winding step of {delta:.3} radians is ambiguous at {steps} steps"
            )));
        }
        acc += delta;
        prev = z;
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Fixtures
// ---------------------------------------------------------------------------

/// Rotation of the disc by `phi` about the origin, as an element of
/// `SU(1,1)`: `diag(exp(i phi / 2), exp(-i phi / 2))`.
fn disc_rotation(phi: f64) -> CMatrix {
    let mut m = CMatrix::zeros(2, 2);
    m[(0, 0)] = C64::from_polar(1.0, phi / 2.0);
    m[(1, 1)] = C64::from_polar(1.0, -phi / 2.0);
    m
}

/// Half turn (elliptic of order two) about the interior point `p`:
/// `T diag(i, -i) T^{-1}` where `T` translates the origin to `p`.
fn disc_half_turn(p: C64) -> CMatrix {
    let s = 1.0 / (1.0 - p.norm_sqr()).sqrt();
    let mut t = CMatrix::zeros(2, 2);
    t[(0, 0)] = C64::new(s, 0.0);
    t[(0, 1)] = p * s;
    t[(1, 0)] = p.conj() * s;
    t[(1, 1)] = C64::new(s, 0.0);
    let mut rot = CMatrix::zeros(2, 2);
    rot[(0, 0)] = C64::new(0.0, 1.0);
    rot[(1, 1)] = C64::new(0.0, -1.0);
    // T is in SU(1,1) with determinant 1, so its inverse is the adjugate
    let mut t_inv = CMatrix::zeros(2, 2);
    t_inv[(0, 0)] = t[(1, 1)];
    t_inv[(0, 1)] = -t[(0, 1)];
    t_inv[(1, 0)] = -t[(1, 0)];
    t_inv[(1, 1)] = t[(0, 0)];
    t.mul(&rot).mul(&t_inv)
}

/// Side pairing of the regular hyperbolic octagon: rotate side `src` to the
/// reference side on the positive real axis, half turn about that side's
/// midpoint, rotate to side `tgt`. Maps side `src` onto side `tgt` and the
/// octagon across side `tgt`.
fn octagon_pairing(src: usize, tgt: usize) -> CMatrix {
    // midpoint radius of the regular octagon with vertex angle pi / 4:
    // cosh(center-to-side) = cot(pi / 8), so the Euclidean radius in the
    // disc model is sqrt(sqrt(2) - 1)
    let rho_m = (std::f64::consts::SQRT_2 - 1.0).sqrt();
    let step = PI / 4.0;
    disc_rotation(tgt as f64 * step)
        .mul(&disc_half_turn(C64::new(rho_m, 0.0)))
        .mul(&disc_rotation(-(src as f64) * step))
}

/// Inverse of a determinant one `2 x 2` matrix (the adjugate).
fn sl2_inverse(m: &CMatrix) -> CMatrix {
    let mut out = CMatrix::zeros(2, 2);
    out[(0, 0)] = m[(1, 1)];
    out[(0, 1)] = -m[(0, 1)];
    out[(1, 0)] = -m[(1, 0)];
    out[(1, 1)] = m[(0, 0)];
    out
}

/// Discrete faithful genus 2 representation into `SU(1,1)` from the regular
/// hyperbolic octagon with vertex angle `pi / 4` and side pairings
/// `0-2, 1-3, 4-6, 5-7`. The relator evaluates to `+Id` within `1e-8`; all
/// four generators are hyperbolic; the Toledo invariant is `+4 pi`
/// (maximal) and the winding number is `2`.
pub fn fuchsian_genus2() -> SurfaceGroupRep {
    // orientation of each pairing pinned so that the relator closes to +Id
    // and the fan sum is +4 pi (the mirror assignment gives -4 pi)
    let a1 = octagon_pairing(1, 3);
    let b1 = sl2_inverse(&octagon_pairing(0, 2));
    let a2 = octagon_pairing(5, 7);
    let b2 = sl2_inverse(&octagon_pairing(4, 6));
    SurfaceGroupRep {
        family: Family::Sp { n: 1 },
        genus: 2,
        a: vec![a1, a2],
        b: vec![b1, b2],
    }
}

/// Trivial representation: every generator maps to the identity. Its Toledo
/// invariant is exactly zero.
pub fn trivial_rep(family: Family, genus: usize) -> Result<SurfaceGroupRep> {
    family.validate()?;
    if genus == 0 {
        return Err(Error::Validation("genus must be at least 1".into()));
    }
    let id = CMatrix::identity(family.ambient_dim());
    Ok(SurfaceGroupRep {
        family,
        genus,
        a: vec![id.clone(); genus],
        b: vec![id; genus],
    })
}

/// Composes a symplectic representation with the diagonal embedding
/// `Sp(2n, R) -> Sp(4n, R)`, doubling the Toledo invariant: each block of a
/// generator is replaced by two diagonal copies.
pub fn diagonal_double(rep: &SurfaceGroupRep) -> Result<SurfaceGroupRep> {
    let n = match rep.family {
        Family::Sp { n } => n,
        _ => {
            return Err(Error::UnsupportedFamily(format!(
                "diagonal doubling is defined for the symplectic family, not {}",
                rep.family.name()
            )))
        }
    };
    validate_rep(rep, tol::BOUNDARY)?;
    let double = |m: &CMatrix| -> CMatrix {
        let mut out = CMatrix::zeros(4 * n, 4 * n);
        for bi in 0..2 {
            for bj in 0..2 {
                let blk = m.block(bi * n, bj * n, n, n);
                for c in 0..2 {
                    out.set_block(2 * n * bi + n * c, 2 * n * bj + n * c, &blk);
                }
            }
        }
        out
    };
    Ok(SurfaceGroupRep {
        family: Family::Sp { n: 2 * n },
        genus: rep.genus,
        a: rep.a.iter().map(&double).collect(),
        b: rep.b.iter().map(&double).collect(),
    })
}

/// Conjugates every generator by a fixed group element; the Toledo
/// invariant is unchanged.
pub fn conjugate_rep(rep: &SurfaceGroupRep, g: &CMatrix) -> Result<SurfaceGroupRep> {
    domains::group_check(rep.family, g, tol::BOUNDARY)?;
    let g_inv = inverse(g)?;
    let conj = |m: &CMatrix| g.mul(m).mul(&g_inv);
    Ok(SurfaceGroupRep {
        family: rep.family,
        genus: rep.genus,
        a: rep.a.iter().map(&conj).collect(),
        b: rep.b.iter().map(&conj).collect(),
    })
}

// ---------------------------------------------------------------------------
// Relator preserving perturbations (symplectic rank one)
// ---------------------------------------------------------------------------

/// Random unit Frobenius norm element of the bounded model Lie algebra of
/// `Sp(2, R)`: `[[i alpha, beta], [conj beta, -i alpha]]`.
fn random_sp2_algebra<R: Rng>(rng: &mut R) -> CMatrix {
    let alpha = gaussian_c64(rng).re;
    let beta = gaussian_c64(rng);
    let mut m = CMatrix::zeros(2, 2);
    m[(0, 0)] = C64::new(0.0, alpha);
    m[(0, 1)] = beta;
    m[(1, 0)] = beta.conj();
    m[(1, 1)] = C64::new(0.0, -alpha);
    let norm = m.frobenius_norm();
    m.scale(C64::new(1.0 / norm, 0.0))
}

/// Eigenvalues and eigenvector matrix of a `2 x 2` matrix with well
/// separated eigenvalues. Columns are unit eigenvectors for the returned
/// eigenvalue order.
fn eig2(m: &CMatrix) -> Result<(C64, C64, CMatrix)> {
    let tr = m[(0, 0)] + m[(1, 1)];
    let dt = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    let disc = (tr * tr - dt * 4.0).sqrt();
    if disc.norm() < 1e-8 * (tr.norm() + 1.0) {
        return Err(Error::Numerical(format!(
            "eigenvalues nearly coincide (trace {:.6}{:+.6}i)",
            tr.re, tr.im
        )));
    }
    let l1 = (tr + disc) * 0.5;
    let l2 = (tr - disc) * 0.5;
    let mut v = CMatrix::zeros(2, 2);
    for (col, l) in [(0usize, l1), (1usize, l2)] {
        // rows of (m - l Id) are orthogonal to the eigenvector; use the
        // better conditioned of the two candidate kernels
        let c1 = (m[(0, 1)], l - m[(0, 0)]);
        let c2 = (l - m[(1, 1)], m[(1, 0)]);
        let n1 = c1.0.norm_sqr() + c1.1.norm_sqr();
        let n2 = c2.0.norm_sqr() + c2.1.norm_sqr();
        let (x, y) = if n1 >= n2 { c1 } else { c2 };
        let norm = (x.norm_sqr() + y.norm_sqr()).sqrt();
        if norm < 1e-12 {
            return Err(Error::Numerical("eigenvector candidates vanish".into()));
        }
        v[(0, col)] = x / norm;
        v[(1, col)] = y / norm;
    }
    Ok((l1, l2, v))
}

/// Solves `c a c^{-1} = k` for `c` in `SU(1,1)`, given that `a` and `k` are
/// hyperbolic elements of `SU(1,1)` with matching traces. The intertwiner is
/// built by matching eigenvectors; the two free scales are fixed by the
/// determinant and the form preservation conditions.
fn su11_conjugator(a: &CMatrix, k: &CMatrix) -> Result<CMatrix> {
    let (la1, la2, va) = eig2(a)?;
    let (mut lk1, mut lk2, mut vk) = eig2(k)?;
    // match the eigenvalue order of k to that of a
    let straight = (la1 - lk1).norm() + (la2 - lk2).norm();
    let swapped = (la1 - lk2).norm() + (la2 - lk1).norm();
    if swapped < straight {
        std::mem::swap(&mut lk1, &mut lk2);
        let mut sw = CMatrix::zeros(2, 2);
        for i in 0..2 {
            sw[(i, 0)] = vk[(i, 1)];
            sw[(i, 1)] = vk[(i, 0)];
        }
        vk = sw;
    }
    let mismatch = (la1 - lk1).norm() + (la2 - lk2).norm();
    if mismatch > 1e-6 * (la1.norm() + la2.norm() + 1.0) {
        return Err(Error::Numerical(format!(
            "conjugation targets are not similar (eigenvalue mismatch {mismatch:.3e})"
        )));
    }
    let det_va = va[(0, 0)] * va[(1, 1)] - va[(0, 1)] * va[(1, 0)];
    let det_vk = vk[(0, 0)] * vk[(1, 1)] - vk[(0, 1)] * vk[(1, 0)];
    if det_va.norm() < 1e-8 || det_vk.norm() < 1e-8 {
        return Err(Error::Numerical(
            "eigenvector basis is ill conditioned".into(),
        ));
    }
    // c = vk diag(t1, t2) va^{-1}; det c = 1 forces t1 t2 = det va / det vk,
    // form preservation forces conj(t1) t2 = q12 / p12 with p = vk* h vk,
    // q = va* h va (eigenvectors of hyperbolic elements are h isotropic, so
    // the diagonal conditions are vacuous)
    let h = {
        let mut h = CMatrix::identity(2);
        h[(1, 1)] = C64::new(-1.0, 0.0);
        h
    };
    let p = vk.adjoint().mul(&h).mul(&vk);
    let q = va.adjoint().mul(&h).mul(&va);
    let p12 = p[(0, 1)];
    let q12 = q[(0, 1)];
    if p12.norm() < 1e-10 {
        return Err(Error::Numerical("eigenvector pairing degenerates".into()));
    }
    let delta = det_va / det_vk;
    let gamma = q12 / p12;
    if (gamma.norm() - delta.norm()).abs() > 1e-6 * (delta.norm() + 1.0) {
        return Err(Error::Numerical(format!(
            "conjugator scale conditions are inconsistent ({:.3e} vs {:.3e})",
            gamma.norm(),
            delta.norm()
        )));
    }
    let phi = (delta / gamma).arg() / 2.0;
    let t1 = C64::from_polar(1.0, phi);
    let t2 = delta / t1;
    let mut d = CMatrix::zeros(2, 2);
    d[(0, 0)] = t1;
    d[(1, 1)] = t2;
    let mut va_inv = CMatrix::zeros(2, 2);
    va_inv[(0, 0)] = va[(1, 1)] / det_va;
    va_inv[(0, 1)] = -va[(0, 1)] / det_va;
    va_inv[(1, 0)] = -va[(1, 0)] / det_va;
    va_inv[(1, 1)] = va[(0, 0)] / det_va;
    let c = vk.mul(&d).mul(&va_inv);
    domains::group_check(Family::Sp { n: 1 }, &c, 1e-7)?;
    let resid = c.mul(a).sub(&k.mul(&c)).max_abs();
    if resid > 1e-7 * (k.max_abs() + 1.0) {
        return Err(Error::Numerical(format!(
            "conjugator residual {resid:.3e} too large"
        )));
    }
    Ok(c)
}

/// Finds a root of `f` by the secant method from `s0`, `s1`.
fn secant_root(
    f: &mut dyn FnMut(f64) -> Result<f64>,
    s0: f64,
    s1: f64,
    tol: f64,
    max_iter: usize,
) -> Result<f64> {
    let mut x0 = s0;
    let mut x1 = s1;
    let mut f0 = f(x0)?;
    let mut f1 = f(x1)?;
    for _ in 0..max_iter {
        if f1.abs() <= tol {
            return Ok(x1);
        }
        let denom = f1 - f0;
        if denom.abs() < 1e-300 {
            return Err(Error::Numerical("secant step degenerated".into()));
        }
        let x2 = x1 - f1 * (x1 - x0) / denom;
        if !x2.is_finite() || x2.abs() > 10.0 {
            return Err(Error::Numerical(format!(
                "secant iteration diverged (step to {x2:.3e})"
            )));
        }
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f(x1)?;
    }
    Err(Error::Numerical(format!(
        "secant iteration did not converge (last residual {f1:.3e})"
    )))
}

/// Random relator preserving perturbation of a symplectic rank one
/// representation of genus at least 2. Every generator except the last `B`
/// is moved by `exp(eps X)` with fresh Gaussian algebra directions; a scalar
/// correction along one more direction restores the trace condition
/// `tr(M A_g) = tr(A_g)` for the partial relator `M`, and the last `B` is
/// re-solved from the relator as an eigenvector matching conjugation
/// problem. Draws that leave the solvable region are rejected with an error;
/// callers retry with fresh randomness.
pub fn perturb_rep<R: Rng>(
    rep: &SurfaceGroupRep,
    rng: &mut R,
    eps: f64,
) -> Result<SurfaceGroupRep> {
    if !matches!(rep.family, Family::Sp { n: 1 }) {
        return Err(Error::UnsupportedFamily(format!(
            "relator preserving perturbation is implemented for Sp(2, R), not {}",
            rep.family.name()
        )));
    }
    if rep.genus < 2 {
        return Err(Error::Validation(
            "perturbation needs genus at least 2".into(),
        ));
    }
    validate_rep(rep, tol::BOUNDARY)?;
    let g = rep.genus;
    let nudge = |m: &CMatrix, rng: &mut R| -> CMatrix {
        m.mul(&expm(&random_sp2_algebra(rng).scale(C64::new(eps, 0.0))))
    };
    let a_new: Vec<CMatrix> = rep.a.iter().map(|m| nudge(m, rng)).collect();
    let mut b_new: Vec<CMatrix> = rep.b[..g - 1].iter().map(|m| nudge(m, rng)).collect();
    let correction = random_sp2_algebra(rng);
    let a_last = a_new[g - 1].clone();
    let target_trace = a_last.trace().re;

    // partial relator of the first g-1 handles, with the correction
    // exp(s W) appended to the last free B generator
    let partial = |s: f64, b_new: &[CMatrix]| -> Result<CMatrix> {
        let mut m = CMatrix::identity(2);
        for i in 0..g - 1 {
            let b_i = if i == g - 2 {
                b_new[i].mul(&expm(&correction.scale(C64::new(s, 0.0))))
            } else {
                b_new[i].clone()
            };
            let comm = a_new[i]
                .mul(&b_i)
                .mul(&inverse(&a_new[i])?)
                .mul(&inverse(&b_i)?);
            m = m.mul(&comm);
        }
        Ok(m)
    };
    let mut f = |s: f64| -> Result<f64> {
        let m = partial(s, &b_new)?;
        Ok(m.mul(&a_last).trace().re - target_trace)
    };
    let s_star = secant_root(&mut f, 0.0, 1e-3, 1e-12 * (target_trace.abs() + 1.0), 80)?;
    let m_star = partial(s_star, &b_new)?;
    b_new[g - 2] = b_new[g - 2].mul(&expm(&correction.scale(C64::new(s_star, 0.0))));

    // b_g conjugates a_g to m a_g, which closes the relator exactly
    let k = m_star.mul(&a_last);
    let b_last = su11_conjugator(&a_last, &k)?;
    b_new.push(b_last);
    let out = SurfaceGroupRep {
        family: rep.family,
        genus: g,
        a: a_new,
        b: b_new,
    };
    validate_rep(&out, tol::BOUNDARY)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const TAU: f64 = 2.0 * PI;

    #[test]
    fn fuchsian_fixture_is_a_surface_group() {
        let rep = fuchsian_genus2();
        validate_rep(&rep, 1e-9).expect("fixture generators must be valid");
        let r = relator(&rep).unwrap();
        let res = r.sub(&CMatrix::identity(2)).frobenius_norm();
        assert!(res < 1e-8, "relator residual {res:.3e} exceeds 1e-8");
        for (label, list) in [("A", &rep.a), ("B", &rep.b)] {
            for (i, m) in list.iter().enumerate() {
                let t = m.trace().re.abs();
                assert!(
                    t > 2.0,
                    "generator {label}_{} has |trace| {t:.6}, not hyperbolic",
                    i + 1
                );
            }
        }
    }

    #[test]
    fn fan_has_4g_minus_1_triples_and_flags_degeneracies() {
        let rep = fuchsian_genus2();
        let fan = fan_cycle(&rep).unwrap();
        assert_eq!(fan.len(), 7);
        // the last prefix is the full relator, identity up to residual
        assert!(fan[6].degenerate, "final fan triple must be degenerate");
        assert!(fan[..6].iter().all(|t| !t.degenerate));

        let triv = trivial_rep(Family::Sp { n: 1 }, 2).unwrap();
        let fan = fan_cycle(&triv).unwrap();
        assert!(fan.iter().all(|t| t.degenerate));
    }

    #[test]
    fn fuchsian_toledo_is_four_pi_and_maximal() {
        let rep = fuchsian_genus2();
        let t = toledo(&rep, None).unwrap();
        assert!(
            (t.value - 4.0 * PI).abs() < 1e-4,
            "Toledo value {:.9} differs from 4 pi",
            t.value
        );
        assert!((t.bound - 4.0 * PI).abs() < 1e-12);
        assert!(t.maximal);
        assert!(milnor_wood_check(&rep).unwrap());
        assert!(is_maximal(&rep).unwrap());
    }

    #[test]
    fn trivial_representation_has_exactly_zero_toledo() {
        for family in [Family::Sp { n: 2 }, Family::Su { p: 1, q: 2 }] {
            let rep = trivial_rep(family, 2).unwrap();
            let t = toledo(&rep, None).unwrap();
            assert_eq!(t.value, 0.0, "trivial Toledo must be exactly zero");
            assert!(!t.maximal);
        }
    }

    #[test]
    fn diagonal_double_doubles_the_toledo_invariant() {
        let rep = fuchsian_genus2();
        let doubled = diagonal_double(&rep).unwrap();
        assert_eq!(doubled.family, Family::Sp { n: 2 });
        validate_rep(&doubled, 1e-9).expect("doubled generators must be valid");
        let t = toledo(&doubled, None).unwrap();
        assert!(
            (t.value - 8.0 * PI).abs() < 1e-4,
            "doubled Toledo value {:.9} differs from 8 pi",
            t.value
        );
        assert!(t.maximal, "doubled representation must stay maximal");
    }

    #[test]
    fn winding_matches_toledo_over_two_pi() {
        let rep = fuchsian_genus2();
        let w = toledo_winding(&rep).unwrap();
        assert_eq!(w, 2);
        let t = toledo(&rep, None).unwrap();
        assert!((t.value - TAU * w as f64).abs() < 1e-3);

        let doubled = diagonal_double(&rep).unwrap();
        assert_eq!(toledo_winding(&doubled).unwrap(), 4);

        let triv = trivial_rep(Family::Sp { n: 1 }, 2).unwrap();
        assert_eq!(toledo_winding(&triv).unwrap(), 0);
    }

    #[test]
    fn toledo_is_basepoint_and_conjugation_invariant() {
        let rep = fuchsian_genus2();
        let base = toledo(&rep, None).unwrap().value;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let x0 = domains::random_interior(rep.family, &mut rng);
            let v = toledo(&rep, Some(&x0)).unwrap().value;
            assert!(
                (v - base).abs() < 1e-6,
                "basepoint dependence: {v:.9} vs {base:.9}"
            );
        }
        for _ in 0..3 {
            let g = domains::random_group(rep.family, &mut rng);
            let conj = conjugate_rep(&rep, &g).unwrap();
            let v = toledo(&conj, None).unwrap().value;
            assert!(
                (v - base).abs() < 1e-6,
                "conjugation dependence: {v:.9} vs {base:.9}"
            );
        }
    }

    #[test]
    fn perturbations_preserve_relator_and_milnor_wood() {
        let rep = fuchsian_genus2();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let mut accepted = 0;
        let mut attempts = 0;
        while accepted < 5 && attempts < 40 {
            attempts += 1;
            let Ok(p) = perturb_rep(&rep, &mut rng, 0.03) else {
                continue;
            };
            accepted += 1;
            let t = toledo(&p, None).unwrap();
            assert!(
                t.value.abs() <= t.bound + 1e-4,
                "Milnor-Wood violated: {}",
                t.value
            );
            // the Toledo invariant is locally constant along the relator
            // preserving slice
            assert!(
                (t.value - 4.0 * PI).abs() < 1e-4,
                "perturbed Toledo drifted to {:.9}",
                t.value
            );
        }
        assert!(
            accepted >= 5,
            "only {accepted} of {attempts} perturbations accepted"
        );
    }

    #[test]
    fn relator_violation_is_rejected_not_corrected() {
        let mut rep = fuchsian_genus2();
        let w = random_sp2_algebra(&mut ChaCha8Rng::seed_from_u64(5));
        rep.b[1] = rep.b[1].mul(&expm(&w.scale(C64::new(0.01, 0.0))));
        let err = toledo(&rep, None).unwrap_err();
        assert!(
            matches!(err, Error::RelatorViolation(_)),
            "expected RelatorViolation, got {err}"
        );
    }

    #[test]
    fn toledo_rejects_boundary_basepoints_and_kernel_free_families() {
        let rep = fuchsian_genus2();
        let edge = domains::shilov_base(rep.family);
        let err = toledo(&rep, Some(&edge)).unwrap_err();
        assert!(err.is_validation(), "expected validation error, got {err}");

        let so2 = trivial_rep(Family::So2 { n: 3 }, 2).unwrap();
        let err = toledo(&so2, None).unwrap_err();
        assert!(
            matches!(err, Error::UnsupportedFamily(_)),
            "expected UnsupportedFamily, got {err}"
        );
    }

    #[test]
    fn winding_is_symplectic_only() {
        let rep = trivial_rep(Family::Su { p: 1, q: 1 }, 2).unwrap();
        let err = toledo_winding(&rep).unwrap_err();
        assert!(matches!(err, Error::UnsupportedFamily(_)));
    }
}
