//! Matrix realizations of the Hermitian Lie algebras behind the four
//! families, with their Cartan decomposition `g = k + p`, the central
//! element `Z_g` of `k` acting as the complex structure on `p`, the
//! `lambda` functional on `k`, tightness and holomorphy checkers for
//! Lie-algebra homomorphisms, the irreducible `sl(2,R) -> sp(2n,R)`
//! representation, and restricted root data with Bruhat combinatorics.
//!
//! Conventions (matching the `domains` module):
//!
//! * `su(p,q)`: matrices `X` with `X* H + H X = 0`, `tr X = 0`, where
//!   `H = diag(Id_q, -Id_p)` (the `q` block first); `k` is the block
//!   diagonal, `p` the block off-diagonal.
//! * `sp(2n,R)` bounded model: `su(n,n)` elements `(A B; conj B conj A)`
//!   with `A* = -A` and `B` symmetric.
//! * `so*(2n)` bounded model: the same with `B` skew.
//! * `so(2,n)`: real matrices with `X^T Q + Q X = 0`, `Q = diag(Id_2, -Id_n)`.
//!
//! `Z_g` is normalized so that the one-parameter flow it generates rotates
//! the bounded domain by `exp(i theta)` around the origin; `ad(Z_g)` is then
//! the complex structure on `p`. All bases are real bases (real spans of
//! complex matrices); coordinates are extracted with the real part of the
//! Frobenius pairing.

use crate::domains::Family;
use crate::error::{Error, Result};
use crate::numeric::{herm_eigen, inverse, CMatrix};
use num_complex::Complex64 as C64;

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Real part of the Frobenius pairing `tr(a* b)`, the inner product making
/// the basis expansions below well posed.
fn inner(a: &CMatrix, b: &CMatrix) -> f64 {
    let mut s = 0.0;
    for (x, y) in a.data.iter().zip(b.data.iter()) {
        s += x.conj().re * y.re - x.conj().im * y.im + x.conj().im * y.re + x.conj().re * y.im;
    }
    s
}

fn bracket(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.mul(b).sub(&b.mul(a))
}

fn lin_comb(coeffs: &[f64], mats: &[&CMatrix]) -> CMatrix {
    assert_eq!(
        coeffs.len(),
        mats.len(),
        "coefficient/basis length mismatch"
    );
    let mut acc = CMatrix::zeros(mats[0].rows, mats[0].cols);
    for (c, m) in coeffs.iter().zip(mats.iter()) {
        if *c != 0.0 {
            acc = acc.add(&m.scale(C64::new(*c, 0.0)));
        }
    }
    acc
}

/// A classical Hermitian Lie algebra in its bounded-model realization.
///
/// Invariants: `[Z_g, k] = 0`, `ad(Z_g)^2 = -Id` on `p`, the frame elements
/// commute pairwise and lie in `p`, and the Cartan relations
/// `[k,k] < k`, `[k,p] < p`, `[p,p] < k` hold.
#[derive(Clone, Debug)]
pub struct LieAlgebraData {
    pub family: Family,
    /// Real basis of the maximal compact subalgebra `k`.
    pub k_basis: Vec<CMatrix>,
    /// Real basis of the complement `p` (tangent space of the domain).
    pub p_basis: Vec<CMatrix>,
    /// Central element of `k` acting on `p` as the complex structure.
    pub z_g: CMatrix,
    /// Maximal abelian frame `X_1..X_r` in `p`, one element per rank.
    pub frame: Vec<CMatrix>,
    /// Inverse Gram matrix of the concatenated `k`-then-`p` basis.
    gram_inv: CMatrix,
}

impl LieAlgebraData {
    /// Real dimension of the algebra.
    pub fn dim(&self) -> usize {
        self.k_basis.len() + self.p_basis.len()
    }

    /// Side length of the ambient matrices.
    pub fn ambient_dim(&self) -> usize {
        self.family.ambient_dim()
    }

    /// Concatenated basis, `k` first then `p`. This is the coordinate order
    /// used by homomorphism image lists.
    pub fn basis(&self) -> Vec<&CMatrix> {
        self.k_basis.iter().chain(self.p_basis.iter()).collect()
    }

    /// Expands `x` in the `k`-then-`p` basis. Fails when `x` has the wrong
    /// shape or does not lie in the algebra within `tol` (relative to the
    /// norm of `x`).
    pub fn coordinates(&self, x: &CMatrix, tol: f64) -> Result<Vec<f64>> {
        let n = self.ambient_dim();
        if x.rows != n || x.cols != n {
            return Err(Error::Validation(format!(
                "element of {} must be {n} x {n}, got {} x {}",
                self.family.name(),
                x.rows,
                x.cols
            )));
        }
        let basis = self.basis();
        let d = basis.len();
        let mut rhs = CMatrix::zeros(d, 1);
        for (i, b) in basis.iter().enumerate() {
            rhs[(i, 0)] = C64::new(inner(b, x), 0.0);
        }
        let sol = self.gram_inv.mul(&rhs);
        let coeffs: Vec<f64> = (0..d).map(|i| sol[(i, 0)].re).collect();
        let recon = lin_comb(&coeffs, &basis);
        let scale = 1.0 + x.frobenius_norm();
        let res = recon.sub(x).frobenius_norm();
        if res > tol * scale {
            return Err(Error::Validation(format!(
                "matrix is not in {} (expansion residual {res:.3e})",
                self.family.name()
            )));
        }
        Ok(coeffs)
    }

    /// Expands `x` and additionally requires its `p`-part to vanish.
    pub fn k_coordinates(&self, x: &CMatrix, tol: f64) -> Result<Vec<f64>> {
        let coeffs = self.coordinates(x, tol)?;
        let nk = self.k_basis.len();
        let p_norm: f64 = coeffs[nk..].iter().map(|c| c * c).sum::<f64>().sqrt();
        if p_norm > tol * (1.0 + x.frobenius_norm()) {
            return Err(Error::Validation(format!(
                "element is not in the maximal compact subalgebra of {} (p-part {p_norm:.3e})",
                self.family.name()
            )));
        }
        Ok(coeffs[..nk].to_vec())
    }
}

/// Skew-Hermitian basis of `u(n)`: `i E_jj`, then `E_jk - E_kj` and
/// `i(E_jk + E_kj)` for `j < k`.
fn u_n_basis(n: usize) -> Vec<CMatrix> {
    let mut out = Vec::new();
    for j in 0..n {
        out.push(CMatrix::from_fn(n, n, |r, c| {
            if r == j && c == j {
                I
            } else {
                C64::new(0.0, 0.0)
            }
        }));
    }
    for j in 0..n {
        for k in j + 1..n {
            out.push(CMatrix::from_fn(n, n, |r, c| {
                if r == j && c == k {
                    C64::new(1.0, 0.0)
                } else if r == k && c == j {
                    C64::new(-1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            }));
            out.push(CMatrix::from_fn(n, n, |r, c| {
                if (r == j && c == k) || (r == k && c == j) {
                    I
                } else {
                    C64::new(0.0, 0.0)
                }
            }));
        }
    }
    out
}

/// Real basis of `so(n)`: `E_jk - E_kj` for `j < k`.
fn so_n_basis(n: usize) -> Vec<CMatrix> {
    let mut out = Vec::new();
    for j in 0..n {
        for k in j + 1..n {
            out.push(CMatrix::from_fn(n, n, |r, c| {
                if r == j && c == k {
                    C64::new(1.0, 0.0)
                } else if r == k && c == j {
                    C64::new(-1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            }));
        }
    }
    out
}

fn unit(rows: usize, cols: usize, r: usize, c: usize, v: C64) -> CMatrix {
    let mut m = CMatrix::zeros(rows, cols);
    m[(r, c)] = v;
    m
}

/// Embeds `A in u(n)` as the compact element of the `sp`/`so*` bounded
/// models: `diag(A, conj A)`.
fn diag_embed(a: &CMatrix) -> CMatrix {
    let n = a.rows;
    let mut m = CMatrix::zeros(2 * n, 2 * n);
    m.set_block(0, 0, a);
    m.set_block(n, n, &a.conj());
    m
}

/// Embeds the off-diagonal block `B` as a `p`-element. `sign` is `+1` for
/// `sp` (`B` symmetric) and `-1` for `so*` (`B` skew): the lower-left block
/// is `sign * conj B`, which equals `B*` in both cases.
fn offdiag_embed(b: &CMatrix, sign: f64) -> CMatrix {
    let n = b.rows;
    let mut m = CMatrix::zeros(2 * n, 2 * n);
    m.set_block(0, n, b);
    m.set_block(n, 0, &b.conj().scale(C64::new(sign, 0.0)));
    m
}

/// Builds the bounded-model realization of the Lie algebra of the family,
/// with `k`-basis, `p`-basis, `Z_g`, and the maximal abelian frame.
pub fn build_algebra(family: Family) -> Result<LieAlgebraData> {
    family.validate()?;
    let (mut k_basis, mut p_basis, z_g, frame): (
        Vec<CMatrix>,
        Vec<CMatrix>,
        CMatrix,
        Vec<CMatrix>,
    );
    match family {
        Family::Su { p, q } => {
            let n = p + q;
            k_basis = Vec::new();
            // Traceless diagonal chain i(E_jj - E_{j+1,j+1}) spans the
            // diagonal of s(u(q) + u(p)); block off-diagonal pairs follow.
            for j in 0..n - 1 {
                let mut m = CMatrix::zeros(n, n);
                m[(j, j)] = I;
                m[(j + 1, j + 1)] = -I;
                k_basis.push(m);
            }
            let block_offdiag = |lo: usize, hi: usize, out: &mut Vec<CMatrix>| {
                for j in lo..hi {
                    for k in j + 1..hi {
                        let mut m = CMatrix::zeros(n, n);
                        m[(j, k)] = C64::new(1.0, 0.0);
                        m[(k, j)] = C64::new(-1.0, 0.0);
                        out.push(m);
                        let mut m = CMatrix::zeros(n, n);
                        m[(j, k)] = I;
                        m[(k, j)] = I;
                        out.push(m);
                    }
                }
            };
            block_offdiag(0, q, &mut k_basis);
            block_offdiag(q, n, &mut k_basis);
            // p: (0 B; B* 0) over the real basis of q x p complex matrices.
            p_basis = Vec::new();
            for j in 0..q {
                for k in 0..p {
                    for v in [C64::new(1.0, 0.0), I] {
                        let mut m = CMatrix::zeros(n, n);
                        m[(j, q + k)] = v;
                        m[(q + k, j)] = v.conj();
                        p_basis.push(m);
                    }
                }
            }
            // Unique traceless central element with ad(Z)^2 = -Id on p whose
            // flow rotates the domain by exp(i theta).
            let (cq, cp) = (p as f64 / n as f64, -(q as f64) / n as f64);
            z_g = CMatrix::from_fn(n, n, |r, c| {
                if r != c {
                    C64::new(0.0, 0.0)
                } else if r < q {
                    I * cq
                } else {
                    I * cp
                }
            });
            frame = (0..p)
                .map(|j| {
                    let mut m = CMatrix::zeros(n, n);
                    m[(j, q + j)] = C64::new(1.0, 0.0);
                    m[(q + j, j)] = C64::new(1.0, 0.0);
                    m
                })
                .collect();
        }
        Family::Sp { n } => {
            k_basis = u_n_basis(n).iter().map(diag_embed).collect();
            p_basis = Vec::new();
            for j in 0..n {
                for v in [C64::new(1.0, 0.0), I] {
                    p_basis.push(offdiag_embed(&unit(n, n, j, j, v), 1.0));
                }
            }
            for j in 0..n {
                for k in j + 1..n {
                    for v in [C64::new(1.0, 0.0), I] {
                        let b = unit(n, n, j, k, v).add(&unit(n, n, k, j, v));
                        p_basis.push(offdiag_embed(&b, 1.0));
                    }
                }
            }
            let mut z = CMatrix::zeros(2 * n, 2 * n);
            for j in 0..n {
                z[(j, j)] = I * 0.5;
                z[(n + j, n + j)] = -I * 0.5;
            }
            z_g = z;
            frame = (0..n)
                .map(|j| offdiag_embed(&unit(n, n, j, j, C64::new(1.0, 0.0)), 1.0))
                .collect();
        }
        Family::SoStar { n } => {
            k_basis = u_n_basis(n).iter().map(diag_embed).collect();
            p_basis = Vec::new();
            for j in 0..n {
                for k in j + 1..n {
                    for v in [C64::new(1.0, 0.0), I] {
                        let b = unit(n, n, j, k, v).sub(&unit(n, n, k, j, v));
                        p_basis.push(offdiag_embed(&b, -1.0));
                    }
                }
            }
            let mut z = CMatrix::zeros(2 * n, 2 * n);
            for j in 0..n {
                z[(j, j)] = I * 0.5;
                z[(n + j, n + j)] = -I * 0.5;
            }
            z_g = z;
            frame = (0..n / 2)
                .map(|j| {
                    let b = unit(n, n, 2 * j, 2 * j + 1, C64::new(1.0, 0.0)).sub(&unit(
                        n,
                        n,
                        2 * j + 1,
                        2 * j,
                        C64::new(1.0, 0.0),
                    ));
                    offdiag_embed(&b, -1.0)
                })
                .collect();
        }
        Family::So2 { n } => {
            let d = n + 2;
            k_basis = Vec::new();
            let mut rot = CMatrix::zeros(d, d);
            rot[(0, 1)] = C64::new(-1.0, 0.0);
            rot[(1, 0)] = C64::new(1.0, 0.0);
            k_basis.push(rot.clone());
            for s in so_n_basis(n) {
                let mut m = CMatrix::zeros(d, d);
                m.set_block(2, 2, &s);
                k_basis.push(m);
            }
            // p-element for the 2 x n block B: (0 B; B^T 0).
            let p_elt = |b: &CMatrix| {
                let mut m = CMatrix::zeros(d, d);
                m.set_block(0, 2, b);
                m.set_block(2, 0, &b.transpose());
                m
            };
            p_basis = Vec::new();
            for j in 0..2 {
                for k in 0..n {
                    p_basis.push(p_elt(&unit(2, n, j, k, C64::new(1.0, 0.0))));
                }
            }
            z_g = rot;
            // Jordan-frame combinations of the coordinate directions; the
            // plain E_11, E_22 pair is abelian but generates roots in the
            // rotated coordinates t_1 +- t_2 instead of 2 t_i.
            let y1 = p_elt(&unit(2, n, 0, 0, C64::new(1.0, 0.0)));
            let y2 = p_elt(&unit(2, n, 1, 1, C64::new(1.0, 0.0)));
            frame = vec![y1.add(&y2), y1.sub(&y2)];
        }
    }
    // Gram matrix of the full basis, inverted once for coordinate solves.
    let all: Vec<&CMatrix> = k_basis.iter().chain(p_basis.iter()).collect();
    let d = all.len();
    let gram = CMatrix::from_fn(d, d, |i, j| C64::new(inner(all[i], all[j]), 0.0));
    let gram_inv = inverse(&gram)?;
    Ok(LieAlgebraData {
        family,
        k_basis,
        p_basis,
        z_g,
        frame,
        gram_inv,
    })
}

/// Coefficient of `Z_g` in the trace-form decomposition of `x in k`:
/// `lambda = tr(Z_g x) / tr(Z_g^2)`. Vanishes on `[k,k]` and equals 1 on
/// `Z_g` itself. Fails when `x` is not in `k` within structural tolerance.
pub fn lambda_of(alg: &LieAlgebraData, x: &CMatrix) -> Result<f64> {
    alg.k_coordinates(x, 1e-7)?;
    let num = alg.z_g.mul(x).trace();
    let den = alg.z_g.mul(&alg.z_g).trace();
    if num.im.abs() > 1e-9 * (1.0 + x.frobenius_norm()) || den.im.abs() > 1e-12 {
        return Err(Error::Numerical(format!(
            "trace pairing unexpectedly complex: num {num}, den {den}"
        )));
    }
    Ok(num.re / den.re)
}

/// Lie-algebra homomorphism given by its values on the source basis
/// (`k`-basis first, then `p`-basis, in `build_algebra` order).
#[derive(Clone, Debug)]
pub struct LieHom {
    pub source: LieAlgebraData,
    pub target: LieAlgebraData,
    pub images: Vec<CMatrix>,
}

impl LieHom {
    /// Checks shapes, target membership with `k -> k` and `p -> p`, and
    /// bracket preservation within 1e-8 on all basis pairs.
    pub fn validate(&self) -> Result<()> {
        let d = self.source.dim();
        if self.images.len() != d {
            return Err(Error::Validation(format!(
                "homomorphism needs {d} basis images for {}, got {}",
                self.source.family.name(),
                self.images.len()
            )));
        }
        let nk_src = self.source.k_basis.len();
        let nk_tgt = self.target.k_basis.len();
        for (idx, img) in self.images.iter().enumerate() {
            let coords = self.target.coordinates(img, 1e-7).map_err(|e| {
                Error::Validation(format!("image {idx} is not in the target algebra: {e}"))
            })?;
            let (k_part, p_part) = coords.split_at(nk_tgt);
            let wrong: f64 = if idx < nk_src {
                p_part.iter().map(|c| c * c).sum::<f64>().sqrt()
            } else {
                k_part.iter().map(|c| c * c).sum::<f64>().sqrt()
            };
            if wrong > 1e-7 * (1.0 + img.frobenius_norm()) {
                return Err(Error::Validation(format!(
                    "image {idx} does not respect the Cartan decomposition (residual {wrong:.3e})"
                )));
            }
        }
        let basis = self.source.basis();
        for i in 0..d {
            for j in i + 1..d {
                let src_bracket = bracket(basis[i], basis[j]);
                let coeffs = self.source.coordinates(&src_bracket, 1e-9)?;
                let mapped = lin_comb(&coeffs, &self.images.iter().collect::<Vec<_>>());
                let img_bracket = bracket(&self.images[i], &self.images[j]);
                let res = mapped.sub(&img_bracket).frobenius_norm();
                let scale = 1.0 + img_bracket.frobenius_norm() + mapped.frobenius_norm();
                if res > 1e-8 * scale {
                    return Err(Error::Validation(format!(
                        "bracket not preserved on basis pair ({i},{j}): residual {res:.3e}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Applies the homomorphism to an arbitrary source element.
    pub fn apply(&self, x: &CMatrix) -> Result<CMatrix> {
        let coeffs = self.source.coordinates(x, 1e-7)?;
        Ok(lin_comb(&coeffs, &self.images.iter().collect::<Vec<_>>()))
    }
}

/// The identity homomorphism of a family, mostly useful as a fixture.
pub fn identity_hom(family: Family) -> Result<LieHom> {
    let alg = build_algebra(family)?;
    let images = alg.basis().into_iter().cloned().collect();
    Ok(LieHom {
        source: alg.clone(),
        target: alg,
        images,
    })
}

/// Tightness verdict of the trace criterion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tightness {
    Tight,
    NotTight,
    /// The criterion hypothesis fails: a non-tube family is involved, or
    /// the compact part is too degenerate for the `lambda` decomposition.
    OutOfCriterion,
}

impl Tightness {
    pub fn as_str(&self) -> &'static str {
        match self {
            Tightness::Tight => "tight",
            Tightness::NotTight => "not_tight",
            Tightness::OutOfCriterion => "out_of_criterion",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct TightReport {
    pub verdict: Tightness,
    /// `lambda(pi(Z_h))`, reported for every valid homomorphism.
    pub lambda: f64,
}

/// `so(2,2)` splits as two commuting rank-one pieces and its compact part is
/// abelian, so `k = R Z_g + [k,k]` fails and the criterion does not apply.
fn lambda_decomposition_degenerate(family: Family) -> bool {
    matches!(family, Family::So2 { n: 2 })
}

/// Tightness of a valid homomorphism via the trace criterion: tight iff
/// `| |lambda(pi(Z_h))| - 1 | < 1e-6`. Requires both families tube type;
/// otherwise reports `OutOfCriterion` (with the `lambda` value still
/// attached for inspection).
pub fn is_tight(hom: &LieHom) -> Result<TightReport> {
    hom.validate()?;
    let image = hom.apply(&hom.source.z_g)?;
    let lambda = lambda_of(&hom.target, &image)?;
    let in_criterion = hom.source.family.is_tube()
        && hom.target.family.is_tube()
        && !lambda_decomposition_degenerate(hom.source.family)
        && !lambda_decomposition_degenerate(hom.target.family);
    let verdict = if !in_criterion {
        Tightness::OutOfCriterion
    } else if (lambda.abs() - 1.0).abs() < 1e-6 {
        Tightness::Tight
    } else {
        Tightness::NotTight
    };
    Ok(TightReport { verdict, lambda })
}

/// Holomorphy condition: `pi(Z_h) = Z_g` within 1e-8 in Frobenius norm.
pub fn is_h2(hom: &LieHom) -> Result<bool> {
    hom.validate()?;
    let image = hom.apply(&hom.source.z_g)?;
    Ok(image.sub(&hom.target.z_g).frobenius_norm() < 1e-8)
}

/// `(1/sqrt 2) (Id  i Id; Id  -i Id)`: conjugation sending the real
/// symplectic model (form `(0 Id; -Id 0)`) to the bounded model,
/// `bounded = U real U*`.
fn real_to_bounded_unitary(n: usize) -> CMatrix {
    let s = 1.0 / 2.0f64.sqrt();
    CMatrix::from_fn(2 * n, 2 * n, |r, c| {
        if r < n && c == r {
            C64::new(s, 0.0)
        } else if r < n && c == r + n {
            C64::new(0.0, s)
        } else if r >= n && c == r - n {
            C64::new(s, 0.0)
        } else if r >= n && c == r {
            C64::new(0.0, -s)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

fn binomial(m: usize, k: usize) -> f64 {
    let mut v = 1.0;
    for j in 0..k {
        v = v * (m - j) as f64 / (j + 1) as f64;
    }
    v
}

/// Action coefficients of `X = (a b; c -a)` on the degree-`m` binary forms
/// `P_k = x^{m-k} y^k`, arranged as a homomorphism: row `k` holds the
/// coefficients `a(m-2k)` at `k`, `b(m-k)` at `k+1`, `c k` at `k-1`.
fn poly_rep(a: f64, b: f64, c: f64, m: usize) -> CMatrix {
    let mut mat = CMatrix::zeros(m + 1, m + 1);
    for k in 0..=m {
        mat[(k, k)] = C64::new(a * (m as f64 - 2.0 * k as f64), 0.0);
        if k < m {
            mat[(k, k + 1)] = C64::new(b * (m - k) as f64, 0.0);
        }
        if k >= 1 {
            mat[(k, k - 1)] = C64::new(c * k as f64, 0.0);
        }
    }
    mat
}

/// The irreducible representation `sl(2,R) -> sp(2n,R)` on binary forms of
/// degree `m = 2n - 1`, returned as a homomorphism between the bounded
/// models. The invariant pairing `<P_k, P_{m-k}> = (-1)^k C(m,k)` is scaled
/// to the standard symplectic form, which makes `n = 1` the identity.
pub fn sl2_irrep(n: usize) -> Result<LieHom> {
    if n < 1 {
        return Err(Error::Validation("sl2 irrep needs n >= 1".into()));
    }
    let source = build_algebra(Family::Sp { n: 1 })?;
    let target = build_algebra(Family::Sp { n })?;
    let m = 2 * n - 1;
    // Q columns scale P_k (k < n) and P_{m-k} into a symplectic basis for
    // the invariant antidiagonal form.
    let mut q = CMatrix::zeros(m + 1, 2 * n);
    for k in 0..n {
        let w = binomial(m, k).sqrt();
        q[(k, k)] = C64::new(1.0 / w, 0.0);
        q[(m - k, n + k)] = C64::new(if k % 2 == 0 { 1.0 } else { -1.0 } / w, 0.0);
    }
    let q_inv = inverse(&q)?;
    let u1 = real_to_bounded_unitary(1);
    let un = real_to_bounded_unitary(n);
    let mut images = Vec::new();
    for b in source.basis() {
        // Bounded sl(2) element -> real 2x2 traceless matrix.
        let real = u1.adjoint().mul(b).mul(&u1);
        let im_res = real
            .sub(&CMatrix::from_fn(2, 2, |r, c| {
                C64::new(real[(r, c)].re, 0.0)
            }))
            .frobenius_norm();
        if im_res > 1e-12 {
            return Err(Error::Numerical(format!(
                "sl2 realification has imaginary residue {im_res:.3e}"
            )));
        }
        let rep = poly_rep(real[(0, 0)].re, real[(0, 1)].re, real[(1, 0)].re, m);
        let sym = q_inv.mul(&rep).mul(&q);
        images.push(un.mul(&sym).mul(&un.adjoint()));
    }
    Ok(LieHom {
        source,
        target,
        images,
    })
}

/// Realification embedding `su(n,n) -> sp(4n,R)` between bounded models:
/// `(X11 X2; X2* X22)` maps to `(A B; conj B conj A)` with
/// `A = diag(X11, conj X22)` and `B = antidiag(X2, X2^T)`. Holomorphic:
/// `Z_h` maps to `Z_g` exactly.
pub fn su_to_sp(n: usize) -> Result<LieHom> {
    if n < 1 {
        return Err(Error::Validation("su(n,n) embedding needs n >= 1".into()));
    }
    let source = build_algebra(Family::Su { p: n, q: n })?;
    let target = build_algebra(Family::Sp { n: 2 * n })?;
    let mut images = Vec::new();
    for x in source.basis() {
        let x11 = x.block(0, 0, n, n);
        let x2 = x.block(0, n, n, n);
        let x22 = x.block(n, n, n, n);
        let mut a = CMatrix::zeros(2 * n, 2 * n);
        a.set_block(0, 0, &x11);
        a.set_block(n, n, &x22.conj());
        let mut b = CMatrix::zeros(2 * n, 2 * n);
        b.set_block(0, n, &x2);
        b.set_block(n, 0, &x2.transpose());
        let mut img = CMatrix::zeros(4 * n, 4 * n);
        img.set_block(0, 0, &a);
        img.set_block(0, 2 * n, &b);
        img.set_block(2 * n, 0, &b.conj());
        img.set_block(2 * n, 2 * n, &a.conj());
        images.push(img);
    }
    Ok(LieHom {
        source,
        target,
        images,
    })
}

/// Embedding of `sp(2,R)` onto the first disc factor of the polydisc inside
/// `sp(2n,R)`: every 1x1 block of the source lands on the `(0,0)` entry of
/// the corresponding `n x n` block. `lambda = 1/n`, so this is the standard
/// non-tight example for `n >= 2`.
pub fn polydisc_factor_hom(n: usize) -> Result<LieHom> {
    if n < 1 {
        return Err(Error::Validation("polydisc factor needs n >= 1".into()));
    }
    let source = build_algebra(Family::Sp { n: 1 })?;
    let target = build_algebra(Family::Sp { n })?;
    let mut images = Vec::new();
    for x in source.basis() {
        let mut img = CMatrix::zeros(2 * n, 2 * n);
        img[(0, 0)] = x[(0, 0)];
        img[(0, n)] = x[(0, 1)];
        img[(n, 0)] = x[(1, 0)];
        img[(n, n)] = x[(1, 1)];
        images.push(img);
    }
    Ok(LieHom {
        source,
        target,
        images,
    })
}

/// Closed-form restricted root data `(r, a, b)`: rank, multiplicity of the
/// pair roots `t_i +- t_j`, and half-multiplicity of the short roots `t_i`.
/// Tube type iff `b = 0`; the long roots `2 t_i` always have multiplicity 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RootData {
    pub r: usize,
    pub a: usize,
    pub b: usize,
}

impl RootData {
    pub fn tube(&self) -> bool {
        self.b == 0
    }
}

pub fn root_data(family: Family) -> Result<RootData> {
    family.validate()?;
    let (r, a, b) = family.root_multiplicities();
    Ok(RootData { r, a, b })
}

/// Real dimension of the Shilov boundary, `(2b+1) r + r(r-1)/2 a`.
pub fn shilov_dim(rd: &RootData) -> usize {
    (2 * rd.b + 1) * rd.r + rd.r * (rd.r - 1) / 2 * rd.a
}

/// Codimension of the `k`-th transversality stratum,
/// `(2b+1) k + k(k-1)/2 a`; equals 1 at `k = 1` exactly in tube type.
pub fn bruhat_codim(rd: &RootData, k: usize) -> Result<usize> {
    if k > rd.r {
        return Err(Error::Validation(format!(
            "stratum index {k} exceeds rank {}",
            rd.r
        )));
    }
    Ok((2 * rd.b + 1) * k + k * k.saturating_sub(1) / 2 * rd.a)
}

/// Whether the set of pairwise transverse Shilov triples is connected,
/// which holds exactly when short roots are present (`b >= 1`).
pub fn triples_connected(rd: &RootData) -> bool {
    rd.b >= 1
}

/// Raw multiplicity table measured from `ad(H)` for a generic frame element.
#[derive(Clone, Debug)]
pub struct MultTable {
    pub rank: usize,
    /// `(eigenvalue, dimension)` clusters of `ad(H)`, ascending.
    pub clusters: Vec<(f64, usize)>,
    /// Measured multiplicity of every long root `2 t_i`.
    pub long_mult: usize,
    /// Measured multiplicity of the pair roots `t_i +- t_j`; `None` in rank
    /// one, where no pair roots exist to measure.
    pub pair_mult: Option<usize>,
    /// Measured multiplicity of the short roots `t_i` (`2b`); 0 in tube type.
    pub short_mult: usize,
}

const PRIMES: [usize; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

/// Diagonalizes `ad(H)` for `H = sum sqrt(prime_i) X_i` over the frame and
/// counts root-space dimensions. Square roots of distinct primes are
/// rationally independent, so the values `t_i +- t_j`, `2 t_i`, `t_i`, `0`
/// are pairwise distinct and eigenvalue clustering (gap 1e-6) separates the
/// root spaces exactly.
pub fn restricted_multiplicities(alg: &LieAlgebraData) -> Result<MultTable> {
    let r = alg.frame.len();
    if r > PRIMES.len() {
        return Err(Error::Validation(format!(
            "frame of rank {r} exceeds the prime table ({})",
            PRIMES.len()
        )));
    }
    let t: Vec<f64> = PRIMES[..r].iter().map(|p| (*p as f64).sqrt()).collect();
    let mut h = CMatrix::zeros(alg.ambient_dim(), alg.ambient_dim());
    for (ti, xi) in t.iter().zip(alg.frame.iter()) {
        h = h.add(&xi.scale(C64::new(*ti, 0.0)));
    }
    // Orthonormalize the basis so ad(H) becomes a real symmetric matrix
    // (H is Hermitian, so ad(H) is self-adjoint for the Frobenius pairing).
    let mut ortho: Vec<CMatrix> = Vec::new();
    for b in alg.basis() {
        let mut v = b.clone();
        for _ in 0..2 {
            for e in &ortho {
                let c = inner(e, &v);
                v = v.sub(&e.scale(C64::new(c, 0.0)));
            }
        }
        let norm = v.frobenius_norm();
        if norm < 1e-8 {
            return Err(Error::Numerical(
                "basis became dependent during orthonormalization".into(),
            ));
        }
        ortho.push(v.scale(C64::new(1.0 / norm, 0.0)));
    }
    let d = ortho.len();
    let ad: Vec<CMatrix> = ortho.iter().map(|e| bracket(&h, e)).collect();
    let s = CMatrix::from_fn(d, d, |i, j| C64::new(inner(&ortho[i], &ad[j]), 0.0));
    let skew = s.sub(&s.adjoint()).max_abs();
    if skew > 1e-8 {
        return Err(Error::Numerical(format!(
            "ad(H) is not symmetric in the orthonormal basis (residual {skew:.3e})"
        )));
    }
    let sym = s.add(&s.adjoint()).scale(C64::new(0.5, 0.0));
    let (eigs, _) = herm_eigen(&sym)?;
    // Cluster ascending eigenvalues with the prescribed gap.
    let mut clusters: Vec<(f64, usize)> = Vec::new();
    let mut start = 0;
    for i in 1..=eigs.len() {
        if i == eigs.len() || eigs[i] - eigs[i - 1] > 1e-6 {
            let count = i - start;
            let center = eigs[start..i].iter().sum::<f64>() / count as f64;
            clusters.push((center, count));
            start = i;
        }
    }
    // Match every cluster against the expected root values.
    let dim_at = |value: f64| -> usize {
        clusters
            .iter()
            .find(|(c, _)| (c - value).abs() < 1e-3)
            .map(|(_, d)| *d)
            .unwrap_or(0)
    };
    let mut expected: Vec<f64> = vec![0.0];
    for i in 0..r {
        expected.extend([t[i], -t[i], 2.0 * t[i], -2.0 * t[i]]);
        for j in i + 1..r {
            expected.extend([t[i] + t[j], -(t[i] + t[j]), t[j] - t[i], t[i] - t[j]]);
        }
    }
    for (c, dim) in &clusters {
        if !expected.iter().any(|v| (c - v).abs() < 1e-3) {
            return Err(Error::Numerical(format!(
                "unexpected root value {c:.6} of dimension {dim}"
            )));
        }
    }
    let mut long_dims = Vec::new();
    let mut short_dims = Vec::new();
    let mut pair_dims = Vec::new();
    for i in 0..r {
        long_dims.extend([dim_at(2.0 * t[i]), dim_at(-2.0 * t[i])]);
        short_dims.extend([dim_at(t[i]), dim_at(-t[i])]);
        for j in i + 1..r {
            pair_dims.extend([
                dim_at(t[i] + t[j]),
                dim_at(-(t[i] + t[j])),
                dim_at(t[j] - t[i]),
                dim_at(t[i] - t[j]),
            ]);
        }
    }
    let uniform = |dims: &[usize], what: &str| -> Result<usize> {
        let first = dims[0];
        if dims.iter().any(|d| *d != first) {
            return Err(Error::Numerical(format!(
                "{what} root multiplicities are not uniform: {dims:?}"
            )));
        }
        Ok(first)
    };
    let long_mult = uniform(&long_dims, "long")?;
    let short_mult = uniform(&short_dims, "short")?;
    let pair_mult = if pair_dims.is_empty() {
        None
    } else {
        Some(uniform(&pair_dims, "pair")?)
    };
    // Account for every dimension: zero cluster plus all root spaces.
    let matched: usize = 2 * r * long_mult
        + 2 * r * short_mult
        + pair_mult.unwrap_or(0) * 2 * r * (r - 1)
        + dim_at(0.0);
    if matched != d {
        return Err(Error::Numerical(format!(
            "root space dimensions {matched} do not fill the algebra dimension {d}"
        )));
    }
    Ok(MultTable {
        rank: r,
        clusters,
        long_mult,
        pair_mult,
        short_mult,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::{apply, random_interior, zero_point};
    use crate::numeric::expm;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn all_families() -> Vec<Family> {
        vec![
            Family::Su { p: 1, q: 1 },
            Family::Su { p: 1, q: 2 },
            Family::Su { p: 2, q: 2 },
            Family::Su { p: 2, q: 3 },
            Family::Sp { n: 1 },
            Family::Sp { n: 2 },
            Family::Sp { n: 3 },
            Family::SoStar { n: 2 },
            Family::SoStar { n: 3 },
            Family::SoStar { n: 4 },
            Family::SoStar { n: 5 },
            Family::So2 { n: 2 },
            Family::So2 { n: 3 },
            Family::So2 { n: 5 },
        ]
    }

    fn expected_dim(family: Family) -> usize {
        match family {
            Family::Su { p, q } => (p + q) * (p + q) - 1,
            Family::Sp { n } => n * (2 * n + 1),
            Family::SoStar { n } => n * (2 * n - 1),
            Family::So2 { n } => (n + 2) * (n + 1) / 2,
        }
    }

    fn random_k_element<R: Rng>(alg: &LieAlgebraData, rng: &mut R) -> CMatrix {
        let coeffs: Vec<f64> = alg
            .k_basis
            .iter()
            .map(|_| rng.gen_range(-1.0..1.0))
            .collect();
        lin_comb(&coeffs, &alg.k_basis.iter().collect::<Vec<_>>())
    }

    #[test]
    fn algebra_dimensions_and_cartan_relations() {
        for family in all_families() {
            let alg = build_algebra(family).unwrap();
            assert_eq!(
                alg.dim(),
                expected_dim(family),
                "dimension mismatch for {}",
                family.name()
            );
            let nk = alg.k_basis.len();
            let basis = alg.basis();
            for i in 0..alg.dim() {
                for j in i + 1..alg.dim() {
                    let br = bracket(basis[i], basis[j]);
                    let coeffs = alg.coordinates(&br, 1e-9).unwrap();
                    let k_norm: f64 = coeffs[..nk].iter().map(|c| c * c).sum::<f64>().sqrt();
                    let p_norm: f64 = coeffs[nk..].iter().map(|c| c * c).sum::<f64>().sqrt();
                    let (want_zero, label) = match (i < nk, j < nk) {
                        (true, true) => (p_norm, "[k,k] in k"),
                        (false, false) => (p_norm, "[p,p] in k"),
                        _ => (k_norm, "[k,p] in p"),
                    };
                    assert!(
                        want_zero < 1e-9,
                        "{label} fails for {} at pair ({i},{j}): {want_zero:.3e}",
                        family.name()
                    );
                }
            }
        }
    }

    #[test]
    fn z_g_is_central_complex_structure() {
        for family in all_families() {
            let alg = build_algebra(family).unwrap();
            assert!(
                alg.z_g.trace().norm() < 1e-12,
                "Z_g trace for {}",
                family.name()
            );
            for k in &alg.k_basis {
                assert!(
                    bracket(&alg.z_g, k).frobenius_norm() < 1e-12,
                    "Z_g not central in k for {}",
                    family.name()
                );
            }
            for p in &alg.p_basis {
                let adad = bracket(&alg.z_g, &bracket(&alg.z_g, p));
                assert!(
                    adad.add(p).frobenius_norm() < 1e-9,
                    "ad(Z_g)^2 != -Id on p for {}",
                    family.name()
                );
            }
            for (i, a) in alg.frame.iter().enumerate() {
                alg.coordinates(a, 1e-9).unwrap();
                for b in &alg.frame[i + 1..] {
                    assert!(bracket(a, b).frobenius_norm() < 1e-12, "frame not abelian");
                }
            }
        }
    }

    #[test]
    fn z_g_flow_rotates_the_domain() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for family in all_families() {
            let alg = build_algebra(family).unwrap();
            let g = expm(&alg.z_g.scale(C64::new(std::f64::consts::FRAC_PI_2, 0.0)));
            for _ in 0..5 {
                let z = random_interior(family, &mut rng);
                let moved = apply(family, &g, &z).unwrap();
                let rotated = z.scale(C64::new(0.0, 1.0));
                assert!(
                    moved.sub(&rotated).frobenius_norm() < 1e-9,
                    "quarter turn of Z_g flow is not multiplication by i for {}",
                    family.name()
                );
            }
        }
    }

    #[test]
    fn lambda_normalization_and_commutators() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for family in all_families() {
            let alg = build_algebra(family).unwrap();
            assert!((lambda_of(&alg, &alg.z_g).unwrap() - 1.0).abs() < 1e-12);
            let zero = CMatrix::zeros(alg.ambient_dim(), alg.ambient_dim());
            assert_eq!(lambda_of(&alg, &zero).unwrap(), 0.0);
            // lambda vanishes on [k,k] and is linear.
            for _ in 0..15 {
                let a = random_k_element(&alg, &mut rng);
                let b = random_k_element(&alg, &mut rng);
                let br = bracket(&a, &b);
                assert!(lambda_of(&alg, &br).unwrap().abs() < 1e-10);
                let la = lambda_of(&alg, &a).unwrap();
                let lb = lambda_of(&alg, &b).unwrap();
                let combo = a
                    .scale(C64::new(0.7, 0.0))
                    .add(&b.scale(C64::new(-1.3, 0.0)));
                assert!((lambda_of(&alg, &combo).unwrap() - (0.7 * la - 1.3 * lb)).abs() < 1e-9);
            }
            // p-elements are rejected.
            assert!(lambda_of(&alg, &alg.p_basis[0]).is_err());
        }
    }

    #[test]
    fn identity_hom_is_tight_and_holomorphic() {
        for family in [
            Family::Sp { n: 2 },
            Family::Su { p: 2, q: 2 },
            Family::SoStar { n: 4 },
        ] {
            let hom = identity_hom(family).unwrap();
            hom.validate().unwrap();
            let report = is_tight(&hom).unwrap();
            assert_eq!(report.verdict, Tightness::Tight);
            assert!((report.lambda - 1.0).abs() < 1e-12);
            assert!(is_h2(&hom).unwrap());
        }
        // Non-tube identity: criterion does not apply, lambda still 1.
        let hom = identity_hom(Family::Su { p: 1, q: 2 }).unwrap();
        let report = is_tight(&hom).unwrap();
        assert_eq!(report.verdict, Tightness::OutOfCriterion);
        assert!((report.lambda - 1.0).abs() < 1e-12);
        // Decomposable so(2,2): out of criterion as well.
        let hom = identity_hom(Family::So2 { n: 2 }).unwrap();
        assert_eq!(is_tight(&hom).unwrap().verdict, Tightness::OutOfCriterion);
    }

    #[test]
    fn sl2_irrep_is_the_identity_at_n_1() {
        let hom = sl2_irrep(1).unwrap();
        for (img, b) in hom.images.iter().zip(hom.source.basis()) {
            assert!(img.sub(b).frobenius_norm() < 1e-12);
        }
    }

    #[test]
    fn sl2_irrep_brackets_form_and_tightness() {
        for n in 1..=6 {
            let hom = sl2_irrep(n).unwrap();
            hom.validate().unwrap();
            let basis = hom.source.basis();
            // Direct bracket residual at the tighter tolerance.
            for i in 0..3 {
                for j in i + 1..3 {
                    let br = bracket(basis[i], basis[j]);
                    let mapped = hom.apply(&br).unwrap();
                    let img = bracket(&hom.images[i], &hom.images[j]);
                    assert!(
                        mapped.sub(&img).frobenius_norm() < 1e-10,
                        "sl2 bracket residual at n={n}"
                    );
                }
            }
            // Images satisfy both defining equations of the bounded sp model.
            let h = CMatrix::from_fn(2 * n, 2 * n, |r, c| {
                if r != c {
                    C64::new(0.0, 0.0)
                } else if r < n {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(-1.0, 0.0)
                }
            });
            let mut omega = CMatrix::zeros(2 * n, 2 * n);
            for j in 0..n {
                omega[(j, n + j)] = C64::new(1.0, 0.0);
                omega[(n + j, j)] = C64::new(-1.0, 0.0);
            }
            for img in &hom.images {
                let su_res = img.adjoint().mul(&h).add(&h.mul(img)).frobenius_norm();
                let sp_res = img
                    .transpose()
                    .mul(&omega)
                    .add(&omega.mul(img))
                    .frobenius_norm();
                assert!(
                    su_res < 1e-10 && sp_res < 1e-10,
                    "form preservation at n={n}"
                );
            }
            // Trace pairing |tr(Z_g pi(Z_0))| = n/2 and tightness.
            let image = hom.apply(&hom.source.z_g).unwrap();
            let pairing = hom.target.z_g.mul(&image).trace();
            assert!((pairing.norm() - n as f64 / 2.0).abs() < 1e-10);
            let report = is_tight(&hom).unwrap();
            assert_eq!(report.verdict, Tightness::Tight);
            assert!((report.lambda.abs() - 1.0).abs() < 1e-10);
            let expected_sign = if n % 2 == 1 { 1.0 } else { -1.0 };
            assert!(
                (report.lambda - expected_sign).abs() < 1e-10,
                "lambda sign at n={n}"
            );
            assert_eq!(is_h2(&hom).unwrap(), n == 1, "holomorphy only at n=1");
        }
    }

    #[test]
    fn su_to_sp_embedding_is_holomorphic() {
        for n in 1..=3 {
            let hom = su_to_sp(n).unwrap();
            hom.validate().unwrap();
            assert!(is_h2(&hom).unwrap(), "su({n},{n}) embedding fails H2");
            let report = is_tight(&hom).unwrap();
            assert_eq!(report.verdict, Tightness::Tight);
            assert!((report.lambda - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn polydisc_factor_has_lambda_one_over_n() {
        for n in 1..=4 {
            let hom = polydisc_factor_hom(n).unwrap();
            hom.validate().unwrap();
            let report = is_tight(&hom).unwrap();
            assert!((report.lambda - 1.0 / n as f64).abs() < 1e-12);
            if n >= 2 {
                assert_eq!(report.verdict, Tightness::NotTight);
            } else {
                assert_eq!(report.verdict, Tightness::Tight);
            }
        }
    }

    #[test]
    fn root_data_matches_ad_oracle_for_all_small_params() {
        let mut cases = Vec::new();
        for p in 1..=6usize {
            for q in p..=6usize {
                cases.push(Family::Su { p, q });
            }
        }
        for n in 1..=6 {
            cases.push(Family::Sp { n });
        }
        for n in 2..=6 {
            cases.push(Family::SoStar { n });
            cases.push(Family::So2 { n });
        }
        for family in cases {
            let rd = root_data(family).unwrap();
            assert_eq!(rd.tube(), family.is_tube());
            assert_eq!(shilov_dim(&rd), family.shilov_dim());
            assert_eq!(triples_connected(&rd), family.triples_connected());
            let alg = build_algebra(family).unwrap();
            let table = restricted_multiplicities(&alg).unwrap();
            assert_eq!(table.rank, rd.r, "rank for {}", family.name());
            assert_eq!(table.long_mult, 1, "long roots for {}", family.name());
            assert_eq!(
                table.short_mult,
                2 * rd.b,
                "short roots for {}",
                family.name()
            );
            if let Some(a) = table.pair_mult {
                assert_eq!(a, rd.a, "pair roots for {}", family.name());
            } else {
                assert_eq!(rd.r, 1, "pair roots only unmeasurable in rank one");
            }
        }
    }

    #[test]
    fn bruhat_codimension_formulas() {
        let sp = root_data(Family::Sp { n: 3 }).unwrap();
        assert_eq!(bruhat_codim(&sp, 0).unwrap(), 0);
        assert_eq!(bruhat_codim(&sp, 1).unwrap(), 1);
        assert!(bruhat_codim(&sp, 4).is_err());
        let su23 = root_data(Family::Su { p: 2, q: 3 }).unwrap();
        assert_eq!(bruhat_codim(&su23, 1).unwrap(), 3);
        assert_eq!(shilov_dim(&su23), 2 * 2 * 3 - 2 * 2);
        for family in all_families() {
            let rd = root_data(family).unwrap();
            let codim1 = bruhat_codim(&rd, 1).unwrap();
            if family.is_tube() {
                assert_eq!(codim1, 1);
            } else {
                assert!(codim1 >= 3);
            }
        }
    }

    /// Orbit-map rank at the Shilov base point measures the manifold
    /// dimension of the Shilov boundary directly.
    #[test]
    fn shilov_dimension_oracle_su() {
        for p in 1..=3usize {
            for q in p..=4usize {
                let family = Family::Su { p, q };
                let alg = build_algebra(family).unwrap();
                let z0 = crate::domains::shilov_base(family);
                // Derivative of (A Z + B)(C Z + D)^{-1} at t = 0 for
                // g = exp(tX): A Z0 + B - Z0 (C Z0 + D).
                let mut vectors = Vec::new();
                for x in alg.basis() {
                    let a = x.block(0, 0, q, q);
                    let b = x.block(0, q, q, p);
                    let c = x.block(q, 0, p, q);
                    let d = x.block(q, q, p, p);
                    let tangent = a.mul(&z0).add(&b).sub(&z0.mul(&c.mul(&z0).add(&d)));
                    let mut row = Vec::new();
                    for v in tangent.data.iter() {
                        row.push(v.re);
                        row.push(v.im);
                    }
                    vectors.push(row);
                }
                let rows = vectors.len();
                let cols = vectors[0].len();
                let m = CMatrix::from_fn(rows, cols, |r, c| C64::new(vectors[r][c], 0.0));
                let gram = m.mul(&m.adjoint());
                let (eigs, _) = herm_eigen(&gram).unwrap();
                let rank = eigs.iter().filter(|e| **e > 1e-8).count();
                assert_eq!(rank, 2 * p * q - p * p, "orbit rank for {}", family.name());
                assert_eq!(rank, family.shilov_dim());
            }
        }
    }

    #[test]
    fn zero_point_is_fixed_by_k_flow() {
        // The K-flow of a k-basis element fixes the origin: sanity check that
        // the k/p split matches the geometric stabilizer.
        for family in all_families() {
            let alg = build_algebra(family).unwrap();
            let z = zero_point(family);
            let g = expm(&alg.k_basis[0].scale(C64::new(0.8, 0.0)));
            let moved = apply(family, &g, &z).unwrap();
            assert!(
                moved.sub(&z).frobenius_norm() < 1e-10,
                "origin moves for {}",
                family.name()
            );
        }
    }
}
