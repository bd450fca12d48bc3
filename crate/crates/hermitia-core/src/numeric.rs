//! Dense complex linear algebra kernels.
//!
//! Everything in the library runs through this module: a row-major complex
//! matrix type, LU with partial pivoting (determinants, solves, inverses),
//! Householder QR, a cyclic Jacobi eigensolver for Hermitian matrices, a
//! shifted-QR eigenvalue iteration for small general complex matrices, the
//! polar decomposition, and the principal-branch log-determinant for matrices
//! with spectrum in the closed right half-plane.
//!
//! Matrices here are small (a few hundred rows at most), so the kernels favor
//! determinism and clarity over blocking.

use crate::error::{Error, Result};
use num_complex::Complex64 as C64;

/// Machine-level relative tolerance used inside iterative kernels.
const EPS: f64 = 2.2e-16;

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<C64>,
}

impl std::fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> C64) -> Self {
        let mut m = CMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds a matrix from rows of real numbers.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = if r > 0 { rows[0].len() } else { 0 };
        CMatrix::from_fn(r, c, |i, j| C64::new(rows[i][j], 0.0))
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> CMatrix {
        CMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].conj())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)] + other[(i, j)])
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)] - other[(i, j)])
    }

    pub fn scale(&self, s: C64) -> CMatrix {
        CMatrix::from_fn(self.rows, self.cols, |i, j| s * self[(i, j)])
    }

    pub fn neg(&self) -> CMatrix {
        self.scale(C64::new(-1.0, 0.0))
    }

    pub fn trace(&self) -> C64 {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry modulus; cheap scale estimate for tolerances.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        let scale = self.max_abs().max(1.0);
        for i in 0..self.rows {
            for j in i..self.cols {
                if (self[(i, j)] - self[(j, i)].conj()).norm() > tol * scale {
                    return false;
                }
            }
        }
        true
    }

    /// Copies `other` into position with upper-left corner `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, other: &CMatrix) {
        assert!(r0 + other.rows <= self.rows && c0 + other.cols <= self.cols);
        for i in 0..other.rows {
            for j in 0..other.cols {
                self[(r0 + i, c0 + j)] = other[(i, j)];
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> CMatrix {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols);
        CMatrix::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }

    /// 2x2 block matrix `[a b; c d]`; shapes must be conformal.
    pub fn from_blocks(a: &CMatrix, b: &CMatrix, c: &CMatrix, d: &CMatrix) -> CMatrix {
        assert_eq!(a.rows, b.rows);
        assert_eq!(c.rows, d.rows);
        assert_eq!(a.cols, c.cols);
        assert_eq!(b.cols, d.cols);
        let mut m = CMatrix::zeros(a.rows + c.rows, a.cols + b.cols);
        m.set_block(0, 0, a);
        m.set_block(0, a.cols, b);
        m.set_block(a.rows, 0, c);
        m.set_block(a.rows, a.cols, d);
        m
    }

    /// Horizontal concatenation `[self other]`.
    pub fn hcat(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.rows, other.rows);
        let mut m = CMatrix::zeros(self.rows, self.cols + other.cols);
        m.set_block(0, 0, self);
        m.set_block(0, self.cols, other);
        m
    }

    /// Vertical concatenation `[self; other]`.
    pub fn vcat(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.cols);
        let mut m = CMatrix::zeros(self.rows + other.rows, self.cols);
        m.set_block(0, 0, self);
        m.set_block(self.rows, 0, other);
        m
    }
}

// ---------------------------------------------------------------------------
// LU decomposition with partial pivoting
// ---------------------------------------------------------------------------

struct Lu {
    lu: CMatrix,
    perm: Vec<usize>,
    sign: f64,
    /// Smallest pivot modulus encountered (0 if singular at some step).
    min_pivot: f64,
}

fn lu_decompose(m: &CMatrix) -> Lu {
    assert!(m.is_square());
    let n = m.rows;
    let mut lu = m.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;
    let mut min_pivot = f64::INFINITY;
    for k in 0..n {
        // partial pivot on column k
        let mut best = k;
        let mut best_val = lu[(k, k)].norm();
        for i in k + 1..n {
            let v = lu[(i, k)].norm();
            if v > best_val {
                best_val = v;
                best = i;
            }
        }
        if best != k {
            for j in 0..n {
                let t = lu[(k, j)];
                lu[(k, j)] = lu[(best, j)];
                lu[(best, j)] = t;
            }
            perm.swap(k, best);
            sign = -sign;
        }
        let pivot = lu[(k, k)];
        min_pivot = min_pivot.min(pivot.norm());
        if pivot.norm() == 0.0 {
            continue; // singular; remaining column already zero below
        }
        for i in k + 1..n {
            let f = lu[(i, k)] / pivot;
            lu[(i, k)] = f;
            for j in k + 1..n {
                let t = f * lu[(k, j)];
                lu[(i, j)] -= t;
            }
        }
    }
    if n == 0 {
        min_pivot = f64::INFINITY;
    }
    Lu {
        lu,
        perm,
        sign,
        min_pivot,
    }
}

/// Determinant via LU with partial pivoting.
pub fn det(m: &CMatrix) -> C64 {
    let f = lu_decompose(m);
    let mut d = C64::new(f.sign, 0.0);
    for i in 0..m.rows {
        d *= f.lu[(i, i)];
    }
    d
}

/// Solves `m x = rhs` for each column of `rhs`. Errors when a pivot falls
/// below `1e-13` relative to the matrix scale.
pub fn solve(m: &CMatrix, rhs: &CMatrix) -> Result<CMatrix> {
    assert!(m.is_square());
    assert_eq!(m.rows, rhs.rows);
    let n = m.rows;
    let f = lu_decompose(m);
    let scale = m.max_abs().max(1.0);
    if f.min_pivot <= 1e-13 * scale {
        return Err(Error::Numerical(format!(
            "solve: matrix numerically singular (pivot {:.3e}, scale {:.3e})",
            f.min_pivot, scale
        )));
    }
    let mut x = CMatrix::zeros(n, rhs.cols);
    for c in 0..rhs.cols {
        // forward substitution on permuted rhs
        let mut y = vec![C64::new(0.0, 0.0); n];
        for i in 0..n {
            let mut acc = rhs[(f.perm[i], c)];
            for (j, &yj) in y.iter().enumerate().take(i) {
                acc -= f.lu[(i, j)] * yj;
            }
            y[i] = acc;
        }
        // back substitution
        for i in (0..n).rev() {
            let mut acc = y[i];
            for j in i + 1..n {
                acc -= f.lu[(i, j)] * x[(j, c)];
            }
            x[(i, c)] = acc / f.lu[(i, i)];
        }
    }
    Ok(x)
}

/// Matrix inverse via [`solve`] against the identity.
pub fn inverse(m: &CMatrix) -> Result<CMatrix> {
    solve(m, &CMatrix::identity(m.rows))
}

// ---------------------------------------------------------------------------
// Householder QR
// ---------------------------------------------------------------------------

/// QR decomposition by complex Householder reflections: `m = q r` with `q`
/// unitary (rows x rows) and `r` upper trapezoidal.
pub fn qr(m: &CMatrix) -> (CMatrix, CMatrix) {
    let rows = m.rows;
    let cols = m.cols;
    let mut r = m.clone();
    let mut q = CMatrix::identity(rows);
    for k in 0..cols.min(rows.saturating_sub(1)) {
        // Householder vector for column k below the diagonal
        let mut norm_x = 0.0;
        for i in k..rows {
            norm_x += r[(i, k)].norm_sqr();
        }
        let norm_x = norm_x.sqrt();
        if norm_x <= 1e-300 {
            continue;
        }
        let x0 = r[(k, k)];
        let phase = if x0.norm() > 0.0 {
            x0 / x0.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        let alpha = -phase * norm_x;
        let mut v: Vec<C64> = (k..rows).map(|i| r[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 <= 1e-300 {
            continue;
        }
        // r <- (I - 2 v v*/|v|^2) r ; q <- q (I - 2 v v*/|v|^2)
        for j in 0..cols {
            let mut dot = C64::new(0.0, 0.0);
            for i in 0..v.len() {
                dot += v[i].conj() * r[(k + i, j)];
            }
            let f = dot * (2.0 / vnorm2);
            for i in 0..v.len() {
                let t = f * v[i];
                r[(k + i, j)] -= t;
            }
        }
        for i0 in 0..rows {
            let mut dot = C64::new(0.0, 0.0);
            for i in 0..v.len() {
                dot += q[(i0, k + i)] * v[i];
            }
            let f = dot * (2.0 / vnorm2);
            for i in 0..v.len() {
                let t = f * v[i].conj();
                q[(i0, k + i)] -= t;
            }
        }
    }
    (q, r)
}

// ---------------------------------------------------------------------------
// Hermitian eigendecomposition: cyclic Jacobi
// ---------------------------------------------------------------------------

/// Eigendecomposition of a Hermitian matrix by the cyclic Jacobi method.
///
/// Returns eigenvalues in ascending order and a unitary matrix whose columns
/// are the matching eigenvectors, so `m = v diag(lambda) v*`. Requires `m`
/// Hermitian within `1e-9` of its scale; the iteration then runs on the
/// exactly Hermitian average `(m + m*)/2`.
pub fn herm_eigen(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    if !m.is_square() {
        return Err(Error::Validation(format!(
            "herm_eigen: matrix is {}x{}, not square",
            m.rows, m.cols
        )));
    }
    if !m.is_hermitian(1e-9) {
        return Err(Error::Validation(
            "herm_eigen: matrix is not Hermitian within 1e-9 of its scale".into(),
        ));
    }
    let n = m.rows;
    if n == 0 {
        return Ok((vec![], CMatrix::zeros(0, 0)));
    }
    // Work on the Hermitian part; diagonal imaginary round-off is dropped.
    let mut a = CMatrix::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
    for i in 0..n {
        a[(i, i)] = C64::new(a[(i, i)].re, 0.0);
    }
    let mut v = CMatrix::identity(n);
    let scale = a.max_abs().max(1e-300);

    let off = |a: &CMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                s += a[(i, j)].norm_sqr();
            }
        }
        s.sqrt()
    };

    let max_sweeps = 60;
    for _sweep in 0..max_sweeps {
        if off(&a) <= 1e-14 * scale * (n as f64) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let abs_apq = apq.norm();
                if abs_apq <= 1e-300 {
                    a[(p, q)] = C64::new(0.0, 0.0);
                    a[(q, p)] = C64::new(0.0, 0.0);
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                // Unitary 2x2 rotation J = [[c, s u],[-s conj(u), c]] with
                // u = apq/|apq| zeroing the (p,q) entry; reduces to the real
                // Jacobi rotation on |apq|.
                let u = apq / abs_apq;
                let tau = (aqq - app) / (2.0 * abs_apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let su = u * s;
                // Rows/cols p and q of a <- J* a J.
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * c - akq * su.conj();
                    a[(k, q)] = akp * su + akq * c;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * c - aqk * su;
                    a[(q, k)] = apk * su.conj() + aqk * c;
                }
                // Restore exact symmetry of the rotated pair.
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * c - vkq * su.conj();
                    v[(k, q)] = vkp * su + vkq * c;
                }
            }
        }
    }
    if off(&a) > 1e-10 * scale * (n as f64) {
        return Err(Error::Numerical(
            "herm_eigen: Jacobi sweeps did not converge".into(),
        ));
    }

    let mut order: Vec<usize> = (0..n).collect();
    let lambdas: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| lambdas[i].partial_cmp(&lambdas[j]).unwrap());
    let sorted: Vec<f64> = order.iter().map(|&i| lambdas[i]).collect();
    let vs = CMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok((sorted, vs))
}

/// Counts of (positive, negative, zero) eigenvalues of a Hermitian matrix,
/// with `tol` as the absolute zero threshold.
pub fn signature(m: &CMatrix, tol: f64) -> Result<(usize, usize, usize)> {
    let (lambdas, _) = herm_eigen(m)?;
    let mut pos = 0;
    let mut neg = 0;
    let mut zero = 0;
    for l in lambdas {
        if l > tol {
            pos += 1;
        } else if l < -tol {
            neg += 1;
        } else {
            zero += 1;
        }
    }
    Ok((pos, neg, zero))
}

// ---------------------------------------------------------------------------
// General complex eigenvalues: Hessenberg + shifted QR
// ---------------------------------------------------------------------------

fn hessenberg(m: &CMatrix) -> CMatrix {
    let n = m.rows;
    let mut a = m.clone();
    for k in 0..n.saturating_sub(2) {
        let mut norm_x = 0.0;
        for i in k + 1..n {
            norm_x += a[(i, k)].norm_sqr();
        }
        let norm_x = norm_x.sqrt();
        if norm_x <= 1e-300 {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let phase = if x0.norm() > 0.0 {
            x0 / x0.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        let alpha = -phase * norm_x;
        let mut v: Vec<C64> = (k + 1..n).map(|i| a[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 <= 1e-300 {
            continue;
        }
        // similarity: a <- H a H with H = I - 2 v v*/|v|^2 acting on k+1..
        for j in 0..n {
            let mut dot = C64::new(0.0, 0.0);
            for i in 0..v.len() {
                dot += v[i].conj() * a[(k + 1 + i, j)];
            }
            let f = dot * (2.0 / vnorm2);
            for i in 0..v.len() {
                let t = f * v[i];
                a[(k + 1 + i, j)] -= t;
            }
        }
        for i0 in 0..n {
            let mut dot = C64::new(0.0, 0.0);
            for i in 0..v.len() {
                dot += a[(i0, k + 1 + i)] * v[i];
            }
            let f = dot * (2.0 / vnorm2);
            for i in 0..v.len() {
                let t = f * v[i].conj();
                a[(i0, k + 1 + i)] -= t;
            }
        }
    }
    a
}

/// Eigenvalues of a general square complex matrix (unordered), by Hessenberg
/// reduction followed by Wilkinson-shifted QR with Givens rotations. Intended
/// for the small matrices used throughout this crate.
pub fn general_eigenvalues(m: &CMatrix) -> Result<Vec<C64>> {
    if !m.is_square() {
        return Err(Error::Validation(format!(
            "general_eigenvalues: matrix is {}x{}, not square",
            m.rows, m.cols
        )));
    }
    let n = m.rows;
    if n == 0 {
        return Ok(vec![]);
    }
    if n == 1 {
        return Ok(vec![m[(0, 0)]]);
    }
    let mut a = hessenberg(m);
    let scale = a.max_abs().max(1e-300);
    let mut eigs: Vec<C64> = Vec::with_capacity(n);
    let mut hi = n - 1; // active block is rows 0..=hi
    let mut iters_since_deflate = 0usize;
    let mut total_iters = 0usize;
    let max_total = 240 * n;
    loop {
        // deflate any negligible subdiagonal in the active block
        loop {
            let mut deflated = false;
            if hi == 0 {
                eigs.push(a[(0, 0)]);
                break;
            }
            let sub = a[(hi, hi - 1)].norm();
            let local = a[(hi - 1, hi - 1)].norm() + a[(hi, hi)].norm();
            if sub <= EPS * local.max(scale * EPS) {
                eigs.push(a[(hi, hi)]);
                hi -= 1;
                iters_since_deflate = 0;
                deflated = true;
            }
            if !deflated {
                break;
            }
        }
        if eigs.len() == n {
            break;
        }
        // find the start of the unreduced block ending at hi
        let mut lo = hi;
        while lo > 0 {
            let sub = a[(lo, lo - 1)].norm();
            let local = a[(lo - 1, lo - 1)].norm() + a[(lo, lo)].norm();
            if sub <= EPS * local.max(scale * EPS) {
                a[(lo, lo - 1)] = C64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }

        total_iters += 1;
        iters_since_deflate += 1;
        if total_iters > max_total {
            return Err(Error::Numerical(
                "general_eigenvalues: QR iteration did not converge".into(),
            ));
        }

        // Wilkinson shift from the trailing 2x2 of the active block, with an
        // exceptional shift every 12 stalled iterations.
        let shift = if iters_since_deflate.is_multiple_of(12) {
            a[(hi, hi)] + C64::new(0.75 * a[(hi, hi - 1)].norm() + EPS * scale, 0.0)
        } else {
            let h11 = a[(hi - 1, hi - 1)];
            let h12 = a[(hi - 1, hi)];
            let h21 = a[(hi, hi - 1)];
            let h22 = a[(hi, hi)];
            let tr = h11 + h22;
            let half = tr * 0.5;
            let disc = (half * half - (h11 * h22 - h12 * h21)).sqrt();
            let e1 = half + disc;
            let e2 = half - disc;
            if (e1 - h22).norm() < (e2 - h22).norm() {
                e1
            } else {
                e2
            }
        };

        // explicit shifted QR step on the block lo..=hi via Givens rotations
        let len = hi - lo + 1;
        for i in lo..=hi {
            a[(i, i)] -= shift;
        }
        let mut rots: Vec<(f64, C64)> = Vec::with_capacity(len - 1);
        for k in lo..hi {
            let f = a[(k, k)];
            let g = a[(k + 1, k)];
            let (c, s) = givens(f, g);
            rots.push((c, s));
            // apply G to rows k, k+1 (columns k..=hi suffice on Hessenberg)
            for j in k..=hi {
                let t1 = a[(k, j)];
                let t2 = a[(k + 1, j)];
                a[(k, j)] = t1 * c + t2 * s;
                a[(k + 1, j)] = -t1 * s.conj() + t2 * c;
            }
        }
        // a <- R Q with Q = G_lo^* ... G_{hi-1}^*: rotate column pairs
        for (idx, &(c, s)) in rots.iter().enumerate() {
            let k = lo + idx;
            for i in lo..=(k + 1).min(hi) {
                let t1 = a[(i, k)];
                let t2 = a[(i, k + 1)];
                a[(i, k)] = t1 * c + t2 * s.conj();
                a[(i, k + 1)] = -t1 * s + t2 * c;
            }
        }
        for i in lo..=hi {
            a[(i, i)] += shift;
        }
    }
    Ok(eigs)
}

/// Givens rotation `[[c, s],[-conj(s), c]]` with `c` real mapping `(f,g)` to
/// `(r, 0)`.
fn givens(f: C64, g: C64) -> (f64, C64) {
    let fa = f.norm();
    let ga = g.norm();
    if ga == 0.0 {
        return (1.0, C64::new(0.0, 0.0));
    }
    if fa == 0.0 {
        return (0.0, g.conj() / ga);
    }
    let h = (fa * fa + ga * ga).sqrt();
    let c = fa / h;
    let s = (f / fa) * (g.conj() / h);
    (c, s)
}

// ---------------------------------------------------------------------------
// Polar decomposition
// ---------------------------------------------------------------------------

/// Polar decomposition `m = u p` with `u` unitary and `p = (m* m)^{1/2}`
/// positive semidefinite Hermitian. Errors when the smallest singular value
/// is below `1e-12` of the matrix scale, where the unitary factor is not
/// well determined.
pub fn polar(m: &CMatrix) -> Result<(CMatrix, CMatrix)> {
    if !m.is_square() {
        return Err(Error::Validation("polar: matrix must be square".into()));
    }
    let n = m.rows;
    let mtm = m.adjoint().mul(m);
    let (lambdas, v) = herm_eigen(&mtm)?;
    let scale = m.max_abs().max(1.0);
    let min_sv = lambdas
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
        .max(0.0)
        .sqrt();
    if min_sv <= 1e-12 * scale {
        return Err(Error::SingularPolar(format!(
            "smallest singular value {:.3e} below 1e-12 of scale {:.3e}",
            min_sv, scale
        )));
    }
    // p = v diag(sqrt(lambda)) v*, p_inv analogous
    let mut p = CMatrix::zeros(n, n);
    let mut p_inv = CMatrix::zeros(n, n);
    for k in 0..n {
        let s = lambdas[k].max(0.0).sqrt();
        for i in 0..n {
            for j in 0..n {
                let w = v[(i, k)] * v[(j, k)].conj();
                p[(i, j)] += w * s;
                p_inv[(i, j)] += w / s;
            }
        }
    }
    let u = m.mul(&p_inv);
    Ok((u, p))
}

// ---------------------------------------------------------------------------
// Principal-branch log determinant
// ---------------------------------------------------------------------------

/// `log det m` as the sum of principal logarithms of the eigenvalues, valid
/// when the spectrum lies in the closed right half-plane; the imaginary part
/// then lies in `(-pi d/2, pi d/2]` for a `d x d` matrix.
///
/// Errors: an eigenvalue within `zero_tol` of 0 (`NonTransverse`), or with
/// real part below `-branch_tol` (`BranchRegion`).
pub fn log_det_right_half(m: &CMatrix, zero_tol: f64, branch_tol: f64) -> Result<C64> {
    let eigs = general_eigenvalues(m)?;
    let mut acc = C64::new(0.0, 0.0);
    for mu in eigs {
        if mu.norm() <= zero_tol {
            return Err(Error::NonTransverse(format!(
                "log_det_right_half: eigenvalue {:.3e}{:+.3e}i within {:.1e} of zero",
                mu.re, mu.im, zero_tol
            )));
        }
        if mu.re < -branch_tol {
            return Err(Error::BranchRegion(format!(
                "log_det_right_half: eigenvalue {:.3e}{:+.3e}i has negative real part",
                mu.re, mu.im
            )));
        }
        acc += C64::new(mu.norm().ln(), mu.im.atan2(mu.re));
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Commuting Hermitian pairs and unitary eigendecomposition
// ---------------------------------------------------------------------------

/// Simultaneous eigendecomposition of a commuting Hermitian pair: returns a
/// unitary `v` with `a = v diag(alpha) v*` and `b = v diag(beta) v*`, where
/// `alpha` ascends. Diagonalizes `a`, then `b` restricted to each eigenvalue
/// cluster of `a` (clusters chain neighbors closer than `1e-7` of scale).
pub fn commuting_herm_eigen(a: &CMatrix, b: &CMatrix) -> Result<(Vec<f64>, Vec<f64>, CMatrix)> {
    let n = a.rows;
    if a.rows != b.rows || a.cols != b.cols {
        return Err(Error::Validation(
            "commuting_herm_eigen: shape mismatch".into(),
        ));
    }
    let (alpha, v1) = herm_eigen(a)?;
    let cluster_tol = 1e-7 * a.max_abs().max(1.0);
    let mut v = v1.clone();
    let mut k = 0;
    while k < n {
        let mut k2 = k + 1;
        while k2 < n && (alpha[k2] - alpha[k2 - 1]).abs() <= cluster_tol {
            k2 += 1;
        }
        let width = k2 - k;
        if width > 1 {
            let vb = v1.block(0, k, n, width);
            let sub = vb.adjoint().mul(&b.mul(&vb));
            let (_, w) = herm_eigen(&sub)?;
            let rot = vb.mul(&w);
            v.set_block(0, k, &rot);
        }
        k = k2;
    }
    let db = v.adjoint().mul(&b.mul(&v));
    let mut beta = Vec::with_capacity(n);
    let off_scale = b.max_abs().max(1.0);
    for i in 0..n {
        beta.push(db[(i, i)].re);
    }
    // residual: b must actually be diagonal in this basis
    let mut off = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                off = off.max(db[(i, j)].norm());
            }
        }
    }
    if off > 1e-7 * off_scale {
        return Err(Error::Numerical(format!(
            "commuting_herm_eigen: pair not simultaneously diagonalizable (residual {:.3e})",
            off
        )));
    }
    Ok((alpha, beta, v))
}

/// Eigendecomposition `u = v diag(exp(i theta)) v*` of a unitary matrix, via
/// simultaneous diagonalization of the commuting Hermitian pair
/// `(u + u*)/2` and `(u - u*)/(2i)`. Angles are principal values in
/// `(-pi, pi]`. Requires `u` unitary within `1e-8` of scale.
pub fn unitary_eigen(u: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let n = u.rows;
    if !u.is_square() {
        return Err(Error::Validation(
            "unitary_eigen: matrix must be square".into(),
        ));
    }
    let id = CMatrix::identity(n);
    if u.adjoint().mul(u).sub(&id).frobenius_norm() > 1e-8 * (n as f64).sqrt().max(1.0) {
        return Err(Error::Validation(
            "unitary_eigen: matrix is not unitary within 1e-8".into(),
        ));
    }
    let re = u.add(&u.adjoint()).scale(C64::new(0.5, 0.0));
    let im = u.sub(&u.adjoint()).scale(C64::new(0.0, -0.5));
    let (cos_vals, sin_vals, v) = commuting_herm_eigen(&re, &im)?;
    let mut angles = Vec::with_capacity(n);
    for i in 0..n {
        let z = C64::new(cos_vals[i], sin_vals[i]);
        if (z.norm() - 1.0).abs() > 1e-7 {
            return Err(Error::Numerical(
                "unitary_eigen: diagonalization failed to produce unimodular eigenvalues".into(),
            ));
        }
        angles.push(z.im.atan2(z.re));
    }
    // residual check: u v = v diag
    let mut recon = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            recon[(i, j)] = v[(i, j)] * C64::from_polar(1.0, angles[j]);
        }
    }
    if u.mul(&v).sub(&recon).frobenius_norm() > 1e-8 * (n as f64) {
        return Err(Error::Numerical("unitary_eigen: residual too large".into()));
    }
    Ok((angles, v))
}

// ---------------------------------------------------------------------------
// Matrix exponential and operator norm
// ---------------------------------------------------------------------------

/// Largest singular value, via the Hermitian eigenvalues of `m* m`.
pub fn op_norm(m: &CMatrix) -> f64 {
    if m.rows == 0 || m.cols == 0 {
        return 0.0;
    }
    let mtm = m.adjoint().mul(m);
    match herm_eigen(&mtm) {
        Ok((l, _)) => l.last().copied().unwrap_or(0.0).max(0.0).sqrt(),
        Err(_) => m.frobenius_norm(),
    }
}

/// Matrix exponential by scaling and squaring with a Taylor series on the
/// scaled matrix. Accurate to machine precision for the moderate-norm
/// matrices used in this crate.
pub fn expm(m: &CMatrix) -> CMatrix {
    assert!(m.is_square(), "expm: matrix must be square");
    let n = m.rows;
    let norm = m.frobenius_norm();
    let k = if norm > 0.25 {
        (norm / 0.25).log2().ceil() as u32
    } else {
        0
    };
    let a = m.scale(C64::new(0.5f64.powi(k as i32), 0.0));
    let mut result = CMatrix::identity(n);
    let mut term = CMatrix::identity(n);
    for j in 1..=30u32 {
        term = term.mul(&a).scale(C64::new(1.0 / j as f64, 0.0));
        result = result.add(&term);
        if term.frobenius_norm() <= 1e-20 * result.frobenius_norm().max(1.0) {
            break;
        }
    }
    for _ in 0..k {
        result = result.mul(&result);
    }
    result
}

// ---------------------------------------------------------------------------
// Deterministic pairwise summation
// ---------------------------------------------------------------------------

/// Pairwise summation with a fixed reduction tree; deterministic for a given
/// input order.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        n => {
            let mid = n / 2;
            pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
        }
    }
}

// ---------------------------------------------------------------------------
// Random sampling helpers
// ---------------------------------------------------------------------------

use rand::Rng;
use rand_distr::StandardNormal;

/// Standard complex Gaussian entry.
pub fn gaussian_c64<R: Rng>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im)
}

/// Matrix with iid standard complex Gaussian entries.
pub fn gaussian_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    let mut m = CMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = gaussian_c64(rng);
        }
    }
    m
}

/// Haar-distributed random unitary: QR of a complex Gaussian matrix with the
/// R-diagonal phases absorbed into Q.
pub fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
    let g = gaussian_matrix(rng, n, n);
    let (q, r) = qr(&g);
    let mut u = q;
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        for i in 0..n {
            u[(i, j)] *= phase;
        }
    }
    u
}

/// Haar-distributed random real special orthogonal matrix.
pub fn random_special_orthogonal<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
    let mut g = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let x: f64 = rng.sample(StandardNormal);
            g[(i, j)] = C64::new(x, 0.0);
        }
    }
    let (q, r) = qr(&g);
    let mut o = q;
    for j in 0..n {
        let sign = if r[(j, j)].re < 0.0 { -1.0 } else { 1.0 };
        for i in 0..n {
            o[(i, j)] *= sign;
        }
    }
    // force det +1 by flipping the last column if needed
    if det(&o).re < 0.0 {
        for i in 0..n {
            o[(i, n - 1)] = -o[(i, n - 1)];
        }
    }
    o
}
