//! Dense complex linear algebra.
//!
//! Everything in the crate is carried by [`ComplexMatrix`] (row-major,
//! `Complex64` entries) and [`ComplexVector`]. The Hermitian eigensolver is a
//! cyclic complex Jacobi method; it is accurate to working precision on the
//! small matrices this crate deals with (reduced states of a few qudits).

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Tolerance used for unitarity and orthonormality checks.
pub const UNITARY_TOL: f64 = 1e-10;
/// Relative tolerance of the Hermiticity check in [`hermitian_eig`].
pub const HERMITIAN_TOL: f64 = 1e-10;

const JACOBI_REL_THRESHOLD: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 100;

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries, rejecting empty shapes,
    /// length mismatches and non-finite values.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch(format!(
                "matrix shape must be positive, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidEntries(format!("non-finite entry at index {pos}")));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::from_row_major(r, c, rows.concat())
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::from_row_major(rows, cols, data.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn diagonal(values: &[Complex64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[ComplexVector]) -> Result<Self> {
        let cols = columns.len();
        let rows = columns.first().map_or(0, ComplexVector::dim);
        if columns.iter().any(|c| c.dim() != rows) {
            return Err(Error::DimensionMismatch("columns of unequal length".into()));
        }
        let mut m = Self::zeros(rows, cols);
        for (j, c) in columns.iter().enumerate() {
            for i in 0..rows {
                m[(i, j)] = c[i];
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.data
    }

    pub fn column(&self, j: usize) -> ComplexVector {
        ComplexVector::from_vec((0..self.rows).map(|i| self[(i, j)]).collect())
    }

    pub fn set_column(&mut self, j: usize, v: &ComplexVector) {
        for i in 0..self.rows {
            self[(i, j)] = v[i];
        }
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(Complex64::conj).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                let orow = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &ComplexVector) -> Result<ComplexVector> {
        if self.cols != v.dim() {
            return Err(Error::DimensionMismatch(format!(
                "cannot apply {}x{} matrix to vector of length {}",
                self.rows,
                self.cols,
                v.dim()
            )));
        }
        Ok(ComplexVector::from_vec(
            (0..self.rows)
                .map(|i| {
                    self.data[i * self.cols..(i + 1) * self.cols]
                        .iter()
                        .zip(v.as_slice())
                        .map(|(a, b)| a * b)
                        .sum()
                })
                .collect(),
        ))
    }

    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Self::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out[(i * other.rows + k, j * other.cols + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// `Tr(self · other)` without forming the product.
    pub fn trace_of_product(&self, other: &Self) -> Complex64 {
        debug_assert_eq!(self.cols, other.rows);
        debug_assert_eq!(self.rows, other.cols);
        let mut acc = ZERO;
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc += self[(i, k)] * other[(k, i)];
            }
        }
        acc
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
    }

    /// `‖A − A†‖_F`.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut acc = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                acc += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// `‖A†A − I‖_F`, or infinity for non-square input.
    pub fn unitarity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.orthonormality_defect()
    }

    /// `‖A†A − I_k‖_F` for the k columns of `A`.
    pub fn orthonormality_defect(&self) -> f64 {
        let gram = self.adjoint().matmul(self).expect("shapes agree");
        gram.sub(&ComplexMatrix::identity(self.cols))
            .expect("shapes agree")
            .frobenius_norm()
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    /// Panics on incompatible shapes; use [`ComplexMatrix::matmul`] for a checked product.
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("incompatible matrix shapes")
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector {
    data: Vec<Complex64>,
}

impl ComplexVector {
    pub fn zeros(dim: usize) -> Self {
        Self {
            data: vec![ZERO; dim],
        }
    }

    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.data[k] = ONE;
        v
    }

    pub fn from_vec(data: Vec<Complex64>) -> Self {
        Self { data }
    }

    /// Checked constructor: non-empty, all entries finite.
    pub fn new(data: Vec<Complex64>) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::DimensionMismatch("empty vector".into()));
        }
        if let Some(pos) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidEntries(format!("non-finite entry at index {pos}")));
        }
        Ok(Self { data })
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.data
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    /// `self − coeff · other`, in place.
    pub fn axpy_sub(&mut self, coeff: Complex64, other: &Self) {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a -= coeff * b;
        }
    }
}

impl Index<usize> for ComplexVector {
    type Output = Complex64;

    fn index(&self, i: usize) -> &Complex64 {
        &self.data[i]
    }
}

impl IndexMut<usize> for ComplexVector {
    fn index_mut(&mut self, i: usize) -> &mut Complex64 {
        &mut self.data[i]
    }
}

/// Eigenvalues (descending) and unit eigenvectors (as columns) of a
/// Hermitian matrix.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenSystem {
    pub fn eigenvector(&self, k: usize) -> ComplexVector {
        self.eigenvectors.column(k)
    }

    /// `V · diag(λ) · V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let d: Vec<Complex64> = self.eigenvalues.iter().map(|&l| Complex64::new(l, 0.0)).collect();
        let vd = &self.eigenvectors * &ComplexMatrix::diagonal(&d);
        &vd * &self.eigenvectors.adjoint()
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations.
///
/// Eigenvalues come back sorted descending (stable with respect to the Jacobi
/// order on exact ties). Each eigenvector is phase-fixed so that its entry of
/// largest modulus (lowest index among near-ties) is real and non-negative.
/// Degenerate eigenspaces are returned as the solver finds them.
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<EigenSystem> {
    if !h.is_square() {
        return Err(Error::NotSquare {
            rows: h.rows(),
            cols: h.cols(),
        });
    }
    let n = h.rows();
    let norm = h.frobenius_norm();
    let asym = h.hermiticity_defect();
    if asym > HERMITIAN_TOL * norm.max(1.0) {
        return Err(Error::NotHermitian { asymmetry: asym });
    }

    // Work on the exactly Hermitian part.
    let mut a = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        a[(i, i)] = Complex64::new(h[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let z = (h[(i, j)] + h[(j, i)].conj()) * 0.5;
            a[(i, j)] = z;
            a[(j, i)] = z.conj();
        }
    }
    let mut v = ComplexMatrix::identity(n);
    let threshold = JACOBI_REL_THRESHOLD * norm;

    let off_norm = |a: &ComplexMatrix| -> f64 {
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    acc += a[(i, j)].norm_sqr();
                }
            }
        }
        acc.sqrt()
    };

    let mut converged = off_norm(&a) <= threshold;
    let mut sweeps = 0;
    while !converged && sweeps < JACOBI_MAX_SWEEPS {
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                jacobi_rotate(&mut a, &mut v, p, q);
            }
        }
        converged = off_norm(&a) <= threshold;
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));

    let mut eigenvalues = Vec::with_capacity(n);
    let mut eigenvectors = ComplexMatrix::zeros(n, n);
    for (k, &src) in order.iter().enumerate() {
        eigenvalues.push(a[(src, src)].re);
        let mut col = v.column(src);
        fix_phase(&mut col);
        eigenvectors.set_column(k, &col);
    }
    Ok(EigenSystem {
        eigenvalues,
        eigenvectors,
    })
}

/// One complex Jacobi rotation annihilating `a[p][q]`.
///
/// With `a_pq = |a_pq| e^{iφ}` the rotation is `G = D·R` where
/// `D = diag(1, e^{-iφ})` makes the 2×2 block real and `R` is the classical
/// real Jacobi rotation. Applies `A ← G†AG` and `V ← VG`.
fn jacobi_rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let phase = apq / mag; // e^{iφ}
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta.is_finite() {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    } else {
        0.0
    };
    if t == 0.0 {
        return;
    }
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let n = a.rows();

    // Column update: A ← A·G, with G_pp = c, G_pq = s, G_qp = −s e^{-iφ}, G_qq = c e^{-iφ}.
    let e_minus = phase.conj();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c - akq * e_minus * s;
        a[(k, q)] = akp * s + akq * e_minus * c;
    }
    // Row update: A ← G†·A.
    let e_plus = phase;
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c - aqk * e_plus * s;
        a[(q, k)] = apk * s + aqk * e_plus * c;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - vkq * e_minus * s;
        v[(k, q)] = vkp * s + vkq * e_minus * c;
    }
}

/// Rotates `v` so that its largest-modulus entry is real and non-negative.
/// Entries within a relative 1e-12 of the maximum count as ties; the lowest
/// index wins.
pub fn fix_phase(v: &mut ComplexVector) {
    let max = v.as_slice().iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return;
    }
    let pivot = v
        .as_slice()
        .iter()
        .position(|z| z.norm() >= max * (1.0 - 1e-12))
        .expect("maximum exists");
    let z = v[pivot];
    let rot = z.conj() / z.norm();
    for x in v.as_mut_slice() {
        *x *= rot;
    }
    v[pivot] = Complex64::new(v[pivot].norm(), 0.0);
}

/// Orthonormalizes `vectors` in order with two passes of modified
/// Gram–Schmidt. Vectors whose residual norm falls below `drop_tol` are
/// discarded.
pub fn gram_schmidt(vectors: &[ComplexVector], drop_tol: f64) -> Vec<ComplexVector> {
    let mut basis: Vec<ComplexVector> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let c = b.inner(&w);
                w.axpy_sub(c, b);
            }
        }
        let norm = w.norm();
        if norm > drop_tol {
            basis.push(w.scale(Complex64::new(1.0 / norm, 0.0)));
        }
    }
    basis
}

/// Extends `k` orthonormal columns in dimension `d` to a `d×d` unitary.
///
/// The first `k` output columns are bitwise copies of the input. New columns
/// are taken greedily from the standard basis vector with the largest
/// residual after projecting out the current span.
pub fn complete_to_unitary(columns: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (d, k) = columns.shape();
    if k > d {
        return Err(Error::DimensionMismatch(format!(
            "{k} columns cannot be orthonormal in dimension {d}"
        )));
    }
    let deviation = columns.orthonormality_defect();
    if deviation > UNITARY_TOL {
        return Err(Error::NotOrthonormal { deviation });
    }

    let mut basis: Vec<ComplexVector> = (0..k).map(|j| columns.column(j)).collect();
    while basis.len() < d {
        let mut best: Option<(f64, ComplexVector)> = None;
        for i in 0..d {
            let mut w = ComplexVector::basis(d, i);
            for _ in 0..2 {
                for b in &basis {
                    let c = b.inner(&w);
                    w.axpy_sub(c, b);
                }
            }
            let norm = w.norm();
            if best.as_ref().is_none_or(|(n, _)| norm > *n) {
                best = Some((norm, w));
            }
        }
        let (norm, w) = best.expect("d > 0");
        basis.push(w.scale(Complex64::new(1.0 / norm, 0.0)));
    }

    let mut out = ComplexMatrix::zeros(d, d);
    for (j, b) in basis.iter().enumerate().skip(k) {
        out.set_column(j, b);
    }
    for j in 0..k {
        for i in 0..d {
            out[(i, j)] = columns[(i, j)];
        }
    }
    Ok(out)
}

/// Haar-distributed `d×d` unitary, deterministic in `(d, seed)`.
///
/// Draws a complex Ginibre matrix from a ChaCha20 stream and orthonormalizes
/// its columns. Gram–Schmidt yields the QR factor with positive real
/// diagonal in `R`, which makes the factorization unique and the `Q` factor
/// Haar distributed.
pub fn haar_unitary(d: usize, seed: u64) -> ComplexMatrix {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    haar_unitary_with(d, &mut rng)
}

pub(crate) fn haar_unitary_with<R: rand::Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    assert!(d >= 1, "dimension must be positive");
    let columns: Vec<ComplexVector> = (0..d)
        .map(|_| ComplexVector::from_vec((0..d).map(|_| gaussian_complex(rng)).collect()))
        .collect();
    let q = gram_schmidt(&columns, 0.0);
    assert_eq!(q.len(), d, "Ginibre matrix was singular");
    ComplexMatrix::from_columns(&q).expect("square")
}

/// Standard complex Gaussian with `E|z|² = 1`.
pub(crate) fn gaussian_complex<R: rand::Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn frobenius_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    Ok(a.sub(b)?.frobenius_norm())
}

/// `exp(i·H)` for Hermitian `H`, via its eigendecomposition.
pub fn exp_i_hermitian(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(h)?;
    let phases: Vec<Complex64> = eig
        .eigenvalues
        .iter()
        .map(|&l| Complex64::from_polar(1.0, l))
        .collect();
    let vd = &eig.eigenvectors * &ComplexMatrix::diagonal(&phases);
    Ok(&vd * &eig.eigenvectors.adjoint())
}

/// Determinant of a real square matrix (row-major) by LU with partial
/// pivoting.
pub fn real_determinant(n: usize, entries: &[f64]) -> f64 {
    assert_eq!(entries.len(), n * n);
    let mut m = entries.to_vec();
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| m[a * n + col].abs().total_cmp(&m[b * n + col].abs()))
            .expect("non-empty range");
        let p = m[pivot * n + col];
        if p == 0.0 {
            return 0.0;
        }
        if pivot != col {
            for j in 0..n {
                m.swap(pivot * n + j, col * n + j);
            }
            det = -det;
        }
        det *= p;
        for r in (col + 1)..n {
            let f = m[r * n + col] / p;
            for j in col..n {
                m[r * n + j] -= f * m[col * n + j];
            }
        }
    }
    det
}
