//! Multipartite pure and mixed states.
//!
//! Amplitudes are indexed lexicographically with party 0 slowest, so a
//! three-qubit amplitude `a_{ijk}` lives at flat index `4i + 2j + k`. Party
//! indices in the API are zero-based; textual labels such as `"12-3"` are
//! one-based.

use std::fmt;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::linalg::{
    gaussian_complex, hermitian_eig, ComplexMatrix, ComplexVector, UNITARY_TOL, ZERO,
};

pub const NORM_TOL: f64 = 1e-12;
pub const DENSITY_TOL: f64 = 1e-10;
/// Eigenvalues at or below this are treated as zero.
pub const RANK_THRESHOLD: f64 = 1e-10;

/// Largest total Hilbert dimension accepted for a state (12 qubits).
pub const MAX_TOTAL_DIM: usize = 1 << 12;

#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dims: Vec<usize>,
    amplitudes: ComplexVector,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    matrix: ComplexMatrix,
}

/// Split of the parties into two nonempty complementary sets, each kept in
/// ascending order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bipartition {
    left: Vec<usize>,
    right: Vec<usize>,
}

fn validate_dims(dims: &[usize]) -> Result<usize> {
    if dims.is_empty() {
        return Err(Error::DimensionMismatch("at least one party is required".into()));
    }
    if let Some(&d) = dims.iter().find(|&&d| d < 2) {
        return Err(Error::DimensionMismatch(format!("party dimension {d} < 2")));
    }
    let total = dims
        .iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d))
        .filter(|&t| t <= MAX_TOTAL_DIM)
        .ok_or_else(|| {
            Error::DimensionMismatch(format!("total dimension of {dims:?} exceeds {MAX_TOTAL_DIM}"))
        })?;
    Ok(total)
}

/// Flat index → per-party digits.
fn digits(mut index: usize, dims: &[usize], out: &mut [usize]) {
    for j in (0..dims.len()).rev() {
        out[j] = index % dims[j];
        index /= dims[j];
    }
}

/// Flat index of the sub-multi-index restricted to `parties`.
fn sub_index(digits: &[usize], dims: &[usize], parties: &[usize]) -> usize {
    parties.iter().fold(0, |acc, &p| acc * dims[p] + digits[p])
}

impl PureState {
    /// Checked constructor; the amplitudes must have unit norm within 1e-12.
    pub fn new(dims: Vec<usize>, amplitudes: Vec<Complex64>) -> Result<Self> {
        let state = Self::unnormalized(dims, amplitudes)?;
        let norm = state.amplitudes.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(state)
    }

    /// Rescales nonzero amplitudes to unit norm.
    pub fn normalized(dims: Vec<usize>, amplitudes: Vec<Complex64>) -> Result<Self> {
        let mut state = Self::unnormalized(dims, amplitudes)?;
        let norm = state.amplitudes.norm();
        if norm == 0.0 {
            return Err(Error::NotNormalized { norm });
        }
        state.amplitudes = state.amplitudes.scale(Complex64::new(1.0 / norm, 0.0));
        Ok(state)
    }

    fn unnormalized(dims: Vec<usize>, amplitudes: Vec<Complex64>) -> Result<Self> {
        let total = validate_dims(&dims)?;
        if amplitudes.len() != total {
            return Err(Error::DimensionMismatch(format!(
                "dims {dims:?} need {total} amplitudes, got {}",
                amplitudes.len()
            )));
        }
        Ok(Self {
            dims,
            amplitudes: ComplexVector::new(amplitudes)?,
        })
    }

    /// Computational basis state with the given per-party digits.
    pub fn basis(dims: Vec<usize>, digits: &[usize]) -> Result<Self> {
        let total = validate_dims(&dims)?;
        if digits.len() != dims.len() || digits.iter().zip(&dims).any(|(k, d)| k >= d) {
            return Err(Error::DimensionMismatch(format!(
                "digits {digits:?} do not fit dims {dims:?}"
            )));
        }
        let idx = sub_index(digits, &dims, &(0..dims.len()).collect::<Vec<_>>());
        let mut amps = vec![ZERO; total];
        amps[idx] = Complex64::new(1.0, 0.0);
        Self::new(dims, amps)
    }

    /// `(|0…0⟩ + |1…1⟩)/√2` on `n` qubits.
    pub fn ghz(n: usize) -> Self {
        let dims = vec![2; n];
        let total = 1 << n;
        let mut amps = vec![ZERO; total];
        let s = std::f64::consts::FRAC_1_SQRT_2;
        amps[0] = Complex64::new(s, 0.0);
        amps[total - 1] = Complex64::new(s, 0.0);
        Self::new(dims, amps).expect("valid GHZ state")
    }

    /// `(|001⟩ + |010⟩ + |100⟩)/√3`.
    pub fn w() -> Self {
        let mut amps = vec![ZERO; 8];
        let s = 1.0 / 3f64.sqrt();
        for idx in [1, 2, 4] {
            amps[idx] = Complex64::new(s, 0.0);
        }
        Self::new(vec![2, 2, 2], amps).expect("valid W state")
    }

    /// Haar-random pure state, deterministic in `(dims, seed)`.
    pub fn random(dims: Vec<usize>, seed: u64) -> Result<Self> {
        let total = validate_dims(&dims)?;
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let amps = (0..total).map(|_| gaussian_complex(&mut rng)).collect();
        Self::normalized(dims, amps)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_parties(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.amplitudes.dim()
    }

    pub fn amplitudes(&self) -> &ComplexVector {
        &self.amplitudes
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch(format!(
                "dims {:?} vs {:?}",
                self.dims, other.dims
            )));
        }
        Ok(self.amplitudes.inner(&other.amplitudes))
    }

    /// The matrix 𝒜 with rows indexed by the left parties and columns by the
    /// right parties, both lexicographic.
    pub fn bipartition_matrix(&self, split: &Bipartition) -> Result<ComplexMatrix> {
        split.check_parties(self.num_parties())?;
        let rows: usize = split.left.iter().map(|&p| self.dims[p]).product();
        let cols: usize = split.right.iter().map(|&p| self.dims[p]).product();
        let mut m = ComplexMatrix::zeros(rows, cols);
        let mut dg = vec![0; self.dims.len()];
        for (idx, &a) in self.amplitudes.as_slice().iter().enumerate() {
            digits(idx, &self.dims, &mut dg);
            let r = sub_index(&dg, &self.dims, &split.left);
            let c = sub_index(&dg, &self.dims, &split.right);
            m[(r, c)] = a;
        }
        Ok(m)
    }

    /// Reduced state on the complement of `traced`, computed as 𝒜𝒜†.
    pub fn partial_trace(&self, traced: &[usize]) -> Result<DensityMatrix> {
        let split = Bipartition::tracing(self.num_parties(), traced)?;
        let a = self.bipartition_matrix(&split)?;
        let mut sigma = &a * &a.adjoint();
        hermitize(&mut sigma);
        Ok(DensityMatrix {
            dims: split.left.iter().map(|&p| self.dims[p]).collect(),
            matrix: sigma,
        })
    }

    /// `|ψ⟩⟨ψ|` as a density matrix.
    pub fn to_density(&self) -> DensityMatrix {
        let n = self.total_dim();
        let mut m = ComplexMatrix::zeros(n, n);
        let a = self.amplitudes.as_slice();
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = a[i] * a[j].conj();
            }
        }
        DensityMatrix {
            dims: self.dims.clone(),
            matrix: m,
        }
    }

    /// `(U_1 ⊗ ⋯ ⊗ U_n)|ψ⟩`, one unitary per party.
    pub fn apply_local_unitaries(&self, unitaries: &[ComplexMatrix]) -> Result<PureState> {
        if unitaries.len() != self.num_parties() {
            return Err(Error::DimensionMismatch(format!(
                "{} unitaries for {} parties",
                unitaries.len(),
                self.num_parties()
            )));
        }
        for (j, u) in unitaries.iter().enumerate() {
            check_party_unitary(j, self.dims[j], u)?;
        }
        let mut amps = self.amplitudes.clone().into_vec();
        for (j, u) in unitaries.iter().enumerate() {
            apply_on_party(&mut amps, &self.dims, j, u);
        }
        let mut out = ComplexVector::from_vec(amps);
        let norm = out.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            out = out.scale(Complex64::new(1.0 / norm, 0.0));
        }
        Ok(PureState {
            dims: self.dims.clone(),
            amplitudes: out,
        })
    }

    /// Applies a single-party operator, leaving the others untouched.
    pub fn apply_on_party(&self, party: usize, u: &ComplexMatrix) -> Result<PureState> {
        let mut unitaries: Vec<ComplexMatrix> =
            self.dims.iter().map(|&d| ComplexMatrix::identity(d)).collect();
        if party >= self.num_parties() {
            return Err(Error::InvalidPartySet(format!("party {party} out of range")));
        }
        unitaries[party] = u.clone();
        self.apply_local_unitaries(&unitaries)
    }

    /// Nonzero Schmidt coefficients across `split`, descending.
    ///
    /// Square roots of the eigenvalues of the smaller of 𝒜𝒜† and 𝒜ᵀ𝒜*;
    /// eigenvalues at or below the rank threshold are dropped.
    pub fn schmidt_coefficients(&self, split: &Bipartition) -> Result<Vec<f64>> {
        let a = self.bipartition_matrix(split)?;
        let mut gram = if a.rows() <= a.cols() {
            &a * &a.adjoint()
        } else {
            &a.transpose() * &a.conj()
        };
        hermitize(&mut gram);
        let eig = hermitian_eig(&gram)?;
        Ok(eig
            .eigenvalues
            .iter()
            .filter(|&&l| l > RANK_THRESHOLD)
            .map(|&l| l.max(0.0).sqrt())
            .collect())
    }
}

/// Makes an `AA†`-type product exactly Hermitian.
fn hermitize(m: &mut ComplexMatrix) {
    let n = m.rows();
    for i in 0..n {
        m[(i, i)] = Complex64::new(m[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let z = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
}

pub(crate) fn check_party_unitary(party: usize, dim: usize, u: &ComplexMatrix) -> Result<()> {
    if u.shape() != (dim, dim) {
        return Err(Error::PartyDimensionMismatch {
            party,
            expected: dim,
            found: if u.is_square() { u.rows() } else { u.rows() * u.cols() },
        });
    }
    let deviation = u.unitarity_defect();
    if deviation > UNITARY_TOL {
        return Err(Error::NotUnitary { party, deviation });
    }
    Ok(())
}

/// In-place action of `u` on party `j` of a flat amplitude array.
pub(crate) fn apply_on_party(amps: &mut [Complex64], dims: &[usize], j: usize, u: &ComplexMatrix) {
    let d = dims[j];
    let inner: usize = dims[j + 1..].iter().product();
    let outer: usize = dims[..j].iter().product();
    let mut buf = vec![ZERO; d];
    for o in 0..outer {
        let base = o * d * inner;
        for i in 0..inner {
            for (r, slot) in buf.iter_mut().enumerate() {
                let mut acc = ZERO;
                for c in 0..d {
                    acc += u[(r, c)] * amps[base + c * inner + i];
                }
                *slot = acc;
            }
            for (r, &val) in buf.iter().enumerate() {
                amps[base + r * inner + i] = val;
            }
        }
    }
}

impl DensityMatrix {
    /// Checked constructor: Hermitian and unit trace within 1e-10,
    /// eigenvalues ≥ −1e-10.
    pub fn new(dims: Vec<usize>, matrix: ComplexMatrix) -> Result<Self> {
        let total = validate_dims(&dims)?;
        if matrix.shape() != (total, total) {
            return Err(Error::DimensionMismatch(format!(
                "dims {dims:?} need a {total}x{total} matrix, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let defect = matrix.hermiticity_defect();
        if defect > DENSITY_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "not Hermitian (defect {defect:.3e})"
            )));
        }
        let tr = matrix.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > DENSITY_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr} is not 1")));
        }
        let eig = hermitian_eig(&matrix)?;
        let min = eig.eigenvalues.last().copied().unwrap_or(0.0);
        if min < -DENSITY_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {min:.3e}"
            )));
        }
        Ok(Self { dims, matrix })
    }

    /// Convex mixture `Σ p_k |ψ_k⟩⟨ψ_k|`.
    pub fn mixture(components: &[(f64, &PureState)]) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::InvalidDensityMatrix("empty mixture".into()))?
            .1;
        let n = first.total_dim();
        let mut m = ComplexMatrix::zeros(n, n);
        for (p, psi) in components {
            if psi.dims() != first.dims() {
                return Err(Error::DimensionMismatch("mixture components differ in dims".into()));
            }
            m = m.add(&psi.to_density().matrix.scale(Complex64::new(*p, 0.0)))?;
        }
        Self::new(first.dims.clone(), m)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_parties(&self) -> usize {
        self.dims.len()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Sums out the parties in `traced`, keeping the rest in order.
    pub fn partial_trace(&self, traced: &[usize]) -> Result<DensityMatrix> {
        let split = Bipartition::tracing(self.num_parties(), traced)?;
        let kept_dims: Vec<usize> = split.left.iter().map(|&p| self.dims[p]).collect();
        let kept_total: usize = kept_dims.iter().product();
        let total = self.matrix.rows();
        let mut out = ComplexMatrix::zeros(kept_total, kept_total);
        let mut di = vec![0; self.dims.len()];
        let mut dj = vec![0; self.dims.len()];
        for i in 0..total {
            digits(i, &self.dims, &mut di);
            let ri = sub_index(&di, &self.dims, &split.right);
            let ki = sub_index(&di, &self.dims, &split.left);
            for j in 0..total {
                digits(j, &self.dims, &mut dj);
                if sub_index(&dj, &self.dims, &split.right) != ri {
                    continue;
                }
                let kj = sub_index(&dj, &self.dims, &split.left);
                out[(ki, kj)] += self.matrix[(i, j)];
            }
        }
        hermitize(&mut out);
        Ok(DensityMatrix {
            dims: kept_dims,
            matrix: out,
        })
    }
}

/// Anything a partial trace can be taken of.
pub trait PartialTrace {
    fn partial_trace(&self, traced: &[usize]) -> Result<DensityMatrix>;
}

impl PartialTrace for PureState {
    fn partial_trace(&self, traced: &[usize]) -> Result<DensityMatrix> {
        PureState::partial_trace(self, traced)
    }
}

impl PartialTrace for DensityMatrix {
    fn partial_trace(&self, traced: &[usize]) -> Result<DensityMatrix> {
        DensityMatrix::partial_trace(self, traced)
    }
}

impl Bipartition {
    pub fn new(n: usize, left: &[usize], right: &[usize]) -> Result<Self> {
        let mut l = left.to_vec();
        let mut r = right.to_vec();
        l.sort_unstable();
        r.sort_unstable();
        let split = Self { left: l, right: r };
        split.check_parties(n)?;
        Ok(split)
    }

    /// Bipartition with `traced` on the right and everything else on the left.
    pub fn tracing(n: usize, traced: &[usize]) -> Result<Self> {
        let left: Vec<usize> = (0..n).filter(|p| !traced.contains(p)).collect();
        if traced.iter().any(|&p| p >= n) {
            return Err(Error::InvalidPartySet(format!(
                "traced parties {traced:?} out of range for {n} parties"
            )));
        }
        if left.is_empty() || traced.is_empty() {
            return Err(Error::InvalidPartySet(format!(
                "traced set {traced:?} must be a nonempty proper subset of {n} parties"
            )));
        }
        Self::new(n, &left, traced)
    }

    /// Parses a one-based label such as `"12-3"` or `"1,2-3"`.
    pub fn parse(label: &str, n: usize) -> Result<Self> {
        let (l, r) = label
            .split_once('-')
            .ok_or_else(|| Error::InvalidPartySet(format!("bad split label {label:?}")))?;
        let side = |s: &str| -> Result<Vec<usize>> {
            let tokens: Vec<&str> = if s.contains(',') {
                s.split(',').map(str::trim).collect()
            } else {
                s.trim().split("").filter(|t| !t.is_empty()).collect()
            };
            tokens
                .iter()
                .map(|t| match t.parse::<usize>() {
                    Ok(p) if p >= 1 => Ok(p - 1),
                    _ => Err(Error::InvalidPartySet(format!("bad party {t:?} in {label:?}"))),
                })
                .collect()
        };
        Self::new(n, &side(l)?, &side(r)?)
    }

    pub fn left(&self) -> &[usize] {
        &self.left
    }

    pub fn right(&self) -> &[usize] {
        &self.right
    }

    /// The one-based label, e.g. `"12-3"`.
    pub fn label(&self) -> String {
        let wide = self.left.iter().chain(&self.right).any(|&p| p >= 9);
        let side = |s: &[usize]| {
            let parts: Vec<String> = s.iter().map(|p| (p + 1).to_string()).collect();
            parts.join(if wide { "," } else { "" })
        };
        format!("{}-{}", side(&self.left), side(&self.right))
    }

    fn check_parties(&self, n: usize) -> Result<()> {
        let mut all: Vec<usize> = self.left.iter().chain(&self.right).copied().collect();
        all.sort_unstable();
        if self.left.is_empty() || self.right.is_empty() || all != (0..n).collect::<Vec<_>>() {
            return Err(Error::InvalidPartySet(format!(
                "{:?} | {:?} is not a bipartition of {n} parties",
                self.left, self.right
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::haar_unitary;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn x_gate() -> ComplexMatrix {
        ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
    }

    #[test]
    fn ghz_reduced() {
        let sigma = PureState::ghz(3).partial_trace(&[2]).unwrap();
        assert_eq!(sigma.dims(), &[2, 2]);
        let expected = ComplexMatrix::from_real(
            4,
            4,
            &[0.5, 0., 0., 0., 0., 0., 0., 0., 0., 0., 0., 0., 0., 0., 0., 0.5],
        )
        .unwrap();
        assert!(crate::linalg::frobenius_distance(sigma.matrix(), &expected).unwrap() < 1e-15);
    }

    #[test]
    fn w_reduced_by_direct_summation() {
        // σ_{(ij),(i'j')} = Σ_k a_{ijk} a*_{i'j'k}: a_001, a_010, a_100 = 1/√3.
        let sigma = PureState::w().partial_trace(&[2]).unwrap();
        let t = 1.0 / 3.0;
        let expected = ComplexMatrix::from_real(
            4,
            4,
            &[t, 0., 0., 0., 0., t, t, 0., 0., t, t, 0., 0., 0., 0., 0.],
        )
        .unwrap();
        assert!(crate::linalg::frobenius_distance(sigma.matrix(), &expected).unwrap() < 1e-15);
    }

    #[test]
    fn bipartition_matrices() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let split = Bipartition::parse("12-3", 3).unwrap();
        let a = PureState::ghz(3).bipartition_matrix(&split).unwrap();
        assert_eq!(a.shape(), (4, 2));
        for r in 0..4 {
            for col in 0..2 {
                let e = if (r, col) == (0, 0) || (r, col) == (3, 1) { s } else { 0.0 };
                assert_eq!(a[(r, col)], c(e));
            }
        }
        let a = PureState::basis(vec![2, 2, 2], &[0, 0, 0])
            .unwrap()
            .bipartition_matrix(&split)
            .unwrap();
        assert_eq!(a[(0, 0)], c(1.0));
        assert!((a.frobenius_norm() - 1.0).abs() < 1e-15);

        let w = PureState::w().bipartition_matrix(&split).unwrap();
        let t = 1.0 / 3f64.sqrt();
        for (r, col) in [(0, 1), (1, 0), (2, 0)] {
            assert_eq!(w[(r, col)], c(t));
        }
        assert!((w.frobenius_norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn split_13_2_orders_rows_by_party_one_then_three() {
        // amplitude a_{ijk} sits at row 2i + k, column j
        let psi = PureState::random(vec![2, 3, 2], 5).unwrap();
        let split = Bipartition::parse("13-2", 3).unwrap();
        let a = psi.bipartition_matrix(&split).unwrap();
        assert_eq!(a.shape(), (4, 3));
        for i in 0..2 {
            for j in 0..3 {
                for k in 0..2 {
                    assert_eq!(a[(2 * i + k, j)], psi.amplitudes()[6 * i + 2 * j + k]);
                }
            }
        }
    }

    #[test]
    fn local_unitaries() {
        let ghz = PureState::ghz(3);
        let ids = vec![ComplexMatrix::identity(2); 3];
        assert_eq!(ghz.apply_local_unitaries(&ids).unwrap(), ghz);
        let psi = PureState::random(vec![2, 3, 2], 9).unwrap();
        let ids: Vec<_> = psi.dims().iter().map(|&d| ComplexMatrix::identity(d)).collect();
        assert_eq!(psi.apply_local_unitaries(&ids).unwrap(), psi);

        let flipped = ghz.apply_local_unitaries(&vec![x_gate(); 3]).unwrap();
        assert!((flipped.inner(&ghz).unwrap() - c(1.0)).norm() < 1e-15);

        let us = [haar_unitary(2, 1), haar_unitary(3, 2), haar_unitary(2, 3)];
        let out = psi.apply_local_unitaries(&us).unwrap();
        assert!((out.amplitudes().norm() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn local_unitaries_errors() {
        let psi = PureState::ghz(3);
        let bad = vec![ComplexMatrix::identity(2), ComplexMatrix::identity(3), ComplexMatrix::identity(2)];
        assert!(matches!(
            psi.apply_local_unitaries(&bad),
            Err(Error::PartyDimensionMismatch { party: 1, .. })
        ));
        let not_u = ComplexMatrix::from_real(2, 2, &[1.0, 1.0, 0.0, 1.0]).unwrap();
        let bad = vec![ComplexMatrix::identity(2), ComplexMatrix::identity(2), not_u];
        assert!(matches!(psi.apply_local_unitaries(&bad), Err(Error::NotUnitary { party: 2, .. })));
    }

    #[test]
    fn kron_consistency() {
        let psi = PureState::random(vec![2, 3, 2], 21).unwrap();
        let us = [haar_unitary(2, 4), haar_unitary(3, 5), haar_unitary(2, 6)];
        let out = psi.apply_local_unitaries(&us).unwrap();
        let split = Bipartition::parse("13-2", 3).unwrap();
        let a = psi.bipartition_matrix(&split).unwrap();
        let left = us[0].kron(&us[2]);
        let expected = &(&left * &a) * &us[1].transpose();
        let got = out.bipartition_matrix(&split).unwrap();
        assert!(crate::linalg::frobenius_distance(&got, &expected).unwrap() < 1e-12);

        let full = us[0].kron(&us[1]).kron(&us[2]);
        let direct = full.mul_vec(psi.amplitudes()).unwrap();
        let diff: f64 = direct.as_slice().iter().zip(out.amplitudes().as_slice()).map(|(a, b)| (a - b).norm_sqr()).sum();
        assert!(diff.sqrt() < 1e-12);
    }

    #[test]
    fn schmidt() {
        let split = Bipartition::parse("12-3", 3).unwrap();
        let s = PureState::ghz(3).schmidt_coefficients(&split).unwrap();
        assert_eq!(s.len(), 2);
        for x in s {
            assert!((x - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-14);
        }
        let prod = PureState::basis(vec![2, 2, 2], &[0, 0, 0]).unwrap();
        for label in ["12-3", "13-2", "23-1", "1-23"] {
            let s = prod.schmidt_coefficients(&Bipartition::parse(label, 3).unwrap()).unwrap();
            assert_eq!(s.len(), 1);
            assert!((s[0] - 1.0).abs() < 1e-15);
        }
        let s = PureState::w().schmidt_coefficients(&split).unwrap();
        assert!((s[0] - (2.0f64 / 3.0).sqrt()).abs() < 1e-14);
        assert!((s[1] - (1.0f64 / 3.0).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn mixed_partial_trace_matches_pure_route() {
        let psi = PureState::random(vec![2, 3, 2], 33).unwrap();
        let rho = psi.to_density();
        for traced in [vec![0], vec![1], vec![2], vec![0, 2]] {
            let a = psi.partial_trace(&traced).unwrap();
            let b = rho.partial_trace(&traced).unwrap();
            assert_eq!(a.dims(), b.dims());
            assert!(crate::linalg::frobenius_distance(a.matrix(), b.matrix()).unwrap() < 1e-14);
            assert!((b.trace() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn invalid_party_sets() {
        let psi = PureState::ghz(3);
        assert!(matches!(psi.partial_trace(&[]), Err(Error::InvalidPartySet(_))));
        assert!(matches!(psi.partial_trace(&[0, 1, 2]), Err(Error::InvalidPartySet(_))));
        assert!(matches!(psi.partial_trace(&[3]), Err(Error::InvalidPartySet(_))));
        assert!(Bipartition::parse("12-2", 3).is_err());
        assert!(Bipartition::parse("12", 3).is_err());
        assert!(Bipartition::parse("1-2", 3).is_err());
        assert_eq!(Bipartition::parse("3-21", 3).unwrap().label(), "3-12");
        assert_eq!(Bipartition::parse("1,2-3", 3).unwrap().label(), "12-3");
    }

    #[test]
    fn construction_checks() {
        assert!(matches!(
            PureState::new(vec![2], vec![c(1.0), c(1.0)]),
            Err(Error::NotNormalized { .. })
        ));
        assert!(PureState::new(vec![1, 2], vec![c(1.0), c(0.0)]).is_err());
        assert!(PureState::new(vec![2, 2], vec![c(1.0)]).is_err());
        let bad = ComplexMatrix::from_real(2, 2, &[1.5, 0.0, 0.0, -0.5]).unwrap();
        assert!(DensityMatrix::new(vec![2], bad).is_err());
        let ok = ComplexMatrix::from_real(2, 2, &[0.5, 0.0, 0.0, 0.5]).unwrap();
        assert!(DensityMatrix::new(vec![2], ok).is_ok());
    }
}
