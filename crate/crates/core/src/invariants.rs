//! Invariant fingerprint of a tripartite pure state across one bipartition.
//!
//! For a split `ab−c` the two-party reduced state `σ = Tr_c |ψ⟩⟨ψ|` is
//! decomposed into its eigen-ensemble `σ = Σ μ_i |ξ_i⟩⟨ξ_i|`. Each eigenvector
//! is reshaped into a `d_a × d_b` matrix `A_i`, giving
//!
//! * `ρ_i = A_i A_i†` and `θ_i = A_iᵀ A_i*`,
//! * the metric matrices `Ω_ij = Tr(ρ_i ρ_j)` and `Θ_ij = Tr(θ_i θ_j)`,
//! * the cubic tables `X_ijk = Tr(ρ_i ρ_j ρ_k)` and `Y_ijk = Tr(θ_i θ_j θ_k)`,
//! * the moments `J_s = Tr(σ^s)` for `s = 1..d_a d_b`.
//!
//! A local unitary `U_a ⊗ U_b ⊗ U_c` maps `A_i ↦ U_a A_i U_bᵀ`, so
//! `ρ_i ↦ U_a ρ_i U_a†` and `θ_i ↦ U_b θ_i U_b†` and every trace above is
//! unchanged, provided the eigenbasis is determined up to phases, i.e. the
//! spectrum is nondegenerate. The fingerprint records that as `canonical`.
//!
//! `Ω` and `Θ` are formally padded with zeros up to `d_a d_b`; the padded
//! determinant is then always zero, so genericity is judged on the `n × n`
//! block of nonzero entries.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, real_determinant, ComplexMatrix, ComplexVector};
use crate::states::{Bipartition, DensityMatrix, PureState, RANK_THRESHOLD};

/// Consecutive kept eigenvalues closer than this make the ensemble
/// non-canonical.
pub const GAP_TOL: f64 = 1e-8;
/// Default absolute per-entry tolerance of [`compare_fingerprints`].
pub const COMPARE_TOL: f64 = 1e-8;
/// `|det|` of the Ω and Θ blocks must exceed this for a generic state.
pub const DET_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct EigenEnsemble {
    pub d1: usize,
    pub d2: usize,
    pub mu: Vec<f64>,
    pub a: Vec<ComplexMatrix>,
    pub rho: Vec<ComplexMatrix>,
    pub theta: Vec<ComplexMatrix>,
    pub canonical: bool,
    /// Smallest gap between consecutive kept eigenvalues; `μ_1` at rank one.
    pub gap: f64,
}

impl EigenEnsemble {
    pub fn rank(&self) -> usize {
        self.mu.len()
    }

    /// Builds an ensemble from explicit eigenpairs (descending weights, unit
    /// vectors of length `d1·d2`).
    pub fn from_eigenpairs(d1: usize, d2: usize, pairs: &[(f64, ComplexVector)]) -> Result<Self> {
        if pairs.iter().any(|(_, v)| v.dim() != d1 * d2) {
            return Err(Error::DimensionMismatch(format!(
                "eigenvectors must have length {}",
                d1 * d2
            )));
        }
        if pairs.windows(2).any(|w| w[0].0 < w[1].0) {
            return Err(Error::DimensionMismatch("weights must be descending".into()));
        }
        let mut mu = Vec::with_capacity(pairs.len());
        let mut a = Vec::with_capacity(pairs.len());
        let mut rho = Vec::with_capacity(pairs.len());
        let mut theta = Vec::with_capacity(pairs.len());
        for (weight, v) in pairs {
            let ai = ComplexMatrix::from_row_major(d1, d2, v.as_slice().to_vec())?;
            rho.push(&ai * &ai.adjoint());
            theta.push(&ai.transpose() * &ai.conj());
            a.push(ai);
            mu.push(*weight);
        }
        let gap = match mu.len() {
            0 => 0.0,
            1 => mu[0],
            _ => mu.windows(2).map(|w| w[0] - w[1]).fold(f64::INFINITY, f64::min),
        };
        Ok(Self {
            d1,
            d2,
            canonical: !mu.is_empty() && gap > GAP_TOL,
            mu,
            a,
            rho,
            theta,
            gap,
        })
    }
}

/// Eigen-ensemble of a two-party density matrix. Eigenvalues at or below the
/// rank threshold are dropped.
pub fn eigen_ensemble(sigma: &DensityMatrix) -> Result<EigenEnsemble> {
    let &[d1, d2] = sigma.dims() else {
        return Err(Error::NotBipartite {
            parties: sigma.num_parties(),
        });
    };
    let eig = hermitian_eig(sigma.matrix())?;
    let pairs: Vec<(f64, ComplexVector)> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > RANK_THRESHOLD)
        .map(|(k, &l)| (l, eig.eigenvector(k)))
        .collect();
    EigenEnsemble::from_eigenpairs(d1, d2, &pairs)
}

/// The `n × n` blocks of Ω and Θ, with the declared padded size `d1·d2`.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricMatrices {
    pub n: usize,
    pub padded_size: usize,
    /// Row-major `n × n`.
    pub omega: Vec<f64>,
    pub theta: Vec<f64>,
}

impl MetricMatrices {
    pub fn omega_at(&self, i: usize, j: usize) -> f64 {
        self.omega[i * self.n + j]
    }

    pub fn theta_at(&self, i: usize, j: usize) -> f64 {
        self.theta[i * self.n + j]
    }
}

pub fn metric_matrices(ens: &EigenEnsemble) -> MetricMatrices {
    let n = ens.rank();
    let gram = |ms: &[ComplexMatrix]| {
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v = ms[i].trace_of_product(&ms[j]).re;
                out[i * n + j] = v;
                out[j * n + i] = v;
            }
        }
        out
    };
    MetricMatrices {
        n,
        padded_size: ens.d1 * ens.d2,
        omega: gram(&ens.rho),
        theta: gram(&ens.theta),
    }
}

/// `X` and `Y` over all `n³` index triples, lexicographic `(i, j, k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicTensors {
    pub n: usize,
    pub x: Vec<Complex64>,
    pub y: Vec<Complex64>,
}

impl CubicTensors {
    pub fn x_at(&self, i: usize, j: usize, k: usize) -> Complex64 {
        self.x[(i * self.n + j) * self.n + k]
    }

    pub fn y_at(&self, i: usize, j: usize, k: usize) -> Complex64 {
        self.y[(i * self.n + j) * self.n + k]
    }
}

pub fn cubic_tensors(ens: &EigenEnsemble) -> CubicTensors {
    let n = ens.rank();
    let table = |ms: &[ComplexMatrix]| {
        let mut out = Vec::with_capacity(n * n * n);
        for mi in &ms[..n] {
            for mj in &ms[..n] {
                let pij = mi * mj;
                out.extend(ms[..n].iter().map(|mk| pij.trace_of_product(mk)));
            }
        }
        out
    };
    CubicTensors {
        n,
        x: table(&ens.rho),
        y: table(&ens.theta),
    }
}

/// `J_s = Tr(σ^s)` for `s = 1..=count`, by repeated multiplication.
pub fn moment_invariants(sigma: &DensityMatrix, count: usize) -> Vec<f64> {
    let m = sigma.matrix();
    let mut power = m.clone();
    let mut out = Vec::with_capacity(count);
    for s in 1..=count {
        if s > 1 {
            power = &power * m;
        }
        out.push(power.trace().re);
    }
    out
}

/// Both nonzero blocks nonsingular: `|det Ω| > 1e-10` and `|det Θ| > 1e-10`.
pub fn genericity(metrics: &MetricMatrices) -> bool {
    let n = metrics.n;
    n > 0
        && real_determinant(n, &metrics.omega).abs() > DET_TOL
        && real_determinant(n, &metrics.theta).abs() > DET_TOL
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvariantFingerprint {
    pub split: String,
    /// Dimensions of all three parties.
    pub dims: Vec<usize>,
    pub spectrum: Vec<f64>,
    pub j: Vec<f64>,
    pub metrics: MetricMatrices,
    pub cubic: CubicTensors,
    pub generic: bool,
    pub canonical: bool,
    pub gap: f64,
}

impl InvariantFingerprint {
    pub fn rank(&self) -> usize {
        self.spectrum.len()
    }
}

/// Fingerprint of a three-party state across a split that pairs two parties
/// against the third.
pub fn fingerprint(state: &PureState, split: &Bipartition) -> Result<InvariantFingerprint> {
    fingerprint_with_gap_tol(state, split, GAP_TOL)
}

/// [`fingerprint`] with a custom degeneracy tolerance for the `canonical`
/// flag.
pub fn fingerprint_with_gap_tol(
    state: &PureState,
    split: &Bipartition,
    gap_tol: f64,
) -> Result<InvariantFingerprint> {
    if state.num_parties() != 3 {
        return Err(Error::NotTripartite {
            parties: state.num_parties(),
        });
    }
    let single = match (split.left().len(), split.right().len()) {
        (2, 1) => split.right(),
        (1, 2) => split.left(),
        _ => {
            return Err(Error::InvalidPartySet(format!(
                "split {split} must pair two parties against one"
            )))
        }
    };
    let sigma = state.partial_trace(single)?;
    let ens = eigen_ensemble(&sigma)?;
    let metrics = metric_matrices(&ens);
    let cubic = cubic_tensors(&ens);
    let j = moment_invariants(&sigma, ens.d1 * ens.d2);
    Ok(InvariantFingerprint {
        split: split.label(),
        dims: state.dims().to_vec(),
        spectrum: ens.mu.clone(),
        j,
        generic: genericity(&metrics),
        canonical: ens.rank() > 0 && ens.gap > gap_tol,
        gap: ens.gap,
        metrics,
        cubic,
    })
}

/// Fingerprints for the splits `12-3`, `13-2` and `23-1`.
pub fn fingerprints_all_splits(state: &PureState) -> Result<Vec<InvariantFingerprint>> {
    ["12-3", "13-2", "23-1"]
        .iter()
        .map(|label| fingerprint(state, &Bipartition::parse(label, 3)?))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Distinct,
    ConsistentGeneric,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Distinct => "Distinct",
            Verdict::ConsistentGeneric => "ConsistentGeneric",
            Verdict::Inconclusive => "Inconclusive",
        }
    }
}

fn max_abs_diff<T: Copy, F: Fn(T, T) -> f64>(a: &[T], b: &[T], dist: F) -> f64 {
    a.iter().zip(b).map(|(&x, &y)| dist(x, y)).fold(0.0, f64::max)
}

fn padded(v: &[f64], len: usize) -> Vec<f64> {
    let mut out = v.to_vec();
    out.resize(len, 0.0);
    out
}

/// Decides whether two fingerprints of the same split can belong to
/// LU-equivalent states.
///
/// Spectrum and moments are basis-free and always compared. Ω, Θ, X and Y
/// only identify the state when both ensembles are canonical and have the
/// same rank.
pub fn compare_fingerprints(
    f1: &InvariantFingerprint,
    f2: &InvariantFingerprint,
    tol: f64,
) -> Result<Verdict> {
    if f1.split != f2.split || f1.dims != f2.dims {
        return Err(Error::SplitMismatch(format!(
            "{} {:?} vs {} {:?}",
            f1.split, f1.dims, f2.split, f2.dims
        )));
    }
    let len = f1.rank().max(f2.rank());
    let abs = |x: f64, y: f64| (x - y).abs();
    let cabs = |x: Complex64, y: Complex64| (x - y).norm();
    let scalar_diff = max_abs_diff(&padded(&f1.spectrum, len), &padded(&f2.spectrum, len), abs)
        .max(max_abs_diff(&f1.j, &f2.j, abs));
    if scalar_diff > tol || f1.j.len() != f2.j.len() {
        return Ok(Verdict::Distinct);
    }
    if !(f1.canonical && f2.canonical) || f1.rank() != f2.rank() {
        return Ok(Verdict::Inconclusive);
    }
    let tensor_diff = max_abs_diff(&f1.metrics.omega, &f2.metrics.omega, abs)
        .max(max_abs_diff(&f1.metrics.theta, &f2.metrics.theta, abs))
        .max(max_abs_diff(&f1.cubic.x, &f2.cubic.x, cabs))
        .max(max_abs_diff(&f1.cubic.y, &f2.cubic.y, cabs));
    if tensor_diff > tol {
        return Ok(Verdict::Distinct);
    }
    if f1.generic && f2.generic {
        Ok(Verdict::ConsistentGeneric)
    } else {
        Ok(Verdict::Inconclusive)
    }
}
