//! Constructive LU-equivalence.
//!
//! * [`match_purification`]: two pure states with the same reduced state on
//!   all parties but `j` differ by a unitary on party `j` alone; build it.
//! * [`lift_witness`]: a local unitary witness for the `(n−1)`-party reduced
//!   states extends to a witness for the pure states by one extra factor on
//!   the traced party.
//! * [`search_lu`]: brute-force maximization of the LU fidelity, used as an
//!   independent oracle for the invariant-based verdicts.
//! * [`counterexample_report`]: two three-qubit mixed states with equal
//!   two-party marginals that are not unitarily related at all.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{
    complete_to_unitary, frobenius_distance, gram_schmidt, haar_unitary_with, hermitian_eig,
    ComplexMatrix, ComplexVector, ONE, ZERO,
};
use crate::states::{
    apply_on_party, check_party_unitary, Bipartition, DensityMatrix, PureState, RANK_THRESHOLD,
};

/// Largest reduced-state residual accepted by [`match_purification`] and
/// [`lift_witness`].
pub const REDUCED_TOL: f64 = 1e-8;
/// [`match_purification`] fails below this fidelity.
pub const RECONSTRUCTION_FIDELITY: f64 = 1.0 - 1e-6;
/// Total Hilbert dimension accepted by [`search_lu`].
pub const SEARCH_MAX_DIM: usize = 64;
/// Spectra differing by more than this rule out unitary equivalence.
pub const SPECTRAL_GAP_TOL: f64 = 1e-10;

const SEARCH_MAX_SWEEPS: usize = 300;
const LINE_SAMPLES: usize = 16;
const GOLDEN_ITERATIONS: usize = 48;

/// A product of local unitaries relating `ψ` to `ψ′`:
/// `(⊗ U_j)|ψ⟩ ≈ phase · |ψ′⟩` with `fidelity = |⟨ψ′|(⊗ U_j)|ψ⟩|`.
#[derive(Debug, Clone, PartialEq)]
pub struct LUWitness {
    pub unitaries: Vec<ComplexMatrix>,
    pub fidelity: f64,
    pub phase: Complex64,
}

impl LUWitness {
    /// Evaluates `unitaries` on the pair and records fidelity and phase.
    pub fn evaluate(psi: &PureState, psi_prime: &PureState, unitaries: Vec<ComplexMatrix>) -> Result<Self> {
        let overlap = lu_overlap(psi, psi_prime, &unitaries)?;
        let fidelity = overlap.norm().min(1.0);
        let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { ONE };
        Ok(Self {
            unitaries,
            fidelity,
            phase,
        })
    }
}

fn same_dims(psi: &PureState, psi_prime: &PureState) -> Result<()> {
    if psi.dims() != psi_prime.dims() {
        return Err(Error::DimensionMismatch(format!(
            "dims {:?} vs {:?}",
            psi.dims(),
            psi_prime.dims()
        )));
    }
    Ok(())
}

/// `⟨ψ′|(⊗ U_j)|ψ⟩`.
fn lu_overlap(psi: &PureState, psi_prime: &PureState, unitaries: &[ComplexMatrix]) -> Result<Complex64> {
    same_dims(psi, psi_prime)?;
    psi_prime.inner(&psi.apply_local_unitaries(unitaries)?)
}

/// `|⟨ψ′|(⊗ U_j)|ψ⟩|`, clamped to `[0, 1]`.
pub fn check_lu_fidelity(psi: &PureState, psi_prime: &PureState, unitaries: &[ComplexMatrix]) -> Result<f64> {
    Ok(lu_overlap(psi, psi_prime, unitaries)?.norm().min(1.0))
}

/// Unitary `W` on party `j` with `|ψ′⟩ ≈ (I ⊗ ⋯ ⊗ W ⊗ ⋯ ⊗ I)|ψ⟩`.
///
/// Requires `Tr_j |ψ⟩⟨ψ| = Tr_j |ψ′⟩⟨ψ′|` within 1e-8. With `ρ = Σ λ_k |e_k⟩⟨e_k|`
/// the shared reduced state, both states decompose as `Σ_k |e_k⟩ ⊗ |u_k⟩`
/// with orthogonal party-`j` slices of norm `√λ_k`. `W` maps the normalized
/// slices of `ψ` onto those of `ψ′` and is completed arbitrarily on the
/// orthogonal complement. Degenerate `λ` need no special care because both
/// states are sliced along the same eigenvectors.
pub fn match_purification(psi: &PureState, psi_prime: &PureState, j: usize) -> Result<ComplexMatrix> {
    same_dims(psi, psi_prime)?;
    let n = psi.num_parties();
    if n < 2 || j >= n {
        return Err(Error::InvalidPartySet(format!(
            "party {j} cannot be matched in a {n}-party state"
        )));
    }
    let rho = psi.partial_trace(&[j])?;
    let rho_prime = psi_prime.partial_trace(&[j])?;
    let residual = frobenius_distance(rho.matrix(), rho_prime.matrix())?;
    if residual > REDUCED_TOL {
        return Err(Error::ReducedMismatch { residual });
    }

    let split = Bipartition::tracing(n, &[j])?;
    let m = psi.bipartition_matrix(&split)?;
    let m_prime = psi_prime.bipartition_matrix(&split)?;
    let eig = hermitian_eig(rho.matrix())?;
    let d = psi.dims()[j];

    let slice = |mat: &ComplexMatrix, e: &ComplexVector, scale: f64| -> ComplexVector {
        ComplexVector::from_vec(
            (0..d)
                .map(|c| (0..mat.rows()).map(|r| e[r].conj() * mat[(r, c)]).sum::<Complex64>() * scale)
                .collect(),
        )
    };
    let mut from = Vec::new();
    let mut to = Vec::new();
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda <= RANK_THRESHOLD {
            continue;
        }
        let e = eig.eigenvector(k);
        let s = 1.0 / lambda.sqrt();
        from.push(slice(&m, &e, s));
        to.push(slice(&m_prime, &e, s));
    }

    let from = gram_schmidt(&from, 0.5);
    let to = gram_schmidt(&to, 0.5);
    if from.len() != to.len() {
        return Err(Error::ReconstructionFailed { fidelity: 0.0 });
    }
    let ua = complete_to_unitary(&ComplexMatrix::from_columns(&from)?)?;
    let ub = complete_to_unitary(&ComplexMatrix::from_columns(&to)?)?;
    let w = &ub * &ua.adjoint();

    let fidelity = psi_prime.inner(&psi.apply_on_party(j, &w)?)?.norm();
    if fidelity < RECONSTRUCTION_FIDELITY {
        return Err(Error::ReconstructionFailed { fidelity });
    }
    Ok(w)
}

/// Extends a witness for the reduced states over all parties but `j` to a
/// full LU witness.
///
/// `witness` lists one unitary per party other than `j`, in party order.
/// After rotating `ψ` by it, the reduced states must agree within 1e-8; the
/// factor for party `j` then comes from [`match_purification`].
pub fn lift_witness(
    psi: &PureState,
    psi_prime: &PureState,
    j: usize,
    witness: &[ComplexMatrix],
) -> Result<LUWitness> {
    same_dims(psi, psi_prime)?;
    let n = psi.num_parties();
    if j >= n {
        return Err(Error::InvalidPartySet(format!("party {j} out of range for {n} parties")));
    }
    if witness.len() + 1 != n {
        return Err(Error::DimensionMismatch(format!(
            "witness needs {} unitaries, got {}",
            n - 1,
            witness.len()
        )));
    }
    let mut unitaries: Vec<ComplexMatrix> = Vec::with_capacity(n);
    let mut rest = witness.iter();
    for p in 0..n {
        if p == j {
            unitaries.push(ComplexMatrix::identity(psi.dims()[p]));
        } else {
            let u = rest.next().expect("length checked").clone();
            check_party_unitary(p, psi.dims()[p], &u)?;
            unitaries.push(u);
        }
    }
    let phi = psi.apply_local_unitaries(&unitaries)?;
    let residual = frobenius_distance(
        phi.partial_trace(&[j])?.matrix(),
        psi_prime.partial_trace(&[j])?.matrix(),
    )?;
    if residual > REDUCED_TOL {
        return Err(Error::WitnessMismatch { residual });
    }
    unitaries[j] = match match_purification(&phi, psi_prime, j) {
        Ok(w) => w,
        Err(Error::ReducedMismatch { residual }) => return Err(Error::WitnessMismatch { residual }),
        Err(e) => return Err(e),
    };
    LUWitness::evaluate(psi, psi_prime, unitaries)
}

/// Hermitian basis generator `G_m` of `u(d)`: `d` diagonal units followed by
/// the symmetric and antisymmetric off-diagonal pairs.
#[derive(Debug, Clone, Copy)]
enum Generator {
    Diag(usize),
    Sym(usize, usize),
    Anti(usize, usize),
}

fn generators(d: usize) -> Vec<Generator> {
    let mut out: Vec<Generator> = (0..d).map(Generator::Diag).collect();
    for k in 0..d {
        for l in (k + 1)..d {
            out.push(Generator::Sym(k, l));
            out.push(Generator::Anti(k, l));
        }
    }
    out
}

impl Generator {
    /// Coefficients `(α, β, γ)` with `Tr(e^{iδG} F) = α + β e^{iδ} + γ e^{−iδ}`.
    fn trig_coefficients(self, f: &ComplexMatrix) -> (Complex64, Complex64, Complex64) {
        let tr = f.trace();
        match self {
            Generator::Diag(k) => (tr - f[(k, k)], f[(k, k)], ZERO),
            Generator::Sym(k, l) => {
                // eigenvectors (|k⟩ ± |l⟩)/√2 with eigenvalues ±1
                let plus = (f[(k, k)] + f[(l, l)] + f[(k, l)] + f[(l, k)]) * 0.5;
                let minus = (f[(k, k)] + f[(l, l)] - f[(k, l)] - f[(l, k)]) * 0.5;
                (tr - f[(k, k)] - f[(l, l)], plus, minus)
            }
            Generator::Anti(k, l) => {
                // G = −i|k⟩⟨l| + i|l⟩⟨k|, eigenvectors (|k⟩ ± i|l⟩)/√2
                let i = Complex64::i();
                let plus = (f[(k, k)] + f[(l, l)] + i * f[(k, l)] - i * f[(l, k)]) * 0.5;
                let minus = (f[(k, k)] + f[(l, l)] - i * f[(k, l)] + i * f[(l, k)]) * 0.5;
                (tr - f[(k, k)] - f[(l, l)], plus, minus)
            }
        }
    }

    /// `e^{iδG}`.
    fn exp(self, d: usize, delta: f64) -> ComplexMatrix {
        let mut m = ComplexMatrix::identity(d);
        let (c, s) = (delta.cos(), delta.sin());
        match self {
            Generator::Diag(k) => m[(k, k)] = Complex64::from_polar(1.0, delta),
            Generator::Sym(k, l) => {
                m[(k, k)] = Complex64::new(c, 0.0);
                m[(l, l)] = Complex64::new(c, 0.0);
                m[(k, l)] = Complex64::new(0.0, s);
                m[(l, k)] = Complex64::new(0.0, s);
            }
            Generator::Anti(k, l) => {
                m[(k, k)] = Complex64::new(c, 0.0);
                m[(l, l)] = Complex64::new(c, 0.0);
                m[(k, l)] = Complex64::new(s, 0.0);
                m[(l, k)] = Complex64::new(-s, 0.0);
            }
        }
        m
    }
}

/// Maximizes the 2π-periodic `δ ↦ |α + β e^{iδ} + γ e^{−iδ}|²`: grid search
/// followed by golden-section refinement around the best sample.
fn maximize_line(alpha: Complex64, beta: Complex64, gamma: Complex64) -> (f64, f64) {
    let f = |d: f64| (alpha + beta * Complex64::from_polar(1.0, d) + gamma * Complex64::from_polar(1.0, -d)).norm_sqr();
    let h = 2.0 * std::f64::consts::PI / LINE_SAMPLES as f64;
    let (mut best_d, mut best_f) = (0.0, f(0.0));
    for m in 1..LINE_SAMPLES {
        let d = if m <= LINE_SAMPLES / 2 { m as f64 * h } else { (m as f64 - LINE_SAMPLES as f64) * h };
        let v = f(d);
        if v > best_f {
            best_d = d;
            best_f = v;
        }
    }
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (best_d - h, best_d + h);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..GOLDEN_ITERATIONS {
        if f1 > f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    for (d, v) in [(x1, f1), (x2, f2)] {
        if v > best_f {
            best_d = d;
            best_f = v;
        }
    }
    (best_d, best_f)
}

/// Environment of party `j`: `E[c, r] = Σ_rest φ[c, rest] · conj(ψ′[r, rest])`
/// where `φ` is `ψ` rotated on all parties but `j`, so that the overlap is
/// `Tr(U_j E)`.
fn environment(psi: &[Complex64], psi_prime: &[Complex64], dims: &[usize], us: &[ComplexMatrix], j: usize) -> ComplexMatrix {
    let mut phi = psi.to_vec();
    for (p, u) in us.iter().enumerate() {
        if p != j {
            apply_on_party(&mut phi, dims, p, u);
        }
    }
    let d = dims[j];
    let inner: usize = dims[j + 1..].iter().product();
    let outer: usize = dims[..j].iter().product();
    let mut e = ComplexMatrix::zeros(d, d);
    for o in 0..outer {
        for c in 0..d {
            for r in 0..d {
                let mut acc = ZERO;
                for i in 0..inner {
                    acc += phi[(o * d + c) * inner + i] * psi_prime[(o * d + r) * inner + i].conj();
                }
                e[(c, r)] += acc;
            }
        }
    }
    e
}

fn reorthonormalize(u: &ComplexMatrix) -> ComplexMatrix {
    let cols: Vec<ComplexVector> = (0..u.cols()).map(|j| u.column(j)).collect();
    ComplexMatrix::from_columns(&gram_schmidt(&cols, 0.0)).expect("square")
}

/// One local ascent from `start`: coordinate-wise exact line maximization in
/// exponential coordinates `U_j ← U_j e^{iδ G_m}` over the `d_j²` Hermitian
/// generators of every party, until a sweep stops improving.
fn local_ascent(psi: &PureState, psi_prime: &PureState, start: Vec<ComplexMatrix>) -> Vec<ComplexMatrix> {
    let dims = psi.dims();
    let a = psi.amplitudes().as_slice();
    let b = psi_prime.amplitudes().as_slice();
    let gens: Vec<Vec<Generator>> = dims.iter().map(|&d| generators(d)).collect();
    let mut us = start;
    let mut value = 0.0;
    for _ in 0..SEARCH_MAX_SWEEPS {
        let before = value;
        for j in 0..dims.len() {
            let env = environment(a, b, dims, &us, j);
            let mut f = &env * &us[j];
            value = f.trace().norm_sqr();
            for &g in &gens[j] {
                let (alpha, beta, gamma) = g.trig_coefficients(&f);
                let (delta, v) = maximize_line(alpha, beta, gamma);
                if v > value && delta != 0.0 {
                    let step = g.exp(dims[j], delta);
                    us[j] = &us[j] * &step;
                    f = &env * &us[j];
                    value = f.trace().norm_sqr();
                }
            }
            us[j] = reorthonormalize(&us[j]);
        }
        if value >= 1.0 - 1e-15 || value - before <= 1e-14 {
            break;
        }
    }
    us
}

/// Best LU witness found by `budget` seeded local ascents.
///
/// Restart 0 starts from the identity; restart `r > 0` from Haar-random
/// unitaries drawn from the ChaCha20 stream `r` of `seed`. Restarts run in
/// parallel; the best fidelity wins, ties going to the lowest restart index.
pub fn search_lu(psi: &PureState, psi_prime: &PureState, budget: usize, seed: u64) -> Result<LUWitness> {
    same_dims(psi, psi_prime)?;
    let dim = psi.total_dim();
    if dim > SEARCH_MAX_DIM {
        return Err(Error::DimensionTooLarge {
            dim,
            limit: SEARCH_MAX_DIM,
        });
    }
    let dims = psi.dims().to_vec();
    let results: Vec<Result<LUWitness>> = (0..budget.max(1))
        .into_par_iter()
        .map(|r| {
            let start: Vec<ComplexMatrix> = if r == 0 {
                dims.iter().map(|&d| ComplexMatrix::identity(d)).collect()
            } else {
                let mut rng = ChaCha20Rng::seed_from_u64(seed);
                rng.set_stream(r as u64);
                dims.iter().map(|&d| haar_unitary_with(d, &mut rng)).collect()
            };
            LUWitness::evaluate(psi, psi_prime, local_ascent(psi, psi_prime, start))
        })
        .collect();
    let mut best: Option<LUWitness> = None;
    for w in results {
        let w = w?;
        if best.as_ref().is_none_or(|b| w.fidelity > b.fidelity) {
            best = Some(w);
        }
    }
    Ok(best.expect("at least one restart"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectralVerdict {
    /// Spectra differ: no unitary, local or global, relates the states.
    NotUnitarilyEquivalent,
    /// Spectra agree; the spectral test alone cannot decide.
    SpectraAgree,
}

/// Two three-qubit mixed states built from `|ψ±⟩ = (|000⟩ ± |111⟩)/√2`:
/// `ρ1 = ⅓|ψ+⟩⟨ψ+| + ⅔|ψ−⟩⟨ψ−|` and `ρ2 = ½|ψ+⟩⟨ψ+| + ½|ψ−⟩⟨ψ−|`.
///
/// All their two-party marginals coincide, yet their spectra differ, so no
/// unitary relates them. Note that both have rank two: the obstruction is the
/// spectrum, not the rank.
#[derive(Debug, Clone)]
pub struct CounterexampleReport {
    /// `‖Tr_j ρ1 − Tr_j ρ2‖_F` for `j = 1, 2, 3`.
    pub reduced_residuals: [f64; 3],
    /// Nonzero eigenvalues, descending.
    pub spectrum_1: Vec<f64>,
    pub spectrum_2: Vec<f64>,
    pub rank_1: usize,
    pub rank_2: usize,
    pub trace_1: f64,
    pub trace_2: f64,
    /// Largest difference between the full sorted spectra.
    pub max_spectral_gap: f64,
    pub verdict: SpectralVerdict,
}

/// Largest entrywise difference of the descending spectra of two
/// equally sized Hermitian matrices.
pub fn max_spectral_gap(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    let s1 = hermitian_eig(rho1.matrix())?.eigenvalues;
    let s2 = hermitian_eig(rho2.matrix())?.eigenvalues;
    if s1.len() != s2.len() {
        return Err(Error::DimensionMismatch("spectra of different length".into()));
    }
    Ok(s1.iter().zip(&s2).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
}

pub fn counterexample_report() -> CounterexampleReport {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut plus = vec![ZERO; 8];
    let mut minus = vec![ZERO; 8];
    plus[0] = Complex64::new(s, 0.0);
    plus[7] = Complex64::new(s, 0.0);
    minus[0] = Complex64::new(s, 0.0);
    minus[7] = Complex64::new(-s, 0.0);
    let plus = PureState::new(vec![2, 2, 2], plus).expect("normalized");
    let minus = PureState::new(vec![2, 2, 2], minus).expect("normalized");
    let rho1 = DensityMatrix::mixture(&[(1.0 / 3.0, &plus), (2.0 / 3.0, &minus)]).expect("valid mixture");
    let rho2 = DensityMatrix::mixture(&[(0.5, &plus), (0.5, &minus)]).expect("valid mixture");

    let mut reduced_residuals = [0.0; 3];
    for (j, r) in reduced_residuals.iter_mut().enumerate() {
        let a = rho1.partial_trace(&[j]).expect("valid party");
        let b = rho2.partial_trace(&[j]).expect("valid party");
        *r = frobenius_distance(a.matrix(), b.matrix()).expect("same shape");
    }
    let nonzero = |rho: &DensityMatrix| -> Vec<f64> {
        hermitian_eig(rho.matrix())
            .expect("Hermitian")
            .eigenvalues
            .into_iter()
            .filter(|&l| l > RANK_THRESHOLD)
            .collect()
    };
    let spectrum_1 = nonzero(&rho1);
    let spectrum_2 = nonzero(&rho2);
    let gap = max_spectral_gap(&rho1, &rho2).expect("same shape");
    CounterexampleReport {
        reduced_residuals,
        rank_1: spectrum_1.len(),
        rank_2: spectrum_2.len(),
        spectrum_1,
        spectrum_2,
        trace_1: rho1.trace(),
        trace_2: rho2.trace(),
        max_spectral_gap: gap,
        verdict: if gap > SPECTRAL_GAP_TOL {
            SpectralVerdict::NotUnitarilyEquivalent
        } else {
            SpectralVerdict::SpectraAgree
        },
    }
}
