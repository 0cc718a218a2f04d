//! JSON text documents for matrices, states, fingerprints and witnesses.
//!
//! Complex numbers are `[re, im]` pairs; every float is written in scientific
//! notation with 17 significant digits, which round-trips `f64` exactly.
//! Writers are deterministic, so identical values give identical bytes.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::value::RawValue;

use crate::equivalence::{CounterexampleReport, LUWitness};
use crate::error::{Error, Result};
use crate::invariants::{CubicTensors, InvariantFingerprint, MetricMatrices};
use crate::linalg::{ComplexMatrix, UNITARY_TOL};
use crate::states::{DensityMatrix, PureState};

/// `f64` written with 17 significant digits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sci(pub f64);

impl Serialize for Sci {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return Err(serde::ser::Error::custom(format!("non-finite value {}", self.0)));
        }
        let raw = RawValue::from_string(format!("{:.16e}", self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Sci {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        f64::deserialize(d).map(Sci)
    }
}

type Pair = [Sci; 2];

fn pairs(values: &[Complex64]) -> Vec<Pair> {
    values.iter().map(|z| [Sci(z.re), Sci(z.im)]).collect()
}

fn complexes(values: &[Pair]) -> Vec<Complex64> {
    values.iter().map(|[re, im]| Complex64::new(re.0, im.0)).collect()
}

fn reals(values: &[f64]) -> Vec<Sci> {
    values.iter().copied().map(Sci).collect()
}

fn unwrap_reals(values: &[Sci]) -> Vec<f64> {
    values.iter().map(|s| s.0).collect()
}

fn to_text<T: Serialize>(doc: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(doc).map_err(|e| Error::Format(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn from_text<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixKind {
    Matrix,
    Unitary,
}

#[derive(Serialize, Deserialize)]
struct MatrixDoc {
    kind: MatrixKind,
    rows: usize,
    cols: usize,
    entries: Vec<Pair>,
}

impl MatrixDoc {
    fn new(m: &ComplexMatrix, kind: MatrixKind) -> Self {
        Self {
            kind,
            rows: m.rows(),
            cols: m.cols(),
            entries: pairs(m.as_slice()),
        }
    }

    fn into_matrix(self) -> Result<(ComplexMatrix, MatrixKind)> {
        let m = ComplexMatrix::from_row_major(self.rows, self.cols, complexes(&self.entries))?;
        if self.kind == MatrixKind::Unitary {
            let deviation = m.unitarity_defect();
            if deviation > UNITARY_TOL {
                return Err(Error::Format(format!(
                    "document declares a unitary but ‖U†U − I‖_F = {deviation:.3e}"
                )));
            }
        }
        Ok((m, self.kind))
    }
}

pub fn matrix_to_string(m: &ComplexMatrix, kind: MatrixKind) -> Result<String> {
    to_text(&MatrixDoc::new(m, kind))
}

/// Parses a matrix document; `"unitary"` documents are checked for
/// unitarity.
pub fn matrix_from_str(text: &str) -> Result<(ComplexMatrix, MatrixKind)> {
    from_text::<MatrixDoc>(text)?.into_matrix()
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum StateKind {
    Pure,
    Density,
}

#[derive(Serialize, Deserialize)]
struct StateDoc {
    kind: StateKind,
    dims: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    amplitudes: Option<Vec<Pair>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matrix: Option<Vec<Pair>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StateDocument {
    Pure(PureState),
    Density(DensityMatrix),
}

impl StateDocument {
    pub fn dims(&self) -> &[usize] {
        match self {
            StateDocument::Pure(p) => p.dims(),
            StateDocument::Density(d) => d.dims(),
        }
    }

    pub fn into_pure(self) -> Result<PureState> {
        match self {
            StateDocument::Pure(p) => Ok(p),
            StateDocument::Density(_) => Err(Error::Format("expected a pure state document".into())),
        }
    }
}

pub fn pure_state_to_string(psi: &PureState) -> Result<String> {
    to_text(&StateDoc {
        kind: StateKind::Pure,
        dims: psi.dims().to_vec(),
        amplitudes: Some(pairs(psi.amplitudes().as_slice())),
        matrix: None,
    })
}

pub fn density_to_string(rho: &DensityMatrix) -> Result<String> {
    to_text(&StateDoc {
        kind: StateKind::Density,
        dims: rho.dims().to_vec(),
        amplitudes: None,
        matrix: Some(pairs(rho.matrix().as_slice())),
    })
}

pub fn state_from_str(text: &str) -> Result<StateDocument> {
    let doc: StateDoc = from_text(text)?;
    match doc.kind {
        StateKind::Pure => {
            let amps = doc
                .amplitudes
                .ok_or_else(|| Error::Format("pure state without amplitudes".into()))?;
            Ok(StateDocument::Pure(PureState::new(doc.dims, complexes(&amps))?))
        }
        StateKind::Density => {
            let entries = doc
                .matrix
                .ok_or_else(|| Error::Format("density state without matrix".into()))?;
            let n: usize = doc.dims.iter().product();
            let m = ComplexMatrix::from_row_major(n, n, complexes(&entries))?;
            Ok(StateDocument::Density(DensityMatrix::new(doc.dims, m)?))
        }
    }
}

#[derive(Serialize, Deserialize)]
struct FingerprintDoc {
    split: String,
    dims: Vec<usize>,
    rank: usize,
    padded_size: usize,
    spectrum: Vec<Sci>,
    #[serde(rename = "J")]
    j: Vec<Sci>,
    omega: Vec<Sci>,
    theta: Vec<Sci>,
    #[serde(rename = "X")]
    x: Vec<Pair>,
    #[serde(rename = "Y")]
    y: Vec<Pair>,
    generic: bool,
    canonical: bool,
    gap: Sci,
}

pub fn fingerprint_to_string(f: &InvariantFingerprint) -> Result<String> {
    to_text(&FingerprintDoc {
        split: f.split.clone(),
        dims: f.dims.clone(),
        rank: f.rank(),
        padded_size: f.metrics.padded_size,
        spectrum: reals(&f.spectrum),
        j: reals(&f.j),
        omega: reals(&f.metrics.omega),
        theta: reals(&f.metrics.theta),
        x: pairs(&f.cubic.x),
        y: pairs(&f.cubic.y),
        generic: f.generic,
        canonical: f.canonical,
        gap: Sci(f.gap),
    })
}

pub fn fingerprint_from_str(text: &str) -> Result<InvariantFingerprint> {
    let doc: FingerprintDoc = from_text(text)?;
    let n = doc.rank;
    if doc.spectrum.len() != n
        || doc.omega.len() != n * n
        || doc.theta.len() != n * n
        || doc.x.len() != n * n * n
        || doc.y.len() != n * n * n
    {
        return Err(Error::Format(format!("fingerprint fields inconsistent with rank {n}")));
    }
    Ok(InvariantFingerprint {
        split: doc.split,
        dims: doc.dims,
        spectrum: unwrap_reals(&doc.spectrum),
        j: unwrap_reals(&doc.j),
        metrics: MetricMatrices {
            n,
            padded_size: doc.padded_size,
            omega: unwrap_reals(&doc.omega),
            theta: unwrap_reals(&doc.theta),
        },
        cubic: CubicTensors {
            n,
            x: complexes(&doc.x),
            y: complexes(&doc.y),
        },
        generic: doc.generic,
        canonical: doc.canonical,
        gap: doc.gap.0,
    })
}

#[derive(Serialize, Deserialize)]
struct WitnessDoc {
    unitaries: Vec<MatrixDoc>,
    fidelity: Sci,
    phase: Pair,
}

pub fn witness_to_string(w: &LUWitness) -> Result<String> {
    to_text(&WitnessDoc {
        unitaries: w.unitaries.iter().map(|u| MatrixDoc::new(u, MatrixKind::Unitary)).collect(),
        fidelity: Sci(w.fidelity),
        phase: [Sci(w.phase.re), Sci(w.phase.im)],
    })
}

pub fn witness_from_str(text: &str) -> Result<LUWitness> {
    let doc: WitnessDoc = from_text(text)?;
    let unitaries = doc
        .unitaries
        .into_iter()
        .map(|m| m.into_matrix().map(|(u, _)| u))
        .collect::<Result<Vec<_>>>()?;
    Ok(LUWitness {
        unitaries,
        fidelity: doc.fidelity.0,
        phase: Complex64::new(doc.phase[0].0, doc.phase[1].0),
    })
}

#[derive(Serialize)]
struct CounterexampleDoc {
    reduced_residuals: Vec<Sci>,
    spectrum_1: Vec<Sci>,
    spectrum_2: Vec<Sci>,
    rank_1: usize,
    rank_2: usize,
    trace_1: Sci,
    trace_2: Sci,
    max_spectral_gap: Sci,
    verdict: &'static str,
}

pub fn counterexample_to_string(r: &CounterexampleReport) -> Result<String> {
    to_text(&CounterexampleDoc {
        reduced_residuals: reals(&r.reduced_residuals),
        spectrum_1: reals(&r.spectrum_1),
        spectrum_2: reals(&r.spectrum_2),
        rank_1: r.rank_1,
        rank_2: r.rank_2,
        trace_1: Sci(r.trace_1),
        trace_2: Sci(r.trace_2),
        max_spectral_gap: Sci(r.max_spectral_gap),
        verdict: match r.verdict {
            crate::equivalence::SpectralVerdict::NotUnitarilyEquivalent => "NotUnitarilyEquivalent",
            crate::equivalence::SpectralVerdict::SpectraAgree => "SpectraAgree",
        },
    })
}

#[derive(Serialize)]
struct SchmidtDoc<'a> {
    split: &'a str,
    coefficients: Vec<Sci>,
}

pub fn schmidt_to_string(split: &str, coefficients: &[f64]) -> Result<String> {
    to_text(&SchmidtDoc {
        split,
        coefficients: reals(coefficients),
    })
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}
