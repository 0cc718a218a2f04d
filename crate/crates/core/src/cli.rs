//! The `luequiv` command-line front end.
//!
//! Exit codes: 0 success or equivalent, 1 distinct, 2 inconclusive,
//! 3 input error, 4 numerical failure. Human-readable reports go to standard
//! output; `--out` receives the machine-readable document. Party indices on
//! the command line are one-based.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::equivalence::{
    counterexample_report, lift_witness, match_purification, search_lu, LUWitness,
};
use crate::error::Error;
use crate::invariants::{compare_fingerprints, fingerprint_with_gap_tol, Verdict, COMPARE_TOL, GAP_TOL};
use crate::io::{self, MatrixKind, StateDocument};
use crate::linalg::{haar_unitary, ComplexMatrix};
use crate::states::{Bipartition, PureState};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DISTINCT: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

/// `search-lu` reports success at or above this fidelity.
pub const SEARCH_SUCCESS_FIDELITY: f64 = 1.0 - 1e-6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutcome {
    pub exit_code: i32,
    pub report: String,
}

#[derive(Debug, Parser)]
#[command(name = "luequiv", version, about = "Local-unitary equivalence of multipartite pure states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Haar-random pure state
    RandomState {
        /// Party dimensions, comma separated (e.g. 2,2,2)
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Haar-random unitary
    RandomUnitary {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply one unitary per party
    ApplyLu {
        #[arg(long)]
        state: PathBuf,
        #[arg(long, num_args = 1.., required = true)]
        unitaries: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Partial trace over the listed parties
    Reduce {
        #[arg(long)]
        state: PathBuf,
        /// Parties to trace out, one-based, comma separated
        #[arg(long, value_delimiter = ',', required = true)]
        trace: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Schmidt coefficients across a split
    Schmidt {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        split: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Invariant fingerprint of a three-party state
    Fingerprint {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        split: String,
        /// Spectral gap below which the fingerprint is flagged non-canonical
        #[arg(long, default_value_t = GAP_TOL)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare two fingerprints
    Compare {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long, default_value_t = COMPARE_TOL)]
        tol: f64,
    },
    /// Unitary on one party mapping psi to psi-prime
    MatchPurification {
        #[arg(long)]
        psi: PathBuf,
        #[arg(long = "psi-prime")]
        psi_prime: PathBuf,
        #[arg(long)]
        party: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extend a reduced-state witness to a full LU witness
    LiftWitness {
        #[arg(long)]
        psi: PathBuf,
        #[arg(long = "psi-prime")]
        psi_prime: PathBuf,
        #[arg(long)]
        party: usize,
        /// One unitary per party other than --party, in party order
        #[arg(long, num_args = 1.., required = true)]
        witness: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Brute-force LU fidelity maximization
    SearchLu {
        #[arg(long)]
        psi: PathBuf,
        #[arg(long = "psi-prime")]
        psi_prime: PathBuf,
        #[arg(long)]
        budget: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Mixed states with equal marginals but different spectra
    Counterexample {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

type CmdResult = std::result::Result<CommandOutcome, Error>;

fn outcome(exit_code: i32, report: String) -> CmdResult {
    Ok(CommandOutcome { exit_code, report })
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        e if e.is_numerical() => EXIT_NUMERICAL,
        Error::ReducedMismatch { .. } => EXIT_DISTINCT,
        _ => EXIT_INPUT,
    }
}

/// Parses `argv` (program name first) and runs the command.
pub fn dispatch<I, T>(argv: I) -> CommandOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INPUT,
            };
            return CommandOutcome {
                exit_code: code,
                report: e.to_string(),
            };
        }
    };
    match run(cli.command) {
        Ok(o) => o,
        Err(e) => CommandOutcome {
            exit_code: exit_code_for(&e),
            report: format!("error: {e}\n"),
        },
    }
}

fn read_pure(path: &Path) -> Result<PureState, Error> {
    io::state_from_str(&io::read_text(path)?)?.into_pure()
}

fn read_unitary(path: &Path) -> Result<ComplexMatrix, Error> {
    Ok(io::matrix_from_str(&io::read_text(path)?)?.0)
}

fn write_out(out: &Option<PathBuf>, text: &str, report: &mut String) -> Result<(), Error> {
    if let Some(path) = out {
        io::write_text(path, text)?;
        let _ = writeln!(report, "wrote {}", path.display());
    }
    Ok(())
}

fn zero_based(party: usize, n: usize) -> Result<usize, Error> {
    if party == 0 || party > n {
        return Err(Error::InvalidPartySet(format!("party {party} out of range 1..={n}")));
    }
    Ok(party - 1)
}

fn fmt_list(values: &[f64]) -> String {
    let parts: Vec<String> = values.iter().map(|v| format!("{v:.15}")).collect();
    format!("[{}]", parts.join(", "))
}

fn witness_report(w: &LUWitness, report: &mut String) {
    let _ = writeln!(report, "fidelity: {:.15}", w.fidelity);
    let _ = writeln!(report, "phase: {:.15}{:+.15}i", w.phase.re, w.phase.im);
}

fn run(command: Command) -> CmdResult {
    let mut report = String::new();
    match command {
        Command::RandomState { dims, seed, out } => {
            let psi = PureState::random(dims, seed)?;
            let _ = writeln!(report, "random state dims {:?} seed {seed}", psi.dims());
            write_out(&out, &io::pure_state_to_string(&psi)?, &mut report)?;
            outcome(EXIT_OK, report)
        }
        Command::RandomUnitary { dim, seed, out } => {
            if dim == 0 {
                return Err(Error::DimensionMismatch("dimension must be positive".into()));
            }
            let u = haar_unitary(dim, seed);
            let _ = writeln!(report, "random unitary dim {dim} seed {seed}");
            let _ = writeln!(report, "unitarity defect: {:.3e}", u.unitarity_defect());
            write_out(&out, &io::matrix_to_string(&u, MatrixKind::Unitary)?, &mut report)?;
            outcome(EXIT_OK, report)
        }
        Command::ApplyLu { state, unitaries, out } => {
            let psi = read_pure(&state)?;
            let us = unitaries.iter().map(|p| read_unitary(p)).collect::<Result<Vec<_>, _>>()?;
            let phi = psi.apply_local_unitaries(&us)?;
            let _ = writeln!(report, "applied {} local unitaries", us.len());
            let _ = writeln!(report, "overlap with input: {:.15}", psi.inner(&phi)?.norm());
            write_out(&out, &io::pure_state_to_string(&phi)?, &mut report)?;
            outcome(EXIT_OK, report)
        }
        Command::Reduce { state, trace, out } => {
            let doc = io::state_from_str(&io::read_text(&state)?)?;
            let n = doc.dims().len();
            let traced = trace.iter().map(|&p| zero_based(p, n)).collect::<Result<Vec<_>, _>>()?;
            let rho = match &doc {
                StateDocument::Pure(p) => p.partial_trace(&traced)?,
                StateDocument::Density(d) => d.partial_trace(&traced)?,
            };
            let _ = writeln!(report, "reduced state dims {:?}", rho.dims());
            let _ = writeln!(report, "trace: {:.15}", rho.trace());
            write_out(&out, &io::density_to_string(&rho)?, &mut report)?;
            outcome(EXIT_OK, report)
        }
        Command::Schmidt { state, split, out } => {
            let psi = read_pure(&state)?;
            let split = Bipartition::parse(&split, psi.num_parties())?;
            let coeffs = psi.schmidt_coefficients(&split)?;
            let _ = writeln!(report, "split {split}");
            let _ = writeln!(report, "schmidt coefficients: {}", fmt_list(&coeffs));
            write_out(&out, &io::schmidt_to_string(&split.label(), &coeffs)?, &mut report)?;
            outcome(EXIT_OK, report)
        }
        Command::Fingerprint { state, split, tol, out } => {
            let psi = read_pure(&state)?;
            let split = Bipartition::parse(&split, psi.num_parties())?;
            let f = fingerprint_with_gap_tol(&psi, &split, tol)?;
            let _ = writeln!(report, "split {}", f.split);
            let _ = writeln!(report, "spectrum: {}", fmt_list(&f.spectrum));
            let _ = writeln!(report, "J: {}", fmt_list(&f.j));
            let _ = writeln!(report, "Omega: {}", fmt_list(&f.metrics.omega));
            let _ = writeln!(report, "Theta: {}", fmt_list(&f.metrics.theta));
            let _ = writeln!(report, "generic: {}", f.generic);
            let _ = writeln!(report, "canonical: {}", f.canonical);
            let _ = writeln!(report, "gap: {:.3e}", f.gap);
            write_out(&out, &io::fingerprint_to_string(&f)?, &mut report)?;
            outcome(EXIT_OK, report)
        }
        Command::Compare { a, b, tol } => {
            let fa = io::fingerprint_from_str(&io::read_text(&a)?)?;
            let fb = io::fingerprint_from_str(&io::read_text(&b)?)?;
            let verdict = compare_fingerprints(&fa, &fb, tol)?;
            let _ = writeln!(report, "split {}", fa.split);
            let _ = writeln!(report, "verdict: {}", verdict.as_str());
            let code = match verdict {
                Verdict::ConsistentGeneric => EXIT_OK,
                Verdict::Distinct => EXIT_DISTINCT,
                Verdict::Inconclusive => EXIT_INCONCLUSIVE,
            };
            outcome(code, report)
        }
        Command::MatchPurification { psi, psi_prime, party, out } => {
            let psi = read_pure(&psi)?;
            let psi_prime = read_pure(&psi_prime)?;
            let j = zero_based(party, psi.num_parties())?;
            let w = match_purification(&psi, &psi_prime, j)?;
            let fidelity = psi_prime.inner(&psi.apply_on_party(j, &w)?)?.norm();
            let _ = writeln!(report, "party {party}");
            let _ = writeln!(report, "fidelity: {fidelity:.15}");
            write_out(&out, &io::matrix_to_string(&w, MatrixKind::Unitary)?, &mut report)?;
            outcome(EXIT_OK, report)
        }
        Command::LiftWitness { psi, psi_prime, party, witness, out } => {
            let psi = read_pure(&psi)?;
            let psi_prime = read_pure(&psi_prime)?;
            let j = zero_based(party, psi.num_parties())?;
            let us = witness.iter().map(|p| read_unitary(p)).collect::<Result<Vec<_>, _>>()?;
            let w = lift_witness(&psi, &psi_prime, j, &us)?;
            witness_report(&w, &mut report);
            write_out(&out, &io::witness_to_string(&w)?, &mut report)?;
            outcome(EXIT_OK, report)
        }
        Command::SearchLu { psi, psi_prime, budget, seed, out } => {
            let psi = read_pure(&psi)?;
            let psi_prime = read_pure(&psi_prime)?;
            let w = search_lu(&psi, &psi_prime, budget, seed)?;
            witness_report(&w, &mut report);
            let found = w.fidelity >= SEARCH_SUCCESS_FIDELITY;
            let _ = writeln!(report, "equivalent: {}", if found { "found" } else { "not found" });
            write_out(&out, &io::witness_to_string(&w)?, &mut report)?;
            outcome(if found { EXIT_OK } else { EXIT_INCONCLUSIVE }, report)
        }
        Command::Counterexample { out } => {
            let r = counterexample_report();
            let _ = writeln!(report, "reduced residuals: {}", fmt_list(&r.reduced_residuals));
            let _ = writeln!(report, "spectrum rho1: {}", fmt_list(&r.spectrum_1));
            let _ = writeln!(report, "spectrum rho2: {}", fmt_list(&r.spectrum_2));
            let _ = writeln!(report, "ranks: {} and {}", r.rank_1, r.rank_2);
            let _ = writeln!(report, "max spectral gap: {:.15}", r.max_spectral_gap);
            let _ = writeln!(report, "verdict: {:?}", r.verdict);
            write_out(&out, &io::counterexample_to_string(&r)?, &mut report)?;
            outcome(EXIT_OK, report)
        }
    }
}
