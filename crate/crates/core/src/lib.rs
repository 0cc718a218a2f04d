//! Local-unitary (LU) equivalence of multipartite pure states.
//!
//! Two `n`-party pure states are LU-equivalent exactly when one of their
//! `(n−1)`-party reduced states is LU-equivalent to the corresponding reduced
//! state of the other. This crate makes that reduction executable:
//!
//! * [`linalg`]: dense complex matrices, a Jacobi Hermitian eigensolver,
//!   unitary completion and Haar sampling.
//! * [`states`]: pure and mixed multipartite states, partial traces,
//!   bipartition matrices, local unitary action, Schmidt coefficients.
//! * [`invariants`]: the eigen-ensemble fingerprint of a tripartite state
//!   (spectrum, moments, Ω/Θ metric matrices, X/Y cubic tables, genericity).
//! * [`equivalence`]: purification matching, witness lifting, fidelity
//!   evaluation, a brute-force LU search and the mixed-state counterexample.
//! * [`io`]: the JSON text formats for matrices, states, fingerprints and
//!   witnesses.
//! * [`cli`]: the `luequiv` command-line front end.

pub mod cli;
pub mod equivalence;
pub mod error;
pub mod invariants;
pub mod io;
pub mod linalg;
pub mod states;

pub use error::{Error, Result};
pub use num_complex::Complex64;
