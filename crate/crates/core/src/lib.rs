//! Classical simulation of Simon-based quantum attacks on symmetric-key
//! constructions: a distinguisher for 3-round Feistel networks and a
//! chosen-prefix forgery on fixed-length CBC-MAC.
//!
//! Module map:
//!
//! * [`gf2`]: bit strings, GF(2) matrices, rank/solve and the integer
//!   Walsh-Hadamard transform.
//! * [`primitives`]: truth tables, Feistel networks, CBC-MAC.
//! * [`oracles`]: query-counted oracle handles and derived Simon functions.
//! * [`simon`]: two exact simulators of Simon's subroutine and the solver.
//! * [`attacks`]: the distinguishers, the forgery and the classical baseline.
//! * [`harness`]: seeded campaigns with JSON/CSV reports.

pub mod attacks;
pub mod error;
pub mod gf2;
pub mod harness;
pub mod oracles;
pub mod primitives;
pub mod rng;
pub mod simon;

pub use attacks::{
    cbc2_prp_distinguisher, cbc_forge, cbc_forge_with_prefix, classical_simon_baseline,
    feistel_distinguisher, verify_forgery, Forgery, ForgeryCheck, Guess, Verdict, VerdictReason,
};
pub use error::{Error, Result};
pub use gf2::{BitString, Gf2Basis, Gf2Matrix};
pub use oracles::{OracleHandle, OracleKind, QueryLedger};
pub use primitives::{CbcSpec, FeistelSpec, TruthTable};
pub use simon::{Method, SimonDistribution, SimonOutcome, SimonRunStats};
