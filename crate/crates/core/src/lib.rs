//! Automata and exact counting for the set of n such that n! is not a sum of
//! three squares.
//!
//! * [`automata`]: multi-track LSD-first DFAs/NFAs with Boolean operations,
//!   projection, subset construction and canonical minimization.
//! * [`seed`]: the parity automata for ν₂(n!), α₃, α₅ and the Θ classes.
//! * [`query`]: a small first-order query language compiled to automata.
//! * [`linrep`]: counting linear representations and the closed forms for
//!   S̄(2^k) and S̄(3·2^k).
//! * [`algebra`]: exact rational linear algebra and integer polynomials.
//! * [`oracle`]: brute-force oracles and range scans.
//! * [`verify`]: the end-to-end check suite behind `factoromata verify`.

pub mod algebra;
pub mod automata;
mod error;
pub mod golden;
pub mod linrep;
pub mod oracle;
pub mod query;
pub mod seed;
pub mod verify;

pub use error::{Error, Result};
