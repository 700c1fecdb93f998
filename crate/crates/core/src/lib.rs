//! Desk-scale laboratory for signal carriers and the frames they induce.
//!
//! * [`substrate`]: multi-hop harmonic chains and reversible automata.
//! * [`propagation`]: dispersion, phased-array schedules, front speeds.
//! * [`frames`]: radar coordinates at a conventional signal speed.
//! * [`causal`]: cone order and its preservation under maps.
//! * [`quantum`]: NOT-gate clocks, SI anchors, permutation metrics, singlet statistics.

pub mod causal;
pub mod csv;
mod error;
pub mod frames;
pub mod propagation;
pub mod quantum;
pub mod substrate;

pub use error::{Error, Result};
