//! Signal-carrier substrates: the multi-hop harmonic chain and the
//! second-order reversible cellular automaton.

mod ca;
mod chain;
mod profile;

pub use ca::{CaHistory, CaRule, CaState, MAX_RADIUS};
pub use chain::{ChainFrame, ChainHistory, ChainState};
pub use profile::{CouplingProfile, Hop};
