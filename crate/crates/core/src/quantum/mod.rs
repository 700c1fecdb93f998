//! Quantum clock and length units, permutation metrics, and singlet-pair
//! statistics.

pub mod bell;
pub mod borel;
pub mod clock;
pub mod perm;

pub use bell::{
    chsh, chsh_expected, correlation, no_signaling_check, singlet_correlation, singlet_probabilities,
    singlet_sample, write_correlations_csv, ChshResult, ChshSettings, Correlation, LocalStrategy,
    NoSignaling, PairCounts, SingletSource,
};
pub use borel::{borel_block_test, prng_bits, BlockFrequency, BorelReport};
pub use clock::{
    apply_not, metre_in_ticks, seconds_to_ticks, ticks_to_seconds, MetreInTicks, Qubit, TickClock,
    LIGHT_METRES_PER_SECOND, TICKS_PER_SECOND,
};
pub use perm::{permutation_distance, Permutation, PermutationMetric};
