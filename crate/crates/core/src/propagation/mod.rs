//! Lattice dispersion, phased-array schedules and measured front speeds.

pub mod dispersion;
mod front;
mod schedule;

pub use dispersion::{group_velocity, max_signal_speed, omega, sound_speed, DispersionCurve};
pub use front::{default_threshold, estimate_front_speed, FrontFit, DEFAULT_THRESHOLD_FRACTION, MIN_CROSSED};
pub use schedule::{drive, table1_schedule, ExcitationSchedule};
