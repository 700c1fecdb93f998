use num_complex::Complex64;
use num_rational::Ratio;

use crate::error::{Error, Result};

/// Caesium hyperfine transitions per SI second.
pub const TICKS_PER_SECOND: i64 = 9_192_631_770;
/// Metres light travels per SI second.
pub const LIGHT_METRES_PER_SECOND: i64 = 299_792_458;

/// Normalised two-level state `alpha |psi_1> + beta |psi_0>`, with
/// `|psi_1> = (1, 0)` and `|psi_0> = (0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Qubit {
    pub alpha: Complex64,
    pub beta: Complex64,
}

impl Qubit {
    pub fn new(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::Config(format!(
                "qubit is not normalised (|a|^2+|b|^2 = {norm})"
            )));
        }
        Ok(Self { alpha, beta })
    }

    pub fn real(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(Complex64::new(alpha, 0.0), Complex64::new(beta, 0.0))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.alpha.norm_sqr() + self.beta.norm_sqr()
    }
}

/// The NOT gate `[[0, 1], [1, 0]]`.
pub fn apply_not(q: Qubit) -> Qubit {
    Qubit {
        alpha: q.beta,
        beta: q.alpha,
    }
}

/// Counts NOT-gate transitions of a qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TickClock {
    state: Qubit,
    ticks: u64,
}

impl TickClock {
    pub fn new(state: Qubit) -> Self {
        Self { state, ticks: 0 }
    }

    pub fn tick(&mut self) {
        self.state = apply_not(self.state);
        self.ticks += 1;
    }

    pub fn ticks(&self) -> u64 {
        self.ticks
    }

    pub fn state(&self) -> Qubit {
        self.state
    }

    pub fn elapsed(&self) -> Ratio<i64> {
        Ratio::new(self.ticks as i64, TICKS_PER_SECOND)
    }
}

/// Exact duration of `ticks` transitions, in seconds.
pub fn ticks_to_seconds(ticks: i64) -> Result<Ratio<i64>> {
    if ticks < 0 {
        return Err(Error::Negative(format!("{ticks} ticks")));
    }
    Ok(Ratio::new(ticks, TICKS_PER_SECOND))
}

/// Number of transitions in `seconds`, rounded to the nearest integer.
pub fn seconds_to_ticks(seconds: Ratio<i64>) -> Result<i64> {
    if seconds < Ratio::from_integer(0) {
        return Err(Error::Negative(format!("{seconds} s")));
    }
    let exact = Ratio::<i128>::new(*seconds.numer() as i128, *seconds.denom() as i128)
        * Ratio::from_integer(TICKS_PER_SECOND as i128);
    i64::try_from(exact.round().to_integer()).map_err(|_| Error::Config("tick count overflows".into()))
}

/// Transitions during the time light needs for one metre.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetreInTicks {
    pub exact: Ratio<i64>,
    pub approx: f64,
    pub rounded: i64,
}

pub fn metre_in_ticks() -> MetreInTicks {
    let exact = Ratio::new(TICKS_PER_SECOND, LIGHT_METRES_PER_SECOND);
    MetreInTicks {
        exact,
        approx: *exact.numer() as f64 / *exact.denom() as f64,
        rounded: exact.round().to_integer(),
    }
}
