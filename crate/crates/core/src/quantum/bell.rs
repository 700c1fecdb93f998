use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::csv::fmt_f64;
use crate::error::{Error, Result};

/// Joint outcome probabilities for the singlet measured along `theta_a`
/// and `theta_b`, in the order `(++, --, +-, -+)`.
pub fn singlet_probabilities(theta_a: f64, theta_b: f64) -> [f64; 4] {
    let c = (theta_a - theta_b).cos();
    let same = (1.0 - c) / 4.0;
    let diff = (1.0 + c) / 4.0;
    [same, same, diff, diff]
}

/// Expected correlation `-cos(theta_a - theta_b)`.
pub fn singlet_correlation(theta_a: f64, theta_b: f64) -> f64 {
    -(theta_a - theta_b).cos()
}

/// Iterator over joint outcomes `(a_plus, b_plus)` drawn from the four-cell
/// distribution with a ChaCha8 stream.
pub struct SingletSource {
    rng: ChaCha8Rng,
    cumulative: [f64; 3],
}

impl SingletSource {
    pub fn new(theta_a: f64, theta_b: f64, seed: u64) -> Self {
        let p = singlet_probabilities(theta_a, theta_b);
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            cumulative: [p[0], p[0] + p[1], p[0] + p[1] + p[2]],
        }
    }
}

impl Iterator for SingletSource {
    type Item = (bool, bool);

    fn next(&mut self) -> Option<(bool, bool)> {
        let u: f64 = self.rng.random();
        let c = &self.cumulative;
        Some(if u < c[0] {
            (true, true)
        } else if u < c[1] {
            (false, false)
        } else if u < c[2] {
            (true, false)
        } else {
            (false, true)
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairCounts {
    pub theta_a: f64,
    pub theta_b: f64,
    pub seed: u64,
    pub pp: u64,
    pub pm: u64,
    pub mp: u64,
    pub mm: u64,
}

impl PairCounts {
    pub fn total(&self) -> u64 {
        self.pp + self.pm + self.mp + self.mm
    }

    /// Fraction of `+` outcomes on side A.
    pub fn marginal_a(&self) -> f64 {
        (self.pp + self.pm) as f64 / self.total() as f64
    }

    pub fn marginal_b(&self) -> f64 {
        (self.pp + self.mp) as f64 / self.total() as f64
    }
}

pub fn singlet_sample(theta_a: f64, theta_b: f64, n: u64, seed: u64) -> Result<PairCounts> {
    if n == 0 {
        return Err(Error::Config("sample size must be at least 1".into()));
    }
    let mut c = PairCounts {
        theta_a,
        theta_b,
        seed,
        pp: 0,
        pm: 0,
        mp: 0,
        mm: 0,
    };
    for (a, b) in SingletSource::new(theta_a, theta_b, seed).take(n as usize) {
        match (a, b) {
            (true, true) => c.pp += 1,
            (true, false) => c.pm += 1,
            (false, true) => c.mp += 1,
            (false, false) => c.mm += 1,
        }
    }
    Ok(c)
}

/// Correlation estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Correlation {
    pub value: f64,
    pub stderr: f64,
}

pub fn correlation(c: &PairCounts) -> Result<Correlation> {
    let total = c.total();
    if total == 0 {
        return Err(Error::Config("correlation of empty counts".into()));
    }
    let n = total as f64;
    let value = ((c.pp + c.mm) as f64 - (c.pm + c.mp) as f64) / n;
    Ok(Correlation {
        value,
        stderr: ((1.0 - value * value).max(0.0) / n).sqrt(),
    })
}

/// `theta_a,theta_b,n,E,stderr`
pub fn write_correlations_csv<W: Write>(mut out: W, rows: &[(PairCounts, Correlation)]) -> io::Result<()> {
    writeln!(out, "theta_a,theta_b,n,E,stderr")?;
    for (c, e) in rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            fmt_f64(c.theta_a),
            fmt_f64(c.theta_b),
            c.total(),
            fmt_f64(e.value),
            fmt_f64(e.stderr)
        )?;
    }
    Ok(())
}

/// Measurement directions `(a, a', b, b')` in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshSettings {
    pub a: f64,
    pub a_prime: f64,
    pub b: f64,
    pub b_prime: f64,
}

impl ChshSettings {
    /// Directions that maximise the singlet's CHSH value.
    pub const OPTIMAL: Self = Self {
        a: 0.0,
        a_prime: std::f64::consts::FRAC_PI_2,
        b: std::f64::consts::FRAC_PI_4,
        b_prime: 3.0 * std::f64::consts::FRAC_PI_4,
    };

    fn pairs(&self) -> [(f64, f64); 4] {
        [
            (self.a, self.b),
            (self.a, self.b_prime),
            (self.a_prime, self.b),
            (self.a_prime, self.b_prime),
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChshResult {
    pub s: f64,
    /// Standard error of `s` from the four independent estimates.
    pub stderr: f64,
    pub correlations: [Correlation; 4],
}

/// `|E(a,b) - E(a,b') + E(a',b) + E(a',b')|` from four sampled runs; run
/// `i` uses seed `seed ^ i`.
pub fn chsh(settings: &ChshSettings, n: u64, seed: u64) -> Result<ChshResult> {
    let mut correlations = [Correlation {
        value: 0.0,
        stderr: 0.0,
    }; 4];
    for (i, (ta, tb)) in settings.pairs().into_iter().enumerate() {
        correlations[i] = correlation(&singlet_sample(ta, tb, n, seed ^ i as u64)?)?;
    }
    let e = correlations.map(|c| c.value);
    let s = (e[0] - e[1] + e[2] + e[3]).abs();
    let stderr = correlations
        .iter()
        .map(|c| c.stderr * c.stderr)
        .sum::<f64>()
        .sqrt();
    Ok(ChshResult {
        s,
        stderr,
        correlations,
    })
}

/// CHSH value of the singlet's exact correlations.
pub fn chsh_expected(settings: &ChshSettings) -> f64 {
    let e = settings.pairs().map(|(a, b)| singlet_correlation(a, b));
    (e[0] - e[1] + e[2] + e[3]).abs()
}

/// A local deterministic strategy: each side's outcome is a fixed function
/// of its own setting. Bits 0..4 give the outcomes `A(a), A(a'), B(b),
/// B(b')`, set bit meaning `+1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalStrategy(pub u8);

impl LocalStrategy {
    pub fn all() -> impl Iterator<Item = Self> {
        (0..16).map(Self)
    }

    fn outcome(&self, bit: u8) -> f64 {
        if self.0 >> bit & 1 == 1 {
            1.0
        } else {
            -1.0
        }
    }

    pub fn chsh(&self) -> f64 {
        let (a, a2, b, b2) = (self.outcome(0), self.outcome(1), self.outcome(2), self.outcome(3));
        (a * b - a * b2 + a2 * b + a2 * b2).abs()
    }
}

/// Side-A marginals for one `theta_a` under two remote settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoSignaling {
    pub marginal_1: f64,
    pub marginal_2: f64,
    pub delta: f64,
    /// `4 * sqrt(0.25 / n)`.
    pub bound: f64,
}

/// Runs the remote setting `theta_b` with seed `seed ^ theta_b.to_bits()`,
/// so equal settings share a stream.
pub fn no_signaling_check(
    theta_a: f64,
    theta_b1: f64,
    theta_b2: f64,
    n: u64,
    seed: u64,
) -> Result<NoSignaling> {
    let c1 = singlet_sample(theta_a, theta_b1, n, seed ^ theta_b1.to_bits())?;
    let c2 = singlet_sample(theta_a, theta_b2, n, seed ^ theta_b2.to_bits())?;
    let (m1, m2) = (c1.marginal_a(), c2.marginal_a());
    Ok(NoSignaling {
        marginal_1: m1,
        marginal_2: m2,
        delta: (m1 - m2).abs(),
        bound: 4.0 * (0.25 / n as f64).sqrt(),
    })
}
