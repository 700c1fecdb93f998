//! Causal precedence at a finite signal speed, the similarity group, and
//! order-preservation checks.

use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::frames::{light_clock_gamma, Event};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Relation {
    /// Strictly inside the forward cone.
    #[default]
    Chronological,
    /// Inside or on the forward cone.
    Causal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CausalConfig {
    c_s: f64,
    pub relation: Relation,
}

impl CausalConfig {
    pub fn new(c_s: f64, relation: Relation) -> Result<Self> {
        if !(c_s.is_finite() && c_s > 0.0) {
            return Err(Error::Config(format!("signal speed must be positive, got {c_s}")));
        }
        Ok(Self { c_s, relation })
    }

    pub fn c_s(&self) -> f64 {
        self.c_s
    }
}

/// `p` precedes `q`: `q` is later and inside (or on, for `Causal`) the
/// forward signal cone of `p`.
pub fn precedes(p: Event, q: Event, cfg: &CausalConfig) -> bool {
    let dt = q.t - p.t;
    if dt <= 0.0 {
        return false;
    }
    let s = cfg.c_s * dt;
    let dx = q.x - p.x;
    let sep = s * s - dx * dx;
    match cfg.relation {
        Relation::Chronological => sep > 0.0,
        Relation::Causal => sep >= 0.0,
    }
}

/// `e -> lambda * Boost(v) e + shift`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimilarityMap {
    velocity: f64,
    shift: (f64, f64),
    dilation: f64,
    c_s: f64,
}

impl SimilarityMap {
    pub fn new(velocity: f64, shift: (f64, f64), dilation: f64, c_s: f64) -> Result<Self> {
        if !(dilation.is_finite() && dilation > 0.0) {
            return Err(Error::Config(format!(
                "dilation must be positive, got {dilation}"
            )));
        }
        light_clock_gamma(velocity, c_s)?;
        Ok(Self {
            velocity,
            shift,
            dilation,
            c_s,
        })
    }

    pub fn identity(c_s: f64) -> Self {
        Self {
            velocity: 0.0,
            shift: (0.0, 0.0),
            dilation: 1.0,
            c_s,
        }
    }

    pub fn apply(&self, e: Event) -> Event {
        let gamma = 1.0 / ((1.0 - self.velocity / self.c_s) * (1.0 + self.velocity / self.c_s)).sqrt();
        let t = gamma * (e.t - self.velocity * e.x / (self.c_s * self.c_s));
        let x = gamma * (e.x - self.velocity * e.t);
        Event::new(self.dilation * t + self.shift.0, self.dilation * x + self.shift.1)
    }

    /// Random map with `|v| < 0.95 c_s`, shifts in `[-1, 1]` and dilation in
    /// `[0.1, 10]` (log-uniform).
    pub fn random<R: Rng>(rng: &mut R, c_s: f64) -> Self {
        Self {
            velocity: rng.random_range(-0.95..0.95) * c_s,
            shift: (rng.random_range(-1.0..1.0) / c_s, rng.random_range(-1.0..1.0)),
            dilation: 10f64.powf(rng.random_range(-1.0..1.0)),
            c_s,
        }
    }
}

/// One ordered pair on which a map fails to preserve precedence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub p: Event,
    pub q: Event,
    /// `precedes(p, q)` and `precedes(q, p)` before the map.
    pub before: (bool, bool),
    /// The same two relations after the map.
    pub after: (bool, bool),
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct OrderVerdict {
    pub pairs_checked: usize,
    pub violations: Vec<Violation>,
}

impl OrderVerdict {
    pub fn preserved(&self) -> bool {
        self.violations.is_empty()
    }

    /// `t1,x1,t2,x2,before_p,before_q,after_p,after_q`
    pub fn write_csv<W: Write>(&self, out: W) -> io::Result<()> {
        write_violations(out, &self.violations)
    }
}

pub fn write_violations<W: Write>(mut out: W, violations: &[Violation]) -> io::Result<()> {
    use crate::csv::fmt_f64;
    writeln!(out, "t1,x1,t2,x2,before_p,before_q,after_p,after_q")?;
    for v in violations {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            fmt_f64(v.p.t),
            fmt_f64(v.p.x),
            fmt_f64(v.q.t),
            fmt_f64(v.q.x),
            u8::from(v.before.0),
            u8::from(v.before.1),
            u8::from(v.after.0),
            u8::from(v.after.1)
        )?;
    }
    Ok(())
}

fn check_pair(map: &impl Fn(Event) -> Event, p: Event, q: Event, cfg: &CausalConfig) -> Option<Violation> {
    let before = (precedes(p, q, cfg), precedes(q, p, cfg));
    let (mp, mq) = (map(p), map(q));
    let after = (precedes(mp, mq, cfg), precedes(mq, mp, cfg));
    (before != after).then_some(Violation { p, q, before, after })
}

/// Checks `precedes(p, q) <=> precedes(map p, map q)` over all pairs.
pub fn preserves_order(
    map: impl Fn(Event) -> Event,
    events: &[Event],
    cfg: &CausalConfig,
) -> Result<OrderVerdict> {
    if events.len() < 2 {
        return Err(Error::TooShort {
            len: events.len(),
            needed: 2,
        });
    }
    let mut verdict = OrderVerdict::default();
    for (i, &p) in events.iter().enumerate() {
        for &q in &events[i + 1..] {
            verdict.pairs_checked += 1;
            if let Some(v) = check_pair(&map, p, q, cfg) {
                verdict.violations.push(v);
            }
        }
    }
    Ok(verdict)
}

/// Event uniform in the box `c_s t, x in [-1, 1]`.
pub fn sample_event<R: Rng>(rng: &mut R, c_s: f64) -> Event {
    Event::new(rng.random_range(-1.0..1.0) / c_s, rng.random_range(-1.0..1.0))
}

/// Random search for a pair whose order the map changes. Returns the first
/// one found and the trial it was found on.
pub fn find_violation(
    map: impl Fn(Event) -> Event,
    cfg: &CausalConfig,
    n_trials: usize,
    seed: u64,
) -> Result<Option<(usize, Violation)>> {
    if n_trials == 0 {
        return Err(Error::Config("n_trials must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 1..=n_trials {
        let p = sample_event(&mut rng, cfg.c_s);
        let q = sample_event(&mut rng, cfg.c_s);
        if let Some(v) = check_pair(&map, p, q, cfg) {
            return Ok(Some((trial, v)));
        }
    }
    Ok(None)
}

/// Quadratic perturbation of the identity in the unit box,
/// `(s, x) -> (s + A * P(s, x), x + A * Q(s, x))` with `s = c_s t` and
/// `P`, `Q` quadratic forms with unit-norm coefficient vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticPerturbation {
    pub amplitude: f64,
    /// Coefficients of `s^2, s x, x^2` in the time component.
    pub time_coeffs: [f64; 3],
    /// Coefficients of `s^2, s x, x^2` in the space component.
    pub space_coeffs: [f64; 3],
    pub c_s: f64,
}

impl QuadraticPerturbation {
    /// `(t, x) -> (t + A x^2, x)`.
    pub fn time_shear(amplitude: f64, c_s: f64) -> Self {
        Self {
            amplitude,
            time_coeffs: [0.0, 0.0, 1.0],
            space_coeffs: [0.0; 3],
            c_s,
        }
    }

    pub fn random<R: Rng>(rng: &mut R, amplitude: f64, c_s: f64) -> Self {
        let mut unit = || {
            let v: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-12);
            v.map(|x| x / norm)
        };
        let time_coeffs = unit();
        let space_coeffs = unit();
        Self {
            amplitude,
            time_coeffs,
            space_coeffs,
            c_s,
        }
    }

    pub fn apply(&self, e: Event) -> Event {
        let s = self.c_s * e.t;
        let form = |c: &[f64; 3]| c[0] * s * s + c[1] * s * e.x + c[2] * e.x * e.x;
        let s2 = s + self.amplitude * form(&self.time_coeffs);
        let x2 = e.x + self.amplitude * form(&self.space_coeffs);
        Event::new(s2 / self.c_s, x2)
    }
}
