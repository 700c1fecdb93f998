use crate::error::{Error, Result};
use crate::propagation::dispersion;

/// One coupling term: every site is tied to the sites `distance` cells away
/// on both sides by a spring of the given stiffness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hop {
    pub distance: usize,
    pub stiffness: f64,
}

/// Hop table plus the mass and lattice spacing of a harmonic chain.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingProfile {
    hops: Vec<Hop>,
    mass: f64,
    spacing: f64,
}

impl CouplingProfile {
    pub fn new(hops: impl IntoIterator<Item = (usize, f64)>, mass: f64, spacing: f64) -> Result<Self> {
        let hops: Vec<Hop> = hops
            .into_iter()
            .map(|(distance, stiffness)| Hop { distance, stiffness })
            .collect();
        if hops.is_empty() {
            return Err(Error::Config("coupling profile needs at least one hop".into()));
        }
        for (i, hop) in hops.iter().enumerate() {
            if hop.distance == 0 {
                return Err(Error::Config("hop distance must be a positive integer".into()));
            }
            if !(hop.stiffness.is_finite() && hop.stiffness > 0.0) {
                return Err(Error::Config(format!(
                    "stiffness for hop {} must be positive, got {}",
                    hop.distance, hop.stiffness
                )));
            }
            if hops[..i].iter().any(|h| h.distance == hop.distance) {
                return Err(Error::Config(format!("duplicate hop distance {}", hop.distance)));
            }
        }
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::Config(format!("mass must be positive, got {mass}")));
        }
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(Error::Config(format!("spacing must be positive, got {spacing}")));
        }
        Ok(Self { hops, mass, spacing })
    }

    /// A single hop of distance `distance` with unit mass and spacing.
    pub fn single(distance: usize, stiffness: f64) -> Result<Self> {
        Self::new([(distance, stiffness)], 1.0, 1.0)
    }

    /// Parses `d:kappa` pairs separated by commas, e.g. `1:1.0,2:0.5`.
    pub fn parse_hops(text: &str) -> Result<Vec<(usize, f64)>> {
        text.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|entry| {
                let (d, k) = entry.split_once(':').ok_or_else(|| {
                    Error::Config(format!("hop entry `{entry}` is not `distance:stiffness`"))
                })?;
                let d = d
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Config(format!("bad hop distance `{d}`")))?;
                let k = k
                    .trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Config(format!("bad hop stiffness `{k}`")))?;
                Ok((d, k))
            })
            .collect()
    }

    pub fn hops(&self) -> &[Hop] {
        &self.hops
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn max_distance(&self) -> usize {
        self.hops.iter().map(|h| h.distance).max().unwrap_or(0)
    }

    /// Largest angular frequency over the Brillouin zone.
    pub fn omega_max(&self) -> f64 {
        dispersion::max_omega(self)
    }

    /// Largest step accepted by the chain integrator, `0.1 / omega_max`.
    pub fn max_stable_dt(&self) -> f64 {
        0.1 / self.omega_max()
    }
}
