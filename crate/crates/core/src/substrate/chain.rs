use std::io::{self, Write};

use super::profile::CouplingProfile;
use crate::csv::fmt_f64;
use crate::error::{Error, Result};

/// Periodic harmonic chain with multi-distance couplings, advanced by
/// velocity Verlet.
///
/// The equation of motion for site `i` is
/// `m * a_i = sum_d kappa_d * (u[i+d] - 2 u[i] + u[i-d])` with indices taken
/// modulo the chain length.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainState {
    u: Vec<f64>,
    v: Vec<f64>,
    acc: Vec<f64>,
    time: f64,
    profile: CouplingProfile,
    dt_limit: f64,
}

impl ChainState {
    /// All-zero chain of `n` sites. The chain must be longer than
    /// `2 * max_distance + 1` so that no two couplings of a site wrap onto
    /// the same partner.
    pub fn new(n: usize, profile: CouplingProfile) -> Result<Self> {
        let min = 2 * profile.max_distance() + 1;
        if n <= min {
            return Err(Error::Config(format!(
                "chain of {n} sites is too short for hop distance {} (need more than {min})",
                profile.max_distance()
            )));
        }
        let dt_limit = profile.max_stable_dt();
        Ok(Self {
            u: vec![0.0; n],
            v: vec![0.0; n],
            acc: vec![0.0; n],
            time: 0.0,
            profile,
            dt_limit,
        })
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    pub fn displacements(&self) -> &[f64] {
        &self.u
    }

    pub fn velocities(&self) -> &[f64] {
        &self.v
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn profile(&self) -> &CouplingProfile {
        &self.profile
    }

    pub fn dt_limit(&self) -> f64 {
        self.dt_limit
    }

    pub fn set_displacement(&mut self, site: usize, value: f64) -> Result<()> {
        self.check_site(site)?;
        self.u[site] = value;
        self.update_acceleration();
        Ok(())
    }

    pub fn set_velocity(&mut self, site: usize, value: f64) -> Result<()> {
        self.check_site(site)?;
        self.v[site] = value;
        Ok(())
    }

    /// Velocity kick at one site.
    pub fn excite(&mut self, site: usize, impulse: f64) -> Result<()> {
        self.check_site(site)?;
        self.v[site] += impulse;
        Ok(())
    }

    /// Flips the sign of every velocity.
    pub fn reverse(&mut self) {
        for v in &mut self.v {
            *v = -*v;
        }
    }

    /// One velocity-Verlet step.
    pub fn step(&mut self, dt: f64) -> Result<()> {
        if !(dt > 0.0 && dt <= self.dt_limit) {
            return Err(Error::StepSize {
                dt,
                limit: self.dt_limit,
            });
        }
        let half = 0.5 * dt;
        for ((u, v), a) in self.u.iter_mut().zip(self.v.iter_mut()).zip(&self.acc) {
            *v += half * a;
            *u += dt * *v;
        }
        self.update_acceleration();
        for (v, a) in self.v.iter_mut().zip(&self.acc) {
            *v += half * a;
        }
        self.time += dt;
        Ok(())
    }

    pub fn run(&mut self, dt: f64, steps: usize) -> Result<()> {
        for _ in 0..steps {
            self.step(dt)?;
        }
        Ok(())
    }

    pub fn kinetic_energy(&self) -> f64 {
        0.5 * self.profile.mass() * self.v.iter().map(|v| v * v).sum::<f64>()
    }

    pub fn potential_energy(&self) -> f64 {
        let n = self.u.len();
        self.profile
            .hops()
            .iter()
            .map(|hop| {
                let bonds: f64 = (0..n)
                    .map(|i| {
                        let j = (i + hop.distance) % n;
                        let s = self.u[j] - self.u[i];
                        s * s
                    })
                    .sum();
                0.5 * hop.stiffness * bonds
            })
            .sum()
    }

    pub fn total_energy(&self) -> f64 {
        self.kinetic_energy() + self.potential_energy()
    }

    pub fn momentum(&self) -> f64 {
        self.profile.mass() * self.v.iter().sum::<f64>()
    }

    fn check_site(&self, site: usize) -> Result<()> {
        if site >= self.u.len() {
            return Err(Error::OutOfRange {
                index: site,
                len: self.u.len(),
            });
        }
        Ok(())
    }

    fn update_acceleration(&mut self) {
        let n = self.u.len();
        let inv_m = 1.0 / self.profile.mass();
        self.acc.iter_mut().for_each(|a| *a = 0.0);
        for hop in self.profile.hops() {
            let d = hop.distance;
            let k = hop.stiffness * inv_m;
            let u = &self.u;
            for (i, a) in self.acc.iter_mut().enumerate() {
                let ip = if i + d >= n { i + d - n } else { i + d };
                let im = if i >= d { i - d } else { i + n - d };
                *a += k * (u[ip] - 2.0 * u[i] + u[im]);
            }
        }
    }
}

/// One recorded chain snapshot.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainFrame {
    pub tick: u64,
    pub time: f64,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

impl ChainFrame {
    pub fn capture(tick: u64, state: &ChainState) -> Self {
        Self {
            tick,
            time: state.time(),
            u: state.displacements().to_vec(),
            v: state.velocities().to_vec(),
        }
    }
}

/// Chain trajectory recorded once per tick.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ChainHistory {
    pub spacing: f64,
    pub frames: Vec<ChainFrame>,
}

impl ChainHistory {
    pub fn new(spacing: f64) -> Self {
        Self {
            spacing,
            frames: Vec::new(),
        }
    }

    pub fn sites(&self) -> usize {
        self.frames.first().map_or(0, |f| f.u.len())
    }

    /// Largest |u| anywhere in the run.
    pub fn max_abs_displacement(&self) -> f64 {
        self.frames
            .iter()
            .flat_map(|f| f.u.iter())
            .fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    /// `tick,site,u,v`, tick-major.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "tick,site,u,v")?;
        for frame in &self.frames {
            for (site, (u, v)) in frame.u.iter().zip(&frame.v).enumerate() {
                writeln!(out, "{},{},{},{}", frame.tick, site, fmt_f64(*u), fmt_f64(*v))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nn() -> CouplingProfile {
        CouplingProfile::single(1, 1.0).unwrap()
    }

    #[test]
    fn new_chain_is_zero() {
        let c = ChainState::new(100, nn()).unwrap();
        assert_eq!(c.len(), 100);
        assert!(c.displacements().iter().all(|&x| x == 0.0));
        assert!(c.velocities().iter().all(|&x| x == 0.0));
        assert_eq!(c.time(), 0.0);
    }

    #[test]
    fn new_chain_rejects_short_rings() {
        let p = CouplingProfile::single(3, 1.0).unwrap();
        assert!(matches!(ChainState::new(7, p.clone()), Err(Error::Config(_))));
        assert!(ChainState::new(8, p).is_ok());
    }

    #[test]
    fn profile_is_stored_verbatim() {
        let p = CouplingProfile::new([(1, 1.0), (2, 0.5)], 1.0, 1.0).unwrap();
        let c = ChainState::new(300, p.clone()).unwrap();
        assert_eq!(c.profile(), &p);
    }

    #[test]
    fn zero_state_is_a_fixed_point() {
        let mut c = ChainState::new(50, nn()).unwrap();
        c.step(0.01).unwrap();
        assert!(c.displacements().iter().all(|&x| x == 0.0));
        assert!((c.time() - 0.01).abs() < 1e-15);
    }

    #[test]
    fn step_guard() {
        let mut c = ChainState::new(50, nn()).unwrap();
        assert!(matches!(c.step(0.06), Err(Error::StepSize { .. })));
        assert!(c.step(0.0).is_err());
        assert!(c.step(0.05).is_ok());
    }

    #[test]
    fn excite_adds_impulses() {
        let mut c = ChainState::new(20, nn()).unwrap();
        c.excite(0, 1.0).unwrap();
        assert_eq!(c.velocities()[0], 1.0);
        assert!(c.velocities()[1..].iter().all(|&x| x == 0.0));
        c.excite(0, 0.5).unwrap();
        assert_eq!(c.velocities()[0], 1.5);
        assert!(matches!(c.excite(20, 1.0), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn kick_energy_is_kinetic() {
        let p = CouplingProfile::new([(1, 1.0)], 2.0, 1.0).unwrap();
        let mut c = ChainState::new(20, p).unwrap();
        c.excite(3, 1.5).unwrap();
        assert!((c.total_energy() - 0.5 * 2.0 * 1.5 * 1.5).abs() < 1e-15);
    }

    #[test]
    fn energy_examples() {
        let mut c = ChainState::new(10, nn()).unwrap();
        assert_eq!(c.total_energy(), 0.0);
        c.set_velocity(0, 2.0).unwrap();
        assert_eq!(c.total_energy(), 2.0);
        let mut c = ChainState::new(10, nn()).unwrap();
        c.set_displacement(0, 1.0).unwrap();
        // bonds (9,0) and (0,1), each half-stretched energy 1/2
        assert_eq!(c.potential_energy(), 1.0);
    }

    #[test]
    fn history_csv_layout() {
        let mut c = ChainState::new(5, nn()).unwrap();
        let mut h = ChainHistory::new(1.0);
        h.frames.push(ChainFrame::capture(0, &c));
        c.excite(1, 1.0).unwrap();
        h.frames.push(ChainFrame::capture(1, &c));
        let mut buf = Vec::new();
        h.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "tick,site,u,v");
        assert_eq!(lines.len(), 1 + 10);
        assert!(lines[7].starts_with("1,1,"));
    }
}
