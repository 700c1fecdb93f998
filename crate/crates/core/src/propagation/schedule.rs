use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::substrate::{ChainFrame, ChainHistory, ChainState};

/// Phased-array firing pattern: at tick `t` the array element at site
/// `1 + c_mult * t` (1-based) is driven, so the excitation locus advances
/// `c_mult` lattice units per tick.
///
/// One tick is the time the slowest carrier signal needs to cross one
/// lattice spacing.
#[derive(Debug, Clone, PartialEq)]
pub struct ExcitationSchedule {
    entries: Vec<(u64, usize)>,
    c_mult: usize,
    n_sites: usize,
    pub spacing: f64,
    pub tick_duration: f64,
}

/// Array synchronisation pattern for a locus speed of `c_mult` sites per tick.
/// Entries run `t = 0, 1, ...` while the site stays within `n_sites` and
/// `t <= max_tick`.
pub fn table1_schedule(c_mult: usize, n_sites: usize, max_tick: u64) -> Result<ExcitationSchedule> {
    if c_mult == 0 {
        return Err(Error::Config("speed multiplier must be at least 1".into()));
    }
    let entries = (0..=max_tick)
        .map(|t| (t, 1 + c_mult * t as usize))
        .take_while(|&(_, site)| site <= n_sites)
        .collect();
    Ok(ExcitationSchedule {
        entries,
        c_mult,
        n_sites,
        spacing: 1.0,
        tick_duration: 1.0,
    })
}

impl ExcitationSchedule {
    pub fn empty(n_sites: usize) -> Self {
        Self {
            entries: Vec::new(),
            c_mult: 1,
            n_sites,
            spacing: 1.0,
            tick_duration: 1.0,
        }
    }

    /// Explicit entries; ticks must be strictly increasing and sites 1-based.
    pub fn from_entries(entries: Vec<(u64, usize)>, n_sites: usize) -> Result<Self> {
        if entries.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::Config("schedule ticks must be strictly increasing".into()));
        }
        if let Some(&(_, s)) = entries.iter().find(|&&(_, s)| s == 0 || s > n_sites) {
            return Err(Error::OutOfRange {
                index: s,
                len: n_sites,
            });
        }
        Ok(Self {
            entries,
            c_mult: 1,
            n_sites,
            spacing: 1.0,
            tick_duration: 1.0,
        })
    }

    pub fn with_units(mut self, spacing: f64, tick_duration: f64) -> Self {
        self.spacing = spacing;
        self.tick_duration = tick_duration;
        self
    }

    pub fn entries(&self) -> &[(u64, usize)] {
        &self.entries
    }

    pub fn c_mult(&self) -> usize {
        self.c_mult
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    /// Locus speed in length per time.
    pub fn locus_speed(&self) -> f64 {
        self.c_mult as f64 * self.spacing / self.tick_duration
    }

    /// 0/1 grid, one row per entry and one column per array site, in the
    /// layout of the synchronisation table.
    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        self.entries
            .iter()
            .map(|&(_, site)| (1..=self.n_sites).map(|s| u8::from(s == site)).collect())
            .collect()
    }

    /// `tick,site`
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "tick,site")?;
        for (t, s) in &self.entries {
            writeln!(out, "{t},{s}")?;
        }
        Ok(())
    }
}

/// Runs the chain for `n_ticks` schedule ticks, kicking array site `s`
/// (chain index `s - 1`) by `impulse` at its scheduled tick. Each tick is
/// integrated in `ticks_per_unit` equal steps. One frame is recorded per
/// tick, after that tick's kicks are applied.
pub fn drive(
    state: &mut ChainState,
    schedule: &ExcitationSchedule,
    impulse: f64,
    ticks_per_unit: usize,
    n_ticks: u64,
) -> Result<ChainHistory> {
    if ticks_per_unit == 0 {
        return Err(Error::Config("ticks_per_unit must be positive".into()));
    }
    if let Some(&(_, s)) = schedule
        .entries()
        .iter()
        .find(|&&(_, s)| s == 0 || s > state.len())
    {
        return Err(Error::OutOfRange {
            index: s,
            len: state.len(),
        });
    }
    let dt = schedule.tick_duration / ticks_per_unit as f64;
    if !(dt > 0.0 && dt <= state.dt_limit()) {
        return Err(Error::StepSize {
            dt,
            limit: state.dt_limit(),
        });
    }
    let mut history = ChainHistory::new(state.profile().spacing());
    let mut pending = schedule.entries().iter().peekable();
    for tick in 0..=n_ticks {
        while let Some(&&(t, site)) = pending.peek() {
            if t != tick {
                break;
            }
            state.excite(site - 1, impulse)?;
            pending.next();
        }
        history.frames.push(ChainFrame::capture(tick, state));
        if tick < n_ticks {
            state.run(dt, ticks_per_unit)?;
        }
    }
    Ok(history)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::substrate::CouplingProfile;

    fn sites(s: &ExcitationSchedule) -> Vec<usize> {
        s.entries().iter().map(|e| e.1).collect()
    }

    #[test]
    fn table_blocks() {
        assert_eq!(
            sites(&table1_schedule(1, 7, 100).unwrap()),
            vec![1, 2, 3, 4, 5, 6, 7]
        );
        assert_eq!(sites(&table1_schedule(2, 7, 100).unwrap()), vec![1, 3, 5, 7]);
        assert_eq!(sites(&table1_schedule(6, 7, 100).unwrap()), vec![1, 7]);
        let t: Vec<u64> = table1_schedule(2, 7, 100)
            .unwrap()
            .entries()
            .iter()
            .map(|e| e.0)
            .collect();
        assert_eq!(t, vec![0, 1, 2, 3]);
        assert_eq!(sites(&table1_schedule(1, 7, 2).unwrap()), vec![1, 2, 3]);
        assert!(table1_schedule(0, 7, 10).is_err());
    }

    #[test]
    fn explicit_entries_are_validated() {
        assert!(ExcitationSchedule::from_entries(vec![(0, 1), (0, 2)], 5).is_err());
        assert!(ExcitationSchedule::from_entries(vec![(0, 6)], 5).is_err());
        assert!(ExcitationSchedule::from_entries(vec![(0, 1), (3, 5)], 5).is_ok());
    }

    #[test]
    fn empty_schedule_stays_quiet() {
        let mut c = ChainState::new(30, CouplingProfile::single(1, 1.0).unwrap()).unwrap();
        let h = drive(&mut c, &ExcitationSchedule::empty(30), 1.0, 100, 5).unwrap();
        assert_eq!(h.frames.len(), 6);
        assert!(h.frames.iter().all(|f| f.u.iter().chain(&f.v).all(|&x| x == 0.0)));
    }

    #[test]
    fn single_entry_matches_manual_kick() {
        let p = CouplingProfile::new([(1, 1.0), (2, 0.5)], 1.0, 1.0).unwrap();
        let mut driven = ChainState::new(40, p.clone()).unwrap();
        let schedule = ExcitationSchedule::from_entries(vec![(0, 1)], 40).unwrap();
        let h = drive(&mut driven, &schedule, 0.7, 100, 3).unwrap();

        let mut manual = ChainState::new(40, p).unwrap();
        manual.excite(0, 0.7).unwrap();
        manual.run(0.01, 300).unwrap();
        assert_eq!(h.frames.last().unwrap().u, manual.displacements());
        assert_eq!(driven, manual);
    }

    #[test]
    fn drive_rejects_bad_inputs() {
        let mut c = ChainState::new(10, CouplingProfile::single(1, 1.0).unwrap()).unwrap();
        let s = table1_schedule(1, 20, 20).unwrap();
        assert!(matches!(
            drive(&mut c, &s, 1.0, 100, 5),
            Err(Error::OutOfRange { .. })
        ));
        let s = table1_schedule(1, 5, 5).unwrap();
        assert!(matches!(
            drive(&mut c, &s, 1.0, 10, 5),
            Err(Error::StepSize { .. })
        ));
    }

    #[test]
    fn rows_and_csv() {
        let s = table1_schedule(3, 7, 10).unwrap();
        assert_eq!(
            s.to_rows(),
            vec![
                vec![1, 0, 0, 0, 0, 0, 0],
                vec![0, 0, 0, 1, 0, 0, 0],
                vec![0, 0, 0, 0, 0, 0, 1]
            ]
        );
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "tick,site\n0,1\n1,4\n2,7\n");
    }
}
