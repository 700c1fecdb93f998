use std::io::{self, Write};

use crate::error::{Error, Result};

/// Largest neighbourhood radius a lookup-table rule supports.
pub const MAX_RADIUS: usize = 8;

/// Boolean function of a `2r + 1` cell neighbourhood, stored as a truth
/// table. Bit `j` of the table index is the cell at offset `j - r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaRule {
    radius: usize,
    table: Vec<bool>,
}

impl CaRule {
    pub fn from_fn(radius: usize, f: impl Fn(&[bool]) -> bool) -> Result<Self> {
        check_radius(radius)?;
        let width = 2 * radius + 1;
        let mut cells = vec![false; width];
        let table = (0..1usize << width)
            .map(|index| {
                for (j, c) in cells.iter_mut().enumerate() {
                    *c = index >> j & 1 == 1;
                }
                f(&cells)
            })
            .collect();
        Self::from_table(radius, table)
    }

    pub fn from_table(radius: usize, table: Vec<bool>) -> Result<Self> {
        check_radius(radius)?;
        if table.len() != 1 << (2 * radius + 1) {
            return Err(Error::SizeMismatch {
                left: table.len(),
                right: 1 << (2 * radius + 1),
            });
        }
        if table[0] {
            return Err(Error::Config("rule must map the empty neighbourhood to 0".into()));
        }
        Ok(Self { radius, table })
    }

    /// OR over the neighbourhood.
    pub fn or(radius: usize) -> Result<Self> {
        Self::from_fn(radius, |cells| cells.iter().any(|&c| c))
    }

    /// Parity (XOR) over the neighbourhood.
    pub fn parity(radius: usize) -> Result<Self> {
        Self::from_fn(radius, |cells| cells.iter().filter(|&&c| c).count() % 2 == 1)
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    fn eval(&self, index: usize) -> bool {
        self.table[index]
    }
}

fn check_radius(radius: usize) -> Result<()> {
    if radius == 0 || radius > MAX_RADIUS {
        return Err(Error::Config(format!(
            "radius must be in 1..={MAX_RADIUS}, got {radius}"
        )));
    }
    Ok(())
}

/// Second-order reversible automaton on a ring:
/// `next[i] = rule(nbhd_i(current)) XOR previous[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaState {
    current: Vec<bool>,
    previous: Vec<bool>,
    rule: CaRule,
    tick: i64,
}

impl CaState {
    pub fn new(seed: Vec<bool>, rule: CaRule) -> Result<Self> {
        let n = seed.len();
        if n <= 2 * rule.radius() {
            return Err(Error::Config(format!(
                "width {n} must exceed twice the radius {}",
                rule.radius()
            )));
        }
        Ok(Self {
            previous: vec![false; n],
            current: seed,
            rule,
            tick: 0,
        })
    }

    /// Width-`n` ring with a single live cell at `site`.
    pub fn single_seed(n: usize, site: usize, rule: CaRule) -> Result<Self> {
        if site >= n {
            return Err(Error::OutOfRange { index: site, len: n });
        }
        let mut seed = vec![false; n];
        seed[site] = true;
        Self::new(seed, rule)
    }

    pub fn with_layers(current: Vec<bool>, previous: Vec<bool>, rule: CaRule) -> Result<Self> {
        if current.len() != previous.len() {
            return Err(Error::SizeMismatch {
                left: current.len(),
                right: previous.len(),
            });
        }
        let mut s = Self::new(current, rule)?;
        s.previous = previous;
        Ok(s)
    }

    pub fn width(&self) -> usize {
        self.current.len()
    }

    pub fn radius(&self) -> usize {
        self.rule.radius()
    }

    pub fn current(&self) -> &[bool] {
        &self.current
    }

    pub fn previous(&self) -> &[bool] {
        &self.previous
    }

    pub fn tick(&self) -> i64 {
        self.tick
    }

    pub fn step(&mut self) {
        let n = self.current.len();
        let r = self.rule.radius();
        let next: Vec<bool> = (0..n)
            .map(|i| {
                let mut index = 0usize;
                for j in 0..=2 * r {
                    let cell = (i + n + j - r) % n;
                    if self.current[cell] {
                        index |= 1 << j;
                    }
                }
                self.rule.eval(index) ^ self.previous[i]
            })
            .collect();
        self.previous = std::mem::replace(&mut self.current, next);
        self.tick += 1;
    }

    /// Exchanges the two layers; stepping a swapped state runs time backwards.
    pub fn swap_layers(&mut self) {
        std::mem::swap(&mut self.current, &mut self.previous);
    }

    /// Undoes one `step`.
    pub fn step_back(&mut self) {
        self.swap_layers();
        self.step();
        self.swap_layers();
        self.tick -= 2;
    }

    /// Live cells of the current layer.
    pub fn support(&self) -> Vec<usize> {
        self.current
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
            .collect()
    }
}

/// Current layers recorded once per tick.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CaHistory {
    pub frames: Vec<(i64, Vec<bool>)>,
}

impl CaHistory {
    pub fn record(state: &mut CaState, steps: usize) -> Self {
        let mut frames = Vec::with_capacity(steps + 1);
        frames.push((state.tick(), state.current().to_vec()));
        for _ in 0..steps {
            state.step();
            frames.push((state.tick(), state.current().to_vec()));
        }
        Self { frames }
    }

    /// `tick,site,bit`, tick-major.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "tick,site,bit")?;
        for (tick, layer) in &self.frames {
            for (site, &bit) in layer.iter().enumerate() {
                writeln!(out, "{tick},{site},{}", u8::from(bit))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructor_examples() {
        let s = CaState::single_seed(11, 5, CaRule::or(1).unwrap()).unwrap();
        assert_eq!(s.tick(), 0);
        assert_eq!(s.support(), vec![5]);
        assert!(s.previous().iter().all(|&b| !b));
        assert!(CaState::new(vec![false; 3], CaRule::or(2).unwrap()).is_err());
    }

    #[test]
    fn non_quiescent_rule_is_rejected() {
        assert!(CaRule::from_fn(1, |_| true).is_err());
        assert!(CaRule::from_table(1, vec![false; 4]).is_err());
    }

    #[test]
    fn empty_seed_stays_empty() {
        let mut s = CaState::new(vec![false; 16], CaRule::or(2).unwrap()).unwrap();
        for _ in 0..10 {
            s.step();
        }
        assert!(s.support().is_empty());
        assert_eq!(s.tick(), 10);
    }

    #[test]
    fn or_rule_widens_by_one_per_side() {
        let mut s = CaState::single_seed(11, 5, CaRule::or(1).unwrap()).unwrap();
        s.step();
        assert_eq!(s.support(), vec![4, 5, 6]);
        assert_eq!(s.tick(), 1);
    }

    #[test]
    fn step_back_restores() {
        let seed: Vec<bool> = (0..23).map(|i| i * 7 % 5 == 1).collect();
        let mut s = CaState::new(seed, CaRule::parity(2).unwrap()).unwrap();
        s.step();
        s.step();
        let snapshot = s.clone();
        s.step();
        s.step_back();
        assert_eq!(s, snapshot);
    }

    #[test]
    fn csv_layout() {
        let mut s = CaState::single_seed(5, 2, CaRule::or(1).unwrap()).unwrap();
        let h = CaHistory::record(&mut s, 1);
        let mut buf = Vec::new();
        h.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "tick,site,bit");
        assert_eq!(lines[3], "0,2,1");
        assert_eq!(lines[7], "1,1,1");
        assert_eq!(lines.len(), 11);
    }
}
