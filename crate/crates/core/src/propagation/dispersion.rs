use std::f64::consts::PI;
use std::io::{self, Write};

use crate::csv::fmt_f64;
use crate::substrate::CouplingProfile;

/// Grid size used to seed maximisation over the Brillouin zone.
pub const K_GRID: usize = 1024;
const GOLDEN_TOL: f64 = 1e-9;

fn omega_squared(k: f64, profile: &CouplingProfile) -> f64 {
    let a = profile.spacing();
    let sum: f64 = profile
        .hops()
        .iter()
        .map(|h| {
            let s = (0.5 * k * h.distance as f64 * a).sin();
            h.stiffness * s * s
        })
        .sum();
    4.0 * sum / profile.mass()
}

/// `omega(k) = sqrt((4/m) sum_d kappa_d sin^2(k d a / 2))`.
pub fn omega(k: f64, profile: &CouplingProfile) -> f64 {
    omega_squared(k, profile).sqrt()
}

/// Long-wavelength sound speed `a * sqrt(sum_d kappa_d d^2 / m)`.
pub fn sound_speed(profile: &CouplingProfile) -> f64 {
    let sum: f64 = profile
        .hops()
        .iter()
        .map(|h| h.stiffness * (h.distance * h.distance) as f64)
        .sum();
    profile.spacing() * (sum / profile.mass()).sqrt()
}

/// `d omega / d k`. At `k = 0`, and at any other exact zero of `omega`,
/// returns the right-hand limit `sound_speed(profile)`.
pub fn group_velocity(k: f64, profile: &CouplingProfile) -> f64 {
    if k == 0.0 {
        return sound_speed(profile);
    }
    // half-angle form: sin(kda) = 2 sin(kda/2) cos(kda/2)
    let a = profile.spacing();
    let (num, den) = profile.hops().iter().fold((0.0, 0.0), |(num, den), h| {
        let d = h.distance as f64;
        let (s, c) = (0.5 * k * d * a).sin_cos();
        (num + h.stiffness * d * s * c, den + h.stiffness * s * s)
    });
    if den == 0.0 {
        return sound_speed(profile);
    }
    a * num / (profile.mass() * (den / profile.mass()).sqrt())
}

/// Maximum of `f` over `[0, k_max]`: best point of a `K_GRID` grid, refined
/// by golden-section search between its neighbours.
fn maximize_over_zone(k_max: f64, f: impl Fn(f64) -> f64) -> f64 {
    let step = k_max / (K_GRID - 1) as f64;
    let (best_j, best) = (0..K_GRID)
        .map(|j| (j, f(j as f64 * step)))
        .fold((0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
    let lo = best_j.saturating_sub(1) as f64 * step;
    let hi = ((best_j + 1).min(K_GRID - 1)) as f64 * step;
    let refined = golden_max(&f, lo, hi);
    // gains at the level of rounding noise are not a better maximum
    if refined > best * (1.0 + 1e-12) {
        refined
    } else {
        best
    }
}

fn golden_max(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > GOLDEN_TOL {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    f1.max(f2)
}

/// Fastest group velocity over `k in [0, pi/a]`.
pub fn max_signal_speed(profile: &CouplingProfile) -> f64 {
    let k_max = PI / profile.spacing();
    maximize_over_zone(k_max, |k| group_velocity(k, profile))
}

/// Highest mode frequency over `k in [0, pi/a]`.
pub fn max_omega(profile: &CouplingProfile) -> f64 {
    let k_max = PI / profile.spacing();
    maximize_over_zone(k_max, |k| omega(k, profile))
}

/// `omega` and `v_g` sampled on a uniform grid over `[0, pi/a]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DispersionCurve {
    pub profile: CouplingProfile,
    pub k: Vec<f64>,
    pub omega: Vec<f64>,
    pub group_velocity: Vec<f64>,
}

impl DispersionCurve {
    pub fn sample(profile: &CouplingProfile, points: usize) -> Self {
        let points = points.max(2);
        let k_max = PI / profile.spacing();
        let k: Vec<f64> = (0..points)
            .map(|j| k_max * j as f64 / (points - 1) as f64)
            .collect();
        Self {
            omega: k.iter().map(|&k| omega(k, profile)).collect(),
            group_velocity: k.iter().map(|&k| group_velocity(k, profile)).collect(),
            profile: profile.clone(),
            k,
        }
    }

    /// `k,omega,vg`
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "k,omega,vg")?;
        for ((k, w), vg) in self.k.iter().zip(&self.omega).zip(&self.group_velocity) {
            writeln!(out, "{},{},{}", fmt_f64(*k), fmt_f64(*w), fmt_f64(*vg))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(hops: &[(usize, f64)]) -> CouplingProfile {
        CouplingProfile::new(hops.iter().copied(), 1.0, 1.0).unwrap()
    }

    #[test]
    fn omega_examples() {
        assert_eq!(omega(0.0, &p(&[(1, 1.0), (3, 2.0)])), 0.0);
        assert!((omega(PI, &p(&[(1, 1.0)])) - 2.0).abs() < 1e-15);
        assert!((omega(PI / 2.0, &p(&[(2, 1.0)])) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn omega_symmetric_and_periodic() {
        let prof = p(&[(1, 1.0), (2, 0.3), (5, 0.7)]);
        for k in [0.1, 0.9, 2.3, 3.0] {
            let w = omega(k, &prof);
            assert!((omega(-k, &prof) - w).abs() < 1e-14);
            assert!((omega(k + 2.0 * PI, &prof) - w).abs() < 1e-12);
        }
    }

    #[test]
    fn long_wavelength_limit() {
        assert_eq!(group_velocity(0.0, &p(&[(1, 1.0)])), 1.0);
        for n in 2..=6 {
            assert_eq!(group_velocity(0.0, &p(&[(n, 1.0)])), n as f64);
        }
        // small k approaches the limit
        let prof = p(&[(1, 1.0), (2, 0.25)]);
        assert!((group_velocity(1e-7, &prof) - sound_speed(&prof)).abs() < 1e-9);
    }

    #[test]
    fn max_speed_examples() {
        assert_eq!(max_signal_speed(&p(&[(1, 1.0)])), 1.0);
        assert_eq!(max_signal_speed(&p(&[(3, 1.0)])), 3.0);
        let mixed = max_signal_speed(&p(&[(1, 1.0), (2, 0.25)]));
        assert!(mixed > 1.0 && mixed < 2.0);
    }

    #[test]
    fn curve_csv_header() {
        let c = DispersionCurve::sample(&p(&[(1, 1.0)]), 5);
        let mut buf = Vec::new();
        c.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("k,omega,vg\n"));
        assert_eq!(text.lines().count(), 6);
    }
}
