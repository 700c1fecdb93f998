use std::io::{self, Write};

use crate::csv::fmt_f64;
use crate::error::{Error, Result};
use crate::substrate::ChainHistory;

/// Fewest crossed sites a fit will accept.
pub const MIN_CROSSED: usize = 8;

/// Relative front threshold used when none is given.
pub const DEFAULT_THRESHOLD_FRACTION: f64 = 1e-3;

/// Result of fitting a straight line to first-crossing times.
#[derive(Debug, Clone, PartialEq)]
pub struct FrontFit {
    pub threshold: f64,
    pub source: usize,
    /// `(site, crossing time)` for every site that crossed, in site order.
    pub crossings: Vec<(usize, f64)>,
    /// Number of crossings used in the line fit.
    pub fitted: usize,
    pub speed: f64,
    /// RMS residual of the time-versus-distance fit.
    pub residual: f64,
}

impl FrontFit {
    /// `site,crossing_time`
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "site,crossing_time")?;
        for (site, t) in &self.crossings {
            writeln!(out, "{site},{}", fmt_f64(*t))?;
        }
        Ok(())
    }
}

/// `DEFAULT_THRESHOLD_FRACTION` of the largest displacement in the run.
pub fn default_threshold(history: &ChainHistory) -> f64 {
    DEFAULT_THRESHOLD_FRACTION * history.max_abs_displacement()
}

/// Measures how fast the disturbance from a single localized source spreads.
///
/// A site's crossing time is the first time `|u|` exceeds `threshold`,
/// linearly interpolated between recorded frames. The source is the site
/// that moves first. Crossed sites are sorted by ring distance from the
/// source, the middle half is kept, and time is regressed on distance; the
/// speed is the inverse slope.
pub fn estimate_front_speed(history: &ChainHistory, threshold: f64) -> Result<FrontFit> {
    if !(threshold > 0.0 && threshold.is_finite()) {
        return Err(Error::Config(format!(
            "front threshold must be positive, got {threshold}"
        )));
    }
    let n = history.sites();
    let mut crossings = Vec::new();
    for site in 0..n {
        let mut prev: Option<(f64, f64)> = None;
        for frame in &history.frames {
            let amp = frame.u[site].abs();
            if amp > threshold {
                let t = match prev {
                    Some((t0, a0)) => t0 + (threshold - a0) / (amp - a0) * (frame.time - t0),
                    None => frame.time,
                };
                crossings.push((site, t));
                break;
            }
            prev = Some((frame.time, amp));
        }
    }
    if crossings.len() < MIN_CROSSED {
        return Err(Error::InsufficientSignal {
            crossed: crossings.len(),
            needed: MIN_CROSSED,
        });
    }

    let source = locate_source(history).unwrap_or(crossings[0].0);

    let mut by_distance: Vec<(f64, f64)> = crossings
        .iter()
        .filter(|&&(site, _)| site != source)
        .map(|&(site, t)| {
            let d = site.abs_diff(source);
            (d.min(n - d) as f64 * history.spacing, t)
        })
        .collect();
    by_distance.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let lo = by_distance.len() / 4;
    let hi = by_distance.len() * 3 / 4;
    let window = &by_distance[lo..hi];

    let (slope, intercept) = least_squares(window);
    let residual = (window
        .iter()
        .map(|&(x, t)| (t - (intercept + slope * x)).powi(2))
        .sum::<f64>()
        / window.len() as f64)
        .sqrt();
    let speed = if slope > 0.0 { 1.0 / slope } else { f64::INFINITY };
    Ok(FrontFit {
        threshold,
        source,
        crossings,
        fitted: window.len(),
        speed,
        residual,
    })
}

/// Site of the first disturbance: the largest |v| (or |u| if nothing moves
/// yet) in the first frame that is not at rest.
fn locate_source(history: &ChainHistory) -> Option<usize> {
    let argmax = |xs: &[f64]| {
        xs.iter().enumerate().fold(
            (0, 0.0_f64),
            |best, (i, x)| if x.abs() > best.1 { (i, x.abs()) } else { best },
        )
    };
    history.frames.iter().find_map(|f| {
        let (iv, mv) = argmax(&f.v);
        let (iu, mu) = argmax(&f.u);
        if mv > 0.0 {
            Some(iv)
        } else if mu > 0.0 {
            Some(iu)
        } else {
            None
        }
    })
}

/// Ordinary least squares `y = intercept + slope * x`.
fn least_squares(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return (0.0, my);
    }
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}
