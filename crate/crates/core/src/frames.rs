//! Intrinsic space-time coordinates from round-trip signalling.
//!
//! Signals travel at `±c_s` in the medium frame. An inertial observer times
//! the emission and reception of a probe with a transverse light clock and
//! assigns each event a time and a signed distance. Nothing here assumes a
//! Lorentz transformation; the boost comes out of the fit.

use std::io::{self, Write};

use nalgebra::{DMatrix, Matrix2, Vector2};

use crate::csv::fmt_f64;
use crate::error::{Error, Result};

/// A point in the medium's coordinate frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub t: f64,
    pub x: f64,
}

impl Event {
    pub const fn new(t: f64, x: f64) -> Self {
        Self { t, x }
    }
}

/// Inertial observer `x(t) = x0 + v t` with a signal-speed convention and a
/// simultaneity parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObserverFrame {
    x0: f64,
    v: f64,
    c_s: f64,
    epsilon: f64,
}

impl ObserverFrame {
    pub fn new(x0: f64, v: f64, c_s: f64, epsilon: f64) -> Result<Self> {
        if !(c_s.is_finite() && c_s > 0.0) {
            return Err(Error::Config(format!("signal speed must be positive, got {c_s}")));
        }
        if v.is_nan() || v.abs() >= c_s {
            return Err(Error::NotSubluminal { v, c_s });
        }
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::Config(format!(
                "epsilon must lie in (0, 1), got {epsilon}"
            )));
        }
        if !x0.is_finite() {
            return Err(Error::Config("observer origin must be finite".into()));
        }
        Ok(Self { x0, v, c_s, epsilon })
    }

    /// Einstein convention, `epsilon = 1/2`.
    pub fn einstein(x0: f64, v: f64, c_s: f64) -> Result<Self> {
        Self::new(x0, v, c_s, 0.5)
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn velocity(&self) -> f64 {
        self.v
    }

    pub fn c_s(&self) -> f64 {
        self.c_s
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

/// Ratio of a moving transverse light clock's period to its rest period.
///
/// The mirrors sit a distance `L` apart, perpendicular to the motion. In the
/// medium frame each leg of the round trip covers the hypotenuse
/// `sqrt(L^2 + (v tau)^2) = c_s tau`.
pub fn light_clock_gamma(v: f64, c_s: f64) -> Result<f64> {
    if !(c_s > 0.0 && v.abs() < c_s) {
        return Err(Error::NotSubluminal { v, c_s });
    }
    // lengths in units of c_s * rest half-period, so L = 1
    let beta = v / c_s;
    let mirror_gap = 1.0;
    // (1 - beta^2) tau^2 = L^2, factored to keep precision near beta = 1
    let leg = mirror_gap / ((1.0 - beta) * (1.0 + beta)).sqrt();
    let moving_period = 2.0 * leg;
    let rest_period = 2.0 * mirror_gap;
    Ok(moving_period / rest_period)
}

/// Radar assignment of one event by one observer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadarReading {
    /// Observer clock reading at emission.
    pub tau_emit: f64,
    /// Observer clock reading at reception.
    pub tau_receive: f64,
    /// `(1 - eps) tau_emit + eps tau_receive`.
    pub tau: f64,
    /// `c_s (tau_receive - tau_emit) / 2`, negative for events on the
    /// observer's left.
    pub xi: f64,
}

/// Emission and reception times (medium frame) of a probe bouncing off `e`.
fn round_trip(e: Event, obs: &ObserverFrame) -> (f64, f64, f64) {
    let c = obs.c_s;
    let v = obs.v;
    let dx = e.x - obs.x0;
    // the two light lines through `e` each meet the worldline once: one
    // before e.t (emission) and one after (reception)
    let along_plus = (c * e.t - dx) / (c - v);
    let along_minus = (c * e.t + dx) / (c + v);
    let side = if dx - v * e.t >= 0.0 { 1.0 } else { -1.0 };
    (along_plus.min(along_minus), along_plus.max(along_minus), side)
}

pub fn radar_coordinates(e: Event, obs: &ObserverFrame) -> Result<RadarReading> {
    let gamma = light_clock_gamma(obs.v, obs.c_s)?;
    let (t1, t2, side) = round_trip(e, obs);
    let tau_emit = t1 / gamma;
    let tau_receive = t2 / gamma;
    let tau = (1.0 - obs.epsilon) * tau_emit + obs.epsilon * tau_receive;
    let xi = side * obs.c_s * (tau_receive - tau_emit) / 2.0;
    Ok(RadarReading {
        tau_emit,
        tau_receive,
        tau,
        xi,
    })
}

/// Classical round-trip clock offset with outbound fraction `epsilon`.
pub fn cristian_offset(t_send: f64, t_server: f64, t_recv: f64, epsilon: f64) -> Result<f64> {
    if t_recv < t_send {
        return Err(Error::InvalidTimestamps { t_send, t_recv });
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Config(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    Ok(t_server - (t_send + epsilon * (t_recv - t_send)))
}

/// Affine map on `(c_s t, x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearMap2 {
    pub matrix: Matrix2<f64>,
    pub offset: Vector2<f64>,
    pub c_s: f64,
}

impl LinearMap2 {
    pub fn new(matrix: Matrix2<f64>, offset: Vector2<f64>, c_s: f64) -> Result<Self> {
        if matrix.determinant() == 0.0 {
            return Err(Error::Degenerate { rank: 1 });
        }
        Ok(Self { matrix, offset, c_s })
    }

    pub fn identity(c_s: f64) -> Self {
        Self {
            matrix: Matrix2::identity(),
            offset: Vector2::zeros(),
            c_s,
        }
    }

    pub fn apply(&self, e: Event) -> Event {
        let w = self.matrix * Vector2::new(self.c_s * e.t, e.x) + self.offset;
        Event::new(w[0] / self.c_s, w[1])
    }

    pub fn determinant(&self) -> f64 {
        self.matrix.determinant()
    }

    /// Velocity of a boost with this matrix, `-M01 / M00 * c_s`.
    pub fn boost_velocity(&self) -> f64 {
        -self.matrix[(0, 1)] / self.matrix[(0, 0)] * self.c_s
    }

    /// Largest entry of `|M^T eta M - eta|` with `eta = diag(1, -1)`; zero
    /// for maps that preserve the interval.
    pub fn interval_defect(&self) -> f64 {
        let eta = Matrix2::new(1.0, 0.0, 0.0, -1.0);
        (self.matrix.transpose() * eta * self.matrix - eta).abs().max()
    }

    /// The four matrix entries row-major, then the offset.
    pub fn entries(&self) -> [f64; 6] {
        let m = &self.matrix;
        [
            m[(0, 0)],
            m[(0, 1)],
            m[(1, 0)],
            m[(1, 1)],
            self.offset[0],
            self.offset[1],
        ]
    }
}

/// Boost with velocity `v`, acting on `(c_s t, x)`.
pub fn lorentz(v: f64, c_s: f64) -> Result<LinearMap2> {
    let gamma = light_clock_gamma(v, c_s)?;
    let gb = gamma * v / c_s;
    Ok(LinearMap2 {
        matrix: Matrix2::new(gamma, -gb, -gb, gamma),
        offset: Vector2::zeros(),
        c_s,
    })
}

/// `c_s^2 dt^2 - dx^2`.
pub fn interval(e1: Event, e2: Event, c_s: f64) -> f64 {
    let dt = c_s * (e2.t - e1.t);
    let dx = e2.x - e1.x;
    dt * dt - dx * dx
}

/// Least-squares affine map between two observers' radar charts.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameFit {
    pub map: LinearMap2,
    pub residual: f64,
    /// Per-event `(tau_A, xi_A, tau_B, xi_B)`.
    pub readings: Vec<[f64; 4]>,
}

impl FrameFit {
    /// `event_id,tA,xiA,tB,xiB` rows followed by the six map numbers.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "event_id,tA,xiA,tB,xiB")?;
        for (i, r) in self.readings.iter().enumerate() {
            writeln!(
                out,
                "{i},{},{},{},{}",
                fmt_f64(r[0]),
                fmt_f64(r[1]),
                fmt_f64(r[2]),
                fmt_f64(r[3])
            )?;
        }
        writeln!(out, "m00,m01,m10,m11,b0,b1")?;
        let row: Vec<String> = self.map.entries().iter().map(|&x| fmt_f64(x)).collect();
        writeln!(out, "{}", row.join(","))
    }
}

/// Fits the affine map taking A's radar chart `(c_s tau, xi)` to B's for the
/// same events.
pub fn fit_transformation(events: &[Event], a: &ObserverFrame, b: &ObserverFrame) -> Result<FrameFit> {
    if a.c_s != b.c_s {
        return Err(Error::Config(format!(
            "observers use different signal speeds ({} vs {})",
            a.c_s, b.c_s
        )));
    }
    let c = a.c_s;
    let readings = events
        .iter()
        .map(|&e| {
            let ra = radar_coordinates(e, a)?;
            let rb = radar_coordinates(e, b)?;
            Ok([ra.tau, ra.xi, rb.tau, rb.xi])
        })
        .collect::<Result<Vec<_>>>()?;

    let n = readings.len();
    if n < 3 {
        return Err(Error::Degenerate { rank: n });
    }
    let design = DMatrix::from_fn(n, 3, |i, j| match j {
        0 => c * readings[i][0],
        1 => readings[i][1],
        _ => 1.0,
    });
    let target = DMatrix::from_fn(n, 2, |i, j| match j {
        0 => c * readings[i][2],
        _ => readings[i][3],
    });

    // rank of the centred coordinates decides affine spanning
    let centred = {
        let mut m = design.columns(0, 2).into_owned();
        for j in 0..2 {
            let mean = m.column(j).mean();
            m.column_mut(j).add_scalar_mut(-mean);
        }
        m
    };
    let sv = centred.clone().svd(false, false).singular_values;
    let scale = sv.max().max(f64::MIN_POSITIVE);
    let rank = 1 + sv.iter().filter(|&&s| s > 1e-10 * scale).count();
    if rank < 3 || sv.max() == 0.0 {
        return Err(Error::Degenerate { rank });
    }

    let svd = design.clone().svd(true, true);
    let coef = svd
        .solve(&target, 1e-14)
        .map_err(|e| Error::Config(format!("least squares failed: {e}")))?;
    let fitted = &design * &coef;
    let residual = ((&fitted - &target).norm_squared() / (2 * n) as f64).sqrt();
    let matrix = Matrix2::new(coef[(0, 0)], coef[(1, 0)], coef[(0, 1)], coef[(1, 1)]);
    let offset = Vector2::new(coef[(2, 0)], coef[(2, 1)]);
    Ok(FrameFit {
        map: LinearMap2::new(matrix, offset, c)?,
        residual,
        readings,
    })
}
