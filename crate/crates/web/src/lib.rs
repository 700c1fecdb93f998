//! WebAssembly bindings for the browser demo: dispersion curves, a kicked
//! chain that can be stepped frame by frame, and radar coordinate grids of
//! a moving observer.
//!
//! Numeric results cross the boundary as flat `Float64Array`s.

use hoplab::frames::{fit_transformation, lorentz, radar_coordinates, Event, ObserverFrame};
use hoplab::propagation::{max_signal_speed, DispersionCurve};
use hoplab::substrate::{ChainState, CouplingProfile};
use wasm_bindgen::prelude::*;

fn js(e: hoplab::Error) -> JsError {
    JsError::new(&e.to_string())
}

/// Unit-mass, unit-spacing profile from `d:kappa` pairs such as `1:1,2:0.5`.
pub fn profile_from(hops: &str) -> hoplab::Result<CouplingProfile> {
    CouplingProfile::new(CouplingProfile::parse_hops(hops)?, 1.0, 1.0)
}

/// Rows `k, omega, v_g` flattened, over `[0, pi]`.
pub fn dispersion_rows(hops: &str, points: usize) -> hoplab::Result<Vec<f64>> {
    let curve = DispersionCurve::sample(&profile_from(hops)?, points);
    Ok((0..curve.k.len())
        .flat_map(|i| [curve.k[i], curve.omega[i], curve.group_velocity[i]])
        .collect())
}

#[wasm_bindgen]
pub fn dispersion(hops: &str, points: usize) -> Result<Vec<f64>, JsError> {
    dispersion_rows(hops, points).map_err(js)
}

#[wasm_bindgen(js_name = maxSignalSpeed)]
pub fn max_speed(hops: &str) -> Result<f64, JsError> {
    profile_from(hops).map(|p| max_signal_speed(&p)).map_err(js)
}

/// A ring chain advanced in fixed steps at half the stability limit.
#[wasm_bindgen]
pub struct ChainDemo {
    state: ChainState,
    dt: f64,
}

impl ChainDemo {
    pub fn build(sites: usize, hops: &str) -> hoplab::Result<Self> {
        let state = ChainState::new(sites, profile_from(hops)?)?;
        let dt = 0.5 * state.dt_limit();
        Ok(Self { state, dt })
    }
}

#[wasm_bindgen]
impl ChainDemo {
    #[wasm_bindgen(constructor)]
    pub fn new(sites: usize, hops: &str) -> Result<ChainDemo, JsError> {
        Self::build(sites, hops).map_err(js)
    }

    /// Adds `impulse` to the velocity of `site`.
    pub fn kick(&mut self, site: usize, impulse: f64) -> Result<(), JsError> {
        self.state.excite(site, impulse).map_err(js)
    }

    /// Integrates forward by `duration` (rounded up to whole steps).
    pub fn advance(&mut self, duration: f64) -> Result<(), JsError> {
        let steps = (duration.max(0.0) / self.dt).ceil() as usize;
        self.state.run(self.dt, steps).map_err(js)
    }

    pub fn displacements(&self) -> Vec<f64> {
        self.state.displacements().to_vec()
    }

    pub fn time(&self) -> f64 {
        self.state.time()
    }

    pub fn energy(&self) -> f64 {
        self.state.total_energy()
    }

    #[wasm_bindgen(js_name = maxSignalSpeed)]
    pub fn max_signal_speed(&self) -> f64 {
        max_signal_speed(self.state.profile())
    }
}

/// Lab-frame grid events `(t, x)` for `t, x` in `[-1, 1]`, `lines` per axis
/// and `samples` points along each line, flattened as
/// `t, x, c tau, xi` per event as read by an observer at velocity `v`.
pub fn radar_rows(v: f64, c_s: f64, epsilon: f64, lines: usize, samples: usize) -> hoplab::Result<Vec<f64>> {
    let obs = ObserverFrame::new(0.0, v, c_s, epsilon)?;
    let lines = lines.max(2);
    let samples = samples.max(2);
    let at = |i: usize, n: usize| -1.0 + 2.0 * i as f64 / (n - 1) as f64;
    let mut out = Vec::with_capacity(8 * lines * samples);
    for i in 0..lines {
        for j in 0..samples {
            for e in [Event::new(at(i, lines) / c_s, at(j, samples)), Event::new(at(j, samples) / c_s, at(i, lines))] {
                let r = radar_coordinates(e, &obs)?;
                out.extend([c_s * e.t, e.x, c_s * r.tau, r.xi]);
            }
        }
    }
    Ok(out)
}

#[wasm_bindgen(js_name = radarGrid)]
pub fn radar_grid(v: f64, c_s: f64, epsilon: f64, lines: usize, samples: usize) -> Result<Vec<f64>, JsError> {
    radar_rows(v, c_s, epsilon, lines, samples).map_err(js)
}

/// Least-squares map from the rest observer's radar chart to the moving
/// one's: `m00, m01, m10, m11, b0, b1, interval defect, boost m00, boost m01`.
pub fn frame_fit(v: f64, c_s: f64, epsilon: f64) -> hoplab::Result<Vec<f64>> {
    let a = ObserverFrame::new(0.0, 0.0, c_s, epsilon)?;
    let b = ObserverFrame::new(0.0, v, c_s, epsilon)?;
    let events: Vec<Event> = (0..25)
        .map(|i| Event::new(((i % 5) as f64 - 2.0) / (2.0 * c_s), (i / 5) as f64 / 2.0 - 1.0))
        .collect();
    let fit = fit_transformation(&events, &a, &b)?;
    let boost = lorentz(v, c_s)?.entries();
    let mut out = fit.map.entries().to_vec();
    out.extend([fit.map.interval_defect(), boost[0], boost[1]]);
    Ok(out)
}

#[wasm_bindgen(js_name = frameFit)]
pub fn frame_fit_js(v: f64, c_s: f64, epsilon: f64) -> Result<Vec<f64>, JsError> {
    frame_fit(v, c_s, epsilon).map_err(js)
}
