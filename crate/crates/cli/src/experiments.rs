//! One runner per experiment. Each writes its CSV artifacts into the
//! configured directory and reports whether its built-in check held.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use hoplab::causal::{
    find_violation, preserves_order, sample_event, write_violations, CausalConfig, QuadraticPerturbation,
    Relation, SimilarityMap,
};
use hoplab::csv::fmt_f64;
use hoplab::frames::{fit_transformation, lorentz, Event, ObserverFrame};
use hoplab::propagation::{
    drive, estimate_front_speed, max_signal_speed, sound_speed, table1_schedule, DispersionCurve,
    ExcitationSchedule, FrontFit,
};
use hoplab::quantum::{
    borel_block_test, correlation, metre_in_ticks, permutation_distance, seconds_to_ticks,
    singlet_correlation, singlet_sample, ticks_to_seconds, write_correlations_csv, Permutation,
    PermutationMetric, SingletSource,
};
use hoplab::substrate::{CaHistory, CaRule, CaState, ChainState, CouplingProfile};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::config::{Experiment, RunConfig};
use crate::criteria;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error on {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

impl From<hoplab::Error> for RunError {
    fn from(e: hoplab::Error) -> Self {
        Self::Config(e.to_string())
    }
}

pub type RunResult<T> = Result<T, RunError>;

/// Result of a completed run.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    /// Whether the experiment's own check held.
    pub passed: bool,
    /// `(key, value)` pairs, also written to `summary.csv`.
    pub summary: Vec<(String, String)>,
    pub files: Vec<PathBuf>,
}

/// Writes CSV files that all start with the same `# experiment=.. seed=..` line.
struct Artifacts {
    dir: PathBuf,
    header: String,
    files: Vec<PathBuf>,
    summary: Vec<(String, String)>,
}

impl Artifacts {
    fn new(cfg: &RunConfig) -> RunResult<Self> {
        fs::create_dir_all(&cfg.output).map_err(|source| RunError::Io {
            path: cfg.output.clone(),
            source,
        })?;
        let mut header = format!("# experiment={} seed={}", cfg.experiment, cfg.seed);
        for (k, v) in &cfg.params {
            header.push_str(&format!(" {k}={v}"));
        }
        Ok(Self {
            dir: cfg.output.clone(),
            header,
            files: Vec::new(),
            summary: Vec::new(),
        })
    }

    fn csv(&mut self, name: &str, body: impl FnOnce(&mut Vec<u8>) -> io::Result<()>) -> RunResult<()> {
        let path = self.dir.join(name);
        let mut buf = Vec::new();
        writeln!(buf, "{}", self.header)
            .and_then(|_| body(&mut buf))
            .expect("writing to memory");
        fs::write(&path, buf).map_err(|source| RunError::Io {
            path: path.clone(),
            source,
        })?;
        self.files.push(path);
        Ok(())
    }

    fn put(&mut self, key: &str, value: impl Into<String>) {
        self.summary.push((key.to_string(), value.into()));
    }

    fn num(&mut self, key: &str, value: f64) {
        self.put(key, fmt_f64(value));
    }

    fn flag(&mut self, key: &str, value: bool) {
        self.put(key, u8::from(value).to_string());
    }

    fn finish(mut self, passed: bool) -> RunResult<Outcome> {
        let rows = std::mem::take(&mut self.summary);
        self.csv("summary.csv", |out| {
            writeln!(out, "key,value")?;
            for (k, v) in &rows {
                writeln!(out, "{k},{v}")?;
            }
            Ok(())
        })?;
        Ok(Outcome {
            passed,
            summary: rows,
            files: self.files,
        })
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn run(cfg: &RunConfig) -> RunResult<Outcome> {
    match cfg.experiment {
        Experiment::Dispersion => dispersion(cfg),
        Experiment::Harmonics => harmonics(cfg),
        Experiment::PhasedArray => phased_array(cfg),
        Experiment::Frames => frames(cfg),
        Experiment::CausalCheck => causal_check(cfg),
        Experiment::Bell => bell(cfg),
        Experiment::Clock => clock(cfg),
        Experiment::PermDist => perm_dist(cfg),
        Experiment::Ca => ca(cfg),
        Experiment::Acceptance => acceptance(cfg),
    }
}

fn dispersion(cfg: &RunConfig) -> RunResult<Outcome> {
    let hops = CouplingProfile::parse_hops(cfg.text("hops").unwrap_or("1:1.0"))?;
    let profile = CouplingProfile::new(hops, cfg.get_or("mass", 1.0), cfg.get_or("spacing", 1.0))?;
    let curve = DispersionCurve::sample(&profile, cfg.get_or("points", 256));
    let mut out = Artifacts::new(cfg)?;
    out.csv("dispersion.csv", |w| curve.write_csv(w))?;
    out.num("sound_speed", sound_speed(&profile));
    out.num("max_signal_speed", max_signal_speed(&profile));
    out.num("max_omega", profile.omega_max());
    out.num("max_stable_dt", profile.max_stable_dt());
    out.finish(true)
}

/// Kicks the middle site of an `n_sites` ring at rest and fits the front
/// speed. The run lasts until the fastest signal covers 40% of the ring.
pub fn kick_front(
    profile: &CouplingProfile,
    n_sites: usize,
    ticks_per_unit: usize,
    threshold_fraction: f64,
) -> hoplab::Result<FrontFit> {
    let mut chain = ChainState::new(n_sites, profile.clone())?;
    let schedule = ExcitationSchedule::from_entries(vec![(0, n_sites / 2 + 1)], n_sites)?;
    let ticks = (0.4 * n_sites as f64 * profile.spacing() / max_signal_speed(profile)).floor() as u64;
    let history = drive(&mut chain, &schedule, 1.0, ticks_per_unit, ticks.max(1))?;
    estimate_front_speed(&history, threshold_fraction * history.max_abs_displacement())
}

fn harmonics(cfg: &RunConfig) -> RunResult<Outcome> {
    let hop: usize = cfg.get_or("hop", 1);
    let stiffness = cfg.get_or("stiffness", 1.0);
    let tolerance = cfg.get_or("tolerance", 0.05);
    let profile = CouplingProfile::single(hop, stiffness)?;
    let baseline = max_signal_speed(&CouplingProfile::single(1, stiffness)?);
    let fit = kick_front(
        &profile,
        cfg.get_or("n_sites", 4000),
        cfg.get_or("ticks_per_unit", 100),
        cfg.get_or(
            "threshold_fraction",
            hoplab::propagation::DEFAULT_THRESHOLD_FRACTION,
        ),
    )?;
    let target = hop as f64 * baseline;
    let rel_error = (fit.speed / target - 1.0).abs();
    let passed = rel_error <= tolerance;

    let mut out = Artifacts::new(cfg)?;
    out.csv("front.csv", |w| fit.write_csv(w))?;
    out.put("hop", hop.to_string());
    out.num("baseline_speed", baseline);
    out.num("analytic_speed", max_signal_speed(&profile));
    out.num("target_speed", target);
    out.num("front_speed", fit.speed);
    out.num("relative_error", rel_error);
    out.num("fit_residual", fit.residual);
    out.put("source_site", fit.source.to_string());
    out.put("sites_fitted", fit.fitted.to_string());
    out.flag("pass", passed);
    out.finish(passed)
}

fn phased_array(cfg: &RunConfig) -> RunResult<Outcome> {
    let c_mult: usize = cfg.get_or("c_mult", 1);
    let n_sites: usize = cfg.get_or("n_sites", 7);
    let max_tick: u64 = cfg.get_or("max_tick", 6);
    let schedule = table1_schedule(c_mult, n_sites, max_tick)?;
    let mut out = Artifacts::new(cfg)?;
    out.csv("schedule.csv", |w| schedule.write_csv(w))?;
    out.csv("pattern.csv", |w| {
        let cols: Vec<String> = (1..=n_sites).map(|s| format!("site_{s}")).collect();
        writeln!(w, "tick,{}", cols.join(","))?;
        for (t, row) in schedule.to_rows().iter().enumerate() {
            let cells: Vec<String> = row.iter().map(u8::to_string).collect();
            writeln!(w, "{t},{}", cells.join(","))?;
        }
        Ok(())
    })?;
    out.put("c_mult", c_mult.to_string());
    out.put("entries", schedule.entries().len().to_string());
    out.num("locus_speed", schedule.locus_speed());

    if let Some(hop) = cfg.get::<usize>("hop") {
        let profile = CouplingProfile::single(hop, 1.0)?;
        let chain_sites = cfg.get_or("chain_sites", 2000usize.max(2 * n_sites));
        let mut chain = ChainState::new(chain_sites, profile.clone())?;
        let history = drive(
            &mut chain,
            &schedule,
            cfg.get_or("impulse", 1.0),
            cfg.get_or("ticks_per_unit", 100),
            cfg.get_or("n_ticks", max_tick),
        )?;
        let fit = estimate_front_speed(&history, hoplab::propagation::default_threshold(&history))?;
        out.csv("front.csv", |w| fit.write_csv(w))?;
        out.put("hop", hop.to_string());
        out.num("max_signal_speed", max_signal_speed(&profile));
        out.num("front_speed", fit.speed);
        out.num("front_over_locus", fit.speed / schedule.locus_speed());
    }
    out.finish(true)
}

/// Largest entrywise difference, relative to `max(|expected|, 1)`.
pub fn max_entry_diff(a: [f64; 6], b: [f64; 6]) -> f64 {
    a.iter()
        .zip(&b)
        .map(|(x, y)| (x - y).abs() / y.abs().max(1.0))
        .fold(0.0, f64::max)
}

pub fn random_events(seed: u64, n: usize, c_s: f64) -> Vec<Event> {
    let mut rng = rng(seed);
    (0..n).map(|_| sample_event(&mut rng, c_s)).collect()
}

fn frames(cfg: &RunConfig) -> RunResult<Outcome> {
    let c_s = cfg.get_or("c_s", 1.0);
    let epsilon = cfg.get_or("epsilon", 0.5);
    let va = cfg.get_or("vA", 0.0);
    let vb: f64 = cfg.get_or("vB", 0.0);
    let a = ObserverFrame::new(0.0, va, c_s, epsilon)?;
    let b = ObserverFrame::new(0.0, vb, c_s, epsilon)?;
    let fit = fit_transformation(&random_events(cfg.seed, cfg.get_or("n_events", 20), c_s), &a, &b)?;
    let w = (vb - va) / (1.0 - va * vb / (c_s * c_s));
    let expected = lorentz(w, c_s)?;
    let diff = max_entry_diff(fit.map.entries(), expected.entries());
    let einstein = epsilon == 0.5;
    let passed = !einstein || diff <= 1e-6;

    let mut out = Artifacts::new(cfg)?;
    out.csv("frames.csv", |wr| fit.write_csv(wr))?;
    out.num("relative_velocity", fit.map.boost_velocity());
    out.num("composed_velocity", w);
    out.num("max_entry_diff", diff);
    out.num("interval_defect", fit.map.interval_defect());
    out.num("fit_residual", fit.residual);
    out.flag("pass", passed);
    out.finish(passed)
}

fn causal_check(cfg: &RunConfig) -> RunResult<Outcome> {
    let c_s = cfg.get_or("c_s", 1.0);
    let relation = match cfg.text("relation").unwrap_or("chronological") {
        "chronological" => Relation::Chronological,
        "causal" => Relation::Causal,
        other => {
            return Err(RunError::Config(format!(
                "relation `{other}` is not chronological or causal"
            )))
        }
    };
    let rel_cfg = CausalConfig::new(c_s, relation)?;
    let name = cfg.text("map").unwrap_or_default().to_string();
    let amplitude = cfg.get_or("amplitude", 0.1);
    let map: Box<dyn Fn(Event) -> Event> = match name.as_str() {
        "similarity" => {
            let m = SimilarityMap::new(
                cfg.get_or("v", 0.0),
                (cfg.get_or("shift_t", 0.0), cfg.get_or("shift_x", 0.0)),
                cfg.get_or("lambda", 1.0),
                c_s,
            )?;
            Box::new(move |e| m.apply(e))
        }
        "quadratic" => {
            let m = QuadraticPerturbation::random(&mut rng(cfg.seed ^ 0x9e37_79b9), amplitude, c_s);
            Box::new(move |e| m.apply(e))
        }
        "time-shear" => {
            let m = QuadraticPerturbation::time_shear(amplitude, c_s);
            Box::new(move |e| m.apply(e))
        }
        "anisotropic" => {
            let s = cfg.get_or("scale_x", 2.0);
            Box::new(move |e| Event::new(e.t, s * e.x))
        }
        other => {
            return Err(RunError::Config(format!(
                "map `{other}` is not one of similarity, quadratic, time-shear, anisotropic"
            )))
        }
    };

    let events = random_events(cfg.seed, cfg.get_or("n_events", 200), c_s);
    let verdict = preserves_order(&map, &events, &rel_cfg)?;
    let search = find_violation(
        &map,
        &rel_cfg,
        cfg.get_or("n_trials", 10_000),
        cfg.seed.wrapping_add(1),
    )?;
    let mut rows = verdict.violations.clone();
    if rows.is_empty() {
        rows.extend(search.map(|(_, v)| v));
    }
    let preserved = rows.is_empty();
    let passed = name != "similarity" || preserved;

    let mut out = Artifacts::new(cfg)?;
    out.csv("violations.csv", |w| write_violations(w, &rows))?;
    out.put("map", name);
    out.put("pairs_checked", verdict.pairs_checked.to_string());
    out.put("pair_violations", verdict.violations.len().to_string());
    out.put(
        "search_trial",
        search.map_or("none".to_string(), |(t, _)| t.to_string()),
    );
    out.flag("order_preserved", preserved);
    out.flag("pass", passed);
    out.finish(passed)
}

fn bell(cfg: &RunConfig) -> RunResult<Outcome> {
    let theta_a: f64 = cfg.get_or("theta_a", 0.0);
    let theta_b: f64 = cfg.get_or("theta_b", 0.0);
    let n: u64 = cfg.get_or("n", 100_000);
    let counts = singlet_sample(theta_a, theta_b, n, cfg.seed)?;
    let corr = correlation(&counts)?;
    let expected = singlet_correlation(theta_a, theta_b);
    let sigma = ((1.0 - expected * expected).max(0.0) / n as f64).sqrt();
    let marginal_bound = 4.0 * (0.25 / n as f64).sqrt();
    let e_ok = (corr.value - expected).abs() <= 4.0 * sigma + 1e-12;
    let m_ok = [counts.marginal_a(), counts.marginal_b()]
        .iter()
        .all(|m| (m - 0.5).abs() <= marginal_bound);

    let mut out = Artifacts::new(cfg)?;
    out.csv("correlations.csv", |w| {
        write_correlations_csv(w, &[(counts, corr)])
    })?;
    out.num("E", corr.value);
    out.num("expected", expected);
    out.num("sigma", sigma);
    out.num("marginal_a", counts.marginal_a());
    out.num("marginal_b", counts.marginal_b());
    let mut borel_ok = true;
    if let Some(max_k) = cfg.get::<usize>("max_k") {
        let bits: Vec<bool> = SingletSource::new(theta_a, theta_b, cfg.seed)
            .take(n as usize)
            .map(|(a, _)| a)
            .collect();
        let report = borel_block_test(&bits, max_k)?;
        out.csv("borel.csv", |w| report.write_csv(w))?;
        borel_ok = report.all_pass();
        out.flag("borel_pass", borel_ok);
    }
    let passed = e_ok && m_ok && borel_ok;
    out.flag("pass", passed);
    out.finish(passed)
}

fn clock(cfg: &RunConfig) -> RunResult<Outcome> {
    let ticks = i64::try_from(cfg.get_or("ticks", hoplab::quantum::TICKS_PER_SECOND as u64))
        .map_err(|_| RunError::Config("ticks does not fit a signed 64-bit integer".into()))?;
    let seconds: Ratio<i64> = cfg.get_or("seconds", Ratio::from_integer(1));
    let as_seconds = ticks_to_seconds(ticks)?;
    let round_trip = seconds_to_ticks(as_seconds)?;
    let metre = metre_in_ticks();
    let passed = round_trip == ticks;

    let mut out = Artifacts::new(cfg)?;
    out.put("ticks", ticks.to_string());
    out.put("ticks_in_seconds", as_seconds.to_string());
    out.put("seconds", seconds.to_string());
    out.put("seconds_in_ticks", seconds_to_ticks(seconds)?.to_string());
    out.put("metre_in_ticks_exact", metre.exact.to_string());
    out.num("metre_in_ticks", metre.approx);
    out.put("metre_in_ticks_4dp", format!("{:.4}", metre.approx));
    out.put("metre_in_ticks_rounded", metre.rounded.to_string());
    out.flag("round_trip", passed);
    out.finish(passed)
}

fn parse_perm(text: &str) -> RunResult<Permutation> {
    let image = text
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| RunError::Config(format!("bad permutation entry `{s}`")))
        })
        .collect::<RunResult<Vec<_>>>()?;
    Ok(Permutation::new(image)?)
}

fn perm_dist(cfg: &RunConfig) -> RunResult<Outcome> {
    let p = parse_perm(cfg.text("p").unwrap_or_default())?;
    let q = parse_perm(cfg.text("q").unwrap_or_default())?;
    let all = [
        ("cayley", PermutationMetric::Cayley),
        ("kendall", PermutationMetric::KendallTau),
        ("hamming", PermutationMetric::Hamming),
    ];
    let wanted = cfg.text("metric").unwrap_or("all");
    let metrics: Vec<_> = all
        .iter()
        .filter(|(n, _)| wanted == "all" || wanted == *n)
        .collect();
    if metrics.is_empty() {
        return Err(RunError::Config(format!(
            "metric `{wanted}` is not cayley, kendall, hamming or all"
        )));
    }
    let rows = metrics
        .iter()
        .map(|(name, m)| Ok((*name, permutation_distance(&p, &q, *m)?)))
        .collect::<RunResult<Vec<_>>>()?;

    let mut out = Artifacts::new(cfg)?;
    out.csv("distances.csv", |w| {
        writeln!(w, "metric,distance")?;
        rows.iter().try_for_each(|(name, d)| writeln!(w, "{name},{d}"))
    })?;
    for (name, d) in &rows {
        out.put(name, d.to_string());
    }
    out.finish(true)
}

fn ca_rule(spec: &str, radius: usize) -> RunResult<CaRule> {
    Ok(match spec {
        "parity" => CaRule::parity(radius)?,
        "or" => CaRule::or(radius)?,
        code => {
            let code: u64 = code
                .parse()
                .map_err(|_| RunError::Config(format!("rule `{code}` is not parity, or, or a table code")))?;
            let size = 1usize << (2 * radius + 1);
            if size > 64 {
                return Err(RunError::Config(format!(
                    "table codes need radius <= 2, got {radius}"
                )));
            }
            if size < 64 && code >> size != 0 {
                return Err(RunError::Config(format!(
                    "rule code {code} has more than {size} bits"
                )));
            }
            CaRule::from_table(radius, (0..size).map(|i| code >> i & 1 == 1).collect())?
        }
    })
}

fn ca(cfg: &RunConfig) -> RunResult<Outcome> {
    let width: usize = cfg.get_or("width", 64);
    let radius: usize = cfg.get_or("radius", 1);
    let steps: usize = cfg.get_or("steps", 32);
    let rule = ca_rule(cfg.text("rule").unwrap_or("parity"), radius)?;
    let mut state = if cfg.get_or("random_seed_layer", false) {
        let mut r = rng(cfg.seed);
        let cur = (0..width).map(|_| r.random()).collect();
        let prev = (0..width).map(|_| r.random()).collect();
        CaState::with_layers(cur, prev, rule)?
    } else {
        CaState::single_seed(width, cfg.get_or("seed_site", width / 2), rule)?
    };
    let start = state.clone();
    let history = CaHistory::record(&mut state, steps);
    let support = state.support().len();
    for _ in 0..steps {
        state.step_back();
    }
    let reversible = state == start;

    let mut out = Artifacts::new(cfg)?;
    out.csv("ca.csv", |w| history.write_csv(w))?;
    out.put("final_support", support.to_string());
    out.flag("reversible", reversible);
    out.finish(reversible)
}

fn acceptance(cfg: &RunConfig) -> RunResult<Outcome> {
    let id: usize = cfg.get_or("criterion", 0);
    let report = criteria::evaluate(id, &cfg.output)?;
    let mut out = Artifacts::new(cfg)?;
    out.csv("criterion.csv", |w| report.write_csv(w))?;
    out.put("criterion", id.to_string());
    out.put("title", report.title.to_string());
    out.flag("pass", report.passed());
    let passed = report.passed();
    out.finish(passed)
}

/// Two identical runs of `cfg` in sibling directories under `scratch`;
/// returns whether every artifact matched byte for byte.
pub fn runs_identically(cfg: &RunConfig, scratch: &Path) -> RunResult<bool> {
    let mut outputs = Vec::new();
    for side in ["a", "b"] {
        let mut c = cfg.clone();
        c.output = scratch.join(side).join(cfg.experiment.name());
        let outcome = run(&c)?;
        let mut files = Vec::new();
        for path in &outcome.files {
            let bytes = fs::read(path).map_err(|source| RunError::Io {
                path: path.clone(),
                source,
            })?;
            files.push((path.file_name().map(|n| n.to_os_string()), bytes));
        }
        outputs.push(files);
    }
    Ok(!outputs[0].is_empty() && outputs[0] == outputs[1])
}
