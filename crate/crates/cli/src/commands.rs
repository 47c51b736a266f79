//! Subcommand implementations. Each writes its tables and a manifest into
//! the output directory and returns the manifest.

use std::path::Path;
use std::time::Instant;

use fkpp::analysis::{
    build_scaled_sub_with, build_selfsimilar_sub, classify_by_separatrix, porous_supersolution_check,
    verify_scaled_sub, Prediction, ScaledGrid, ScaledVariant, SelfSimilarGrid,
};
use fkpp::pde::sample;
use fkpp::stationary::{build_profile, Support};
use fkpp::{Config, Field, Params, Separable};
use rayon::prelude::*;
use serde_json::json;

use crate::config::{Construction, FileConfig, InitialCondition};
use crate::error::CliError;
use crate::output::{fmt, read_table, thin, write_table, RunManifest, MANIFEST_HISTORY};

/// Excess of the full solution over the diffusion-only one tolerated by
/// the porous check.
pub const POROUS_TOL: f64 = 1e-10;

pub struct Context<'a> {
    pub cfg: &'a FileConfig,
    pub doc: &'a serde_json::Value,
    pub out: &'a Path,
    pub workers: Option<usize>,
}

impl Context<'_> {
    fn manifest(&self, command: &str, params: Option<Params>) -> RunManifest {
        RunManifest::new(command, self.doc.clone(), params)
    }

    fn finish(&self, mut manifest: RunManifest, start: Instant) -> Result<RunManifest, CliError> {
        manifest.wall_clock_seconds = start.elapsed().as_secs_f64();
        manifest.write(self.out)?;
        Ok(manifest)
    }
}

pub fn stationary(ctx: &Context) -> Result<RunManifest, CliError> {
    let start = Instant::now();
    let s = &ctx.cfg.stationary;
    let params = ctx.cfg.model.params()?;
    let profile = build_profile(params, s.center)?;
    let x_min = s.x_min.unwrap_or(-ctx.cfg.grid.half_length);
    let x_max = s.x_max.unwrap_or(ctx.cfg.grid.half_length);
    if !(x_min < x_max) {
        return Err(CliError::Params(format!("empty tabulation range [{x_min}, {x_max}]")));
    }
    let rows = profile.tabulate(x_min, x_max, s.points)?;
    write_table(&ctx.out.join("stationary.csv"), ["x", "g", "E"], &rows)?;

    let width = match profile.support {
        Support::Compact { half_width } => Some(2.0 * half_width),
        Support::FullLine => None,
    };
    println!("k1 = {}", fmt(profile.k1));
    println!("k2 = {}", fmt(profile.k2));
    println!("f_max = {}", fmt(profile.f_max));
    match width {
        Some(w) => println!("support width = {}", fmt(w)),
        None => println!("support width = infinite"),
    }

    let mut manifest = ctx.manifest("stationary", Some(params));
    manifest.files.push("stationary.csv".into());
    manifest.summary = json!({
        "k1": profile.k1,
        "k2": profile.k2,
        "f_max": profile.f_max,
        "support": if width.is_some() { "compact" } else { "infinite" },
        "support_width": width,
        "closed_form": profile.closed_form,
        "max_e": rows.iter().map(|r| r[2]).fold(0.0, f64::max),
    });
    ctx.finish(manifest, start)
}

pub fn exact(ctx: &Context) -> Result<RunManifest, CliError> {
    let start = Instant::now();
    let e = &ctx.cfg.exact;
    let sol = Separable::new(e.family, e.m, e.constant)?;
    if e.points < 2 {
        return Err(CliError::Params("exact tabulation needs at least two points".into()));
    }
    let half = sol.support_half_width();
    let half = if half.is_finite() { half } else { ctx.cfg.grid.half_length };
    let dx = 2.0 * half / (e.points - 1) as f64;
    let mut rows = Vec::with_capacity(e.points * e.times.len());
    for &t in &e.times {
        for i in 0..e.points {
            let x = -half + dx * i as f64;
            rows.push([t, x, sol.value(x, t)?]);
        }
    }
    write_table(&ctx.out.join("exact.csv"), ["t", "x", "u"], &rows)?;

    let behavior = sol.behavior();
    println!("family = {}", serde_json::to_value(e.family)?.as_str().unwrap_or_default());
    match sol.event_time() {
        Some(t) => println!("event time = {}", fmt(t)),
        None => println!("event time = none"),
    }

    let mut manifest = ctx.manifest("exact", Some(sol.params()));
    manifest.event_time = sol.event_time();
    manifest.files.push("exact.csv".into());
    manifest.summary = json!({
        "solution": sol,
        "behavior": behavior,
        "support_half_width": sol.support_half_width(),
    });
    ctx.finish(manifest, start)
}

pub fn simulate(ctx: &Context) -> Result<RunManifest, CliError> {
    let start = Instant::now();
    let sim = ctx.cfg.sim_config();
    let (params, u0) = initial_data(ctx.cfg, &sim)?;
    let prediction = build_profile(params, 0.0).ok().map(|e| classify_by_separatrix(&u0, &e)).transpose()?;
    let result = fkpp::pde::run(params, &u0, &sim)?;

    let mut manifest = ctx.manifest("simulate", Some(params));
    let mut snapshots = Vec::new();
    for (k, snap) in result.snapshots.iter().enumerate() {
        let name = format!("snapshot_{k:03}.csv");
        write_field(&ctx.out.join(&name), snap)?;
        snapshots.push(json!({ "file": name, "t": snap.t }));
        manifest.files.push(name);
    }
    write_field(&ctx.out.join("final.csv"), &result.final_field)?;
    manifest.files.push("final.csv".into());
    let history: Vec<[f64; 3]> = result.history.iter().map(|s| [s.t, s.sup_norm, s.dt]).collect();
    write_table(&ctx.out.join("history.csv"), ["t", "sup_norm", "dt"], &history)?;
    manifest.files.push("history.csv".into());

    let pairs: Vec<(f64, f64)> = result
        .history
        .iter()
        .filter(|s| s.t.is_finite() && s.sup_norm.is_finite())
        .map(|s| (s.t, s.sup_norm))
        .collect();
    manifest.norm_history = thin(&pairs, MANIFEST_HISTORY);
    manifest.outcome = Some(result.outcome);
    manifest.event_time = result.outcome.event_time();
    if matches!(result.outcome, fkpp::model::Outcome::Growth | fkpp::model::Outcome::Vanishing) {
        manifest.notes.push("growth and vanishing are inferred from the sup-norm trend over the horizon".into());
    }
    manifest.summary = json!({
        "stats": result.stats,
        "snapshots": snapshots,
        "prediction": prediction,
        "agrees_with_prediction": prediction.map(|p| p.agrees_with(&result.outcome)),
    });

    println!("outcome = {}", result.outcome.label());
    match result.outcome.event_time() {
        Some(t) => println!("event time = {}", fmt(t)),
        None => println!("t_end = {}", fmt(result.final_field.t)),
    }
    println!("steps = {}", result.stats.steps);
    ctx.finish(manifest, start)
}

pub fn verify(ctx: &Context) -> Result<RunManifest, CliError> {
    match ctx.cfg.verify.construction {
        Construction::Selfsimilar => verify_selfsimilar(ctx),
        Construction::Scaled => verify_scaled(ctx),
        Construction::Porous => verify_porous(ctx),
    }
}

fn verify_selfsimilar(ctx: &Context) -> Result<RunManifest, CliError> {
    let start = Instant::now();
    let v = &ctx.cfg.verify;
    let params = ctx.cfg.model.params()?;
    let defaults = SelfSimilarGrid::default();
    let grid = SelfSimilarGrid {
        nx: v.samples_x.unwrap_or(defaults.nx),
        nt: v.samples_t.unwrap_or(defaults.nt),
        refine: true,
    };
    let mut manifest = ctx.manifest("verify", Some(params));
    match build_selfsimilar_sub(params, &grid) {
        Ok((sub, report)) => {
            println!("certified = true");
            println!("A = {}", fmt(sub.amplitude));
            println!("b = {}", fmt(sub.b));
            println!("T = {}", fmt(sub.big_t));
            println!("min inequality = {}", fmt(report.minima[4]));
            manifest.summary = json!({ "construction": "selfsimilar", "certified": true, "subsolution": sub, "report": report });
            ctx.finish(manifest, start)
        }
        Err(fkpp::Error::Certification(msg)) => {
            manifest.summary = json!({ "construction": "selfsimilar", "certified": false, "reason": msg });
            ctx.finish(manifest, start)?;
            Err(CliError::Certification(msg))
        }
        Err(e) => Err(e.into()),
    }
}

fn verify_scaled(ctx: &Context) -> Result<RunManifest, CliError> {
    let start = Instant::now();
    let v = &ctx.cfg.verify;
    let sim = ctx.cfg.sim_config();
    let (params, u0) = initial_data(ctx.cfg, &sim)?;
    let profile = build_profile(params, 0.0)?;
    let mut manifest = ctx.manifest("verify", Some(params));
    let variant = match v.variant {
        Some(variant) => variant,
        None => match classify_by_separatrix(&u0, &profile)? {
            Prediction::BlowUp | Prediction::Growth => ScaledVariant::select(&params, true),
            Prediction::Extinction | Prediction::Vanishing => ScaledVariant::select(&params, false),
            Prediction::OutsideHypotheses => {
                return Err(CliError::Params("parameters outside the separatrix hypotheses".into()))
            }
            Prediction::NotComparable => {
                let msg = "initial data is neither strictly above nor strictly below E".to_string();
                manifest.summary = json!({ "construction": "scaled", "certified": false, "reason": msg });
                ctx.finish(manifest, start)?;
                return Err(CliError::Certification(msg));
            }
        },
    };
    let alpha = match v.alpha {
        Some(a) => a,
        None => variant.default_alpha(&params)?,
    };
    let defaults = ScaledGrid::default();
    let grid = ScaledGrid { nx: v.samples_x.unwrap_or(defaults.nx), nt: v.samples_t.unwrap_or(defaults.nt), ..defaults };
    let sub = match build_scaled_sub_with(&profile, &u0, variant, alpha, &grid) {
        Ok(sub) => sub,
        Err(fkpp::Error::Certification(msg)) => {
            manifest.summary = json!({ "construction": "scaled", "variant": variant, "certified": false, "reason": msg });
            ctx.finish(manifest, start)?;
            return Err(CliError::Certification(msg));
        }
        Err(e) => return Err(e.into()),
    };
    let report = verify_scaled_sub(&sub, &grid)?;
    println!("variant = {}", serde_json::to_value(variant)?.as_str().unwrap_or_default());
    println!("a = {}", fmt(sub.a_speed));
    println!("min defect = {}", fmt(report.min_defect));
    println!("certified = {}", report.certified);
    manifest.summary = json!({ "construction": "scaled", "certified": report.certified, "comparison": sub, "report": report });
    let manifest = ctx.finish(manifest, start)?;
    if report.certified {
        Ok(manifest)
    } else {
        Err(CliError::Certification(format!("defect {} at x = {}, t = {}", report.min_defect, report.worst_x, report.worst_t)))
    }
}

fn verify_porous(ctx: &Context) -> Result<RunManifest, CliError> {
    let start = Instant::now();
    let sim = ctx.cfg.sim_config();
    let (params, u0) = initial_data(ctx.cfg, &sim)?;
    let mut manifest = ctx.manifest("verify", Some(params));
    let report = match porous_supersolution_check(params, &u0, &sim) {
        Ok(r) => r,
        Err(fkpp::Error::InitialData(msg)) => {
            manifest.summary = json!({ "construction": "porous", "certified": false, "reason": msg });
            ctx.finish(manifest, start)?;
            return Err(CliError::Certification(msg));
        }
        Err(e) => return Err(e.into()),
    };
    let certified = report.max_excess <= POROUS_TOL && report.decays_monotonically;
    println!("max excess = {}", fmt(report.max_excess));
    println!("monotone decay = {}", report.decays_monotonically);
    println!("certified = {certified}");
    manifest.norm_history = thin(&report.full_history, MANIFEST_HISTORY);
    manifest.summary = json!({
        "construction": "porous",
        "certified": certified,
        "max_excess": report.max_excess,
        "decays_monotonically": report.decays_monotonically,
        "t_end": report.t_end,
        "steps": report.steps,
        "diffusion_history": thin(&report.diffusion_history, MANIFEST_HISTORY),
    });
    let manifest = ctx.finish(manifest, start)?;
    if certified {
        Ok(manifest)
    } else {
        Err(CliError::Certification(format!("excess {} over the diffusion-only solution", report.max_excess)))
    }
}

struct SweepRow {
    params: [f64; 3],
    multiplier: f64,
    result: Result<(fkpp::model::Outcome<f64>, f64, f64, usize), String>,
}

pub fn sweep(ctx: &Context) -> Result<RunManifest, CliError> {
    let start = Instant::now();
    let s = &ctx.cfg.sweep;
    let model = ctx.cfg.model;
    let sets: Vec<[f64; 3]> = if s.params.is_empty() { vec![[model.m, model.p, model.q]] } else { s.params.clone() };
    let jobs: Vec<([f64; 3], f64)> = sets.iter().flat_map(|&p| s.multipliers.iter().map(move |&c| (p, c))).collect();
    let sim = Config { snapshot_times: Vec::new(), ..ctx.cfg.sim_config() };
    sim.validate()?;

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = ctx.workers {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| CliError::Config(e.to_string()))?;
    let rows: Vec<SweepRow> = pool.install(|| {
        jobs.par_iter()
            .map(|&(params, multiplier)| SweepRow { params, multiplier, result: sweep_one(params, multiplier, &sim) })
            .collect()
    });

    let path = ctx.out.join("summary.csv");
    let mut w = csv::Writer::from_path(&path)?;
    w.write_record(["m", "p", "q", "multiplier", "outcome", "event_time", "t_end", "final_sup", "steps", "error"])?;
    let mut failures = 0;
    for row in &rows {
        let mut rec: Vec<String> = row.params.iter().map(|&v| fmt(v)).collect();
        rec.push(fmt(row.multiplier));
        match &row.result {
            Ok((outcome, t_end, sup, steps)) => {
                rec.push(outcome.label().into());
                rec.push(outcome.event_time().map(fmt).unwrap_or_default());
                rec.extend([fmt(*t_end), fmt(*sup), steps.to_string(), String::new()]);
            }
            Err(msg) => {
                failures += 1;
                rec.extend(["error".into(), String::new(), String::new(), String::new(), String::new(), msg.clone()]);
            }
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    println!("runs = {}, failures = {failures}", rows.len());

    let mut manifest = ctx.manifest("sweep", model.params().ok());
    manifest.files.push("summary.csv".into());
    manifest.summary = json!({ "runs": rows.len(), "failures": failures });
    ctx.finish(manifest, start)
}

fn sweep_one(p: [f64; 3], c: f64, sim: &Config) -> Result<(fkpp::model::Outcome<f64>, f64, f64, usize), String> {
    let run = || -> Result<_, fkpp::Error> {
        let params = Params::new(p[0], p[1], p[2])?;
        let profile = build_profile(params, 0.0)?;
        let u0 = field_from(sim, |x| Ok(c * profile.e_value(x)?))?;
        let r = fkpp::pde::run(params, &u0, sim)?;
        Ok((r.outcome, r.final_field.t, r.final_field.sup_norm(), r.stats.steps))
    };
    run().map_err(|e| e.to_string())
}

/// Grid field from a fallible function of `x`.
fn field_from(sim: &Config, f: impl Fn(f64) -> fkpp::Result<f64>) -> fkpp::Result<Field> {
    let mut field = sample(|_| 0.0, sim)?;
    for i in 0..field.n() {
        let x = field.x(i);
        let v = f(x)?;
        if !(v >= 0.0 && v.is_finite()) {
            return Err(fkpp::Error::InitialData(format!("initial value {v} at x = {x}")));
        }
        field.values[i] = v;
    }
    Ok(field)
}

/// Samples the configured initial condition; a separable initial
/// condition brings its own exponents.
fn initial_data(cfg: &FileConfig, sim: &Config) -> Result<(Params, Field), CliError> {
    Ok(match &cfg.ic {
        InitialCondition::Stationary { multiple, center } => {
            let params = cfg.model.params()?;
            let profile = build_profile(params, *center)?;
            (params, field_from(sim, |x| Ok(multiple * profile.e_value(x)?))?)
        }
        InitialCondition::Separable { family, m, constant } => {
            let sol = Separable::new(*family, *m, *constant)?;
            (sol.params(), field_from(sim, |x| sol.value(x, 0.0))?)
        }
        InitialCondition::Bump { center, width, height, power } => {
            if !(*width > 0.0) {
                return Err(CliError::Config(format!("bump width must be positive, got {width}")));
            }
            let f = |x: f64| {
                let s = 1.0 - ((x - center) / width).powi(2);
                Ok(if s > 0.0 { height * s.powf(*power) } else { 0.0 })
            };
            (cfg.model.params()?, field_from(sim, f)?)
        }
        InitialCondition::File { path } => {
            let (_, rows) = read_table(path).map_err(|e| CliError::Config(e.to_string()))?;
            let pts: Vec<(f64, f64)> = rows.iter().filter(|r| r.len() >= 2).map(|r| (r[0], r[1])).collect();
            if pts.len() < 2 || pts.windows(2).any(|w| !(w[1].0 > w[0].0)) {
                return Err(CliError::Config(format!("{}: need at least two rows with increasing x", path.display())));
            }
            (cfg.model.params()?, field_from(sim, |x| Ok(interpolate(&pts, x)))?)
        }
        InitialCondition::Zero => (cfg.model.params()?, field_from(sim, |_| Ok(0.0))?),
    })
}

/// Linear interpolation, zero outside the tabulated range.
fn interpolate(pts: &[(f64, f64)], x: f64) -> f64 {
    let (first, last) = (pts[0], pts[pts.len() - 1]);
    if x < first.0 || x > last.0 {
        return 0.0;
    }
    let k = pts.partition_point(|p| p.0 <= x);
    if k == pts.len() {
        return last.1;
    }
    let (a, b) = (pts[k - 1], pts[k]);
    a.1 + (b.1 - a.1) * (x - a.0) / (b.0 - a.0)
}

fn write_field(path: &Path, field: &Field) -> Result<(), CliError> {
    let rows: Vec<[f64; 2]> = field.values.iter().enumerate().map(|(i, &u)| [field.x(i), u]).collect();
    write_table(path, ["x", "u"], &rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::load;

    #[test]
    fn written_manifest_reads_back_unchanged() {
        let dir = tempfile::tempdir().unwrap();
        let sets: Vec<String> = ["ic.multiple=0.5", "grid.n=201", "run.snapshot_times=[0.5]"].map(String::from).into();
        let cfg = load(None, &sets).unwrap();
        let doc = serde_json::to_value(&cfg).unwrap();
        let ctx = Context { cfg: &cfg, doc: &doc, out: dir.path(), workers: None };
        let manifest = simulate(&ctx).unwrap();
        let text = std::fs::read_to_string(dir.path().join("manifest.json")).unwrap();
        let back: RunManifest = serde_json::from_str(&text).unwrap();
        assert_eq!(back, manifest);
        assert_eq!(back.outcome.unwrap().label(), "extinction");
        let echoed: FileConfig = serde_json::from_value(back.config).unwrap();
        assert_eq!(echoed, cfg);
        for f in &back.files {
            let (header, rows) = read_table(&dir.path().join(f)).unwrap();
            assert!(!header.is_empty() && !rows.is_empty(), "{f}");
        }
    }

    #[test]
    fn interpolation_is_linear_inside_and_zero_outside() {
        let pts = [(0.0, 0.0), (1.0, 2.0), (3.0, 0.0)];
        assert_eq!(interpolate(&pts, -0.1), 0.0);
        assert_eq!(interpolate(&pts, 0.5), 1.0);
        assert_eq!(interpolate(&pts, 1.0), 2.0);
        assert_eq!(interpolate(&pts, 2.0), 1.0);
        assert_eq!(interpolate(&pts, 3.0), 0.0);
        assert_eq!(interpolate(&pts, 3.5), 0.0);
    }
}
