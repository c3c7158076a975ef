use std::collections::HashMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Uniform};

use super::config::{read_params, LoadedConfig};
use super::outputs::*;
use super::{read_dataset, svg, write_dataset, write_file, write_json, Command, PlateauArgs};
use crate::dgp::{self, DgpConfig};
use crate::error::{Error, Result};
use crate::harness::{
    compare_transformed, plateau_detect, profile_grid, run_multistart, two_stage_fit, MethodReport,
    MultiStartConfig, PlateauThresholds,
};
use crate::model::{self, log_likelihood, Dataset, ParamVector};
use crate::optimize::{maximize_likelihood, OptimizerSpec};

const TRANSFORM_TOLERANCE: f64 = 1e-9;

pub(super) fn dispatch(cmd: Command, out: &mut (dyn Write + Send)) -> Result<()> {
    match cmd {
        Command::Simulate(a) => simulate(a, out),
        Command::Fit(a) => fit(a, out),
        Command::Multistart(a) => multistart(a, out),
        Command::Profile(a) => profile(a, out),
        Command::Transform(a) => transform(a, out),
        Command::Compare(a) => compare(a, out),
        Command::Benchmark(a) => benchmark(a, out),
    }
}

fn say(out: &mut (dyn Write + Send), line: String) -> Result<()> {
    writeln!(out, "{line}").map_err(|e| Error::io("<stdout>", e))
}

fn sibling(path: &Path, ext: &str) -> PathBuf {
    path.with_extension(ext)
}

fn parse_list(s: &str) -> Option<Vec<f64>> {
    s.split(',').map(|t| t.trim().parse::<f64>().ok()).collect()
}

/// `random:<seed>`, comma-separated numbers, or a parameter file.
fn parse_point(spec: &str, d: &Dataset) -> Result<ParamVector> {
    let p = if let Some(seed) = spec.strip_prefix("random:") {
        let seed: u64 = seed
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("bad seed in `{spec}`")))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let unif = Uniform::new_inclusive(-5.0, 5.0).expect("finite box");
        let flat: Vec<f64> = (0..d.dim()).map(|_| unif.sample(&mut rng)).collect();
        ParamVector::from_flat(&flat, d.k1())
    } else if let Some(flat) = parse_list(spec) {
        if flat.len() != d.dim() {
            return Err(Error::DimensionMismatch {
                what: "parameter vector",
                expected: d.dim(),
                found: flat.len(),
            });
        }
        ParamVector::from_flat(&flat, d.k1())
    } else {
        read_params(Path::new(spec))?
    };
    d.check_params(&p)?;
    Ok(p)
}

fn thresholds(base: PlateauThresholds, args: PlateauArgs) -> PlateauThresholds {
    PlateauThresholds {
        delta: args.plateau_delta.unwrap_or(base.delta),
        tau: args.plateau_tau.unwrap_or(base.tau),
    }
}

fn simulate(a: super::SimulateArgs, out: &mut (dyn Write + Send)) -> Result<()> {
    let (mut cfg, preset, out_path) = match (&a.config, &a.preset) {
        (Some(path), _) => {
            let loaded = LoadedConfig::load(path)?;
            let mut cfg = loaded
                .dgp()?
                .ok_or_else(|| Error::InvalidConfig("config has neither `dgp` nor `preset`".into()))?;
            if let Some(seed) = a.seed {
                cfg.seed = seed;
            }
            let out_path = loaded.file.output.dataset.as_ref().map(|p| loaded.resolve(p));
            (cfg, loaded.file.preset.clone(), out_path)
        }
        (None, Some(name)) => {
            let seed = a
                .seed
                .ok_or_else(|| Error::InvalidConfig("`--seed` is required with `--preset`".into()))?;
            let cfg = DgpConfig::preset(name, seed)
                .ok_or_else(|| Error::InvalidConfig(format!("unknown preset `{name}`")))?;
            (cfg, Some(name.clone()), None)
        }
        (None, None) => {
            return Err(Error::InvalidConfig("give `--config` or `--preset`".into()));
        }
    };
    if let Some(n) = a.n {
        cfg.n = n;
    }
    let out_path = a
        .out
        .or(out_path)
        .ok_or_else(|| Error::InvalidConfig("no output path: pass `--out`".into()))?;
    let sim = dgp::simulate(&cfg)?;
    write_dataset(&out_path, &sim.data)?;
    let sidecar = SimulateSidecar {
        preset,
        n: sim.data.n(),
        k1: sim.data.k1(),
        k2: sim.data.k2(),
        beta: sim.beta0.clone(),
        gamma: sim.gamma0.clone(),
        crossover: sim.crossover,
        resamples_used: sim.resamples_used,
        seed: cfg.seed,
        config: cfg,
    };
    let side = sibling(&out_path, "json");
    write_json(&side, &sidecar)?;
    say(
        out,
        format!(
            "wrote {} (n = {}, k1 = {}, k2 = {}, crossover = {}) and {}",
            out_path.display(),
            sidecar.n,
            sidecar.k1,
            sidecar.k2,
            sidecar.crossover,
            side.display()
        ),
    )
}

fn fit(a: super::FitArgs, out: &mut (dyn Write + Send)) -> Result<()> {
    let d = read_dataset(&a.data)?;
    let start = match &a.start {
        Some(s) => parse_point(s, &d)?,
        None => ParamVector::zeros(d.k1(), d.k2()),
    };
    let mut spec = OptimizerSpec::new(a.method);
    spec.seed = a.seed;
    spec.max_iter = a.max_iter;
    if let Some(t) = a.f_tol {
        spec.f_tol = t;
    }
    if let Some(t) = a.g_tol {
        spec.g_tol = t;
    }
    let th = thresholds(PlateauThresholds::default(), a.plateau);
    let (result, two_stage) = if a.two_stage {
        let ts = two_stage_fit(&d, &spec, &start, th)?;
        (ts.best.clone(), Some(ts))
    } else {
        (maximize_likelihood(&d, &spec, &start)?, None)
    };
    let p = result.params(d.k1());
    let output = FitOutput {
        plateau: plateau_detect(&d, &result, th),
        normalized: result.value / d.n() as f64,
        benchmark_normalized: -std::f64::consts::LN_2,
        beta: p.beta,
        gamma: p.gamma,
        spec,
        start,
        result,
        two_stage,
    };
    match &a.out {
        Some(path) => {
            write_json(path, &output)?;
            say(out, format!("wrote {}", path.display()))
        }
        None => {
            let text = serde_json::to_string_pretty(&output).map_err(|e| Error::Json {
                path: "<stdout>".into(),
                source: e,
            })?;
            say(out, text)
        }
    }
}

fn write_method_outputs(dir: &Path, m: &MethodReport) -> Result<()> {
    let label = m.spec.method.label();
    write_file(&dir.join("distance_hist.csv"), &histogram_csv(&m.distance_hist, false))?;
    write_file(&dir.join("valuegap_hist.csv"), &histogram_csv(&m.value_gap_hist, true))?;
    write_file(
        &dir.join("distance_hist.svg"),
        &svg::histogram(
            &m.distance_hist,
            &format!("{label}: distance to reference"),
            "Euclidean distance (log scale)",
            false,
        ),
    )?;
    write_file(
        &dir.join("valuegap_hist.svg"),
        &svg::histogram(
            &m.value_gap_hist,
            &format!("{label}: normalized log-likelihood gap"),
            "[l(reference) - l(estimate)] / n (log scale)",
            true,
        ),
    )
}

fn method_dirs(methods: &[MethodReport]) -> Vec<String> {
    // Repeated methods get a numeric suffix.
    let mut seen: HashMap<&str, usize> = HashMap::new();
    methods
        .iter()
        .map(|m| {
            let label = m.spec.method.label();
            let k = seen.entry(label).or_insert(0);
            *k += 1;
            if *k == 1 {
                label.to_string()
            } else {
                format!("{label}_{k}")
            }
        })
        .collect()
}

fn load_experiment(
    config: &Path,
    reference: Option<&Path>,
    out_dir: Option<PathBuf>,
    plateau: PlateauArgs,
    d: &Dataset,
) -> Result<(MultiStartConfig, PathBuf)> {
    let loaded = LoadedConfig::load(config)?;
    let reference = match reference {
        Some(p) => read_params(p)?,
        None => loaded.reference()?.ok_or_else(|| {
            Error::InvalidConfig("no reference point: set `reference`, `reference_file` or pass a file".into())
        })?,
    };
    let mut cfg = loaded.multistart(reference)?;
    cfg.plateau = thresholds(cfg.plateau, plateau);
    cfg.validate(d)?;
    let dir = out_dir
        .or_else(|| loaded.file.output.dir.as_ref().map(|p| loaded.resolve(p)))
        .ok_or_else(|| Error::InvalidConfig("no output directory: pass `--out-dir`".into()))?;
    Ok((cfg, dir))
}

fn multistart(a: super::MultistartArgs, out: &mut (dyn Write + Send)) -> Result<()> {
    let d = read_dataset(&a.data)?;
    let (cfg, dir) = load_experiment(&a.config, a.reference.as_deref(), a.out_dir, a.plateau, &d)?;
    let report = run_multistart(&d, &cfg)?;
    write_json(&dir.join("report.json"), &report)?;
    for (m, name) in report.methods.iter().zip(method_dirs(&report.methods)) {
        write_method_outputs(&dir.join(&name), m)?;
        let s = &m.summary;
        say(
            out,
            format!(
                "{name}: {} runs, {} better than reference, {} plateau, {} far, {} clusters{}",
                m.records.len(),
                s.better_than_reference,
                s.plateau,
                s.far,
                s.clusters,
                if s.stability_warning { " (unstable: several major clusters)" } else { "" }
            ),
        )?;
    }
    say(out, format!("wrote {}", dir.display()))
}

fn parse_pair<T: std::str::FromStr>(s: &str, what: &str) -> Result<(T, T)> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a, b] => match (a.parse(), b.parse()) {
            (Ok(a), Ok(b)) => Ok((a, b)),
            _ => Err(Error::InvalidConfig(format!("bad {what} `{s}`"))),
        },
        _ => Err(Error::InvalidConfig(format!("{what} needs two comma-separated values, got `{s}`"))),
    }
}

fn profile(a: super::ProfileArgs, out: &mut (dyn Write + Send)) -> Result<()> {
    let d = read_dataset(&a.data)?;
    let base = parse_point(&a.base, &d)?;
    let (j1, j2) = parse_pair::<usize>(&a.indices, "indices")?;
    let range1 = parse_pair::<f64>(&a.range, "range")?;
    let range2 = match &a.range2 {
        Some(r) => parse_pair::<f64>(r, "range2")?,
        None => range1,
    };
    let g = profile_grid(&d, &base, j1, j2, range1, range2, a.resolution, a.clip_floor)?;
    let extremes = g.value_range(range1, range2);
    let sidecar = ProfileSidecar {
        index_pair: (j1, j2),
        base_value: log_likelihood(&d, &base)?.value,
        base: base.clone(),
        range1,
        range2,
        resolution: a.resolution,
        clip_floor: a.clip_floor,
        clipped_cells: g.clipped_count(),
        value_min: extremes.map(|e| e.0),
        value_max: extremes.map(|e| e.1),
        normalized_range: extremes.map(|(lo, hi)| (hi - lo) / d.n() as f64),
    };
    write_file(&a.out, &profile_csv(&g))?;
    write_file(
        &sibling(&a.out, "svg"),
        &svg::heatmap(&g, &format!("log-likelihood over gamma[{j1}], gamma[{j2}]")),
    )?;
    write_json(&sibling(&a.out, "json"), &sidecar)?;
    say(
        out,
        format!(
            "wrote {} ({} x {} cells, {} clipped below {}, normalized range {})",
            a.out.display(),
            g.axis1.len(),
            g.axis2.len(),
            sidecar.clipped_cells,
            a.clip_floor,
            sidecar.normalized_range.map_or("n/a".into(), |r| r.to_string())
        ),
    )
}

fn transform(a: super::TransformArgs, out: &mut (dyn Write + Send)) -> Result<()> {
    let d = read_dataset(&a.data)?;
    let p = read_params(&a.params)?;
    d.check_params(&p)?;
    let (td, tp) = dgp::transform(&d, &p)?;
    let v0 = log_likelihood(&d, &p)?.value;
    let v1 = log_likelihood(&td, &tp)?.value;
    let diff = (v0 - v1).abs();
    let passed = diff <= TRANSFORM_TOLERANCE;
    write_dataset(&a.out, &td)?;
    let sidecar = TransformSidecar {
        beta: tp.beta.clone(),
        gamma: tp.gamma.clone(),
        original: p,
        value_original: v0,
        value_transformed: v1,
        abs_difference: diff,
        tolerance: TRANSFORM_TOLERANCE,
        check_passed: passed,
    };
    write_json(&sibling(&a.out, "json"), &sidecar)?;
    say(
        out,
        format!(
            "log-likelihood original {v0}, transformed {v1}, |difference| {diff}: {}",
            if passed { "equal" } else { "NOT equal" }
        ),
    )?;
    if passed {
        say(out, format!("wrote {}", a.out.display()))
    } else {
        Err(Error::CheckFailed(format!(
            "transformed log-likelihood differs by {diff} (tolerance {TRANSFORM_TOLERANCE})"
        )))
    }
}

fn compare(a: super::CompareArgs, out: &mut (dyn Write + Send)) -> Result<()> {
    let d = read_dataset(&a.data)?;
    let (cfg, dir) = load_experiment(&a.config, a.params.as_deref(), a.out_dir, a.plateau, &d)?;
    let c = compare_transformed(&d, &cfg)?;
    write_json(&dir.join("report.json"), &c)?;
    let names = method_dirs(&c.original.methods);
    for ((o, t), name) in c.original.methods.iter().zip(&c.transformed.methods).zip(names) {
        let mdir = dir.join(&name);
        write_method_outputs(&mdir.join("original"), o)?;
        write_method_outputs(&mdir.join("transformed"), t)?;
        let legend = ["original", "transformed"];
        write_file(
            &mdir.join("distance_hist.svg"),
            &svg::paired_histogram(
                &o.distance_hist,
                &t.distance_hist,
                legend,
                &format!("{name}: distance to reference (each leg in its own coordinates)"),
                "Euclidean distance (log scale)",
                false,
            ),
        )?;
        write_file(
            &mdir.join("valuegap_hist.svg"),
            &svg::paired_histogram(
                &o.value_gap_hist,
                &t.value_gap_hist,
                legend,
                &format!("{name}: normalized log-likelihood gap"),
                "[l(reference) - l(estimate)] / n (log scale)",
                true,
            ),
        )?;
        say(
            out,
            format!(
                "{name}: better than reference {} original vs {} transformed; plateau {} vs {}",
                o.summary.better_than_reference,
                t.summary.better_than_reference,
                o.summary.plateau,
                t.summary.plateau
            ),
        )?;
    }
    say(
        out,
        format!(
            "reference log-likelihood {} original, {} transformed",
            c.original.reference_value, c.transformed.reference_value
        ),
    )?;
    say(out, format!("wrote {}", dir.display()))
}

fn benchmark(a: super::BenchmarkArgs, out: &mut (dyn Write + Send)) -> Result<()> {
    let d = read_dataset(&a.data)?;
    let at = match &a.params {
        Some(path) => {
            let p = read_params(path)?;
            let e = log_likelihood(&d, &p)?;
            let approx = model::plateau_approximation(&d, &p.beta)?;
            Some(BenchmarkPoint {
                value: e.value,
                normalized: e.normalized,
                degenerate: e.degenerate,
                plateau_approximation: approx.value,
                negative_z: approx.negative_z,
                params: p,
            })
        }
        None => None,
    };
    let output = BenchmarkOutput {
        n: d.n(),
        benchmark_value: model::benchmark_value(&d),
        benchmark_normalized: -std::f64::consts::LN_2,
        at,
    };
    let text = serde_json::to_string_pretty(&output).map_err(|e| Error::Json {
        path: "<stdout>".into(),
        source: e,
    })?;
    say(out, text)
}
