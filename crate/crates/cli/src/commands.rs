use std::io::Write;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use hqc_core::analytic::checked_vhat;
use hqc_core::output::{to_csv_string, to_json_string, Cell, SCHEMA_VERSION};
use hqc_core::sim::RunOptions;
use hqc_core::tv::vhat_level_time;
use hqc_core::verify::{run_check, CheckResult, VerifyConfig, CHECK_NAMES};
use hqc_core::{
    coupling_gap, expected_tau_hat, half_mixing_time, hamming, run_replicas, tv as tv_at, Engine,
    ReplicaConfig, Start, Strategy, Vertex,
};
use serde_json::{json, Value};

use crate::parse;
use crate::{EngineKind, ExactArgs, Format, Outcome, OutputArgs, SimulateArgs, TvArgs, VerifyArgs};

const DEFAULT_T_GRID: &str = "log:0.001:20:50";

fn emit(out: &OutputArgs, default: Format, json: Value, header: &[&str], rows: &[Vec<Cell>]) -> Result<()> {
    let text = match out.format.unwrap_or(default) {
        Format::Json => to_json_string(&json)?,
        Format::Csv => to_csv_string(header, rows),
    };
    match &out.output {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("cannot write output {}", path.display()))?
        }
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn document(command: &str, config: Value, body: (&str, Value)) -> Value {
    let mut doc = json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "config": config,
    });
    doc[body.0] = body.1;
    doc
}

fn times(t: Option<f64>, grid: Option<&str>) -> Result<Vec<f64>> {
    match (t, grid) {
        (Some(t), _) => {
            if !(t >= 0.0 && t.is_finite()) {
                bail!("--t must be finite and nonnegative, got {t}");
            }
            Ok(vec![t])
        }
        (None, Some(spec)) => parse::time_grid(spec),
        (None, None) => parse::time_grid(DEFAULT_T_GRID),
    }
}

pub fn simulate(a: &SimulateArgs) -> Result<Outcome> {
    let start = match (&a.x, &a.y, a.k) {
        (Some(x), Some(y), None) => {
            let x: Vertex = x.parse().context("--x")?;
            let y: Vertex = y.parse().context("--y")?;
            if let Some(n) = a.n {
                if n != x.dim() {
                    bail!("--n {n} does not match the {}-bit start vertices", x.dim());
                }
            }
            hamming(&x, &y).context("--x/--y")?;
            Start::Vertices(x, y)
        }
        (None, None, Some(k)) => Start::Distance {
            n: a.n.unwrap_or(k),
            k,
        },
        _ => bail!("give either --k or both --x and --y"),
    };
    let n = match &start {
        Start::Vertices(x, _) => x.dim(),
        Start::Distance { n, .. } => *n,
    };
    let strategy = parse::strategy(&a.strategy, n)?;
    let engine = match a.engine {
        EngineKind::Bit => Engine::BitLevel(Arc::new(strategy.clone())),
        EngineKind::Parity if strategy == Strategy::Optimal => Engine::ParityChain,
        EngineKind::Parity => {
            bail!("--engine parity simulates the optimal coupling only; drop --strategy or use --engine bit")
        }
    };
    let t_grid = parse::time_grid(&a.t_grid)?;
    eprintln!("seed: {}", a.seed);
    let config = ReplicaConfig {
        start: start.clone(),
        engine,
        replicas: a.replicas,
        t_grid: t_grid.clone(),
        seed: a.seed,
        parallelism: a.parallelism,
        options: RunOptions {
            t_max: a.t_max,
            cross_check: a.cross_check,
        },
    };
    let report = run_replicas(&config)?;
    let (x, y) = match &start {
        Start::Vertices(x, y) => (x.to_string(), y.to_string()),
        Start::Distance { n, k } => (
            Vertex::zeros(*n)?.to_string(),
            Vertex::with_prefix_ones(*n, *k)?.to_string(),
        ),
    };
    let echo = json!({
        "n": n,
        "x": x,
        "y": y,
        "strategy": a.strategy,
        "engine": a.engine,
        "replicas": a.replicas,
        "seed": a.seed,
        "t_grid": a.t_grid,
        "t_max": a.t_max,
        "cross_check": a.cross_check,
    });
    let rows: Vec<Vec<Cell>> = report
        .tail
        .iter()
        .map(|&[t, p, hw]| {
            vec![
                t.into(),
                p.into(),
                hw.into(),
                (p - report.dkw).max(0.0).into(),
                (p + report.dkw).min(1.0).into(),
            ]
        })
        .collect();
    emit(
        &a.out,
        Format::Json,
        document("simulate", echo, ("report", serde_json::to_value(&report)?)),
        &["t", "tail", "half_width", "dkw_lower", "dkw_upper"],
        &rows,
    )?;
    Ok(Outcome::Done)
}

pub fn exact(a: &ExactArgs) -> Result<Outcome> {
    let ks = parse::distances(&a.k)?;
    if a.mean {
        let rows: Vec<Vec<Cell>> = ks
            .iter()
            .map(|&k| vec![k.into(), expected_tau_hat(k).into()])
            .collect();
        let json_rows: Vec<Value> = ks
            .iter()
            .map(|&k| json!({"k": k, "mean_tau": expected_tau_hat(k)}))
            .collect();
        let echo = json!({"k": ks, "mean": true});
        emit(
            &a.out,
            Format::Csv,
            document("exact", echo, ("rows", json!(json_rows))),
            &["k", "mean_tau"],
            &rows,
        )?;
        return Ok(Outcome::Done);
    }
    let grid = times(a.t, a.t_grid.as_deref())?;
    let mut rows = Vec::new();
    let mut json_rows = Vec::new();
    for &k in &ks {
        for &t in &grid {
            let v = checked_vhat(k as i64, t)?;
            rows.push(vec![k.into(), t.into(), v.into()]);
            json_rows.push(json!({"k": k, "t": t, "vhat": v}));
        }
    }
    let echo = json!({"k": ks, "t_grid": grid});
    emit(
        &a.out,
        Format::Csv,
        document("exact", echo, ("rows", json!(json_rows))),
        &["k", "t", "vhat"],
        &rows,
    )?;
    Ok(Outcome::Done)
}

pub fn verify(a: &VerifyArgs) -> Result<Outcome> {
    let names = parse::check_names(&a.checks);
    if names.is_empty() {
        bail!(
            "--checks is empty; expected a subset of {}",
            CHECK_NAMES.join(",")
        );
    }
    if let Some(bad) = names.iter().find(|n| !CHECK_NAMES.contains(&n.as_str())) {
        bail!(
            "unknown check {bad:?}; expected one of {}",
            CHECK_NAMES.join(", ")
        );
    }
    let mut cfg = VerifyConfig {
        n: a.n,
        seed: a.seed,
        parallelism: a.parallelism,
        ..VerifyConfig::default()
    };
    if let Some(m) = a.m_max {
        cfg.m_max = m;
    }
    if let Some(k) = a.k_max {
        cfg.parity_k_max = k;
        cfg.bellman_k_max = k;
    }
    if let Some(r) = a.replicas {
        cfg.replicas = r;
    }
    if let Some(spec) = &a.t_grid {
        cfg.t_grid = parse::time_grid(spec)?;
    }
    if let Some(h) = a.horizon {
        if !(h > 0.0 && h.is_finite()) {
            bail!("--horizon must be positive, got {h}");
        }
        cfg.horizon = h;
    }
    eprintln!("seed: {}", cfg.seed);
    let mut results: Vec<CheckResult> = Vec::new();
    for name in &names {
        let r = run_check(name, &cfg)?;
        eprintln!(
            "{}: {} (max residual {:e}, threshold {:e})",
            r.name,
            if r.pass { "pass" } else { "FAIL" },
            r.max_residual,
            r.threshold
        );
        results.push(r);
    }
    let all = results.iter().all(|r| r.pass);
    let rows: Vec<Vec<Cell>> = results
        .iter()
        .map(|r| {
            vec![
                r.name.as_str().into(),
                (if r.pass { "pass" } else { "fail" }).into(),
                r.max_residual.into(),
                r.threshold.into(),
                r.grid.as_str().into(),
            ]
        })
        .collect();
    let mut doc = document(
        "verify",
        serde_json::to_value(&cfg)?,
        ("checks", serde_json::to_value(&results)?),
    );
    doc["pass"] = json!(all);
    emit(
        &a.out,
        Format::Json,
        doc,
        &["check", "status", "max_residual", "threshold", "grid"],
        &rows,
    )?;
    Ok(if all { Outcome::Done } else { Outcome::ChecksFailed })
}

pub fn tv(a: &TvArgs) -> Result<Outcome> {
    let ks = parse::distances(&a.k)?;
    let n = a.n.unwrap_or_else(|| ks.iter().copied().max().unwrap_or(0));
    if let Some(&k) = ks.iter().find(|&&k| k > n) {
        bail!("k = {k} exceeds n = {n}");
    }
    if let Some(level) = a.level {
        let mut rows = Vec::new();
        let mut json_rows = Vec::new();
        for &k in &ks {
            let t_tv = half_mixing_time(n, k, level)?;
            // The optimal tail is only available in closed form up to a cap.
            let t_v = vhat_level_time(k, level).ok();
            let ratio = t_v.map(|v| v / t_tv);
            let opt = |v: Option<f64>| v.map_or(Cell::Text(String::new()), Cell::Float);
            rows.push(vec![
                n.into(),
                k.into(),
                level.into(),
                t_tv.into(),
                opt(t_v),
                opt(ratio),
            ]);
            json_rows
                .push(json!({"n": n, "k": k, "level": level, "t_tv": t_tv, "t_vhat": t_v, "ratio": ratio}));
        }
        let echo = json!({"n": n, "k": ks, "level": level});
        emit(
            &a.out,
            Format::Csv,
            document("tv", echo, ("rows", json!(json_rows))),
            &["n", "k", "level", "t_tv", "t_vhat", "ratio"],
            &rows,
        )?;
        return Ok(Outcome::Done);
    }
    let grid = times(a.t, a.t_grid.as_deref())?;
    let echo = json!({"n": n, "k": ks, "t_grid": grid, "curve": a.curve});
    if a.curve {
        let &[k] = ks.as_slice() else {
            bail!("--curve takes a single k");
        };
        let samples: Vec<(f64, f64)> = grid.iter().map(|&t| (t, tv_at(k, t))).collect();
        let rows: Vec<Vec<Cell>> = samples.iter().map(|&(t, d)| vec![t.into(), d.into()]).collect();
        let body = json!({"n": n, "k": k, "samples": samples});
        emit(
            &a.out,
            Format::Csv,
            document("tv", echo, ("curve", body)),
            &["t", "tv"],
            &rows,
        )?;
        return Ok(Outcome::Done);
    }
    let mut rows = Vec::new();
    let mut json_rows = Vec::new();
    for &k in &ks {
        for &t in &grid {
            let g = coupling_gap(k, t)?;
            rows.push(vec![k.into(), t.into(), g.tv.into(), g.vhat.into(), g.gap.into()]);
            json_rows.push(serde_json::to_value(g)?);
        }
    }
    emit(
        &a.out,
        Format::Csv,
        document("tv", echo, ("rows", json!(json_rows))),
        &["k", "t", "tv", "vhat", "gap"],
        &rows,
    )?;
    Ok(Outcome::Done)
}
