//! Parsers for the structured flag values.

use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use hqc_core::stats::{linear_grid, log_grid};
use hqc_core::strategy::StrategyParams;
use hqc_core::Strategy;

/// `log:start:stop:count` or `start:stop:step`.
pub fn time_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let num = |s: &str| -> Result<f64> {
        s.trim()
            .parse::<f64>()
            .with_context(|| format!("t-grid {spec:?}: {s:?} is not a number"))
    };
    let grid = match parts.as_slice() {
        ["log", a, b, c] => {
            let count: usize = c
                .trim()
                .parse()
                .with_context(|| format!("t-grid {spec:?}: count {c:?} is not an integer"))?;
            log_grid(num(a)?, num(b)?, count)
        }
        [a, b, step] => linear_grid(num(a)?, num(b)?, num(step)?),
        _ => bail!("t-grid {spec:?}: expected log:start:stop:count or start:stop:step"),
    }
    .with_context(|| format!("t-grid {spec:?}"))?;
    if grid.iter().any(|t| *t < 0.0) {
        bail!("t-grid {spec:?}: times must be nonnegative");
    }
    Ok(grid)
}

/// Comma-separated distances; `a:b` is an inclusive range.
pub fn distances(spec: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for item in spec.split(',') {
        let item = item.trim();
        let int = |s: &str| -> Result<usize> {
            s.trim()
                .parse()
                .with_context(|| format!("k {spec:?}: {s:?} is not a nonnegative integer"))
        };
        match item.split_once(':') {
            Some((a, b)) => {
                let (a, b) = (int(a)?, int(b)?);
                if a > b {
                    bail!("k {spec:?}: empty range {item}");
                }
                out.extend(a..=b);
            }
            None => out.push(int(item)?),
        }
    }
    Ok(out)
}

pub fn check_names(spec: &str) -> Vec<String> {
    spec.split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect()
}

/// A built-in name or `file:<path>` to a JSON table.
pub fn strategy(spec: &str, n: usize) -> Result<Strategy> {
    if let Some(path) = spec.strip_prefix("file:") {
        let path = PathBuf::from(path);
        let text =
            std::fs::read_to_string(&path).with_context(|| format!("strategy file {}", path.display()))?;
        let params = StrategyParams::from_json_str(&text, n)
            .with_context(|| format!("strategy file {}", path.display()))?;
        return Ok(Strategy::Parametric {
            name: format!("file:{}", path.display()),
            params,
        });
    }
    Strategy::builtin(spec).ok_or_else(|| {
        anyhow!("unknown strategy {spec:?}; expected optimal, aldous, independent or file:<path>")
    })
}
