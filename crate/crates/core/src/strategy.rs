//! Coupling controls: the joint-jump rate matrix `Q` and the strategies that
//! produce it from the current state.
//!
//! An entry `(i, j)` with `i, j` in `0..=n` is the rate at which `x` flips
//! coordinate `i` while `y` flips coordinate `j` (index 0 meaning "no
//! flip"). Every row `i >= 1` and every column `j >= 1` must sum to one so
//! that each walker, viewed alone, flips every coordinate at unit rate.
//!
//! Strategies here are state-feedback controls: `Q` is a function of the
//! current pair and is constant between jumps.

use std::collections::BTreeMap;
use std::fmt;

use serde::Deserialize;
use thiserror::Error;

use crate::analytic::LambdaVector;
use crate::hypercube::{CouplingState, HypercubeError};

/// Tolerance for the row and column sum identities.
pub const SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StrategyError {
    #[error("rate index ({i}, {j}) out of range for n = {n}")]
    IndexOutOfRange { i: usize, j: usize, n: usize },
    #[error("the (0, 0) entry is not a jump")]
    NullEntry,
    #[error("invalid strategy parameters: {0}")]
    InvalidParams(String),
    #[error("strategy table covers k <= {covered}, state has n = {n}")]
    TableTooSmall { covered: usize, n: usize },
    #[error("dimension mismatch: rates for n = {q}, state has n = {state}")]
    DimensionMismatch { q: usize, state: usize },
    #[error(transparent)]
    Hypercube(#[from] HypercubeError),
}

/// Sparse admissible rate specification.
#[derive(Debug, Clone, PartialEq)]
pub struct QSpec {
    n: usize,
    joint: BTreeMap<(usize, usize), f64>,
}

impl QSpec {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            joint: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Sets a rate; zero removes the entry.
    pub fn set(&mut self, i: usize, j: usize, rate: f64) -> Result<(), StrategyError> {
        if i > self.n || j > self.n {
            return Err(StrategyError::IndexOutOfRange { i, j, n: self.n });
        }
        if i == 0 && j == 0 {
            return Err(StrategyError::NullEntry);
        }
        if rate == 0.0 {
            self.joint.remove(&(i, j));
        } else {
            self.joint.insert((i, j), rate);
        }
        Ok(())
    }

    pub fn rate(&self, i: usize, j: usize) -> f64 {
        self.joint.get(&(i, j)).copied().unwrap_or(0.0)
    }

    /// Nonzero entries in `(i, j)` order.
    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        self.joint.iter().map(|(&k, &v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.joint.len()
    }

    pub fn is_empty(&self) -> bool {
        self.joint.is_empty()
    }

    pub fn total_rate(&self) -> f64 {
        self.joint.values().sum()
    }

    fn set_unchecked(&mut self, i: usize, j: usize, rate: f64) {
        if rate != 0.0 {
            self.joint.insert((i, j), rate);
        }
    }
}

/// One failed admissibility condition.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NegativeRate { i: usize, j: usize, rate: f64 },
    Row { i: usize, sum: f64 },
    Column { j: usize, sum: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NegativeRate { i, j, rate } => {
                write!(f, "negative rate at ({i},{j}): {rate}")
            }
            Violation::Row { i, sum } => write!(f, "row {i} sums to {sum}, expected 1"),
            Violation::Column { j, sum } => write!(f, "column {j} sums to {sum}, expected 1"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{} admissibility violation(s): {}", .0.len(), .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
pub struct ViolationReport(pub Vec<Violation>);

/// Checks nonnegativity and the unit row/column sums. Reports every failure.
pub fn validate_qspec(q: &QSpec) -> Result<(), ViolationReport> {
    let n = q.n;
    let mut rows = vec![0.0f64; n + 1];
    let mut cols = vec![0.0f64; n + 1];
    let mut violations = Vec::new();
    for ((i, j), rate) in q.entries() {
        if !(rate >= 0.0) {
            violations.push(Violation::NegativeRate { i, j, rate });
        }
        rows[i] += rate;
        cols[j] += rate;
    }
    for (i, &sum) in rows.iter().enumerate().skip(1) {
        if (sum - 1.0).abs() > SUM_TOLERANCE || sum.is_nan() {
            violations.push(Violation::Row { i, sum });
        }
    }
    for (j, &sum) in cols.iter().enumerate().skip(1) {
        if (sum - 1.0).abs() > SUM_TOLERANCE || sum.is_nan() {
            violations.push(Violation::Column { j, sum });
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(ViolationReport(violations))
    }
}

/// The optimal control: matched coordinates move together; an odd number of
/// unmatched coordinates evolve independently; an even number are paired.
pub fn optimal_q(state: &CouplingState) -> QSpec {
    let mut q = QSpec::new(state.dim());
    let u = state.unmatched();
    let k = u.len();
    sync_matched(&mut q, state);
    if k % 2 == 1 {
        for &i in u {
            q.set_unchecked(i, 0, 1.0);
            q.set_unchecked(0, i, 1.0);
        }
    } else if k >= 2 {
        pair_up(&mut q, u, 1.0 / (k - 1) as f64);
    }
    q
}

/// Aldous's coupling: pair unmatched coordinates whenever there are at least
/// two; a lone unmatched coordinate evolves independently.
pub fn aldous_q(state: &CouplingState) -> QSpec {
    let mut q = QSpec::new(state.dim());
    let u = state.unmatched();
    sync_matched(&mut q, state);
    match u.len() {
        0 => {}
        1 => {
            q.set_unchecked(u[0], 0, 1.0);
            q.set_unchecked(0, u[0], 1.0);
        }
        k => pair_up(&mut q, u, 1.0 / (k - 1) as f64),
    }
    q
}

fn sync_matched(q: &mut QSpec, state: &CouplingState) {
    for i in 1..=state.dim() {
        if !state.is_unmatched(i) {
            q.set_unchecked(i, i, 1.0);
        }
    }
}

fn pair_up(q: &mut QSpec, unmatched: &[usize], rate: f64) {
    for &i in unmatched {
        for &j in unmatched {
            if i != j {
                q.set_unchecked(i, j, rate);
            }
        }
    }
}

/// Weights for one distance `k`: `u` is the share of an unmatched
/// coordinate's unit rate spent on independent single flips, `b` the share
/// of a matched coordinate's rate spent on breaking the match.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
pub struct Weights {
    pub u: f64,
    pub b: f64,
}

impl Weights {
    pub const SYNC_PAIRS: Weights = Weights { u: 0.0, b: 0.0 };
    pub const SINGLES_SYNC: Weights = Weights { u: 1.0, b: 0.0 };
    pub const INDEPENDENT: Weights = Weights { u: 1.0, b: 1.0 };

    fn validate(&self) -> Result<(), String> {
        for (name, v) in [("u", self.u), ("b", self.b)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(format!("{name} = {v} is outside [0, 1]"));
            }
        }
        Ok(())
    }

    /// Pairing needs two unmatched coordinates, so `k = 1` always uses
    /// singles whatever `u` says.
    pub fn effective(self, k: usize) -> Weights {
        if k == 1 {
            Weights { u: 1.0, ..self }
        } else {
            self
        }
    }
}

/// Per-distance weight table covering `k = 0..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct StrategyParams {
    table: Vec<Weights>,
}

impl StrategyParams {
    pub fn new(table: Vec<Weights>) -> Result<Self, StrategyError> {
        if table.is_empty() {
            return Err(StrategyError::InvalidParams("empty table".into()));
        }
        for (k, w) in table.iter().enumerate() {
            w.validate()
                .map_err(|e| StrategyError::InvalidParams(format!("k = {k}: {e}")))?;
        }
        Ok(Self { table })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize) -> Weights) -> Result<Self, StrategyError> {
        Self::new((0..=n).map(f).collect())
    }

    /// `u` chosen by the parity of `k`, `b` shared.
    pub fn by_parity(n: usize, u_odd: f64, u_even: f64, b: f64) -> Result<Self, StrategyError> {
        Self::from_fn(n, |k| Weights {
            u: if k % 2 == 1 { u_odd } else { u_even },
            b,
        })
    }

    pub fn optimal(n: usize) -> Self {
        Self::by_parity(n, 1.0, 0.0, 0.0).expect("constant weights are valid")
    }

    pub fn aldous(n: usize) -> Self {
        Self::by_parity(n, 0.0, 0.0, 0.0).expect("constant weights are valid")
    }

    pub fn independent(n: usize) -> Self {
        Self::by_parity(n, 1.0, 1.0, 1.0).expect("constant weights are valid")
    }

    /// Largest `k` covered.
    pub fn max_k(&self) -> usize {
        self.table.len() - 1
    }

    pub fn weights(&self, k: usize) -> Option<Weights> {
        self.table.get(k).copied()
    }

    fn validate(&self) -> Result<(), StrategyError> {
        for (k, w) in self.table.iter().enumerate() {
            w.validate()
                .map_err(|e| StrategyError::InvalidParams(format!("k = {k}: {e}")))?;
        }
        Ok(())
    }

    /// Loads a table from a JSON array of `{"k": int, "u": float, "b": float}`.
    /// Distances not listed default to `(u, b) = (0, 0)`.
    pub fn from_json_str(text: &str, n: usize) -> Result<Self, StrategyFileError> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Entry {
            k: usize,
            u: f64,
            b: f64,
        }
        let entries: Vec<Entry> = serde_json::from_str(text).map_err(|e| StrategyFileError::Syntax {
            line: e.line(),
            column: e.column(),
            message: {
                let full = e.to_string();
                let suffix = format!(" at line {} column {}", e.line(), e.column());
                full.strip_suffix(&suffix).unwrap_or(&full).to_string()
            },
        })?;
        let lines = object_start_lines(text);
        let mut table = vec![Weights::SYNC_PAIRS; n + 1];
        let mut seen = vec![false; n + 1];
        for (idx, e) in entries.iter().enumerate() {
            let line = lines.get(idx).copied().unwrap_or(0);
            let fail = |message: String| StrategyFileError::Entry { line, message };
            if e.k > n {
                return Err(fail(format!("k = {} exceeds dimension n = {n}", e.k)));
            }
            if std::mem::replace(&mut seen[e.k], true) {
                return Err(fail(format!("duplicate entry for k = {}", e.k)));
            }
            let w = Weights { u: e.u, b: e.b };
            w.validate().map_err(fail)?;
            table[e.k] = w;
        }
        Ok(Self { table })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StrategyFileError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: {message}")]
    Entry { line: usize, message: String },
}

/// 1-based line of each top-level object inside the outer array.
fn object_start_lines(text: &str) -> Vec<usize> {
    let mut out = Vec::new();
    let (mut line, mut depth) = (1usize, 0i32);
    let (mut in_string, mut escaped) = (false, false);
    for c in text.chars() {
        if c == '\n' {
            line += 1;
        }
        if in_string {
            match (escaped, c) {
                (true, _) => escaped = false,
                (false, '\\') => escaped = true,
                (false, '"') => in_string = false,
                _ => {}
            }
            continue;
        }
        match c {
            '"' => in_string = true,
            '[' | '{' => {
                if c == '{' && depth == 1 {
                    out.push(line);
                }
                depth += 1;
            }
            ']' | '}' => depth -= 1,
            _ => {}
        }
    }
    out
}

/// The parametric family: on `U` singles at rate `u` and pairs sharing
/// `1 - u`; on `M` synchronous moves at rate `1 - b` and match-breaking
/// singles at rate `b`.
pub fn parametric_q(state: &CouplingState, params: &StrategyParams) -> Result<QSpec, StrategyError> {
    params.validate()?;
    let n = state.dim();
    let k = state.n_unmatched();
    let w = params.weights(k).ok_or(StrategyError::TableTooSmall {
        covered: params.max_k(),
        n,
    })?;
    Ok(weighted_q(state, w))
}

fn weighted_q(state: &CouplingState, w: Weights) -> QSpec {
    let n = state.dim();
    let k = state.n_unmatched();
    let w = w.effective(k);
    let mut q = QSpec::new(n);
    for i in 1..=n {
        if !state.is_unmatched(i) {
            q.set_unchecked(i, i, 1.0 - w.b);
            q.set_unchecked(i, 0, w.b);
            q.set_unchecked(0, i, w.b);
        }
    }
    let u = state.unmatched();
    for &i in u {
        q.set_unchecked(i, 0, w.u);
        q.set_unchecked(0, i, w.u);
    }
    if k >= 2 {
        pair_up(&mut q, u, (1.0 - w.u) / (k - 1) as f64);
    }
    q
}

/// Rates of the distance process implied by `q` at `state`.
pub fn lambda_rates(q: &QSpec, state: &CouplingState) -> Result<LambdaVector, StrategyError> {
    if q.dim() != state.dim() {
        return Err(StrategyError::DimensionMismatch {
            q: q.dim(),
            state: state.dim(),
        });
    }
    let mut l = LambdaVector::zero(state.dim(), state.n_unmatched());
    let in_u = |i: usize| state.is_unmatched(i);
    for ((i, j), r) in q.entries() {
        match (i, j) {
            (i, 0) | (0, i) => {
                if in_u(i) {
                    l.down1 += r;
                } else {
                    l.up1 += r;
                }
            }
            (i, j) if i == j => l.stay += r,
            (i, j) => match (in_u(i), in_u(j)) {
                (true, true) => l.down2 += r,
                (false, false) => l.up2 += r,
                _ => l.stay += r,
            },
        }
    }
    Ok(l)
}

/// Anything that can choose `Q` from the current state.
///
/// Controls in the `(u, b)` family also expose their weights, which lets
/// the simulator sample events structurally without building `Q`.
pub trait Control: Send + Sync {
    fn qspec(&self, state: &CouplingState) -> Result<QSpec, StrategyError>;

    fn weights(&self, _k: usize) -> Option<Weights> {
        None
    }

    fn label(&self) -> String;
}

/// The built-in strategies.
#[derive(Debug, Clone, PartialEq)]
pub enum Strategy {
    Optimal,
    Aldous,
    Independent,
    Parametric { name: String, params: StrategyParams },
}

impl Strategy {
    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "optimal" => Some(Self::Optimal),
            "aldous" => Some(Self::Aldous),
            "independent" => Some(Self::Independent),
            _ => None,
        }
    }
}

impl Control for Strategy {
    fn qspec(&self, state: &CouplingState) -> Result<QSpec, StrategyError> {
        match self {
            Strategy::Optimal => Ok(optimal_q(state)),
            Strategy::Aldous => Ok(aldous_q(state)),
            Strategy::Independent => Ok(weighted_q(state, Weights::INDEPENDENT)),
            Strategy::Parametric { params, .. } => parametric_q(state, params),
        }
    }

    fn weights(&self, k: usize) -> Option<Weights> {
        match self {
            Strategy::Optimal => Some(if k % 2 == 1 {
                Weights::SINGLES_SYNC
            } else {
                Weights::SYNC_PAIRS
            }),
            Strategy::Aldous => Some(Weights::SYNC_PAIRS),
            Strategy::Independent => Some(Weights::INDEPENDENT),
            Strategy::Parametric { params, .. } => params.weights(k),
        }
    }

    fn label(&self) -> String {
        match self {
            Strategy::Optimal => "optimal".into(),
            Strategy::Aldous => "aldous".into(),
            Strategy::Independent => "independent".into(),
            Strategy::Parametric { name, .. } => name.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercube::Vertex;

    fn state(x: &str, y: &str) -> CouplingState {
        CouplingState::new(x.parse().unwrap(), y.parse().unwrap()).unwrap()
    }

    fn all_states(n: usize) -> Vec<CouplingState> {
        let verts: Vec<Vertex> = (0..1u32 << n)
            .map(|m| Vertex::from_bits(&(0..n).map(|b| m >> b & 1 == 1).collect::<Vec<_>>()).unwrap())
            .collect();
        let mut out = Vec::new();
        for x in &verts {
            for y in &verts {
                out.push(CouplingState::new(x.clone(), y.clone()).unwrap());
            }
        }
        out
    }

    #[test]
    fn optimal_q_examples() {
        let q = optimal_q(&state("000", "110"));
        assert_eq!(q.rate(3, 3), 1.0);
        assert_eq!(q.rate(1, 2), 1.0);
        assert_eq!(q.rate(2, 1), 1.0);
        assert_eq!(q.len(), 3);

        let q = optimal_q(&state("000", "111"));
        for i in 1..=3 {
            assert_eq!(q.rate(i, 0), 1.0);
            assert_eq!(q.rate(0, i), 1.0);
            assert_eq!(q.rate(i, i), 0.0);
        }
        assert_eq!(q.len(), 6);

        let q = optimal_q(&state("01", "01"));
        assert_eq!(q.rate(1, 1), 1.0);
        assert_eq!(q.rate(2, 2), 1.0);
        assert_eq!(q.len(), 2);
    }

    #[test]
    fn aldous_q_examples() {
        let s = state("0000", "1111");
        assert_eq!(aldous_q(&s), optimal_q(&s));

        let q = aldous_q(&state("000", "111"));
        for i in 1..=3 {
            for j in 1..=3 {
                assert_eq!(q.rate(i, j), if i == j { 0.0 } else { 0.5 });
            }
            assert_eq!(q.rate(i, 0), 0.0);
        }
        assert_ne!(q, optimal_q(&state("000", "111")));

        let q = aldous_q(&state("00", "01"));
        assert_eq!(q.rate(2, 0), 1.0);
        assert_eq!(q.rate(0, 2), 1.0);
        assert_eq!(q.rate(1, 1), 1.0);
    }

    #[test]
    fn parametric_examples() {
        let s = state("0000", "1100");
        let q = parametric_q(&s, &StrategyParams::optimal(4)).unwrap();
        assert_eq!(q, optimal_q(&s));

        let s = state("0000", "1111");
        let mut table = vec![Weights::SYNC_PAIRS; 5];
        table[4] = Weights { u: 0.5, b: 0.0 };
        let q = parametric_q(&s, &StrategyParams::new(table).unwrap()).unwrap();
        for i in 1..=4 {
            assert_eq!(q.rate(i, 0), 0.5);
            assert_eq!(q.rate(0, i), 0.5);
            for j in 1..=4 {
                if i != j {
                    assert!((q.rate(i, j) - 1.0 / 6.0).abs() < 1e-15);
                }
            }
        }
        validate_qspec(&q).unwrap();

        let s = state("010110", "011011");
        let q = parametric_q(&s, &StrategyParams::independent(6)).unwrap();
        assert!(q.entries().all(|((i, j), _)| i == 0 || j == 0));
        let l = lambda_rates(&q, &s).unwrap();
        assert_eq!(
            (l.down1, l.up1, l.down2, l.up2, l.stay),
            (6.0, 6.0, 0.0, 0.0, 0.0)
        );

        let bad = StrategyParams::new(vec![Weights { u: 1.5, b: 0.0 }]);
        assert!(matches!(bad, Err(StrategyError::InvalidParams(_))));
        let small = StrategyParams::optimal(2);
        assert!(matches!(
            parametric_q(&state("000", "111"), &small),
            Err(StrategyError::TableTooSmall { .. })
        ));
    }

    #[test]
    fn k1_forces_singles() {
        let s = state("0000", "0010");
        let q = parametric_q(&s, &StrategyParams::aldous(4)).unwrap();
        assert_eq!(q.rate(3, 0), 1.0);
        assert_eq!(q.rate(0, 3), 1.0);
        assert_eq!(q, aldous_q(&s));
    }

    #[test]
    fn validate_examples() {
        let mut q = QSpec::new(1);
        q.set(1, 1, 1.0).unwrap();
        q.set(1, 0, 1.0).unwrap();
        let err = validate_qspec(&q).unwrap_err();
        assert!(err.0.contains(&Violation::Row { i: 1, sum: 2.0 }));

        let mut q = QSpec::new(2);
        q.set(1, 1, 1.5).unwrap();
        q.set(1, 0, -0.5).unwrap();
        q.set(0, 1, -0.5).unwrap();
        q.set(2, 2, 1.0).unwrap();
        let err = validate_qspec(&q).unwrap_err();
        assert!(err.to_string().contains("negative rate at (1,0)"));
        assert_eq!(QSpec::new(2).set(0, 0, 1.0), Err(StrategyError::NullEntry));
        assert!(QSpec::new(2).set(3, 0, 1.0).is_err());
    }

    #[test]
    fn lambda_examples() {
        let n = 7;
        for k in 0..=n {
            let s = CouplingState::new(Vertex::zeros(n).unwrap(), Vertex::with_prefix_ones(n, k).unwrap())
                .unwrap();
            let l = lambda_rates(&optimal_q(&s), &s).unwrap();
            let expect = LambdaVector::optimal(n, k);
            for (a, b) in l.as_array().iter().zip(expect.as_array()) {
                assert!((a - b).abs() < 1e-12, "k={k}: {l:?}");
            }
        }
    }

    #[test]
    fn every_constructor_is_admissible_for_small_n() {
        let grid = [0.0, 0.25, 0.5, 0.75, 1.0];
        for n in 1..=6 {
            let mut controls = vec![Strategy::Optimal, Strategy::Aldous, Strategy::Independent];
            for &u in &grid {
                for &b in &grid {
                    controls.push(Strategy::Parametric {
                        name: format!("u{u}b{b}"),
                        params: StrategyParams::by_parity(n, u, 1.0 - u, b).unwrap(),
                    });
                }
            }
            for s in all_states(n) {
                for c in &controls {
                    let q = c.qspec(&s).unwrap();
                    validate_qspec(&q).unwrap_or_else(|e| panic!("{} at {s:?}: {e}", c.label()));
                    let l = lambda_rates(&q, &s).unwrap();
                    l.check().unwrap();
                    assert_eq!(l.up2, 0.0);
                    // structural weights describe the same matrix
                    let w = c.weights(s.n_unmatched()).unwrap();
                    assert_eq!(weighted_q(&s, w), q, "{}", c.label());
                }
                let k = s.n_unmatched();
                assert_eq!(optimal_q(&s) == aldous_q(&s), k % 2 == 0 || k == 1);
            }
        }
    }

    #[test]
    fn strategy_file_parsing() {
        let text = "[\n  {\"k\": 1, \"u\": 1.0, \"b\": 0.0},\n  {\"k\": 3, \"u\": 0.5, \"b\": 0.25}\n]";
        let p = StrategyParams::from_json_str(text, 4).unwrap();
        assert_eq!(p.weights(3), Some(Weights { u: 0.5, b: 0.25 }));
        assert_eq!(p.weights(2), Some(Weights::SYNC_PAIRS));
        assert_eq!(p.max_k(), 4);

        let bad = "[\n  {\"k\": 1, \"u\": 1.0, \"b\": 0.0},\n  {\"k\": 2, \"u\": 2.0, \"b\": 0.0}\n]";
        assert_eq!(
            StrategyParams::from_json_str(bad, 4).unwrap_err(),
            StrategyFileError::Entry {
                line: 3,
                message: "u = 2 is outside [0, 1]".into()
            }
        );

        let broken = "[\n {\"k\": 1,\n \"u\": }\n]";
        match StrategyParams::from_json_str(broken, 4).unwrap_err() {
            StrategyFileError::Syntax { line, .. } => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        let dup = "[{\"k\": 1, \"u\": 1.0, \"b\": 0.0},\n{\"k\": 1, \"u\": 1.0, \"b\": 0.0}]";
        assert!(matches!(
            StrategyParams::from_json_str(dup, 4),
            Err(StrategyFileError::Entry { line: 2, .. })
        ));
        let big = "[{\"k\": 9, \"u\": 1.0, \"b\": 0.0}]";
        assert!(StrategyParams::from_json_str(big, 4).is_err());
    }
}
