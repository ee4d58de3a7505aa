use std::fs;
use std::ops::RangeInclusive;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::Serialize;

use probid_core::groups::{build_tower, AnyTower, GroupSpec, QuotientTower, TowerLevel};
use probid_core::lie::{find_fixed_point, Endomorphism, FixedPoint};
use probid_core::measure::{
    cc_measure, coset_scan, default_family, tower_prob, witness_lift, Budget, LiftMethod, LiftOutcome,
    ProbConfig, DEFAULT_EVALUATION_BUDGET, DIVERGENCE_FACTOR,
};
use probid_core::padic::{torsion_coset_criterion, Candidate, Verdict};
use probid_core::series::{weierstrass_prepare, zero_counts, SeriesLiteral, TruncatedSeries, DEFAULT_ZERO_BUDGET};
use probid_core::words::{Word, WordError};
use probid_core::ExecMode;

use crate::output::{emit_document, emit_rows, list};
use crate::{CcArgs, Command, Common, Format, LieArgs, Outcome, ProbArgs, ScanArgs, SeriesArgs, TorsionArgs, ZeroArgs};

pub fn run(command: &Command) -> Result<Outcome> {
    match command {
        Command::Prob(a) => prob(a),
        Command::Scan(a) => scan(a),
        Command::Ccmeasure(a) => ccmeasure(a),
        Command::TorsionCheck(a) => torsion_check(a),
        Command::Weierstrass(a) => weierstrass(a),
        Command::Zerocount(a) => zerocount(a),
        Command::Liefix(a) => liefix(a),
    }
}

/// Sets up the worker pool; one worker means the sequential code path.
fn exec_mode(common: &Common) -> Result<ExecMode> {
    match common.workers {
        Some(0) => bail!("--workers must be at least 1"),
        Some(1) => Ok(ExecMode::Sequential),
        #[cfg(feature = "parallel")]
        Some(n) => {
            // a second build in the same process keeps the first pool
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            Ok(ExecMode::Parallel)
        }
        #[cfg(not(feature = "parallel"))]
        Some(_) => Ok(ExecMode::Sequential),
        None => Ok(ExecMode::default()),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

/// Parses `a..b`, `a..=b` (both inclusive) or a single level `k`.
pub fn parse_levels(text: &str) -> Result<RangeInclusive<u32>> {
    let bad = || anyhow!("invalid level range '{text}': expected a..b or k");
    let (lo, hi) = match text.split_once("..") {
        Some((lo, hi)) => (lo.trim(), hi.trim().trim_start_matches('=')),
        None => (text.trim(), text.trim()),
    };
    let (lo, hi): (u32, u32) = (lo.parse().map_err(|_| bad())?, hi.parse().map_err(|_| bad())?);
    if lo == 0 || hi < lo {
        bail!("invalid level range '{text}': need 1 <= a <= b");
    }
    Ok(lo..=hi)
}

fn parse_word(text: &str) -> Result<Word> {
    Word::parse_minimal(text).map_err(|e| {
        let pos = match &e {
            WordError::Syntax { pos, .. } | WordError::VariableOutOfRange { pos, .. } => Some(*pos),
            _ => None,
        };
        match pos {
            Some(pos) => anyhow!("invalid word: {e}\n  {text}\n  {}^", " ".repeat(pos)),
            None => anyhow!("invalid word: {e}"),
        }
    })
}

fn load_tower(common: &Common, levels: Option<&str>) -> Result<AnyTower> {
    let spec = GroupSpec::from_json(&read(&common.spec)?)?;
    let range = match levels {
        Some(text) => parse_levels(text)?,
        None => spec.levels().unwrap_or(1..=1),
    };
    Ok(build_tower(&spec, range)?)
}

fn budget(mode: ExecMode, max: Option<u64>) -> Budget {
    Budget { max_evaluations: max.unwrap_or(DEFAULT_EVALUATION_BUDGET), mode }
}

fn prob(a: &ProbArgs) -> Result<Outcome> {
    let mode = exec_mode(&a.common)?;
    let w = parse_word(&a.word)?;
    let tower = load_tower(&a.common, a.levels.as_deref())?;
    let config = ProbConfig { budget: budget(mode, a.budget), mc_samples: a.samples, seed: a.seed };
    let report = match &tower {
        AnyTower::Semidirect(t) => tower_prob(t, &w, &config)?,
        AnyTower::Matrix(t) => tower_prob(t, &w, &config)?,
    };
    emit_rows(&report.rows, a.common.format.unwrap_or(Format::Csv), a.common.out.as_deref())?;
    Ok(if report.used_monte_carlo() { Outcome::Degraded } else { Outcome::Complete })
}

#[derive(Serialize)]
struct ScanRow {
    witness: usize,
    witness_level: u32,
    subgroup: String,
    subgroup_order: u64,
    index: u64,
    reps: String,
    bound_num: u64,
    bound_den: u64,
    check_level: u32,
    method: String,
    outcome: String,
    counterexample: String,
}

fn method_name(m: &LiftMethod) -> String {
    serde_json::to_value(m).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default()
}

fn scan_tower<G: TowerLevel>(tower: &QuotientTower<G>, w: &Word, budget: &Budget, seed: u64) -> Result<(Vec<ScanRow>, bool)> {
    let base = tower.level(0);
    let family = default_family(base);
    let witnesses = coset_scan(base, w, &family, budget)?;
    let ints = |xs: &[G::Element], g: &G| list(&xs.iter().map(|x| g.element_to_integers(x)).collect::<Vec<_>>());
    let mut rows = Vec::new();
    let mut degraded = false;
    for (id, wit) in witnesses.iter().enumerate() {
        let subgroup = family
            .iter()
            .find(|h| h.label == wit.subgroup_label && h.kind == wit.subgroup_kind)
            .expect("witness subgroups come from the family");
        let bound = wit.probability_lower_bound();
        let row = |check_level: u32, method: String, outcome: &str, counterexample: String| ScanRow {
            witness: id,
            witness_level: wit.level,
            subgroup: wit.subgroup_label.clone(),
            subgroup_order: wit.subgroup_order,
            index: wit.index,
            reps: ints(&wit.reps, base),
            bound_num: *bound.numer(),
            bound_den: *bound.denom(),
            check_level,
            method,
            outcome: outcome.into(),
            counterexample,
        };
        rows.push(row(wit.level, "exhaustive".into(), "verified", String::new()));
        for status in witness_lift(tower, wit, subgroup, w, budget, seed)? {
            let fine = tower.levels().iter().find(|g| g.level() == status.level).expect("lift levels are tower levels");
            let (outcome, ce) = match &status.outcome {
                LiftOutcome::Verified => ("verified", String::new()),
                LiftOutcome::Refuted { counterexample } => ("refuted", ints(counterexample, fine)),
                LiftOutcome::Undecided => {
                    degraded = true;
                    ("undecided", String::new())
                }
            };
            rows.push(row(status.level, method_name(&status.method), outcome, ce));
        }
    }
    Ok((rows, degraded))
}

fn scan(a: &ScanArgs) -> Result<Outcome> {
    let mode = exec_mode(&a.common)?;
    let w = parse_word(&a.word)?;
    let tower = load_tower(&a.common, a.levels.as_deref())?;
    let b = budget(mode, a.budget);
    let (rows, degraded) = match &tower {
        AnyTower::Semidirect(t) => scan_tower(t, &w, &b, a.seed)?,
        AnyTower::Matrix(t) => scan_tower(t, &w, &b, a.seed)?,
    };
    if rows.is_empty() {
        eprintln!("no coset identity for {w} in the scanned family at the first level");
    }
    emit_rows(&rows, a.common.format.unwrap_or(Format::Csv), a.common.out.as_deref())?;
    Ok(if degraded { Outcome::Degraded } else { Outcome::Complete })
}

#[derive(Serialize)]
struct CcRow {
    level: u32,
    group_order: u64,
    centralizer_order: u64,
    running_sup: u64,
    measure_num: u64,
    measure_den: u64,
    status: &'static str,
}

fn cc_rows<G: TowerLevel>(tower: &QuotientTower<G>, ints: &[i64], mode: ExecMode) -> Result<Vec<CcRow>> {
    let path = tower.path_from_integers(ints)?;
    let report = cc_measure(tower, &path, mode)?;
    let threshold = tower.level(0).order().saturating_mul(DIVERGENCE_FACTOR);
    let rows: Vec<CcRow> = report
        .levels
        .iter()
        .map(|l| {
            let divergent = l.running_sup > threshold;
            CcRow {
                level: l.level,
                group_order: l.group_order,
                centralizer_order: l.centralizer_order,
                running_sup: l.running_sup,
                measure_num: u64::from(!divergent),
                measure_den: if divergent { 1 } else { l.running_sup },
                status: if divergent { "divergent" } else { "value" },
            }
        })
        .collect();
    Ok(rows)
}

fn ccmeasure(a: &CcArgs) -> Result<Outcome> {
    let mode = exec_mode(&a.common)?;
    let ints: Vec<i64> =
        serde_json::from_str(&a.element).with_context(|| format!("--element must be a JSON integer list, got '{}'", a.element))?;
    let tower = load_tower(&a.common, a.levels.as_deref())?;
    let rows = match &tower {
        AnyTower::Semidirect(t) => cc_rows(t, &ints, mode)?,
        AnyTower::Matrix(t) => cc_rows(t, &ints, mode)?,
    };
    emit_rows(&rows, a.common.format.unwrap_or(Format::Csv), a.common.out.as_deref())?;
    Ok(Outcome::Complete)
}

#[derive(Serialize)]
struct TorsionRow {
    candidate: usize,
    verdict: Verdict,
    det_valuation: String,
    fixed_vector: String,
    norm_operator_zero: bool,
    precision: u32,
}

fn torsion_check(a: &TorsionArgs) -> Result<Outcome> {
    let value: serde_json::Value = serde_json::from_str(&read(&a.common.spec)?).context("candidate file is not JSON")?;
    let (items, single) = match value {
        serde_json::Value::Array(items) => (items, false),
        other => (vec![other], true),
    };
    let mut verdicts = Vec::with_capacity(items.len());
    for (i, item) in items.into_iter().enumerate() {
        let c: Candidate = serde_json::from_value(item).with_context(|| format!("candidate {i}"))?;
        c.validate().with_context(|| format!("candidate {i}"))?;
        verdicts.push(torsion_coset_criterion(&c).with_context(|| format!("candidate {i}"))?);
    }
    let rows: Vec<TorsionRow> = verdicts
        .iter()
        .enumerate()
        .map(|(i, v)| TorsionRow {
            candidate: i,
            verdict: v.verdict,
            det_valuation: v.det_valuation.to_string(),
            fixed_vector: v
                .fixed_vector
                .as_ref()
                .map(|f| list(&f.iter().map(|x| serde_json::Value::from(x.to_string().parse::<i64>().ok())).collect::<Vec<_>>()))
                .unwrap_or_default(),
            norm_operator_zero: v.norm_operator_zero,
            precision: v.precision,
        })
        .collect();
    let format = a.common.format.unwrap_or(Format::Json);
    if single {
        emit_document(&verdicts[0], &rows, format, a.common.out.as_deref())?;
    } else {
        emit_document(&verdicts, &rows, format, a.common.out.as_deref())?;
    }
    let undecided = verdicts.iter().any(|v| v.verdict == Verdict::Undecided);
    Ok(if undecided { Outcome::Degraded } else { Outcome::Complete })
}

fn load_series(path: &Path) -> Result<TruncatedSeries> {
    Ok(TruncatedSeries::from_json(&read(path)?)?)
}

#[derive(Serialize)]
struct PreparationDoc {
    degree: u32,
    degenerate: bool,
    q: SeriesLiteral,
    u: SeriesLiteral,
}

#[derive(Serialize)]
struct PreparationRow {
    factor: &'static str,
    degree: u32,
    degenerate: bool,
    exp: String,
    coeff: String,
}

fn weierstrass(a: &SeriesArgs) -> Result<Outcome> {
    exec_mode(&a.common)?;
    let f = load_series(&a.common.spec)?;
    let prep = weierstrass_prepare(&f)?;
    let mut rows = Vec::new();
    for (factor, s) in [("q", &prep.q), ("u", &prep.u)] {
        for (e, c) in s.terms() {
            rows.push(PreparationRow {
                factor,
                degree: prep.degree,
                degenerate: prep.degenerate,
                exp: list(e),
                coeff: c.to_string(),
            });
        }
    }
    let doc = PreparationDoc { degree: prep.degree, degenerate: prep.degenerate, q: prep.q.to_literal(), u: prep.u.to_literal() };
    emit_document(&doc, &rows, a.common.format.unwrap_or(Format::Json), a.common.out.as_deref())?;
    Ok(Outcome::Complete)
}

fn zerocount(a: &ZeroArgs) -> Result<Outcome> {
    let mode = exec_mode(&a.common)?;
    let f = load_series(&a.common.spec)?;
    let levels = match &a.levels {
        Some(text) => parse_levels(text)?,
        None => 1..=f.precision().min(3),
    };
    let rows = zero_counts(&f, levels, a.budget.unwrap_or(DEFAULT_ZERO_BUDGET), mode)?;
    emit_rows(&rows, a.common.format.unwrap_or(Format::Csv), a.common.out.as_deref())?;
    Ok(Outcome::Complete)
}

#[derive(Serialize)]
struct LieRow {
    degree: Option<u32>,
    vector: Option<String>,
    none_up_to: Option<u32>,
}

fn liefix(a: &LieArgs) -> Result<Outcome> {
    let mode = exec_mode(&a.common)?;
    let e = Endomorphism::from_json(&read(&a.common.spec)?)?;
    let found = find_fixed_point(&e, a.degree, mode)?;
    let row = match &found {
        FixedPoint::Found { degree, .. } => {
            let json = serde_json::to_value(&found)?;
            LieRow { degree: Some(*degree), vector: Some(json["vector"].to_string()), none_up_to: None }
        }
        FixedPoint::NoneUpTo { none_up_to } => LieRow { degree: None, vector: None, none_up_to: Some(*none_up_to) },
    };
    emit_document(&found, &[row], a.common.format.unwrap_or(Format::Json), a.common.out.as_deref())?;
    Ok(Outcome::Complete)
}
