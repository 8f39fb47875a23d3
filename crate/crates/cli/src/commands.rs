use std::fmt;
use std::io::Write;
use std::path::Path;

use lieflag_core::config::SessionConfig;
use lieflag_core::flag_curvature::{compare_engines_with, EngineGroup};
use lieflag_core::frames::validate_tag;
use lieflag_core::wolf_scan::{scan_detailed, FlagSample};
use lieflag_core::{canonicalize_flag, classify as classify_metric, DVector, Engine, Error, Flag, Verdict};
use serde::Serialize;

use crate::EngineSelection;

const DEFAULT_SAMPLES: usize = 10_000;

/// Why a command stopped. Parse and IO problems exit with 2, everything
/// the domain rejects with 1.
#[derive(Debug)]
pub enum Failure {
    Parse(String),
    Io(String),
    Domain(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Parse(_) | Failure::Io(_) => 2,
            Failure::Domain(_) => 1,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Parse(m) => write!(f, "parse error: {m}"),
            Failure::Io(m) => write!(f, "io error: {m}"),
            Failure::Domain(m) => f.write_str(m),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

pub fn load(path: &Path) -> Result<SessionConfig, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    SessionConfig::from_json(&text).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

pub fn emit<T: Serialize>(report: &T, path: Option<&Path>) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(report).expect("reports serialize");
    text.push('\n');
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(format!("stdout: {e}"))),
    }
}

fn coords(v: &DVector<f64>) -> Vec<f64> {
    v.iter().copied().collect()
}

#[derive(Serialize)]
pub struct FlagOut {
    y: Vec<f64>,
    v: Vec<f64>,
}

impl From<&Flag> for FlagOut {
    fn from(f: &Flag) -> Self {
        Self {
            y: coords(f.y()),
            v: coords(f.v()),
        }
    }
}

// ---- check ----

#[derive(Serialize)]
pub struct CheckItem {
    name: &'static str,
    ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    message: Option<String>,
}

impl CheckItem {
    fn pass(name: &'static str, residual: Option<f64>) -> Self {
        Self { name, ok: true, residual, message: None }
    }

    fn fail(name: &'static str, residual: Option<f64>, message: String) -> Self {
        Self { name, ok: false, residual, message: Some(message) }
    }
}

#[derive(Serialize)]
pub struct CheckReport {
    ok: bool,
    checks: Vec<CheckItem>,
    violations: Vec<String>,
}

fn finish(checks: Vec<CheckItem>) -> (CheckReport, bool) {
    let violations: Vec<String> = checks
        .iter()
        .filter(|c| !c.ok)
        .map(|c| format!("{}: {}", c.name, c.message.as_deref().unwrap_or("failed")))
        .collect();
    let ok = violations.is_empty();
    (CheckReport { ok, checks, violations }, ok)
}

/// Validates everything the config describes; the flag is `true` iff all pass.
pub fn check(cfg: &SessionConfig, tol: f64) -> (CheckReport, bool) {
    let mut checks = Vec::new();
    let alg = match cfg.algebra.resolve() {
        Ok(a) => a,
        Err(Error::JacobiViolation { i, j, k, residual }) => {
            checks.push(CheckItem::fail(
                "jacobi",
                Some(residual),
                format!("triple ({}, {}, {}) residual {residual:e}", i + 1, j + 1, k + 1),
            ));
            return finish(checks);
        }
        Err(e) => {
            checks.push(CheckItem::fail("algebra", None, e.to_string()));
            return finish(checks);
        }
    };
    checks.push(CheckItem::pass("antisymmetry", Some(alg.antisymmetry_residual())));
    checks.push(CheckItem::pass("jacobi", Some(alg.jacobi_residual().0)));

    let session = match cfg.resolve() {
        Ok(s) => s,
        Err(e @ (Error::NotSymmetric(_) | Error::NotPositiveDefinite | Error::SingularMetric)) => {
            checks.push(CheckItem::fail("metric", None, e.to_string()));
            return finish(checks);
        }
        Err(e) => {
            checks.push(CheckItem::fail("config", None, e.to_string()));
            return finish(checks);
        }
    };
    checks.push(CheckItem::pass("metric", None));

    match session.finsler() {
        Err(e) => checks.push(CheckItem::fail("drift", None, e.to_string())),
        Ok(m) => {
            match m.admissibility_check() {
                lieflag_core::finsler::Admissibility::Admissible => {
                    checks.push(CheckItem::pass("admissibility", Some(m.drift_norm())))
                }
                lieflag_core::finsler::Admissibility::Violation(msg) => {
                    checks.push(CheckItem::fail("admissibility", Some(m.drift_norm()), msg))
                }
            }
            for (idx, (y, v)) in session.flags.iter().enumerate() {
                let item = match canonicalize_flag(&session.metric, y, v) {
                    Err(e) => CheckItem::fail("flags", None, format!("flag {}: {e}", idx + 1)),
                    Ok(f) if !m.in_domain(f.y()) => {
                        CheckItem::fail("flags", None, format!("flag {}: pole outside the domain of F", idx + 1))
                    }
                    Ok(_) => continue,
                };
                checks.push(item);
            }
        }
    }
    match validate_tag(&session.algebra, &session.metric, tol) {
        Ok(()) => checks.push(CheckItem::pass("tag", None)),
        Err(e) => checks.push(CheckItem::fail("tag", None, e.to_string())),
    }
    finish(checks)
}

// ---- classify ----

#[derive(Serialize)]
pub struct WitnessOut {
    condition: lieflag_core::classification::Condition,
    /// 1-based basis indices.
    pair: [usize; 2],
    residual: f64,
}

#[derive(Serialize)]
pub struct ClassifyReport {
    family: &'static str,
    verdict: &'static str,
    witnesses: Vec<WitnessOut>,
}

pub fn classify(cfg: &SessionConfig, tol: f64) -> Result<ClassifyReport, Failure> {
    let session = cfg.resolve()?;
    let m = session.finsler()?;
    let c = classify_metric(&m, tol)?;
    Ok(ClassifyReport {
        family: m.family().name(),
        verdict: c.verdict.name(),
        witnesses: c
            .witnesses
            .iter()
            .map(|w| WitnessOut {
                condition: w.condition,
                pair: [w.pair.0 + 1, w.pair.1 + 1],
                residual: w.residual,
            })
            .collect(),
    })
}

// ---- curvature ----

#[derive(Serialize)]
pub struct EngineValue {
    engine: &'static str,
    value: f64,
}

#[derive(Serialize)]
pub struct Skipped {
    engine: &'static str,
    reason: String,
}

#[derive(Serialize)]
pub struct Residual {
    a: &'static str,
    b: &'static str,
    value: f64,
}

#[derive(Serialize)]
pub struct FlagReport {
    index: usize,
    #[serde(flatten)]
    flag: FlagOut,
    k_riem: f64,
    values: Vec<EngineValue>,
    skipped: Vec<Skipped>,
    residuals: Vec<Residual>,
}

#[derive(Serialize)]
pub struct CurvatureOutput {
    family: &'static str,
    verdict: &'static str,
    flags: Vec<FlagReport>,
}

fn engines_for(sel: EngineSelection) -> Vec<Engine> {
    Engine::ALL
        .into_iter()
        .filter(|e| match sel {
            EngineSelection::All => true,
            EngineSelection::Generic => e.group() == EngineGroup::Generic,
            EngineSelection::Closed => e.group() == EngineGroup::Closed,
            EngineSelection::Scaling => e.group() == EngineGroup::Scaling,
        })
        .collect()
}

pub fn curvature(cfg: &SessionConfig, sel: EngineSelection) -> Result<CurvatureOutput, Failure> {
    let session = cfg.resolve()?;
    if session.flags.is_empty() {
        return Err(Failure::Domain("config lists no flags".into()));
    }
    let m = session.finsler()?;
    let verdict = classify_metric(&m, lieflag_core::RESIDUAL_TOL)?.verdict;
    let engines = engines_for(sel);
    let mut flags = Vec::new();
    for (idx, (y, v)) in session.flags.iter().enumerate() {
        let flag = canonicalize_flag(&session.metric, y, v).map_err(|e| Failure::Domain(format!("flag {}: {e}", idx + 1)))?;
        let report = compare_engines_with(&m, &flag, &engines);
        if report.values.is_empty() {
            let reasons: Vec<String> = report.skipped.iter().map(|(e, r)| format!("{}: {r}", e.name())).collect();
            return Err(Failure::Domain(format!(
                "flag {}: no requested engine applies ({})",
                idx + 1,
                reasons.join("; ")
            )));
        }
        flags.push(FlagReport {
            index: idx + 1,
            flag: FlagOut::from(&flag),
            k_riem: report.k_riem,
            values: report.values.iter().map(|(e, v)| EngineValue { engine: e.name(), value: *v }).collect(),
            skipped: report
                .skipped
                .iter()
                .map(|(e, r)| Skipped { engine: e.name(), reason: r.clone() })
                .collect(),
            residuals: report
                .residuals
                .iter()
                .map(|(a, b, v)| Residual { a: a.name(), b: b.name(), value: *v })
                .collect(),
        });
    }
    Ok(CurvatureOutput {
        family: m.family().name(),
        verdict: verdict.name(),
        flags,
    })
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> Failure + '_ {
    move |e| Failure::Io(format!("{}: {e}", path.display()))
}

pub fn write_curvature_csv(out: &CurvatureOutput, path: &Path) -> Result<(), Failure> {
    let err = csv_err(path);
    let mut w = csv::Writer::from_path(path).map_err(&err)?;
    w.write_record(["flag_index", "engine", "value"]).map_err(&err)?;
    for f in &out.flags {
        w.write_record([f.index.to_string(), "k_riem".into(), f.k_riem.to_string()]).map_err(&err)?;
        for v in &f.values {
            w.write_record([f.index.to_string(), v.engine.into(), v.value.to_string()]).map_err(&err)?;
        }
    }
    w.flush().map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

// ---- scan ----

#[derive(Serialize)]
pub struct ScanReport {
    family: &'static str,
    verdict: &'static str,
    samples: usize,
    seed: u64,
    min_value: f64,
    max_value: f64,
    min_flag: FlagOut,
    max_flag: FlagOut,
    zero_flag: Option<FlagOut>,
    zero_value: Option<f64>,
}

pub fn scan(
    cfg: &SessionConfig,
    samples: Option<usize>,
    seed: Option<u64>,
    force: bool,
) -> Result<(ScanReport, Vec<FlagSample>), Failure> {
    let session = cfg.resolve()?;
    let m = session.finsler()?;
    let samples = samples.or(session.scan.map(|s| s.samples)).unwrap_or(DEFAULT_SAMPLES);
    let seed = seed.or(session.scan.map(|s| s.seed)).unwrap_or(0);
    if samples == 0 {
        return Err(Failure::Domain("scan needs at least one sample".into()));
    }
    let verdict: Verdict = classify_metric(&m, lieflag_core::RESIDUAL_TOL)?.verdict;
    let (s, evaluated) = scan_detailed(&m, samples, seed, force)?;
    Ok((
        ScanReport {
            family: m.family().name(),
            verdict: verdict.name(),
            samples: s.samples,
            seed: s.seed,
            min_value: s.min_value,
            max_value: s.max_value,
            min_flag: FlagOut::from(&s.min_flag),
            max_flag: FlagOut::from(&s.max_flag),
            zero_flag: s.zero_flag.as_ref().map(FlagOut::from),
            zero_value: s.zero_value,
        },
        evaluated,
    ))
}

pub fn write_scan_csv(samples: &[FlagSample], path: &Path) -> Result<(), Failure> {
    let err = csv_err(path);
    let mut w = csv::Writer::from_path(path).map_err(&err)?;
    let n = samples.first().map_or(0, |s| s.flag.y().len());
    let mut header = vec!["sample_index".to_string()];
    header.extend((1..=n).map(|i| format!("y{i}")));
    header.extend((1..=n).map(|i| format!("v{i}")));
    header.extend(["K_F".to_string(), "K_g".to_string()]);
    w.write_record(&header).map_err(&err)?;
    for s in samples {
        let mut row = vec![s.index.to_string()];
        row.extend(s.flag.y().iter().map(|x| x.to_string()));
        row.extend(s.flag.v().iter().map(|x| x.to_string()));
        row.push(s.k_f.to_string());
        row.push(s.k_g.to_string());
        w.write_record(&row).map_err(&err)?;
    }
    w.flush().map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}
