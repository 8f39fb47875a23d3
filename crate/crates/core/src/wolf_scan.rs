//! Sign spectrum of flag curvature on non-commutative nilpotent groups.
//!
//! Random flags are drawn from a spherically symmetric distribution and
//! canonicalized. Sampling is split into fixed-size chunks, each driven by
//! its own ChaCha stream derived from the seed, so results do not depend on
//! the number of worker threads.

use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::classification::{classify, RESIDUAL_TOL};
use crate::error::{Error, Result};
use crate::finsler::{canonicalize_flag, AlphaBetaMetric, Family, Flag};
use crate::flag_curvature::{self, kropina_coefficient, matsumoto_coefficient};

/// Kropina poles are resampled until `g(X, y)` exceeds this.
pub const KROPINA_MIN_BETA: f64 = 0.1;
/// A located zero flag must satisfy `|K| < ZERO_TOL`.
pub const ZERO_TOL: f64 = 1e-8;
pub const MAX_BISECTIONS: usize = 80;

const CHUNK: usize = 256;
const MAX_DRAWS: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct FlagSample {
    pub index: usize,
    pub flag: Flag,
    pub k_f: f64,
    pub k_g: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignSpectrum {
    pub min_value: f64,
    pub max_value: f64,
    pub min_flag: Flag,
    pub max_flag: Flag,
    pub zero_flag: Option<Flag>,
    pub zero_value: Option<f64>,
    pub samples: usize,
    pub seed: u64,
}

/// Draws a random canonical flag admissible for `m`.
pub fn random_flag<R: rand::Rng + ?Sized>(m: &AlphaBetaMetric<'_>, rng: &mut R) -> Result<Flag> {
    let n = m.algebra().dim();
    for _ in 0..MAX_DRAWS {
        let y: DVector<f64> = DVector::from_fn(n, |_, _| StandardNormal.sample(rng));
        let v: DVector<f64> = DVector::from_fn(n, |_, _| StandardNormal.sample(rng));
        let Ok(flag) = canonicalize_flag(m.metric(), &y, &v) else { continue };
        if m.family() == Family::Kropina && !(m.beta(flag.y()) > KROPINA_MIN_BETA) {
            continue;
        }
        if m.in_domain(flag.y()) {
            return Ok(flag);
        }
    }
    Err(Error::NotApplicable(format!(
        "no admissible flag in {MAX_DRAWS} draws"
    )))
}

fn chunk_rng(seed: u64, chunk: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk as u64);
    rng
}

/// Runs `per_flag` over `samples` random flags, in parallel, deterministically.
fn sample_map<T, F>(m: &AlphaBetaMetric<'_>, samples: usize, seed: u64, per_flag: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize, Flag) -> Result<T> + Sync,
{
    let chunks = samples.div_ceil(CHUNK);
    let nested: Vec<Result<Vec<T>>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = chunk_rng(seed, c);
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(samples);
            (lo..hi)
                .map(|i| random_flag(m, &mut rng).and_then(|flag| per_flag(i, flag)))
                .collect()
        })
        .collect();
    let mut out = Vec::with_capacity(samples);
    for r in nested {
        out.extend(r?);
    }
    Ok(out)
}

fn check_scannable(m: &AlphaBetaMetric<'_>) -> Result<()> {
    let alg = m.algebra();
    if alg.is_abelian() || alg.derived_subalgebra().is_empty() || !alg.is_nilpotent() {
        return Err(Error::NonAdmissibleGroup);
    }
    if !classify(m, RESIDUAL_TOL)?.verdict.is_berwald() {
        return Err(Error::NotApplicable(format!(
            "{} metric is not of Berwald type",
            m.family()
        )));
    }
    Ok(())
}

/// Flag curvature and sectional curvature at `samples` random flags.
/// Skips the group checks; the metric must still be of Berwald type.
pub fn evaluate_samples(m: &AlphaBetaMetric<'_>, samples: usize, seed: u64) -> Result<Vec<FlagSample>> {
    if !classify(m, RESIDUAL_TOL)?.verdict.is_berwald() {
        return Err(Error::NotApplicable("metric is not of Berwald type".into()));
    }
    sample_map(m, samples, seed, |index, flag| {
        let k_f = flag_curvature::generic_value(m, &flag)?;
        let k_g = flag_curvature::k_riem(m, &flag);
        Ok(FlagSample { index, flag, k_f, k_g })
    })
}

/// Extremes of the flag curvature over random flags, and a flag where it
/// vanishes when both signs occur.
pub fn scan(m: &AlphaBetaMetric<'_>, samples: usize, seed: u64) -> Result<SignSpectrum> {
    scan_detailed(m, samples, seed, false).map(|(s, _)| s)
}

/// Scan without the group checks (non-nilpotent input allowed).
pub fn scan_forced(m: &AlphaBetaMetric<'_>, samples: usize, seed: u64) -> Result<SignSpectrum> {
    scan_detailed(m, samples, seed, true).map(|(s, _)| s)
}

/// The spectrum together with every evaluated sample. `force` skips the
/// non-commutative nilpotent check.
pub fn scan_detailed(
    m: &AlphaBetaMetric<'_>,
    samples: usize,
    seed: u64,
    force: bool,
) -> Result<(SignSpectrum, Vec<FlagSample>)> {
    if !force {
        check_scannable(m)?;
    }
    let evaluated = evaluate_samples(m, samples, seed)?;
    let spectrum = spectrum_from_samples(m, &evaluated, seed)?;
    Ok((spectrum, evaluated))
}

pub fn spectrum_from_samples(m: &AlphaBetaMetric<'_>, evaluated: &[FlagSample], seed: u64) -> Result<SignSpectrum> {
    let first = evaluated
        .first()
        .ok_or_else(|| Error::BadRange("scan needs at least one sample".into()))?;
    let (mut lo, mut hi) = (first, first);
    for s in evaluated {
        if s.k_f < lo.k_f {
            lo = s;
        }
        if s.k_f > hi.k_f {
            hi = s;
        }
    }
    let zero = if lo.k_f < 0.0 && hi.k_f > 0.0 {
        locate_zero(m, evaluated, lo, hi)
    } else {
        evaluated
            .iter()
            .find(|s| s.k_f.abs() < ZERO_TOL)
            .map(|s| (s.flag.clone(), s.k_f))
    };
    Ok(SignSpectrum {
        min_value: lo.k_f,
        max_value: hi.k_f,
        min_flag: lo.flag.clone(),
        max_flag: hi.flag.clone(),
        zero_value: zero.as_ref().map(|z| z.1),
        zero_flag: zero.map(|z| z.0),
        samples: evaluated.len(),
        seed,
    })
}

fn interpolate(m: &AlphaBetaMetric<'_>, a: &Flag, b: &Flag, flip_v: bool, t: f64) -> Result<(Flag, f64)> {
    let vb = if flip_v { -b.v() } else { b.v().clone() };
    let y = a.y() * (1.0 - t) + b.y() * t;
    let v = a.v() * (1.0 - t) + vb * t;
    let flag = canonicalize_flag(m.metric(), &y, &v)?;
    let k = flag_curvature::generic_value(m, &flag)?;
    Ok((flag, k))
}

/// Bisection on the straight path from a negative flag to a positive one.
fn bisect(m: &AlphaBetaMetric<'_>, neg: &Flag, pos: &Flag, flip_v: bool) -> Option<(Flag, f64)> {
    let (mut t0, mut t1) = (0.0_f64, 1.0_f64);
    let mut best: Option<(Flag, f64)> = None;
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (t0 + t1);
        let (flag, k) = interpolate(m, neg, pos, flip_v, mid).ok()?;
        if best.as_ref().is_none_or(|(_, b)| k.abs() < b.abs()) {
            best = Some((flag, k));
        }
        if k == 0.0 {
            break;
        }
        if k < 0.0 {
            t0 = mid;
        } else {
            t1 = mid;
        }
    }
    best.filter(|(_, k)| k.abs() < ZERO_TOL)
}

fn locate_zero(
    m: &AlphaBetaMetric<'_>,
    evaluated: &[FlagSample],
    lo: &FlagSample,
    hi: &FlagSample,
) -> Option<(Flag, f64)> {
    for flip in [false, true] {
        if let Some(z) = bisect(m, &lo.flag, &hi.flag, flip) {
            return Some(z);
        }
    }
    // The straight path can pass through a degenerate plane; try other pairs.
    let negs = evaluated.iter().filter(|s| s.k_f < 0.0).take(16);
    let poss: Vec<_> = evaluated.iter().filter(|s| s.k_f > 0.0).take(16).collect();
    for n in negs {
        for p in &poss {
            if let Some(z) = bisect(m, &n.flag, &p.flag, false) {
                return Some(z);
            }
        }
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientAudit {
    pub all_positive: bool,
    pub min_coefficient: f64,
    /// Matsumoto: every sample has `0 < 2 - F(y) < 4/3`. Always true for Kropina.
    pub f_bounds_hold: bool,
    pub samples: usize,
}

/// Samples the closed-form coefficient of `K^g` for Berwald Matsumoto and
/// Kropina metrics.
pub fn coefficient_audit(m: &AlphaBetaMetric<'_>, samples: usize, seed: u64) -> Result<CoefficientAudit> {
    if !matches!(m.family(), Family::Matsumoto | Family::Kropina) {
        return Err(Error::NotApplicable(format!(
            "coefficient audit needs matsumoto or kropina, got {}",
            m.family()
        )));
    }
    if !classify(m, RESIDUAL_TOL)?.verdict.is_berwald() {
        return Err(Error::NotApplicable("metric is not of Berwald type".into()));
    }
    if samples == 0 {
        return Err(Error::BadRange("coefficient audit needs at least one sample".into()));
    }
    let family = m.family();
    let values = sample_map(m, samples, seed, |_, flag| {
        let t = m.beta(flag.v());
        Ok(match family {
            Family::Matsumoto => {
                let f = 1.0 / (1.0 - m.beta(flag.y()));
                let two_minus_f = 2.0 - f;
                (
                    matsumoto_coefficient(f, t),
                    two_minus_f > 0.0 && two_minus_f < 4.0 / 3.0,
                )
            }
            _ => (kropina_coefficient(1.0 / m.beta(flag.y()), t), true),
        })
    })?;
    let min_coefficient = values.iter().map(|v| v.0).fold(f64::INFINITY, f64::min);
    Ok(CoefficientAudit {
        all_positive: values.iter().all(|v| v.0 > 0.0),
        min_coefficient,
        f_bounds_hold: values.iter().all(|v| v.1),
        samples,
    })
}
