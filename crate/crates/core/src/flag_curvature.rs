//! Flag-curvature engines.
//!
//! All engines take a canonical flag: `y` and `v` g-orthonormal. The factor
//! `g^2` in `(g^2 / F^2) K^g` is read as `g(y, y)^2`, which is `1` on a
//! canonical flag, so every closed form below carries the bare `1 / F^2`.
//!
//! The generic engine evaluates
//! `g_y(R_y(v), v) / (g_y(y, y) g_y(v, v) - g_y(y, v)^2)` with the
//! Levi-Civita curvature, which is only meaningful when the metric is of
//! Berwald type. Douglas-type Randers metrics use the `U`-map expression as
//! the reference.

use nalgebra::DVector;
use serde::Serialize;

use crate::classification::{classify, douglas_condition, RESIDUAL_TOL};
use crate::error::{Error, Result};
use crate::finsler::{AlphaBetaMetric, Family, Flag, FD_STEP};
use crate::frames::{G1Frame, G2Frame};
use crate::lie_algebra::LieAlgebra;
use crate::linalg::basis_vector;
use crate::riemannian::{self, ad_star_apply, Metric};

/// Allowed defect in `g(y, y) = g(v, v) = 1`, `g(y, v) = 0`.
const CANONICAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    Generic,
    GenericFd,
    RandersBerwald,
    MatsumotoBerwald,
    KropinaBerwald,
    RandersDouglasU,
    RandersDouglasAdStar,
    G1ClosedForm,
    G2ClosedForm,
    G2CentralForm,
    LiuDengScaling,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineGroup {
    Generic,
    Closed,
    Scaling,
}

impl Engine {
    pub const ALL: [Engine; 11] = [
        Engine::Generic,
        Engine::GenericFd,
        Engine::RandersBerwald,
        Engine::MatsumotoBerwald,
        Engine::KropinaBerwald,
        Engine::RandersDouglasU,
        Engine::RandersDouglasAdStar,
        Engine::G1ClosedForm,
        Engine::G2ClosedForm,
        Engine::G2CentralForm,
        Engine::LiuDengScaling,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Engine::Generic => "generic",
            Engine::GenericFd => "generic_fd",
            Engine::RandersBerwald => "randers_berwald",
            Engine::MatsumotoBerwald => "matsumoto_berwald",
            Engine::KropinaBerwald => "kropina_berwald",
            Engine::RandersDouglasU => "randers_douglas_u",
            Engine::RandersDouglasAdStar => "randers_douglas_ad_star",
            Engine::G1ClosedForm => "g1_closed_form",
            Engine::G2ClosedForm => "g2_closed_form",
            Engine::G2CentralForm => "g2_central_form",
            Engine::LiuDengScaling => "liu_deng_scaling",
        }
    }

    pub fn group(self) -> EngineGroup {
        match self {
            Engine::Generic | Engine::GenericFd => EngineGroup::Generic,
            Engine::LiuDengScaling => EngineGroup::Scaling,
            _ => EngineGroup::Closed,
        }
    }

    pub fn evaluate(self, m: &AlphaBetaMetric<'_>, flag: &Flag) -> Result<f64> {
        match self {
            Engine::Generic => flag_curvature_generic(m, flag, TensorBackend::Analytic),
            Engine::GenericFd => flag_curvature_generic(m, flag, TensorBackend::FiniteDifference(FD_STEP)),
            Engine::RandersBerwald => flag_curvature_randers_berwald(m, flag),
            Engine::MatsumotoBerwald => flag_curvature_matsumoto_berwald(m, flag),
            Engine::KropinaBerwald => flag_curvature_kropina_berwald(m, flag),
            Engine::RandersDouglasU => flag_curvature_randers_douglas(m, flag),
            Engine::RandersDouglasAdStar => flag_curvature_randers_douglas_ad_star(m, flag),
            Engine::G1ClosedForm => flag_curvature_g1(m, flag),
            Engine::G2ClosedForm => flag_curvature_g2_general(m, flag),
            Engine::G2CentralForm => flag_curvature_g2_central(m, flag),
            Engine::LiuDengScaling => liu_deng_scaling(m, flag),
        }
    }
}

/// How the generic engine obtains `g_y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TensorBackend {
    Analytic,
    FiniteDifference(f64),
}

fn ensure_canonical(g: &Metric, flag: &Flag) -> Result<()> {
    let (y, v) = (flag.y(), flag.v());
    if y.len() != g.dim() || v.len() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: g.dim(),
            got: y.len(),
        });
    }
    let d = (g.norm_sq(y) - 1.0)
        .abs()
        .max((g.norm_sq(v) - 1.0).abs())
        .max(g.inner(y, v).abs());
    if d > CANONICAL_TOL {
        return Err(Error::BadRange(format!("flag is not g-orthonormal (defect {d:e})")));
    }
    Ok(())
}

fn require_family(m: &AlphaBetaMetric<'_>, allowed: &[Family], expected: &'static str) -> Result<()> {
    if allowed.contains(&m.family()) {
        Ok(())
    } else {
        Err(Error::WrongFamily {
            expected,
            got: m.family().name(),
        })
    }
}

fn require_berwald(m: &AlphaBetaMetric<'_>) -> Result<()> {
    if classify(m, RESIDUAL_TOL)?.verdict.is_berwald() {
        Ok(())
    } else {
        Err(Error::NotBerwald)
    }
}

fn require_douglas(m: &AlphaBetaMetric<'_>) -> Result<()> {
    require_family(m, &[Family::Randers, Family::Riemannian], "randers")?;
    m.require_admissible()?;
    if douglas_condition(m.algebra(), m.metric(), m.drift(), RESIDUAL_TOL).holds {
        Ok(())
    } else {
        Err(Error::NotDouglas)
    }
}

/// Sectional curvature of the flag's plane.
pub fn k_riem(m: &AlphaBetaMetric<'_>, flag: &Flag) -> f64 {
    riemannian::sectional_orthonormal(m.algebra(), m.metric(), flag.y(), flag.v())
}

/// `g_y(R_y(v), v) / (g_y(y, y) g_y(v, v) - g_y(y, v)^2)` with the
/// Levi-Civita curvature, for Berwald-type metrics.
pub fn flag_curvature_generic(m: &AlphaBetaMetric<'_>, flag: &Flag, backend: TensorBackend) -> Result<f64> {
    ensure_canonical(m.metric(), flag)?;
    require_berwald(m)?;
    generic_with(m, flag, backend)
}

/// Generic engine without the canonical and Berwald checks; callers have
/// already established both.
pub(crate) fn generic_value(m: &AlphaBetaMetric<'_>, flag: &Flag) -> Result<f64> {
    generic_with(m, flag, TensorBackend::Analytic)
}

fn generic_with(m: &AlphaBetaMetric<'_>, flag: &Flag, backend: TensorBackend) -> Result<f64> {
    let (y, u) = (flag.y(), flag.v());
    let r = riemannian::curvature_vector(m.algebra(), m.metric(), u, y)?;
    let gy = |a: &DVector<f64>, b: &DVector<f64>| match backend {
        TensorBackend::Analytic => m.fundamental_tensor(y, a, b),
        TensorBackend::FiniteDifference(step) => m.fundamental_tensor_fd(y, a, b, step),
    };
    let num = gy(&r, u)?;
    let den = gy(y, y)? * gy(u, u)? - gy(y, u)?.powi(2);
    Ok(num / den)
}

/// `K^g(P) / F(y)^2`, the scaling that is exact for Berwald Randers metrics.
pub fn liu_deng_scaling(m: &AlphaBetaMetric<'_>, flag: &Flag) -> Result<f64> {
    ensure_canonical(m.metric(), flag)?;
    let f = m.f_value(flag.y())?;
    Ok(k_riem(m, flag) / (f * f))
}

pub fn flag_curvature_randers_berwald(m: &AlphaBetaMetric<'_>, flag: &Flag) -> Result<f64> {
    require_family(m, &[Family::Randers, Family::Riemannian], "randers")?;
    require_berwald(m)?;
    liu_deng_scaling(m, flag)
}

/// Coefficient of `K^g` for a Berwald Matsumoto metric at a unit pole with
/// `F = F(y)` and `t = g(X, v)`.
pub fn matsumoto_coefficient(f: f64, t: f64) -> f64 {
    (2.0 - f) / (f * f * (2.0 * f * f * t * t + 2.0 - f))
}

/// Coefficient of `K^g` for a Berwald Kropina metric.
pub fn kropina_coefficient(f: f64, t: f64) -> f64 {
    1.0 / (f.powi(4) * t * t + f * f)
}

pub fn flag_curvature_matsumoto_berwald(m: &AlphaBetaMetric<'_>, flag: &Flag) -> Result<f64> {
    require_family(m, &[Family::Matsumoto], "matsumoto")?;
    ensure_canonical(m.metric(), flag)?;
    require_berwald(m)?;
    // On a unit pole F = 1 / (1 - g(X, y)).
    let f = 1.0 / (1.0 - m.beta(flag.y()));
    m.f_value(flag.y())?;
    Ok(matsumoto_coefficient(f, m.beta(flag.v())) * k_riem(m, flag))
}

pub fn flag_curvature_kropina_berwald(m: &AlphaBetaMetric<'_>, flag: &Flag) -> Result<f64> {
    require_family(m, &[Family::Kropina], "kropina")?;
    ensure_canonical(m.metric(), flag)?;
    require_berwald(m)?;
    let beta = m.beta(flag.y());
    if !(beta > 0.0) {
        return Err(Error::OutsideDomain(format!("g(X, y) = {beta} <= 0")));
    }
    let f = 1.0 / beta;
    Ok(kropina_coefficient(f, m.beta(flag.v())) * k_riem(m, flag))
}

/// The symmetric map with `2 g(U(w, y), z) = g([z, w], y) + g([z, y], w)`.
pub fn u_map(alg: &LieAlgebra, g: &Metric, w: &DVector<f64>, y: &DVector<f64>) -> Result<DVector<f64>> {
    let n = alg.dim();
    for v in [w, y] {
        if v.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: v.len() });
        }
    }
    if g.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: g.dim() });
    }
    let cov = DVector::from_fn(n, |z, _| {
        let ez = basis_vector(n, z);
        0.5 * (g.inner(&alg.bracket_unchecked(&ez, w), y) + g.inner(&alg.bracket_unchecked(&ez, y), w))
    });
    Ok(g.raise(&cov))
}

/// Douglas Randers flag curvature through the `U` map:
/// `K^g / F^2 + (3 g(U(y, y), X)^2 - 4 F g(U(y, U(y, y)), X)) / (4 F^4)`.
pub fn flag_curvature_randers_douglas(m: &AlphaBetaMetric<'_>, flag: &Flag) -> Result<f64> {
    ensure_canonical(m.metric(), flag)?;
    require_douglas(m)?;
    let (alg, g, x, y) = (m.algebra(), m.metric(), m.drift(), flag.y());
    let f = m.f_value(y)?;
    let uyy = u_map(alg, g, y, y)?;
    let uyuyy = u_map(alg, g, y, &uyy)?;
    let corr = 3.0 * g.inner(&uyy, x).powi(2) - 4.0 * f * g.inner(&uyuyy, x);
    Ok(k_riem(m, flag) / (f * f) + corr / (4.0 * f.powi(4)))
}

/// The same quantity through brackets and `ad*`:
/// `K^g / F^2 + (3 g([X, y], y)^2 - 2 F (g([[X, y], y], y) - g(y, [X, ad*_y y]))) / (4 F^4)`.
pub fn flag_curvature_randers_douglas_ad_star(m: &AlphaBetaMetric<'_>, flag: &Flag) -> Result<f64> {
    ensure_canonical(m.metric(), flag)?;
    require_douglas(m)?;
    let (alg, g, x, y) = (m.algebra(), m.metric(), m.drift(), flag.y());
    let f = m.f_value(y)?;
    let xy = alg.bracket_unchecked(x, y);
    let xyy = alg.bracket_unchecked(&xy, y);
    let adstar = ad_star_apply(alg, g, y, y);
    let x_adstar = alg.bracket_unchecked(x, &adstar);
    let corr = 3.0 * g.inner(&xy, y).powi(2) - 2.0 * f * (g.inner(&xyy, y) - g.inner(y, &x_adstar));
    Ok(k_riem(m, flag) / (f * f) + corr / (4.0 * f.powi(4)))
}

/// Closed form on G1 with `X = xi b` and `y = eta b + v`:
/// `K^g / F^2 + (3 xi^2 g(v, v)^2 + 4 F xi eta g(v, v)) / (4 F^4)`.
pub fn flag_curvature_g1(m: &AlphaBetaMetric<'_>, flag: &Flag) -> Result<f64> {
    require_family(m, &[Family::Randers, Family::Riemannian], "randers")?;
    ensure_canonical(m.metric(), flag)?;
    m.require_admissible()?;
    let g = m.metric();
    let frame = G1Frame::resolve(m.algebra(), g, RESIDUAL_TOL)?;
    let x = m.drift();
    let xi = g.inner(x, &frame.b);
    if g.norm(&(x - &frame.b * xi)) > RESIDUAL_TOL * g.norm(x).max(1.0) {
        return Err(Error::XNotInSpanB);
    }
    let (eta, v) = frame.decompose(g, flag.y());
    let f = m.f_value(flag.y())?;
    let vv = g.norm_sq(&v);
    let corr = 3.0 * xi * xi * vv * vv + 4.0 * f * xi * eta * vv;
    Ok(k_riem(m, flag) / (f * f) + corr / (4.0 * f.powi(4)))
}

struct G2Terms {
    f: f64,
    k_over_f2: f64,
    eta: f64,
    phi_x: f64,
    phi_v: f64,
    fx_v: f64,
    fx_fv: f64,
    phi_fx: f64,
}

fn g2_terms(m: &AlphaBetaMetric<'_>, flag: &Flag) -> Result<(G2Terms, G2Frame)> {
    require_family(m, &[Family::Randers, Family::Riemannian], "randers")?;
    ensure_canonical(m.metric(), flag)?;
    m.require_admissible()?;
    let g = m.metric();
    let frame = G2Frame::resolve(m.algebra(), g)?;
    let x = m.drift();
    if !frame.in_hyperplane(g, x, RESIDUAL_TOL) {
        return Err(Error::NotDouglas);
    }
    let (eta, v) = frame.decompose(g, flag.y());
    let f = m.f_value(flag.y())?;
    let fx = frame.apply_f(x);
    let fv = frame.apply_f(&v);
    let terms = G2Terms {
        f,
        k_over_f2: k_riem(m, flag) / (f * f),
        eta,
        phi_x: frame.phi(g, x),
        phi_v: frame.phi(g, &v),
        fx_v: g.inner(&fx, &v),
        fx_fv: g.inner(&fx, &fv),
        phi_fx: frame.phi(g, &fx),
    };
    Ok((terms, frame))
}

/// Closed form for Douglas Randers metrics on algebras with one-dimensional
/// commutator, `y = eta e + v`:
/// `K^g / F^2 + (3 (eta^2 phi(X) + eta g(fX, v))^2
///   + 2 F (2 eta^2 phi(v) phi(X) + eta phi(v) g(fX, v) + eta^2 g(fX, fv) - eta^3 phi(fX))) / (4 F^4)`.
pub fn flag_curvature_g2_general(m: &AlphaBetaMetric<'_>, flag: &Flag) -> Result<f64> {
    let (t, _) = g2_terms(m, flag)?;
    let (eta, f) = (t.eta, t.f);
    let lead = eta * eta * t.phi_x + eta * t.fx_v;
    let tail = 2.0 * eta * eta * t.phi_v * t.phi_x + eta * t.phi_v * t.fx_v + eta * eta * t.fx_fv
        - eta.powi(3) * t.phi_fx;
    Ok(t.k_over_f2 + (3.0 * lead * lead + 2.0 * f * tail) / (4.0 * f.powi(4)))
}

/// The same closed form when `e` is central (`phi = 0`):
/// `K^g / F^2 + eta^2 (3 g(fX, v)^2 + 2 F g(fX, fv)) / (4 F^4)`.
pub fn flag_curvature_g2_central(m: &AlphaBetaMetric<'_>, flag: &Flag) -> Result<f64> {
    let (t, frame) = g2_terms(m, flag)?;
    if m.metric().norm(&frame.a) > RESIDUAL_TOL {
        return Err(Error::NotApplicable("commutator direction is not central".into()));
    }
    let (eta, f) = (t.eta, t.f);
    Ok(t.k_over_f2 + eta * eta * (3.0 * t.fx_v * t.fx_v + 2.0 * f * t.fx_fv) / (4.0 * f.powi(4)))
}

/// Dispatches to the central form when `phi = 0`, else the general one.
pub fn flag_curvature_g2(m: &AlphaBetaMetric<'_>, flag: &Flag) -> Result<f64> {
    match flag_curvature_g2_central(m, flag) {
        Err(Error::NotApplicable(_)) => flag_curvature_g2_general(m, flag),
        other => other,
    }
}

/// Every applicable engine on one flag.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureReport {
    pub flag: Flag,
    pub k_riem: f64,
    pub values: Vec<(Engine, f64)>,
    pub skipped: Vec<(Engine, String)>,
    pub residuals: Vec<(Engine, Engine, f64)>,
}

impl CurvatureReport {
    pub fn value(&self, engine: Engine) -> Option<f64> {
        self.values.iter().find(|(e, _)| *e == engine).map(|(_, v)| *v)
    }
}

/// Runs every engine in `engines` on the flag; inapplicable ones are listed
/// under `skipped` with the reason.
pub fn compare_engines_with(m: &AlphaBetaMetric<'_>, flag: &Flag, engines: &[Engine]) -> CurvatureReport {
    let mut values = Vec::new();
    let mut skipped = Vec::new();
    for &e in engines {
        match e.evaluate(m, flag) {
            Ok(v) => values.push((e, v)),
            Err(err) => skipped.push((e, err.to_string())),
        }
    }
    let mut residuals = Vec::new();
    for (i, (a, va)) in values.iter().enumerate() {
        for (b, vb) in &values[i + 1..] {
            residuals.push((*a, *b, va - vb));
        }
    }
    CurvatureReport {
        flag: flag.clone(),
        k_riem: k_riem(m, flag),
        values,
        skipped,
        residuals,
    }
}

pub fn compare_engines(m: &AlphaBetaMetric<'_>, flag: &Flag) -> CurvatureReport {
    compare_engines_with(m, flag, &Engine::ALL)
}
