//! Left-invariant (alpha, beta)-metrics `F = alpha * phi(beta / alpha)` with
//! `alpha(y) = sqrt(g(y, y))` and `beta(y) = g(X, y)`.
//!
//! The fundamental tensor is the Hessian of `F^2 / 2`. Writing
//! `s = beta / alpha` and `l(u) = g(y, u) / alpha`, differentiating
//! `F^2 = alpha^2 phi(s)^2` twice gives
//!
//! ```text
//! g_y(u, w) = rho  g(u, w)
//!           + rho0 beta(u) beta(w)
//!           + rho1 (beta(u) l(w) + beta(w) l(u))
//!           + rho2 l(u) l(w)
//!
//! rho  = phi (phi - s phi')
//! rho0 = phi phi'' + phi'^2
//! rho1 = phi phi' - s rho0
//! rho2 = -s rho1
//! ```
//!
//! with each family supplying `phi`, `phi'` and `phi''` in closed form. The
//! finite-difference routines below are the independent check on this.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie_algebra::LieAlgebra;
use crate::riemannian::Metric;

/// Default finite-difference step for the fundamental-tensor oracle.
pub const FD_STEP: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `phi = 1`; the drift is ignored.
    Riemannian,
    /// `phi(s) = 1 + s`.
    Randers,
    /// `phi(s) = 1 / (1 - s)`.
    Matsumoto,
    /// `phi(s) = 1 / s`, a conic metric on `beta > 0`.
    Kropina,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Riemannian => "riemannian",
            Family::Randers => "randers",
            Family::Matsumoto => "matsumoto",
            Family::Kropina => "kropina",
        }
    }

    /// `(phi, phi', phi'')` at `s`.
    pub fn phi(self, s: f64) -> (f64, f64, f64) {
        match self {
            Family::Riemannian => (1.0, 0.0, 0.0),
            Family::Randers => (1.0 + s, 1.0, 0.0),
            Family::Matsumoto => {
                let r = 1.0 / (1.0 - s);
                (r, r * r, 2.0 * r * r * r)
            }
            Family::Kropina => {
                let r = 1.0 / s;
                (r, -r * r, 2.0 * r * r * r)
            }
        }
    }

    /// Upper bound `b0` on `|X|`; `None` when unbounded.
    pub fn drift_bound(self) -> Option<f64> {
        match self {
            Family::Randers => Some(1.0),
            Family::Matsumoto => Some(0.5),
            Family::Riemannian | Family::Kropina => None,
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Admissibility {
    Admissible,
    Violation(String),
}

impl Admissibility {
    pub fn is_admissible(&self) -> bool {
        matches!(self, Admissibility::Admissible)
    }
}

/// `phi(s) - s phi'(s) + (b^2 - s^2) phi''(s) > 0` on a uniform grid over
/// `[-b, b]` (`(0, b]` for Kropina).
pub fn phi_positivity_scan(family: Family, b: f64, samples: usize) -> Result<bool> {
    if samples < 2 {
        return Err(Error::BadRange(format!("need at least 2 samples, got {samples}")));
    }
    if !b.is_finite() || b < 0.0 {
        return Err(Error::BadRange(format!("b = {b} must be finite and non-negative")));
    }
    if let Some(b0) = family.drift_bound() {
        if b >= b0 {
            return Err(Error::BadRange(format!("b = {b} must be below {b0} for {family}")));
        }
    }
    let expr = |s: f64| {
        let (p, dp, ddp) = family.phi(s);
        p - s * dp + (b * b - s * s) * ddp
    };
    let ok = if family == Family::Kropina {
        if b == 0.0 {
            return Err(Error::BadRange("Kropina scan needs b > 0".into()));
        }
        (1..=samples).all(|i| expr(b * i as f64 / samples as f64) > 0.0)
    } else {
        (0..samples).all(|i| expr(-b + 2.0 * b * i as f64 / (samples - 1) as f64) > 0.0)
    };
    Ok(ok)
}

/// A left-invariant (alpha, beta)-metric over a Lie algebra with an inner product.
#[derive(Debug, Clone)]
pub struct AlphaBetaMetric<'a> {
    family: Family,
    drift: DVector<f64>,
    algebra: &'a LieAlgebra,
    metric: &'a Metric,
}

impl<'a> AlphaBetaMetric<'a> {
    pub fn new(family: Family, algebra: &'a LieAlgebra, metric: &'a Metric, drift: DVector<f64>) -> Result<Self> {
        let n = algebra.dim();
        if metric.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: metric.dim(),
            });
        }
        if drift.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: drift.len(),
            });
        }
        let drift = if family == Family::Riemannian { DVector::zeros(n) } else { drift };
        Ok(Self {
            family,
            drift,
            algebra,
            metric,
        })
    }

    pub fn riemannian(algebra: &'a LieAlgebra, metric: &'a Metric) -> Self {
        Self {
            family: Family::Riemannian,
            drift: DVector::zeros(algebra.dim()),
            algebra,
            metric,
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn drift(&self) -> &DVector<f64> {
        &self.drift
    }

    pub fn algebra(&self) -> &'a LieAlgebra {
        self.algebra
    }

    pub fn metric(&self) -> &'a Metric {
        self.metric
    }

    pub fn drift_norm(&self) -> f64 {
        self.metric.norm(&self.drift)
    }

    pub fn admissibility_check(&self) -> Admissibility {
        let norm = self.drift_norm();
        match self.family {
            Family::Riemannian => Admissibility::Admissible,
            Family::Kropina => {
                if norm > 0.0 {
                    Admissibility::Admissible
                } else {
                    Admissibility::Violation("Kropina needs X != 0".into())
                }
            }
            fam => {
                let bound = fam.drift_bound().expect("bounded family");
                if norm < bound {
                    Admissibility::Admissible
                } else {
                    Admissibility::Violation(format!("{norm} \u{2265} {bound}"))
                }
            }
        }
    }

    pub fn require_admissible(&self) -> Result<()> {
        match self.admissibility_check() {
            Admissibility::Admissible => Ok(()),
            Admissibility::Violation(msg) => Err(Error::Inadmissible(msg)),
        }
    }

    pub fn alpha(&self, y: &DVector<f64>) -> f64 {
        self.metric.norm(y)
    }

    pub fn beta(&self, y: &DVector<f64>) -> f64 {
        self.metric.inner(&self.drift, y)
    }

    fn check_vec(&self, y: &DVector<f64>) -> Result<()> {
        if y.len() != self.algebra.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.algebra.dim(),
                got: y.len(),
            });
        }
        Ok(())
    }

    /// `(alpha, s)` at `y`, after the domain checks.
    fn alpha_s(&self, y: &DVector<f64>) -> Result<(f64, f64)> {
        self.check_vec(y)?;
        let a = self.alpha(y);
        if !(a > 0.0) {
            return Err(Error::OutsideDomain("y = 0".into()));
        }
        let b = self.beta(y);
        match self.family {
            Family::Matsumoto if !(a - b > 0.0) => {
                return Err(Error::OutsideDomain(format!("alpha - beta = {} <= 0", a - b)))
            }
            Family::Kropina if !(b > 0.0) => {
                return Err(Error::OutsideDomain(format!("g(X, y) = {b} <= 0")))
            }
            _ => {}
        }
        Ok((a, b / a))
    }

    /// `F(y)`.
    pub fn f_value(&self, y: &DVector<f64>) -> Result<f64> {
        let (a, s) = self.alpha_s(y)?;
        Ok(a * self.family.phi(s).0)
    }

    /// Whether `y` lies in the domain of `F`.
    pub fn in_domain(&self, y: &DVector<f64>) -> bool {
        self.alpha_s(y).is_ok()
    }

    /// `g_y(u, w)` from the closed-form Hessian of `F^2 / 2`.
    pub fn fundamental_tensor(&self, y: &DVector<f64>, u: &DVector<f64>, w: &DVector<f64>) -> Result<f64> {
        self.check_vec(u)?;
        self.check_vec(w)?;
        let (a, s) = self.alpha_s(y)?;
        let c = self.coefficients(s);
        let g = self.metric;
        let (bu, bw) = (self.beta(u), self.beta(w));
        let (lu, lw) = (g.inner(y, u) / a, g.inner(y, w) / a);
        Ok(c.rho * g.inner(u, w) + c.rho0 * bu * bw + c.rho1 * (bu * lw + bw * lu) + c.rho2 * lu * lw)
    }

    /// `[g_y(e_i, e_j)]` over the basis.
    pub fn fundamental_matrix(&self, y: &DVector<f64>) -> Result<DMatrix<f64>> {
        let (a, s) = self.alpha_s(y)?;
        let c = self.coefficients(s);
        let gram = self.metric.gram();
        let b = gram * &self.drift;
        let l = (gram * y) / a;
        Ok(gram * c.rho
            + &b * b.transpose() * c.rho0
            + (&b * l.transpose() + &l * b.transpose()) * c.rho1
            + &l * l.transpose() * c.rho2)
    }

    fn coefficients(&self, s: f64) -> TensorCoefficients {
        let (p, dp, ddp) = self.family.phi(s);
        let rho0 = p * ddp + dp * dp;
        let rho1 = p * dp - s * rho0;
        TensorCoefficients {
            rho: p * (p - s * dp),
            rho0,
            rho1,
            rho2: -s * rho1,
        }
    }

    fn f_sq_checked(&self, y: &DVector<f64>) -> Result<f64> {
        self.f_value(y).map(|f| f * f)
    }

    /// Plain central mixed difference of `F^2 / 2` at step `h`.
    pub fn central_mixed_difference(
        &self,
        y: &DVector<f64>,
        u: &DVector<f64>,
        w: &DVector<f64>,
        step: f64,
    ) -> Result<f64> {
        if !(step > 0.0) || !step.is_finite() {
            return Err(Error::BadRange(format!("step = {step} must be positive")));
        }
        self.check_vec(u)?;
        self.check_vec(w)?;
        let pp = self.f_sq_checked(&(y + u * step + w * step))?;
        let pm = self.f_sq_checked(&(y + u * step - w * step))?;
        let mp = self.f_sq_checked(&(y - u * step + w * step))?;
        let mm = self.f_sq_checked(&(y - u * step - w * step))?;
        Ok(0.5 * (pp - pm - mp + mm) / (4.0 * step * step))
    }

    /// Finite-difference `g_y(u, w)`: central differences at `step` and
    /// `step / 2` combined by one Richardson extrapolation level.
    pub fn fundamental_tensor_fd(
        &self,
        y: &DVector<f64>,
        u: &DVector<f64>,
        w: &DVector<f64>,
        step: f64,
    ) -> Result<f64> {
        let coarse = self.central_mixed_difference(y, u, w, step)?;
        let fine = self.central_mixed_difference(y, u, w, 0.5 * step)?;
        Ok((4.0 * fine - coarse) / 3.0)
    }
}

struct TensorCoefficients {
    rho: f64,
    rho0: f64,
    rho1: f64,
    rho2: f64,
}

/// A flag: pole `y` and transverse edge `v`, g-orthonormal.
#[derive(Debug, Clone, PartialEq)]
pub struct Flag {
    y: DVector<f64>,
    v: DVector<f64>,
}

impl Flag {
    pub fn y(&self) -> &DVector<f64> {
        &self.y
    }

    pub fn v(&self) -> &DVector<f64> {
        &self.v
    }

    #[cfg(test)]
    pub(crate) fn from_raw(y: DVector<f64>, v: DVector<f64>) -> Self {
        Self { y, v }
    }
}

/// Gram-Schmidt: `y <- y / |y|`, `v <- v - g(v, y) y`, `v <- v / |v|`.
pub fn canonicalize_flag(g: &Metric, y: &DVector<f64>, v: &DVector<f64>) -> Result<Flag> {
    for x in [y, v] {
        if x.len() != g.dim() {
            return Err(Error::DimensionMismatch {
                expected: g.dim(),
                got: x.len(),
            });
        }
    }
    let (y, v) = g.orthonormalize(y, v)?;
    Ok(Flag { y, v })
}
