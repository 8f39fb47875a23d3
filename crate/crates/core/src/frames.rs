//! Tag data resolved against a concrete metric.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::lie_algebra::{g2_data, FamilyTag, LieAlgebra};
use crate::linalg::basis_vector;
use crate::riemannian::Metric;

/// `b` and the ideal basis for a G1 algebra whose metric makes `b` a unit
/// vector orthogonal to the ideal.
#[derive(Debug, Clone)]
pub struct G1Frame {
    pub b: DVector<f64>,
    pub ideal: Vec<DVector<f64>>,
}

impl G1Frame {
    pub fn resolve(alg: &LieAlgebra, g: &Metric, tol: f64) -> Result<Self> {
        let n = alg.dim();
        let (b, ideal) = match alg.tag() {
            Some(FamilyTag::G1 { b, ideal }) => (*b, ideal.clone()),
            _ => return Err(Error::MissingTag("G1")),
        };
        let b = basis_vector(n, b);
        let ideal: Vec<_> = ideal.into_iter().map(|u| basis_vector(n, u)).collect();
        let nb = g.norm_sq(&b);
        if (nb - 1.0).abs() > tol {
            return Err(Error::UnadaptedMetric(format!("|b|^2 = {nb}, expected 1")));
        }
        for (i, u) in ideal.iter().enumerate() {
            let c = g.inner(&b, u);
            if c.abs() > tol {
                return Err(Error::UnadaptedMetric(format!("g(b, u{}) = {c}", i + 1)));
            }
        }
        Ok(Self { b, ideal })
    }

    /// `y = eta b + v` with `v` in the ideal.
    pub fn decompose(&self, g: &Metric, y: &DVector<f64>) -> (f64, DVector<f64>) {
        let eta = g.inner(y, &self.b);
        (eta, y - &self.b * eta)
    }
}

/// Unit commutator direction `e`, the form `phi = g(a, .)` on its
/// orthogonal hyperplane, and the skew-adjoint `f` with
/// `[z, y] = g(f z, y) e` on that hyperplane, all derived from the
/// structure constants and the given metric.
#[derive(Debug, Clone)]
pub struct G2Frame {
    pub e: DVector<f64>,
    pub a: DVector<f64>,
    pub f: DMatrix<f64>,
}

impl G2Frame {
    pub fn resolve(alg: &LieAlgebra, g: &Metric) -> Result<Self> {
        let n = alg.dim();
        let idx = alg
            .tag()
            .and_then(|t| t.commutator_index(n))
            .ok_or(Error::MissingTag("G2"))?;
        let e_raw = basis_vector(n, idx);
        let e = &e_raw / g.norm(&e_raw);
        let proj = |x: &DVector<f64>| x - &e * g.inner(x, &e);
        let projected: Vec<_> = (0..n).map(|i| proj(&basis_vector(n, i))).collect();

        let mut ell = DVector::zeros(n);
        let mut bm = DMatrix::zeros(n, n);
        for i in 0..n {
            ell[i] = g.inner(&alg.bracket_unchecked(&projected[i], &e), &e);
            for j in 0..n {
                bm[(i, j)] = g.inner(&alg.bracket_unchecked(&projected[i], &projected[j]), &e);
            }
        }
        let a = g.raise(&ell);
        let f = g.inverse() * bm.transpose();
        Ok(Self { e, a, f })
    }

    /// `phi(z) = g(a, z)`.
    pub fn phi(&self, g: &Metric, z: &DVector<f64>) -> f64 {
        g.inner(&self.a, z)
    }

    pub fn apply_f(&self, z: &DVector<f64>) -> DVector<f64> {
        &self.f * z
    }

    /// `y = eta e + v` with `v` orthogonal to `e`.
    pub fn decompose(&self, g: &Metric, y: &DVector<f64>) -> (f64, DVector<f64>) {
        let eta = g.inner(y, &self.e);
        (eta, y - &self.e * eta)
    }

    pub fn in_hyperplane(&self, g: &Metric, x: &DVector<f64>, tol: f64) -> bool {
        g.inner(x, &self.e).abs() <= tol * g.norm(x).max(1.0)
    }
}

/// Checks the metric-dependent identities of a G2 tag: with `e` the tagged
/// basis vector and `z, y` basis vectors projected onto `e`'s orthogonal
/// complement, `[z, e] = g(a, z) e`, `[z, y] = g(f z, y) e`, and `f` is
/// skew-adjoint. Other tags have no metric-dependent identities.
pub fn validate_tag(alg: &LieAlgebra, g: &Metric, tol: f64) -> Result<()> {
    let n = alg.dim();
    let Some(tag) = alg.tag() else { return Ok(()) };
    let Some(e_idx) = tag.commutator_index(n) else { return Ok(()) };
    let (_, a, f) = g2_data(alg).expect("commutator index implies G2 data");
    let a = DVector::from_vec(a);
    let f = DMatrix::from_fn(n, n, |r, c| f[r][c]);
    let e = basis_vector(n, e_idx);
    let ee = g.norm_sq(&e);
    let proj = |x: &DVector<f64>| x - &e * (g.inner(x, &e) / ee);
    let zs: Vec<_> = (0..n).map(|i| proj(&basis_vector(n, i))).collect();
    let fail = |msg: String| Err(Error::UnadaptedMetric(msg));
    for (i, z) in zs.iter().enumerate() {
        let lhs = alg.bracket_unchecked(z, &e);
        if (lhs - &e * g.inner(&a, z)).amax() > tol {
            return fail(format!("[z{}, e] != g(a, z{}) e", i + 1, i + 1));
        }
        for (j, y) in zs.iter().enumerate() {
            let lhs = alg.bracket_unchecked(z, y);
            if (lhs - &e * g.inner(&(&f * z), y)).amax() > tol {
                return fail(format!("[z{}, z{}] != g(f z{}, z{}) e", i + 1, j + 1, i + 1, j + 1));
            }
            let skew = g.inner(&(&f * z), y) + g.inner(z, &(&f * y));
            if skew.abs() > tol {
                return fail(format!("f is not skew-adjoint on (z{}, z{})", i + 1, j + 1));
            }
        }
    }
    Ok(())
}
