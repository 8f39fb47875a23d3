//! Left-invariant Riemannian geometry in the structure-constant basis.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::lie_algebra::LieAlgebra;

/// Gram determinant below which two vectors are treated as dependent.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// Inner product on the Lie algebra, as a symmetric positive-definite Gram
/// matrix over the basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Metric {
    gram: DMatrix<f64>,
    inverse: DMatrix<f64>,
}

impl Metric {
    pub fn new(gram: DMatrix<f64>) -> Result<Self> {
        if gram.nrows() == 0 || gram.nrows() != gram.ncols() {
            return Err(Error::DimensionMismatch {
                expected: gram.nrows(),
                got: gram.ncols(),
            });
        }
        if gram.iter().any(|x| !x.is_finite()) {
            return Err(Error::NotPositiveDefinite);
        }
        let asym = (&gram - gram.transpose()).amax();
        if asym != 0.0 {
            return Err(Error::NotSymmetric(asym));
        }
        let chol = gram.clone().cholesky().ok_or(Error::NotPositiveDefinite)?;
        let inverse = chol.inverse();
        Ok(Self { gram, inverse })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            gram: DMatrix::identity(dim, dim),
            inverse: DMatrix::identity(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.gram.nrows()
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    pub fn inverse(&self) -> &DMatrix<f64> {
        &self.inverse
    }

    pub fn inner(&self, u: &DVector<f64>, w: &DVector<f64>) -> f64 {
        (&self.gram * w).dot(u)
    }

    pub fn norm_sq(&self, u: &DVector<f64>) -> f64 {
        self.inner(u, u)
    }

    pub fn norm(&self, u: &DVector<f64>) -> f64 {
        self.norm_sq(u).max(0.0).sqrt()
    }

    /// Vector dual to the covector `w`, i.e. `G^{-1} w`.
    pub fn raise(&self, w: &DVector<f64>) -> DVector<f64> {
        &self.inverse * w
    }

    /// Gram determinant `|x|^2 |y|^2 - g(x, y)^2`.
    pub fn gram_determinant(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        self.norm_sq(x) * self.norm_sq(y) - self.inner(x, y).powi(2)
    }

    /// Gram-Schmidt on `(x, y)`; the first output is `x / |x|`.
    pub fn orthonormalize(
        &self,
        x: &DVector<f64>,
        y: &DVector<f64>,
    ) -> Result<(DVector<f64>, DVector<f64>)> {
        let nx = self.norm_sq(x);
        let ny = self.norm_sq(y);
        if nx == 0.0 || ny == 0.0 {
            return Err(Error::DegeneratePlane(0.0));
        }
        // Scale-free test on the normalized pair.
        let det = self.gram_determinant(x, y) / (nx * ny);
        if !(det >= DEGENERACY_TOL) {
            return Err(Error::DegeneratePlane(det));
        }
        let e1 = x / nx.sqrt();
        let r = y - &e1 * self.inner(y, &e1);
        let e2 = &r / self.norm(&r);
        Ok((e1, e2))
    }
}

fn check_dims(alg: &LieAlgebra, g: &Metric, vs: &[&DVector<f64>]) -> Result<()> {
    if g.dim() != alg.dim() {
        return Err(Error::DimensionMismatch {
            expected: alg.dim(),
            got: g.dim(),
        });
    }
    for v in vs {
        if v.len() != alg.dim() {
            return Err(Error::DimensionMismatch {
                expected: alg.dim(),
                got: v.len(),
            });
        }
    }
    Ok(())
}

/// Matrix of the `g`-transpose of `ad_x`: `G^{-1} ad_x^T G`.
pub fn ad_star(alg: &LieAlgebra, g: &Metric, x: &DVector<f64>) -> Result<DMatrix<f64>> {
    check_dims(alg, g, &[x])?;
    let ad = alg.ad_matrix(x)?;
    Ok(g.inverse() * ad.transpose() * g.gram())
}

/// `ad*_x y` without forming the matrix.
pub(crate) fn ad_star_apply(alg: &LieAlgebra, g: &Metric, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
    // g(ad*_x y, z) = g(y, [x, z]) for every basis z.
    let gy = g.gram() * y;
    let n = alg.dim();
    let mut cov = DVector::zeros(n);
    for z in 0..n {
        let mut s = 0.0;
        for i in 0..n {
            if x[i] == 0.0 {
                continue;
            }
            for k in 0..n {
                s += x[i] * alg.constant(i, z, k) * gy[k];
            }
        }
        cov[z] = s;
    }
    g.raise(&cov)
}

/// Levi-Civita connection on left-invariant fields:
/// `nabla_x y = (ad_x y - ad*_x y - ad*_y x) / 2`.
pub fn levi_civita(alg: &LieAlgebra, g: &Metric, x: &DVector<f64>, y: &DVector<f64>) -> Result<DVector<f64>> {
    check_dims(alg, g, &[x, y])?;
    Ok(levi_civita_unchecked(alg, g, x, y))
}

pub(crate) fn levi_civita_unchecked(
    alg: &LieAlgebra,
    g: &Metric,
    x: &DVector<f64>,
    y: &DVector<f64>,
) -> DVector<f64> {
    let adxy = alg.bracket_unchecked(x, y);
    let sx = ad_star_apply(alg, g, x, y);
    let sy = ad_star_apply(alg, g, y, x);
    (adxy - sx - sy) * 0.5
}

/// `R(u, y) y = nabla_u nabla_y y - nabla_y nabla_u y - nabla_[u,y] y`.
pub fn curvature_vector(alg: &LieAlgebra, g: &Metric, u: &DVector<f64>, y: &DVector<f64>) -> Result<DVector<f64>> {
    check_dims(alg, g, &[u, y])?;
    let nyy = levi_civita_unchecked(alg, g, y, y);
    let nuy = levi_civita_unchecked(alg, g, u, y);
    let uy = alg.bracket_unchecked(u, y);
    Ok(levi_civita_unchecked(alg, g, u, &nyy)
        - levi_civita_unchecked(alg, g, y, &nuy)
        - levi_civita_unchecked(alg, g, &uy, y))
}

/// Sectional curvature of `span{x, y}` from the closed expression in the
/// connection and brackets, applied to a g-orthonormalized pair.
pub fn sectional_curvature(alg: &LieAlgebra, g: &Metric, x: &DVector<f64>, y: &DVector<f64>) -> Result<f64> {
    check_dims(alg, g, &[x, y])?;
    let (x, y) = g.orthonormalize(x, y)?;
    Ok(sectional_orthonormal(alg, g, &x, &y))
}

/// The closed expression, for a pair already known to be g-orthonormal.
pub(crate) fn sectional_orthonormal(alg: &LieAlgebra, g: &Metric, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
    let nxy = levi_civita_unchecked(alg, g, x, y);
    let nxx = levi_civita_unchecked(alg, g, x, x);
    let nyy = levi_civita_unchecked(alg, g, y, y);
    let xy = alg.bracket_unchecked(x, y);
    let yx = -&xy;
    let yyx = alg.bracket_unchecked(y, &yx);
    g.norm_sq(&nxy) - g.inner(&nxx, &nyy) - g.inner(&yyx, x) - g.norm_sq(&xy)
}

/// `g(R(x, y) y, x) / (|x|^2 |y|^2 - g(x, y)^2)`, from the curvature tensor.
pub fn curvature_quotient(alg: &LieAlgebra, g: &Metric, x: &DVector<f64>, y: &DVector<f64>) -> Result<f64> {
    check_dims(alg, g, &[x, y])?;
    let det = g.gram_determinant(x, y);
    let scale = g.norm_sq(x) * g.norm_sq(y);
    if scale == 0.0 || !(det / scale >= DEGENERACY_TOL) {
        return Err(Error::DegeneratePlane(if scale == 0.0 { 0.0 } else { det / scale }));
    }
    let r = curvature_vector(alg, g, x, y)?;
    Ok(g.inner(&r, x) / det)
}
