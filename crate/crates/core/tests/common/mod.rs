//! Brute-force oracles and random fixtures shared by the integration tests.
//!
//! The oracles deliberately avoid the library's geometry code: the
//! connection comes from the Koszul formula, curvature from the operator
//! definition, and `g_y` from finite differences of `F^2 / 2` written out
//! per family.

#![allow(dead_code)]

use lieflag_core::{catalog, CatalogSpec, DMatrix, DVector, Family, LieAlgebra, Metric};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn e(n: usize, i: usize) -> DVector<f64> {
    DVector::from_fn(n, |r, _| if r == i { 1.0 } else { 0.0 })
}

pub fn gaussian(r: &mut impl Rng, n: usize) -> DVector<f64> {
    DVector::from_fn(n, |_, _| r.sample(StandardNormal))
}

/// `A^T A + I / 2` with `A` Gaussian, so eigenvalues stay away from zero.
pub fn random_spd(r: &mut impl Rng, n: usize) -> DMatrix<f64> {
    let a = DMatrix::from_fn(n, n, |_, _| r.sample::<f64, _>(StandardNormal) * 0.5);
    let g = a.transpose() * &a + DMatrix::identity(n, n) * 0.5;
    // exact symmetry
    DMatrix::from_fn(n, n, |i, j| if i <= j { g[(i, j)] } else { g[(j, i)] })
}

pub fn random_metric(r: &mut impl Rng, n: usize) -> Metric {
    Metric::new(random_spd(r, n)).unwrap()
}

pub fn h3() -> LieAlgebra {
    catalog(&CatalogSpec::Heisenberg { n: 1 }).unwrap()
}

pub fn h3_plus_r() -> LieAlgebra {
    catalog(&CatalogSpec::DirectSumWithAbelian {
        base: Box::new(CatalogSpec::Heisenberg { n: 1 }),
        k: 1,
    })
    .unwrap()
}

/// A random G2 catalog entry with small integer data. For a hyperplane of
/// dimension at least 3, Jacobi forces `f = l a^T - a l^T` or `a = 0`.
pub fn random_g2_spec(r: &mut impl Rng) -> CatalogSpec {
    loop {
        let dim = r.random_range(3..=6);
        let m = dim - 1;
        let int = |r: &mut dyn rand::RngCore| (r.next_u32() % 5) as f64 - 2.0;
        let (a, f): (Vec<f64>, Vec<Vec<f64>>) = if m == 2 {
            let a = vec![int(r), int(r)];
            let c = int(r);
            (a, vec![vec![0.0, c], vec![-c, 0.0]])
        } else if r.random_bool(0.5) {
            let a: Vec<f64> = (0..m).map(|_| int(r)).collect();
            let l: Vec<f64> = (0..m).map(|_| int(r)).collect();
            let f = (0..m)
                .map(|p| (0..m).map(|q| l[p] * a[q] - a[p] * l[q]).collect())
                .collect();
            (a, f)
        } else {
            let mut f = vec![vec![0.0; m]; m];
            for p in 0..m {
                for q in (p + 1)..m {
                    let c = int(r);
                    f[p][q] = c;
                    f[q][p] = -c;
                }
            }
            (vec![0.0; m], f)
        };
        let spec = CatalogSpec::G2 { dim, a, f };
        if catalog(&spec).is_ok() {
            return spec;
        }
    }
}

/// Euclidean-coordinate oracle for a metric Lie algebra.
pub struct Oracle<'a> {
    pub alg: &'a LieAlgebra,
    pub g: DMatrix<f64>,
    ginv: DMatrix<f64>,
}

impl<'a> Oracle<'a> {
    pub fn new(alg: &'a LieAlgebra, g: &DMatrix<f64>) -> Self {
        let ginv = g.clone().try_inverse().expect("invertible metric");
        Self {
            alg,
            g: g.clone(),
            ginv,
        }
    }

    pub fn n(&self) -> usize {
        self.alg.dim()
    }

    pub fn bracket(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        let n = self.n();
        let mut out = DVector::zeros(n);
        for i in 0..n {
            for j in 0..n {
                if x[i] == 0.0 || y[j] == 0.0 {
                    continue;
                }
                for k in 0..n {
                    out[k] += x[i] * y[j] * self.alg.constant(i, j, k);
                }
            }
        }
        out
    }

    pub fn ip(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        (x.transpose() * &self.g * y)[(0, 0)]
    }

    /// Koszul formula for left-invariant fields:
    /// `2 g(D_x y, z) = g([x, y], z) - g([y, z], x) + g([z, x], y)`.
    pub fn connection(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        let n = self.n();
        let xy = self.bracket(x, y);
        let rhs = DVector::from_fn(n, |k, _| {
            let z = e(n, k);
            0.5 * (self.ip(&xy, &z) - self.ip(&self.bracket(y, &z), x) + self.ip(&self.bracket(&z, x), y))
        });
        &self.ginv * rhs
    }

    /// `R(x, y) z = D_x D_y z - D_y D_x z - D_[x,y] z`.
    pub fn curvature(&self, x: &DVector<f64>, y: &DVector<f64>, z: &DVector<f64>) -> DVector<f64> {
        self.connection(x, &self.connection(y, z))
            - self.connection(y, &self.connection(x, z))
            - self.connection(&self.bracket(x, y), z)
    }

    pub fn sectional(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        let den = self.ip(x, x) * self.ip(y, y) - self.ip(x, y).powi(2);
        self.ip(&self.curvature(x, y, y), x) / den
    }

    /// `F(y)` written out per family.
    pub fn finsler(&self, family: Family, drift: &DVector<f64>, y: &DVector<f64>) -> f64 {
        let a = self.ip(y, y).sqrt();
        let b = self.ip(drift, y);
        match family {
            Family::Riemannian => a,
            Family::Randers => a + b,
            Family::Matsumoto => a * a / (a - b),
            Family::Kropina => a * a / b,
        }
    }

    /// `d^2/ds dt (F^2 / 2)(y + s u + t w)` at zero: second-order central
    /// stencil at `h` and `h / 2`, one Richardson step.
    pub fn gy_fd(&self, family: Family, drift: &DVector<f64>, y: &DVector<f64>, u: &DVector<f64>, w: &DVector<f64>, h: f64) -> f64 {
        let e2 = |s: f64, t: f64| 0.5 * self.finsler(family, drift, &(y + u * s + w * t)).powi(2);
        let d = |h: f64| (e2(h, h) - e2(h, -h) - e2(-h, h) + e2(-h, -h)) / (4.0 * h * h);
        (4.0 * d(0.5 * h) - d(h)) / 3.0
    }

    /// Flag curvature of a Berwald-type metric, `g_y` by finite differences.
    pub fn berwald_flag_curvature(&self, family: Family, drift: &DVector<f64>, y: &DVector<f64>, v: &DVector<f64>) -> f64 {
        let gy = |a: &DVector<f64>, b: &DVector<f64>| self.gy_fd(family, drift, y, a, b, 1e-3);
        let r = self.curvature(v, y, y);
        gy(&r, v) / (gy(y, y) * gy(v, v) - gy(y, v).powi(2))
    }

    /// `D_{e_i} X` for every basis vector; all vanish iff `X` is parallel.
    pub fn parallel_defect(&self, x: &DVector<f64>) -> f64 {
        (0..self.n())
            .map(|i| self.connection(&e(self.n(), i), x).amax())
            .fold(0.0, f64::max)
    }

    /// g-orthogonal projection of `x` away from `span(vs)`.
    pub fn project_out(&self, x: &DVector<f64>, vs: &[DVector<f64>]) -> DVector<f64> {
        if vs.is_empty() {
            return x.clone();
        }
        let k = vs.len();
        let gram = DMatrix::from_fn(k, k, |i, j| self.ip(&vs[i], &vs[j]));
        let rhs = DVector::from_fn(k, |i, _| self.ip(&vs[i], x));
        let coef = gram.try_inverse().expect("independent vectors") * rhs;
        let mut out = x.clone();
        for (c, v) in coef.iter().zip(vs) {
            out -= v * *c;
        }
        out
    }
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

/// Random drift: zero, a random point of `span(sub)`, or generic, with
/// roughly equal odds (generic when `sub` is empty).
pub fn drift_near(r: &mut impl Rng, n: usize, sub: &[DVector<f64>]) -> DVector<f64> {
    match r.random_range(0..3) {
        0 => DVector::zeros(n),
        1 if !sub.is_empty() => sub.iter().fold(DVector::zeros(n), |acc, v| acc + v * r.random_range(-1.0..1.0)),
        _ => gaussian(r, n),
    }
}

/// Central vectors projected g-orthogonally off the derived algebra.
pub fn center_off_derived(o: &Oracle<'_>) -> Vec<DVector<f64>> {
    let derived = o.alg.derived_subalgebra();
    o.alg
        .center()
        .into_iter()
        .map(|c| o.project_out(&c, &derived))
        .filter(|c| c.amax() > 1e-8)
        .collect()
}

/// Random metric on G1(dim) with `b = e_0` unit and orthogonal to the ideal.
pub fn adapted_g1_metric(r: &mut impl Rng, dim: usize) -> Metric {
    let inner = random_spd(r, dim - 1);
    Metric::new(DMatrix::from_fn(dim, dim, |i, j| match (i, j) {
        (0, 0) => 1.0,
        (0, _) | (_, 0) => 0.0,
        _ => inner[(i - 1, j - 1)],
    }))
    .unwrap()
}
