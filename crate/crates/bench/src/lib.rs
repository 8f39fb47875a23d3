//! Fixtures shared by the benchmarks.

use lieflag_core::{canonicalize_flag, catalog, CatalogSpec, DVector, Family, Flag, LieAlgebra, Metric};

pub struct Fixture {
    pub name: &'static str,
    pub algebra: LieAlgebra,
    pub metric: Metric,
    pub family: Family,
    pub drift: DVector<f64>,
}

impl Fixture {
    pub fn finsler(&self) -> lieflag_core::AlphaBetaMetric<'_> {
        lieflag_core::AlphaBetaMetric::new(self.family, &self.algebra, &self.metric, self.drift.clone())
            .expect("fixture dimensions agree")
    }

    /// `count` deterministic, well-spread flags inside the domain of `F`.
    pub fn flags(&self, count: usize) -> Vec<Flag> {
        let n = self.algebra.dim();
        let m = self.finsler();
        let mut out = Vec::with_capacity(count);
        let mut k = 0usize;
        while out.len() < count {
            k += 1;
            let y = DVector::from_fn(n, |i, _| ((k * (i + 1)) as f64 * 0.7548776662).sin());
            let v = DVector::from_fn(n, |i, _| ((k * (i + 3)) as f64 * 0.5698402910).cos());
            if let Ok(f) = canonicalize_flag(&self.metric, &y, &v) {
                if m.in_domain(f.y()) && (self.family != Family::Kropina || m.beta(f.y()) > 0.1) {
                    out.push(f);
                }
            }
        }
        out
    }
}

fn unit(n: usize, i: usize) -> DVector<f64> {
    DVector::from_fn(n, |r, _| if r == i { 1.0 } else { 0.0 })
}

/// Heisenberg(1) plus a line, Matsumoto with a central drift.
pub fn h3r_matsumoto() -> Fixture {
    let algebra = catalog(&CatalogSpec::DirectSumWithAbelian {
        base: Box::new(CatalogSpec::Heisenberg { n: 1 }),
        k: 1,
    })
    .expect("catalog entry");
    Fixture {
        name: "h3+r matsumoto",
        metric: Metric::identity(4),
        family: Family::Matsumoto,
        drift: unit(4, 3) * 0.3,
        algebra,
    }
}

/// Heisenberg(n) with a Douglas Randers drift along `x1`.
pub fn heisenberg_randers(n: usize) -> Fixture {
    let algebra = catalog(&CatalogSpec::Heisenberg { n }).expect("catalog entry");
    let dim = algebra.dim();
    Fixture {
        name: "heisenberg randers",
        metric: Metric::identity(dim),
        family: Family::Randers,
        drift: unit(dim, 0) * 0.5,
        algebra,
    }
}

/// G1(dim) with a Douglas Randers drift along `b`.
pub fn g1_randers(dim: usize) -> Fixture {
    Fixture {
        name: "g1 randers",
        algebra: catalog(&CatalogSpec::G1 { dim }).expect("catalog entry"),
        metric: Metric::identity(dim),
        family: Family::Randers,
        drift: unit(dim, 0) * 0.5,
    }
}
