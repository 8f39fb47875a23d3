//! Berwald / Douglas classification of left-invariant (alpha, beta)-metrics.
//!
//! Every "for all y, z" condition is bilinear, so it is evaluated on basis
//! pairs only.

use nalgebra::DVector;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::finsler::{AlphaBetaMetric, Family};
use crate::frames::G2Frame;
use crate::lie_algebra::LieAlgebra;
use crate::linalg::basis_vector;
use crate::riemannian::Metric;

/// Residual threshold for the algebraic criteria.
pub const RESIDUAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Riemannian,
    BerwaldNonRiemannian,
    DouglasNonBerwald,
    NonDouglas,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Riemannian => "Riemannian",
            Verdict::BerwaldNonRiemannian => "BerwaldNonRiemannian",
            Verdict::DouglasNonBerwald => "DouglasNonBerwald",
            Verdict::NonDouglas => "NonDouglas",
        }
    }

    /// Chern connection equals Levi-Civita.
    pub fn is_berwald(self) -> bool {
        matches!(self, Verdict::Riemannian | Verdict::BerwaldNonRiemannian)
    }
}

/// Which algebraic condition failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    /// `g([y, X], z) + g([z, X], y) = 0`
    SkewAdjointAdX,
    /// `g([y, z], X) = 0`
    OrthogonalToDerived,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub condition: Condition,
    /// 0-based basis indices.
    pub pair: (usize, usize),
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub holds: bool,
    pub witnesses: Vec<Witness>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Classification {
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
}

fn threshold(g: &Metric, x: &DVector<f64>, tol: f64) -> f64 {
    tol * g.norm(x).max(1.0)
}

fn derived_orthogonality(alg: &LieAlgebra, g: &Metric, x: &DVector<f64>, tol: f64) -> Vec<Witness> {
    let n = alg.dim();
    let limit = threshold(g, x, tol);
    let mut out = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let br = alg.bracket_unchecked(&basis_vector(n, i), &basis_vector(n, j));
            let r = g.inner(&br, x);
            if !(r.abs() < limit) {
                out.push(Witness {
                    condition: Condition::OrthogonalToDerived,
                    pair: (i, j),
                    residual: r,
                });
            }
        }
    }
    out
}

fn check_dims(alg: &LieAlgebra, g: &Metric, x: &DVector<f64>) -> Result<()> {
    for got in [g.dim(), x.len()] {
        if got != alg.dim() {
            return Err(Error::DimensionMismatch {
                expected: alg.dim(),
                got,
            });
        }
    }
    Ok(())
}

/// Both Berwald conditions over all basis pairs.
pub fn is_berwald(alg: &LieAlgebra, g: &Metric, x: &DVector<f64>, tol: f64) -> Result<Check> {
    check_dims(alg, g, x)?;
    let n = alg.dim();
    let limit = threshold(g, x, tol);
    let mut witnesses = Vec::new();
    let brackets: Vec<_> = (0..n)
        .map(|i| alg.bracket_unchecked(&basis_vector(n, i), x))
        .collect();
    for i in 0..n {
        for j in i..n {
            let r = g.inner(&brackets[i], &basis_vector(n, j)) + g.inner(&brackets[j], &basis_vector(n, i));
            if !(r.abs() < limit) {
                witnesses.push(Witness {
                    condition: Condition::SkewAdjointAdX,
                    pair: (i, j),
                    residual: r,
                });
            }
        }
    }
    witnesses.extend(derived_orthogonality(alg, g, x, tol));
    Ok(Check {
        holds: witnesses.is_empty(),
        witnesses,
    })
}

/// Douglas test for Randers metrics: `X` orthogonal to `[g, g]`.
pub fn is_douglas_randers(m: &AlphaBetaMetric<'_>, tol: f64) -> Result<Check> {
    match m.family() {
        Family::Randers | Family::Riemannian => {}
        other => {
            return Err(Error::WrongFamily {
                expected: "randers",
                got: other.name(),
            })
        }
    }
    Ok(douglas_condition(m.algebra(), m.metric(), m.drift(), tol))
}

/// `g([e_i, e_j], X) = 0` for all basis pairs.
pub fn douglas_condition(alg: &LieAlgebra, g: &Metric, x: &DVector<f64>, tol: f64) -> Check {
    let witnesses = derived_orthogonality(alg, g, x, tol);
    Check {
        holds: witnesses.is_empty(),
        witnesses,
    }
}

/// `X = 0` gives Riemannian; otherwise Berwald, then (Randers only)
/// Douglas, else non-Douglas.
pub fn classify(m: &AlphaBetaMetric<'_>, tol: f64) -> Result<Classification> {
    m.require_admissible()?;
    let (alg, g, x) = (m.algebra(), m.metric(), m.drift());
    if m.family() == Family::Riemannian || g.norm(x) <= tol {
        return Ok(Classification {
            verdict: Verdict::Riemannian,
            witnesses: Vec::new(),
        });
    }
    let berwald = is_berwald(alg, g, x, tol)?;
    if berwald.holds {
        return Ok(Classification {
            verdict: Verdict::BerwaldNonRiemannian,
            witnesses: Vec::new(),
        });
    }
    if m.family() == Family::Randers && douglas_condition(alg, g, x, tol).holds {
        return Ok(Classification {
            verdict: Verdict::DouglasNonBerwald,
            witnesses: berwald.witnesses,
        });
    }
    Ok(Classification {
        verdict: Verdict::NonDouglas,
        witnesses: berwald.witnesses,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct G2Prediction {
    pub douglas: bool,
    pub berwald: bool,
    pub predicted_douglas: bool,
    pub predicted_berwald: bool,
}

impl G2Prediction {
    pub fn consistent(&self) -> bool {
        self.douglas == self.predicted_douglas && self.berwald == self.predicted_berwald
    }
}

/// Direct Douglas/Berwald verdicts next to the structural predictions
/// `X in Gamma` and `X in Gamma ∩ center`, for algebras with a
/// one-dimensional commutator.
pub fn g2_theorem_check(alg: &LieAlgebra, g: &Metric, x: &DVector<f64>, tol: f64) -> Result<G2Prediction> {
    check_dims(alg, g, x)?;
    let frame = G2Frame::resolve(alg, g)?;
    let limit = threshold(g, x, tol);
    let in_gamma = g.inner(x, &frame.e).abs() < limit;
    let center = alg.center();
    let projected = center
        .iter()
        .fold(DVector::zeros(alg.dim()), |acc, c| acc + c * c.dot(x));
    let in_center = (x - projected).norm() < limit;
    Ok(G2Prediction {
        douglas: douglas_condition(alg, g, x, tol).holds,
        berwald: is_berwald(alg, g, x, tol)?.holds,
        predicted_douglas: in_gamma,
        predicted_berwald: in_gamma && in_center,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie_algebra::{catalog, CatalogSpec};

    fn h3() -> LieAlgebra {
        catalog(&CatalogSpec::Heisenberg { n: 1 }).unwrap()
    }

    fn h3r() -> LieAlgebra {
        catalog(&CatalogSpec::DirectSumWithAbelian {
            base: Box::new(CatalogSpec::Heisenberg { n: 1 }),
            k: 1,
        })
        .unwrap()
    }

    fn g1(d: usize) -> LieAlgebra {
        catalog(&CatalogSpec::G1 { dim: d }).unwrap()
    }

    #[test]
    fn berwald_examples() {
        let h = h3();
        let g = Metric::identity(3);
        assert!(is_berwald(&h, &g, &DVector::zeros(3), RESIDUAL_TOL).unwrap().holds);
        for i in 0..3 {
            let c = is_berwald(&h, &g, &basis_vector(3, i), RESIDUAL_TOL).unwrap();
            assert!(!c.holds);
            assert!(!c.witnesses.is_empty());
        }
        let a = h3r();
        assert!(is_berwald(&a, &Metric::identity(4), &basis_vector(4, 3), RESIDUAL_TOL).unwrap().holds);
    }

    #[test]
    fn douglas_examples() {
        let a = g1(2);
        let g = Metric::identity(2);
        let m = AlphaBetaMetric::new(Family::Randers, &a, &g, basis_vector(2, 0) * 0.5).unwrap();
        assert!(is_douglas_randers(&m, RESIDUAL_TOL).unwrap().holds);
        let m = AlphaBetaMetric::new(Family::Randers, &a, &g, basis_vector(2, 1) * 0.5).unwrap();
        assert!(!is_douglas_randers(&m, RESIDUAL_TOL).unwrap().holds);
        let h = h3();
        let g3 = Metric::identity(3);
        let m = AlphaBetaMetric::new(Family::Randers, &h, &g3, basis_vector(3, 0) * 0.5).unwrap();
        assert!(is_douglas_randers(&m, RESIDUAL_TOL).unwrap().holds);
        let m = AlphaBetaMetric::new(Family::Matsumoto, &h, &g3, basis_vector(3, 0) * 0.3).unwrap();
        assert!(matches!(is_douglas_randers(&m, RESIDUAL_TOL), Err(Error::WrongFamily { .. })));
    }

    #[test]
    fn classify_examples() {
        let a = g1(2);
        let g = Metric::identity(2);
        let b = basis_vector(2, 0);
        let m = AlphaBetaMetric::new(Family::Randers, &a, &g, &b * 0.4).unwrap();
        assert_eq!(classify(&m, RESIDUAL_TOL).unwrap().verdict, Verdict::DouglasNonBerwald);
        let m = AlphaBetaMetric::new(Family::Matsumoto, &a, &g, &b * 0.4).unwrap();
        assert_eq!(classify(&m, RESIDUAL_TOL).unwrap().verdict, Verdict::NonDouglas);
        let m = AlphaBetaMetric::new(Family::Kropina, &a, &g, &b * 0.4).unwrap();
        assert_eq!(classify(&m, RESIDUAL_TOL).unwrap().verdict, Verdict::NonDouglas);

        let hr = h3r();
        let g4 = Metric::identity(4);
        let m = AlphaBetaMetric::new(Family::Matsumoto, &hr, &g4, basis_vector(4, 3) * 0.3).unwrap();
        assert_eq!(classify(&m, RESIDUAL_TOL).unwrap().verdict, Verdict::BerwaldNonRiemannian);

        let m = AlphaBetaMetric::new(Family::Randers, &hr, &g4, DVector::zeros(4)).unwrap();
        assert_eq!(classify(&m, RESIDUAL_TOL).unwrap().verdict, Verdict::Riemannian);

        let m = AlphaBetaMetric::new(Family::Matsumoto, &hr, &g4, basis_vector(4, 3) * 0.6).unwrap();
        assert!(matches!(classify(&m, RESIDUAL_TOL), Err(Error::Inadmissible(_))));
    }

    #[test]
    fn heisenberg_g2_prediction() {
        let h = h3();
        let g = Metric::identity(3);
        let c = g2_theorem_check(&h, &g, &(basis_vector(3, 0) * 0.5), RESIDUAL_TOL).unwrap();
        assert_eq!(
            c,
            G2Prediction {
                douglas: true,
                berwald: false,
                predicted_douglas: true,
                predicted_berwald: false
            }
        );
        let c = g2_theorem_check(&h, &g, &(basis_vector(3, 2) * 0.5), RESIDUAL_TOL).unwrap();
        assert!(!c.douglas && !c.predicted_douglas && c.consistent());
        assert!(matches!(
            g2_theorem_check(&g1(2), &Metric::identity(2), &DVector::zeros(2), RESIDUAL_TOL),
            Err(Error::MissingTag(_))
        ));
    }

    #[test]
    fn g2_with_central_drift_is_berwald() {
        // a != 0, f = 0 on a 4-dimensional algebra: [z1, e] = e, z2 and z3 central.
        let alg = catalog(&CatalogSpec::G2 {
            dim: 4,
            a: vec![1.0, 0.0, 0.0],
            f: vec![vec![0.0; 3]; 3],
        })
        .unwrap();
        let g = Metric::identity(4);
        let x = basis_vector(4, 1) * 0.3;
        let c = g2_theorem_check(&alg, &g, &x, RESIDUAL_TOL).unwrap();
        assert!(c.berwald && c.predicted_berwald && c.douglas && c.predicted_douglas);
    }
}
