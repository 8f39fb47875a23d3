mod common;

use common::*;
use lieflag_core::{AlphaBetaMetric, DVector, Family, Metric};
use proptest::prelude::*;

const FAMILIES: [Family; 4] = [Family::Riemannian, Family::Randers, Family::Matsumoto, Family::Kropina];

/// Random admissible drift (as a fraction of the family bound) and a pole in
/// the domain with `beta / alpha` kept away from the boundary.
fn setup(family: Family, g: &Metric, r: &mut impl rand::Rng, frac: f64) -> (DVector<f64>, DVector<f64>) {
    let n = g.dim();
    let dir = gaussian(r, n);
    let dir = &dir / g.norm(&dir);
    let drift = match family.drift_bound() {
        Some(b) => &dir * (b * frac),
        None => &dir * (0.2 + 2.0 * frac),
    };
    loop {
        let y = gaussian(r, n);
        let s = g.inner(&drift, &y) / (g.norm(&y) * g.norm(&drift).max(1e-300));
        if family != Family::Kropina || s > 0.2 {
            return (drift, y);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn fundamental_tensor_properties(fi in 0usize..4, seed in any::<u64>(), frac in 0.0f64..0.9, lam in 0.1f64..10.0) {
        let family = FAMILIES[fi];
        let alg = h3_plus_r();
        let mut r = rng(seed);
        let g = random_metric(&mut r, 4);
        let (drift, y) = setup(family, &g, &mut r, frac);
        let m = AlphaBetaMetric::new(family, &alg, &g, drift.clone()).unwrap();
        m.require_admissible().unwrap();
        let o = Oracle::new(&alg, g.gram());
        let (u, w) = (gaussian(&mut r, 4), gaussian(&mut r, 4));

        let f = m.f_value(&y).unwrap();
        prop_assert!(rel_close(f, o.finsler(family, &drift, &y), 1e-13));
        // positive homogeneity of degree one
        prop_assert!(rel_close(m.f_value(&(&y * lam)).unwrap(), lam * f, 1e-12));
        // g_y(y, y) = F(y)^2
        prop_assert!(rel_close(m.fundamental_tensor(&y, &y, &y).unwrap(), f * f, 1e-10));
        // symmetric, and homogeneous of degree zero in y
        let guw = m.fundamental_tensor(&y, &u, &w).unwrap();
        prop_assert!(rel_close(guw, m.fundamental_tensor(&y, &w, &u).unwrap(), 1e-13));
        prop_assert!(rel_close(guw, m.fundamental_tensor(&(&y * lam), &u, &w).unwrap(), 1e-10));
        // analytic vs finite differences, both the library's and the oracle's
        let scale = 1.0 + u.norm() * w.norm() * f * f / g.norm_sq(&y);
        let fd = m.fundamental_tensor_fd(&y, &u, &w, 1e-4).unwrap();
        prop_assert!((guw - fd).abs() < 1e-5 * scale, "{guw} vs fd {fd}");
        let ofd = o.gy_fd(family, &drift, &y, &u, &w, 1e-4);
        prop_assert!((guw - ofd).abs() < 1e-5 * scale, "{guw} vs oracle {ofd}");
        // positive definite
        let mat = m.fundamental_matrix(&y).unwrap();
        prop_assert!(mat.clone().cholesky().is_some());
        prop_assert!((mat.clone() - mat.transpose()).amax() < 1e-12 * mat.amax());
    }
}

#[test]
fn positivity_scan_matches_positive_definiteness_below_bound() {
    for (family, b) in [(Family::Randers, 0.9), (Family::Matsumoto, 0.45), (Family::Kropina, 2.0)] {
        assert!(lieflag_core::finsler::phi_positivity_scan(family, b, 2000).unwrap(), "{family}");
    }
}

#[test]
fn admissibility_messages() {
    let alg = h3();
    let g = Metric::identity(3);
    let m = AlphaBetaMetric::new(Family::Matsumoto, &alg, &g, e(3, 0) * 0.6).unwrap();
    let err = m.require_admissible().unwrap_err();
    assert_eq!(err.to_string().contains("0.6 \u{2265} 0.5"), true, "{err}");
    let k = AlphaBetaMetric::new(Family::Kropina, &alg, &g, DVector::zeros(3)).unwrap();
    assert!(k.require_admissible().is_err());
}
