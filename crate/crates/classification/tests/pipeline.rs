//! Chart metric → jet → curvature → frame components → filtration, end to
//! end, on geometries whose class is known in closed form.

use chart_engine::{
    curvature_at, jet_at, random_polydisc_point, random_polynomial_metric, ChartMetric, Poly, C64,
};
use classification::{
    filtration_level, frame_components3, frame_components4, SymmetryClass,
};
use null_frame::{pointwise_null_frame, CanonicalStructure, FrameField};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn mono(n: usize, spec: &[(usize, u16)], c: f64) -> Poly {
    let mut exps = vec![0u16; n];
    for &(var, pow) in spec {
        exps[var] = pow;
    }
    Poly::monomial(exps, C64::new(c, 0.0))
}

/// Plane wave with u-only profile: Ricci-flat, curvature supported entirely
/// on the dual half of the frame, so its class is exact.
fn pp_wave_case(m: usize, epsilon: usize, h: Poly, point: &[C64]) {
    let metric = ChartMetric::pp_wave(m, epsilon, h.clone()).unwrap();
    let jet = jet_at(&metric, point).unwrap();
    let curv = curvature_at(&jet);

    let scale = curv.riemann.max_norm().max(1.0);
    assert!(curv.ricci.max_norm() < 1e-10 * scale, "wave profile should be Ricci-flat");

    let frame = FrameField::pp_wave_frame(m, epsilon, &h);
    let vectors = frame.eval(point).unwrap();
    let weyl = frame_components4(&curv.weyl, &vectors, m, epsilon, SymmetryClass::Weyl).unwrap();
    assert!(weyl.max_norm() > 1e-6, "curvature should survive in the frame");

    let full = CanonicalStructure::full(m);
    let rep = filtration_level(&weyl, &full, 1e-8).unwrap();
    // everything sits in the all-dual grading, the most degenerate
    // nonzero class; in particular the level clears −1−ε
    let s2_dual = -4 * (1 + epsilon as i32);
    assert_eq!(rep.level2, -s2_dual);
    assert!(rep.level() >= -1.0 - epsilon as f64);
    for (&s2, &mag) in &rep.grading_profile {
        if s2 != s2_dual {
            assert!(mag < rep.threshold, "unexpected weight-{s2} component of size {mag}");
        }
    }

    // with respect to the opposite structure the same tensor is generic
    let rep_opp = filtration_level(&weyl, &CanonicalStructure::empty(m), 1e-8).unwrap();
    assert_eq!(rep_opp.level2, rep_opp.bottom2);

    // vanishing Schouten tensor leaves nothing for the Cotton-York current
    let cy = frame_components3(
        &curv.cotton_york,
        &vectors,
        m,
        epsilon,
        SymmetryClass::CottonYork,
    )
    .unwrap();
    assert!(cy.max_norm() < 1e-10 * scale);
}

#[test]
fn plane_waves_classify_as_maximally_degenerate() {
    // H = u1·u2² + u3³ on six coordinates (u1,u2,u3,v1,v2,v3)
    let h6 = mono(6, &[(0, 1), (1, 2)], 1.0).add(&mono(6, &[(2, 3)], 1.0));
    let point6: Vec<C64> = vec![
        C64::new(0.31, 0.12),
        C64::new(-0.22, 0.05),
        C64::new(0.17, -0.29),
        C64::new(0.08, 0.21),
        C64::new(-0.14, -0.07),
        C64::new(0.26, 0.03),
    ];
    pp_wave_case(3, 0, h6, &point6);

    // H = u2³ + u1²·u2 on five coordinates (u1,u2,v1,v2,w)
    let h5 = mono(5, &[(1, 3)], 1.0).add(&mono(5, &[(0, 2), (1, 1)], 1.0));
    let point5: Vec<C64> = vec![
        C64::new(0.24, -0.11),
        C64::new(-0.19, 0.23),
        C64::new(0.06, 0.14),
        C64::new(0.18, -0.02),
        C64::new(-0.09, 0.27),
    ];
    pp_wave_case(2, 1, h5, &point5);
}

#[test]
fn random_polynomial_metrics_classify_as_generic() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x70697065);
    for &(m, eps) in &[(2usize, 1usize), (3, 0)] {
        let n = 2 * m + eps;
        let metric = random_polynomial_metric(m, eps, 3, 0.05, &mut rng);
        let point = random_polydisc_point(n, 0.3, &mut rng);
        let jet = jet_at(&metric, &point).unwrap();
        let curv = curvature_at(&jet);
        let vectors = pointwise_null_frame(&jet.g0, eps).unwrap();

        let weyl =
            frame_components4(&curv.weyl, &vectors, m, eps, SymmetryClass::Weyl).unwrap();
        assert!(weyl.symmetry_residual() < 1e-8 * weyl.max_norm());
        let full = CanonicalStructure::full(m);
        let rep = filtration_level(&weyl, &full, 1e-8).unwrap();
        assert_eq!(rep.level2, rep.bottom2, "m={m}, eps={eps}");

        let cy = frame_components3(&curv.cotton_york, &vectors, m, eps, SymmetryClass::CottonYork)
            .unwrap();
        assert!(cy.symmetry_residual() < 1e-8 * cy.max_norm());
        let rep = filtration_level(&cy, &full, 1e-8).unwrap();
        assert_eq!(rep.level2, rep.bottom2, "m={m}, eps={eps}");
    }
}
