//! Involutivity of the canonical structures N_M by two independent routes:
//! (i) connection components of the relabeled frame, (ii) exact Lie-bracket
//! pairings. The two must agree; the geodetic strengthening (all Γ_{κμν},
//! and in odd dimensions Γ_{κμ0} and Γ_{0μν}, vanish outright) must hold
//! exactly when both N_M and N_M^⊥ are involutive.

use chart_engine::{ChartMetric, C64};

use crate::connection::connection_coeffs;
use crate::field::FrameField;
use crate::label::{relabel_for, CanonicalStructure};
use crate::NullFrameError;

#[derive(Clone, Debug)]
pub struct InvolutivityVerdict {
    pub structure: CanonicalStructure,
    pub n_involutive: bool,
    pub perp_involutive: bool,
    /// Route (i): connection-component residuals of the relabeled frame.
    pub gamma_residual_n: f64,
    pub gamma_residual_perp: f64,
    /// The full geodetic set (unantisymmetrized), nonzero unless both hold.
    pub gamma_residual_geodetic: f64,
    /// Route (ii): bracket pairings g(S,[X,Y]) and g(X,[S,T]).
    pub bracket_residual_n: f64,
    pub bracket_residual_perp: f64,
    pub points: Vec<Vec<C64>>,
    pub tau: f64,
}

pub fn involutivity_check(
    chart: &ChartMetric,
    frame: &FrameField,
    structure: &CanonicalStructure,
    points: &[Vec<C64>],
    tau: f64,
) -> Result<InvolutivityVerdict, NullFrameError> {
    let m = chart.m;
    let epsilon = chart.epsilon;
    let n = chart.n();
    if structure.m != m {
        return Err(NullFrameError::LabelMismatch("structure does not fit chart".to_string()));
    }

    // Route (i): in the relabeled frame N_M becomes N_S = span{ξ_1..ξ_m}.
    let relabeled = frame.permuted(&relabel_for(structure, epsilon));
    let mut g_n = 0.0f64;
    let mut g_perp = 0.0f64;
    let mut g_geo = 0.0f64;
    let mut gamma_scale = 1.0f64;
    for p in points {
        let cc = connection_coeffs(chart, &relabeled, p)?;
        gamma_scale = gamma_scale.max(cc.max_norm());
        let v = &cc.values;
        for mu in 0..m {
            for nu in 0..m {
                for ka in 0..m {
                    g_geo = g_geo.max(v.get(mu, nu, ka).norm());
                    // N involutive ⟺ g(S, [ξ_μ, ξ_ν]) = 0: the brackets are
                    // torsion-free differences of connection components.
                    g_n = g_n.max((v.get(mu, nu, ka) - v.get(nu, mu, ka)).norm());
                    g_perp = g_perp.max((v.get(mu, nu, ka) - v.get(nu, mu, ka)).norm());
                }
                if epsilon == 1 {
                    let z = 2 * m;
                    g_geo = g_geo.max(v.get(mu, nu, z).norm());
                    g_geo = g_geo.max(v.get(z, mu, nu).norm());
                    g_n = g_n.max((v.get(mu, nu, z) - v.get(nu, mu, z)).norm());
                    g_perp = g_perp.max((v.get(mu, z, nu) - v.get(z, mu, nu)).norm());
                }
            }
        }
    }

    // Route (ii): exact brackets of the original frame vectors.
    let span = structure.span_indices();
    let perp = structure.perp_indices(epsilon);
    let mut b_n = 0.0f64;
    let mut b_perp = 0.0f64;
    let mut bracket_scale = 1.0f64;
    for p in points {
        let g0 = chart.eval_metric(p)?;
        let fj = frame.eval_jet(p)?;
        let bracket = |i: usize, j: usize| -> Vec<C64> {
            let mut out = vec![C64::new(0.0, 0.0); n];
            for q in 0..n {
                for w in 0..n {
                    out[q] += fj.xi[i][w] * fj.dxi[j][w][q] - fj.xi[j][w] * fj.dxi[i][w][q];
                }
            }
            out
        };
        let pair = |g0: &Vec<Vec<C64>>, z: &[C64], v: &[C64]| -> C64 {
            let mut s = C64::new(0.0, 0.0);
            for r in 0..n {
                for t in 0..n {
                    s += g0[r][t] * z[r] * v[t];
                }
            }
            s
        };
        for (ii, &i) in span.iter().enumerate() {
            for &j in span.iter().skip(ii + 1) {
                let br = bracket(i, j);
                for &s in &perp {
                    let val = pair(&g0, &fj.xi[s], &br);
                    bracket_scale = bracket_scale.max(br.iter().map(|c| c.norm()).fold(0.0, f64::max));
                    b_n = b_n.max(val.norm());
                }
            }
        }
        for (ii, &s) in perp.iter().enumerate() {
            for &t in perp.iter().skip(ii + 1) {
                let br = bracket(s, t);
                for &x in &span {
                    let val = pair(&g0, &fj.xi[x], &br);
                    bracket_scale = bracket_scale.max(br.iter().map(|c| c.norm()).fold(0.0, f64::max));
                    b_perp = b_perp.max(val.norm());
                }
            }
        }
    }

    let gi_n = g_n < tau * gamma_scale;
    let gi_perp = g_perp < tau * gamma_scale;
    let bi_n = b_n < tau * bracket_scale;
    let bi_perp = b_perp < tau * bracket_scale;
    if gi_n != bi_n || gi_perp != bi_perp {
        return Err(NullFrameError::OracleDisagreement(format!(
            "connection route says (N: {gi_n}, perp: {gi_perp}), bracket route says \
             (N: {bi_n}, perp: {bi_perp}); residuals Γ = ({g_n:.3e}, {g_perp:.3e}), \
             brackets = ({b_n:.3e}, {b_perp:.3e})"
        )));
    }
    // Geodetic strengthening: full component set vanishes iff both hold.
    let geo = g_geo < tau * gamma_scale;
    if geo != (gi_n && gi_perp) {
        return Err(NullFrameError::OracleDisagreement(format!(
            "geodetic set residual {g_geo:.3e} inconsistent with involutivity \
             pair ({gi_n}, {gi_perp})"
        )));
    }

    Ok(InvolutivityVerdict {
        structure: structure.clone(),
        n_involutive: bi_n,
        perp_involutive: bi_perp,
        gamma_residual_n: g_n,
        gamma_residual_perp: g_perp,
        gamma_residual_geodetic: g_geo,
        bracket_residual_n: b_n,
        bracket_residual_perp: b_perp,
        points: points.to_vec(),
        tau,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use chart_engine::Poly;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn flat_everything_involutive() {
        let chart = ChartMetric::flat(2, 1);
        let frame = FrameField::coordinate_flat(2, 1);
        let pts = vec![vec![c(0.1, 0.3); 5], vec![c(-0.2, 0.0); 5]];
        for s in CanonicalStructure::enumerate(2) {
            let v = involutivity_check(&chart, &frame, &s, &pts, 1e-7).unwrap();
            assert!(v.n_involutive && v.perp_involutive);
        }
    }

    #[test]
    fn pp_wave_full_structure_involutive() {
        let n = 7;
        let h = Poly::var(n, 1).mul(&Poly::var(n, 1)).add(&Poly::var(n, 2).mul(&Poly::var(n, 0)));
        let chart = ChartMetric::pp_wave(3, 1, h.clone()).unwrap();
        let frame = FrameField::pp_wave_frame(3, 1, &h);
        let pts = vec![vec![c(0.4, 0.1), c(0.2, -0.3), c(-0.1, 0.5), c(0.3, 0.0), c(0.0, 0.2), c(0.6, 0.1), c(0.2, 0.2)]];
        let s = CanonicalStructure::full(3);
        let v = involutivity_check(&chart, &frame, &s, &pts, 1e-7).unwrap();
        assert!(v.n_involutive && v.perp_involutive);
        assert!(v.gamma_residual_geodetic < 1e-10);
    }

    #[test]
    fn twisted_frame_not_involutive() {
        let chart = ChartMetric::flat(3, 0);
        let frame = FrameField::twisted_flat_frame(3, 0);
        let pts = vec![vec![
            c(0.2, 0.1),
            c(-0.4, 0.3),
            c(0.6, 0.0),
            c(0.1, -0.2),
            c(0.9, 0.2),
            c(-0.3, 0.1),
        ]];
        let s = CanonicalStructure::full(3);
        let v = involutivity_check(&chart, &frame, &s, &pts, 1e-7).unwrap();
        assert!(!v.n_involutive);
        assert!(v.bracket_residual_n > 0.5);
    }
}
