//! Connection coefficients Γ_{abc} = g(∇_{ξ_a}ξ_b, ξ_c) at a point, from
//! coordinate Christoffels plus exact frame-field derivatives. Metricity of
//! the Levi-Civita connection makes them skew in the last two labels.

use chart_engine::{christoffel_at, jet_at, Arr3, ChartMetric, C64};

use crate::field::FrameField;
use crate::label::{dual_index, FrameLabel};
use crate::NullFrameError;

#[derive(Clone, Debug)]
pub struct ConnectionCoeffs {
    pub m: usize,
    pub epsilon: usize,
    /// values(a,b,c) = Γ_{abc} in canonical frame-index order.
    pub values: Arr3,
}

impl ConnectionCoeffs {
    pub fn n(&self) -> usize {
        2 * self.m + self.epsilon
    }

    pub fn get(&self, a: FrameLabel, b: FrameLabel, c: FrameLabel) -> C64 {
        let m = self.m;
        self.values.get(a.to_index(m), b.to_index(m), c.to_index(m))
    }

    /// Γ_{ab}{}^e = Γ_{abc} h^{ce}: raising with h is just the dual label.
    pub fn raised(&self, a: usize, b: usize, e: usize) -> C64 {
        self.values.get(a, b, dual_index(e, self.m, self.epsilon))
    }

    pub fn max_norm(&self) -> f64 {
        self.values.max_norm()
    }

    /// max |Γ_{abc} + Γ_{acb}|, the metricity residual.
    pub fn antisymmetry_residual(&self) -> f64 {
        let n = self.n();
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                for c in b..n {
                    worst = worst
                        .max((self.values.get(a, b, c) + self.values.get(a, c, b)).norm());
                }
            }
        }
        worst
    }
}

pub fn connection_coeffs(
    chart: &ChartMetric,
    frame: &FrameField,
    point: &[C64],
) -> Result<ConnectionCoeffs, NullFrameError> {
    if frame.m != chart.m || frame.epsilon != chart.epsilon {
        return Err(NullFrameError::LabelMismatch(
            "frame does not fit chart dimensions".to_string(),
        ));
    }
    let n = chart.n();
    let jet = jet_at(chart, point)?;
    let gamma = christoffel_at(&jet);
    let fj = frame.eval_jet(point)?;

    let mut values = Arr3::zeros(n);
    for a in 0..n {
        for b in 0..n {
            // covariant derivative ∇_{ξ_a} ξ_b in coordinates
            let mut cov = vec![C64::new(0.0, 0.0); n];
            for p in 0..n {
                let mut v = C64::new(0.0, 0.0);
                for w in 0..n {
                    v += fj.xi[a][w] * fj.dxi[b][w][p];
                    for q in 0..n {
                        v += fj.xi[a][w] * gamma.get(p, w, q) * fj.xi[b][q];
                    }
                }
                cov[p] = v;
            }
            for c in 0..n {
                let mut v = C64::new(0.0, 0.0);
                for p in 0..n {
                    for r in 0..n {
                        v += jet.g0.get(p, r) * fj.xi[c][r] * cov[p];
                    }
                }
                values.set(a, b, c, v);
            }
        }
    }
    Ok(ConnectionCoeffs { m: chart.m, epsilon: chart.epsilon, values })
}
