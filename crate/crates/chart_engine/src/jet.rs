//! Pointwise jets of a chart metric: g and its first three derivative
//! stacks (all exact polynomial evaluations), plus the inverse metric and
//! its derivatives via d(g⁻¹) = −g⁻¹(dg)g⁻¹.
//!
//! Index layout puts derivative indices first: dg(c,a,b) = ∂_c g_{ab},
//! ddg(d,c,a,b) = ∂_d∂_c g_{ab}, dddg(e,d,c,a,b) = ∂_e∂_d∂_c g_{ab}.

use nalgebra::DMatrix;

use crate::chart::ChartMetric;
use crate::tensor::{Arr2, Arr3, Arr4, Arr5};
use crate::{C64, ChartError};

#[derive(Clone, Debug)]
pub struct CoordJet {
    pub point: Vec<C64>,
    pub m: usize,
    pub epsilon: usize,
    pub g0: Arr2,
    pub dg: Arr3,
    pub ddg: Arr4,
    pub dddg: Arr5,
    pub ginv: Arr2,
    pub dginv: Arr3,
    pub ddginv: Arr4,
}

impl CoordJet {
    pub fn n(&self) -> usize {
        2 * self.m + self.epsilon
    }

    /// max |(g⁻¹g)_{ab} − δ_{ab}|, for the inverse-quality invariant.
    pub fn inverse_residual(&self) -> f64 {
        let n = self.n();
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                let mut s = C64::new(0.0, 0.0);
                for c in 0..n {
                    s += self.ginv.get(a, c) * self.g0.get(c, b);
                }
                if a == b {
                    s -= C64::new(1.0, 0.0);
                }
                worst = worst.max(s.norm());
            }
        }
        worst
    }
}

fn to_mat(a: &Arr2) -> DMatrix<C64> {
    let n = a.n();
    DMatrix::from_fn(n, n, |r, c| a.get(r, c))
}

pub fn jet_at(chart: &ChartMetric, point: &[C64]) -> Result<CoordJet, ChartError> {
    let n = chart.n();
    if point.len() != n {
        return Err(ChartError::DimensionMismatch { got: point.len(), expected: n });
    }

    let mut g0 = Arr2::zeros(n);
    let mut dg = Arr3::zeros(n);
    let mut ddg = Arr4::zeros(n);
    let mut dddg = Arr5::zeros(n);

    for a in 0..n {
        for b in a..n {
            let p = &chart.g[a][b];
            let v = p.eval(point);
            g0.set(a, b, v);
            g0.set(b, a, v);
            for c in 0..n {
                let pc = p.diff(c);
                let vc = pc.eval(point);
                dg.set(c, a, b, vc);
                dg.set(c, b, a, vc);
                for d in c..n {
                    let pcd = pc.diff(d);
                    let vcd = pcd.eval(point);
                    for (x, y) in [(c, d), (d, c)] {
                        ddg.set(x, y, a, b, vcd);
                        ddg.set(x, y, b, a, vcd);
                    }
                    for e in d..n {
                        let vcde = pcd.diff(e).eval(point);
                        for (x, y, z) in [
                            (c, d, e),
                            (c, e, d),
                            (d, c, e),
                            (d, e, c),
                            (e, c, d),
                            (e, d, c),
                        ] {
                            dddg.set(x, y, z, a, b, vcde);
                            dddg.set(x, y, z, b, a, vcde);
                        }
                    }
                }
            }
        }
    }

    let scale = g0.max_norm();
    let floor = 1e-8 * scale.powi(n as i32);
    let mat = to_mat(&g0);
    let lu = mat.lu();
    let det = lu.determinant();
    if !det.norm().is_finite() || det.norm() <= floor {
        return Err(ChartError::DegenerateMetric { det: det.norm(), floor });
    }
    let inv = lu
        .try_inverse()
        .ok_or(ChartError::DegenerateMetric { det: det.norm(), floor })?;

    let mut ginv = Arr2::zeros(n);
    for a in 0..n {
        for b in 0..n {
            ginv.set(a, b, inv[(a, b)]);
        }
    }

    // dginv_c = −g⁻¹ (dg_c) g⁻¹
    let dg_mat: Vec<DMatrix<C64>> =
        (0..n).map(|c| DMatrix::from_fn(n, n, |a, b| dg.get(c, a, b))).collect();
    let dginv_mat: Vec<DMatrix<C64>> = (0..n).map(|c| -(&inv * &dg_mat[c] * &inv)).collect();
    let mut dginv = Arr3::zeros(n);
    for c in 0..n {
        for a in 0..n {
            for b in 0..n {
                dginv.set(c, a, b, dginv_mat[c][(a, b)]);
            }
        }
    }

    // ddginv_{dc} = −(dginv_d · dg_c · g⁻¹ + g⁻¹ · ddg_{dc} · g⁻¹ + g⁻¹ · dg_c · dginv_d)
    let mut ddginv = Arr4::zeros(n);
    for c in 0..n {
        for d in c..n {
            let ddg_mat = DMatrix::from_fn(n, n, |a, b| ddg.get(d, c, a, b));
            let m = -(&dginv_mat[d] * &dg_mat[c] * &inv
                + &inv * &ddg_mat * &inv
                + &inv * &dg_mat[c] * &dginv_mat[d]);
            for a in 0..n {
                for b in 0..n {
                    ddginv.set(d, c, a, b, m[(a, b)]);
                    ddginv.set(c, d, a, b, m[(a, b)]);
                }
            }
        }
    }

    Ok(CoordJet {
        point: point.to_vec(),
        m: chart.m,
        epsilon: chart.epsilon,
        g0,
        dg,
        ddg,
        dddg,
        ginv,
        dginv,
        ddginv,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn flat_jets_are_bitwise_zero() {
        let chart = ChartMetric::flat(2, 1);
        let p = vec![c(0.3, 0.1), c(-0.2, 0.5), c(1.0, 0.0), c(0.0, -0.7), c(0.4, 0.4)];
        let jet = jet_at(&chart, &p).unwrap();
        assert!(jet.dg.is_all_exactly_zero());
        assert!(jet.ddg.is_all_exactly_zero());
        assert!(jet.dddg.is_all_exactly_zero());
        assert!(jet.dginv.is_all_exactly_zero());
        assert!(jet.ddginv.is_all_exactly_zero());
        assert!(jet.inverse_residual() < 1e-14);
    }

    #[test]
    fn quadratic_entry_jet_values() {
        // g_{u1 u1} = (u1)²: at u1 = 2 the first derivative is 4, second is 2.
        let n = 4;
        let h = Poly::var(n, 0).mul(&Poly::var(n, 0));
        let chart = ChartMetric::pp_wave(2, 0, h).unwrap();
        let p = vec![c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        let jet = jet_at(&chart, &p).unwrap();
        assert_eq!(jet.g0.get(0, 0), c(4.0, 0.0));
        assert_eq!(jet.dg.get(0, 0, 0), c(4.0, 0.0));
        assert_eq!(jet.ddg.get(0, 0, 0, 0), c(2.0, 0.0));
        assert_eq!(jet.dddg.get(0, 0, 0, 0, 0), c(0.0, 0.0));
        assert_eq!(jet.dg.get(1, 0, 0), c(0.0, 0.0));
    }

    #[test]
    fn degenerate_point_rejected() {
        // g_{u1 v1} entry scaled by u1 vanishes on the u1 = 0 slice.
        let n = 4;
        let mut chart = ChartMetric::flat(2, 0);
        let u1 = Poly::var(n, 0);
        chart.g[0][2] = u1.clone();
        chart.g[2][0] = u1;
        let p = vec![c(0.0, 0.0); 4];
        match jet_at(&chart, &p) {
            Err(ChartError::DegenerateMetric { .. }) => {}
            other => panic!("expected degeneracy, got {other:?}"),
        }
    }

    #[test]
    fn dginv_matches_finite_difference() {
        let n = 4;
        let h = Poly::var(n, 0)
            .mul(&Poly::var(n, 1))
            .add(&Poly::var(n, 2).scale(c(0.5, 0.25)));
        let chart = ChartMetric::pp_wave(2, 0, h).unwrap();
        let p = vec![c(0.2, 0.1), c(0.3, -0.1), c(0.1, 0.0), c(-0.2, 0.2)];
        let jet = jet_at(&chart, &p).unwrap();
        let eps = 1e-6;
        for w in 0..n {
            let mut ph = p.clone();
            ph[w] += c(eps, 0.0);
            let jet_h = jet_at(&chart, &ph).unwrap();
            for a in 0..n {
                for b in 0..n {
                    let fd = (jet_h.ginv.get(a, b) - jet.ginv.get(a, b)) / c(eps, 0.0);
                    assert!(
                        (fd - jet.dginv.get(w, a, b)).norm() < 1e-5,
                        "dginv mismatch at ({w},{a},{b})"
                    );
                }
            }
        }
    }
}
