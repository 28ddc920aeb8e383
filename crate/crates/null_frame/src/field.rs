//! Frame fields with rational coordinate components, canonical-pairing
//! validation, and pointwise jets (values + exact first derivatives) for
//! bracket tests and frame-component differentiation downstream.

use chart_engine::poly::poly_from_json;
use chart_engine::poly::poly_to_json;
use chart_engine::{ChartMetric, Poly, RatPoly, C64};

use crate::label::{frame_metric, FrameLabel, LabelPerm};
use crate::NullFrameError;

#[derive(Clone, Debug)]
pub struct FrameField {
    pub m: usize,
    pub epsilon: usize,
    /// vectors[i][p]: coordinate component p of frame vector i, in the
    /// canonical index order (ξ_1..ξ_m, ξ̃_1..ξ̃_m, ξ_0).
    pub vectors: Vec<Vec<RatPoly>>,
}

/// Frame values and their first coordinate derivatives at one point.
#[derive(Clone, Debug)]
pub struct FrameJet {
    /// xi[i][p] = ξ_i^p
    pub xi: Vec<Vec<C64>>,
    /// dxi[i][w][p] = ∂_w ξ_i^p
    pub dxi: Vec<Vec<Vec<C64>>>,
}

impl FrameField {
    pub fn n(&self) -> usize {
        2 * self.m + self.epsilon
    }

    /// Vectors must arrive labeled; they are sorted into canonical order.
    pub fn new(
        m: usize,
        epsilon: usize,
        labeled: Vec<(FrameLabel, Vec<RatPoly>)>,
    ) -> Result<Self, NullFrameError> {
        let n = 2 * m + epsilon;
        if labeled.len() != n {
            return Err(NullFrameError::LabelMismatch(format!(
                "expected {n} vectors, got {}",
                labeled.len()
            )));
        }
        let mut slots: Vec<Option<Vec<RatPoly>>> = vec![None; n];
        for (label, comps) in labeled {
            if matches!(label, FrameLabel::Zero) && epsilon == 0 {
                return Err(NullFrameError::LabelMismatch(
                    "label z0 not allowed in even dimension".to_string(),
                ));
            }
            if comps.len() != n || comps.iter().any(|r| r.nvars() != n) {
                return Err(NullFrameError::LabelMismatch(format!(
                    "vector {} has wrong component count",
                    label.name()
                )));
            }
            let i = label.to_index(m);
            if i >= n {
                return Err(NullFrameError::LabelMismatch(format!(
                    "label {} outside range for m={m}",
                    label.name()
                )));
            }
            if slots[i].is_some() {
                return Err(NullFrameError::LabelMismatch(format!(
                    "duplicate label {}",
                    label.name()
                )));
            }
            slots[i] = Some(comps);
        }
        let vectors = slots
            .into_iter()
            .enumerate()
            .map(|(i, s)| {
                s.ok_or_else(|| {
                    NullFrameError::LabelMismatch(format!(
                        "missing label {}",
                        FrameLabel::from_index(i, m, epsilon).name()
                    ))
                })
            })
            .collect::<Result<_, _>>()?;
        Ok(FrameField { m, epsilon, vectors })
    }

    pub fn label_of(&self, i: usize) -> FrameLabel {
        FrameLabel::from_index(i, self.m, self.epsilon)
    }

    /// Coordinate null frame for the flat (or pp-wave) block structure:
    /// ξ_μ = ∂_{v^μ}, ξ̃_μ̃ = ∂_{u^μ}, ξ_0 = ∂_w.
    pub fn coordinate_flat(m: usize, epsilon: usize) -> Self {
        let n = 2 * m + epsilon;
        let basis = |p: usize| -> Vec<RatPoly> {
            (0..n)
                .map(|q| {
                    RatPoly::constant(n, C64::new(if p == q { 1.0 } else { 0.0 }, 0.0))
                })
                .collect()
        };
        let mut vectors = Vec::with_capacity(n);
        for mu in 0..m {
            vectors.push(basis(m + mu)); // ξ_μ = ∂_{v^μ}
        }
        for mu in 0..m {
            vectors.push(basis(mu)); // ξ̃_μ̃ = ∂_{u^μ}
        }
        if epsilon == 1 {
            vectors.push(basis(2 * m));
        }
        FrameField { m, epsilon, vectors }
    }

    /// Canonical frame for the wave metric flat + H·(du¹)²:
    /// only ξ̃_1 picks up the correction −(H/2)∂_{v¹}.
    pub fn pp_wave_frame(m: usize, epsilon: usize, h: &Poly) -> Self {
        let mut frame = FrameField::coordinate_flat(m, epsilon);
        let half_h = RatPoly::from_poly(h.scale(C64::new(-0.5, 0.0)));
        frame.vectors[m][m] = half_h; // component ∂_{v¹} of ξ̃_1
        frame
    }

    /// Flat-chart frame whose first two null directions twist into the
    /// conjugate block: [ξ_1, ξ_2] = −∂_{u²} leaves N_S. Needs m ≥ 2; the
    /// pairings stay exactly canonical.
    pub fn twisted_flat_frame(m: usize, epsilon: usize) -> Self {
        let n = 2 * m + epsilon;
        let mut frame = FrameField::coordinate_flat(m, epsilon);
        let v2 = RatPoly::from_poly(Poly::var(n, m + 1));
        // ξ_1 = ∂_{v¹} + v²∂_{u²},  ξ_2 = ∂_{v²} − v²∂_{u¹}
        frame.vectors[0][1] = v2.clone();
        frame.vectors[1][0] = v2.neg();
        frame
    }

    pub fn permuted(&self, perm: &LabelPerm) -> FrameField {
        let n = self.n();
        let mut vectors = vec![Vec::new(); n];
        for i in 0..n {
            vectors[perm.apply(i)] = self.vectors[i].clone();
        }
        FrameField { m: self.m, epsilon: self.epsilon, vectors }
    }

    pub fn eval(&self, point: &[C64]) -> Result<Vec<Vec<C64>>, NullFrameError> {
        self.vectors
            .iter()
            .map(|v| {
                v.iter()
                    .map(|r| {
                        r.eval(point)
                            .map_err(|e| NullFrameError::EvaluationFailure(e.to_string()))
                    })
                    .collect()
            })
            .collect()
    }

    pub fn eval_jet(&self, point: &[C64]) -> Result<FrameJet, NullFrameError> {
        let n = self.n();
        let xi = self.eval(point)?;
        let mut dxi = vec![vec![vec![C64::new(0.0, 0.0); n]; n]; n];
        for (i, v) in self.vectors.iter().enumerate() {
            for (p, comp) in v.iter().enumerate() {
                for w in 0..n {
                    dxi[i][w][p] = comp
                        .diff(w)
                        .eval(point)
                        .map_err(|e| NullFrameError::EvaluationFailure(e.to_string()))?;
                }
            }
        }
        Ok(FrameJet { xi, dxi })
    }
}

#[derive(Clone, Debug)]
pub struct PairingReport {
    pub max_residual: f64,
    pub per_point: Vec<f64>,
    pub tau: f64,
    pub pass: bool,
}

pub fn validate_frame(
    chart: &ChartMetric,
    frame: &FrameField,
    sample_points: &[Vec<C64>],
    tau: f64,
) -> Result<PairingReport, NullFrameError> {
    if frame.m != chart.m || frame.epsilon != chart.epsilon {
        return Err(NullFrameError::LabelMismatch(format!(
            "frame (m={}, ε={}) does not fit chart (m={}, ε={})",
            frame.m, frame.epsilon, chart.m, chart.epsilon
        )));
    }
    let n = chart.n();
    let h = frame_metric(frame.m, frame.epsilon);
    let mut per_point = Vec::with_capacity(sample_points.len());
    let mut max_residual = 0.0f64;
    let mut scale = 1.0f64;
    for p in sample_points {
        let g0 = chart.eval_metric(p)?;
        let xi = frame.eval(p)?;
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                let mut pairing = C64::new(0.0, 0.0);
                for r in 0..n {
                    for s in 0..n {
                        pairing += g0[r][s] * xi[a][r] * xi[b][s];
                    }
                }
                scale = scale.max(pairing.norm());
                worst = worst.max((pairing - h.get(a, b)).norm());
            }
        }
        per_point.push(worst);
        max_residual = max_residual.max(worst);
    }
    Ok(PairingReport { max_residual, per_point, tau, pass: max_residual < tau * scale })
}

pub fn frame_to_json(frame: &FrameField, coords: &[String]) -> serde_json::Value {
    let list: Vec<serde_json::Value> = frame
        .vectors
        .iter()
        .enumerate()
        .map(|(i, v)| {
            serde_json::json!({
                "label": frame.label_of(i).name(),
                "components": v.iter().map(|r| serde_json::json!({
                    "num": poly_to_json(&r.num, coords),
                    "den": poly_to_json(&r.den, coords),
                })).collect::<Vec<_>>(),
            })
        })
        .collect();
    serde_json::Value::Array(list)
}

pub fn frame_from_json(
    v: &serde_json::Value,
    m: usize,
    epsilon: usize,
) -> Result<FrameField, NullFrameError> {
    let bad = |msg: &str| NullFrameError::LabelMismatch(msg.to_string());
    let list = v.as_array().ok_or_else(|| bad("frame file must be a list of vectors"))?;
    let mut labeled = Vec::with_capacity(list.len());
    for item in list {
        let label = item
            .get("label")
            .and_then(|l| l.as_str())
            .ok_or_else(|| bad("vector needs a \"label\""))?;
        let label = FrameLabel::parse(label)?;
        let comps = item
            .get("components")
            .and_then(|c| c.as_array())
            .ok_or_else(|| bad("vector needs \"components\""))?;
        let mut vec_comps = Vec::with_capacity(comps.len());
        for comp in comps {
            let num = comp.get("num").ok_or_else(|| bad("component needs \"num\""))?;
            let den = comp.get("den").ok_or_else(|| bad("component needs \"den\""))?;
            let (num, _) = poly_from_json(num)?;
            let (den, _) = poly_from_json(den)?;
            vec_comps.push(RatPoly { num, den });
        }
        labeled.push((label, vec_comps));
    }
    FrameField::new(m, epsilon, labeled)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn flat_coordinate_frame_validates_exactly() {
        let chart = ChartMetric::flat(3, 1);
        let frame = FrameField::coordinate_flat(3, 1);
        let pts = vec![vec![c(0.0, 0.0); 7], vec![c(0.3, -0.2); 7]];
        let report = validate_frame(&chart, &frame, &pts, 1e-8).unwrap();
        assert!(report.pass);
        assert_eq!(report.max_residual, 0.0);
    }

    #[test]
    fn pp_wave_frame_validates() {
        let n = 6;
        let h = Poly::var(n, 1).mul(&Poly::var(n, 1)).add(&Poly::var(n, 2).mul(&Poly::var(n, 0)));
        let chart = ChartMetric::pp_wave(3, 0, h.clone()).unwrap();
        let frame = FrameField::pp_wave_frame(3, 0, &h);
        let pts = vec![
            vec![c(0.5, 0.1), c(0.4, -0.3), c(-0.2, 0.2), c(0.1, 0.0), c(0.7, 0.1), c(0.0, -0.3)],
        ];
        let report = validate_frame(&chart, &frame, &pts, 1e-8).unwrap();
        assert!(report.pass, "residual {}", report.max_residual);
        assert!(report.max_residual < 1e-12);
    }

    #[test]
    fn scaled_vector_fails_validation() {
        let chart = ChartMetric::flat(2, 0);
        let mut frame = FrameField::coordinate_flat(2, 0);
        frame.vectors[0] =
            frame.vectors[0].iter().map(|r| r.scale(c(2.0, 0.0))).collect();
        let pts = vec![vec![c(0.0, 0.0); 4]];
        let report = validate_frame(&chart, &frame, &pts, 1e-8).unwrap();
        assert!(!report.pass);
        assert!((report.max_residual - 1.0).abs() < 1e-12);
    }

    #[test]
    fn twisted_frame_still_canonical() {
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
        let report = validate_frame(&chart, &frame, &pts, 1e-8).unwrap();
        assert!(report.pass, "residual {}", report.max_residual);
    }

    #[test]
    fn json_roundtrip() {
        let n = 5;
        let h = Poly::var(n, 0).mul(&Poly::var(n, 4));
        let frame = FrameField::pp_wave_frame(2, 1, &h);
        let coords: Vec<String> =
            ["u1", "u2", "v1", "v2", "w"].iter().map(|s| s.to_string()).collect();
        let v = frame_to_json(&frame, &coords);
        let back = frame_from_json(&v, 2, 1).unwrap();
        let pt = vec![c(0.3, 0.2); 5];
        let a = frame.eval(&pt).unwrap();
        let b = back.eval(&pt).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn missing_label_rejected() {
        let chart_n = 4;
        let zero = || RatPoly::zero(chart_n);
        let vecs = vec![
            (FrameLabel::Unprimed(1), vec![zero(), zero(), zero(), zero()]),
            (FrameLabel::Unprimed(2), vec![zero(), zero(), zero(), zero()]),
            (FrameLabel::Tilde(1), vec![zero(), zero(), zero(), zero()]),
            (FrameLabel::Tilde(1), vec![zero(), zero(), zero(), zero()]),
        ];
        assert!(FrameField::new(2, 0, vecs).is_err());
    }
}
