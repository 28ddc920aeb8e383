//! Holomorphic polynomial metrics on a coordinate chart.
//!
//! Coordinate order is pinned once for the whole workspace:
//! (u^1..u^m, v^1..v^m) for even dimension, plus a final w when n = 2m+1.
//! The flat metric is g = 2 Σ du^μ ⊙ dv^μ (+ dw⊗dw), i.e. g[μ-1][m+μ-1] = 1.

use rand::Rng;

use crate::poly::{poly_from_json, poly_to_json, Poly};
use crate::{C64, ChartError};

#[derive(Clone, Debug)]
pub struct ChartMetric {
    pub coords: Vec<String>,
    pub m: usize,
    pub epsilon: usize,
    /// Full symmetric n×n array (not just the upper triangle).
    pub g: Vec<Vec<Poly>>,
}

fn standard_coords(m: usize, epsilon: usize) -> Vec<String> {
    let mut coords = Vec::with_capacity(2 * m + epsilon);
    for i in 1..=m {
        coords.push(format!("u{i}"));
    }
    for i in 1..=m {
        coords.push(format!("v{i}"));
    }
    if epsilon == 1 {
        coords.push("w".to_string());
    }
    coords
}

impl ChartMetric {
    pub fn n(&self) -> usize {
        2 * self.m + self.epsilon
    }

    pub fn new(coords: Vec<String>, g: Vec<Vec<Poly>>) -> Result<Self, ChartError> {
        let n = coords.len();
        if !(4..=9).contains(&n) {
            return Err(ChartError::DimensionMismatch { got: n, expected: 4 });
        }
        let epsilon = n % 2;
        let m = (n - epsilon) / 2;
        if g.len() != n || g.iter().any(|row| row.len() != n) {
            return Err(ChartError::Malformed("metric array is not n×n".to_string()));
        }
        for row in &g {
            for p in row {
                if p.nvars() != n {
                    return Err(ChartError::Malformed(
                        "metric component has wrong variable count".to_string(),
                    ));
                }
            }
        }
        for a in 0..n {
            for b in (a + 1)..n {
                if g[a][b] != g[b][a] {
                    return Err(ChartError::Malformed(format!(
                        "metric not symmetric at ({a},{b})"
                    )));
                }
            }
        }
        Ok(ChartMetric { coords, m, epsilon, g })
    }

    pub fn flat(m: usize, epsilon: usize) -> Self {
        let n = 2 * m + epsilon;
        let one = C64::new(1.0, 0.0);
        let mut g = vec![vec![Poly::zero(n); n]; n];
        for mu in 0..m {
            g[mu][m + mu] = Poly::constant(n, one);
            g[m + mu][mu] = Poly::constant(n, one);
        }
        if epsilon == 1 {
            g[2 * m][2 * m] = Poly::constant(n, one);
        }
        ChartMetric { coords: standard_coords(m, epsilon), m, epsilon, g }
    }

    /// Flat metric plus H·(du¹)²; H is any polynomial in the chart coords.
    pub fn pp_wave(m: usize, epsilon: usize, h: Poly) -> Result<Self, ChartError> {
        let mut chart = ChartMetric::flat(m, epsilon);
        if h.nvars() != chart.n() {
            return Err(ChartError::Malformed(
                "wave profile has wrong variable count".to_string(),
            ));
        }
        chart.g[0][0] = chart.g[0][0].add(&h);
        Ok(chart)
    }

    /// Metric Ω²·g for a polynomial conformal factor Ω.
    pub fn conformally_scaled(&self, omega: &Poly) -> Result<Self, ChartError> {
        if omega.nvars() != self.n() {
            return Err(ChartError::Malformed(
                "conformal factor has wrong variable count".to_string(),
            ));
        }
        let om2 = omega.mul(omega);
        let g = self
            .g
            .iter()
            .map(|row| row.iter().map(|p| p.mul(&om2)).collect())
            .collect();
        Ok(ChartMetric { coords: self.coords.clone(), m: self.m, epsilon: self.epsilon, g })
    }

    pub fn eval_metric(&self, point: &[C64]) -> Result<Vec<Vec<C64>>, ChartError> {
        let n = self.n();
        if point.len() != n {
            return Err(ChartError::DimensionMismatch { got: point.len(), expected: n });
        }
        Ok(self
            .g
            .iter()
            .map(|row| row.iter().map(|p| p.eval(point)).collect())
            .collect())
    }

    /// Upper-triangular serialization: row a lists components g[a][a..n].
    pub fn to_json(&self) -> serde_json::Value {
        let n = self.n();
        let rows: Vec<serde_json::Value> = (0..n)
            .map(|a| {
                let row: Vec<serde_json::Value> =
                    (a..n).map(|b| poly_to_json(&self.g[a][b], &self.coords)).collect();
                serde_json::Value::Array(row)
            })
            .collect();
        serde_json::Value::Array(rows)
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, ChartError> {
        let bad = |m: &str| ChartError::Malformed(m.to_string());
        let rows = v.as_array().ok_or_else(|| bad("metric file must be an array of rows"))?;
        let n = rows.len();
        if !(4..=9).contains(&n) {
            return Err(ChartError::DimensionMismatch { got: n, expected: 4 });
        }
        let mut coords: Option<Vec<String>> = None;
        let mut g = vec![vec![Poly::zero(n); n]; n];
        for (a, row) in rows.iter().enumerate() {
            let row = row.as_array().ok_or_else(|| bad("metric row must be an array"))?;
            if row.len() != n - a {
                return Err(bad("metric rows must be upper-triangular (row a has n-a entries)"));
            }
            for (off, pv) in row.iter().enumerate() {
                let b = a + off;
                let (p, cs) = poly_from_json(pv)?;
                if p.nvars() != n {
                    return Err(bad("metric component has wrong variable count"));
                }
                match &coords {
                    None => coords = Some(cs),
                    Some(existing) => {
                        if *existing != cs {
                            return Err(bad("metric components disagree on coords"));
                        }
                    }
                }
                g[a][b] = p.clone();
                g[b][a] = p;
            }
        }
        let coords = coords.ok_or_else(|| bad("empty metric file"))?;
        ChartMetric::new(coords, g)
    }
}

pub fn random_unit_disc<R: Rng>(rng: &mut R) -> C64 {
    loop {
        let re: f64 = rng.gen_range(-1.0..1.0);
        let im: f64 = rng.gen_range(-1.0..1.0);
        if re * re + im * im <= 1.0 {
            return C64::new(re, im);
        }
    }
}

pub fn random_polydisc_point<R: Rng>(n: usize, radius: f64, rng: &mut R) -> Vec<C64> {
    (0..n).map(|_| random_unit_disc(rng) * C64::new(radius, 0.0)).collect()
}

/// Flat metric plus, in every component, a couple of random monomials of
/// total degree 1..=degree with unit-disc coefficients scaled by amplitude.
pub fn random_polynomial_metric<R: Rng>(
    m: usize,
    epsilon: usize,
    degree: u16,
    amplitude: f64,
    rng: &mut R,
) -> ChartMetric {
    let mut chart = ChartMetric::flat(m, epsilon);
    let n = chart.n();
    let amp = C64::new(amplitude, 0.0);
    for a in 0..n {
        for b in a..n {
            let mut pert = Poly::zero(n);
            for _ in 0..2 {
                let t = rng.gen_range(1..=degree.max(1));
                let mut exps = vec![0u16; n];
                for _ in 0..t {
                    exps[rng.gen_range(0..n)] += 1;
                }
                pert.add_term(exps, random_unit_disc(rng) * amp);
            }
            chart.g[a][b] = chart.g[a][b].add(&pert);
            if b != a {
                chart.g[b][a] = chart.g[a][b].clone();
            }
        }
    }
    chart
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_has_canonical_pairings() {
        let chart = ChartMetric::flat(3, 1);
        assert_eq!(chart.n(), 7);
        let origin = vec![C64::new(0.0, 0.0); 7];
        let g0 = chart.eval_metric(&origin).unwrap();
        for a in 0..7 {
            for b in 0..7 {
                let expect = if (b == a + 3 && a < 3) || (a == b + 3 && b < 3) || (a == 6 && b == 6)
                {
                    1.0
                } else {
                    0.0
                };
                assert_eq!(g0[a][b], C64::new(expect, 0.0), "({a},{b})");
            }
        }
    }

    #[test]
    fn json_roundtrip() {
        let n = 5;
        let h = Poly::var(n, 1).mul(&Poly::var(n, 1)); // (u²)²
        let chart = ChartMetric::pp_wave(2, 1, h).unwrap();
        let v = chart.to_json();
        let back = ChartMetric::from_json(&v).unwrap();
        assert_eq!(back.m, 2);
        assert_eq!(back.epsilon, 1);
        for a in 0..n {
            for b in 0..n {
                assert_eq!(chart.g[a][b], back.g[a][b]);
            }
        }
    }

    #[test]
    fn asymmetric_input_rejected() {
        let n = 4;
        let mut g = ChartMetric::flat(2, 0).g;
        g[0][1] = Poly::var(n, 0);
        let err = ChartMetric::new(standard_coords(2, 0), g);
        assert!(err.is_err());
    }
}
