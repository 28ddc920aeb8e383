//! Sparse multivariate polynomials over C with exact term-wise calculus.
//! Terms live in a BTreeMap keyed by exponent vectors, so iteration order,
//! arithmetic, and serialization are all deterministic.

use std::collections::BTreeMap;

use crate::{C64, ChartError};

const ZERO: C64 = C64::new(0.0, 0.0);

#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u16>, C64>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: C64) -> Self {
        let mut p = Poly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, C64::new(1.0, 0.0))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Poly::zero(nvars);
        p.add_term(e, C64::new(1.0, 0.0));
        p
    }

    /// Monomial c * prod x_i^{exps[i]}.
    pub fn monomial(exps: Vec<u16>, c: C64) -> Self {
        let mut p = Poly::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u16>, &C64)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().next().map_or(false, |(e, c)| {
                e.iter().all(|&x| x == 0) && *c == C64::new(1.0, 0.0)
            })
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as u32).sum())
            .max()
            .unwrap_or(0)
    }

    /// Accumulate a term; exact-zero coefficients are never stored.
    pub fn add_term(&mut self, exps: Vec<u16>, c: C64) {
        assert_eq!(exps.len(), self.nvars);
        if c == ZERO {
            return;
        }
        let entry = self.terms.entry(exps);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = *o.get() + c;
                if s == ZERO {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e.clone(), *c);
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in self.terms() {
            out.add_term(e.clone(), -*c);
        }
        out
    }

    pub fn scale(&self, s: C64) -> Poly {
        let mut out = Poly::zero(self.nvars);
        if s == ZERO {
            return out;
        }
        for (e, c) in self.terms() {
            out.add_term(e.clone(), *c * s);
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Poly::zero(self.nvars);
        for (ea, ca) in self.terms() {
            for (eb, cb) in other.terms() {
                let exps: Vec<u16> = ea.iter().zip(eb.iter()).map(|(x, y)| x + y).collect();
                out.add_term(exps, *ca * *cb);
            }
        }
        out
    }

    /// Exact partial derivative with respect to variable i.
    pub fn diff(&self, i: usize) -> Poly {
        assert!(i < self.nvars);
        let mut out = Poly::zero(self.nvars);
        for (e, c) in self.terms() {
            if e[i] == 0 {
                continue;
            }
            let mut exps = e.clone();
            exps[i] -= 1;
            out.add_term(exps, *c * C64::new(e[i] as f64, 0.0));
        }
        out
    }

    pub fn eval(&self, x: &[C64]) -> C64 {
        assert_eq!(x.len(), self.nvars);
        let mut acc = ZERO;
        for (e, c) in self.terms() {
            let mut t = *c;
            for (i, &p) in e.iter().enumerate() {
                for _ in 0..p {
                    t *= x[i];
                }
            }
            acc += t;
        }
        acc
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

pub fn poly_to_json(p: &Poly, coords: &[String]) -> serde_json::Value {
    assert_eq!(coords.len(), p.nvars());
    let terms: Vec<serde_json::Value> = p
        .terms()
        .map(|(e, c)| {
            serde_json::json!({
                "exps": e.iter().map(|&x| x as u64).collect::<Vec<u64>>(),
                "re": c.re,
                "im": c.im,
            })
        })
        .collect();
    serde_json::json!({ "coords": coords, "terms": terms })
}

pub fn poly_from_json(v: &serde_json::Value) -> Result<(Poly, Vec<String>), ChartError> {
    let bad = |m: &str| ChartError::Malformed(m.to_string());
    let coords: Vec<String> = v
        .get("coords")
        .and_then(|c| c.as_array())
        .ok_or_else(|| bad("polynomial needs a \"coords\" array"))?
        .iter()
        .map(|s| s.as_str().map(String::from))
        .collect::<Option<_>>()
        .ok_or_else(|| bad("coords must be strings"))?;
    let nvars = coords.len();
    let mut p = Poly::zero(nvars);
    let terms = v
        .get("terms")
        .and_then(|t| t.as_array())
        .ok_or_else(|| bad("polynomial needs a \"terms\" array"))?;
    for t in terms {
        let exps: Vec<u16> = t
            .get("exps")
            .and_then(|e| e.as_array())
            .ok_or_else(|| bad("term needs \"exps\""))?
            .iter()
            .map(|x| x.as_u64().map(|u| u as u16))
            .collect::<Option<_>>()
            .ok_or_else(|| bad("exps must be nonnegative integers"))?;
        if exps.len() != nvars {
            return Err(bad("term exponent length does not match coords"));
        }
        let re = t.get("re").and_then(|x| x.as_f64()).ok_or_else(|| bad("term needs \"re\""))?;
        let im = t.get("im").and_then(|x| x.as_f64()).ok_or_else(|| bad("term needs \"im\""))?;
        p.add_term(exps, C64::new(re, im));
    }
    Ok((p, coords))
}
