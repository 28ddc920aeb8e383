//! Rational functions num/den over the chart coordinates.
//!
//! Frame fields produced by pointwise normalization are rational in the
//! metric entries, so polynomial components are not enough downstream.
//! Differentiation uses the quotient rule without any gcd reduction; the
//! denominators this workspace produces stay small, and exactness matters
//! more than canonical form.

use crate::poly::Poly;
use crate::{C64, ChartError};

#[derive(Clone, Debug)]
pub struct RatPoly {
    pub num: Poly,
    pub den: Poly,
}

impl RatPoly {
    pub fn from_poly(p: Poly) -> Self {
        let n = p.nvars();
        RatPoly { num: p, den: Poly::one(n) }
    }

    pub fn zero(nvars: usize) -> Self {
        RatPoly::from_poly(Poly::zero(nvars))
    }

    pub fn constant(nvars: usize, c: C64) -> Self {
        RatPoly::from_poly(Poly::constant(nvars, c))
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &RatPoly) -> RatPoly {
        if self.den == other.den {
            return RatPoly { num: self.num.add(&other.num), den: self.den.clone() };
        }
        RatPoly {
            num: self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            den: self.den.mul(&other.den),
        }
    }

    pub fn sub(&self, other: &RatPoly) -> RatPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RatPoly {
        RatPoly { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn scale(&self, s: C64) -> RatPoly {
        RatPoly { num: self.num.scale(s), den: self.den.clone() }
    }

    pub fn mul(&self, other: &RatPoly) -> RatPoly {
        RatPoly { num: self.num.mul(&other.num), den: self.den.mul(&other.den) }
    }

    pub fn mul_poly(&self, p: &Poly) -> RatPoly {
        RatPoly { num: self.num.mul(p), den: self.den.clone() }
    }

    pub fn recip(&self) -> RatPoly {
        RatPoly { num: self.den.clone(), den: self.num.clone() }
    }

    /// Quotient rule: (n/d)' = (n'd - nd') / d^2.
    pub fn diff(&self, i: usize) -> RatPoly {
        if self.den.is_one() {
            return RatPoly::from_poly(self.num.diff(i));
        }
        let numerator = self.num.diff(i).mul(&self.den).sub(&self.num.mul(&self.den.diff(i)));
        RatPoly { num: numerator, den: self.den.mul(&self.den) }
    }

    pub fn eval(&self, x: &[C64]) -> Result<C64, ChartError> {
        let d = self.den.eval(x);
        let floor = 1e-12 * f64::max(1.0, self.den.max_coeff_norm());
        if d.norm() <= floor {
            return Err(ChartError::VanishingDenominator(d.norm()));
        }
        Ok(self.num.eval(x) / d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn quotient_rule_matches_finite_difference() {
        // f = (x^2 + y) / (1 + x y)
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let f = RatPoly {
            num: x.mul(&x).add(&y),
            den: Poly::one(2).add(&x.mul(&y)),
        };
        let df = f.diff(0);
        let p = [c(0.4, 0.1), c(-0.3, 0.2)];
        let h = 1e-6;
        let ph = [p[0] + c(h, 0.0), p[1]];
        let fd = (f.eval(&ph).unwrap() - f.eval(&p).unwrap()) / c(h, 0.0);
        assert!((df.eval(&p).unwrap() - fd).norm() < 1e-5);
    }

    #[test]
    fn vanishing_denominator_is_reported() {
        // 1 / x at x = 0
        let f = RatPoly { num: Poly::one(1), den: Poly::var(1, 0) };
        match f.eval(&[c(0.0, 0.0)]) {
            Err(ChartError::VanishingDenominator(_)) => {}
            other => panic!("expected vanishing denominator, got {other:?}"),
        }
    }

    #[test]
    fn add_with_distinct_denominators() {
        // 1/x + 1/y = (x + y)/(x y)
        let inv_x = RatPoly { num: Poly::one(2), den: Poly::var(2, 0) };
        let inv_y = RatPoly { num: Poly::one(2), den: Poly::var(2, 1) };
        let s = inv_x.add(&inv_y);
        let p = [c(2.0, 0.0), c(3.0, 0.0)];
        let got = s.eval(&p).unwrap();
        assert!((got - c(5.0 / 6.0, 0.0)).norm() < 1e-14);
    }
}
