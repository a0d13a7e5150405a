use std::fmt;

use super::polynomial::{int, Coeff, Polynomial};
use super::vars::VarTable;

/// `numerator / base^order`, where `base` is the divisor equation. Always
/// reduced: `base` does not divide `numerator` unless `order == 0`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalFunction {
    numerator: Polynomial,
    base: Polynomial,
    order: u32,
}

impl RationalFunction {
    pub fn new(numerator: Polynomial, base: Polynomial, order: u32) -> Self {
        assert!(!base.is_zero(), "pole base must be nonzero");
        let mut r = RationalFunction {
            numerator,
            base,
            order,
        };
        r.reduce();
        r
    }

    pub fn polynomial(p: Polynomial, base: &Polynomial) -> Self {
        Self::new(p, base.clone(), 0)
    }

    pub fn zero(base: &Polynomial) -> Self {
        Self::polynomial(Polynomial::zero(base.n()), base)
    }

    fn reduce(&mut self) {
        if self.numerator.is_zero() {
            self.order = 0;
            return;
        }
        while self.order > 0 {
            match self.numerator.exact_divide(&self.base) {
                Ok(q) => {
                    self.numerator = q;
                    self.order -= 1;
                }
                Err(_) => break,
            }
        }
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.numerator
    }

    pub fn base(&self) -> &Polynomial {
        &self.base
    }

    pub fn pole_order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.order == 0
    }

    pub fn as_polynomial(&self) -> Option<&Polynomial> {
        (self.order == 0).then_some(&self.numerator)
    }

    /// Numerator rescaled to pole order `k >= self.order`.
    fn numerator_at(&self, k: u32) -> Polynomial {
        debug_assert!(k >= self.order);
        &self.numerator * &self.base.pow(k - self.order)
    }

    fn check_base(&self, other: &Self) {
        assert_eq!(self.base, other.base, "rational functions with different pole bases");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_base(other);
        let k = self.order.max(other.order);
        Self::new(&self.numerator_at(k) + &other.numerator_at(k), self.base.clone(), k)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_base(other);
        let k = self.order.max(other.order);
        Self::new(&self.numerator_at(k) - &other.numerator_at(k), self.base.clone(), k)
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            numerator: -&self.numerator,
            base: self.base.clone(),
            order: self.order,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_base(other);
        Self::new(
            &self.numerator * &other.numerator,
            self.base.clone(),
            self.order + other.order,
        )
    }

    pub fn mul_poly(&self, p: &Polynomial) -> Self {
        Self::new(&self.numerator * p, self.base.clone(), self.order)
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        Self::new(self.numerator.scale(c), self.base.clone(), self.order)
    }

    /// Multiplies by `base^-k`.
    pub fn shift_pole(&self, k: u32) -> Self {
        Self::new(self.numerator.clone(), self.base.clone(), self.order + k)
    }

    /// Quotient rule: `d(N/f^k) = (f dN - k N df) / f^(k+1)`.
    pub fn partial(&self, v: usize) -> Self {
        if self.order == 0 {
            return Self::polynomial(self.numerator.partial(v), &self.base);
        }
        let k = self.order;
        let num = &(&self.base * &self.numerator.partial(v))
            - &(&self.numerator * &self.base.partial(v)).scale(&int(k as i64));
        Self::new(num, self.base.clone(), k + 1)
    }

    pub fn display<'a>(&'a self, vars: &'a VarTable) -> RationalDisplay<'a> {
        RationalDisplay { r: self, vars }
    }
}

pub struct RationalDisplay<'a> {
    r: &'a RationalFunction,
    vars: &'a VarTable,
}

/// `num` when polynomial, `num / f^k` otherwise (`f` stands for the pole base).
impl fmt::Display for RationalDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.r.order == 0 {
            write!(f, "{}", self.r.numerator.display(self.vars))
        } else {
            write!(f, "{} / f^{}", self.r.numerator.display(self.vars), self.r.order)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Polynomial {
        Polynomial::x(2, 0)
    }
    fn y() -> Polynomial {
        Polynomial::x(2, 1)
    }

    #[test]
    fn reduction_is_canonical() {
        let f = &x() * &y();
        let r = RationalFunction::new(&f * &x(), f.clone(), 1);
        assert!(r.is_polynomial());
        assert_eq!(r.numerator(), &x());
        let s = RationalFunction::new(y(), f.clone(), 1); // 1/x
        assert_eq!(s.pole_order(), 1);
        assert_eq!(s.mul_poly(&x()), RationalFunction::polynomial(y().pow(0), &f));
    }

    #[test]
    fn quotient_rule() {
        // d/dx (y / xy) = d/dx (1/x) = -1/x^2 = -y^2 / (xy)^2
        let f = &x() * &y();
        let s = RationalFunction::new(y(), f.clone(), 1);
        let ds = s.partial(0);
        assert_eq!(ds, RationalFunction::new(-y().pow(2), f, 2));
    }

    #[test]
    fn addition_aligns_orders() {
        let f = x();
        let a = RationalFunction::new(Polynomial::one(2), f.clone(), 1);
        let b = RationalFunction::new(x(), f.clone(), 2);
        // 1/x + x/x^2 = 2/x
        assert_eq!(a.add(&b), RationalFunction::new(Polynomial::from_int(2, 2), f, 1));
    }
}
