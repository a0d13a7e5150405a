use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::monomial::Monomial;
use super::vars::VarTable;
use crate::error::NotDivisible;

pub type Coeff = BigRational;

pub fn rat(n: i64, d: i64) -> Coeff {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Coeff {
    BigRational::from_integer(BigInt::from(n))
}

/// Polynomial over the rationals in the `2n` variables `x_1..x_n, xi_1..xi_n`.
///
/// Terms are kept in a map ordered by degree-reverse-lex, so the last entry is
/// the leading term. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    n: usize,
    terms: BTreeMap<Monomial, Coeff>,
}

impl Polynomial {
    pub fn zero(n: usize) -> Self {
        Polynomial {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, Coeff::one())
    }

    pub fn constant(n: usize, c: Coeff) -> Self {
        Self::term(n, Monomial::one(2 * n), c)
    }

    pub fn from_int(n: usize, c: i64) -> Self {
        Self::constant(n, int(c))
    }

    pub fn term(n: usize, m: Monomial, c: Coeff) -> Self {
        debug_assert_eq!(m.len(), 2 * n);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { n, terms }
    }

    /// Base coordinate `x_i`.
    pub fn x(n: usize, i: usize) -> Self {
        Self::term(n, Monomial::var(2 * n, i), Coeff::one())
    }

    /// Symbol variable `xi_i`.
    pub fn xi(n: usize, i: usize) -> Self {
        Self::term(n, Monomial::var(2 * n, n + i), Coeff::one())
    }

    /// Variable at exponent position `v` (0..2n).
    pub fn var(n: usize, v: usize) -> Self {
        Self::term(n, Monomial::var(2 * n, v), Coeff::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Coeff)>>(n: usize, iter: I) -> Self {
        let mut p = Self::zero(n);
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    /// Number of base variables.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nvars(&self) -> usize {
        2 * self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The value if the polynomial is constant (zero included).
    pub fn constant_value(&self) -> Option<Coeff> {
        match self.terms.len() {
            0 => Some(Coeff::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Coefficient of the constant monomial.
    pub fn constant_term(&self) -> Coeff {
        self.terms
            .get(&Monomial::one(self.nvars()))
            .cloned()
            .unwrap_or_else(Coeff::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Coeff)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Coeff {
        self.terms.get(m).cloned().unwrap_or_else(Coeff::zero)
    }

    /// Leading term under degree-reverse-lex.
    pub fn leading(&self) -> Option<(&Monomial, &Coeff)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Degree in the symbol variables only.
    pub fn xi_degree(&self) -> Option<u32> {
        let r = self.n..2 * self.n;
        self.terms.keys().map(|m| m.partial_degree(r.clone())).max()
    }

    /// Degree in the base variables only.
    pub fn base_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.partial_degree(0..self.n)).max()
    }

    pub fn is_xi_free(&self) -> bool {
        self.xi_degree().unwrap_or(0) == 0
    }

    pub fn is_xi_homogeneous(&self, d: u32) -> bool {
        let r = self.n..2 * self.n;
        self.terms.keys().all(|m| m.partial_degree(r.clone()) == d)
    }

    pub fn add_term(&mut self, m: Monomial, c: Coeff) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Polynomial, c: &Coeff) {
        debug_assert_eq!(self.n, other.n);
        if c.is_zero() {
            return;
        }
        for (m, d) in &other.terms {
            self.add_term(m.clone(), d * c);
        }
    }

    pub fn add_assign_ref(&mut self, other: &Polynomial) {
        debug_assert_eq!(self.n, other.n);
        for (m, d) in &other.terms {
            self.add_term(m.clone(), d.clone());
        }
    }

    pub fn sub_assign_ref(&mut self, other: &Polynomial) {
        debug_assert_eq!(self.n, other.n);
        for (m, d) in &other.terms {
            self.add_term(m.clone(), -d.clone());
        }
    }

    pub fn scale(&self, c: &Coeff) -> Polynomial {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        Polynomial {
            n: self.n,
            terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Coeff) -> Polynomial {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        Polynomial {
            n: self.n,
            terms: self.terms.iter().map(|(k, d)| (k.mul(m), d * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Self::one(self.n);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative with respect to exponent position `v`.
    pub fn partial(&self, v: usize) -> Polynomial {
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            let e = m.get(v);
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.set(v, e - 1);
            out.terms.insert(m2, c * int(e as i64));
        }
        out
    }

    /// Derivative with respect to base coordinate `x_i`.
    pub fn dx(&self, i: usize) -> Polynomial {
        self.partial(i)
    }

    /// Derivative with respect to symbol variable `xi_i`.
    pub fn dxi(&self, i: usize) -> Polynomial {
        self.partial(self.n + i)
    }

    /// Divides exactly, or reports the nonzero remainder of multivariate
    /// division by `d` under degree-reverse-lex.
    pub fn exact_divide(&self, d: &Polynomial) -> Result<Polynomial, NotDivisible> {
        let (q, r) = self.div_rem(d);
        if r.is_zero() {
            Ok(q)
        } else {
            Err(NotDivisible { remainder: r })
        }
    }

    /// Quotient and remainder of division by a single nonzero polynomial.
    /// For a single divisor the remainder is zero iff `d` divides `self`.
    pub fn div_rem(&self, d: &Polynomial) -> (Polynomial, Polynomial) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let (ldm, ldc) = d.leading().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let mut p = self.clone();
        let mut q = Self::zero(self.n);
        let mut r = Self::zero(self.n);
        while let Some((m, c)) = p.terms.pop_last() {
            match ldm.quotient_of(&m) {
                Some(t) => {
                    let k = &c / &ldc;
                    // p already lost its leading term; subtract the tail of d
                    for (dm, dc) in d.terms.iter().rev().skip(1) {
                        p.add_term(dm.mul(&t), -(dc * &k));
                    }
                    q.add_term(t, k);
                }
                None => {
                    r.terms.insert(m, c);
                }
            }
        }
        (q, r)
    }

    /// Splits into components homogeneous in the symbol variables, listed by
    /// descending symbol degree.
    pub fn xi_homogeneous_components(&self) -> Vec<(u32, Polynomial)> {
        let mut parts: BTreeMap<u32, Polynomial> = BTreeMap::new();
        let r = self.n..2 * self.n;
        for (m, c) in &self.terms {
            parts
                .entry(m.partial_degree(r.clone()))
                .or_insert_with(|| Self::zero(self.n))
                .terms
                .insert(m.clone(), c.clone());
        }
        parts.into_iter().rev().collect()
    }

    /// Component of symbol degree exactly `d`.
    pub fn xi_component(&self, d: u32) -> Polynomial {
        let r = self.n..2 * self.n;
        Polynomial {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.partial_degree(r.clone()) == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Makes the leading coefficient one (zero stays zero).
    pub fn monic(&self) -> Polynomial {
        match self.leading() {
            Some((_, c)) => {
                let inv = c.recip();
                self.scale(&inv)
            }
            None => self.clone(),
        }
    }

    /// Substitutes `xi_i -> values[i]` (the other variables stay).
    pub fn substitute_xi(&self, values: &[Polynomial]) -> Polynomial {
        let n = self.n;
        let mut out = Self::zero(n);
        for (m, c) in &self.terms {
            let mut base = m.clone();
            let mut t = Self::one(n);
            for i in 0..n {
                let e = m.get(n + i);
                base.set(n + i, 0);
                if e > 0 {
                    t = &t * &values[i].pow(e as u32);
                }
            }
            out.add_assign_ref(&t.mul_term(&base, c));
        }
        out
    }

    pub fn display<'a>(&'a self, vars: &'a VarTable) -> PolyDisplay<'a> {
        PolyDisplay { p: self, vars }
    }

    pub fn is_negative_leading(&self) -> bool {
        self.leading().is_some_and(|(_, c)| c.is_negative())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let names: Vec<String> = (0..self.nvars())
            .map(|i| {
                if i < self.n {
                    format!("x{}", i + 1)
                } else {
                    format!("xi{}", i - self.n + 1)
                }
            })
            .collect();
        write_terms(f, self, |i| names[i].as_str())
    }
}

pub struct PolyDisplay<'a> {
    p: &'a Polynomial,
    vars: &'a VarTable,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.p, |i| self.vars.name(i))
    }
}

/// Canonical rendering: descending degrevlex, reduced fractions, `*` between
/// factors, e.g. `x^2 - 3/2*x*y + 1`.
fn write_terms<'n>(
    f: &mut fmt::Formatter<'_>,
    p: &Polynomial,
    name: impl Fn(usize) -> &'n str,
) -> fmt::Result {
    if p.is_zero() {
        return write!(f, "0");
    }
    for (k, (m, c)) in p.terms.iter().rev().enumerate() {
        let neg = c.is_negative();
        match (k, neg) {
            (0, true) => write!(f, "-")?,
            (0, false) => {}
            (_, true) => write!(f, " - ")?,
            (_, false) => write!(f, " + ")?,
        }
        let a = c.abs();
        let mut first = true;
        if !a.is_one() || m.is_one() {
            write!(f, "{a}")?;
            first = false;
        }
        for (i, e) in m.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "{}", name(i))?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
    }
    Ok(())
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out.sub_assign_ref(rhs);
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            n: self.n,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        debug_assert_eq!(self.n, rhs.n);
        let mut out = Polynomial::zero(self.n);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: Polynomial) -> Polynomial {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: &Polynomial) -> Polynomial {
                (&self).$f(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::VarTable;

    fn vars() -> VarTable {
        VarTable::parse_list("x,y").unwrap()
    }

    fn x() -> Polynomial {
        Polynomial::x(2, 0)
    }
    fn y() -> Polynomial {
        Polynomial::x(2, 1)
    }

    #[test]
    fn arith_examples() {
        assert_eq!(&(&x() + &y()) + &(&x() - &y()), x().scale(&int(2)));
        assert_eq!((&x() * &y()).display(&vars()).to_string(), "x*y");
        let d = &(&x() + &y()) * &(&x() - &y());
        assert_eq!(d, &x().pow(2) - &y().pow(2));
        assert_eq!(d.display(&vars()).to_string(), "x^2 - y^2");
    }

    #[test]
    fn partial_examples() {
        let xi1 = Polynomial::xi(2, 0);
        let p = &x().pow(2) * &xi1.pow(2);
        assert_eq!(p.dxi(0), (&x().pow(2) * &xi1).scale(&int(2)));
        assert_eq!((&x() * &y()).dx(0), y());
        assert!(Polynomial::from_int(2, 7).dx(0).is_zero());
    }

    #[test]
    fn exact_divide_examples() {
        let xy = &x() * &y();
        assert_eq!((&x().pow(2) * &y()).exact_divide(&xy).unwrap(), x());
        let err = (&x().pow(2) + &y()).exact_divide(&x()).unwrap_err();
        assert_eq!(err.remainder, y());
        let xi1 = Polynomial::xi(2, 0);
        let p = (&(&x().pow(2) * &y()) * &xi1).scale(&int(2));
        assert_eq!(p.exact_divide(&xy).unwrap(), (&x() * &xi1).scale(&int(2)));
    }

    #[test]
    fn xi_components() {
        let xi1 = Polynomial::xi(2, 0);
        let xi2 = Polynomial::xi(2, 1);
        let a = &x().pow(2) * &xi1.pow(2);
        let b = &x() * &xi2;
        let comps = (&a + &b).xi_homogeneous_components();
        assert_eq!(comps, vec![(2, a), (1, b)]);
        assert!(Polynomial::zero(2).xi_homogeneous_components().is_empty());
        assert_eq!((&x() * &y()).xi_homogeneous_components(), vec![(0, &x() * &y())]);
    }

    #[test]
    fn rendering() {
        let v = vars();
        let p = Polynomial::from_terms(
            2,
            [
                (Monomial::from_exponents(&[2, 1, 0, 0]), rat(3, 2)),
                (Monomial::from_exponents(&[0, 0, 0, 0]), int(-1)),
                (Monomial::from_exponents(&[0, 1, 0, 0]), int(-1)),
            ],
        );
        assert_eq!(p.display(&v).to_string(), "3/2*x^2*y - y - 1");
        assert_eq!(Polynomial::zero(2).display(&v).to_string(), "0");
        assert_eq!(Polynomial::xi(2, 1).display(&v).to_string(), "xi_y");
    }
}
