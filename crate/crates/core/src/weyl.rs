//! The Weyl algebra `D = Q[x][d_1..d_n]` in normal-ordered form.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use thiserror::Error;

use crate::poly::{multi_binomial, sub_exponents, Coeff, Monomial, Polynomial, VarTable};

/// `sum_alpha c_alpha(x) d^alpha` with every coefficient to the left.
#[derive(Clone, PartialEq, Eq)]
pub struct DiffOp {
    n: usize,
    terms: BTreeMap<Monomial, Polynomial>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeylError {
    #[error("the zero operator has no principal symbol")]
    ZeroOperator,
    #[error("coefficient of d^{alpha:?} is not divisible (remainder {remainder:?})")]
    NotDivisible { alpha: Vec<u16>, remainder: Polynomial },
}

impl DiffOp {
    pub fn zero(n: usize) -> Self {
        DiffOp {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        Self::function(Polynomial::one(n))
    }

    /// Multiplication by a function (order zero).
    pub fn function(f: Polynomial) -> Self {
        debug_assert!(f.is_xi_free());
        let n = f.n();
        let mut op = Self::zero(n);
        op.add_term(Monomial::one(n), f);
        op
    }

    /// `d/dx_i`.
    pub fn d(n: usize, i: usize) -> Self {
        let mut op = Self::zero(n);
        op.add_term(Monomial::var(n, i), Polynomial::one(n));
        op
    }

    /// `sum_i a_i d_i`.
    pub fn vector_field(coeffs: &[Polynomial]) -> Self {
        let n = coeffs.len();
        let mut op = Self::zero(n);
        for (i, a) in coeffs.iter().enumerate() {
            op.add_term(Monomial::var(n, i), a.clone());
        }
        op
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Polynomial)>>(n: usize, it: I) -> Self {
        let mut op = Self::zero(n);
        for (a, c) in it {
            op.add_term(a, c);
        }
        op
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Polynomial)> {
        self.terms.iter()
    }

    pub fn coeff(&self, alpha: &Monomial) -> Polynomial {
        self.terms.get(alpha).cloned().unwrap_or_else(|| Polynomial::zero(self.n))
    }

    pub fn add_term(&mut self, alpha: Monomial, c: Polynomial) {
        debug_assert_eq!(alpha.len(), self.n);
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(alpha) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                o.get_mut().add_assign_ref(&c);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Order of the operator; `None` for zero.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// The function part if the operator has order zero.
    pub fn as_function(&self) -> Option<Polynomial> {
        match self.order() {
            None => Some(Polynomial::zero(self.n)),
            Some(0) => Some(self.coeff(&Monomial::one(self.n))),
            _ => None,
        }
    }

    pub fn scale(&self, c: &Coeff) -> DiffOp {
        DiffOp::from_terms(self.n, self.terms.iter().map(|(a, p)| (a.clone(), p.scale(c))))
    }

    /// `f o P`, which in normal order only rescales coefficients.
    pub fn left_mul_function(&self, f: &Polynomial) -> DiffOp {
        DiffOp::from_terms(self.n, self.terms.iter().map(|(a, p)| (a.clone(), f * p)))
    }

    /// Normal-ordered product `self o other` via the Leibniz rule
    /// `d^a o g = sum_{b <= a} C(a,b) d^b(g) d^(a-b)`.
    pub fn compose(&self, other: &DiffOp) -> DiffOp {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = DiffOp::zero(n);
        for (alpha, c) in &self.terms {
            let gammas = sub_exponents(alpha);
            for (beta, d) in &other.terms {
                for gamma in &gammas {
                    let dg = derivative(d, gamma);
                    if dg.is_zero() {
                        continue;
                    }
                    let rest = gamma.quotient_of(alpha).unwrap();
                    let coef = Coeff::from_integer(multi_binomial(alpha, gamma));
                    out.add_term(rest.mul(beta), (c * &dg).scale(&coef));
                }
            }
        }
        out
    }

    pub fn commutator(&self, other: &DiffOp) -> DiffOp {
        &self.compose(other) - &other.compose(self)
    }

    /// The action on functions.
    pub fn apply(&self, g: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.n);
        for (alpha, c) in &self.terms {
            let dg = derivative(g, alpha);
            if !dg.is_zero() {
                out.add_assign_ref(&(c * &dg));
            }
        }
        out
    }

    /// `sum_alpha c_alpha xi^alpha` over every term.
    pub fn full_symbol(&self) -> Polynomial {
        let mut out = Polynomial::zero(self.n);
        for (alpha, c) in &self.terms {
            out.add_assign_ref(&c.mul_term(&lift_to_xi(alpha), &Coeff::from_integer(1.into())));
        }
        out
    }

    /// Homogeneous component of degree `k` of the full symbol.
    pub fn symbol_of_degree(&self, k: u32) -> Polynomial {
        let mut out = Polynomial::zero(self.n);
        for (alpha, c) in self.terms.iter().filter(|(a, _)| a.degree() == k) {
            out.add_assign_ref(&c.mul_term(&lift_to_xi(alpha), &Coeff::from_integer(1.into())));
        }
        out
    }

    pub fn principal_symbol(&self) -> Result<Polynomial, WeylError> {
        let d = self.order().ok_or(WeylError::ZeroOperator)?;
        Ok(self.symbol_of_degree(d))
    }

    /// `Q` with `f o Q = self`, divided coefficient by coefficient.
    pub fn left_divide_by_function(&self, f: &Polynomial) -> Result<DiffOp, WeylError> {
        let mut out = DiffOp::zero(self.n);
        for (alpha, c) in &self.terms {
            let q = c.exact_divide(f).map_err(|e| WeylError::NotDivisible {
                alpha: alpha.exponents().to_vec(),
                remainder: e.remainder,
            })?;
            out.terms.insert(alpha.clone(), q);
        }
        Ok(out)
    }

    pub fn display<'a>(&'a self, vars: &'a VarTable) -> OpDisplay<'a> {
        OpDisplay { op: self, vars }
    }
}

/// `d^gamma g`.
pub(crate) fn derivative(g: &Polynomial, gamma: &Monomial) -> Polynomial {
    let mut out = g.clone();
    for (i, e) in gamma.iter().enumerate() {
        for _ in 0..e {
            if out.is_zero() {
                return out;
            }
            out = out.dx(i);
        }
    }
    out
}

/// Embeds a `d`-exponent vector of length n as `xi^alpha` in the 2n ring.
pub(crate) fn lift_to_xi(alpha: &Monomial) -> Monomial {
    let n = alpha.len();
    let mut m = Monomial::one(2 * n);
    for (i, e) in alpha.iter().enumerate() {
        m.set(n + i, e);
    }
    m
}

impl fmt::Debug for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.n).map(|i| format!("x{}", i + 1)).collect();
        let vars = VarTable::from_base(&names).map_err(|_| fmt::Error)?;
        write!(f, "{}", self.display(&vars))
    }
}

pub struct OpDisplay<'a> {
    op: &'a DiffOp,
    vars: &'a VarTable,
}

/// Renders as `x^2*d_x^2 + (x + y)*d_y - 3`, highest order first. The output
/// parses back through the operator grammar.
impl fmt::Display for OpDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.op.is_zero() {
            return write!(f, "0");
        }
        for (k, (alpha, c)) in self.op.terms.iter().rev().enumerate() {
            let single = c.len() == 1;
            let neg = single && c.is_negative_leading();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let shown = if neg { -c } else { c.clone() };
            let dpart: Vec<String> = alpha
                .iter()
                .enumerate()
                .filter(|(_, e)| *e > 0)
                .map(|(i, e)| {
                    if e == 1 {
                        format!("d_{}", self.vars.base()[i])
                    } else {
                        format!("d_{}^{}", self.vars.base()[i], e)
                    }
                })
                .collect();
            if dpart.is_empty() {
                if single {
                    write!(f, "{}", shown.display(self.vars))?;
                } else {
                    write!(f, "({})", shown.display(self.vars))?;
                }
                continue;
            }
            if !shown.is_one() {
                if single {
                    write!(f, "{}*", shown.display(self.vars))?;
                } else {
                    write!(f, "({})*", shown.display(self.vars))?;
                }
            }
            write!(f, "{}", dpart.join("*"))?;
        }
        Ok(())
    }
}

impl Add for &DiffOp {
    type Output = DiffOp;
    fn add(self, rhs: &DiffOp) -> DiffOp {
        let mut out = self.clone();
        for (a, c) in &rhs.terms {
            out.add_term(a.clone(), c.clone());
        }
        out
    }
}

impl Sub for &DiffOp {
    type Output = DiffOp;
    fn sub(self, rhs: &DiffOp) -> DiffOp {
        let mut out = self.clone();
        for (a, c) in &rhs.terms {
            out.add_term(a.clone(), -c);
        }
        out
    }
}

impl Neg for &DiffOp {
    type Output = DiffOp;
    fn neg(self) -> DiffOp {
        DiffOp::from_terms(self.n, self.terms.iter().map(|(a, c)| (a.clone(), -c)))
    }
}

impl Add for DiffOp {
    type Output = DiffOp;
    fn add(self, rhs: DiffOp) -> DiffOp {
        &self + &rhs
    }
}

impl Sub for DiffOp {
    type Output = DiffOp;
    fn sub(self, rhs: DiffOp) -> DiffOp {
        &self - &rhs
    }
}
