//! Exact polynomial arithmetic over the rationals.
//!
//! Every polynomial lives in the `2n`-variable ring `Q[x_1..x_n, xi_1..xi_n]`:
//! functions are the `xi`-free elements, principal symbols are the
//! `xi`-homogeneous ones.

mod monomial;
mod polynomial;
mod rational;
mod vars;

pub use monomial::Monomial;
pub(crate) use monomial::{degrevlex, lex};
pub use polynomial::{int, rat, Coeff, PolyDisplay, Polynomial};
pub use rational::{RationalDisplay, RationalFunction};
pub use vars::VarTable;

/// Product of binomial coefficients `prod_i C(a_i, b_i)`.
pub(crate) fn multi_binomial(a: &Monomial, b: &Monomial) -> num_bigint::BigInt {
    let mut acc = num_bigint::BigInt::from(1);
    for (ai, bi) in a.iter().zip(b.iter()) {
        acc *= binomial(ai as u64, bi as u64);
    }
    acc
}

pub(crate) fn binomial(n: u64, k: u64) -> num_bigint::BigInt {
    if k > n {
        return 0.into();
    }
    let k = k.min(n - k);
    let mut acc = num_bigint::BigInt::from(1);
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// All exponent vectors `g <= a` componentwise.
pub(crate) fn sub_exponents(a: &Monomial) -> Vec<Monomial> {
    let mut out = vec![Monomial::one(a.len())];
    for i in 0..a.len() {
        let mut next = Vec::with_capacity(out.len() * (a.get(i) as usize + 1));
        for m in &out {
            for e in 0..=a.get(i) {
                let mut m2 = m.clone();
                m2.set(i, e);
                next.push(m2);
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10.into());
        assert_eq!(binomial(3, 0), 1.into());
        assert_eq!(binomial(2, 3), 0.into());
        let a = Monomial::from_exponents(&[2, 3]);
        assert_eq!(sub_exponents(&a).len(), 12);
        assert_eq!(multi_binomial(&a, &Monomial::from_exponents(&[1, 1])), 6.into());
    }
}
