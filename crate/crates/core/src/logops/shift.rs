use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use super::{NotLogarithmic, PbwForm, Rewriter};
use crate::poly::{multi_binomial, sub_exponents, Coeff, Monomial, Polynomial, RationalFunction};
use crate::weyl::DiffOp;

/// Outcome of testing `P(f^j) in (f^j)` for `j = 0..=ord P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct V0Report {
    pub checked_up_to: u32,
    /// First failing power and the remainder of `P(f^j)` modulo `f^j`.
    pub failure: Option<(u32, Polynomial)>,
}

impl V0Report {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

pub fn v0_membership_witness(p: &DiffOp, f: &Polynomial) -> V0Report {
    let ord = p.order().unwrap_or(0);
    let mut fj = Polynomial::one(f.n());
    for j in 0..=ord {
        if j > 0 {
            fj = &fj * f;
        }
        let image = p.apply(&fj);
        if let Err(e) = image.exact_divide(&fj) {
            return V0Report {
                checked_up_to: j,
                failure: Some((j, e.remainder)),
            };
        }
    }
    V0Report {
        checked_up_to: ord,
        failure: None,
    }
}

/// Both membership verdicts side by side.
#[derive(Clone, Debug)]
pub struct MembershipReport {
    pub normal_form: Result<PbwForm, NotLogarithmic>,
    pub power_test: V0Report,
}

impl MembershipReport {
    pub fn agree(&self) -> bool {
        self.normal_form.is_ok() == self.power_test.passed()
    }
}

pub fn membership_report(p: &DiffOp, rw: &mut Rewriter<'_>) -> MembershipReport {
    MembershipReport {
        normal_form: rw.normal_form(p),
        power_test: v0_membership_witness(p, rw.frame().divisor()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Shift {
    #[serde(skip)]
    pub q: PbwForm,
    pub k: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShiftError {
    #[error(transparent)]
    NotLogarithmic(#[from] NotLogarithmic),
    #[error("no admissible exponent k <= {bound}")]
    NotFound { bound: u32 },
}

/// `f^-p P = Q f^-k`, i.e. `f^p Q = P f^k`, with `Q` logarithmic and the
/// least such `k`. `k = p` always works, so the search is over `0..=p`.
pub fn meromorphic_shift(p_op: &DiffOp, p: u32, rw: &mut Rewriter<'_>) -> Result<Shift, ShiftError> {
    rw.normal_form(p_op)?;
    let f = rw.frame().divisor().clone();
    let fp = f.pow(p);
    for k in 0..=p {
        let lhs = p_op.compose(&DiffOp::function(f.pow(k)));
        if let Ok(q_op) = lhs.left_divide_by_function(&fp) {
            if let Ok(q) = rw.normal_form(&q_op) {
                return Ok(Shift { q, k });
            }
        }
    }
    Err(ShiftError::NotFound { bound: p })
}

/// The mirror statement `P f^-p = f^-k Q`, i.e. `Q f^p = f^k P`, again with
/// the least `k` in `0..=p`.
pub fn meromorphic_shift_right(
    p_op: &DiffOp,
    p: u32,
    rw: &mut Rewriter<'_>,
) -> Result<Shift, ShiftError> {
    rw.normal_form(p_op)?;
    let f = rw.frame().divisor().clone();
    let n = f.n();
    // P o f^-p = sum_beta S_beta d^beta with rational S_beta
    let mut parts: BTreeMap<Monomial, RationalFunction> = BTreeMap::new();
    let mut derivs: BTreeMap<Monomial, RationalFunction> = BTreeMap::new();
    let inv = RationalFunction::new(Polynomial::one(n), f.clone(), p);
    for (alpha, c) in p_op.terms() {
        for gamma in sub_exponents(alpha) {
            let dg = derivs
                .entry(gamma.clone())
                .or_insert_with(|| derivative_rational(&inv, &gamma))
                .clone();
            if dg.is_zero() {
                continue;
            }
            let coef = Coeff::from_integer(multi_binomial(alpha, &gamma));
            let term = dg.mul_poly(c).scale(&coef);
            let beta = gamma.quotient_of(alpha).unwrap();
            let slot = parts.entry(beta).or_insert_with(|| RationalFunction::zero(&f));
            *slot = slot.add(&term);
        }
    }
    for k in 0..=p {
        let fk = f.pow(k);
        let mut q_op = DiffOp::zero(n);
        let mut ok = true;
        for (beta, s) in &parts {
            match s.mul_poly(&fk).as_polynomial() {
                Some(c) => q_op.add_term(beta.clone(), c.clone()),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            if let Ok(q) = rw.normal_form(&q_op) {
                return Ok(Shift { q, k });
            }
        }
    }
    Err(ShiftError::NotFound { bound: p })
}

fn derivative_rational(r: &RationalFunction, gamma: &Monomial) -> RationalFunction {
    let mut out = r.clone();
    for (i, e) in gamma.iter().enumerate() {
        for _ in 0..e {
            out = out.partial(i);
        }
    }
    out
}
