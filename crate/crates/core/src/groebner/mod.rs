//! Commutative Groebner bases, syzygies, Krull dimension, and the freeness
//! and perversity pipeline built on them.

mod engine;
mod logbasis;
mod order;
mod perversity;

use std::time::Instant;

use thiserror::Error;

use crate::poly::Polynomial;
use engine::{Ctx, Vector};

pub use logbasis::{
    log_derivations, log_derivations_with, LogBasis, LogBasisError, LogBasisOptions, NotFreeDiagnosis,
};
pub use order::{MonomialOrder, OrderKind};
pub use perversity::{
    perversity_certificate, Freeness, NotFreeDiagnosisDocument, PerversityDocument, PerversityReport, Verdict,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("deadline exceeded")]
pub struct Timeout;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("the ideal is the whole ring")]
pub struct UnitIdeal;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    generators: Vec<Polynomial>,
    order: MonomialOrder,
    nvars: usize,
    reduced: bool,
}

impl GroebnerBasis {
    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    /// Number of ring variables (`2n`).
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Leading monomials under the basis order.
    pub fn leading_monomials(&self) -> Vec<crate::poly::Monomial> {
        let ctx = Ctx { order: &self.order };
        self.generators
            .iter()
            .map(|g| ctx.from_polynomial(g, 0).terms.last().unwrap().mono.clone())
            .collect()
    }

    /// Normal form of `p` modulo the basis.
    pub fn reduce(&self, p: &Polynomial) -> Polynomial {
        let ctx = Ctx { order: &self.order };
        let basis: Vec<Vector> = self.generators.iter().map(|g| ctx.from_polynomial(g, 0)).collect();
        let r = ctx.reduce(&ctx.from_polynomial(p, 0), &basis, None);
        ctx.to_components(&r, 1, p.n()).pop().unwrap()
    }

    pub fn contains(&self, p: &Polynomial) -> bool {
        self.reduce(p).is_zero()
    }
}

pub fn buchberger(gens: &[Polynomial], order: &MonomialOrder) -> GroebnerBasis {
    buchberger_with_deadline(gens, order, None).expect("no deadline was set")
}

pub fn buchberger_with_deadline(
    gens: &[Polynomial],
    order: &MonomialOrder,
    deadline: Option<Instant>,
) -> Result<GroebnerBasis, Timeout> {
    let n = gens.first().map(Polynomial::n).unwrap_or(0);
    let ctx = Ctx { order };
    let vs: Vec<Vector> = gens.iter().map(|g| ctx.from_polynomial(g, 0)).collect();
    let gb = engine::buchberger(&ctx, &vs, deadline)?;
    Ok(GroebnerBasis {
        generators: gb
            .iter()
            .map(|v| ctx.to_components(v, 1, n).pop().unwrap())
            .collect(),
        order: order.clone(),
        nvars: 2 * n,
        reduced: true,
    })
}

/// Krull dimension of `R / I`: the largest set of variables that supports no
/// leading monomial.
pub fn ideal_dimension(gb: &GroebnerBasis) -> Result<usize, UnitIdeal> {
    let lms = gb.leading_monomials();
    if lms.iter().any(|m| m.is_one()) {
        return Err(UnitIdeal);
    }
    let nv = gb.nvars;
    assert!(nv < 32, "too many variables for the independent-set search");
    let mut best = 0;
    for mask in 0u64..(1u64 << nv) {
        let size = mask.count_ones() as usize;
        if size > best && lms.iter().all(|m| !m.supported_in(mask)) {
            best = size;
        }
    }
    Ok(best)
}

/// Dimension of `R / (sigmas)` in the `2n`-variable ring and whether it
/// equals `n`, which for a proper ideal generated by `n` elements of a
/// polynomial ring means height `n`, hence a regular sequence.
pub fn symbol_ideal_dimension(
    sigmas: &[Polynomial],
    deadline: Option<Instant>,
) -> Result<Result<usize, UnitIdeal>, Timeout> {
    let gb = buchberger_with_deadline(sigmas, &MonomialOrder::block(), deadline)?;
    Ok(ideal_dimension(&gb))
}

pub fn is_regular_sequence(sigmas: &[Polynomial]) -> bool {
    let n = sigmas.first().map(Polynomial::n).unwrap_or(0);
    matches!(symbol_ideal_dimension(sigmas, None), Ok(Ok(d)) if d + sigmas.len() == 2 * n)
}

/// Generators `(c_1..c_m)` of `{c : sum c_i g_i = 0}`, read off a Groebner
/// basis of the rows `(g_i, e_i)` with the first component dominant.
pub fn module_syzygies(gens: &[Polynomial], deadline: Option<Instant>) -> Result<Vec<Vec<Polynomial>>, Timeout> {
    assert!(!gens.is_empty());
    let n = gens[0].n();
    let m = gens.len();
    let order = MonomialOrder::degrevlex();
    let ctx = Ctx { order: &order };
    let rows: Vec<Vector> = gens
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let mut comps = vec![Polynomial::zero(n); m + 1];
            comps[0] = g.clone();
            comps[i + 1] = Polynomial::one(n);
            ctx.from_components(&comps)
        })
        .collect();
    let gb = engine::buchberger(&ctx, &rows, deadline)?;
    Ok(gb
        .iter()
        .filter(|v| v.terms.last().is_some_and(|t| t.comp > 0))
        .map(|v| ctx.to_components(v, m + 1, n).split_off(1))
        .collect())
}

/// Greatest common divisor, monic under degrevlex, from the principal
/// syzygy module of `(a, b)`.
pub fn polynomial_gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    let syz = module_syzygies(&[a.clone(), b.clone()], None).expect("no deadline");
    // Syz(a, b) is generated by (b/g, -a/g)
    let s = syz
        .into_iter()
        .min_by_key(|s| s[0].total_degree())
        .expect("two nonzero elements always have a syzygy");
    b.exact_divide(&s[0]).expect("b / (b / gcd) is exact").monic()
}
