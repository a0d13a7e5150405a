//! Seeded random polynomials, operators, PBW forms and logarithmic forms
//! for tests, benches and the command line.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::logder::SaitoFrame;
use crate::logforms::{dual_wedge, subsets, LogForm};
use crate::logops::{PbwForm, Rewriter};
use crate::poly::{rat, Coeff, Monomial, Polynomial, RationalFunction};
use crate::weyl::DiffOp;

pub const DEFAULT_SEED: u64 = 0x5eed_1d0c;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small nonzero rational, mostly integral.
pub fn random_coeff<R: Rng>(rng: &mut R) -> Coeff {
    let mut num = rng.random_range(-5i64..=4);
    if num >= 0 {
        num += 1;
    }
    let den = if rng.random_bool(0.2) { rng.random_range(2i64..=3) } else { 1 };
    rat(num, den)
}

/// Random exponent vector of length `len` and total degree at most `deg`.
pub fn random_monomial<R: Rng>(rng: &mut R, len: usize, deg: u32) -> Monomial {
    let mut m = Monomial::one(len);
    let d = rng.random_range(0..=deg);
    for _ in 0..d {
        let i = rng.random_range(0..len);
        m.set(i, m.get(i) + 1);
    }
    m
}

/// A polynomial in `x` only, with up to `max_terms` terms of degree at most
/// `deg`.
pub fn random_polynomial<R: Rng>(rng: &mut R, n: usize, deg: u32, max_terms: usize) -> Polynomial {
    let terms = rng.random_range(1..=max_terms.max(1));
    let mut p = Polynomial::zero(n);
    for _ in 0..terms {
        let x = random_monomial(rng, n, deg);
        let mut m = Monomial::one(2 * n);
        for i in 0..n {
            m.set(i, x.get(i));
        }
        p.add_term(m, random_coeff(rng));
    }
    p
}

pub fn random_pbw_form<R: Rng>(rng: &mut R, n: usize, order: u32, coeff_deg: u32, max_terms: usize) -> PbwForm {
    let terms = rng.random_range(1..=max_terms.max(1));
    PbwForm::from_terms(
        n,
        (0..terms).map(|_| (random_monomial(rng, n, order), random_polynomial(rng, n, coeff_deg, 3))),
    )
}

pub fn random_diffop<R: Rng>(rng: &mut R, n: usize, order: u32, coeff_deg: u32, max_terms: usize) -> DiffOp {
    let terms = rng.random_range(1..=max_terms.max(1));
    DiffOp::from_terms(
        n,
        (0..terms).map(|_| (random_monomial(rng, n, order), random_polynomial(rng, n, coeff_deg, 3))),
    )
}

/// `sum_J g_J w_J` over the `p`-fold wedges of the dual basis, which spans
/// every logarithmic `p`-form when the divisor is free.
pub fn random_log_form<R: Rng>(rng: &mut R, frame: &SaitoFrame, dual: &[LogForm], p: usize, coeff_deg: u32) -> LogForm {
    let f = frame.divisor();
    let mut w = LogForm::zero(f, p);
    for j in subsets(frame.n(), p) {
        if rng.random_bool(0.7) {
            let g = random_polynomial(rng, frame.n(), coeff_deg, 3);
            w = w.add(&dual_wedge(dual, &j).mul_poly(&g));
        }
    }
    // a holomorphic summand exercises the non-dual directions
    if p <= frame.n() && rng.random_bool(0.5) {
        let j = subsets(frame.n(), p);
        let pick = &j[rng.random_range(0..j.len())];
        let mut extra = LogForm::zero(f, p);
        extra.add_term(pick.clone(), RationalFunction::polynomial(random_polynomial(rng, frame.n(), coeff_deg, 2), f));
        w = w.add(&extra);
    }
    w
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleKind {
    /// Expansion of a random PBW form, hence logarithmic.
    Member,
    /// Arbitrary operator.
    Random,
    /// Member plus one random term of positive order.
    Perturbed,
}

#[derive(Clone, Debug)]
pub struct OperatorSample {
    pub op: DiffOp,
    pub kind: SampleKind,
}

/// Thirds of members, random operators and perturbed members. PBW degree
/// and coefficient degree are bounded by `order` and `coeff_deg`.
pub fn operator_corpus<R: Rng>(
    rng: &mut R,
    rw: &mut Rewriter<'_>,
    count: usize,
    order: u32,
    coeff_deg: u32,
) -> Vec<OperatorSample> {
    let n = rw.frame().n();
    (0..count)
        .map(|i| match i % 3 {
            0 => OperatorSample {
                op: rw.expand(&random_pbw_form(rng, n, order, coeff_deg, 4)),
                kind: SampleKind::Member,
            },
            1 => OperatorSample {
                op: random_diffop(rng, n, order, coeff_deg, 4),
                kind: SampleKind::Random,
            },
            _ => {
                let base = rw.expand(&random_pbw_form(rng, n, order, coeff_deg, 4));
                let mut alpha = random_monomial(rng, n, order.max(1));
                if alpha.is_one() {
                    alpha.set(0, 1);
                }
                let bump = DiffOp::from_terms(n, [(alpha, Polynomial::constant(n, random_coeff(rng)))]);
                OperatorSample {
                    op: &base + &bump,
                    kind: SampleKind::Perturbed,
                }
            }
        })
        .collect()
}
