//! Buchberger's algorithm over free modules `R^m` with a position-over-term
//! order (component 0 is the most significant). Ideals are the case `m = 1`.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::time::Instant;

use num_traits::{One, Zero};

use super::order::MonomialOrder;
use super::Timeout;
use crate::poly::{Coeff, Monomial, Polynomial};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Term {
    pub comp: usize,
    pub mono: Monomial,
    pub coeff: Coeff,
}

/// Terms in ascending order; the leading term is last.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub(crate) struct Vector {
    pub terms: Vec<Term>,
}

pub(crate) struct Ctx<'a> {
    pub order: &'a MonomialOrder,
}

impl Ctx<'_> {
    fn cmp(&self, a: &Term, b: &Term) -> Ordering {
        b.comp
            .cmp(&a.comp)
            .then_with(|| self.order.cmp(&a.mono, &b.mono))
    }

    pub fn from_polynomial(&self, p: &Polynomial, comp: usize) -> Vector {
        let mut terms: Vec<Term> = p
            .terms()
            .map(|(m, c)| Term {
                comp,
                mono: m.clone(),
                coeff: c.clone(),
            })
            .collect();
        terms.sort_by(|a, b| self.cmp(a, b));
        Vector { terms }
    }

    pub fn from_components(&self, comps: &[Polynomial]) -> Vector {
        let mut terms = Vec::new();
        for (i, p) in comps.iter().enumerate() {
            terms.extend(self.from_polynomial(p, i).terms);
        }
        terms.sort_by(|a, b| self.cmp(a, b));
        Vector { terms }
    }

    /// `a + c * m * b`.
    fn add_scaled(&self, a: &Vector, b: &Vector, m: &Monomial, c: &Coeff) -> Vector {
        let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
        let scaled = b.terms.iter().map(|t| Term {
            comp: t.comp,
            mono: t.mono.mul(m),
            coeff: &t.coeff * c,
        });
        let mut ia = a.terms.iter().peekable();
        let mut ib = scaled.peekable();
        loop {
            match (ia.peek(), ib.peek()) {
                (Some(x), Some(y)) => match self.cmp(x, y) {
                    Ordering::Less => out.push(ia.next().unwrap().clone()),
                    Ordering::Greater => out.push(ib.next().unwrap()),
                    Ordering::Equal => {
                        let x = ia.next().unwrap();
                        let y = ib.next().unwrap();
                        let s = &x.coeff + &y.coeff;
                        if !s.is_zero() {
                            out.push(Term {
                                comp: x.comp,
                                mono: x.mono.clone(),
                                coeff: s,
                            });
                        }
                    }
                },
                (Some(_), None) => out.push(ia.next().unwrap().clone()),
                (None, Some(_)) => out.push(ib.next().unwrap()),
                (None, None) => break,
            }
        }
        Vector { terms: out }
    }

    fn monic(v: &mut Vector) {
        if let Some(lc) = v.terms.last().map(|t| t.coeff.clone()) {
            if !lc.is_one() {
                let inv = lc.recip();
                for t in &mut v.terms {
                    t.coeff = &t.coeff * &inv;
                }
            }
        }
    }

    fn find_reducer<'g>(&self, t: &Term, basis: &'g [Vector], skip: Option<usize>) -> Option<&'g Vector> {
        basis.iter().enumerate().find_map(|(i, g)| {
            if Some(i) == skip {
                return None;
            }
            let lt = g.terms.last()?;
            (lt.comp == t.comp && lt.mono.divides(&t.mono)).then_some(g)
        })
    }

    /// Full reduction: no term of the result is divisible by a leading term.
    pub fn reduce(&self, v: &Vector, basis: &[Vector], skip: Option<usize>) -> Vector {
        let mut rest = v.clone();
        let mut done: Vec<Term> = Vec::new();
        while let Some(t) = rest.terms.last().cloned() {
            match self.find_reducer(&t, basis, skip) {
                Some(g) => {
                    let lt = g.terms.last().unwrap();
                    let m = lt.mono.quotient_of(&t.mono).unwrap();
                    let c = -(&t.coeff / &lt.coeff);
                    rest = self.add_scaled(&rest, g, &m, &c);
                }
                None => {
                    done.push(rest.terms.pop().unwrap());
                }
            }
        }
        done.reverse();
        Vector { terms: done }
    }

    pub fn to_components(&self, v: &Vector, m: usize, n: usize) -> Vec<Polynomial> {
        let mut out = vec![Polynomial::zero(n); m];
        for t in &v.terms {
            out[t.comp].add_term(t.mono.clone(), t.coeff.clone());
        }
        out
    }
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Term,
}

/// Reduced Groebner basis of the submodule generated by `gens`.
///
/// Pairs are taken smallest lcm first with ties broken by index. The
/// coprime criterion is used only for ideals; the chain criterion only
/// fires when both auxiliary pairs were actually treated.
pub(crate) fn buchberger(
    ctx: &Ctx<'_>,
    gens: &[Vector],
    deadline: Option<Instant>,
) -> Result<Vec<Vector>, Timeout> {
    let single_component = gens.iter().flat_map(|g| &g.terms).all(|t| t.comp == 0);
    let mut basis: Vec<Vector> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();
    let mut treated: HashSet<(usize, usize)> = HashSet::new();

    let push = |basis: &mut Vec<Vector>, pairs: &mut Vec<Pair>, mut v: Vector| {
        Ctx::monic(&mut v);
        let lt = v.terms.last().unwrap().clone();
        let j = basis.len();
        for (i, g) in basis.iter().enumerate() {
            let gl = g.terms.last().unwrap();
            if gl.comp == lt.comp {
                pairs.push(Pair {
                    i,
                    j,
                    lcm: Term {
                        comp: lt.comp,
                        mono: gl.mono.lcm(&lt.mono),
                        coeff: Coeff::one(),
                    },
                });
            }
        }
        basis.push(v);
    };

    for g in gens {
        if !g.terms.is_empty() {
            push(&mut basis, &mut pairs, g.clone());
        }
    }

    while !pairs.is_empty() {
        if deadline.is_some_and(|d| Instant::now() > d) {
            return Err(Timeout);
        }
        let best = (0..pairs.len())
            .min_by(|&a, &b| {
                ctx.cmp(&pairs[a].lcm, &pairs[b].lcm)
                    .then_with(|| (pairs[a].i, pairs[a].j).cmp(&(pairs[b].i, pairs[b].j)))
            })
            .unwrap();
        let Pair { i, j, lcm } = pairs.swap_remove(best);
        let li = basis[i].terms.last().unwrap().clone();
        let lj = basis[j].terms.last().unwrap().clone();

        if single_component && li.mono.is_coprime(&lj.mono) {
            treated.insert((i, j));
            continue;
        }
        let chain = (0..basis.len()).any(|k| {
            if k == i || k == j {
                return false;
            }
            let lk = basis[k].terms.last().unwrap();
            lk.comp == lcm.comp
                && lk.mono.divides(&lcm.mono)
                && treated.contains(&(i.min(k), i.max(k)))
                && treated.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }

        let mi = li.mono.quotient_of(&lcm.mono).unwrap();
        let mj = lj.mono.quotient_of(&lcm.mono).unwrap();
        let left = ctx.add_scaled(&Vector::default(), &basis[i], &mi, &li.coeff.recip());
        let s = ctx.add_scaled(&left, &basis[j], &mj, &-lj.coeff.recip());
        let r = ctx.reduce(&s, &basis, None);
        treated.insert((i, j));
        if !r.terms.is_empty() {
            push(&mut basis, &mut pairs, r);
        }
    }
    Ok(interreduce(ctx, basis))
}

fn interreduce(ctx: &Ctx<'_>, basis: Vec<Vector>) -> Vec<Vector> {
    let mut keep: Vec<Vector> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let lt = g.terms.last().unwrap();
        let redundant = basis.iter().enumerate().any(|(k, h)| {
            let lh = h.terms.last().unwrap();
            k != i
                && lh.comp == lt.comp
                && lh.mono.divides(&lt.mono)
                && (lh.mono != lt.mono || k < i)
        });
        if !redundant {
            keep.push(g.clone());
        }
    }
    let mut out = Vec::with_capacity(keep.len());
    for i in 0..keep.len() {
        let mut r = ctx.reduce(&keep[i], &keep, Some(i));
        Ctx::monic(&mut r);
        out.push(r);
    }
    out.sort_by(|a, b| ctx.cmp(a.terms.last().unwrap(), b.terms.last().unwrap()));
    out
}
