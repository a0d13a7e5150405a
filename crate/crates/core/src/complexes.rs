//! Spencer, graded Spencer and Koszul complexes of a frame, as explicit
//! matrices over D or over O[xi].
//!
//! Modules are free with basis `delta_J` for increasing `J`. Differentials
//! act on the left factor by right multiplication, so
//! `eps(P (x) delta_J) = sum_J' P E[J][J'] (x) delta_J'` and the composite of
//! two steps has entries `sum_J' E[J][J'] E'[J'][J'']`.

use std::fmt;

use serde::Serialize;

use crate::logder::SaitoFrame;
use crate::logforms::{subset_key, subsets};
use crate::poly::{Polynomial, VarTable};
use crate::weyl::DiffOp;

/// Entry ring of a complex: D (noncommutative) or a commutative
/// polynomial ring.
pub trait Entry: Clone + PartialEq + fmt::Debug {
    fn zero_in(n: usize) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    /// `self * other`, with `self` applied on the left.
    fn times(&self, other: &Self) -> Self;
    fn render(&self, vars: &VarTable) -> String;
}

impl Entry for DiffOp {
    fn zero_in(n: usize) -> Self {
        DiffOp::zero(n)
    }
    fn is_zero(&self) -> bool {
        DiffOp::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self.compose(other)
    }
    fn render(&self, vars: &VarTable) -> String {
        self.display(vars).to_string()
    }
}

impl Entry for Polynomial {
    fn zero_in(n: usize) -> Self {
        Polynomial::zero(n)
    }
    fn is_zero(&self) -> bool {
        Polynomial::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn render(&self, vars: &VarTable) -> String {
        self.display(vars).to_string()
    }
}

/// `0 -> C_{-m} -> ... -> C_{-1} -> C_0`, each `C_{-p}` free on the
/// increasing `p`-subsets of `0..m`.
#[derive(Clone, Debug, PartialEq)]
pub struct FreeComplex<E> {
    n: usize,
    m: usize,
    /// `maps[p - 1]` is `C_{-p} -> C_{-p+1}`, rows indexed by `p`-subsets.
    maps: Vec<Vec<Vec<E>>>,
}

impl<E: Entry> FreeComplex<E> {
    /// `entry(J, K)` is the matrix entry from `delta_J` to `delta_K`.
    fn build(
        n: usize,
        m: usize,
        mut entry: impl FnMut(&[usize], &[usize]) -> E,
    ) -> Self {
        let mut maps = Vec::with_capacity(m);
        for p in 1..=m {
            let rows = subsets(m, p);
            let cols = subsets(m, p - 1);
            maps.push(
                rows.iter()
                    .map(|j| cols.iter().map(|k| entry(j, k)).collect())
                    .collect(),
            );
        }
        FreeComplex { n, m, maps }
    }

    pub fn from_maps(n: usize, m: usize, maps: Vec<Vec<Vec<E>>>) -> Self {
        assert_eq!(maps.len(), m);
        for (idx, mat) in maps.iter().enumerate() {
            let p = idx + 1;
            assert_eq!(mat.len(), subsets(m, p).len());
            assert!(mat.iter().all(|r| r.len() == subsets(m, p - 1).len()));
        }
        FreeComplex { n, m, maps }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of generators, so the complex lives in degrees `-m..=0`.
    pub fn length(&self) -> usize {
        self.m
    }

    pub fn rank(&self, p: usize) -> usize {
        subsets(self.m, p).len()
    }

    /// Matrix of `C_{-p} -> C_{-p+1}`, `1 <= p <= m`.
    pub fn map(&self, p: usize) -> &[Vec<E>] {
        &self.maps[p - 1]
    }

    pub fn map_mut(&mut self, p: usize) -> &mut Vec<Vec<E>> {
        &mut self.maps[p - 1]
    }

    /// Entry-by-entry product of consecutive maps; the first nonzero entry
    /// is returned as a witness.
    pub fn check_zero_composition(&self) -> Result<(), CompositionFailure<E>> {
        for p in 2..=self.m {
            let a = self.map(p);
            let b = self.map(p - 1);
            for (r, row) in a.iter().enumerate() {
                for c in 0..b[0].len() {
                    let mut acc = E::zero_in(self.n);
                    for (k, e) in row.iter().enumerate() {
                        if !e.is_zero() && !b[k][c].is_zero() {
                            acc = acc.plus(&e.times(&b[k][c]));
                        }
                    }
                    if !acc.is_zero() {
                        return Err(CompositionFailure {
                            degree: p,
                            row: subsets(self.m, p)[r].clone(),
                            col: subsets(self.m, p - 2)[c].clone(),
                            entry: acc,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn map_entries<F: Entry>(&self, f: impl Fn(&E) -> F) -> FreeComplex<F> {
        FreeComplex {
            n: self.n,
            m: self.m,
            maps: self
                .maps
                .iter()
                .map(|mat| mat.iter().map(|r| r.iter().map(&f).collect()).collect())
                .collect(),
        }
    }

    pub fn document(&self, vars: &VarTable) -> ComplexDocument {
        ComplexDocument {
            generators: self.m,
            ranks: (0..=self.m).rev().map(|p| self.rank(p)).collect(),
            differentials: (1..=self.m)
                .rev()
                .map(|p| DifferentialDocument {
                    from_degree: -(p as i64),
                    rows: subsets(self.m, p).iter().map(|j| subset_key(j)).collect(),
                    cols: subsets(self.m, p - 1).iter().map(|j| subset_key(j)).collect(),
                    entries: self
                        .map(p)
                        .iter()
                        .map(|r| r.iter().map(|e| e.render(vars)).collect())
                        .collect(),
                })
                .collect(),
        }
    }
}

/// A nonzero entry of `eps_{-p+1} . eps_{-p}`.
#[derive(Clone, Debug, PartialEq)]
pub struct CompositionFailure<E> {
    /// The source degree is `-degree`.
    pub degree: usize,
    pub row: Vec<usize>,
    pub col: Vec<usize>,
    pub entry: E,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComplexDocument {
    pub generators: usize,
    /// Ranks of `C_{-m}, ..., C_0`.
    pub ranks: Vec<usize>,
    pub differentials: Vec<DifferentialDocument>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DifferentialDocument {
    pub from_degree: i64,
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub entries: Vec<Vec<String>>,
}

/// Position of `i` in `j`, if present.
fn position(j: &[usize], i: usize) -> Option<usize> {
    j.iter().position(|&x| x == i)
}

/// ```text
/// eps(P (x) delta_J) = sum_i (-1)^(i-1) P delta_{j_i} (x) delta_{J - j_i}
///     + sum_{i<l} (-1)^(i+l) P (x) [delta_{j_i}, delta_{j_l}] ^ delta_{J - j_i - j_l}
/// ```
///
/// with brackets expanded through the structure constants.
pub fn spencer_complex(frame: &SaitoFrame) -> FreeComplex<DiffOp> {
    let n = frame.n();
    let ops = frame.basis_ops();
    FreeComplex::build(n, n, |j, k| {
        let mut e = DiffOp::zero(n);
        if k.len() + 1 != j.len() {
            return e;
        }
        // first sum: k = J minus one element
        if let Some(i) = j.iter().position(|x| !k.contains(x)) {
            if k.iter().all(|x| j.contains(x)) {
                let t = ops[j[i]].clone();
                e = if i % 2 == 0 { &e + &t } else { &e - &t };
            }
        }
        // second sum: k = {m} + (J minus two elements)
        for a in 0..j.len() {
            for b in (a + 1)..j.len() {
                let rest: Vec<usize> = j.iter().enumerate().filter(|&(c, _)| c != a && c != b).map(|(_, &x)| x).collect();
                for &m in k {
                    if rest.contains(&m) {
                        continue;
                    }
                    let mut with_m = rest.clone();
                    with_m.push(m);
                    with_m.sort_unstable();
                    if with_m != k {
                        continue;
                    }
                    let coeff = frame.structure_constant(j[a], j[b], m);
                    if coeff.is_zero() {
                        continue;
                    }
                    // delta_m ^ rest -> sorted order
                    let sort_odd = position(&with_m, m).unwrap() % 2 == 1;
                    // (-1)^(i+l) with 1-based i = a+1, l = b+1
                    let odd = ((a + b) % 2 == 1) ^ sort_odd;
                    let t = DiffOp::function(coeff.clone());
                    e = if odd { &e - &t } else { &e + &t };
                }
            }
        }
        e
    })
}

/// Koszul complex of `(g_1, ..., g_m)`: `e_J -> sum_i (-1)^(i-1) g_{j_i} e_{J - j_i}`.
pub fn koszul_complex(elements: &[Polynomial]) -> FreeComplex<Polynomial> {
    assert!(!elements.is_empty());
    let n = elements[0].n();
    FreeComplex::build(n, elements.len(), |j, k| {
        if k.len() + 1 != j.len() || !k.iter().all(|x| j.contains(x)) {
            return Polynomial::zero(n);
        }
        let i = j.iter().position(|x| !k.contains(x)).unwrap();
        let g = elements[j[i]].clone();
        if i % 2 == 0 {
            g
        } else {
            -&g
        }
    })
}

/// Koszul complex of the frame's principal symbols over `O[xi]`.
pub fn graded_spencer(frame: &SaitoFrame) -> FreeComplex<Polynomial> {
    koszul_complex(&frame.symbols())
}

/// Principal symbols of order-one entries; order-zero entries drop out.
pub fn symbol_of_spencer(c: &FreeComplex<DiffOp>) -> FreeComplex<Polynomial> {
    c.map_entries(|e| e.symbol_of_degree(1))
}

/// `eps_0(P) = P(1)` composed with `eps_{-1}` is `P -> P(delta_i(1))`,
/// which vanishes for all `P` exactly when every `delta_i` kills constants.
/// Returns the first `i` whose entry does not.
pub fn augmented_spencer_check(c: &FreeComplex<DiffOp>) -> Result<(), (usize, Polynomial)> {
    if c.length() == 0 {
        return Ok(());
    }
    let one = Polynomial::one(c.n());
    for (i, row) in c.map(1).iter().enumerate() {
        let v = row[0].apply(&one);
        if !v.is_zero() {
            return Err((i, v));
        }
    }
    Ok(())
}
