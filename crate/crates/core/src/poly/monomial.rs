use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

/// Dense exponent vector. `Ord` is degree-reverse-lexicographic, which is the
/// canonical storage order for every polynomial in the crate.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(SmallVec<[u16; 8]>);

impl Monomial {
    pub fn one(len: usize) -> Self {
        Monomial(SmallVec::from_elem(0, len))
    }

    pub fn var(len: usize, i: usize) -> Self {
        let mut m = Self::one(len);
        m.0[i] = 1;
        m
    }

    pub fn from_exponents(exps: &[u16]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn get(&self, i: usize) -> u16 {
        self.0[i]
    }

    pub fn set(&mut self, i: usize, e: u16) {
        self.0[i] = e;
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    /// Degree counted over the index range `range`.
    pub fn partial_degree(&self, range: std::ops::Range<usize>) -> u32 {
        self.0[range].iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.len(), other.len());
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        Some(Monomial(other.0.iter().zip(self.0.iter()).map(|(a, b)| a - b).collect()))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(&a, &b)| a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(&a, &b)| a == 0 || b == 0)
    }

    /// Support is contained in the index set `allowed` (bitmask over positions).
    pub fn supported_in(&self, allowed: u64) -> bool {
        self.0
            .iter()
            .enumerate()
            .all(|(i, &e)| e == 0 || allowed & (1u64 << i) != 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = u16> + '_ {
        self.0.iter().copied()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        degrevlex(self.exponents(), other.exponents())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

impl FromIterator<u16> for Monomial {
    fn from_iter<I: IntoIterator<Item = u16>>(iter: I) -> Self {
        Monomial(iter.into_iter().collect())
    }
}

pub(crate) fn degrevlex(a: &[u16], b: &[u16]) -> Ordering {
    let da: u32 = a.iter().map(|&e| e as u32).sum();
    let db: u32 = b.iter().map(|&e| e as u32).sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        o => return o,
    }
    for (x, y) in a.iter().zip(b.iter()).rev() {
        if x != y {
            // smaller exponent in the last differing variable is the larger monomial
            return y.cmp(x);
        }
    }
    Ordering::Equal
}

pub(crate) fn lex(a: &[u16], b: &[u16]) -> Ordering {
    a.cmp(b)
}
