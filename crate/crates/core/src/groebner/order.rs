use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::poly::{degrevlex, lex, Monomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderKind {
    DegRevLex,
    Lex,
    /// Symbol variables first (degrevlex within the block), then base
    /// variables (degrevlex).
    Block,
}

/// A monomial order on the `2n` exponent positions, optionally after a
/// permutation of the variables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialOrder {
    kind: OrderKind,
    /// `perm[i]` is the position read as the `i`-th variable.
    perm: Option<Vec<usize>>,
}

impl MonomialOrder {
    pub fn new(kind: OrderKind) -> Self {
        MonomialOrder { kind, perm: None }
    }

    pub fn degrevlex() -> Self {
        Self::new(OrderKind::DegRevLex)
    }

    pub fn lex() -> Self {
        Self::new(OrderKind::Lex)
    }

    pub fn block() -> Self {
        Self::new(OrderKind::Block)
    }

    /// Fails unless `perm` is a permutation of `0..perm.len()`.
    pub fn with_permutation(mut self, perm: Vec<usize>) -> Result<Self, String> {
        let mut seen = vec![false; perm.len()];
        for &p in &perm {
            if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
                return Err(format!("{perm:?} is not a permutation"));
            }
        }
        self.perm = Some(perm);
        Ok(self)
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match &self.perm {
            None => self.cmp_raw(a.exponents(), b.exponents()),
            Some(p) => {
                assert_eq!(p.len(), a.len(), "permutation length does not match the ring");
                let pa: Vec<u16> = p.iter().map(|&i| a.get(i)).collect();
                let pb: Vec<u16> = p.iter().map(|&i| b.get(i)).collect();
                self.cmp_raw(&pa, &pb)
            }
        }
    }

    fn cmp_raw(&self, a: &[u16], b: &[u16]) -> Ordering {
        match self.kind {
            OrderKind::DegRevLex => degrevlex(a, b),
            OrderKind::Lex => lex(a, b),
            OrderKind::Block => {
                let h = a.len() / 2;
                degrevlex(&a[h..], &b[h..]).then_with(|| degrevlex(&a[..h], &b[..h]))
            }
        }
    }
}

impl Default for MonomialOrder {
    fn default() -> Self {
        Self::degrevlex()
    }
}

impl FromStr for MonomialOrder {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "degrevlex" => Ok(Self::degrevlex()),
            "lex" => Ok(Self::lex()),
            "block" => Ok(Self::block()),
            other => Err(format!("unknown order {other:?}; expected degrevlex, lex or block")),
        }
    }
}

impl fmt::Display for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            OrderKind::DegRevLex => "degrevlex",
            OrderKind::Lex => "lex",
            OrderKind::Block => "block",
        };
        write!(f, "{name}")
    }
}
