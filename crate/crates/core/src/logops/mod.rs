//! Symbol chains, decomposition along a frame, and the PBW normal form of
//! logarithmic operators.

mod pbw;
mod shift;

use thiserror::Error;

use crate::logder::SaitoFrame;
use crate::poly::{rat, Polynomial};
use crate::weyl::{DiffOp, WeylError};

pub use pbw::{LogWordPoly, PbwDocument, PbwForm, PbwTerm, Rewriter};
pub use shift::{
    membership_report, meromorphic_shift, meromorphic_shift_right, v0_membership_witness,
    MembershipReport, Shift, ShiftError, V0Report,
};

/// `{F, G} = sum_i F_xi_i G_x_i - F_x_i G_xi_i`.
pub fn poisson_bracket(f: &Polynomial, g: &Polynomial) -> Polynomial {
    let n = f.n();
    let mut out = Polynomial::zero(n);
    for i in 0..n {
        let a = f.dxi(i);
        if !a.is_zero() {
            let b = g.dx(i);
            if !b.is_zero() {
                out.add_assign_ref(&(&a * &b));
            }
        }
        let c = f.dx(i);
        if !c.is_zero() {
            let d = g.dxi(i);
            if !d.is_zero() {
                out.sub_assign_ref(&(&c * &d));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbolError {
    #[error("the symbol is not homogeneous in xi")]
    NotHomogeneous,
    #[error("chain breaks at k = {k}: {{R_k, f}} leaves remainder {remainder:?}")]
    ChainFailure { k: usize, remainder: Polynomial },
    #[error("chain and frame have different divisors")]
    DivisorMismatch,
    #[error("inexact division at k = {k}, j = {j} (remainder {remainder:?})")]
    InexactDivision { k: usize, j: usize, remainder: Polynomial },
}

/// `R_0, ..., R_d` with `{R_k, f} = f R_{k+1}`; `R_k` has symbol degree
/// `d - k` or vanishes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolChain {
    f: Polynomial,
    chain: Vec<Polynomial>,
}

impl SymbolChain {
    pub fn divisor(&self) -> &Polynomial {
        &self.f
    }

    pub fn chain(&self) -> &[Polynomial] {
        &self.chain
    }

    pub fn degree(&self) -> usize {
        self.chain.len() - 1
    }

    /// Re-checks every link of the chain.
    pub fn verify(&self) -> bool {
        let d = self.degree();
        self.chain.iter().enumerate().all(|(k, r)| r.is_xi_homogeneous((d - k) as u32))
            && self
                .chain
                .windows(2)
                .all(|w| poisson_bracket(&w[0], &self.f) == &self.f * &w[1])
    }

    /// Checks an arbitrary list as a chain over `f`.
    pub fn check(f: &Polynomial, chain: Vec<Polynomial>) -> Option<SymbolChain> {
        if chain.is_empty() {
            return None;
        }
        let c = SymbolChain { f: f.clone(), chain };
        c.verify().then_some(c)
    }
}

/// Builds the chain greedily by exact division.
pub fn symbol_chain(r0: &Polynomial, f: &Polynomial) -> Result<SymbolChain, SymbolError> {
    let d = match r0.xi_degree() {
        None => 0,
        Some(d) => {
            if !r0.is_xi_homogeneous(d) {
                return Err(SymbolError::NotHomogeneous);
            }
            d as usize
        }
    };
    let mut chain = vec![r0.clone()];
    for k in 0..d {
        let b = poisson_bracket(&chain[k], f);
        let next = b
            .exact_divide(f)
            .map_err(|e| SymbolError::ChainFailure { k, remainder: e.remainder })?;
        chain.push(next);
    }
    Ok(SymbolChain { f: f.clone(), chain })
}

/// `H[k][j]` for `k < d`: `G^k = (dR_k/dxi) B^t / det` and `H^k = G^k / d`.
///
/// Row `j`, read down `k`, is a symbol chain of degree `d - 1`, and
/// `R_0 = sum_j H^0_j sigma(delta_j)`. For `k >= 1` the same uniform scaling
/// gives `(d - k) R_k = d sum_j H^k_j sigma(delta_j)`.
pub fn decompose_symbol(
    chain: &SymbolChain,
    frame: &SaitoFrame,
) -> Result<Vec<Vec<Polynomial>>, SymbolError> {
    if chain.f != *frame.divisor() {
        return Err(SymbolError::DivisorMismatch);
    }
    let n = frame.n();
    let d = chain.degree();
    let b = frame.adjugate_b();
    let inv_d = rat(1, d.max(1) as i64);
    let mut out = Vec::with_capacity(d);
    for (k, r) in chain.chain.iter().enumerate().take(d) {
        let grad: Vec<Polynomial> = (0..n).map(|i| r.dxi(i)).collect();
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let mut num = Polynomial::zero(n);
            for i in 0..n {
                if !grad[i].is_zero() && !b[j][i].is_zero() {
                    num.add_assign_ref(&(&grad[i] * &b[j][i]));
                }
            }
            let g = num
                .exact_divide(frame.det())
                .map_err(|e| SymbolError::InexactDivision { k, j, remainder: e.remainder })?;
            row.push(g.scale(&inv_d));
        }
        out.push(row);
    }
    Ok(out)
}

/// A word polynomial `Q = sum_j Q_j delta_j` with `sigma(Q) = R_0`.
pub fn symbol_to_logop(r0: &Polynomial, frame: &SaitoFrame) -> Result<LogWordPoly, SymbolError> {
    let n = frame.n();
    let chain = symbol_chain(r0, frame.divisor())?;
    if chain.degree() == 0 {
        return Ok(LogWordPoly::function(r0.clone()));
    }
    let h = decompose_symbol(&chain, frame)?;
    let mut out = LogWordPoly::zero(n);
    for (j, hj) in h[0].iter().enumerate() {
        if hj.is_zero() {
            continue;
        }
        let qj = symbol_to_logop(hj, frame)?;
        for (word, c) in qj.terms() {
            let mut w = word.clone();
            w.push(j);
            out.add_term(w, c.clone());
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    /// `[P_k, f]` is not left-divisible by `f`.
    Commutator,
    /// The principal symbol admits no chain.
    SymbolChain,
    /// Symbol decomposition failed; indicates a broken frame.
    Decomposition,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("not logarithmic: {stage:?} stage fails at step {step} (witness {witness:?})")]
pub struct NotLogarithmic {
    pub stage: Stage,
    pub step: usize,
    pub witness: Polynomial,
}

/// `P_0 = P`, `[P_k, f] = f P_{k+1}` for `k < ord P`.
pub fn operator_chain(p: &DiffOp, f: &Polynomial) -> Result<Vec<DiffOp>, NotLogarithmic> {
    let d = p.order().unwrap_or(0) as usize;
    let fop = DiffOp::function(f.clone());
    let mut chain = vec![p.clone()];
    for k in 0..d {
        let c = chain[k].commutator(&fop);
        match c.left_divide_by_function(f) {
            Ok(next) => chain.push(next),
            Err(WeylError::NotDivisible { remainder, .. }) => {
                return Err(NotLogarithmic {
                    stage: Stage::Commutator,
                    step: k,
                    witness: remainder,
                })
            }
            Err(WeylError::ZeroOperator) => unreachable!(),
        }
    }
    Ok(chain)
}

impl From<SymbolError> for NotLogarithmic {
    fn from(e: SymbolError) -> Self {
        match e {
            SymbolError::ChainFailure { k, remainder } => NotLogarithmic {
                stage: Stage::SymbolChain,
                step: k,
                witness: remainder,
            },
            SymbolError::InexactDivision { k, remainder, .. } => NotLogarithmic {
                stage: Stage::Decomposition,
                step: k,
                witness: remainder,
            },
            SymbolError::NotHomogeneous | SymbolError::DivisorMismatch => unreachable!(),
        }
    }
}
