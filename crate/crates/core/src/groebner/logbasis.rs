use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use super::{module_syzygies, polynomial_gcd, Timeout};
use crate::logder::{determinant, saito_frame, Derivation, SaitoFrame};
use crate::poly::Polynomial;

#[derive(Clone, Debug)]
pub struct LogBasisOptions {
    /// Only n-subsets of the first `bound` candidates are tried.
    pub bound: usize,
    pub deadline: Option<Instant>,
}

impl Default for LogBasisOptions {
    fn default() -> Self {
        LogBasisOptions {
            bound: 12,
            deadline: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NotFreeDiagnosis {
    /// Distinct derivation candidates obtained from the syzygies.
    pub candidates: usize,
    /// Subsets whose determinant was examined.
    pub subsets_tried: usize,
    /// Lowest-degree nonzero determinant met, if any.
    #[serde(skip)]
    pub best_det: Option<Polynomial>,
    /// False when candidates beyond the bound were never looked at, in which
    /// case nothing is claimed about freeness.
    pub search_complete: bool,
    /// Set for non-reduced `f`, whose determinant can only reach the reduced
    /// equation.
    #[serde(skip)]
    pub non_reduced_factor: Option<Polynomial>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogBasisError {
    #[error(transparent)]
    Timeout(#[from] Timeout),
    #[error("no n-subset of the logarithmic derivation generators passes Saito's criterion")]
    NotFree(NotFreeDiagnosis),
    #[error("the zero polynomial defines no divisor")]
    ZeroDivisor,
}

#[derive(Clone, Debug)]
pub struct LogBasis {
    pub frame: SaitoFrame,
    /// Generators of Der(log f) found before selection, degree-sorted.
    pub candidates: Vec<Derivation>,
    /// `gcd(f, df/dx_1, ..., df/dx_n)` when it is not constant.
    pub non_reduced_factor: Option<Polynomial>,
}

pub fn log_derivations(f: &Polynomial) -> Result<LogBasis, LogBasisError> {
    log_derivations_with(f, &LogBasisOptions::default())
}

/// Der(log f) from the syzygies of `(f_x1, ..., f_xn, f)`, then a search for
/// `n` generators with determinant `c f`, certified by `saito_frame`.
pub fn log_derivations_with(f: &Polynomial, opts: &LogBasisOptions) -> Result<LogBasis, LogBasisError> {
    if f.is_zero() {
        return Err(LogBasisError::ZeroDivisor);
    }
    let n = f.n();
    let mut gens: Vec<Polynomial> = (0..n).map(|i| f.dx(i)).collect();
    gens.push(f.clone());
    let non_reduced_factor = non_reduced_part(f, &gens[..n]);
    let syz = module_syzygies(&gens, opts.deadline)?;
    let candidates = candidates_from_syzygies(syz, n);

    let pool = candidates.len().min(opts.bound);
    let mut tried = 0;
    let mut best: Option<Polynomial> = None;
    for subset in Combinations::new(pool, n) {
        if opts.deadline.is_some_and(|d| Instant::now() > d) {
            return Err(Timeout.into());
        }
        tried += 1;
        let rows: Vec<Vec<Polynomial>> = subset.iter().map(|&i| candidates[i].coeffs().to_vec()).collect();
        let det = determinant(&rows);
        if det.is_zero() {
            continue;
        }
        let unit_multiple = det
            .exact_divide(f)
            .ok()
            .and_then(|u| u.constant_value())
            .is_some();
        if unit_multiple {
            let basis: Vec<Derivation> = subset.iter().map(|&i| candidates[i].clone()).collect();
            if let Ok(frame) = saito_frame(f, &basis) {
                return Ok(LogBasis {
                    frame,
                    candidates,
                    non_reduced_factor,
                });
            }
        }
        if best.as_ref().is_none_or(|b| det.total_degree() < b.total_degree()) {
            best = Some(det);
        }
    }
    Err(LogBasisError::NotFree(NotFreeDiagnosis {
        candidates: candidates.len(),
        subsets_tried: tried,
        best_det: best,
        search_complete: candidates.len() <= opts.bound,
        non_reduced_factor,
    }))
}

fn non_reduced_part(f: &Polynomial, partials: &[Polynomial]) -> Option<Polynomial> {
    let mut g = f.clone();
    for p in partials {
        if g.is_constant() {
            break;
        }
        g = polynomial_gcd(&g, p);
    }
    (!g.is_constant()).then_some(g)
}

/// Projects syzygies onto their derivation part, drops zeros and scalar
/// duplicates, and sorts by coefficient degree (stable).
fn candidates_from_syzygies(syz: Vec<Vec<Polynomial>>, n: usize) -> Vec<Derivation> {
    let mut out: Vec<Derivation> = Vec::new();
    let mut seen: Vec<Vec<Polynomial>> = Vec::new();
    for s in syz {
        let coeffs: Vec<Polynomial> = s.into_iter().take(n).collect();
        let Some(lead) = coeffs.iter().find(|c| !c.is_zero()) else {
            continue;
        };
        let lc = lead.leading().unwrap().1.recip();
        let normal: Vec<Polynomial> = coeffs.iter().map(|c| c.scale(&lc)).collect();
        if seen.contains(&normal) {
            continue;
        }
        seen.push(normal.clone());
        out.push(Derivation::new(normal));
    }
    out.sort_by_key(|d| {
        let deg = d.coeffs().iter().filter_map(Polynomial::total_degree).max().unwrap_or(0);
        let size: usize = d.coeffs().iter().map(Polynomial::len).sum();
        let pivot = d.coeffs().iter().position(|c| !c.is_zero());
        (deg, size, pivot)
    });
    out
}

/// k-subsets of `0..m` in lexicographic order.
struct Combinations {
    m: usize,
    idx: Vec<usize>,
    first: bool,
}

impl Combinations {
    fn new(m: usize, k: usize) -> Self {
        Combinations {
            m,
            idx: (0..k).collect(),
            first: true,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        let k = self.idx.len();
        if k > self.m {
            return None;
        }
        if self.first {
            self.first = false;
            return Some(self.idx.clone());
        }
        let mut i = k;
        while i > 0 {
            i -= 1;
            if self.idx[i] < self.m - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                return Some(self.idx.clone());
            }
        }
        None
    }
}
