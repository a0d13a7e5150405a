use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{operator_chain, symbol_to_logop, NotLogarithmic, Stage};
use crate::logder::{FrameDocError, FrameDocument, SaitoFrame};
use crate::parse::parse_polynomial;
use crate::poly::{Monomial, Polynomial, VarTable};
use crate::weyl::DiffOp;

/// `sum_alpha beta_alpha delta_1^a1 ... delta_n^an`, coefficients on the left.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PbwForm {
    n: usize,
    coeffs: BTreeMap<Monomial, Polynomial>,
}

impl PbwForm {
    pub fn zero(n: usize) -> Self {
        PbwForm {
            n,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn function(g: Polynomial) -> Self {
        let mut w = Self::zero(g.n());
        w.add_term(Monomial::one(g.n()), g);
        w
    }

    pub fn monomial(alpha: Monomial) -> Self {
        let n = alpha.len();
        let mut w = Self::zero(n);
        w.add_term(alpha, Polynomial::one(n));
        w
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Polynomial)>>(n: usize, it: I) -> Self {
        let mut w = Self::zero(n);
        for (a, c) in it {
            w.add_term(a, c);
        }
        w
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Polynomial)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, alpha: &Monomial) -> Polynomial {
        self.coeffs
            .get(alpha)
            .cloned()
            .unwrap_or_else(|| Polynomial::zero(self.n))
    }

    pub fn add_term(&mut self, alpha: Monomial, c: Polynomial) {
        debug_assert!(c.is_xi_free());
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.coeffs.entry(alpha) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                o.get_mut().add_assign_ref(&c);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &PbwForm) {
        for (a, c) in &other.coeffs {
            self.add_term(a.clone(), c.clone());
        }
    }

    /// `g * self`.
    pub fn left_mul(&self, g: &Polynomial) -> PbwForm {
        PbwForm::from_terms(self.n, self.coeffs.iter().map(|(a, c)| (a.clone(), g * c)))
    }

    /// Largest `|alpha|` present.
    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().map(Monomial::degree).max()
    }

    /// `sum_{|alpha| = top} beta_alpha sigma_1^a1 ... sigma_n^an`.
    pub fn graded_symbol(&self, symbols: &[Polynomial]) -> Polynomial {
        let mut out = Polynomial::zero(self.n);
        let Some(top) = self.degree() else {
            return out;
        };
        for (alpha, c) in self.coeffs.iter().filter(|(a, _)| a.degree() == top) {
            let mut t = c.clone();
            for (i, e) in alpha.iter().enumerate() {
                if e > 0 {
                    t = &t * &symbols[i].pow(e as u32);
                }
            }
            out.add_assign_ref(&t);
        }
        out
    }

    pub fn display<'a>(&'a self, vars: &'a VarTable) -> impl fmt::Display + 'a {
        PbwDisplay { w: self, vars }
    }

    /// Each PBW monomial rendered as `delta_1^2*delta_3`, with its coefficient.
    pub fn table(&self, vars: &VarTable) -> Vec<(String, String)> {
        self.coeffs
            .iter()
            .rev()
            .map(|(a, c)| (monomial_name(a), c.display(vars).to_string()))
            .collect()
    }
}

fn monomial_name(alpha: &Monomial) -> String {
    let parts: Vec<String> = alpha
        .iter()
        .enumerate()
        .filter(|(_, e)| *e > 0)
        .map(|(i, e)| {
            if e == 1 {
                format!("delta_{}", i + 1)
            } else {
                format!("delta_{}^{}", i + 1, e)
            }
        })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

struct PbwDisplay<'a> {
    w: &'a PbwForm,
    vars: &'a VarTable,
}

impl fmt::Display for PbwDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.w.is_zero() {
            return write!(f, "0");
        }
        for (k, (alpha, c)) in self.w.coeffs.iter().rev().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let name = monomial_name(alpha);
            match (c.len(), alpha.is_one()) {
                (_, true) => write!(f, "({})", c.display(self.vars))?,
                (1, false) if c.is_one() => write!(f, "{name}")?,
                _ => write!(f, "({})*{name}", c.display(self.vars))?,
            }
        }
        Ok(())
    }
}

/// Noncommutative words `beta * delta_w1 ... delta_wm` before PBW sorting.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LogWordPoly {
    n: usize,
    terms: BTreeMap<Vec<usize>, Polynomial>,
}

impl LogWordPoly {
    pub fn zero(n: usize) -> Self {
        LogWordPoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn function(g: Polynomial) -> Self {
        let mut q = Self::zero(g.n());
        q.add_term(Vec::new(), g);
        q
    }

    pub fn add_term(&mut self, word: Vec<usize>, c: Polynomial) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(word) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                o.get_mut().add_assign_ref(&c);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Polynomial)> {
        self.terms.iter()
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// PBW rewriting and expansion over one frame, with memo tables for
/// `delta_j * delta^alpha` and for the operators `delta^alpha`.
pub struct Rewriter<'a> {
    frame: &'a SaitoFrame,
    basis_ops: Vec<DiffOp>,
    left_cache: HashMap<(usize, Monomial), PbwForm>,
    power_cache: HashMap<Monomial, DiffOp>,
}

impl<'a> Rewriter<'a> {
    pub fn new(frame: &'a SaitoFrame) -> Self {
        Rewriter {
            frame,
            basis_ops: frame.basis_ops(),
            left_cache: HashMap::new(),
            power_cache: HashMap::new(),
        }
    }

    pub fn frame(&self) -> &'a SaitoFrame {
        self.frame
    }

    /// `delta_j * delta^alpha` in sorted form.
    pub fn delta_times_monomial(&mut self, j: usize, alpha: &Monomial) -> PbwForm {
        if let Some(hit) = self.left_cache.get(&(j, alpha.clone())) {
            return hit.clone();
        }
        let n = self.frame.n();
        let res = match alpha.iter().position(|e| e > 0) {
            Some(m) if m < j => {
                // delta_j delta_m = delta_m delta_j + sum_k a^k_jm delta_k
                let mut rest = alpha.clone();
                rest.set(m, alpha.get(m) - 1);
                let inner = self.delta_times_monomial(j, &rest);
                let mut res = self.delta_times_form(m, &inner);
                for k in 0..n {
                    let a = self.frame.structure_constant(j, m, k).clone();
                    if !a.is_zero() {
                        let t = self.delta_times_monomial(k, &rest);
                        res.add_assign(&t.left_mul(&a));
                    }
                }
                res
            }
            _ => PbwForm::monomial(alpha.mul(&Monomial::var(n, j))),
        };
        self.left_cache.insert((j, alpha.clone()), res.clone());
        res
    }

    /// `delta_m * w` with `delta_m * beta = delta_m(beta) + beta * delta_m`.
    pub fn delta_times_form(&mut self, m: usize, w: &PbwForm) -> PbwForm {
        let delta = &self.frame.basis()[m];
        let mut out = PbwForm::zero(w.n);
        let derived: Vec<(Monomial, Polynomial)> = w
            .coeffs
            .iter()
            .map(|(a, c)| (a.clone(), delta.apply(c)))
            .collect();
        for (a, dc) in derived {
            out.add_term(a, dc);
        }
        for (a, c) in &w.coeffs {
            let t = self.delta_times_monomial(m, a);
            out.add_assign(&t.left_mul(c));
        }
        out
    }

    /// Sorts every word, right to left.
    pub fn reorder(&mut self, q: &LogWordPoly) -> PbwForm {
        let n = self.frame.n();
        let mut out = PbwForm::zero(n);
        for (word, c) in &q.terms {
            let mut w = PbwForm::monomial(Monomial::one(n));
            for &j in word.iter().rev() {
                w = self.delta_times_form(j, &w);
            }
            out.add_assign(&w.left_mul(c));
        }
        out
    }

    /// The operator `delta_1^a1 ... delta_n^an`.
    pub fn pbw_power(&mut self, alpha: &Monomial) -> DiffOp {
        if let Some(hit) = self.power_cache.get(alpha) {
            return hit.clone();
        }
        let n = self.frame.n();
        let op = match alpha.iter().position(|e| e > 0) {
            None => DiffOp::one(n),
            Some(m) => {
                let mut rest = alpha.clone();
                rest.set(m, alpha.get(m) - 1);
                let tail = self.pbw_power(&rest);
                self.basis_ops[m].compose(&tail)
            }
        };
        self.power_cache.insert(alpha.clone(), op.clone());
        op
    }

    pub fn expand(&mut self, w: &PbwForm) -> DiffOp {
        let mut out = DiffOp::zero(self.frame.n());
        for (alpha, c) in &w.coeffs {
            let op = self.pbw_power(alpha);
            out = &out + &op.left_mul_function(c);
        }
        out
    }

    /// Expands a word polynomial without sorting it.
    pub fn expand_words(&self, q: &LogWordPoly) -> DiffOp {
        let n = self.frame.n();
        let mut out = DiffOp::zero(n);
        for (word, c) in &q.terms {
            let mut op = DiffOp::function(c.clone());
            for &j in word {
                op = op.compose(&self.basis_ops[j]);
            }
            out = &out + &op;
        }
        out
    }

    /// Rewrites `p` as a PBW polynomial in the frame, peeling off one
    /// symbol layer per round.
    pub fn normal_form(&mut self, p: &DiffOp) -> Result<PbwForm, NotLogarithmic> {
        let f = self.frame.divisor();
        let mut rem = p.clone();
        let mut out = PbwForm::zero(self.frame.n());
        while let Some(d) = rem.order() {
            operator_chain(&rem, f)?;
            let r0 = rem.symbol_of_degree(d);
            let q = symbol_to_logop(&r0, self.frame)?;
            let w = self.reorder(&q);
            let e = self.expand(&w);
            let next = &rem - &e;
            if next.order().is_some_and(|o| o >= d) {
                return Err(NotLogarithmic {
                    stage: Stage::Decomposition,
                    step: 0,
                    witness: next.symbol_of_degree(d),
                });
            }
            out.add_assign(&w);
            rem = next;
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PbwTerm {
    pub exponents: Vec<u16>,
    pub coefficient: String,
}

/// JSON form of a PBW polynomial together with its frame.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PbwDocument {
    pub frame: FrameDocument,
    pub terms: Vec<PbwTerm>,
}

impl PbwDocument {
    pub fn new(frame: &SaitoFrame, vars: &VarTable, w: &PbwForm) -> Self {
        PbwDocument {
            frame: FrameDocument::from_frame(frame, vars),
            terms: w
                .coeffs
                .iter()
                .rev()
                .map(|(a, c)| PbwTerm {
                    exponents: a.exponents().to_vec(),
                    coefficient: c.display(vars).to_string(),
                })
                .collect(),
        }
    }

    pub fn load(&self) -> Result<(SaitoFrame, PbwForm), FrameDocError> {
        let frame = self.frame.to_frame()?;
        let vars = &self.frame.vars;
        let n = frame.n();
        let mut w = PbwForm::zero(n);
        for t in &self.terms {
            if t.exponents.len() != n {
                return Err(FrameDocError::Shape("exponent vector length".into()));
            }
            let c = parse_polynomial(&t.coefficient, vars)?;
            if !c.is_xi_free() {
                return Err(FrameDocError::Shape("PBW coefficients must be functions".into()));
            }
            w.add_term(Monomial::from_exponents(&t.exponents), c);
        }
        Ok((frame, w))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logder::{saito_frame, Derivation};
    use crate::parse::{parse_operator, parse_polynomial};
    use crate::poly::int;

    fn setup(vars: &str, f: &str, basis: &[&str]) -> (VarTable, SaitoFrame) {
        let v = VarTable::parse_list(vars).unwrap();
        let f = parse_polynomial(f, &v).unwrap();
        let basis: Vec<Derivation> = basis
            .iter()
            .map(|s| Derivation::from_diffop(&parse_operator(s, &v).unwrap()).unwrap())
            .collect();
        let frame = saito_frame(&f, &basis).unwrap();
        (v, frame)
    }

    fn mono(e: &[u16]) -> Monomial {
        Monomial::from_exponents(e)
    }

    #[test]
    fn normal_form_examples() {
        let (v, frame) = setup("x,y", "x*y", &["x*d_x", "y*d_y"]);
        let mut rw = Rewriter::new(&frame);
        let w = rw.normal_form(&parse_operator("x^2*d_x^2", &v).unwrap()).unwrap();
        assert_eq!(
            w,
            PbwForm::from_terms(2, [(mono(&[2, 0]), Polynomial::one(2)), (mono(&[1, 0]), Polynomial::from_int(2, -1))])
        );
        assert_eq!(w.display(&v).to_string(), "delta_1^2 + (-1)*delta_1");
        let err = rw.normal_form(&parse_operator("d_x", &v).unwrap()).unwrap_err();
        assert_eq!(err.stage, Stage::Commutator);
        assert!(!err.witness.is_zero());
        let g = parse_polynomial("x^2 + 3*y", &v).unwrap();
        assert_eq!(rw.normal_form(&DiffOp::function(g.clone())).unwrap(), PbwForm::function(g));
    }

    #[test]
    fn expand_examples() {
        let (v, frame) = setup("x,y", "x*y", &["x*d_x", "y*d_y"]);
        let mut rw = Rewriter::new(&frame);
        assert_eq!(
            rw.expand(&PbwForm::monomial(mono(&[1, 0]))),
            parse_operator("x*d_x", &v).unwrap()
        );
        let w = PbwForm::from_terms(2, [(mono(&[2, 0]), Polynomial::one(2)), (mono(&[1, 0]), Polynomial::from_int(2, -1))]);
        assert_eq!(rw.expand(&w), parse_operator("x^2*d_x^2", &v).unwrap());
    }

    #[test]
    fn cusp_reordering_uses_structure_constants() {
        let (_, frame) = setup("x,y", "x^2 - y^3", &["3*x*d_x + 2*y*d_y", "3*y^2*d_x + 2*x*d_y"]);
        let mut rw = Rewriter::new(&frame);
        // delta_2 delta_1 = delta_1 delta_2 - delta_2
        let got = rw.delta_times_monomial(1, &mono(&[1, 0]));
        let want = PbwForm::from_terms(2, [(mono(&[1, 1]), Polynomial::one(2)), (mono(&[0, 1]), Polynomial::from_int(2, -1))]);
        assert_eq!(got, want);
        let mut q = LogWordPoly::zero(2);
        q.add_term(vec![1, 0, 1], Polynomial::one(2));
        let sorted = rw.reorder(&q);
        assert_eq!(rw.expand(&sorted), rw.expand_words(&q));
    }

    #[test]
    fn round_trip_small() {
        let (v, frame) = setup("x,y", "x^2 - y^3", &["3*x*d_x + 2*y*d_y", "3*y^2*d_x + 2*x*d_y"]);
        let mut rw = Rewriter::new(&frame);
        let w = PbwForm::from_terms(
            2,
            [
                (mono(&[1, 2]), parse_polynomial("x - y^2", &v).unwrap()),
                (mono(&[0, 1]), parse_polynomial("3", &v).unwrap()),
                (mono(&[2, 0]), parse_polynomial("x*y", &v).unwrap()),
                (mono(&[0, 0]), parse_polynomial("y", &v).unwrap()),
            ],
        );
        let p = rw.expand(&w);
        assert_eq!(rw.normal_form(&p).unwrap(), w);
        assert_eq!(
            p.principal_symbol().unwrap(),
            w.graded_symbol(&frame.symbols())
        );
    }

    #[test]
    fn document_round_trip() {
        let (v, frame) = setup("x,y", "x*y", &["x*d_x", "y*d_y"]);
        let w = PbwForm::from_terms(2, [(mono(&[1, 1]), Polynomial::x(2, 0).scale(&int(3)))]);
        let doc = PbwDocument::new(&frame, &v, &w);
        let json = serde_json::to_string(&doc).unwrap();
        let back: PbwDocument = serde_json::from_str(&json).unwrap();
        assert_eq!(back.load().unwrap(), (frame, w));
    }
}
