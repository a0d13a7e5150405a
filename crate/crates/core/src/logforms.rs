//! Logarithmic differential forms, the pairing with derivations, and the de
//! Rham complex of a free logarithmic connection.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logder::{determinant, lie_bracket, Derivation, SaitoFrame};
use crate::poly::{Coeff, Polynomial, RationalFunction, VarTable};

/// `sum_J c_J dx_J` over increasing index sets `J` of a fixed size, with
/// coefficients whose poles lie along `f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogForm {
    n: usize,
    degree: usize,
    base: Polynomial,
    coeffs: BTreeMap<Vec<usize>, RationalFunction>,
}

/// Sign of the permutation sorting the concatenation, `None` on a repeat.
fn merge_sign(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut inversions = 0usize;
    for &x in a {
        for &y in b {
            match x.cmp(&y) {
                std::cmp::Ordering::Equal => return None,
                std::cmp::Ordering::Greater => inversions += 1,
                std::cmp::Ordering::Less => {}
            }
        }
    }
    let mut merged: Vec<usize> = a.iter().chain(b).copied().collect();
    merged.sort_unstable();
    Some((merged, inversions % 2 == 1))
}

impl LogForm {
    pub fn zero(f: &Polynomial, degree: usize) -> Self {
        LogForm {
            n: f.n(),
            degree,
            base: f.clone(),
            coeffs: BTreeMap::new(),
        }
    }

    pub fn function(r: RationalFunction) -> Self {
        let mut w = Self::zero(r.base(), 0);
        w.add_term(Vec::new(), r);
        w
    }

    /// `dx_i`.
    pub fn dx(f: &Polynomial, i: usize) -> Self {
        let mut w = Self::zero(f, 1);
        w.add_term(vec![i], RationalFunction::polynomial(Polynomial::one(f.n()), f));
        w
    }

    /// `sum_i c_i dx_i`.
    pub fn one_form(f: &Polynomial, coeffs: Vec<RationalFunction>) -> Self {
        let mut w = Self::zero(f, 1);
        for (i, c) in coeffs.into_iter().enumerate() {
            w.add_term(vec![i], c);
        }
        w
    }

    /// `dg = sum_i dg/dx_i dx_i` for a polynomial `g`.
    pub fn differential(f: &Polynomial, g: &Polynomial) -> Self {
        Self::one_form(
            f,
            (0..f.n()).map(|i| RationalFunction::polynomial(g.dx(i), f)).collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> &Polynomial {
        &self.base
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &RationalFunction)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, j: &[usize]) -> RationalFunction {
        self.coeffs
            .get(j)
            .cloned()
            .unwrap_or_else(|| RationalFunction::zero(&self.base))
    }

    /// Adds `c dx_J`; `J` must be increasing and of the form's degree.
    pub fn add_term(&mut self, j: Vec<usize>, c: RationalFunction) {
        debug_assert_eq!(j.len(), self.degree);
        debug_assert!(j.windows(2).all(|w| w[0] < w[1]) && j.iter().all(|&i| i < self.n));
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.coeffs.entry(j) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &LogForm) -> LogForm {
        assert_eq!(self.degree, other.degree);
        let mut out = self.clone();
        for (j, c) in &other.coeffs {
            out.add_term(j.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> LogForm {
        self.map(|c| c.neg())
    }

    pub fn scale(&self, c: &Coeff) -> LogForm {
        self.map(|r| r.scale(c))
    }

    pub fn mul_rational(&self, r: &RationalFunction) -> LogForm {
        self.map(|c| c.mul(r))
    }

    pub fn mul_poly(&self, g: &Polynomial) -> LogForm {
        self.map(|c| c.mul_poly(g))
    }

    fn map(&self, f: impl Fn(&RationalFunction) -> RationalFunction) -> LogForm {
        let mut out = LogForm::zero(&self.base, self.degree);
        for (j, c) in &self.coeffs {
            out.add_term(j.clone(), f(c));
        }
        out
    }

    pub fn wedge(&self, other: &LogForm) -> LogForm {
        assert_eq!(self.base, other.base, "forms with different pole bases");
        let mut out = LogForm::zero(&self.base, self.degree + other.degree);
        if out.degree > self.n {
            return out;
        }
        for (a, ca) in &self.coeffs {
            for (b, cb) in &other.coeffs {
                if let Some((j, odd)) = merge_sign(a, b) {
                    let c = ca.mul(cb);
                    out.add_term(j, if odd { c.neg() } else { c });
                }
            }
        }
        out
    }

    /// `d(c dx_J) = sum_i dc/dx_i dx_i ^ dx_J`, with the quotient rule on `c`.
    pub fn exterior_derivative(&self) -> LogForm {
        let mut out = LogForm::zero(&self.base, self.degree + 1);
        for (j, c) in &self.coeffs {
            for i in 0..self.n {
                if let Some((k, odd)) = merge_sign(&[i], j) {
                    let dc = c.partial(i);
                    out.add_term(k, if odd { dc.neg() } else { dc });
                }
            }
        }
        out
    }

    /// Largest pole order among the coefficients.
    pub fn pole_order(&self) -> u32 {
        self.coeffs.values().map(RationalFunction::pole_order).max().unwrap_or(0)
    }

    pub fn is_polynomial(&self) -> bool {
        self.pole_order() == 0
    }

    /// `{"13": "num / f^k", ...}` with 1-based digits.
    pub fn document(&self, vars: &VarTable) -> BTreeMap<String, String> {
        self.coeffs
            .iter()
            .map(|(j, c)| (subset_key(j), c.display(vars).to_string()))
            .collect()
    }
}

pub fn subset_key(j: &[usize]) -> String {
    if j.is_empty() {
        return "0".into();
    }
    j.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(if j.iter().any(|&i| i >= 9) { "," } else { "" })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FormCheck {
    Yes,
    /// `f w` keeps a pole at the given component.
    PoleTooHigh { component: Vec<usize>, coefficient: RationalFunction },
    /// `df ^ w` keeps a pole at the given component.
    DfWedgeNotHolomorphic { component: Vec<usize>, coefficient: RationalFunction },
}

impl FormCheck {
    pub fn is_yes(&self) -> bool {
        matches!(self, FormCheck::Yes)
    }
}

/// Both `f w` and `df ^ w` must be holomorphic.
pub fn is_logarithmic_form(w: &LogForm, f: &Polynomial) -> FormCheck {
    assert_eq!(w.base(), f);
    let fw = w.mul_poly(f);
    if let Some((j, c)) = fw.terms().find(|(_, c)| !c.is_polynomial()) {
        return FormCheck::PoleTooHigh {
            component: j.clone(),
            coefficient: c.clone(),
        };
    }
    let dfw = LogForm::differential(f, f).wedge(w);
    if let Some((j, c)) = dfw.terms().find(|(_, c)| !c.is_polynomial()) {
        return FormCheck::DfWedgeNotHolomorphic {
            component: j.clone(),
            coefficient: c.clone(),
        };
    }
    FormCheck::Yes
}

/// `<w, delta> = sum_i w_i a_i` for a 1-form.
pub fn contract(w: &LogForm, delta: &Derivation) -> RationalFunction {
    assert_eq!(w.degree(), 1);
    let mut out = RationalFunction::zero(w.base());
    for (j, c) in w.terms() {
        let a = &delta.coeffs()[j[0]];
        if !a.is_zero() {
            out = out.add(&c.mul_poly(a));
        }
    }
    out
}

/// Full contraction of a `p`-form with `p` derivations:
/// `sum_J c_J det(<dx_{J_a}, delta_b>)`.
pub fn gamma_pairing(w: &LogForm, deltas: &[Derivation]) -> RationalFunction {
    assert_eq!(w.degree(), deltas.len());
    let mut out = RationalFunction::zero(w.base());
    for (j, c) in w.terms() {
        let det = if j.is_empty() {
            Polynomial::one(w.n())
        } else {
            let m: Vec<Vec<Polynomial>> = j
                .iter()
                .map(|&ja| deltas.iter().map(|d| d.coeffs()[ja].clone()).collect())
                .collect();
            determinant(&m)
        };
        if !det.is_zero() {
            out = out.add(&c.mul_poly(&det));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormError {
    #[error("the frame's determinant is f times a non-constant unit; its dual basis has poles off f")]
    LocalOnlyUnit,
    #[error("connection is not integrable at ({i}, {j}), entry ({row}, {col}): defect {defect:?}")]
    NonIntegrable {
        i: usize,
        j: usize,
        row: usize,
        col: usize,
        defect: Polynomial,
    },
    #[error("connection data has the wrong shape")]
    Shape,
}

/// `w_i = sum_j B_ij / det dx_j`, so that `<w_i, delta_j>` is the Kronecker
/// delta.
pub fn dual_basis(frame: &SaitoFrame) -> Result<Vec<LogForm>, FormError> {
    if frame.local_only_unit().is_some() {
        return Err(FormError::LocalOnlyUnit);
    }
    let f = frame.divisor();
    let inv = frame.unit().recip();
    Ok(frame
        .adjugate_b()
        .iter()
        .map(|row| {
            LogForm::one_form(
                f,
                row.iter()
                    .map(|b| RationalFunction::new(b.scale(&inv), f.clone(), 1))
                    .collect(),
            )
        })
        .collect())
}

/// `w_J = w_{j1} ^ ... ^ w_{jp}`.
pub fn dual_wedge(dual: &[LogForm], j: &[usize]) -> LogForm {
    let f = dual[0].base();
    let mut out = LogForm::function(RationalFunction::polynomial(Polynomial::one(f.n()), f));
    for &i in j {
        out = out.wedge(&dual[i]);
    }
    out
}

/// All increasing `p`-subsets of `0..n`.
pub fn subsets(n: usize, p: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, p, &mut Vec::new(), &mut out);
    out
}

/// A free rank-`r` module with connection `nabla_{delta_i} e = delta_i(e) +
/// Gamma_i e` on coefficient vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogConnection {
    rank: usize,
    gammas: Vec<Vec<Vec<Polynomial>>>,
}

impl LogConnection {
    pub fn new(rank: usize, gammas: Vec<Vec<Vec<Polynomial>>>) -> Result<Self, FormError> {
        if gammas
            .iter()
            .any(|g| g.len() != rank || g.iter().any(|r| r.len() != rank))
        {
            return Err(FormError::Shape);
        }
        Ok(LogConnection { rank, gammas })
    }

    pub fn trivial(frame: &SaitoFrame, rank: usize) -> Self {
        let z = Polynomial::zero(frame.n());
        LogConnection {
            rank,
            gammas: vec![vec![vec![z; rank]; rank]; frame.n()],
        }
    }

    /// `nabla = d + lambda df/f` on the structure sheaf:
    /// `Gamma_i = lambda delta_i(f) / f`.
    pub fn twist(frame: &SaitoFrame, lambda: &Coeff) -> Self {
        let f = frame.divisor();
        let gammas = frame
            .basis()
            .iter()
            .map(|d| {
                let q = d
                    .apply(f)
                    .exact_divide(f)
                    .expect("frame elements are logarithmic");
                vec![vec![q.scale(lambda)]]
            })
            .collect();
        LogConnection { rank: 1, gammas }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn gamma(&self, i: usize) -> &[Vec<Polynomial>] {
        &self.gammas[i]
    }

    /// `delta_i(Gamma_j) - delta_j(Gamma_i) + [Gamma_i, Gamma_j] =
    /// sum_k a^k_ij Gamma_k`, entrywise.
    pub fn check_integrable(&self, frame: &SaitoFrame) -> Result<(), FormError> {
        let n = frame.n();
        if self.gammas.len() != n {
            return Err(FormError::Shape);
        }
        let r = self.rank;
        for i in 0..n {
            for j in (i + 1)..n {
                for row in 0..r {
                    for col in 0..r {
                        let di = &frame.basis()[i];
                        let dj = &frame.basis()[j];
                        let mut defect = &di.apply(&self.gammas[j][row][col]) - &dj.apply(&self.gammas[i][row][col]);
                        for l in 0..r {
                            defect.add_assign_ref(&(&self.gammas[i][row][l] * &self.gammas[j][l][col]));
                            defect.sub_assign_ref(&(&self.gammas[j][row][l] * &self.gammas[i][l][col]));
                        }
                        for k in 0..n {
                            let a = frame.structure_constant(i, j, k);
                            if !a.is_zero() {
                                defect.sub_assign_ref(&(a * &self.gammas[k][row][col]));
                            }
                        }
                        if !defect.is_zero() {
                            return Err(FormError::NonIntegrable { i, j, row, col, defect });
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// `(nabla eta)_s = d eta_s + sum_i sum_l (Gamma_i)_{sl} w_i ^ eta_l` for a
/// section `eta = sum_l eta_l e_l` of `Omega^p(log) (x) M`.
pub fn de_rham_differential(
    frame: &SaitoFrame,
    conn: &LogConnection,
    section: &[LogForm],
) -> Result<Vec<LogForm>, FormError> {
    conn.check_integrable(frame)?;
    de_rham_unchecked(frame, conn, section)
}

fn de_rham_unchecked(
    frame: &SaitoFrame,
    conn: &LogConnection,
    section: &[LogForm],
) -> Result<Vec<LogForm>, FormError> {
    if section.len() != conn.rank {
        return Err(FormError::Shape);
    }
    let dual = dual_basis(frame)?;
    let mut out: Vec<LogForm> = section.iter().map(LogForm::exterior_derivative).collect();
    for (s, out_s) in out.iter_mut().enumerate() {
        for (i, wi) in dual.iter().enumerate() {
            for (l, eta) in section.iter().enumerate() {
                let g = &conn.gammas[i][s][l];
                if !g.is_zero() {
                    *out_s = out_s.add(&wi.wedge(eta).mul_poly(g));
                }
            }
        }
    }
    Ok(out)
}

/// `nabla^{p+1}(nabla^p(eta))`, which vanishes for integrable connections.
pub fn de_rham_square(
    frame: &SaitoFrame,
    conn: &LogConnection,
    section: &[LogForm],
) -> Result<Vec<LogForm>, FormError> {
    let once = de_rham_unchecked(frame, conn, section)?;
    de_rham_unchecked(frame, conn, &once)
}

/// Both sides of the Cartan formula for `d w` evaluated on the frame
/// elements indexed by `k` (size `deg w + 1`).
pub fn cartan_sides(frame: &SaitoFrame, w: &LogForm, k: &[usize]) -> (RationalFunction, RationalFunction) {
    let basis = frame.basis();
    let deltas: Vec<Derivation> = k.iter().map(|&i| basis[i].clone()).collect();
    let lhs = gamma_pairing(&w.exterior_derivative(), &deltas);
    let mut rhs = RationalFunction::zero(w.base());
    let m = deltas.len();
    for a in 0..m {
        let rest: Vec<Derivation> = (0..m).filter(|&c| c != a).map(|c| deltas[c].clone()).collect();
        let t = deltas[a].apply_rational(&gamma_pairing(w, &rest));
        rhs = if a % 2 == 0 { rhs.add(&t) } else { rhs.sub(&t) };
    }
    for a in 0..m {
        for b in (a + 1)..m {
            let mut args = vec![lie_bracket(&deltas[a], &deltas[b])];
            args.extend((0..m).filter(|&c| c != a && c != b).map(|c| deltas[c].clone()));
            let t = gamma_pairing(w, &args);
            // (-1)^(i+j) with 1-based i, j
            rhs = if (a + b) % 2 == 0 { rhs.add(&t) } else { rhs.sub(&t) };
        }
    }
    (lhs, rhs)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormDocument {
    pub degree: usize,
    pub coefficients: BTreeMap<String, String>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logder::saito_frame;
    use crate::parse::{parse_operator, parse_polynomial};
    use crate::poly::{int, rat};

    fn frame(vars: &str, f: &str, basis: &[&str]) -> (VarTable, SaitoFrame) {
        let v = VarTable::parse_list(vars).unwrap();
        let f = parse_polynomial(f, &v).unwrap();
        let b: Vec<Derivation> = basis
            .iter()
            .map(|s| Derivation::from_diffop(&parse_operator(s, &v).unwrap()).unwrap())
            .collect();
        (v, saito_frame(&f, &b).unwrap())
    }

    fn rf(num: &str, k: u32, f: &Polynomial, v: &VarTable) -> RationalFunction {
        RationalFunction::new(parse_polynomial(num, v).unwrap(), f.clone(), k)
    }

    #[test]
    fn logarithmic_form_examples() {
        let v = VarTable::parse_list("x,y").unwrap();
        let f = parse_polynomial("x*y", &v).unwrap();
        // dx/x = y dx / (xy)
        let w = LogForm::one_form(&f, vec![rf("y", 1, &f, &v), rf("0", 0, &f, &v)]);
        assert!(is_logarithmic_form(&w, &f).is_yes());
        // dx/x^2 = y^2 dx / (xy)^2
        let w = LogForm::one_form(&f, vec![rf("y^2", 2, &f, &v), rf("0", 0, &f, &v)]);
        assert!(matches!(is_logarithmic_form(&w, &f), FormCheck::PoleTooHigh { .. }));
        let w = LogForm::one_form(&f, vec![rf("x^3 + y", 0, &f, &v), rf("7", 0, &f, &v)]);
        assert!(is_logarithmic_form(&w, &f).is_yes());
        // dx/y fails only the second condition: f w = x dx, df ^ w = -x^2/... has a pole
        let w = LogForm::one_form(&f, vec![rf("x", 1, &f, &v), rf("0", 0, &f, &v)]);
        assert!(matches!(is_logarithmic_form(&w, &f), FormCheck::DfWedgeNotHolomorphic { .. }));
    }

    #[test]
    fn wedge_and_derivative_examples() {
        let v = VarTable::parse_list("x,y").unwrap();
        let f = parse_polynomial("x*y", &v).unwrap();
        let dx_x = LogForm::one_form(&f, vec![rf("y", 1, &f, &v), rf("0", 0, &f, &v)]);
        let dy_y = LogForm::one_form(&f, vec![rf("0", 0, &f, &v), rf("x", 1, &f, &v)]);
        assert!(dx_x.exterior_derivative().is_zero());
        let w = dx_x.wedge(&dy_y);
        assert_eq!(w.coeff(&[0, 1]), rf("1", 1, &f, &v));
        assert!(dy_y.wedge(&dx_x).add(&w).is_zero());
        // d(y dx / x) = dy ^ dx / x = -dx ^ dy / x
        let ydx_x = dx_x.mul_poly(&parse_polynomial("y", &v).unwrap());
        assert_eq!(ydx_x.exterior_derivative().coeff(&[0, 1]), rf("-y", 1, &f, &v));
        let any = LogForm::one_form(&f, vec![rf("x^2*y + 1", 2, &f, &v), rf("y^3", 1, &f, &v)]);
        assert!(any.exterior_derivative().exterior_derivative().is_zero());
    }

    #[test]
    fn contraction_examples() {
        let (v, fr) = frame("x,y", "x*y", &["x*d_x", "y*d_y"]);
        let f = fr.divisor();
        let dx_x = LogForm::one_form(f, vec![rf("y", 1, f, &v), rf("0", 0, f, &v)]);
        assert_eq!(contract(&dx_x, &fr.basis()[0]), rf("1", 0, f, &v));
        assert!(contract(&dx_x, &fr.basis()[1]).is_zero());
        let d = Derivation::from_diffop(&parse_operator("3*y^2*d_x + 2*x*d_y", &v).unwrap()).unwrap();
        assert_eq!(contract(&LogForm::dx(f, 0), &d), rf("3*y^2", 0, f, &v));
    }

    #[test]
    fn dual_basis_examples() {
        let (v, fr) = frame("x,y", "x*y", &["x*d_x", "y*d_y"]);
        let f = fr.divisor();
        let w = dual_basis(&fr).unwrap();
        assert_eq!(w[0], LogForm::one_form(f, vec![rf("y", 1, f, &v), rf("0", 0, f, &v)]));
        assert_eq!(w[1], LogForm::one_form(f, vec![rf("0", 0, f, &v), rf("x", 1, f, &v)]));

        let (v, fr) = frame("x,y", "x", &["x*d_x", "d_y"]);
        let f = fr.divisor();
        let w = dual_basis(&fr).unwrap();
        assert_eq!(w[0], LogForm::one_form(f, vec![rf("1", 1, f, &v), rf("0", 0, f, &v)]));
        assert_eq!(w[1], LogForm::dx(f, 1));

        let (_, fr) = frame("x,y", "x^2 - y^3", &["3*x*d_x + 2*y*d_y", "3*y^2*d_x + 2*x*d_y"]);
        let w = dual_basis(&fr).unwrap();
        for i in 0..2 {
            assert!(is_logarithmic_form(&w[i], fr.divisor()).is_yes());
            for j in 0..2 {
                let want = if i == j { 1 } else { 0 };
                assert_eq!(
                    contract(&w[i], &fr.basis()[j]),
                    RationalFunction::polynomial(Polynomial::from_int(2, want), fr.divisor())
                );
            }
        }
        assert!(is_logarithmic_form(&w[0].wedge(&w[1]), fr.divisor()).is_yes());
    }

    #[test]
    fn local_unit_has_no_dual_basis_here() {
        let (_, fr) = frame("x,y", "x", &["(x*y + x)*d_x", "(y + 1)*d_y"]);
        assert_eq!(dual_basis(&fr), Err(FormError::LocalOnlyUnit));
    }

    #[test]
    fn gamma_examples() {
        let (v, fr) = frame("x,y", "x*y", &["x*d_x", "y*d_y"]);
        let f = fr.divisor();
        let dxdy = LogForm::dx(f, 0).wedge(&LogForm::dx(f, 1));
        let dx = Derivation::partial(2, 0);
        let dy = Derivation::partial(2, 1);
        assert_eq!(gamma_pairing(&dxdy, &[dx.clone(), dy.clone()]), rf("1", 0, f, &v));
        assert_eq!(gamma_pairing(&dxdy, &[dy, dx]), rf("-1", 0, f, &v));
        let w = dual_basis(&fr).unwrap();
        assert_eq!(gamma_pairing(&w[0].wedge(&w[1]), fr.basis()), rf("1", 0, f, &v));
        assert_eq!(gamma_pairing(&w[0], &fr.basis()[..1]), contract(&w[0], &fr.basis()[0]));
    }

    #[test]
    fn connections() {
        let (v, fr) = frame("x,y", "x^2 - y^3", &["3*x*d_x + 2*y*d_y", "3*y^2*d_x + 2*x*d_y"]);
        let f = fr.divisor().clone();
        let one = RationalFunction::polynomial(Polynomial::one(2), &f);
        let triv = LogConnection::trivial(&fr, 1);
        triv.check_integrable(&fr).unwrap();
        let d0 = de_rham_differential(&fr, &triv, &[LogForm::function(one.clone())]).unwrap();
        assert!(d0[0].is_zero());
        for lambda in [rat(1, 2), int(-3)] {
            let tw = LogConnection::twist(&fr, &lambda);
            tw.check_integrable(&fr).unwrap();
            let d0 = de_rham_differential(&fr, &tw, &[LogForm::function(one.clone())]).unwrap();
            // lambda df / f
            let want = LogForm::differential(&f, &f).mul_rational(&RationalFunction::new(
                Polynomial::constant(2, lambda.clone()),
                f.clone(),
                1,
            ));
            assert_eq!(d0[0], want);
            let sq = de_rham_square(&fr, &tw, &[LogForm::function(one.clone())]).unwrap();
            assert!(sq[0].is_zero());
        }
        let bad = LogConnection::new(1, vec![vec![vec![parse_polynomial("x", &v).unwrap()]], vec![vec![Polynomial::zero(2)]]]).unwrap();
        assert!(matches!(bad.check_integrable(&fr), Err(FormError::NonIntegrable { .. })));
    }

    #[test]
    fn cartan_on_dual_forms() {
        let (v, fr) = frame("x,y", "x^2 - y^3", &["3*x*d_x + 2*y*d_y", "3*y^2*d_x + 2*x*d_y"]);
        let w = dual_basis(&fr).unwrap();
        let g = parse_polynomial("x*y + 2", &v).unwrap();
        let form = w[0].mul_poly(&g).add(&w[1]);
        let (l, r) = cartan_sides(&fr, &form, &[0, 1]);
        assert_eq!(l, r);
        let zero_form = LogForm::function(RationalFunction::polynomial(g, fr.divisor()));
        for k in 0..2 {
            let (l, r) = cartan_sides(&fr, &zero_form, &[k]);
            assert_eq!(l, r);
        }
    }

    #[test]
    fn subset_keys() {
        assert_eq!(subset_key(&[0, 2]), "13");
        assert_eq!(subset_key(&[]), "0");
        assert_eq!(subsets(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
    }
}
