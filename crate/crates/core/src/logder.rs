//! Logarithmic derivations, Saito's criterion and structure constants.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::parse::{parse_polynomial, ParseError};
use crate::poly::{Coeff, Polynomial, RationalFunction, VarTable};
use crate::weyl::DiffOp;

/// `sum_i a_i d_i` with `xi`-free coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Derivation {
    coeffs: Vec<Polynomial>,
}

impl Derivation {
    pub fn new(coeffs: Vec<Polynomial>) -> Self {
        assert!(!coeffs.is_empty());
        let n = coeffs.len();
        for c in &coeffs {
            assert_eq!(c.n(), n, "derivation coefficient in the wrong ring");
            assert!(c.is_xi_free(), "derivation coefficients must be functions");
        }
        Derivation { coeffs }
    }

    pub fn zero(n: usize) -> Self {
        Derivation {
            coeffs: vec![Polynomial::zero(n); n],
        }
    }

    /// `d/dx_i`.
    pub fn partial(n: usize, i: usize) -> Self {
        let mut coeffs = vec![Polynomial::zero(n); n];
        coeffs[i] = Polynomial::one(n);
        Derivation { coeffs }
    }

    /// Reads the coefficients off an operator of order exactly one with no
    /// function part.
    pub fn from_diffop(op: &DiffOp) -> Option<Self> {
        let n = op.n();
        let mut coeffs = vec![Polynomial::zero(n); n];
        for (alpha, c) in op.terms() {
            if alpha.degree() != 1 {
                return None;
            }
            let i = alpha.iter().position(|e| e == 1).unwrap();
            coeffs[i] = c.clone();
        }
        Some(Derivation { coeffs })
    }

    pub fn n(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Polynomial] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Polynomial::is_zero)
    }

    pub fn apply(&self, g: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.n());
        for (i, a) in self.coeffs.iter().enumerate() {
            if !a.is_zero() {
                out.add_assign_ref(&(a * &g.dx(i)));
            }
        }
        out
    }

    pub fn apply_rational(&self, g: &RationalFunction) -> RationalFunction {
        let mut out = RationalFunction::zero(g.base());
        for (i, a) in self.coeffs.iter().enumerate() {
            if !a.is_zero() {
                out = out.add(&g.partial(i).mul_poly(a));
            }
        }
        out
    }

    pub fn to_diffop(&self) -> DiffOp {
        DiffOp::vector_field(&self.coeffs)
    }

    /// Principal symbol `sum_i a_i xi_i`.
    pub fn symbol(&self) -> Polynomial {
        let n = self.n();
        let mut out = Polynomial::zero(n);
        for (i, a) in self.coeffs.iter().enumerate() {
            out.add_assign_ref(&(a * &Polynomial::xi(n, i)));
        }
        out
    }

    pub fn scale_by(&self, g: &Polynomial) -> Derivation {
        Derivation {
            coeffs: self.coeffs.iter().map(|a| a * g).collect(),
        }
    }

    pub fn add(&self, other: &Derivation) -> Derivation {
        Derivation {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn display<'a>(&'a self, vars: &'a VarTable) -> impl fmt::Display + 'a {
        DerivationDisplay { d: self, vars }
    }
}

struct DerivationDisplay<'a> {
    d: &'a Derivation,
    vars: &'a VarTable,
}

impl fmt::Display for DerivationDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.d.to_diffop().display(self.vars))
    }
}

/// Coefficient `i` of the result is `d1(b_i) - d2(a_i)`.
pub fn lie_bracket(d1: &Derivation, d2: &Derivation) -> Derivation {
    assert_eq!(d1.n(), d2.n());
    Derivation {
        coeffs: d1
            .coeffs
            .iter()
            .zip(&d2.coeffs)
            .map(|(a, b)| &d1.apply(b) - &d2.apply(a))
            .collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LogCheck {
    Yes { quotient: Polynomial },
    No { remainder: Polynomial },
}

impl LogCheck {
    pub fn is_yes(&self) -> bool {
        matches!(self, LogCheck::Yes { .. })
    }
}

pub fn is_logarithmic(delta: &Derivation, f: &Polynomial) -> LogCheck {
    assert!(!f.is_zero());
    match delta.apply(f).exact_divide(f) {
        Ok(quotient) => LogCheck::Yes { quotient },
        Err(e) => LogCheck::No {
            remainder: e.remainder,
        },
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SaitoFailure {
    #[error("expected {expected} derivations, got {got}")]
    WrongCount { expected: usize, got: usize },
    #[error("basis element {index} is not logarithmic (remainder {remainder:?})")]
    NotLogarithmic { index: usize, remainder: Polynomial },
    #[error("the coefficient determinant vanishes")]
    ZeroDeterminant,
    #[error("the determinant is not a unit times f (witness {witness:?})")]
    NotUnitMultiple { det: Polynomial, witness: Polynomial },
    #[error("[d_{i}, d_{j}] is not in the span of the basis (remainder {remainder:?})")]
    NotInSpan { i: usize, j: usize, remainder: Polynomial },
}

/// A verified free basis of the logarithmic derivations of `f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaitoFrame {
    divisor: Polynomial,
    basis: Vec<Derivation>,
    matrix_a: Vec<Vec<Polynomial>>,
    adjugate_b: Vec<Vec<Polynomial>>,
    det: Polynomial,
    unit: Coeff,
    local_unit: Option<Polynomial>,
    structure: Vec<Vec<Vec<Polynomial>>>,
}

impl SaitoFrame {
    pub fn n(&self) -> usize {
        self.basis.len()
    }

    pub fn divisor(&self) -> &Polynomial {
        &self.divisor
    }

    pub fn basis(&self) -> &[Derivation] {
        &self.basis
    }

    /// Rows are basis coefficients.
    pub fn matrix_a(&self) -> &[Vec<Polynomial>] {
        &self.matrix_a
    }

    /// Cofactor matrix of `A`, so that `A * B^t = det * I`.
    pub fn adjugate_b(&self) -> &[Vec<Polynomial>] {
        &self.adjugate_b
    }

    pub fn det(&self) -> &Polynomial {
        &self.det
    }

    /// The constant `c` with `det = c f`; for a local-only frame this is the
    /// constant term of the unit.
    pub fn unit(&self) -> &Coeff {
        &self.unit
    }

    /// `det / f` when it is a non-constant polynomial with nonzero constant
    /// term: a unit of the local ring at the origin but not globally.
    pub fn local_only_unit(&self) -> Option<&Polynomial> {
        self.local_unit.as_ref()
    }

    /// `a^k_ij` with `[d_i, d_j] = sum_k a^k_ij d_k`.
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> &Polynomial {
        &self.structure[i][j][k]
    }

    pub fn structure_constants(&self) -> &[Vec<Vec<Polynomial>>] {
        &self.structure
    }

    pub fn symbols(&self) -> Vec<Polynomial> {
        self.basis.iter().map(Derivation::symbol).collect()
    }

    pub fn basis_ops(&self) -> Vec<DiffOp> {
        self.basis.iter().map(Derivation::to_diffop).collect()
    }

    /// `sum_k a^k_ij d_k`.
    pub fn bracket_in_frame(&self, i: usize, j: usize) -> Derivation {
        let n = self.n();
        let mut out = Derivation::zero(n);
        for k in 0..n {
            let a = &self.structure[i][j][k];
            if !a.is_zero() {
                out = out.add(&self.basis[k].scale_by(a));
            }
        }
        out
    }
}

/// Determinant by cofactor expansion along the first row.
pub fn determinant(m: &[Vec<Polynomial>]) -> Polynomial {
    let n = m.len();
    if n == 0 {
        panic!("determinant of an empty matrix");
    }
    let ring = m[0][0].n();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = Polynomial::zero(ring);
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let term = &m[0][j] * &determinant(&minor(m, 0, j));
        if j % 2 == 0 {
            acc.add_assign_ref(&term);
        } else {
            acc.sub_assign_ref(&term);
        }
    }
    acc
}

fn minor(m: &[Vec<Polynomial>], row: usize, col: usize) -> Vec<Vec<Polynomial>> {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != row)
        .map(|(_, r)| {
            r.iter()
                .enumerate()
                .filter(|(j, _)| *j != col)
                .map(|(_, p)| p.clone())
                .collect()
        })
        .collect()
}

/// `C_ij = (-1)^(i+j) det(minor_ij)`.
pub fn cofactor_matrix(m: &[Vec<Polynomial>]) -> Vec<Vec<Polynomial>> {
    let n = m.len();
    let ring = m[0][0].n();
    if n == 1 {
        return vec![vec![Polynomial::one(ring)]];
    }
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let d = determinant(&minor(m, i, j));
                    if (i + j) % 2 == 0 {
                        d
                    } else {
                        -d
                    }
                })
                .collect()
        })
        .collect()
}

/// Saito's criterion together with the structure constants.
pub fn saito_frame(f: &Polynomial, basis: &[Derivation]) -> Result<SaitoFrame, SaitoFailure> {
    let n = f.n();
    if basis.len() != n {
        return Err(SaitoFailure::WrongCount {
            expected: n,
            got: basis.len(),
        });
    }
    for (index, d) in basis.iter().enumerate() {
        if let LogCheck::No { remainder } = is_logarithmic(d, f) {
            return Err(SaitoFailure::NotLogarithmic { index, remainder });
        }
    }
    let matrix_a: Vec<Vec<Polynomial>> = basis.iter().map(|d| d.coeffs.clone()).collect();
    let det = determinant(&matrix_a);
    if det.is_zero() {
        return Err(SaitoFailure::ZeroDeterminant);
    }
    let u = det.exact_divide(f).map_err(|e| SaitoFailure::NotUnitMultiple {
        det: det.clone(),
        witness: e.remainder,
    })?;
    let (unit, local_unit) = match u.constant_value() {
        Some(c) => (c, None),
        None => {
            let c = u.constant_term();
            if num_traits::Zero::is_zero(&c) {
                return Err(SaitoFailure::NotUnitMultiple {
                    det: det.clone(),
                    witness: u,
                });
            }
            (c, Some(u))
        }
    };
    let adjugate_b = cofactor_matrix(&matrix_a);
    let structure = solve_structure_constants(basis, &adjugate_b, &det)?;
    Ok(SaitoFrame {
        divisor: f.clone(),
        basis: basis.to_vec(),
        matrix_a,
        adjugate_b,
        det,
        unit,
        local_unit,
        structure,
    })
}

/// Cramer's rule: `a_ij = [d_i, d_j] * B^t / det`, each division exact.
fn solve_structure_constants(
    basis: &[Derivation],
    b: &[Vec<Polynomial>],
    det: &Polynomial,
) -> Result<Vec<Vec<Vec<Polynomial>>>, SaitoFailure> {
    let n = basis.len();
    let ring = det.n();
    let mut out = vec![vec![vec![Polynomial::zero(ring); n]; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v = lie_bracket(&basis[i], &basis[j]);
            if v.is_zero() {
                continue;
            }
            for k in 0..n {
                let mut num = Polynomial::zero(ring);
                for l in 0..n {
                    if !v.coeffs[l].is_zero() && !b[k][l].is_zero() {
                        num.add_assign_ref(&(&v.coeffs[l] * &b[k][l]));
                    }
                }
                let a = num.exact_divide(det).map_err(|e| SaitoFailure::NotInSpan {
                    i,
                    j,
                    remainder: e.remainder,
                })?;
                out[j][i][k] = -&a;
                out[i][j][k] = a;
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Error)]
pub enum FrameDocError {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("variable table: {0}")]
    Vars(#[from] crate::error::VarError),
    #[error("malformed document: {0}")]
    Shape(String),
    #[error("frame does not verify: {0}")]
    Saito(#[from] SaitoFailure),
    #[error("recorded {field} does not match the recomputed value")]
    Mismatch { field: &'static str },
}

/// JSON interchange form of a frame. Ingesting one re-runs `saito_frame` and
/// compares every recorded field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameDocument {
    pub vars: VarTable,
    pub divisor: String,
    /// Row `i` holds the coefficients of basis element `i`.
    pub basis: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub det: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub local_only_unit: Option<String>,
    /// `structure_constants[i][j][k] = a^k_ij`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure_constants: Option<Vec<Vec<Vec<String>>>>,
}

impl FrameDocument {
    pub fn from_frame(frame: &SaitoFrame, vars: &VarTable) -> Self {
        let show = |p: &Polynomial| p.display(vars).to_string();
        FrameDocument {
            vars: vars.clone(),
            divisor: show(&frame.divisor),
            basis: frame.matrix_a.iter().map(|r| r.iter().map(show).collect()).collect(),
            det: Some(show(&frame.det)),
            unit: Some(frame.unit.to_string()),
            local_only_unit: frame.local_unit.as_ref().map(show),
            structure_constants: Some(
                frame
                    .structure
                    .iter()
                    .map(|r| r.iter().map(|c| c.iter().map(show).collect()).collect())
                    .collect(),
            ),
        }
    }

    /// Parses and verifies. Optional recorded fields must match.
    pub fn to_frame(&self) -> Result<SaitoFrame, FrameDocError> {
        let vars = VarTable::new(self.vars.base().to_vec(), self.vars.symbols().to_vec())?;
        let n = vars.n();
        let f = parse_polynomial(&self.divisor, &vars)?;
        if self.basis.len() != n || self.basis.iter().any(|r| r.len() != n) {
            return Err(FrameDocError::Shape(format!("basis must be {n} x {n}")));
        }
        let mut basis = Vec::with_capacity(n);
        for row in &self.basis {
            let coeffs = row
                .iter()
                .map(|s| parse_polynomial(s, &vars))
                .collect::<Result<Vec<_>, _>>()?;
            if coeffs.iter().any(|c| !c.is_xi_free()) {
                return Err(FrameDocError::Shape("basis coefficients must be functions".into()));
            }
            basis.push(Derivation::new(coeffs));
        }
        let frame = saito_frame(&f, &basis)?;
        if let Some(det) = &self.det {
            if parse_polynomial(det, &vars)? != frame.det {
                return Err(FrameDocError::Mismatch { field: "det" });
            }
        }
        if let Some(unit) = &self.unit {
            let c: Coeff = unit
                .trim()
                .parse()
                .map_err(|_| FrameDocError::Shape(format!("bad unit {unit:?}")))?;
            if c != frame.unit {
                return Err(FrameDocError::Mismatch { field: "unit" });
            }
        }
        if let Some(u) = &self.local_only_unit {
            if Some(parse_polynomial(u, &vars)?) != frame.local_unit {
                return Err(FrameDocError::Mismatch {
                    field: "local_only_unit",
                });
            }
        }
        if let Some(sc) = &self.structure_constants {
            let ok = sc.len() == n
                && sc.iter().enumerate().all(|(i, r)| {
                    r.len() == n
                        && r.iter().enumerate().all(|(j, c)| {
                            c.len() == n
                                && c.iter().enumerate().all(|(k, s)| {
                                    parse_polynomial(s, &vars)
                                        .is_ok_and(|p| p == frame.structure[i][j][k])
                                })
                        })
                });
            if !ok {
                return Err(FrameDocError::Mismatch {
                    field: "structure_constants",
                });
            }
        }
        Ok(frame)
    }
}
