//! Worked examples checked against computations that avoid the code under
//! test: operators are compared through their action on monomials, and
//! dimensions through counts of standard monomials or explicit components.

use logdiff::complexes::spencer_complex;
use logdiff::corpus::{self, random_polynomial};
use logdiff::groebner::{buchberger, ideal_dimension, log_derivations, MonomialOrder};
use logdiff::logder::{determinant, lie_bracket};
use logdiff::logops::{
    decompose_symbol, meromorphic_shift, poisson_bracket, symbol_chain, v0_membership_witness, SymbolError,
};
use logdiff::manifest::by_name;
use logdiff::{parse_operator, parse_polynomial, DiffOp, Monomial, Polynomial, Rewriter, VarTable};

fn v2() -> VarTable {
    VarTable::parse_list("x,y").unwrap()
}

fn p(s: &str, v: &VarTable) -> Polynomial {
    parse_polynomial(s, v).unwrap()
}

fn op(s: &str, v: &VarTable) -> DiffOp {
    parse_operator(s, v).unwrap()
}

/// Exponent vectors of length `len` and total degree at most `deg`.
fn exponent_vectors(len: usize, deg: u32) -> Vec<Vec<u16>> {
    fn rec(n: usize, deg: u32, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        let used: u32 = cur.iter().map(|&e| e as u32).sum();
        for e in 0..=(deg - used) {
            cur.push(e as u16);
            rec(n, deg, cur, out);
            cur.pop();
        }
    }
    let mut exps = Vec::new();
    rec(len, deg, &mut Vec::new(), &mut exps);
    exps
}

/// Monomials in the base variables up to degree `deg`.
fn test_functions(n: usize, deg: u32) -> Vec<Polynomial> {
    exponent_vectors(n, deg)
        .into_iter()
        .map(|mut e| {
            e.resize(2 * n, 0);
            Polynomial::term(n, Monomial::from_exponents(&e), num_rational::BigRational::from_integer(1.into()))
        })
        .collect()
}

/// An operator of order `<= d` is determined by its values on monomials of
/// degree `<= d`.
fn same_action(a: &DiffOp, b: &DiffOp, d: u32) -> bool {
    test_functions(a.n(), d).iter().all(|g| a.apply(g) == b.apply(g))
}

#[test]
fn weyl_products_by_action() {
    let v = VarTable::parse_list("x").unwrap();
    let xdx = op("x*d_x", &v);
    // x d_x (x d_x g) = x^2 g'' + x g'
    let want = op("x^2*d_x^2 + x*d_x", &v);
    assert!(same_action(&xdx.compose(&xdx), &want, 4));
    assert_eq!(xdx.compose(&xdx), want);
    let c = op("x^2*d_x^2", &v).commutator(&DiffOp::function(p("x", &v)));
    assert!(same_action(&c, &op("2*x^2*d_x", &v), 4));
    assert_eq!(op("x^2*d_x^2", &v).apply(&p("x^2", &v)), p("2*x^2", &v));
    // parsing an unordered product normal-orders it
    assert_eq!(op("x*d_x*x*d_x", &v), want);
}

#[test]
fn cusp_frame_by_hand() {
    let v = v2();
    let (_, fr) = by_name("cusp").unwrap().frame().unwrap();
    // det [[3x, 2y], [3y^2, 2x]] = 6x^2 - 6y^3
    assert_eq!(*fr.det(), p("6*x^2 - 6*y^3", &v));
    let d1 = &fr.basis()[0];
    let d2 = &fr.basis()[1];
    // (3y^2 d_x + 2x d_y)(x^2 - y^3) = 6xy^2 - 6xy^2
    assert!(d2.apply(fr.divisor()).is_zero());
    let br = lie_bracket(d1, d2);
    assert!(same_action(&br.to_diffop(), &d1.to_diffop().commutator(&d2.to_diffop()), 3));
    assert_eq!(br, d2.clone());
    assert!(fr.structure_constant(0, 1, 0).is_zero());
    assert!(fr.structure_constant(0, 1, 1).is_one());
}

#[test]
fn determinants_against_cas_values() {
    // values computed with an independent CAS
    let v = VarTable::parse_list("x,y,z").unwrap();
    let m: Vec<Vec<Polynomial>> = [["x", "y", "1"], ["y^2", "x*z", "z"], ["1", "x + y", "x*y"]]
        .iter()
        .map(|r| r.iter().map(|s| p(s, &v)).collect())
        .collect();
    assert_eq!(
        determinant(&m),
        p("x^3*y*z - x^2*z - x*y^4 + x*y^2 - x*y*z - x*z + y^3 + y*z", &v)
    );
}

#[test]
fn poisson_and_chains_by_hand() {
    let v = VarTable::parse_list("x").unwrap();
    let x = p("x", &v);
    assert_eq!(poisson_bracket(&p("x^2*xi_x^2", &v), &x), p("2*x^2*xi_x", &v));
    let chain = symbol_chain(&p("x^2*xi_x^2", &v), &x).unwrap();
    assert_eq!(chain.chain(), &[p("x^2*xi_x^2", &v), p("2*x*xi_x", &v), p("2", &v)]);
    assert!(matches!(
        symbol_chain(&p("x*xi_x^2", &v), &x),
        Err(SymbolError::ChainFailure { k: 1, .. })
    ));
}

#[test]
fn decomposition_by_hand_and_by_linear_solve() {
    let v = v2();
    let (_, fr) = by_name("normal-crossing-2").unwrap().frame().unwrap();
    let chain = symbol_chain(&p("x^2*xi_x^2", &v), fr.divisor()).unwrap();
    let h = decompose_symbol(&chain, &fr).unwrap();
    // G = (2x xi_x, 0), H = G / 2
    assert_eq!(h[0], vec![p("x*xi_x", &v), Polynomial::zero(2)]);

    // first-order symbols: R_0 = sum c_j sigma_j has the unique solution c
    for name in ["normal-crossing-2", "cusp", "three-lines", "moving-four-lines"] {
        let (_, fr) = by_name(name).unwrap().frame().unwrap();
        let mut rng = corpus::rng(11);
        for _ in 0..5 {
            let c: Vec<Polynomial> = (0..fr.n()).map(|_| random_polynomial(&mut rng, fr.n(), 2, 3)).collect();
            let mut r0 = Polynomial::zero(fr.n());
            for (cj, sj) in c.iter().zip(fr.symbols()) {
                r0.add_assign_ref(&(cj * &sj));
            }
            let chain = symbol_chain(&r0, fr.divisor()).unwrap();
            assert_eq!(decompose_symbol(&chain, &fr).unwrap()[0], c, "{name}");
        }
    }
}

#[test]
fn normal_forms_and_power_tests() {
    let v = v2();
    let (_, fr) = by_name("normal-crossing-2").unwrap().frame().unwrap();
    let mut rw = Rewriter::new(&fr);
    let w = rw.normal_form(&op("x^2*d_x^2", &v)).unwrap();
    // delta_1^2 = x^2 d_x^2 + x d_x
    let d1 = op("x*d_x", &v);
    assert!(same_action(&(&d1.compose(&d1) - &d1), &op("x^2*d_x^2", &v), 4));
    assert_eq!(rw.expand(&w), op("x^2*d_x^2", &v));

    let v1 = VarTable::parse_list("x").unwrap();
    let x = p("x", &v1);
    assert!(v0_membership_witness(&op("x^2*d_x^2", &v1), &x).passed());
    let r = v0_membership_witness(&op("x*d_x^2", &v1), &x);
    assert_eq!(r.failure, Some((2, p("2*x", &v1))));
}

#[test]
fn shifts_by_hand() {
    let v = VarTable::parse_list("x").unwrap();
    let (_, fr) = by_name("normal-crossing-1").unwrap().frame().unwrap();
    let mut rw = Rewriter::new(&fr);
    let xdx = op("x*d_x", &v);
    // x d_x x = x (x d_x + 1), x d_x x^2 = x^2 (x d_x + 2)
    for (pp, q) in [(1, "x*d_x + 1"), (2, "x*d_x + 2")] {
        let s = meromorphic_shift(&xdx, pp, &mut rw).unwrap();
        assert_eq!(s.k, pp);
        assert_eq!(rw.expand(&s.q), op(q, &v));
        let x_p = DiffOp::function(p("x", &v).pow(pp));
        assert!(same_action(&xdx.compose(&x_p), &x_p.compose(&op(q, &v)), 4));
    }
    let g = op("x^2 + 3", &v);
    let s = meromorphic_shift(&g, 2, &mut rw).unwrap();
    assert_eq!((rw.expand(&s.q), s.k), (g, 2));
}

/// Monomials of degree `d` in `m` variables avoiding the given monomials
/// as divisors.
fn standard_count(m: usize, d: u32, avoid: &[Vec<u16>]) -> usize {
    exponent_vectors(m, d)
        .iter()
        .filter(|e| e.iter().map(|&x| x as u32).sum::<u32>() == d)
        .filter(|e| !avoid.iter().any(|a| a.iter().zip(e.iter()).all(|(x, y)| y >= x)))
        .count()
}

#[test]
fn dimension_of_coordinate_planes_by_counting() {
    let v = v2();
    let gb = buchberger(&[p("x*xi_x", &v), p("y*xi_y", &v)], &MonomialOrder::degrevlex());
    assert_eq!(ideal_dimension(&gb), Ok(2));
    // variables ordered x, y, xi_x, xi_y. Standard monomials of degree d
    // number 4d, so the Hilbert polynomial has degree 1 = dim - 1.
    let avoid = vec![vec![1, 0, 1, 0], vec![0, 1, 0, 1]];
    let h: Vec<usize> = [8, 16, 24].iter().map(|&d| standard_count(4, d, &avoid)).collect();
    assert_eq!(h, vec![32, 64, 96]);
}

#[test]
fn moving_four_lines_symbols_vanish_on_a_four_dimensional_set() {
    let v = VarTable::parse_list("x,y,t").unwrap();
    let f = p("x*y*(x + y)*(y + t*x)", &v);
    let b = log_derivations(&f).unwrap();
    let sigmas = b.frame.symbols();
    // all symbols vanish on {x = y = 0}, a 4-dimensional subspace of the
    // 6-dimensional cotangent space, so the ideal has height < 3
    let zero = Polynomial::zero(3);
    let mut subst: Vec<Polynomial> = (0..6).map(|i| Polynomial::var(3, i)).collect();
    subst[0] = zero.clone();
    subst[1] = zero.clone();
    for s in &sigmas {
        let mut r = Polynomial::zero(3);
        for (m, c) in s.terms() {
            if m.get(0) == 0 && m.get(1) == 0 {
                r.add_term(m.clone(), c.clone());
            }
        }
        assert!(r.is_zero(), "{}", s.display(&v));
    }
    assert!(spencer_complex(&b.frame).check_zero_composition().is_ok());
}
