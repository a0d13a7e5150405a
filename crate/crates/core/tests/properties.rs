use proptest::prelude::*;

use logdiff::complexes::{koszul_complex, spencer_complex};
use logdiff::corpus::{self, random_diffop, random_pbw_form, random_polynomial};
use logdiff::groebner::{buchberger, module_syzygies, polynomial_gcd, MonomialOrder};
use logdiff::logforms::{dual_basis, LogForm};
use logdiff::logops::meromorphic_shift_right;
use logdiff::manifest::{bundled, by_name};
use logdiff::{parse_operator, parse_polynomial, DiffOp, Polynomial, Rewriter, VarTable};

fn polys(seed: u64, n: usize, count: usize, deg: u32) -> Vec<Polynomial> {
    let mut rng = corpus::rng(seed);
    (0..count).map(|_| random_polynomial(&mut rng, n, deg, 4)).collect()
}

fn vars(n: usize) -> VarTable {
    VarTable::parse_list(&["x", "y", "z"][..n].join(",")).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn polynomial_ring_axioms(seed in any::<u64>(), n in 1usize..=3) {
        let p = polys(seed, n, 3, 3);
        let (a, b, c) = (&p[0], &p[1], &p[2]);
        prop_assert_eq!(a * b, b * a);
        prop_assert_eq!(&(a * b) * c, a * &(b * c));
        prop_assert_eq!(a * &(b + c), &(a * b) + &(a * c));
        prop_assert!((a - a).is_zero());
    }

    #[test]
    fn exact_division_inverts_multiplication(seed in any::<u64>(), n in 1usize..=3) {
        let p = polys(seed, n, 2, 3);
        let prod = &p[0] * &p[1];
        prop_assert_eq!(prod.exact_divide(&p[1]).unwrap(), p[0].clone());
        let (q, r) = (&prod + &p[0]).div_rem(&p[1]);
        prop_assert_eq!(&(&q * &p[1]) + &r, &prod + &p[0]);
    }

    #[test]
    fn polynomial_display_parses_back(seed in any::<u64>(), n in 1usize..=3) {
        let v = vars(n);
        for p in polys(seed, n, 3, 4) {
            let s = p.display(&v).to_string();
            prop_assert_eq!(parse_polynomial(&s, &v).unwrap(), p);
        }
    }

    #[test]
    fn operator_display_parses_back(seed in any::<u64>(), n in 1usize..=3) {
        let v = vars(n);
        let op = random_diffop(&mut corpus::rng(seed), n, 3, 2, 5);
        let s = op.display(&v).to_string();
        prop_assert_eq!(parse_operator(&s, &v).unwrap(), op);
    }

    #[test]
    fn composition_is_associative_and_acts(seed in any::<u64>(), n in 1usize..=2) {
        let mut rng = corpus::rng(seed);
        let a = random_diffop(&mut rng, n, 2, 2, 3);
        let b = random_diffop(&mut rng, n, 2, 2, 3);
        let c = random_diffop(&mut rng, n, 2, 2, 3);
        prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
        let g = random_polynomial(&mut rng, n, 3, 4);
        prop_assert_eq!(a.compose(&b).apply(&g), a.apply(&b.apply(&g)));
        let fb = DiffOp::function(g.clone());
        prop_assert_eq!(DiffOp::d(n, 0).commutator(&fb), DiffOp::function(g.dx(0)));
    }

    #[test]
    fn xi_components_sum_to_the_whole(seed in any::<u64>()) {
        let op = random_diffop(&mut corpus::rng(seed), 2, 3, 2, 5);
        let full = op.full_symbol();
        let mut sum = Polynomial::zero(2);
        for (d, c) in full.xi_homogeneous_components() {
            prop_assert!(c.is_xi_homogeneous(d));
            sum.add_assign_ref(&c);
        }
        prop_assert_eq!(sum, full);
    }

    #[test]
    fn pbw_round_trip_on_every_frame(seed in any::<u64>()) {
        for m in bundled() {
            let (_, fr) = m.frame().unwrap();
            let mut rw = Rewriter::new(&fr);
            let w = random_pbw_form(&mut corpus::rng(seed), fr.n(), 3, 2, 3);
            let op = rw.expand(&w);
            prop_assert_eq!(rw.normal_form(&op).unwrap(), w);
        }
    }

    #[test]
    fn shift_identity(seed in any::<u64>(), p in 1u32..=2) {
        let (_, fr) = by_name("cusp").unwrap().frame().unwrap();
        let mut rw = Rewriter::new(&fr);
        let w = random_pbw_form(&mut corpus::rng(seed), 2, 2, 2, 3);
        let op = rw.expand(&w);
        let sh = meromorphic_shift_right(&op, p, &mut rw).unwrap();
        let f = fr.divisor();
        prop_assert!(sh.k <= p);
        prop_assert_eq!(
            rw.expand(&sh.q).compose(&DiffOp::function(f.pow(p))),
            DiffOp::function(f.pow(sh.k)).compose(&op)
        );
    }

    #[test]
    fn groebner_basis_is_stable_and_contains_generators(seed in any::<u64>()) {
        let gens = polys(seed, 2, 3, 2);
        for order in [MonomialOrder::degrevlex(), MonomialOrder::lex()] {
            let gb = buchberger(&gens, &order);
            for g in &gens {
                prop_assert!(gb.contains(g));
            }
            let again = buchberger(gb.generators(), &order);
            prop_assert_eq!(again.generators(), gb.generators());
        }
    }

    #[test]
    fn syzygies_are_syzygies(seed in any::<u64>()) {
        let gens = polys(seed, 2, 3, 2);
        for s in module_syzygies(&gens, None).unwrap() {
            let mut sum = Polynomial::zero(2);
            for (c, g) in s.iter().zip(&gens) {
                sum.add_assign_ref(&(c * g));
            }
            prop_assert!(sum.is_zero());
        }
    }

    #[test]
    fn gcd_divides_and_absorbs_common_factors(seed in any::<u64>()) {
        let p = polys(seed, 2, 3, 2);
        prop_assume!(p.iter().all(|q| !q.is_constant()));
        let a = &p[0] * &p[2];
        let b = &p[1] * &p[2];
        let g = polynomial_gcd(&a, &b);
        prop_assert!(a.exact_divide(&g).is_ok());
        prop_assert!(b.exact_divide(&g).is_ok());
        prop_assert!(g.exact_divide(&p[2].monic()).is_ok());
    }

    #[test]
    fn exterior_derivative_squares_to_zero(seed in any::<u64>()) {
        let (_, fr) = by_name("cusp").unwrap().frame().unwrap();
        let dual = dual_basis(&fr).unwrap();
        let mut rng = corpus::rng(seed);
        let w: LogForm = corpus::random_log_form(&mut rng, &fr, &dual, 0, 3);
        prop_assert!(w.exterior_derivative().exterior_derivative().is_zero());
        let a = corpus::random_log_form(&mut rng, &fr, &dual, 1, 2);
        let b = corpus::random_log_form(&mut rng, &fr, &dual, 1, 2);
        prop_assert!(a.wedge(&b).add(&b.wedge(&a)).is_zero());
    }

    #[test]
    fn koszul_of_anything_is_a_complex(seed in any::<u64>(), m in 1usize..=4) {
        let gens = polys(seed, 2, m, 2);
        prop_assert!(koszul_complex(&gens).check_zero_composition().is_ok());
    }
}

#[test]
fn spencer_complexes_of_bundled_frames() {
    for m in bundled() {
        let (_, fr) = m.frame().unwrap();
        assert!(spencer_complex(&fr).check_zero_composition().is_ok(), "{}", m.name);
    }
}
