use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use logdiff::groebner::{buchberger, perversity_certificate, MonomialOrder};
use logdiff::{parse_polynomial, DiffOp, Rewriter, VarTable};
use logdiff_bench::{frame, pbw_forms};

fn normal_form(c: &mut Criterion) {
    for name in ["cusp", "normal-crossing-3", "moving-four-lines"] {
        let (_, fr) = frame(name);
        let forms = pbw_forms(&fr, 20, 1);
        let ops: Vec<DiffOp> = {
            let mut rw = Rewriter::new(&fr);
            forms.iter().map(|w| rw.expand(w)).collect()
        };
        c.bench_function(&format!("normal_form/{name}"), |b| {
            b.iter(|| {
                let mut rw = Rewriter::new(&fr);
                for op in &ops {
                    black_box(rw.normal_form(op).unwrap());
                }
            })
        });
    }
}

fn groebner(c: &mut Criterion) {
    let v = VarTable::parse_list("x,y,z").unwrap();
    let gens: Vec<_> = ["x^2*y - z", "x*y^2 - x", "y*z^2 - x*y + 1"]
        .iter()
        .map(|s| parse_polynomial(s, &v).unwrap())
        .collect();
    for order in [MonomialOrder::degrevlex(), MonomialOrder::lex()] {
        c.bench_function(&format!("buchberger/{order}"), |b| b.iter(|| black_box(buchberger(&gens, &order))));
    }
}

fn perversity(c: &mut Criterion) {
    for (vars, f) in [("x,y", "x^2 - y^3"), ("x,y,t", "x*y*(x + y)*(y + t*x)")] {
        let v = VarTable::parse_list(vars).unwrap();
        let f = parse_polynomial(f, &v).unwrap();
        c.bench_function(&format!("perversity/{}", f.display(&v)), |b| {
            b.iter(|| black_box(perversity_certificate(&f, 12, None).unwrap()))
        });
    }
}

criterion_group!(benches, normal_form, groebner, perversity);
criterion_main!(benches);
