use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use stringalg::bands::{bridge_quiver, enumerate_bands};
use stringalg::homs::hom_basis;
use stringalg::module::{band_module, string_module};
use stringalg::ringel::{enumerate_ringel_list, pp_member, pp_oracle};
use stringalg::words::{all_words, compare};
use stringalg::*;

fn arc(src: &str) -> Arc<StringAlgebra> {
    Arc::new(StringAlgebra::parse(src).unwrap())
}

fn bands(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumerate_bands");
    for (name, src) in corpus::ALL {
        let a = arc(src);
        g.bench_with_input(BenchmarkId::from_parameter(name), &a, |b, a| b.iter(|| enumerate_bands(a, 8)));
    }
    g.finish();
    let a = arc(corpus::LAMBDA2);
    c.bench_function("bridge_quiver/lambda2", |b| b.iter(|| bridge_quiver(&a, None).unwrap()));
}

fn order(c: &mut Criterion) {
    let a = arc(corpus::LAMBDA2);
    let h = HPartition::lexicographic(&a);
    let ws: Vec<AnyWord> = all_words(&a, 6).into_iter().map(AnyWord::from).collect();
    c.bench_function("compare/lambda2_all_pairs_len6", |b| {
        b.iter(|| {
            let mut n = 0usize;
            for x in &ws {
                for y in &ws {
                    if x.anchor() == y.anchor() && compare(&a, &h, x, y).is_ok() {
                        n += 1;
                    }
                }
            }
            n
        })
    });
}

fn modules(c: &mut Criterion) {
    let a = arc(corpus::LAMBDA2);
    let h = HPartition::lexicographic(&a);
    let w = Word::parse(&a, None, "d^-1 e g a b^-1 a b^-1").unwrap();
    let m: FDModule<Q> = string_module(&a, &w);
    let x = m.basis_element(3);
    c.bench_function("right_word/lambda2_string", |b| b.iter(|| m.right_word(&h, &x).unwrap()));
    c.bench_function("is_homogeneous/lambda2_string", |b| b.iter(|| m.is_homogeneous(&h, &x).unwrap()));

    let k = arc(corpus::KRONECKER);
    let band = &enumerate_bands(&k, 2).bands[0];
    let big: FDModule<Q> = band_module(&k, band, Q::from_i64(2), 4).unwrap();
    let s: FDModule<Q> = string_module(&k, &Word::parse(&k, None, "a b^-1 a b^-1 a").unwrap());
    c.bench_function("hom_basis/kronecker_string_to_band", |b| b.iter(|| hom_basis(&s, &big).unwrap()));
}

fn ringel(c: &mut Criterion) {
    let a = arc(corpus::R1);
    let h = HPartition::from_assignment(&a, &corpus::R1_B_FIRST).unwrap();
    let w = TwoSidedWord::parse(&a, &h, None, corpus::R1_BIPERIODIC).unwrap();
    let cw = Word::parse(&a, None, "a b^-1").unwrap();
    let dw = Word::parse(&a, None, "b a b^-1").unwrap();
    c.bench_function("pp_member/r1", |b| b.iter(|| pp_member(&a, &h, &w, &cw, &dw).unwrap()));
    let f = PPWordFormula::Both(cw.clone(), dw.clone());
    c.bench_function("pp_oracle/r1", |b| b.iter(|| pp_oracle::<Q>(&a, &h, &w, std::slice::from_ref(&f)).unwrap()));
    let l = arc(corpus::LAMBDA2);
    let hl = HPartition::lexicographic(&l);
    c.bench_function("ringel_list/lambda2_2_2", |b| b.iter(|| enumerate_ringel_list::<Q>(&l, &hl, 2, 2).unwrap()));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(20);
    targets = bands, order, modules, ringel
}
criterion_main!(benches);
