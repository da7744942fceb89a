use std::cmp::Ordering;
use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use stringalg::bands::domestic_bands;
use stringalg::linalg::Subspace;
use stringalg::module::{band_module, string_module, words_in_chain};
use stringalg::ringel::{oracle_truncation, pp_member, truncate};
use stringalg::suites::{naive_compare, ChainWords, ModuleSampler};
use stringalg::words::compare;
use stringalg::*;

fn arc(src: &str) -> Arc<StringAlgebra> {
    Arc::new(StringAlgebra::parse(src).unwrap())
}

fn corpus_algebra() -> impl Strategy<Value = Arc<StringAlgebra>> {
    (0..corpus::ALL.len()).prop_map(|i| arc(corpus::ALL[i].1))
}

fn r1_query(a: &StringAlgebra) -> (HPartition, TwoSidedWord) {
    let h = HPartition::from_assignment(a, &corpus::R1_B_FIRST).unwrap();
    let w = TwoSidedWord::parse(a, &h, None, corpus::R1_BIPERIODIC).unwrap();
    (h, w)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn order_is_a_total_order(a in corpus_algebra(), seed in any::<u64>()) {
        let h = HPartition::lexicographic(&a);
        let chains = ChainWords::new(&a, &h, 5);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (s, side) = chains.random_chain(&mut rng);
        let ws: Vec<AnyWord> = (0..3).map(|_| chains.sample(s, side, &mut rng)).collect();
        let c = |x: &AnyWord, y: &AnyWord| compare(&a, &h, x, y).unwrap();
        for x in &ws {
            for y in &ws {
                prop_assert_eq!(c(x, y), naive_compare(x, y));
                prop_assert_eq!(c(x, y), c(y, x).reverse());
                for z in &ws {
                    if c(x, y).is_le() && c(y, z).is_le() {
                        prop_assert!(c(x, z).is_le());
                    }
                }
            }
        }
    }

    #[test]
    fn pp_subspaces_shrink_as_words_grow(a in corpus_algebra(), seed in any::<u64>(), i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let h = HPartition::lexicographic(&a);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m: FDModule<Q> = ModuleSampler::new(&a, 4).any(&mut rng);
        let chains = ChainWords::new(&a, &h, 4);
        let (s, side) = chains.random_chain(&mut rng);
        let ws = chains.words(s, side);
        let (x, y) = (&ws[i.index(ws.len())], &ws[j.index(ws.len())]);
        let (lo, hi) = if compare(&a, &h, &x.clone().into(), &y.clone().into()).unwrap() == Ordering::Greater { (y, x) } else { (x, y) };
        prop_assert!(m.pp_subspace(&h, lo).contains_space(&m.pp_subspace(&h, hi)));
    }

    #[test]
    fn word_of_a_sum_is_at_least_the_minimum(a in corpus_algebra(), seed in any::<u64>()) {
        let h = HPartition::lexicographic(&a);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gen = ModuleSampler::new(&a, 4);
        let m: FDModule<Q> = gen.any(&mut rng);
        let x = gen.element(&m, &mut rng).unwrap();
        let y = gen.element_at(&m, x.vertex, &mut rng).unwrap();
        let sum = x.add(&y).unwrap();
        prop_assume!(!sum.is_zero());
        let (v1, v2, vs) = (m.right_word(&h, &x).unwrap(), m.right_word(&h, &y).unwrap(), m.right_word(&h, &sum).unwrap());
        let c = |p: &AnyWord, q: &AnyWord| compare(&a, &h, p, q).unwrap();
        let min = if c(&v1, &v2).is_le() { &v1 } else { &v2 };
        prop_assert!(c(&vs, min).is_ge());
        if c(&v1, &v2) != Ordering::Equal {
            prop_assert_eq!(c(&vs, min), Ordering::Equal);
        }
    }

    #[test]
    fn first_band_layer_is_a_submodule(b in 0usize..4, lambda in 1i64..5, k in 1usize..4) {
        let a = arc(corpus::LAMBDA2);
        let bands = domestic_bands(&a).unwrap();
        let band = &bands[b % bands.len()];
        let m: FDModule<Q> = band_module(&a, band, Q::from_i64(lambda), k).unwrap();
        let one: FDModule<Q> = band_module(&a, band, Q::from_i64(lambda), 1).unwrap();
        for v in 0..a.num_vertices() {
            let layer = |at: usize| -> Subspace<Q> {
                Subspace::span(m.dims()[at], m.nodes().iter().filter(|n| n.vertex.0 == at && n.label.ends_with("^1")).map(|n| m.basis_element(m.nodes().iter().position(|x| x == n).unwrap()).coords))
            };
            prop_assert_eq!(layer(v).dim(), one.dims()[v]);
            for (arrow, map) in m.maps().iter().enumerate() {
                let (src, tgt) = (a.arrows[arrow].source.0, a.arrows[arrow].target.0);
                if src == v {
                    prop_assert!(layer(tgt).contains_space(&layer(src).image(map)));
                }
            }
        }
    }

    #[test]
    fn pp_member_is_antitone(i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>(), k in any::<prop::sample::Index>()) {
        let a = arc(corpus::R1);
        let (h, w) = r1_query(&a);
        let cs = words_in_chain(&a, &h, w.anchor(), h.side_of_any(w.left()), 5);
        let ds = words_in_chain(&a, &h, w.anchor(), h.side_of_any(w.right()), 5);
        let c = &cs[i.index(cs.len())];
        let (d1, d2) = (&ds[j.index(ds.len())], &ds[k.index(ds.len())]);
        let (lo, hi) = if compare(&a, &h, &d1.clone().into(), &d2.clone().into()).unwrap().is_le() { (d1, d2) } else { (d2, d1) };
        if pp_member(&a, &h, &w, c, hi).unwrap() == Verdict::InType {
            prop_assert_eq!(pp_member(&a, &h, &w, c, lo).unwrap(), Verdict::InType);
        }
        let (c1, c2) = (&cs[j.index(cs.len())], &cs[k.index(cs.len())]);
        let (lo, hi) = if compare(&a, &h, &c1.clone().into(), &c2.clone().into()).unwrap().is_le() { (c1, c2) } else { (c2, c1) };
        let d = &ds[i.index(ds.len())];
        if pp_member(&a, &h, &w, hi, d).unwrap() == Verdict::InType {
            prop_assert_eq!(pp_member(&a, &h, &w, lo, d).unwrap(), Verdict::InType);
        }
    }

    #[test]
    fn truncations_are_nested(n in 0usize..6, oracle in any::<bool>()) {
        let a = arc(corpus::R1);
        let (h, w) = r1_query(&a);
        let cut = |n| if oracle { oracle_truncation(&a, &w, n) } else { truncate(&a, &h, &w, n) };
        let (small, ks) = cut(n);
        let (big, kb) = cut(n + 1);
        prop_assert!(kb >= ks);
        let off = kb - ks;
        prop_assert!(big.len() >= off + small.len());
        prop_assert_eq!(&big.letters()[off..off + small.len()], small.letters());
        let m: FDModule<Q> = string_module(&a, &big);
        prop_assert_eq!(m.dim(), big.len() + 1);
    }
}
