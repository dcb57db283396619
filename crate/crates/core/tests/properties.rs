mod common;

use common::*;
use fatf_core::linalg::{snf, vec_sub, Matrix};
use fatf_core::parse::{endomorphism_from_json, endomorphism_to_json, parse_element, parse_hnn, parse_word};
use fatf_core::{verify, Decision, FatfElement, HnnGroup, Int, IntMatrix, LogSet, Signature, Solver, Word};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::Rng;

fn letters(n: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((1..=n as i32, any::<bool>()), 0..=max_len)
        .prop_map(move |ls| Word::new(n, ls.into_iter().map(|(g, inv)| if inv { -g } else { g })).unwrap())
}

fn elements(sig: Signature) -> impl Strategy<Value = FatfElement> {
    (letters(sig.n, 8), prop::collection::vec(-50i64..=50, sig.m))
        .prop_map(|(w, a)| FatfElement::new(w, a.into_iter().map(Int::from).collect()))
}

fn int_matrix(rows: usize, cols: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(-6i64..=6, rows * cols)
        .prop_map(move |v| Matrix::from_fn(rows, cols, |i, j| Int::from(v[i * cols + j])))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn element_text_round_trips(g in elements(Signature::new(3, 2))) {
        let back = parse_element(&g.to_string(), g.signature()).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn word_text_round_trips(w in letters(3, 12)) {
        prop_assert_eq!(parse_word(&w.to_string(), 3).unwrap(), w);
    }

    #[test]
    fn cyclic_reduction_recomposes(w in letters(2, 12)) {
        let d = w.cyclic_reduce();
        prop_assert!(d.core.is_cyclically_reduced());
        prop_assert_eq!(d.core.conjugate_by(&d.conjugator), w);
    }

    #[test]
    fn conjugacy_witnesses_verify(u in letters(2, 8), z in letters(2, 6)) {
        let v = u.conjugate_by(&z);
        let c = u.is_conjugate(&v).expect("conjugate by construction");
        prop_assert_eq!(u.conjugate_by(&c), v);
    }

    #[test]
    fn endomorphism_documents_round_trip(seed in any::<u64>(), ty in 1u8..=2) {
        let mut rng = rng(seed);
        let phi = random_endo(&mut rng, ty, 4);
        prop_assert_eq!(endomorphism_from_json(&endomorphism_to_json(&phi)).unwrap(), phi);
    }

    #[test]
    fn composition_is_sequential_application(seed in any::<u64>(), ta in 1u8..=2, tb in 1u8..=2) {
        let mut rng = rng(seed);
        let a = random_endo(&mut rng, ta, 3);
        let sig = a.signature();
        let b = if tb == 1 || sig.n < 2 || sig.m == 0 { type_i(&mut rng, sig, 3) } else { type_ii(&mut rng, sig, 3) };
        let ab = a.compose(&b).unwrap();
        for _ in 0..4 {
            let g = element(&mut rng, sig, 4, 3);
            prop_assert_eq!(ab.apply(&g).unwrap(), b.apply(&a.apply(&g).unwrap()).unwrap());
        }
    }

    #[test]
    fn smith_form_is_valid(a in int_matrix(3, 4)) {
        let s = snf(&a);
        prop_assert_eq!(&(&s.u * &a) * &s.v, s.d.clone());
        prop_assert!(s.u.determinant().abs().is_one());
        prop_assert!(s.v.determinant().abs().is_one());
        let d = s.diagonal();
        for i in 0..d.len() {
            prop_assert!(!d[i].is_negative());
            if i + 1 < d.len() && !d[i].is_zero() {
                prop_assert!(d[i + 1].is_multiple_of(&d[i]));
            }
            prop_assert_eq!(!d[i].is_zero(), i < s.rank);
        }
    }

    /// Free solution pairs are closed under `(r, s) ↦ (r + 1, s + 1)`, and for
    /// free-conjugate pairs the abelian gap is multiplied by `Q`.
    #[test]
    fn pushing_and_descent(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let sig = Signature::new(rng.gen_range(1..=3), rng.gen_range(0..=2));
        let phi = injective_type_i(&mut rng, sig, 3);
        let q = phi.as_type_i().unwrap().q().clone();
        let g = element(&mut rng, sig, 3, 2);
        let z = element(&mut rng, sig, 3, 2);
        let h = phi.apply(&g).unwrap().conjugate_by(&z);
        let a = orbit_capped(&phi, &g, 4, usize::MAX);
        let b = orbit_capped(&phi, &h, 4, usize::MAX);
        for r in 0..4 {
            for s in 0..4 {
                if a[r].free().is_conjugate(b[s].free()).is_some() {
                    prop_assert!(a[r + 1].free().is_conjugate(b[s + 1].free()).is_some());
                    let gap = vec_sub(a[r].ab(), b[s].ab());
                    prop_assert_eq!(vec_sub(a[r + 1].ab(), b[s + 1].ab()), q.left_mul(&gap));
                }
            }
        }
    }

    #[test]
    fn planted_brinkmann_instances_are_never_refuted(seed in any::<u64>(), ty in 1u8..=2, k in 0u64..4) {
        let mut rng = rng(seed);
        let phi = random_endo(&mut rng, ty, 3);
        let g = element(&mut rng, phi.signature(), 4, 3);
        let Ok(h) = phi.iterate(&g, k) else { return Ok(()) };
        let solver = Solver::default();
        match solver.brp(&phi, &g, &h).unwrap() {
            Decision::Yes(j) => prop_assert!(j <= k && verify::brp(&phi, &g, &h, j)),
            Decision::No(c) => prop_assert!(false, "planted instance refuted: {c:?}"),
            Decision::Unknown(_) => {}
        }
        let z = element(&mut rng, phi.signature(), 3, 2);
        let hc = h.conjugate_by(&z);
        match solver.brcp(&phi, &g, &hc).unwrap() {
            Decision::Yes(j) => prop_assert!(j <= k && verify::brcp(&phi, &g, &hc, j)),
            Decision::No(c) => prop_assert!(false, "planted instance refuted: {c:?}"),
            Decision::Unknown(_) => {}
        }
    }

    #[test]
    fn planted_twisted_conjugacy_is_never_refuted(seed in any::<u64>(), ty in 1u8..=2) {
        let mut rng = rng(seed);
        let phi = random_endo(&mut rng, ty, 2);
        let sig = phi.signature();
        let g = element(&mut rng, sig, 3, 2);
        let z = element(&mut rng, sig, 3, 2);
        let h = &(&phi.apply(&z).unwrap().inverse() * &g) * &z;
        match Solver::default().tcp(&phi, &g, &h).unwrap() {
            Decision::Yes(w) => prop_assert!(verify::twisted_conjugator(&phi, &g, &h, &w)),
            Decision::No(c) => prop_assert!(false, "planted instance refuted: {c:?}"),
            Decision::Unknown(_) => {}
        }
    }

    /// A computed log set agrees with direct iteration.
    #[test]
    fn log_sets_match_iteration(seed in any::<u64>(), conj in any::<bool>()) {
        let mut rng = rng(seed);
        let sig = Signature::new(rng.gen_range(1..=2), rng.gen_range(0..=2));
        let phi = injective_type_i(&mut rng, sig, 2);
        let g = element(&mut rng, sig, 3, 2);
        let h = phi.iterate(&g, rng.gen_range(0..3)).unwrap();
        if let Decision::Yes(ls) = Solver::default().philog(&phi, &g, &h, conj).unwrap() {
            prop_assert!(ls != LogSet::Empty);
            prop_assert!(verify::log_set(&phi, &g, &h, &ls, conj, 8));
        }
    }

    #[test]
    fn hnn_text_round_trips(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let sig = Signature::new(rng.gen_range(1..=2), rng.gen_range(0..=2));
        let group = HnnGroup::new(injective_type_i(&mut rng, sig, 2)).unwrap();
        let g = element(&mut rng, sig, 4, 3);
        let e = group.normalize(rng.gen_range(0..3), g, rng.gen_range(0..3)).unwrap();
        prop_assert_eq!(parse_hnn(&e.to_string(), &group).unwrap(), e);
    }
}

#[test]
fn generated_element_corpus_round_trips() {
    let mut rng = rng(11);
    for _ in 0..100 {
        let sig = Signature::new(rng.gen_range(1..=4), rng.gen_range(0..=3));
        let g = element(&mut rng, sig, 10, 1000);
        assert_eq!(parse_element(&g.to_string(), sig).unwrap(), g);
    }
}
