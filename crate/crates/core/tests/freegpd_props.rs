mod common;

use proptest::prelude::*;
use rand::Rng;
use trace_kit_core::freegpd::{
    apply_endo, compose, invert, loop_canonical, reduce, twisted_equiv, EdgeCollapse, GroupoidEnd, TwistedVerdict, Word,
};

use common::{random_endo, random_graph, random_word, rng};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn reduction_and_inverses(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, 4, 6);
        let x = r.gen_range(0..g.num_objects());
        let w = random_word(&mut r, &g, x, x, 8);
        let red = reduce(&w);
        prop_assert!(red.is_reduced());
        prop_assert_eq!(reduce(&red), red.clone());
        prop_assert_eq!(compose(&w, &invert(&w)).unwrap(), Word::identity(x));
        for gen in 0..g.num_generators() {
            prop_assert_eq!(red.signed_count(gen), w.signed_count(gen));
        }
    }

    #[test]
    fn endofunctors_preserve_composition(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, 4, 6);
        let phi = random_endo(&mut r, &g, 4);
        let x = r.gen_range(0..g.num_objects());
        let y = r.gen_range(0..g.num_objects());
        if g.component_of(x) != g.component_of(y) {
            return Ok(());
        }
        let w1 = random_word(&mut r, &g, x, y, 5);
        let w2 = random_word(&mut r, &g, y, x, 5);
        let lhs = apply_endo(&phi, &compose(&w1, &w2).unwrap()).unwrap();
        let rhs = compose(&apply_endo(&phi, &w1).unwrap(), &apply_endo(&phi, &w2).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn canonical_form_is_conjugation_invariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, 4, 6);
        let x = r.gen_range(0..g.num_objects());
        let d = random_word(&mut r, &g, x, x, 6);
        let y = (0..g.num_objects()).find(|&y| g.component_of(y) == g.component_of(x) && r.gen_bool(0.5)).unwrap_or(x);
        let alpha = random_word(&mut r, &g, x, y, 4);
        let conj = compose(&compose(&invert(&alpha), &d).unwrap(), &alpha).unwrap();
        prop_assert_eq!(loop_canonical(&g, &d).unwrap(), loop_canonical(&g, &conj).unwrap());
        let id = GroupoidEnd::identity(&g);
        let verdict = twisted_equiv(&g, &id, &d, &conj, 8).unwrap();
        prop_assert!(verdict.is_equivalent());
    }

    #[test]
    fn twisted_conjugates_are_found(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, 3, 4);
        let phi = random_endo(&mut r, &g, 2);
        let Some(x) = (0..g.num_objects()).find(|&x| g.component_of(phi.image_object(x)) == g.component_of(x)) else {
            return Ok(());
        };
        let d = random_word(&mut r, &g, x, phi.image_object(x), 3);
        let y = r.gen_range(0..g.num_objects());
        if g.component_of(y) != g.component_of(x) {
            return Ok(());
        }
        let alpha = reduce(&random_word(&mut r, &g, x, y, 2));
        let d2 = compose(&compose(&invert(&alpha), &d).unwrap(), &apply_endo(&phi, &alpha).unwrap()).unwrap();
        let verdict = twisted_equiv(&g, &phi, &d, &d2, alpha.len().max(1)).unwrap();
        match verdict {
            TwistedVerdict::Equivalent { witness } => {
                let check = compose(&compose(&invert(&witness), &d).unwrap(), &apply_endo(&phi, &witness).unwrap()).unwrap();
                prop_assert_eq!(check, reduce(&d2));
            }
            other => prop_assert!(false, "expected a witness, got {:?}", other),
        }
    }

    #[test]
    fn collapse_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, 5, 7);
        let tree = g.tree_edges();
        if tree.is_empty() {
            return Ok(());
        }
        let c = EdgeCollapse::new(&g, tree[r.gen_range(0..tree.len())]).unwrap();
        let x = r.gen_range(0..c.target.num_objects());
        let w = random_word(&mut r, &c.target, x, x, 6);
        prop_assert_eq!(c.quotient_word(&c.include_word(&w)), reduce(&w));
        prop_assert!(c.transport(&GroupoidEnd::identity(&g)).unwrap().is_identity());
    }
}
