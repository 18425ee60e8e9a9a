mod common;

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::Rng;
use trace_kit_core::chain::lefschetz_trace;
use trace_kit_core::fixpt::reidemeister_trace;
use trace_kit_core::formal::FormalSum;
use trace_kit_core::freegpd::{EdgeCollapse, GroupoidEnd};
use trace_kit_core::gpdrep::{
    hocolim_complex, hocolim_endo, rep_lefschetz, rep_total_trace, rep_total_trace_euler, rep_total_trace_sum, GpdRep,
    RepEndo,
};
use trace_kit_core::intlinalg::trace;

use common::{random_graph, random_rep, rng};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn two_forms_and_hocolim(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, 5, 7);
        let (m, f) = random_rep(&mut r, &g, 3);
        prop_assert_eq!(rep_total_trace_sum(&g, &f), rep_total_trace_euler(&g, &f));
        let total = rep_total_trace(&g, &m, &f).unwrap();
        prop_assert!(hocolim_complex(&g, &m).validate().is_ok());
        let chain = lefschetz_trace(&hocolim_endo(&g, &m, &f).unwrap()).unwrap();
        prop_assert_eq!(total.augmentation(), chain.clone());
        prop_assert_eq!(rep_lefschetz(&g, &m, &f).unwrap(), chain);
    }

    #[test]
    fn traces_are_constant_on_components(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, 5, 7);
        let (_, f) = random_rep(&mut r, &g, 3);
        for e in g.generators() {
            prop_assert_eq!(trace(f.at(e.src)).unwrap(), trace(f.at(e.tgt)).unwrap());
        }
    }

    #[test]
    fn trivial_rep_recovers_identity_reidemeister_trace(seed in any::<u64>()) {
        let g = random_graph(&mut rng(seed), 5, 7);
        let m = GpdRep::trivial(&g, 1);
        let rt = reidemeister_trace(&g, &GroupoidEnd::identity(&g), 8).unwrap();
        prop_assert_eq!(rep_total_trace(&g, &m, &RepEndo::identity(&m)).unwrap(), rt.terms);
    }

    #[test]
    fn collapse_preserves_total_trace(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, 5, 7);
        let (m, f) = random_rep(&mut r, &g, 3);
        let tree = g.tree_edges();
        if tree.is_empty() {
            return Ok(());
        }
        let c = EdgeCollapse::new(&g, tree[r.gen_range(0..tree.len())]).unwrap();
        let h = &c.target;
        let m2 = m.collapse(&c);
        let f2 = f.collapse(&c);
        let f2 = RepEndo::new(h, &m2, (0..h.num_objects()).map(|x| f2.at(x).clone()).collect()).unwrap();
        let before: FormalSum<String> = rep_total_trace(&g, &m, &f)
            .unwrap()
            .map_basis(|w| g.objects()[g.root_of(w.src())].clone());
        let after: FormalSum<String> = rep_total_trace(h, &m2, &f2)
            .unwrap()
            .map_basis(|w| g.objects()[g.root_of(c.object_to_old[w.src()])].clone());
        prop_assert_eq!(before, after);
    }
}

#[test]
fn spec_examples() {
    use trace_kit_core::freegpd::{Graph, Word};
    use trace_kit_core::intlinalg::IntMatrix;
    let circle = Graph::new(&["x"], &[("a", "x", "x")]).unwrap();
    let swap = GpdRep::new(&circle, vec![2], vec![IntMatrix::from_i64(&[&[0, 1], &[1, 0]])]).unwrap();
    assert!(rep_total_trace(&circle, &swap, &RepEndo::identity(&swap)).unwrap().is_empty());
    let wedge = Graph::new(&["x"], &[("a", "x", "x"), ("b", "x", "x")]).unwrap();
    let m = GpdRep::trivial(&wedge, 1);
    assert_eq!(
        rep_total_trace(&wedge, &m, &RepEndo::identity(&m)).unwrap(),
        FormalSum::singleton(Word::identity(0), BigInt::from(-1))
    );
}
