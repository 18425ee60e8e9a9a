mod common;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::Rng;
use trace_kit_core::chain::lefschetz_trace;
use trace_kit_core::fixpt::{
    diagonal_map, lefschetz, lefschetz_combinatorial, reidemeister_trace, rt_augment, rt_project_pi0, sigma_map,
    transfer, Classification,
};
use trace_kit_core::formal::FormalSum;
use trace_kit_core::freegpd::{twisted_equiv, EdgeCollapse, Graph, GroupoidEnd, Letter, TwistedClassifier, Word};

use common::{components, random_endo, random_graph, rng};

/// Euler characteristic per component, by direct counting.
fn euler_by_component(g: &Graph) -> Vec<i64> {
    let comp = components(g);
    let n = comp.iter().max().map_or(0, |m| m + 1);
    let mut chi = vec![0i64; n];
    for &c in &comp {
        chi[c] += 1;
    }
    for e in g.generators() {
        chi[comp[e.src]] -= 1;
    }
    chi
}

fn project_by_root(g: &Graph, s: &FormalSum<usize>) -> FormalSum<String> {
    s.map_basis(|&c| g.objects()[g.pi0().representative[c]].clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn two_route_lefschetz(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, 6, 8);
        let phi = random_endo(&mut r, &g, 6);
        let chain = lefschetz_trace(&sigma_map(&g, &phi).unwrap()).unwrap();
        prop_assert_eq!(lefschetz_combinatorial(&g, &phi), chain.clone());
        prop_assert_eq!(lefschetz(&g, &phi).unwrap(), chain);
    }

    #[test]
    fn reidemeister_refines_lefschetz_and_transfer(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, 5, 6);
        let phi = random_endo(&mut r, &g, 4);
        let rt = reidemeister_trace(&g, &phi, 8).unwrap();
        prop_assert_eq!(rt_augment(&rt), lefschetz(&g, &phi).unwrap());
        prop_assert_eq!(rt_project_pi0(&g, &rt), transfer(&g, &phi).unwrap());
        let raw: BigInt = rt.raw_terms.iter().map(|(_, k)| k).sum();
        prop_assert_eq!(raw, rt_augment(&rt));
        prop_assert!(rt.terms.iter().all(|(_, k)| k != &BigInt::from(0)));
        let classifier = TwistedClassifier::new(&g, &phi);
        for (w, _) in rt.terms.iter() {
            prop_assert!(classifier.check_twisted_loop(w).is_ok());
        }
    }

    #[test]
    fn stored_classes_are_not_certified_equivalent(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, 3, 4);
        let phi = random_endo(&mut r, &g, 3);
        let rt = reidemeister_trace(&g, &phi, 6).unwrap();
        let reps: Vec<&Word> = rt.terms.iter().map(|(w, _)| w).collect();
        for i in 0..reps.len() {
            for j in i + 1..reps.len() {
                prop_assert!(!twisted_equiv(&g, &phi, reps[i], reps[j], 6).unwrap().is_equivalent());
            }
        }
    }

    #[test]
    fn identity_endofunctor_is_exact(seed in any::<u64>()) {
        let g = random_graph(&mut rng(seed), 6, 8);
        let id = GroupoidEnd::identity(&g);
        let rt = reidemeister_trace(&g, &id, 8).unwrap();
        prop_assert_eq!(&rt.classification, &Classification::Exact);
        let chi = euler_by_component(&g);
        let comp = components(&g);
        prop_assert_eq!(rt.terms.len(), chi.iter().filter(|&&c| c != 0).count());
        for (w, k) in rt.terms.iter() {
            prop_assert_eq!(k, &BigInt::from(chi[comp[w.src()]]));
        }
        let t = transfer(&g, &id).unwrap();
        for (c, k) in t.iter() {
            let x = g.pi0().representative[*c];
            prop_assert_eq!(k, &BigInt::from(chi[comp[x]]));
        }
    }

    #[test]
    fn diagonal_is_a_chain_map(seed in any::<u64>()) {
        let g = random_graph(&mut rng(seed), 5, 7);
        prop_assert!(diagonal_map(&g).validate().is_ok());
    }

    #[test]
    fn collapse_preserves_invariants(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, 5, 6);
        let phi = random_endo(&mut r, &g, 4);
        let tree = g.tree_edges();
        if tree.is_empty() {
            return Ok(());
        }
        let c = EdgeCollapse::new(&g, tree[r.gen_range(0..tree.len())]).unwrap();
        let psi = c.transport(&phi).unwrap();
        let h = &c.target;
        prop_assert_eq!(lefschetz(&g, &phi).unwrap(), lefschetz(h, &psi).unwrap());
        let rt_g = reidemeister_trace(&g, &phi, 8).unwrap();
        let rt_h = reidemeister_trace(h, &psi, 8).unwrap();
        prop_assert_eq!(rt_augment(&rt_g), rt_augment(&rt_h));
        // compare π₀ projections through the object bijection on component roots
        let via_g: FormalSum<String> = rt_project_pi0(&g, &rt_g)
            .map_basis(|&k| g.objects()[g.pi0().representative[k]].clone());
        let via_h: FormalSum<String> = rt_project_pi0(h, &rt_h)
            .map_basis(|&k| g.objects()[g.pi0().representative[g.component_of(c.object_to_old[h.pi0().representative[k]])]].clone());
        prop_assert_eq!(via_g, via_h);
        prop_assert_eq!(project_by_root(&g, &transfer(&g, &phi).unwrap()).augmentation(), rt_augment(&rt_h));
    }
}

fn circle_power(d: i64) -> (Graph, GroupoidEnd) {
    let g = Graph::new(&["x"], &[("a", "x", "x")]).unwrap();
    let l = if d < 0 { Letter::neg(0) } else { Letter::pos(0) };
    let w = Word::new(&g, 0, vec![l; d.unsigned_abs() as usize]).unwrap();
    let phi = GroupoidEnd::new(&g, vec![0], vec![w]).unwrap();
    (g, phi)
}

#[test]
fn circle_family_class_counts() {
    for d in -2i64..=3 {
        let (g, phi) = circle_power(d);
        assert_eq!(lefschetz(&g, &phi).unwrap(), BigInt::from(1 - d));
        let rt = reidemeister_trace(&g, &phi, 8).unwrap();
        assert_eq!(rt_augment(&rt), BigInt::from(1 - d));
        if d != 1 {
            let m = (d - 1).abs();
            let classifier = TwistedClassifier::new(&g, &phi);
            let invariants: BTreeSet<_> = (0..=2 * m)
                .map(|k| classifier.invariant(&Word::new(&g, 0, vec![Letter::pos(0); k as usize]).unwrap()).unwrap())
                .collect();
            assert_eq!(invariants.len() as i64, m);
            // a^k ~ a^l iff k ≡ l mod |d-1|
            let residues: BTreeSet<i64> = (0..=2 * m).map(|k| k.rem_euclid(m)).collect();
            assert_eq!(residues.len(), invariants.len());
            assert_eq!(rt.terms.len() as i64, m);
            assert_eq!(rt.classification, Classification::Exact);
        }
    }
}

#[test]
fn wedge_identity_and_disjoint_examples() {
    let w = Graph::new(&["x"], &[("a", "x", "x"), ("b", "x", "x")]).unwrap();
    let rt = reidemeister_trace(&w, &GroupoidEnd::identity(&w), 8).unwrap();
    assert_eq!(rt.terms, FormalSum::singleton(Word::identity(0), -1));
    let g = Graph::new(&["x", "y", "z"], &[("a", "x", "x"), ("e", "y", "z")]).unwrap();
    let rt = reidemeister_trace(&g, &GroupoidEnd::identity(&g), 8).unwrap();
    assert_eq!(rt_project_pi0(&g, &rt), FormalSum::singleton(1, 1));
}
