//! Conjugacy of loops via retraction onto the spanning forest.

use super::{reduce_letters, FreeGpdError, Graph, Letter, Word};

/// Cyclic normal form of a loop, together with the data needed to produce
/// conjugating witnesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopNormalForm {
    pub root: usize,
    /// Cyclically reduced, minimal rotation over non-tree generators.
    pub cyclic: Vec<Letter>,
    /// Free-group word `c` over non-tree generators with `cyclic = c⁻¹·u·c`,
    /// where `u` is the retraction of the loop (application order).
    pub conjugator: Vec<Letter>,
}

/// Drops tree letters and freely reduces: the image of a loop in the free
/// group on the non-tree generators.
pub(crate) fn retract(g: &Graph, w: &Word) -> Vec<Letter> {
    let tree = &g.forest().is_tree;
    reduce_letters(w.letters().iter().copied().filter(|l| !tree[l.gen]))
}

/// Lifts a free-group word over non-tree generators to a reduced loop at `root`.
pub(crate) fn lift(g: &Graph, root: usize, letters: &[Letter]) -> Word {
    let paths = &g.forest().root_path;
    let mut out = Vec::new();
    for &l in letters {
        let (s, t) = (l.src(g), l.tgt(g));
        out.extend_from_slice(paths[s].letters());
        out.push(l);
        out.extend(paths[t].letters().iter().rev().map(|m| m.inv()));
    }
    Word::from_parts(root, root, reduce_letters(out))
}

pub(crate) fn inverse_letters(ls: &[Letter]) -> Vec<Letter> {
    ls.iter().rev().map(|l| l.inv()).collect()
}

pub fn loop_normal_form(g: &Graph, w: &Word) -> Result<LoopNormalForm, FreeGpdError> {
    if !w.is_loop() {
        return Err(FreeGpdError::NotALoop {
            src: w.src(),
            tgt: w.tgt(),
        });
    }
    let u = retract(g, w);
    // u = p · v · p⁻¹ with v cyclically reduced
    let mut lo = 0;
    let mut hi = u.len();
    while hi - lo >= 2 && u[lo] == u[hi - 1].inv() {
        lo += 1;
        hi -= 1;
    }
    let p = &u[..lo];
    let v = &u[lo..hi];
    let n = v.len();
    let mut best = 0;
    for k in 1..n {
        let better = (0..n)
            .map(|i| (v[(k + i) % n].order_key(), v[(best + i) % n].order_key()))
            .find(|(a, b)| a != b)
            .is_some_and(|(a, b)| a < b);
        if better {
            best = k;
        }
    }
    let cyclic: Vec<Letter> = (0..n).map(|i| v[(best + i) % n]).collect();
    // rotating v = a·b to b·a conjugates by a
    let conjugator = reduce_letters(p.iter().chain(&v[..best]).copied());
    Ok(LoopNormalForm {
        root: g.root_of(w.src()),
        cyclic,
        conjugator,
    })
}

/// Canonical representative of the conjugacy class of a loop.
///
/// Two loops are conjugate in the free groupoid (possibly across objects of
/// one component) iff their canonical forms are equal.
pub fn loop_canonical(g: &Graph, w: &Word) -> Result<Word, FreeGpdError> {
    let nf = loop_normal_form(g, w)?;
    Ok(lift(g, nf.root, &nf.cyclic))
}

/// For conjugate loops `d1` at `x1` and `d2` at `x2`, returns `α: x1 → x2`
/// with `d2 = α⁻¹·d1·α` (application order).
pub(crate) fn conjugating_witness(g: &Graph, d1: &Word, d2: &Word) -> Result<Option<Word>, FreeGpdError> {
    let n1 = loop_normal_form(g, d1)?;
    let n2 = loop_normal_form(g, d2)?;
    if n1.root != n2.root || n1.cyclic != n2.cyclic {
        return Ok(None);
    }
    let c: Vec<Letter> = reduce_letters(n1.conjugator.iter().copied().chain(inverse_letters(&n2.conjugator)));
    let paths = &g.forest().root_path;
    let lifted = lift(g, n1.root, &c);
    let letters = reduce_letters(
        inverse_letters(paths[d1.src()].letters())
            .into_iter()
            .chain(lifted.letters().iter().copied())
            .chain(paths[d2.src()].letters().iter().copied()),
    );
    Ok(Some(Word::from_parts(d1.src(), d2.src(), letters)))
}

#[cfg(test)]
mod tests {
    use super::super::{compose, invert, reduce};
    use super::*;

    fn w(g: &Graph, src: &str, spec: &[(&str, i64)]) -> Word {
        let letters: Vec<(String, i64)> = spec.iter().map(|(n, e)| (n.to_string(), *e)).collect();
        g.parse_word(g.object_id(src).unwrap(), &letters).unwrap()
    }

    #[test]
    fn identities_in_one_component_agree() {
        let g = Graph::new(&["x", "y"], &[("e", "x", "y"), ("a", "y", "y")]).unwrap();
        assert_eq!(
            loop_canonical(&g, &Word::identity(0)).unwrap(),
            loop_canonical(&g, &Word::identity(1)).unwrap()
        );
    }

    #[test]
    fn wedge_conjugates() {
        let g = Graph::new(&["x"], &[("a", "x", "x"), ("b", "x", "x")]).unwrap();
        let aba = w(&g, "x", &[("a", 1), ("b", 1), ("a", -1)]);
        let b = w(&g, "x", &[("b", 1)]);
        let a = w(&g, "x", &[("a", 1)]);
        assert_eq!(loop_canonical(&g, &aba).unwrap(), loop_canonical(&g, &b).unwrap());
        assert_ne!(loop_canonical(&g, &a).unwrap(), loop_canonical(&g, &b).unwrap());
        let alpha = conjugating_witness(&g, &aba, &b).unwrap().unwrap();
        let lhs = compose(&compose(&invert(&alpha), &aba).unwrap(), &alpha).unwrap();
        assert_eq!(lhs, b);
    }

    #[test]
    fn non_loop_is_rejected() {
        let g = Graph::new(&["x", "y"], &[("e", "x", "y")]).unwrap();
        assert!(loop_canonical(&g, &w(&g, "x", &[("e", 1)])).is_err());
    }

    #[test]
    fn witness_across_objects() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2), (2, 0), (1, 1)]).unwrap();
        // loop at x0 around the triangle, and its conjugate at x2
        let tri = Word::new(&g, 0, vec![Letter::pos(0), Letter::pos(1), Letter::pos(2)]).unwrap();
        let alpha = Word::new(&g, 0, vec![Letter::pos(0), Letter::pos(3), Letter::pos(1)]).unwrap();
        let conj = compose(&compose(&invert(&alpha), &tri).unwrap(), &alpha).unwrap();
        assert_eq!(conj.src(), 2);
        let wit = conjugating_witness(&g, &tri, &conj).unwrap().unwrap();
        assert_eq!(reduce(&compose(&compose(&invert(&wit), &tri).unwrap(), &wit).unwrap()), conj);
    }
}
