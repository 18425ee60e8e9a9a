//! The free abelian functor Σ on free groupoids, and the Lefschetz number,
//! transfer and Reidemeister trace of an endofunctor.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::chain::{h0_class, tensor, tensor_index, twisted_trace, ChainComplex, ChainError, ChainMap};
use crate::formal::FormalSum;
use crate::freegpd::{loop_canonical, reduce, FreeGpdError, Graph, GroupoidEnd, TwistedClassifier, Word};
use crate::intlinalg::{CokernelElement, IntMatrix};

/// Default length bound for twisted witness searches.
pub const DEFAULT_BOUND: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FixptError {
    #[error(transparent)]
    FreeGpd(#[from] FreeGpdError),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error("{quantity}: routes disagree ({first} vs {second})")]
    RouteMismatch {
        quantity: &'static str,
        first: String,
        second: String,
    },
}

fn check_endo(g: &Graph, phi: &GroupoidEnd) -> Result<(), FixptError> {
    if phi.object_map().len() != g.num_objects() || phi.generator_map().len() != g.num_generators() {
        return Err(FreeGpdError::InvalidEndo("endofunctor does not match the graph".into()).into());
    }
    Ok(())
}

/// `Σ(g)`: generators in degree 1, objects in degree 0, `d(γ) = t(γ) - s(γ)`.
pub fn sigma_complex(g: &Graph) -> ChainComplex {
    let mut d = IntMatrix::zeros(g.num_objects(), g.num_generators());
    for (i, gen) in g.generators().iter().enumerate() {
        d[(gen.tgt, i)] += 1;
        d[(gen.src, i)] -= 1;
    }
    ChainComplex::new(0, vec![g.num_objects(), g.num_generators()], vec![d]).expect("graph complex")
}

/// `Σ(φ)`: objects go to their images, generators to the signed count of
/// each generator in their image word.
pub fn sigma_map(g: &Graph, phi: &GroupoidEnd) -> Result<ChainMap, FixptError> {
    check_endo(g, phi)?;
    let c = sigma_complex(g);
    let n0 = g.num_objects();
    let n1 = g.num_generators();
    let mut f0 = IntMatrix::zeros(n0, n0);
    for x in 0..n0 {
        f0[(phi.image_object(x), x)] = BigInt::from(1);
    }
    let mut f1 = IntMatrix::zeros(n1, n1);
    for gamma in 0..n1 {
        for l in phi.image_generator(gamma).letters() {
            f1[(l.gen, gamma)] += l.exp();
        }
    }
    Ok(ChainMap::new(c.clone(), c, BTreeMap::from([(0, f0), (1, f1)]))?)
}

/// `#{x : φ(x) = x} + Σ_γ (occurrences of γ⁻¹ in φ(γ) - occurrences of γ)`.
pub fn lefschetz_combinatorial(g: &Graph, phi: &GroupoidEnd) -> BigInt {
    let fixed = (0..g.num_objects()).filter(|&x| phi.image_object(x) == x).count();
    let mut total = BigInt::from(fixed);
    for gamma in 0..g.num_generators() {
        for l in phi.image_generator(gamma).letters() {
            if l.gen == gamma {
                total -= l.exp();
            }
        }
    }
    total
}

/// The Lefschetz number, computed combinatorially and as the chain-level
/// trace of `Σ(φ)`; the two must agree.
pub fn lefschetz(g: &Graph, phi: &GroupoidEnd) -> Result<BigInt, FixptError> {
    let combinatorial = lefschetz_combinatorial(g, phi);
    let chain = crate::chain::lefschetz_trace(&sigma_map(g, phi)?)?;
    if combinatorial != chain {
        return Err(FixptError::RouteMismatch {
            quantity: "lefschetz",
            first: combinatorial.to_string(),
            second: chain.to_string(),
        });
    }
    Ok(chain)
}

/// `Σ(g) → Σ(g) ⊗ Σ(g)`: `x ↦ x⊗x`, `γ ↦ γ⊗s(γ) + t(γ)⊗γ`.
pub fn diagonal_map(g: &Graph) -> ChainMap {
    let c = sigma_complex(g);
    let cc = tensor(&c, &c);
    let n0 = g.num_objects();
    let n1 = g.num_generators();
    let mut f0 = IntMatrix::zeros(cc.rank(0), n0);
    for x in 0..n0 {
        f0[(tensor_index(&c, &c, 0, x, 0, x), x)] = BigInt::from(1);
    }
    let mut f1 = IntMatrix::zeros(cc.rank(1), n1);
    for (i, gen) in g.generators().iter().enumerate() {
        f1[(tensor_index(&c, &c, 1, i, 0, gen.src), i)] += 1;
        f1[(tensor_index(&c, &c, 0, gen.tgt, 1, i), i)] += 1;
    }
    ChainMap::new(c, cc, BTreeMap::from([(0, f0), (1, f1)])).expect("diagonal is a chain map")
}

/// Transfer from the twisted trace of `Δ ∘ Σ(φ)`: the degree-0 cycle and its
/// component sums.
pub fn transfer_via_trace(g: &Graph, phi: &GroupoidEnd) -> Result<(Vec<BigInt>, FormalSum<usize>), FixptError> {
    let c = sigma_complex(g);
    let f = sigma_map(g, phi)?.then(&diagonal_map(g))?;
    let t = twisted_trace(&f, &c, &c)?;
    let v = if g.num_objects() == 0 {
        Vec::new()
    } else {
        t.at(0).col_vec(0)
    };
    let sums = v
        .iter()
        .enumerate()
        .map(|(x, k)| (g.component_of(x), k.clone()))
        .collect();
    Ok((v, sums))
}

/// Per-component closed form: zero off preserved components, otherwise
/// fixed objects plus self-occurrence terms of the component's generators.
pub fn transfer_closed_form(g: &Graph, phi: &GroupoidEnd) -> FormalSum<usize> {
    let mut out = FormalSum::new();
    for x in 0..g.num_objects() {
        if phi.image_object(x) == x {
            out.add_term(g.component_of(x), 1);
        }
    }
    for gamma in 0..g.num_generators() {
        let c = g.component_of(g.generators()[gamma].src);
        for l in phi.image_generator(gamma).letters() {
            if l.gen == gamma {
                out.add_term(c, -l.exp());
            }
        }
    }
    out
}

/// The transfer in `Z[π₀]`, keyed by component index. Both routes are
/// computed and compared, including as classes in `H₀(Σ(g))`.
pub fn transfer(g: &Graph, phi: &GroupoidEnd) -> Result<FormalSum<usize>, FixptError> {
    let (v, via_trace) = transfer_via_trace(g, phi)?;
    let closed = transfer_closed_form(g, phi);
    if via_trace != closed {
        return Err(FixptError::RouteMismatch {
            quantity: "transfer",
            first: format!("{via_trace:?}"),
            second: format!("{closed:?}"),
        });
    }
    let c = sigma_complex(g);
    let mut w = vec![BigInt::zero(); g.num_objects()];
    for (&comp, k) in closed.iter() {
        w[g.pi0().representative[comp]] = k.clone();
    }
    if h0_class(&c, &v)? != h0_class(&c, &w)? {
        return Err(FixptError::RouteMismatch {
            quantity: "transfer H0 class",
            first: format!("{v:?}"),
            second: format!("{w:?}"),
        });
    }
    Ok(closed)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    /// Every pair of stored classes is certified distinct.
    Exact,
    /// Pairs of stored representatives that share all invariants but were
    /// not joined by a witness of length at most `bound`.
    Bounded { bound: usize, unresolved: Vec<(Word, Word)> },
}

/// Terms sharing a component and an abelian twisted invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoarseTerm {
    pub component: usize,
    pub invariant: CokernelElement,
    pub coefficient: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReidemeisterTrace {
    /// Merged classes, each keyed by a twisted loop `x → φ(x)`.
    pub terms: FormalSum<Word>,
    /// The unmerged contributions in generation order.
    pub raw_terms: Vec<(Word, BigInt)>,
    pub classification: Classification,
    /// Sums over abelian invariant buckets, a view that does not depend on
    /// the search bound.
    pub coarse: Vec<CoarseTerm>,
}

/// Raw contributions: `+[id_x]` for fixed `x`, and for each occurrence
/// `ℓ_i = γ^{ε}` in `φ(γ) = ℓ_1⋯ℓ_n` the term `-ε·[ℓ_{i+1}⋯ℓ_n]` (`ε = 1`)
/// or `-ε·[ℓ_i⋯ℓ_n]` (`ε = -1`), each a twisted loop at `t(γ)`.
pub fn reidemeister_raw_terms(g: &Graph, phi: &GroupoidEnd) -> Vec<(Word, BigInt)> {
    let mut out = Vec::new();
    for x in 0..g.num_objects() {
        if phi.image_object(x) == x {
            out.push((Word::identity(x), BigInt::from(1)));
        }
    }
    for gamma in 0..g.num_generators() {
        let y = g.generators()[gamma].tgt;
        let image = phi.image_generator(gamma);
        let letters = image.letters();
        for (i, l) in letters.iter().enumerate() {
            if l.gen != gamma {
                continue;
            }
            let start = if l.inverse { i } else { i + 1 };
            let rep = Word::new(g, y, letters[start..].to_vec()).expect("suffix of an image word");
            out.push((rep, BigInt::from(-l.exp())));
        }
    }
    out
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, i: usize) -> usize {
        let mut r = i;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut j = i;
        while self.0[j] != r {
            let next = self.0[j];
            self.0[j] = r;
            j = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.0[hi] = lo;
        }
    }
}

/// The Reidemeister trace, with terms merged under certified twisted
/// equivalence at the given witness bound.
pub fn reidemeister_trace(g: &Graph, phi: &GroupoidEnd, bound: usize) -> Result<ReidemeisterTrace, FixptError> {
    check_endo(g, phi)?;
    let raw_terms = reidemeister_raw_terms(g, phi);
    let classifier = TwistedClassifier::new(g, phi);

    // distinct representatives, in first-appearance order
    let mut reps: Vec<Word> = Vec::new();
    let mut rep_index: HashMap<Word, usize> = HashMap::new();
    let mut rep_coef: Vec<BigInt> = Vec::new();
    for (w, k) in &raw_terms {
        let w = reduce(w);
        let i = *rep_index.entry(w.clone()).or_insert_with(|| {
            reps.push(w);
            rep_coef.push(BigInt::zero());
            reps.len() - 1
        });
        rep_coef[i] += k;
    }

    let mut keys = Vec::with_capacity(reps.len());
    for r in &reps {
        keys.push(classifier.invariant(r)?);
    }
    let mut buckets: BTreeMap<(usize, CokernelElement), Vec<usize>> = BTreeMap::new();
    for (i, key) in keys.iter().enumerate() {
        buckets.entry(key.clone()).or_default().push(i);
    }

    let mut uf = UnionFind((0..reps.len()).collect());
    if phi.is_identity() {
        let mut canon: HashMap<Word, usize> = HashMap::new();
        for (i, r) in reps.iter().enumerate() {
            let c = loop_canonical(g, r)?;
            match canon.get(&c) {
                Some(&j) => uf.union(i, j),
                None => {
                    canon.insert(c, i);
                }
            }
        }
    } else {
        let radius = bound.div_ceil(2);
        for members in buckets.values().filter(|m| m.len() > 1) {
            // balls of radius ⌈b/2⌉ meet iff a witness of length ≤ 2⌈b/2⌉ exists
            let mut owner: HashMap<Word, usize> = HashMap::new();
            for &i in members {
                for state in classifier.ball(&reps[i], radius).into_keys() {
                    match owner.get(&state) {
                        Some(&j) => uf.union(i, j),
                        None => {
                            owner.insert(state, i);
                        }
                    }
                }
            }
        }
    }

    let mut group_coef: BTreeMap<usize, BigInt> = BTreeMap::new();
    for i in 0..reps.len() {
        let root = uf.find(i);
        *group_coef.entry(root).or_insert_with(BigInt::zero) += &rep_coef[i];
    }
    let live: Vec<usize> = group_coef
        .iter()
        .filter(|(_, k)| !k.is_zero())
        .map(|(&r, _)| r)
        .collect();

    let mut terms = FormalSum::new();
    for &r in &live {
        terms.add_term(reps[r].clone(), group_coef[&r].clone());
    }

    let mut unresolved = Vec::new();
    if !phi.is_identity() {
        for (a, &ra) in live.iter().enumerate() {
            for &rb in &live[a + 1..] {
                if keys[ra] == keys[rb] {
                    unresolved.push((reps[ra].clone(), reps[rb].clone()));
                }
            }
        }
    }
    let classification = if unresolved.is_empty() {
        Classification::Exact
    } else {
        Classification::Bounded { bound, unresolved }
    };

    let mut coarse = Vec::new();
    for ((component, invariant), members) in buckets {
        let coefficient: BigInt = members.iter().map(|&i| &rep_coef[i]).sum();
        if !coefficient.is_zero() {
            coarse.push(CoarseTerm {
                component,
                invariant,
                coefficient,
            });
        }
    }

    Ok(ReidemeisterTrace {
        terms,
        raw_terms,
        classification,
        coarse,
    })
}

/// Sum of coefficients.
pub fn rt_augment(rt: &ReidemeisterTrace) -> BigInt {
    rt.terms.augmentation()
}

/// Pushes each class to the component of its base object.
pub fn rt_project_pi0(g: &Graph, rt: &ReidemeisterTrace) -> FormalSum<usize> {
    rt.terms.map_basis(|w| g.component_of(w.src()))
}

/// Number of classes with nonzero coefficient, if the classification is exact.
pub fn essential_classes(rt: &ReidemeisterTrace) -> Option<usize> {
    match rt.classification {
        Classification::Exact => Some(rt.terms.len()),
        Classification::Bounded { .. } => None,
    }
}
