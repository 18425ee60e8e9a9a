//! Twisted conjugacy of twisted loops `δ: x → φ(x)`.
//!
//! Two twisted loops are equivalent when some `α: x1 → x2` satisfies
//! `δ2 = φ(α) ∘ δ1 ∘ α⁻¹`, i.e. `δ2 = α⁻¹·δ1·φ(α)` in application order.
//! The decision is a sound semi-decision: an abelianized invariant
//! certifies distinctness, a bounded witness search certifies equivalence,
//! and anything else is reported as unknown. When `φ` is the identity the
//! question is ordinary conjugacy and is decided exactly.

use std::collections::HashMap;

use num_bigint::BigInt;

use super::conjugacy::{conjugating_witness, loop_canonical};
use super::{apply_endo, compose, invert, reduce, reduce_letters, FreeGpdError, Graph, GroupoidEnd, Letter, Word};
use crate::intlinalg::{Cokernel, CokernelElement, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Distinction {
    Components { first: usize, second: usize },
    AbelianInvariant { first: CokernelElement, second: CokernelElement },
    /// Only issued when the endofunctor is the identity.
    ConjugacyCanonical { first: Word, second: Word },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TwistedVerdict {
    Equivalent { witness: Word },
    Distinct { evidence: Distinction },
    Unknown { bound: usize },
}

impl TwistedVerdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, TwistedVerdict::Equivalent { .. })
    }

    pub fn is_distinct(&self) -> bool {
        matches!(self, TwistedVerdict::Distinct { .. })
    }
}

/// Abelianized data for one component mapped into itself.
#[derive(Debug, Clone)]
struct ComponentInvariant {
    /// Coordinate of each non-tree generator of the component.
    coord: HashMap<usize, usize>,
    /// Non-tree counts of `φ` applied to the tree path of each object.
    base_shift: HashMap<usize, Vec<BigInt>>,
    cokernel: Cokernel,
}

/// Precomputed classification data for one endofunctor.
#[derive(Debug, Clone)]
pub struct TwistedClassifier<'a> {
    graph: &'a Graph,
    phi: &'a GroupoidEnd,
    components: Vec<Option<ComponentInvariant>>,
    /// Image of every letter, indexed by `Letter::order_key`.
    letter_images: Vec<Word>,
    identity: bool,
}

impl<'a> TwistedClassifier<'a> {
    pub fn new(graph: &'a Graph, phi: &'a GroupoidEnd) -> Self {
        let pi0 = graph.pi0();
        let forest = graph.forest();
        let mut components = Vec::with_capacity(pi0.num_components());
        for c in 0..pi0.num_components() {
            let root = pi0.representative[c];
            if graph.component_of(phi.image_object(root)) != c {
                components.push(None);
                continue;
            }
            let gens: Vec<usize> = (0..graph.num_generators())
                .filter(|&i| graph.component_of(graph.generators()[i].src) == c)
                .collect();
            let nontree: Vec<usize> = gens.iter().copied().filter(|&i| !forest.is_tree[i]).collect();
            let coord: HashMap<usize, usize> = nontree.iter().enumerate().map(|(k, &i)| (i, k)).collect();
            let count = |w: &Word| -> Vec<BigInt> {
                let mut v = vec![BigInt::from(0); nontree.len()];
                for l in w.letters() {
                    if let Some(&k) = coord.get(&l.gen) {
                        v[k] += l.exp();
                    }
                }
                v
            };
            // K = (Φ - P) on the cycle basis z_h = T(s h)·h·T(t h)⁻¹
            let mut k = IntMatrix::zeros(nontree.len(), nontree.len());
            for (col, &h) in nontree.iter().enumerate() {
                let gen = &graph.generators()[h];
                let cycle = Word::from_parts(
                    root,
                    root,
                    forest.root_path[gen.src]
                        .letters()
                        .iter()
                        .copied()
                        .chain([Letter::pos(h)])
                        .chain(invert(&forest.root_path[gen.tgt]).letters().iter().copied())
                        .collect(),
                );
                let image = apply_endo(phi, &cycle).expect("endofunctor validated");
                let mut v = count(&image);
                v[col] -= 1;
                for (row, x) in v.into_iter().enumerate() {
                    k[(row, col)] = x;
                }
            }
            let base_shift = pi0
                .members(c)
                .map(|x| {
                    let img = apply_endo(phi, &forest.root_path[x]).expect("endofunctor validated");
                    (x, count(&img))
                })
                .collect();
            components.push(Some(ComponentInvariant {
                coord,
                base_shift,
                cokernel: Cokernel::new(&k),
            }));
        }
        let mut letter_images = Vec::with_capacity(2 * graph.num_generators());
        for gen in 0..graph.num_generators() {
            letter_images.push(phi.image_letter(Letter::pos(gen)));
            letter_images.push(phi.image_letter(Letter::neg(gen)));
        }
        TwistedClassifier {
            graph,
            phi,
            components,
            letter_images,
            identity: phi.is_identity(),
        }
    }

    pub fn graph(&self) -> &Graph {
        self.graph
    }

    pub fn phi(&self) -> &GroupoidEnd {
        self.phi
    }

    pub fn check_twisted_loop(&self, d: &Word) -> Result<(), FreeGpdError> {
        let expected = self.phi.image_object(d.src());
        if d.tgt() != expected {
            return Err(FreeGpdError::NotTwistedLoop {
                src: d.src(),
                tgt: d.tgt(),
                expected,
            });
        }
        Ok(())
    }

    /// Component and abelianized class of a twisted loop.
    pub fn invariant(&self, d: &Word) -> Result<(usize, CokernelElement), FreeGpdError> {
        self.check_twisted_loop(d)?;
        let c = self.graph.component_of(d.src());
        let data = self.components[c]
            .as_ref()
            .expect("a twisted loop forces its component to map into itself");
        let mut v = data.base_shift[&d.src()].iter().map(|x| -x).collect::<Vec<_>>();
        for l in d.letters() {
            if let Some(&k) = data.coord.get(&l.gen) {
                v[k] += l.exp();
            }
        }
        let class = data.cokernel.class(&v).expect("dimension fixed by construction");
        Ok((c, class))
    }

    /// `α⁻¹·δ·φ(α)` for a single letter `α`, reduced.
    fn step(&self, d: &Word, l: Letter) -> Word {
        let img = &self.letter_images[l.order_key()];
        let letters = reduce_letters(
            std::iter::once(l.inv())
                .chain(d.letters().iter().copied())
                .chain(img.letters().iter().copied()),
        );
        Word::from_parts(l.tgt(self.graph), img.tgt(), letters)
    }

    /// Every twisted loop reachable from `d` by reduced witnesses of length
    /// at most `radius`, with the witness that reaches it.
    pub fn ball(&self, d: &Word, radius: usize) -> HashMap<Word, Vec<Letter>> {
        let mut seen: HashMap<Word, Vec<Letter>> = HashMap::new();
        seen.insert(d.clone(), Vec::new());
        let mut frontier = vec![d.clone()];
        for _ in 0..radius {
            let mut next = Vec::new();
            for state in &frontier {
                let path = seen[state].clone();
                for l in self.graph.letters_from(state.src()) {
                    if path.last() == Some(&l.inv()) {
                        continue;
                    }
                    let s = self.step(state, l);
                    if !seen.contains_key(&s) {
                        let mut p = path.clone();
                        p.push(l);
                        seen.insert(s.clone(), p);
                        next.push(s);
                    }
                }
            }
            frontier = next;
        }
        seen
    }

    /// Checks `d2 = α⁻¹·d1·φ(α)` exactly.
    pub fn verify_witness(&self, d1: &Word, d2: &Word, alpha: &Word) -> bool {
        if alpha.src() != d1.src() || alpha.tgt() != d2.src() {
            return false;
        }
        let lhs = compose(&invert(alpha), d1)
            .and_then(|w| compose(&w, &apply_endo(self.phi, alpha)?))
            .map(|w| reduce(&w));
        lhs.as_ref() == Ok(d2)
    }

    pub fn equiv(&self, d1: &Word, d2: &Word, bound: usize) -> Result<TwistedVerdict, FreeGpdError> {
        let d1 = reduce(d1);
        let d2 = reduce(d2);
        let (c1, inv1) = self.invariant(&d1)?;
        let (c2, inv2) = self.invariant(&d2)?;
        if d1 == d2 {
            return Ok(TwistedVerdict::Equivalent {
                witness: Word::identity(d1.src()),
            });
        }
        if c1 != c2 {
            return Ok(TwistedVerdict::Distinct {
                evidence: Distinction::Components { first: c1, second: c2 },
            });
        }
        if inv1 != inv2 {
            return Ok(TwistedVerdict::Distinct {
                evidence: Distinction::AbelianInvariant {
                    first: inv1,
                    second: inv2,
                },
            });
        }
        if self.identity {
            return Ok(match conjugating_witness(self.graph, &d1, &d2)? {
                Some(witness) => {
                    assert!(self.verify_witness(&d1, &d2, &witness), "conjugacy witness failed to verify");
                    TwistedVerdict::Equivalent { witness }
                }
                None => TwistedVerdict::Distinct {
                    evidence: Distinction::ConjugacyCanonical {
                        first: loop_canonical(self.graph, &d1)?,
                        second: loop_canonical(self.graph, &d2)?,
                    },
                },
            });
        }
        // meet in the middle: T_γ(d1) = T_β(d2) gives the witness γ·β⁻¹
        let forward = self.ball(&d1, bound.div_ceil(2));
        let backward = self.ball(&d2, bound / 2);
        let hit = backward
            .iter()
            .filter_map(|(state, beta)| forward.get(state).map(|gamma| (gamma, beta)))
            .min_by_key(|(gamma, beta)| (gamma.len() + beta.len(), (*gamma).clone(), (*beta).clone()));
        if let Some((gamma, beta)) = hit {
            let letters = reduce_letters(gamma.iter().copied().chain(beta.iter().rev().map(|l| l.inv())));
            let witness = Word::new(self.graph, d1.src(), letters).expect("search paths are composable");
            assert!(self.verify_witness(&d1, &d2, &witness), "search witness failed to verify");
            return Ok(TwistedVerdict::Equivalent { witness });
        }
        Ok(TwistedVerdict::Unknown { bound })
    }
}

/// Decides (soundly, up to `bound`) whether two twisted loops are equivalent.
pub fn twisted_equiv(
    g: &Graph,
    phi: &GroupoidEnd,
    d1: &Word,
    d2: &Word,
    bound: usize,
) -> Result<TwistedVerdict, FreeGpdError> {
    TwistedClassifier::new(g, phi).equiv(d1, d2, bound)
}
