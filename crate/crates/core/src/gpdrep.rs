//! Representations of free groupoids on free abelian groups and their total
//! traces.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use thiserror::Error;

use crate::chain::{lefschetz_trace, ChainComplex, ChainError, ChainMap};
use crate::formal::FormalSum;
use crate::freegpd::{EdgeCollapse, Graph, Word};
use crate::intlinalg::{trace, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepError {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("action of generator `{0}` is not invertible over the integers")]
    NotUnimodular(String),
    #[error("endomorphism is not natural along generator `{0}`")]
    NotNatural(String),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error("{quantity}: routes disagree ({first} vs {second})")]
    RouteMismatch {
        quantity: &'static str,
        first: String,
        second: String,
    },
}

/// A functor from the free groupoid to free abelian groups: a rank per object
/// and a unimodular matrix per generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GpdRep {
    ranks: Vec<usize>,
    action: Vec<IntMatrix>,
    inverse: Vec<IntMatrix>,
}

impl GpdRep {
    pub fn new(g: &Graph, ranks: Vec<usize>, action: Vec<IntMatrix>) -> Result<Self, RepError> {
        if ranks.len() != g.num_objects() || action.len() != g.num_generators() {
            return Err(RepError::Shape("rank or action list does not match the graph".into()));
        }
        let mut inverse = Vec::with_capacity(action.len());
        for (gen, m) in g.generators().iter().zip(&action) {
            if m.shape() != (ranks[gen.tgt], ranks[gen.src]) {
                return Err(RepError::Shape(format!(
                    "action of `{}` has shape {:?}, expected {:?}",
                    gen.name,
                    m.shape(),
                    (ranks[gen.tgt], ranks[gen.src])
                )));
            }
            inverse.push(m.inverse_unimodular().ok_or_else(|| RepError::NotUnimodular(gen.name.clone()))?);
        }
        Ok(GpdRep { ranks, action, inverse })
    }

    /// Every generator acts by the identity on `Z^rank`.
    pub fn trivial(g: &Graph, rank: usize) -> Self {
        GpdRep {
            ranks: vec![rank; g.num_objects()],
            action: vec![IntMatrix::identity(rank); g.num_generators()],
            inverse: vec![IntMatrix::identity(rank); g.num_generators()],
        }
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn rank(&self, x: usize) -> usize {
        self.ranks[x]
    }

    pub fn action(&self, gen: usize) -> &IntMatrix {
        &self.action[gen]
    }

    /// The matrix of a word; letters act in application order.
    pub fn word_action(&self, w: &Word) -> IntMatrix {
        let mut m = IntMatrix::identity(self.ranks[w.src()]);
        for l in w.letters() {
            let step = if l.inverse { &self.inverse[l.gen] } else { &self.action[l.gen] };
            m = step * &m;
        }
        m
    }

    /// The representation restricted along the section of an edge collapse.
    pub fn collapse(&self, c: &EdgeCollapse) -> GpdRep {
        let ranks = c.object_to_old.iter().map(|&o| self.ranks[o]).collect();
        let mut action = Vec::new();
        let mut inverse = Vec::new();
        for n in 0..c.target.num_generators() {
            let w = c.include_word(&Word::letter(&c.target, crate::freegpd::Letter::pos(n)));
            let m = self.word_action(&w);
            inverse.push(m.inverse_unimodular().expect("products of unimodular matrices"));
            action.push(m);
        }
        GpdRep { ranks, action, inverse }
    }
}

/// A natural endomorphism `f_x` of a representation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepEndo {
    maps: Vec<IntMatrix>,
}

impl RepEndo {
    /// Checks shapes and `f_{t(γ)}·M(γ) = M(γ)·f_{s(γ)}`.
    pub fn new(g: &Graph, m: &GpdRep, maps: Vec<IntMatrix>) -> Result<Self, RepError> {
        if maps.len() != g.num_objects() {
            return Err(RepError::Shape("one endomorphism per object required".into()));
        }
        for (x, f) in maps.iter().enumerate() {
            if f.shape() != (m.rank(x), m.rank(x)) {
                return Err(RepError::Shape(format!(
                    "endomorphism at `{}` has shape {:?}, expected square of size {}",
                    g.objects()[x],
                    f.shape(),
                    m.rank(x)
                )));
            }
        }
        for (i, gen) in g.generators().iter().enumerate() {
            if &maps[gen.tgt] * m.action(i) != m.action(i) * &maps[gen.src] {
                return Err(RepError::NotNatural(gen.name.clone()));
            }
        }
        Ok(RepEndo { maps })
    }

    pub fn identity(m: &GpdRep) -> Self {
        RepEndo {
            maps: m.ranks.iter().map(|&r| IntMatrix::identity(r)).collect(),
        }
    }

    pub fn at(&self, x: usize) -> &IntMatrix {
        &self.maps[x]
    }

    pub fn collapse(&self, c: &EdgeCollapse) -> RepEndo {
        RepEndo {
            maps: c.object_to_old.iter().map(|&o| self.maps[o].clone()).collect(),
        }
    }
}

fn tr(m: &IntMatrix) -> BigInt {
    trace(m).expect("square")
}

/// `Σ_x tr(f_x)·[id_x] - Σ_γ tr(f_{t(γ)})·[id_{t(γ)}]`, with identities
/// merged onto the root of their component.
pub fn rep_total_trace_sum(g: &Graph, f: &RepEndo) -> FormalSum<Word> {
    let mut out = FormalSum::new();
    for x in 0..g.num_objects() {
        out.add_term(Word::identity(g.root_of(x)), tr(f.at(x)));
    }
    for gen in g.generators() {
        out.add_term(Word::identity(g.root_of(gen.tgt)), -tr(f.at(gen.tgt)));
    }
    out
}

/// `Σ_c (1 - D_c)·tr(f_{x_c})·[id_{x_c}]`, `D_c` the rank of the isotropy
/// group of component `c` and `x_c` its root.
pub fn rep_total_trace_euler(g: &Graph, f: &RepEndo) -> FormalSum<Word> {
    let pi0 = g.pi0();
    let mut out = FormalSum::new();
    for c in 0..pi0.num_components() {
        let root = pi0.representative[c];
        let d = g.isotropy_rank(c) as i64;
        out.add_term(Word::identity(root), BigInt::from(1 - d) * tr(f.at(root)));
    }
    out
}

/// The total trace with coefficients in `m`, checked in both closed forms.
pub fn rep_total_trace(g: &Graph, m: &GpdRep, f: &RepEndo) -> Result<FormalSum<Word>, RepError> {
    if m.ranks.len() != g.num_objects() {
        return Err(RepError::Shape("representation does not match the graph".into()));
    }
    let sum = rep_total_trace_sum(g, f);
    let euler = rep_total_trace_euler(g, f);
    if sum != euler {
        return Err(RepError::RouteMismatch {
            quantity: "rep total trace",
            first: format!("{sum:?}"),
            second: format!("{euler:?}"),
        });
    }
    Ok(sum)
}

fn offsets(sizes: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut out = vec![0];
    for s in sizes {
        out.push(out.last().unwrap() + s);
    }
    out
}

/// Two-term model of the homotopy colimit: `(γ, p)` in degree 1 for
/// `p < rank(s(γ))`, `(x, p)` in degree 0, and
/// `d(γ, p) = M(γ)·e_p at t(γ) - e_p at s(γ)`.
pub fn hocolim_complex(g: &Graph, m: &GpdRep) -> ChainComplex {
    let obj = offsets(m.ranks.iter().copied());
    let gen = offsets(g.generators().iter().map(|e| m.rank(e.src)));
    let mut d = IntMatrix::zeros(*obj.last().unwrap(), *gen.last().unwrap());
    for (i, e) in g.generators().iter().enumerate() {
        let block = m.action(i);
        d.set_block(obj[e.tgt], gen[i], block);
        for p in 0..m.rank(e.src) {
            d[(obj[e.src] + p, gen[i] + p)] -= 1;
        }
    }
    ChainComplex::new(0, vec![d.rows(), d.cols()], vec![d]).expect("hocolim complex")
}

/// `f` acting blockwise: `f_x` on `(x, ·)` and `f_{s(γ)}` on `(γ, ·)`.
pub fn hocolim_endo(g: &Graph, m: &GpdRep, f: &RepEndo) -> Result<ChainMap, RepError> {
    let c = hocolim_complex(g, m);
    let f0 = IntMatrix::direct_sum(&f.maps);
    let f1 = IntMatrix::direct_sum(&g.generators().iter().map(|e| f.at(e.src).clone()).collect::<Vec<_>>());
    Ok(ChainMap::new(c.clone(), c, BTreeMap::from([(0, f0), (1, f1)]))?)
}

/// The Lefschetz number of `f` on the homotopy colimit, as a chain trace and
/// as `Σ_x tr(f_x) - Σ_γ tr(f_{t(γ)})`; the two must agree.
pub fn rep_lefschetz(g: &Graph, m: &GpdRep, f: &RepEndo) -> Result<BigInt, RepError> {
    let chain = lefschetz_trace(&hocolim_endo(g, m, f)?)?;
    let direct: BigInt = (0..g.num_objects()).map(|x| tr(f.at(x))).sum::<BigInt>()
        - g.generators().iter().map(|e| tr(f.at(e.tgt))).sum::<BigInt>();
    if chain != direct {
        return Err(RepError::RouteMismatch {
            quantity: "hocolim lefschetz",
            first: chain.to_string(),
            second: direct.to_string(),
        });
    }
    Ok(chain)
}
