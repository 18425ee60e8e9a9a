//! Seeded random instances, emitted as input documents.
//!
//! Every generator builds an object that satisfies the target module's
//! invariants by construction: endofunctor images are endpoint-compatible
//! words, representation actions are products of elementary matrices, and
//! natural endomorphisms are transported along a spanning forest.

use std::collections::{BTreeMap, VecDeque};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trace_kit_core::chain::{ChainComplex, ChainMap};
use trace_kit_core::freegpd::{reduce, Graph, GroupoidEnd, Letter, Word};
use trace_kit_core::gpdrep::{GpdRep, RepEndo};
use trace_kit_core::intlinalg::IntMatrix;
use trace_kit_core::matbicat::{FinGroup, FinGroupoid};

use crate::doc::{
    complex_doc, matrix_doc, CellDoc, CellPairDoc, EndoDoc, FinGpdRepDoc, FiniteGroupoidDoc, FiniteSetDoc,
    GeneratorDoc, GraphDoc, GroupDoc, InputDocument, Int, MatrixDoc, RepDoc,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, clap::ValueEnum)]
pub enum Kind {
    FreeGroupoidEndo,
    GpdRep,
    MatrixFamily,
    CellPair,
    FiniteGroupoidRep,
    GroupRingMatrix,
    ChainComplex,
    SetMap,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::FreeGroupoidEndo => "free-groupoid-endo",
            Kind::GpdRep => "gpd-rep",
            Kind::MatrixFamily => "matrix-family",
            Kind::CellPair => "cell-pair",
            Kind::FiniteGroupoidRep => "finite-groupoid-rep",
            Kind::GroupRingMatrix => "group-ring-matrix",
            Kind::ChainComplex => "chain-complex",
            Kind::SetMap => "set-map",
        }
    }

    fn stream(self) -> u64 {
        self as u64 + 1
    }

    pub fn default_size(self) -> Size {
        match self {
            Kind::FreeGroupoidEndo => Size {
                objects: 6,
                generators: 8,
                word_length: 6,
                rank: 0,
            },
            Kind::GpdRep => Size {
                objects: 5,
                generators: 7,
                word_length: 0,
                rank: 3,
            },
            Kind::MatrixFamily => Size {
                objects: 6,
                generators: 0,
                word_length: 0,
                rank: 4,
            },
            Kind::CellPair => Size {
                objects: 4,
                generators: 0,
                word_length: 0,
                rank: 3,
            },
            Kind::FiniteGroupoidRep => Size {
                objects: 2,
                generators: 0,
                word_length: 0,
                rank: 0,
            },
            Kind::GroupRingMatrix => Size {
                objects: 0,
                generators: 0,
                word_length: 0,
                rank: 3,
            },
            Kind::ChainComplex => Size {
                objects: 0,
                generators: 0,
                word_length: 0,
                rank: 4,
            },
            Kind::SetMap => Size {
                objects: 5,
                generators: 0,
                word_length: 0,
                rank: 0,
            },
        }
    }
}

/// Upper bounds on instance size. Fields a kind does not use are ignored.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Size {
    pub objects: usize,
    pub generators: usize,
    pub word_length: usize,
    pub rank: usize,
}

/// The generator for instance `index` of a run seeded with `seed`. Streams
/// are per kind, so suites that share a kind see the same instances.
pub fn instance_rng(kind: Kind, seed: u64, index: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream((kind.stream() << 40) | index);
    r
}

pub fn generate(kind: Kind, seed: u64, index: u64, size: &Size) -> InputDocument {
    let r = &mut instance_rng(kind, seed, index);
    match kind {
        Kind::FreeGroupoidEndo => {
            let g = random_graph(r, size.objects, size.generators);
            let phi = random_endo(r, &g, size.word_length);
            endo_document(&g, &phi)
        }
        Kind::GpdRep => {
            let g = random_graph(r, size.objects, size.generators);
            let (m, f) = random_rep(r, &g, size.rank.max(1));
            rep_document(&g, &m, &f)
        }
        Kind::MatrixFamily => random_family(r, size),
        Kind::CellPair => random_cell_pair(r, size),
        Kind::FiniteGroupoidRep => random_groupoid_rep(r, size),
        Kind::GroupRingMatrix => {
            let name = ["C2", "C3", "S3"][(index % 3) as usize];
            random_group_ring(r, name, size.rank.max(1))
        }
        Kind::ChainComplex => {
            let pair = [random_complex(r, -2, 2, size.rank), random_complex(r, -2, 2, size.rank)];
            InputDocument {
                complexes: pair.iter().map(complex_doc).collect(),
                ..Default::default()
            }
        }
        Kind::SetMap => {
            let n = if size.objects == 0 { 0 } else { r.gen_range(1..=size.objects) };
            let phi: Vec<usize> = (0..n).map(|_| r.gen_range(0..n)).collect();
            set_map_document(&phi)
        }
    }
}

pub fn random_graph(r: &mut ChaCha8Rng, max_obj: usize, max_gen: usize) -> Graph {
    if max_obj == 0 {
        return Graph::from_edges(0, &[]).expect("empty graph");
    }
    let n = r.gen_range(1..=max_obj);
    let m = r.gen_range(0..=max_gen);
    let edges: Vec<(usize, usize)> = (0..m).map(|_| (r.gen_range(0..n), r.gen_range(0..n))).collect();
    Graph::from_edges(n, &edges).expect("endpoints in range")
}

/// Shortest path of letters between two objects of one component.
fn path(g: &Graph, from: usize, to: usize) -> Vec<Letter> {
    let n = g.num_objects();
    let mut prev: Vec<Option<(usize, Letter)>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[from] = true;
    let mut q = VecDeque::from([from]);
    while let Some(x) = q.pop_front() {
        for l in g.letters_from(x) {
            let y = l.tgt(g);
            if !seen[y] {
                seen[y] = true;
                prev[y] = Some((x, l));
                q.push_back(y);
            }
        }
    }
    let mut out = Vec::new();
    let mut y = to;
    while y != from {
        let (x, l) = prev[y].expect("same component");
        out.push(l);
        y = x;
    }
    out.reverse();
    out
}

/// A reduced word `from → to` of length at most `max_len` when possible: a
/// random walk followed by a shortest path home.
pub fn random_word(r: &mut ChaCha8Rng, g: &Graph, from: usize, to: usize, max_len: usize) -> Word {
    let walk = r.gen_range(0..=max_len);
    let mut steps = Vec::with_capacity(walk);
    let mut x = from;
    for _ in 0..walk {
        let ls = g.letters_from(x);
        if ls.is_empty() {
            break;
        }
        let l = ls[r.gen_range(0..ls.len())];
        steps.push(l);
        x = l.tgt(g);
    }
    for keep in (0..=steps.len()).rev() {
        let mut letters = steps[..keep].to_vec();
        let end = if keep == 0 { from } else { steps[keep - 1].tgt(g) };
        letters.extend(path(g, end, to));
        let w = reduce(&Word::new(g, from, letters).expect("composable"));
        if w.len() <= max_len || keep == 0 {
            return w;
        }
    }
    unreachable!("the loop returns at keep = 0")
}

pub fn random_endo(r: &mut ChaCha8Rng, g: &Graph, max_len: usize) -> GroupoidEnd {
    let pi0 = g.pi0();
    let ncomp = pi0.num_components();
    let comp_map: Vec<usize> = (0..ncomp).map(|_| r.gen_range(0..ncomp)).collect();
    let object_map: Vec<usize> = (0..g.num_objects())
        .map(|x| {
            let target: Vec<usize> = pi0.members(comp_map[g.component_of(x)]).collect();
            target[r.gen_range(0..target.len())]
        })
        .collect();
    let images = g
        .generators()
        .iter()
        .map(|e| random_word(r, g, object_map[e.src], object_map[e.tgt], max_len))
        .collect();
    GroupoidEnd::new(g, object_map, images).expect("endpoint-compatible images")
}

pub fn random_matrix(r: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    IntMatrix::from_fn(rows, cols, |_, _| BigInt::from(r.gen_range(-bound..=bound)))
}

/// A product of elementary matrices and a sign, with its inverse.
pub fn random_unimodular(r: &mut ChaCha8Rng, n: usize) -> (IntMatrix, IntMatrix) {
    let mut u = IntMatrix::identity(n);
    let mut v = IntMatrix::identity(n);
    if n == 0 {
        return (u, v);
    }
    if r.gen_bool(0.5) {
        let i = r.gen_range(0..n);
        u[(i, i)] = BigInt::from(-1);
        v[(i, i)] = BigInt::from(-1);
    }
    if n == 1 {
        return (u, v);
    }
    for _ in 0..2 * n {
        let i = r.gen_range(0..n);
        let mut j = r.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let k = BigInt::from(r.gen_range(-2..=2));
        let mut e = IntMatrix::identity(n);
        e[(i, j)] = k.clone();
        let mut einv = IntMatrix::identity(n);
        einv[(i, j)] = -k;
        u = &e * &u;
        v = &v * &einv;
    }
    (u, v)
}

/// A complex conjugate to a split standard form, with an endomorphism that
/// is blockwise in the standard basis plus a null-homotopic part.
pub fn random_complex(r: &mut ChaCha8Rng, lo: i64, hi: i64, max_rank: usize) -> ChainMap {
    let len = (hi - lo + 1) as usize;
    let ranks: Vec<usize> = (0..len).map(|_| r.gen_range(0..=max_rank)).collect();
    // k[n] = rank of d out of degree lo+n, with k[n] + k[n+1] ≤ ranks[n]
    let mut k = vec![0usize; len + 1];
    for n in 1..len {
        let room = (ranks[n - 1] - k[n - 1]).min(ranks[n]);
        k[n] = r.gen_range(0..=room);
    }
    let scale: Vec<i64> = (0..=len).map(|_| r.gen_range(1..=3)).collect();
    let ps: Vec<(IntMatrix, IntMatrix)> = ranks.iter().map(|&n| random_unimodular(r, n)).collect();
    let mut diffs = Vec::new();
    for n in 1..len {
        let mut d = IntMatrix::zeros(ranks[n - 1], ranks[n]);
        for i in 0..k[n] {
            d[(i, ranks[n] - k[n] + i)] = BigInt::from(scale[n]);
        }
        diffs.push(&(&ps[n - 1].0 * &d) * &ps[n].1);
    }
    let complex = ChainComplex::new(lo, ranks.clone(), diffs).expect("split complex");

    let mut bprime: Vec<IntMatrix> = (0..len).map(|n| random_matrix(r, k[n], k[n], 2)).collect();
    bprime.push(IntMatrix::zeros(0, 0));
    let mut maps = BTreeMap::new();
    for n in 0..len {
        let b = k[n + 1];
        let h = ranks[n] - b - k[n];
        let upper = if n + 1 < len { bprime[n + 1].clone() } else { IntMatrix::zeros(0, 0) };
        let block = IntMatrix::direct_sum(&[upper, random_matrix(r, h, h, 2), bprime[n].clone()]);
        maps.insert(lo + n as i64, &(&ps[n].0 * &block) * &ps[n].1);
    }
    let hs: Vec<IntMatrix> = (0..len)
        .map(|n| {
            let up = if n + 1 < len { ranks[n + 1] } else { 0 };
            random_matrix(r, up, ranks[n], 1)
        })
        .collect();
    for n in 0..len {
        let deg = lo + n as i64;
        let mut m = maps[&deg].clone();
        if n + 1 < len {
            m = &m + &(&complex.d(deg + 1) * &hs[n]);
        }
        if n >= 1 {
            m = &m + &(&hs[n - 1] * &complex.d(deg));
        }
        maps.insert(deg, m);
    }
    ChainMap::new(complex.clone(), complex, maps).expect("chain endomorphism")
}

/// A unimodular representation with a natural endomorphism. Tree edges act
/// by random unimodular matrices; the loops of each component act at the
/// root by `±B^k` for one matrix `B`, and the root endomorphism `a·I + b·B`
/// is transported along the forest.
pub fn random_rep(r: &mut ChaCha8Rng, g: &Graph, max_rank: usize) -> (GpdRep, RepEndo) {
    let pi0 = g.pi0();
    let forest = g.forest();
    let comp_rank: Vec<usize> = (0..pi0.num_components()).map(|_| r.gen_range(1..=max_rank)).collect();
    let ranks: Vec<usize> = (0..g.num_objects()).map(|x| comp_rank[g.component_of(x)]).collect();
    let bases: Vec<(IntMatrix, IntMatrix)> = comp_rank.iter().map(|&n| random_unimodular(r, n)).collect();
    let mut action = vec![IntMatrix::zeros(0, 0); g.num_generators()];
    let mut inverse = vec![IntMatrix::zeros(0, 0); g.num_generators()];
    for &e in &g.tree_edges() {
        let (u, v) = random_unimodular(r, ranks[g.generators()[e].src]);
        action[e] = u;
        inverse[e] = v;
    }
    let path_action = |x: usize, action: &[IntMatrix], inverse: &[IntMatrix]| {
        let mut out = IntMatrix::identity(ranks[x]);
        for l in forest.root_path[x].letters() {
            out = &(if l.inverse { &inverse[l.gen] } else { &action[l.gen] }).clone() * &out;
        }
        out
    };
    for e in 0..g.num_generators() {
        if forest.is_tree[e] {
            continue;
        }
        let gen = &g.generators()[e];
        let c = g.component_of(gen.src);
        let (b, binv) = &bases[c];
        let k = r.gen_range(-2i32..=2);
        let mut loop_m = IntMatrix::identity(comp_rank[c]);
        let mut loop_inv = IntMatrix::identity(comp_rank[c]);
        for _ in 0..k.unsigned_abs() {
            let (s, t) = if k > 0 { (b, binv) } else { (binv, b) };
            loop_m = &loop_m * s;
            loop_inv = &loop_inv * t;
        }
        if r.gen_bool(0.3) {
            loop_m = -&loop_m;
            loop_inv = -&loop_inv;
        }
        let ps = path_action(gen.src, &action, &inverse);
        let pt = path_action(gen.tgt, &action, &inverse);
        let ps_inv = ps.inverse_unimodular().expect("unimodular");
        let pt_inv = pt.inverse_unimodular().expect("unimodular");
        action[e] = &(&pt * &loop_m) * &ps_inv;
        inverse[e] = &(&ps * &loop_inv) * &pt_inv;
    }
    let m = GpdRep::new(g, ranks.clone(), action.clone()).expect("unimodular action");
    let roots: Vec<IntMatrix> = (0..pi0.num_components())
        .map(|c| {
            let a = BigInt::from(r.gen_range(-3..=3));
            let b = BigInt::from(r.gen_range(-2..=2));
            &IntMatrix::identity(comp_rank[c]).scaled(&a) + &bases[c].0.scaled(&b)
        })
        .collect();
    let maps = (0..g.num_objects())
        .map(|x| {
            let p = path_action(x, &action, &inverse);
            &(&p * &roots[g.component_of(x)]) * &p.inverse_unimodular().expect("unimodular")
        })
        .collect();
    let f = RepEndo::new(g, &m, maps).expect("natural by construction");
    (m, f)
}

fn random_family(r: &mut ChaCha8Rng, size: &Size) -> InputDocument {
    let n = if size.objects == 0 { 0 } else { r.gen_range(1..=size.objects) };
    let elements: Vec<String> = (0..n).map(|i| format!("a{i}")).collect();
    let family = elements
        .iter()
        .map(|a| {
            let k = r.gen_range(0..=size.rank);
            (a.clone(), matrix_doc(&random_matrix(r, k, k, 3)))
        })
        .collect();
    let map = elements
        .iter()
        .map(|a| (a.clone(), elements[r.gen_range(0..n)].clone()))
        .collect();
    InputDocument {
        finite_set: Some(FiniteSetDoc {
            elements,
            map: Some(map),
            family: Some(family),
        }),
        ..Default::default()
    }
}

fn random_cell(r: &mut ChaCha8Rng, source: usize, target: usize, max_rank: usize) -> CellDoc {
    let ranks: Vec<usize> = (0..source * target).map(|_| r.gen_range(0..=max_rank)).collect();
    let endo = ranks.iter().map(|&k| matrix_doc(&random_matrix(r, k, k, 2))).collect();
    CellDoc {
        source,
        target,
        ranks,
        endo,
    }
}

fn random_cell_pair(r: &mut ChaCha8Rng, size: &Size) -> InputDocument {
    let max = size.objects.max(1);
    let (a, b) = (r.gen_range(1..=max), r.gen_range(1..=max));
    let m = random_cell(r, a, b, size.rank);
    let n = random_cell(r, b, a, size.rank);
    InputDocument {
        cell_pair: Some(CellPairDoc { m, n }),
        ..Default::default()
    }
}

fn group_ring_entry(r: &mut ChaCha8Rng, g: &FinGroup) -> BTreeMap<String, Int> {
    g.labels()
        .iter()
        .filter_map(|l| {
            let c = r.gen_range(-3..=3);
            (c != 0).then(|| (l.clone(), Int::from(c)))
        })
        .collect()
}

fn group_ring_matrix(r: &mut ChaCha8Rng, g: &FinGroup, rows: usize, cols: usize) -> Vec<Vec<BTreeMap<String, Int>>> {
    (0..rows)
        .map(|_| (0..cols).map(|_| group_ring_entry(r, g)).collect())
        .collect()
}

/// Five matrices over `Z[G]`: a square `f`, a composable rectangular pair
/// `m`, `n`, and an elementary `u` with its inverse.
fn random_group_ring(r: &mut ChaCha8Rng, name: &str, max_size: usize) -> InputDocument {
    let g = crate::doc::named_group(name).expect("known group");
    let p = r.gen_range(1..=max_size);
    let q = r.gen_range(1..=max_size);
    let f = group_ring_matrix(r, &g, p, p);
    let m = group_ring_matrix(r, &g, p, q);
    let n = group_ring_matrix(r, &g, q, p);
    let identity = |p: usize| -> Vec<Vec<BTreeMap<String, Int>>> {
        (0..p)
            .map(|i| {
                (0..p)
                    .map(|j| {
                        if i == j {
                            BTreeMap::from([(g.labels()[g.identity()].clone(), Int::from(1))])
                        } else {
                            BTreeMap::new()
                        }
                    })
                    .collect()
            })
            .collect()
    };
    let (mut u, mut uinv) = (identity(p), identity(p));
    if p > 1 {
        let i = r.gen_range(0..p);
        let mut j = r.gen_range(0..p - 1);
        if j >= i {
            j += 1;
        }
        let x = g.labels()[r.gen_range(0..g.order())].clone();
        let c = if r.gen_bool(0.5) { 1 } else { -1 };
        u[i][j] = BTreeMap::from([(x.clone(), Int::from(c))]);
        uinv[i][j] = BTreeMap::from([(x, Int::from(-c))]);
    } else {
        // a unit of Z[G] on the diagonal
        let x = r.gen_range(0..g.order());
        u[0][0] = BTreeMap::from([(g.labels()[x].clone(), Int::from(1))]);
        uinv[0][0] = BTreeMap::from([(g.labels()[g.inv(x)].clone(), Int::from(1))]);
    }
    InputDocument {
        group: Some(GroupDoc {
            name: Some(name.to_string()),
            elements: None,
            table: None,
            matrices: vec![f, m, n, u, uinv],
        }),
        ..Default::default()
    }
}

/// The regular representation of `G × pair(n)` with an endomorphism that is
/// an integer combination of right multiplications.
fn random_groupoid_rep(r: &mut ChaCha8Rng, size: &Size) -> InputDocument {
    let name = ["C2", "C3", "S3"][r.gen_range(0..3)];
    let g = crate::doc::named_group(name).expect("known group");
    let n = r.gen_range(1..=size.objects.max(1));
    let a = FinGroupoid::group_times_pair(&g, n);
    let order = g.order();
    let perm = |x: usize, left: bool| {
        IntMatrix::from_fn(order, order, |i, j| {
            let image = if left { g.mul(x, j) } else { g.mul(j, x) };
            BigInt::from((image == i) as i64)
        })
    };
    let ranks = a.objects().iter().map(|o| (o.clone(), order)).collect();
    let action = (0..a.num_morphisms())
        .map(|k| (a.name(k).to_string(), matrix_doc(&perm(k % order, true))))
        .collect();
    let mut endo = IntMatrix::zeros(order, order);
    for z in 0..order {
        let c = BigInt::from(r.gen_range(-2..=2));
        endo = &endo + &perm(z, false).scaled(&c);
    }
    let endo = a.objects().iter().map(|o| (o.clone(), matrix_doc(&endo))).collect();
    InputDocument {
        group: Some(GroupDoc {
            name: Some(name.to_string()),
            elements: None,
            table: None,
            matrices: Vec::new(),
        }),
        finite_groupoid: Some(FiniteGroupoidDoc {
            group_times_pair: Some(n),
            objects: None,
            morphisms: None,
            then: None,
            rep: FinGpdRepDoc { ranks, action, endo },
        }),
        ..Default::default()
    }
}

pub fn graph_doc(g: &Graph) -> GraphDoc {
    GraphDoc {
        objects: g.objects().to_vec(),
        generators: g
            .generators()
            .iter()
            .map(|e| GeneratorDoc {
                name: e.name.clone(),
                src: g.objects()[e.src].clone(),
                tgt: g.objects()[e.tgt].clone(),
            })
            .collect(),
    }
}

pub fn word_doc(g: &Graph, w: &Word) -> Vec<(String, i64)> {
    w.letters()
        .iter()
        .map(|l| (g.generators()[l.gen].name.clone(), l.exp()))
        .collect()
}

pub fn endo_document(g: &Graph, phi: &GroupoidEnd) -> InputDocument {
    let object_map = (0..g.num_objects())
        .map(|x| (g.objects()[x].clone(), g.objects()[phi.image_object(x)].clone()))
        .collect();
    let generator_map = g
        .generators()
        .iter()
        .enumerate()
        .map(|(i, e)| (e.name.clone(), word_doc(g, phi.image_generator(i))))
        .collect();
    InputDocument {
        graph: Some(graph_doc(g)),
        endo: Some(EndoDoc {
            object_map,
            generator_map,
        }),
        ..Default::default()
    }
}

pub fn rep_document(g: &Graph, m: &GpdRep, f: &RepEndo) -> InputDocument {
    let ranks = (0..g.num_objects()).map(|x| (g.objects()[x].clone(), m.rank(x))).collect();
    let action = g
        .generators()
        .iter()
        .enumerate()
        .map(|(i, e)| (e.name.clone(), matrix_doc(m.action(i))))
        .collect();
    let rep_endo: BTreeMap<String, MatrixDoc> = (0..g.num_objects())
        .map(|x| (g.objects()[x].clone(), matrix_doc(f.at(x))))
        .collect();
    InputDocument {
        graph: Some(graph_doc(g)),
        rep: Some(RepDoc { ranks, action }),
        rep_endo: Some(rep_endo),
        ..Default::default()
    }
}

pub fn set_map_document(phi: &[usize]) -> InputDocument {
    let elements: Vec<String> = (0..phi.len()).map(|i| format!("a{i}")).collect();
    let map = phi.iter().enumerate().map(|(i, &j)| (elements[i].clone(), elements[j].clone())).collect();
    InputDocument {
        finite_set: Some(FiniteSetDoc {
            elements,
            map: Some(map),
            family: None,
        }),
        ..Default::default()
    }
}

/// The circle `x` with loop `a` and the endofunctor `a ↦ a^d`.
pub fn circle_document(d: i64) -> InputDocument {
    let letter = if d >= 0 { 1 } else { -1 };
    let image = (0..d.unsigned_abs()).map(|_| ("a".to_string(), letter)).collect();
    InputDocument {
        graph: Some(GraphDoc {
            objects: vec!["x".into()],
            generators: vec![GeneratorDoc {
                name: "a".into(),
                src: "x".into(),
                tgt: "x".into(),
            }],
        }),
        endo: Some(EndoDoc {
            object_map: BTreeMap::from([("x".into(), "x".into())]),
            generator_map: BTreeMap::from([("a".into(), image)]),
        }),
        ..Default::default()
    }
}
