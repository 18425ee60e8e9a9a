#![allow(dead_code)]

use std::collections::{BTreeMap, VecDeque};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trace_kit_core::chain::{ChainComplex, ChainMap};
use trace_kit_core::freegpd::{Graph, GroupoidEnd, Letter, Word};
use trace_kit_core::intlinalg::IntMatrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_graph(r: &mut ChaCha8Rng, max_obj: usize, max_gen: usize) -> Graph {
    let n = r.gen_range(1..=max_obj);
    let m = r.gen_range(0..=max_gen);
    let edges: Vec<(usize, usize)> = (0..m).map(|_| (r.gen_range(0..n), r.gen_range(0..n))).collect();
    Graph::from_edges(n, &edges).unwrap()
}

/// Undirected components by flood fill, independent of the library's forest.
pub fn components(g: &Graph) -> Vec<usize> {
    let n = g.num_objects();
    let mut comp = vec![usize::MAX; n];
    let mut next = 0;
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = next;
        let mut q = VecDeque::from([s]);
        while let Some(x) = q.pop_front() {
            for e in g.generators() {
                for (a, b) in [(e.src, e.tgt), (e.tgt, e.src)] {
                    if a == x && comp[b] == usize::MAX {
                        comp[b] = next;
                        q.push_back(b);
                    }
                }
            }
        }
        next += 1;
    }
    comp
}

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
        let (x, l) = prev[y].expect("connected");
        out.push(l);
        y = x;
    }
    out.reverse();
    out
}

/// A word from `from` to `to`: a random walk followed by a shortest path.
pub fn random_word(r: &mut ChaCha8Rng, g: &Graph, from: usize, to: usize, walk: usize) -> Word {
    let mut letters = Vec::new();
    let mut x = from;
    for _ in 0..walk {
        let ls = g.letters_from(x);
        if ls.is_empty() {
            break;
        }
        let l = ls[r.gen_range(0..ls.len())];
        letters.push(l);
        x = l.tgt(g);
    }
    letters.extend(path(g, x, to));
    Word::new(g, from, letters).unwrap()
}

pub fn random_endo(r: &mut ChaCha8Rng, g: &Graph, max_walk: usize) -> GroupoidEnd {
    let comp = components(g);
    let ncomp = comp.iter().max().map_or(0, |m| m + 1);
    let comp_map: Vec<usize> = (0..ncomp).map(|_| r.gen_range(0..ncomp)).collect();
    let object_map: Vec<usize> = (0..g.num_objects())
        .map(|x| {
            let target: Vec<usize> = (0..g.num_objects()).filter(|&y| comp[y] == comp_map[comp[x]]).collect();
            target[r.gen_range(0..target.len())]
        })
        .collect();
    let images = g
        .generators()
        .iter()
        .map(|e| {
            let walk = r.gen_range(0..=max_walk);
            random_word(r, g, object_map[e.src], object_map[e.tgt], walk)
        })
        .collect();
    GroupoidEnd::new(g, object_map, images).unwrap()
}

pub fn random_matrix(r: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    IntMatrix::from_fn(rows, cols, |_, _| BigInt::from(r.gen_range(-bound..=bound)))
}

/// A product of elementary matrices, with its inverse.
pub fn random_unimodular(r: &mut ChaCha8Rng, n: usize) -> (IntMatrix, IntMatrix) {
    let mut u = IntMatrix::identity(n);
    let mut v = IntMatrix::identity(n);
    if n < 2 {
        if n == 1 && r.gen_bool(0.5) {
            u[(0, 0)] = BigInt::from(-1);
            v[(0, 0)] = BigInt::from(-1);
        }
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

/// A random complex `P·D·P⁻¹` conjugate to a standard split complex, and a
/// chain endomorphism built blockwise plus a null-homotopic part.
pub struct RandomComplex {
    pub complex: ChainComplex,
    pub endo: ChainMap,
    /// `Σ (-1)^n tr` of the homology blocks.
    pub expected_lefschetz: BigInt,
}

pub fn random_complex(r: &mut ChaCha8Rng, lo: i64, hi: i64, max_rank: usize) -> RandomComplex {
    let len = (hi - lo + 1) as usize;
    let ranks: Vec<usize> = (0..len).map(|_| r.gen_range(0..=max_rank)).collect();
    // k[n] = rank of d from degree lo+n to lo+n-1, with k[n] + k[n+1] ≤ ranks[n]
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
    let complex = ChainComplex::new(lo, ranks.clone(), diffs).unwrap();

    // blockwise map in the standard basis: B_n (first k[n+1]) copies the
    // block on B'_{n+1}; H_n arbitrary; B'_n (last k[n]) arbitrary
    let mut bprime: Vec<IntMatrix> = (0..len).map(|n| random_matrix(r, k[n], k[n], 2)).collect();
    bprime.push(IntMatrix::zeros(0, 0));
    let mut expected = BigInt::from(0);
    let mut std_maps = Vec::new();
    for n in 0..len {
        let b = k.get(n + 1).copied().unwrap_or(0);
        let h = ranks[n] - b - k[n];
        let hmat = random_matrix(r, h, h, 2);
        let tr: BigInt = (0..h).map(|i| hmat[(i, i)].clone()).sum();
        let deg = lo + n as i64;
        if deg.rem_euclid(2) == 0 {
            expected += tr;
        } else {
            expected -= tr;
        }
        let upper = if n + 1 < len { bprime[n + 1].clone() } else { IntMatrix::zeros(0, 0) };
        std_maps.push(IntMatrix::direct_sum(&[upper, hmat, bprime[n].clone()]));
    }
    let mut maps = BTreeMap::new();
    for n in 0..len {
        maps.insert(lo + n as i64, &(&ps[n].0 * &std_maps[n]) * &ps[n].1);
    }
    // add d·h + h·d for a random degree-raising h
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
    let endo = ChainMap::new(complex.clone(), complex.clone(), maps).unwrap();
    RandomComplex {
        complex,
        endo,
        expected_lefschetz: expected,
    }
}

/// Word action of a representation computed letter by letter.
fn action_of(g: &Graph, m: &[IntMatrix], inv: &[IntMatrix], ranks: &[usize], w: &Word) -> IntMatrix {
    let mut out = IntMatrix::identity(ranks[w.src()]);
    for l in w.letters() {
        out = &(if l.inverse { &inv[l.gen] } else { &m[l.gen] }).clone() * &out;
    }
    let _ = g;
    out
}

/// A unimodular representation with a natural endomorphism: tree edges act
/// arbitrarily, loops at the root act by `±B^k` and `f_root = a·I + b·B`.
pub fn random_rep(
    r: &mut ChaCha8Rng,
    g: &Graph,
    max_rank: usize,
) -> (trace_kit_core::gpdrep::GpdRep, trace_kit_core::gpdrep::RepEndo) {
    use trace_kit_core::gpdrep::{GpdRep, RepEndo};
    let pi0 = g.pi0();
    let forest = g.forest();
    let comp_rank: Vec<usize> = (0..pi0.num_components()).map(|_| r.gen_range(1..=max_rank)).collect();
    let ranks: Vec<usize> = (0..g.num_objects()).map(|x| comp_rank[g.component_of(x)]).collect();
    let bases: Vec<(IntMatrix, IntMatrix)> = comp_rank.iter().map(|&n| random_unimodular(r, n)).collect();
    let mut action = vec![IntMatrix::zeros(0, 0); g.num_generators()];
    let mut inverse = vec![IntMatrix::zeros(0, 0); g.num_generators()];
    for &e in &g.tree_edges() {
        let n = ranks[g.generators()[e].src];
        let (u, v) = random_unimodular(r, n);
        action[e] = u;
        inverse[e] = v;
    }
    let path_action = |x: usize, action: &[IntMatrix], inverse: &[IntMatrix]| {
        action_of(g, action, inverse, &ranks, &forest.root_path[x])
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
        let ps_inv = ps.inverse_unimodular().unwrap();
        let pt_inv = pt.inverse_unimodular().unwrap();
        // M(h) = M(T t) · L · M(T s)⁻¹
        action[e] = &(&pt * &loop_m) * &ps_inv;
        inverse[e] = &(&ps * &loop_inv) * &pt_inv;
    }
    let m = GpdRep::new(g, ranks.clone(), action.clone()).unwrap();
    let roots: Vec<IntMatrix> = (0..pi0.num_components())
        .map(|c| {
            let a = BigInt::from(r.gen_range(-3..=3));
            let bcoef = BigInt::from(r.gen_range(-2..=2));
            &IntMatrix::identity(comp_rank[c]).scaled(&a) + &bases[c].0.scaled(&bcoef)
        })
        .collect();
    let maps = (0..g.num_objects())
        .map(|x| {
            let p = path_action(x, &action, &inverse);
            &(&p * &roots[g.component_of(x)]) * &p.inverse_unimodular().unwrap()
        })
        .collect();
    let f = RepEndo::new(g, &m, maps).unwrap();
    (m, f)
}
