//! Bounded chain complexes of finitely generated free abelian groups.
//!
//! Grading is homological: `d_n: C_n → C_{n-1}`. Degrees outside the stored
//! range have rank zero. Tensor products use the Koszul rule
//! `d(x⊗y) = dx⊗y + (-1)^{|x|} x⊗dy`, and the basis of `(C⊗D)_n` is ordered
//! lexicographically by `(p, index in C_p, index in D_q)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::intlinalg::{kron, trace, Cokernel, CokernelElement, IntMatrix, LinAlgError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("d∘d ≠ 0 at degree {degree}: entry ({row}, {col}) of d_{{n-1}}·d_n is {value}")]
    NotAComplex {
        degree: i64,
        row: usize,
        col: usize,
        value: BigInt,
    },
    #[error("chain map square fails at degree {degree}: entry ({row}, {col})")]
    NotAChainMap { degree: i64, row: usize, col: usize },
    #[error("shape error: {0}")]
    Shape(String),
    #[error("not an endomorphism")]
    NotEndomorphism,
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

fn sign(parity: i64) -> i32 {
    if parity.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainComplex {
    lo: i64,
    ranks: Vec<usize>,
    /// `diffs[k]` is `d_{lo+k+1}`.
    diffs: Vec<IntMatrix>,
}

impl ChainComplex {
    /// `diffs` lists `d_{lo+1}, …, d_hi`. Shapes and `d∘d = 0` are checked.
    pub fn new(lo: i64, ranks: Vec<usize>, diffs: Vec<IntMatrix>) -> Result<Self, ChainError> {
        let c = Self::unvalidated(lo, ranks, diffs)?;
        c.validate()?;
        Ok(c)
    }

    /// Checks shapes only; call [`ChainComplex::validate`] for `d∘d = 0`.
    pub fn unvalidated(lo: i64, ranks: Vec<usize>, diffs: Vec<IntMatrix>) -> Result<Self, ChainError> {
        if diffs.len() != ranks.len().saturating_sub(1) {
            return Err(ChainError::Shape(format!(
                "{} differentials for {} degrees",
                diffs.len(),
                ranks.len()
            )));
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.shape() != (ranks[k], ranks[k + 1]) {
                return Err(ChainError::Shape(format!(
                    "d_{} has shape {:?}, expected {:?}",
                    lo + k as i64 + 1,
                    d.shape(),
                    (ranks[k], ranks[k + 1])
                )));
            }
        }
        Ok(ChainComplex { lo, ranks, diffs })
    }

    pub fn zero() -> Self {
        ChainComplex {
            lo: 0,
            ranks: Vec::new(),
            diffs: Vec::new(),
        }
    }

    /// `Z` in degree 0.
    pub fn unit() -> Self {
        ChainComplex {
            lo: 0,
            ranks: vec![1],
            diffs: Vec::new(),
        }
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Top degree; `lo - 1` for the zero complex.
    pub fn hi(&self) -> i64 {
        self.lo + self.ranks.len() as i64 - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi()
    }

    pub fn rank(&self, n: i64) -> usize {
        if n < self.lo || n > self.hi() {
            0
        } else {
            self.ranks[(n - self.lo) as usize]
        }
    }

    /// `d_n`, a `rank(n-1) × rank(n)` matrix.
    pub fn d(&self, n: i64) -> IntMatrix {
        if n > self.lo && n <= self.hi() {
            self.diffs[(n - self.lo - 1) as usize].clone()
        } else {
            IntMatrix::zeros(self.rank(n - 1), self.rank(n))
        }
    }

    pub fn euler_characteristic(&self) -> BigInt {
        self.degrees()
            .map(|n| BigInt::from(sign(n)) * BigInt::from(self.rank(n)))
            .sum()
    }

    /// Confirms `d_{n-1}·d_n = 0`, reporting the first violating degree.
    pub fn validate(&self) -> Result<(), ChainError> {
        for n in self.lo + 2..=self.hi() {
            let dd = &self.d(n - 1) * &self.d(n);
            for row in 0..dd.rows() {
                for col in 0..dd.cols() {
                    if !dd[(row, col)].is_zero() {
                        return Err(ChainError::NotAComplex {
                            degree: n,
                            row,
                            col,
                            value: dd[(row, col)].clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

/// Validates a chain complex.
pub fn validate(c: &ChainComplex) -> Result<(), ChainError> {
    c.validate()
}

/// A degree-preserving chain map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainMap {
    source: ChainComplex,
    target: ChainComplex,
    maps: BTreeMap<i64, IntMatrix>,
}

impl ChainMap {
    /// `maps` gives `f_n` for any degrees; missing degrees are zero. Shapes
    /// and the chain-map squares are checked.
    pub fn new(source: ChainComplex, target: ChainComplex, maps: BTreeMap<i64, IntMatrix>) -> Result<Self, ChainError> {
        let mut clean = BTreeMap::new();
        for (n, m) in maps {
            let expected = (target.rank(n), source.rank(n));
            if m.shape() != expected {
                return Err(ChainError::Shape(format!(
                    "f_{n} has shape {:?}, expected {expected:?}",
                    m.shape()
                )));
            }
            if expected.0 > 0 && expected.1 > 0 {
                clean.insert(n, m);
            }
        }
        let f = ChainMap {
            source,
            target,
            maps: clean,
        };
        f.validate()?;
        Ok(f)
    }

    pub fn from_fn(source: ChainComplex, target: ChainComplex, f: impl Fn(i64) -> IntMatrix) -> Result<Self, ChainError> {
        let lo = source.lo().max(target.lo());
        let hi = source.hi().min(target.hi());
        let maps = (lo..=hi).map(|n| (n, f(n))).collect();
        Self::new(source, target, maps)
    }

    pub fn identity(c: &ChainComplex) -> Self {
        let maps = c.degrees().map(|n| (n, IntMatrix::identity(c.rank(n)))).collect();
        ChainMap::new(c.clone(), c.clone(), maps).expect("identity is a chain map")
    }

    pub fn source(&self) -> &ChainComplex {
        &self.source
    }

    pub fn target(&self) -> &ChainComplex {
        &self.target
    }

    pub fn at(&self, n: i64) -> IntMatrix {
        self.maps
            .get(&n)
            .cloned()
            .unwrap_or_else(|| IntMatrix::zeros(self.target.rank(n), self.source.rank(n)))
    }

    fn degree_span(&self) -> std::ops::RangeInclusive<i64> {
        self.source.lo().min(self.target.lo())..=self.source.hi().max(self.target.hi())
    }

    /// Checks `d^tgt_n · f_n = f_{n-1} · d^src_n` in every degree.
    pub fn validate(&self) -> Result<(), ChainError> {
        for n in self.degree_span() {
            let lhs = &self.target.d(n) * &self.at(n);
            let rhs = &self.at(n - 1) * &self.source.d(n);
            if lhs != rhs {
                let diff = &lhs - &rhs;
                let (row, col) = (0..diff.rows())
                    .flat_map(|i| (0..diff.cols()).map(move |j| (i, j)))
                    .find(|&(i, j)| !diff[(i, j)].is_zero())
                    .unwrap_or((0, 0));
                return Err(ChainError::NotAChainMap { degree: n, row, col });
            }
        }
        Ok(())
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &ChainMap) -> Result<ChainMap, ChainError> {
        if self.target != next.source {
            return Err(ChainError::Shape("composing maps with mismatched complexes".into()));
        }
        let maps = self
            .degree_span()
            .map(|n| (n, &next.at(n) * &self.at(n)))
            .filter(|(n, _)| self.source.rank(*n) > 0 && next.target.rank(*n) > 0)
            .collect();
        ChainMap::new(self.source.clone(), next.target.clone(), maps)
    }

    pub fn is_endomorphism(&self) -> bool {
        self.source == self.target
    }
}

/// `Σ_n (-1)^n tr(f_n)`.
pub fn lefschetz_trace(f: &ChainMap) -> Result<BigInt, ChainError> {
    if !f.is_endomorphism() {
        return Err(ChainError::NotEndomorphism);
    }
    let mut total = BigInt::zero();
    for n in f.source.degrees() {
        total += BigInt::from(sign(n)) * trace(&f.at(n))?;
    }
    Ok(total)
}

/// Offset of the block `C_p ⊗ D_q` inside `(C⊗D)_{p+q}`.
pub fn tensor_offset(c: &ChainComplex, d: &ChainComplex, p: i64, q: i64) -> usize {
    let n = p + q;
    (c.lo()..p).map(|p2| c.rank(p2) * d.rank(n - p2)).sum()
}

/// Index of `e_{p,i} ⊗ f_{q,j}` in `(C⊗D)_{p+q}`.
pub fn tensor_index(c: &ChainComplex, d: &ChainComplex, p: i64, i: usize, q: i64, j: usize) -> usize {
    tensor_offset(c, d, p, q) + i * d.rank(q) + j
}

fn tensor_rank(c: &ChainComplex, d: &ChainComplex, n: i64) -> usize {
    c.degrees().map(|p| c.rank(p) * d.rank(n - p)).sum()
}

pub fn tensor(c: &ChainComplex, d: &ChainComplex) -> ChainComplex {
    if c.ranks.is_empty() || d.ranks.is_empty() {
        return ChainComplex::zero();
    }
    let lo = c.lo() + d.lo();
    let hi = c.hi() + d.hi();
    let ranks: Vec<usize> = (lo..=hi).map(|n| tensor_rank(c, d, n)).collect();
    let mut diffs = Vec::new();
    for n in lo + 1..=hi {
        let mut m = IntMatrix::zeros(tensor_rank(c, d, n - 1), tensor_rank(c, d, n));
        for p in c.degrees() {
            let q = n - p;
            if c.rank(p) == 0 || d.rank(q) == 0 {
                continue;
            }
            let col = tensor_offset(c, d, p, q);
            if c.rank(p - 1) > 0 {
                let block = kron(&c.d(p), &IntMatrix::identity(d.rank(q)), 1);
                m.set_block(tensor_offset(c, d, p - 1, q), col, &block);
            }
            if d.rank(q - 1) > 0 {
                let block = kron(&IntMatrix::identity(c.rank(p)), &d.d(q), sign(p));
                m.set_block(tensor_offset(c, d, p, q - 1), col, &block);
            }
        }
        diffs.push(m);
    }
    ChainComplex::new(lo, ranks, diffs).expect("tensor product of complexes is a complex")
}

/// `f ⊗ g`, acting blockwise by `kron(f_p, g_q)`.
pub fn tensor_map(f: &ChainMap, g: &ChainMap) -> Result<ChainMap, ChainError> {
    let src = tensor(f.source(), g.source());
    let tgt = tensor(f.target(), g.target());
    let mut maps = BTreeMap::new();
    for n in src.degrees() {
        let mut m = IntMatrix::zeros(tgt.rank(n), src.rank(n));
        for p in f.source().degrees() {
            let q = n - p;
            let block = kron(&f.at(p), &g.at(q), 1);
            if block.rows() == 0 || block.cols() == 0 {
                continue;
            }
            m.set_block(
                tensor_offset(f.target(), g.target(), p, q),
                tensor_offset(f.source(), g.source(), p, q),
                &block,
            );
        }
        maps.insert(n, m);
    }
    ChainMap::new(src, tgt, maps)
}

/// Symmetry `C⊗D → D⊗C`, `x⊗y ↦ (-1)^{|x||y|} y⊗x`.
pub fn symmetry(c: &ChainComplex, d: &ChainComplex) -> ChainMap {
    let src = tensor(c, d);
    let tgt = tensor(d, c);
    let mut maps = BTreeMap::new();
    for n in src.degrees() {
        let mut m = IntMatrix::zeros(tgt.rank(n), src.rank(n));
        for p in c.degrees() {
            let q = n - p;
            let s = BigInt::from(sign(p * q));
            for i in 0..c.rank(p) {
                for j in 0..d.rank(q) {
                    m[(tensor_index(d, c, q, j, p, i), tensor_index(c, d, p, i, q, j))] = s.clone();
                }
            }
        }
        maps.insert(n, m);
    }
    ChainMap::new(src, tgt, maps).expect("symmetry is a chain map")
}

/// Associator `(A⊗B)⊗C → A⊗(B⊗C)`, a basis permutation.
pub fn associator(a: &ChainComplex, b: &ChainComplex, c: &ChainComplex) -> ChainMap {
    let ab = tensor(a, b);
    let bc = tensor(b, c);
    let src = tensor(&ab, c);
    let tgt = tensor(a, &bc);
    let mut maps = BTreeMap::new();
    for n in src.degrees() {
        let mut m = IntMatrix::zeros(tgt.rank(n), src.rank(n));
        for p in a.degrees() {
            for q in b.degrees() {
                let s = n - p - q;
                for i in 0..a.rank(p) {
                    for j in 0..b.rank(q) {
                        for k in 0..c.rank(s) {
                            let from = tensor_index(&ab, c, p + q, tensor_index(a, b, p, i, q, j), s, k);
                            let to = tensor_index(a, &bc, p, i, q + s, tensor_index(b, c, q, j, s, k));
                            m[(to, from)] = BigInt::one();
                        }
                    }
                }
            }
        }
        maps.insert(n, m);
    }
    ChainMap::new(src, tgt, maps).expect("associator is a chain map")
}

/// Inverse of a chain isomorphism given by signed permutation matrices.
pub fn invert_permutation_map(f: &ChainMap) -> ChainMap {
    let maps = f.degree_span().map(|n| (n, f.at(n).transpose())).collect();
    ChainMap::new(f.target.clone(), f.source.clone(), maps).expect("inverse of a signed permutation")
}

/// The unitor `I⊗C → C` (or `C⊗I → C`); with `I = Z` in degree 0 the bases agree.
pub fn unitor(c: &ChainComplex, unit_on_left: bool) -> ChainMap {
    let src = if unit_on_left {
        tensor(&ChainComplex::unit(), c)
    } else {
        tensor(c, &ChainComplex::unit())
    };
    let maps = c.degrees().map(|n| (n, IntMatrix::identity(c.rank(n)))).collect();
    ChainMap::new(src, c.clone(), maps).expect("unitor is a chain map")
}

/// Sign weighting the coevaluation and evaluation in degree `n`; with it the
/// dual differential is the plain transpose.
fn duality_sign(n: i64) -> i32 {
    sign((n * (n + 1) / 2).rem_euclid(2))
}

/// A dual complex together with its coevaluation and evaluation.
#[derive(Debug, Clone)]
pub struct DualityData {
    pub complex: ChainComplex,
    pub dual: ChainComplex,
    /// `I → C ⊗ C*`
    pub coevaluation: ChainMap,
    /// `C* ⊗ C → I`
    pub evaluation: ChainMap,
}

impl DualityData {
    /// `ρ ∘ (1⊗ε) ∘ α ∘ (η⊗1) ∘ λ⁻¹` on `C`, and the mirror composite on `C*`.
    pub fn triangle_composites(&self) -> Result<(ChainMap, ChainMap), ChainError> {
        let c = &self.complex;
        let cd = &self.dual;
        let first = invert_permutation_map(&unitor(c, true))
            .then(&tensor_map(&self.coevaluation, &ChainMap::identity(c))?)?
            .then(&associator(c, cd, c))?
            .then(&tensor_map(&ChainMap::identity(c), &self.evaluation)?)?
            .then(&unitor(c, false))?;
        let second = invert_permutation_map(&unitor(cd, false))
            .then(&tensor_map(&ChainMap::identity(cd), &self.coevaluation)?)?
            .then(&invert_permutation_map(&associator(cd, c, cd)))?
            .then(&tensor_map(&self.evaluation, &ChainMap::identity(cd))?)?
            .then(&unitor(cd, true))?;
        Ok((first, second))
    }

    pub fn triangle_identities_hold(&self) -> Result<bool, ChainError> {
        let (first, second) = self.triangle_composites()?;
        Ok(first == ChainMap::identity(&self.complex) && second == ChainMap::identity(&self.dual))
    }
}

/// `(C*)_{-n} = Hom(C_n, Z)` with differential the transpose of `d_{n+1}`.
pub fn dual(c: &ChainComplex) -> DualityData {
    let dual = if c.ranks.is_empty() {
        ChainComplex::zero()
    } else {
        let lo = -c.hi();
        let ranks: Vec<usize> = (lo..=-c.lo()).map(|m| c.rank(-m)).collect();
        let diffs = (lo + 1..=-c.lo()).map(|m| c.d(-m + 1).transpose()).collect();
        ChainComplex::new(lo, ranks, diffs).expect("dual of a complex is a complex")
    };
    let unit = ChainComplex::unit();

    let c_cd = tensor(c, &dual);
    let mut eta = IntMatrix::zeros(c_cd.rank(0), 1);
    for p in c.degrees() {
        for i in 0..c.rank(p) {
            eta[(tensor_index(c, &dual, p, i, -p, i), 0)] = BigInt::from(duality_sign(p));
        }
    }
    let coevaluation = ChainMap::new(unit.clone(), c_cd, BTreeMap::from([(0, eta)]))
        .expect("coevaluation is a chain map");

    let cd_c = tensor(&dual, c);
    let mut eps = IntMatrix::zeros(1, cd_c.rank(0));
    for p in c.degrees() {
        for i in 0..c.rank(p) {
            eps[(0, tensor_index(&dual, c, -p, i, p, i))] = BigInt::from(duality_sign(p));
        }
    }
    let evaluation = ChainMap::new(cd_c, unit, BTreeMap::from([(0, eps)])).expect("evaluation is a chain map");

    DualityData {
        complex: c.clone(),
        dual,
        coevaluation,
        evaluation,
    }
}

/// `f*: D* → C*` for `f: C → D`, with `(f*)_{-n} = f_nᵀ`.
pub fn dual_map(f: &ChainMap) -> ChainMap {
    let src = dual(f.target()).dual;
    let tgt = dual(f.source()).dual;
    let maps = f.degree_span().map(|n| (-n, f.at(n).transpose())).collect();
    ChainMap::new(src, tgt, maps).expect("dual of a chain map is a chain map")
}

/// Trace of `f: C → C ⊗ P`, a chain map `I → P`.
///
/// This is the composite `I → C⊗C* → (C⊗P)⊗C* → C*⊗(C⊗P) → P`; collapsed,
/// its single column is `Σ_n (-1)^n Σ_i f_n[(i, l), i]` over the
/// `C_n ⊗ P_0` block.
pub fn twisted_trace(f: &ChainMap, c: &ChainComplex, p: &ChainComplex) -> Result<ChainMap, ChainError> {
    if f.source() != c {
        return Err(ChainError::Shape("twisted trace: source is not C".into()));
    }
    let cp = tensor(c, p);
    if f.target() != &cp {
        return Err(ChainError::Shape("twisted trace: target is not C ⊗ P".into()));
    }
    let width = p.rank(0);
    let mut v = vec![BigInt::zero(); width];
    for n in c.degrees() {
        let fn_ = f.at(n);
        let s = BigInt::from(sign(n));
        for i in 0..c.rank(n) {
            for (l, slot) in v.iter_mut().enumerate() {
                let entry = &fn_[(tensor_index(c, p, n, i, 0, l), i)];
                if !entry.is_zero() {
                    *slot += &s * entry;
                }
            }
        }
    }
    let maps = if width > 0 {
        BTreeMap::from([(0, IntMatrix::column(&v))])
    } else {
        BTreeMap::new()
    };
    ChainMap::new(ChainComplex::unit(), p.clone(), maps)
}

/// A degree-0 class in `H_0(C) = coker(d_1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct H0Class {
    pub element: CokernelElement,
}

pub fn h0_class(c: &ChainComplex, cycle: &[BigInt]) -> Result<H0Class, ChainError> {
    if cycle.len() != c.rank(0) {
        return Err(ChainError::Shape(format!(
            "cycle of length {} in degree 0 of rank {}",
            cycle.len(),
            c.rank(0)
        )));
    }
    if !c.d(0).mul_vec(cycle)?.iter().all(Zero::is_zero) {
        return Err(ChainError::Shape("vector is not a cycle".into()));
    }
    Ok(H0Class {
        element: Cokernel::new(&c.d(1)).class(cycle)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intlinalg::to_big;

    fn circle() -> ChainComplex {
        ChainComplex::new(0, vec![1, 1], vec![IntMatrix::zeros(1, 1)]).unwrap()
    }

    fn interval() -> ChainComplex {
        ChainComplex::new(0, vec![2, 1], vec![IntMatrix::from_i64(&[&[-1], &[1]])]).unwrap()
    }

    #[test]
    fn validate_examples() {
        ChainComplex::new(0, vec![2, 3, 1], vec![IntMatrix::zeros(2, 3), IntMatrix::zeros(3, 1)]).unwrap();
        let one = IntMatrix::from_i64(&[&[1]]);
        let c = ChainComplex::unvalidated(0, vec![1, 1, 1], vec![one.clone(), one]).unwrap();
        assert!(matches!(c.validate(), Err(ChainError::NotAComplex { degree: 2, .. })));
    }

    #[test]
    fn lefschetz_of_identity_is_euler_characteristic() {
        assert_eq!(lefschetz_trace(&ChainMap::identity(&circle())).unwrap(), BigInt::zero());
        let wedge = ChainComplex::new(0, vec![1, 2], vec![IntMatrix::zeros(1, 2)]).unwrap();
        assert_eq!(lefschetz_trace(&ChainMap::identity(&wedge)).unwrap(), BigInt::from(-1));
    }

    #[test]
    fn unit_tensor_is_identity() {
        let c = interval();
        assert_eq!(tensor(&ChainComplex::unit(), &c), c);
        assert_eq!(tensor(&c, &ChainComplex::unit()), c);
    }

    #[test]
    fn degree_one_tensor_signs() {
        let c = ChainComplex::new(1, vec![2], vec![]).unwrap();
        let f = ChainMap::new(c.clone(), c.clone(), BTreeMap::from([(1, IntMatrix::from_i64(&[&[2, 1], &[0, 3]]))])).unwrap();
        let g = ChainMap::new(c.clone(), c.clone(), BTreeMap::from([(1, IntMatrix::from_i64(&[&[-1, 0], &[4, 2]]))])).unwrap();
        let fg = tensor_map(&f, &g).unwrap();
        assert_eq!(lefschetz_trace(&f).unwrap(), BigInt::from(-5));
        assert_eq!(lefschetz_trace(&g).unwrap(), BigInt::from(-1));
        assert_eq!(lefschetz_trace(&fg).unwrap(), BigInt::from(5));
    }

    #[test]
    fn dual_of_unit_and_circle() {
        let du = dual(&ChainComplex::unit());
        assert_eq!(du.dual, ChainComplex::unit());
        assert!(du.triangle_identities_hold().unwrap());
        let dc = dual(&circle());
        assert_eq!(dc.dual.lo(), -1);
        assert_eq!(dc.dual.rank(0), 1);
        assert_eq!(dc.dual.rank(-1), 1);
        assert!(dc.triangle_identities_hold().unwrap());
    }

    #[test]
    fn dual_of_interval_matches_target_minus_source() {
        // objects (x, y), one generator e: x → y; d*(x) = -e, d*(y) = +e
        let di = dual(&interval());
        assert_eq!(di.dual.d(0), IntMatrix::from_i64(&[&[-1, 1]]));
        assert!(di.triangle_identities_hold().unwrap());
    }

    #[test]
    fn h0_examples() {
        let c = interval();
        let x = h0_class(&c, &to_big(&[1, 0])).unwrap();
        let y = h0_class(&c, &to_big(&[0, 1])).unwrap();
        assert_eq!(x, y);
        assert!(h0_class(&c, &to_big(&[-1, 1])).unwrap().element.is_zero());
        let circ = h0_class(&circle(), &to_big(&[3])).unwrap();
        assert_eq!(circ.element.residues, to_big(&[3]));
        assert!(h0_class(&c, &to_big(&[1])).is_err());
    }

    #[test]
    fn twisted_trace_with_unit_coefficients() {
        let c = interval();
        let f = ChainMap::identity(&c);
        let f_unit = f.then(&invert_permutation_map(&unitor(&c, false))).unwrap();
        let t = twisted_trace(&f_unit, &c, &ChainComplex::unit()).unwrap();
        assert_eq!(t.at(0), IntMatrix::from_i64(&[&[1]]));
    }

    #[test]
    fn non_endomorphism_rejected() {
        let f = ChainMap::new(circle(), interval(), BTreeMap::new()).unwrap();
        assert!(matches!(lefschetz_trace(&f), Err(ChainError::NotEndomorphism)));
    }
}
