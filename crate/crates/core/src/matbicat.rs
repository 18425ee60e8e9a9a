//! Concrete bicategories with shadow: integer matrix families over finite
//! sets, representations of finite groupoids, and group rings.
//!
//! Composite 1-cells `(m⊙n)(a, c) = ⊕_b m(a, b) ⊗ n(b, c)` carry the basis
//! ordered by `b`, then the index in `m(a, b)`, then the index in `n(b, c)`.
//! Shadows `sh(m) = ⊕_a m(a, a)` are ordered by `a`.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::formal::FormalSum;
use crate::intlinalg::{kron, trace, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatError {
    #[error("duplicate label `{0}`")]
    Duplicate(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("1-cells do not share the middle set")]
    SetMismatch,
    #[error("matrix at index {0} is not square")]
    NotSquare(usize),
    #[error("invalid groupoid: {0}")]
    InvalidGroupoid(String),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("representation is not functorial: {0}")]
    NotFunctorial(String),
    #[error("endomorphism is not natural along morphism {0}")]
    NotNatural(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinSet {
    labels: Vec<String>,
}

impl FinSet {
    pub fn new<S: AsRef<str>>(labels: &[S]) -> Result<Self, MatError> {
        let mut seen = HashSet::new();
        for l in labels {
            if !seen.insert(l.as_ref()) {
                return Err(MatError::Duplicate(l.as_ref().to_string()));
            }
        }
        Ok(FinSet {
            labels: labels.iter().map(|l| l.as_ref().to_string()).collect(),
        })
    }

    /// `{0, …, n-1}`.
    pub fn range(n: usize) -> Self {
        FinSet {
            labels: (0..n).map(|i| i.to_string()).collect(),
        }
    }

    /// The one-point set.
    pub fn point() -> Self {
        FinSet {
            labels: vec!["*".to_string()],
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// A 1-cell `A ⇸ B`: a free abelian group of rank `r(a, b)` per pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatCell {
    source: FinSet,
    target: FinSet,
    ranks: Vec<usize>,
}

impl MatCell {
    /// `ranks` is row-major over `A × B`.
    pub fn new(source: FinSet, target: FinSet, ranks: Vec<usize>) -> Result<Self, MatError> {
        if ranks.len() != source.len() * target.len() {
            return Err(MatError::Shape(format!(
                "{} ranks for a {}×{} cell",
                ranks.len(),
                source.len(),
                target.len()
            )));
        }
        Ok(MatCell { source, target, ranks })
    }

    /// `U_A`, rank `δ_{a,a'}`.
    pub fn unit(a: &FinSet) -> Self {
        let n = a.len();
        MatCell {
            source: a.clone(),
            target: a.clone(),
            ranks: (0..n * n).map(|k| usize::from(k / n == k % n)).collect(),
        }
    }

    pub fn source(&self) -> &FinSet {
        &self.source
    }

    pub fn target(&self) -> &FinSet {
        &self.target
    }

    pub fn rank(&self, a: usize, b: usize) -> usize {
        self.ranks[a * self.target.len() + b]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    fn offset(&self, n: &MatCell, a: usize, b: usize, c: usize) -> usize {
        (0..b).map(|b2| self.rank(a, b2) * n.rank(b2, c)).sum()
    }
}

/// Offset of `m(a, b) ⊗ n(b, c)` in `(m⊙n)(a, c)`.
pub fn compose_offset(m: &MatCell, n: &MatCell, a: usize, b: usize, c: usize) -> usize {
    m.offset(n, a, b, c)
}

/// A 2-cell: one matrix per pair, of shape `r'(a, b) × r(a, b)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat2 {
    source: MatCell,
    target: MatCell,
    blocks: Vec<IntMatrix>,
}

impl Mat2 {
    pub fn new(source: MatCell, target: MatCell, blocks: Vec<IntMatrix>) -> Result<Self, MatError> {
        if source.source != target.source || source.target != target.target {
            return Err(MatError::SetMismatch);
        }
        if blocks.len() != source.ranks.len() {
            return Err(MatError::Shape("one block per pair required".into()));
        }
        for (k, b) in blocks.iter().enumerate() {
            if b.shape() != (target.ranks[k], source.ranks[k]) {
                return Err(MatError::Shape(format!(
                    "block {k} has shape {:?}, expected {:?}",
                    b.shape(),
                    (target.ranks[k], source.ranks[k])
                )));
            }
        }
        Ok(Mat2 { source, target, blocks })
    }

    pub fn identity(m: &MatCell) -> Self {
        Mat2 {
            source: m.clone(),
            target: m.clone(),
            blocks: m.ranks.iter().map(|&r| IntMatrix::identity(r)).collect(),
        }
    }

    pub fn source(&self) -> &MatCell {
        &self.source
    }

    pub fn target(&self) -> &MatCell {
        &self.target
    }

    pub fn block(&self, a: usize, b: usize) -> &IntMatrix {
        &self.blocks[a * self.source.target.len() + b]
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Mat2) -> Result<Mat2, MatError> {
        if self.target != next.source {
            return Err(MatError::Shape("vertical composite of mismatched 2-cells".into()));
        }
        let blocks = self.blocks.iter().zip(&next.blocks).map(|(f, g)| g * f).collect();
        Ok(Mat2 {
            source: self.source.clone(),
            target: next.target.clone(),
            blocks,
        })
    }
}

/// `r(a, c) = Σ_b r_m(a, b)·r_n(b, c)`.
pub fn mat_compose(m: &MatCell, n: &MatCell) -> Result<MatCell, MatError> {
    if m.target != n.source {
        return Err(MatError::SetMismatch);
    }
    let (na, nb, nc) = (m.source.len(), m.target.len(), n.target.len());
    let mut ranks = vec![0; na * nc];
    for a in 0..na {
        for c in 0..nc {
            ranks[a * nc + c] = (0..nb).map(|b| m.rank(a, b) * n.rank(b, c)).sum();
        }
    }
    MatCell::new(m.source.clone(), n.target.clone(), ranks)
}

/// Horizontal composite `u⊙v`, blockwise `⊕_b kron(u_{ab}, v_{bc})`.
pub fn mat_compose_2(u: &Mat2, v: &Mat2) -> Result<Mat2, MatError> {
    let src = mat_compose(&u.source, &v.source)?;
    let tgt = mat_compose(&u.target, &v.target)?;
    let (na, nb, nc) = (src.source.len(), u.source.target.len(), src.target.len());
    let mut blocks = Vec::with_capacity(na * nc);
    for a in 0..na {
        for c in 0..nc {
            let mut m = IntMatrix::zeros(tgt.rank(a, c), src.rank(a, c));
            for b in 0..nb {
                let block = kron(u.block(a, b), v.block(b, c), 1);
                if block.rows() > 0 && block.cols() > 0 {
                    m.set_block(
                        compose_offset(&u.target, &v.target, a, b, c),
                        compose_offset(&u.source, &v.source, a, b, c),
                        &block,
                    );
                }
            }
            blocks.push(m);
        }
    }
    Mat2::new(src, tgt, blocks)
}

/// Associator `(m⊙n)⊙p → m⊙(n⊙p)`, a permutation in each block.
pub fn mat_associator(m: &MatCell, n: &MatCell, p: &MatCell) -> Result<Mat2, MatError> {
    let mn = mat_compose(m, n)?;
    let np = mat_compose(n, p)?;
    let src = mat_compose(&mn, p)?;
    let tgt = mat_compose(m, &np)?;
    let (na, nb, nc, nd) = (m.source.len(), m.target.len(), n.target.len(), p.target.len());
    let mut blocks = Vec::with_capacity(na * nd);
    for a in 0..na {
        for d in 0..nd {
            let mut block = IntMatrix::zeros(tgt.rank(a, d), src.rank(a, d));
            for b in 0..nb {
                for c in 0..nc {
                    for i in 0..m.rank(a, b) {
                        for j in 0..n.rank(b, c) {
                            for k in 0..p.rank(c, d) {
                                let ij = compose_offset(m, n, a, b, c) + i * n.rank(b, c) + j;
                                let from = compose_offset(&mn, p, a, c, d) + ij * p.rank(c, d) + k;
                                let jk = compose_offset(n, p, b, c, d) + j * p.rank(c, d) + k;
                                let to = compose_offset(m, &np, a, b, d) + i * np.rank(b, d) + jk;
                                block[(to, from)] = BigInt::one();
                            }
                        }
                    }
                }
            }
            blocks.push(block);
        }
    }
    Mat2::new(src, tgt, blocks)
}

/// Unitors `U⊙m → m` and `m⊙U → m`; the canonical bases coincide.
pub fn mat_unitor(m: &MatCell, unit_on_left: bool) -> Result<Mat2, MatError> {
    let src = if unit_on_left {
        mat_compose(&MatCell::unit(&m.source), m)?
    } else {
        mat_compose(m, &MatCell::unit(&m.target))?
    };
    Mat2::new(src, m.clone(), m.ranks.iter().map(|&r| IntMatrix::identity(r)).collect())
}

fn require_endo(m: &MatCell) -> Result<(), MatError> {
    if m.source != m.target {
        return Err(MatError::Shape("shadow of a 1-cell that is not an endo-cell".into()));
    }
    Ok(())
}

/// `rank sh(m) = Σ_a r(a, a)`.
pub fn mat_shadow(m: &MatCell) -> Result<usize, MatError> {
    require_endo(m)?;
    Ok((0..m.source.len()).map(|a| m.rank(a, a)).sum())
}

/// `sh(u) = ⊕_a u_{aa}`.
pub fn mat_shadow_2(u: &Mat2) -> Result<IntMatrix, MatError> {
    require_endo(&u.source)?;
    let n = u.source.source.len();
    Ok(IntMatrix::direct_sum(&(0..n).map(|a| u.block(a, a).clone()).collect::<Vec<_>>()))
}

/// `θ: sh(m⊙n) → sh(n⊙m)`, sending `(a, b, i, j)` to `(b, a, j, i)`.
pub fn shadow_theta(m: &MatCell, n: &MatCell) -> Result<IntMatrix, MatError> {
    let mn = mat_compose(m, n)?;
    let nm = mat_compose(n, m)?;
    let src_rank = mat_shadow(&mn)?;
    let tgt_rank = mat_shadow(&nm)?;
    let sh_offset = |c: &MatCell, a: usize| -> usize { (0..a).map(|x| c.rank(x, x)).sum() };
    let mut out = IntMatrix::zeros(tgt_rank, src_rank);
    for a in 0..m.source.len() {
        for b in 0..m.target.len() {
            for i in 0..m.rank(a, b) {
                for j in 0..n.rank(b, a) {
                    let from = sh_offset(&mn, a) + compose_offset(m, n, a, b, a) + i * n.rank(b, a) + j;
                    let to = sh_offset(&nm, b) + compose_offset(n, m, b, a, b) + j * m.rank(a, b) + i;
                    out[(to, from)] = BigInt::one();
                }
            }
        }
    }
    Ok(out)
}

/// Both sides of the shadow hexagon for `m: A⇸B`, `n: B⇸C`, `p: C⇸A`, as
/// maps `sh((m⊙n)⊙p) → sh((n⊙p)⊙m)`.
pub fn shadow_hexagon(m: &MatCell, n: &MatCell, p: &MatCell) -> Result<(IntMatrix, IntMatrix), MatError> {
    let mn = mat_compose(m, n)?;
    let pm = mat_compose(p, m)?;
    let np = mat_compose(n, p)?;
    let inv = |u: Mat2| -> Result<IntMatrix, MatError> { Ok(mat_shadow_2(&u)?.transpose()) };
    // θ, sh(α⁻¹), θ, sh(α⁻¹)
    let left = &inv(mat_associator(n, p, m)?)?
        * &(&shadow_theta(&pm, n)? * &(&inv(mat_associator(p, m, n)?)? * &shadow_theta(&mn, p)?));
    // sh(α), θ
    let right = &shadow_theta(m, &np)? * &mat_shadow_2(&mat_associator(m, n, p)?)?;
    Ok((left, right))
}

/// Both sides of the unit coherence `sh(λ)∘θ = sh(ρ)` on `sh(m⊙U)`.
pub fn shadow_unit_coherence(m: &MatCell) -> Result<(IntMatrix, IntMatrix), MatError> {
    let u = MatCell::unit(&m.source);
    let left = &mat_shadow_2(&mat_unitor(m, true)?)? * &shadow_theta(m, &u)?;
    let right = mat_shadow_2(&mat_unitor(m, false)?)?;
    Ok((left, right))
}

/// An endomorphism of a family of free abelian groups over a finite set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyEndo {
    base: FinSet,
    maps: Vec<IntMatrix>,
}

impl FamilyEndo {
    pub fn new(base: FinSet, maps: Vec<IntMatrix>) -> Result<Self, MatError> {
        if maps.len() != base.len() {
            return Err(MatError::Shape("one fiber endomorphism per element required".into()));
        }
        if let Some(k) = maps.iter().position(|m| !m.is_square()) {
            return Err(MatError::NotSquare(k));
        }
        Ok(FamilyEndo { base, maps })
    }

    pub fn base(&self) -> &FinSet {
        &self.base
    }

    pub fn maps(&self) -> &[IntMatrix] {
        &self.maps
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.maps.iter().map(|m| m.rows()).collect()
    }

    /// `M̂: A ⇸ ⋆`.
    pub fn hat(&self) -> MatCell {
        MatCell::new(self.base.clone(), FinSet::point(), self.ranks()).expect("ranks per element")
    }

    /// `M̌: ⋆ ⇸ A`.
    pub fn check(&self) -> MatCell {
        MatCell::new(FinSet::point(), self.base.clone(), self.ranks()).expect("ranks per element")
    }

    /// `f̂` as a 2-cell on `M̂`.
    pub fn hat_2cell(&self) -> Mat2 {
        Mat2::new(self.hat(), self.hat(), self.maps.clone()).expect("square blocks")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibTrace {
    pub per_fiber: Vec<BigInt>,
    /// The induced map `Z^A → Z`.
    pub row: IntMatrix,
}

/// Fiberwise traces `tr(f_a)`.
pub fn fam_fib_trace(f: &FamilyEndo) -> FibTrace {
    let per_fiber: Vec<BigInt> = f.maps.iter().map(|m| trace(m).expect("square")).collect();
    let row = IntMatrix::from_fn(1, per_fiber.len(), |_, j| per_fiber[j].clone());
    FibTrace { per_fiber, row }
}

/// `Σ_a tr(f_a)·[a]`, keyed by element index.
pub fn fam_tot_trace(f: &FamilyEndo) -> FormalSum<usize> {
    f.maps
        .iter()
        .enumerate()
        .map(|(a, m)| (a, trace(m).expect("square")))
        .collect()
}

/// Fixed points of a self-map of `{0, …, n-1}`.
pub fn set_transfer(phi: &[usize]) -> FormalSum<usize> {
    phi.iter()
        .enumerate()
        .filter(|(a, b)| a == *b)
        .map(|(a, _)| (a, BigInt::one()))
        .collect()
}

/// The bicategorical trace of `f̂` as a row vector `sh(U_A) = Z^A → Z`:
/// `ε ∘ θ ∘ sh(f̂⊙1) ∘ sh(η)`.
pub fn bicategorical_trace(f: &FamilyEndo) -> Result<IntMatrix, MatError> {
    let hat = f.hat();
    let check = f.check();
    let n = f.base.len();
    let ranks = f.ranks();
    let unit = MatCell::unit(&f.base);
    let hc = mat_compose(&hat, &check)?;
    let mut eta_blocks = Vec::with_capacity(n * n);
    for a in 0..n {
        for a2 in 0..n {
            let mut b = IntMatrix::zeros(hc.rank(a, a2), unit.rank(a, a2));
            if a == a2 {
                for i in 0..ranks[a] {
                    b[(i * ranks[a] + i, 0)] = BigInt::one();
                }
            }
            eta_blocks.push(b);
        }
    }
    let eta = Mat2::new(unit, hc, eta_blocks)?;
    let ch = mat_compose(&check, &hat)?;
    let mut eps = IntMatrix::zeros(1, ch.rank(0, 0));
    for a in 0..n {
        let off = compose_offset(&check, &hat, 0, a, 0);
        for i in 0..ranks[a] {
            eps[(0, off + i * ranks[a] + i)] = BigInt::one();
        }
    }
    let f_tensor_1 = mat_compose_2(&f.hat_2cell(), &Mat2::identity(&check))?;
    let theta = shadow_theta(&hat, &check)?;
    Ok(&eps * &(&theta * &(&mat_shadow_2(&f_tensor_1)? * &mat_shadow_2(&eta)?)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareReport {
    pub pass: bool,
    /// First index of `A` where the composites differ.
    pub witness: Option<usize>,
    pub top_right: Vec<BigInt>,
    pub left_bottom: Vec<BigInt>,
}

/// Compares the two composites `Z^A → Z` of the fiberwise-trace square: the
/// bicategorical trace of `f̂` after the comparison isomorphism, and the
/// fiberwise traces followed by augmentation. `corrupt` perturbs one entry
/// of the bicategorical trace.
pub fn verify_fibtrace4(f: &FamilyEndo, corrupt: Option<(usize, BigInt)>) -> Result<SquareReport, MatError> {
    // the comparison Z^A → sh(U_A) is the identity in the canonical bases
    let mut top_right = bicategorical_trace(f)?.row(0).to_vec();
    if let Some((k, delta)) = corrupt {
        if let Some(x) = top_right.get_mut(k) {
            *x += delta;
        }
    }
    let left_bottom = fam_fib_trace(f).per_fiber;
    let witness = (0..left_bottom.len()).find(|&k| top_right[k] != left_bottom[k]);
    Ok(SquareReport {
        pass: witness.is_none(),
        witness,
        top_right,
        left_bottom,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangleReport {
    pub pass: bool,
    pub augmented_total: BigInt,
    pub fiberwise_total: BigInt,
}

/// Augmentation of the total trace against the sum of fiberwise traces.
/// `weights` replaces the augmentation `[a] ↦ 1`.
pub fn verify_totaltr(f: &FamilyEndo, weights: Option<&[BigInt]>) -> TriangleReport {
    let total = fam_tot_trace(f);
    let augmented_total: BigInt = match weights {
        None => total.augmentation(),
        Some(w) => total
            .iter()
            .map(|(a, k)| k * w.get(*a).cloned().unwrap_or_else(BigInt::one))
            .sum(),
    };
    let fiberwise_total: BigInt = fam_fib_trace(f).per_fiber.iter().sum();
    TriangleReport {
        pass: augmented_total == fiberwise_total,
        augmented_total,
        fiberwise_total,
    }
}

/// A finite group given by its multiplication table, `mul[x][y] = x·y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinGroup {
    labels: Vec<String>,
    mul: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FinGroup {
    pub fn new(labels: Vec<String>, mul: Vec<Vec<usize>>) -> Result<Self, MatError> {
        let n = labels.len();
        FinSet::new(&labels)?;
        if n == 0 {
            return Err(MatError::InvalidGroup("empty".into()));
        }
        if mul.len() != n || mul.iter().any(|r| r.len() != n || r.iter().any(|&z| z >= n)) {
            return Err(MatError::InvalidGroup("table is not n×n over the elements".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| mul[e][x] == x && mul[x][e] == x))
            .ok_or_else(|| MatError::InvalidGroup("no identity".into()))?;
        let mut inverse = Vec::with_capacity(n);
        for x in 0..n {
            let y = (0..n)
                .find(|&y| mul[x][y] == identity && mul[y][x] == identity)
                .ok_or_else(|| MatError::InvalidGroup(format!("`{}` has no inverse", labels[x])))?;
            inverse.push(y);
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if mul[mul[x][y]][z] != mul[x][mul[y][z]] {
                        return Err(MatError::InvalidGroup("not associative".into()));
                    }
                }
            }
        }
        Ok(FinGroup {
            labels,
            mul,
            identity,
            inverse,
        })
    }

    /// `C_n` with elements `e, g, g^2, …`.
    pub fn cyclic(n: usize) -> Self {
        let labels = (0..n)
            .map(|k| match k {
                0 => "e".to_string(),
                1 => "g".to_string(),
                _ => format!("g^{k}"),
            })
            .collect();
        let mul = (0..n).map(|x| (0..n).map(|y| (x + y) % n).collect()).collect();
        FinGroup::new(labels, mul).expect("cyclic group")
    }

    /// `S_3` acting on `{1, 2, 3}`, with `x·y` meaning `y` then `x`.
    pub fn symmetric3() -> Self {
        let perms: [[usize; 3]; 6] = [[0, 1, 2], [1, 0, 2], [2, 1, 0], [0, 2, 1], [1, 2, 0], [2, 0, 1]];
        let labels = ["e", "(12)", "(13)", "(23)", "(123)", "(132)"].map(String::from).to_vec();
        let index = |p: [usize; 3]| perms.iter().position(|q| *q == p).expect("closed");
        let mul = perms
            .iter()
            .map(|x| perms.iter().map(|y| index([x[y[0]], x[y[1]], x[y[2]]])).collect())
            .collect();
        FinGroup::new(labels, mul).expect("symmetric group")
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.mul[x][y]
    }

    pub fn inv(&self, x: usize) -> usize {
        self.inverse[x]
    }

    /// Conjugacy classes, each sorted, ordered by least element.
    pub fn conj_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        for x in 0..n {
            if class_of[x] != usize::MAX {
                continue;
            }
            let mut members: Vec<usize> = (0..n).map(|g| self.mul(self.mul(g, x), self.inv(g))).collect();
            members.sort_unstable();
            members.dedup();
            for &m in &members {
                class_of[m] = classes.len();
            }
            classes.push(members);
        }
        classes
    }

    /// Index of each element's class in [`FinGroup::conj_classes`].
    pub fn class_index(&self) -> Vec<usize> {
        let mut out = vec![0; self.order()];
        for (k, c) in self.conj_classes().iter().enumerate() {
            for &x in c {
                out[x] = k;
            }
        }
        out
    }
}

/// An element of the integral group ring `Z[G]`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GroupRingElem(pub FormalSum<usize>);

impl GroupRingElem {
    pub fn zero() -> Self {
        GroupRingElem(FormalSum::new())
    }

    pub fn scalar(g: &FinGroup, k: impl Into<BigInt>) -> Self {
        GroupRingElem(FormalSum::singleton(g.identity(), k))
    }

    pub fn basis(x: usize) -> Self {
        GroupRingElem(FormalSum::singleton(x, 1))
    }

    pub fn add(&self, other: &GroupRingElem) -> GroupRingElem {
        let mut s = self.0.clone();
        s.add_assign(&other.0);
        GroupRingElem(s)
    }

    pub fn neg(&self) -> GroupRingElem {
        GroupRingElem(self.0.scaled(&BigInt::from(-1)))
    }

    pub fn mul(&self, g: &FinGroup, other: &GroupRingElem) -> GroupRingElem {
        let mut out = FormalSum::new();
        for (x, a) in self.0.iter() {
            for (y, b) in other.0.iter() {
                out.add_term(g.mul(*x, *y), a * b);
            }
        }
        GroupRingElem(out)
    }

    pub fn augmentation(&self) -> BigInt {
        self.0.augmentation()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
}

/// A matrix over `Z[G]`, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupRingMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<GroupRingElem>,
}

impl GroupRingMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<GroupRingElem>) -> Result<Self, MatError> {
        if entries.len() != rows * cols {
            return Err(MatError::Shape(format!("{} entries for a {rows}×{cols} matrix", entries.len())));
        }
        Ok(GroupRingMatrix { rows, cols, entries })
    }

    pub fn identity(g: &FinGroup, n: usize) -> Self {
        let entries = (0..n * n)
            .map(|k| {
                if k / n == k % n {
                    GroupRingElem::scalar(g, 1)
                } else {
                    GroupRingElem::zero()
                }
            })
            .collect();
        GroupRingMatrix { rows: n, cols: n, entries }
    }

    /// `I + r·E_{ij}` for `i ≠ j`; its inverse is `I - r·E_{ij}`.
    pub fn elementary(g: &FinGroup, n: usize, i: usize, j: usize, r: GroupRingElem) -> Self {
        let mut m = Self::identity(g, n);
        m.entries[i * n + j] = m.entries[i * n + j].add(&r);
        m
    }

    /// Diagonal matrix with `x` at position `i` and `1` elsewhere; inverse
    /// uses `x⁻¹`.
    pub fn unit_diagonal(g: &FinGroup, n: usize, i: usize, x: usize) -> Self {
        let mut m = Self::identity(g, n);
        m.entries[i * n + i] = GroupRingElem::basis(x);
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> &GroupRingElem {
        &self.entries[i * self.cols + j]
    }

    pub fn mul(&self, g: &FinGroup, other: &GroupRingMatrix) -> Result<GroupRingMatrix, MatError> {
        if self.cols != other.rows {
            return Err(MatError::Shape("matrix product dimension mismatch".into()));
        }
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = GroupRingElem::zero();
                for k in 0..self.cols {
                    acc = acc.add(&self.entry(i, k).mul(g, other.entry(k, j)));
                }
                entries.push(acc);
            }
        }
        Ok(GroupRingMatrix {
            rows: self.rows,
            cols: other.cols,
            entries,
        })
    }

    /// Entrywise augmentation.
    pub fn augmented(&self) -> IntMatrix {
        IntMatrix::from_fn(self.rows, self.cols, |i, j| self.entry(i, j).augmentation())
    }
}

/// `Σ_i` class projection of `m_{ii}`, keyed by conjugacy class index.
pub fn hattori_stallings(g: &FinGroup, m: &GroupRingMatrix) -> Result<FormalSum<usize>, MatError> {
    if m.rows != m.cols {
        return Err(MatError::Shape("Hattori–Stallings trace of a non-square matrix".into()));
    }
    let class = g.class_index();
    let mut out = FormalSum::new();
    for i in 0..m.rows {
        for (x, k) in m.entry(i, i).0.iter() {
            out.add_term(class[*x], k.clone());
        }
    }
    Ok(out)
}

/// A finite groupoid given by a full composition table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinGroupoid {
    objects: Vec<String>,
    names: Vec<String>,
    src: Vec<usize>,
    tgt: Vec<usize>,
    /// `then[a][b] = b ∘ a` when `t(a) = s(b)`.
    then: Vec<Vec<Option<usize>>>,
    identity: Vec<usize>,
    inverse: Vec<usize>,
}

impl FinGroupoid {
    /// `morphisms` are `(name, src, tgt)`; `then[a][b]` is the composite
    /// "first `a`, then `b`". All groupoid laws are checked exhaustively.
    pub fn new(
        objects: Vec<String>,
        morphisms: Vec<(String, usize, usize)>,
        then: Vec<Vec<Option<usize>>>,
    ) -> Result<Self, MatError> {
        FinSet::new(&objects)?;
        let names: Vec<String> = morphisms.iter().map(|m| m.0.clone()).collect();
        FinSet::new(&names)?;
        let n = morphisms.len();
        let bad = |s: String| Err(MatError::InvalidGroupoid(s));
        if morphisms.iter().any(|m| m.1 >= objects.len() || m.2 >= objects.len()) {
            return bad("morphism endpoint out of range".into());
        }
        let src: Vec<usize> = morphisms.iter().map(|m| m.1).collect();
        let tgt: Vec<usize> = morphisms.iter().map(|m| m.2).collect();
        if then.len() != n || then.iter().any(|r| r.len() != n) {
            return bad("composition table is not n×n".into());
        }
        for a in 0..n {
            for b in 0..n {
                match then[a][b] {
                    Some(c) if tgt[a] == src[b] && c < n && src[c] == src[a] && tgt[c] == tgt[b] => {}
                    None if tgt[a] != src[b] => {}
                    _ => return bad(format!("bad composite of `{}` then `{}`", names[a], names[b])),
                }
            }
        }
        let mut identity = Vec::with_capacity(objects.len());
        for x in 0..objects.len() {
            let id = (0..n).find(|&e| {
                src[e] == x
                    && tgt[e] == x
                    && (0..n).all(|a| (tgt[a] != x || then[a][e] == Some(a)) && (src[a] != x || then[e][a] == Some(a)))
            });
            match id {
                Some(e) => identity.push(e),
                None => return bad(format!("object `{}` has no identity", objects[x])),
            }
        }
        let mut inverse = Vec::with_capacity(n);
        for a in 0..n {
            let inv = (0..n).find(|&b| then[a][b] == Some(identity[src[a]]) && then[b][a] == Some(identity[tgt[a]]));
            match inv {
                Some(b) => inverse.push(b),
                None => return bad(format!("`{}` has no inverse", names[a])),
            }
        }
        for a in 0..n {
            for b in (0..n).filter(|&b| src[b] == tgt[a]) {
                let ab = then[a][b].expect("composable");
                for c in (0..n).filter(|&c| src[c] == tgt[b]) {
                    if then[ab][c] != then[a][then[b][c].expect("composable")] {
                        return bad("composition is not associative".into());
                    }
                }
            }
        }
        Ok(FinGroupoid {
            objects,
            names,
            src,
            tgt,
            then,
            identity,
            inverse,
        })
    }

    /// `G × (pair groupoid on n objects)`: one morphism `i → j` per group
    /// element, composing by `(g: i→j) then (h: j→k) = h·g`.
    pub fn group_times_pair(g: &FinGroup, n: usize) -> Self {
        let order = g.order();
        let idx = |i: usize, j: usize, x: usize| (i * n + j) * order + x;
        let objects = (0..n).map(|i| format!("o{i}")).collect();
        let mut morphisms = Vec::with_capacity(n * n * order);
        for i in 0..n {
            for j in 0..n {
                for x in 0..order {
                    let name = if n == 1 {
                        g.labels()[x].clone()
                    } else {
                        format!("{}:o{i}->o{j}", g.labels()[x])
                    };
                    morphisms.push((name, i, j));
                }
            }
        }
        let total = morphisms.len();
        let mut then = vec![vec![None; total]; total];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for x in 0..order {
                        for y in 0..order {
                            then[idx(i, j, x)][idx(j, k, y)] = Some(idx(i, k, g.mul(y, x)));
                        }
                    }
                }
            }
        }
        FinGroupoid::new(objects, morphisms, then).expect("product groupoid")
    }

    /// One object per element, identities only.
    pub fn discrete(n: usize) -> Self {
        let objects = (0..n).map(|i| format!("o{i}")).collect();
        let morphisms = (0..n).map(|i| (format!("id{i}"), i, i)).collect();
        let then = (0..n)
            .map(|a| (0..n).map(|b| (a == b).then_some(a)).collect())
            .collect();
        FinGroupoid::new(objects, morphisms, then).expect("discrete groupoid")
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn num_morphisms(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn morphism_id(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn src(&self, a: usize) -> usize {
        self.src[a]
    }

    pub fn tgt(&self, a: usize) -> usize {
        self.tgt[a]
    }

    /// `b ∘ a`.
    pub fn then(&self, a: usize, b: usize) -> Option<usize> {
        self.then[a][b]
    }

    pub fn identity(&self, x: usize) -> usize {
        self.identity[x]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// `α⁻¹ ∘ γ ∘ α` for `α: x → s(γ)`.
    pub fn conjugate(&self, gamma: usize, alpha: usize) -> Option<usize> {
        self.then(self.then(alpha, gamma)?, self.inverse(alpha))
    }
}

/// Conjugacy classes of automorphisms: orbits of loops under `γ ∼ α⁻¹γα`,
/// each sorted, ordered by least morphism index.
pub fn fingpd_conj_classes(a: &FinGroupoid) -> Vec<Vec<usize>> {
    let n = a.num_morphisms();
    let mut seen = vec![false; n];
    let mut classes = Vec::new();
    for gamma in 0..n {
        if seen[gamma] || a.src(gamma) != a.tgt(gamma) {
            continue;
        }
        let mut members: Vec<usize> = (0..n)
            .filter(|&alpha| a.tgt(alpha) == a.src(gamma))
            .map(|alpha| a.conjugate(gamma, alpha).expect("composable"))
            .collect();
        members.sort_unstable();
        members.dedup();
        for &m in &members {
            seen[m] = true;
        }
        classes.push(members);
    }
    classes
}

/// A functor from a finite groupoid to free abelian groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinGpdRep {
    ranks: Vec<usize>,
    matrices: Vec<IntMatrix>,
}

impl FinGpdRep {
    pub fn new(a: &FinGroupoid, ranks: Vec<usize>, matrices: Vec<IntMatrix>) -> Result<Self, MatError> {
        if ranks.len() != a.objects.len() || matrices.len() != a.num_morphisms() {
            return Err(MatError::Shape("representation does not match the groupoid".into()));
        }
        for (k, m) in matrices.iter().enumerate() {
            if m.shape() != (ranks[a.tgt(k)], ranks[a.src(k)]) {
                return Err(MatError::Shape(format!("matrix of `{}` has the wrong shape", a.name(k))));
            }
        }
        for x in 0..ranks.len() {
            if matrices[a.identity(x)] != IntMatrix::identity(ranks[x]) {
                return Err(MatError::NotFunctorial(format!("identity at `{}`", a.objects[x])));
            }
        }
        for p in 0..matrices.len() {
            for q in 0..matrices.len() {
                if let Some(c) = a.then(p, q) {
                    if matrices[c] != &matrices[q] * &matrices[p] {
                        return Err(MatError::NotFunctorial(format!(
                            "`{}` then `{}`",
                            a.name(p),
                            a.name(q)
                        )));
                    }
                }
            }
        }
        Ok(FinGpdRep { ranks, matrices })
    }

    pub fn trivial(a: &FinGroupoid, rank: usize) -> Self {
        FinGpdRep {
            ranks: vec![rank; a.objects.len()],
            matrices: vec![IntMatrix::identity(rank); a.num_morphisms()],
        }
    }

    /// Linearization of a set-valued functor: `sizes[x] = |F(x)|`, and
    /// `action[α][i]` the image of element `i` under `F(α)`.
    pub fn from_set_functor(a: &FinGroupoid, sizes: &[usize], action: &[Vec<usize>]) -> Result<Self, MatError> {
        if action.len() != a.num_morphisms() {
            return Err(MatError::Shape("one permutation per morphism required".into()));
        }
        let mut matrices = Vec::with_capacity(action.len());
        for (k, perm) in action.iter().enumerate() {
            let (s, t) = (sizes[a.src(k)], sizes[a.tgt(k)]);
            if perm.len() != s || perm.iter().any(|&i| i >= t) {
                return Err(MatError::Shape(format!("action of `{}` is not a map F(s) → F(t)", a.name(k))));
            }
            let mut m = IntMatrix::zeros(t, s);
            for (i, &j) in perm.iter().enumerate() {
                m[(j, i)] = BigInt::one();
            }
            matrices.push(m);
        }
        FinGpdRep::new(a, sizes.to_vec(), matrices)
    }

    pub fn rank(&self, x: usize) -> usize {
        self.ranks[x]
    }

    pub fn matrix(&self, a: usize) -> &IntMatrix {
        &self.matrices[a]
    }

    /// Checks `f_{t(α)}·M(α) = M(α)·f_{s(α)}` for every morphism.
    pub fn check_natural(&self, a: &FinGroupoid, f: &[IntMatrix]) -> Result<(), MatError> {
        if f.len() != self.ranks.len() {
            return Err(MatError::Shape("one endomorphism per object required".into()));
        }
        for (x, m) in f.iter().enumerate() {
            if m.shape() != (self.ranks[x], self.ranks[x]) {
                return Err(MatError::NotSquare(x));
            }
        }
        for k in 0..a.num_morphisms() {
            if &f[a.tgt(k)] * &self.matrices[k] != &self.matrices[k] * &f[a.src(k)] {
                return Err(MatError::NotNatural(k));
            }
        }
        Ok(())
    }
}

/// `[γ at a] ↦ tr(f_a·M(γ))` on each class of [`fingpd_conj_classes`],
/// evaluated at every member to confirm the value is a class function.
pub fn fingpd_fib_trace(a: &FinGroupoid, m: &FinGpdRep, f: &[IntMatrix]) -> Result<Vec<BigInt>, MatError> {
    m.check_natural(a, f)?;
    let mut out = Vec::new();
    for class in fingpd_conj_classes(a) {
        let values: Vec<BigInt> = class
            .iter()
            .map(|&g| trace(&(&f[a.src(g)] * m.matrix(g))).expect("square"))
            .collect();
        if values.iter().any(|v| v != &values[0]) {
            return Err(MatError::NotNatural(class[0]));
        }
        out.push(values[0].clone());
    }
    Ok(out)
}

/// `[γ at a] ↦ Σ_i (f_a·M(γ))_{ii}·[i]` over `F(a)`, at each class's least
/// member.
pub fn fingpd_fib_transfer(a: &FinGroupoid, m: &FinGpdRep, f: &[IntMatrix]) -> Result<Vec<FormalSum<usize>>, MatError> {
    m.check_natural(a, f)?;
    Ok(fingpd_conj_classes(a)
        .iter()
        .map(|class| {
            let g = class[0];
            let comp = &f[a.src(g)] * m.matrix(g);
            (0..comp.rows()).map(|i| (i, comp[(i, i)].clone())).collect()
        })
        .collect())
}
