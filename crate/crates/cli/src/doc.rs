//! The JSON input document and its conversion into core objects.
//!
//! Words are lists of `[generator, exponent]` pairs in application order.
//! Matrices are lists of rows. Every conversion error carries the path of
//! the offending field.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use trace_kit_core::chain::{ChainComplex, ChainMap};
use trace_kit_core::freegpd::{Graph, GroupoidEnd};
use trace_kit_core::gpdrep::{GpdRep, RepEndo};
use trace_kit_core::intlinalg::IntMatrix;
use trace_kit_core::matbicat::{
    FamilyEndo, FinGpdRep, FinGroup, FinGroupoid, FinSet, GroupRingElem, GroupRingMatrix, Mat2, MatCell,
};
use trace_kit_core::FormalSum;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{path}: {message}")]
pub struct InputError {
    pub path: String,
    pub message: String,
}

impl InputError {
    pub fn new(path: impl Into<String>, message: impl fmt::Display) -> Self {
        InputError {
            path: path.into(),
            message: message.to_string(),
        }
    }

    fn missing(block: &str) -> Self {
        InputError::new(block, "required block is missing")
    }
}

/// An exact integer, read and written as a bare JSON number of any size.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Int(pub BigInt);

impl From<i64> for Int {
    fn from(v: i64) -> Self {
        Int(BigInt::from(v))
    }
}

impl From<BigInt> for Int {
    fn from(v: BigInt) -> Self {
        Int(v)
    }
}

impl Serialize for Int {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serde_json::Number::from_str(&self.0.to_string())
            .expect("integers are valid JSON numbers")
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Int {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let n = serde_json::Number::deserialize(d)?;
        BigInt::from_str(&n.to_string())
            .map(Int)
            .map_err(|_| D::Error::custom(format!("expected an integer, found {n}")))
    }
}

pub type MatrixDoc = Vec<Vec<Int>>;
pub type WordDoc = Vec<(String, i64)>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorDoc {
    pub name: String,
    pub src: String,
    pub tgt: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    pub objects: Vec<String>,
    pub generators: Vec<GeneratorDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndoDoc {
    pub object_map: BTreeMap<String, String>,
    pub generator_map: BTreeMap<String, WordDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepDoc {
    pub ranks: BTreeMap<String, usize>,
    pub action: BTreeMap<String, MatrixDoc>,
}

/// A finite set with an optional endomap (for the set transfer) and an
/// optional family of square matrices indexed by its elements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiniteSetDoc {
    pub elements: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<BTreeMap<String, MatrixDoc>>,
}

/// Either a named group (`C<n>` or `S3`) or an explicit multiplication table
/// with `table[i][j] = elements[i]·elements[j]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<String>>>,
    /// Matrices over `Z[G]`; each entry maps element labels to coefficients.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub matrices: Vec<GroupRingMatrixDoc>,
}

pub type GroupRingMatrixDoc = Vec<Vec<BTreeMap<String, Int>>>;

/// A finite groupoid, either `group × pair(n)` over the document's group or
/// an explicit table where `then[a][b]` names "first `a`, then `b`".
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiniteGroupoidDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group_times_pair: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objects: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub morphisms: Option<Vec<GeneratorDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub then: Option<Vec<Vec<Option<String>>>>,
    pub rep: FinGpdRepDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FinGpdRepDoc {
    pub ranks: BTreeMap<String, usize>,
    pub action: BTreeMap<String, MatrixDoc>,
    pub endo: BTreeMap<String, MatrixDoc>,
}

/// A bounded chain complex with an endomorphism; `differentials[k]` maps
/// degree `lo + k + 1` to `lo + k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDoc {
    pub lo: i64,
    pub ranks: Vec<usize>,
    pub differentials: Vec<MatrixDoc>,
    pub endo: Vec<MatrixDoc>,
}

/// A 1-cell of the matrix bicategory between `{0..source}` and
/// `{0..target}` with an endo-2-cell; both lists are row-major over pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellDoc {
    pub source: usize,
    pub target: usize,
    pub ranks: Vec<usize>,
    pub endo: Vec<MatrixDoc>,
}

/// Cells `m: A ⇸ B` and `n: B ⇸ A`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellPairDoc {
    pub m: CellDoc,
    pub n: CellDoc,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub endo: Option<EndoDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rep: Option<RepDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rep_endo: Option<BTreeMap<String, MatrixDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub finite_set: Option<FiniteSetDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub finite_groupoid: Option<FiniteGroupoidDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cell_pair: Option<CellPairDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub complexes: Vec<ComplexDoc>,
}

impl InputDocument {
    pub fn parse(text: &str) -> Result<Self, InputError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let path = if path == "." { "document".to_string() } else { path };
            InputError::new(path, e.into_inner())
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    pub fn graph(&self) -> Result<Graph, InputError> {
        let doc = self.graph.as_ref().ok_or_else(|| InputError::missing("graph"))?;
        let gens: Vec<(&str, &str, &str)> = doc
            .generators
            .iter()
            .map(|g| (g.name.as_str(), g.src.as_str(), g.tgt.as_str()))
            .collect();
        let objects: Vec<&str> = doc.objects.iter().map(String::as_str).collect();
        Graph::new(&objects, &gens).map_err(|e| InputError::new("graph", e))
    }

    pub fn endo(&self, g: &Graph) -> Result<GroupoidEnd, InputError> {
        let doc = self.endo.as_ref().ok_or_else(|| InputError::missing("endo"))?;
        let mut object_map = Vec::with_capacity(g.num_objects());
        for x in g.objects() {
            let path = format!("endo.object_map.{x}");
            let y = doc.object_map.get(x).ok_or_else(|| InputError::new(&path, "missing image"))?;
            object_map.push(g.object_id(y).map_err(|e| InputError::new(&path, e))?);
        }
        check_keys(doc.object_map.keys(), g.objects(), "endo.object_map")?;
        let names: Vec<String> = g.generators().iter().map(|e| e.name.clone()).collect();
        check_keys(doc.generator_map.keys(), &names, "endo.generator_map")?;
        let mut images = Vec::with_capacity(g.num_generators());
        for e in g.generators() {
            let path = format!("endo.generator_map.{}", e.name);
            let letters = doc.generator_map.get(&e.name).ok_or_else(|| InputError::new(&path, "missing image"))?;
            let w = g
                .parse_word(object_map[e.src], letters)
                .map_err(|err| InputError::new(&path, err))?;
            images.push(w);
        }
        GroupoidEnd::new(g, object_map, images).map_err(|e| InputError::new("endo", e))
    }

    pub fn rep(&self, g: &Graph) -> Result<GpdRep, InputError> {
        let doc = self.rep.as_ref().ok_or_else(|| InputError::missing("rep"))?;
        check_keys(doc.ranks.keys(), g.objects(), "rep.ranks")?;
        let names: Vec<String> = g.generators().iter().map(|e| e.name.clone()).collect();
        check_keys(doc.action.keys(), &names, "rep.action")?;
        let ranks = g
            .objects()
            .iter()
            .map(|x| {
                doc.ranks
                    .get(x)
                    .copied()
                    .ok_or_else(|| InputError::new(format!("rep.ranks.{x}"), "missing rank"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut action = Vec::with_capacity(g.num_generators());
        for e in g.generators() {
            let path = format!("rep.action.{}", e.name);
            let m = doc.action.get(&e.name).ok_or_else(|| InputError::new(&path, "missing matrix"))?;
            action.push(matrix(m, ranks[e.tgt], ranks[e.src], &path)?);
        }
        GpdRep::new(g, ranks, action).map_err(|e| InputError::new("rep", e))
    }

    pub fn rep_endo(&self, g: &Graph, m: &GpdRep) -> Result<RepEndo, InputError> {
        let Some(doc) = self.rep_endo.as_ref() else {
            return Ok(RepEndo::identity(m));
        };
        check_keys(doc.keys(), g.objects(), "rep_endo")?;
        let maps = g
            .objects()
            .iter()
            .enumerate()
            .map(|(x, label)| {
                let path = format!("rep_endo.{label}");
                let mat = doc.get(label).ok_or_else(|| InputError::new(&path, "missing matrix"))?;
                matrix(mat, m.rank(x), m.rank(x), &path)
            })
            .collect::<Result<Vec<_>, _>>()?;
        RepEndo::new(g, m, maps).map_err(|e| InputError::new("rep_endo", e))
    }

    fn finite_set_doc(&self) -> Result<(&FiniteSetDoc, FinSet), InputError> {
        let doc = self.finite_set.as_ref().ok_or_else(|| InputError::missing("finite_set"))?;
        let set = FinSet::new(&doc.elements).map_err(|e| InputError::new("finite_set.elements", e))?;
        Ok((doc, set))
    }

    /// The endomap of `finite_set` as an index vector.
    pub fn set_map(&self) -> Result<(FinSet, Vec<usize>), InputError> {
        let (doc, set) = self.finite_set_doc()?;
        let map = doc.map.as_ref().ok_or_else(|| InputError::missing("finite_set.map"))?;
        check_keys(map.keys(), set.labels(), "finite_set.map")?;
        let phi = set
            .labels()
            .iter()
            .map(|a| {
                let path = format!("finite_set.map.{a}");
                let b = map.get(a).ok_or_else(|| InputError::new(&path, "missing image"))?;
                set.index_of(b)
                    .ok_or_else(|| InputError::new(&path, format!("`{b}` is not an element")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok((set, phi))
    }

    pub fn family(&self) -> Result<FamilyEndo, InputError> {
        let (doc, set) = self.finite_set_doc()?;
        let family = doc.family.as_ref().ok_or_else(|| InputError::missing("finite_set.family"))?;
        check_keys(family.keys(), set.labels(), "finite_set.family")?;
        let maps = set
            .labels()
            .iter()
            .map(|a| {
                let path = format!("finite_set.family.{a}");
                let m = family.get(a).ok_or_else(|| InputError::new(&path, "missing matrix"))?;
                let n = m.len();
                matrix(m, n, n, &path)
            })
            .collect::<Result<Vec<_>, _>>()?;
        FamilyEndo::new(set, maps).map_err(|e| InputError::new("finite_set.family", e))
    }

    pub fn group(&self) -> Result<FinGroup, InputError> {
        let doc = self.group.as_ref().ok_or_else(|| InputError::missing("group"))?;
        match (&doc.name, &doc.elements, &doc.table) {
            (Some(name), None, None) => named_group(name).ok_or_else(|| {
                InputError::new("group.name", format!("unknown group `{name}` (expected C<n> or S3)"))
            }),
            (None, Some(elements), Some(table)) => {
                let index = |s: &str, path: String| {
                    elements
                        .iter()
                        .position(|e| e == s)
                        .ok_or_else(|| InputError::new(path, format!("`{s}` is not an element")))
                };
                if table.len() != elements.len() {
                    return Err(InputError::new("group.table", "table must have one row per element"));
                }
                let mut mul = Vec::with_capacity(elements.len());
                for (i, row) in table.iter().enumerate() {
                    if row.len() != elements.len() {
                        return Err(InputError::new(format!("group.table[{i}]"), "row has the wrong length"));
                    }
                    mul.push(
                        row.iter()
                            .enumerate()
                            .map(|(j, s)| index(s, format!("group.table[{i}][{j}]")))
                            .collect::<Result<Vec<_>, _>>()?,
                    );
                }
                FinGroup::new(elements.clone(), mul).map_err(|e| InputError::new("group.table", e))
            }
            _ => Err(InputError::new("group", "give either `name` or both `elements` and `table`")),
        }
    }

    pub fn group_ring_matrices(&self, g: &FinGroup) -> Result<Vec<GroupRingMatrix>, InputError> {
        let docs = self.group.as_ref().map(|d| &d.matrices).filter(|m| !m.is_empty());
        let docs = docs.ok_or_else(|| InputError::missing("group.matrices"))?;
        docs.iter()
            .enumerate()
            .map(|(k, rows)| group_ring_matrix(g, rows, &format!("group.matrices[{k}]")))
            .collect()
    }

    pub fn cell_pair(&self) -> Result<(Mat2, Mat2), InputError> {
        let doc = self.cell_pair.as_ref().ok_or_else(|| InputError::missing("cell_pair"))?;
        let u = cell(&doc.m, "cell_pair.m")?;
        let v = cell(&doc.n, "cell_pair.n")?;
        if doc.m.source != doc.n.target || doc.m.target != doc.n.source {
            return Err(InputError::new("cell_pair", "cells must be m: A ⇸ B and n: B ⇸ A"));
        }
        Ok((u, v))
    }

    /// The finite groupoid, its representation and the natural endomorphism.
    pub fn finite_groupoid(&self) -> Result<(FinGroupoid, FinGpdRep, Vec<IntMatrix>), InputError> {
        let doc = self.finite_groupoid.as_ref().ok_or_else(|| InputError::missing("finite_groupoid"))?;
        let a = match (doc.group_times_pair, &doc.objects, &doc.morphisms, &doc.then) {
            (Some(n), None, None, None) => FinGroupoid::group_times_pair(&self.group()?, n),
            (None, Some(objects), Some(morphisms), Some(then)) => explicit_groupoid(objects, morphisms, then)?,
            _ => {
                return Err(InputError::new(
                    "finite_groupoid",
                    "give either `group_times_pair` or all of `objects`, `morphisms`, `then`",
                ))
            }
        };
        let rep = &doc.rep;
        check_keys(rep.ranks.keys(), a.objects(), "finite_groupoid.rep.ranks")?;
        let names: Vec<String> = (0..a.num_morphisms()).map(|k| a.name(k).to_string()).collect();
        check_keys(rep.action.keys(), &names, "finite_groupoid.rep.action")?;
        check_keys(rep.endo.keys(), a.objects(), "finite_groupoid.rep.endo")?;
        let ranks = a
            .objects()
            .iter()
            .map(|x| {
                rep.ranks
                    .get(x)
                    .copied()
                    .ok_or_else(|| InputError::new(format!("finite_groupoid.rep.ranks.{x}"), "missing rank"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut matrices = Vec::with_capacity(names.len());
        for (k, name) in names.iter().enumerate() {
            let path = format!("finite_groupoid.rep.action.{name}");
            let m = rep.action.get(name).ok_or_else(|| InputError::new(&path, "missing matrix"))?;
            matrices.push(matrix(m, ranks[a.tgt(k)], ranks[a.src(k)], &path)?);
        }
        let m = FinGpdRep::new(&a, ranks.clone(), matrices).map_err(|e| InputError::new("finite_groupoid.rep", e))?;
        let f = a
            .objects()
            .iter()
            .enumerate()
            .map(|(x, label)| {
                let path = format!("finite_groupoid.rep.endo.{label}");
                let mat = rep.endo.get(label).ok_or_else(|| InputError::new(&path, "missing matrix"))?;
                matrix(mat, ranks[x], ranks[x], &path)
            })
            .collect::<Result<Vec<_>, _>>()?;
        m.check_natural(&a, &f)
            .map_err(|e| InputError::new("finite_groupoid.rep.endo", e))?;
        Ok((a, m, f))
    }

    pub fn complexes(&self) -> Result<Vec<ChainMap>, InputError> {
        if self.complexes.is_empty() {
            return Err(InputError::missing("complexes"));
        }
        self.complexes
            .iter()
            .enumerate()
            .map(|(k, doc)| complex_endo(doc, &format!("complexes[{k}]")))
            .collect()
    }
}

fn group_ring_matrix(g: &FinGroup, rows: &GroupRingMatrixDoc, path: &str) -> Result<GroupRingMatrix, InputError> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut entries = Vec::with_capacity(rows.len() * cols);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != cols {
            return Err(InputError::new(format!("{path}[{i}]"), "rows have different lengths"));
        }
        for (j, entry) in row.iter().enumerate() {
            let mut e = FormalSum::new();
            for (label, c) in entry {
                let x = g
                    .labels()
                    .iter()
                    .position(|l| l == label)
                    .ok_or_else(|| InputError::new(format!("{path}[{i}][{j}].{label}"), "not a group element"))?;
                e.add_term(x, c.0.clone());
            }
            entries.push(GroupRingElem(e));
        }
    }
    GroupRingMatrix::new(rows.len(), cols, entries).map_err(|e| InputError::new(path, e))
}

fn cell(doc: &CellDoc, path: &str) -> Result<Mat2, InputError> {
    let m = MatCell::new(FinSet::range(doc.source), FinSet::range(doc.target), doc.ranks.clone())
        .map_err(|e| InputError::new(format!("{path}.ranks"), e))?;
    if doc.endo.len() != doc.ranks.len() {
        return Err(InputError::new(format!("{path}.endo"), "one matrix per pair required"));
    }
    let blocks = doc
        .endo
        .iter()
        .zip(&doc.ranks)
        .enumerate()
        .map(|(k, (b, &r))| matrix(b, r, r, &format!("{path}.endo[{k}]")))
        .collect::<Result<Vec<_>, _>>()?;
    Mat2::new(m.clone(), m, blocks).map_err(|e| InputError::new(path, e))
}

fn check_keys<'a>(keys: impl Iterator<Item = &'a String>, allowed: &[String], path: &str) -> Result<(), InputError> {
    for k in keys {
        if !allowed.contains(k) {
            return Err(InputError::new(format!("{path}.{k}"), "not declared"));
        }
    }
    Ok(())
}

pub fn named_group(name: &str) -> Option<FinGroup> {
    if name == "S3" {
        return Some(FinGroup::symmetric3());
    }
    let n: usize = name.strip_prefix('C')?.parse().ok()?;
    (n >= 1).then(|| FinGroup::cyclic(n))
}

fn explicit_groupoid(
    objects: &[String],
    morphisms: &[GeneratorDoc],
    then: &[Vec<Option<String>>],
) -> Result<FinGroupoid, InputError> {
    let obj = |s: &str, path: String| {
        objects
            .iter()
            .position(|o| o == s)
            .ok_or_else(|| InputError::new(path, format!("unknown object `{s}`")))
    };
    let mut ms = Vec::with_capacity(morphisms.len());
    for (k, m) in morphisms.iter().enumerate() {
        let p = format!("finite_groupoid.morphisms[{k}]");
        ms.push((m.name.clone(), obj(&m.src, format!("{p}.src"))?, obj(&m.tgt, format!("{p}.tgt"))?));
    }
    let mut table = Vec::with_capacity(then.len());
    for (a, row) in then.iter().enumerate() {
        let mut out = Vec::with_capacity(row.len());
        for (b, cell) in row.iter().enumerate() {
            out.push(match cell {
                None => None,
                Some(name) => Some(ms.iter().position(|m| &m.0 == name).ok_or_else(|| {
                    InputError::new(format!("finite_groupoid.then[{a}][{b}]"), format!("unknown morphism `{name}`"))
                })?),
            });
        }
        table.push(out);
    }
    FinGroupoid::new(objects.to_vec(), ms, table).map_err(|e| InputError::new("finite_groupoid", e))
}

/// Reads a matrix of the given shape. An empty list stands for any matrix
/// with zero rows.
pub fn matrix(doc: &MatrixDoc, rows: usize, cols: usize, path: &str) -> Result<IntMatrix, InputError> {
    if rows == 0 && doc.is_empty() {
        return Ok(IntMatrix::zeros(0, cols));
    }
    if doc.len() != rows || doc.iter().any(|r| r.len() != cols) {
        let found_cols = doc.first().map_or(0, Vec::len);
        return Err(InputError::new(
            path,
            format!("expected a {rows}×{cols} matrix, found {}×{found_cols}", doc.len()),
        ));
    }
    Ok(IntMatrix::from_fn(rows, cols, |i, j| doc[i][j].0.clone()))
}

pub fn matrix_doc(m: &IntMatrix) -> MatrixDoc {
    (0..m.rows()).map(|i| m.row(i).iter().cloned().map(Int).collect()).collect()
}

fn complex_endo(doc: &ComplexDoc, path: &str) -> Result<ChainMap, InputError> {
    let len = doc.ranks.len();
    if doc.differentials.len() != len.saturating_sub(1) {
        return Err(InputError::new(
            format!("{path}.differentials"),
            format!("expected {} matrices", len.saturating_sub(1)),
        ));
    }
    if doc.endo.len() != len {
        return Err(InputError::new(format!("{path}.endo"), format!("expected {len} matrices")));
    }
    let diffs = doc
        .differentials
        .iter()
        .enumerate()
        .map(|(k, m)| matrix(m, doc.ranks[k], doc.ranks[k + 1], &format!("{path}.differentials[{k}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let c = ChainComplex::new(doc.lo, doc.ranks.clone(), diffs).map_err(|e| InputError::new(path, e))?;
    let mut maps = BTreeMap::new();
    for (k, m) in doc.endo.iter().enumerate() {
        let n = doc.ranks[k];
        maps.insert(doc.lo + k as i64, matrix(m, n, n, &format!("{path}.endo[{k}]"))?);
    }
    ChainMap::new(c.clone(), c, maps).map_err(|e| InputError::new(format!("{path}.endo"), e))
}

pub fn complex_doc(f: &ChainMap) -> ComplexDoc {
    let c = f.source();
    let degrees: Vec<i64> = c.degrees().collect();
    ComplexDoc {
        lo: c.lo(),
        ranks: degrees.iter().map(|&n| c.rank(n)).collect(),
        differentials: degrees.iter().skip(1).map(|&n| matrix_doc(&c.d(n))).collect(),
        endo: degrees.iter().map(|&n| matrix_doc(&f.at(n))).collect(),
    }
}
