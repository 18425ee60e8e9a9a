//! Randomized theorem-verification suites.
//!
//! Each suite draws its instances as input documents and re-reads them
//! before checking, so a failing document is a complete witness: running
//! `trace-kit verify --suite NAME witness.json` repeats the single check.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::Serialize;
use trace_kit_core::chain::{dual_map, lefschetz_trace, tensor_map};
use trace_kit_core::fixpt::{
    lefschetz, lefschetz_combinatorial, reidemeister_trace, rt_augment, rt_project_pi0, sigma_map, transfer,
};
use trace_kit_core::freegpd::{EdgeCollapse, Letter, TwistedClassifier, Word};
use trace_kit_core::gpdrep::{
    hocolim_complex, hocolim_endo, rep_total_trace, rep_total_trace_euler, rep_total_trace_sum,
};
use trace_kit_core::intlinalg::{smith_normal_form, trace, IntMatrix};
use trace_kit_core::matbicat::{
    fam_fib_trace, fam_tot_trace, fingpd_conj_classes, fingpd_fib_trace, fingpd_fib_transfer, hattori_stallings,
    mat_compose, mat_compose_2, mat_shadow, mat_shadow_2, set_transfer, shadow_theta, shadow_unit_coherence,
    verify_fibtrace4, verify_totaltr, GroupRingMatrix,
};
use trace_kit_core::{Exec, FormalSum};

use crate::doc::InputDocument;
use crate::generate::{circle_document, generate, set_map_document, Kind};

/// At most this many failing witnesses are kept per suite.
const MAX_WITNESSES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, clap::ValueEnum)]
pub enum Suite {
    All,
    Circle,
    Lefschetz,
    Reidemeister,
    Transfer,
    Collapse,
    Chain,
    Gpdrep,
    Matrix,
    Shadow,
    HattoriStallings,
    Groupoid,
    SetTransfer,
}

impl Suite {
    pub const ALL: [Suite; 12] = [
        Suite::Circle,
        Suite::Lefschetz,
        Suite::Reidemeister,
        Suite::Transfer,
        Suite::Collapse,
        Suite::Chain,
        Suite::Gpdrep,
        Suite::Matrix,
        Suite::Shadow,
        Suite::HattoriStallings,
        Suite::Groupoid,
        Suite::SetTransfer,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Circle => "circle",
            Suite::Lefschetz => "lefschetz",
            Suite::Reidemeister => "reidemeister",
            Suite::Transfer => "transfer",
            Suite::Collapse => "collapse",
            Suite::Chain => "chain",
            Suite::Gpdrep => "gpdrep",
            Suite::Matrix => "matrix",
            Suite::Shadow => "shadow",
            Suite::HattoriStallings => "hattori-stallings",
            Suite::Groupoid => "groupoid",
            Suite::SetTransfer => "set-transfer",
        }
    }

    fn kind(self) -> Option<Kind> {
        match self {
            Suite::Lefschetz | Suite::Reidemeister | Suite::Transfer | Suite::Collapse => Some(Kind::FreeGroupoidEndo),
            Suite::Chain => Some(Kind::ChainComplex),
            Suite::Gpdrep => Some(Kind::GpdRep),
            Suite::Matrix => Some(Kind::MatrixFamily),
            Suite::Shadow => Some(Kind::CellPair),
            Suite::HattoriStallings => Some(Kind::GroupRingMatrix),
            Suite::Groupoid => Some(Kind::FiniteGroupoidRep),
            Suite::All | Suite::Circle | Suite::SetTransfer => None,
        }
    }

    /// Number of checks for a requested instance count. The circle family
    /// and the set transfer are exhaustive; group rings run per group.
    pub fn count(self, instances: usize) -> usize {
        match self {
            Suite::Circle => CIRCLE_DEGREES.len(),
            Suite::SetTransfer => (0..=SET_TRANSFER_MAX).map(|n| n.pow(n as u32)).sum(),
            Suite::HattoriStallings => 3 * instances,
            _ => instances,
        }
    }
}

const CIRCLE_DEGREES: [i64; 6] = [-2, -1, 0, 1, 2, 3];
const SET_TRANSFER_MAX: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Settings {
    pub seed: u64,
    pub instances: usize,
    pub bound: usize,
    pub exec: Exec,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub index: usize,
    pub message: String,
    pub witness: InputDocument,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub checked: usize,
    pub passed: usize,
    pub failed: usize,
    /// Tallies of per-instance annotations such as the Reidemeister
    /// classification.
    pub notes: BTreeMap<String, usize>,
    pub failures: Vec<Failure>,
}

impl SuiteReport {
    pub fn pass(&self) -> bool {
        self.failed == 0
    }
}

/// The document checked as instance `index` of `suite`.
pub fn instance(suite: Suite, seed: u64, index: usize) -> InputDocument {
    match suite {
        Suite::Circle => circle_document(CIRCLE_DEGREES[index]),
        Suite::SetTransfer => set_map_document(&decode_endomap(index)),
        _ => {
            let kind = suite.kind().expect("generated suite");
            generate(kind, seed, index as u64, &kind.default_size())
        }
    }
}

/// The `index`-th self-map of `{0..n}` over n = 0, 1, 2, … in base-n order.
fn decode_endomap(mut index: usize) -> Vec<usize> {
    let mut n: usize = 0;
    while index >= n.pow(n as u32) {
        index -= n.pow(n as u32);
        n += 1;
    }
    (0..n)
        .map(|_| {
            let d = index % n;
            index /= n;
            d
        })
        .collect()
}

pub fn run_suite(suite: Suite, settings: &Settings) -> SuiteReport {
    let n = suite.count(settings.instances);
    let outcomes = settings.exec.map_indexed(n, |i| {
        let doc = instance(suite, settings.seed, i);
        check(suite, &doc, settings.bound).map_err(|message| Failure {
            index: i,
            message,
            witness: doc,
        })
    });
    let mut report = SuiteReport {
        suite: suite.name(),
        checked: n,
        passed: 0,
        failed: 0,
        notes: BTreeMap::new(),
        failures: Vec::new(),
    };
    for o in outcomes {
        match o {
            Ok(note) => {
                report.passed += 1;
                if let Some(note) = note {
                    *report.notes.entry(note.to_string()).or_insert(0) += 1;
                }
            }
            Err(f) => {
                report.failed += 1;
                if report.failures.len() < MAX_WITNESSES {
                    report.failures.push(f);
                }
            }
        }
    }
    report
}

pub fn run(suite: Suite, settings: &Settings) -> Vec<SuiteReport> {
    match suite {
        Suite::All => Suite::ALL.iter().map(|&s| run_suite(s, settings)).collect(),
        s => vec![run_suite(s, settings)],
    }
}

type Outcome = Result<Option<&'static str>, String>;

fn expect_eq<T: PartialEq + std::fmt::Debug>(what: &str, first: T, second: T) -> Result<(), String> {
    if first == second {
        Ok(())
    } else {
        Err(format!("{what}: {first:?} ≠ {second:?}"))
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// Runs one check of `suite` on a document.
pub fn check(suite: Suite, doc: &InputDocument, bound: usize) -> Outcome {
    match suite {
        Suite::All => Err("`all` is not a single check".into()),
        Suite::Circle => check_circle(doc, bound),
        Suite::Lefschetz => check_lefschetz(doc),
        Suite::Reidemeister => check_reidemeister(doc, bound),
        Suite::Transfer => check_transfer(doc, bound),
        Suite::Collapse => check_collapse(doc, bound),
        Suite::Chain => check_chain(doc),
        Suite::Gpdrep => check_gpdrep(doc),
        Suite::Matrix => check_matrix(doc),
        Suite::Shadow => check_shadow(doc),
        Suite::HattoriStallings => check_hattori_stallings(doc),
        Suite::Groupoid => check_groupoid(doc),
        Suite::SetTransfer => check_set_transfer(doc),
    }
}

fn check_circle(doc: &InputDocument, bound: usize) -> Outcome {
    let g = doc.graph().map_err(err)?;
    let phi = doc.endo(&g).map_err(err)?;
    if g.num_objects() != 1 || g.num_generators() != 1 || g.generators()[0].src != 0 || g.generators()[0].tgt != 0 {
        return Err("not a circle".into());
    }
    let d = phi.image_generator(0).signed_count(0);
    let expected = BigInt::from(1 - d);
    let chain = lefschetz_trace(&sigma_map(&g, &phi).map_err(err)?).map_err(err)?;
    expect_eq("combinatorial Lefschetz", lefschetz_combinatorial(&g, &phi), expected.clone())?;
    expect_eq("chain Lefschetz", chain, expected.clone())?;
    let rt = reidemeister_trace(&g, &phi, bound).map_err(err)?;
    expect_eq("augmented Reidemeister trace", rt_augment(&rt), expected)?;
    if d == 1 {
        return Ok(None);
    }
    let classifier = TwistedClassifier::new(&g, &phi);
    let k = (d - 1).unsigned_abs() as usize;
    let mut invariants = Vec::new();
    for p in 0..=2 * k {
        let w = Word::new(&g, 0, vec![Letter::pos(0); p]).map_err(err)?;
        invariants.push(classifier.invariant(&w).map_err(err)?);
    }
    invariants.sort();
    invariants.dedup();
    let snf = smith_normal_form(&IntMatrix::from_i64(&[&[d - 1]]));
    let order = snf.invariant_factors()[0].abs();
    expect_eq("distinct abelian invariants vs |coker(d-1)|", BigInt::from(invariants.len()), order)?;
    expect_eq("distinct abelian invariants vs |d-1|", invariants.len(), k)?;
    Ok(None)
}

fn check_lefschetz(doc: &InputDocument) -> Outcome {
    let g = doc.graph().map_err(err)?;
    let phi = doc.endo(&g).map_err(err)?;
    let s = sigma_map(&g, &phi).map_err(err)?;
    s.validate().map_err(err)?;
    let chain = lefschetz_trace(&s).map_err(err)?;
    expect_eq("combinatorial vs chain Lefschetz", lefschetz_combinatorial(&g, &phi), chain)?;
    Ok(None)
}

fn check_reidemeister(doc: &InputDocument, bound: usize) -> Outcome {
    let g = doc.graph().map_err(err)?;
    let phi = doc.endo(&g).map_err(err)?;
    let rt = reidemeister_trace(&g, &phi, bound).map_err(err)?;
    expect_eq("augmented Reidemeister trace vs Lefschetz", rt_augment(&rt), lefschetz(&g, &phi).map_err(err)?)?;
    Ok(Some(match rt.classification {
        trace_kit_core::fixpt::Classification::Exact => "exact",
        trace_kit_core::fixpt::Classification::Bounded { .. } => "bounded",
    }))
}

fn check_transfer(doc: &InputDocument, bound: usize) -> Outcome {
    let g = doc.graph().map_err(err)?;
    let phi = doc.endo(&g).map_err(err)?;
    let rt = reidemeister_trace(&g, &phi, bound).map_err(err)?;
    expect_eq("projected Reidemeister trace vs transfer", rt_project_pi0(&g, &rt), transfer(&g, &phi).map_err(err)?)?;
    Ok(None)
}

/// Collapses every tree edge in turn and compares the invariants, with
/// components of the quotient named by components of the original.
fn check_collapse(doc: &InputDocument, bound: usize) -> Outcome {
    let g = doc.graph().map_err(err)?;
    let phi = doc.endo(&g).map_err(err)?;
    let tree = g.tree_edges();
    if tree.is_empty() {
        return Ok(Some("no tree edge"));
    }
    let l = lefschetz(&g, &phi).map_err(err)?;
    let rt = reidemeister_trace(&g, &phi, bound).map_err(err)?;
    let proj = rt_project_pi0(&g, &rt);
    // edge chosen from the document contents
    let pick = (0..g.num_generators()).map(|i| phi.image_generator(i).len()).sum::<usize>() + g.num_objects();
    let e = tree[pick % tree.len()];
    let c = EdgeCollapse::new(&g, e).map_err(err)?;
    let h = &c.target;
    let psi = c.transport(&phi).map_err(err)?;
    let name = &g.generators()[e].name;
    expect_eq(&format!("Lefschetz after collapsing {name}"), lefschetz(h, &psi).map_err(err)?, l)?;
    let rt2 = reidemeister_trace(h, &psi, bound).map_err(err)?;
    expect_eq(&format!("augmentation after collapsing {name}"), rt_augment(&rt2), rt_augment(&rt))?;
    let proj2 = rt_project_pi0(h, &rt2).map_basis(|k| {
        let x = h.pi0().representative[*k];
        g.component_of(c.object_to_old[x])
    });
    expect_eq(&format!("π₀ projection after collapsing {name}"), proj2, proj)?;
    Ok(None)
}

fn check_chain(doc: &InputDocument) -> Outcome {
    let maps = doc.complexes().map_err(err)?;
    for f in &maps {
        f.source().validate().map_err(err)?;
        f.validate().map_err(err)?;
        let d = dual_map(f);
        d.source().validate().map_err(err)?;
        d.validate().map_err(err)?;
        expect_eq("dual Lefschetz", lefschetz_trace(&d).map_err(err)?, lefschetz_trace(f).map_err(err)?)?;
    }
    for f in &maps {
        for g in &maps {
            let t = tensor_map(f, g).map_err(err)?;
            t.source().validate().map_err(err)?;
            t.validate().map_err(err)?;
            expect_eq(
                "Lefschetz of a tensor product",
                lefschetz_trace(&t).map_err(err)?,
                lefschetz_trace(f).map_err(err)? * lefschetz_trace(g).map_err(err)?,
            )?;
        }
    }
    Ok(None)
}

fn check_gpdrep(doc: &InputDocument) -> Outcome {
    let g = doc.graph().map_err(err)?;
    let m = doc.rep(&g).map_err(err)?;
    let f = doc.rep_endo(&g, &m).map_err(err)?;
    expect_eq("sum form vs (1 - D) form", rep_total_trace_sum(&g, &f), rep_total_trace_euler(&g, &f))?;
    hocolim_complex(&g, &m).validate().map_err(err)?;
    let h = hocolim_endo(&g, &m, &f).map_err(err)?;
    h.validate().map_err(err)?;
    let total = rep_total_trace(&g, &m, &f).map_err(err)?;
    expect_eq("augmented total trace vs hocolim Lefschetz", total.augmentation(), lefschetz_trace(&h).map_err(err)?)?;
    Ok(None)
}

fn check_matrix(doc: &InputDocument) -> Outcome {
    let f = doc.family().map_err(err)?;
    let square = verify_fibtrace4(&f, None).map_err(err)?;
    if !square.pass {
        return Err(format!(
            "fiberwise trace square: {:?} ≠ {:?}",
            square.top_right, square.left_bottom
        ));
    }
    let triangle = verify_totaltr(&f, None);
    if !triangle.pass {
        return Err(format!(
            "total trace triangle: {} ≠ {}",
            triangle.augmented_total, triangle.fiberwise_total
        ));
    }
    // the square must notice a perturbed entry
    for k in 0..f.base().len() {
        let corrupted = verify_fibtrace4(&f, Some((k, BigInt::one()))).map_err(err)?;
        expect_eq("witness of a corrupted entry", corrupted.witness, Some(k))?;
    }
    let fib: BigInt = fam_fib_trace(&f).per_fiber.iter().sum();
    expect_eq("augmented total trace", fam_tot_trace(&f).augmentation(), fib)?;
    if let Ok((_, phi)) = doc.set_map() {
        let fixed: FormalSum<usize> = (0..phi.len()).filter(|&a| phi[a] == a).map(|a| (a, BigInt::one())).collect();
        expect_eq("set transfer", set_transfer(&phi), fixed)?;
    }
    Ok(None)
}

fn check_shadow(doc: &InputDocument) -> Outcome {
    let (u, v) = doc.cell_pair().map_err(err)?;
    let (m, n) = (u.source(), v.source());
    let mn = mat_compose(m, n).map_err(err)?;
    let nm = mat_compose(n, m).map_err(err)?;
    expect_eq("shadow ranks", mat_shadow(&mn).map_err(err)?, mat_shadow(&nm).map_err(err)?)?;
    let theta = shadow_theta(m, n).map_err(err)?;
    let uv = mat_shadow_2(&mat_compose_2(&u, &v).map_err(err)?).map_err(err)?;
    let vu = mat_shadow_2(&mat_compose_2(&v, &u).map_err(err)?).map_err(err)?;
    expect_eq("θ naturality", &theta * &uv, &vu * &theta)?;
    let round = &shadow_theta(n, m).map_err(err)? * &theta;
    expect_eq("θ involution", round.clone(), IntMatrix::identity(round.rows()))?;
    expect_eq("trace cyclicity", trace(&uv).map_err(err)?, trace(&vu).map_err(err)?)?;
    let (left, right) = shadow_unit_coherence(&mn).map_err(err)?;
    expect_eq("unit coherence", left, right)?;
    Ok(None)
}

fn check_hattori_stallings(doc: &InputDocument) -> Outcome {
    let g = doc.group().map_err(err)?;
    let ms = doc.group_ring_matrices(&g).map_err(err)?;
    let [f, m, n, u, uinv]: &[GroupRingMatrix; 5] = ms
        .as_slice()
        .try_into()
        .map_err(|_| "expected matrices f, m, n, u, u⁻¹".to_string())?;
    let hs = |x: &GroupRingMatrix| hattori_stallings(&g, x).map_err(err);
    let mul = |x: &GroupRingMatrix, y: &GroupRingMatrix| x.mul(&g, y).map_err(err);
    expect_eq("cyclicity", hs(&mul(m, n)?)?, hs(&mul(n, m)?)?)?;
    expect_eq("u·u⁻¹", mul(u, uinv)?, GroupRingMatrix::identity(&g, u.rows()))?;
    expect_eq("conjugation invariance", hs(&mul(&mul(u, f)?, uinv)?)?, hs(f)?)?;
    expect_eq("augmentation", hs(f)?.augmentation(), trace(&f.augmented()).map_err(err)?)?;
    Ok(None)
}

fn check_groupoid(doc: &InputDocument) -> Outcome {
    let (a, m, f) = doc.finite_groupoid().map_err(err)?;
    let traces = fingpd_fib_trace(&a, &m, &f).map_err(err)?;
    let transfers = fingpd_fib_transfer(&a, &m, &f).map_err(err)?;
    for (t, s) in traces.iter().zip(&transfers) {
        expect_eq("augmented transfer vs trace", &s.augmentation(), t)?;
    }
    for class in fingpd_conj_classes(&a) {
        let values: Vec<BigInt> = class
            .iter()
            .map(|&k| trace(&(&f[a.src(k)] * m.matrix(k))).map_err(err))
            .collect::<Result<_, _>>()?;
        if values.iter().any(|v| v != &values[0]) {
            return Err(format!("trace is not a class function on class of `{}`", a.name(class[0])));
        }
    }
    Ok(None)
}

fn check_set_transfer(doc: &InputDocument) -> Outcome {
    let (_, phi) = doc.set_map().map_err(err)?;
    let mut fixed = FormalSum::new();
    for (a, &b) in phi.iter().enumerate() {
        if a == b {
            fixed.add_term(a, BigInt::one());
        }
    }
    expect_eq("set transfer vs fixed points", set_transfer(&phi), fixed)?;
    Ok(None)
}
