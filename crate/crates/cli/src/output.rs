//! Exact JSON encodings of results.

use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::{Map, Number, Value};
use trace_kit_core::fixpt::{Classification, ReidemeisterTrace};
use trace_kit_core::freegpd::{Graph, Word};
use trace_kit_core::intlinalg::CokernelElement;
use trace_kit_core::FormalSum;

pub fn int(n: &BigInt) -> Value {
    Value::Number(Number::from_str(&n.to_string()).expect("integers are valid JSON numbers"))
}

pub fn ints(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int).collect())
}

/// `{label: coefficient}` in basis order.
pub fn formal_sum<K: Ord + Clone>(s: &FormalSum<K>, mut label: impl FnMut(&K) -> String) -> Value {
    let mut m = Map::new();
    for (k, c) in s.iter() {
        m.insert(label(k), int(c));
    }
    Value::Object(m)
}

/// `x:a.b^-1`, or `x:id` for an identity.
pub fn word_label(g: &Graph, w: &Word) -> String {
    w.display(g).to_string()
}

/// A component is named by its root object.
pub fn component_label(g: &Graph, c: usize) -> String {
    g.objects()[g.pi0().representative[c]].clone()
}

fn cokernel(e: &CokernelElement) -> Value {
    serde_json::json!({ "moduli": ints(&e.moduli), "residues": ints(&e.residues) })
}

pub fn classification(g: &Graph, c: &Classification) -> Value {
    match c {
        Classification::Exact => serde_json::json!({ "kind": "exact" }),
        Classification::Bounded { bound, unresolved } => serde_json::json!({
            "kind": "bounded",
            "bound": bound,
            "unresolved": unresolved
                .iter()
                .map(|(a, b)| vec![word_label(g, a), word_label(g, b)])
                .collect::<Vec<_>>(),
        }),
    }
}

pub fn reidemeister(g: &Graph, rt: &ReidemeisterTrace, transfer: &FormalSum<usize>, lefschetz: &BigInt) -> Value {
    let coarse: Vec<Value> = rt
        .coarse
        .iter()
        .map(|t| {
            serde_json::json!({
                "component": component_label(g, t.component),
                "invariant": cokernel(&t.invariant),
                "coefficient": int(&t.coefficient),
            })
        })
        .collect();
    let raw: Vec<Value> = rt
        .raw_terms
        .iter()
        .map(|(w, c)| Value::Array(vec![Value::String(word_label(g, w)), int(c)]))
        .collect();
    serde_json::json!({
        "reidemeister_trace": formal_sum(&rt.terms, |w| word_label(g, w)),
        "classification": classification(g, &rt.classification),
        "lefschetz": int(lefschetz),
        "transfer": formal_sum(transfer, |c| component_label(g, *c)),
        "coarse": coarse,
        "raw_terms": raw,
    })
}
