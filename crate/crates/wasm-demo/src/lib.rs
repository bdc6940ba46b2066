//! Browser bindings. Each operation takes the text of a language, either in
//! the `.dfa` format or as a regular expression over single-character
//! letters, and returns a JSON string. Errors come back as `{"error": ..}`.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use syncdelay::automata::{Alphabet, Dfa};
use syncdelay::codes::{min_sync_delay, PrefixViolation};
use syncdelay::decompose::{decompose, verify_tree, DecompKind, DecompTree};
use syncdelay::groups::name_group;
use syncdelay::varieties::{monoid_in_hbar, VarietySpec};
use syncdelay::{Group, Monoid};

/// Largest monoid the page will build.
pub const SIZE_CAP: usize = 5000;

/// Largest delay searched by [`check_code`].
pub const DMAX_LIMIT: usize = 12;

/// Reads `.dfa` text, or a regular expression whose letters are the
/// alphanumeric characters in it, sorted, unless `alphabet` is non-empty.
pub fn parse_language(text: &str, alphabet: &str) -> Result<Dfa, String> {
    let t = text.trim();
    if t.starts_with("dfa") {
        return Dfa::from_text(t).map_err(|e| e.to_string());
    }
    let letters: String = if alphabet.trim().is_empty() {
        let seen: std::collections::BTreeSet<char> = t.chars().filter(|c| c.is_alphanumeric()).collect();
        seen.into_iter().collect()
    } else {
        alphabet.chars().filter(|c| !c.is_whitespace()).collect()
    };
    if letters.is_empty() {
        return Err("no letters: give an alphabet or a non-empty expression".into());
    }
    Dfa::from_regex(&Alphabet::from_chars(&letters), t).map_err(|e| e.to_string())
}

fn subgroups(m: &Monoid) -> Value {
    m.maximal_subgroups()
        .iter()
        .map(|g| json!({"order": g.order(), "name": name_group(g).to_string()}))
        .collect()
}

pub fn analyze(text: &str, alphabet: &str) -> Result<Value, String> {
    let d = parse_language(text, alphabet)?.minimize();
    let s = d.transition_monoid(SIZE_CAP).map_err(|e| e.to_string())?;
    let m = &s.monoid;
    let mut varieties = serde_json::Map::new();
    for v in VarietySpec::standard() {
        varieties.insert(v.to_string(), json!(monoid_in_hbar(m, v).verdict));
    }
    Ok(json!({
        "alphabet": d.alphabet().names(),
        "states": d.num_states(),
        "monoid_size": m.size(),
        "idempotents": m.idempotents().len(),
        "aperiodic": m.is_aperiodic(),
        "subgroups": subgroups(m),
        "varieties": varieties,
    }))
}

fn tree_json(t: &DecompTree) -> Value {
    match &t.kind {
        DecompKind::Leaf => {
            let name = Group::whole(t.monoid.clone()).map(|g| name_group(&g).to_string()).unwrap_or_default();
            json!({"size": t.monoid.size(), "group": name})
        }
        DecompKind::Node { c, left, right, .. } => json!({
            "size": t.monoid.size(),
            "c": c,
            "n": tree_json(left),
            "local": tree_json(right),
        }),
    }
}

/// Decomposes a monoid given as `.mon` text, or the syntactic monoid of a
/// language.
pub fn decompose_text(text: &str, alphabet: &str) -> Result<Value, String> {
    let m = if text.trim().starts_with("monoid") {
        Monoid::from_text(text.trim()).map_err(|e| e.to_string())?
    } else {
        let d = parse_language(text, alphabet)?;
        d.syntactic_monoid(SIZE_CAP).map_err(|e| e.to_string())?.monoid
    };
    if m.size() > 400 {
        return Err(format!("monoid has {} elements; the page decomposes at most 400", m.size()));
    }
    let t = decompose(&m);
    let rep = verify_tree(&t, &m);
    Ok(json!({
        "monoid_size": m.size(),
        "nodes": t.node_count(),
        "depth": t.depth(),
        "leaves": t.leaf_names().iter().map(|g| g.to_string()).collect::<Vec<_>>(),
        "verified": rep.ok,
        "failure": rep.failure,
        "tree": tree_json(&t),
        "dot": t.to_dot(),
    }))
}

pub fn check(text: &str, alphabet: &str, dmax: usize) -> Result<Value, String> {
    if dmax > DMAX_LIMIT {
        return Err(format!("dmax is at most {DMAX_LIMIT}"));
    }
    let k = parse_language(text, alphabet)?;
    let a = k.alphabet().clone();
    let show = |w: &[usize]| if w.is_empty() { "1".to_string() } else { a.format_word(w) };
    let r = min_sync_delay(&k, dmax);
    let violation = r.prefix_violation.as_ref().map(|v| match v {
        PrefixViolation::ContainsEmptyWord => "contains the empty word".to_string(),
        PrefixViolation::ProperPrefix { u, uv } => format!("{} is a proper prefix of {}", show(u), show(uv)),
    });
    let counterexamples: Vec<Value> = r
        .counterexamples
        .iter()
        .map(|c| json!({"delay": c.delay, "u": show(&c.u), "v": show(&c.v), "w": show(&c.w)}))
        .collect();
    Ok(json!({
        "prefix_code": r.is_prefix_code,
        "violation": violation,
        "delay": r.delay,
        "searched_up_to": dmax,
        "counterexamples": counterexamples,
    }))
}

fn respond(r: Result<Value, String>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

#[wasm_bindgen]
pub fn analyze_language(text: &str, alphabet: &str) -> String {
    respond(analyze(text, alphabet))
}

#[wasm_bindgen]
pub fn decompose_monoid(text: &str, alphabet: &str) -> String {
    respond(decompose_text(text, alphabet))
}

#[wasm_bindgen]
pub fn check_code(text: &str, alphabet: &str, dmax: usize) -> String {
    respond(check(text, alphabet, dmax))
}
