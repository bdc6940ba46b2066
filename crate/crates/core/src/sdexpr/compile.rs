use std::collections::{HashMap, HashSet};

use super::{Node, SdExpr, StarNode};
use crate::automata::{Alphabet, BuchiAutomaton, Dfa};
use crate::codes::{gamma_star_automaton, min_sync_delay, prefix_violation, GammaPieces};
use crate::error::{Error, Result};
use crate::varieties::{group_in_variety, VarietySpec};

struct Compiler<'a> {
    alphabet: &'a Alphabet,
    finite: HashMap<usize, (SdExpr, Dfa)>,
    omega: HashMap<usize, (SdExpr, BuchiAutomaton)>,
}

impl<'a> Compiler<'a> {
    fn new(alphabet: &'a Alphabet) -> Self {
        Compiler {
            alphabet,
            finite: HashMap::new(),
            omega: HashMap::new(),
        }
    }

    fn pieces(&mut self, s: &StarNode) -> Result<GammaPieces> {
        s.check_labels()?;
        let mut pieces = vec![Dfa::empty(self.alphabet.clone()); s.group.order()];
        for (g, p) in &s.pieces {
            let d = self.finite(p)?;
            pieces[*g] = pieces[*g].union(&d)?.minimize();
        }
        GammaPieces::new(s.group.table().clone(), pieces)
    }

    fn finite(&mut self, e: &SdExpr) -> Result<Dfa> {
        if let Some((_, d)) = self.finite.get(&e.id()) {
            return Ok(d.clone());
        }
        let a = self.alphabet.clone();
        let d = match e.node() {
            Node::Empty => Dfa::empty(a),
            Node::Letter(x) => {
                if *x >= a.len() {
                    return Err(Error::Expr(format!("letter {x} outside an alphabet of {}", a.len())));
                }
                Dfa::letter(a, *x)
            }
            Node::Union(parts) => {
                let mut acc = Dfa::empty(a);
                for p in parts {
                    acc = acc.union(&self.finite(p)?)?.minimize();
                }
                acc
            }
            Node::Concat(l, r) => {
                let l = self.finite(l)?;
                let r = self.finite(r)?;
                l.concat_finite(&r)?.minimize()
            }
            Node::Star(s) => {
                let p = self.pieces(s)?;
                gamma_star_automaton(&p, 0)?
            }
            Node::StarCoset(s, g) => {
                let p = self.pieces(s)?;
                gamma_star_automaton(&p, *g)?
            }
            Node::Omega(_) => return Err(Error::Expr("ω-power in a finite-word context".into())),
        };
        self.finite.insert(e.id(), (e.clone(), d.clone()));
        Ok(d)
    }

    fn omega(&mut self, e: &SdExpr) -> Result<BuchiAutomaton> {
        if let Some((_, b)) = self.omega.get(&e.id()) {
            return Ok(b.clone());
        }
        let b = match e.node() {
            Node::Empty | Node::Letter(_) | Node::Star(_) | Node::StarCoset(..) => {
                BuchiAutomaton::empty(self.alphabet.clone())
            }
            Node::Union(parts) => {
                let mut acc = BuchiAutomaton::empty(self.alphabet.clone());
                for p in parts {
                    acc = acc.union(&self.omega(p)?)?.trim();
                }
                acc
            }
            Node::Concat(l, r) => {
                let l = self.finite(l)?;
                let r = self.omega(r)?;
                BuchiAutomaton::concat(&l, &r)?.trim()
            }
            Node::Omega(s) => {
                let p = self.pieces(s)?;
                BuchiAutomaton::omega_power(&gamma_star_automaton(&p, 0)?).trim()
            }
        };
        self.omega.insert(e.id(), (e.clone(), b.clone()));
        Ok(b)
    }

    fn finite_part(&mut self, e: &SdExpr) -> Result<Dfa> {
        match e.node() {
            Node::Omega(_) => Ok(Dfa::empty(self.alphabet.clone())),
            Node::Union(parts) => {
                let mut acc = Dfa::empty(self.alphabet.clone());
                for p in parts {
                    acc = acc.union(&self.finite_part(p)?)?.minimize();
                }
                Ok(acc)
            }
            Node::Concat(l, r) => {
                let l = self.finite(l)?;
                l.concat_finite(&self.finite_part(r)?)
            }
            _ => self.finite(e),
        }
    }
}

/// Minimal DFA of an ω-free expression.
pub fn compile_finite(e: &SdExpr, alphabet: &Alphabet) -> Result<Dfa> {
    Ok(Compiler::new(alphabet).finite(e)?.minimize())
}

/// Büchi automaton for the infinite words of the denotation.
pub fn compile_omega(e: &SdExpr, alphabet: &Alphabet) -> Result<BuchiAutomaton> {
    Compiler::new(alphabet).omega(e)
}

/// Minimal DFA for the finite words of the denotation.
pub fn finite_part(e: &SdExpr, alphabet: &Alphabet) -> Result<Dfa> {
    Ok(Compiler::new(alphabet).finite_part(e)?.minimize())
}

/// Side conditions of one star, ω-power or coset node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeCheck {
    pub path: String,
    pub kind: &'static str,
    pub group: String,
    pub code_states: usize,
    /// Least synchronization delay found, if any up to the bound.
    pub delay: Option<usize>,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub ok: bool,
    pub nodes: Vec<NodeCheck>,
    /// Failures of concatenations and of the nodes above.
    pub failures: Vec<String>,
}

impl ValidationReport {
    /// Largest verified delay over all nodes.
    pub fn max_delay(&self) -> Option<usize> {
        self.nodes.iter().filter_map(|n| n.delay).max()
    }
}

/// Checks every star, ω-power and coset node once: finite pieces, pairwise
/// disjoint, a prefix code with a synchronization delay at most `dmax`, and
/// a group in `v`. Left factors of concatenations must be ω-free.
pub fn validate(e: &SdExpr, alphabet: &Alphabet, v: VarietySpec, dmax: usize) -> ValidationReport {
    let mut c = Compiler::new(alphabet);
    let mut nodes = Vec::new();
    let mut failures = Vec::new();
    let mut seen = HashSet::new();
    let mut stack = vec![(e.clone(), "root".to_string())];
    let mut group_verdicts: HashMap<String, bool> = HashMap::new();
    let mut omega_free: HashMap<usize, bool> = HashMap::new();
    for x in e.nodes() {
        let free = !matches!(x.node(), Node::Omega(_))
            && x.children().iter().all(|c| omega_free[&c.id()]);
        omega_free.insert(x.id(), free);
    }
    while let Some((x, path)) = stack.pop() {
        if !seen.insert(x.id()) {
            continue;
        }
        let children = x.children();
        match x.node() {
            Node::Concat(l, r) => {
                if !omega_free[&l.id()] {
                    failures.push(format!("{path}: left factor of a concatenation is not ω-free"));
                }
                stack.push((r.clone(), format!("{path}/concat.1")));
                stack.push((l.clone(), format!("{path}/concat.0")));
            }
            Node::Star(s) | Node::Omega(s) | Node::StarCoset(s, _) => {
                let kind = match x.node() {
                    Node::Star(_) => "star",
                    Node::Omega(_) => "omega",
                    _ => "starcoset",
                };
                let key = s.group.to_string();
                let in_v = *group_verdicts
                    .entry(key.clone())
                    .or_insert_with(|| group_in_variety(&s.group.as_group(), v));
                let mut check = NodeCheck {
                    path: path.clone(),
                    kind,
                    group: key.clone(),
                    code_states: 0,
                    delay: None,
                    failures: Vec::new(),
                };
                if !in_v {
                    check.failures.push(format!("group {key} is not in the variety {v}"));
                }
                if s.pieces.iter().any(|(_, p)| !omega_free[&p.id()]) {
                    check.failures.push("a piece is not ω-free".into());
                } else {
                    match c.pieces(s) {
                        Err(err) => check.failures.push(err.to_string()),
                        Ok(p) => {
                            if let Some((g, h, w)) = p.overlap() {
                                check.failures.push(format!(
                                    "pieces {g} and {h} share `{}`",
                                    alphabet.format_word(&w)
                                ));
                            }
                            let code = p.code();
                            check.code_states = code.num_states();
                            if let Some(pv) = prefix_violation(&code) {
                                check.failures.push(format!("not a prefix code: {pv:?}"));
                            } else {
                                let report = min_sync_delay(&code, dmax);
                                check.delay = report.delay;
                                if report.delay.is_none() {
                                    check
                                        .failures
                                        .push(format!("no synchronization delay <= {dmax}"));
                                }
                            }
                        }
                    }
                }
                for (i, (_, p)) in s.pieces.iter().enumerate().rev() {
                    stack.push((p.clone(), format!("{path}/{kind}.{i}")));
                }
                nodes.push(check);
            }
            _ => {
                for (i, ch) in children.into_iter().enumerate().rev() {
                    stack.push((ch, format!("{path}/union.{i}")));
                }
            }
        }
    }
    let ok = failures.is_empty() && nodes.iter().all(|n| n.failures.is_empty());
    ValidationReport { ok, nodes, failures }
}
