//! Expressions built from letters by union, unambiguous concatenation and
//! group-labelled star and ω-power over prefix codes of bounded
//! synchronization delay.

mod compile;
mod coset;
mod omega;
mod sexp;
mod synth;

use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use crate::automata::Letter;
use crate::error::{Error, Result};
use crate::groups::{cyclic, symmetric};
use crate::monoid::{Elem, Group, Monoid};

pub use compile::{compile_finite, compile_omega, finite_part, validate, NodeCheck, ValidationReport};
pub use coset::{coset_expr, eliminate_cosets, lift_group, sigma_preimage};
pub use omega::{lasso_mismatches, synthesize_omega, OmegaNormalForm, OmegaOptions};
pub use sexp::{parse_sexp, ParsedExpr};
pub use synth::{synthesize_all, synthesize_finite, synthesize_finite_raw};

/// How a group is written in expressions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    Trivial,
    Cyclic(usize),
    Sym(usize),
    File(String),
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Trivial => write!(f, "(trivial)"),
            GroupSpec::Cyclic(n) => write!(f, "(cyclic {n})"),
            GroupSpec::Sym(n) => write!(f, "(sym {n})"),
            GroupSpec::File(p) => write!(f, "(file {p:?})"),
        }
    }
}

/// A group together with its multiplication table (identity `0`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupRef {
    spec: GroupSpec,
    table: Monoid,
}

impl GroupRef {
    pub fn trivial() -> GroupRef {
        GroupRef {
            spec: GroupSpec::Trivial,
            table: Monoid::trivial(),
        }
    }

    pub fn cyclic(n: usize) -> Result<GroupRef> {
        if n == 0 {
            return Err(Error::NotAGroup("cyclic group of order 0".into()));
        }
        Ok(GroupRef {
            spec: GroupSpec::Cyclic(n),
            table: cyclic(n),
        })
    }

    pub fn sym(n: usize) -> Result<GroupRef> {
        if !(1..=5).contains(&n) {
            return Err(Error::Precondition(format!("sym {n}: degree must be 1..=5")));
        }
        Ok(GroupRef {
            spec: GroupSpec::Sym(n),
            table: symmetric(n),
        })
    }

    /// Reads a group table in the monoid text format.
    pub fn from_file(path: &str) -> Result<GroupRef> {
        let text = std::fs::read_to_string(Path::new(path))
            .map_err(|e| Error::Precondition(format!("cannot read {path}: {e}")))?;
        let table = Monoid::from_text(&text)?;
        GroupRef::from_table(GroupSpec::File(path.to_string()), table)
    }

    /// Pairs a spec with an already loaded table.
    pub fn from_table(spec: GroupSpec, table: Monoid) -> Result<GroupRef> {
        if !table.is_group() {
            return Err(Error::NotAGroup(format!("{spec}")));
        }
        if table.identity() != 0 {
            return Err(Error::Precondition(format!("{spec}: identity must be element 0")));
        }
        Ok(GroupRef { spec, table })
    }

    pub fn from_spec(spec: &GroupSpec) -> Result<GroupRef> {
        match spec {
            GroupSpec::Trivial => Ok(GroupRef::trivial()),
            GroupSpec::Cyclic(n) => GroupRef::cyclic(*n),
            GroupSpec::Sym(n) => GroupRef::sym(*n),
            GroupSpec::File(p) => GroupRef::from_file(p),
        }
    }

    /// `trivial`, `cyclic:N`, `sym:N` (or `sym3`), `file:PATH`.
    pub fn parse_cli(s: &str) -> Result<GroupRef> {
        let bad = || Error::Parse {
            line: 0,
            message: format!("bad group `{s}`; expected trivial, cyclic:N, sym:N or file:PATH"),
        };
        let num = |t: &str| t.parse::<usize>().map_err(|_| bad());
        match s.split_once(':') {
            None if s == "trivial" => Ok(GroupRef::trivial()),
            None if s.starts_with("sym") => GroupRef::sym(num(&s[3..])?),
            Some(("cyclic", n)) => GroupRef::cyclic(num(n)?),
            Some(("sym", n)) => GroupRef::sym(num(n)?),
            Some(("file", p)) => GroupRef::from_file(p),
            _ => Err(bad()),
        }
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn table(&self) -> &Monoid {
        &self.table
    }

    pub fn order(&self) -> usize {
        self.table.size()
    }

    pub fn as_group(&self) -> Group {
        Group::whole(self.table.clone()).expect("validated on construction")
    }

    pub(crate) fn inverse(&self, x: Elem) -> Elem {
        self.table
            .elements()
            .find(|&y| self.table.mul(x, y) == 0)
            .expect("group")
    }
}

impl fmt::Display for GroupRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.spec.fmt(f)
    }
}

/// Group and labelled pieces shared by star, ω-power and coset nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct StarNode {
    pub group: GroupRef,
    /// `(g, e)`: the words of `e` are code words with `γ = g`. Several
    /// entries may share a label.
    pub pieces: Vec<(Elem, SdExpr)>,
}

impl StarNode {
    pub fn new(group: GroupRef, pieces: Vec<(Elem, SdExpr)>) -> StarNode {
        StarNode { group, pieces }
    }

    /// Union of the pieces labelled `g`, or `None`.
    pub fn piece(&self, g: Elem) -> Option<SdExpr> {
        let ps: Vec<SdExpr> = self
            .pieces
            .iter()
            .filter(|(h, _)| *h == g)
            .map(|(_, e)| e.clone())
            .collect();
        match ps.len() {
            0 => None,
            1 => ps.into_iter().next(),
            _ => Some(SdExpr::union(ps)),
        }
    }

    fn check_labels(&self) -> Result<()> {
        match self.pieces.iter().find(|(g, _)| *g >= self.group.order()) {
            Some((g, _)) => Err(Error::Expr(format!(
                "piece label {g} out of range for {} of order {}",
                self.group,
                self.group.order()
            ))),
            None => Ok(()),
        }
    }
}

#[derive(Debug, PartialEq)]
pub enum Node {
    Empty,
    Letter(Letter),
    Union(Vec<SdExpr>),
    Concat(SdExpr, SdExpr),
    /// `γ⁻¹(1)`.
    Star(StarNode),
    /// `γ⁻¹(1)^ω`.
    Omega(StarNode),
    /// `γ⁻¹(g)`.
    StarCoset(StarNode, Elem),
}

/// A shared, immutable expression node.
#[derive(Clone)]
pub struct SdExpr(Arc<Node>);

impl fmt::Debug for SdExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl PartialEq for SdExpr {
    fn eq(&self, other: &SdExpr) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl SdExpr {
    pub fn new(node: Node) -> SdExpr {
        SdExpr(Arc::new(node))
    }

    pub fn empty() -> SdExpr {
        SdExpr::new(Node::Empty)
    }

    pub fn letter(a: Letter) -> SdExpr {
        SdExpr::new(Node::Letter(a))
    }

    /// `{1}`, written as a star with no pieces.
    pub fn epsilon() -> SdExpr {
        SdExpr::new(Node::Star(StarNode::new(GroupRef::trivial(), Vec::new())))
    }

    pub fn union(parts: Vec<SdExpr>) -> SdExpr {
        SdExpr::new(Node::Union(parts))
    }

    pub fn concat(left: SdExpr, right: SdExpr) -> SdExpr {
        SdExpr::new(Node::Concat(left, right))
    }

    pub fn star(group: GroupRef, pieces: Vec<(Elem, SdExpr)>) -> SdExpr {
        SdExpr::new(Node::Star(StarNode::new(group, pieces)))
    }

    pub fn omega(group: GroupRef, pieces: Vec<(Elem, SdExpr)>) -> SdExpr {
        SdExpr::new(Node::Omega(StarNode::new(group, pieces)))
    }

    pub fn star_coset(group: GroupRef, pieces: Vec<(Elem, SdExpr)>, target: Elem) -> SdExpr {
        SdExpr::new(Node::StarCoset(StarNode::new(group, pieces), target))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    /// Identity of the shared node.
    pub fn id(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    pub fn is_empty_node(&self) -> bool {
        matches!(*self.0, Node::Empty)
    }

    /// Star without pieces.
    pub fn is_epsilon(&self) -> bool {
        matches!(&*self.0, Node::Star(s) if s.pieces.is_empty())
    }

    pub fn children(&self) -> Vec<SdExpr> {
        match &*self.0 {
            Node::Empty | Node::Letter(_) => Vec::new(),
            Node::Union(v) => v.clone(),
            Node::Concat(l, r) => vec![l.clone(), r.clone()],
            Node::Star(s) | Node::Omega(s) | Node::StarCoset(s, _) => {
                s.pieces.iter().map(|(_, e)| e.clone()).collect()
            }
        }
    }

    /// All distinct nodes, children before parents.
    pub fn nodes(&self) -> Vec<SdExpr> {
        SdExpr::nodes_of(std::slice::from_ref(self))
    }

    /// Distinct nodes below any of `roots`, children before parents.
    pub fn nodes_of(roots: &[SdExpr]) -> Vec<SdExpr> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        let mut stack: Vec<(SdExpr, bool)> = roots.iter().rev().map(|r| (r.clone(), false)).collect();
        while let Some((e, expanded)) = stack.pop() {
            if expanded {
                out.push(e);
                continue;
            }
            if !seen.insert(e.id()) {
                continue;
            }
            stack.push((e.clone(), true));
            for c in e.children().into_iter().rev() {
                if !seen.contains(&c.id()) {
                    stack.push((c, false));
                }
            }
        }
        out
    }

    /// Number of distinct nodes.
    pub fn dag_size(&self) -> usize {
        self.nodes().len()
    }

    /// Number of nodes when written out as a tree, saturating.
    pub fn tree_size(&self) -> u64 {
        let mut size: HashMap<usize, u64> = HashMap::new();
        for e in self.nodes() {
            let s = e
                .children()
                .iter()
                .fold(1u64, |acc, c| acc.saturating_add(size[&c.id()]));
            size.insert(e.id(), s);
        }
        size[&self.id()]
    }

    /// True iff no ω-power occurs.
    pub fn is_omega_free(&self) -> bool {
        self.nodes().iter().all(|e| !matches!(e.node(), Node::Omega(_)))
    }

    /// True iff no coset node occurs.
    pub fn is_coset_free(&self) -> bool {
        self.nodes().iter().all(|e| !matches!(e.node(), Node::StarCoset(..)))
    }

    /// Largest letter index used, if any.
    pub fn max_letter(&self) -> Option<Letter> {
        self.nodes()
            .iter()
            .filter_map(|e| match e.node() {
                Node::Letter(a) => Some(*a),
                _ => None,
            })
            .max()
    }

    /// Flattens nested unions, drops empty members and pieces, and removes
    /// `{1}` from concatenations. Preserves the denotation.
    pub fn simplify(&self) -> SdExpr {
        SdExpr::simplify_all(std::slice::from_ref(self)).remove(0)
    }

    /// [`SdExpr::simplify`] of several roots with shared results.
    pub fn simplify_all(roots: &[SdExpr]) -> Vec<SdExpr> {
        let mut memo: HashMap<usize, SdExpr> = HashMap::new();
        for e in SdExpr::nodes_of(roots) {
            let get = |c: &SdExpr| memo[&c.id()].clone();
            let out = match e.node() {
                Node::Empty | Node::Letter(_) => e.clone(),
                Node::Union(parts) => {
                    let mut flat: Vec<SdExpr> = Vec::new();
                    let mut seen = std::collections::HashSet::new();
                    for p in parts.iter().map(get) {
                        let members = match p.node() {
                            Node::Union(inner) => inner.clone(),
                            _ => vec![p.clone()],
                        };
                        for q in members {
                            if !q.is_empty_node() && seen.insert(q.id()) {
                                flat.push(q);
                            }
                        }
                    }
                    match flat.len() {
                        0 => SdExpr::empty(),
                        1 => flat.pop().expect("one member"),
                        _ => SdExpr::union(flat),
                    }
                }
                Node::Concat(l, r) => {
                    let (l, r) = (get(l), get(r));
                    if l.is_empty_node() || r.is_empty_node() {
                        SdExpr::empty()
                    } else if l.is_epsilon() {
                        r
                    } else if r.is_epsilon() {
                        l
                    } else {
                        SdExpr::concat(l, r)
                    }
                }
                Node::Star(s) | Node::Omega(s) | Node::StarCoset(s, _) => {
                    let pieces: Vec<(Elem, SdExpr)> = s
                        .pieces
                        .iter()
                        .map(|(g, p)| (*g, get(p)))
                        .filter(|(_, p)| !p.is_empty_node())
                        .collect();
                    match e.node() {
                        Node::Star(_) if pieces.is_empty() => SdExpr::epsilon(),
                        Node::Star(_) => SdExpr::star(s.group.clone(), pieces),
                        Node::Omega(_) if pieces.is_empty() => SdExpr::empty(),
                        Node::Omega(_) => SdExpr::omega(s.group.clone(), pieces),
                        Node::StarCoset(_, 0) if pieces.is_empty() => SdExpr::epsilon(),
                        Node::StarCoset(..) if pieces.is_empty() => SdExpr::empty(),
                        Node::StarCoset(_, g) => SdExpr::star_coset(s.group.clone(), pieces, *g),
                        _ => unreachable!(),
                    }
                }
            };
            memo.insert(e.id(), out);
        }
        roots.iter().map(|r| memo[&r.id()].clone()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplify_flattens_and_collapses() {
        let a = SdExpr::letter(0);
        let e = SdExpr::union(vec![
            SdExpr::empty(),
            SdExpr::union(vec![a.clone(), SdExpr::concat(SdExpr::epsilon(), a.clone())]),
        ]);
        assert_eq!(e.simplify(), a);
        assert!(SdExpr::concat(a.clone(), SdExpr::empty()).simplify().is_empty_node());
        assert!(SdExpr::omega(GroupRef::trivial(), vec![]).simplify().is_empty_node());
    }

    #[test]
    fn group_specs_parse() {
        assert_eq!(GroupRef::parse_cli("cyclic:2").unwrap().order(), 2);
        assert_eq!(GroupRef::parse_cli("sym3").unwrap().order(), 6);
        assert_eq!(GroupRef::parse_cli("sym:3").unwrap().spec(), &GroupSpec::Sym(3));
        assert_eq!(GroupRef::parse_cli("trivial").unwrap().order(), 1);
        assert!(GroupRef::parse_cli("cyclic:x").is_err());
        assert!(GroupRef::parse_cli("dihedral:4").is_err());
    }

    #[test]
    fn sharing_is_counted_once() {
        let a = SdExpr::letter(0);
        let u = SdExpr::union(vec![a.clone(), a.clone()]);
        let c = SdExpr::concat(u.clone(), u);
        assert_eq!(c.dag_size(), 3);
        assert_eq!(c.tree_size(), 7);
    }
}
