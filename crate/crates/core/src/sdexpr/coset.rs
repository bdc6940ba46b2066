use std::collections::HashMap;

use super::{GroupRef, Node, SdExpr, StarNode};
use crate::error::{Error, Result};
use crate::monoid::Elem;

/// Union that drops empty members and collapses a single member.
pub(crate) fn union_of(mut terms: Vec<SdExpr>) -> SdExpr {
    terms.retain(|t| !t.is_empty_node());
    match terms.len() {
        0 => SdExpr::empty(),
        1 => terms.pop().expect("one term"),
        _ => SdExpr::union(terms),
    }
}

/// Rebuilds `e` over already rewritten children, reusing `e` when nothing
/// changed.
fn rebuild(e: &SdExpr, memo: &HashMap<usize, SdExpr>) -> SdExpr {
    let get = |c: &SdExpr| memo[&c.id()].clone();
    let same = e.children().iter().all(|c| memo[&c.id()].id() == c.id());
    if same {
        return e.clone();
    }
    let node = |s: &StarNode| StarNode::new(s.group.clone(), s.pieces.iter().map(|(g, p)| (*g, get(p))).collect());
    match e.node() {
        Node::Empty | Node::Letter(_) => e.clone(),
        Node::Union(parts) => SdExpr::union(parts.iter().map(get).collect()),
        Node::Concat(l, r) => SdExpr::concat(get(l), get(r)),
        Node::Star(s) => SdExpr::new(Node::Star(node(s))),
        Node::Omega(s) => SdExpr::new(Node::Omega(node(s))),
        Node::StarCoset(s, g) => SdExpr::new(Node::StarCoset(node(s), *g)),
    }
}

/// Bottom-up rewrite of several roots with one memo; `f` sees each node with
/// rewritten children and may replace it.
fn rewrite_all(
    roots: &[SdExpr],
    mut f: impl FnMut(&SdExpr) -> Result<Option<SdExpr>>,
) -> Result<Vec<SdExpr>> {
    let mut memo: HashMap<usize, SdExpr> = HashMap::new();
    for x in SdExpr::nodes_of(roots) {
        let rebuilt = rebuild(&x, &memo);
        let out = f(&rebuilt)?.unwrap_or(rebuilt);
        memo.insert(x.id(), out);
    }
    Ok(roots.iter().map(|r| memo[&r.id()].clone()).collect())
}

fn rewrite(e: &SdExpr, f: impl FnMut(&SdExpr) -> Result<Option<SdExpr>>) -> Result<SdExpr> {
    Ok(rewrite_all(std::slice::from_ref(e), f)?.remove(0))
}

struct Cosets {
    node: StarNode,
    inverse: Vec<Elem>,
    star: SdExpr,
    pieces: Vec<Option<SdExpr>>,
    full: u64,
    memo: HashMap<(Elem, u64), SdExpr>,
}

impl Cosets {
    fn mul(&self, x: Elem, y: Elem) -> Elem {
        self.node.group.table().mul(x, y)
    }

    /// `E(g, S) = [g = 1]·{1} ∪ ⋃_{h ∈ S} K_h · γ⁻¹(1) · E(h⁻¹g, h⁻¹(S ∖ {h}))`,
    /// a subset of `γ⁻¹(g)` and all of it when `S = G`. `E(1, G)` is the star
    /// itself. The middle star is unrestricted, so these products can be
    /// ambiguous.
    fn e(&mut self, g: Elem, s: u64) -> SdExpr {
        if g == 0 && s == self.full {
            return self.star.clone();
        }
        if let Some(x) = self.memo.get(&(g, s)) {
            return x.clone();
        }
        let mut terms = Vec::new();
        if g == 0 {
            terms.push(SdExpr::epsilon());
        }
        for g1 in 0..self.pieces.len() {
            if s >> g1 & 1 == 0 {
                continue;
            }
            let Some(p) = self.pieces[g1].clone() else {
                continue;
            };
            let inv = self.inverse[g1];
            let rest = (0..self.pieces.len())
                .filter(|&x| x != g1 && s >> x & 1 == 1)
                .fold(0u64, |acc, x| acc | 1 << self.mul(inv, x));
            let sub = self.e(self.mul(inv, g), rest);
            if !sub.is_empty_node() {
                terms.push(SdExpr::concat(p, SdExpr::concat(self.star.clone(), sub)));
            }
        }
        let out = union_of(terms);
        self.memo.insert((g, s), out.clone());
        out
    }
}

fn coset_builder(node: &StarNode) -> Result<Cosets> {
    node.check_labels()?;
    let n = node.group.order();
    if n > 63 {
        return Err(Error::SizeCap { requested: n, cap: 63 });
    }
    Ok(Cosets {
        node: node.clone(),
        inverse: (0..n).map(|x| node.group.inverse(x)).collect(),
        star: SdExpr::new(Node::Star(node.clone())),
        pieces: (0..n).map(|g| node.piece(g)).collect(),
        full: (1u64 << n) - 1,
        memo: HashMap::new(),
    })
}

/// An expression for `γ⁻¹(target)` using only the star over the same pieces.
pub fn coset_expr(node: &StarNode, target: Elem) -> Result<SdExpr> {
    let mut b = coset_builder(node)?;
    if target >= node.group.order() {
        return Err(Error::Expr(format!("target {target} out of range for {}", node.group)));
    }
    let full = b.full;
    Ok(b.e(target, full))
}

/// Replaces every coset node by [`coset_expr`].
pub fn eliminate_cosets(e: &SdExpr) -> Result<SdExpr> {
    Ok(eliminate_cosets_all(std::slice::from_ref(e))?.remove(0))
}

/// Coset nodes over the same pieces share one star node.
pub(crate) fn eliminate_cosets_all(roots: &[SdExpr]) -> Result<Vec<SdExpr>> {
    let mut builders: HashMap<(String, Vec<(Elem, usize)>), Cosets> = HashMap::new();
    rewrite_all(roots, |x| match x.node() {
        Node::StarCoset(s, g) => {
            if *g >= s.group.order() {
                return Err(Error::Expr(format!("target {g} out of range for {}", s.group)));
            }
            let key = (
                s.group.to_string(),
                s.pieces.iter().map(|(l, p)| (*l, p.id())).collect(),
            );
            let b = match builders.entry(key) {
                std::collections::hash_map::Entry::Occupied(o) => o.into_mut(),
                std::collections::hash_map::Entry::Vacant(v) => v.insert(coset_builder(s)?),
            };
            let full = b.full;
            Ok(Some(b.e(*g, full)))
        }
        _ => Ok(None),
    })
}

/// Replaces each letter `t` by `expansion[t]`; stars and ω-powers keep their
/// labels.
pub fn sigma_preimage(e: &SdExpr, expansion: &[SdExpr]) -> Result<SdExpr> {
    Ok(sigma_preimage_all(std::slice::from_ref(e), expansion)?.remove(0))
}

pub(crate) fn sigma_preimage_all(roots: &[SdExpr], expansion: &[SdExpr]) -> Result<Vec<SdExpr>> {
    rewrite_all(roots, |x| match x.node() {
        Node::Letter(t) => expansion
            .get(*t)
            .cloned()
            .map(Some)
            .ok_or_else(|| Error::Expr(format!("no expansion for letter {t}"))),
        _ => Ok(None),
    })
}

/// Rewrites every star, ω-power and coset node over `h` as an expression over
/// `g`, given a surjective homomorphism `pi: g → h`.
pub fn lift_group(e: &SdExpr, h: &GroupRef, g: &GroupRef, pi: &[Elem]) -> Result<SdExpr> {
    let (gt, ht) = (g.table(), h.table());
    let not_surjective = || Error::Precondition(format!("the map {g} → {h} is not a surjective homomorphism"));
    if pi.len() != g.order() || pi.iter().any(|&y| y >= h.order()) {
        return Err(not_surjective());
    }
    for x in gt.elements() {
        for y in gt.elements() {
            if pi[gt.mul(x, y)] != ht.mul(pi[x], pi[y]) {
                return Err(not_surjective());
            }
        }
    }
    let section: Vec<Elem> = ht
        .elements()
        .map(|t| pi.iter().position(|&y| y == t))
        .collect::<Option<_>>()
        .ok_or_else(not_surjective)?;
    let fibre = |t: Elem| -> Vec<Elem> { gt.elements().filter(|&x| pi[x] == t).collect() };
    rewrite(e, |x| {
        let (s, t) = match x.node() {
            Node::Star(s) | Node::Omega(s) if &s.group == h => (s, 0),
            Node::StarCoset(s, t) if &s.group == h => (s, *t),
            _ => return Ok(None),
        };
        let lifted = StarNode::new(g.clone(), s.pieces.iter().map(|(l, p)| (section[*l], p.clone())).collect());
        let mut b = coset_builder(&lifted)?;
        let full = b.full;
        let out = match x.node() {
            Node::Omega(_) => {
                let omega = SdExpr::new(Node::Omega(lifted.clone()));
                let mut terms = vec![omega.clone()];
                for k in fibre(0).into_iter().filter(|&k| k != 0) {
                    let prefix = b.e(k, full);
                    if !prefix.is_empty_node() {
                        terms.push(SdExpr::concat(prefix, omega.clone()));
                    }
                }
                union_of(terms)
            }
            _ => union_of(fibre(t).into_iter().map(|k| b.e(k, full)).collect()),
        };
        Ok(Some(out))
    })
}
