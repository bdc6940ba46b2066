//! Decomposition of a finite monoid into a binary tree of local Rees products
//! whose leaves are groups.
//!
//! A non-group `M` with minimal generating set `Γ` is split at the least
//! non-unit generator `c`: `N = ⟨Γ ∖ {c}⟩` is a proper submonoid, the local
//! divisor `M_c` is strictly smaller than `M`, and `M` is a quotient of
//! `Rees(N, M_c, x ↦ cxc)`.

use std::fmt::Write as _;

use crate::constructions::{local_divisor, rees_divisor_lift, rees_extension, ReesElem};
use crate::error::Result;
use crate::groups::{name_group, GroupName};
use crate::monoid::{verify_division, DivisionWitness, Elem, ElementSet, Group, Monoid};

/// Rees products up to this size are materialized for verification; larger
/// ones are checked through the factored equations.
pub const MATERIALIZE_LIMIT: usize = 3000;

#[derive(Debug, Clone)]
pub struct DecompTree {
    pub monoid: Monoid,
    /// This node's monoid divides its parent's (identity at the root).
    pub into_parent: DivisionWitness,
    pub kind: DecompKind,
}

#[derive(Debug, Clone)]
pub enum DecompKind {
    Leaf,
    Node {
        c: Elem,
        n_carrier: ElementSet,
        /// Left child's elements inside this monoid.
        n_map: Vec<Elem>,
        /// Right child's elements (the local divisor) inside this monoid.
        local_map: Vec<Elem>,
        /// `ρ_c` on the left child.
        rho: Vec<Elem>,
        left: Box<DecompTree>,
        right: Box<DecompTree>,
    },
}

/// Generating set obtained by dropping elements from the largest index down
/// while the rest still generate `M`.
pub fn minimal_generating_set(m: &Monoid) -> ElementSet {
    let mut gens: Vec<Elem> = (1..m.size()).collect();
    for x in (1..m.size()).rev() {
        let rest: Vec<Elem> = gens.iter().copied().filter(|&g| g != x).collect();
        if m.submonoid_generated(rest.iter().copied()).len() == m.size() {
            gens = rest;
        }
    }
    gens.into_iter().collect()
}

pub fn decompose(m: &Monoid) -> DecompTree {
    build(m, DivisionWitness::identity(m))
}

fn build(m: &Monoid, into_parent: DivisionWitness) -> DecompTree {
    if m.is_group() {
        return DecompTree {
            monoid: m.clone(),
            into_parent,
            kind: DecompKind::Leaf,
        };
    }
    let gens = minimal_generating_set(m);
    let c = gens
        .iter()
        .find(|&g| !m.is_unit(g))
        .expect("a monoid generated by units is a group");
    let n_carrier = m.submonoid_generated(gens.iter().filter(|&g| g != c));
    let (n, n_map) = m.submonoid(&n_carrier).expect("generated submonoid");
    let local = local_divisor(m, c);
    let rho = n_map.iter().map(|&x| local.rho(m, x)).collect();
    let lambda = DivisionWitness {
        sub_carrier: local.lambda_domain.clone(),
        surjection: local
            .lambda_domain
            .iter()
            .map(|x| local.lambda(m, x).expect("in domain"))
            .collect(),
    };
    let left = build(&n, DivisionWitness::embedding(&n_map));
    let right = build(&local.monoid, lambda);
    DecompTree {
        monoid: m.clone(),
        into_parent,
        kind: DecompKind::Node {
            c,
            n_carrier,
            n_map,
            local_map: local.carrier_map.clone(),
            rho,
            left: Box::new(left),
            right: Box::new(right),
        },
    }
}

impl DecompTree {
    pub fn node_count(&self) -> usize {
        match &self.kind {
            DecompKind::Leaf => 1,
            DecompKind::Node { left, right, .. } => 1 + left.node_count() + right.node_count(),
        }
    }

    pub fn depth(&self) -> usize {
        match &self.kind {
            DecompKind::Leaf => 1,
            DecompKind::Node { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    /// Leaf monoids, left to right.
    pub fn leaves(&self) -> Vec<&Monoid> {
        match &self.kind {
            DecompKind::Leaf => vec![&self.monoid],
            DecompKind::Node { left, right, .. } => {
                let mut v = left.leaves();
                v.extend(right.leaves());
                v
            }
        }
    }

    pub fn leaf_names(&self) -> Vec<GroupName> {
        self.leaves()
            .into_iter()
            .map(|g| name_group(&Group::whole(g.clone()).expect("leaves are groups")))
            .collect()
    }

    /// Each leaf with a witness that it divides the root, left to right.
    pub fn leaf_witnesses(&self) -> Vec<(&Monoid, DivisionWitness)> {
        match &self.kind {
            DecompKind::Leaf => vec![(&self.monoid, DivisionWitness::identity(&self.monoid))],
            DecompKind::Node { left, right, .. } => {
                let mut out = Vec::new();
                for child in [left, right] {
                    for (g, w) in child.leaf_witnesses() {
                        let lifted = w.compose(&child.into_parent, &self.monoid);
                        out.push((g, lifted));
                    }
                }
                out
            }
        }
    }

    /// Graphviz rendering; leaves are labelled by group name.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph decomposition {\n  node [fontname=\"Helvetica\"];\n");
        let mut next = 0;
        self.dot_into(&mut s, &mut next);
        s.push_str("}\n");
        s
    }

    fn dot_into(&self, s: &mut String, next: &mut usize) -> usize {
        let id = *next;
        *next += 1;
        match &self.kind {
            DecompKind::Leaf => {
                let name = name_group(&Group::whole(self.monoid.clone()).expect("group leaf"));
                let _ = writeln!(s, "  n{id} [label=\"{name}\", shape=box];");
            }
            DecompKind::Node { c, left, right, .. } => {
                let _ = writeln!(
                    s,
                    "  n{id} [label=\"|M|={} c={c}\", shape=ellipse];",
                    self.monoid.size()
                );
                let l = left.dot_into(s, next);
                let r = right.dot_into(s, next);
                let _ = writeln!(s, "  n{id} -> n{l} [label=\"N\"];");
                let _ = writeln!(s, "  n{id} -> n{r} [label=\"M_c\"];");
            }
        }
        id
    }
}

/// Outcome of [`verify_tree`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeReport {
    pub ok: bool,
    pub failure: Option<String>,
    pub nodes: usize,
    pub leaves: usize,
    /// Rees surjections checked on a materialized table.
    pub materialized_checks: usize,
    /// Rees surjections checked through the factored equations.
    pub factored_checks: usize,
}

/// Checks every witness in the tree, that leaves are groups dividing the
/// root, and the node-count bound `2^|M| − 1`.
pub fn verify_tree(t: &DecompTree, m: &Monoid) -> TreeReport {
    verify_tree_with(t, m, MATERIALIZE_LIMIT)
}

/// [`verify_tree`] materializing Rees products of at most `materialize` elements.
pub fn verify_tree_with(t: &DecompTree, m: &Monoid, materialize: usize) -> TreeReport {
    let mut report = TreeReport {
        ok: true,
        failure: None,
        nodes: t.node_count(),
        leaves: 0,
        materialized_checks: 0,
        factored_checks: 0,
    };
    if let Err(msg) = check_node(t, &mut report, "root", materialize) {
        report.ok = false;
        report.failure = Some(msg);
        return report;
    }
    if t.monoid != *m {
        report.ok = false;
        report.failure = Some("tree root is a different monoid".into());
        return report;
    }
    for (i, (g, w)) in t.leaf_witnesses().into_iter().enumerate() {
        report.leaves += 1;
        if let Err(f) = verify_division(g, m, &w) {
            report.ok = false;
            report.failure = Some(format!("leaf {i} does not divide the root: {f}"));
            return report;
        }
    }
    if m.size() < 64 && report.nodes as u128 > (1u128 << m.size()) - 1 {
        report.ok = false;
        report.failure = Some(format!(
            "{} nodes exceed 2^{} - 1",
            report.nodes,
            m.size()
        ));
    }
    report
}

fn check_node(t: &DecompTree, report: &mut TreeReport, path: &str, materialize: usize) -> Result<(), String> {
    let m = &t.monoid;
    let DecompKind::Node {
        c,
        n_carrier,
        n_map,
        local_map,
        rho,
        left,
        right,
    } = &t.kind
    else {
        return if m.is_group() {
            Ok(())
        } else {
            Err(format!("{path}: leaf is not a group"))
        };
    };
    let (n, l) = (&left.monoid, &right.monoid);
    if m.is_unit(*c) {
        return Err(format!("{path}: c = {c} is a unit"));
    }
    if n.size() >= m.size() || l.size() >= m.size() {
        return Err(format!("{path}: children are not smaller"));
    }
    if n_map.iter().copied().collect::<ElementSet>() != *n_carrier {
        return Err(format!("{path}: N map disagrees with its carrier"));
    }
    for (child, name) in [(left, "N"), (right, "M_c")] {
        verify_division(&child.monoid, m, &child.into_parent)
            .map_err(|f| format!("{path}/{name}: {f}"))?;
    }
    let phi = |e: ReesElem| match e {
        ReesElem::Plain(a) => n_map[a],
        ReesElem::Triple(a, x, b) => m.product([n_map[a], local_map[x], n_map[b]]),
    };
    let rees_size = n.size() + n.size() * n.size() * l.size();
    if rees_size <= materialize {
        let rees = rees_extension(n, l, rho, materialize).map_err(|e| format!("{path}: {e}"))?;
        let w = DivisionWitness {
            sub_carrier: rees.monoid.elements().collect(),
            surjection: rees.monoid.elements().map(|x| phi(rees.tag(x))).collect(),
        };
        verify_division(m, &rees.monoid, &w).map_err(|f| format!("{path}: Rees surjection: {f}"))?;
        report.materialized_checks += 1;
    } else {
        // With M associative, the homomorphism law for n ↦ n,
        // (u, x, v) ↦ uxv reduces to the sandwich equation on M_c.
        for x in l.elements() {
            for y in n.elements() {
                let sandwich = m.mul(local_map[x], n_map[y]);
                for z in l.elements() {
                    let lhs = local_map[l.product([x, rho[y], z])];
                    let rhs = m.mul(sandwich, local_map[z]);
                    if lhs != rhs {
                        return Err(format!(
                            "{path}: Rees surjection: x={x} y={y} z={z} gives {lhs} but {rhs}"
                        ));
                    }
                }
            }
        }
        if l.size() != 0 && local_map[0] != *c {
            return Err(format!("{path}: local divisor is not neutral at c"));
        }
        let mut hit = vec![false; m.size()];
        for &a in n_map {
            hit[a] = true;
        }
        for &a in n_map {
            for &x in local_map {
                let ax = m.mul(a, x);
                for &b in n_map {
                    hit[m.mul(ax, b)] = true;
                }
            }
        }
        if let Some(miss) = hit.iter().position(|h| !h) {
            return Err(format!("{path}: Rees surjection misses {miss}"));
        }
        report.factored_checks += 1;
    }
    check_node(left, report, &format!("{path}/N"), materialize)?;
    check_node(right, report, &format!("{path}/M_c"), materialize)
}

/// Replaces every node by an explicit Rees extension of its flattened
/// children, returning the final monoid `R` with `M ≼ R`.
pub fn flatten_to_rees(t: &DecompTree, cap: usize) -> Result<(Monoid, DivisionWitness)> {
    match &t.kind {
        DecompKind::Leaf => Ok((t.monoid.clone(), DivisionWitness::identity(&t.monoid))),
        DecompKind::Node {
            n_map,
            local_map,
            rho,
            left,
            right,
            ..
        } => {
            let (rn, wn) = flatten_to_rees(left, cap)?;
            let (rl, wl) = flatten_to_rees(right, cap)?;
            let (n, l) = (&left.monoid, &right.monoid);
            let lift = rees_divisor_lift(n, &rn, &wn, l, &rl, &wl, rho, cap)?;
            let inner = rees_extension(n, l, rho, cap)?;
            let m = &t.monoid;
            let to_m = DivisionWitness {
                sub_carrier: inner.monoid.elements().collect(),
                surjection: inner
                    .monoid
                    .elements()
                    .map(|x| match inner.tag(x) {
                        ReesElem::Plain(a) => n_map[a],
                        ReesElem::Triple(a, y, b) => m.product([n_map[a], local_map[y], n_map[b]]),
                    })
                    .collect(),
            };
            let w = to_m.compose(&lift.witness, &lift.rees.monoid);
            Ok((lift.rees.monoid, w))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{cyclic, symmetric};

    fn flip_flop() -> Monoid {
        Monoid::from_rows(&[vec![0, 1, 2], vec![1, 1, 2], vec![2, 1, 2]]).unwrap()
    }

    #[test]
    fn groups_are_leaves() {
        for g in [Monoid::trivial(), cyclic(5), symmetric(3)] {
            let t = decompose(&g);
            assert_eq!(t.node_count(), 1);
            assert!(verify_tree(&t, &g).ok);
        }
    }

    #[test]
    fn z6_generated_by_one() {
        assert_eq!(minimal_generating_set(&cyclic(6)).as_slice(), &[1]);
        assert!(minimal_generating_set(&Monoid::trivial()).is_empty());
    }

    #[test]
    fn flip_flop_decomposes_within_bound() {
        let m = flip_flop();
        let t = decompose(&m);
        let r = verify_tree(&t, &m);
        assert!(r.ok, "{:?}", r.failure);
        assert!(r.nodes <= 7);
        assert!(t.leaf_names().iter().all(GroupName::is_trivial));
    }

    #[test]
    fn tampered_witness_is_reported() {
        let m = flip_flop();
        let mut t = decompose(&m);
        if let DecompKind::Node { local_map, .. } = &mut t.kind {
            local_map[0] = 0;
        }
        let r = verify_tree(&t, &m);
        assert!(!r.ok);
        let msg = r.failure.unwrap();
        assert!(msg.contains("Rees surjection"), "{msg}");
    }

    #[test]
    fn factored_check_agrees_and_catches_tampering() {
        let m = flip_flop();
        let mut t = decompose(&m);
        let r = verify_tree_with(&t, &m, 0);
        assert!(r.ok && r.materialized_checks == 0 && r.factored_checks > 0);
        if let DecompKind::Node { local_map, .. } = &mut t.kind {
            local_map[0] = 0;
        }
        assert!(!verify_tree_with(&t, &m, 0).ok);
    }

    #[test]
    fn flattening_the_flip_flop_verifies() {
        let m = flip_flop();
        let t = decompose(&m);
        let (r, w) = flatten_to_rees(&t, 100_000).unwrap();
        verify_division(&m, &r, &w).unwrap();
    }

    #[test]
    fn dot_for_trivial_leaf() {
        let dot = decompose(&Monoid::trivial()).to_dot();
        assert!(dot.contains("label=\"1\""));
        assert_eq!(dot.matches("->").count(), 0);
    }
}
