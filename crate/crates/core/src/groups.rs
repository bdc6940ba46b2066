//! Small finite groups: builtin tables, subgroup enumeration, homomorphism
//! search and the division test between groups.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::monoid::{verify_division, DivisionWitness, Elem, ElementSet, Group, Monoid};

/// Budget on generator-image assignments tried by [`surjective_hom`].
const HOM_SEARCH_BUDGET: usize = 2_000_000;

/// `Z/nZ` with element `i` standing for `i mod n`.
pub fn cyclic(n: usize) -> Monoid {
    assert!(n > 0);
    let mut table = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            table.push(((x + y) % n) as u32);
        }
    }
    Monoid::from_raw(n, table)
}

/// All permutations of `0..n` in lexicographic order of their image vectors.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        let n = used.len();
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// The symmetric group on `n` points. Elements are permutations in
/// lexicographic order (identity first); `x·y` applies `x` first, then `y`.
pub fn symmetric(n: usize) -> Monoid {
    assert!((1..=5).contains(&n), "symmetric groups are supported up to n = 5");
    let perms = permutations(n);
    let index = |p: &[usize]| perms.iter().position(|q| q == p).expect("permutation");
    let k = perms.len();
    let mut table = vec![0u32; k * k];
    for (i, x) in perms.iter().enumerate() {
        for (j, y) in perms.iter().enumerate() {
            let xy: Vec<usize> = (0..n).map(|p| y[x[p]]).collect();
            table[i * k + j] = index(&xy) as u32;
        }
    }
    Monoid::from_raw(k, table)
}

/// Element of `symmetric(n)` for the permutation with the given images.
pub fn permutation_index(images: &[usize]) -> Elem {
    permutations(images.len())
        .iter()
        .position(|q| q == images)
        .expect("valid permutation")
}

/// Sign of element `x` of `symmetric(n)`: `true` for odd permutations.
pub fn is_odd_permutation(n: usize, x: Elem) -> bool {
    let p = &permutations(n)[x];
    let mut inversions = 0;
    for i in 0..n {
        for j in i + 1..n {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 1
}

/// Order of `x` in a group table (smallest `k ≥ 1` with `x^k = 1`).
pub fn element_order(g: &Monoid, x: Elem) -> usize {
    let mut p = x;
    let mut k = 1;
    while p != 0 {
        p = g.mul(p, x);
        k += 1;
    }
    k
}

/// Every subgroup of a standalone group, found by joining cyclic subgroups,
/// sorted by order and then carrier.
pub fn subgroups(g: &Monoid) -> Vec<ElementSet> {
    let mut seen: HashSet<ElementSet> = HashSet::new();
    let trivial = g.submonoid_generated([]);
    let mut frontier = vec![trivial.clone()];
    seen.insert(trivial);
    while let Some(s) = frontier.pop() {
        for x in g.elements() {
            if s.contains(x) {
                continue;
            }
            let joined = g.submonoid_generated(s.iter().chain([x]));
            if seen.insert(joined.clone()) {
                frontier.push(joined);
            }
        }
    }
    let mut out: Vec<ElementSet> = seen.into_iter().collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Greedy generating set of a standalone monoid: drops elements from the
/// largest index down while the rest still generate everything.
pub fn generators(m: &Monoid) -> Vec<Elem> {
    let mut gens: Vec<Elem> = (1..m.size()).collect();
    for x in (1..m.size()).rev() {
        let rest: Vec<Elem> = gens.iter().copied().filter(|&g| g != x).collect();
        if m.submonoid_generated(rest.iter().copied()).len() == m.size() {
            gens = rest;
        }
    }
    gens
}

/// Extends generator images to a map on all of `source`, if that map is a
/// well-defined homomorphism.
fn extend_hom(source: &Monoid, gens: &[Elem], target: &Monoid, images: &[Elem]) -> Option<Vec<Elem>> {
    let mut map = vec![usize::MAX; source.size()];
    map[0] = 0;
    let mut queue = std::collections::VecDeque::from([0]);
    while let Some(x) = queue.pop_front() {
        for (g, &im) in gens.iter().zip(images) {
            let y = source.mul(x, *g);
            let v = target.mul(map[x], im);
            if map[y] == usize::MAX {
                map[y] = v;
                queue.push_back(y);
            } else if map[y] != v {
                return None;
            }
        }
    }
    for x in source.elements() {
        for y in source.elements() {
            if map[source.mul(x, y)] != target.mul(map[x], map[y]) {
                return None;
            }
        }
    }
    Some(map)
}

/// Outcome of a bounded search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Search<T> {
    Found(T),
    NotFound,
    Undecided(String),
}

fn search_homs(
    source: &Monoid,
    target: &Monoid,
    accept: impl Fn(&[Elem]) -> bool,
) -> Search<Vec<Elem>> {
    let gens = generators(source);
    let orders: Vec<usize> = gens.iter().map(|&g| element_order(source, g)).collect();
    let candidates: Vec<Vec<Elem>> = orders
        .iter()
        .map(|&k| {
            target
                .elements()
                .filter(|&t| k % element_order(target, t) == 0)
                .collect()
        })
        .collect();
    let total: usize = candidates.iter().map(Vec::len).product();
    if total > HOM_SEARCH_BUDGET {
        return Search::Undecided(format!(
            "{total} generator assignments exceed the search budget"
        ));
    }
    let mut idx = vec![0usize; gens.len()];
    if candidates.iter().any(Vec::is_empty) {
        return Search::NotFound;
    }
    loop {
        let images: Vec<Elem> = idx.iter().zip(&candidates).map(|(&i, c)| c[i]).collect();
        if let Some(map) = extend_hom(source, &gens, target, &images) {
            if accept(&map) {
                return Search::Found(map);
            }
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                return Search::NotFound;
            }
            idx[k] += 1;
            if idx[k] < candidates[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// A surjective homomorphism between standalone groups, if one exists.
pub fn surjective_hom(source: &Monoid, target: &Monoid) -> Search<Vec<Elem>> {
    if !source.size().is_multiple_of(target.size()) {
        return Search::NotFound;
    }
    search_homs(source, target, |map| {
        let mut hit = vec![false; target.size()];
        for &y in map {
            hit[y] = true;
        }
        hit.into_iter().all(|h| h)
    })
}

/// An injective homomorphism of a standalone group into a standalone group.
pub fn injective_hom(source: &Monoid, target: &Monoid) -> Search<Vec<Elem>> {
    if !target.size().is_multiple_of(source.size()) {
        return Search::NotFound;
    }
    search_homs(source, target, |map| {
        let set: HashSet<Elem> = map.iter().copied().collect();
        set.len() == map.len()
    })
}

pub fn isomorphic(a: &Monoid, b: &Monoid) -> Search<Vec<Elem>> {
    if a.size() != b.size() {
        return Search::NotFound;
    }
    injective_hom(a, b)
}

/// Result of [`group_divides`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DivisionOutcome {
    Divides(DivisionWitness),
    DoesNotDivide,
    Undecided(String),
}

impl DivisionOutcome {
    pub fn divides(&self) -> Option<bool> {
        match self {
            DivisionOutcome::Divides(_) => Some(true),
            DivisionOutcome::DoesNotDivide => Some(false),
            DivisionOutcome::Undecided(_) => None,
        }
    }
}

/// Decides whether `h` is a quotient of a subgroup of `g`, by enumerating the
/// subgroups of `g` and searching for a surjection onto `h`. The witness
/// refers to the standalone tables of `g` and `h`.
pub fn group_divides(h: &Group, g: &Group, cap: usize) -> DivisionOutcome {
    if g.order() > cap {
        return DivisionOutcome::Undecided(format!(
            "group of order {} exceeds the cap {cap}",
            g.order()
        ));
    }
    let (gm, _) = g.to_monoid();
    let (hm, _) = h.to_monoid();
    if gm.size() % hm.size() != 0 {
        return DivisionOutcome::DoesNotDivide;
    }
    let mut undecided = None;
    for s in subgroups(&gm) {
        if s.len() % hm.size() != 0 {
            continue;
        }
        let (sm, map) = gm.submonoid(&s).expect("subgroups are closed");
        match surjective_hom(&sm, &hm) {
            Search::Found(f) => {
                let mut pairs: Vec<(Elem, Elem)> =
                    map.iter().copied().zip(f.iter().copied()).collect();
                pairs.sort_unstable();
                let w = DivisionWitness {
                    sub_carrier: pairs.iter().map(|p| p.0).collect(),
                    surjection: pairs.iter().map(|p| p.1).collect(),
                };
                debug_assert!(verify_division(&hm, &gm, &w).is_ok());
                return DivisionOutcome::Divides(w);
            }
            Search::NotFound => {}
            Search::Undecided(why) => undecided = Some(why),
        }
    }
    match undecided {
        Some(why) => DivisionOutcome::Undecided(why),
        None => DivisionOutcome::DoesNotDivide,
    }
}

/// True iff the group embeds into some maximal subgroup of `m`.
pub fn embeds_into_monoid(g: &Monoid, m: &Monoid) -> Result<bool> {
    for h in m.maximal_subgroups() {
        if h.order() % g.size() != 0 {
            continue;
        }
        match injective_hom(g, &h.to_monoid().0) {
            Search::Found(_) => return Ok(true),
            Search::NotFound => {}
            Search::Undecided(why) => return Err(Error::Undecided(why)),
        }
    }
    Ok(false)
}

/// Display names for small groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupName {
    Trivial,
    Cyclic(usize),
    S3,
    Other { order: usize, abelian: bool, solvable: bool },
}

impl fmt::Display for GroupName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupName::Trivial => write!(f, "1"),
            GroupName::Cyclic(n) => write!(f, "Z/{n}Z"),
            GroupName::S3 => write!(f, "S3"),
            GroupName::Other {
                order,
                abelian,
                solvable,
            } => write!(
                f,
                "G{order}{}{}",
                if *abelian { "(abelian)" } else { "" },
                if *solvable { "(solvable)" } else { "" }
            ),
        }
    }
}

impl GroupName {
    pub fn is_trivial(&self) -> bool {
        matches!(self, GroupName::Trivial)
    }
}

/// Recognizes trivial, cyclic and `S3` at order at most 12.
pub fn name_group(g: &Group) -> GroupName {
    let (m, _) = g.to_monoid();
    let n = m.size();
    if n == 1 {
        return GroupName::Trivial;
    }
    if n <= 12 {
        if m.elements().any(|x| element_order(&m, x) == n) {
            return GroupName::Cyclic(n);
        }
        if n == 6 && !m.is_commutative() {
            return GroupName::S3;
        }
    }
    GroupName::Other {
        order: n,
        abelian: m.is_commutative(),
        solvable: crate::varieties::is_solvable(&Group::whole(m).expect("group")),
    }
}
