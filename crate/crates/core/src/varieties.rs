//! Group varieties and membership of monoids in `H̄`, the class of monoids
//! whose subgroups all lie in `H`.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::monoid::{Elem, ElementSet, Group, Monoid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarietySpec {
    Trivial,
    Abelian,
    Solvable,
    /// Solvable groups whose order divides a power of `q`.
    SolvableQ(u64),
    AllGroups,
}

impl fmt::Display for VarietySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarietySpec::Trivial => write!(f, "trivial"),
            VarietySpec::Abelian => write!(f, "abelian"),
            VarietySpec::Solvable => write!(f, "solvable"),
            VarietySpec::SolvableQ(q) => write!(f, "solvable-q={q}"),
            VarietySpec::AllGroups => write!(f, "all"),
        }
    }
}

impl FromStr for VarietySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "trivial" => Ok(VarietySpec::Trivial),
            "abelian" => Ok(VarietySpec::Abelian),
            "solvable" => Ok(VarietySpec::Solvable),
            "all" => Ok(VarietySpec::AllGroups),
            _ => {
                let q = s
                    .strip_prefix("solvable-q=")
                    .and_then(|q| q.parse::<u64>().ok())
                    .ok_or_else(|| Error::Precondition(format!("unknown variety `{s}`")))?;
                if q < 2 {
                    return Err(Error::Precondition("solvable-q needs q >= 2".into()));
                }
                Ok(VarietySpec::SolvableQ(q))
            }
        }
    }
}

impl VarietySpec {
    /// Varieties exercised by tests and reports, smallest first.
    pub fn standard() -> [VarietySpec; 4] {
        [
            VarietySpec::Trivial,
            VarietySpec::Abelian,
            VarietySpec::Solvable,
            VarietySpec::AllGroups,
        ]
    }
}

/// Subgroup generated by all commutators `x y x⁻¹ y⁻¹`.
pub fn derived_subgroup(g: &Group) -> Group {
    let m = g.parent();
    let mut commutators = Vec::new();
    for x in g.carrier().iter() {
        let xi = g.inverse(x);
        for y in g.carrier().iter() {
            let yi = g.inverse(y);
            commutators.push(m.product([x, y, xi, yi]));
        }
    }
    let carrier = closure_from(m, g.unit(), &commutators);
    Group::new(m.clone(), carrier, g.unit()).expect("derived subgroup is a subgroup")
}

/// Closure of `{unit} ∪ gens` under multiplication.
fn closure_from(m: &Monoid, unit: Elem, gens: &[Elem]) -> ElementSet {
    let mut set: ElementSet = std::iter::once(unit).collect();
    let mut frontier = vec![unit];
    while let Some(x) = frontier.pop() {
        for &g in gens {
            let y = m.mul(x, g);
            if set.insert(y) {
                frontier.push(y);
            }
        }
    }
    set
}

/// Derived series `G ⊇ G' ⊇ G'' ⊇ ...` until it stabilizes.
pub fn derived_series(g: &Group) -> Vec<Group> {
    let mut series = vec![g.clone()];
    loop {
        let last = series.last().expect("non-empty");
        let next = derived_subgroup(last);
        if next.order() == last.order() {
            return series;
        }
        series.push(next);
    }
}

pub fn is_solvable(g: &Group) -> bool {
    derived_series(g).last().expect("non-empty").order() == 1
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn group_in_variety(g: &Group, v: VarietySpec) -> bool {
    match v {
        VarietySpec::Trivial => g.order() == 1,
        VarietySpec::Abelian => g.is_abelian(),
        VarietySpec::Solvable => is_solvable(g),
        VarietySpec::SolvableQ(q) => {
            is_solvable(g) && prime_factors(g.order() as u64).iter().all(|p| q % p == 0)
        }
        VarietySpec::AllGroups => true,
    }
}

/// Membership verdict of one maximal subgroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupVerdict {
    pub idempotent: Elem,
    pub order: usize,
    pub in_variety: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HbarReport {
    pub variety: VarietySpec,
    pub verdict: bool,
    pub subgroups: Vec<SubgroupVerdict>,
}

/// Every subgroup of a finite monoid lies in a maximal subgroup, so checking
/// the maximal ones decides membership in `H̄`.
pub fn monoid_in_hbar(m: &Monoid, v: VarietySpec) -> HbarReport {
    let subgroups: Vec<SubgroupVerdict> = m
        .maximal_subgroups()
        .iter()
        .map(|g| SubgroupVerdict {
            idempotent: g.unit(),
            order: g.order(),
            in_variety: group_in_variety(g, v),
        })
        .collect();
    HbarReport {
        variety: v,
        verdict: subgroups.iter().all(|s| s.in_variety),
        subgroups,
    }
}
