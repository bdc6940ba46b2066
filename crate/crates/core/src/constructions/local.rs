use super::table_from_fn;
use crate::monoid::{Elem, ElementSet, Monoid};

/// The local divisor `M_c = (cM ∩ Mc, ∘, c)` with `mc ∘ cn = mcn`.
#[derive(Debug, Clone)]
pub struct LocalDivisor {
    pub monoid: Monoid,
    /// `carrier_map[x]` is the element of `M` represented by `x`; `c` first.
    pub carrier_map: Vec<Elem>,
    /// `{x ∈ M | cx ∈ cM ∩ Mc}`, on which `x ↦ cx` is a surjective homomorphism.
    pub lambda_domain: ElementSet,
    pub c: Elem,
    index: Vec<Option<Elem>>,
}

impl LocalDivisor {
    /// Element of `M_c` representing `x ∈ cM ∩ Mc`.
    pub fn from_parent(&self, x: Elem) -> Option<Elem> {
        self.index[x]
    }

    pub fn to_parent(&self, x: Elem) -> Elem {
        self.carrier_map[x]
    }

    /// `λ_c(x) = cx` for `x` in the lambda domain.
    pub fn lambda(&self, m: &Monoid, x: Elem) -> Option<Elem> {
        self.index[m.mul(self.c, x)]
    }

    /// `ρ_c(x) = cxc`.
    pub fn rho(&self, m: &Monoid, x: Elem) -> Elem {
        self.index[m.product([self.c, x, self.c])].expect("cxc lies in cM ∩ Mc")
    }
}

pub fn local_divisor(m: &Monoid, c: Elem) -> LocalDivisor {
    let left: ElementSet = m.elements().map(|x| m.mul(c, x)).collect();
    let right: ElementSet = m.elements().map(|x| m.mul(x, c)).collect();
    let mut carrier = vec![c];
    carrier.extend(left.iter().filter(|&x| x != c && right.contains(x)));
    let mut index = vec![None; m.size()];
    for (i, &x) in carrier.iter().enumerate() {
        index[x] = Some(i);
    }
    // Least left factor `u` with `u·c = x`.
    let factor: Vec<Elem> = carrier
        .iter()
        .map(|&x| m.elements().find(|&u| m.mul(u, c) == x).expect("x ∈ Mc"))
        .collect();
    let monoid = table_from_fn(carrier.len(), |x, y| {
        index[m.mul(factor[x], carrier[y])].expect("closed")
    });
    let lambda_domain = m
        .elements()
        .filter(|&x| index[m.mul(c, x)].is_some())
        .collect();
    LocalDivisor {
        monoid,
        carrier_map: carrier,
        lambda_domain,
        c,
        index,
    }
}
