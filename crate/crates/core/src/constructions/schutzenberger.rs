use crate::error::Result;
use crate::monoid::{enumerate_monoid, Elem, ElementSet, Monoid, MonoidHom};

/// Monoid of the sets `[w] = {(φ(w₁), φ(w₂)) | w = w₁w₂}`, each stored with
/// `φ(w)`.
#[derive(Debug, Clone)]
pub struct PairSetProduct {
    pub monoid: Monoid,
    pub hom: MonoidHom,
    /// Sorted pair list and value of every element.
    pub keys: Vec<(Vec<(Elem, Elem)>, Elem)>,
}

impl PairSetProduct {
    /// Elements recognizing `φ⁻¹(P)·φ⁻¹(Q)`.
    pub fn concat_accepting(&self, p: &ElementSet, q: &ElementSet) -> ElementSet {
        (0..self.keys.len())
            .filter(|&x| {
                self.keys[x]
                    .0
                    .iter()
                    .any(|&(a, b)| p.contains(a) && q.contains(b))
            })
            .collect()
    }
}

pub fn schutzenberger_product(phi: &MonoidHom, size_cap: usize) -> Result<PairSetProduct> {
    let m = &phi.target;
    let one = m.identity();
    let en = enumerate_monoid(
        (vec![(one, one)], one),
        phi.alphabet_size(),
        |(pairs, x): &(Vec<(Elem, Elem)>, Elem), a| {
            let g = phi.letter_images[a];
            let y = m.mul(*x, g);
            let mut next: Vec<(Elem, Elem)> =
                pairs.iter().map(|&(p, q)| (p, m.mul(q, g))).collect();
            next.push((y, one));
            next.sort_unstable();
            next.dedup();
            (next, y)
        },
        size_cap,
    )?;
    Ok(PairSetProduct {
        hom: en.hom(),
        monoid: en.monoid,
        keys: en.keys,
    })
}
