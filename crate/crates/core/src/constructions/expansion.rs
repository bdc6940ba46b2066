use super::table_from_fn;
use crate::error::{Error, Result};
use crate::monoid::{enumerate_monoid, Elem, ElementSet, Monoid, MonoidHom};

/// The expansion of `M` by sets of visited values: pairs `(X, m)` with
/// `1, m ∈ X ⊆ M` and `(X, m)·(Y, n) = (X ∪ mY, mn)`.
#[derive(Debug, Clone)]
pub struct Expansion {
    pub monoid: Monoid,
    /// `(X, m)` for every element.
    pub keys: Vec<(ElementSet, Elem)>,
    /// `a ↦ ({1, φ(a)}, φ(a))` in reachable mode.
    pub hom: Option<MonoidHom>,
}

impl Expansion {
    /// The projection `(X, m) ↦ m`.
    pub fn value(&self, x: Elem) -> Elem {
        self.keys[x].1
    }
}

/// Every pair `(X, m)`; needs `|M| ≤ full_cap`.
pub fn birget_rhodes_full(m: &Monoid, full_cap: usize, size_cap: usize) -> Result<Expansion> {
    let n = m.size();
    if n > full_cap.min(63) {
        return Err(Error::SizeCap {
            requested: n,
            cap: full_cap.min(63),
        });
    }
    let count: usize = (0..n).map(|x| 1usize << (n - if x == 0 { 1 } else { 2 })).sum();
    if count > size_cap {
        return Err(Error::SizeCap {
            requested: count,
            cap: size_cap,
        });
    }
    let mut keys: Vec<(u64, Elem)> = Vec::with_capacity(count);
    for mask in (1u64..1 << n).filter(|x| x & 1 == 1) {
        for x in 0..n {
            if mask >> x & 1 == 1 {
                keys.push((mask, x));
            }
        }
    }
    let index: std::collections::HashMap<(u64, Elem), usize> =
        keys.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    let shift = |x: Elem, mask: u64| -> u64 {
        (0..n)
            .filter(|&y| mask >> y & 1 == 1)
            .fold(0u64, |acc, y| acc | 1 << m.mul(x, y))
    };
    let monoid = table_from_fn(keys.len(), |i, j| {
        let (xm, x) = keys[i];
        let (ym, y) = keys[j];
        index[&(xm | shift(x, ym), m.mul(x, y))]
    });
    let keys = keys
        .into_iter()
        .map(|(mask, x)| ((0..n).filter(|&y| mask >> y & 1 == 1).collect(), x))
        .collect();
    Ok(Expansion {
        monoid,
        keys,
        hom: None,
    })
}

/// The submonoid generated by `({1, φ(a)}, φ(a))`, with that homomorphism.
pub fn birget_rhodes_reachable(phi: &MonoidHom, size_cap: usize) -> Result<Expansion> {
    let m = &phi.target;
    let words = m.size().div_ceil(64);
    let mut start = vec![0u64; words];
    start[0] = 1;
    let en = enumerate_monoid(
        (start, m.identity()),
        phi.alphabet_size(),
        |(set, x): &(Vec<u64>, Elem), a| {
            let y = m.mul(*x, phi.letter_images[a]);
            let mut set = set.clone();
            set[y / 64] |= 1 << (y % 64);
            (set, y)
        },
        size_cap,
    )?;
    let hom = en.hom();
    let keys = en
        .keys
        .iter()
        .map(|(set, x)| {
            let s: ElementSet = m
                .elements()
                .filter(|&y| set[y / 64] >> (y % 64) & 1 == 1)
                .collect();
            (s, *x)
        })
        .collect();
    Ok(Expansion {
        monoid: en.monoid,
        keys,
        hom: Some(hom),
    })
}
