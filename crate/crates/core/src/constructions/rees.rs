use super::local::{local_divisor, LocalDivisor};
use super::table_from_fn;
use crate::error::{Error, Result};
use crate::monoid::{verify_division, DivisionWitness, Elem, ElementSet, Monoid};

/// An element of `Rees(N, L, ρ) = N ∪ N × L × N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReesElem {
    Plain(Elem),
    Triple(Elem, Elem, Elem),
}

/// The Rees extension with its tagging.
///
/// Elements of `N` come first; the triple `(n₁, l, n₂)` has index
/// `|N| + (n₁·|L| + l)·|N| + n₂`.
#[derive(Debug, Clone)]
pub struct ReesResult {
    pub monoid: Monoid,
    pub n: Monoid,
    pub l: Monoid,
    pub rho: Vec<Elem>,
}

fn encode(nn: usize, nl: usize, e: ReesElem) -> Elem {
    match e {
        ReesElem::Plain(x) => x,
        ReesElem::Triple(a, l, b) => nn + (a * nl + l) * nn + b,
    }
}

fn decode(nn: usize, nl: usize, x: Elem) -> ReesElem {
    if x < nn {
        ReesElem::Plain(x)
    } else {
        let t = x - nn;
        ReesElem::Triple(t / (nl * nn), (t / nn) % nl, t % nn)
    }
}

impl ReesResult {
    pub fn tag(&self, x: Elem) -> ReesElem {
        decode(self.n.size(), self.l.size(), x)
    }

    pub fn index(&self, e: ReesElem) -> Elem {
        encode(self.n.size(), self.l.size(), e)
    }
}

/// `Rees(N, L, ρ)` with `n·(n₁, l, n₂) = (nn₁, l, n₂)`, the mirrored rule on
/// the right, and `(n₁, l, n₂)·(n₁', l', n₂') = (n₁, l·ρ(n₂n₁')·l', n₂')`.
pub fn rees_extension(n: &Monoid, l: &Monoid, rho: &[Elem], cap: usize) -> Result<ReesResult> {
    let (nn, nl) = (n.size(), l.size());
    if rho.len() != nn {
        return Err(Error::Precondition(format!(
            "ρ has {} values for a monoid of size {nn}",
            rho.len()
        )));
    }
    if let Some(&bad) = rho.iter().find(|&&x| x >= nl) {
        return Err(Error::IndexOutOfRange { index: bad, size: nl });
    }
    let size = nn
        .checked_mul(nn)
        .and_then(|s| s.checked_mul(nl))
        .and_then(|s| s.checked_add(nn))
        .unwrap_or(usize::MAX);
    if size > cap {
        return Err(Error::SizeCap { requested: size, cap });
    }
    let monoid = table_from_fn(size, |x, y| {
        use ReesElem::*;
        let r = match (decode(nn, nl, x), decode(nn, nl, y)) {
            (Plain(a), Plain(b)) => Plain(n.mul(a, b)),
            (Plain(a), Triple(b, m, c)) => Triple(n.mul(a, b), m, c),
            (Triple(a, m, b), Plain(c)) => Triple(a, m, n.mul(b, c)),
            (Triple(a, m, b), Triple(c, m2, d)) => {
                Triple(a, l.product([m, rho[n.mul(b, c)], m2]), d)
            }
        };
        encode(nn, nl, r)
    });
    Ok(ReesResult {
        monoid,
        n: n.clone(),
        l: l.clone(),
        rho: rho.to_vec(),
    })
}

/// A local Rees product `Rees(N, M_c, ρ_c)` with `ρ_c(x) = cxc`, together with
/// the surjection `n ↦ n`, `(u, x, v) ↦ uxv` onto `M`.
#[derive(Debug, Clone)]
pub struct LocalRees {
    pub n: Monoid,
    /// Elements of `N` as elements of `M`.
    pub n_map: Vec<Elem>,
    pub local: LocalDivisor,
    pub rees: ReesResult,
    /// `M ≼ Rees(N, M_c, ρ_c)`.
    pub witness: DivisionWitness,
}

pub fn local_rees(m: &Monoid, n_carrier: &ElementSet, c: Elem, cap: usize) -> Result<LocalRees> {
    if c >= m.size() {
        return Err(Error::IndexOutOfRange { index: c, size: m.size() });
    }
    if m.is_unit(c) {
        return Err(Error::Precondition(format!("c = {c} is a unit")));
    }
    if !n_carrier.contains(m.identity()) || !m.is_closed(n_carrier) {
        return Err(Error::Precondition("N is not a submonoid".into()));
    }
    let generated = m.submonoid_generated(n_carrier.iter().chain([c]));
    if generated.len() != m.size() {
        return Err(Error::Precondition(format!(
            "N and c generate only {} of {} elements",
            generated.len(),
            m.size()
        )));
    }
    let (n, n_map) = m.submonoid(n_carrier)?;
    let local = local_divisor(m, c);
    let rho: Vec<Elem> = n_map.iter().map(|&x| local.rho(m, x)).collect();
    let rees = rees_extension(&n, &local.monoid, &rho, cap)?;
    let surjection = (0..rees.monoid.size())
        .map(|x| match rees.tag(x) {
            ReesElem::Plain(a) => n_map[a],
            ReesElem::Triple(a, l, b) => m.product([n_map[a], local.to_parent(l), n_map[b]]),
        })
        .collect();
    let witness = DivisionWitness {
        sub_carrier: rees.monoid.elements().collect(),
        surjection,
    };
    if let Err(f) = verify_division(m, &rees.monoid, &witness) {
        return Err(Error::Precondition(format!("surjection onto M fails: {f}")));
    }
    Ok(LocalRees {
        n,
        n_map,
        local,
        rees,
        witness,
    })
}

/// `Rees(N, L, ρ) ≼ Rees(N', L', ρ')` lifted from `N ≼ N'` and `L ≼ L'`.
#[derive(Debug, Clone)]
pub struct LiftedRees {
    pub rho: Vec<Elem>,
    pub rees: ReesResult,
    pub witness: DivisionWitness,
}

/// Lifts divisions of the factors to a division of Rees extensions.
///
/// With `S_N ⊆ N'` and `S_L ⊆ L'` the witness carriers, `ρ'(n)` for
/// `n ∈ S_N` is the least element of `S_L` over `ρ(φ_N(n))`, and the identity
/// of `L'` elsewhere. The carrier is `S_N ∪ S_N × S_L × S_N`.
#[allow(clippy::too_many_arguments)]
pub fn rees_divisor_lift(
    n: &Monoid,
    n2: &Monoid,
    w_n: &DivisionWitness,
    l: &Monoid,
    l2: &Monoid,
    w_l: &DivisionWitness,
    rho: &[Elem],
    cap: usize,
) -> Result<LiftedRees> {
    verify_division(n, n2, w_n)
        .map_err(|f| Error::Precondition(format!("witness for N: {f}")))?;
    verify_division(l, l2, w_l)
        .map_err(|f| Error::Precondition(format!("witness for L: {f}")))?;
    if rho.len() != n.size() {
        return Err(Error::Precondition("ρ must be total on N".into()));
    }
    let rho2: Vec<Elem> = n2
        .elements()
        .map(|x| match w_n.image(x) {
            Some(y) => {
                let want = rho[y];
                w_l.sub_carrier
                    .iter()
                    .zip(&w_l.surjection)
                    .find(|&(_, &img)| img == want)
                    .map(|(z, _)| z)
                    .expect("witness is surjective")
            }
            None => l2.identity(),
        })
        .collect();
    let big = rees_extension(n2, l2, &rho2, cap)?;
    let (sn, sl) = (&w_n.sub_carrier, &w_l.sub_carrier);
    let mut pairs: Vec<(Elem, Elem)> = Vec::new();
    for (i, a) in sn.iter().enumerate() {
        pairs.push((a, w_n.surjection[i]));
    }
    for (i, a) in sn.iter().enumerate() {
        for (j, m) in sl.iter().enumerate() {
            for (k, b) in sn.iter().enumerate() {
                let x = big.index(ReesElem::Triple(a, m, b));
                let y = encode(
                    n.size(),
                    l.size(),
                    ReesElem::Triple(w_n.surjection[i], w_l.surjection[j], w_n.surjection[k]),
                );
                pairs.push((x, y));
            }
        }
    }
    pairs.sort_unstable();
    let witness = DivisionWitness {
        sub_carrier: pairs.iter().map(|p| p.0).collect(),
        surjection: pairs.iter().map(|p| p.1).collect(),
    };
    Ok(LiftedRees {
        rho: rho2,
        rees: big,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::cyclic;

    #[test]
    fn trivial_extension_has_idempotent_triple() {
        let t = Monoid::trivial();
        let r = rees_extension(&t, &t, &[0], 100).unwrap();
        assert_eq!(r.monoid.size(), 2);
        assert!(r.monoid.is_idempotent(1));
        assert_eq!(r.tag(1), ReesElem::Triple(0, 0, 0));
    }

    #[test]
    fn triples_multiply_through_rho() {
        let z2 = cyclic(2);
        let r = rees_extension(&Monoid::trivial(), &z2, &[1], 100).unwrap();
        assert_eq!(r.monoid.size(), 3);
        let t = |x| r.index(ReesElem::Triple(0, x, 0));
        // (1,x,1)(1,y,1) = (1, x·ρ(1)·y, 1).
        for x in 0..2 {
            for y in 0..2 {
                assert_eq!(r.monoid.mul(t(x), t(y)), t(z2.product([x, 1, y])));
            }
        }
    }

    #[test]
    fn extensions_are_associative_for_every_rho() {
        let z2 = cyclic(2);
        for r0 in 0..2 {
            for r1 in 0..2 {
                let r = rees_extension(&z2, &z2, &[r0, r1], 100).unwrap();
                assert_eq!(r.monoid.size(), 10);
                r.monoid.check_associativity().unwrap();
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let z2 = cyclic(2);
        assert!(matches!(
            rees_extension(&z2, &z2, &[0, 0], 5),
            Err(Error::SizeCap { requested: 10, cap: 5 })
        ));
    }

    #[test]
    fn unit_c_is_rejected() {
        let z2 = cyclic(2);
        let err = local_rees(&z2, &ElementSet::from(vec![0]), 1, 100).unwrap_err();
        assert!(err.to_string().contains("is a unit"), "{err}");
    }

    #[test]
    fn flip_flop_local_rees_verifies() {
        let ff = Monoid::from_rows(&[vec![0, 1, 2], vec![1, 1, 2], vec![2, 1, 2]]).unwrap();
        let lr = local_rees(&ff, &ElementSet::from(vec![0, 1]), 2, 1000).unwrap();
        assert_eq!(lr.local.monoid.size(), 1);
        assert!(verify_division(&ff, &lr.rees.monoid, &lr.witness).is_ok());
    }

    #[test]
    fn identity_lift_keeps_rho() {
        let z2 = cyclic(2);
        let t = Monoid::trivial();
        let rho = [0, 0];
        let lift = rees_divisor_lift(
            &z2,
            &z2,
            &DivisionWitness::identity(&z2),
            &t,
            &t,
            &DivisionWitness::identity(&t),
            &rho,
            1000,
        )
        .unwrap();
        assert_eq!(lift.rho, rho.to_vec());
        assert_eq!(lift.witness, DivisionWitness::identity(&lift.rees.monoid));
    }

    #[test]
    fn quotient_lift_verifies() {
        // Z/2 is a quotient of Z/4 via x ↦ x mod 2.
        let (z2, z4, t) = (cyclic(2), cyclic(4), Monoid::trivial());
        let w = DivisionWitness {
            sub_carrier: z4.elements().collect(),
            surjection: vec![0, 1, 0, 1],
        };
        let small = rees_extension(&z2, &t, &[0, 0], 1000).unwrap();
        let lift = rees_divisor_lift(&z2, &z4, &w, &t, &t, &DivisionWitness::identity(&t), &[0, 0], 1000).unwrap();
        verify_division(&small.monoid, &lift.rees.monoid, &lift.witness).unwrap();
    }

    #[test]
    fn submonoid_lift_is_injective() {
        // Z/2 = {0, 2} inside Z/4, L = Z/2 with ρ = id.
        let (z2, z4) = (cyclic(2), cyclic(4));
        let w = DivisionWitness {
            sub_carrier: ElementSet::from(vec![0, 2]),
            surjection: vec![0, 1],
        };
        let small = rees_extension(&z2, &z2, &[0, 1], 1000).unwrap();
        let lift = rees_divisor_lift(&z2, &z4, &w, &z2, &z2, &DivisionWitness::identity(&z2), &[0, 1], 1000).unwrap();
        assert_eq!(lift.rho, vec![0, 0, 1, 0]);
        verify_division(&small.monoid, &lift.rees.monoid, &lift.witness).unwrap();
        let mut imgs = lift.witness.surjection.clone();
        imgs.sort_unstable();
        imgs.dedup();
        assert_eq!(imgs.len(), lift.witness.surjection.len());
    }
}
