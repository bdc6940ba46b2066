//! Finite monoids given by multiplication tables.
//!
//! Elements are the indices `0..n`. Every [`Monoid`] is normalized so that
//! the identity is element `0`; all tie-breaking elsewhere in the crate uses
//! ascending element index.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{parse_err, Error, Result};

/// Index of a monoid element.
pub type Elem = usize;

/// Tables up to this size are checked for associativity on every triple.
pub const EXHAUSTIVE_ASSOCIATIVITY_LIMIT: usize = 256;

/// Default cap on the number of elements of derived monoids.
pub const DEFAULT_SIZE_CAP: usize = 20_000;

/// Size limits shared by the constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of elements of any derived monoid.
    pub size_cap: usize,
    /// Largest group order for which division is decided by search.
    pub group_cap: usize,
    /// Largest monoid for which the full Birget-Rhodes expansion is built.
    pub expansion_full_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            size_cap: DEFAULT_SIZE_CAP,
            group_cap: 60,
            expansion_full_cap: 12,
        }
    }
}

/// An ordered set of element indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ElementSet(Vec<Elem>);

impl ElementSet {
    pub fn new() -> Self {
        ElementSet(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    /// Position of `x` in the canonical order, if present.
    pub fn position(&self, x: Elem) -> Option<usize> {
        self.0.binary_search(&x).ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = Elem> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[Elem] {
        &self.0
    }

    pub fn insert(&mut self, x: Elem) -> bool {
        match self.0.binary_search(&x) {
            Ok(_) => false,
            Err(pos) => {
                self.0.insert(pos, x);
                true
            }
        }
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.iter().all(|x| other.contains(x))
    }
}

impl FromIterator<Elem> for ElementSet {
    fn from_iter<I: IntoIterator<Item = Elem>>(iter: I) -> Self {
        let mut v: Vec<Elem> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        ElementSet(v)
    }
}

impl From<Vec<Elem>> for ElementSet {
    fn from(v: Vec<Elem>) -> Self {
        v.into_iter().collect()
    }
}

impl fmt::Display for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

/// A finite monoid stored as a full multiplication table, identity at `0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monoid {
    size: usize,
    table: Arc<[u32]>,
}

impl fmt::Debug for Monoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Monoid(size={})", self.size)
    }
}

impl Monoid {
    /// Builds a monoid from a row-major table, checking the identity and
    /// associativity. If `identity` is not `0` it is swapped into place.
    pub fn from_table(size: usize, table: Vec<Elem>, identity: Elem) -> Result<Monoid> {
        if size == 0 {
            return Err(Error::Precondition("a monoid needs at least one element".into()));
        }
        if table.len() != size * size {
            return Err(Error::Precondition(format!(
                "table has {} entries, expected {}",
                table.len(),
                size * size
            )));
        }
        if identity >= size {
            return Err(Error::IndexOutOfRange { index: identity, size });
        }
        if let Some(&bad) = table.iter().find(|&&v| v >= size) {
            return Err(Error::IndexOutOfRange { index: bad, size });
        }
        for x in 0..size {
            if table[identity * size + x] != x || table[x * size + identity] != x {
                return Err(Error::NotIdentity(identity));
            }
        }
        let m = Monoid::from_raw(size, table.iter().map(|&v| v as u32).collect());
        let m = if identity == 0 {
            m
        } else {
            let mut perm: Vec<Elem> = (0..size).collect();
            perm.swap(0, identity);
            m.permuted(&perm)
        };
        m.check_associativity()?;
        Ok(m)
    }

    /// Builds from nested rows, identity `0`.
    pub fn from_rows(rows: &[Vec<Elem>]) -> Result<Monoid> {
        let n = rows.len();
        let mut flat = Vec::with_capacity(n * n);
        for r in rows {
            if r.len() != n {
                return Err(Error::Precondition("table is not square".into()));
            }
            flat.extend_from_slice(r);
        }
        Monoid::from_table(n, flat, 0)
    }

    /// Table known to be associative with identity `0` (closed constructions).
    pub(crate) fn from_raw(size: usize, table: Vec<u32>) -> Monoid {
        debug_assert_eq!(table.len(), size * size);
        Monoid {
            size,
            table: table.into(),
        }
    }

    pub fn trivial() -> Monoid {
        Monoid::from_raw(1, vec![0])
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn identity(&self) -> Elem {
        0
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.size
    }

    #[inline]
    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        self.table[x * self.size + y] as Elem
    }

    pub fn try_mul(&self, x: Elem, y: Elem) -> Result<Elem> {
        for v in [x, y] {
            if v >= self.size {
                return Err(Error::IndexOutOfRange {
                    index: v,
                    size: self.size,
                });
            }
        }
        Ok(self.mul(x, y))
    }

    /// Product of a sequence of elements, `identity` for the empty sequence.
    pub fn product<I: IntoIterator<Item = Elem>>(&self, xs: I) -> Elem {
        xs.into_iter().fold(0, |acc, x| self.mul(acc, x))
    }

    pub fn pow(&self, x: Elem, k: usize) -> Elem {
        let mut acc = 0;
        for _ in 0..k {
            acc = self.mul(acc, x);
        }
        acc
    }

    /// The unique idempotent among the powers `x, x², ...`.
    pub fn idempotent_power(&self, x: Elem) -> Elem {
        let mut p = x;
        loop {
            if self.mul(p, p) == p {
                return p;
            }
            p = self.mul(p, x);
        }
    }

    pub fn is_idempotent(&self, x: Elem) -> bool {
        self.mul(x, x) == x
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.size).all(|x| (x + 1..self.size).all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    /// Exhaustive check up to [`EXHAUSTIVE_ASSOCIATIVITY_LIMIT`] elements,
    /// `10·n²` seeded random triples above.
    pub fn check_associativity(&self) -> Result<()> {
        let n = self.size;
        let check = |x, y, z| -> Result<()> {
            let left = self.mul(self.mul(x, y), z);
            let right = self.mul(x, self.mul(y, z));
            if left != right {
                return Err(Error::NotAssociative {
                    x,
                    y,
                    z,
                    left,
                    right,
                });
            }
            Ok(())
        };
        if n <= EXHAUSTIVE_ASSOCIATIVITY_LIMIT {
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        check(x, y, z)?;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            for _ in 0..10 * n * n {
                check(rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n))?;
            }
        }
        Ok(())
    }

    /// Relabels elements: old element `perm[i]` becomes new element `i`.
    /// `perm[0]` must be the identity.
    pub(crate) fn permuted(&self, perm: &[Elem]) -> Monoid {
        let n = self.size;
        let mut inv = vec![0usize; n];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        let mut table = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                table[i * n + j] = inv[self.mul(perm[i], perm[j])] as u32;
            }
        }
        Monoid::from_raw(n, table)
    }

    /// Least subset containing the identity and `gens`, closed under products.
    pub fn submonoid_generated<I: IntoIterator<Item = Elem>>(&self, gens: I) -> ElementSet {
        let gens: Vec<Elem> = gens.into_iter().collect();
        let mut seen = vec![false; self.size];
        let mut out = vec![0];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for &g in &gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                    queue.push_back(y);
                }
            }
        }
        out.into_iter().collect()
    }

    pub fn is_closed(&self, set: &ElementSet) -> bool {
        set.iter()
            .all(|x| set.iter().all(|y| set.contains(self.mul(x, y))))
    }

    /// Neutral element of a subsemigroup, if it is a monoid.
    pub fn neutral_of(&self, set: &ElementSet) -> Option<Elem> {
        set.iter()
            .find(|&e| set.iter().all(|x| self.mul(e, x) == x && self.mul(x, e) == x))
    }

    /// Standalone copy of a closed subset with neutral element `neutral`.
    /// Returns the monoid and the map from its elements to elements of `self`
    /// (`neutral` first, then the rest ascending).
    pub fn restrict(&self, set: &ElementSet, neutral: Elem) -> Result<(Monoid, Vec<Elem>)> {
        if !set.contains(neutral) {
            return Err(Error::Precondition(format!(
                "neutral element {neutral} not in carrier"
            )));
        }
        if !self.is_closed(set) {
            return Err(Error::Precondition("carrier is not closed".into()));
        }
        let mut order = vec![neutral];
        order.extend(set.iter().filter(|&x| x != neutral));
        let k = order.len();
        let mut index = HashMap::with_capacity(k);
        for (i, &x) in order.iter().enumerate() {
            index.insert(x, i);
        }
        let mut table = vec![0u32; k * k];
        for i in 0..k {
            for j in 0..k {
                table[i * k + j] = index[&self.mul(order[i], order[j])] as u32;
            }
        }
        for i in 0..k {
            if table[i] as usize != i || table[i * k] as usize != i {
                return Err(Error::NotIdentity(neutral));
            }
        }
        Ok((Monoid::from_raw(k, table), order))
    }

    /// Standalone submonoid on a closed carrier containing the identity.
    pub fn submonoid(&self, set: &ElementSet) -> Result<(Monoid, Vec<Elem>)> {
        self.restrict(set, 0)
    }

    pub fn is_unit(&self, x: Elem) -> bool {
        (0..self.size).any(|y| self.mul(x, y) == 0 && self.mul(y, x) == 0)
    }

    pub fn units(&self) -> ElementSet {
        self.elements().filter(|&x| self.is_unit(x)).collect()
    }

    pub fn is_group(&self) -> bool {
        self.elements().all(|x| self.is_unit(x))
    }

    pub fn idempotents(&self) -> ElementSet {
        self.elements().filter(|&x| self.is_idempotent(x)).collect()
    }

    /// True iff `x^n = x^(n+1)` for all `x` with `n = |M|`.
    pub fn is_aperiodic(&self) -> bool {
        let n = self.size;
        self.elements().all(|x| {
            let p = self.pow(x, n);
            self.mul(p, x) == p
        })
    }

    /// The maximal subgroup `G_e` at every idempotent `e`, in ascending order
    /// of `e`.
    ///
    /// An element `x` lies in `G_e` iff its idempotent power is `e` and
    /// `x·e = x`, i.e. `x` lies on the cycle of its powers.
    pub fn maximal_subgroups(&self) -> Vec<Group> {
        let mut carriers: Vec<(Elem, Vec<Elem>)> = self
            .idempotents()
            .iter()
            .map(|e| (e, Vec::new()))
            .collect();
        for x in self.elements() {
            let e = self.idempotent_power(x);
            if self.mul(x, e) == x {
                let slot = carriers
                    .binary_search_by_key(&e, |(u, _)| *u)
                    .expect("idempotent power is idempotent");
                carriers[slot].1.push(x);
            }
        }
        carriers
            .into_iter()
            .map(|(e, xs)| Group {
                parent: self.clone(),
                carrier: xs.into_iter().collect(),
                unit: e,
            })
            .collect()
    }

    /// Componentwise product; element `(i, j)` has index `i·|other| + j`.
    pub fn direct_product(&self, other: &Monoid, cap: usize) -> Result<Monoid> {
        let (a, b) = (self.size, other.size);
        let n = a.saturating_mul(b);
        if n > cap {
            return Err(Error::SizeCap { requested: n, cap });
        }
        let mut table = vec![0u32; n * n];
        for x in 0..n {
            let (x1, x2) = (x / b, x % b);
            for y in 0..n {
                let (y1, y2) = (y / b, y % b);
                table[x * n + y] = (self.mul(x1, y1) * b + other.mul(x2, y2)) as u32;
            }
        }
        Ok(Monoid::from_raw(n, table))
    }

    /// Text form: `monoid <n>`, `identity 0`, `table`, then `n` rows.
    pub fn to_text(&self) -> String {
        let mut s = format!("monoid {}\nidentity 0\ntable\n", self.size);
        for x in self.elements() {
            let row: Vec<String> = self.elements().map(|y| self.mul(x, y).to_string()).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    /// Parses the text form. A non-zero identity is normalized to `0` by
    /// swapping it with element `0`.
    pub fn from_text(text: &str) -> Result<Monoid> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let mut expect = |key: &str| -> Result<(usize, Vec<String>)> {
            let (no, line) = lines
                .next()
                .ok_or_else(|| parse_err(0, format!("missing `{key}` line")))?;
            let mut parts = line.split_whitespace();
            if parts.next() != Some(key) {
                return Err(parse_err(no, format!("expected `{key}`")));
            }
            Ok((no, parts.map(str::to_string).collect()))
        };
        let (no, args) = expect("monoid")?;
        let n: usize = args
            .first()
            .and_then(|a| a.parse().ok())
            .filter(|&n| n > 0)
            .ok_or_else(|| parse_err(no, "expected a positive size"))?;
        let (no, args) = expect("identity")?;
        let identity: usize = args
            .first()
            .and_then(|a| a.parse().ok())
            .ok_or_else(|| parse_err(no, "expected an identity index"))?;
        expect("table")?;
        let mut flat = Vec::with_capacity(n * n);
        for _ in 0..n {
            let (no, line) = lines
                .next()
                .ok_or_else(|| parse_err(0, "table has too few rows"))?;
            let row: Vec<usize> = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| parse_err(no, format!("bad entry `{t}`"))))
                .collect::<Result<_>>()?;
            if row.len() != n {
                return Err(parse_err(no, format!("row has {} entries, expected {n}", row.len())));
            }
            flat.extend(row);
        }
        if let Some((no, _)) = lines.next() {
            return Err(parse_err(no, "trailing content after table"));
        }
        Monoid::from_table(n, flat, identity)
    }
}

/// A subgroup of a monoid: a carrier closed under multiplication in which
/// every element is invertible with respect to `unit`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Group {
    parent: Monoid,
    carrier: ElementSet,
    unit: Elem,
}

impl Group {
    /// Validates the group axioms for `carrier` inside `parent`.
    pub fn new(parent: Monoid, carrier: ElementSet, unit: Elem) -> Result<Group> {
        if let Some(bad) = carrier.iter().find(|&x| x >= parent.size()) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                size: parent.size(),
            });
        }
        if !carrier.contains(unit) {
            return Err(Error::NotAGroup(format!("unit {unit} not in carrier")));
        }
        if !parent.is_closed(&carrier) {
            return Err(Error::NotAGroup("carrier not closed".into()));
        }
        for x in carrier.iter() {
            if parent.mul(unit, x) != x || parent.mul(x, unit) != x {
                return Err(Error::NotAGroup(format!("{unit} is not neutral for {x}")));
            }
            if !carrier
                .iter()
                .any(|y| parent.mul(x, y) == unit && parent.mul(y, x) == unit)
            {
                return Err(Error::NotAGroup(format!("{x} has no inverse")));
            }
        }
        Ok(Group {
            parent,
            carrier,
            unit,
        })
    }

    /// The whole monoid viewed as a group.
    pub fn whole(m: Monoid) -> Result<Group> {
        let carrier = m.elements().collect();
        Group::new(m, carrier, 0)
    }

    pub fn parent(&self) -> &Monoid {
        &self.parent
    }

    pub fn carrier(&self) -> &ElementSet {
        &self.carrier
    }

    pub fn unit(&self) -> Elem {
        self.unit
    }

    pub fn order(&self) -> usize {
        self.carrier.len()
    }

    pub fn inverse(&self, x: Elem) -> Elem {
        self.carrier
            .iter()
            .find(|&y| self.parent.mul(x, y) == self.unit)
            .expect("group elements are invertible")
    }

    pub fn is_abelian(&self) -> bool {
        self.carrier
            .iter()
            .all(|x| self.carrier.iter().all(|y| self.parent.mul(x, y) == self.parent.mul(y, x)))
    }

    /// Standalone table for the group (unit first, then ascending) and the
    /// map back into the parent.
    pub fn to_monoid(&self) -> (Monoid, Vec<Elem>) {
        self.parent
            .restrict(&self.carrier, self.unit)
            .expect("group carrier is closed with neutral unit")
    }

    /// Standalone group over its own table.
    pub fn standalone(&self) -> Group {
        Group::whole(self.to_monoid().0).expect("restriction of a group is a group")
    }
}

/// Evidence that a monoid `N` divides a monoid `M`: a subsemigroup of `M`
/// that is a monoid, with a surjective homomorphism onto `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisionWitness {
    /// Carrier in `M`.
    pub sub_carrier: ElementSet,
    /// `surjection[i]` is the image of the `i`-th element of `sub_carrier`.
    pub surjection: Vec<Elem>,
}

impl DivisionWitness {
    /// `M ≼ M` through the identity map.
    pub fn identity(m: &Monoid) -> DivisionWitness {
        DivisionWitness {
            sub_carrier: m.elements().collect(),
            surjection: m.elements().collect(),
        }
    }

    /// A submonoid embedding `N ↪ M` given by `embedding[n] = m`.
    pub fn embedding(embedding: &[Elem]) -> DivisionWitness {
        let mut pairs: Vec<(Elem, Elem)> =
            embedding.iter().enumerate().map(|(n, &m)| (m, n)).collect();
        pairs.sort_unstable();
        DivisionWitness {
            sub_carrier: pairs.iter().map(|p| p.0).collect(),
            surjection: pairs.iter().map(|p| p.1).collect(),
        }
    }

    /// Image of `x`, if `x` is in the carrier.
    pub fn image(&self, x: Elem) -> Option<Elem> {
        self.sub_carrier.position(x).map(|i| self.surjection[i])
    }

    /// Given `self: N ≼ M` and `outer: M ≼ R`, produces `N ≼ R`.
    ///
    /// The preimage of the carrier is a subsemigroup of `R` mapping onto `N`;
    /// it is cut down to the local monoid `eSe` at an idempotent `e` above
    /// the identity of `N`, so the result is again a monoid.
    pub fn compose(&self, outer: &DivisionWitness, r: &Monoid) -> DivisionWitness {
        let mut pre: Vec<(Elem, Elem)> = Vec::new();
        for (i, x) in outer.sub_carrier.iter().enumerate() {
            let m = outer.surjection[i];
            if let Some(n) = self.image(m) {
                pre.push((x, n));
            }
        }
        let e = {
            let x = pre
                .iter()
                .find(|&&(_, n)| n == 0)
                .map(|&(x, _)| x)
                .expect("identity has a preimage");
            r.idempotent_power(x)
        };
        let map: HashMap<Elem, Elem> = pre.iter().copied().collect();
        let carrier: ElementSet = pre
            .iter()
            .map(|&(x, _)| r.mul(r.mul(e, x), e))
            .collect();
        let surjection = carrier.iter().map(|x| map[&x]).collect();
        DivisionWitness {
            sub_carrier: carrier,
            surjection,
        }
    }
}

/// The first violated condition of a division witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DivisionFailure {
    LengthMismatch { carrier: usize, images: usize },
    OutOfRange { element: Elem },
    NotClosed { x: Elem, y: Elem, product: Elem },
    NoNeutral,
    NotSurjective { missing: Elem },
    NeutralNotIdentity { neutral: Elem, image: Elem },
    HomFails {
        x: Elem,
        y: Elem,
        xy: Elem,
        image_xy: Elem,
        image_x: Elem,
        image_y: Elem,
        product: Elem,
    },
}

impl fmt::Display for DivisionFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DivisionFailure::LengthMismatch { carrier, images } => {
                write!(f, "carrier has {carrier} elements but {images} images")
            }
            DivisionFailure::OutOfRange { element } => write!(f, "element {element} out of range"),
            DivisionFailure::NotClosed { x, y, product } => {
                write!(f, "carrier not closed: {x}*{y} = {product} is outside")
            }
            DivisionFailure::NoNeutral => write!(f, "carrier has no neutral element"),
            DivisionFailure::NotSurjective { missing } => {
                write!(f, "surjection misses element {missing}")
            }
            DivisionFailure::NeutralNotIdentity { neutral, image } => {
                write!(f, "neutral {neutral} maps to {image}, not to the identity")
            }
            DivisionFailure::HomFails {
                x,
                y,
                xy,
                image_xy,
                image_x,
                image_y,
                product,
            } => write!(
                f,
                "f({x}*{y}) = f({xy}) = {image_xy} but f({x})*f({y}) = {image_x}*{image_y} = {product}"
            ),
        }
    }
}

/// Checks every invariant of `w` as a witness of `n ≼ m`.
pub fn verify_division(
    n: &Monoid,
    m: &Monoid,
    w: &DivisionWitness,
) -> std::result::Result<(), DivisionFailure> {
    if w.sub_carrier.len() != w.surjection.len() {
        return Err(DivisionFailure::LengthMismatch {
            carrier: w.sub_carrier.len(),
            images: w.surjection.len(),
        });
    }
    if let Some(element) = w.sub_carrier.iter().find(|&x| x >= m.size()) {
        return Err(DivisionFailure::OutOfRange { element });
    }
    if let Some(&element) = w.surjection.iter().find(|&&y| y >= n.size()) {
        return Err(DivisionFailure::OutOfRange { element });
    }
    for x in w.sub_carrier.iter() {
        for y in w.sub_carrier.iter() {
            let product = m.mul(x, y);
            if !w.sub_carrier.contains(product) {
                return Err(DivisionFailure::NotClosed { x, y, product });
            }
        }
    }
    let neutral = m.neutral_of(&w.sub_carrier).ok_or(DivisionFailure::NoNeutral)?;
    let mut hit = vec![false; n.size()];
    for &y in &w.surjection {
        hit[y] = true;
    }
    if let Some(missing) = hit.iter().position(|h| !h) {
        return Err(DivisionFailure::NotSurjective { missing });
    }
    let image = w.image(neutral).expect("neutral is in the carrier");
    if image != 0 {
        return Err(DivisionFailure::NeutralNotIdentity { neutral, image });
    }
    for (i, x) in w.sub_carrier.iter().enumerate() {
        for (j, y) in w.sub_carrier.iter().enumerate() {
            let xy = m.mul(x, y);
            let image_xy = w.image(xy).expect("closed");
            let (image_x, image_y) = (w.surjection[i], w.surjection[j]);
            let product = n.mul(image_x, image_y);
            if image_xy != product {
                return Err(DivisionFailure::HomFails {
                    x,
                    y,
                    xy,
                    image_xy,
                    image_x,
                    image_y,
                    product,
                });
            }
        }
    }
    Ok(())
}

/// A homomorphism from the free monoid over `letter_images.len()` letters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoidHom {
    pub target: Monoid,
    pub letter_images: Vec<Elem>,
}

impl MonoidHom {
    pub fn new(target: Monoid, letter_images: Vec<Elem>) -> Result<MonoidHom> {
        if let Some(&bad) = letter_images.iter().find(|&&x| x >= target.size()) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                size: target.size(),
            });
        }
        Ok(MonoidHom {
            target,
            letter_images,
        })
    }

    pub fn alphabet_size(&self) -> usize {
        self.letter_images.len()
    }

    pub fn eval(&self, word: &[usize]) -> Elem {
        self.target
            .product(word.iter().map(|&a| self.letter_images[a]))
    }

    /// The submonoid of the target reached by words.
    pub fn image(&self) -> ElementSet {
        self.target
            .submonoid_generated(self.letter_images.iter().copied())
    }
}

/// Result of enumerating a monoid from a right action of letters on keys.
#[derive(Clone, Debug)]
pub struct Enumerated<K> {
    /// Keys in discovery (BFS) order; `keys[0]` is the identity.
    pub keys: Vec<K>,
    pub monoid: Monoid,
    pub letter_images: Vec<Elem>,
    /// `right[x][a]` is `x` times the image of letter `a`.
    pub right: Vec<Vec<Elem>>,
    /// BFS parent and letter of every non-identity element.
    pub parent: Vec<Option<(Elem, usize)>>,
}

impl<K> Enumerated<K> {
    /// A shortest (length-lexicographically least) word for `x`.
    pub fn representative(&self, mut x: Elem) -> Vec<usize> {
        let mut word = Vec::new();
        while let Some((p, a)) = self.parent[x] {
            word.push(a);
            x = p;
        }
        word.reverse();
        word
    }

    pub fn hom(&self) -> MonoidHom {
        MonoidHom {
            target: self.monoid.clone(),
            letter_images: self.letter_images.clone(),
        }
    }
}

/// Enumerates the monoid generated by `letters` letters acting on the right
/// of `identity` via `act`, hash-consing keys. Elements are numbered in BFS
/// order over the ordered alphabet.
pub fn enumerate_monoid<K, F>(identity: K, letters: usize, act: F, cap: usize) -> Result<Enumerated<K>>
where
    K: Clone + Eq + Hash,
    F: Fn(&K, usize) -> K,
{
    let mut keys = vec![identity.clone()];
    let mut index: HashMap<K, Elem> = HashMap::from([(identity, 0)]);
    let mut right: Vec<Vec<Elem>> = Vec::new();
    let mut parent = vec![None];
    let mut next = 0;
    while next < keys.len() {
        let mut row = Vec::with_capacity(letters);
        for a in 0..letters {
            let k = act(&keys[next], a);
            let id = match index.get(&k) {
                Some(&id) => id,
                None => {
                    let id = keys.len();
                    if id + 1 > cap {
                        return Err(Error::SizeCap {
                            requested: id + 1,
                            cap,
                        });
                    }
                    index.insert(k.clone(), id);
                    keys.push(k);
                    parent.push(Some((next, a)));
                    id
                }
            };
            row.push(id);
        }
        right.push(row);
        next += 1;
    }
    let n = keys.len();
    let mut table = vec![0u32; n * n];
    for x in 0..n {
        table[x * n] = x as u32;
        for y in 1..n {
            let (p, a) = parent[y].expect("non-identity has a parent");
            let xp = table[x * n + p] as usize;
            table[x * n + y] = right[xp][a] as u32;
        }
    }
    let letter_images = (0..letters).map(|a| right[0][a]).collect();
    Ok(Enumerated {
        keys,
        monoid: Monoid::from_raw(n, table),
        letter_images,
        right,
        parent,
    })
}
