use std::collections::VecDeque;

use super::coset::{eliminate_cosets_all, sigma_preimage_all, union_of};
use super::{GroupRef, Node, SdExpr, StarNode};
use crate::automata::Word;
use crate::constructions::{local_divisor, LocalDivisor};
use crate::error::{Error, Result};
use crate::groups::{group_divides, name_group, DivisionOutcome};
use crate::monoid::{Elem, Group, Limits, Monoid, MonoidHom};

/// A letter of one recursion level: the expression it stands for, its
/// value, and one word of the top alphabet it expands to.
#[derive(Debug, Clone)]
pub(crate) struct Lt {
    pub expr: SdExpr,
    pub value: Elem,
    pub rep: Word,
}

/// Merges letters with equal values, keeping first occurrences in order.
pub(crate) fn merge(letters: Vec<Lt>) -> Vec<Lt> {
    let mut merged: Vec<Lt> = Vec::new();
    for l in letters {
        match merged.iter_mut().find(|x| x.value == l.value) {
            Some(slot) => slot.expr = SdExpr::union(vec![slot.expr.clone(), l.expr]),
            None => merged.push(l),
        }
    }
    merged
}

/// Shortest representative of every reachable element, by BFS over letters.
pub(crate) fn reps(m: &Monoid, letters: &[Lt]) -> Vec<Option<Word>> {
    let mut out: Vec<Option<Word>> = vec![None; m.size()];
    out[m.identity()] = Some(Word::new());
    let mut queue = VecDeque::from([m.identity()]);
    while let Some(x) = queue.pop_front() {
        for l in letters {
            let y = m.mul(x, l.value);
            if out[y].is_none() {
                let mut w = out[x].clone().expect("visited");
                w.extend_from_slice(&l.rep);
                out[y] = Some(w);
                queue.push_back(y);
            }
        }
    }
    out
}

/// The pieces of one non-group level: `c`, the remaining letters `B`, their
/// values `T`, the local divisor at `c` and the letters over `T`.
pub(crate) struct Split {
    pub c: Lt,
    pub b: Vec<Lt>,
    pub t: Vec<Elem>,
    pub local: LocalDivisor,
    pub t_letters: Vec<Lt>,
    pub b_reps: Vec<Option<Word>>,
}

pub(crate) fn split(m: &Monoid, letters: &[Lt]) -> Split {
    let ci = letters
        .iter()
        .position(|l| !m.is_unit(l.value))
        .expect("a monoid generated by units is a group");
    let c = letters[ci].clone();
    let b: Vec<Lt> = letters.iter().enumerate().filter(|&(i, _)| i != ci).map(|(_, l)| l.clone()).collect();
    let t: Vec<Elem> = m.submonoid_generated(b.iter().map(|l| l.value)).iter().collect();
    let b_reps = reps(m, &b);
    let local = local_divisor(m, c.value);
    let t_letters = t
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let mut rep = b_reps[x].clone().expect("x ∈ φ(B*)");
            rep.extend_from_slice(&c.rep);
            Lt {
                expr: SdExpr::letter(i),
                value: local.rho(m, x),
                rep,
            }
        })
        .collect();
    Split {
        c,
        b,
        t,
        local,
        t_letters,
        b_reps,
    }
}

/// The labelling of a group level: elements of `G` covering `M`.
pub(crate) struct Labels {
    /// Subgroup of `G` mapping onto `M`.
    pub sub: Vec<Elem>,
    pub surjection: Vec<Elem>,
    pub node: StarNode,
}

pub(crate) struct Synth<'a> {
    pub group: &'a GroupRef,
    pub group_cap: usize,
}

impl Synth<'_> {
    /// `out[x]` denotes the words over `letters` with value `x`.
    pub(crate) fn run(&self, m: &Monoid, letters: Vec<Lt>) -> Result<Vec<SdExpr>> {
        let letters = merge(letters);
        let mut out = vec![SdExpr::empty(); m.size()];
        if letters.is_empty() {
            out[m.identity()] = SdExpr::epsilon();
            return Ok(out);
        }
        let image = m.submonoid_generated(letters.iter().map(|l| l.value));
        if image.len() < m.size() {
            let (sub, map) = m.submonoid(&image)?;
            let inner = self.run(&sub, restrict(&map, letters))?;
            for (i, e) in inner.into_iter().enumerate() {
                out[map[i]] = e;
            }
            return Ok(out);
        }
        if m.is_group() {
            let labels = self.labels(m, &letters)?;
            return Ok(m
                .elements()
                .map(|x| {
                    union_of(
                        labels
                            .sub
                            .iter()
                            .zip(&labels.surjection)
                            .filter(|&(_, &y)| y == x)
                            .map(|(&s, _)| SdExpr::new(Node::StarCoset(labels.node.clone(), s)))
                            .collect(),
                    )
                })
                .collect());
        }
        let sp = split(m, &letters);
        let c_expr = sp.c.expr.clone();
        let local = &sp.local;
        let t = &sp.t;
        let fb = self.run(m, sp.b.clone())?;
        let ft = self.run(&local.monoid, sp.t_letters.clone())?;
        let expansion: Vec<SdExpr> = t
            .iter()
            .map(|&x| SdExpr::concat(fb[x].clone(), c_expr.clone()))
            .collect();
        let pulled = sigma_preimage_all(&ft, &expansion)?;

        // Words starting with a c-block: c·σ⁻¹(..) then a c-free suffix.
        let mut cf: Vec<Vec<SdExpr>> = vec![Vec::new(); m.size()];
        for (p, e) in pulled.into_iter().enumerate() {
            if e.is_empty_node() {
                continue;
            }
            let cb = SdExpr::concat(c_expr.clone(), e);
            let pv = local.to_parent(p);
            for &q in t {
                if !fb[q].is_empty_node() {
                    cf[m.mul(pv, q)].push(SdExpr::concat(cb.clone(), fb[q].clone()));
                }
            }
        }
        let cf: Vec<SdExpr> = cf.into_iter().map(union_of).collect();
        for x in m.elements() {
            let mut terms = vec![fb[x].clone()];
            for &m1 in t {
                if fb[m1].is_empty_node() {
                    continue;
                }
                for m2 in m.elements() {
                    if m.mul(m1, m2) == x && !cf[m2].is_empty_node() {
                        terms.push(SdExpr::concat(fb[m1].clone(), cf[m2].clone()));
                    }
                }
            }
            out[x] = union_of(terms);
        }
        Ok(out)
    }

    /// `M` is a group `H ≼ G`: letters are labelled by a section of the
    /// division.
    pub(crate) fn labels(&self, m: &Monoid, letters: &[Lt]) -> Result<Labels> {
        let h = Group::whole(m.clone())?;
        let w = match group_divides(&h, &self.group.as_group(), self.group_cap) {
            DivisionOutcome::Divides(w) => w,
            DivisionOutcome::DoesNotDivide => {
                return Err(Error::Precondition(format!(
                    "the group {} of order {} does not divide {}",
                    name_group(&h),
                    h.order(),
                    self.group
                )))
            }
            DivisionOutcome::Undecided(why) => return Err(Error::Undecided(why)),
        };
        let sub: Vec<Elem> = w.sub_carrier.iter().collect();
        let section = |x: Elem| sub[w.surjection.iter().position(|&y| y == x).expect("surjective")];
        let node = StarNode::new(
            self.group.clone(),
            letters.iter().map(|l| (section(l.value), l.expr.clone())).collect(),
        );
        Ok(Labels {
            sub,
            surjection: w.surjection,
            node,
        })
    }
}

/// Letters re-indexed into the submonoid with carrier `map`.
pub(crate) fn restrict(map: &[Elem], letters: Vec<Lt>) -> Vec<Lt> {
    letters
        .into_iter()
        .map(|l| Lt {
            value: map.iter().position(|&y| y == l.value).expect("in image"),
            ..l
        })
        .collect()
}

pub(crate) fn top_letters(phi: &MonoidHom) -> Vec<Lt> {
    (0..phi.alphabet_size())
        .map(|a| Lt {
            expr: SdExpr::letter(a),
            value: phi.letter_images[a],
            rep: vec![a],
        })
        .collect()
}

/// Checks that every subgroup of `φ(A*)` divides `G`.
pub(crate) fn check_precondition(phi: &MonoidHom, group: &GroupRef, cap: usize) -> Result<()> {
    let (image, _) = phi.target.submonoid(&phi.image())?;
    let g = group.as_group();
    for h in image.maximal_subgroups() {
        match group_divides(&h, &g, cap) {
            DivisionOutcome::Divides(_) => {}
            DivisionOutcome::DoesNotDivide => {
                return Err(Error::Precondition(format!(
                    "the maximal subgroup {} of order {} at the idempotent {} of the image does not divide {group}",
                    name_group(&h),
                    h.order(),
                    h.unit()
                )))
            }
            DivisionOutcome::Undecided(why) => return Err(Error::Undecided(why)),
        }
    }
    Ok(())
}

/// Expressions for every `φ⁻¹(m)`, with coset nodes and without
/// simplification.
pub fn synthesize_finite_raw(phi: &MonoidHom, group: &GroupRef) -> Result<Vec<SdExpr>> {
    let cap = Limits::default().group_cap;
    check_precondition(phi, group, cap)?;
    let synth = Synth {
        group,
        group_cap: cap,
    };
    synth.run(&phi.target, top_letters(phi))
}

/// Expressions for every `φ⁻¹(m)` without coset nodes, simplified.
pub fn synthesize_all(phi: &MonoidHom, group: &GroupRef) -> Result<Vec<SdExpr>> {
    let raw = synthesize_finite_raw(phi, group)?;
    Ok(SdExpr::simplify_all(&eliminate_cosets_all(&raw)?))
}

/// An expression over `G` for `φ⁻¹(m)`.
pub fn synthesize_finite(phi: &MonoidHom, group: &GroupRef, m: Elem) -> Result<SdExpr> {
    if m >= phi.target.size() {
        return Err(Error::IndexOutOfRange {
            index: m,
            size: phi.target.size(),
        });
    }
    Ok(synthesize_all(phi, group)?.swap_remove(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{preimage_dfa, Alphabet, Dfa};
    use crate::groups::cyclic;
    use crate::sdexpr::{compile_finite, validate};
    use crate::varieties::VarietySpec;

    fn check_all(dfa: &Dfa, group: &GroupRef, v: VarietySpec) {
        let synt = dfa.syntactic_monoid(1000).unwrap();
        let exprs = synthesize_all(&synt.hom, group).unwrap();
        let image = synt.hom.image();
        for (m, e) in exprs.iter().enumerate() {
            let want = preimage_dfa(dfa.alphabet(), &synt.hom, &[m].into_iter().collect()).unwrap();
            let got = compile_finite(e, dfa.alphabet()).unwrap();
            assert!(got.equivalent(&want).unwrap(), "element {m}");
            assert_eq!(e.is_empty_node(), !image.contains(m));
            assert!(e.is_coset_free());
            let r = validate(e, dfa.alphabet(), v, 8);
            assert!(r.ok, "element {m}: {r:?}");
        }
    }

    #[test]
    fn trivial_target_gives_a_star() {
        let phi = MonoidHom::new(Monoid::trivial(), vec![0, 0]).unwrap();
        let e = synthesize_finite(&phi, &GroupRef::trivial(), 0).unwrap();
        let ab = Alphabet::from_chars("ab");
        assert!(compile_finite(&e, &ab).unwrap().equivalent(&Dfa::universal(ab)).unwrap());
    }

    #[test]
    fn parity() {
        let ab = Alphabet::from_chars("ab");
        let dfa = Dfa::from_regex(&ab, "(b|ab*a)*").unwrap();
        check_all(&dfa, &GroupRef::cyclic(2).unwrap(), VarietySpec::Abelian);
    }

    #[test]
    fn ab_star_is_star_free() {
        let ab = Alphabet::from_chars("ab");
        let dfa = Dfa::from_regex(&ab, "(ab)*").unwrap();
        check_all(&dfa, &GroupRef::trivial(), VarietySpec::Trivial);
    }

    #[test]
    fn mixed_group_and_aperiodic() {
        let abc = Alphabet::from_chars("abc");
        let dfa = Dfa::from_regex(&abc, "(b|ab*a)*c(a|b)*").unwrap();
        check_all(&dfa, &GroupRef::cyclic(2).unwrap(), VarietySpec::Abelian);
    }

    #[test]
    fn precondition_names_the_subgroup() {
        let phi = MonoidHom::new(cyclic(3), vec![1]).unwrap();
        let err = synthesize_all(&phi, &GroupRef::cyclic(2).unwrap()).unwrap_err();
        assert!(err.to_string().contains("Z/3Z"), "{err}");
    }
}
