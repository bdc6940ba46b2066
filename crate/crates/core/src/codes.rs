//! Prefix codes, synchronization delay, and the automaton for words of `K*`
//! whose blocks multiply to a given group element.

use std::collections::HashMap;

use crate::automata::{Alphabet, Dfa, Word};
use crate::error::{Error, Result};
use crate::monoid::{Elem, Monoid};

/// Why a language fails to be a prefix code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrefixViolation {
    ContainsEmptyWord,
    /// `u` and `uv` both in `K` with `v` non-empty.
    ProperPrefix { u: Word, uv: Word },
}

/// `None` if `K` is a prefix code; otherwise the least violation.
pub fn prefix_violation(k: &Dfa) -> Option<PrefixViolation> {
    if k.accepts(&[]) {
        return Some(PrefixViolation::ContainsEmptyWord);
    }
    let alphabet = k.alphabet().clone();
    let plus = Dfa::from_fn(alphabet, 2, 0, |_, _| 1, |q| q == 1);
    let extended = k.concat_finite(&plus).expect("same alphabet");
    let uv = k.intersect(&extended).expect("same alphabet").example_word()?;
    let cut = (0..uv.len())
        .find(|&i| k.accepts(&uv[..i]))
        .expect("some proper prefix is in K");
    Some(PrefixViolation::ProperPrefix {
        u: uv[..cut].to_vec(),
        uv,
    })
}

pub fn is_prefix_code(k: &Dfa) -> bool {
    prefix_violation(k).is_none()
}

/// `u v w ∈ K*` with `v ∈ K^d` but `u v ∉ K*`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyncCounterexample {
    pub delay: usize,
    pub u: Word,
    pub v: Word,
    pub w: Word,
}

impl SyncCounterexample {
    pub fn describe(&self, alphabet: &Alphabet) -> String {
        let show = |w: &[usize]| {
            let s = alphabet.format_word(w);
            if s.is_empty() {
                "1".to_string()
            } else {
                s
            }
        };
        format!("u={} v={} w={}", show(&self.u), show(&self.v), show(&self.w))
    }
}

/// Decides whether `K` has synchronization delay `d`: the inclusion
/// `A*·K^d ∩ LeftFactors(K*) ⊆ K*`. Returns a counterexample when it fails.
pub fn sync_delay_counterexample(k: &Dfa, d: usize) -> Result<Option<SyncCounterexample>> {
    if let Some(v) = prefix_violation(k) {
        return Err(Error::NotPrefixCode(format!("{v:?}")));
    }
    let alphabet = k.alphabet().clone();
    let star = k.star();
    let kd = k.power(d);
    let tail = Dfa::universal(alphabet).concat_finite(&kd)?;
    let bad = tail.intersect(&star.left_factors())?.difference(&star)?;
    let Some(x) = bad.example_word() else {
        return Ok(None);
    };
    let cut = (0..=x.len())
        .find(|&i| kd.accepts(&x[i..]))
        .expect("x ends with a K^d factor");
    let w = star
        .shortest_completion(star.run(&x))
        .expect("x is a left factor of K*");
    Ok(Some(SyncCounterexample {
        delay: d,
        u: x[..cut].to_vec(),
        v: x[cut..].to_vec(),
        w,
    }))
}

pub fn has_sync_delay(k: &Dfa, d: usize) -> Result<bool> {
    Ok(sync_delay_counterexample(k, d)?.is_none())
}

/// Outcome of searching for the least synchronization delay.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeReport {
    pub is_prefix_code: bool,
    pub prefix_violation: Option<PrefixViolation>,
    pub delay: Option<usize>,
    /// One counterexample per rejected delay, in increasing order.
    pub counterexamples: Vec<SyncCounterexample>,
    pub searched_up_to: usize,
}

impl CodeReport {
    /// The counterexample at the largest rejected delay.
    pub fn counterexample(&self) -> Option<&SyncCounterexample> {
        self.counterexamples.last()
    }
}

/// Least `d ≤ dmax` at which `K` has synchronization delay `d`.
pub fn min_sync_delay(k: &Dfa, dmax: usize) -> CodeReport {
    let violation = prefix_violation(k);
    let mut report = CodeReport {
        is_prefix_code: violation.is_none(),
        prefix_violation: violation,
        delay: None,
        counterexamples: Vec::new(),
        searched_up_to: dmax,
    };
    if !report.is_prefix_code {
        return report;
    }
    for d in 0..=dmax {
        match sync_delay_counterexample(k, d).expect("checked prefix code") {
            None => {
                report.delay = Some(d);
                break;
            }
            Some(c) => report.counterexamples.push(c),
        }
    }
    report
}

/// A code `K = ⋃ K_g` split into pieces labelled by elements of a group.
#[derive(Debug, Clone)]
pub struct GammaPieces {
    /// A group given as a standalone table.
    pub group: Monoid,
    /// `pieces[g]` is `K_g`.
    pub pieces: Vec<Dfa>,
}

impl GammaPieces {
    pub fn new(group: Monoid, pieces: Vec<Dfa>) -> Result<GammaPieces> {
        if !group.is_group() {
            return Err(Error::NotAGroup("piece labels must form a group".into()));
        }
        if pieces.len() != group.size() {
            return Err(Error::Precondition(format!(
                "{} pieces for a group of order {}",
                pieces.len(),
                group.size()
            )));
        }
        for p in &pieces[1..] {
            pieces[0].check_alphabet(p)?;
        }
        Ok(GammaPieces { group, pieces })
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.pieces[0].alphabet()
    }

    /// `K = ⋃ K_g`.
    pub fn code(&self) -> Dfa {
        self.pieces
            .iter()
            .skip(1)
            .fold(self.pieces[0].clone(), |acc, p| acc.union(p).expect("same alphabet"))
            .minimize()
    }

    /// First pair of labels whose pieces intersect, with a shared word.
    pub fn overlap(&self) -> Option<(Elem, Elem, Word)> {
        for g in 0..self.pieces.len() {
            for h in g + 1..self.pieces.len() {
                let i = self.pieces[g].intersect(&self.pieces[h]).expect("same alphabet");
                if let Some(w) = i.example_word() {
                    return Some((g, h, w));
                }
            }
        }
        None
    }

    pub fn check(&self) -> Result<()> {
        if let Some((g, h, w)) = self.overlap() {
            return Err(Error::PiecesNotDisjoint(format!(
                "pieces {g} and {h} share `{}`",
                self.alphabet().format_word(&w)
            )));
        }
        if let Some(v) = prefix_violation(&self.code()) {
            return Err(Error::NotPrefixCode(format!("{v:?}")));
        }
        Ok(())
    }

    /// Group value `γ(k)` of a single code word, if it is one.
    pub fn label(&self, w: &[usize]) -> Option<Elem> {
        (0..self.pieces.len()).find(|&g| self.pieces[g].accepts(w))
    }
}

/// DFA for the words `u₁⋯u_k` of `K*` with `γ(u₁)⋯γ(u_k) = target`. States
/// are pairs of a group value and a non-final state of the pieces' product
/// automaton, plus one sink collecting every dead state.
pub fn gamma_star_automaton(p: &GammaPieces, target: Elem) -> Result<Dfa> {
    p.check()?;
    let g = &p.group;
    if target >= g.size() {
        return Err(Error::IndexOutOfRange {
            index: target,
            size: g.size(),
        });
    }
    let alphabet = p.alphabet().clone();
    let letters = alphabet.len();
    // Product automaton of the pieces.
    let start: Vec<usize> = p.pieces.iter().map(Dfa::initial).collect();
    let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(start.clone(), 0)]);
    let mut tuples = vec![start];
    let mut delta: Vec<usize> = Vec::new();
    let mut i = 0;
    while i < tuples.len() {
        for a in 0..letters {
            let next: Vec<usize> = tuples[i]
                .iter()
                .zip(&p.pieces)
                .map(|(&q, d)| d.step(q, a))
                .collect();
            let len = index.len();
            let j = *index.entry(next.clone()).or_insert_with(|| {
                tuples.push(next);
                len
            });
            delta.push(j);
        }
        i += 1;
    }
    let label: Vec<Option<Elem>> = tuples
        .iter()
        .map(|t| (0..t.len()).find(|&h| p.pieces[h].is_final(t[h])))
        .collect();
    let product = Dfa::from_parts(
        alphabet.clone(),
        delta,
        0,
        label.iter().map(Option::is_some).collect(),
    );
    let live = product.coreachable();

    // States: (group value, product state) numbered on discovery; 0 is the
    // sink. The product start state can recur inside a block, so block
    // boundaries get their own marker.
    const SINK: usize = 0;
    const BOUNDARY: usize = usize::MAX;
    let mut number: HashMap<(Elem, usize), usize> = HashMap::new();
    let mut states: Vec<(Elem, usize)> = vec![(usize::MAX, usize::MAX)];
    let mut out = vec![SINK; letters];
    let mut intern = |key: (Elem, usize), states: &mut Vec<(Elem, usize)>| -> usize {
        *number.entry(key).or_insert_with(|| {
            states.push(key);
            states.len() - 1
        })
    };
    let initial = intern((g.identity(), BOUNDARY), &mut states);
    let mut i = 1;
    while i < states.len() {
        let (x, q) = states[i];
        for a in 0..letters {
            let r = product.step(if q == BOUNDARY { 0 } else { q }, a);
            let t = if !live[r] {
                SINK
            } else if let Some(h) = label[r] {
                intern((g.mul(x, h), BOUNDARY), &mut states)
            } else {
                intern((x, r), &mut states)
            };
            out.push(t);
        }
        i += 1;
    }
    let finals: Vec<bool> = states
        .iter()
        .map(|&(x, q)| x == target && q == BOUNDARY)
        .collect();
    Ok(Dfa::from_parts(alphabet, out, initial, finals).minimize())
}


#[cfg(test)]
mod delay_shapes {
    use super::*;

    #[test]
    fn abab_has_no_bounded_delay_up_to_five() {
        let ab = Alphabet::from_chars("ab");
        let k = Dfa::from_regex(&ab, "abab").unwrap();
        let r = min_sync_delay(&k, 5);
        assert_eq!(r.delay, None);
        assert_eq!(r.counterexamples.len(), 6);
        for c in &r.counterexamples[1..] {
            assert_eq!(c.u, vec![0, 1]);
            assert_eq!(c.v, [0, 1, 0, 1].repeat(c.delay));
            assert_eq!(c.w, vec![0, 1]);
        }
    }

    #[test]
    fn b_star_c_has_delay_one() {
        let abc = Alphabet::from_chars("abc");
        let k = Dfa::from_regex(&abc, "(a|b)*c").unwrap();
        let r = min_sync_delay(&k, 3);
        assert_eq!(r.delay, Some(1));
        assert_eq!(r.counterexamples[0].describe(&abc), "u=a v=1 w=c");
    }
}
