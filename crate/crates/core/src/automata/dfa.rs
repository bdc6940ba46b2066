use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use super::nfa::{parse_regex, Nfa};
use super::{Alphabet, Letter, Word};
use crate::error::{parse_err, Error, Result};
use crate::monoid::{enumerate_monoid, Elem, ElementSet, Monoid, MonoidHom};

/// A complete deterministic finite automaton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Alphabet,
    /// `delta[q * |A| + a]`.
    delta: Vec<usize>,
    initial: usize,
    finals: Vec<bool>,
}

impl Dfa {
    pub fn new(
        alphabet: Alphabet,
        states: usize,
        delta: Vec<usize>,
        initial: usize,
        finals: &[usize],
    ) -> Result<Dfa> {
        if states == 0 {
            return Err(Error::Precondition("a DFA needs at least one state".into()));
        }
        if delta.len() != states * alphabet.len() {
            return Err(Error::Precondition(format!(
                "transition table has {} entries, expected {}",
                delta.len(),
                states * alphabet.len()
            )));
        }
        for &q in delta.iter().chain([&initial]).chain(finals) {
            if q >= states {
                return Err(Error::IndexOutOfRange { index: q, size: states });
            }
        }
        let mut f = vec![false; states];
        for &q in finals {
            f[q] = true;
        }
        Ok(Dfa::from_parts(alphabet, delta, initial, f))
    }

    pub(crate) fn from_parts(alphabet: Alphabet, delta: Vec<usize>, initial: usize, finals: Vec<bool>) -> Dfa {
        Dfa {
            alphabet,
            delta,
            initial,
            finals,
        }
    }

    /// Builds a DFA from a transition function over states `0..states`.
    pub fn from_fn(
        alphabet: Alphabet,
        states: usize,
        initial: usize,
        step: impl Fn(usize, Letter) -> usize,
        accept: impl Fn(usize) -> bool,
    ) -> Dfa {
        let k = alphabet.len();
        let delta = (0..states * k).map(|i| step(i / k.max(1), i % k.max(1))).collect();
        let finals = (0..states).map(accept).collect();
        Dfa::from_parts(alphabet, delta, initial, finals)
    }

    pub fn empty(alphabet: Alphabet) -> Dfa {
        Dfa::from_fn(alphabet, 1, 0, |_, _| 0, |_| false)
    }

    pub fn universal(alphabet: Alphabet) -> Dfa {
        Dfa::from_fn(alphabet, 1, 0, |_, _| 0, |_| true)
    }

    /// The language `{w}`.
    pub fn word(alphabet: Alphabet, w: &[Letter]) -> Dfa {
        let n = w.len();
        let sink = n + 1;
        Dfa::from_fn(
            alphabet,
            n + 2,
            0,
            |q, a| if q < n && w[q] == a { q + 1 } else { sink },
            |q| q == n,
        )
    }

    pub fn epsilon(alphabet: Alphabet) -> Dfa {
        Dfa::word(alphabet, &[])
    }

    pub fn letter(alphabet: Alphabet, a: Letter) -> Dfa {
        Dfa::word(alphabet, &[a])
    }

    /// Words over the letters in `allowed`.
    pub fn letters_star(alphabet: Alphabet, allowed: &[Letter]) -> Dfa {
        let allowed = allowed.to_vec();
        Dfa::from_fn(alphabet, 2, 0, move |q, a| if q == 0 && allowed.contains(&a) { 0 } else { 1 }, |q| q == 0)
    }

    /// Compiles the minimal regex syntax: letters, `|`, `*`, parentheses and
    /// `()` for the empty word.
    pub fn from_regex(alphabet: &Alphabet, regex: &str) -> Result<Dfa> {
        Ok(parse_regex(alphabet, regex)?.determinize().minimize())
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.finals.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_final(&self, q: usize) -> bool {
        self.finals[q]
    }

    pub fn finals(&self) -> Vec<usize> {
        (0..self.num_states()).filter(|&q| self.finals[q]).collect()
    }

    pub fn step(&self, q: usize, a: Letter) -> usize {
        self.delta[q * self.alphabet.len() + a]
    }

    pub fn run_from(&self, q: usize, w: &[Letter]) -> usize {
        w.iter().fold(q, |q, &a| self.step(q, a))
    }

    pub fn run(&self, w: &[Letter]) -> usize {
        self.run_from(self.initial, w)
    }

    pub fn accepts(&self, w: &[Letter]) -> bool {
        self.finals[self.run(w)]
    }

    pub(crate) fn check_alphabet(&self, other: &Dfa) -> Result<()> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch(format!(
                "{:?} vs {:?}",
                self.alphabet.names(),
                other.alphabet.names()
            )));
        }
        Ok(())
    }

    pub fn complement(&self) -> Dfa {
        let mut d = self.clone();
        for f in &mut d.finals {
            *f = !*f;
        }
        d
    }

    fn product(&self, other: &Dfa, accept: impl Fn(bool, bool) -> bool) -> Result<Dfa> {
        self.check_alphabet(other)?;
        let k = self.alphabet.len();
        let start = (self.initial, other.initial);
        let mut index = HashMap::from([(start, 0usize)]);
        let mut pairs = vec![start];
        let mut delta = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (p, q) = pairs[i];
            for a in 0..k {
                let next = (self.step(p, a), other.step(q, a));
                let j = *index.entry(next).or_insert_with(|| {
                    pairs.push(next);
                    pairs.len() - 1
                });
                delta.push(j);
            }
            i += 1;
        }
        let finals = pairs
            .iter()
            .map(|&(p, q)| accept(self.finals[p], other.finals[q]))
            .collect();
        Ok(Dfa::from_parts(self.alphabet.clone(), delta, 0, finals))
    }

    pub fn union(&self, other: &Dfa) -> Result<Dfa> {
        self.product(other, |x, y| x || y)
    }

    pub fn intersect(&self, other: &Dfa) -> Result<Dfa> {
        self.product(other, |x, y| x && y)
    }

    pub fn difference(&self, other: &Dfa) -> Result<Dfa> {
        self.product(other, |x, y| x && !y)
    }

    pub fn symmetric_difference(&self, other: &Dfa) -> Result<Dfa> {
        self.product(other, |x, y| x != y)
    }

    /// `self · other` over finite words.
    pub fn concat_finite(&self, other: &Dfa) -> Result<Dfa> {
        self.check_alphabet(other)?;
        let mut n = Nfa::new(self.alphabet.clone());
        let (i1, f1) = n.embed(self);
        let (i2, f2) = n.embed(other);
        for f in f1 {
            n.eps[f].push(i2);
        }
        for f in f2 {
            n.finals[f] = true;
        }
        n.initial = i1;
        Ok(n.determinize().minimize())
    }

    /// Kleene star.
    pub fn star(&self) -> Dfa {
        let mut n = Nfa::from_dfa(self);
        let s = n.add_state();
        n.eps[s].push(n.initial);
        for q in 0..self.num_states() {
            if n.finals[q] {
                n.eps[q].push(s);
            }
        }
        n.finals[s] = true;
        n.initial = s;
        n.determinize().minimize()
    }

    /// `self^d`, with `self^0 = {ε}`.
    pub fn power(&self, d: usize) -> Dfa {
        let mut acc = Dfa::epsilon(self.alphabet.clone());
        for _ in 0..d {
            acc = acc.concat_finite(self).expect("same alphabet");
        }
        acc
    }

    /// States from which a final state is reachable.
    pub fn coreachable(&self) -> Vec<bool> {
        let n = self.num_states();
        let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n];
        for q in 0..n {
            for a in self.alphabet.letters() {
                rev[self.step(q, a)].push(q);
            }
        }
        let mut live = self.finals.clone();
        let mut stack: Vec<usize> = (0..n).filter(|&q| live[q]).collect();
        while let Some(q) = stack.pop() {
            for &p in &rev[q] {
                if !live[p] {
                    live[p] = true;
                    stack.push(p);
                }
            }
        }
        live
    }

    /// Prefixes of words in the language: same automaton, every live state final.
    pub fn left_factors(&self) -> Dfa {
        let mut d = self.clone();
        d.finals = self.coreachable();
        d
    }

    pub fn is_empty(&self) -> bool {
        self.example_word().is_none()
    }

    /// A shortest accepted word, least in length-lexicographic order.
    pub fn example_word(&self) -> Option<Word> {
        self.shortest_completion(self.initial)
    }

    /// A length-lexicographically least word leading from `start` to a final state.
    pub fn shortest_completion(&self, start: usize) -> Option<Word> {
        let n = self.num_states();
        let mut parent: Vec<Option<(usize, Letter)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(q) = queue.pop_front() {
            if self.finals[q] {
                let mut w = Vec::new();
                let mut cur = q;
                while let Some((p, a)) = parent[cur] {
                    w.push(a);
                    cur = p;
                }
                w.reverse();
                return Some(w);
            }
            for a in self.alphabet.letters() {
                let r = self.step(q, a);
                if !seen[r] {
                    seen[r] = true;
                    parent[r] = Some((q, a));
                    queue.push_back(r);
                }
            }
        }
        None
    }

    /// A shortest word on which the two automata disagree.
    pub fn distinguishing_word(&self, other: &Dfa) -> Result<Option<Word>> {
        Ok(self.symmetric_difference(other)?.example_word())
    }

    pub fn equivalent(&self, other: &Dfa) -> Result<bool> {
        Ok(self.distinguishing_word(other)?.is_none())
    }

    /// `self ⊆ other`.
    pub fn is_subset(&self, other: &Dfa) -> Result<bool> {
        Ok(self.difference(other)?.is_empty())
    }

    /// Minimal complete DFA, states numbered in BFS order from the initial
    /// state over the ordered alphabet.
    pub fn minimize(&self) -> Dfa {
        let k = self.alphabet.len();
        let n = self.num_states();
        let mut class: Vec<usize> = self.finals.iter().map(|&f| f as usize).collect();
        let mut count = 0;
        loop {
            let mut sigs: HashMap<Vec<usize>, usize> = HashMap::new();
            let mut next = vec![0; n];
            for q in 0..n {
                let mut sig = Vec::with_capacity(k + 1);
                sig.push(class[q]);
                sig.extend((0..k).map(|a| class[self.step(q, a)]));
                let len = sigs.len();
                next[q] = *sigs.entry(sig).or_insert(len);
            }
            let new_count = sigs.len();
            class = next;
            if new_count == count {
                break;
            }
            count = new_count;
        }
        // BFS renumbering over classes reachable from the initial state.
        let mut number: HashMap<usize, usize> = HashMap::from([(class[self.initial], 0)]);
        let mut reps = vec![self.initial];
        let mut delta = Vec::new();
        let mut i = 0;
        while i < reps.len() {
            let q = reps[i];
            for a in 0..k {
                let r = self.step(q, a);
                let len = number.len();
                let j = *number.entry(class[r]).or_insert_with(|| {
                    reps.push(r);
                    len
                });
                delta.push(j);
            }
            i += 1;
        }
        let finals = reps.iter().map(|&q| self.finals[q]).collect();
        Dfa::from_parts(self.alphabet.clone(), delta, 0, finals)
    }

    /// Same language over a larger alphabet whose names extend ours; new
    /// letters lead to a rejecting sink.
    pub fn over_alphabet(&self, target: &Alphabet) -> Result<Dfa> {
        let map: Vec<Option<Letter>> = target.names().iter().map(|n| self.alphabet.index(n)).collect();
        if self.alphabet.names().iter().any(|n| target.index(n).is_none()) {
            return Err(Error::AlphabetMismatch("target alphabet lacks letters".into()));
        }
        let sink = self.num_states();
        Ok(Dfa::from_fn(
            target.clone(),
            sink + 1,
            self.initial,
            |q, a| match map[a] {
                Some(b) if q < sink => self.step(q, b),
                _ => sink,
            },
            |q| q < sink && self.finals[q],
        ))
    }

    pub fn to_text(&self) -> String {
        let mut s = String::from("dfa\n");
        let _ = writeln!(s, "alphabet {}", self.alphabet.names().join(" "));
        let _ = writeln!(s, "states {}", self.num_states());
        let _ = writeln!(s, "initial {}", self.initial);
        let finals: Vec<String> = self.finals().iter().map(usize::to_string).collect();
        if finals.is_empty() {
            s.push_str("finals\n");
        } else {
            let _ = writeln!(s, "finals {}", finals.join(" "));
        }
        for q in 0..self.num_states() {
            for a in self.alphabet.letters() {
                let _ = writeln!(s, "trans {q} {} {}", self.alphabet.name(a), self.step(q, a));
            }
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Dfa> {
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
            Ok((no, parts.map(String::from).collect()))
        };
        let (no, rest) = expect("dfa")?;
        if !rest.is_empty() {
            return Err(parse_err(no, "unexpected tokens after `dfa`"));
        }
        let (no, names) = expect("alphabet")?;
        let alphabet = Alphabet::new(names).map_err(|e| parse_err(no, e.to_string()))?;
        let num = |no: usize, s: &str| -> Result<usize> {
            s.parse().map_err(|_| parse_err(no, format!("expected a number, got `{s}`")))
        };
        let (no, v) = expect("states")?;
        let states = match v.as_slice() {
            [s] => num(no, s)?,
            _ => return Err(parse_err(no, "`states` takes one number")),
        };
        if states == 0 {
            return Err(parse_err(no, "a DFA needs at least one state"));
        }
        let (no, v) = expect("initial")?;
        let initial = match v.as_slice() {
            [s] => num(no, s)?,
            _ => return Err(parse_err(no, "`initial` takes one state")),
        };
        if initial >= states {
            return Err(parse_err(no, "initial state out of range"));
        }
        let (no, v) = expect("finals")?;
        let mut finals = vec![false; states];
        for s in &v {
            let q = num(no, s)?;
            if q >= states {
                return Err(parse_err(no, format!("final state {q} out of range")));
            }
            finals[q] = true;
        }
        let k = alphabet.len();
        let mut delta: Vec<Option<usize>> = vec![None; states * k];
        loop {
            let (no, v) = match expect("trans") {
                Ok(x) => x,
                Err(Error::Parse { line: 0, .. }) => break,
                Err(e) => return Err(e),
            };
            let [from, letter, to] = v.as_slice() else {
                return Err(parse_err(no, "`trans` takes <from> <letter> <to>"));
            };
            let (from, to) = (num(no, from)?, num(no, to)?);
            if from >= states || to >= states {
                return Err(parse_err(no, "state out of range"));
            }
            let a = alphabet
                .index(letter)
                .ok_or_else(|| parse_err(no, format!("unknown letter `{letter}`")))?;
            if delta[from * k + a].replace(to).is_some() {
                return Err(parse_err(no, format!("duplicate transition from {from} on {letter}")));
            }
        }
        let delta = delta
            .into_iter()
            .enumerate()
            .map(|(i, t)| {
                t.ok_or_else(|| {
                    parse_err(
                        0,
                        format!("missing transition from {} on {}", i / k, alphabet.name(i % k)),
                    )
                })
            })
            .collect::<Result<Vec<usize>>>()?;
        Ok(Dfa::from_parts(alphabet, delta, initial, finals))
    }

    /// Monoid of state transformations generated by the letters.
    pub fn transition_monoid(&self, cap: usize) -> Result<TransitionMonoidResult> {
        let id: Vec<u32> = (0..self.num_states() as u32).collect();
        let en = enumerate_monoid(
            id,
            self.alphabet.len(),
            |t: &Vec<u32>, a| t.iter().map(|&q| self.step(q as usize, a) as u32).collect(),
            cap,
        )?;
        let hom = en.hom();
        let representatives = (0..en.monoid.size()).map(|x| en.representative(x)).collect();
        Ok(TransitionMonoidResult {
            monoid: en.monoid,
            hom,
            transformations: en.keys,
            representatives,
            initial: self.initial,
            finals: self.finals.clone(),
        })
    }

    /// Transition monoid of the minimal automaton.
    pub fn syntactic_monoid(&self, cap: usize) -> Result<TransitionMonoidResult> {
        self.minimize().transition_monoid(cap)
    }
}

/// The transition monoid of a DFA with its letter homomorphism.
#[derive(Clone, Debug)]
pub struct TransitionMonoidResult {
    pub monoid: Monoid,
    pub hom: MonoidHom,
    /// `transformations[x][q]` is the state reached from `q` by element `x`.
    pub transformations: Vec<Vec<u32>>,
    /// A shortest word for every element.
    pub representatives: Vec<Word>,
    initial: usize,
    finals: Vec<bool>,
}

impl TransitionMonoidResult {
    /// The elements `P` with `L = φ⁻¹(P)`.
    pub fn accepting_elements(&self) -> ElementSet {
        (0..self.monoid.size())
            .filter(|&x| self.finals[self.transformations[x][self.initial] as usize])
            .collect()
    }

    pub fn accepts_element(&self, x: Elem) -> bool {
        self.finals[self.transformations[x][self.initial] as usize]
    }
}

/// DFA for `φ⁻¹(P)` reading letters through the right Cayley graph of the
/// image of `φ`.
pub fn preimage_dfa(alphabet: &Alphabet, hom: &MonoidHom, accept: &ElementSet) -> Result<Dfa> {
    if hom.alphabet_size() != alphabet.len() {
        return Err(Error::AlphabetMismatch("homomorphism and alphabet sizes differ".into()));
    }
    let m = &hom.target;
    Ok(Dfa::from_fn(
        alphabet.clone(),
        m.size(),
        m.identity(),
        |x, a| m.mul(x, hom.letter_images[a]),
        |x| accept.contains(x),
    )
    .minimize())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::from_chars("ab")
    }

    fn parity() -> Dfa {
        Dfa::from_fn(ab(), 2, 0, |q, a| if a == 0 { 1 - q } else { q }, |q| q == 0)
    }

    #[test]
    fn minimal_parity_is_unchanged() {
        assert_eq!(parity().minimize(), parity());
    }

    #[test]
    fn ab_star_with_unreachable_state_minimizes_to_three_states() {
        // 0 -a-> 1 -b-> 0, everything else to 2; state 3 is unreachable.
        let d = Dfa::new(ab(), 4, vec![1, 2, 2, 0, 2, 2, 0, 3], 0, &[0, 3]).unwrap();
        let m = d.minimize();
        assert_eq!(m.num_states(), 3);
        assert!(m.accepts(&[0, 1, 0, 1]));
        assert!(!m.accepts(&[0]));
        assert!(m.equivalent(&d).unwrap());
    }

    #[test]
    fn redundant_universal_collapses() {
        let d = Dfa::from_fn(ab(), 4, 0, |q, a| (q + a + 1) % 4, |_| true);
        assert_eq!(d.minimize().num_states(), 1);
    }

    #[test]
    fn complement_of_ab_star_has_witness_a() {
        let d = Dfa::from_regex(&ab(), "(ab)*").unwrap();
        assert_eq!(d.complement().example_word(), Some(vec![0]));
        assert!(d.union(&Dfa::empty(ab())).unwrap().equivalent(&d).unwrap());
    }

    #[test]
    fn mismatched_alphabets_are_rejected() {
        let d = Dfa::empty(Alphabet::from_chars("a"));
        assert!(matches!(d.union(&parity()), Err(Error::AlphabetMismatch(_))));
    }

    #[test]
    fn concat_and_star() {
        let a = Dfa::letter(ab(), 0);
        let b = Dfa::letter(ab(), 1);
        let ab_ = a.concat_finite(&b).unwrap();
        assert!(ab_.accepts(&[0, 1]));
        assert!(!ab_.accepts(&[0]));
        let s = ab_.star();
        assert!(s.equivalent(&Dfa::from_regex(&ab(), "(ab)*").unwrap()).unwrap());
        assert!(ab_.power(0).accepts(&[]));
        assert!(ab_.power(2).accepts(&[0, 1, 0, 1]));
    }

    #[test]
    fn text_round_trip() {
        let d = Dfa::from_regex(&ab(), "a(b|a)*").unwrap();
        let back = Dfa::from_text(&d.to_text()).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn text_requires_total_transitions() {
        let text = "dfa\nalphabet a\nstates 2\ninitial 0\nfinals 1\ntrans 0 a 1\n";
        let err = Dfa::from_text(text).unwrap_err();
        assert!(err.to_string().contains("missing transition from 1 on a"), "{err}");
    }

    #[test]
    fn parity_transition_monoid_is_z2() {
        let t = parity().transition_monoid(100).unwrap();
        assert_eq!(t.monoid.size(), 2);
        assert!(t.monoid.is_group());
        assert_eq!(t.hom.letter_images, vec![1, 0]);
        assert_eq!(t.accepting_elements().as_slice(), &[0]);
    }

    #[test]
    fn one_state_dfa_gives_trivial_monoid() {
        assert_eq!(Dfa::universal(ab()).transition_monoid(10).unwrap().monoid.size(), 1);
    }

    #[test]
    fn ab_star_syntactic_monoid_is_aperiodic() {
        let t = Dfa::from_regex(&ab(), "(ab)*").unwrap().syntactic_monoid(100).unwrap();
        assert_eq!(t.monoid.size(), 6);
        assert!(t.monoid.is_aperiodic());
    }

    #[test]
    fn preimage_dfa_recovers_language() {
        let d = Dfa::from_regex(&ab(), "(ab)*").unwrap();
        let t = d.syntactic_monoid(100).unwrap();
        let back = preimage_dfa(&ab(), &t.hom, &t.accepting_elements()).unwrap();
        assert!(back.equivalent(&d).unwrap());
    }
}
