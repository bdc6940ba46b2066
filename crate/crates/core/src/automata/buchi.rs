use std::collections::VecDeque;
use std::fmt;

use super::{Alphabet, Dfa, Letter, Word};
use crate::error::{Error, Result};

/// The ultimately periodic word `u v v v ⋯`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LassoWord {
    pub prefix: Word,
    pub cycle: Word,
}

impl LassoWord {
    pub fn new(prefix: Word, cycle: Word) -> Result<LassoWord> {
        if cycle.is_empty() {
            return Err(Error::Precondition("lasso cycle must be non-empty".into()));
        }
        Ok(LassoWord { prefix, cycle })
    }

    /// Parses `u:v`, with `_` standing for an empty prefix.
    pub fn parse(alphabet: &Alphabet, s: &str) -> Result<LassoWord> {
        let (u, v) = s
            .trim()
            .split_once(':')
            .ok_or_else(|| Error::Precondition(format!("lasso `{s}` lacks `:`")))?;
        let u = if u == "_" { Vec::new() } else { alphabet.parse_word(u)? };
        LassoWord::new(u, alphabet.parse_word(v)?)
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> impl fmt::Display + 'a {
        struct D<'a>(&'a LassoWord, &'a Alphabet);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let u = self.1.format_word(&self.0.prefix);
                let u = if u.is_empty() { "_".to_string() } else { u };
                write!(f, "{u}:{}", self.1.format_word(&self.0.cycle))
            }
        }
        D(self, alphabet)
    }

    /// Letter at position `i` of the infinite word.
    pub fn letter_at(&self, i: usize) -> Letter {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// All lassos with `|u| + |v| ≤ bound` over `k` letters, shortest first.
    pub fn enumerate(k: usize, bound: usize) -> Vec<LassoWord> {
        let mut out = Vec::new();
        let words = all_words(k, bound);
        for total in 1..=bound {
            for u in words.iter().filter(|w| w.len() < total) {
                for v in words.iter().filter(|w| w.len() == total - u.len()) {
                    out.push(LassoWord {
                        prefix: u.clone(),
                        cycle: v.clone(),
                    });
                }
            }
        }
        out
    }
}

/// All words over `k` letters of length at most `max`, length-lexicographic.
pub fn all_words(k: usize, max: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    let mut start = 0;
    for _ in 0..max {
        let end = out.len();
        for i in start..end {
            for a in 0..k {
                let mut w = out[i].clone();
                w.push(a);
                out.push(w);
            }
        }
        start = end;
    }
    out
}

/// A nondeterministic Büchi automaton.
#[derive(Clone, Debug)]
pub struct BuchiAutomaton {
    alphabet: Alphabet,
    /// `trans[q][a]`, sorted successor lists.
    trans: Vec<Vec<Vec<usize>>>,
    initials: Vec<usize>,
    accepting: Vec<bool>,
}

impl BuchiAutomaton {
    pub fn new(
        alphabet: Alphabet,
        trans: Vec<Vec<Vec<usize>>>,
        initials: Vec<usize>,
        accepting: Vec<bool>,
    ) -> Result<BuchiAutomaton> {
        let n = trans.len();
        if accepting.len() != n || trans.iter().any(|row| row.len() != alphabet.len()) {
            return Err(Error::Precondition("malformed Büchi transition relation".into()));
        }
        for &q in trans.iter().flatten().flatten().chain(&initials) {
            if q >= n {
                return Err(Error::IndexOutOfRange { index: q, size: n });
            }
        }
        let mut b = BuchiAutomaton {
            alphabet,
            trans,
            initials,
            accepting,
        };
        b.normalize();
        Ok(b)
    }

    fn normalize(&mut self) {
        for row in self.trans.iter_mut().flatten() {
            row.sort_unstable();
            row.dedup();
        }
        self.initials.sort_unstable();
        self.initials.dedup();
    }

    pub fn empty(alphabet: Alphabet) -> BuchiAutomaton {
        BuchiAutomaton {
            alphabet,
            trans: Vec::new(),
            initials: Vec::new(),
            accepting: Vec::new(),
        }
    }

    pub fn universal(alphabet: Alphabet) -> BuchiAutomaton {
        let k = alphabet.len();
        BuchiAutomaton {
            alphabet,
            trans: vec![vec![vec![0]; k]],
            initials: vec![0],
            accepting: vec![true],
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.trans.len()
    }

    pub fn successors(&self, q: usize, a: Letter) -> &[usize] {
        &self.trans[q][a]
    }

    fn check_alphabet(&self, other: &Alphabet) -> Result<()> {
        if &self.alphabet != other {
            return Err(Error::AlphabetMismatch(format!(
                "{:?} vs {:?}",
                self.alphabet.names(),
                other.names()
            )));
        }
        Ok(())
    }

    /// The DFA read as a deterministic Büchi automaton: words with
    /// infinitely many prefixes in `L(l)`.
    pub fn from_dfa(l: &Dfa) -> BuchiAutomaton {
        let trans = (0..l.num_states())
            .map(|q| l.alphabet().letters().map(|a| vec![l.step(q, a)]).collect())
            .collect();
        let accepting = (0..l.num_states()).map(|q| l.is_final(q)).collect();
        BuchiAutomaton {
            alphabet: l.alphabet().clone(),
            trans,
            initials: vec![l.initial()],
            accepting,
        }
    }

    /// `(K ∖ {ε})^ω`: a fresh accepting state starts every block.
    pub fn omega_power(k: &Dfa) -> BuchiAutomaton {
        let n = k.num_states();
        let letters = k.alphabet().len();
        let start = n;
        let mut trans = vec![vec![Vec::new(); letters]; n + 1];
        for q in 0..n {
            for a in 0..letters {
                let r = k.step(q, a);
                trans[q][a].push(r);
                if k.is_final(r) {
                    trans[q][a].push(start);
                }
            }
        }
        let init = k.initial();
        for a in 0..letters {
            trans[start][a] = trans[init][a].clone();
        }
        let mut accepting = vec![false; n + 1];
        accepting[start] = true;
        let mut b = BuchiAutomaton {
            alphabet: k.alphabet().clone(),
            trans,
            initials: vec![start],
            accepting,
        };
        b.normalize();
        b.trim()
    }

    pub fn union(&self, other: &BuchiAutomaton) -> Result<BuchiAutomaton> {
        self.check_alphabet(&other.alphabet)?;
        let off = self.num_states();
        let mut trans = self.trans.clone();
        trans.extend(
            other
                .trans
                .iter()
                .map(|row| row.iter().map(|s| s.iter().map(|q| q + off).collect()).collect()),
        );
        let mut initials = self.initials.clone();
        initials.extend(other.initials.iter().map(|q| q + off));
        let mut accepting = self.accepting.clone();
        accepting.extend(&other.accepting);
        Ok(BuchiAutomaton {
            alphabet: self.alphabet.clone(),
            trans,
            initials,
            accepting,
        })
    }

    /// `L(finite) · L(b)`.
    pub fn concat(finite: &Dfa, b: &BuchiAutomaton) -> Result<BuchiAutomaton> {
        b.check_alphabet(finite.alphabet())?;
        let n = finite.num_states();
        let letters = b.alphabet.len();
        let mut trans: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); letters]; n];
        for q in 0..n {
            for a in 0..letters {
                trans[q][a].push(finite.step(q, a));
            }
        }
        trans.extend(
            b.trans
                .iter()
                .map(|row| row.iter().map(|s| s.iter().map(|q| q + n).collect()).collect()),
        );
        // Entering b after a finite prefix: copy the initial moves of b onto
        // every DFA state that is final.
        for q in 0..n {
            if finite.is_final(q) {
                for &i in &b.initials {
                    for a in 0..letters {
                        let targets: Vec<usize> = b.trans[i][a].iter().map(|r| r + n).collect();
                        trans[q][a].extend(targets);
                    }
                }
            }
        }
        let mut accepting = vec![false; n];
        accepting.extend(&b.accepting);
        let mut out = BuchiAutomaton {
            alphabet: b.alphabet.clone(),
            trans,
            initials: vec![finite.initial()],
            accepting,
        };
        out.normalize();
        Ok(out.trim())
    }

    /// Restricts to states reachable from an initial state.
    pub fn trim(&self) -> BuchiAutomaton {
        let n = self.num_states();
        let mut number = vec![usize::MAX; n];
        let mut order = Vec::new();
        let mut queue: VecDeque<usize> = VecDeque::new();
        for &i in &self.initials {
            if number[i] == usize::MAX {
                number[i] = order.len();
                order.push(i);
                queue.push_back(i);
            }
        }
        while let Some(q) = queue.pop_front() {
            for r in self.trans[q].iter().flatten() {
                if number[*r] == usize::MAX {
                    number[*r] = order.len();
                    order.push(*r);
                    queue.push_back(*r);
                }
            }
        }
        BuchiAutomaton {
            alphabet: self.alphabet.clone(),
            trans: order
                .iter()
                .map(|&q| {
                    self.trans[q]
                        .iter()
                        .map(|s| {
                            let mut v: Vec<usize> = s.iter().map(|&r| number[r]).collect();
                            v.sort_unstable();
                            v
                        })
                        .collect()
                })
                .collect(),
            initials: self.initials.iter().map(|&q| number[q]).collect(),
            accepting: order.iter().map(|&q| self.accepting[q]).collect(),
        }
    }

    /// True iff `u v^ω` is accepted: search for a reachable accepting node on
    /// a cycle of the product of the automaton with the lasso's positions.
    pub fn accepts(&self, w: &LassoWord) -> bool {
        let (lu, lv) = (w.prefix.len(), w.cycle.len());
        let positions = lu + lv;
        let node = |q: usize, p: usize| q * positions + p;
        let next_pos = |p: usize| if p + 1 < positions { p + 1 } else { lu };
        let total = self.num_states() * positions;
        let succ = |x: usize| -> Vec<usize> {
            let (q, p) = (x / positions, x % positions);
            let a = w.letter_at(p);
            self.trans[q][a].iter().map(|&r| node(r, next_pos(p))).collect()
        };
        let starts: Vec<usize> = self.initials.iter().map(|&q| node(q, 0)).collect();
        let accepting = |x: usize| self.accepting[x / positions] && x % positions >= lu;
        accepting_cycle(total, &starts, succ, accepting)
    }

    /// An accepted lasso, if the language is non-empty.
    pub fn find_accepted(&self) -> Option<LassoWord> {
        let n = self.num_states();
        let letters = self.alphabet.len();
        let edges = |q: usize| -> Vec<(usize, Letter)> {
            (0..letters)
                .flat_map(|a| self.trans[q][a].iter().map(move |&r| (r, a)))
                .collect()
        };
        let scc = tarjan(n, &self.initials, |q| edges(q).into_iter().map(|e| e.0).collect());
        let target = (0..n).find(|&q| self.accepting[q] && scc.on_cycle[q])?;
        // BFS over records (state, parent record, letter) so that a cycle
        // back to the source is reconstructed without clobbering parents.
        let path = |from: &[usize], to: usize, nonempty: bool| -> Option<Word> {
            let mut records: Vec<(usize, usize, Letter)> = Vec::new();
            let mut seen = vec![false; n];
            let mut queue = VecDeque::new();
            for &s in from {
                if nonempty {
                    for (r, a) in edges(s) {
                        if !seen[r] {
                            seen[r] = true;
                            records.push((r, usize::MAX, a));
                            queue.push_back(records.len() - 1);
                        }
                    }
                } else if !seen[s] {
                    seen[s] = true;
                    records.push((s, usize::MAX, usize::MAX));
                    queue.push_back(records.len() - 1);
                }
            }
            while let Some(i) = queue.pop_front() {
                let q = records[i].0;
                if q == to {
                    let mut w = Vec::new();
                    let mut cur = i;
                    while cur != usize::MAX {
                        let (_, p, a) = records[cur];
                        if a != usize::MAX {
                            w.push(a);
                        }
                        cur = p;
                    }
                    w.reverse();
                    return Some(w);
                }
                for (r, a) in edges(q) {
                    if !seen[r] {
                        seen[r] = true;
                        records.push((r, i, a));
                        queue.push_back(records.len() - 1);
                    }
                }
            }
            None
        };
        let u = path(&self.initials, target, false)?;
        let v = path(&[target], target, true)?;
        Some(LassoWord { prefix: u, cycle: v })
    }
}

struct SccInfo {
    on_cycle: Vec<bool>,
}

/// Iterative Tarjan restricted to nodes reachable from `starts`; marks nodes
/// lying on some cycle.
fn tarjan(n: usize, starts: &[usize], succ: impl Fn(usize) -> Vec<usize>) -> SccInfo {
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut on_cycle = vec![false; n];
    let mut counter = 0;
    let mut self_loop = vec![false; n];
    for &s in starts {
        if index[s] != UNSEEN {
            continue;
        }
        let mut call: Vec<(usize, Vec<usize>, usize)> = Vec::new();
        index[s] = counter;
        low[s] = counter;
        counter += 1;
        stack.push(s);
        on_stack[s] = true;
        let ss = succ(s);
        call.push((s, ss, 0));
        while let Some((v, succs, i)) = call.last_mut() {
            let v = *v;
            if *i < succs.len() {
                let w = succs[*i];
                *i += 1;
                if w == v {
                    self_loop[v] = true;
                }
                if index[w] == UNSEEN {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    let ws = succ(w);
                    call.push((w, ws, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some((p, _, _)) = call.last() {
                    low[*p] = low[*p].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    let cyclic = comp.len() > 1 || self_loop[v];
                    for w in comp {
                        on_cycle[w] = cyclic;
                    }
                }
            }
        }
    }
    SccInfo { on_cycle }
}

fn accepting_cycle(
    n: usize,
    starts: &[usize],
    succ: impl Fn(usize) -> Vec<usize>,
    accepting: impl Fn(usize) -> bool,
) -> bool {
    let info = tarjan(n, starts, succ);
    (0..n).any(|x| info.on_cycle[x] && accepting(x))
}

/// Whether infinitely many prefixes of `w` lie in `L(l)`.
pub fn arrow_membership(l: &Dfa, w: &LassoWord) -> bool {
    let mut starts = vec![l.run(&w.prefix)];
    loop {
        let s = *starts.last().expect("non-empty");
        let next = l.run_from(s, &w.cycle);
        if let Some(i) = starts.iter().position(|&t| t == next) {
            return starts[i..].iter().any(|&s| {
                let mut q = s;
                w.cycle.iter().any(|&a| {
                    q = l.step(q, a);
                    l.is_final(q)
                })
            });
        }
        starts.push(next);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::from_chars("ab")
    }

    fn lasso(s: &str) -> LassoWord {
        LassoWord::parse(&ab(), s).unwrap()
    }

    #[test]
    fn lasso_literal_round_trips() {
        let w = lasso("_:ab");
        assert_eq!(w.prefix, Vec::<usize>::new());
        assert_eq!(w.display(&ab()).to_string(), "_:ab");
        assert!(LassoWord::parse(&ab(), "a:").is_err());
    }

    #[test]
    fn omega_power_of_single_letter() {
        let b = BuchiAutomaton::omega_power(&Dfa::letter(ab(), 0));
        assert!(b.accepts(&lasso("_:a")));
        assert!(!b.accepts(&lasso("_:ab")));
    }

    #[test]
    fn omega_power_of_ab() {
        let b = BuchiAutomaton::omega_power(&Dfa::from_regex(&ab(), "ab").unwrap());
        assert!(b.accepts(&lasso("_:ab")));
        assert!(b.accepts(&lasso("ab:ab")));
        assert!(!b.accepts(&lasso("_:aab")));
        assert!(b.accepts(&lasso("a:ba")));
        assert!(!b.accepts(&lasso("b:ab")));
    }

    #[test]
    fn omega_power_strips_empty_word() {
        let k = Dfa::from_regex(&ab(), "a*").unwrap();
        let b = BuchiAutomaton::omega_power(&k);
        assert!(b.accepts(&lasso("_:a")));
        assert!(!b.accepts(&lasso("a:b")));
    }

    #[test]
    fn concat_with_finite_prefix() {
        let b_omega = BuchiAutomaton::omega_power(&Dfa::letter(ab(), 1));
        let c = BuchiAutomaton::concat(&Dfa::from_regex(&ab(), "a*").unwrap(), &b_omega).unwrap();
        assert!(c.accepts(&lasso("aa:b")));
        assert!(c.accepts(&lasso("_:b")));
        assert!(!c.accepts(&lasso("aba:b")));
        assert!(b_omega.accepts(&lasso("b:b")));
        assert!(!b_omega.accepts(&lasso("a:b")));
        assert!(!b_omega.accepts(&lasso("_:ab")));
    }

    #[test]
    fn universal_and_empty() {
        for w in LassoWord::enumerate(2, 4) {
            assert!(BuchiAutomaton::universal(ab()).accepts(&w));
            assert!(!BuchiAutomaton::empty(ab()).accepts(&w));
        }
    }

    #[test]
    fn find_accepted_returns_member() {
        let k = Dfa::from_regex(&ab(), "abb").unwrap();
        let b = BuchiAutomaton::concat(
            &Dfa::from_regex(&ab(), "b").unwrap(),
            &BuchiAutomaton::omega_power(&k),
        )
        .unwrap();
        let w = b.find_accepted().unwrap();
        assert!(b.accepts(&w));
        assert!(BuchiAutomaton::empty(ab()).find_accepted().is_none());
    }

    #[test]
    fn arrow_language_of_ab_star() {
        let l = Dfa::from_regex(&ab(), "(ab)*").unwrap();
        assert!(arrow_membership(&l, &lasso("_:ab")));
        assert!(!arrow_membership(&l, &lasso("a:ab")));
        assert!(!arrow_membership(&Dfa::empty(ab()), &lasso("_:a")));
        assert!(arrow_membership(&Dfa::universal(ab()), &lasso("b:a")));
    }

    #[test]
    fn dfa_reading_matches_arrow_membership() {
        let l = Dfa::from_regex(&ab(), "(ab)*|b*a").unwrap();
        let b = BuchiAutomaton::from_dfa(&l);
        for w in LassoWord::enumerate(2, 6) {
            assert_eq!(b.accepts(&w), arrow_membership(&l, &w), "{}", w.display(&ab()));
        }
    }

    #[test]
    fn enumeration_counts() {
        // Over two letters, pairs (u, v) with |v| ≥ 1 and |u|+|v| = t number t·2^t.
        let n: usize = (1..=3).map(|t| t * (1 << t)).sum();
        assert_eq!(LassoWord::enumerate(2, 3).len(), n);
    }
}
