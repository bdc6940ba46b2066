//! Nondeterministic automata with ε-moves, used only as an intermediate for
//! concatenation, star and the small regex syntax.

use std::collections::{BTreeSet, HashMap, VecDeque};

use super::{Alphabet, Dfa, Letter};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub(crate) struct Nfa {
    pub alphabet: Alphabet,
    /// `trans[q][a]` successors of `q` on letter `a`.
    pub trans: Vec<Vec<Vec<usize>>>,
    pub eps: Vec<Vec<usize>>,
    pub initial: usize,
    pub finals: Vec<bool>,
}

impl Nfa {
    pub fn new(alphabet: Alphabet) -> Nfa {
        Nfa {
            alphabet,
            trans: Vec::new(),
            eps: Vec::new(),
            initial: 0,
            finals: Vec::new(),
        }
    }

    pub fn add_state(&mut self) -> usize {
        self.trans.push(vec![Vec::new(); self.alphabet.len()]);
        self.eps.push(Vec::new());
        self.finals.push(false);
        self.trans.len() - 1
    }

    /// Copies a DFA in, returning (initial, finals) of the copy.
    pub fn embed(&mut self, d: &Dfa) -> (usize, Vec<usize>) {
        let base = self.trans.len();
        for _ in 0..d.num_states() {
            self.add_state();
        }
        for q in 0..d.num_states() {
            for a in d.alphabet().letters() {
                self.trans[base + q][a].push(base + d.step(q, a));
            }
        }
        let finals = (0..d.num_states())
            .filter(|&q| d.is_final(q))
            .map(|q| base + q)
            .collect();
        (base + d.initial(), finals)
    }

    pub fn from_dfa(d: &Dfa) -> Nfa {
        let mut n = Nfa::new(d.alphabet().clone());
        let (init, finals) = n.embed(d);
        n.initial = init;
        for f in finals {
            n.finals[f] = true;
        }
        n
    }

    fn closure(&self, set: &mut BTreeSet<usize>) {
        let mut stack: Vec<usize> = set.iter().copied().collect();
        while let Some(q) = stack.pop() {
            for &r in &self.eps[q] {
                if set.insert(r) {
                    stack.push(r);
                }
            }
        }
    }

    /// Subset construction; the result is complete but not minimized.
    pub fn determinize(&self) -> Dfa {
        let k = self.alphabet.len();
        let mut start = BTreeSet::from([self.initial]);
        self.closure(&mut start);
        let mut index: HashMap<BTreeSet<usize>, usize> = HashMap::from([(start.clone(), 0)]);
        let mut sets = vec![start];
        let mut delta = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for a in 0..k {
                let mut next = BTreeSet::new();
                for &q in &sets[i] {
                    next.extend(self.trans[q][a].iter().copied());
                }
                self.closure(&mut next);
                let j = match index.get(&next) {
                    Some(&j) => j,
                    None => {
                        let j = sets.len();
                        index.insert(next.clone(), j);
                        sets.push(next);
                        queue.push_back(j);
                        j
                    }
                };
                delta.push(j);
            }
        }
        let finals = sets
            .iter()
            .map(|s| s.iter().any(|&q| self.finals[q]))
            .collect();
        Dfa::from_parts(self.alphabet.clone(), delta, 0, finals)
    }
}

/// Parses a small regular-expression syntax over single-character letters:
/// juxtaposition, `|`, postfix `*`, parentheses, and `()` for the empty word.
pub(crate) fn parse_regex(alphabet: &Alphabet, src: &str) -> Result<Nfa> {
    let chars: Vec<char> = src.chars().filter(|c| !c.is_whitespace()).collect();
    let mut p = RegexParser {
        alphabet,
        chars,
        pos: 0,
        nfa: Nfa::new(alphabet.clone()),
    };
    let (s, f) = p.union()?;
    if p.pos != p.chars.len() {
        return Err(Error::Precondition(format!(
            "unexpected `{}` at position {} in regex",
            p.chars[p.pos], p.pos
        )));
    }
    p.nfa.initial = s;
    p.nfa.finals[f] = true;
    Ok(p.nfa)
}

struct RegexParser<'a> {
    alphabet: &'a Alphabet,
    chars: Vec<char>,
    pos: usize,
    nfa: Nfa,
}

impl RegexParser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn fragment_eps(&mut self) -> (usize, usize) {
        let s = self.nfa.add_state();
        let f = self.nfa.add_state();
        self.nfa.eps[s].push(f);
        (s, f)
    }

    fn union(&mut self) -> Result<(usize, usize)> {
        let mut branches = vec![self.concat()?];
        while self.peek() == Some('|') {
            self.pos += 1;
            branches.push(self.concat()?);
        }
        if branches.len() == 1 {
            return Ok(branches[0]);
        }
        let s = self.nfa.add_state();
        let f = self.nfa.add_state();
        for (bs, bf) in branches {
            self.nfa.eps[s].push(bs);
            self.nfa.eps[bf].push(f);
        }
        Ok((s, f))
    }

    fn concat(&mut self) -> Result<(usize, usize)> {
        let mut parts = Vec::new();
        while let Some(c) = self.peek() {
            if c == '|' || c == ')' {
                break;
            }
            parts.push(self.starred()?);
        }
        let Some(&first) = parts.first() else {
            return Ok(self.fragment_eps());
        };
        let mut end = first.1;
        for &(s, f) in &parts[1..] {
            self.nfa.eps[end].push(s);
            end = f;
        }
        Ok((first.0, end))
    }

    fn starred(&mut self) -> Result<(usize, usize)> {
        let (mut s, mut f) = self.atom()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            let ns = self.nfa.add_state();
            let nf = self.nfa.add_state();
            self.nfa.eps[ns].extend([s, nf]);
            self.nfa.eps[f].extend([s, nf]);
            s = ns;
            f = nf;
        }
        Ok((s, f))
    }

    fn atom(&mut self) -> Result<(usize, usize)> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let frag = self.union()?;
                if self.peek() != Some(')') {
                    return Err(Error::Precondition("unbalanced parenthesis in regex".into()));
                }
                self.pos += 1;
                Ok(frag)
            }
            Some(c) => {
                let mut buf = [0u8; 4];
                let a: Letter = self
                    .alphabet
                    .index(c.encode_utf8(&mut buf))
                    .ok_or_else(|| Error::AlphabetMismatch(format!("letter `{c}` not in alphabet")))?;
                self.pos += 1;
                let s = self.nfa.add_state();
                let f = self.nfa.add_state();
                self.nfa.trans[s][a].push(f);
                Ok((s, f))
            }
            None => Err(Error::Precondition("unexpected end of regex".into())),
        }
    }
}
