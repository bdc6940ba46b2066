use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::coset::{eliminate_cosets_all, sigma_preimage_all, union_of};
use super::synth::{check_precondition, merge, reps, restrict, split, top_letters, Lt, Synth};
use super::{compile_omega, GroupRef, Node, SdExpr};
use crate::automata::{Alphabet, BuchiAutomaton, LassoWord, Word};
use crate::error::{Error, Result};
use crate::monoid::{Elem, Limits, Monoid, MonoidHom};

/// `L₀ ∪ ⋃ᵢ Lᵢ·γᵢ⁻¹(1)^ω`.
#[derive(Debug, Clone, PartialEq)]
pub struct OmegaNormalForm {
    /// Finite words; always empty for an ω-language.
    pub l0: SdExpr,
    /// `(Lᵢ, ω-power node)`.
    pub summands: Vec<(SdExpr, SdExpr)>,
}

impl OmegaNormalForm {
    /// The normal form as one expression.
    pub fn to_expr(&self) -> SdExpr {
        let mut terms = vec![self.l0.clone()];
        terms.extend(
            self.summands
                .iter()
                .map(|(l, w)| if l.is_epsilon() { w.clone() } else { SdExpr::concat(l.clone(), w.clone()) }),
        );
        union_of(terms)
    }

    pub fn compile(&self, alphabet: &Alphabet) -> Result<BuchiAutomaton> {
        compile_omega(&self.to_expr(), alphabet)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OmegaOptions {
    pub seed: u64,
    /// Lassos with `|u| + |v|` up to this bound are used by the sampler.
    pub sample_bound: usize,
    /// Additional random lassos for the sampler.
    pub random_samples: usize,
}

impl Default for OmegaOptions {
    fn default() -> Self {
        OmegaOptions {
            seed: 0,
            sample_bound: 6,
            random_samples: 200,
        }
    }
}

/// A set of ω-words of one factorization type, with a lasso in it.
#[derive(Debug, Clone)]
struct Member {
    summands: Vec<(SdExpr, SdExpr)>,
    prefix: Word,
    cycle: Word,
}

impl Synth<'_> {
    /// Members covering every ω-word over `letters`.
    fn family(&self, m: &Monoid, letters: Vec<Lt>) -> Result<Vec<Member>> {
        let letters = merge(letters);
        if letters.is_empty() {
            return Ok(Vec::new());
        }
        let image = m.submonoid_generated(letters.iter().map(|l| l.value));
        if image.len() < m.size() {
            let (sub, map) = m.submonoid(&image)?;
            return self.family(&sub, restrict(&map, letters));
        }
        if m.is_group() {
            return self.group_family(&letters, m);
        }
        let sp = split(m, &letters);
        let c = &sp.c;
        let local = &sp.local;
        let fb = self.run(m, sp.b.clone())?;
        let ft = self.run(&local.monoid, sp.t_letters.clone())?;
        let t_reps = reps(&local.monoid, &sp.t_letters);
        let expansion: Vec<SdExpr> = sp
            .t
            .iter()
            .map(|&x| SdExpr::concat(fb[x].clone(), c.expr.clone()))
            .collect();
        let pulled = sigma_preimage_all(&ft, &expansion)?;

        // `blocks[x]`: words in `{1} ∪ A*c` of value `x`.
        let mut blocks: Vec<Vec<SdExpr>> = vec![Vec::new(); m.size()];
        let mut block_reps: Vec<Option<Word>> = vec![None; m.size()];
        blocks[m.identity()].push(SdExpr::epsilon());
        block_reps[m.identity()] = Some(Word::new());
        for (p, e) in pulled.iter().enumerate() {
            if e.is_empty_node() {
                continue;
            }
            let cb = SdExpr::concat(c.expr.clone(), e.clone());
            for &m1 in &sp.t {
                if fb[m1].is_empty_node() {
                    continue;
                }
                let x = m.mul(m1, local.to_parent(p));
                blocks[x].push(SdExpr::concat(fb[m1].clone(), cb.clone()));
                if block_reps[x].is_none() {
                    let mut w = sp.b_reps[m1].clone().expect("m1 ∈ T");
                    w.extend_from_slice(&c.rep);
                    w.extend(t_reps[p].iter().flatten());
                    block_reps[x] = Some(w);
                }
            }
        }

        let mut out = Vec::new();
        // Finitely many c: a block, then a word over B.
        let fam_b = self.family(m, sp.b.clone())?;
        for (x, terms) in blocks.into_iter().enumerate() {
            if terms.is_empty() {
                continue;
            }
            let block = union_of(terms);
            let rep = block_reps[x].clone().expect("non-empty block");
            for mem in &fam_b {
                out.push(Member {
                    summands: mem
                        .summands
                        .iter()
                        .map(|(l, w)| (cat(&block, l), w.clone()))
                        .collect(),
                    prefix: [rep.as_slice(), &mem.prefix].concat(),
                    cycle: mem.cycle.clone(),
                });
            }
        }
        // Infinitely many c: a word over B, then c, then σ⁻¹ of a T-word.
        let fam_t = self.family(&local.monoid, sp.t_letters.clone())?;
        for mem in fam_t {
            let roots: Vec<SdExpr> = mem.summands.iter().flat_map(|(l, w)| [l.clone(), w.clone()]).collect();
            let pulled = sigma_preimage_all(&roots, &expansion)?;
            for &m1 in &sp.t {
                if fb[m1].is_empty_node() {
                    continue;
                }
                let head = SdExpr::concat(fb[m1].clone(), c.expr.clone());
                out.push(Member {
                    summands: pulled
                        .chunks(2)
                        .map(|p| (cat(&head, &p[0]), p[1].clone()))
                        .collect(),
                    prefix: [sp.b_reps[m1].as_deref().expect("m1 ∈ T"), &c.rep, &mem.prefix].concat(),
                    cycle: mem.cycle.clone(),
                });
            }
        }
        Ok(out)
    }

    /// One member `ψ⁻¹(x)·ψ⁻¹(1)^ω` per label `x` of the covering subgroup.
    fn group_family(&self, letters: &[Lt], m: &Monoid) -> Result<Vec<Member>> {
        let labels = self.labels(m, letters)?;
        let g = self.group.table();
        let labelled: Vec<Lt> = labels
            .node
            .pieces
            .iter()
            .zip(letters)
            .map(|((x, _), l)| Lt {
                value: *x,
                ..l.clone()
            })
            .collect();
        let g_reps = reps(g, &labelled);
        let first = &labelled[0];
        let order = (1..=g.size())
            .find(|&k| g.pow(first.value, k) == g.identity())
            .expect("finite group");
        let cycle: Word = first.rep.repeat(order);
        let omega = SdExpr::new(Node::Omega(labels.node.clone()));
        Ok(labels
            .sub
            .iter()
            .filter(|&&x| g_reps[x].is_some())
            .map(|&x| {
                let l = if x == g.identity() {
                    SdExpr::epsilon()
                } else {
                    SdExpr::new(Node::StarCoset(labels.node.clone(), x))
                };
                Member {
                    summands: vec![(l, omega.clone())],
                    prefix: g_reps[x].clone().expect("filtered"),
                    cycle: cycle.clone(),
                }
            })
            .collect())
    }
}

fn cat(l: &SdExpr, r: &SdExpr) -> SdExpr {
    if l.is_epsilon() {
        r.clone()
    } else if r.is_epsilon() {
        l.clone()
    } else {
        SdExpr::concat(l.clone(), r.clone())
    }
}

/// Shortest nonempty word of every value reachable by a nonempty word.
fn nonempty_reps(phi: &MonoidHom) -> Vec<Option<Word>> {
    let m = &phi.target;
    let mut out: Vec<Option<Word>> = vec![None; m.size()];
    let mut queue = std::collections::VecDeque::new();
    for a in 0..phi.alphabet_size() {
        let x = phi.letter_images[a];
        if out[x].is_none() {
            out[x] = Some(vec![a]);
            queue.push_back(x);
        }
    }
    while let Some(x) = queue.pop_front() {
        for a in 0..phi.alphabet_size() {
            let y = m.mul(x, phi.letter_images[a]);
            if out[y].is_none() {
                let mut w = out[x].clone().expect("visited");
                w.push(a);
                out[y] = Some(w);
                queue.push_back(y);
            }
        }
    }
    out
}

/// Lassos with `|u| + |v| ≤ bound` followed by `random` seeded ones.
pub(crate) fn sample_lassos(k: usize, bound: usize, random: usize, seed: u64) -> Vec<LassoWord> {
    let mut out = LassoWord::enumerate(k, bound);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..random {
        let pl = rng.gen_range(0..=bound + 4);
        let cl = rng.gen_range(1..=bound + 4);
        let prefix = (0..pl).map(|_| rng.gen_range(0..k)).collect();
        let cycle = (0..cl).map(|_| rng.gen_range(0..k)).collect();
        out.push(LassoWord::new(prefix, cycle).expect("nonempty cycle"));
    }
    out
}

/// Replaces prefix and cycle of sampled lassos by other words with the same
/// values and reports a lasso whose membership changes.
fn recognizability_counterexample(
    phi: &MonoidHom,
    b: &BuchiAutomaton,
    opts: &OmegaOptions,
) -> Option<(LassoWord, LassoWord)> {
    let nonempty = nonempty_reps(phi);
    let empty_or = |x: Elem| {
        if x == phi.target.identity() {
            Some(Word::new())
        } else {
            nonempty[x].clone()
        }
    };
    let k = phi.alphabet_size();
    for w in sample_lassos(k, opts.sample_bound, opts.random_samples, opts.seed) {
        let u = empty_or(phi.eval(&w.prefix)).expect("reachable");
        let v = nonempty[phi.eval(&w.cycle)].clone().expect("reachable");
        let other = LassoWord::new(u, v).expect("nonempty cycle");
        if b.accepts(&w) != b.accepts(&other) {
            return Some((w, other));
        }
    }
    None
}

/// A normal form over `G` for the ω-language of `b`, which must be
/// recognized by `φ`. Recognizability is sampled, not decided.
pub fn synthesize_omega(
    phi: &MonoidHom,
    group: &GroupRef,
    b: &BuchiAutomaton,
    opts: &OmegaOptions,
) -> Result<OmegaNormalForm> {
    if b.alphabet().len() != phi.alphabet_size() {
        return Err(Error::AlphabetMismatch(format!(
            "automaton has {} letters, homomorphism {}",
            b.alphabet().len(),
            phi.alphabet_size()
        )));
    }
    let cap = Limits::default().group_cap;
    check_precondition(phi, group, cap)?;
    if let Some((w, other)) = recognizability_counterexample(phi, b, opts) {
        let a = b.alphabet();
        return Err(Error::NotRecognized(format!(
            "{} and {} have equal values but only one is accepted",
            w.display(a),
            other.display(a)
        )));
    }
    let synth = Synth { group, group_cap: cap };
    let family = synth.family(&phi.target, top_letters(phi))?;
    let selected: Vec<(SdExpr, SdExpr)> = family
        .into_iter()
        .filter(|mem| b.accepts(&LassoWord::new(mem.prefix.clone(), mem.cycle.clone()).expect("nonempty cycle")))
        .flat_map(|mem| mem.summands)
        .collect();
    let roots: Vec<SdExpr> = selected.iter().flat_map(|(l, w)| [l.clone(), w.clone()]).collect();
    let clean = SdExpr::simplify_all(&eliminate_cosets_all(&roots)?);
    let mut summands: Vec<(SdExpr, SdExpr)> = Vec::new();
    for p in clean.chunks(2) {
        if p[0].is_empty_node() || p[1].is_empty_node() {
            continue;
        }
        if !summands.iter().any(|(l, w)| l.id() == p[0].id() && w.id() == p[1].id()) {
            summands.push((p[0].clone(), p[1].clone()));
        }
    }
    Ok(OmegaNormalForm {
        l0: SdExpr::empty(),
        summands,
    })
}

/// Lassos on which two automata disagree.
pub fn lasso_mismatches(
    a: &BuchiAutomaton,
    b: &BuchiAutomaton,
    bound: usize,
    random: usize,
    seed: u64,
) -> Vec<LassoWord> {
    sample_lassos(a.alphabet().len(), bound, random, seed)
        .into_iter()
        .filter(|w| a.accepts(w) != b.accepts(w))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::Dfa;

    #[test]
    fn a_omega_over_the_trivial_monoid() {
        let a = Alphabet::from_chars("a");
        let phi = MonoidHom::new(Monoid::trivial(), vec![0]).unwrap();
        let b = BuchiAutomaton::universal(a.clone());
        let nf = synthesize_omega(&phi, &GroupRef::trivial(), &b, &OmegaOptions::default()).unwrap();
        assert!(nf.l0.is_empty_node());
        assert_eq!(nf.summands.len(), 1);
        assert!(nf.summands[0].0.is_epsilon());
        assert!(matches!(nf.summands[0].1.node(), Node::Omega(_)));
        assert!(lasso_mismatches(&nf.compile(&a).unwrap(), &b, 6, 50, 1).is_empty());
    }

    #[test]
    fn finitely_many_b() {
        let ab = Alphabet::from_chars("ab");
        // Eventually only a: (a|b)*·a^ω.
        let a_star = Dfa::from_regex(&ab, "a*").unwrap();
        let b = BuchiAutomaton::concat(
            &Dfa::universal(ab.clone()),
            &BuchiAutomaton::omega_power(&Dfa::letter(ab.clone(), 0)),
        )
        .unwrap();
        let synt = a_star.syntactic_monoid(100).unwrap();
        let nf = synthesize_omega(&synt.hom, &GroupRef::trivial(), &b, &OmegaOptions::default()).unwrap();
        assert!(lasso_mismatches(&nf.compile(&ab).unwrap(), &b, 8, 300, 2).is_empty());
    }

    #[test]
    fn non_recognized_language_is_rejected() {
        let ab = Alphabet::from_chars("ab");
        // (ab)^ω is not saturated by the trivial homomorphism.
        let b = BuchiAutomaton::omega_power(&Dfa::from_regex(&ab, "ab").unwrap());
        let phi = MonoidHom::new(Monoid::trivial(), vec![0, 0]).unwrap();
        let err = synthesize_omega(&phi, &GroupRef::trivial(), &b, &OmegaOptions::default()).unwrap_err();
        assert!(matches!(err, Error::NotRecognized(_)));
    }

    #[test]
    fn even_then_only_b() {
        let ab = Alphabet::from_chars("ab");
        // Finitely many a, an even number of them.
        let even = Dfa::from_regex(&ab, "(b|ab*a)*").unwrap();
        let b = BuchiAutomaton::concat(&even, &BuchiAutomaton::omega_power(&Dfa::letter(ab.clone(), 1))).unwrap();
        // State: parity of a, and whether an a was read.
        let track = Dfa::from_fn(ab.clone(), 4, 0, |q, x| if x == 0 { (q ^ 1) | 2 } else { q }, |q| q == 0);
        let phi = track.transition_monoid(100).unwrap().hom;
        assert_eq!(phi.target.size(), 3);
        let nf = synthesize_omega(&phi, &GroupRef::cyclic(2).unwrap(), &b, &OmegaOptions::default()).unwrap();
        assert!(lasso_mismatches(&nf.compile(&ab).unwrap(), &b, 8, 300, 3).is_empty());
    }
}
