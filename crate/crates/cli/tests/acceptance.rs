//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails. Criterion 9 reruns 1 to 8 and compares
//! the reports byte for byte.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use syncdelay::automata::{all_words, arrow_membership, preimage_dfa, Alphabet, BuchiAutomaton, Dfa, LassoWord, Word};
use syncdelay::codes::min_sync_delay;
use syncdelay::constructions::{birget_rhodes_full, birget_rhodes_reachable, local_rees, schutzenberger_product};
use syncdelay::decompose::{decompose, minimal_generating_set, verify_tree};
use syncdelay::example14;
use syncdelay::groups::{embeds_into_monoid, group_divides};
use syncdelay::sdexpr::{compile_finite, parse_sexp, synthesize_all, synthesize_omega, validate, GroupRef, OmegaOptions, SdExpr};
use syncdelay::varieties::{group_in_variety, monoid_in_hbar, VarietySpec};
use syncdelay::{ElementSet, Group, Monoid, MonoidHom};

const SEED: u64 = 0;
const CAP: usize = 20_000;
/// Confirmed by `oracle_syntactic_size` before being written down.
const EXAMPLE14_SIZE: usize = 15;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(SEED);
    r.set_stream(stream);
    r
}

fn ab() -> Alphabet {
    Alphabet::from_chars("ab")
}

// ---------------------------------------------------------------- oracles

/// Size of the syntactic monoid by pair-marking minimization and closure of
/// the letter transformations on the state classes.
fn oracle_syntactic_size(d: &Dfa) -> usize {
    let k = d.alphabet().len();
    let mut reach = vec![d.initial()];
    let mut seen: HashSet<usize> = reach.iter().copied().collect();
    let mut i = 0;
    while i < reach.len() {
        for a in 0..k {
            let r = d.step(reach[i], a);
            if seen.insert(r) {
                reach.push(r);
            }
        }
        i += 1;
    }
    let n = reach.len();
    let pos: HashMap<usize, usize> = reach.iter().enumerate().map(|(i, &q)| (q, i)).collect();
    let mut dist = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            dist[i][j] = d.is_final(reach[i]) != d.is_final(reach[j]);
        }
    }
    loop {
        let mut changed = false;
        for i in 0..n {
            for j in 0..n {
                if dist[i][j] {
                    continue;
                }
                if (0..k).any(|a| dist[pos[&d.step(reach[i], a)]][pos[&d.step(reach[j], a)]]) {
                    dist[i][j] = true;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let class: Vec<usize> = (0..n).map(|i| (0..n).find(|&j| !dist[i][j]).unwrap()).collect();
    let reps: Vec<usize> = (0..n).filter(|&i| class[i] == i).collect();
    let letter: Vec<Vec<usize>> = (0..k)
        .map(|a| reps.iter().map(|&r| class[pos[&d.step(reach[r], a)]]).collect())
        .collect();
    let slot: HashMap<usize, usize> = reps.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let id: Vec<usize> = reps.clone();
    let mut all: HashSet<Vec<usize>> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(t) = queue.pop_front() {
        for l in &letter {
            let next: Vec<usize> = t.iter().map(|c| l[slot[c]]).collect();
            if all.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    all.len()
}

/// Every monoid of order `n` up to isomorphism, by brute force over tables
/// with identity `0`.
fn oracle_monoids(n: usize) -> Vec<Monoid> {
    let free: Vec<(usize, usize)> = (1..n).flat_map(|x| (1..n).map(move |y| (x, y))).collect();
    let perms: Vec<Vec<usize>> = permutations_fixing_zero(n);
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut digits = vec![0usize; free.len()];
    loop {
        let mut t = vec![0usize; n * n];
        for x in 0..n {
            t[x] = x;
            t[x * n] = x;
        }
        for (&(x, y), &v) in free.iter().zip(&digits) {
            t[x * n + y] = v;
        }
        let assoc = (0..n).all(|x| {
            (0..n).all(|y| (0..n).all(|z| t[t[x * n + y] * n + z] == t[x * n + t[y * n + z]]))
        });
        if assoc {
            let canon = perms
                .iter()
                .map(|p| {
                    let mut inv = vec![0; n];
                    for (i, &pi) in p.iter().enumerate() {
                        inv[pi] = i;
                    }
                    (0..n * n).map(|c| p[t[inv[c / n] * n + inv[c % n]]]).collect::<Vec<usize>>()
                })
                .min()
                .unwrap();
            found.insert(canon);
        }
        let mut i = 0;
        loop {
            if i == digits.len() {
                return found
                    .into_iter()
                    .map(|t| Monoid::from_rows(&t.chunks(n).map(<[usize]>::to_vec).collect::<Vec<_>>()).unwrap())
                    .collect();
            }
            digits[i] += 1;
            if digits[i] < n {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

fn permutations_fixing_zero(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: &mut Vec<usize>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            cur.push(x);
            go(rest, cur, out);
            cur.pop();
            rest.insert(i, x);
        }
    }
    let mut out = Vec::new();
    go(&mut (1..n).collect(), &mut vec![0], &mut out);
    out
}

/// Whether `w` is `block` repeated some number of times.
fn is_power_of(w: &[usize], block: &[usize]) -> bool {
    w.len().is_multiple_of(block.len()) && w.chunks(block.len()).all(|c| c == block)
}

// ---------------------------------------------------------------- corpus

struct Lang {
    name: String,
    dfa: Dfa,
}

fn lang(name: &str, alphabet: &str, regex: &str) -> Lang {
    Lang {
        name: name.to_string(),
        dfa: Dfa::from_regex(&Alphabet::from_chars(alphabet), regex).unwrap(),
    }
}

fn s3_cayley() -> Dfa {
    Dfa::from_text(&std::fs::read_to_string(data("s3_cayley.dfa")).unwrap()).unwrap()
}

fn random_dfa(r: &mut ChaCha8Rng, states: usize) -> Dfa {
    let table: Vec<usize> = (0..states * 2).map(|_| r.gen_range(0..states)).collect();
    let finals: Vec<bool> = (0..states).map(|_| r.gen_bool(0.5)).collect();
    Dfa::from_fn(ab(), states, 0, |q, a| table[q * 2 + a], |q| finals[q])
}

fn languages() -> Vec<Lang> {
    let mut out = vec![
        lang("parity", "ab", "(b|ab*a)*"),
        lang("ab-star", "ab", "(ab)*"),
        Lang { name: "s3-cayley".into(), dfa: s3_cayley() },
        Lang { name: "example14".into(), dfa: example14::dfa() },
        lang("a*b*", "ab", "a*b*"),
        lang("ends-abb", "ab", "(a|b)*abb"),
        lang("a-mod-3", "ab", "(b|ab*ab*a)*"),
        lang("aa-star", "a", "(aa)*"),
        lang("a-mod-4", "ab", "(b|ab*ab*ab*a)*"),
        lang("b-or-aa-star", "ab", "(b|aa)*"),
        lang("factor-aba", "ab", "(a|b)*aba(a|b)*"),
        lang("ab-or-ba", "ab", "ab|ba"),
        lang("one-b", "ab", "a*ba*"),
        lang("a-then-bc", "abc", "a(b|c)*"),
        lang("even-a-c-tail", "abc", "(b|ab*a)*c(a|b)*"),
        lang("ab-or-c-star", "abc", "(ab|c)*"),
        lang("second-last-a", "ab", "(a|b)*a(a|b)"),
        lang("even-a-even-b", "ab", "((aa|bb)|(ab|ba)(aa|bb)*(ab|ba))*"),
        Lang {
            name: "diff-mod-3".into(),
            dfa: Dfa::from_fn(ab(), 3, 0, |q, a| if a == 0 { (q + 1) % 3 } else { (q + 2) % 3 }, |q| q == 0),
        },
    ];
    let mut r = rng(10);
    for i in 0..20 {
        out.push(Lang {
            name: format!("random-{i}"),
            dfa: random_dfa(&mut r, 4),
        });
    }
    out
}

fn group_candidates() -> Vec<GroupRef> {
    let mut c = vec![GroupRef::trivial()];
    c.extend((2..=6).map(|n| GroupRef::cyclic(n).unwrap()));
    c.push(GroupRef::from_file(data("klein.mon").to_str().unwrap()).unwrap());
    c.push(GroupRef::sym(3).unwrap());
    c
}

/// The first candidate that every maximal subgroup divides.
fn choose_group(m: &Monoid, candidates: &[GroupRef]) -> Option<GroupRef> {
    let subs = m.maximal_subgroups();
    candidates
        .iter()
        .find(|g| {
            let target = g.as_group();
            subs.iter().all(|h| group_divides(h, &target, 60).divides() == Some(true))
        })
        .cloned()
}

fn least_variety(g: &Group) -> VarietySpec {
    VarietySpec::standard().into_iter().find(|&v| group_in_variety(g, v)).unwrap()
}

fn varieties_containing(g: &Group) -> Vec<VarietySpec> {
    VarietySpec::standard().into_iter().filter(|&v| group_in_variety(g, v)).collect()
}

/// Homomorphism onto `m` from one letter per generator.
fn generator_hom(m: &Monoid) -> MonoidHom {
    let gens: Vec<usize> = minimal_generating_set(m).iter().collect();
    let images = if gens.is_empty() { vec![m.identity()] } else { gens };
    MonoidHom::new(m.clone(), images).unwrap()
}

fn all_embed(big: &Monoid, into: &[&Monoid]) -> bool {
    big.maximal_subgroups().iter().all(|g| {
        let (gm, _) = g.to_monoid();
        into.iter().any(|m| embeds_into_monoid(&gm, m).unwrap())
    })
}

// ---------------------------------------------------------------- criteria

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn criterion_1() -> Verdict {
    let d = example14::dfa();
    let oracle = oracle_syntactic_size(&d);
    let synt = d.syntactic_monoid(CAP).unwrap();
    let m = &synt.monoid;
    let s3 = m
        .maximal_subgroups()
        .iter()
        .filter(|g| g.order() == 6 && !g.is_abelian())
        .count();
    let solvable = monoid_in_hbar(m, VarietySpec::Solvable).verdict;
    let abelian = monoid_in_hbar(m, VarietySpec::Abelian).verdict;
    let args: Vec<String> = ["syncdelay", "demo-example14"].iter().map(|s| s.to_string()).collect();
    let cli = syncdelay_cli::run(&args);
    let cli_ok = cli.code == 0
        && cli.stdout.contains(&format!("monoid_size: {EXAMPLE14_SIZE}\n"))
        && cli.stdout.contains("hbar_solvable: yes\n")
        && cli.stdout.contains("hbar_abelian: no\n")
        && cli.stdout.contains("decomposition_verified: yes\n");
    verdict(
        oracle == EXAMPLE14_SIZE && m.size() == oracle && s3 == 1 && solvable && !abelian && cli_ok,
        format!(
            "size {} (oracle {oracle}), S3 subgroups {s3}, solvable {solvable}, abelian {abelian}, demo exit {}",
            m.size(),
            cli.code
        ),
    )
}

fn criterion_2() -> Verdict {
    let mut corpus: Vec<(String, Monoid)> = Vec::new();
    let mut counts = Vec::new();
    for n in 1..=4 {
        let ms = oracle_monoids(n);
        counts.push(ms.len());
        corpus.extend(ms.into_iter().enumerate().map(|(i, m)| (format!("order{n}-{i}"), m)));
    }
    let mut r = rng(20);
    for i in 0..20 {
        corpus.push((format!("random-{i}"), random_dfa(&mut r, 4).syntactic_monoid(CAP).unwrap().monoid));
    }
    corpus.push(("example14".into(), example14::dfa().syntactic_monoid(CAP).unwrap().monoid));
    let mut failures = Vec::new();
    let (mut max_nodes, mut leaves_checked) = (0, 0);
    for (name, m) in &corpus {
        let t = decompose(m);
        let rep = verify_tree(&t, m);
        let bound = 1u128.checked_shl(m.size() as u32).map_or(u128::MAX, |b| b - 1);
        max_nodes = max_nodes.max(t.node_count());
        let hbar: Vec<VarietySpec> = VarietySpec::standard()
            .into_iter()
            .filter(|&v| monoid_in_hbar(m, v).verdict)
            .collect();
        let mut leaves_ok = true;
        for leaf in t.leaves() {
            let g = Group::whole(leaf.clone()).unwrap();
            leaves_checked += 1;
            leaves_ok &= hbar.iter().all(|&v| group_in_variety(&g, v));
        }
        if !rep.ok || t.node_count() as u128 > bound || !leaves_ok {
            failures.push(name.clone());
        }
    }
    verdict(
        counts == [1, 2, 7, 35] && corpus.len() >= 30 && failures.is_empty(),
        format!(
            "{} monoids (order<=4 counts {counts:?}), max nodes {max_nodes}, leaves checked {leaves_checked}, failures {failures:?}",
            corpus.len()
        ),
    )
}

fn criterion_3() -> Verdict {
    let abc = Alphabet::from_chars("abc");
    let letters = Dfa::from_regex(&ab(), "a|b").unwrap();
    let bstar_c = Dfa::from_regex(&abc, "(a|b)*c").unwrap();
    let single = Dfa::from_regex(&ab(), "ab").unwrap();
    let abab = Dfa::from_regex(&ab(), "abab").unwrap();
    let d_letters = min_sync_delay(&letters, 5).delay;
    let d_bstar_c = min_sync_delay(&bstar_c, 5).delay;
    let d_single = min_sync_delay(&single, 5).delay;
    let rep = min_sync_delay(&abab, 5);
    let block = [0, 1, 0, 1];
    let witnessed = rep
        .counterexamples
        .iter()
        .enumerate()
        .filter(|(d, c)| {
            let uv: Word = c.u.iter().chain(&c.v).copied().collect();
            let uvw: Word = uv.iter().chain(&c.w).copied().collect();
            c.delay == *d
                && c.v.len() == 4 * d
                && is_power_of(&c.v, &block)
                && is_power_of(&uvw, &block)
                && !is_power_of(&uv, &block)
        })
        .count();
    let pass = d_letters == Some(0)
        && d_bstar_c == Some(1)
        && d_single == Some(1)
        && rep.delay.is_none()
        && rep.counterexamples.len() == 6
        && witnessed == 6;
    verdict(
        pass,
        format!(
            "letters {d_letters:?}, (a|b)*c {d_bstar_c:?}, ab {d_single:?}, abab {:?} with {witnessed}/6 verified counterexamples",
            rep.delay
        ),
    )
}

struct Synthesized {
    name: String,
    group: GroupRef,
    alphabet: Alphabet,
    exprs: Vec<SdExpr>,
}

fn synthesis_pairs() -> Vec<(Lang, GroupRef)> {
    let candidates = group_candidates();
    let mut pairs = Vec::new();
    for l in languages() {
        let m = l.dfa.syntactic_monoid(CAP).unwrap().monoid;
        let g = match l.name.as_str() {
            "parity" => Some(GroupRef::cyclic(2).unwrap()),
            "ab-star" => Some(GroupRef::trivial()),
            "s3-cayley" | "example14" => Some(GroupRef::sym(3).unwrap()),
            _ => choose_group(&m, &candidates),
        };
        if let Some(g) = g {
            pairs.push((l, g));
        }
    }
    pairs
}

fn criterion_4(out: &mut Vec<Synthesized>) -> Verdict {
    let mut failures = Vec::new();
    let (mut checked, mut max_delay) = (0, 0);
    let pairs = synthesis_pairs();
    for (l, g) in &pairs {
        let d = l.dfa.minimize();
        let a = d.alphabet().clone();
        let synt = d.transition_monoid(CAP).unwrap();
        let exprs = synthesize_all(&synt.hom, g).unwrap();
        let mut ok = true;
        for (m, e) in exprs.iter().enumerate() {
            let want = preimage_dfa(&a, &synt.hom, &ElementSet::from(vec![m])).unwrap();
            ok &= compile_finite(e, &a).unwrap().equivalent(&want).unwrap();
            checked += 1;
        }
        let v = least_variety(&g.as_group());
        let val = validate(&SdExpr::union(exprs.clone()), &a, v, 8);
        ok &= val.ok;
        max_delay = max_delay.max(val.max_delay().unwrap_or(0));
        if !ok {
            failures.push(format!("{}/{}", l.name, g.spec()));
        }
        out.push(Synthesized {
            name: l.name.clone(),
            group: g.clone(),
            alphabet: a,
            exprs,
        });
    }
    let must = ["parity/(cyclic 2)", "ab-star/(trivial)", "s3-cayley/(sym 3)"];
    let present = must
        .iter()
        .all(|p| out.iter().any(|s| format!("{}/{}", s.name, s.group.spec()) == *p));
    let groups: BTreeSet<String> = pairs.iter().map(|(_, g)| g.spec().to_string()).collect();
    verdict(
        pairs.len() >= 25 && present && failures.is_empty(),
        format!(
            "{} pairs over groups {groups:?}, {checked} preimages equivalent, max delay {max_delay}, failures {failures:?}",
            pairs.len()
        ),
    )
}

fn criterion_5(synthesized: &[Synthesized]) -> Verdict {
    let abc = Alphabet::from_chars("abc");
    let ds = Alphabet::from_chars("ds");
    let hand: Vec<(&str, Alphabet, GroupRef)> = vec![
        ("(star (cyclic 2) (piece 0 (letter b)) (piece 1 (letter a)))", ab(), GroupRef::cyclic(2).unwrap()),
        ("(starcoset (cyclic 2) 1 (piece 0 (letter b)) (piece 1 (letter a)))", ab(), GroupRef::cyclic(2).unwrap()),
        (
            "(concat (star (cyclic 3) (piece 1 (letter a)) (piece 0 (letter b))) (letter c))",
            abc.clone(),
            GroupRef::cyclic(3).unwrap(),
        ),
        ("(star (sym 3) (piece 3 (letter d)) (piece 2 (letter s)))", ds, GroupRef::sym(3).unwrap()),
        (
            "(star (trivial) (piece 0 (concat (star (trivial) (piece 0 (letter b))) (letter a))))",
            ab(),
            GroupRef::trivial(),
        ),
        (
            "(union (star (cyclic 2) (piece 1 (concat (letter a) (letter b)))) (letter c))",
            abc,
            GroupRef::cyclic(2).unwrap(),
        ),
    ];
    let mut items: Vec<(String, SdExpr, Alphabet, Group)> = Vec::new();
    for s in synthesized {
        for (m, e) in s.exprs.iter().enumerate() {
            if !e.is_empty_node() {
                items.push((format!("{}[{m}]", s.name), e.clone(), s.alphabet.clone(), s.group.as_group()));
            }
        }
    }
    let mut invalid_hand = 0;
    for (i, (text, a, g)) in hand.iter().enumerate() {
        let e = parse_sexp(text, Some(a), None).unwrap().expr;
        if validate(&e, a, least_variety(&g.as_group()), 8).ok {
            items.push((format!("hand-{i}"), e, a.clone(), g.as_group()));
        } else {
            invalid_hand += 1;
        }
    }
    let (mut subgroups, mut failures) = (0, Vec::new());
    for (name, e, a, g) in &items {
        let vs = varieties_containing(g);
        let m = compile_finite(e, a).unwrap().syntactic_monoid(CAP).unwrap().monoid;
        for h in m.maximal_subgroups() {
            subgroups += 1;
            if !vs.iter().all(|&v| group_in_variety(&h, v)) {
                failures.push(name.clone());
            }
        }
    }
    verdict(
        failures.is_empty() && invalid_hand == 0,
        format!(
            "{} expressions ({} hand-written), {subgroups} maximal subgroups checked, failures {failures:?}",
            items.len(),
            hand.len() - invalid_hand
        ),
    )
}

fn criterion_6() -> Verdict {
    // Pair-set product against direct concatenation.
    let mut r = rng(60);
    let (mut concat_failures, mut instances, mut skipped) = (0, 0, 0);
    while instances < 50 {
        let l = random_dfa(&mut r, 3);
        let k = random_dfa(&mut r, 3);
        let nk = k.num_states();
        let init = l.initial() * nk + k.initial();
        let prod = Dfa::from_fn(ab(), l.num_states() * nk, init, |s, a| l.step(s / nk, a) * nk + k.step(s % nk, a), |_| false);
        let tm = prod.transition_monoid(CAP).unwrap();
        let at = |x: usize| tm.transformations[x][init] as usize;
        let p: ElementSet = tm.monoid.elements().filter(|&x| l.is_final(at(x) / nk)).collect();
        let q: ElementSet = tm.monoid.elements().filter(|&x| k.is_final(at(x) % nk)).collect();
        let sp = match schutzenberger_product(&tm.hom, CAP) {
            Ok(sp) => sp,
            Err(_) => {
                skipped += 1;
                continue;
            }
        };
        instances += 1;
        let accept = sp.concat_accepting(&p, &q);
        let lk = l.concat_finite(&k).unwrap();
        for _ in 0..200 {
            let n = r.gen_range(0..=10);
            let w: Word = (0..n).map(|_| r.gen_range(0..2)).collect();
            if accept.contains(sp.hom.eval(&w)) != lk.accepts(&w) {
                concat_failures += 1;
            }
        }
    }
    // Subgroup bounds for the three constructions.
    let mut monoids: Vec<(Monoid, MonoidHom)> = (1..=4)
        .flat_map(oracle_monoids)
        .map(|m| {
            let phi = generator_hom(&m);
            (m, phi)
        })
        .collect();
    for l in languages() {
        let synt = l.dfa.syntactic_monoid(CAP).unwrap();
        if synt.monoid.size() <= 12 {
            monoids.push((synt.monoid, synt.hom));
        }
    }
    let (mut pair_fail, mut exp_fail, mut rees_fail) = (0, 0, 0);
    let (mut full, mut reachable, mut rees_count) = (0, 0, 0);
    for (m, phi) in &monoids {
        let sp = schutzenberger_product(phi, CAP).unwrap();
        pair_fail += usize::from(!all_embed(&sp.monoid, &[m]));
        let n = m.size();
        let exp = if (n + 1) << n.saturating_sub(2) <= 3000 {
            full += 1;
            birget_rhodes_full(m, 12, CAP).unwrap()
        } else {
            reachable += 1;
            birget_rhodes_reachable(phi, CAP).unwrap()
        };
        exp_fail += usize::from(!all_embed(&exp.monoid, &[m]));
        let gens: Vec<usize> = minimal_generating_set(m).iter().collect();
        for &c in gens.iter().filter(|&&c| !m.is_unit(c)) {
            let others: Vec<usize> = gens.iter().copied().filter(|&x| x != c).collect();
            let n_carrier = m.submonoid_generated(others);
            let lr = local_rees(m, &n_carrier, c, CAP).unwrap();
            rees_count += 1;
            rees_fail += usize::from(!all_embed(&lr.rees.monoid, &[&lr.n, &lr.local.monoid]));
        }
    }
    verdict(
        concat_failures == 0 && pair_fail + exp_fail + rees_fail == 0,
        format!(
            "{instances}x200 concatenation words ({skipped} instances over the cap redrawn), {concat_failures} disagreements; {} monoids: pair-set {pair_fail} failures, expansion {exp_fail} failures ({full} full, {reachable} reachable), {rees_count} Rees extensions {rees_fail} failures",
            monoids.len()
        ),
    )
}

fn criterion_7() -> Verdict {
    let (mut prefix_fail, mut arrow_fail, mut substituted, mut members) = (0, 0, 0, 0);
    let mut over_cap = 0;
    let langs = languages();
    for (i, l) in langs.iter().enumerate() {
        let d = l.dfa.minimize();
        let k = d.alphabet().len();
        let synt = d.transition_monoid(CAP).unwrap();
        let phi = &synt.hom;
        let Ok(exp) = birget_rhodes_reachable(phi, CAP) else {
            over_cap += 1;
            continue;
        };
        let psi = exp.hom.as_ref().unwrap();
        let mut r = rng(70 + i as u64);
        for _ in 0..500 {
            let n = r.gen_range(0..=16);
            let u: Word = (0..n).map(|_| r.gen_range(0..k)).collect();
            let (set, value) = &exp.keys[psi.eval(&u)];
            let prefixes: BTreeSet<usize> = (0..=u.len()).map(|j| phi.eval(&u[..j])).collect();
            let ok = set.iter().all(|m| prefixes.contains(&m)) && *value == phi.eval(&u);
            prefix_fail += usize::from(!ok);
        }
        let depth = if k <= 2 { 7 } else { 5 };
        let mut bucket: HashMap<usize, Vec<Word>> = HashMap::new();
        for w in all_words(k, depth).into_iter().filter(|w| !w.is_empty()) {
            bucket.entry(psi.eval(&w)).or_default().push(w);
        }
        let mut swap = |w: &Word, r: &mut ChaCha8Rng| -> Word {
            match bucket.get(&psi.eval(w)) {
                Some(ws) => {
                    let v = ws[r.gen_range(0..ws.len())].clone();
                    substituted += usize::from(&v != w);
                    v
                }
                None => w.clone(),
            }
        };
        for _ in 0..100 {
            let pl = r.gen_range(0..=6);
            let cl = r.gen_range(1..=4);
            let u: Word = (0..pl).map(|_| r.gen_range(0..k)).collect();
            let v: Word = (0..cl).map(|_| r.gen_range(0..k)).collect();
            let j = r.gen_range(1..=3);
            let block: Word = v.iter().copied().cycle().take(v.len() * j).collect();
            let alpha = LassoWord::new(u.clone(), v.clone()).unwrap();
            let beta = LassoWord::new(swap(&u, &mut r), swap(&block, &mut r)).unwrap();
            let inside = arrow_membership(&d, &alpha);
            members += usize::from(inside);
            arrow_fail += usize::from(inside != arrow_membership(&d, &beta));
        }
    }
    verdict(
        prefix_fail == 0 && arrow_fail == 0,
        format!(
            "{} homomorphisms ({over_cap} with expansion over the cap skipped): 500 words each, {prefix_fail} prefix failures; 100 lassos each ({members} members), {substituted} factors replaced, {arrow_fail} membership changes",
            langs.len() - over_cap
        ),
    )
}

fn lassos(k: usize, seed_stream: u64) -> Vec<LassoWord> {
    let mut out = LassoWord::enumerate(k, 8);
    let mut r = rng(seed_stream);
    for _ in 0..1000 {
        let pl = r.gen_range(0..=10);
        let cl = r.gen_range(1..=10);
        let u: Word = (0..pl).map(|_| r.gen_range(0..k)).collect();
        let v: Word = (0..cl).map(|_| r.gen_range(0..k)).collect();
        out.push(LassoWord::new(u, v).unwrap());
    }
    out
}

fn buchi(a: Alphabet, edges: &[(usize, usize, usize)], states: usize, accepting: &[usize]) -> BuchiAutomaton {
    let mut trans = vec![vec![Vec::new(); a.len()]; states];
    for &(p, x, q) in edges {
        trans[p][x].push(q);
    }
    let acc = (0..states).map(|q| accepting.contains(&q)).collect();
    BuchiAutomaton::new(a, trans, vec![0], acc).unwrap()
}

fn criterion_8() -> Verdict {
    let a1 = Alphabet::from_chars("a");
    let track = Dfa::from_fn(ab(), 4, 0, |q, x| if x == 0 { (q ^ 1) | 2 } else { q }, |q| q == 0);
    let cases: Vec<(&str, BuchiAutomaton, MonoidHom, GroupRef)> = vec![
        (
            "a^w",
            buchi(a1.clone(), &[(0, 0, 0)], 1, &[0]),
            MonoidHom::new(Monoid::trivial(), vec![0]).unwrap(),
            GroupRef::trivial(),
        ),
        (
            "finitely-many-b",
            buchi(ab(), &[(0, 0, 0), (0, 1, 0), (0, 0, 1), (1, 0, 1)], 2, &[1]),
            Dfa::from_regex(&ab(), "a*").unwrap().syntactic_monoid(CAP).unwrap().hom,
            GroupRef::trivial(),
        ),
        (
            "b*a^w",
            buchi(ab(), &[(0, 1, 0), (0, 0, 1), (1, 0, 1)], 2, &[1]),
            Dfa::from_regex(&ab(), "b*a*").unwrap().syntactic_monoid(CAP).unwrap().hom,
            GroupRef::trivial(),
        ),
        (
            "even-a-then-b^w",
            buchi(ab(), &[(0, 1, 0), (0, 0, 1), (1, 0, 0), (1, 1, 1), (0, 1, 2), (2, 1, 2)], 3, &[2]),
            track.transition_monoid(CAP).unwrap().hom,
            GroupRef::cyclic(2).unwrap(),
        ),
        (
            "(ab)^w",
            buchi(ab(), &[(0, 0, 1), (1, 1, 0)], 2, &[0]),
            Dfa::from_regex(&ab(), "(ab)*").unwrap().syntactic_monoid(CAP).unwrap().hom,
            GroupRef::trivial(),
        ),
    ];
    let mut parts = Vec::new();
    let mut pass = true;
    for (i, (name, b, phi, g)) in cases.iter().enumerate() {
        let nf = synthesize_omega(phi, g, b, &OmegaOptions { seed: SEED, ..OmegaOptions::default() }).unwrap();
        let nb = nf.compile(b.alphabet()).unwrap();
        let sample = lassos(b.alphabet().len(), 80 + i as u64);
        let bad = sample.iter().filter(|w| nb.accepts(w) != b.accepts(w)).count();
        pass &= bad == 0;
        parts.push(format!("{name} {bad}/{}", sample.len()));
    }
    verdict(pass, format!("mismatches {}", parts.join(", ")))
}

fn run_cli(args: &[&str]) -> syncdelay_cli::Outcome {
    let argv: Vec<String> = std::iter::once("syncdelay").chain(args.iter().copied()).map(String::from).collect();
    syncdelay_cli::run(&argv)
}

fn binary(args: &[&str], seed: &str) -> Vec<u8> {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_syncdelay"))
        .args(args)
        .env("SYNCDELAY_SEED", seed)
        .output()
        .unwrap();
    let mut bytes = out.stdout;
    bytes.extend(out.status.code().unwrap_or(-1).to_string().bytes());
    bytes
}

const LIMITS: [(u8, u64); 3] = [(1, 10), (2, 60), (4, 120)];

fn line(n: u8, v: &Verdict, t: Duration) -> (bool, String) {
    let limit = LIMITS.iter().find(|(c, _)| *c == n).map(|&(_, s)| Duration::from_secs(s));
    let pass = v.pass && limit.is_none_or(|l| t < l);
    let budget = limit.map_or(String::new(), |l| format!(" / limit {} s", l.as_secs()));
    let text = format!(
        "criterion {n}: {}  {}  [{:.2} s{budget}]",
        if pass { "PASS" } else { "FAIL" },
        v.detail,
        t.as_secs_f64()
    );
    (pass, text)
}

fn criteria(live: bool) -> Vec<(u8, Verdict, Duration)> {
    let mut out = Vec::new();
    let mut synthesized: Vec<Synthesized> = Vec::new();
    let mut timed = |n: u8, f: &mut dyn FnMut() -> Verdict| {
        let t = Instant::now();
        let v = f();
        let t = t.elapsed();
        if live {
            println!("{}", line(n, &v, t).1);
        }
        out.push((n, v, t));
    };
    timed(1, &mut criterion_1);
    timed(2, &mut criterion_2);
    timed(3, &mut criterion_3);
    timed(4, &mut || criterion_4(&mut synthesized));
    timed(5, &mut || criterion_5(&synthesized));
    timed(6, &mut criterion_6);
    timed(7, &mut criterion_7);
    timed(8, &mut criterion_8);
    out
}

fn report(rows: &[(u8, Verdict, Duration)]) -> String {
    rows.iter()
        .map(|(n, v, _)| format!("{n} {} {}\n", v.pass, v.detail))
        .collect()
}

fn main() -> ExitCode {
    let first = criteria(true);
    let mut all_pass = first.iter().all(|(n, v, t)| line(*n, v, *t).0);

    let second = criteria(false);
    let same_suite = report(&first) == report(&second);
    let cmds: Vec<Vec<String>> = vec![
        vec!["demo-example14".into()],
        vec![
            "synthesize".into(),
            "--dfa".into(),
            data("parity.dfa").display().to_string(),
            "--group".into(),
            "cyclic:2".into(),
            "--omega".into(),
            data("lassos.txt").display().to_string(),
        ],
        vec![
            "--json".into(),
            "product".into(),
            "--left".into(),
            data("ab_star.dfa").display().to_string(),
            "--right".into(),
            data("parity.dfa").display().to_string(),
        ],
    ];
    let mut same_cli = true;
    for c in &cmds {
        let args: Vec<&str> = c.iter().map(String::as_str).collect();
        same_cli &= run_cli(&args) == run_cli(&args);
        same_cli &= binary(&args, "7") == binary(&args, "7");
    }
    let pass = same_suite && same_cli;
    all_pass &= pass;
    println!(
        "criterion 9: {}  suite report identical on rerun: {same_suite}, {} commands byte-identical in-process and as a binary: {same_cli}",
        if pass { "PASS" } else { "FAIL" },
        cmds.len()
    );
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
