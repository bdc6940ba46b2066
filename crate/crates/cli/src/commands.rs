use std::path::Path;

use rand::Rng;
use serde_json::Value;

use syncdelay::automata::{Alphabet, BuchiAutomaton, Dfa, LassoWord, Word};
use syncdelay::codes::{min_sync_delay, PrefixViolation};
use syncdelay::config::RunConfig;
use syncdelay::constructions::{birget_rhodes_full, birget_rhodes_reachable, schutzenberger_product, Expansion};
use syncdelay::decompose::{decompose, flatten_to_rees, verify_tree};
use syncdelay::groups::{embeds_into_monoid, name_group, GroupName};
use syncdelay::monoid::verify_division;
use syncdelay::sdexpr::{
    compile_finite, lasso_mismatches, parse_sexp, synthesize_all, synthesize_omega, validate, GroupRef, SdExpr,
};
use syncdelay::varieties::{group_in_variety, monoid_in_hbar, VarietySpec};
use syncdelay::{example14, ElementSet, Monoid, MonoidHom};

use crate::{read, variety, write, CmdResult, Command, Fail, Mode, Report};

/// Expressions larger than this are not written out.
const WRITE_LIMIT: u64 = 1_000_000;

pub(crate) fn dispatch(cmd: &Command, config: &RunConfig) -> CmdResult {
    match cmd {
        Command::Analyze { dfa, varieties } => analyze(dfa, varieties, config),
        Command::Decompose { monoid, dot, flatten } => decompose_cmd(monoid, dot.as_deref(), *flatten, config),
        Command::Synthesize { dfa, group, omega, out, print_limit, dmax } => {
            synthesize(dfa, group, omega.as_deref(), out.as_deref(), *print_limit, *dmax, config)
        }
        Command::CheckCode { dfa, dmax } => check_code(dfa, *dmax),
        Command::VerifyExpr { expr, dfa } => verify_expr(expr, dfa),
        Command::ValidateExpr { expr, variety: v, dmax, alphabet } => {
            validate_expr(expr, v, *dmax, alphabet.as_deref())
        }
        Command::Expand { monoid, mode, dfa } => expand(monoid.as_deref(), *mode, dfa.as_deref(), config),
        Command::Product { left, right, via: _ } => product(left, right, config),
        Command::DemoExample14 => demo_example14(config),
    }
}

fn load_dfa(path: &Path) -> Result<Dfa, Fail> {
    Ok(Dfa::from_text(&read(path)?)?)
}

fn load_monoid(path: &Path) -> Result<Monoid, Fail> {
    Ok(Monoid::from_text(&read(path)?)?)
}

fn show_word(a: &Alphabet, w: &[usize]) -> String {
    if w.is_empty() {
        "1".into()
    } else {
        a.format_word(w)
    }
}

fn subgroup_orders(m: &Monoid) -> Vec<usize> {
    m.maximal_subgroups().iter().map(|g| g.order()).collect()
}

fn subgroup_names(m: &Monoid) -> Vec<String> {
    m.maximal_subgroups().iter().map(|g| name_group(g).to_string()).collect()
}

/// The smallest standard variety containing the group.
pub fn least_variety(g: &GroupRef) -> VarietySpec {
    let group = g.as_group();
    VarietySpec::standard()
        .into_iter()
        .find(|&v| group_in_variety(&group, v))
        .expect("every group is in the variety of all groups")
}

fn analyze(dfa: &Path, varieties: &[String], config: &RunConfig) -> CmdResult {
    let specs: Vec<VarietySpec> = if varieties.is_empty() {
        VarietySpec::standard().to_vec()
    } else {
        varieties.iter().map(|s| variety(s)).collect::<Result<_, _>>()?
    };
    let min = load_dfa(dfa)?.minimize();
    let synt = min.transition_monoid(config.limits.size_cap)?;
    let m = &synt.monoid;
    let mut r = Report::new();
    r.put("states", min.num_states())
        .put("monoid_size", m.size())
        .put("idempotents", m.idempotents().len())
        .put("aperiodic", m.is_aperiodic())
        .put("subgroup_orders", subgroup_orders(m))
        .put("subgroups", subgroup_names(m));
    let mut ok = true;
    for v in specs {
        let verdict = monoid_in_hbar(m, v).verdict;
        ok &= verdict;
        r.put(format!("hbar_{v}"), verdict);
    }
    Ok((r, ok || varieties.is_empty()))
}

fn decompose_cmd(monoid: &Path, dot: Option<&Path>, flatten: bool, config: &RunConfig) -> CmdResult {
    let m = load_monoid(monoid)?;
    let t = decompose(&m);
    let rep = verify_tree(&t, &m);
    let bound = 1u128.checked_shl(m.size() as u32).map_or(u128::MAX, |b| b - 1);
    let leaves: Vec<String> = t.leaf_names().iter().map(GroupName::to_string).collect();
    let mut r = Report::new();
    r.put("monoid_size", m.size())
        .put("nodes", t.node_count())
        .put("depth", t.depth())
        .put("leaves", leaves)
        .put("node_bound", (t.node_count() as u128) <= bound)
        .put("materialized_checks", rep.materialized_checks)
        .put("factored_checks", rep.factored_checks)
        .put("verified", rep.ok);
    if let Some(f) = &rep.failure {
        r.put("failure", f.as_str());
    }
    let mut ok = rep.ok;
    if let Some(p) = dot {
        write(p, &t.to_dot())?;
        r.put("dot", p.display().to_string());
    }
    if flatten {
        match flatten_to_rees(&t, config.limits.size_cap) {
            Ok((big, w)) => {
                let div = verify_division(&m, &big, &w).is_ok();
                ok &= div;
                r.put("flattened_size", big.size()).put("flattened_divides", div);
            }
            Err(e) => {
                r.put("flattened_size", Value::Null).put("flattened_error", e.to_string());
            }
        }
    }
    Ok((r, ok))
}

fn check_code(dfa: &Path, dmax: usize) -> CmdResult {
    let k = load_dfa(dfa)?;
    let a = k.alphabet().clone();
    let rep = min_sync_delay(&k, dmax);
    let mut r = Report::new();
    r.put("prefix_code", rep.is_prefix_code);
    match &rep.prefix_violation {
        Some(PrefixViolation::ContainsEmptyWord) => {
            r.put("violation", "contains the empty word");
        }
        Some(PrefixViolation::ProperPrefix { u, uv }) => {
            r.put("violation", format!("{} is a proper prefix of {}", show_word(&a, u), show_word(&a, uv)));
        }
        None => {
            match rep.delay {
                Some(d) => r.put("delay", d),
                None => r.put("delay", format!("none<={dmax}")),
            };
            if let Some(c) = rep.counterexample() {
                r.put("counterexample", c.describe(&a));
            }
        }
    }
    Ok((r, rep.delay.is_some()))
}

fn parse_expr_file(path: &Path, alphabet: Option<&Alphabet>) -> Result<syncdelay::sdexpr::ParsedExpr, Fail> {
    let text = read(path)?;
    parse_sexp(&text, alphabet, path.parent()).map_err(|e| Fail::Input(e.to_string()))
}

fn verify_expr(expr: &Path, dfa: &Path) -> CmdResult {
    let l = load_dfa(dfa)?;
    let p = parse_expr_file(expr, Some(l.alphabet()))?;
    if !p.expr.is_omega_free() {
        return Err(Fail::Input("the expression denotes infinite words; expected a finite-word expression".into()));
    }
    let c = compile_finite(&p.expr, l.alphabet())?;
    let mut r = Report::new();
    r.put("expr_states", c.num_states()).put("dfa_states", l.minimize().num_states());
    let diff = c.distinguishing_word(&l)?;
    r.put("equivalent", diff.is_none());
    if let Some(w) = &diff {
        r.put("counterexample", show_word(l.alphabet(), w))
            .put("in_expr", c.accepts(w))
            .put("in_dfa", l.accepts(w));
    }
    Ok((r, diff.is_none()))
}

fn validate_expr(expr: &Path, v: &str, dmax: usize, alphabet: Option<&str>) -> CmdResult {
    let v = variety(v)?;
    let alpha = alphabet.map(Alphabet::from_chars);
    let p = parse_expr_file(expr, alpha.as_ref())?;
    let rep = validate(&p.expr, &p.alphabet, v, dmax);
    let mut r = Report::new();
    r.put("variety", v.to_string())
        .put("stars", rep.nodes.len())
        .put("max_delay", rep.max_delay().map_or(Value::Null, Value::from))
        .put("valid", rep.ok);
    if !rep.failures.is_empty() {
        r.put("failures", rep.failures.clone());
    }
    Ok((r, rep.ok))
}

/// For each sampled word, the set recorded by the expansion equals the set
/// of values of its prefixes.
pub fn prefix_witness_failures(phi: &MonoidHom, e: &Expansion, words: &[Word]) -> usize {
    let psi = e.hom.as_ref().expect("reachable expansion");
    let m = &phi.target;
    words
        .iter()
        .filter(|u| {
            let (set, value) = &e.keys[psi.eval(u)];
            let mut seen: ElementSet = [m.identity()].into_iter().collect();
            let mut x = m.identity();
            for &a in u.iter() {
                x = m.mul(x, phi.letter_images[a]);
                seen.insert(x);
            }
            &seen != set || x != *value
        })
        .count()
}

pub fn random_words(rng: &mut impl Rng, letters: usize, count: usize, max_len: usize) -> Vec<Word> {
    (0..count)
        .map(|_| {
            let n = rng.gen_range(0..=max_len);
            (0..n).map(|_| rng.gen_range(0..letters)).collect()
        })
        .collect()
}

fn groups_embed(big: &Monoid, small: &Monoid) -> Result<bool, Fail> {
    for g in big.maximal_subgroups() {
        if !embeds_into_monoid(&g.to_monoid().0, small)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn expand(monoid: Option<&Path>, mode: Mode, dfa: Option<&Path>, config: &RunConfig) -> CmdResult {
    let cap = config.limits.size_cap;
    let mut r = Report::new();
    r.put("mode", if mode == Mode::Full { "full" } else { "reachable" });
    let mut ok = true;
    match (mode, monoid, dfa) {
        (Mode::Full, None, _) => return Err(Fail::Input("--mode full needs --monoid".into())),
        (Mode::Reachable, _, None) => return Err(Fail::Input("--mode reachable needs --dfa".into())),
        _ => {}
    }
    if let Some(path) = dfa {
        let l = load_dfa(path)?;
        let synt = l.syntactic_monoid(cap)?;
        let e = birget_rhodes_reachable(&synt.hom, cap)?;
        let words = random_words(&mut config.rng(1), l.alphabet().len(), 500, 16);
        let failures = prefix_witness_failures(&synt.hom, &e, &words);
        let embed = groups_embed(&e.monoid, &synt.monoid)?;
        ok &= failures == 0 && embed;
        r.put("syntactic_size", synt.monoid.size())
            .put("reachable_size", e.monoid.size())
            .put("reachable_subgroup_orders", subgroup_orders(&e.monoid))
            .put("reachable_groups_embed", embed)
            .put("prefix_witness_words", words.len())
            .put("prefix_witness_failures", failures);
    }
    if let Some(path) = monoid {
        let m = load_monoid(path)?;
        r.put("monoid_size", m.size());
        match birget_rhodes_full(&m, config.limits.expansion_full_cap, cap) {
            Ok(e) => {
                let embed = groups_embed(&e.monoid, &m)?;
                ok &= embed;
                r.put("full_size", e.monoid.size())
                    .put("full_subgroup_orders", subgroup_orders(&e.monoid))
                    .put("full_groups_embed", embed);
            }
            Err(err) if mode == Mode::Full => return Err(err.into()),
            Err(err) => {
                r.put("full_size", Value::Null).put("full_error", err.to_string());
            }
        }
    }
    Ok((r, ok))
}

/// A common homomorphism for two DFAs over one alphabet: the transition
/// monoid of their product, with the elements accepted by each side.
pub fn common_hom(l: &Dfa, k: &Dfa, cap: usize) -> Result<(MonoidHom, ElementSet, ElementSet), Fail> {
    if l.alphabet() != k.alphabet() {
        return Err(Fail::Input("the two DFAs have different alphabets".into()));
    }
    let nk = k.num_states();
    let init = l.initial() * nk + k.initial();
    let prod = Dfa::from_fn(
        l.alphabet().clone(),
        l.num_states() * nk,
        init,
        |s, a| l.step(s / nk, a) * nk + k.step(s % nk, a),
        |_| false,
    );
    let tm = prod.transition_monoid(cap)?;
    let at = |x: usize| tm.transformations[x][init] as usize;
    let p = tm.monoid.elements().filter(|&x| l.is_final(at(x) / nk)).collect();
    let q = tm.monoid.elements().filter(|&x| k.is_final(at(x) % nk)).collect();
    Ok((tm.hom, p, q))
}

fn product(left: &Path, right: &Path, config: &RunConfig) -> CmdResult {
    let cap = config.limits.size_cap;
    let l = load_dfa(left)?.minimize();
    let k = load_dfa(right)?.minimize();
    let (phi, p, q) = common_hom(&l, &k, cap)?;
    let sp = schutzenberger_product(&phi, cap)?;
    let accept = sp.concat_accepting(&p, &q);
    let lk = l.concat_finite(&k)?;
    let words = random_words(&mut config.rng(2), l.alphabet().len(), 200, 12);
    let disagreements = words
        .iter()
        .filter(|w| accept.contains(sp.hom.eval(w)) != lk.accepts(w))
        .count();
    let embed = groups_embed(&sp.monoid, &phi.target)?;
    let mut r = Report::new();
    r.put("common_monoid_size", phi.target.size())
        .put("product_size", sp.monoid.size())
        .put("product_subgroup_orders", subgroup_orders(&sp.monoid))
        .put("groups_embed", embed)
        .put("concat_states", lk.minimize().num_states())
        .put("sampled_words", words.len())
        .put("disagreements", disagreements);
    Ok((r, embed && disagreements == 0))
}

fn parse_lassos(text: &str, a: &Alphabet) -> Result<Vec<(String, LassoWord)>, Fail> {
    text.lines()
        .map(str::trim)
        .filter(|s| !s.is_empty() && !s.starts_with('#'))
        .map(|s| {
            LassoWord::parse(a, s)
                .map(|w| (s.to_string(), w))
                .map_err(|e| Fail::Input(format!("lasso `{s}`: {e}")))
        })
        .collect()
}

/// The union of the synthesized expressions over the accepted elements.
pub fn language_expr(outs: &[SdExpr], accepting: &ElementSet) -> SdExpr {
    SdExpr::union(accepting.iter().map(|m| outs[m].clone()).collect()).simplify()
}

fn synthesize(
    dfa: &Path,
    group: &str,
    omega: Option<&Path>,
    out: Option<&Path>,
    print_limit: u64,
    dmax: usize,
    config: &RunConfig,
) -> CmdResult {
    let cap = config.limits.size_cap;
    let l = load_dfa(dfa)?.minimize();
    let a = l.alphabet().clone();
    let g = GroupRef::parse_cli(group).map_err(|e| Fail::Input(e.to_string()))?;
    let lassos = match omega {
        Some(p) => Some(parse_lassos(&read(p)?, &a)?),
        None => None,
    };
    let synt = l.transition_monoid(cap)?;
    let outs = synthesize_all(&synt.hom, &g)?;
    let e = language_expr(&outs, &synt.accepting_elements());
    let equivalent = compile_finite(&e, &a)?.equivalent(&l)?;
    let v = least_variety(&g);
    let val = validate(&e, &a, v, dmax);
    let tree = e.tree_size();
    let mut r = Report::new();
    r.put("monoid_size", synt.monoid.size())
        .put("group", g.spec().to_string())
        .put("accepting_elements", synt.accepting_elements().len())
        .put("dag_size", e.dag_size())
        .put("tree_size", tree)
        .put("equivalent", equivalent)
        .put("variety", v.to_string())
        .put("valid", val.ok)
        .put("max_delay", val.max_delay().map_or(Value::Null, Value::from));
    if tree <= print_limit {
        r.put("expr", e.to_sexp(&a));
    } else {
        r.put("expr", format!("omitted (tree size {tree} > {print_limit})"));
    }
    if let Some(p) = out {
        if tree > WRITE_LIMIT {
            return Err(Fail::Run(format!("expression tree has {tree} nodes; refusing to write more than {WRITE_LIMIT}")));
        }
        write(p, &e.to_sexp_pretty(&a))?;
        r.put("written", p.display().to_string());
    }
    let mut ok = equivalent && val.ok;
    if let Some(lassos) = lassos {
        let b = BuchiAutomaton::from_dfa(&l);
        let exp = birget_rhodes_reachable(&synt.hom, cap)?;
        let psi = exp.hom.as_ref().expect("reachable expansion");
        let nf = synthesize_omega(psi, &g, &b, &config.omega_options())?;
        let nb = nf.compile(&a)?;
        let sampled = lasso_mismatches(&nb, &b, config.lasso_bound, config.random_lassos, config.seed).len();
        r.put("omega_monoid_size", exp.monoid.size())
            .put("omega_summands", nf.summands.len())
            .put("omega_sample_mismatches", sampled);
        let mut listed = 0;
        for (i, (lit, w)) in lassos.iter().enumerate() {
            let inside = nb.accepts(w);
            listed += usize::from(inside != b.accepts(w));
            r.put(format!("lasso_{i}"), format!("{lit} {}", if inside { "yes" } else { "no" }));
        }
        r.put("omega_listed_mismatches", listed);
        ok &= sampled == 0 && listed == 0;
    }
    Ok((r, ok))
}

fn demo_example14(config: &RunConfig) -> CmdResult {
    let cap = config.limits.size_cap;
    let l = example14::dfa().minimize();
    let a = l.alphabet().clone();
    let synt = l.transition_monoid(cap)?;
    let m = &synt.monoid;
    let s3 = m
        .maximal_subgroups()
        .iter()
        .filter(|g| name_group(g) == GroupName::S3)
        .count();
    let solvable = monoid_in_hbar(m, VarietySpec::Solvable).verdict;
    let abelian = monoid_in_hbar(m, VarietySpec::Abelian).verdict;
    let t = decompose(m);
    let rep = verify_tree(&t, m);
    let leaves: Vec<String> = t.leaf_names().iter().map(GroupName::to_string).collect();
    let g = GroupRef::sym(3)?;
    let outs = synthesize_all(&synt.hom, &g)?;
    let e = language_expr(&outs, &synt.accepting_elements());
    let equivalent = compile_finite(&e, &a)?.equivalent(&l)?;
    let val = validate(&e, &a, VarietySpec::Solvable, config.dmax);
    let mut r = Report::new();
    r.put("dfa_states", l.num_states())
        .put("monoid_size", m.size())
        .put("subgroup_orders", subgroup_orders(m))
        .put("s3_subgroups", s3)
        .put("hbar_solvable", solvable)
        .put("hbar_abelian", abelian)
        .put("decomposition_nodes", t.node_count())
        .put("decomposition_leaves", leaves)
        .put("decomposition_verified", rep.ok)
        .put("synthesis_group", g.spec().to_string())
        .put("synthesis_equivalent", equivalent)
        .put("synthesis_valid", val.ok)
        .put("synthesis_max_delay", val.max_delay().map_or(Value::Null, Value::from))
        .put("synthesis_dag_size", e.dag_size())
        .put("synthesis_tree_size", e.tree_size());
    let ok = s3 == 1 && solvable && !abelian && rep.ok && equivalent && val.ok;
    Ok((r, ok))
}
