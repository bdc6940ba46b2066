use std::collections::{BTreeSet, HashMap};
use std::fmt::Write;
use std::path::Path;

use lexpr::Value;

use super::{GroupRef, GroupSpec, Node, SdExpr, StarNode};
use crate::automata::Alphabet;
use crate::error::{parse_err, Error, Result};
use crate::monoid::Elem;

/// An expression read from text, with the alphabet its letters refer to.
#[derive(Debug, Clone)]
pub struct ParsedExpr {
    pub expr: SdExpr,
    pub alphabet: Alphabet,
}

/// Reads the S-expression syntax. Without an alphabet, the letters that
/// occur are used, sorted by name. Relative `(file ..)` paths resolve
/// against `base`.
pub fn parse_sexp(text: &str, alphabet: Option<&Alphabet>, base: Option<&Path>) -> Result<ParsedExpr> {
    let value = lexpr::from_str(text).map_err(|e| {
        let line = e.location().map_or(0, |l| l.line());
        parse_err(line, e.to_string())
    })?;
    let alphabet = match alphabet {
        Some(a) => a.clone(),
        None => {
            let mut names = BTreeSet::new();
            collect_letters(&value, &mut names)?;
            Alphabet::new(names.into_iter().collect::<Vec<String>>())?
        }
    };
    let mut reader = Reader {
        alphabet: &alphabet,
        base,
        groups: HashMap::new(),
    };
    let expr = reader.expr(&value)?;
    Ok(ParsedExpr { expr, alphabet })
}

fn bad(message: impl Into<String>) -> Error {
    parse_err(0, message)
}

fn items(v: &Value) -> Result<(String, Vec<&Value>)> {
    let list = v
        .to_ref_vec()
        .ok_or_else(|| bad(format!("expected a list, found `{v}`")))?;
    let head = list
        .first()
        .and_then(|h| h.as_symbol())
        .ok_or_else(|| bad(format!("expected a keyword at the head of `{v}`")))?;
    Ok((head.to_string(), list[1..].to_vec()))
}

fn letter_name(v: &Value) -> Result<String> {
    if let Some(s) = v.as_symbol().or_else(|| v.as_str()) {
        return Ok(s.to_string());
    }
    if let Some(n) = v.as_u64() {
        return Ok(n.to_string());
    }
    Err(bad(format!("bad letter `{v}`")))
}

fn collect_letters(v: &Value, out: &mut BTreeSet<String>) -> Result<()> {
    if let Some(list) = v.to_ref_vec() {
        if list.len() == 2 && list[0].as_symbol() == Some("letter") {
            out.insert(letter_name(list[1])?);
            return Ok(());
        }
        for x in list {
            collect_letters(x, out)?;
        }
    }
    Ok(())
}

fn index(v: &Value) -> Result<usize> {
    v.as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| bad(format!("expected a non-negative integer, found `{v}`")))
}

struct Reader<'a> {
    alphabet: &'a Alphabet,
    base: Option<&'a Path>,
    groups: HashMap<GroupSpec, GroupRef>,
}

impl Reader<'_> {
    fn expr(&mut self, v: &Value) -> Result<SdExpr> {
        let (head, args) = items(v)?;
        let arity = |n: usize| -> Result<()> {
            if args.len() == n {
                Ok(())
            } else {
                Err(bad(format!("`{head}` takes {n} arguments in `{v}`")))
            }
        };
        match head.as_str() {
            "empty" => {
                arity(0)?;
                Ok(SdExpr::empty())
            }
            "letter" => {
                arity(1)?;
                let name = letter_name(args[0])?;
                let a = self
                    .alphabet
                    .index(&name)
                    .ok_or_else(|| bad(format!("letter `{name}` is not in the alphabet")))?;
                Ok(SdExpr::letter(a))
            }
            "union" => {
                if args.is_empty() {
                    return Err(bad("`union` needs at least one member"));
                }
                let parts = args.iter().map(|a| self.expr(a)).collect::<Result<_>>()?;
                Ok(SdExpr::union(parts))
            }
            "concat" => {
                arity(2)?;
                Ok(SdExpr::concat(self.expr(args[0])?, self.expr(args[1])?))
            }
            "star" | "omega" => {
                let group = self.group(args.first().ok_or_else(|| bad("missing group"))?)?;
                let node = self.pieces(group, &args[1..])?;
                Ok(SdExpr::new(if head == "star" {
                    Node::Star(node)
                } else {
                    Node::Omega(node)
                }))
            }
            "starcoset" => {
                if args.len() < 2 {
                    return Err(bad("`starcoset` needs a group and a target"));
                }
                let group = self.group(args[0])?;
                let target = index(args[1])?;
                if target >= group.order() {
                    return Err(bad(format!("target {target} out of range for {group}")));
                }
                let node = self.pieces(group, &args[2..])?;
                Ok(SdExpr::new(Node::StarCoset(node, target)))
            }
            other => Err(bad(format!("unknown form `{other}`"))),
        }
    }

    fn pieces(&mut self, group: GroupRef, args: &[&Value]) -> Result<StarNode> {
        let mut pieces = Vec::with_capacity(args.len());
        for p in args {
            let (head, xs) = items(p)?;
            if head != "piece" || xs.len() != 2 {
                return Err(bad(format!("expected (piece <g> expr), found `{p}`")));
            }
            let g = index(xs[0])?;
            if g >= group.order() {
                return Err(bad(format!("label {g} out of range for {group}")));
            }
            pieces.push((g, self.expr(xs[1])?));
        }
        Ok(StarNode::new(group, pieces))
    }

    fn group(&mut self, v: &Value) -> Result<GroupRef> {
        let (head, args) = items(v)?;
        let spec = match (head.as_str(), args.as_slice()) {
            ("trivial", []) => GroupSpec::Trivial,
            ("cyclic", [n]) => GroupSpec::Cyclic(index(n)?),
            ("sym", [n]) => GroupSpec::Sym(index(n)?),
            ("file", [p]) => {
                let p = p.as_str().ok_or_else(|| bad("file path must be a string"))?;
                GroupSpec::File(p.to_string())
            }
            _ => return Err(bad(format!("bad group `{v}`"))),
        };
        if let Some(g) = self.groups.get(&spec) {
            return Ok(g.clone());
        }
        let g = match (&spec, self.base) {
            (GroupSpec::File(p), Some(base)) if Path::new(p).is_relative() => {
                let full = base.join(p);
                let loaded = GroupRef::from_file(&full.to_string_lossy())?;
                GroupRef::from_table(spec.clone(), loaded.table().clone())?
            }
            _ => GroupRef::from_spec(&spec)?,
        };
        self.groups.insert(spec, g.clone());
        Ok(g)
    }
}

impl SdExpr {
    /// One-line S-expression.
    pub fn to_sexp(&self, alphabet: &Alphabet) -> String {
        let mut out = String::new();
        self.write_sexp(alphabet, &mut out, None);
        out
    }

    /// S-expression with one node per line, indented by depth.
    pub fn to_sexp_pretty(&self, alphabet: &Alphabet) -> String {
        let mut out = String::new();
        self.write_sexp(alphabet, &mut out, Some(0));
        out.push('\n');
        out
    }

    fn write_sexp(&self, alphabet: &Alphabet, out: &mut String, indent: Option<usize>) {
        // Small nodes stay on one line.
        let inner = indent.filter(|_| self.tree_size() > 4).map(|d| d + 1);
        let write_pieces = |out: &mut String, pieces: &[(Elem, SdExpr)]| {
            for (g, p) in pieces {
                sep_with(out, inner);
                let _ = write!(out, "(piece {g} ");
                p.write_sexp(alphabet, out, inner);
                out.push(')');
            }
        };
        match self.node() {
            Node::Empty => out.push_str("(empty)"),
            Node::Letter(a) => {
                let _ = write!(out, "(letter {})", alphabet.name(*a));
            }
            Node::Union(parts) => {
                out.push_str("(union");
                for p in parts {
                    sep_with(out, inner);
                    p.write_sexp(alphabet, out, inner);
                }
                out.push(')');
            }
            Node::Concat(l, r) => {
                out.push_str("(concat");
                for p in [l, r] {
                    sep_with(out, inner);
                    p.write_sexp(alphabet, out, inner);
                }
                out.push(')');
            }
            Node::Star(s) => {
                let _ = write!(out, "(star {}", s.group);
                write_pieces(out, &s.pieces);
                out.push(')');
            }
            Node::Omega(s) => {
                let _ = write!(out, "(omega {}", s.group);
                write_pieces(out, &s.pieces);
                out.push(')');
            }
            Node::StarCoset(s, g) => {
                let _ = write!(out, "(starcoset {} {g}", s.group);
                write_pieces(out, &s.pieces);
                out.push(')');
            }
        }
    }
}

fn sep_with(out: &mut String, indent: Option<usize>) {
    match indent {
        Some(d) => {
            out.push('\n');
            out.extend(std::iter::repeat_n("  ", d));
        }
        None => out.push(' '),
    }
}
