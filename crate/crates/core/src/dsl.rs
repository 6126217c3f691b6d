//! Text input format.
//!
//! ```text
//! field QQ                      # or GF(p)
//! quiver {
//!   vertices 1, 2, 3
//!   arrow a: 1 -> 2
//!   arrow b: 1 -> 2
//!   arrow c: 2 -> 3
//! }
//! ideal I { c*a }
//! ideal J { c*a - c*b }
//! ideal Z { }                   # the zero ideal
//! tree { a, c }
//! budget max_nodes = 5000
//! ```
//!
//! Products are written right to left: `f*e*a` is the path that runs `a`,
//! then `e`, then `f`. A term may start with an integer or `p/q`
//! coefficient followed by `*`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigInt;
use thiserror::Error;

use crate::exactla::{Field, Scalar};
use crate::palg::{Element, IdealData, PathAlgebra};
use crate::quiver::{Path, Quiver, SpanningTree};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

pub const BUDGET_KEYS: &[&str] = &[
    "max_word_len",
    "max_nodes",
    "max_ideals",
    "max_enumeration",
    "max_candidates",
    "rational_grid",
];

#[derive(Clone, Debug)]
pub struct NamedIdeal {
    pub name: String,
    pub relations: Vec<Element>,
    pub ideal: IdealData,
}

#[derive(Clone, Debug)]
pub struct InputDocument {
    pub algebra: Arc<PathAlgebra>,
    pub ideals: Vec<NamedIdeal>,
    pub tree: Option<Vec<String>>,
    pub budgets: BTreeMap<String, u64>,
}

impl InputDocument {
    pub fn field(&self) -> Field {
        self.algebra.field()
    }

    pub fn quiver(&self) -> &Quiver {
        self.algebra.quiver()
    }

    pub fn ideal(&self, name: &str) -> Option<&NamedIdeal> {
        self.ideals.iter().find(|i| i.name == name)
    }

    /// The declared tree, or the default breadth-first one.
    pub fn spanning_tree(&self) -> SpanningTree {
        let q = self.quiver();
        match &self.tree {
            Some(names) => {
                let ids: Vec<usize> = names.iter().map(|n| q.arrow_id(n).expect("checked at parse")).collect();
                q.spanning_tree(0, Some(&ids)).expect("checked at parse")
            }
            None => q.default_tree(),
        }
    }

    /// Canonical text form; parsing it gives back the same document.
    pub fn to_dsl(&self) -> String {
        let q = self.quiver();
        let mut out = String::new();
        let _ = writeln!(out, "field {}", self.field());
        out.push_str("quiver {\n");
        let _ = writeln!(out, "  vertices {}", q.vertex_names().join(", "));
        for a in q.arrows() {
            let _ = writeln!(out, "  arrow {}: {} -> {}", a.name, q.vertex_name(a.source), q.vertex_name(a.target));
        }
        out.push_str("}\n");
        for i in &self.ideals {
            let rels: Vec<String> = i.relations.iter().map(|r| format_relation(&self.algebra, r)).collect();
            if rels.is_empty() {
                let _ = writeln!(out, "ideal {} {{ }}", i.name);
            } else {
                let _ = writeln!(out, "ideal {} {{ {} }}", i.name, rels.join("; "));
            }
        }
        if let Some(t) = &self.tree {
            let _ = writeln!(out, "tree {{ {} }}", t.join(", "));
        }
        for (k, v) in &self.budgets {
            let _ = writeln!(out, "budget {k} = {v}");
        }
        out
    }
}

/// Path as a DSL product, leftmost arrow last in traversal.
pub fn format_path(q: &Quiver, p: &Path) -> String {
    if p.is_trivial() {
        return format!("e{}", q.vertex_name(p.source()));
    }
    p.arrows().iter().rev().map(|&a| q.arrow(a).name.as_str()).collect::<Vec<_>>().join("*")
}

pub fn format_relation(alg: &PathAlgebra, e: &Element) -> String {
    let q = alg.quiver();
    let mut out = String::new();
    for (k, (&p, c)) in e.terms().iter().rev().enumerate() {
        let path = format_path(q, alg.path(p));
        let (neg, mag) = signed_parts(c);
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if mag != "1" {
            out.push_str(&mag);
            out.push('*');
        }
        out.push_str(&path);
    }
    out
}

fn signed_parts(c: &Scalar) -> (bool, String) {
    match c {
        Scalar::Rational(r) if r < &num_rational::BigRational::from_integer(BigInt::from(0)) => (true, (-r).to_string()),
        _ => (false, c.to_string()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(String),
    Sym(char),
    Arrow,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let column = i + 1;
            let push = |out: &mut Vec<Token>, tok| {
                out.push(Token {
                    tok,
                    line: ln + 1,
                    column,
                })
            };
            if c.is_whitespace() {
                i += 1;
            } else if c == '-' && chars.get(i + 1) == Some(&'>') {
                push(&mut out, Tok::Arrow);
                i += 2;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                // A digit run glued to letters is a name such as `1a`.
                if i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                        i += 1;
                    }
                    push(&mut out, Tok::Ident(chars[start..i].iter().collect()));
                } else {
                    push(&mut out, Tok::Num(chars[start..i].iter().collect()));
                }
            } else if c.is_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                push(&mut out, Tok::Ident(chars[start..i].iter().collect()));
            } else if "{}(),:;*+-/=".contains(c) {
                push(&mut out, Tok::Sym(c));
                i += 1;
            } else {
                return Err(ParseError {
                    line: ln + 1,
                    column,
                    message: format!("unexpected character `{c}`"),
                });
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map(|t| (t.line, t.column)).unwrap_or(self.end)
    }

    fn err_at<T>(&self, at: (usize, usize), message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            line: at.0,
            column: at.1,
            message: message.into(),
        })
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        self.err_at(self.here(), message)
    }

    fn describe(&self) -> String {
        match self.peek() {
            None => "end of input".into(),
            Some(Tok::Ident(s)) | Some(Tok::Num(s)) => format!("`{s}`"),
            Some(Tok::Sym(c)) => format!("`{c}`"),
            Some(Tok::Arrow) => "`->`".into(),
        }
    }

    fn sym(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected `{c}`, found {}", self.describe()))
        }
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn keyword(&mut self, k: &str) -> Result<(), ParseError> {
        if matches!(self.peek(), Some(Tok::Ident(s)) if s == k) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected `{k}`, found {}", self.describe()))
        }
    }

    fn at_keyword(&self, k: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == k)
    }

    /// Identifier or bare number, as vertex names may be numeric.
    fn name(&mut self) -> Result<String, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Ident(s)) | Some(Tok::Num(s)) => {
                self.pos += 1;
                Ok(s)
            }
            _ => self.err(format!("expected a name, found {}", self.describe())),
        }
    }

    fn number(&mut self) -> Result<BigInt, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Num(s)) => {
                self.pos += 1;
                Ok(s.parse().expect("digits"))
            }
            _ => self.err(format!("expected a number, found {}", self.describe())),
        }
    }
}

pub fn parse_input(text: &str) -> Result<InputDocument, ParseError> {
    let toks = lex(text)?;
    let end = (text.lines().count().max(1), text.lines().last().map_or(1, |l| l.chars().count() + 1));
    let mut p = Parser { toks, pos: 0, end };

    p.keyword("field")?;
    let field_at = p.here();
    let field = if p.at_keyword("QQ") {
        p.pos += 1;
        Field::Rational
    } else {
        p.keyword("GF")?;
        p.sym('(')?;
        let n_at = p.here();
        let n = p.number()?;
        p.sym(')')?;
        let n: u64 = n.try_into().or_else(|_| p.err_at(n_at, "characteristic too large"))?;
        match Field::prime(n) {
            Some(f) => f,
            None => return p.err_at(n_at, format!("{n} is not prime")),
        }
    };
    let _ = field_at;

    p.keyword("quiver")?;
    let quiver_at = p.here();
    p.sym('{')?;
    p.keyword("vertices")?;
    let mut vertices = vec![p.name()?];
    while p.eat_sym(',') {
        vertices.push(p.name()?);
    }
    let mut arrows = Vec::new();
    while p.at_keyword("arrow") {
        p.pos += 1;
        let name_at = p.here();
        let name = match p.peek().cloned() {
            Some(Tok::Ident(s)) => {
                p.pos += 1;
                s
            }
            _ => return p.err(format!("expected an arrow name, found {}", p.describe())),
        };
        p.sym(':')?;
        let s = p.name()?;
        if p.peek() != Some(&Tok::Arrow) {
            return p.err(format!("expected `->`, found {}", p.describe()));
        }
        p.pos += 1;
        let t = p.name()?;
        arrows.push((name, s, t, name_at));
    }
    if arrows.is_empty() {
        return p.err("expected at least one `arrow`");
    }
    p.sym('}')?;
    let quiver = Quiver::new(
        vertices.iter().cloned(),
        arrows.iter().map(|(a, s, t, _)| (a.clone(), s.clone(), t.clone())),
    )
    .or_else(|e| p.err_at(quiver_at, e.to_string()))?;
    let alg = PathAlgebra::new(quiver, field);
    let q = alg.quiver();

    let mut ideals: Vec<NamedIdeal> = Vec::new();
    while p.at_keyword("ideal") {
        p.pos += 1;
        let name_at = p.here();
        let name = p.name()?;
        if ideals.iter().any(|i| i.name == name) {
            return p.err_at(name_at, format!("duplicate ideal `{name}`"));
        }
        p.sym('{')?;
        let mut relations = Vec::new();
        if !p.eat_sym('}') {
            loop {
                relations.push(parse_relation(&mut p, &alg)?);
                if p.eat_sym(';') {
                    continue;
                }
                p.sym('}')?;
                break;
            }
        }
        let ideal = IdealData::groebner_basis(&alg, relations.clone()).or_else(|e| p.err_at(name_at, e.to_string()))?;
        let adm = ideal.is_admissible();
        if !adm.admissible {
            return p.err_at(name_at, format!("ideal `{name}` is not admissible: contains {}", adm.short_paths.iter().map(|&i| alg.path_name(i)).collect::<Vec<_>>().join(", ")));
        }
        ideals.push(NamedIdeal { name, relations, ideal });
    }

    let mut tree = None;
    let mut budgets = BTreeMap::new();
    while p.peek().is_some() {
        if p.at_keyword("tree") {
            p.pos += 1;
            let at = p.here();
            p.sym('{')?;
            let mut names = Vec::new();
            if !p.eat_sym('}') {
                loop {
                    let n_at = p.here();
                    let n = p.name()?;
                    if q.arrow_id(&n).is_err() {
                        return p.err_at(n_at, format!("unknown arrow `{n}`"));
                    }
                    names.push(n);
                    if !p.eat_sym(',') {
                        break;
                    }
                }
                p.sym('}')?;
            }
            let ids: Vec<usize> = names.iter().map(|n| q.arrow_id(n).unwrap()).collect();
            q.spanning_tree(0, Some(&ids)).or_else(|e| p.err_at(at, e.to_string()))?;
            tree = Some(names);
        } else if p.at_keyword("budget") {
            p.pos += 1;
            let k_at = p.here();
            let k = p.name()?;
            if !BUDGET_KEYS.contains(&k.as_str()) {
                return p.err_at(k_at, format!("unknown budget key `{k}`"));
            }
            p.sym('=')?;
            let v_at = p.here();
            let v: u64 = p.number()?.try_into().or_else(|_| p.err_at(v_at, "budget too large"))?;
            budgets.insert(k, v);
        } else {
            return p.err(format!("expected `ideal`, `tree` or `budget`, found {}", p.describe()));
        }
    }
    Ok(InputDocument {
        algebra: alg,
        ideals,
        tree,
        budgets,
    })
}

fn parse_relation(p: &mut Parser, alg: &Arc<PathAlgebra>) -> Result<Element, ParseError> {
    let field = alg.field();
    let q = alg.quiver();
    let mut out = Element::zero();
    let mut first = true;
    let mut parallel: Option<(usize, usize, (usize, usize))> = None;
    loop {
        let mut sign = 1i64;
        if p.eat_sym('-') {
            sign = -1;
        } else if !first && !p.eat_sym('+') {
            break;
        } else if first {
            p.eat_sym('+');
        }
        first = false;
        let term_at = p.here();
        let mut coeff = field.from_i64(sign);
        if let Some(Tok::Num(_)) = p.peek() {
            let num = p.number()?;
            let den = if p.eat_sym('/') { p.number()? } else { BigInt::from(1) };
            match field.from_ratio(&num, &den) {
                Some(c) => coeff = &coeff * &c,
                None => return p.err_at(term_at, "coefficient denominator vanishes in the field"),
            }
            p.sym('*')?;
        }
        let mut names = Vec::new();
        loop {
            let n_at = p.here();
            let n = match p.peek().cloned() {
                Some(Tok::Ident(s)) => {
                    p.pos += 1;
                    s
                }
                _ => return p.err(format!("expected an arrow, found {}", p.describe())),
            };
            if q.arrow_id(&n).is_err() {
                return p.err_at(n_at, format!("unknown arrow `{n}`"));
            }
            names.push(n);
            if !p.eat_sym('*') {
                break;
            }
        }
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let path = match Path::from_written(q, &refs) {
            Ok(path) => path,
            Err(_) => return p.err_at(term_at, format!("`{}` is not composable", names.join("*"))),
        };
        match parallel {
            None => parallel = Some((path.source(), path.target(), term_at)),
            Some((s, t, _)) if (s, t) != (path.source(), path.target()) => {
                return p.err_at(term_at, "relation terms are not parallel");
            }
            _ => {}
        }
        out.add_term(alg.path_index(&path), &coeff);
    }
    Ok(out)
}
