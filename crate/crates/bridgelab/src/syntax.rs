//! Object language: terms, formulas, quotation contexts, and the ASCII
//! concrete syntax.
//!
//! Grammar (precedence low to high: `<->`, `->` right-assoc, `|`, `&`,
//! unary `~`/`Fut`/`Simp`, atoms):
//!
//! ```text
//! formula  := quant | bin
//! quant    := ("forall" | "exists") IDENT "." formula
//! bin      := iff ; iff := imp ("<->" imp)* ; imp := or ("->" imp)?
//! or       := and ("|" and)* ; and := unary ("&" unary)*
//! unary    := "~" unary | "Fut" unary | "Simp" unary | atom
//! atom     := "_|_" | "True" "(" term ")" | IDENT "(" term ("," term)* ")"
//!           | IDENT | "(" formula ")"
//! term     := IDENT
//! ```
//!
//! A bare identifier in formula position is either a defined formula
//! abbreviation (see [`parse_context`]) or a propositional (0-ary) atom.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

pub type Ident = String;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    /// A constant symbol, including sentence-name constants.
    Const(Ident),
    /// A variable; only ever introduced by a quantifier binder.
    Var(Ident),
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Const(s) | Term::Var(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    #[default]
    Falsum,
    Atom(Ident, Vec<Term>),
    /// The truth predicate `True(t)`.
    TruePred(Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Cond(Box<Formula>, Box<Formula>),
    Bicond(Box<Formula>, Box<Formula>),
    Forall(Ident, Box<Formula>),
    Exists(Ident, Box<Formula>),
    /// The future operator.
    Fut(Box<Formula>),
    /// The meta-assertion ("simpliciter") operator.
    Simp(Box<Formula>),
}

impl Formula {
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }
    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Box::new(l), Box::new(r))
    }
    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::Or(Box::new(l), Box::new(r))
    }
    pub fn cond(l: Formula, r: Formula) -> Formula {
        Formula::Cond(Box::new(l), Box::new(r))
    }
    pub fn bicond(l: Formula, r: Formula) -> Formula {
        Formula::Bicond(Box::new(l), Box::new(r))
    }
    pub fn fut(f: Formula) -> Formula {
        Formula::Fut(Box::new(f))
    }
    pub fn simp(f: Formula) -> Formula {
        Formula::Simp(Box::new(f))
    }

    fn is_binary(&self) -> bool {
        matches!(
            self,
            Formula::And(..) | Formula::Or(..) | Formula::Cond(..) | Formula::Bicond(..)
        )
    }

    fn is_quant(&self) -> bool {
        matches!(self, Formula::Forall(..) | Formula::Exists(..))
    }

    pub fn free_vars(&self) -> BTreeSet<Ident> {
        fn go(f: &Formula, bound: &mut Vec<Ident>, acc: &mut BTreeSet<Ident>) {
            match f {
                Formula::Falsum => {}
                Formula::Atom(_, args) => {
                    for t in args {
                        if let Term::Var(v) = t {
                            if !bound.contains(v) {
                                acc.insert(v.clone());
                            }
                        }
                    }
                }
                Formula::TruePred(t) => {
                    if let Term::Var(v) = t {
                        if !bound.contains(v) {
                            acc.insert(v.clone());
                        }
                    }
                }
                Formula::Not(a) | Formula::Fut(a) | Formula::Simp(a) => go(a, bound, acc),
                Formula::And(a, b)
                | Formula::Or(a, b)
                | Formula::Cond(a, b)
                | Formula::Bicond(a, b) => {
                    go(a, bound, acc);
                    go(b, bound, acc);
                }
                Formula::Forall(v, body) | Formula::Exists(v, body) => {
                    bound.push(v.clone());
                    go(body, bound, acc);
                    bound.pop();
                }
            }
        }
        let mut acc = BTreeSet::new();
        go(self, &mut Vec::new(), &mut acc);
        acc
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Constants occurring anywhere in the formula.
    pub fn constants(&self) -> BTreeSet<Ident> {
        fn term(t: &Term, acc: &mut BTreeSet<Ident>) {
            if let Term::Const(c) = t {
                acc.insert(c.clone());
            }
        }
        fn go(f: &Formula, acc: &mut BTreeSet<Ident>) {
            match f {
                Formula::Falsum => {}
                Formula::Atom(_, args) => args.iter().for_each(|t| term(t, acc)),
                Formula::TruePred(t) => term(t, acc),
                Formula::Not(a) | Formula::Fut(a) | Formula::Simp(a) => go(a, acc),
                Formula::And(a, b)
                | Formula::Or(a, b)
                | Formula::Cond(a, b)
                | Formula::Bicond(a, b) => {
                    go(a, acc);
                    go(b, acc);
                }
                Formula::Forall(_, b) | Formula::Exists(_, b) => go(b, acc),
            }
        }
        let mut acc = BTreeSet::new();
        go(self, &mut acc);
        acc
    }

    pub fn contains_fut(&self) -> bool {
        match self {
            Formula::Fut(_) => true,
            Formula::Falsum | Formula::Atom(..) | Formula::TruePred(_) => false,
            Formula::Not(a) | Formula::Simp(a) => a.contains_fut(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Cond(a, b)
            | Formula::Bicond(a, b) => a.contains_fut() || b.contains_fut(),
            Formula::Forall(_, b) | Formula::Exists(_, b) => b.contains_fut(),
        }
    }

    pub fn contains_true_pred(&self) -> bool {
        match self {
            Formula::TruePred(_) => true,
            Formula::Falsum | Formula::Atom(..) => false,
            Formula::Not(a) | Formula::Fut(a) | Formula::Simp(a) => a.contains_true_pred(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Cond(a, b)
            | Formula::Bicond(a, b) => a.contains_true_pred() || b.contains_true_pred(),
            Formula::Forall(_, b) | Formula::Exists(_, b) => b.contains_true_pred(),
        }
    }
}

/// Canonical rendering; `parse(render(f))` is the identity on ASTs.
impl fmt::Display for Formula {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn sub(f: &Formula, out: &mut fmt::Formatter<'_>) -> fmt::Result {
            if f.is_binary() || f.is_quant() {
                write!(out, "(")?;
                top(f, out)?;
                write!(out, ")")
            } else {
                top(f, out)
            }
        }
        fn top(f: &Formula, out: &mut fmt::Formatter<'_>) -> fmt::Result {
            match f {
                Formula::Falsum => write!(out, "_|_"),
                Formula::Atom(p, args) => {
                    write!(out, "{p}")?;
                    if !args.is_empty() {
                        write!(out, "(")?;
                        for (i, t) in args.iter().enumerate() {
                            if i > 0 {
                                write!(out, ",")?;
                            }
                            write!(out, "{t}")?;
                        }
                        write!(out, ")")?;
                    }
                    Ok(())
                }
                Formula::TruePred(t) => write!(out, "True({t})"),
                Formula::Not(a) => {
                    write!(out, "~")?;
                    sub(a, out)
                }
                Formula::Fut(a) => {
                    write!(out, "Fut ")?;
                    sub(a, out)
                }
                Formula::Simp(a) => {
                    write!(out, "Simp ")?;
                    sub(a, out)
                }
                Formula::And(a, b) => {
                    sub(a, out)?;
                    write!(out, " & ")?;
                    sub(b, out)
                }
                Formula::Or(a, b) => {
                    sub(a, out)?;
                    write!(out, " | ")?;
                    sub(b, out)
                }
                Formula::Cond(a, b) => {
                    sub(a, out)?;
                    write!(out, " -> ")?;
                    sub(b, out)
                }
                Formula::Bicond(a, b) => {
                    sub(a, out)?;
                    write!(out, " <-> ")?;
                    sub(b, out)
                }
                Formula::Forall(v, b) => {
                    write!(out, "forall {v}. ")?;
                    top(b, out)
                }
                Formula::Exists(v, b) => {
                    write!(out, "exists {v}. ")?;
                    top(b, out)
                }
            }
        }
        top(self, out)
    }
}

pub fn render(f: &Formula) -> String {
    f.to_string()
}

/// Bindings from sentence-name constants to the closed formulas they quote.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QuotationContext {
    names: BTreeMap<Ident, Formula>,
}

impl QuotationContext {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind(&mut self, name: impl Into<Ident>, f: Formula) {
        self.names.insert(name.into(), f);
    }

    pub fn get(&self, name: &str) -> Option<&Formula> {
        self.names.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.names.contains_key(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Ident, &Formula)> {
        self.names.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }
}

pub type Definitions = BTreeMap<Ident, Formula>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SyntaxError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unbound sentence name `{name}` at byte {pos}")]
    UnboundName { pos: usize, name: String },
    #[error("cannot substitute a variable `{0}`; only constants are allowed")]
    SubstituteVariable(String),
}

impl SyntaxError {
    /// Byte offset of the error in the input, when positional.
    pub fn position(&self) -> Option<usize> {
        match self {
            SyntaxError::Parse { pos, .. } | SyntaxError::UnboundName { pos, .. } => Some(*pos),
            SyntaxError::SubstituteVariable(_) => None,
        }
    }
}

const KEYWORDS: &[&str] = &["forall", "exists", "Fut", "Simp", "True"];

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Arrow,
    DArrow,
    Pipe,
    Amp,
    Tilde,
    Falsum,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Dot => write!(f, "`.`"),
            Tok::Arrow => write!(f, "`->`"),
            Tok::DArrow => write!(f, "`<->`"),
            Tok::Pipe => write!(f, "`|`"),
            Tok::Amp => write!(f, "`&`"),
            Tok::Tilde => write!(f, "`~`"),
            Tok::Falsum => write!(f, "`_|_`"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, SyntaxError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if text[i..].starts_with("_|_") {
            toks.push((Tok::Falsum, i));
            i += 3;
            continue;
        }
        if text[i..].starts_with("<->") {
            toks.push((Tok::DArrow, i));
            i += 3;
            continue;
        }
        if text[i..].starts_with("->") {
            toks.push((Tok::Arrow, i));
            i += 2;
            continue;
        }
        match c {
            '(' => {
                toks.push((Tok::LParen, i));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RParen, i));
                i += 1;
            }
            ',' => {
                toks.push((Tok::Comma, i));
                i += 1;
            }
            '.' => {
                toks.push((Tok::Dot, i));
                i += 1;
            }
            '|' => {
                toks.push((Tok::Pipe, i));
                i += 1;
            }
            '&' => {
                toks.push((Tok::Amp, i));
                i += 1;
            }
            '~' => {
                toks.push((Tok::Tilde, i));
                i += 1;
            }
            _ if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len() {
                    let d = bytes[i] as char;
                    if d.is_ascii_alphanumeric() || d == '_' {
                        i += 1;
                    } else {
                        break;
                    }
                }
                toks.push((Tok::Ident(text[start..i].to_string()), start));
            }
            _ => {
                return Err(SyntaxError::Parse {
                    pos: i,
                    msg: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    names: &'a BTreeSet<Ident>,
    defs: &'a Definitions,
    binders: Vec<Ident>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok) -> Result<(), SyntaxError> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.err(format!("expected {t}")))
        }
    }

    fn err(&self, msg: String) -> SyntaxError {
        SyntaxError::Parse {
            pos: self.here(),
            msg,
        }
    }

    fn formula(&mut self) -> Result<Formula, SyntaxError> {
        if let Some(Tok::Ident(kw)) = self.peek() {
            if kw == "forall" || kw == "exists" {
                let universal = kw == "forall";
                self.bump();
                let var = match self.bump() {
                    Some(Tok::Ident(v)) if !KEYWORDS.contains(&v.as_str()) => v,
                    _ => return Err(self.err("expected variable after quantifier".into())),
                };
                self.expect(&Tok::Dot)?;
                self.binders.push(var.clone());
                let body = self.formula()?;
                self.binders.pop();
                return Ok(if universal {
                    Formula::Forall(var, Box::new(body))
                } else {
                    Formula::Exists(var, Box::new(body))
                });
            }
        }
        self.iff()
    }

    fn iff(&mut self) -> Result<Formula, SyntaxError> {
        let mut l = self.imp()?;
        while self.eat(&Tok::DArrow) {
            let r = self.imp()?;
            l = Formula::bicond(l, r);
        }
        Ok(l)
    }

    fn imp(&mut self) -> Result<Formula, SyntaxError> {
        let l = self.or()?;
        if self.eat(&Tok::Arrow) {
            let r = self.imp()?;
            Ok(Formula::cond(l, r))
        } else {
            Ok(l)
        }
    }

    fn or(&mut self) -> Result<Formula, SyntaxError> {
        let mut l = self.and()?;
        while self.eat(&Tok::Pipe) {
            let r = self.and()?;
            l = Formula::or(l, r);
        }
        Ok(l)
    }

    fn and(&mut self) -> Result<Formula, SyntaxError> {
        let mut l = self.unary()?;
        while self.eat(&Tok::Amp) {
            let r = self.unary()?;
            l = Formula::and(l, r);
        }
        Ok(l)
    }

    fn unary(&mut self) -> Result<Formula, SyntaxError> {
        match self.peek() {
            Some(Tok::Tilde) => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::Ident(s)) if s == "Fut" => {
                self.bump();
                Ok(Formula::fut(self.unary()?))
            }
            Some(Tok::Ident(s)) if s == "Simp" => {
                self.bump();
                Ok(Formula::simp(self.unary()?))
            }
            _ => self.atom(),
        }
    }

    fn term(&mut self) -> Result<(Term, usize), SyntaxError> {
        let pos = self.here();
        match self.bump() {
            Some(Tok::Ident(s)) if !KEYWORDS.contains(&s.as_str()) => {
                if self.binders.contains(&s) {
                    Ok((Term::Var(s), pos))
                } else {
                    Ok((Term::Const(s), pos))
                }
            }
            _ => Err(SyntaxError::Parse {
                pos,
                msg: "expected a term".into(),
            }),
        }
    }

    fn atom(&mut self) -> Result<Formula, SyntaxError> {
        let pos = self.here();
        match self.bump() {
            Some(Tok::Falsum) => Ok(Formula::Falsum),
            Some(Tok::LParen) => {
                let f = self.formula()?;
                self.expect(&Tok::RParen)?;
                Ok(f)
            }
            Some(Tok::Ident(s)) if s == "True" => {
                self.expect(&Tok::LParen)?;
                let (t, tpos) = self.term()?;
                self.expect(&Tok::RParen)?;
                if let Term::Const(name) = &t {
                    if !self.names.contains(name) {
                        return Err(SyntaxError::UnboundName {
                            pos: tpos,
                            name: name.clone(),
                        });
                    }
                }
                Ok(Formula::TruePred(t))
            }
            Some(Tok::Ident(s)) => {
                if KEYWORDS.contains(&s.as_str()) {
                    return Err(SyntaxError::Parse {
                        pos,
                        msg: format!("unexpected keyword `{s}`"),
                    });
                }
                if self.eat(&Tok::LParen) {
                    let mut args = vec![self.term()?.0];
                    while self.eat(&Tok::Comma) {
                        args.push(self.term()?.0);
                    }
                    self.expect(&Tok::RParen)?;
                    Ok(Formula::Atom(s, args))
                } else if let Some(def) = self.defs.get(&s) {
                    Ok(def.clone())
                } else if self.binders.contains(&s) {
                    Err(SyntaxError::Parse {
                        pos,
                        msg: format!("variable `{s}` used in formula position"),
                    })
                } else {
                    Ok(Formula::Atom(s, Vec::new()))
                }
            }
            Some(other) => Err(SyntaxError::Parse {
                pos,
                msg: format!("unexpected {other}"),
            }),
            None => Err(SyntaxError::Parse {
                pos,
                msg: "unexpected end of input".into(),
            }),
        }
    }
}

/// Parse a formula; sentence names used under `True(...)` must be bound in
/// `ctx`, and bare identifiers may refer to `defs` abbreviations.
pub fn parse_with_defs(
    text: &str,
    ctx: &QuotationContext,
    defs: &Definitions,
) -> Result<Formula, SyntaxError> {
    let names: BTreeSet<Ident> = ctx.iter().map(|(n, _)| n.clone()).collect();
    parse_with_names(text, &names, defs)
}

fn parse_with_names(
    text: &str,
    names: &BTreeSet<Ident>,
    defs: &Definitions,
) -> Result<Formula, SyntaxError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
        names,
        defs,
        binders: Vec::new(),
    };
    let f = p.formula()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input after formula".into()));
    }
    Ok(f)
}

pub fn parse(text: &str, ctx: &QuotationContext) -> Result<Formula, SyntaxError> {
    parse_with_defs(text, ctx, &Definitions::new())
}

/// Parse a name → formula-text map into a quotation context. All names are
/// in scope while each body is parsed, so bindings may be self- or mutually
/// referential.
pub fn parse_name_map(
    map: &BTreeMap<String, String>,
) -> Result<QuotationContext, SyntaxError> {
    let names: BTreeSet<Ident> = map.keys().cloned().collect();
    let defs = Definitions::new();
    let mut ctx = QuotationContext::new();
    for (n, body) in map {
        let f = parse_with_names(body, &names, &defs)?;
        ctx.bind(n.clone(), f);
    }
    Ok(ctx)
}

/// Parse a context file: one declaration per line, either
/// `name b := Fut Pun(a)` (sentence-name binding) or
/// `def phi := T & F` (formula abbreviation, expanded at parse time).
/// Blank lines and `#` comments are ignored. Name bindings may be
/// self- or mutually referential.
pub fn parse_context(text: &str) -> Result<(QuotationContext, Definitions), SyntaxError> {
    let mut names = BTreeSet::new();
    for line in text.lines() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix("name ") {
            if let Some((n, _)) = rest.split_once(":=") {
                names.insert(n.trim().to_string());
            }
        }
    }
    let mut ctx = QuotationContext::new();
    let mut defs = Definitions::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |msg: &str| SyntaxError::Parse {
            pos: lineno,
            msg: format!("line {}: {msg}", lineno + 1),
        };
        if let Some(rest) = line.strip_prefix("name ") {
            let (n, body) = rest.split_once(":=").ok_or_else(|| bad("expected `:=`"))?;
            let f = parse_with_names(body.trim(), &names, &defs)?;
            ctx.bind(n.trim(), f);
        } else if let Some(rest) = line.strip_prefix("def ") {
            let (n, body) = rest.split_once(":=").ok_or_else(|| bad("expected `:=`"))?;
            let f = parse_with_names(body.trim(), &names, &defs)?;
            defs.insert(n.trim().to_string(), f);
        } else {
            return Err(bad("expected `name` or `def` declaration"));
        }
    }
    // Every name mentioned inside a bound formula must itself be bound.
    for (n, f) in ctx.iter() {
        let _ = n;
        for c in f.constants() {
            if used_as_sentence_name(f, &c) && !ctx.contains(&c) {
                return Err(SyntaxError::UnboundName { pos: 0, name: c });
            }
        }
    }
    Ok((ctx, defs))
}

fn used_as_sentence_name(f: &Formula, c: &str) -> bool {
    match f {
        Formula::TruePred(Term::Const(n)) => n == c,
        Formula::Falsum | Formula::Atom(..) | Formula::TruePred(_) => false,
        Formula::Not(a) | Formula::Fut(a) | Formula::Simp(a) => used_as_sentence_name(a, c),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Cond(a, b) | Formula::Bicond(a, b) => {
            used_as_sentence_name(a, c) || used_as_sentence_name(b, c)
        }
        Formula::Forall(_, b) | Formula::Exists(_, b) => used_as_sentence_name(b, c),
    }
}

/// Capture-free substitution of a constant for a variable. A binder for the
/// same variable shadows: the bound body is left untouched.
pub fn instantiate(f: &Formula, var: &str, t: &Term) -> Result<Formula, SyntaxError> {
    let c = match t {
        Term::Const(c) => c,
        Term::Var(v) => return Err(SyntaxError::SubstituteVariable(v.clone())),
    };
    fn subst_term(t: &Term, var: &str, c: &str) -> Term {
        match t {
            Term::Var(v) if v == var => Term::Const(c.to_string()),
            other => other.clone(),
        }
    }
    fn go(f: &Formula, var: &str, c: &str) -> Formula {
        match f {
            Formula::Falsum => Formula::Falsum,
            Formula::Atom(p, args) => Formula::Atom(
                p.clone(),
                args.iter().map(|t| subst_term(t, var, c)).collect(),
            ),
            Formula::TruePred(t) => Formula::TruePred(subst_term(t, var, c)),
            Formula::Not(a) => Formula::not(go(a, var, c)),
            Formula::Fut(a) => Formula::fut(go(a, var, c)),
            Formula::Simp(a) => Formula::simp(go(a, var, c)),
            Formula::And(a, b) => Formula::and(go(a, var, c), go(b, var, c)),
            Formula::Or(a, b) => Formula::or(go(a, var, c), go(b, var, c)),
            Formula::Cond(a, b) => Formula::cond(go(a, var, c), go(b, var, c)),
            Formula::Bicond(a, b) => Formula::bicond(go(a, var, c), go(b, var, c)),
            Formula::Forall(v, _) | Formula::Exists(v, _) if v == var => f.clone(),
            Formula::Forall(v, b) => Formula::Forall(v.clone(), Box::new(go(b, var, c))),
            Formula::Exists(v, b) => Formula::Exists(v.clone(), Box::new(go(b, var, c))),
        }
    }
    Ok(go(f, var, c))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bridge_ctx() -> QuotationContext {
        let mut ctx = QuotationContext::new();
        ctx.bind(
            "b",
            Formula::fut(Formula::Atom("Pun".into(), vec![Term::Const("a".into())])),
        );
        ctx
    }

    #[test]
    fn parses_t_principle() {
        let ctx = QuotationContext::new();
        let f = parse(
            "forall x. forall y. (Says(x,y) -> (True(y) -> ~Fut Pun(x)))",
            &ctx,
        )
        .unwrap();
        match &f {
            Formula::Forall(x, body) => {
                assert_eq!(x, "x");
                match body.as_ref() {
                    Formula::Forall(y, inner) => {
                        assert_eq!(y, "y");
                        assert!(matches!(inner.as_ref(), Formula::Cond(..)));
                    }
                    other => panic!("unexpected {other:?}"),
                }
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parses_falsum() {
        assert_eq!(parse("_|_", &QuotationContext::new()).unwrap(), Formula::Falsum);
    }

    #[test]
    fn parses_jacquette_conclusion() {
        let ctx = bridge_ctx();
        let f = parse("True(b) <-> ~True(b)", &ctx).unwrap();
        let tb = Formula::TruePred(Term::Const("b".into()));
        assert_eq!(f, Formula::bicond(tb.clone(), Formula::not(tb)));
    }

    #[test]
    fn renders_falsum_and_fut_atom() {
        assert_eq!(render(&Formula::Falsum), "_|_");
        let f = Formula::fut(Formula::Atom("Pun".into(), vec![Term::Const("a".into())]));
        assert_eq!(render(&f), "Fut Pun(a)");
    }

    #[test]
    fn round_trips_conjunction() {
        let ctx = bridge_ctx();
        let f = parse("Says(a,b) & True(b)", &ctx).unwrap();
        assert_eq!(parse(&render(&f), &ctx).unwrap(), f);
    }

    #[test]
    fn instantiate_t_principle_to_sab() {
        let ctx = bridge_ctx();
        let f = parse(
            "forall x. forall y. (Says(x,y) -> (True(y) -> ~Fut Pun(x)))",
            &ctx,
        )
        .unwrap();
        let body_x = match f {
            Formula::Forall(x, b) => instantiate(&b, &x, &Term::Const("a".into())).unwrap(),
            _ => unreachable!(),
        };
        let inst = match body_x {
            Formula::Forall(y, b) => instantiate(&b, &y, &Term::Const("b".into())).unwrap(),
            _ => unreachable!(),
        };
        assert_eq!(
            render(&inst),
            "Says(a,b) -> (True(b) -> ~Fut Pun(a))"
        );
    }

    #[test]
    fn instantiate_simple_atom() {
        let f = Formula::Atom("Pun".into(), vec![Term::Var("x".into())]);
        let g = instantiate(&f, "x", &Term::Const("a".into())).unwrap();
        assert_eq!(render(&g), "Pun(a)");
    }

    #[test]
    fn instantiate_respects_shadowing() {
        let ctx = QuotationContext::new();
        let f = parse("forall x. Pun(x)", &ctx).unwrap();
        let body = match &f {
            Formula::Forall(_, b) => b.as_ref().clone(),
            _ => unreachable!(),
        };
        let shadowed = Formula::Forall("x".into(), Box::new(body));
        let out = instantiate(&shadowed, "x", &Term::Const("a".into())).unwrap();
        assert_eq!(out, shadowed);
    }

    #[test]
    fn rejects_substituting_variable() {
        let f = Formula::Atom("Pun".into(), vec![Term::Var("x".into())]);
        assert!(matches!(
            instantiate(&f, "x", &Term::Var("y".into())),
            Err(SyntaxError::SubstituteVariable(_))
        ));
    }

    #[test]
    fn reports_unbound_sentence_name() {
        let err = parse("True(b)", &QuotationContext::new()).unwrap_err();
        assert!(matches!(err, SyntaxError::UnboundName { ref name, .. } if name == "b"));
    }

    #[test]
    fn syntax_error_has_position() {
        let err = parse("Says(a,)", &QuotationContext::new()).unwrap_err();
        assert_eq!(err.position(), Some(7));
    }

    #[test]
    fn error_positions_monotone_in_prefix_length() {
        // Longer well-formed prefixes fail no earlier than shorter ones.
        let inputs = ["&", "Says &", "Says(a,b) &", "Says(a,b) & True"];
        let mut last = 0;
        for s in inputs {
            let pos = parse(s, &QuotationContext::new())
                .unwrap_err()
                .position()
                .unwrap();
            assert!(pos >= last, "position went backwards on {s:?}");
            last = pos;
        }
    }

    #[test]
    fn context_file_round_trip() {
        let (ctx, defs) = parse_context(
            "# bridge\nname b := Fut Pun(a)\ndef T := forall x. forall y. (Says(x,y) -> (True(y) -> ~Fut Pun(x)))\ndef phi := T & T\n",
        )
        .unwrap();
        assert!(ctx.contains("b"));
        assert!(defs.contains_key("phi"));
        let phi = parse_with_defs("phi", &ctx, &defs).unwrap();
        assert!(matches!(phi, Formula::And(..)));
    }

    #[test]
    fn liar_context_is_representable() {
        let (ctx, _) = parse_context("name l := ~True(l)\n").unwrap();
        let liar = ctx.get("l").unwrap();
        assert_eq!(render(liar), "~True(l)");
    }
}
