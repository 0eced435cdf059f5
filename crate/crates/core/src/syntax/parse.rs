//! Text grammar for theories, sequents, formulas and terms.
//!
//! ```text
//! theory T
//! sort S, T
//! fn c() -> S
//! fn m(S, S) -> S
//! rel P(S)
//! axiom ax : And[P(x)] |- [x:S] Or[Ex y:S. (m(x,y) = c)]
//! ```
//!
//! Formulas: `And[f, ..]`, `Or[f, ..]`, `Ex x:S, y:T. (f)` (empty binder
//! tuple written `Ex . (f)`), `R(t, ..)`, `t = s`, parentheses. Sequents:
//! `f |- [x:S, ..] g`. `//` starts a line comment. Binder and context sort
//! annotations may be omitted when the sort is inferable from use.

use super::{Axiom, Formula, FuncDecl, RelDecl, Sequent, Signature, Term, Theory, Var, RESERVED};
use std::fmt;

/// A lexical, syntactic or sort error with its byte offset in the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at offset {}: {}", self.offset, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err<T>(offset: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { offset, message: message.into() })
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Dot,
    Colon,
    Equals,
    Arrow,
    Turnstile,
}

#[derive(Debug, Clone)]
struct Lexed {
    toks: Vec<(Tok, usize)>,
    end: usize,
}

fn lex(text: &str) -> Result<Lexed, ParseError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0usize;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '/' && bytes.get(i + 1) == Some(&b'/') {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        match c {
            '(' => {
                toks.push((Tok::LParen, start));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RParen, start));
                i += 1;
            }
            '[' => {
                toks.push((Tok::LBrack, start));
                i += 1;
            }
            ']' => {
                toks.push((Tok::RBrack, start));
                i += 1;
            }
            ',' => {
                toks.push((Tok::Comma, start));
                i += 1;
            }
            '.' => {
                toks.push((Tok::Dot, start));
                i += 1;
            }
            ':' => {
                toks.push((Tok::Colon, start));
                i += 1;
            }
            '=' => {
                toks.push((Tok::Equals, start));
                i += 1;
            }
            '-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    toks.push((Tok::Arrow, start));
                    i += 2;
                } else {
                    return err(start, "unexpected `-`");
                }
            }
            '|' => {
                if bytes.get(i + 1) == Some(&b'-') {
                    toks.push((Tok::Turnstile, start));
                    i += 2;
                } else {
                    return err(start, "unexpected `|`");
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut j = i + 1;
                while j < bytes.len() && ((bytes[j] as char).is_ascii_alphanumeric() || bytes[j] == b'_') {
                    j += 1;
                }
                // fresh-name suffix `#k`
                if j < bytes.len() && bytes[j] == b'#' {
                    let mut k = j + 1;
                    while k < bytes.len() && (bytes[k] as char).is_ascii_digit() {
                        k += 1;
                    }
                    if k > j + 1 {
                        j = k;
                    }
                }
                toks.push((Tok::Ident(text[i..j].to_string()), start));
                i = j;
            }
            _ => return err(start, format!("unexpected character `{c}`")),
        }
    }
    Ok(Lexed { toks, end: bytes.len() })
}

// ---------------------------------------------------------------------------
// raw (unresolved) syntax
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
enum RTerm {
    Ident { name: String, ann: Option<String>, off: usize },
    App { func: String, args: Vec<RTerm>, off: usize },
}

#[derive(Debug, Clone)]
enum RFormula {
    And(Vec<RFormula>),
    Or(Vec<RFormula>),
    Ex(Vec<(String, Option<String>, usize)>, Box<RFormula>),
    Rel { name: String, args: Vec<RTerm>, off: usize },
    Eq(RTerm, RTerm, usize),
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn new(lexed: Lexed) -> Self {
        Parser { toks: lexed.toks, pos: 0, end: lexed.end }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(_, o)| *o).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            err(self.offset(), format!("expected {what}"))
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, usize), ParseError> {
        let off = self.offset();
        match self.bump() {
            Some(Tok::Ident(s)) => Ok((s, off)),
            _ => err(off, format!("expected {what}")),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn expect_end(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            err(self.offset(), "trailing input")
        }
    }

    // term := ident | ident ':' sort | ident '(' terms ')'
    fn rterm(&mut self) -> Result<RTerm, ParseError> {
        let (name, off) = self.ident("a term")?;
        if self.peek() == Some(&Tok::LParen) {
            self.bump();
            let mut args = Vec::new();
            if self.peek() != Some(&Tok::RParen) {
                loop {
                    args.push(self.rterm()?);
                    if self.peek() == Some(&Tok::Comma) {
                        self.bump();
                    } else {
                        break;
                    }
                }
            }
            self.expect(Tok::RParen, "`)`")?;
            Ok(RTerm::App { func: name, args, off })
        } else if self.peek() == Some(&Tok::Colon) {
            self.bump();
            let (sort, _) = self.ident("a sort name")?;
            Ok(RTerm::Ident { name, ann: Some(sort), off })
        } else {
            Ok(RTerm::Ident { name, ann: None, off })
        }
    }

    fn rformula(&mut self) -> Result<RFormula, ParseError> {
        match self.peek() {
            Some(Tok::LParen) => {
                self.bump();
                let f = self.rformula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Some(Tok::Ident(kw)) if kw == "And" || kw == "Or" => {
                let conj = kw == "And";
                self.bump();
                self.expect(Tok::LBrack, "`[`")?;
                let mut items = Vec::new();
                if self.peek() != Some(&Tok::RBrack) {
                    loop {
                        items.push(self.rformula()?);
                        if self.peek() == Some(&Tok::Comma) {
                            self.bump();
                        } else {
                            break;
                        }
                    }
                }
                self.expect(Tok::RBrack, "`]`")?;
                Ok(if conj { RFormula::And(items) } else { RFormula::Or(items) })
            }
            Some(Tok::Ident(kw)) if kw == "Ex" => {
                self.bump();
                let mut binders = Vec::new();
                if self.peek() != Some(&Tok::Dot) {
                    loop {
                        let (name, off) = self.ident("a binder variable")?;
                        let ann = if self.peek() == Some(&Tok::Colon) {
                            self.bump();
                            Some(self.ident("a sort name")?.0)
                        } else {
                            None
                        };
                        binders.push((name, ann, off));
                        if self.peek() == Some(&Tok::Comma) {
                            self.bump();
                        } else {
                            break;
                        }
                    }
                }
                self.expect(Tok::Dot, "`.`")?;
                let body = self.rformula()?;
                Ok(RFormula::Ex(binders, Box::new(body)))
            }
            Some(Tok::Ident(_)) => {
                let lhs = self.rterm()?;
                if self.peek() == Some(&Tok::Equals) {
                    let off = self.offset();
                    self.bump();
                    let rhs = self.rterm()?;
                    Ok(RFormula::Eq(lhs, rhs, off))
                } else {
                    match lhs {
                        RTerm::App { func, args, off } => Ok(RFormula::Rel { name: func, args, off }),
                        RTerm::Ident { off, .. } => {
                            err(off, "expected a relation application or an equality")
                        }
                    }
                }
            }
            _ => err(self.offset(), "expected a formula"),
        }
    }
}

// ---------------------------------------------------------------------------
// sort resolution
// ---------------------------------------------------------------------------

struct Resolver<'a> {
    sig: &'a Signature,
    scope: Vec<Var>,
}

impl<'a> Resolver<'a> {
    fn lookup(&self, name: &str) -> Option<&Var> {
        self.scope.iter().rev().find(|v| v.name == name)
    }

    fn term(&self, raw: &RTerm, expected: Option<&str>) -> Result<Term, ParseError> {
        match raw {
            RTerm::Ident { name, ann, off } => {
                if let Some(v) = self.lookup(name) {
                    let v = v.clone();
                    if let Some(a) = ann {
                        if a != &v.sort {
                            return err(*off, format!("variable `{name}` has sort `{}`, not `{a}`", v.sort));
                        }
                    }
                    if let Some(e) = expected {
                        if e != v.sort {
                            return err(*off, format!("expected sort `{e}`, but `{name}` has sort `{}`", v.sort));
                        }
                    }
                    return Ok(Term::Var(v));
                }
                if let Some(decl) = self.sig.function(name) {
                    if decl.args.is_empty() {
                        let result = decl.result.clone();
                        if let Some(a) = ann {
                            if a != &result {
                                return err(*off, format!("constant `{name}` has sort `{result}`, not `{a}`"));
                            }
                        }
                        if let Some(e) = expected {
                            if e != result {
                                return err(*off, format!("expected sort `{e}`, but `{name}` has sort `{result}`"));
                            }
                        }
                        return Ok(Term::constant(name.clone()));
                    }
                    return err(*off, format!("function `{name}` expects arguments"));
                }
                let sort = match (ann, expected) {
                    (Some(a), Some(e)) if a != e => {
                        return err(*off, format!("annotation `{a}` conflicts with expected sort `{e}`"))
                    }
                    (Some(a), _) => a.clone(),
                    (None, Some(e)) => e.to_string(),
                    (None, None) => {
                        return err(*off, format!("cannot infer the sort of variable `{name}`; annotate as `{name}:Sort`"))
                    }
                };
                if !self.sig.sort_decl(&sort) {
                    return err(*off, format!("undeclared sort `{sort}`"));
                }
                Ok(Term::var(name.clone(), sort))
            }
            RTerm::App { func, args, off } => {
                let decl = match self.sig.function(func) {
                    Some(d) => d.clone(),
                    None => return err(*off, format!("unknown function symbol `{func}`")),
                };
                if decl.args.len() != args.len() {
                    return err(*off, format!("`{func}` expects {} arguments, got {}", decl.args.len(), args.len()));
                }
                if let Some(e) = expected {
                    if e != decl.result {
                        return err(*off, format!("expected sort `{e}`, but `{func}(..)` has sort `{}`", decl.result));
                    }
                }
                let args = args
                    .iter()
                    .zip(&decl.args)
                    .map(|(a, s)| self.term(a, Some(s)))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Term::App { func: func.clone(), args })
            }
        }
    }

    /// Shallow sort of a raw term, when determinable without context.
    fn shallow_sort(&self, raw: &RTerm) -> Option<String> {
        match raw {
            RTerm::Ident { name, ann, .. } => {
                if let Some(v) = self.lookup(name) {
                    return Some(v.sort.clone());
                }
                if let Some(d) = self.sig.function(name) {
                    if d.args.is_empty() {
                        return Some(d.result.clone());
                    }
                }
                ann.clone()
            }
            RTerm::App { func, .. } => self.sig.function(func).map(|d| d.result.clone()),
        }
    }

    /// Scans a raw formula for the first occurrence of `name` at a position
    /// whose sort is determined by a declared arity.
    fn infer_binder_sort(&self, raw: &RFormula, name: &str) -> Option<String> {
        fn scan_term(sig: &Signature, raw: &RTerm, name: &str, expected: Option<&str>) -> Option<String> {
            match raw {
                RTerm::Ident { name: n, ann, .. } if n == name => {
                    ann.clone().or_else(|| expected.map(str::to_string))
                }
                RTerm::Ident { .. } => None,
                RTerm::App { func, args, .. } => {
                    let decl = sig.function(func)?;
                    args.iter()
                        .zip(&decl.args)
                        .find_map(|(a, s)| scan_term(sig, a, name, Some(s)))
                }
            }
        }
        fn scan(r: &Resolver, raw: &RFormula, name: &str) -> Option<String> {
            match raw {
                RFormula::And(items) | RFormula::Or(items) => {
                    items.iter().find_map(|f| scan(r, f, name))
                }
                RFormula::Ex(binders, body) => {
                    if binders.iter().any(|(n, _, _)| n == name) {
                        None // shadowed
                    } else {
                        scan(r, body, name)
                    }
                }
                RFormula::Rel { name: rel, args, .. } => {
                    let decl = r.sig.relation(rel)?;
                    args.iter()
                        .zip(&decl.args)
                        .find_map(|(a, s)| scan_term(r.sig, a, name, Some(s)))
                }
                RFormula::Eq(l, rh, _) => scan_term(r.sig, l, name, None)
                    .or_else(|| scan_term(r.sig, rh, name, None))
                    .or_else(|| {
                        // `name = t` or `t = name` with the other side determinable
                        let is_name = |t: &RTerm| matches!(t, RTerm::Ident { name: n, .. } if n == name);
                        if is_name(l) {
                            r.shallow_sort(rh)
                        } else if is_name(rh) {
                            r.shallow_sort(l)
                        } else {
                            None
                        }
                    }),
            }
        }
        scan(self, raw, name)
    }

    fn formula(&mut self, raw: &RFormula) -> Result<Formula, ParseError> {
        match raw {
            RFormula::And(items) => Ok(Formula::and(
                items.iter().map(|f| self.formula(f)).collect::<Result<Vec<_>, _>>()?,
            )),
            RFormula::Or(items) => Ok(Formula::or(
                items.iter().map(|f| self.formula(f)).collect::<Result<Vec<_>, _>>()?,
            )),
            RFormula::Ex(binders, body) => {
                let mut vars = Vec::with_capacity(binders.len());
                for (name, ann, off) in binders {
                    let sort = match ann {
                        Some(s) => s.clone(),
                        None => match self.infer_binder_sort(body, name) {
                            Some(s) => s,
                            None => {
                                return err(*off, format!("cannot infer the sort of binder `{name}`; annotate as `{name}:Sort`"))
                            }
                        },
                    };
                    if !self.sig.sort_decl(&sort) {
                        return err(*off, format!("undeclared sort `{sort}`"));
                    }
                    vars.push(Var::new(name.clone(), sort));
                }
                let n = self.scope.len();
                self.scope.extend(vars.iter().cloned());
                let body = self.formula(body)?;
                self.scope.truncate(n);
                Ok(Formula::exists(vars, body))
            }
            RFormula::Rel { name, args, off } => {
                let decl = match self.sig.relation(name) {
                    Some(d) => d.clone(),
                    None => return err(*off, format!("unknown relation symbol `{name}`")),
                };
                if decl.args.len() != args.len() {
                    return err(*off, format!("`{name}` expects {} arguments, got {}", decl.args.len(), args.len()));
                }
                let args = args
                    .iter()
                    .zip(&decl.args)
                    .map(|(a, s)| self.term(a, Some(s)))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Formula::rel(name.clone(), args))
            }
            RFormula::Eq(l, r, off) => {
                let (lt, rt) = match self.term(l, None) {
                    Ok(lt) => {
                        let s = lt.sort(self.sig).map_err(|e| ParseError { offset: *off, message: e.to_string() })?;
                        (lt, self.term(r, Some(&s))?)
                    }
                    Err(_) => {
                        let rt = self.term(r, None)?;
                        let s = rt.sort(self.sig).map_err(|e| ParseError { offset: *off, message: e.to_string() })?;
                        (self.term(l, Some(&s))?, rt)
                    }
                };
                Ok(Formula::eq(lt, rt))
            }
        }
    }
}

fn context_from(p: &mut Parser, sig: &Signature, raw_cons: Option<&RFormula>, raw_ante: &RFormula) -> Result<Vec<Var>, ParseError> {
    // parse `[x:S, y, ..]`; unannotated entries are inferred from use
    p.expect(Tok::LBrack, "`[`")?;
    let mut ctx = Vec::new();
    if p.peek() != Some(&Tok::RBrack) {
        loop {
            let (name, off) = p.ident("a context variable")?;
            let ann = if p.peek() == Some(&Tok::Colon) {
                p.bump();
                Some(p.ident("a sort name")?.0)
            } else {
                None
            };
            let sort = match ann {
                Some(s) => s,
                None => {
                    let r = Resolver { sig, scope: vec![] };
                    match r
                        .infer_binder_sort(raw_ante, &name)
                        .or_else(|| raw_cons.and_then(|c| r.infer_binder_sort(c, &name)))
                    {
                        Some(s) => s,
                        None => return err(off, format!("cannot infer the sort of context variable `{name}`")),
                    }
                }
            };
            if !sig.sort_decl(&sort) {
                return err(off, format!("undeclared sort `{sort}`"));
            }
            ctx.push(Var::new(name, sort));
            if p.peek() == Some(&Tok::Comma) {
                p.bump();
            } else {
                break;
            }
        }
    }
    p.expect(Tok::RBrack, "`]`")?;
    Ok(ctx)
}

/// Parses a closed or context-free formula; free variables must carry inline
/// `x:S` annotations or be inferable from relation/function arities.
pub fn parse_formula(sig: &Signature, text: &str) -> Result<Formula, ParseError> {
    parse_formula_with_context(sig, text, &[])
}

/// Parses a formula whose free variables may be declared by `context`.
pub fn parse_formula_with_context(sig: &Signature, text: &str, context: &[Var]) -> Result<Formula, ParseError> {
    let mut p = Parser::new(lex(text)?);
    let raw = p.rformula()?;
    p.expect_end()?;
    let mut r = Resolver { sig, scope: context.to_vec() };
    let f = r.formula(&raw)?;
    f.check(sig).map_err(|e| ParseError { offset: 0, message: e.to_string() })?;
    Ok(f)
}

/// Parses `phi |- [x:S, ..] psi`.
pub fn parse_sequent(sig: &Signature, text: &str) -> Result<Sequent, ParseError> {
    let mut p = Parser::new(lex(text)?);
    let raw_ante = p.rformula()?;
    p.expect(Tok::Turnstile, "`|-`")?;
    // peek past the context to parse the consequent raw first for inference
    let save = p.pos;
    p.expect(Tok::LBrack, "`[`")?;
    let mut depth = 1usize;
    while depth > 0 {
        match p.bump() {
            Some(Tok::LBrack) => depth += 1,
            Some(Tok::RBrack) => depth -= 1,
            Some(_) => {}
            None => return err(p.end, "unterminated context"),
        }
    }
    let raw_cons = p.rformula()?;
    p.expect_end()?;
    let after = p.pos;
    p.pos = save;
    let context = context_from(&mut p, sig, Some(&raw_cons), &raw_ante)?;
    p.pos = after;
    let mut r = Resolver { sig, scope: context.clone() };
    let antecedent = r.formula(&raw_ante)?;
    let consequent = r.formula(&raw_cons)?;
    let s = Sequent::new(antecedent, context, consequent);
    s.check(sig).map_err(|e| ParseError { offset: 0, message: e.to_string() })?;
    Ok(s)
}

/// Parses a single term over an explicit variable context.
pub fn parse_term(sig: &Signature, text: &str, context: &[Var]) -> Result<Term, ParseError> {
    let mut p = Parser::new(lex(text)?);
    let raw = p.rterm()?;
    p.expect_end()?;
    let r = Resolver { sig, scope: context.to_vec() };
    let t = r.term(&raw, None)?;
    t.check(sig).map_err(|e| ParseError { offset: 0, message: e.to_string() })?;
    Ok(t)
}

/// Parses a `.geo` theory file.
pub fn parse_theory(text: &str) -> Result<Theory, ParseError> {
    let mut p = Parser::new(lex(text)?);
    let off = p.offset();
    match p.bump() {
        Some(Tok::Ident(kw)) if kw == "theory" => {}
        _ => return err(off, "expected `theory <name>`"),
    }
    let (name, _) = p.ident("a theory name")?;
    let mut theory = Theory::new(name, Signature::default());
    while !p.at_end() {
        let off = p.offset();
        let (kw, _) = p.ident("`sort`, `fn`, `rel` or `axiom`")?;
        match kw.as_str() {
            "sort" => loop {
                let (s, soff) = p.ident("a sort name")?;
                if RESERVED.contains(&s.as_str()) {
                    return err(soff, format!("reserved name `{s}`"));
                }
                theory.signature.sorts.push(s);
                if p.peek() == Some(&Tok::Comma) {
                    p.bump();
                } else {
                    break;
                }
            },
            "fn" => {
                let (fname, _) = p.ident("a function name")?;
                p.expect(Tok::LParen, "`(`")?;
                let mut args = Vec::new();
                if p.peek() != Some(&Tok::RParen) {
                    loop {
                        args.push(p.ident("a sort name")?.0);
                        if p.peek() == Some(&Tok::Comma) {
                            p.bump();
                        } else {
                            break;
                        }
                    }
                }
                p.expect(Tok::RParen, "`)`")?;
                p.expect(Tok::Arrow, "`->`")?;
                let (result, _) = p.ident("a sort name")?;
                theory.signature.functions.push(FuncDecl { name: fname, args, result });
            }
            "rel" => {
                let (rname, _) = p.ident("a relation name")?;
                p.expect(Tok::LParen, "`(`")?;
                let mut args = Vec::new();
                if p.peek() != Some(&Tok::RParen) {
                    loop {
                        args.push(p.ident("a sort name")?.0);
                        if p.peek() == Some(&Tok::Comma) {
                            p.bump();
                        } else {
                            break;
                        }
                    }
                }
                p.expect(Tok::RParen, "`)`")?;
                theory.signature.relations.push(RelDecl { name: rname, args });
            }
            "axiom" => {
                let (aname, _) = p.ident("an axiom name")?;
                p.expect(Tok::Colon, "`:`")?;
                // hand the rest of the statement to the sequent parser: an
                // axiom ends at the next top-level keyword or at the end
                let raw_ante = p.rformula()?;
                p.expect(Tok::Turnstile, "`|-`")?;
                let save = p.pos;
                p.expect(Tok::LBrack, "`[`")?;
                let mut depth = 1usize;
                while depth > 0 {
                    match p.bump() {
                        Some(Tok::LBrack) => depth += 1,
                        Some(Tok::RBrack) => depth -= 1,
                        Some(_) => {}
                        None => return err(p.end, "unterminated context"),
                    }
                }
                let raw_cons = p.rformula()?;
                let after = p.pos;
                p.pos = save;
                let context = context_from(&mut p, &theory.signature, Some(&raw_cons), &raw_ante)?;
                p.pos = after;
                let mut r = Resolver { sig: &theory.signature, scope: context.clone() };
                let antecedent = r.formula(&raw_ante)?;
                let consequent = r.formula(&raw_cons)?;
                let sequent = Sequent::new(antecedent, context, consequent);
                sequent
                    .check(&theory.signature)
                    .map_err(|e| ParseError { offset: off, message: e.to_string() })?;
                theory.axioms.push(Axiom { name: aname, sequent });
            }
            other => return err(off, format!("expected `sort`, `fn`, `rel` or `axiom`, found `{other}`")),
        }
    }
    theory.validate().map_err(|e| ParseError { offset: 0, message: e.to_string() })?;
    Ok(theory)
}
