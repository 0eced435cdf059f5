//! Many-sorted syntax: signatures, terms, formulas with indexed connectives,
//! sequents-in-context and theories.
//!
//! Conjunction and disjunction carry ordered finite lists of operands; the
//! nullary conjunction `And[]` is truth and the nullary disjunction `Or[]` is
//! falsity. Existentials bind an ordered tuple of distinct typed variables;
//! the empty tuple is allowed (it arises in canonical forms and in tree-rule
//! conclusions) and quantifies over nothing.

mod canon;
mod parse;
mod print;
mod subst;

pub use canon::{canonical_form, canonical_sequent, is_canonical_form, CanonError, FreshGen};
pub use parse::{
    parse_formula, parse_formula_with_context, parse_sequent, parse_term, parse_theory, ParseError,
};
pub use subst::{compose_subst, substitute, substitute_term, Subst};

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashSet};
use std::fmt;
use thiserror::Error;

/// A typed variable. Identity is the (name, sort) pair.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Var {
    pub name: String,
    pub sort: String,
}

impl Var {
    pub fn new(name: impl Into<String>, sort: impl Into<String>) -> Self {
        Var { name: name.into(), sort: sort.into() }
    }
}

/// A function declaration: argument sorts are a finite ordered tuple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuncDecl {
    pub name: String,
    pub args: Vec<String>,
    pub result: String,
}

/// A relation declaration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelDecl {
    pub name: String,
    pub args: Vec<String>,
}

/// Names reserved by the surface grammar; they may not name sorts, functions
/// or relations.
pub const RESERVED: &[&str] = &["And", "Or", "Ex", "theory", "sort", "fn", "rel", "axiom"];

/// A many-sorted signature.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub sorts: Vec<String>,
    pub functions: Vec<FuncDecl>,
    pub relations: Vec<RelDecl>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WfError {
    #[error("duplicate {kind} name `{name}`")]
    Duplicate { kind: &'static str, name: String },
    #[error("undeclared sort `{0}`")]
    UndeclaredSort(String),
    #[error("reserved name `{0}`")]
    Reserved(String),
    #[error("unknown function symbol `{0}`")]
    UnknownFunction(String),
    #[error("unknown relation symbol `{0}`")]
    UnknownRelation(String),
    #[error("arity mismatch for `{symbol}`: expected {expected} arguments, got {got}")]
    Arity { symbol: String, expected: usize, got: usize },
    #[error("sort mismatch: expected `{expected}`, got `{got}` in {place}")]
    SortMismatch { expected: String, got: String, place: String },
    #[error("equality operands have different sorts `{0}` and `{1}`")]
    EqSorts(String, String),
    #[error("existential binder variables not pairwise distinct: `{0}`")]
    DuplicateBinder(String),
    #[error("variable name `{0}` used at two different sorts")]
    InconsistentVar(String),
    #[error("context does not cover free variable `{0}`")]
    ContextMissing(String),
    #[error("context variables not pairwise distinct: `{0}`")]
    DuplicateContext(String),
}

impl Signature {
    pub fn sort_decl(&self, name: &str) -> bool {
        self.sorts.iter().any(|s| s == name)
    }

    pub fn function(&self, name: &str) -> Option<&FuncDecl> {
        self.functions.iter().find(|f| f.name == name)
    }

    pub fn relation(&self, name: &str) -> Option<&RelDecl> {
        self.relations.iter().find(|r| r.name == name)
    }

    /// Checks name uniqueness per kind, sort declarations in arities, and
    /// that no declared name is a grammar keyword.
    pub fn validate(&self) -> Result<(), WfError> {
        let mut seen = HashSet::new();
        for s in &self.sorts {
            if RESERVED.contains(&s.as_str()) {
                return Err(WfError::Reserved(s.clone()));
            }
            if !seen.insert(s.clone()) {
                return Err(WfError::Duplicate { kind: "sort", name: s.clone() });
            }
        }
        let mut seen = HashSet::new();
        for f in &self.functions {
            if RESERVED.contains(&f.name.as_str()) {
                return Err(WfError::Reserved(f.name.clone()));
            }
            if !seen.insert(f.name.clone()) {
                return Err(WfError::Duplicate { kind: "function", name: f.name.clone() });
            }
            for s in f.args.iter().chain(std::iter::once(&f.result)) {
                if !self.sort_decl(s) {
                    return Err(WfError::UndeclaredSort(s.clone()));
                }
            }
        }
        let mut seen = HashSet::new();
        for r in &self.relations {
            if RESERVED.contains(&r.name.as_str()) {
                return Err(WfError::Reserved(r.name.clone()));
            }
            if !seen.insert(r.name.clone()) {
                return Err(WfError::Duplicate { kind: "relation", name: r.name.clone() });
            }
            for s in &r.args {
                if !self.sort_decl(s) {
                    return Err(WfError::UndeclaredSort(s.clone()));
                }
            }
        }
        Ok(())
    }
}

/// A term: a typed variable or a function symbol applied to a tuple of terms.
/// Constants are nullary applications.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Term {
    Var(Var),
    App { func: String, args: Vec<Term> },
}

impl Term {
    pub fn var(name: impl Into<String>, sort: impl Into<String>) -> Self {
        Term::Var(Var::new(name, sort))
    }

    pub fn app(func: impl Into<String>, args: Vec<Term>) -> Self {
        Term::App { func: func.into(), args }
    }

    pub fn constant(func: impl Into<String>) -> Self {
        Term::App { func: func.into(), args: vec![] }
    }

    /// The sort of a well-formed term.
    pub fn sort(&self, sig: &Signature) -> Result<String, WfError> {
        match self {
            Term::Var(v) => Ok(v.sort.clone()),
            Term::App { func, .. } => {
                let decl = sig.function(func).ok_or_else(|| WfError::UnknownFunction(func.clone()))?;
                Ok(decl.result.clone())
            }
        }
    }

    pub fn check(&self, sig: &Signature) -> Result<String, WfError> {
        match self {
            Term::Var(v) => {
                if !sig.sort_decl(&v.sort) {
                    return Err(WfError::UndeclaredSort(v.sort.clone()));
                }
                Ok(v.sort.clone())
            }
            Term::App { func, args } => {
                let decl = sig.function(func).ok_or_else(|| WfError::UnknownFunction(func.clone()))?.clone();
                if decl.args.len() != args.len() {
                    return Err(WfError::Arity { symbol: func.clone(), expected: decl.args.len(), got: args.len() });
                }
                for (arg, expect) in args.iter().zip(&decl.args) {
                    let got = arg.check(sig)?;
                    if &got != expect {
                        return Err(WfError::SortMismatch {
                            expected: expect.clone(),
                            got,
                            place: format!("argument of `{func}`"),
                        });
                    }
                }
                Ok(decl.result)
            }
        }
    }

    /// Number of symbol nodes; used as a deterministic size measure.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App { args, .. } => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    /// Application-nesting depth: variables have depth 0, an application is
    /// one more than the deepest argument.
    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App { args, .. } => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    fn collect_vars(&self, out: &mut Vec<Var>, seen: &mut HashSet<Var>) {
        match self {
            Term::Var(v) => {
                if seen.insert(v.clone()) {
                    out.push(v.clone());
                }
            }
            Term::App { args, .. } => {
                for a in args {
                    a.collect_vars(out, seen);
                }
            }
        }
    }

    /// Variables of the term in first-occurrence order.
    pub fn vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        self.collect_vars(&mut out, &mut seen);
        out
    }
}

/// A formula of the geometric fragment. `And`/`Or` carry ordered operand
/// lists whose order is significant for syntactic identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Formula {
    Rel { rel: String, args: Vec<Term> },
    Eq { lhs: Term, rhs: Term },
    And { items: Vec<Formula> },
    Or { items: Vec<Formula> },
    Exists { vars: Vec<Var>, body: Box<Formula> },
}

impl Formula {
    pub fn rel(rel: impl Into<String>, args: Vec<Term>) -> Self {
        Formula::Rel { rel: rel.into(), args }
    }

    pub fn eq(lhs: Term, rhs: Term) -> Self {
        Formula::Eq { lhs, rhs }
    }

    pub fn and(items: Vec<Formula>) -> Self {
        Formula::And { items }
    }

    pub fn or(items: Vec<Formula>) -> Self {
        Formula::Or { items }
    }

    pub fn exists(vars: Vec<Var>, body: Formula) -> Self {
        Formula::Exists { vars, body: Box::new(body) }
    }

    /// The empty conjunction, i.e. truth.
    pub fn top() -> Self {
        Formula::And { items: vec![] }
    }

    /// The empty disjunction, i.e. falsity.
    pub fn bot() -> Self {
        Formula::Or { items: vec![] }
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::Rel { .. } | Formula::Eq { .. })
    }

    /// Connective-nesting depth: atomic formulas have depth 1.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Rel { .. } | Formula::Eq { .. } => 1,
            Formula::And { items } | Formula::Or { items } => {
                1 + items.iter().map(Formula::depth).max().unwrap_or(0)
            }
            Formula::Exists { body, .. } => 1 + body.depth(),
        }
    }

    fn collect_free(&self, bound: &mut Vec<Var>, out: &mut Vec<Var>, seen: &mut HashSet<Var>) {
        match self {
            Formula::Rel { args, .. } => {
                for t in args {
                    for v in t.vars() {
                        if !bound.contains(&v) && seen.insert(v.clone()) {
                            out.push(v);
                        }
                    }
                }
            }
            Formula::Eq { lhs, rhs } => {
                for t in [lhs, rhs] {
                    for v in t.vars() {
                        if !bound.contains(&v) && seen.insert(v.clone()) {
                            out.push(v);
                        }
                    }
                }
            }
            Formula::And { items } | Formula::Or { items } => {
                for f in items {
                    f.collect_free(bound, out, seen);
                }
            }
            Formula::Exists { vars, body } => {
                let n = bound.len();
                bound.extend(vars.iter().cloned());
                // shadowed names may already be counted free elsewhere; the
                // `seen` filter applies only to genuinely free occurrences
                let mut inner_seen = HashSet::new();
                let mut inner = Vec::new();
                body.collect_free(bound, &mut inner, &mut inner_seen);
                bound.truncate(n);
                for v in inner {
                    if !bound.contains(&v) && seen.insert(v.clone()) {
                        out.push(v);
                    }
                }
            }
        }
    }

    /// Free variables in first-occurrence order (the canonical context order).
    pub fn free_vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        self.collect_free(&mut Vec::new(), &mut out, &mut seen);
        out
    }

    pub fn free_var_set(&self) -> HashSet<Var> {
        self.free_vars().into_iter().collect()
    }

    /// All variable names occurring anywhere (free or bound); used to seed
    /// fresh-name generation.
    pub fn all_names(&self, out: &mut HashSet<String>) {
        match self {
            Formula::Rel { args, .. } => {
                for t in args {
                    for v in t.vars() {
                        out.insert(v.name);
                    }
                }
            }
            Formula::Eq { lhs, rhs } => {
                for t in [lhs, rhs] {
                    for v in t.vars() {
                        out.insert(v.name);
                    }
                }
            }
            Formula::And { items } | Formula::Or { items } => {
                for f in items {
                    f.all_names(out);
                }
            }
            Formula::Exists { vars, body } => {
                for v in vars {
                    out.insert(v.name.clone());
                }
                body.all_names(out);
            }
        }
    }

    /// Well-formedness over a signature. Enforces arities, equal sorts on
    /// equality operands, distinct binder tuples, and that a variable name is
    /// not used at two sorts within the formula.
    pub fn check(&self, sig: &Signature) -> Result<(), WfError> {
        fn walk(f: &Formula, sig: &Signature, sorts: &mut BTreeMap<String, String>) -> Result<(), WfError> {
            let note = |v: &Var, sorts: &mut BTreeMap<String, String>| -> Result<(), WfError> {
                match sorts.get(&v.name) {
                    Some(s) if s != &v.sort => Err(WfError::InconsistentVar(v.name.clone())),
                    Some(_) => Ok(()),
                    None => {
                        sorts.insert(v.name.clone(), v.sort.clone());
                        Ok(())
                    }
                }
            };
            match f {
                Formula::Rel { rel, args } => {
                    let decl = sig.relation(rel).ok_or_else(|| WfError::UnknownRelation(rel.clone()))?.clone();
                    if decl.args.len() != args.len() {
                        return Err(WfError::Arity { symbol: rel.clone(), expected: decl.args.len(), got: args.len() });
                    }
                    for (arg, expect) in args.iter().zip(&decl.args) {
                        let got = arg.check(sig)?;
                        if &got != expect {
                            return Err(WfError::SortMismatch {
                                expected: expect.clone(),
                                got,
                                place: format!("argument of `{rel}`"),
                            });
                        }
                        for v in arg.vars() {
                            note(&v, sorts)?;
                        }
                    }
                    Ok(())
                }
                Formula::Eq { lhs, rhs } => {
                    let ls = lhs.check(sig)?;
                    let rs = rhs.check(sig)?;
                    if ls != rs {
                        return Err(WfError::EqSorts(ls, rs));
                    }
                    for t in [lhs, rhs] {
                        for v in t.vars() {
                            note(&v, sorts)?;
                        }
                    }
                    Ok(())
                }
                Formula::And { items } | Formula::Or { items } => {
                    for f in items {
                        walk(f, sig, sorts)?;
                    }
                    Ok(())
                }
                Formula::Exists { vars, body } => {
                    let mut names = HashSet::new();
                    for v in vars {
                        if !sig.sort_decl(&v.sort) {
                            return Err(WfError::UndeclaredSort(v.sort.clone()));
                        }
                        if !names.insert(&v.name) {
                            return Err(WfError::DuplicateBinder(v.name.clone()));
                        }
                    }
                    // binders may shadow; give them a nested name scope
                    let mut inner = sorts.clone();
                    for v in vars {
                        inner.insert(v.name.clone(), v.sort.clone());
                    }
                    walk(body, sig, &mut inner)
                }
            }
        }
        walk(self, sig, &mut BTreeMap::new())
    }
}

/// Alpha-equivalence: equality up to renaming of bound variables only. Free
/// variables are rigid and operand order inside `And`/`Or` is significant.
pub fn alpha_eq(f: &Formula, g: &Formula) -> bool {
    alpha_eq_under(f, g, &mut Vec::new())
}

fn terms_eq_under(s: &Term, t: &Term, map: &[(Var, Var)]) -> bool {
    match (s, t) {
        (Term::Var(a), Term::Var(b)) => {
            // innermost binding wins
            for (l, r) in map.iter().rev() {
                if l == a || r == b {
                    return l == a && r == b;
                }
            }
            a == b
        }
        (Term::App { func: f1, args: a1 }, Term::App { func: f2, args: a2 }) => {
            f1 == f2 && a1.len() == a2.len() && a1.iter().zip(a2).all(|(x, y)| terms_eq_under(x, y, map))
        }
        _ => false,
    }
}

fn alpha_eq_under(f: &Formula, g: &Formula, map: &mut Vec<(Var, Var)>) -> bool {
    match (f, g) {
        (Formula::Rel { rel: r1, args: a1 }, Formula::Rel { rel: r2, args: a2 }) => {
            r1 == r2 && a1.len() == a2.len() && a1.iter().zip(a2).all(|(x, y)| terms_eq_under(x, y, map))
        }
        (Formula::Eq { lhs: l1, rhs: r1 }, Formula::Eq { lhs: l2, rhs: r2 }) => {
            terms_eq_under(l1, l2, map) && terms_eq_under(r1, r2, map)
        }
        (Formula::And { items: i1 }, Formula::And { items: i2 })
        | (Formula::Or { items: i1 }, Formula::Or { items: i2 }) => {
            i1.len() == i2.len() && i1.iter().zip(i2).all(|(x, y)| alpha_eq_under(x, y, map))
        }
        (Formula::Exists { vars: v1, body: b1 }, Formula::Exists { vars: v2, body: b2 }) => {
            if v1.len() != v2.len() {
                return false;
            }
            if v1.iter().zip(v2.iter()).any(|(a, b)| a.sort != b.sort) {
                return false;
            }
            let n = map.len();
            for (a, b) in v1.iter().zip(v2.iter()) {
                map.push((a.clone(), b.clone()));
            }
            let ok = alpha_eq_under(b1, b2, map);
            map.truncate(n);
            ok
        }
        _ => false,
    }
}

/// A sequent-in-context `antecedent |- [context] consequent`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Sequent {
    pub antecedent: Formula,
    pub consequent: Formula,
    pub context: Vec<Var>,
}

impl Sequent {
    pub fn new(antecedent: Formula, context: Vec<Var>, consequent: Formula) -> Self {
        Sequent { antecedent, consequent, context }
    }

    /// Context covering free variables on both sides, pairwise-distinct
    /// context variables, and formula well-formedness.
    pub fn check(&self, sig: &Signature) -> Result<(), WfError> {
        self.antecedent.check(sig)?;
        self.consequent.check(sig)?;
        let mut names = HashSet::new();
        for v in &self.context {
            if !sig.sort_decl(&v.sort) {
                return Err(WfError::UndeclaredSort(v.sort.clone()));
            }
            if !names.insert(&v.name) {
                return Err(WfError::DuplicateContext(v.name.clone()));
            }
        }
        for v in self.antecedent.free_vars().into_iter().chain(self.consequent.free_vars()) {
            if !self.context.contains(&v) {
                return Err(WfError::ContextMissing(v.name));
            }
        }
        Ok(())
    }
}

/// Sequent alpha-equivalence: contexts must agree in length and sorts; the
/// positional context renaming together with bound-variable renaming must
/// make the two sides equal.
pub fn sequent_alpha_eq(a: &Sequent, b: &Sequent) -> bool {
    if a.context.len() != b.context.len() {
        return false;
    }
    if a.context.iter().zip(&b.context).any(|(x, y)| x.sort != y.sort) {
        return false;
    }
    let mut map: Vec<(Var, Var)> = a.context.iter().cloned().zip(b.context.iter().cloned()).collect();
    let n = map.len();
    alpha_eq_under(&a.antecedent, &b.antecedent, &mut map)
        && map.len() == n
        && alpha_eq_under(&a.consequent, &b.consequent, &mut map)
}

/// A named axiom of a theory.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Axiom {
    pub name: String,
    pub sequent: Sequent,
}

/// A theory: a signature plus a finite list of named axioms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theory {
    pub name: String,
    pub signature: Signature,
    pub axioms: Vec<Axiom>,
}

impl Theory {
    pub fn new(name: impl Into<String>, signature: Signature) -> Self {
        Theory { name: name.into(), signature, axioms: vec![] }
    }

    pub fn axiom(&self, name: &str) -> Option<&Axiom> {
        self.axioms.iter().find(|a| a.name == name)
    }

    pub fn validate(&self) -> Result<(), WfError> {
        self.signature.validate()?;
        let mut names = HashSet::new();
        for ax in &self.axioms {
            if !names.insert(&ax.name) {
                return Err(WfError::Duplicate { kind: "axiom", name: ax.name.clone() });
            }
            ax.sequent.check(&self.signature)?;
        }
        Ok(())
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.name, self.sort)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        Signature {
            sorts: vec!["S".into()],
            functions: vec![
                FuncDecl { name: "c".into(), args: vec![], result: "S".into() },
                FuncDecl { name: "f".into(), args: vec!["S".into()], result: "S".into() },
            ],
            relations: vec![
                RelDecl { name: "P".into(), args: vec!["S".into()] },
                RelDecl { name: "R".into(), args: vec!["S".into(), "S".into()] },
            ],
        }
    }

    fn x() -> Term {
        Term::var("x", "S")
    }

    #[test]
    fn free_vars_of_atom() {
        let f = Formula::rel("P", vec![x()]);
        assert_eq!(f.free_vars(), vec![Var::new("x", "S")]);
    }

    #[test]
    fn free_vars_removes_binder() {
        // Ex[y](eq(y,x)) has free variables {x}
        let f = Formula::exists(vec![Var::new("y", "S")], Formula::eq(Term::var("y", "S"), x()));
        assert_eq!(f.free_vars(), vec![Var::new("x", "S")]);
    }

    #[test]
    fn free_vars_of_empty_conjunction() {
        assert!(Formula::top().free_vars().is_empty());
    }

    #[test]
    fn alpha_eq_renames_bound() {
        let f = Formula::exists(vec![Var::new("y", "S")], Formula::rel("P", vec![Term::var("y", "S")]));
        let g = Formula::exists(vec![Var::new("z", "S")], Formula::rel("P", vec![Term::var("z", "S")]));
        assert!(alpha_eq(&f, &g));
    }

    #[test]
    fn alpha_eq_order_significant() {
        let p = Formula::rel("P", vec![x()]);
        let q = Formula::rel("R", vec![x(), x()]);
        let f = Formula::or(vec![p.clone(), q.clone()]);
        let g = Formula::or(vec![q, p]);
        assert!(!alpha_eq(&f, &g));
    }

    #[test]
    fn alpha_eq_free_vars_rigid() {
        let f = Formula::rel("P", vec![x()]);
        let g = Formula::rel("P", vec![Term::var("y", "S")]);
        assert!(!alpha_eq(&f, &g));
    }

    #[test]
    fn alpha_eq_respects_shadowing() {
        // Ex[x](P(x)) vs Ex[x](P(y)) must differ
        let f = Formula::exists(vec![Var::new("x", "S")], Formula::rel("P", vec![x()]));
        let g = Formula::exists(vec![Var::new("x", "S")], Formula::rel("P", vec![Term::var("y", "S")]));
        assert!(!alpha_eq(&f, &g));
    }

    #[test]
    fn sequent_alpha_eq_renames_context() {
        let s = Sequent::new(
            Formula::rel("P", vec![x()]),
            vec![Var::new("x", "S")],
            Formula::rel("P", vec![x()]),
        );
        let t = Sequent::new(
            Formula::rel("P", vec![Term::var("y", "S")]),
            vec![Var::new("y", "S")],
            Formula::rel("P", vec![Term::var("y", "S")]),
        );
        assert!(sequent_alpha_eq(&s, &t));
    }

    #[test]
    fn wf_catches_eq_sorts() {
        let sig = Signature {
            sorts: vec!["A".into(), "B".into()],
            functions: vec![],
            relations: vec![],
        };
        let f = Formula::eq(Term::var("x", "A"), Term::var("y", "B"));
        assert!(matches!(f.check(&sig), Err(WfError::EqSorts(_, _))));
    }

    #[test]
    fn wf_catches_arity() {
        let f = Formula::rel("P", vec![x(), x()]);
        assert!(matches!(f.check(&sig()), Err(WfError::Arity { .. })));
    }

    #[test]
    fn context_must_cover() {
        let s = Sequent::new(Formula::rel("P", vec![x()]), vec![], Formula::top());
        assert!(matches!(s.check(&sig()), Err(WfError::ContextMissing(_))));
    }
}
