//! Tarskian satisfaction in finite structures, sequent validity, bounded
//! model enumeration and countermodel search.

mod enumerate;

pub use enumerate::{countermodel, enumerate_models, ModelIter};

use crate::syntax::{Formula, Sequent, Signature, Term, Var};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

/// A Set-model with finite carriers. Carrier elements are `0..n`; function
/// tables are row-major flat arrays over the argument product with the last
/// argument varying fastest; relations are sets of argument tuples.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteStructure {
    pub carriers: BTreeMap<String, usize>,
    pub functions: BTreeMap<String, Vec<usize>>,
    pub relations: BTreeMap<String, std::collections::BTreeSet<Vec<usize>>>,
}

/// A sort-correct map from typed variables to carrier elements.
pub type Assignment = BTreeMap<Var, usize>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("unassigned free variable `{0}`")]
    Unassigned(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("structure is not total: {0}")]
    NotTotal(String),
    #[error("element {element} out of carrier `{sort}` (size {size})")]
    OutOfCarrier { element: usize, sort: String, size: usize },
}

impl FiniteStructure {
    pub fn new(sig: &Signature, sizes: &BTreeMap<String, usize>) -> Self {
        let mut carriers = BTreeMap::new();
        for s in &sig.sorts {
            carriers.insert(s.clone(), *sizes.get(s).unwrap_or(&0));
        }
        FiniteStructure { carriers, functions: BTreeMap::new(), relations: BTreeMap::new() }
    }

    pub fn carrier(&self, sort: &str) -> usize {
        *self.carriers.get(sort).unwrap_or(&0)
    }

    /// Row-major index of an argument tuple for the given argument sorts.
    fn table_index(&self, arg_sorts: &[String], args: &[usize]) -> usize {
        let mut idx = 0usize;
        for (a, s) in args.iter().zip(arg_sorts) {
            idx = idx * self.carrier(s) + a;
        }
        idx
    }

    pub fn table_len(&self, arg_sorts: &[String]) -> usize {
        arg_sorts.iter().map(|s| self.carrier(s)).product()
    }

    pub fn apply(&self, sig: &Signature, func: &str, args: &[usize]) -> Result<usize, EvalError> {
        let decl = sig.function(func).ok_or_else(|| EvalError::UnknownSymbol(func.to_string()))?;
        let table = self
            .functions
            .get(func)
            .ok_or_else(|| EvalError::NotTotal(format!("no table for `{func}`")))?;
        let idx = self.table_index(&decl.args, args);
        table
            .get(idx)
            .copied()
            .ok_or_else(|| EvalError::NotTotal(format!("table for `{func}` too short")))
    }

    pub fn holds(&self, rel: &str, args: &[usize]) -> bool {
        self.relations.get(rel).is_some_and(|set| set.contains(args))
    }

    pub fn eval_term(&self, sig: &Signature, rho: &Assignment, t: &Term) -> Result<usize, EvalError> {
        match t {
            Term::Var(v) => rho.get(v).copied().ok_or_else(|| EvalError::Unassigned(v.name.clone())),
            Term::App { func, args } => {
                let vals = args
                    .iter()
                    .map(|a| self.eval_term(sig, rho, a))
                    .collect::<Result<Vec<_>, _>>()?;
                self.apply(sig, func, &vals)
            }
        }
    }

    /// Checks totality and sort-correctness of all tables against the
    /// signature.
    pub fn validate(&self, sig: &Signature) -> Result<(), EvalError> {
        for f in &sig.functions {
            let len = self.table_len(&f.args);
            let result = self.carrier(&f.result);
            let table = self
                .functions
                .get(&f.name)
                .ok_or_else(|| EvalError::NotTotal(format!("no table for `{}`", f.name)))?;
            if table.len() != len {
                return Err(EvalError::NotTotal(format!(
                    "table for `{}` has {} entries, expected {len}",
                    f.name,
                    table.len()
                )));
            }
            for &v in table {
                if v >= result {
                    return Err(EvalError::OutOfCarrier { element: v, sort: f.result.clone(), size: result });
                }
            }
        }
        for r in &sig.relations {
            if let Some(set) = self.relations.get(&r.name) {
                for tuple in set {
                    if tuple.len() != r.args.len() {
                        return Err(EvalError::NotTotal(format!("tuple arity mismatch in `{}`", r.name)));
                    }
                    for (v, s) in tuple.iter().zip(&r.args) {
                        if *v >= self.carrier(s) {
                            return Err(EvalError::OutOfCarrier { element: *v, sort: s.clone(), size: self.carrier(s) });
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// All assignments of the given carrier sizes, in odometer order with the
/// last position varying fastest. The empty product yields one empty tuple;
/// a zero size with at least one position yields nothing.
pub fn tuples(sizes: &[usize]) -> Tuples {
    Tuples { sizes: sizes.to_vec(), next: Some(vec![0; sizes.len()]), fresh: true }
}

pub struct Tuples {
    sizes: Vec<usize>,
    next: Option<Vec<usize>>,
    fresh: bool,
}

impl Iterator for Tuples {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.fresh {
            self.fresh = false;
            if self.sizes.iter().any(|&s| s == 0) && !self.sizes.is_empty() {
                self.next = None;
            }
        }
        let current = self.next.clone()?;
        // advance
        let mut t = current.clone();
        let mut i = t.len();
        loop {
            if i == 0 {
                self.next = None;
                break;
            }
            i -= 1;
            t[i] += 1;
            if t[i] < self.sizes[i] {
                self.next = Some(t);
                break;
            }
            t[i] = 0;
        }
        Some(current)
    }
}

/// Standard Tarskian satisfaction. The empty conjunction is true, the empty
/// disjunction false; existentials range over all carrier tuples (none, over
/// an empty carrier).
pub fn satisfies(
    sig: &Signature,
    m: &FiniteStructure,
    rho: &Assignment,
    f: &Formula,
) -> Result<bool, EvalError> {
    match f {
        Formula::Rel { rel, args } => {
            let vals = args
                .iter()
                .map(|a| m.eval_term(sig, rho, a))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(m.holds(rel, &vals))
        }
        Formula::Eq { lhs, rhs } => Ok(m.eval_term(sig, rho, lhs)? == m.eval_term(sig, rho, rhs)?),
        Formula::And { items } => {
            for g in items {
                if !satisfies(sig, m, rho, g)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::Or { items } => {
            for g in items {
                if satisfies(sig, m, rho, g)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Formula::Exists { vars, body } => {
            let sizes: Vec<usize> = vars.iter().map(|v| m.carrier(&v.sort)).collect();
            for tuple in tuples(&sizes) {
                let mut rho2 = rho.clone();
                for (v, e) in vars.iter().zip(&tuple) {
                    rho2.insert(v.clone(), *e);
                }
                if satisfies(sig, m, &rho2, body)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
    }
}

/// Sequent validity: every context assignment satisfying the antecedent
/// satisfies the consequent. A sequent with an uninhabitable context is
/// vacuously valid.
pub fn valid(sig: &Signature, m: &FiniteStructure, s: &Sequent) -> Result<bool, EvalError> {
    let sizes: Vec<usize> = s.context.iter().map(|v| m.carrier(&v.sort)).collect();
    for tuple in tuples(&sizes) {
        let rho: Assignment = s.context.iter().cloned().zip(tuple.iter().copied()).collect();
        if satisfies(sig, m, &rho, &s.antecedent)? && !satisfies(sig, m, &rho, &s.consequent)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The assignments over the structure that satisfy the antecedent but not
/// the consequent.
pub fn violations(
    sig: &Signature,
    m: &FiniteStructure,
    s: &Sequent,
) -> Result<Vec<Assignment>, EvalError> {
    let sizes: Vec<usize> = s.context.iter().map(|v| m.carrier(&v.sort)).collect();
    let mut out = Vec::new();
    for tuple in tuples(&sizes) {
        let rho: Assignment = s.context.iter().cloned().zip(tuple.iter().copied()).collect();
        if satisfies(sig, m, &rho, &s.antecedent)? && !satisfies(sig, m, &rho, &s.consequent)? {
            out.push(rho);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula_with_context, parse_sequent, FuncDecl, RelDecl};

    fn sig() -> Signature {
        Signature {
            sorts: vec!["S".into()],
            functions: vec![],
            relations: vec![
                RelDecl { name: "P".into(), args: vec!["S".into()] },
                RelDecl { name: "Q".into(), args: vec!["S".into()] },
            ],
        }
    }

    fn m_two() -> FiniteStructure {
        // carrier {0,1}, P = {0}, Q = {}
        let mut m = FiniteStructure::new(&sig(), &[("S".to_string(), 2)].into_iter().collect());
        m.relations.insert("P".into(), [vec![0]].into_iter().collect());
        m.relations.insert("Q".into(), Default::default());
        m
    }

    #[test]
    fn atom_truth_per_assignment() {
        let sig = sig();
        let m = m_two();
        let x = Var::new("x", "S");
        let f = parse_formula_with_context(&sig, "P(x)", &[x.clone()]).unwrap();
        let rho0: Assignment = [(x.clone(), 0)].into_iter().collect();
        let rho1: Assignment = [(x.clone(), 1)].into_iter().collect();
        assert!(satisfies(&sig, &m, &rho0, &f).unwrap());
        assert!(!satisfies(&sig, &m, &rho1, &f).unwrap());
    }

    #[test]
    fn empty_join_is_false() {
        let sig = sig();
        let m = m_two();
        assert!(!satisfies(&sig, &m, &Assignment::new(), &Formula::bot()).unwrap());
        assert!(satisfies(&sig, &m, &Assignment::new(), &Formula::top()).unwrap());
    }

    #[test]
    fn identity_sequent_valid() {
        let sig = sig();
        let m = m_two();
        let s = parse_sequent(&sig, "P(x) |- [x] P(x)").unwrap();
        assert!(valid(&sig, &m, &s).unwrap());
    }

    #[test]
    fn falsum_antecedent_vacuous() {
        let sig = sig();
        let m = m_two();
        let s = parse_sequent(&sig, "Or[] |- [x] P(x)").unwrap();
        assert!(valid(&sig, &m, &s).unwrap());
    }

    #[test]
    fn nonempty_p_refutes_falsum_consequent() {
        let sig = sig();
        let m = m_two();
        let s = parse_sequent(&sig, "P(x) |- [x] Or[]").unwrap();
        assert!(!valid(&sig, &m, &s).unwrap());
    }

    #[test]
    fn exists_over_empty_carrier_is_false() {
        let sig = sig();
        let m = FiniteStructure::new(&sig, &BTreeMap::new());
        let f = parse_formula_with_context(&sig, "Ex y:S. (P(y))", &[]).unwrap();
        assert!(!satisfies(&sig, &m, &Assignment::new(), &f).unwrap());
        // and a sequent over an uninhabitable context is vacuously valid
        let s = parse_sequent(&sig, "And[] |- [x:S] P(x)").unwrap();
        assert!(valid(&sig, &m, &s).unwrap());
    }

    #[test]
    fn function_tables_row_major() {
        let sig = Signature {
            sorts: vec!["S".into()],
            functions: vec![FuncDecl { name: "f".into(), args: vec!["S".into(), "S".into()], result: "S".into() }],
            relations: vec![],
        };
        let mut m = FiniteStructure::new(&sig, &[("S".to_string(), 2)].into_iter().collect());
        // f(a,b) = a XOR b: rows (0,0),(0,1),(1,0),(1,1)
        m.functions.insert("f".into(), vec![0, 1, 1, 0]);
        m.validate(&sig).unwrap();
        assert_eq!(m.apply(&sig, "f", &[1, 0]).unwrap(), 1);
        assert_eq!(m.apply(&sig, "f", &[1, 1]).unwrap(), 0);
    }

    #[test]
    fn empty_tuple_product() {
        let got: Vec<_> = tuples(&[]).collect();
        assert_eq!(got, vec![Vec::<usize>::new()]);
        let got: Vec<_> = tuples(&[2, 2]).collect();
        assert_eq!(got, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(tuples(&[0, 2]).count(), 0);
    }
}
