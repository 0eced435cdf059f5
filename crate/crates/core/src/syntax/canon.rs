//! Canonical forms: every formula normalizes to a disjunction of
//! existentially closed conjunctions of atomic formulas,
//! `Or[Ex[..](And[atomic..]), ..]`.
//!
//! The traversal distributes conjunction over disjunction innermost-first and
//! prenexes existentials outward in a single pass, renaming binders with a
//! per-call fresh counter whenever tuples would clash.

use super::{substitute, Formula, Sequent, Subst, Term, Var};
use std::collections::HashSet;
use thiserror::Error;

/// Fresh-name supply with the `x, x#1, x#2, ..` suffix scheme.
#[derive(Clone, Debug, Default)]
pub struct FreshGen {
    taken: HashSet<String>,
}

impl FreshGen {
    pub fn new(taken: HashSet<String>) -> Self {
        FreshGen { taken }
    }

    pub fn for_formula(f: &Formula) -> Self {
        let mut taken = HashSet::new();
        f.all_names(&mut taken);
        FreshGen { taken }
    }

    pub fn reserve(&mut self, name: &str) {
        self.taken.insert(name.to_string());
    }

    /// Returns `base` itself when unused, otherwise `stem#k` for the least
    /// free `k`, where `stem` is `base` without any existing `#k` suffix.
    pub fn fresh(&mut self, base: &str) -> String {
        if !self.taken.contains(base) {
            self.taken.insert(base.to_string());
            return base.to_string();
        }
        let stem = match base.split_once('#') {
            Some((s, _)) => s,
            None => base,
        };
        let mut k = 1usize;
        loop {
            let cand = format!("{stem}#{k}");
            if !self.taken.contains(&cand) {
                self.taken.insert(cand.clone());
                return cand;
            }
            k += 1;
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CanonError {
    #[error("antecedent not conjunctive-atomic after normalization ({disjuncts} disjuncts); split the axiom")]
    AntecedentNotConjunctive { disjuncts: usize },
}

/// One disjunct of a canonical form: an existential tuple over a list of
/// atomic conjuncts. The tuple binds exactly the matching occurrences in
/// `atoms`.
#[derive(Clone, Debug)]
struct Disjunct {
    vars: Vec<Var>,
    atoms: Vec<Formula>,
}

impl Disjunct {
    fn free_names(&self) -> HashSet<String> {
        Formula::exists(self.vars.clone(), Formula::and(self.atoms.clone()))
            .free_vars()
            .into_iter()
            .map(|v| v.name)
            .collect()
    }

    /// Renames the bound tuple away from `avoid`, registering the final
    /// names there.
    fn rename_binders(mut self, avoid: &mut HashSet<String>, fresh: &mut FreshGen) -> Disjunct {
        let mut map = Subst::new();
        let mut vars = Vec::with_capacity(self.vars.len());
        for v in &self.vars {
            if avoid.contains(&v.name) {
                let name = fresh.fresh(&v.name);
                avoid.insert(name.clone());
                let nv = Var::new(name, v.sort.clone());
                map.insert(v.clone(), Term::Var(nv.clone()));
                vars.push(nv);
            } else {
                avoid.insert(v.name.clone());
                fresh.reserve(&v.name);
                vars.push(v.clone());
            }
        }
        if !map.is_empty() {
            self.atoms = self.atoms.iter().map(|a| substitute(a, &map)).collect();
        }
        Disjunct { vars, atoms: self.atoms }
    }
}

fn disjuncts(f: &Formula, fresh: &mut FreshGen) -> Vec<Disjunct> {
    match f {
        Formula::Rel { .. } | Formula::Eq { .. } => {
            vec![Disjunct { vars: vec![], atoms: vec![f.clone()] }]
        }
        Formula::Or { items } => items.iter().flat_map(|g| disjuncts(g, fresh)).collect(),
        Formula::Exists { vars, body } => {
            let inner = disjuncts(body, fresh);
            inner
                .into_iter()
                .map(|d| {
                    // Outer binders go in front of the inner tuple. Free
                    // occurrences of a binder's own variable in the disjunct
                    // are exactly what it binds; a binder is renamed only on
                    // a genuine name clash (the inner tuple, a distinct free
                    // variable of the same name, or an earlier outer
                    // binder). A binder shadowed by the inner tuple binds
                    // nothing, so it is renamed without substituting.
                    let free = Formula::exists(d.vars.clone(), Formula::and(d.atoms.clone())).free_vars();
                    let mut used: HashSet<String> = d.vars.iter().map(|v| v.name.clone()).collect();
                    let mut map = Subst::new();
                    let mut outer: Vec<Var> = Vec::with_capacity(vars.len());
                    for v in vars {
                        let shadowed = d.vars.contains(v);
                        let clash = used.contains(&v.name)
                            || free.iter().any(|w| w.name == v.name && w != v);
                        if clash {
                            let nv = Var::new(fresh.fresh(&v.name), v.sort.clone());
                            used.insert(nv.name.clone());
                            if !shadowed {
                                map.insert(v.clone(), Term::Var(nv.clone()));
                            }
                            outer.push(nv);
                        } else {
                            used.insert(v.name.clone());
                            fresh.reserve(&v.name);
                            outer.push(v.clone());
                        }
                    }
                    let atoms = if map.is_empty() {
                        d.atoms
                    } else {
                        d.atoms.iter().map(|a| substitute(a, &map)).collect()
                    };
                    Disjunct { vars: outer.into_iter().chain(d.vars).collect(), atoms }
                })
                .collect()
        }
        Formula::And { items } => {
            // distribute innermost-first: normalize the operands, then take
            // the cartesian product of their disjunct lists in order
            let lists: Vec<Vec<Disjunct>> = items.iter().map(|g| disjuncts(g, fresh)).collect();
            let mut acc: Vec<Disjunct> = vec![Disjunct { vars: vec![], atoms: vec![] }];
            for list in lists {
                let mut next = Vec::with_capacity(acc.len() * list.len());
                for left in &acc {
                    for d in &list {
                        // binders on either side must not capture the other
                        // side's free variables
                        let mut avoid: HashSet<String> = left.free_names();
                        avoid.extend(d.free_names());
                        let l = left.clone().rename_binders(&mut avoid, fresh);
                        let r = d.clone().rename_binders(&mut avoid, fresh);
                        next.push(Disjunct {
                            vars: l.vars.into_iter().chain(r.vars).collect(),
                            atoms: l.atoms.into_iter().chain(r.atoms).collect(),
                        });
                    }
                }
                acc = next;
            }
            acc
        }
    }
}

/// Normalizes a formula to the literal `Or[Ex[..](And[atomic..]), ..]` shape.
/// The result is logically equivalent in every finite structure.
pub fn canonical_form(f: &Formula) -> Formula {
    let mut fresh = FreshGen::for_formula(f);
    let ds = disjuncts(f, &mut fresh);
    Formula::or(
        ds.into_iter()
            .map(|d| Formula::exists(d.vars, Formula::and(d.atoms)))
            .collect(),
    )
}

/// Recognizes the exact canonical shape.
pub fn is_canonical_form(f: &Formula) -> bool {
    match f {
        Formula::Or { items } => items.iter().all(|d| match d {
            Formula::Exists { body, .. } => match body.as_ref() {
                Formula::And { items } => items.iter().all(Formula::is_atomic),
                _ => false,
            },
            _ => false,
        }),
        _ => false,
    }
}

/// Normalizes a sequent: the antecedent must normalize to a single disjunct,
/// which becomes a conjunction of atomics (its existential tuple, if any, is
/// appended to the context after fresh renaming); the consequent is put in
/// canonical form.
pub fn canonical_sequent(s: &Sequent) -> Result<Sequent, CanonError> {
    let ante = canonical_form(&s.antecedent);
    let Formula::Or { items } = &ante else { unreachable!() };
    if items.len() != 1 {
        return Err(CanonError::AntecedentNotConjunctive { disjuncts: items.len() });
    }
    let Formula::Exists { vars, body } = &items[0] else { unreachable!() };
    let consequent = canonical_form(&s.consequent);
    let mut context = s.context.clone();
    let mut body = (**body).clone();
    if !vars.is_empty() {
        // lift the antecedent existential into the context
        let mut taken: HashSet<String> = context.iter().map(|v| v.name.clone()).collect();
        let mut all = HashSet::new();
        body.all_names(&mut all);
        consequent.all_names(&mut all);
        taken.extend(all);
        let mut fresh = FreshGen::new(taken);
        let mut map = Subst::new();
        for v in vars {
            let v2 = if context.iter().any(|c| c.name == v.name) {
                let nv = Var::new(fresh.fresh(&v.name), v.sort.clone());
                map.insert(v.clone(), Term::Var(nv.clone()));
                nv
            } else {
                v.clone()
            };
            context.push(v2);
        }
        if !map.is_empty() {
            body = substitute(&body, &map);
        }
    }
    Ok(Sequent::new(body, context, consequent))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Term {
        Term::var("x", "S")
    }

    fn p(t: Term) -> Formula {
        Formula::rel("P", vec![t])
    }

    fn q(t: Term) -> Formula {
        Formula::rel("Q", vec![t])
    }

    fn r(t: Term) -> Formula {
        Formula::rel("R", vec![t])
    }

    #[test]
    fn degenerate_single_disjunct() {
        // P(x)  =>  Or[Ex[](And[P(x)])]
        let got = canonical_form(&p(x()));
        let expect = Formula::or(vec![Formula::exists(vec![], Formula::and(vec![p(x())]))]);
        assert_eq!(got, expect);
        assert!(is_canonical_form(&got));
    }

    #[test]
    fn binary_distribution() {
        // And[Or[P(x),Q(x)], R(x)]  =>  Or[Ex[](And[P(x),R(x)]), Ex[](And[Q(x),R(x)])]
        let f = Formula::and(vec![Formula::or(vec![p(x()), q(x())]), r(x())]);
        let got = canonical_form(&f);
        let expect = Formula::or(vec![
            Formula::exists(vec![], Formula::and(vec![p(x()), r(x())])),
            Formula::exists(vec![], Formula::and(vec![q(x()), r(x())])),
        ]);
        assert_eq!(got, expect);
    }

    #[test]
    fn frobenius_direction() {
        // And[R(x), Ex[y](P(y))]  =>  Or[Ex[y](And[R(x),P(y)])]
        let f = Formula::and(vec![
            r(x()),
            Formula::exists(vec![Var::new("y", "S")], p(Term::var("y", "S"))),
        ]);
        let got = canonical_form(&f);
        let expect = Formula::or(vec![Formula::exists(
            vec![Var::new("y", "S")],
            Formula::and(vec![r(x()), p(Term::var("y", "S"))]),
        )]);
        assert_eq!(got, expect);
    }

    #[test]
    fn clash_between_conjuncts_is_renamed() {
        // And[Ex[y]P(y), Ex[y]Q(y)] keeps both tuples distinct
        let f = Formula::and(vec![
            Formula::exists(vec![Var::new("y", "S")], p(Term::var("y", "S"))),
            Formula::exists(vec![Var::new("y", "S")], q(Term::var("y", "S"))),
        ]);
        let got = canonical_form(&f);
        let Formula::Or { items } = &got else { panic!() };
        assert_eq!(items.len(), 1);
        let Formula::Exists { vars, .. } = &items[0] else { panic!() };
        assert_eq!(vars.len(), 2);
        assert_ne!(vars[0].name, vars[1].name);
    }

    #[test]
    fn binder_does_not_capture_parallel_free_var() {
        // And[Ex[y]P(y), Q(y)]: the free y of the second conjunct must stay free
        let f = Formula::and(vec![
            Formula::exists(vec![Var::new("y", "S")], p(Term::var("y", "S"))),
            q(Term::var("y", "S")),
        ]);
        let got = canonical_form(&f);
        assert_eq!(got.free_vars(), vec![Var::new("y", "S")]);
        let Formula::Or { items } = &got else { panic!() };
        let Formula::Exists { vars, body } = &items[0] else { panic!() };
        assert_eq!(vars.len(), 1);
        assert_ne!(vars[0].name, "y");
        let Formula::And { items } = body.as_ref() else { panic!() };
        assert_eq!(items[1], q(Term::var("y", "S")));
    }

    #[test]
    fn shadowed_outer_binder_binds_nothing() {
        // Ex[y](Ex[y](P(y))): the outer binder is vacuous
        let f = Formula::exists(
            vec![Var::new("y", "S")],
            Formula::exists(vec![Var::new("y", "S")], p(Term::var("y", "S"))),
        );
        let got = canonical_form(&f);
        assert!(got.free_vars().is_empty());
        let Formula::Or { items } = &got else { panic!() };
        let Formula::Exists { vars, body } = &items[0] else { panic!() };
        assert_eq!(vars.len(), 2);
        assert_ne!(vars[0].name, vars[1].name);
        let Formula::And { items } = body.as_ref() else { panic!() };
        // the atom still names the inner binder
        assert_eq!(items[0], p(Term::Var(vars[1].clone())));
    }

    #[test]
    fn empty_join_collapses_products() {
        // And[P(x), Or[]] has no disjuncts
        let f = Formula::and(vec![p(x()), Formula::bot()]);
        assert_eq!(canonical_form(&f), Formula::bot());
    }

    #[test]
    fn sequent_wraps_antecedent() {
        // P(x) |- [x] Q(x)  =>  And[P(x)] |- [x] Or[Ex[](And[Q(x)])]
        let s = Sequent::new(p(x()), vec![Var::new("x", "S")], q(x()));
        let got = canonical_sequent(&s).unwrap();
        assert_eq!(got.antecedent, Formula::and(vec![p(x())]));
        assert_eq!(
            got.consequent,
            Formula::or(vec![Formula::exists(vec![], Formula::and(vec![q(x())]))])
        );
        assert_eq!(got.context, vec![Var::new("x", "S")]);
    }

    #[test]
    fn sequent_keeps_conjunctive_antecedent() {
        let s = Sequent::new(
            Formula::and(vec![p(x()), q(x())]),
            vec![Var::new("x", "S")],
            Formula::exists(vec![Var::new("y", "S")], Formula::rel("R2", vec![x(), Term::var("y", "S")])),
        );
        let got = canonical_sequent(&s).unwrap();
        assert_eq!(got.antecedent, Formula::and(vec![p(x()), q(x())]));
        let expect = Formula::or(vec![Formula::exists(
            vec![Var::new("y", "S")],
            Formula::and(vec![Formula::rel("R2", vec![x(), Term::var("y", "S")])]),
        )]);
        assert_eq!(got.consequent, expect);
    }

    #[test]
    fn sequent_rejects_disjunctive_antecedent() {
        let s = Sequent::new(
            Formula::or(vec![p(x()), q(x())]),
            vec![Var::new("x", "S")],
            r(x()),
        );
        assert_eq!(
            canonical_sequent(&s),
            Err(CanonError::AntecedentNotConjunctive { disjuncts: 2 })
        );
    }

    #[test]
    fn sequent_lifts_antecedent_existential_into_context() {
        // Ex[y](R2(x,y)) |- [x] P(x) becomes R2(x,y) |- [x,y] ..
        let s = Sequent::new(
            Formula::exists(vec![Var::new("y", "S")], Formula::rel("R2", vec![x(), Term::var("y", "S")])),
            vec![Var::new("x", "S")],
            p(x()),
        );
        let got = canonical_sequent(&s).unwrap();
        assert_eq!(got.context, vec![Var::new("x", "S"), Var::new("y", "S")]);
        assert_eq!(got.antecedent, Formula::and(vec![Formula::rel("R2", vec![x(), Term::var("y", "S")])]));
    }

    #[test]
    fn fresh_gen_scheme() {
        let mut g = FreshGen::new(["x".to_string(), "x#1".to_string()].into_iter().collect());
        assert_eq!(g.fresh("x"), "x#2");
        assert_eq!(g.fresh("x"), "x#3");
        assert_eq!(g.fresh("y"), "y");
    }
}
