//! Rule application: computes the unique conclusion of a rule instance from
//! its payload and premises, or reports why the instance is invalid.

use super::tree::apply_rule_T;
use super::{RuleApp, RuleError, RulePayload, TreePremises};
use crate::syntax::{
    alpha_eq, substitute, Formula, Sequent, Signature, Subst, Term, Theory, Var,
};
use std::collections::HashSet;

fn distinct(vars: &[Var]) -> bool {
    let mut names = HashSet::new();
    vars.iter().all(|v| names.insert(&v.name))
}

fn check_context(sig: &Signature, context: &[Var], formulas: &[&Formula]) -> Result<(), RuleError> {
    if !distinct(context) {
        return Err(RuleError::ContextError("context variables not pairwise distinct".into()));
    }
    for v in context {
        if !sig.sort_decl(&v.sort) {
            return Err(RuleError::ContextError(format!("undeclared sort `{}`", v.sort)));
        }
    }
    for f in formulas {
        for v in f.free_vars() {
            if !context.contains(&v) {
                return Err(RuleError::ContextError(format!(
                    "context fails to cover free variable `{}`",
                    v.name
                )));
            }
        }
    }
    Ok(())
}

fn check_wf(sig: &Signature, f: &Formula) -> Result<(), RuleError> {
    f.check(sig).map_err(|e| RuleError::Malformed(e.to_string()))
}

fn arity(expected: usize, premises: &[Sequent]) -> Result<(), RuleError> {
    if premises.len() != expected {
        return Err(RuleError::SchemaMismatch(format!(
            "expected {expected} premises, got {}",
            premises.len()
        )));
    }
    Ok(())
}

fn same_context(premises: &[Sequent]) -> Result<(), RuleError> {
    if let Some(first) = premises.first() {
        for p in &premises[1..] {
            if p.context != first.context {
                return Err(RuleError::ContextError(
                    "premise contexts must be identical".into(),
                ));
            }
        }
    }
    Ok(())
}

/// Computes the conclusion of a rule application. Pure and deterministic in
/// the payload and premises.
pub fn apply_rule(
    theory: &Theory,
    app: &RuleApp,
    premises: &[Sequent],
) -> Result<Sequent, RuleError> {
    let sig = &theory.signature;
    match &app.payload {
        RulePayload::Identity { formula, context } => {
            arity(0, premises)?;
            check_wf(sig, formula)?;
            check_context(sig, context, &[formula])?;
            Ok(Sequent::new(formula.clone(), context.clone(), formula.clone()))
        }

        RulePayload::Substitution { map, context } => {
            arity(1, premises)?;
            let p = &premises[0];
            let mut subst = Subst::new();
            for (v, t) in map {
                if !p.context.contains(v) {
                    return Err(RuleError::SchemaMismatch(format!(
                        "substituted variable `{}` is not in the premise context",
                        v.name
                    )));
                }
                let got = t.check(sig).map_err(|e| RuleError::Malformed(e.to_string()))?;
                if got != v.sort {
                    return Err(RuleError::Malformed(format!(
                        "substitution for `{}` has sort `{got}`, expected `{}`",
                        v.name, v.sort
                    )));
                }
                if subst.insert(v.clone(), t.clone()).is_some() {
                    return Err(RuleError::Malformed(format!("variable `{}` mapped twice", v.name)));
                }
            }
            // the new context must include every variable occurring in the
            // image of the premise context
            if !distinct(context) {
                return Err(RuleError::ContextError("context variables not pairwise distinct".into()));
            }
            for v in &p.context {
                let image = subst.get(v).cloned().unwrap_or_else(|| Term::Var(v.clone()));
                for w in image.vars() {
                    if !context.contains(&w) {
                        return Err(RuleError::ContextError(format!(
                            "context must include `{}` occurring in the substituted terms",
                            w.name
                        )));
                    }
                }
            }
            let antecedent = substitute(&p.antecedent, &subst);
            let consequent = substitute(&p.consequent, &subst);
            Ok(Sequent::new(antecedent, context.clone(), consequent))
        }

        RulePayload::Cut => {
            arity(2, premises)?;
            same_context(premises)?;
            let (a, b) = (&premises[0], &premises[1]);
            if !alpha_eq(&a.consequent, &b.antecedent) {
                return Err(RuleError::SchemaMismatch(
                    "cut formula differs between the premises".into(),
                ));
            }
            Ok(Sequent::new(a.antecedent.clone(), a.context.clone(), b.consequent.clone()))
        }

        RulePayload::EqRefl { var } => {
            arity(0, premises)?;
            if !sig.sort_decl(&var.sort) {
                return Err(RuleError::Malformed(format!("undeclared sort `{}`", var.sort)));
            }
            let t = Term::Var(var.clone());
            Ok(Sequent::new(Formula::top(), vec![var.clone()], Formula::eq(t.clone(), t)))
        }

        RulePayload::EqSubst { xs, ys, formula, context } => {
            arity(0, premises)?;
            if xs.len() != ys.len() {
                return Err(RuleError::Malformed("variable tuples differ in length".into()));
            }
            if xs.iter().zip(ys).any(|(a, b)| a.sort != b.sort) {
                return Err(RuleError::Malformed("variable tuples differ in sorts".into()));
            }
            if !distinct(xs) || !distinct(ys) {
                return Err(RuleError::Malformed("variable tuples must be pairwise distinct".into()));
            }
            check_wf(sig, formula)?;
            let mut items: Vec<Formula> = xs
                .iter()
                .zip(ys)
                .map(|(a, b)| Formula::eq(Term::Var(a.clone()), Term::Var(b.clone())))
                .collect();
            items.push(formula.clone());
            let antecedent = Formula::and(items);
            for v in xs.iter().chain(ys.iter()) {
                if !context.contains(v) {
                    return Err(RuleError::ContextError(format!(
                        "context must contain tuple variable `{}`",
                        v.name
                    )));
                }
            }
            check_context(sig, context, &[&antecedent])?;
            let subst: Subst = xs
                .iter()
                .cloned()
                .zip(ys.iter().map(|v| Term::Var(v.clone())))
                .collect();
            let consequent = substitute(formula, &subst);
            Ok(Sequent::new(antecedent, context.clone(), consequent))
        }

        RulePayload::ConjProj { items, index, context } => {
            arity(0, premises)?;
            let j = *index;
            if j >= items.len() {
                return Err(RuleError::Malformed(format!(
                    "projection index {j} out of range for {} conjuncts",
                    items.len()
                )));
            }
            let antecedent = Formula::and(items.clone());
            check_wf(sig, &antecedent)?;
            check_context(sig, context, &[&antecedent])?;
            Ok(Sequent::new(antecedent, context.clone(), items[j].clone()))
        }

        RulePayload::ConjIntro { antecedent, context } => {
            if premises.is_empty() {
                let (Some(ante), Some(ctx)) = (antecedent, context) else {
                    return Err(RuleError::Malformed(
                        "nullary conjunction introduction needs an antecedent and context payload".into(),
                    ));
                };
                check_wf(sig, ante)?;
                check_context(sig, ctx, &[ante])?;
                return Ok(Sequent::new(ante.clone(), ctx.clone(), Formula::top()));
            }
            if antecedent.is_some() || context.is_some() {
                return Err(RuleError::Malformed(
                    "conjunction introduction payload is only for the nullary case".into(),
                ));
            }
            same_context(premises)?;
            let first = &premises[0];
            for p in &premises[1..] {
                if !alpha_eq(&p.antecedent, &first.antecedent) {
                    return Err(RuleError::SchemaMismatch(
                        "premises do not share the antecedent".into(),
                    ));
                }
            }
            let items = premises.iter().map(|p| p.consequent.clone()).collect();
            Ok(Sequent::new(first.antecedent.clone(), first.context.clone(), Formula::and(items)))
        }

        RulePayload::DisjInj { items, index, context } => {
            arity(0, premises)?;
            let j = *index;
            if j >= items.len() {
                return Err(RuleError::Malformed(format!(
                    "injection index {j} out of range for {} disjuncts",
                    items.len()
                )));
            }
            let consequent = Formula::or(items.clone());
            check_wf(sig, &consequent)?;
            check_context(sig, context, &[&consequent])?;
            Ok(Sequent::new(items[j].clone(), context.clone(), consequent))
        }

        RulePayload::DisjElim { consequent, context } => {
            if premises.is_empty() {
                let (Some(cons), Some(ctx)) = (consequent, context) else {
                    return Err(RuleError::Malformed(
                        "nullary disjunction elimination needs a consequent and context payload".into(),
                    ));
                };
                check_wf(sig, cons)?;
                check_context(sig, ctx, &[cons])?;
                return Ok(Sequent::new(Formula::bot(), ctx.clone(), cons.clone()));
            }
            if consequent.is_some() || context.is_some() {
                return Err(RuleError::Malformed(
                    "disjunction elimination payload is only for the nullary case".into(),
                ));
            }
            same_context(premises)?;
            let first = &premises[0];
            for p in &premises[1..] {
                if !alpha_eq(&p.consequent, &first.consequent) {
                    return Err(RuleError::SchemaMismatch(
                        "premises do not share the consequent".into(),
                    ));
                }
            }
            let items = premises.iter().map(|p| p.antecedent.clone()).collect();
            Ok(Sequent::new(Formula::or(items), first.context.clone(), first.consequent.clone()))
        }

        RulePayload::ExistsIntro { bound } => {
            arity(1, premises)?;
            let p = &premises[0];
            if bound.len() > p.context.len() {
                return Err(RuleError::SchemaMismatch(
                    "bound tuple longer than the premise context".into(),
                ));
            }
            let split = p.context.len() - bound.len();
            if &p.context[split..] != bound.as_slice() {
                return Err(RuleError::SchemaMismatch(
                    "bound tuple must be the trailing segment of the premise context".into(),
                ));
            }
            let cons_free = p.consequent.free_var_set();
            for v in bound {
                if cons_free.contains(v) {
                    return Err(RuleError::SideConditionViolated {
                        condition: "no bound variable may be free in the consequent".into(),
                        variable: Some(v.name.clone()),
                    });
                }
            }
            Ok(Sequent::new(
                Formula::exists(bound.clone(), p.antecedent.clone()),
                p.context[..split].to_vec(),
                p.consequent.clone(),
            ))
        }

        RulePayload::ExistsElim => {
            arity(1, premises)?;
            let p = &premises[0];
            let Formula::Exists { vars, body } = &p.antecedent else {
                return Err(RuleError::SchemaMismatch(
                    "premise antecedent must be an existential".into(),
                ));
            };
            let cons_free = p.consequent.free_var_set();
            for v in vars {
                if cons_free.contains(v) {
                    return Err(RuleError::SideConditionViolated {
                        condition: "no bound variable may be free in the consequent".into(),
                        variable: Some(v.name.clone()),
                    });
                }
                if p.context.iter().any(|c| c.name == v.name) {
                    return Err(RuleError::SideConditionViolated {
                        condition: "bound variable collides with the context; rename the binder first".into(),
                        variable: Some(v.name.clone()),
                    });
                }
            }
            let mut context = p.context.clone();
            context.extend(vars.iter().cloned());
            Ok(Sequent::new((**body).clone(), context, p.consequent.clone()))
        }

        RulePayload::SmallDistrib { left, items, context } => {
            arity(0, premises)?;
            let antecedent = Formula::and(vec![left.clone(), Formula::or(items.clone())]);
            check_wf(sig, &antecedent)?;
            check_context(sig, context, &[&antecedent])?;
            let consequent = Formula::or(
                items
                    .iter()
                    .map(|g| Formula::and(vec![left.clone(), g.clone()]))
                    .collect(),
            );
            Ok(Sequent::new(antecedent, context.clone(), consequent))
        }

        RulePayload::Frobenius { left, bound, body, context } => {
            arity(0, premises)?;
            if !distinct(bound) {
                return Err(RuleError::Malformed("bound tuple must be pairwise distinct".into()));
            }
            for v in bound {
                if context.iter().any(|c| c.name == v.name) {
                    return Err(RuleError::SideConditionViolated {
                        condition: "no bound variable may be in the context".into(),
                        variable: Some(v.name.clone()),
                    });
                }
            }
            let antecedent = Formula::and(vec![
                left.clone(),
                Formula::exists(bound.clone(), body.clone()),
            ]);
            check_wf(sig, &antecedent)?;
            check_context(sig, context, &[&antecedent])?;
            let consequent = Formula::exists(
                bound.clone(),
                Formula::and(vec![left.clone(), body.clone()]),
            );
            Ok(Sequent::new(antecedent, context.clone(), consequent))
        }

        RulePayload::RuleT { tree, premise_paths } => {
            if premise_paths.len() != premises.len() {
                return Err(RuleError::Malformed(
                    "premise path list must align with the premise list".into(),
                ));
            }
            let mut map = TreePremises::new();
            for (path, seq) in premise_paths.iter().zip(premises) {
                if map.insert(path.clone(), seq.clone()).is_some() {
                    return Err(RuleError::Malformed(format!(
                        "duplicate premise for tree node {path:?}"
                    )));
                }
            }
            apply_rule_T(theory, tree, &map)
        }

        RulePayload::Axiom { name } => {
            arity(0, premises)?;
            let ax = theory
                .axiom(name)
                .ok_or_else(|| RuleError::UnknownAxiom(name.clone()))?;
            Ok(ax.sequent.clone())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_sequent, parse_theory};

    fn theory() -> Theory {
        parse_theory(
            "theory t\nsort S\nrel P(S)\nrel Q(S)\nrel R(S)\nrel R2(S, S)\nfn c() -> S",
        )
        .unwrap()
    }

    fn px() -> Formula {
        Formula::rel("P", vec![Term::var("x", "S")])
    }

    fn ctx_x() -> Vec<Var> {
        vec![Var::new("x", "S")]
    }

    fn run(t: &Theory, payload: RulePayload, premises: &[Sequent]) -> Result<Sequent, RuleError> {
        apply_rule(t, &RuleApp { payload, premises: vec![] }, premises)
    }

    #[test]
    fn identity_axiom() {
        let t = theory();
        let s = run(&t, RulePayload::Identity { formula: px(), context: ctx_x() }, &[]).unwrap();
        assert_eq!(s, parse_sequent(&t.signature, "P(x) |- [x] P(x)").unwrap());
    }

    #[test]
    fn cut_composes() {
        let t = theory();
        let a = parse_sequent(&t.signature, "P(x) |- [x] Q(x)").unwrap();
        let b = parse_sequent(&t.signature, "Q(x) |- [x] R(x)").unwrap();
        let s = run(&t, RulePayload::Cut, &[a, b]).unwrap();
        assert_eq!(s, parse_sequent(&t.signature, "P(x) |- [x] R(x)").unwrap());
    }

    #[test]
    fn small_distrib_schema() {
        let t = theory();
        let s = run(
            &t,
            RulePayload::SmallDistrib {
                left: Formula::rel("R", vec![Term::var("x", "S")]),
                items: vec![px(), Formula::rel("Q", vec![Term::var("x", "S")])],
                context: ctx_x(),
            },
            &[],
        )
        .unwrap();
        let expect = parse_sequent(
            &t.signature,
            "And[R(x), Or[P(x), Q(x)]] |- [x] Or[And[R(x), P(x)], And[R(x), Q(x)]]",
        )
        .unwrap();
        assert_eq!(s, expect);
    }

    #[test]
    fn frobenius_rejects_context_clash() {
        let t = theory();
        let e = run(
            &t,
            RulePayload::Frobenius {
                left: px(),
                bound: vec![Var::new("x", "S")],
                body: Formula::rel("Q", vec![Term::var("x", "S")]),
                context: ctx_x(),
            },
            &[],
        )
        .unwrap_err();
        assert!(matches!(e, RuleError::SideConditionViolated { .. }));
    }

    #[test]
    fn frobenius_schema() {
        let t = theory();
        let s = run(
            &t,
            RulePayload::Frobenius {
                left: px(),
                bound: vec![Var::new("y", "S")],
                body: Formula::rel("R2", vec![Term::var("x", "S"), Term::var("y", "S")]),
                context: ctx_x(),
            },
            &[],
        )
        .unwrap();
        let expect = parse_sequent(
            &t.signature,
            "And[P(x), Ex y:S. (R2(x, y))] |- [x] Ex y:S. (And[P(x), R2(x, y)])",
        )
        .unwrap();
        assert_eq!(s, expect);
    }

    #[test]
    fn exists_roundtrip() {
        let t = theory();
        let p = parse_sequent(&t.signature, "R2(x, y) |- [x, y] P(x)").unwrap();
        let intro = run(&t, RulePayload::ExistsIntro { bound: vec![Var::new("y", "S")] }, &[p]).unwrap();
        let expect = parse_sequent(&t.signature, "Ex y:S. (R2(x, y)) |- [x] P(x)").unwrap();
        assert_eq!(intro, expect);
        let back = run(&t, RulePayload::ExistsElim, &[intro]).unwrap();
        assert_eq!(back, parse_sequent(&t.signature, "R2(x, y) |- [x, y] P(x)").unwrap());
    }

    #[test]
    fn exists_intro_side_condition() {
        let t = theory();
        let p = parse_sequent(&t.signature, "R2(x, y) |- [x, y] P(y)").unwrap();
        let e = run(&t, RulePayload::ExistsIntro { bound: vec![Var::new("y", "S")] }, &[p]).unwrap_err();
        assert!(matches!(e, RuleError::SideConditionViolated { .. }));
    }

    #[test]
    fn eq_subst_schema() {
        let t = theory();
        let s = run(
            &t,
            RulePayload::EqSubst {
                xs: vec![Var::new("x", "S")],
                ys: vec![Var::new("y", "S")],
                formula: px(),
                context: vec![Var::new("x", "S"), Var::new("y", "S")],
            },
            &[],
        )
        .unwrap();
        let expect = parse_sequent(&t.signature, "And[x = y, P(x)] |- [x, y:S] P(y)").unwrap();
        assert_eq!(s, expect);
    }

    #[test]
    fn substitution_requires_covering_context() {
        let t = theory();
        let p = parse_sequent(&t.signature, "P(x) |- [x] Q(x)").unwrap();
        let e = run(
            &t,
            RulePayload::Substitution {
                map: vec![(Var::new("x", "S"), Term::var("z", "S"))],
                context: vec![],
            },
            &[p],
        )
        .unwrap_err();
        assert!(matches!(e, RuleError::ContextError(_)));
    }

    #[test]
    fn substitution_instantiates_constant() {
        let t = theory();
        let p = parse_sequent(&t.signature, "P(x) |- [x] Q(x)").unwrap();
        let s = run(
            &t,
            RulePayload::Substitution {
                map: vec![(Var::new("x", "S"), Term::constant("c"))],
                context: vec![],
            },
            &[p],
        )
        .unwrap();
        assert_eq!(s, parse_sequent(&t.signature, "P(c) |- [] Q(c)").unwrap());
    }

    #[test]
    fn axiom_citation() {
        let mut t = theory();
        let ax = parse_sequent(&t.signature, "P(x) |- [x] Q(x)").unwrap();
        t.axioms.push(crate::syntax::Axiom { name: "pq".into(), sequent: ax.clone() });
        assert_eq!(run(&t, RulePayload::Axiom { name: "pq".into() }, &[]).unwrap(), ax);
        assert!(matches!(
            run(&t, RulePayload::Axiom { name: "zz".into() }, &[]),
            Err(RuleError::UnknownAxiom(_))
        ));
    }
}
