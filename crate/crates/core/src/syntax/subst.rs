//! Capture-avoiding simultaneous substitution.

use super::{Formula, FreshGen, Signature, Term, Var, WfError};
use std::collections::BTreeMap;
use std::collections::HashSet;

/// A sort-respecting map from variables to terms.
pub type Subst = BTreeMap<Var, Term>;

/// Checks that every mapping sends a variable to a term of the same sort.
pub fn check_subst(sig: &Signature, subst: &Subst) -> Result<(), WfError> {
    for (v, t) in subst {
        let got = t.check(sig)?;
        if got != v.sort {
            return Err(WfError::SortMismatch {
                expected: v.sort.clone(),
                got,
                place: format!("substitution for `{}`", v.name),
            });
        }
    }
    Ok(())
}

pub fn substitute_term(t: &Term, subst: &Subst) -> Term {
    match t {
        Term::Var(v) => subst.get(v).cloned().unwrap_or_else(|| t.clone()),
        Term::App { func, args } => Term::App {
            func: func.clone(),
            args: args.iter().map(|a| substitute_term(a, subst)).collect(),
        },
    }
}

/// Capture-avoiding simultaneous substitution. Bound variables are renamed
/// with the `name#k` fresh scheme whenever they would capture a variable of a
/// substituted term.
pub fn substitute(f: &Formula, subst: &Subst) -> Formula {
    let mut taken: HashSet<String> = HashSet::new();
    f.all_names(&mut taken);
    for t in subst.values() {
        for v in t.vars() {
            taken.insert(v.name);
        }
    }
    let mut fresh = FreshGen::new(taken);
    go(f, subst, &mut fresh)
}

fn go(f: &Formula, subst: &Subst, fresh: &mut FreshGen) -> Formula {
    match f {
        Formula::Rel { rel, args } => Formula::Rel {
            rel: rel.clone(),
            args: args.iter().map(|t| substitute_term(t, subst)).collect(),
        },
        Formula::Eq { lhs, rhs } => Formula::Eq {
            lhs: substitute_term(lhs, subst),
            rhs: substitute_term(rhs, subst),
        },
        Formula::And { items } => Formula::And { items: items.iter().map(|g| go(g, subst, fresh)).collect() },
        Formula::Or { items } => Formula::Or { items: items.iter().map(|g| go(g, subst, fresh)).collect() },
        Formula::Exists { vars, body } => {
            // binders shadow the substitution
            let mut live: Subst = subst.clone();
            for v in vars {
                live.remove(v);
            }
            // variables that would be captured by the binder tuple
            let mut in_images: HashSet<Var> = HashSet::new();
            let body_free = body.free_var_set();
            for (v, t) in &live {
                if body_free.contains(v) {
                    for w in t.vars() {
                        in_images.insert(w);
                    }
                }
            }
            let mut new_vars = Vec::with_capacity(vars.len());
            for v in vars {
                if in_images.contains(v) {
                    let name = fresh.fresh(&v.name);
                    let nv = Var::new(name, v.sort.clone());
                    live.insert(v.clone(), Term::Var(nv.clone()));
                    new_vars.push(nv);
                } else {
                    new_vars.push(v.clone());
                }
            }
            Formula::Exists { vars: new_vars, body: Box::new(go(body, &live, fresh)) }
        }
    }
}

/// Composition `tau . sigma` as a substitution: apply `sigma`, then `tau` to
/// the images, and keep `tau`'s own mappings for variables outside the
/// support of `sigma`.
pub fn compose_subst(sigma: &Subst, tau: &Subst) -> Subst {
    let mut out: Subst = Subst::new();
    for (v, t) in sigma {
        out.insert(v.clone(), substitute_term(t, tau));
    }
    for (v, t) in tau {
        out.entry(v.clone()).or_insert_with(|| t.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::alpha_eq;

    fn x() -> Var {
        Var::new("x", "S")
    }

    fn y() -> Var {
        Var::new("y", "S")
    }

    #[test]
    fn substitute_atom() {
        // P(x), {x -> c}  =>  P(c)
        let f = Formula::rel("P", vec![Term::Var(x())]);
        let mut s = Subst::new();
        s.insert(x(), Term::constant("c"));
        assert_eq!(substitute(&f, &s), Formula::rel("P", vec![Term::constant("c")]));
    }

    #[test]
    fn substitute_avoids_capture() {
        // Ex[y](R(x,y)), {x -> y}  =>  Ex[y'](R(y,y'))
        let f = Formula::exists(vec![y()], Formula::rel("R", vec![Term::Var(x()), Term::Var(y())]));
        let mut s = Subst::new();
        s.insert(x(), Term::Var(y()));
        let got = substitute(&f, &s);
        let expect = Formula::exists(
            vec![Var::new("y#1", "S")],
            Formula::rel("R", vec![Term::Var(y()), Term::var("y#1", "S")]),
        );
        assert!(alpha_eq(&got, &expect), "got {got:?}");
        // and the free variable is now y
        assert_eq!(got.free_vars(), vec![y()]);
    }

    #[test]
    fn substitute_into_equality() {
        // eq(x,x), {x -> f(z)}  =>  eq(f(z),f(z))
        let f = Formula::eq(Term::Var(x()), Term::Var(x()));
        let mut s = Subst::new();
        s.insert(x(), Term::app("f", vec![Term::var("z", "S")]));
        let t = Term::app("f", vec![Term::var("z", "S")]);
        assert_eq!(substitute(&f, &s), Formula::eq(t.clone(), t));
    }

    #[test]
    fn free_vars_after_substitution() {
        let f = Formula::rel("R", vec![Term::Var(x()), Term::Var(y())]);
        let mut s = Subst::new();
        s.insert(x(), Term::app("f", vec![Term::var("z", "S")]));
        let got = substitute(&f, &s);
        assert_eq!(got.free_vars(), vec![Var::new("z", "S"), y()]);
    }
}
