//! Printers for the text grammar. `parse . print` is the identity up to
//! alpha-equivalence (and literal identity on parser output).

use super::{Formula, Sequent, Term, Theory};
use std::fmt;

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{}", v.name),
            Term::App { func, args } => {
                if args.is_empty() {
                    write!(f, "{func}")
                } else {
                    write!(f, "{func}(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            write!(f, ", ")?;
                        }
                        write!(f, "{a}")?;
                    }
                    write!(f, ")")
                }
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Rel { rel, args } => {
                write!(f, "{rel}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
            Formula::Eq { lhs, rhs } => write!(f, "{lhs} = {rhs}"),
            Formula::And { items } | Formula::Or { items } => {
                let name = if matches!(self, Formula::And { .. }) { "And" } else { "Or" };
                write!(f, "{name}[")?;
                for (i, g) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{g}")?;
                }
                write!(f, "]")
            }
            Formula::Exists { vars, body } => {
                write!(f, "Ex ")?;
                for (i, v) in vars.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{}:{}", v.name, v.sort)?;
                }
                if !vars.is_empty() {
                    write!(f, " ")?;
                }
                write!(f, ". ({body})")
            }
        }
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} |- [", self.antecedent)?;
        for (i, v) in self.context.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}:{}", v.name, v.sort)?;
        }
        write!(f, "] {}", self.consequent)
    }
}

/// Renders a theory as a `.geo` file.
pub fn print_theory(t: &Theory) -> String {
    let mut out = String::new();
    out.push_str(&format!("theory {}\n", t.name));
    for s in &t.signature.sorts {
        out.push_str(&format!("sort {s}\n"));
    }
    for fd in &t.signature.functions {
        out.push_str(&format!("fn {}({}) -> {}\n", fd.name, fd.args.join(", "), fd.result));
    }
    for rd in &t.signature.relations {
        out.push_str(&format!("rel {}({})\n", rd.name, rd.args.join(", ")));
    }
    for ax in &t.axioms {
        out.push_str(&format!("axiom {} : {}\n", ax.name, ax.sequent));
    }
    out
}

#[cfg(test)]
mod tests {
    use crate::syntax::{parse_formula, parse_sequent, Formula, FuncDecl, RelDecl, Signature, Term, Var};

    fn sig() -> Signature {
        Signature {
            sorts: vec!["S".into()],
            functions: vec![FuncDecl { name: "c".into(), args: vec![], result: "S".into() }],
            relations: vec![RelDecl { name: "P".into(), args: vec!["S".into()] }],
        }
    }

    #[test]
    fn print_empty_binder() {
        let f = Formula::exists(vec![], Formula::rel("P", vec![Term::constant("c")]));
        assert_eq!(f.to_string(), "Ex . (P(c))");
        assert_eq!(parse_formula(&sig(), &f.to_string()).unwrap(), f);
    }

    #[test]
    fn print_parse_sequent() {
        let s = parse_sequent(&sig(), "P(x) |- [x:S] Or[P(x), P(c)]").unwrap();
        let printed = s.to_string();
        assert_eq!(parse_sequent(&sig(), &printed).unwrap(), s);
    }

    #[test]
    fn print_fresh_suffix_names() {
        let f = Formula::exists(
            vec![Var::new("y#1", "S")],
            Formula::rel("P", vec![Term::var("y#1", "S")]),
        );
        assert_eq!(parse_formula(&sig(), &f.to_string()).unwrap(), f);
    }
}
