//! Proof checking: every node's sequent must equal the conclusion computed
//! from its rule application, and every axiom citation must name a theory
//! axiom, up to alpha-equivalence.

use super::{apply_rule, Proof, RuleError, RulePayload, RuleTag};
use crate::syntax::{sequent_alpha_eq, Sequent, Theory};

/// Checker configuration. Disabling the tree rule yields the base calculus
/// without it, for exhibiting sequents that need it.
#[derive(Clone, Copy, Debug)]
pub struct CheckOptions {
    pub allow_rule_t: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { allow_rule_t: true }
    }
}

/// The checker's verdict; errors are data, never panics.
#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Accepted,
    Rejected { node: usize, error: RuleError },
}

impl Verdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Verdict::Accepted)
    }
}

pub fn check_proof(theory: &Theory, proof: &Proof, options: CheckOptions) -> Verdict {
    if proof.nodes.is_empty() || proof.root >= proof.nodes.len() {
        return Verdict::Rejected {
            node: 0,
            error: RuleError::Malformed("empty proof or root index out of range".into()),
        };
    }
    for (i, node) in proof.nodes.iter().enumerate() {
        if node.rule.payload.tag() == RuleTag::RuleT && !options.allow_rule_t {
            return Verdict::Rejected { node: i, error: RuleError::RuleTDisabled };
        }
        for &p in &node.rule.premises {
            if p >= i {
                return Verdict::Rejected {
                    node: i,
                    error: RuleError::Malformed(format!(
                        "premise {p} does not precede node {i}"
                    )),
                };
            }
        }
        let premises: Vec<Sequent> = node
            .rule
            .premises
            .iter()
            .map(|&p| proof.nodes[p].sequent.clone())
            .collect();
        let computed = match apply_rule(theory, &node.rule, &premises) {
            Ok(s) => s,
            Err(e) => return Verdict::Rejected { node: i, error: e },
        };
        if let Err(e) = node.sequent.check(&theory.signature) {
            return Verdict::Rejected { node: i, error: RuleError::Malformed(e.to_string()) };
        }
        // stated sequents (and axiom citations in particular) are compared
        // up to alpha-equivalence of the whole sequent
        if !sequent_alpha_eq(&node.sequent, &computed) {
            return Verdict::Rejected {
                node: i,
                error: RuleError::SchemaMismatch(format!(
                    "stated sequent `{}` differs from the computed conclusion `{computed}`",
                    node.sequent
                )),
            };
        }
    }
    Verdict::Accepted
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{ProofNode, RuleApp};
    use crate::syntax::{parse_sequent, parse_theory, Formula, Term, Var};

    fn theory() -> Theory {
        parse_theory("theory t\nsort S\nrel P(S)\nrel Q(S)").unwrap()
    }

    #[test]
    fn one_node_identity_proof() {
        let t = theory();
        let s = parse_sequent(&t.signature, "P(x) |- [x] P(x)").unwrap();
        let proof = Proof {
            theory_name: "t".into(),
            nodes: vec![ProofNode {
                sequent: s,
                rule: RuleApp {
                    payload: RulePayload::Identity {
                        formula: Formula::rel("P", vec![Term::var("x", "S")]),
                        context: vec![Var::new("x", "S")],
                    },
                    premises: vec![],
                },
            }],
            root: 0,
        };
        assert_eq!(check_proof(&t, &proof, CheckOptions::default()), Verdict::Accepted);
    }

    #[test]
    fn unknown_axiom_rejected() {
        let t = theory();
        let s = parse_sequent(&t.signature, "P(x) |- [x] Q(x)").unwrap();
        let proof = Proof {
            theory_name: "t".into(),
            nodes: vec![ProofNode {
                sequent: s,
                rule: RuleApp { payload: RulePayload::Axiom { name: "nope".into() }, premises: vec![] },
            }],
            root: 0,
        };
        match check_proof(&t, &proof, CheckOptions::default()) {
            Verdict::Rejected { node: 0, error: RuleError::UnknownAxiom(name) } => {
                assert_eq!(name, "nope")
            }
            v => panic!("unexpected verdict {v:?}"),
        }
    }

    #[test]
    fn stated_sequent_must_match() {
        let t = theory();
        let wrong = parse_sequent(&t.signature, "P(x) |- [x] Q(x)").unwrap();
        let proof = Proof {
            theory_name: "t".into(),
            nodes: vec![ProofNode {
                sequent: wrong,
                rule: RuleApp {
                    payload: RulePayload::Identity {
                        formula: Formula::rel("P", vec![Term::var("x", "S")]),
                        context: vec![Var::new("x", "S")],
                    },
                    premises: vec![],
                },
            }],
            root: 0,
        };
        assert!(matches!(
            check_proof(&t, &proof, CheckOptions::default()),
            Verdict::Rejected { node: 0, error: RuleError::SchemaMismatch(_) }
        ));
    }

    #[test]
    fn alpha_variant_of_axiom_accepted() {
        let mut t = theory();
        t.axioms.push(crate::syntax::Axiom {
            name: "pq".into(),
            sequent: parse_sequent(&t.signature, "P(x) |- [x] Q(x)").unwrap(),
        });
        // cite the axiom under a renamed context
        let renamed = parse_sequent(&t.signature, "P(z) |- [z] Q(z)").unwrap();
        let proof = Proof {
            theory_name: "t".into(),
            nodes: vec![ProofNode {
                sequent: renamed,
                rule: RuleApp { payload: RulePayload::Axiom { name: "pq".into() }, premises: vec![] },
            }],
            root: 0,
        };
        assert_eq!(check_proof(&t, &proof, CheckOptions::default()), Verdict::Accepted);
    }
}
