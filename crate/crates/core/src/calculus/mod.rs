//! Proof objects and a checker for the geometric sequent calculus with
//! indexed connectives, including finite instances of the tree rule over
//! bars, plus generators for the distributivity and choice derivations.

mod apply;
mod check;
mod derive;
mod json;
mod tree;

pub use apply::apply_rule;
pub use check::{check_proof, CheckOptions, Verdict};
pub use derive::{derive_choice, derive_distributivity, ProofBuilder};
pub use json::{proof_from_json, proof_to_json};
pub use tree::{apply_rule_T, validate_bar, TreeInstance};

use crate::syntax::{Formula, Sequent, Term, Var};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// The rule tags of the deduction system. `ExistsIntro` and `ExistsElim` are
/// the downward and upward readings of the double-line existential rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RuleTag {
    Identity,
    Substitution,
    Cut,
    EqRefl,
    EqSubst,
    ConjProj,
    ConjIntro,
    DisjInj,
    DisjElim,
    ExistsIntro,
    ExistsElim,
    SmallDistrib,
    Frobenius,
    RuleT,
    Axiom,
}

impl RuleTag {
    pub const ALL: [RuleTag; 15] = [
        RuleTag::Identity,
        RuleTag::Substitution,
        RuleTag::Cut,
        RuleTag::EqRefl,
        RuleTag::EqSubst,
        RuleTag::ConjProj,
        RuleTag::ConjIntro,
        RuleTag::DisjInj,
        RuleTag::DisjElim,
        RuleTag::ExistsIntro,
        RuleTag::ExistsElim,
        RuleTag::SmallDistrib,
        RuleTag::Frobenius,
        RuleTag::RuleT,
        RuleTag::Axiom,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleTag::Identity => "identity",
            RuleTag::Substitution => "substitution",
            RuleTag::Cut => "cut",
            RuleTag::EqRefl => "eq_refl",
            RuleTag::EqSubst => "eq_subst",
            RuleTag::ConjProj => "conj_proj",
            RuleTag::ConjIntro => "conj_intro",
            RuleTag::DisjInj => "disj_inj",
            RuleTag::DisjElim => "disj_elim",
            RuleTag::ExistsIntro => "exists_intro",
            RuleTag::ExistsElim => "exists_elim",
            RuleTag::SmallDistrib => "small_distrib",
            RuleTag::Frobenius => "frobenius",
            RuleTag::RuleT => "rule_t",
            RuleTag::Axiom => "axiom",
        }
    }
}

impl fmt::Display for RuleTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Rule instantiation payload. Axiom-style rules carry their full schema
/// data; premise-driven rules carry only what the premises cannot determine.
#[derive(Clone, Debug, PartialEq)]
pub enum RulePayload {
    /// `phi |- [ctx] phi`
    Identity { formula: Formula, context: Vec<Var> },
    /// From `phi |- [xs] psi` conclude `phi[map] |- [context] psi[map]`;
    /// `context` must include every variable of the image terms.
    Substitution { map: Vec<(Var, Term)>, context: Vec<Var> },
    /// From `phi |- psi` and `psi |- theta` conclude `phi |- theta`.
    Cut,
    /// `And[] |- [v] v = v`
    EqRefl { var: Var },
    /// `And[x0=y0, .., phi] |- [context] phi[ys/xs]`
    EqSubst { xs: Vec<Var>, ys: Vec<Var>, formula: Formula, context: Vec<Var> },
    /// `And[items] |- [context] items[index]`
    ConjProj { items: Vec<Formula>, index: usize, context: Vec<Var> },
    /// From `{phi |- psi_i}` conclude `phi |- And[psi..]`; the payload is
    /// required exactly when there are no premises.
    ConjIntro { antecedent: Option<Formula>, context: Option<Vec<Var>> },
    /// `items[index] |- [context] Or[items]`
    DisjInj { items: Vec<Formula>, index: usize, context: Vec<Var> },
    /// From `{phi_i |- theta}` conclude `Or[phi..] |- theta`; the payload is
    /// required exactly when there are no premises.
    DisjElim { consequent: Option<Formula>, context: Option<Vec<Var>> },
    /// From `phi |- [xs ++ bound] psi` conclude `Ex[bound](phi) |- [xs] psi`.
    ExistsIntro { bound: Vec<Var> },
    /// From `Ex[ys](phi) |- [xs] psi` conclude `phi |- [xs ++ ys] psi`.
    ExistsElim,
    /// `And[left, Or[items]] |- [context] Or[And[left, item].. ]`
    SmallDistrib { left: Formula, items: Vec<Formula>, context: Vec<Var> },
    /// `And[left, Ex[bound](body)] |- [context] Ex[bound](And[left, body])`
    Frobenius { left: Formula, bound: Vec<Var>, body: Formula, context: Vec<Var> },
    /// Tree rule instance; `premise_paths` aligns the node's premise list
    /// with tree nodes.
    RuleT { tree: TreeInstance, premise_paths: Vec<Vec<usize>> },
    /// Cites a theory axiom up to alpha-equivalence.
    Axiom { name: String },
}

impl RulePayload {
    pub fn tag(&self) -> RuleTag {
        match self {
            RulePayload::Identity { .. } => RuleTag::Identity,
            RulePayload::Substitution { .. } => RuleTag::Substitution,
            RulePayload::Cut => RuleTag::Cut,
            RulePayload::EqRefl { .. } => RuleTag::EqRefl,
            RulePayload::EqSubst { .. } => RuleTag::EqSubst,
            RulePayload::ConjProj { .. } => RuleTag::ConjProj,
            RulePayload::ConjIntro { .. } => RuleTag::ConjIntro,
            RulePayload::DisjInj { .. } => RuleTag::DisjInj,
            RulePayload::DisjElim { .. } => RuleTag::DisjElim,
            RulePayload::ExistsIntro { .. } => RuleTag::ExistsIntro,
            RulePayload::ExistsElim => RuleTag::ExistsElim,
            RulePayload::SmallDistrib { .. } => RuleTag::SmallDistrib,
            RulePayload::Frobenius { .. } => RuleTag::Frobenius,
            RulePayload::RuleT { .. } => RuleTag::RuleT,
            RulePayload::Axiom { .. } => RuleTag::Axiom,
        }
    }
}

/// A rule application: payload plus premise references into the proof DAG.
#[derive(Clone, Debug, PartialEq)]
pub struct RuleApp {
    pub payload: RulePayload,
    pub premises: Vec<usize>,
}

/// A proof node: the claimed sequent and the rule application producing it.
#[derive(Clone, Debug, PartialEq)]
pub struct ProofNode {
    pub sequent: Sequent,
    pub rule: RuleApp,
}

/// A proof DAG in topological order (premises precede their uses).
#[derive(Clone, Debug, PartialEq)]
pub struct Proof {
    pub theory_name: String,
    pub nodes: Vec<ProofNode>,
    pub root: usize,
}

impl Proof {
    pub fn conclusion(&self) -> &Sequent {
        &self.nodes[self.root].sequent
    }

    pub fn rule_tags(&self) -> std::collections::BTreeSet<&'static str> {
        self.nodes.iter().map(|n| n.rule.payload.tag().name()).collect()
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RuleError {
    #[error("premise shape mismatch: {0}")]
    SchemaMismatch(String),
    #[error("side condition violated ({condition}{})", .variable.as_ref().map(|v| format!(", variable `{v}`")).unwrap_or_default())]
    SideConditionViolated { condition: String, variable: Option<String> },
    #[error("context error: {0}")]
    ContextError(String),
    #[error("missing premise for tree node {0:?}")]
    MissingPremise(Vec<usize>),
    #[error("invalid bar: {0}")]
    BarNotValid(String),
    #[error("free-variable condition violated at tree node {node:?}: {detail}")]
    FVConditionViolated { node: Vec<usize>, detail: String },
    #[error("axiom `{0}` is not part of the theory")]
    UnknownAxiom(String),
    #[error("the tree rule is disabled in this checker configuration")]
    RuleTDisabled,
    #[error("tree instance declares a limit level, but finite heights have none")]
    LimitLevelDeclared,
    #[error("malformed payload: {0}")]
    Malformed(String),
    #[error("bounds exceeded: {0}")]
    BoundsExceeded(String),
}

/// Premise sequents for a tree-rule instance, keyed by node path.
pub type TreePremises = BTreeMap<Vec<usize>, Sequent>;
