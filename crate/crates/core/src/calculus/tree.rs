//! Finite instances of the tree rule: a branching tree of node formulas with
//! a bar, premises entailing the join of each node's immediate successors,
//! and a conclusion joining the existentially closed chain conjunctions over
//! the bar's minimal elements.

use super::{RuleError, TreePremises};
use crate::syntax::{alpha_eq, Formula, Sequent, Theory, Var};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashSet};

/// A tree-rule instance. Node paths are sequences over `0..branching`; the
/// root is the empty path. Fresh tuples default to empty when absent.
/// `limit_levels` is part of the schema for the transfinite reading but must
/// be empty: no finite level is a limit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TreeInstance {
    pub branching: usize,
    pub height: usize,
    pub formulas: BTreeMap<Vec<usize>, Formula>,
    #[serde(default)]
    pub fresh: BTreeMap<Vec<usize>, Vec<Var>>,
    pub bar: BTreeSet<Vec<usize>>,
    #[serde(default)]
    pub limit_levels: Vec<usize>,
}

impl TreeInstance {
    pub fn fresh_tuple(&self, path: &[usize]) -> Vec<Var> {
        self.fresh.get(path).cloned().unwrap_or_default()
    }

    /// The prefix closure of the bar: every node on a root-to-bar chain.
    pub fn closure(&self) -> BTreeSet<Vec<usize>> {
        let mut out = BTreeSet::new();
        for b in &self.bar {
            for k in 0..=b.len() {
                out.insert(b[..k].to_vec());
            }
        }
        out
    }

    /// Nodes strictly below the bar: in the closure, with no prefix
    /// (including the node itself) in the bar. These are exactly the nodes
    /// whose premises the rule consumes.
    pub fn interior(&self) -> Vec<Vec<usize>> {
        self.closure()
            .into_iter()
            .filter(|f| !(0..=f.len()).any(|k| self.bar.contains(&f[..k].to_vec())))
            .collect()
    }
}

/// Checks that `bar` is the minimal-element set of a bar over the full tree
/// of the given branching and height: an antichain under the prefix order
/// such that every maximal path meets it. Walks the tree with early exit.
pub fn validate_bar(bar: &BTreeSet<Vec<usize>>, branching: usize, height: usize) -> Result<(), RuleError> {
    for b in bar {
        if b.len() > height {
            return Err(RuleError::BarNotValid(format!(
                "bar element {b:?} lies below depth {height}"
            )));
        }
        if b.iter().any(|&i| i >= branching) {
            return Err(RuleError::BarNotValid(format!(
                "bar element {b:?} is outside the {branching}-branching tree"
            )));
        }
    }
    for a in bar {
        for b in bar {
            if a != b && b.starts_with(a) {
                return Err(RuleError::BarNotValid(format!(
                    "not an antichain: {a:?} is a prefix of {b:?}"
                )));
            }
        }
    }
    fn covered(bar: &BTreeSet<Vec<usize>>, path: &mut Vec<usize>, branching: usize, height: usize) -> Option<Vec<usize>> {
        if bar.contains(path) {
            return None;
        }
        if path.len() == height {
            return Some(path.clone());
        }
        for i in 0..branching {
            path.push(i);
            let missed = covered(bar, path, branching, height);
            path.pop();
            if missed.is_some() {
                return missed;
            }
        }
        None
    }
    if let Some(missed) = covered(bar, &mut Vec::new(), branching, height) {
        return Err(RuleError::BarNotValid(format!(
            "branch through {missed:?} never meets the bar"
        )));
    }
    Ok(())
}

/// Context of a node formula: its free variables in first-occurrence order.
pub fn canonical_context(f: &Formula) -> Vec<Var> {
    f.free_vars()
}

/// The premise a tree node must supply: the node formula entails the join of
/// the existentially closed successor formulas, over the node's canonical
/// context.
pub fn required_premise(tree: &TreeInstance, node: &[usize]) -> Result<Sequent, RuleError> {
    let phi = tree
        .formulas
        .get(node)
        .ok_or_else(|| RuleError::Malformed(format!("no formula for tree node {node:?}")))?;
    let mut disjuncts = Vec::with_capacity(tree.branching);
    for i in 0..tree.branching {
        let mut child = node.to_vec();
        child.push(i);
        let cf = tree
            .formulas
            .get(&child)
            .ok_or_else(|| RuleError::Malformed(format!("no formula for tree node {child:?}")))?;
        disjuncts.push(Formula::exists(tree.fresh_tuple(&child), cf.clone()));
    }
    Ok(Sequent::new(phi.clone(), canonical_context(phi), Formula::or(disjuncts)))
}

/// Applies a tree-rule instance: validates the bar, the free-variable side
/// conditions along the closure, and the supplied premises for every node
/// strictly below the bar; returns the root-entails-bar-join conclusion with
/// disjuncts in lexicographic bar order.
#[allow(non_snake_case)]
pub fn apply_rule_T(
    theory: &Theory,
    tree: &TreeInstance,
    premises: &TreePremises,
) -> Result<Sequent, RuleError> {
    let sig = &theory.signature;
    if !tree.limit_levels.is_empty() {
        return Err(RuleError::LimitLevelDeclared);
    }
    if tree.branching == 0 || tree.height == 0 {
        return Err(RuleError::Malformed("branching and height must be positive".into()));
    }
    validate_bar(&tree.bar, tree.branching, tree.height)?;

    let closure = tree.closure();
    for node in &closure {
        let phi = tree
            .formulas
            .get(node)
            .ok_or_else(|| RuleError::Malformed(format!("no formula for tree node {node:?}")))?;
        phi.check(sig).map_err(|e| RuleError::Malformed(e.to_string()))?;
    }

    // free-variable side conditions on every non-root node of the closure:
    // FV(child) = FV(parent) + fresh tuple, disjointly
    for node in &closure {
        if node.is_empty() {
            continue;
        }
        let parent = &node[..node.len() - 1];
        let phi_parent = &tree.formulas[&parent.to_vec()];
        let phi_node = &tree.formulas[node];
        let fresh = tree.fresh_tuple(node);
        let mut names = HashSet::new();
        for v in &fresh {
            if !names.insert(v.name.clone()) {
                return Err(RuleError::FVConditionViolated {
                    node: node.clone(),
                    detail: format!("fresh tuple repeats `{}`", v.name),
                });
            }
        }
        let parent_fv: HashSet<Var> = phi_parent.free_var_set();
        for v in &fresh {
            if parent_fv.contains(v) {
                return Err(RuleError::FVConditionViolated {
                    node: node.clone(),
                    detail: format!("fresh variable `{}` is already free in the parent formula", v.name),
                });
            }
        }
        let mut expected: HashSet<Var> = parent_fv;
        expected.extend(fresh.iter().cloned());
        let got: HashSet<Var> = phi_node.free_var_set();
        if got != expected {
            return Err(RuleError::FVConditionViolated {
                node: node.clone(),
                detail: "free variables differ from the parent's plus the fresh tuple".into(),
            });
        }
    }

    // premise for every node strictly below the bar
    for node in tree.interior() {
        let want = required_premise(tree, &node)?;
        let got = premises
            .get(&node)
            .ok_or_else(|| RuleError::MissingPremise(node.clone()))?;
        if got.context != want.context
            || !alpha_eq(&got.antecedent, &want.antecedent)
            || !alpha_eq(&got.consequent, &want.consequent)
        {
            return Err(RuleError::SchemaMismatch(format!(
                "premise for tree node {node:?} must be alpha-equal to `{want}`"
            )));
        }
    }

    // conclusion: join over the bar of the existentially closed chain
    // conjunctions, in lexicographic order
    let root = tree
        .formulas
        .get(&vec![])
        .ok_or_else(|| RuleError::Malformed("no formula for the root".into()))?;
    let mut disjuncts = Vec::with_capacity(tree.bar.len());
    for b in &tree.bar {
        let mut vars: Vec<Var> = Vec::new();
        let mut chain = Vec::with_capacity(b.len());
        for k in 1..=b.len() {
            let prefix = b[..k].to_vec();
            for v in tree.fresh_tuple(&prefix) {
                if vars.contains(&v) {
                    return Err(RuleError::FVConditionViolated {
                        node: b.clone(),
                        detail: format!("fresh tuples along the chain repeat `{}`", v.name),
                    });
                }
                vars.push(v);
            }
            chain.push(tree.formulas[&prefix].clone());
        }
        disjuncts.push(Formula::exists(vars, Formula::and(chain)));
    }
    Ok(Sequent::new(root.clone(), canonical_context(root), Formula::or(disjuncts)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula_with_context, parse_sequent, parse_theory};

    fn theory() -> Theory {
        parse_theory("theory t\nsort S\nrel P(S)\nrel Q2(S, S)").unwrap()
    }

    #[test]
    fn single_level_instance() {
        // branching 1, height 1, fresh (y), bar {<0>}
        let t = theory();
        let x = Var::new("x", "S");
        let phi0 = parse_formula_with_context(&t.signature, "P(x)", &[x.clone()]).unwrap();
        let phi1 = parse_formula_with_context(
            &t.signature,
            "And[P(x), Q2(x, y)]",
            &[x.clone(), Var::new("y", "S")],
        )
        .unwrap();
        let tree = TreeInstance {
            branching: 1,
            height: 1,
            formulas: [(vec![], phi0), (vec![0], phi1)].into_iter().collect(),
            fresh: [(vec![0], vec![Var::new("y", "S")])].into_iter().collect(),
            bar: [vec![0]].into_iter().collect(),
            limit_levels: vec![],
        };
        let premise = parse_sequent(&t.signature, "P(x) |- [x] Or[Ex y:S. (And[P(x), Q2(x, y)])]").unwrap();
        let mut premises = TreePremises::new();
        premises.insert(vec![], premise);
        let got = apply_rule_T(&t, &tree, &premises).unwrap();
        let expect = parse_sequent(
            &t.signature,
            "P(x) |- [x] Or[Ex y:S. (And[And[P(x), Q2(x, y)]])]",
        )
        .unwrap();
        assert_eq!(got, expect);
    }

    #[test]
    fn bar_must_cover_every_branch() {
        let t = theory();
        let x = Var::new("x", "S");
        let p = parse_formula_with_context(&t.signature, "P(x)", &[x]).unwrap();
        let tree = TreeInstance {
            branching: 2,
            height: 1,
            formulas: [(vec![], p.clone()), (vec![0], p.clone()), (vec![1], p)].into_iter().collect(),
            fresh: Default::default(),
            bar: [vec![0]].into_iter().collect(),
            limit_levels: vec![],
        };
        let e = apply_rule_T(&t, &tree, &TreePremises::new()).unwrap_err();
        assert!(matches!(e, RuleError::BarNotValid(_)), "{e:?}");
    }

    #[test]
    fn fresh_tuple_must_be_fresh() {
        let t = theory();
        let x = Var::new("x", "S");
        let p = parse_formula_with_context(&t.signature, "P(x)", &[x.clone()]).unwrap();
        let tree = TreeInstance {
            branching: 1,
            height: 1,
            formulas: [(vec![], p.clone()), (vec![0], p)].into_iter().collect(),
            fresh: [(vec![0], vec![x])].into_iter().collect(),
            bar: [vec![0]].into_iter().collect(),
            limit_levels: vec![],
        };
        let e = apply_rule_T(&t, &tree, &TreePremises::new()).unwrap_err();
        assert!(matches!(e, RuleError::FVConditionViolated { .. }), "{e:?}");
    }

    #[test]
    fn missing_premise_is_reported() {
        let t = theory();
        let x = Var::new("x", "S");
        let p = parse_formula_with_context(&t.signature, "P(x)", &[x]).unwrap();
        let tree = TreeInstance {
            branching: 1,
            height: 1,
            formulas: [(vec![], p.clone()), (vec![0], p)].into_iter().collect(),
            fresh: Default::default(),
            bar: [vec![0]].into_iter().collect(),
            limit_levels: vec![],
        };
        let e = apply_rule_T(&t, &tree, &TreePremises::new()).unwrap_err();
        assert_eq!(e, RuleError::MissingPremise(vec![]));
    }

    #[test]
    fn limit_levels_rejected() {
        let t = theory();
        let x = Var::new("x", "S");
        let p = parse_formula_with_context(&t.signature, "P(x)", &[x]).unwrap();
        let tree = TreeInstance {
            branching: 1,
            height: 1,
            formulas: [(vec![], p.clone()), (vec![0], p)].into_iter().collect(),
            fresh: Default::default(),
            bar: [vec![0]].into_iter().collect(),
            limit_levels: vec![1],
        };
        assert_eq!(apply_rule_T(&t, &tree, &TreePremises::new()).unwrap_err(), RuleError::LimitLevelDeclared);
    }

    #[test]
    fn validate_bar_agrees_with_brute_force() {
        // exhaustive over all subsets for small trees
        for (branching, height) in [(1usize, 1usize), (2, 1), (2, 2), (3, 1), (1, 3)] {
            let mut nodes = vec![];
            fn gen(branching: usize, height: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
                out.push(path.clone());
                if path.len() == height {
                    return;
                }
                for i in 0..branching {
                    path.push(i);
                    gen(branching, height, path, out);
                    path.pop();
                }
            }
            gen(branching, height, &mut Vec::new(), &mut nodes);
            let leaves: Vec<Vec<usize>> = nodes.iter().filter(|n| n.len() == height).cloned().collect();
            for mask in 0u64..(1 << nodes.len()) {
                let bar: BTreeSet<Vec<usize>> = nodes
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, n)| n.clone())
                    .collect();
                let antichain = bar
                    .iter()
                    .all(|a| bar.iter().all(|b| a == b || !b.starts_with(a)));
                let covers = leaves
                    .iter()
                    .all(|l| (0..=l.len()).any(|k| bar.contains(&l[..k].to_vec())));
                let brute = antichain && covers;
                assert_eq!(
                    validate_bar(&bar, branching, height).is_ok(),
                    brute,
                    "mismatch at branching={branching} height={height} bar={bar:?}"
                );
            }
        }
    }

    #[test]
    fn interior_of_staircase_bar() {
        let tree = TreeInstance {
            branching: 2,
            height: 2,
            formulas: Default::default(),
            fresh: Default::default(),
            bar: [vec![0], vec![1, 0], vec![1, 1]].into_iter().collect(),
            limit_levels: vec![],
        };
        assert_eq!(tree.interior(), vec![vec![], vec![1]]);
    }
}
