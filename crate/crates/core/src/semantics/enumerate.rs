//! Bounded model enumeration: all structures with carriers up to a size
//! bound satisfying a theory, in a fixed deterministic order, with no
//! isomorphism quotient.

use super::{tuples, valid, FiniteStructure};
use crate::syntax::{Sequent, Theory};
use std::collections::BTreeMap;

/// Streams every structure of the theory's signature with carrier sizes in
/// `0..=max_size` that satisfies all axioms. Order: carrier sizes in
/// odometer order over the declared sort list, then function tables as
/// mixed-radix counters (declaration order, later functions fastest), then
/// relation subsets as bitmasks over the tuple list (declaration order,
/// later relations fastest).
pub fn enumerate_models(theory: &Theory, max_size: usize) -> ModelIter {
    ModelIter::new(theory.clone(), max_size)
}

/// The first enumerated model of the theory violating the sequent, if any.
/// `None` is "none found" within the bound, not a validity proof.
pub fn countermodel(theory: &Theory, s: &Sequent, max_size: usize) -> Option<FiniteStructure> {
    let sig = &theory.signature;
    enumerate_models(theory, max_size).find(|m| !valid(sig, m, s).unwrap_or(false))
}

pub struct ModelIter {
    theory: Theory,
    sizes: super::Tuples,
    state: Option<SizeState>,
}

struct SizeState {
    structure: FiniteStructure,
    /// per-function counters: (table, result carrier size)
    funcs: Vec<(Vec<usize>, usize)>,
    /// per-relation: (all tuples of the arity product, current bitmask)
    rels: Vec<(Vec<Vec<usize>>, u64)>,
    exhausted: bool,
}

impl ModelIter {
    fn new(theory: Theory, max_size: usize) -> Self {
        let n = theory.signature.sorts.len();
        ModelIter {
            theory,
            sizes: tuples(&vec![max_size + 1; n]),
            state: None,
        }
    }

    /// Sets up the odometer for one carrier-size combination; returns None
    /// when a function has no possible table (empty result carrier with a
    /// nonempty domain).
    fn init_sizes(&self, sizes: &[usize]) -> Option<SizeState> {
        let sig = &self.theory.signature;
        let size_map: BTreeMap<String, usize> =
            sig.sorts.iter().cloned().zip(sizes.iter().copied()).collect();
        let mut structure = FiniteStructure::new(sig, &size_map);
        let mut funcs = Vec::new();
        for f in &sig.functions {
            let len = structure.table_len(&f.args);
            let result = structure.carrier(&f.result);
            if len > 0 && result == 0 {
                return None;
            }
            structure.functions.insert(f.name.clone(), vec![0; len]);
            funcs.push((vec![0; len], result));
        }
        let mut rels = Vec::new();
        for r in &sig.relations {
            let carrier_sizes: Vec<usize> = r.args.iter().map(|s| structure.carrier(s)).collect();
            let all: Vec<Vec<usize>> = tuples(&carrier_sizes).collect();
            assert!(all.len() <= 63, "relation `{}` product too large to enumerate", r.name);
            structure.relations.insert(r.name.clone(), Default::default());
            rels.push((all, 0u64));
        }
        Some(SizeState { structure, funcs, rels, exhausted: false })
    }
}

impl SizeState {
    fn materialize(&self, sig: &crate::syntax::Signature) -> FiniteStructure {
        let mut m = self.structure.clone();
        for (f, (table, _)) in sig.functions.iter().zip(&self.funcs) {
            m.functions.insert(f.name.clone(), table.clone());
        }
        for (r, (all, mask)) in sig.relations.iter().zip(&self.rels) {
            let set = all
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, t)| t.clone())
                .collect();
            m.relations.insert(r.name.clone(), set);
        }
        m
    }

    /// Advances the (functions, relations) odometer; relations vary fastest.
    fn advance(&mut self) {
        for (all, mask) in self.rels.iter_mut().rev() {
            *mask += 1;
            if *mask < (1u64 << all.len()) {
                return;
            }
            *mask = 0;
        }
        for (table, result) in self.funcs.iter_mut().rev() {
            for cell in table.iter_mut().rev() {
                *cell += 1;
                if *cell < *result {
                    return;
                }
                *cell = 0;
            }
        }
        self.exhausted = true;
    }
}

impl Iterator for ModelIter {
    type Item = FiniteStructure;

    fn next(&mut self) -> Option<FiniteStructure> {
        let sig = self.theory.signature.clone();
        loop {
            if self.state.is_none() {
                loop {
                    let sizes = self.sizes.next()?;
                    if let Some(st) = self.init_sizes(&sizes) {
                        self.state = Some(st);
                        break;
                    }
                }
            }
            let st = self.state.as_mut().unwrap();
            if st.exhausted {
                self.state = None;
                continue;
            }
            let m = st.materialize(&sig);
            st.advance();
            let ok = self
                .theory
                .axioms
                .iter()
                .all(|ax| valid(&sig, &m, &ax.sequent).unwrap_or(false));
            if ok {
                return Some(m);
            }
        }
    }
}
