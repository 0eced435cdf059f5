//! A desk-scale workbench for geometric sequent calculi with indexed
//! connectives: proof checking (including the tree rule over bars), Set and
//! Beth-forcing semantics with bounded countermodel search, canonical-form
//! normalization, and syntactic sites with covering-family topologies.

pub mod semantics;
pub mod syntax;

pub use syntax::{Formula, Sequent, Signature, Term, Theory, Var};
