//! Translation of diamond-free temporal KBs into grounded propositional LTL, and
//! the ABox rewritings used by the matrix procedure.

mod dagger;
mod fo1;
mod surgery;

pub use dagger::{abox_slices, kb_dagger, role_closure, AboxSlices, Pair, RoleClosure, FRESH_CONSTANT};
pub use fo1::{concept_star, exists_pred, ground, role_prop, role_witness, Fo1, Fo1Conjunct, Fo1Sentence, Term};
pub use surgery::{instantiate_abox, kb_down, single_diamond_abox, tautology_names};

use crate::kb::{normalize_kb, AboxAtom, KnowledgeBase, Predicate};
use crate::ltl::{Atom, Ltl};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReductionError {
    #[error("the translation applies to diamond-free knowledge bases only")]
    DiamondPresent,
    #[error("the knowledge base has no diamond atoms")]
    NoDiamonds,
    #[error("expected {expected} diamond coordinates, got {found}")]
    Arity { expected: usize, found: usize },
    #[error("the single-diamond rewriting needs p = 1/2")]
    NotHalf,
    #[error("axis must be 1 or 2, got {0}")]
    Axis(usize),
}

/// Grounded LTL translation of a diamond-free KB.
pub fn translate(kb: &KnowledgeBase) -> Result<Ltl, ReductionError> {
    let s = kb_dagger(&normalize_kb(kb))?;
    Ok(ground(&s, &s.constants))
}

/// Translation of the KB whose diamonds are fixed at delays `ks`.
pub fn entry_formula(kb: &KnowledgeBase, ks: &[u32]) -> Result<Ltl, ReductionError> {
    translate(&instantiate_abox(kb, ks)?)
}

/// Translation of the KB with its diamonds erased.
pub fn down_formula(kb: &KnowledgeBase) -> Result<Ltl, ReductionError> {
    translate(&kb_down(kb))
}

/// Grounded atom read by a concept assertion; role assertions have none.
pub fn theta_atom(a: &AboxAtom) -> Option<Atom> {
    match &a.predicate {
        Predicate::Concept(c) => Some(Atom::new(&format!("{c}@{}", a.args[0]))),
        Predicate::Role(_) => None,
    }
}
