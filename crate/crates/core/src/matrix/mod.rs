//! The matrix decision procedure for KBs with at most two geometric diamonds.

mod cache;
mod chain;
mod engine;
mod geom;
mod witness;

pub use cache::EntrySatCache;
pub use chain::{level_entries, level_index, LevelInfo};
pub use engine::{Certificate, Config, Engine, PeriodBounds, Verdict};
pub use geom::{geom_pmf, geom_tail, GeomDistribution};
pub use witness::PartialMatrix;

use crate::kb::KnowledgeBase;
use crate::ltl::LtlError;
use crate::reduction::ReductionError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error(transparent)]
    Ltl(#[from] LtlError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error("period bounds are undefined for a KB without diamonds")]
    NoDiamonds,
    #[error("{0} diamond atoms; at most 2 are supported")]
    TooManyDiamonds(usize),
    #[error("KB unsatisfiable")]
    Unsatisfiable,
    #[error("no way to place the mass of level {0}")]
    WitnessStuck(u32),
}

pub fn entry_sat(kb: &KnowledgeBase, ks: &[u32]) -> Result<bool, EngineError> {
    Engine::new(kb, Config::default())?.entry_sat(ks)
}

pub fn chained_pairs(kb: &KnowledgeBase, l: u32) -> Result<Vec<(u32, u32)>, EngineError> {
    Engine::new(kb, Config::default())?.chained_pairs(l)
}

pub fn period_bounds(kb: &KnowledgeBase) -> Result<PeriodBounds, EngineError> {
    Engine::new(kb, Config::default())?.period_bounds()
}

pub fn decide(kb: &KnowledgeBase) -> Result<Verdict, EngineError> {
    Engine::new(kb, Config::default())?.decide()
}

pub fn build_witness(kb: &KnowledgeBase, l: u32) -> Result<PartialMatrix, EngineError> {
    Engine::new(kb, Config::default())?.build_witness(l)
}

pub fn verify_partial(kb: &KnowledgeBase, m: &PartialMatrix) -> Result<bool, EngineError> {
    Engine::new(kb, Config::default())?.verify_partial(m)
}

#[cfg(test)]
mod tests;
