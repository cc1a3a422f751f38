//! Brute-force validators: bounded lasso search for LTL and a truncated
//! linear relaxation of the matrix conditions.

mod bmc;
mod enumerate;
mod feasibility;
mod simplex;

pub use bmc::{bmc_any, bmc_lasso, bounded_search};
pub use enumerate::{candidate_count, enumerate_ltl_sat, CANDIDATE_GUARD};
pub use feasibility::{truncated_feasibility, FeasibilityReport};
pub use simplex::feasible_point;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

const COMPONENT_STATE_CAP: usize = 1 << 10;
const RETRY_STATE_CAP: usize = 1 << 15;
const CORE_PROBE_LEN: usize = 24;

use crate::ltl::{build_buchi_with_cap, lasso_check, ltl_sat, Atom, Ltl, LtlError};
use crate::matrix::{Engine, EngineError};
use crate::reduction::{entry_formula, translate};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("enumeration guard exceeded: {atoms} atoms, prefix {prefix}, loop {cycle}")]
    Guard { atoms: usize, prefix: usize, cycle: usize },
    #[error(transparent)]
    Ltl(#[from] LtlError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Lasso bounds that are complete for `f`: an accepting lasso of its
/// automaton has a prefix of at most `n` states and a loop visiting every
/// acceptance set, at most `n` states per set. Clamped to `cap`; the flag is
/// set when clamping happened.
pub fn automaton_bounds(f: &Ltl, state_cap: usize, cap: usize) -> (usize, usize, bool) {
    match build_buchi_with_cap(f, state_cap) {
        Ok(a) => {
            let n = a.state_count() + 1;
            let l = n * a.acceptance_sets().max(1);
            (n.min(cap), l.min(cap), n > cap || l > cap)
        }
        Err(_) => (cap, cap, true),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Agreement {
    pub label: String,
    pub solver: bool,
    pub oracle: Option<bool>,
    /// Bounds were clamped, so a missing witness is inconclusive.
    pub clamped: bool,
    pub witness_checked: bool,
}

impl Agreement {
    pub fn agrees(&self) -> bool {
        self.oracle.is_none_or(|o| o == self.solver) && (!self.solver || self.witness_checked)
    }
}

/// Splits a conjunction into groups of conjuncts that share no atoms. Each
/// group is satisfiable on its own iff the whole formula is.
pub fn components(f: &Ltl) -> Vec<Ltl> {
    let parts: Vec<Ltl> = match f {
        Ltl::And(v) => v.clone(),
        g => vec![g.clone()],
    };
    let atoms: Vec<BTreeSet<Atom>> = parts.iter().map(Ltl::atoms).collect();
    let mut group: Vec<usize> = (0..parts.len()).collect();
    fn find(g: &mut [usize], i: usize) -> usize {
        if g[i] != i {
            let r = find(g, g[i]);
            g[i] = r;
        }
        g[i]
    }
    let mut owner: HashMap<Atom, usize> = HashMap::new();
    for (i, set) in atoms.iter().enumerate() {
        for a in set {
            if let Some(&j) = owner.get(a) {
                let (ri, rj) = (find(&mut group, i), find(&mut group, j));
                group[ri] = rj;
            } else {
                owner.insert(*a, i);
            }
        }
    }
    let mut out: BTreeMap<usize, Vec<Ltl>> = BTreeMap::new();
    for (i, p) in parts.into_iter().enumerate() {
        let r = find(&mut group, i);
        out.entry(r).or_default().push(p);
    }
    out.into_values().map(|v| if v.len() == 1 { v.into_iter().next().unwrap() } else { Ltl::And(v) }).collect()
}

/// Shrinks `f` to a subset of its conjuncts without a short witness, then
/// checks that subset with complete bounds. An unsatisfiable subset makes
/// `f` unsatisfiable.
fn confirm_unsat_core(f: &Ltl, cap: usize) -> bool {
    let Ltl::And(parts) = f else { return false };
    let probe = cap.min(CORE_PROBE_LEN);
    let mut core = parts.clone();
    let mut i = 0;
    while i < core.len() {
        let mut rest = core.clone();
        rest.remove(i);
        if !rest.is_empty() && bmc_any(&Ltl::And(rest.clone()), probe).is_none() {
            core = rest;
        } else {
            i += 1;
        }
    }
    let core = Ltl::And(core);
    let (p, l, clamped) = automaton_bounds(&core, RETRY_STATE_CAP, cap);
    !clamped && bounded_search(&core, p, l).is_none()
}

/// Runs `ltl_sat` and the bounded search on `f` and compares them. The search
/// runs per component with bounds from each component's automaton.
pub fn compare_ltl(label: &str, f: &Ltl, cap: usize) -> Result<Agreement, OracleError> {
    let verdict = ltl_sat(f)?;
    let witness_checked = match verdict.witness() {
        Some(w) => lasso_check(w, f)?,
        None => false,
    };
    let mut oracle = Some(true);
    let mut clamped = false;
    for c in components(f) {
        let (p, l, mut cl) = automaton_bounds(&c, COMPONENT_STATE_CAP, cap);
        let mut found = bounded_search(&c, p, l);
        if found.is_none() && cl {
            let (p, l, again) = automaton_bounds(&c, RETRY_STATE_CAP, cap);
            if !again {
                cl = false;
                found = bounded_search(&c, p, l);
            }
        }
        if found.is_none() && cl && confirm_unsat_core(&c, cap) {
            cl = false;
        }
        clamped |= cl;
        match found {
            Some(w) => assert!(lasso_check(&w, &c)?, "bounded search returned a non-model"),
            None if !cl => {
                oracle = Some(false);
                break;
            }
            None => oracle = None,
        }
    }
    Ok(Agreement { label: label.to_string(), solver: verdict.is_sat(), oracle, clamped, witness_checked })
}

#[derive(Clone, Debug)]
pub struct OracleReport {
    pub formulas: Vec<Agreement>,
    pub feasibility: Option<(bool, FeasibilityReport)>,
}

impl OracleReport {
    pub fn agrees(&self) -> bool {
        self.formulas.iter().all(Agreement::agrees)
            && self.feasibility.as_ref().is_none_or(|(sat, f)| !sat || f.feasible())
    }
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |b: bool| if b { "SAT" } else { "UNSAT" };
        for a in &self.formulas {
            let oracle = match a.oracle {
                Some(o) => show(o).to_string(),
                None => "no witness (bounds clamped)".to_string(),
            };
            let mark = if a.agrees() { "agree" } else { "DISAGREE" };
            writeln!(f, "{}: ltl_sat {} / bounded search {oracle}: {mark}", a.label, show(a.solver))?;
        }
        if let Some((sat, r)) = &self.feasibility {
            let verdict = if r.feasible() { "feasible" } else { "infeasible" };
            writeln!(f, "truncated feasibility at T={}: {verdict} (decide: {})", r.truncation, show(*sat))?;
        }
        writeln!(f, "overall: {}", if self.agrees() { "agreement" } else { "DISAGREEMENT" })
    }
}

/// Cross-checks the engine on its KB: the translation (no diamonds) or the
/// entry formulas up to `entries`, plus the truncated relaxation for two
/// diamonds.
pub fn oracle_report(engine: &Engine, entries: u32, cap: usize) -> Result<OracleReport, OracleError> {
    let kb = engine.kb();
    let mut formulas = Vec::new();
    match engine.diamonds() {
        0 => formulas.push(compare_ltl("translation", &translate(kb).map_err(EngineError::from)?, cap)?),
        1 => {
            for k in 0..=entries {
                let f = entry_formula(kb, &[k]).map_err(EngineError::from)?;
                formulas.push(compare_ltl(&format!("entry ({k})"), &f, cap)?);
            }
        }
        _ => {
            for k1 in 0..=entries {
                for k2 in 0..=entries {
                    let f = entry_formula(kb, &[k1, k2]).map_err(EngineError::from)?;
                    formulas.push(compare_ltl(&format!("entry ({k1},{k2})"), &f, cap)?);
                }
            }
        }
    }
    let feasibility = if engine.diamonds() == 2 {
        let v = engine.decide()?;
        let t = v.bound.unwrap_or(0).min(8);
        Some((v.sat, truncated_feasibility(engine, t)?))
    } else {
        None
    };
    Ok(OracleReport { formulas, feasibility })
}

#[cfg(test)]
mod tests;
