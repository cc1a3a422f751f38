use std::fmt;
use std::sync::{Arc, Mutex};

use num_rational::BigRational;
use num_traits::One;

use crate::kb::{GeomParam, KnowledgeBase};
use crate::ltl::{build_buchi_with_cap, ltl_sat, LassoWord, DEFAULT_STATE_CAP};
use crate::par;
use crate::reduction::{down_formula, entry_formula, single_diamond_abox, theta_atom, translate};

use super::cache::EntrySatCache;
use super::chain::{self, level_entries, LevelInfo};
use super::witness::PartialMatrix;
use super::EngineError;

const BATCH: u32 = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    pub parallel: bool,
    /// Overrides the scan bound `s + q`.
    pub bound: Option<u32>,
    pub state_cap: usize,
    /// Size of the witness prefix attached to SAT verdicts.
    pub certificate_size: u32,
}

impl Default for Config {
    fn default() -> Config {
        Config { parallel: true, bound: None, state_cap: DEFAULT_STATE_CAP, certificate_size: 4 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PeriodBounds {
    pub s: u32,
    pub q: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// Diamond-free KB with a model of its translation.
    Model(LassoWord),
    /// Diamond-free KB whose translation has no model.
    Inconsistent,
    /// Every level up to the bound carries a chained pair (or, for one
    /// diamond, every entry is satisfiable); `prefix` is a witness matrix.
    Prefix(PartialMatrix),
    /// p = 1/2 and `level` is the only level without a chained pair; both
    /// single-diamond rewritings at that level are satisfiable.
    Degenerate { level: u32, prefix: PartialMatrix },
    UnsatEntry { entry: Vec<u32> },
    NoChainedPair { level: u32, unsat: Vec<(u32, u32)> },
    SubcheckFailed { level: u32, axis: usize, entry: Vec<u32> },
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs = |v: &[(u32, u32)]| v.iter().map(|(a, b)| format!("({a},{b})")).collect::<Vec<_>>().join(" ");
        let key = |v: &[u32]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        match self {
            Certificate::Model(w) => write!(f, "model with prefix {} and loop {}", w.prefix.len(), w.cycle.len()),
            Certificate::Inconsistent => write!(f, "translation unsatisfiable"),
            Certificate::Prefix(m) => write!(f, "witness prefix of size {}", m.size()),
            Certificate::Degenerate { level, prefix } => {
                write!(f, "level {level} has no chained pair; split at p = 1/2, witness prefix of size {}", prefix.size())
            }
            Certificate::UnsatEntry { entry } => {
                write!(f, "entry ({}) unsatisfiable at level {}", key(entry), entry.iter().max().unwrap_or(&0))
            }
            Certificate::NoChainedPair { level, unsat } => {
                write!(f, "level {level} has no chained pair; unsatisfiable entries {}", pairs(unsat))
            }
            Certificate::SubcheckFailed { level, axis, entry } => {
                write!(f, "level {level} has no chained pair; axis {axis} rewriting fails at entry ({})", key(entry))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub sat: bool,
    pub certificate: Certificate,
    /// Largest coordinate scanned; `None` for diamond-free KBs.
    pub bound: Option<u32>,
    /// `None` when the bound was given explicitly or the KB has no diamonds.
    pub period: Option<PeriodBounds>,
}

pub struct Engine {
    kb: KnowledgeBase,
    d: usize,
    config: Config,
    cache: Arc<EntrySatCache>,
    levels: Mutex<Vec<LevelInfo>>,
    period: Mutex<Option<PeriodBounds>>,
    verdict: Mutex<Option<Verdict>>,
}

impl Engine {
    pub fn new(kb: &KnowledgeBase, config: Config) -> Result<Engine, EngineError> {
        Engine::with_cache(kb, config, Arc::new(EntrySatCache::new()))
    }

    pub fn with_cache(kb: &KnowledgeBase, config: Config, cache: Arc<EntrySatCache>) -> Result<Engine, EngineError> {
        let d = kb.diamond_count();
        if d > 2 {
            return Err(EngineError::TooManyDiamonds(d));
        }
        Ok(Engine {
            kb: kb.clone(),
            d,
            config,
            cache,
            levels: Mutex::new(Vec::new()),
            period: Mutex::new(None),
            verdict: Mutex::new(None),
        })
    }

    pub fn kb(&self) -> &KnowledgeBase {
        &self.kb
    }

    pub fn config(&self) -> &Config {
        &self.config
    }

    pub fn diamonds(&self) -> usize {
        self.d
    }

    pub fn param(&self) -> Option<&GeomParam> {
        self.kb.param()
    }

    pub fn cache(&self) -> &Arc<EntrySatCache> {
        &self.cache
    }

    pub fn entry_sat(&self, ks: &[u32]) -> Result<bool, EngineError> {
        self.cache.get_or_compute(ks, || Ok(ltl_sat(&entry_formula(&self.kb, ks)?)?.is_sat()))
    }

    fn two_diamonds(&self) -> Result<(), EngineError> {
        match self.d {
            0 => Err(EngineError::NoDiamonds),
            2 => Ok(()),
            n => Err(crate::reduction::ReductionError::Arity { expected: n, found: 2 }.into()),
        }
    }

    /// Makes sure `L(0..=l)` are analysed, computing up to `horizon` in batches.
    fn ensure_levels(&self, l: u32, horizon: u32) -> Result<(), EngineError> {
        self.two_diamonds()?;
        let mut levels = self.levels.lock().unwrap();
        while levels.len() as u32 <= l {
            let start = levels.len() as u32;
            let end = horizon.max(l).min(start + BATCH - 1);
            let entries: Vec<(u32, u32)> = (start..=end).flat_map(level_entries).collect();
            let sats = par::map(&entries, self.config.parallel, |&(r, c)| self.entry_sat(&[r, c]));
            let mut sats = sats.into_iter().collect::<Result<Vec<bool>, _>>()?.into_iter();
            for k in start..=end {
                let top: Vec<bool> = sats.by_ref().take(2 * k as usize + 1).collect();
                let info = chain::analyse_level(&levels, k, top);
                levels.push(info);
            }
        }
        Ok(())
    }

    pub fn level(&self, l: u32) -> Result<LevelInfo, EngineError> {
        self.ensure_levels(l, l)?;
        Ok(self.levels.lock().unwrap()[l as usize].clone())
    }

    pub fn chained_pairs(&self, l: u32) -> Result<Vec<(u32, u32)>, EngineError> {
        self.ensure_levels(l, l)?;
        Ok(chain::chained_pairs(&self.levels.lock().unwrap(), l))
    }

    /// The chain that carries the mass of level `l` in the witness.
    pub fn select_chain(&self, l: u32) -> Result<Option<Vec<(u32, u32)>>, EngineError> {
        self.ensure_levels(l, l)?;
        Ok(chain::select_chain(&self.levels.lock().unwrap(), l))
    }

    pub fn period_bounds(&self) -> Result<PeriodBounds, EngineError> {
        if self.d == 0 {
            return Err(EngineError::NoDiamonds);
        }
        if let Some(b) = *self.period.lock().unwrap() {
            return Ok(b);
        }
        let aut = build_buchi_with_cap(&down_formula(&self.kb)?, self.config.state_cap)?;
        let s = aut.state_count() as u32 + 1;
        let lits: Vec<_> = self.kb.diamonds().into_iter().filter_map(theta_atom).map(|a| (a, false)).collect();
        let q = aut.shortest_cycle_admitting(&lits).map_or(s, |q| q as u32);
        let b = PeriodBounds { s, q };
        *self.period.lock().unwrap() = Some(b);
        Ok(b)
    }

    /// The scan bound and, unless overridden, the period bounds it came from.
    pub fn bound(&self) -> Result<(u32, Option<PeriodBounds>), EngineError> {
        match self.config.bound {
            Some(b) => Ok((b, None)),
            None => {
                let pb = self.period_bounds()?;
                Ok((pb.s + pb.q, Some(pb)))
            }
        }
    }

    pub fn decide(&self) -> Result<Verdict, EngineError> {
        if let Some(v) = self.verdict.lock().unwrap().clone() {
            return Ok(v);
        }
        let v = match self.d {
            0 => self.decide_plain()?,
            1 => self.decide_single()?,
            _ => self.decide_double()?,
        };
        *self.verdict.lock().unwrap() = Some(v.clone());
        Ok(v)
    }

    fn decide_plain(&self) -> Result<Verdict, EngineError> {
        let verdict = ltl_sat(&translate(&self.kb)?)?;
        let certificate = match verdict.witness() {
            Some(w) => Certificate::Model(w.clone()),
            None => Certificate::Inconsistent,
        };
        Ok(Verdict { sat: verdict.is_sat(), certificate, bound: None, period: None })
    }

    /// First `k ≤ bound` whose single-diamond entry is unsatisfiable.
    fn first_unsat_single(&self, bound: u32) -> Result<Option<u32>, EngineError> {
        let mut start = 0;
        while start <= bound {
            let end = bound.min(start + BATCH * 4 - 1);
            let ks: Vec<u32> = (start..=end).collect();
            let sats = par::map(&ks, self.config.parallel, |&k| self.entry_sat(&[k]));
            for (k, s) in ks.into_iter().zip(sats) {
                if !s? {
                    return Ok(Some(k));
                }
            }
            start = end + 1;
        }
        Ok(None)
    }

    fn decide_single(&self) -> Result<Verdict, EngineError> {
        let (bound, period) = self.bound()?;
        let (sat, certificate) = match self.first_unsat_single(bound)? {
            Some(k) => (false, Certificate::UnsatEntry { entry: vec![k] }),
            None => (true, Certificate::Prefix(self.witness(None, bound.min(self.config.certificate_size))?)),
        };
        Ok(Verdict { sat, certificate, bound: Some(bound), period })
    }

    fn decide_double(&self) -> Result<Verdict, EngineError> {
        let (bound, period) = self.bound()?;
        let half = self.param().is_some_and(GeomParam::is_half);
        let size = bound.min(self.config.certificate_size);
        for l in 0..=bound {
            self.ensure_levels(l, bound)?;
            let info = self.levels.lock().unwrap()[l as usize].clone();
            if info.has_pair {
                continue;
            }
            let certificate = if !half {
                Certificate::NoChainedPair { level: l, unsat: info.unsat_entries(l) }
            } else {
                match self.subchecks(l)? {
                    Some((axis, k)) => Certificate::SubcheckFailed { level: l, axis, entry: vec![k] },
                    None => {
                        let prefix = self.witness(Some(l), size)?;
                        return Ok(Verdict {
                            sat: true,
                            certificate: Certificate::Degenerate { level: l, prefix },
                            bound: Some(bound),
                            period,
                        });
                    }
                }
            };
            return Ok(Verdict { sat: false, certificate, bound: Some(bound), period });
        }
        let prefix = self.witness(None, size)?;
        Ok(Verdict { sat: true, certificate: Certificate::Prefix(prefix), bound: Some(bound), period })
    }

    /// Runs the one-diamond procedure on both rewritings at level `l`;
    /// returns the first failing axis and entry.
    fn subchecks(&self, l: u32) -> Result<Option<(usize, u32)>, EngineError> {
        for axis in [1, 2] {
            let sub = Engine::new(&single_diamond_abox(&self.kb, axis, l)?, self.config.clone())?;
            let (bound, _) = sub.bound()?;
            if let Some(k) = sub.first_unsat_single(bound)? {
                return Ok(Some((axis, k)));
            }
        }
        Ok(None)
    }

    /// Witness matrix of size `l + 1` for a satisfiable KB.
    pub fn build_witness(&self, l: u32) -> Result<PartialMatrix, EngineError> {
        let v = self.decide()?;
        match v.certificate {
            Certificate::Degenerate { level, .. } => self.witness(Some(level), l),
            _ if v.sat && self.d > 0 => self.witness(None, l),
            _ if v.sat => Err(EngineError::NoDiamonds),
            _ => Err(EngineError::Unsatisfiable),
        }
    }

    fn witness(&self, degenerate: Option<u32>, l: u32) -> Result<PartialMatrix, EngineError> {
        let p = self.param().expect("diamond present").clone();
        if self.d == 1 {
            let sat = (0..=l).map(|k| self.entry_sat(&[k])).collect::<Result<Vec<_>, _>>()?;
            return Ok(PartialMatrix::single(&p, sat));
        }
        self.ensure_levels(l, l)?;
        let levels = self.levels.lock().unwrap();
        PartialMatrix::build(&p, &levels[..=l as usize], degenerate)
    }

    /// Checks support and the row and column sums of `m` against this KB.
    pub fn verify_partial(&self, m: &PartialMatrix) -> Result<bool, EngineError> {
        let p = match self.param() {
            Some(p) => p.clone(),
            None => return Err(EngineError::NoDiamonds),
        };
        for (key, v) in m.positive_entries() {
            let key = if self.d == 1 { vec![key.1] } else { vec![key.0, key.1] };
            if v > &BigRational::one() || !self.entry_sat(&key)? {
                return Ok(false);
            }
        }
        Ok(m.nonnegative() && m.sums_ok(&p, self.d == 1))
    }
}
