use std::collections::BTreeSet;

use crate::ltl::{lasso_check, Atom, LassoWord, Ltl};

use super::OracleError;

pub const CANDIDATE_GUARD: u128 = 1 << 22;

/// Number of lassos with prefix length ≤ `prefix` and loop length in
/// `1..=cycle` over `atoms` atoms.
pub fn candidate_count(atoms: usize, prefix: usize, cycle: usize) -> Option<u128> {
    let mut total: u128 = 0;
    for p in 0..=prefix {
        for l in 1..=cycle {
            let bits = u32::try_from(atoms * (p + l)).ok()?;
            total = total.checked_add(1u128.checked_shl(bits).filter(|_| bits < 128)?)?;
        }
    }
    Some(total)
}

/// Tries every lasso within the bounds, shortest shapes first and valuations
/// in lexicographic order. `None` means no witness within the bounds.
pub fn enumerate_ltl_sat(f: &Ltl, prefix: usize, cycle: usize) -> Result<Option<LassoWord>, OracleError> {
    let atoms: Vec<Atom> = f.atoms().into_iter().collect();
    let count = candidate_count(atoms.len(), prefix, cycle).filter(|&c| c <= CANDIDATE_GUARD);
    if count.is_none() {
        return Err(OracleError::Guard { atoms: atoms.len(), prefix, cycle });
    }
    let domain: BTreeSet<Atom> = atoms.iter().copied().collect();
    let n = atoms.len();
    for p in 0..=prefix {
        for l in 1..=cycle {
            let positions = p + l;
            for bits in 0u64..(1u64 << (n * positions)) {
                let letter = |i: usize| -> BTreeSet<Atom> {
                    (0..n).filter(|j| bits >> (i * n + j) & 1 == 1).map(|j| atoms[j]).collect()
                };
                let w = LassoWord::new(domain.clone(), (0..p).map(letter).collect(), (p..positions).map(letter).collect());
                if lasso_check(&w, f).expect("domain covers atoms") {
                    return Ok(Some(w));
                }
            }
        }
    }
    Ok(None)
}
