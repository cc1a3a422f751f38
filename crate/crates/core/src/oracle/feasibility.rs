use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::matrix::{geom_pmf, geom_tail, Engine, EngineError, PartialMatrix};

/// Outcome of the truncated transportation relaxation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeasibilityReport {
    pub truncation: u32,
    pub assignment: Option<PartialMatrix>,
    /// Mass of row k placed beyond the truncation.
    pub row_slack: Vec<BigRational>,
    pub col_slack: Vec<BigRational>,
}

impl FeasibilityReport {
    pub fn feasible(&self) -> bool {
        self.assignment.is_some()
    }

    /// Re-checks support, sums and slack bounds of a feasible assignment.
    pub fn verify(&self, engine: &Engine) -> Result<bool, EngineError> {
        let Some(m) = &self.assignment else { return Ok(true) };
        let p = engine.param().ok_or(EngineError::NoDiamonds)?;
        let tail = geom_tail(p, self.truncation);
        if !m.nonnegative() {
            return Ok(false);
        }
        for ((r, c), _) in m.positive_entries() {
            if !engine.entry_sat(&[r, c])? {
                return Ok(false);
            }
        }
        let slack_ok = |s: &[BigRational]| {
            s.iter().all(|x| !x.is_negative() && *x <= tail) && s.iter().fold(BigRational::zero(), |a, b| a + b) <= tail
        };
        let sums_ok = (0..=self.truncation as usize).all(|k| {
            let pmf = geom_pmf(p, k as u32);
            m.row_sum(k) + &self.row_slack[k] == pmf && m.col_sum(k) + &self.col_slack[k] == pmf
        });
        Ok(sums_ok && slack_ok(&self.row_slack) && slack_ok(&self.col_slack))
    }
}

/// Exact feasibility of the (T+1)-square relaxation: nonnegative mass on
/// satisfiable entries, row and column k summing to pmf(k) up to a slack for
/// mass beyond T, each slack and the slack totals bounded by tail(T).
pub fn truncated_feasibility(engine: &Engine, t: u32) -> Result<FeasibilityReport, EngineError> {
    if engine.diamonds() != 2 {
        return Err(crate::reduction::ReductionError::Arity { expected: engine.diamonds(), found: 2 }.into());
    }
    let p = engine.param().ok_or(EngineError::NoDiamonds)?.clone();
    let n = t as usize + 1;
    let mut cells = Vec::new();
    for r in 0..n {
        for c in 0..n {
            if engine.entry_sat(&[r as u32, c as u32])? {
                cells.push((r, c));
            }
        }
    }
    // Columns: cells, row slacks, column slacks, then one bound slack per
    // slack variable and per slack total.
    let nc = cells.len();
    let (rs, cs) = (nc, nc + n);
    let bound = nc + 2 * n;
    let vars = bound + 2 * n + 2;
    let one = BigRational::from_integer(1.into());
    let tail = geom_tail(&p, t);
    let mut a = Vec::new();
    let mut b = Vec::new();
    for k in 0..n {
        let mut row = vec![BigRational::zero(); vars];
        let mut col = vec![BigRational::zero(); vars];
        for (i, &(r, c)) in cells.iter().enumerate() {
            if r == k {
                row[i] = one.clone();
            }
            if c == k {
                col[i] = one.clone();
            }
        }
        row[rs + k] = one.clone();
        col[cs + k] = one.clone();
        a.push(row);
        a.push(col);
        b.push(geom_pmf(&p, k as u32));
        b.push(geom_pmf(&p, k as u32));
    }
    for s in 0..2 * n {
        let mut row = vec![BigRational::zero(); vars];
        row[rs + s] = one.clone();
        row[bound + s] = one.clone();
        a.push(row);
        b.push(tail.clone());
    }
    for (side, base) in [rs, cs].into_iter().enumerate() {
        let mut row = vec![BigRational::zero(); vars];
        for k in 0..n {
            row[base + k] = one.clone();
        }
        row[bound + 2 * n + side] = one.clone();
        a.push(row);
        b.push(tail.clone());
    }
    let report = match super::simplex::feasible_point(&a, &b) {
        None => FeasibilityReport { truncation: t, assignment: None, row_slack: Vec::new(), col_slack: Vec::new() },
        Some(x) => {
            let mut m = PartialMatrix::zeros(n, n);
            for r in 0..n {
                for c in 0..n {
                    m.sat[r][c] = false;
                }
            }
            for (i, &(r, c)) in cells.iter().enumerate() {
                m.values[r][c] = x[i].clone();
                m.sat[r][c] = true;
            }
            FeasibilityReport {
                truncation: t,
                assignment: Some(m),
                row_slack: x[rs..rs + n].to_vec(),
                col_slack: x[cs..cs + n].to_vec(),
            }
        }
    };
    Ok(report)
}
