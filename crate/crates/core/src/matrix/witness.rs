use std::collections::VecDeque;
use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::kb::GeomParam;

use super::chain::{level_index, select_chain, LevelInfo};
use super::geom::{geom_pmf, geom_tail};
use super::EngineError;

/// A finite square (or, for one diamond, a single row) of exact masses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialMatrix {
    pub values: Vec<Vec<BigRational>>,
    /// Satisfiability of each position; only used for display.
    pub sat: Vec<Vec<bool>>,
}

impl PartialMatrix {
    pub fn zeros(rows: usize, cols: usize) -> PartialMatrix {
        PartialMatrix { values: vec![vec![BigRational::zero(); cols]; rows], sat: vec![vec![true; cols]; rows] }
    }

    pub fn from_values(values: Vec<Vec<BigRational>>) -> PartialMatrix {
        let sat = values.iter().map(|r| vec![true; r.len()]).collect();
        PartialMatrix { values, sat }
    }

    /// Largest coordinate, i.e. ℓ for an (ℓ+1)-square.
    pub fn size(&self) -> u32 {
        self.values.first().map_or(0, |r| r.len() as u32 - 1)
    }

    pub fn get(&self, r: u32, c: u32) -> &BigRational {
        &self.values[r as usize][c as usize]
    }

    pub fn positive_entries(&self) -> impl Iterator<Item = ((u32, u32), &BigRational)> {
        self.values.iter().enumerate().flat_map(|(r, row)| {
            row.iter().enumerate().filter(|(_, v)| v.is_positive()).map(move |(c, v)| ((r as u32, c as u32), v))
        })
    }

    pub fn nonnegative(&self) -> bool {
        self.values.iter().flatten().all(|v| !v.is_negative())
    }

    pub fn row_sum(&self, r: usize) -> BigRational {
        self.values[r].iter().fold(BigRational::zero(), |a, b| a + b)
    }

    pub fn col_sum(&self, c: usize) -> BigRational {
        self.values.iter().fold(BigRational::zero(), |a, row| a + &row[c])
    }

    /// Row and column `k` sum to pmf(k) for every k. At p = 1/2 one index may
    /// instead sum to pmf(k) − tail(ℓ) on both its row and column: the mass
    /// of that arm lies partly beyond the truncation.
    pub fn sums_ok(&self, p: &GeomParam, single: bool) -> bool {
        if single {
            return self.values.len() == 1
                && self.values[0].iter().enumerate().all(|(k, v)| *v == geom_pmf(p, k as u32));
        }
        let n = self.values.len();
        if n == 0 || self.values.iter().any(|r| r.len() != n) {
            return false;
        }
        let l = n as u32 - 1;
        let short = geom_tail(p, l);
        let mut deficient = 0;
        for k in 0..n {
            let (row, col, pmf) = (self.row_sum(k), self.col_sum(k), geom_pmf(p, k as u32));
            if row == pmf && col == pmf {
                continue;
            }
            let truncated = &pmf - &short;
            if p.is_half() && row == truncated && col == truncated {
                deficient += 1;
            } else {
                return false;
            }
        }
        deficient <= 1
    }

    pub(crate) fn single(p: &GeomParam, sat: Vec<bool>) -> PartialMatrix {
        let values = (0..sat.len() as u32).map(|k| geom_pmf(p, k)).collect();
        PartialMatrix { values: vec![values], sat: vec![sat] }
    }

    /// Builds the witness level by level over `levels = L(0..=ℓ)`. With
    /// `degenerate = Some(t)` (p = 1/2), level t stays empty and its arms
    /// carry pmf(i) at (t,i) and (i,t) for every i > t.
    pub(crate) fn build(
        p: &GeomParam,
        levels: &[LevelInfo],
        degenerate: Option<u32>,
    ) -> Result<PartialMatrix, EngineError> {
        let l = levels.len() as u32 - 1;
        let n = levels.len();
        let mut m = PartialMatrix::zeros(n, n);
        for r in 0..=l {
            for c in 0..=l {
                m.sat[r as usize][c as usize] = levels[r.max(c) as usize].sat[level_index(r, c)];
            }
        }
        for k in 0..=l {
            if let Some(t) = degenerate {
                if k == t {
                    continue;
                }
                if k > t {
                    m.values[t as usize][k as usize] = geom_pmf(p, k);
                    m.values[k as usize][t as usize] = geom_pmf(p, k);
                    continue;
                }
            }
            m.place_level(p, &levels[..=k as usize], k)?;
        }
        Ok(m)
    }

    fn place_level(&mut self, p: &GeomParam, levels: &[LevelInfo], k: u32) -> Result<(), EngineError> {
        let v = geom_pmf(p, k);
        let chain = select_chain(levels, k).ok_or(EngineError::WitnessStuck(k))?;
        let step = chain
            .iter()
            .skip(1)
            .step_by(2)
            .map(|&(r, c)| self.get(r, c).clone())
            .min()
            .map_or(v.clone(), |b| b.min(v.clone()));
        if step.is_positive() {
            for (pos, &(r, c)) in chain.iter().enumerate() {
                let e = &mut self.values[r as usize][c as usize];
                if pos % 2 == 0 {
                    *e += &step;
                } else {
                    *e -= &step;
                }
            }
        }
        let rest = v - step;
        if rest.is_positive() {
            self.route(levels, k, rest)?;
        }
        Ok(())
    }

    /// Moves `amount` onto the arms of level `k` by rebalancing the square
    /// below it, as a max-flow from row arms to column arms.
    fn route(&mut self, levels: &[LevelInfo], k: u32, amount: BigRational) -> Result<(), EngineError> {
        let kk = k as usize;
        let (src, snk) = (2 * kk, 2 * kk + 1);
        let row = |r: usize| r;
        let col = |c: usize| kk + c;
        let top = &levels[kk].sat;
        let mut net = FlowNet::new(2 * kk + 2);
        for i in 0..kk {
            if top[level_index(i as u32, k)] {
                net.add(src, row(i), None);
            }
            if top[level_index(k, i as u32)] {
                net.add(col(i), snk, None);
            }
        }
        let mut pair_edges = Vec::new();
        for r in 0..kk {
            for c in 0..kk {
                let (r32, c32) = (r as u32, c as u32);
                let m = &self.values[r][c];
                let down = m.is_positive().then(|| net.add(row(r), col(c), Some(m.clone())));
                let up = levels[r.max(c)].sat[level_index(r32, c32)].then(|| net.add(col(c), row(r), None));
                pair_edges.push((r, c, down, up));
            }
        }
        let pushed = net.max_flow(src, snk, &amount);
        if pushed != amount {
            return Err(EngineError::WitnessStuck(k));
        }
        for (r, c, down, up) in pair_edges {
            let gain = up.map_or(BigRational::zero(), |e| net.flow(e));
            let loss = down.map_or(BigRational::zero(), |e| net.flow(e));
            self.values[r][c] += gain - loss;
        }
        for e in net.edges_from(src) {
            let i = net.to[e];
            self.values[i][kk] += net.flow(e);
        }
        for j in 0..kk {
            for e in net.edges_from(col(j)) {
                if net.to[e] == snk {
                    self.values[kk][j] += net.flow(e);
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for PartialMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (vals, sats) in self.values.iter().zip(&self.sat) {
            let cells: Vec<String> =
                vals.iter().zip(sats).map(|(v, &s)| if s { v.to_string() } else { "x".to_string() }).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Edmonds–Karp over exact rationals; `None` capacity is unbounded. Each
/// edge has a paired residual edge at index `e ^ 1`.
struct FlowNet {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<Option<BigRational>>,
    flow: Vec<BigRational>,
}

impl FlowNet {
    fn new(n: usize) -> FlowNet {
        FlowNet { head: vec![Vec::new(); n], to: Vec::new(), cap: Vec::new(), flow: Vec::new() }
    }

    fn add(&mut self, a: usize, b: usize, cap: Option<BigRational>) -> usize {
        let e = self.to.len();
        self.head[a].push(e);
        self.to.push(b);
        self.cap.push(cap);
        self.flow.push(BigRational::zero());
        self.head[b].push(e + 1);
        self.to.push(a);
        self.cap.push(Some(BigRational::zero()));
        self.flow.push(BigRational::zero());
        e
    }

    fn flow(&self, e: usize) -> BigRational {
        self.flow[e].clone()
    }

    fn edges_from(&self, v: usize) -> Vec<usize> {
        self.head[v].iter().copied().filter(|e| e % 2 == 0).collect()
    }

    fn residual(&self, e: usize) -> Option<BigRational> {
        self.cap[e].as_ref().map(|c| c - &self.flow[e])
    }

    fn max_flow(&mut self, s: usize, t: usize, limit: &BigRational) -> BigRational {
        let mut total = BigRational::zero();
        while &total < limit {
            let mut prev: Vec<Option<usize>> = vec![None; self.head.len()];
            let mut seen = vec![false; self.head.len()];
            seen[s] = true;
            let mut q = VecDeque::from([s]);
            while let Some(v) = q.pop_front() {
                for &e in &self.head[v] {
                    let w = self.to[e];
                    if !seen[w] && self.residual(e).is_none_or(|r| r.is_positive()) {
                        seen[w] = true;
                        prev[w] = Some(e);
                        q.push_back(w);
                    }
                }
            }
            if !seen[t] {
                break;
            }
            let mut path = Vec::new();
            let mut v = t;
            while let Some(e) = prev[v] {
                path.push(e);
                v = self.to[e ^ 1];
            }
            let mut amt = limit - &total;
            for &e in &path {
                if let Some(r) = self.residual(e) {
                    amt = amt.min(r);
                }
            }
            for &e in &path {
                self.flow[e] += &amt;
                self.flow[e ^ 1] -= &amt;
            }
            total += amt;
        }
        total
    }
}
