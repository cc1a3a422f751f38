//! Levels and chained pairs.
//!
//! A chain between `(i,ℓ)` and `(ℓ,j)` is a walk in a bipartite graph on rows
//! and columns below ℓ: a row `r` steps to a column `c` through an entry `(r,c)`
//! that gives up mass, so it must itself be chained; a column `c` steps to a row
//! `m` through an entry `(m,c)` that receives mass, so it need only be
//! satisfiable.

use std::collections::VecDeque;

/// Entries of L(k): `(0,k), (1,k), …, (k,k), (k,k-1), …, (k,0)`.
pub fn level_entries(k: u32) -> Vec<(u32, u32)> {
    let mut v: Vec<(u32, u32)> = (0..=k).map(|i| (i, k)).collect();
    v.extend((0..k).rev().map(|j| (k, j)));
    v
}

/// Position of `(r,c)` in `level_entries(max(r,c))`.
pub fn level_index(r: u32, c: u32) -> usize {
    let k = r.max(c);
    if c == k {
        r as usize
    } else {
        (2 * k - c) as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelInfo {
    pub sat: Vec<bool>,
    pub chained: Vec<bool>,
    pub has_pair: bool,
}

impl LevelInfo {
    pub fn unsat_entries(&self, k: u32) -> Vec<(u32, u32)> {
        level_entries(k).into_iter().zip(&self.sat).filter(|(_, &s)| !s).map(|(e, _)| e).collect()
    }
}

struct Graph {
    l: u32,
    succ: Vec<Vec<u32>>,
    pred: Vec<Vec<u32>>,
    starts: Vec<u32>,
    ends: Vec<u32>,
}

fn sat_below(levels: &[LevelInfo], r: u32, c: u32) -> bool {
    levels[r.max(c) as usize].sat[level_index(r, c)]
}

fn chained_below(levels: &[LevelInfo], r: u32, c: u32) -> bool {
    levels[r.max(c) as usize].chained[level_index(r, c)]
}

impl Graph {
    /// `levels` holds L(0..l); `top` is the satisfiability of L(l).
    fn new(levels: &[LevelInfo], l: u32, top: &[bool]) -> Graph {
        let n = 2 * l as usize;
        let mut succ = vec![Vec::new(); n];
        let mut pred = vec![Vec::new(); n];
        for r in 0..l {
            for c in 0..l {
                if chained_below(levels, r, c) {
                    succ[r as usize].push(l + c);
                    pred[(l + c) as usize].push(r);
                }
            }
        }
        for c in 0..l {
            for m in 0..l {
                if sat_below(levels, m, c) {
                    succ[(l + c) as usize].push(m);
                    pred[m as usize].push(l + c);
                }
            }
        }
        let starts = (0..l).filter(|&i| top[level_index(i, l)]).collect();
        let ends = (0..l).filter(|&j| top[level_index(l, j)]).map(|j| l + j).collect();
        Graph { l, succ, pred, starts, ends }
    }

    fn bfs(adj: &[Vec<u32>], from: &[u32]) -> Vec<Option<u32>> {
        let mut dist = vec![None; adj.len()];
        let mut q = VecDeque::new();
        for &s in from {
            if dist[s as usize].is_none() {
                dist[s as usize] = Some(0);
                q.push_back(s);
            }
        }
        while let Some(v) = q.pop_front() {
            let d = dist[v as usize].unwrap();
            for &w in &adj[v as usize] {
                if dist[w as usize].is_none() {
                    dist[w as usize] = Some(d + 1);
                    q.push_back(w);
                }
            }
        }
        dist
    }
}

pub fn analyse_level(levels: &[LevelInfo], l: u32, top: Vec<bool>) -> LevelInfo {
    let g = Graph::new(levels, l, &top);
    let fwd = Graph::bfs(&g.succ, &g.starts);
    let bwd = Graph::bfs(&g.pred, &g.ends);
    let mut chained = vec![false; top.len()];
    for (idx, (r, c)) in level_entries(l).into_iter().enumerate() {
        chained[idx] = top[idx]
            && if r == c {
                true
            } else if c == l {
                bwd[r as usize].is_some()
            } else {
                fwd[(g.l + c) as usize].is_some()
            };
    }
    let has_pair = chained.iter().any(|&x| x);
    LevelInfo { sat: top, chained, has_pair }
}

/// All chained pairs at level `l`, as `(i,j)` for the pair `((i,l),(l,j))`.
pub fn chained_pairs(levels: &[LevelInfo], l: u32) -> Vec<(u32, u32)> {
    let top = &levels[l as usize].sat;
    let mut out = Vec::new();
    if top[level_index(l, l)] {
        out.push((l, l));
    }
    let g = Graph::new(levels, l, top);
    for &i in &g.starts {
        let d = Graph::bfs(&g.succ, &[i]);
        for &e in &g.ends {
            if d[e as usize].is_some() {
                out.push((i, e - g.l));
            }
        }
    }
    out
}

/// The chain used to place the mass of level `l`: the diagonal if possible,
/// otherwise a shortest chain with the smallest endpoints and corners.
pub fn select_chain(levels: &[LevelInfo], l: u32) -> Option<Vec<(u32, u32)>> {
    let top = &levels[l as usize].sat;
    if top[level_index(l, l)] {
        return Some(vec![(l, l)]);
    }
    let g = Graph::new(levels, l, top);
    let mut best: Option<(u32, u32, u32, Vec<Option<u32>>)> = None;
    for &e in &g.ends {
        let dist = Graph::bfs(&g.pred, &[e]);
        for &i in &g.starts {
            if let Some(d) = dist[i as usize] {
                let key = (d, i, e - g.l);
                if best.as_ref().is_none_or(|b| key < (b.0, b.1, b.2)) {
                    best = Some((d, i, e - g.l, dist.clone()));
                }
            }
        }
    }
    let (_, i, j, dist) = best?;
    let mut chain = vec![(i, l)];
    let mut cur = i;
    let target = g.l + j;
    while cur != target {
        let want = dist[cur as usize].unwrap() - 1;
        let next = *g.succ[cur as usize].iter().find(|&&w| dist[w as usize] == Some(want)).unwrap();
        chain.push(if cur < g.l { (cur, next - g.l) } else { (next, cur - g.l) });
        cur = next;
    }
    chain.push((l, j));
    Some(chain)
}
