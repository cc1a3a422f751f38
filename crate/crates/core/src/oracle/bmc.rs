//! Bounded lasso search by SAT encoding.

use std::collections::{BTreeSet, HashMap};

use varisat::{ExtendFormula, Lit, Solver};

use crate::ltl::{Atom, LassoWord, Ltl};

struct Encoder {
    solver: Solver<'static>,
    /// Fixed loop start, or one selector literal per position.
    start: Start,
    len: usize,
    truth: Lit,
    atoms: HashMap<Atom, Vec<Lit>>,
    memo: HashMap<Ltl, Vec<Lit>>,
}

enum Start {
    Fixed(usize),
    Free(Vec<Lit>),
}

impl Encoder {
    fn new(start: Option<usize>, len: usize) -> Encoder {
        let mut solver = Solver::new();
        let truth = solver.new_lit();
        solver.add_clause(&[truth]);
        let start = match start {
            Some(p) => Start::Fixed(p),
            None => {
                let sel: Vec<Lit> = (0..len).map(|_| solver.new_lit()).collect();
                solver.add_clause(&sel);
                for i in 0..len {
                    for j in i + 1..len {
                        solver.add_clause(&[!sel[i], !sel[j]]);
                    }
                }
                Start::Free(sel)
            }
        };
        Encoder { solver, start, len, truth, atoms: HashMap::new(), memo: HashMap::new() }
    }

    /// Value of `v` at the position the last one loops back to.
    fn at_loop(&mut self, v: &[Lit]) -> Lit {
        match &self.start {
            Start::Fixed(p) => v[*p],
            Start::Free(sel) => {
                let sel = sel.clone();
                let terms: Vec<Lit> = sel.iter().zip(v).map(|(&s, &x)| self.and(&[s, x])).collect();
                self.or(&terms)
            }
        }
    }

    fn loop_start(&self, model: &BTreeSet<Lit>) -> usize {
        match &self.start {
            Start::Fixed(p) => *p,
            Start::Free(sel) => sel.iter().position(|l| model.contains(l)).expect("one selector holds"),
        }
    }

    fn and(&mut self, xs: &[Lit]) -> Lit {
        let out = self.solver.new_lit();
        let mut big = vec![out];
        for &x in xs {
            self.solver.add_clause(&[!out, x]);
            big.push(!x);
        }
        self.solver.add_clause(&big);
        out
    }

    fn or(&mut self, xs: &[Lit]) -> Lit {
        let neg: Vec<Lit> = xs.iter().map(|&x| !x).collect();
        !self.and(&neg)
    }

    /// `a U b` on the lasso: a first pass that does not wrap, then a second
    /// pass whose last position continues at the loop start of the first.
    fn until(&mut self, a: &[Lit], b: &[Lit]) -> Vec<Lit> {
        let n = self.len;
        let mut first = vec![self.truth; n];
        first[n - 1] = b[n - 1];
        for i in (0..n - 1).rev() {
            let keep = self.and(&[a[i], first[i + 1]]);
            first[i] = self.or(&[b[i], keep]);
        }
        let back = self.at_loop(&first);
        let mut out = vec![self.truth; n];
        let wrap = self.and(&[a[n - 1], back]);
        out[n - 1] = self.or(&[b[n - 1], wrap]);
        for i in (0..n - 1).rev() {
            let keep = self.and(&[a[i], out[i + 1]]);
            out[i] = self.or(&[b[i], keep]);
        }
        out
    }

    fn encode(&mut self, f: &Ltl) -> Vec<Lit> {
        if let Some(v) = self.memo.get(f) {
            return v.clone();
        }
        let n = self.len;
        let v: Vec<Lit> = match f {
            Ltl::True => vec![self.truth; n],
            Ltl::False => vec![!self.truth; n],
            Ltl::Prop(a) => {
                let solver = &mut self.solver;
                self.atoms.entry(*a).or_insert_with(|| (0..n).map(|_| solver.new_lit()).collect()).clone()
            }
            Ltl::Not(g) => self.encode(g).into_iter().map(|l| !l).collect(),
            Ltl::And(gs) | Ltl::Or(gs) => {
                let parts: Vec<Vec<Lit>> = gs.iter().map(|g| self.encode(g)).collect();
                (0..n)
                    .map(|i| {
                        let at: Vec<Lit> = parts.iter().map(|p| p[i]).collect();
                        if matches!(f, Ltl::And(_)) {
                            self.and(&at)
                        } else {
                            self.or(&at)
                        }
                    })
                    .collect()
            }
            Ltl::Next(g) => {
                let g = self.encode(g);
                let mut v: Vec<Lit> = g[1..].to_vec();
                v.push(self.at_loop(&g));
                v
            }
            Ltl::Eventually(g) => {
                let g = self.encode(g);
                self.until(&vec![self.truth; n], &g)
            }
            Ltl::Always(g) => {
                let neg: Vec<Lit> = self.encode(g).into_iter().map(|l| !l).collect();
                self.until(&vec![self.truth; n], &neg).into_iter().map(|l| !l).collect()
            }
            Ltl::Until(a, b) => {
                let (a, b) = (self.encode(a), self.encode(b));
                self.until(&a, &b)
            }
        };
        self.memo.insert(f.clone(), v.clone());
        v
    }
}

fn solve(f: &Ltl, mut enc: Encoder) -> Option<LassoWord> {
    let root = enc.encode(f)[0];
    enc.solver.add_clause(&[root]);
    if !enc.solver.solve().expect("sat solver failure") {
        return None;
    }
    let model: BTreeSet<Lit> = enc.solver.model().expect("model").into_iter().collect();
    let start = enc.loop_start(&model);
    let letter = |i: usize| -> BTreeSet<Atom> {
        enc.atoms.iter().filter(|(_, v)| model.contains(&v[i])).map(|(a, _)| *a).collect()
    };
    let pre = (0..start).map(letter).collect();
    let cyc = (start..enc.len).map(letter).collect();
    Some(LassoWord::new(f.atoms(), pre, cyc))
}

/// A lasso with exactly `prefix` prefix letters and `cycle` loop letters
/// satisfying `f`, if one exists.
pub fn bmc_lasso(f: &Ltl, prefix: usize, cycle: usize) -> Option<LassoWord> {
    assert!(cycle > 0);
    solve(f, Encoder::new(Some(prefix), prefix + cycle))
}

/// A lasso of exactly `len` letters, loop start chosen by the solver.
pub fn bmc_any(f: &Ltl, len: usize) -> Option<LassoWord> {
    assert!(len > 0);
    solve(f, Encoder::new(None, len))
}

/// Covers every lasso with prefix at most `max_prefix` and loop at most
/// `max_cycle`: a shorter lasso unrolls to one of length exactly
/// `max_prefix + max_cycle` by lengthening its prefix.
pub fn bounded_search(f: &Ltl, max_prefix: usize, max_cycle: usize) -> Option<LassoWord> {
    bmc_any(f, max_prefix + max_cycle.max(1))
}
