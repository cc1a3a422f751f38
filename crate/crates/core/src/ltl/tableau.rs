//! On-the-fly tableau construction of a generalized Büchi automaton.
//!
//! States are keyed by their pending next-step obligations and the set of
//! eventualities fulfilled at that step. Transitions carry the propositional
//! constraint (label) on the letter read when entering their target.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use super::lasso::LassoWord;
use super::nnf::{prop_solve, Arena, Kind, NodeId, FALSE, TRUE};
use super::{Atom, Ltl, LtlError};

pub const DEFAULT_STATE_CAP: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Label {
    pub lits: Vec<(Atom, bool)>,
    pub clauses: Vec<NodeId>,
}

pub(crate) struct State {
    pub next: Box<[NodeId]>,
    pub acc: Box<[u64]>,
    /// Successor state and the label of the letter read on entering it.
    pub succ: Vec<(u32, u32)>,
}

pub struct BuchiAutomaton {
    pub(crate) arena: Arena,
    pub(crate) states: Vec<State>,
    pub(crate) labels: Vec<Label>,
    pub(crate) initial: Vec<(u32, u32)>,
    pub(crate) acc_count: usize,
    atoms: BTreeSet<Atom>,
    accepting: Vec<bool>,
    scc_of: Vec<u32>,
}

struct Expansion {
    label: Label,
    next: Box<[NodeId]>,
    acc: Box<[u64]>,
}

#[derive(Clone)]
struct Branch {
    todo: Vec<NodeId>,
    branching: Vec<NodeId>,
    old: HashSet<NodeId>,
    lits: BTreeMap<Atom, bool>,
    next: BTreeSet<NodeId>,
    postponed: Vec<NodeId>,
    deferred: Vec<NodeId>,
}

fn peval(arena: &Arena, id: NodeId, lits: &BTreeMap<Atom, bool>) -> Option<bool> {
    match arena.kind(id) {
        Kind::True => Some(true),
        Kind::False => Some(false),
        Kind::Lit(a, v) => lits.get(a).map(|x| x == v),
        Kind::And(v) => {
            let mut all = Some(true);
            for &c in v {
                match peval(arena, c, lits) {
                    Some(false) => return Some(false),
                    None => all = None,
                    Some(true) => {}
                }
            }
            all
        }
        Kind::Or(v) => {
            let mut any = Some(false);
            for &c in v {
                match peval(arena, c, lits) {
                    Some(true) => return Some(true),
                    None => any = None,
                    Some(false) => {}
                }
            }
            any
        }
        _ => None,
    }
}

struct Expander<'a> {
    arena: &'a Arena,
    until_index: &'a HashMap<NodeId, usize>,
    words: usize,
    /// Remaining tableau branches before the construction gives up.
    budget: std::cell::Cell<usize>,
    cap: usize,
}

/// Pending obligations and the eventualities they have fulfilled.
type StateKey = (Box<[NodeId]>, Box<[u64]>);

impl Expander<'_> {
    fn expand(&self, start: &[NodeId]) -> Result<Vec<Expansion>, LtlError> {
        let mut out: Vec<Expansion> = Vec::new();
        let mut seen: HashSet<(Label, StateKey)> = HashSet::new();
        let mut stack = vec![Branch {
            todo: start.to_vec(),
            branching: Vec::new(),
            old: HashSet::new(),
            lits: BTreeMap::new(),
            next: BTreeSet::new(),
            postponed: Vec::new(),
            deferred: Vec::new(),
        }];
        'branches: while let Some(mut b) = stack.pop() {
            match self.budget.get().checked_sub(1) {
                Some(left) => self.budget.set(left),
                None => return Err(LtlError::StateCap(self.cap)),
            }
            loop {
                while let Some(f) = b.todo.pop() {
                    if b.old.contains(&f) {
                        continue;
                    }
                    match self.arena.kind(f) {
                        Kind::True => {}
                        Kind::False => continue 'branches,
                        Kind::Lit(a, v) => {
                            if b.lits.insert(*a, *v) == Some(!*v) {
                                continue 'branches;
                            }
                            b.old.insert(f);
                        }
                        Kind::And(v) => {
                            b.old.insert(f);
                            b.todo.extend(v.iter().copied());
                        }
                        Kind::Next(g) => {
                            b.old.insert(f);
                            b.next.insert(*g);
                        }
                        Kind::Release(FALSE, g) => {
                            b.old.insert(f);
                            b.todo.push(*g);
                            b.next.insert(f);
                        }
                        Kind::Or(_) if self.arena.prop[f as usize] => {
                            b.old.insert(f);
                            b.deferred.push(f);
                        }
                        Kind::Or(_) | Kind::Until(..) | Kind::Release(..) => b.branching.push(f),
                    }
                }
                let Some(g) = b.branching.pop() else { break };
                if b.old.contains(&g) {
                    continue;
                }
                b.old.insert(g);
                match self.arena.kind(g) {
                    Kind::Or(v) => {
                        if v.iter().any(|c| b.old.contains(c)) {
                            continue;
                        }
                        let live: Vec<NodeId> = v
                            .iter()
                            .copied()
                            .filter(|&c| peval(self.arena, c, &b.lits) != Some(false))
                            .collect();
                        for &c in live.iter().rev() {
                            let mut nb = b.clone();
                            nb.todo.push(c);
                            stack.push(nb);
                        }
                        continue 'branches;
                    }
                    Kind::Until(x, y) => {
                        if b.old.contains(y) {
                            continue;
                        }
                        let mut later = b.clone();
                        if *x != TRUE {
                            later.todo.push(*x);
                        }
                        later.next.insert(g);
                        later.postponed.push(g);
                        stack.push(later);
                        b.todo.push(*y);
                    }
                    Kind::Release(x, y) => {
                        if b.old.contains(x) && b.old.contains(y) {
                            continue;
                        }
                        let mut later = b.clone();
                        later.todo.push(*y);
                        later.next.insert(g);
                        stack.push(later);
                        b.todo.push(*x);
                        b.todo.push(*y);
                    }
                    _ => unreachable!(),
                }
            }
            // propositional leftovers
            let mut clauses = Vec::new();
            for &c in &b.deferred {
                match peval(self.arena, c, &b.lits) {
                    Some(true) => {}
                    Some(false) => continue 'branches,
                    None => clauses.push(c),
                }
            }
            clauses.sort_unstable();
            clauses.dedup();
            if !clauses.is_empty() {
                let mut asg: HashMap<Atom, bool> = b.lits.iter().map(|(a, v)| (*a, *v)).collect();
                if !prop_solve(self.arena, &mut asg, &clauses) {
                    continue;
                }
            }
            let mut acc = vec![u64::MAX; self.words].into_boxed_slice();
            for u in &b.postponed {
                let i = self.until_index[u];
                acc[i / 64] &= !(1u64 << (i % 64));
            }
            let label = Label { lits: b.lits.into_iter().collect(), clauses };
            let next: Box<[NodeId]> = b.next.into_iter().collect();
            if seen.insert((label.clone(), (next.clone(), acc.clone()))) {
                out.push(Expansion { label, next, acc });
            }
        }
        Ok(out)
    }
}

const BRANCHES_PER_STATE: usize = 64;

pub fn build_buchi(f: &Ltl) -> Result<BuchiAutomaton, LtlError> {
    build_buchi_with_cap(f, DEFAULT_STATE_CAP)
}

struct Builder {
    states: Vec<State>,
    labels: Vec<Label>,
    label_ids: HashMap<Label, u32>,
    index: HashMap<StateKey, u32>,
    cap: usize,
}

impl Builder {
    fn edge(&mut self, e: Expansion) -> Result<(u32, u32), LtlError> {
        let l = match self.label_ids.get(&e.label) {
            Some(&l) => l,
            None => {
                let l = self.labels.len() as u32;
                self.labels.push(e.label.clone());
                self.label_ids.insert(e.label, l);
                l
            }
        };
        let key = (e.next, e.acc);
        if let Some(&id) = self.index.get(&key) {
            return Ok((id, l));
        }
        if self.states.len() >= self.cap {
            return Err(LtlError::StateCap(self.cap));
        }
        let id = self.states.len() as u32;
        self.states.push(State { next: key.0.clone(), acc: key.1.clone(), succ: Vec::new() });
        self.index.insert(key, id);
        Ok((id, l))
    }

    fn edges(&mut self, exps: Vec<Expansion>) -> Result<Vec<(u32, u32)>, LtlError> {
        let mut out = Vec::new();
        for e in exps {
            let edge = self.edge(e)?;
            if !out.contains(&edge) {
                out.push(edge);
            }
        }
        Ok(out)
    }
}

pub fn build_buchi_with_cap(f: &Ltl, cap: usize) -> Result<BuchiAutomaton, LtlError> {
    let mut arena = Arena::new();
    let root = arena.add(f, false);
    let mut until_index = HashMap::new();
    for id in arena.reachable(root) {
        if let Kind::Until(..) = arena.kind(id) {
            let n = until_index.len();
            until_index.insert(id, n);
        }
    }
    let acc_count = until_index.len();
    let words = acc_count.div_ceil(64).max(1);
    let budget = std::cell::Cell::new(cap.saturating_mul(BRANCHES_PER_STATE));
    let ex = Expander { arena: &arena, until_index: &until_index, words, budget, cap };
    let mut b = Builder {
        states: Vec::new(),
        labels: Vec::new(),
        label_ids: HashMap::new(),
        index: HashMap::new(),
        cap,
    };
    let mut succ_cache: HashMap<Box<[NodeId]>, Vec<(u32, u32)>> = HashMap::new();
    let initial = b.edges(ex.expand(&[root])?)?;
    let mut i = 0;
    while i < b.states.len() {
        let next = b.states[i].next.clone();
        let succ = match succ_cache.get(&next) {
            Some(s) => s.clone(),
            None => {
                let s = b.edges(ex.expand(&next)?)?;
                succ_cache.insert(next, s.clone());
                s
            }
        };
        b.states[i].succ = succ;
        i += 1;
    }

    let mut aut = BuchiAutomaton {
        arena,
        states: b.states,
        labels: b.labels,
        initial,
        acc_count,
        atoms: f.atoms(),
        accepting: Vec::new(),
        scc_of: Vec::new(),
    };
    aut.analyse();
    Ok(aut)
}

type Step = (u32, u32);

impl BuchiAutomaton {
    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn transition_count(&self) -> usize {
        self.states.iter().map(|s| s.succ.len()).sum()
    }

    pub fn initial_count(&self) -> usize {
        self.initial.len()
    }

    pub fn acceptance_sets(&self) -> usize {
        self.acc_count
    }

    fn has_bit(&self, s: u32, i: usize) -> bool {
        self.states[s as usize].acc[i / 64] >> (i % 64) & 1 == 1
    }

    /// Tarjan's algorithm, iterative; marks states in accepting SCCs.
    fn analyse(&mut self) {
        let n = self.states.len();
        let mut idx = vec![u32::MAX; n];
        let mut low = vec![0u32; n];
        let mut on = vec![false; n];
        let mut stack: Vec<u32> = Vec::new();
        let mut scc_of = vec![u32::MAX; n];
        let mut counter = 0u32;
        let mut sccs = 0u32;
        let mut accepting = vec![false; n];
        for root in 0..n as u32 {
            if idx[root as usize] != u32::MAX {
                continue;
            }
            let mut call: Vec<(u32, usize)> = vec![(root, 0)];
            idx[root as usize] = counter;
            low[root as usize] = counter;
            counter += 1;
            stack.push(root);
            on[root as usize] = true;
            while let Some(&mut (v, ref mut pos)) = call.last_mut() {
                let succ = &self.states[v as usize].succ;
                if *pos < succ.len() {
                    let w = succ[*pos].0;
                    *pos += 1;
                    if idx[w as usize] == u32::MAX {
                        idx[w as usize] = counter;
                        low[w as usize] = counter;
                        counter += 1;
                        stack.push(w);
                        on[w as usize] = true;
                        call.push((w, 0));
                    } else if on[w as usize] {
                        low[v as usize] = low[v as usize].min(idx[w as usize]);
                    }
                    continue;
                }
                call.pop();
                if let Some(&(u, _)) = call.last() {
                    low[u as usize] = low[u as usize].min(low[v as usize]);
                }
                if low[v as usize] == idx[v as usize] {
                    let mut members = Vec::new();
                    loop {
                        let w = stack.pop().unwrap();
                        on[w as usize] = false;
                        scc_of[w as usize] = sccs;
                        members.push(w);
                        if w == v {
                            break;
                        }
                    }
                    let nontrivial = members.len() > 1
                        || self.states[v as usize].succ.iter().any(|&(w, _)| w == v);
                    let covers = (0..self.acc_count)
                        .all(|i| members.iter().any(|&m| self.has_bit(m, i)));
                    if nontrivial && covers {
                        for &m in &members {
                            accepting[m as usize] = true;
                        }
                    }
                    sccs += 1;
                }
            }
        }
        self.accepting = accepting;
        self.scc_of = scc_of;
    }

    pub fn is_empty(&self) -> bool {
        !self.accepting.iter().any(|&a| a)
    }

    /// Breadth-first search over edges admitted by `edge_ok`. Returns the steps
    /// taken, starting with one of `from`.
    fn bfs(
        &self,
        from: &[Step],
        target: impl Fn(u32) -> bool,
        edge_ok: impl Fn(u32, Step) -> bool,
    ) -> Option<Vec<Step>> {
        let mut parent: HashMap<u32, (u32, u32)> = HashMap::new();
        let mut q = VecDeque::new();
        for &(s, l) in from {
            if parent.contains_key(&s) {
                continue;
            }
            parent.insert(s, (u32::MAX, l));
            if target(s) {
                return Some(vec![(s, l)]);
            }
            q.push_back(s);
        }
        while let Some(v) = q.pop_front() {
            for &(w, l) in &self.states[v as usize].succ {
                if parent.contains_key(&w) || !edge_ok(v, (w, l)) {
                    continue;
                }
                parent.insert(w, (v, l));
                if target(w) {
                    let mut path = vec![(w, l)];
                    let mut cur = v;
                    while cur != u32::MAX {
                        let (p, l) = parent[&cur];
                        path.push((cur, l));
                        cur = p;
                    }
                    path.reverse();
                    return Some(path);
                }
                q.push_back(w);
            }
        }
        None
    }

    /// Shortest walk from `s` back to `s` over admitted edges, at least one step.
    fn cycle_through(&self, s: u32, edge_ok: impl Fn(u32, Step) -> bool + Copy) -> Option<Vec<Step>> {
        let starts: Vec<Step> =
            self.states[s as usize].succ.iter().copied().filter(|&e| edge_ok(s, e)).collect();
        if let Some(&e) = starts.iter().find(|e| e.0 == s) {
            return Some(vec![e]);
        }
        self.bfs(&starts, |w| w == s, edge_ok)
    }

    pub(crate) fn letter(&self, l: u32) -> BTreeSet<Atom> {
        let label = &self.labels[l as usize];
        let mut asg: HashMap<Atom, bool> = label.lits.iter().copied().collect();
        let ok = prop_solve(&self.arena, &mut asg, &label.clauses);
        debug_assert!(ok);
        asg.into_iter().filter(|&(_, v)| v).map(|(a, _)| a).collect()
    }

    /// An accepted ultimately periodic word, if the language is nonempty.
    pub fn accepting_lasso(&self) -> Option<LassoWord> {
        let stem = self.bfs(&self.initial, |s| self.accepting[s as usize], |_, _| true)?;
        let entry = stem.last().unwrap().0;
        let scc = self.scc_of[entry as usize];
        let inside = |_: u32, (w, _): Step| self.scc_of[w as usize] == scc;
        let mut cycle: Vec<Step> = Vec::new();
        let mut cur = entry;
        for i in 0..self.acc_count {
            if self.has_bit(entry, i) || cycle.iter().any(|&(s, _)| self.has_bit(s, i)) {
                continue;
            }
            let succ: Vec<Step> = self.states[cur as usize].succ.iter().copied().filter(|&e| inside(cur, e)).collect();
            let leg = self.bfs(&succ, |w| self.has_bit(w, i), inside)?;
            cur = leg.last().unwrap().0;
            cycle.extend(leg);
        }
        if cur != entry || cycle.is_empty() {
            let succ: Vec<Step> = self.states[cur as usize].succ.iter().copied().filter(|&e| inside(cur, e)).collect();
            let back = if let Some(&e) = succ.iter().find(|e| e.0 == entry) {
                vec![e]
            } else {
                self.bfs(&succ, |w| w == entry, inside)?
            };
            cycle.extend(back);
        }
        let prefix = stem.iter().map(|&(_, l)| self.letter(l)).collect();
        let lp = cycle.iter().map(|&(_, l)| self.letter(l)).collect();
        Some(LassoWord::new(self.atoms.clone(), prefix, lp))
    }

    /// States from which an accepting cycle is reachable.
    pub fn live_states(&self) -> Vec<bool> {
        let n = self.states.len();
        let mut pred: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (v, s) in self.states.iter().enumerate() {
            for &(w, _) in &s.succ {
                pred[w as usize].push(v as u32);
            }
        }
        let mut live = self.accepting.clone();
        let mut q: VecDeque<u32> = (0..n as u32).filter(|&s| live[s as usize]).collect();
        while let Some(w) = q.pop_front() {
            for &v in &pred[w as usize] {
                if !live[v as usize] {
                    live[v as usize] = true;
                    q.push_back(v);
                }
            }
        }
        live
    }

    /// Whether some letter satisfying label `l` agrees with `lits`.
    fn label_admits(&self, l: u32, lits: &[(Atom, bool)]) -> bool {
        let label = &self.labels[l as usize];
        let mut asg: HashMap<Atom, bool> = label.lits.iter().copied().collect();
        for &(a, v) in lits {
            if asg.insert(a, v) == Some(!v) {
                return false;
            }
        }
        prop_solve(&self.arena, &mut asg, &label.clauses)
    }

    /// Length of a shortest cycle through live states whose letters can all
    /// agree with `lits`.
    pub fn shortest_cycle_admitting(&self, lits: &[(Atom, bool)]) -> Option<usize> {
        let live = self.live_states();
        let ok_label: Vec<bool> = (0..self.labels.len() as u32).map(|l| self.label_admits(l, lits)).collect();
        let edge_ok = |v: u32, (w, l): Step| live[v as usize] && live[w as usize] && ok_label[l as usize];
        let mut best: Option<usize> = None;
        for s in 0..self.states.len() as u32 {
            if !live[s as usize] {
                continue;
            }
            if let Some(c) = self.cycle_through(s, edge_ok) {
                best = Some(best.map_or(c.len(), |b| b.min(c.len())));
                if best == Some(1) {
                    break;
                }
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::{lasso_check, parse_ltl};

    fn aut(s: &str) -> BuchiAutomaton {
        build_buchi(&parse_ltl(s).unwrap()).unwrap()
    }

    #[test]
    fn false_is_empty() {
        assert!(aut("false").is_empty());
    }

    #[test]
    fn always_a() {
        let a = aut("G a");
        assert!(!a.is_empty());
        let w = a.accepting_lasso().unwrap();
        assert!(w.cycle.iter().all(|l| l.contains(&Atom::new("a"))));
        assert_eq!(a.shortest_cycle_admitting(&[(Atom::new("a"), true)]), Some(1));
        assert_eq!(a.shortest_cycle_admitting(&[(Atom::new("a"), false)]), None);
    }

    #[test]
    fn contradiction_empty() {
        assert!(aut("F a & G !a").is_empty());
        assert!(aut("G F a & F G !a").is_empty());
        assert!(aut("(a U b) & G !b").is_empty());
    }

    #[test]
    fn lassos_check() {
        for s in [
            "a U b",
            "G F a & G F !a",
            "G (a -> X !a) & G (!a -> X a)",
            "F G a & X X X !a",
            "(a U (b & X c)) & G (c -> F a)",
            "!(a U b) & F b",
            "G (a | b) & G F !a & G F !b",
        ] {
            let f = parse_ltl(s).unwrap();
            let a = build_buchi(&f).unwrap();
            let w = a.accepting_lasso().expect(s);
            assert_eq!(lasso_check(&w, &f), Ok(true), "{s}: {w:?}");
        }
    }

    #[test]
    fn state_cap() {
        let f = parse_ltl("X X X X X a").unwrap();
        assert!(matches!(build_buchi_with_cap(&f, 3), Err(LtlError::StateCap(3))));
    }
}
