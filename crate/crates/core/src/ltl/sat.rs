//! Satisfiability front end. Pure literals are fixed, atoms read only at the
//! first position with one polarity are case-split, and the top-level
//! conjunction is broken into independent components before any automaton is
//! built.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::LazyLock;

use num_integer::Integer;

use super::lasso::LassoWord;
use super::tableau::build_buchi;
use super::{Atom, Ltl, LtlError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Sat(LassoWord),
    Unsat,
}

impl Verdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, Verdict::Sat(_))
    }

    pub fn witness(&self) -> Option<&LassoWord> {
        match self {
            Verdict::Sat(w) => Some(w),
            Verdict::Unsat => None,
        }
    }
}

const MAX_SPLITS: usize = 12;

static INIT: LazyLock<Atom> = LazyLock::new(|| Atom::new("#init"));

/// Plain tableau emptiness check, no preprocessing.
pub fn ltl_sat_direct(f: &Ltl) -> Result<Verdict, LtlError> {
    let aut = build_buchi(f)?;
    Ok(match aut.accepting_lasso() {
        Some(mut w) => {
            w.domain = f.atoms();
            Verdict::Sat(w)
        }
        None => Verdict::Unsat,
    })
}

pub fn ltl_sat(f: &Ltl) -> Result<Verdict, LtlError> {
    let mut cache = HashMap::new();
    let Some(mut w) = solve(simp(f), 0, &mut cache)? else { return Ok(Verdict::Unsat) };
    let init = *INIT;
    w.domain = f.atoms();
    for l in w.prefix.iter_mut().chain(w.cycle.iter_mut()) {
        l.remove(&init);
        l.retain(|a| w.domain.contains(a));
    }
    Ok(Verdict::Sat(w))
}

#[derive(Clone, Copy)]
enum Fill {
    Always,
    Never,
    AfterFirst,
    FirstOnly,
}

type Cache = HashMap<Ltl, Option<LassoWord>>;

fn empty_word() -> LassoWord {
    LassoWord::new(BTreeSet::new(), Vec::new(), vec![BTreeSet::new()])
}

fn init_constraint() -> Ltl {
    let i = Ltl::Prop(*INIT);
    Ltl::and([i.clone(), Ltl::next(Ltl::always(Ltl::not(i)))])
}

fn solve(f: Ltl, splits: usize, cache: &mut Cache) -> Result<Option<LassoWord>, LtlError> {
    if let Some(r) = cache.get(&f) {
        return Ok(r.clone());
    }
    let r = solve_uncached(&f, splits, cache)?;
    cache.insert(f, r.clone());
    Ok(r)
}

fn solve_uncached(f: &Ltl, splits: usize, cache: &mut Cache) -> Result<Option<LassoWord>, LtlError> {
    let mut f = f.clone();
    let mut fills: Vec<(Atom, Fill)> = Vec::new();
    loop {
        match f {
            Ltl::True => return Ok(Some(apply_fills(empty_word(), &fills))),
            Ltl::False => return Ok(None),
            _ => {}
        }
        let occ = occurrences(&f);
        let mut map = HashMap::new();
        for (&a, o) in &occ {
            if o.neg_top + o.neg_deep == 0 {
                map.insert(a, Ltl::True);
                fills.push((a, Fill::Always));
            } else if o.pos_top + o.pos_deep == 0 {
                map.insert(a, Ltl::False);
                fills.push((a, Fill::Never));
            }
        }
        if map.is_empty() {
            break;
        }
        f = simp(&f.substitute(&map));
    }

    let comps = components(&f);
    if comps.len() > 1 {
        let mut words = Vec::new();
        for c in comps {
            match solve(c, splits, cache)? {
                Some(w) => words.push(w),
                None => return Ok(None),
            }
        }
        return Ok(Some(apply_fills(merge(words), &fills)));
    }

    if splits < MAX_SPLITS {
        if let Some((p, neg_top_only)) = split_candidate(&f) {
            let i = Ltl::Prop(*INIT);
            let (a, fa, b, fb) = if neg_top_only {
                (Ltl::True, Fill::Always, Ltl::not(i), Fill::AfterFirst)
            } else {
                (Ltl::False, Fill::Never, i, Fill::FirstOnly)
            };
            let fa_f = simp(&f.substitute(&HashMap::from([(p, a)])));
            if let Some(w) = solve(fa_f, splits + 1, cache)? {
                fills.push((p, fa));
                return Ok(Some(apply_fills(w, &fills)));
            }
            let fb_f = simp(&Ltl::and([f.substitute(&HashMap::from([(p, b)])), init_constraint()]));
            if let Some(w) = solve(fb_f, splits + 1, cache)? {
                fills.push((p, fb));
                return Ok(Some(apply_fills(w, &fills)));
            }
            return Ok(None);
        }
    }

    Ok(match ltl_sat_direct(&f)? {
        Verdict::Sat(w) => Some(apply_fills(w, &fills)),
        Verdict::Unsat => None,
    })
}

#[derive(Default, Debug)]
struct Occ {
    pos_top: usize,
    pos_deep: usize,
    neg_top: usize,
    neg_deep: usize,
    /// Number of top-level conjuncts mentioning the atom.
    conjuncts: usize,
}

fn occurrences(f: &Ltl) -> BTreeMap<Atom, Occ> {
    fn walk(f: &Ltl, neg: bool, deep: bool, out: &mut BTreeMap<Atom, Occ>) {
        match f {
            Ltl::True | Ltl::False => {}
            Ltl::Prop(a) if *a == *INIT => {}
            Ltl::Prop(a) => {
                let o = out.entry(*a).or_default();
                match (neg, deep) {
                    (false, false) => o.pos_top += 1,
                    (false, true) => o.pos_deep += 1,
                    (true, false) => o.neg_top += 1,
                    (true, true) => o.neg_deep += 1,
                }
            }
            Ltl::Not(g) => walk(g, !neg, deep, out),
            Ltl::And(v) | Ltl::Or(v) => v.iter().for_each(|g| walk(g, neg, deep, out)),
            Ltl::Next(g) | Ltl::Eventually(g) | Ltl::Always(g) => walk(g, neg, true, out),
            Ltl::Until(a, b) => {
                walk(a, neg, true, out);
                walk(b, neg, true, out);
            }
        }
    }
    let mut out = BTreeMap::new();
    walk(f, false, false, &mut out);
    for c in conjuncts(f) {
        for a in c.atoms() {
            if let Some(o) = out.get_mut(&a) {
                o.conjuncts += 1;
            }
        }
    }
    out
}

/// An atom joining several conjuncts whose occurrences of one polarity are all
/// read at the first position. The flag is true when that polarity is negative.
fn split_candidate(f: &Ltl) -> Option<(Atom, bool)> {
    occurrences(f)
        .into_iter()
        .filter(|(_, o)| o.conjuncts >= 2)
        .filter_map(|(a, o)| {
            if o.neg_deep == 0 {
                Some((o.conjuncts, a, true))
            } else if o.pos_deep == 0 {
                Some((o.conjuncts, a, false))
            } else {
                None
            }
        })
        .max_by_key(|&(n, a, _)| (n, std::cmp::Reverse(a)))
        .map(|(_, a, neg)| (a, neg))
}

fn conjuncts(f: &Ltl) -> Vec<&Ltl> {
    match f {
        Ltl::And(v) => v.iter().collect(),
        f => vec![f],
    }
}

/// Connected components of the top-level conjuncts, linked by shared atoms.
/// The first-position marker does not link; conjuncts over it alone join
/// every component that mentions it.
fn components(f: &Ltl) -> Vec<Ltl> {
    let init = *INIT;
    let cs = conjuncts(f);
    let atoms: Vec<BTreeSet<Atom>> = cs.iter().map(|c| c.atoms()).collect();
    let mut parent: Vec<usize> = (0..cs.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let n = p[y];
            p[y] = r;
            y = n;
        }
        r
    }
    let mut owner: HashMap<Atom, usize> = HashMap::new();
    let mut init_only = Vec::new();
    for (i, s) in atoms.iter().enumerate() {
        if s.iter().all(|&a| a == init) {
            init_only.push(i);
            continue;
        }
        for &a in s.iter().filter(|&&a| a != init) {
            match owner.get(&a) {
                Some(&j) => {
                    let (x, y) = (find(&mut parent, i), find(&mut parent, j));
                    parent[x] = y;
                }
                None => {
                    owner.insert(a, i);
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..cs.len() {
        if !init_only.contains(&i) {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().push(i);
        }
    }
    let mut out = Vec::new();
    let mut init_used = false;
    for members in groups.values() {
        let mut parts: Vec<Ltl> = members.iter().map(|&i| cs[i].clone()).collect();
        if members.iter().any(|&i| atoms[i].contains(&init)) {
            init_used = true;
            parts.extend(init_only.iter().map(|&i| cs[i].clone()));
            parts.push(init_constraint());
        }
        out.push(simp(&Ltl::and(parts)));
    }
    if !init_used && !init_only.is_empty() {
        let parts = init_only.iter().map(|&i| cs[i].clone());
        out.push(simp(&Ltl::and(parts)));
    }
    out
}

fn merge(words: Vec<LassoWord>) -> LassoWord {
    let pre = words.iter().map(|w| w.prefix.len()).max().unwrap_or(0);
    let lp = words.iter().map(|w| w.cycle.len()).fold(1, |a, b| a.lcm(&b));
    let mut out = LassoWord::new(BTreeSet::new(), vec![BTreeSet::new(); pre], vec![BTreeSet::new(); lp]);
    for w in words {
        let r = w.reshape(pre, lp);
        out.domain.extend(r.domain);
        for (a, b) in out.prefix.iter_mut().zip(r.prefix) {
            a.extend(b);
        }
        for (a, b) in out.cycle.iter_mut().zip(r.cycle) {
            a.extend(b);
        }
    }
    out
}

fn apply_fills(mut w: LassoWord, fills: &[(Atom, Fill)]) -> LassoWord {
    if fills.is_empty() {
        return w;
    }
    if w.prefix.is_empty() && fills.iter().any(|(_, f)| matches!(f, Fill::AfterFirst | Fill::FirstOnly)) {
        w = w.reshape(1, w.cycle.len());
    }
    for &(a, fill) in fills {
        w.domain.insert(a);
        for (i, l) in w.prefix.iter_mut().chain(w.cycle.iter_mut()).enumerate() {
            let on = match fill {
                Fill::Always => true,
                Fill::Never => false,
                Fill::AfterFirst => i > 0,
                Fill::FirstOnly => i == 0,
            };
            if on {
                l.insert(a);
            } else {
                l.remove(&a);
            }
        }
    }
    w
}

/// Constant folding and flattening.
pub(crate) fn simp(f: &Ltl) -> Ltl {
    match f {
        Ltl::True | Ltl::False | Ltl::Prop(_) => f.clone(),
        Ltl::Not(g) => match simp(g) {
            Ltl::True => Ltl::False,
            Ltl::False => Ltl::True,
            Ltl::Not(h) => *h,
            g => Ltl::not(g),
        },
        Ltl::And(v) | Ltl::Or(v) => {
            let conj = matches!(f, Ltl::And(_));
            let (unit, zero) = if conj { (Ltl::True, Ltl::False) } else { (Ltl::False, Ltl::True) };
            let mut out: Vec<Ltl> = Vec::new();
            let push = |g: Ltl, out: &mut Vec<Ltl>| -> bool {
                if g == zero {
                    return false;
                }
                if g != unit && !out.contains(&g) {
                    out.push(g);
                }
                true
            };
            for g in v {
                let g = simp(g);
                let items = match g {
                    Ltl::And(w) if conj => w,
                    Ltl::Or(w) if !conj => w,
                    g => vec![g],
                };
                for h in items {
                    if !push(h, &mut out) {
                        return zero;
                    }
                }
            }
            if out.iter().any(|g| matches!(g, Ltl::Not(h) if out.contains(h))) {
                return zero;
            }
            match out.len() {
                0 => unit,
                1 => out.pop().unwrap(),
                _ if conj => Ltl::And(out),
                _ => Ltl::Or(out),
            }
        }
        Ltl::Next(g) => match simp(g) {
            c @ (Ltl::True | Ltl::False) => c,
            g => Ltl::next(g),
        },
        Ltl::Eventually(g) => match simp(g) {
            c @ (Ltl::True | Ltl::False) => c,
            g => Ltl::eventually(g),
        },
        Ltl::Always(g) => match simp(g) {
            c @ (Ltl::True | Ltl::False) => c,
            g => Ltl::always(g),
        },
        Ltl::Until(a, b) => match (simp(a), simp(b)) {
            (_, c @ (Ltl::True | Ltl::False)) => c,
            (Ltl::False, b) => b,
            (Ltl::True, b) => Ltl::eventually(b),
            (a, b) => Ltl::until(a, b),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::{lasso_check, parse_ltl};

    fn agree(s: &str) {
        let f = parse_ltl(s).unwrap();
        let a = ltl_sat(&f).unwrap();
        let b = ltl_sat_direct(&f).unwrap();
        assert_eq!(a.is_sat(), b.is_sat(), "{s}");
        for v in [a, b] {
            if let Verdict::Sat(w) = v {
                assert!(lasso_check(&w, &f).unwrap(), "{s}: {w:?}");
            }
        }
    }

    #[test]
    fn preprocessing_agrees_with_tableau() {
        for s in [
            "a",
            "a & !a",
            "G a & F !a",
            "(p -> q) & G (F r -> G p) & F r & G !q",
            "(p -> q) & G (F r -> G p) & F r",
            "(p -> q) & G (F r -> G p) & (p -> s) & G (F t -> G p) & F t & G !s",
            "!p & X p & G (a -> p)",
            "(p -> q) & G (X a -> G p) & F a & !q & G (b -> X p)",
            "p & G (p -> X !p) & F (c & !p)",
            "(x | y) & G (F z -> G !x) & F z & !y",
            "a U b & G !b",
            "G F a & G F !a & (b -> c) & G (a -> X b) & !c",
        ] {
            agree(s);
        }
    }

    #[test]
    fn independent_components() {
        let parts: Vec<String> = (0..12).map(|i| format!("G F a{i} & G F !a{i} & G (a{i} -> X !a{i})")).collect();
        let f = parse_ltl(&parts.join(" & ")).unwrap();
        let v = ltl_sat(&f).unwrap();
        assert!(lasso_check(v.witness().unwrap(), &f).unwrap());
    }

    #[test]
    fn folding() {
        let f = parse_ltl("(a | true) & X (false U b) & !!c").unwrap();
        assert_eq!(simp(&f), parse_ltl("X b & c").unwrap());
    }
}
