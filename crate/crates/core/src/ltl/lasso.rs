use std::collections::{BTreeSet, HashMap};
use std::fmt;

use super::{Atom, Ltl, LtlError};

/// The ultimately periodic word `prefix · cycle^ω` over the atoms in `domain`.
#[derive(Clone, PartialEq, Eq)]
pub struct LassoWord {
    pub domain: BTreeSet<Atom>,
    pub prefix: Vec<BTreeSet<Atom>>,
    pub cycle: Vec<BTreeSet<Atom>>,
}

impl LassoWord {
    pub fn new(domain: BTreeSet<Atom>, prefix: Vec<BTreeSet<Atom>>, cycle: Vec<BTreeSet<Atom>>) -> LassoWord {
        assert!(!cycle.is_empty(), "lasso loop must be nonempty");
        LassoWord { domain, prefix, cycle }
    }

    pub fn len(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn letter(&self, i: usize) -> &BTreeSet<Atom> {
        if i < self.prefix.len() {
            &self.prefix[i]
        } else {
            &self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        }
    }

    pub fn holds(&self, a: Atom, i: usize) -> bool {
        self.letter(i).contains(&a)
    }

    /// Same infinite word with a longer prefix and a repeated loop.
    pub fn reshape(&self, prefix_len: usize, loop_len: usize) -> LassoWord {
        assert!(prefix_len >= self.prefix.len() && loop_len.is_multiple_of(self.cycle.len()));
        let prefix = (0..prefix_len).map(|i| self.letter(i).clone()).collect();
        let cycle = (prefix_len..prefix_len + loop_len).map(|i| self.letter(i).clone()).collect();
        LassoWord { domain: self.domain.clone(), prefix, cycle }
    }
}

impl fmt::Debug for LassoWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &Vec<BTreeSet<Atom>>| {
            v.iter()
                .map(|l| format!("{{{}}}", l.iter().map(|a| a.name().to_string()).collect::<Vec<_>>().join(",")))
                .collect::<Vec<_>>()
                .join(" ")
        };
        write!(f, "{} ({})^w", show(&self.prefix), show(&self.cycle))
    }
}

/// Evaluates `f` at position 0 of the word. Positions are folded into the
/// `len()` distinct suffixes of the lasso; fixpoints are iterated to stability.
pub fn lasso_check(w: &LassoWord, f: &Ltl) -> Result<bool, LtlError> {
    for a in f.atoms() {
        if !w.domain.contains(&a) {
            return Err(LtlError::UnknownAtom(a.name().to_string()));
        }
    }
    let n = w.len();
    let succ = |i: usize| if i + 1 < n { i + 1 } else { w.prefix.len() };
    let mut memo: HashMap<*const Ltl, Vec<bool>> = HashMap::new();
    Ok(eval(w, f, n, &succ, &mut memo)[0])
}

fn eval(
    w: &LassoWord,
    f: &Ltl,
    n: usize,
    succ: &dyn Fn(usize) -> usize,
    memo: &mut HashMap<*const Ltl, Vec<bool>>,
) -> Vec<bool> {
    if let Some(v) = memo.get(&(f as *const Ltl)) {
        return v.clone();
    }
    let out = match f {
        Ltl::True => vec![true; n],
        Ltl::False => vec![false; n],
        Ltl::Prop(a) => (0..n).map(|i| w.holds(*a, i)).collect(),
        Ltl::Not(g) => eval(w, g, n, succ, memo).into_iter().map(|b| !b).collect(),
        Ltl::And(v) => {
            let mut acc = vec![true; n];
            for g in v {
                let x = eval(w, g, n, succ, memo);
                acc.iter_mut().zip(x).for_each(|(a, b)| *a &= b);
            }
            acc
        }
        Ltl::Or(v) => {
            let mut acc = vec![false; n];
            for g in v {
                let x = eval(w, g, n, succ, memo);
                acc.iter_mut().zip(x).for_each(|(a, b)| *a |= b);
            }
            acc
        }
        Ltl::Next(g) => {
            let x = eval(w, g, n, succ, memo);
            (0..n).map(|i| x[succ(i)]).collect()
        }
        Ltl::Eventually(g) => {
            let x = eval(w, g, n, succ, memo);
            fixpoint(n, succ, false, |i, nxt| x[i] || nxt)
        }
        Ltl::Always(g) => {
            let x = eval(w, g, n, succ, memo);
            fixpoint(n, succ, true, |i, nxt| x[i] && nxt)
        }
        Ltl::Until(a, b) => {
            let xa = eval(w, a, n, succ, memo);
            let xb = eval(w, b, n, succ, memo);
            fixpoint(n, succ, false, |i, nxt| xb[i] || (xa[i] && nxt))
        }
    };
    memo.insert(f as *const Ltl, out.clone());
    out
}

/// Least (init=false) or greatest (init=true) solution of v[i] = step(i, v[succ i]).
fn fixpoint(n: usize, succ: &dyn Fn(usize) -> usize, init: bool, step: impl Fn(usize, bool) -> bool) -> Vec<bool> {
    let mut v = vec![init; n];
    loop {
        let mut changed = false;
        for i in (0..n).rev() {
            let x = step(i, v[succ(i)]);
            if x != v[i] {
                v[i] = x;
                changed = true;
            }
        }
        if !changed {
            return v;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::parse_ltl;

    fn word(prefix: &[&[&str]], cycle: &[&[&str]]) -> LassoWord {
        let l = |s: &[&str]| s.iter().map(|x| Atom::new(x)).collect::<BTreeSet<_>>();
        let domain = ["a", "b", "c"].iter().map(|x| Atom::new(x)).collect();
        LassoWord::new(domain, prefix.iter().map(|s| l(s)).collect(), cycle.iter().map(|s| l(s)).collect())
    }

    fn check(w: &LassoWord, f: &str) -> bool {
        lasso_check(w, &parse_ltl(f).unwrap()).unwrap()
    }

    #[test]
    fn basics() {
        assert!(check(&word(&[], &[&["a"]]), "G a"));
        assert!(!check(&word(&[&[]], &[&["a"]]), "a"));
        assert!(check(&word(&[&[]], &[&["a"]]), "X a & F G a"));
        assert!(check(&word(&[], &[&["a"], &[]]), "G F a & G F !a & !F G a"));
        assert!(check(&word(&[&["a"], &["a"], &["b"]], &[&[]]), "a U b"));
        assert!(!check(&word(&[&["a"], &[], &["b"]], &[&[]]), "a U b"));
        assert!(!check(&word(&[], &[&["a"]]), "a U b"));
        assert!(check(&word(&[&["b"]], &[&[]]), "a U b"));
    }

    #[test]
    fn non_strict_operators() {
        assert!(check(&word(&[&["a"]], &[&[]]), "F a"));
        assert!(!check(&word(&[&[]], &[&["a"]]), "G a"));
    }

    #[test]
    fn unknown_atom() {
        let w = word(&[], &[&["a"]]);
        let f = parse_ltl("zzz").unwrap();
        assert!(matches!(lasso_check(&w, &f), Err(LtlError::UnknownAtom(_))));
    }

    #[test]
    fn reshape_preserves_word() {
        let w = word(&[&["a"]], &[&["b"], &["c"]]);
        let r = w.reshape(3, 4);
        for i in 0..20 {
            assert_eq!(w.letter(i), r.letter(i));
        }
    }
}
