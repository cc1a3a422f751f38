//! Propositional LTL: formulas, automata, satisfiability and lasso evaluation.

mod lasso;
mod nnf;
mod sat;
mod tableau;
mod text;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, LazyLock, RwLock};

pub use lasso::{lasso_check, LassoWord};
pub use sat::{ltl_sat, ltl_sat_direct, Verdict};
pub use tableau::{build_buchi, build_buchi_with_cap, BuchiAutomaton, DEFAULT_STATE_CAP};
pub use text::{parse_ltl, to_text};

/// Interned proposition.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom(u32);

#[derive(Default)]
struct Interner {
    names: Vec<Arc<str>>,
    ids: HashMap<Arc<str>, u32>,
}

static INTERNER: LazyLock<RwLock<Interner>> = LazyLock::new(Default::default);

impl Atom {
    pub fn new(name: &str) -> Atom {
        if let Some(&id) = INTERNER.read().unwrap().ids.get(name) {
            return Atom(id);
        }
        let mut w = INTERNER.write().unwrap();
        if let Some(&id) = w.ids.get(name) {
            return Atom(id);
        }
        let id = w.names.len() as u32;
        let s: Arc<str> = name.into();
        w.names.push(s.clone());
        w.ids.insert(s, id);
        Atom(id)
    }

    pub fn name(self) -> Arc<str> {
        INTERNER.read().unwrap().names[self.0 as usize].clone()
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ltl {
    True,
    False,
    Prop(Atom),
    Not(Box<Ltl>),
    And(Vec<Ltl>),
    Or(Vec<Ltl>),
    Next(Box<Ltl>),
    Eventually(Box<Ltl>),
    Always(Box<Ltl>),
    Until(Box<Ltl>, Box<Ltl>),
}

impl Ltl {
    pub fn prop(name: &str) -> Ltl {
        Ltl::Prop(Atom::new(name))
    }
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Ltl) -> Ltl {
        Ltl::Not(Box::new(f))
    }
    pub fn next(f: Ltl) -> Ltl {
        Ltl::Next(Box::new(f))
    }
    pub fn next_n(f: Ltl, n: u32) -> Ltl {
        (0..n).fold(f, |f, _| Ltl::next(f))
    }
    pub fn eventually(f: Ltl) -> Ltl {
        Ltl::Eventually(Box::new(f))
    }
    pub fn always(f: Ltl) -> Ltl {
        Ltl::Always(Box::new(f))
    }
    pub fn until(a: Ltl, b: Ltl) -> Ltl {
        Ltl::Until(Box::new(a), Box::new(b))
    }
    pub fn implies(a: Ltl, b: Ltl) -> Ltl {
        Ltl::Or(vec![Ltl::not(a), b])
    }

    /// Conjunction, flattening nested conjunctions.
    pub fn and(items: impl IntoIterator<Item = Ltl>) -> Ltl {
        let mut out = Vec::new();
        for f in items {
            match f {
                Ltl::And(v) => out.extend(v),
                Ltl::True => {}
                f => out.push(f),
            }
        }
        match out.len() {
            0 => Ltl::True,
            1 => out.pop().unwrap(),
            _ => Ltl::And(out),
        }
    }

    pub fn children(&self) -> Vec<&Ltl> {
        match self {
            Ltl::True | Ltl::False | Ltl::Prop(_) => vec![],
            Ltl::Not(f) | Ltl::Next(f) | Ltl::Eventually(f) | Ltl::Always(f) => vec![f],
            Ltl::And(v) | Ltl::Or(v) => v.iter().collect(),
            Ltl::Until(a, b) => vec![a, b],
        }
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            if let Ltl::Prop(a) = f {
                out.insert(*a);
            }
            stack.extend(f.children());
        }
        out
    }

    /// Number of nodes in the syntax tree.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    pub fn substitute(&self, map: &HashMap<Atom, Ltl>) -> Ltl {
        let rec = |f: &Ltl| Box::new(f.substitute(map));
        match self {
            Ltl::Prop(a) => map.get(a).cloned().unwrap_or(Ltl::Prop(*a)),
            Ltl::True | Ltl::False => self.clone(),
            Ltl::Not(f) => Ltl::Not(rec(f)),
            Ltl::Next(f) => Ltl::Next(rec(f)),
            Ltl::Eventually(f) => Ltl::Eventually(rec(f)),
            Ltl::Always(f) => Ltl::Always(rec(f)),
            Ltl::Until(a, b) => Ltl::Until(rec(a), rec(b)),
            Ltl::And(v) => Ltl::And(v.iter().map(|f| f.substitute(map)).collect()),
            Ltl::Or(v) => Ltl::Or(v.iter().map(|f| f.substitute(map)).collect()),
        }
    }
}

impl fmt::Display for Ltl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&to_text(self))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LtlError {
    #[error("automaton exceeds the state cap of {0}")]
    StateCap(usize),
    #[error("unknown atom {0}")]
    UnknownAtom(String),
    #[error("ltl syntax error at offset {0}: {1}")]
    Syntax(usize, String),
}

/// All subformulas of `f`. A negation is folded into its operand, so `¬φ`
/// contributes the members of φ's closure only.
pub fn subformula_closure(f: &Ltl) -> BTreeSet<Ltl> {
    let mut out = BTreeSet::new();
    let mut stack = vec![f];
    while let Some(g) = stack.pop() {
        match g {
            Ltl::Not(inner) => stack.push(inner),
            _ => {
                if out.insert(g.clone()) {
                    stack.extend(g.children());
                }
            }
        }
    }
    out
}
