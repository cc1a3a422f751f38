//! Hash-consed negation normal form.

use std::collections::HashMap;

use super::{Atom, Ltl};

pub(crate) type NodeId = u32;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Kind {
    True,
    False,
    Lit(Atom, bool),
    And(Vec<NodeId>),
    Or(Vec<NodeId>),
    Next(NodeId),
    Until(NodeId, NodeId),
    Release(NodeId, NodeId),
}

pub(crate) const TRUE: NodeId = 0;
pub(crate) const FALSE: NodeId = 1;

pub(crate) struct Arena {
    pub nodes: Vec<Kind>,
    index: HashMap<Kind, NodeId>,
    /// Node contains no temporal operator.
    pub prop: Vec<bool>,
}

impl Arena {
    pub fn new() -> Arena {
        let mut a = Arena { nodes: Vec::new(), index: HashMap::new(), prop: Vec::new() };
        a.intern(Kind::True);
        a.intern(Kind::False);
        a
    }

    pub fn kind(&self, id: NodeId) -> &Kind {
        &self.nodes[id as usize]
    }

    fn intern(&mut self, k: Kind) -> NodeId {
        if let Some(&id) = self.index.get(&k) {
            return id;
        }
        let prop = match &k {
            Kind::True | Kind::False | Kind::Lit(..) => true,
            Kind::And(v) | Kind::Or(v) => v.iter().all(|&c| self.prop[c as usize]),
            _ => false,
        };
        let id = self.nodes.len() as NodeId;
        self.nodes.push(k.clone());
        self.prop.push(prop);
        self.index.insert(k, id);
        id
    }

    pub fn lit(&mut self, a: Atom, pos: bool) -> NodeId {
        self.intern(Kind::Lit(a, pos))
    }

    fn negate_id(&self, id: NodeId) -> Option<NodeId> {
        match self.kind(id) {
            Kind::True => Some(FALSE),
            Kind::False => Some(TRUE),
            Kind::Lit(a, p) => self.index.get(&Kind::Lit(*a, !p)).copied(),
            _ => None,
        }
    }

    fn junction(&mut self, conj: bool, items: Vec<NodeId>) -> NodeId {
        let (unit, zero) = if conj { (TRUE, FALSE) } else { (FALSE, TRUE) };
        let mut out = Vec::new();
        for id in items {
            match self.kind(id) {
                Kind::And(v) if conj => out.extend(v.iter().copied()),
                Kind::Or(v) if !conj => out.extend(v.iter().copied()),
                _ if id == unit => {}
                _ if id == zero => return zero,
                _ => out.push(id),
            }
        }
        out.sort_unstable();
        out.dedup();
        for &id in &out {
            if let Some(n) = self.negate_id(id) {
                if out.binary_search(&n).is_ok() {
                    return zero;
                }
            }
        }
        match out.len() {
            0 => unit,
            1 => out[0],
            _ => self.intern(if conj { Kind::And(out) } else { Kind::Or(out) }),
        }
    }

    pub fn and(&mut self, items: Vec<NodeId>) -> NodeId {
        self.junction(true, items)
    }
    pub fn or(&mut self, items: Vec<NodeId>) -> NodeId {
        self.junction(false, items)
    }

    pub fn next(&mut self, a: NodeId) -> NodeId {
        if a == TRUE || a == FALSE {
            return a;
        }
        self.intern(Kind::Next(a))
    }

    pub fn until(&mut self, a: NodeId, b: NodeId) -> NodeId {
        if b == TRUE || b == FALSE || a == FALSE {
            return b;
        }
        self.intern(Kind::Until(a, b))
    }

    pub fn release(&mut self, a: NodeId, b: NodeId) -> NodeId {
        if b == TRUE || b == FALSE || a == TRUE {
            return b;
        }
        self.intern(Kind::Release(a, b))
    }

    /// Adds `f` (negated when `neg`) in negation normal form.
    pub fn add(&mut self, f: &Ltl, neg: bool) -> NodeId {
        match f {
            Ltl::True => if neg { FALSE } else { TRUE },
            Ltl::False => if neg { TRUE } else { FALSE },
            Ltl::Prop(a) => self.lit(*a, !neg),
            Ltl::Not(g) => self.add(g, !neg),
            Ltl::And(v) | Ltl::Or(v) => {
                let ids: Vec<NodeId> = v.iter().map(|g| self.add(g, neg)).collect();
                if matches!(f, Ltl::And(_)) != neg { self.and(ids) } else { self.or(ids) }
            }
            Ltl::Next(g) => {
                let g = self.add(g, neg);
                self.next(g)
            }
            Ltl::Eventually(g) => {
                let g = self.add(g, neg);
                if neg { self.release(FALSE, g) } else { self.until(TRUE, g) }
            }
            Ltl::Always(g) => {
                let g = self.add(g, neg);
                if neg { self.until(TRUE, g) } else { self.release(FALSE, g) }
            }
            Ltl::Until(a, b) => {
                let a = self.add(a, neg);
                let b = self.add(b, neg);
                if neg { self.release(a, b) } else { self.until(a, b) }
            }
        }
    }

    pub fn children(&self, id: NodeId) -> Vec<NodeId> {
        match self.kind(id) {
            Kind::True | Kind::False | Kind::Lit(..) => vec![],
            Kind::And(v) | Kind::Or(v) => v.clone(),
            Kind::Next(a) => vec![*a],
            Kind::Until(a, b) | Kind::Release(a, b) => vec![*a, *b],
        }
    }

    /// Nodes reachable from `root`, in discovery order.
    pub fn reachable(&self, root: NodeId) -> Vec<NodeId> {
        let mut seen = vec![false; self.nodes.len()];
        let mut order = Vec::new();
        let mut stack = vec![root];
        while let Some(id) = stack.pop() {
            if std::mem::replace(&mut seen[id as usize], true) {
                continue;
            }
            order.push(id);
            stack.extend(self.children(id));
        }
        order
    }
}

/// Finds a valuation extending `assign` that makes every goal true. Goals must
/// be propositional. On success `assign` holds the extension.
pub(crate) fn prop_solve(arena: &Arena, assign: &mut HashMap<Atom, bool>, goals: &[NodeId]) -> bool {
    let Some((&g, rest)) = goals.split_first() else { return true };
    match arena.kind(g) {
        Kind::True => prop_solve(arena, assign, rest),
        Kind::False => false,
        Kind::Lit(a, v) => match assign.get(a) {
            Some(x) if x == v => prop_solve(arena, assign, rest),
            Some(_) => false,
            None => {
                assign.insert(*a, *v);
                if prop_solve(arena, assign, rest) {
                    return true;
                }
                assign.remove(a);
                false
            }
        },
        Kind::And(v) => {
            let mut next: Vec<NodeId> = v.clone();
            next.extend_from_slice(rest);
            prop_solve(arena, assign, &next)
        }
        Kind::Or(v) => {
            for &c in v {
                let mut next = vec![c];
                next.extend_from_slice(rest);
                let snapshot = assign.clone();
                if prop_solve(arena, assign, &next) {
                    return true;
                }
                *assign = snapshot;
            }
            false
        }
        _ => unreachable!("temporal node in propositional goal"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplifies() {
        let mut ar = Arena::new();
        let a = Ltl::prop("a");
        let contradiction = Ltl::and([a.clone(), Ltl::not(a.clone())]);
        assert_eq!(ar.add(&contradiction, false), FALSE);
        assert_eq!(ar.add(&contradiction, true), TRUE);
        let f = ar.add(&Ltl::always(a.clone()), false);
        assert!(matches!(ar.kind(f), Kind::Release(FALSE, _)));
        let g = ar.add(&Ltl::not(Ltl::eventually(Ltl::not(a.clone()))), false);
        assert_eq!(f, g);
    }

    #[test]
    fn propositional_solver() {
        let mut ar = Arena::new();
        let f = crate::ltl::parse_ltl("(a | b) & (!a | c) & !c").unwrap();
        let id = ar.add(&f, false);
        let mut asg = HashMap::new();
        assert!(prop_solve(&ar, &mut asg, &[id]));
        assert_eq!(asg.get(&Atom::new("b")), Some(&true));
        let g = crate::ltl::parse_ltl("(a | b) & !a & !b").unwrap();
        let id = ar.add(&g, false);
        assert!(!prop_solve(&ar, &mut HashMap::new(), &[id]));
    }
}
