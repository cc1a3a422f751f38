use std::collections::{BTreeMap, BTreeSet};

use super::fo1::{concept_star, exists_pred, role_prop, role_witness, Fo1, Fo1Conjunct, Fo1Sentence, Term};
use super::ReductionError;
use crate::kb::{AboxAtom, KnowledgeBase, Polarity, Predicate, Rigidity, Role, RoleInclusion};

/// Reflexive-transitive closure of the role inclusions and their inverted mirrors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoleClosure {
    pub relation: BTreeSet<(Role, Role)>,
}

impl RoleClosure {
    pub fn contains(&self, sub: &Role, sup: &Role) -> bool {
        sub == sup || self.relation.contains(&(sub.clone(), sup.clone()))
    }

    pub fn subroles<'a>(&'a self, sup: &'a Role) -> impl Iterator<Item = &'a Role> + 'a {
        self.relation.iter().filter(move |(_, b)| b == sup).map(|(a, _)| a)
    }
}

pub fn role_closure(rbox: &[RoleInclusion], roles: &BTreeSet<Role>) -> RoleClosure {
    let mut nodes: BTreeSet<Role> = roles.clone();
    for ri in rbox {
        for r in [&ri.lhs, &ri.rhs] {
            nodes.insert(r.clone());
            nodes.insert(r.inverse());
        }
    }
    let mut rel: BTreeSet<(Role, Role)> = nodes.iter().map(|r| (r.clone(), r.clone())).collect();
    for ri in rbox {
        rel.insert((ri.lhs.clone(), ri.rhs.clone()));
        rel.insert((ri.lhs.inverse(), ri.rhs.inverse()));
    }
    loop {
        let mut add = Vec::new();
        for (a, b) in &rel {
            for (c, d) in rel.range((b.clone(), Role::new(""))..) {
                if c != b {
                    break;
                }
                if !rel.contains(&(a.clone(), d.clone())) {
                    add.push((a.clone(), d.clone()));
                }
            }
        }
        if add.is_empty() {
            break;
        }
        rel.extend(add);
    }
    RoleClosure { relation: rel }
}

pub type Pair = (String, String);

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AboxSlices {
    pub boxed: BTreeMap<Role, BTreeSet<Pair>>,
    pub timed: BTreeMap<(Role, u32), BTreeSet<Pair>>,
    pub offsets: BTreeSet<u32>,
}

impl AboxSlices {
    pub fn boxed_of(&self, r: &Role) -> BTreeSet<Pair> {
        self.boxed.get(r).cloned().unwrap_or_default()
    }

    pub fn at(&self, r: &Role, n: u32) -> BTreeSet<Pair> {
        self.timed.get(&(r.clone(), n)).cloned().unwrap_or_default()
    }

    /// The union of all boxed slices, tagged by role.
    pub fn boxed_union(&self) -> BTreeSet<(Role, Pair)> {
        self.boxed.iter().flat_map(|(r, s)| s.iter().map(move |p| (r.clone(), p.clone()))).collect()
    }

    pub fn union_at(&self, n: u32) -> BTreeSet<(Role, Pair)> {
        self.timed
            .iter()
            .filter(|((_, m), _)| *m == n)
            .flat_map(|((r, _), s)| s.iter().map(move |p| (r.clone(), p.clone())))
            .collect()
    }
}

fn positive_role_atoms(abox: &[AboxAtom]) -> impl Iterator<Item = (u32, &Role, Pair)> {
    abox.iter().filter(|a| a.polarity == Polarity::Positive).filter_map(|a| match &a.predicate {
        Predicate::Role(r) => Some((a.offset, r, (a.args[0].clone(), a.args[1].clone()))),
        _ => None,
    })
}

pub fn abox_slices(
    abox: &[AboxAtom],
    closure: &RoleClosure,
    rigidity: &BTreeMap<String, Rigidity>,
) -> AboxSlices {
    let rigid = |r: &Role| rigidity.get(&r.name) == Some(&Rigidity::Rigid);
    let roles: BTreeSet<Role> = closure.relation.iter().map(|(a, _)| a.clone()).collect();
    let offsets: BTreeSet<u32> = abox.iter().map(|a| a.offset).collect();
    let mut rigid_box: BTreeMap<Role, BTreeSet<Pair>> = BTreeMap::new();
    for r in roles.iter().filter(|r| rigid(r)) {
        let s = positive_role_atoms(abox).filter(|(_, r2, _)| closure.contains(r2, r)).map(|(_, _, p)| p).collect();
        rigid_box.insert(r.clone(), s);
    }
    let mut out = AboxSlices { offsets: offsets.clone(), ..Default::default() };
    for r in &roles {
        let b: BTreeSet<Pair> = if rigid(r) {
            rigid_box[r].clone()
        } else {
            closure.subroles(r).filter_map(|s| rigid_box.get(s)).flatten().cloned().collect()
        };
        for &n in &offsets {
            let mut s = b.clone();
            if !rigid(r) {
                s.extend(
                    positive_role_atoms(abox)
                        .filter(|(m, r2, _)| *m == n && closure.contains(r2, r))
                        .map(|(_, _, p)| p),
                );
            }
            if !s.is_empty() {
                out.timed.insert((r.clone(), n), s);
            }
        }
        if !b.is_empty() {
            out.boxed.insert(r.clone(), b);
        }
    }
    out
}

fn at(p: String, c: &str) -> Fo1 {
    Fo1::Pred(p, Term::Const(c.to_string()))
}

fn universal(body: Fo1) -> Fo1Conjunct {
    Fo1Conjunct { universal: true, body }
}

fn closed(body: Fo1) -> Fo1Conjunct {
    Fo1Conjunct { universal: false, body }
}

/// Constant standing in for the domain element when the KB names none.
pub const FRESH_CONSTANT: &str = "_";

pub fn kb_dagger(kb: &KnowledgeBase) -> Result<Fo1Sentence, ReductionError> {
    if kb.diamond_count() > 0 {
        return Err(ReductionError::DiamondPresent);
    }
    let roles = kb.role_set();
    let closure = role_closure(&kb.ontology.role_inclusions, &roles);
    let slices = abox_slices(&kb.abox, &closure, &kb.roles);
    let mut out = Vec::new();

    for ci in &kb.ontology.concept_inclusions {
        out.push(universal(Fo1::always(Fo1::implies(concept_star(&ci.lhs), concept_star(&ci.rhs)))));
    }
    for ri in &kb.ontology.role_inclusions {
        for (a, b) in [(ri.lhs.clone(), ri.rhs.clone()), (ri.lhs.inverse(), ri.rhs.inverse())] {
            let body = Fo1::implies(Fo1::Pred(exists_pred(&a), Term::Var), Fo1::Pred(exists_pred(&b), Term::Var));
            out.push(universal(Fo1::always(body)));
        }
    }

    for a in &kb.abox {
        if let Predicate::Concept(name) = &a.predicate {
            let lit = at(name.clone(), &a.args[0]);
            let lit = if a.polarity == Polarity::Negative { Fo1::not(lit) } else { lit };
            out.push(closed(Fo1::next_n(lit, a.offset)));
        }
    }
    let mut seen = BTreeSet::new();
    for &n in &slices.offsets {
        for (r, (x, _)) in slices.union_at(n) {
            if seen.insert((n, r.clone(), x.clone())) {
                out.push(closed(Fo1::next_n(at(exists_pred(&r), &x), n)));
            }
        }
    }
    let mut seen = BTreeSet::new();
    for (r, (x, _)) in slices.boxed_union() {
        if seen.insert((r.clone(), x.clone())) {
            out.push(closed(Fo1::always(at(exists_pred(&r), &x))));
        }
    }
    for a in kb.abox.iter().filter(|a| a.polarity == Polarity::Negative) {
        if let Predicate::Role(r) = &a.predicate {
            if slices.at(r, a.offset).contains(&(a.args[0].clone(), a.args[1].clone())) {
                out.push(closed(Fo1::False));
            }
        }
    }

    for r in roles.iter().filter(|r| kb.rigidity(&r.name) == Rigidity::Rigid) {
        let e = Fo1::Pred(exists_pred(r), Term::Var);
        out.push(universal(Fo1::always(Fo1::implies(Fo1::eventually(e.clone()), Fo1::always(e)))));
    }
    for r in &roles {
        let e = Fo1::Pred(exists_pred(r), Term::Var);
        let p = Fo1::Prop(role_prop(r));
        out.push(universal(Fo1::always(Fo1::implies(Fo1::eventually(e), Fo1::always(p.clone())))));
        out.push(closed(Fo1::implies(p, at(exists_pred(&r.inverse()), &role_witness(r)))));
    }

    let mut constants = kb.individuals();
    constants.extend(roles.iter().map(role_witness));
    if constants.is_empty() {
        constants.insert(FRESH_CONSTANT.to_string());
    }
    Ok(Fo1Sentence { conjuncts: out, constants })
}
