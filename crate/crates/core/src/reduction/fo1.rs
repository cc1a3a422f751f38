use std::collections::BTreeSet;
use std::fmt;

use crate::kb::{BasicConcept, Concept, Role};
use crate::ltl::Ltl;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var,
    Const(String),
}

/// One-variable temporal formula over unary predicates and propositional variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Fo1 {
    True,
    False,
    Pred(String, Term),
    Prop(String),
    Not(Box<Fo1>),
    And(Vec<Fo1>),
    Or(Vec<Fo1>),
    Next(Box<Fo1>),
    Eventually(Box<Fo1>),
    Always(Box<Fo1>),
    Until(Box<Fo1>, Box<Fo1>),
}

impl Fo1 {
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Fo1) -> Fo1 {
        Fo1::Not(Box::new(f))
    }
    pub fn implies(a: Fo1, b: Fo1) -> Fo1 {
        Fo1::Or(vec![Fo1::not(a), b])
    }
    pub fn next_n(f: Fo1, n: u32) -> Fo1 {
        (0..n).fold(f, |f, _| Fo1::Next(Box::new(f)))
    }
    pub fn eventually(f: Fo1) -> Fo1 {
        Fo1::Eventually(Box::new(f))
    }
    pub fn always(f: Fo1) -> Fo1 {
        Fo1::Always(Box::new(f))
    }

    /// Replaces the variable by a constant and turns predicates into atoms.
    pub fn ground_at(&self, c: Option<&str>) -> Ltl {
        let rec = |f: &Fo1| f.ground_at(c);
        match self {
            Fo1::True => Ltl::True,
            Fo1::False => Ltl::False,
            Fo1::Pred(p, Term::Const(k)) => Ltl::prop(&format!("{p}@{k}")),
            Fo1::Pred(p, Term::Var) => match c {
                Some(k) => Ltl::prop(&format!("{p}@{k}")),
                None => panic!("free variable in a closed conjunct"),
            },
            Fo1::Prop(p) => Ltl::prop(p),
            Fo1::Not(f) => Ltl::not(rec(f)),
            Fo1::And(v) => Ltl::And(v.iter().map(rec).collect()),
            Fo1::Or(v) => Ltl::Or(v.iter().map(rec).collect()),
            Fo1::Next(f) => Ltl::next(rec(f)),
            Fo1::Eventually(f) => Ltl::eventually(rec(f)),
            Fo1::Always(f) => Ltl::always(rec(f)),
            Fo1::Until(a, b) => Ltl::until(rec(a), rec(b)),
        }
    }
}

impl fmt::Display for Fo1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |f: &mut fmt::Formatter<'_>, v: &[Fo1], sep: &str| -> fmt::Result {
            write!(f, "(")?;
            for (i, g) in v.iter().enumerate() {
                if i > 0 {
                    write!(f, " {sep} ")?;
                }
                write!(f, "{g}")?;
            }
            write!(f, ")")
        };
        match self {
            Fo1::True => write!(f, "true"),
            Fo1::False => write!(f, "false"),
            Fo1::Pred(p, Term::Var) => write!(f, "{p}(x)"),
            Fo1::Pred(p, Term::Const(c)) => write!(f, "{p}({c})"),
            Fo1::Prop(p) => write!(f, "{p}"),
            Fo1::Not(g) => write!(f, "!{g}"),
            Fo1::And(v) => join(f, v, "&"),
            Fo1::Or(v) => join(f, v, "|"),
            Fo1::Next(g) => write!(f, "X {g}"),
            Fo1::Eventually(g) => write!(f, "F {g}"),
            Fo1::Always(g) => write!(f, "G {g}"),
            Fo1::Until(a, b) => write!(f, "({a} U {b})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fo1Conjunct {
    /// Read as `∀x body`.
    pub universal: bool,
    pub body: Fo1,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Fo1Sentence {
    pub conjuncts: Vec<Fo1Conjunct>,
    pub constants: BTreeSet<String>,
}

impl fmt::Display for Fo1Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.conjuncts.iter().enumerate() {
            if i > 0 {
                writeln!(f, " &")?;
            }
            if c.universal {
                write!(f, "forall x. {}", c.body)?;
            } else {
                write!(f, "{}", c.body)?;
            }
        }
        Ok(())
    }
}

pub fn exists_pred(r: &Role) -> String {
    if r.inverted {
        format!("E.{}^-", r.name)
    } else {
        format!("E.{}", r.name)
    }
}

pub fn role_prop(r: &Role) -> String {
    if r.inverted {
        format!("p.{}^-", r.name)
    } else {
        format!("p.{}", r.name)
    }
}

pub fn role_witness(r: &Role) -> String {
    if r.inverted {
        format!("d.{}^-", r.name)
    } else {
        format!("d.{}", r.name)
    }
}

pub fn concept_star(c: &Concept) -> Fo1 {
    let b = |c: &Concept| Box::new(concept_star(c));
    match c {
        Concept::Basic(BasicConcept::Bottom) => Fo1::False,
        Concept::Basic(BasicConcept::Atomic(a)) => Fo1::Pred(a.clone(), Term::Var),
        Concept::Basic(BasicConcept::Exists(r)) => Fo1::Pred(exists_pred(r), Term::Var),
        Concept::Not(c) => Fo1::Not(b(c)),
        Concept::Next(c) => Fo1::Next(b(c)),
        Concept::Eventually(c) => Fo1::Eventually(b(c)),
        Concept::Always(c) => Fo1::Always(b(c)),
        Concept::Until(x, y) => Fo1::Until(b(x), b(y)),
        Concept::And(x, y) => Fo1::And(vec![concept_star(x), concept_star(y)]),
    }
}

/// Instantiates every universal conjunct at every constant.
pub fn ground(s: &Fo1Sentence, constants: &BTreeSet<String>) -> Ltl {
    let mut out = Vec::new();
    for c in &s.conjuncts {
        if c.universal {
            out.extend(constants.iter().map(|k| c.body.ground_at(Some(k))));
        } else {
            out.push(c.body.ground_at(None));
        }
    }
    Ltl::and(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kb::parse_kb;
    use crate::ltl::parse_ltl;

    fn star(src: &str) -> Fo1 {
        let kb = parse_kb(&format!("tbox: {src} [= bot")).unwrap();
        concept_star(&kb.ontology.concept_inclusions[0].lhs)
    }

    #[test]
    fn star_translation() {
        assert_eq!(star("exists inv(R)"), Fo1::Pred("E.R^-".into(), Term::Var));
        assert_eq!(star("not bot"), Fo1::not(Fo1::False));
        let f = star("F A & X B");
        let expect = Fo1::And(vec![
            Fo1::eventually(Fo1::Pred("A".into(), Term::Var)),
            Fo1::Next(Box::new(Fo1::Pred("B".into(), Term::Var))),
        ]);
        assert_eq!(f, expect);
    }

    #[test]
    fn grounding() {
        let s = Fo1Sentence {
            conjuncts: vec![Fo1Conjunct { universal: true, body: Fo1::Pred("A".into(), Term::Var) }],
            constants: ["a", "b"].iter().map(|s| s.to_string()).collect(),
        };
        assert_eq!(ground(&s, &s.constants), parse_ltl("\"A@a\" & \"A@b\"").unwrap());
        let closed = Fo1Sentence {
            conjuncts: vec![Fo1Conjunct { universal: false, body: Fo1::Pred("A".into(), Term::Const("a".into())) }],
            constants: BTreeSet::new(),
        };
        assert_eq!(ground(&closed, &closed.constants), Ltl::prop("A@a"));
    }
}
