use std::fmt::Write;

use super::*;

fn prec(c: &Concept) -> u8 {
    match c {
        Concept::And(..) => 0,
        Concept::Until(..) => 1,
        _ => 2,
    }
}

pub(crate) fn write_concept(out: &mut String, c: &Concept, min: u8) {
    let paren = prec(c) < min;
    if paren {
        out.push('(');
    }
    match c {
        Concept::Basic(BasicConcept::Bottom) => out.push_str("bot"),
        Concept::Basic(BasicConcept::Atomic(n)) => out.push_str(n),
        Concept::Basic(BasicConcept::Exists(r)) => {
            let _ = write!(out, "exists {r}");
        }
        Concept::Not(c) => {
            out.push_str("not ");
            write_concept(out, c, 2);
        }
        Concept::Next(c) => {
            out.push_str("X ");
            write_concept(out, c, 2);
        }
        Concept::Eventually(c) => {
            out.push_str("F ");
            write_concept(out, c, 2);
        }
        Concept::Always(c) => {
            out.push_str("G ");
            write_concept(out, c, 2);
        }
        Concept::Until(a, b) => {
            write_concept(out, a, 2);
            out.push_str(" U ");
            write_concept(out, b, 1);
        }
        Concept::And(a, b) => {
            write_concept(out, a, 1);
            out.push_str(" & ");
            write_concept(out, b, 0);
        }
    }
    if paren {
        out.push(')');
    }
}

pub fn concept_to_string(c: &Concept) -> String {
    let mut s = String::new();
    write_concept(&mut s, c, 0);
    s
}

pub(crate) fn atom_to_string(a: &AboxAtom) -> String {
    let mut s = String::new();
    if a.offset > 0 {
        let _ = write!(s, "X^{} ", a.offset);
    }
    match &a.polarity {
        Polarity::Positive => {}
        Polarity::Negative => s.push_str("not "),
        Polarity::Diamond(p) => {
            let _ = write!(s, "geom({p}) ");
        }
    }
    match &a.predicate {
        Predicate::Concept(n) => s.push_str(n),
        Predicate::Role(r) => {
            let _ = write!(s, "{r}");
        }
    }
    let _ = write!(s, "({})", a.args.join(","));
    s
}

pub fn serialize_kb(kb: &KnowledgeBase) -> String {
    let mut out = String::new();
    for (name, rig) in &kb.roles {
        let kw = match rig {
            Rigidity::Rigid => "rigid",
            Rigidity::Flexible => "flexible",
        };
        let _ = writeln!(out, "{kw} role {name}");
    }
    out.push_str("tbox:\n");
    for ci in &kb.ontology.concept_inclusions {
        let _ = writeln!(out, "  {} [= {}", concept_to_string(&ci.lhs), concept_to_string(&ci.rhs));
    }
    for ri in &kb.ontology.role_inclusions {
        let _ = writeln!(out, "  {} [= {}", ri.lhs, ri.rhs);
    }
    out.push_str("abox:\n");
    for a in &kb.abox {
        let _ = writeln!(out, "  {}", atom_to_string(a));
    }
    out
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&concept_to_string(self))
    }
}

impl fmt::Display for AboxAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&atom_to_string(self))
    }
}

impl fmt::Display for KnowledgeBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_kb(self))
    }
}
