use std::collections::HashSet;

use super::*;

/// Closes the ABox under role inversion: R(a,b) at n brings R⁻(b,a) at n.
pub fn normalize_kb(kb: &KnowledgeBase) -> KnowledgeBase {
    let mut out = kb.clone();
    let key = |a: &AboxAtom| (a.offset, a.polarity.clone(), a.predicate.clone(), a.args.clone());
    let mut seen: HashSet<_> = kb.abox.iter().map(key).collect();
    for a in &kb.abox {
        let Predicate::Role(r) = &a.predicate else { continue };
        if a.is_diamond() {
            continue;
        }
        let mirror = AboxAtom {
            predicate: Predicate::Role(r.inverse()),
            args: vec![a.args[1].clone(), a.args[0].clone()],
            ..a.clone()
        };
        if seen.insert(key(&mirror)) {
            out.abox.push(mirror);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::parse_kb;
    use super::*;

    #[test]
    fn adds_mirror() {
        let kb = normalize_kb(&parse_kb("abox: X^2 R(a,b)").unwrap());
        assert_eq!(kb.abox.len(), 2);
        assert_eq!(kb.abox[1], AboxAtom::role(2, Polarity::Positive, Role::new("R").inverse(), "b", "a"));
    }

    #[test]
    fn negative_mirror() {
        let kb = normalize_kb(&parse_kb("abox: not R(a,b)").unwrap());
        assert_eq!(kb.abox[1], AboxAtom::role(0, Polarity::Negative, Role::new("R").inverse(), "b", "a"));
    }

    #[test]
    fn closed_is_fixpoint() {
        let kb = parse_kb("abox:\n R(a,b)\n inv(R)(b,a)").unwrap();
        assert_eq!(normalize_kb(&kb), kb);
        let n = normalize_kb(&parse_kb("abox:\n X R(a,b)\n not S(c,a)").unwrap());
        assert_eq!(normalize_kb(&n), n);
    }
}
