use std::collections::BTreeSet;

use super::ReductionError;
use crate::kb::{
    normalize_kb, AboxAtom, BasicConcept, Concept, ConceptInclusion, KnowledgeBase, Polarity, Predicate, Span,
};

/// Positions of the diamond atoms in the ABox, in order.
fn diamond_positions(kb: &KnowledgeBase) -> Vec<usize> {
    kb.abox.iter().enumerate().filter(|(_, a)| a.is_diamond()).map(|(i, _)| i).collect()
}

/// `¬θ` at `n..n+neg` followed by `θ` at `n+neg` (when `pos`).
fn unroll(a: &AboxAtom, from: u32, neg: u32, pos: bool) -> Vec<AboxAtom> {
    let mut out: Vec<AboxAtom> = (0..neg).map(|i| a.with(from + i, Polarity::Negative)).collect();
    if pos {
        out.push(a.with(from + neg, Polarity::Positive));
    }
    out
}

fn rebuild(kb: &KnowledgeBase, replace: impl Fn(usize) -> Vec<AboxAtom>) -> KnowledgeBase {
    let pos = diamond_positions(kb);
    let mut out = kb.clone();
    out.abox.clear();
    for (i, a) in kb.abox.iter().enumerate() {
        match pos.iter().position(|&p| p == i) {
            Some(d) => out.abox.extend(replace(d)),
            None => out.abox.push(a.clone()),
        }
    }
    normalize_kb(&out)
}

/// The diamond-free ABox in which the i-th diamond first holds `ks[i]` steps after its offset.
pub fn instantiate_abox(kb: &KnowledgeBase, ks: &[u32]) -> Result<KnowledgeBase, ReductionError> {
    let d = kb.diamond_count();
    if d == 0 {
        return Err(ReductionError::NoDiamonds);
    }
    if ks.len() != d {
        return Err(ReductionError::Arity { expected: d, found: ks.len() });
    }
    let ds: Vec<AboxAtom> = kb.diamonds().into_iter().cloned().collect();
    Ok(rebuild(kb, |i| unroll(&ds[i], ds[i].offset, ks[i], true)))
}

/// Fixes one diamond at delay `k` and pushes the other past `k`, keeping it a diamond.
pub fn single_diamond_abox(kb: &KnowledgeBase, fixed_axis: usize, k: u32) -> Result<KnowledgeBase, ReductionError> {
    if kb.diamond_count() != 2 {
        return Err(ReductionError::Arity { expected: 2, found: kb.diamond_count() });
    }
    if !kb.param().is_some_and(|p| p.is_half()) {
        return Err(ReductionError::NotHalf);
    }
    if fixed_axis != 1 && fixed_axis != 2 {
        return Err(ReductionError::Axis(fixed_axis));
    }
    let ds: Vec<AboxAtom> = kb.diamonds().into_iter().cloned().collect();
    let fixed = fixed_axis - 1;
    Ok(rebuild(kb, |i| {
        let a = &ds[i];
        if i == fixed {
            unroll(a, a.offset, k, true)
        } else {
            let mut v = unroll(a, a.offset, k + 1, false);
            v.push(a.with(a.offset + k + 1, a.polarity.clone()));
            v
        }
    }))
}

/// Fresh concept names used by `kb_down`, one per diamond.
pub fn tautology_names(kb: &KnowledgeBase) -> Vec<String> {
    let mut taken: BTreeSet<String> = kb.concept_names();
    let mut out = Vec::new();
    for i in 1..=kb.diamond_count() {
        let mut name = format!("T_{i}");
        while taken.contains(&name) {
            name.push('_');
        }
        taken.insert(name.clone());
        out.push(name);
    }
    out
}

/// Every diamond becomes a fresh tautological concept at its offset.
pub fn kb_down(kb: &KnowledgeBase) -> KnowledgeBase {
    if kb.diamond_count() == 0 {
        return kb.clone();
    }
    let names = tautology_names(kb);
    let ds: Vec<AboxAtom> = kb.diamonds().into_iter().cloned().collect();
    let mut out = rebuild(kb, |i| {
        ds[i].args.iter().map(|x| AboxAtom::concept(ds[i].offset, Polarity::Positive, &names[i], x)).collect()
    });
    for d in &ds {
        if let Predicate::Role(r) = &d.predicate {
            out.roles.entry(r.name.clone()).or_insert(kb.rigidity(&r.name));
        }
    }
    for n in &names {
        let t = Concept::atomic(n.clone());
        let bot = Concept::Basic(BasicConcept::Bottom);
        out.ontology.concept_inclusions.push(ConceptInclusion {
            lhs: Concept::not(t.clone()),
            rhs: bot.clone(),
            span: Span::default(),
        });
        out.ontology.concept_inclusions.push(ConceptInclusion { lhs: t, rhs: Concept::not(bot), span: Span::default() });
    }
    out
}
