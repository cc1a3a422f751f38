#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;

use tldlite::kb::{parse_kb, KnowledgeBase};

pub const CORPUS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../corpus");

pub fn corpus(name: &str) -> String {
    std::fs::read_to_string(format!("{CORPUS}/{name}")).unwrap()
}

pub fn corpus_kb(name: &str) -> KnowledgeBase {
    parse_kb(&corpus(name)).unwrap()
}

/// All parseable corpus files with their names.
pub fn corpus_files() -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = std::fs::read_dir(CORPUS)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "kb"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read_to_string(&p).unwrap()))
        .collect();
    out.sort();
    out
}

fn role<R: Rng>(rng: &mut R, roles: &[&str]) -> String {
    let r = roles.choose(rng).unwrap();
    if rng.gen_bool(0.3) {
        format!("inv({r})")
    } else {
        r.to_string()
    }
}

fn basic<R: Rng>(rng: &mut R, concepts: &[&str], roles: &[&str]) -> String {
    match rng.gen_range(0..10) {
        0 => "bot".to_string(),
        1..=3 if !roles.is_empty() => format!("exists {}", role(rng, roles)),
        _ => concepts.choose(rng).unwrap().to_string(),
    }
}

pub fn concept<R: Rng>(rng: &mut R, depth: u32, concepts: &[&str], roles: &[&str]) -> String {
    if depth == 0 || rng.gen_bool(0.35) {
        return basic(rng, concepts, roles);
    }
    let sub = |rng: &mut R| concept(rng, depth - 1, concepts, roles);
    match rng.gen_range(0..7) {
        0 => format!("not ({})", sub(rng)),
        1 => format!("({}) & ({})", sub(rng), sub(rng)),
        2 => format!("X ({})", sub(rng)),
        3 => format!("F ({})", sub(rng)),
        4 => format!("G ({})", sub(rng)),
        5 => format!("({}) U ({})", sub(rng), sub(rng)),
        _ => format!("X^2 ({})", sub(rng)),
    }
}

/// A random diamond-free KB with at most 3 individuals, 2 roles and 3
/// concept names, and temporal depth at most `depth`.
pub fn random_kb<R: Rng>(rng: &mut R, depth: u32) -> String {
    let all_concepts = ["A", "B", "C"];
    let concepts = &all_concepts[..rng.gen_range(1..=3)];
    let all_roles = ["R1", "R2"];
    let roles = &all_roles[..rng.gen_range(0..=2)];
    let inds = ["a", "b", "c"];
    let inds = &inds[..rng.gen_range(1..=3)];
    let mut s = String::new();
    for r in roles {
        s += if rng.gen_bool(0.5) { "rigid" } else { "flexible" };
        s += &format!(" role {r}\n");
    }
    s += "tbox:\n";
    for _ in 0..rng.gen_range(1..=3) {
        s += &format!("  {} [= {}\n", concept(rng, depth, concepts, roles), concept(rng, depth, concepts, roles));
    }
    if roles.len() == 2 && rng.gen_bool(0.5) {
        s += &format!("  {} [= {}\n", role(rng, &roles[..1]), role(rng, &roles[1..]));
    }
    s += "abox:\n";
    for _ in 0..rng.gen_range(1..=4) {
        let off = rng.gen_range(0..=2);
        let neg = if rng.gen_bool(0.25) { "not " } else { "" };
        let x = if off > 0 { format!("X^{off} ") } else { String::new() };
        if !roles.is_empty() && rng.gen_bool(0.3) {
            let r = roles.choose(rng).unwrap();
            s += &format!("  {x}{neg}{r}({},{})\n", inds.choose(rng).unwrap(), inds.choose(rng).unwrap());
        } else {
            s += &format!("  {x}{neg}{}({})\n", concepts.choose(rng).unwrap(), inds.choose(rng).unwrap());
        }
    }
    s
}
