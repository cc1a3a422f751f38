use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::kb::parse_kb;
use crate::ltl::{parse_ltl, Atom};
use crate::matrix::Config;

const EX3: &str = include_str!("../../../../corpus/example3_half.kb");
const EX3Q: &str = include_str!("../../../../corpus/example3_threequarters.kb");
const EX5: &str = include_str!("../../../../corpus/example5.kb");

fn engine(text: &str) -> Engine {
    Engine::new(&parse_kb(text).unwrap(), Config::default()).unwrap()
}

#[test]
fn enumeration_basics() {
    let w = enumerate_ltl_sat(&parse_ltl("G a").unwrap(), 0, 1).unwrap().unwrap();
    assert!(w.prefix.is_empty());
    assert_eq!(w.cycle.len(), 1);
    assert!(w.cycle[0].contains(&Atom::new("a")));
    assert_eq!(enumerate_ltl_sat(&parse_ltl("a & !a").unwrap(), 3, 3).unwrap(), None);
    let f = entry_formula(&parse_kb(EX5).unwrap(), &[0, 0]).unwrap();
    let w = enumerate_ltl_sat(&f, 4, 2).unwrap().unwrap();
    assert!(lasso_check(&w, &f).unwrap());
}

#[test]
fn guard_rejects_large_spaces() {
    let f = parse_ltl("a & b & c & d & e & f & g & h").unwrap();
    assert!(matches!(enumerate_ltl_sat(&f, 4, 4), Err(OracleError::Guard { .. })));
}

fn random_formula(rng: &mut ChaCha8Rng, depth: u32) -> Ltl {
    let atoms = ["a", "b", "c"];
    if depth == 0 || rng.gen_bool(0.25) {
        return Ltl::prop(atoms[rng.gen_range(0..3)]);
    }
    let sub = |rng: &mut ChaCha8Rng| random_formula(rng, depth - 1);
    match rng.gen_range(0..7) {
        0 => Ltl::not(sub(rng)),
        1 => Ltl::And(vec![sub(rng), sub(rng)]),
        2 => Ltl::Or(vec![sub(rng), sub(rng)]),
        3 => Ltl::next(sub(rng)),
        4 => Ltl::eventually(sub(rng)),
        5 => Ltl::always(sub(rng)),
        _ => Ltl::until(sub(rng), sub(rng)),
    }
}

#[test]
fn search_agrees_with_solver_on_random_formulas() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut unsat, mut clamped) = (0, 0);
    for i in 0..300 {
        let f = random_formula(&mut rng, 4);
        let a = compare_ltl(&format!("f{i}"), &f, 64).unwrap();
        assert!(a.agrees(), "{f:?}: {a:?}");
        clamped += usize::from(a.clamped);
        unsat += usize::from(!a.solver);
        if f.atoms().len() <= 2 {
            let e = enumerate_ltl_sat(&f, 2, 2).unwrap();
            if e.is_some() {
                assert!(a.solver);
            }
        }
    }
    assert!(unsat > 0);
    assert!(clamped < 30, "{clamped}");
}

#[test]
fn feasibility_examples() {
    let e = engine(EX3Q);
    let r = truncated_feasibility(&e, 2).unwrap();
    assert!(!r.feasible());
    let e = engine(EX3);
    let r = truncated_feasibility(&e, 3).unwrap();
    assert!(r.feasible());
    assert!(r.verify(&e).unwrap());
    let all = engine("abox: geom(2/3) A(a)\n geom(2/3) B(a)");
    let r = truncated_feasibility(&all, 3).unwrap();
    assert!(r.feasible() && r.verify(&all).unwrap());
    let single = engine("abox: geom(2/3) A(a)");
    assert!(truncated_feasibility(&single, 2).is_err());
}

#[test]
fn report_on_example5() {
    let e = engine(EX5);
    let r = oracle_report(&e, 1, 24).unwrap();
    assert!(r.agrees(), "{r}");
    assert_eq!(r.formulas.len(), 4);
    assert!(r.to_string().contains("overall: agreement"));
}

#[test]
fn free_loop_matches_fixed_shapes() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..150 {
        let f = random_formula(&mut rng, 3);
        for len in 1..=4 {
            let any = bmc_any(&f, len);
            let fixed = (0..len).any(|p| bmc_lasso(&f, p, len - p).is_some());
            assert_eq!(any.is_some(), fixed, "{f:?} at {len}");
            if let Some(w) = any {
                assert_eq!(w.len(), len);
                assert!(lasso_check(&w, &f).unwrap());
            }
        }
    }
}

#[test]
fn components_split_on_shared_atoms() {
    let f = parse_ltl("a & G (a -> b) & c & F d & G (d | !e)").unwrap();
    let cs = components(&f);
    assert_eq!(cs.len(), 3);
    let sizes: BTreeSet<usize> = cs.iter().map(|c| c.atoms().len()).collect();
    assert_eq!(sizes, [1, 2].into());
}
