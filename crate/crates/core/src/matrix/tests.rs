use num_bigint::BigInt;
use num_rational::BigRational;

use super::*;
use crate::kb::parse_kb;

const EX2: &str = include_str!("../../../../corpus/example2.kb");
const EX3: &str = include_str!("../../../../corpus/example3_half.kb");
const EX3Q: &str = include_str!("../../../../corpus/example3_threequarters.kb");
const EX5: &str = include_str!("../../../../corpus/example5.kb");

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn engine(text: &str) -> Engine {
    Engine::new(&parse_kb(text).unwrap(), Config::default()).unwrap()
}

#[test]
fn example5_entries() {
    let e = engine(EX5);
    assert!(e.entry_sat(&[0, 0]).unwrap());
    assert!(!e.entry_sat(&[1, 0]).unwrap());
    assert!(e.entry_sat(&[1, 1]).unwrap());
    for l in 0..4 {
        for (a, b) in level_entries(l) {
            let expect = a == 0 || (a == 1 && b >= 1) || (a >= 2 && b == 0);
            assert_eq!(e.entry_sat(&[a, b]).unwrap(), expect, "({a},{b})");
        }
    }
    assert_eq!(e.chained_pairs(1).unwrap(), [(1, 1)]);
    assert!(e.chained_pairs(2).unwrap().contains(&(0, 0)));
}

#[test]
fn example5_witnesses() {
    let e = engine(EX5);
    let x = r(0, 1);
    let m0 = e.build_witness(0).unwrap();
    assert_eq!(m0.to_string(), "1/2\n");
    let m3 = e.build_witness(3).unwrap();
    let want = [
        [r(5, 16), x.clone(), r(1, 8), r(1, 16)],
        [x.clone(), r(1, 4), x.clone(), x.clone()],
        [r(1, 8), x.clone(), x.clone(), x.clone()],
        [r(1, 16), x.clone(), x.clone(), x.clone()],
    ];
    for (i, row) in want.iter().enumerate() {
        assert_eq!(m3.values[i], row.to_vec());
    }
    assert_eq!(m3.to_string(), "5/16 0 1/8 1/16\nx 1/4 0 0\n1/8 x x x\n1/16 x x x\n");
    assert!(e.verify_partial(&m3).unwrap());
    let mut bad = m3.clone();
    bad.values[0][0] += r(1, 32);
    assert!(!e.verify_partial(&bad).unwrap());
    let mut off = m3.clone();
    off.values[1][0] = r(1, 64);
    off.values[1][1] -= r(1, 64);
    off.values[0][0] -= r(1, 64);
    off.values[0][1] = r(1, 64);
    assert!(!e.verify_partial(&off).unwrap());
    for l in 4..=8 {
        let m = e.build_witness(l).unwrap();
        assert_eq!(m.get(0, 0), &(r(1, 4) + r(1, 1 << (l + 1))));
        assert!(e.verify_partial(&m).unwrap());
    }
}

#[test]
fn example3_decisions() {
    let half = engine(EX3).decide().unwrap();
    assert!(half.sat);
    assert!(matches!(half.certificate, Certificate::Degenerate { level: 0, .. }));
    let e = engine(EX3);
    let m = e.build_witness(3).unwrap();
    assert_eq!(m.values[0], [r(0, 1), r(1, 4), r(1, 8), r(1, 16)]);
    assert!(e.verify_partial(&m).unwrap());
    let tq = engine(EX3Q).decide().unwrap();
    assert!(!tq.sat);
    assert!(matches!(tq.certificate, Certificate::NoChainedPair { level: 0, .. }));
    assert_eq!(engine(EX3Q).build_witness(2), Err(EngineError::Unsatisfiable));
}

#[test]
fn example2_unsat_at_one() {
    let v = engine(EX2).decide().unwrap();
    assert!(!v.sat);
    assert_eq!(v.certificate, Certificate::UnsatEntry { entry: vec![1] });
    assert!(v.certificate.to_string().contains("level 1"));
}

#[test]
fn period_bounds_need_diamonds() {
    let plain = engine("abox: A(a)");
    assert_eq!(plain.period_bounds(), Err(EngineError::NoDiamonds));
    assert!(plain.decide().unwrap().sat);
    let b = engine(EX5).period_bounds().unwrap();
    assert!(b.s >= 2 && b.q >= 1);
}

#[test]
fn modes_agree() {
    let seq = Engine::new(&parse_kb(EX5).unwrap(), Config { parallel: false, bound: Some(6), ..Config::default() }).unwrap();
    let par = Engine::new(&parse_kb(EX5).unwrap(), Config { bound: Some(6), ..Config::default() }).unwrap();
    assert_eq!(seq.decide().unwrap(), par.decide().unwrap());
    assert_eq!(seq.build_witness(6).unwrap(), par.build_witness(6).unwrap());
}

#[test]
fn flow_handles_bottleneck() {
    // Row 0's only lower corner (0,0) holds less than the level mass, so the
    // remainder must be routed through (1,1) and the (0,1)/(1,0) cross.
    let p = crate::kb::GeomParam::from_ratio(1, 2).unwrap();
    let sat = |a: u32, b: u32| !matches!((a, b), (2, 2) | (1, 2) | (2, 1));
    let mut levels: Vec<LevelInfo> = Vec::new();
    for l in 0..=2 {
        let top = level_entries(l).into_iter().map(|(a, b)| sat(a, b)).collect();
        let info = chain::analyse_level(&levels, l, top);
        levels.push(info);
    }
    let m = PartialMatrix::build(&p, &levels, None).unwrap();
    assert!(m.nonnegative());
    assert!(m.sums_ok(&p, false));
}
