//! Phase-one simplex over exact rationals with Bland's rule.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// A nonnegative `x` with `a x = b`, if one exists. `a` is dense, one row
/// per constraint.
pub fn feasible_point(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let width = n + m + 1;
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    for (i, (row, rhs)) in a.iter().zip(b).enumerate() {
        let flip = rhs.is_negative();
        let mut r: Vec<BigRational> = row.iter().map(|v| if flip { -v } else { v.clone() }).collect();
        r.resize(width, BigRational::zero());
        r[n + i] = BigRational::from_integer(1.into());
        r[width - 1] = if flip { -rhs } else { rhs.clone() };
        t.push(r);
    }
    let mut obj = vec![BigRational::zero(); width];
    for r in &t {
        for j in (0..n).chain([width - 1]) {
            obj[j] -= &r[j];
        }
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    while let Some(enter) = (0..n + m).find(|&j| obj[j].is_negative()) {
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][width - 1] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((k, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*k]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((row, _)) = leave else { break };
        pivot(&mut t, &mut obj, row, enter);
        basis[row] = enter;
    }
    if !obj[width - 1].is_zero() {
        return None;
    }
    let mut x = vec![BigRational::zero(); n];
    for (i, &v) in basis.iter().enumerate() {
        if v < n {
            x[v] = t[i][width - 1].clone();
        }
    }
    Some(x)
}

fn pivot(t: &mut [Vec<BigRational>], obj: &mut [BigRational], row: usize, col: usize) {
    let p = t[row][col].clone();
    for v in t[row].iter_mut() {
        *v /= &p;
    }
    let pr = t[row].clone();
    let eliminate = |r: &mut [BigRational]| {
        let f = r[col].clone();
        if !f.is_zero() {
            for (v, q) in r.iter_mut().zip(&pr) {
                *v -= &f * q;
            }
        }
    };
    for (i, r) in t.iter_mut().enumerate() {
        if i != row {
            eliminate(r);
        }
    }
    eliminate(obj);
}
