use num_rational::BigRational;
use num_traits::{One, Pow};

use crate::kb::GeomParam;

/// Geom(p) over k ≥ 0: pmf(k) = (1-p)^k p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeomDistribution {
    pub p: GeomParam,
}

impl GeomDistribution {
    pub fn new(p: GeomParam) -> GeomDistribution {
        GeomDistribution { p }
    }

    pub fn pmf(&self, i: u32) -> BigRational {
        geom_pmf(&self.p, i)
    }

    pub fn tail(&self, i: u32) -> BigRational {
        geom_tail(&self.p, i)
    }
}

fn q_pow(p: &GeomParam, n: u32) -> BigRational {
    let q = BigRational::one() - p.value();
    Pow::pow(&q, n)
}

pub fn geom_pmf(p: &GeomParam, i: u32) -> BigRational {
    q_pow(p, i) * p.value()
}

/// Mass strictly after `i`.
pub fn geom_tail(p: &GeomParam, i: u32) -> BigRational {
    q_pow(p, i + 1)
}
