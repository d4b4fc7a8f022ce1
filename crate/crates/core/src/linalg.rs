//! Exact matrix rank over `Q` or `F_p`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};

/// The coefficient field used for homology computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum CoefficientField {
    #[default]
    Rational,
    Prime(u64),
}

impl CoefficientField {
    /// `0` selects the rationals, otherwise `c` must be prime.
    pub fn from_characteristic(c: u64) -> Result<Self> {
        match c {
            0 => Ok(CoefficientField::Rational),
            p if is_prime(p) => Ok(CoefficientField::Prime(p)),
            _ => Err(Error::Malformed(format!(
                "characteristic {c} is not 0 or a prime"
            ))),
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            CoefficientField::Rational => 0,
            CoefficientField::Prime(p) => *p,
        }
    }

    /// Rank of an integer matrix after reduction into this field.
    pub fn rank(&self, rows: &[Vec<i64>]) -> usize {
        match self {
            CoefficientField::Rational => rank_in(&Rationals, rows),
            CoefficientField::Prime(p) => rank_in(&ModP(*p), rows),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

trait Arith {
    type E: Clone;
    fn embed(&self, v: i64) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn div(&self, a: &Self::E, b: &Self::E) -> Self::E;
}

struct Rationals;

impl Arith for Rationals {
    type E = BigRational;
    fn embed(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn div(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a / b
    }
}

struct ModP(u64);

impl ModP {
    fn pow(&self, base: u64, mut exp: u64) -> u64 {
        let p = self.0 as u128;
        let mut acc: u128 = 1;
        let mut b = base as u128 % p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * b % p;
            }
            b = b * b % p;
            exp >>= 1;
        }
        acc as u64
    }
}

impl Arith for ModP {
    type E = u64;
    fn embed(&self, v: i64) -> u64 {
        v.rem_euclid(self.0 as i64) as u64
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.0 as u128) as u64
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.0 - b) % self.0
    }
    fn div(&self, a: &u64, b: &u64) -> u64 {
        self.mul(a, &self.pow(*b, self.0 - 2))
    }
}

fn rank_in<A: Arith>(field: &A, rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<A::E>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| field.embed(v)).collect())
        .collect();
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..m.len()).find(|&r| !field.is_zero(&m[r][col])) else {
            continue;
        };
        m.swap(rank, pivot);
        let pivot_row = m[rank].clone();
        for row in m.iter_mut().skip(rank + 1) {
            if field.is_zero(&row[col]) {
                continue;
            }
            let factor = field.div(&row[col], &pivot_row[col]);
            for (c, pv) in pivot_row.iter().enumerate().skip(col) {
                row[c] = field.sub(&row[c], &field.mul(&factor, pv));
            }
        }
        rank += 1;
    }
    rank
}
