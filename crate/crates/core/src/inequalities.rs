//! Chebyshev's sum inequalities and the power-sum inequality that drives
//! the monotonicity of partial slopes in a Hodge tower, all evaluated
//! exactly.

use num::{BigInt, One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Two equal-length, nonempty rational sequences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequencePair {
    a: Vec<Rational>,
    b: Vec<Rational>,
}

impl SequencePair {
    pub fn new(a: Vec<Rational>, b: Vec<Rational>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::LengthMismatch {
                left: a.len(),
                right: b.len(),
            });
        }
        if a.is_empty() {
            return Err(Error::EmptySequence);
        }
        Ok(SequencePair { a, b })
    }

    pub fn from_integers(a: &[i64], b: &[i64]) -> Result<Self> {
        Self::new(
            a.iter().map(|&x| Rational::from(x)).collect(),
            b.iter().map(|&x| Rational::from(x)).collect(),
        )
    }

    pub fn a(&self) -> &[Rational] {
        &self.a
    }

    pub fn b(&self) -> &[Rational] {
        &self.b
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn n(&self) -> Rational {
        Rational::from(self.a.len() as i64)
    }

    fn sum_products(&self) -> Rational {
        self.a.iter().zip(&self.b).map(|(x, y)| x * y).sum()
    }
}

/// Both sides of `lhs ≤ rhs`, evaluated exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InequalityWitness {
    pub holds: bool,
    pub lhs: Rational,
    pub rhs: Rational,
}

impl InequalityWitness {
    fn compare(lhs: Rational, rhs: Rational) -> Self {
        InequalityWitness {
            holds: lhs <= rhs,
            lhs,
            rhs,
        }
    }

    pub fn is_equality(&self) -> bool {
        self.lhs == self.rhs
    }
}

fn check_order(seq: &[Rational], name: &'static str, nondecreasing: bool) -> Result<()> {
    let bad = seq.windows(2).position(|w| {
        if nondecreasing {
            w[1] < w[0]
        } else {
            w[1] > w[0]
        }
    });
    match bad {
        Some(i) => Err(Error::Monotonicity {
            sequence: name,
            expected: if nondecreasing { "nondecreasing" } else { "nonincreasing" },
            index: i + 1,
        }),
        None => Ok(()),
    }
}

/// `n · Σ a_i b_i ≤ (Σ a_i)(Σ b_j)` for `a` nonincreasing, `b` nondecreasing.
pub fn chebyshev_upper(p: &SequencePair) -> Result<InequalityWitness> {
    check_order(&p.a, "a", false)?;
    check_order(&p.b, "b", true)?;
    let lhs = p.n() * p.sum_products();
    let rhs = p.a.iter().sum::<Rational>() * p.b.iter().sum::<Rational>();
    Ok(InequalityWitness::compare(lhs, rhs))
}

/// `(Σ b_j)(Σ a_i) ≤ n · Σ a_i b_i` for `a`, `b` both nondecreasing.
pub fn chebyshev_lower(p: &SequencePair) -> Result<InequalityWitness> {
    check_order(&p.a, "a", true)?;
    check_order(&p.b, "b", true)?;
    let lhs = p.b.iter().sum::<Rational>() * p.a.iter().sum::<Rational>();
    let rhs = p.n() * p.sum_products();
    Ok(InequalityWitness::compare(lhs, rhs))
}

/// `Σ_{i=0}^{k} d^i`.
pub fn geometric_sum(d: u64, k: usize) -> BigInt {
    let d = BigInt::from(d);
    let mut term = BigInt::one();
    let mut total = BigInt::zero();
    for _ in 0..=k {
        total += &term;
        term *= &d;
    }
    total
}

/// `Σ_{i=0}^{k} i · d^{i−1}`, the `i = 0` term being 0 for every `d`.
pub fn derivative_sum(d: u64, k: usize) -> BigInt {
    let d = BigInt::from(d);
    let mut power = BigInt::one(); // d^{i-1}
    let mut total = BigInt::zero();
    for i in 1..=k {
        total += BigInt::from(i) * &power;
        power *= &d;
    }
    total
}

/// `(Σ_{i≤r} i·d^{i−1})(Σ_{j≤n} d^j) ≤ (Σ_{i≤n} i·d^{i−1})(Σ_{j≤r} d^j)`.
pub fn hodge_sum_inequality(d: u64, r: usize, n: usize) -> Result<InequalityWitness> {
    if d == 0 {
        return Err(Error::InvalidParameter("d must be at least 1".into()));
    }
    if r > n {
        return Err(Error::IndexOutOfRange { index: r, max: n });
    }
    let lhs = derivative_sum(d, r) * geometric_sum(d, n);
    let rhs = derivative_sum(d, n) * geometric_sum(d, r);
    Ok(InequalityWitness::compare(lhs.into(), rhs.into()))
}

/// One row of the exhaustive sweep: every `0 ≤ r ≤ n ≤ n_max` for fixed `d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub d: u64,
    pub checked: u64,
    pub passed: u64,
    pub first_failure: Option<(usize, usize)>,
}

impl SweepRow {
    pub fn all_pass(&self) -> bool {
        self.checked == self.passed
    }
}

pub fn hodge_sum_sweep(d_max: u64, n_max: usize) -> Result<Vec<SweepRow>> {
    (1..=d_max)
        .map(|d| {
            let mut row = SweepRow {
                d,
                checked: 0,
                passed: 0,
                first_failure: None,
            };
            for n in 0..=n_max {
                for r in 0..=n {
                    row.checked += 1;
                    if hodge_sum_inequality(d, r, n)?.holds {
                        row.passed += 1;
                    } else if row.first_failure.is_none() {
                        row.first_failure = Some((r, n));
                    }
                }
            }
            Ok(row)
        })
        .collect()
}
