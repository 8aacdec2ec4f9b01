use std::ops::Mul;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{convolve_truncated, ExactRational, ExactSequence};
use crate::error::{Error, Result};

/// Power-series prefix `c_0 + c_1 z + ... + c_{order-1} z^{order-1} + O(z^order)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: ExactSequence,
}

impl TruncatedSeries {
    /// Series known through `z^{order-1}`; missing coefficients are zero and
    /// extra ones are dropped.
    pub fn new(mut coeffs: ExactSequence, order: usize) -> Self {
        coeffs.resize(order, BigRational::zero());
        TruncatedSeries { coeffs }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::new(Vec::new(), order);
        if order > 0 {
            s.coeffs[0] = BigRational::one();
        }
        s
    }

    /// `e^z = sum z^n / n!`.
    pub fn exp(order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order);
        let mut fact = BigInt::one();
        for n in 0..order {
            if n > 0 {
                fact *= n;
            }
            coeffs.push(BigRational::new(BigInt::one(), fact.clone()));
        }
        TruncatedSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[ExactRational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> ExactSequence {
        self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Option<&ExactRational> {
        self.coeffs.get(n)
    }

    /// Index of the first nonzero coefficient, `None` if all known ones vanish.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(self.coeffs.iter().take(order).cloned().collect(), order)
    }

    pub fn scale(&self, k: &ExactRational) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        TruncatedSeries {
            coeffs: (0..order)
                .map(|i| &self.coeffs[i] + &other.coeffs[i])
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        TruncatedSeries {
            coeffs: (0..order)
                .map(|i| &self.coeffs[i] - &other.coeffs[i])
                .collect(),
        }
    }

    /// Multiplicative inverse to the same order by the coefficient
    /// recurrence `b_n = -(1/a_0) sum_{j=1}^{n} a_j b_{n-j}`.
    pub fn reciprocal(&self) -> Result<Self> {
        let order = self.order();
        if order == 0 {
            return Ok(self.clone());
        }
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(Error::param(
                "series reciprocal needs a nonzero constant term",
            ));
        }
        let inv0 = a0.recip();
        // Only the nonzero tail of `a` contributes; Chebyshev-type inputs are sparse.
        let support: Vec<(usize, &ExactRational)> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, c)| !c.is_zero())
            .collect();
        let mut out: ExactSequence = Vec::with_capacity(order);
        out.push(inv0.clone());
        for n in 1..order {
            let mut acc = BigRational::zero();
            for &(j, a) in &support {
                if j > n {
                    break;
                }
                let b = &out[n - j];
                if !b.is_zero() {
                    acc += a * b;
                }
            }
            out.push(-(acc * &inv0));
        }
        Ok(TruncatedSeries { coeffs: out })
    }

    /// `self^p` by binary exponentiation; `p = 0` gives the constant 1.
    pub fn pow(&self, p: u64) -> Self {
        let mut result = Self::one(self.order());
        let mut base = self.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order().min(rhs.order());
        TruncatedSeries {
            coeffs: convolve_truncated(&self.coeffs, &rhs.coeffs, order),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{integer, rational};

    #[test]
    fn reciprocal_of_one_minus_z() {
        let s = TruncatedSeries::new(vec![integer(1), integer(-1)], 6);
        let r = s.reciprocal().unwrap();
        assert!(r.coeffs().iter().all(|c| *c == integer(1)));
        assert_eq!(&(&s * &r), &TruncatedSeries::one(6));
    }

    #[test]
    fn reciprocal_needs_unit() {
        let s = TruncatedSeries::new(vec![integer(0), integer(1)], 4);
        assert!(s.reciprocal().is_err());
    }

    #[test]
    fn exp_squared_is_exp_of_double() {
        let e = TruncatedSeries::exp(8);
        let sq = e.pow(2);
        for (n, c) in sq.coeffs().iter().enumerate() {
            let fact: i64 = (1..=n as i64).product();
            assert_eq!(*c, rational(1 << n, fact));
        }
    }

    #[test]
    fn valuation_and_truncate() {
        let s = TruncatedSeries::new(vec![integer(0), integer(0), integer(3)], 5);
        assert_eq!(s.valuation(), Some(2));
        assert_eq!(s.truncate(2).valuation(), None);
        assert_eq!(s.pow(0), TruncatedSeries::one(5));
    }
}
