//! Chebyshev polynomials of the first and second kind with exact integer
//! coefficients, and the reversed polynomial `z^N T_N(1/z)`.

use std::f64::consts::PI;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{integer, ExactRational, ExactSequence};

/// Polynomial with exact rational coefficients, `coeffs[i]` multiplying `z^i`.
/// Trailing zeros are trimmed, so the zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensePolynomial {
    coeffs: ExactSequence,
}

impl DensePolynomial {
    pub fn new(mut coeffs: ExactSequence) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        DensePolynomial { coeffs }
    }

    pub fn from_integers(v: &[i64]) -> Self {
        Self::new(v.iter().map(|&c| integer(c)).collect())
    }

    pub fn zero() -> Self {
        DensePolynomial { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[ExactRational] {
        &self.coeffs
    }

    /// Coefficient of `z^i`, zero past the degree.
    pub fn coeff(&self, i: usize) -> ExactRational {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn leading(&self) -> Option<&ExactRational> {
        self.coeffs.last()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * integer(i as i64))
                .collect(),
        )
    }

    pub fn scale(&self, k: &ExactRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Coefficients in reverse order relative to degree `n`:
    /// `z^n p(1/z)`. Requires `n >= degree`.
    pub fn reversed(&self, n: usize) -> Self {
        let mut out = vec![BigRational::zero(); n + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[n - i] = c.clone();
        }
        Self::new(out)
    }

    pub fn eval(&self, x: &ExactRational) -> ExactRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    /// Horner evaluation in `f64`.
    pub fn eval_float(&self, x: f64) -> Result<f64> {
        let mut acc = 0.0f64;
        for c in self.coeffs.iter().rev() {
            let cf = c.to_f64().filter(|v| v.is_finite()).ok_or_else(|| {
                Error::EvaluationRange(format!("coefficient {c} does not fit in f64"))
            })?;
            acc = acc * x + cf;
        }
        if !acc.is_finite() {
            return Err(Error::EvaluationRange(format!(
                "polynomial value at {x} overflows f64"
            )));
        }
        Ok(acc)
    }
}

/// Shifts by one degree and doubles: `2z * p`.
fn two_z_times(p: &DensePolynomial) -> ExactSequence {
    let mut out = vec![BigRational::zero()];
    out.extend(p.coeffs.iter().map(|c| c * integer(2)));
    out
}

fn three_term(n: usize, first: DensePolynomial) -> DensePolynomial {
    let mut prev = DensePolynomial::from_integers(&[1]);
    if n == 0 {
        return prev;
    }
    let mut cur = first;
    for _ in 1..n {
        let mut next = two_z_times(&cur);
        for (i, c) in prev.coeffs.iter().enumerate() {
            next[i] -= c;
        }
        prev = std::mem::replace(&mut cur, DensePolynomial::new(next));
    }
    cur
}

/// `T_N` via `T_0 = 1`, `T_1 = z`, `T_{n+1} = 2z T_n - T_{n-1}`.
pub fn chebyshev_t(n: usize) -> DensePolynomial {
    three_term(n, DensePolynomial::from_integers(&[0, 1]))
}

/// `U_N` via `U_0 = 1`, `U_1 = 2z` and the same recurrence.
pub fn chebyshev_u(n: usize) -> DensePolynomial {
    three_term(n, DensePolynomial::from_integers(&[0, 2]))
}

/// `z^N T_N(1/z)`; its constant term is `2^{N-1}`.
pub fn reversed_t(n: usize) -> Result<DensePolynomial> {
    if n == 0 {
        return Err(Error::param("reversed_T needs N >= 1"));
    }
    Ok(chebyshev_t(n).reversed(n))
}

/// `T_N(x)` from the closed forms: Binet for `|x| >= 1`, `cos(N arccos x)`
/// inside the interval.
pub fn binet_t(n: usize, x: f64) -> f64 {
    let n_i = n as i32;
    if x.abs() < 1.0 {
        return (n as f64 * x.acos()).cos();
    }
    let r = (x * x - 1.0).sqrt();
    if x >= 1.0 {
        // x + r is the large root; x - r = 1/(x + r) avoids cancellation.
        let big = x + r;
        0.5 * (big.powi(n_i) + big.powi(-n_i))
    } else {
        let big = x - r;
        0.5 * (big.powi(n_i) + big.powi(-n_i))
    }
}

/// `T_N(x)` by running the three-term recurrence in `f64`. Unlike Horner on
/// the power-basis coefficients this stays accurate on `[-1, 1]` for large `N`.
pub fn t_recurrence(n: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, x);
    if n == 0 {
        return prev;
    }
    for _ in 1..n {
        let next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Angles `theta_k = (2k - 1) pi / (2N)`, `k = 1..=N`, whose cosines are the
/// roots of `T_N`.
pub fn root_thetas(n: usize) -> Vec<f64> {
    (1..=n)
        .map(|k| (2 * k - 1) as f64 * PI / (2 * n) as f64)
        .collect()
}
