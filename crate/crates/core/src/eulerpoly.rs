//! Euler numbers, Euler polynomials and generalized Euler polynomials
//! `E_n^(p)(x)`, all exact.
//!
//! Generating-function work uses ordinary coefficients `c_n = a_n / n!` of
//! exponential generating functions.

use std::sync::{Arc, Mutex, OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::exactnum::{
    binomial, format_rational, pow2, rational, to_f64, ExactRational, ExactSequence,
    TruncatedSeries,
};

/// Euler numbers `E_n` (from `1/cosh z`) and values `E_n(0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EulerTable {
    pub max_n: usize,
    pub euler_numbers: ExactSequence,
    pub euler_at_zero: ExactSequence,
}

/// Polynomial in `x` with exact coefficients, `coeffs[j]` multiplying `x^j`.
/// `order` is the `p` of `E_n^(p)`; 1 for the classical polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyInX {
    coeffs: ExactSequence,
    order: u64,
}

impl PolyInX {
    pub fn new(coeffs: ExactSequence, order: u64) -> Self {
        PolyInX { coeffs, order }
    }

    pub fn coeffs(&self) -> &[ExactRational] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn leading(&self) -> Option<&ExactRational> {
        self.coeffs.last()
    }

    pub fn rows(&self) -> Vec<CoefficientRow> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(power, c)| CoefficientRow {
                power,
                exact: format_rational(c),
                float: to_f64(c),
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientRow {
    pub power: usize,
    pub exact: String,
    pub float: f64,
}

/// `E_0..=E_max_n` from `sum_{k even <= 2m} binom(2m, k) E_k = 0`.
pub fn euler_number_sequence(max_n: usize) -> ExactSequence {
    let mut e: ExactSequence = Vec::with_capacity(max_n + 1);
    for n in 0..=max_n {
        if n == 0 {
            e.push(BigRational::one());
        } else if n % 2 == 1 {
            e.push(BigRational::zero());
        } else {
            let s: BigRational = (0..n)
                .step_by(2)
                .map(|k| BigRational::from_integer(binomial(n as u64, k as i64)) * &e[k])
                .sum();
            e.push(-s);
        }
    }
    e
}

/// `E_n(0)` for `n <= max_n`: `E_0(0) = 1`,
/// `E_n(0) = -(1/2) sum_{k<n} binom(n, k) E_k(0)`.
pub fn euler_at_zero(max_n: usize) -> ExactSequence {
    let half = rational(1, 2);
    let mut e: ExactSequence = Vec::with_capacity(max_n + 1);
    e.push(BigRational::one());
    for n in 1..=max_n {
        let s: BigRational = (0..n)
            .map(|k| BigRational::from_integer(binomial(n as u64, k as i64)) * &e[k])
            .sum();
        e.push(-(s * &half));
    }
    e
}

pub fn euler_numbers(max_n: usize) -> EulerTable {
    EulerTable {
        max_n,
        euler_numbers: euler_number_sequence(max_n),
        euler_at_zero: euler_at_zero(max_n),
    }
}

/// Coefficients in `x` of `(x + shift)^m`.
fn shifted_power(m: usize, shift: &ExactRational) -> ExactSequence {
    let mut out = Vec::with_capacity(m + 1);
    let mut pw = vec![BigRational::one()];
    for _ in 0..m {
        pw.push(pw.last().unwrap() * shift);
    }
    for j in 0..=m {
        out.push(BigRational::from_integer(binomial(m as u64, j as i64)) * &pw[m - j]);
    }
    out
}

/// `E_n(x) = sum_k binom(n, k) (E_k / 2^k) (x - 1/2)^{n-k}`, expanded in `x`.
pub fn euler_poly(n: usize) -> PolyInX {
    let e = euler_number_sequence(n);
    let minus_half = rational(-1, 2);
    let mut coeffs = vec![BigRational::zero(); n + 1];
    for k in 0..=n {
        if e[k].is_zero() {
            continue;
        }
        let w = BigRational::from_integer(binomial(n as u64, k as i64)) * &e[k]
            / BigRational::from_integer(BigInt::one() << k);
        for (j, c) in shifted_power(n - k, &minus_half).into_iter().enumerate() {
            coeffs[j] += &w * c;
        }
    }
    PolyInX::new(coeffs, 1)
}

/// One step of the order recursion:
/// `E_m^(p)(0) = sum_k binom(m, k) E_k^(p-1)(0) E_{m-k}(0)`.
fn next_order_row(prev: &[ExactRational], base: &[ExactRational]) -> ExactSequence {
    (0..prev.len())
        .map(|m| {
            (0..=m)
                .filter(|&k| !prev[k].is_zero() && !base[m - k].is_zero())
                .map(|k| {
                    BigRational::from_integer(binomial(m as u64, k as i64))
                        * &prev[k]
                        * &base[m - k]
                })
                .sum()
        })
        .collect()
}

fn order_zero_row(max_n: usize) -> ExactSequence {
    let mut row = vec![BigRational::zero(); max_n + 1];
    row[0] = BigRational::one();
    row
}

/// Append-only cache of rows `E_0^(p)(0), ..., E_max_n^(p)(0)` indexed by
/// the order `p` (row 0 is the empty product `x^n`).
#[derive(Debug)]
pub struct GenEulerRows {
    max_n: usize,
    base: ExactSequence,
    rows: RwLock<Vec<Arc<ExactSequence>>>,
}

impl GenEulerRows {
    pub fn new(max_n: usize) -> Self {
        GenEulerRows {
            max_n,
            base: euler_at_zero(max_n),
            rows: RwLock::new(vec![Arc::new(order_zero_row(max_n))]),
        }
    }

    pub fn max_n(&self) -> usize {
        self.max_n
    }

    /// Row for order `p`, computing any missing orders up to `p`.
    pub fn row(&self, p: usize) -> Arc<ExactSequence> {
        if let Some(r) = self.rows.read().expect("row cache poisoned").get(p) {
            return Arc::clone(r);
        }
        let mut rows = self.rows.write().expect("row cache poisoned");
        while rows.len() <= p {
            let next = next_order_row(rows.last().unwrap(), &self.base);
            rows.push(Arc::new(next));
        }
        Arc::clone(&rows[p])
    }

    /// `E_n^(p)(x) = sum_k binom(n, k) x^k E_{n-k}^(p)(0)` as a polynomial.
    pub fn poly(&self, n: usize, p: usize) -> PolyInX {
        assert!(
            n <= self.max_n,
            "degree {n} exceeds cache limit {}",
            self.max_n
        );
        let row = self.row(p);
        let coeffs = (0..=n)
            .map(|k| BigRational::from_integer(binomial(n as u64, k as i64)) * &row[n - k])
            .collect();
        PolyInX::new(coeffs, p as u64)
    }

    /// `E_n^(p)(x)` evaluated directly from the cached row.
    pub fn eval(&self, n: usize, p: usize, x: &ExactRational) -> ExactRational {
        eval_poly(&self.poly(n, p), x)
    }
}

/// Process-wide row cache covering at least degree `min_n`.
pub fn shared_rows(min_n: usize) -> Arc<GenEulerRows> {
    static CACHE: OnceLock<Mutex<Option<Arc<GenEulerRows>>>> = OnceLock::new();
    let mut slot = CACHE
        .get_or_init(|| Mutex::new(None))
        .lock()
        .expect("cache poisoned");
    match slot.as_ref() {
        Some(c) if c.max_n() >= min_n => Arc::clone(c),
        _ => {
            let fresh = Arc::new(GenEulerRows::new(min_n.max(8)));
            *slot = Some(Arc::clone(&fresh));
            fresh
        }
    }
}

/// `E_n^(p)(x)` through the order recursion and the binomial expansion in `x`.
pub fn gen_euler_recursive(n: usize, p: u64) -> PolyInX {
    let base = euler_at_zero(n);
    let mut row = order_zero_row(n);
    for _ in 0..p {
        row = next_order_row(&row, &base);
    }
    let coeffs = (0..=n)
        .map(|k| BigRational::from_integer(binomial(n as u64, k as i64)) * &row[n - k])
        .collect();
    PolyInX::new(coeffs, p)
}

/// `E_n^(p)(x)` as `n!` times the `z^n` coefficient of
/// `(2 / (1 + e^z))^p e^{xz}`, with the series handled to order `n`.
pub fn gen_euler_series(n: usize, p: u64) -> PolyInX {
    let order = n + 1;
    let half_denominator = TruncatedSeries::one(order)
        .add(&TruncatedSeries::exp(order))
        .scale(&rational(1, 2));
    let prefactor = half_denominator
        .reciprocal()
        .expect("(1 + e^z)/2 has constant term 1")
        .pow(p);
    // [z^n] prefactor * e^{xz} = sum_j prefactor_{n-j} x^j / j!
    let mut fact = vec![BigInt::one()];
    for i in 1..=n {
        let next = fact.last().unwrap() * i;
        fact.push(next);
    }
    let coeffs = (0..=n)
        .map(|j| {
            prefactor.coeffs()[n - j].clone() * BigRational::new(fact[n].clone(), fact[j].clone())
        })
        .collect();
    PolyInX::new(coeffs, p)
}

/// Horner evaluation.
pub fn eval_poly(poly: &PolyInX, x: &ExactRational) -> ExactRational {
    poly.coeffs
        .iter()
        .rev()
        .fold(BigRational::zero(), |acc, c| acc * x + c)
}

/// `|E_k| / 2^k`, the `k`-th moment of the density `sech(pi x)`.
pub fn sech_moment(k: usize) -> ExactRational {
    let e = euler_number_sequence(k);
    let mag = if e[k] < BigRational::zero() {
        -e[k].clone()
    } else {
        e[k].clone()
    };
    mag * pow2(-(k as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::integer;

    fn ints(v: &[i64]) -> ExactSequence {
        v.iter().map(|&x| integer(x)).collect()
    }

    #[test]
    fn euler_number_values() {
        let t = euler_numbers(8);
        assert_eq!(t.euler_numbers, ints(&[1, 0, -1, 0, 5, 0, -61, 0, 1385]));
        assert_eq!(t.euler_at_zero[0], integer(1));
        assert_eq!(t.euler_at_zero[1], rational(-1, 2));
        assert_eq!(t.euler_at_zero[2], integer(0));
    }

    #[test]
    fn euler_numbers_from_cosh_product() {
        // (sum E_n z^n / n!) * cosh z = 1 through z^12
        let order = 13;
        let e = euler_number_sequence(order - 1);
        let mut fact = BigInt::one();
        let mut egf = Vec::new();
        let mut cosh = Vec::new();
        for n in 0..order {
            if n > 0 {
                fact *= n;
            }
            egf.push(&e[n] / BigRational::from_integer(fact.clone()));
            cosh.push(if n % 2 == 0 {
                BigRational::new(BigInt::one(), fact.clone())
            } else {
                BigRational::zero()
            });
        }
        let prod = &TruncatedSeries::new(egf, order) * &TruncatedSeries::new(cosh, order);
        assert_eq!(prod, TruncatedSeries::one(order));
    }

    #[test]
    fn odd_euler_numbers_vanish_and_signs_alternate() {
        let e = euler_number_sequence(31);
        for n in (1..=31).step_by(2) {
            assert!(e[n].is_zero());
        }
        for m in 0..=15 {
            let v = &e[2 * m];
            assert!(if m % 2 == 0 {
                *v > BigRational::zero()
            } else {
                *v < BigRational::zero()
            });
        }
    }

    #[test]
    fn classical_polynomials() {
        assert_eq!(euler_poly(0).coeffs(), &ints(&[1])[..]);
        assert_eq!(euler_poly(1).coeffs(), &[rational(-1, 2), integer(1)][..]);
        assert_eq!(euler_poly(2).coeffs(), &ints(&[0, -1, 1])[..]);
        // E_3(x) = x^3 - 3/2 x^2 + 1/4
        assert_eq!(
            euler_poly(3).coeffs(),
            &[rational(1, 4), integer(0), rational(-3, 2), integer(1)][..]
        );
    }

    #[test]
    fn classical_matches_generating_function() {
        for n in 0..=12 {
            assert_eq!(
                euler_poly(n).coeffs(),
                gen_euler_series(n, 1).coeffs(),
                "n={n}"
            );
            assert_eq!(
                euler_poly(n).coeffs(),
                gen_euler_recursive(n, 1).coeffs(),
                "n={n}"
            );
        }
    }

    #[test]
    fn generalized_examples() {
        for p in 1..=10u64 {
            let e1 = gen_euler_recursive(1, p);
            assert_eq!(e1.coeffs(), &[rational(-(p as i64), 2), integer(1)][..]);
        }
        assert_eq!(
            gen_euler_recursive(2, 2).coeffs(),
            &[rational(1, 2), integer(-2), integer(1)][..]
        );
        assert_eq!(gen_euler_series(2, 2), gen_euler_recursive(2, 2));
        assert_eq!(gen_euler_series(0, 7).coeffs(), &ints(&[1])[..]);
        assert_eq!(
            gen_euler_series(1, 3).coeffs(),
            &[rational(-3, 2), integer(1)][..]
        );
        assert_eq!(gen_euler_series(3, 2), gen_euler_recursive(3, 2));
    }

    #[test]
    fn order_zero_is_monomial() {
        for n in 0..6 {
            let mut expect = vec![BigRational::zero(); n + 1];
            expect[n] = BigRational::one();
            assert_eq!(gen_euler_recursive(n, 0).coeffs(), &expect[..]);
            assert_eq!(gen_euler_series(n, 0).coeffs(), &expect[..]);
        }
    }

    #[test]
    fn evaluation() {
        assert_eq!(eval_poly(&euler_poly(1), &rational(1, 2)), integer(0));
        assert_eq!(eval_poly(&euler_poly(2), &integer(1)), integer(0));
        assert_eq!(eval_poly(&euler_poly(0), &rational(-17, 5)), integer(1));
    }

    #[test]
    fn cached_rows_match_direct() {
        let cache = GenEulerRows::new(6);
        for p in [0usize, 3, 1, 9, 5] {
            for n in 0..=6 {
                assert_eq!(cache.poly(n, p), gen_euler_recursive(n, p as u64));
            }
        }
        let shared = shared_rows(4);
        assert!(shared.max_n() >= 4);
        assert_eq!(shared.eval(2, 2, &integer(0)), rational(1, 2));
    }

    #[test]
    fn sech_moments() {
        assert_eq!(sech_moment(0), integer(1));
        assert_eq!(sech_moment(2), rational(1, 4));
        assert_eq!(sech_moment(4), rational(5, 16));
        assert_eq!(sech_moment(6), rational(61, 64));
        assert_eq!(sech_moment(3), integer(0));
    }
}
