//! Exact integers, rationals and the small combinatorial toolkit the rest of
//! the crate is built on.

mod series;

pub use series::TruncatedSeries;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision signed integer.
pub type ExactInteger = BigInt;

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator.
pub type ExactRational = BigRational;

/// Finite sequence of exact rationals indexed from 0.
pub type ExactSequence = Vec<ExactRational>;

/// `num / den` as a normalized rational. Panics if `den == 0`.
pub fn rational(num: i64, den: i64) -> ExactRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn integer(v: i64) -> ExactRational {
    BigRational::from_integer(BigInt::from(v))
}

/// `2^e` as a rational, `e` may be negative.
pub fn pow2(e: i64) -> ExactRational {
    let mag = BigInt::one() << e.unsigned_abs();
    if e >= 0 {
        BigRational::from_integer(mag)
    } else {
        BigRational::new(BigInt::one(), mag)
    }
}

/// Binomial coefficient with the convention `binom(n, k) = 0` for `k < 0`
/// or `k > n`.
pub fn binomial(n: u64, k: i64) -> ExactInteger {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `C_n = binom(2n, n) / (n + 1)`.
pub fn catalan_number(n: u64) -> ExactInteger {
    binomial(2 * n, n as i64) / (n + 1)
}

/// Catalan-triangle entry `A(n, k) = binom(n, k) - binom(n, k - 1)`.
///
/// Total in `k`: outside the triangle it follows the zero-binomial
/// convention, so e.g. `A(1, 2) = -1`.
pub fn ballot_a(n: u64, k: i64) -> ExactInteger {
    binomial(n, k) - binomial(n, k - 1)
}

/// Full Cauchy product, `len(a) + len(b) - 1` terms. Empty input gives an
/// empty result.
pub fn convolve(a: &[ExactRational], b: &[ExactRational]) -> ExactSequence {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    convolve_truncated(a, b, a.len() + b.len() - 1)
}

/// Cauchy product keeping only the first `len` terms. Inputs are treated as
/// zero beyond their stored length.
pub fn convolve_truncated(a: &[ExactRational], b: &[ExactRational], len: usize) -> ExactSequence {
    let mut out = vec![BigRational::zero(); len];
    for (i, ai) in a.iter().enumerate().take(len) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(len - i) {
            if !bj.is_zero() {
                out[i + j] += ai * bj;
            }
        }
    }
    out
}

/// `N`-fold self-convolution, computed by repeated squaring.
pub fn convolution_power(a: &[ExactRational], n: usize) -> Result<ExactSequence> {
    if n == 0 {
        return Err(Error::param("convolution power needs N >= 1"));
    }
    if a.is_empty() {
        return Ok(Vec::new());
    }
    let mut base = a.to_vec();
    let mut acc: Option<ExactSequence> = None;
    let mut e = n;
    loop {
        if e & 1 == 1 {
            acc = Some(match acc {
                None => base.clone(),
                Some(x) => convolve(&x, &base),
            });
        }
        e >>= 1;
        if e == 0 {
            break;
        }
        base = convolve(&base, &base);
    }
    Ok(acc.expect("n >= 1"))
}

/// `C_0, ..., C_{len-1}` as rationals.
pub fn catalan_sequence(len: usize) -> ExactSequence {
    (0..len as u64)
        .map(|n| BigRational::from_integer(catalan_number(n)))
        .collect()
}

pub fn to_f64(r: &ExactRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Smallest `f64` that is `>= r`.
pub fn to_f64_upper(r: &ExactRational) -> f64 {
    let f = to_f64(r);
    match BigRational::from_float(f) {
        Some(back) if back < *r => f.next_up(),
        _ => f,
    }
}

/// `|r| <= tol`, compared exactly against the binary value of `tol`.
pub fn abs_le(r: &ExactRational, tol: f64) -> bool {
    match BigRational::from_float(tol) {
        Some(t) => r.abs() <= t,
        None => tol.is_infinite() && tol > 0.0,
    }
}

/// `"num/den"`, with the denominator omitted when it is 1.
pub fn format_rational(r: &ExactRational) -> String {
    r.to_string()
}

/// Parses `"a"` or `"a/b"` with integer `a`, `b`. Decimals are rejected.
pub fn parse_rational(s: &str) -> Result<ExactRational> {
    let fail = |reason: &str| Error::Parse {
        what: "rational",
        input: s.to_string(),
        reason: reason.to_string(),
    };
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (t, "1"),
    };
    let parse_int = |v: &str| -> Result<BigInt> {
        if v.is_empty() || v.contains(['.', 'e', 'E']) {
            return Err(fail("expected an integer or a/b"));
        }
        v.parse::<BigInt>()
            .map_err(|_| fail("expected an integer or a/b"))
    };
    let num = parse_int(num)?;
    let den = parse_int(den)?;
    if den.is_zero() {
        return Err(fail("zero denominator"));
    }
    Ok(BigRational::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> ExactSequence {
        v.iter().map(|&x| integer(x)).collect()
    }

    fn pascal_row(n: usize) -> Vec<BigInt> {
        let mut row = vec![BigInt::one()];
        for _ in 0..n {
            let mut next = vec![BigInt::one(); row.len() + 1];
            for i in 1..row.len() {
                next[i] = &row[i - 1] + &row[i];
            }
            row = next;
        }
        row
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(3, -1), BigInt::zero());
        assert_eq!(binomial(3, 4), BigInt::zero());
        assert_eq!(binomial(0, 0), BigInt::one());
        // Pascal oracle
        let row = pascal_row(40);
        assert_eq!(row[20], BigInt::from(137_846_528_820_i64));
        assert_eq!(binomial(40, 20), BigInt::from(137_846_528_820_i64));
        for (k, v) in row.iter().enumerate() {
            assert_eq!(&binomial(40, k as i64), v);
        }
    }

    #[test]
    fn catalan_values() {
        assert_eq!(catalan_number(0), BigInt::one());
        assert_eq!(catalan_number(4), BigInt::from(14));
        assert_eq!(catalan_number(10), BigInt::from(16796));
        // binom(8,4)/5
        assert_eq!(catalan_number(4), binomial(8, 4) / 5);
    }

    #[test]
    fn ballot_values() {
        assert_eq!(ballot_a(1, 0), BigInt::from(1));
        assert_eq!(ballot_a(1, 2), BigInt::from(-1));
        assert_eq!(ballot_a(5, 2), BigInt::from(5));
    }

    #[test]
    fn ballot_nonnegative_in_triangle() {
        for n in 0..=30u64 {
            for k in 0..=((n + 1) / 2) as i64 {
                assert!(!ballot_a(n, k).is_negative(), "A({n},{k})");
            }
        }
    }

    #[test]
    fn convolve_examples() {
        assert_eq!(convolve(&ints(&[1, 1]), &ints(&[1, 1])), ints(&[1, 2, 1]));
        let s = ints(&[3, -1, 4, 1, 5]);
        assert_eq!(convolve(&ints(&[1]), &s), s);
        let c = catalan_sequence(4);
        let sq = convolve(&c, &c);
        // C^(*2)_k = C_{k+1} on the part unaffected by truncation
        assert_eq!(&sq[..4], &ints(&[1, 2, 5, 14])[..]);
    }

    #[test]
    fn convolution_power_examples() {
        let c = ints(&[1, 1, 2, 5]);
        assert_eq!(convolution_power(&c, 1).unwrap(), c);
        let c5 = ints(&[1, 1, 2, 5, 14]);
        let sq = convolution_power(&c5, 2).unwrap();
        assert_eq!(sq, convolve(&c5, &c5));
        assert_eq!(&sq[..4], &ints(&[1, 2, 5, 14])[..]);
        assert_eq!(
            convolution_power(&ints(&[1, 1]), 3).unwrap(),
            ints(&[1, 3, 3, 1])
        );
        assert!(convolution_power(&c, 0).is_err());
    }

    #[test]
    fn rational_text() {
        assert_eq!(format_rational(&rational(6, -4)), "-3/2");
        assert_eq!(format_rational(&integer(7)), "7");
        assert_eq!(parse_rational("-2/3").unwrap(), rational(-2, 3));
        assert_eq!(parse_rational("5").unwrap(), integer(5));
        assert_eq!(parse_rational(" 4/8 ").unwrap(), rational(1, 2));
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("1e3").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn float_rounding_up() {
        let third = rational(1, 3);
        let up = to_f64_upper(&third);
        assert!(BigRational::from_float(up).unwrap() >= third);
        assert_eq!(to_f64_upper(&pow2(-10)), 0.0009765625);
        assert!(abs_le(&rational(-1, 1_000_000_000_000), 1e-9));
        assert!(!abs_le(&rational(1, 1000), 1e-9));
    }
}
