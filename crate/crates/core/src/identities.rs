//! Checks of the identities tying the probability numbers to Euler
//! polynomials, the generating-function asymptotics and the Catalan
//! convolution-power prefix.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::eulerpoly::{euler_poly, eval_poly, shared_rows};
use crate::exactnum::{
    abs_le, catalan_sequence, convolution_power, format_rational, integer, pow2, rational, to_f64,
    ExactRational, ExactSequence, TruncatedSeries,
};
use crate::probnum::ProbNumbers;

/// Default cap on the largest order `k` summed before giving up.
pub const DEFAULT_TERM_BUDGET: usize = 20_000;

/// Truncated sum of the expansion of `E_n(x)` over generalized Euler
/// polynomials weighted by `p_k^(N)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructionResult {
    pub n: usize,
    pub big_n: usize,
    pub x: ExactRational,
    /// Number of nonzero-weight terms summed.
    pub terms_used: usize,
    /// Largest order `k` included.
    pub last_k: usize,
    pub partial_value: ExactRational,
    pub target: ExactRational,
    pub abs_error: f64,
    /// Geometric extrapolation of the remaining terms from the last one.
    pub tail_estimate: f64,
    /// First `k` whose term fell below `tol / 10` in magnitude.
    pub small_term_k: Option<usize>,
}

impl ReconstructionResult {
    pub fn to_report(&self, tol: f64) -> ReconstructionReport {
        ReconstructionReport {
            n: self.n,
            big_n: self.big_n,
            x: format_rational(&self.x),
            tol,
            terms_used: self.terms_used,
            last_k: self.last_k,
            partial_value: to_f64(&self.partial_value),
            partial_value_exact: format_rational(&self.partial_value),
            target: format_rational(&self.target),
            abs_error: self.abs_error,
            tail_estimate: self.tail_estimate,
            small_term_k: self.small_term_k,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReconstructionReport {
    pub n: usize,
    #[serde(rename = "N")]
    pub big_n: usize,
    pub x: String,
    pub tol: f64,
    pub terms_used: usize,
    pub last_k: usize,
    pub partial_value: f64,
    pub partial_value_exact: String,
    pub target: String,
    pub abs_error: f64,
    pub tail_estimate: f64,
    pub small_term_k: Option<usize>,
}

/// Ratio between consecutive nonzero weights for large `k`,
/// `cos^2(pi / 2N)`.
fn weight_decay(big_n: usize) -> f64 {
    (std::f64::consts::PI / (2.0 * big_n as f64)).cos().powi(2)
}

/// Sums `N^{-n} sum_k p_k^(N) E_n^(k)(k/2 + N(x - 1/2))` in exact arithmetic
/// until the distance to the exact `E_n(x)` is at most `tol`.
pub fn reconstruct_euler(
    n: usize,
    big_n: usize,
    x: &ExactRational,
    tol: f64,
) -> Result<ReconstructionResult> {
    reconstruct_euler_with_budget(n, big_n, x, tol, DEFAULT_TERM_BUDGET)
}

pub fn reconstruct_euler_with_budget(
    n: usize,
    big_n: usize,
    x: &ExactRational,
    tol: f64,
    max_k: usize,
) -> Result<ReconstructionResult> {
    if big_n < 2 {
        return Err(Error::param("the expansion needs N >= 2"));
    }
    if !(tol > 0.0) {
        return Err(Error::param("tolerance must be positive"));
    }
    let target = eval_poly(&euler_poly(n), x);
    let shift = integer(big_n as i64) * (x - rational(1, 2));
    let scale = BigRational::new(BigInt::one(), BigInt::from(big_n).pow(n as u32));
    let target_scaled = &target / &scale;
    let term_cut = BigRational::from_float(tol / 10.0).expect("finite tolerance") / &scale;

    let rows = shared_rows(n);
    let mut weights = ProbNumbers::new(big_n)?;
    // Accumulate N^n times the partial sum to avoid one multiplication per term.
    let mut acc = BigRational::zero();
    let mut terms = 0;
    let mut small_term_k = None;
    let mut k = big_n;
    loop {
        if k > max_k {
            let err = (&acc - &target_scaled) * &scale;
            return Err(Error::Convergence {
                terms,
                achieved: to_f64(&err.abs()),
                wanted: tol,
            });
        }
        let y = rational(k as i64, 2) + &shift;
        let term = weights.get(k) * rows.eval(n, k, &y);
        if small_term_k.is_none() && term.abs() < term_cut {
            small_term_k = Some(k);
        }
        acc += &term;
        terms += 1;
        let err = (&acc - &target_scaled) * &scale;
        if abs_le(&err, tol) {
            let r = weight_decay(big_n);
            let last = to_f64(&(term.abs() * &scale));
            return Ok(ReconstructionResult {
                n,
                big_n,
                x: x.clone(),
                terms_used: terms,
                last_k: k,
                partial_value: acc * scale,
                target,
                abs_error: to_f64(&err.abs()),
                tail_estimate: last * r / (1.0 - r),
                small_term_k,
            });
        }
        k += 2;
    }
}

/// Distance between `sum_k p_k^(N) E_n^(k)(k/2)` (summed until terms stay
/// below `1e-12`) and `N^n E_n(1/2)`.
pub fn expectation_form_check(n: usize, big_n: usize) -> Result<ExactRational> {
    const TOL: f64 = 1e-12;
    if big_n < 2 {
        return Err(Error::param("the expectation form needs N >= 2"));
    }
    let rhs = BigRational::from_integer(BigInt::from(big_n).pow(n as u32))
        * eval_poly(&euler_poly(n), &rational(1, 2));
    let rows = shared_rows(n);
    let mut weights = ProbNumbers::new(big_n)?;
    let mut acc = BigRational::zero();
    let mut k = big_n;
    let mut quiet = 0;
    let r = weight_decay(big_n);
    let tail_factor = r / (1.0 - r);
    while k <= DEFAULT_TERM_BUDGET {
        let term = weights.get(k) * rows.eval(n, k, &rational(k as i64, 2));
        acc += &term;
        // Stop once a run of terms and their geometric tail sit below TOL.
        if to_f64(&term.abs()) * (1.0 + tail_factor) <= TOL {
            quiet += 1;
            if quiet >= 8 {
                return Ok((acc - rhs).abs());
            }
        } else {
            quiet = 0;
        }
        k += 2;
    }
    Err(Error::Convergence {
        terms: (DEFAULT_TERM_BUDGET - big_n) / 2 + 1,
        achieved: to_f64(&(acc - rhs).abs()),
        wanted: TOL,
    })
}

/// `phi_N(z) * ((1 + sqrt(1 - z^2)) / z)^N` with `phi_N(z) = 1/T_N(1/z)`.
///
/// With `a = (1 + sqrt(1 - z^2)) / z` Binet gives `T_N(1/z) = (a^N + a^{-N})/2`,
/// so the ratio is `2 / (1 + a^{-2N})`, which tends to 2.
pub fn asymptotic_ratio(big_n: usize, z: f64) -> Result<f64> {
    if !(z > 0.0 && z < 1.0) {
        return Err(Error::param(format!("z must lie in (0, 1), got {z}")));
    }
    if big_n == 0 {
        return Err(Error::param("N must be >= 1"));
    }
    let a_inv = z / (1.0 + (1.0 - z * z).sqrt());
    let small = a_inv.powi(2 * big_n as i32);
    Ok(2.0 / (1.0 + small))
}

/// `q_ell^(N) = 2^{ell-1} p_ell^(N)` for `ell <= max_ell`.
#[derive(Debug, Clone, PartialEq)]
pub struct QSequence {
    pub big_n: usize,
    pub values: ExactSequence,
}

pub fn q_sequence(big_n: usize, max_ell: usize) -> Result<QSequence> {
    let mut p = ProbNumbers::new(big_n)?;
    let values = (0..=max_ell)
        .map(|ell| p.get(ell) * pow2(ell as i64 - 1))
        .collect();
    Ok(QSequence { big_n, values })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CatalanPrefixReport {
    #[serde(rename = "N")]
    pub big_n: usize,
    /// Pairs `(q_{N+2k}, C^{(*N)}_k)` for `k < N`.
    pub matched: Vec<(String, String)>,
    /// Index of the first nonzero coefficient of
    /// `(sum C_n z^{2n+1})^N - sum q_ell z^ell`.
    pub first_mismatch: Option<usize>,
    /// That coefficient, recorded for reference.
    pub leading_difference: Option<String>,
}

/// Verifies `q_{N+2k}^(N) = (C^{(*N)})_k` for `k = 0..N` and that the
/// difference series first becomes nonzero at `z^{3N}`.
pub fn catalan_prefix_check(big_n: usize) -> Result<CatalanPrefixReport> {
    if big_n == 0 {
        return Err(Error::param("N must be >= 1"));
    }
    let order = 3 * big_n + 2;
    let q = q_sequence(big_n, order - 1)?;
    let cat = catalan_sequence(big_n);
    let conv = convolution_power(&cat, big_n)?;
    let mut matched = Vec::with_capacity(big_n);
    for k in 0..big_n {
        let lhs = &q.values[big_n + 2 * k];
        if *lhs != conv[k] {
            return Err(Error::Validation {
                n: big_n,
                ell: big_n + 2 * k,
                methods: "q/catalan-power",
                detail: format!(
                    "k={k}: {} != {}",
                    format_rational(lhs),
                    format_rational(&conv[k])
                ),
            });
        }
        matched.push((format_rational(lhs), format_rational(&conv[k])));
    }

    // u(z) = sum C_n z^{2n+1}
    let mut u = vec![BigRational::zero(); order];
    for (i, c) in catalan_sequence(order / 2 + 1).into_iter().enumerate() {
        if 2 * i + 1 < order {
            u[2 * i + 1] = c;
        }
    }
    let u_pow = TruncatedSeries::new(u, order).pow(big_n as u64);
    let diff = u_pow.sub(&TruncatedSeries::new(q.values, order));
    let first = diff.valuation();
    let leading = first.map(|i| format_rational(&diff.coeffs()[i]));
    if first != Some(3 * big_n) {
        return Err(Error::Validation {
            n: big_n,
            ell: first.unwrap_or(order),
            methods: "q/catalan-power",
            detail: format!("difference valuation {first:?}, expected {}", 3 * big_n),
        });
    }
    Ok(CatalanPrefixReport {
        big_n,
        matched,
        first_mismatch: first,
        leading_difference: leading,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CatalanGfReport {
    pub order: usize,
    /// `z S^2 - S + 1` through `z^order`, all zero when the check passes.
    pub residual: Vec<String>,
    pub holds: bool,
}

/// Checks `z S(z)^2 - S(z) + 1 = 0` through `z^order` for `S = sum C_n z^n`.
pub fn catalan_gf_check(order: usize) -> Result<CatalanGfReport> {
    if order == 0 {
        return Err(Error::param("order must be >= 1"));
    }
    let len = order + 1;
    let s = TruncatedSeries::new(catalan_sequence(len), len);
    let sq = &s * &s;
    let mut z_sq = vec![BigRational::zero()];
    z_sq.extend(sq.coeffs().iter().take(order).cloned());
    let residual = TruncatedSeries::new(z_sq, len)
        .sub(&s)
        .add(&TruncatedSeries::one(len));
    let holds = residual.valuation().is_none();
    Ok(CatalanGfReport {
        order,
        residual: residual.coeffs().iter().map(format_rational).collect(),
        holds,
    })
}
