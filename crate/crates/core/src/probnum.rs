//! The probability numbers `p_ell^(N)`, coefficients of `1/T_N(1/z)`, which
//! give the law of the random index `mu_N`.
//!
//! Three independent routes are provided: exact series division
//! ([`probnum_series`]), the root-sum formula in floating point
//! ([`probnum_trig`]) and the Catalan-triangle sum ([`probnum_catalan`]).
//! [`cross_validate`] checks them against each other.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::chebyshev::{reversed_t, root_thetas};
use crate::error::{Error, Result};
use crate::exactnum::{
    ballot_a, format_rational, pow2, to_f64, to_f64_upper, ExactRational, ExactSequence,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Series,
    Trig,
    Catalan,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Series => "series",
            Method::Trig => "trig",
            Method::Catalan => "catalan",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProbValues {
    Exact(ExactSequence),
    Float(Vec<f64>),
}

/// Prefix `p_0, ..., p_max_ell` of the law of `mu_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbTable {
    pub n: usize,
    pub max_ell: usize,
    pub values: ProbValues,
    pub method: Method,
    /// Upper bound on the mass beyond `max_ell`.
    pub tail_bound: f64,
}

impl ProbTable {
    pub fn exact_value(&self, ell: usize) -> Option<&ExactRational> {
        match &self.values {
            ProbValues::Exact(v) => v.get(ell),
            ProbValues::Float(_) => None,
        }
    }

    pub fn float_value(&self, ell: usize) -> Option<f64> {
        match &self.values {
            ProbValues::Exact(v) => v.get(ell).map(to_f64),
            ProbValues::Float(v) => v.get(ell).copied(),
        }
    }

    /// Whether `ell` can carry mass: `ell >= N` and `ell = N (mod 2)`.
    pub fn in_support(&self, ell: usize) -> bool {
        in_support(self.n, ell)
    }

    pub fn rows(&self) -> Vec<ProbRow> {
        (0..=self.max_ell)
            .map(|ell| ProbRow {
                ell,
                exact: self.exact_value(ell).map(format_rational),
                float: self.float_value(ell).unwrap_or(f64::NAN),
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbRow {
    pub ell: usize,
    pub exact: Option<String>,
    pub float: f64,
}

pub fn in_support(n: usize, ell: usize) -> bool {
    ell >= n && (ell - n) % 2 == 0
}

/// `theta_k^(N)` together with its index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootAngle {
    pub k: usize,
    pub theta: f64,
}

pub fn root_angles(n: usize) -> Vec<RootAngle> {
    root_thetas(n)
        .into_iter()
        .enumerate()
        .map(|(i, theta)| RootAngle { k: i + 1, theta })
        .collect()
}

/// Exact coefficients of `1/T_N(1/z)`, extended on demand.
///
/// `1/T_N(1/z) = z^N / q(z)` with `q(z) = z^N T_N(1/z)`, and `q` has constant
/// term `2^{N-1}`, so the coefficients follow from a short linear recurrence
/// over the `N + 1` coefficients of `q`.
#[derive(Debug, Clone)]
pub struct ProbNumbers {
    n: usize,
    inv_lead: ExactRational,
    // (j, c_j) for the nonzero coefficients of q with j >= 1
    tail: Vec<(usize, ExactRational)>,
    // coefficients of 1/q(z)
    recip: ExactSequence,
}

impl ProbNumbers {
    pub fn new(n: usize) -> Result<Self> {
        let q = reversed_t(n)?;
        let inv_lead = q.coeff(0).recip();
        let tail = q
            .coeffs()
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| (j, c.clone()))
            .collect();
        Ok(ProbNumbers {
            n,
            recip: vec![inv_lead.clone()],
            inv_lead,
            tail,
        })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    fn extend_recip(&mut self, len: usize) {
        while self.recip.len() < len {
            let m = self.recip.len();
            let mut acc = BigRational::zero();
            for (j, c) in &self.tail {
                if *j > m {
                    break;
                }
                let b = &self.recip[m - j];
                if !b.is_zero() {
                    acc += c * b;
                }
            }
            self.recip.push(-(acc * &self.inv_lead));
        }
    }

    /// `p_ell^(N)`.
    pub fn get(&mut self, ell: usize) -> ExactRational {
        if !in_support(self.n, ell) {
            return BigRational::zero();
        }
        self.extend_recip(ell - self.n + 1);
        self.recip[ell - self.n].clone()
    }

    /// `p_0, ..., p_max_ell`.
    pub fn prefix(&mut self, max_ell: usize) -> ExactSequence {
        (0..=max_ell).map(|ell| self.get(ell)).collect()
    }
}

fn check_table_args(n: usize, max_ell: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::param("N must be >= 1"));
    }
    if max_ell < n {
        return Err(Error::param(format!(
            "max_ell ({max_ell}) must be >= N ({n})"
        )));
    }
    Ok(())
}

fn exact_tail(values: &[ExactRational]) -> ExactRational {
    let total: BigRational = values.iter().sum();
    BigRational::one() - total
}

/// Exact table by series division of `z^N` by `z^N T_N(1/z)`.
pub fn probnum_series(n: usize, max_ell: usize) -> Result<ProbTable> {
    check_table_args(n, max_ell)?;
    let values = ProbNumbers::new(n)?.prefix(max_ell);
    let tail_bound = to_f64_upper(&exact_tail(&values));
    Ok(ProbTable {
        n,
        max_ell,
        values: ProbValues::Exact(values),
        method: Method::Series,
        tail_bound,
    })
}

/// `p_ell^(N) = (1/N) sum_k (-1)^{k+1} sin(theta_k) cos^{ell-1}(theta_k)` in
/// double precision, compensated over `k`.
pub fn trig_value(n: usize, ell: usize) -> f64 {
    if n == 0 || ell == 0 {
        return 0.0;
    }
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for RootAngle { k, theta } in root_angles(n) {
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        let term = sign * theta.sin() * theta.cos().powi(ell as i32 - 1);
        // Kahan–Babuška (Neumaier) step
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
    }
    (sum + comp) / n as f64
}

pub fn probnum_trig(n: usize, max_ell: usize) -> Result<ProbTable> {
    check_table_args(n, max_ell)?;
    let values = (0..=max_ell).map(|ell| trig_value(n, ell)).collect();
    Ok(ProbTable {
        n,
        max_ell,
        values: ProbValues::Float(values),
        method: Method::Trig,
        tail_bound: tail_mass(n, max_ell)?,
    })
}

/// `p_ell^(N)` from the alternating Catalan-triangle sums.
///
/// When `ell` is an odd multiple `(2k+1)N` of `N` the closed term
/// `(-1)^k / 2^{ell-1}` is split off and the remaining sum runs over
/// `s = 1..=ell/N - 1`; otherwise the sum runs over
/// `t = floor(((2-ell)/N - 1)/2) ..= floor((ell/N - 1)/2)`.
pub fn probnum_catalan(n: usize, ell: usize) -> Result<ExactRational> {
    if n == 0 || ell == 0 {
        return Err(Error::param("probnum_catalan needs N >= 1 and ell >= 1"));
    }
    if (ell + n) % 2 != 0 {
        return Err(Error::param(format!(
            "probnum_catalan: ell={ell} and N={n} have different parity"
        )));
    }
    let n_i = n as i64;
    let ell_i = ell as i64;
    let row = ell as u64 - 1;
    let signed = |neg: bool, v: BigInt| if neg { -v } else { v };

    let value = if ell % n == 0 && (ell / n) % 2 == 1 {
        let k = (ell_i / n_i - 1) / 2;
        let mut sum = BigInt::zero();
        // upper limit ell/N - 1, which equals floor(ell/N - 1) here
        for s in 1..=(ell_i / n_i - 1) {
            sum += signed((k - s).is_odd(), ballot_a(row, s * n_i));
        }
        BigRational::new(sum, BigInt::one() << ell) + signed_unit(k.is_odd()) * pow2(1 - ell_i)
    } else {
        // floor(((2 - ell)/N - 1)/2) = floor((2 - ell - N) / (2N))
        let t_lo = (2 - ell_i - n_i).div_euclid(2 * n_i);
        let t_hi = (ell_i - n_i).div_euclid(2 * n_i);
        let mut sum = BigInt::zero();
        for t in t_lo..=t_hi {
            let twice_r = ell_i - (2 * t + 1) * n_i;
            debug_assert!(twice_r % 2 == 0);
            sum += signed(t.is_odd(), ballot_a(row, twice_r / 2));
        }
        BigRational::new(sum, BigInt::one() << ell)
    };
    Ok(value)
}

fn signed_unit(neg: bool) -> BigRational {
    if neg {
        -BigRational::one()
    } else {
        BigRational::one()
    }
}

/// Table built from [`probnum_catalan`], zero off the parity class.
pub fn probnum_catalan_table(n: usize, max_ell: usize) -> Result<ProbTable> {
    check_table_args(n, max_ell)?;
    let values = (0..=max_ell)
        .map(|ell| {
            if ell == 0 || (ell + n) % 2 != 0 {
                Ok(BigRational::zero())
            } else {
                probnum_catalan(n, ell)
            }
        })
        .collect::<Result<ExactSequence>>()?;
    let tail_bound = to_f64_upper(&exact_tail(&values));
    Ok(ProbTable {
        n,
        max_ell,
        values: ProbValues::Exact(values),
        method: Method::Catalan,
        tail_bound,
    })
}

/// `f_N(z) = sum_{k=1}^{N} (-1)^{k+1} e^{i theta_k z}` in closed form.
pub fn f_n(n: usize, z: f64) -> Complex64 {
    let nf = n as f64;
    let ratio = z / nf;
    let nearest = ratio.round();
    if (ratio - nearest).abs() <= 1e-12 && (nearest as i64).rem_euclid(2) == 1 {
        // z = (2t + 1) N: the closed form is 0/0, take the limit
        let t = (nearest as i64 - 1) / 2;
        let sign = if t.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        return Complex64::new(0.0, sign * nf);
    }
    let parity = if n % 2 == 0 { 1.0 } else { -1.0 };
    let num =
        Complex64::new(1.0, 0.0) - parity * Complex64::from_polar(1.0, std::f64::consts::PI * z);
    num / (2.0 * (std::f64::consts::PI * z / (2.0 * nf)).cos())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossValidation {
    pub n: usize,
    pub max_ell: usize,
    pub tol: f64,
    /// Largest `|series - trig|` over `0..=max_ell`.
    pub max_trig_deviation: f64,
    pub worst_ell: usize,
}

/// Checks series against catalan exactly and series against trig within
/// `tol`.
pub fn cross_validate(n: usize, max_ell: usize, tol: f64) -> Result<CrossValidation> {
    if !(tol > 0.0) {
        return Err(Error::param("tolerance must be positive"));
    }
    let series = probnum_series(n, max_ell)?;
    let catalan = probnum_catalan_table(n, max_ell)?;
    let mut max_dev = 0.0f64;
    let mut worst = 0;
    for ell in 0..=max_ell {
        let s = series.exact_value(ell).expect("exact table");
        let c = catalan.exact_value(ell).expect("exact table");
        if s != c {
            return Err(Error::Validation {
                n,
                ell,
                methods: "series/catalan",
                detail: format!("{} != {}", format_rational(s), format_rational(c)),
            });
        }
        let dev = (to_f64(s) - trig_value(n, ell)).abs();
        if !(dev <= tol) {
            return Err(Error::Validation {
                n,
                ell,
                methods: "series/trig",
                detail: format!("deviation {dev:e} exceeds {tol:e}"),
            });
        }
        if dev > max_dev {
            max_dev = dev;
            worst = ell;
        }
    }
    Ok(CrossValidation {
        n,
        max_ell,
        tol,
        max_trig_deviation: max_dev,
        worst_ell: worst,
    })
}

/// Exact `1 - sum_{ell <= max_ell} p_ell^(N)`, rounded up to `f64`.
pub fn tail_mass(n: usize, max_ell: usize) -> Result<f64> {
    check_table_args(n, max_ell)?;
    let values = ProbNumbers::new(n)?.prefix(max_ell);
    Ok(to_f64_upper(&exact_tail(&values)))
}

/// Denominator of `r` divides `2^e`.
pub fn denominator_divides_pow2(r: &ExactRational, e: usize) -> bool {
    let d = r.denom();
    if d.is_negative() {
        return false;
    }
    let tz = d.trailing_zeros().unwrap_or(0);
    (d >> tz as usize).is_one() && tz as usize <= e
}
