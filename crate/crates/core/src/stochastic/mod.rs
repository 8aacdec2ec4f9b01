//! Sampling of the hyperbolic secant law (density `sech(pi x)`) and of the
//! random index `mu_N`, plus Monte Carlo checks of the probabilistic
//! representations of Euler polynomials.
//!
//! Estimates are computed over a fixed number of child streams
//! ([`CHUNKS`]) and merged in order, so results depend only on the seed and
//! sample size, never on the thread count.

mod quadrature;
mod stream;

pub use quadrature::integrate;
pub use stream::RandomStream;

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::eulerpoly::{euler_poly, eval_poly, gen_euler_recursive, sech_moment};
use crate::exactnum::{format_rational, rational, to_f64, ExactRational};
use crate::probnum::ProbNumbers;

/// Number of child streams a Monte Carlo run is partitioned into.
pub const CHUNKS: u64 = 32;

/// Default width of the acceptance band, in standard errors.
pub const DEFAULT_BAND: f64 = 4.0;

/// Mass left untabulated by the `mu_N` sampler.
pub const MU_TAIL_CUTOFF: f64 = 1e-15;

/// Asymptotic Kolmogorov quantile for a 1% two-sided test.
pub const KS_CRITICAL_1PCT: f64 = 1.628;

/// Inverse CDF of `sech(pi x)`: `x = ln(tan(pi u / 2)) / pi`.
pub fn sech_quantile(u: f64) -> f64 {
    (0.5 * PI * u).tan().ln() / PI
}

/// `F(x) = (2/pi) arctan(e^{pi x})`.
pub fn sech_cdf(x: f64) -> f64 {
    2.0 / PI * (PI * x).exp().atan()
}

pub fn sample_sech(stream: &mut RandomStream, count: usize) -> Vec<f64> {
    (0..count)
        .map(|_| sech_quantile(stream.uniform_open()))
        .collect()
}

/// Inverse-CDF sampler over the exact law of `mu_N`, tabulated until the
/// remaining mass is below [`MU_TAIL_CUTOFF`]. A uniform draw beyond the
/// table lands on the next support point and is reported as overflow.
#[derive(Debug, Clone)]
pub struct MuSampler {
    n: usize,
    support: Vec<usize>,
    cdf: Vec<f64>,
    mean_prefix: ExactRational,
    tail: ExactRational,
}

impl MuSampler {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::param("mu_N is sampled for N >= 2"));
        }
        let cutoff = BigRational::from_float(MU_TAIL_CUTOFF).expect("finite");
        let mut probs = ProbNumbers::new(n)?;
        let mut support = Vec::new();
        let mut cdf = Vec::new();
        let mut partial = BigRational::zero();
        let mut mean_prefix = BigRational::zero();
        let mut ell = n;
        loop {
            let p = probs.get(ell);
            mean_prefix += &p * BigRational::from_integer(ell.into());
            partial += p;
            support.push(ell);
            cdf.push(to_f64(&partial));
            let tail = BigRational::one() - &partial;
            if tail < cutoff {
                return Ok(MuSampler {
                    n,
                    support,
                    cdf,
                    mean_prefix,
                    tail,
                });
            }
            ell += 2;
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    /// Exact mass not covered by the table.
    pub fn tail_mass(&self) -> &ExactRational {
        &self.tail
    }

    /// `sum ell p_ell` over the tabulated support.
    pub fn mean_prefix(&self) -> &ExactRational {
        &self.mean_prefix
    }

    /// Maps a uniform draw to a value of `mu_N`; the flag marks overflow.
    pub fn quantile(&self, u: f64) -> (usize, bool) {
        let i = self.cdf.partition_point(|&c| c < u);
        match self.support.get(i) {
            Some(&v) => (v, false),
            None => (self.support.last().unwrap() + 2, true),
        }
    }

    pub fn sample(&self, stream: &mut RandomStream) -> (usize, bool) {
        self.quantile(stream.uniform_open())
    }
}

/// Shared sampler per `N`, built on first use.
pub fn mu_sampler(n: usize) -> Result<Arc<MuSampler>> {
    static CACHE: OnceLock<Mutex<BTreeMap<usize, Arc<MuSampler>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    if let Some(s) = cache.lock().expect("sampler cache poisoned").get(&n) {
        return Ok(Arc::clone(s));
    }
    let built = Arc::new(MuSampler::new(n)?);
    let mut guard = cache.lock().expect("sampler cache poisoned");
    Ok(Arc::clone(guard.entry(n).or_insert(built)))
}

pub fn sample_mu(stream: &mut RandomStream, n: usize, count: usize) -> Result<Vec<usize>> {
    let sampler = mu_sampler(n)?;
    Ok((0..count).map(|_| sampler.sample(stream).0).collect())
}

/// Welford running mean and variance.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Running {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Running {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let d = x - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (x - self.mean);
    }

    /// Chan et al. pairwise combination.
    pub fn merge(&mut self, other: &Running) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let n = (self.count + other.count) as f64;
        let d = other.mean - self.mean;
        self.mean += d * other.count as f64 / n;
        self.m2 += other.m2 + d * d * self.count as f64 * other.count as f64 / n;
        self.count += other.count;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn standard_error(&self) -> f64 {
        if self.count < 2 {
            return 0.0;
        }
        let var = self.m2 / (self.count - 1) as f64;
        (var / self.count as f64).sqrt()
    }
}

/// One Monte Carlo estimate set against its exact reference.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Estimate {
    pub label: String,
    pub empirical: f64,
    pub standard_error: f64,
    pub reference: f64,
    pub reference_exact: String,
    /// `(empirical - reference) / standard_error`.
    pub standardized_deviation: f64,
}

impl Estimate {
    fn new(label: impl Into<String>, acc: &Running, reference: &ExactRational) -> Self {
        let reference_f = to_f64(reference);
        let se = acc.standard_error();
        let diff = acc.mean() - reference_f;
        let z = if se > 0.0 {
            diff / se
        } else if diff.abs() <= 1e-12 * reference_f.abs().max(1.0) {
            0.0
        } else {
            f64::INFINITY
        };
        Estimate {
            label: label.into(),
            empirical: acc.mean(),
            standard_error: se,
            reference: reference_f,
            reference_exact: format_rational(reference),
            standardized_deviation: z,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KsResult {
    pub statistic: f64,
    pub critical_1pct: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentReport {
    pub sample_size: usize,
    pub estimates: Vec<Estimate>,
    pub max_standardized_deviation: f64,
    /// Two-sample test against direct sech draws, when run.
    pub ks: Option<KsResult>,
    /// Draws of `mu_N` that fell beyond the tabulated support.
    pub overflow_events: u64,
}

impl MomentReport {
    fn new(
        sample_size: usize,
        estimates: Vec<Estimate>,
        ks: Option<KsResult>,
        overflow_events: u64,
    ) -> Self {
        let max = estimates
            .iter()
            .map(|e| e.standardized_deviation.abs())
            .fold(0.0, f64::max);
        MomentReport {
            sample_size,
            estimates,
            max_standardized_deviation: max,
            ks,
            overflow_events,
        }
    }

    pub fn estimate(&self, label: &str) -> Option<&Estimate> {
        self.estimates.iter().find(|e| e.label == label)
    }

    /// All estimates within `band` standard errors and the KS test, if any,
    /// passed.
    pub fn passes(&self, band: f64) -> bool {
        self.max_standardized_deviation <= band && self.ks.as_ref().is_none_or(|k| k.passed)
    }
}

/// Chunk sizes summing to `count`.
fn chunk_sizes(count: usize) -> Vec<usize> {
    let k = CHUNKS as usize;
    (0..k)
        .map(|i| count / k + usize::from(i < count % k))
        .collect()
}

/// Runs `body` once per chunk on its own child stream and returns the
/// per-chunk results in chunk order.
fn run_chunks<T, F>(stream: &RandomStream, count: usize, body: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut RandomStream, usize) -> T + Sync,
{
    chunk_sizes(count)
        .into_par_iter()
        .enumerate()
        .map(|(i, size)| {
            let mut child = stream.split(i as u64);
            body(&mut child, size)
        })
        .collect()
}

fn merge_all<const K: usize>(parts: &[[Running; K]]) -> [Running; K] {
    let mut out = [Running::default(); K];
    for p in parts {
        for (o, r) in out.iter_mut().zip(p) {
            o.merge(r);
        }
    }
    out
}

fn powi_complex(w: Complex64, n: usize) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for _ in 0..n {
        acc *= w;
    }
    acc
}

fn check_count(count: usize, min: usize) -> Result<()> {
    if count < min {
        return Err(Error::param(format!(
            "sample size {count} below the minimum {min}"
        )));
    }
    Ok(())
}

/// Estimates `E_n(x)` as the mean of `(x - 1/2 + iL)^n`.
pub fn mc_euler_poly(
    stream: &RandomStream,
    n: usize,
    x: &ExactRational,
    count: usize,
) -> Result<MomentReport> {
    if n > 8 {
        return Err(Error::param("mc_euler_poly supports n <= 8"));
    }
    check_count(count, 10_000)?;
    let shift = to_f64(&(x - rational(1, 2)));
    let parts = run_chunks(stream, count, |s, size| {
        let mut acc = [Running::default(); 2];
        for _ in 0..size {
            let l = sech_quantile(s.uniform_open());
            let w = powi_complex(Complex64::new(shift, l), n);
            acc[0].push(w.re);
            acc[1].push(w.im);
        }
        acc
    });
    let [re, im] = merge_all(&parts);
    let target = eval_poly(&euler_poly(n), x);
    Ok(MomentReport::new(
        count,
        vec![
            Estimate::new("re", &re, &target),
            Estimate::new("im", &im, &BigRational::zero()),
        ],
        None,
        0,
    ))
}

/// Estimates `E_n^(p)(x)` as the mean of `(x + sum_j (i L_j - 1/2))^n`.
pub fn mc_gen_euler(
    stream: &RandomStream,
    n: usize,
    p: usize,
    x: &ExactRational,
    count: usize,
) -> Result<MomentReport> {
    if n > 6 || p == 0 || p > 10 {
        return Err(Error::param(
            "mc_gen_euler supports n <= 6 and 1 <= p <= 10",
        ));
    }
    check_count(count, 10_000)?;
    let shift = to_f64(&(x - rational(p as i64, 2)));
    let parts = run_chunks(stream, count, |s, size| {
        let mut acc = [Running::default(); 2];
        for _ in 0..size {
            let l: f64 = (0..p).map(|_| sech_quantile(s.uniform_open())).sum();
            let w = powi_complex(Complex64::new(shift, l), n);
            acc[0].push(w.re);
            acc[1].push(w.im);
        }
        acc
    });
    let [re, im] = merge_all(&parts);
    let target = eval_poly(&gen_euler_recursive(n, p as u64), x);
    Ok(MomentReport::new(
        count,
        vec![
            Estimate::new("re", &re, &target),
            Estimate::new("im", &im, &BigRational::zero()),
        ],
        None,
        0,
    ))
}

/// Draws of `(1/N) sum_{j=1}^{mu_N} L_j`.
pub fn sample_random_sum(stream: &RandomStream, n: usize, count: usize) -> Result<(Vec<f64>, u64)> {
    let sampler = mu_sampler(n)?;
    let parts = run_chunks(stream, count, |s, size| {
        let mut out = Vec::with_capacity(size);
        let mut overflow = 0u64;
        for _ in 0..size {
            let (m, over) = sampler.sample(s);
            overflow += u64::from(over);
            let total: f64 = (0..m).map(|_| sech_quantile(s.uniform_open())).sum();
            out.push(total / n as f64);
        }
        (out, overflow)
    });
    let overflow = parts.iter().map(|p| p.1).sum();
    Ok((parts.into_iter().flat_map(|p| p.0).collect(), overflow))
}

pub const KLEBANOV_ORDERS: [usize; 4] = [1, 2, 4, 6];

/// Simulates the random sum `(1/N) sum_{j <= mu_N} L_j` and compares its
/// moments with those of `sech(pi x)`, plus a two-sample KS test against
/// direct draws.
pub fn mc_klebanov(stream: &RandomStream, n: usize, count: usize) -> Result<MomentReport> {
    if n < 2 {
        return Err(Error::param("the random-sum check needs N >= 2"));
    }
    check_count(count, 100_000)?;
    let (sums, overflow) = sample_random_sum(stream, n, count)?;
    let mut acc = [Running::default(); 4];
    for &s in &sums {
        let s2 = s * s;
        let s4 = s2 * s2;
        acc[0].push(s);
        acc[1].push(s2);
        acc[2].push(s4);
        acc[3].push(s4 * s2);
    }
    let estimates = KLEBANOV_ORDERS
        .iter()
        .zip(&acc)
        .map(|(&k, a)| Estimate::new(format!("m{k}"), a, &sech_moment(k)))
        .collect();

    let mut reference_stream = stream.split(CHUNKS);
    let direct = sample_sech(&mut reference_stream, count);
    let statistic = ks_two_sample(sums, direct);
    let critical = KS_CRITICAL_1PCT * (2.0 / count as f64).sqrt();
    let ks = KsResult {
        statistic,
        critical_1pct: critical,
        passed: statistic <= critical,
    };
    Ok(MomentReport::new(count, estimates, Some(ks), overflow))
}

/// Moments of orders 1, 2, 4, 6 of a plain sech sample.
pub fn sech_moment_report(stream: &RandomStream, count: usize) -> Result<MomentReport> {
    check_count(count, 2)?;
    let parts = run_chunks(stream, count, |s, size| {
        let mut acc = [Running::default(); 4];
        for _ in 0..size {
            let l = sech_quantile(s.uniform_open());
            let l2 = l * l;
            acc[0].push(l);
            acc[1].push(l2);
            acc[2].push(l2 * l2);
            acc[3].push(l2 * l2 * l2);
        }
        acc
    });
    let acc = merge_all(&parts);
    let estimates = KLEBANOV_ORDERS
        .iter()
        .zip(&acc)
        .map(|(&k, a)| Estimate::new(format!("m{k}"), a, &sech_moment(k)))
        .collect();
    Ok(MomentReport::new(count, estimates, None, 0))
}

/// `sup |F_n - F|` for the sample against the sech CDF.
pub fn ks_one_sample(mut sample: Vec<f64>) -> f64 {
    sample.sort_by(f64::total_cmp);
    let n = sample.len() as f64;
    sample
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = sech_cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

/// `sup |F_a - F_b|` between two empirical CDFs.
pub fn ks_two_sample(mut a: Vec<f64>, mut b: Vec<f64>) -> f64 {
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0f64;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Half-width of the integration window for `t^k sech(pi t)`: 14, widened
/// for larger `k` until `t^k e^{-pi t}` is negligible at the edge.
fn moment_window(k: usize) -> f64 {
    let mut t = 14.0f64;
    while (k as f64) * t.ln() - PI * t > -40.0 {
        t += 1.0;
    }
    t
}

/// `|∫ t^k sech(pi t) dt - |E_k| / 2^k|` by adaptive quadrature; for odd `k`
/// the value of the integral itself.
pub fn moment_integral_check(k: usize) -> Result<f64> {
    if k > 12 {
        return Err(Error::param("moment_integral_check supports k <= 12"));
    }
    let t = moment_window(k);
    let integrand = |x: f64| x.powi(k as i32) / (PI * x).cosh();
    let panels = (4.0 * t) as usize;
    let value =
        integrate(integrand, -t, 0.0, panels, 1e-15) + integrate(integrand, 0.0, t, panels, 1e-15);
    if k % 2 == 1 {
        return Ok(value.abs());
    }
    Ok((value - to_f64(&sech_moment(k))).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cdf_inverts_quantile() {
        for i in 1..100 {
            let u = i as f64 / 100.0;
            assert!((sech_cdf(sech_quantile(u)) - u).abs() < 1e-13);
        }
        // F' = sech(pi x), by central differences
        for &x in &[-1.3, -0.2, 0.0, 0.4, 2.0] {
            let h = 1e-5;
            let d = (sech_cdf(x + h) - sech_cdf(x - h)) / (2.0 * h);
            assert!((d - 1.0 / (PI * x).cosh()).abs() < 1e-8);
        }
    }

    #[test]
    fn running_merge_matches_single_pass() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 * 0.1).collect();
        let mut whole = Running::default();
        xs.iter().for_each(|&x| whole.push(x));
        let mut a = Running::default();
        let mut b = Running::default();
        xs[..300].iter().for_each(|&x| a.push(x));
        xs[300..].iter().for_each(|&x| b.push(x));
        a.merge(&b);
        assert_eq!(a.count(), whole.count());
        assert!((a.mean() - whole.mean()).abs() < 1e-12);
        assert!((a.standard_error() - whole.standard_error()).abs() < 1e-12);
    }

    #[test]
    fn mu_sampler_support_and_tail() {
        for n in 2..=6 {
            let s = MuSampler::new(n).unwrap();
            assert!(s.tail_mass() < &BigRational::from_float(MU_TAIL_CUTOFF).unwrap());
            assert!(s.support().iter().all(|&v| v >= n && (v - n) % 2 == 0));
            assert_eq!(s.quantile(1e-300).0, n);
            let (v, over) = s.quantile(1.0);
            assert!(over && v == s.support().last().unwrap() + 2);
        }
        assert!(MuSampler::new(1).is_err());
    }

    #[test]
    fn chunking_covers_count() {
        for c in [0, 1, 31, 32, 33, 1_000_003] {
            assert_eq!(chunk_sizes(c).iter().sum::<usize>(), c);
        }
    }

    #[test]
    fn two_sample_ks_basics() {
        let a = vec![1.0, 2.0, 3.0];
        assert_eq!(ks_two_sample(a.clone(), a.clone()), 0.0);
        assert_eq!(ks_two_sample(vec![0.0, 0.1], vec![5.0, 6.0]), 1.0);
    }

    #[test]
    fn moment_integrals() {
        for k in [0, 2, 4, 6, 8, 10, 12] {
            let d = moment_integral_check(k).unwrap();
            assert!(d <= 1e-10, "k={k}: {d:e}");
        }
        for k in [1, 3, 5] {
            assert!(moment_integral_check(k).unwrap() <= 1e-12);
        }
        assert!(moment_integral_check(13).is_err());
    }

    #[test]
    fn parameter_checks() {
        let s = RandomStream::new(1, 0);
        assert!(mc_euler_poly(&s, 9, &rational(0, 1), 10_000).is_err());
        assert!(mc_euler_poly(&s, 1, &rational(0, 1), 100).is_err());
        assert!(mc_gen_euler(&s, 7, 2, &rational(0, 1), 10_000).is_err());
        assert!(mc_gen_euler(&s, 2, 11, &rational(0, 1), 10_000).is_err());
        assert!(mc_klebanov(&s, 1, 100_000).is_err());
        assert!(mc_klebanov(&s, 2, 1000).is_err());
    }

    #[test]
    fn zero_degree_is_exact() {
        let s = RandomStream::new(3, 0);
        let r = mc_gen_euler(&s, 0, 4, &rational(2, 3), 10_000).unwrap();
        let re = r.estimate("re").unwrap();
        assert_eq!(re.empirical, 1.0);
        assert_eq!(re.standard_error, 0.0);
        assert_eq!(re.standardized_deviation, 0.0);
    }
}
