use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use chebyeuler::chebyshev::{chebyshev_t, reversed_t};
use chebyeuler::eulerpoly::{eval_poly, gen_euler_recursive, shared_rows};
use chebyeuler::exactnum::{
    binomial, convolution_power, convolve, format_rational, parse_rational, rational,
    ExactRational, TruncatedSeries,
};
use chebyeuler::probnum::{in_support, probnum_catalan, ProbNumbers};
use chebyeuler::stochastic::{sample_mu, sample_sech, RandomStream};

fn small_rational() -> impl Strategy<Value = ExactRational> {
    (-1000i64..1000, 1i64..500).prop_map(|(n, d)| rational(n, d))
}

fn small_sequence(max_len: usize) -> impl Strategy<Value = Vec<ExactRational>> {
    prop::collection::vec(small_rational(), 1..max_len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn add_then_subtract(a in small_rational(), b in small_rational()) {
        prop_assert_eq!((&a + &b) - &b, a);
    }

    #[test]
    fn rational_text_round_trip(a in small_rational()) {
        prop_assert_eq!(parse_rational(&format_rational(&a)).unwrap(), a);
    }

    #[test]
    fn binomial_symmetry(n in 0u64..80, k in 0i64..80) {
        prop_assume!(k as u64 <= n);
        prop_assert_eq!(binomial(n, k), binomial(n, n as i64 - k));
    }

    #[test]
    fn convolution_power_matches_repeated_product(a in small_sequence(6), n in 1usize..=8) {
        let mut want = a.clone();
        for _ in 1..n {
            want = convolve(&want, &a);
        }
        prop_assert_eq!(convolution_power(&a, n).unwrap(), want);
    }

    #[test]
    fn reciprocal_times_series_is_one(
        head in small_rational().prop_filter("invertible", |r| !r.is_zero()),
        tail in small_sequence(8),
    ) {
        let mut c = vec![head];
        c.extend(tail);
        let order = c.len();
        let s = TruncatedSeries::new(c, order);
        let prod = &s * &s.reciprocal().unwrap();
        prop_assert_eq!(prod, TruncatedSeries::one(order));
    }

    #[test]
    fn reversed_t_constant_term(n in 1usize..40) {
        let q = reversed_t(n).unwrap();
        let lead = chebyshev_t(n).leading().unwrap().clone();
        prop_assert_eq!(q.coeff(0), lead);
        prop_assert_eq!(q.coeff(0), rational(1i64 << (n - 1), 1));
    }

    #[test]
    fn catalan_formula_matches_series(n in 1usize..=12, k in 0usize..30) {
        let ell = n + 2 * k;
        let mut p = ProbNumbers::new(n).unwrap();
        prop_assert_eq!(probnum_catalan(n, ell).unwrap(), p.get(ell));
    }

    #[test]
    fn probabilities_in_unit_interval(n in 1usize..=12, ell in 0usize..120) {
        let v = ProbNumbers::new(n).unwrap().get(ell);
        prop_assert!(!v.is_negative() && v <= ExactRational::one());
        if !in_support(n, ell) {
            prop_assert!(v.is_zero());
        }
    }

    #[test]
    fn gen_euler_rows_agree_with_recursion(n in 0usize..=8, p in 1u64..=8, x in small_rational()) {
        let rows = shared_rows(8);
        prop_assert_eq!(
            rows.eval(n, p as usize, &x),
            eval_poly(&gen_euler_recursive(n, p), &x)
        );
    }

    #[test]
    fn samplers_are_deterministic(seed in any::<u64>(), id in 0u64..1000, n in 2usize..=6) {
        let a = sample_sech(&mut RandomStream::new(seed, id), 64);
        let b = sample_sech(&mut RandomStream::new(seed, id), 64);
        prop_assert_eq!(
            a.iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
            b.iter().map(|v| v.to_bits()).collect::<Vec<_>>()
        );
        let m1 = sample_mu(&mut RandomStream::new(seed, id), n, 64).unwrap();
        let m2 = sample_mu(&mut RandomStream::new(seed, id), n, 64).unwrap();
        prop_assert_eq!(&m1, &m2);
        prop_assert!(m1.iter().all(|&v| in_support(n, v)));
    }
}
