use chebyeuler::exactnum::{rational, to_f64};
use chebyeuler::stochastic::{
    ks_one_sample, mc_euler_poly, mc_gen_euler, mc_klebanov, moment_integral_check, mu_sampler,
    sample_mu, sample_sech, sech_cdf, RandomStream, Running, DEFAULT_BAND, KS_CRITICAL_1PCT,
};

fn running(values: impl IntoIterator<Item = f64>) -> Running {
    let mut r = Running::default();
    for v in values {
        r.push(v);
    }
    r
}

fn within_band(r: &Running, target: f64) -> bool {
    (r.mean() - target).abs() <= DEFAULT_BAND * r.standard_error()
}

#[test]
fn sech_mean_and_second_moment() {
    let draws = sample_sech(&mut RandomStream::new(1, 0), 1_000_000);
    assert!(within_band(&running(draws.iter().copied()), 0.0));
    assert!(within_band(&running(draws.iter().map(|x| x * x)), 0.25));
}

#[test]
fn sech_ks_statistic_shrinks() {
    let mut stats = Vec::new();
    for (i, count) in [1_000usize, 10_000, 100_000].into_iter().enumerate() {
        let d = ks_one_sample(sample_sech(&mut RandomStream::new(2, i as u64), count));
        assert!(
            d < KS_CRITICAL_1PCT / (count as f64).sqrt(),
            "count {count}: D = {d}"
        );
        stats.push(d);
    }
    assert!(stats[2] < stats[0]);
}

#[test]
fn sech_cdf_matches_density() {
    // F' = sech(pi x) by central differences
    for x in [-2.0, -0.7, 0.0, 0.3, 1.5] {
        let h = 1e-5;
        let slope = (sech_cdf(x + h) - sech_cdf(x - h)) / (2.0 * h);
        let sech = 1.0 / (std::f64::consts::PI * x).cosh();
        assert!((slope - sech).abs() < 1e-8);
    }
}

#[test]
fn mu2_frequency_of_two() {
    let n = 1_000_000;
    let draws = sample_mu(&mut RandomStream::new(3, 0), 2, n).unwrap();
    let hits = running(draws.iter().map(|&v| if v == 2 { 1.0 } else { 0.0 }));
    assert!(within_band(&hits, 0.5));
    assert!(draws.iter().all(|&v| v >= 2 && v % 2 == 0));
}

#[test]
fn mu3_support() {
    let draws = sample_mu(&mut RandomStream::new(4, 0), 3, 100_000).unwrap();
    assert!(draws.iter().all(|&v| v >= 3 && v % 2 == 1));
}

#[test]
fn mu4_mean_matches_table() {
    let sampler = mu_sampler(4).unwrap();
    assert!(to_f64(sampler.tail_mass()) < 1e-15);
    let exact_mean = to_f64(sampler.mean_prefix());
    assert!((exact_mean - 16.0).abs() < 1e-9);
    let draws = sample_mu(&mut RandomStream::new(5, 0), 4, 400_000).unwrap();
    assert!(within_band(
        &running(draws.iter().map(|&v| v as f64)),
        exact_mean
    ));
}

#[test]
fn rep_examples() {
    let s = RandomStream::new(6, 0);
    let r = mc_euler_poly(&s, 1, &rational(0, 1), 100_000).unwrap();
    assert!(r.passes(DEFAULT_BAND));
    assert_eq!(r.estimate("re").unwrap().reference, -0.5);

    let r = mc_euler_poly(&s, 2, &rational(0, 1), 100_000).unwrap();
    assert!(r.passes(DEFAULT_BAND));
    assert_eq!(r.estimate("re").unwrap().reference, 0.0);

    for n in [1, 3, 5] {
        let r = mc_euler_poly(&s, n, &rational(1, 2), 100_000).unwrap();
        let im = r.estimate("im").unwrap();
        assert!(im.standardized_deviation.abs() <= DEFAULT_BAND);
    }
    assert!(mc_euler_poly(&s, 9, &rational(0, 1), 100_000).is_err());
    assert!(mc_euler_poly(&s, 2, &rational(0, 1), 100).is_err());
}

#[test]
fn gen_examples() {
    let s = RandomStream::new(7, 0);
    let r = mc_gen_euler(&s, 1, 4, &rational(0, 1), 100_000).unwrap();
    assert!(r.passes(DEFAULT_BAND));
    assert_eq!(r.estimate("re").unwrap().reference, -2.0);

    let r = mc_gen_euler(&s, 0, 3, &rational(5, 2), 10_000).unwrap();
    let re = r.estimate("re").unwrap();
    assert_eq!(re.empirical, 1.0);
    assert_eq!(re.standard_error, 0.0);
    assert!(r.passes(DEFAULT_BAND));

    let r = mc_gen_euler(&s, 2, 2, &rational(0, 1), 100_000).unwrap();
    assert!(r.passes(DEFAULT_BAND));
    assert_eq!(r.estimate("re").unwrap().reference_exact, "1/2");
}

#[test]
fn klebanov_small_n() {
    for n in [2, 3] {
        let r = mc_klebanov(&RandomStream::new(8, n as u64), n, 200_000).unwrap();
        assert!(r.passes(DEFAULT_BAND), "N = {n}: {r:?}");
        assert!(r.estimate("m1").unwrap().standardized_deviation.abs() <= DEFAULT_BAND);
        assert_eq!(r.estimate("m4").unwrap().reference_exact, "5/16");
        assert_eq!(r.overflow_events, 0);
    }
}

#[test]
fn moment_integrals() {
    for k in [0, 2, 4, 6, 8, 10, 12] {
        assert!(moment_integral_check(k).unwrap() <= 1e-10, "k = {k}");
    }
    for k in [1, 3, 5] {
        assert!(moment_integral_check(k).unwrap() <= 1e-12, "k = {k}");
    }
}

#[test]
fn same_seed_same_report() {
    let a = mc_klebanov(&RandomStream::new(9, 0), 3, 100_000).unwrap();
    let b = mc_klebanov(&RandomStream::new(9, 0), 3, 100_000).unwrap();
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
}
