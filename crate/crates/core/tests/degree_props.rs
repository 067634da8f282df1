use fpplab::degree::*;
use proptest::prelude::*;

fn law_strategy() -> impl Strategy<Value = DegreeLaw> {
    prop::collection::vec(0.0f64..1.0, 8).prop_filter_map("nonzero mass", |w| {
        let pairs: Vec<(u32, f64)> =
            w.iter().enumerate().filter(|(_, &x)| x > 0.05).map(|(i, &x)| (i as u32 + 1, x)).collect();
        let total: f64 = pairs.iter().map(|p| p.1).sum();
        if pairs.is_empty() {
            return None;
        }
        DegreeLaw::explicit(&pairs.iter().map(|&(k, x)| (k, x / total)).collect::<Vec<_>>()).ok()
    })
}

/// Smallest root of `phi(z) = z` on `[0, 1]` by a grid scan and bisection.
fn smallest_root_oracle(q: &SizeBiasedLaw) -> f64 {
    let f = |z: f64| q.pgf(z) - z;
    let steps = 20_000;
    for i in 0..steps {
        let (a, b) = (i as f64 / steps as f64, (i + 1) as f64 / steps as f64);
        if f(a) <= 0.0 {
            return a;
        }
        if f(b) <= 0.0 {
            let (mut lo, mut hi) = (a, b);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if f(mid) > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return 0.5 * (lo + hi);
        }
    }
    1.0
}

proptest! {
    #[test]
    fn size_biased_law_is_a_distribution(law in law_strategy()) {
        let q = SizeBiasedLaw::from_degree_law(&law).unwrap();
        let total: f64 = q.masses().iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        let moment = law.factorial_moment2() / law.mean();
        prop_assert!((q.mean() - moment).abs() < 1e-10);
        prop_assert!((q.pgf_derivative(1.0) - moment).abs() < 1e-10);
    }

    #[test]
    fn lambda_is_the_smallest_fixed_point(law in law_strategy()) {
        let q = SizeBiasedLaw::from_degree_law(&law).unwrap();
        let lambda = solve_lambda(&q, LAMBDA_TOL).unwrap();
        prop_assert!((q.pgf(lambda) - lambda).abs() < 1e-10);
        if lambda > 10.0 * LAMBDA_TOL {
            let below = lambda - 10.0 * LAMBDA_TOL;
            prop_assert!(q.pgf(below) > below);
        }
        prop_assert!((lambda - smallest_root_oracle(&q)).abs() < 1e-6);
    }

    #[test]
    fn thinning_preserves_mass_and_scales_mean(law in law_strategy(), p in 0.0f64..=1.0) {
        let t = thinned_law(&law, p).unwrap();
        let total: f64 = t.iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        let mean: f64 = t.iter().enumerate().map(|(j, &m)| j as f64 * m).sum();
        prop_assert!((mean - p * law.mean()).abs() < 1e-10);
    }

    #[test]
    fn core_identities_for_supercritical_laws(law in law_strategy()) {
        let c = match theory_constants(&law) {
            Ok(c) => c,
            Err(_) => return Ok(()),
        };
        let core = core_theory(&law, &c).unwrap();
        prop_assume!(!core.empty_core);
        prop_assert!((core.p_hat - (1.0 - c.lambda)).abs() <= 1e-9);
        prop_assert!((core.tilde_q1 - c.lambda_star).abs() <= 1e-9);
        prop_assert!((core.tilde_nu - c.nu).abs() <= 1e-9);
    }

    #[test]
    fn lower_truncation_at_zero_is_the_empirical_law(degrees in prop::collection::vec(1u32..7, 2..60)) {
        let mut degrees = degrees;
        if degrees.iter().map(|&d| d as u64).sum::<u64>() % 2 == 1 {
            degrees[0] += 1;
        }
        let seq = DegreeSequence::new(degrees).unwrap();
        let t = truncated_size_biased(&seq, 0, TruncationSide::Lower).unwrap();
        let e = seq.size_biased();
        prop_assert_eq!(t.masses(), e.masses());
    }
}

#[test]
fn gamma_table() {
    let (q1, ls) = (0.3, 0.45);
    assert_eq!(gamma_of(1, q1, ls).unwrap(), 1.0 - ls);
    assert_eq!(gamma_of(2, q1, ls).unwrap(), 2.0 * (1.0 - q1));
    for d in 3..=10 {
        assert_eq!(gamma_of(d, q1, ls).unwrap(), d as f64);
    }
    assert!(gamma_of(0, q1, ls).is_err());
}

#[test]
fn poisson_lambda_star_is_mean_times_lambda() {
    let law = DegreeLaw::truncated_poisson(2.0, 60).unwrap();
    let c = theory_constants(&law).unwrap();
    assert!((c.lambda_star - 2.0 * c.lambda).abs() < 1e-6);
}

fn truncation_distances(n: usize, seed: u64) -> (f64, f64) {
    let law = DegreeLaw::explicit(&[(1, 0.5), (3, 0.5)]).unwrap();
    let c = theory_constants(&law).unwrap();
    let mut rng = fpplab::graph::Seed::new(seed).rng();
    let seq = DegreeSequence::sample(&law, n, &mut rng).unwrap();
    let beta = PhaseBounds::new(&c, n).beta_step();
    let q = SizeBiasedLaw::from_degree_law(&law).unwrap();
    let tv = |side| total_variation(truncated_size_biased(&seq, beta, side).unwrap().masses(), q.masses());
    (tv(TruncationSide::Lower), tv(TruncationSide::Upper))
}

#[test]
fn truncated_laws_approach_q() {
    let small = truncation_distances(10_000, 1);
    let large = truncation_distances(1_000_000, 1);
    assert!(large.0 < small.0 && large.1 < small.1, "{small:?} {large:?}");
    assert!(large.0 < 0.05 && large.1 < 0.05, "{large:?}");
}
