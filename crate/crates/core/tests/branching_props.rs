use fpplab::branching::*;
use fpplab::graph::Seed;
use proptest::prelude::*;

fn law(masses: &[f64]) -> OffspringLaw {
    OffspringLaw::from_masses(masses.to_vec()).unwrap()
}

fn offspring_strategy() -> impl Strategy<Value = OffspringLaw> {
    prop::collection::vec(0.01f64..1.0, 1..6).prop_map(|w| {
        let total: f64 = w.iter().sum();
        law(&w.iter().map(|x| x / total).collect::<Vec<_>>())
    })
}

proptest! {
    #[test]
    fn population_is_rebuilt_from_offspring(l in offspring_strategy(), k in 1u32..5, seed in any::<u64>()) {
        let tr = simulate_bp(&l, k, 500, &mut Seed::new(seed).rng()).unwrap();
        let mut s = k as u64;
        prop_assert_eq!(tr.s[0], s);
        for (j, &xi) in tr.offspring.iter().enumerate() {
            s = s + xi as u64 - 1;
            prop_assert_eq!(tr.s[j + 1], s);
            prop_assert!(tr.t[j + 1] > tr.t[j]);
        }
        prop_assert_eq!(tr.extinct, s == 0);
        prop_assert!(tr.extinct != tr.truncated);
    }

    #[test]
    fn sampled_offspring_lie_in_the_support(l in offspring_strategy(), seed in any::<u64>()) {
        let mut rng = Seed::new(seed).rng();
        for _ in 0..200 {
            let x = l.sample(&mut rng) as usize;
            prop_assert!(l.masses()[x] > 0.0);
        }
    }
}

#[test]
fn death_only_law_dies_at_the_first_jump() {
    let l = law(&[1.0]);
    let tr = simulate_bp(&l, 1, 10, &mut Seed::new(1).rng()).unwrap();
    assert_eq!(tr.absorption_index(), Some(1));
    assert_eq!(tr.t_at(2), Some(f64::INFINITY));
    assert_eq!(split_time(&l, 1, 2, &mut Seed::new(1).rng()), f64::INFINITY);
}

#[test]
fn lines_die_independently() {
    let l = law(&[0.25, 0.0, 0.75]);
    let lambda = l.extinction_probability().unwrap();
    for k in 1..=3u32 {
        let est = extinction_frequency(&l, k, 100_000, usize::MAX, &Seed::new(5).derive("k", k as u64)).unwrap();
        assert!((est.frequency - lambda.powi(k as i32)).abs() < 0.01, "k={k}: {}", est.frequency);
    }
}

#[test]
fn extinction_falls_as_mass_moves_up() {
    let laws = [law(&[0.25, 0.0, 0.75]), law(&[0.25, 0.0, 0.5, 0.25]), law(&[0.25, 0.0, 0.25, 0.25, 0.25])];
    let mut last = (1.0, 1.0);
    for (i, l) in laws.iter().enumerate() {
        let exact = l.extinction_probability().unwrap();
        let est = extinction_frequency(l, 1, 100_000, usize::MAX, &Seed::new(8).derive("law", i as u64)).unwrap();
        assert!(exact < last.0);
        assert!(est.frequency < last.1 + 0.01);
        last = (exact, est.frequency);
    }
}

#[test]
fn skeleton_estimate_of_the_binary_law_is_zero() {
    let est = skeleton_single_child_prob(&law(&[0.0, 0.0, 1.0]), 10_000, 20, &Seed::new(2)).unwrap();
    assert!(est.estimate <= 0.01);
}

#[test]
fn skeleton_estimate_tracks_lambda_star() {
    let l = law(&[0.25, 0.0, 0.75]);
    let est = skeleton_single_child_prob(&l, 100_000, DEFAULT_SKELETON_DEPTH, &Seed::new(3)).unwrap();
    assert!((est.estimate - l.lambda_star().unwrap()).abs() < 0.02, "{}", est.estimate);
}

#[test]
fn tail_rates_by_minimum_offspring() {
    let death = law(&[0.25, 0.0, 0.75]);
    assert!((tail_rate(&death, 3).unwrap() - 0.5).abs() < 1e-9);
    let single = law(&[0.0, 0.3, 0.7]);
    assert!((tail_rate(&single, 2).unwrap() - 1.4).abs() < 1e-12);
    assert_eq!(tail_rate(&law(&[0.0, 0.0, 1.0]), 4).unwrap(), 4.0);
}

#[test]
fn skeleton_of_poisson_two_offspring() {
    let mut masses = vec![(-2.0f64).exp()];
    for j in 1..40 {
        masses.push(masses[j - 1] * 2.0 / j as f64);
    }
    let total: f64 = masses.iter().sum();
    let l = law(&masses.iter().map(|m| m / total).collect::<Vec<_>>());
    let lambda = l.extinction_probability().unwrap();
    assert!((lambda - 0.2031878699).abs() < 1e-8);
    let est = skeleton_single_child_prob(&l, 100_000, DEFAULT_SKELETON_DEPTH, &Seed::new(4)).unwrap();
    assert!((est.estimate - 2.0 * lambda).abs() < 0.02, "{}", est.estimate);
}
