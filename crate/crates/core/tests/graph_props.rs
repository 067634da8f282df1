use fpplab::degree::DegreeSequence;
use fpplab::graph::*;
use proptest::prelude::*;

fn sequence() -> impl Strategy<Value = DegreeSequence> {
    prop::collection::vec(1u32..6, 2..40).prop_map(|mut d| {
        if d.iter().map(|&x| x as u64).sum::<u64>() % 2 == 1 {
            d[0] += 1;
        }
        DegreeSequence::new(d).unwrap()
    })
}

proptest! {
    #[test]
    fn matching_preserves_degrees(seq in sequence(), seed in any::<u64>()) {
        let g = sample_multigraph(&seq, &mut Seed::new(seed).rng());
        prop_assert_eq!(g.degrees(), seq.degrees().to_vec());
        prop_assert_eq!(2 * g.m() as u64, seq.total_degree());
    }

    #[test]
    fn sampling_is_a_pure_function_of_the_seed(seq in sequence(), seed in any::<u64>()) {
        let s = Seed::new(seed).derive(TAG_TOPOLOGY, 0);
        let a = assign_weights(&sample_multigraph(&seq, &mut s.rng()), &mut s.derive(TAG_WEIGHTS, 0).rng());
        let b = assign_weights(&sample_multigraph(&seq, &mut s.rng()), &mut s.derive(TAG_WEIGHTS, 0).rng());
        prop_assert_eq!(dump_to_string(&a), dump_to_string(&b));
        prop_assert!(a.weights().iter().zip(b.weights()).all(|(x, y)| x.to_bits() == y.to_bits()));
    }

    #[test]
    fn simple_samples_are_simple(seed in any::<u64>(), n in 4usize..30) {
        let seq = DegreeSequence::new(vec![3; 2 * (n / 2)]).unwrap();
        let s = sample_simple(&seq, &mut Seed::new(seed).rng(), 100_000).unwrap();
        prop_assert!(s.graph.is_simple());
        prop_assert_eq!(s.graph.degrees(), seq.degrees().to_vec());
    }

    #[test]
    fn dumps_round_trip(seq in sequence(), seed in any::<u64>()) {
        let mut rng = Seed::new(seed).rng();
        let g = assign_weights(&sample_multigraph(&seq, &mut rng), &mut rng);
        let back = parse_dump(&dump_to_string(&g)).unwrap();
        prop_assert_eq!(back.degrees(), g.degrees());
        prop_assert!(back.weights().iter().zip(g.weights()).all(|(x, y)| x.to_bits() == y.to_bits()));
    }

    #[test]
    fn erdos_renyi_edge_counts(seed in any::<u64>(), n in 2usize..60) {
        let pairs = n * (n - 1) / 2;
        let m = pairs / 3;
        let g = sample_gnm(n, m, &mut Seed::new(seed).rng()).unwrap();
        prop_assert_eq!(g.m(), m);
        prop_assert!(g.is_simple());
        let g = sample_gnp(n, 0.3, &mut Seed::new(seed).rng()).unwrap();
        prop_assert!(g.is_simple() && g.m() <= pairs);
    }
}

#[test]
fn sibling_seeds_differ() {
    let s = Seed::new(9);
    assert_ne!(s.derive(TAG_TOPOLOGY, 0).value(), s.derive(TAG_WEIGHTS, 0).value());
    assert_ne!(s.derive(TAG_TRIAL, 0).value(), s.derive(TAG_TRIAL, 1).value());
    assert_eq!(s.derive(TAG_FLOOD, 3).value(), Seed::new(9).derive(TAG_FLOOD, 3).value());
}

#[test]
fn gnp_density_matches_p() {
    let n = 2000;
    let p = 2.0 / n as f64;
    let mut total = 0;
    for t in 0..20 {
        total += sample_gnp(n, p, &mut Seed::new(4).derive(TAG_TRIAL, t).rng()).unwrap().m();
    }
    let mean = total as f64 / 20.0;
    let expected = p * (n * (n - 1) / 2) as f64;
    // Twenty draws of a binomial with variance about `expected`.
    assert!((mean - expected).abs() < 4.0 * (expected / 20.0).sqrt(), "{mean} vs {expected}");
}
