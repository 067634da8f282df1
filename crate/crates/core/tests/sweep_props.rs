use fpplab::degree::{theory_constants, DegreeLaw, PhaseBounds};
use fpplab::fpp::{explore_replay, SsspWorkspace};
use fpplab::graph::TAG_SOURCES;
use fpplab::stats::summarize;
use fpplab::sweep::*;
use rand::seq::index::sample;

#[test]
fn any_trial_replays_from_its_seed() {
    let mut c = SweepConfig::new("explicit 1:0.5 3:0.5", vec![300, 600], 3, 77);
    c.graph_mode = GraphMode::Multigraph;
    let recs = run_sweep(&c, |_| {}).unwrap();
    let ctx = SizeContext::new(&c.descriptor().unwrap(), 600).unwrap();
    for r in recs.iter().filter(|r| r.n == 600) {
        assert_eq!(r.seed, trial_seed(77, 600, r.trial).value());
        let again = run_trial(&c, &ctx, r.trial);
        assert_eq!(again.diam_w.to_bits(), r.diam_w.to_bits());
        assert_eq!(again.flood_w.to_bits(), r.flood_w.to_bits());
    }
}

#[test]
fn identical_configs_give_identical_csv() {
    let c = SweepConfig::new("poisson 2 auto", vec![100, 200], 3, 4);
    let csv = |recs: &[TrialRecord]| {
        let mut buf = Vec::new();
        write_csv(&mut buf, recs).unwrap();
        buf
    };
    assert_eq!(csv(&run_sweep(&c, |_| {}).unwrap()), csv(&run_sweep(&c, |_| {}).unwrap()));
}

#[test]
fn standard_errors_shrink_with_trials() {
    let se = |trials| {
        let c = SweepConfig::new("regular 3", vec![400], trials, 10);
        let recs = run_sweep(&c, |_| {}).unwrap();
        assert!(recs.iter().all(|r| r.flood_w <= r.diam_w));
        summarize(&recs.iter().map(|r| r.diam_norm).collect::<Vec<_>>()).se
    };
    let ratio = se(20) / se(80);
    // Expected 2; the sd estimates themselves carry about 16% and 8% noise.
    assert!(ratio > 1.3 && ratio < 3.0, "{ratio}");
}

/// Three-regular graph, `n = 10^5`: balls of `beta_n` vertices meet, and
/// the median phase gap respects the `1/(2(nu-1))` bound.
#[test]
fn large_balls_meet_on_three_regular_graphs() {
    let n = 100_000;
    let c = SweepConfig::new("regular 3", vec![n], 1, 31);
    let ctx = SizeContext::new(&c.descriptor().unwrap(), n).unwrap();
    let seed = trial_seed(31, n, 0);
    let (g, _) = trial_graph(&c, &ctx, &seed).unwrap();
    let mut rng = seed.derive(TAG_SOURCES, 1).rng();
    let sources = sample(&mut rng, n, 200).into_vec();
    let pt = phase_timing(&g, &g.components(), &sources, &ctx.constants, 0.1);
    assert_eq!(pt.excluded, 0);
    let median = pt.gap_quantile(n, 0.5);
    let bound = 1.1 / (2.0 * (ctx.constants.nu - 1.0));
    println!("median (T(beta) - T(alpha)) / ln n = {median:.4}, bound {bound}");
    assert!(median > 0.0 && median < bound);

    let beta = PhaseBounds::new(&theory_constants(&DegreeLaw::regular(3).unwrap()).unwrap(), n).beta_step();
    let mut ws = SsspWorkspace::new(n);
    let mut far = 0;
    for pair in sources.chunks_exact(2).take(100) {
        let (u, v) = (pair[0], pair[1]);
        let tu = explore_replay(&g, u, Some(beta)).t[beta];
        let tv = explore_replay(&g, v, Some(beta)).t[beta];
        ws.run(&g, u, usize::MAX);
        if ws.dist(v) > tu + tv {
            far += 1;
        }
    }
    println!("pairs with dist > T_u(beta) + T_v(beta): {far} of 100");
    assert_eq!(far, 0);
}
