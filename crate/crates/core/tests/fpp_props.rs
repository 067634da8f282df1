use fpplab::degree::DegreeSequence;
use fpplab::fpp::*;
use fpplab::graph::{Seed, WeightedGraph};
use proptest::prelude::*;

fn graph_strategy() -> impl Strategy<Value = WeightedGraph> {
    (2usize..10).prop_flat_map(|n| {
        prop::collection::vec((0..n as u32, 0..n as u32, 0.01f64..5.0), 1..25)
            .prop_map(move |es| {
                WeightedGraph::from_edges(
                    n,
                    es.iter().map(|&(u, v, _)| (u, v)).collect(),
                    Some(es.iter().map(|&(_, _, w)| w).collect()),
                )
                .unwrap()
            })
    })
}

fn floyd(g: &WeightedGraph) -> Vec<Vec<f64>> {
    let n = g.n();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = 0.0;
    }
    for (u, v, w) in g.edges() {
        if w < d[u][v] {
            d[u][v] = w;
            d[v][u] = w;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

fn close(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= 1e-12 * a.abs().max(1.0)
}

proptest! {
    #[test]
    fn sssp_matches_floyd(g in graph_strategy()) {
        let d = floyd(&g);
        for s in 0..g.n() {
            let got = sssp(&g, s);
            for v in 0..g.n() {
                prop_assert!(close(got.dist[v], d[s][v]), "{s}->{v}: {} vs {}", got.dist[v], d[s][v]);
            }
        }
    }

    #[test]
    fn distances_are_a_metric(g in graph_strategy()) {
        let all: Vec<_> = (0..g.n()).map(|s| sssp(&g, s).dist).collect();
        for a in 0..g.n() {
            for b in 0..g.n() {
                prop_assert!(close(all[a][b], all[b][a]));
                for c in 0..g.n() {
                    if all[a][c].is_finite() && all[c][b].is_finite() {
                        prop_assert!(all[a][b] <= all[a][c] + all[c][b] + 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn replay_times_are_sorted_distances(g in graph_strategy(), s in 0usize..10) {
        let s = s % g.n();
        let tr = explore_replay(&g, s, None);
        let mut finite: Vec<f64> = sssp(&g, s).dist.into_iter().filter(|d| d.is_finite()).collect();
        finite.sort_by(f64::total_cmp);
        prop_assert_eq!(tr.t.len(), finite.len());
        for (a, b) in tr.t.iter().zip(&finite) {
            prop_assert!(close(*a, *b));
        }
    }

    #[test]
    fn trace_identities(g in graph_strategy(), s in 0usize..10) {
        let s = s % g.n();
        let tr = explore_replay(&g, s, None);
        let mut in_ball = vec![false; g.n()];
        let mut s_hat = g.degree(s) as i64;
        for i in 0..=tr.steps() {
            let v = tr.vertices[i];
            in_ball[v] = true;
            if i > 0 {
                s_hat += tr.d_hat[i] as i64 - 1;
                prop_assert_eq!(tr.d_hat[i] as usize, g.degree(v) - 1);
                prop_assert!(tr.x[i] >= tr.x[i - 1]);
                prop_assert!(tr.gamma[i] >= tr.gamma[i - 1]);
            }
            prop_assert_eq!(tr.s_hat[i], s_hat);
            prop_assert_eq!(tr.s[i], tr.s_hat[i] - 2 * tr.x[i]);
            let inside = g.edges().filter(|&(a, b, _)| in_ball[a] && in_ball[b]).count() as i64;
            prop_assert_eq!(tr.x[i], inside - i as i64);
            let crossing = g.edges().filter(|&(a, b, _)| in_ball[a] != in_ball[b]).count() as i64;
            prop_assert_eq!(tr.s[i], crossing);
        }
        prop_assert_eq!(*tr.s.last().unwrap(), 0);
        prop_assert!(!tr.truncated);
    }

    #[test]
    fn diameter_modes_agree(g in graph_strategy()) {
        let d = floyd(&g);
        let oracle = d.iter().flatten().copied().filter(|x| x.is_finite()).fold(0.0, f64::max);
        let exact = diameter_exact(&g);
        let all = diameter_all_sources(&g);
        prop_assert!(close(exact.value, oracle) && close(all.value, oracle));
        prop_assert!(exact.exact && all.exact);
        let lb = diameter_anchored(&g, DEFAULT_ANCHORS);
        prop_assert!(lb.value <= oracle + 1e-12);
        let (a, b) = exact.endpoints;
        prop_assert!(close(d[a][b], exact.value));
    }

    #[test]
    fn flood_is_at_most_the_diameter(g in graph_strategy(), seed in any::<u64>()) {
        let f = diameter_and_flood(&g, &Seed::new(seed), DiameterMode::Exact);
        prop_assert!(f.flood_w <= f.diam_w && f.flood_giant_w <= f.diam_w);
    }

    #[test]
    fn construct_keeps_the_list_as_boundary(
        degrees in prop::collection::vec(1u32..5, 3..40),
        seed in any::<u64>(),
        frac in 0.0f64..1.0,
    ) {
        let mut degrees = degrees;
        if degrees.iter().map(|&d| d as u64).sum::<u64>() % 2 == 1 {
            degrees[0] += 1;
        }
        let seq = DegreeSequence::new(degrees).unwrap();
        let horizon = ((seq.n() - 1) as f64 * frac) as usize;
        let mut rng = Seed::new(seed).rng();
        let out = explore_construct(&seq, 0, horizon, &mut rng).unwrap();
        prop_assert_eq!(*out.trace.s.last().unwrap(), out.partial.boundary() as i64);
        for i in 1..=out.trace.steps() {
            prop_assert_eq!(out.trace.s[i], out.trace.s_hat[i] - 2 * out.trace.x[i]);
        }
        let g = out.partial.complete(&mut rng);
        prop_assert_eq!(g.degrees(), seq.degrees().to_vec());
    }
}
