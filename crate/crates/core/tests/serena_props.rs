use std::collections::BTreeMap;

use hopcolor::serena::{check_property1, run_naive, run_serena, DEFAULT_MAX_ROUNDS};
use hopcolor::{build_grid, check_h_hop, Color, GridSpec, NodeId, Topology};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Sequential model of the protocol: nodes color greedily in priority
/// order, each one round after it could first have heard of every higher
/// node within three hops.
fn greedy_model(t: &Topology, prio: &BTreeMap<NodeId, u32>) -> (BTreeMap<NodeId, Color>, BTreeMap<NodeId, u32>) {
    let mut order: Vec<usize> = (0..t.len()).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(prio[&t.id_at(i)]), t.id_at(i)));
    let mut color: Vec<Option<Color>> = vec![None; t.len()];
    let mut round = vec![0u32; t.len()];
    for &v in &order {
        let dist = t.bfs(v, Some(3));
        let mut used = Vec::new();
        let mut r = 1;
        for (u, d) in dist.iter().enumerate() {
            if let (Some(d), Some(c)) = (d, color[u]) {
                if *d >= 1 {
                    used.push(c);
                    r = r.max(round[u] + d);
                }
            }
        }
        color[v] = (0..).find(|c| !used.contains(c));
        round[v] = r;
    }
    (
        (0..t.len()).map(|i| (t.id_at(i), color[i].unwrap())).collect(),
        (0..t.len()).map(|i| (t.id_at(i), round[i])).collect(),
    )
}

fn random_connected(rng: &mut ChaCha8Rng, n: u32, extra: u32) -> Topology {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.gen_range(0..v), v));
    }
    for _ in 0..extra {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a != b {
            edges.push((a, b));
        }
    }
    let mut ids: Vec<u32> = (0..n).collect();
    ids.shuffle(rng);
    let edges: Vec<_> = edges.into_iter().map(|(a, b)| (ids[a as usize], ids[b as usize])).collect();
    Topology::from_plain_edges(n, &edges).unwrap()
}

/// The optimized protocol must produce the greedy coloring and never color
/// a node before the flooding reference does; the reference must match the
/// model round for round.
fn check_all(t: &Topology, prio: &BTreeMap<NodeId, u32>) -> Result<(), TestCaseError> {
    let (colors, rounds) = greedy_model(t, prio);
    let naive = run_naive(t, prio, DEFAULT_MAX_ROUNDS).unwrap();
    prop_assert_eq!(naive.coloring.iter().collect::<BTreeMap<_, _>>(), colors.clone());
    prop_assert_eq!(naive.trace.round_of(), rounds.clone());
    prop_assert_eq!(check_property1(t, &naive.trace).unwrap(), vec![]);

    let run = run_serena(t, prio, DEFAULT_MAX_ROUNDS).unwrap();
    prop_assert!(check_h_hop(t, &run.coloring, 3).unwrap().valid);
    prop_assert_eq!(run.coloring.iter().collect::<BTreeMap<_, _>>(), colors);
    for (id, r) in run.trace.round_of() {
        prop_assert!(r >= rounds[&id], "node {} colored in round {} before {}", id, r, rounds[&id]);
    }
    prop_assert!(run.rounds >= naive.rounds);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn random_graphs_follow_the_greedy_model(seed in any::<u64>(), n in 1u32..40, density in 0u32..3, prio_span in 1u32..20) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_connected(&mut rng, n, n * density);
        let prio = t.ids().map(|id| (id, rng.gen_range(0..prio_span))).collect();
        check_all(&t, &prio)?;
    }

    #[test]
    fn random_grids_follow_the_greedy_model(seed in any::<u64>(), w in 1u32..12, h in 1u32..12, tenths in prop::sample::select(vec![10u32, 15, 20, 25, 30])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = build_grid(&GridSpec::new(w, h, hopcolor::Range::from_tenths(tenths).unwrap()).unwrap());
        let prio = t.ids().map(|id| (id, rng.gen_range(0..30))).collect();
        check_all(&t, &prio)?;
    }
}
