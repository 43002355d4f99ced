use std::collections::BTreeSet;

use hopcolor::reduction::{transform, verify_lemmas};
use hopcolor::Topology;
use proptest::prelude::*;

fn graph() -> impl Strategy<Value = Topology> {
    (2u32..=9)
        .prop_flat_map(|n| {
            let tree = (1..n).map(|v| (0..v).prop_map(move |u| (u, v))).collect::<Vec<_>>();
            (Just(n), tree, prop::collection::vec((0..n, 0..n), 0..=n as usize))
        })
        .prop_map(|(n, tree, extra)| {
            let edges: Vec<(u32, u32)> = tree.into_iter().chain(extra.into_iter().filter(|(a, b)| a != b)).collect();
            Topology::from_plain_edges(n, &edges).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn construction_sizes_and_lemmas(g in graph(), h in 2u32..=7) {
        let r = transform(&g, h).unwrap();
        let n = g.len();
        let expected = if h % 2 == 1 { (h as usize / 2) * n + 1 } else { (h as usize / 2 - 1) * n + g.edge_count() };
        prop_assert_eq!(r.added.len(), expected);
        prop_assert_eq!(r.gprime.len(), n + expected);

        let originals: BTreeSet<_> = g.ids().collect();
        let max = g.max_id().unwrap();
        prop_assert!(r.added.iter().all(|a| a.id > max && !originals.contains(&a.id)));
        for (a, b) in g.edges() {
            prop_assert!(!r.gprime.has_edge(a, b), "original edge {}-{} kept", a, b);
        }

        let lemmas = verify_lemmas(&g, &r).unwrap();
        prop_assert!(lemmas.all_ok(), "{}", lemmas);
    }
}
