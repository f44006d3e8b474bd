use graphburn::burn::satisfies_spacing;
use graphburn::{burning_number, is_m_burnable, simulate, BurnError, BurningSequence, Graph, SolverConfig};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn cfg() -> SolverConfig {
    SolverConfig::default()
}

fn graph_from_mask(n: usize, mask: &[bool]) -> Graph {
    let mut edges = Vec::new();
    let mut k = 0;
    for u in 0..n {
        for v in u + 1..n {
            if mask[k] {
                edges.push((u, v));
            }
            k += 1;
        }
    }
    Graph::new(n, &edges).unwrap()
}

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(prop::bool::weighted(0.3), n * (n - 1) / 2)
            .prop_map(move |mask| graph_from_mask(n, &mask))
    })
}

/// A random spanning tree by shuffled Kruskal.
fn spanning_tree(g: &Graph, rng: &mut ChaCha8Rng) -> Graph {
    let n = g.vertex_count();
    let mut edges = g.edges().to_vec();
    edges.shuffle(rng);
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let mut tree = Vec::new();
    for (u, v) in edges {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a != b {
            parent[a] = b;
            tree.push((u, v));
        }
    }
    Graph::new(n, &tree).unwrap()
}

#[test]
fn path_formula_up_to_400() {
    for l in 1..=400 {
        let (b, _) = burning_number(&Graph::path(l), &cfg()).unwrap();
        let want = (0..).find(|k: &usize| k * k >= l).unwrap();
        assert_eq!(b, want, "P_{l}");
    }
}

#[test]
fn spanning_trees_burn_no_faster() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let mut checked = 0;
    while checked < 150 {
        let n = rand::Rng::gen_range(&mut rng, 2..=12);
        let mask: Vec<bool> = (0..n * (n - 1) / 2)
            .map(|_| rand::Rng::gen_bool(&mut rng, 0.35))
            .collect();
        let g = graph_from_mask(n, &mask);
        if !g.is_connected() {
            continue;
        }
        let (bg, _) = burning_number(&g, &cfg()).unwrap();
        for _ in 0..3 {
            let t = spanning_tree(&g, &mut rng);
            let (bt, _) = burning_number(&t, &cfg()).unwrap();
            assert!(bg <= bt, "b(G) = {bg} > b(T) = {bt}");
        }
        checked += 1;
    }
}

fn sequences(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|s| {
                (0..n).map(move |v| {
                    let mut t = s.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    out
}

fn spacing_matches_simulation(g: &Graph, max_len: usize) {
    let dist = g.distances();
    for len in 1..=max_len {
        for s in sequences(g.vertex_count(), len) {
            let Ok(seq) = BurningSequence::new(s.clone()) else {
                continue;
            };
            // Sources after the round in which everything burned are never placed.
            let (valid, placed) = match simulate(g, &seq) {
                Ok(out) => (true, out.rounds_elapsed.map_or(len, |r| r.min(len))),
                Err(BurnError::InvalidPlacement { .. }) => (false, len),
                Err(e) => panic!("{e}"),
            };
            let prefix = BurningSequence::new(s[..placed].to_vec()).unwrap();
            assert_eq!(satisfies_spacing(&dist, &prefix), valid, "{s:?} on {:?}", g.edges());
        }
    }
}

#[test]
fn spacing_equivalence_on_all_small_graphs() {
    for n in 1..=5 {
        let pairs = n * (n - 1) / 2;
        for bits in 0u32..1 << pairs {
            let mask: Vec<bool> = (0..pairs).map(|k| bits >> k & 1 == 1).collect();
            spacing_matches_simulation(&graph_from_mask(n, &mask), 3);
        }
    }
}

#[test]
fn spacing_equivalence_on_order_eight() {
    let cycle: Vec<(usize, usize)> = (0..8).map(|i| (i, (i + 1) % 8)).collect();
    let complete: Vec<(usize, usize)> = (0..8).flat_map(|u| (u + 1..8).map(move |v| (u, v))).collect();
    for g in [
        Graph::path(8),
        Graph::spider(&[3, 2, 2]),
        Graph::double_spider(&[2, 1], &[2, 1]),
        Graph::path_forest(&[3, 3, 2]),
        Graph::new(8, &cycle).unwrap(),
        Graph::new(8, &complete).unwrap(),
    ] {
        spacing_matches_simulation(&g, 4);
    }
}

proptest! {
    #[test]
    fn witnesses_replay_and_rounds_are_monotone(g in graph_strategy(10), m in 1usize..6) {
        let here = is_m_burnable(&g, m, &cfg()).unwrap();
        if let Some(w) = &here {
            let out = simulate(&g, w).unwrap();
            prop_assert!(out.fully_burned);
            prop_assert!(out.rounds_elapsed.unwrap() <= m);
            prop_assert!(is_m_burnable(&g, m + 1, &cfg()).unwrap().is_some());
        }
        let (b, w) = burning_number(&g, &cfg()).unwrap();
        prop_assert_eq!(here.is_some(), m >= b);
        prop_assert!(simulate(&g, &w).unwrap().fully_burned);
    }
}
