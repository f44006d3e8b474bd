use std::collections::BTreeSet;

use graphburn::chainlab::{
    certify_l, construct_even_pairs, expand_prec_tree, prec_children, CertifyOptions,
    DeficiencyCache, SquareForest, TreeBudget, Verdict,
};
use graphburn::pathforest::{decide, PathForest};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn forest(l: &[usize]) -> PathForest {
    PathForest::new(l.to_vec()).unwrap()
}

fn deficient(t: &PathForest, m: usize) -> bool {
    decide(t, m).unwrap().is_none()
}

/// Nonincreasing `n`-tuples with parts at least `lo` summing to `total`.
fn tuples(n: usize, total: usize, lo: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, total: usize, lo: usize, hi: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            if total == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for x in lo..=hi.min(total) {
            if x * n < total {
                continue;
            }
            cur.push(x);
            go(n - 1, total - x, lo, x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, total, lo, total, &mut Vec::new(), &mut out);
    out
}

#[test]
fn tuple_helper_counts() {
    assert_eq!(tuples(2, 9, 1).len(), 4);
    assert_eq!(tuples(3, 9, 2).len(), 3); // 5,2,2 4,3,2 3,3,3
}

#[test]
fn children_are_one_step_deficient_extensions() {
    let cache = DeficiencyCache::in_memory();
    for root in [&[17, 15, 4][..], &[7, 2], &[2, 2], &[13, 1, 1, 1]] {
        let root = SquareForest::new(forest(root)).unwrap();
        assert!(deficient(&root.forest, root.m), "{root}");
        let tree = expand_prec_tree(&root, TreeBudget::new(50_000, 40), &cache).unwrap();
        for node in tree.nodes() {
            let sf = &node.forest;
            assert!(deficient(&sf.forest, sf.m), "{sf}");
            let want: BTreeSet<PathForest> = (0..sf.forest.path_count())
                .map(|i| {
                    let mut l = sf.forest.lengths().to_vec();
                    l[i] += 2 * sf.m + 1;
                    forest(&l)
                })
                .filter(|t| deficient(t, sf.m + 1))
                .collect();
            let got: BTreeSet<PathForest> = prec_children(sf, &cache)
                .unwrap()
                .into_iter()
                .map(|c| {
                    assert_eq!(c.m, sf.m + 1);
                    assert_eq!(c.forest.order(), sf.forest.order() + 2 * sf.m + 1);
                    c.forest
                })
                .collect();
            assert_eq!(got, want, "{sf}");
            if node.children.is_empty() {
                assert!(want.is_empty() || node.status != graphburn::chainlab::NodeStatus::Closed);
            }
        }
    }
}

#[test]
fn burnable_forests_have_no_children() {
    let cache = DeficiencyCache::in_memory();
    let sf = SquareForest::new(forest(&[8, 8])).unwrap();
    assert!(prec_children(&sf, &cache).is_err());
}

/// Certified means no deficient member anywhere; checked level by level
/// with the plain decision procedure.
#[test]
fn certification_is_sound() {
    let cache = DeficiencyCache::in_memory();
    for (n, l, floor, top) in [(2, 3, None, 30), (3, 18, None, 16), (3, 18, Some(8), 16), (3, 18, Some(12), 16)] {
        let opts = CertifyOptions {
            seed_floor: floor,
            ..CertifyOptions::default()
        };
        let ev = certify_l(n, l, &opts, &cache).unwrap();
        assert_eq!(ev.verdict, Verdict::Certified, "n={n} L={l}");
        for seed in &ev.seeds {
            assert!(deficient(&seed.forest, seed.m) && seed.forest.shortest() < l);
        }
        for m in 1..=top {
            for t in tuples(n, m * m, l) {
                assert!(!deficient(&forest(&t), m), "{t:?} at m={m}");
            }
        }
        let below = certify_l(n, l - 1, &CertifyOptions::default(), &cache).unwrap();
        assert_eq!(below.verdict, Verdict::Counterexample);
        let cx = below.counterexample.unwrap();
        assert!(cx.forest.shortest() >= l - 1 && deficient(&cx.forest, cx.m));
    }
}

#[test]
fn even_pair_constructions_partition_the_odds() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..300 {
        let n = rng.gen_range(1..=4);
        let evens: Vec<usize> = (0..n).map(|_| 2 * rng.gen_range(4 * n..=200)).collect();
        let c = construct_even_pairs(&evens).unwrap();
        let m = c.m;
        assert_eq!(c.forest.order(), m * m);
        c.assignment.validate(&c.forest).unwrap();
        let mut used: Vec<usize> = c.assignment.sets.iter().flatten().copied().collect();
        used.sort_unstable();
        assert_eq!(used, (1..=m).map(|k| 2 * k - 1).collect::<Vec<_>>());
        for (set, &len) in c.assignment.sets.iter().zip(c.forest.lengths()) {
            assert_eq!(set.iter().sum::<usize>(), len);
        }
        let mut rest: Vec<usize> = c.forest.lengths().to_vec();
        for e in &evens {
            let i = rest.iter().position(|x| x == e).expect("given path kept");
            rest.remove(i);
        }
        assert_eq!(rest.iter().sum::<usize>(), c.residual);
        assert!(decide(&c.forest, m).unwrap().is_some());
    }
}
