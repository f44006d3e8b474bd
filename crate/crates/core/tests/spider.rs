use graphburn::pathforest::path_burning_number;
use graphburn::spider::{decide_double_spider, double_spiders_of_order, DoubleSpider};
use graphburn::{burning_number, is_m_burnable, simulate, SolverConfig};
use rayon::prelude::*;

fn cfg() -> SolverConfig {
    SolverConfig::default()
}

/// Heads at path positions `i`, `i + 1` of a path of order `m^2 + 1`, with
/// `extra` leaves split `k` / `extra - k` between them.
#[test]
fn tightness_witnesses_are_not_burnable() {
    for m in 2..=4 {
        for n in 2..=4 {
            let extra = n - 2;
            for i in 1..m * m - 1 {
                for k in 0..=extra {
                    let mut a = vec![i];
                    a.extend(std::iter::repeat_n(1, k));
                    let mut b = vec![m * m - 1 - i];
                    b.extend(std::iter::repeat_n(1, extra - k));
                    let ds = DoubleSpider::new(a, b).unwrap();
                    assert_eq!(ds.order(), m * m + n - 1);
                    assert_eq!(ds.arm_count(), n);
                    assert!(is_m_burnable(&ds.graph(), m, &cfg()).unwrap().is_none(), "{ds} m={m}");
                    assert!(!decide_double_spider(&ds, m, &cfg(), Some(0)).unwrap().burnable);
                }
            }
        }
    }
}

#[test]
fn decisions_match_exact_solver_up_to_order_20() {
    let all: Vec<DoubleSpider> = (2..=20).flat_map(double_spiders_of_order).collect();
    let bad: Vec<String> = all
        .par_iter()
        .flat_map_iter(|ds| {
            let g = ds.graph();
            (2..=5usize).filter_map(move |m| {
                let d = decide_double_spider(ds, m, &cfg(), Some(0)).unwrap();
                let exact = is_m_burnable(&g, m, &cfg()).unwrap();
                if let Some(w) = &d.witness {
                    assert!(simulate(&g, w).unwrap().rounds_elapsed.unwrap() <= m);
                }
                (d.burnable != exact.is_some()).then(|| format!("{ds} m={m} {:?}", d.basis))
            })
        })
        .collect();
    assert!(bad.is_empty(), "{bad:?}");
}

#[test]
fn degenerate_shapes() {
    for l in 2..=30usize {
        // Every split of a path into two head-rooted sides.
        for i in 0..l - 1 {
            let a = if i > 0 { vec![i] } else { vec![] };
            let rest = l - 2 - i;
            let b = if rest > 0 { vec![rest] } else { vec![] };
            let ds = DoubleSpider::new(a, b).unwrap();
            assert_eq!(ds.order(), l);
            let want = path_burning_number(l);
            for m in 2..=6 {
                let d = decide_double_spider(&ds, m, &cfg(), Some(0)).unwrap();
                assert_eq!(d.burnable, m >= want, "{ds} m={m}");
            }
        }
    }
    for arms in [vec![5, 5, 6], vec![3, 3, 3, 3], vec![7, 1], vec![4, 4, 4, 1, 1]] {
        let (b, _) = burning_number(&graphburn::Graph::spider(&arms), &cfg()).unwrap();
        let ds = DoubleSpider::new(arms[1..].to_vec(), vec![arms[0] - 1]).unwrap();
        assert_eq!(ds.order(), arms.iter().sum::<usize>() + 1);
        for m in 2..=6 {
            let d = decide_double_spider(&ds, m, &cfg(), Some(0)).unwrap();
            assert_eq!(d.burnable, m >= b, "{ds} m={m}");
        }
    }
}
