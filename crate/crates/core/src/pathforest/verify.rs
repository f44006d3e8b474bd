//! Exhaustive checks of the path-forest guarantees against [`decide`].

use rayon::prelude::*;
use serde::Serialize;

use super::{
    decide_with_budget, exceptional_family, n_paths_bound, theorem_predict, Guarantee,
    PathForest, PathForestError, Prediction,
};

/// All nonincreasing `n`-tuples with parts `>= min_part` and sum in
/// `min_sum..=max_sum`, in lexicographic order.
pub fn nonincreasing_tuples(
    n: usize,
    min_sum: usize,
    max_sum: usize,
    min_part: usize,
) -> Vec<Vec<usize>> {
    fn go(
        prefix: &mut Vec<usize>,
        left: usize,
        cap: usize,
        budget: usize,
        min_part: usize,
        min_sum: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        if left == 0 {
            if prefix.iter().sum::<usize>() >= min_sum {
                out.push(prefix.clone());
            }
            return;
        }
        // The remaining `left - 1` parts need at least `min_part` each.
        let reserve = (left - 1) * min_part;
        let Some(room) = budget.checked_sub(reserve) else {
            return;
        };
        for part in min_part..=cap.min(room) {
            prefix.push(part);
            go(prefix, left - 1, part, budget - part, min_part, min_sum, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let min_part = min_part.max(1);
    go(&mut Vec::new(), n, max_sum, max_sum, min_part, min_sum, &mut out);
    // `go` emits tuples ascending in their first (largest) part.
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub forest: PathForest,
    pub m: usize,
    pub expected: bool,
    pub decided: bool,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub n: usize,
    pub m: usize,
    /// Forests at or below the order bound.
    pub checked: usize,
    pub burnable: usize,
    /// Members of the exceptional family, all required to fail.
    pub exceptional: usize,
    pub violations: Vec<Violation>,
}

fn decide_bool(t: &PathForest, m: usize, budget: u64) -> Result<bool, PathForestError> {
    Ok(decide_with_budget(t, m, budget)?.is_some())
}

/// Every forest with `n` paths and order at most `m^2 - (n-1)(n-2) + 1 - t_T`
/// is m-burnable exactly when it lies outside the exceptional family, and
/// every family member fails.
pub fn verify_path_forest_bound(
    n: usize,
    m: usize,
    node_budget: u64,
) -> Result<BoundReport, PathForestError> {
    if n < 3 || m < n {
        return Err(PathForestError::Domain(format!(
            "the order bound is stated for m >= n >= 3 (got m = {m}, n = {n})"
        )));
    }
    let family = exceptional_family(n, m)?;
    let max_sum = m * m + 1 - (n - 1) * (n - 2);
    let forests: Vec<PathForest> = nonincreasing_tuples(n, n, max_sum, 1)
        .into_iter()
        .map(|l| PathForest::new(l).expect("positive parts"))
        .filter(|t| n_paths_bound(t, m).is_some_and(|b| t.order() <= b))
        .collect();
    let results: Vec<(bool, Option<Violation>)> = forests
        .par_iter()
        .map(|t| {
            let expected = family.binary_search(t).is_err();
            let decided = decide_bool(t, m, node_budget)?;
            let violation = (decided != expected).then(|| Violation {
                forest: t.clone(),
                m,
                expected,
                decided,
                reason: if expected {
                    "within the order bound and outside the family".into()
                } else {
                    "member of the exceptional family".into()
                },
            });
            Ok((decided, violation))
        })
        .collect::<Result<_, PathForestError>>()?;
    let mut violations: Vec<Violation> = results.iter().filter_map(|r| r.1.clone()).collect();
    for t in &family {
        // Members sit exactly at the bound, so they were checked above too;
        // this pass keeps the family check independent of the enumeration.
        if decide_bool(t, m, node_budget)? && !violations.iter().any(|v| &v.forest == t) {
            violations.push(Violation {
                forest: t.clone(),
                m,
                expected: false,
                decided: true,
                reason: "member of the exceptional family".into(),
            });
        }
    }
    violations.sort_by(|a, b| a.forest.cmp(&b.forest));
    Ok(BoundReport {
        n,
        m,
        checked: forests.len(),
        burnable: results.iter().filter(|r| r.0).count(),
        exceptional: family.len(),
        violations,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearClauseReport {
    pub clause: Guarantee,
    pub n: usize,
    /// Rounds the clause guarantees.
    pub rounds: usize,
    pub checked: usize,
    pub violations: Vec<Violation>,
}

/// For `2 <= n <= n_max`, every forest meeting the hypotheses of the linear
/// order conditions (`3n-2`, `4n-4`, `5n-6`, `5n-1`) is checked with [`decide`]
/// at the guaranteed number of rounds, and [`theorem_predict`] must agree.
pub fn verify_linear_bounds(
    n_max: usize,
    node_budget: u64,
) -> Result<Vec<LinearClauseReport>, PathForestError> {
    let mut jobs = Vec::new();
    for n in 2..=n_max {
        for clause in [
            Guarantee::Order3nMinus2,
            Guarantee::Order4nMinus4,
            Guarantee::Order5nMinus6,
            Guarantee::Order5nMinus1,
        ] {
            jobs.push((n, clause));
        }
    }
    jobs.into_par_iter()
        .map(|(n, clause)| {
            let (max_order, rounds, min_part) = match clause {
                Guarantee::Order3nMinus2 => (3 * n - 2, n, 1),
                Guarantee::Order4nMinus4 => (4 * n - 4, n, 1),
                Guarantee::Order5nMinus6 => (5 * n - 6, n, 1),
                _ => (5 * n - 1, n + 1, 3),
            };
            let hypothesis = |l: &[usize]| {
                let (last, second) = (l[n - 1], l[n - 2]);
                match clause {
                    Guarantee::Order3nMinus2 => last == 1,
                    Guarantee::Order4nMinus4 => last == 1 && second >= 2,
                    Guarantee::Order5nMinus6 => last == 1 && second == 3,
                    _ => last >= 3,
                }
            };
            let forests: Vec<PathForest> = nonincreasing_tuples(n, 0, max_order, min_part)
                .into_iter()
                .filter(|l| hypothesis(l))
                .map(|l| PathForest::new(l).expect("positive parts"))
                .collect();
            let mut violations = Vec::new();
            for t in &forests {
                let decided = decide_bool(t, rounds, node_budget)?;
                let predicted = matches!(theorem_predict(t, rounds), Prediction::BurnableBy(_));
                if !decided || !predicted {
                    violations.push(Violation {
                        forest: t.clone(),
                        m: rounds,
                        expected: true,
                        decided,
                        reason: format!("{} hypothesis holds", clause.label()),
                    });
                }
            }
            Ok(LinearClauseReport {
                clause,
                n,
                rounds,
                checked: forests.len(),
                violations,
            })
        })
        .collect()
}
