use std::collections::HashSet;

use serde::Serialize;

use super::{PathForest, PathForestError};
use crate::burn::{complete_plan, BurningSequence};

/// Default node budget for [`decide`]; generous for everything at desk scale.
pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

const MEMO_LIMIT: usize = 1 << 22;

/// Disjoint sets of odd coverage lengths, one per path (in the forest's sorted order).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RadiiAssignment {
    pub m: usize,
    /// `sets[i]`, sorted descending, covers path `i`.
    pub sets: Vec<Vec<usize>>,
}

impl RadiiAssignment {
    /// Checks the odd/distinct/range invariants and that each path is covered.
    pub fn validate(&self, forest: &PathForest) -> Result<(), String> {
        if self.sets.len() != forest.path_count() {
            return Err(format!(
                "{} sets for {} paths",
                self.sets.len(),
                forest.path_count()
            ));
        }
        let mut seen = HashSet::new();
        for (set, &len) in self.sets.iter().zip(forest.lengths()) {
            for &o in set {
                if o % 2 == 0 || o > 2 * self.m - 1 {
                    return Err(format!("{o} is not an odd number in 1..={}", 2 * self.m - 1));
                }
                if !seen.insert(o) {
                    return Err(format!("{o} is used twice"));
                }
            }
            if set.iter().sum::<usize>() < len {
                return Err(format!("{set:?} does not cover a path of order {len}"));
            }
        }
        Ok(())
    }

    /// Per-round plan on [`PathForest::graph`]: on each path the windows are
    /// laid left to right, largest first, each source at its window's middle.
    pub fn to_plan(&self, forest: &PathForest) -> Vec<Option<usize>> {
        let mut plan = vec![None; self.m];
        let mut base = 0;
        for (set, &len) in self.sets.iter().zip(forest.lengths()) {
            let mut offset = 0;
            for &o in set {
                if offset >= len {
                    break;
                }
                let radius = (o - 1) / 2;
                plan[self.m - radius - 1] = Some(base + (offset + radius).min(len - 1));
                offset += o;
            }
            base += len;
        }
        plan
    }

    /// A valid burning sequence for [`PathForest::graph`] finishing within `m` rounds.
    pub fn to_burning_sequence(&self, forest: &PathForest) -> BurningSequence {
        complete_plan(&forest.graph(), &self.to_plan(forest))
    }
}

/// Decides whether `forest` is m-burnable, with the default budget.
pub fn decide(
    forest: &PathForest,
    m: usize,
) -> Result<Option<RadiiAssignment>, PathForestError> {
    decide_with_budget(forest, m, DEFAULT_NODE_BUDGET)
}

/// Exact search. The largest unused odd number can always be spent (trading
/// a smaller one for it never uncovers anything), so the search assigns
/// `2k - 1` for `k = m, m - 1, ...` to one of the paths with positive
/// residual demand, branching only over distinct residual values, and
/// memoizes failed `(k, sorted residuals)` states.
pub fn decide_with_budget(
    forest: &PathForest,
    m: usize,
    node_budget: u64,
) -> Result<Option<RadiiAssignment>, PathForestError> {
    if m == 0 {
        return Err(PathForestError::ZeroRounds);
    }
    if forest.path_count() > m || forest.order() > m * m {
        return Ok(None);
    }
    let mut search = Search {
        demands: forest.lengths().iter().copied().enumerate().map(|(i, l)| (l, i)).collect(),
        sets: vec![Vec::new(); forest.path_count()],
        failed: HashSet::new(),
        expanded: 0,
        budget: node_budget,
    };
    if search.run(m)? {
        Ok(Some(RadiiAssignment {
            m,
            sets: search.sets,
        }))
    } else {
        Ok(None)
    }
}

struct Search {
    /// `(residual demand, path index)`, sorted by demand descending.
    demands: Vec<(usize, usize)>,
    sets: Vec<Vec<usize>>,
    failed: HashSet<(usize, Vec<usize>)>,
    expanded: u64,
    budget: u64,
}

impl Search {
    fn key(&self, k: usize) -> (usize, Vec<usize>) {
        (k, self.demands.iter().map(|d| d.0).collect())
    }

    /// Necessary conditions for covering the demands with odds `1..=2k-1`.
    fn feasible(&self, k: usize) -> bool {
        let p = self.demands.len();
        if p > k {
            return false;
        }
        // The t largest demands can use at most k^2 minus what the other p - t
        // paths consume at minimum (the p - t smallest odds).
        let mut top = 0;
        for (t, &(r, _)) in self.demands.iter().enumerate() {
            top += r;
            let rest = p - t - 1;
            if top > k * k - rest * rest {
                return false;
            }
        }
        // Each path needs at least ceil(r / (2k - 1)) numbers.
        let largest = 2 * k - 1;
        self.demands.iter().map(|d| d.0.div_ceil(largest)).sum::<usize>() <= k
    }

    /// Opens the state for odd number `2k - 1`: `Some(answer)` when it is
    /// settled without branching, otherwise a frame is pushed.
    fn enter(&mut self, k: usize, stack: &mut Vec<Frame>) -> Result<Option<bool>, PathForestError> {
        if self.demands.is_empty() {
            return Ok(Some(true));
        }
        if k == 0 || !self.feasible(k) {
            return Ok(Some(false));
        }
        self.expanded += 1;
        if self.expanded > self.budget {
            return Err(PathForestError::BudgetExceeded {
                expanded: self.expanded,
            });
        }
        let key = self.key(k);
        if self.failed.contains(&key) {
            return Ok(Some(false));
        }
        stack.push(Frame {
            k,
            key,
            next: 0,
            previous: None,
            undo: None,
        });
        Ok(None)
    }

    /// Depth-first search with an explicit stack (depth reaches `m`).
    fn run(&mut self, m: usize) -> Result<bool, PathForestError> {
        let mut stack = Vec::new();
        let mut settled = self.enter(m, &mut stack)?;
        loop {
            if settled == Some(true) {
                return Ok(true);
            }
            let Some(top) = stack.last_mut() else {
                return Ok(false);
            };
            if let Some((saved, path)) = top.undo.take() {
                self.sets[path].pop();
                self.demands = saved;
            }
            let mut choice = None;
            while top.next < self.demands.len() {
                let idx = top.next;
                top.next += 1;
                let r = self.demands[idx].0;
                if top.previous != Some(r) {
                    top.previous = Some(r);
                    choice = Some(idx);
                    break;
                }
            }
            let Some(idx) = choice else {
                let frame = stack.pop().expect("nonempty");
                if self.failed.len() >= MEMO_LIMIT {
                    self.failed.clear();
                }
                self.failed.insert(frame.key);
                settled = Some(false);
                continue;
            };
            let odd = 2 * top.k - 1;
            let (r, path) = self.demands[idx];
            top.undo = Some((self.demands.clone(), path));
            let k = top.k - 1;
            if r <= odd {
                self.demands.remove(idx);
            } else {
                self.demands[idx].0 = r - odd;
                self.demands.sort_by(|a, b| b.0.cmp(&a.0));
            }
            self.sets[path].push(odd);
            settled = self.enter(k, &mut stack)?;
        }
    }
}

struct Frame {
    k: usize,
    key: (usize, Vec<usize>),
    /// Next index into the demands to try.
    next: usize,
    previous: Option<usize>,
    /// Demands before the current choice, and the path it went to.
    undo: Option<(Vec<(usize, usize)>, usize)>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::burn::simulate;
    use crate::solver::{is_m_burnable, SolverConfig};

    fn pf(l: &[usize]) -> PathForest {
        PathForest::new(l.to_vec()).unwrap()
    }

    fn check_witness(t: &PathForest, m: usize) -> bool {
        match decide(t, m).unwrap() {
            Some(a) => {
                a.validate(t).unwrap();
                let out = simulate(&t.graph(), &a.to_burning_sequence(t)).unwrap();
                assert!(out.fully_burned && out.rounds_elapsed.unwrap() <= m, "{t} m={m}");
                true
            }
            None => false,
        }
    }

    #[test]
    fn examples() {
        assert!(check_witness(&pf(&[7, 5, 2]), 4));
        assert!(!check_witness(&pf(&[13, 1, 1]), 4));
        assert!(!check_witness(&pf(&[10, 2, 2]), 4));
        let a = decide(&pf(&[16]), 4).unwrap().unwrap();
        assert_eq!(a.sets, vec![vec![7, 5, 3, 1]]);
        assert_eq!(decide(&pf(&[1]), 0), Err(PathForestError::ZeroRounds));
    }

    #[test]
    fn ten_two_two_by_hand() {
        // Subsets of {1,3,5,7}: the two 2s need two distinct numbers >= 3
        // (or 1+... sums), leaving at most 7 + 1 = 8 < 10 for the long path.
        let t = pf(&[10, 2, 2]);
        let odds = [1usize, 3, 5, 7];
        let mut found = false;
        for labels in 0..4usize.pow(4) {
            let mut sums = [0; 3];
            let mut l = labels;
            for &o in &odds {
                if l % 4 < 3 {
                    sums[l % 4] += o;
                }
                l /= 4;
            }
            found |= sums.iter().zip(t.lengths()).all(|(s, &need)| *s >= need);
        }
        assert!(!found);
    }

    #[test]
    fn agrees_with_graph_solver_on_small_forests() {
        for lengths in super::super::nonincreasing_tuples(3, 1, 12, 1) {
            let t = PathForest::new(lengths).unwrap();
            for m in 1..=4 {
                let oracle = is_m_burnable(&t.graph(), m, &SolverConfig::default())
                    .unwrap()
                    .is_some();
                assert_eq!(check_witness(&t, m), oracle, "{t} m={m}");
            }
        }
    }

    #[test]
    fn budget_is_explicit() {
        let t = pf(&[30, 30, 30, 30, 20, 20, 20, 20, 20, 20, 20, 11]);
        assert!(matches!(
            decide_with_budget(&t, 17, 3),
            Err(PathForestError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn short_paths_skip_windows_past_their_end() {
        // Path of order 2 given {7}: the window is clamped to the path.
        let t = pf(&[2]);
        let a = RadiiAssignment {
            m: 4,
            sets: vec![vec![7, 1]],
        };
        a.validate(&t).unwrap();
        assert_eq!(a.to_plan(&t), vec![Some(1), None, None, None]);
    }
}
