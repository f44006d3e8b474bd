//! Exact m-burnability search for small graphs.
//!
//! A graph is m-burnable iff there are sources `x_1, ..., x_k` (`k <= m`, some
//! rounds may be left out) whose balls `B(x_i, m - i)` cover every vertex; any
//! such cover is turned into a valid burning sequence by [`complete_plan`].
//! The search branches on the uncovered vertex with the fewest covering
//! options, discards candidate centers whose fresh coverage is contained in
//! another center's for the same round, bounds by the best possible coverage
//! of the unused rounds, and memoizes failed `(used rounds, covered set)`
//! states.
//!
//! Per-vertex deadlines generalise the radius: a vertex with deadline `D` is
//! covered by source `i` at `c` only when `i + d(c, v) <= D`.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::bitset::VertexSet;
use crate::burn::{complete_plan, BurningSequence};
use crate::graph::{DistanceMatrix, Graph};

/// Hard cap on rounds; the used-round mask is a `u128`.
pub const MAX_ROUNDS: usize = 128;

const MEMO_LIMIT: usize = 1 << 22;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("search budget exhausted after {expanded} node expansions{}", bounds_suffix(.bounds))]
    BudgetExceeded {
        expanded: u64,
        /// Best known `(lower, upper)` bounds on the burning number, when searching for it.
        bounds: Option<(usize, usize)>,
    },
    #[error("{0} rounds exceeds the solver limit of {MAX_ROUNDS}")]
    TooManyRounds(usize),
    #[error("round count must be at least 1")]
    ZeroRounds,
    #[error("deadline list has {got} entries for {expected} vertices")]
    DeadlineLength { got: usize, expected: usize },
    #[error("the graph is empty")]
    EmptyGraph,
}

fn bounds_suffix(bounds: &Option<(usize, usize)>) -> String {
    match bounds {
        Some((lo, hi)) => format!(" ({lo} <= b <= {hi})"),
        None => String::new(),
    }
}

/// Interruption limits. The default is unbounded.
#[derive(Debug, Clone, Copy, Default)]
pub struct SolverConfig {
    pub node_budget: Option<u64>,
    pub time_budget: Option<Duration>,
}

impl SolverConfig {
    pub fn with_nodes(nodes: u64) -> Self {
        SolverConfig {
            node_budget: Some(nodes),
            time_budget: None,
        }
    }
}

/// Decides `b(G) <= m`, returning a witness sequence when it holds.
pub fn is_m_burnable(
    graph: &Graph,
    m: usize,
    config: &SolverConfig,
) -> Result<Option<BurningSequence>, SolveError> {
    let deadlines = vec![m; graph.vertex_count()];
    solve(graph, &graph.distances(), m, &deadlines, config).map(|r| r.witness)
}

/// Like [`is_m_burnable`], but vertex `v` must burn no later than round
/// `deadlines[v]` (values above `m` are clamped to `m`).
pub fn is_m_burnable_with_deadlines(
    graph: &Graph,
    m: usize,
    deadlines: &[usize],
    config: &SolverConfig,
) -> Result<Option<BurningSequence>, SolveError> {
    solve(graph, &graph.distances(), m, deadlines, config).map(|r| r.witness)
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub witness: Option<BurningSequence>,
    pub expanded: u64,
}

/// Full entry point with a precomputed distance matrix.
pub fn solve(
    graph: &Graph,
    dist: &DistanceMatrix,
    m: usize,
    deadlines: &[usize],
    config: &SolverConfig,
) -> Result<SearchResult, SolveError> {
    let n = graph.vertex_count();
    if m == 0 {
        return Err(SolveError::ZeroRounds);
    }
    if deadlines.len() != n {
        return Err(SolveError::DeadlineLength {
            got: deadlines.len(),
            expected: n,
        });
    }
    if n == 0 {
        return Ok(SearchResult {
            witness: Some(BurningSequence::new(Vec::new()).expect("empty")),
            expanded: 0,
        });
    }
    let deadlines: Vec<usize> = deadlines.iter().map(|&d| d.min(m)).collect();
    if m >= n && deadlines.iter().all(|&d| d >= n) {
        // One fresh source per round burns everything within n rounds.
        return Ok(SearchResult {
            witness: Some(complete_plan(graph, &vec![None; n])),
            expanded: 0,
        });
    }
    if m > MAX_ROUNDS {
        return Err(SolveError::TooManyRounds(m));
    }
    let mut search = Search::new(dist, m, &deadlines, config);
    let found = search.run()?;
    let witness = found.then(|| {
        let mut plan = vec![None; m];
        for &(round, center) in &search.chosen {
            plan[round - 1] = Some(center);
        }
        complete_plan(graph, &plan)
    });
    Ok(SearchResult {
        witness,
        expanded: search.expanded,
    })
}

/// Least `m` with `b(G) <= m`, with a witness sequence of that length or shorter.
pub fn burning_number(
    graph: &Graph,
    config: &SolverConfig,
) -> Result<(usize, BurningSequence), SolveError> {
    let n = graph.vertex_count();
    if n == 0 {
        return Err(SolveError::EmptyGraph);
    }
    let dist = graph.distances();
    let lower = capacity_lower_bound(&dist);
    let started = Instant::now();
    let mut expanded_total = 0u64;
    for m in lower..=n {
        let remaining = SolverConfig {
            node_budget: config
                .node_budget
                .map(|b| b.saturating_sub(expanded_total)),
            time_budget: config.time_budget.map(|t| t.saturating_sub(started.elapsed())),
        };
        let deadlines = vec![m; n];
        match solve(graph, &dist, m, &deadlines, &remaining) {
            Ok(SearchResult {
                witness: Some(w), ..
            }) => return Ok((m, w)),
            Ok(SearchResult { expanded, .. }) => expanded_total += expanded,
            Err(SolveError::BudgetExceeded { expanded, .. }) => {
                return Err(SolveError::BudgetExceeded {
                    expanded: expanded_total + expanded,
                    bounds: Some((m, n)),
                })
            }
            Err(e) => return Err(e),
        }
    }
    unreachable!("every graph on n vertices is n-burnable")
}

/// Least `m` such that the `m` largest balls of radii `m-1, ..., 0` could
/// together cover every vertex.
pub fn capacity_lower_bound(dist: &DistanceMatrix) -> usize {
    let n = dist.vertex_count();
    // max_ball[r] = max_c |B(c, r)|, nondecreasing in r and capped at n.
    let mut max_ball = Vec::new();
    for r in 0..n {
        let best = (0..n)
            .map(|c| dist.row(c).iter().filter(|&&d| d <= r).count())
            .max()
            .unwrap_or(0);
        max_ball.push(best);
        if best == n {
            break;
        }
    }
    let ball = |r: usize| max_ball[r.min(max_ball.len() - 1)];
    (1..=n)
        .find(|&m| (0..m).map(ball).sum::<usize>() >= n)
        .unwrap_or(n)
}

struct Search {
    n: usize,
    m: usize,
    /// `cover[(i - 1) * n + c]`: vertices covered by source `i` placed at `c`.
    cover: Vec<VertexSet>,
    /// `options[v][i - 1]`: centers whose round-`i` source covers `v`.
    options: Vec<Vec<Vec<usize>>>,
    full: VertexSet,
    failed: HashSet<(u128, VertexSet)>,
    chosen: Vec<(usize, usize)>,
    expanded: u64,
    node_budget: Option<u64>,
    deadline: Option<Instant>,
}

impl Search {
    fn new(dist: &DistanceMatrix, m: usize, deadlines: &[usize], config: &SolverConfig) -> Self {
        let n = dist.vertex_count();
        let mut cover = Vec::with_capacity(m * n);
        let mut options = vec![vec![Vec::new(); m]; n];
        for i in 1..=m {
            for c in 0..n {
                let mut set = VertexSet::empty(n);
                for (v, &d) in dist.row(c).iter().enumerate() {
                    if d < dist.unreachable() && i + d <= deadlines[v] {
                        set.insert(v);
                        options[v][i - 1].push(c);
                    }
                }
                cover.push(set);
            }
        }
        Search {
            n,
            m,
            cover,
            options,
            full: VertexSet::full(n),
            failed: HashSet::new(),
            chosen: Vec::new(),
            expanded: 0,
            node_budget: config.node_budget,
            deadline: config.time_budget.map(|t| Instant::now() + t),
        }
    }

    fn run(&mut self) -> Result<bool, SolveError> {
        let covered = VertexSet::empty(self.n);
        self.dfs(&covered, 0)
    }

    fn cover_of(&self, round: usize, center: usize) -> &VertexSet {
        &self.cover[(round - 1) * self.n + center]
    }

    fn check_budget(&self) -> Result<(), SolveError> {
        let over_nodes = self.node_budget.is_some_and(|b| self.expanded > b);
        let over_time = self.expanded % 256 == 0
            && self.deadline.is_some_and(|d| Instant::now() >= d);
        if over_nodes || over_time {
            return Err(SolveError::BudgetExceeded {
                expanded: self.expanded,
                bounds: None,
            });
        }
        Ok(())
    }

    fn dfs(&mut self, covered: &VertexSet, used: u128) -> Result<bool, SolveError> {
        let uncovered = self.full.difference(covered);
        let need = uncovered.len();
        if need == 0 {
            return Ok(true);
        }
        self.expanded += 1;
        self.check_budget()?;

        let unused: Vec<usize> = (1..=self.m).filter(|&i| used >> i & 1 == 0).collect();
        if unused.is_empty() {
            return Ok(false);
        }

        // Capacity bound over the unused rounds.
        let mut capacity = 0;
        for &i in &unused {
            capacity += (0..self.n)
                .map(|c| self.cover_of(i, c).difference_len(covered))
                .max()
                .unwrap_or(0);
            if capacity >= need {
                break;
            }
        }
        if capacity < need {
            return Ok(false);
        }

        // Most constrained uncovered vertex.
        let mut target = None;
        let mut fewest = usize::MAX;
        for v in uncovered.iter() {
            let count: usize = unused.iter().map(|&i| self.options[v][i - 1].len()).sum();
            if count < fewest {
                fewest = count;
                target = Some(v);
                if count == 0 {
                    return Ok(false);
                }
            }
        }
        let target = target.expect("uncovered is nonempty");

        let mut candidates: Vec<(usize, usize, VertexSet)> = Vec::new();
        for &i in &unused {
            let mut per_round: Vec<(usize, VertexSet)> = self.options[target][i - 1]
                .iter()
                .map(|&c| (c, self.cover_of(i, c).difference(covered)))
                .collect();
            // Keep only centers whose fresh coverage is not dominated.
            let mut keep = vec![true; per_round.len()];
            for a in 0..per_round.len() {
                for b in 0..per_round.len() {
                    if a == b || !keep[b] {
                        continue;
                    }
                    let (ga, gb) = (&per_round[a].1, &per_round[b].1);
                    if ga.is_subset(gb) && (ga != gb || b < a) {
                        keep[a] = false;
                        break;
                    }
                }
            }
            let mut k = 0;
            per_round.retain(|_| {
                k += 1;
                keep[k - 1]
            });
            candidates.extend(per_round.into_iter().map(|(c, g)| (i, c, g)));
        }
        candidates.sort_by(|a, b| b.2.len().cmp(&a.2.len()).then(b.0.cmp(&a.0)));

        for (round, center, _) in candidates {
            let mut next = covered.clone();
            next.union_with(self.cover_of(round, center));
            let next_used = used | 1 << round;
            let key = (next_used, next);
            if self.failed.contains(&key) {
                continue;
            }
            if self.dfs(&key.1, next_used)? {
                self.chosen.push((round, center));
                return Ok(true);
            }
            if self.failed.len() >= MEMO_LIMIT {
                self.failed.clear();
            }
            self.failed.insert(key);
        }
        Ok(false)
    }
}
