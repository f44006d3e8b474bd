//! Deficient path forests of square order, their `≺`-extension trees, and
//! certification of the least `L` such that every forest with `n` paths of
//! order at least `L` and total order `m^2` is m-burnable.
//!
//! `T ≺ T'` when `T` (order `m^2`) and `T'` (order `(m+1)^2`) are both
//! deficient and `T'` adds `2m + 1` to exactly one component of `T`.

mod cache;
mod exchange;
mod lemmas;

use std::collections::VecDeque;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::pathforest::{nonincreasing_tuples, path_burning_number, PathForest, PathForestError};

pub use cache::DeficiencyCache;
pub use exchange::{
    exchange_partition_multi, exchange_partition_two, ExchangePartition, OddSequence,
};
pub use lemmas::{construct_even_pairs, construct_long_paths, LemmaConstruction};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChainError {
    #[error("order {0} is not a perfect square")]
    NotSquareOrder(usize),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("guard of {guard} terms exhausted: {what}")]
    GuardExhausted { guard: usize, what: String },
    #[error(transparent)]
    Decide(#[from] PathForestError),
    #[error("deficiency cache: {0}")]
    Cache(String),
}

/// A path forest together with the `m` such that its order is `m^2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SquareForest {
    pub forest: PathForest,
    pub m: usize,
}

impl SquareForest {
    pub fn new(forest: PathForest) -> Result<Self, ChainError> {
        let order = forest.order();
        let m = order.isqrt();
        if m * m != order {
            return Err(ChainError::NotSquareOrder(order));
        }
        Ok(SquareForest { forest, m })
    }
}

impl std::fmt::Display for SquareForest {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} at m = {}", self.forest, self.m)
    }
}

/// The deficient `≺`-extensions of a deficient forest, one per distinct component value.
pub fn prec_children(
    sf: &SquareForest,
    cache: &DeficiencyCache,
) -> Result<Vec<SquareForest>, ChainError> {
    if !cache.is_deficient(sf)? {
        return Err(ChainError::PreconditionViolated(format!(
            "{sf} is m-burnable"
        )));
    }
    let lengths = sf.forest.lengths();
    let step = 2 * sf.m + 1;
    let mut out = Vec::new();
    for (i, &l) in lengths.iter().enumerate() {
        if i > 0 && lengths[i - 1] == l {
            continue;
        }
        let mut grown = lengths.to_vec();
        grown[i] = l + step;
        let child = SquareForest {
            forest: PathForest::new(grown)?,
            m: sf.m + 1,
        };
        if cache.is_deficient(&child)? {
            out.push(child);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeStatus {
    /// All deficient children are listed (none for a closed leaf).
    Closed,
    /// Deficient children exist but were not expanded within the budget.
    OpenBudget,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrecNode {
    pub forest: SquareForest,
    pub status: NodeStatus,
    pub children: Vec<PrecNode>,
}

impl PrecNode {
    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(PrecNode::node_count).sum::<usize>()
    }

    pub fn max_m(&self) -> usize {
        self.children
            .iter()
            .map(PrecNode::max_m)
            .max()
            .unwrap_or(self.forest.m)
    }

    /// Every node, parents before children.
    pub fn nodes(&self) -> Vec<&PrecNode> {
        let mut out = vec![self];
        let mut i = 0;
        while i < out.len() {
            out.extend(out[i].children.iter());
            i += 1;
        }
        out
    }

    pub fn open_leaves(&self) -> Vec<&SquareForest> {
        self.nodes()
            .into_iter()
            .filter(|n| n.status == NodeStatus::OpenBudget)
            .map(|n| &n.forest)
            .collect()
    }

    /// Root-to-leaf forest sequences.
    pub fn chains(&self) -> Vec<Vec<PathForest>> {
        if self.children.is_empty() {
            return vec![vec![self.forest.forest.clone()]];
        }
        self.children
            .iter()
            .flat_map(|c| c.chains())
            .map(|mut chain| {
                chain.insert(0, self.forest.forest.clone());
                chain
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TreeBudget {
    pub max_nodes: usize,
    /// Nodes at this many rounds are not expanded further.
    pub max_m: usize,
    #[serde(skip)]
    pub deadline: Option<Instant>,
}

impl TreeBudget {
    pub fn new(max_nodes: usize, max_m: usize) -> Self {
        TreeBudget {
            max_nodes,
            max_m,
            deadline: None,
        }
    }
}

/// Breadth-first `≺`-tree below a deficient root; each layer's children are
/// computed in parallel and attached in a fixed order.
pub fn expand_prec_tree(
    root: &SquareForest,
    budget: TreeBudget,
    cache: &DeficiencyCache,
) -> Result<PrecNode, ChainError> {
    struct Slot {
        forest: SquareForest,
        status: NodeStatus,
        children: Vec<usize>,
    }
    let root_children = prec_children(root, cache)?;
    let mut arena = vec![Slot {
        forest: root.clone(),
        status: NodeStatus::Closed,
        children: Vec::new(),
    }];
    let mut pending: VecDeque<(usize, Vec<SquareForest>)> = VecDeque::from([(0, root_children)]);
    while !pending.is_empty() {
        let layer: Vec<(usize, Vec<SquareForest>)> = pending.drain(..).collect();
        let mut next_frontier = Vec::new();
        for (parent, kids) in layer {
            if kids.is_empty() {
                continue;
            }
            let out_of_time = budget.deadline.is_some_and(|d| Instant::now() >= d);
            if arena[parent].forest.m >= budget.max_m
                || arena.len() + kids.len() > budget.max_nodes
                || out_of_time
            {
                arena[parent].status = NodeStatus::OpenBudget;
                continue;
            }
            for kid in kids {
                arena.push(Slot {
                    forest: kid,
                    status: NodeStatus::Closed,
                    children: Vec::new(),
                });
                let idx = arena.len() - 1;
                arena[parent].children.push(idx);
                next_frontier.push(idx);
            }
        }
        let expanded: Vec<Vec<SquareForest>> = next_frontier
            .par_iter()
            .map(|&idx| prec_children(&arena[idx].forest, cache))
            .collect::<Result<_, _>>()?;
        pending.extend(next_frontier.into_iter().zip(expanded));
    }
    fn build(arena: &[Slot], idx: usize) -> PrecNode {
        PrecNode {
            forest: arena[idx].forest.clone(),
            status: arena[idx].status,
            children: arena[idx].children.iter().map(|&c| build(arena, c)).collect(),
        }
    }
    Ok(build(&arena, 0))
}

/// All forests with `n` paths, each of order at least `min_len`, total order `m^2`.
fn square_forests(n: usize, min_len: usize, m: usize) -> Vec<SquareForest> {
    nonincreasing_tuples(n, m * m, m * m, min_len)
        .into_iter()
        .map(|mut l| {
            l.reverse();
            SquareForest {
                forest: PathForest::new(l).expect("positive parts"),
                m,
            }
        })
        .collect()
}

/// Deficient forests with `n` paths, every path at least `min_len`, and
/// order `m^2` for `m_lo <= m <= m_hi`; sorted by `m`, then lengths.
pub fn enumerate_deficient(
    n: usize,
    min_len: usize,
    m_lo: usize,
    m_hi: usize,
    cache: &DeficiencyCache,
) -> Result<Vec<SquareForest>, ChainError> {
    if n < 2 || min_len == 0 {
        return Err(ChainError::PreconditionViolated(format!(
            "need n >= 2 and L >= 1 (got n = {n}, L = {min_len})"
        )));
    }
    let mut out = Vec::new();
    for m in m_lo..=m_hi {
        let level = square_forests(n, min_len, m);
        let flags: Vec<bool> = level
            .par_iter()
            .map(|sf| cache.is_deficient(sf))
            .collect::<Result<_, _>>()?;
        let mut found: Vec<SquareForest> = level
            .into_iter()
            .zip(flags)
            .filter_map(|(sf, d)| d.then_some(sf))
            .collect();
        found.sort();
        out.extend(found);
    }
    Ok(out)
}

fn first_deficient(
    n: usize,
    min_len: usize,
    m_lo: usize,
    m_hi: usize,
    cache: &DeficiencyCache,
) -> Result<Option<SquareForest>, ChainError> {
    for m in m_lo..=m_hi {
        let mut level = square_forests(n, min_len, m);
        level.sort();
        let hit = level
            .par_iter()
            .map(|sf| cache.is_deficient(sf).map(|d| d.then(|| sf.clone())))
            .find_first(|r| !matches!(r, Ok(None)));
        if let Some(r) = hit {
            return r;
        }
    }
    Ok(None)
}

/// Least `m >= n` with `ceil(m^2 / n) - (2m - 1) >= min_len`. At or beyond
/// it, the longest path of any forest in `H(n, min_len)` of order `m^2` can
/// lose `2m - 1` vertices and stay at least `min_len`; if the smaller forest
/// were (m-1)-burnable, adding the odd number `2m - 1` would make the larger
/// one m-burnable. So every deficient member at level `m >= M` has a
/// deficient `≺`-predecessor in `H(n, min_len)`, and the expression is
/// nondecreasing for `m >= n`.
pub fn predecessor_threshold(n: usize, min_len: usize) -> usize {
    let mut m = n;
    while (m * m).div_ceil(n) < min_len + 2 * m - 1 {
        m += 1;
    }
    m
}

/// Smallest level at which `n` paths of order at least `min_len` fit.
fn lowest_level(n: usize, min_len: usize) -> usize {
    path_burning_number(n * min_len)
}

#[derive(Debug, Clone)]
pub struct CertifyOptions {
    /// Seeds are the deficient forests with every path at least this
    /// (default: `L` itself, making any seed a counterexample).
    pub seed_floor: Option<usize>,
    pub max_nodes: usize,
    pub max_m: usize,
    pub time_budget: Option<Duration>,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            seed_floor: None,
            max_nodes: 1_000_000,
            max_m: 200,
            time_budget: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Certified,
    Counterexample,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Evidence {
    pub n: usize,
    #[serde(rename = "L")]
    pub l: usize,
    pub seed_floor: usize,
    pub threshold_m: usize,
    /// Levels `m` whose forests were enumerated for seeds.
    pub levels: (usize, usize),
    pub seeds: Vec<SquareForest>,
    pub tree_sizes: Vec<usize>,
    pub max_m_reached: usize,
    pub verdict: Verdict,
    pub counterexample: Option<SquareForest>,
    /// Open budget leaves when inconclusive.
    pub frontier: Vec<SquareForest>,
    pub max_nodes: usize,
    pub max_m: usize,
    pub time_budget_secs: Option<u64>,
}

/// Decides whether every forest with `n` paths, each of order at least `l`,
/// and square total order `m^2` is m-burnable.
///
/// Seeds are all deficient forests with paths at least the seed floor at
/// levels below [`predecessor_threshold`]; every deficient forest of the
/// class lies in the `≺`-tree of some seed. Certified means every seed
/// tree closed without reaching a forest whose paths are all at least `l`.
pub fn certify_l(
    n: usize,
    l: usize,
    opts: &CertifyOptions,
    cache: &DeficiencyCache,
) -> Result<Evidence, ChainError> {
    let floor = opts.seed_floor.unwrap_or(l);
    if n < 2 || l == 0 || floor == 0 || floor > l {
        return Err(ChainError::PreconditionViolated(format!(
            "need n >= 2 and 1 <= seed floor <= L (got n = {n}, L = {l}, floor = {floor})"
        )));
    }
    let started = Instant::now();
    let threshold_m = predecessor_threshold(n, floor);
    let levels = (lowest_level(n, floor), threshold_m - 1);
    let mut evidence = Evidence {
        n,
        l,
        seed_floor: floor,
        threshold_m,
        levels,
        seeds: Vec::new(),
        tree_sizes: Vec::new(),
        max_m_reached: 0,
        verdict: Verdict::Certified,
        counterexample: None,
        frontier: Vec::new(),
        max_nodes: opts.max_nodes,
        max_m: opts.max_m,
        time_budget_secs: opts.time_budget.map(|d| d.as_secs()),
    };
    let reaches_l = |sf: &SquareForest| sf.forest.shortest() >= l;
    if floor == l {
        if let Some(sf) = first_deficient(n, l, levels.0, levels.1, cache)? {
            evidence.max_m_reached = sf.m;
            evidence.seeds.push(sf.clone());
            evidence.counterexample = Some(sf);
            evidence.verdict = Verdict::Counterexample;
        }
        return Ok(evidence);
    }
    evidence.seeds = enumerate_deficient(n, floor, levels.0, levels.1, cache)?;
    if let Some(sf) = evidence.seeds.iter().find(|sf| reaches_l(sf)) {
        evidence.counterexample = Some(sf.clone());
        evidence.verdict = Verdict::Counterexample;
        return Ok(evidence);
    }
    let budget = TreeBudget {
        max_nodes: opts.max_nodes,
        max_m: opts.max_m,
        deadline: opts.time_budget.map(|d| started + d),
    };
    for seed in evidence.seeds.clone() {
        let tree = expand_prec_tree(&seed, budget, cache)?;
        evidence.tree_sizes.push(tree.node_count());
        evidence.max_m_reached = evidence.max_m_reached.max(tree.max_m());
        if let Some(node) = tree.nodes().into_iter().find(|n| reaches_l(&n.forest)) {
            evidence.counterexample = Some(node.forest.clone());
            evidence.verdict = Verdict::Counterexample;
            return Ok(evidence);
        }
        evidence.frontier.extend(tree.open_leaves().into_iter().cloned());
    }
    if !evidence.frontier.is_empty() {
        evidence.verdict = Verdict::Inconclusive;
    }
    Ok(evidence)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LnResult {
    pub n: usize,
    /// Least certified `L`; `None` if the scan stopped inconclusive.
    pub value: Option<usize>,
    /// A deficient forest whose shortest path is exactly `value - 1`.
    pub witness: Option<SquareForest>,
    /// Evidence of the final certification attempt.
    pub evidence: Evidence,
}

/// Scans `L = 1, 2, ...` with [`certify_l`]; each counterexample with
/// shortest path `s` rules out every `L <= s` at once.
pub fn compute_l(
    n: usize,
    opts: &CertifyOptions,
    cache: &DeficiencyCache,
) -> Result<LnResult, ChainError> {
    let mut l = 1;
    let mut witness: Option<SquareForest> = None;
    loop {
        let step_opts = CertifyOptions {
            seed_floor: opts.seed_floor.map(|f| f.min(l)),
            ..opts.clone()
        };
        let evidence = certify_l(n, l, &step_opts, cache)?;
        match evidence.verdict {
            Verdict::Counterexample => {
                let cx = evidence.counterexample.clone().expect("counterexample");
                l = cx.forest.shortest() + 1;
                witness = Some(cx);
            }
            Verdict::Certified => {
                return Ok(LnResult {
                    n,
                    value: Some(l),
                    witness,
                    evidence,
                })
            }
            Verdict::Inconclusive => {
                return Ok(LnResult {
                    n,
                    value: None,
                    witness,
                    evidence,
                })
            }
        }
    }
}
