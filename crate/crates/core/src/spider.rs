//! Double spiders: two adjacent heads `A` and `B`, every other vertex on an
//! arm hanging off one head. Paths and spiders are degenerate cases.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::burn::{simulate, BurningSequence};
use crate::graph::{parse_list, Graph};
use crate::pathforest::nonincreasing_tuples;
use crate::solver::{is_m_burnable, is_m_burnable_with_deadlines, SolveError, SolverConfig};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpiderError {
    #[error("arm lengths must be positive")]
    ZeroArm,
    #[error("bad double spider `{0}`")]
    Parse(String),
    #[error("{0}")]
    Domain(String),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("no head-deadline witness within the search budget")]
    NoWitnessInBudget,
    #[error("no burning sequence leaves {required} rounds after both heads burn")]
    NoWitness { required: usize },
}

/// Arms of head `A` (vertex 0) and head `B` (vertex 1), each sorted descending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DoubleSpider {
    arms_a: Vec<usize>,
    arms_b: Vec<usize>,
}

impl DoubleSpider {
    pub fn new(mut arms_a: Vec<usize>, mut arms_b: Vec<usize>) -> Result<Self, SpiderError> {
        if arms_a.contains(&0) || arms_b.contains(&0) {
            return Err(SpiderError::ZeroArm);
        }
        arms_a.sort_unstable_by(|x, y| y.cmp(x));
        arms_b.sort_unstable_by(|x, y| y.cmp(x));
        Ok(DoubleSpider { arms_a, arms_b })
    }

    pub fn arms_a(&self) -> &[usize] {
        &self.arms_a
    }

    pub fn arms_b(&self) -> &[usize] {
        &self.arms_b
    }

    pub fn arm_count(&self) -> usize {
        self.arms_a.len() + self.arms_b.len()
    }

    pub fn order(&self) -> usize {
        2 + self.arms_a.iter().sum::<usize>() + self.arms_b.iter().sum::<usize>()
    }

    pub fn shortest_arm(&self) -> Option<usize> {
        self.arms_a.iter().chain(&self.arms_b).copied().min()
    }

    /// Heads are vertices 0 and 1; arms of `A` then `B` follow in order.
    pub fn graph(&self) -> Graph {
        Graph::double_spider(&self.arms_a, &self.arms_b)
    }

    /// The same tree with heads swapped if that gives the canonical labelling
    /// (more arms on `A`; on ties the lexicographically larger arm list).
    pub fn canonical(self) -> Self {
        let key = |arms: &Vec<usize>| (arms.len(), arms.clone());
        if key(&self.arms_a) >= key(&self.arms_b) {
            self
        } else {
            DoubleSpider {
                arms_a: self.arms_b,
                arms_b: self.arms_a,
            }
        }
    }
}

impl FromStr for DoubleSpider {
    type Err = SpiderError;

    /// `5,5/6`: arms before the slash on `A`, after it on `B`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SpiderError::Parse(s.to_string());
        let (a, b) = s.split_once('/').unwrap_or((s, ""));
        DoubleSpider::new(parse_list(a).ok_or_else(bad)?, parse_list(b).ok_or_else(bad)?)
    }
}

impl fmt::Display for DoubleSpider {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |arms: &[usize]| {
            arms.iter()
                .map(|l| l.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "{}/{}", join(&self.arms_a), join(&self.arms_b))
    }
}

/// Whether `ds` contains an m-double spider whose leaves are pairwise at
/// distance at least `2m`.
///
/// Leaves of such a subgraph can be taken at the ends of whole arms (longer
/// arms only increase distances), and a head carrying no arm is itself a
/// leaf, treated as an arm of length 0. Choosing `k` arms at `A` and `m - k`
/// at `B`, the longest ones are best, and only three pairs need checking:
/// the two shortest chosen at each head and the shortest across heads.
pub fn has_hard_subspider(ds: &DoubleSpider, m: usize) -> Result<bool, SpiderError> {
    if m < 2 {
        return Err(SpiderError::Domain(format!("m must be at least 2 (got {m})")));
    }
    if ds.arm_count() < m {
        return Err(SpiderError::Domain(format!(
            "{} arms cannot contain an {m}-double spider",
            ds.arm_count()
        )));
    }
    let with_virtual = |arms: &[usize]| {
        if arms.is_empty() {
            vec![0]
        } else {
            arms.to_vec()
        }
    };
    let (a, b) = (with_virtual(&ds.arms_a), with_virtual(&ds.arms_b));
    let far = 2 * m;
    Ok((0..=m).any(|k| {
        if k > a.len() || m - k > b.len() {
            return false;
        }
        let (sa, sb) = (&a[..k], &b[..m - k]);
        let within = |s: &[usize]| s.len() < 2 || s[s.len() - 1] + s[s.len() - 2] >= far;
        let across = match (sa.last(), sb.last()) {
            (Some(&x), Some(&y)) => x + y + 1 >= far,
            _ => true,
        };
        within(sa) && within(sb) && across
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecisionBasis {
    /// Fewer arms than rounds and order at most `m^2 + n - 2`.
    FewArms,
    /// At least as many arms as rounds, small order, no hard subspider.
    NoHardSubspider,
    /// Contains an m-double spider with leaves pairwise `2m` apart.
    HardSubspider,
    ExactSearch,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpiderDecision {
    pub burnable: bool,
    pub basis: DecisionBasis,
    /// A replayable sequence for positive answers, when one was found in budget.
    pub witness: Option<BurningSequence>,
}

/// Decides m-burnability, using the structural guarantees where they apply
/// and the exact solver otherwise. `witness_budget` bounds the best-effort
/// witness search on guarantee-backed positives (`Some(0)` skips it).
pub fn decide_double_spider(
    ds: &DoubleSpider,
    m: usize,
    config: &SolverConfig,
    witness_budget: Option<u64>,
) -> Result<SpiderDecision, SpiderError> {
    if m < 2 {
        return Err(SpiderError::Domain(format!("m must be at least 2 (got {m})")));
    }
    let n = ds.arm_count();
    let g = ds.graph();
    let small = ds.order() + 2 <= m * m + n;
    let basis = if !small {
        DecisionBasis::ExactSearch
    } else if n < m {
        DecisionBasis::FewArms
    } else if has_hard_subspider(ds, m)? {
        DecisionBasis::HardSubspider
    } else if m >= 3 {
        DecisionBasis::NoHardSubspider
    } else {
        DecisionBasis::ExactSearch
    };
    match basis {
        DecisionBasis::ExactSearch => {
            let witness = is_m_burnable(&g, m, config)?;
            Ok(SpiderDecision {
                burnable: witness.is_some(),
                basis,
                witness,
            })
        }
        DecisionBasis::HardSubspider => Ok(SpiderDecision {
            burnable: false,
            basis,
            witness: None,
        }),
        _ => {
            let budget = SolverConfig {
                node_budget: witness_budget,
                ..*config
            };
            let witness = match witness_budget {
                Some(0) => None,
                _ => match is_m_burnable(&g, m, &budget) {
                    Ok(w) => w,
                    Err(SolveError::BudgetExceeded { .. }) => None,
                    Err(e) => return Err(e.into()),
                },
            };
            Ok(SpiderDecision {
                burnable: true,
                basis,
                witness,
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HeadDeadlineWitness {
    pub sequence: BurningSequence,
    /// `m` minus the round in which the later head burns.
    pub rounds_after_heads: usize,
    pub required: usize,
}

/// Rounds that must remain after both heads burn: `min(l, m - 2)` for two
/// arms, `min(l, m - 3)` for more, where `l` is the shortest arm.
pub fn required_rounds_after_heads(ds: &DoubleSpider, m: usize) -> usize {
    let l = ds.shortest_arm().unwrap_or(0);
    let slack = if ds.arm_count() <= 2 { 2 } else { 3 };
    l.min(m.saturating_sub(slack))
}

/// Searches for an m-round burning in which both heads burn early enough to
/// leave [`required_rounds_after_heads`] rounds, and replays it.
pub fn head_deadline_witness(
    ds: &DoubleSpider,
    m: usize,
    config: &SolverConfig,
) -> Result<HeadDeadlineWitness, SpiderError> {
    let n = ds.arm_count();
    if n < 2 || n >= m {
        return Err(SpiderError::Domain(format!(
            "head deadlines are guaranteed for 2 <= n < m (got n = {n}, m = {m})"
        )));
    }
    let required = required_rounds_after_heads(ds, m);
    let g = ds.graph();
    let mut deadlines = vec![m; g.vertex_count()];
    deadlines[0] = m - required;
    deadlines[1] = m - required;
    let sequence = match is_m_burnable_with_deadlines(&g, m, &deadlines, config) {
        Ok(Some(seq)) => seq,
        Ok(None) => return Err(SpiderError::NoWitness { required }),
        Err(SolveError::BudgetExceeded { .. }) => return Err(SpiderError::NoWitnessInBudget),
        Err(e) => return Err(e.into()),
    };
    let out = simulate(&g, &sequence).expect("solver witnesses replay");
    let last_head = out.burned_at_round[0]
        .max(out.burned_at_round[1])
        .expect("heads burn");
    assert!(out.fully_burned && out.rounds_elapsed.is_some_and(|r| r <= m));
    Ok(HeadDeadlineWitness {
        sequence,
        rounds_after_heads: m - last_head,
        required,
    })
}

/// Every canonical double spider with `n` arms and the given order.
pub fn double_spiders_with(n: usize, order: usize) -> Vec<DoubleSpider> {
    let Some(arm_total) = order.checked_sub(2) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for on_a in (n.div_ceil(2)..=n).rev() {
        let on_b = n - on_a;
        for a_total in on_a..=arm_total.saturating_sub(on_b) {
            let b_total = arm_total - a_total;
            let b_parts = if on_b == 0 {
                if b_total > 0 {
                    continue;
                }
                vec![Vec::new()]
            } else {
                nonincreasing_tuples(on_b, b_total, b_total, 1)
            };
            for a in nonincreasing_tuples(on_a, a_total, a_total, 1) {
                for b in &b_parts {
                    let ds = DoubleSpider::new(a.clone(), b.clone()).expect("positive arms");
                    if ds.clone().canonical() == ds {
                        out.push(ds);
                    }
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Every canonical double spider of the given order (any arm count).
pub fn double_spiders_of_order(order: usize) -> Vec<DoubleSpider> {
    (0..=order.saturating_sub(2))
        .flat_map(|n| double_spiders_with(n, order))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum SweepMode {
    Exhaustive,
    Sampled { samples: usize, seed: u64 },
}

fn random_double_spider(rng: &mut ChaCha8Rng, n: usize, arm_total: usize) -> DoubleSpider {
    // Uniform composition of `arm_total` into `n` positive parts via cut points.
    let mut cuts: Vec<usize> = rand::seq::index::sample(rng, arm_total - 1, n - 1)
        .into_iter()
        .map(|c| c + 1)
        .collect();
    cuts.sort_unstable();
    cuts.insert(0, 0);
    cuts.push(arm_total);
    let parts: Vec<usize> = cuts.windows(2).map(|w| w[1] - w[0]).collect();
    let on_a = rng.gen_range(0..=n);
    DoubleSpider::new(parts[..on_a].to_vec(), parts[on_a..].to_vec())
        .expect("positive arms")
        .canonical()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpiderViolation {
    pub spider: DoubleSpider,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpiderReport {
    pub m: usize,
    pub n: usize,
    pub order: usize,
    pub mode: SweepMode,
    pub instances: usize,
    /// Main sweep: head-deadline witnesses found and replayed.
    /// Obstruction sweep: instances found not m-burnable.
    pub confirmed: usize,
    pub violations: Vec<SpiderViolation>,
}

/// Checks every (or a seeded sample of) n-arm double spider of order
/// `m^2 + n - 2`. For `m > n >= 2` each must be m-burnable with a replayed
/// head-deadline witness; for `n >= m >= 3` each non-m-burnable one must
/// contain a hard subspider, and each with one must be non-m-burnable.
pub fn verify_double_spiders(
    m: usize,
    n: usize,
    mode: SweepMode,
    config: &SolverConfig,
) -> Result<SpiderReport, SpiderError> {
    let main = m > n && n >= 2;
    if !main && !(n >= m && m >= 3) {
        return Err(SpiderError::Domain(format!(
            "sweeps need m > n >= 2 or n >= m >= 3 (got m = {m}, n = {n})"
        )));
    }
    let order = m * m + n - 2;
    let instances = match mode {
        SweepMode::Exhaustive => double_spiders_with(n, order),
        SweepMode::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..samples)
                .map(|_| random_double_spider(&mut rng, n, order - 2))
                .collect()
        }
    };
    let outcomes: Vec<(bool, Option<SpiderViolation>)> = instances
        .par_iter()
        .map(|ds| {
            let violation = |reason: String| {
                Some(SpiderViolation {
                    spider: ds.clone(),
                    reason,
                })
            };
            if main {
                if !decide_double_spider(ds, m, config, Some(0))?.burnable {
                    return Ok((false, violation("decided not m-burnable".into())));
                }
                match head_deadline_witness(ds, m, config) {
                    Ok(w) if w.rounds_after_heads >= w.required => Ok((true, None)),
                    Ok(w) => Ok((
                        false,
                        violation(format!(
                            "{} rounds after heads, {} required",
                            w.rounds_after_heads, w.required
                        )),
                    )),
                    Err(SpiderError::NoWitness { required }) => Ok((
                        false,
                        violation(format!("no sequence leaves {required} rounds after heads")),
                    )),
                    Err(e) => Err(e),
                }
            } else {
                let burnable = is_m_burnable(&ds.graph(), m, config)?.is_some();
                let hard = has_hard_subspider(ds, m)?;
                let bad = match (burnable, hard) {
                    (false, false) => violation("not m-burnable without a hard subspider".into()),
                    (true, true) => violation("m-burnable despite a hard subspider".into()),
                    _ => None,
                };
                Ok((!burnable, bad))
            }
        })
        .collect::<Result<_, SpiderError>>()?;
    Ok(SpiderReport {
        m,
        n,
        order,
        mode,
        instances: instances.len(),
        confirmed: outcomes.iter().filter(|o| o.0).count(),
        violations: outcomes.into_iter().filter_map(|o| o.1).collect(),
    })
}
