//! Path forests: exact m-burnability via assigning distinct odd coverage
//! lengths `1, 3, ..., 2m - 1` to paths, the exceptional families at the
//! quadratic order bound, and exhaustive verifiers.
//!
//! Burning round `t` of `m` covers a window of `2(m - t) + 1` consecutive
//! vertices of one path, so a forest is m-burnable iff its paths can be given
//! pairwise disjoint sets of the first `m` odd numbers whose sums reach the
//! path orders.

mod decide;
mod predict;
mod verify;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use decide::{decide, decide_with_budget, RadiiAssignment, DEFAULT_NODE_BUDGET};
pub use predict::{theorem_predict, Guarantee, Prediction};
pub use verify::{
    nonincreasing_tuples, verify_linear_bounds, verify_path_forest_bound, BoundReport,
    LinearClauseReport, Violation,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PathForestError {
    #[error("a path forest needs at least one path")]
    Empty,
    #[error("path orders must be positive")]
    ZeroLength,
    #[error("bad path forest `{0}`")]
    Parse(String),
    #[error("round count must be at least 1")]
    ZeroRounds,
    #[error("{0}")]
    Domain(String),
    #[error("search budget exhausted after {expanded} node expansions")]
    BudgetExceeded { expanded: u64 },
}

/// Path orders `l_1 >= l_2 >= ... >= l_n`, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct PathForest {
    lengths: Vec<usize>,
}

impl PathForest {
    pub fn new(mut lengths: Vec<usize>) -> Result<Self, PathForestError> {
        if lengths.is_empty() {
            return Err(PathForestError::Empty);
        }
        if lengths.contains(&0) {
            return Err(PathForestError::ZeroLength);
        }
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        Ok(PathForest { lengths })
    }

    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }

    pub fn path_count(&self) -> usize {
        self.lengths.len()
    }

    pub fn order(&self) -> usize {
        self.lengths.iter().sum()
    }

    pub fn longest(&self) -> usize {
        self.lengths[0]
    }

    pub fn shortest(&self) -> usize {
        *self.lengths.last().expect("nonempty")
    }

    pub fn graph(&self) -> crate::Graph {
        crate::Graph::path_forest(&self.lengths)
    }
}

impl TryFrom<Vec<usize>> for PathForest {
    type Error = PathForestError;

    fn try_from(lengths: Vec<usize>) -> Result<Self, Self::Error> {
        PathForest::new(lengths)
    }
}

impl From<PathForest> for Vec<usize> {
    fn from(forest: PathForest) -> Self {
        forest.lengths
    }
}

impl FromStr for PathForest {
    type Err = PathForestError;

    /// Comma list such as `17,15,4`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lengths =
            crate::graph::parse_list(s).ok_or_else(|| PathForestError::Parse(s.to_string()))?;
        PathForest::new(lengths)
    }
}

impl fmt::Display for PathForest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.lengths.iter().map(|l| l.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `ceil(sqrt(l))`, the burning number of a path of order `l`.
pub fn path_burning_number(l: usize) -> usize {
    let mut r = l.isqrt();
    if r * r < l {
        r += 1;
    }
    r
}

/// Number of order-2 paths when the shortest path has order 2, else 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TValue(pub usize);

pub fn t_value(forest: &PathForest) -> TValue {
    if forest.shortest() == 2 {
        TValue(forest.lengths.iter().filter(|&&l| l == 2).count())
    } else {
        TValue(0)
    }
}

/// `m^2 - (n-1)(n-2) + 1 - t_T`, or `None` when it is negative.
pub fn n_paths_bound(forest: &PathForest, m: usize) -> Option<usize> {
    let n = forest.path_count();
    (m * m + 1).checked_sub((n - 1) * n.saturating_sub(2) + t_value(forest).0)
}

/// Which exceptional family, if any, a forest belongs to at `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ExceptionClause {
    None,
    /// `l_1 = m^2 - (n-1)^2 + 1`, all other paths single vertices.
    I,
    /// `l_1 = m^2 - n^2 + 2`, all other paths of order 2 or 3 (`m > n`).
    II,
    /// `l_1 = m^2 - (n-1)(n+3) + 1`, all other paths of order 5 (`m > n`).
    III,
}

fn clause_check(m: usize, n: usize) -> Result<(), PathForestError> {
    if n < 2 || m < n {
        return Err(PathForestError::Domain(format!(
            "exceptional families need m >= n >= 2 (got m = {m}, n = {n})"
        )));
    }
    Ok(())
}

fn clause_heads(m: usize, n: usize) -> [(ExceptionClause, usize); 3] {
    let (m, n) = (m as i64, n as i64);
    let head = |v: i64| v.max(0) as usize;
    [
        (ExceptionClause::I, head(m * m - (n - 1) * (n - 1) + 1)),
        (ExceptionClause::II, head(m * m - n * n + 2)),
        (ExceptionClause::III, head(m * m - (n - 1) * (n + 3) + 1)),
    ]
}

pub fn exceptional_clause(
    forest: &PathForest,
    m: usize,
) -> Result<ExceptionClause, PathForestError> {
    let n = forest.path_count();
    clause_check(m, n)?;
    let (first, rest) = forest.lengths.split_first().expect("nonempty");
    for (clause, head) in clause_heads(m, n) {
        let tail_ok = match clause {
            ExceptionClause::I => rest.iter().all(|&l| l == 1),
            ExceptionClause::II => m > n && rest.iter().all(|&l| (2..=3).contains(&l)),
            ExceptionClause::III => m > n && rest.iter().all(|&l| l == 5),
            ExceptionClause::None => unreachable!(),
        };
        if *first == head && tail_ok {
            return Ok(clause);
        }
    }
    Ok(ExceptionClause::None)
}

/// Every member of the exceptional family for `n` paths and `m` rounds, sorted.
pub fn exceptional_family(n: usize, m: usize) -> Result<Vec<PathForest>, PathForestError> {
    clause_check(m, n)?;
    let [(_, h1), (_, h2), (_, h3)] = clause_heads(m, n);
    let mut out = vec![PathForest::new([vec![h1], vec![1; n - 1]].concat())?];
    if m > n {
        for threes in 0..n {
            let tail = [vec![3; threes], vec![2; n - 1 - threes]].concat();
            out.push(PathForest::new([vec![h2], tail].concat())?);
        }
        out.push(PathForest::new([vec![h3], vec![5; n - 1]].concat())?);
    }
    out.sort();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pf(l: &[usize]) -> PathForest {
        PathForest::new(l.to_vec()).unwrap()
    }

    #[test]
    fn construction_sorts_and_validates() {
        let t = pf(&[2, 9, 2]);
        assert_eq!(t.lengths(), &[9, 2, 2]);
        assert_eq!(t.order(), 13);
        assert_eq!(PathForest::new(vec![]), Err(PathForestError::Empty));
        assert_eq!(PathForest::new(vec![3, 0]), Err(PathForestError::ZeroLength));
        assert_eq!("17, 15,4".parse::<PathForest>().unwrap(), pf(&[17, 15, 4]));
        assert!("17,x".parse::<PathForest>().is_err());
        assert_eq!(t.to_string(), "(9,2,2)");
    }

    #[test]
    fn ceil_sqrt() {
        assert_eq!(path_burning_number(1), 1);
        assert_eq!(path_burning_number(16), 4);
        assert_eq!(path_burning_number(17), 5);
        for l in 1..5000usize {
            let b = path_burning_number(l);
            assert!((b - 1) * (b - 1) < l && l <= b * b);
        }
    }

    #[test]
    fn t_values() {
        assert_eq!(t_value(&pf(&[9, 2, 2])), TValue(2));
        assert_eq!(t_value(&pf(&[9, 3, 2])), TValue(1));
        assert_eq!(t_value(&pf(&[5, 3, 3])), TValue(0));
        assert_eq!(t_value(&pf(&[5, 2, 1])), TValue(0));
    }

    #[test]
    fn clauses() {
        assert_eq!(exceptional_clause(&pf(&[13, 1, 1]), 4), Ok(ExceptionClause::I));
        assert_eq!(exceptional_clause(&pf(&[9, 2, 2]), 4), Ok(ExceptionClause::II));
        assert_eq!(exceptional_clause(&pf(&[9, 3, 2]), 4), Ok(ExceptionClause::II));
        assert_eq!(exceptional_clause(&pf(&[14, 5, 5]), 5), Ok(ExceptionClause::III));
        assert_eq!(exceptional_clause(&pf(&[12, 2, 2]), 4), Ok(ExceptionClause::None));
        // With m = n only the first family applies.
        assert_eq!(exceptional_clause(&pf(&[6, 1, 1]), 3), Ok(ExceptionClause::I));
        assert_eq!(exceptional_clause(&pf(&[2, 2, 2]), 3), Ok(ExceptionClause::None));
        assert!(exceptional_clause(&pf(&[5, 1, 1, 1]), 3).is_err());
    }

    #[test]
    fn family_members_sit_exactly_at_the_bound() {
        for n in 2..=5 {
            for m in n.max(3)..=12 {
                let family = exceptional_family(n, m).unwrap();
                assert_eq!(family.len(), if m > n { n + 2 } else { 1 });
                for t in family {
                    assert_ne!(exceptional_clause(&t, m).unwrap(), ExceptionClause::None);
                    assert_eq!(Some(t.order()), n_paths_bound(&t, m), "{t} m={m}");
                }
            }
        }
    }
}
