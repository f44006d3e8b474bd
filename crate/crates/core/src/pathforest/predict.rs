use serde::Serialize;

use super::{exceptional_clause, t_value, ExceptionClause, PathForest};

/// Known sufficient conditions for m-burnability of a path forest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(into = "&'static str")]
pub enum Guarantee {
    /// One path of order at most `m^2`.
    SinglePath,
    /// `|T| <= 3n - 2` and a single-vertex path: n-burnable.
    Order3nMinus2,
    /// `|T| <= 4n - 4`, `l_n = 1`, `l_{n-1} >= 2`: n-burnable.
    Order4nMinus4,
    /// `|T| <= 5n - 6`, `l_n = 1`, `l_{n-1} = 3`: n-burnable.
    Order5nMinus6,
    /// `|T| <= 5n - 1`, `l_n >= 3`: (n+1)-burnable.
    Order5nMinus1,
    /// `m >= n >= 2`, `|T| <= m^2 - (n-1)^2 + 1`, except `(m^2-n^2+2, 2, ..., 2)` at equality.
    QuadraticBound,
    /// Three paths, `m >= 3`, `|T| <= m^2 - 1 - t_T`, outside the exceptional family.
    ThreePaths,
    /// `m >= n >= 3`, `|T| <= m^2 - (n-1)(n-2) + 1 - t_T`, outside the exceptional family.
    NPaths,
}

impl Guarantee {
    pub fn label(self) -> &'static str {
        match self {
            Guarantee::SinglePath => "single-path",
            Guarantee::Order3nMinus2 => "order-3n-2",
            Guarantee::Order4nMinus4 => "order-4n-4",
            Guarantee::Order5nMinus6 => "order-5n-6",
            Guarantee::Order5nMinus1 => "order-5n-1",
            Guarantee::QuadraticBound => "quadratic-bound",
            Guarantee::ThreePaths => "three-paths",
            Guarantee::NPaths => "n-paths",
        }
    }
}

impl From<Guarantee> for &'static str {
    fn from(g: Guarantee) -> Self {
        g.label()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Prediction {
    BurnableBy(Guarantee),
    NotCovered,
}

fn outside_family(forest: &PathForest, m: usize) -> bool {
    matches!(exceptional_clause(forest, m), Ok(ExceptionClause::None))
}

/// First known guarantee that `forest` is m-burnable, tried in a fixed order.
pub fn theorem_predict(forest: &PathForest, m: usize) -> Prediction {
    let n = forest.path_count();
    let order = forest.order();
    let l = forest.lengths();
    let t = t_value(forest).0;
    let mut checks: Vec<(Guarantee, bool)> = Vec::new();
    if n == 1 {
        checks.push((Guarantee::SinglePath, order <= m * m));
    } else {
        let (shortest, second) = (l[n - 1], l[n - 2]);
        checks.push((
            Guarantee::Order3nMinus2,
            m >= n && order + 2 <= 3 * n && shortest == 1,
        ));
        checks.push((
            Guarantee::Order4nMinus4,
            m >= n && order + 4 <= 4 * n && shortest == 1 && second >= 2,
        ));
        checks.push((
            Guarantee::Order5nMinus6,
            m >= n && order + 6 <= 5 * n && shortest == 1 && second == 3,
        ));
        checks.push((
            Guarantee::Order5nMinus1,
            m > n && order < 5 * n && shortest >= 3,
        ));
        let quadratic = m >= n && {
            let bound = m * m + 1 - (n - 1) * (n - 1);
            let excluded = order == bound
                && l[0] + n * n == m * m + 2
                && l[1..].iter().all(|&x| x == 2);
            order <= bound && !excluded
        };
        checks.push((Guarantee::QuadraticBound, quadratic));
        checks.push((
            Guarantee::ThreePaths,
            n == 3 && m >= 3 && order + 1 + t <= m * m && outside_family(forest, m),
        ));
        checks.push((
            Guarantee::NPaths,
            n >= 3
                && m >= n
                && order + (n - 1) * (n - 2) + t <= m * m + 1
                && outside_family(forest, m),
        ));
    }
    checks
        .into_iter()
        .find(|&(_, holds)| holds)
        .map_or(Prediction::NotCovered, |(g, _)| Prediction::BurnableBy(g))
}
