//! Explicit odd-number allocations for forests with long paths plus one
//! residual path absorbing everything left over.

use serde::Serialize;

use super::ChainError;
use crate::pathforest::{decide, PathForest, RadiiAssignment};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaConstruction {
    pub m: usize,
    /// The given paths plus the residual path `m^2 - sum` (omitted when 0).
    pub forest: PathForest,
    /// Aligned with `forest`'s sorted order.
    pub assignment: RadiiAssignment,
    /// The residual path's order.
    pub residual: usize,
}

fn assemble(m: usize, mut parts: Vec<(usize, Vec<usize>)>) -> LemmaConstruction {
    let used: usize = parts.iter().map(|p| p.0).sum();
    let residual = m * m - used;
    let mut taken: Vec<usize> = parts.iter().flat_map(|p| p.1.iter().copied()).collect();
    taken.sort_unstable();
    let rest: Vec<usize> = (1..=m)
        .rev()
        .map(|k| 2 * k - 1)
        .filter(|o| taken.binary_search(o).is_err())
        .collect();
    debug_assert_eq!(rest.iter().sum::<usize>(), residual);
    if residual > 0 {
        parts.push((residual, rest));
    }
    parts.sort_by(|a, b| b.0.cmp(&a.0));
    for p in &mut parts {
        p.1.sort_unstable_by(|a, b| b.cmp(a));
    }
    let forest = PathForest::new(parts.iter().map(|p| p.0).collect()).expect("positive parts");
    LemmaConstruction {
        m,
        forest,
        assignment: RadiiAssignment {
            m,
            sets: parts.into_iter().map(|p| p.1).collect(),
        },
        residual,
    }
}

/// `(m, [(l_i, {2 t_i - 1, 2(n + i) - 1})])` for even `l_i >= 8n`.
fn even_pairs(evens: &[usize]) -> Result<(usize, Vec<(usize, Vec<usize>)>), ChainError> {
    let n = evens.len();
    if n == 0 {
        return Err(ChainError::PreconditionViolated("no paths given".into()));
    }
    if let Some(&bad) = evens.iter().find(|&&l| l % 2 == 1 || l < 8 * n) {
        return Err(ChainError::PreconditionViolated(format!(
            "{bad} is not an even number at least {}",
            8 * n
        )));
    }
    let mut ls = evens.to_vec();
    ls.sort_unstable_by(|a, b| b.cmp(a));
    let t: Vec<usize> = ls
        .iter()
        .enumerate()
        .map(|(idx, &l)| l / 2 + 1 - n - (idx + 1))
        .collect();
    debug_assert!(t.windows(2).all(|w| w[0] > w[1]) && t[n - 1] > 2 * n);
    let parts = ls
        .iter()
        .zip(&t)
        .enumerate()
        .map(|(idx, (&l, &ti))| (l, vec![2 * ti - 1, 2 * (n + idx + 1) - 1]))
        .collect();
    Ok((t[0], parts))
}

/// Even `l_1 >= ... >= l_n`, each at least `8n`: write
/// `l_i = (2 t_i - 1) + (2(n + i) - 1)`, take `m = t_1`, give path `i` the
/// pair `{2 t_i - 1, 2(n + i) - 1}`, and the residual path every other odd
/// number below `2m`. The `n` smallest odd numbers all go to the residual.
pub fn construct_even_pairs(evens: &[usize]) -> Result<LemmaConstruction, ChainError> {
    let (m, parts) = even_pairs(evens)?;
    Ok(assemble(m, parts))
}

/// Paths each at least `10n - 1`: the `i`-th odd-length path sets aside
/// `2i - 1`, the even-pair construction handles the shortened paths, and
/// the set-aside odd numbers (all among the `n` smallest, which the pairs
/// never use) are moved back. The result is re-checked with [`decide`].
pub fn construct_long_paths(ls: &[usize]) -> Result<LemmaConstruction, ChainError> {
    let n = ls.len();
    if n == 0 {
        return Err(ChainError::PreconditionViolated("no paths given".into()));
    }
    if let Some(&bad) = ls.iter().find(|&&l| l + 1 < 10 * n) {
        return Err(ChainError::PreconditionViolated(format!(
            "{bad} is below {}",
            10 * n - 1
        )));
    }
    let mut reserved = 0;
    let shortened: Vec<usize> = ls
        .iter()
        .map(|&l| {
            if l % 2 == 1 {
                reserved += 1;
                l - (2 * reserved - 1)
            } else {
                l
            }
        })
        .collect();
    let (m, mut pairs) = even_pairs(&shortened)?;
    let mut restored = Vec::with_capacity(n);
    for (&orig, &short) in ls.iter().zip(&shortened) {
        let pos = pairs
            .iter()
            .position(|p| p.0 == short)
            .expect("every shortened path has a pair");
        let (_, mut set) = pairs.swap_remove(pos);
        if orig != short {
            set.push(orig - short);
        }
        restored.push((orig, set));
    }
    let out = assemble(m, restored);
    out.assignment
        .validate(&out.forest)
        .map_err(ChainError::PreconditionViolated)?;
    if decide(&out.forest, m)?.is_none() {
        return Err(ChainError::PreconditionViolated(format!(
            "construction for {ls:?} not confirmed by decide at m = {m}"
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn even_pair_examples() {
        let c = construct_even_pairs(&[16, 16]).unwrap();
        assert_eq!(c.m, 6);
        assert_eq!(c.forest.lengths(), &[16, 16, 4]);
        let mut sets = c.assignment.sets.clone();
        sets[..2].sort();
        assert_eq!(sets, vec![vec![9, 7], vec![11, 5], vec![3, 1]]);
        c.assignment.validate(&c.forest).unwrap();

        let c = construct_even_pairs(&[8]).unwrap();
        assert_eq!(c.m, 3);
        assert_eq!(c.assignment.sets, vec![vec![5, 3], vec![1]]);
        assert!(matches!(
            construct_even_pairs(&[16, 12]),
            Err(ChainError::PreconditionViolated(_))
        ));
        assert!(construct_even_pairs(&[17]).is_err());
    }

    #[test]
    fn long_path_examples() {
        for ls in [vec![19], vec![19, 20], vec![29, 31, 33], vec![40, 41, 39, 39]] {
            let c = construct_long_paths(&ls).unwrap();
            c.assignment.validate(&c.forest).unwrap();
            let mut given: Vec<usize> = ls.clone();
            if c.residual > 0 {
                given.push(c.residual);
            }
            assert_eq!(c.forest, PathForest::new(given).unwrap());
            assert_eq!(c.forest.order(), c.m * c.m);
        }
        assert!(matches!(
            construct_long_paths(&[19, 12]),
            Err(ChainError::PreconditionViolated(_))
        ));
    }
}
