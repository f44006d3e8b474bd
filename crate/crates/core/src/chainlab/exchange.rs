//! Constructive exchanges between increasing sequences of odd integers:
//! prefixes of the sequences are repartitioned so that each part's sum is
//! its own prefix sum shifted by a prescribed offset.
//!
//! The sequences are infinite in principle; here each is a finite window of
//! terms and every operation takes a guard (the largest index it may read).
//! Running out of terms is reported, never papered over.

use std::collections::BTreeSet;

use serde::Serialize;

use super::ChainError;
use crate::pathforest::PathForest;

/// A finite window of a strictly increasing sequence of odd integers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OddSequence {
    terms: Vec<i64>,
}

impl OddSequence {
    pub fn new(terms: Vec<i64>) -> Result<Self, ChainError> {
        if let Some(t) = terms.iter().find(|t| *t % 2 == 0) {
            return Err(ChainError::PreconditionViolated(format!("{t} is even")));
        }
        if let Some(w) = terms.windows(2).find(|w| w[0] >= w[1]) {
            return Err(ChainError::PreconditionViolated(format!(
                "{} >= {}: not strictly increasing",
                w[0], w[1]
            )));
        }
        Ok(OddSequence { terms })
    }

    /// Terms `f(1), ..., f(len)`, checked.
    pub fn from_fn(len: usize, f: impl Fn(usize) -> i64) -> Result<Self, ChainError> {
        Self::new((1..=len).map(f).collect())
    }

    /// 1-based, as in `a_i`.
    pub fn term(&self, i: usize) -> Option<i64> {
        i.checked_sub(1).and_then(|k| self.terms.get(k).copied())
    }

    pub fn terms(&self) -> &[i64] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn window(&self, guard: usize) -> &[i64] {
        &self.terms[..guard.min(self.terms.len())]
    }
}

/// Parts `C_j` with `sum(C_j) = sum of the first N_j terms of sequence j + x_j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExchangePartition {
    pub prefix_lengths: Vec<usize>,
    /// Each part sorted ascending.
    pub parts: Vec<Vec<i64>>,
    pub offsets: Vec<i64>,
}

impl ExchangePartition {
    /// Checks every invariant against the sequences the partition was built from.
    pub fn validate(&self, seqs: &[OddSequence]) -> Result<(), String> {
        let n = seqs.len();
        if self.prefix_lengths.len() != n || self.parts.len() != n || self.offsets.len() != n {
            return Err(format!("expected {n} prefixes, parts and offsets"));
        }
        if self.offsets.iter().sum::<i64>() != 0 {
            return Err("offsets do not sum to 0".into());
        }
        let mut prefix_union = BTreeSet::new();
        for (j, (s, &len)) in seqs.iter().zip(&self.prefix_lengths).enumerate() {
            if len > s.len() {
                return Err(format!("prefix {len} of sequence {j} beyond its {} terms", s.len()));
            }
            for &t in &s.terms[..len] {
                if !prefix_union.insert(t) {
                    return Err(format!("{t} appears in two prefixes"));
                }
            }
        }
        let mut part_union = BTreeSet::new();
        for part in &self.parts {
            for &t in part {
                if !part_union.insert(t) {
                    return Err(format!("{t} appears twice among the parts"));
                }
            }
        }
        if part_union != prefix_union {
            return Err("parts do not cover exactly the used prefixes".into());
        }
        for j in 0..n {
            let prefix: i64 = seqs[j].terms[..self.prefix_lengths[j]].iter().sum();
            let got: i64 = self.parts[j].iter().sum();
            if got != prefix + self.offsets[j] {
                return Err(format!(
                    "part {j} sums to {got}, expected {prefix} + {}",
                    self.offsets[j]
                ));
            }
        }
        Ok(())
    }

    /// When the used prefixes are exactly the odd numbers `s, s+2, ..., 2M-1`
    /// with `s >= 1`: the part sums plus a path of order `((s-1)/2)^2`
    /// (the odd numbers below `s`) form a forest of order `M^2` which the
    /// partition shows to be M-burnable. Zero parts are dropped.
    pub fn burnable_forest(&self, seqs: &[OddSequence]) -> Option<(PathForest, usize)> {
        let mut used: Vec<i64> = seqs
            .iter()
            .zip(&self.prefix_lengths)
            .flat_map(|(s, &len)| s.terms[..len.min(s.len())].iter().copied())
            .collect();
        used.sort_unstable();
        let (&lo, &hi) = (used.first()?, used.last()?);
        if lo < 1 || used.windows(2).any(|w| w[1] != w[0] + 2) {
            return None;
        }
        let m = ((hi + 1) / 2) as usize;
        let below = ((lo - 1) / 2) as usize;
        let mut lengths: Vec<usize> = self
            .parts
            .iter()
            .map(|p| p.iter().sum::<i64>() as usize)
            .filter(|&l| l > 0)
            .collect();
        if below > 0 {
            lengths.push(below * below);
        }
        PathForest::new(lengths).ok().map(|f| (f, m))
    }
}

fn exhausted(guard: usize, what: impl Into<String>) -> ChainError {
    ChainError::GuardExhausted {
        guard,
        what: what.into(),
    }
}

fn pattern_hits(a: &[i64], b: &[i64]) -> usize {
    a.iter().filter(|&&t| b.binary_search(&(t + 2)).is_ok()).count()
}

fn check_disjoint(seqs: &[&[i64]]) -> Result<(), ChainError> {
    let mut seen = BTreeSet::new();
    for s in seqs {
        for &t in *s {
            if !seen.insert(t) {
                return Err(ChainError::PreconditionViolated(format!(
                    "{t} is a common term"
                )));
            }
        }
    }
    Ok(())
}

/// `(N_a, N_b, C, D)` with `sum C = sum a[..N_a] + x`, `sum D = sum b[..N_b] - x`,
/// following the pattern `a_i + 2 in b`.
fn two_directed(
    a: &[i64],
    b: &[i64],
    x: i64,
    guard: usize,
) -> Result<(usize, usize, Vec<i64>, Vec<i64>), ChainError> {
    if x == 0 {
        return Ok((0, 0, Vec::new(), Vec::new()));
    }
    if x > 0 && x % 2 == 0 {
        let k = (x / 2) as usize;
        let chosen: Vec<usize> = (0..a.len())
            .filter(|&i| b.binary_search(&(a[i] + 2)).is_ok())
            .take(k)
            .collect();
        if chosen.len() < k {
            return Err(exhausted(
                guard,
                format!("need {k} terms a_i with a_i + 2 in b, found {}", chosen.len()),
            ));
        }
        let last = chosen[k - 1];
        let n_a = last + 1;
        let n_b = b.binary_search(&(a[last] + 2)).expect("pattern term") + 1;
        let swapped: BTreeSet<i64> = chosen.iter().map(|&i| a[i]).collect();
        let mut c: Vec<i64> = a[..n_a]
            .iter()
            .copied()
            .filter(|t| !swapped.contains(t))
            .chain(swapped.iter().map(|t| t + 2))
            .collect();
        let mut d: Vec<i64> = b[..n_b]
            .iter()
            .copied()
            .filter(|t| !swapped.contains(&(t - 2)))
            .chain(swapped.iter().copied())
            .collect();
        c.sort_unstable();
        d.sort_unstable();
        return Ok((n_a, n_b, c, d));
    }
    // Odd or negative: hand a prefix of a over to D so the rest is even and nonnegative.
    let mut shifted = x;
    for l in 1..=a.len() {
        shifted += a[l - 1];
        if shifted >= 0 && shifted % 2 == 0 {
            let (n_a, n_b, c, mut d) = two_directed(&a[l..], b, shifted, guard)?;
            d.extend_from_slice(&a[..l]);
            d.sort_unstable();
            return Ok((l + n_a, n_b, c, d));
        }
    }
    Err(exhausted(
        guard,
        format!("no prefix of a makes {x} + sum even and nonnegative"),
    ))
}

/// Runs the construction in both directions (`a_i + 2 in b` with offset `x`,
/// `b_i + 2 in a` with `-x`) and keeps the one using fewer terms.
fn two_slices(
    a: &[i64],
    b: &[i64],
    x: i64,
    guard: usize,
) -> Result<(usize, usize, Vec<i64>, Vec<i64>), ChainError> {
    let forward = two_directed(a, b, x, guard);
    let backward = two_directed(b, a, -x, guard).map(|(n_b, n_a, d, c)| (n_a, n_b, c, d));
    match (forward, backward) {
        (Ok(f), Ok(r)) => Ok(if r.0 + r.1 < f.0 + f.1 { r } else { f }),
        (Ok(f), Err(_)) => Ok(f),
        (Err(_), Ok(r)) => Ok(r),
        (Err(e), Err(_)) => Err(e),
    }
}

/// Two sequences and an offset `x`: prefixes of lengths `N_1`, `N_2` split
/// into `C` (offset `x`) and `D` (offset `-x`). Only the first `guard`
/// terms of each sequence are read.
pub fn exchange_partition_two(
    a: &OddSequence,
    b: &OddSequence,
    x: i64,
    guard: usize,
) -> Result<ExchangePartition, ChainError> {
    let (wa, wb) = (a.window(guard), b.window(guard));
    check_disjoint(&[wa, wb])?;
    let (n_a, n_b, c, d) = two_slices(wa, wb, x, guard)?;
    Ok(ExchangePartition {
        prefix_lengths: vec![n_a, n_b],
        parts: vec![c, d],
        offsets: vec![x, -x],
    })
}

/// `n` sequences jointly covering consecutive odd numbers and offsets summing
/// to 0. The last sequence is merged into its best partner (most pattern
/// hits), the problem is solved for one fewer sequence, and the merged
/// prefix is split again by the two-sequence exchange. Finally every prefix
/// is extended so the used terms are consecutive odd numbers.
pub fn exchange_partition_multi(
    seqs: &[OddSequence],
    xs: &[i64],
    guard: usize,
) -> Result<ExchangePartition, ChainError> {
    if seqs.is_empty() || seqs.len() != xs.len() {
        return Err(ChainError::PreconditionViolated(
            "need one offset per sequence, at least one sequence".into(),
        ));
    }
    if xs.iter().sum::<i64>() != 0 {
        return Err(ChainError::PreconditionViolated("offsets must sum to 0".into()));
    }
    let windows: Vec<&[i64]> = seqs.iter().map(|s| s.window(guard)).collect();
    check_disjoint(&windows)?;
    if windows.iter().any(|w| w.is_empty()) {
        return Err(exhausted(guard, "a sequence has no terms"));
    }
    // Everything up to `cover` is present, so extended prefixes are exact.
    let lo = windows.iter().map(|w| w[0]).min().expect("nonempty");
    let cover = windows.iter().map(|w| *w.last().unwrap()).min().expect("nonempty");
    let mut all: Vec<i64> = windows.iter().flat_map(|w| w.iter().copied()).collect();
    all.sort_unstable();
    let expected = all.iter().take_while(|&&t| t <= cover).count() as i64;
    if expected != (cover - lo) / 2 + 1 {
        return Err(ChainError::PreconditionViolated(format!(
            "sequences do not cover the odd numbers {lo}..={cover}"
        )));
    }

    let owned: Vec<Vec<i64>> = windows.iter().map(|w| w.to_vec()).collect();
    let (prefix_lengths, mut parts) = multi(&owned, xs, guard)?;

    let top = owned
        .iter()
        .zip(&prefix_lengths)
        .filter(|(_, &len)| len > 0)
        .map(|(w, &len)| w[len - 1])
        .max();
    let mut lengths = prefix_lengths;
    if let Some(top) = top {
        if top > cover {
            return Err(exhausted(
                guard,
                format!("used terms reach {top}, past the covered range ending at {cover}"),
            ));
        }
        for (j, w) in owned.iter().enumerate() {
            let upto = w.partition_point(|&t| t <= top);
            parts[j].extend_from_slice(&w[lengths[j]..upto]);
            parts[j].sort_unstable();
            lengths[j] = upto;
        }
    }
    Ok(ExchangePartition {
        prefix_lengths: lengths,
        parts,
        offsets: xs.to_vec(),
    })
}

fn multi(
    seqs: &[Vec<i64>],
    xs: &[i64],
    guard: usize,
) -> Result<(Vec<usize>, Vec<Vec<i64>>), ChainError> {
    let n = seqs.len();
    if xs.iter().all(|&x| x == 0) {
        return Ok((vec![0; n], vec![Vec::new(); n]));
    }
    if n == 2 {
        let (n_a, n_b, c, d) = two_slices(&seqs[0], &seqs[1], xs[0], guard)?;
        return Ok((vec![n_a, n_b], vec![c, d]));
    }
    let last = &seqs[n - 1];
    let partner = (0..n - 1)
        .max_by_key(|&j| {
            let hits = pattern_hits(&seqs[j], last) + pattern_hits(last, &seqs[j]);
            (hits, std::cmp::Reverse(j))
        })
        .expect("n >= 3");
    let end = (*seqs[partner].last().unwrap()).min(*last.last().unwrap());
    let mut merged: Vec<i64> = seqs[partner]
        .iter()
        .chain(last)
        .copied()
        .filter(|&t| t <= end)
        .collect();
    merged.sort_unstable();

    let mut sub_seqs: Vec<Vec<i64>> = Vec::with_capacity(n - 1);
    let mut sub_xs = Vec::with_capacity(n - 1);
    let mut positions = Vec::with_capacity(n - 2);
    for j in (0..n - 1).filter(|&j| j != partner) {
        sub_seqs.push(seqs[j].clone());
        sub_xs.push(xs[j]);
        positions.push(j);
    }
    sub_seqs.push(merged.clone());
    sub_xs.push(xs[partner] + xs[n - 1]);
    let (sub_lengths, mut sub_parts) = multi(&sub_seqs, &sub_xs, guard)?;

    let merged_prefix = &merged[..sub_lengths[n - 2]];
    let m1 = seqs[partner].partition_point(|t| merged_prefix.binary_search(t).is_ok());
    let m2 = last.partition_point(|t| merged_prefix.binary_search(t).is_ok());
    debug_assert_eq!(m1 + m2, merged_prefix.len());
    let x = -last[..m2].iter().sum::<i64>() - xs[n - 1];
    let (n1, n2, d1, d2) = two_slices(&seqs[partner][m1..], &last[m2..], x, guard)?;

    let mut lengths = vec![0; n];
    let mut parts = vec![Vec::new(); n];
    for (k, &j) in positions.iter().enumerate() {
        lengths[j] = sub_lengths[k];
        parts[j] = std::mem::take(&mut sub_parts[k]);
    }
    let mut c = std::mem::take(&mut sub_parts[n - 2]);
    c.extend(d1);
    c.sort_unstable();
    lengths[partner] = m1 + n1;
    parts[partner] = c;
    lengths[n - 1] = m2 + n2;
    parts[n - 1] = d2;
    Ok((lengths, parts))
}
