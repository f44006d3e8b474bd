//! The burning process itself: round-by-round simulation of a burning
//! sequence, plus helpers that turn round plans into valid sequences.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{DistanceMatrix, Graph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BurnError {
    #[error("round {round}: vertex {vertex} is already burned")]
    InvalidPlacement { round: usize, vertex: usize },
    #[error("vertex {vertex} out of range for {vertex_count} vertices")]
    VertexOutOfRange { vertex: usize, vertex_count: usize },
    #[error("empty burning sequence for a nonempty graph")]
    EmptySequence,
    #[error("vertex {0} appears more than once in the sequence")]
    RepeatedVertex(usize),
}

/// Source positions; the source at list index `t - 1` is placed in round `t`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BurningSequence(Vec<usize>);

impl BurningSequence {
    pub fn new(sources: Vec<usize>) -> Result<Self, BurnError> {
        let mut seen = sources.clone();
        seen.sort_unstable();
        if let Some(w) = seen.windows(2).find(|w| w[0] == w[1]) {
            return Err(BurnError::RepeatedVertex(w[0]));
        }
        Ok(BurningSequence(sources))
    }

    pub fn sources(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BurnOutcome {
    /// Round in which the last vertex burned; `None` if some vertex never burns.
    pub rounds_elapsed: Option<usize>,
    pub fully_burned: bool,
    /// Round in which each vertex burned, `None` for never.
    pub burned_at_round: Vec<Option<usize>>,
}

/// Literal round-by-round state of the process.
struct Process<'g> {
    graph: &'g Graph,
    burned_at: Vec<Option<usize>>,
    burned: usize,
    /// Vertices burned in the current round.
    fresh: Vec<usize>,
    round: usize,
}

impl<'g> Process<'g> {
    fn new(graph: &'g Graph) -> Self {
        Process {
            graph,
            burned_at: vec![None; graph.vertex_count()],
            burned: 0,
            fresh: Vec::new(),
            round: 0,
        }
    }

    fn done(&self) -> bool {
        self.burned == self.burned_at.len()
    }

    /// Starts the next round, optionally placing a source, then spreads fire
    /// from every vertex burned in the previous round.
    fn step(&mut self, source: Option<usize>) -> Result<(), BurnError> {
        self.round += 1;
        let t = self.round;
        let previous = std::mem::take(&mut self.fresh);
        if let Some(v) = source {
            if self.burned_at[v].is_some() {
                return Err(BurnError::InvalidPlacement {
                    round: t,
                    vertex: v,
                });
            }
            self.burn(v, t);
        }
        for u in previous {
            for &w in self.graph.neighbors(u) {
                if self.burned_at[w].is_none() {
                    self.burn(w, t);
                }
            }
        }
        Ok(())
    }

    fn burn(&mut self, v: usize, t: usize) {
        self.burned_at[v] = Some(t);
        self.burned += 1;
        self.fresh.push(v);
    }

    fn first_unburned(&self) -> Option<usize> {
        self.burned_at.iter().position(Option::is_none)
    }
}

/// Runs the burning process. Sources are placed one per round; once the
/// sequence is exhausted the fire keeps spreading until nothing new burns.
pub fn simulate(graph: &Graph, seq: &BurningSequence) -> Result<BurnOutcome, BurnError> {
    let n = graph.vertex_count();
    if n > 0 && seq.is_empty() {
        return Err(BurnError::EmptySequence);
    }
    if let Some(&vertex) = seq.sources().iter().find(|&&v| v >= n) {
        return Err(BurnError::VertexOutOfRange {
            vertex,
            vertex_count: n,
        });
    }
    let mut process = Process::new(graph);
    let mut sources = seq.sources().iter();
    while !process.done() {
        let next = sources.next().copied();
        if next.is_none() && process.fresh.is_empty() {
            break;
        }
        process.step(next)?;
    }
    let fully_burned = process.done();
    let rounds_elapsed = if fully_burned {
        Some(process.burned_at.iter().flatten().copied().max().unwrap_or(0))
    } else {
        None
    };
    Ok(BurnOutcome {
        rounds_elapsed,
        fully_burned,
        burned_at_round: process.burned_at,
    })
}

/// Turns a per-round plan into a valid burning sequence by replaying it.
///
/// `plan[t - 1]` is the intended source of round `t`. A planned vertex that is
/// already burned when its round starts, or a missing entry, is replaced by
/// the smallest unburned vertex. A planned source that is already burned lies
/// inside the ball of an earlier source, so the replacement never delays any
/// vertex. Stops as soon as everything is burned.
pub fn complete_plan(graph: &Graph, plan: &[Option<usize>]) -> BurningSequence {
    let mut process = Process::new(graph);
    let mut out = Vec::new();
    for &planned in plan {
        if process.done() {
            break;
        }
        let pick = planned
            .filter(|&v| process.burned_at[v].is_none())
            .or_else(|| process.first_unburned());
        process.step(pick).expect("picked vertex is unburned");
        out.extend(pick);
    }
    BurningSequence(out)
}

/// True when `d(x_i, x_j) >= j - i` for all `i < j`, the distance form of
/// "each source lands on an unburned vertex".
pub fn satisfies_spacing(dist: &DistanceMatrix, seq: &BurningSequence) -> bool {
    let s = seq.sources();
    (0..s.len()).all(|j| (0..j).all(|i| dist.get(s[i], s[j]) >= j - i))
}

/// Round in which each vertex burns under `seq` via the closed form
/// `min_i (i + d(x_i, v))`, ignoring placement validity.
pub fn ball_burn_rounds(dist: &DistanceMatrix, seq: &BurningSequence) -> Vec<Option<usize>> {
    let n = dist.vertex_count();
    (0..n)
        .map(|v| {
            seq.sources()
                .iter()
                .enumerate()
                .filter(|&(_, &x)| dist.get(x, v) < dist.unreachable())
                .map(|(i, &x)| i + 1 + dist.get(x, v))
                .min()
        })
        .collect()
}

/// Every sequence of exactly `m` sources that is valid and burns the whole
/// graph within `m` rounds, found by simulating all `n^m` candidates.
/// Intended for small graphs only.
pub fn burning_sequences(graph: &Graph, m: usize) -> Vec<BurningSequence> {
    let n = graph.vertex_count();
    let mut out = Vec::new();
    if m == 0 || n == 0 {
        return out;
    }
    let mut idx = vec![0usize; m];
    loop {
        let seq = BurningSequence(idx.clone());
        if let Ok(outcome) = simulate(graph, &seq) {
            if outcome.rounds_elapsed.is_some_and(|r| r <= m) {
                out.push(seq);
            }
        }
        let mut pos = m;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < n {
                break;
            }
            idx[pos] = 0;
        }
    }
}
