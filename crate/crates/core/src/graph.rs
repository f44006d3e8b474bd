//! Simple undirected graphs, breadth-first distances, and constructors for
//! the path, path-forest, spider and double-spider families.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("edge endpoint {endpoint} out of range for {vertex_count} vertices")]
    EndpointOutOfRange { endpoint: usize, vertex_count: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unrecognised graph spec `{0}`")]
    BadSpec(String),
}

/// Undirected simple graph on vertices `0..vertex_count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Builds a graph, rejecting loops, repeated edges and out-of-range endpoints.
    pub fn new(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut adjacency = vec![Vec::new(); vertex_count];
        let mut seen = BTreeSet::new();
        for &(u, v) in edges {
            for endpoint in [u, v] {
                if endpoint >= vertex_count {
                    return Err(GraphError::EndpointOutOfRange {
                        endpoint,
                        vertex_count,
                    });
                }
            }
            if u == v {
                return Err(GraphError::Loop(u));
            }
            let key = (u.min(v), u.max(v));
            if !seen.insert(key) {
                return Err(GraphError::DuplicateEdge(key.0, key.1));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Graph {
            adjacency,
            edges: seen.into_iter().collect(),
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    /// Breadth-first distances from `source`; unreachable vertices get `vertex_count`.
    pub fn bfs(&self, source: usize) -> Vec<usize> {
        let n = self.vertex_count();
        let mut dist = vec![n; n];
        dist[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adjacency[u] {
                if dist[w] == n {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn distances(&self) -> DistanceMatrix {
        let n = self.vertex_count();
        let mut data = Vec::with_capacity(n * n);
        for v in 0..n {
            data.extend(self.bfs(v));
        }
        DistanceMatrix { n, data }
    }

    /// Connected components as sorted vertex lists, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut comp = Vec::new();
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(u) = stack.pop() {
                comp.push(u);
                for &w in &self.adjacency[u] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Path on `order` vertices `0 - 1 - ... - (order-1)`.
    pub fn path(order: usize) -> Graph {
        Self::path_forest(&[order])
    }

    /// Disjoint paths; path `i` occupies a contiguous block of vertex ids.
    pub fn path_forest(orders: &[usize]) -> Graph {
        let total = orders.iter().sum();
        let mut edges = Vec::new();
        let mut offset = 0;
        for &len in orders {
            edges.extend((1..len).map(|k| (offset + k - 1, offset + k)));
            offset += len;
        }
        Graph::new(total, &edges).expect("path forest edges are simple")
    }

    /// Spider with center `0`; arm `j` is a path hanging off the center.
    /// Zero-length arms are skipped, so fewer than three arms yields a path.
    pub fn spider(arms: &[usize]) -> Graph {
        let mut builder = ArmBuilder::new(1);
        for &len in arms {
            builder.arm(0, len);
        }
        builder.finish()
    }

    /// Double spider with heads `0` (A) and `1` (B).
    pub fn double_spider(arms_a: &[usize], arms_b: &[usize]) -> Graph {
        let mut builder = ArmBuilder::new(2);
        builder.edges.push((0, 1));
        for &len in arms_a {
            builder.arm(0, len);
        }
        for &len in arms_b {
            builder.arm(1, len);
        }
        builder.finish()
    }

    /// Parses the text format: `n <count>` then one `u v` edge per line; `#` starts a comment.
    pub fn parse_text(text: &str) -> Result<Graph, GraphError> {
        let mut vertex_count = None;
        let mut edges = Vec::new();
        let mut seen = BTreeSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let fields: Vec<&str> = content.split_whitespace().collect();
            let parse_err = |message: String| GraphError::Parse { line, message };
            let Some(count) = vertex_count else {
                if fields.len() != 2 || fields[0] != "n" {
                    return Err(parse_err("expected header `n <vertex_count>`".into()));
                }
                let count = fields[1]
                    .parse::<usize>()
                    .map_err(|e| parse_err(format!("bad vertex count: {e}")))?;
                vertex_count = Some(count);
                continue;
            };
            if fields.len() != 2 {
                return Err(parse_err(format!(
                    "expected `u v`, found {} fields",
                    fields.len()
                )));
            }
            let mut ends = [0usize; 2];
            for (slot, field) in ends.iter_mut().zip(&fields) {
                *slot = field
                    .parse::<usize>()
                    .map_err(|e| parse_err(format!("bad vertex `{field}`: {e}")))?;
                if *slot >= count {
                    return Err(parse_err(format!(
                        "vertex {slot} out of range for {count} vertices"
                    )));
                }
            }
            let [u, v] = ends;
            if u == v {
                return Err(parse_err(format!("loop at vertex {u}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(parse_err(format!("duplicate edge {u}-{v}")));
            }
            edges.push((u, v));
        }
        let vertex_count = vertex_count.ok_or(GraphError::Parse {
            line: 1,
            message: "missing header `n <vertex_count>`".into(),
        })?;
        Graph::new(vertex_count, &edges)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("n {}\n", self.vertex_count());
        for (u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    /// Parses constructor shorthand: `path:16`, `spider:5,5,6`, `dspider:5,5/6`,
    /// or `forest:7,5,2` for disjoint paths.
    pub fn from_shorthand(spec: &str) -> Result<Graph, GraphError> {
        let bad = || GraphError::BadSpec(spec.to_string());
        let (kind, args) = spec.split_once(':').ok_or_else(bad)?;
        match kind {
            "path" => Ok(Graph::path(args.trim().parse().map_err(|_| bad())?)),
            "forest" => Ok(Graph::path_forest(&parse_list(args).ok_or_else(bad)?)),
            "spider" => Ok(Graph::spider(&parse_list(args).ok_or_else(bad)?)),
            "dspider" => {
                let (a, b) = args.split_once('/').unwrap_or((args, ""));
                Ok(Graph::double_spider(
                    &parse_list(a).ok_or_else(bad)?,
                    &parse_list(b).ok_or_else(bad)?,
                ))
            }
            _ => Err(bad()),
        }
    }
}

/// Parses a comma list of nonnegative integers; the empty string is the empty list.
pub fn parse_list(s: &str) -> Option<Vec<usize>> {
    let s = s.trim();
    if s.is_empty() {
        return Some(Vec::new());
    }
    s.split(',').map(|x| x.trim().parse().ok()).collect()
}

struct ArmBuilder {
    next: usize,
    edges: Vec<(usize, usize)>,
}

impl ArmBuilder {
    fn new(heads: usize) -> Self {
        ArmBuilder {
            next: heads,
            edges: Vec::new(),
        }
    }

    fn arm(&mut self, head: usize, len: usize) {
        let mut prev = head;
        for _ in 0..len {
            self.edges.push((prev, self.next));
            prev = self.next;
            self.next += 1;
        }
    }

    fn finish(self) -> Graph {
        Graph::new(self.next, &self.edges).expect("arm construction is simple")
    }
}

/// All-pairs hop distances; unreachable pairs hold [`DistanceMatrix::unreachable`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<usize>,
}

impl DistanceMatrix {
    #[inline]
    pub fn get(&self, u: usize, v: usize) -> usize {
        self.data[u * self.n + v]
    }

    /// Sentinel for "no path": the vertex count, larger than any true distance.
    pub fn unreachable(&self) -> usize {
        self.n
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn row(&self, u: usize) -> &[usize] {
        &self.data[u * self.n..(u + 1) * self.n]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_distances() {
        let d = Graph::path(2).distances();
        assert_eq!(d.get(0, 1), 1);
        let d = Graph::path(16).distances();
        assert_eq!(d.get(0, 15), 15);
        assert_eq!(d.get(15, 0), 15);
    }

    #[test]
    fn disconnected_distance_is_sentinel() {
        let g = Graph::path_forest(&[2, 2]);
        let d = g.distances();
        assert_eq!(d.unreachable(), 4);
        assert_eq!(d.get(0, 2), 4);
        assert_eq!(d.get(1, 3), 4);
        assert_eq!(d.get(2, 3), 1);
    }

    #[test]
    fn constructor_orders() {
        let p = Graph::path(1);
        assert_eq!((p.vertex_count(), p.edge_count()), (1, 0));
        let s = Graph::spider(&[5, 5, 6]);
        assert_eq!((s.vertex_count(), s.edge_count()), (17, 16));
        assert_eq!(s.degree(0), 3);
        let ds = Graph::double_spider(&[3, 3], &[3]);
        assert_eq!((ds.vertex_count(), ds.edge_count()), (11, 10));
        assert_eq!((ds.degree(0), ds.degree(1)), (3, 2));
        let degenerate = Graph::spider(&[4, 0]);
        assert_eq!(degenerate, Graph::path(5));
    }

    #[test]
    fn rejects_non_simple_input() {
        assert_eq!(Graph::new(2, &[(1, 1)]), Err(GraphError::Loop(1)));
        assert_eq!(
            Graph::new(3, &[(0, 1), (1, 0)]),
            Err(GraphError::DuplicateEdge(0, 1))
        );
        assert!(matches!(
            Graph::new(2, &[(0, 2)]),
            Err(GraphError::EndpointOutOfRange { endpoint: 2, .. })
        ));
    }

    #[test]
    fn text_format_round_trip_and_errors() {
        let g = Graph::spider(&[2, 1, 1]);
        assert_eq!(Graph::parse_text(&g.to_text()).unwrap(), g);

        let text = "# a triangle\nn 3\n0 1 # first\n1 2\n\n2 0\n";
        assert_eq!(Graph::parse_text(text).unwrap().edge_count(), 3);

        match Graph::parse_text("n 3\n0 1\n1 x\n") {
            Err(GraphError::Parse { line: 3, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        match Graph::parse_text("n 3\n0 1\n1 0\n") {
            Err(GraphError::Parse { line: 3, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        match Graph::parse_text("n 3\n\n0 5\n") {
            Err(GraphError::Parse { line: 3, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(Graph::parse_text("0 1\n").is_err());
    }

    #[test]
    fn shorthand() {
        assert_eq!(Graph::from_shorthand("path:16").unwrap(), Graph::path(16));
        assert_eq!(
            Graph::from_shorthand("spider:5,5,6").unwrap().vertex_count(),
            17
        );
        let ds = Graph::from_shorthand("dspider:5,5/6").unwrap();
        assert_eq!(ds, Graph::double_spider(&[5, 5], &[6]));
        assert_eq!(
            Graph::from_shorthand("dspider:3,3").unwrap(),
            Graph::double_spider(&[3, 3], &[])
        );
        assert!(Graph::from_shorthand("cycle:5").is_err());
        assert!(Graph::from_shorthand("path:x").is_err());
    }
}
