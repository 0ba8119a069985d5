//! Network topology: DAG construction, path enumeration and covering sets.

use std::collections::HashMap;
use std::fs;
use std::path::Path as FsPath;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A directed acyclic routing graph in which every edge lies on some
/// source-destination path.
#[derive(Debug, Clone, PartialEq)]
pub struct Dag {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    source: usize,
    destination: usize,
    out_edges: Vec<Vec<usize>>,
    in_edges: Vec<Vec<usize>>,
    topo: Vec<usize>,
}

/// Which input edges survived construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PruneReport {
    /// Input positions of the edges that lie on no source-destination path.
    pub removed: Vec<usize>,
    /// `id_map[i]` is the dense id given to input edge `i`, if retained.
    pub id_map: Vec<Option<usize>>,
}

/// Builds a [`Dag`] from an edge list over vertices `0..vertex_count`.
///
/// Edges that cannot be part of any `source -> destination` path are dropped
/// and the remaining ids are re-densified in input order.
pub fn build_dag(
    vertex_count: usize,
    edges: &[(usize, usize)],
    source: usize,
    destination: usize,
) -> Result<(Dag, PruneReport)> {
    if edges.is_empty() {
        return Err(Error::InvalidGraph("edge list is empty".into()));
    }
    if source == destination {
        return Err(Error::InvalidGraph("source and destination coincide".into()));
    }
    for &v in [source, destination].iter().chain(edges.iter().flat_map(|(u, v)| [u, v])) {
        if v >= vertex_count {
            return Err(Error::InvalidGraph(format!(
                "vertex {v} out of range for {vertex_count} vertices"
            )));
        }
    }

    let mut out = vec![Vec::new(); vertex_count];
    let mut inc = vec![Vec::new(); vertex_count];
    for (i, &(u, v)) in edges.iter().enumerate() {
        out[u].push(i);
        inc[v].push(i);
    }
    topological_order(vertex_count, edges, &out)?;

    let forward = reachable(source, &out, |e| edges[e].1);
    let backward = reachable(destination, &inc, |e| edges[e].0);
    if !forward[destination] {
        return Err(Error::NoPath { from: source, to: destination });
    }

    let mut id_map = vec![None; edges.len()];
    let mut removed = Vec::new();
    let mut kept = Vec::new();
    for (i, &(u, v)) in edges.iter().enumerate() {
        if forward[u] && backward[v] {
            id_map[i] = Some(kept.len());
            kept.push((u, v));
        } else {
            removed.push(i);
        }
    }

    let mut out_edges = vec![Vec::new(); vertex_count];
    let mut in_edges = vec![Vec::new(); vertex_count];
    for (id, &(u, v)) in kept.iter().enumerate() {
        out_edges[u].push(id);
        in_edges[v].push(id);
    }
    let topo = topological_order(vertex_count, &kept, &out_edges)?
        .into_iter()
        .filter(|&v| forward[v] && backward[v])
        .collect();

    let dag = Dag {
        vertex_count,
        edges: kept,
        source,
        destination,
        out_edges,
        in_edges,
        topo,
    };
    Ok((dag, PruneReport { removed, id_map }))
}

fn topological_order(
    vertex_count: usize,
    edges: &[(usize, usize)],
    out: &[Vec<usize>],
) -> Result<Vec<usize>> {
    let mut indegree = vec![0usize; vertex_count];
    for &(_, v) in edges {
        indegree[v] += 1;
    }
    let mut stack: Vec<usize> = (0..vertex_count).rev().filter(|&v| indegree[v] == 0).collect();
    let mut order = Vec::with_capacity(vertex_count);
    while let Some(u) = stack.pop() {
        order.push(u);
        for &e in out[u].iter().rev() {
            let v = edges[e].1;
            indegree[v] -= 1;
            if indegree[v] == 0 {
                stack.push(v);
            }
        }
    }
    if order.len() < vertex_count {
        let vertex = (0..vertex_count).find(|&v| indegree[v] > 0).unwrap_or(0);
        return Err(Error::CycleDetected { vertex });
    }
    Ok(order)
}

fn reachable(start: usize, adjacency: &[Vec<usize>], next: impl Fn(usize) -> usize) -> Vec<bool> {
    let mut seen = vec![false; adjacency.len()];
    let mut stack = vec![start];
    seen[start] = true;
    while let Some(u) = stack.pop() {
        for &e in &adjacency[u] {
            let v = next(e);
            if !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    seen
}

impl Dag {
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn destination(&self) -> usize {
        self.destination
    }

    /// `(tail, head)` of edge `id`.
    pub fn endpoints(&self, id: usize) -> (usize, usize) {
        self.edges[id]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Outgoing edge ids of `vertex`, in increasing id order.
    pub fn out_edges(&self, vertex: usize) -> &[usize] {
        &self.out_edges[vertex]
    }

    pub fn in_edges(&self, vertex: usize) -> &[usize] {
        &self.in_edges[vertex]
    }

    /// Vertices lying on some source-destination path, in topological order.
    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }

    /// Number of source-destination paths, saturating at `u128::MAX`.
    pub fn count_paths(&self) -> u128 {
        let mut count = vec![0u128; self.vertex_count];
        count[self.destination] = 1;
        for &v in self.topo.iter().rev() {
            if v == self.destination {
                continue;
            }
            count[v] = self.out_edges[v]
                .iter()
                .fold(0u128, |acc, &e| acc.saturating_add(count[self.edges[e].1]));
        }
        count[self.source]
    }

    /// Longest source-destination path, in edges.
    pub fn max_path_len(&self) -> usize {
        let mut longest = vec![0usize; self.vertex_count];
        for &v in self.topo.iter().rev() {
            if v == self.destination {
                continue;
            }
            longest[v] =
                self.out_edges[v].iter().map(|&e| longest[self.edges[e].1] + 1).max().unwrap_or(0);
        }
        longest[self.source]
    }

    /// Checks that `edges` is a contiguous source-destination walk.
    pub fn is_path(&self, edges: &[usize]) -> bool {
        let Some(&first) = edges.first() else { return false };
        if first >= self.edges.len() || self.edges[first].0 != self.source {
            return false;
        }
        let mut at = self.source;
        for &e in edges {
            if e >= self.edges.len() || self.edges[e].0 != at {
                return false;
            }
            at = self.edges[e].1;
        }
        at == self.destination
    }
}

/// A routing strategy: the edge ids of one source-destination path in
/// traversal order (or in increasing id order for subset action spaces).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Path {
    edges: Vec<usize>,
}

impl Path {
    pub fn new(edges: Vec<usize>) -> Self {
        Path { edges }
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, edge: usize) -> bool {
        self.edges.contains(&edge)
    }

    /// Sum of `weights` over the path's edges.
    pub fn total(&self, weights: &[f64]) -> f64 {
        self.edges.iter().map(|&e| weights[e]).sum()
    }
}

impl From<Vec<usize>> for Path {
    fn from(edges: Vec<usize>) -> Self {
        Path::new(edges)
    }
}

/// An explicit list of candidate paths.
#[derive(Debug, Clone)]
pub struct PathSet {
    paths: Vec<Path>,
    edge_count: usize,
    max_len: usize,
    index: HashMap<Path, usize>,
}

impl PathSet {
    /// Wraps `paths`, which must be distinct, non-empty, at least two, and
    /// jointly cover edges `0..edge_count`.
    pub fn new(paths: Vec<Path>, edge_count: usize) -> Result<Self> {
        if paths.len() < 2 {
            return Err(Error::InvalidGraph(format!(
                "need at least two candidate paths, found {}",
                paths.len()
            )));
        }
        let mut covered = vec![false; edge_count];
        let mut index = HashMap::with_capacity(paths.len());
        for (i, p) in paths.iter().enumerate() {
            if p.is_empty() {
                return Err(Error::InvalidGraph(format!("path {i} is empty")));
            }
            let mut seen = p.edges().to_vec();
            seen.sort_unstable();
            seen.dedup();
            if seen.len() != p.len() {
                return Err(Error::InvalidGraph(format!("path {i} repeats an edge")));
            }
            for &e in p.edges() {
                if e >= edge_count {
                    return Err(Error::InvalidGraph(format!("path {i} uses unknown edge {e}")));
                }
                covered[e] = true;
            }
            if index.insert(p.clone(), i).is_some() {
                return Err(Error::InvalidGraph(format!("path {i} is listed twice")));
            }
        }
        if let Some(e) = covered.iter().position(|c| !c) {
            return Err(Error::InvalidGraph(format!("edge {e} lies on no candidate path")));
        }
        let max_len = paths.iter().map(Path::len).max().unwrap_or(0);
        Ok(PathSet { paths, edge_count, max_len, index })
    }

    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Maximum path length `k`.
    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn position(&self, path: &Path) -> Option<usize> {
        self.index.get(path).copied()
    }

    pub fn get(&self, i: usize) -> &Path {
        &self.paths[i]
    }
}

/// Lists every source-destination path, in lexicographic order of edge ids.
pub fn enumerate_paths(dag: &Dag, cap: usize) -> Result<PathSet> {
    let count = dag.count_paths();
    if count > cap as u128 {
        return Err(Error::PathExplosion { count, cap });
    }
    let mut paths = Vec::with_capacity(count as usize);
    let mut prefix = Vec::new();
    collect_paths(dag, dag.source, &mut prefix, &mut paths);
    PathSet::new(paths, dag.edge_count())
}

fn collect_paths(dag: &Dag, at: usize, prefix: &mut Vec<usize>, out: &mut Vec<Path>) {
    if at == dag.destination {
        out.push(Path::new(prefix.clone()));
        return;
    }
    for &e in dag.out_edges(at) {
        prefix.push(e);
        collect_paths(dag, dag.edges[e].1, prefix, out);
        prefix.pop();
    }
}

/// Covering strategies: a few paths that jointly contain every edge, with
/// each edge assigned to exactly one of them.
#[derive(Debug, Clone, PartialEq)]
pub struct CoveringSet {
    paths: Vec<Path>,
    designated: Vec<usize>,
}

impl CoveringSet {
    /// Builds a cover from explicit `paths`; each edge is designated to the
    /// first path containing it.
    pub fn from_paths(paths: Vec<Path>, edge_count: usize) -> Result<Self> {
        let mut designated = vec![usize::MAX; edge_count];
        for (c, p) in paths.iter().enumerate() {
            for &e in p.edges() {
                if designated[e] == usize::MAX {
                    designated[e] = c;
                }
            }
        }
        if let Some(e) = designated.iter().position(|&d| d == usize::MAX) {
            return Err(Error::InvalidGraph(format!("covering set misses edge {e}")));
        }
        Ok(CoveringSet { paths, designated })
    }

    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    /// Index (into [`CoveringSet::paths`]) of the path designated for `edge`.
    pub fn designated(&self, edge: usize) -> usize {
        self.designated[edge]
    }

    /// Edges designated to covering path `c`.
    pub fn designated_edges(&self, c: usize) -> impl Iterator<Item = usize> + '_ {
        self.designated.iter().enumerate().filter(move |(_, &d)| d == c).map(|(e, _)| e)
    }

    /// Exploration mass of each covering path: the sum of `epsilon` over the
    /// edges designated to it. The masses add up to `sum(epsilon)`.
    pub fn masses(&self, epsilon: &[f64]) -> Vec<f64> {
        let mut mass = vec![0.0; self.paths.len()];
        for (e, &c) in self.designated.iter().enumerate() {
            mass[c] += epsilon[e];
        }
        mass
    }
}

/// Greedy maximum-coverage selection over an explicit path set.
///
/// Repeatedly takes the path containing the most uncovered edges (earliest
/// path on ties). The result may exceed `ceil(n / k)` when no disjoint cover
/// exists.
pub fn covering_set(paths: &PathSet) -> CoveringSet {
    let n = paths.edge_count();
    let mut covered = vec![false; n];
    let mut remaining = n;
    let mut chosen = Vec::new();
    while remaining > 0 {
        let (best, gain) = paths
            .paths()
            .iter()
            .enumerate()
            .map(|(i, p)| (i, p.edges().iter().filter(|&&e| !covered[e]).count()))
            .fold((0, 0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        debug_assert!(gain > 0, "path set does not cover every edge");
        for &e in paths.get(best).edges() {
            if !covered[e] {
                covered[e] = true;
                remaining -= 1;
            }
        }
        chosen.push(paths.get(best).clone());
    }
    CoveringSet::from_paths(chosen, n).expect("greedy cover covers every edge")
}

/// The same greedy cover as [`covering_set`], computed on the DAG without
/// enumerating paths: each step is a longest-path search that counts only
/// uncovered edges, with ties resolved towards the lexicographically
/// smallest path.
pub fn covering_set_dag(dag: &Dag) -> CoveringSet {
    let n = dag.edge_count();
    let mut covered = vec![false; n];
    let mut remaining = n;
    let mut chosen = Vec::new();
    while remaining > 0 {
        let gain: Vec<f64> = covered.iter().map(|&c| if c { 0.0 } else { -1.0 }).collect();
        let path = argmin_path(dag, &gain);
        for &e in path.edges() {
            if !covered[e] {
                covered[e] = true;
                remaining -= 1;
            }
        }
        chosen.push(path);
    }
    CoveringSet::from_paths(chosen, n).expect("greedy cover covers every edge")
}

/// Minimum-weight source-destination path for nonnegative finite weights,
/// ties broken towards the lexicographically smallest edge-id sequence.
pub fn shortest_path(dag: &Dag, weights: &[f64]) -> Result<Path> {
    if weights.len() != dag.edge_count() {
        return Err(Error::InvalidGraph(format!(
            "expected {} weights, got {}",
            dag.edge_count(),
            weights.len()
        )));
    }
    if let Some(e) = weights.iter().position(|w| !w.is_finite() || *w < 0.0) {
        return Err(Error::InvalidGraph(format!("weight of edge {e} is {}", weights[e])));
    }
    Ok(argmin_path(dag, weights))
}

/// Minimum-weight path for arbitrary finite weights (the graph is acyclic,
/// so negative weights are fine).
pub(crate) fn argmin_path(dag: &Dag, weights: &[f64]) -> Path {
    let mut dist = vec![f64::INFINITY; dag.vertex_count];
    dist[dag.destination] = 0.0;
    for &v in dag.topo.iter().rev() {
        if v == dag.destination {
            continue;
        }
        for &e in &dag.out_edges[v] {
            let cand = weights[e] + dist[dag.edges[e].1];
            if cand < dist[v] {
                dist[v] = cand;
            }
        }
    }
    let mut edges = Vec::new();
    let mut at = dag.source;
    while at != dag.destination {
        let e = dag.out_edges[at]
            .iter()
            .copied()
            .find(|&e| weights[e] + dist[dag.edges[e].1] == dist[at])
            .expect("an optimal outgoing edge exists");
        edges.push(e);
        at = dag.edges[e].1;
    }
    Path::new(edges)
}

/// On-disk graph description.
///
/// `vertices` is either a count or a list of names; edge endpoints may be
/// given as indices or names.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphFile {
    pub vertices: Vertices,
    pub edges: Vec<[VertexRef; 2]>,
    pub source: VertexRef,
    pub destination: VertexRef,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Vertices {
    Count(usize),
    Names(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VertexRef {
    Index(usize),
    Name(String),
}

impl GraphFile {
    pub fn load(path: &FsPath) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text)
            .map_err(|e| Error::Parse { path: path.to_path_buf(), message: e.to_string() })
    }

    fn resolve(&self, v: &VertexRef) -> Result<usize> {
        match (v, &self.vertices) {
            (VertexRef::Index(i), _) => Ok(*i),
            (VertexRef::Name(name), Vertices::Names(names)) => names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::InvalidGraph(format!("unknown vertex {name:?}"))),
            (VertexRef::Name(name), Vertices::Count(_)) => Err(Error::InvalidGraph(format!(
                "vertex {name:?} referenced by name but vertices are unnamed"
            ))),
        }
    }

    pub fn build(&self) -> Result<(Dag, PruneReport)> {
        let count = match &self.vertices {
            Vertices::Count(c) => *c,
            Vertices::Names(n) => n.len(),
        };
        let edges = self
            .edges
            .iter()
            .map(|[u, v]| Ok((self.resolve(u)?, self.resolve(v)?)))
            .collect::<Result<Vec<_>>>()?;
        build_dag(count, &edges, self.resolve(&self.source)?, self.resolve(&self.destination)?)
    }
}

/// Small topology generators used by examples, tests and configs.
pub mod generators {
    use super::*;

    /// `s -> a -> d`, `s -> b -> d`.
    pub fn diamond() -> Dag {
        build_dag(4, &[(0, 1), (1, 3), (0, 2), (2, 3)], 0, 3).expect("valid diamond").0
    }

    /// `chains` vertex-disjoint chains of `length` edges each between `s`
    /// and `d`. Edge ids run chain by chain.
    pub fn parallel_chains(chains: usize, length: usize) -> Result<Dag> {
        if chains == 0 || length == 0 {
            return Err(Error::InvalidGraph("need at least one chain of one edge".into()));
        }
        let inner = length - 1;
        let vertex_count = 2 + chains * inner;
        let (s, d) = (0, 1);
        let mut edges = Vec::with_capacity(chains * length);
        for c in 0..chains {
            let mut at = s;
            for j in 0..inner {
                let v = 2 + c * inner + j;
                edges.push((at, v));
                at = v;
            }
            edges.push((at, d));
        }
        Ok(build_dag(vertex_count, &edges, s, d)?.0)
    }

    /// `layers` stages in series, each made of `width` parallel edges.
    pub fn layered(width: usize, layers: usize) -> Result<Dag> {
        series(&vec![width; layers])
    }

    /// Stages in series; stage `j` is `widths[j]` parallel edges.
    pub fn series(widths: &[usize]) -> Result<Dag> {
        if widths.is_empty() || widths.contains(&0) {
            return Err(Error::InvalidGraph("empty series stage".into()));
        }
        let edges: Vec<_> = widths
            .iter()
            .enumerate()
            .flat_map(|(l, &w)| std::iter::repeat((l, l + 1)).take(w))
            .collect();
        Ok(build_dag(widths.len() + 1, &edges, 0, widths.len())?.0)
    }

    /// Fully connected consecutive vertex layers: `s`, then one layer per
    /// entry of `widths`, then `d`.
    pub fn complete_layers(widths: &[usize]) -> Result<Dag> {
        if widths.contains(&0) {
            return Err(Error::InvalidGraph("empty vertex layer".into()));
        }
        let mut layers = vec![vec![0usize]];
        let mut next = 2;
        for &w in widths {
            layers.push((next..next + w).collect());
            next += w;
        }
        layers.push(vec![1]);
        let mut edges = Vec::new();
        for pair in layers.windows(2) {
            for &u in &pair[0] {
                for &v in &pair[1] {
                    edges.push((u, v));
                }
            }
        }
        Ok(build_dag(next, &edges, 0, 1)?.0)
    }
}

#[cfg(test)]
mod tests {
    use super::generators::*;
    use super::*;

    #[test]
    fn diamond_has_two_paths() {
        let dag = diamond();
        assert_eq!(dag.edge_count(), 4);
        let ps = enumerate_paths(&dag, 10).unwrap();
        assert_eq!(ps.len(), 2);
        assert_eq!(ps.max_len(), 2);
        assert_eq!(ps.get(0).edges(), &[0, 1]);
        assert_eq!(ps.get(1).edges(), &[2, 3]);
    }

    #[test]
    fn self_loop_is_a_cycle() {
        // s=0, a=1, d=2
        let err = build_dag(3, &[(0, 1), (1, 2), (1, 1)], 0, 2).unwrap_err();
        assert!(matches!(err, Error::CycleDetected { .. }));
    }

    #[test]
    fn dead_end_edges_are_pruned() {
        // s=0, a=1, d=2, c=3 dead end
        let (dag, report) = build_dag(4, &[(0, 1), (1, 2), (0, 3)], 0, 2).unwrap();
        assert_eq!(dag.edge_count(), 2);
        assert_eq!(report.removed, vec![2]);
        assert_eq!(report.id_map, vec![Some(0), Some(1), None]);
    }

    #[test]
    fn unreachable_destination_is_reported() {
        let err = build_dag(3, &[(0, 1)], 0, 2).unwrap_err();
        assert!(matches!(err, Error::NoPath { .. }));
    }

    #[test]
    fn source_equal_destination_is_rejected() {
        assert!(build_dag(2, &[(0, 1)], 0, 0).is_err());
        assert!(build_dag(2, &[], 0, 1).is_err());
    }

    #[test]
    fn parallel_chains_enumerate() {
        let dag = parallel_chains(3, 2).unwrap();
        assert_eq!(dag.edge_count(), 6);
        let ps = enumerate_paths(&dag, 10).unwrap();
        assert_eq!(ps.len(), 3);
        assert_eq!(ps.get(2).edges(), &[4, 5]);
    }

    #[test]
    fn layered_graph_exceeds_cap() {
        let dag = layered(2, 10).unwrap();
        assert_eq!(dag.count_paths(), 1024);
        match enumerate_paths(&dag, 100) {
            Err(Error::PathExplosion { count, cap }) => {
                assert_eq!(count, 1024);
                assert_eq!(cap, 100);
            }
            other => panic!("expected PathExplosion, got {other:?}"),
        }
    }

    #[test]
    fn disjoint_cover_has_ceil_n_over_k_paths() {
        let ps = enumerate_paths(&parallel_chains(3, 2).unwrap(), 10).unwrap();
        let cover = covering_set(&ps);
        assert_eq!(cover.len(), 3);
        let ps = enumerate_paths(&diamond(), 10).unwrap();
        assert_eq!(covering_set(&ps).len(), 2);
    }

    #[test]
    fn greedy_cover_may_exceed_lower_bound() {
        // {e1,e2}, {e2,e3}, {e4} as 0-based {0,1}, {1,2}, {3}
        let ps = PathSet::new(
            vec![Path::new(vec![0, 1]), Path::new(vec![1, 2]), Path::new(vec![3])],
            4,
        )
        .unwrap();
        let cover = covering_set(&ps);
        assert_eq!(
            cover.paths(),
            &[Path::new(vec![0, 1]), Path::new(vec![1, 2]), Path::new(vec![3])]
        );
        assert_eq!(cover.designated(1), 0);
        assert_eq!(cover.designated(2), 1);
        assert!(cover.len() > 4usize.div_ceil(2));
    }

    #[test]
    fn cover_masses_sum_to_total_epsilon() {
        let ps = PathSet::new(
            vec![Path::new(vec![0, 1]), Path::new(vec![1, 2]), Path::new(vec![3])],
            4,
        )
        .unwrap();
        let cover = covering_set(&ps);
        let masses = cover.masses(&[0.1, 0.2, 0.3, 0.4]);
        assert_eq!(masses, vec![0.1 + 0.2, 0.3, 0.4]);
    }

    #[test]
    fn shortest_path_examples() {
        let dag = diamond();
        assert_eq!(shortest_path(&dag, &[0.1, 0.1, 0.4, 0.4]).unwrap().edges(), &[0, 1]);
        assert_eq!(shortest_path(&dag, &[1.0; 4]).unwrap().edges(), &[0, 1]);
        let dag = parallel_chains(3, 2).unwrap();
        let w = [0.2, 0.2, 0.3, 0.3, 0.45, 0.45];
        assert_eq!(shortest_path(&dag, &w).unwrap().edges(), &[0, 1]);
        assert!(shortest_path(&dag, &[-1.0; 6]).is_err());
    }

    #[test]
    fn dag_cover_matches_enumerated_cover() {
        for dag in [
            diamond(),
            parallel_chains(3, 2).unwrap(),
            layered(3, 3).unwrap(),
            complete_layers(&[2, 3]).unwrap(),
        ] {
            let ps = enumerate_paths(&dag, 1000).unwrap();
            assert_eq!(covering_set(&ps), covering_set_dag(&dag));
        }
    }

    #[test]
    fn graph_file_with_names() {
        let file: GraphFile = serde_json::from_str(
            r#"{"vertices":["s","a","b","d"],
                "edges":[["s","a"],["a","d"],["s","b"],["b","d"]],
                "source":"s","destination":"d"}"#,
        )
        .unwrap();
        let (dag, _) = file.build().unwrap();
        assert_eq!(dag, diamond());
    }

    #[test]
    fn is_path_checks_contiguity() {
        let dag = diamond();
        assert!(dag.is_path(&[0, 1]));
        assert!(!dag.is_path(&[0, 3]));
        assert!(!dag.is_path(&[1]));
    }
}
