//! Metric multigraphs, shortest cycles and Z₂-homology cycle bases.
//!
//! The main entry point is [`MetricGraph::greedy_homology_basis`]: repeatedly
//! take a shortest cycle, record it, delete one of its edges and recurse. The
//! returned certificate carries the length product and the bound
//! `4^{b-1}/(b-1)! · Π_{k=2}^{b} log₂k · ℓ(Γ)^b`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rand::Rng;
use serde::Serialize;

use crate::gf2::rank_of_vectors;
use crate::text::{content_lines, parse_err, parse_usize_fields};
use crate::{Error, Result};

/// Largest first Betti number accepted by the exhaustive oracle.
pub const ORACLE_MAX_BETTI: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub length: f64,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }
}

/// A connected graph with positive edge lengths. Loops and parallel edges are allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricGraph {
    vertex_count: usize,
    edges: Vec<Edge>,
}

/// A cycle as a sorted list of edge indices together with its length.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cycle {
    pub edges: Vec<usize>,
    pub length: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisMethod {
    Greedy,
    Exhaustive,
}

/// A Z₂-homology basis of cycles with its length product and the certified bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CycleBasisCertificate {
    pub method: BasisMethod,
    pub betti1: usize,
    pub total_length: f64,
    pub cycles: Vec<Vec<usize>>,
    pub lengths: Vec<f64>,
    pub product: f64,
    pub bound: f64,
    pub independence_rank: usize,
}

impl CycleBasisCertificate {
    pub fn is_basis(&self) -> bool {
        self.independence_rank == self.betti1 && self.cycles.len() == self.betti1
    }

    pub fn bound_holds(&self) -> bool {
        self.product <= self.bound
    }

    pub fn sorted_lengths(&self) -> Vec<f64> {
        let mut l = self.lengths.clone();
        l.sort_by(f64::total_cmp);
        l
    }
}

/// `4^{b-1}/(b-1)! · Π_{k=2}^{b} log₂k · ℓ^b`. For `b = 1` this is `ℓ`.
pub fn product_bound(b: usize, total_length: f64) -> f64 {
    let mut c = 1.0;
    for k in 2..=b {
        c *= 4.0 / (k - 1) as f64 * (k as f64).log2();
    }
    c * total_length.powi(b as i32)
}

/// Systolic bound `4 log₂(b)/(b−1) · ℓ` for graphs with `b ≥ 2`.
pub fn systolic_bound(b: usize, total_length: f64) -> f64 {
    assert!(b >= 2, "systolic bound needs b >= 2");
    4.0 * (b as f64).log2() / (b - 1) as f64 * total_length
}

#[derive(Clone, Copy, PartialEq)]
struct HeapItem {
    dist: f64,
    vertex: usize,
}

impl Eq for HeapItem {}

impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn cmp_cycles(a: &Cycle, b: &Cycle) -> Ordering {
    a.length
        .total_cmp(&b.length)
        .then_with(|| a.edges.cmp(&b.edges))
}

impl MetricGraph {
    pub fn new(vertex_count: usize, edges: Vec<Edge>) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::Disconnected);
        }
        for (index, e) in edges.iter().enumerate() {
            if e.u >= vertex_count || e.v >= vertex_count {
                return Err(Error::InvalidEdge {
                    index,
                    message: format!("endpoint out of range 0..{vertex_count}"),
                });
            }
            if !(e.length.is_finite() && e.length > 0.0) {
                return Err(Error::InvalidEdge {
                    index,
                    message: format!("length {} is not positive", e.length),
                });
            }
        }
        let g = Self {
            vertex_count,
            edges,
        };
        if !g.is_connected(&vec![true; g.edges.len()]) {
            return Err(Error::Disconnected);
        }
        Ok(g)
    }

    /// Builds from `(u, v, length)` triples.
    pub fn from_triples(vertex_count: usize, triples: &[(usize, usize, f64)]) -> Result<Self> {
        Self::new(
            vertex_count,
            triples
                .iter()
                .map(|&(u, v, length)| Edge { u, v, length })
                .collect(),
        )
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Cyclic number `|E| − |V| + 1`.
    pub fn betti1(&self) -> usize {
        self.edges.len() + 1 - self.vertex_count
    }

    pub fn total_length(&self) -> f64 {
        self.edges.iter().map(|e| e.length).sum()
    }

    fn cycle_from_edges(&self, mut edges: Vec<usize>) -> Cycle {
        edges.sort_unstable();
        let length = edges.iter().map(|&e| self.edges[e].length).sum();
        Cycle { edges, length }
    }

    fn is_connected(&self, active: &[bool]) -> bool {
        let mut parent: Vec<usize> = (0..self.vertex_count).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut components = self.vertex_count;
        for (e, edge) in self.edges.iter().enumerate() {
            if active[e] {
                let (a, b) = (find(&mut parent, edge.u), find(&mut parent, edge.v));
                if a != b {
                    parent[a] = b;
                    components -= 1;
                }
            }
        }
        components == 1
    }

    fn adjacency(&self, active: &[bool]) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for (e, edge) in self.edges.iter().enumerate() {
            if active[e] && !edge.is_loop() {
                adj[edge.u].push((edge.v, e));
                adj[edge.v].push((edge.u, e));
            }
        }
        adj
    }

    /// Shortest path from `s` to `t` avoiding edge `skip`, as edge indices.
    /// Paths of length ≥ `cutoff` are abandoned.
    fn shortest_path_avoiding(
        &self,
        adj: &[Vec<(usize, usize)>],
        s: usize,
        t: usize,
        skip: usize,
        cutoff: f64,
    ) -> Option<Vec<usize>> {
        let mut dist = vec![f64::INFINITY; self.vertex_count];
        let mut pred: Vec<Option<(usize, usize)>> = vec![None; self.vertex_count];
        let mut heap = BinaryHeap::new();
        dist[s] = 0.0;
        heap.push(HeapItem {
            dist: 0.0,
            vertex: s,
        });
        while let Some(HeapItem { dist: d, vertex }) = heap.pop() {
            if d > dist[vertex] {
                continue;
            }
            if vertex == t {
                break;
            }
            if d >= cutoff {
                return None;
            }
            for &(w, e) in &adj[vertex] {
                if e == skip {
                    continue;
                }
                let nd = d + self.edges[e].length;
                if nd < dist[w] {
                    dist[w] = nd;
                    pred[w] = Some((vertex, e));
                    heap.push(HeapItem {
                        dist: nd,
                        vertex: w,
                    });
                }
            }
        }
        if !dist[t].is_finite() {
            return None;
        }
        let mut path = Vec::new();
        let mut cur = t;
        while let Some((p, e)) = pred[cur] {
            path.push(e);
            cur = p;
        }
        Some(path)
    }

    fn shortest_cycle_active(&self, active: &[bool]) -> Option<Cycle> {
        let adj = self.adjacency(active);
        let mut best: Option<Cycle> = None;
        for (e, edge) in self.edges.iter().enumerate() {
            if !active[e] {
                continue;
            }
            let candidate = if edge.is_loop() {
                Some(self.cycle_from_edges(vec![e]))
            } else {
                // A small slack keeps equal-length alternatives reachable for the tie-break.
                let cutoff = best
                    .as_ref()
                    .map_or(f64::INFINITY, |b| (b.length - edge.length) * (1.0 + 1e-12));
                self.shortest_path_avoiding(&adj, edge.u, edge.v, e, cutoff)
                    .map(|mut path| {
                        path.push(e);
                        self.cycle_from_edges(path)
                    })
            };
            if let Some(c) = candidate {
                if best.as_ref().is_none_or(|b| cmp_cycles(&c, b).is_lt()) {
                    best = Some(c);
                }
            }
        }
        best
    }

    /// A minimum-length cycle: the minimum over edges `e = uv` of
    /// `ℓ(e) + d_{Γ−e}(u, v)`, loops counting as cycles of their own length.
    /// Ties are broken lexicographically on the sorted edge indices.
    pub fn shortest_cycle(&self) -> Result<Cycle> {
        if self.betti1() == 0 {
            return Err(Error::Acyclic);
        }
        Ok(self
            .shortest_cycle_active(&vec![true; self.edges.len()])
            .expect("a graph with positive cyclic number has a cycle"))
    }

    /// Greedy Z₂-homology basis: take a shortest cycle, delete its longest
    /// edge (lowest index among equals), and recurse on the remaining
    /// connected graph until one cycle is left.
    pub fn greedy_homology_basis(&self) -> Result<CycleBasisCertificate> {
        let b = self.betti1();
        if b == 0 {
            return Err(Error::Acyclic);
        }
        let mut active = vec![true; self.edges.len()];
        let mut cycles = Vec::with_capacity(b);
        for step in 0..b {
            let cycle = self
                .shortest_cycle_active(&active)
                .expect("remaining graph has positive cyclic number");
            if step + 1 < b {
                let drop = cycle
                    .edges
                    .iter()
                    .copied()
                    .reduce(|best, e| {
                        if self.edges[e].length > self.edges[best].length {
                            e
                        } else {
                            best
                        }
                    })
                    .expect("cycles are nonempty");
                active[drop] = false;
                assert!(
                    self.is_connected(&active),
                    "deleting a cycle edge disconnected the graph"
                );
                let remaining = active.iter().filter(|&&a| a).count() + 1 - self.vertex_count;
                assert_eq!(remaining, b - step - 1, "cyclic number must drop by one");
            }
            cycles.push(cycle);
        }
        Ok(self.certificate(BasisMethod::Greedy, cycles))
    }

    fn certificate(&self, method: BasisMethod, cycles: Vec<Cycle>) -> CycleBasisCertificate {
        let b = self.betti1();
        let total = self.total_length();
        let edge_sets: Vec<Vec<usize>> = cycles.iter().map(|c| c.edges.clone()).collect();
        let lengths: Vec<f64> = cycles.iter().map(|c| c.length).collect();
        CycleBasisCertificate {
            method,
            betti1: b,
            total_length: total,
            independence_rank: self.verify_independence(&edge_sets),
            product: lengths.iter().product(),
            bound: product_bound(b, total),
            cycles: edge_sets,
            lengths,
        }
    }

    /// GF(2) rank of the edge-indicator vectors of the given edge sets.
    pub fn verify_independence(&self, cycles: &[Vec<usize>]) -> usize {
        let e = self.edges.len();
        let vectors: Vec<Vec<bool>> = cycles
            .iter()
            .map(|c| {
                let mut v = vec![false; e];
                for &i in c {
                    v[i] ^= true;
                }
                v
            })
            .collect();
        rank_of_vectors(&vectors, e)
    }

    /// True iff the edge set is a closed embedded path: connected, and every
    /// vertex it touches has degree two in it (a loop contributes two).
    pub fn is_simple_cycle(&self, edges: &[usize]) -> bool {
        if edges.is_empty() {
            return false;
        }
        let mut seen = vec![false; self.edges.len()];
        let mut degree = vec![0usize; self.vertex_count];
        for &e in edges {
            if e >= self.edges.len() || seen[e] {
                return false;
            }
            seen[e] = true;
            degree[self.edges[e].u] += 1;
            degree[self.edges[e].v] += 1;
        }
        if degree.iter().any(|&d| d != 0 && d != 2) {
            return false;
        }
        // Connectivity restricted to touched vertices.
        let mut parent: Vec<usize> = (0..self.vertex_count).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for &e in edges {
            let (a, b) = (
                find(&mut parent, self.edges[e].u),
                find(&mut parent, self.edges[e].v),
            );
            parent[a] = b;
        }
        let touched: Vec<usize> = (0..self.vertex_count).filter(|&v| degree[v] > 0).collect();
        let root = find(&mut parent, touched[0]);
        touched.iter().all(|&v| find(&mut parent, v) == root)
    }

    /// Fundamental cycles of a BFS spanning tree, as edge-indicator vectors.
    fn fundamental_cycles(&self) -> Vec<Vec<bool>> {
        let e = self.edges.len();
        let adj = self.adjacency(&vec![true; e]);
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; self.vertex_count];
        let mut depth = vec![usize::MAX; self.vertex_count];
        let mut in_tree = vec![false; e];
        let mut queue = std::collections::VecDeque::from([0usize]);
        depth[0] = 0;
        while let Some(x) = queue.pop_front() {
            for &(y, ei) in &adj[x] {
                if depth[y] == usize::MAX {
                    depth[y] = depth[x] + 1;
                    parent[y] = Some((x, ei));
                    in_tree[ei] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..e)
            .filter(|&i| !in_tree[i])
            .map(|i| {
                let mut v = vec![false; e];
                v[i] = true;
                let (mut a, mut b) = (self.edges[i].u, self.edges[i].v);
                while a != b {
                    if depth[a] < depth[b] {
                        std::mem::swap(&mut a, &mut b);
                    }
                    let (p, pe) = parent[a].expect("non-root vertex has a parent");
                    v[pe] ^= true;
                    a = p;
                }
                v
            })
            .collect()
    }

    /// Every simple cycle, found by scanning the whole cycle space.
    /// Exponential in `b`; limited to `b ≤ ORACLE_MAX_BETTI`.
    pub fn enumerate_cycles(&self) -> Result<Vec<Cycle>> {
        let b = self.betti1();
        if b > ORACLE_MAX_BETTI {
            return Err(Error::TooLarge {
                b,
                limit: ORACLE_MAX_BETTI,
            });
        }
        let fundamental = self.fundamental_cycles();
        let e = self.edges.len();
        let mut out = Vec::new();
        for mask in 1u32..(1 << b) {
            let mut v = vec![false; e];
            for (k, f) in fundamental.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    for (x, &bit) in v.iter_mut().zip(f) {
                        *x ^= bit;
                    }
                }
            }
            let edges: Vec<usize> = (0..e).filter(|&i| v[i]).collect();
            if self.is_simple_cycle(&edges) {
                out.push(self.cycle_from_edges(edges));
            }
        }
        out.sort_by(cmp_cycles);
        Ok(out)
    }

    /// Successive-minima basis: all cycles in increasing length, each kept
    /// when it is independent of those already kept.
    pub fn min_cycle_basis(&self) -> Result<CycleBasisCertificate> {
        let b = self.betti1();
        if b == 0 {
            return Err(Error::Acyclic);
        }
        let mut kept: Vec<Cycle> = Vec::with_capacity(b);
        let mut kept_sets: Vec<Vec<usize>> = Vec::with_capacity(b);
        for c in self.enumerate_cycles()? {
            kept_sets.push(c.edges.clone());
            if self.verify_independence(&kept_sets) == kept_sets.len() {
                kept.push(c);
                if kept.len() == b {
                    break;
                }
            } else {
                kept_sets.pop();
            }
        }
        Ok(self.certificate(BasisMethod::Exhaustive, kept))
    }

    /// A random connected simple graph: a random spanning tree on `vertices`
    /// vertices plus `extra_edges` further non-loop, non-parallel edges, with
    /// lengths uniform in `[min_len, max_len)`.
    pub fn random_simple<R: Rng + ?Sized>(
        rng: &mut R,
        vertices: usize,
        extra_edges: usize,
        min_len: f64,
        max_len: f64,
    ) -> Result<Self> {
        let max_extra = vertices * vertices.saturating_sub(1) / 2 - vertices.saturating_sub(1);
        if vertices == 0 || extra_edges > max_extra {
            return Err(Error::InvalidEdge {
                index: 0,
                message: format!("cannot place {extra_edges} extra edges on {vertices} vertices"),
            });
        }
        let mut present = vec![vec![false; vertices]; vertices];
        let mut triples = Vec::new();
        let len = |rng: &mut R| rng.gen_range(min_len..max_len);
        for v in 1..vertices {
            let u = rng.gen_range(0..v);
            present[u][v] = true;
            present[v][u] = true;
            let l = len(rng);
            triples.push((u, v, l));
        }
        while triples.len() < vertices - 1 + extra_edges {
            let u = rng.gen_range(0..vertices);
            let v = rng.gen_range(0..vertices);
            if u == v || present[u][v] {
                continue;
            }
            present[u][v] = true;
            present[v][u] = true;
            let l = len(rng);
            triples.push((u.min(v), u.max(v), l));
        }
        Self::from_triples(vertices, &triples)
    }

    /// Parses `V E` followed by `E` lines `u v length`.
    pub fn from_text(input: &str) -> Result<Self> {
        let mut lines = content_lines(input);
        let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
        let h = parse_usize_fields(hl, header, 2)?;
        let (v, e) = (h[0], h[1]);
        let mut edges = Vec::with_capacity(e);
        for k in 0..e {
            let (ln, line) = lines
                .next()
                .ok_or_else(|| parse_err(hl + k + 1, format!("missing edge {}", k + 1)))?;
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 3 {
                return Err(parse_err(ln, "expected `u v length`"));
            }
            let parse_v = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| parse_err(ln, format!("invalid vertex {s:?}")))
            };
            let length = f[2]
                .parse::<f64>()
                .map_err(|_| parse_err(ln, format!("invalid length {:?}", f[2])))?;
            edges.push(Edge {
                u: parse_v(f[0])?,
                v: parse_v(f[1])?,
                length,
            });
        }
        if let Some((ln, _)) = lines.next() {
            return Err(parse_err(ln, "trailing content after edges"));
        }
        Self::new(v, edges)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.vertex_count, self.edges.len());
        for e in &self.edges {
            s.push_str(&format!("{} {} {}\n", e.u, e.v, e.length));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn theta() -> MetricGraph {
        MetricGraph::from_triples(2, &[(0, 1, 1.0), (0, 1, 1.0), (0, 1, 1.0)]).unwrap()
    }

    fn k4() -> MetricGraph {
        let mut t = Vec::new();
        for u in 0..4 {
            for v in u + 1..4 {
                t.push((u, v, 1.0));
            }
        }
        MetricGraph::from_triples(4, &t).unwrap()
    }

    fn square_heavy_diagonal() -> MetricGraph {
        MetricGraph::from_triples(
            4,
            &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 1.0), (0, 2, 10.0)],
        )
        .unwrap()
    }

    fn single_loop() -> MetricGraph {
        MetricGraph::from_triples(1, &[(0, 0, 5.0)]).unwrap()
    }

    fn path_tree() -> MetricGraph {
        MetricGraph::from_triples(3, &[(0, 1, 1.0), (1, 2, 2.0)]).unwrap()
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            MetricGraph::from_triples(3, &[(0, 1, 1.0)]).unwrap_err(),
            Error::Disconnected
        );
        assert!(matches!(
            MetricGraph::from_triples(2, &[(0, 1, 0.0)]),
            Err(Error::InvalidEdge { index: 0, .. })
        ));
        assert!(matches!(
            MetricGraph::from_triples(2, &[(0, 2, 1.0)]),
            Err(Error::InvalidEdge { .. })
        ));
    }

    #[test]
    fn betti_and_total_length() {
        assert_eq!(path_tree().betti1(), 0);
        assert_eq!(theta().betti1(), 2);
        assert_eq!(k4().betti1(), 3);
        let tri = MetricGraph::from_triples(3, &[(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)]).unwrap();
        assert_eq!(tri.total_length(), 3.0);
        assert_eq!(theta().total_length(), 3.0);
        assert_eq!(single_loop().total_length(), 5.0);
    }

    #[test]
    fn shortest_cycle_examples() {
        let tri = MetricGraph::from_triples(3, &[(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)]).unwrap();
        assert_eq!(tri.shortest_cycle().unwrap().length, 3.0);
        let t = theta().shortest_cycle().unwrap();
        assert_eq!((t.length, t.edges), (2.0, vec![0, 1]));
        assert_eq!(square_heavy_diagonal().shortest_cycle().unwrap().length, 4.0);
        assert_eq!(single_loop().shortest_cycle().unwrap().edges, vec![0]);
        assert_eq!(path_tree().shortest_cycle().unwrap_err(), Error::Acyclic);
    }

    #[test]
    fn greedy_examples() {
        let c = theta().greedy_homology_basis().unwrap();
        assert_eq!(c.lengths, vec![2.0, 2.0]);
        assert_eq!(c.product, 4.0);
        assert_eq!(c.bound, 36.0);
        assert!(c.is_basis() && c.bound_holds());

        let c = k4().greedy_homology_basis().unwrap();
        assert_eq!(c.lengths, vec![3.0, 3.0, 3.0]);
        assert_eq!(c.product, 27.0);
        assert!((c.bound - 8.0 * 3f64.log2() * 216.0).abs() < 1e-9);
        assert!((c.bound - 2738.9).abs() < 0.1);
        assert!(c.is_basis() && c.bound_holds());

        let c = single_loop().greedy_homology_basis().unwrap();
        assert_eq!((c.lengths.clone(), c.bound), (vec![5.0], 5.0));
        assert!(c.bound_holds());
        assert_eq!(path_tree().greedy_homology_basis().unwrap_err(), Error::Acyclic);
    }

    #[test]
    fn greedy_cycles_are_simple() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let g = MetricGraph::random_simple(&mut rng, 10, 6, 0.1, 10.0).unwrap();
            let c = g.greedy_homology_basis().unwrap();
            assert!(c.cycles.iter().all(|cy| g.is_simple_cycle(cy)));
        }
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(theta().min_cycle_basis().unwrap().lengths, vec![2.0, 2.0]);
        assert_eq!(k4().min_cycle_basis().unwrap().lengths, vec![3.0, 3.0, 3.0]);
        assert_eq!(
            square_heavy_diagonal().min_cycle_basis().unwrap().lengths,
            vec![4.0, 12.0]
        );
        assert_eq!(square_heavy_diagonal().enumerate_cycles().unwrap().len(), 3);
        assert_eq!(k4().enumerate_cycles().unwrap().len(), 7);
    }

    #[test]
    fn oracle_too_large() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = MetricGraph::random_simple(&mut rng, 8, 9, 1.0, 2.0).unwrap();
        assert_eq!(
            g.min_cycle_basis().unwrap_err(),
            Error::TooLarge { b: 9, limit: 8 }
        );
    }

    #[test]
    fn independence_examples() {
        let g = theta();
        assert_eq!(g.verify_independence(&[vec![0, 1], vec![1, 2]]), 2);
        assert_eq!(g.verify_independence(&[vec![0, 1], vec![0, 1]]), 1);
        assert_eq!(g.verify_independence(&[]), 0);
    }

    #[test]
    fn multigraph_with_loops() {
        let g = MetricGraph::from_triples(
            3,
            &[(0, 1, 2.0), (1, 2, 2.0), (2, 0, 2.0), (1, 1, 0.5), (0, 1, 3.0)],
        )
        .unwrap();
        assert_eq!(g.betti1(), 3);
        assert_eq!(g.shortest_cycle().unwrap().edges, vec![3]);
        let c = g.greedy_homology_basis().unwrap();
        assert!(c.is_basis());
        assert_eq!(c.sorted_lengths(), g.min_cycle_basis().unwrap().sorted_lengths());
    }

    #[test]
    fn shortest_cycle_matches_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let v = rng.gen_range(3..=7);
            let max_extra = (v * (v - 1) / 2 - (v - 1)).min(9 - (v - 1));
            let extra = rng.gen_range(1..=max_extra);
            let g = MetricGraph::random_simple(&mut rng, v, extra, 0.1, 10.0).unwrap();
            assert!(g.edges().len() <= 9);
            let best = &g.enumerate_cycles().unwrap()[0];
            assert_eq!(g.shortest_cycle().unwrap().length, best.length);
        }
    }

    #[test]
    fn text_roundtrip() {
        let g = square_heavy_diagonal();
        assert_eq!(MetricGraph::from_text(&g.to_text()).unwrap(), g);
        assert!(matches!(
            MetricGraph::from_text("2 1\n0 1 abc\n"),
            Err(Error::Parse { line: 2, .. })
        ));
    }
}
