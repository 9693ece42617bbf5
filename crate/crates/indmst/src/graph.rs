//! Undirected weighted multigraphs, union-find, and the graphic matroid
//! (independent = forms a forest). Self-loops and parallel edges are legal
//! input; a self-loop is a dependent singleton and never enters a forest.

use crate::error::{Error, Result};
use crate::matroid::{ElementId, ElementSet, Instance, MatroidOracle, Weight};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: Weight,
    pub existing: bool,
}

impl Edge {
    pub fn new(u: usize, v: usize, weight: Weight, existing: bool) -> Self {
        Edge {
            u,
            v,
            weight,
            existing,
        }
    }
}

/// Edge-indexed multigraph; the edge index doubles as the matroid element id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
}

impl Graph {
    pub fn new(n: usize, edges: Vec<Edge>) -> Result<Self> {
        for (i, e) in edges.iter().enumerate() {
            if e.u >= n || e.v >= n {
                return Err(Error::InvalidParams(format!(
                    "edge {i} touches vertex outside 0..{n}"
                )));
            }
        }
        Ok(Graph { n, edges })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: ElementId) -> &Edge {
        &self.edges[e]
    }

    pub fn weights(&self) -> Vec<Weight> {
        self.edges.iter().map(|e| e.weight).collect()
    }

    pub fn existing_flags(&self) -> Vec<bool> {
        self.edges.iter().map(|e| e.existing).collect()
    }

    /// Number of potential edges (the plan length T).
    pub fn horizon(&self) -> usize {
        self.edges.iter().filter(|e| !e.existing).count()
    }

    pub fn oracle(&self) -> GraphicOracle {
        GraphicOracle {
            n: self.n,
            endpoints: self.edges.iter().map(|e| (e.u as u32, e.v as u32)).collect(),
        }
    }

    /// Bundles the graphic oracle with weights and existing flags for the
    /// oracle-driven solvers.
    pub fn instance(&self) -> Instance<GraphicOracle> {
        Instance::new(self.oracle(), self.weights(), self.existing_flags())
            .expect("graph fields are consistent by construction")
    }
}

/// Disjoint-set forest with path halving and union by rank.
pub struct UnionFind {
    parent: Vec<u32>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
            rank: vec![0; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let grand = self.parent[self.parent[x] as usize];
            self.parent[x] = grand;
            x = grand as usize;
        }
        x
    }

    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    /// Merges the sets holding `a` and `b`; false if already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (hi, lo) = if self.rank[ra] >= self.rank[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[lo] = hi as u32;
        if self.rank[hi] == self.rank[lo] {
            self.rank[hi] += 1;
        }
        true
    }
}

/// Graphic-matroid independence oracle: a set of edges is independent when
/// it contains no cycle. Rebuilds union-find per query; the solvers' fast
/// path bypasses this with incremental structures.
#[derive(Clone, Debug)]
pub struct GraphicOracle {
    n: usize,
    endpoints: Vec<(u32, u32)>,
}

impl GraphicOracle {
    pub fn endpoints(&self, e: ElementId) -> (usize, usize) {
        let (u, v) = self.endpoints[e];
        (u as usize, v as usize)
    }
}

impl MatroidOracle for GraphicOracle {
    fn ground_size(&self) -> usize {
        self.endpoints.len()
    }

    fn is_independent(&self, set: &ElementSet) -> bool {
        let mut uf = UnionFind::new(self.n);
        for e in set.iter() {
            let (u, v) = self.endpoints[e];
            if u == v || !uf.union(u as usize, v as usize) {
                return false;
            }
        }
        true
    }
}

/// The cycle closed by adding edge `e` to `forest`: the tree path between
/// the endpoints of `e`, plus `e` itself. Runs one DFS over the forest.
pub fn cycle_through(g: &Graph, forest: &ElementSet, e: ElementId) -> Result<ElementSet> {
    let edge = g.edge(e);
    let mut cycle = ElementSet::empty(g.edge_count());
    cycle.insert(e);
    if edge.u == edge.v {
        return Ok(cycle);
    }

    let mut adj: Vec<Vec<(usize, ElementId)>> = vec![Vec::new(); g.n];
    for f in forest.iter() {
        if f == e {
            continue;
        }
        let fe = g.edge(f);
        adj[fe.u].push((fe.v, f));
        adj[fe.v].push((fe.u, f));
    }

    let mut prev: Vec<Option<(usize, ElementId)>> = vec![None; g.n];
    let mut seen = vec![false; g.n];
    let mut stack = vec![edge.u];
    seen[edge.u] = true;
    while let Some(at) = stack.pop() {
        if at == edge.v {
            break;
        }
        for &(to, via) in &adj[at] {
            if !seen[to] {
                seen[to] = true;
                prev[to] = Some((at, via));
                stack.push(to);
            }
        }
    }
    if !seen[edge.v] {
        return Err(Error::PreconditionViolated(
            "cycle_through endpoints are not connected in the forest",
        ));
    }
    let mut at = edge.v;
    while at != edge.u {
        let (back, via) = prev[at].expect("walk stays on discovered vertices");
        cycle.insert(via);
        at = back;
    }
    Ok(cycle)
}

/// Checks that the existing edges connect all vertices and that weight sums
/// stay inside exact 64-bit range.
pub fn validate_instance(g: &Graph) -> Result<()> {
    let total: i128 = g.edges.iter().map(|e| e.weight.unsigned_abs() as i128).sum();
    if total * (g.edge_count() as i128 + 1) > i64::MAX as i128 {
        return Err(Error::OverflowRisk);
    }
    let mut uf = UnionFind::new(g.n);
    let mut components = g.n;
    for e in &g.edges {
        if e.existing && e.u != e.v && uf.union(e.u, e.v) {
            components -= 1;
        }
    }
    if components != 1 {
        return Err(Error::InfeasibleInstance { components });
    }
    Ok(())
}
