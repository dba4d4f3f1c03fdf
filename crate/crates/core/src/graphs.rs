//! Simple undirected graphs: complements, components, degeneracy peeling,
//! family classification and the forbidden-subgraph scan for contact graphs.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Undirected simple graph on nodes `0..n` with sorted neighbor sets.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graph {
    adj: Vec<BTreeSet<usize>>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![BTreeSet::new(); n],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for i in 0..n {
            for j in (i + 1)..n {
                g.insert_edge(i, j);
            }
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n);
        for &(i, j) in edges {
            g.add_edge(i, j)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, i: usize, j: usize) -> Result<()> {
        let n = self.node_count();
        if i >= n || j >= n {
            return Err(Error::Parameter(format!(
                "edge ({i},{j}) out of range for {n} nodes"
            )));
        }
        if i == j {
            return Err(Error::Parameter(format!("self-loop at node {i}")));
        }
        self.insert_edge(i, j);
        Ok(())
    }

    fn insert_edge(&mut self, i: usize, j: usize) {
        self.adj[i].insert(j);
        self.adj[j].insert(i);
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj.get(i).is_some_and(|s| s.contains(&j))
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(BTreeSet::len).max().unwrap_or(0)
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[i].iter().copied()
    }

    /// Edges `(i, j)` with `i < j` in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(i, s)| s.range((i + 1)..).map(move |&j| (i, j)))
            .collect()
    }

    /// Subgraph induced by `nodes`, relabelled `0..nodes.len()` in the given order.
    pub fn induced_subgraph(&self, nodes: &[usize]) -> Graph {
        let mut g = Graph::empty(nodes.len());
        for (a, &u) in nodes.iter().enumerate() {
            for (b, &v) in nodes.iter().enumerate().skip(a + 1) {
                if self.has_edge(u, v) {
                    g.insert_edge(a, b);
                }
            }
        }
        g
    }

    pub fn is_connected(&self) -> bool {
        connected_components(self).len() <= 1
    }
}

pub fn complement(g: &Graph) -> Graph {
    let n = g.node_count();
    let mut h = Graph::empty(n);
    for i in 0..n {
        for j in (i + 1)..n {
            if !g.has_edge(i, j) {
                h.insert_edge(i, j);
            }
        }
    }
    h
}

/// Components as sorted node lists, ordered by their smallest node.
pub fn connected_components(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.node_count();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for v in g.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    comp.push(v);
                    queue.push_back(v);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Result of peeling nodes of degree at most `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Degeneracy {
    /// Each node has at most `k` neighbors among itself and later nodes.
    Ordering(Vec<usize>),
    /// Remaining nodes once peeling got stuck; every node there has degree > k.
    Stuck(Vec<usize>),
}

impl Degeneracy {
    pub fn ordering(&self) -> Option<&[usize]> {
        match self {
            Degeneracy::Ordering(o) => Some(o),
            Degeneracy::Stuck(_) => None,
        }
    }
}

/// Repeatedly removes the smallest-index node of remaining degree ≤ `k`.
pub fn degeneracy_ordering(g: &Graph, k: usize) -> Degeneracy {
    let n = g.node_count();
    let mut alive = vec![true; n];
    let mut deg: Vec<usize> = (0..n).map(|i| g.degree(i)).collect();
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let Some(v) = (0..n).find(|&v| alive[v] && deg[v] <= k) else {
            return Degeneracy::Stuck((0..n).filter(|&v| alive[v]).collect());
        };
        alive[v] = false;
        order.push(v);
        for u in g.neighbors(v) {
            if alive[u] {
                deg[u] -= 1;
            }
        }
    }
    Degeneracy::Ordering(order)
}

/// The graph families distinguished by the main corank bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyClass {
    Path,
    UnionOfPaths,
    Cycle,
    Other,
}

impl FamilyClass {
    /// Paths, unions of paths and cycles admit corank `n - 3`; everything else `n - 4`.
    pub fn corank_deficit(self) -> usize {
        match self {
            FamilyClass::Path | FamilyClass::UnionOfPaths | FamilyClass::Cycle => 3,
            FamilyClass::Other => 4,
        }
    }
}

fn is_path_component(g: &Graph, comp: &[usize]) -> bool {
    let edges: usize = comp.iter().map(|&v| g.degree(v)).sum::<usize>() / 2;
    edges + 1 == comp.len() && comp.iter().all(|&v| g.degree(v) <= 2)
}

pub fn classify_family(g: &Graph) -> FamilyClass {
    let comps = connected_components(g);
    if comps.len() == 1 {
        let comp = &comps[0];
        if is_path_component(g, comp) {
            return FamilyClass::Path;
        }
        if comp.len() >= 3 && comp.iter().all(|&v| g.degree(v) == 2) {
            return FamilyClass::Cycle;
        }
        return FamilyClass::Other;
    }
    if comps.len() >= 2 && comps.iter().all(|c| is_path_component(g, c)) {
        return FamilyClass::UnionOfPaths;
    }
    FamilyClass::Other
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ForbiddenFlags {
    pub has_k4: bool,
    pub has_k23: bool,
    pub maxdeg_exceeds_6: bool,
}

impl ForbiddenFlags {
    pub fn any(&self) -> bool {
        self.has_k4 || self.has_k23 || self.maxdeg_exceeds_6
    }
}

/// Exhaustive scan for K4 and K2,3 subgraphs (not necessarily induced) and degree > 6.
///
/// K4 is searched as an edge plus an edge among its common neighbors; K2,3 as
/// a node pair with three common neighbors. Both enumerate every candidate.
pub fn forbidden_subgraph_check(g: &Graph) -> ForbiddenFlags {
    let n = g.node_count();
    let mut flags = ForbiddenFlags {
        maxdeg_exceeds_6: g.max_degree() > 6,
        ..Default::default()
    };
    for a in 0..n {
        for b in (a + 1)..n {
            let common: Vec<usize> = g.adj[a].intersection(&g.adj[b]).copied().collect();
            if common.len() >= 3 {
                flags.has_k23 = true;
            }
            if g.has_edge(a, b) && !flags.has_k4 {
                flags.has_k4 = common
                    .iter()
                    .enumerate()
                    .any(|(x, &u)| common[x + 1..].iter().any(|&v| g.has_edge(u, v)));
            }
            if flags.has_k4 && flags.has_k23 {
                return flags;
            }
        }
    }
    flags
}
