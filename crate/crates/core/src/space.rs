//! Finite labeled graphs with an exact-geodesic BFS engine.
//!
//! Every space the library analyses — Cayley balls, horoball truncations,
//! cusped truncations, and the small synthetic graphs used in tests — is
//! materialized (or viewed) as a `SpaceGraph`: a symmetric CSR adjacency
//! structure with per-vertex labels.

use crate::groups::GroupModel;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::VecDeque;

pub const UNREACHED: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VertexLabel {
    Cayley { element: String },
    Horoball { coset: u32, element: String, depth: u32 },
    Plain { name: String },
}

impl VertexLabel {
    /// `kind/element/depth` form used by the exporters.
    pub fn display(&self) -> String {
        match self {
            VertexLabel::Cayley { element } => format!("cayley/{element}/0"),
            VertexLabel::Horoball { coset, element, depth } => {
                format!("horoball{coset}/{element}/{depth}")
            }
            VertexLabel::Plain { name } => format!("plain/{name}/0"),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            VertexLabel::Cayley { .. } => "cayley",
            VertexLabel::Horoball { .. } => "horoball",
            VertexLabel::Plain { .. } => "plain",
        }
    }

    pub fn element_str(&self) -> &str {
        match self {
            VertexLabel::Cayley { element } => element,
            VertexLabel::Horoball { element, .. } => element,
            VertexLabel::Plain { name } => name,
        }
    }

    pub fn depth(&self) -> u32 {
        match self {
            VertexLabel::Horoball { depth, .. } => *depth,
            _ => 0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SpaceGraph {
    offsets: Vec<u32>,
    targets: Vec<u32>,
    labels: Vec<VertexLabel>,
    /// Vertices on the truncation boundary (may be empty for closed graphs).
    rim: Vec<u32>,
}

impl SpaceGraph {
    /// Build from adjacency lists; lists are sorted and deduplicated, and
    /// symmetry is enforced.
    pub fn from_adjacency(
        mut adjacency: Vec<Vec<u32>>,
        labels: Vec<VertexLabel>,
        rim: Vec<u32>,
    ) -> Self {
        assert_eq!(adjacency.len(), labels.len());
        let n = adjacency.len();
        // Symmetrize.
        let snapshot: Vec<Vec<u32>> = adjacency.clone();
        for (u, nbrs) in snapshot.iter().enumerate() {
            for &v in nbrs {
                adjacency[v as usize].push(u as u32);
            }
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for (u, list) in adjacency.iter_mut().enumerate() {
            list.sort_unstable();
            list.dedup();
            list.retain(|&v| v as usize != u);
            targets.extend_from_slice(list);
            offsets.push(targets.len() as u32);
        }
        SpaceGraph { offsets, targets, labels, rim }
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        let a = self.offsets[v as usize] as usize;
        let b = self.offsets[v as usize + 1] as usize;
        &self.targets[a..b]
    }

    pub fn label(&self, v: u32) -> &VertexLabel {
        &self.labels[v as usize]
    }

    pub fn labels(&self) -> &[VertexLabel] {
        &self.labels
    }

    pub fn rim(&self) -> &[u32] {
        &self.rim
    }

    /// Undirected edges `(u, v)` with `u < v`, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.vertex_count() as u32).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    pub fn bfs(&self, src: u32) -> Vec<u32> {
        self.bfs_multi(std::slice::from_ref(&src))
    }

    /// Distance to the nearest of `srcs` (multi-source BFS).
    pub fn bfs_multi(&self, srcs: &[u32]) -> Vec<u32> {
        let n = self.vertex_count();
        let mut dist = vec![UNREACHED; n];
        let mut queue = VecDeque::with_capacity(n.min(1024));
        for &s in srcs {
            if dist[s as usize] == UNREACHED {
                dist[s as usize] = 0;
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            let du = dist[u as usize];
            for &v in self.neighbors(u) {
                if dist[v as usize] == UNREACHED {
                    dist[v as usize] = du + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn distance(&self, u: u32, v: u32) -> u32 {
        self.bfs(u)[v as usize]
    }

    /// All-pairs distance matrix, row-parallel.
    pub fn all_pairs(&self) -> DistanceMatrix {
        let n = self.vertex_count();
        let rows: Vec<Vec<u32>> = (0..n as u32).into_par_iter().map(|s| self.bfs(s)).collect();
        let mut d = Vec::with_capacity(n * n);
        for row in rows {
            d.extend(row);
        }
        DistanceMatrix { n, d }
    }

    /// A shortest path from `u` to `v`, deterministic: backtracking from `v`
    /// picks the smallest-index predecessor at each step.
    pub fn geodesic(&self, u: u32, v: u32) -> Vec<u32> {
        let dist = self.bfs(u);
        self.geodesic_from_dist(&dist, v)
    }

    /// As `geodesic`, reusing a distance array computed from the source.
    pub fn geodesic_from_dist(&self, dist_from_u: &[u32], v: u32) -> Vec<u32> {
        let d = dist_from_u[v as usize];
        assert_ne!(d, UNREACHED, "geodesic endpoints must be connected");
        let mut path = Vec::with_capacity(d as usize + 1);
        path.push(v);
        let mut cur = v;
        for step in (0..d).rev() {
            let pred = self
                .neighbors(cur)
                .iter()
                .copied()
                .filter(|&w| dist_from_u[w as usize] == step)
                .min()
                .expect("BFS predecessor exists");
            path.push(pred);
            cur = pred;
        }
        path.reverse();
        path
    }

    // ---- small synthetic graphs --------------------------------------

    pub fn cycle(n: usize) -> Self {
        let adjacency: Vec<Vec<u32>> = (0..n)
            .map(|i| vec![((i + 1) % n) as u32])
            .collect();
        let labels = (0..n)
            .map(|i| VertexLabel::Plain { name: format!("v{i}") })
            .collect();
        SpaceGraph::from_adjacency(adjacency, labels, Vec::new())
    }

    pub fn path(n: usize) -> Self {
        let adjacency: Vec<Vec<u32>> = (0..n)
            .map(|i| if i + 1 < n { vec![(i + 1) as u32] } else { vec![] })
            .collect();
        let labels = (0..n)
            .map(|i| VertexLabel::Plain { name: format!("v{i}") })
            .collect();
        let rim = if n == 0 {
            Vec::new()
        } else {
            vec![0, (n - 1) as u32]
        };
        SpaceGraph::from_adjacency(adjacency, labels, rim)
    }

    /// A tripod: `legs` rays of length `len` glued at a center vertex 0.
    pub fn tripod(legs: usize, len: usize) -> Self {
        let n = 1 + legs * len;
        let mut adjacency: Vec<Vec<u32>> = vec![Vec::new(); n];
        for l in 0..legs {
            let mut prev = 0u32;
            for k in 0..len {
                let v = (1 + l * len + k) as u32;
                adjacency[prev as usize].push(v);
                prev = v;
            }
        }
        let labels = (0..n)
            .map(|i| VertexLabel::Plain { name: format!("v{i}") })
            .collect();
        SpaceGraph::from_adjacency(adjacency, labels, Vec::new())
    }

    /// The Cayley ball of radius `r` about the identity, with exact edges.
    /// Returns the graph and the elements in vertex order (shortlex).
    pub fn cayley_ball(
        model: &GroupModel,
        radius: u32,
    ) -> crate::Result<(Self, Vec<crate::groups::GroupElement>)> {
        let ball = model.ball(&model.identity(), radius)?;
        let index: std::collections::HashMap<_, u32> = ball
            .iter()
            .enumerate()
            .map(|(i, g)| (g.clone(), i as u32))
            .collect();
        let gens = model.generators();
        let mut adjacency: Vec<Vec<u32>> = vec![Vec::new(); ball.len()];
        for (i, g) in ball.iter().enumerate() {
            for s in &gens {
                let h = model.multiply(g, s);
                if let Some(&j) = index.get(&h) {
                    if (i as u32) < j {
                        adjacency[i].push(j);
                    }
                }
            }
        }
        let labels = ball
            .iter()
            .map(|g| VertexLabel::Cayley { element: model.display(g) })
            .collect();
        let rim = ball
            .iter()
            .enumerate()
            .filter(|(_, g)| model.word_length(g) == radius as u64)
            .map(|(i, _)| i as u32)
            .collect();
        Ok((SpaceGraph::from_adjacency(adjacency, labels, rim), ball))
    }
}

/// Flat `n x n` distance matrix.
pub struct DistanceMatrix {
    n: usize,
    d: Vec<u32>,
}

impl DistanceMatrix {
    pub fn get(&self, i: u32, j: u32) -> u32 {
        self.d[i as usize * self.n + j as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_distances() {
        let c4 = SpaceGraph::cycle(4);
        assert_eq!(c4.distance(0, 2), 2);
        assert_eq!(c4.distance(1, 3), 2);
        assert_eq!(c4.distance(0, 3), 1);
        assert_eq!(c4.edge_count(), 4);
    }

    #[test]
    fn geodesic_is_shortest_and_deterministic() {
        let c4 = SpaceGraph::cycle(4);
        let p = c4.geodesic(1, 3);
        assert_eq!(p.len(), 3);
        // Predecessor tie 0 vs 2 resolves to 0.
        assert_eq!(p, vec![1, 0, 3]);
        let single = c4.geodesic(2, 2);
        assert_eq!(single, vec![2]);
    }

    #[test]
    fn cayley_ball_of_free_group_is_a_tree() {
        let f2 = GroupModel::free(2).unwrap();
        let (g, ball) = SpaceGraph::cayley_ball(&f2, 3).unwrap();
        assert_eq!(ball.len(), 1 + 4 + 12 + 36);
        assert_eq!(g.edge_count(), g.vertex_count() - 1);
    }
}
