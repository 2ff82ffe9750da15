//! Truncated cusped Cayley graphs.
//!
//! Start from the Cayley ball of radius `R` of the ambient group, then, for
//! every left coset of every peripheral subgroup meeting that ball, glue a
//! truncated combinatorial horoball over the coset: its depth-0 level is
//! identified vertex-by-vertex with the coset's subgraph (the generating set
//! is adapted, so coset subgraphs are peripheral Cayley graphs), and depths
//! `1..=N` are fresh vertices. A margin `M` widens each coset's width set by
//! `M` steps in the peripheral metric before attaching, so that geodesics
//! dipping through a horoball have room to move sideways.

use crate::caps::ResourceCaps;
use crate::error::{Error, Result};
use crate::groups::{GroupElement, GroupPair};
use crate::horoball::horizontal_range;
use crate::space::{SpaceGraph, VertexLabel};
use serde::Serialize;
use std::collections::HashMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CuspedParams {
    pub cayley_radius: u32,
    pub horoball_depth: u32,
    pub margin: u32,
}

/// A vertex of the cusped truncation, in group terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpaceVertex {
    Cayley(GroupElement),
    /// `element` is in peripheral coordinates relative to the coset's
    /// canonical representative; `depth >= 1`.
    Horoball {
        coset: usize,
        element: GroupElement,
        depth: u32,
    },
}

#[derive(Clone, Debug)]
pub struct CosetBlock {
    pub peripheral: usize,
    pub rep: GroupElement,
    /// Width set in peripheral coordinates, shortlex-sorted.
    pub width: Vec<GroupElement>,
    width_index: HashMap<GroupElement, u32>,
    base_offset: u32,
    /// Pairwise peripheral distances over the width set.
    dist: Vec<u32>,
}

impl CosetBlock {
    pub fn width_index_of(&self, q: &GroupElement) -> Option<u32> {
        self.width_index.get(q).copied()
    }

    fn distance(&self, i: u32, j: u32) -> u32 {
        self.dist[i as usize * self.width.len() + j as usize]
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CuspedSummary {
    pub cayley_vertices: usize,
    pub horoball_vertices: usize,
    pub cosets: usize,
    pub cayley_edges: usize,
    pub glue_edges: usize,
    pub horoball_edges: usize,
    pub total_vertices: usize,
    pub total_edges: usize,
}

#[derive(Clone, Debug)]
pub struct CuspedTruncation {
    pair: GroupPair,
    params: CuspedParams,
    cayley: Vec<GroupElement>,
    cayley_index: HashMap<GroupElement, u32>,
    cosets: Vec<CosetBlock>,
    coset_lookup: HashMap<(usize, GroupElement), u32>,
    graph: SpaceGraph,
    summary: CuspedSummary,
}

pub fn build_cusped(
    pair: &GroupPair,
    params: CuspedParams,
    caps: &ResourceCaps,
) -> Result<CuspedTruncation> {
    CuspedTruncation::build(pair.clone(), params, caps)
}

impl CuspedTruncation {
    pub fn build(pair: GroupPair, params: CuspedParams, caps: &ResourceCaps) -> Result<Self> {
        let ambient = pair.ambient().clone();
        if params.cayley_radius > ambient.radius_cap() {
            return Err(Error::RadiusCap {
                requested: params.cayley_radius,
                cap: ambient.radius_cap(),
            });
        }
        let cayley = ambient.ball_bounded(
            &ambient.identity(),
            params.cayley_radius,
            caps.max_vertices,
        )?;
        let cayley_index: HashMap<GroupElement, u32> = cayley
            .iter()
            .enumerate()
            .map(|(i, g)| (g.clone(), i as u32))
            .collect();

        // Group ball elements into peripheral cosets.
        let n_per = pair.peripherals().len();
        let mut coset_members: HashMap<(usize, GroupElement), Vec<GroupElement>> = HashMap::new();
        let mut coset_order: Vec<(usize, GroupElement)> = Vec::new();
        for g in &cayley {
            for p in 0..n_per {
                let rep = pair.coset_representative(p, g);
                let key = (p, rep);
                let entry = coset_members.entry(key.clone());
                match entry {
                    std::collections::hash_map::Entry::Vacant(e) => {
                        coset_order.push(key);
                        e.insert(vec![g.clone()]);
                    }
                    std::collections::hash_map::Entry::Occupied(mut e) => {
                        e.get_mut().push(g.clone());
                    }
                }
            }
        }
        coset_order.sort_by(|(pa, ra), (pb, rb)| {
            pa.cmp(pb).then_with(|| ambient.cmp_shortlex(ra, rb))
        });

        let depth = params.horoball_depth;
        let mut cosets: Vec<CosetBlock> = Vec::with_capacity(coset_order.len());
        let mut offset = cayley.len() as u32;
        for (p_idx, rep) in &coset_order {
            let per = &pair.peripherals()[*p_idx];
            let members = coset_members.remove(&(*p_idx, rep.clone())).unwrap();
            let inv_rep = ambient.invert(rep);
            let mut width: Vec<GroupElement> = members
                .iter()
                .map(|g| per.to_coords(&ambient, &ambient.multiply(&inv_rep, g)))
                .collect::<Result<_>>()?;
            // Margin expansion inside the peripheral group.
            if params.margin > 0 {
                let gens = per.model().generators();
                let mut seen: HashMap<GroupElement, ()> =
                    width.iter().map(|q| (q.clone(), ())).collect();
                let mut frontier = width.clone();
                for _ in 0..params.margin {
                    let mut next = Vec::new();
                    for q in &frontier {
                        for s in &gens {
                            let q2 = per.model().multiply(q, s);
                            if !seen.contains_key(&q2) {
                                seen.insert(q2.clone(), ());
                                next.push(q2);
                            }
                        }
                    }
                    width.extend(next.iter().cloned());
                    frontier = next;
                }
            }
            width.sort_by(|a, b| per.model().cmp_shortlex(a, b));
            width.dedup();
            let width_index: HashMap<GroupElement, u32> = width
                .iter()
                .enumerate()
                .map(|(i, q)| (q.clone(), i as u32))
                .collect();
            let n = width.len();
            let mut dist = vec![0u32; n * n];
            for i in 0..n {
                for j in (i + 1)..n {
                    let d = per.model().distance(&width[i], &width[j]) as u32;
                    dist[i * n + j] = d;
                    dist[j * n + i] = d;
                }
            }
            let block = CosetBlock {
                peripheral: *p_idx,
                rep: rep.clone(),
                width,
                width_index,
                base_offset: offset,
                dist,
            };
            offset += (block.width.len() as u32) * depth;
            cosets.push(block);
        }
        let total = offset as usize;
        caps.check_vertices(total)?;

        // Assemble edges.
        let mut adjacency: Vec<Vec<u32>> = vec![Vec::new(); total];
        let mut cayley_edges = 0usize;
        let gens = ambient.generators();
        for (i, g) in cayley.iter().enumerate() {
            for s in &gens {
                let h = ambient.multiply(g, s);
                if let Some(&j) = cayley_index.get(&h) {
                    if (i as u32) < j {
                        adjacency[i].push(j);
                        cayley_edges += 1;
                    }
                }
            }
        }
        let mut glue_edges = 0usize;
        let mut horoball_edges = 0usize;
        for block in &cosets {
            let per = &pair.peripherals()[block.peripheral];
            let n = block.width.len() as u32;
            let idx = |e: u32, d: u32| block.base_offset + e * depth + (d - 1);
            for e in 0..n {
                // Glue depth-1 down to the identified depth-0 coset vertex.
                if depth >= 1 {
                    let ambient_elem = ambient.multiply(
                        &block.rep,
                        &per.from_coords(&ambient, &block.width[e as usize]),
                    );
                    if let Some(&ci) = cayley_index.get(&ambient_elem) {
                        adjacency[ci as usize].push(idx(e, 1));
                        glue_edges += 1;
                    }
                }
                for d in 1..=depth {
                    if d < depth {
                        adjacency[idx(e, d) as usize].push(idx(e, d + 1));
                        horoball_edges += 1;
                    }
                    let range = horizontal_range(d);
                    for e2 in (e + 1)..n {
                        let gap = block.distance(e, e2) as u64;
                        if gap >= 1 && gap <= range {
                            adjacency[idx(e, d) as usize].push(idx(e2, d));
                            horoball_edges += 1;
                        }
                    }
                }
            }
        }

        // Labels and rim.
        let mut labels: Vec<VertexLabel> = Vec::with_capacity(total);
        for g in &cayley {
            labels.push(VertexLabel::Cayley { element: ambient.display(g) });
        }
        for (c, block) in cosets.iter().enumerate() {
            let per = &pair.peripherals()[block.peripheral];
            for q in &block.width {
                for d in 1..=depth {
                    labels.push(VertexLabel::Horoball {
                        coset: c as u32,
                        element: per.model().display(q),
                        depth: d,
                    });
                }
            }
        }
        debug_assert_eq!(labels.len(), total);
        let mut rim: Vec<u32> = Vec::new();
        for (i, g) in cayley.iter().enumerate() {
            if ambient.word_length(g) == params.cayley_radius as u64 {
                rim.push(i as u32);
            }
        }
        for block in &cosets {
            let per = &pair.peripherals()[block.peripheral];
            let pgens = per.model().generators();
            for (e, q) in block.width.iter().enumerate() {
                let on_boundary = pgens.iter().any(|s| {
                    !block
                        .width_index
                        .contains_key(&per.model().multiply(q, s))
                });
                for d in 1..=depth {
                    if d == depth || on_boundary {
                        rim.push(block.base_offset + e as u32 * depth + (d - 1));
                    }
                }
            }
        }

        let graph = SpaceGraph::from_adjacency(adjacency, labels, rim);
        let summary = CuspedSummary {
            cayley_vertices: cayley.len(),
            horoball_vertices: total - cayley.len(),
            cosets: cosets.len(),
            cayley_edges,
            glue_edges,
            horoball_edges,
            total_vertices: total,
            total_edges: graph.edge_count(),
        };
        let coset_lookup = cosets
            .iter()
            .enumerate()
            .map(|(i, b)| ((b.peripheral, b.rep.clone()), i as u32))
            .collect();
        Ok(CuspedTruncation {
            pair,
            params,
            cayley,
            cayley_index,
            cosets,
            coset_lookup,
            graph,
            summary,
        })
    }

    pub fn pair(&self) -> &GroupPair {
        &self.pair
    }

    pub fn params(&self) -> CuspedParams {
        self.params
    }

    pub fn graph(&self) -> &SpaceGraph {
        &self.graph
    }

    pub fn summary(&self) -> &CuspedSummary {
        &self.summary
    }

    pub fn cayley_elements(&self) -> &[GroupElement] {
        &self.cayley
    }

    pub fn cosets(&self) -> &[CosetBlock] {
        &self.cosets
    }

    pub fn coset_id(&self, peripheral: usize, rep: &GroupElement) -> Option<u32> {
        self.coset_lookup.get(&(peripheral, rep.clone())).copied()
    }

    pub fn vertex_index(&self, v: &SpaceVertex) -> Option<u32> {
        match v {
            SpaceVertex::Cayley(g) => self.cayley_index.get(g).copied(),
            SpaceVertex::Horoball { coset, element, depth } => {
                if *depth == 0 || *depth > self.params.horoball_depth {
                    return None;
                }
                let block = self.cosets.get(*coset)?;
                let e = block.width_index_of(element)?;
                Some(block.base_offset + e * self.params.horoball_depth + (depth - 1))
            }
        }
    }

    pub fn describe(&self, idx: u32) -> SpaceVertex {
        let nc = self.cayley.len() as u32;
        if idx < nc {
            return SpaceVertex::Cayley(self.cayley[idx as usize].clone());
        }
        // Coset blocks are contiguous and ordered by base_offset.
        let c = self
            .cosets
            .partition_point(|b| b.base_offset <= idx)
            .saturating_sub(1);
        let block = &self.cosets[c];
        let rel = idx - block.base_offset;
        let e = rel / self.params.horoball_depth;
        let d = rel % self.params.horoball_depth + 1;
        SpaceVertex::Horoball {
            coset: c,
            element: block.width[e as usize].clone(),
            depth: d,
        }
    }

    pub fn distance(&self, u: u32, v: u32) -> u32 {
        self.graph.distance(u, v)
    }

    pub fn extract_geodesic(&self, u: u32, v: u32) -> Vec<u32> {
        self.graph.geodesic(u, v)
    }

    /// Partial left action of the ambient group on the truncation. `None`
    /// when the image leaves the truncation.
    pub fn act(&self, g: &GroupElement, idx: u32) -> Option<u32> {
        let ambient = self.pair.ambient();
        match self.describe(idx) {
            SpaceVertex::Cayley(x) => {
                let y = ambient.multiply(g, &x);
                self.cayley_index.get(&y).copied()
            }
            SpaceVertex::Horoball { coset, element, depth } => {
                let block = &self.cosets[coset];
                let per = &self.pair.peripherals()[block.peripheral];
                let x = ambient.multiply(&block.rep, &per.from_coords(ambient, &element));
                let y = ambient.multiply(g, &x);
                let rep2 = self.pair.coset_representative(block.peripheral, &y);
                let c2 = self.coset_id(block.peripheral, &rep2)?;
                let q2 = per
                    .to_coords(ambient, &ambient.multiply(&ambient.invert(&rep2), &y))
                    .ok()?;
                self.vertex_index(&SpaceVertex::Horoball {
                    coset: c2 as usize,
                    element: q2,
                    depth,
                })
            }
        }
    }
}
