//! Reduction of an arbitrary glued instance to one where every block is
//! independent in the host, the host is 2-regular, and the blocks
//! partition the vertex set.
//!
//! The three steps, in order:
//! 1. drop every red edge lying inside a block (the blue K4 restores it);
//! 2. close every path component into an even cycle (one new vertex for an
//!    odd path, two adjacent new vertices for an even path) and every
//!    isolated vertex into a triangle with two new vertices;
//! 3. take the subgraph `J` induced by the vertices outside all blocks, pad
//!    it with the fewest triangles making it at least 12 vertices and a
//!    multiple of 4, equitably colour it with `|V|/4` classes, and glue a
//!    new block onto every class.
//!
//! Original vertices keep their ids; new vertices are numbered from the
//! original `n` in creation order. Each step only adds vertices, adds edges,
//! or removes red edges already covered by blue ones, so the original simple
//! view is a subgraph of the result and proper colourings pull back.

use crate::graph::{
    build_host, glue_blocks, BlockSet, GluedInstance, PartialColoring, SimpleGraph, Strand,
    VertexId,
};
use crate::oracles::{exact_equitable_coloring, Budget, OracleError};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NormalizationStats {
    pub removed_block_edges: usize,
    pub closure_vertices: usize,
    pub padding_triangles: usize,
    pub new_blocks: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedInstance {
    pub instance: GluedInstance,
    /// `origin_map[v]` is the normalized id of original vertex `v`.
    pub origin_map: Vec<VertexId>,
    pub stats: NormalizationStats,
}

impl NormalizedInstance {
    pub fn original_n(&self) -> usize {
        self.origin_map.len()
    }

    /// Checks the three normal-form properties.
    pub fn check_invariants(&self) -> Result<(), String> {
        let inst = &self.instance;
        for &(u, v) in inst.host().edges() {
            if inst.block_of(u).is_some() && inst.block_of(u) == inst.block_of(v) {
                return Err(format!("red edge {u}-{v} inside a block"));
            }
        }
        if let Some(v) = (0..inst.n()).find(|&v| inst.host().degree(v) != 2) {
            return Err(format!("vertex {v} has red degree {}", inst.host().degree(v)));
        }
        if let Some(v) = (0..inst.n()).find(|&v| inst.block_of(v).is_none()) {
            return Err(format!("vertex {v} is in no block"));
        }
        Ok(())
    }
}

/// Fewest padding triangles `t` with `m + 3t >= 12` and `4 | m + 3t`.
pub fn padding_triangles(m: usize) -> usize {
    (0..)
        .find(|&t| m + 3 * t >= 12 && (m + 3 * t) % 4 == 0)
        .expect("3 and 4 are coprime")
}

pub fn normalize(instance: &GluedInstance, budget: Budget) -> Result<NormalizedInstance, OracleError> {
    let n0 = instance.n();
    let mut stats = NormalizationStats::default();

    // step 1
    let mut edges: Vec<(VertexId, VertexId)> = Vec::with_capacity(instance.host().edges().len());
    for &(u, v) in instance.host().edges() {
        if instance.block_of(u).is_some() && instance.block_of(u) == instance.block_of(v) {
            stats.removed_block_edges += 1;
        } else {
            edges.push((u, v));
        }
    }
    let stripped = build_host(n0, &edges).expect("subgraph of a valid host");

    // step 2
    let mut n = n0;
    for strand in crate::graph::strands(&adjacency(&stripped)) {
        match strand {
            Strand::Cycle(_) => {}
            Strand::Isolate(v) => {
                let (a, b) = (n, n + 1);
                n += 2;
                edges.extend([(v, a), (a, b), (b, v)]);
            }
            Strand::Path(p) => {
                let (first, last) = (p[0], *p.last().expect("non-empty path"));
                if p.len() % 2 == 1 {
                    let a = n;
                    n += 1;
                    edges.extend([(first, a), (a, last)]);
                } else {
                    let (a, b) = (n, n + 1);
                    n += 2;
                    edges.extend([(first, a), (a, b), (b, last)]);
                }
            }
        }
    }
    stats.closure_vertices = n - n0;

    // step 3
    let mut blocks = instance.blocks().as_sets();
    let uncovered: Vec<VertexId> = (0..n)
        .filter(|&v| v >= n0 || instance.block_of(v).is_none())
        .collect();
    if !uncovered.is_empty() {
        let closed = build_host(n, &edges).expect("closure keeps red degree at most 2");
        let j = closed.as_simple().induced(&uncovered);
        let t = padding_triangles(uncovered.len());
        stats.padding_triangles = t;
        let mut local_to_global = uncovered.clone();
        let mut padded = j;
        for _ in 0..t {
            let base = padded.n();
            let global = n;
            n += 3;
            for i in 0..3 {
                padded.add_vertex();
                local_to_global.push(global + i);
            }
            for (a, b) in [(0, 1), (1, 2), (0, 2)] {
                padded.add_edge(base + a, base + b);
                edges.push((global + a, global + b));
            }
        }
        let k = padded.n() / 4;
        let coloring = exact_equitable_coloring(&padded, k, budget)?;
        for class in coloring.classes() {
            debug_assert_eq!(class.len(), 4);
            blocks.push(class.iter().map(|&i| local_to_global[i]).collect());
        }
        stats.new_blocks = k;
    }

    let host = build_host(n, &edges).expect("normalized host is valid");
    let blocks = BlockSet::new(blocks).expect("equitable classes are disjoint 4-sets");
    let normalized = glue_blocks(host, blocks).expect("blocks lie in range");
    Ok(NormalizedInstance {
        instance: normalized,
        origin_map: (0..n0).collect(),
        stats,
    })
}

fn adjacency(host: &crate::graph::HostGraph) -> Vec<Vec<VertexId>> {
    (0..host.n()).map(|v| host.neighbors(v).to_vec()).collect()
}

/// Restricts a colouring of the normalized instance to the original
/// vertices. `Z` of the result is the preimage of the normalized `Z`.
pub fn pull_back_coloring(coloring: &PartialColoring, origin_map: &[VertexId]) -> PartialColoring {
    PartialColoring::from_colors(origin_map.iter().map(|&w| coloring.color(w)).collect())
}

/// Every edge of the original simple view survives under `origin_map`.
pub fn embeds_as_subgraph(original: &SimpleGraph, normalized: &SimpleGraph, origin_map: &[VertexId]) -> bool {
    original
        .edges()
        .into_iter()
        .all(|(u, v)| normalized.has_edge(origin_map[u], origin_map[v]))
}

/// Stronger form: non-edges survive too. Holds whenever the original blocks
/// already covered every vertex, since then no new block touches an
/// original vertex.
pub fn embeds_as_induced(original: &SimpleGraph, normalized: &SimpleGraph, origin_map: &[VertexId]) -> bool {
    let n = original.n();
    (0..n).all(|u| {
        (u + 1..n).all(|v| original.has_edge(u, v) == normalized.has_edge(origin_map[u], origin_map[v]))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_host, decompose};

    fn glued(n: usize, edges: &[(usize, usize)], blocks: Vec<Vec<usize>>) -> GluedInstance {
        glue_blocks(build_host(n, edges).unwrap(), BlockSet::new(blocks).unwrap()).unwrap()
    }

    #[test]
    fn padding_is_minimal() {
        assert_eq!(padding_triangles(0), 4);
        assert_eq!(padding_triangles(4), 4);
        assert_eq!(padding_triangles(12), 0);
        assert_eq!(padding_triangles(13), 1);
        assert_eq!(padding_triangles(14), 2);
        assert_eq!(padding_triangles(15), 3);
        assert_eq!(padding_triangles(1), 5);
    }

    #[test]
    fn normalized_input_is_left_alone() {
        // C8 with two independent blocks
        let edges: Vec<_> = (0..8).map(|i| (i, (i + 1) % 8)).collect();
        let inst = glued(8, &edges, vec![vec![0, 2, 4, 6], vec![1, 3, 5, 7]]);
        let norm = normalize(&inst, Budget::default()).unwrap();
        assert_eq!(norm.instance, inst);
        assert_eq!(norm.origin_map, (0..8).collect::<Vec<_>>());
        norm.check_invariants().unwrap();
    }

    #[test]
    fn three_vertex_path_closes_into_c4_then_pads() {
        let inst = glued(3, &[(0, 1), (1, 2)], vec![]);
        let norm = normalize(&inst, Budget::default()).unwrap();
        norm.check_invariants().unwrap();
        assert_eq!(norm.stats.closure_vertices, 1);
        // J = C4 on {0,1,2,3}; 4 + 3t >= 12 and divisible by 4 -> t = 4
        assert_eq!(norm.stats.padding_triangles, 4);
        assert_eq!(norm.stats.new_blocks, 4);
        assert_eq!(norm.instance.n(), 16);
        let d = decompose(norm.instance.host());
        assert_eq!(d.even_cycles, vec![vec![0, 1, 2, 3]]);
        assert_eq!(d.triangles.len(), 4);
    }

    #[test]
    fn four_triangles_use_three_equitable_classes() {
        let mut edges = Vec::new();
        for t in 0..4 {
            let b = 3 * t;
            edges.extend([(b, b + 1), (b + 1, b + 2), (b, b + 2)]);
        }
        let inst = glued(12, &edges, vec![]);
        let norm = normalize(&inst, Budget::default()).unwrap();
        norm.check_invariants().unwrap();
        assert_eq!(norm.stats.padding_triangles, 0);
        assert_eq!(norm.instance.n(), 12);
        assert_eq!(norm.instance.blocks().len(), 3);
    }

    #[test]
    fn isolates_become_triangles_and_even_paths_even_cycles() {
        // isolate 0, path 1-2 (even), path 3-4-5 (odd), block on 6..9 with a red edge inside
        let inst = glued(10, &[(1, 2), (3, 4), (4, 5), (6, 7)], vec![vec![6, 7, 8, 9]]);
        let norm = normalize(&inst, Budget::default()).unwrap();
        norm.check_invariants().unwrap();
        assert_eq!(norm.stats.removed_block_edges, 1);
        let d = decompose(norm.instance.host());
        assert!(d.long_odd.is_empty());
        // isolate 0 and block vertices 6..9 become triangles; 1-2 -> C4; 3-4-5 -> C4
        assert!(d.triangles.iter().any(|t| t[0] == 0));
        assert!(d.even_cycles.iter().any(|c| c.contains(&1) && c.len() == 4));
        assert!(d.even_cycles.iter().any(|c| c.contains(&3) && c.len() == 4));
        assert!(embeds_as_subgraph(
            &inst.simple_view(),
            &norm.instance.simple_view(),
            &norm.origin_map
        ));
    }

    #[test]
    fn long_odd_cycles_never_increase() {
        // C5 0..4 split by a block edge 0-1, plus C7 5..11
        let mut edges: Vec<_> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
        edges.extend((0..7).map(|i| (5 + i, 5 + (i + 1) % 7)));
        let inst = glued(12, &edges, vec![vec![0, 1, 6, 9]]);
        let before = decompose(inst.host()).long_odd.len();
        let norm = normalize(&inst, Budget::default()).unwrap();
        let after = decompose(norm.instance.host()).long_odd.len();
        assert_eq!(before, 2);
        assert_eq!(after, 1);
    }

    #[test]
    fn pull_back_drops_padding() {
        let mut c = PartialColoring::uncolored(6);
        for v in 0..4 {
            c.set(v, (v % 4 + 1) as u8);
        }
        let back = pull_back_coloring(&c, &[0, 1, 2, 3]);
        assert!(back.is_full());
        assert_eq!(back.colors(), &[Some(1), Some(2), Some(3), Some(4)]);
    }
}
