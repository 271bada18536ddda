//! Vertex/edge model: the red host graph, the glued blue blocks, the simple
//! view of their union, and the three-colour layered multigraph used by the
//! two-ISR placement.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Dense vertex index in `0..n`.
pub type VertexId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: VertexId, n: usize },
    #[error("loop edge at vertex {0}")]
    LoopEdge(VertexId),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(VertexId, VertexId),
    #[error("vertex {vertex} has red degree {degree}, at most 2 allowed")]
    DegreeViolation { vertex: VertexId, degree: usize },
    #[error("block {index} has {len} distinct vertices, expected 4")]
    BlockSizeNot4 { index: usize, len: usize },
    #[error("vertex {0} lies in more than one block")]
    OverlappingBlocks(VertexId),
    #[error("vertex {0} lies in more than one indexed set")]
    OverlappingSets(VertexId),
    #[error("set index {index} out of range for a family of {len} sets")]
    IndexOutOfRange { index: usize, len: usize },
}

fn ordered(u: VertexId, v: VertexId) -> (VertexId, VertexId) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// A simple undirected graph with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SimpleGraph {
    adj: Vec<Vec<VertexId>>,
}

impl SimpleGraph {
    pub fn new(n: usize) -> Self {
        SimpleGraph {
            adj: vec![Vec::new(); n],
        }
    }

    /// Builds a graph from an edge list, silently merging parallel pairs.
    ///
    /// Panics on loops or out-of-range endpoints.
    pub fn from_edges<I>(n: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut g = SimpleGraph::new(n);
        for (u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn complete(t: usize) -> Self {
        let mut g = SimpleGraph::new(t);
        for u in 0..t {
            for v in u + 1..t {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least 3 vertices");
        SimpleGraph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    /// Adds `uv`; returns false if it was already present.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> bool {
        assert!(u != v, "loop at {u}");
        assert!(u < self.n() && v < self.n(), "edge {u}-{v} out of range");
        match self.adj[u].binary_search(&v) {
            Ok(_) => false,
            Err(pos) => {
                self.adj[u].insert(pos, v);
                let pos = self.adj[v].binary_search(&u).unwrap_err();
                self.adj[v].insert(pos, u);
                true
            }
        }
    }

    pub fn add_vertex(&mut self) -> VertexId {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adj[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// All edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, nbrs) in self.adj.iter().enumerate() {
            out.extend(nbrs.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    /// Vertex-disjoint union; `other`'s vertices are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &SimpleGraph) -> SimpleGraph {
        let shift = self.n();
        let mut g = self.clone();
        g.adj.extend(
            other
                .adj
                .iter()
                .map(|nbrs| nbrs.iter().map(|&v| v + shift).collect()),
        );
        g
    }

    /// Subgraph induced on `vertices`, relabelled to `0..vertices.len()` in
    /// the given order.
    pub fn induced(&self, vertices: &[VertexId]) -> SimpleGraph {
        let mut local = vec![usize::MAX; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let mut g = SimpleGraph::new(vertices.len());
        for (i, &v) in vertices.iter().enumerate() {
            for &w in &self.adj[v] {
                let j = local[w];
                if j != usize::MAX && i < j {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    pub fn is_independent(&self, set: &[VertexId]) -> bool {
        set.iter()
            .enumerate()
            .all(|(i, &u)| set[i + 1..].iter().all(|&v| !self.has_edge(u, v)))
    }
}

/// The max-degree-2 host graph `H`; its edges are the red edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HostGraph {
    adj: Vec<Vec<VertexId>>,
    edges: Vec<(VertexId, VertexId)>,
}

/// Validates `red_edges` and builds the host.
pub fn build_host(n: usize, red_edges: &[(VertexId, VertexId)]) -> Result<HostGraph, GraphError> {
    let mut adj: Vec<Vec<VertexId>> = vec![Vec::new(); n];
    let mut edges = Vec::with_capacity(red_edges.len());
    for &(u, v) in red_edges {
        for w in [u, v] {
            if w >= n {
                return Err(GraphError::VertexOutOfRange { vertex: w, n });
            }
        }
        if u == v {
            return Err(GraphError::LoopEdge(u));
        }
        let (a, b) = ordered(u, v);
        if adj[a].contains(&b) {
            return Err(GraphError::DuplicateEdge(a, b));
        }
        adj[a].push(b);
        adj[b].push(a);
        for w in [a, b] {
            if adj[w].len() > 2 {
                return Err(GraphError::DegreeViolation {
                    vertex: w,
                    degree: adj[w].len(),
                });
            }
        }
        edges.push((a, b));
    }
    for nbrs in &mut adj {
        nbrs.sort_unstable();
    }
    edges.sort_unstable();
    Ok(HostGraph { adj, edges })
}

impl HostGraph {
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adj[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.adj[u].contains(&v)
    }

    /// Sorted `(u, v)` pairs with `u < v`.
    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn is_two_regular(&self) -> bool {
        self.adj.iter().all(|nbrs| nbrs.len() == 2)
    }

    pub fn as_simple(&self) -> SimpleGraph {
        SimpleGraph::from_edges(self.n(), self.edges.iter().copied())
    }
}

/// One connected component of a graph with maximum degree 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Strand {
    Cycle(Vec<VertexId>),
    Path(Vec<VertexId>),
    Isolate(VertexId),
}

/// Splits a max-degree-2 adjacency structure into cycles, paths and
/// isolated vertices, in order of their least vertex.
///
/// Cycles start at their least vertex and continue toward its smaller
/// neighbour; paths start at their smaller endpoint.
pub(crate) fn strands(adj: &[Vec<VertexId>]) -> Vec<Strand> {
    let n = adj.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for v in 0..n {
        if seen[v] {
            continue;
        }
        if adj[v].is_empty() {
            seen[v] = true;
            out.push(Strand::Isolate(v));
            continue;
        }
        // collect the component to find its shape
        let mut stack = vec![v];
        let mut members = Vec::new();
        seen[v] = true;
        while let Some(u) = stack.pop() {
            members.push(u);
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        let ends: Vec<VertexId> = members
            .iter()
            .copied()
            .filter(|&u| adj[u].len() == 1)
            .collect();
        if ends.is_empty() {
            // v is the least vertex of its component
            let first = *adj[v].iter().min().expect("cycle vertex has neighbours");
            out.push(Strand::Cycle(walk(adj, v, first)));
        } else {
            let start = *ends.iter().min().expect("path has endpoints");
            out.push(Strand::Path(walk(adj, start, adj[start][0])));
        }
    }
    out
}

fn walk(adj: &[Vec<VertexId>], start: VertexId, first: VertexId) -> Vec<VertexId> {
    let mut seq = vec![start];
    let mut prev = start;
    let mut cur = first;
    while cur != start {
        seq.push(cur);
        let next = adj[cur].iter().copied().find(|&w| w != prev);
        match next {
            Some(w) => {
                prev = cur;
                cur = w;
            }
            None => break,
        }
    }
    seq
}

/// Host components by shape. Every list is ordered by least vertex.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ComponentDecomposition {
    pub triangles: Vec<Vec<VertexId>>,
    pub long_odd: Vec<Vec<VertexId>>,
    pub even_cycles: Vec<Vec<VertexId>>,
    pub paths: Vec<Vec<VertexId>>,
    pub isolates: Vec<VertexId>,
}

impl ComponentDecomposition {
    /// Triangles and long odd cycles together, ordered by least vertex.
    pub fn odd_cycles(&self) -> Vec<Vec<VertexId>> {
        let mut all: Vec<_> = self.triangles.iter().chain(&self.long_odd).cloned().collect();
        all.sort_by_key(|c| c[0]);
        all
    }

    /// Every cycle of the host, ordered by least vertex.
    pub fn cycles(&self) -> Vec<Vec<VertexId>> {
        let mut all: Vec<_> = self
            .triangles
            .iter()
            .chain(&self.long_odd)
            .chain(&self.even_cycles)
            .cloned()
            .collect();
        all.sort_by_key(|c| c[0]);
        all
    }

    pub fn vertex_count(&self) -> usize {
        self.triangles
            .iter()
            .chain(&self.long_odd)
            .chain(&self.even_cycles)
            .chain(&self.paths)
            .map(Vec::len)
            .sum::<usize>()
            + self.isolates.len()
    }
}

pub fn decompose(host: &HostGraph) -> ComponentDecomposition {
    let mut d = ComponentDecomposition::default();
    for strand in strands(&host.adj) {
        match strand {
            Strand::Cycle(c) if c.len() == 3 => d.triangles.push(c),
            Strand::Cycle(c) if c.len() % 2 == 1 => d.long_odd.push(c),
            Strand::Cycle(c) => d.even_cycles.push(c),
            Strand::Path(p) => d.paths.push(p),
            Strand::Isolate(v) => d.isolates.push(v),
        }
    }
    d
}

/// Disjoint 4-vertex sets carrying the glued K4s. Each block is stored
/// sorted; block order is preserved.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BlockSet {
    blocks: Vec<[VertexId; 4]>,
}

impl BlockSet {
    pub fn new(blocks: Vec<Vec<VertexId>>) -> Result<Self, GraphError> {
        let mut owner: BTreeMap<VertexId, usize> = BTreeMap::new();
        let mut out = Vec::with_capacity(blocks.len());
        for (index, mut block) in blocks.into_iter().enumerate() {
            block.sort_unstable();
            block.dedup();
            if block.len() != 4 {
                return Err(GraphError::BlockSizeNot4 {
                    index,
                    len: block.len(),
                });
            }
            for &v in &block {
                if owner.insert(v, index).is_some() {
                    return Err(GraphError::OverlappingBlocks(v));
                }
            }
            out.push([block[0], block[1], block[2], block[3]]);
        }
        Ok(BlockSet { blocks: out })
    }

    pub fn blocks(&self) -> &[[VertexId; 4]] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn as_sets(&self) -> Vec<Vec<VertexId>> {
        self.blocks.iter().map(|b| b.to_vec()).collect()
    }
}

/// A host graph with K4s glued onto disjoint 4-sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GluedInstance {
    host: HostGraph,
    blocks: BlockSet,
    block_of: Vec<Option<usize>>,
}

pub fn glue_blocks(host: HostGraph, blocks: BlockSet) -> Result<GluedInstance, GraphError> {
    let n = host.n();
    let mut block_of = vec![None; n];
    for (i, block) in blocks.blocks().iter().enumerate() {
        for &v in block {
            if v >= n {
                return Err(GraphError::VertexOutOfRange { vertex: v, n });
            }
            block_of[v] = Some(i);
        }
    }
    Ok(GluedInstance {
        host,
        blocks,
        block_of,
    })
}

impl GluedInstance {
    pub fn n(&self) -> usize {
        self.host.n()
    }

    pub fn host(&self) -> &HostGraph {
        &self.host
    }

    pub fn blocks(&self) -> &BlockSet {
        &self.blocks
    }

    pub fn block_of(&self, v: VertexId) -> Option<usize> {
        self.block_of[v]
    }

    pub fn blocks_partition_vertices(&self) -> bool {
        self.block_of.iter().all(Option::is_some)
    }

    /// All six pairs of every block, including pairs also joined in red.
    pub fn blue_edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::with_capacity(6 * self.blocks.len());
        for b in self.blocks.blocks() {
            for i in 0..4 {
                for j in i + 1..4 {
                    out.push((b[i], b[j]));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Red pairs that are also blue.
    pub fn parallel_pairs(&self) -> usize {
        self.host
            .edges()
            .iter()
            .filter(|&&(u, v)| self.block_of[u].is_some() && self.block_of[u] == self.block_of[v])
            .count()
    }

    /// `G` as a simple graph: red and blue edges with parallel pairs merged.
    pub fn simple_view(&self) -> SimpleGraph {
        let mut g = self.host.as_simple();
        for (u, v) in self.blue_edges() {
            g.add_edge(u, v);
        }
        g
    }

    pub fn layered(&self) -> LayeredGraph {
        let mut g = LayeredGraph::new(self.n());
        for &(u, v) in self.host.edges() {
            g.add_edge(Layer::Red, u, v);
        }
        for (u, v) in self.blue_edges() {
            g.add_edge(Layer::Blue, u, v);
        }
        g
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Layer {
    Red,
    Blue,
    Green,
}

impl Layer {
    pub const ALL: [Layer; 3] = [Layer::Red, Layer::Blue, Layer::Green];

    fn index(self) -> usize {
        match self {
            Layer::Red => 0,
            Layer::Blue => 1,
            Layer::Green => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Layer::Red => "red",
            Layer::Blue => "blue",
            Layer::Green => "green",
        }
    }
}

/// Multigraph whose edges carry one of three colours; each colour layer is
/// simple on its own.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayeredGraph {
    n: usize,
    adj: [Vec<Vec<VertexId>>; 3],
}

impl LayeredGraph {
    pub fn new(n: usize) -> Self {
        LayeredGraph {
            n,
            adj: [vec![Vec::new(); n], vec![Vec::new(); n], vec![Vec::new(); n]],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Adds `uv` to `layer`; returns false if the layer already had it.
    pub fn add_edge(&mut self, layer: Layer, u: VertexId, v: VertexId) -> bool {
        assert!(u != v && u < self.n && v < self.n, "bad edge {u}-{v}");
        let adj = &mut self.adj[layer.index()];
        match adj[u].binary_search(&v) {
            Ok(_) => false,
            Err(pos) => {
                adj[u].insert(pos, v);
                let pos = adj[v].binary_search(&u).unwrap_err();
                adj[v].insert(pos, u);
                true
            }
        }
    }

    pub fn neighbors(&self, layer: Layer, v: VertexId) -> &[VertexId] {
        &self.adj[layer.index()][v]
    }

    pub(crate) fn layer_adjacency(&self, layer: Layer) -> &[Vec<VertexId>] {
        &self.adj[layer.index()]
    }

    pub fn max_degree(&self, layer: Layer) -> usize {
        self.adj[layer.index()].iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn edges(&self, layer: Layer) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::new();
        for (u, nbrs) in self.adj[layer.index()].iter().enumerate() {
            out.extend(nbrs.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    /// Union of all layers with parallel pairs merged.
    pub fn simple(&self) -> SimpleGraph {
        let mut g = SimpleGraph::new(self.n);
        for layer in Layer::ALL {
            for (u, v) in self.edges(layer) {
                g.add_edge(u, v);
            }
        }
        g
    }
}

/// `H_S`: the union of the sets indexed by `S`, with every edge inside a
/// single set removed. Vertices are relabelled in ascending original order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictedSubgraph {
    pub vertices: Vec<VertexId>,
    pub graph: LayeredGraph,
}

pub fn restricted_union_subgraph(
    instance: &GluedInstance,
    sets: &[Vec<VertexId>],
    selection: &[usize],
) -> Result<RestrictedSubgraph, GraphError> {
    let n = instance.n();
    let mut set_of = vec![None; n];
    for (i, set) in sets.iter().enumerate() {
        for &v in set {
            if v >= n {
                return Err(GraphError::VertexOutOfRange { vertex: v, n });
            }
            if set_of[v].is_some() {
                return Err(GraphError::OverlappingSets(v));
            }
            set_of[v] = Some(i);
        }
    }
    let mut chosen = vec![false; sets.len()];
    for &i in selection {
        if i >= sets.len() {
            return Err(GraphError::IndexOutOfRange {
                index: i,
                len: sets.len(),
            });
        }
        chosen[i] = true;
    }
    let keep = |v: VertexId| set_of[v].is_some_and(|i| chosen[i]);
    let vertices: Vec<VertexId> = (0..n).filter(|&v| keep(v)).collect();
    let mut local = vec![usize::MAX; n];
    for (i, &v) in vertices.iter().enumerate() {
        local[v] = i;
    }
    let mut graph = LayeredGraph::new(vertices.len());
    let full = instance.layered();
    for layer in [Layer::Red, Layer::Blue] {
        for (u, v) in full.edges(layer) {
            if keep(u) && keep(v) && set_of[u] != set_of[v] {
                graph.add_edge(layer, local[u], local[v]);
            }
        }
    }
    Ok(RestrictedSubgraph { vertices, graph })
}

/// A (partial) independent set of representatives: at most one vertex per
/// indexed set, keyed by set index.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct RepresentativeSet {
    assignment: BTreeMap<usize, VertexId>,
}

impl RepresentativeSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, set: usize, v: VertexId) -> Option<VertexId> {
        self.assignment.insert(set, v)
    }

    pub fn get(&self, set: usize) -> Option<VertexId> {
        self.assignment.get(&set).copied()
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    /// `(set index, representative)` pairs in set order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, VertexId)> + '_ {
        self.assignment.iter().map(|(&s, &v)| (s, v))
    }

    pub fn set_indices(&self) -> Vec<usize> {
        self.assignment.keys().copied().collect()
    }

    /// Sorted member vertices.
    pub fn members(&self) -> Vec<VertexId> {
        let mut m: Vec<_> = self.assignment.values().copied().collect();
        m.sort_unstable();
        m
    }

    /// True iff every assigned vertex lies in its set, members are distinct
    /// and pairwise non-adjacent in `g`.
    pub fn is_partial_isr(&self, g: &SimpleGraph, sets: &[Vec<VertexId>]) -> bool {
        let consistent = self
            .assignment
            .iter()
            .all(|(&s, v)| s < sets.len() && sets[s].contains(v));
        let members = self.members();
        let distinct = members.windows(2).all(|w| w[0] != w[1]);
        consistent && distinct && g.is_independent(&members)
    }

    /// A partial ISR hitting every set.
    pub fn is_isr(&self, g: &SimpleGraph, sets: &[Vec<VertexId>]) -> bool {
        self.len() == sets.len() && self.is_partial_isr(g, sets)
    }
}

/// Map vertex → colour in `1..=4`; uncoloured vertices form `Z`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialColoring {
    colors: Vec<Option<u8>>,
}

impl PartialColoring {
    pub fn uncolored(n: usize) -> Self {
        PartialColoring {
            colors: vec![None; n],
        }
    }

    pub fn from_colors(colors: Vec<Option<u8>>) -> Self {
        PartialColoring { colors }
    }

    pub fn n(&self) -> usize {
        self.colors.len()
    }

    pub fn color(&self, v: VertexId) -> Option<u8> {
        self.colors[v]
    }

    pub fn set(&mut self, v: VertexId, color: u8) {
        self.colors[v] = Some(color);
    }

    pub fn clear(&mut self, v: VertexId) {
        self.colors[v] = None;
    }

    pub fn colors(&self) -> &[Option<u8>] {
        &self.colors
    }

    /// The uncoloured set `Z`, ascending.
    pub fn z(&self) -> Vec<VertexId> {
        (0..self.n()).filter(|&v| self.colors[v].is_none()).collect()
    }

    pub fn colored_count(&self) -> usize {
        self.colors.iter().filter(|c| c.is_some()).count()
    }

    pub fn is_full(&self) -> bool {
        self.colors.iter().all(Option::is_some)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c5_c3() -> HostGraph {
        build_host(8, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (5, 6), (6, 7), (7, 5)]).unwrap()
    }

    #[test]
    fn build_host_rejects_bad_input() {
        assert_eq!(
            build_host(3, &[(0, 1), (1, 2), (2, 0), (0, 1)]),
            Err(GraphError::DuplicateEdge(0, 1))
        );
        assert_eq!(build_host(3, &[(1, 1)]), Err(GraphError::LoopEdge(1)));
        assert_eq!(
            build_host(4, &[(0, 1), (0, 2), (0, 3)]),
            Err(GraphError::DegreeViolation { vertex: 0, degree: 3 })
        );
        assert_eq!(
            build_host(2, &[(0, 2)]),
            Err(GraphError::VertexOutOfRange { vertex: 2, n: 2 })
        );
    }

    #[test]
    fn empty_host_is_all_isolates() {
        let h = build_host(4, &[]).unwrap();
        let d = decompose(&h);
        assert_eq!(d.isolates, vec![0, 1, 2, 3]);
        assert!(d.paths.is_empty() && d.triangles.is_empty());
    }

    #[test]
    fn decompose_classifies_by_parity() {
        let h = build_host(10, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (5, 6), (6, 7), (7, 5), (8, 9)]).unwrap();
        let d = decompose(&h);
        assert_eq!(d.long_odd, vec![vec![0, 1, 2, 3, 4]]);
        assert_eq!(d.triangles, vec![vec![5, 6, 7]]);
        assert_eq!(d.paths, vec![vec![8, 9]]);
        assert_eq!(d.vertex_count(), 10);

        let c4 = build_host(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let d = decompose(&c4);
        assert_eq!(d.even_cycles, vec![vec![0, 1, 2, 3]]);
        assert!(d.long_odd.is_empty() && d.triangles.is_empty() && d.paths.is_empty());

        let d = decompose(&build_host(8, &[]).unwrap());
        assert_eq!(d.isolates.len(), 8);
    }

    #[test]
    fn cycles_start_at_min_toward_smaller_neighbour() {
        let h = build_host(5, &[(3, 0), (0, 4), (4, 1), (1, 2), (2, 3)]).unwrap();
        let d = decompose(&h);
        // 0's neighbours are 3 and 4; walk goes to 3 first
        assert_eq!(d.long_odd, vec![vec![0, 3, 2, 1, 4]]);
        let p = build_host(4, &[(3, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(decompose(&p).paths, vec![vec![0, 2, 1, 3]]);
    }

    #[test]
    fn glue_single_block_gives_k4() {
        let h = build_host(4, &[]).unwrap();
        let g = glue_blocks(h, BlockSet::new(vec![vec![0, 1, 2, 3]]).unwrap()).unwrap();
        assert_eq!(g.simple_view(), SimpleGraph::complete(4));
    }

    #[test]
    fn glue_counts_red_and_blue_edges() {
        let g = glue_blocks(c5_c3(), BlockSet::new(vec![vec![0, 2, 5, 7], vec![1, 3, 4, 6]]).unwrap()).unwrap();
        assert_eq!(g.host().edges().len(), 8);
        assert_eq!(g.blue_edges().len(), 12);
        // red pairs inside a block: 5-7 (block 0), 3-4 (block 1)
        assert_eq!(g.parallel_pairs(), 2);
        assert_eq!(g.simple_view().edge_count(), 8 + 12 - 2);
    }

    #[test]
    fn triangle_absorbed_by_block() {
        let h = build_host(4, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let g = glue_blocks(h, BlockSet::new(vec![vec![0, 1, 2, 3]]).unwrap()).unwrap();
        assert_eq!(g.parallel_pairs(), 3);
        assert_eq!(g.simple_view(), SimpleGraph::complete(4));
    }

    #[test]
    fn glue_errors() {
        let h = build_host(5, &[]).unwrap();
        assert_eq!(
            BlockSet::new(vec![vec![0, 1, 2]]),
            Err(GraphError::BlockSizeNot4 { index: 0, len: 3 })
        );
        assert_eq!(
            BlockSet::new(vec![vec![0, 1, 2, 3], vec![3, 4, 5, 6]]),
            Err(GraphError::OverlappingBlocks(3))
        );
        assert_eq!(
            glue_blocks(h, BlockSet::new(vec![vec![1, 2, 3, 5]]).unwrap()),
            Err(GraphError::VertexOutOfRange { vertex: 5, n: 5 })
        );
    }

    #[test]
    fn restricted_union_keeps_only_crossing_edges() {
        let g = glue_blocks(c5_c3(), BlockSet::new(vec![vec![0, 2, 5, 7], vec![1, 3, 4, 6]]).unwrap()).unwrap();
        let sets = vec![vec![0, 1, 2, 3, 4], vec![5, 6, 7]];
        let empty = restricted_union_subgraph(&g, &sets, &[]).unwrap();
        assert_eq!(empty.vertices.len(), 0);

        let single = restricted_union_subgraph(&g, &sets, &[1]).unwrap();
        assert_eq!(single.graph.simple().edge_count(), 0);
        assert_eq!(single.vertices, vec![5, 6, 7]);

        let both = restricted_union_subgraph(&g, &sets, &[0, 1]).unwrap();
        let mut crossing = Vec::new();
        for (u, v) in g.blue_edges() {
            if (u < 5) != (v < 5) {
                crossing.push((u, v));
            }
        }
        // 0,2 with 5,7 and 1,3,4 with 6
        assert_eq!(crossing.len(), 4 + 3);
        assert!(both.graph.edges(Layer::Red).is_empty());
        let mut got: Vec<_> = both
            .graph
            .edges(Layer::Blue)
            .into_iter()
            .map(|(a, b)| (both.vertices[a], both.vertices[b]))
            .collect();
        got.sort_unstable();
        crossing.sort_unstable();
        assert_eq!(got, crossing);

        assert_eq!(
            restricted_union_subgraph(&g, &sets, &[2]),
            Err(GraphError::IndexOutOfRange { index: 2, len: 2 })
        );
    }

    #[test]
    fn degree_invariants_hold_for_glued_view() {
        let g = glue_blocks(c5_c3(), BlockSet::new(vec![vec![0, 2, 5, 7]]).unwrap()).unwrap();
        let layered = g.layered();
        for v in 0..g.n() {
            assert!(layered.neighbors(Layer::Red, v).len() <= 2);
            assert!(matches!(layered.neighbors(Layer::Blue, v).len(), 0 | 3));
        }
    }
}
