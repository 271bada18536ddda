//! Two disjoint independent sets of representatives for 4-sets over a host
//! of maximum degree 2.
//!
//! Red edges are the host, green edges a 4-cycle on every part and blue
//! edges a `K4` on every part. Vertices are placed alternately into `W2`
//! and `W1`, following red successors out of `W1` and green successors out
//! of `W2`. `W1` then has red and blue degree at most one and meets every
//! part twice, so its red/blue graph is bipartite and each side is an ISR.

use std::collections::VecDeque;

use thiserror::Error;

use crate::graph::{strands, HostGraph, Layer, LayeredGraph, RepresentativeSet, Strand, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TwoIsrError {
    #[error("layered graph has {0} vertices; an even count is required")]
    OddVertexCount(usize),
    #[error("part {index} has {len} vertices instead of 4")]
    PartSizeNot4 { index: usize, len: usize },
    #[error("invalid parts: {0}")]
    InvalidParts(String),
    #[error("{0:?} layer has maximum degree {1}; at most 2 is required")]
    LayerDegree(Layer, usize),
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
}

type Result<T> = std::result::Result<T, TwoIsrError>;

/// Orientation of a max-degree-2 layer with out-degree at most one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orientation {
    succ: Vec<Option<VertexId>>,
    pred: Vec<Option<VertexId>>,
}

impl Orientation {
    /// Orients every path and cycle along its canonical traversal.
    pub fn canonical(adj: &[Vec<VertexId>]) -> Self {
        let n = adj.len();
        let mut succ = vec![None; n];
        let mut pred = vec![None; n];
        for strand in strands(adj) {
            let (seq, closed) = match strand {
                Strand::Cycle(s) => (s, true),
                Strand::Path(s) => (s, false),
                Strand::Isolate(_) => continue,
            };
            let len = seq.len();
            let arcs = if closed { len } else { len - 1 };
            for i in 0..arcs {
                let (a, b) = (seq[i], seq[(i + 1) % len]);
                succ[a] = Some(b);
                pred[b] = Some(a);
            }
        }
        Orientation { succ, pred }
    }

    pub fn succ(&self, v: VertexId) -> Option<VertexId> {
        self.succ[v]
    }

    pub fn pred(&self, v: VertexId) -> Option<VertexId> {
        self.pred[v]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Placement {
    pub w1: Vec<VertexId>,
    pub w2: Vec<VertexId>,
    /// `in_w1[v]` is true for vertices of `W1`.
    pub in_w1: Vec<bool>,
    /// Vertices in placement order.
    pub order: Vec<VertexId>,
}

/// The layered graph of the appendix construction: host edges red, a
/// 4-cycle `a b c d` on every sorted part green, its `K4` blue.
pub fn appendix_layers(host: &HostGraph, parts: &[[VertexId; 4]], n: usize) -> LayeredGraph {
    let mut g = LayeredGraph::new(n);
    for &(u, v) in host.edges() {
        g.add_edge(Layer::Red, u, v);
    }
    for part in parts {
        for i in 0..4 {
            g.add_edge(Layer::Green, part[i], part[(i + 1) % 4]);
            for j in i + 1..4 {
                g.add_edge(Layer::Blue, part[i], part[j]);
            }
        }
    }
    g
}

/// Alternating placement seeded with vertex 0 in `W2`. From a vertex just
/// put into `W1` (`W2`) the next vertex is its red (green) successor, else
/// its predecessor, else the least unplaced vertex, and goes to the other
/// side.
pub fn hst_partition(layers: &LayeredGraph) -> Result<Placement> {
    let n = layers.n();
    if n % 2 == 1 {
        return Err(TwoIsrError::OddVertexCount(n));
    }
    for layer in [Layer::Red, Layer::Green] {
        let d = layers.max_degree(layer);
        if d > 2 {
            return Err(TwoIsrError::LayerDegree(layer, d));
        }
    }
    let red = Orientation::canonical(layers.layer_adjacency(Layer::Red));
    let green = Orientation::canonical(layers.layer_adjacency(Layer::Green));

    let mut placed = vec![false; n];
    let mut in_w1 = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut next_free = 0;
    let mut current = if n > 0 { Some((0, false)) } else { None };
    while let Some((v, to_w1)) = current {
        placed[v] = true;
        in_w1[v] = to_w1;
        order.push(v);
        let orient = if to_w1 { &red } else { &green };
        let unplaced = |w: &VertexId| !placed[*w];
        let next = orient
            .succ(v)
            .filter(unplaced)
            .or_else(|| orient.pred(v).filter(unplaced))
            .or_else(|| {
                while next_free < n && placed[next_free] {
                    next_free += 1;
                }
                (next_free < n).then_some(next_free)
            });
        current = next.map(|w| (w, !to_w1));
    }
    if order.len() != n {
        return Err(TwoIsrError::InternalInvariantViolation(format!(
            "placed {} of {n} vertices",
            order.len()
        )));
    }
    let placement = Placement {
        w1: (0..n).filter(|&v| in_w1[v]).collect(),
        w2: (0..n).filter(|&v| !in_w1[v]).collect(),
        in_w1,
        order,
    };
    check_placement(layers, &placement)?;
    Ok(placement)
}

/// Equal halves, red degree at most one inside `W1`, green degree at most
/// one inside `W2`, blue degree at most one inside `W1`.
pub fn check_placement(layers: &LayeredGraph, p: &Placement) -> Result<()> {
    if p.w1.len() != p.w2.len() {
        return Err(TwoIsrError::InternalInvariantViolation(format!(
            "|W1| = {} but |W2| = {}",
            p.w1.len(),
            p.w2.len()
        )));
    }
    let inside = |layer: Layer, v: VertexId| {
        layers
            .neighbors(layer, v)
            .iter()
            .filter(|&&w| p.in_w1[w] == p.in_w1[v])
            .count()
    };
    for &v in &p.w1 {
        for layer in [Layer::Red, Layer::Blue] {
            if inside(layer, v) > 1 {
                return Err(TwoIsrError::InternalInvariantViolation(format!(
                    "vertex {v} of W1 has {} {} neighbours in W1",
                    inside(layer, v),
                    layer.name()
                )));
            }
        }
    }
    for &v in &p.w2 {
        if inside(Layer::Green, v) > 1 {
            return Err(TwoIsrError::InternalInvariantViolation(format!(
                "vertex {v} of W2 has {} green neighbours in W2",
                inside(Layer::Green, v)
            )));
        }
    }
    Ok(())
}

/// Two disjoint ISRs of `parts` in `host`.
///
/// Parts must be disjoint 4-sets. Vertices outside every part are grouped
/// into extra parts (padded with isolated vertices) before placement, so
/// the parts always partition the working vertex set.
pub fn two_isrs(host: &HostGraph, parts: &[Vec<VertexId>]) -> Result<(RepresentativeSet, RepresentativeSet)> {
    let n = host.n();
    let mut owner = vec![None; n];
    let mut sorted: Vec<[VertexId; 4]> = Vec::with_capacity(parts.len());
    for (index, part) in parts.iter().enumerate() {
        if part.len() != 4 {
            return Err(TwoIsrError::PartSizeNot4 { index, len: part.len() });
        }
        for &v in part {
            if v >= n {
                return Err(TwoIsrError::InvalidParts(format!("vertex {v} out of range")));
            }
            if owner[v].replace(index).is_some() {
                return Err(TwoIsrError::InvalidParts(format!("parts overlap at {v}")));
            }
        }
        let mut p = [part[0], part[1], part[2], part[3]];
        p.sort_unstable();
        sorted.push(p);
    }
    let mut loose: Vec<VertexId> = (0..n).filter(|&v| owner[v].is_none()).collect();
    let mut total = n;
    while loose.len() % 4 != 0 {
        loose.push(total);
        total += 1;
    }
    for chunk in loose.chunks(4) {
        sorted.push([chunk[0], chunk[1], chunk[2], chunk[3]]);
    }

    let layers = appendix_layers(host, &sorted, total);
    let placement = hst_partition(&layers)?;
    for (index, part) in sorted.iter().enumerate() {
        let inside = part.iter().filter(|&&v| placement.in_w1[v]).count();
        if inside != 2 {
            return Err(TwoIsrError::InternalInvariantViolation(format!(
                "W1 meets part {index} in {inside} vertices"
            )));
        }
    }

    // bipartition of the red/blue graph on W1
    let mut side: Vec<Option<bool>> = vec![None; total];
    for &start in &placement.w1 {
        if side[start].is_some() {
            continue;
        }
        side[start] = Some(false);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            let s = side[v].expect("queued vertices have a side");
            for layer in [Layer::Red, Layer::Blue] {
                for &w in layers.neighbors(layer, v) {
                    if !placement.in_w1[w] {
                        continue;
                    }
                    match side[w] {
                        None => {
                            side[w] = Some(!s);
                            queue.push_back(w);
                        }
                        Some(t) if t == s => {
                            return Err(TwoIsrError::InternalInvariantViolation(format!(
                                "W1 is not bipartite at edge {v}-{w}"
                            )));
                        }
                        Some(_) => {}
                    }
                }
            }
        }
    }

    let mut r1 = RepresentativeSet::new();
    let mut r2 = RepresentativeSet::new();
    for (index, part) in sorted.iter().enumerate().take(parts.len()) {
        for &v in part {
            match side[v] {
                Some(false) => {
                    r1.insert(index, v);
                }
                Some(true) => {
                    r2.insert(index, v);
                }
                None => {}
            }
        }
    }
    let g = host.as_simple();
    for r in [&r1, &r2] {
        if !r.is_isr(&g, parts) {
            return Err(TwoIsrError::InternalInvariantViolation(
                "extracted side is not an ISR".into(),
            ));
        }
    }
    Ok((r1, r2))
}
