//! Colouring all but at most `⌊|𝒞|/2⌋` vertices when the host has few long
//! odd cycles.
//!
//! On a normalized instance every odd host cycle gets one representative
//! (a transversal `T`). The red matching `M(T)` covers everything except
//! `T`; together with a fixed perfect blue matching `J` it forms the
//! auxiliary graph `B(T)`, a disjoint union of even cycles and paths whose
//! endpoints are exactly the vertices of `T`. Local moves on `T` shrink
//! those paths until no representative shares its path with its cycle
//! successor; then a black/white colouring of `B(T)` is chosen component by
//! component by conditional expectations, the long-cycle representatives
//! whose successor got the same colour are dropped into `Z`, and both colour
//! sides split further into two colours each.

use std::collections::VecDeque;

use thiserror::Error;

use crate::graph::{decompose, BlockSet, ComponentDecomposition, GluedInstance, PartialColoring, VertexId};
use crate::normalizer::{normalize, pull_back_coloring, NormalizedInstance};
use crate::oracles::{Budget, OracleError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransversalError {
    #[error("instance is not normalized: {0}")]
    NotNormalized(String),
    #[error("invalid transversal: {0}")]
    InvalidTransversal(String),
    #[error("representative {0} shares its auxiliary component with its successor")]
    BadVertexPresent(VertexId),
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

type Result<T> = std::result::Result<T, TransversalError>;

/// A matching stored as a partner map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    mate: Vec<Option<VertexId>>,
}

impl Matching {
    pub fn empty(n: usize) -> Self {
        Matching { mate: vec![None; n] }
    }

    fn insert(&mut self, u: VertexId, v: VertexId) {
        debug_assert!(self.mate[u].is_none() && self.mate[v].is_none());
        self.mate[u] = Some(v);
        self.mate[v] = Some(u);
    }

    pub fn mate(&self, v: VertexId) -> Option<VertexId> {
        self.mate[v]
    }

    pub fn len(&self) -> usize {
        self.mate.iter().filter(|m| m.is_some()).count() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Sorted `(u, v)` pairs with `u < v`.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        self.mate
            .iter()
            .enumerate()
            .filter_map(|(u, m)| m.filter(|&v| v > u).map(|v| (u, v)))
            .collect()
    }

    pub fn symmetric_difference(&self, other: &Matching) -> Vec<(VertexId, VertexId)> {
        let a = self.edges();
        let b = other.edges();
        let mut out: Vec<_> = a.iter().filter(|e| !b.contains(e)).copied().collect();
        out.extend(b.iter().filter(|e| !a.contains(e)));
        out.sort_unstable();
        out
    }
}

/// Red matching saturating exactly the even-cycle vertices: alternate edges
/// of each even cycle, starting with its canonical first edge.
pub fn base_matching(decomp: &ComponentDecomposition) -> Result<Matching> {
    if !decomp.paths.is_empty() || !decomp.isolates.is_empty() {
        return Err(TransversalError::NotNormalized("host has path or isolated components".into()));
    }
    let mut m = Matching::empty(decomp.vertex_count());
    for cycle in &decomp.even_cycles {
        for pair in cycle.chunks(2) {
            m.insert(pair[0], pair[1]);
        }
    }
    Ok(m)
}

/// Per block `a < b < c < d`, the blue edges `ab` and `cd`.
pub fn blue_matching(blocks: &BlockSet, n: usize) -> Matching {
    let mut m = Matching::empty(n);
    for &[a, b, c, d] in blocks.blocks() {
        m.insert(a, b);
        m.insert(c, d);
    }
    m
}

/// Successor map along the canonical orientation of each odd cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicOrientation {
    succ: Vec<Option<VertexId>>,
}

impl CyclicOrientation {
    pub fn succ(&self, v: VertexId) -> Option<VertexId> {
        self.succ[v]
    }
}

/// One representative per odd cycle, indexed by odd-cycle id.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Transversal {
    rep: Vec<VertexId>,
}

impl Transversal {
    pub fn from_reps(rep: Vec<VertexId>) -> Self {
        Transversal { rep }
    }

    pub fn rep(&self, cycle: usize) -> VertexId {
        self.rep[cycle]
    }

    pub fn reps(&self) -> &[VertexId] {
        &self.rep
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.rep.contains(&v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AuxKind {
    Path,
    Cycle,
}

/// A component of `B(T)`. Path vertices run from the smaller endpoint;
/// cycle vertices start at the least vertex and leave along its blue edge.
/// Consecutive vertices alternate blue, red, blue, ...
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuxComponent {
    pub kind: AuxKind,
    pub vertices: Vec<VertexId>,
}

impl AuxComponent {
    pub fn edge_count(&self) -> usize {
        match self.kind {
            AuxKind::Path => self.vertices.len() - 1,
            AuxKind::Cycle => self.vertices.len(),
        }
    }
}

/// `B(T) = M(T) ∪ J`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuxGraph {
    pub red_matching: Matching,
    pub blue_matching: Matching,
    components: Vec<AuxComponent>,
    component_of: Vec<usize>,
    position: Vec<usize>,
}

impl AuxGraph {
    pub fn components(&self) -> &[AuxComponent] {
        &self.components
    }

    pub fn component_of(&self, v: VertexId) -> usize {
        self.component_of[v]
    }

    /// Index of `v` in its component's vertex sequence.
    pub fn position(&self, v: VertexId) -> usize {
        self.position[v]
    }

    pub fn path_count(&self) -> usize {
        self.components.iter().filter(|c| c.kind == AuxKind::Path).count()
    }

    pub fn path_length_sum(&self) -> usize {
        self.components
            .iter()
            .filter(|c| c.kind == AuxKind::Path)
            .map(AuxComponent::edge_count)
            .sum()
    }

    /// Edges of `B(T)` as `(u, v)` with `u < v`, blue and red together.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut e = self.red_matching.edges();
        e.extend(self.blue_matching.edges());
        e.sort_unstable();
        e
    }
}

/// Sum of path lengths and transversal cost of `B(T)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostReport {
    pub path_length_sum: usize,
    /// Representatives whose successor lies in their own path, ascending.
    pub bad_vertices: Vec<VertexId>,
    /// Odd cycles entirely contained in their representative's path.
    pub swallowed_cycles: Vec<usize>,
    /// Sum over bad representatives of the least directed distance to a
    /// cycle vertex outside their path; swallowed cycles contribute nothing.
    pub cost: u64,
}

impl CostReport {
    /// Lexicographic potential; infinite cost while a cycle is swallowed.
    pub fn potential(&self) -> (usize, u64) {
        if self.swallowed_cycles.is_empty() {
            (self.path_length_sum, self.cost)
        } else {
            (self.path_length_sum, u64::MAX)
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.bad_vertices.is_empty() && self.swallowed_cycles.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoveKind {
    /// Representative moved to the last vertex of its cycle along a path
    /// that contained the whole cycle.
    Unswallow,
    /// Bad representative `t` moved to `t⁺⁺`.
    Rotate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveRecord {
    pub kind: MoveKind,
    pub cycle: usize,
    pub from: VertexId,
    pub to: VertexId,
    pub before: (usize, u64),
    pub after: (usize, u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OptimizationTrace {
    pub moves: Vec<MoveRecord>,
}

/// Black/white colouring of `B(T)`; `flips[c]` swaps component `c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoColoring {
    pub black: Vec<bool>,
    pub flips: Vec<bool>,
    /// Long-cycle representatives coloured like their successor, ascending.
    pub unhappy: Vec<VertexId>,
}

/// Fixed data for one normalized instance.
#[derive(Debug, Clone)]
pub struct TransversalEngine {
    instance: GluedInstance,
    odd_cycles: Vec<Vec<VertexId>>,
    is_long: Vec<bool>,
    cycle_of: Vec<Option<usize>>,
    orientation: CyclicOrientation,
    base: Matching,
    blue: Matching,
}

impl TransversalEngine {
    pub fn new(instance: &GluedInstance) -> Result<Self> {
        let n = instance.n();
        for &(u, v) in instance.host().edges() {
            if instance.block_of(u).is_some() && instance.block_of(u) == instance.block_of(v) {
                return Err(TransversalError::NotNormalized(format!("red edge {u}-{v} inside a block")));
            }
        }
        if !instance.host().is_two_regular() {
            return Err(TransversalError::NotNormalized("host is not 2-regular".into()));
        }
        if !instance.blocks_partition_vertices() {
            return Err(TransversalError::NotNormalized("blocks do not cover every vertex".into()));
        }
        let decomp = decompose(instance.host());
        let odd_cycles = decomp.odd_cycles();
        let mut cycle_of = vec![None; n];
        let mut succ = vec![None; n];
        for (id, cycle) in odd_cycles.iter().enumerate() {
            for (i, &v) in cycle.iter().enumerate() {
                cycle_of[v] = Some(id);
                succ[v] = Some(cycle[(i + 1) % cycle.len()]);
            }
        }
        Ok(TransversalEngine {
            is_long: odd_cycles.iter().map(|c| c.len() > 3).collect(),
            base: base_matching(&decomp)?,
            blue: blue_matching(instance.blocks(), n),
            instance: instance.clone(),
            odd_cycles,
            cycle_of,
            orientation: CyclicOrientation { succ },
        })
    }

    pub fn instance(&self) -> &GluedInstance {
        &self.instance
    }

    pub fn odd_cycles(&self) -> &[Vec<VertexId>] {
        &self.odd_cycles
    }

    pub fn is_long(&self, cycle: usize) -> bool {
        self.is_long[cycle]
    }

    pub fn long_cycle_count(&self) -> usize {
        self.is_long.iter().filter(|&&l| l).count()
    }

    pub fn cycle_of(&self, v: VertexId) -> Option<usize> {
        self.cycle_of[v]
    }

    pub fn orientation(&self) -> &CyclicOrientation {
        &self.orientation
    }

    pub fn base_matching(&self) -> &Matching {
        &self.base
    }

    pub fn blue_matching(&self) -> &Matching {
        &self.blue
    }

    fn succ(&self, v: VertexId) -> VertexId {
        self.orientation.succ[v].expect("vertex lies on an odd cycle")
    }

    /// Least vertex of every odd cycle.
    pub fn initial_transversal(&self) -> Transversal {
        Transversal {
            rep: self.odd_cycles.iter().map(|c| c[0]).collect(),
        }
    }

    fn validate(&self, t: &Transversal) -> Result<()> {
        if t.rep.len() != self.odd_cycles.len() {
            return Err(TransversalError::InvalidTransversal(format!(
                "{} representatives for {} odd cycles",
                t.rep.len(),
                self.odd_cycles.len()
            )));
        }
        for (id, &v) in t.rep.iter().enumerate() {
            if v >= self.instance.n() || self.cycle_of[v] != Some(id) {
                return Err(TransversalError::InvalidTransversal(format!(
                    "vertex {v} is not on odd cycle {id}"
                )));
            }
        }
        Ok(())
    }

    /// `M(T)`: the base matching plus the unique perfect matching of every
    /// odd cycle minus its representative.
    pub fn extend_matching(&self, t: &Transversal) -> Result<Matching> {
        self.validate(t)?;
        let mut m = self.base.clone();
        for &r in &t.rep {
            let mut v = self.succ(r);
            while v != r {
                let w = self.succ(v);
                m.insert(v, w);
                v = self.succ(w);
            }
        }
        Ok(m)
    }

    pub fn build_aux(&self, t: &Transversal) -> Result<AuxGraph> {
        let red = self.extend_matching(t)?;
        let n = self.instance.n();
        let mut component_of = vec![usize::MAX; n];
        let mut position = vec![0; n];
        let mut components = Vec::new();

        let mut record = |seq: Vec<VertexId>, kind: AuxKind, component_of: &mut Vec<usize>| {
            let id = components.len();
            for (i, &v) in seq.iter().enumerate() {
                component_of[v] = id;
                position[v] = i;
            }
            components.push(AuxComponent { kind, vertices: seq });
        };

        for start in 0..n {
            if component_of[start] != usize::MAX || red.mate(start).is_some() {
                continue;
            }
            let mut seq = vec![start];
            let mut cur = start;
            let mut blue_next = true;
            loop {
                let next = if blue_next { self.blue.mate(cur) } else { red.mate(cur) };
                match next {
                    Some(w) => {
                        seq.push(w);
                        cur = w;
                        blue_next = !blue_next;
                    }
                    None => break,
                }
            }
            record(seq, AuxKind::Path, &mut component_of);
        }
        for start in 0..n {
            if component_of[start] != usize::MAX {
                continue;
            }
            let mut seq = vec![start];
            let mut cur = self.blue.mate(start).expect("blue matching is perfect");
            let mut blue_next = false;
            while cur != start {
                seq.push(cur);
                cur = if blue_next {
                    self.blue.mate(cur).expect("blue matching is perfect")
                } else {
                    red.mate(cur).ok_or_else(|| {
                        TransversalError::InternalInvariantViolation(format!(
                            "vertex {cur} on an auxiliary cycle has no red partner"
                        ))
                    })?
                };
                blue_next = !blue_next;
            }
            record(seq, AuxKind::Cycle, &mut component_of);
        }

        let aux = AuxGraph {
            red_matching: red,
            blue_matching: self.blue.clone(),
            components,
            component_of,
            position,
        };
        self.check_aux(t, &aux)?;
        Ok(aux)
    }

    fn check_aux(&self, t: &Transversal, aux: &AuxGraph) -> Result<()> {
        if aux.path_count() * 2 != self.odd_cycles.len() {
            return Err(TransversalError::InternalInvariantViolation(format!(
                "B(T) has {} paths for {} odd cycles",
                aux.path_count(),
                self.odd_cycles.len()
            )));
        }
        for c in &aux.components {
            match c.kind {
                AuxKind::Path => {
                    let ends = [c.vertices[0], *c.vertices.last().expect("non-empty")];
                    if ends.iter().any(|&e| !t.contains(e)) {
                        return Err(TransversalError::InternalInvariantViolation(
                            "auxiliary path endpoint outside T".into(),
                        ));
                    }
                }
                AuxKind::Cycle if c.vertices.len() % 2 == 1 => {
                    return Err(TransversalError::InternalInvariantViolation("odd auxiliary cycle".into()));
                }
                AuxKind::Cycle => {}
            }
        }
        Ok(())
    }

    pub fn cost_report(&self, t: &Transversal, aux: &AuxGraph) -> CostReport {
        let mut bad = Vec::new();
        let mut swallowed = Vec::new();
        let mut cost = 0u64;
        for (id, &r) in t.rep.iter().enumerate() {
            let q = aux.component_of(r);
            if aux.component_of(self.succ(r)) != q {
                continue;
            }
            bad.push(r);
            let len = self.odd_cycles[id].len();
            let mut v = self.succ(r);
            let mut dist = 1u64;
            let mut found = None;
            for _ in 1..len {
                if aux.component_of(v) != q {
                    found = Some(dist);
                    break;
                }
                v = self.succ(v);
                dist += 1;
            }
            match found {
                Some(d) => cost += d,
                None => swallowed.push(id),
            }
        }
        bad.sort_unstable();
        CostReport {
            path_length_sum: aux.path_length_sum(),
            bad_vertices: bad,
            swallowed_cycles: swallowed,
            cost,
        }
    }

    /// Applies improvement moves until no representative is bad.
    ///
    /// A swallowed cycle (lowest id first) moves its representative to the
    /// last cycle vertex along its path, which strictly shortens the paths.
    /// Otherwise the least bad representative `t` moves to `t⁺⁺`, which
    /// swaps the red edge `t⁺t⁺⁺` for `tt⁺` and lowers `(path sum, cost)`
    /// lexicographically. Every move is checked against both facts.
    pub fn optimize_transversal(&self, t0: &Transversal) -> Result<(Transversal, OptimizationTrace)> {
        self.validate(t0)?;
        let mut t = t0.clone();
        let mut trace = OptimizationTrace::default();
        let mut aux = self.build_aux(&t)?;
        let mut report = self.cost_report(&t, &aux);
        loop {
            let (kind, cycle, from, to) = if let Some(&cycle) = report.swallowed_cycles.first() {
                let from = t.rep[cycle];
                let comp = &aux.components[aux.component_of(from)];
                let seq: Vec<VertexId> = if comp.vertices[0] == from {
                    comp.vertices.clone()
                } else {
                    comp.vertices.iter().rev().copied().collect()
                };
                let to = *seq
                    .iter()
                    .rev()
                    .find(|&&v| self.cycle_of[v] == Some(cycle))
                    .expect("path contains its own representative");
                (MoveKind::Unswallow, cycle, from, to)
            } else if let Some(&from) = report.bad_vertices.first() {
                let cycle = self.cycle_of[from].expect("representative on odd cycle");
                (MoveKind::Rotate, cycle, from, self.succ(self.succ(from)))
            } else {
                break;
            };
            if from == to {
                return Err(TransversalError::InternalInvariantViolation(format!(
                    "move on cycle {cycle} does not change the representative"
                )));
            }

            let mut next = t.clone();
            next.rep[cycle] = to;
            let next_aux = self.build_aux(&next)?;
            let next_report = self.cost_report(&next, &next_aux);
            let before = report.potential();
            let after = next_report.potential();
            match kind {
                MoveKind::Unswallow => {
                    if after.0 >= before.0 {
                        return Err(TransversalError::InternalInvariantViolation(format!(
                            "unswallow move on cycle {cycle} did not shorten paths ({} -> {})",
                            before.0, after.0
                        )));
                    }
                }
                MoveKind::Rotate => {
                    let diff = aux.red_matching.symmetric_difference(&next_aux.red_matching);
                    if diff.len() != 2 {
                        return Err(TransversalError::InternalInvariantViolation(format!(
                            "rotation at {from} changed {} matching edges",
                            diff.len()
                        )));
                    }
                    if after >= before {
                        return Err(TransversalError::InternalInvariantViolation(format!(
                            "rotation at {from} did not lower the potential ({before:?} -> {after:?})"
                        )));
                    }
                }
            }
            trace.moves.push(MoveRecord {
                kind,
                cycle,
                from,
                to,
                before,
                after,
            });
            t = next;
            aux = next_aux;
            report = next_report;
        }
        Ok((t, trace))
    }

    /// Pairs `(t, t⁺)` for representatives of long odd cycles.
    pub fn unhappy_candidates(&self, t: &Transversal) -> Vec<(VertexId, VertexId)> {
        t.rep
            .iter()
            .enumerate()
            .filter(|&(id, _)| self.is_long[id])
            .map(|(_, &r)| (r, self.succ(r)))
            .collect()
    }

    /// Chooses each component's colouring in turn, minimising the
    /// conditional expected number of unhappy representatives given the
    /// components already fixed (undecided pairs count one half).
    pub fn derandomized_coloring(&self, aux: &AuxGraph, t: &Transversal) -> Result<TwoColoring> {
        let pairs = self.unhappy_candidates(t);
        for &(r, s) in &pairs {
            if aux.component_of(r) == aux.component_of(s) {
                return Err(TransversalError::BadVertexPresent(r));
            }
        }
        let parity = |v: VertexId| aux.position(v) % 2 == 0;
        // expectation doubled so every term is an integer
        let twice_expected = |flips: &[Option<bool>]| -> u64 {
            pairs
                .iter()
                .map(|&(r, s)| {
                    match (flips[aux.component_of(r)], flips[aux.component_of(s)]) {
                        (Some(a), Some(b)) => 2 * u64::from((parity(r) != a) == (parity(s) != b)),
                        _ => 1,
                    }
                })
                .sum()
        };
        let mut flips: Vec<Option<bool>> = vec![None; aux.components.len()];
        for c in 0..flips.len() {
            flips[c] = Some(false);
            let keep = twice_expected(&flips);
            flips[c] = Some(true);
            let flip = twice_expected(&flips);
            flips[c] = Some(flip < keep);
        }
        let flips: Vec<bool> = flips.into_iter().map(|f| f.expect("decided")).collect();
        let black: Vec<bool> = (0..self.instance.n())
            .map(|v| parity(v) != flips[aux.component_of(v)])
            .collect();
        let mut unhappy: Vec<VertexId> = pairs
            .iter()
            .filter(|&&(r, s)| black[r] == black[s])
            .map(|&(r, _)| r)
            .collect();
        unhappy.sort_unstable();
        if 2 * unhappy.len() > pairs.len() {
            return Err(TransversalError::InternalInvariantViolation(format!(
                "{} unhappy representatives exceed half of {}",
                unhappy.len(),
                pairs.len()
            )));
        }
        Ok(TwoColoring { black, flips, unhappy })
    }
}

/// Result of the long-odd-cycle pipeline, in original vertex ids.
#[derive(Debug, Clone)]
pub struct LongOddOutcome {
    pub z: Vec<VertexId>,
    pub coloring: PartialColoring,
    /// `|𝒞|` of the original host.
    pub long_odd_cycles: usize,
    pub normalized: NormalizedInstance,
    pub transversal: Transversal,
    pub trace: OptimizationTrace,
    pub final_report: CostReport,
    pub aux_components: usize,
    pub unhappy: Vec<VertexId>,
}

/// Checks that inside each colour side every vertex meets at most one red
/// and at most one blue edge.
pub fn check_side_degrees(instance: &GluedInstance, side: &[Option<bool>]) -> Result<()> {
    for v in 0..instance.n() {
        let Some(s) = side[v] else { continue };
        let red = instance
            .host()
            .neighbors(v)
            .iter()
            .filter(|&&w| side[w] == Some(s))
            .count();
        let blue = match instance.block_of(v) {
            Some(b) => instance.blocks().blocks()[b]
                .iter()
                .filter(|&&w| w != v && side[w] == Some(s))
                .count(),
            None => 0,
        };
        if red > 1 || blue > 1 {
            return Err(TransversalError::InternalInvariantViolation(format!(
                "vertex {v} has {red} red and {blue} blue edges inside its side"
            )));
        }
    }
    Ok(())
}

/// Two-colours the red/blue graph inside each side by breadth-first search
/// from the least vertex of every component. Side `false` (black) gets
/// colours 1 and 2, side `true` (white) gets 3 and 4.
fn color_sides(instance: &GluedInstance, side: &[Option<bool>]) -> Result<PartialColoring> {
    let n = instance.n();
    let mut coloring = PartialColoring::uncolored(n);
    let neighbors = |v: VertexId| -> Vec<VertexId> {
        let mut out: Vec<VertexId> = instance.host().neighbors(v).to_vec();
        if let Some(b) = instance.block_of(v) {
            out.extend(instance.blocks().blocks()[b].iter().copied().filter(|&w| w != v));
        }
        out.retain(|&w| side[w] == side[v]);
        out
    };
    for start in 0..n {
        let Some(s) = side[start] else { continue };
        if coloring.color(start).is_some() {
            continue;
        }
        let base = if s { 3 } else { 1 };
        coloring.set(start, base);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            let cv = coloring.color(v).expect("queued vertices are coloured");
            for w in neighbors(v) {
                match coloring.color(w) {
                    None => {
                        coloring.set(w, 2 * base + 1 - cv);
                        queue.push_back(w);
                    }
                    Some(cw) if cw == cv => {
                        return Err(TransversalError::InternalInvariantViolation(format!(
                            "side graph is not bipartite at edge {v}-{w}"
                        )));
                    }
                    Some(_) => {}
                }
            }
        }
    }
    Ok(coloring)
}

/// Runs normalization, transversal optimisation, derandomised colouring and
/// side colouring. `Z` holds at most one vertex per long odd cycle and at
/// most `⌊|𝒞|/2⌋` vertices overall.
pub fn longodd_pipeline(instance: &GluedInstance, budget: Budget) -> Result<LongOddOutcome> {
    let long_odd_cycles = decompose(instance.host()).long_odd.len();
    let normalized = normalize(instance, budget)?;
    let engine = TransversalEngine::new(&normalized.instance)?;
    if engine.long_cycle_count() > long_odd_cycles {
        return Err(TransversalError::InternalInvariantViolation(
            "normalization increased the number of long odd cycles".into(),
        ));
    }
    let (t, trace) = engine.optimize_transversal(&engine.initial_transversal())?;
    let aux = engine.build_aux(&t)?;
    let final_report = engine.cost_report(&t, &aux);
    let two = engine.derandomized_coloring(&aux, &t)?;

    let norm_n = normalized.instance.n();
    let mut side: Vec<Option<bool>> = two.black.iter().map(|&b| Some(!b)).collect();
    for &z in &two.unhappy {
        side[z] = None;
    }
    check_side_degrees(&normalized.instance, &side)?;
    let full = color_sides(&normalized.instance, &side)?;
    debug_assert_eq!(full.n(), norm_n);

    let coloring = pull_back_coloring(&full, &normalized.origin_map);
    let mut z = Vec::with_capacity(two.unhappy.len());
    for &u in &two.unhappy {
        let original = normalized
            .origin_map
            .iter()
            .position(|&w| w == u)
            .ok_or_else(|| {
                TransversalError::InternalInvariantViolation(format!("unhappy vertex {u} was added by normalization"))
            })?;
        z.push(original);
    }
    z.sort_unstable();
    if coloring.z() != z {
        return Err(TransversalError::InternalInvariantViolation(
            "pulled-back colouring leaves vertices outside Z uncoloured".into(),
        ));
    }
    Ok(LongOddOutcome {
        z,
        coloring,
        long_odd_cycles,
        normalized,
        transversal: t,
        trace,
        final_report,
        aux_components: aux.components.len(),
        unhappy: two.unhappy,
    })
}
