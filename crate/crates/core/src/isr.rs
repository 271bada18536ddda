//! Independent sets of representatives and the few-triangles colouring.
//!
//! The pipeline picks an independent set `R` meeting every block and all
//! but `⌊|𝒯|/4⌋` host cycles, cuts one edge `F` from each cycle `R` misses,
//! closes what is left of the host into a Hamiltonian cycle, glues a
//! triangle on every block minus `R`, 3-colours the result and gives `R` the
//! fourth colour. One endpoint of every monochromatic edge of `F` goes to
//! `Z`.

use thiserror::Error;

use crate::graph::{
    decompose, restricted_union_subgraph, strands, GluedInstance, GraphError, PartialColoring,
    RepresentativeSet, SimpleGraph, Strand, VertexId,
};
use crate::oracles::{
    check_admissible, exact_k_coloring, exact_partial_isr, find_monochromatic_edge, membership,
    total_domination_number, Admissibility, Budget, OracleError, TotalDomination,
};
use crate::two_isr::{two_isrs, TwoIsrError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IsrError {
    #[error("families are not admissible: edge {u}-{v}")]
    NotAdmissible { u: VertexId, v: VertexId },
    #[error("not an ISR: {0}")]
    NotAnIsr(String),
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    TwoIsr(#[from] TwoIsrError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

type Result<T> = std::result::Result<T, IsrError>;

/// Adds `k` disjoint copies of `K_m` (`m = sets.len()`); set `i` gains
/// vertex `i` of every copy. A full ISR of the result exists iff the
/// original sets have a partial ISR of size at least `m - k`.
pub fn deficiency_reduction(
    g: &SimpleGraph,
    sets: &[Vec<VertexId>],
    k: usize,
) -> (SimpleGraph, Vec<Vec<VertexId>>) {
    let m = sets.len();
    let mut out = g.clone();
    let mut sets = sets.to_vec();
    for _ in 0..k {
        out = out.disjoint_union(&SimpleGraph::complete(m));
    }
    for j in 0..k {
        for (i, set) in sets.iter_mut().enumerate() {
            set.push(g.n() + j * m + i);
        }
    }
    (out, sets)
}

/// Kind of an edge joining `R_X` and `R_Y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeClass {
    X,
    Y,
    Both,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Combination {
    /// The independent double transversal, ascending.
    pub members: Vec<VertexId>,
    /// Neighbours of dangerous vertices, in deletion order.
    pub deleted: Vec<VertexId>,
    /// `R_Y` vertices with positive degree removed by the final sweep.
    pub swept: Vec<VertexId>,
}

impl Combination {
    /// Least member in each set of `family`.
    pub fn assignment(&self, family: &[Vec<VertexId>]) -> RepresentativeSet {
        let mut rep = RepresentativeSet::new();
        for (i, set) in family.iter().enumerate() {
            if let Some(&v) = self.members.iter().find(|v| set.contains(v)) {
                rep.insert(i, v);
            }
        }
        rep
    }
}

/// Merges an ISR of `xs` and an ISR of `ys` into one independent set that
/// still meets every set of both families.
///
/// Starting from `R_X ∪ R_Y`, repeatedly take the least dangerous vertex
/// (degree one, its edge not of its own family's class) and delete its
/// neighbour; when none is left, delete every `R_Y` vertex of positive
/// degree at once.
pub fn combine_isrs(
    g: &SimpleGraph,
    xs: &[Vec<VertexId>],
    ys: &[Vec<VertexId>],
    rx: &RepresentativeSet,
    ry: &RepresentativeSet,
) -> Result<Combination> {
    if let Admissibility::Violated(u, v) = check_admissible(g, xs, ys) {
        return Err(IsrError::NotAdmissible { u, v });
    }
    if !rx.is_isr(g, xs) {
        return Err(IsrError::NotAnIsr("R_X".into()));
    }
    if !ry.is_isr(g, ys) {
        return Err(IsrError::NotAnIsr("R_Y".into()));
    }
    let n = g.n();
    let x_of = membership(n, xs);
    let y_of = membership(n, ys);
    let classify = |u: VertexId, v: VertexId| {
        let x = x_of[u].is_some() && x_of[u] == x_of[v];
        let y = y_of[u].is_some() && y_of[u] == y_of[v];
        match (x, y) {
            (true, true) => Some(EdgeClass::Both),
            (true, false) => Some(EdgeClass::X),
            (false, true) => Some(EdgeClass::Y),
            (false, false) => None,
        }
    };
    let mut in_rx = vec![false; n];
    let mut in_ry = vec![false; n];
    for v in rx.members() {
        in_rx[v] = true;
    }
    for v in ry.members() {
        in_ry[v] = true;
    }
    let mut alive: Vec<bool> = (0..n).map(|v| in_rx[v] || in_ry[v]).collect();

    let mut x_edges = vec![0usize; n];
    let mut y_edges = vec![0usize; n];
    for (u, v) in g.edges() {
        if !(alive[u] && alive[v]) {
            continue;
        }
        match classify(u, v) {
            None => {
                return Err(IsrError::InternalInvariantViolation(format!(
                    "edge {u}-{v} between the ISRs is neither an X- nor a Y-edge"
                )))
            }
            Some(c) => {
                for w in [u, v] {
                    if c != EdgeClass::Y {
                        x_edges[w] += 1;
                    }
                    if c != EdgeClass::X {
                        y_edges[w] += 1;
                    }
                }
            }
        }
    }
    for v in 0..n {
        if (in_rx[v] && y_edges[v] > 1) || (in_ry[v] && x_edges[v] > 1) {
            return Err(IsrError::InternalInvariantViolation(format!(
                "vertex {v} meets more than one edge of the other family's class"
            )));
        }
    }

    let live_neighbors = |alive: &[bool], v: VertexId| -> Vec<VertexId> {
        g.neighbors(v).iter().copied().filter(|&w| alive[w]).collect()
    };
    let mut deleted = Vec::new();
    loop {
        let dangerous = (0..n).find_map(|v| {
            if !alive[v] {
                return None;
            }
            let nb = live_neighbors(&alive, v);
            if nb.len() != 1 {
                return None;
            }
            let class = classify(v, nb[0]);
            let own_x = matches!(class, Some(EdgeClass::X | EdgeClass::Both));
            let own_y = matches!(class, Some(EdgeClass::Y | EdgeClass::Both));
            ((in_rx[v] && !own_x) || (in_ry[v] && !own_y)).then_some(nb[0])
        });
        match dangerous {
            Some(w) => {
                alive[w] = false;
                deleted.push(w);
            }
            None => break,
        }
    }
    let swept: Vec<VertexId> = (0..n)
        .filter(|&v| alive[v] && in_ry[v] && !live_neighbors(&alive, v).is_empty())
        .collect();
    for &v in &swept {
        alive[v] = false;
    }
    let members: Vec<VertexId> = (0..n).filter(|&v| alive[v]).collect();

    if !g.is_independent(&members) {
        return Err(IsrError::InternalInvariantViolation("combined set is not independent".into()));
    }
    for (name, family) in [("X", xs), ("Y", ys)] {
        if let Some(i) = family.iter().position(|s| !s.iter().any(|&v| alive[v])) {
            return Err(IsrError::InternalInvariantViolation(format!(
                "combined set misses {name}-set {i}"
            )));
        }
    }
    Ok(Combination {
        members,
        deleted,
        swept,
    })
}

/// Partial ISR of the host cycles in the simple view.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclePartialIsr {
    /// Vertex sets of all host cycles, ordered by least vertex.
    pub cycles: Vec<Vec<VertexId>>,
    /// Indices of the represented cycles, ascending.
    pub represented: Vec<usize>,
    /// Keyed by cycle index.
    pub isr: RepresentativeSet,
    /// Allowed deficiency `⌊|𝒯|/4⌋`.
    pub deficiency: usize,
}

impl CyclePartialIsr {
    /// The represented cycles and their representatives, reindexed.
    pub fn subfamily(&self) -> (Vec<Vec<VertexId>>, RepresentativeSet) {
        let mut rep = RepresentativeSet::new();
        let family = self
            .represented
            .iter()
            .enumerate()
            .map(|(j, &i)| {
                rep.insert(j, self.isr.get(i).expect("represented cycle has a vertex"));
                self.cycles[i].clone()
            })
            .collect();
        (family, rep)
    }
}

pub fn find_cycle_partial_isr(instance: &GluedInstance, budget: Budget) -> Result<CyclePartialIsr> {
    let decomp = decompose(instance.host());
    let cycles = decomp.cycles();
    let deficiency = decomp.triangles.len() / 4;
    let target = cycles.len().saturating_sub(deficiency);
    let isr = exact_partial_isr(&instance.simple_view(), &cycles, target, budget)?.ok_or_else(|| {
        IsrError::InternalInvariantViolation(format!(
            "no partial ISR of {target} of the {} host cycles",
            cycles.len()
        ))
    })?;
    Ok(CyclePartialIsr {
        represented: isr.set_indices(),
        cycles,
        isr,
        deficiency,
    })
}

/// Quantities behind the deficiency bound for one selection `S` of cycles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeficiencyAudit {
    pub selection: Vec<usize>,
    pub vertices: usize,
    pub total_domination: TotalDomination,
    /// `2 γ_t(H_S) ≥ |V(H_S)|`.
    pub half_vertices_ok: bool,
    /// `|V(H_S)| + |𝒯| ≥ 4|S|`.
    pub size_ok: bool,
    /// `γ_t(H_S) + 2k + 1 ≥ 2|S|`.
    pub deficiency_ok: bool,
}

pub fn audit_deficiency_hypothesis(
    instance: &GluedInstance,
    selection: &[usize],
    budget: Budget,
) -> Result<DeficiencyAudit> {
    let decomp = decompose(instance.host());
    let cycles = decomp.cycles();
    let t = decomp.triangles.len();
    let k = t / 4;
    let hs = restricted_union_subgraph(instance, &cycles, selection)?;
    let vertices = hs.vertices.len();
    let td = total_domination_number(&hs.graph.simple(), budget)?;
    let s = selection.len();
    let (half_vertices_ok, deficiency_ok) = match td {
        TotalDomination::Infinite => (true, true),
        TotalDomination::Finite(d) => (2 * d >= vertices, d + 2 * k + 1 >= 2 * s),
    };
    Ok(DeficiencyAudit {
        selection: selection.to_vec(),
        vertices,
        total_domination: td,
        half_vertices_ok,
        size_ok: vertices + t >= 4 * s,
        deficiency_ok,
    })
}

/// Joins the paths of a forest with maximum degree 2 on `vertices` into a
/// single cycle: paths in order of least vertex, each in canonical
/// direction, end of one to start of the next, last back to first.
/// Returns the added edges. Nothing is added for at most two vertices.
pub fn hamiltonian_closure(n: usize, forest: &[(VertexId, VertexId)], vertices: &[VertexId]) -> Result<Vec<(VertexId, VertexId)>> {
    if vertices.len() <= 2 {
        return Ok(Vec::new());
    }
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in forest {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut present = vec![false; n];
    for &v in vertices {
        present[v] = true;
    }
    let mut segments: Vec<(VertexId, VertexId)> = Vec::new();
    for strand in strands(&adj) {
        match strand {
            Strand::Isolate(v) if present[v] => segments.push((v, v)),
            Strand::Isolate(_) => {}
            Strand::Path(p) => segments.push((p[0], *p.last().expect("non-empty"))),
            Strand::Cycle(c) => {
                return Err(IsrError::InternalInvariantViolation(format!(
                    "residual graph has a cycle through {}",
                    c[0]
                )))
            }
        }
    }
    let m = segments.len();
    let mut added = Vec::with_capacity(m);
    for i in 0..m {
        let (_, end) = segments[i];
        let (start, _) = segments[(i + 1) % m];
        added.push((end, start));
    }

    let mut check = adj;
    for &(u, v) in &added {
        check[u].push(v);
        check[v].push(u);
    }
    let shapes = strands(&check);
    let spanning = shapes.iter().filter(|s| !matches!(s, Strand::Isolate(v) if !present[*v])).count();
    let is_cycle = shapes
        .iter()
        .any(|s| matches!(s, Strand::Cycle(c) if c.len() == vertices.len()));
    if spanning != 1 || !is_cycle {
        return Err(IsrError::InternalInvariantViolation("closure is not a Hamiltonian cycle".into()));
    }
    Ok(added)
}

#[derive(Debug, Clone)]
pub struct TriangleOutcome {
    pub z: Vec<VertexId>,
    pub coloring: PartialColoring,
    pub triangles: usize,
    pub cycles: usize,
    /// Cycles represented by the partial ISR.
    pub represented: usize,
    /// The independent set coloured 4, ascending.
    pub r: Vec<VertexId>,
    /// One cut edge per cycle missed by `R`.
    pub f: Vec<(VertexId, VertexId)>,
    pub combination: Combination,
}

pub fn triangle_pipeline(instance: &GluedInstance, budget: Budget) -> Result<TriangleOutcome> {
    let n = instance.n();
    let g = instance.simple_view();
    let decomp = decompose(instance.host());
    let triangles = decomp.triangles.len();

    let partial = find_cycle_partial_isr(instance, budget)?;
    let (xs, rx) = partial.subfamily();
    let ys = instance.blocks().as_sets();
    let ry = if instance.blocks_partition_vertices() {
        two_isrs(instance.host(), &ys)?.0
    } else {
        exact_partial_isr(&g, &ys, ys.len(), budget)?
            .ok_or_else(|| IsrError::InternalInvariantViolation("blocks have no ISR".into()))?
    };
    let combination = combine_isrs(&g, &xs, &ys, &rx, &ry)?;
    let mut in_r = vec![false; n];
    for &v in &combination.members {
        in_r[v] = true;
    }
    for (j, block) in instance.blocks().blocks().iter().enumerate() {
        if block.iter().filter(|&&v| in_r[v]).count() != 1 {
            return Err(IsrError::InternalInvariantViolation(format!(
                "R does not meet block {j} exactly once"
            )));
        }
    }

    let mut f = Vec::new();
    for cycle in &partial.cycles {
        if cycle.iter().any(|&v| in_r[v]) {
            continue;
        }
        let mut edges: Vec<(VertexId, VertexId)> = (0..cycle.len())
            .map(|i| {
                let (a, b) = (cycle[i], cycle[(i + 1) % cycle.len()]);
                (a.min(b), a.max(b))
            })
            .collect();
        edges.sort_unstable();
        f.push(edges[0]);
    }
    if f.len() > partial.deficiency {
        return Err(IsrError::InternalInvariantViolation(format!(
            "{} cut edges exceed the deficiency {}",
            f.len(),
            partial.deficiency
        )));
    }

    let residual: Vec<(VertexId, VertexId)> = instance
        .host()
        .edges()
        .iter()
        .copied()
        .filter(|&(u, v)| !in_r[u] && !in_r[v] && !f.contains(&(u, v)))
        .collect();
    let rest: Vec<VertexId> = (0..n).filter(|&v| !in_r[v]).collect();
    let closure = hamiltonian_closure(n, &residual, &rest)?;

    let mut jstar = SimpleGraph::from_edges(n, residual.iter().chain(&closure).copied());
    for block in instance.blocks().blocks() {
        let left: Vec<VertexId> = block.iter().copied().filter(|&v| !in_r[v]).collect();
        for i in 0..left.len() {
            for j in i + 1..left.len() {
                jstar.add_edge(left[i], left[j]);
            }
        }
    }
    let three = exact_k_coloring(&jstar, 3, budget)?.ok_or_else(|| {
        IsrError::InternalInvariantViolation("cycle-plus-triangles graph has no 3-colouring".into())
    })?;

    let mut coloring = PartialColoring::uncolored(n);
    for v in 0..n {
        coloring.set(v, if in_r[v] { 4 } else { three.colors[v] });
    }
    let mut z = Vec::new();
    for &(u, v) in &f {
        if coloring.color(u) == coloring.color(v) {
            z.push(u);
        }
    }
    for &v in &z {
        coloring.clear(v);
    }
    z.sort_unstable();
    if let Some((u, v)) = find_monochromatic_edge(&g, coloring.colors()) {
        return Err(IsrError::InternalInvariantViolation(format!(
            "monochromatic edge {u}-{v} after removing Z"
        )));
    }
    Ok(TriangleOutcome {
        z,
        coloring,
        triangles,
        cycles: partial.cycles.len(),
        represented: partial.represented.len(),
        r: combination.members.clone(),
        f,
        combination,
    })
}
