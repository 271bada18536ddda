//! Exact brute-force solvers. They stand in for the existence results the
//! constructive pipelines rely on (3-colourability of cycle-plus-triangles
//! graphs, ISR existence, equitable colourings) and double as ground truth
//! in tests.
//!
//! Every search counts its nodes against a [`Budget`] and gives up with
//! [`OracleError::BudgetExceeded`] rather than running unbounded.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{PartialColoring, RepresentativeSet, SimpleGraph, VertexId};

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: u64,
}

impl Budget {
    pub fn nodes(max_nodes: u64) -> Self {
        Budget { max_nodes }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_nodes: DEFAULT_NODE_BUDGET,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("search exceeded the budget of {0} nodes")]
    BudgetExceeded(u64),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("exhausted the search space without a solution: {0}")]
    Infeasible(String),
}

struct Meter {
    used: u64,
    limit: u64,
}

impl Meter {
    fn new(budget: Budget) -> Self {
        Meter {
            used: 0,
            limit: budget.max_nodes,
        }
    }

    fn tick(&mut self) -> Result<(), OracleError> {
        self.used += 1;
        if self.used > self.limit {
            Err(OracleError::BudgetExceeded(self.limit))
        } else {
            Ok(())
        }
    }
}

/// A proper colouring with colours `1..=k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringCertificate {
    pub colors: Vec<u8>,
    pub k: u8,
}

impl ColoringCertificate {
    pub fn is_proper(&self, g: &SimpleGraph) -> bool {
        self.colors.len() == g.n()
            && self.colors.iter().all(|&c| c >= 1 && c <= self.k)
            && g.edges().iter().all(|&(u, v)| self.colors[u] != self.colors[v])
    }

    /// Colour classes, indexed by colour − 1.
    pub fn classes(&self) -> Vec<Vec<VertexId>> {
        let mut out = vec![Vec::new(); self.k as usize];
        for (v, &c) in self.colors.iter().enumerate() {
            out[c as usize - 1].push(v);
        }
        out
    }

    pub fn to_partial(&self) -> PartialColoring {
        PartialColoring::from_colors(self.colors.iter().map(|&c| Some(c)).collect())
    }
}

/// First edge (lexicographic) whose two ends are coloured alike. Uncoloured
/// vertices are ignored.
pub fn find_monochromatic_edge(g: &SimpleGraph, colors: &[Option<u8>]) -> Option<(VertexId, VertexId)> {
    g.edges().into_iter().find(|&(u, v)| match (colors[u], colors[v]) {
        (Some(a), Some(b)) => a == b,
        _ => false,
    })
}

/// Exact `k`-colouring by backtracking with forward checking.
///
/// The branching vertex is the uncoloured vertex with the most distinct
/// colours among its neighbours (ties: higher degree, then lower id), and
/// colours are tried in ascending order with a fresh colour only ever
/// opened as `max_used + 1`. Returns `Ok(None)` when no colouring exists.
pub fn exact_k_coloring(
    g: &SimpleGraph,
    k: usize,
    budget: Budget,
) -> Result<Option<ColoringCertificate>, OracleError> {
    if k == 0 {
        return Err(OracleError::PreconditionViolated("k must be at least 1".into()));
    }
    if k > u8::MAX as usize {
        return Err(OracleError::PreconditionViolated(format!("k = {k} is too large")));
    }
    let n = g.n();
    if n == 0 {
        return Ok(Some(ColoringCertificate {
            colors: Vec::new(),
            k: k as u8,
        }));
    }
    let mut search = KColoring {
        g,
        k,
        color: vec![0; n],
        forbid: vec![vec![0u16; k]; n],
        available: vec![k; n],
        max_used: 0,
        meter: Meter::new(budget),
    };
    if search.solve(0)? {
        Ok(Some(ColoringCertificate {
            colors: search.color.iter().map(|&c| c as u8).collect(),
            k: k as u8,
        }))
    } else {
        Ok(None)
    }
}

struct KColoring<'a> {
    g: &'a SimpleGraph,
    k: usize,
    // 0 = uncoloured, else 1..=k
    color: Vec<usize>,
    forbid: Vec<Vec<u16>>,
    available: Vec<usize>,
    max_used: usize,
    meter: Meter,
}

impl KColoring<'_> {
    fn select(&self) -> VertexId {
        let mut best = usize::MAX;
        let mut key = (0usize, 0usize);
        for v in 0..self.g.n() {
            if self.color[v] != 0 {
                continue;
            }
            let cand = (self.k - self.available[v], self.g.degree(v));
            if best == usize::MAX || cand > key {
                best = v;
                key = cand;
            }
        }
        best
    }

    fn assign(&mut self, v: VertexId, c: usize) -> bool {
        self.color[v] = c;
        let mut ok = true;
        for &w in self.g.neighbors(v) {
            let slot = &mut self.forbid[w][c - 1];
            *slot += 1;
            if *slot == 1 {
                self.available[w] -= 1;
                if self.color[w] == 0 && self.available[w] == 0 {
                    ok = false;
                }
            }
        }
        ok
    }

    fn unassign(&mut self, v: VertexId, c: usize) {
        self.color[v] = 0;
        for &w in self.g.neighbors(v) {
            let slot = &mut self.forbid[w][c - 1];
            *slot -= 1;
            if *slot == 0 {
                self.available[w] += 1;
            }
        }
    }

    fn solve(&mut self, colored: usize) -> Result<bool, OracleError> {
        if colored == self.g.n() {
            return Ok(true);
        }
        self.meter.tick()?;
        let v = self.select();
        let limit = self.k.min(self.max_used + 1);
        for c in 1..=limit {
            if self.forbid[v][c - 1] != 0 {
                continue;
            }
            let prev_max = self.max_used;
            self.max_used = self.max_used.max(c);
            if self.assign(v, c) && self.solve(colored + 1)? {
                return Ok(true);
            }
            self.unassign(v, c);
            self.max_used = prev_max;
        }
        Ok(false)
    }
}

/// Searches for an independent set meeting at least `target` of the
/// (disjoint) `sets`, at most one vertex each.
///
/// Sets are visited in index order; for each, member vertices are tried in
/// ascending order before the set is skipped, so the first solution found
/// is lexicographically greedy. `Ok(None)` only after the whole choice tree
/// has been exhausted.
pub fn exact_partial_isr(
    g: &SimpleGraph,
    sets: &[Vec<VertexId>],
    target: usize,
    budget: Budget,
) -> Result<Option<RepresentativeSet>, OracleError> {
    if target > sets.len() {
        return Err(OracleError::PreconditionViolated(format!(
            "target {target} exceeds the {} sets",
            sets.len()
        )));
    }
    let mut owner = vec![None; g.n()];
    for (i, set) in sets.iter().enumerate() {
        for &v in set {
            if v >= g.n() {
                return Err(OracleError::PreconditionViolated(format!("vertex {v} out of range")));
            }
            if owner[v].replace(i).is_some() {
                return Err(OracleError::PreconditionViolated(format!("sets overlap at {v}")));
            }
        }
    }
    let sorted: Vec<Vec<VertexId>> = sets
        .iter()
        .map(|s| {
            let mut s = s.clone();
            s.sort_unstable();
            s
        })
        .collect();
    let mut search = PartialIsr {
        g,
        sets: &sorted,
        target,
        blocked: vec![0; g.n()],
        chosen: vec![None; sets.len()],
        meter: Meter::new(budget),
    };
    if search.solve(0, 0)? {
        let mut rep = RepresentativeSet::new();
        for (i, v) in search.chosen.iter().enumerate() {
            if let Some(v) = v {
                rep.insert(i, *v);
            }
        }
        Ok(Some(rep))
    } else {
        Ok(None)
    }
}

struct PartialIsr<'a> {
    g: &'a SimpleGraph,
    sets: &'a [Vec<VertexId>],
    target: usize,
    // number of chosen neighbours
    blocked: Vec<u32>,
    chosen: Vec<Option<VertexId>>,
    meter: Meter,
}

impl PartialIsr<'_> {
    fn reachable(&self, from: usize) -> usize {
        self.sets[from..]
            .iter()
            .filter(|s| s.iter().any(|&v| self.blocked[v] == 0))
            .count()
    }

    fn solve(&mut self, i: usize, picked: usize) -> Result<bool, OracleError> {
        if i == self.sets.len() {
            return Ok(picked >= self.target);
        }
        self.meter.tick()?;
        if picked + self.reachable(i) < self.target {
            return Ok(false);
        }
        for idx in 0..self.sets[i].len() {
            let v = self.sets[i][idx];
            if self.blocked[v] != 0 {
                continue;
            }
            self.chosen[i] = Some(v);
            for &w in self.g.neighbors(v) {
                self.blocked[w] += 1;
            }
            let found = self.solve(i + 1, picked + 1)?;
            if found {
                return Ok(true);
            }
            for &w in self.g.neighbors(v) {
                self.blocked[w] -= 1;
            }
            self.chosen[i] = None;
        }
        // skip this set if the remaining sets can still reach the target
        if picked + self.sets.len() - i > self.target {
            return self.solve(i + 1, picked);
        }
        Ok(false)
    }
}

/// Total domination number; `Infinite` iff the graph has an isolated vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TotalDomination {
    Finite(usize),
    Infinite,
}

impl TotalDomination {
    pub fn finite(self) -> Option<usize> {
        match self {
            TotalDomination::Finite(k) => Some(k),
            TotalDomination::Infinite => None,
        }
    }
}

impl std::ops::Add for TotalDomination {
    type Output = TotalDomination;

    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (TotalDomination::Finite(a), TotalDomination::Finite(b)) => TotalDomination::Finite(a + b),
            _ => TotalDomination::Infinite,
        }
    }
}

/// Smallest `X` such that every vertex has a neighbour in `X`.
///
/// Iterative deepening on `|X|`; at each node the least undominated vertex
/// must be dominated by one of its neighbours, which gives the branching.
pub fn total_domination_number(g: &SimpleGraph, budget: Budget) -> Result<TotalDomination, OracleError> {
    let n = g.n();
    if (0..n).any(|v| g.degree(v) == 0) {
        return Ok(TotalDomination::Infinite);
    }
    let mut search = TotDom {
        g,
        dominated: vec![0; n],
        in_set: vec![false; n],
        undominated: n,
        max_degree: g.max_degree(),
        meter: Meter::new(budget),
    };
    for bound in 0..=n {
        if search.solve(0, bound)? {
            return Ok(TotalDomination::Finite(bound));
        }
    }
    Err(OracleError::Infeasible("no total dominating set".into()))
}

struct TotDom<'a> {
    g: &'a SimpleGraph,
    dominated: Vec<u32>,
    in_set: Vec<bool>,
    undominated: usize,
    max_degree: usize,
    meter: Meter,
}

impl TotDom<'_> {
    fn toggle(&mut self, w: VertexId, add: bool) {
        self.in_set[w] = add;
        for &x in self.g.neighbors(w) {
            if add {
                self.dominated[x] += 1;
                if self.dominated[x] == 1 {
                    self.undominated -= 1;
                }
            } else {
                self.dominated[x] -= 1;
                if self.dominated[x] == 0 {
                    self.undominated += 1;
                }
            }
        }
    }

    fn solve(&mut self, size: usize, bound: usize) -> Result<bool, OracleError> {
        if self.undominated == 0 {
            return Ok(true);
        }
        self.meter.tick()?;
        if size == bound || self.undominated > (bound - size) * self.max_degree {
            return Ok(false);
        }
        let u = (0..self.g.n())
            .find(|&v| self.dominated[v] == 0)
            .expect("some vertex is undominated");
        for idx in 0..self.g.degree(u) {
            let w = self.g.neighbors(u)[idx];
            if self.in_set[w] {
                continue;
            }
            self.toggle(w, true);
            let found = self.solve(size + 1, bound)?;
            self.toggle(w, false);
            if found {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Proper `k`-colouring whose class sizes differ pairwise by at most one.
///
/// Backtracking over vertices in breadth-first order from the least
/// vertex of each component, with every class capped at `⌈n/k⌉` and at
/// most `n mod k` classes allowed to reach the cap (when `k ∤ n`).
pub fn exact_equitable_coloring(
    g: &SimpleGraph,
    k: usize,
    budget: Budget,
) -> Result<ColoringCertificate, OracleError> {
    if k <= g.max_degree() {
        return Err(OracleError::PreconditionViolated(format!(
            "k = {k} must exceed the maximum degree {}",
            g.max_degree()
        )));
    }
    if k > u8::MAX as usize {
        return Err(OracleError::PreconditionViolated(format!("k = {k} is too large")));
    }
    let n = g.n();
    let mut search = Equitable {
        g,
        order: bfs_order(g),
        base: n / k,
        big_allowed: n % k,
        big_used: 0,
        sizes: vec![0; k],
        color: vec![usize::MAX; n],
        classes_open: 0,
        meter: Meter::new(budget),
    };
    if search.solve(0)? {
        Ok(ColoringCertificate {
            colors: search.color.iter().map(|&c| (c + 1) as u8).collect(),
            k: k as u8,
        })
    } else {
        Err(OracleError::Infeasible(format!("no equitable {k}-colouring")))
    }
}

fn bfs_order(g: &SimpleGraph) -> Vec<VertexId> {
    let n = g.n();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut head = order.len();
        order.push(s);
        while head < order.len() {
            let v = order[head];
            head += 1;
            for &w in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    order.push(w);
                }
            }
        }
    }
    order
}

struct Equitable<'a> {
    g: &'a SimpleGraph,
    order: Vec<VertexId>,
    base: usize,
    big_allowed: usize,
    big_used: usize,
    sizes: Vec<usize>,
    color: Vec<usize>,
    classes_open: usize,
    meter: Meter,
}

impl Equitable<'_> {
    fn fits(&self, c: usize) -> bool {
        let s = self.sizes[c];
        s < self.base || (s == self.base && self.big_used < self.big_allowed)
    }

    fn solve(&mut self, idx: usize) -> Result<bool, OracleError> {
        if idx == self.order.len() {
            return Ok(true);
        }
        self.meter.tick()?;
        let v = self.order[idx];
        let k = self.sizes.len();
        let limit = k.min(self.classes_open + 1);
        for c in 0..limit {
            if !self.fits(c) || self.g.neighbors(v).iter().any(|&w| self.color[w] == c) {
                continue;
            }
            let opens = c == self.classes_open;
            let grows_big = self.sizes[c] == self.base;
            self.color[v] = c;
            self.sizes[c] += 1;
            if grows_big {
                self.big_used += 1;
            }
            if opens {
                self.classes_open += 1;
            }
            if self.solve(idx + 1)? {
                return Ok(true);
            }
            if opens {
                self.classes_open -= 1;
            }
            if grows_big {
                self.big_used -= 1;
            }
            self.sizes[c] -= 1;
            self.color[v] = usize::MAX;
        }
        Ok(false)
    }
}

/// Outcome of the admissibility test for a pair of set families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Admissibility {
    Admissible,
    /// The first edge (lexicographic) satisfying none of the four conditions.
    Violated(VertexId, VertexId),
}

impl Admissibility {
    pub fn is_admissible(self) -> bool {
        self == Admissibility::Admissible
    }
}

/// Membership map for a family of pairwise disjoint sets.
pub fn membership(n: usize, family: &[Vec<VertexId>]) -> Vec<Option<usize>> {
    let mut of = vec![None; n];
    for (i, set) in family.iter().enumerate() {
        for &v in set {
            of[v] = Some(i);
        }
    }
    of
}

/// `(X, Y)` is admissible when every edge lies inside one X-set, inside one
/// Y-set, avoids every X-set, or avoids every Y-set.
pub fn check_admissible(g: &SimpleGraph, xs: &[Vec<VertexId>], ys: &[Vec<VertexId>]) -> Admissibility {
    let x_of = membership(g.n(), xs);
    let y_of = membership(g.n(), ys);
    for (u, v) in g.edges() {
        let in_one_x = x_of[u].is_some() && x_of[u] == x_of[v];
        let in_one_y = y_of[u].is_some() && y_of[u] == y_of[v];
        let outside_x = x_of[u].is_none() && x_of[v].is_none();
        let outside_y = y_of[u].is_none() && y_of[v].is_none();
        if !(in_one_x || in_one_y || outside_x || outside_y) {
            return Admissibility::Violated(u, v);
        }
    }
    Admissibility::Admissible
}
