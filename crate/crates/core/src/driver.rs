//! Route selection, bound accounting and independent verification.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{decompose, GluedInstance, PartialColoring, VertexId};
use crate::isr::{triangle_pipeline, IsrError};
use crate::oracles::{find_monochromatic_edge, Budget, ColoringCertificate};
use crate::transversal::{longodd_pipeline, TransversalError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DriverError {
    #[error("host has {long_odd} long odd cycles and {triangles} triangles; need at most 1 or at most 3")]
    HypothesisNotMet { long_odd: usize, triangles: usize },
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
    #[error(transparent)]
    Transversal(#[from] TransversalError),
    #[error(transparent)]
    Isr(#[from] IsrError),
}

type Result<T> = std::result::Result<T, DriverError>;

/// Ordered so that ties on `|Z|` go to the long-odd route.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    LongOdd,
    Triangle,
}

impl Route {
    pub fn name(self) -> &'static str {
        match self {
            Route::LongOdd => "long-odd",
            Route::Triangle => "triangle",
        }
    }
}

/// Exact-rational bound arithmetic.
pub mod bounds {
    use num_rational::Ratio;

    pub type Q = Ratio<i64>;

    fn q(a: i64, b: i64) -> Q {
        Q::new(a, b)
    }

    /// Lower bound on coloured vertices from the long-odd route:
    /// `n_x + n_t + 9/10 n_l`.
    pub fn longodd_floor(n_x: usize, n_t: usize, n_l: usize) -> Q {
        Q::from(n_x as i64) + Q::from(n_t as i64) + q(9, 10) * Q::from(n_l as i64)
    }

    /// Lower bound from the triangle route: `n_x + 11/12 n_t + n_l`.
    pub fn triangle_floor(n_x: usize, n_t: usize, n_l: usize) -> Q {
        Q::from(n_x as i64) + q(11, 12) * Q::from(n_t as i64) + Q::from(n_l as i64)
    }

    /// The `λ` making the `n_t` and `n_l` coefficients of
    /// `λ·longodd + (1-λ)·triangle` equal: `λ + 11/12(1-λ) = 9/10 λ + (1-λ)`.
    pub fn equalizing_lambda() -> Q {
        // λ (1 - 11/12) + 11/12 = λ (9/10 - 1) + 1
        let a = Q::from(1) - q(11, 12) - (q(9, 10) - Q::from(1));
        (Q::from(1) - q(11, 12)) / a
    }

    pub fn convex_combination(n_x: usize, n_t: usize, n_l: usize, lambda: Q) -> Q {
        lambda * longodd_floor(n_x, n_t, n_l) + (Q::from(1) - lambda) * triangle_floor(n_x, n_t, n_l)
    }

    /// The common coefficient at the equalizing `λ`.
    pub fn combined_coefficient() -> Q {
        let l = equalizing_lambda();
        l + q(11, 12) * (Q::from(1) - l)
    }
}

/// Vertex accounting for one solved instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: usize,
    /// Host vertices on triangles.
    pub n_t: usize,
    /// Host vertices on long odd cycles.
    pub n_l: usize,
    pub n_x: usize,
    /// Coloured vertices.
    pub n_4: usize,
    pub z: usize,
    pub route: Route,
    pub long_odd_cycles: usize,
    pub triangles: usize,
    pub longodd_z: Option<usize>,
    pub triangle_z: Option<usize>,
    pub longodd_bound_met: bool,
    pub triangle_bound_met: bool,
    pub combined_bound_met: bool,
}

impl BoundReport {
    fn new(instance: &GluedInstance, route: Route, coloring: &PartialColoring) -> Self {
        let d = decompose(instance.host());
        let n = instance.n();
        let n_t = 3 * d.triangles.len();
        let n_l: usize = d.long_odd.iter().map(Vec::len).sum();
        let z = coloring.z().len();
        BoundReport {
            n,
            n_t,
            n_l,
            n_x: n - n_t - n_l,
            n_4: n - z,
            z,
            route,
            long_odd_cycles: d.long_odd.len(),
            triangles: d.triangles.len(),
            longodd_z: None,
            triangle_z: None,
            longodd_bound_met: false,
            triangle_bound_met: false,
            combined_bound_met: 22 * z <= n && 22 * (n - z) >= 21 * n,
        }
    }
}

pub fn longodd_bound_holds(z: usize, long_odd_cycles: usize, n: usize) -> bool {
    z <= long_odd_cycles / 2 && 10 * (n - z) >= 9 * n
}

pub fn triangle_bound_holds(z: usize, triangles: usize, n: usize) -> bool {
    z <= triangles / 4 && 12 * (n - z) >= 11 * n
}

/// The route a full colouring is guaranteed on, if any.
pub fn strong_route(instance: &GluedInstance) -> Option<Route> {
    let d = decompose(instance.host());
    if d.long_odd.len() <= 1 {
        Some(Route::LongOdd)
    } else if d.triangles.len() <= 3 {
        Some(Route::Triangle)
    } else {
        None
    }
}

/// Full proper 4-colouring when the host has at most one long odd cycle or
/// at most three triangles.
pub fn strong_color(instance: &GluedInstance, budget: Budget) -> Result<(ColoringCertificate, Route)> {
    let route = strong_route(instance).ok_or_else(|| {
        let d = decompose(instance.host());
        DriverError::HypothesisNotMet {
            long_odd: d.long_odd.len(),
            triangles: d.triangles.len(),
        }
    })?;
    let coloring = match route {
        Route::LongOdd => longodd_pipeline(instance, budget)?.coloring,
        Route::Triangle => triangle_pipeline(instance, budget)?.coloring,
    };
    if !coloring.is_full() {
        return Err(DriverError::InternalInvariantViolation(format!(
            "{} route left {} vertices uncoloured",
            route.name(),
            coloring.z().len()
        )));
    }
    let colors: Vec<u8> = coloring.colors().iter().map(|c| c.expect("full colouring")).collect();
    let cert = ColoringCertificate { colors, k: 4 };
    if let Some((u, v)) = find_monochromatic_edge(&instance.simple_view(), coloring.colors()) {
        return Err(DriverError::InternalInvariantViolation(format!("monochromatic edge {u}-{v}")));
    }
    Ok((cert, route))
}

/// Runs both routes, keeps the smaller `Z` (ties to the long-odd route) and
/// checks every bound in exact arithmetic.
pub fn partial_color_best(instance: &GluedInstance, budget: Budget) -> Result<(PartialColoring, BoundReport)> {
    let (long, tri) = rayon::join(|| longodd_pipeline(instance, budget), || triangle_pipeline(instance, budget));
    let long = long?;
    let tri = tri?;
    let n = instance.n();
    let (route, coloring) = if (long.z.len(), Route::LongOdd) <= (tri.z.len(), Route::Triangle) {
        (Route::LongOdd, long.coloring.clone())
    } else {
        (Route::Triangle, tri.coloring.clone())
    };
    let mut report = BoundReport::new(instance, route, &coloring);
    report.longodd_z = Some(long.z.len());
    report.triangle_z = Some(tri.z.len());
    report.longodd_bound_met = longodd_bound_holds(long.z.len(), report.long_odd_cycles, n);
    report.triangle_bound_met = triangle_bound_holds(tri.z.len(), report.triangles, n);
    if !report.longodd_bound_met {
        return Err(DriverError::InternalInvariantViolation(format!(
            "long-odd route left {} of {n} vertices with {} long odd cycles",
            long.z.len(),
            report.long_odd_cycles
        )));
    }
    if !report.triangle_bound_met {
        return Err(DriverError::InternalInvariantViolation(format!(
            "triangle route left {} of {n} vertices with {} triangles",
            tri.z.len(),
            report.triangles
        )));
    }
    let n4 = Ratio::from(report.n_4 as i64);
    let lambda = bounds::equalizing_lambda();
    let combo = bounds::convex_combination(report.n_x, report.n_t, report.n_l, lambda);
    let whole = bounds::combined_coefficient() * Ratio::from(n as i64);
    if n4 < combo || combo < whole || !report.combined_bound_met {
        return Err(DriverError::InternalInvariantViolation(format!(
            "combined bound fails: n_4 = {} with n = {n}",
            report.n_4
        )));
    }
    Ok((coloring, report))
}

/// What a colouring claims to satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Claim {
    /// Every vertex coloured.
    Strong,
    LongOdd,
    Triangle,
    /// `|Z| ≤ |V|/22`.
    Combined,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub claim: Claim,
    pub ok: bool,
    pub proper: bool,
    /// A monochromatic edge of the simple view, if any.
    pub witness: Option<(VertexId, VertexId)>,
    pub z: Vec<VertexId>,
    pub checks: Vec<CheckResult>,
}

fn check(name: &str, ok: bool, detail: String) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        ok,
        detail,
    }
}

/// Re-checks a colouring against an instance from scratch.
pub fn verify(instance: &GluedInstance, coloring: &PartialColoring, claim: Claim) -> VerificationReport {
    let n = instance.n();
    let mut checks = Vec::new();
    let size_ok = coloring.n() == n;
    checks.push(check("size", size_ok, format!("{} colours for {n} vertices", coloring.n())));
    if !size_ok {
        return VerificationReport {
            claim,
            ok: false,
            proper: false,
            witness: None,
            z: Vec::new(),
            checks,
        };
    }
    let bad_color = coloring.colors().iter().position(|c| matches!(c, Some(c) if !(1..=4).contains(c)));
    checks.push(check(
        "palette",
        bad_color.is_none(),
        bad_color.map_or_else(|| "colours in 1..=4".into(), |v| format!("vertex {v} has colour outside 1..=4")),
    ));
    let witness = find_monochromatic_edge(&instance.simple_view(), coloring.colors());
    let proper = witness.is_none();
    checks.push(check(
        "proper",
        proper,
        witness.map_or_else(|| "no monochromatic edge".into(), |(u, v)| format!("edge {u}-{v} is monochromatic")),
    ));

    let z = coloring.z();
    let d = decompose(instance.host());
    let mut on_cycle = vec![None; n];
    for (i, c) in d.cycles().iter().enumerate() {
        for &v in c {
            on_cycle[v] = Some(i);
        }
    }
    let mut hits = vec![0usize; d.cycles().len()];
    let mut off_cycle = Vec::new();
    for &v in &z {
        match on_cycle[v] {
            Some(i) => hits[i] += 1,
            None => off_cycle.push(v),
        }
    }
    let multi = hits.iter().position(|&h| h > 1);

    match claim {
        Claim::Strong => {
            checks.push(check("z-empty", z.is_empty(), format!("|Z| = {}", z.len())));
        }
        Claim::LongOdd => {
            let mut long_of = vec![false; n];
            for c in &d.long_odd {
                for &v in c {
                    long_of[v] = true;
                }
            }
            let outside = z.iter().find(|&&v| !long_of[v]);
            checks.push(check(
                "z-in-long-odd",
                outside.is_none(),
                outside.map_or_else(|| "Z inside long odd cycles".into(), |v| format!("vertex {v} is not on a long odd cycle")),
            ));
            checks.push(check(
                "per-cycle",
                multi.is_none(),
                multi.map_or_else(|| "at most one per cycle".into(), |i| format!("cycle {i} has {} vertices in Z", hits[i])),
            ));
            checks.push(check(
                "long-odd-bound",
                longodd_bound_holds(z.len(), d.long_odd.len(), n),
                format!("|Z| = {}, long odd cycles = {}, n = {n}", z.len(), d.long_odd.len()),
            ));
        }
        Claim::Triangle => {
            checks.push(check(
                "z-on-cycles",
                off_cycle.is_empty(),
                format!("{} vertices of Z off host cycles", off_cycle.len()),
            ));
            checks.push(check(
                "per-cycle",
                multi.is_none(),
                multi.map_or_else(|| "at most one per cycle".into(), |i| format!("cycle {i} has {} vertices in Z", hits[i])),
            ));
            checks.push(check(
                "triangle-bound",
                triangle_bound_holds(z.len(), d.triangles.len(), n),
                format!("|Z| = {}, triangles = {}, n = {n}", z.len(), d.triangles.len()),
            ));
        }
        Claim::Combined => {
            checks.push(check(
                "per-cycle",
                multi.is_none() && off_cycle.is_empty(),
                format!("{} vertices of Z off host cycles", off_cycle.len()),
            ));
            checks.push(check(
                "combined-bound",
                22 * z.len() <= n && 22 * (n - z.len()) >= 21 * n,
                format!("|Z| = {}, n = {n}", z.len()),
            ));
        }
    }
    VerificationReport {
        claim,
        ok: checks.iter().all(|c| c.ok),
        proper,
        witness,
        z,
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_host, glue_blocks, BlockSet};

    fn glued(n: usize, edges: &[(usize, usize)], blocks: Vec<Vec<usize>>) -> GluedInstance {
        glue_blocks(build_host(n, edges).unwrap(), BlockSet::new(blocks).unwrap()).unwrap()
    }

    fn cycle_edges(vs: &[usize]) -> Vec<(usize, usize)> {
        (0..vs.len()).map(|i| (vs[i], vs[(i + 1) % vs.len()])).collect()
    }

    fn e3() -> GluedInstance {
        let mut e = cycle_edges(&[0, 1, 2, 3, 4]);
        e.extend(cycle_edges(&[5, 6, 7]));
        glued(8, &e, vec![vec![0, 2, 5, 7], vec![1, 3, 4, 6]])
    }

    #[test]
    fn lambda_is_five_elevenths() {
        assert_eq!(bounds::equalizing_lambda(), Ratio::new(5, 11));
        assert_eq!(bounds::combined_coefficient(), Ratio::new(21, 22));
        assert_eq!(
            bounds::convex_combination(0, 12, 10, Ratio::new(5, 11)),
            Ratio::new(21, 22) * Ratio::from(22)
        );
    }

    #[test]
    fn k4_only() {
        let inst = glued(4, &[], vec![vec![0, 1, 2, 3]]);
        let (cert, route) = strong_color(&inst, Budget::default()).unwrap();
        assert_eq!(route, Route::LongOdd);
        assert!(cert.is_proper(&inst.simple_view()));
    }

    #[test]
    fn e3_strong() {
        let inst = e3();
        let (cert, _) = strong_color(&inst, Budget::default()).unwrap();
        let report = verify(&inst, &cert.to_partial(), Claim::Strong);
        assert!(report.ok, "{report:?}");
    }

    #[test]
    fn hypothesis_not_met() {
        let mut e = cycle_edges(&[0, 1, 2, 3, 4]);
        e.extend(cycle_edges(&[5, 6, 7, 8, 9]));
        for t in 0..4 {
            let b = 10 + 3 * t;
            e.extend(cycle_edges(&[b, b + 1, b + 2]));
        }
        let inst = glued(22, &e, vec![]);
        assert_eq!(
            strong_color(&inst, Budget::default()).unwrap_err(),
            DriverError::HypothesisNotMet {
                long_odd: 2,
                triangles: 4
            }
        );
    }

    #[test]
    fn verify_reports_witness_and_multiplicity() {
        let inst = e3();
        let mut bad = PartialColoring::uncolored(8);
        for v in 0..8 {
            bad.set(v, 1);
        }
        let r = verify(&inst, &bad, Claim::Strong);
        assert!(!r.proper);
        assert!(r.witness.is_some());

        let mut c = PartialColoring::uncolored(8);
        c.set(5, 1);
        c.set(6, 2);
        c.set(7, 3);
        let r = verify(&inst, &c, Claim::LongOdd);
        assert!(r.proper);
        assert!(!r.ok);
        assert!(r.checks.iter().any(|c| c.name == "per-cycle" && !c.ok));
    }

    #[test]
    fn best_of_both_on_e3() {
        let (coloring, report) = partial_color_best(&e3(), Budget::default()).unwrap();
        assert!(coloring.is_full());
        assert_eq!(report.route, Route::LongOdd);
        assert_eq!(report.n_t + report.n_l + report.n_x, report.n);
        assert!(report.combined_bound_met);
    }
}
