//! Seeded instance generation.
//!
//! A profile lists host cycle lengths and path sizes. Components are laid
//! on a random permutation of the vertices, so the same seed always yields
//! the same instance.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{build_host, glue_blocks, BlockSet, GluedInstance, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unrealizable profile: {0}")]
pub struct UnrealizableProfile(pub String);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlockMode {
    /// Blocks cover every vertex; needs `4 | n`.
    Partition,
    /// This many disjoint random blocks.
    RandomDisjoint(usize),
    None,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorProfile {
    pub seed: u64,
    /// Host cycle lengths, each at least 3.
    pub cycles: Vec<usize>,
    /// Host path vertex counts; a count of 1 is an isolated vertex.
    pub paths: Vec<usize>,
    pub block_mode: BlockMode,
}

impl GeneratorProfile {
    pub fn n(&self) -> usize {
        self.cycles.iter().sum::<usize>() + self.paths.iter().sum::<usize>()
    }

    /// Parses `C5,C3x4,P2`: `C<len>` cycles and `P<len>` paths, with an
    /// optional `x<count>` repeat.
    pub fn parse_components(spec: &str) -> Result<(Vec<usize>, Vec<usize>), UnrealizableProfile> {
        let mut cycles = Vec::new();
        let mut paths = Vec::new();
        for token in spec.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let bad = || UnrealizableProfile(format!("cannot read component {token:?}"));
            let (kind, rest) = token.split_at(1);
            let (len, count) = match rest.split_once(['x', 'X']) {
                Some((l, c)) => (l.parse::<usize>().map_err(|_| bad())?, c.parse::<usize>().map_err(|_| bad())?),
                None => (rest.parse::<usize>().map_err(|_| bad())?, 1),
            };
            let target = match kind {
                "C" | "c" => &mut cycles,
                "P" | "p" => &mut paths,
                _ => return Err(bad()),
            };
            target.extend(std::iter::repeat_n(len, count));
        }
        Ok((cycles, paths))
    }

    pub fn parse_block_mode(spec: &str) -> Result<BlockMode, UnrealizableProfile> {
        match spec {
            "partition" => Ok(BlockMode::Partition),
            "none" => Ok(BlockMode::None),
            other => other
                .strip_prefix("random:")
                .and_then(|q| q.parse().ok())
                .map(BlockMode::RandomDisjoint)
                .ok_or_else(|| UnrealizableProfile(format!("unknown block mode {other:?}"))),
        }
    }
}

impl fmt::Display for GeneratorProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .cycles
            .iter()
            .map(|c| format!("C{c}"))
            .chain(self.paths.iter().map(|p| format!("P{p}")))
            .collect();
        write!(f, "{}", parts.join(","))
    }
}

pub fn generate(profile: &GeneratorProfile) -> Result<GluedInstance, UnrealizableProfile> {
    if let Some(c) = profile.cycles.iter().find(|&&c| c < 3) {
        return Err(UnrealizableProfile(format!("cycle of length {c}")));
    }
    if profile.paths.contains(&0) {
        return Err(UnrealizableProfile("path with no vertices".into()));
    }
    let n = profile.n();
    let mut rng = ChaCha8Rng::seed_from_u64(profile.seed);
    let mut perm: Vec<VertexId> = (0..n).collect();
    perm.shuffle(&mut rng);

    let mut edges = Vec::with_capacity(n);
    let mut at = 0;
    for &len in &profile.cycles {
        let vs = &perm[at..at + len];
        edges.extend((0..len).map(|i| (vs[i], vs[(i + 1) % len])));
        at += len;
    }
    for &len in &profile.paths {
        let vs = &perm[at..at + len];
        edges.extend(vs.windows(2).map(|w| (w[0], w[1])));
        at += len;
    }

    let blocks: Vec<Vec<VertexId>> = match profile.block_mode {
        BlockMode::None => Vec::new(),
        BlockMode::Partition => {
            if n % 4 != 0 {
                return Err(UnrealizableProfile(format!("partition blocks need 4 | n, n = {n}")));
            }
            let mut order: Vec<VertexId> = (0..n).collect();
            order.shuffle(&mut rng);
            order.chunks(4).map(<[VertexId]>::to_vec).collect()
        }
        BlockMode::RandomDisjoint(q) => {
            if 4 * q > n {
                return Err(UnrealizableProfile(format!("{q} blocks do not fit in {n} vertices")));
            }
            let mut used = vec![false; n];
            let mut blocks = Vec::with_capacity(q);
            // rejection sampling of disjoint 4-sets
            while blocks.len() < q {
                let cand: Vec<VertexId> = rand::seq::index::sample(&mut rng, n, 4).into_vec();
                if cand.iter().all(|&v| !used[v]) {
                    for &v in &cand {
                        used[v] = true;
                    }
                    blocks.push(cand);
                }
            }
            blocks
        }
    };
    let host = build_host(n, &edges).map_err(|e| UnrealizableProfile(e.to_string()))?;
    let blocks = BlockSet::new(blocks).map_err(|e| UnrealizableProfile(e.to_string()))?;
    glue_blocks(host, blocks).map_err(|e| UnrealizableProfile(e.to_string()))
}

/// Families of random profiles used for batch runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// At most one long odd cycle.
    FewLongOdd,
    /// At most three triangles and at least two long odd cycles.
    FewTriangles,
    /// Anything.
    Mixed,
    /// Blocks partition the vertex set, `n = 4m`.
    Partitioned,
    /// Mostly 5-cycles and triangles, close to `max_n` vertices, with
    /// dense blocks: the shape where both routes leave vertices uncoloured.
    Adversarial,
}

/// Draws a profile of `family` with at most `max_n` vertices.
pub fn sample_profile(family: Family, seed: u64, max_n: usize) -> GeneratorProfile {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x005e_ed0f_9a11);
    let max_n = max_n.max(8);
    let mut cycles = Vec::new();
    let mut paths = Vec::new();
    let mut n = 0;
    let fits = |n: usize, len: usize| n + len <= max_n;
    match family {
        Family::FewLongOdd => {
            if rng.gen_bool(0.7) {
                let len = 2 * rng.gen_range(2..=5) + 1;
                cycles.push(len);
                n += len;
            }
        }
        Family::FewTriangles => {
            let long = rng.gen_range(2..=4);
            for _ in 0..long {
                let len = 2 * rng.gen_range(2..=4) + 1;
                if fits(n, len) {
                    cycles.push(len);
                    n += len;
                }
            }
            for _ in 0..rng.gen_range(0..=3) {
                if fits(n, 3) {
                    cycles.push(3);
                    n += 3;
                }
            }
        }
        Family::Adversarial => {
            while n + 3 <= max_n {
                let len = if rng.gen_bool(0.5) { 3 } else { 5 };
                if n + len > max_n {
                    break;
                }
                cycles.push(len);
                n += len;
            }
        }
        Family::Mixed | Family::Partitioned => {}
    }
    let target = rng.gen_range(n.max(6)..=max_n);
    let mut attempts = 0;
    while n < target && attempts < 64 {
        attempts += 1;
        let room = target - n;
        let pick = rng.gen_range(0..10);
        let len = match (family, pick) {
            (Family::FewTriangles, 0..=5) | (Family::FewLongOdd, 0..=3) => 2 * rng.gen_range(2..=4),
            (Family::FewTriangles | Family::FewLongOdd, _) => rng.gen_range(1..=5),
            (_, 0..=3) => 3,
            (_, 4..=6) => 2 * rng.gen_range(2..=4) + 1,
            (_, 7..=8) => 2 * rng.gen_range(2..=4),
            _ => rng.gen_range(1..=5),
        };
        if len > room {
            continue;
        }
        let is_path = match family {
            Family::FewTriangles => pick > 5,
            Family::FewLongOdd => pick > 3,
            _ => pick == 9,
        };
        if is_path {
            paths.push(len);
        } else {
            cycles.push(len);
        }
        n += len;
    }
    let block_mode = match family {
        Family::Partitioned => {
            while n % 4 != 0 {
                paths.push(1);
                n += 1;
            }
            BlockMode::Partition
        }
        Family::Adversarial if n % 4 == 0 => BlockMode::Partition,
        Family::Adversarial => BlockMode::RandomDisjoint(n / 4),
        _ if n % 4 == 0 && rng.gen_bool(0.5) => BlockMode::Partition,
        _ => BlockMode::RandomDisjoint(rng.gen_range(0..=n / 4)),
    };
    GeneratorProfile {
        seed,
        cycles,
        paths,
        block_mode,
    }
}

/// Instance for `family` and `seed`; profiles that overflow are clipped by
/// construction, so this never fails.
pub fn sample_instance(family: Family, seed: u64, max_n: usize) -> GluedInstance {
    generate(&sample_profile(family, seed, max_n)).expect("sampled profiles are realizable")
}
