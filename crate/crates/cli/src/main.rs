use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use strongcol::driver::{partial_color_best, strong_color, verify, BoundReport, Claim, Route};
use strongcol::generate::{generate, sample_instance, sample_profile, Family, GeneratorProfile};
use strongcol::graph::{decompose, GluedInstance, PartialColoring};
use strongcol::io::{ColoringDocument, InstanceDocument};
use strongcol::oracles::{Budget, DEFAULT_NODE_BUDGET};

#[derive(Parser)]
#[command(name = "strongcol", version, about = "4-colouring graphs of maximum degree 2 with glued K4 blocks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    /// Full colouring; fails unless the host has at most one long odd cycle
    /// or at most three triangles.
    Strong,
    /// Best partial colouring of both routes.
    Partial,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    FewLongOdd,
    FewTriangles,
    Mixed,
    Partitioned,
    Adversarial,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::FewLongOdd => Family::FewLongOdd,
            FamilyArg::FewTriangles => Family::FewTriangles,
            FamilyArg::Mixed => Family::Mixed,
            FamilyArg::Partitioned => Family::Partitioned,
            FamilyArg::Adversarial => Family::Adversarial,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ClaimArg {
    Strong,
    LongOdd,
    Triangle,
    Combined,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance document.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Components such as `C5,C3x4,P2`. Without it a random profile of
        /// `--family` is drawn.
        #[arg(long)]
        profile: Option<String>,
        /// `partition`, `none` or `random:<count>`.
        #[arg(long, default_value = "partition")]
        blocks: String,
        #[arg(long, value_enum, default_value = "mixed")]
        family: FamilyArg,
        #[arg(long, default_value_t = 48)]
        max_n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Colour an instance.
    Solve {
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "partial")]
        mode: Mode,
        /// Node cap for each exact search.
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check a colouring against an instance.
    Verify {
        instance: PathBuf,
        coloring: PathBuf,
        /// Defaults to the claim implied by the colouring's mode and route.
        #[arg(long, value_enum)]
        claim: Option<ClaimArg>,
    },
    /// Solve a range of seeded instances and write one CSV row per seed.
    Stats {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        count: u64,
        #[arg(long, value_enum, default_value = "mixed")]
        family: FamilyArg,
        #[arg(long, default_value_t = 48)]
        max_n: usize,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a DOT drawing with red host edges and blue block edges.
    ExportDot {
        instance: PathBuf,
        /// Colouring whose classes label the nodes.
        #[arg(long)]
        coloring: Option<PathBuf>,
        /// Also draw the green 4-cycle on every block.
        #[arg(long)]
        green: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Serialize)]
struct ErrorRecord {
    error: String,
    message: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            let record = ErrorRecord {
                error: error_kind(&e),
                message: format!("{e:#}"),
            };
            eprintln!("{}", serde_json::to_string(&record).expect("record serialises"));
            ExitCode::FAILURE
        }
    }
}

fn error_kind(e: &anyhow::Error) -> String {
    use strongcol::driver::DriverError;
    if let Some(d) = e.downcast_ref::<DriverError>() {
        return match d {
            DriverError::HypothesisNotMet { .. } => "hypothesis-not-met",
            DriverError::InternalInvariantViolation(_) => "internal-invariant-violation",
            DriverError::Transversal(_) => "long-odd-route",
            DriverError::Isr(_) => "triangle-route",
        }
        .into();
    }
    if e.downcast_ref::<strongcol::io::DocumentError>().is_some() {
        return "invalid-document".into();
    }
    if e.downcast_ref::<strongcol::generate::UnrealizableProfile>().is_some() {
        return "unrealizable-profile".into();
    }
    if e.downcast_ref::<std::io::Error>().is_some() {
        return "io".into();
    }
    "error".into()
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn read_instance(path: &Path) -> Result<GluedInstance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(InstanceDocument::parse(&text)?.to_instance()?)
}

fn solve(instance: &GluedInstance, mode: Mode, budget: Budget) -> Result<(PartialColoring, Route, Option<BoundReport>)> {
    Ok(match mode {
        Mode::Strong => {
            let (cert, route) = strong_color(instance, budget)?;
            (cert.to_partial(), route, None)
        }
        Mode::Partial => {
            let (coloring, report) = partial_color_best(instance, budget)?;
            (coloring, report.route, Some(report))
        }
    })
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Gen {
            seed,
            profile,
            blocks,
            family,
            max_n,
            out,
        } => {
            let profile = match profile {
                Some(spec) => {
                    let (cycles, paths) = GeneratorProfile::parse_components(&spec)?;
                    GeneratorProfile {
                        seed,
                        cycles,
                        paths,
                        block_mode: GeneratorProfile::parse_block_mode(&blocks)?,
                    }
                }
                None => sample_profile(family.into(), seed, max_n),
            };
            let instance = generate(&profile)?;
            let mut meta = BTreeMap::new();
            meta.insert("generator".to_string(), "strongcol gen".to_string());
            meta.insert("profile".to_string(), profile.to_string());
            meta.insert("blocks".to_string(), format!("{:?}", profile.block_mode).to_lowercase());
            meta.insert("seed".to_string(), seed.to_string());
            let doc = InstanceDocument::from_instance(&instance, meta);
            write_output(out.as_deref(), &doc.to_canonical_string()?)?;
        }
        Command::Solve {
            instance,
            mode,
            budget,
            out,
        } => {
            let inst = read_instance(&instance)?;
            let (coloring, route, report) = solve(&inst, mode, Budget::nodes(budget))?;
            let mode_name = match mode {
                Mode::Strong => "strong",
                Mode::Partial => "partial",
            };
            let doc = ColoringDocument::new(&coloring, mode_name, Some(route), report);
            write_output(out.as_deref(), &doc.to_string_pretty())?;
        }
        Command::Verify {
            instance,
            coloring,
            claim,
        } => {
            let inst = read_instance(&instance)?;
            let text = fs::read_to_string(&coloring).with_context(|| format!("reading {}", coloring.display()))?;
            let doc = ColoringDocument::parse(&text)?;
            let claim = match claim {
                Some(ClaimArg::Strong) => Claim::Strong,
                Some(ClaimArg::LongOdd) => Claim::LongOdd,
                Some(ClaimArg::Triangle) => Claim::Triangle,
                Some(ClaimArg::Combined) => Claim::Combined,
                None if doc.mode == "strong" => Claim::Strong,
                None => Claim::Combined,
            };
            let report = verify(&inst, &doc.coloring(), claim);
            write_output(None, &format!("{}\n", serde_json::to_string_pretty(&report)?))?;
            if !report.ok {
                let failed: Vec<&str> = report.checks.iter().filter(|c| !c.ok).map(|c| c.name.as_str()).collect();
                let witness = report
                    .witness
                    .map_or(String::new(), |(u, v)| format!("; monochromatic edge {u}-{v}"));
                bail!("verification failed: {}{witness}", failed.join(", "));
            }
        }
        Command::Stats {
            seed,
            count,
            family,
            max_n,
            budget,
            out,
        } => {
            let family: Family = family.into();
            let budget = Budget::nodes(budget);
            let mut rows: Vec<StatsRow> = (seed..seed + count)
                .into_par_iter()
                .map(|s| stats_row(family, s, max_n, budget))
                .collect::<Result<_>>()?;
            rows.sort_by_key(|r| r.seed);
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in &rows {
                w.serialize(r)?;
            }
            let text = String::from_utf8(w.into_inner()?)?;
            write_output(out.as_deref(), &text)?;
            if rows.iter().any(|r| !r.within_bound) {
                bail!("some instances exceeded the |V|/22 bound");
            }
        }
        Command::ExportDot {
            instance,
            coloring,
            green,
            out,
        } => {
            let inst = read_instance(&instance)?;
            let colors = match coloring {
                Some(path) => {
                    let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
                    let doc = ColoringDocument::parse(&text)?;
                    if doc.n != inst.n() {
                        bail!("colouring has {} vertices, instance has {}", doc.n, inst.n());
                    }
                    Some(doc.colors)
                }
                None => None,
            };
            write_output(out.as_deref(), &to_dot(&inst, colors.as_deref(), green))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct StatsRow {
    seed: u64,
    n: usize,
    long_odd_cycles: usize,
    triangles: usize,
    blocks: usize,
    route: &'static str,
    z: usize,
    longodd_z: usize,
    triangle_z: usize,
    bound: usize,
    within_bound: bool,
}

fn stats_row(family: Family, seed: u64, max_n: usize, budget: Budget) -> Result<StatsRow> {
    let inst = sample_instance(family, seed, max_n);
    let (coloring, report) = partial_color_best(&inst, budget).with_context(|| format!("seed {seed}"))?;
    let d = decompose(inst.host());
    let z = coloring.z().len();
    let bound = inst.n() / 22;
    Ok(StatsRow {
        seed,
        n: inst.n(),
        long_odd_cycles: d.long_odd.len(),
        triangles: d.triangles.len(),
        blocks: inst.blocks().len(),
        route: report.route.name(),
        z,
        longodd_z: report.longodd_z.unwrap_or(z),
        triangle_z: report.triangle_z.unwrap_or(z),
        bound,
        within_bound: z <= bound,
    })
}

const PALETTE: [&str; 4] = ["#e41a1c", "#377eb8", "#4daf4a", "#984ea3"];

fn to_dot(inst: &GluedInstance, colors: Option<&[Option<u8>]>, green: bool) -> String {
    let mut s = String::from("graph G {\n  node [shape=circle];\n");
    for v in 0..inst.n() {
        match colors.and_then(|c| c[v]) {
            Some(c) => {
                let fill = PALETTE[usize::from(c.clamp(1, 4)) - 1];
                writeln!(s, "  {v} [label=\"{v}:{c}\", style=filled, fillcolor=\"{fill}\"];").unwrap();
            }
            None if colors.is_some() => writeln!(s, "  {v} [label=\"{v}\", shape=doublecircle];").unwrap(),
            None => writeln!(s, "  {v};").unwrap(),
        }
    }
    for &(u, v) in inst.host().edges() {
        writeln!(s, "  {u} -- {v} [color=red];").unwrap();
    }
    for (u, v) in inst.blue_edges() {
        writeln!(s, "  {u} -- {v} [color=blue];").unwrap();
    }
    if green {
        for b in inst.blocks().blocks() {
            for i in 0..4 {
                writeln!(s, "  {} -- {} [color=green, style=dashed];", b[i], b[(i + 1) % 4]).unwrap();
            }
        }
    }
    s.push_str("}\n");
    s
}
