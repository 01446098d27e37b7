//! Batch subcommands behind the `boxtop` binary. Machine-readable JSON
//! goes to standard output, human summaries to standard error, data files
//! to `--out`. Exit codes: 0 success, 1 a checked property failed (with a
//! witness in the JSON), 2 malformed input, 3 a resource limit.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::covers::{self, DensityMode};
use crate::cube::CubeFamily;
use crate::error::{Error, ErrorKind};
use crate::gen;
use crate::io;
use crate::metrisable::{check_witness_structure, sikorski_refine};
use crate::pointset::PointSet;
use crate::refine;
use crate::selftest;
use crate::singular::{self, SingularParams};
use crate::tailbox::{rudin_refine_trace, verify_box_refinement};
use crate::Config;

#[derive(Parser)]
#[command(name = "boxtop", version, about = "Cube covers, disjoint refinements, and their certificates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Check density / antichain / refinement properties of families
    Check(CheckArgs),
    /// Run a refinement algorithm and certify its output
    Refine(RefineArgs),
    /// Generate families from seeds or explicit constructions
    Gen(GenArgs),
    /// Convert a family between the text and JSON formats
    Convert(ConvertArgs),
    /// Run the built-in verification suites at reduced counts
    Selftest(SelftestArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Auto,
    Exhaustive,
    Symbolic,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Prop {
    Dense,
    Antichain,
    Refines,
    Union,
}

#[derive(Args)]
pub struct CheckArgs {
    /// Family whose properties are checked (the refinement when --base is
    /// given)
    pub target: PathBuf,
    /// Base family for the refinement and union checks
    #[arg(long)]
    pub base: Option<PathBuf>,
    /// Properties that decide the exit status
    #[arg(long, value_delimiter = ',')]
    pub props: Vec<Prop>,
    #[arg(long, value_enum, default_value = "auto")]
    pub mode: ModeArg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Ladder,
    Disjointify,
    Rudin,
    Sikorski,
}

#[derive(Args)]
pub struct RefineArgs {
    /// Input: family file (ladder, disjointify), tail-box cover JSON
    /// (rudin), or witness JSON (sikorski)
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub algo: Algo,
    /// Coordinate order for the ladder: "identity" or a comma list
    #[arg(long, default_value = "identity")]
    pub order: String,
    /// Merge sibling output cubes where possible (disjointify)
    #[arg(long)]
    pub coalesce: bool,
    /// Cover file for sikorski (base family JSON)
    #[arg(long)]
    pub cover: Option<PathBuf>,
    /// Where the refined family is written
    #[arg(long)]
    pub out: PathBuf,
    /// Output format for cube families
    #[arg(long, value_enum, default_value = "text")]
    pub format: FormatArg,
    #[arg(long, value_enum, default_value = "auto")]
    pub mode: ModeArg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    RandomDense,
    RandomCover,
    Singular,
    Prefix,
}

#[derive(Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub kind: GenKind,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub lambda: Option<usize>,
    /// Number of cubes before any density repair
    #[arg(long, visible_alias = "n", default_value_t = 16)]
    pub count: usize,
    /// Support budget for random cubes
    #[arg(long, default_value_t = 3)]
    pub budget: usize,
    /// Prefix length (singular, prefix)
    #[arg(long)]
    pub theta: Option<usize>,
    /// Comma-separated ladder steps (singular)
    #[arg(long)]
    pub ladder: Option<String>,
    /// Total dimension (singular, prefix)
    #[arg(long)]
    pub dim: Option<usize>,
    /// "auto" or a JSON file mapping prefix patterns to ladder indices
    #[arg(long, default_value = "auto")]
    pub partition: String,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "text")]
    pub format: FormatArg,
}

#[derive(Args)]
pub struct ConvertArgs {
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub to: FormatArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct SelftestArgs {
    #[arg(long, default_value_t = 0xB0C5)]
    pub seed: u64,
}

/// Dispatch a parsed command line; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let cfg = Config::from_env();
    match cli.command {
        Command::Check(args) => cmd_check(&args, &cfg),
        Command::Refine(args) => cmd_refine(&args, &cfg),
        Command::Gen(args) => cmd_gen(&args, &cfg),
        Command::Convert(args) => cmd_convert(&args),
        Command::Selftest(args) => cmd_selftest(&args, &cfg),
    }
}

fn exit_code(kind: ErrorKind) -> i32 {
    match kind {
        ErrorKind::Semantic => 1,
        ErrorKind::Input => 2,
        ErrorKind::Resource => 3,
    }
}

fn report_error(e: &Error) -> i32 {
    let witness = match e {
        Error::NotDense { witness } => Some(witness.clone()),
        Error::NotACover { point } => Some(point.clone()),
        Error::NotRefinable { point } => Some(point.clone()),
        _ => None,
    };
    let kind = match e.kind() {
        ErrorKind::Semantic => "semantic",
        ErrorKind::Input => "input",
        ErrorKind::Resource => "resource",
    };
    println!(
        "{}",
        json!({"error": e.to_string(), "kind": kind, "witness": witness})
    );
    eprintln!("error: {e}");
    exit_code(e.kind())
}

fn read_family(path: &Path) -> Result<CubeFamily, Error> {
    io::parse_family_auto(&fs::read_to_string(path)?)
}

fn resolve_mode(mode: ModeArg, dim: usize, cfg: &Config) -> DensityMode {
    match mode {
        ModeArg::Exhaustive => DensityMode::Exhaustive,
        ModeArg::Symbolic => DensityMode::Symbolic,
        ModeArg::Auto => {
            if dim <= cfg.enum_limit.min(32) {
                DensityMode::Exhaustive
            } else {
                DensityMode::Symbolic
            }
        }
    }
}

fn cmd_check(args: &CheckArgs, cfg: &Config) -> i32 {
    let target = match read_family(&args.target) {
        Ok(f) => f,
        Err(e) => return report_error(&e),
    };
    let mode = resolve_mode(args.mode, target.dim(), cfg);
    match &args.base {
        None => {
            let props = if args.props.is_empty() {
                vec![Prop::Dense, Prop::Antichain]
            } else {
                args.props.clone()
            };
            if props.iter().any(|p| matches!(p, Prop::Refines | Prop::Union)) {
                return report_error(&Error::Params {
                    reason: "refines/union need --base".into(),
                });
            }
            let check = match covers::check_family(&target, mode, cfg) {
                Ok(c) => c,
                Err(e) => return report_error(&e),
            };
            println!("{}", serde_json::to_string(&check).expect("serializable"));
            eprintln!(
                "dense: {}  antichain: {}",
                verdict(check.dense_ok),
                verdict(check.antichain_ok)
            );
            let ok = props.iter().all(|p| match p {
                Prop::Dense => check.dense_ok,
                Prop::Antichain => check.antichain_ok,
                _ => unreachable!(),
            });
            if ok {
                0
            } else {
                1
            }
        }
        Some(base_path) => {
            let base = match read_family(base_path) {
                Ok(f) => f,
                Err(e) => return report_error(&e),
            };
            let cert = match covers::certify_with_union(&base, &target, mode, cfg) {
                Ok(c) => c,
                Err(e) => return report_error(&e),
            };
            println!("{}", serde_json::to_string(&cert).expect("serializable"));
            eprintln!(
                "dense: {}  antichain: {}  refines: {}  union: {}",
                verdict(cert.dense_ok),
                verdict(cert.antichain_ok),
                verdict(cert.refines_ok),
                verdict(cert.union_preserved_ok.unwrap_or(true)),
            );
            let props = if args.props.is_empty() {
                vec![Prop::Dense, Prop::Antichain, Prop::Refines, Prop::Union]
            } else {
                args.props.clone()
            };
            let ok = props.iter().all(|p| match p {
                Prop::Dense => cert.dense_ok,
                Prop::Antichain => cert.antichain_ok,
                Prop::Refines => cert.refines_ok,
                Prop::Union => cert.union_preserved_ok.unwrap_or(true),
            });
            if ok {
                0
            } else {
                1
            }
        }
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAIL"
    }
}

fn parse_order(text: &str, dim: usize) -> Result<Vec<usize>, Error> {
    if text == "identity" {
        return Ok(refine::identity_order(dim));
    }
    let coords: Vec<usize> = text
        .split(',')
        .map(|t| {
            t.trim().parse::<usize>().map_err(|_| Error::Params {
                reason: format!("bad coordinate {t:?} in order"),
            })
        })
        .collect::<Result<_, _>>()?;
    Ok(coords)
}

fn write_family(path: &Path, family: &CubeFamily, format: FormatArg) -> Result<(), Error> {
    let text = match format {
        FormatArg::Text => io::emit_family_text(family),
        FormatArg::Json => io::emit_family_json(family),
    };
    fs::write(path, text)?;
    Ok(())
}

fn cmd_refine(args: &RefineArgs, cfg: &Config) -> i32 {
    match args.algo {
        Algo::Ladder | Algo::Disjointify => refine_family(args, cfg),
        Algo::Rudin => refine_rudin(args),
        Algo::Sikorski => refine_sikorski(args),
    }
}

fn refine_family(args: &RefineArgs, cfg: &Config) -> i32 {
    let input = match read_family(&args.input) {
        Ok(f) => f,
        Err(e) => return report_error(&e),
    };
    let output = match args.algo {
        Algo::Ladder => {
            let order = match parse_order(&args.order, input.dim()) {
                Ok(o) => o,
                Err(e) => return report_error(&e),
            };
            refine::prefix_ladder_refine(&input, &order)
        }
        Algo::Disjointify => {
            refine::disjointify(&input, cfg).map(|f| {
                if args.coalesce {
                    refine::coalesce(&f)
                } else {
                    f
                }
            })
        }
        _ => unreachable!(),
    };
    let output = match output {
        Ok(f) => f,
        Err(e) => return report_error(&e),
    };
    if let Err(e) = write_family(&args.out, &output, args.format) {
        return report_error(&e);
    }
    let mode = resolve_mode(args.mode, input.dim(), cfg);
    let cert = match covers::certify_with_union(&input, &output, mode, cfg) {
        Ok(c) => c,
        Err(e) => return report_error(&e),
    };
    println!("{}", serde_json::to_string(&cert).expect("serializable"));
    eprintln!(
        "{} cubes -> {} cubes; certificate {}",
        input.len(),
        output.len(),
        if cert.all_ok() { "all true" } else { "FAILED" }
    );
    if cert.all_ok() {
        0
    } else {
        1
    }
}

fn refine_rudin(args: &RefineArgs) -> i32 {
    let text = match fs::read_to_string(&args.input) {
        Ok(t) => t,
        Err(e) => return report_error(&e.into()),
    };
    let cover = match io::parse_tailbox_json(&text) {
        Ok(c) => c,
        Err(e) => return report_error(&e),
    };
    let trace = match rudin_refine_trace(&cover) {
        Ok(t) => t,
        Err(e) => return report_error(&e),
    };
    let cert = match verify_box_refinement(&cover, &trace.family) {
        Ok(c) => c,
        Err(e) => return report_error(&e),
    };
    if let Err(e) = fs::write(
        &args.out,
        io::emit_tailbox_json(cover.profile(), &trace.family),
    ) {
        return report_error(&e.into());
    }
    println!(
        "{}",
        json!({"iterations": trace.iterations, "boxes": trace.family.len(), "certificate": cert})
    );
    eprintln!(
        "{} boxes after {} iterations; certificate {}",
        trace.family.len(),
        trace.iterations,
        if cert.all_ok() { "all true" } else { "FAILED" }
    );
    if cert.all_ok() {
        0
    } else {
        1
    }
}

fn refine_sikorski(args: &RefineArgs) -> i32 {
    let Some(cover_path) = &args.cover else {
        return report_error(&Error::Params {
            reason: "sikorski needs --cover".into(),
        });
    };
    let witness_text = match fs::read_to_string(&args.input) {
        Ok(t) => t,
        Err(e) => return report_error(&e.into()),
    };
    let witness = match io::parse_witness_json(&witness_text) {
        Ok(w) => w,
        Err(e) => return report_error(&e),
    };
    let structure = check_witness_structure(&witness);
    if !structure.ok {
        println!("{}", serde_json::to_string(&structure).expect("serializable"));
        eprintln!("witness fails its structural conditions");
        return 1;
    }
    let cover_text = match fs::read_to_string(cover_path) {
        Ok(t) => t,
        Err(e) => return report_error(&e.into()),
    };
    let cover = match io::parse_base_family_json(&cover_text) {
        Ok(c) => c,
        Err(e) => return report_error(&e),
    };
    let cells = match sikorski_refine(&witness, &cover) {
        Ok(c) => c,
        Err(e) => return report_error(&e),
    };
    let n = witness.point_count();
    let mut union = PointSet::empty(n);
    let mut disjoint = true;
    for (i, cell) in cells.iter().enumerate() {
        for other in &cells[i + 1..] {
            disjoint &= cell.is_disjoint(other);
        }
        union.union_with(cell);
    }
    let covers_all = union == PointSet::full(n);
    let refines_cover = cells
        .iter()
        .all(|c| cover.sets().iter().any(|o| c.is_subset(o)));
    if let Err(e) = fs::write(&args.out, io::emit_cells_json(witness.labels(), &cells)) {
        return report_error(&e.into());
    }
    println!(
        "{}",
        json!({
            "cells": cells.len(),
            "disjoint_ok": disjoint,
            "cover_ok": covers_all,
            "refines_ok": refines_cover,
        })
    );
    eprintln!("{} cells", cells.len());
    if disjoint && covers_all && refines_cover {
        0
    } else {
        1
    }
}

fn parse_ladder_arg(text: &str) -> Result<Vec<usize>, Error> {
    text.split(',')
        .map(|t| {
            t.trim().parse::<usize>().map_err(|_| Error::Params {
                reason: format!("bad ladder step {t:?}"),
            })
        })
        .collect()
}

fn cmd_gen(args: &GenArgs, cfg: &Config) -> i32 {
    match args.kind {
        GenKind::RandomDense => {
            let Some(dim) = args.lambda else {
                return report_error(&Error::Params {
                    reason: "random-dense needs --lambda".into(),
                });
            };
            let mut rng = gen::rng_for_seed(args.seed);
            let max = (args.count * 4).max(64);
            let Some(family) =
                gen::random_dense_family(&mut rng, dim, args.count, args.budget.min(dim), max)
            else {
                return report_error(&Error::Params {
                    reason: "density repair overflowed; lower --count or --budget".into(),
                });
            };
            if let Err(e) = write_family(&args.out, &family, args.format) {
                return report_error(&e);
            }
            println!(
                "{}",
                json!({"kind": "random-dense", "lambda": dim, "cubes": family.len(), "seed": args.seed})
            );
            0
        }
        GenKind::RandomCover => {
            let Some(dim) = args.lambda else {
                return report_error(&Error::Params {
                    reason: "random-cover needs --lambda".into(),
                });
            };
            let mut rng = gen::rng_for_seed(args.seed);
            let family = gen::random_family(&mut rng, dim, args.count, args.budget.min(dim));
            if let Err(e) = write_family(&args.out, &family, args.format) {
                return report_error(&e);
            }
            println!(
                "{}",
                json!({"kind": "random-cover", "lambda": dim, "cubes": family.len(), "seed": args.seed})
            );
            0
        }
        GenKind::Singular => {
            let (Some(theta), Some(ladder), Some(dim)) =
                (args.theta, args.ladder.as_deref(), args.dim)
            else {
                return report_error(&Error::Params {
                    reason: "singular needs --theta, --ladder and --dim".into(),
                });
            };
            let ladder = match parse_ladder_arg(ladder) {
                Ok(l) => l,
                Err(e) => return report_error(&e),
            };
            let params = if args.partition == "auto" {
                SingularParams::with_auto_partition(theta, ladder, dim)
            } else {
                read_partition(&args.partition, theta).and_then(|partition| {
                    SingularParams::new(theta, ladder, dim, partition)
                })
            };
            let params = match params {
                Ok(p) => p,
                Err(e) => return report_error(&e),
            };
            let family = match singular::singular_disjoint_cover(&params, cfg.enum_limit) {
                Ok(f) => f,
                Err(e) => return report_error(&e),
            };
            if let Err(e) = write_family(&args.out, &family, args.format) {
                return report_error(&e);
            }
            let mode = resolve_mode(ModeArg::Auto, family.dim(), cfg);
            let check = match covers::check_family(&family, mode, cfg) {
                Ok(c) => c,
                Err(e) => return report_error(&e),
            };
            println!(
                "{}",
                json!({"kind": "singular", "cubes": family.len(), "certificate": check})
            );
            if check.dense_ok && check.antichain_ok {
                0
            } else {
                1
            }
        }
        GenKind::Prefix => {
            let (Some(theta), Some(dim)) = (args.theta, args.dim) else {
                return report_error(&Error::Params {
                    reason: "prefix needs --theta and --dim".into(),
                });
            };
            let family = match singular::regular_prefix_cover(theta, dim, cfg.enum_limit) {
                Ok(f) => f,
                Err(e) => return report_error(&e),
            };
            if let Err(e) = write_family(&args.out, &family, args.format) {
                return report_error(&e);
            }
            println!("{}", json!({"kind": "prefix", "cubes": family.len()}));
            0
        }
    }
}

fn read_partition(path: &str, theta: usize) -> Result<Vec<usize>, Error> {
    let text = fs::read_to_string(path)?;
    let map: std::collections::BTreeMap<String, usize> = serde_json::from_str(&text)?;
    let mut partition = Vec::with_capacity(1 << theta);
    for pattern in 0..1usize << theta {
        let key: String = (0..theta)
            .map(|i| {
                if pattern >> (theta - 1 - i) & 1 == 1 {
                    '1'
                } else {
                    '0'
                }
            })
            .collect();
        let index = map.get(&key).ok_or_else(|| Error::Params {
            reason: format!("partition file misses prefix {key:?}"),
        })?;
        partition.push(*index);
    }
    Ok(partition)
}

fn cmd_convert(args: &ConvertArgs) -> i32 {
    let family = match read_family(&args.input) {
        Ok(f) => f,
        Err(e) => return report_error(&e),
    };
    let text = match args.to {
        FormatArg::Text => io::emit_family_text(&family),
        FormatArg::Json => io::emit_family_json(&family),
    };
    match &args.out {
        Some(path) => {
            if let Err(e) = fs::write(path, text) {
                return report_error(&e.into());
            }
        }
        None => print!("{text}"),
    }
    0
}

fn cmd_selftest(args: &SelftestArgs, cfg: &Config) -> i32 {
    let outcomes = selftest::run_all(args.seed, cfg);
    let mut failed = 0;
    for o in &outcomes {
        eprintln!(
            "{}: {}{}",
            o.name,
            if o.passed { "PASS" } else { "FAIL" },
            if o.passed {
                String::new()
            } else {
                format!(" ({})", o.detail)
            }
        );
        if !o.passed {
            failed += 1;
        }
    }
    let summary: Vec<_> = outcomes
        .iter()
        .map(|o| json!({"name": o.name, "passed": o.passed}))
        .collect();
    println!(
        "{}",
        json!({"checks": summary, "passed": outcomes.len() - failed, "failed": failed})
    );
    if failed == 0 {
        0
    } else {
        1
    }
}
