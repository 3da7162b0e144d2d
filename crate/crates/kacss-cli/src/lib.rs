//! Command implementations for the `kacss` binary.
//!
//! Exit codes: 0 success, 1 instance (or subgraph) not k-arc-connected,
//! 2 parse or usage error, 3 internal assertion failure.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use kacss::arb::{decompose, Direction};
use kacss::flow::is_k_arc_connected;
use kacss::gap::{build_gap_instance, gap_report, GapParams};
use kacss::graph::{
    parse_arc_set, parse_instance, random_k_connected, write_instance, ArcSet, Instance,
};
use kacss::lpacss::solve_lp_acss;
use kacss::rational::{format_rat, rat_to_f64};
use kacss::round::{round_union, RoundMode, RoundingReport};

#[derive(Parser, Debug)]
#[command(
    name = "kacss",
    about = "Minimum-size k-arc-connected spanning subgraph tools",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve an instance: LP, arborescence decompositions, rounded union.
    Solve(SolveArgs),
    /// Check a subgraph file for k-arc-connectivity.
    Verify(VerifyArgs),
    /// Dump a convex decomposition of the LP solution as JSON.
    Decompose(DecomposeArgs),
    /// Build and evaluate an integrality-gap family instance.
    Gap(GapArgs),
    /// Generate a random k-arc-connected unit-cost instance.
    Random(RandomArgs),
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    /// Instance file in the kacss format.
    pub instance: PathBuf,
    /// Root vertex for the separation reduction and the arborescences.
    #[arg(long, default_value_t = 0)]
    pub root: usize,
    /// Seed for the sampling mode.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Pick the cheapest support pair instead of sampling.
    #[arg(long)]
    pub derandomize: bool,
    /// Emit the report as JSON instead of text.
    #[arg(long)]
    pub json: bool,
    /// Write a DOT rendering with the output arcs highlighted.
    #[arg(long)]
    pub dot: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    pub instance: PathBuf,
    /// Arc-set file: one arc index per line.
    #[arg(long)]
    pub subgraph: PathBuf,
}

#[derive(Args, Debug)]
pub struct DecomposeArgs {
    pub instance: PathBuf,
    #[arg(long, value_enum)]
    pub direction: DirectionArg,
    #[arg(long, default_value_t = 0)]
    pub root: usize,
}

#[derive(Args, Debug)]
pub struct GapArgs {
    /// Recursion depth d of the family.
    #[arg(long)]
    pub depth: usize,
    /// Number of columns r per level.
    #[arg(long)]
    pub columns: usize,
    /// Also compute the exact optimum by branch-and-bound.
    #[arg(long)]
    pub exact: bool,
    /// Write the instance file here, plus a `<path>.levels.json` sidecar.
    #[arg(long)]
    pub emit: Option<PathBuf>,
    /// Emit the report as JSON instead of text.
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct RandomArgs {
    /// Vertex count.
    #[arg(long)]
    pub n: usize,
    /// Connectivity requirement.
    #[arg(long)]
    pub k: usize,
    /// Extra random arcs beyond the k Hamiltonian cycles.
    #[arg(long, default_value_t = 0)]
    pub extra: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum DirectionArg {
    In,
    Out,
}

impl From<DirectionArg> for Direction {
    fn from(d: DirectionArg) -> Direction {
        match d {
            DirectionArg::In => Direction::In,
            DirectionArg::Out => Direction::Out,
        }
    }
}

/// Error carrying the process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl From<kacss::Error> for CliError {
    fn from(e: kacss::Error) -> Self {
        use kacss::Error::*;
        let code = match &e {
            Parse { .. } | InvalidInput(_) | Generator(_) => 2,
            NotKArcConnected { .. } | ArborescenceInfeasible { .. } => 1,
            NotInPolytope { .. } | BudgetExceeded { .. } | Internal(_) => 3,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError {
        code: 2,
        message: format!("{}: {e}", path.display()),
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Solve(args) => run_solve(args),
        Command::Verify(args) => run_verify(args),
        Command::Decompose(args) => run_decompose(args),
        Command::Gap(args) => run_gap(args),
        Command::Random(args) => run_random(args),
    }
}

fn read_instance(path: &Path) -> Result<Instance, CliError> {
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    Ok(parse_instance(&text)?)
}

fn run_solve(args: SolveArgs) -> Result<(), CliError> {
    let inst = read_instance(&args.instance)?;
    let sol = solve_lp_acss(&inst, args.root)?;
    let k = inst.k();
    let comb_in = decompose(&inst, &sol, args.root, k, Direction::In)?;
    let comb_out = decompose(&inst, &sol, args.root, k, Direction::Out)?;
    let mode = if args.derandomize {
        RoundMode::Derandomized
    } else {
        RoundMode::Sampled { seed: args.seed }
    };
    let report = round_union(&inst, &sol, &comb_in, &comb_out, mode)?;

    if let Some(dot_path) = &args.dot {
        fs::write(dot_path, export_dot(&inst, Some(&report.arcs)))
            .map_err(|e| io_error(dot_path, e))?;
    }
    if args.json {
        println!("{}", report.to_json());
    } else {
        print!("{}", solve_text(&inst, &report));
    }
    Ok(())
}

fn solve_text(inst: &Instance, report: &RoundingReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "instance: n={} m={} k={}",
        inst.n(),
        inst.num_arcs(),
        inst.k()
    );
    let mode = match report.mode {
        RoundMode::Sampled { seed } => format!("sampled (seed {seed})"),
        RoundMode::Derandomized => "derandomized".to_string(),
    };
    let _ = writeln!(out, "mode: {mode}");
    let _ = writeln!(out, "lp value: {}", format_rat(&report.lp_value));
    let _ = writeln!(out, "output cost: {}", format_rat(&report.size));
    match &report.ratio {
        Some(ratio) => {
            let guarantee = if report.bound_applies {
                format!("bound {}", format_rat(&report.bound))
            } else {
                "no guarantee (non-unit costs)".to_string()
            };
            let _ = writeln!(
                out,
                "ratio: {} (~{:.4}; {guarantee})",
                format_rat(ratio),
                rat_to_f64(ratio)
            );
        }
        None => {
            let _ = writeln!(out, "ratio: undefined (zero LP value)");
        }
    }
    let arcs: Vec<String> = report.arcs.iter().map(|a| a.to_string()).collect();
    let _ = writeln!(out, "arcs: {}", arcs.join(" "));
    out
}

fn run_verify(args: VerifyArgs) -> Result<(), CliError> {
    let inst = read_instance(&args.instance)?;
    let text = fs::read_to_string(&args.subgraph).map_err(|e| io_error(&args.subgraph, e))?;
    let arcs = parse_arc_set(&text, inst.num_arcs())?;
    let k = inst.k();
    if is_k_arc_connected(&inst, &arcs, k) {
        println!("{k}-arc-connected: yes ({} arcs)", arcs.len());
        Ok(())
    } else {
        println!("{k}-arc-connected: no ({} arcs)", arcs.len());
        Err(CliError {
            code: 1,
            message: format!("subgraph is not {k}-arc-connected"),
        })
    }
}

fn run_decompose(args: DecomposeArgs) -> Result<(), CliError> {
    let inst = read_instance(&args.instance)?;
    let sol = solve_lp_acss(&inst, args.root)?;
    let comb = decompose(&inst, &sol, args.root, inst.k(), args.direction.into())?;
    println!("{}", comb.to_json());
    Ok(())
}

fn run_gap(args: GapArgs) -> Result<(), CliError> {
    let params = GapParams::new(args.depth, args.columns)?;
    if !params.columns_cover_depth() {
        eprintln!(
            "warning: columns ({}) below depth ({}); the asymptotic gap guarantee needs columns >= depth",
            args.columns, args.depth
        );
    }
    if let Some(emit) = &args.emit {
        let gap = build_gap_instance(&params);
        fs::write(emit, write_instance(&gap.instance)).map_err(|e| io_error(emit, e))?;
        let sidecar = PathBuf::from(format!("{}.levels.json", emit.display()));
        fs::write(&sidecar, gap.levels_json()).map_err(|e| io_error(&sidecar, e))?;
    }
    let report = gap_report(&params, args.exact)?;
    if args.json {
        println!("{}", report.to_json());
    } else {
        let mut out = String::new();
        let _ = writeln!(out, "family: depth={} columns={}", args.depth, args.columns);
        let _ = writeln!(out, "lp value: {}", format_rat(&report.lp_value));
        match &report.exact {
            kacss::gap::ExactStatus::Proven(opt) => {
                let _ = writeln!(out, "exact opt: {} (proven)", format_rat(&opt.value));
            }
            kacss::gap::ExactStatus::Budget { incumbent } => {
                let _ = writeln!(
                    out,
                    "exact opt: unknown (budget exhausted; best incumbent {})",
                    format_rat(incumbent)
                );
            }
            kacss::gap::ExactStatus::NotComputed => {
                let _ = writeln!(out, "exact opt: not computed");
            }
        }
        if let Some(ratio) = &report.ratio {
            let _ = writeln!(
                out,
                "ratio: {} (~{:.4})",
                format_rat(ratio),
                rat_to_f64(ratio)
            );
        }
        let _ = writeln!(
            out,
            "family opt lower bound: {}",
            format_rat(&report.opt_lower_bound)
        );
        let _ = writeln!(
            out,
            "asymptotic gap bound: {}",
            format_rat(&report.gap_lower_bound)
        );
        print!("{out}");
    }
    Ok(())
}

fn run_random(args: RandomArgs) -> Result<(), CliError> {
    let inst = random_k_connected(args.n, args.k, args.extra, args.seed)?;
    print!("{}", write_instance(&inst));
    Ok(())
}

/// DOT rendering; highlighted arcs are drawn bold and black, the rest grey.
/// With no highlight set, arcs carry no styling.
pub fn export_dot(inst: &Instance, highlight: Option<&ArcSet>) -> String {
    let mut out = String::from("digraph kacss {\n  rankdir=LR;\n  node [shape=circle];\n");
    for v in 0..inst.n() {
        let _ = writeln!(out, "  {v};");
    }
    for (i, arc) in inst.arcs().iter().enumerate() {
        let label = format_rat(&arc.cost);
        match highlight {
            None => {
                let _ = writeln!(out, "  {} -> {} [label=\"{label}\"];", arc.tail, arc.head);
            }
            Some(set) if set.contains(i) => {
                let _ = writeln!(
                    out,
                    "  {} -> {} [label=\"{label}\", style=bold, color=black];",
                    arc.tail, arc.head
                );
            }
            Some(_) => {
                let _ = writeln!(
                    out,
                    "  {} -> {} [label=\"{label}\", color=grey];",
                    arc.tail, arc.head
                );
            }
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dot_of_two_cycle() {
        let inst = parse_instance("p kacss 2 2 1\na 0 1 1/1\na 1 0 1/1").unwrap();
        let dot = export_dot(&inst, None);
        assert_eq!(dot.matches("->").count(), 2);
        assert!(dot.contains("0 -> 1"));
        assert!(!dot.contains("color"));
    }

    #[test]
    fn dot_highlights_the_given_set() {
        let inst = parse_instance("p kacss 2 2 1\na 0 1 1/1\na 1 0 1/1").unwrap();
        let set: ArcSet = [0usize].into_iter().collect();
        let dot = export_dot(&inst, Some(&set));
        assert!(dot.contains("0 -> 1 [label=\"1/1\", style=bold, color=black];"));
        assert!(dot.contains("1 -> 0 [label=\"1/1\", color=grey];"));
    }

    #[test]
    fn dot_with_empty_highlight_is_all_grey() {
        let inst = parse_instance("p kacss 2 2 1\na 0 1 1/1\na 1 0 1/1").unwrap();
        let dot = export_dot(&inst, Some(&ArcSet::new()));
        assert_eq!(dot.matches("color=grey").count(), 2);
        assert!(!dot.contains("bold"));
    }

    #[test]
    fn gap_instance_dot_counts() {
        let gap = build_gap_instance(&GapParams::new(2, 3).unwrap());
        let full: ArcSet = (0..gap.instance.num_arcs()).collect();
        let dot = export_dot(&gap.instance, Some(&full));
        assert_eq!(dot.matches("->").count(), 32);
        assert_eq!(dot.matches("style=bold").count(), 32);
        for v in 0..16 {
            assert!(dot.contains(&format!("  {v};\n")));
        }
    }
}
