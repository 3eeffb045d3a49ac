//! Command line front end: combinatorics, arrangements, characters, wiring
//! diagrams and the invariant, plus the one-shot reproduction command.
//!
//! Exit codes: 0 on success, 1 on a domain error (invalid input data, failed
//! check), 2 on a usage error.

mod io;

use std::fs;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use zariski_core::arrangement::{builtin_arrangement, Arrangement};
use zariski_core::ball::set_precision_floor;
use zariski_core::character::{
    is_inner_cyclic, standard_character, Character, TriangleCycle,
};
use zariski_core::combinatorics::{builtin_k, builtin_k12, Combinatorics};
use zariski_core::invariant::{
    invariant_checked, invariant_run, separation_report, CrossingMatrix,
    InvariantOptions,
};
use zariski_core::render::render_svg;
use zariski_core::wiring::{generic_diagram, ChartKind, PipelineOptions};

#[derive(Parser)]
#[command(name = "zariski", version, about = "Exact line arrangement toolkit")]
struct Cli {
    /// Starting precision (bits) for certified interval evaluations.
    #[arg(long, global = true)]
    precision: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Abstract combinatorics: validation, automorphisms, orbits.
    Combi {
        #[command(subcommand)]
        action: CombiCmd,
    },
    /// Projective arrangements: lattice, checks, conjugation.
    Arr {
        #[command(subcommand)]
        action: ArrCmd,
    },
    /// Characters and cycles.
    Char {
        #[command(subcommand)]
        action: CharCmd,
    },
    /// Braided wiring diagram of an arrangement.
    Wiring {
        /// Arrangement file or builtin:NAME.
        arrangement: String,
        /// Label of the line sent to infinity.
        #[arg(long)]
        infinity: usize,
        #[arg(long, value_enum, default_value_t = ChartArg::Paper)]
        chart: ChartArg,
        /// Write an SVG rendering here.
        #[arg(long)]
        svg: Option<String>,
        /// Write the event list as JSON here.
        #[arg(long)]
        events: Option<String>,
    },
    /// The cyclic invariant of a triangle cycle.
    Invariant {
        /// Arrangement file or builtin:NAME.
        arrangement: String,
        /// Character file; defaults to the built-in order-5 character.
        #[arg(long = "char")]
        character: Option<String>,
        /// Cycle as `r,s,t` or a JSON file.
        #[arg(long)]
        cycle: String,
        /// Recompute along this many distinct paths and require agreement.
        #[arg(long, default_value_t = 1)]
        paths: usize,
    },
    /// Compute the invariant for all built-in arrangements and print the
    /// separation report.
    ReproducePaper,
}

#[derive(Subcommand)]
enum CombiCmd {
    /// Check the pairwise-intersection axioms.
    Validate { input: String },
    /// Automorphism group: order and generators.
    Aut { input: String },
    /// Line and point orbits under the automorphism group.
    Orbits { input: String },
}

#[derive(Subcommand)]
enum ArrCmd {
    /// Intersection lattice as combinatorics JSON.
    Lattice { input: String },
    /// Validate the arrangement and identify its lattice.
    Check { input: String },
    /// Complex conjugate arrangement as JSON.
    Conjugate { input: String },
}

#[derive(Subcommand)]
enum CharCmd {
    /// The three inner-cyclic conditions for (combinatorics, character, cycle).
    CheckInnerCyclic {
        comb: String,
        character: String,
        cycle: String,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ChartArg {
    Paper,
    Standard,
    Auto,
}

impl From<ChartArg> for ChartKind {
    fn from(c: ChartArg) -> ChartKind {
        match c {
            ChartArg::Paper => ChartKind::Paper,
            ChartArg::Standard => ChartKind::Standard,
            ChartArg::Auto => ChartKind::Auto,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(bits) = cli.precision {
        set_precision_floor(bits);
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Combi { action } => combi(action),
        Command::Arr { action } => arr(action),
        Command::Char { action } => char_cmd(action),
        Command::Wiring { arrangement, infinity, chart, svg, events } => {
            wiring(&arrangement, infinity, chart, svg, events)
        }
        Command::Invariant { arrangement, character, cycle, paths } => {
            invariant_cmd(&arrangement, character.as_deref(), &cycle, paths)
        }
        Command::ReproducePaper => reproduce(),
    }
}

fn combi(action: CombiCmd) -> Result<()> {
    match action {
        CombiCmd::Validate { input } => {
            let c = io::load_combinatorics(&input)?;
            c.validate().map_err(|e| anyhow!("{e}"))?;
            println!("ok: {} lines, {} points", c.n_lines(), c.points().len());
        }
        CombiCmd::Aut { input } => {
            let c = io::load_combinatorics(&input)?;
            let g = c.automorphism_group().map_err(|e| anyhow!("{e}"))?;
            println!("order {}", g.order());
            // Prefer a single generator when the group is cyclic.
            let cyclic = g.elements().iter().find(|p| {
                let mut q = (*p).clone();
                let mut n = 1;
                while !q.is_identity() {
                    q = q.compose(p);
                    n += 1;
                }
                n == g.order()
            });
            match cyclic {
                Some(p) if p.is_identity() => {}
                Some(p) => println!("generator {}", p.cycle_string()),
                None => {
                    for gen in g.generators() {
                        println!("generator {}", gen.cycle_string());
                    }
                }
            }
        }
        CombiCmd::Orbits { input } => {
            let c = io::load_combinatorics(&input)?;
            let g = c.automorphism_group().map_err(|e| anyhow!("{e}"))?;
            let orbits = c.orbits(&g).map_err(|e| anyhow!("{e}"))?;
            println!("line orbits:");
            for orbit in &orbits.line_orbits {
                let labels: Vec<String> = orbit.iter().map(|l| l.to_string()).collect();
                println!("  {{{}}}", labels.join(", "));
            }
            println!("point orbits:");
            for orbit in &orbits.point_orbits {
                let pts: Vec<String> = orbit
                    .iter()
                    .map(|&i| {
                        let labels: Vec<String> =
                            c.points()[i].iter().map(|l| l.to_string()).collect();
                        format!("{{{}}}", labels.join(","))
                    })
                    .collect();
                println!("  {}", pts.join(" "));
            }
        }
    }
    Ok(())
}

fn arr(action: ArrCmd) -> Result<()> {
    match action {
        ArrCmd::Lattice { input } => {
            let a = io::load_arrangement(&input)?;
            let lattice = a.intersection_lattice().map_err(|e| anyhow!("{e}"))?;
            print!("{}", io::to_pretty(&io::combinatorics_json(&lattice)));
        }
        ArrCmd::Check { input } => {
            let a = io::load_arrangement(&input)?;
            let lattice = a.intersection_lattice().map_err(|e| anyhow!("{e}"))?;
            lattice.validate().map_err(|e| anyhow!("{e}"))?;
            let e = a.embedding();
            println!(
                "ok: {} lines over Q(zeta_{}) at root index {}",
                a.n_lines(),
                e.field_order(),
                e.root_index()
            );
            println!("lattice: {} points", lattice.points().len());
            if let Some(name) = identify_lattice(&lattice) {
                println!("lattice equals builtin {name}");
            }
        }
        ArrCmd::Conjugate { input } => {
            let a = io::load_arrangement(&input)?;
            print!("{}", io::to_pretty(&io::arrangement_json(&a.conjugate())));
        }
    }
    Ok(())
}

fn identify_lattice(lattice: &Combinatorics) -> Option<&'static str> {
    if *lattice == builtin_k() {
        Some("K")
    } else if *lattice == builtin_k12() {
        Some("K12")
    } else {
        None
    }
}

fn char_cmd(action: CharCmd) -> Result<()> {
    let CharCmd::CheckInnerCyclic { comb, character, cycle } = action;
    let c = io::load_combinatorics(&comb)?;
    let xi = io::load_character(&character)?;
    let gamma = io::load_cycle(&cycle)?;
    let report = is_inner_cyclic(&c, &xi, &gamma).map_err(|e| anyhow!("{e}"))?;
    if report.holds() {
        println!(
            "inner-cyclic: ({}, {}, {}) passes all three conditions",
            gamma.r, gamma.s, gamma.t
        );
        Ok(())
    } else {
        for f in &report.failures {
            eprintln!("failed {f}");
        }
        bail!("not inner-cyclic: {} condition(s) fail", report.failures.len());
    }
}

fn wiring(
    arrangement: &str,
    infinity: usize,
    chart: ChartArg,
    svg: Option<String>,
    events: Option<String>,
) -> Result<()> {
    let a = io::load_arrangement(arrangement)?;
    let opts = PipelineOptions { chart: chart.into(), ..PipelineOptions::default() };
    let g = generic_diagram(&a, infinity, &opts).map_err(|e| anyhow!("{e}"))?;
    let w = &g.diagram;
    let crossings = w.events.len() - w.nodes().count();
    println!(
        "{} strands, {} nodes, {} crossings, epsilon {}",
        w.n_strands(),
        w.nodes().count(),
        crossings,
        g.epsilon
    );
    if let Some(path) = svg {
        fs::write(&path, render_svg(w))?;
        println!("svg written to {path}");
    }
    if let Some(path) = events {
        fs::write(&path, io::to_pretty(&io::events_json(w)))?;
        println!("events written to {path}");
    }
    Ok(())
}

/// The standard character, zero-extended when the arrangement carries extra
/// lines beyond the 11 it is defined on.
fn default_character(a: &Arrangement) -> Result<Character> {
    let xi = standard_character();
    let n = a.n_lines();
    if n < xi.exponents().len() {
        bail!(
            "no default character for {n} lines; pass --char",
        );
    }
    let mut exps = xi.exponents().to_vec();
    exps.resize(n, 0);
    Character::new(xi.order(), exps).map_err(|e| anyhow!("{e}"))
}

fn column_json(counts: &CrossingMatrix, under: usize) -> Value {
    let mut m = Map::new();
    for (over, count) in counts.column(under) {
        m.insert(over.to_string(), json!(count));
    }
    Value::Object(m)
}

fn invariant_cmd(
    arrangement: &str,
    character: Option<&str>,
    cycle: &str,
    paths: usize,
) -> Result<()> {
    let a = io::load_arrangement(arrangement)?;
    let xi = match character {
        Some(path) => io::load_character(path)?,
        None => default_character(&a)?,
    };
    let gamma = io::load_cycle(cycle)?;
    let run = invariant_run(&a, &xi, &gamma, &InvariantOptions::default())
        .map_err(|e| anyhow!("{e}"))?;
    if paths > 1 {
        let v = invariant_checked(&a, &xi, &gamma, paths).map_err(|e| anyhow!("{e}"))?;
        assert_eq!(v, run.value);
    }
    let mut columns = Map::new();
    columns.insert(gamma.s.to_string(), column_json(&run.counts, gamma.s));
    columns.insert(gamma.t.to_string(), column_json(&run.counts, gamma.t));
    let out = json!({
        "value_exponent": run.value.exponent,
        "order": run.value.order,
        "paths_checked": paths.max(1),
        "crossing_columns": Value::Object(columns),
    });
    print!("{}", io::to_pretty(&out));
    Ok(())
}

fn reproduce() -> Result<()> {
    let xi = standard_character();
    let gamma = TriangleCycle::new(5, 6, 11).map_err(|e| anyhow!("{e}"))?;
    let named: Vec<(String, Arrangement)> = ["N+", "N-", "M+", "M-"]
        .iter()
        .map(|name| {
            builtin_arrangement(name)
                .map(|a| (name.to_string(), a))
                .map_err(|e| anyhow!("{e}"))
        })
        .collect::<Result<_>>()?;
    let report = separation_report(&named, &xi, &gamma, &InvariantOptions::default())
        .map_err(|e| anyhow!("{e}"))?;
    println!("invariant of the triangle cycle (5, 6, 11):");
    print!("{report}");
    println!();
    println!("12-line variants (DERIVED, exponent 0 on line 12):");
    for name in ["FN+", "FN-", "FM+", "FM-"] {
        let a = builtin_arrangement(name).map_err(|e| anyhow!("{e}"))?;
        let xi12 = default_character(&a)?;
        let run = invariant_run(&a, &xi12, &gamma, &InvariantOptions::default())
            .map_err(|e| anyhow!("{e}"))?;
        println!("  I({name}) = {}", run.value);
    }
    Ok(())
}
