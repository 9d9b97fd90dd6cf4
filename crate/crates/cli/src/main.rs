use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use strata_cli::checks::{self, CheckResult};
use strata_core::rational::render as q;
use strata_core::rt::a_symbolic;
use strata_core::twist::SplitReading;
use strata_core::{alpha_rt, enumerate_bicolored, enumerate_stable_graphs, Anchor, CoeffError, CoeffTable, DegreeRule};

#[derive(Parser)]
#[command(name = "strata", version, about = "Stable graphs, level graphs, rational-tails classes and coefficient tables")]
struct Cli {
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads (1 = sequential). Defaults to the number of cores.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum RuleArg {
    Canonical,
    Hodge,
}

#[derive(Clone, Copy, ValueEnum)]
enum Fallback {
    None,
    Symbolic,
}

#[derive(Subcommand)]
enum Command {
    /// Stable graphs of genus g with n legs, one per isomorphism class.
    EnumerateGraphs {
        #[arg(short)]
        g: u32,
        #[arg(short)]
        n: usize,
        #[arg(long, default_value_t = u32::MAX)]
        max_loops: u32,
    },
    /// Two-level graphs for a zero profile with marking `down` at the lower level.
    EnumerateBicolored {
        #[arg(short)]
        g: u32,
        #[arg(short = 'Z', allow_hyphen_values = true)]
        zeros: String,
        #[arg(long)]
        down: u32,
        /// A second marking required at the lower level.
        #[arg(long, conflicts_with = "up")]
        also_down: Option<u32>,
        /// A marking required at the upper level.
        #[arg(long)]
        up: Option<u32>,
        #[arg(long, value_enum, default_value_t = RuleArg::Canonical)]
        rule: RuleArg,
    },
    /// The rational-tails class α(g, Z) as a polynomial in ξ.
    AlphaRt {
        #[arg(short)]
        g: u32,
        #[arg(short = 'Z', allow_hyphen_values = true)]
        zeros: String,
    },
    /// The w and u tables and a_g for 1 ≤ g ≤ G, or a single cell with --cell.
    CoeffTable {
        #[arg(short = 'G')]
        g_max: u32,
        #[arg(long)]
        cache: Option<PathBuf>,
        /// Print cache and recomputation counters to stderr.
        #[arg(long)]
        stats: bool,
        /// A single cell `g,z,n`.
        #[arg(long, allow_hyphen_values = true)]
        cell: Option<String>,
        /// What to do with a cell the recursion cannot reach.
        #[arg(long, value_enum, default_value_t = Fallback::None)]
        fallback: Fallback,
    },
    /// Run an invariant suite.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct VerifyArgs {
    #[command(subcommand)]
    suite: Suite,
}

#[derive(Subcommand, Clone)]
enum Suite {
    /// Oracle agreement for all stable (g, n) with 3g − 3 + n ≤ dim.
    Graphs {
        #[arg(long, default_value_t = 3)]
        dim: u32,
    },
    /// Level-graph oracle agreement and level merging.
    Twists {
        #[arg(short, default_value_t = 2)]
        g: u32,
        #[arg(long, default_value_t = 3)]
        max_size: i64,
    },
    /// Homogeneity, product formula, order independence and boundary coefficients.
    Rt {
        #[arg(long, default_value_t = 6)]
        max_size: i64,
    },
    /// Closed forms and the two-route comparison.
    Coeffs {
        #[arg(short = 'G', default_value_t = 12)]
        g_max: u32,
    },
    All,
}

struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

fn parse_list(s: &str) -> Result<Vec<i64>, Usage> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|_| Usage(format!("not an integer: {x:?}"))))
        .collect()
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn enumerate_graphs(format: Format, g: u32, n: usize, max_loops: u32) -> Result<(), Usage> {
    let graphs = enumerate_stable_graphs(g, n, max_loops)?;
    if format == Format::Csv {
        println!("index,automorphisms,graph");
    }
    for (i, graph) in graphs.iter().enumerate() {
        let form = graph.canonical_form()?;
        let body = serde_json::to_string(&graph.to_json())?;
        match format {
            Format::Json => println!("{}", json!({"index": i, "automorphisms": form.automorphism_count, "graph": graph.to_json()})),
            Format::Csv => println!("{i},{},{}", form.automorphism_count, csv_field(&body)),
            Format::Text => println!("{i}: |Aut| = {} {body}", form.automorphism_count),
        }
    }
    print_count(format, graphs.len());
    Ok(())
}

fn print_count(format: Format, count: usize) {
    match format {
        Format::Json => println!("{}", json!({ "count": count })),
        Format::Csv | Format::Text => println!("count {count}"),
    }
}

fn bicolored(
    format: Format,
    g: u32,
    zeros: &str,
    down: u32,
    also_down: Option<u32>,
    up: Option<u32>,
    rule: RuleArg,
) -> Result<(), Usage> {
    let zeros = parse_list(zeros)?;
    let anchor = match (also_down, up) {
        (Some(j), _) => Anchor::Both(down, j),
        (None, Some(j)) => Anchor::Split { down, up: j, reading: SplitReading::SuperscriptUp },
        (None, None) => Anchor::Down(down),
    };
    let rule = match rule {
        RuleArg::Canonical => DegreeRule::Canonical,
        RuleArg::Hodge => DegreeRule::Hodge,
    };
    let list = enumerate_bicolored(g, &zeros, anchor, rule)?;
    if format == Format::Csv {
        println!("index,multiplicity,graph");
    }
    for (i, t) in list.iter().enumerate() {
        let m = t.multiplicity()?;
        let body = serde_json::to_string(&t.to_json())?;
        match format {
            Format::Json => println!("{}", json!({"index": i, "multiplicity": m, "graph": t.to_json()})),
            Format::Csv => println!("{i},{m},{}", csv_field(&body)),
            Format::Text => println!("{i}: m = {m} {body}"),
        }
    }
    print_count(format, list.len());
    Ok(())
}

fn alpha(format: Format, g: u32, zeros: &str) -> Result<(), Usage> {
    let zeros = parse_list(zeros)?;
    let alpha = alpha_rt(g, &zeros)?;
    match format {
        Format::Text => println!("{alpha}"),
        Format::Json => println!("{}", json!({"genus": g, "zeros": zeros, "alpha": alpha.render()})),
        Format::Csv => {
            println!("xi_power,monomial,coefficient");
            for (k, c) in alpha.coefficients().iter().enumerate().rev() {
                for (mono, coeff) in c.monomials() {
                    let mono = if mono.is_empty() { "1".to_string() } else { mono };
                    println!("{k},{},{}", csv_field(&mono), q(&coeff));
                }
            }
        }
    }
    Ok(())
}

fn parse_cell(s: &str) -> Result<(u32, i64, u32), Usage> {
    let v = parse_list(s)?;
    match v[..] {
        [g, z, n] if g >= 0 && n >= 0 => Ok((g as u32, z, n as u32)),
        _ => Err(Usage(format!("expected g,z,n with g, n ≥ 0, got {s:?}"))),
    }
}

fn coeff_table(
    format: Format,
    g_max: u32,
    cache: Option<PathBuf>,
    stats: bool,
    cell: Option<String>,
    fallback: Fallback,
) -> Result<(), Usage> {
    if g_max == 0 {
        return Err(Usage("-G must be at least 1".into()));
    }
    let table = match &cache {
        Some(path) => CoeffTable::load(path)?,
        None => CoeffTable::new(),
    };
    let loaded = table.len();
    let mut rows: Vec<(String, u32, Option<i64>, u32, String, String)> = Vec::new();
    if let Some(cell) = cell {
        let (g, z, n) = parse_cell(&cell)?;
        let (value, prov) = match table.a_rec(g, z, n) {
            Ok(v) => (v, table.get(g, z, n).map(|(_, p)| p.to_string()).unwrap_or_default()),
            Err(CoeffError::Unreachable { .. }) if matches!(fallback, Fallback::Symbolic) => {
                (a_symbolic(g, z, n as usize)?, "symbolic".to_string())
            }
            Err(e) => return Err(e.into()),
        };
        rows.push(("a".into(), g, Some(z), n, q(&value), prov));
    } else {
        for g in 1..=g_max {
            for n in 0..g {
                let z = g as i64 - 1 - n as i64;
                let w = table.a_rec(g, z, n)?;
                rows.push(("w".into(), g, Some(z), n, q(&w), prov_of(&table, g, z, n)));
            }
            for n in 0..g {
                let z = (g - n) as i64;
                let u = table.a_rec(g, z, n)?;
                rows.push(("u".into(), g, Some(z), n, q(&u), prov_of(&table, g, z, n)));
            }
            let a = table.a_rec(g, 1, g - 1)?;
            rows.push(("a".into(), g, None, g - 1, q(&a), prov_of(&table, g, 1, g - 1)));
        }
    }
    if format == Format::Csv {
        println!("kind,g,z,n,value,provenance");
    }
    for (kind, g, z, n, value, prov) in &rows {
        match format {
            Format::Json => println!(
                "{}",
                json!({"kind": kind, "g": g, "z": z.unwrap_or(1), "n": n, "value": value, "provenance": prov})
            ),
            Format::Csv => println!("{kind},{g},{},{n},{value},{prov}", z.unwrap_or(1)),
            Format::Text => match (kind.as_str(), z) {
                ("a", None) => println!("a_{g}={value}"),
                ("a", Some(z)) => println!("a({g},{z},{n})={value} [{prov}]"),
                (k, _) => println!("{k}_{{{g},{n}}}={value}"),
            },
        }
    }
    let written = match &cache {
        Some(path) => table.persist(path)?,
        None => 0,
    };
    if stats {
        eprintln!("loaded {loaded} cells, computed {} cells, appended {written} cells", table.computed());
    }
    Ok(())
}

fn prov_of(table: &CoeffTable, g: u32, z: i64, n: u32) -> String {
    table.get(g, z, n).map(|(_, p)| p.to_string()).unwrap_or_default()
}

fn suite_checks(suite: &Suite) -> Vec<(&'static str, Box<dyn Fn() -> CheckResult>)> {
    match *suite {
        Suite::Graphs { dim } => vec![("graphs", Box::new(move || checks::graphs(dim)))],
        Suite::Twists { g, max_size } => vec![("twists", Box::new(move || checks::twists(g, max_size)))],
        Suite::Rt { max_size } => vec![
            ("rt-homogeneity", Box::new(move || checks::homogeneity(3, 3, max_size))),
            ("rt-product", Box::new(move || checks::product_formula(3, max_size))),
            ("rt-order-independence", Box::new(move || checks::order_independence(3, 3, max_size))),
            ("rt-boundary-coefficients", Box::new(move || checks::coefficient_provenance(3, 3, max_size.min(4)))),
        ],
        Suite::Coeffs { g_max } => vec![
            ("coeffs", Box::new(move || checks::coeffs(g_max))),
            ("coeffs-two-routes", Box::new(move || checks::two_routes(g_max.min(4), 8))),
        ],
        Suite::All => [
            Suite::Graphs { dim: 3 },
            Suite::Twists { g: 2, max_size: 3 },
            Suite::Rt { max_size: 6 },
            Suite::Coeffs { g_max: 12 },
        ]
        .iter()
        .flat_map(suite_checks)
        .collect(),
    }
}

fn verify(format: Format, suite: &Suite) -> bool {
    let mut ok = true;
    if format == Format::Csv {
        println!("check,pass,seconds,detail");
    }
    for (name, check) in suite_checks(suite) {
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        let (pass, detail) = match &result {
            Ok(d) => (true, d.clone()),
            Err(e) => (false, e.clone()),
        };
        ok &= pass;
        match format {
            Format::Json => println!("{}", json!({"check": name, "pass": pass, "seconds": secs, "detail": detail})),
            Format::Csv => println!("{name},{pass},{secs:.3},{}", csv_field(&detail)),
            Format::Text => println!("{name}: {} ({detail}) [{secs:.2}s]", if pass { "pass" } else { "FAIL" }),
        }
    }
    ok
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.jobs {
        Some(0) => {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(2);
        }
        Some(1) => strata_core::exec::set_parallel(false),
        Some(n) => {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        }
        None => {}
    }
    let f = cli.format;
    let result = match cli.command {
        Command::EnumerateGraphs { g, n, max_loops } => enumerate_graphs(f, g, n, max_loops),
        Command::EnumerateBicolored { g, zeros, down, also_down, up, rule } => {
            bicolored(f, g, &zeros, down, also_down, up, rule)
        }
        Command::AlphaRt { g, zeros } => alpha(f, g, &zeros),
        Command::CoeffTable { g_max, cache, stats, cell, fallback } => coeff_table(f, g_max, cache, stats, cell, fallback),
        Command::Verify(args) => {
            return if verify(f, &args.suite) { ExitCode::SUCCESS } else { ExitCode::from(1) };
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
