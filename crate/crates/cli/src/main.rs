use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use morse_moduli::arrangement::{
    collect_regions, count_regions, crossed_hyperplanes, enumerate_regions, facets_of_critical_region, is_essential,
    is_morse_region, matching_complex, matching_to_flat, sign_vector, DEFAULT_GUARD,
};
use morse_moduli::barcode::{barcode_edit_distance, induced_barcode, BarBudget};
use morse_moduli::complex::Complex;
use morse_moduli::error::Error;
use morse_moduli::function::DiscreteFunction;
use morse_moduli::io::{self, InputError};
use morse_moduli::merge_tree::{edit_distance, induced_merge_tree, EditBudget, EditDistance};
use morse_moduli::morphism::{pullback, pushforward, CellMap, MapFlags};
use morse_moduli::morse::{
    critical_of_matching, first_violation, induced_matching, is_acyclic_matching, is_discrete_morse,
    is_morse_benedetti, is_weak_morse_benedetti,
};

/// Computations on the moduli space of discrete Morse functions.
#[derive(Parser)]
#[command(name = "morse-moduli", version)]
struct Cli {
    /// Worker threads for parallel enumeration (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Write the JSON result here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ComplexArg {
    /// Builtin complex name or path to a complex JSON file.
    #[arg(long)]
    complex: String,
}

#[derive(Args)]
struct FunctionArgs {
    #[command(flatten)]
    complex: ComplexArg,
    #[arg(long)]
    function: PathBuf,
}

#[derive(Args)]
struct Budget {
    #[arg(long)]
    max_nodes: Option<usize>,
    #[arg(long)]
    max_steps: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Morse, Morse–Benedetti and weak Morse–Benedetti tests plus the sign vector.
    Check(FunctionArgs),
    /// The induced matching, critical cells and acyclicity.
    Matching(FunctionArgs),
    /// Regions of the Morse arrangement.
    Regions {
        #[command(flatten)]
        complex: ComplexArg,
        #[arg(long)]
        morse_only: bool,
        #[arg(long)]
        count: bool,
        #[arg(long)]
        facets_of_critical: bool,
        /// Stop after this many regions (exit code 3 when cut short).
        #[arg(long)]
        max_steps: Option<usize>,
    },
    /// Simplices of the complex of discrete Morse matchings.
    MatchingComplex {
        #[command(flatten)]
        complex: ComplexArg,
        #[arg(long, default_value_t = 2)]
        max_card: usize,
    },
    /// The merge tree induced by a discrete Morse function.
    MergeTree(FunctionArgs),
    /// The elder-rule barcode of a well-branched merge tree.
    Barcode {
        #[arg(long)]
        tree: PathBuf,
    },
    /// Edit distance between two merge trees.
    TreeDist {
        #[arg(long, num_args = 1, required = true)]
        tree: Vec<PathBuf>,
        #[command(flatten)]
        budget: Budget,
    },
    /// Edit distance between two barcodes; --max-nodes bounds the bar count.
    BarDist {
        #[arg(long, num_args = 1, required = true)]
        barcode: Vec<PathBuf>,
        #[command(flatten)]
        budget: Budget,
    },
    /// Push a function on the source of a cell map to its target.
    Pushforward {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        function: PathBuf,
    },
    /// Pull a function on the target of a cell map back to its source.
    Pullback {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        function: PathBuf,
    },
    /// Braid hyperplanes separating two functions.
    Crossings {
        #[command(flatten)]
        complex: ComplexArg,
        #[arg(long, num_args = 1, required = true)]
        function: Vec<PathBuf>,
    },
}

struct Failure {
    field: String,
    message: String,
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Self {
            field: e.field,
            message: e.message,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self {
            field: String::new(),
            message: e.to_string(),
        }
    }
}

fn in_file(path: &Path, e: InputError) -> Failure {
    let message = format!("{}: {}", path.display(), e.message);
    Failure {
        field: e.field,
        message,
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure {
        field: String::new(),
        message: format!("cannot read {}: {e}", path.display()),
    })
}

fn load_complex(arg: &ComplexArg) -> Result<Complex, Failure> {
    io::load_complex(&arg.complex).map_err(Failure::from)
}

fn load_function(x: &Complex, path: &Path) -> Result<DiscreteFunction, Failure> {
    io::parse_function(&read(path)?, x).map_err(|e| in_file(path, e))
}

fn load_map(path: &Path) -> Result<CellMap, Failure> {
    let base = path.parent().unwrap_or(Path::new("."));
    io::parse_map(&read(path)?, base).map_err(|e| in_file(path, e))
}

fn two<T>(items: &[T], flag: &str) -> Result<(), Failure> {
    if items.len() == 2 {
        Ok(())
    } else {
        Err(Failure {
            field: String::new(),
            message: format!("--{flag} must be given exactly twice"),
        })
    }
}

fn flags_json(f: MapFlags) -> Value {
    json!({
        "order_preserving": f.order_preserving,
        "simplicial": f.simplicial,
        "non_degenerate": f.non_degenerate,
        "injective": f.injective,
    })
}

fn edit_json(d: &EditDistance) -> Value {
    json!({ "distance": io::distance_to_json(&d.distance), "exact": d.exact, "states": d.states })
}

/// The result document and whether it is complete.
fn run(command: &Command) -> Result<(Value, bool), Failure> {
    match command {
        Command::Check(args) => {
            let x = load_complex(&args.complex)?;
            let f = load_function(&x, &args.function)?;
            let violation = first_violation(&x, &f).map(|v| json!({"cell": v.cell, "condition": v.condition}));
            let (mb, weak) = if x.is_regular() {
                (
                    json!(is_morse_benedetti(&x, &f)?),
                    json!(is_weak_morse_benedetti(&x, &f)?),
                )
            } else {
                (Value::Null, Value::Null)
            };
            Ok((
                json!({
                    "morse": violation.is_none(),
                    "violation": violation,
                    "mb": mb,
                    "weak_mb": weak,
                    "essential": is_essential(&x, &f),
                    "signs": sign_vector(&x, &f).to_map(&x),
                }),
                true,
            ))
        }
        Command::Matching(args) => {
            let x = load_complex(&args.complex)?;
            let f = load_function(&x, &args.function)?;
            let m = induced_matching(&x, &f)?;
            Ok((
                json!({
                    "pairs": m.pairs(&x),
                    "critical": critical_of_matching(&x, &m),
                    "acyclic": is_acyclic_matching(&x, &m),
                }),
                true,
            ))
        }
        Command::Regions {
            complex,
            morse_only,
            count,
            facets_of_critical,
            max_steps,
        } => {
            let x = load_complex(complex)?;
            if *facets_of_critical {
                let facets: Vec<String> = facets_of_critical_region(&x)
                    .into_iter()
                    .map(|e| x.cover_key(e))
                    .collect();
                return Ok((
                    json!({
                        "count": facets.len(),
                        "facets": facets,
                        "hyperplanes": x.covers().len(),
                        "essential_rank": x.essential_rank(),
                    }),
                    true,
                ));
            }
            let regions = match max_steps {
                None if *count => {
                    return Ok((
                        json!({"count": count_regions(&x, *morse_only, DEFAULT_GUARD)?, "morse_only": morse_only, "complete": true}),
                        true,
                    ))
                }
                None => collect_regions(&x, *morse_only, DEFAULT_GUARD)?,
                Some(limit) => enumerate_regions(&x, *morse_only, DEFAULT_GUARD)?
                    .take(limit + 1)
                    .collect(),
            };
            let complete = max_steps.is_none_or(|limit| regions.len() <= limit);
            let regions = &regions[..max_steps.map_or(regions.len(), |l| l.min(regions.len()))];
            let mut out = json!({"count": regions.len(), "morse_only": morse_only, "complete": complete});
            if !*count {
                out["regions"] = regions
                    .iter()
                    .map(|v| Ok(json!({"signs": v.to_map(&x), "morse": is_morse_region(&x, v)?})))
                    .collect::<Result<Vec<Value>, Error>>()?
                    .into();
            }
            Ok((out, complete))
        }
        Command::MatchingComplex { complex, max_card } => {
            let x = load_complex(complex)?;
            let simplices: Vec<Value> = matching_complex(&x, *max_card)
                .iter()
                .map(|m| json!({"pairs": m.pairs(&x), "flat": matching_to_flat(&x, m).ids(&x)}))
                .collect();
            let mut by_card = std::collections::BTreeMap::new();
            for s in &simplices {
                *by_card
                    .entry(s["pairs"].as_array().map_or(0, |a| a.len()).to_string())
                    .or_insert(0usize) += 1;
            }
            Ok((json!({"simplices": simplices, "by_cardinality": by_card}), true))
        }
        Command::MergeTree(args) => {
            let x = load_complex(&args.complex)?;
            let f = load_function(&x, &args.function)?;
            let t = induced_merge_tree(&x, &f)?;
            Ok((
                json!({
                    "tree": io::tree_to_json(&t),
                    "classification": t.classify().name(),
                    "witnesses": t.witnesses(),
                }),
                true,
            ))
        }
        Command::Barcode { tree } => {
            let t = io::parse_tree(&read(tree)?).map_err(|e| in_file(tree, e))?;
            Ok((io::barcode_to_json(&induced_barcode(&t)?), true))
        }
        Command::TreeDist { tree, budget } => {
            two(tree, "tree")?;
            let a = io::parse_tree(&read(&tree[0])?).map_err(|e| in_file(&tree[0], e))?;
            let b = io::parse_tree(&read(&tree[1])?).map_err(|e| in_file(&tree[1], e))?;
            let budget = EditBudget {
                max_nodes: budget.max_nodes,
                max_steps: budget.max_steps,
                grid: None,
            };
            let d = edit_distance(&a, &b, &budget)?;
            Ok((edit_json(&d), d.exact))
        }
        Command::BarDist { barcode, budget } => {
            two(barcode, "barcode")?;
            let a = io::parse_barcode(&read(&barcode[0])?).map_err(|e| in_file(&barcode[0], e))?;
            let b = io::parse_barcode(&read(&barcode[1])?).map_err(|e| in_file(&barcode[1], e))?;
            let budget = BarBudget {
                max_bars: budget.max_nodes,
                max_steps: budget.max_steps,
            };
            let d = barcode_edit_distance(&a, &b, &budget)?;
            Ok((edit_json(&d), d.exact))
        }
        Command::Pushforward { map, function } => {
            let phi = load_map(map)?;
            let f = load_function(phi.source(), function)?;
            let out = pushforward(&phi, &f)?;
            Ok((
                json!({
                    "function": io::function_to_json(phi.target(), &out.function),
                    "morse": out.morse,
                    "flags": flags_json(phi.classify()),
                }),
                true,
            ))
        }
        Command::Pullback { map, function } => {
            let phi = load_map(map)?;
            let g = load_function(phi.target(), function)?;
            let f = pullback(&phi, &g)?;
            Ok((
                json!({
                    "function": io::function_to_json(phi.source(), &f),
                    "morse": is_discrete_morse(phi.source(), &f),
                }),
                true,
            ))
        }
        Command::Crossings { complex, function } => {
            two(function, "function")?;
            let x = load_complex(complex)?;
            let f = load_function(&x, &function[0])?;
            let g = load_function(&x, &function[1])?;
            let crossings: Vec<Value> = crossed_hyperplanes(&x, &f, &g)?
                .into_iter()
                .map(|c| json!({"a": x.id(c.a), "b": x.id(c.b), "in_morse_arrangement": c.in_morse_arrangement}))
                .collect();
            Ok((json!({"count": crossings.len(), "crossings": crossings}), true))
        }
    }
}

fn emit(text: &str, output: Option<&Path>) -> std::io::Result<()> {
    match output {
        Some(path) => fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0
            || rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build_global()
                .is_err()
        {
            eprintln!("{}", json!({"error": "invalid --jobs value", "field": "--jobs"}));
            return ExitCode::from(2);
        }
    }
    match run(&cli.command) {
        Ok((doc, complete)) => {
            let text = serde_json::to_string_pretty(&doc).expect("serializable") + "\n";
            if let Err(e) = emit(&text, cli.output.as_deref()) {
                eprintln!(
                    "{}",
                    json!({"error": format!("cannot write output: {e}"), "field": "--output"})
                );
                return ExitCode::from(2);
            }
            if complete {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            }
        }
        Err(f) => {
            eprintln!("{}", json!({"error": f.message, "field": f.field}));
            ExitCode::from(2)
        }
    }
}
