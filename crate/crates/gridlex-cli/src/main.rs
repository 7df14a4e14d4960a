//! `gridlex`: generate, check, extract, search, and certify rank arrays
//! from the command line.
//!
//! Exit codes: 0 success / property holds / witness found; 1 property
//! fails, staged extraction failure, or exhaustive absence; 2 malformed
//! input or unusable parameters; 3 file invariant violation (ranks not a
//! permutation); 4 search budget exceeded.

mod io;

use std::path::PathBuf;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use gridlex_core::extract::lex::{
    extract_lex_3d, extract_lex_d, fg_extract_lex_2d, pipeline_lex_monotone,
};
use gridlex_core::extract::monotone::{
    extract_inconsistent, extract_monotone_2d, extract_monotone_3d, extract_monotone_d,
};
use gridlex_core::extract::Extraction;
use gridlex_core::oracle::{
    brute_lex_subgrid, brute_monotone_subgrid, verify_f2_construction, Engine, SearchBudget,
    SearchOpts,
};
use gridlex_core::{constructions, grid, Error as CoreError, LexType, RankArray, Sign, Subgrid};

use io::{CliError, FileFormat};

#[derive(Parser)]
#[command(name = "gridlex", version, about = "Monotone and lexicographic subarray toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate an array and write it to a file.
    Gen {
        kind: GenKind,
        /// Output path.
        out: PathBuf,
        /// Block or construction parameter.
        #[arg(long)]
        n: Option<usize>,
        /// Comma-separated sizes, dimension 1 first.
        #[arg(long, value_delimiter = ',')]
        dims: Option<Vec<usize>>,
        /// Comma-separated priority permutation for lex arrays.
        #[arg(long, value_delimiter = ',')]
        sigma: Option<Vec<usize>>,
        /// Comma-separated signs (+ or -) per dimension for lex arrays.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        signs: Option<Vec<String>>,
        /// Seed, required for the randomized generators.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = FileFormat::Json)]
        format: FileFormat,
    },
    /// Check a property of an array file; exit 0 when it holds.
    Check { file: PathBuf, what: CheckWhat },
    /// Run an extraction procedure; prints the witness as JSON.
    Extract {
        file: PathBuf,
        algo: Algo,
        /// Side of the target subarray.
        #[arg(long)]
        n: usize,
        /// Second side, monotone2d only (defaults to n).
        #[arg(long)]
        t: Option<usize>,
    },
    /// Certify a construction by exhaustive search.
    Verify {
        #[arg(long)]
        construction: Construction,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        max_candidates: Option<u64>,
        #[arg(long)]
        max_seconds: Option<u64>,
        #[arg(long, value_enum, default_value_t = EngineArg::Pruned)]
        engine: EngineArg,
    },
    /// Exhaustively search for a subgrid of the given kind and shape.
    Search {
        file: PathBuf,
        /// Comma-separated shape, one entry per dimension.
        #[arg(long, value_delimiter = ',')]
        shape: Vec<usize>,
        #[arg(long)]
        kind: KindArg,
        #[arg(long)]
        max_candidates: Option<u64>,
        #[arg(long)]
        max_seconds: Option<u64>,
        #[arg(long, value_enum, default_value_t = EngineArg::Pruned)]
        engine: EngineArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Random,
    Increasing,
    Lex,
    BlockG,
    BlockH,
    F2Lower,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckWhat {
    Monotone,
    Inconsistent,
    LexType,
    Increasing,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Monotone2d,
    Inconsistent,
    Monotone,
    Monotone3d,
    Lex2d,
    Lex3d,
    Lex,
    Pipeline,
}

#[derive(Clone, Copy, ValueEnum)]
enum Construction {
    F2,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Monotone,
    Lex,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Pruned,
    Naive,
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.cmd {
        Cmd::Gen { kind, out, n, dims, sigma, signs, seed, format } => {
            let array = generate(kind, n, dims, sigma, signs, seed)?;
            std::fs::write(&out, io::write_array(&array, format)?)?;
            Ok(0)
        }
        Cmd::Check { file, what } => check(&io::read_array(&file)?, what),
        Cmd::Extract { file, algo, n, t } => extract(&io::read_array(&file)?, algo, n, t),
        Cmd::Verify { construction: Construction::F2, n, max_candidates, max_seconds, engine } => {
            let opts = search_opts(max_candidates, max_seconds, engine);
            let report = verify_f2_construction(n, &opts)?;
            print!("{report}");
            Ok(if report.all_pass() { 0 } else { 1 })
        }
        Cmd::Search { file, shape, kind, max_candidates, max_seconds, engine } => {
            let opts = search_opts(max_candidates, max_seconds, engine);
            search(&io::read_array(&file)?, &shape, kind, &opts)
        }
    }
}

fn parse_signs(raw: &[String]) -> Result<Vec<Sign>, CliError> {
    raw.iter()
        .map(|tok| match tok.trim() {
            "+" | "+1" => Ok(Sign::Pos),
            "-" | "-1" => Ok(Sign::Neg),
            other => Err(CliError::Format(format!("bad sign {other:?}, expected + or -"))),
        })
        .collect()
}

fn generate(
    kind: GenKind,
    n: Option<usize>,
    dims: Option<Vec<usize>>,
    sigma: Option<Vec<usize>>,
    signs: Option<Vec<String>>,
    seed: Option<u64>,
) -> Result<RankArray, CliError> {
    let need_n = || n.ok_or_else(|| CliError::Format("this generator requires --n".into()));
    let need_dims =
        || dims.clone().ok_or_else(|| CliError::Format("this generator requires --dims".into()));
    let need_seed =
        || seed.ok_or_else(|| CliError::Format("randomized generators require --seed".into()));
    let array = match kind {
        GenKind::Random => constructions::gen_random(&need_dims()?, need_seed()?)?,
        GenKind::Increasing => constructions::gen_random_increasing(&need_dims()?, need_seed()?)?,
        GenKind::Lex => {
            let dims = need_dims()?;
            let sigma = sigma
                .ok_or_else(|| CliError::Format("lex arrays require --sigma".into()))?;
            let signs = match signs {
                Some(raw) => parse_signs(&raw)?,
                None => vec![Sign::Pos; dims.len()],
            };
            let lt = LexType::new(sigma, signs)?;
            constructions::gen_lex(&dims, &lt)?
        }
        GenKind::BlockG => constructions::gen_block_g(need_n()?)?,
        GenKind::BlockH => constructions::gen_block_h(need_n()?)?,
        GenKind::F2Lower => constructions::gen_f2_lower(need_n()?)?,
    };
    Ok(array)
}

fn check(array: &RankArray, what: CheckWhat) -> Result<i32, CliError> {
    match what {
        CheckWhat::Increasing => {
            let ok = grid::is_increasing(array);
            println!("increasing: {}", if ok { "yes" } else { "no" });
            Ok(i32::from(!ok))
        }
        CheckWhat::Inconsistent => {
            let ok = grid::is_inconsistently_monotone(array);
            println!("inconsistently monotone: {}", if ok { "yes" } else { "no" });
            Ok(i32::from(!ok))
        }
        CheckWhat::Monotone => match grid::monotone_pattern(array) {
            Some(p) => {
                println!("monotone: yes, pattern {p}");
                Ok(0)
            }
            None => {
                println!("monotone: no");
                Ok(1)
            }
        },
        CheckWhat::LexType => match grid::detect_lex_type(array) {
            Some(lt) => {
                println!("lex-monotone: yes, {lt}");
                Ok(0)
            }
            None => {
                println!("lex-monotone: no");
                Ok(1)
            }
        },
    }
}

fn subgrid_json(sub: &Subgrid) -> serde_json::Value {
    json!({ "indices": sub.indices })
}

fn signs_json(signs: &[Sign]) -> serde_json::Value {
    json!(signs.iter().map(|s| s.as_i8()).collect::<Vec<_>>())
}

fn require_dim(array: &RankArray, expected: usize, algo: &str) -> Result<(), CliError> {
    if array.dim() != expected {
        return Err(CliError::Format(format!(
            "{algo} needs a {expected}-dimensional array, got {}",
            array.dim()
        )));
    }
    Ok(())
}

fn extract(array: &RankArray, algo: Algo, n: usize, t: Option<usize>) -> Result<i32, CliError> {
    if n == 0 {
        return Err(CliError::Format("--n must be positive".into()));
    }
    let name = match algo {
        Algo::Monotone2d => "monotone2d",
        Algo::Inconsistent => "inconsistent",
        Algo::Monotone => "monotone",
        Algo::Monotone3d => "monotone3d",
        Algo::Lex2d => "lex2d",
        Algo::Lex3d => "lex3d",
        Algo::Lex => "lex",
        Algo::Pipeline => "pipeline",
    };
    enum Outcome {
        Pattern(Extraction<gridlex_core::MonotonicityPattern>),
        Plain(Extraction<()>),
        Lex(Extraction<LexType>),
    }
    let not_increasing = |e: CoreError| -> CliError {
        CliError::Format(format!("{name}: {e}"))
    };
    let outcome = match algo {
        Algo::Monotone2d => {
            require_dim(array, 2, name)?;
            Outcome::Pattern(extract_monotone_2d(array, n, t.unwrap_or(n)))
        }
        Algo::Inconsistent => Outcome::Plain(extract_inconsistent(array, n)),
        Algo::Monotone => {
            if array.dim() < 2 {
                return Err(CliError::Format("monotone needs at least 2 dimensions".into()));
            }
            Outcome::Pattern(extract_monotone_d(array, n))
        }
        Algo::Monotone3d => {
            require_dim(array, 3, name)?;
            Outcome::Pattern(extract_monotone_3d(array, n))
        }
        Algo::Lex2d => {
            require_dim(array, 2, name)?;
            Outcome::Lex(fg_extract_lex_2d(array, n).map_err(not_increasing)?)
        }
        Algo::Lex3d => {
            require_dim(array, 3, name)?;
            Outcome::Lex(extract_lex_3d(array, n).map_err(not_increasing)?)
        }
        Algo::Lex => {
            if array.dim() < 2 {
                return Err(CliError::Format("lex needs at least 2 dimensions".into()));
            }
            Outcome::Lex(extract_lex_d(array, n).map_err(not_increasing)?)
        }
        Algo::Pipeline => Outcome::Lex(pipeline_lex_monotone(array, n)),
    };

    let (value, found) = match outcome {
        Outcome::Pattern(Extraction::Found { subgrid, kind }) => (
            json!({
                "algo": name, "outcome": "found",
                "subgrid": subgrid_json(&subgrid),
                "pattern": { "signs": signs_json(&kind.signs) },
            }),
            true,
        ),
        Outcome::Plain(Extraction::Found { subgrid, .. }) => (
            json!({
                "algo": name, "outcome": "found",
                "subgrid": subgrid_json(&subgrid),
            }),
            true,
        ),
        Outcome::Lex(Extraction::Found { subgrid, kind }) => (
            json!({
                "algo": name, "outcome": "found",
                "subgrid": subgrid_json(&subgrid),
                "lex_type": { "sigma": kind.sigma, "signs": signs_json(&kind.signs) },
            }),
            true,
        ),
        Outcome::Pattern(Extraction::Failed(f))
        | Outcome::Plain(Extraction::Failed(f))
        | Outcome::Lex(Extraction::Failed(f)) => (
            json!({
                "algo": name, "outcome": "failed",
                "stage": f.stage, "achieved": f.achieved,
            }),
            false,
        ),
    };
    println!("{value}");
    Ok(if found { 0 } else { 1 })
}

fn search_opts(
    max_candidates: Option<u64>,
    max_seconds: Option<u64>,
    engine: EngineArg,
) -> SearchOpts {
    let threads = std::env::var("GRIDLEX_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&v| v >= 1)
        .unwrap_or_else(|| {
            std::thread::available_parallelism().map(|p| p.get().min(8)).unwrap_or(1)
        });
    SearchOpts {
        budget: SearchBudget {
            max_candidates: max_candidates.unwrap_or(u64::MAX),
            max_time: max_seconds.map(Duration::from_secs),
        },
        engine: match engine {
            EngineArg::Pruned => Engine::Pruned,
            EngineArg::Naive => Engine::Naive,
        },
        threads,
    }
}

fn search(
    array: &RankArray,
    shape: &[usize],
    kind: KindArg,
    opts: &SearchOpts,
) -> Result<i32, CliError> {
    match kind {
        KindArg::Monotone => match brute_monotone_subgrid(array, shape, opts)? {
            Some((sub, pattern)) => {
                println!(
                    "{}",
                    json!({
                        "kind": "monotone", "outcome": "found",
                        "subgrid": subgrid_json(&sub),
                        "pattern": { "signs": signs_json(&pattern.signs) },
                    })
                );
                Ok(0)
            }
            None => {
                println!("{}", json!({ "kind": "monotone", "outcome": "absent" }));
                Ok(1)
            }
        },
        KindArg::Lex => {
            if shape.len() != 2 {
                return Err(CliError::Format("lex search takes --shape a,b".into()));
            }
            match brute_lex_subgrid(array, (shape[0], shape[1]), None, opts)? {
                Some((sub, lt)) => {
                    println!(
                        "{}",
                        json!({
                            "kind": "lex", "outcome": "found",
                            "subgrid": subgrid_json(&sub),
                            "lex_type": { "sigma": lt.sigma, "signs": signs_json(&lt.signs) },
                        })
                    );
                    Ok(0)
                }
                None => {
                    println!("{}", json!({ "kind": "lex", "outcome": "absent" }));
                    Ok(1)
                }
            }
        }
    }
}

