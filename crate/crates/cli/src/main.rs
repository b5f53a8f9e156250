//! Command-line front end: algebra I/O, analysis, lattice emission and the
//! verification harness.

mod doc;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use evolab::error::Error as CoreError;
use evolab::lattice::{build_lattice, LabelKind, Lattice};
use evolab::linalg::DEFAULT_ENUMERATION_CAP;
use evolab::structure;
use evolab::subalgebras::{self, SubalgebraSet};

use doc::{AlgebraDocument, VerdictDocument};

/// Node count above which analyze skips lattice tables.
const ANALYZE_LATTICE_LIMIT: usize = 600;

#[derive(Parser)]
#[command(name = "evolab", version, about = "Exact-arithmetic analysis of evolution algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full structural verdict of an algebra file, as JSON on stdout.
    Analyze { file: PathBuf },
    /// Subalgebra lattice of an algebra file, as DOT or JSON.
    Lattice {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Emit::Dot)]
        emit: Emit,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        #[arg(long, value_enum, default_value_t = Labels::Basis)]
        labels: Labels,
    },
    /// Single property verdict with a witness; exits 0 (true) or 1 (false).
    Check {
        file: PathBuf,
        #[arg(long, value_enum)]
        property: Property,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
    },
    /// Randomized and golden verification suites.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        count: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Dot,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Brute,
    Structural,
    Auto,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Labels {
    Dims,
    Basis,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Property {
    Distributive,
    Modular,
    Usemi,
    Lsemi,
    Jalgebra,
    Supersolvable,
    QuasiIdeals,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Nilpotent,
    Maxsolvable,
    Families,
    PaperExamples,
}

/// Failure carrying its process exit code.
pub struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Failure {
        Failure { code, message: message.into() }
    }
}

fn core_error(e: CoreError) -> Failure {
    let code = match e {
        CoreError::CharacteristicTwo => 3,
        CoreError::EnumerationCapExceeded { .. } => 4,
        CoreError::InfiniteField | CoreError::UnsupportedOverInfiniteField => 5,
        CoreError::ParseScalar(_) | CoreError::NotPrime(_) => 2,
        _ => 6,
    };
    Failure::new(code, e.to_string())
}

fn enumeration_cap() -> u128 {
    std::env::var("EVOLAB_CAP")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_ENUMERATION_CAP)
}

fn load_algebra(file: &PathBuf) -> Result<(AlgebraDocument, evolab::EvolutionAlgebra), Failure> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| Failure::new(2, format!("cannot read {}: {e}", file.display())))?;
    let document: AlgebraDocument = serde_json::from_str(&text)
        .map_err(|e| Failure::new(2, format!("cannot parse {}: {e}", file.display())))?;
    let algebra = document
        .to_algebra()
        .map_err(|e| Failure::new(2, format!("invalid algebra in {}: {e}", file.display())))?;
    Ok((document, algebra))
}

fn enumerate(
    a: &evolab::EvolutionAlgebra,
    method: Method,
    cap: u128,
) -> Result<SubalgebraSet, Failure> {
    let result = match method {
        Method::Brute => subalgebras::enumerate_brute_force(a, cap),
        Method::Structural => subalgebras::enumerate_structural(a),
        Method::Auto => subalgebras::enumerate_auto(a, cap),
    };
    result.map_err(|e| match (method, &e) {
        // A brute-force request over the rationals is a policy error.
        (Method::Brute, CoreError::InfiniteField) => {
            Failure::new(5, CoreError::UnsupportedOverInfiniteField.to_string())
        }
        _ => core_error(e),
    })
}

fn cmd_analyze(file: PathBuf) -> Result<(), Failure> {
    let (document, algebra) = load_algebra(&file)?;
    let verdict = structure::analyze(&algebra);
    let mut out: VerdictDocument = doc::verdict_from_structure(document.name, &algebra, &verdict);

    match subalgebras::enumerate_auto(&algebra, enumeration_cap()) {
        Ok(set) => {
            out.subalgebras = Some(doc::SubalgebrasDoc {
                method: match set.method() {
                    subalgebras::EnumerationMethod::BruteForce => "brute".into(),
                    subalgebras::EnumerationMethod::StructuralChain => "structural-chain".into(),
                    subalgebras::EnumerationMethod::StructuralMaxSolvable => {
                        "structural-block".into()
                    }
                },
                count: set.len(),
                by_dim: set.dim_histogram(),
            });
            if set.len() <= ANALYZE_LATTICE_LIMIT {
                let lattice = build_lattice(&algebra, &set).map_err(core_error)?;
                let (modular, modular_witness) = lattice.is_modular();
                out.lattice = Some(doc::LatticeDoc {
                    nodes: lattice.len(),
                    modular,
                    distributive: lattice.is_distributive().0,
                    upper_semimodular: lattice.is_upper_semimodular().0,
                    lower_semimodular: lattice.is_lower_semimodular().0,
                    j_algebra: lattice.is_j_algebra().0,
                    pentagon_free: lattice.find_pentagon().is_none(),
                    diamond_free: lattice.find_diamond().is_none(),
                    modular_witness: modular_witness.map(|(u, v, w)| {
                        [u, v, w]
                            .iter()
                            .map(|&i| doc::subspace_strings(lattice.node(i)))
                            .collect()
                    }),
                });
            } else {
                out.notes.push(format!(
                    "lattice tables skipped: {} nodes exceed the limit of {ANALYZE_LATTICE_LIMIT}",
                    set.len()
                ));
            }
        }
        Err(e) => {
            out.notes.push(format!("subalgebra enumeration unavailable: {e}"));
        }
    }
    if let evolab::field::FieldSpec::PrimeField { p } = algebra.spec() {
        if p % 4 == 1 {
            out.notes.push(format!(
                "GF({p}) has a square root of -1 and stands in for a quadratically closed field"
            ));
        }
    }

    println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
    Ok(())
}

#[derive(Serialize)]
struct LatticeJson {
    schema: u32,
    node_count: usize,
    nodes: Vec<LatticeNodeJson>,
    hasse: Vec<(usize, usize)>,
}

#[derive(Serialize)]
struct LatticeNodeJson {
    dim: usize,
    basis: Vec<String>,
}

fn cmd_lattice(file: PathBuf, emit: Emit, method: Method, labels: Labels) -> Result<(), Failure> {
    let (_, algebra) = load_algebra(&file)?;
    let set = enumerate(&algebra, method, enumeration_cap())?;
    let lattice = build_lattice(&algebra, &set).map_err(core_error)?;
    match emit {
        Emit::Dot => {
            let kind = match labels {
                Labels::Dims => LabelKind::Dims,
                Labels::Basis => LabelKind::BasisStrings,
            };
            print!("{}", lattice.emit_hasse_dot(kind));
        }
        Emit::Json => {
            let out = LatticeJson {
                schema: 1,
                node_count: lattice.len(),
                nodes: lattice
                    .nodes()
                    .iter()
                    .map(|s| LatticeNodeJson { dim: s.dim(), basis: doc::subspace_strings(s) })
                    .collect(),
                hasse: lattice.hasse_edges(),
            };
            println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
        }
    }
    Ok(())
}

fn print_triple_witness(lattice: &Lattice, triple: (usize, usize, usize)) {
    let (u, v, w) = triple;
    println!("witness U = {}", lattice.node(u));
    println!("witness V = {}", lattice.node(v));
    println!("witness W = {}", lattice.node(w));
}

/// Returns the verdict; witnesses go to stdout.
fn cmd_check(file: PathBuf, property: Property, method: Method) -> Result<bool, Failure> {
    let (_, algebra) = load_algebra(&file)?;

    if property == Property::Supersolvable {
        let (ok, flag) = structure::is_supersolvable(&algebra);
        println!("supersolvable: {ok}");
        if let Some(flag) = flag {
            for (k, g) in flag.iter().enumerate() {
                println!("flag[{}] adds {}", k + 1, g);
            }
        }
        return Ok(ok);
    }

    let set = enumerate(&algebra, method, enumeration_cap())?;
    let lattice = build_lattice(&algebra, &set).map_err(core_error)?;
    let verdict = match property {
        Property::Distributive => {
            let (ok, witness) = lattice.is_distributive();
            println!("distributive: {ok}");
            if let Some(t) = witness {
                print_triple_witness(&lattice, t);
            }
            ok
        }
        Property::Modular => {
            let (ok, witness) = lattice.is_modular();
            println!("modular: {ok}");
            if let Some(t) = witness {
                print_triple_witness(&lattice, t);
            }
            ok
        }
        Property::Usemi => {
            let (ok, witness) = lattice.is_upper_semimodular();
            println!("upper-semimodular: {ok}");
            if let Some((u, v)) = witness {
                println!("witness U = {}", lattice.node(u));
                println!("witness V = {}", lattice.node(v));
            }
            ok
        }
        Property::Lsemi => {
            let (ok, witness) = lattice.is_lower_semimodular();
            println!("lower-semimodular: {ok}");
            if let Some((u, v)) = witness {
                println!("witness U = {}", lattice.node(u));
                println!("witness V = {}", lattice.node(v));
            }
            ok
        }
        Property::Jalgebra => {
            let (ok, witness) = lattice.is_j_algebra();
            println!("jordan-dedekind: {ok}");
            if let Some((u, v)) = witness {
                println!("witness interval [{}, {}]", lattice.node(u), lattice.node(v));
            }
            ok
        }
        Property::QuasiIdeals => {
            let mut verdict = true;
            for u in set.members() {
                let (ok, witness) =
                    subalgebras::is_quasi_ideal(&algebra, u, &set).map_err(core_error)?;
                if !ok {
                    verdict = false;
                    println!("quasi-ideals: false");
                    println!("witness U = {u}");
                    if let Some(v) = witness {
                        println!("witness V = {v}");
                    }
                    break;
                }
            }
            if verdict {
                println!("quasi-ideals: true");
            }
            verdict
        }
        Property::Supersolvable => unreachable!(),
    };
    Ok(verdict)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome: Result<bool, Failure> = match cli.command {
        Command::Analyze { file } => cmd_analyze(file).map(|()| true),
        Command::Lattice { file, emit, method, labels } => {
            cmd_lattice(file, emit, method, labels).map(|()| true)
        }
        Command::Check { file, property, method } => cmd_check(file, property, method),
        Command::Verify { suite, seed, count } => {
            let failures = match suite {
                Suite::Nilpotent => verify::run_nilpotent(seed, count),
                Suite::Maxsolvable => verify::run_maxsolvable(seed, count),
                Suite::Families => verify::run_families(seed, count),
                Suite::PaperExamples => verify::run_golden_examples(),
            };
            match failures {
                Ok(0) => Ok(true),
                Ok(n) => Err(Failure::new(1, format!("{n} hard failures"))),
                Err(f) => Err(f),
            }
        }
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
