use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use csp_comm::games::{
    alice_strategy_from_hom, bob_strategy_from_hom, brute_force_search, strategy_space_size, truthful_strategy,
    verify_perfect, Direction, Strategy, StrategyFile, DEFAULT_STRATEGY_CAP,
};
use csp_comm::geometry::{build_sphere_coloring, check_frame_adjacency, color_frame, is_frame, sample_adjacent_frames};
use csp_comm::linalg::{random_unitary, C64};
use csp_comm::patterns::{
    central_vertices, chromatic_number, clique_into_alice_power, clique_into_alice_power_digraph,
    complete_into_bob_power, complete_structure, covering_array, pattern_of,
};
use csp_comm::powers::{alice_power, bob_power};
use csp_comm::quantum::{
    quantum_relation_membership, validate_pvm, verify_perfect_quantum, CloseEqualityCheck, Pvm, QuantumStrategy,
    DEFAULT_TOL,
};
use csp_comm::structures::{core_of, core_vertices, find_homomorphism, find_isomorphism, is_homomorphism};
use csp_comm_cli::demos;
use csp_comm_cli::io::{
    emit_json, emit_text, exit_code_for, load_json, load_structure, EXIT_NEGATIVE, EXIT_OK, EXIT_USAGE,
};

/// Two-prover CSP games with one-way communication: structures, powers,
/// patterns, strategies, quantum measurements and frame geometry.
///
/// Structures are given as a file path, inline JSON, `-` for standard input,
/// or a catalog name such as `clique:3`, `nae:2`, `directed_edge`.
/// Exit codes: 0 success or true, 1 definitive negative, 2 usage or input
/// error, 3 resource cap exceeded.
#[derive(Parser)]
#[command(name = "csp-comm", version)]
struct Cli {
    /// Numeric tolerance for the quantum and geometry commands.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Write the result here instead of standard output.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Homomorphism search and checking.
    #[command(subcommand)]
    Hom(HomCommand),
    /// The core of a structure.
    Core { structure: String },
    /// Isomorphism test with a witness.
    Iso { a: String, b: String },
    /// Alice or Bob powers.
    Power(PowerArgs),
    /// Coordinate patterns and the constructions built on them.
    #[command(subcommand)]
    Pattern(PatternCommand),
    /// Embeddings into powers.
    #[command(subcommand)]
    Embed(EmbedCommand),
    /// Strategy verification, synthesis and exhaustive search.
    #[command(subcommand)]
    Game(GameCommand),
    /// PVMs, quantum relation membership and quantum strategies.
    #[command(subcommand)]
    Quantum(QuantumCommand),
    /// Sphere colorings and adjacent frames.
    #[command(subcommand)]
    Geom(GeomCommand),
    /// Runs the fixture reproductions.
    Demo(DemoArgs),
}

#[derive(Subcommand)]
enum HomCommand {
    /// Finds a homomorphism X -> Y.
    Find { x: String, y: String },
    /// Checks a map given as a JSON array.
    Check {
        x: String,
        y: String,
        #[arg(long)]
        map: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PowerMode {
    Alice,
    Bob,
}

#[derive(Args)]
struct PowerArgs {
    /// `[alice|bob] STRUCTURE`; the kind may also be given with `--mode`.
    #[arg(num_args = 1..=2, required = true, value_name = "ARGS")]
    args: Vec<String>,
    #[arg(long, value_enum)]
    mode: Option<PowerMode>,
    #[arg(long)]
    k: usize,
}

#[derive(Subcommand)]
enum PatternCommand {
    /// Partitions per symbol, in block notation.
    Show { structure: String },
    /// The complete structure of size n on the pattern of Y.
    Complete {
        structure: String,
        #[arg(long)]
        n: usize,
    },
    /// The generalized chromatic number.
    Chromatic { structure: String },
    /// Central vertices.
    Central { structure: String },
    /// A covering array as CSV, one row per line.
    Covering {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        q: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum EmbedCommand {
    /// The complete structure of size n into an Alice power of Y.
    CliqueAlice {
        structure: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// The clique on m vertices into an Alice power of a digraph, with
    /// balanced tuples.
    CliqueAliceDigraph {
        structure: String,
        #[arg(long)]
        m: usize,
    },
    /// The complete structure of size n into the two-fold Bob power, from a
    /// central vertex.
    CompleteBob {
        structure: String,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand)]
enum GameCommand {
    /// Checks a strategy file against every referee question.
    Verify {
        x: String,
        y: String,
        #[arg(long)]
        strategy: String,
    },
    /// Builds a strategy from a homomorphism into Y or into a power of Y.
    Synth {
        x: String,
        y: String,
        /// JSON array; vertices of powers use their integer encoding.
        #[arg(long)]
        from_hom: String,
        #[arg(long, default_value = "none")]
        direction: Direction,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// Exhaustive strategy search.
    Brute {
        x: String,
        y: String,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "none")]
        direction: Direction,
        #[arg(long, default_value_t = DEFAULT_STRATEGY_CAP)]
        cap: u128,
    },
}

#[derive(Subcommand)]
enum QuantumCommand {
    /// Residuals of a PVM (a JSON list of matrices).
    Validate { pvm: String },
    /// Membership of a PVM tuple in the quantum relation of a symbol of Y.
    Member {
        y: String,
        /// JSON list of PVMs.
        #[arg(long)]
        pvms: String,
        #[arg(long)]
        symbol: Option<String>,
    },
    /// Checks a quantum strategy against every referee question.
    Verify {
        x: String,
        y: String,
        #[arg(long)]
        strategy: String,
    },
    /// The equality certificate on random commuting pairs.
    CloseEquality {
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum GeomCommand {
    /// Builds a sphere coloring in dimension D.
    ColorSphere {
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        resolution: Option<usize>,
        /// Orthogonal pairs to sample as an audit.
        #[arg(long, default_value_t = 0)]
        audit: usize,
    },
    /// Samples an adjacent frame triple.
    Frames {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also realify the pair and color both frames.
        #[arg(long)]
        audit: bool,
    },
}

#[derive(Args)]
struct DemoArgs {
    /// Fixture to run.
    name: Option<String>,
    /// Run every fixture.
    #[arg(long, conflicts_with = "name")]
    all: bool,
    /// List the fixtures.
    #[arg(long, conflicts_with_all = ["name", "all"])]
    list: bool,
    /// Print reports as JSON.
    #[arg(long)]
    json: bool,
}

fn flag(ok: bool) -> u8 {
    if ok {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    let out = cli.output.as_deref();
    let tol = cli.tol;
    match cli.command {
        Command::Hom(HomCommand::Find { x, y }) => {
            let (x, y) = (load_structure(&x)?, load_structure(&y)?);
            let h = find_homomorphism(&x, &y)?;
            emit_json(out, &json!({ "homomorphism": h }))?;
            Ok(flag(h.is_some()))
        }
        Command::Hom(HomCommand::Check { x, y, map }) => {
            let (x, y) = (load_structure(&x)?, load_structure(&y)?);
            let map: Vec<usize> = load_json(&map)?;
            let ok = is_homomorphism(&map, &x, &y)?;
            emit_json(out, &json!({ "homomorphism": ok }))?;
            Ok(flag(ok))
        }
        Command::Core { structure } => {
            let y = load_structure(&structure)?;
            let vertices = core_vertices(&y);
            emit_json(out, &json!({ "vertices": vertices, "core": core_of(&y) }))?;
            Ok(EXIT_OK)
        }
        Command::Iso { a, b } => {
            let (a, b) = (load_structure(&a)?, load_structure(&b)?);
            let h = find_isomorphism(&a, &b)?;
            emit_json(out, &json!({ "isomorphism": h }))?;
            Ok(flag(h.is_some()))
        }
        Command::Power(args) => {
            let (kind, structure) = match (args.args.as_slice(), args.mode) {
                ([kind, s], None) => (PowerMode::from_str(kind, true).map_err(|e| anyhow::anyhow!(e))?, s),
                ([s], Some(mode)) => (mode, s),
                ([_, _], Some(_)) => bail!("give the power kind either positionally or with --mode"),
                _ => bail!("missing power kind: use `power alice|bob` or `--mode`"),
            };
            let y = load_structure(structure)?;
            let power = match kind {
                PowerMode::Alice => alice_power(&y, args.k)?,
                PowerMode::Bob => bob_power(&y, args.k)?,
            };
            emit_text(out, &power.to_json())?;
            Ok(EXIT_OK)
        }
        Command::Pattern(cmd) => pattern(cmd, out),
        Command::Embed(cmd) => embed(cmd, out),
        Command::Game(cmd) => game(cmd, out),
        Command::Quantum(cmd) => quantum(cmd, out, tol),
        Command::Geom(cmd) => geom(cmd, out, tol),
        Command::Demo(args) => demo(args, out),
    }
}

fn pattern(cmd: PatternCommand, out: Option<&std::path::Path>) -> anyhow::Result<u8> {
    match cmd {
        PatternCommand::Show { structure } => {
            emit_json(out, &pattern_of(&load_structure(&structure)?).to_named_map())?;
        }
        PatternCommand::Complete { structure, n } => {
            let y = load_structure(&structure)?;
            emit_text(out, &complete_structure(n, &pattern_of(&y))?.to_json())?;
        }
        PatternCommand::Chromatic { structure } => {
            let n = chromatic_number(&load_structure(&structure)?)?;
            emit_json(out, &json!({ "chromatic_number": n }))?;
        }
        PatternCommand::Central { structure } => {
            emit_json(out, &json!({ "central": central_vertices(&load_structure(&structure)?) }))?;
        }
        PatternCommand::Covering { n, r, q, seed } => {
            let ca = covering_array(n, r, q, &mut ChaCha8Rng::seed_from_u64(seed))?;
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
            for row in ca.rows() {
                w.write_record(row.iter().map(|v| v.to_string()))?;
            }
            let text = String::from_utf8(w.into_inner()?)?;
            emit_text(out, text.trim_end())?;
        }
    }
    Ok(EXIT_OK)
}

fn embed(cmd: EmbedCommand, out: Option<&std::path::Path>) -> anyhow::Result<u8> {
    match cmd {
        EmbedCommand::CliqueAlice { structure, n, seed } => {
            let y = load_structure(&structure)?;
            let e = clique_into_alice_power(&y, n, &mut ChaCha8Rng::seed_from_u64(seed))?;
            emit_json(out, &e)?;
            Ok(EXIT_OK)
        }
        EmbedCommand::CliqueAliceDigraph { structure, m } => {
            let e = clique_into_alice_power_digraph(&load_structure(&structure)?, m)?;
            emit_json(out, &e)?;
            Ok(EXIT_OK)
        }
        EmbedCommand::CompleteBob { structure, n } => {
            let e = complete_into_bob_power(&load_structure(&structure)?, n)?;
            emit_json(out, &json!({ "embedding": e }))?;
            Ok(flag(e.is_some()))
        }
    }
}

fn game(cmd: GameCommand, out: Option<&std::path::Path>) -> anyhow::Result<u8> {
    match cmd {
        GameCommand::Verify { x, y, strategy } => {
            let (x, y) = (load_structure(&x)?, load_structure(&y)?);
            let file: StrategyFile = load_json(&strategy)?;
            let s = Strategy::from_file(&file, &x, &y)?;
            let verdict = verify_perfect(&x, &y, &s)?;
            emit_json(out, &verdict)?;
            Ok(flag(verdict.perfect))
        }
        GameCommand::Synth { x, y, from_hom, direction, k } => {
            let (x, y) = (load_structure(&x)?, load_structure(&y)?);
            let map: Vec<usize> = load_json(&from_hom)?;
            let h = csp_comm::structures::Homomorphism::new(map);
            let s = match direction {
                Direction::None => {
                    if k != 1 {
                        bail!("the game without a channel has k = 1");
                    }
                    Strategy::NoChannel(truthful_strategy(&x, &y, h.as_slice())?)
                }
                Direction::Alice => Strategy::Alice(alice_strategy_from_hom(&x, &y, k, &h)?),
                Direction::Bob => Strategy::Bob(bob_strategy_from_hom(&x, &y, k, &h)?),
            };
            emit_json(out, &s.to_file(&x))?;
            Ok(EXIT_OK)
        }
        GameCommand::Brute { x, y, k, direction, cap } => {
            let (x, y) = (load_structure(&x)?, load_structure(&y)?);
            let found = brute_force_search(&x, &y, k, direction, cap)?;
            emit_json(
                out,
                &json!({
                    "space": strategy_space_size(&x, &y, k, direction).to_string(),
                    "strategy": found.as_ref().map(|s| s.to_file(&x)),
                }),
            )?;
            Ok(flag(found.is_some()))
        }
    }
}

fn quantum(cmd: QuantumCommand, out: Option<&std::path::Path>, tol: f64) -> anyhow::Result<u8> {
    match cmd {
        QuantumCommand::Validate { pvm } => {
            let p: Pvm = load_json(&pvm)?;
            let report = validate_pvm(&p);
            let ok = report.is_valid(tol);
            emit_json(out, &json!({ "valid": ok, "max_residual": report.max_residual(), "report": report }))?;
            Ok(flag(ok))
        }
        QuantumCommand::Member { y, pvms, symbol } => {
            let y = load_structure(&y)?;
            let pvms: Vec<Pvm> = load_json(&pvms)?;
            let index = match symbol {
                Some(name) => y.signature().index_of(&name).with_context(|| format!("no symbol `{name}` in Y"))?,
                None if y.signature().len() == 1 => 0,
                None => bail!("Y has several symbols; pass --symbol"),
            };
            let joint = quantum_relation_membership(&pvms, y.relation(index), tol)?;
            emit_json(out, &json!({ "joint": joint }))?;
            Ok(flag(joint.is_some()))
        }
        QuantumCommand::Verify { x, y, strategy } => {
            let (x, y) = (load_structure(&x)?, load_structure(&y)?);
            let s: QuantumStrategy = load_json(&strategy)?;
            let verdict = verify_perfect_quantum(&x, &y, &s, tol)?;
            emit_json(out, &verdict)?;
            Ok(flag(verdict.perfect))
        }
        QuantumCommand::CloseEquality { d, trials, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (mut equal, mut fired, mut wrong) = (0, 0, 0);
            for _ in 0..trials {
                let outcomes = rng.random_range(2..=3);
                let u = random_unitary(d, &mut rng);
                let basis: Vec<Vec<C64>> = (0..d).map(|j| u.column(j)).collect();
                let lp: Vec<usize> = (0..d).map(|_| rng.random_range(0..outcomes)).collect();
                let lq: Vec<usize> = if rng.random_bool(0.5) {
                    lp.clone()
                } else {
                    (0..d).map(|_| rng.random_range(0..outcomes)).collect()
                };
                let check = CloseEqualityCheck::new(
                    &Pvm::from_basis(&basis, &lp, outcomes)?,
                    &Pvm::from_basis(&basis, &lq, outcomes)?,
                    &basis,
                    tol,
                )?;
                let f = check.search().is_some();
                equal += usize::from(check.pvms_equal());
                fired += usize::from(f);
                wrong += usize::from(f != check.pvms_equal());
            }
            emit_json(out, &json!({ "trials": trials, "equal": equal, "certified": fired, "disagreements": wrong }))?;
            Ok(flag(wrong == 0))
        }
    }
}

fn geom(cmd: GeomCommand, out: Option<&std::path::Path>, tol: f64) -> anyhow::Result<u8> {
    match cmd {
        GeomCommand::ColorSphere { dim, seed, resolution, audit } => {
            let c = build_sphere_coloring(dim, resolution, seed)?;
            let violations = (audit > 0).then(|| c.audit_orthogonal_pairs(audit, seed));
            emit_json(out, &json!({ "coloring": c, "colors": c.color_count(), "audit_violations": violations }))?;
            Ok(flag(violations.unwrap_or(0) == 0))
        }
        GeomCommand::Frames { n, d, seed, audit } => {
            let s = sample_adjacent_frames(n, d, seed)?;
            let ok = is_frame(&s.m, tol).is_frame
                && is_frame(&s.m_prime, tol).is_frame
                && check_frame_adjacency(&s.m, &s.m_prime, &s.witness, tol)?;
            let colors = if audit {
                let r = s.realified(tol)?;
                let c = build_sphere_coloring(2 * d, None, seed)?;
                Some((color_frame(&c, &r.m, tol)?, color_frame(&c, &r.m_prime, tol)?))
            } else {
                None
            };
            let distinct = colors.is_none_or(|(a, b)| a != b);
            emit_json(out, &json!({ "frames": s, "adjacent": ok, "colors": colors }))?;
            Ok(flag(ok && distinct))
        }
    }
}

fn demo(args: DemoArgs, out: Option<&std::path::Path>) -> anyhow::Result<u8> {
    if args.list {
        let lines: Vec<String> = demos::DEMOS.iter().map(|d| format!("{:<22} {}", d.name, d.summary)).collect();
        emit_text(out, &lines.join("\n"))?;
        return Ok(EXIT_OK);
    }
    let selected: Vec<&demos::Demo> = match (&args.name, args.all) {
        (_, true) => demos::DEMOS.iter().collect(),
        (Some(name), false) => vec![demos::find(name).with_context(|| format!("unknown demo `{name}`; see --list"))?],
        (None, false) => bail!("name a demo, or pass --all or --list"),
    };
    let reports: Vec<demos::Report> = selected.into_iter().map(demos::run).collect();
    if args.json {
        emit_json(out, &reports)?;
    } else {
        emit_text(out, reports.iter().map(|r| r.render()).collect::<String>().trim_end())?;
    }
    Ok(flag(reports.iter().all(|r| r.passed)))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
