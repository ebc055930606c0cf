//! Command-line front end: solve instance files, query the brute-force
//! oracle, generate test inputs, and work with polynomial gate
//! representations.
//!
//! Exit codes carry the verdict so scripts can branch without parsing
//! output: 10 satisfiable, 20 unsatisfiable, 0 informational success,
//! 1 usage error, 2 input error, 3 size cap exceeded.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use modcsp::convert::mvf_from_or_poly;
use modcsp::fmt::{
    parse_cnf, parse_instance, parse_poly, serialize_instance, serialize_poly, AnyInstance,
};
use modcsp::gf2::kernel_basis;
use modcsp::horn::{self, HornSolveConfig, Rounds};
use modcsp::lin2::{self, hadamard_direct_sum, Lin2Mode, Lin2SolveConfig, Trials};
use modcsp::oracle::{brute_solve_horn, brute_solve_lin2, brute_solve_twosat};
use modcsp::poly::{
    covering_number, is_nand_rep_01, is_or_rep_pm1, nand_bbr, nand_bbr_plan, nand_trivial,
    or_trivial_pm1, CoverMode, IntPoly,
};
use modcsp::reduce::{flatten_horn, flatten_lin2, gadget_3sat_to_horn, gadget_3sat_to_lin2};
use modcsp::twosat;
use modcsp::{
    Assignment, Error, GroupSpec, HornClause, HornInstance, Lin2Instance, Lit,
    ModularSideConstraint, TwoSatInstance,
};

const EXIT_OK: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_CAP: u8 = 3;
const EXIT_SAT: u8 = 10;
const EXIT_UNSAT: u8 = 20;

#[derive(Parser)]
#[command(name = "modcsp", version, about = "Solvers for Boolean CSPs with a modular side constraint", disable_help_subcommand = true)]
struct Cli {
    /// Emit results as one JSON object instead of text lines.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance file; exits 10 when satisfiable, 20 when not.
    Solve(SolveArgs),
    /// Brute-force verdict for an instance file (small instances only).
    Oracle {
        file: PathBuf,
    },
    /// Generate instance files.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Build, check, and measure polynomial gate representations.
    #[command(subcommand)]
    Poly(PolyCommand),
    /// Instance-to-instance reductions.
    #[command(subcommand)]
    Reduce(ReduceCommand),
    /// Run a quick built-in consistency battery.
    Selftest,
}

#[derive(Args)]
struct SolveArgs {
    file: PathBuf,

    /// Deterministic search budget (Horn rounds / subset size for the
    /// linear solver). Mutually exclusive with --auto.
    #[arg(long, allow_negative_numbers = true, conflicts_with = "auto")]
    rounds: Option<i64>,

    /// Pick the budget from the modulus (the default).
    #[arg(long)]
    auto: bool,

    /// Use the sampling search (linear instances only).
    #[arg(long, conflicts_with = "rounds")]
    randomized: bool,

    /// Trial count for --randomized; defaults to the modulus-derived
    /// budget.
    #[arg(long, allow_negative_numbers = true, requires = "randomized")]
    trials: Option<i64>,

    /// PRNG seed for --randomized.
    #[arg(long, requires = "randomized", default_value_t = 0)]
    seed: u64,

    /// Constant in the mixed-modulus dimension bound heuristic.
    #[arg(long, default_value_t = 8)]
    dim_bound_factor: u32,
}

#[derive(Subcommand)]
enum GenCommand {
    /// Random instance of any kind, reproducible from the seed.
    Random(GenRandomArgs),
    /// Linear instance whose solution space is a direct sum of Hadamard
    /// codes: an extremal test case for weight-residue search.
    Hadamard(GenHadamardArgs),
    /// Reduce a 3-SAT CNF file to a Horn instance with a modular
    /// constraint.
    #[command(name = "3sat-horn")]
    ThreeSatHorn(GenGadgetArgs),
    /// Reduce a 3-SAT CNF file to a linear instance with a modular
    /// constraint (odd modulus).
    #[command(name = "3sat-lin2")]
    ThreeSatLin2(GenGadgetArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Horn,
    Lin2,
    #[value(name = "2sat")]
    TwoSat,
}

#[derive(Args)]
struct GenRandomArgs {
    #[arg(long, value_enum)]
    kind: KindArg,

    #[arg(long)]
    vars: usize,

    #[arg(long)]
    clauses: usize,

    /// Comma-separated group moduli, e.g. `6` or `2,3`.
    #[arg(long, value_delimiter = ',', required = true)]
    moduli: Vec<u32>,

    /// Number of allowed residue tuples.
    #[arg(long, default_value_t = 1)]
    targets: usize,

    /// Cap on (g(1)-g(0)) mod M per variable; small values keep the
    /// unit-weight rewrite small.
    #[arg(long)]
    max_diff: Option<u32>,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenHadamardArgs {
    /// Each block has 2^log-block positions.
    #[arg(long)]
    log_block: usize,

    #[arg(long, default_value_t = 1)]
    copies: usize,

    #[arg(long)]
    modulus: u32,

    /// Target weight residue.
    #[arg(long)]
    target: u32,

    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenGadgetArgs {
    /// CNF input (`p cnf`, one clause per line, at most 3 literals).
    #[arg(long)]
    cnf: PathBuf,

    #[arg(long)]
    modulus: u32,

    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum PolyCommand {
    /// Emit a gate representation, choosing the lower-degree
    /// construction unless one is forced.
    Build(PolyBuildArgs),
    /// Check that a polynomial file represents the gate.
    Check(PolyCheckArgs),
    /// Covering number of a polynomial file.
    Cov(PolyCovArgs),
    /// Extract a matching vector family from an OR representation.
    Mvf(PolyMvfArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GateArg {
    /// NAND over {0,1} inputs.
    Nand,
    /// OR over {-1,1} inputs (-1 encodes true).
    Or,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConstructionArg {
    Auto,
    Trivial,
    Crt,
}

#[derive(Args)]
struct PolyBuildArgs {
    #[arg(long, value_enum)]
    gate: GateArg,

    #[arg(long)]
    arity: usize,

    #[arg(long)]
    modulus: u32,

    #[arg(long, value_enum, default_value_t = ConstructionArg::Auto)]
    construction: ConstructionArg,

    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PolyCheckArgs {
    file: PathBuf,

    #[arg(long, value_enum)]
    gate: GateArg,

    #[arg(long)]
    modulus: u32,
}

#[derive(Args)]
struct PolyCovArgs {
    file: PathBuf,

    /// Greedy upper bound instead of the exact branch and bound.
    #[arg(long)]
    greedy: bool,
}

#[derive(Args)]
struct PolyMvfArgs {
    file: PathBuf,

    #[arg(long)]
    modulus: u32,
}

#[derive(Subcommand)]
enum ReduceCommand {
    /// Rewrite a product-group instance over a single modulus.
    Flatten {
        file: PathBuf,

        #[arg(long)]
        out: Option<PathBuf>,
    },
}

type CliResult = Result<u8, (u8, String)>;

fn exit_for(e: &Error) -> u8 {
    match e {
        Error::SizeLimit(_) => EXIT_CAP,
        Error::InvalidRounds(_)
        | Error::InvalidTrials(_)
        | Error::AutoRoundsUnavailable(_)
        | Error::EvenModulus(_)
        | Error::InvalidModulus(_)
        | Error::NotPrime(_) => EXIT_USAGE,
        _ => EXIT_INPUT,
    }
}

fn lib<T>(r: modcsp::Result<T>) -> Result<T, (u8, String)> {
    r.map_err(|e| (exit_for(&e), e.to_string()))
}

fn usage(msg: impl Into<String>) -> (u8, String) {
    (EXIT_USAGE, msg.into())
}

fn read_file(path: &Path) -> Result<String, (u8, String)> {
    fs::read_to_string(path).map_err(|e| (EXIT_INPUT, format!("{}: {e}", path.display())))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), (u8, String)> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| (EXIT_INPUT, format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let json = cli.json;
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err((code, msg)) => {
            if json {
                println!(
                    "{}",
                    serde_json::json!({ "format": 1, "error": msg, "exit": code })
                );
            }
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn dispatch(cli: Cli) -> CliResult {
    match cli.command {
        Command::Solve(args) => cmd_solve(args, cli.json),
        Command::Oracle { file } => cmd_oracle(&file, cli.json),
        Command::Gen(g) => match g {
            GenCommand::Random(args) => cmd_gen_random(args, cli.json),
            GenCommand::Hadamard(args) => cmd_gen_hadamard(args, cli.json),
            GenCommand::ThreeSatHorn(args) => cmd_gen_gadget(args, true, cli.json),
            GenCommand::ThreeSatLin2(args) => cmd_gen_gadget(args, false, cli.json),
        },
        Command::Poly(p) => match p {
            PolyCommand::Build(args) => cmd_poly_build(args, cli.json),
            PolyCommand::Check(args) => cmd_poly_check(args, cli.json),
            PolyCommand::Cov(args) => cmd_poly_cov(args, cli.json),
            PolyCommand::Mvf(args) => cmd_poly_mvf(args, cli.json),
        },
        Command::Reduce(r) => match r {
            ReduceCommand::Flatten { file, out } => cmd_reduce_flatten(&file, &out, cli.json),
        },
        Command::Selftest => cmd_selftest(cli.json),
    }
}

fn report_verdict(inst: &AnyInstance, sol: Option<Assignment>, json: bool) -> CliResult {
    match sol {
        Some(x) => {
            let (residue, ok) = lib(inst.side().eval(&x))?;
            debug_assert!(ok, "reported solution misses the allowed set");
            let bits: Vec<u8> = x.bits().iter().map(|&b| b as u8).collect();
            if json {
                println!(
                    "{}",
                    serde_json::json!({
                        "format": 1,
                        "verdict": "sat",
                        "assignment": bits,
                        "residues": residue.residues(),
                    })
                );
            } else {
                println!("s SATISFIABLE");
                let v: Vec<String> = bits.iter().map(|b| b.to_string()).collect();
                println!("v {}", v.join(" "));
                let r: Vec<String> = residue.residues().iter().map(|r| r.to_string()).collect();
                println!("r {}", r.join(" "));
            }
            Ok(EXIT_SAT)
        }
        None => {
            if json {
                println!(
                    "{}",
                    serde_json::json!({ "format": 1, "verdict": "unsat" })
                );
            } else {
                println!("s UNSATISFIABLE");
            }
            Ok(EXIT_UNSAT)
        }
    }
}

fn cmd_solve(args: SolveArgs, json: bool) -> CliResult {
    let text = read_file(&args.file)?;
    let inst = lib(parse_instance(&text))?;
    let rounds = match args.rounds {
        Some(r) => Rounds::Fixed(r),
        None => Rounds::Auto,
    };
    let sol = match &inst {
        AnyInstance::Horn(h) => {
            if args.randomized {
                return Err(usage("--randomized applies only to lin2 instances"));
            }
            let cfg = HornSolveConfig {
                rounds,
                ..HornSolveConfig::default()
            };
            lib(horn::solve(h, &cfg))?
        }
        AnyInstance::Lin2(l) => {
            let mode = if args.randomized {
                let trials = match args.trials {
                    Some(t) => Trials::Fixed(t),
                    None => Trials::Auto,
                };
                Lin2Mode::Randomized {
                    trials,
                    seed: args.seed,
                }
            } else {
                Lin2Mode::Deterministic(rounds)
            };
            let cfg = Lin2SolveConfig {
                mode,
                dim_factor: args.dim_bound_factor,
                ..Lin2SolveConfig::default()
            };
            lib(lin2::solve(l, &cfg))?
        }
        AnyInstance::TwoSat(t) => {
            if args.randomized {
                return Err(usage("--randomized applies only to lin2 instances"));
            }
            if args.rounds.is_some() {
                return Err(usage("--rounds does not apply to 2sat instances"));
            }
            lib(twosat::solve(t))?
        }
    };
    report_verdict(&inst, sol, json)
}

fn cmd_oracle(file: &Path, json: bool) -> CliResult {
    let text = read_file(file)?;
    let inst = lib(parse_instance(&text))?;
    let sol = match &inst {
        AnyInstance::Horn(h) => lib(brute_solve_horn(h))?,
        AnyInstance::Lin2(l) => lib(brute_solve_lin2(l))?,
        AnyInstance::TwoSat(t) => lib(brute_solve_twosat(t))?,
    };
    report_verdict(&inst, sol, json)
}

fn emit_instance(inst: &AnyInstance, out: &Option<PathBuf>, json: bool) -> CliResult {
    let text = serialize_instance(inst);
    emit(out, &text)?;
    if json {
        println!(
            "{}",
            serde_json::json!({
                "format": 1,
                "kind": inst.kind().tag(),
                "vars": inst.n(),
                "written": out.as_ref().map(|p| p.display().to_string()),
            })
        );
    }
    Ok(EXIT_OK)
}

fn cmd_gen_random(args: GenRandomArgs, json: bool) -> CliResult {
    let group = lib(GroupSpec::new(args.moduli.clone()))?;
    if args.targets < 1 {
        return Err(usage("--targets must be at least 1"));
    }
    let n = args.vars;
    if n < 1 {
        return Err(usage("--vars must be at least 1"));
    }
    if args.kind == KindArg::Horn && args.clauses > 0 && n < 2 {
        return Err(usage("horn generation needs --vars >= 2 when --clauses > 0"));
    }
    let mut rng = StdRng::seed_from_u64(args.seed);
    let elem = |rng: &mut StdRng, group: &GroupSpec| {
        let rs: Vec<u32> = group
            .moduli()
            .iter()
            .map(|&m| rng.random_range(0..m))
            .collect();
        group.elem(rs).expect("residues drawn in range")
    };
    let weights = (0..n)
        .map(|_| match args.max_diff {
            None => (elem(&mut rng, &group), elem(&mut rng, &group)),
            Some(cap) => {
                let mut g0 = Vec::new();
                let mut g1 = Vec::new();
                for &m in group.moduli() {
                    let w0 = rng.random_range(0..m);
                    let d = rng.random_range(0..=cap.min(m - 1));
                    g0.push(w0);
                    g1.push((w0 + d) % m);
                }
                (
                    group.elem(g0).expect("residues drawn in range"),
                    group.elem(g1).expect("residues drawn in range"),
                )
            }
        })
        .collect();
    let mut allowed = BTreeSet::new();
    while allowed.len() < args.targets.min(group.order() as usize) {
        allowed.insert(elem(&mut rng, &group));
    }
    let side = lib(ModularSideConstraint::new(group, weights, allowed))?;

    let inst = match args.kind {
        KindArg::Horn => {
            let mut clauses = Vec::with_capacity(args.clauses);
            for _ in 0..args.clauses {
                let head = rng.random_range(0..n as u32);
                let pool: Vec<u32> = (0..n as u32).filter(|&v| v != head).collect();
                let take = rng.random_range(1..=pool.len().min(3));
                let mut body = pool;
                for i in 0..take {
                    let j = rng.random_range(i..body.len());
                    body.swap(i, j);
                }
                body.truncate(take);
                clauses.push(lib(HornClause::new(head, body))?);
            }
            AnyInstance::Horn(lib(HornInstance::new(n, clauses, Vec::new(), side))?)
        }
        KindArg::Lin2 => {
            let mut equations = Vec::with_capacity(args.clauses);
            while equations.len() < args.clauses {
                let vars: Vec<u32> = (0..n as u32).filter(|_| rng.random::<bool>()).collect();
                if vars.is_empty() {
                    continue;
                }
                equations.push((vars, rng.random::<bool>()));
            }
            AnyInstance::Lin2(lib(Lin2Instance::new(n, equations, side))?)
        }
        KindArg::TwoSat => {
            let clauses = (0..args.clauses)
                .map(|_| {
                    let mut lit = || Lit {
                        var: rng.random_range(0..n as u32),
                        neg: rng.random::<bool>(),
                    };
                    (lit(), lit())
                })
                .collect();
            AnyInstance::TwoSat(lib(TwoSatInstance::new(n, clauses, side))?)
        }
    };
    emit_instance(&inst, &args.out, json)
}

fn cmd_gen_hadamard(args: GenHadamardArgs, json: bool) -> CliResult {
    let space = lib(hadamard_direct_sum(args.log_block, args.copies))?;
    let group = lib(GroupSpec::single(args.modulus))?;
    let target = lib(group.elem(vec![args.target]))?;
    // Pin the subspace with its orthogonal complement: x is in the span
    // exactly when it is orthogonal to every complement vector.
    let equations: Vec<(Vec<u32>, bool)> = kernel_basis(space.n, &space.basis)
        .into_iter()
        .map(|row| (row.iter_ones().map(|i| i as u32).collect(), false))
        .collect();
    let side = lib(ModularSideConstraint::unit(
        group,
        space.n,
        BTreeSet::from([target]),
    ))?;
    let inst = AnyInstance::Lin2(lib(Lin2Instance::new(space.n, equations, side))?);
    emit_instance(&inst, &args.out, json)
}

/// Degree-driven pick between the partition construction and the CRT
/// one; returns the chosen polynomial and comment lines explaining the
/// choice.
fn build_nand(d: usize, m: u32, construction: ConstructionArg) -> Result<(IntPoly, Vec<String>), (u8, String)> {
    let trivial_deg = d.div_ceil((m - 1).max(1) as usize);
    let plan = lib(nand_bbr_plan(d, m))?;
    let crt_deg = plan.as_ref().map(|p| p.degree as usize);
    let mut notes = vec![format!("c trivial degree {trivial_deg}")];
    match crt_deg {
        Some(deg) => notes.push(format!("c crt degree {deg}")),
        None => notes.push("c crt degree - (prime power, same as trivial)".to_string()),
    }
    let pick_crt = match construction {
        ConstructionArg::Trivial => false,
        ConstructionArg::Crt => true,
        ConstructionArg::Auto => crt_deg.map(|deg| deg < trivial_deg).unwrap_or(false),
    };
    let poly = if pick_crt {
        notes.push("c chosen crt".to_string());
        lib(nand_bbr(d, m))?
    } else {
        notes.push("c chosen trivial".to_string());
        lib(nand_trivial(d, m))?
    };
    Ok((poly, notes))
}

fn cmd_poly_build(args: PolyBuildArgs, json: bool) -> CliResult {
    let (poly, notes) = match args.gate {
        GateArg::Nand => build_nand(args.arity, args.modulus, args.construction)?,
        GateArg::Or => {
            if args.construction == ConstructionArg::Crt {
                return Err(usage("the CRT construction applies only to the nand gate"));
            }
            let deg = args.arity.div_ceil((args.modulus.saturating_sub(1)).max(1) as usize);
            let poly = lib(or_trivial_pm1(args.arity, args.modulus))?;
            (poly, vec![format!("c trivial degree {deg}"), "c chosen trivial".to_string()])
        }
    };
    let mut text = String::new();
    for note in &notes {
        text.push_str(note);
        text.push('\n');
    }
    text.push_str(&serialize_poly(&poly));
    emit(&args.out, &text)?;
    if json {
        println!(
            "{}",
            serde_json::json!({
                "format": 1,
                "degree": poly.degree(),
                "sparsity": poly.sparsity(),
                "written": args.out.as_ref().map(|p| p.display().to_string()),
            })
        );
    }
    Ok(EXIT_OK)
}

fn cmd_poly_check(args: PolyCheckArgs, json: bool) -> CliResult {
    let text = read_file(&args.file)?;
    let poly = lib(parse_poly(&text))?;
    let d = poly.nvars();
    let valid = match args.gate {
        GateArg::Nand => lib(is_nand_rep_01(&poly, d, args.modulus))?,
        GateArg::Or => lib(is_or_rep_pm1(&poly, d, args.modulus))?,
    };
    if json {
        println!(
            "{}",
            serde_json::json!({ "format": 1, "valid": valid, "arity": d })
        );
    } else {
        println!("{}", if valid { "valid" } else { "invalid" });
    }
    Ok(if valid { EXIT_OK } else { EXIT_INPUT })
}

fn cmd_poly_cov(args: PolyCovArgs, json: bool) -> CliResult {
    let text = read_file(&args.file)?;
    let poly = lib(parse_poly(&text))?;
    let mode = if args.greedy {
        CoverMode::Greedy
    } else {
        CoverMode::Exact
    };
    let cov = lib(covering_number(&poly, mode))?;
    if json {
        println!(
            "{}",
            serde_json::json!({
                "format": 1,
                "covering": cov,
                "mode": if args.greedy { "greedy" } else { "exact" },
            })
        );
    } else {
        println!("{cov}");
    }
    Ok(EXIT_OK)
}

fn cmd_poly_mvf(args: PolyMvfArgs, json: bool) -> CliResult {
    let text = read_file(&args.file)?;
    let poly = lib(parse_poly(&text))?;
    let fam = lib(mvf_from_or_poly(&poly, args.modulus))?;
    lib(fam.verify_exhaustive())?;
    if json {
        println!(
            "{}",
            serde_json::json!({
                "format": 1,
                "size": fam.size(),
                "rank": fam.rank(),
                "verified": true,
            })
        );
    } else {
        println!("family size {} rank {} verified", fam.size(), fam.rank());
    }
    Ok(EXIT_OK)
}

fn cmd_gen_gadget(args: GenGadgetArgs, horn: bool, json: bool) -> CliResult {
    let text = read_file(&args.cnf)?;
    let phi = lib(parse_cnf(&text))?;
    let arity = phi.clauses.len();
    if arity == 0 {
        return Err(usage("the CNF file has no clauses"));
    }
    let inst = if horn {
        let (rep, _) = build_nand(arity, args.modulus, ConstructionArg::Auto)?;
        AnyInstance::Horn(lib(gadget_3sat_to_horn(&phi, args.modulus, &rep))?)
    } else {
        let rep = lib(or_trivial_pm1(arity, args.modulus))?;
        AnyInstance::Lin2(lib(gadget_3sat_to_lin2(&phi, args.modulus, &rep))?)
    };
    emit_instance(&inst, &args.out, json)
}

fn cmd_reduce_flatten(file: &Path, out: &Option<PathBuf>, json: bool) -> CliResult {
    let text = read_file(file)?;
    let inst = lib(parse_instance(&text))?;
    let flat = match &inst {
        AnyInstance::Horn(h) => AnyInstance::Horn(lib(flatten_horn(h))?.inst),
        AnyInstance::Lin2(l) => AnyInstance::Lin2(lib(flatten_lin2(l))?.inst),
        AnyInstance::TwoSat(_) => {
            return Err(usage("flatten supports horn and lin2 files"));
        }
    };
    emit_instance(&flat, out, json)
}

fn cmd_selftest(json: bool) -> CliResult {
    let mut checks = 0usize;
    let fail = |msg: String| -> (u8, String) { (EXIT_USAGE, format!("selftest: {msg}")) };

    let mut rng = StdRng::seed_from_u64(20_240_817);
    for &m in &[2u32, 3, 5] {
        for _ in 0..5 {
            let group = GroupSpec::single(m).expect("small modulus");
            let n = rng.random_range(2..=4usize);
            let weights = (0..n)
                .map(|_| {
                    let w0 = rng.random_range(0..m);
                    let d = rng.random_range(0..=1u32.min(m - 1));
                    (
                        group.elem(vec![w0]).expect("in range"),
                        group.elem(vec![(w0 + d) % m]).expect("in range"),
                    )
                })
                .collect();
            let allowed = BTreeSet::from([group
                .elem(vec![rng.random_range(0..m)])
                .expect("in range")]);
            let side = ModularSideConstraint::new(group, weights, allowed).expect("valid side");

            let head = rng.random_range(0..n as u32);
            let body: Vec<u32> = (0..n as u32).filter(|&v| v != head).collect();
            let clause = HornClause::new(head, body).expect("valid clause");
            let h = HornInstance::new(n, vec![clause], Vec::new(), side.clone())
                .expect("valid instance");
            let got = horn::solve(&h, &HornSolveConfig::default())
                .map_err(|e| fail(format!("horn solve failed: {e}")))?;
            let want = brute_solve_horn(&h).map_err(|e| fail(format!("oracle failed: {e}")))?;
            if got.is_some() != want.is_some() {
                return Err(fail(format!("horn verdict mismatch at M={m}")));
            }
            checks += 1;

            let l = Lin2Instance::new(n, vec![(vec![0, 1], false)], side.clone())
                .expect("valid instance");
            let got = lin2::solve(&l, &Lin2SolveConfig::default())
                .map_err(|e| fail(format!("lin2 solve failed: {e}")))?;
            let want = brute_solve_lin2(&l).map_err(|e| fail(format!("oracle failed: {e}")))?;
            if got.is_some() != want.is_some() {
                return Err(fail(format!("lin2 verdict mismatch at M={m}")));
            }
            checks += 1;

            let t = TwoSatInstance::new(
                n,
                vec![(Lit::pos(0), Lit::negf(1))],
                side,
            )
            .expect("valid instance");
            let got = twosat::solve(&t).map_err(|e| fail(format!("2sat solve failed: {e}")))?;
            let want =
                brute_solve_twosat(&t).map_err(|e| fail(format!("oracle failed: {e}")))?;
            if got.is_some() != want.is_some() {
                return Err(fail(format!("2sat verdict mismatch at M={m}")));
            }
            checks += 1;
        }
    }

    for &(d, m) in &[(8usize, 2u32), (8, 3), (8, 6)] {
        let p = nand_trivial(d, m).map_err(|e| fail(format!("nand build failed: {e}")))?;
        if !is_nand_rep_01(&p, d, m).map_err(|e| fail(format!("nand check failed: {e}")))? {
            return Err(fail(format!("trivial nand rep invalid at d={d} M={m}")));
        }
        checks += 1;
        let p = nand_bbr(d, m).map_err(|e| fail(format!("crt nand build failed: {e}")))?;
        if !is_nand_rep_01(&p, d, m).map_err(|e| fail(format!("nand check failed: {e}")))? {
            return Err(fail(format!("crt nand rep invalid at d={d} M={m}")));
        }
        checks += 1;
        if m % 2 == 1 {
            let p = or_trivial_pm1(d, m).map_err(|e| fail(format!("or build failed: {e}")))?;
            if !is_or_rep_pm1(&p, d, m).map_err(|e| fail(format!("or check failed: {e}")))? {
                return Err(fail(format!("or rep invalid at d={d} M={m}")));
            }
            checks += 1;
        }
    }

    if json {
        println!(
            "{}",
            serde_json::json!({ "format": 1, "checks": checks, "ok": true })
        );
    } else {
        println!("selftest: {checks} checks passed");
    }
    Ok(EXIT_OK)
}
