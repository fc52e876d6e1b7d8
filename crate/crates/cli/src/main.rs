use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pachgap::coboundary::parse_complex;
use pachgap::complex::{sample_generic_embedding, MapBundle, PlMapInstance, VerifyMode};
use pachgap::exact::{parse_rat, QPoint};
use pachgap::expander::{expansion_table, write_expansion_csv, BipartiteIncidence};
use pachgap::hypergraph::{extract_box, max_box_exact, MultipartiteHypergraph, EXACT_CLASS_COUNT_LIMIT, EXACT_CLASS_LIMIT};
use pachgap::lattice::{build_subspace_lattice, lattice_to_json, validate_lattice, OrderEncoding};
use pachgap::pach::{affine_selection_suite, AffineMode};
use pachgap::sweep::{run_all, tau_run, Budgets, VERSION};
use pachgap::Error;
use serde::Serialize;
use serde_json::json;

const SCALE_VAR: &str = "PACHGAP_BUDGET_SCALE";

#[derive(Parser)]
#[command(name = "pachgap", version, about = "Exact verification workbench for homogeneous selection")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone, Copy)]
struct Instance {
    /// Target dimension d; the lattice is L(d+1, q).
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[arg(long, default_value_t = 2)]
    q: u32,
}

#[derive(Clone, Copy, ValueEnum)]
enum Verify {
    Sampled,
    Exhaustive,
}

#[derive(Args, Clone, Copy)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Verify::Sampled)]
    verify: Verify,
    /// Families per draw in sampled mode.
    #[arg(long)]
    samples: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Encoding {
    Derived,
    Explicit,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Pach,
    FirstSelection,
}

#[derive(Subcommand)]
enum Command {
    /// Build, validate and serialize L(d+1, q).
    Lattice {
        #[command(flatten)]
        inst: Instance,
        #[arg(long, value_enum, default_value_t = Encoding::Derived)]
        encoding: Encoding,
    },
    /// CSV of exact min |Γ(Z)| against its bounds for every m.
    Expansion {
        #[command(flatten)]
        inst: Instance,
    },
    /// Sample and verify a generic embedding; emits the map bundle.
    Map {
        #[command(flatten)]
        inst: Instance,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        verify: VerifyArgs,
    },
    /// Box search over partitions, coatom analysis and the arithmetic chain.
    Tau {
        #[command(flatten)]
        inst: Instance,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        verify: VerifyArgs,
    },
    /// Coboundary expansion h_k of a complex file.
    Hk {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: i32,
    },
    /// Box extraction on a hypergraph file.
    Extract {
        #[arg(long)]
        input: PathBuf,
        /// Target size; defaults to the largest size that succeeds.
        #[arg(long)]
        m: Option<usize>,
    },
    /// Affine baselines on a point file (`class x_1 … x_d` per line).
    Baseline {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Pach)]
        mode: Mode,
    },
    /// The full seeded sweep.
    All {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Report text plus whether every checked property held.
struct Outcome {
    text: String,
    ok: bool,
}

fn to_json<T: Serialize>(v: &T) -> Result<String, Error> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn read(path: &PathBuf) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn budgets() -> Result<Budgets, Error> {
    match std::env::var(SCALE_VAR) {
        Ok(s) => Budgets::default().scaled(&parse_rat(s.trim()).map_err(|e| Error::Parameter(format!("{SCALE_VAR}: {e}")))?),
        Err(_) => Ok(Budgets::default()),
    }
}

fn verify_mode(v: VerifyArgs, b: &Budgets) -> VerifyMode {
    match v.verify {
        Verify::Sampled => VerifyMode::Sampled(v.samples.unwrap_or(b.verify_samples)),
        Verify::Exhaustive => VerifyMode::Exhaustive,
    }
}

fn parse_points(text: &str) -> Result<Vec<Vec<QPoint>>, Error> {
    let mut classes: Vec<Vec<QPoint>> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut words = line.split_whitespace();
        let class: usize = words
            .next()
            .and_then(|w| w.parse().ok())
            .ok_or_else(|| Error::Parse(format!("line {}: expected a class index", i + 1)))?;
        let coords: Vec<String> = words.map(str::to_string).collect();
        let p = QPoint::parse(&coords).map_err(|e| Error::Parse(format!("line {}: {e}", i + 1)))?;
        if class >= classes.len() {
            classes.resize(class + 1, Vec::new());
        }
        classes[class].push(p);
    }
    if classes.is_empty() || classes.iter().any(Vec::is_empty) {
        return Err(Error::Parse("point file needs nonempty classes 0, 1, …".into()));
    }
    Ok(classes)
}

fn run(cmd: Command) -> Result<Outcome, Error> {
    let b = budgets()?;
    match cmd {
        Command::Lattice { inst, encoding } => {
            let l = build_subspace_lattice(inst.d + 1, inst.q)?;
            let v = validate_lattice(&l);
            let enc = match encoding {
                Encoding::Derived => OrderEncoding::Derived,
                Encoding::Explicit => OrderEncoding::Explicit,
            };
            let mut text = lattice_to_json(&l, enc)?;
            text.push('\n');
            if !v.all_passed() {
                eprintln!("{}", serde_json::to_string(&v)?);
            }
            Ok(Outcome { text, ok: v.all_passed() })
        }
        Command::Expansion { inst } => {
            let l = build_subspace_lattice(inst.d + 1, inst.q)?;
            let g = BipartiteIncidence::from_lattice(&l);
            let records = expansion_table(&g, b.subset)?;
            let ok = records.iter().all(|r| r.corradi.as_ref().is_none_or(|c| *c <= pachgap::exact::int(r.min_gamma as i64)));
            let mut buf = Vec::new();
            write_expansion_csv(&records, &mut buf)?;
            Ok(Outcome { text: String::from_utf8(buf).expect("csv is UTF-8"), ok })
        }
        Command::Map { inst, seed, verify } => {
            let l = build_subspace_lattice(inst.d + 1, inst.q)?;
            let e = sample_generic_embedding(&l, inst.d, seed, verify_mode(verify, &b))?;
            PlMapInstance::with_budgets(&l, e.clone(), b.chain, b.flags)?;
            Ok(Outcome { text: format!("{}\n", MapBundle::new(&l, &e).to_json()?), ok: true })
        }
        Command::Tau { inst, n, seed, verify } => {
            let l = build_subspace_lattice(inst.d + 1, inst.q)?;
            let r = tau_run(&l, inst.d, n, seed, verify_mode(verify, &b), &b)?;
            Ok(Outcome { text: to_json(&r)?, ok: r.passed })
        }
        Command::Hk { input, k } => {
            let x = parse_complex(&read(&input)?)?;
            let e = x
                .h_k(k)?
                .ok_or_else(|| Error::Precondition(format!("every {k}-cochain is a coboundary")))?;
            let ok = num_traits::Zero::is_zero(&e.value) == (x.reduced_betti_f2(k) > 0);
            Ok(Outcome { text: to_json(&x.expansion_json(&e))?, ok })
        }
        Command::Extract { input, m } => {
            let f = MultipartiteHypergraph::parse(&read(&input)?)?;
            let top = *f.sizes().iter().min().expect("classes");
            let targets: Vec<usize> = match m {
                Some(m) => vec![m],
                None => (1..=top).rev().collect(),
            };
            let mut result = None;
            for t in targets {
                let x = extract_box(&f, t, b.extract)?;
                let found = x.parts.is_some();
                result = Some(x);
                if found {
                    break;
                }
            }
            let x = result.expect("at least one target");
            let in_guard = f.classes() <= EXACT_CLASS_COUNT_LIMIT && f.sizes().iter().all(|&s| s <= EXACT_CLASS_LIMIT);
            let exact = if in_guard { Some(max_box_exact(&f)?) } else { None };
            let complete = x.parts.as_ref().is_none_or(|p| f.is_complete_box(p));
            let within = x.parts.is_none() || exact.as_ref().is_none_or(|w| x.m <= w.m);
            let labels: Option<Vec<Vec<&str>>> = x.parts.as_ref().map(|p| {
                p.iter()
                    .enumerate()
                    .map(|(i, z)| z.iter().map(|&v| f.labels()[i][v].as_str()).collect())
                    .collect()
            });
            let report = json!({
                "version": VERSION,
                "extraction": x,
                "labels": labels,
                "exact": exact,
                "complete": complete,
                "within_exact": within,
            });
            Ok(Outcome { text: to_json(&report)?, ok: complete && within })
        }
        Command::Baseline { input, mode } => {
            let classes = parse_points(&read(&input)?)?;
            let mode = match mode {
                Mode::Pach => AffineMode::Pach,
                Mode::FirstSelection => AffineMode::FirstSelection,
            };
            let r = affine_selection_suite(&classes, mode)?;
            let ok = r.oracle_depth.is_none() || r.oracle_depth == r.depth;
            Ok(Outcome { text: to_json(&r)?, ok })
        }
        Command::All { seed } => {
            let r = run_all(seed, &b)?;
            Ok(Outcome { text: to_json(&r)?, ok: r.passed })
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parameter(_) | Error::Precondition(_) | Error::NotALattice(_) | Error::GeneralPosition(_) => 2,
        Error::Capacity { .. } => 3,
        Error::Parse(_) => 4,
    }
}

fn kind(e: &Error) -> &'static str {
    match e {
        Error::Parameter(_) => "parameter",
        Error::Precondition(_) => "precondition",
        Error::NotALattice(_) => "not_a_lattice",
        Error::GeneralPosition(_) => "general_position",
        Error::Capacity { .. } => "capacity",
        Error::Parse(_) => "parse",
    }
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), Error> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Error::Parse(format!("{}: {e}", p.display()))),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| Error::Parse(e.to_string())),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(cli.command).and_then(|o| emit(cli.out.as_ref(), &o.text).map(|()| o.ok));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("{}", json!({"error": "violation", "message": "an invariant check failed; see the report", "exit_code": 1}));
            ExitCode::from(1)
        }
        Err(e) => {
            let code = exit_code(&e);
            eprintln!("{}", json!({"error": kind(&e), "message": e.to_string(), "exit_code": code}));
            ExitCode::from(code)
        }
    }
}
