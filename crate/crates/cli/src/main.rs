//! `monadforge`: build, verify and analyse monad files.
//!
//! Machine-readable records go to stdout, one per line; the human summary goes
//! to stderr. Exit codes: 0 pass, 1 violation, 2 inconclusive, 3 input error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use monadforge::cas::export_macaulay2;
use monadforge::cohomology::kunneth_h;
use monadforge::constructions::{build_homogenized_monad, build_monad, PairedSpaceParams};
use monadforge::monad::{
    display_invariants, existence_conditions, validate, ExistenceQuery, GradingSummary, NMode,
    RankVerdict, Verdict,
};
use monadforge::monad_file::{parse_monad_file, BuilderRecord, Metadata, MonadFile};
use monadforge::polyalgebra::{grading_inference, GradingOutcome, DEFAULT_PROBE_PRIME};
use monadforge::stability::{
    dual_kernel_h0_h1, hoppe_scan, simplicity_ingredients, CellStatus, DEFAULT_BOX, DEFAULT_MAX_Q,
};
use monadforge::{Error, Monad, MultiDeg, Polarization, Space};

const EXIT_PASS: u8 = 0;
const EXIT_VIOLATION: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_INPUT: u8 = 3;

const DEFAULT_SEED: u64 = 0x6d6f_6e61_6466_6f72;

#[derive(Parser)]
#[command(name = "monadforge", version, about = "Linear monads on products of projective spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Floystad,
    P1power,
}

#[derive(Clone, Copy, ValueEnum)]
enum NModeArg {
    Paper,
    Kunneth,
}

#[derive(Subcommand)]
enum Command {
    /// Write the band monad for the given pair dimensions.
    Build {
        #[arg(long, value_delimiter = ',', required = true)]
        pairs: Vec<usize>,
        #[arg(long)]
        k: usize,
        #[arg(long, value_delimiter = ',')]
        alpha: Option<Vec<u32>>,
        /// Replace the literal twists by the inferred grading (one pair only).
        #[arg(long)]
        homogenize: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check homogeneity, g*f = 0, maximal rank and gradability.
    Verify {
        file: PathBuf,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_PROBE_PRIME)]
        prime: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Rank, c1, degree and slope of E, T and Q.
    Invariants {
        file: PathBuf,
        #[arg(long, value_delimiter = ',')]
        polarization: Option<Vec<i64>>,
    },
    /// Nonzero h^t of a line bundle.
    Cohomology {
        #[arg(long, value_delimiter = ',', required = true)]
        space: Vec<usize>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        deg: Vec<i64>,
    },
    /// Vanishing scan for normalized exterior powers of T.
    Scan {
        file: PathBuf,
        #[arg(long = "box", default_value_t = DEFAULT_BOX)]
        box_size: i64,
        #[arg(long, default_value_t = DEFAULT_MAX_Q)]
        max_q: u64,
        #[arg(long, value_delimiter = ',')]
        polarization: Option<Vec<i64>>,
        /// Fail unless every cell is verified zero.
        #[arg(long)]
        strict: bool,
    },
    /// Solve for twists that make both maps homogeneous.
    InferGrading { file: PathBuf },
    /// h^0 and h^1 of T*(p).
    DualKernel {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        twist: Vec<i64>,
    },
    /// Computable links of the simplicity argument for E.
    Simplicity { file: PathBuf },
    /// Evaluate the existence inequalities.
    Exist {
        #[arg(long, value_enum)]
        variant: Variant,
        /// Comma-separated `name=value` pairs.
        #[arg(long)]
        params: String,
        #[arg(long, value_enum, default_value = "paper")]
        n_mode: NModeArg,
    },
    /// Write a Macaulay2 verification script.
    ExportCas {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

struct Failure(u8, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(EXIT_INPUT, e.to_string())
    }
}

type CmdResult = Result<u8, Failure>;

fn input_err(msg: impl Into<String>) -> Failure {
    Failure(EXIT_INPUT, msg.into())
}

fn read_monad(path: &Path) -> Result<(Monad, Option<Metadata>), Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| input_err(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_monad_file(&text)?)
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| input_err(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn polarization(space: &Space, given: Option<Vec<i64>>) -> Result<Polarization, Failure> {
    match given {
        None => Ok(Polarization::all_ones(space)),
        Some(v) => {
            let l = Polarization::new(v)?;
            if l.as_deg().len() != space.num_factors() {
                return Err(input_err(format!(
                    "polarization has {} entries, space has {} factors",
                    l.as_deg().len(),
                    space.num_factors()
                )));
            }
            Ok(l)
        }
    }
}

fn cmd_build(
    pairs: Vec<usize>,
    k: usize,
    alpha: Option<Vec<u32>>,
    homogenize: bool,
    out: Option<PathBuf>,
) -> CmdResult {
    let params = PairedSpaceParams::new(pairs, k, alpha)?;
    let m = if homogenize { build_homogenized_monad(&params)? } else { build_monad(&params)? };
    let meta = Metadata { builder: Some(BuilderRecord::new(&params, homogenize)), notes: Vec::new() };
    write_output(out.as_deref(), &MonadFile::from_monad(&m, Some(meta)).to_json())?;
    eprintln!(
        "built monad on {}: A = {}, B = {}, C = {}",
        m.space(),
        m.a(),
        m.b(),
        m.c()
    );
    Ok(EXIT_PASS)
}

fn rank_record(name: &str, v: &RankVerdict) -> String {
    match v {
        RankVerdict::Verified => format!("check=max-rank map={name} status=verified"),
        RankVerdict::FullRankProbabilistic { trials, coordinate_points, prime, minor_degree, per_probe_bound } => format!(
            "check=max-rank map={name} status=probabilistic-pass trials={trials} coordinate-points={coordinate_points} prime={prime} minor-degree={minor_degree} per-probe-bound={per_probe_bound:e} failure-bound={:e}",
            per_probe_bound.powi(*trials as i32)
        ),
        RankVerdict::Refuted { witness, rank, expected, prime } => {
            let w: Vec<String> = witness
                .iter()
                .map(|c| format!("({})", c.iter().map(u64::to_string).collect::<Vec<_>>().join(",")))
                .collect();
            format!(
                "check=max-rank map={name} status=refuted rank={rank} expected={expected} prime={prime} witness={}",
                w.join("x")
            )
        }
        RankVerdict::Inconclusive { reason } => {
            format!("check=max-rank map={name} status=inconclusive reason=\"{reason}\"")
        }
    }
}

fn cmd_verify(file: PathBuf, trials: usize, prime: u64, seed: u64) -> CmdResult {
    let (m, _) = read_monad(&file)?;
    let report = validate(&m, trials, prime, seed)?;
    for (name, h) in [("f", &report.f_homogeneity), ("g", &report.g_homogeneity)] {
        let status = if h.passed() { "pass" } else { "fail" };
        println!("check=homogeneity map={name} status={status} failures={}", h.failures.len());
        for c in &h.failures {
            println!("cell map={name} {c}");
        }
    }
    let comp = &report.composition;
    println!(
        "check=composition status={} residual-entries={}",
        if comp.passed() { "pass" } else { "fail" },
        comp.residual.len()
    );
    for (r, c, p) in &comp.residual {
        println!("residual row={r} col={c} entry={p}");
    }
    println!("{}", rank_record("f", &report.f_max_rank));
    println!("{}", rank_record("g", &report.g_max_rank));
    match &report.grading {
        GradingSummary::Feasible { a, b, c } => {
            println!("check=grading status=feasible A={a} B={b} C={c}")
        }
        GradingSummary::Infeasible(cycle) => println!("check=grading status=infeasible cycle={cycle}"),
        GradingSummary::NotApplicable(why) => {
            println!("check=grading status=not-applicable reason=\"{why}\"")
        }
    }
    let (word, code) = match report.verdict() {
        Verdict::Pass => ("pass", EXIT_PASS),
        Verdict::Fail => ("fail", EXIT_VIOLATION),
        Verdict::Inconclusive => ("inconclusive", EXIT_INCONCLUSIVE),
    };
    println!("verdict={word}");
    eprintln!("{}: {word}", file.display());
    Ok(code)
}

fn cmd_invariants(file: PathBuf, pol: Option<Vec<i64>>) -> CmdResult {
    let (m, _) = read_monad(&file)?;
    let l = polarization(m.space(), pol)?;
    let inv = display_invariants(&m, &l)?;
    let slope = |s: &Option<_>| match s {
        Some(v) => format!("{v}"),
        None => "undefined".to_string(),
    };
    println!(
        "rankE={} c1E={} degT={} muT={}",
        inv.e.rank,
        inv.e.c1,
        inv.t.degree,
        slope(&inv.t.slope)
    );
    for (name, b) in [("E", &inv.e), ("T", &inv.t), ("Q", &inv.q)] {
        println!(
            "bundle={name} rank={} c1={} deg={} slope={}{}",
            b.rank,
            b.c1,
            b.degree,
            slope(&b.slope),
            if b.is_degenerate() { " degenerate" } else { "" }
        );
    }
    if inv.is_degenerate() {
        eprintln!("warning: nonpositive rank in the display");
    }
    Ok(EXIT_PASS)
}

fn cmd_cohomology(space: Vec<usize>, deg: Vec<i64>) -> CmdResult {
    let space = Space::new(space)?;
    let table = kunneth_h(&space, &MultiDeg(deg))?;
    for (t, h) in table.nonzero() {
        println!("t={t} h={h}");
    }
    if table.is_zero() {
        eprintln!("all cohomology vanishes");
    }
    Ok(EXIT_PASS)
}

fn cmd_scan(file: PathBuf, box_size: i64, max_q: u64, pol: Option<Vec<i64>>, strict: bool) -> CmdResult {
    let (m, _) = read_monad(&file)?;
    let l = polarization(m.space(), pol)?;
    let r = hoppe_scan(&m, &l, box_size, max_q)?;
    println!(
        "rankT={} muT={} box={} cube={} region={}",
        r.rank_t, r.mu_t, r.box_size, r.cube_size, r.region_size
    );
    for pw in &r.powers {
        println!(
            "power q={} rank={} c1={} slope={} normalization={}",
            pw.q, pw.rank, pw.c1, pw.slope, pw.normalization
        );
    }
    for c in &r.cells {
        let status = match c.status {
            CellStatus::VerifiedZero => "status=verified-zero".to_string(),
            CellStatus::Nonzero(h) => format!("status=nonzero h0={h}"),
            CellStatus::InconclusiveSurrogate(h) => format!("status=inconclusive-surrogate bound={h}"),
        };
        println!("q={} p={} delta={} twist={} {status}", c.q, c.p, c.delta, c.effective);
    }
    eprintln!(
        "{} cells: {} verified-zero, {} nonzero, {} inconclusive",
        r.cells.len(),
        r.verified_zero(),
        r.nonzero(),
        r.inconclusive()
    );
    if !strict {
        return Ok(EXIT_PASS);
    }
    Ok(if r.nonzero() > 0 {
        EXIT_VIOLATION
    } else if r.inconclusive() > 0 {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_PASS
    })
}

fn cmd_infer_grading(file: PathBuf) -> CmdResult {
    let (m, _) = read_monad(&file)?;
    let anchor = m.a().summands().first().map(|(d, _)| d.clone());
    match grading_inference(m.f(), m.g(), anchor.as_ref()) {
        Ok(GradingOutcome::Feasible(s)) => {
            println!("status=feasible components={}", s.components);
            println!("A={}", s.source_sum());
            println!("B={}", s.middle_sum());
            println!("C={}", s.target_sum());
            eprintln!("grading feasible");
            Ok(EXIT_PASS)
        }
        Ok(GradingOutcome::Infeasible(cycle)) => {
            println!("status=infeasible discrepancy={}", cycle.discrepancy);
            for s in &cycle.steps {
                println!("step from={} to={} via={} delta={}", s.from, s.to, s.via, s.delta);
            }
            eprintln!("grading infeasible: {cycle}");
            Ok(EXIT_VIOLATION)
        }
        Err(e @ Error::Inhomogeneous(_)) => {
            println!("status=inhomogeneous");
            eprintln!("{e}");
            Ok(EXIT_VIOLATION)
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_dual_kernel(file: PathBuf, twist: Vec<i64>) -> CmdResult {
    let (m, _) = read_monad(&file)?;
    let d = dual_kernel_h0_h1(&m, &MultiDeg(twist))?;
    println!(
        "p={} h0={} h1={} map-rank={} h0B*={} h1B*={} h0C*={} h1C*={} h2C*={}",
        d.p, d.h0, d.h1, d.map_rank, d.h0_b, d.h1_b, d.h0_c, d.h1_c, d.h2_c
    );
    Ok(EXIT_PASS)
}

fn cmd_simplicity(file: PathBuf) -> CmdResult {
    let (m, _) = read_monad(&file)?;
    let r = simplicity_ingredients(&m)?;
    println!("p={} h0={} h1={} k={} h0k={} h1k={}", r.dual.p, r.dual.h0, r.dual.h1, r.k, r.h0_k, r.h1_k);
    for (name, link) in [
        ("vanishing", &r.vanishing),
        ("stability", &r.stability),
        ("endomorphisms", &r.endomorphisms),
    ] {
        let detail = match link {
            monadforge::stability::LinkStatus::Verified => String::new(),
            monadforge::stability::LinkStatus::Failed(s)
            | monadforge::stability::LinkStatus::Undetermined(s)
            | monadforge::stability::LinkStatus::EvidenceOnly(s)
            | monadforge::stability::LinkStatus::OutOfScope(s) => format!(" detail=\"{s}\""),
        };
        println!("link={name} status={}{detail}", link.label());
    }
    Ok(match r.vanishing {
        monadforge::stability::LinkStatus::Verified => EXIT_PASS,
        monadforge::stability::LinkStatus::Failed(_) => EXIT_VIOLATION,
        _ => EXIT_INCONCLUSIVE,
    })
}

fn parse_params(text: &str, names: &[&str]) -> Result<Vec<u64>, Failure> {
    let mut values = vec![None; names.len()];
    for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| input_err(format!("expected name=value, got '{part}'")))?;
        let idx = names
            .iter()
            .position(|n| *n == key.trim())
            .ok_or_else(|| input_err(format!("unknown parameter '{key}'; expected {}", names.join(","))))?;
        let v: u64 = value
            .trim()
            .parse()
            .map_err(|_| input_err(format!("parameter {key} must be a nonnegative integer")))?;
        values[idx] = Some(v);
    }
    names
        .iter()
        .zip(values)
        .map(|(n, v)| v.ok_or_else(|| input_err(format!("missing parameter {n}"))))
        .collect()
}

fn cmd_exist(variant: Variant, params: String, n_mode: NModeArg) -> CmdResult {
    let query = match variant {
        Variant::Floystad => {
            let v = parse_params(&params, &["k", "a", "b", "c"])?;
            ExistenceQuery::Floystad { k: v[0], a: v[1], b: v[2], c: v[3] }
        }
        Variant::P1power => {
            let v = parse_params(&params, &["n", "alpha", "beta", "gamma"])?;
            let mode = match n_mode {
                NModeArg::Paper => NMode::Paper,
                NModeArg::Kunneth => NMode::Kunneth,
            };
            ExistenceQuery::P1Power { n: v[0], alpha: v[1], beta: v[2], gamma: v[3], mode }
        }
    };
    let verdict = existence_conditions(&query)?;
    println!("{verdict}");
    eprintln!("evaluated with dimension parameter {}", verdict.dimension);
    Ok(EXIT_PASS)
}

fn cmd_export_cas(file: PathBuf, out: Option<PathBuf>) -> CmdResult {
    let (m, _) = read_monad(&file)?;
    write_output(out.as_deref(), &export_macaulay2(&m))?;
    Ok(EXIT_PASS)
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Build { pairs, k, alpha, homogenize, out } => cmd_build(pairs, k, alpha, homogenize, out),
        Command::Verify { file, trials, prime, seed } => cmd_verify(file, trials, prime, seed),
        Command::Invariants { file, polarization } => cmd_invariants(file, polarization),
        Command::Cohomology { space, deg } => cmd_cohomology(space, deg),
        Command::Scan { file, box_size, max_q, polarization, strict } => {
            cmd_scan(file, box_size, max_q, polarization, strict)
        }
        Command::InferGrading { file } => cmd_infer_grading(file),
        Command::DualKernel { file, twist } => cmd_dual_kernel(file, twist),
        Command::Simplicity { file } => cmd_simplicity(file),
        Command::Exist { variant, params, n_mode } => cmd_exist(variant, params, n_mode),
        Command::ExportCas { file, out } => cmd_export_cas(file, out),
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("MONADFORGE_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| input_err(format!("MONADFORGE_THREADS must be a positive integer, got '{v}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| input_err(e.to_string()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match configure_threads().and_then(|_| run(cli)) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
