//! Argument handling for the `jcurve` binary, kept in a library so the
//! whole command surface can be exercised in-process.

use std::fmt::Write as _;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use jcurve_core::chern::{self, EnumOptions, DEFAULT_WORK_LIMIT};
use jcurve_core::suite;
use jcurve_core::{
    decide_pseudoholomorphic_with, genus_spectrum_with, parse_lattice, parse_manifold, parse_vector,
    stabilization_count, ChernConstraint, Decision, Error, Execution, LatticeVector, Parity, SearchBudget,
    SolveOutcome, SurfaceClass, Verdict,
};

pub const WORK_LIMIT_ENV: &str = "JCURVE_WORK_LIMIT";

#[derive(Debug, Parser)]
#[command(name = "jcurve", version, about = "Pseudoholomorphic realizability of surface classes in 4-manifolds")]
#[command(after_help = "Pass negative vectors or integers after `--`, e.g. `jcurve decide CP2 -- -1 3`.")]
pub struct Cli {
    /// Emit a single JSON document.
    #[arg(long, global = true)]
    pub json: bool,
    /// Largest coordinate bound for fallback certificate searches.
    #[arg(long, global = true, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: u64,
    /// Maximum number of box points an enumeration or search may visit
    /// (overrides $JCURVE_WORK_LIMIT).
    #[arg(long, global = true)]
    pub work_limit: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lattice invariants, plus b1, chi and h when given a manifold.
    Info { manifold: String },
    /// Divisibility of a vector (gcd of its coordinates).
    Divisibility { vector: String },
    /// The residue k(y) = 1 + (y.y - c.y)/2 mod d(y).
    KInvariant { lattice: String, vector: String },
    /// Find c characteristic with c.c = h and c.y = 2 - 2g + y.y.
    SolveChern { lattice: String, vector: String, h: i64, g: i64 },
    /// All characteristic c with c.c = h and |c_i| <= bound.
    Enumerate { lattice: String, h: i64, bound: u64 },
    /// Decide whether a genus-g surface in the class can be pseudoholomorphic.
    Decide { manifold: String, vector: String, g: u64 },
    /// Decisions for every genus from 0 to gmax.
    Spectrum { manifold: String, vector: String, gmax: u64 },
    /// Smallest number of S1xS3 summands after which the class is obstructed.
    Stabilize { manifold: String, vector: String, g: u64 },
    /// Run the built-in acceptance suite.
    VerifyPaper {
        #[arg(long, default_value_t = suite::DEFAULT_SEED)]
        seed: u64,
    },
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Report {
    fn ok(code: i32, stdout: String) -> Self {
        Report { code, stdout, stderr: String::new() }
    }
}

#[derive(Debug)]
enum CliError {
    Core(Error),
    Usage(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Usage(s) => f.write_str(s),
        }
    }
}

type CliResult = std::result::Result<(i32, String), CliError>;

pub fn run<I, T>(args: I) -> Report
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Report { code: 1, stdout: String::new(), stderr: text }
            } else {
                Report::ok(0, text)
            };
        }
    };
    let work_limit = match resolve_work_limit(cli.work_limit) {
        Ok(w) => w,
        Err(e) => return failure(&cli, e),
    };
    let ctx = Ctx { json: cli.json, search: SearchBudget { work_limit, ..SearchBudget::up_to(cli.budget) } };
    match dispatch(&ctx, &cli.command) {
        Ok((code, out)) => Report::ok(code, out),
        Err(e) => failure(&cli, e),
    }
}

fn failure(cli: &Cli, e: CliError) -> Report {
    let stderr = if cli.json { format!("{}\n", json!({ "error": e.to_string() })) } else { format!("error: {e}\n") };
    Report { code: 1, stdout: String::new(), stderr }
}

fn resolve_work_limit(flag: Option<u64>) -> std::result::Result<u64, CliError> {
    if let Some(w) = flag {
        return Ok(w);
    }
    match std::env::var(WORK_LIMIT_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("${WORK_LIMIT_ENV} must be a non-negative integer, got `{v}`"))),
        Err(_) => Ok(DEFAULT_WORK_LIMIT),
    }
}

struct Ctx {
    json: bool,
    search: SearchBudget,
}

impl Ctx {
    fn emit(&self, code: i32, value: Value, human: String) -> CliResult {
        if self.json {
            Ok((code, format!("{}\n", serde_json::to_string_pretty(&value).expect("serializable"))))
        } else {
            Ok((code, human))
        }
    }
}

fn verdict_code(v: Verdict) -> i32 {
    match v {
        Verdict::Unknown => 2,
        _ => 0,
    }
}

fn dispatch(ctx: &Ctx, cmd: &Command) -> CliResult {
    match cmd {
        Command::Info { manifold } => info(ctx, manifold),
        Command::Divisibility { vector } => {
            let v = parse_vector(vector)?;
            let d = v.divisibility();
            ctx.emit(0, json!({ "vector": v, "divisibility": d }), format!("{d}\n"))
        }
        Command::KInvariant { lattice, vector } => {
            let l = parse_lattice(lattice)?;
            let v = parse_vector(vector)?;
            let k = l.k_invariant(&v)?;
            let human = if k.modulus() == 0 { format!("k = {} (exact)\n", k.value()) } else { format!("k = {k}\n") };
            ctx.emit(0, json!({ "vector": v, "divisibility": v.divisibility(), "k": k }), human)
        }
        Command::SolveChern { lattice, vector, h, g } => solve(ctx, lattice, vector, *h, *g),
        Command::Enumerate { lattice, h, bound } => enumerate(ctx, lattice, *h, *bound),
        Command::Decide { manifold, vector, g } => decide(ctx, manifold, vector, *g),
        Command::Spectrum { manifold, vector, gmax } => spectrum(ctx, manifold, vector, *gmax),
        Command::Stabilize { manifold, vector, g } => stabilize(ctx, manifold, vector, *g),
        Command::VerifyPaper { seed } => verify(ctx, *seed),
    }
}

fn info(ctx: &Ctx, spec: &str) -> CliResult {
    let m = parse_manifold(spec)?;
    let l = &m.lattice;
    let sig = l.signature();
    let parity = match l.parity() {
        Parity::Even => "even",
        Parity::Odd => "odd",
    };
    let c = l.find_characteristic();
    let human = format!(
        "lattice:        {}\nrank:           {}\nsignature:      (b+, b-) = ({}, {}), tau = {}\nparity:         {}\ndeterminant:    {}\ncharacteristic: {}\nb1:             {}\nchi:            {}\nh = 2chi+3tau:  {}\nacs parity:     {}\n",
        l.describe(),
        l.rank(),
        sig.b_plus,
        sig.b_minus,
        sig.tau(),
        parity,
        l.determinant(),
        c,
        m.b1,
        m.euler(),
        m.chern_number_target(),
        if m.acs_parity_ok() { "b1 + b+ odd" } else { "b1 + b+ even, no almost complex structure" }
    );
    let value = json!({
        "manifold": m.descriptor(),
        "lattice": jcurve_core::LatticeSpec::of(l),
        "rank": l.rank(),
        "b_plus": sig.b_plus,
        "b_minus": sig.b_minus,
        "tau": sig.tau(),
        "parity": parity,
        "determinant": l.determinant(),
        "characteristic": c,
        "acs_parity_ok": m.acs_parity_ok(),
    });
    ctx.emit(0, value, human)
}

fn solve(ctx: &Ctx, lattice: &str, vector: &str, h: i64, g: i64) -> CliResult {
    let l = parse_lattice(lattice)?;
    let gamma = parse_vector(vector)?;
    let cons = ChernConstraint::new(gamma.clone(), h, g);
    match chern::solve_chern_with(&l, &cons, &ctx.search)? {
        SolveOutcome::Certified(cert) => {
            let human = format!(
                "certified: c = {}  (c.c = {}, c.y = {}, branch {:?})\n",
                cert.c(),
                cert.h(),
                cert.pairing(),
                cert.branch()
            );
            ctx.emit(0, json!({ "status": "certified", "gamma": gamma, "certificate": cert }), human)
        }
        SolveOutcome::Infeasible(why) => ctx.emit(
            0,
            json!({ "status": "infeasible", "gamma": gamma, "reason": why }),
            format!("infeasible: {why:?}\n"),
        ),
        SolveOutcome::BudgetExhausted { bound } => ctx.emit(
            2,
            json!({ "status": "budget_exhausted", "gamma": gamma, "bound": bound }),
            format!("unknown: no certificate with coordinates up to {bound}\n"),
        ),
    }
}

fn enumerate(ctx: &Ctx, lattice: &str, h: i64, bound: u64) -> CliResult {
    let l = parse_lattice(lattice)?;
    let opts = EnumOptions { work_limit: ctx.search.work_limit, ..Default::default() };
    let side = 2 * bound as u128 + 1;
    let size = (0..l.rank()).try_fold(1u128, |a, _| a.checked_mul(side)).unwrap_or(u128::MAX);
    if size > opts.work_limit as u128 {
        return Err(CliError::Usage(format!(
            "enumeration box [-{bound}, {bound}]^{} has {size} points, above the work limit {}; raise --work-limit",
            l.rank(),
            opts.work_limit
        )));
    }
    let e = chern::enumerate_characteristic_with(&l, h, bound, &opts);
    let mut human = String::new();
    for v in &e.vectors {
        writeln!(human, "{v}").unwrap();
    }
    writeln!(human, "{} characteristic vectors of square {h} with |c_i| <= {bound}", e.vectors.len()).unwrap();
    ctx.emit(0, json!({ "h": h, "bound": bound, "box_size": e.box_size as u64, "vectors": e.vectors }), human)
}

fn surface(
    manifold: &str,
    vector: &str,
    g: u64,
) -> std::result::Result<(jcurve_core::FourManifold, SurfaceClass), CliError> {
    let m = parse_manifold(manifold)?;
    let gamma = parse_vector(vector)?;
    m.lattice.check_dim(&gamma)?;
    Ok((m, SurfaceClass::new(gamma, g)))
}

fn describe_decision(d: &Decision) -> String {
    let mut s = format!("{:?} ({:?})", d.verdict, d.rule);
    if let Some(c) = &d.certificate {
        write!(s, ", certificate c = {}", c.c()).unwrap();
    }
    if let Some(b) = d.bound_used {
        write!(s, ", searched up to {b}").unwrap();
    }
    s
}

fn decide(ctx: &Ctx, manifold: &str, vector: &str, g: u64) -> CliResult {
    let (m, s) = surface(manifold, vector, g)?;
    let d = decide_pseudoholomorphic_with(&m, &s, &ctx.search)?;
    let mut human = format!("{}\n", describe_decision(&d));
    for n in &d.notes {
        writeln!(human, "note: {n}").unwrap();
    }
    let value = json!({ "manifold": m.descriptor(), "gamma": s.gamma, "genus": g, "decision": d });
    ctx.emit(verdict_code(d.verdict), value, human)
}

fn spectrum(ctx: &Ctx, manifold: &str, vector: &str, gmax: u64) -> CliResult {
    let (m, s) = surface(manifold, vector, 0)?;
    let spec = genus_spectrum_with(&m, &s.gamma, gmax, &ctx.search, Execution::default())?;
    let mut human = String::new();
    for (g, d) in &spec {
        writeln!(human, "g = {g:<3} {}", describe_decision(d)).unwrap();
    }
    let code = spec.values().map(|d| verdict_code(d.verdict)).max().unwrap_or(0);
    let rows: Vec<Value> = spec.iter().map(|(g, d)| json!({ "genus": g, "decision": d })).collect();
    ctx.emit(code, json!({ "manifold": m.descriptor(), "gamma": s.gamma, "spectrum": rows }), human)
}

fn stabilize(ctx: &Ctx, manifold: &str, vector: &str, g: u64) -> CliResult {
    let (m, s) = surface(manifold, vector, g)?;
    let st = stabilization_count(&m, &s)?;
    let d = decide_pseudoholomorphic_with(&st.manifold, &s, &ctx.search)?;
    let human = format!(
        "k = {}\nstabilized: b1 = {}, h = {}\ndecision: {}\n",
        st.k,
        st.manifold.b1,
        st.manifold.chern_number_target(),
        describe_decision(&d)
    );
    let value = json!({ "k": st.k, "manifold": st.manifold.descriptor(), "gamma": s.gamma, "genus": g, "decision": d });
    ctx.emit(verdict_code(d.verdict), value, human)
}

fn verify(ctx: &Ctx, seed: u64) -> CliResult {
    let reports = suite::run_all(seed);
    let all = reports.iter().all(|r| r.passed);
    let mut human = String::new();
    for r in &reports {
        writeln!(
            human,
            "[{}] {}. {} ({} ms, limit {} ms): {}",
            if r.passed { "PASS" } else { "FAIL" },
            r.id,
            r.name,
            r.elapsed_ms,
            r.limit_ms,
            r.detail
        )
        .unwrap();
    }
    writeln!(human, "{}/{} criteria passed", reports.iter().filter(|r| r.passed).count(), reports.len()).unwrap();
    ctx.emit(if all { 0 } else { 1 }, json!({ "seed": seed, "passed": all, "criteria": reports }), human)
}

/// Parses a vector argument; exposed for integration tests.
pub fn vector_arg(s: &str) -> jcurve_core::Result<LatticeVector> {
    parse_vector(s)
}
