use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ringcount::codes::{decompose, restriction, trace_code, LinearCode};
use ringcount::counting::{
    aleph_bruteforce, aleph_formula, chain_binomial, comparison_report, kappa, lyle_formula,
    m_sets, minimal_full_trace_codes, omega_bruteforce, omega_formula, reports_to_csv,
    reports_to_text, AlephSource, Options,
};
use ringcount::enumerate::{write_cache, EnumerationPlan};
use ringcount::notation::{format_element, format_vector, parse_rows};
use ringcount::pir::{
    code_from_integer_rows, is_free_pir_code, omega_hat, pir_chain_binomial, pir_galois_extension,
    pir_omega_bruteforce, PirRing,
};
use ringcount::verify;
use ringcount::{ChainRing, Error, GaloisExtension};

const AFTER_HELP: &str = "\
Rings: gf:<q> | zps:<p>:<s> | gr:<p>:<s>:<n> | tp:<q>:<s> | crt:(<spec>,<spec>,...)
  --degree m selects the Galois extension of degree m over the base ring.

Elements: sums and products of integers and generator names, e.g. 1+a, 2a^2, (1+u)*a.
  In an extension the new generator is `a`; `b` abbreviates a^2. The uniformizer
  of a truncated ring tp:q:s is `u`; the generator of its residue field is `x`.
  Vectors: (1,0,a). Generator rows: \"(1,0,a);(0,1,b)\".

Exit status: 0 success, 2 failed criteria under verify --strict, 64 bad input,
  65 enumeration guard exceeded, 70 internal cross-check fault.";

#[derive(Parser)]
#[command(name = "ringcount", version, about = "Counting codes over finite chain rings and their Galois extensions", after_help = AFTER_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Base ring spec.
    #[arg(long, global = true)]
    ring: Option<String>,

    /// Extension degree m.
    #[arg(long, global = true, default_value_t = 1)]
    degree: usize,

    /// Code length.
    #[arg(long = "len", global = true)]
    length: Option<usize>,

    #[arg(long, global = true)]
    k: Option<usize>,

    #[arg(long, global = true)]
    kp: Option<usize>,

    /// Generator rows, e.g. "(1,0,a);(0,1,b)".
    #[arg(long, global = true)]
    gens: Option<String>,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Worker threads (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,

    #[arg(long, global = true, env = "RINGCOUNT_CACHE_DIR")]
    cache_dir: Option<PathBuf>,

    /// Maximum number of codes any single enumeration may visit.
    #[arg(long, global = true)]
    guard: Option<u128>,

    /// Lift the enumeration guard entirely.
    #[arg(long, global = true, conflicts_with = "guard")]
    no_guard: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Gaussian or chain-ring binomial [|k k'|]; product over components for crt rings.
    Binomial,
    /// Stream free rank-k codes (all submodules when --k is absent; subcodes of --gens when given).
    Enum,
    /// Number of free rank-k codes with full trace code, by formula and by enumeration.
    Aleph,
    /// Free rank-k codes whose restriction has rank k', by formula and by enumeration.
    Omega,
    /// The binomial [l-k' over l-k] in q^m.
    Lyle,
    /// Minimal full-trace codes.
    Minimal,
    /// Sums of minimal full-trace codes, grouped by rank.
    Msets,
    /// Split a code as Ext(Res(B)) plus a complement with trivial restriction.
    Decompose,
    /// Subring subcode of the code spanned by --gens.
    Restrict,
    /// Trace code of the code spanned by --gens.
    Trace,
    /// Integer model of a crt ring and of the code spanned by --gens.
    Crt,
    /// Every applicable formula against its oracle.
    Report,
    /// Run the acceptance criteria.
    Verify {
        /// Exit with status 2 when a criterion fails.
        #[arg(long)]
        strict: bool,
        /// Run only this criterion.
        #[arg(long)]
        criterion: Option<u8>,
    },
}

enum Failure {
    Lib(Error),
    Usage(String),
    Strict,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Lib(Error::Io(e))
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Lib(Error::Json(e))
    }
}

type Outcome = std::result::Result<(), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

impl Cli {
    fn options(&self) -> Options {
        let mut opts = Options {
            jobs: self.jobs,
            ..Options::default()
        };
        if let Some(g) = self.guard {
            opts.guard = g;
        }
        if self.no_guard {
            opts.guard = u128::MAX;
        }
        opts
    }

    fn ring_spec(&self) -> std::result::Result<&str, Failure> {
        self.ring
            .as_deref()
            .ok_or_else(|| usage("--ring is required"))
    }

    fn is_crt(&self) -> bool {
        self.ring.as_deref().is_some_and(|r| r.starts_with("crt:"))
    }

    fn extension(&self) -> std::result::Result<GaloisExtension, Failure> {
        if self.is_crt() {
            return Err(usage(
                "this command takes a chain ring; crt rings are handled by binomial, omega and crt",
            ));
        }
        if self.degree == 0 {
            return Err(usage("--degree must be at least 1"));
        }
        let base = ChainRing::from_spec(self.ring_spec()?)?;
        Ok(GaloisExtension::new(&base, self.degree)?)
    }

    fn pir(&self) -> std::result::Result<PirRing, Failure> {
        Ok(self.ring_spec()?.parse()?)
    }

    fn length(&self) -> std::result::Result<usize, Failure> {
        self.length.ok_or_else(|| usage("--len is required"))
    }

    fn k(&self) -> std::result::Result<usize, Failure> {
        self.k.ok_or_else(|| usage("--k is required"))
    }

    fn kp(&self) -> std::result::Result<usize, Failure> {
        self.kp.ok_or_else(|| usage("--kp is required"))
    }

    fn ranks(&self) -> std::result::Result<(usize, usize, usize), Failure> {
        let (len, k, kp) = (self.length()?, self.k()?, self.kp()?);
        if kp > k || k > len {
            return Err(usage(format!(
                "need kp <= k <= len, got kp={kp}, k={k}, len={len}"
            )));
        }
        Ok((len, k, kp))
    }

    /// Code over `ring` spanned by `--gens`; length from `--len` or the rows.
    fn code(&self, ring: &ChainRing) -> std::result::Result<LinearCode, Failure> {
        let text = self
            .gens
            .as_deref()
            .ok_or_else(|| usage("--gens is required"))?;
        let rows = parse_rows(ring, text)?;
        let len = match (self.length, rows.first()) {
            (Some(l), _) => l,
            (None, Some(r)) => r.len(),
            (None, None) => return Err(usage("--len is required for an empty generator list")),
        };
        Ok(LinearCode::from_generators(ring, len, &rows)?)
    }

    fn format(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }
}

fn print_json(v: &Value) -> Outcome {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

/// Codewords written compactly when every entry prints as one character.
fn format_codewords(code: &LinearCode) -> String {
    let ring = code.ring();
    let words: Vec<String> = code
        .codewords()
        .iter()
        .map(|w| {
            let parts: Vec<String> = w.iter().map(|&x| format_element(ring, x)).collect();
            if parts.iter().all(|p| p.chars().count() == 1) {
                parts.concat()
            } else {
                format!("({})", parts.join(","))
            }
        })
        .collect();
    format!("{{{}}}", words.join(", "))
}

fn code_json(code: &LinearCode) -> Value {
    let ring = code.ring();
    json!({
        "code": code.to_string(),
        "rank": code.rank(),
        "free": code.is_free(),
        "size": code.size().to_string(),
        "generators": code.generators().iter().map(|g| format_vector(ring, g)).collect::<Vec<_>>(),
    })
}

fn show_code(cli: &Cli, label: &str, code: &LinearCode) -> Outcome {
    if cli.format(Format::Text) == Format::Json {
        let mut v = code_json(code);
        if code.size() <= 4096u32.into() {
            v["codewords"] = Value::String(format_codewords(code));
        }
        return print_json(&json!({ label: v }));
    }
    println!("{label}: {code}");
    println!(
        "rank: {}{}",
        code.rank(),
        if code.is_free() { " (free)" } else { "" }
    );
    if code.size() <= 4096u32.into() {
        println!("codewords: {}", format_codewords(code));
    } else {
        println!("size: {}", code.size());
    }
    Ok(())
}

fn cmd_binomial(cli: &Cli) -> Outcome {
    let (k, kp) = (cli.k()?, cli.kp()?);
    let value = if cli.is_crt() {
        let pir = cli.pir()?;
        let pir = if cli.degree > 1 {
            let ext = pir_galois_extension(&pir, cli.degree)?;
            PirRing::new(ext.components.iter().map(|e| e.ring().clone()).collect())?
        } else {
            pir
        };
        pir_chain_binomial(&pir, k as u64, kp as u64)?
    } else {
        let ring = cli.extension()?.ring().clone();
        chain_binomial(k as u64, kp as u64, &ring.q().into(), ring.s())?
    };
    match cli.format(Format::Text) {
        Format::Json => print_json(&json!({ "k": k, "kp": kp, "value": value.to_string() })),
        _ => {
            println!("{value}");
            Ok(())
        }
    }
}

fn cmd_enum(cli: &Cli) -> Outcome {
    let ring = cli.extension()?.ring().clone();
    let plan = match (cli.gens.is_some(), cli.k) {
        (true, Some(k)) => EnumerationPlan::free_subcodes(&cli.code(&ring)?, k)?,
        (true, None) => return Err(usage("--gens requires --k for subcode enumeration")),
        (false, Some(k)) => EnumerationPlan::free_codes(&ring, cli.length()?, k)?,
        (false, None) => EnumerationPlan::all_submodules(&ring, cli.length()?)?,
    }
    .with_guard(cli.options().guard);
    if let Some(dir) = &cli.cache_dir {
        std::fs::create_dir_all(dir)?;
        let path = write_cache(dir, &plan)?;
        println!("{}", path.display());
        return Ok(());
    }
    let text = cli.format(Format::Json) == Format::Text;
    let mut out = BufWriter::new(io::stdout().lock());
    for code in plan.stream()? {
        if text {
            writeln!(out, "{code}")?;
        } else {
            writeln!(out, "{}", serde_json::to_string(&code.to_record())?)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn cmd_aleph(cli: &Cli) -> Outcome {
    let ext = cli.extension()?;
    let (len, k) = (cli.length()?, cli.k()?);
    if k > len {
        return Err(usage("need k <= len"));
    }
    let opts = cli.options();
    let kap = kappa(len, ext.degree());
    let formula = aleph_formula(&ext, len, k, &opts)?;
    let oracle = aleph_bruteforce(&ext, len, k, &opts)?;
    match cli.format(Format::Text) {
        Format::Json => print_json(&json!({
            "kappa": kap,
            "formula": formula.to_string(),
            "oracle": oracle.to_string(),
        })),
        _ => {
            println!("kappa: {kap}");
            println!("formula: {formula}");
            println!("oracle: {oracle}");
            Ok(())
        }
    }
}

fn cmd_omega(cli: &Cli) -> Outcome {
    let (len, k, kp) = cli.ranks()?;
    let opts = cli.options();
    if cli.is_crt() {
        let ext = pir_galois_extension(&cli.pir()?, cli.degree)?;
        let by_formula = omega_hat(&ext, len, k, kp, AlephSource::Formula, &opts)?;
        let by_oracle = omega_hat(&ext, len, k, kp, AlephSource::Oracle, &opts)?;
        let brute = pir_omega_bruteforce(&ext, len, k, &opts)?;
        let observed = brute.by_free_rank.get(&kp).cloned().unwrap_or_default();
        let max_rank = brute.by_max_rank.get(&kp).cloned().unwrap_or_default();
        return match cli.format(Format::Text) {
            Format::Json => print_json(&json!({
                "formula": by_formula,
                "aleph_oracle": by_oracle,
                "observed_free_restriction": observed.to_string(),
                "observed_max_rank": max_rank.to_string(),
                "total": brute.total.to_string(),
            })),
            _ => {
                println!("formula: {}", by_formula.value);
                println!("formula with counted aleph: {}", by_oracle.value);
                println!("observed (free restriction of rank k'): {observed}");
                println!("observed (max component rank k'): {max_rank}");
                Ok(())
            }
        };
    }
    let ext = cli.extension()?;
    let formula = omega_formula(&ext, len, k, kp, AlephSource::Formula, &opts)?;
    let with_oracle = omega_formula(&ext, len, k, kp, AlephSource::Oracle, &opts)?;
    let hist = omega_bruteforce(&ext, len, k, &opts)?;
    let observed = hist.get(&kp).cloned().unwrap_or_default();
    match cli.format(Format::Text) {
        Format::Json => print_json(&json!({
            "formula": formula.to_string(),
            "formula_with_counted_aleph": with_oracle.to_string(),
            "observed": observed.to_string(),
            "histogram": hist.iter().map(|(r, c)| (r.to_string(), Value::String(c.to_string()))).collect::<serde_json::Map<_, _>>(),
        })),
        _ => {
            println!("formula: {formula}");
            println!("formula with counted aleph: {with_oracle}");
            println!("observed: {observed}");
            let parts: Vec<String> = hist.iter().map(|(r, c)| format!("{r}: {c}")).collect();
            println!("histogram: {{{}}}", parts.join(", "));
            Ok(())
        }
    }
}

fn cmd_lyle(cli: &Cli) -> Outcome {
    let (len, k, kp) = cli.ranks()?;
    let ext = cli.extension()?;
    let value = lyle_formula(len, cli.degree, k, kp, ext.base().q())?;
    match cli.format(Format::Text) {
        Format::Json => print_json(&json!({ "value": value.to_string() })),
        _ => {
            println!("{value}");
            Ok(())
        }
    }
}

fn cmd_minimal(cli: &Cli) -> Outcome {
    let ext = cli.extension()?;
    let set = minimal_full_trace_codes(&ext, cli.length()?, &cli.options())?;
    match cli.format(Format::Text) {
        Format::Json => print_json(&json!({
            "kappa": set.kappa,
            "members": set.members.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        })),
        _ => {
            println!("kappa: {}", set.kappa);
            println!("members: {}", set.members.len());
            for c in &set.members {
                println!("{c}");
            }
            Ok(())
        }
    }
}

fn cmd_msets(cli: &Cli) -> Outcome {
    let ext = cli.extension()?;
    let set = minimal_full_trace_codes(&ext, cli.length()?, &cli.options())?;
    let sets = m_sets(&set)?;
    match cli.format(Format::Text) {
        Format::Json => {
            let map: serde_json::Map<String, Value> = sets
                .iter()
                .map(|(u, cs)| {
                    (
                        u.to_string(),
                        json!(cs.iter().map(|c| c.to_string()).collect::<Vec<_>>()),
                    )
                })
                .collect();
            print_json(&Value::Object(map))
        }
        _ => {
            for (u, cs) in &sets {
                println!("rank {u}: {} codes", cs.len());
                for c in cs {
                    println!("  {c}");
                }
            }
            Ok(())
        }
    }
}

fn cmd_decompose(cli: &Cli) -> Outcome {
    let ext = cli.extension()?;
    let b = cli.code(ext.ring())?;
    let (b0, b1) = decompose(&ext, &b)?;
    match cli.format(Format::Text) {
        Format::Json => print_json(&json!({ "b0": code_json(&b0), "b1": code_json(&b1) })),
        _ => {
            println!("B0 = Ext(Res(B)): {b0}");
            println!("B1: {b1}");
            Ok(())
        }
    }
}

fn cmd_restrict(cli: &Cli) -> Outcome {
    let ext = cli.extension()?;
    let b = cli.code(ext.ring())?;
    show_code(cli, "restriction", &restriction(&ext, &b)?)
}

fn cmd_trace(cli: &Cli) -> Outcome {
    let ext = cli.extension()?;
    let b = cli.code(ext.ring())?;
    show_code(cli, "trace", &trace_code(&ext, &b)?)
}

fn parse_integer_rows(text: &str) -> std::result::Result<Vec<Vec<u64>>, Failure> {
    text.split(';')
        .map(|row| {
            let inner = row.trim().trim_start_matches('(').trim_end_matches(')');
            inner
                .split(',')
                .map(|x| {
                    x.trim().parse::<u64>().map_err(|_| {
                        Failure::Lib(Error::Parse(format!("`{x}` is not a non-negative integer")))
                    })
                })
                .collect()
        })
        .collect()
}

fn cmd_crt(cli: &Cli) -> Outcome {
    let pir = cli.pir()?;
    let n = pir.integer_modulus();
    let mut info = json!({
        "ring": pir.to_string(),
        "size": pir.size().to_string(),
        "integer_modulus": n,
    });
    if cli.degree > 1 {
        let ext = pir_galois_extension(&pir, cli.degree)?;
        info["degree"] = json!(cli.degree);
        if n.is_some() {
            info["modulus_polynomial"] = json!(ext.integer_modulus_polynomial()?);
        }
    }
    if let Some(gens) = &cli.gens {
        let rows = parse_integer_rows(gens)?;
        let len = cli.length.or(rows.first().map(Vec::len)).unwrap_or(0);
        let code = code_from_integer_rows(&pir, len, &rows)?;
        let (free, rank) = is_free_pir_code(&code);
        info["code"] = json!({
            "components": code.components().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "ranks": code.ranks(),
            "rank": code.rank(),
            "free": free,
            "free_rank": rank,
            "size": code.size().to_string(),
        });
    }
    match cli.format(Format::Text) {
        Format::Json => print_json(&info),
        _ => {
            println!("ring: {pir}");
            match n {
                Some(n) => println!("integer model: Z/{n}"),
                None => println!("integer model: none"),
            }
            if let Some(f) = info.get("modulus_polynomial") {
                println!("modulus polynomial (low degree first): {f}");
            }
            if let Some(c) = info.get("code") {
                println!("code components: {}", c["components"]);
                println!("component ranks: {}", c["ranks"]);
                println!("free: {}", c["free"]);
            }
            Ok(())
        }
    }
}

fn cmd_report(cli: &Cli) -> Outcome {
    let ext = cli.extension()?;
    let (len, k, kp) = cli.ranks()?;
    let reports = comparison_report(&ext, len, k, kp, &cli.options())?;
    match cli.format(Format::Json) {
        Format::Json => println!("{}", serde_json::to_string_pretty(&reports)?),
        Format::Csv => print!("{}", reports_to_csv(&reports)),
        Format::Text => print!("{}", reports_to_text(&reports)),
    }
    Ok(())
}

fn cmd_verify(cli: &Cli, strict: bool, only: Option<u8>) -> Outcome {
    let opts = cli.options();
    let outcomes = match only {
        Some(id) => vec![verify::run(id, &opts)?],
        None => verify::run_all(&opts)?,
    };
    if cli.format(Format::Text) == Format::Json {
        let list: Vec<Value> = outcomes
            .iter()
            .map(|o| json!({ "criterion": o.id, "title": o.title, "passed": o.passed, "log": o.log }))
            .collect();
        print_json(&Value::Array(list))?;
    } else {
        for o in &outcomes {
            println!(
                "criterion {}: {} {}",
                o.id,
                if o.passed { "PASS" } else { "FAIL" },
                o.title
            );
            for line in &o.log {
                println!("    {line}");
            }
        }
    }
    if strict && outcomes.iter().any(|o| !o.passed) {
        return Err(Failure::Strict);
    }
    Ok(())
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Binomial => cmd_binomial(cli),
        Command::Enum => cmd_enum(cli),
        Command::Aleph => cmd_aleph(cli),
        Command::Omega => cmd_omega(cli),
        Command::Lyle => cmd_lyle(cli),
        Command::Minimal => cmd_minimal(cli),
        Command::Msets => cmd_msets(cli),
        Command::Decompose => cmd_decompose(cli),
        Command::Restrict => cmd_restrict(cli),
        Command::Trace => cmd_trace(cli),
        Command::Crt => cmd_crt(cli),
        Command::Report => cmd_report(cli),
        Command::Verify { strict, criterion } => cmd_verify(cli, *strict, *criterion),
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::GuardExceeded { .. } => 65,
        Error::CrossCheck(_) => 70,
        Error::Io(_) => 74,
        _ => 64,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Strict) => ExitCode::from(2),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(64)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
