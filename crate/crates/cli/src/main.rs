use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Value};

use frobcensus_core::asymptotics::{self, Constants, Regime};
use frobcensus_core::census::{self, CensusOptions, CensusReport};
use frobcensus_core::curve::{self, CurveModel};
use frobcensus_core::frobenius;
use frobcensus_core::gsp;
use frobcensus_core::numth::{self, DEFAULT_TRIAL_BOUND};
use frobcensus_core::sieve::{self, SequenceKind};
use frobcensus_core::Error;

const THREADS_ENV: &str = "FROBCENSUS_THREADS";

#[derive(Parser, Debug)]
#[command(name = "frobcensus", version, about = "Frobenius fields of genus-2 Jacobians and sieve diagnostics")]
struct Cli {
    /// TOML configuration file; flags take precedence over it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads (flag, then FROBCENSUS_THREADS, then config, then 1).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify every prime up to X and write JSONL, CSV and a summary.
    Census(CensusArgs),
    /// Evaluate the square-sieve inequality on census data or random instances.
    Sieve(SieveArgs),
    /// Enumerate GSp_{2g}(F_l) and report orders, buckets and class counts.
    Gsp(GspArgs),
    /// Balanced sieve exponents against the published values.
    Exponents(ExponentArgs),
    /// Quadratic character sums and conic counts mod l.
    Charsum(CharsumArgs),
    /// Quick end-to-end consistency checks.
    Selftest(SelftestArgs),
}

#[derive(Args, Debug)]
struct CensusArgs {
    /// Coefficients c0,c1,... of f, lowest degree first.
    #[arg(long, allow_hyphen_values = true)]
    curve: Option<String>,
    #[arg(long)]
    x: Option<u64>,
    /// Output directory for census.jsonl, census.csv and summary.json.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Allow X up to 10^5.
    #[arg(long)]
    extended: bool,
    #[arg(long)]
    factor_bound: Option<u64>,
}

#[derive(Args, Debug)]
struct SieveArgs {
    #[arg(long, allow_hyphen_values = true)]
    curve: Option<String>,
    #[arg(long)]
    x: Option<u64>,
    /// Sieve level, or "auto" for X^{1/46}.
    #[arg(long)]
    z: Option<String>,
    /// Multiplier d; defaults to the smallest observed d0.
    #[arg(long, allow_hyphen_values = true)]
    d: Option<i64>,
    #[arg(long, default_value = "delta")]
    kind: String,
    /// Smallest admissible sieve set.
    #[arg(long, default_value_t = 2)]
    min_primes: usize,
    /// Run this many random instances instead of the census sequence.
    #[arg(long)]
    fuzz: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
struct GspArgs {
    #[arg(long)]
    g: usize,
    #[arg(long)]
    l: u64,
    /// Also count conjugacy classes.
    #[arg(long)]
    classes: bool,
    #[arg(long, default_value_t = 10)]
    top_k: usize,
}

#[derive(Args, Debug)]
struct ExponentArgs {
    #[arg(long, default_value_t = 2)]
    g: u32,
    /// One regime or "all".
    #[arg(long, default_value = "all")]
    regime: String,
    /// Also evaluate the unconditional profile at this log X.
    #[arg(long)]
    log_x: Option<f64>,
}

#[derive(Args, Debug)]
struct CharsumArgs {
    #[arg(long)]
    l: u64,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<i64>,
}

#[derive(Args, Debug)]
struct SelftestArgs {
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct Config {
    curve: Option<Vec<i64>>,
    x: Option<u64>,
    z: Option<toml::Value>,
    threads: Option<usize>,
    out: Option<PathBuf>,
    factor_bound: Option<u64>,
    seed: Option<u64>,
    constants: Option<Constants>,
}

enum CliError {
    Core(Error),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

fn load_config(path: Option<&Path>) -> CliResult<Config> {
    let Some(path) = path else { return Ok(Config::default()) };
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| Error::invalid(format!("{}: {e}", path.display())).into())
}

fn resolve_threads(flag: Option<usize>, config: &Config) -> CliResult<usize> {
    let env = match std::env::var(THREADS_ENV) {
        Ok(v) => Some(v.trim().parse::<usize>().map_err(|_| Error::invalid(format!("{THREADS_ENV}={v:?} is not a count")))?),
        Err(_) => None,
    };
    let n = flag.or(env).or(config.threads).unwrap_or(1);
    if n == 0 {
        return Err(Error::invalid("thread count must be at least 1").into());
    }
    Ok(n)
}

fn resolve_curve(flag: Option<&str>, config: &Config) -> CliResult<CurveModel> {
    Ok(match (flag, &config.curve) {
        (Some(s), _) => CurveModel::parse(s)?,
        (None, Some(c)) => CurveModel::new(c.clone(), None)?,
        (None, None) => CurveModel::lmfdb_3680_a_29440_1(),
    })
}

fn resolve_x(flag: Option<u64>, config: &Config, default: u64) -> CliResult<u64> {
    let x = flag.or(config.x).unwrap_or(default);
    if x < 2 {
        return Err(Error::invalid(format!("X must be at least 2, got {x}")).into());
    }
    Ok(x)
}

fn print_json(v: &Value) -> CliResult<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v).map_err(|e| CliError::Io(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

fn run_census(curve: &CurveModel, x: u64, threads: usize, extended: bool, factor_bound: u64) -> CliResult<CensusReport> {
    Ok(census::run_census(curve, x, CensusOptions { threads, extended, factor_bound })?)
}

fn cmd_census(args: CensusArgs, config: &Config, threads: usize) -> CliResult<()> {
    let curve = resolve_curve(args.curve.as_deref(), config)?;
    let x = resolve_x(args.x, config, census::DEFAULT_MAX_X)?;
    let factor_bound = args.factor_bound.or(config.factor_bound).unwrap_or(DEFAULT_TRIAL_BOUND);
    let out = args.out.or_else(|| config.out.clone()).unwrap_or_else(|| PathBuf::from("."));
    let report = run_census(&curve, x, threads, args.extended, factor_bound)?;
    std::fs::create_dir_all(&out)?;
    let mut jsonl = BufWriter::new(File::create(out.join("census.jsonl"))?);
    census::write_jsonl(&report, &mut jsonl)?;
    jsonl.flush()?;
    let mut csv = BufWriter::new(File::create(out.join("census.csv"))?);
    census::write_csv(&report, &mut csv)?;
    csv.flush()?;
    let summary = census::summary_json(&report)?;
    let text = serde_json::to_string_pretty(&summary).map_err(|e| CliError::Io(e.to_string()))?;
    std::fs::write(out.join("summary.json"), format!("{text}\n"))?;
    print_json(&summary)
}

fn parse_z(flag: Option<&str>, config: &Config, x: u64) -> CliResult<f64> {
    let auto = (x as f64).powf(1.0 / 46.0);
    let from_str = |s: &str| -> CliResult<f64> {
        if s == "auto" {
            return Ok(auto);
        }
        s.parse::<f64>().map_err(|_| Error::invalid(format!("z must be a number or \"auto\", got {s:?}")).into())
    };
    match (flag, &config.z) {
        (Some(s), _) => from_str(s),
        (None, Some(toml::Value::String(s))) => from_str(s),
        (None, Some(toml::Value::Float(f))) => Ok(*f),
        (None, Some(toml::Value::Integer(i))) => Ok(*i as f64),
        (None, Some(v)) => Err(Error::invalid(format!("config z has unsupported value {v}")).into()),
        (None, None) => Ok(auto),
    }
}

fn cmd_sieve(args: SieveArgs, config: &Config, threads: usize) -> CliResult<()> {
    if let Some(n) = args.fuzz {
        let seed = args.seed.or(config.seed).unwrap_or(0);
        return print_json(&sieve_fuzz(n, seed)?);
    }
    let kind = match args.kind.as_str() {
        "delta" => SequenceKind::Delta,
        "gamma" => SequenceKind::Gamma,
        other => return Err(Error::invalid(format!("unknown sequence kind {other:?}")).into()),
    };
    let curve = resolve_curve(args.curve.as_deref(), config)?;
    let x = resolve_x(args.x, config, 5000)?;
    let factor_bound = config.factor_bound.unwrap_or(DEFAULT_TRIAL_BOUND);
    let report = run_census(&curve, x, threads, false, factor_bound)?;
    let d = match args.d {
        Some(d) => d,
        None => *report
            .d0_multiplicities
            .keys()
            .next()
            .ok_or_else(|| Error::invalid(format!("no ordinary simple primes up to {x}; pass --d")))?,
    };
    if d == 0 {
        return Err(Error::invalid("d must be nonzero").into());
    }
    let z = parse_z(args.z.as_deref(), config, x)?;
    let sp = sieve::sieve_primes(z, d as i128, &curve, args.min_primes)?;
    let seq = sieve::paper_sequence(&report, d, kind);
    if seq.is_empty() {
        return Err(Error::invalid("the sieved sequence is empty").into());
    }
    let r = sieve::sieve_terms(&seq, &sp.primes)?;
    let pi_f = census::pi_f(&report, d);
    let mut out = r.to_json();
    let obj = out.as_object_mut().expect("report serializes to an object");
    obj.insert("schema".into(), json!(1));
    obj.insert("X".into(), json!(x));
    obj.insert("d".into(), json!(d));
    obj.insert("kind".into(), json!(kind));
    obj.insert("z".into(), json!(z));
    obj.insert("sieve_primes".into(), json!(sp.primes));
    obj.insert("sieve_primes_fallback".into(), json!(sp.fallback));
    obj.insert("pi_F".into(), json!(pi_f));
    obj.insert("s_exact_ge_pi_F".into(), json!(r.s_exact >= pi_f));
    print_json(&out)
}

/// Random sequences mixing squares and non-squares, with random odd-prime sieve sets.
fn random_instance(rng: &mut ChaCha8Rng) -> (Vec<i128>, Vec<u64>) {
    let odd_primes: Vec<u64> = numth::primes_up_to(200).into_iter().filter(|&p| p != 2).collect();
    let len = rng.gen_range(1..=60);
    let a = (0..len)
        .map(|_| {
            if rng.gen_bool(0.3) {
                let r: i128 = rng.gen_range(1..=1000);
                r * r
            } else {
                let v: i128 = rng.gen_range(1..=1_000_000);
                if rng.gen_bool(0.2) {
                    -v
                } else {
                    v
                }
            }
        })
        .collect();
    let k = rng.gen_range(1..=12);
    let mut primes: Vec<u64> = rand::seq::index::sample(rng, odd_primes.len(), k).into_iter().map(|i| odd_primes[i]).collect();
    primes.sort_unstable();
    (a, primes)
}

fn sieve_fuzz(n: usize, seed: u64) -> CliResult<Value> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = Vec::new();
    for i in 0..n {
        let (a, primes) = random_instance(&mut rng);
        let r = sieve::sieve_terms(&a, &primes)?;
        if !r.holds() {
            violations.push(json!({"instance": i, "report": r.to_json()}));
        }
    }
    Ok(json!({
        "schema": 1,
        "seed": seed,
        "instances": n,
        "violations": violations,
        "holds": violations.is_empty(),
    }))
}

fn cmd_gsp(args: GspArgs) -> CliResult<()> {
    let c = gsp::gsp_census(args.g, args.l, args.classes)?;
    let mut out = c.to_json(args.top_k);
    if let (Some(sp), Some(q)) = (c.class_count_sp, Some(args.l)) {
        out["class_count_sp_in_window"] = json!(gsp::class_count_window(sp, q, args.g as u32));
    }
    print_json(&out)
}

fn cmd_exponents(args: ExponentArgs, config: &Config) -> CliResult<()> {
    let regimes: Vec<Regime> = if args.regime.eq_ignore_ascii_case("all") {
        Regime::ALL.to_vec()
    } else {
        vec![Regime::parse(&args.regime)?]
    };
    let rows = asymptotics::exponent_table(args.g, &regimes)?;
    let mut out = json!({"schema": 1, "g": args.g, "rows": rows});
    if let Some(log_x) = args.log_x {
        let constants = config.constants.unwrap_or_default();
        let p = asymptotics::unconditional_profile(args.g, log_x, &constants)?;
        out["unconditional_at"] = serde_json::to_value(p).map_err(|e| CliError::Io(e.to_string()))?;
    }
    print_json(&out)
}

fn cmd_charsum(args: CharsumArgs) -> CliResult<()> {
    let l = args.l;
    if l == 2 || !numth::is_prime(l) {
        return Err(Error::invalid(format!("{l} is not an odd prime")).into());
    }
    match (args.a, args.b, args.c) {
        (Some(a), Some(b), Some(c)) => {
            let closed = sieve::quad_char_sum(a, b, c, l)?;
            let direct = sieve::quad_char_sum_direct(a, b, c, l);
            print_json(&json!({
                "schema": 1,
                "l": l, "a": a, "b": b, "c": c,
                "sum_closed_form": closed,
                "sum_direct": direct,
                "conic_points": sieve::conic_count(a, b, c, l)?,
                "agree": closed == direct,
            }))
        }
        (None, None, None) => {
            if l > 97 {
                return Err(Error::capacity("exhaustive check is limited to l <= 97").into());
            }
            let li = l as i64;
            let mut mismatches = 0u64;
            let mut smooth = 0u64;
            let mut smooth_ok = 0u64;
            for a in 0..li {
                for b in 0..li {
                    for c in 0..li {
                        if sieve::quad_char_sum(a, b, c, l)? != sieve::quad_char_sum_direct(a, b, c, l) {
                            mismatches += 1;
                        }
                        if (a * (b * b - 4 * a * c)).rem_euclid(li) != 0 {
                            smooth += 1;
                            smooth_ok += (sieve::conic_count(a, b, c, l)? == l + 1) as u64;
                        }
                    }
                }
            }
            print_json(&json!({
                "schema": 1,
                "l": l,
                "triples": li * li * li,
                "char_sum_mismatches": mismatches,
                "smooth_conics": smooth,
                "smooth_conics_with_l_plus_1_points": smooth_ok,
                "holds": mismatches == 0 && smooth == smooth_ok,
            }))
        }
        _ => Err(Error::invalid("give all of --a, --b, --c or none").into()),
    }
}

fn cmd_selftest(args: SelftestArgs, config: &Config) -> CliResult<()> {
    let seed = args.seed.or(config.seed).unwrap_or(0);
    let curve = CurveModel::lmfdb_3680_a_29440_1();
    let mut checks: Vec<(&str, bool)> = Vec::new();

    let counts_ok = [3u64, 7, 11, 13].iter().all(|&p| {
        (1..=2).all(|k| matches!((curve::count_points(&curve, p, k), curve::count_points_slow(&curve, p, k)), (Ok(a), Ok(b)) if a == b))
    });
    checks.push(("point counts agree with field enumeration", counts_ok));

    let g2 = frobenius::gamma_symbolic(2)?;
    checks.push(("genus-2 gamma matches the closed form", g2.expanded == frobenius::printed_gamma_g2()));

    let report = run_census(&curve, 500, 1, false, DEFAULT_TRIAL_BOUND)?;
    checks.push(("census to 500 has max multiplicity <= 1", report.max_field_multiplicity() <= 1));

    let fuzz = sieve_fuzz(200, seed)?;
    checks.push(("square sieve holds on random instances", fuzz["holds"] == json!(true)));

    let e = gsp::enumerate(1, 5, gsp::Which::Sp)?;
    let orbit = gsp::conjugacy_classes(&e.space, &e.elements);
    let canon = gsp::conjugacy_classes_canonical(&e.space, &e.elements);
    checks.push(("Sp2(F5) class counts agree", orbit == canon && orbit == 9));

    let theta = asymptotics::optimal_theta(Regime::Grh, 2)?.theta;
    checks.push(("GRH exponent at g = 2 is 1/46", theta == num_rational::Rational64::new(1, 46)));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cs_ok = (0..500).all(|_| {
        let l = [3u64, 5, 7, 11, 13][rng.gen_range(0..5)];
        let (a, b, c) = (rng.gen_range(-50..50), rng.gen_range(-50..50), rng.gen_range(-50..50));
        sieve::quad_char_sum(a, b, c, l).ok() == Some(sieve::quad_char_sum_direct(a, b, c, l))
    });
    checks.push(("character sums match direct evaluation", cs_ok));

    let all = checks.iter().all(|c| c.1);
    print_json(&json!({
        "schema": 1,
        "seed": seed,
        "checks": checks.iter().map(|(n, ok)| json!({"name": n, "pass": ok})).collect::<Vec<_>>(),
        "pass": all,
    }))?;
    if all {
        Ok(())
    } else {
        Err(Error::consistency("selftest failed").into())
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let config = load_config(cli.config.as_deref())?;
    let threads = resolve_threads(cli.threads, &config)?;
    match cli.command {
        Command::Census(a) => cmd_census(a, &config, threads),
        Command::Sieve(a) => cmd_sieve(a, &config, threads),
        Command::Gsp(a) => cmd_gsp(a),
        Command::Exponents(a) => cmd_exponents(a, &config),
        Command::Charsum(a) => cmd_charsum(a),
        Command::Selftest(a) => cmd_selftest(a, &config),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Core(e)) => {
            eprintln!("frobcensus: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
        Err(CliError::Io(msg)) => {
            eprintln!("frobcensus: I/O error: {msg}");
            ExitCode::from(1)
        }
    }
}
