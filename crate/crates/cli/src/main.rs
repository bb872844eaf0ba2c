use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_rational::BigRational;
use serde_json::{json, Value};

use qdissect::modular::{self, Certificate, EtaIdentity, ModularError};
use qdissect::partitions::{self, PartitionError};
use qdissect::qproducts::{parse, QError, QExpr};
use qdissect::verifier::{
    self, certification, parse_records, suite_records_as, verify_all, IdentityRecord, Reading, VerificationReport,
    SUITES,
};

/// Directory for cached certificates.
const CACHE_ENV: &str = "QDISSECT_CACHE_DIR";

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_GUARD: u8 = 3;

#[derive(Parser)]
#[command(name = "qdissect", version, about = "Exact q-series, crank statistics and eta-quotient certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: u64,
    /// Lift the partition enumeration guard.
    #[arg(long, global = true)]
    allow_large: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Expand an expression and print its coefficients.
    Expand {
        expr: String,
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(i64).range(1..))]
        order: i64,
    },
    /// Crank and rank statistics of the partitions of n.
    Mw {
        n: u32,
        #[arg(long, short, default_value_t = 11, value_parser = clap::value_parser!(u32).range(1..))]
        modulus: u32,
    },
    /// Coefficients of q^(Mn+r) in an expression, as a series in q.
    Dissect {
        expr: String,
        #[arg(long, short)]
        modulus: u64,
        #[arg(long, short)]
        residue: u64,
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(i64).range(1..))]
        order: i64,
    },
    /// Run a built-in suite or an identity file.
    Verify {
        /// Suite name, or `all`.
        #[arg(long, conflicts_with = "identity", required_unless_present = "identity")]
        suite: Option<String>,
        /// JSON file with one record or a list of records.
        #[arg(long)]
        identity: Option<PathBuf>,
        /// Overrides the order stored in each record.
        #[arg(long, value_parser = clap::value_parser!(i64).range(1..))]
        order: Option<i64>,
        /// Run the displays exactly as printed, without errata.
        #[arg(long)]
        printed: bool,
    },
    /// Inequivalent cusps of Γ1(N) with their widths.
    Cusps {
        #[arg(long, default_value_t = 121, value_parser = clap::value_parser!(u64).range(1..))]
        level: u64,
    },
    /// The bound B for an identity file or a built-in identity.
    Bound {
        identity: String,
        #[arg(long, default_value_t = 121, value_parser = clap::value_parser!(u64).range(1..))]
        level: u64,
    },
    /// Sturm-type certificate for an identity file or a built-in identity.
    Certify {
        identity: String,
        #[arg(long, default_value_t = 121, value_parser = clap::value_parser!(u64).range(1..))]
        level: u64,
        /// Largest order the expansion may use.
        #[arg(long, value_parser = clap::value_parser!(i64).range(1..))]
        order: Option<i64>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

impl From<QError> for Failure {
    fn from(e: QError) -> Self {
        let code = match e {
            QError::ResourceLimit { .. } => EXIT_GUARD,
            QError::Parse(_) => EXIT_USAGE,
            _ => EXIT_FAIL,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<PartitionError> for Failure {
    fn from(e: PartitionError) -> Self {
        let code = match e {
            PartitionError::ResourceLimit { .. } => EXIT_GUARD,
            _ => EXIT_FAIL,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<ModularError> for Failure {
    fn from(e: ModularError) -> Self {
        Failure::new(EXIT_FAIL, e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    match &cli.command {
        Command::Expand { expr, order } => {
            let e = parse_expr(expr)?;
            let s = verifier::evaluator().eval(&e, *order)?;
            print_series(cli.json, expr, &s);
            Ok(0)
        }
        Command::Dissect { expr, modulus, residue, order } => {
            if *modulus == 0 || residue >= modulus {
                return Err(Failure::new(EXIT_USAGE, "need 0 <= residue < modulus"));
            }
            let e = parse_expr(expr)?;
            let call = QExpr::Call(
                "dissect".into(),
                vec![e, QExpr::int(*modulus as i64), QExpr::int(*residue as i64)],
            );
            let s = verifier::evaluator().eval(&call, *order)?;
            print_series(cli.json, &call.to_string(), &s);
            Ok(0)
        }
        Command::Mw { n, modulus } => cmd_mw(cli, *n, *modulus),
        Command::Verify { suite, identity, order, printed } => cmd_verify(cli, suite.as_deref(), identity.as_ref(), *order, *printed),
        Command::Cusps { level } => {
            let cusps = modular::cusp_set(*level);
            if cli.json {
                let widths: u64 = cusps.iter().map(|c| c.width).sum();
                println!(
                    "{}",
                    json!({"level": level, "count": cusps.len(), "widthSum": widths, "cusps": cusps})
                );
            } else {
                println!("{} cusps of Gamma1({level})", cusps.len());
                for c in &cusps {
                    println!("{}/{}  width {}", c.a, c.c, c.width);
                }
            }
            Ok(0)
        }
        Command::Bound { identity, level } => {
            let id = load_identity(identity, *level)?;
            let k = id.canonical_normalizer()?;
            let (coeffs, fs) = id.normalized(k)?;
            let (b, rows) = modular::compute_b(&fs, *level)?;
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "identity": id.name,
                        "level": level,
                        "B": rat_pq(&b),
                        "constituentCount": coeffs.len(),
                        "perCusp": rows,
                    })
                );
            } else {
                println!("{}: B = {} over {} constituents", id.name, b, coeffs.len());
            }
            Ok(0)
        }
        Command::Certify { identity, level, order } => cmd_certify(cli, identity, *level, *order),
    }
}

fn parse_expr(src: &str) -> Result<QExpr, Failure> {
    parse(src).map_err(|e| Failure::new(EXIT_USAGE, format!("{e}\n{}", e.caret(src))))
}

fn print_series(as_json: bool, label: &str, s: &qdissect::LaurentSeries) {
    // start at q^0 at the latest so leading zeros of a power series show
    let start = s.lo().min(0);
    let coeffs: Vec<String> = (start..s.prec()).map(|n| s.coeff_or_zero(n).to_string()).collect();
    if as_json {
        println!(
            "{}",
            json!({"expr": label, "lo": start, "order": s.prec(), "coefficients": coeffs})
        );
    } else {
        println!("q^{start}: {}", coeffs.join(", "));
    }
}

fn rat_pq(b: &BigRational) -> String {
    format!("{}/{}", b.numer(), b.denom())
}

fn cmd_mw(cli: &Cli, n: u32, m: u32) -> Result<u8, Failure> {
    let st = partitions::stats_table(n, m, cli.allow_large)?;
    let rows = st.rows();
    let weights: Vec<i64> = (1..=(m as i64 - 1) / 2).collect();
    let weighted = partitions::weighted_omega_difference(&st, &weights);
    let note = (n == 0).then_some("crank and rank are undefined for the empty partition; p(0) = 1 is recorded alone");
    if cli.json {
        let mut v = json!({"n": n, "m": m, "p": st.p, "rows": rows, "weightedOmegaDifference": weighted});
        if let Some(note) = note {
            v["note"] = Value::from(note);
        }
        println!("{v}");
    } else {
        println!("n = {n}, m = {m}, p(n) = {}", st.p);
        if let Some(note) = note {
            println!("{note}");
        } else {
            println!("{:>5} {:>10} {:>10} {:>10} {:>10}", "class", "M", "N", "M_omega", "NT");
            for r in &rows {
                println!("{:>5} {:>10} {:>10} {:>10} {:>10}", r.class, r.crank_count, r.rank_count, r.ones_by_crank, r.parts_by_rank);
            }
            println!("sum_r r [M_omega(r) - M_omega(m-r)] = {weighted}");
        }
    }
    Ok(0)
}

fn read_records(path: &PathBuf) -> Result<Vec<IdentityRecord>, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::new(EXIT_USAGE, format!("{}: {e}", path.display())))?;
    let trimmed = text.trim_start();
    let recs = if trimmed.starts_with('[') {
        parse_records(&text).map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))?
    } else {
        vec![serde_json::from_str(&text).map_err(|e| Failure::new(EXIT_USAGE, format!("{}: {e}", path.display())))?]
    };
    Ok(recs)
}

fn cmd_verify(
    cli: &Cli,
    suite: Option<&str>,
    identity: Option<&PathBuf>,
    order: Option<i64>,
    printed: bool,
) -> Result<u8, Failure> {
    let reading = if printed { Reading::Printed } else { Reading::Corrected };
    let records = match (suite, identity) {
        (Some("all"), _) => {
            let mut v = Vec::new();
            for s in SUITES {
                v.extend(suite_records_as(s, reading).map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))?);
            }
            v
        }
        (Some(s), _) => suite_records_as(s, reading).map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))?,
        (None, Some(p)) => read_records(p)?
            .into_iter()
            .map(|r| verifier::with_reading(r, reading))
            .collect(),
        (None, None) => return Err(Failure::new(EXIT_USAGE, "give --suite or --identity")),
    };
    eprintln!("verifying {} records on {} worker(s)", records.len(), cli.jobs);
    let reports = verify_all(&records, order, cli.jobs as usize);
    for r in reports.iter().filter(|r| !r.passed()) {
        eprintln!("FAIL {}", describe_failure(r));
    }
    let passed = reports.iter().filter(|r| r.passed()).count();
    if cli.json {
        println!(
            "{}",
            json!({"total": reports.len(), "passed": passed, "reports": reports})
        );
    } else {
        for r in &reports {
            if r.passed() {
                let errata = if r.errata.is_empty() { String::new() } else { format!(" [errata: {}]", r.errata.join(", ")) };
                println!("PASS {} to order {}{errata}", r.id, r.checked_order);
            } else {
                println!("FAIL {}", describe_failure(r));
            }
        }
        println!("{passed}/{} passed", reports.len());
    }
    if reports.iter().any(|r| r.resource_limited) {
        Ok(EXIT_GUARD)
    } else if passed == reports.len() {
        Ok(0)
    } else {
        Ok(EXIT_FAIL)
    }
}

fn describe_failure(r: &VerificationReport) -> String {
    match (&r.mismatch, &r.reason) {
        (Some(m), _) => format!("{}: first mismatch at q^{}: lhs {} rhs {}", r.id, m.exponent, m.lhs, m.rhs),
        (None, Some(reason)) => format!("{}: {reason}", r.id),
        (None, None) => r.id.clone(),
    }
}

/// A built-in name (`b1.half`, `b3.threehalf`, ...) or a record file.
fn load_identity(name: &str, level: u64) -> Result<EtaIdentity, Failure> {
    if let Some((b, w)) = builtin(name) {
        if level != certification::LEVEL {
            return Err(Failure::new(EXIT_USAGE, format!("{name} lives on level {}", certification::LEVEL)));
        }
        if b == 1 {
            let (h, g) = certification::build_b1_certification_inputs();
            let rec = if w == "half" { h } else { g };
            let mut id = certification::eta_identity(&rec, level)?;
            id.name = name.into();
            return Ok(id);
        }
        let (half, three) = certification::identities_for(b)?;
        return Ok(if w == "half" { half } else { three });
    }
    let path = PathBuf::from(name);
    let recs = read_records(&path)?;
    match recs.as_slice() {
        [rec] => Ok(certification::eta_identity(rec, level)?),
        _ => Err(Failure::new(EXIT_USAGE, format!("{name}: expected exactly one record"))),
    }
}

fn builtin(name: &str) -> Option<(i64, &str)> {
    let (b, w) = name.strip_prefix('b')?.split_once('.')?;
    let b: i64 = b.parse().ok()?;
    ((1..=5).contains(&b) && (w == "half" || w == "threehalf")).then_some((b, w))
}

fn cache_path(id: &EtaIdentity, available: Option<i64>) -> Option<PathBuf> {
    let dir = std::env::var_os(CACHE_ENV)?;
    let mut h = DefaultHasher::new();
    env!("CARGO_PKG_VERSION").hash(&mut h);
    id.name.hash(&mut h);
    id.level.hash(&mut h);
    for (c, m) in &id.terms {
        c.hash(&mut h);
        format!("{m:?}").hash(&mut h);
    }
    available.hash(&mut h);
    Some(PathBuf::from(dir).join(format!("certificate-{:016x}.json", h.finish())))
}

fn cmd_certify(cli: &Cli, name: &str, level: u64, order: Option<i64>) -> Result<u8, Failure> {
    let id = load_identity(name, level)?;
    let cache = cache_path(&id, order);
    let cached: Option<Certificate> = cache
        .as_ref()
        .and_then(|p| std::fs::read_to_string(p).ok())
        .and_then(|t| serde_json::from_str(&t).ok());
    let cert = match cached {
        Some(c) => {
            eprintln!("{}: certificate read from cache", id.name);
            c
        }
        None => {
            let k = id.canonical_normalizer()?;
            eprintln!("{}: {} terms, normalizing by term {k}", id.name, id.terms.len());
            let pool = rayon_pool(cli.jobs as usize);
            let cert = pool.install(|| modular::certify(&id, k, order))?;
            if let Some(p) = &cache {
                let _ = std::fs::create_dir_all(p.parent().expect("cache file has a parent"));
                if let Err(e) = std::fs::write(p, serde_json::to_string(&cert).expect("certificate serializes")) {
                    eprintln!("warning: could not write {}: {e}", p.display());
                }
            }
            cert
        }
    };
    if cli.json {
        println!("{}", serde_json::to_string(&cert).expect("certificate serializes"));
    } else {
        println!(
            "{}: B = {}, checked through q^{} ({} constituents): {}",
            cert.identity,
            cert.b,
            cert.required_order - 1,
            cert.constituent_count,
            if cert.certified() { "certified" } else { "FAILED" }
        );
        if let Some(n) = cert.first_nonzero {
            println!("first nonzero coefficient at q^{n}");
        }
    }
    Ok(if cert.certified() { 0 } else { EXIT_FAIL })
}

fn rayon_pool(jobs: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .expect("thread pool")
}
