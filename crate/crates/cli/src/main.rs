//! Command-line front end: eigenvalue enumeration, zero localization, the
//! identity suite, coefficient quadruples, elimination certificates, gap
//! scans, and triple refutation sweeps.
//!
//! Exit codes: 0 on success (including a structurally impossible adjacent
//! refutation request), 1 on errors, 3 when a refutation sweep leaves
//! inconclusive checks.

mod cache;

use cache::Cache;
use clap::{Parser, Subcommand, ValueEnum};
use crossbessel::algebra::ExactRational;
use crossbessel::ball::{decimal_digits_for_bits, parse_decimal, CertifiedReal, PrecisionConfig};
use crossbessel::elim::{eliminate, ElimError, TripleError, TripleIndex};
use crossbessel::spectrum::{
    eigenvalues, find_zeros, gap_scan, refute_all_triples, SpectrumError, ZeroRecord,
};
use crossbessel::verify::{run_identity_suite, GridConfig};
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "crossbessel",
    version,
    about = "Certified Bessel cross-product computations for the clamped-disk spectrum"
)]
struct Cli {
    /// Working precision in bits (64..=65536).
    #[arg(long, global = true, default_value_t = 256)]
    precision_bits: u32,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Cache directory; CROSSBESSEL_CACHE_DIR is the fallback. Without
    /// either, nothing is persisted.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the smallest eigenvalues across all orders.
    Eig {
        #[arg(long)]
        count: u32,
    },
    /// Locate all zeros of the order-m cross product in (0, x-max].
    Zeros {
        #[arg(short)]
        m: u32,
        #[arg(long)]
        x_max: String,
    },
    /// Run the identity suite over the standard grid.
    Verify {
        /// Use the small smoke-test grid instead.
        #[arg(long)]
        quick: bool,
    },
    /// Print one coefficient quadruple in canonical form.
    Coeffs {
        #[arg(short, allow_hyphen_values = true)]
        m: i64,
        #[arg(short)]
        n: u32,
    },
    /// Build and print the elimination certificate for an order triple.
    Certify {
        #[arg(long)]
        m1: u32,
        #[arg(long)]
        m2: u32,
        #[arg(long)]
        m3: u32,
    },
    /// Certify that no two zeros of distinct orders coincide; report the
    /// smallest cross-order gaps.
    Scan {
        #[arg(long)]
        m_max: u32,
        #[arg(long)]
        x_max: String,
    },
    /// Run every triple's refutation certificate against the zeros of its
    /// middle order.
    Refute {
        #[arg(long)]
        m_max: u32,
        #[arg(long)]
        x_max: String,
    },
}

struct Failure(String);

impl From<SpectrumError> for Failure {
    fn from(e: SpectrumError) -> Self {
        Failure(e.to_string())
    }
}

impl From<ElimError> for Failure {
    fn from(e: ElimError) -> Self {
        Failure(e.to_string())
    }
}

impl From<TripleError> for Failure {
    fn from(e: TripleError) -> Self {
        Failure(e.to_string())
    }
}

fn enclosure_json(v: &CertifiedReal, bits: u32) -> Value {
    let (mid, rad) = v.decimal_strings(decimal_digits_for_bits(bits));
    json!({ "mid": mid, "rad": rad, "bits": bits })
}

fn zero_json(z: &ZeroRecord, bits: u32) -> Value {
    json!({
        "m": z.m,
        "k": z.k,
        "degeneracy": z.degeneracy,
        "zero": enclosure_json(&z.enclosure, bits),
        "lambda": enclosure_json(&z.lambda, bits),
    })
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn zero_csv(records: &[ZeroRecord], bits: u32) -> String {
    let digits = decimal_digits_for_bits(bits);
    let mut out = String::from("m,k,degeneracy,zero_mid,zero_rad,lambda_mid,lambda_rad\n");
    for z in records {
        let (zm, zr) = z.enclosure.decimal_strings(digits);
        let (lm, lr) = z.lambda.decimal_strings(digits);
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            z.m, z.k, z.degeneracy, zm, zr, lm, lr
        ));
    }
    out
}

fn parse_x_max(text: &str) -> Result<ExactRational, Failure> {
    let v =
        parse_decimal(text).ok_or_else(|| Failure(format!("invalid x-max value {text:?}")))?;
    let max: ExactRational =
        parse_decimal(&crossbessel::spectrum::SCAN_CEILING.to_string()).expect("ceiling parses");
    let zero: ExactRational = parse_decimal("0").expect("zero parses");
    if v <= zero || v > max {
        return Err(Failure(format!(
            "x-max must be in (0, {}], got {text}",
            crossbessel::spectrum::SCAN_CEILING
        )));
    }
    Ok(v)
}

fn open_cache(cli: &Cli) -> Cache {
    let dir = cli
        .cache_dir
        .clone()
        .or_else(|| std::env::var_os("CROSSBESSEL_CACHE_DIR").map(PathBuf::from));
    match dir {
        Some(d) => Cache::load(&d),
        None => Cache::empty(),
    }
}

fn run(cli: &Cli) -> Result<ExitCode, Failure> {
    if !(64..=65536).contains(&cli.precision_bits) {
        return Err(Failure(format!(
            "precision-bits must be in 64..=65536, got {}",
            cli.precision_bits
        )));
    }
    let cfg = PrecisionConfig::new(cli.precision_bits);
    let bits = cli.precision_bits;
    let digits = decimal_digits_for_bits(bits);

    match &cli.command {
        Command::Eig { count } => {
            if !(1..=500).contains(count) {
                return Err(Failure("count must be in 1..=500".into()));
            }
            let eigs = eigenvalues(*count, cfg)?;
            match cli.format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&Value::Array(
                        eigs.iter().map(|z| zero_json(z, bits)).collect()
                    ))
                    .expect("report serializes")
                ),
                Format::Csv => print!("{}", zero_csv(&eigs, bits)),
            }
        }
        Command::Zeros { m, x_max } => {
            let zs = find_zeros(*m, &parse_x_max(x_max)?, cfg)?;
            match cli.format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&Value::Array(
                        zs.iter().map(|z| zero_json(z, bits)).collect()
                    ))
                    .expect("report serializes")
                ),
                Format::Csv => print!("{}", zero_csv(&zs, bits)),
            }
        }
        Command::Verify { quick } => {
            let grid = if *quick {
                GridConfig::quick()
            } else {
                GridConfig::standard()
            };
            let reports = run_identity_suite(&grid, cfg);
            let all_green = reports.iter().all(|r| r.passed());
            match cli.format {
                Format::Json => {
                    let body: Vec<Value> = reports
                        .iter()
                        .map(|r| {
                            json!({
                                "identity": r.identity_name,
                                "grid": r.grid,
                                "checks": r.checks,
                                "max_residual_radius":
                                    enclosure_json(&r.max_residual_radius, bits),
                                "failures": r.failures.iter().map(|f| json!({
                                    "m": f.m,
                                    "n": f.n,
                                    "x": f.x.to_string(),
                                    "kind": format!("{:?}", f.kind),
                                })).collect::<Vec<_>>(),
                            })
                        })
                        .collect();
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&json!({
                            "all_passed": all_green,
                            "identities": body,
                        }))
                        .expect("report serializes")
                    );
                }
                Format::Csv => {
                    println!("identity,checks,max_residual_radius,failures");
                    for r in &reports {
                        let (rad, _) = r.max_residual_radius.decimal_strings(digits);
                        println!(
                            "{},{},{},{}",
                            csv_field(r.identity_name),
                            r.checks,
                            rad,
                            r.failures.len()
                        );
                    }
                }
            }
            if !all_green {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Coeffs { m, n } => {
            if m.abs() > 512 || *n > 64 {
                return Err(Failure("supported range is |m| <= 512, n <= 64".into()));
            }
            let mut cache = open_cache(cli);
            let quad = cache.table.quad(*m, *n).clone();
            match cli.format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "m": quad.m,
                        "n": quad.n,
                        "a": quad.a.to_string(),
                        "b": quad.b.to_string(),
                        "b_tilde": quad.b_tilde.to_string(),
                        "c": quad.c.to_string(),
                    }))
                    .expect("report serializes")
                ),
                Format::Csv => {
                    println!("m,n,a,b,b_tilde,c");
                    println!(
                        "{},{},{},{},{},{}",
                        quad.m,
                        quad.n,
                        csv_field(&quad.a.to_string()),
                        csv_field(&quad.b.to_string()),
                        csv_field(&quad.b_tilde.to_string()),
                        csv_field(&quad.c.to_string()),
                    );
                }
            }
            cache.save();
        }
        Command::Certify { m1, m2, m3 } => {
            let triple = match TripleIndex::new(*m1, *m2, *m3) {
                Ok(t) => t,
                Err(TripleError::AdjacentOrders(a, b)) => {
                    // Nothing to certify: cross products of orders one
                    // apart never share a positive zero, so the request is
                    // settled without a certificate.
                    println!(
                        "orders {a} and {b} are adjacent; no common zero is possible, \
                         no certificate needed"
                    );
                    return Ok(ExitCode::SUCCESS);
                }
                Err(e) => return Err(e.into()),
            };
            let mut cache = open_cache(cli);
            let cached = cache
                .certificates
                .iter()
                .find(|c| c.triple == triple)
                .cloned();
            let cert = match cached {
                Some(c) => c,
                None => {
                    let c = eliminate(triple, &mut cache.table)?;
                    cache.certificates.push(c.clone());
                    c
                }
            };
            match cli.format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "triple": cert.triple.orders(),
                        "depths": { "l": cert.triple.l(), "n": cert.triple.n() },
                        "q_up": quadratic_json(&cert.q_up),
                        "q_down": quadratic_json(&cert.q_down),
                        "lin_coeff": cert.lin_coeff.to_string(),
                        "lin_const": cert.lin_const.to_string(),
                        "refutation": cert.refutation.to_string(),
                        "refutation_constant": cert.refutation_constant.to_string(),
                        "stripped_x_power": cert.stripped_x_power,
                    }))
                    .expect("certificate serializes")
                ),
                Format::Csv => {
                    println!("field,value");
                    let (o1, o2, o3) = cert.triple.orders();
                    for (k, v) in [
                        ("triple", format!("{o1} {o2} {o3}")),
                        ("lin_coeff", cert.lin_coeff.to_string()),
                        ("lin_const", cert.lin_const.to_string()),
                        ("refutation", cert.refutation.to_string()),
                        ("refutation_constant", cert.refutation_constant.to_string()),
                        ("stripped_x_power", cert.stripped_x_power.to_string()),
                    ] {
                        println!("{k},{}", csv_field(&v));
                    }
                }
            }
            cache.save();
        }
        Command::Scan { m_max, x_max } => {
            if *m_max > 32 {
                return Err(Failure("scan supports m-max <= 32".into()));
            }
            let report = gap_scan(*m_max, &parse_x_max(x_max)?, cfg)?;
            match cli.format {
                Format::Json => {
                    let pairs: Vec<Value> = report
                        .pairs
                        .iter()
                        .map(|p| {
                            json!({
                                "first": zero_json(&p.first, bits),
                                "second": zero_json(&p.second, bits),
                                "gap": enclosure_json(&p.gap, bits),
                            })
                        })
                        .collect();
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&json!({
                            "m_max": report.m_max,
                            "min_gap": report
                                .min_gap
                                .as_ref()
                                .map(|g| enclosure_json(g, bits)),
                            "pairs": pairs,
                        }))
                        .expect("report serializes")
                    );
                }
                Format::Csv => {
                    println!("m_first,k_first,m_second,k_second,gap_mid,gap_rad");
                    for p in &report.pairs {
                        let (gm, gr) = p.gap.decimal_strings(digits);
                        println!(
                            "{},{},{},{},{},{}",
                            p.first.m, p.first.k, p.second.m, p.second.k, gm, gr
                        );
                    }
                }
            }
        }
        Command::Refute { m_max, x_max } => {
            if *m_max > 16 {
                return Err(Failure("refute supports m-max <= 16".into()));
            }
            let report = refute_all_triples(*m_max, &parse_x_max(x_max)?, cfg)?;
            let inconclusive = !report.inconclusive.is_empty();
            match cli.format {
                Format::Json => {
                    let unresolved: Vec<Value> = report
                        .inconclusive
                        .iter()
                        .map(|c| {
                            json!({
                                "triple": c.triple.orders(),
                                "zero": zero_json(&c.zero, bits),
                                "outcome": "INCONCLUSIVE",
                            })
                        })
                        .collect();
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&json!({
                            "m_max": report.m_max,
                            "triples": report.triple_count,
                            "checks": report.checks,
                            "refuted": report.refuted,
                            "inconclusive": unresolved,
                        }))
                        .expect("report serializes")
                    );
                }
                Format::Csv => {
                    println!("m1,m2,m3,zero_m,zero_k,outcome");
                    for c in &report.inconclusive {
                        let (o1, o2, o3) = c.triple.orders();
                        println!("{o1},{o2},{o3},{},{},INCONCLUSIVE", c.zero.m, c.zero.k);
                    }
                    println!(
                        "# {} of {} checks refuted across {} triples",
                        report.refuted, report.checks, report.triple_count
                    );
                }
            }
            if inconclusive {
                return Ok(ExitCode::from(3));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn quadratic_json(q: &crossbessel::algebra::Quadratic) -> Value {
    json!({
        "a": q.a.to_string(),
        "b": q.b.to_string(),
        "c": q.c.to_string(),
    })
}

fn main() -> ExitCode {
    // Die quietly when the reader of a pipeline closes early, as cat does;
    // the default Rust handler turns EPIPE into a panic.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(Failure(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}
