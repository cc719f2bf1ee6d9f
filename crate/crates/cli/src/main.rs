use std::process::ExitCode;
use std::sync::mpsc;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};
use simplexdet_core::asymptotics::per_interval;
use simplexdet_core::classifier::{ClassifyOptions, Route, Tri, Verdict};
use simplexdet_core::construction::{build_dkst, build_generalized};
use simplexdet_core::uepoly::{evaluate_dual, log2_rational, pue_of};
use simplexdet_core::weights::weight_distribution;
use simplexdet_core::{Error, Result};
use simplexdet_cli::cache::Cache;
use simplexdet_cli::compute::{classify_cached, fresh, scan, ScanMode};
use simplexdet_cli::fig1::{fig1_csv, fig1_summary};
use simplexdet_cli::output::{big, render_all, Format, Table};
use simplexdet_cli::tables::{phi_tables, run_table, Caps};
use simplexdet_cli::{exit_code, EXIT_BUDGET, EXIT_INTERNAL, EXIT_OK};

#[derive(Parser)]
#[command(name = "simplexdet", version, about = "Undetected-error analysis of punctured simplex codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MatrixFormat {
    Pbm,
    Json,
    Txt,
}

#[derive(Clone, Copy, ValueEnum)]
enum RouteArg {
    Auto,
    Sparse,
    Dense,
}

impl From<RouteArg> for Route {
    fn from(r: RouteArg) -> Route {
        match r {
            RouteArg::Auto => Route::Auto,
            RouteArg::Sparse => Route::Sparse,
            RouteArg::Dense => Route::Dense,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the generator matrix of S_{n,k}.
    Construct {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u64,
        /// Descending-column variant instead of the H_k prefix.
        #[arg(long)]
        dkst: bool,
        #[arg(long, value_enum, default_value = "txt")]
        format: MatrixFormat,
    },
    /// Weight distribution of S_{n,k}.
    Weights {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Exact undetected-error probability at a rational p.
    Pue {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u64,
        /// Crossover probability as NUM/DEN.
        #[arg(long)]
        p: String,
        #[arg(long)]
        dual: bool,
    },
    /// Verdict for one code as JSON.
    Classify {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        dual: bool,
        /// Wall-clock limit in seconds; an undecided verdict exits with 3.
        #[arg(long)]
        budget: Option<f64>,
        #[arg(long, value_enum, default_value = "auto")]
        route: RouteArg,
    },
    /// Verdicts for a range of lengths as CSV, in ascending n.
    Scan {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
        #[arg(long, value_enum, default_value = "full")]
        mode: ScanMode,
        #[arg(long)]
        budget: Option<f64>,
        #[arg(long, value_enum, default_value = "auto")]
        route: RouteArg,
    },
    /// K(m) for m up to --max-m (table 2).
    Kofm {
        #[arg(long, default_value_t = 356)]
        max_m: u32,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        budget: Option<f64>,
    },
    /// Lengths where the minimum-weight criterion holds, by band (table 3).
    Perscan {
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Threshold quantities for one k (table 6).
    Theta {
        #[arg(long)]
        k: u32,
        /// Also run the full properness scan for theta(k).
        #[arg(long)]
        full: bool,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Count of proper lengths and the non-proper ranges (tables 7 and 8).
    Phi {
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Reproduce a published table and diff it against the vendored fixture.
    Table {
        /// Table number, 1 to 8.
        id: u32,
        #[arg(long)]
        k_min: Option<u32>,
        #[arg(long)]
        k_max: Option<u32>,
        /// Band for table 1, largest m for table 2.
        #[arg(long)]
        m: Option<u32>,
        /// Largest k given the full scan in table 6.
        #[arg(long)]
        full_max: Option<u32>,
        #[arg(long)]
        budget: Option<f64>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Plot data for P_ue and its terms (CSV on stdout, summary on stderr).
    Fig1 {
        #[arg(long, default_value_t = 9)]
        k: u32,
        #[arg(long, default_value_t = 320)]
        n: u64,
        #[arg(long, default_value_t = 200)]
        samples: u64,
    },
}

fn deadline(seconds: Option<f64>) -> Option<Instant> {
    seconds.map(|s| Instant::now() + Duration::from_secs_f64(s.max(0.0)))
}

fn parse_p(s: &str) -> Result<BigRational> {
    let bad = || Error::Parameter(format!("--p expects NUM/DEN, got {s:?}"));
    let (a, b) = s.split_once('/').unwrap_or((s, "1"));
    let a: BigInt = a.trim().parse().map_err(|_| bad())?;
    let b: BigInt = b.trim().parse().map_err(|_| bad())?;
    if b == BigInt::from(0) {
        return Err(bad());
    }
    Ok(BigRational::new(a, b))
}

/// Output text plus the exit code it should end with.
struct Outcome {
    text: String,
    code: i32,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, code: EXIT_OK }
    }

    fn tables(tables: &[Table], format: Format) -> Self {
        let code = if tables.iter().any(|t| t.truncated.is_some()) { EXIT_BUDGET } else { EXIT_OK };
        Outcome { text: render_all(tables, format), code }
    }
}

fn pretty(v: &Value) -> String {
    format!("{}\n", serde_json::to_string_pretty(v).expect("serialisable"))
}

fn with_cache<T>(f: impl FnOnce(&mut Cache) -> Result<T>, opts: ClassifyOptions) -> Result<T> {
    let mut cache = Cache::open(&Cache::default_dir())?;
    if cache.corrupted > 0 {
        eprintln!("warning: ignored {} corrupted cache records in {}", cache.corrupted, cache.path().display());
    }
    let out = f(&mut cache)?;
    let checked = cache.reverify(&mut rand::thread_rng(), |k, n, v| fresh(k, n, v, &opts, Some(&cache)))?;
    if checked > 0 {
        eprintln!("re-verified {checked} cached verdicts");
    }
    Ok(out)
}

fn unknown_verdict(k: u32, n: u64, dual: bool) -> Value {
    json!({
        "k": k, "n": n, "dual": dual,
        "proper": Tri::Unknown, "good": Tri::Unknown, "satisfactory": Tri::Unknown,
        "ugly_by_per": Value::Null, "ugly_witness_weight": Value::Null,
        "decided_by": Value::Null, "budget_exhausted": true
    })
}

fn classify_cmd(k: u32, n: u64, dual: bool, budget: Option<f64>, opts: ClassifyOptions) -> Result<Outcome> {
    let (tx, rx) = mpsc::channel();
    std::thread::spawn(move || {
        let _ = tx.send(with_cache(|c| classify_cached(c, k, n, dual, &opts), opts));
    });
    let got: Option<Result<Verdict>> = match budget {
        Some(s) => rx.recv_timeout(Duration::from_secs_f64(s.max(0.0))).ok(),
        None => rx.recv().ok(),
    };
    match got {
        Some(r) => {
            let v = r?;
            let undecided = v.proper == Tri::Unknown || v.satisfactory == Tri::Unknown;
            let code = if undecided { EXIT_BUDGET } else { EXIT_OK };
            Ok(Outcome { text: pretty(&serde_json::to_value(&v).expect("serialisable")), code })
        }
        None => Ok(Outcome { text: pretty(&unknown_verdict(k, n, dual)), code: EXIT_BUDGET }),
    }
}

fn construct_cmd(k: u32, n: u64, dkst: bool, format: MatrixFormat) -> Result<String> {
    let g = if dkst { build_dkst(k, n)? } else { build_generalized(k, n)? };
    let rows = g.row_strings();
    Ok(match format {
        MatrixFormat::Txt => rows.iter().map(|r| format!("{r}\n")).collect(),
        MatrixFormat::Json => pretty(&json!({ "k": k, "n": n, "rows": rows })),
        MatrixFormat::Pbm => {
            let mut s = format!("P1\n{} {}\n", g.cols(), g.rows());
            for r in &rows {
                let bits: Vec<String> = r.chars().map(String::from).collect();
                s.push_str(&bits.join(" "));
                s.push('\n');
            }
            s
        }
    })
}

fn weights_cmd(k: u32, n: u64, format: Format) -> Result<String> {
    let d = weight_distribution(k, n)?;
    Ok(match format {
        Format::Json => {
            let a: serde_json::Map<String, Value> = d.iter().map(|(w, c)| (w.to_string(), big(c))).collect();
            pretty(&json!({ "k": k, "n": n, "d": d.min_weight(), "A": a }))
        }
        Format::Csv => {
            let mut s = String::from("w,a_w\n");
            for (w, c) in d.iter() {
                s.push_str(&format!("{w},{c}\n"));
            }
            s
        }
    })
}

fn pue_cmd(k: u32, n: u64, p: &str, dual: bool) -> Result<String> {
    let p = parse_p(p)?;
    let v = if dual { evaluate_dual(k, n, &p)? } else { pue_of(k, n)?.evaluate(&p)? };
    Ok(pretty(&json!({
        "k": k, "n": n, "p": p.to_string(), "dual": dual,
        "value": v.to_string(), "log2": log2_rational(&v),
    })))
}

fn caps_for(id: u32, k_min: Option<u32>, k_max: Option<u32>, m: Option<u32>, full_max: Option<u32>, budget: Option<f64>) -> Caps {
    let mut c = Caps::defaults(id);
    if let Some(v) = k_min {
        c.k_min = v;
        c.k_max = c.k_max.max(v);
    }
    if let Some(v) = k_max {
        c.k_max = v;
    }
    if let Some(v) = m {
        c.m = v;
    }
    if let Some(v) = full_max {
        c.full_max = v;
    }
    c.deadline = deadline(budget);
    c
}

fn run(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Construct { k, n, dkst, format } => construct_cmd(k, n, dkst, format).map(Outcome::ok),
        Command::Weights { k, n, format } => weights_cmd(k, n, format).map(Outcome::ok),
        Command::Pue { k, n, p, dual } => pue_cmd(k, n, &p, dual).map(Outcome::ok),
        Command::Classify { k, n, dual, budget, route } => {
            classify_cmd(k, n, dual, budget, ClassifyOptions { route: route.into(), ..Default::default() })
        }
        Command::Scan { k, from, to, mode, budget, route } => {
            let opts = ClassifyOptions { route: route.into(), ..Default::default() };
            let t = with_cache(|c| scan(c, k, from, to, mode, &opts, deadline(budget)), opts)?;
            Ok(Outcome::tables(&[t], Format::Csv))
        }
        Command::Kofm { max_m, format, budget } => {
            let t = run_table(2, &caps_for(2, None, None, Some(max_m), None, budget))?;
            Ok(Outcome::tables(&[t], format))
        }
        Command::Perscan { k, format } => {
            let mut t = run_table(3, &caps_for(3, Some(k), Some(k), None, None, None))?;
            // Attach the certified interval report for the bands that have one.
            t.columns.push("beta1_vs_ceil_gamma1".into());
            for i in 0..t.rows.len() {
                let m = t.get(i, "m").and_then(Value::as_u64).unwrap_or(0) as u32;
                let cell = match per_interval(k, m, 256) {
                    Ok(Some(r)) => json!(format!("{}<={}", r.beta1, r.ceil_gamma1)),
                    _ => Value::Null,
                };
                t.rows[i].push(cell);
            }
            Ok(Outcome::tables(&[t], format))
        }
        Command::Theta { k, full, format } => {
            let mut caps = caps_for(6, Some(k), Some(k), None, None, None);
            caps.full_max = if full { k } else { 0 };
            Ok(Outcome::tables(&[run_table(6, &caps)?], format))
        }
        Command::Phi { k, format } => {
            let (t7, t8) = phi_tables(&caps_for(8, Some(k), Some(k), None, None, None))?;
            Ok(Outcome::tables(&[t7, t8], format))
        }
        Command::Table { id, k_min, k_max, m, full_max, budget, format } => {
            let t = run_table(id, &caps_for(id, k_min, k_max, m, full_max, budget))?;
            let bad = t.mismatches();
            if bad > 0 {
                eprintln!("table {id}: {bad} rows differ from the published values");
            }
            Ok(Outcome::tables(&[t], format))
        }
        Command::Fig1 { k, n, samples } => {
            let csv = fig1_csv(k, n, samples)?;
            let summary = fig1_summary(k, n)?;
            eprintln!("{}", serde_json::to_string(&summary).expect("serialisable"));
            Ok(Outcome::ok(csv))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            let code = exit_code(&e);
            ExitCode::from(if code == 0 { EXIT_INTERNAL } else { code } as u8)
        }
    }
}
