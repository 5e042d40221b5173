//! `bwdisc`: command-line front end for family construction, parameter
//! search, the discriminant improvement and CM curve checks.
//!
//! Data goes to stdout, progress to stderr. Failures print a single line
//! `error: <kind>: <message>` to stderr and exit with status 1 (rejected
//! input or failed check) or 2 (usage).

use std::fmt;
use std::fs;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bwdisc::cm::{build_curve, cm_discriminant, verify_curve, Curve};
use bwdisc::families::{
    bateman_horn_interval, cocks_pinch, delta_table, generic_construction, hypothesis_h_check, integral_residues,
};
use bwdisc::numtheory::class_number;
use bwdisc::search::{apply_improvement, select_n, CurveParams, Instantiator, SearchConfig};
use bwdisc::Family;
use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

#[derive(Parser)]
#[command(name = "bwdisc", version, about = "Brezing-Weng families with enlarged CM discriminants")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the cyclotomic family for (D, k, e, f) and print its family file.
    Family {
        #[arg(long = "D")]
        d: u64,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        e: u64,
        #[arg(long)]
        f: u64,
        /// Add this multiple of r to y before forming p.
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        y_lift: BigInt,
        /// Write the family file here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Stream parameter records for every accepted x in [from, to].
    Search {
        #[arg(long)]
        family_file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        from: BigInt,
        #[arg(long, allow_hyphen_values = true)]
        to: BigInt,
        #[command(flatten)]
        filters: Filters,
        #[command(flatten)]
        workers: Workers,
    },
    /// Divide y by n and multiply the discriminant by n^2 in each record.
    Improve {
        /// File of parameter records, one per line (`-` for stdin).
        #[arg(long)]
        record: PathBuf,
        /// A prime divisor of y, or `auto` for the largest one in [1e4, 1e6].
        #[arg(long)]
        n: String,
    },
    /// Check a curve file (or parameter records) against its claimed parameters.
    Verify {
        #[arg(long, conflicts_with = "record", required_unless_present = "record")]
        curve_file: Option<PathBuf>,
        /// Parameter records to re-validate instead (`-` for stdin).
        #[arg(long)]
        record: Option<PathBuf>,
        #[arg(long, default_value_t = 8)]
        samples: usize,
    },
    /// Print the class number of a negative discriminant.
    Classnum {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
    },
    /// Print the histogram of delta over all valid quadruplets up to `max`.
    DeltaTable {
        #[arg(long)]
        max: u64,
        #[command(flatten)]
        workers: Workers,
    },
    /// Run the Cocks-Pinch construction for a prime r.
    CocksPinch {
        #[arg(long = "D")]
        d: u64,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        r: BigInt,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print Bateman-Horn estimates for simultaneous primality of p and r.
    Density {
        #[arg(long)]
        family_file: PathBuf,
        #[arg(long, default_value_t = 1000)]
        prime_bound: u64,
        /// Count x in [2, N].
        #[arg(long = "N")]
        n: u64,
    },
    /// Build a curve file from a parameter record by the CM method.
    BuildCurve {
        /// File holding one parameter record (`-` for stdin).
        #[arg(long)]
        record: PathBuf,
    },
}

#[derive(Args)]
struct Filters {
    #[arg(long, default_value_t = 160)]
    min_r_bits: u64,
    #[arg(long, default_value_t = 1024)]
    min_kp_bits: u64,
    #[arg(long, default_value_t = 10_000)]
    max_cofactor: u64,
}

#[derive(Args)]
struct Workers {
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    workers: Option<usize>,
}

impl Workers {
    fn install(&self) -> Result<(), Failure> {
        if let Some(n) = self.workers {
            if n == 0 {
                return Err(Failure::usage("--workers must be positive"));
            }
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| Failure::new("internal", e))?;
        }
        Ok(())
    }
}

/// One-line failure report.
struct Failure {
    kind: &'static str,
    message: String,
    status: u8,
}

impl Failure {
    fn new(kind: &'static str, message: impl fmt::Display) -> Failure {
        Failure { kind, message: message.to_string(), status: 1 }
    }

    fn usage(message: impl fmt::Display) -> Failure {
        Failure { kind: "usage", message: message.to_string(), status: 2 }
    }
}

macro_rules! failure_from {
    ($($ty:ty => $kind:literal),* $(,)?) => {
        $(impl From<$ty> for Failure {
            fn from(e: $ty) -> Failure {
                Failure::new($kind, e)
            }
        })*
    };
}

failure_from! {
    bwdisc::FamilyError => "family",
    bwdisc::SearchError => "search",
    bwdisc::CmError => "cm",
    bwdisc::numtheory::NumError => "number-theory",
    io::Error => "io",
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Failure::new("io", format!("{}: {e}", path.display())))
}

fn read_records(path: &Path) -> Result<Vec<CurveParams>, Failure> {
    read_input(path)?
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.parse::<CurveParams>().map_err(Failure::from))
        .collect()
}

fn run(command: Command) -> Result<(), Failure> {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    match command {
        Command::Family { d, k, e, f, y_lift, output } => {
            let fam = generic_construction(d, k, e, f)?.with_y_lift(&y_lift);
            match output {
                Some(path) => fs::write(&path, fam.to_string())?,
                None => write!(out, "{fam}")?,
            }
        }
        Command::Search { family_file, from, to, filters, workers } => {
            workers.install()?;
            let fam: Family = read_input(&family_file)?.parse()?;
            let cfg = SearchConfig {
                min_r_bits: filters.min_r_bits,
                min_kp_bits: filters.min_kp_bits,
                max_cofactor_r: filters.max_cofactor,
                ..SearchConfig::default()
            };
            let inst = Instantiator::new(&fam, &cfg)?;
            if from > to {
                return Err(Failure::usage(format!("--from {from} exceeds --to {to}")));
            }
            // chunks bound the latency between progress reports
            let chunk = BigInt::from(1u64 << 20);
            let total = &to - &from + 1u32;
            let mut lo = from.clone();
            let mut hits = 0u64;
            while lo <= to {
                let hi = (&lo + &chunk - 1u32).min(to.clone());
                let mut sink_err = None;
                inst.scan_each(&lo, &hi, |params| {
                    hits += 1;
                    if sink_err.is_none() {
                        sink_err = writeln!(out, "{params}").err();
                    }
                })?;
                if let Some(e) = sink_err {
                    return Err(e.into());
                }
                out.flush()?;
                let done = &hi - &from + 1u32;
                eprintln!("progress: {done}/{total} values, {hits} hits");
                lo = hi + 1u32;
            }
        }
        Command::Improve { record, n } => {
            let cfg = SearchConfig::default();
            for params in read_records(&record)? {
                let n = if n == "auto" {
                    select_n(&params.y, &cfg)?.remove(0)
                } else {
                    n.parse::<BigInt>().map_err(|_| Failure::usage(format!("--n: `{n}` is not an integer or `auto`")))?
                };
                let improved = apply_improvement(&params, &n)?;
                improved.validate()?;
                writeln!(out, "{improved}")?;
            }
        }
        Command::Verify { curve_file, record, samples } => {
            if samples == 0 {
                return Err(Failure::usage("--samples must be positive"));
            }
            if let Some(path) = record {
                let records = read_records(&path)?;
                writeln!(out, "ok: {} records", records.len())?;
            } else {
                let path = curve_file.expect("clap enforces one input");
                let curve: Curve = read_input(&path)?.parse()?;
                verify_curve(&curve, samples).map_err(|reason| Failure::new("verify", reason))?;
                writeln!(out, "ok")?;
            }
        }
        Command::Classnum { disc } => {
            writeln!(out, "{}", class_number(disc)?)?;
        }
        Command::DeltaTable { max, workers } => {
            workers.install()?;
            let table = delta_table(max)?;
            writeln!(out, "# delta = deg(largest factor of y) / deg(y) over valid (D, k, e, f) up to {max}")?;
            for (i, count) in table.buckets.iter().enumerate() {
                if i < 10 {
                    writeln!(out, "[0.{i},{}) {count}", if i == 9 { "1.0".to_string() } else { format!("0.{}", i + 1) })?;
                } else {
                    writeln!(out, "1.0 {count}")?;
                }
            }
            writeln!(out, "total {}", table.total)?;
            writeln!(out, "undefined {}", table.undefined)?;
            writeln!(out, "share_at_least_0.8 {:.4}", table.high_share())?;
        }
        Command::CocksPinch { d, k, r, seed } => match cocks_pinch(d, k, &r, seed)? {
            Some(cp) => {
                writeln!(out, "p: {}", cp.p)?;
                writeln!(out, "r: {}", cp.r)?;
                writeln!(out, "t: {}", cp.t)?;
                writeln!(out, "y: {}", cp.y)?;
                writeln!(out, "rho: {:.4}", cp.rho())?;
            }
            None => return Err(Failure::new("cocks-pinch", format!("no lift gives a prime p for seed {seed}"))),
        },
        Command::Density { family_file, prime_bound, n } => {
            let fam: Family = read_input(&family_file)?.parse()?;
            if n < 2 {
                return Err(Failure::usage("--N must be at least 2"));
            }
            let gcd = hypothesis_h_check(&fam.p, &fam.r).gcd_value.unwrap_or_default();
            writeln!(out, "gcd {gcd}")?;
            let mut total = 0.0;
            for (m, c, polys) in integral_residues(&[fam.p.clone(), fam.r.clone()]) {
                // x = m u + c with x in [2, N]; u below 2 is dropped (log u ≤ log 2)
                let (m64, c64) = (m.to_i128().unwrap_or(i128::MAX), c.to_i128().unwrap_or(0));
                let lo = ((2 - c64 + m64 - 1) / m64).max(2);
                let hi = (n as i128 - c64) / m64;
                if hi < lo {
                    writeln!(out, "class {c} mod {m}: empty")?;
                    continue;
                }
                let est = bateman_horn_interval(&polys, prime_bound, lo as u64, hi as u64)?;
                let expected = est.expected_count.unwrap_or(0.0);
                total += expected;
                writeln!(
                    out,
                    "class {c} mod {m}: constant {:.6} expected {:.2}",
                    est.constant.unwrap_or(0.0),
                    expected
                )?;
            }
            writeln!(out, "expected {total:.2}")?;
        }
        Command::BuildCurve { record } => {
            let records = read_records(&record)?;
            let [params] = records.as_slice() else {
                return Err(Failure::usage("--record must hold exactly one parameter record"));
            };
            eprintln!("class polynomial for discriminant {}", cm_discriminant(&params.d_eff)?);
            let curve = build_curve(params)?;
            debug_assert!(curve.r > BigInt::one());
            write!(out, "{curve}")?;
        }
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help / --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            let first = first.strip_prefix("error: ").unwrap_or(first);
            eprintln!("error: usage: {first}");
            return ExitCode::from(2);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let message = f.message.split_whitespace().collect::<Vec<_>>().join(" ");
            eprintln!("error: {}: {message}", f.kind);
            ExitCode::from(f.status)
        }
    }
}
