//! Command-line front end: feed filter-bank or IFS description files in,
//! get measures, transforms, CDFs, and diagnostics out.
//!
//! Contract: machine-readable output (CSV or JSON) goes to stdout or
//! `--out PATH` (written atomically: temp file, then rename); a one-line
//! human summary always goes to stderr. Identical invocations produce
//! byte-identical output, including the seeded chaos game. Exit codes:
//! 0 success, 1 domain failure (a check failed, a cap was exceeded, a
//! precondition was violated), 2 usage or I/O failure (unreadable or
//! malformed inputs, bad flags).

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;

use cuntz_measures::cuntz::DEFAULT_WORD_CAP;
use cuntz_measures::diagnostics::{cyclicity_test, DEFAULT_TAU_MASS, DEFAULT_TAU_NULL};
use cuntz_measures::measure::approx_measure_capped;
use cuntz_measures::{AffineIFS, Atom, AtomicMeasure, FilterBank, LaurentPoly, Verdict};

#[derive(Parser)]
#[command(
    name = "cuntz-measures",
    version,
    about = "Filter-bank measures on the unit interval: verification, \
             discrete approximants, transforms, IFS cross-checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check a bank's matrix unitarity and operator relations; exit 0
    /// only when every residual passes the tolerance.
    Verify {
        /// Filter bank JSON file.
        bank: PathBuf,
        /// Points sampled on the circle for the unitarity residual.
        #[arg(long, default_value_t = 257)]
        samples: usize,
        /// Relations are tested on basis vectors with |n| up to this.
        #[arg(long, default_value_t = 64)]
        degree: i64,
        /// Residual ceiling for passing.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Depth-k discrete measure of a vector under a bank.
    Measure {
        bank: PathBuf,
        /// Vector spec: e<n> for a basis vector, @file.json for coefficients.
        #[arg(long)]
        f: String,
        /// Recursion depth (the measure lives on the level-k grid).
        #[arg(long)]
        k: u32,
        /// Word cap override (default 2^20 leaves).
        #[arg(long)]
        cap: Option<u128>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fourier transform of the depth-k measure over a frequency grid.
    Fourier {
        bank: PathBuf,
        #[arg(long)]
        f: String,
        #[arg(long)]
        k: u32,
        /// Frequency grid as start:stop:count (count evenly spaced points).
        #[arg(long)]
        t: String,
        #[arg(long)]
        cap: Option<u128>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cumulative distribution of the depth-k measure at its atom points.
    Cdf {
        bank: PathBuf,
        #[arg(long)]
        f: String,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        cap: Option<u128>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Approximate an IFS fixed point: deterministic iteration from δ_0
    /// by default, or the seeded chaos game with --chaos.
    Ifs {
        /// IFS JSON file (maps and probabilities).
        file: PathBuf,
        /// Iteration depth (ignored by --chaos).
        #[arg(long, default_value_t = 10)]
        k: u32,
        /// Highest raw moment to report.
        #[arg(long, default_value_t = 2)]
        moments: u32,
        /// Sample the attractor stochastically instead of iterating.
        #[arg(long)]
        chaos: bool,
        /// Chaos-game sample count.
        #[arg(long, default_value_t = 1_000_000)]
        n: usize,
        /// Chaos-game seed; identical seeds give identical output.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Atom cap override (default 2^20).
        #[arg(long)]
        cap: Option<u128>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Finite-depth support test for cyclicity of the vector; exit 0 when
    /// every branch is CONSISTENT, 1 when any branch is VIOLATED.
    Diagnose {
        bank: PathBuf,
        #[arg(long)]
        f: String,
        #[arg(long)]
        k: u32,
        /// Mass a branch must place on a cell to count as charging it.
        #[arg(long, default_value_t = DEFAULT_TAU_MASS)]
        tau_mass: f64,
        /// Mass below which the base measure counts as null on a cell.
        #[arg(long, default_value_t = DEFAULT_TAU_NULL)]
        tau_null: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Failures routed to exit codes: 1 for domain, 2 for usage/I/O.
enum Failure {
    Domain(String),
    Usage(String),
}

impl From<cuntz_measures::Error> for Failure {
    fn from(e: cuntz_measures::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type CliResult<T> = Result<T, Failure>;

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> CliResult<u8> {
    match cli.command {
        Command::Verify {
            bank,
            samples,
            degree,
            tol,
        } => cmd_verify(&bank, samples, degree, tol),
        Command::Measure {
            bank,
            f,
            k,
            cap,
            format,
            out,
        } => cmd_measure(&bank, &f, k, cap, format, out.as_deref()),
        Command::Fourier {
            bank,
            f,
            k,
            t,
            cap,
            format,
            out,
        } => cmd_fourier(&bank, &f, k, &t, cap, format, out.as_deref()),
        Command::Cdf {
            bank,
            f,
            k,
            cap,
            format,
            out,
        } => cmd_cdf(&bank, &f, k, cap, format, out.as_deref()),
        Command::Ifs {
            file,
            k,
            moments,
            chaos,
            n,
            seed,
            cap,
            format,
            out,
        } => cmd_ifs(
            &file,
            k,
            moments,
            chaos,
            n,
            seed,
            cap,
            format,
            out.as_deref(),
        ),
        Command::Diagnose {
            bank,
            f,
            k,
            tau_mass,
            tau_null,
            out,
        } => cmd_diagnose(&bank, &f, k, tau_mass, tau_null, out.as_deref()),
    }
}

// ---------------------------------------------------------------- plumbing

fn load_json<T: DeserializeOwned>(path: &Path, what: &str) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|e| {
        Failure::Usage(format!("cannot read {} file {}: {e}", what, path.display()))
    })?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::Usage(format!("malformed {} file {}: {e}", what, path.display())))
}

/// Resolve an `e<n>` or `@file.json` vector spec, normalizing to unit
/// norm (with a stderr warning when that actually changes the vector).
fn load_vector(spec: &str) -> CliResult<LaurentPoly> {
    let raw = if let Some(index) = spec.strip_prefix('e') {
        let n: i64 = index.parse().map_err(|_| {
            Failure::Usage(format!(
                "bad vector spec '{spec}': expected e<integer> or @file.json"
            ))
        })?;
        LaurentPoly::basis(n)
    } else if let Some(path) = spec.strip_prefix('@') {
        load_json::<LaurentPoly>(Path::new(path), "vector")?
    } else {
        return Err(Failure::Usage(format!(
            "bad vector spec '{spec}': expected e<integer> or @file.json"
        )));
    };
    let norm = raw.norm();
    if (norm - 1.0).abs() <= 1e-9 {
        return Ok(raw);
    }
    let unit = raw
        .normalized()
        .ok_or_else(|| Failure::Domain("vector spec resolves to the zero vector".into()))?;
    eprintln!("warning: vector has norm {norm:.6e}; normalizing to unit norm");
    Ok(unit)
}

/// Parse a start:stop:count frequency grid, endpoints inclusive.
fn parse_grid(spec: &str) -> CliResult<Vec<f64>> {
    let bad = || Failure::Usage(format!("bad grid '{spec}': expected start:stop:count"));
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let start: f64 = parts[0].parse().map_err(|_| bad())?;
    let stop: f64 = parts[1].parse().map_err(|_| bad())?;
    let count: usize = parts[2].parse().map_err(|_| bad())?;
    if !start.is_finite() || !stop.is_finite() || count < 1 {
        return Err(bad());
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    let step = (stop - start) / (count - 1) as f64;
    Ok((0..count).map(|i| start + step * i as f64).collect())
}

/// Emit to stdout or atomically to a file (write sibling temp, rename).
fn emit(out: Option<&Path>, content: &str) -> CliResult<()> {
    match out {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(path) => {
            let mut tmp_name = path.as_os_str().to_owned();
            tmp_name.push(".tmp");
            let tmp = PathBuf::from(tmp_name);
            fs::write(&tmp, content)
                .and_then(|()| fs::rename(&tmp, path))
                .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable report");
    text.push('\n');
    text
}

/// CSV cell with 15 significant digits — enough to round-trip f64 values
/// that matter here while keeping columns aligned and diff-friendly.
fn csv_num(x: f64) -> String {
    format!("{x:.14e}")
}

fn atoms_csv(atoms: &[Atom], header: &str) -> String {
    let mut text = String::from(header);
    text.push('\n');
    for atom in atoms {
        let _ = writeln!(text, "{},{}", csv_num(atom.x), csv_num(atom.w));
    }
    text
}

// ---------------------------------------------------------------- commands

#[derive(Serialize)]
struct VerifyOut {
    samples: usize,
    degree: i64,
    tolerance: f64,
    unitarity_residual: f64,
    isometry_residual: f64,
    completeness_residual: f64,
    pass: bool,
}

fn cmd_verify(bank_path: &Path, samples: usize, degree: i64, tol: f64) -> CliResult<u8> {
    let bank: FilterBank = load_json(bank_path, "bank")?;
    let unitarity = bank.check_unitarity(samples);
    let relations = bank.verify_cuntz(degree)?;
    let pass = unitarity <= tol && relations.max_residual() <= tol;
    let report = VerifyOut {
        samples,
        degree,
        tolerance: tol,
        unitarity_residual: unitarity,
        isometry_residual: relations.isometry_residual,
        completeness_residual: relations.completeness_residual,
        pass,
    };
    emit(None, &to_json(&report))?;
    eprintln!(
        "verify: unitarity {unitarity:.3e}, isometry {:.3e}, completeness {:.3e} (tol {tol:.0e}) -> {}",
        relations.isometry_residual,
        relations.completeness_residual,
        if pass { "ok" } else { "FAILED" }
    );
    Ok(if pass { 0 } else { 1 })
}

#[derive(Serialize)]
struct MeasureOut<'a> {
    atoms: &'a [Atom],
    total_mass: f64,
}

fn measure_for(
    bank_path: &Path,
    f_spec: &str,
    k: u32,
    cap: Option<u128>,
) -> CliResult<(FilterBank, AtomicMeasure)> {
    let bank: FilterBank = load_json(bank_path, "bank")?;
    let f = load_vector(f_spec)?;
    let measure = approx_measure_capped(&bank, &f, k, cap.unwrap_or(DEFAULT_WORD_CAP))?;
    Ok((bank, measure))
}

fn cmd_measure(
    bank_path: &Path,
    f_spec: &str,
    k: u32,
    cap: Option<u128>,
    format: Format,
    out: Option<&Path>,
) -> CliResult<u8> {
    let (bank, measure) = measure_for(bank_path, f_spec, k, cap)?;
    let content = match format {
        Format::Csv => atoms_csv(measure.atoms(), "x,w"),
        Format::Json => to_json(&MeasureOut {
            atoms: measure.atoms(),
            total_mass: measure.total_mass(),
        }),
    };
    emit(out, &content)?;
    eprintln!(
        "measure: {} atoms at depth {k} (scale {}), total mass {:.15}",
        measure.len(),
        bank.scale(),
        measure.total_mass()
    );
    Ok(0)
}

#[derive(Serialize)]
struct FourierRow {
    t: f64,
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct FourierOut {
    samples: Vec<FourierRow>,
}

fn cmd_fourier(
    bank_path: &Path,
    f_spec: &str,
    k: u32,
    grid_spec: &str,
    cap: Option<u128>,
    format: Format,
    out: Option<&Path>,
) -> CliResult<u8> {
    let grid = parse_grid(grid_spec)?;
    let (_, measure) = measure_for(bank_path, f_spec, k, cap)?;
    let rows: Vec<FourierRow> = grid
        .iter()
        .map(|&t| {
            let value = measure.fourier(t);
            FourierRow {
                t,
                re: value.re,
                im: value.im,
            }
        })
        .collect();
    let content = match format {
        Format::Csv => {
            let mut text = String::from("t,re,im\n");
            for row in &rows {
                let _ = writeln!(
                    text,
                    "{},{},{}",
                    csv_num(row.t),
                    csv_num(row.re),
                    csv_num(row.im)
                );
            }
            text
        }
        Format::Json => to_json(&FourierOut { samples: rows }),
    };
    emit(out, &content)?;
    eprintln!(
        "fourier: {} frequencies in [{}, {}], measure depth {k}",
        grid.len(),
        grid.first().unwrap(),
        grid.last().unwrap()
    );
    Ok(0)
}

#[derive(Serialize)]
struct CdfRow {
    x: f64,
    #[serde(rename = "F")]
    value: f64,
}

#[derive(Serialize)]
struct CdfOut {
    samples: Vec<CdfRow>,
}

fn cmd_cdf(
    bank_path: &Path,
    f_spec: &str,
    k: u32,
    cap: Option<u128>,
    format: Format,
    out: Option<&Path>,
) -> CliResult<u8> {
    let (_, measure) = measure_for(bank_path, f_spec, k, cap)?;
    let rows: Vec<CdfRow> = measure
        .atoms()
        .iter()
        .map(|a| CdfRow {
            x: a.x,
            value: measure.cdf(a.x),
        })
        .collect();
    let point_count = rows.len();
    let content = match format {
        Format::Csv => {
            let mut text = String::from("x,F\n");
            for row in &rows {
                let _ = writeln!(text, "{},{}", csv_num(row.x), csv_num(row.value));
            }
            text
        }
        Format::Json => to_json(&CdfOut { samples: rows }),
    };
    emit(out, &content)?;
    eprintln!(
        "cdf: {} atom points, final value {:.15}",
        point_count,
        measure.total_mass()
    );
    Ok(0)
}

#[derive(Serialize)]
struct IfsOut<'a> {
    atoms: &'a [Atom],
    total_mass: f64,
    /// Raw moments m_0..=m_order.
    moments: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mean: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    variance: Option<f64>,
}

#[allow(clippy::too_many_arguments)]
fn cmd_ifs(
    ifs_path: &Path,
    k: u32,
    moments: u32,
    chaos: bool,
    n: usize,
    seed: u64,
    cap: Option<u128>,
    format: Format,
    out: Option<&Path>,
) -> CliResult<u8> {
    let ifs: AffineIFS = load_json(ifs_path, "IFS")?;
    let measure = if chaos {
        if n < 1 {
            return Err(Failure::Usage("chaos game needs --n at least 1".into()));
        }
        ifs.chaos_game(seed, n)?
    } else {
        ifs.hutchinson_iterate_capped(
            &AtomicMeasure::dirac(0.0),
            k,
            cap.unwrap_or(cuntz_measures::ifs::DEFAULT_ATOM_CAP),
        )?
    };
    let raw: Vec<f64> = (0..=moments).map(|r| measure.moment(r)).collect();
    let (mean, variance) = if moments >= 2 {
        (Some(raw[1]), Some(raw[2] - raw[1] * raw[1]))
    } else {
        (None, None)
    };
    let content = match format {
        Format::Csv => atoms_csv(measure.atoms(), "x,w"),
        Format::Json => to_json(&IfsOut {
            atoms: measure.atoms(),
            total_mass: measure.total_mass(),
            moments: raw.clone(),
            mean,
            variance,
        }),
    };
    emit(out, &content)?;
    let source = if chaos {
        format!("chaos game, {n} samples, seed {seed}")
    } else {
        format!("deterministic iterate, depth {k}")
    };
    let stats = match (mean, variance) {
        (Some(m), Some(v)) => format!(", mean {m:.9}, variance {v:.9}"),
        _ => String::new(),
    };
    eprintln!(
        "ifs: {source}; {} atoms, mass {:.12}{stats}",
        measure.len(),
        measure.total_mass()
    );
    Ok(0)
}

fn cmd_diagnose(
    bank_path: &Path,
    f_spec: &str,
    k: u32,
    tau_mass: f64,
    tau_null: f64,
    out: Option<&Path>,
) -> CliResult<u8> {
    let bank: FilterBank = load_json(bank_path, "bank")?;
    let f = load_vector(f_spec)?;
    let report = cyclicity_test(&bank, &f, k, tau_mass, tau_null)?;
    emit(out, &to_json(&report))?;
    let summary: Vec<String> = report
        .branches
        .iter()
        .map(|b| {
            let token = match b.verdict {
                Verdict::Consistent => "CONSISTENT",
                Verdict::Violated => "VIOLATED",
            };
            format!("branch {} {token}", b.branch)
        })
        .collect();
    eprintln!("diagnose: depth {k}: {}", summary.join(", "));
    Ok(if report.all_consistent() { 0 } else { 1 })
}
