use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rindler_core::analysis::{
    critical_p, critical_r, figure_table, format_sig12, r_grid, run_sweep, unit_grid, verify_claims, CriticalR,
    Family, FigureId, FigureOptions, Measure, SweepSpec, SweepTable,
};
use rindler_core::states::{acceleration_to_r, NptFamily};
use rindler_core::{DiscordOptions, FractionP, OracleResolution, RindlerR, Side};

const FIGURE_HELP: &str = "Figure numbers:
  1  discord D(A:I) over (r, p)
  2  log negativity N(A:I) over (r, p)
  3  discord D(A:II) over (r, p)
  4  log negativity N(A:II) over (r, p)
  5  discord in both directions for A:I, A:II and I:II versus r, at p = 1
  6  entanglement of formation E_f(A:I) over (r, p)
  7  negativity gap N(I:B) - N~(I:B) over (r, beta)";

#[derive(Parser, Debug)]
#[command(
    name = "rindler",
    version,
    about = "Entanglement and discord of pseudo-entangled qubit pairs under acceleration",
    after_help = "Set RINDLER_THREADS to cap the number of worker threads.\n\
                  Exit codes: 0 success, 1 verification failure, 2 usage error."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write the dataset behind one of the seven figures.
    #[command(after_help = FIGURE_HELP)]
    Figure {
        /// Figure number, 1 to 7.
        id: u32,
        #[command(flatten)]
        out: OutputArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        oracle: OracleArgs,
    },
    /// Sweep one family over an (r, p) or (r, beta) grid.
    Sweep {
        /// AI, AII, III or IB_pair.
        #[arg(long)]
        family: String,
        /// Comma-separated: negativity, eof, discord, mutual_info, classical_corr.
        #[arg(long, value_delimiter = ',', default_value = "negativity")]
        measures: Vec<String>,
        /// Qubit that the discord measurement and partial transpose act on.
        #[arg(long, value_enum, default_value_t = SideArg::Second)]
        measured_side: SideArg,
        #[command(flatten)]
        out: OutputArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        oracle: OracleArgs,
    },
    /// Separability threshold p_c at fixed r, or r* at fixed p with --p.
    Threshold {
        /// AI or AII.
        #[arg(long, default_value = "AI")]
        family: String,
        #[arg(long, conflicts_with = "p")]
        r: Option<f64>,
        /// Find the critical r of A:I for this p instead.
        #[arg(long)]
        p: Option<f64>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run every acceptance claim; exits 1 if any fails.
    Verify {
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Convert a proper acceleration and mode frequency to the mixing angle r.
    Convert {
        #[arg(long)]
        acceleration: f64,
        #[arg(long)]
        omega: f64,
    },
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Write to this file instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Omit the metadata header (the only run-specific content).
    #[arg(long)]
    no_metadata: bool,
}

#[derive(Args, Debug)]
struct GridArgs {
    #[arg(long, default_value_t = 65, value_parser = clap::value_parser!(u32).range(1..=100_000))]
    r_points: u32,
    /// Points along p (or beta for IB_pair and figure 7).
    #[arg(long, default_value_t = 65, value_parser = clap::value_parser!(u32).range(1..=100_000))]
    p_points: u32,
}

#[derive(Args, Debug)]
struct OracleArgs {
    /// Use the brute-force discord minimizer everywhere.
    #[arg(long)]
    force_oracle: bool,
    /// Polar grid size N of the oracle; the azimuthal grid uses 2N.
    #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u32).range(1..=4096))]
    oracle_resolution: u32,
}

impl OracleArgs {
    fn options(&self) -> DiscordOptions {
        DiscordOptions {
            force_oracle: self.force_oracle,
            resolution: OracleResolution {
                theta_points: self.oracle_resolution as usize,
                phi_points: 2 * self.oracle_resolution as usize,
            },
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SideArg {
    First,
    Second,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Claims(usize),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn emit(out: &OutputArgs, text: &str) -> Result<(), Failure> {
    match &out.output {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(stdout.flush()?)
        }
    }
}

fn emit_table(out: &OutputArgs, table: &SweepTable) -> Result<(), Failure> {
    let text = match out.format {
        Format::Csv => table.to_csv_string(!out.no_metadata)?,
        Format::Json => table.to_json_string(!out.no_metadata)?,
    };
    emit(out, &text)
}

fn csv_text(header: &[&str], rows: &[Vec<String>]) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| e.to_string())?)?)
}

fn npt_family(name: &str) -> Result<NptFamily, Failure> {
    match name.parse::<Family>()? {
        Family::AI => Ok(NptFamily::AI),
        Family::AII => Ok(NptFamily::AII),
        other => Err(Failure::Usage(format!("thresholds exist only for AI and AII, not {other}"))),
    }
}

fn threshold(family: &str, r: Option<f64>, p: Option<f64>, out: &OutputArgs) -> Result<(), Failure> {
    let (header, row, json) = match p {
        Some(p) => {
            if npt_family(family)? != NptFamily::AI {
                return Err(Failure::Usage("critical r is defined for the AI family only".into()));
            }
            let result = critical_r(FractionP::new(p)?);
            let label = match result {
                CriticalR::AlreadySeparable => "separable".to_string(),
                CriticalR::At(r) => format_sig12(r),
                CriticalR::EntangledAtAllR => "none".to_string(),
            };
            let json = serde_json::json!({
                "p": p,
                "family": "AI",
                "r_star": result.r_star(),
                "regime": result,
            });
            (vec!["p", "family", "r_star"], vec![format_sig12(p), "AI".into(), label], json)
        }
        None => {
            let fam = npt_family(family)?;
            let r = RindlerR::new(r.unwrap_or(0.0))?;
            let pc = critical_p(r, fam).value();
            let name = match fam {
                NptFamily::AI => "AI",
                NptFamily::AII => "AII",
            };
            let label = pc.map(format_sig12).unwrap_or_else(|| "none".into());
            let json = serde_json::json!({ "r": r.value(), "family": name, "p_c": pc });
            (vec!["r", "family", "p_c"], vec![format_sig12(r.value()), name.into(), label], json)
        }
    };
    let text = match out.format {
        Format::Csv => csv_text(&header, &[row])?,
        Format::Json => serde_json::to_string_pretty(&json)? + "\n",
    };
    emit(out, &text)
}

fn verify(out: &OutputArgs) -> Result<(), Failure> {
    let claims = verify_claims();
    let text = match out.format {
        Format::Json => serde_json::to_string_pretty(&claims)? + "\n",
        Format::Csv => {
            let rows: Vec<Vec<String>> = claims
                .iter()
                .map(|c| {
                    vec![
                        c.id.clone(),
                        c.description.clone(),
                        format_sig12(c.target),
                        format_sig12(c.measured),
                        format_sig12(c.tolerance),
                        if c.pass { "PASS" } else { "FAIL" }.into(),
                    ]
                })
                .collect();
            csv_text(&["id", "description", "target", "measured", "tolerance", "pass"], &rows)?
        }
    };
    emit(out, &text)?;
    let failed = claims.iter().filter(|c| !c.pass).count();
    eprintln!("{} of {} claims passed", claims.len() - failed, claims.len());
    if failed > 0 {
        return Err(Failure::Claims(failed));
    }
    Ok(())
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("RINDLER_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Usage(format!("RINDLER_THREADS must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    configure_threads()?;
    match cli.command {
        Command::Figure { id, out, grid, oracle } => {
            let options = FigureOptions {
                r_points: grid.r_points as usize,
                p_points: grid.p_points as usize,
                discord: oracle.options(),
            };
            emit_table(&out, &figure_table(FigureId::from_number(id)?, &options)?)
        }
        Command::Sweep {
            family,
            measures,
            measured_side,
            out,
            grid,
            oracle,
        } => {
            let measures = measures
                .iter()
                .map(|m| m.trim().parse::<Measure>())
                .collect::<Result<Vec<_>, _>>()?;
            let spec = SweepSpec {
                family: family.parse()?,
                r_grid: r_grid(grid.r_points as usize),
                parameter_grid: unit_grid(grid.p_points as usize),
                measures,
                measured_side: match measured_side {
                    SideArg::First => Side::First,
                    SideArg::Second => Side::Second,
                },
                discord: oracle.options(),
            };
            emit_table(&out, &run_sweep(&spec)?)
        }
        Command::Threshold { family, r, p, out } => threshold(&family, r, p, &out),
        Command::Verify { out } => verify(&out),
        Command::Convert { acceleration, omega } => {
            let r = acceleration_to_r(acceleration, omega)?;
            println!("{}", format_sig12(r.value()));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Claims(n)) => {
            eprintln!("error: {n} claim(s) failed");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
