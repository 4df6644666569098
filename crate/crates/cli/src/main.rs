// SPDX-License-Identifier: Apache-2.0

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{CommandFactory, Parser, Subcommand};
use serde::Serialize;

use rvserial::bench::{audit_constant_time, run_suite, KernelId, Preset};
use rvserial::cosim::run_matrix;
use rvserial::golden::HaltReason;
use rvserial::isa::{decode, ExtensionSet};
use rvserial::microarch::{CoreConfig, WIDTHS};
use rvserial::system::{
    load_image_file, write_trace_csv, ImageFormat, LoadError, Machine, ProgramImage,
};

const EXIT_FAIL: u8 = 1;
const EXIT_LOAD: u8 = 3;
const EXIT_TRAP: u8 = 4;

/// Cycle-level simulator for bit-serial RV32I cores with the scalar
/// cryptography extensions.
#[derive(Debug, Parser)]
#[command(name = "rvserial", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct ImageArgs {
    /// Program image.
    image: PathBuf,
    /// Load address.
    #[arg(long, default_value = "0x1000", value_parser = parse_u32)]
    base: u32,
    /// `flat-bin` or `hex-words`.
    #[arg(long, default_value = "flat-bin")]
    format: ImageFormat,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run an image on the cycle-level core.
    Run {
        #[command(flatten)]
        image: ImageArgs,
        /// Serial data path width in bits: 1, 2, 4, 8, 16 or 32.
        #[arg(long, default_value_t = 32, value_parser = parse_width)]
        width: u32,
        /// Comma list over zbkb, zbkx, zbkc, zkne, zknd, zknh, zkt and zkn.
        #[arg(long, default_value = "rv32i")]
        ext: ExtensionSet,
        #[arg(long, default_value_t = 10_000_000)]
        max_cycles: u64,
        /// Entry point, defaulting to the load address.
        #[arg(long, value_parser = parse_u32)]
        entry: Option<u32>,
        /// Write a per-instruction CSV trace here.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Write run statistics as JSON here.
        #[arg(long)]
        stats_json: Option<PathBuf>,
    },
    /// Check the cycle-level core against the reference model on random
    /// programs.
    Cosim {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
        programs: u64,
        #[arg(long, default_value = "1,2,4,8,16,32", value_parser = parse_widths)]
        widths: Widths,
        #[arg(long, default_value = "zkn,zkt")]
        ext: ExtensionSet,
        /// Body instructions per program.
        #[arg(long, default_value_t = 200)]
        length: usize,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run the benchmark kernels.
    Bench {
        /// Comma list of kernels, aliases (aes128, sha256, prince) or
        /// groups (crypto, synthetic, all).
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value = "1,2,4,8,16,32", value_parser = parse_widths)]
        widths: Widths,
        /// Comma list over rv32i, zkn and zkn-zkt.
        #[arg(long, default_value = "rv32i,zkn")]
        ext_presets: String,
        /// Write the results as a JSON array here.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Measure per-instruction latency spread under Zkt.
    AuditCt {
        #[arg(long, default_value_t = 1, value_parser = parse_width)]
        width: u32,
        #[arg(long, default_value = "zkn,zkt")]
        ext: ExtensionSet,
        #[arg(long, default_value_t = 256, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Print one instruction per code word.
    Disasm {
        #[command(flatten)]
        image: ImageArgs,
    },
}

type Widths = Vec<u32>;

fn parse_u32(s: &str) -> Result<u32, String> {
    let r = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u32::from_str_radix(hex, 16),
        None => s.parse(),
    };
    r.map_err(|e| format!("`{s}`: {e}"))
}

fn parse_width(s: &str) -> Result<u32, String> {
    let w: u32 = s
        .trim()
        .parse()
        .map_err(|_| format!("`{s}` is not a number"))?;
    if WIDTHS.contains(&w) {
        Ok(w)
    } else {
        Err(format!("width must be one of 1, 2, 4, 8, 16, 32 (got {w})"))
    }
}

fn parse_widths(s: &str) -> Result<Widths, String> {
    let mut ws = s
        .split(',')
        .map(parse_width)
        .collect::<Result<Vec<_>, _>>()?;
    ws.sort_unstable();
    ws.dedup();
    Ok(ws)
}

fn usage_error(msg: impl std::fmt::Display) -> ! {
    Cli::command()
        .error(clap::error::ErrorKind::ValueValidation, msg)
        .exit()
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()
}

fn load(args: &ImageArgs, entry: Option<u32>) -> Result<ProgramImage, LoadError> {
    load_image_file(&args.image, args.format, args.base, entry)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_FAIL)
        }
    }
}

fn run(command: Command) -> io::Result<u8> {
    match command {
        Command::Run {
            image,
            width,
            ext,
            max_cycles,
            entry,
            trace,
            stats_json,
        } => {
            let program = match load(&image, entry) {
                Ok(p) => p,
                Err(e) => {
                    eprintln!("error: {}: {e}", image.image.display());
                    return Ok(EXIT_LOAD);
                }
            };
            let config = CoreConfig::new(width, ext).unwrap_or_else(|e| usage_error(e));
            let mut machine = Machine::new(&program, config);
            if trace.is_some() {
                machine.enable_trace();
            }
            let stats = machine.run(max_cycles);
            if let Some(path) = trace {
                write_trace_csv(machine.trace(), BufWriter::new(File::create(path)?))?;
            }
            if let Some(path) = stats_json {
                write_json(&path, &stats.json())?;
            }
            let mut stdout = io::stdout().lock();
            stdout.write_all(&stats.console)?;
            if !stats.console.is_empty() && !stats.console.ends_with(b"\n") {
                writeln!(stdout)?;
            }
            writeln!(stdout, "halt:      {}", stats.halt)?;
            if let Some(code) = stats.exit_code {
                writeln!(stdout, "exit code: {code}")?;
            }
            writeln!(stdout, "width:     {}", stats.width)?;
            writeln!(stdout, "ext:       {}", stats.extensions)?;
            writeln!(stdout, "cycles:    {}", stats.cycles)?;
            writeln!(stdout, "instret:   {}", stats.instret)?;
            writeln!(stdout, "cpi:       {:.3}", stats.cpi)?;
            writeln!(stdout, "code size: {} bytes", stats.code_size)?;
            Ok(match stats.halt {
                HaltReason::Ebreak | HaltReason::Ecall => match stats.exit_code {
                    Some(c) if c != 0 => EXIT_FAIL,
                    _ => 0,
                },
                _ => EXIT_TRAP,
            })
        }
        Command::Cosim {
            seed,
            programs,
            widths,
            ext,
            length,
            json,
        } => {
            let end = seed
                .checked_add(programs)
                .unwrap_or_else(|| usage_error("seed range overflows"));
            let reports = run_matrix(seed..end, &widths, ext, length);
            if let Some(path) = json {
                write_json(&path, &reports)?;
            }
            let failed: Vec<_> = reports.iter().filter(|r| !r.pass).collect();
            for r in &failed {
                match &r.divergence {
                    Some(d) => println!("FAIL seed {} width {}: {d}", r.seed, r.width),
                    None => println!(
                        "FAIL seed {} width {}: signature {} != {}",
                        r.seed, r.width, r.sig_micro, r.sig_golden
                    ),
                }
            }
            println!(
                "{} cells: {} passed, {} failed",
                reports.len(),
                reports.len() - failed.len(),
                failed.len()
            );
            Ok(if failed.is_empty() { 0 } else { EXIT_FAIL })
        }
        Command::Bench {
            suite,
            widths,
            ext_presets,
            json,
        } => {
            let mut kernels = Vec::new();
            for name in suite.split(',').map(str::trim) {
                match KernelId::select(name) {
                    Some(ks) => kernels.extend(ks),
                    None => usage_error(format!("unknown kernel or group `{name}`")),
                }
            }
            let presets = ext_presets
                .split(',')
                .map(|p| p.trim().parse::<Preset>())
                .collect::<Result<Vec<_>, _>>()
                .unwrap_or_else(|e| usage_error(e));
            match run_suite(&kernels, &widths, &presets) {
                Ok(report) => {
                    if let Some(path) = json {
                        write_json(&path, &report.results)?;
                    }
                    print!("{}", report.table());
                    Ok(0)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    Ok(EXIT_FAIL)
                }
            }
        }
        Command::AuditCt {
            width,
            ext,
            trials,
            json,
        } => {
            if !ext.zkt() {
                usage_error("audit-ct needs zkt in --ext");
            }
            let config = CoreConfig::new(width, ext).unwrap_or_else(|e| usage_error(e));
            let report = audit_constant_time(config, trials as usize);
            if let Some(path) = json {
                write_json(&path, &report)?;
            }
            println!(
                "{:<12} {:>5} {:>5} {:>6}",
                "mnemonic", "min", "max", "spread"
            );
            for r in &report.rows {
                println!(
                    "{:<12} {:>5} {:>5} {:>6}",
                    r.mnemonic, r.min, r.max, r.spread
                );
            }
            println!(
                "width {} ext {}: {} mnemonics, {} trials each: {}",
                report.width,
                ext,
                report.rows.len(),
                report.trials,
                if report.pass { "pass" } else { "FAIL" }
            );
            Ok(if report.pass { 0 } else { EXIT_FAIL })
        }
        Command::Disasm { image } => {
            let program = match load(&image, None) {
                Ok(p) => p,
                Err(e) => {
                    eprintln!("error: {}: {e}", image.image.display());
                    return Ok(EXIT_LOAD);
                }
            };
            let mut stdout = BufWriter::new(io::stdout().lock());
            for (_, word) in program.code_words() {
                match decode(word) {
                    Ok(i) => writeln!(stdout, "{i}")?,
                    Err(_) => writeln!(stdout, ".word {word:#010x}")?,
                }
            }
            stdout.flush()?;
            Ok(0)
        }
    }
}
