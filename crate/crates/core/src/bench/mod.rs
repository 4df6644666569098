// SPDX-License-Identifier: Apache-2.0

//! Cryptographic and synthetic kernels, the benchmark suite and the
//! constant-time latency audit.
//!
//! Every cell of a suite run checks the kernel's output against a value
//! computed outside the simulator before any cycle count is reported.

mod audit;
mod kernels;
mod tables;

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::hash::Hasher;
use std::str::FromStr;

use fnv::FnvHasher;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

pub use audit::{audit_constant_time, AuditReport, AuditRow};
pub use kernels::{
    aes128, build, prince_sbox, sha256_abc_block, sha256_compress, synthetic, synthetic_expected,
    KernelId, KernelProgram, SynthOp, Variant, AES128_CIPHERTEXT, AES128_KEY, AES128_PLAINTEXT,
    ALUMIX_BODY, PRINCE_INPUT, PRINCE_OUTPUT, SHA256_ABC_DIGEST, SHIFTSTORM_BODY, SYNTH_INIT,
    SYNTH_ITERATIONS,
};
pub use tables::{decryption_keys, expand_key, PRINCE_SBOX, SHA256_IV, SHA256_K};

use crate::golden::HaltReason;
use crate::isa::ExtensionSet;
use crate::microarch::{ConfigError, CoreConfig};
use crate::system::{ExecStats, Machine};

/// Cycle cap for one kernel run.
pub const BENCH_MAX_CYCLES: u64 = 50_000_000;

/// Clock used for the time factor `T`.
pub const CLOCK_MHZ: f64 = 100.0;

/// A named extension configuration and the kernel variant it runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    Rv32i,
    Zkn,
    ZknZkt,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::Rv32i, Preset::Zkn, Preset::ZknZkt];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Rv32i => "rv32i",
            Preset::Zkn => "zkn",
            Preset::ZknZkt => "zkn-zkt",
        }
    }

    pub fn extensions(self) -> ExtensionSet {
        match self {
            Preset::Rv32i => ExtensionSet::rv32i(),
            Preset::Zkn => ExtensionSet::zkn(),
            Preset::ZknZkt => ExtensionSet::zkn_zkt(),
        }
    }

    pub fn variant(self) -> Variant {
        match self {
            Preset::Rv32i => Variant::Rv32i,
            Preset::Zkn | Preset::ZknZkt => Variant::Zkn,
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> Result<Preset, String> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| format!("unknown preset `{s}` (expected rv32i, zkn or zkn-zkt)"))
    }
}

/// One (kernel, preset, width) cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchResult {
    pub kernel: KernelId,
    pub variant: Variant,
    pub preset: Preset,
    pub width: u32,
    pub cycles: u64,
    pub instret: u64,
    /// Instruction bytes.
    pub code_size: u32,
    /// Instruction bytes plus tables and buffers.
    pub image_size: u32,
    pub checksum: String,
    /// Run time in microseconds at [`CLOCK_MHZ`].
    pub time_us: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BenchError {
    #[error("{kernel} ({preset}, width {width}): checksum {actual}, expected {expected}")]
    ChecksumMismatch {
        kernel: KernelId,
        preset: Preset,
        width: u32,
        expected: String,
        actual: String,
    },
    #[error("{kernel} ({preset}, width {width}) stopped with {}", .halt.name())]
    Halted {
        kernel: KernelId,
        preset: Preset,
        width: u32,
        halt: HaltReason,
    },
    #[error(transparent)]
    Config(#[from] ConfigError),
}

/// FNV-1a-64 of `bytes` as 16 hex digits.
pub fn checksum(bytes: &[u8]) -> String {
    let mut h = FnvHasher::default();
    h.write(bytes);
    format!("{:016x}", h.finish())
}

/// Runs a kernel to completion and returns its stats and output bytes.
pub fn execute(program: &KernelProgram, config: CoreConfig) -> (ExecStats, Vec<u8>) {
    let mut machine = Machine::new(&program.image, config);
    let stats = machine.run(BENCH_MAX_CYCLES);
    let out = machine
        .core
        .arch
        .mem
        .read_bytes(program.output_addr, program.output_len as usize);
    (stats, out)
}

/// Builds, runs and checks one cell.
pub fn run_cell(kernel: KernelId, preset: Preset, width: u32) -> Result<BenchResult, BenchError> {
    let config = CoreConfig::new(width, preset.extensions())?;
    let (program, expected) = build(kernel, preset.variant());
    let (stats, out) = execute(&program, config);
    if stats.halt != HaltReason::Ebreak {
        return Err(BenchError::Halted {
            kernel,
            preset,
            width,
            halt: stats.halt,
        });
    }
    let (expected, actual) = (checksum(&expected), checksum(&out));
    if expected != actual {
        return Err(BenchError::ChecksumMismatch {
            kernel,
            preset,
            width,
            expected,
            actual,
        });
    }
    Ok(BenchResult {
        kernel,
        variant: preset.variant(),
        preset,
        width,
        cycles: stats.cycles,
        instret: stats.instret,
        code_size: program.image.code_size,
        image_size: program.image.len() as u32,
        checksum: actual,
        time_us: stats.cycles as f64 / CLOCK_MHZ,
    })
}

/// `rv32i` cycles over `preset` cycles at one width.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Speedup {
    pub kernel: KernelId,
    pub preset: Preset,
    pub width: u32,
    pub speedup: f64,
}

/// Cycles at `from` over cycles at the next wider selected width `to`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WidthSpeedup {
    pub kernel: KernelId,
    pub preset: Preset,
    pub from: u32,
    pub to: u32,
    pub speedup: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SizeReduction {
    pub kernel: KernelId,
    pub preset: Preset,
    pub rv32i_bytes: u32,
    pub bytes: u32,
    /// `100 * (1 - bytes / rv32i_bytes)`, on whole images.
    pub reduction_pct: f64,
}

/// `zkn-zkt` cycles over `zkn` cycles.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZktOverhead {
    pub kernel: KernelId,
    pub width: u32,
    pub ratio: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Metrics {
    pub speedup: Vec<Speedup>,
    pub cross_width: Vec<WidthSpeedup>,
    pub code_size_reduction: Vec<SizeReduction>,
    pub zkt_overhead: Vec<ZktOverhead>,
}

impl Metrics {
    pub fn from_results(results: &[BenchResult]) -> Metrics {
        let cell: BTreeMap<(KernelId, Preset, u32), &BenchResult> = results
            .iter()
            .map(|r| ((r.kernel, r.preset, r.width), r))
            .collect();
        let ratio = |a: u64, b: u64| a as f64 / b as f64;
        let mut m = Metrics::default();
        for r in results {
            if r.preset != Preset::Rv32i {
                if let Some(base) = cell.get(&(r.kernel, Preset::Rv32i, r.width)) {
                    m.speedup.push(Speedup {
                        kernel: r.kernel,
                        preset: r.preset,
                        width: r.width,
                        speedup: ratio(base.cycles, r.cycles),
                    });
                }
            }
            if r.preset == Preset::ZknZkt {
                if let Some(plain) = cell.get(&(r.kernel, Preset::Zkn, r.width)) {
                    m.zkt_overhead.push(ZktOverhead {
                        kernel: r.kernel,
                        width: r.width,
                        ratio: ratio(r.cycles, plain.cycles),
                    });
                }
            }
            let wider = cell
                .range((r.kernel, r.preset, r.width + 1)..=(r.kernel, r.preset, u32::MAX))
                .next();
            if let Some((_, w)) = wider {
                m.cross_width.push(WidthSpeedup {
                    kernel: r.kernel,
                    preset: r.preset,
                    from: r.width,
                    to: w.width,
                    speedup: ratio(r.cycles, w.cycles),
                });
            }
        }
        let mut sizes: BTreeMap<(KernelId, Preset), u32> = BTreeMap::new();
        for r in results {
            sizes.insert((r.kernel, r.preset), r.image_size);
        }
        for (&(kernel, preset), &bytes) in &sizes {
            if preset == Preset::Rv32i {
                continue;
            }
            if let Some(&rv32i_bytes) = sizes.get(&(kernel, Preset::Rv32i)) {
                m.code_size_reduction.push(SizeReduction {
                    kernel,
                    preset,
                    rv32i_bytes,
                    bytes,
                    reduction_pct: 100.0 * (1.0 - bytes as f64 / rv32i_bytes as f64),
                });
            }
        }
        m
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub results: Vec<BenchResult>,
    pub metrics: Metrics,
}

impl SuiteReport {
    /// Aligned plain-text table of results followed by derived metrics.
    pub fn table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:<16} {:<8} {:<8} {:>5} {:>10} {:>9} {:>6} {:>6} {:>12}  checksum",
            "kernel", "variant", "preset", "width", "cycles", "instret", "code", "image", "time_us"
        );
        for r in &self.results {
            let _ = writeln!(
                s,
                "{:<16} {:<8} {:<8} {:>5} {:>10} {:>9} {:>6} {:>6} {:>12.2}  {}",
                r.kernel.name(),
                r.variant.to_string(),
                r.preset.name(),
                r.width,
                r.cycles,
                r.instret,
                r.code_size,
                r.image_size,
                r.time_us,
                r.checksum
            );
        }
        let m = &self.metrics;
        if !m.speedup.is_empty() {
            let _ = writeln!(s, "\nspeedup over rv32i");
            for x in &m.speedup {
                let _ = writeln!(
                    s,
                    "  {:<16} {:<8} w{:<3} {:>7.2}x",
                    x.kernel.name(),
                    x.preset.name(),
                    x.width,
                    x.speedup
                );
            }
        }
        if !m.cross_width.is_empty() {
            let _ = writeln!(s, "\ncross-width speedup");
            for x in &m.cross_width {
                let _ = writeln!(
                    s,
                    "  {:<16} {:<8} w{}->w{} {:>7.2}x",
                    x.kernel.name(),
                    x.preset.name(),
                    x.from,
                    x.to,
                    x.speedup
                );
            }
        }
        if !m.code_size_reduction.is_empty() {
            let _ = writeln!(s, "\nimage size reduction");
            for x in &m.code_size_reduction {
                let _ = writeln!(
                    s,
                    "  {:<16} {:<8} {:>6} -> {:>6} bytes {:>6.2}%",
                    x.kernel.name(),
                    x.preset.name(),
                    x.rv32i_bytes,
                    x.bytes,
                    x.reduction_pct
                );
            }
        }
        if !m.zkt_overhead.is_empty() {
            let _ = writeln!(s, "\nzkt slowdown");
            for x in &m.zkt_overhead {
                let _ = writeln!(
                    s,
                    "  {:<16} w{:<3} {:>7.3}x",
                    x.kernel.name(),
                    x.width,
                    x.ratio
                );
            }
        }
        s
    }
}

/// Runs every (kernel, preset, width) cell in parallel. Results are
/// sorted by kernel, preset and width. The first failing cell in that
/// order is returned as the error.
///
/// ```
/// use rvserial::bench::{run_suite, KernelId, Preset};
///
/// let report = run_suite(&[KernelId::PrinceSbox], &[32], &[Preset::Rv32i, Preset::Zkn]).unwrap();
/// assert_eq!(report.results.len(), 2);
/// assert!(report.metrics.speedup[0].speedup > 1.0);
/// ```
pub fn run_suite(
    kernels: &[KernelId],
    widths: &[u32],
    presets: &[Preset],
) -> Result<SuiteReport, BenchError> {
    let mut cells = Vec::new();
    for &k in kernels {
        for &p in presets {
            for &w in widths {
                cells.push((k, p, w));
            }
        }
    }
    cells.sort();
    cells.dedup();
    let results = cells
        .into_par_iter()
        .map(|(k, p, w)| run_cell(k, p, w))
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let metrics = Metrics::from_results(&results);
    Ok(SuiteReport { results, metrics })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_kernel_checks_out() {
        let r = run_suite(&KernelId::ALL, &[8], &Preset::ALL).unwrap();
        assert_eq!(r.results.len(), 18);
        for k in KernelId::ALL {
            let sums: Vec<_> = r
                .results
                .iter()
                .filter(|x| x.kernel == k)
                .map(|x| &x.checksum)
                .collect();
            assert!(sums.windows(2).all(|p| p[0] == p[1]));
        }
    }

    #[test]
    fn zkn_aes_is_faster_and_smaller() {
        let r = run_suite(
            &[KernelId::Aes128Enc, KernelId::Aes128Dec],
            &[1, 32],
            &[Preset::Rv32i, Preset::Zkn],
        )
        .unwrap();
        for s in &r.metrics.speedup {
            assert!(s.speedup > 2.0, "{s:?}");
        }
        for s in &r.metrics.code_size_reduction {
            assert!(s.reduction_pct > 40.0, "{s:?}");
        }
    }

    #[test]
    fn selection_aliases() {
        assert_eq!(KernelId::select("aes128"), Some(vec![KernelId::Aes128Enc]));
        assert_eq!(KernelId::select("crypto").unwrap().len(), 4);
        assert_eq!(KernelId::select("synthetic").unwrap().len(), 2);
        assert_eq!(KernelId::select("nope"), None);
        assert_eq!("zkn-zkt".parse::<Preset>(), Ok(Preset::ZknZkt));
    }

    #[test]
    fn time_factor_tracks_cycles() {
        let r = run_cell(KernelId::Alumix, Preset::Rv32i, 4).unwrap();
        assert_eq!(r.time_us * CLOCK_MHZ, r.cycles as f64);
    }
}
