// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::io::{self, Write};

use serde::Serialize;

use super::ProgramImage;
use crate::golden::{self, ArchState, HaltReason, StepOutcome};
use crate::isa::ExtensionSet;
use crate::microarch::{CoreConfig, LatencyClass, MicroCore, Retirement};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ClassStats {
    pub count: u64,
    pub cycles: u64,
}

/// Outcome and counters of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExecStats {
    /// Total cycles including `startup`.
    pub cycles: u64,
    pub instret: u64,
    pub cpi: f64,
    pub halt: HaltReason,
    pub exit_code: Option<u32>,
    /// Retired instructions and the cycles charged to them, per class.
    pub class_histogram: BTreeMap<LatencyClass, ClassStats>,
    pub code_size: u32,
    pub startup: u64,
    pub width: u32,
    pub extensions: ExtensionSet,
    pub console: Vec<u8>,
    /// Chunked ALU passes that went through Serializer2.
    pub ser2_alu_uses: u64,
}

/// Stats in their JSON shape.
#[derive(Debug, Clone, Serialize)]
pub struct StatsJson {
    pub cycles: u64,
    pub instret: u64,
    pub cpi: f64,
    pub halt: &'static str,
    pub code_size: u32,
    pub width: u32,
    pub extensions: Vec<&'static str>,
    pub classes: BTreeMap<&'static str, ClassStats>,
}

impl ExecStats {
    pub fn json(&self) -> StatsJson {
        StatsJson {
            cycles: self.cycles,
            instret: self.instret,
            cpi: self.cpi,
            halt: self.halt.name(),
            code_size: self.code_size,
            width: self.width,
            extensions: self.extensions.names(),
            classes: self
                .class_histogram
                .iter()
                .map(|(c, s)| (c.name(), *s))
                .collect(),
        }
    }
}

/// One retired (or trapping) instruction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceRecord {
    /// Cycle count after the instruction finished.
    pub cycle: u64,
    pub pc: u32,
    pub raw_word: u32,
    pub mnemonic: String,
    pub cycles_charged: u32,
}

pub const TRACE_HEADER: &str = "cycle,pc,raw_word,mnemonic,cycles_charged";

pub fn write_trace_csv<W: Write>(records: &[TraceRecord], mut out: W) -> io::Result<()> {
    writeln!(out, "{TRACE_HEADER}")?;
    for r in records {
        writeln!(
            out,
            "{},0x{:08x},0x{:08x},{},{}",
            r.cycle, r.pc, r.raw_word, r.mnemonic, r.cycles_charged
        )?;
    }
    Ok(())
}

/// The cycle-level core plus run-loop bookkeeping.
#[derive(Debug, Clone)]
pub struct Machine {
    pub core: MicroCore,
    code_size: u32,
    trace: Option<Vec<TraceRecord>>,
}

impl Machine {
    pub fn new(image: &ProgramImage, config: CoreConfig) -> Machine {
        Machine {
            core: MicroCore::new(config, image),
            code_size: image.code_size,
            trace: None,
        }
    }

    pub fn enable_trace(&mut self) {
        self.trace.get_or_insert_with(Vec::new);
    }

    pub fn trace(&self) -> &[TraceRecord] {
        self.trace.as_deref().unwrap_or(&[])
    }

    fn record(&mut self, r: &Retirement) {
        if let Some(t) = &mut self.trace {
            t.push(TraceRecord {
                cycle: self.core.cycle,
                pc: r.pc,
                raw_word: r.raw,
                mnemonic: r
                    .instr
                    .map_or_else(|| "illegal".to_string(), |i| i.mnemonic.name().to_string()),
                cycles_charged: r.cycles,
            });
        }
    }

    /// Runs until a halt or until the next instruction would take the
    /// total past `max_cycles`. The reported cycle count never exceeds
    /// `max_cycles` unless the initial fetch alone already does.
    pub fn run(&mut self, max_cycles: u64) -> ExecStats {
        let mut histogram: BTreeMap<LatencyClass, ClassStats> = BTreeMap::new();
        let halt = loop {
            let budget = max_cycles.saturating_sub(self.core.cycle);
            let Some(r) = self.core.step_within(budget) else {
                break HaltReason::MaxSteps;
            };
            self.record(&r);
            if let Some(class) = r.class {
                let entry = histogram.entry(class).or_default();
                entry.count += 1;
                entry.cycles += r.cycles as u64;
            }
            if let StepOutcome::Halted(reason) = r.outcome {
                break reason;
            }
        };
        let c = &self.core;
        let instret = c.arch.instret;
        ExecStats {
            cycles: c.cycle,
            instret,
            cpi: if instret == 0 {
                0.0
            } else {
                c.cycle as f64 / instret as f64
            },
            halt,
            exit_code: c.arch.exit_code,
            class_histogram: histogram,
            code_size: self.code_size,
            startup: c.startup,
            width: c.config.serial_width,
            extensions: c.config.extensions,
            console: c.arch.console.clone(),
            ser2_alu_uses: c.ser2_alu_uses,
        }
    }
}

/// Runs `image` on a fresh cycle-level core.
///
/// ```
/// use rvserial::isa::{assemble, ExtensionSet, Instr};
/// use rvserial::microarch::CoreConfig;
/// use rvserial::system::run;
///
/// let image = assemble(&[Instr::ebreak()], 0x1000).unwrap();
/// let stats = run(&image, CoreConfig::new(8, ExtensionSet::rv32i()).unwrap(), 1000);
/// assert_eq!(stats.instret, 1);
/// assert_eq!(stats.halt.name(), "ebreak");
/// ```
pub fn run(image: &ProgramImage, config: CoreConfig, max_cycles: u64) -> ExecStats {
    Machine::new(image, config).run(max_cycles)
}

/// Runs `image` on the reference model for at most `max_steps`
/// instructions.
pub fn run_golden(
    image: &ProgramImage,
    extensions: ExtensionSet,
    max_steps: u64,
) -> (ArchState, HaltReason) {
    let mut state = ArchState::from_image(image);
    let halt = golden::run(&mut state, extensions, max_steps);
    (state, halt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isa::{assemble, Assembler, Instr, Mnemonic};

    fn cfg(w: u32) -> CoreConfig {
        CoreConfig::new(w, ExtensionSet::rv32i()).unwrap()
    }

    #[test]
    fn ebreak_only() {
        let image = assemble(&[Instr::ebreak()], 0x1000).unwrap();
        let s = run(&image, cfg(32), 100);
        assert_eq!((s.instret, s.halt), (1, HaltReason::Ebreak));
    }

    #[test]
    fn infinite_loop_hits_cycle_cap() {
        let mut asm = Assembler::new();
        asm.label("spin").j("spin");
        let image = asm.assemble(0x1000).unwrap();
        for w in [1, 4, 32] {
            let s = run(&image, cfg(w), 100);
            assert_eq!(s.halt, HaltReason::MaxSteps);
            assert!(s.cycles <= 100);
        }
    }

    #[test]
    fn ten_adds_at_width_8() {
        let mut prog = vec![Instr::r(Mnemonic::Add, 1, 1, 2); 10];
        prog.push(Instr::ebreak());
        let image = assemble(&prog, 0x1000).unwrap();
        let mut m = Machine::new(&image, cfg(8));
        m.enable_trace();
        let s = m.run(10_000);
        assert_eq!(s.instret, 11);
        assert_eq!(s.cycles, 10 * 4 + 1 + 1);
        let hist: u64 = s.class_histogram.values().map(|c| c.cycles).sum();
        assert_eq!(hist, s.cycles - s.startup);
        let traced: u64 = m.trace().iter().map(|t| t.cycles_charged as u64).sum();
        assert_eq!(traced, hist);
    }

    #[test]
    fn trace_csv_format() {
        let image = assemble(&[Instr::nop(), Instr::ebreak()], 0x1000).unwrap();
        let mut m = Machine::new(&image, cfg(32));
        m.enable_trace();
        m.run(100);
        let mut out = Vec::new();
        write_trace_csv(m.trace(), &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], TRACE_HEADER);
        assert_eq!(lines[1], "2,0x00001000,0x00000013,addi,1");
        assert_eq!(lines[2], "3,0x00001004,0x00100073,ebreak,1");
    }
}
