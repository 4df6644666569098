// SPDX-License-Identifier: Apache-2.0

//! Random program generation and lockstep comparison of the cycle-level
//! core against the reference model.

mod generator;

use std::hash::Hasher;

use fnv::FnvHasher;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

pub use generator::{
    generate, instruction_pool, TortureConfig, TortureProgram, LOOP_REG, SCRATCH_REG,
};

use crate::golden::{self, ArchState, StepOutcome};
use crate::isa::ExtensionSet;
use crate::microarch::{CoreConfig, Fault, MicroCore};

/// Instructions executed before a lockstep run is abandoned. Generated
/// programs finish far below this.
pub const STEP_LIMIT: u64 = 1_000_000;

/// FNV-1a-64 over x1..x31 (little-endian) followed by the window bytes,
/// as 16 lowercase hex digits.
///
/// ```
/// use rvserial::cosim::signature;
/// use rvserial::golden::ArchState;
///
/// let s = ArchState::new(0);
/// assert_eq!(signature(&s, 0, 0).len(), 16);
/// ```
pub fn signature(state: &ArchState, window_base: u32, window_len: u32) -> String {
    let mut h = FnvHasher::default();
    for r in &state.regs[1..] {
        h.write(&r.to_le_bytes());
    }
    h.write(&state.mem.read_bytes(window_base, window_len as usize));
    format!("{:016x}", h.finish())
}

/// The first point where the two models disagree.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[error("divergence at pc {pc:#010x} in {field}")]
pub struct Divergence {
    pub pc: u32,
    /// `pc`, `x<n>`, `store`, `outcome`, `console` or `exit_code`.
    pub field: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CosimError {
    #[error("seed {seed}, width {width}: {divergence}")]
    Divergence {
        seed: u64,
        width: u32,
        divergence: Divergence,
    },
}

/// Verdict for one (program, core) cell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CosimReport {
    pub seed: u64,
    pub width: u32,
    pub extensions: Vec<&'static str>,
    pub pass: bool,
    pub sig_micro: String,
    pub sig_golden: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub divergence_pc: Option<u32>,
    #[serde(skip)]
    pub divergence: Option<Divergence>,
    #[serde(skip)]
    pub instret: u64,
    #[serde(skip)]
    pub cycles: u64,
}

impl CosimReport {
    pub fn into_result(self) -> Result<CosimReport, CosimError> {
        match &self.divergence {
            Some(d) => Err(CosimError::Divergence {
                seed: self.seed,
                width: self.width,
                divergence: d.clone(),
            }),
            None => Ok(self),
        }
    }
}

fn compare(golden: &ArchState, micro: &ArchState, pc: u32) -> Option<Divergence> {
    let field = if golden.pc != micro.pc {
        "pc".to_string()
    } else if let Some(r) = (1..32).find(|&r| golden.regs[r] != micro.regs[r]) {
        format!("x{r}")
    } else if golden.last_store != micro.last_store {
        "store".to_string()
    } else if golden.console != micro.console {
        "console".to_string()
    } else if golden.exit_code != micro.exit_code {
        "exit_code".to_string()
    } else {
        return None;
    };
    Some(Divergence { pc, field })
}

/// Runs `program` on both models in lockstep, comparing architectural
/// state after every instruction, then compares signatures.
pub fn lockstep(
    program: &TortureProgram,
    core: CoreConfig,
    fault: Option<Fault>,
) -> (Option<Divergence>, ArchState, MicroCore) {
    let mut golden_state = ArchState::from_image(&program.image);
    let mut micro = MicroCore::new(core, &program.image);
    if let Some(f) = fault {
        micro.inject_fault(f);
    }
    for _ in 0..STEP_LIMIT {
        let pc = golden_state.pc;
        let g = golden::step(&mut golden_state, core.extensions);
        let m = micro.step().outcome;
        if g != m {
            let d = Divergence {
                pc,
                field: "outcome".to_string(),
            };
            return (Some(d), golden_state, micro);
        }
        if let Some(d) = compare(&golden_state, &micro.arch, pc) {
            return (Some(d), golden_state, micro);
        }
        if let StepOutcome::Halted(_) = g {
            return (None, golden_state, micro);
        }
    }
    let d = Divergence {
        pc: golden_state.pc,
        field: "outcome".to_string(),
    };
    (Some(d), golden_state, micro)
}

/// Generates the program for `torture` and checks `core` against the
/// reference model. `torture.extensions` should match the core's.
pub fn cosim_run(torture: &TortureConfig, core: CoreConfig) -> CosimReport {
    cosim_run_with_fault(torture, core, None)
}

pub fn cosim_run_with_fault(
    torture: &TortureConfig,
    core: CoreConfig,
    fault: Option<Fault>,
) -> CosimReport {
    let program = generate(torture);
    let (divergence, g, m) = lockstep(&program, core, fault);
    let sig_golden = signature(&g, program.window_base, program.window_len);
    let sig_micro = signature(&m.arch, program.window_base, program.window_len);
    CosimReport {
        seed: torture.seed,
        width: core.serial_width,
        extensions: core.extensions.names(),
        pass: divergence.is_none() && sig_golden == sig_micro,
        sig_micro,
        sig_golden,
        divergence_pc: divergence.as_ref().map(|d| d.pc),
        divergence,
        instret: m.arch.instret,
        cycles: m.cycle,
    }
}

/// Every (seed, width) cell, in parallel, ordered by seed then width.
pub fn run_matrix(
    seeds: std::ops::Range<u64>,
    widths: &[u32],
    extensions: ExtensionSet,
    length: usize,
) -> Vec<CosimReport> {
    let cells: Vec<(u64, u32)> = seeds
        .flat_map(|s| widths.iter().map(move |&w| (s, w)))
        .collect();
    let mut reports: Vec<CosimReport> = cells
        .into_par_iter()
        .map(|(seed, width)| {
            let mut torture = TortureConfig::new(seed, extensions);
            torture.length = length;
            let core = CoreConfig::new(width, extensions).expect("valid width");
            cosim_run(&torture, core)
        })
        .collect();
    reports.sort_by_key(|r| (r.seed, r.width));
    reports
}
