// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use serde::Serialize;

use super::CoreConfig;
use crate::isa::{Mnemonic, Subset};

/// Groups of instructions that share a latency formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LatencyClass {
    AluChunked,
    Shift,
    Rotate,
    Load,
    Store,
    Branch,
    Jump,
    Clmul,
    Xperm,
    Aes,
    Sha,
    #[serde(rename = "reorder_1cycle")]
    Reorder1Cycle,
    FenceNop,
}

impl LatencyClass {
    pub const ALL: [LatencyClass; 13] = [
        LatencyClass::AluChunked,
        LatencyClass::Shift,
        LatencyClass::Rotate,
        LatencyClass::Load,
        LatencyClass::Store,
        LatencyClass::Branch,
        LatencyClass::Jump,
        LatencyClass::Clmul,
        LatencyClass::Xperm,
        LatencyClass::Aes,
        LatencyClass::Sha,
        LatencyClass::Reorder1Cycle,
        LatencyClass::FenceNop,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LatencyClass::AluChunked => "alu_chunked",
            LatencyClass::Shift => "shift",
            LatencyClass::Rotate => "rotate",
            LatencyClass::Load => "load",
            LatencyClass::Store => "store",
            LatencyClass::Branch => "branch",
            LatencyClass::Jump => "jump",
            LatencyClass::Clmul => "clmul",
            LatencyClass::Xperm => "xperm",
            LatencyClass::Aes => "aes",
            LatencyClass::Sha => "sha",
            LatencyClass::Reorder1Cycle => "reorder_1cycle",
            LatencyClass::FenceNop => "fence_nop",
        }
    }

    pub fn of(m: Mnemonic) -> LatencyClass {
        use Mnemonic::*;
        match m {
            Sll | Slli | Srl | Srli | Sra | Srai => LatencyClass::Shift,
            Ror | Rol | Rori => LatencyClass::Rotate,
            Lb | Lh | Lw | Lbu | Lhu => LatencyClass::Load,
            Sb | Sh | Sw => LatencyClass::Store,
            Beq | Bne | Blt | Bge | Bltu | Bgeu => LatencyClass::Branch,
            Jal | Jalr => LatencyClass::Jump,
            Clmul | Clmulh => LatencyClass::Clmul,
            Xperm4 | Xperm8 => LatencyClass::Xperm,
            Zip | Unzip | Rev8 | Brev8 => LatencyClass::Reorder1Cycle,
            Fence | Ecall | Ebreak => LatencyClass::FenceNop,
            _ => match m.subset() {
                Subset::Zkne | Subset::Zknd => LatencyClass::Aes,
                Subset::Zknh => LatencyClass::Sha,
                _ => LatencyClass::AluChunked,
            },
        }
    }
}

impl fmt::Display for LatencyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftDirection {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftKind {
    Logical,
    Arithmetic,
    Rotate,
}

impl ShiftKind {
    pub fn of(m: Mnemonic) -> Option<(ShiftDirection, ShiftKind)> {
        use Mnemonic::*;
        use ShiftDirection::*;
        Some(match m {
            Sll | Slli => (Left, ShiftKind::Logical),
            Srl | Srli => (Right, ShiftKind::Logical),
            Sra | Srai => (Right, ShiftKind::Arithmetic),
            Rol => (Left, ShiftKind::Rotate),
            Ror | Rori => (Right, ShiftKind::Rotate),
            _ => return None,
        })
    }
}

/// How Serializer1 carries out one shift.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShiftPlan {
    /// Direction Serializer1 actually moves.
    pub direction: ShiftDirection,
    /// Multi-bit steps of `step_bits` each.
    pub chunk_steps: u32,
    pub step_bits: u32,
    pub bit_steps: u32,
    /// Chunk-wise pass clearing the bits a rotation wrapped around.
    pub mask_cycles: u32,
    pub writeback: u32,
    /// Idle cycles added for constant-time execution.
    pub pad: u32,
}

impl ShiftPlan {
    pub fn cycles(&self) -> u32 {
        self.chunk_steps + self.bit_steps + self.mask_cycles + self.writeback + self.pad
    }

    fn moving(direction: ShiftDirection, amount: u32, config: &CoreConfig) -> ShiftPlan {
        let step = config.shift_step();
        ShiftPlan {
            direction,
            chunk_steps: amount / step,
            step_bits: step,
            bit_steps: amount % step,
            mask_cycles: 0,
            writeback: config.latencies.writeback,
            pad: 0,
        }
    }

    /// Shift by `shamt` in the requested direction without padding.
    fn variable(
        config: &CoreConfig,
        direction: ShiftDirection,
        kind: ShiftKind,
        shamt: u32,
    ) -> ShiftPlan {
        match direction {
            ShiftDirection::Right => ShiftPlan::moving(ShiftDirection::Right, shamt, config),
            ShiftDirection::Left => {
                let mut emulated = ShiftPlan::moving(ShiftDirection::Right, 32 - shamt, config);
                if kind != ShiftKind::Rotate {
                    emulated.mask_cycles = config.chunks();
                }
                if !config.left_shift_support {
                    return emulated;
                }
                let native = ShiftPlan::moving(ShiftDirection::Left, shamt, config);
                if native.cycles() <= emulated.cycles() {
                    native
                } else {
                    emulated
                }
            }
        }
    }

    /// The plan the sequencer follows. With `zkt`, idle cycles pad every
    /// shift amount up to the slowest one.
    pub fn new(
        config: &CoreConfig,
        direction: ShiftDirection,
        kind: ShiftKind,
        shamt: u32,
        zkt: bool,
    ) -> ShiftPlan {
        let mut plan = ShiftPlan::variable(config, direction, kind, shamt & 31);
        if zkt {
            let worst = (0..32)
                .map(|s| ShiftPlan::variable(config, direction, kind, s).cycles())
                .max()
                .unwrap_or(0);
            plan.pad = worst - plan.cycles();
        }
        plan
    }
}

/// Cycles Serializer1 spends on one shift or rotate.
///
/// Right shifts move `shamt / step` multi-bit steps, `shamt % step`
/// single-bit steps and write back. Left shifts take the cheaper of the
/// native MSB-directed shift and the emulation (right rotation by
/// `32 - shamt`, plus a chunk-wise masking pass unless rotating); without
/// `left_shift_support` only the emulation is available. With `zkt` the
/// result is the maximum over all shift amounts.
///
/// ```
/// use rvserial::isa::ExtensionSet;
/// use rvserial::microarch::{shift_latency, CoreConfig, ShiftDirection, ShiftKind};
///
/// let c = CoreConfig::new(1, ExtensionSet::rv32i()).unwrap();
/// assert_eq!(shift_latency(&c, ShiftDirection::Right, ShiftKind::Logical, 0, false), 1);
/// assert_eq!(shift_latency(&c, ShiftDirection::Right, ShiftKind::Logical, 31, false), 32);
/// ```
pub fn shift_latency(
    config: &CoreConfig,
    direction: ShiftDirection,
    kind: ShiftKind,
    shamt: u32,
    zkt: bool,
) -> u32 {
    ShiftPlan::new(config, direction, kind, shamt, zkt).cycles()
}
