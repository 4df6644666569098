// SPDX-License-Identifier: Apache-2.0

//! Untimed instruction-level reference model.
//!
//! [`step`] executes exactly one instruction against an [`ArchState`].
//! The cycle-level core in [`crate::microarch`] is checked against this
//! model instruction by instruction.

mod crypto;
mod mem;

use std::fmt;

use serde::Serialize;

pub use crypto::{aes32, aes_sbox_fwd, aes_sbox_inv, clmul, gf_mul, sha2, xperm, xt2, zbkb};
pub use mem::{Memory, CONSOLE_ADDR, EXIT_ADDR};

use crate::isa::{decode, ExtensionSet, Instr, Mnemonic, Subset};
use crate::system::ProgramImage;

/// Why execution stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HaltReason {
    Ebreak,
    Ecall,
    IllegalInstruction,
    MisalignedFetch,
    MisalignedAccess,
    MaxSteps,
}

impl HaltReason {
    pub fn name(self) -> &'static str {
        match self {
            HaltReason::Ebreak => "ebreak",
            HaltReason::Ecall => "ecall",
            HaltReason::IllegalInstruction => "illegal-instruction",
            HaltReason::MisalignedFetch => "misaligned-fetch",
            HaltReason::MisalignedAccess => "misaligned-access",
            HaltReason::MaxSteps => "max-steps",
        }
    }

    /// `ebreak` and `ecall` (including the exit MMIO store) complete the
    /// instruction that raised them; the other reasons do not.
    pub fn retires(self) -> bool {
        matches!(self, HaltReason::Ebreak | HaltReason::Ecall)
    }
}

impl fmt::Display for HaltReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepOutcome {
    Retired,
    Halted(HaltReason),
}

/// One memory write as seen on the bus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StoreRecord {
    pub addr: u32,
    pub size: u32,
    pub value: u32,
}

/// Architectural state: pc, register file, memory and MMIO side effects.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ArchState {
    pub pc: u32,
    pub regs: [u32; 32],
    pub mem: Memory,
    /// Bytes written to [`CONSOLE_ADDR`].
    pub console: Vec<u8>,
    /// Set by `ecall` (from `a0`) or a store to [`EXIT_ADDR`].
    pub exit_code: Option<u32>,
    /// Most recent store performed, MMIO included.
    pub last_store: Option<StoreRecord>,
    /// Instructions retired so far.
    pub instret: u64,
}

impl ArchState {
    pub fn new(pc: u32) -> ArchState {
        ArchState {
            pc,
            ..ArchState::default()
        }
    }

    /// Loads `image` into memory and points pc at its entry.
    pub fn from_image(image: &ProgramImage) -> ArchState {
        let mut state = ArchState::new(image.entry);
        state.mem.load(image.base, &image.bytes);
        state
    }

    pub fn reg(&self, r: u8) -> u32 {
        self.regs[r as usize]
    }

    pub fn set_reg(&mut self, r: u8, value: u32) {
        if r != 0 {
            self.regs[r as usize] = value;
        }
    }
}

/// Result of the value-producing instructions that neither touch memory
/// nor redirect control flow. `b` is `rs2` or the immediate.
pub fn compute(instr: &Instr, a: u32, b: u32, pc: u32) -> u32 {
    use Mnemonic::*;
    let m = instr.mnemonic;
    match m {
        Lui => (instr.imm as u32) << 12,
        Auipc => pc.wrapping_add((instr.imm as u32) << 12),
        Add | Addi => a.wrapping_add(b),
        Sub => a.wrapping_sub(b),
        Slt | Slti => ((a as i32) < (b as i32)) as u32,
        Sltu | Sltiu => (a < b) as u32,
        Xor | Xori => a ^ b,
        Or | Ori => a | b,
        And | Andi => a & b,
        Sll | Slli => a << (b & 31),
        Srl | Srli => a >> (b & 31),
        Sra | Srai => ((a as i32) >> (b & 31)) as u32,
        _ => match m.subset() {
            Subset::Zbkb => zbkb(m, a, b),
            Subset::Zbkc => clmul(m, a, b),
            Subset::Zbkx => xperm(m, a, b),
            Subset::Zkne | Subset::Zknd => aes32(m, a, b, instr.bs.unwrap_or(0)),
            Subset::Zknh => sha2(m, a, b),
            Subset::Rv32i => panic!("{m} has no register result"),
        },
    }
}

/// Branch condition.
pub fn branch_taken(m: Mnemonic, a: u32, b: u32) -> bool {
    use Mnemonic::*;
    match m {
        Beq => a == b,
        Bne => a != b,
        Blt => (a as i32) < (b as i32),
        Bge => (a as i32) >= (b as i32),
        Bltu => a < b,
        Bgeu => a >= b,
        _ => panic!("{m} is not a branch"),
    }
}

/// Access width in bytes for loads and stores.
pub fn access_size(m: Mnemonic) -> u32 {
    use Mnemonic::*;
    match m {
        Lb | Lbu | Sb => 1,
        Lh | Lhu | Sh => 2,
        Lw | Sw => 4,
        _ => panic!("{m} does not access memory"),
    }
}

/// Sign- or zero-extends a raw load value.
pub fn extend_load(m: Mnemonic, raw: u32) -> u32 {
    use Mnemonic::*;
    match m {
        Lb => raw as u8 as i8 as i32 as u32,
        Lh => raw as u16 as i16 as i32 as u32,
        Lbu => raw & 0xff,
        Lhu => raw & 0xffff,
        _ => raw,
    }
}

/// Fetches and decodes the instruction at `pc`, applying the extension
/// gate. Shared by [`step`] and the disassembler.
pub fn fetch(state: &ArchState, exts: ExtensionSet) -> Result<Instr, HaltReason> {
    if !state.pc.is_multiple_of(4) {
        return Err(HaltReason::MisalignedFetch);
    }
    match decode(state.mem.read_u32(state.pc)) {
        Ok(i) if exts.enables(i.mnemonic.subset()) => Ok(i),
        _ => Err(HaltReason::IllegalInstruction),
    }
}

/// Performs a store including the MMIO side effects. Returns `Some` if the
/// store halts the machine.
pub fn perform_store(
    state: &mut ArchState,
    addr: u32,
    size: u32,
    value: u32,
) -> Option<HaltReason> {
    let value = if size == 4 {
        value
    } else {
        value & ((1 << (8 * size)) - 1)
    };
    state.last_store = Some(StoreRecord { addr, size, value });
    match addr {
        CONSOLE_ADDR => {
            state.console.push(value as u8);
            None
        }
        EXIT_ADDR => {
            state.exit_code = Some(value);
            Some(HaltReason::Ecall)
        }
        _ => {
            state.mem.write(addr, size, value);
            None
        }
    }
}

/// Executes one instruction.
///
/// On a halt the pc stays at the halting instruction. Traps leave the
/// state untouched; `ebreak`, `ecall` and the exit store count as retired.
pub fn step(state: &mut ArchState, exts: ExtensionSet) -> StepOutcome {
    use Mnemonic::*;
    let instr = match fetch(state, exts) {
        Ok(i) => i,
        Err(reason) => return StepOutcome::Halted(reason),
    };
    let pc = state.pc;
    let a = state.reg(instr.rs1);
    let b = state.reg(instr.rs2);
    let mut next = pc.wrapping_add(4);
    let m = instr.mnemonic;

    match m {
        Jal | Jalr => {
            let target = if m == Jal {
                pc.wrapping_add(instr.imm as u32)
            } else {
                a.wrapping_add(instr.imm as u32) & !1
            };
            if target % 4 != 0 {
                return StepOutcome::Halted(HaltReason::MisalignedFetch);
            }
            state.set_reg(instr.rd, next);
            next = target;
        }
        Beq | Bne | Blt | Bge | Bltu | Bgeu => {
            if branch_taken(m, a, b) {
                let target = pc.wrapping_add(instr.imm as u32);
                if !target.is_multiple_of(4) {
                    return StepOutcome::Halted(HaltReason::MisalignedFetch);
                }
                next = target;
            }
        }
        Lb | Lh | Lw | Lbu | Lhu => {
            let addr = a.wrapping_add(instr.imm as u32);
            let size = access_size(m);
            if !addr.is_multiple_of(size) {
                return StepOutcome::Halted(HaltReason::MisalignedAccess);
            }
            let value = extend_load(m, state.mem.read(addr, size));
            state.set_reg(instr.rd, value);
        }
        Sb | Sh | Sw => {
            let addr = a.wrapping_add(instr.imm as u32);
            let size = access_size(m);
            if !addr.is_multiple_of(size) {
                return StepOutcome::Halted(HaltReason::MisalignedAccess);
            }
            if let Some(reason) = perform_store(state, addr, size, b) {
                state.instret += 1;
                return StepOutcome::Halted(reason);
            }
        }
        Fence => {}
        Ecall => {
            state.exit_code = Some(state.reg(10));
            state.instret += 1;
            return StepOutcome::Halted(HaltReason::Ecall);
        }
        Ebreak => {
            state.instret += 1;
            return StepOutcome::Halted(HaltReason::Ebreak);
        }
        _ => {
            let operand = match m.format() {
                crate::isa::Format::R | crate::isa::Format::Aes => b,
                _ => instr.imm as u32,
            };
            state.set_reg(instr.rd, compute(&instr, a, operand, pc));
        }
    }
    state.pc = next;
    state.instret += 1;
    StepOutcome::Retired
}

/// Steps until a halt or until `max_steps` instructions have executed.
pub fn run(state: &mut ArchState, exts: ExtensionSet, max_steps: u64) -> HaltReason {
    for _ in 0..max_steps {
        if let StepOutcome::Halted(reason) = step(state, exts) {
            return reason;
        }
    }
    HaltReason::MaxSteps
}
