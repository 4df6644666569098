// SPDX-License-Identifier: Apache-2.0

#![allow(dead_code)]

use rvserial::golden::{self, ArchState};
use rvserial::isa::{reg, ExtensionSet, Format, Instr, Mnemonic};
use rvserial::microarch::{CoreConfig, MicroCore};

/// `mnemonic a0, a1, a2` (or the immediate form with `imm`).
pub fn instr(m: Mnemonic, imm: i32) -> Instr {
    let (rd, rs1, rs2) = (reg::A0, reg::A1, reg::A2);
    match m.format() {
        Format::R => Instr::r(m, rd, rs1, rs2),
        Format::Aes => Instr::aes(m, rd, rs1, rs2, imm as u8 & 3),
        Format::Unary => Instr::unary(m, rd, rs1),
        Format::Upper => Instr::upper(m, rd, imm),
        _ => Instr::i(m, rd, rs1, imm),
    }
}

/// Runs one instruction on a fresh cycle-level core and returns a0 and
/// the cycles charged.
pub fn micro(m: Mnemonic, a: u32, b: u32, imm: i32, width: u32, exts: ExtensionSet) -> (u32, u32) {
    let mut arch = ArchState::new(0x1000);
    arch.set_reg(reg::A1, a);
    arch.set_reg(reg::A2, b);
    let mut core = MicroCore::from_state(CoreConfig::new(width, exts).unwrap(), arch);
    let (cycles, _) = core.run_instruction(&instr(m, imm));
    (core.arch.reg(reg::A0), cycles)
}

/// The same instruction, encoded and stepped on the reference model.
pub fn golden(m: Mnemonic, a: u32, b: u32, imm: i32) -> u32 {
    let mut arch = ArchState::new(0x1000);
    arch.mem.write_u32(0x1000, instr(m, imm).encode().unwrap());
    arch.set_reg(reg::A1, a);
    arch.set_reg(reg::A2, b);
    golden::step(&mut arch, ExtensionSet::zkn_zkt());
    arch.reg(reg::A0)
}
