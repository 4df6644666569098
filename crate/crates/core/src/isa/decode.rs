// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

use super::{Instr, Mnemonic};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("illegal instruction {0:#010x}")]
    IllegalInstruction(u32),
}

pub(super) mod opcode {
    pub const LUI: u32 = 0b011_0111;
    pub const AUIPC: u32 = 0b001_0111;
    pub const JAL: u32 = 0b110_1111;
    pub const JALR: u32 = 0b110_0111;
    pub const BRANCH: u32 = 0b110_0011;
    pub const LOAD: u32 = 0b000_0011;
    pub const STORE: u32 = 0b010_0011;
    pub const IMM: u32 = 0b001_0011;
    pub const REG: u32 = 0b011_0011;
    pub const FENCE: u32 = 0b000_1111;
    pub const SYSTEM: u32 = 0b111_0011;
}

use opcode::*;

fn imm_i(word: u32) -> i32 {
    (word as i32) >> 20
}

fn imm_s(word: u32) -> i32 {
    (((word as i32) >> 25) << 5) | ((word >> 7) & 0x1f) as i32
}

fn imm_b(word: u32) -> i32 {
    let sign = ((word as i32) >> 31) << 12;
    sign | (((word >> 7) & 1) << 11) as i32
        | (((word >> 25) & 0x3f) << 5) as i32
        | (((word >> 8) & 0xf) << 1) as i32
}

fn imm_j(word: u32) -> i32 {
    let sign = ((word as i32) >> 31) << 20;
    sign | (word & 0x000f_f000) as i32
        | (((word >> 20) & 1) << 11) as i32
        | (((word >> 21) & 0x3ff) << 1) as i32
}

/// Decodes one 32-bit instruction word.
///
/// Total over all inputs: every word yields either an [`Instr`] or
/// [`DecodeError::IllegalInstruction`]. Reserved encodings (including the
/// all-zero word, any compressed encoding, and CSR/system words other than
/// `ecall`/`ebreak`) are illegal.
pub fn decode(word: u32) -> Result<Instr, DecodeError> {
    use Mnemonic::*;
    let illegal = Err(DecodeError::IllegalInstruction(word));

    let rd = ((word >> 7) & 0x1f) as u8;
    let funct3 = (word >> 12) & 0x7;
    let rs1 = ((word >> 15) & 0x1f) as u8;
    let rs2 = ((word >> 20) & 0x1f) as u8;
    let funct7 = word >> 25;

    let instr = match word & 0x7f {
        LUI => Instr::upper(Lui, rd, (word >> 12) as i32),
        AUIPC => Instr::upper(Auipc, rd, (word >> 12) as i32),
        JAL => Instr::jal(rd, imm_j(word)),
        JALR if funct3 == 0 => Instr::i(Jalr, rd, rs1, imm_i(word)),
        BRANCH => {
            let m = match funct3 {
                0b000 => Beq,
                0b001 => Bne,
                0b100 => Blt,
                0b101 => Bge,
                0b110 => Bltu,
                0b111 => Bgeu,
                _ => return illegal,
            };
            Instr::branch(m, rs1, rs2, imm_b(word))
        }
        LOAD => {
            let m = match funct3 {
                0b000 => Lb,
                0b001 => Lh,
                0b010 => Lw,
                0b100 => Lbu,
                0b101 => Lhu,
                _ => return illegal,
            };
            Instr::load(m, rd, imm_i(word), rs1)
        }
        STORE => {
            let m = match funct3 {
                0b000 => Sb,
                0b001 => Sh,
                0b010 => Sw,
                _ => return illegal,
            };
            Instr::store(m, rs2, imm_s(word), rs1)
        }
        IMM => {
            let imm12 = word >> 20;
            match funct3 {
                0b000 => Instr::i(Addi, rd, rs1, imm_i(word)),
                0b010 => Instr::i(Slti, rd, rs1, imm_i(word)),
                0b011 => Instr::i(Sltiu, rd, rs1, imm_i(word)),
                0b100 => Instr::i(Xori, rd, rs1, imm_i(word)),
                0b110 => Instr::i(Ori, rd, rs1, imm_i(word)),
                0b111 => Instr::i(Andi, rd, rs1, imm_i(word)),
                0b001 => match (funct7, imm12) {
                    (0b000_0000, _) => Instr::i(Slli, rd, rs1, rs2 as i32),
                    (_, 0x08f) => Instr::unary(Zip, rd, rs1),
                    (_, 0x100) => Instr::unary(Sha256sum0, rd, rs1),
                    (_, 0x101) => Instr::unary(Sha256sum1, rd, rs1),
                    (_, 0x102) => Instr::unary(Sha256sig0, rd, rs1),
                    (_, 0x103) => Instr::unary(Sha256sig1, rd, rs1),
                    _ => return illegal,
                },
                0b101 => match (funct7, imm12) {
                    (0b000_0000, _) => Instr::i(Srli, rd, rs1, rs2 as i32),
                    (0b010_0000, _) => Instr::i(Srai, rd, rs1, rs2 as i32),
                    (0b011_0000, _) => Instr::i(Rori, rd, rs1, rs2 as i32),
                    (_, 0x08f) => Instr::unary(Unzip, rd, rs1),
                    (_, 0x687) => Instr::unary(Brev8, rd, rs1),
                    (_, 0x698) => Instr::unary(Rev8, rd, rs1),
                    _ => return illegal,
                },
                _ => unreachable!("funct3 is 3 bits"),
            }
        }
        REG => {
            let m = match (funct7, funct3) {
                (0b000_0000, 0b000) => Add,
                (0b010_0000, 0b000) => Sub,
                (0b000_0000, 0b001) => Sll,
                (0b000_0000, 0b010) => Slt,
                (0b000_0000, 0b011) => Sltu,
                (0b000_0000, 0b100) => Xor,
                (0b000_0000, 0b101) => Srl,
                (0b010_0000, 0b101) => Sra,
                (0b000_0000, 0b110) => Or,
                (0b000_0000, 0b111) => And,
                (0b011_0000, 0b101) => Ror,
                (0b011_0000, 0b001) => Rol,
                (0b010_0000, 0b111) => Andn,
                (0b010_0000, 0b110) => Orn,
                (0b010_0000, 0b100) => Xnor,
                (0b000_0100, 0b100) => Pack,
                (0b000_0100, 0b111) => Packh,
                (0b000_0101, 0b001) => Clmul,
                (0b000_0101, 0b011) => Clmulh,
                (0b001_0100, 0b010) => Xperm4,
                (0b001_0100, 0b100) => Xperm8,
                (0b010_1000, 0b000) => Sha512sum0r,
                (0b010_1001, 0b000) => Sha512sum1r,
                (0b010_1010, 0b000) => Sha512sig0l,
                (0b010_1011, 0b000) => Sha512sig1l,
                (0b010_1110, 0b000) => Sha512sig0h,
                (0b010_1111, 0b000) => Sha512sig1h,
                (f7, 0b000) => {
                    let m = match f7 & 0x1f {
                        0b1_0001 => Aes32esi,
                        0b1_0011 => Aes32esmi,
                        0b1_0101 => Aes32dsi,
                        0b1_0111 => Aes32dsmi,
                        _ => return illegal,
                    };
                    return Ok(Instr::aes(m, rd, rs1, rs2, (f7 >> 5) as u8));
                }
                _ => return illegal,
            };
            Instr::r(m, rd, rs1, rs2)
        }
        FENCE if funct3 == 0 => Instr {
            rd,
            rs1,
            imm: (word >> 20) as i32,
            ..Instr::fence()
        },
        SYSTEM => match word {
            0x0000_0073 => Instr::ecall(),
            0x0010_0073 => Instr::ebreak(),
            _ => return illegal,
        },
        _ => return illegal,
    };
    Ok(instr)
}
