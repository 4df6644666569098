// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

use super::decode::opcode;
use super::{Format, Instr, Mnemonic};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodeError {
    #[error("{mnemonic}: field `{field}` value {value} out of range")]
    FieldRange {
        mnemonic: Mnemonic,
        field: &'static str,
        value: i64,
    },
}

struct Fields<'a> {
    instr: &'a Instr,
}

impl Fields<'_> {
    fn err(&self, field: &'static str, value: i64) -> EncodeError {
        EncodeError::FieldRange {
            mnemonic: self.instr.mnemonic,
            field,
            value,
        }
    }

    fn reg(&self, field: &'static str, r: u8) -> Result<u32, EncodeError> {
        if r < 32 {
            Ok(r as u32)
        } else {
            Err(self.err(field, r as i64))
        }
    }

    fn rd(&self) -> Result<u32, EncodeError> {
        Ok(self.reg("rd", self.instr.rd)? << 7)
    }

    fn rs1(&self) -> Result<u32, EncodeError> {
        Ok(self.reg("rs1", self.instr.rs1)? << 15)
    }

    fn rs2(&self) -> Result<u32, EncodeError> {
        Ok(self.reg("rs2", self.instr.rs2)? << 20)
    }

    fn signed(&self, bits: u32) -> Result<u32, EncodeError> {
        let imm = self.instr.imm;
        let lo = -(1i64 << (bits - 1));
        let hi = (1i64 << (bits - 1)) - 1;
        if (lo..=hi).contains(&(imm as i64)) {
            Ok(imm as u32 & ((1u32 << bits) - 1))
        } else {
            Err(self.err("imm", imm as i64))
        }
    }

    fn unsigned(&self, bits: u32) -> Result<u32, EncodeError> {
        let imm = self.instr.imm;
        if imm >= 0 && (imm as i64) < (1i64 << bits) {
            Ok(imm as u32)
        } else {
            Err(self.err("imm", imm as i64))
        }
    }

    /// Even offset in a signed `bits`-wide range.
    fn offset(&self, bits: u32) -> Result<u32, EncodeError> {
        if self.instr.imm & 1 != 0 {
            return Err(self.err("offset", self.instr.imm as i64));
        }
        self.signed(bits)
    }
}

fn funct3(m: Mnemonic) -> u32 {
    use Mnemonic::*;
    match m {
        Beq | Lb | Sb | Addi | Add | Sub | Jalr | Fence => 0b000,
        Aes32esi | Aes32esmi | Aes32dsi | Aes32dsmi => 0b000,
        Sha512sig0h | Sha512sig0l | Sha512sig1h | Sha512sig1l => 0b000,
        Sha512sum0r | Sha512sum1r => 0b000,
        Bne | Lh | Sh | Slli | Sll | Rol | Clmul | Zip => 0b001,
        Sha256sig0 | Sha256sig1 | Sha256sum0 | Sha256sum1 => 0b001,
        Lw | Sw | Slti | Slt | Xperm4 => 0b010,
        Sltiu | Sltu | Clmulh => 0b011,
        Blt | Lbu | Xori | Xor | Xnor | Pack | Xperm8 => 0b100,
        Bge | Lhu | Srli | Srai | Srl | Sra | Ror | Rori | Unzip | Brev8 | Rev8 => 0b101,
        Bltu | Ori | Or | Orn => 0b110,
        Bgeu | Andi | And | Andn | Packh => 0b111,
        Lui | Auipc | Jal | Ecall | Ebreak => 0,
    }
}

fn funct7(m: Mnemonic) -> u32 {
    use Mnemonic::*;
    match m {
        Sub | Sra | Srai | Andn | Orn | Xnor => 0b010_0000,
        Ror | Rol | Rori => 0b011_0000,
        Pack | Packh => 0b000_0100,
        Clmul | Clmulh => 0b000_0101,
        Xperm4 | Xperm8 => 0b001_0100,
        Sha512sum0r => 0b010_1000,
        Sha512sum1r => 0b010_1001,
        Sha512sig0l => 0b010_1010,
        Sha512sig1l => 0b010_1011,
        Sha512sig0h => 0b010_1110,
        Sha512sig1h => 0b010_1111,
        Aes32esi => 0b1_0001,
        Aes32esmi => 0b1_0011,
        Aes32dsi => 0b1_0101,
        Aes32dsmi => 0b1_0111,
        _ => 0,
    }
}

/// 12-bit immediate selector for the single-source Zbkb/Zknh forms.
fn unary_selector(m: Mnemonic) -> u32 {
    use Mnemonic::*;
    match m {
        Zip | Unzip => 0x08f,
        Brev8 => 0x687,
        Rev8 => 0x698,
        Sha256sum0 => 0x100,
        Sha256sum1 => 0x101,
        Sha256sig0 => 0x102,
        Sha256sig1 => 0x103,
        _ => unreachable!("{m} is not a unary instruction"),
    }
}

/// Produces the canonical 32-bit encoding of `instr`.
///
/// Fields the format does not use are ignored. Out-of-range registers,
/// immediates, shift amounts, odd branch offsets and byte selects above 3
/// are reported as [`EncodeError::FieldRange`].
pub fn encode(instr: &Instr) -> Result<u32, EncodeError> {
    use Mnemonic::*;
    let f = Fields { instr };
    let m = instr.mnemonic;
    let f3 = funct3(m) << 12;

    let word = match m.format() {
        Format::R => (funct7(m) << 25) | f.rs2()? | f.rs1()? | f3 | f.rd()? | opcode::REG,
        Format::Aes => {
            let bs = instr.bs.unwrap_or(0);
            if bs > 3 {
                return Err(f.err("bs", bs as i64));
            }
            ((bs as u32) << 30)
                | (funct7(m) << 25)
                | f.rs2()?
                | f.rs1()?
                | f3
                | f.rd()?
                | opcode::REG
        }
        Format::I => {
            let op = if m == Jalr { opcode::JALR } else { opcode::IMM };
            (f.signed(12)? << 20) | f.rs1()? | f3 | f.rd()? | op
        }
        Format::Shift => {
            let shamt = f
                .unsigned(5)
                .map_err(|_| f.err("shamt", instr.imm as i64))?;
            (funct7(m) << 25) | (shamt << 20) | f.rs1()? | f3 | f.rd()? | opcode::IMM
        }
        Format::Unary => (unary_selector(m) << 20) | f.rs1()? | f3 | f.rd()? | opcode::IMM,
        Format::Load => (f.signed(12)? << 20) | f.rs1()? | f3 | f.rd()? | opcode::LOAD,
        Format::Store => {
            let imm = f.signed(12)?;
            ((imm >> 5) << 25) | f.rs2()? | f.rs1()? | f3 | ((imm & 0x1f) << 7) | opcode::STORE
        }
        Format::Branch => {
            let imm = f.offset(13)?;
            (((imm >> 12) & 1) << 31)
                | (((imm >> 5) & 0x3f) << 25)
                | f.rs2()?
                | f.rs1()?
                | f3
                | (((imm >> 1) & 0xf) << 8)
                | (((imm >> 11) & 1) << 7)
                | opcode::BRANCH
        }
        Format::Upper => {
            let op = if m == Lui { opcode::LUI } else { opcode::AUIPC };
            (f.unsigned(20)? << 12) | f.rd()? | op
        }
        Format::Jump => {
            let imm = f.offset(21)?;
            (((imm >> 20) & 1) << 31)
                | (((imm >> 1) & 0x3ff) << 21)
                | (((imm >> 11) & 1) << 20)
                | (imm & 0x000f_f000)
                | f.rd()?
                | opcode::JAL
        }
        Format::Fence => (f.unsigned(12)? << 20) | f.rs1()? | f3 | f.rd()? | opcode::FENCE,
        Format::System => match m {
            Ecall => 0x0000_0073,
            _ => 0x0010_0073,
        },
    };
    Ok(word)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isa::decode;

    #[test]
    fn addi_round_trip() {
        let w = encode(&Instr::i(Mnemonic::Addi, 1, 0, 1)).unwrap();
        assert_eq!(decode(w).unwrap().imm, 1);
        assert_eq!(encode(&Instr::nop()).unwrap(), 0x13);
    }

    #[test]
    fn rori_shamt_32_out_of_range() {
        let err = encode(&Instr::i(Mnemonic::Rori, 1, 2, 32)).unwrap_err();
        assert!(matches!(
            err,
            EncodeError::FieldRange {
                field: "shamt",
                value: 32,
                ..
            }
        ));
    }

    #[test]
    fn aes_byte_select_field() {
        let w = encode(&Instr::aes(Mnemonic::Aes32esmi, 1, 2, 3, 3)).unwrap();
        assert_eq!(w >> 30, 3);
        assert_eq!(w, 0xe631_00b3);
        let err = encode(&Instr::aes(Mnemonic::Aes32esi, 1, 2, 3, 4)).unwrap_err();
        assert!(matches!(err, EncodeError::FieldRange { field: "bs", .. }));
    }

    #[test]
    fn range_errors() {
        assert!(encode(&Instr::i(Mnemonic::Addi, 1, 0, 2048)).is_err());
        assert!(encode(&Instr::i(Mnemonic::Addi, 1, 0, -2048)).is_ok());
        assert!(encode(&Instr::r(Mnemonic::Add, 32, 0, 0)).is_err());
        assert!(encode(&Instr::branch(Mnemonic::Beq, 0, 0, 3)).is_err());
        assert!(encode(&Instr::branch(Mnemonic::Beq, 0, 0, 4096)).is_err());
        assert!(encode(&Instr::jal(0, 1 << 20)).is_err());
        assert!(encode(&Instr::upper(Mnemonic::Lui, 1, 0x10_0000)).is_err());
    }
}
