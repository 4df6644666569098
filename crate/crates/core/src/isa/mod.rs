// SPDX-License-Identifier: Apache-2.0

//! Instruction set: mnemonics, extension subsets, the decoded [`Instr`]
//! form, binary encode/decode and a small programmatic assembler.
//!
//! Coverage is RV32I plus the scalar cryptography subsets Zbkb, Zbkc,
//! Zbkx, Zkne, Zknd and Zknh. Compressed instructions are not supported:
//! any word whose low two bits are not `0b11` is illegal.

mod asm;
mod decode;
mod encode;
mod ext;

use std::fmt;

pub use asm::{assemble, AsmError, Assembler};
pub use decode::{decode, DecodeError};
pub use encode::{encode, EncodeError};
pub use ext::{Extension, ExtensionSet, ParseExtensionError, Subset};

/// ABI register names, for writing kernels by hand.
pub mod reg {
    pub const ZERO: u8 = 0;
    pub const RA: u8 = 1;
    pub const SP: u8 = 2;
    pub const GP: u8 = 3;
    pub const TP: u8 = 4;
    pub const T0: u8 = 5;
    pub const T1: u8 = 6;
    pub const T2: u8 = 7;
    pub const S0: u8 = 8;
    pub const S1: u8 = 9;
    pub const A0: u8 = 10;
    pub const A1: u8 = 11;
    pub const A2: u8 = 12;
    pub const A3: u8 = 13;
    pub const A4: u8 = 14;
    pub const A5: u8 = 15;
    pub const A6: u8 = 16;
    pub const A7: u8 = 17;
    pub const S2: u8 = 18;
    pub const S3: u8 = 19;
    pub const S4: u8 = 20;
    pub const S5: u8 = 21;
    pub const S6: u8 = 22;
    pub const S7: u8 = 23;
    pub const S8: u8 = 24;
    pub const S9: u8 = 25;
    pub const S10: u8 = 26;
    pub const S11: u8 = 27;
    pub const T3: u8 = 28;
    pub const T4: u8 = 29;
    pub const T5: u8 = 30;
    pub const T6: u8 = 31;
}

/// Operand layout of an instruction, which drives encoding, disassembly
/// and the fields that are meaningful in an [`Instr`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    /// `rd, rs1, rs2`
    R,
    /// `rd, rs1, imm` with a signed 12-bit immediate.
    I,
    /// `rd, rs1, shamt` with a 5-bit shift amount.
    Shift,
    /// `rd, rs1` with a fixed immediate selector.
    Unary,
    /// `rd, imm(rs1)`
    Load,
    /// `rs2, imm(rs1)`
    Store,
    /// `rs1, rs2, offset`
    Branch,
    /// `rd, imm20`
    Upper,
    /// `rd, offset`
    Jump,
    /// `rd, rs1, rs2, bs`
    Aes,
    /// fm/pred/succ in the 12-bit immediate.
    Fence,
    /// No operands.
    System,
}

macro_rules! mnemonics {
    ($($variant:ident => $name:literal, $subset:ident, $format:ident, $zkt:literal;)*) => {
        /// Every instruction this simulator understands.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum Mnemonic {
            $($variant,)*
        }

        impl Mnemonic {
            pub const ALL: &'static [Mnemonic] = &[$(Mnemonic::$variant,)*];

            /// Lowercase assembler name.
            pub fn name(self) -> &'static str {
                match self {
                    $(Mnemonic::$variant => $name,)*
                }
            }

            /// The extension subset that owns this mnemonic.
            pub fn subset(self) -> Subset {
                match self {
                    $(Mnemonic::$variant => Subset::$subset,)*
                }
            }

            pub fn format(self) -> Format {
                match self {
                    $(Mnemonic::$variant => Format::$format,)*
                }
            }

            /// Whether the data-independent-latency subset (Zkt) applies.
            pub fn zkt_covered(self) -> bool {
                match self {
                    $(Mnemonic::$variant => $zkt,)*
                }
            }

            pub fn from_name(name: &str) -> Option<Mnemonic> {
                match name {
                    $($name => Some(Mnemonic::$variant),)*
                    _ => None,
                }
            }
        }
    };
}

mnemonics! {
    Lui => "lui", Rv32i, Upper, true;
    Auipc => "auipc", Rv32i, Upper, true;
    Jal => "jal", Rv32i, Jump, false;
    Jalr => "jalr", Rv32i, I, false;
    Beq => "beq", Rv32i, Branch, false;
    Bne => "bne", Rv32i, Branch, false;
    Blt => "blt", Rv32i, Branch, false;
    Bge => "bge", Rv32i, Branch, false;
    Bltu => "bltu", Rv32i, Branch, false;
    Bgeu => "bgeu", Rv32i, Branch, false;
    Lb => "lb", Rv32i, Load, false;
    Lh => "lh", Rv32i, Load, false;
    Lw => "lw", Rv32i, Load, false;
    Lbu => "lbu", Rv32i, Load, false;
    Lhu => "lhu", Rv32i, Load, false;
    Sb => "sb", Rv32i, Store, false;
    Sh => "sh", Rv32i, Store, false;
    Sw => "sw", Rv32i, Store, false;
    Addi => "addi", Rv32i, I, true;
    Slti => "slti", Rv32i, I, true;
    Sltiu => "sltiu", Rv32i, I, true;
    Xori => "xori", Rv32i, I, true;
    Ori => "ori", Rv32i, I, true;
    Andi => "andi", Rv32i, I, true;
    Slli => "slli", Rv32i, Shift, true;
    Srli => "srli", Rv32i, Shift, true;
    Srai => "srai", Rv32i, Shift, true;
    Add => "add", Rv32i, R, true;
    Sub => "sub", Rv32i, R, true;
    Sll => "sll", Rv32i, R, true;
    Slt => "slt", Rv32i, R, true;
    Sltu => "sltu", Rv32i, R, true;
    Xor => "xor", Rv32i, R, true;
    Srl => "srl", Rv32i, R, true;
    Sra => "sra", Rv32i, R, true;
    Or => "or", Rv32i, R, true;
    And => "and", Rv32i, R, true;
    Fence => "fence", Rv32i, Fence, false;
    Ecall => "ecall", Rv32i, System, false;
    Ebreak => "ebreak", Rv32i, System, false;
    Ror => "ror", Zbkb, R, true;
    Rol => "rol", Zbkb, R, true;
    Rori => "rori", Zbkb, Shift, true;
    Andn => "andn", Zbkb, R, true;
    Orn => "orn", Zbkb, R, true;
    Xnor => "xnor", Zbkb, R, true;
    Pack => "pack", Zbkb, R, true;
    Packh => "packh", Zbkb, R, true;
    Brev8 => "brev8", Zbkb, Unary, true;
    Rev8 => "rev8", Zbkb, Unary, true;
    Zip => "zip", Zbkb, Unary, true;
    Unzip => "unzip", Zbkb, Unary, true;
    Clmul => "clmul", Zbkc, R, true;
    Clmulh => "clmulh", Zbkc, R, true;
    Xperm4 => "xperm4", Zbkx, R, true;
    Xperm8 => "xperm8", Zbkx, R, true;
    Aes32esi => "aes32esi", Zkne, Aes, true;
    Aes32esmi => "aes32esmi", Zkne, Aes, true;
    Aes32dsi => "aes32dsi", Zknd, Aes, true;
    Aes32dsmi => "aes32dsmi", Zknd, Aes, true;
    Sha256sig0 => "sha256sig0", Zknh, Unary, true;
    Sha256sig1 => "sha256sig1", Zknh, Unary, true;
    Sha256sum0 => "sha256sum0", Zknh, Unary, true;
    Sha256sum1 => "sha256sum1", Zknh, Unary, true;
    Sha512sig0h => "sha512sig0h", Zknh, R, true;
    Sha512sig0l => "sha512sig0l", Zknh, R, true;
    Sha512sig1h => "sha512sig1h", Zknh, R, true;
    Sha512sig1l => "sha512sig1l", Zknh, R, true;
    Sha512sum0r => "sha512sum0r", Zknh, R, true;
    Sha512sum1r => "sha512sum1r", Zknh, R, true;
}

impl Mnemonic {
    pub fn is_aes32(self) -> bool {
        self.format() == Format::Aes
    }

    pub fn is_branch(self) -> bool {
        self.format() == Format::Branch
    }

    /// Control transfers: branches, `jal` and `jalr`.
    pub fn is_control(self) -> bool {
        self.is_branch() || matches!(self, Mnemonic::Jal | Mnemonic::Jalr)
    }
}

impl fmt::Display for Mnemonic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A decoded instruction.
///
/// Fields that a [`Format`] does not use are zero (and `bs` is `None`)
/// in canonical form; [`decode`] always produces canonical values.
///
/// The meaning of `imm` depends on the format: sign-extended 12-bit value
/// for I/S types, byte offset for branches and `jal`, the raw 20-bit field
/// for `lui`/`auipc`, the shift amount for shifts, and the raw
/// fm/pred/succ field for `fence`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Instr {
    pub mnemonic: Mnemonic,
    pub rd: u8,
    pub rs1: u8,
    pub rs2: u8,
    pub imm: i32,
    /// Byte select, present only on `aes32*`.
    pub bs: Option<u8>,
}

impl Instr {
    fn blank(mnemonic: Mnemonic) -> Instr {
        Instr {
            mnemonic,
            rd: 0,
            rs1: 0,
            rs2: 0,
            imm: 0,
            bs: None,
        }
    }

    /// Register-register form (also the two-source `sha512*` ops).
    pub fn r(mnemonic: Mnemonic, rd: u8, rs1: u8, rs2: u8) -> Instr {
        Instr {
            rd,
            rs1,
            rs2,
            ..Instr::blank(mnemonic)
        }
    }

    /// Register-immediate form, including `jalr` and the immediate shifts.
    pub fn i(mnemonic: Mnemonic, rd: u8, rs1: u8, imm: i32) -> Instr {
        Instr {
            rd,
            rs1,
            imm,
            ..Instr::blank(mnemonic)
        }
    }

    /// Single-source form: `brev8`, `rev8`, `zip`, `unzip`, `sha256*`.
    pub fn unary(mnemonic: Mnemonic, rd: u8, rs1: u8) -> Instr {
        Instr {
            rd,
            rs1,
            ..Instr::blank(mnemonic)
        }
    }

    pub fn load(mnemonic: Mnemonic, rd: u8, offset: i32, base: u8) -> Instr {
        Instr::i(mnemonic, rd, base, offset)
    }

    pub fn store(mnemonic: Mnemonic, src: u8, offset: i32, base: u8) -> Instr {
        Instr {
            rs1: base,
            rs2: src,
            imm: offset,
            ..Instr::blank(mnemonic)
        }
    }

    pub fn branch(mnemonic: Mnemonic, rs1: u8, rs2: u8, offset: i32) -> Instr {
        Instr {
            rs1,
            rs2,
            imm: offset,
            ..Instr::blank(mnemonic)
        }
    }

    /// `lui`/`auipc` with the raw 20-bit upper immediate.
    pub fn upper(mnemonic: Mnemonic, rd: u8, imm20: i32) -> Instr {
        Instr {
            rd,
            imm: imm20,
            ..Instr::blank(mnemonic)
        }
    }

    pub fn jal(rd: u8, offset: i32) -> Instr {
        Instr {
            rd,
            imm: offset,
            ..Instr::blank(Mnemonic::Jal)
        }
    }

    pub fn aes(mnemonic: Mnemonic, rd: u8, rs1: u8, rs2: u8, bs: u8) -> Instr {
        Instr {
            rd,
            rs1,
            rs2,
            bs: Some(bs),
            ..Instr::blank(mnemonic)
        }
    }

    /// `fence iorw, iorw`.
    pub fn fence() -> Instr {
        Instr {
            imm: 0x0ff,
            ..Instr::blank(Mnemonic::Fence)
        }
    }

    pub fn ecall() -> Instr {
        Instr::blank(Mnemonic::Ecall)
    }

    pub fn ebreak() -> Instr {
        Instr::blank(Mnemonic::Ebreak)
    }

    /// `addi x0, x0, 0`
    pub fn nop() -> Instr {
        Instr::i(Mnemonic::Addi, 0, 0, 0)
    }

    /// Registers read by this instruction, in `(rs1, rs2)` order.
    pub fn sources(&self) -> (Option<u8>, Option<u8>) {
        match self.mnemonic.format() {
            Format::R | Format::Aes | Format::Store | Format::Branch => {
                (Some(self.rs1), Some(self.rs2))
            }
            Format::I | Format::Shift | Format::Unary | Format::Load => (Some(self.rs1), None),
            Format::Upper | Format::Jump | Format::Fence | Format::System => (None, None),
        }
    }

    /// Destination register, if the format writes one.
    pub fn dest(&self) -> Option<u8> {
        match self.mnemonic.format() {
            Format::Store | Format::Branch | Format::Fence | Format::System => None,
            _ => Some(self.rd),
        }
    }

    pub fn encode(&self) -> Result<u32, EncodeError> {
        encode(self)
    }
}

fn fence_set(bits: i32) -> String {
    let mut s = String::new();
    for (bit, c) in [(3, 'i'), (2, 'o'), (1, 'r'), (0, 'w')] {
        if bits >> bit & 1 == 1 {
            s.push(c);
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

impl fmt::Display for Instr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.mnemonic;
        match m.format() {
            Format::R => write!(f, "{m} x{}, x{}, x{}", self.rd, self.rs1, self.rs2),
            Format::I | Format::Shift => {
                write!(f, "{m} x{}, x{}, {}", self.rd, self.rs1, self.imm)
            }
            Format::Unary => write!(f, "{m} x{}, x{}", self.rd, self.rs1),
            Format::Load => write!(f, "{m} x{}, {}(x{})", self.rd, self.imm, self.rs1),
            Format::Store => write!(f, "{m} x{}, {}(x{})", self.rs2, self.imm, self.rs1),
            Format::Branch => write!(f, "{m} x{}, x{}, {}", self.rs1, self.rs2, self.imm),
            Format::Upper => write!(f, "{m} x{}, {:#x}", self.rd, self.imm),
            Format::Jump => write!(f, "{m} x{}, {}", self.rd, self.imm),
            Format::Aes => write!(
                f,
                "{m} x{}, x{}, x{}, {}",
                self.rd,
                self.rs1,
                self.rs2,
                self.bs.unwrap_or(0)
            ),
            Format::Fence => {
                let pred = self.imm >> 4 & 0xf;
                let succ = self.imm & 0xf;
                write!(f, "fence {}, {}", fence_set(pred), fence_set(succ))
            }
            Format::System => f.write_str(m.name()),
        }
    }
}
