// SPDX-License-Identifier: Apache-2.0

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use super::{encode, EncodeError, Instr, Mnemonic};
use crate::system::ProgramImage;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AsmError {
    #[error("unresolved label `{0}`")]
    UnresolvedLabel(String),
    #[error("label `{0}` defined twice")]
    DuplicateLabel(String),
    #[error(transparent)]
    FieldRange(#[from] EncodeError),
}

#[derive(Debug, Clone)]
enum Item {
    Fixed(Instr),
    Branch {
        mnemonic: Mnemonic,
        rs1: u8,
        rs2: u8,
        label: String,
    },
    Jal {
        rd: u8,
        label: String,
    },
    /// `lui` + `addi` pair loading a label's absolute address.
    LoadAddress {
        rd: u8,
        label: String,
    },
}

impl Item {
    fn words(&self) -> usize {
        match self {
            Item::LoadAddress { .. } => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Location {
    Code(usize),
    Data(usize),
}

/// Programmatic assembler with labels and a trailing data section.
///
/// ```
/// use rvserial::isa::{Assembler, Instr, Mnemonic, reg};
///
/// let mut asm = Assembler::new();
/// asm.li(reg::T0, 3).unwrap();
/// asm.label("loop");
/// asm.push(Instr::i(Mnemonic::Addi, reg::T0, reg::T0, -1));
/// asm.branch(Mnemonic::Bne, reg::T0, reg::ZERO, "loop");
/// asm.push(Instr::ebreak());
/// let image = asm.assemble(0x1000).unwrap();
/// assert_eq!(image.code_size, 16);
/// ```
#[derive(Debug, Clone, Default)]
pub struct Assembler {
    items: Vec<Item>,
    words: usize,
    data: Vec<u8>,
    labels: HashMap<String, Location>,
    duplicate: Option<String>,
}

/// Data section alignment, relative to the image base.
const DATA_ALIGN: usize = 64;

impl Assembler {
    pub fn new() -> Assembler {
        Assembler::default()
    }

    fn define(&mut self, name: &str, loc: Location) {
        if self.labels.insert(name.to_string(), loc).is_some() && self.duplicate.is_none() {
            self.duplicate = Some(name.to_string());
        }
    }

    fn item(&mut self, item: Item) -> &mut Self {
        self.words += item.words();
        self.items.push(item);
        self
    }

    /// Binds `name` to the next instruction.
    pub fn label(&mut self, name: &str) -> &mut Self {
        self.define(name, Location::Code(self.words));
        self
    }

    pub fn push(&mut self, instr: Instr) -> &mut Self {
        self.item(Item::Fixed(instr))
    }

    pub fn extend<I: IntoIterator<Item = Instr>>(&mut self, instrs: I) -> &mut Self {
        for i in instrs {
            self.push(i);
        }
        self
    }

    pub fn branch(&mut self, mnemonic: Mnemonic, rs1: u8, rs2: u8, label: &str) -> &mut Self {
        debug_assert!(mnemonic.is_branch());
        self.item(Item::Branch {
            mnemonic,
            rs1,
            rs2,
            label: label.to_string(),
        })
    }

    pub fn jal(&mut self, rd: u8, label: &str) -> &mut Self {
        self.item(Item::Jal {
            rd,
            label: label.to_string(),
        })
    }

    /// `jal x0, label`
    pub fn j(&mut self, label: &str) -> &mut Self {
        self.jal(0, label)
    }

    pub fn nop(&mut self) -> &mut Self {
        self.push(Instr::nop())
    }

    /// `addi rd, x0, value` for values that fit a 12-bit immediate.
    pub fn li(&mut self, rd: u8, value: i32) -> Result<&mut Self, AsmError> {
        let instr = Instr::i(Mnemonic::Addi, rd, 0, value);
        encode(&instr)?;
        Ok(self.push(instr))
    }

    /// Loads the absolute address of a code or data label (two words).
    pub fn la(&mut self, rd: u8, label: &str) -> &mut Self {
        self.item(Item::LoadAddress {
            rd,
            label: label.to_string(),
        })
    }

    /// Appends little-endian words to the data section under `label`.
    pub fn data_words(&mut self, label: &str, words: &[u32]) -> &mut Self {
        let bytes: Vec<u8> = words.iter().flat_map(|w| w.to_le_bytes()).collect();
        self.data_bytes(label, &bytes)
    }

    /// Appends raw bytes to the data section under `label`, word-aligned.
    pub fn data_bytes(&mut self, label: &str, bytes: &[u8]) -> &mut Self {
        while !self.data.len().is_multiple_of(4) {
            self.data.push(0);
        }
        self.define(label, Location::Data(self.data.len()));
        self.data.extend_from_slice(bytes);
        self
    }

    /// Reserves `len` zero bytes in the data section under `label`.
    pub fn data_zeroed(&mut self, label: &str, len: usize) -> &mut Self {
        self.data_bytes(label, &vec![0; len])
    }

    /// Number of instruction words emitted so far.
    pub fn len(&self) -> usize {
        self.words
    }

    pub fn is_empty(&self) -> bool {
        self.words == 0
    }

    /// Lays out code at `base` followed by the data section and resolves
    /// every label. The entry point is `base`.
    pub fn assemble(&self, base: u32) -> Result<ProgramImage, AsmError> {
        if let Some(name) = &self.duplicate {
            return Err(AsmError::DuplicateLabel(name.clone()));
        }
        let code_size = self.words * 4;
        let data_start = if self.data.is_empty() {
            code_size
        } else {
            code_size.next_multiple_of(DATA_ALIGN)
        };
        let address = |label: &str| -> Result<u32, AsmError> {
            match self.labels.get(label) {
                Some(Location::Code(word)) => Ok(base.wrapping_add(4 * *word as u32)),
                Some(Location::Data(off)) => Ok(base.wrapping_add((data_start + off) as u32)),
                None => Err(AsmError::UnresolvedLabel(label.to_string())),
            }
        };

        let mut bytes = Vec::with_capacity(data_start + self.data.len());
        let mut pc = base;
        for item in &self.items {
            let instrs = match item {
                Item::Fixed(i) => vec![*i],
                Item::Branch {
                    mnemonic,
                    rs1,
                    rs2,
                    label,
                } => {
                    let off = address(label)?.wrapping_sub(pc) as i32;
                    vec![Instr::branch(*mnemonic, *rs1, *rs2, off)]
                }
                Item::Jal { rd, label } => {
                    vec![Instr::jal(*rd, address(label)?.wrapping_sub(pc) as i32)]
                }
                Item::LoadAddress { rd, label } => {
                    let addr = address(label)?;
                    let hi = addr.wrapping_add(0x800) >> 12;
                    let lo = addr.wrapping_sub(hi << 12) as i32;
                    vec![
                        Instr::upper(Mnemonic::Lui, *rd, hi as i32),
                        Instr::i(Mnemonic::Addi, *rd, *rd, lo),
                    ]
                }
            };
            for i in instrs {
                bytes.extend_from_slice(&encode(&i)?.to_le_bytes());
                pc = pc.wrapping_add(4);
            }
        }
        bytes.resize(data_start, 0);
        bytes.extend_from_slice(&self.data);

        let mut symbols = BTreeMap::new();
        for name in self.labels.keys() {
            symbols.insert(name.clone(), address(name)?);
        }
        Ok(ProgramImage {
            base,
            bytes,
            entry: base,
            code_size: code_size as u32,
            symbols,
        })
    }
}

/// Assembles a plain instruction list with no labels or data.
pub fn assemble(instrs: &[Instr], base: u32) -> Result<ProgramImage, AsmError> {
    let mut asm = Assembler::new();
    asm.extend(instrs.iter().copied());
    asm.assemble(base)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isa::{decode, reg};

    #[test]
    fn empty_program() {
        let image = Assembler::new().assemble(0x1000).unwrap();
        assert_eq!(image.code_size, 0);
        assert!(image.bytes.is_empty());
    }

    #[test]
    fn single_ebreak() {
        let image = assemble(&[Instr::ebreak()], 0x1000).unwrap();
        assert_eq!(image.bytes, 0x0010_0073u32.to_le_bytes());
        assert_eq!(image.code_size, 4);
    }

    #[test]
    fn backward_branch_offset_is_label_delta() {
        // loop: addi t0, t0, -1 ; bne t0, x0, loop   -> offset -4
        let mut asm = Assembler::new();
        asm.label("loop");
        asm.push(Instr::i(Mnemonic::Addi, reg::T0, reg::T0, -1));
        asm.branch(Mnemonic::Bne, reg::T0, reg::ZERO, "loop");
        let image = asm.assemble(0x1000).unwrap();
        let bne = decode(image.word_at(0x1004).unwrap()).unwrap();
        assert_eq!(bne.imm, -4);
    }

    #[test]
    fn forward_jump_and_load_address() {
        let mut asm = Assembler::new();
        asm.la(reg::A0, "table");
        asm.j("end");
        asm.nop();
        asm.label("end");
        asm.push(Instr::ebreak());
        asm.data_words("table", &[1, 2, 3]);
        let image = asm.assemble(0x1000).unwrap();
        assert_eq!(image.symbols["end"], 0x1010);
        assert_eq!(image.symbols["table"], 0x1040);
        let j = decode(image.word_at(0x1008).unwrap()).unwrap();
        assert_eq!(j.imm, 8);
        let lui = decode(image.word_at(0x1000).unwrap()).unwrap();
        let addi = decode(image.word_at(0x1004).unwrap()).unwrap();
        assert_eq!(
            ((lui.imm as u32) << 12).wrapping_add(addi.imm as u32),
            0x1040
        );
        assert_eq!(image.word_at(0x1044), Some(2));
    }

    #[test]
    fn load_address_rounds_high_part() {
        let mut asm = Assembler::new();
        asm.la(reg::A0, "far");
        asm.data_zeroed("pad", 0x7c0);
        asm.data_words("far", &[7]);
        let image = asm.assemble(0x1000).unwrap();
        let far = image.symbols["far"];
        assert_eq!(far & 0xfff, 0x800);
        let lui = decode(image.word_at(0x1000).unwrap()).unwrap();
        let addi = decode(image.word_at(0x1004).unwrap()).unwrap();
        assert_eq!(((lui.imm as u32) << 12).wrapping_add(addi.imm as u32), far);
    }

    #[test]
    fn errors() {
        let mut asm = Assembler::new();
        asm.j("nowhere");
        assert_eq!(
            asm.assemble(0).unwrap_err(),
            AsmError::UnresolvedLabel("nowhere".into())
        );
        let mut asm = Assembler::new();
        asm.label("a").label("a");
        assert_eq!(
            asm.assemble(0).unwrap_err(),
            AsmError::DuplicateLabel("a".into())
        );
        assert!(Assembler::new().li(reg::T0, 4096).is_err());
    }
}
