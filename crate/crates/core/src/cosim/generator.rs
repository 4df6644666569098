// SPDX-License-Identifier: Apache-2.0

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::isa::{reg, Assembler, ExtensionSet, Format, Instr, Mnemonic};
use crate::system::{ProgramImage, DEFAULT_BASE};

/// Register holding the scratch window base.
pub const SCRATCH_REG: u8 = reg::GP;
/// Register used as the counter of generated loops.
pub const LOOP_REG: u8 = reg::TP;

/// Bytes at the end of the window that receive x1..x31 at exit.
const DUMP_BYTES: u32 = 128;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TortureConfig {
    pub seed: u64,
    /// Body instructions, not counting skipped or repeated ones.
    pub length: usize,
    pub extensions: ExtensionSet,
    /// Size of the scratch window in bytes. The last 128 bytes receive
    /// the register dump; random accesses use the rest.
    pub window_size: u32,
    /// Probability that a body slot holds a control-flow block.
    pub branch_density: f64,
    pub base: u32,
}

impl TortureConfig {
    pub fn new(seed: u64, extensions: ExtensionSet) -> TortureConfig {
        TortureConfig {
            seed,
            length: 200,
            extensions,
            window_size: 256,
            branch_density: 0.1,
            base: DEFAULT_BASE,
        }
    }
}

/// A generated program and the memory range its signature covers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TortureProgram {
    pub image: ProgramImage,
    pub window_base: u32,
    pub window_len: u32,
}

struct Gen {
    rng: ChaCha8Rng,
    pool: Vec<Mnemonic>,
    access_bytes: u32,
    labels: usize,
}

impl Gen {
    fn dest(&mut self) -> u8 {
        loop {
            let r = self.rng.gen_range(1..32);
            if r != SCRATCH_REG && r != LOOP_REG {
                return r;
            }
        }
    }

    fn src(&mut self) -> u8 {
        self.rng.gen_range(0..32)
    }

    fn label(&mut self) -> String {
        self.labels += 1;
        format!("l{}", self.labels)
    }

    /// One straight-line instruction drawn uniformly from the pool.
    fn simple(&mut self) -> Instr {
        use Mnemonic::*;
        let m = *self
            .pool
            .choose(&mut self.rng)
            .expect("pool is never empty");
        let rd = self.dest();
        match m.format() {
            Format::R => Instr::r(m, rd, self.src(), self.src()),
            Format::Aes => {
                let bs = self.rng.gen_range(0..4);
                Instr::aes(m, rd, self.src(), self.src(), bs)
            }
            Format::I => Instr::i(m, rd, self.src(), self.rng.gen_range(-2048..2048)),
            Format::Shift => Instr::i(m, rd, self.src(), self.rng.gen_range(0..32)),
            Format::Unary => Instr::unary(m, rd, self.src()),
            Format::Upper => Instr::upper(m, rd, self.rng.gen_range(0..1 << 20)),
            Format::Load | Format::Store => {
                let size = match m {
                    Lb | Lbu | Sb => 1,
                    Lh | Lhu | Sh => 2,
                    _ => 4,
                };
                let offset = self.rng.gen_range(0..self.access_bytes / size) * size;
                if m.format() == Format::Load {
                    Instr::load(m, rd, offset as i32, SCRATCH_REG)
                } else {
                    Instr::store(m, self.src(), offset as i32, SCRATCH_REG)
                }
            }
            Format::Fence => Instr::fence(),
            Format::Branch | Format::Jump | Format::System => unreachable!("not in pool"),
        }
    }

    fn simples(&mut self, asm: &mut Assembler, k: usize) {
        for _ in 0..k {
            let i = self.simple();
            asm.push(i);
        }
    }

    /// Emits one control-flow block; returns how many of its
    /// instructions count towards the body length.
    fn control(&mut self, asm: &mut Assembler) -> usize {
        const BRANCHES: [Mnemonic; 6] = [
            Mnemonic::Beq,
            Mnemonic::Bne,
            Mnemonic::Blt,
            Mnemonic::Bge,
            Mnemonic::Bltu,
            Mnemonic::Bgeu,
        ];
        let skip = self.rng.gen_range(0..4);
        match self.rng.gen_range(0..4) {
            0 => {
                let l = self.label();
                let m = *BRANCHES.choose(&mut self.rng).unwrap();
                let (a, b) = (self.src(), self.src());
                asm.branch(m, a, b, &l);
                self.simples(asm, skip);
                asm.label(&l);
                1
            }
            1 => {
                let l = self.label();
                let rd = self.dest();
                asm.jal(rd, &l);
                self.simples(asm, skip);
                asm.label(&l);
                1
            }
            2 => {
                let (t, rd) = (self.dest(), self.dest());
                asm.push(Instr::upper(Mnemonic::Auipc, t, 0));
                asm.push(Instr::i(Mnemonic::Jalr, rd, t, 8 + 4 * skip as i32));
                self.simples(asm, skip);
                2
            }
            _ => {
                let l = self.label();
                let iters = self.rng.gen_range(1..5);
                let body = self.rng.gen_range(1..4);
                asm.push(Instr::i(Mnemonic::Addi, LOOP_REG, 0, iters));
                asm.label(&l);
                self.simples(asm, body);
                asm.push(Instr::i(Mnemonic::Addi, LOOP_REG, LOOP_REG, -1));
                asm.branch(Mnemonic::Bne, LOOP_REG, 0, &l);
                3 + body
            }
        }
    }
}

/// Instructions the body may draw from: everything enabled except
/// control transfers and the halting system instructions.
pub fn instruction_pool(extensions: ExtensionSet) -> Vec<Mnemonic> {
    Mnemonic::ALL
        .iter()
        .copied()
        .filter(|m| extensions.enables(m.subset()))
        .filter(|m| !m.is_control() && m.format() != Format::System)
        .collect()
}

/// Generates a self-terminating random program.
///
/// Layout: register initialization, the random body, then a dump of
/// x1..x31 into the tail of the scratch window and `ebreak`. The window
/// follows the code and starts with a seed-derived pattern.
pub fn generate(config: &TortureConfig) -> TortureProgram {
    assert!(config.window_size > DUMP_BYTES && config.window_size.is_multiple_of(4));
    let mut g = Gen {
        rng: ChaCha8Rng::seed_from_u64(config.seed),
        pool: instruction_pool(config.extensions),
        access_bytes: config.window_size - DUMP_BYTES,
        labels: 0,
    };
    let mut asm = Assembler::new();

    asm.la(SCRATCH_REG, "window");
    for r in 1..32u8 {
        if r == SCRATCH_REG || r == LOOP_REG {
            continue;
        }
        let v: u32 = g.rng.gen();
        let hi = v.wrapping_add(0x800) >> 12;
        let lo = v.wrapping_sub(hi << 12) as i32;
        asm.push(Instr::upper(Mnemonic::Lui, r, hi as i32));
        asm.push(Instr::i(Mnemonic::Addi, r, r, lo));
    }

    let mut emitted = 0;
    while emitted < config.length {
        if g.rng.gen_bool(config.branch_density.clamp(0.0, 1.0)) {
            emitted += g.control(&mut asm);
        } else {
            let i = g.simple();
            asm.push(i);
            emitted += 1;
        }
    }

    let dump = (config.window_size - DUMP_BYTES) as i32;
    for r in 1..32u8 {
        asm.push(Instr::store(
            Mnemonic::Sw,
            r,
            dump + 4 * (r as i32 - 1),
            SCRATCH_REG,
        ));
    }
    asm.push(Instr::ebreak());

    let pattern: Vec<u8> = (0..config.window_size).map(|_| g.rng.gen()).collect();
    asm.data_bytes("window", &pattern);
    let image = asm
        .assemble(config.base)
        .expect("generated program is always encodable");
    TortureProgram {
        window_base: image.symbols["window"],
        window_len: config.window_size,
        image,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isa::{decode, Subset};

    #[test]
    fn deterministic() {
        let c = TortureConfig::new(7, ExtensionSet::zkn_zkt());
        assert_eq!(generate(&c), generate(&c));
        let other = TortureConfig::new(8, ExtensionSet::zkn_zkt());
        assert_ne!(generate(&c).image.bytes, generate(&other).image.bytes);
    }

    #[test]
    fn base_isa_only() {
        for seed in 0..20 {
            let p = generate(&TortureConfig::new(seed, ExtensionSet::rv32i()));
            for (_, w) in p.image.code_words() {
                assert_eq!(decode(w).unwrap().mnemonic.subset(), Subset::Rv32i);
            }
        }
    }

    #[test]
    fn every_code_word_decodes() {
        for seed in 0..50 {
            let p = generate(&TortureConfig::new(seed, ExtensionSet::zkn()));
            for (pc, w) in p.image.code_words() {
                assert!(decode(w).is_ok(), "seed {seed} pc {pc:#x} word {w:#010x}");
            }
            assert_eq!(p.window_base % 64, 0);
            assert!(p.window_base >= p.image.base + p.image.code_size);
        }
    }
}
