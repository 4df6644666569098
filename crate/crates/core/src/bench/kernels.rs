// SPDX-License-Identifier: Apache-2.0

//! Hand-assembled benchmark kernels.
//!
//! Each builder returns an image plus the location of its output. Round
//! and block loops are kept rolled; only the per-column or per-nibble
//! work inside one iteration is unrolled.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::tables::{decryption_keys, expand_key, inv_sbox, td0, te0, PRINCE_SBOX, SHA256_K};
use crate::isa::{reg, Assembler, Instr, Mnemonic};
use crate::system::{ProgramImage, DEFAULT_BASE};

use Mnemonic::*;

/// Instruction-set flavour a kernel is written for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Rv32i,
    Zkn,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Rv32i => "rv32i",
            Variant::Zkn => "zkn",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelId {
    Aes128Enc,
    Aes128Dec,
    Sha256Compress,
    PrinceSbox,
    Alumix,
    Shiftstorm,
}

impl KernelId {
    pub const ALL: [KernelId; 6] = [
        KernelId::Aes128Enc,
        KernelId::Aes128Dec,
        KernelId::Sha256Compress,
        KernelId::PrinceSbox,
        KernelId::Alumix,
        KernelId::Shiftstorm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            KernelId::Aes128Enc => "aes128-enc",
            KernelId::Aes128Dec => "aes128-dec",
            KernelId::Sha256Compress => "sha256-compress",
            KernelId::PrinceSbox => "prince-sbox",
            KernelId::Alumix => "alumix",
            KernelId::Shiftstorm => "shiftstorm",
        }
    }

    pub fn is_crypto(self) -> bool {
        !matches!(self, KernelId::Alumix | KernelId::Shiftstorm)
    }

    /// Resolves a kernel name, an alias (`aes128`, `sha256`, `prince`)
    /// or a group (`crypto`, `synthetic`, `all`).
    pub fn select(name: &str) -> Option<Vec<KernelId>> {
        let one = |k| Some(vec![k]);
        match name {
            "aes128" => one(KernelId::Aes128Enc),
            "sha256" => one(KernelId::Sha256Compress),
            "prince" => one(KernelId::PrinceSbox),
            "crypto" => Some(
                KernelId::ALL
                    .into_iter()
                    .filter(|k| k.is_crypto())
                    .collect(),
            ),
            "synthetic" => Some(
                KernelId::ALL
                    .into_iter()
                    .filter(|k| !k.is_crypto())
                    .collect(),
            ),
            "all" => Some(KernelId::ALL.to_vec()),
            _ => KernelId::ALL
                .into_iter()
                .find(|k| k.name() == name)
                .map(|k| vec![k]),
        }
    }
}

impl fmt::Display for KernelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for KernelId {
    type Err = String;

    fn from_str(s: &str) -> Result<KernelId, String> {
        KernelId::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown kernel `{s}`"))
    }
}

/// An assembled kernel and where it leaves its result.
#[derive(Debug, Clone)]
pub struct KernelProgram {
    pub image: ProgramImage,
    pub output_addr: u32,
    pub output_len: u32,
}

impl KernelProgram {
    fn finish(asm: &Assembler, output: &str, output_len: u32) -> KernelProgram {
        let image = asm.assemble(DEFAULT_BASE).expect("kernels are well-formed");
        KernelProgram {
            output_addr: image.symbols[output],
            output_len,
            image,
        }
    }
}

// Register roles shared by the kernels.
const T0: u8 = reg::T0;
const T1: u8 = reg::T1;
const T2: u8 = reg::T2;
const T3: u8 = reg::T3;
const T4: u8 = reg::T4;
const CNT: u8 = reg::S11;

fn r(m: Mnemonic, rd: u8, a: u8, b: u8) -> Instr {
    Instr::r(m, rd, a, b)
}

fn i(m: Mnemonic, rd: u8, a: u8, imm: i32) -> Instr {
    Instr::i(m, rd, a, imm)
}

fn lw(rd: u8, off: i32, base: u8) -> Instr {
    Instr::load(Lw, rd, off, base)
}

fn sw(src: u8, off: i32, base: u8) -> Instr {
    Instr::store(Sw, src, off, base)
}

fn mv(rd: u8, rs: u8) -> Instr {
    i(Addi, rd, rs, 0)
}

/// Loads any 32-bit constant with `lui` + `addi`.
fn li32(asm: &mut Assembler, rd: u8, v: u32) {
    let hi = v.wrapping_add(0x800) >> 12;
    let lo = v.wrapping_sub(hi << 12) as i32;
    asm.push(Instr::upper(Lui, rd, hi as i32));
    asm.push(i(Addi, rd, rd, lo));
}

/// `dst = src` rotated left by `k` without Zbkb.
fn rotl(asm: &mut Assembler, dst: u8, src: u8, k: i32, tmp: u8) {
    asm.push(i(Slli, tmp, src, k));
    asm.push(i(Srli, dst, src, 32 - k));
    asm.push(r(Or, dst, dst, tmp));
}

/// `dst = src` rotated right by `k` without Zbkb.
fn rotr(asm: &mut Assembler, dst: u8, src: u8, k: i32, tmp: u8) {
    rotl(asm, dst, src, 32 - k, tmp)
}

fn loop_tail(asm: &mut Assembler, label: &str) {
    asm.push(i(Addi, CNT, CNT, -1));
    asm.branch(Bne, CNT, reg::ZERO, label);
}

const STATE: [u8; 4] = [reg::S0, reg::S1, reg::S2, reg::S3];
const NEXT: [u8; 4] = [reg::S4, reg::S5, reg::S6, reg::S7];
const TABLE: u8 = reg::S8;
const RK: u8 = reg::S9;
const SBOX: u8 = reg::S10;

/// Byte `row` of `src` scaled to a word index, added to `base`, into T0.
fn table_index(asm: &mut Assembler, src: u8, row: i32, base: u8, scale: bool) {
    if row == 0 {
        asm.push(i(Andi, T0, src, 0xff));
    } else {
        asm.push(i(Srli, T0, src, 8 * row));
        if row < 3 {
            asm.push(i(Andi, T0, T0, 0xff));
        }
    }
    if scale {
        asm.push(i(Slli, T0, T0, 2));
    }
    asm.push(r(Add, T0, T0, base));
}

/// AES-128 on one block, encrypting or decrypting, written for `variant`.
/// The key is expanded on the host; decryption uses the equivalent
/// inverse cipher's key schedule.
pub fn aes128(key: &[u8; 16], block: &[u8; 16], decrypt: bool, variant: Variant) -> KernelProgram {
    let rk = expand_key(key);
    let keys = if decrypt { decryption_keys(&rk) } else { rk };
    // Column `c` of the next state takes row `r` from column c+r
    // (encryption) or c-r (decryption).
    let source = |c: usize, row: usize| {
        if decrypt {
            STATE[(c + 4 - row) % 4]
        } else {
            STATE[(c + row) % 4]
        }
    };

    let mut asm = Assembler::new();
    asm.la(RK, "rk");
    asm.la(T1, "in");
    if variant == Variant::Rv32i {
        asm.la(TABLE, "table");
        if decrypt {
            asm.la(SBOX, "inv_sbox");
        }
    }
    for (c, &s) in STATE.iter().enumerate() {
        asm.push(lw(s, 4 * c as i32, T1));
        asm.push(lw(T0, 4 * c as i32, RK));
        asm.push(r(Xor, s, s, T0));
    }
    asm.push(i(Addi, RK, RK, 16));
    asm.push(i(Addi, CNT, reg::ZERO, 9));

    asm.label("round");
    for (c, &n) in NEXT.iter().enumerate() {
        match variant {
            Variant::Zkn => {
                let m = if decrypt { Aes32dsmi } else { Aes32esmi };
                asm.push(lw(n, 4 * c as i32, RK));
                for row in 0..4 {
                    asm.push(Instr::aes(m, n, n, source(c, row), row as u8));
                }
            }
            Variant::Rv32i => {
                table_index(&mut asm, source(c, 0), 0, TABLE, true);
                asm.push(lw(n, 0, T0));
                for row in 1..4 {
                    table_index(&mut asm, source(c, row), row as i32, TABLE, true);
                    asm.push(lw(T1, 0, T0));
                    rotl(&mut asm, T1, T1, 8 * row as i32, T2);
                    asm.push(r(Xor, n, n, T1));
                }
                asm.push(lw(T0, 4 * c as i32, RK));
                asm.push(r(Xor, n, n, T0));
            }
        }
    }
    for c in 0..4 {
        asm.push(mv(STATE[c], NEXT[c]));
    }
    asm.push(i(Addi, RK, RK, 16));
    loop_tail(&mut asm, "round");

    for (c, &n) in NEXT.iter().enumerate() {
        match variant {
            Variant::Zkn => {
                let m = if decrypt { Aes32dsi } else { Aes32esi };
                asm.push(lw(n, 4 * c as i32, RK));
                for row in 0..4 {
                    asm.push(Instr::aes(m, n, n, source(c, row), row as u8));
                }
            }
            Variant::Rv32i => {
                // Encryption reads the S-box from byte 1 of the T-table;
                // decryption has a separate inverse S-box.
                let (base, scale, off) = if decrypt {
                    (SBOX, false, 0)
                } else {
                    (TABLE, true, 1)
                };
                for row in 0..4 {
                    table_index(&mut asm, source(c, row), row as i32, base, scale);
                    let dst = if row == 0 { n } else { T1 };
                    asm.push(Instr::load(Lbu, dst, off, T0));
                    if row > 0 {
                        asm.push(i(Slli, T1, T1, 8 * row as i32));
                        asm.push(r(Or, n, n, T1));
                    }
                }
                asm.push(lw(T0, 4 * c as i32, RK));
                asm.push(r(Xor, n, n, T0));
            }
        }
    }
    asm.la(T1, "out");
    for (c, &n) in NEXT.iter().enumerate() {
        asm.push(sw(n, 4 * c as i32, T1));
    }
    asm.push(Instr::ebreak());

    asm.data_words("rk", &keys);
    asm.data_bytes("in", block);
    asm.data_zeroed("out", 16);
    if variant == Variant::Rv32i {
        asm.data_words("table", &if decrypt { td0() } else { te0() });
        if decrypt {
            asm.data_bytes("inv_sbox", &inv_sbox());
        }
    }
    KernelProgram::finish(&asm, "out", 16)
}

/// `dst = ror(x,a) ^ ror(x,b) ^ (x >> c or ror(x,c))` without Zknh.
fn sigma(asm: &mut Assembler, dst: u8, x: u8, rots: [i32; 2], last: i32, last_is_shift: bool) {
    rotr(asm, dst, x, rots[0], T3);
    rotr(asm, T4, x, rots[1], T3);
    asm.push(r(Xor, dst, dst, T4));
    if last_is_shift {
        asm.push(i(Srli, T4, x, last));
    } else {
        rotr(asm, T4, x, last, T3);
    }
    asm.push(r(Xor, dst, dst, T4));
}

/// SHA-256 compression of one 64-byte block into `state`. The
/// resulting eight state words are the output.
pub fn sha256_compress(state: &[u32; 8], block: &[u8; 64], variant: Variant) -> KernelProgram {
    const H: [u8; 8] = [
        reg::S0,
        reg::S1,
        reg::S2,
        reg::S3,
        reg::S4,
        reg::S5,
        reg::S6,
        reg::S7,
    ];
    let [a, b, c, d, e, f, g, h] = H;
    let (hp, kp, wp) = (reg::S8, reg::S9, reg::S10);
    let zkn = variant == Variant::Zkn;

    let mut asm = Assembler::new();
    asm.la(wp, "w");
    asm.push(i(Addi, CNT, reg::ZERO, 48));
    asm.label("schedule");
    asm.push(lw(T0, 56, wp));
    if zkn {
        asm.push(Instr::unary(Sha256sig1, T1, T0));
    } else {
        sigma(&mut asm, T1, T0, [17, 19], 10, true);
    }
    asm.push(lw(T2, 36, wp));
    asm.push(r(Add, T1, T1, T2));
    asm.push(lw(T0, 4, wp));
    if zkn {
        asm.push(Instr::unary(Sha256sig0, T2, T0));
    } else {
        sigma(&mut asm, T2, T0, [7, 18], 3, true);
    }
    asm.push(r(Add, T1, T1, T2));
    asm.push(lw(T0, 0, wp));
    asm.push(r(Add, T1, T1, T0));
    asm.push(sw(T1, 64, wp));
    asm.push(i(Addi, wp, wp, 4));
    loop_tail(&mut asm, "schedule");

    asm.la(hp, "h");
    for (k, &x) in H.iter().enumerate() {
        asm.push(lw(x, 4 * k as i32, hp));
    }
    asm.la(kp, "k");
    asm.la(wp, "w");
    asm.push(i(Addi, CNT, reg::ZERO, 64));
    asm.label("round");
    // T1 = h + S1(e) + Ch(e, f, g) + K[t] + W[t]
    if zkn {
        asm.push(Instr::unary(Sha256sum1, T1, e));
        asm.push(r(And, T2, e, f));
        asm.push(r(Andn, reg::A0, g, e));
    } else {
        sigma(&mut asm, T1, e, [6, 11], 25, false);
        asm.push(r(And, T2, e, f));
        asm.push(i(Xori, reg::A0, e, -1));
        asm.push(r(And, reg::A0, reg::A0, g));
    }
    asm.push(r(Xor, T2, T2, reg::A0));
    asm.push(r(Add, T1, T1, T2));
    asm.push(r(Add, T1, T1, h));
    asm.push(lw(T2, 0, kp));
    asm.push(r(Add, T1, T1, T2));
    asm.push(lw(T2, 0, wp));
    asm.push(r(Add, T1, T1, T2));
    // T2 = S0(a) + Maj(a, b, c)
    if zkn {
        asm.push(Instr::unary(Sha256sum0, T2, a));
    } else {
        sigma(&mut asm, T2, a, [2, 13], 22, false);
    }
    asm.push(r(Or, reg::A0, a, b));
    asm.push(r(And, reg::A0, reg::A0, c));
    asm.push(r(And, reg::A1, a, b));
    asm.push(r(Or, reg::A0, reg::A0, reg::A1));
    asm.push(r(Add, T2, T2, reg::A0));
    asm.extend([
        mv(h, g),
        mv(g, f),
        mv(f, e),
        r(Add, e, d, T1),
        mv(d, c),
        mv(c, b),
        mv(b, a),
        r(Add, a, T1, T2),
    ]);
    asm.push(i(Addi, kp, kp, 4));
    asm.push(i(Addi, wp, wp, 4));
    loop_tail(&mut asm, "round");

    asm.la(T1, "out");
    for (k, &x) in H.iter().enumerate() {
        asm.push(lw(T0, 4 * k as i32, hp));
        asm.push(r(Add, x, x, T0));
        asm.push(sw(x, 4 * k as i32, T1));
    }
    asm.push(Instr::ebreak());

    let mut w = [0u32; 64];
    for (t, chunk) in block.chunks(4).enumerate() {
        w[t] = u32::from_be_bytes([chunk[0], chunk[1], chunk[2], chunk[3]]);
    }
    asm.data_words("h", state);
    asm.data_words("k", &SHA256_K);
    asm.data_words("w", &w);
    asm.data_zeroed("out", 32);
    KernelProgram::finish(&asm, "out", 32)
}

/// Applies the PRINCE S-box to every nibble of `input`.
///
/// The Zbkx variant splits the S-box into two 8-entry nibble tables and
/// combines two `xperm4` lookups; the base variant indexes a byte table
/// once per nibble.
pub fn prince_sbox(input: &[u32], variant: Variant) -> KernelProgram {
    let (ip, op) = (reg::S0, reg::S1);
    let mut asm = Assembler::new();
    asm.la(ip, "in");
    asm.la(op, "out");
    asm.push(i(Addi, CNT, reg::ZERO, input.len() as i32));
    let (lo, hi, m8) = (reg::S2, reg::S3, reg::S4);
    match variant {
        Variant::Zkn => {
            let pack = |range: std::ops::Range<usize>| {
                range.enumerate().fold(0u32, |acc, (k, idx)| {
                    acc | (PRINCE_SBOX[idx] as u32) << (4 * k)
                })
            };
            li32(&mut asm, lo, pack(0..8));
            li32(&mut asm, hi, pack(8..16));
            li32(&mut asm, m8, 0x8888_8888);
        }
        Variant::Rv32i => {
            asm.la(lo, "sbox");
        }
    }
    asm.label("word");
    asm.push(lw(T0, 0, ip));
    match variant {
        Variant::Zkn => {
            asm.push(r(Xperm4, T1, lo, T0));
            asm.push(r(Xor, T2, T0, m8));
            asm.push(r(Xperm4, T2, hi, T2));
            asm.push(r(Or, T1, T1, T2));
        }
        Variant::Rv32i => {
            for k in 0..8 {
                let dst = if k == 0 { T1 } else { T2 };
                if k == 0 {
                    asm.push(i(Andi, T3, T0, 15));
                } else {
                    asm.push(i(Srli, T3, T0, 4 * k));
                    if k < 7 {
                        asm.push(i(Andi, T3, T3, 15));
                    }
                }
                asm.push(r(Add, T3, T3, lo));
                asm.push(Instr::load(Lbu, dst, 0, T3));
                if k > 0 {
                    asm.push(i(Slli, T2, T2, 4 * k));
                    asm.push(r(Or, T1, T1, T2));
                }
            }
        }
    }
    asm.push(sw(T1, 0, op));
    asm.push(i(Addi, ip, ip, 4));
    asm.push(i(Addi, op, op, 4));
    loop_tail(&mut asm, "word");
    asm.push(Instr::ebreak());

    asm.data_words("in", input);
    asm.data_zeroed("out", 4 * input.len());
    if variant == Variant::Rv32i {
        asm.data_bytes("sbox", &PRINCE_SBOX);
    }
    KernelProgram::finish(&asm, "out", 4 * input.len() as u32)
}

/// One operation of a synthetic kernel body. `b` is a register for
/// register-register forms and the immediate otherwise.
#[derive(Debug, Clone, Copy)]
pub struct SynthOp {
    pub mnemonic: Mnemonic,
    pub rd: u8,
    pub a: u8,
    pub b: i32,
}

const fn op(mnemonic: Mnemonic, rd: u8, a: u8, b: i32) -> SynthOp {
    SynthOp { mnemonic, rd, a, b }
}

const A: [u8; 8] = [
    reg::A0,
    reg::A1,
    reg::A2,
    reg::A3,
    reg::A4,
    reg::A5,
    reg::A6,
    reg::A7,
];

/// Iterations of the synthetic loops.
pub const SYNTH_ITERATIONS: i32 = 64;

/// Initial register values of the synthetic kernels.
pub const SYNTH_INIT: [u32; 8] = [
    0x0123_4567,
    0x89ab_cdef,
    0xdead_beef,
    0x0bad_f00d,
    0x1357_9bdf,
    0x2468_ace0,
    0x7fff_ffff,
    0x8000_0001,
];

/// 24 register and immediate ALU operations.
pub const ALUMIX_BODY: [SynthOp; 24] = [
    op(Add, A[0], A[0], A[1] as i32),
    op(Xor, A[1], A[1], A[2] as i32),
    op(Sub, A[2], A[2], A[3] as i32),
    op(Or, A[3], A[3], A[4] as i32),
    op(And, A[4], A[4], A[5] as i32),
    op(Addi, A[5], A[5], 0x3a5),
    op(Xori, A[6], A[6], -0x1c7),
    op(Slt, A[7], A[0], A[6] as i32),
    op(Add, A[7], A[7], A[2] as i32),
    op(Sltu, A[3], A[1], A[5] as i32),
    op(Xor, A[3], A[3], A[0] as i32),
    op(Andi, A[4], A[7], 0x7f3),
    op(Ori, A[4], A[4], 0x101),
    op(Sub, A[1], A[0], A[4] as i32),
    op(Add, A[5], A[5], A[1] as i32),
    op(Slti, A[6], A[3], 17),
    op(Xor, A[6], A[6], A[5] as i32),
    op(Sltiu, A[2], A[4], 1000),
    op(Add, A[2], A[2], A[6] as i32),
    op(Or, A[0], A[0], A[2] as i32),
    op(Xor, A[0], A[0], A[7] as i32),
    op(Addi, A[1], A[1], -77),
    op(And, A[7], A[7], A[3] as i32),
    op(Add, A[7], A[7], A[5] as i32),
];

/// Register-amount shifts on data that keeps changing, plus a few
/// immediate shifts and mixing ops.
pub const SHIFTSTORM_BODY: [SynthOp; 16] = [
    op(Srl, A[0], A[1], A[2] as i32),
    op(Sll, A[3], A[4], A[0] as i32),
    op(Sra, A[5], A[6], A[3] as i32),
    op(Xor, A[1], A[1], A[5] as i32),
    op(Add, A[2], A[2], A[7] as i32),
    op(Sll, A[6], A[6], A[1] as i32),
    op(Srl, A[4], A[4], A[2] as i32),
    op(Addi, A[7], A[7], 0x135),
    op(Slli, A[0], A[3], 9),
    op(Srai, A[3], A[5], 23),
    op(Xor, A[4], A[4], A[0] as i32),
    op(Sra, A[6], A[7], A[4] as i32),
    op(Add, A[1], A[1], A[6] as i32),
    op(Srli, A[5], A[2], 5),
    op(Or, A[4], A[4], A[5] as i32),
    op(Xor, A[2], A[2], A[3] as i32),
];

fn synth_instr(o: &SynthOp) -> Instr {
    use crate::isa::Format;
    match o.mnemonic.format() {
        Format::R => r(o.mnemonic, o.rd, o.a, o.b as u8),
        _ => i(o.mnemonic, o.rd, o.a, o.b),
    }
}

/// A loop of `body` run [`SYNTH_ITERATIONS`] times over registers
/// a0..a7, which are then stored as the output.
pub fn synthetic(body: &[SynthOp]) -> KernelProgram {
    let mut asm = Assembler::new();
    for (k, &v) in SYNTH_INIT.iter().enumerate() {
        li32(&mut asm, A[k], v);
    }
    asm.push(i(Addi, CNT, reg::ZERO, SYNTH_ITERATIONS));
    asm.label("loop");
    asm.extend(body.iter().map(synth_instr));
    loop_tail(&mut asm, "loop");
    asm.la(T0, "out");
    for (k, &x) in A.iter().enumerate() {
        asm.push(sw(x, 4 * k as i32, T0));
    }
    asm.push(Instr::ebreak());
    asm.data_zeroed("out", 32);
    KernelProgram::finish(&asm, "out", 32)
}

/// Host evaluation of a synthetic kernel, with Rust integer operators.
pub fn synthetic_expected(body: &[SynthOp]) -> Vec<u8> {
    let mut x = [0u32; 32];
    for (k, &v) in SYNTH_INIT.iter().enumerate() {
        x[A[k] as usize] = v;
    }
    for _ in 0..SYNTH_ITERATIONS {
        for o in body {
            let a = x[o.a as usize];
            let rb = x[(o.b as u32 & 31) as usize];
            let imm = o.b as u32;
            let v = match o.mnemonic {
                Add => a.wrapping_add(rb),
                Sub => a.wrapping_sub(rb),
                Xor => a ^ rb,
                Or => a | rb,
                And => a & rb,
                Slt => ((a as i32) < (rb as i32)) as u32,
                Sltu => (a < rb) as u32,
                Sll => a.wrapping_shl(rb),
                Srl => a.wrapping_shr(rb),
                Sra => (a as i32).wrapping_shr(rb) as u32,
                Addi => a.wrapping_add(imm),
                Xori => a ^ imm,
                Ori => a | imm,
                Andi => a & imm,
                Slti => ((a as i32) < o.b) as u32,
                Sltiu => (a < imm) as u32,
                Slli => a << imm,
                Srli => a >> imm,
                Srai => ((a as i32) >> imm) as u32,
                m => panic!("{m} not supported in synthetic kernels"),
            };
            x[o.rd as usize] = v;
        }
    }
    A.iter()
        .flat_map(|&r| x[r as usize].to_le_bytes())
        .collect()
}

/// FIPS-197 appendix C.1 key, plaintext and ciphertext.
pub const AES128_KEY: [u8; 16] = [
    0x00, 0x01, 0x02, 0x03, 0x04, 0x05, 0x06, 0x07, 0x08, 0x09, 0x0a, 0x0b, 0x0c, 0x0d, 0x0e, 0x0f,
];
pub const AES128_PLAINTEXT: [u8; 16] = [
    0x00, 0x11, 0x22, 0x33, 0x44, 0x55, 0x66, 0x77, 0x88, 0x99, 0xaa, 0xbb, 0xcc, 0xdd, 0xee, 0xff,
];
pub const AES128_CIPHERTEXT: [u8; 16] = [
    0x69, 0xc4, 0xe0, 0xd8, 0x6a, 0x7b, 0x04, 0x30, 0xd8, 0xcd, 0xb7, 0x80, 0x70, 0xb4, 0xc5, 0x5a,
];

/// The padded one-block message "abc".
pub fn sha256_abc_block() -> [u8; 64] {
    let mut block = [0u8; 64];
    block[..3].copy_from_slice(b"abc");
    block[3] = 0x80;
    block[63] = 24;
    block
}

/// SHA-256("abc").
pub const SHA256_ABC_DIGEST: [u32; 8] = [
    0xba7816bf, 0x8f01cfea, 0x414140de, 0x5dae2223, 0xb00361a3, 0x96177a9c, 0xb410ff61, 0xf20015ad,
];

/// Every nibble value twice over, four times.
pub const PRINCE_INPUT: [u32; 8] = [
    0x7654_3210,
    0xfedc_ba98,
    0x7654_3210,
    0xfedc_ba98,
    0x7654_3210,
    0xfedc_ba98,
    0x7654_3210,
    0xfedc_ba98,
];

/// S-box of PRINCE_INPUT.
pub const PRINCE_OUTPUT: [u32; 8] = [
    0x19ca_23fb,
    0x4d5e_0876,
    0x19ca_23fb,
    0x4d5e_0876,
    0x19ca_23fb,
    0x4d5e_0876,
    0x19ca_23fb,
    0x4d5e_0876,
];

/// Default program for a kernel, and the output it must produce.
pub fn build(kernel: KernelId, variant: Variant) -> (KernelProgram, Vec<u8>) {
    let le = |w: &[u32]| w.iter().flat_map(|x| x.to_le_bytes()).collect::<Vec<u8>>();
    match kernel {
        KernelId::Aes128Enc => (
            aes128(&AES128_KEY, &AES128_PLAINTEXT, false, variant),
            AES128_CIPHERTEXT.to_vec(),
        ),
        KernelId::Aes128Dec => (
            aes128(&AES128_KEY, &AES128_CIPHERTEXT, true, variant),
            AES128_PLAINTEXT.to_vec(),
        ),
        KernelId::Sha256Compress => (
            sha256_compress(&super::tables::SHA256_IV, &sha256_abc_block(), variant),
            le(&SHA256_ABC_DIGEST),
        ),
        KernelId::PrinceSbox => (prince_sbox(&PRINCE_INPUT, variant), le(&PRINCE_OUTPUT)),
        KernelId::Alumix => (synthetic(&ALUMIX_BODY), synthetic_expected(&ALUMIX_BODY)),
        KernelId::Shiftstorm => (
            synthetic(&SHIFTSTORM_BODY),
            synthetic_expected(&SHIFTSTORM_BODY),
        ),
    }
}
