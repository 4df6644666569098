// SPDX-License-Identifier: Apache-2.0

//! Serializers, the chunk ALU and the shift/multiply sequencers.
//!
//! Every loop iteration here is one clock cycle: the cycle counts the
//! core reports are counted, not looked up.

use serde::Serialize;

use super::timing::{ShiftDirection, ShiftKind, ShiftPlan};

/// A 32-bit shift register with the index of the next chunk it delivers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Serializer {
    pub value: u32,
    pub pos: u32,
}

impl Serializer {
    fn load(&mut self, value: u32) {
        self.value = value;
        self.pos = 0;
    }
}

/// What the sequencer did in a given cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Idle,
    Chunk,
    ShiftStep,
    ShiftBit,
    Mask,
    Multiply,
    Unit,
    Memory,
    Writeback,
    Pad,
    Stall,
    Redirect,
}

/// Serializer contents at the end of one cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ChunkSnapshot {
    pub cycle: u64,
    pub phase: Phase,
    pub serializer1: u32,
    pub serializer2: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaskMode {
    /// Chunk of the operand, unchanged.
    Plain,
    /// Whole multiplicand if the multiplier bit for this step is set.
    ClmulBit,
    /// Result chunk of a byte-indexed crossbar.
    XpermByte,
    /// Result chunk of a nibble-indexed crossbar.
    XpermNibble,
}

/// The operand the ALU sees in sequencer step `step`.
///
/// For `Plain` and the crossbar modes `step` is a chunk index and the
/// result holds `width` bits; for `ClmulBit` it is the multiplier bit
/// index and the result is `data` or zero.
///
/// ```
/// use rvserial::microarch::{alu_mask_select, MaskMode};
///
/// assert_eq!(alu_mask_select(1, 8, MaskMode::Plain, 0, 0xaabbccdd), 0xcc);
/// assert_eq!(alu_mask_select(0, 8, MaskMode::XpermByte, 0x0302_0103, 0xaabbccdd), 0xaa);
/// assert_eq!(alu_mask_select(5, 32, MaskMode::ClmulBit, 0b10_0000, 7), 7);
/// ```
pub fn alu_mask_select(step: u32, width: u32, mode: MaskMode, control: u32, data: u32) -> u32 {
    let mask = chunk_mask(width);
    let lo = step * width;
    match mode {
        MaskMode::Plain => (data >> lo) & mask,
        MaskMode::ClmulBit => {
            if control >> step & 1 == 1 {
                data
            } else {
                0
            }
        }
        MaskMode::XpermByte | MaskMode::XpermNibble => {
            let lane = if mode == MaskMode::XpermByte { 8 } else { 4 };
            let lanes = 32 / lane;
            let mut out = 0;
            for p in 0..width {
                let bit = lo + p;
                let index = (control >> (bit / lane * lane)) & ((1 << lane) - 1);
                if index < lanes {
                    out |= (data >> (index * lane + bit % lane) & 1) << p;
                }
            }
            out
        }
    }
}

fn chunk_mask(width: u32) -> u32 {
    if width == 32 {
        u32::MAX
    } else {
        (1 << width) - 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum ChunkOp {
    Add,
    Sub,
    Xor,
    Or,
    And,
    Andn,
    Orn,
    Xnor,
    Pack,
    Packh,
}

/// Result and flags of a chunked pass.
#[derive(Debug, Clone, Copy)]
pub(crate) struct AluOut {
    pub value: u32,
    pub zero: bool,
    /// Signed `a < b`, valid after `Sub`.
    pub lt: bool,
    /// Unsigned `a < b`, valid after `Sub`.
    pub ltu: bool,
}

/// Per-instruction view of the data path. The core copies its
/// serializers in, runs one instruction and copies them back on commit.
#[derive(Debug, Clone)]
pub(crate) struct Datapath {
    pub width: u32,
    pub cycles: u32,
    pub ser1: Serializer,
    pub ser2: Serializer,
    pub ser2_alu_uses: u64,
    start_cycle: u64,
    pub log: Option<Vec<ChunkSnapshot>>,
}

impl Datapath {
    pub fn new(
        width: u32,
        ser1: Serializer,
        ser2: Serializer,
        start_cycle: u64,
        log: bool,
    ) -> Datapath {
        Datapath {
            width,
            cycles: 0,
            ser1,
            ser2,
            ser2_alu_uses: 0,
            start_cycle,
            log: log.then(Vec::new),
        }
    }

    fn chunks(&self) -> u32 {
        32 / self.width
    }

    pub fn tick(&mut self, phase: Phase) {
        self.cycles += 1;
        if let Some(log) = &mut self.log {
            log.push(ChunkSnapshot {
                cycle: self.start_cycle + self.cycles as u64,
                phase,
                serializer1: self.ser1.value,
                serializer2: self.ser2.value,
            });
        }
    }

    pub fn idle(&mut self, phase: Phase, cycles: u32) {
        for _ in 0..cycles {
            self.tick(phase);
        }
    }

    /// One pass over all chunks, LSB first, with a carry latch between
    /// chunks. Below 32 bits the second operand streams through
    /// Serializer2 and the result chunks shift in behind it; the
    /// full-width path feeds the ALU straight from the register file.
    pub fn chunked(&mut self, op: ChunkOp, a: u32, b: u32) -> AluOut {
        let w = self.width;
        let n = self.chunks();
        let mask = chunk_mask(w) as u64;
        let serial = n > 1;
        self.ser1.load(a);
        if serial {
            self.ser2.load(b);
            self.ser2_alu_uses += 1;
        }
        let mut carry = (op == ChunkOp::Sub) as u64;
        let mut zero = true;
        let mut direct = 0u32;
        let (mut a_msb, mut b_msb, mut r_msb) = (0, 0, 0);
        for k in 0..n {
            let ac = alu_mask_select(0, w, MaskMode::Plain, 0, self.ser1.value) as u64;
            let bc = if serial {
                alu_mask_select(0, w, MaskMode::Plain, 0, self.ser2.value) as u64
            } else {
                b as u64
            };
            let r = match op {
                ChunkOp::Add => {
                    let s = ac + bc + carry;
                    carry = s >> w;
                    s
                }
                ChunkOp::Sub => {
                    let s = ac + (!bc & mask) + carry;
                    carry = s >> w;
                    s
                }
                ChunkOp::Xor => ac ^ bc,
                ChunkOp::Or => ac | bc,
                ChunkOp::And => ac & bc,
                ChunkOp::Andn => ac & !bc,
                ChunkOp::Orn => ac | !bc,
                ChunkOp::Xnor => !(ac ^ bc),
                // Lane routing: the low half of the result comes from the
                // first operand, the high half from the second operand's
                // low bits (tapped 16 or 8 bits behind the stream).
                ChunkOp::Pack | ChunkOp::Packh => {
                    let split = if op == ChunkOp::Pack { 16 } else { 8 };
                    let mut out = 0u64;
                    for p in 0..w {
                        let bit = k * w + p;
                        let v = if bit < split {
                            (a >> bit) & 1
                        } else if bit < 2 * split {
                            (b >> (bit - split)) & 1
                        } else {
                            0
                        };
                        out |= (v as u64) << p;
                    }
                    out
                }
            } & mask;
            zero &= r == 0;
            a_msb = (ac >> (w - 1)) & 1;
            b_msb = (bc >> (w - 1)) & 1;
            r_msb = (r >> (w - 1)) & 1;
            self.ser1.value = self.ser1.value.rotate_right(w);
            self.ser1.pos = (k + 1) % n;
            if serial {
                self.ser2.value = (self.ser2.value >> w) | ((r as u32) << (32 - w));
                self.ser2.pos = (k + 1) % n;
            } else {
                direct = r as u32;
            }
            self.tick(Phase::Chunk);
        }
        let value = if serial { self.ser2.value } else { direct };
        AluOut {
            value,
            zero,
            lt: if a_msb != b_msb {
                a_msb == 1
            } else {
                r_msb == 1
            },
            ltu: carry == 0,
        }
    }

    /// Runs a shift plan on Serializer1.
    pub fn shift(&mut self, plan: ShiftPlan, kind: ShiftKind, shamt: u32, value: u32) -> u32 {
        self.ser1.load(value);
        // The left-shift emulation rotates, then masks.
        let rotate = kind == ShiftKind::Rotate || plan.mask_cycles > 0;
        let step = |v: u32, bits: u32| -> u32 {
            match (plan.direction, rotate, kind) {
                (ShiftDirection::Right, true, _) => v.rotate_right(bits),
                (ShiftDirection::Left, true, _) => v.rotate_left(bits),
                (ShiftDirection::Right, false, ShiftKind::Arithmetic) => {
                    ((v as i32) >> bits) as u32
                }
                (ShiftDirection::Right, false, _) => v >> bits,
                (ShiftDirection::Left, false, _) => v << bits,
            }
        };
        for _ in 0..plan.chunk_steps {
            self.ser1.value = step(self.ser1.value, plan.step_bits);
            self.tick(Phase::ShiftStep);
        }
        for _ in 0..plan.bit_steps {
            self.ser1.value = step(self.ser1.value, 1);
            self.tick(Phase::ShiftBit);
        }
        // Emulated left shift: clear the `shamt` low bits the rotation
        // wrapped around, one chunk per cycle.
        let n = self.chunks().max(1);
        for k in 0..plan.mask_cycles {
            let lo = k * 32 / n;
            let hi = lo + 32 / n;
            for bit in lo..hi.min(shamt) {
                self.ser1.value &= !(1 << bit);
            }
            self.tick(Phase::Mask);
        }
        self.idle(Phase::Writeback, plan.writeback);
        self.idle(Phase::Pad, plan.pad);
        self.ser1.value
    }

    /// Carry-less multiply, one multiplier bit per cycle from the MSB,
    /// accumulating in Serializer1.
    pub fn clmul(&mut self, high: bool, a: u32, b: u32, writeback: u32) -> u32 {
        let mut acc = 0u64;
        for i in (0..32).rev() {
            acc = (acc << 1) ^ alu_mask_select(i, 32, MaskMode::ClmulBit, b, a) as u64;
            self.ser1.value = if high { (acc >> 32) as u32 } else { acc as u32 };
            self.tick(Phase::Multiply);
        }
        self.idle(Phase::Writeback, writeback);
        self.ser1.value
    }

    /// Crossbar permutation, one result chunk per cycle.
    pub fn xperm(&mut self, nibbles: bool, a: u32, b: u32) -> u32 {
        let mode = if nibbles {
            MaskMode::XpermNibble
        } else {
            MaskMode::XpermByte
        };
        let w = self.width;
        let n = self.chunks();
        self.ser1.load(a);
        let mut result = 0;
        for k in 0..n {
            let chunk = alu_mask_select(k, w, mode, b, a);
            if n > 1 {
                self.ser2.value = (self.ser2.value >> w) | (chunk << (32 - w));
                self.ser2.pos = (k + 1) % n;
            } else {
                result = chunk;
            }
            self.tick(Phase::Chunk);
        }
        if n > 1 {
            self.ser2.value
        } else {
            result
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isa::ExtensionSet;
    use crate::microarch::CoreConfig;

    fn dp(w: u32) -> Datapath {
        Datapath::new(w, Serializer::default(), Serializer::default(), 0, true)
    }

    #[test]
    fn chunked_add_matches_wide_add_at_every_width() {
        let cases = [
            (0u32, 0u32),
            (u32::MAX, 1),
            (0x7fff_ffff, 1),
            (0x1234_5678, 0x9abc_def0),
        ];
        for w in [1, 2, 4, 8, 16, 32] {
            for (a, b) in cases {
                let mut d = dp(w);
                assert_eq!(d.chunked(ChunkOp::Add, a, b).value, a.wrapping_add(b));
                assert_eq!(d.cycles, 32 / w);
                let out = dp(w).chunked(ChunkOp::Sub, a, b);
                assert_eq!(out.value, a.wrapping_sub(b));
                assert_eq!(out.ltu, a < b, "w={w} a={a:#x} b={b:#x}");
                assert_eq!(out.lt, (a as i32) < (b as i32));
                assert_eq!(out.zero, a == b);
            }
        }
    }

    #[test]
    fn serializer2_unused_at_full_width() {
        let mut d = dp(32);
        d.chunked(ChunkOp::Xor, 1, 2);
        assert_eq!(d.ser2_alu_uses, 0);
        let mut d = dp(8);
        d.chunked(ChunkOp::Xor, 1, 2);
        assert_eq!(d.ser2_alu_uses, 1);
    }

    #[test]
    fn snapshots_show_lsb_first_progress() {
        let mut d = dp(8);
        d.chunked(ChunkOp::Or, 0x0000_00ff, 0);
        let log = d.log.unwrap();
        assert_eq!(log.len(), 4);
        // first result chunk enters Serializer2 at the top
        assert_eq!(log[0].serializer2 >> 24, 0xff);
        assert_eq!(log[3].serializer2, 0xff);
    }

    #[test]
    fn shifter_counts_cycles() {
        let c = CoreConfig::new(4, ExtensionSet::rv32i()).unwrap();
        let plan = ShiftPlan::new(&c, ShiftDirection::Right, ShiftKind::Arithmetic, 9, false);
        let mut d = dp(4);
        assert_eq!(
            d.shift(plan, ShiftKind::Arithmetic, 9, 0x8000_0000),
            0xffc0_0000
        );
        assert_eq!(d.cycles, plan.cycles());
    }

    #[test]
    fn emulated_left_shift_masks_low_bits() {
        let mut c = CoreConfig::new(2, ExtensionSet::rv32i()).unwrap();
        c.left_shift_support = false;
        for s in 0..32 {
            let plan = ShiftPlan::new(&c, ShiftDirection::Left, ShiftKind::Logical, s, false);
            let mut d = dp(2);
            assert_eq!(
                d.shift(plan, ShiftKind::Logical, s, 0xffff_ffff),
                u32::MAX << s,
                "s={s}"
            );
            assert_eq!(d.cycles, plan.cycles());
        }
    }

    #[test]
    fn clmul_takes_32_steps_plus_writeback() {
        let mut d = dp(4);
        assert_eq!(d.clmul(false, 0x1234_5678, 0, 1), 0);
        assert_eq!(d.cycles, 33);
        assert_eq!(dp(1).clmul(false, 0xdead_beef, 1, 1), 0xdead_beef);
    }

    #[test]
    fn mask_select_modes() {
        assert_eq!(alu_mask_select(3, 32, MaskMode::ClmulBit, 0, 9), 0);
        for w in [1, 4, 8, 32] {
            let n = 32 / w;
            let x = 0xdead_beef;
            let ident: u32 = (0..n)
                .map(|k| alu_mask_select(k, w, MaskMode::XpermByte, 0x0302_0100, x) << (k * w))
                .fold(0, |a, b| a | b);
            assert_eq!(ident, x);
        }
        assert_eq!(
            alu_mask_select(0, 4, MaskMode::XpermNibble, 0x8, 0xffff_ffff),
            0
        );
    }
}
