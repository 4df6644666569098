// SPDX-License-Identifier: Apache-2.0

use super::datapath::{ChunkOp, ChunkSnapshot, Datapath, Phase, Serializer};
use super::timing::{LatencyClass, ShiftKind, ShiftPlan};
use super::units::{aes_unit, reorder_unit, sha_unit};
use super::CoreConfig;
use crate::golden::{ArchState, HaltReason, StepOutcome, StoreRecord, CONSOLE_ADDR, EXIT_ADDR};
use crate::isa::{decode, Format, Instr, Mnemonic};
use crate::system::ProgramImage;

/// Deliberate defect for exercising the lockstep checker.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// XOR `xor` into every register result of `mnemonic`.
    CorruptResult { mnemonic: Mnemonic, xor: u32 },
}

/// What the front end does after an instruction leaves execute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FetchAction {
    /// The buffered `pc + 4` is used. `stall` cycles are spent waiting
    /// for it when execute finished before the fetch did.
    Sequential { stall: u32 },
    /// Buffer flushed by a control transfer.
    Redirect { target: u32, penalty: u32 },
    /// A store overwrote the buffered word, which is fetched again.
    Refetch { cycles: u32 },
    /// The instruction halted the core; nothing is fetched.
    Halt,
}

impl FetchAction {
    pub fn cycles(self) -> u32 {
        match self {
            FetchAction::Sequential { stall } => stall,
            FetchAction::Redirect { penalty, .. } => penalty,
            FetchAction::Refetch { cycles } => cycles,
            FetchAction::Halt => 0,
        }
    }
}

/// Front-end decision for an instruction that spent `exec_cycles` in
/// execute. The next sequential word is fetched over the instruction
/// port while execute runs.
pub fn frontend_step(
    config: &CoreConfig,
    pc: u32,
    exec_cycles: u32,
    next_pc: u32,
    halted: bool,
    store: Option<(u32, u32)>,
) -> FetchAction {
    if halted {
        return FetchAction::Halt;
    }
    if next_pc != pc.wrapping_add(4) {
        return FetchAction::Redirect {
            target: next_pc,
            penalty: config.redirect_penalty(),
        };
    }
    let stall = config.mem_latency.saturating_sub(exec_cycles);
    if let Some((addr, size)) = store {
        let end = addr as u64 + size as u64;
        if (addr as u64) < next_pc as u64 + 4 && end > next_pc as u64 {
            return FetchAction::Refetch {
                cycles: stall + config.mem_latency,
            };
        }
    }
    FetchAction::Sequential { stall }
}

/// One instruction as it left the core.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Retirement {
    pub pc: u32,
    pub raw: u32,
    /// `None` when the word could not be fetched or decoded.
    pub instr: Option<Instr>,
    pub class: Option<LatencyClass>,
    /// Cycles charged to this instruction: execute plus front-end.
    pub cycles: u32,
    pub exec_cycles: u32,
    pub fetch: FetchAction,
    pub outcome: StepOutcome,
}

/// Everything an instruction will change, computed before any of it is
/// applied.
struct Effect {
    rd: Option<(u8, u32)>,
    store: Option<StoreRecord>,
    next_pc: u32,
    halt: Option<HaltReason>,
    dp: Datapath,
    lsu_buffer: u32,
}

/// Cycle-level core: architectural state plus serializers, fetch buffer
/// and load/store buffer.
#[derive(Debug, Clone)]
pub struct MicroCore {
    pub arch: ArchState,
    pub config: CoreConfig,
    pub serializer1: Serializer,
    pub serializer2: Serializer,
    /// `(pc, word)` of the prefetched next instruction.
    pub fetch_buffer: Option<(u32, u32)>,
    pub lsu_buffer: u32,
    pub cycle: u64,
    /// Cycles before the first instruction could start.
    pub startup: u64,
    /// Chunked ALU passes that streamed an operand through Serializer2.
    pub ser2_alu_uses: u64,
    pub phase: Phase,
    fault: Option<Fault>,
    snapshots: Option<Vec<ChunkSnapshot>>,
}

impl MicroCore {
    /// Core with `state` loaded; the first fetch costs `mem_latency`.
    pub fn from_state(config: CoreConfig, arch: ArchState) -> MicroCore {
        let word = arch.mem.read_u32(arch.pc);
        let startup = config.mem_latency as u64;
        MicroCore {
            fetch_buffer: Some((arch.pc, word)),
            arch,
            config,
            serializer1: Serializer::default(),
            serializer2: Serializer::default(),
            lsu_buffer: 0,
            cycle: startup,
            startup,
            ser2_alu_uses: 0,
            phase: Phase::Idle,
            fault: None,
            snapshots: None,
        }
    }

    pub fn new(config: CoreConfig, image: &ProgramImage) -> MicroCore {
        MicroCore::from_state(config, ArchState::from_image(image))
    }

    pub fn inject_fault(&mut self, fault: Fault) {
        self.fault = Some(fault);
    }

    /// Start recording serializer contents every cycle.
    pub fn record_snapshots(&mut self) {
        self.snapshots.get_or_insert_with(Vec::new);
    }

    pub fn take_snapshots(&mut self) -> Vec<ChunkSnapshot> {
        self.snapshots
            .as_mut()
            .map(std::mem::take)
            .unwrap_or_default()
    }

    /// Executes one instruction regardless of cost.
    pub fn step(&mut self) -> Retirement {
        self.step_within(u64::MAX)
            .expect("unbounded step always commits")
    }

    /// Executes one instruction if its full cost fits in `budget` cycles;
    /// otherwise changes nothing and returns `None`.
    pub fn step_within(&mut self, budget: u64) -> Option<Retirement> {
        let pc = self.arch.pc;
        let raw = match self.fetch_buffer {
            Some((p, w)) if p == pc => w,
            _ => self.arch.mem.read_u32(pc),
        };
        let trap = |reason, instr| Retirement {
            pc,
            raw,
            instr,
            class: None,
            cycles: 0,
            exec_cycles: 0,
            fetch: FetchAction::Halt,
            outcome: StepOutcome::Halted(reason),
        };
        if !pc.is_multiple_of(4) {
            return Some(trap(HaltReason::MisalignedFetch, None));
        }
        let instr = match decode(raw) {
            Ok(i) if self.config.extensions.enables(i.mnemonic.subset()) => i,
            Ok(i) => return Some(trap(HaltReason::IllegalInstruction, Some(i))),
            Err(_) => return Some(trap(HaltReason::IllegalInstruction, None)),
        };
        let effect = match self.execute(&instr) {
            Ok(e) => e,
            Err(reason) => return Some(trap(reason, Some(instr))),
        };
        let exec_cycles = effect.dp.cycles;
        let fetch = frontend_step(
            &self.config,
            pc,
            exec_cycles,
            effect.next_pc,
            effect.halt.is_some(),
            effect.store.map(|s| (s.addr, s.size)),
        );
        let cycles = exec_cycles + fetch.cycles();
        if cycles as u64 > budget {
            return None;
        }
        let outcome = self.commit(&instr, effect, fetch);
        Some(Retirement {
            pc,
            raw,
            instr: Some(instr),
            class: Some(LatencyClass::of(instr.mnemonic)),
            cycles,
            exec_cycles,
            fetch,
            outcome,
        })
    }

    /// Runs `instr` as if it had been fetched at the current pc.
    pub fn run_instruction(&mut self, instr: &Instr) -> (u32, StepOutcome) {
        if !self.config.extensions.enables(instr.mnemonic.subset()) {
            return (0, StepOutcome::Halted(HaltReason::IllegalInstruction));
        }
        match self.execute(instr) {
            Err(reason) => (0, StepOutcome::Halted(reason)),
            Ok(effect) => {
                let pc = self.arch.pc;
                let fetch = frontend_step(
                    &self.config,
                    pc,
                    effect.dp.cycles,
                    effect.next_pc,
                    effect.halt.is_some(),
                    effect.store.map(|s| (s.addr, s.size)),
                );
                let cycles = effect.dp.cycles + fetch.cycles();
                (cycles, self.commit(instr, effect, fetch))
            }
        }
    }

    fn execute(&self, instr: &Instr) -> Result<Effect, HaltReason> {
        use Mnemonic::*;
        let c = &self.config;
        let m = instr.mnemonic;
        let pc = self.arch.pc;
        let a = self.arch.reg(instr.rs1);
        let b = self.arch.reg(instr.rs2);
        let imm = instr.imm as u32;
        let zkt = c.extensions.zkt() && m.zkt_covered();
        let mut dp = Datapath::new(
            c.serial_width,
            self.serializer1,
            self.serializer2,
            self.cycle,
            self.snapshots.is_some(),
        );
        let mut lsu_buffer = self.lsu_buffer;
        let mut rd = None;
        let mut store = None;
        let mut next_pc = pc.wrapping_add(4);
        let mut halt = None;
        let second = match m.format() {
            Format::R | Format::Aes => b,
            _ => imm,
        };

        match LatencyClass::of(m) {
            LatencyClass::AluChunked => {
                let value = match m {
                    Lui => dp.chunked(ChunkOp::Add, 0, imm << 12).value,
                    Auipc => dp.chunked(ChunkOp::Add, pc, imm << 12).value,
                    Add | Addi => dp.chunked(ChunkOp::Add, a, second).value,
                    Sub => dp.chunked(ChunkOp::Sub, a, second).value,
                    Slt | Slti => dp.chunked(ChunkOp::Sub, a, second).lt as u32,
                    Sltu | Sltiu => dp.chunked(ChunkOp::Sub, a, second).ltu as u32,
                    Xor | Xori => dp.chunked(ChunkOp::Xor, a, second).value,
                    Or | Ori => dp.chunked(ChunkOp::Or, a, second).value,
                    And | Andi => dp.chunked(ChunkOp::And, a, second).value,
                    Andn => dp.chunked(ChunkOp::Andn, a, second).value,
                    Orn => dp.chunked(ChunkOp::Orn, a, second).value,
                    Xnor => dp.chunked(ChunkOp::Xnor, a, second).value,
                    Pack => dp.chunked(ChunkOp::Pack, a, second).value,
                    Packh => dp.chunked(ChunkOp::Packh, a, second).value,
                    _ => unreachable!("{m} is not a chunked ALU op"),
                };
                rd = Some((instr.rd, value));
            }
            LatencyClass::Shift | LatencyClass::Rotate => {
                let (direction, kind) = ShiftKind::of(m).expect("shift class");
                let shamt = second & 31;
                let plan = ShiftPlan::new(c, direction, kind, shamt, zkt);
                rd = Some((instr.rd, dp.shift(plan, kind, shamt, a)));
            }
            LatencyClass::Clmul => {
                let v = dp.clmul(m == Clmulh, a, b, c.latencies.writeback);
                rd = Some((instr.rd, v));
            }
            LatencyClass::Xperm => {
                rd = Some((instr.rd, dp.xperm(m == Xperm4, a, b)));
            }
            LatencyClass::Aes => {
                let bs = instr.bs.unwrap_or(0);
                let v = aes_unit(&mut dp, &mut lsu_buffer, m, a, b, bs, c.latencies.aes);
                rd = Some((instr.rd, v));
            }
            LatencyClass::Sha => {
                rd = Some((instr.rd, sha_unit(&mut dp, m, a, b, c.latencies.sha_fixed)));
            }
            LatencyClass::Reorder1Cycle => {
                rd = Some((instr.rd, reorder_unit(&mut dp, m, a, c.latencies.reorder)));
            }
            LatencyClass::Load => {
                let addr = dp.chunked(ChunkOp::Add, a, imm).value;
                let size = lane_size(m);
                if !addr.is_multiple_of(size) {
                    return Err(HaltReason::MisalignedAccess);
                }
                lsu_buffer = self.arch.mem.read_u32(addr & !3);
                dp.idle(Phase::Memory, c.mem_latency);
                let shift = 8 * (addr & 3);
                let lane = lsu_buffer >> shift;
                let value = match m {
                    Lb => lane as u8 as i8 as i32 as u32,
                    Lh => lane as u16 as i16 as i32 as u32,
                    Lbu => lane & 0xff,
                    Lhu => lane & 0xffff,
                    _ => lane,
                };
                dp.tick(Phase::Writeback);
                rd = Some((instr.rd, value));
            }
            LatencyClass::Store => {
                let addr = dp.chunked(ChunkOp::Add, a, imm).value;
                let size = lane_size(m);
                if !addr.is_multiple_of(size) {
                    return Err(HaltReason::MisalignedAccess);
                }
                let shift = 8 * (addr & 3);
                let lane_mask = if size == 4 {
                    u32::MAX
                } else {
                    ((1 << (8 * size)) - 1) << shift
                };
                let old = self.arch.mem.read_u32(addr & !3);
                lsu_buffer = (old & !lane_mask) | ((b << shift) & lane_mask);
                dp.idle(Phase::Memory, c.mem_latency);
                dp.tick(Phase::Writeback);
                let value = (lsu_buffer & lane_mask) >> shift;
                store = Some(StoreRecord { addr, size, value });
                if addr == EXIT_ADDR {
                    halt = Some(HaltReason::Ecall);
                }
            }
            LatencyClass::Branch => {
                let f = dp.chunked(ChunkOp::Sub, a, b);
                let taken = match m {
                    Beq => f.zero,
                    Bne => !f.zero,
                    Blt => f.lt,
                    Bge => !f.lt,
                    Bltu => f.ltu,
                    Bgeu => !f.ltu,
                    _ => unreachable!(),
                };
                if taken {
                    next_pc = pc.wrapping_add(imm);
                }
            }
            LatencyClass::Jump => {
                let base = if m == Jal { pc } else { a };
                let mut target = dp.chunked(ChunkOp::Add, base, imm).value;
                if m == Jalr {
                    target &= !1;
                }
                next_pc = target;
                rd = Some((instr.rd, pc.wrapping_add(4)));
            }
            LatencyClass::FenceNop => {
                dp.tick(Phase::Writeback);
                match m {
                    Ecall => halt = Some(HaltReason::Ecall),
                    Ebreak => halt = Some(HaltReason::Ebreak),
                    _ => {}
                }
            }
        }
        if !next_pc.is_multiple_of(4) {
            return Err(HaltReason::MisalignedFetch);
        }
        if let (Some(Fault::CorruptResult { mnemonic, xor }), Some((r, v))) = (self.fault, rd) {
            if mnemonic == m {
                rd = Some((r, v ^ xor));
            }
        }
        Ok(Effect {
            rd,
            store,
            next_pc,
            halt,
            dp,
            lsu_buffer,
        })
    }

    fn commit(&mut self, instr: &Instr, effect: Effect, fetch: FetchAction) -> StepOutcome {
        let Effect {
            rd,
            store,
            next_pc,
            halt,
            mut dp,
            lsu_buffer,
        } = effect;
        dp.idle(
            match fetch {
                FetchAction::Redirect { .. } => Phase::Redirect,
                _ => Phase::Stall,
            },
            fetch.cycles(),
        );
        self.cycle += dp.cycles as u64;
        self.serializer1 = dp.ser1;
        self.serializer2 = dp.ser2;
        self.ser2_alu_uses += dp.ser2_alu_uses;
        self.lsu_buffer = lsu_buffer;
        if let (Some(log), Some(new)) = (&mut self.snapshots, dp.log) {
            log.extend(new);
        }
        self.phase = Phase::Idle;

        if let Some((r, v)) = rd {
            self.arch.set_reg(r, v);
        }
        if let Some(s) = store {
            self.arch.last_store = Some(s);
            match s.addr {
                CONSOLE_ADDR => self.arch.console.push(s.value as u8),
                EXIT_ADDR => self.arch.exit_code = Some(s.value),
                _ => self.arch.mem.write_u32(s.addr & !3, self.lsu_buffer),
            }
        }
        if instr.mnemonic == Mnemonic::Ecall {
            self.arch.exit_code = Some(self.arch.reg(10));
        }
        self.arch.instret += 1;
        if let Some(reason) = halt {
            return StepOutcome::Halted(reason);
        }
        self.arch.pc = next_pc;
        self.fetch_buffer = Some((next_pc, self.arch.mem.read_u32(next_pc)));
        StepOutcome::Retired
    }
}

fn lane_size(m: Mnemonic) -> u32 {
    use Mnemonic::*;
    match m {
        Lb | Lbu | Sb => 1,
        Lh | Lhu | Sh => 2,
        _ => 4,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isa::{assemble, reg, ExtensionSet};

    fn core(w: u32, prog: &[Instr]) -> MicroCore {
        let c = CoreConfig::new(w, ExtensionSet::zkn()).unwrap();
        MicroCore::new(c, &assemble(prog, 0x1000).unwrap())
    }

    #[test]
    fn add_costs_one_cycle_per_chunk() {
        for w in [1, 2, 4, 8, 16, 32] {
            let mut m = core(w, &[Instr::r(Mnemonic::Add, 1, 0, 0)]);
            assert_eq!(m.step().cycles, 32 / w);
        }
    }

    #[test]
    fn branch_costs() {
        let taken = [Instr::branch(Mnemonic::Beq, 0, 0, 8)];
        assert_eq!(core(4, &taken).step().cycles, 10);
        let not_taken = [Instr::branch(Mnemonic::Bne, 0, 0, 8)];
        assert_eq!(core(4, &not_taken).step().cycles, 8);
    }

    #[test]
    fn load_costs() {
        let p = [Instr::load(Mnemonic::Lw, 1, 0x100, 0)];
        assert_eq!(core(32, &p).step().cycles, 3);
        assert_eq!(core(4, &p).step().cycles, 10);
    }

    #[test]
    fn budget_is_respected() {
        let mut m = core(1, &[Instr::r(Mnemonic::Add, 1, 0, 0)]);
        assert!(m.step_within(31).is_none());
        assert_eq!(m.arch.instret, 0);
        assert_eq!(m.step_within(32).unwrap().cycles, 32);
    }

    #[test]
    fn store_into_prefetched_word_refetches() {
        // sw t0, 12(t1) with t1 = 0xff8 overwrites the next instruction.
        let prog = [
            Instr::store(Mnemonic::Sw, reg::T0, 12, reg::T1),
            Instr::ebreak(),
        ];
        let mut m = core(32, &prog);
        m.arch.regs[reg::T1 as usize] = 0x0ff8;
        m.arch.regs[reg::T0 as usize] = Instr::ebreak().encode().unwrap();
        let r = m.step();
        assert_eq!(r.fetch, FetchAction::Refetch { cycles: 1 });
        assert_eq!(r.cycles, 3 + 1);
    }

    #[test]
    fn fault_corrupts_result() {
        let mut m = core(8, &[Instr::i(Mnemonic::Addi, 1, 0, 1)]);
        m.inject_fault(Fault::CorruptResult {
            mnemonic: Mnemonic::Addi,
            xor: 4,
        });
        m.step();
        assert_eq!(m.arch.regs[1], 5);
    }
}
