// SPDX-License-Identifier: Apache-2.0

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::golden::ArchState;
use crate::isa::{reg, Format, Instr, Mnemonic};
use crate::microarch::{CoreConfig, MicroCore, ShiftKind};
use crate::system::DEFAULT_BASE;

/// Latency spread of one mnemonic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditRow {
    pub mnemonic: &'static str,
    pub min: u32,
    pub max: u32,
    pub spread: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub width: u32,
    pub extensions: Vec<&'static str>,
    pub trials: usize,
    pub rows: Vec<AuditRow>,
    pub pass: bool,
}

const AUDIT_SEED: u64 = 0x5eed_c0de;

/// Operand values every audit starts with.
fn boundary_values() -> Vec<u32> {
    let mut v = vec![
        0,
        u32::MAX,
        0x7fff_ffff,
        0x8000_0000,
        0x5555_5555,
        0xaaaa_aaaa,
    ];
    v.extend((0..32).map(|k| 1u32 << k));
    v.extend((0..32).map(|k| !(1u32 << k)));
    v
}

/// One operand set: rs1, rs2 and the immediate.
fn operands(m: Mnemonic, trial: usize, bounds: &[u32], rng: &mut ChaCha8Rng) -> (u32, u32, i32) {
    let n = bounds.len();
    let (mut a, mut b) = if trial < n * 2 {
        (bounds[trial % n], bounds[(trial * 7 + 3) % n])
    } else {
        (rng.gen(), rng.gen())
    };
    if trial % 5 == 4 {
        std::mem::swap(&mut a, &mut b);
    }
    let shamt = (trial % 32) as u32;
    if ShiftKind::of(m).is_some() {
        b = (b & !31) | shamt;
    }
    let imm = match m.format() {
        Format::Shift => shamt as i32,
        Format::Upper => rng.gen_range(0..1 << 20),
        Format::Aes => (trial % 4) as i32,
        _ => rng.gen_range(-2048..2048),
    };
    (a, b, imm)
}

fn instr(m: Mnemonic, imm: i32) -> Instr {
    let (rd, rs1, rs2) = (reg::A0, reg::A1, reg::A2);
    match m.format() {
        Format::R => Instr::r(m, rd, rs1, rs2),
        Format::Aes => Instr::aes(m, rd, rs1, rs2, imm as u8),
        Format::Unary => Instr::unary(m, rd, rs1),
        Format::Upper => Instr::upper(m, rd, imm),
        _ => Instr::i(m, rd, rs1, imm),
    }
}

/// Measures the latency of every enabled data-independent-timing
/// mnemonic over `trials` operand sets on fresh cores built from
/// `config`. The first sets are boundary patterns; immediate and
/// register shift amounts cycle through 0..31.
///
/// ```
/// use rvserial::bench::audit_constant_time;
/// use rvserial::isa::ExtensionSet;
/// use rvserial::microarch::CoreConfig;
///
/// let config = CoreConfig::new(1, ExtensionSet::zkn_zkt()).unwrap();
/// assert!(audit_constant_time(config, 64).pass);
/// ```
pub fn audit_constant_time(config: CoreConfig, trials: usize) -> AuditReport {
    let bounds = boundary_values();
    let mut rng = ChaCha8Rng::seed_from_u64(AUDIT_SEED);
    let rows: Vec<AuditRow> = Mnemonic::ALL
        .iter()
        .copied()
        .filter(|m| m.zkt_covered() && config.extensions.enables(m.subset()))
        .map(|m| {
            let (mut min, mut max) = (u32::MAX, 0);
            for trial in 0..trials {
                let (a, b, imm) = operands(m, trial, &bounds, &mut rng);
                let mut arch = ArchState::new(DEFAULT_BASE);
                arch.set_reg(reg::A1, a);
                arch.set_reg(reg::A2, b);
                let mut core = MicroCore::from_state(config, arch);
                let (cycles, _) = core.run_instruction(&instr(m, imm));
                min = min.min(cycles);
                max = max.max(cycles);
            }
            AuditRow {
                mnemonic: m.name(),
                min,
                max,
                spread: max.saturating_sub(min),
            }
        })
        .collect();
    AuditReport {
        width: config.serial_width,
        extensions: config.extensions.names(),
        trials,
        pass: rows.iter().all(|r| r.spread == 0),
        rows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isa::ExtensionSet;

    fn row<'a>(r: &'a AuditReport, m: &str) -> &'a AuditRow {
        r.rows.iter().find(|x| x.mnemonic == m).unwrap()
    }

    #[test]
    fn shifts_vary_without_zkt() {
        let c = CoreConfig::new(1, ExtensionSet::zkn()).unwrap();
        let r = audit_constant_time(c, 256);
        assert!(!r.pass);
        assert!(row(&r, "sll").spread > 0);
        assert_eq!(row(&r, "aes32esmi").spread, 0);
        assert_eq!(row(&r, "add").spread, 0);
    }

    #[test]
    fn zkt_flattens_every_width() {
        for w in crate::microarch::WIDTHS {
            let c = CoreConfig::new(w, ExtensionSet::zkn_zkt()).unwrap();
            let r = audit_constant_time(c, 256);
            assert!(
                r.pass,
                "width {w}: {:?}",
                r.rows.iter().filter(|x| x.spread > 0).collect::<Vec<_>>()
            );
            assert_eq!(
                r.rows.len(),
                Mnemonic::ALL.iter().filter(|m| m.zkt_covered()).count()
            );
        }
    }
}
