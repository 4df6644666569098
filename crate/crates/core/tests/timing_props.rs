// SPDX-License-Identifier: Apache-2.0

mod common;

use proptest::prelude::*;

use rvserial::isa::{ExtensionSet, Format, Mnemonic};
use rvserial::microarch::{shift_latency, CoreConfig, ShiftDirection, ShiftKind, WIDTHS};

/// Register-writing instructions that neither branch nor touch memory.
fn computational() -> Vec<Mnemonic> {
    Mnemonic::ALL
        .iter()
        .copied()
        .filter(|m| {
            !m.is_control()
                && !matches!(
                    m.format(),
                    Format::Load | Format::Store | Format::System | Format::Fence
                )
        })
        .collect()
}

fn imm_for(m: Mnemonic, seed: u32) -> i32 {
    match m.format() {
        Format::Shift => (seed % 32) as i32,
        Format::Upper => (seed % (1 << 20)) as i32,
        Format::Aes => (seed % 4) as i32,
        _ => (seed % 4096) as i32 - 2048,
    }
}

fn width() -> impl Strategy<Value = u32> {
    prop::sample::select(WIDTHS.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn both_routes_agree(idx in 0..computational().len(), a: u32, b: u32, seed: u32, w in width()) {
        let m = computational()[idx];
        let imm = imm_for(m, seed);
        let (v, _) = common::micro(m, a, b, imm, w, ExtensionSet::zkn_zkt());
        prop_assert_eq!(v, common::golden(m, a, b, imm), "{} width {}", m, w);
    }

    #[test]
    fn zkt_latency_ignores_operands(idx in 0..computational().len(), ops: [u32; 4], seeds: [u32; 2], w in width()) {
        let m = computational()[idx];
        prop_assume!(m.zkt_covered());
        let ext = ExtensionSet::zkn_zkt();
        let (_, c1) = common::micro(m, ops[0], ops[1], imm_for(m, seeds[0]), w, ext);
        let (_, c2) = common::micro(m, ops[2], ops[3], imm_for(m, seeds[1]), w, ext);
        prop_assert_eq!(c1, c2, "{} width {}", m, w);
    }
}

#[test]
fn alu_ops_take_one_cycle_per_chunk() {
    for w in WIDTHS {
        for m in [
            Mnemonic::Add,
            Mnemonic::Sub,
            Mnemonic::Xor,
            Mnemonic::Sltu,
            Mnemonic::Andi,
        ] {
            let (_, c) = common::micro(m, 7, 9, 3, w, ExtensionSet::rv32i());
            assert_eq!(c, 32 / w, "{m} at width {w}");
        }
    }
}

#[test]
fn right_shift_formula() {
    for w in WIDTHS {
        let c = CoreConfig::new(w, ExtensionSet::rv32i()).unwrap();
        let step = if w == 32 { 8 } else { w };
        for s in 0..32 {
            let want = s / step + s % step + 1;
            assert_eq!(
                shift_latency(&c, ShiftDirection::Right, ShiftKind::Logical, s, false),
                want
            );
            assert_eq!(
                shift_latency(&c, ShiftDirection::Right, ShiftKind::Arithmetic, s, false),
                want
            );
        }
    }
}

#[test]
fn left_shift_support_never_hurts_and_zkt_never_helps() {
    for w in WIDTHS {
        let on = CoreConfig::new(w, ExtensionSet::rv32i()).unwrap();
        let mut off = on;
        off.left_shift_support = false;
        for kind in [ShiftKind::Logical, ShiftKind::Rotate] {
            for s in 0..32 {
                let l_on = shift_latency(&on, ShiftDirection::Left, kind, s, false);
                let l_off = shift_latency(&off, ShiftDirection::Left, kind, s, false);
                assert!(l_on <= l_off, "width {w} {kind:?} shamt {s}");
                for dir in [ShiftDirection::Left, ShiftDirection::Right] {
                    let plain = shift_latency(&on, dir, kind, s, false);
                    let padded = shift_latency(&on, dir, kind, s, true);
                    assert!(padded >= plain);
                }
            }
        }
    }
}

/// Instructions whose latency does not depend on a shift amount never
/// get slower on a wider data path.
#[test]
fn non_shift_latency_is_monotone_in_width() {
    for m in computational() {
        if ShiftKind::of(m).is_some() {
            continue;
        }
        let cycles: Vec<u32> = WIDTHS
            .iter()
            .map(|&w| {
                common::micro(
                    m,
                    0x1234_5678,
                    0x9abc_def0,
                    imm_for(m, 5),
                    w,
                    ExtensionSet::zkn(),
                )
                .1
            })
            .collect();
        assert!(cycles.windows(2).all(|p| p[0] >= p[1]), "{m}: {cycles:?}");
    }
}

/// Going from 8- to 16-bit steps leaves more single-bit steps for
/// amounts just under 16, so the wider core is slower there.
#[test]
fn right_shift_by_15_is_slower_at_width_16_than_8() {
    let at = |w| {
        let c = CoreConfig::new(w, ExtensionSet::rv32i()).unwrap();
        shift_latency(&c, ShiftDirection::Right, ShiftKind::Logical, 15, false)
    };
    assert_eq!(at(8), 9);
    assert_eq!(at(16), 16);
}
