// SPDX-License-Identifier: Apache-2.0

//! Fixed-latency function units: AES, SHA-2 and the bit reordering
//! network.

use std::sync::OnceLock;

use super::datapath::{ChunkOp, Datapath, Phase};
use crate::isa::Mnemonic;

struct AesTables {
    fwd: [u8; 256],
    inv: [u8; 256],
}

/// S-boxes built from exp/log tables over the generator 0x03.
fn aes_tables() -> &'static AesTables {
    static TABLES: OnceLock<AesTables> = OnceLock::new();
    TABLES.get_or_init(|| {
        let mut exp = [0u8; 255];
        let mut log = [0u8; 256];
        let mut x = 1u8;
        for (i, e) in exp.iter_mut().enumerate() {
            *e = x;
            log[x as usize] = i as u8;
            x ^= xtime(x);
        }
        let mut fwd = [0u8; 256];
        let mut inv = [0u8; 256];
        for b in 0..256usize {
            let v = if b == 0 {
                0
            } else {
                exp[(255 - log[b] as usize) % 255]
            };
            let mut s = 0x63;
            for i in 0..8 {
                let bit = (v >> i)
                    ^ (v >> ((i + 4) % 8))
                    ^ (v >> ((i + 5) % 8))
                    ^ (v >> ((i + 6) % 8))
                    ^ (v >> ((i + 7) % 8));
                s ^= (bit & 1) << i;
            }
            fwd[b] = s;
            inv[s as usize] = b as u8;
        }
        AesTables { fwd, inv }
    })
}

fn xtime(b: u8) -> u8 {
    let hi = b >> 7;
    (b << 1) ^ (hi * 0x1b)
}

/// `aes32*` through the load/store buffer: byte select, S-box and
/// MixColumns contribution, then rotate-XOR into `rs1`.
pub(crate) fn aes_unit(
    dp: &mut Datapath,
    lsu_buffer: &mut u32,
    mnemonic: Mnemonic,
    rs1: u32,
    rs2: u32,
    bs: u8,
    latency: u32,
) -> u32 {
    let shift = 8 * bs as u32;
    *lsu_buffer = (rs2 >> shift) & 0xff;
    dp.tick(Phase::Unit);

    let t = aes_tables();
    let decrypt = matches!(mnemonic, Mnemonic::Aes32dsi | Mnemonic::Aes32dsmi);
    let middle = matches!(mnemonic, Mnemonic::Aes32esmi | Mnemonic::Aes32dsmi);
    let s = if decrypt {
        t.inv[*lsu_buffer as usize]
    } else {
        t.fwd[*lsu_buffer as usize]
    };
    let column = if !middle {
        [s, 0, 0, 0]
    } else if decrypt {
        let s2 = xtime(s);
        let s4 = xtime(s2);
        let s8 = xtime(s4);
        [s8 ^ s4 ^ s2, s8 ^ s, s8 ^ s4 ^ s, s8 ^ s2 ^ s]
    } else {
        let s2 = xtime(s);
        [s2, s, s, s2 ^ s]
    };
    *lsu_buffer = u32::from_le_bytes(column);
    dp.tick(Phase::Unit);

    dp.idle(Phase::Unit, latency.saturating_sub(3));
    dp.ser1.value = lsu_buffer.rotate_left(shift) ^ rs1;
    dp.tick(Phase::Writeback);
    dp.ser1.value
}

#[derive(Clone, Copy)]
enum Src {
    Rs1,
    Rs2,
}

#[derive(Clone, Copy)]
enum Wire {
    RotR(Src, u32),
    ShR(Src, u32),
    ShL(Src, u32),
}

use Src::{Rs1, Rs2};
use Wire::{RotR, ShL, ShR};

fn sha_wires(m: Mnemonic) -> &'static [Wire] {
    use Mnemonic::*;
    match m {
        Sha256sig0 => &[RotR(Rs1, 7), RotR(Rs1, 18), ShR(Rs1, 3)],
        Sha256sig1 => &[RotR(Rs1, 17), RotR(Rs1, 19), ShR(Rs1, 10)],
        Sha256sum0 => &[RotR(Rs1, 2), RotR(Rs1, 13), RotR(Rs1, 22)],
        Sha256sum1 => &[RotR(Rs1, 6), RotR(Rs1, 11), RotR(Rs1, 25)],
        Sha512sig0h => &[
            ShR(Rs1, 1),
            ShR(Rs1, 7),
            ShR(Rs1, 8),
            ShL(Rs2, 31),
            ShL(Rs2, 24),
        ],
        Sha512sig0l => &[
            ShR(Rs1, 1),
            ShR(Rs1, 7),
            ShR(Rs1, 8),
            ShL(Rs2, 31),
            ShL(Rs2, 25),
            ShL(Rs2, 24),
        ],
        Sha512sig1h => &[
            ShL(Rs1, 3),
            ShR(Rs1, 6),
            ShR(Rs1, 19),
            ShR(Rs2, 29),
            ShL(Rs2, 13),
        ],
        Sha512sig1l => &[
            ShL(Rs1, 3),
            ShR(Rs1, 6),
            ShR(Rs1, 19),
            ShR(Rs2, 29),
            ShL(Rs2, 26),
            ShL(Rs2, 13),
        ],
        Sha512sum0r => &[
            ShL(Rs1, 25),
            ShL(Rs1, 30),
            ShR(Rs1, 28),
            ShR(Rs2, 7),
            ShR(Rs2, 2),
            ShL(Rs2, 4),
        ],
        Sha512sum1r => &[
            ShL(Rs1, 23),
            ShR(Rs1, 14),
            ShR(Rs1, 18),
            ShR(Rs2, 9),
            ShL(Rs2, 18),
            ShL(Rs2, 14),
        ],
        _ => panic!("{m} is not a Zknh instruction"),
    }
}

/// `sha*`: the fixed-shift network presents two partial words in one
/// cycle and the ALU XORs them chunk by chunk.
pub(crate) fn sha_unit(
    dp: &mut Datapath,
    mnemonic: Mnemonic,
    rs1: u32,
    rs2: u32,
    fixed_cycles: u32,
) -> u32 {
    let wire = |w: Wire| -> u32 {
        let pick = |s: Src| match s {
            Rs1 => rs1,
            Rs2 => rs2,
        };
        match w {
            RotR(s, n) => pick(s).rotate_right(n),
            ShR(s, n) => pick(s) >> n,
            ShL(s, n) => pick(s) << n,
        }
    };
    let wires = sha_wires(mnemonic);
    let first = wire(wires[0]);
    let rest = wires[1..].iter().fold(0, |acc, w| acc ^ wire(*w));
    dp.idle(Phase::Unit, fixed_cycles);
    dp.chunked(ChunkOp::Xor, first, rest).value
}

/// Source bit index for every destination bit.
type BitMap = [u8; 32];

fn reorder_maps() -> &'static [BitMap; 4] {
    static MAPS: OnceLock<[BitMap; 4]> = OnceLock::new();
    MAPS.get_or_init(|| {
        let mut zip = [0u8; 32];
        let mut unzip = [0u8; 32];
        let mut rev8 = [0u8; 32];
        let mut brev8 = [0u8; 32];
        for i in 0..16u8 {
            zip[2 * i as usize] = i;
            zip[2 * i as usize + 1] = i + 16;
        }
        for (dst, &src) in zip.iter().enumerate() {
            unzip[src as usize] = dst as u8;
        }
        for d in 0..32u8 {
            rev8[d as usize] = (3 - d / 8) * 8 + d % 8;
            brev8[d as usize] = d / 8 * 8 + (7 - d % 8);
        }
        [zip, unzip, rev8, brev8]
    })
}

/// `zip`, `unzip`, `rev8`, `brev8`: wiring from the register file
/// straight back to it.
pub(crate) fn reorder_unit(dp: &mut Datapath, mnemonic: Mnemonic, rs1: u32, latency: u32) -> u32 {
    let maps = reorder_maps();
    let map = match mnemonic {
        Mnemonic::Zip => &maps[0],
        Mnemonic::Unzip => &maps[1],
        Mnemonic::Rev8 => &maps[2],
        Mnemonic::Brev8 => &maps[3],
        _ => panic!("{mnemonic} is not a reordering instruction"),
    };
    let out = map
        .iter()
        .enumerate()
        .fold(0, |acc, (d, &s)| acc | ((rs1 >> s) & 1) << d);
    dp.idle(Phase::Writeback, latency);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::golden;
    use crate::microarch::datapath::Serializer;

    fn dp(w: u32) -> Datapath {
        Datapath::new(w, Serializer::default(), Serializer::default(), 0, false)
    }

    #[test]
    fn sbox_tables_agree_with_reference() {
        let t = aes_tables();
        for b in 0..=255u8 {
            assert_eq!(t.fwd[b as usize], golden::aes_sbox_fwd(b));
            assert_eq!(t.inv[b as usize], golden::aes_sbox_inv(b));
        }
    }

    #[test]
    fn aes_is_three_cycles() {
        let mut d = dp(4);
        let mut buf = 0;
        assert_eq!(
            aes_unit(&mut d, &mut buf, Mnemonic::Aes32esi, 0, 0, 0, 3),
            0x63
        );
        assert_eq!(d.cycles, 3);
    }

    #[test]
    fn sha_latency() {
        let mut d = dp(8);
        sha_unit(&mut d, Mnemonic::Sha256sig0, 0x1234, 0, 1);
        assert_eq!(d.cycles, 5);
        let mut d = dp(32);
        sha_unit(&mut d, Mnemonic::Sha256sig0, 0x1234, 0, 1);
        assert_eq!(d.cycles, 2);
    }

    #[test]
    fn reorder_single_cycle() {
        let mut d = dp(1);
        assert_eq!(
            reorder_unit(&mut d, Mnemonic::Rev8, 0x1122_3344, 1),
            0x4433_2211
        );
        assert_eq!(d.cycles, 1);
        let z = reorder_unit(&mut d, Mnemonic::Zip, 0xdead_beef, 1);
        assert_eq!(reorder_unit(&mut d, Mnemonic::Unzip, z, 1), 0xdead_beef);
        assert_eq!(d.cycles, 3);
    }
}
