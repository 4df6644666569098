// SPDX-License-Identifier: Apache-2.0

//! Reference semantics of the scalar-crypto instructions.
//!
//! These are written for clarity, not speed: the S-box is derived from
//! the GF(2^8) inverse plus the affine map, and every permutation is a
//! per-bit loop. The cycle model implements the same functions along
//! different routes, so the two can be checked against each other.

use crate::isa::Mnemonic;

/// GF(2^8) doubling modulo x^8 + x^4 + x^3 + x + 1.
pub const fn xt2(b: u8) -> u8 {
    (b << 1) ^ if b & 0x80 != 0 { 0x1b } else { 0 }
}

/// GF(2^8) product by shift-and-add.
pub const fn gf_mul(mut a: u8, mut b: u8) -> u8 {
    let mut p = 0;
    while b != 0 {
        if b & 1 != 0 {
            p ^= a;
        }
        a = xt2(a);
        b >>= 1;
    }
    p
}

const fn gf_inv(a: u8) -> u8 {
    // a^254 == a^-1, and maps 0 to 0.
    let mut result = 1u8;
    let mut base = a;
    let mut e = 254u32;
    while e != 0 {
        if e & 1 != 0 {
            result = gf_mul(result, base);
        }
        base = gf_mul(base, base);
        e >>= 1;
    }
    result
}

const fn build_sbox() -> [u8; 256] {
    let mut table = [0u8; 256];
    let mut i = 0;
    while i < 256 {
        let x = gf_inv(i as u8);
        table[i] =
            x ^ x.rotate_left(1) ^ x.rotate_left(2) ^ x.rotate_left(3) ^ x.rotate_left(4) ^ 0x63;
        i += 1;
    }
    table
}

const fn invert(table: &[u8; 256]) -> [u8; 256] {
    let mut inv = [0u8; 256];
    let mut i = 0;
    while i < 256 {
        inv[table[i] as usize] = i as u8;
        i += 1;
    }
    inv
}

static SBOX: [u8; 256] = build_sbox();
static INV_SBOX: [u8; 256] = invert(&SBOX);

pub fn aes_sbox_fwd(b: u8) -> u8 {
    SBOX[b as usize]
}

pub fn aes_sbox_inv(b: u8) -> u8 {
    INV_SBOX[b as usize]
}

/// `aes32esi`, `aes32esmi`, `aes32dsi`, `aes32dsmi`.
///
/// Byte `bs` of `rs2` goes through the forward or inverse S-box. Middle
/// round forms then expand it to one MixColumns column (coefficients
/// 2,1,1,3 forward; E,9,D,B inverse, lowest byte first); final round
/// forms zero-extend it. The word is rotated left by `8 * bs` and XORed
/// into `rs1`.
pub fn aes32(mnemonic: Mnemonic, rs1: u32, rs2: u32, bs: u8) -> u32 {
    let byte = (rs2 >> (8 * (bs & 3))) as u8;
    let mixed = match mnemonic {
        Mnemonic::Aes32esi => aes_sbox_fwd(byte) as u32,
        Mnemonic::Aes32dsi => aes_sbox_inv(byte) as u32,
        Mnemonic::Aes32esmi => {
            let s = aes_sbox_fwd(byte);
            u32::from_le_bytes([gf_mul(s, 2), s, s, gf_mul(s, 3)])
        }
        Mnemonic::Aes32dsmi => {
            let s = aes_sbox_inv(byte);
            u32::from_le_bytes([gf_mul(s, 14), gf_mul(s, 9), gf_mul(s, 13), gf_mul(s, 11)])
        }
        _ => panic!("{mnemonic} is not an aes32 instruction"),
    };
    rs1 ^ mixed.rotate_left(8 * (bs & 3) as u32)
}

/// Zknh sigma/sum functions. `rs2` is ignored by the `sha256*` forms.
pub fn sha2(mnemonic: Mnemonic, rs1: u32, rs2: u32) -> u32 {
    use Mnemonic::*;
    let x = rs1;
    match mnemonic {
        Sha256sig0 => x.rotate_right(7) ^ x.rotate_right(18) ^ (x >> 3),
        Sha256sig1 => x.rotate_right(17) ^ x.rotate_right(19) ^ (x >> 10),
        Sha256sum0 => x.rotate_right(2) ^ x.rotate_right(13) ^ x.rotate_right(22),
        Sha256sum1 => x.rotate_right(6) ^ x.rotate_right(11) ^ x.rotate_right(25),
        Sha512sig0h => (rs1 >> 1) ^ (rs1 >> 7) ^ (rs1 >> 8) ^ (rs2 << 31) ^ (rs2 << 24),
        Sha512sig0l => {
            (rs1 >> 1) ^ (rs1 >> 7) ^ (rs1 >> 8) ^ (rs2 << 31) ^ (rs2 << 25) ^ (rs2 << 24)
        }
        Sha512sig1h => (rs1 << 3) ^ (rs1 >> 6) ^ (rs1 >> 19) ^ (rs2 >> 29) ^ (rs2 << 13),
        Sha512sig1l => {
            (rs1 << 3) ^ (rs1 >> 6) ^ (rs1 >> 19) ^ (rs2 >> 29) ^ (rs2 << 26) ^ (rs2 << 13)
        }
        Sha512sum0r => {
            (rs1 << 25) ^ (rs1 << 30) ^ (rs1 >> 28) ^ (rs2 >> 7) ^ (rs2 >> 2) ^ (rs2 << 4)
        }
        Sha512sum1r => {
            (rs1 << 23) ^ (rs1 >> 14) ^ (rs1 >> 18) ^ (rs2 >> 9) ^ (rs2 << 18) ^ (rs2 << 14)
        }
        _ => panic!("{mnemonic} is not a Zknh instruction"),
    }
}

/// Carry-less product: low word for `clmul`, high word for `clmulh`.
pub fn clmul(mnemonic: Mnemonic, rs1: u32, rs2: u32) -> u32 {
    let mut product = 0u64;
    for i in 0..32 {
        if rs2 >> i & 1 == 1 {
            product ^= (rs1 as u64) << i;
        }
    }
    match mnemonic {
        Mnemonic::Clmul => product as u32,
        Mnemonic::Clmulh => (product >> 32) as u32,
        _ => panic!("{mnemonic} is not a Zbkc instruction"),
    }
}

/// Crossbar permutation over bytes (`xperm8`) or nibbles (`xperm4`).
/// Out-of-range indices select zero.
pub fn xperm(mnemonic: Mnemonic, rs1: u32, rs2: u32) -> u32 {
    let lane_bits = match mnemonic {
        Mnemonic::Xperm4 => 4,
        Mnemonic::Xperm8 => 8,
        _ => panic!("{mnemonic} is not a Zbkx instruction"),
    };
    let lanes = 32 / lane_bits;
    let mask = (1u32 << lane_bits) - 1;
    let mut out = 0;
    for i in 0..lanes {
        let index = (rs2 >> (i * lane_bits)) & mask;
        if index < lanes {
            out |= ((rs1 >> (index * lane_bits)) & mask) << (i * lane_bits);
        }
    }
    out
}

/// Zbkb. For `rori` the second operand is the immediate shift amount;
/// the single-source forms ignore it.
pub fn zbkb(mnemonic: Mnemonic, rs1: u32, rs2: u32) -> u32 {
    use Mnemonic::*;
    match mnemonic {
        Ror | Rori => rs1.rotate_right(rs2 & 31),
        Rol => rs1.rotate_left(rs2 & 31),
        Andn => rs1 & !rs2,
        Orn => rs1 | !rs2,
        Xnor => !(rs1 ^ rs2),
        Pack => (rs2 << 16) | (rs1 & 0xffff),
        Packh => ((rs2 & 0xff) << 8) | (rs1 & 0xff),
        Rev8 => {
            let mut out = 0;
            for i in 0..4 {
                out |= ((rs1 >> (8 * i)) & 0xff) << (8 * (3 - i));
            }
            out
        }
        Brev8 => {
            let mut out = 0;
            for i in 0..32 {
                let byte = i / 8;
                let bit = i % 8;
                out |= ((rs1 >> i) & 1) << (8 * byte + (7 - bit));
            }
            out
        }
        Zip => {
            let mut out = 0;
            for i in 0..16 {
                out |= ((rs1 >> i) & 1) << (2 * i);
                out |= ((rs1 >> (i + 16)) & 1) << (2 * i + 1);
            }
            out
        }
        Unzip => {
            let mut out = 0;
            for i in 0..16 {
                out |= ((rs1 >> (2 * i)) & 1) << i;
                out |= ((rs1 >> (2 * i + 1)) & 1) << (i + 16);
            }
            out
        }
        _ => panic!("{mnemonic} is not a Zbkb instruction"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Mnemonic::*;

    /// FIPS-197 Figure 7, first two rows.
    const SBOX_ROWS_0_1: [u8; 32] = [
        0x63, 0x7c, 0x77, 0x7b, 0xf2, 0x6b, 0x6f, 0xc5, 0x30, 0x01, 0x67, 0x2b, 0xfe, 0xd7, 0xab,
        0x76, 0xca, 0x82, 0xc9, 0x7d, 0xfa, 0x59, 0x47, 0xf0, 0xad, 0xd4, 0xa2, 0xaf, 0x9c, 0xa4,
        0x72, 0xc0,
    ];

    #[test]
    fn sbox_matches_published_table() {
        for (i, &v) in SBOX_ROWS_0_1.iter().enumerate() {
            assert_eq!(aes_sbox_fwd(i as u8), v, "sbox[{i:#x}]");
        }
        assert_eq!(aes_sbox_fwd(0x53), 0xed);
        assert_eq!(aes_sbox_fwd(0xff), 0x16);
        assert_eq!(aes_sbox_inv(0x63), 0x00);
        assert_eq!(aes_sbox_inv(0x16), 0xff);
    }

    #[test]
    fn sbox_is_a_bijection() {
        for b in 0..=255u8 {
            assert_eq!(aes_sbox_inv(aes_sbox_fwd(b)), b);
        }
    }

    #[test]
    fn xtime() {
        assert_eq!(xt2(0x00), 0x00);
        assert_eq!(xt2(0x01), 0x02);
        assert_eq!(xt2(0x80), 0x1b);
        // FIPS-197 4.2.1 worked example: {57} * {13} = {fe}
        assert_eq!(gf_mul(0x57, 0x13), 0xfe);
    }

    #[test]
    fn aes32_final_and_middle() {
        assert_eq!(aes32(Aes32esi, 0, 0, 0), 0x0000_0063);
        assert_eq!(aes32(Aes32esi, 0, 0, 2), 0x0063_0000);
        // s = 0x63: 2s = 0xc6, 3s = 0xa5
        assert_eq!(aes32(Aes32esmi, 0, 0, 0), 0xa563_63c6);
        assert_eq!(aes32(Aes32esmi, 0, 0, 1), 0x6363_c6a5);
        assert_eq!(aes32(Aes32dsi, 0, 0x63, 0), 0);
    }

    #[test]
    fn sha256_boundaries() {
        assert_eq!(sha2(Sha256sig0, 0, 0), 0);
        assert_eq!(sha2(Sha256sum0, 0xffff_ffff, 0), 0xffff_ffff);
        assert_eq!(sha2(Sha256sum1, 0xffff_ffff, 0), 0xffff_ffff);
        assert_eq!(sha2(Sha256sig0, 0xffff_ffff, 0), 0xffff_ffff >> 3);
    }

    #[test]
    fn clmul_identities() {
        assert_eq!(clmul(Clmul, 0x1234_5678, 0), 0);
        assert_eq!(clmul(Clmul, 0x1234_5678, 1), 0x1234_5678);
        assert_eq!(clmul(Clmulh, 0x1234_5678, 1), 0);
        // (x^32-1 poly) * (x + 1) = bits 0 and 32 set
        assert_eq!(clmul(Clmul, 0xffff_ffff, 3), 0x0000_0001);
        assert_eq!(clmul(Clmulh, 0xffff_ffff, 3), 0x0000_0001);
    }

    #[test]
    fn xperm_identities() {
        let x = 0xdead_beef;
        assert_eq!(xperm(Xperm8, x, 0x0302_0100), x);
        assert_eq!(xperm(Xperm8, x, 0xffff_ffff), 0);
        assert_eq!(xperm(Xperm4, x, 0x7654_3210), x);
        assert_eq!(xperm(Xperm4, 0x7654_3210, 0x0123_4567), 0x0123_4567);
        assert_eq!(xperm(Xperm4, x, 0x8888_8888), 0);
    }

    #[test]
    fn zbkb_values() {
        assert_eq!(zbkb(Rev8, 0x1122_3344, 0), 0x4433_2211);
        assert_eq!(zbkb(Brev8, 0x0102_0380, 0), 0x8040_c001);
        assert_eq!(zbkb(Ror, 0x1234_5678, 0), 0x1234_5678);
        assert_eq!(zbkb(Rol, 0x8000_0001, 1), 0x0000_0003);
        assert_eq!(zbkb(Pack, 0xaaaa_1111, 0xbbbb_2222), 0x2222_1111);
        assert_eq!(zbkb(Packh, 0xaaaa_1111, 0xbbbb_2222), 0x0000_2211);
        assert_eq!(zbkb(Zip, 0x0000_ffff, 0), 0x5555_5555);
        assert_eq!(zbkb(Zip, 0xffff_0000, 0), 0xaaaa_aaaa);
        assert_eq!(zbkb(Unzip, 0x5555_5555, 0), 0x0000_ffff);
    }
}
