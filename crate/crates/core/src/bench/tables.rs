// SPDX-License-Identifier: Apache-2.0

//! Host-side AES tables and key schedules for the kernels.
//!
//! Columns are little-endian words: row `r` of a column is bits
//! `8r..8r+8`.

use crate::golden::{aes_sbox_fwd, aes_sbox_inv, gf_mul};

/// Encryption T-table: entry `x` holds bytes `[2s, s, s, 3s]` with
/// `s = sbox(x)`. Byte 1 doubles as the plain S-box for the last round.
pub fn te0() -> Vec<u32> {
    (0..=255u8)
        .map(|x| {
            let s = aes_sbox_fwd(x);
            u32::from_le_bytes([gf_mul(s, 2), s, s, gf_mul(s, 3)])
        })
        .collect()
}

/// Decryption T-table: entry `x` holds `[14s, 9s, 13s, 11s]` with
/// `s = inv_sbox(x)`.
pub fn td0() -> Vec<u32> {
    (0..=255u8)
        .map(|x| {
            let s = aes_sbox_inv(x);
            u32::from_le_bytes([gf_mul(s, 14), gf_mul(s, 9), gf_mul(s, 13), gf_mul(s, 11)])
        })
        .collect()
}

pub fn inv_sbox() -> Vec<u8> {
    (0..=255u8).map(aes_sbox_inv).collect()
}

/// AES-128 key expansion: 44 column words.
pub fn expand_key(key: &[u8; 16]) -> [u32; 44] {
    let mut w = [0u32; 44];
    for i in 0..4 {
        w[i] = u32::from_le_bytes([key[4 * i], key[4 * i + 1], key[4 * i + 2], key[4 * i + 3]]);
    }
    let mut rcon = 1u8;
    for i in 4..44 {
        let mut t = w[i - 1];
        if i % 4 == 0 {
            // RotWord moves byte 1 to byte 0: a right rotation in LE.
            let b = t.rotate_right(8).to_le_bytes();
            t = u32::from_le_bytes(b.map(aes_sbox_fwd)) ^ rcon as u32;
            rcon = gf_mul(rcon, 2);
        }
        w[i] = w[i - 4] ^ t;
    }
    w
}

fn inv_mix_column(c: u32) -> u32 {
    let a = c.to_le_bytes();
    let mut out = [0u8; 4];
    for (r, o) in out.iter_mut().enumerate() {
        *o = gf_mul(a[r], 14)
            ^ gf_mul(a[(r + 1) % 4], 11)
            ^ gf_mul(a[(r + 2) % 4], 13)
            ^ gf_mul(a[(r + 3) % 4], 9);
    }
    u32::from_le_bytes(out)
}

/// Round keys for the equivalent inverse cipher: the encryption keys in
/// reverse round order, with InvMixColumns applied to rounds 1..=9.
pub fn decryption_keys(rk: &[u32; 44]) -> [u32; 44] {
    let mut dk = [0u32; 44];
    for round in 0..11 {
        for c in 0..4 {
            let k = rk[4 * (10 - round) + c];
            dk[4 * round + c] = if round == 0 || round == 10 {
                k
            } else {
                inv_mix_column(k)
            };
        }
    }
    dk
}

/// SHA-256 round constants.
pub const SHA256_K: [u32; 64] = [
    0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1, 0x923f82a4, 0xab1c5ed5,
    0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe, 0x9bdc06a7, 0xc19bf174,
    0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc, 0x2de92c6f, 0x4a7484aa, 0x5cb0a9dc, 0x76f988da,
    0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7, 0xc6e00bf3, 0xd5a79147, 0x06ca6351, 0x14292967,
    0x27b70a85, 0x2e1b2138, 0x4d2c6dfc, 0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85,
    0xa2bfe8a1, 0xa81a664b, 0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070,
    0x19a4c116, 0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f, 0x682e6ff3,
    0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208, 0x90befffa, 0xa4506ceb, 0xbef9a3f7, 0xc67178f2,
];

/// SHA-256 initial hash value.
pub const SHA256_IV: [u32; 8] = [
    0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a, 0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19,
];

/// The PRINCE 4-bit S-box.
pub const PRINCE_SBOX: [u8; 16] = [
    0xb, 0xf, 0x3, 0x2, 0xa, 0xc, 0x9, 0x1, 0x6, 0x7, 0x8, 0x0, 0xe, 0x5, 0xd, 0x4,
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_expansion_matches_fips_example() {
        // FIPS-197 A.1: key 2b7e1516 28aed2a6 abf71588 09cf4f3c
        let key = [
            0x2b, 0x7e, 0x15, 0x16, 0x28, 0xae, 0xd2, 0xa6, 0xab, 0xf7, 0x15, 0x88, 0x09, 0xcf,
            0x4f, 0x3c,
        ];
        let w = expand_key(&key);
        // w[4] = a0fafe17, w[43] = b6630ca6 (big-endian byte order)
        assert_eq!(w[4], u32::from_le_bytes([0xa0, 0xfa, 0xfe, 0x17]));
        assert_eq!(w[43], u32::from_le_bytes([0xb6, 0x63, 0x0c, 0xa6]));
    }

    #[test]
    fn inv_mix_undoes_mix() {
        // MixColumns of column db 13 53 45 is 8e 4d a1 bc
        let mixed = u32::from_le_bytes([0x8e, 0x4d, 0xa1, 0xbc]);
        assert_eq!(
            inv_mix_column(mixed),
            u32::from_le_bytes([0xdb, 0x13, 0x53, 0x45])
        );
    }

    #[test]
    fn prince_sbox_is_a_permutation() {
        let mut seen = [false; 16];
        for &v in &PRINCE_SBOX {
            seen[v as usize] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }
}
