// SPDX-License-Identifier: Apache-2.0

use std::collections::HashMap;

/// Writing a byte here appends it to the console buffer.
pub const CONSOLE_ADDR: u32 = 0xf000_0000;
/// Writing a word here halts with reason `ecall`; the word is the exit code.
pub const EXIT_ADDR: u32 = 0xf000_0004;

const PAGE_BITS: u32 = 12;
const PAGE_SIZE: usize = 1 << PAGE_BITS;

/// Sparse little-endian byte memory. Unwritten bytes read as zero.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Memory {
    pages: HashMap<u32, Box<[u8; PAGE_SIZE]>>,
}

impl Memory {
    pub fn new() -> Memory {
        Memory::default()
    }

    pub fn read_u8(&self, addr: u32) -> u8 {
        self.pages
            .get(&(addr >> PAGE_BITS))
            .map_or(0, |p| p[(addr as usize) & (PAGE_SIZE - 1)])
    }

    pub fn write_u8(&mut self, addr: u32, value: u8) {
        let page = self
            .pages
            .entry(addr >> PAGE_BITS)
            .or_insert_with(|| Box::new([0; PAGE_SIZE]));
        page[(addr as usize) & (PAGE_SIZE - 1)] = value;
    }

    /// Reads `size` bytes (1, 2 or 4) as a little-endian value.
    pub fn read(&self, addr: u32, size: u32) -> u32 {
        (0..size).fold(0, |acc, i| {
            acc | (self.read_u8(addr.wrapping_add(i)) as u32) << (8 * i)
        })
    }

    pub fn write(&mut self, addr: u32, size: u32, value: u32) {
        for i in 0..size {
            self.write_u8(addr.wrapping_add(i), (value >> (8 * i)) as u8);
        }
    }

    pub fn read_u32(&self, addr: u32) -> u32 {
        self.read(addr, 4)
    }

    pub fn write_u32(&mut self, addr: u32, value: u32) {
        self.write(addr, 4, value)
    }

    pub fn load(&mut self, base: u32, bytes: &[u8]) {
        for (i, b) in bytes.iter().enumerate() {
            self.write_u8(base.wrapping_add(i as u32), *b);
        }
    }

    pub fn read_bytes(&self, addr: u32, len: usize) -> Vec<u8> {
        (0..len)
            .map(|i| self.read_u8(addr.wrapping_add(i as u32)))
            .collect()
    }
}
