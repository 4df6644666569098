// SPDX-License-Identifier: Apache-2.0

use serde::Serialize;
use thiserror::Error;

use crate::isa::ExtensionSet;

/// Serial widths the data path can be built with.
pub const WIDTHS: [u32; 6] = [1, 2, 4, 8, 16, 32];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("serial width {0} is not one of 1, 2, 4, 8, 16, 32")]
    Width(u32),
    #[error("memory latency must be at least 1 cycle")]
    MemLatency,
    #[error("{unit} latency {value} is below the minimum of {min}")]
    UnitLatency {
        unit: &'static str,
        value: u32,
        min: u32,
    },
}

/// Fixed latencies of the units whose cost does not scale with the width.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct UnitLatencies {
    /// Whole `aes32*` instruction: byte select, S-box/mix, rotate-XOR.
    pub aes: u32,
    /// Fixed-shift network in front of the chunked XOR of `sha*`.
    pub sha_fixed: u32,
    /// `zip`, `unzip`, `rev8`, `brev8`.
    pub reorder: u32,
    /// Result writeback after shifts, rotates and carry-less multiply.
    pub writeback: u32,
}

impl Default for UnitLatencies {
    fn default() -> UnitLatencies {
        UnitLatencies {
            aes: 3,
            sha_fixed: 1,
            reorder: 1,
            writeback: 1,
        }
    }
}

impl UnitLatencies {
    /// Each unit needs at least as many cycles as its pipeline has
    /// stages: three for AES, one for everything else.
    pub fn validate(&self) -> Result<(), ConfigError> {
        for (unit, value, min) in [
            ("aes", self.aes, 3),
            ("sha_fixed", self.sha_fixed, 1),
            ("reorder", self.reorder, 1),
            ("writeback", self.writeback, 1),
        ] {
            if value < min {
                return Err(ConfigError::UnitLatency { unit, value, min });
            }
        }
        Ok(())
    }
}

/// Static configuration of one core instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoreConfig {
    pub serial_width: u32,
    pub extensions: ExtensionSet,
    /// Serializer1 can shift towards the MSB. Without it, left shifts are
    /// emulated by a right rotation followed by a masking pass.
    pub left_shift_support: bool,
    pub mem_latency: u32,
    pub taken_branch_penalty: u32,
    pub latencies: UnitLatencies,
}

impl CoreConfig {
    /// Default timing parameters for the given width and extensions.
    pub fn new(serial_width: u32, extensions: ExtensionSet) -> Result<CoreConfig, ConfigError> {
        let config = CoreConfig {
            serial_width,
            extensions,
            left_shift_support: true,
            mem_latency: 1,
            taken_branch_penalty: 2,
            latencies: UnitLatencies::default(),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !WIDTHS.contains(&self.serial_width) {
            return Err(ConfigError::Width(self.serial_width));
        }
        if self.mem_latency == 0 {
            return Err(ConfigError::MemLatency);
        }
        self.latencies.validate()
    }

    /// Number of chunks per 32-bit word.
    pub fn chunks(&self) -> u32 {
        32 / self.serial_width
    }

    /// Bits moved per multi-bit shift step. The 32-bit data path keeps an
    /// 8-bit shift step next to the single-bit one.
    pub fn shift_step(&self) -> u32 {
        if self.serial_width == 32 {
            8
        } else {
            self.serial_width
        }
    }

    /// Cycles lost when the fetch buffer is discarded.
    pub fn redirect_penalty(&self) -> u32 {
        self.taken_branch_penalty.max(self.mem_latency)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn width_validation() {
        for w in WIDTHS {
            assert!(CoreConfig::new(w, ExtensionSet::rv32i()).is_ok());
        }
        for w in [0, 3, 5, 64] {
            assert_eq!(
                CoreConfig::new(w, ExtensionSet::rv32i()).unwrap_err(),
                ConfigError::Width(w)
            );
        }
    }

    #[test]
    fn unit_minimums() {
        let mut c = CoreConfig::new(4, ExtensionSet::zkn()).unwrap();
        c.latencies.aes = 2;
        assert!(matches!(
            c.validate(),
            Err(ConfigError::UnitLatency { unit: "aes", .. })
        ));
        c.latencies.aes = 5;
        c.mem_latency = 0;
        assert_eq!(c.validate(), Err(ConfigError::MemLatency));
    }

    #[test]
    fn derived() {
        let c = CoreConfig::new(32, ExtensionSet::rv32i()).unwrap();
        assert_eq!(
            (c.chunks(), c.shift_step(), c.redirect_penalty()),
            (1, 8, 2)
        );
        let c = CoreConfig::new(4, ExtensionSet::rv32i()).unwrap();
        assert_eq!((c.chunks(), c.shift_step()), (8, 4));
    }
}
