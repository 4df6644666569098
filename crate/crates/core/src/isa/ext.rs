// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// The subset an instruction belongs to. Every mnemonic has exactly one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Subset {
    Rv32i,
    Zbkb,
    Zbkx,
    Zbkc,
    Zkne,
    Zknd,
    Zknh,
}

impl Subset {
    /// The extension that must be enabled to execute this subset; `None`
    /// for the always-present base ISA.
    pub fn extension(self) -> Option<Extension> {
        match self {
            Subset::Rv32i => None,
            Subset::Zbkb => Some(Extension::Zbkb),
            Subset::Zbkx => Some(Extension::Zbkx),
            Subset::Zbkc => Some(Extension::Zbkc),
            Subset::Zkne => Some(Extension::Zkne),
            Subset::Zknd => Some(Extension::Zknd),
            Subset::Zknh => Some(Extension::Zknh),
        }
    }
}

/// An optional extension a core may be configured with.
///
/// `Zkt` adds no instructions; it switches the covered instructions to
/// data-independent latency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Extension {
    Zbkb,
    Zbkx,
    Zbkc,
    Zkne,
    Zknd,
    Zknh,
    Zkt,
}

impl Extension {
    pub const ALL: [Extension; 7] = [
        Extension::Zbkb,
        Extension::Zbkx,
        Extension::Zbkc,
        Extension::Zkne,
        Extension::Zknd,
        Extension::Zknh,
        Extension::Zkt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Extension::Zbkb => "zbkb",
            Extension::Zbkx => "zbkx",
            Extension::Zbkc => "zbkc",
            Extension::Zkne => "zkne",
            Extension::Zknd => "zknd",
            Extension::Zknh => "zknh",
            Extension::Zkt => "zkt",
        }
    }

    fn bit(self) -> u8 {
        1 << self as u8
    }
}

impl fmt::Display for Extension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown extension `{0}` (expected zbkb, zbkx, zbkc, zkne, zknd, zknh, zkt or zkn)")]
pub struct ParseExtensionError(pub String);

/// A set of enabled [`Extension`]s.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ExtensionSet(u8);

impl ExtensionSet {
    /// Base ISA only.
    pub const fn rv32i() -> ExtensionSet {
        ExtensionSet(0)
    }

    /// The NIST suite: Zbkb, Zbkx, Zbkc, Zkne, Zknd and Zknh.
    pub const fn zkn() -> ExtensionSet {
        ExtensionSet(0b0011_1111)
    }

    /// Zkn plus data-independent latency.
    pub const fn zkn_zkt() -> ExtensionSet {
        ExtensionSet(0b0111_1111)
    }

    pub fn with(mut self, ext: Extension) -> ExtensionSet {
        self.0 |= ext.bit();
        self
    }

    pub fn without(mut self, ext: Extension) -> ExtensionSet {
        self.0 &= !ext.bit();
        self
    }

    pub fn contains(self, ext: Extension) -> bool {
        self.0 & ext.bit() != 0
    }

    /// Whether instructions from `subset` may execute.
    pub fn enables(self, subset: Subset) -> bool {
        subset.extension().is_none_or(|e| self.contains(e))
    }

    pub fn zkt(self) -> bool {
        self.contains(Extension::Zkt)
    }

    pub fn iter(self) -> impl Iterator<Item = Extension> {
        Extension::ALL
            .into_iter()
            .filter(move |e| self.contains(*e))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Names in canonical order, as used in JSON output.
    pub fn names(self) -> Vec<&'static str> {
        self.iter().map(Extension::name).collect()
    }
}

impl FromIterator<Extension> for ExtensionSet {
    fn from_iter<I: IntoIterator<Item = Extension>>(iter: I) -> Self {
        iter.into_iter()
            .fold(ExtensionSet::rv32i(), ExtensionSet::with)
    }
}

/// Parses a comma-separated list such as `zkn,zkt` or `zbkb,zknh`.
/// `zkn` expands to the six NIST subsets; `rv32i` and the empty string
/// name the empty set.
impl FromStr for ExtensionSet {
    type Err = ParseExtensionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut set = ExtensionSet::rv32i();
        for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let item = item.to_ascii_lowercase();
            if item == "zkn" {
                set.0 |= ExtensionSet::zkn().0;
                continue;
            }
            if item == "rv32i" {
                continue;
            }
            match Extension::ALL.iter().find(|e| e.name() == item) {
                Some(&e) => set = set.with(e),
                None => return Err(ParseExtensionError(item)),
            }
        }
        Ok(set)
    }
}

impl fmt::Display for ExtensionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("rv32i");
        }
        f.write_str(&self.names().join(","))
    }
}
