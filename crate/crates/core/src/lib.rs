// SPDX-License-Identifier: Apache-2.0

//! Cycle-level simulator for a bit-serial RV32I core with the scalar
//! cryptography extensions.
//!
//! - [`isa`]: instruction set, encoder, decoder and a small assembler.
//! - [`golden`]: untimed reference semantics.
//! - [`microarch`]: the serial data path and its cycle model.
//! - [`system`]: images, run loop, statistics and traces.
//! - [`cosim`]: random program generation and lockstep comparison.
//! - [`bench`]: crypto kernels, metrics and the constant-time audit.

pub mod bench;
pub mod cosim;
pub mod golden;
pub mod isa;
pub mod microarch;
pub mod system;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/isa.md")]
    mod isa {}
    #[doc = include_str!("../../../book/src/golden.md")]
    mod golden {}
    #[doc = include_str!("../../../book/src/serial-core.md")]
    mod serial_core {}
    #[doc = include_str!("../../../book/src/zkt.md")]
    mod zkt {}
    #[doc = include_str!("../../../book/src/system.md")]
    mod system {}
    #[doc = include_str!("../../../book/src/cosim.md")]
    mod cosim {}
    #[doc = include_str!("../../../book/src/bench.md")]
    mod bench {}
}
