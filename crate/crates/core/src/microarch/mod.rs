// SPDX-License-Identifier: Apache-2.0

//! Cycle-level model of the bit-serial core.
//!
//! Operands stream through the ALU in `serial_width`-bit chunks, least
//! significant chunk first. Serializer1 doubles as a bidirectional shift
//! register; Serializer2 collects result chunks. A single-entry fetch
//! buffer prefetches `pc + 4` while an instruction executes.

mod config;
mod core;
mod datapath;
mod timing;
mod units;

pub use self::config::{ConfigError, CoreConfig, UnitLatencies, WIDTHS};
pub use self::core::{frontend_step, Fault, FetchAction, MicroCore, Retirement};
pub use datapath::{alu_mask_select, ChunkSnapshot, MaskMode, Phase, Serializer};
pub use timing::{shift_latency, LatencyClass, ShiftDirection, ShiftKind, ShiftPlan};
