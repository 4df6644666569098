// SPDX-License-Identifier: Apache-2.0

//! Program images, the run loop and execution statistics.
//!
//! Two memory-mapped words control a running program: a byte stored to
//! [`CONSOLE_ADDR`](crate::golden::CONSOLE_ADDR) is appended to the
//! console buffer, and a word stored to
//! [`EXIT_ADDR`](crate::golden::EXIT_ADDR) halts with reason `ecall` and
//! that word as exit code.

mod image;
mod run;

pub use image::{load_image, load_image_file, ImageFormat, LoadError, ProgramImage, DEFAULT_BASE};
pub use run::{
    run, run_golden, write_trace_csv, ClassStats, ExecStats, Machine, StatsJson, TraceRecord,
    TRACE_HEADER,
};
