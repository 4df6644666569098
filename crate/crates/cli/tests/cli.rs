// SPDX-License-Identifier: Apache-2.0

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn rvserial(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rvserial"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("rvserial-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_words(dir: &Path, name: &str, words: &[u32]) -> String {
    let path = dir.join(name);
    let bytes: Vec<u8> = words.iter().flat_map(|w| w.to_le_bytes()).collect();
    std::fs::write(&path, bytes).unwrap();
    path.to_string_lossy().into_owned()
}

const NOP: u32 = 0x0000_0013;
const EBREAK: u32 = 0x0010_0073;
/// addi a0, x0, 7 ; ecall
const EXIT_7: [u32; 2] = [0x0070_0513, 0x0000_0073];

#[test]
fn run_prints_summary() {
    let dir = scratch("run");
    let prog = write_words(&dir, "p.bin", &[NOP, NOP, EBREAK]);
    let o = rvserial(&["run", &prog, "--width", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("cycles:"), "{s}");
    assert!(s.contains("instret:   3"), "{s}");
    assert!(s.contains("cpi:"), "{s}");
}

#[test]
fn bad_width_is_a_usage_error() {
    let dir = scratch("width");
    let prog = write_words(&dir, "p.bin", &[EBREAK]);
    assert_eq!(
        rvserial(&["run", &prog, "--width", "3"]).status.code(),
        Some(2)
    );
    assert_eq!(rvserial(&["run", &prog, "--bogus"]).status.code(), Some(2));
    assert_eq!(
        rvserial(&["run", &prog, "--ext", "zfoo"]).status.code(),
        Some(2)
    );
}

#[test]
fn exit_codes_follow_the_halt() {
    let dir = scratch("exit");
    let missing = dir.join("missing.bin");
    assert_eq!(
        rvserial(&["run", missing.to_str().unwrap()]).status.code(),
        Some(3)
    );
    let exit7 = write_words(&dir, "e.bin", &EXIT_7);
    assert_eq!(rvserial(&["run", &exit7]).status.code(), Some(1));
    let illegal = write_words(&dir, "i.bin", &[0xffff_ffff]);
    assert_eq!(rvserial(&["run", &illegal]).status.code(), Some(4));
    // xperm4 without zbkx traps
    let xperm = write_words(&dir, "x.bin", &[0x2820_2533, EBREAK]);
    assert_eq!(rvserial(&["run", &xperm]).status.code(), Some(4));
    assert_eq!(
        rvserial(&["run", &xperm, "--ext", "zbkx"]).status.code(),
        Some(0)
    );
    let spin = write_words(&dir, "s.bin", &[0x0000_006f]);
    assert_eq!(
        rvserial(&["run", &spin, "--max-cycles", "100"])
            .status
            .code(),
        Some(4)
    );
}

#[test]
fn stats_json_and_trace() {
    let dir = scratch("stats");
    let prog = write_words(&dir, "p.bin", &[NOP, EBREAK]);
    let json = dir.join("s.json");
    let trace = dir.join("t.csv");
    let o = rvserial(&[
        "run",
        &prog,
        "--width",
        "1",
        "--ext",
        "zkn,zkt",
        "--stats-json",
        json.to_str().unwrap(),
        "--trace",
        trace.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["width"], 1);
    assert_eq!(v["extensions"].as_array().unwrap().len(), 7);
    let csv = std::fs::read_to_string(&trace).unwrap();
    assert_eq!(csv.lines().count(), 3);
}

#[test]
fn hex_format_and_base() {
    let dir = scratch("hex");
    let path = dir.join("p.hex");
    std::fs::write(&path, "00000013\n00100073\n").unwrap();
    let p = path.to_str().unwrap();
    let o = rvserial(&["run", p, "--format", "hex-words", "--base", "0x8000"]);
    assert_eq!(o.status.code(), Some(0));
    std::fs::write(&path, "0013\n").unwrap();
    assert_eq!(
        rvserial(&["run", p, "--format", "hex-words"]).status.code(),
        Some(3)
    );
}

#[test]
fn cosim_matrix_and_json() {
    let dir = scratch("cosim");
    let a = dir.join("a.json");
    let b = dir.join("b.json");
    for path in [&a, &b] {
        let o = rvserial(&[
            "cosim",
            "--seed",
            "1",
            "--programs",
            "5",
            "--widths",
            "1,4,32",
            "--json",
            path.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).contains("15 cells: 15 passed, 0 failed"));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(
        rvserial(&["cosim", "--programs", "0"]).status.code(),
        Some(2)
    );
}

#[test]
fn bench_rows_and_json() {
    let dir = scratch("bench");
    let json = dir.join("b.json");
    let o = rvserial(&[
        "bench",
        "--suite",
        "aes128",
        "--widths",
        "1,32",
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0]["kernel"], "aes128-enc");
    assert_eq!(rows[0]["variant"], "rv32i");
    assert!(stdout(&o).contains("speedup over rv32i"));
    assert_eq!(
        rvserial(&["bench", "--suite", "md5"]).status.code(),
        Some(2)
    );
}

#[test]
fn audit_ct() {
    let o = rvserial(&[
        "audit-ct", "--width", "1", "--ext", "zkn,zkt", "--trials", "256",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("pass"), "{s}");
    assert!(
        s.lines()
            .any(|l| l.starts_with("sll ") && l.trim_end().ends_with(" 0")),
        "{s}"
    );
    assert_eq!(
        rvserial(&["audit-ct", "--ext", "zkn"]).status.code(),
        Some(2)
    );
}

#[test]
fn disasm_lines() {
    let dir = scratch("disasm");
    let prog = write_words(&dir, "p.bin", &[NOP, 0xffff_ffff, EBREAK]);
    let o = rvserial(&["disasm", &prog]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "addi x0, x0, 0\n.word 0xffffffff\nebreak\n");
}
