// SPDX-License-Identifier: Apache-2.0

use proptest::prelude::*;

use rvserial::golden::{HaltReason, CONSOLE_ADDR, EXIT_ADDR};
use rvserial::isa::{reg, Assembler, ExtensionSet, Instr, Mnemonic};
use rvserial::microarch::CoreConfig;
use rvserial::system::{load_image_file, run, ImageFormat, DEFAULT_BASE};

fn console_program(exit: i32) -> rvserial::system::ProgramImage {
    let mut asm = Assembler::new();
    asm.push(Instr::upper(
        Mnemonic::Lui,
        reg::T0,
        (CONSOLE_ADDR >> 12) as i32,
    ));
    for &b in b"hi\n" {
        asm.push(Instr::i(Mnemonic::Addi, reg::T1, reg::ZERO, b as i32));
        asm.push(Instr::store(Mnemonic::Sb, reg::T1, 0, reg::T0));
    }
    asm.push(Instr::i(Mnemonic::Addi, reg::T1, reg::ZERO, exit));
    asm.push(Instr::store(
        Mnemonic::Sw,
        reg::T1,
        (EXIT_ADDR - CONSOLE_ADDR) as i32,
        reg::T0,
    ));
    asm.push(Instr::ebreak());
    asm.assemble(DEFAULT_BASE).unwrap()
}

#[test]
fn console_and_exit_device() {
    let stats = run(
        &console_program(3),
        CoreConfig::new(4, ExtensionSet::rv32i()).unwrap(),
        10_000,
    );
    assert_eq!(stats.console, b"hi\n");
    assert_eq!(stats.halt, HaltReason::Ecall);
    assert_eq!(stats.exit_code, Some(3));
    assert_eq!(stats.instret, 9);
}

#[test]
fn stats_json_has_exactly_the_documented_keys() {
    let stats = run(
        &console_program(0),
        CoreConfig::new(1, ExtensionSet::zkn_zkt()).unwrap(),
        10_000,
    );
    let v = serde_json::to_value(stats.json()).unwrap();
    let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    keys.sort();
    assert_eq!(
        keys,
        [
            "classes",
            "code_size",
            "cpi",
            "cycles",
            "extensions",
            "halt",
            "instret",
            "width"
        ]
    );
    assert_eq!(v["width"], 1);
    assert_eq!(v["extensions"].as_array().unwrap().len(), 7);
    let store = &v["classes"]["store"];
    assert_eq!(store["count"], 4);
}

#[test]
fn hex_file_round_trip() {
    let dir = std::env::temp_dir().join(format!("rvserial-system-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("prog.hex");
    let image = console_program(0);
    let text: String = image
        .code_words()
        .map(|(_, w)| format!("{w:08x}\n"))
        .collect();
    std::fs::write(&path, format!("# console test\n{text}")).unwrap();
    let loaded = load_image_file(&path, ImageFormat::HexWords, DEFAULT_BASE, None).unwrap();
    assert_eq!(loaded.bytes, image.bytes);
    std::fs::remove_dir_all(&dir).unwrap();
}

proptest! {
    #[test]
    fn cycle_cap_is_never_exceeded(cap in 1u64..400, w in prop::sample::select(vec![1u32, 2, 4, 8, 16, 32])) {
        let mut asm = Assembler::new();
        asm.label("top");
        asm.push(Instr::i(Mnemonic::Slli, reg::T0, reg::T0, 13));
        asm.push(Instr::r(Mnemonic::Add, reg::T0, reg::T0, reg::T1));
        asm.j("top");
        let image = asm.assemble(DEFAULT_BASE).unwrap();
        let stats = run(&image, CoreConfig::new(w, ExtensionSet::rv32i()).unwrap(), cap);
        prop_assert_eq!(stats.halt, HaltReason::MaxSteps);
        prop_assert!(stats.cycles <= cap.max(stats.startup));
    }
}
