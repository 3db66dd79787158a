//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails. Case counts are fixed and every random
//! source is seeded, so runs are reproducible.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::process::{self, Command, Output};
use std::time::Instant;

use common::{
    agrees, arb_addr, arb_running_state, arb_state, arb_status, asm, check_fields, masked_operands, random_case,
    to_reference,
};
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::TestRunner;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rv32_core::encode::{asm_add, encode};
use rv32_core::loader::{load_image, ProgramImage};
use rv32_core::{decode, step, Instruction, MachineState, Mnemonic, ModelStatus, Reg};
use rv32_reference::{testdata_dir, vectors, Outcome};

const LAW_CASES: usize = 10_000;
const BRIDGE_CASES: usize = 10_000;
const INVERSION_CASES: usize = 1_000;
const STEP_THEOREM_CASES: usize = 1_000;
const DIFFERENTIAL_CASES: usize = 10_000;
const FIB_BUDGET: &str = "10000";
/// Upper bound on pc in the ADD step theorem (exclusive).
const PC_BOUND: u32 = u32::MAX - 4; // 2^32 - 5

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

struct Gen {
    runner: TestRunner,
    rng: ChaCha8Rng,
}

impl Gen {
    fn new(seed: u64) -> Self {
        Gen { runner: TestRunner::deterministic(), rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    fn sample<S: Strategy>(&mut self, s: S) -> S::Value {
        s.new_tree(&mut self.runner).expect("strategy").current()
    }

    fn state(&mut self) -> MachineState {
        self.sample(arb_state())
    }

    fn addr(&mut self) -> u32 {
        self.sample(arb_addr())
    }

    fn status(&mut self) -> ModelStatus {
        self.sample(arb_status())
    }

    fn reg(&mut self) -> Reg {
        Reg::new(self.rng.gen_range(0..32))
    }

    fn word(&mut self) -> u32 {
        self.rng.gen()
    }
}

fn check(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

/// Runs `law` on `cases` generated inputs; stops at the first failure.
fn for_cases(cases: usize, g: &mut Gen, mut law: impl FnMut(&mut Gen) -> Result<(), String>) -> Result<(), String> {
    for n in 0..cases {
        law(g).map_err(|e| format!("case {n}: {e}"))?;
    }
    Ok(())
}

type Law = (&'static str, fn(&mut Gen) -> Result<(), String>);

const STATE_LAWS: [Law; 16] = [
    ("register read-over-write, same index", |g| {
        let (s, r, v) = (g.state(), g.reg(), g.word());
        let want = if r.is_zero() { 0 } else { v };
        check(s.with_reg(r, v).reg(r) == want, || format!("{r}"))
    }),
    ("register read-over-write, other index", |g| {
        let (s, r, q, v) = (g.state(), g.reg(), g.reg(), g.word());
        check(r == q || s.clone().with_reg(q, v).reg(r) == s.reg(r), || format!("{r} after write to {q}"))
    }),
    ("register write-over-write", |g| {
        let (s, r, v, w) = (g.state(), g.reg(), g.word(), g.word());
        check(s.clone().with_reg(r, w).with_reg(r, v) == s.with_reg(r, v), || format!("{r}"))
    }),
    ("register writing-the-read", |g| {
        let (s, r) = (g.state(), g.reg());
        check(s.clone().with_reg(r, s.reg(r)) == s, || format!("{r}"))
    }),
    ("pc read-over-write", |g| {
        let (s, v) = (g.state(), g.word());
        check(s.with_pc(v).pc() == v, || format!("{v:#x}"))
    }),
    ("pc write-over-write", |g| {
        let (s, v, w) = (g.state(), g.word(), g.word());
        check(s.clone().with_pc(w).with_pc(v) == s.with_pc(v), || format!("{v:#x}"))
    }),
    ("pc writing-the-read", |g| {
        let s = g.state();
        check(s.clone().with_pc(s.pc()) == s, String::new)
    }),
    ("status read-over-write", |g| {
        let (s, m) = (g.state(), g.status());
        check(s.with_status(m).status() == m, || format!("{m:?}"))
    }),
    ("status write-over-write", |g| {
        let (s, m, n) = (g.state(), g.status(), g.status());
        check(s.clone().with_status(n).with_status(m) == s.with_status(m), || format!("{m:?}"))
    }),
    ("status writing-the-read", |g| {
        let s = g.state();
        check(s.clone().with_status(s.status()) == s, String::new)
    }),
    ("rm08-wm08 (same address)", |g| {
        let (s, a, v) = (g.state(), g.addr(), g.rng.gen::<u8>());
        check(s.with_u8(a, v).read_u8(a) == v, || format!("{a:#x}"))
    }),
    ("byte read-over-write, other address", |g| {
        let (s, a, b, v) = (g.state(), g.addr(), g.addr(), g.rng.gen::<u8>());
        check(a == b || s.clone().with_u8(b, v).read_u8(a) == s.read_u8(a), || format!("{a:#x} after {b:#x}"))
    }),
    ("byte write-over-write", |g| {
        let (s, a, v, w) = (g.state(), g.addr(), g.rng.gen::<u8>(), g.rng.gen::<u8>());
        check(s.clone().with_u8(a, w).with_u8(a, v) == s.with_u8(a, v), || format!("{a:#x}"))
    }),
    ("byte writing-the-read", |g| {
        let (s, a) = (g.state(), g.addr());
        check(s.clone().with_u8(a, s.read_u8(a)) == s, || format!("{a:#x}"))
    }),
    ("field independence", |g| {
        let s = g.state();
        let (r, v, a, b, m) = (g.reg(), g.word(), g.addr(), g.rng.gen::<u8>(), g.status());
        let t = s.clone().with_reg(r, v);
        check(t.pc() == s.pc() && t.status() == s.status() && t.memory() == s.memory(), || "register write".into())?;
        let t = s.clone().with_pc(v);
        check(t.regs() == s.regs() && t.status() == s.status() && t.memory() == s.memory(), || "pc write".into())?;
        let t = s.clone().with_status(m);
        check(t.regs() == s.regs() && t.pc() == s.pc() && t.memory() == s.memory(), || "status write".into())?;
        let t = s.clone().with_u8(a, b);
        check(t.regs() == s.regs() && t.pc() == s.pc() && t.status() == s.status(), || "byte write".into())
    }),
    ("well-formedness preservation", |g| {
        let s = g.state();
        let (r, v, a, b, m) = (g.reg(), g.word(), g.addr(), g.rng.gen::<u8>(), g.status());
        check(s.is_well_formed(), || "generated state".into())?;
        check(s.clone().with_reg(r, v).is_well_formed(), || "register write".into())?;
        check(s.clone().with_pc(v).is_well_formed(), || "pc write".into())?;
        check(s.clone().with_status(m).is_well_formed(), || "status write".into())?;
        check(s.clone().with_u8(a, b).is_well_formed(), || "byte write".into())?;
        check(s.with_u32(a, v).is_well_formed(), || "word write".into())
    }),
];

fn state_laws() -> Verdict {
    let mut g = Gen::new(1);
    for (name, law) in STATE_LAWS {
        for_cases(LAW_CASES, &mut g, law).map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(format!("{} laws x {LAW_CASES} cases", STATE_LAWS.len()))
}

fn byte_word_bridge() -> Verdict {
    let mut g = Gen::new(2);
    let mut checked = 0usize;
    for_cases(BRIDGE_CASES, &mut g, |g| {
        let s = g.state();
        let random = g.addr();
        for a in [random, u32::MAX, u32::MAX - 1, u32::MAX - 2] {
            let b = |k: u32| s.read_u8(a.wrapping_add(k)) as u32;
            let concat = b(0) | b(1) << 8 | b(2) << 16 | b(3) << 24;
            check(s.read_u32(a) == concat, || format!("rm32 at {a:#x}"))?;
            check(s.read_u16(a) as u32 == b(0) | b(1) << 8, || format!("rm16 at {a:#x}"))?;

            let v = g.word();
            let by_bytes = s
                .clone()
                .with_u8(a, v as u8)
                .with_u8(a.wrapping_add(1), (v >> 8) as u8)
                .with_u8(a.wrapping_add(2), (v >> 16) as u8)
                .with_u8(a.wrapping_add(3), (v >> 24) as u8);
            let t = s.clone().with_u32(a, v);
            check(t == by_bytes, || format!("wm32 at {a:#x}"))?;
            check(t.read_u32(a) == v, || format!("rm32 of wm32 at {a:#x}"))?;

            let mut h = s.clone();
            h.write_u16(a, v as u16);
            check(h == s.clone().with_u8(a, v as u8).with_u8(a.wrapping_add(1), (v >> 8) as u8), || {
                format!("wm16 at {a:#x}")
            })?;
            checked += 1;
        }
        Ok(())
    })?;
    Ok(format!("{checked} (addr, state) cases, 3 per state at 2^32-1..2^32-3"))
}

fn inversion() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for m in Mnemonic::ALL {
        for _ in 0..INVERSION_CASES {
            let (a, b, c): (u32, u32, u32) = (rng.gen(), rng.gen(), rng.gen());
            let w = asm(m, a, b, c);
            check_fields(m, w, a, b, c)?;
            let expected = Instruction::from_parts(m, masked_operands(m, a, b, c)).unwrap();
            check(decode(w) == Ok(expected), || format!("decode({w}) for {m} {a:#x} {b:#x} {c:#x}"))?;
            check(encode(&expected) == w, || format!("encode({expected})"))?;
        }
    }
    Ok(format!("37 mnemonics x {INVERSION_CASES} cases, every field plus decode/encode identity"))
}

fn step_theorem() -> Verdict {
    let mut g = Gen::new(4);
    for_cases(STEP_THEOREM_CASES, &mut g, |g| {
        let s = g.sample(arb_running_state());
        let pc = g.rng.gen_range(0..PC_BOUND);
        let (i, j) = (g.word(), g.word());
        let k = loop {
            let k = g.word();
            if k & 31 != 0 {
                break k;
            }
        };
        let s = s.with_pc(pc).with_u32(pc, asm_add(i, j, k).0);
        check(s.is_well_formed(), || "hypothesis: well-formed".into())?;
        let sum = s.reg(Reg::new(i & 31)).wrapping_add(s.reg(Reg::new(j & 31)));
        let expected = s.clone().with_reg(Reg::new(k & 31), sum).with_pc(pc + 4);
        let mut t = s;
        step(&mut t);
        check(t == expected, || format!("add x{}, x{}, x{} at pc {pc:#x}", k & 31, i & 31, j & 31))
    })?;
    Ok(format!("{STEP_THEOREM_CASES} instances, pc < 2^32-5, rd != x0"))
}

/// Named single-instruction cases with values fixed by hand.
type EdgeCase = (&'static str, MachineState, Box<dyn Fn(&MachineState) -> bool>);

fn edge_cases() -> Vec<EdgeCase> {
    let at = |w: rv32_core::RawInstruction| MachineState::new().with_pc(0x100).with_u32(0x100, w.0);
    let x = |i: u32| Reg::new(i);
    vec![
        (
            "jalr x5, 0(x5)",
            at(asm(Mnemonic::Jalr, 5, 0, 5)).with_reg(x(5), 0x1235),
            Box::new(|s: &MachineState| s.pc() == 0x1234 && s.reg(Reg::new(5)) == 0x104),
        ),
        (
            "lb of 0x80",
            at(asm(Mnemonic::Lb, 1, 0, 2)).with_reg(x(1), 0x800).with_u8(0x800, 0x80),
            Box::new(|s: &MachineState| s.reg(Reg::new(2)) == 0xffff_ff80),
        ),
        (
            "lbu of 0x80",
            at(asm(Mnemonic::Lbu, 1, 0, 2)).with_reg(x(1), 0x800).with_u8(0x800, 0x80),
            Box::new(|s: &MachineState| s.reg(Reg::new(2)) == 0x80),
        ),
        (
            "lh of 0x8000",
            at(asm(Mnemonic::Lh, 1, 0, 2)).with_reg(x(1), 0x800).with_u8(0x801, 0x80),
            Box::new(|s: &MachineState| s.reg(Reg::new(2)) == 0xffff_8000),
        ),
        (
            "lhu of 0x8000",
            at(asm(Mnemonic::Lhu, 1, 0, 2)).with_reg(x(1), 0x800).with_u8(0x801, 0x80),
            Box::new(|s: &MachineState| s.reg(Reg::new(2)) == 0x8000),
        ),
        (
            "slt -1 < 1",
            at(asm(Mnemonic::Slt, 1, 2, 3)).with_reg(x(1), u32::MAX).with_reg(x(2), 1),
            Box::new(|s: &MachineState| s.reg(Reg::new(3)) == 1),
        ),
        (
            "sltu 0xffffffff < 1",
            at(asm(Mnemonic::Sltu, 1, 2, 3)).with_reg(x(1), u32::MAX).with_reg(x(2), 1),
            Box::new(|s: &MachineState| s.reg(Reg::new(3)) == 0),
        ),
        (
            "sltiu x0 < -1",
            at(asm(Mnemonic::Sltiu, 0, u32::MAX, 3)),
            Box::new(|s: &MachineState| s.reg(Reg::new(3)) == 1),
        ),
        (
            "blt -1 < 0",
            at(asm(Mnemonic::Blt, 1, 0, 64)).with_reg(x(1), u32::MAX),
            Box::new(|s: &MachineState| s.pc() == 0x140),
        ),
        (
            "bltu 0xffffffff < 0",
            at(asm(Mnemonic::Bltu, 1, 0, 64)).with_reg(x(1), u32::MAX),
            Box::new(|s: &MachineState| s.pc() == 0x104),
        ),
        (
            "bge -1 >= 0",
            at(asm(Mnemonic::Bge, 1, 0, 64)).with_reg(x(1), u32::MAX),
            Box::new(|s: &MachineState| s.pc() == 0x104),
        ),
        (
            "bgeu 0xffffffff >= 0",
            at(asm(Mnemonic::Bgeu, 1, 0, 64)).with_reg(x(1), u32::MAX),
            Box::new(|s: &MachineState| s.pc() == 0x140),
        ),
        (
            "sra of 0x80000000 by 31",
            at(asm(Mnemonic::Sra, 1, 2, 3)).with_reg(x(1), 0x8000_0000).with_reg(x(2), 63),
            Box::new(|s: &MachineState| s.reg(Reg::new(3)) == u32::MAX),
        ),
    ]
}

fn differential() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for m in Mnemonic::ALL {
        for n in 0..DIFFERENTIAL_CASES {
            let mut s = random_case(&mut rng, m);
            let mut r = to_reference(&s);
            step(&mut s);
            check(r.step() == Outcome::Executed, || format!("{m} case {n}: reference rejected the word"))?;
            agrees(&s, &r).map_err(|e| format!("{m} case {n}: {e}"))?;
        }
    }

    let vs = vectors::load();
    for v in &vs {
        let mut s = MachineState::new().with_pc(v.pc);
        for (i, &x) in v.initial_regs().iter().enumerate() {
            s.set_reg(Reg::new(i as u32), x);
        }
        if let Some((base, init, _)) = &v.window {
            s.memory_mut().write_bytes(*base, init);
        }
        s.write_u32(v.pc, v.word);
        step(&mut s);
        let memory_ok = v.window.as_ref().is_none_or(|(base, _, fin)| &s.memory().read_bytes(*base, fin.len()) == fin);
        check(s.pc() == v.next_pc && s.regs() == &v.final_regs() && memory_ok, || {
            format!("emulator vector `{}`", v.source)
        })?;
    }

    let edges = edge_cases();
    for (name, s, expect) in &edges {
        let mut t = s.clone();
        let mut r = to_reference(s);
        step(&mut t);
        r.step();
        agrees(&t, &r).map_err(|e| format!("{name}: {e}"))?;
        check(expect(&t), || format!("{name}: unexpected result"))?;
    }

    Ok(format!(
        "37 x {DIFFERENTIAL_CASES} random states vs reference, {} emulator vectors, {} edge cases",
        vs.len(),
        edges.len()
    ))
}

fn sim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rv32-sim")).args(args).output().expect("spawn rv32-sim")
}

fn fixture(name: &str) -> String {
    testdata_dir().join(name).to_string_lossy().into_owned()
}

fn parse_dump(text: &str) -> Vec<u8> {
    text.lines()
        .flat_map(|l| l.split_whitespace().skip(1))
        .map(|b| u8::from_str_radix(b, 16).expect("dump byte"))
        .collect()
}

fn end_to_end() -> Verdict {
    let (mut a, mut b) = (0u32, 1u32);
    for _ in 0..10 {
        (a, b) = (b, a + b);
    }
    let fib10 = a;

    let out = sim(&["run", &fixture("fib.hex"), "--steps", FIB_BUDGET, "--dump-regs"]);
    check(out.status.code() == Some(0), || format!("fib exited with {:?}", out.status.code()))?;
    let regs = String::from_utf8_lossy(&out.stdout);
    let a0 = regs
        .lines()
        .find_map(|l| l.strip_prefix("x10 "))
        .and_then(|v| u32::from_str_radix(v.trim(), 16).ok())
        .ok_or("no x10 line in register dump")?;
    check(a0 == fib10, || format!("fib: x10 = {a0:#x}, want {fib10:#x}"))?;

    let source = {
        let image = ProgramImage::parse_file(fixture("memcpy.hex")).map_err(|e| e.to_string())?;
        let mut s = MachineState::new();
        load_image(&image, &mut s).map_err(|e| e.to_string())?;
        s.memory().read_bytes(0x1000, 64)
    };
    check(source.iter().any(|&b| b != 0), || "memcpy source is empty".into())?;
    let out = sim(&["run", &fixture("memcpy.hex"), "--steps", FIB_BUDGET, "--dump-mem", "0x2000", "64"]);
    check(out.status.code() == Some(0), || format!("memcpy exited with {:?}", out.status.code()))?;
    let copied = parse_dump(&String::from_utf8_lossy(&out.stdout));
    let diff = (0..64).filter(|&k| copied.get(k) != source.get(k)).count();
    check(copied.len() == 64 && diff == 0, || format!("memcpy: {diff} of 64 bytes differ"))?;

    Ok(format!("fib x10 = {a0} (= fib(10)), memcpy 64/64 bytes match"))
}

fn golden_set() -> Verdict {
    let text = std::fs::read_to_string(testdata_dir().join("golden_words.txt")).map_err(|e| e.to_string())?;
    let mut mnemonics = BTreeSet::new();
    let mut lines = 0;
    for line in text.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty()) {
        let body = line.split('#').next().unwrap();
        let fields: Vec<&str> = body.split_whitespace().collect();
        let (word, args) = fields.split_last().ok_or("empty golden line")?;
        let mut cmd = vec!["asm-word"];
        cmd.extend_from_slice(args);
        let out = sim(&cmd);
        let got = String::from_utf8_lossy(&out.stdout);
        check(out.status.success() && got.trim() == *word, || {
            format!("`{}`: got `{}`, want {word}", line.trim(), got.trim())
        })?;
        mnemonics.insert(args[0].to_string());
        lines += 1;
    }
    check(mnemonics.len() == 37, || format!("golden set covers {} mnemonics", mnemonics.len()))?;
    Ok(format!("{lines} words over 37 mnemonics, byte-exact"))
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("state laws", state_laws),
        ("byte/word bridge", byte_word_bridge),
        ("encode/decode inversion", inversion),
        ("ADD step theorem", step_theorem),
        ("differential oracle", differential),
        ("end-to-end fixtures", end_to_end),
        ("encoding golden set", golden_set),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("PASS {} {name:<24} {detail} ({secs:.1}s)", n + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name:<24} {why} ({secs:.1}s)", n + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        process::exit(1);
    }
}
