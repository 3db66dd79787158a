#![allow(dead_code)]

use proptest::prelude::*;
use rand::Rng;
use rv32_core::encode::*;
use rv32_core::{Format, MachineState, Mnemonic, ModelStatus, Operands, RawInstruction, Reg};
use rv32_reference::RefMachine;

/// Addresses biased towards the wrap-around boundary and page edges.
pub fn arb_addr() -> impl Strategy<Value = u32> {
    prop_oneof![
        4 => any::<u32>(),
        1 => 0xffff_fff0u32..=0xffff_ffff,
        1 => 0u32..0x10,
        1 => (0u32..0x10_0000).prop_map(|p| (p << 12).wrapping_sub(2)),
    ]
}

pub fn arb_word() -> impl Strategy<Value = u32> {
    prop_oneof![
        3 => any::<u32>(),
        1 => prop::sample::select(vec![0u32, 1, 0x7fff_ffff, 0x8000_0000, 0xffff_ffff, 0x80, 0xff, 0x8000, 0xffff]),
    ]
}

pub fn arb_status() -> impl Strategy<Value = ModelStatus> {
    prop_oneof![
        4 => Just(ModelStatus::Running),
        1 => (any::<u32>(), any::<u32>()).prop_map(|(word, pc)| ModelStatus::IllegalInstruction { word, pc }),
        1 => any::<u32>().prop_map(ModelStatus::Halted),
    ]
}

prop_compose! {
    pub fn arb_state()(
        regs in prop::collection::vec(arb_word(), 32),
        pc in any::<u32>(),
        bytes in prop::collection::vec((arb_addr(), any::<u8>()), 0..12),
        status in arb_status(),
    ) -> MachineState {
        let mut s = MachineState::new().with_pc(pc).with_status(status);
        for (i, v) in regs.into_iter().enumerate() {
            s.set_reg(Reg::new(i as u32), v);
        }
        for (a, b) in bytes {
            s.write_u8(a, b);
        }
        s
    }
}

/// Running states only.
pub fn arb_running_state() -> impl Strategy<Value = MachineState> {
    arb_state().prop_map(|s| s.with_status(ModelStatus::Running))
}

/// Calls the `asm_*` wrapper for `m` with operands in wrapper order. U/J
/// take `(a, b)` = `(imm, rd)`; `c` is ignored for them.
pub fn asm(m: Mnemonic, a: u32, b: u32, c: u32) -> RawInstruction {
    use Mnemonic::*;
    let (ai, bi, ci) = (a as i32, b as i32, c as i32);
    match m {
        Add => asm_add(a, b, c),
        Sub => asm_sub(a, b, c),
        Sll => asm_sll(a, b, c),
        Slt => asm_slt(a, b, c),
        Sltu => asm_sltu(a, b, c),
        Xor => asm_xor(a, b, c),
        Srl => asm_srl(a, b, c),
        Sra => asm_sra(a, b, c),
        Or => asm_or(a, b, c),
        And => asm_and(a, b, c),
        Addi => asm_addi(a, bi, c),
        Slti => asm_slti(a, bi, c),
        Sltiu => asm_sltiu(a, bi, c),
        Xori => asm_xori(a, bi, c),
        Ori => asm_ori(a, bi, c),
        Andi => asm_andi(a, bi, c),
        Slli => asm_slli(a, b, c),
        Srli => asm_srli(a, b, c),
        Srai => asm_srai(a, b, c),
        Lb => asm_lb(a, bi, c),
        Lh => asm_lh(a, bi, c),
        Lw => asm_lw(a, bi, c),
        Lbu => asm_lbu(a, bi, c),
        Lhu => asm_lhu(a, bi, c),
        Jalr => asm_jalr(a, bi, c),
        Sb => asm_sb(a, b, ci),
        Sh => asm_sh(a, b, ci),
        Sw => asm_sw(a, b, ci),
        Beq => asm_beq(a, b, ci),
        Bne => asm_bne(a, b, ci),
        Blt => asm_blt(a, b, ci),
        Bge => asm_bge(a, b, ci),
        Bltu => asm_bltu(a, b, ci),
        Bgeu => asm_bgeu(a, b, ci),
        Lui => asm_lui(a, b),
        Auipc => asm_auipc(a, b),
        Jal => asm_jal(ai, b),
    }
}

pub fn to_reference(s: &MachineState) -> RefMachine {
    let mut r = RefMachine::new();
    r.x = *s.regs();
    r.pc = s.pc();
    for (base, page) in s.memory().nonzero_pages() {
        for (k, &b) in page.iter().enumerate() {
            if b != 0 {
                r.mem.insert(base + k as u32, b);
            }
        }
    }
    r
}

/// Registers, pc and every memory byte agree.
pub fn agrees(s: &MachineState, r: &RefMachine) -> Result<(), String> {
    if s.regs() != &r.x {
        return Err(format!("registers differ:\n model {:08x?}\n ref   {:08x?}", s.regs(), r.x));
    }
    if s.pc() != r.pc {
        return Err(format!("pc differs: model {:08x}, ref {:08x}", s.pc(), r.pc));
    }
    for (&a, &b) in &r.mem {
        if s.read_u8(a) != b {
            return Err(format!("byte {a:08x}: model {:02x}, ref {b:02x}", s.read_u8(a)));
        }
    }
    for (base, page) in s.memory().nonzero_pages() {
        for (k, &b) in page.iter().enumerate() {
            let a = base + k as u32;
            if b != 0 && r.byte(a) != b {
                return Err(format!("byte {a:08x}: model {b:02x}, ref {:02x}", r.byte(a)));
            }
        }
    }
    Ok(())
}

pub fn sext(v: u32, bits: u32) -> i32 {
    ((v << (32 - bits)) as i32) >> (32 - bits)
}

/// Operands `asm(m, a, b, c)` should decode to, computed from the arguments
/// alone: registers keep 5 bits, immediates keep their encodable bits.
pub fn masked_operands(m: Mnemonic, a: u32, b: u32, c: u32) -> Operands {
    let r = Reg::new;
    match m.format() {
        Format::R => Operands::R { rd: r(c & 31), rs1: r(a & 31), rs2: r(b & 31) },
        Format::I => Operands::I { rd: r(c & 31), rs1: r(a & 31), imm: sext(b & 0xfff, 12) },
        Format::ShiftI => Operands::ShiftI { rd: r(c & 31), rs1: r(a & 31), shamt: b & 31 },
        Format::S => Operands::S { rs1: r(a & 31), rs2: r(b & 31), imm: sext(c & 0xfff, 12) },
        Format::B => Operands::B { rs1: r(a & 31), rs2: r(b & 31), imm: sext(c & 0x1ffe, 13) },
        Format::U => Operands::U { rd: r(b & 31), imm: a & 0xffff_f000 },
        Format::J => Operands::J { rd: r(b & 31), imm: sext(a & 0x1f_fffe, 21) },
    }
}

const SPECIAL: [u32; 12] = [0, 1, 2, 0x7f, 0x80, 0xff, 0x7fff, 0x8000, 0xffff, 0x7fff_ffff, 0x8000_0000, 0xffff_ffff];

fn value(rng: &mut impl Rng) -> u32 {
    match rng.gen_range(0..4) {
        0 => SPECIAL[rng.gen_range(0..SPECIAL.len())],
        1 => rng.gen_range(0..64),
        _ => rng.gen(),
    }
}

/// A random single-instruction case for `m`: random registers, random
/// memory around the load/store address, and `asm_m` at pc. Register
/// operands alias often (rd = rs1, rs1 = rs2) and register values lean on
/// sign and width boundaries.
pub fn random_case(rng: &mut impl Rng, m: Mnemonic) -> MachineState {
    let mut s = MachineState::new();
    for i in 1..32 {
        s.set_reg(Reg::new(i), value(rng));
    }
    let rs1 = rng.gen_range(0..32u32);
    let rs2 = if rng.gen_bool(0.15) { rs1 } else { rng.gen_range(0..32) };
    let rd = if rng.gen_bool(0.25) { rs1 } else { rng.gen_range(0..32) };
    if rng.gen_bool(0.1) {
        s.set_reg(Reg::new(rs2), s.reg(Reg::new(rs1)));
    }
    let imm: u32 = match rng.gen_range(0..3) {
        0 => rng.gen_range(0..16u32).wrapping_sub(8),
        _ => rng.gen(),
    };
    let pc = match rng.gen_range(0..8) {
        0 => 0u32.wrapping_sub(4 * rng.gen_range(1..4)),
        1 => rng.gen::<u32>() & !1,
        _ => rng.gen::<u32>() & !3,
    };
    s.set_pc(pc);
    let word = match m.format() {
        Format::U | Format::J => asm(m, imm, rd, 0),
        Format::S | Format::B => asm(m, rs1, rs2, imm),
        _ => asm(m, rs1, imm, rd),
    };
    if matches!(m.format(), Format::I | Format::S) {
        let ea = s.reg(Reg::new(rs1)).wrapping_add(sext(imm & 0xfff, 12) as u32);
        for k in 0..12u32 {
            s.write_u8(ea.wrapping_sub(4).wrapping_add(k), rng.gen());
        }
    }
    s.write_u32(pc, word.0);
    s
}

fn expect<T: PartialEq + std::fmt::Debug>(got: T, want: T, what: &str, ctx: &dyn Fn() -> String) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got:?}, want {want:?} for {}", ctx()))
    }
}

/// Checks every field of `w = asm(m, a, b, c)` against the masked
/// arguments and the fixed selector bits of `m`.
pub fn check_fields(m: Mnemonic, w: RawInstruction, a: u32, b: u32, c: u32) -> Result<(), String> {
    let spec = m.spec();
    let ctx = || format!("{m} {a:#x} {b:#x} {c:#x} -> {w}");
    expect(w.opcode(), spec.opcode, "opcode", &ctx)?;
    if let Some(f3) = spec.funct3 {
        expect(w.funct3(), f3, "funct3", &ctx)?;
    }
    if let Some(f7) = spec.funct7 {
        expect(w.funct7(), f7, "funct7", &ctx)?;
    }
    match m.format() {
        Format::R => {
            expect((w.rs1(), w.rs2(), w.rd()), (a & 31, b & 31, c & 31), "(rs1, rs2, rd)", &ctx)?;
        }
        Format::I => {
            expect((w.rs1(), w.rd()), (a & 31, c & 31), "(rs1, rd)", &ctx)?;
            expect(w.imm_i(), sext(b & 0xfff, 12), "imm_i", &ctx)?;
        }
        Format::ShiftI => {
            expect((w.rs1(), w.rs2(), w.rd()), (a & 31, b & 31, c & 31), "(rs1, rs2, rd)", &ctx)?;
        }
        Format::S => {
            expect((w.rs1(), w.rs2()), (a & 31, b & 31), "(rs1, rs2)", &ctx)?;
            expect(w.imm_s(), sext(c & 0xfff, 12), "imm_s", &ctx)?;
        }
        Format::B => {
            expect((w.rs1(), w.rs2()), (a & 31, b & 31), "(rs1, rs2)", &ctx)?;
            expect(w.imm_b(), sext(c & 0x1ffe, 13), "imm_b", &ctx)?;
        }
        Format::U => {
            expect(w.rd(), b & 31, "rd", &ctx)?;
            expect(w.imm_u(), a & 0xffff_f000, "imm_u", &ctx)?;
        }
        Format::J => {
            expect(w.rd(), b & 31, "rd", &ctx)?;
            expect(w.imm_j(), sext(a & 0x1f_fffe, 21), "imm_j", &ctx)?;
        }
    }
    Ok(())
}
