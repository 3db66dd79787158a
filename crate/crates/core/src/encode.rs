//! Encoding layer: one encoder per format and one `asm_*` wrapper per
//! mnemonic, inverse to [`crate::decode`] on the fields each format carries.
//!
//! Encoders mask their arguments to the field widths: register indices keep
//! their low 5 bits, I/S immediates their low 12, B immediates bits 12..1,
//! J immediates bits 20..1 and U immediates bits 31..12. [`assemble`] offers
//! a strict mode that rejects values masking would change.

use crate::decode::{sign_extend, Instruction, Operands, RawInstruction};
use crate::isa::{Format, InstructionSpec, Mnemonic};

#[inline]
fn n05(r: u32) -> u32 {
    r & 0x1f
}

#[inline]
fn fixed(spec: &InstructionSpec) -> u32 {
    spec.funct7.unwrap_or(0) << 25 | spec.funct3.unwrap_or(0) << 12 | spec.opcode
}

pub fn encode_r(spec: &InstructionSpec, rs1: u32, rs2: u32, rd: u32) -> RawInstruction {
    debug_assert_eq!(spec.format, Format::R);
    RawInstruction(fixed(spec) | n05(rs2) << 20 | n05(rs1) << 15 | n05(rd) << 7)
}

pub fn encode_i(spec: &InstructionSpec, rs1: u32, imm: i32, rd: u32) -> RawInstruction {
    debug_assert_eq!(spec.format, Format::I);
    let imm = imm as u32 & 0xfff;
    RawInstruction(fixed(spec) | imm << 20 | n05(rs1) << 15 | n05(rd) << 7)
}

pub fn encode_shift(spec: &InstructionSpec, rs1: u32, shamt: u32, rd: u32) -> RawInstruction {
    debug_assert_eq!(spec.format, Format::ShiftI);
    RawInstruction(fixed(spec) | n05(shamt) << 20 | n05(rs1) << 15 | n05(rd) << 7)
}

pub fn encode_s(spec: &InstructionSpec, rs1: u32, rs2: u32, imm: i32) -> RawInstruction {
    debug_assert_eq!(spec.format, Format::S);
    let imm = imm as u32;
    let hi = (imm >> 5) & 0x7f;
    let lo = imm & 0x1f;
    RawInstruction(fixed(spec) | hi << 25 | n05(rs2) << 20 | n05(rs1) << 15 | lo << 7)
}

/// `imm` is the byte offset; bit 0 is dropped.
pub fn encode_b(spec: &InstructionSpec, rs1: u32, rs2: u32, imm: i32) -> RawInstruction {
    debug_assert_eq!(spec.format, Format::B);
    let imm = imm as u32;
    let b12 = (imm >> 12) & 1;
    let b11 = (imm >> 11) & 1;
    let b10_5 = (imm >> 5) & 0x3f;
    let b4_1 = (imm >> 1) & 0xf;
    RawInstruction(fixed(spec) | b12 << 31 | b10_5 << 25 | n05(rs2) << 20 | n05(rs1) << 15 | b4_1 << 8 | b11 << 7)
}

/// `imm` is the 32-bit value to place in the upper 20 bits; its low 12 bits
/// are dropped.
pub fn encode_u(spec: &InstructionSpec, imm: u32, rd: u32) -> RawInstruction {
    debug_assert_eq!(spec.format, Format::U);
    RawInstruction(fixed(spec) | (imm & 0xffff_f000) | n05(rd) << 7)
}

/// `imm` is the byte offset; bit 0 is dropped.
pub fn encode_j(spec: &InstructionSpec, imm: i32, rd: u32) -> RawInstruction {
    debug_assert_eq!(spec.format, Format::J);
    let imm = imm as u32;
    let b20 = (imm >> 20) & 1;
    let b19_12 = (imm >> 12) & 0xff;
    let b11 = (imm >> 11) & 1;
    let b10_1 = (imm >> 1) & 0x3ff;
    RawInstruction(fixed(spec) | b20 << 31 | b10_1 << 21 | b11 << 20 | b19_12 << 12 | n05(rd) << 7)
}

/// Encodes a decoded instruction. Inverse of [`crate::decode::decode`] for
/// instructions whose fields are already in range.
pub fn encode(insn: &Instruction) -> RawInstruction {
    let spec = insn.mnemonic().spec();
    match insn.operands() {
        Operands::R { rd, rs1, rs2 } => encode_r(spec, rs1.into(), rs2.into(), rd.into()),
        Operands::I { rd, rs1, imm } => encode_i(spec, rs1.into(), imm, rd.into()),
        Operands::ShiftI { rd, rs1, shamt } => encode_shift(spec, rs1.into(), shamt, rd.into()),
        Operands::S { rs1, rs2, imm } => encode_s(spec, rs1.into(), rs2.into(), imm),
        Operands::B { rs1, rs2, imm } => encode_b(spec, rs1.into(), rs2.into(), imm),
        Operands::U { rd, imm } => encode_u(spec, imm, rd.into()),
        Operands::J { rd, imm } => encode_j(spec, imm, rd.into()),
    }
}

/// The immediate an encoder actually stores for `imm`, as decode returns it.
pub fn masked_imm(format: Format, imm: i64) -> i64 {
    let v = imm as u32;
    match format {
        Format::I | Format::S => sign_extend(v & 0xfff, 12) as i64,
        Format::B => sign_extend(v & 0x1ffe, 13) as i64,
        Format::J => sign_extend(v & 0x1f_fffe, 21) as i64,
        Format::U => (v & 0xffff_f000) as i64,
        Format::ShiftI => (v & 0x1f) as i64,
        Format::R => 0,
    }
}

macro_rules! asm_wrappers {
    (
        r: [$($r:ident => $rm:ident),*],
        i: [$($i:ident => $im:ident),*],
        shift: [$($sh:ident => $shm:ident),*],
        s: [$($s:ident => $sm:ident),*],
        b: [$($b:ident => $bm:ident),*],
        u: [$($u:ident => $um:ident),*],
        j: [$($j:ident => $jm:ident),*] $(,)?
    ) => {
        $(
            #[doc = concat!("`", stringify!($rm), " rd, rs1, rs2`")]
            pub fn $r(rs1: u32, rs2: u32, rd: u32) -> RawInstruction {
                encode_r(Mnemonic::$rm.spec(), rs1, rs2, rd)
            }
        )*
        $(
            pub fn $i(rs1: u32, imm: i32, rd: u32) -> RawInstruction {
                encode_i(Mnemonic::$im.spec(), rs1, imm, rd)
            }
        )*
        $(
            pub fn $sh(rs1: u32, shamt: u32, rd: u32) -> RawInstruction {
                encode_shift(Mnemonic::$shm.spec(), rs1, shamt, rd)
            }
        )*
        $(
            pub fn $s(rs1: u32, rs2: u32, imm: i32) -> RawInstruction {
                encode_s(Mnemonic::$sm.spec(), rs1, rs2, imm)
            }
        )*
        $(
            pub fn $b(rs1: u32, rs2: u32, imm: i32) -> RawInstruction {
                encode_b(Mnemonic::$bm.spec(), rs1, rs2, imm)
            }
        )*
        $(
            pub fn $u(imm: u32, rd: u32) -> RawInstruction {
                encode_u(Mnemonic::$um.spec(), imm, rd)
            }
        )*
        $(
            pub fn $j(imm: i32, rd: u32) -> RawInstruction {
                encode_j(Mnemonic::$jm.spec(), imm, rd)
            }
        )*
    };
}

asm_wrappers! {
    r: [asm_add => Add, asm_sub => Sub, asm_sll => Sll, asm_slt => Slt, asm_sltu => Sltu,
        asm_xor => Xor, asm_srl => Srl, asm_sra => Sra, asm_or => Or, asm_and => And],
    i: [asm_addi => Addi, asm_slti => Slti, asm_sltiu => Sltiu, asm_xori => Xori,
        asm_ori => Ori, asm_andi => Andi, asm_lb => Lb, asm_lh => Lh, asm_lw => Lw,
        asm_lbu => Lbu, asm_lhu => Lhu, asm_jalr => Jalr],
    shift: [asm_slli => Slli, asm_srli => Srli, asm_srai => Srai],
    s: [asm_sb => Sb, asm_sh => Sh, asm_sw => Sw],
    b: [asm_beq => Beq, asm_bne => Bne, asm_blt => Blt, asm_bge => Bge,
        asm_bltu => Bltu, asm_bgeu => Bgeu],
    u: [asm_lui => Lui, asm_auipc => Auipc],
    j: [asm_jal => Jal],
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EncodeError {
    #[error("{mnemonic} takes {expected} operands ({signature}), got {got}")]
    WrongArity { mnemonic: Mnemonic, expected: usize, signature: &'static str, got: usize },
    #[error("register index {0} out of range 0..=31")]
    RegisterOutOfRange(i64),
    #[error("{what} {value} out of range {min}..={max}")]
    ImmediateOutOfRange { what: &'static str, value: i64, min: i64, max: i64 },
    #[error("{what} {value} is not a multiple of {align}")]
    Misaligned { what: &'static str, value: i64, align: i64 },
}

/// Operand order taken by the `asm_*` wrapper of each format.
pub fn signature(format: Format) -> &'static str {
    match format {
        Format::R => "rs1 rs2 rd",
        Format::I => "rs1 imm rd",
        Format::ShiftI => "rs1 shamt rd",
        Format::S | Format::B => "rs1 rs2 imm",
        Format::U | Format::J => "imm rd",
    }
}

fn check_reg(v: i64, strict: bool) -> Result<u32, EncodeError> {
    if strict && !(0..32).contains(&v) {
        return Err(EncodeError::RegisterOutOfRange(v));
    }
    Ok(v as u32)
}

fn check_range(what: &'static str, v: i64, min: i64, max: i64, align: i64, strict: bool) -> Result<i64, EncodeError> {
    if strict {
        if !(min..=max).contains(&v) {
            return Err(EncodeError::ImmediateOutOfRange { what, value: v, min, max });
        }
        if v % align != 0 {
            return Err(EncodeError::Misaligned { what, value: v, align });
        }
    }
    Ok(v)
}

/// Encodes `mnemonic` from integer operands given in the wrapper's order
/// (see [`signature`]). Without `strict`, operands are masked like the
/// `asm_*` wrappers; with it, any operand that masking would alter is
/// rejected.
pub fn assemble(mnemonic: Mnemonic, args: &[i64], strict: bool) -> Result<RawInstruction, EncodeError> {
    let spec = mnemonic.spec();
    let format = spec.format;
    let expected = if matches!(format, Format::U | Format::J) { 2 } else { 3 };
    if args.len() != expected {
        return Err(EncodeError::WrongArity { mnemonic, expected, signature: signature(format), got: args.len() });
    }
    let word = match format {
        Format::R => {
            encode_r(spec, check_reg(args[0], strict)?, check_reg(args[1], strict)?, check_reg(args[2], strict)?)
        }
        Format::I => encode_i(
            spec,
            check_reg(args[0], strict)?,
            check_range("immediate", args[1], -2048, 2047, 1, strict)? as i32,
            check_reg(args[2], strict)?,
        ),
        Format::ShiftI => encode_shift(
            spec,
            check_reg(args[0], strict)?,
            check_range("shift amount", args[1], 0, 31, 1, strict)? as u32,
            check_reg(args[2], strict)?,
        ),
        Format::S => encode_s(
            spec,
            check_reg(args[0], strict)?,
            check_reg(args[1], strict)?,
            check_range("immediate", args[2], -2048, 2047, 1, strict)? as i32,
        ),
        Format::B => encode_b(
            spec,
            check_reg(args[0], strict)?,
            check_reg(args[1], strict)?,
            check_range("branch offset", args[2], -4096, 4094, 2, strict)? as i32,
        ),
        // Either the signed or the unsigned reading of a 32-bit value.
        Format::U => encode_u(
            spec,
            check_range("upper immediate", args[0], i32::MIN as i64, u32::MAX as i64, 0x1000, strict)? as u32,
            check_reg(args[1], strict)?,
        ),
        Format::J => encode_j(
            spec,
            check_range("jump offset", args[0], -(1 << 20), (1 << 20) - 2, 2, strict)? as i32,
            check_reg(args[1], strict)?,
        ),
    };
    Ok(word)
}
