//! Decoding layer: bit-field extractors, immediate reconstruction for every
//! format, and identification of a raw word as one of the modeled
//! instructions.
//!
//! Extractors are pure functions of the word. [`decode`] is total: every
//! 32-bit value maps either to exactly one [`Instruction`] or to
//! [`IllegalInstruction`].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::isa::{opcode, Format, Mnemonic, Reg};

/// An undecoded 32-bit instruction word.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RawInstruction(pub u32);

/// The named fields an instruction word can carry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldName {
    Opcode,
    Rd,
    Funct3,
    Rs1,
    Rs2,
    Funct7,
    Imm,
}

#[inline]
const fn bits(w: u32, hi: u32, lo: u32) -> u32 {
    (w >> lo) & ((1 << (hi - lo + 1)) - 1)
}

/// Sign-extends the low `width` bits of `v`.
#[inline]
pub const fn sign_extend(v: u32, width: u32) -> i32 {
    let shift = 32 - width;
    ((v << shift) as i32) >> shift
}

impl RawInstruction {
    pub const fn word(self) -> u32 {
        self.0
    }

    /// Bits 6..0.
    pub const fn opcode(self) -> u32 {
        bits(self.0, 6, 0)
    }

    /// Bits 11..7.
    pub const fn rd(self) -> u32 {
        bits(self.0, 11, 7)
    }

    /// Bits 14..12.
    pub const fn funct3(self) -> u32 {
        bits(self.0, 14, 12)
    }

    /// Bits 19..15.
    pub const fn rs1(self) -> u32 {
        bits(self.0, 19, 15)
    }

    /// Bits 24..20. Also the shift amount of shift-immediate instructions.
    pub const fn rs2(self) -> u32 {
        bits(self.0, 24, 20)
    }

    /// Bits 31..25.
    pub const fn funct7(self) -> u32 {
        bits(self.0, 31, 25)
    }

    pub const fn imm_i(self) -> i32 {
        sign_extend(bits(self.0, 31, 20), 12)
    }

    pub const fn imm_s(self) -> i32 {
        sign_extend(bits(self.0, 31, 25) << 5 | bits(self.0, 11, 7), 12)
    }

    pub const fn imm_b(self) -> i32 {
        let v = bits(self.0, 31, 31) << 12
            | bits(self.0, 7, 7) << 11
            | bits(self.0, 30, 25) << 5
            | bits(self.0, 11, 8) << 1;
        sign_extend(v, 13)
    }

    /// Bits 31..12 in place, low 12 bits zero.
    pub const fn imm_u(self) -> u32 {
        self.0 & 0xffff_f000
    }

    pub const fn imm_j(self) -> i32 {
        let v = bits(self.0, 31, 31) << 20
            | bits(self.0, 19, 12) << 12
            | bits(self.0, 20, 20) << 11
            | bits(self.0, 30, 21) << 1;
        sign_extend(v, 21)
    }
}

impl From<u32> for RawInstruction {
    fn from(w: u32) -> Self {
        RawInstruction(w)
    }
}

impl From<RawInstruction> for u32 {
    fn from(w: RawInstruction) -> u32 {
        w.0
    }
}

impl fmt::Display for RawInstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:08X}", self.0)
    }
}

/// Operands grouped by format, independent of the mnemonic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Operands {
    R { rd: Reg, rs1: Reg, rs2: Reg },
    I { rd: Reg, rs1: Reg, imm: i32 },
    ShiftI { rd: Reg, rs1: Reg, shamt: u32 },
    S { rs1: Reg, rs2: Reg, imm: i32 },
    B { rs1: Reg, rs2: Reg, imm: i32 },
    U { rd: Reg, imm: u32 },
    J { rd: Reg, imm: i32 },
}

impl Operands {
    pub fn format(&self) -> Format {
        match self {
            Operands::R { .. } => Format::R,
            Operands::I { .. } => Format::I,
            Operands::ShiftI { .. } => Format::ShiftI,
            Operands::S { .. } => Format::S,
            Operands::B { .. } => Format::B,
            Operands::U { .. } => Format::U,
            Operands::J { .. } => Format::J,
        }
    }
}

macro_rules! instructions {
    (
        r: [$($r:ident),*],
        i: [$($i:ident),*],
        shift: [$($sh:ident),*],
        s: [$($s:ident),*],
        b: [$($b:ident),*],
        u: [$($u:ident),*],
        j: [$($j:ident),*] $(,)?
    ) => {
        /// A decoded instruction. Register fields are 5-bit indices and
        /// immediates are held fully sign-extended (U-type: already shifted
        /// into bits 31..12).
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
        pub enum Instruction {
            $( $r { rd: Reg, rs1: Reg, rs2: Reg }, )*
            $( $i { rd: Reg, rs1: Reg, imm: i32 }, )*
            $( $sh { rd: Reg, rs1: Reg, shamt: u32 }, )*
            $( $s { rs1: Reg, rs2: Reg, imm: i32 }, )*
            $( $b { rs1: Reg, rs2: Reg, imm: i32 }, )*
            $( $u { rd: Reg, imm: u32 }, )*
            $( $j { rd: Reg, imm: i32 }, )*
        }

        impl Instruction {
            pub fn mnemonic(&self) -> Mnemonic {
                match self {
                    $( Instruction::$r { .. } => Mnemonic::$r, )*
                    $( Instruction::$i { .. } => Mnemonic::$i, )*
                    $( Instruction::$sh { .. } => Mnemonic::$sh, )*
                    $( Instruction::$s { .. } => Mnemonic::$s, )*
                    $( Instruction::$b { .. } => Mnemonic::$b, )*
                    $( Instruction::$u { .. } => Mnemonic::$u, )*
                    $( Instruction::$j { .. } => Mnemonic::$j, )*
                }
            }

            pub fn operands(&self) -> Operands {
                match *self {
                    $( Instruction::$r { rd, rs1, rs2 } => Operands::R { rd, rs1, rs2 }, )*
                    $( Instruction::$i { rd, rs1, imm } => Operands::I { rd, rs1, imm }, )*
                    $( Instruction::$sh { rd, rs1, shamt } => Operands::ShiftI { rd, rs1, shamt }, )*
                    $( Instruction::$s { rs1, rs2, imm } => Operands::S { rs1, rs2, imm }, )*
                    $( Instruction::$b { rs1, rs2, imm } => Operands::B { rs1, rs2, imm }, )*
                    $( Instruction::$u { rd, imm } => Operands::U { rd, imm }, )*
                    $( Instruction::$j { rd, imm } => Operands::J { rd, imm }, )*
                }
            }

            /// Pairs a mnemonic with operands. `None` when the operand
            /// format does not match the mnemonic's format. Operand values
            /// are taken as given; callers normalize them.
            pub fn from_parts(mnemonic: Mnemonic, operands: Operands) -> Option<Instruction> {
                Some(match (mnemonic, operands) {
                    $( (Mnemonic::$r, Operands::R { rd, rs1, rs2 }) => Instruction::$r { rd, rs1, rs2 }, )*
                    $( (Mnemonic::$i, Operands::I { rd, rs1, imm }) => Instruction::$i { rd, rs1, imm }, )*
                    $( (Mnemonic::$sh, Operands::ShiftI { rd, rs1, shamt }) => Instruction::$sh { rd, rs1, shamt }, )*
                    $( (Mnemonic::$s, Operands::S { rs1, rs2, imm }) => Instruction::$s { rs1, rs2, imm }, )*
                    $( (Mnemonic::$b, Operands::B { rs1, rs2, imm }) => Instruction::$b { rs1, rs2, imm }, )*
                    $( (Mnemonic::$u, Operands::U { rd, imm }) => Instruction::$u { rd, imm }, )*
                    $( (Mnemonic::$j, Operands::J { rd, imm }) => Instruction::$j { rd, imm }, )*
                    _ => return None,
                })
            }
        }
    };
}

instructions! {
    r: [Add, Sub, Sll, Slt, Sltu, Xor, Srl, Sra, Or, And],
    i: [Addi, Slti, Sltiu, Xori, Ori, Andi, Lb, Lh, Lw, Lbu, Lhu, Jalr],
    shift: [Slli, Srli, Srai],
    s: [Sb, Sh, Sw],
    b: [Beq, Bne, Blt, Bge, Bltu, Bgeu],
    u: [Lui, Auipc],
    j: [Jal],
}

impl Instruction {
    /// Destination register, if the instruction writes one.
    pub fn rd(&self) -> Option<Reg> {
        match self.operands() {
            Operands::R { rd, .. }
            | Operands::I { rd, .. }
            | Operands::ShiftI { rd, .. }
            | Operands::U { rd, .. }
            | Operands::J { rd, .. } => Some(rd),
            Operands::S { .. } | Operands::B { .. } => None,
        }
    }
}

impl fmt::Display for Instruction {
    /// Conventional assembler syntax with numeric registers, e.g.
    /// `add x3, x1, x2`, `lw x5, -8(x2)`, `lui x7, 0x12345`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.mnemonic();
        match self.operands() {
            Operands::R { rd, rs1, rs2 } => write!(f, "{m} {rd}, {rs1}, {rs2}"),
            Operands::I { rd, rs1, imm } => match m {
                Mnemonic::Lb | Mnemonic::Lh | Mnemonic::Lw | Mnemonic::Lbu | Mnemonic::Lhu | Mnemonic::Jalr => {
                    write!(f, "{m} {rd}, {imm}({rs1})")
                }
                _ => write!(f, "{m} {rd}, {rs1}, {imm}"),
            },
            Operands::ShiftI { rd, rs1, shamt } => write!(f, "{m} {rd}, {rs1}, {shamt}"),
            Operands::S { rs1, rs2, imm } => write!(f, "{m} {rs2}, {imm}({rs1})"),
            Operands::B { rs1, rs2, imm } => write!(f, "{m} {rs1}, {rs2}, {imm}"),
            Operands::U { rd, imm } => write!(f, "{m} {rd}, {:#x}", imm >> 12),
            Operands::J { rd, imm } => write!(f, "{m} {rd}, {imm}"),
        }
    }
}

/// The word matches none of the modeled instructions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("illegal instruction {0}")]
pub struct IllegalInstruction(pub RawInstruction);

/// Identifies `w` by its opcode, then funct3, then funct7.
pub fn decode(w: RawInstruction) -> Result<Instruction, IllegalInstruction> {
    use Instruction::*;

    let rd = Reg::new(w.rd());
    let rs1 = Reg::new(w.rs1());
    let rs2 = Reg::new(w.rs2());
    let illegal = Err(IllegalInstruction(w));

    let insn = match w.opcode() {
        opcode::OP => match (w.funct3(), w.funct7()) {
            (0, 0x00) => Add { rd, rs1, rs2 },
            (0, 0x20) => Sub { rd, rs1, rs2 },
            (1, 0x00) => Sll { rd, rs1, rs2 },
            (2, 0x00) => Slt { rd, rs1, rs2 },
            (3, 0x00) => Sltu { rd, rs1, rs2 },
            (4, 0x00) => Xor { rd, rs1, rs2 },
            (5, 0x00) => Srl { rd, rs1, rs2 },
            (5, 0x20) => Sra { rd, rs1, rs2 },
            (6, 0x00) => Or { rd, rs1, rs2 },
            (7, 0x00) => And { rd, rs1, rs2 },
            _ => return illegal,
        },
        opcode::OP_IMM => {
            let imm = w.imm_i();
            let shamt = w.rs2();
            match (w.funct3(), w.funct7()) {
                (0, _) => Addi { rd, rs1, imm },
                (2, _) => Slti { rd, rs1, imm },
                (3, _) => Sltiu { rd, rs1, imm },
                (4, _) => Xori { rd, rs1, imm },
                (6, _) => Ori { rd, rs1, imm },
                (7, _) => Andi { rd, rs1, imm },
                (1, 0x00) => Slli { rd, rs1, shamt },
                (5, 0x00) => Srli { rd, rs1, shamt },
                (5, 0x20) => Srai { rd, rs1, shamt },
                _ => return illegal,
            }
        }
        opcode::LOAD => {
            let imm = w.imm_i();
            match w.funct3() {
                0 => Lb { rd, rs1, imm },
                1 => Lh { rd, rs1, imm },
                2 => Lw { rd, rs1, imm },
                4 => Lbu { rd, rs1, imm },
                5 => Lhu { rd, rs1, imm },
                _ => return illegal,
            }
        }
        opcode::STORE => {
            let imm = w.imm_s();
            match w.funct3() {
                0 => Sb { rs1, rs2, imm },
                1 => Sh { rs1, rs2, imm },
                2 => Sw { rs1, rs2, imm },
                _ => return illegal,
            }
        }
        opcode::BRANCH => {
            let imm = w.imm_b();
            match w.funct3() {
                0 => Beq { rs1, rs2, imm },
                1 => Bne { rs1, rs2, imm },
                4 => Blt { rs1, rs2, imm },
                5 => Bge { rs1, rs2, imm },
                6 => Bltu { rs1, rs2, imm },
                7 => Bgeu { rs1, rs2, imm },
                _ => return illegal,
            }
        }
        opcode::JALR if w.funct3() == 0 => Jalr { rd, rs1, imm: w.imm_i() },
        opcode::JAL => Jal { rd, imm: w.imm_j() },
        opcode::LUI => Lui { rd, imm: w.imm_u() },
        opcode::AUIPC => Auipc { rd, imm: w.imm_u() },
        _ => return illegal,
    };
    Ok(insn)
}
