//! Static description of the modeled RV32I instructions: register indices,
//! instruction formats and the per-mnemonic encoding rows.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// A 5-bit register index. Construction through [`Reg::new`] keeps only the
/// low five bits, so every `Reg` names one of `x0..=x31`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Reg(u8);

impl Reg {
    pub const ZERO: Reg = Reg(0);

    /// Masks `index` to its low five bits.
    pub const fn new(index: u32) -> Reg {
        Reg((index & 0x1f) as u8)
    }

    /// Strict constructor: `None` unless `index < 32`.
    pub const fn checked(index: u32) -> Option<Reg> {
        if index < 32 {
            Some(Reg(index as u8))
        } else {
            None
        }
    }

    pub const fn index(self) -> usize {
        self.0 as usize
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn all() -> impl Iterator<Item = Reg> {
        (0..32).map(Reg::new)
    }
}

impl fmt::Display for Reg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

impl From<Reg> for u32 {
    fn from(r: Reg) -> u32 {
        r.0 as u32
    }
}

/// Instruction formats. `ShiftI` is the I-type variant whose immediate field
/// is split into funct7 and a 5-bit shift amount.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Format {
    R,
    I,
    ShiftI,
    S,
    B,
    U,
    J,
}

pub mod opcode {
    pub const OP: u32 = 0b011_0011;
    pub const OP_IMM: u32 = 0b001_0011;
    pub const LOAD: u32 = 0b000_0011;
    pub const STORE: u32 = 0b010_0011;
    pub const BRANCH: u32 = 0b110_0011;
    pub const JALR: u32 = 0b110_0111;
    pub const JAL: u32 = 0b110_1111;
    pub const LUI: u32 = 0b011_0111;
    pub const AUIPC: u32 = 0b001_0111;
}

/// One encoding row: the fixed fields that select a mnemonic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InstructionSpec {
    pub mnemonic: Mnemonic,
    pub format: Format,
    pub opcode: u32,
    /// Absent for U- and J-type.
    pub funct3: Option<u32>,
    /// Present for R-type and shift-immediate only.
    pub funct7: Option<u32>,
}

macro_rules! mnemonics {
    ($( $variant:ident $name:literal $fmt:ident $op:ident $f3:expr, $f7:expr; )*) => {
        /// The 37 modeled RV32I mnemonics (FENCE, ECALL and EBREAK are not modeled).
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum Mnemonic {
            $( $variant, )*
        }

        impl Mnemonic {
            pub const ALL: [Mnemonic; 37] = [ $( Mnemonic::$variant, )* ];

            /// Lower-case assembler name.
            pub const fn name(self) -> &'static str {
                match self {
                    $( Mnemonic::$variant => $name, )*
                }
            }
        }

        /// The encoding table, in [`Mnemonic::ALL`] order.
        pub const SPECS: [InstructionSpec; 37] = [
            $( InstructionSpec {
                mnemonic: Mnemonic::$variant,
                format: Format::$fmt,
                opcode: opcode::$op,
                funct3: $f3,
                funct7: $f7,
            }, )*
        ];
    };
}

mnemonics! {
    Add   "add"   R      OP      Some(0), Some(0x00);
    Sub   "sub"   R      OP      Some(0), Some(0x20);
    Sll   "sll"   R      OP      Some(1), Some(0x00);
    Slt   "slt"   R      OP      Some(2), Some(0x00);
    Sltu  "sltu"  R      OP      Some(3), Some(0x00);
    Xor   "xor"   R      OP      Some(4), Some(0x00);
    Srl   "srl"   R      OP      Some(5), Some(0x00);
    Sra   "sra"   R      OP      Some(5), Some(0x20);
    Or    "or"    R      OP      Some(6), Some(0x00);
    And   "and"   R      OP      Some(7), Some(0x00);
    Addi  "addi"  I      OP_IMM  Some(0), None;
    Slti  "slti"  I      OP_IMM  Some(2), None;
    Sltiu "sltiu" I      OP_IMM  Some(3), None;
    Xori  "xori"  I      OP_IMM  Some(4), None;
    Ori   "ori"   I      OP_IMM  Some(6), None;
    Andi  "andi"  I      OP_IMM  Some(7), None;
    Slli  "slli"  ShiftI OP_IMM  Some(1), Some(0x00);
    Srli  "srli"  ShiftI OP_IMM  Some(5), Some(0x00);
    Srai  "srai"  ShiftI OP_IMM  Some(5), Some(0x20);
    Lb    "lb"    I      LOAD    Some(0), None;
    Lh    "lh"    I      LOAD    Some(1), None;
    Lw    "lw"    I      LOAD    Some(2), None;
    Lbu   "lbu"   I      LOAD    Some(4), None;
    Lhu   "lhu"   I      LOAD    Some(5), None;
    Sb    "sb"    S      STORE   Some(0), None;
    Sh    "sh"    S      STORE   Some(1), None;
    Sw    "sw"    S      STORE   Some(2), None;
    Beq   "beq"   B      BRANCH  Some(0), None;
    Bne   "bne"   B      BRANCH  Some(1), None;
    Blt   "blt"   B      BRANCH  Some(4), None;
    Bge   "bge"   B      BRANCH  Some(5), None;
    Bltu  "bltu"  B      BRANCH  Some(6), None;
    Bgeu  "bgeu"  B      BRANCH  Some(7), None;
    Jalr  "jalr"  I      JALR    Some(0), None;
    Jal   "jal"   J      JAL     None,    None;
    Lui   "lui"   U      LUI     None,    None;
    Auipc "auipc" U      AUIPC   None,    None;
}

impl Mnemonic {
    pub fn spec(self) -> &'static InstructionSpec {
        // SPECS is declared in ALL order, so the discriminant is the row index.
        &SPECS[self as usize]
    }

    pub fn format(self) -> Format {
        self.spec().format
    }
}

impl fmt::Display for Mnemonic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("unknown mnemonic `{0}`")]
pub struct UnknownMnemonic(pub String);

impl FromStr for Mnemonic {
    type Err = UnknownMnemonic;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase();
        Mnemonic::ALL.iter().copied().find(|m| m.name() == lower).ok_or_else(|| UnknownMnemonic(s.to_string()))
    }
}
