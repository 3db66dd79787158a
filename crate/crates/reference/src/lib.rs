//! A small RV32I interpreter that works directly on raw instruction words.
//!
//! This crate exists only as a differential oracle for the model in
//! `rv32-core`: it shares no code with it, decodes with its own bit
//! arithmetic and keeps memory in a flat hash map. It is itself checked
//! against vectors frozen from an external emulator (see [`vectors`]).

use std::collections::HashMap;
use std::path::PathBuf;

pub mod vectors;

/// Directory holding the frozen oracle data and fixture images.
pub fn testdata_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../testdata")
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RefMachine {
    pub x: [u32; 32],
    pub pc: u32,
    pub mem: HashMap<u32, u8>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Executed,
    Illegal,
}

impl RefMachine {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn byte(&self, a: u32) -> u8 {
        self.mem.get(&a).copied().unwrap_or(0)
    }

    pub fn load(&self, a: u32, n: u32) -> u32 {
        let mut v = 0u32;
        for k in (0..n).rev() {
            v = (v << 8) | self.byte(a.wrapping_add(k)) as u32;
        }
        v
    }

    pub fn store(&mut self, a: u32, n: u32, v: u32) {
        for k in 0..n {
            self.mem.insert(a.wrapping_add(k), (v >> (8 * k)) as u8);
        }
    }

    fn set(&mut self, rd: u32, v: u32) {
        if rd != 0 {
            self.x[rd as usize] = v;
        }
    }

    /// Fetches at pc and executes.
    pub fn step(&mut self) -> Outcome {
        let insn = self.load(self.pc, 4);
        self.exec(insn)
    }

    /// Executes `insn` as if fetched at the current pc. On `Illegal` nothing
    /// changes.
    pub fn exec(&mut self, insn: u32) -> Outcome {
        let op = insn & 0x7f;
        let rd = (insn >> 7) & 0x1f;
        let f3 = (insn >> 12) & 7;
        let rs1 = (insn >> 15) & 0x1f;
        let rs2 = (insn >> 20) & 0x1f;
        let f7 = insn >> 25;
        let a = self.x[rs1 as usize];
        let b = self.x[rs2 as usize];

        let imm_i = ((insn as i32) >> 20) as u32;
        let imm_s = (((insn as i32) >> 20) as u32 & !0x1f) | ((insn >> 7) & 0x1f);
        let imm_b = (((insn & 0x8000_0000) as i32 >> 19) as u32)
            | ((insn & 0x80) << 4)
            | ((insn >> 20) & 0x7e0)
            | ((insn >> 7) & 0x1e);
        let imm_j = (((insn & 0x8000_0000) as i32 >> 11) as u32)
            | (insn & 0xf_f000)
            | ((insn >> 9) & 0x800)
            | ((insn >> 20) & 0x7fe);
        let imm_u = insn & 0xffff_f000;

        let next = self.pc.wrapping_add(4);
        let mut new_pc = next;

        match op {
            0x33 => {
                let v = match (f7, f3) {
                    (0x00, 0) => a.wrapping_add(b),
                    (0x20, 0) => a.wrapping_sub(b),
                    (0x00, 1) => a.wrapping_shl(b),
                    (0x00, 2) => ((a as i32) < (b as i32)) as u32,
                    (0x00, 3) => (a < b) as u32,
                    (0x00, 4) => a ^ b,
                    (0x00, 5) => a.wrapping_shr(b),
                    (0x20, 5) => (a as i32).wrapping_shr(b) as u32,
                    (0x00, 6) => a | b,
                    (0x00, 7) => a & b,
                    _ => return Outcome::Illegal,
                };
                self.set(rd, v);
            }
            0x13 => {
                let sh = rs2;
                let v = match f3 {
                    0 => a.wrapping_add(imm_i),
                    2 => ((a as i32) < (imm_i as i32)) as u32,
                    3 => (a < imm_i) as u32,
                    4 => a ^ imm_i,
                    6 => a | imm_i,
                    7 => a & imm_i,
                    1 if f7 == 0 => a << sh,
                    5 if f7 == 0 => a >> sh,
                    5 if f7 == 0x20 => ((a as i32) >> sh) as u32,
                    _ => return Outcome::Illegal,
                };
                self.set(rd, v);
            }
            0x03 => {
                let addr = a.wrapping_add(imm_i);
                let v = match f3 {
                    0 => self.load(addr, 1) as u8 as i8 as u32,
                    1 => self.load(addr, 2) as u16 as i16 as u32,
                    2 => self.load(addr, 4),
                    4 => self.load(addr, 1),
                    5 => self.load(addr, 2),
                    _ => return Outcome::Illegal,
                };
                self.set(rd, v);
            }
            0x23 => {
                let addr = a.wrapping_add(imm_s);
                match f3 {
                    0 => self.store(addr, 1, b),
                    1 => self.store(addr, 2, b),
                    2 => self.store(addr, 4, b),
                    _ => return Outcome::Illegal,
                }
            }
            0x63 => {
                let taken = match f3 {
                    0 => a == b,
                    1 => a != b,
                    4 => (a as i32) < (b as i32),
                    5 => (a as i32) >= (b as i32),
                    6 => a < b,
                    7 => a >= b,
                    _ => return Outcome::Illegal,
                };
                if taken {
                    new_pc = self.pc.wrapping_add(imm_b);
                }
            }
            0x67 if f3 == 0 => {
                new_pc = a.wrapping_add(imm_i) & !1;
                self.set(rd, next);
            }
            0x6f => {
                new_pc = self.pc.wrapping_add(imm_j);
                self.set(rd, next);
            }
            0x37 => self.set(rd, imm_u),
            0x17 => self.set(rd, self.pc.wrapping_add(imm_u)),
            _ => return Outcome::Illegal,
        }
        self.pc = new_pc;
        Outcome::Executed
    }
}

/// Lower-case mnemonic of `insn`, or `None` when it is not one of the 37
/// modeled instructions.
pub fn mnemonic_of(insn: u32) -> Option<&'static str> {
    let op = insn & 0x7f;
    let f3 = (insn >> 12) & 7;
    let f7 = insn >> 25;
    Some(match op {
        0x33 => match (f7, f3) {
            (0x00, 0) => "add",
            (0x20, 0) => "sub",
            (0x00, 1) => "sll",
            (0x00, 2) => "slt",
            (0x00, 3) => "sltu",
            (0x00, 4) => "xor",
            (0x00, 5) => "srl",
            (0x20, 5) => "sra",
            (0x00, 6) => "or",
            (0x00, 7) => "and",
            _ => return None,
        },
        0x13 => match f3 {
            0 => "addi",
            2 => "slti",
            3 => "sltiu",
            4 => "xori",
            6 => "ori",
            7 => "andi",
            1 if f7 == 0 => "slli",
            5 if f7 == 0 => "srli",
            5 if f7 == 0x20 => "srai",
            _ => return None,
        },
        0x03 => ["lb", "lh", "lw", "", "lbu", "lhu", "", ""][f3 as usize],
        0x23 => ["sb", "sh", "sw", "", "", "", "", ""][f3 as usize],
        0x63 => ["beq", "bne", "", "", "blt", "bge", "bltu", "bgeu"][f3 as usize],
        0x67 if f3 == 0 => "jalr",
        0x6f => "jal",
        0x37 => "lui",
        0x17 => "auipc",
        _ => return None,
    })
    .filter(|m| !m.is_empty())
}
