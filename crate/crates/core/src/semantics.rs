//! Instruction semantic functions. Each takes already-decoded fields and
//! applies exactly one instruction's effect to the state. Arithmetic wraps
//! modulo 2^32; signed comparisons read operands as two's complement.

use crate::decode::Instruction;
use crate::isa::Reg;
use crate::state::MachineState;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AluOp {
    Add,
    Sub,
    Sll,
    Slt,
    Sltu,
    Xor,
    Srl,
    Sra,
    Or,
    And,
}

impl AluOp {
    /// Shifts use only the low 5 bits of `b`.
    pub fn apply(self, a: u32, b: u32) -> u32 {
        match self {
            AluOp::Add => a.wrapping_add(b),
            AluOp::Sub => a.wrapping_sub(b),
            AluOp::Sll => a << (b & 0x1f),
            AluOp::Slt => ((a as i32) < (b as i32)) as u32,
            AluOp::Sltu => (a < b) as u32,
            AluOp::Xor => a ^ b,
            AluOp::Srl => a >> (b & 0x1f),
            AluOp::Sra => ((a as i32) >> (b & 0x1f)) as u32,
            AluOp::Or => a | b,
            AluOp::And => a & b,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LoadOp {
    Byte,
    Half,
    Word,
    ByteUnsigned,
    HalfUnsigned,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StoreOp {
    Byte,
    Half,
    Word,
}

impl StoreOp {
    pub fn width(self) -> u32 {
        match self {
            StoreOp::Byte => 1,
            StoreOp::Half => 2,
            StoreOp::Word => 4,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BranchCond {
    Eq,
    Ne,
    Lt,
    Ge,
    Ltu,
    Geu,
}

impl BranchCond {
    pub fn holds(self, a: u32, b: u32) -> bool {
        match self {
            BranchCond::Eq => a == b,
            BranchCond::Ne => a != b,
            BranchCond::Lt => (a as i32) < (b as i32),
            BranchCond::Ge => (a as i32) >= (b as i32),
            BranchCond::Ltu => a < b,
            BranchCond::Geu => a >= b,
        }
    }
}

#[inline]
fn advance(s: &mut MachineState) {
    s.set_pc(s.pc().wrapping_add(4));
}

#[inline]
fn effective_address(s: &MachineState, rs1: Reg, imm: i32) -> u32 {
    s.reg(rs1).wrapping_add(imm as u32)
}

pub fn exec_op_r(op: AluOp, rd: Reg, rs1: Reg, rs2: Reg, s: &mut MachineState) {
    let v = op.apply(s.reg(rs1), s.reg(rs2));
    s.set_reg(rd, v);
    advance(s);
}

/// `operand` is the sign-extended immediate reinterpreted as unsigned, or
/// the shift amount.
pub fn exec_op_imm(op: AluOp, rd: Reg, rs1: Reg, operand: u32, s: &mut MachineState) {
    let v = op.apply(s.reg(rs1), operand);
    s.set_reg(rd, v);
    advance(s);
}

pub fn exec_load(op: LoadOp, rd: Reg, rs1: Reg, imm: i32, s: &mut MachineState) {
    let a = effective_address(s, rs1, imm);
    let v = match op {
        LoadOp::Byte => s.read_u8(a) as i8 as i32 as u32,
        LoadOp::Half => s.read_u16(a) as i16 as i32 as u32,
        LoadOp::Word => s.read_u32(a),
        LoadOp::ByteUnsigned => s.read_u8(a) as u32,
        LoadOp::HalfUnsigned => s.read_u16(a) as u32,
    };
    s.set_reg(rd, v);
    advance(s);
}

pub fn exec_store(op: StoreOp, rs1: Reg, rs2: Reg, imm: i32, s: &mut MachineState) {
    let a = effective_address(s, rs1, imm);
    let v = s.reg(rs2);
    match op {
        StoreOp::Byte => s.write_u8(a, v as u8),
        StoreOp::Half => s.write_u16(a, v as u16),
        StoreOp::Word => s.write_u32(a, v),
    }
    advance(s);
}

pub fn exec_branch(cond: BranchCond, rs1: Reg, rs2: Reg, imm: i32, s: &mut MachineState) {
    if cond.holds(s.reg(rs1), s.reg(rs2)) {
        s.set_pc(s.pc().wrapping_add(imm as u32));
    } else {
        advance(s);
    }
}

pub fn exec_jal(rd: Reg, imm: i32, s: &mut MachineState) {
    let pc = s.pc();
    s.set_reg(rd, pc.wrapping_add(4));
    s.set_pc(pc.wrapping_add(imm as u32));
}

/// Target is read from `rs1` before `rd` receives the link, so `rd == rs1`
/// jumps through the old register value.
pub fn exec_jalr(rd: Reg, rs1: Reg, imm: i32, s: &mut MachineState) {
    let link = s.pc().wrapping_add(4);
    let target = effective_address(s, rs1, imm) & !1;
    s.set_reg(rd, link);
    s.set_pc(target);
}

pub fn exec_lui(rd: Reg, imm: u32, s: &mut MachineState) {
    s.set_reg(rd, imm);
    advance(s);
}

pub fn exec_auipc(rd: Reg, imm: u32, s: &mut MachineState) {
    s.set_reg(rd, s.pc().wrapping_add(imm));
    advance(s);
}

/// Dispatches a decoded instruction to its semantic function.
pub fn execute(insn: &Instruction, s: &mut MachineState) {
    use Instruction::*;
    match *insn {
        Add { rd, rs1, rs2 } => exec_op_r(AluOp::Add, rd, rs1, rs2, s),
        Sub { rd, rs1, rs2 } => exec_op_r(AluOp::Sub, rd, rs1, rs2, s),
        Sll { rd, rs1, rs2 } => exec_op_r(AluOp::Sll, rd, rs1, rs2, s),
        Slt { rd, rs1, rs2 } => exec_op_r(AluOp::Slt, rd, rs1, rs2, s),
        Sltu { rd, rs1, rs2 } => exec_op_r(AluOp::Sltu, rd, rs1, rs2, s),
        Xor { rd, rs1, rs2 } => exec_op_r(AluOp::Xor, rd, rs1, rs2, s),
        Srl { rd, rs1, rs2 } => exec_op_r(AluOp::Srl, rd, rs1, rs2, s),
        Sra { rd, rs1, rs2 } => exec_op_r(AluOp::Sra, rd, rs1, rs2, s),
        Or { rd, rs1, rs2 } => exec_op_r(AluOp::Or, rd, rs1, rs2, s),
        And { rd, rs1, rs2 } => exec_op_r(AluOp::And, rd, rs1, rs2, s),

        Addi { rd, rs1, imm } => exec_op_imm(AluOp::Add, rd, rs1, imm as u32, s),
        Slti { rd, rs1, imm } => exec_op_imm(AluOp::Slt, rd, rs1, imm as u32, s),
        Sltiu { rd, rs1, imm } => exec_op_imm(AluOp::Sltu, rd, rs1, imm as u32, s),
        Xori { rd, rs1, imm } => exec_op_imm(AluOp::Xor, rd, rs1, imm as u32, s),
        Ori { rd, rs1, imm } => exec_op_imm(AluOp::Or, rd, rs1, imm as u32, s),
        Andi { rd, rs1, imm } => exec_op_imm(AluOp::And, rd, rs1, imm as u32, s),
        Slli { rd, rs1, shamt } => exec_op_imm(AluOp::Sll, rd, rs1, shamt, s),
        Srli { rd, rs1, shamt } => exec_op_imm(AluOp::Srl, rd, rs1, shamt, s),
        Srai { rd, rs1, shamt } => exec_op_imm(AluOp::Sra, rd, rs1, shamt, s),

        Lb { rd, rs1, imm } => exec_load(LoadOp::Byte, rd, rs1, imm, s),
        Lh { rd, rs1, imm } => exec_load(LoadOp::Half, rd, rs1, imm, s),
        Lw { rd, rs1, imm } => exec_load(LoadOp::Word, rd, rs1, imm, s),
        Lbu { rd, rs1, imm } => exec_load(LoadOp::ByteUnsigned, rd, rs1, imm, s),
        Lhu { rd, rs1, imm } => exec_load(LoadOp::HalfUnsigned, rd, rs1, imm, s),

        Sb { rs1, rs2, imm } => exec_store(StoreOp::Byte, rs1, rs2, imm, s),
        Sh { rs1, rs2, imm } => exec_store(StoreOp::Half, rs1, rs2, imm, s),
        Sw { rs1, rs2, imm } => exec_store(StoreOp::Word, rs1, rs2, imm, s),

        Beq { rs1, rs2, imm } => exec_branch(BranchCond::Eq, rs1, rs2, imm, s),
        Bne { rs1, rs2, imm } => exec_branch(BranchCond::Ne, rs1, rs2, imm, s),
        Blt { rs1, rs2, imm } => exec_branch(BranchCond::Lt, rs1, rs2, imm, s),
        Bge { rs1, rs2, imm } => exec_branch(BranchCond::Ge, rs1, rs2, imm, s),
        Bltu { rs1, rs2, imm } => exec_branch(BranchCond::Ltu, rs1, rs2, imm, s),
        Bgeu { rs1, rs2, imm } => exec_branch(BranchCond::Geu, rs1, rs2, imm, s),

        Jal { rd, imm } => exec_jal(rd, imm, s),
        Jalr { rd, rs1, imm } => exec_jalr(rd, rs1, imm, s),
        Lui { rd, imm } => exec_lui(rd, imm, s),
        Auipc { rd, imm } => exec_auipc(rd, imm, s),
    }
}

/// For stores: the address and byte count the instruction writes in `s`.
pub fn store_footprint(insn: &Instruction, s: &MachineState) -> Option<(u32, u32)> {
    let (rs1, imm, width) = match *insn {
        Instruction::Sb { rs1, imm, .. } => (rs1, imm, StoreOp::Byte.width()),
        Instruction::Sh { rs1, imm, .. } => (rs1, imm, StoreOp::Half.width()),
        Instruction::Sw { rs1, imm, .. } => (rs1, imm, StoreOp::Word.width()),
        _ => return None,
    };
    Some((effective_address(s, rs1, imm), width))
}
