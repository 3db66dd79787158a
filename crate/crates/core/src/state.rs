//! The machine state threaded through every semantic function: register
//! file, program counter, memory and the non-architectural model status.

use serde::{Deserialize, Serialize};

use crate::isa::Reg;
use crate::memory::Memory;

/// Model status. Not part of the architecture; records why the model
/// stopped executing. Any value other than `Running` freezes [`crate::step`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelStatus {
    #[default]
    Running,
    /// The word fetched at `pc` matched no modeled instruction.
    IllegalInstruction {
        word: u32,
        pc: u32,
    },
    Halted(u32),
}

impl ModelStatus {
    pub fn is_running(self) -> bool {
        self == ModelStatus::Running
    }
}

/// Complete machine state. Equality is structural over registers, pc,
/// canonical memory contents and status.
///
/// `x0` always reads as zero: writes to it are discarded, so the register
/// file never holds a non-zero value at index 0.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MachineState {
    regs: [u32; 32],
    pc: u32,
    mem: Memory,
    status: ModelStatus,
}

impl MachineState {
    /// All-zero reset state with status `Running`.
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn reg(&self, r: Reg) -> u32 {
        self.regs[r.index()]
    }

    #[inline]
    pub fn set_reg(&mut self, r: Reg, value: u32) {
        if !r.is_zero() {
            self.regs[r.index()] = value;
        }
    }

    pub fn regs(&self) -> &[u32; 32] {
        &self.regs
    }

    #[inline]
    pub fn pc(&self) -> u32 {
        self.pc
    }

    #[inline]
    pub fn set_pc(&mut self, pc: u32) {
        self.pc = pc;
    }

    pub fn status(&self) -> ModelStatus {
        self.status
    }

    pub fn set_status(&mut self, status: ModelStatus) {
        self.status = status;
    }

    pub fn memory(&self) -> &Memory {
        &self.mem
    }

    pub fn memory_mut(&mut self) -> &mut Memory {
        &mut self.mem
    }

    pub fn read_u8(&self, addr: u32) -> u8 {
        self.mem.read_u8(addr)
    }

    pub fn write_u8(&mut self, addr: u32, value: u8) {
        self.mem.write_u8(addr, value);
    }

    pub fn read_u16(&self, addr: u32) -> u16 {
        self.mem.read_u16(addr)
    }

    pub fn write_u16(&mut self, addr: u32, value: u16) {
        self.mem.write_u16(addr, value);
    }

    pub fn read_u32(&self, addr: u32) -> u32 {
        self.mem.read_u32(addr)
    }

    pub fn write_u32(&mut self, addr: u32, value: u32) {
        self.mem.write_u32(addr, value);
    }

    // Builder-style updates, convenient for stating state laws as equations.

    pub fn with_reg(mut self, r: Reg, value: u32) -> Self {
        self.set_reg(r, value);
        self
    }

    pub fn with_pc(mut self, pc: u32) -> Self {
        self.set_pc(pc);
        self
    }

    pub fn with_status(mut self, status: ModelStatus) -> Self {
        self.set_status(status);
        self
    }

    pub fn with_u8(mut self, addr: u32, value: u8) -> Self {
        self.write_u8(addr, value);
        self
    }

    pub fn with_u32(mut self, addr: u32, value: u32) -> Self {
        self.write_u32(addr, value);
        self
    }

    /// `x0` is zero and the memory representation is consistent. Register
    /// and pc widths are guaranteed by `u32`.
    pub fn is_well_formed(&self) -> bool {
        self.regs[0] == 0 && self.mem.is_well_formed()
    }
}
