//! An executable model of the RISC-V RV32I base integer instruction set,
//! written as an operational semantics.
//!
//! The model is layered:
//!
//! - [`state`] and [`memory`]: the machine state (32 registers with `x0`
//!   hardwired to zero, pc, sparse 2^32-byte little-endian memory, model
//!   status) and its access/update operations.
//! - [`decode`]: pure bit-field extractors and a total decoder from words to
//!   [`Instruction`]s.
//! - [`encode`]: per-format encoders and one `asm_*` function per
//!   mnemonic, inverse to the decoder.
//! - [`semantics`]: one state transformer per instruction, taking decoded
//!   fields.
//! - [`step`]: fetch, decode, dispatch.
//! - [`loader`] and [`trace`]: program images, dumps and per-cycle traces.
//!
//! The 37 non-environment RV32I instructions are modeled. FENCE, ECALL,
//! EBREAK and every other unmatched word decode as illegal, which freezes
//! the machine through its model status.
//!
//! ```
//! use rv32_core::{encode::asm_add, isa::Reg, step::step, MachineState};
//!
//! let mut s = MachineState::new()
//!     .with_reg(Reg::new(1), 40)
//!     .with_reg(Reg::new(2), 2)
//!     .with_u32(0, asm_add(1, 2, 3).word());
//! step(&mut s);
//! assert_eq!(s.reg(Reg::new(3)), 42);
//! assert_eq!(s.pc(), 4);
//! ```

pub mod decode;
pub mod encode;
pub mod isa;
pub mod loader;
pub mod memory;
pub mod semantics;
pub mod state;
pub mod step;
pub mod trace;

pub use decode::{decode, IllegalInstruction, Instruction, Operands, RawInstruction};
pub use isa::{Format, InstructionSpec, Mnemonic, Reg};
pub use memory::Memory;
pub use state::{MachineState, ModelStatus};
pub use step::{run, step, RunOutcome, StopReason};
