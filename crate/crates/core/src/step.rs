//! Fetch-decode-execute driver.

use crate::decode::{decode, RawInstruction};
use crate::semantics::execute;
use crate::state::{MachineState, ModelStatus};

/// Executes one cycle. A state whose status is not `Running` is left
/// untouched. A word that does not decode freezes the state with
/// [`ModelStatus::IllegalInstruction`] and leaves pc in place.
pub fn step(s: &mut MachineState) {
    if !s.status().is_running() {
        return;
    }
    let pc = s.pc();
    let word = RawInstruction(s.read_u32(pc));
    match decode(word) {
        Ok(insn) => execute(&insn, s),
        Err(_) => s.set_status(ModelStatus::IllegalInstruction { word: word.0, pc }),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    BudgetExhausted,
    NotRunning,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutcome {
    pub final_state: MachineState,
    pub steps_executed: u64,
    pub stop_reason: StopReason,
}

/// Steps until `budget` cycles have executed or the status leaves
/// `Running`. A step that only records an illegal instruction counts.
pub fn run(mut s: MachineState, budget: u64) -> RunOutcome {
    let mut steps = 0;
    while steps < budget && s.status().is_running() {
        step(&mut s);
        steps += 1;
    }
    let stop_reason = if s.status().is_running() { StopReason::BudgetExhausted } else { StopReason::NotRunning };
    RunOutcome { final_state: s, steps_executed: steps, stop_reason }
}
