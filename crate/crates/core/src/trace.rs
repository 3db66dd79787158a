//! Per-cycle execution records and their replay.

use serde::{Deserialize, Serialize};

use crate::decode::{decode, RawInstruction};
use crate::semantics::store_footprint;
use crate::state::MachineState;
use crate::step::step;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum Location {
    Reg { index: u8 },
    Mem { addr: u32 },
    Pc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Write {
    #[serde(flatten)]
    pub location: Location,
    pub old: u32,
    pub new: u32,
}

/// One cycle. `writes` lists every register, memory byte and pc whose value
/// changed during the cycle: registers in index order, then memory bytes
/// from the store address upward, then pc.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub cycle: u64,
    pub pc: u32,
    pub raw: u32,
    pub mnemonic: String,
    pub writes: Vec<Write>,
}

/// Steps once and records what changed. `None` when the state is not
/// running.
pub fn step_traced(s: &mut MachineState, cycle: u64) -> Option<TraceRecord> {
    if !s.status().is_running() {
        return None;
    }
    let pc = s.pc();
    let raw = RawInstruction(s.read_u32(pc));
    let decoded = decode(raw).ok();
    let mnemonic = decoded.map_or_else(|| "illegal".to_string(), |i| i.mnemonic().to_string());
    let footprint = decoded.as_ref().and_then(|i| store_footprint(i, s));
    let old_regs = *s.regs();
    let old_bytes = footprint.map(|(a, n)| s.memory().read_bytes(a, n as usize));

    step(s);

    let mut writes = Vec::new();
    for (i, (&old, &new)) in old_regs.iter().zip(s.regs()).enumerate() {
        if old != new {
            writes.push(Write { location: Location::Reg { index: i as u8 }, old, new });
        }
    }
    if let (Some((addr, _)), Some(old_bytes)) = (footprint, old_bytes) {
        let bytes =
            old_bytes.iter().enumerate().map(|(k, &old)| (addr.wrapping_add(k as u32), old)).filter_map(|(a, old)| {
                let new = s.read_u8(a);
                (old != new).then_some(Write { location: Location::Mem { addr: a }, old: old as u32, new: new as u32 })
            });
        writes.extend(bytes);
    }
    if s.pc() != pc {
        writes.push(Write { location: Location::Pc, old: pc, new: s.pc() });
    }
    Some(TraceRecord { cycle, pc, raw: raw.0, mnemonic, writes })
}

/// Applies each record's writes in order.
pub fn replay<'a>(s: &mut MachineState, records: impl IntoIterator<Item = &'a TraceRecord>) {
    for rec in records {
        for w in &rec.writes {
            match w.location {
                Location::Reg { index } => s.set_reg(crate::isa::Reg::new(index as u32), w.new),
                Location::Mem { addr } => s.write_u8(addr, w.new as u8),
                Location::Pc => s.set_pc(w.new),
            }
        }
    }
}
