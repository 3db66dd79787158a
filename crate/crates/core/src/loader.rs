//! Program images: a line-oriented hex text format and flat binaries.
//!
//! Text format, one directive per line; `#` starts a comment:
//!
//! ```text
//! entry 00000000          # initial pc
//! reg x10 0000002A        # initial register value (x1..x31)
//! @00001000 13 05 00 00   # start a segment at 0x1000 with these bytes
//! 93 05 10 00             # bare byte lines extend the current segment
//! ```
//!
//! Numbers are hexadecimal with an optional `0x` prefix.

use std::fmt::Write as _;
use std::path::Path;

use crate::isa::Reg;
use crate::memory::Memory;
use crate::state::MachineState;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Segment {
    pub base: u32,
    pub bytes: Vec<u8>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProgramImage {
    pub segments: Vec<Segment>,
    pub entry: u32,
    /// Raw `(index, value)` pairs; indices are validated at load time.
    pub regs: Vec<(u32, u32)>,
}

#[derive(Debug, thiserror::Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: address `{text}` does not fit in 32 bits")]
    AddressOutOfRange { line: usize, text: String },
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LoadError {
    #[error("segments at {first:#010x} and {second:#010x} overlap")]
    OverlappingSegments { first: u32, second: u32 },
    #[error("register index {0} out of range 1..=31")]
    RegisterIndexOutOfRange(u32),
    #[error("x0 cannot be assigned")]
    InitWritesX0,
}

/// Parses a hex number of at most 32 bits; `Ok(None)` when it is valid hex
/// but too wide.
fn parse_hex_u32(text: &str) -> Result<Option<u32>, String> {
    let digits = text.strip_prefix("0x").or_else(|| text.strip_prefix("0X")).unwrap_or(text);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_hexdigit()) {
        return Err(format!("malformed hex number `{text}`"));
    }
    let significant = digits.trim_start_matches('0');
    if significant.len() > 8 {
        return Ok(None);
    }
    if significant.is_empty() {
        return Ok(Some(0));
    }
    Ok(Some(u32::from_str_radix(significant, 16).expect("validated hex")))
}

impl ProgramImage {
    /// A flat binary placed at `base`.
    pub fn from_binary(bytes: Vec<u8>, base: u32, entry: u32) -> Self {
        ProgramImage { segments: vec![Segment { base, bytes }], entry, regs: Vec::new() }
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut image = ProgramImage::default();
        let mut current: Option<Segment> = None;

        for (idx, raw_line) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw_line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let syntax = |message: String| ParseError::Syntax { line, message };
            let address = |tok: &str| match parse_hex_u32(tok) {
                Ok(Some(v)) => Ok(v),
                Ok(None) => Err(ParseError::AddressOutOfRange { line, text: tok.to_string() }),
                Err(m) => Err(ParseError::Syntax { line, message: m }),
            };
            let mut tokens = content.split_whitespace();
            let head = tokens.next().unwrap_or_default();

            if let Some(addr) = head.strip_prefix('@') {
                let base = address(addr)?;
                image.segments.extend(current.take());
                current = Some(Segment { base, bytes: Vec::new() });
            } else if head == "entry" {
                let tok = tokens.next().ok_or_else(|| syntax("`entry` needs an address".into()))?;
                image.entry = address(tok)?;
                if let Some(extra) = tokens.next() {
                    return Err(syntax(format!("unexpected `{extra}` after entry address")));
                }
                continue;
            } else if head == "reg" {
                let (Some(name), Some(value), None) = (tokens.next(), tokens.next(), tokens.next()) else {
                    return Err(syntax("expected `reg xN VALUE`".into()));
                };
                let index = name
                    .strip_prefix('x')
                    .unwrap_or(name)
                    .parse::<u32>()
                    .map_err(|_| syntax(format!("malformed register `{name}`")))?;
                let value = match parse_hex_u32(value).map_err(syntax)? {
                    Some(v) => v,
                    None => return Err(syntax(format!("register value `{value}` does not fit in 32 bits"))),
                };
                image.regs.push((index, value));
                continue;
            } else {
                let seg = current.as_mut().ok_or_else(|| syntax("byte data before any `@address`".into()))?;
                seg.bytes.push(parse_byte(head).map_err(syntax)?);
            }

            let seg = current.as_mut().expect("segment started above");
            for tok in tokens {
                seg.bytes.push(parse_byte(tok).map_err(|m| ParseError::Syntax { line, message: m })?);
            }
        }
        image.segments.extend(current);
        Ok(image)
    }

    pub fn parse_file(path: impl AsRef<Path>) -> Result<Self, ParseError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Every non-zero memory byte, non-zero register and the pc of `s`,
    /// as an image that [`load_image`] turns back into `s` (status aside).
    pub fn snapshot(s: &MachineState) -> Self {
        let segments = s
            .memory()
            .nonzero_pages()
            .map(|(base, page)| {
                let first = page.iter().position(|&b| b != 0).unwrap();
                let last = page.iter().rposition(|&b| b != 0).unwrap();
                Segment { base: base + first as u32, bytes: page[first..=last].to_vec() }
            })
            .collect();
        let regs = Reg::all().filter(|&r| s.reg(r) != 0).map(|r| (u32::from(r), s.reg(r))).collect();
        ProgramImage { segments, entry: s.pc(), regs }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("entry {:08X}\n", self.entry);
        for &(i, v) in &self.regs {
            writeln!(out, "reg x{i} {v:08X}").unwrap();
        }
        for seg in &self.segments {
            out.push_str(&format_bytes(seg.base, &seg.bytes));
        }
        out
    }

    fn check_overlaps(&self) -> Result<(), LoadError> {
        // Half-open intervals in a 33-bit space; wrapping segments split in two.
        let mut spans: Vec<(u64, u64, u32)> = Vec::new();
        for seg in self.segments.iter().filter(|s| !s.bytes.is_empty()) {
            let start = seg.base as u64;
            let end = start + seg.bytes.len() as u64;
            let top = 1u64 << 32;
            if end > top {
                spans.push((start, top, seg.base));
                spans.push((0, (end - top).min(top), seg.base));
            } else {
                spans.push((start, end, seg.base));
            }
        }
        spans.sort_unstable();
        for pair in spans.windows(2) {
            if pair[1].0 < pair[0].1 {
                return Err(LoadError::OverlappingSegments { first: pair[0].2, second: pair[1].2 });
            }
        }
        Ok(())
    }
}

fn parse_byte(tok: &str) -> Result<u8, String> {
    if tok.len() > 2 || tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_hexdigit()) {
        return Err(format!("malformed byte `{tok}`"));
    }
    Ok(u8::from_str_radix(tok, 16).unwrap())
}

/// Formats `bytes` as `@address` lines of up to 16 bytes each.
pub fn format_bytes(base: u32, bytes: &[u8]) -> String {
    let mut out = String::new();
    for (k, chunk) in bytes.chunks(16).enumerate() {
        write!(out, "@{:08X}", base.wrapping_add(16 * k as u32)).unwrap();
        for b in chunk {
            write!(out, " {b:02X}").unwrap();
        }
        out.push('\n');
    }
    out
}

/// Dumps `len` bytes of memory from `addr` in image text form.
pub fn dump_memory(mem: &Memory, addr: u32, len: usize) -> String {
    format_bytes(addr, &mem.read_bytes(addr, len))
}

/// Register file and pc, one `name value` line each.
pub fn dump_registers(s: &MachineState) -> String {
    let mut out = String::new();
    for r in Reg::all() {
        writeln!(out, "{:<3} {:08X}", r.to_string(), s.reg(r)).unwrap();
    }
    writeln!(out, "pc  {:08X}", s.pc()).unwrap();
    out
}

/// Writes the segments byte by byte at wrapping addresses, sets pc to the
/// entry point and applies register initializers. `s` is untouched on error.
pub fn load_image(image: &ProgramImage, s: &mut MachineState) -> Result<(), LoadError> {
    image.check_overlaps()?;
    let mut regs = Vec::with_capacity(image.regs.len());
    for &(index, value) in &image.regs {
        match Reg::checked(index) {
            None => return Err(LoadError::RegisterIndexOutOfRange(index)),
            Some(r) if r.is_zero() => return Err(LoadError::InitWritesX0),
            Some(r) => regs.push((r, value)),
        }
    }
    for seg in &image.segments {
        s.memory_mut().write_bytes(seg.base, &seg.bytes);
    }
    s.set_pc(image.entry);
    for (r, v) in regs {
        s.set_reg(r, v);
    }
    Ok(())
}
