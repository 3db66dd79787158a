//! Single-instruction vectors frozen from an external emulator
//! (`testdata/unicorn_vectors.txt`, produced by `tools/gen_unicorn_vectors.py`).

use std::fs;

use crate::testdata_dir;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vector {
    pub mnemonic: String,
    pub word: u32,
    pub pc: u32,
    pub rs1: u32,
    pub v1: u32,
    pub rs2: u32,
    pub v2: u32,
    /// 16-byte memory window: base address, initial and final contents.
    pub window: Option<(u32, Vec<u8>, Vec<u8>)>,
    pub next_pc: u32,
    /// Destination register and its final value.
    pub rd: Option<(u32, u32)>,
    pub source: String,
}

impl Vector {
    /// Initial register file: zero except `rs1`/`rs2`.
    pub fn initial_regs(&self) -> [u32; 32] {
        let mut x = [0u32; 32];
        x[self.rs1 as usize] = self.v1;
        x[self.rs2 as usize] = self.v2;
        x[0] = 0;
        x
    }

    /// Expected final register file.
    pub fn final_regs(&self) -> [u32; 32] {
        let mut x = self.initial_regs();
        if let Some((rd, v)) = self.rd {
            x[rd as usize] = v;
        }
        x[0] = 0;
        x
    }
}

fn hex(s: &str) -> u32 {
    u32::from_str_radix(s, 16).unwrap_or_else(|_| panic!("bad hex `{s}`"))
}

fn bytes(s: &str) -> Vec<u8> {
    (0..s.len()).step_by(2).map(|i| u8::from_str_radix(&s[i..i + 2], 16).unwrap()).collect()
}

pub fn parse(text: &str) -> Vec<Vector> {
    text.lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|line| {
            let (body, source) = line.split_once('#').unwrap_or((line, ""));
            let t: Vec<&str> = body.split_whitespace().collect();
            assert_eq!(t.len(), 14, "malformed vector: {line}");
            assert_eq!(t[9], "|");
            let window = (t[7] != "-").then(|| (hex(t[7]), bytes(t[8]), bytes(t[13])));
            let rd = (t[11] != "-").then(|| (t[11].parse().unwrap(), hex(t[12])));
            Vector {
                mnemonic: t[0].to_string(),
                word: hex(t[1]),
                pc: hex(t[2]),
                rs1: t[3].parse().unwrap(),
                v1: hex(t[4]),
                rs2: t[5].parse().unwrap(),
                v2: hex(t[6]),
                window,
                next_pc: hex(t[10]),
                rd,
                source: source.trim().to_string(),
            }
        })
        .collect()
}

pub fn load() -> Vec<Vector> {
    let path = testdata_dir().join("unicorn_vectors.txt");
    let text = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    parse(&text)
}
