use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};

use rv32_core::encode::assemble;
use rv32_core::loader::{dump_memory, dump_registers, load_image, ProgramImage};
use rv32_core::trace::step_traced;
use rv32_core::{decode, run, MachineState, Mnemonic, ModelStatus, RawInstruction, StopReason};

/// Word that ends a program normally: fetching it freezes the machine as an
/// illegal instruction, which the runner treats as a clean halt.
const HALT_SENTINEL: u32 = 0x0000_0000;

const EXIT_USAGE: u8 = 1;
const EXIT_ILLEGAL: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "rv32-sim", version, about = "RV32I simulator: run images, encode and decode instruction words")]
struct Cli {
    /// Reject operands that `asm-word` would otherwise mask to fit their field.
    #[arg(long, global = true)]
    strict_encode: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load a program image and run it.
    Run(RunArgs),
    /// Encode one instruction. Operands follow the encoder order:
    /// R `rs1 rs2 rd`, I `rs1 imm rd`, shifts `rs1 shamt rd`,
    /// S/B `rs1 rs2 imm`, U/J `imm rd`.
    AsmWord {
        mnemonic: String,
        #[arg(allow_hyphen_values = true, num_args = 0..)]
        fields: Vec<String>,
    },
    /// Decode one hexadecimal instruction word.
    DecodeWord { word: String },
}

#[derive(clap::Args)]
struct RunArgs {
    /// Text image (`@addr` format), or a flat binary when the file ends in
    /// `.bin` or `--base` is given.
    image: PathBuf,
    /// Step budget.
    #[arg(long, default_value_t = 1_000_000)]
    steps: u64,
    /// Load address of a flat binary (hex).
    #[arg(long, value_parser = parse_hex)]
    base: Option<u32>,
    /// Entry point (hex); overrides the image's `entry`.
    #[arg(long, value_parser = parse_hex)]
    entry: Option<u32>,
    /// Initial register value, `N=HEX`; repeatable.
    #[arg(long = "reg", value_parser = parse_reg_init)]
    regs: Vec<(u32, u32)>,
    /// Write one JSON trace record per executed cycle to this file.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Print x0..x31 and pc after the run.
    #[arg(long)]
    dump_regs: bool,
    /// Print LEN bytes of memory from ADDR (hex) after the run, in image format.
    #[arg(long, num_args = 2, value_names = ["ADDR", "LEN"])]
    dump_mem: Option<Vec<String>>,
    /// Exit 0 when the step budget runs out.
    #[arg(long)]
    allow_budget: bool,
}

fn parse_hex(s: &str) -> Result<u32, String> {
    let digits = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")).unwrap_or(s);
    u32::from_str_radix(digits, 16).map_err(|e| format!("`{s}`: {e}"))
}

/// Decimal, or hex with a `0x` prefix.
fn parse_len(s: &str) -> Result<usize, String> {
    match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => usize::from_str_radix(hex, 16),
        None => s.parse(),
    }
    .map_err(|e| format!("`{s}`: {e}"))
}

fn parse_reg_init(s: &str) -> Result<(u32, u32), String> {
    let (name, value) = s.split_once('=').ok_or_else(|| format!("`{s}`: expected N=HEX"))?;
    let index = name.strip_prefix('x').unwrap_or(name).parse().map_err(|_| format!("`{name}`: bad register"))?;
    Ok((index, parse_hex(value)?))
}

/// Integer operand for `asm-word`: decimal or `0x` hex, optionally negative,
/// or a register name `xN`.
fn parse_operand(s: &str) -> Result<i64> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let magnitude = if let Some(hex) = body.strip_prefix("0x").or_else(|| body.strip_prefix("0X")) {
        i64::from_str_radix(hex, 16)
    } else if let Some(reg) = body.strip_prefix('x').filter(|_| !neg) {
        reg.parse()
    } else {
        body.parse()
    }
    .map_err(|_| anyhow!("bad operand `{s}`"))?;
    Ok(if neg { -magnitude } else { magnitude })
}

fn load_program(args: &RunArgs) -> Result<ProgramImage> {
    let is_binary = args.base.is_some() || args.image.extension().is_some_and(|e| e == "bin");
    let mut image = if is_binary {
        let bytes = std::fs::read(&args.image).with_context(|| format!("reading {}", args.image.display()))?;
        ProgramImage::from_binary(bytes, args.base.unwrap_or(0), 0)
    } else {
        ProgramImage::parse_file(&args.image).with_context(|| format!("parsing {}", args.image.display()))?
    };
    if let Some(entry) = args.entry {
        image.entry = entry;
    }
    image.regs.extend(args.regs.iter().copied());
    Ok(image)
}

fn run_command(args: RunArgs) -> Result<u8> {
    let dump_range = match &args.dump_mem {
        Some(v) => Some((parse_hex(&v[0]).map_err(|e| anyhow!(e))?, parse_len(&v[1]).map_err(|e| anyhow!(e))?)),
        None => None,
    };
    let image = load_program(&args)?;
    let mut state = MachineState::new();
    load_image(&image, &mut state)?;

    let (state, steps, reason) = match &args.trace {
        Some(path) => run_traced(state, args.steps, path)?,
        None => {
            let out = run(state, args.steps);
            (out.final_state, out.steps_executed, out.stop_reason)
        }
    };

    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    if args.dump_regs {
        out.write_all(dump_registers(&state).as_bytes())?;
    }
    if let Some((addr, len)) = dump_range {
        out.write_all(dump_memory(state.memory(), addr, len).as_bytes())?;
    }
    out.flush()?;

    let code = match (reason, state.status()) {
        (StopReason::BudgetExhausted, _) => {
            eprintln!("step budget of {steps} exhausted at pc {:08X}", state.pc());
            if args.allow_budget {
                0
            } else {
                EXIT_BUDGET
            }
        }
        (_, ModelStatus::IllegalInstruction { word: HALT_SENTINEL, pc }) => {
            eprintln!("halted at pc {pc:08X} after {steps} steps");
            0
        }
        (_, ModelStatus::IllegalInstruction { word, pc }) => {
            eprintln!("illegal instruction {word:08X} at pc {pc:08X} after {steps} steps");
            EXIT_ILLEGAL
        }
        (_, ModelStatus::Halted(code)) => {
            eprintln!("halted with code {code} after {steps} steps");
            0
        }
        (StopReason::NotRunning, ModelStatus::Running) => unreachable!("run stops early only when not running"),
    };
    Ok(code)
}

fn run_traced(mut state: MachineState, budget: u64, path: &Path) -> Result<(MachineState, u64, StopReason)> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = BufWriter::new(file);
    let mut cycle = 0;
    while cycle < budget {
        let Some(rec) = step_traced(&mut state, cycle) else { break };
        serde_json::to_writer(&mut w, &rec)?;
        w.write_all(b"\n")?;
        cycle += 1;
    }
    w.flush()?;
    let reason = if state.status().is_running() { StopReason::BudgetExhausted } else { StopReason::NotRunning };
    Ok((state, cycle, reason))
}

fn asm_word(mnemonic: &str, fields: &[String], strict: bool) -> Result<u8> {
    let mnemonic: Mnemonic = mnemonic.parse()?;
    let args = fields.iter().map(|f| parse_operand(f)).collect::<Result<Vec<_>>>()?;
    let word = assemble(mnemonic, &args, strict)?;
    println!("{word}");
    Ok(0)
}

fn decode_word(text: &str) -> Result<u8> {
    let word = match parse_hex(text) {
        Ok(w) => RawInstruction(w),
        Err(e) => bail!(e),
    };
    Ok(match decode(word) {
        Ok(insn) => {
            println!("{insn}");
            0
        }
        Err(_) => {
            println!("illegal {word}");
            EXIT_ILLEGAL
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Run(args) => run_command(args),
        Command::AsmWord { mnemonic, fields } => asm_word(&mnemonic, &fields, cli.strict_encode),
        Command::DecodeWord { word } => decode_word(&word),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
