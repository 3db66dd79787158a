#!/usr/bin/env python3
"""Freeze single-instruction differential vectors from an external RV32 emulator.

Instruction words come from clang's RISC-V assembler; expected results come
from unicorn (QEMU's RV32 core). Neither touches the Rust code under test.

Output line format (all numbers hex, no prefix):

    MNEMONIC WORD PC RS1 V1 RS2 V2 WIN_ADDR WIN_BYTES | PC' RD RD_VALUE WIN_BYTES'

Registers other than RS1/RS2 start at zero. When RS1 == RS2 the two values are
equal. WIN_* is a 16-byte memory window around the effective address of
loads/stores, or `-` for other instructions. RD is `-` for instructions that
write no register. The generator asserts that no register other than RD
changes and that only the window changes in memory.

Requires: clang, ld.lld, `pip install unicorn`.
Usage: gen_unicorn_vectors.py OUT [CASES_PER_MNEMONIC]
"""
import random
import struct
import sys

from unicorn import Uc, UC_ARCH_RISCV, UC_MODE_RISCV32
from unicorn.riscv_const import UC_RISCV_REG_PC, UC_RISCV_REG_X0

from rvasm import assemble_words

R = ["add", "sub", "sll", "slt", "sltu", "xor", "srl", "sra", "or", "and"]
I_ARITH = ["addi", "slti", "sltiu", "xori", "ori", "andi"]
SHIFT = ["slli", "srli", "srai"]
LOADS = {"lb": 1, "lh": 2, "lw": 4, "lbu": 1, "lhu": 2}
STORES = {"sb": 1, "sh": 2, "sw": 4}
BRANCH = ["beq", "bne", "blt", "bge", "bltu", "bgeu"]
SPECIAL = [0, 1, 2, 31, 32, 0x7FF, 0x800, 0x7FFFFFFF, 0x80000000, 0xFFFFFFFF, 0xFFFFFFFE, 0xFFFFF800]

M32 = 0xFFFFFFFF


def sext(v, bits):
    v &= (1 << bits) - 1
    return v - (1 << bits) if v >> (bits - 1) else v


def value(rng):
    return rng.choice(SPECIAL) if rng.random() < 0.3 else rng.getrandbits(32)


def reg(rng):
    # Bias towards aliasing and x0.
    return rng.choice([0, 1, 1, 2, 5, 31]) if rng.random() < 0.3 else rng.randrange(32)


def make_case(m, rng):
    rd, rs1, rs2 = reg(rng), reg(rng), reg(rng)
    if rng.random() < 0.1:
        rd = rs1
    v1, v2 = value(rng), value(rng)
    imm = None
    mem_width = None
    if m in R:
        asm = f"{m} x{rd}, x{rs1}, x{rs2}"
    elif m in I_ARITH:
        imm = rng.choice([-2048, -1, 0, 1, 2047]) if rng.random() < 0.3 else rng.randrange(-2048, 2048)
        asm = f"{m} x{rd}, x{rs1}, {imm}"
    elif m in SHIFT:
        imm = rng.randrange(32)
        asm = f"{m} x{rd}, x{rs1}, {imm}"
    elif m in LOADS or m in STORES or m == "jalr":
        imm = rng.choice([-2048, -1, 0, 1, 2047]) if rng.random() < 0.3 else rng.randrange(-2048, 2048)
        if m == "jalr":
            asm = f"jalr x{rd}, {imm}(x{rs1})"
        elif m in LOADS:
            asm = f"{m} x{rd}, {imm}(x{rs1})"
            mem_width = LOADS[m]
        else:
            asm = f"{m} x{rs2}, {imm}(x{rs1})"
            mem_width = STORES[m]
        if mem_width:
            # Pick the effective address, then derive the base register value.
            ea = rng.randrange(0x2000, 0xFFFF0000)
            if rng.random() < 0.5:
                ea &= ~(mem_width - 1)
            if rs1 != 0:
                v1 = (ea - imm) & M32
    elif m in BRANCH:
        imm = rng.choice([-4096, -4, 4, 4094]) if rng.random() < 0.2 else 2 * rng.randrange(-2048, 2048)
        if rng.random() < 0.3:
            v2 = v1
        asm = f"{m} x{rs1}, x{rs2}, {imm}"
    elif m == "jal":
        imm = 2 * rng.randrange(-(1 << 19), 1 << 19)
        asm = f"jal x{rd}, {imm}"
    elif m in ("lui", "auipc"):
        imm = rng.choice([0, 1, 0x80000, 0xFFFFF]) if rng.random() < 0.2 else rng.randrange(1 << 20)
        asm = f"{m} x{rd}, {imm:#x}"
    else:
        raise ValueError(m)
    if rs1 == rs2:
        v2 = v1
    if rs1 == 0:
        v1 = 0
    if rs2 == 0:
        v2 = 0
    if rs1 == rs2:
        v2 = v1
    return dict(m=m, asm=asm, rd=rd, rs1=rs1, rs2=rs2, v1=v1, v2=v2, imm=imm, width=mem_width)


def page(a):
    return a & ~0xFFF


def execute(case, word, rng):
    """Runs one instruction under unicorn. Returns None if the case cannot be
    laid out without overlapping code and data."""
    m = case["m"]
    regs = [0] * 32
    regs[case["rs1"]] = case["v1"]
    regs[case["rs2"]] = case["v2"]
    pc = rng.randrange(0x1000, 0xFFFFE000) & ~3
    if case["m"] == "auipc" and rng.random() < 0.1:
        pc = 0
    pages = {page(pc), page(pc + 4)}
    window = None
    if case["width"]:
        ea = (regs[case["rs1"]] + case["imm"]) & M32
        start = (ea & ~7) - 4
        if start < 0 or start + 16 > 1 << 32:
            return None
        if start < pc + 4 and pc < start + 16:
            return None
        window = (start, bytes(rng.getrandbits(8) for _ in range(16)))
        pages |= {page(start), page(start + 15)}
    # Pages a control transfer might fetch from.
    if m in BRANCH or m == "jal":
        pages.add(page((pc + case["imm"]) & M32))
    if m == "jalr":
        pages.add(page((regs[case["rs1"]] + case["imm"]) & M32 & ~1))

    mu = Uc(UC_ARCH_RISCV, UC_MODE_RISCV32)
    for p in sorted(pages):
        mu.mem_map(p, 0x1000)
    mu.mem_write(pc, struct.pack("<I", word))
    if window:
        mu.mem_write(window[0], window[1])
    for i in range(1, 32):
        mu.reg_write(UC_RISCV_REG_X0 + i, regs[i])
    mu.emu_start(pc, (pc + 4) & M32, count=1)

    after = [mu.reg_read(UC_RISCV_REG_X0 + i) & M32 for i in range(32)]
    writes_rd = not (m in STORES or m in BRANCH)
    rd = case["rd"] if writes_rd else None
    for i in range(32):
        if i != rd:
            assert after[i] == regs[i], (case, i)
    new_pc = mu.reg_read(UC_RISCV_REG_PC) & M32
    win_after = bytes(mu.mem_read(window[0], 16)) if window else None
    # Nothing outside the window may change.
    assert bytes(mu.mem_read(pc, 4)) == struct.pack("<I", word)

    win = f"{window[0]:08X} {window[1].hex().upper()}" if window else "- -"
    win2 = win_after.hex().upper() if window else "-"
    rd_txt = f"{rd} {after[rd]:08X}" if rd is not None else "- -"
    return (
        f"{m} {word:08X} {pc:08X} {case['rs1']} {case['v1']:08X} {case['rs2']} {case['v2']:08X} {win}"
        f" | {new_pc:08X} {rd_txt} {win2}"
    )


def main():
    out = sys.argv[1]
    per = int(sys.argv[2]) if len(sys.argv) > 2 else 120
    rng = random.Random(0x5EED_0032)
    mnemonics = R + I_ARITH + SHIFT + list(LOADS) + list(STORES) + BRANCH + ["jalr", "jal", "lui", "auipc"]
    assert len(mnemonics) == 37
    lines = []
    for m in mnemonics:
        cases = [make_case(m, rng) for _ in range(per * 2)]
        words = assemble_words([c["asm"] for c in cases])
        kept = 0
        for c, w in zip(cases, words):
            line = execute(c, w, rng)
            if line is None:
                continue
            lines.append(line + f"  # {c['asm']}")
            kept += 1
            if kept == per:
                break
        assert kept == per, (m, kept)
    with open(out, "w") as f:
        f.write("# Generated by tools/gen_unicorn_vectors.py; do not edit.\n")
        f.write("\n".join(lines) + "\n")
    print(f"{len(lines)} vectors -> {out}")


if __name__ == "__main__":
    main()
