#!/usr/bin/env python3
"""Freeze the encoding golden set: words produced by clang's RISC-V assembler.

Each line: MNEMONIC ARGS... EXPECTED_HEX  # assembler source
ARGS follow the encoder operand order: R `rs1 rs2 rd`, I/loads/jalr
`rs1 imm rd`, shifts `rs1 shamt rd`, S/B `rs1 rs2 imm`, U `imm rd` with imm
the full 32-bit value (low 12 bits zero), J `imm rd`. Every decoded word is
also checked against capstone's disassembler mnemonic.

Usage: gen_golden.py OUT [CASES_PER_MNEMONIC]
"""
import random
import sys

import capstone

from rvasm import assemble_words
from gen_unicorn_vectors import R, I_ARITH, SHIFT, LOADS, STORES, BRANCH

CANONICAL = {
    "add": (1, 2, 3),
    "lw": (2, -8, 5),
    "sw": (2, 5, -8),
    "beq": (1, 2, -4),
    "jal": (-8, 1),
    "lui": (0x12345000, 7),
    "jalr": (5, 4, 1),
}


def case(m, rng, canonical=False):
    r = lambda: rng.randrange(32)
    if canonical and m in CANONICAL:
        args = CANONICAL[m]
    elif m in R:
        args = (r(), r(), r())
    elif m in I_ARITH or m in LOADS or m == "jalr":
        args = (r(), rng.randrange(-2048, 2048), r())
    elif m in SHIFT:
        args = (r(), rng.randrange(32), r())
    elif m in STORES:
        args = (r(), r(), rng.randrange(-2048, 2048))
    elif m in BRANCH:
        args = (r(), r(), 2 * rng.randrange(-2048, 2048))
    elif m in ("lui", "auipc"):
        args = (rng.randrange(1 << 20) << 12, r())
    elif m == "jal":
        args = (2 * rng.randrange(-(1 << 19), 1 << 19), r())
    else:
        raise ValueError(m)
    return args, asm_text(m, args)


def asm_text(m, a):
    if m in R:
        return f"{m} x{a[2]}, x{a[0]}, x{a[1]}"
    if m in I_ARITH or m in SHIFT:
        return f"{m} x{a[2]}, x{a[0]}, {a[1]}"
    if m in LOADS or m == "jalr":
        return f"{m} x{a[2]}, {a[1]}(x{a[0]})"
    if m in STORES:
        return f"{m} x{a[1]}, {a[2]}(x{a[0]})"
    if m in BRANCH:
        return f"{m} x{a[0]}, x{a[1]}, {a[2]}"
    if m in ("lui", "auipc"):
        return f"{m} x{a[1]}, {a[0] >> 12:#x}"
    if m == "jal":
        return f"jal x{a[1]}, {a[0]}"
    raise ValueError(m)


def main():
    out = sys.argv[1]
    per = int(sys.argv[2]) if len(sys.argv) > 2 else 8
    rng = random.Random(0x60_1DE7)
    mnemonics = R + I_ARITH + SHIFT + list(LOADS) + list(STORES) + BRANCH + ["jalr", "jal", "lui", "auipc"]
    rows = [(m,) + case(m, rng, canonical=(k == 0)) for m in mnemonics for k in range(per)]
    words = assemble_words([text for _, _, text in rows])
    md = capstone.Cs(capstone.CS_ARCH_RISCV, capstone.CS_MODE_RISCV32)
    with open(out, "w") as f:
        f.write("# Generated by tools/gen_golden.py; do not edit.\n")
        for (m, args, text), w in zip(rows, words):
            insn = next(md.disasm(w.to_bytes(4, "little"), 0))
            # capstone prints aliases (e.g. `mv`, `j`, `nop`); only the
            # canonical spelling is compared when capstone uses it.
            aliases = {"nop", "mv", "not", "neg", "seqz", "snez", "sltz", "sgtz", "j", "jr", "ret",
                       "beqz", "bnez", "blez", "bgez", "bltz", "bgtz", "bgt", "ble", "bgtu", "bleu",
                       "li", "sext.w", "zext.b", "jalr", "jal"}
            assert insn.mnemonic == m or insn.mnemonic in aliases, (text, insn.mnemonic)
            f.write(f"{m} {' '.join(str(a) for a in args)} {w:08X}  # {text}\n")
    print(f"{len(rows)} golden words -> {out}")


if __name__ == "__main__":
    main()
