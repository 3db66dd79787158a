#!/usr/bin/env python3
"""Assemble RV32I source with clang + ld.lld into a flat binary at a given base.

Usage: rvasm.py SOURCE.s OUT.bin [--base HEX]
       rvasm.py --words 'add x3, x1, x2' 'lui x7, 0x12345' ...   (prints one hex word per line)
"""
import os
import subprocess
import sys
import tempfile


def assemble(source: str, base: int = 0) -> bytes:
    with tempfile.TemporaryDirectory() as d:
        src = os.path.join(d, "a.s")
        obj = os.path.join(d, "a.o")
        out = os.path.join(d, "a.bin")
        with open(src, "w") as f:
            f.write(source)
        subprocess.run(
            ["clang", "--target=riscv32", "-march=rv32i", "-mno-relax", "-c", src, "-o", obj],
            check=True,
        )
        subprocess.run(
            ["ld.lld", "-m", "elf32lriscv", f"-Ttext={base:#x}", "--oformat=binary", "-e", "0", obj, "-o", out],
            check=True,
        )
        with open(out, "rb") as f:
            return f.read()


def assemble_words(lines):
    data = assemble("\n".join(lines) + "\n")
    assert len(data) == 4 * len(lines), (len(data), lines)
    return [int.from_bytes(data[i : i + 4], "little") for i in range(0, len(data), 4)]


if __name__ == "__main__":
    if sys.argv[1] == "--words":
        for w in assemble_words(sys.argv[2:]):
            print(f"{w:08X}")
    else:
        base = int(sys.argv[4], 16) if len(sys.argv) > 4 else 0
        with open(sys.argv[1]) as f:
            data = assemble(f.read(), base)
        with open(sys.argv[2], "wb") as f:
            f.write(data)


def image_text(code: bytes, base: int = 0, extra_segments=(), header: str = "") -> str:
    """Renders bytes in the simulator's `@address` text image format."""
    lines = [f"# {l}" for l in header.splitlines()]
    lines.append(f"entry {base:08X}")
    for seg_base, data in [(base, code), *extra_segments]:
        for k in range(0, len(data), 16):
            chunk = " ".join(f"{b:02X}" for b in data[k : k + 16])
            lines.append(f"@{seg_base + k:08X} {chunk}")
    return "\n".join(lines) + "\n"
