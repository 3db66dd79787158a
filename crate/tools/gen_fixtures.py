#!/usr/bin/env python3
"""Assembles the fixture programs in testdata/ into text images."""
import os

from rvasm import assemble, image_text

HERE = os.path.dirname(os.path.abspath(__file__))
DATA = os.path.join(HERE, "..", "testdata")

MEMCPY_SOURCE = bytes((7 * k + 3) & 0xFF for k in range(64))


def build(name, extra=()):
    with open(os.path.join(DATA, f"{name}.s")) as f:
        code = assemble(f.read())
    text = image_text(code, 0, extra, header=f"Generated from {name}.s by tools/gen_fixtures.py.")
    with open(os.path.join(DATA, f"{name}.hex"), "w") as f:
        f.write(text)


build("fib")
build("memcpy", [(0x1000, MEMCPY_SOURCE)])
