#!/usr/bin/env python3
"""Writes the reference rule image for the NS/PB rule.

Built straight from the byte layout, without the C++ code: an 8-byte header
(magic, version, rule count, two zero bytes) and 16 slots of X1..X4, Y1, Y2,
each function 16 nibbles with the even column in the low nibble.
"""
import argparse
import re
import struct
import sys

ANY = [15] * 16
NULL = [0] * 16


def load_definitions(path):
    defs = {}
    pattern = re.compile(r"\(DEFINE\s+(\S+)\s+\(([^)]*)\)\)", re.IGNORECASE)
    with open(path) as f:
        for line in f:
            m = pattern.search(line)
            if m:
                levels = [int(v) for v in m.group(2).split()]
                assert len(levels) == 16 and all(0 <= v <= 15 for v in levels)
                defs[m.group(1).upper()] = levels
    return defs


def pack(levels):
    return bytes(levels[2 * j] | (levels[2 * j + 1] << 4) for j in range(8))


def image(rules):
    out = bytearray(b"FZC1" + struct.pack("<BBBB", 1, len(rules), 0, 0))
    for slot in range(16):
        if slot < len(rules):
            ante, cons = rules[slot]
        else:
            ante, cons = [], []
        ante = ante + [ANY] * (4 - len(ante))
        cons = cons + [NULL] * (2 - len(cons))
        for fn in ante + cons:
            out += pack(fn)
    assert len(out) == 776
    return bytes(out)


def main():
    p = argparse.ArgumentParser()
    p.add_argument("definitions")
    p.add_argument("output")
    args = p.parse_args()
    d = load_definitions(args.definitions)
    # IF X1 IS NS AND X2 IS PB THEN Y1 IS PB
    data = image([([d["NS"], d["PB"]], [d["PB"]])])
    with open(args.output, "wb") as f:
        f.write(data)
    print(f"wrote {args.output} ({len(data)} bytes)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
