#!/usr/bin/env python3
"""Regenerate the transliteration table.

Writes core/data/translit_v1.tsv (codepoint -> closest Latin letters, from
NFKD decomposition with explicit overrides for non-decomposable letters) and
bakes it into core/src/translit_table.inc. Rows are sorted by codepoint;
tests/test_translit.cpp asserts the two stay in sync.

Usage: python3 tools/gen_translit_table.py [repo-root]
"""

import sys
import unicodedata
from pathlib import Path

OVERRIDES = {
    0x00C6: "AE", 0x00E6: "ae",
    0x0152: "OE", 0x0153: "oe",
    0x00D8: "O", 0x00F8: "o",
    0x00DF: "ss", 0x1E9E: "SS",
    0x00D0: "D", 0x00F0: "d",
    0x00DE: "Th", 0x00FE: "th",
    0x0110: "D", 0x0111: "d",
    0x0126: "H", 0x0127: "h",
    0x0131: "i",
    0x0138: "k",
    0x0141: "L", 0x0142: "l",
    0x0149: "n",
    0x014A: "N", 0x014B: "n",
    0x0166: "T", 0x0167: "t",
    0x017F: "s",
    0x01A0: "O", 0x01A1: "o",
    0x01B0: "U", 0x01B1: "u",
    0x0180: "b", 0x0189: "D", 0x0191: "F", 0x0192: "f",
    0x0197: "I", 0x019A: "l", 0x019F: "O", 0x01AB: "t",
    0x01B5: "Z", 0x01B6: "z",
    0x0218: "S", 0x0219: "s",
    0x021A: "T", 0x021B: "t",
    0x023A: "A", 0x023B: "C", 0x023C: "c", 0x023D: "L",
    0x0243: "B", 0x0247: "e", 0x0248: "J", 0x0249: "j",
    0x024D: "r", 0x0256: "d", 0x0257: "d", 0x025B: "e",
    0x0272: "n", 0x0283: "sh", 0x0292: "zh",
    0x1D79: "g",
    0xA78B: "K", 0xA78C: "k",
    0x2019: "", 0x02BC: "", 0x02B9: "",  # apostrophe-like marks: drop
}

RANGES = [
    (0x00C0, 0x024F),  # Latin-1 Supplement letters, Extended-A, Extended-B
    (0x0250, 0x02AF),  # IPA extensions (seen in gazetteer exports)
    (0x1E00, 0x1EFF),  # Latin Extended Additional
]


def fold(cp):
    if cp in OVERRIDES:
        return OVERRIDES[cp]
    out = []
    for c in unicodedata.normalize("NFKD", chr(cp)):
        if unicodedata.category(c) == "Mn":
            continue
        if c.isascii() and c.isalpha():
            out.append(c)
        elif ord(c) in OVERRIDES:
            out.append(OVERRIDES[ord(c)])
        else:
            return None
    return "".join(out) if out else None


def main():
    root = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent
    rows = []
    for lo, hi in RANGES:
        for cp in range(lo, hi + 1):
            if not unicodedata.category(chr(cp)).startswith("L"):
                continue
            mapped = fold(cp)
            if mapped is None:
                continue
            try:
                name = unicodedata.name(chr(cp))
            except ValueError:
                name = "?"
            rows.append((cp, mapped, name))
    rows.sort()

    tsv = root / "core" / "data" / "translit_v1.tsv"
    with open(tsv, "w") as f:
        f.write("# placenames transliteration table v1\n")
        f.write("# codepoint<TAB>ascii<TAB>unicode name\n")
        for cp, mapped, name in rows:
            f.write(f"{cp:04X}\t{mapped}\t{name}\n")

    inc = root / "core" / "src" / "translit_table.inc"
    with open(inc, "w") as f:
        f.write("// Generated from core/data/translit_v1.tsv. Do not edit by hand;\n")
        f.write("// regenerate with tools/gen_translit_table.py and keep the two in sync\n")
        f.write("// (tests/test_translit.cpp asserts equality with the data file).\n")
        for cp, mapped, _ in rows:
            f.write(f'{{0x{cp:04X}, "{mapped}"}},\n')
    print(f"{len(rows)} entries -> {tsv} and {inc}")


if __name__ == "__main__":
    main()
