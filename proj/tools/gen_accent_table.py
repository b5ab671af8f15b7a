#!/usr/bin/env python3
# Copyright 2026 The Anthro Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates src/accent_table.inc from the Unicode decomposition data."""

import sys
import unicodedata

RANGES = [(0x00C0, 0x0250), (0x1E00, 0x1F00)]

# Letters with no canonical decomposition but an obvious ASCII base.
EXTRA = {
    0x00D8: "O", 0x00F8: "o", 0x0110: "D", 0x0111: "d", 0x0126: "H",
    0x0127: "h", 0x0131: "i", 0x0141: "L", 0x0142: "l", 0x0166: "T",
    0x0167: "t", 0x0180: "b", 0x0197: "I", 0x01B5: "Z", 0x01B6: "z",
}


def main():
    rows = []
    for lo, hi in RANGES:
        for cp in range(lo, hi):
            ch = chr(cp)
            base = "".join(c for c in unicodedata.normalize("NFD", ch)
                           if not unicodedata.combining(c))
            if cp in EXTRA:
                base = EXTRA[cp]
            if len(base) == 1 and base.isascii() and base.isalpha() and base != ch:
                rows.append((cp, base))
    out = sys.stdout
    out.write("// Generated by tools/gen_accent_table.py. Do not edit.\n")
    for cp, base in rows:
        out.write("{0x%04X, '%s'},\n" % (cp, base))


if __name__ == "__main__":
    main()
