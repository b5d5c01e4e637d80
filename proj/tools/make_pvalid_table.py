#!/usr/bin/env python3
"""Write an IDNA2008 derived-property table from the `idna` package's data.

Output lines follow the RFC 5892 layout:

    0061..007A    ; PVALID      # LATIN SMALL LETTER A..LATIN SMALL LETTER Z

Only the PVALID, CONTEXTJ and CONTEXTO classes are emitted; every code point
not listed is DISALLOWED or UNASSIGNED.

Usage:
    pip download --no-deps idna==2.9        # Unicode 12.1.0 tables
    python3 -m zipfile -e idna-2.9-*.whl /tmp/idna29
    PYTHONPATH=/tmp/idna29 python3 tools/make_pvalid_table.py > data/idna-pvalid-12.1.0.txt
"""

import sys

from idna import idnadata


def ranges(packed):
    for r in packed:
        start, end = r >> 32, (r & 0xFFFFFFFF) - 1
        yield start, end


def main():
    version = getattr(idnadata, "__version__", "unknown")
    out = sys.stdout
    out.write(f"# IDNA2008 derived property values, Unicode {version}\n")
    out.write("# Generated from the idna package tables (PVALID/CONTEXTJ/CONTEXTO only).\n")
    rows = []
    for prop in ("PVALID", "CONTEXTJ", "CONTEXTO"):
        for start, end in ranges(idnadata.codepoint_classes[prop]):
            rows.append((start, end, prop))
    rows.sort()
    for start, end, prop in rows:
        span = f"{start:04X}" if start == end else f"{start:04X}..{end:04X}"
        count = end - start + 1
        out.write(f"{span:<14}; {prop:<10} # {count}\n")


if __name__ == "__main__":
    main()
