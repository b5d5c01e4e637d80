#!/usr/bin/env python3
"""Convert the compressed font blob shipped in the `unifont-bitmap` crate
(src/unifont.dat, GNU Unifont 14.0.01, all planes) back to .hex lines.

Layout of unifont.dat:
  u32 BE  length L of the zlib-compressed page table
  L bytes zlib stream -> 4352 x (u16 BE uncompressed size, u16 BE compressed size)
  then, for every page with a nonzero size, one zlib stream in page order.
A decompressed page starts with 256 u16 BE tags (0 = narrow, 1 = wide,
0x101 = absent) followed by the bitmaps of the present code points in order,
16 bytes narrow / 32 bytes wide.

usage: unifont_bitmap_to_hex.py path/to/unifont.dat > unifont-14.0.01.hex
"""

import struct
import sys
import zlib

PAGES = 0x110000 >> 8


def main(path):
    data = open(path, "rb").read()
    (table_len,) = struct.unpack(">I", data[:4])
    table = zlib.decompress(data[4 : 4 + table_len])
    offset = 4 + table_len
    out = sys.stdout
    count = 0
    for page in range(PAGES):
        size, csize = struct.unpack(">HH", table[page * 4 : page * 4 + 4])
        if size == 0:
            continue
        raw = zlib.decompress(data[offset : offset + csize])
        offset += csize
        assert len(raw) == size, (page, len(raw), size)
        pos = 512
        for ch in range(256):
            (tag,) = struct.unpack(">H", raw[ch * 2 : ch * 2 + 2])
            if tag == 0x101:
                continue
            n = 32 if tag == 1 else 16
            bits = raw[pos : pos + n]
            pos += n
            out.write("%04X:%s\n" % ((page << 8) | ch, bits.hex().upper()))
            count += 1
    print("%d glyphs" % count, file=sys.stderr)


if __name__ == "__main__":
    main(sys.argv[1])
