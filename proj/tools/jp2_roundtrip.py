#!/usr/bin/env python3
"""JPEG 2000 round trip for the jpeg2000 attack.

Usage: jp2_roundtrip.py IN.pgm OUT.pgm RATIO

Point CURVEMARK_JP2_CODEC at this file to use Pillow's OpenJPEG codec.
"""

import io
import sys

from PIL import Image


def main(argv):
    if len(argv) != 4:
        print(__doc__.strip(), file=sys.stderr)
        return 2
    src, dst, ratio = argv[1], argv[2], float(argv[3])
    img = Image.open(src).convert("L")
    buf = io.BytesIO()
    img.save(buf, format="JPEG2000", quality_mode="rates", quality_layers=[ratio], irreversible=True)
    buf.seek(0)
    Image.open(buf).convert("L").save(dst, format="PPM")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
