"""Render the 400-glyph training grid as bilevel PGM files.

Four typesets x five point sizes x 20 numerals (Arabic 0-9, Arabic-Indic
0-9). Glyphs are drawn with the DejaVu faces that carry Arabic-Indic
digits, thresholded at 50% grey so every fixture is strictly 0/255.

Each file is one character cell: the font's full line height (so stacking
cells side by side keeps a common baseline) and the glyph's ink width plus
a side bearing.

    python scripts/render_fixtures.py fixtures/glyphs --dpi 300
"""
import argparse
import sys
from pathlib import Path

import numpy as np
from PIL import Image, ImageDraw, ImageFont
from scipy import ndimage

from hybrid_ocr.classifiers import ALL_LABELS
from hybrid_ocr.imageio import GrayImage, save_pgm
from hybrid_ocr.pipeline import FONT_SIZES, glyph_filename

FONT_DIR = Path("/usr/share/fonts/truetype/dejavu")
TYPESETS = {
    "sans": "DejaVuSans.ttf",
    "sansbold": "DejaVuSans-Bold.ttf",
    "mono": "DejaVuSansMono.ttf",
    "monobold": "DejaVuSansMono-Bold.ttf",
}


def render(font: ImageFont.FreeTypeFont, char: str) -> np.ndarray:
    ascent, descent = font.getmetrics()
    left, _, right, _ = font.getbbox(char)
    bearing = max(2, font.size // 8)
    width = right - min(left, 0) + 2 * bearing
    img = Image.new("L", (width, ascent + descent), 255)
    ImageDraw.Draw(img).text((bearing - min(left, 0), 0), char, font=font, fill=0)
    return np.where(np.asarray(img) < 128, 0, 255).astype(np.uint8)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("out_dir", type=Path)
    ap.add_argument("--dpi", type=int, default=300)
    args = ap.parse_args(argv)
    args.out_dir.mkdir(parents=True, exist_ok=True)

    for ts, fname in TYPESETS.items():
        for pt in FONT_SIZES:
            font = ImageFont.truetype(str(FONT_DIR / fname), round(pt * args.dpi / 72))
            for label in ALL_LABELS:
                px = render(font, label.char)
                ink = px == 0
                _, ncomp = ndimage.label(ink)
                if ncomp != 1:
                    print(f"warning: {ts} {pt}pt {label} has {ncomp} components", file=sys.stderr)
                save_pgm(GrayImage(px), args.out_dir / glyph_filename(ts, pt, label.script, label.digit))
    print(f"wrote {len(TYPESETS) * len(FONT_SIZES) * len(ALL_LABELS)} glyphs to {args.out_dir}")


if __name__ == "__main__":
    main()
