#!/usr/bin/env python3
"""Write the ten benchmark automata as .ta files for use with the CLI."""

import argparse
from pathlib import Path

from tempoclass.corpus import SOURCES


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("out", nargs="?", default="automata",
                        help="output directory (default: ./automata)")
    args = parser.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, text in SOURCES.items():
        (out / f"{name}.ta").write_text(text, encoding="utf-8")
    print(f"wrote {len(SOURCES)} automata to {out}/")


if __name__ == "__main__":
    main()
