#!/usr/bin/env python3
"""Prepend the license header to project C++ sources that lack it."""

import argparse
import pathlib

DIRS = ("core", "tools", "tests", "benchmarks")
SUFFIXES = {".cpp", ".hpp", ".h"}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("header", type=pathlib.Path)
    ap.add_argument("--root", type=pathlib.Path, default=pathlib.Path(__file__).resolve().parent.parent)
    args = ap.parse_args()
    header = args.header.read_text().rstrip("\n") + "\n\n"
    first = header.splitlines()[0]
    changed = 0
    for d in DIRS:
        for path in sorted((args.root / d).rglob("*")):
            if path.suffix not in SUFFIXES or not path.is_file():
                continue
            text = path.read_text()
            if text.startswith(first):
                continue
            path.write_text(header + text)
            changed += 1
    print(f"{changed} files updated")


if __name__ == "__main__":
    main()
