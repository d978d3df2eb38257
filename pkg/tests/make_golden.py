"""Regenerate tests/golden/<spec>/ from specs/*.gfa.

Run after an intentional change to report contents:

    python3 tests/make_golden.py
"""
import os
import pathlib
import shutil

from gfakit.dsl import run_source

ROOT = pathlib.Path(__file__).resolve().parents[1]
GOLDEN = ROOT / "tests" / "golden"


def main():
    os.environ.pop("GFA_NMAX", None)
    for spec in sorted((ROOT / "specs").glob("*.gfa")):
        out = GOLDEN / spec.stem
        shutil.rmtree(out, ignore_errors=True)
        code, _ = run_source(spec.read_text(), out)
        print(f"{spec.name}: exit {code}, {len(list(out.iterdir()))} files")


if __name__ == "__main__":
    main()
