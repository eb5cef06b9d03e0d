#!/usr/bin/env python3
"""Emit the data behind the spin-system deviation/unitarity trade-off figure.

Writes one CSV per spin: the full simplex sweep for j = 1/2 (a curve) and
j = 1 (a cloud), each row carrying the measured pair (delta, u) plus both
bound values.  Plot (1 - u) against sqrt_delta to reproduce the envelope.
"""

import argparse
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from noetherlab.cli import main as cli_main  # noqa: E402


def run(outdir: pathlib.Path) -> None:
    outdir.mkdir(parents=True, exist_ok=True)
    jobs = [
        ("su2_tradeoff_half.csv", ["su2", "tradeoff", "--two-j", "1", "--grid", "0.01"]),
        ("su2_tradeoff_one.csv", ["su2", "tradeoff", "--two-j", "2", "--grid", "0.05"]),
    ]
    for name, args in jobs:
        path = outdir / name
        code = cli_main(args + ["--out", str(path)])
        if code != 0:
            raise SystemExit(code)
        print(f"wrote {path}")


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--outdir", type=pathlib.Path, default=pathlib.Path("figure_data"))
    run(parser.parse_args().outdir)
