#!/usr/bin/env python3
"""Emit the data behind the energy-conservation trade-off figure.

Sweeps the qubit population grid (lattice constant 0.02) with
optimal-unitarity channels; each row carries (delta, u) plus the unitarity
cap.  Plot delta against u to see the cloud hugging the bound from below.
"""

import argparse
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from noetherlab.cli import main as cli_main  # noqa: E402


def run(outdir: pathlib.Path) -> None:
    outdir.mkdir(parents=True, exist_ok=True)
    path = outdir / "u1_tradeoff_qubit.csv"
    code = cli_main(["u1", "tradeoff", "--levels", "0,1", "--grid", "0.02",
                     "--out", str(path)])
    if code != 0:
        raise SystemExit(code)
    print(f"wrote {path}")


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--outdir", type=pathlib.Path, default=pathlib.Path("figure_data"))
    run(parser.parse_args().outdir)
