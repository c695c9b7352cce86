"""Batch renderer: ``report-plots --in <run outdir> --out <figure dir>``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .render import render_growth, render_timeseries


def cli_main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="report-plots",
                                     description="render figures from run outputs")
    parser.add_argument("--in", dest="indir", required=True,
                        help="directory with series.csv / summary.json / verdict.json")
    parser.add_argument("--out", dest="outdir", required=True,
                        help="directory for the figures")
    args = parser.parse_args(argv)
    indir = Path(args.indir)
    series = indir / "series.csv"
    summary = indir / "summary.json"
    if not series.exists() or not summary.exists():
        print(f"error: {indir} lacks series.csv/summary.json", file=sys.stderr)
        return 1
    written = render_timeseries(series, summary, args.outdir)
    verdict = indir / "verdict.json"
    if verdict.exists():
        written.append(render_growth(verdict, series, args.outdir))
    for path in written:
        print(path)
    return 0


def main() -> None:
    sys.exit(cli_main(sys.argv[1:]))


if __name__ == "__main__":
    main()
