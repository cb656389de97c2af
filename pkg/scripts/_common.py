"""Shared helpers for the experiment scripts."""

import argparse
import csv
import sys


def parser(description: str, **defaults) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(description=description)
    p.add_argument("--max-trials", type=int, default=defaults.get("max_trials", 100_000))
    p.add_argument("--max-errors", type=int, default=defaults.get("max_errors", 200))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", help="CSV path (stdout when omitted)")
    return p


def write(rows: list[dict], path: str | None) -> None:
    f = open(path, "w", newline="") if path else sys.stdout
    writer = csv.DictWriter(f, fieldnames=list(rows[0]))
    writer.writeheader()
    writer.writerows(rows)
    if path:
        f.close()
