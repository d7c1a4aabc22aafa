"""Download the two bundled datasets and write them to src/basn/data/.

lakes.csv   latitude (degrees) of 69 world lakes
bmi.csv     body mass index of 202 Australian Institute of Sport athletes

Each download is checked against its known length, mean and standard
deviation before anything is written, so a wrong column or a changed
source is caught instead of silently bundled.  Use --lakes-file or
--bmi-file to ingest a copy obtained by other means.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
import urllib.request
from dataclasses import dataclass
from pathlib import Path

import numpy as np

DATA_DIR = Path(__file__).resolve().parents[1] / "src" / "basn" / "data"


@dataclass(frozen=True)
class Source:
    name: str
    url: str
    column: str
    n: int
    mean: float
    sd: float


SOURCES = {
    "lakes": Source("lakes", "http://users.stat.umn.edu/sandy/courses/8061/datasets/lakes.jsp",
                    "latitude", 69, 45.165, 9.549),
    "bmi": Source("bmi", "https://raw.githubusercontent.com/vincentarelbundock/Rdatasets/master/csv/DAAG/ais.csv",
                  "bmi", 202, 22.956, 2.857),
}
TOLERANCE = 0.005


def fetch(url: str, timeout: float) -> str:
    with urllib.request.urlopen(url, timeout=timeout) as resp:
        return resp.read().decode("utf-8", errors="replace")


def extract_column(text: str, column: str) -> np.ndarray:
    """Pull a named numeric column from comma-, tab- or whitespace-separated text."""
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    sample = "\n".join(lines[:5])
    try:
        dialect = csv.Sniffer().sniff(sample, delimiters=",\t;")
        rows = list(csv.reader(io.StringIO("\n".join(lines)), dialect))
    except csv.Error:
        rows = [ln.split() for ln in lines]
    header = [h.strip().strip('"').lower() for h in rows[0]]
    matches = [i for i, h in enumerate(header) if h == column or h.startswith(column[:3])]
    if not matches:
        raise ValueError(f"no column like {column!r} in header {header}")
    idx = matches[0]
    return np.array([float(r[idx]) for r in rows[1:] if len(r) > idx and r[idx].strip()])


def validate(src: Source, y: np.ndarray) -> None:
    mean, sd = float(y.mean()), float(y.std())
    problems = []
    if len(y) != src.n:
        problems.append(f"n = {len(y)}, expected {src.n}")
    if abs(mean - src.mean) > TOLERANCE:
        problems.append(f"mean = {mean:.4f}, expected {src.mean}")
    if abs(sd - src.sd) > TOLERANCE:
        problems.append(f"sd = {sd:.4f}, expected {src.sd}")
    if problems:
        raise ValueError(f"{src.name}: " + "; ".join(problems))


def write(src: Source, y: np.ndarray) -> Path:
    DATA_DIR.mkdir(parents=True, exist_ok=True)
    path = DATA_DIR / f"{src.name}.csv"
    path.write_text(src.column + "\n" + "\n".join(repr(float(v)) for v in y) + "\n")
    return path


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("names", nargs="*", help=f"subset of {sorted(SOURCES)}; default: all")
    ap.add_argument("--lakes-file", type=Path)
    ap.add_argument("--bmi-file", type=Path)
    ap.add_argument("--timeout", type=float, default=30.0)
    args = ap.parse_args(argv)
    unknown = set(args.names) - set(SOURCES)
    if unknown:
        ap.error(f"unknown dataset(s) {sorted(unknown)}")
    status = 0
    for name in args.names or sorted(SOURCES):
        src = SOURCES[name]
        local = getattr(args, f"{name}_file")
        try:
            text = local.read_text() if local else fetch(src.url, args.timeout)
            y = extract_column(text, src.column)
            validate(src, y)
        except (OSError, ValueError) as exc:
            print(f"{name}: not written ({exc})", file=sys.stderr)
            status = 1
            continue
        print(f"{name}: wrote {write(src, y)} ({len(y)} values)")
    return status


if __name__ == "__main__":
    raise SystemExit(main())
