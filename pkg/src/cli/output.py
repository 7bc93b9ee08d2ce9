"""Renderers for the three output modes: plain text, CSV and JSON."""
import csv
import json
from typing import IO, Iterable, List, Sequence

from pydantic import BaseModel

from src import __version__
from src.api.schemas.common import Meta
from src.api.schemas.experiments import CSV_HEADER, EstimateOut

SWEEP_CSV_HEADER = "n,pattern_r,pattern_s,p_hat,half_width,trials,status,seed,lower_curve,upper_curve"
BOUNDS_CSV_HEADER = "n,lower,theorem_lower,general_lower,upper,upper_proven,known_reference"


def yes_no(value: bool) -> str:
    return "true" if value else "false"


def number(value) -> str:
    """repr for floats so values survive a round trip; empty for None."""
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_json(payload: BaseModel, argv: Sequence[str], stream: IO[str]):
    meta = Meta(version=__version__, command=" ".join(argv))
    document = {"meta": meta.model_dump(mode="json")}
    document.update(payload.model_dump(mode="json"))
    stream.write(json.dumps(document, indent=2))
    stream.write("\n")


def write_csv(header: str, rows: Iterable[Sequence], stream: IO[str]):
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header.split(","))
    for row in rows:
        writer.writerow([number(v) for v in row])


def estimate_rows(estimates: List[EstimateOut]) -> List[List]:
    return [
        [e.n, e.pattern_r, e.pattern_s, e.p, e.trials, e.percolated_fraction, e.ci_lo, e.ci_hi, e.seed]
        for e in estimates
    ]


def write_estimates_csv(estimates: List[EstimateOut], stream: IO[str]):
    write_csv(CSV_HEADER, estimate_rows(estimates), stream)


def write_lines(lines: Iterable[str], stream: IO[str]):
    for line in lines:
        stream.write(line)
        stream.write("\n")
