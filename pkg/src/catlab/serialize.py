"""JSON / CSV writers shared by the CLI.

Complex numbers are encoded as ``[re, im]``. Every file carries the
convention block so it can be read without outside knowledge.
"""

from __future__ import annotations

import csv
import datetime as _dt
import json
from pathlib import Path

import numpy as np

from . import __version__

CONVENTIONS = {
    "state_ordering": "internal-major: |e> block at indices 0..dim-1, then |g> block at dim..2dim-1",
    "internal_basis": "|e> = (1, 0), |g> = (0, 1)",
    "position": "x = (a + a_dag)/sqrt(2); R = x/sqrt(2) = (a + a_dag)/2",
    "phase_gauge": "conditional states: first amplitude above 1e-12 of max made real positive; "
    "psi2/psi3 keep the exp(-i xi^2 t) global phase",
    "complex_encoding": "[re, im]",
    "units": "dimensionless trap units (time in 1/nu, frequencies in nu)",
}


def encode(obj):
    """Recursively turn numpy / complex values into JSON-ready Python objects."""
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return encode(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if hasattr(obj, "value") and isinstance(getattr(obj, "value"), str):  # str enums
        return obj.value
    return obj


def write_json(path: Path, payload: dict) -> None:
    """Write ``{"conventions", "payload", "meta"}``; only ``meta`` varies between identical runs."""
    doc = {
        "conventions": CONVENTIONS,
        "payload": encode(payload),
        "meta": {"catlab_version": __version__, "created_utc": _dt.datetime.now(_dt.timezone.utc).isoformat()},
    }
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        fh.write("# conventions: " + json.dumps(CONVENTIONS, sort_keys=True) + "\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(v) for v in row])


def _cell(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return v


def read_csv(path: Path) -> tuple[list[str], list[list[str]]]:
    with Path(path).open() as fh:
        lines = [line for line in fh if not line.startswith("#")]
    reader = list(csv.reader(lines))
    return reader[0], reader[1:]
