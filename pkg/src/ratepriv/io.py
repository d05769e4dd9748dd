"""Distribution-file parsing and deterministic machine-readable reports.

File format (UTF-8, human-auditable):
    line 1: ``X: <labels>``
    line 2: ``Y: <labels>``
    then |X| whitespace-separated rows of |Y| decimal reals.

Total mass must be 1 within 1e-6 (then renormalized exactly); zero-mass Y
columns are dropped with a warning. JSON is the canonical report format
(schema 1); CSV is a flat projection of the same key/value/unit/tolerance
rows.
"""
from __future__ import annotations

import hashlib
import json
import logging
from pathlib import Path

import numpy as np

from .errors import ValidationError
from .prob import JointDistribution

log = logging.getLogger(__name__)

FILE_MASS_TOL = 1e-6
SCHEMA_VERSION = 1


def parse_distribution(path, warnings: list[str] | None = None) -> JointDistribution:
    """Parse and validate a distribution file into a JointDistribution.

    Errors name the offending cell; zero-mass Y columns are dropped with a
    warning (they cannot affect any computed quantity).
    """
    text = Path(path).read_text(encoding="utf-8")
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if len(lines) < 3:
        raise ValidationError(f"{path}: expected two header lines and at least one row")
    if not lines[0].startswith("X:") or not lines[1].startswith("Y:"):
        raise ValidationError(f"{path}: headers must be 'X: <labels>' then 'Y: <labels>'")
    x_labels = tuple(lines[0][2:].split())
    y_labels = tuple(lines[1][2:].split())
    if not x_labels or not y_labels:
        raise ValidationError(f"{path}: empty alphabet in header")
    if len(set(x_labels)) != len(x_labels) or len(set(y_labels)) != len(y_labels):
        raise ValidationError(f"{path}: alphabet labels must be unique")
    body = lines[2:]
    if len(body) != len(x_labels):
        raise ValidationError(
            f"{path}: expected {len(x_labels)} rows for the X alphabet, found {len(body)}"
        )
    rows = []
    for i, ln in enumerate(body):
        parts = ln.split()
        if len(parts) != len(y_labels):
            raise ValidationError(
                f"{path}: row {i + 1} has {len(parts)} entries, expected {len(y_labels)}"
            )
        try:
            vals = [float(tok) for tok in parts]
        except ValueError as exc:
            raise ValidationError(f"{path}: row {i + 1}: {exc}") from None
        rows.append(vals)
    probs = np.array(rows, dtype=float)
    neg = np.argwhere(probs < 0)
    if neg.size:
        i, k = neg[0]
        raise ValidationError(
            f"{path}: negative entry {probs[i, k]} at row {i + 1}, column {k + 1}"
        )
    total = float(probs.sum())
    if abs(total - 1.0) > FILE_MASS_TOL:
        raise ValidationError(
            f"{path}: entries sum to {total}, outside 1 +/- {FILE_MASS_TOL}; not a distribution"
        )
    probs = probs / total
    null_cols = np.nonzero(probs.sum(axis=0) == 0)[0]
    if null_cols.size:
        dropped = [y_labels[c] for c in null_cols]
        msg = f"dropped zero-probability Y symbols: {dropped}"
        log.warning("%s: %s", path, msg)
        if warnings is not None:
            warnings.append(msg)
        keep = probs.sum(axis=0) > 0
        probs = probs[:, keep]
        probs = probs / probs.sum()
        y_labels = tuple(lbl for lbl, k in zip(y_labels, keep) if k)
    return JointDistribution(probs, x_labels, y_labels)


def file_digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def quantity(value: float, unit: str = "bits", tolerance: float | None = None, **extra):
    """One numeric report field; every number carries its unit and tolerance."""
    field = {"value": float(value), "unit": unit}
    field["tolerance"] = tolerance
    field.update(extra)
    return field


def build_report(command: str, path, seed, tolerances: dict, results: dict, warnings: list[str]) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "command": command,
        "inputs": {"path": str(path), "sha256": file_digest(path)},
        "seed": seed,
        "tolerances": tolerances,
        "results": results,
        "warnings": list(warnings),
    }


def render_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def _flatten(prefix: str, obj, rows: list[tuple[str, str, str, str]]):
    if isinstance(obj, dict):
        if "value" in obj and "unit" in obj:
            rows.append(
                (
                    prefix,
                    repr(obj["value"]),
                    str(obj["unit"]),
                    "" if obj.get("tolerance") is None else repr(obj["tolerance"]),
                )
            )
            for k, v in obj.items():
                if k not in ("value", "unit", "tolerance"):
                    _flatten(f"{prefix}.{k}", v, rows)
            return
        for k in sorted(obj):
            _flatten(f"{prefix}.{k}" if prefix else str(k), obj[k], rows)
    elif isinstance(obj, (list, tuple)):
        for i, v in enumerate(obj):
            _flatten(f"{prefix}[{i}]", v, rows)
    else:
        rows.append((prefix, repr(obj), "", ""))


def render_csv(report: dict) -> str:
    rows: list[tuple[str, str, str, str]] = []
    _flatten("", report, rows)
    out = ["key,value,unit,tolerance"]
    out.extend(",".join(r) for r in rows)
    return "\n".join(out) + "\n"
