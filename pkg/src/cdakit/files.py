"""CSV formats for arrays and test outcomes, and access to bundled fixtures."""

from __future__ import annotations

import csv
import io
from importlib import resources
from pathlib import Path

from .model import ModelError, SutModel, TestArray, load_model, parse_model


def array_to_csv(array: TestArray) -> str:
    """Header of parameter names, then one line of value names per row."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([p.name for p in array.model.parameters])
    for r in array.rows:
        w.writerow(array.model.row_names(r))
    return buf.getvalue()


def array_from_csv(model: SutModel, text: str, check: bool = True) -> TestArray:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ModelError("array CSV is empty (a header line is required)") from None
    header = [h.strip() for h in header]
    order = [model.param_index(h) for h in header]
    if sorted(order) != list(range(model.k)):
        raise ModelError(f"array CSV header {header} does not list every parameter exactly once")
    rows = []
    for lineno, rec in enumerate(reader, start=2):
        if not rec or all(not c.strip() for c in rec):
            continue
        if len(rec) != model.k:
            raise ModelError(f"line {lineno}: expected {model.k} fields, got {len(rec)}")
        row = [0] * model.k
        for p, cell in zip(order, rec):
            row[p] = model.value_index(p, cell.strip())
        rows.append(row)
    return TestArray(model, rows, check=check)


def write_array(path, array: TestArray) -> None:
    Path(path).write_text(array_to_csv(array), encoding="utf-8")


def read_array(model: SutModel, path, check: bool = True) -> TestArray:
    return array_from_csv(model, Path(path).read_text(encoding="utf-8"), check=check)


def outcome_to_csv(outcome) -> str:
    lines = ["row,verdict"]
    lines.extend(f"{i + 1},{v.value}" for i, v in enumerate(outcome.verdicts))
    return "\n".join(lines) + "\n"


def outcome_from_csv(text: str, n_rows: int | None = None):
    """Parse ``row,verdict`` lines (rows numbered from 1, verdict PASS/FAIL)."""
    from .localize import Outcome, Verdict

    reader = csv.reader(io.StringIO(text))
    seen = {}
    for lineno, rec in enumerate(reader, start=1):
        if not rec or all(not c.strip() for c in rec):
            continue
        if lineno == 1 and rec[0].strip().lower() == "row":
            continue
        if len(rec) != 2:
            raise ValueError(f"line {lineno}: expected 'row,verdict'")
        try:
            idx = int(rec[0])
            verdict = Verdict(rec[1].strip().upper())
        except ValueError:
            raise ValueError(f"line {lineno}: bad record {rec!r}") from None
        if idx < 1 or idx in seen:
            raise ValueError(f"line {lineno}: row {idx} is out of range or repeated")
        seen[idx] = verdict
    n = n_rows if n_rows is not None else max(seen, default=0)
    if sorted(seen) != list(range(1, n + 1)):
        raise ValueError(f"outcome must list rows 1..{n} exactly once")
    return Outcome(tuple(seen[i] for i in range(1, n + 1)))


def fixture_path(name: str) -> Path:
    return Path(str(resources.files("cdakit") / "data" / name))


def fixtures_dir() -> Path:
    return fixture_path("")


def running_example(constrained: bool = True) -> SutModel:
    name = "running_example.sut" if constrained else "running_example_unconstrained.sut"
    return load_model(fixture_path(name))


def fixture_array(name: str, model: SutModel | None = None) -> TestArray:
    """Load a bundled figure array, e.g. ``fixture_array("fig4c_cda_1_2")``.

    The unconstrained arrays (names starting ``fig2``) are read against the
    unconstrained running example by default.
    """
    if model is None:
        model = running_example(constrained=not name.startswith("fig2"))
    if not name.endswith(".csv"):
        name += ".csv"
    return read_array(model, fixture_path(name))


__all__ = [
    "array_from_csv",
    "array_to_csv",
    "fixture_array",
    "fixture_path",
    "fixtures_dir",
    "outcome_from_csv",
    "outcome_to_csv",
    "parse_model",
    "read_array",
    "running_example",
    "write_array",
]
