"""Challenge-style CSV files.

* pairs:       ``SampleID,A,B``; A and B double-quoted, space-separated values
* publicinfo:  ``SampleID,A type,B type`` with Numerical / Categorical / Binary
* target:      ``SampleID,Target`` with Target in {-1, 0, 1}
* predictions: ``SampleID,Target`` with a real score
"""

from __future__ import annotations

import csv
import math
from pathlib import Path
from typing import Sequence

import numpy as np

from .data_model import LabeledDataset, Pair, Variable, VariableKind


class DataFormatError(ValueError):
    """Malformed input file; the message names the file and the offending row."""


def _rows(path, expected_header: Sequence[str]):
    path = Path(path)
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise DataFormatError(f"{path}: cannot open ({exc.strerror})") from exc
    with fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != list(expected_header):
            raise DataFormatError(f"{path}: expected header {','.join(expected_header)}, got {header}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(expected_header):
                raise DataFormatError(f"{path}, line {lineno}: expected {len(expected_header)} fields")
            yield lineno, [c.strip() for c in row]


def _parse_values(text: str, where: str) -> list[float]:
    tokens = text.split()
    if not tokens:
        raise DataFormatError(f"{where}: no values")
    try:
        values = [float(t) for t in tokens]
    except ValueError as exc:
        raise DataFormatError(f"{where}: {exc}") from None
    if not all(math.isfinite(v) for v in values):
        raise DataFormatError(f"{where}: missing or non-finite value")
    return values


def read_pairs(path) -> dict[str, tuple[list[float], list[float]]]:
    out = {}
    for lineno, (sid, a, b) in _rows(path, ("SampleID", "A", "B")):
        where = f"{path}, line {lineno} ({sid})"
        if sid in out:
            raise DataFormatError(f"{where}: duplicate SampleID")
        va, vb = _parse_values(a, where + " column A"), _parse_values(b, where + " column B")
        if len(va) != len(vb):
            raise DataFormatError(f"{where}: A has {len(va)} values but B has {len(vb)}")
        out[sid] = (va, vb)
    return out


def read_publicinfo(path) -> dict[str, tuple[VariableKind, VariableKind]]:
    out = {}
    for lineno, (sid, ta, tb) in _rows(path, ("SampleID", "A type", "B type")):
        try:
            out[sid] = (VariableKind.parse(ta), VariableKind.parse(tb))
        except ValueError as exc:
            raise DataFormatError(f"{path}, line {lineno} ({sid}): {exc}") from None
    return out


def read_target(path) -> dict[str, int]:
    out = {}
    for lineno, (sid, target) in _rows(path, ("SampleID", "Target")):
        try:
            value = float(target)
        except ValueError:
            raise DataFormatError(f"{path}, line {lineno} ({sid}): bad target {target!r}") from None
        if value not in (-1.0, 0.0, 1.0):
            raise DataFormatError(f"{path}, line {lineno} ({sid}): target must be -1, 0 or 1")
        out[sid] = int(value)
    return out


def read_predictions(path) -> dict[str, float]:
    out = {}
    for lineno, (sid, score) in _rows(path, ("SampleID", "Target")):
        try:
            value = float(score)
        except ValueError:
            raise DataFormatError(f"{path}, line {lineno} ({sid}): bad score {score!r}") from None
        if not math.isfinite(value):
            raise DataFormatError(f"{path}, line {lineno} ({sid}): non-finite score")
        out[sid] = value
    return out


def load_dataset(pairs_file, publicinfo_file, target_file=None) -> LabeledDataset:
    """Read a dataset; categorical values become dense codes in order of first appearance."""
    raw = read_pairs(pairs_file)
    kinds = read_publicinfo(publicinfo_file)
    targets = read_target(target_file) if target_file is not None else None
    pairs, labels = [], []
    for sid, (va, vb) in raw.items():
        if sid not in kinds:
            raise DataFormatError(f"{publicinfo_file}: no types for {sid}")
        ka, kb = kinds[sid]
        try:
            pair = Pair(sid, Variable.from_raw(va, ka), Variable.from_raw(vb, kb))
        except ValueError as exc:
            raise DataFormatError(f"{pairs_file} ({sid}): {exc}") from None
        pairs.append(pair)
        if targets is not None:
            if sid not in targets:
                raise DataFormatError(f"{target_file}: no target for {sid}")
            labels.append(targets[sid])
    return LabeledDataset(tuple(pairs), tuple(labels) if targets is not None else None)


def format_value(v: float) -> str:
    """Shortest text that reads back to the same double; integers without a decimal point."""
    v = float(v)
    if v.is_integer() and abs(v) < 1e15:
        return str(int(v))
    return repr(v)


def _write(path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, quoting=csv.QUOTE_MINIMAL, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def write_dataset(ds: LabeledDataset, pairs_file, publicinfo_file, target_file=None) -> None:
    with open(pairs_file, "w", newline="") as fh:
        fh.write("SampleID,A,B\n")
        for p in ds.pairs:
            a = " ".join(format_value(v) for v in p.a.values)
            b = " ".join(format_value(v) for v in p.b.values)
            fh.write(f'{p.id},"{a}","{b}"\n')
    _write(publicinfo_file, ["SampleID", "A type", "B type"],
           ([p.id, p.a.kind.value, p.b.kind.value] for p in ds.pairs))
    if target_file is not None:
        if not ds.is_labeled:
            raise ValueError("dataset has no labels to write")
        write_target(target_file, ds.ids, ds.labels)


def write_target(path, ids: Sequence[str], labels: Sequence[int]) -> None:
    _write(path, ["SampleID", "Target"], ([i, str(int(c))] for i, c in zip(ids, labels)))


def write_predictions(path, ids: Sequence[str], scores: Sequence[float]) -> None:
    _write(path, ["SampleID", "Target"], ([i, repr(float(s))] for i, s in zip(ids, np.asarray(scores))))
