"""UCR-style file ingestion and result serialization."""

from __future__ import annotations

import csv
import json
import math
from collections import Counter
from dataclasses import asdict, is_dataclass
from pathlib import Path

import numpy as np

from .core import AlignmentResult, LabeledDataset, ValidationError, WarpCoefficients, WarpingFunctions


class DataIOError(OSError):
    """File could not be read or written."""


def interpolate_to_length(x, length: int) -> np.ndarray:
    """Linearly resample ``x`` onto ``length`` uniform points keeping both ends."""
    x = np.asarray(x, dtype=np.float64)
    if x.size == length:
        return x.copy()
    src = np.linspace(0.0, 1.0, x.size)
    dst = np.linspace(0.0, 1.0, length)
    out = np.interp(dst, src, x)
    out[0], out[-1] = x[0], x[-1]
    return out


def _parse_label(tok: str):
    try:
        return int(tok)
    except ValueError:
        pass
    try:
        f = float(tok)
    except ValueError:
        return None
    return int(f) if math.isfinite(f) and f.is_integer() else None


def _read_rows(path: Path) -> tuple[list[list[str]], str]:
    try:
        text = path.read_text()
    except OSError as exc:
        raise DataIOError(f"cannot read {path}: {exc.strerror or exc}") from exc
    lines = [(i, ln.strip()) for i, ln in enumerate(text.splitlines(), start=1) if ln.strip()]
    if not lines:
        raise ValidationError(f"{path}: file is empty")
    first = lines[0][1]
    if "\t" in first:
        delim, other = "\t", ","
    elif "," in first:
        delim, other = ",", "\t"
    else:
        raise ValidationError(f"{path}: line {lines[0][0]} has no comma or tab delimiter")
    rows = []
    for lineno, ln in lines:
        if other in ln:
            raise ValidationError(f"{path}: line {lineno} mixes comma and tab delimiters", index=lineno)
        rows.append((lineno, [tok.strip() for tok in ln.split(delim)]))
    return rows, delim


def load_ucr(path, znorm: bool = False) -> tuple[LabeledDataset, dict]:
    """Read a label-first delimited file.

    Rows of differing length are linearly interpolated to the longest one.
    Returns the dataset and a manifest describing what was loaded.
    """
    path = Path(path)
    rows, delim = _read_rows(path)
    raw_labels, values = [], []
    for lineno, toks in rows:
        if len(toks) < 3:
            raise ValidationError(f"{path}: line {lineno} needs a label and at least 2 values", index=lineno)
        raw_labels.append(toks[0])
        vals = []
        for col, tok in enumerate(toks[1:], start=2):
            try:
                v = float(tok)
            except ValueError:
                raise ValidationError(
                    f"{path}: cannot parse {tok!r} at line {lineno}, column {col}", index=(lineno, col)
                ) from None
            if not math.isfinite(v):
                raise ValidationError(f"{path}: non-finite value at line {lineno}, column {col}", index=(lineno, col))
            vals.append(v)
        values.append(np.array(vals))

    parsed = [_parse_label(tok) for tok in raw_labels]
    if all(p is not None for p in parsed):
        labels = parsed
        label_map = None
    else:
        label_map = {}
        for tok in raw_labels:
            label_map.setdefault(tok, len(label_map))
        labels = [label_map[tok] for tok in raw_labels]

    lengths = {v.size for v in values}
    length = max(lengths)
    interpolated = len(lengths) > 1
    if interpolated:
        values = [interpolate_to_length(v, length) for v in values]
    X = np.vstack(values)
    if znorm:
        sd = X.std(axis=1, keepdims=True)
        X = (X - X.mean(axis=1, keepdims=True)) / np.where(sd > 0, sd, 1.0)
    dataset = LabeledDataset(X, labels)
    manifest = {
        "path": str(path),
        "rows": len(values),
        "length": length,
        "delimiter": "tab" if delim == "\t" else "comma",
        "class_counts": {str(k): v for k, v in sorted(Counter(labels).items())},
        "interpolated": interpolated,
        "znorm": znorm,
        "label_map": label_map,
    }
    return dataset, manifest


def _plain(obj):
    """Convert results and reports into JSON-ready builtins."""
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, WarpingFunctions):
        return obj.tau.tolist()
    if isinstance(obj, WarpCoefficients):
        return obj.a.tolist()
    if is_dataclass(obj) and not isinstance(obj, type):
        return {k: _plain(v) for k, v in vars(obj).items()}
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    return obj


def result_to_dict(result: AlignmentResult) -> dict:
    if not isinstance(result, AlignmentResult):
        raise ValidationError(f"expected an AlignmentResult, got {type(result).__name__}")
    return {
        "centroid": result.centroid.tolist(),
        "synchronized": result.synchronized.tolist(),
        "warps": result.warps.tau.tolist(),
        "coefficients": result.coefficients.a.tolist(),
        "loss_trace": result.loss_trace.tolist(),
        "final_loss": result.final_loss,
        "boundary_violations": result.boundary_violations,
        "config": _plain(result.config),
    }


def write_json(path, doc) -> None:
    _write_text(Path(path), json.dumps(doc, indent=1, allow_nan=False) + "\n")


def _write_text(path: Path, text: str) -> None:
    try:
        path.write_text(text)
    except OSError as exc:
        raise DataIOError(f"cannot write {path}: {exc.strerror or exc}") from exc


def write_csv_rows(path: Path, rows) -> None:
    """One CSV line per row, every number with 17 significant digits."""
    try:
        with path.open("w", newline="") as fh:
            w = csv.writer(fh)
            for row in rows:
                w.writerow([format(float(v), ".17g") for v in np.atleast_1d(row)])
    except OSError as exc:
        raise DataIOError(f"cannot write {path}: {exc.strerror or exc}") from exc


def csv_paths(path) -> dict[str, Path]:
    """Sibling files written by :func:`save_result` in CSV mode."""
    path = Path(path)
    stem = path.with_suffix("")
    return {part: stem.with_name(f"{stem.name}_{part}.csv") for part in ("centroid", "synchronized", "warps", "loss")}


def save_result(result, path, format: str = "json") -> list[Path]:
    """Write an alignment result (or a list of reports) to ``path``.

    JSON writes one document. CSV writes ``<stem>_centroid.csv`` (one row),
    ``<stem>_synchronized.csv`` and ``<stem>_warps.csv`` (one row per signal)
    and ``<stem>_loss.csv`` (one value per line). Returns the paths written.
    """
    path = Path(path)
    if format not in ("json", "csv"):
        raise ValueError(f"unknown format {format!r}")
    if isinstance(result, AlignmentResult):
        if result.loss_trace.size == 0:
            raise ValidationError("refusing to save a result with an empty loss trace")
        doc = result_to_dict(result)
    else:
        doc = _plain(result)
    if format == "json":
        write_json(path, doc)
        return [path]
    if not isinstance(result, AlignmentResult):
        return [_save_reports_csv(doc, path)]
    paths = csv_paths(path)
    write_csv_rows(paths["centroid"], [result.centroid])
    write_csv_rows(paths["synchronized"], result.synchronized)
    write_csv_rows(paths["warps"], result.warps.tau)
    write_csv_rows(paths["loss"], result.loss_trace[:, None])
    return list(paths.values())


def _save_reports_csv(doc, path: Path) -> Path:
    records = doc if isinstance(doc, list) else [doc]
    flat = []
    for rec in records:
        flat.append({k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in rec.items()})
    fields = list(dict.fromkeys(k for rec in flat for k in rec))
    try:
        with path.open("w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=fields)
            w.writeheader()
            w.writerows(flat)
    except OSError as exc:
        raise DataIOError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return path


def load_result(path) -> AlignmentResult:
    """Read back a JSON document written by :func:`save_result`."""
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except OSError as exc:
        raise DataIOError(f"cannot read {path}: {exc.strerror or exc}") from exc
    return AlignmentResult(
        synchronized=np.array(doc["synchronized"]),
        centroid=np.array(doc["centroid"]),
        loss_trace=np.array(doc["loss_trace"]),
        warps=WarpingFunctions(np.array(doc["warps"])),
        coefficients=WarpCoefficients(np.array(doc["coefficients"])),
        final_loss=doc.get("final_loss", float("nan")),
        boundary_violations=doc.get("boundary_violations", 0),
        config=doc.get("config", {}),
    )


def load_series(path) -> np.ndarray:
    """Read a candidate series: a result JSON (its centroid) or a one-row CSV/TSV."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise DataIOError(f"cannot read {path}: {exc.strerror or exc}") from exc
    if path.suffix == ".json":
        doc = json.loads(text)
        return np.asarray(doc["centroid"] if isinstance(doc, dict) else doc, dtype=np.float64)
    first = next((ln for ln in text.splitlines() if ln.strip()), "")
    delim = "\t" if "\t" in first else ","
    try:
        return np.array([float(tok) for tok in first.split(delim)])
    except ValueError as exc:
        raise ValidationError(f"{path}: {exc}") from None


def report_to_dict(report) -> dict:
    return _plain(asdict(report)) if is_dataclass(report) else _plain(report)
