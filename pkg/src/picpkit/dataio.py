"""CSV dataset ingestion.

A dataset is a per-point table of prediction errors E and predicted
uncertainties uE.  Three header layouts are accepted (case, underscore and
hyphen insensitive):

    Z                   z-scores directly; stored with uE = 1, E = Z
    E, uE               errors and uncertainties
    y_ref, y_pred, uE   errors computed as y_ref - y_pred

Files carrying both E and y_ref/y_pred are cross-checked for consistency.
Lines starting with '#' and blank lines are skipped; any parse problem is
reported with its 1-based line number.  Extra columns are ignored.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class DatasetError(ValueError):
    """Raised when a dataset file cannot be parsed or fails validation."""


@dataclass(frozen=True)
class Dataset:
    id: str
    E: np.ndarray
    uE: np.ndarray
    y_ref: np.ndarray | None = None
    y_pred: np.ndarray | None = None
    source_path: str = ""

    def __post_init__(self):
        e = np.asarray(self.E, dtype=float).ravel()
        u = np.asarray(self.uE, dtype=float).ravel()
        object.__setattr__(self, "E", e)
        object.__setattr__(self, "uE", u)
        if e.size < 1:
            raise DatasetError(f"dataset {self.id!r} is empty")
        if e.size != u.size:
            raise DatasetError(
                f"dataset {self.id!r}: {e.size} errors vs {u.size} uncertainties"
            )
        if not np.all(np.isfinite(e)):
            raise DatasetError(f"dataset {self.id!r}: non-finite errors")
        if not np.all(np.isfinite(u) & (u > 0.0)):
            raise DatasetError(f"dataset {self.id!r}: uncertainties must be > 0")
        for name in ("y_ref", "y_pred"):
            v = getattr(self, name)
            if v is not None:
                v = np.asarray(v, dtype=float).ravel()
                object.__setattr__(self, name, v)
                if v.size != e.size:
                    raise DatasetError(f"dataset {self.id!r}: {name} length mismatch")
        if self.y_ref is not None and self.y_pred is not None:
            resid = self.y_ref - self.y_pred - self.E
            scale = np.maximum(np.abs(self.E), 1.0)
            if np.any(np.abs(resid) > 1e-9 * scale):
                raise DatasetError(
                    f"dataset {self.id!r}: E does not equal y_ref - y_pred"
                )

    @property
    def m(self) -> int:
        return int(self.E.size)

    @property
    def z(self) -> np.ndarray:
        return self.E / self.uE


def _normalize(name: str) -> str:
    return name.strip().lower().replace("_", "").replace("-", "")


_KNOWN = ("z", "e", "ue", "yref", "ypred")


def _pick_columns(recognized: set[str]) -> set[str]:
    if {"e", "ue"} <= recognized:
        cols = {"e", "ue"}
        if {"yref", "ypred"} <= recognized:
            cols |= {"yref", "ypred"}
        return cols
    if {"yref", "ypred", "ue"} <= recognized:
        return {"yref", "ypred", "ue"}
    if "z" in recognized:
        return {"z"}
    raise KeyError


def load_dataset(path, dataset_id: str | None = None) -> Dataset:
    """Read one CSV file into a Dataset; id defaults to the file stem."""
    path = Path(path)
    if not path.is_file():
        raise DatasetError(f"no such dataset file: {path}")
    ds_id = dataset_id if dataset_id is not None else path.stem

    header = None
    keep: dict[str, int] = {}
    columns: dict[str, list[float]] = {}
    line_of_row: list[int] = []
    with path.open(newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not cell.strip() for cell in row):
                continue
            if row[0].lstrip().startswith("#"):
                continue
            if header is None:
                header = [_normalize(c) for c in row]
                positions = {}
                for pos, name in enumerate(header):
                    if name in _KNOWN and name not in positions:
                        positions[name] = pos
                try:
                    wanted = _pick_columns(set(positions))
                except KeyError:
                    raise DatasetError(
                        f"{path}:{lineno}: header {row!r} matches none of the "
                        "accepted column sets {Z}, {E,uE}, {y_ref,y_pred,uE}"
                    ) from None
                keep = {name: positions[name] for name in wanted}
                columns = {name: [] for name in wanted}
                continue
            line_of_row.append(lineno)
            for name, pos in keep.items():
                if pos >= len(row):
                    raise DatasetError(
                        f"{path}:{lineno}: row has {len(row)} cells, "
                        f"column {name!r} needs {pos + 1}"
                    )
                cell = row[pos].strip()
                try:
                    value = float(cell)
                except ValueError:
                    raise DatasetError(
                        f"{path}:{lineno}: non-numeric value {cell!r} "
                        f"in column {name!r}"
                    ) from None
                if not np.isfinite(value):
                    raise DatasetError(
                        f"{path}:{lineno}: non-finite value in column {name!r}"
                    )
                columns[name].append(value)

    if header is None:
        raise DatasetError(f"{path}: no header row found")
    if not line_of_row:
        raise DatasetError(f"{path}: no data rows")

    if "z" in columns:
        z = np.asarray(columns["z"])
        return Dataset(id=ds_id, E=z, uE=np.ones_like(z), source_path=str(path))

    u = np.asarray(columns["ue"])
    nonpos = np.flatnonzero(~(u > 0.0))
    if nonpos.size:
        raise DatasetError(
            f"{path}:{line_of_row[int(nonpos[0])]}: non-positive uncertainty"
        )
    y_ref = np.asarray(columns["yref"]) if "yref" in columns else None
    y_pred = np.asarray(columns["ypred"]) if "ypred" in columns else None
    if "e" in columns:
        e = np.asarray(columns["e"])
    else:
        e = y_ref - y_pred
    return Dataset(
        id=ds_id, E=e, uE=u, y_ref=y_ref, y_pred=y_pred, source_path=str(path)
    )


def load_datasets(paths) -> list[Dataset]:
    return [load_dataset(p) for p in paths]
