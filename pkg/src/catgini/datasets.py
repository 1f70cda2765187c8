"""
Delimited-text input and output for labelled samples, plus bundled data.

Columns are selected by header name when the file has a header and by
0-based index otherwise (indices are accepted with a header too).
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import InvalidInputError
from .gmd import LabeledSample

IRIS_FEATURES = ("Sepal.Length", "Sepal.Width", "Petal.Length", "Petal.Width")
GILGAI_DEPTHS = ("00", "30", "80")
GILGAI_DEPTH_LABELS = {"00": "0-10", "30": "30-40", "80": "80-90"}
GILGAI_FEATURES = {"pH": "pH", "ec": "e", "cc": "c"}


class ParseError(InvalidInputError):
    """Malformed input file; the message carries the row and column."""


@dataclass(frozen=True)
class DatasetFile:
    path: str
    label: str | int
    features: tuple | None = None
    delimiter: str = ","
    header: bool = True


def _resolve(spec, header: list[str] | None, what: str) -> int:
    if isinstance(spec, int) or (isinstance(spec, str) and spec.lstrip("-").isdigit()
                                 and (header is None or spec not in header)):
        idx = int(spec)
        width = len(header) if header is not None else None
        if idx < 0 or (width is not None and idx >= width):
            raise InvalidInputError(f"{what} column index {idx} out of range")
        return idx
    if header is None:
        raise InvalidInputError(f"{what} column {spec!r} given by name but the file has no header")
    if spec not in header:
        raise InvalidInputError(f"{what} column {spec!r} not found; columns are {header}")
    return header.index(spec)


def _label_value(cell: str):
    try:
        return int(cell)
    except ValueError:
        return cell


def parse_rows(rows, label=-1, features=None, header: bool = True, source: str = "<data>"):
    """Split parsed CSV rows into a float feature matrix and a label list.

    Returns ``(x, labels, feature_names)``.
    """
    rows = [r for r in rows if r and any(c.strip() for c in r)]
    if header:
        if not rows:
            raise ParseError(f"{source}: empty file")
        names = [c.strip() for c in rows[0]]
        body, first_row = rows[1:], 2
    else:
        names, body, first_row = None, rows, 1
    if not body:
        raise ParseError(f"{source}: no data rows")
    width = len(names) if names is not None else len(body[0])
    if isinstance(label, str) and label.lstrip("-").isdigit() and (names is None or label not in names):
        label = int(label)
    if isinstance(label, int) and label < 0:
        label += width
    li = _resolve(label, names, "label")
    if features is None:
        fi = [j for j in range(width) if j != li]
    else:
        fi = [_resolve(f, names, "feature") for f in features]
    if li in fi:
        raise InvalidInputError("the label column is also listed as a feature")
    if not fi:
        raise InvalidInputError("no feature columns selected")

    x = np.empty((len(body), len(fi)))
    labels = []
    for r, row in enumerate(body):
        line = first_row + r
        if len(row) != width:
            raise ParseError(f"{source}: row {line} has {len(row)} fields, expected {width}")
        for j, col in enumerate(fi):
            cell = row[col].strip()
            try:
                value = float(cell)
            except ValueError:
                raise ParseError(
                    f"{source}: row {line}, column {col + 1}: non-numeric value {cell!r}"
                ) from None
            if not math.isfinite(value):
                raise ParseError(f"{source}: row {line}, column {col + 1}: non-finite value {cell!r}")
            x[r, j] = value
        labels.append(row[li].strip())
    converted = [_label_value(v) for v in labels]
    if all(isinstance(v, int) for v in converted):
        labels = converted
    feature_names = [names[j] for j in fi] if names is not None else [str(j) for j in fi]
    return x, labels, feature_names


def read_csv(path, label=-1, features=None, *, delimiter: str = ",", header: bool = True) -> LabeledSample:
    """Read a labelled sample from a delimited UTF-8 text file.

    Parameters
    ----------
    path : str or Path
    label : str or int
        Label column; negative indices count from the end.
    features : sequence of str or int, optional
        Feature columns; default all columns except the label.
    delimiter : str
    header : bool
        Whether the first row holds column names.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh, delimiter=delimiter))
    x, labels, _ = parse_rows(rows, label, features, header, str(path))
    return LabeledSample(x, labels)


def write_csv(sample: LabeledSample, path=None, *, feature_names=None, label_name: str = "label",
              delimiter: str = ","):
    """Write ``sample`` with a header row; the label column comes last.

    Floats are written with ``repr`` so reading the file back is exact.
    Returns the text when ``path`` is None.
    """
    names = list(feature_names) if feature_names is not None else [f"x{j + 1}" for j in range(sample.d)]
    if len(names) != sample.d:
        raise InvalidInputError("feature_names length does not match the sample dimension")
    buf = io.StringIO()
    w = csv.writer(buf, delimiter=delimiter, lineterminator="\n")
    w.writerow(names + [label_name])
    labels = [sample.labels[c] for c in sample.codes]
    for row, lab in zip(sample.x, labels):
        w.writerow([repr(float(v)) for v in row] + [lab])
    text = buf.getvalue()
    if path is None:
        return text
    Path(path).write_text(text, encoding="utf-8")
    return None


def load_iris(features=IRIS_FEATURES) -> LabeledSample:
    """The 150-row iris data bundled with the package, labelled by species."""
    text = (resources.files("catgini") / "data" / "iris.csv").read_text(encoding="utf-8")
    x, labels, _ = parse_rows(list(csv.reader(io.StringIO(text))), "Species", list(features),
                              True, "iris.csv")
    return LabeledSample(x, labels)


def load_gilgai(path, features=("pH", "ec", "cc"), *, delimiter: str = ",") -> LabeledSample:
    """Gilgai soil survey in the layout of the R ``MASS::gilgai`` data frame.

    The wide file has columns ``pH00 pH30 pH80 e00 e30 e80 c00 c30 c80``
    (others are ignored). It is stacked into one row per (site, depth)
    labelled ``0-10``, ``30-40`` or ``80-90``, with features named
    ``pH``, ``ec`` and ``cc``.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh, delimiter=delimiter) if r]
    if not rows:
        raise ParseError(f"{path}: empty file")
    header = [c.strip().strip('"') for c in rows[0]]
    unknown = [f for f in features if f not in GILGAI_FEATURES]
    if unknown:
        raise InvalidInputError(f"unknown gilgai feature(s) {unknown}; choose from {list(GILGAI_FEATURES)}")
    blocks, labels = [], []
    for depth in GILGAI_DEPTHS:
        cols = [GILGAI_FEATURES[f] + depth for f in features]
        missing = [c for c in cols if c not in header]
        if missing:
            raise ParseError(f"{path}: missing gilgai column(s) {missing}")
        # any non-feature column serves as the (discarded) label
        spare = next((j for j, h in enumerate(header) if h not in cols), None)
        if spare is None:
            body = [r + ["-"] for r in rows]
            spare = len(header)
        else:
            body = rows
        x, _, _ = parse_rows(body, spare, cols, True, str(path))
        blocks.append(x)
        labels += [GILGAI_DEPTH_LABELS[depth]] * x.shape[0]
    return LabeledSample(np.vstack(blocks), labels)


def load_dataset(spec: str, label=None, features=None, *, delimiter: str = ",", header: bool = True):
    """Resolve ``"iris"`` to the bundled data, anything else to a file path."""
    if spec == "iris" and not Path(spec).exists():
        feats = IRIS_FEATURES if features is None else tuple(
            IRIS_FEATURES[int(f)] if str(f).isdigit() else f for f in features
        )
        unknown = [f for f in feats if f not in IRIS_FEATURES]
        if unknown:
            raise InvalidInputError(f"unknown iris feature(s) {unknown}; choose from {list(IRIS_FEATURES)}")
        return load_iris(feats)
    return read_csv(spec, -1 if label is None else label, features, delimiter=delimiter, header=header)
