"""Text formats: cloud CSV, diagram TSV and NN(k) TSV.

All files are UTF-8 with LF line endings. Lines starting with ``#`` are
headers or comments and are skipped on read.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .core import Diagram, PointCloud, as_cloud
from .errors import ParseError


def format_scale(value: float) -> str:
    """Shortest text that reads back to the same float; ``inf`` for infinity.

    Integral values print without a trailing ``.0`` so ``2.0`` becomes ``2``.
    """
    value = float(value)
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    if value == 0:
        return "0"
    if value.is_integer() and abs(value) < 1e15:
        return str(int(value))
    return repr(value)


def parse_scale(text: str) -> float:
    text = text.strip()
    if text.lower() in ("inf", "+inf", "infinity"):
        return math.inf
    value = float(text)
    if math.isnan(value):
        raise ValueError("NaN is not a scale")
    return value


def _lines(source) -> list[str]:
    if isinstance(source, (str, Path)):
        return Path(source).read_text(encoding="utf-8").splitlines()
    return source.read().splitlines()


def parse_cloud(lines: list[str]) -> PointCloud:
    rows = []
    width = None
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = [f.strip() for f in line.split(",")]
        try:
            row = [float(f) for f in fields]
        except ValueError:
            raise ParseError(f"non-numeric coordinate in {raw!r}", line=lineno) from None
        if not all(math.isfinite(x) for x in row):
            raise ParseError(f"non-finite coordinate in {raw!r}", line=lineno)
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ParseError(f"expected {width} coordinates, got {len(row)}", line=lineno)
        rows.append(row)
    if not rows:
        raise ParseError("cloud file contains no points")
    return PointCloud(np.array(rows, dtype=float))


def read_cloud(source) -> PointCloud:
    return parse_cloud(_lines(source))


def write_cloud(cloud, dest) -> None:
    cloud = as_cloud(cloud)
    text = "".join(",".join(repr(float(x)) for x in row) + "\n" for row in cloud.points)
    _write(text, dest)


def parse_diagram(lines: list[str], cls=Diagram) -> Diagram:
    pairs = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise ParseError(f"expected 3 tab-separated columns, got {len(fields)}", line=lineno)
        try:
            birth, death = parse_scale(fields[0]), parse_scale(fields[1])
            mult = int(fields[2])
            pairs.append((birth, death, mult))
        except ValueError as exc:
            raise ParseError(f"bad diagram row {raw!r}: {exc}", line=lineno) from None
    try:
        return cls(pairs)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def read_diagram(source, cls=Diagram) -> Diagram:
    return parse_diagram(_lines(source), cls=cls)


def diagram_to_text(diagram: Diagram, header: bool = True) -> str:
    out = ["# birth\tdeath\tmultiplicity\n"] if header else []
    for p in diagram.pairs:
        out.append(f"{format_scale(p.birth)}\t{format_scale(p.death)}\t{p.multiplicity}\n")
    return "".join(out)


def write_diagram(diagram: Diagram, dest, header: bool = True) -> None:
    _write(diagram_to_text(diagram, header=header), dest)


def nn_to_text(nn) -> str:
    return "".join("\t".join(format_scale(x) for x in row) + "\n" for row in nn.rows)


def write_nn(nn, dest) -> None:
    _write(nn_to_text(nn), dest)


def read_nn(source):
    from .invariants import NnDistanceSet

    rows = []
    for lineno, raw in enumerate(_lines(source), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            rows.append(tuple(parse_scale(f) for f in line.split("\t")))
        except ValueError as exc:
            raise ParseError(f"bad NN row {raw!r}: {exc}", line=lineno) from None
    if not rows:
        raise ParseError("NN file contains no rows")
    try:
        return NnDistanceSet(k=len(rows[0]), rows=tuple(rows))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def _write(text: str, dest) -> None:
    if isinstance(dest, (str, Path)):
        with open(dest, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        dest.write(text)
