"""Uniform k-dimensional grids of q-average samples and their text format.

File layout::

    # cellfield v1
    dims: <k>
    shape: <n1> ... <nk>
    h: <h1> ... <hk>
    origin: <o1> ... <ok>
    q: <q>
    data:
    <whitespace-separated floats, row-major>
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

__all__ = ["GridField", "FieldFormatError", "read_field", "write_field", "format_field", "parse_field"]

MAGIC = "# cellfield v1"
HEADER_KEYS = ("dims", "shape", "h", "origin", "q")


class FieldFormatError(ValueError):
    """Malformed grid-field text; ``lineno`` is 1-based (0 when not tied to a line)."""

    def __init__(self, message: str, lineno: int = 0):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}" if lineno else message)


@dataclass(frozen=True)
class GridField:
    """Samples ``data[i1, ..., ik]`` located at ``origin[l] + i_l * h[l]``.

    ``q`` tags the discretization: 0 for point values, 1 for cell averages,
    2 for hat averages, and so on.  ``data`` may be a float array or an
    object array of mpmath numbers.
    """

    data: np.ndarray
    h: tuple[float, ...]
    origin: tuple[float, ...]
    q: int = 0

    def __post_init__(self):
        data = np.asarray(self.data)
        if data.dtype != object:
            data = data.astype(float)
        k = data.ndim
        h = _as_tuple(self.h, k, "h")
        origin = _as_tuple(self.origin, k, "origin")
        if k < 1:
            raise ValueError("a grid field needs at least one axis")
        if any(s < 1 for s in data.shape):
            raise ValueError("every axis needs at least one sample")
        if any(not (hv > 0) for hv in h):
            raise ValueError("spacing must be positive")
        if self.q < 0:
            raise ValueError("q must be non-negative")
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "origin", origin)
        object.__setattr__(self, "q", int(self.q))

    @property
    def k(self) -> int:
        return self.data.ndim

    @property
    def shape(self) -> tuple[int, ...]:
        return self.data.shape

    def nodes(self, axis: int) -> np.ndarray:
        """Coordinates of the samples along ``axis``."""
        return self.origin[axis] + self.h[axis] * np.arange(self.shape[axis])

    def with_data(self, data: np.ndarray, *, origin=None, q=None) -> "GridField":
        return GridField(data, self.h, self.origin if origin is None else origin,
                         self.q if q is None else q)


def _as_tuple(value, k: int, name: str) -> tuple[float, ...]:
    if np.isscalar(value):
        return (value,) * k
    t = tuple(value)
    if len(t) != k:
        raise ValueError(f"{name} has {len(t)} entries for a {k}-dimensional grid")
    return t


def format_field(f: GridField) -> str:
    """Serialize with shortest round-trip decimals (``repr`` of a double)."""
    fmt = lambda vals: " ".join(repr(float(v)) for v in vals)
    lines = [
        MAGIC,
        f"dims: {f.k}",
        "shape: " + " ".join(str(s) for s in f.shape),
        "h: " + fmt(f.h),
        "origin: " + fmt(f.origin),
        f"q: {f.q}",
        "data:",
    ]
    flat = np.asarray(f.data, dtype=float).ravel()
    row = f.shape[-1]
    for start in range(0, flat.size, row):
        lines.append(fmt(flat[start:start + row]))
    return "\n".join(lines) + "\n"


def parse_field(text: str) -> GridField:
    lines = text.splitlines()
    if not lines or lines[0].strip() != MAGIC:
        raise FieldFormatError(f"expected '{MAGIC}' header", 1)
    header: dict[str, tuple[list[str], int]] = {}
    data_line = None
    for i, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, rest = line.partition(":")
        if not sep:
            raise FieldFormatError(f"expected 'key: value', got {line!r}", i)
        key = key.strip()
        if key == "data":
            if rest.strip():
                raise FieldFormatError("'data:' must be alone on its line", i)
            data_line = i
            break
        if key not in HEADER_KEYS:
            raise FieldFormatError(f"unknown header key {key!r}", i)
        if key in header:
            raise FieldFormatError(f"duplicate header key {key!r}", i)
        header[key] = (rest.split(), i)
    if data_line is None:
        raise FieldFormatError("missing 'data:' line", len(lines))
    for key in HEADER_KEYS:
        if key not in header:
            raise FieldFormatError(f"missing header key {key!r}", data_line)

    def ints(key):
        vals, ln = header[key]
        try:
            return [int(v) for v in vals], ln
        except ValueError:
            raise FieldFormatError(f"{key} must be integers", ln) from None

    def floats(key):
        vals, ln = header[key]
        try:
            out = [float(v) for v in vals]
        except ValueError:
            raise FieldFormatError(f"{key} must be numbers", ln) from None
        if not all(math.isfinite(v) for v in out):
            raise FieldFormatError(f"{key} must be finite", ln)
        return out, ln

    (dims,), ln = _single(ints("dims"))
    if dims < 1:
        raise FieldFormatError("dims must be positive", ln)
    shape, ln = ints("shape")
    if len(shape) != dims or any(s < 1 for s in shape):
        raise FieldFormatError(f"shape must list {dims} positive integers", ln)
    h, ln = floats("h")
    if len(h) != dims or any(v <= 0 for v in h):
        raise FieldFormatError(f"h must list {dims} positive numbers", ln)
    origin, ln = floats("origin")
    if len(origin) != dims:
        raise FieldFormatError(f"origin must list {dims} numbers", ln)
    (q,), ln = _single(ints("q"))
    if q < 0:
        raise FieldFormatError("q must be non-negative", ln)

    values: list[float] = []
    expected = math.prod(shape)
    for i, raw in enumerate(lines[data_line:], start=data_line + 1):
        for tok in raw.split():
            try:
                v = float(tok)
            except ValueError:
                raise FieldFormatError(f"bad number {tok!r}", i) from None
            if not math.isfinite(v):
                raise FieldFormatError(f"non-finite value {tok!r}", i)
            values.append(v)
            if len(values) > expected:
                raise FieldFormatError(f"more than {expected} data values", i)
    if len(values) != expected:
        raise FieldFormatError(f"expected {expected} data values, found {len(values)}", len(lines))
    return GridField(np.array(values).reshape(shape), tuple(h), tuple(origin), q)


def _single(parsed):
    vals, ln = parsed
    if len(vals) != 1:
        raise FieldFormatError("expected a single value", ln)
    return vals, ln


def read_field(path) -> GridField:
    return parse_field(Path(path).read_text(encoding="utf-8"))


def write_field(f: GridField, path) -> None:
    Path(path).write_text(format_field(f), encoding="utf-8")
