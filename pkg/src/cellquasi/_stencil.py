"""Shared machinery for applying symmetric stencils to gridded data."""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exact import cast_weights


def apply_axis(data: np.ndarray, weights: Sequence[Fraction], axis: int) -> np.ndarray:
    """Correlate ``data`` with a centered stencil along one axis.

    The output loses ``len(weights) // 2`` samples at each end of ``axis``.
    Terms are accumulated left to right so results are reproducible.
    """
    width = len(weights)
    if width % 2 != 1:
        raise ValueError("stencil length must be odd")
    n = data.shape[axis]
    if n < width:
        raise ValueError(f"axis {axis} has {n} samples, stencil needs {width}")
    w = cast_weights(weights, data.dtype)
    out_len = n - width + 1
    out = None
    for j, wj in enumerate(w):
        piece = np.take(data, range(j, j + out_len), axis=axis)
        term = wj * piece
        out = term if out is None else out + term
    return out


def apply_separable(data: np.ndarray, weights_per_axis: Sequence[Sequence[Fraction]]) -> np.ndarray:
    """Successive 1D passes, ascending axis order."""
    if len(weights_per_axis) != data.ndim:
        raise ValueError("need one stencil per axis")
    out = data
    for axis, w in enumerate(weights_per_axis):
        out = apply_axis(out, w, axis)
    return out


def tensor_stencil(weights_per_axis: Sequence[Sequence[Fraction]]) -> np.ndarray:
    """Outer product of 1D stencils as an object array of Fractions."""
    shape = tuple(len(w) for w in weights_per_axis)
    st = np.empty(shape, dtype=object)
    for idx in itertools.product(*(range(s) for s in shape)):
        v = Fraction(1)
        for axis, i in enumerate(idx):
            v *= Fraction(weights_per_axis[axis][i])
        st[idx] = v
    return st


def apply_direct(data: np.ndarray, stencil: np.ndarray) -> np.ndarray:
    """Apply a full k-dimensional stencil in one pass (no separability assumed)."""
    if stencil.ndim != data.ndim:
        raise ValueError("stencil and data dimensions differ")
    out_shape = tuple(n - s + 1 for n, s in zip(data.shape, stencil.shape))
    if min(out_shape) < 1:
        raise ValueError("data smaller than stencil")
    flat = cast_weights(stencil.ravel(), data.dtype)
    out = None
    for w, offset in zip(flat, itertools.product(*(range(s) for s in stencil.shape))):
        window = tuple(slice(o, o + n) for o, n in zip(offset, out_shape))
        term = w * data[window]
        out = term if out is None else out + term
    return out
