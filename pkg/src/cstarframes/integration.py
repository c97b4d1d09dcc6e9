"""Finite measure discretizations and fixed-order weighted summation.

Interval measures come as midpoint Riemann, trapezoid, or Gauss-Legendre
rules; discrete measures are counting measures over indices.  Integration
of algebra- or module-valued integrands is a weighted sum accumulated in
ascending node order, sequentially, so repeated runs are bit-identical.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .algebra import AlgebraElement
from .errors import DescriptorMismatchError
from .module import ModuleElement

#: Relative slack allowed between sum(weights) and the interval length.
WEIGHT_SUM_RTOL = 1e-12


class MeasureKind(enum.Enum):
    INTERVAL_RIEMANN = "interval_riemann"
    INTERVAL_TRAPEZOID = "interval_trapezoid"
    INTERVAL_GAUSS_LEGENDRE = "interval_gauss_legendre"
    DISCRETE_COUNTING = "discrete_counting"


_INTERVAL_KINDS = (
    MeasureKind.INTERVAL_RIEMANN,
    MeasureKind.INTERVAL_TRAPEZOID,
    MeasureKind.INTERVAL_GAUSS_LEGENDRE,
)


@dataclass(frozen=True, eq=False)
class MeasureSpace:
    """Weighted nodes discretizing a measure; immutable after validation."""

    nodes: np.ndarray
    weights: np.ndarray
    kind: MeasureKind
    interval: Optional[tuple[float, float]] = None

    def __post_init__(self) -> None:
        nodes = np.asarray(self.nodes, dtype=np.float64)
        weights = np.asarray(self.weights, dtype=np.float64)
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)
        if nodes.ndim != 1 or weights.ndim != 1:
            raise ValueError("nodes and weights must be one-dimensional")
        if len(nodes) != len(weights) or len(nodes) < 1:
            raise ValueError(
                f"need equally many nodes and weights, at least one of each; "
                f"got {len(nodes)} nodes, {len(weights)} weights"
            )
        if np.any(weights <= 0):
            raise ValueError("all weights must be positive")
        if self.kind in _INTERVAL_KINDS:
            if self.interval is None:
                raise ValueError(f"{self.kind.value} requires an interval")
            a, b = self.interval
            if not a < b:
                raise ValueError(f"invalid interval [{a}, {b}]")
            total, length = float(np.sum(weights)), b - a
            if abs(total - length) > WEIGHT_SUM_RTOL * max(1.0, abs(length)):
                raise ValueError(
                    f"weights sum to {total!r}, interval length is {length!r}"
                )
        elif self.interval is not None:
            raise ValueError("discrete counting measure takes no interval")

    @property
    def size(self) -> int:
        return len(self.nodes)


def gauss_legendre(a: float, b: float, m: int) -> MeasureSpace:
    """m-point Gauss-Legendre rule on [a, b]; exact through degree 2m-1."""
    if not a < b:
        raise ValueError(f"invalid interval [{a}, {b}]")
    if m < 1:
        raise ValueError(f"need at least one node, got {m}")
    x, w = np.polynomial.legendre.leggauss(m)
    half = 0.5 * (b - a)
    return MeasureSpace(
        nodes=0.5 * (a + b) + half * x,
        weights=half * w,
        kind=MeasureKind.INTERVAL_GAUSS_LEGENDRE,
        interval=(float(a), float(b)),
    )


def riemann_midpoint(a: float, b: float, m: int) -> MeasureSpace:
    if not a < b:
        raise ValueError(f"invalid interval [{a}, {b}]")
    if m < 1:
        raise ValueError(f"need at least one node, got {m}")
    h = (b - a) / m
    return MeasureSpace(
        nodes=a + h * (np.arange(m) + 0.5),
        weights=np.full(m, h),
        kind=MeasureKind.INTERVAL_RIEMANN,
        interval=(float(a), float(b)),
    )


def trapezoid(a: float, b: float, m: int) -> MeasureSpace:
    # m nodes including both endpoints, so m >= 2
    if not a < b:
        raise ValueError(f"invalid interval [{a}, {b}]")
    if m < 2:
        raise ValueError(f"trapezoid rule needs at least two nodes, got {m}")
    h = (b - a) / (m - 1)
    w = np.full(m, h)
    w[0] = w[-1] = 0.5 * h
    return MeasureSpace(
        nodes=np.linspace(a, b, m),
        weights=w,
        kind=MeasureKind.INTERVAL_TRAPEZOID,
        interval=(float(a), float(b)),
    )


def counting(size: int, weights: Optional[Sequence[float]] = None) -> MeasureSpace:
    """Counting measure over indices 0..size-1, unit weights by default."""
    if size < 1:
        raise ValueError(f"need at least one index, got {size}")
    w = np.ones(size) if weights is None else np.asarray(weights, dtype=np.float64)
    if w.shape != (size,):
        raise ValueError(f"expected {size} weights, got shape {w.shape}")
    return MeasureSpace(
        nodes=np.arange(size, dtype=np.float64),
        weights=w,
        kind=MeasureKind.DISCRETE_COUNTING,
    )


def integrate_algebra_valued(
    f: Callable[[float], AlgebraElement], space: MeasureSpace
) -> AlgebraElement:
    """Sum of weights[i] * f(nodes[i]) in ascending node order."""
    values = [f(float(w)) for w in space.nodes]
    first = values[0]
    for v in values[1:]:
        if v.descriptor != first.descriptor:
            raise DescriptorMismatchError("integrand changes algebra across nodes")
    acc = np.zeros_like(first.entries)
    for mu, v in zip(space.weights, values):
        acc = acc + mu * v.entries
    return AlgebraElement(first.descriptor, acc)


def integrate_module_valued(
    f: Callable[[float], ModuleElement], space: MeasureSpace
) -> ModuleElement:
    """Componentwise weighted sum, same fixed accumulation order."""
    values = [f(float(w)) for w in space.nodes]
    first = values[0]
    for v in values[1:]:
        if v.descriptor != first.descriptor:
            raise DescriptorMismatchError("integrand changes module across nodes")
    acc = np.zeros_like(first.row)
    for mu, v in zip(space.weights, values):
        acc = acc + mu * v.row
    return ModuleElement.from_row(first.descriptor, acc)
