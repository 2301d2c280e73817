"""Piecewise-constant functions on [0, 1].

``f`` equals ``values[j]`` on ``[breakpoints[j], breakpoints[j+1])`` and
``f(1) = values[-1]``, i.e. every interior breakpoint is right-continuous.
A periodic function instead takes ``f(1) = f(0)``.
"""
from __future__ import annotations

import json
import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ArgumentError, ConstructionError


@dataclass(frozen=True)
class StepFunction:
    breakpoints: tuple[float, ...]
    values: tuple[float, ...]
    periodic: bool = False

    def __post_init__(self):
        bp = tuple(float(t) for t in self.breakpoints)
        vals = tuple(float(v) for v in self.values)
        if len(vals) < 1 or len(bp) != len(vals) + 1:
            raise ConstructionError(
                f"need len(breakpoints) == len(values) + 1 >= 2, got {len(bp)} and {len(vals)}"
            )
        if bp[0] != 0.0 or bp[-1] != 1.0:
            raise ConstructionError(f"breakpoints must run from 0 to 1, got {bp[0]} .. {bp[-1]}")
        if any(b <= a for a, b in zip(bp, bp[1:])):
            raise ConstructionError("breakpoints must be strictly increasing")
        if not all(math.isfinite(v) for v in vals):
            raise ConstructionError("values must be finite")
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "periodic", bool(self.periodic))

    @property
    def pieces(self) -> int:
        return len(self.values)

    def grid_values(self) -> np.ndarray:
        """``f`` at every breakpoint ``t_0..t_m``.

        ``f(1)`` is the last piece value, or the first one for periodic ``f``.
        """
        end = self.values[:1] if self.periodic else self.values[-1:]
        return np.asarray(self.values + end)

    def __call__(self, x):
        return eval_at(self, x)

    def __add__(self, c: float) -> "StepFunction":
        return StepFunction(self.breakpoints, tuple(v + c for v in self.values), self.periodic)

    def scale(self, c: float) -> "StepFunction":
        return StepFunction(self.breakpoints, tuple(c * v for v in self.values), self.periodic)

    def to_dict(self) -> dict:
        return {"breakpoints": list(self.breakpoints), "values": list(self.values),
                "periodic": self.periodic}

    def dumps(self) -> str:
        # repr-based float formatting in json round-trips every double exactly
        return json.dumps(self.to_dict())


def from_breakpoints(breakpoints: Sequence[float], values: Sequence[float],
                     periodic: bool = False) -> StepFunction:
    return StepFunction(tuple(breakpoints), tuple(values), periodic)


def from_pieces(values: Sequence[float], periodic: bool = False) -> StepFunction:
    """Equal-width pieces on [0, 1]."""
    m = len(values)
    if m < 1:
        raise ConstructionError("need at least one piece")
    bp = [j / m for j in range(m + 1)]
    return StepFunction(tuple(bp), tuple(values), periodic)


def from_dict(obj) -> StepFunction:
    if not isinstance(obj, dict):
        raise ConstructionError("step function must be an object with breakpoints/values")
    try:
        return StepFunction(tuple(obj["breakpoints"]), tuple(obj["values"]),
                            bool(obj.get("periodic", False)))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ConstructionError):
            raise
        raise ConstructionError(f"malformed step function: {exc}") from None


def loads(text: str) -> StepFunction:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConstructionError(f"malformed step function JSON: {exc}") from None
    return from_dict(obj)


def eval_at(f: StepFunction, x):
    """Evaluate ``f`` at a scalar or an array of points.

    Periodic functions reduce ``x`` modulo 1 first; otherwise ``x`` must lie
    in ``[0, 1]``.
    """
    if np.ndim(x) == 0:
        x = float(x)
        if f.periodic:
            x = x % 1.0
        elif not 0.0 <= x <= 1.0:
            raise ArgumentError(f"x = {x!r} outside [0, 1]")
        j = bisect_right(f.breakpoints, x) - 1
        return f.values[min(j, f.pieces - 1)]
    x = np.asarray(x, dtype=np.float64)
    if f.periodic:
        x = np.mod(x, 1.0)
    elif np.any((x < 0) | (x > 1)):
        raise ArgumentError("points outside [0, 1]")
    idx = np.searchsorted(f.breakpoints, x, side="right") - 1
    return np.asarray(f.values)[np.minimum(idx, f.pieces - 1)]


def increment_over(f: StepFunction, interval: tuple[float, float]) -> float:
    """``f(b) - f(a)`` for the closed interval ``[a, b]``."""
    a, b = interval
    if a > b:
        raise ArgumentError(f"interval [{a}, {b}] has a > b")
    if a < 0 or b > 1:
        raise ArgumentError(f"interval [{a}, {b}] not inside [0, 1]")
    return eval_at(f, b) - eval_at(f, a)
