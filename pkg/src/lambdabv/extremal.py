"""Maximize ``F(x) = sum x_i**r`` over ordered, weighted-budget vectors.

Feasible set: ``x_1 >= x_2 >= ... >= x_n >= 0`` and
``sum x_i / lambda_i <= budget``.  Its vertices (besides 0) are the block
vectors ``x(k)`` with ``x_1 = ... = x_k = budget / Lambda_k`` and zeros after,
so for ``r >= 1`` (convex ``F``) the maximum is ``max_k k (budget/Lambda_k)**r``.
For ``0 < r < 1`` Hoelder plus Chebyshev's sum inequality put the maximum at
the flat vector ``k = n``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError, GridTooLarge
from .sequences import WatermanSequence

GRID_MAX_DIM = 3


@dataclass(frozen=True)
class ExtremalProblem:
    seq: WatermanSequence
    n: int
    r: float
    budget: float = 1.0

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
            raise ArgumentError(f"n must be a positive integer, got {self.n!r}")
        if not self.r > 0 or not math.isfinite(self.r):
            raise ArgumentError(f"r must be positive, got {self.r!r}")
        if not self.budget > 0 or not math.isfinite(self.budget):
            raise ArgumentError(f"budget must be positive, got {self.budget!r}")
        object.__setattr__(self, "n", int(self.n))


@dataclass(frozen=True)
class ExtremalSolution:
    k_star: int
    x: np.ndarray
    value: float


def block_vector(prob: ExtremalProblem, k: int) -> np.ndarray:
    level = prob.budget / float(prob.seq.partial_sums(k)[-1])
    x = np.zeros(prob.n)
    x[:k] = level
    return x


def solve_closed_form(prob: ExtremalProblem) -> ExtremalSolution:
    """Block maximizer; ties in ``k / Lambda_k**r`` go to the smallest ``k``."""
    sums = prob.seq.partial_sums(prob.n)
    if prob.r < 1:
        k_star = prob.n
    else:
        k = np.arange(1, prob.n + 1)
        k_star = int(np.argmax(k / sums ** prob.r)) + 1
    value = prob.budget ** prob.r * k_star / float(sums[k_star - 1]) ** prob.r
    return ExtremalSolution(k_star, block_vector(prob, k_star), value)


def brute_force_value(prob: ExtremalProblem, resolution: int = 200, mode: str = "grid") -> float:
    """Independent maximum of ``F``.

    ``mode="grid"``: every nonincreasing vector on the lattice
    ``(budget/resolution) * Z^n`` that satisfies the budget (``n <= 3``).
    The last coordinate is pushed to its largest feasible lattice value,
    which loses nothing because ``F`` increases in each coordinate.

    ``mode="vertex"``: ``F`` at each block vector ``x(k)``.
    """
    if mode == "vertex":
        return max(float(np.sum(block_vector(prob, k) ** prob.r)) for k in range(1, prob.n + 1))
    if mode != "grid":
        raise ArgumentError(f"unknown mode {mode!r}")
    if prob.n > GRID_MAX_DIM:
        raise GridTooLarge(f"grid mode handles n <= {GRID_MAX_DIM}, got n = {prob.n}")
    if isinstance(resolution, bool) or int(resolution) != resolution or resolution < 1:
        raise ArgumentError(f"resolution must be a positive integer, got {resolution!r}")
    h = prob.budget / resolution
    inv = 1.0 / prob.seq.lambdas(prob.n)
    # x_1 alone may use the whole budget
    top = int(math.floor(prob.budget * prob.seq.lambdas(1)[0] / h + 1e-9))
    heads = [np.arange(top + 1, dtype=np.float64)]
    for _ in range(prob.n - 2):
        prev = heads[-1]
        heads = [np.repeat(h_, (prev + 1).astype(int)) for h_ in heads]
        heads.append(np.concatenate([np.arange(int(v) + 1, dtype=np.float64) for v in prev]))
    if prob.n == 1:
        used = heads[0] * h * inv[0]
        ok = used <= prob.budget * (1 + 1e-12)
        return float(np.max((heads[0][ok] * h) ** prob.r))
    used = sum(c * h * inv[i] for i, c in enumerate(heads))
    room = prob.budget * (1 + 1e-12) - used
    ok = room >= 0
    heads = [c[ok] for c in heads]
    last = np.minimum(heads[-1], np.floor(room[ok] / (h * inv[-1]) + 1e-9))
    value = sum((c * h) ** prob.r for c in heads) + (last * h) ** prob.r
    return float(value.max())
