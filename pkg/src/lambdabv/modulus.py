"""Integral modulus of continuity of step functions.

For a shift ``gamma`` the q-th power of the L^q shift distance,

    D(gamma) = int |f(t + gamma) - f(t)|**q dt,

is a sum over pairs of pieces of ``|v_a - v_b|**q`` times the length of an
overlap of two intervals, one of them translated by ``gamma``.  Each overlap
length is continuous and piecewise affine in ``gamma`` with kinks only where
two breakpoints are exactly ``gamma`` apart, so ``D`` is piecewise affine with
kinks in the set of breakpoint differences (mod 1 in the periodic case) and
its supremum over ``[0, delta]`` is attained on that finite set or at
``delta``.

The integral runs over ``[0, 1 - gamma]`` for ordinary functions and over
``[0, 1]`` (with wrap-around) for periodic ones.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError
from .stepfn import StepFunction

# candidate shifts closer than this are the same kink up to rounding
_DEDUP_ATOL = 1e-14


@dataclass(frozen=True)
class ShiftDistanceProfile:
    """``D(gamma)`` at its kinks in ``[0, delta]``; affine in between."""

    gamma_breaks: np.ndarray
    values: np.ndarray
    q: float

    @property
    def distances(self) -> np.ndarray:
        return self.values ** (1.0 / self.q)

    def argmax(self) -> float:
        return float(self.gamma_breaks[int(np.argmax(self.values))])


def _check_q(q: float) -> float:
    if not q >= 1 or not math.isfinite(q):
        raise ArgumentError(f"q must be a finite number >= 1, got {q!r}")
    return float(q)


def _check_unit(x: float, name: str) -> float:
    if not 0.0 <= x <= 1.0:
        raise ArgumentError(f"{name} must lie in [0, 1], got {x!r}")
    return float(x)


def _powered_distance(f: StepFunction, gamma: float, q: float) -> float:
    t = np.asarray(f.breakpoints)
    v = np.asarray(f.values)
    m = len(v)
    if f.periodic:
        lo, hi = 0.0, 1.0
        cuts = np.concatenate((t, np.mod(t - gamma, 1.0)))
    else:
        lo, hi = 0.0, 1.0 - gamma
        if hi <= 0:
            return 0.0
        cuts = np.concatenate((t, t - gamma))
    cuts = np.unique(np.clip(cuts, lo, hi))
    if cuts[0] > lo:
        cuts = np.concatenate(([lo], cuts))
    if cuts[-1] < hi:
        cuts = np.concatenate((cuts, [hi]))
    width = np.diff(cuts)
    keep = width > 0
    mid = 0.5 * (cuts[:-1] + cuts[1:])[keep]
    width = width[keep]
    here = np.minimum(np.searchsorted(t, mid, side="right") - 1, m - 1)
    shifted = mid + gamma
    if f.periodic:
        shifted = np.mod(shifted, 1.0)
    there = np.minimum(np.searchsorted(t, shifted, side="right") - 1, m - 1)
    return float(np.dot(np.abs(v[there] - v[here]) ** q, width))


def lq_shift_distance(f: StepFunction, gamma: float, q: float) -> float:
    """``(int |f(t + gamma) - f(t)|**q dt)**(1/q)``, computed cell by cell."""
    q = _check_q(q)
    gamma = _check_unit(gamma, "gamma")
    return _powered_distance(f, gamma, q) ** (1.0 / q)


def candidate_shifts(f: StepFunction, delta: float) -> np.ndarray:
    """Sorted kinks of ``D`` inside ``[0, delta]``, plus both ends."""
    t = np.asarray(f.breakpoints)
    diff = (t[None, :] - t[:, None]).ravel()
    if f.periodic:
        diff = np.mod(diff, 1.0)
    diff = diff[(diff >= 0) & (diff <= delta)]
    cand = np.unique(np.concatenate((diff, [0.0, delta])))
    cand = cand[np.concatenate(([True], np.diff(cand) > _DEDUP_ATOL))]
    cand[-1] = delta
    return cand


def shift_profile(f: StepFunction, delta: float, q: float) -> ShiftDistanceProfile:
    q = _check_q(q)
    delta = _check_unit(delta, "delta")
    gammas = candidate_shifts(f, delta)
    values = np.array([_powered_distance(f, g, q) for g in gammas])
    return ShiftDistanceProfile(gammas, values, q)


def omega_q(f: StepFunction, delta: float, q: float) -> float:
    """``sup_{0 <= gamma <= delta}`` of the L^q shift distance, exactly."""
    q = _check_q(q)
    delta = _check_unit(delta, "delta")
    if delta == 0:
        return 0.0
    return float(shift_profile(f, delta, q).values.max()) ** (1.0 / q)
