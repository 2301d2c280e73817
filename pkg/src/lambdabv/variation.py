"""p-Lambda-variation of step functions.

For a family of nonoverlapping intervals the contribution of the changes
``c_j = |f(I_j)|`` is largest when they are sorted in nonincreasing order and
paired with ``lambda_1 <= lambda_2 <= ...`` (rearrangement inequality), so a
family's value is ``(sum_j c_(j)**p / lambda_j)**(1/p)``.  ``V(f)`` is the
maximum of that over all families; for a step function it is enough to put
interval endpoints on the breakpoint grid.

Internally everything works with ``S = V**p`` and grid indices.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ArgumentError, ExactModeRefused
from .sequences import WatermanSequence
from .stepfn import StepFunction, eval_at

DEFAULT_LIMIT = 16
DEFAULT_MAX_MERGE = 8

# relative gap under which two family values count as tied
_TIE_RTOL = 1e-12
# a subtree is cut only when its bound is clearly below the incumbent
_PRUNE_RTOL = 1e-9
_MATRIX_MAX = 2048


@dataclass(frozen=True)
class IntervalFamily:
    """Closed intervals ``[a_j, b_j]`` with pairwise disjoint interiors, sorted."""

    intervals: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        ivs = tuple(sorted((float(a), float(b)) for a, b in self.intervals))
        for a, b in ivs:
            if not a < b:
                raise ArgumentError(f"degenerate interval [{a}, {b}]")
        for (_, b0), (a1, _) in zip(ivs, ivs[1:]):
            if a1 < b0:
                raise ArgumentError(f"intervals overlap at [{a1}, {b0}]")
        object.__setattr__(self, "intervals", ivs)

    def __len__(self):
        return len(self.intervals)

    def __iter__(self):
        return iter(self.intervals)

    def to_list(self) -> list[list[float]]:
        return [[a, b] for a, b in self.intervals]


@dataclass(frozen=True)
class VariationResult:
    value: float
    witness: IntervalFamily
    exact: bool


def _as_family(fam) -> IntervalFamily:
    return fam if isinstance(fam, IntervalFamily) else IntervalFamily(tuple(fam))


def _check_p(p: float) -> float:
    if not p >= 1 or not math.isfinite(p):
        raise ArgumentError(f"p must be a finite number >= 1, got {p!r}")
    return float(p)


def _sorted_sum(powered: np.ndarray, inv_lam: np.ndarray) -> float:
    """``sum_j x_(j) / lambda_j`` with ``x`` sorted nonincreasing."""
    if len(powered) == 0:
        return 0.0
    x = -np.sort(-np.asarray(powered, dtype=np.float64))
    return float(np.dot(x, inv_lam[:len(x)]))


def family_value(f: StepFunction, fam, seq: WatermanSequence, p: float) -> float:
    """``(sum_j c_(j)**p / lambda_j)**(1/p)`` over the sorted changes of ``fam``.

    Every endpoint must be a breakpoint of ``f``.
    """
    p = _check_p(p)
    fam = _as_family(fam)
    grid = set(f.breakpoints)
    for a, b in fam:
        if a not in grid or b not in grid:
            raise ArgumentError(f"interval [{a}, {b}] has an endpoint off the breakpoint grid")
    if not len(fam):
        return 0.0
    ends = np.asarray(fam.intervals)
    changes = np.abs(eval_at(f, ends[:, 1]) - eval_at(f, ends[:, 0]))
    inv_lam = 1.0 / seq.lambdas(len(fam))
    return _sorted_sum(changes ** p, inv_lam) ** (1.0 / p)


class _Grid:
    """Breakpoint values and the per-sequence weights shared by both searches."""

    def __init__(self, f: StepFunction, seq: WatermanSequence, p: float):
        self.f = f
        self.p = p
        self.t = np.asarray(f.breakpoints)
        self.w = f.grid_values()
        self.n = len(self.w)
        self.inv_lam = 1.0 / seq.lambdas(self.n)
        self._matrix = None
        if self.n <= _MATRIX_MAX:
            self._matrix = np.abs(self.w[None, :] - self.w[:, None]) ** p

    def changes(self, family: Sequence[tuple[int, int]]) -> np.ndarray:
        if not family:
            return np.empty(0)
        ab = np.asarray(family)
        if self._matrix is not None:
            return self._matrix[ab[:, 0], ab[:, 1]]
        return np.abs(self.w[ab[:, 1]] - self.w[ab[:, 0]]) ** self.p

    def total(self, family: Sequence[tuple[int, int]]) -> float:
        return _sorted_sum(self.changes(family), self.inv_lam)

    def family(self, idx: Iterable[tuple[int, int]]) -> IntervalFamily:
        return IntervalFamily(tuple((self.t[a], self.t[b]) for a, b in idx if self.w[a] != self.w[b]))

    def result(self, idx, exact: bool) -> VariationResult:
        fam = self.family(idx)
        inv = self.inv_lam
        ends = np.array([[a, b] for a, b in idx if self.w[a] != self.w[b]], dtype=int).reshape(-1, 2)
        s = _sorted_sum(np.abs(self.w[ends[:, 1]] - self.w[ends[:, 0]]) ** self.p, inv)
        return VariationResult(s ** (1.0 / self.p), fam, exact)


def _tie_key(idx: Sequence[tuple[int, int]]):
    # fewest intervals, then smallest left endpoints, then longest intervals
    return (len(idx), tuple(a for a, _ in idx), tuple(-b for _, b in idx))


def monotone_runs(f: StepFunction) -> list[tuple[int, int]]:
    """Grid-index intervals between consecutive local extrema of ``f``."""
    w = f.grid_values()
    ext = [0]
    direction = 0
    for j in range(1, len(w)):
        d = int(np.sign(w[j] - w[j - 1]))
        if d == 0:
            continue
        if direction and d != direction:
            ext.append(last)
        direction = d
        last = j
    if direction:
        ext.append(last)
    return [(a, b) for a, b in zip(ext, ext[1:]) if w[a] != w[b]]


def variation_greedy(f: StepFunction, seq: WatermanSequence, p: float,
                     max_merge: int = DEFAULT_MAX_MERGE) -> VariationResult:
    """Certified lower bound on ``V(f)`` by hill climbing.

    Starts from the monotone-run family and repeatedly applies the best
    strictly improving single move:

    * merge intervals ``i..j`` (at most ``max_merge`` of them) into
      ``[a_i, b_j]``, swallowing everything in between;
    * drop one interval;
    * move one endpoint to a neighbouring breakpoint.
    """
    p = _check_p(p)
    g = _Grid(f, seq, p)
    cur = monotone_runs(f)
    cur_s = g.total(cur)
    while True:
        best_s, best = cur_s, None
        for cand in _neighbours(cur, g.n, max_merge):
            s = g.total(cand)
            if s > best_s:
                best_s, best = s, cand
        if best is None:
            break
        cur, cur_s = best, best_s
    return g.result(cur, exact=False)


def _neighbours(fam: list[tuple[int, int]], n: int, max_merge: int):
    L = len(fam)
    for i in range(L):
        for j in range(i + 1, min(L, i + max_merge)):
            yield fam[:i] + [(fam[i][0], fam[j][1])] + fam[j + 1:]
    for i in range(L):
        yield fam[:i] + fam[i + 1:]
    for i, (a, b) in enumerate(fam):
        lo = fam[i - 1][1] if i else 0
        hi = fam[i + 1][0] if i + 1 < L else n - 1
        for na, nb in ((a - 1, b), (a + 1, b), (a, b - 1), (a, b + 1)):
            if lo <= na < nb <= hi:
                yield fam[:i] + [(na, nb)] + fam[i + 1:]


def variation_exact(f: StepFunction, seq: WatermanSequence, p: float,
                    limit: int = DEFAULT_LIMIT) -> VariationResult:
    """Exact ``V(f)`` by depth-first branch and bound over grid families.

    Families are grown left to right.  A subtree rooted at suffix position
    ``pos`` with already placed changes ``P`` is bounded by filling the free
    slots with the largest single change ``M`` available in the suffix, but no
    more copies than the suffix's Jordan variation ``T`` allows
    (``floor(T/M)`` copies of ``M`` plus the remainder).  That vector weakly
    submajorizes every feasible set of suffix changes, and the objective is
    increasing and Schur-convex, so the bound is valid.

    Ties within ``1e-12`` relative are broken towards fewer intervals, then
    smaller left endpoints, then longer intervals.
    """
    p = _check_p(p)
    if len(f.breakpoints) > limit:
        raise ExactModeRefused(
            f"{len(f.breakpoints)} breakpoints exceed the exact-mode limit {limit}; "
            "use variation_greedy"
        )
    g = _Grid(f, seq, p)
    n, w, inv_lam = g.n, g.w, g.inv_lam

    # suffix statistics in unpowered units
    span = np.array([w[i:].max() - w[i:].min() for i in range(n)])
    steps = np.abs(np.diff(w))
    jordan = np.concatenate((np.cumsum(steps[::-1])[::-1], [0.0]))
    change = g._matrix

    seed = variation_greedy(f, seq, p)
    seed_idx = [(int(np.searchsorted(g.t, a)), int(np.searchsorted(g.t, b))) for a, b in seed.witness]
    best = {"s": g.total(seed_idx), "cands": [(g.total(seed_idx), _tie_key(seed_idx), seed_idx)]}

    def offer(s: float, idx: list[tuple[int, int]]):
        if s < best["s"] * (1 - _TIE_RTOL):
            return
        if s > best["s"]:
            best["s"] = s
            floor_s = s * (1 - _TIE_RTOL)
            best["cands"] = [c for c in best["cands"] if c[0] >= floor_s]
        best["cands"].append((s, _tie_key(idx), list(idx)))

    def bound(placed: list[float], pos: int) -> float:
        slots = n - 1 - pos
        M, T = span[pos], jordan[pos]
        extra: list[float] = []
        if slots > 0 and M > 0:
            k = min(slots, int(T // M))
            extra = [M ** p] * k
            rem = T - k * M
            if k < slots and rem > 0:
                extra.append(min(rem, M) ** p)
        return _sorted_sum(np.array(placed + extra), inv_lam)

    def dfs(pos: int, placed: list[float], idx: list[tuple[int, int]]):
        offer(_sorted_sum(np.array(placed), inv_lam), idx)
        if pos >= n - 1:
            return
        if bound(placed, pos) * (1 + _PRUNE_RTOL) < best["s"]:
            return
        for a in range(pos, n - 1):
            for b in range(a + 1, n):
                c = change[a, b]
                if c == 0.0:
                    # same value as the family without this interval
                    continue
                idx.append((a, b))
                dfs(b, placed + [c], idx)
                idx.pop()

    dfs(0, [], [])
    top = best["s"] * (1 - _TIE_RTOL)
    winner = min((c for c in best["cands"] if c[0] >= top), key=lambda c: c[1])
    return g.result(winner[2], exact=True)


def variation(f: StepFunction, seq: WatermanSequence, p: float,
              limit: int = DEFAULT_LIMIT) -> VariationResult:
    """Exact variation when the grid fits under ``limit``, greedy bound otherwise."""
    if len(f.breakpoints) <= limit:
        return variation_exact(f, seq, p, limit)
    return variation_greedy(f, seq, p)


def lambda_p_norm(f: StepFunction, seq: WatermanSequence, p: float,
                  limit: int = DEFAULT_LIMIT) -> float:
    """``|f(0)| + V(f)``."""
    return abs(eval_at(f, 0.0)) + variation(f, seq, p, limit).value
