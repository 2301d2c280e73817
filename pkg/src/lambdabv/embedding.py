"""Embedding criterion for ``LambdaBV^(p)`` in ``H_omega^q``.

The inclusion holds exactly when

    E_n = max_{k <= n} k**(1/q) / Lambda_k**(1/p)  /  (omega(1/n) * n**(1/q))

stays bounded as ``n -> oo``.  For ``p >= q`` the inner maximum sits at
``k = n`` and ``E_n`` collapses to ``1 / (omega(1/n) * Lambda_n**(1/p))``.
Only finitely many ``n`` can ever be inspected, so `embed_report` returns the
raw terms together with a heuristic verdict.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ArgumentError, CorollaryInapplicable, DegenerateModulus
from .sequences import ModulusOfContinuity, WatermanSequence
from .stepfn import StepFunction
from .variation import DEFAULT_LIMIT, variation_exact

SLOPE_THRESHOLD = 0.05
PLATEAU_RATIO = 1.1
GROWTH_FACTOR = 10.0


@dataclass(frozen=True)
class EmbeddingParams:
    seq: WatermanSequence
    mod: ModulusOfContinuity
    p: float
    q: float

    def __post_init__(self):
        for name in ("p", "q"):
            v = getattr(self, name)
            if not v >= 1 or not math.isfinite(v):
                raise ArgumentError(f"{name} must be a finite number >= 1, got {v!r}")
            object.__setattr__(self, name, float(v))


@dataclass
class EmbeddingReport:
    sampled_n: list[int]
    terms: list[float]
    argmax_k: list[int]
    sup_term: float
    slope: float
    verdict: str
    params: EmbeddingParams | None = field(default=None, repr=False)

    def rows(self):
        return list(zip(self.sampled_n, self.terms, self.argmax_k))

    def summary(self) -> dict:
        return {"verdict": self.verdict, "slope": self.slope, "sup_term": self.sup_term,
                "n_max": self.sampled_n[-1], "samples": len(self.sampled_n)}


def running_argmax(values: np.ndarray, largest: bool = False) -> np.ndarray:
    """Index of the running maximum of ``values[:i+1]`` for every ``i``.

    Ties go to the smallest index, or to the largest with ``largest=True``.
    """
    values = np.asarray(values, dtype=np.float64)
    prev = np.concatenate(([-np.inf], np.maximum.accumulate(values)[:-1]))
    new = values >= prev if largest else values > prev
    idx = np.where(new, np.arange(len(values)), 0)
    return np.maximum.accumulate(idx)


def inner_ratios(params: EmbeddingParams, n: int) -> np.ndarray:
    """``k**(1/q) / Lambda_k**(1/p)`` for ``k = 1..n``."""
    k = np.arange(1, n + 1, dtype=np.float64)
    return k ** (1.0 / params.q) / params.seq.partial_sums(n) ** (1.0 / params.p)


def _omega_at(params: EmbeddingParams, ns: np.ndarray) -> np.ndarray:
    w = np.atleast_1d(params.mod(1.0 / ns))
    if np.any(w <= 0):
        bad = int(ns[np.argmax(w <= 0)])
        raise DegenerateModulus(f"omega(1/{bad}) = 0: criterion term undefined")
    return w


def _check_ns(ns) -> np.ndarray:
    ns = np.atleast_1d(np.asarray(ns))
    if ns.size == 0 or np.any(ns < 1) or np.any(ns != np.floor(ns)):
        raise ArgumentError("n must be positive integers")
    return ns.astype(np.int64)


def criterion_terms(params: EmbeddingParams, ns: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
    """``E_n`` and the smallest maximizing ``k`` for every ``n`` in ``ns``."""
    ns = _check_ns(ns)
    ratios = inner_ratios(params, int(ns.max()))
    arg = running_argmax(ratios)[ns - 1]
    best = ratios[arg]
    w = _omega_at(params, ns.astype(np.float64))
    return best / (w * ns ** (1.0 / params.q)), arg + 1


def criterion_term(params: EmbeddingParams, n: int) -> float:
    terms, _ = criterion_terms(params, [n])
    return float(terms[0])


def criterion_argmax(params: EmbeddingParams, n: int) -> int:
    _, k = criterion_terms(params, [n])
    return int(k[0])


def corollary_terms(params: EmbeddingParams, ns: Sequence[int]) -> np.ndarray:
    if params.p < params.q:
        raise CorollaryInapplicable(f"simplified criterion needs p >= q, got p={params.p}, q={params.q}")
    ns = _check_ns(ns)
    sums = params.seq.partial_sums(int(ns.max()))[ns - 1]
    return 1.0 / (_omega_at(params, ns.astype(np.float64)) * sums ** (1.0 / params.p))


def corollary_term(params: EmbeddingParams, n: int) -> float:
    return float(corollary_terms(params, [n])[0])


def sufficiency_factor(params: EmbeddingParams, n: int) -> float:
    """``((1/n) max_{k<=n} k / Lambda_k**(q/p))**(1/q)``."""
    (n,) = _check_ns([n])
    k = np.arange(1, n + 1, dtype=np.float64)
    inner = np.max(k / params.seq.partial_sums(int(n)) ** (params.q / params.p))
    return float((inner / n) ** (1.0 / params.q))


def sufficiency_bound(f: StepFunction, params: EmbeddingParams, n: int,
                      limit: int = DEFAULT_LIMIT) -> float:
    """Upper bound on ``omega_q(1/n, f)`` in terms of the exact ``V(f)``.

    Holds for the truncated (non-periodic) modulus; a periodic function can
    exceed it through the wrap-around jump, which ``V(f)`` on ``[0, 1]``
    does not see.
    """
    v = variation_exact(f, params.seq, params.p, limit).value
    return v * sufficiency_factor(params, n)


def sample_points(n_max: int, samples: int | None = None) -> np.ndarray:
    """Geometrically spaced integers from 1 to ``n_max`` (ratio 2 by default)."""
    if samples is None:
        samples = int(math.floor(math.log2(n_max))) + 1
    ns = np.unique(np.rint(np.geomspace(1, n_max, samples)).astype(np.int64))
    ns[-1] = n_max
    return ns


def embed_report(params: EmbeddingParams, n_max: int, samples: int | None = None) -> EmbeddingReport:
    """Sample ``E_n`` up to ``n_max`` and classify the trend.

    * ``bounded``: log-log slope over the last half of the samples below
      0.05 and the last quarter never above 1.1 x the median of all terms;
    * ``divergent``: slope above 0.05 and ``E_{n_max}`` more than 10 x the
      first sampled term;
    * ``inconclusive`` otherwise.
    """
    if isinstance(n_max, bool) or int(n_max) != n_max or n_max < 16:
        raise ArgumentError(f"n_max must be an integer >= 16, got {n_max!r}")
    if samples is not None and (int(samples) != samples or samples < 8):
        raise ArgumentError(f"samples must be an integer >= 8, got {samples!r}")
    ns = sample_points(int(n_max), samples)
    terms, ks = criterion_terms(params, ns)
    half = len(ns) // 2
    slope = float(np.polyfit(np.log(ns[half:]), np.log(terms[half:]), 1)[0])
    tail = terms[(3 * len(ns)) // 4:]
    if slope < SLOPE_THRESHOLD and tail.max() <= PLATEAU_RATIO * np.median(terms):
        verdict = "bounded"
    elif slope > SLOPE_THRESHOLD and terms[-1] > GROWTH_FACTOR * terms[0]:
        verdict = "divergent"
    else:
        verdict = "inconclusive"
    return EmbeddingReport([int(n) for n in ns], [float(t) for t in terms], [int(k) for k in ks],
                           float(terms.max()), slope, verdict, params)
