"""Waterman weight sequences and moduli of continuity.

A Waterman sequence is a nondecreasing positive sequence ``lambda_1, lambda_2,
...`` whose reciprocals have a divergent sum.  Everything downstream only ever
needs ``lambda_i`` and the prefix sums ``Lambda_k = sum_{i<=k} 1/lambda_i``,
so those are the two queries offered here, both backed by a lazily grown,
lock-protected cache.

A modulus of continuity is a nondecreasing continuous gauge ``omega`` on
``[0, 1]`` with ``omega(0) = 0``.
"""
from __future__ import annotations

import json
import math
import threading
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ArgumentError, ConstructionError, DivergenceNotWitnessed

SEQUENCE_KINDS = ("constant", "power", "explicit")
MODULUS_KINDS = ("power", "power-log", "tabulated")

_MONOTONE_GRID = 1001


class _PrefixCache:
    """Grow-only cache of ``1/lambda_i`` and their running sums.

    Sums are accumulated strictly left to right, so the cached values do not
    depend on the order in which prefixes were requested.
    """

    def __init__(self, lambdas_fn):
        self._lambdas_fn = lambdas_fn
        self._lock = threading.Lock()
        self._lam = np.empty(0)
        self._sums = np.empty(0)

    def get(self, k: int) -> tuple[np.ndarray, np.ndarray]:
        lam, sums = self._lam, self._sums
        if len(lam) >= k:
            return lam, sums
        with self._lock:
            have = len(self._lam)
            if have < k:
                size = max(k, 2 * have, 64)
                new = self._lambdas_fn(np.arange(have + 1, size + 1, dtype=np.float64))
                start = self._sums[-1] if have else 0.0
                acc = np.cumsum(np.concatenate(([start], 1.0 / new)))[1:]
                lam = np.concatenate((self._lam, new))
                sums = np.concatenate((self._sums, acc))
                lam.flags.writeable = False
                sums.flags.writeable = False
                self._lam, self._sums = lam, sums
            return self._lam, self._sums


@dataclass(frozen=True)
class WatermanSequence:
    """Nondecreasing positive weights ``lambda_i``, ``i >= 1``.

    ``kind`` is one of

    * ``"constant"``: ``params = (c,)``, ``lambda_i = c``;
    * ``"power"``: ``params = (alpha,)`` with ``0 <= alpha <= 1``,
      ``lambda_i = i**alpha``;
    * ``"explicit"``: ``params`` lists ``lambda_1..lambda_r``; indices past
      ``r`` repeat the last entry, so the reciprocal series always diverges.
    """

    kind: str
    params: tuple[float, ...]
    _cache: _PrefixCache = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        params = tuple(float(v) for v in self.params)
        object.__setattr__(self, "params", params)
        if self.kind == "constant":
            if len(params) != 1 or not params[0] > 0 or not math.isfinite(params[0]):
                raise ConstructionError(f"constant sequence needs one positive value, got {params}")
        elif self.kind == "power":
            if len(params) != 1 or not 0.0 <= params[0] <= 1.0:
                raise ConstructionError(f"power sequence needs 0 <= alpha <= 1, got {params}")
        elif self.kind == "explicit":
            if not params:
                raise ConstructionError("explicit sequence needs at least one value")
            if any(not (v > 0) or not math.isfinite(v) for v in params):
                raise ConstructionError("explicit sequence values must be positive and finite")
            if any(b < a for a, b in zip(params, params[1:])):
                raise ConstructionError("explicit sequence must be nondecreasing")
        else:
            raise ConstructionError(f"unknown sequence kind {self.kind!r}")
        object.__setattr__(self, "_cache", _PrefixCache(self._lambdas))

    @classmethod
    def constant(cls, c: float = 1.0) -> "WatermanSequence":
        return cls("constant", (c,))

    @classmethod
    def power(cls, alpha: float) -> "WatermanSequence":
        return cls("power", (alpha,))

    @classmethod
    def explicit(cls, values: Sequence[float]) -> "WatermanSequence":
        return cls("explicit", tuple(values))

    def _lambdas(self, idx: np.ndarray) -> np.ndarray:
        if self.kind == "constant":
            return np.full(idx.shape, self.params[0])
        if self.kind == "power":
            return idx ** self.params[0]
        vals = np.asarray(self.params)
        pos = np.minimum(idx.astype(np.int64), len(vals)) - 1
        return vals[pos]

    def lambdas(self, k: int) -> np.ndarray:
        """``lambda_1..lambda_k`` as a read-only array view."""
        k = _check_index(k, "k")
        return self._cache.get(k)[0][:k]

    def partial_sums(self, k: int) -> np.ndarray:
        """``Lambda_1..Lambda_k``; entry ``j`` holds ``Lambda_{j+1}``."""
        k = _check_index(k, "k")
        return self._cache.get(k)[1][:k]

    def to_dict(self) -> dict:
        if self.kind == "constant":
            return {"kind": "constant", "c": self.params[0]}
        if self.kind == "power":
            return {"kind": "power", "alpha": self.params[0]}
        return {"kind": "explicit", "values": list(self.params)}


def _check_index(i, name: str) -> int:
    if isinstance(i, bool) or int(i) != i or i < 1:
        raise ArgumentError(f"{name} must be a positive integer, got {i!r}")
    return int(i)


def lambda_at(seq: WatermanSequence, i: int) -> float:
    i = _check_index(i, "i")
    return float(seq.lambdas(i)[i - 1])


def inv_partial_sum(seq: WatermanSequence, k: int) -> float:
    """``Lambda_k = sum_{i=1}^k 1/lambda_i`` by direct (cached) summation."""
    k = _check_index(k, "k")
    return float(seq.partial_sums(k)[k - 1])


def divergence_prefix(seq: WatermanSequence, M: float, k_max: int = 10**6) -> int:
    """Smallest ``k <= k_max`` with ``Lambda_k >= M``.

    A finite witness that the reciprocal series gets large; raises
    `DivergenceNotWitnessed` when ``Lambda_{k_max} < M``.
    """
    if not M > 0:
        raise ArgumentError(f"M must be positive, got {M!r}")
    k_max = _check_index(k_max, "k_max")
    sums = seq.partial_sums(k_max)
    k = int(np.searchsorted(sums, M, side="left"))
    if k >= k_max:
        raise DivergenceNotWitnessed(
            f"Lambda_{k_max} = {sums[-1]:.6g} < {M:g}: divergence not witnessed"
        )
    return k + 1


@dataclass(frozen=True)
class ModulusOfContinuity:
    """A gauge ``omega`` on ``[0, 1]``, optionally multiplied by ``scale``.

    ``kind`` is one of

    * ``"power"``: ``params = (beta,)``, ``omega(d) = d**beta``, ``beta > 0``;
    * ``"power-log"``: ``params = (beta, gamma)``,
      ``omega(d) = d**beta * (1 + log(1/d))**(-gamma)``;
    * ``"tabulated"``: ``params`` is a flat tuple ``(d0, w0, d1, w1, ...)``
      interpolated linearly; nodes must start at ``(0, 0)``, end at ``d = 1``
      and be strictly increasing in ``d`` (a repeated node would encode a jump).
    """

    kind: str
    params: tuple[float, ...]
    scale: float = 1.0

    def __post_init__(self):
        params = tuple(float(v) for v in self.params)
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "scale", float(self.scale))
        if not self.scale > 0 or not math.isfinite(self.scale):
            raise ConstructionError(f"scale must be positive, got {self.scale}")
        if self.kind == "power":
            if len(params) != 1 or not params[0] > 0:
                raise ConstructionError(f"power modulus needs beta > 0, got {params}")
        elif self.kind == "power-log":
            if len(params) != 2 or not params[0] > 0:
                raise ConstructionError(f"power-log modulus needs beta > 0 and gamma, got {params}")
            beta, gamma = params
            # d/dd log omega = (beta + gamma / (1 + log(1/d))) / d
            if beta + min(gamma, 0.0) < 0:
                raise ConstructionError("power-log modulus is not nondecreasing (beta + gamma < 0)")
        elif self.kind == "tabulated":
            if len(params) < 4 or len(params) % 2:
                raise ConstructionError("tabulated modulus needs at least two (delta, value) nodes")
            d, w = np.asarray(params[0::2]), np.asarray(params[1::2])
            if d[0] != 0.0 or w[0] != 0.0:
                raise ConstructionError("tabulated modulus must start at (0, 0)")
            if d[-1] != 1.0:
                raise ConstructionError("tabulated modulus must end at delta = 1")
            if np.any(np.diff(d) <= 0):
                raise ConstructionError("tabulated deltas must be strictly increasing (jumps are rejected)")
            if np.any(np.diff(w) < 0):
                raise ConstructionError("tabulated values must be nondecreasing")
        else:
            raise ConstructionError(f"unknown modulus kind {self.kind!r}")
        grid = np.linspace(0.0, 1.0, _MONOTONE_GRID)
        vals = self(grid)
        if not np.all(np.isfinite(vals)) or np.any(np.diff(vals) < 0):
            raise ConstructionError(f"{self.kind} modulus is not nondecreasing on [0, 1]")

    @classmethod
    def power(cls, beta: float) -> "ModulusOfContinuity":
        return cls("power", (beta,))

    @classmethod
    def power_log(cls, beta: float, gamma: float) -> "ModulusOfContinuity":
        return cls("power-log", (beta, gamma))

    @classmethod
    def tabulated(cls, nodes: Sequence[Sequence[float]]) -> "ModulusOfContinuity":
        return cls("tabulated", tuple(v for node in nodes for v in node))

    def scaled(self, c: float) -> "ModulusOfContinuity":
        return ModulusOfContinuity(self.kind, self.params, self.scale * c)

    def __call__(self, delta):
        d = np.asarray(delta, dtype=np.float64)
        if self.kind == "power":
            out = d ** self.params[0]
        elif self.kind == "power-log":
            beta, gamma = self.params
            with np.errstate(divide="ignore", invalid="ignore"):
                out = np.where(d > 0, d ** beta * (1.0 - np.log(np.where(d > 0, d, 1.0))) ** (-gamma), 0.0)
        else:
            out = np.interp(d, self.params[0::2], self.params[1::2])
        out = out * self.scale
        return float(out) if out.ndim == 0 else out

    def to_dict(self) -> dict:
        if self.kind == "power":
            out = {"kind": "power", "beta": self.params[0]}
        elif self.kind == "power-log":
            out = {"kind": "power-log", "beta": self.params[0], "gamma": self.params[1]}
        else:
            out = {"kind": "tabulated", "values": [list(self.params[i:i + 2]) for i in range(0, len(self.params), 2)]}
        if self.scale != 1.0:
            out["scale"] = self.scale
        return out


def omega_eval(mod: ModulusOfContinuity, delta: float) -> float:
    if not 0.0 <= delta <= 1.0:
        raise ArgumentError(f"delta must lie in [0, 1], got {delta!r}")
    if delta == 0:
        return 0.0
    return mod(delta)


# -- parsing ---------------------------------------------------------------

def sequence_from_dict(cfg: dict) -> WatermanSequence:
    kind = cfg.get("kind")
    try:
        if kind == "constant":
            return WatermanSequence.constant(cfg.get("c", cfg.get("value", 1.0)))
        if kind == "power":
            return WatermanSequence.power(cfg["alpha"])
        if kind == "explicit":
            return WatermanSequence.explicit(cfg["values"])
    except (KeyError, TypeError) as exc:
        raise ConstructionError(f"bad {kind} sequence config: {exc}") from None
    raise ConstructionError(f"unknown sequence kind {kind!r}")


def modulus_from_dict(cfg: dict) -> ModulusOfContinuity:
    kind = cfg.get("kind")
    scale = cfg.get("scale", 1.0)
    try:
        if kind == "power":
            return ModulusOfContinuity("power", (cfg["beta"],), scale)
        if kind == "power-log":
            return ModulusOfContinuity("power-log", (cfg["beta"], cfg.get("gamma", 0.0)), scale)
        if kind == "tabulated":
            flat = tuple(v for node in cfg["values"] for v in node)
            return ModulusOfContinuity("tabulated", flat, scale)
    except (KeyError, TypeError) as exc:
        raise ConstructionError(f"bad {kind} modulus config: {exc}") from None
    raise ConstructionError(f"unknown modulus kind {kind!r}")


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise ConstructionError(f"cannot parse numbers from {text!r}") from None


def parse_sequence(text: str) -> WatermanSequence:
    """Inline form ``constant:c``, ``power:alpha``, ``explicit:v1,v2,...`` or a JSON object."""
    text = text.strip()
    if text.startswith("{"):
        return sequence_from_dict(_loads(text))
    kind, _, rest = text.partition(":")
    vals = _floats(rest)
    if kind == "constant":
        return WatermanSequence.constant(*(vals or [1.0]))
    if kind in ("power", "explicit"):
        return WatermanSequence(kind, tuple(vals))
    raise ConstructionError(f"unknown sequence kind {kind!r}")


def parse_modulus(text: str) -> ModulusOfContinuity:
    """Inline form ``power:beta``, ``power-log:beta,gamma``,
    ``tabulated:d0:w0,d1:w1,...`` or a JSON object."""
    text = text.strip()
    if text.startswith("{"):
        return modulus_from_dict(_loads(text))
    kind, _, rest = text.partition(":")
    if kind == "tabulated":
        nodes = [_floats(node.replace(":", ",")) for node in rest.split(",") if node]
        if any(len(node) != 2 for node in nodes):
            raise ConstructionError(f"tabulated nodes must be d:w pairs, got {rest!r}")
        return ModulusOfContinuity.tabulated(nodes)
    if kind in ("power", "power-log"):
        return ModulusOfContinuity(kind, tuple(_floats(rest)))
    raise ConstructionError(f"unknown modulus kind {kind!r}")


def _loads(text: str) -> dict:
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConstructionError(f"malformed JSON config: {exc}") from None
    if not isinstance(cfg, dict):
        raise ConstructionError("config must be a JSON object")
    return cfg
