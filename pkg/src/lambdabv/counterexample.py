"""Spike-train counterexample for a violated embedding criterion.

When ``E_n`` is unbounded one can pick, for ``k = 1, 2, ...``, grid counts
``n_k >= 2**(k+2)`` and inner maximizers ``m_k <= n_k`` with

    omega(1/n_k) * (n_k/m_k)**(1/q) * Lambda_{m_k}**(1/p) < c * 2**(-a*k)

(``a = 4, c = 1`` by default).  Stage ``k`` of ``g`` is a train of ``N_k``
spikes of height ``2**-k * Phi_k**(1/p)`` and width ``1/n_k`` starting at
``2**-k``, with ``Phi_k = 1/Lambda_{m_k}``.  Each stage has p-Lambda-variation
at most ``2**(1/p) * 2**-k`` while ``omega_q(1/n_k, g) / omega(1/n_k)`` grows
at least like ``2**k``.  This module finds the stages, builds the (truncated)
``g`` and checks both claims numerically.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from .embedding import EmbeddingParams, running_argmax
from .errors import ArgumentError, CertificationFailure, CriterionNotViolated, DegenerateModulus
from .modulus import omega_q
from .sequences import WatermanSequence
from .stepfn import StepFunction, eval_at
from .variation import DEFAULT_LIMIT, variation_exact, variation_greedy

DEFAULT_RELAXATION = (4.0, 1.0)
DEFAULT_N_LIMIT = 2 ** 20

_RTOL = 1e-12


@dataclass(frozen=True)
class Stage:
    k: int
    n: int
    m: int
    s: int
    N: int
    phi: float


@dataclass(frozen=True)
class CounterexamplePlan:
    stages: tuple[Stage, ...] = ()
    relaxation: tuple[float, float] = DEFAULT_RELAXATION

    @property
    def K(self) -> int:
        return len(self.stages)

    @property
    def is_default(self) -> bool:
        return tuple(self.relaxation) == DEFAULT_RELAXATION

    def to_dict(self) -> dict:
        return {"K": self.K, "stages": [asdict(st) for st in self.stages],
                "relaxation": list(self.relaxation)}

    @classmethod
    def from_dict(cls, obj: dict) -> "CounterexamplePlan":
        try:
            stages = tuple(Stage(**st) for st in obj["stages"])
            relax = tuple(float(v) for v in obj.get("relaxation", DEFAULT_RELAXATION))
        except (KeyError, TypeError) as exc:
            raise ArgumentError(f"malformed plan: {exc}") from None
        return cls(stages, relax)


def spike_count(n: int, k: int) -> int:
    """``max{j : 2j <= n/2**k + 1}``, in integer arithmetic."""
    return (n + 2 ** k) // 2 ** (k + 1)


def find_violation(params: EmbeddingParams, K: int, n_limit: int = DEFAULT_N_LIMIT,
                   relaxation: tuple[float, float] = DEFAULT_RELAXATION) -> CounterexamplePlan:
    """Smallest violating ``n_k`` per stage, strictly increasing in ``k``.

    ``m(n)`` is the largest maximizer of ``rho**(1/q) / Lambda_rho**(1/p)``
    over ``rho <= n``, the same inner maximum the criterion uses.
    """
    if isinstance(K, bool) or int(K) != K or K < 1:
        raise ArgumentError(f"K must be a positive integer, got {K!r}")
    a, c = (float(v) for v in relaxation)
    if not c > 0:
        raise ArgumentError(f"relaxation constant c must be positive, got {c}")
    if 2 ** (K + 2) > n_limit:
        raise CriterionNotViolated(f"stage {K} needs n >= {2 ** (K + 2)} > n_limit = {n_limit}")
    n_all = np.arange(1, n_limit + 1, dtype=np.float64)
    sums = params.seq.partial_sums(n_limit)
    ratios = n_all ** (1.0 / params.q) / sums ** (1.0 / params.p)
    m_all = running_argmax(ratios, largest=True) + 1
    omega = np.asarray(params.mod(1.0 / n_all))
    lhs = omega * (n_all / m_all) ** (1.0 / params.q) * sums[m_all - 1] ** (1.0 / params.p)

    stages = []
    prev = 0
    for k in range(1, K + 1):
        lo = max(2 ** (k + 2), prev + 1)
        target = c * 2.0 ** (-a * k)
        hits = np.flatnonzero(lhs[lo - 1:] < target)
        if hits.size == 0:
            raise CriterionNotViolated(
                f"stage {k}: no n in [{lo}, {n_limit}] violates the criterion at level {target:.3g}"
            )
        n = lo + int(hits[0])
        if omega[n - 1] <= 0:
            raise DegenerateModulus(f"omega(1/{n}) = 0")
        m = int(m_all[n - 1])
        s = spike_count(n, k)
        stages.append(Stage(k, n, m, s, min(m, s), float(1.0 / sums[m - 1])))
        prev = n
    return CounterexamplePlan(tuple(stages), (a, c))


def _phi(stage: Stage, seq: WatermanSequence) -> float:
    phi = float(1.0 / seq.partial_sums(stage.m)[-1])
    if not math.isclose(phi, stage.phi, rel_tol=1e-12):
        raise ArgumentError(f"stage {stage.k}: phi {stage.phi} does not match the sequence ({phi})")
    return phi


def stage_height(stage: Stage, seq: WatermanSequence, p: float) -> float:
    return 2.0 ** -stage.k * _phi(stage, seq) ** (1.0 / p)


def _spikes(stage: Stage) -> list[tuple[Fraction, Fraction]]:
    base = Fraction(1, 2 ** stage.k)
    return [(base + Fraction(2 * j - 2, stage.n), base + Fraction(2 * j - 1, stage.n))
            for j in range(1, stage.N + 1)]


def _assemble(spikes: list[tuple[Fraction, Fraction, float]]) -> StepFunction:
    spikes = sorted(spikes)
    for (_, e0, _), (s1, _, _) in zip(spikes, spikes[1:]):
        if s1 < e0:
            raise CertificationFailure(f"spike supports overlap near {float(s1):.6g}")
    if spikes and (spikes[0][0] < 0 or spikes[-1][1] > 1):
        raise CertificationFailure("spike support leaves [0, 1]")
    bps, vals = [0.0], []
    for s, e, h in spikes:
        if float(s) > bps[-1]:
            vals.append(0.0)
            bps.append(float(s))
        vals.append(h)
        bps.append(float(e))
    if bps[-1] < 1.0:
        vals.append(0.0)
        bps.append(1.0)
    return StepFunction(tuple(bps), tuple(vals), False)


def build_stage(stage: Stage, seq: WatermanSequence, p: float) -> StepFunction:
    """The isolated stage function ``g_k``."""
    h = stage_height(stage, seq, p)
    return _assemble([(s, e, h) for s, e in _spikes(stage)])


def build_g(plan: CounterexamplePlan, seq: WatermanSequence, p: float) -> StepFunction:
    """Truncated ``g = g_1 + ... + g_K`` as a non-periodic step function."""
    spikes = []
    for st in plan.stages:
        h = stage_height(st, seq, p)
        spikes.extend((s, e, h) for s, e in _spikes(st))
    return _assemble(spikes)


def stage_supports(plan: CounterexamplePlan) -> list[tuple[Fraction, Fraction]]:
    """Exact ``[first spike start, last spike end]`` per stage."""
    out = []
    for st in plan.stages:
        sp = _spikes(st)
        out.append((sp[0][0], sp[-1][1]))
    return out


@dataclass(frozen=True)
class MembershipCertificate:
    k: int
    value: float
    bound: float
    method: str


def _two_level_variation(f: StepFunction, seq: WatermanSequence, p: float) -> float:
    # Only intervals containing a jump change f, and disjoint intervals
    # (a, b] contain disjoint jumps, so V = h * Lambda_J**(1/p).
    levels = set(f.values)
    if len(levels) > 2:
        raise ArgumentError("not a two-level function")
    w = f.grid_values()
    jumps = int(np.count_nonzero(np.diff(w)))
    if jumps == 0:
        return 0.0
    h = max(levels) - min(levels)
    return h * float(seq.partial_sums(jumps)[-1]) ** (1.0 / p)


def stage_variation(stage: Stage, seq: WatermanSequence, p: float,
                    limit: int = DEFAULT_LIMIT) -> tuple[float, str]:
    gk = build_stage(stage, seq, p)
    if len(gk.breakpoints) <= limit:
        return variation_exact(gk, seq, p, limit).value, "exact"
    value = _two_level_variation(gk, seq, p)
    lower = variation_greedy(gk, seq, p).value
    if lower > value * (1 + _RTOL):
        raise CertificationFailure(f"stage {stage.k}: greedy {lower} beats the two-level value {value}")
    return value, "two-level"


def verify_membership_bound(plan: CounterexamplePlan, seq: WatermanSequence, p: float,
                            limit: int = DEFAULT_LIMIT) -> list[MembershipCertificate]:
    """Check ``V(g_k) <= 2**(1/p) * 2**-k`` stage by stage."""
    out = []
    for st in plan.stages:
        value, method = stage_variation(st, seq, p, limit)
        bound = 2.0 ** (1.0 / p - st.k)
        if value > bound * (1 + _RTOL):
            raise CertificationFailure(f"stage {st.k}: V(g_k) = {value} exceeds {bound}")
        out.append(MembershipCertificate(st.k, value, bound, method))
    return out


@dataclass(frozen=True)
class NormCertificate:
    lower: float
    upper: float
    budget: float


def verify_summability(plan: CounterexamplePlan, seq: WatermanSequence, p: float,
                       limit: int = DEFAULT_LIMIT) -> NormCertificate:
    """Bracket ``||g||_{Lambda,p}`` of the truncated ``g``.

    ``upper`` uses subadditivity of ``V`` over the stages, ``lower`` is the
    exact or greedy variation of ``g`` itself; ``upper`` must not exceed
    ``sum_k 2**(1/p - k)``.
    """
    g = build_g(plan, seq, p)
    g0 = abs(eval_at(g, 0.0))
    if len(g.breakpoints) <= limit:
        lower = variation_exact(g, seq, p, limit).value
    else:
        lower = variation_greedy(g, seq, p).value
    upper = sum(stage_variation(st, seq, p, limit)[0] for st in plan.stages)
    budget = sum(2.0 ** (1.0 / p - st.k) for st in plan.stages)
    if g0 + upper > budget + 1e-9 or lower > upper * (1 + _RTOL) + 1e-15:
        raise CertificationFailure(f"norm bracket [{g0 + lower}, {g0 + upper}] vs budget {budget}")
    return NormCertificate(g0 + lower, g0 + upper, budget)


@dataclass(frozen=True)
class DivergenceCertificate:
    k: int
    n: int
    omega_q: float
    omega: float
    ratio: float
    guaranteed: float
    chain_lower: float
    chain_holds: bool
    window_touches_previous: bool
    passed: bool


def guaranteed_ratio(k: int, q: float, relaxation=DEFAULT_RELAXATION) -> float:
    """Lower bound the construction promises for stage ``k``.

    Default relaxation: ``2**k``.  Otherwise ``2**((a - 1 - 1/q) k - 1/q) / c``.
    """
    a, c = relaxation
    if tuple(relaxation) == DEFAULT_RELAXATION:
        return 2.0 ** k
    return 2.0 ** ((a - 1 - 1 / q) * k - 1 / q) / c


def verify_divergence_ratio(g: StepFunction, plan: CounterexamplePlan, params: EmbeddingParams,
                            strict: bool = True) -> list[DivergenceCertificate]:
    """Exact ``omega_q(1/n_k, g) / omega(1/n_k)`` for every stage.

    ``chain_lower`` is ``((2N_k - 1)/n_k) * 2**(-kq) * Phi_k**(q/p)``, the
    lower bound on ``omega_q(1/n_k, g)**q`` obtained by integrating only over
    the stage-k window.  ``window_touches_previous`` flags stages whose
    shifted window reaches into the support of stage ``k - 1``, where the
    difference ``|g(x + 1/n_k) - g(x)|`` is no longer a single spike height.
    """
    q, p = params.q, params.p
    out = []
    failed = []
    for st in plan.stages:
        delta = 1.0 / st.n
        wq = omega_q(g, delta, q)
        w = params.mod(delta)
        if w <= 0:
            raise DegenerateModulus(f"omega(1/{st.n}) = 0")
        ratio = wq / w
        guaranteed = guaranteed_ratio(st.k, q, plan.relaxation)
        chain = (2 * st.N - 1) / st.n * 2.0 ** (-st.k * q) * st.phi ** (q / p)
        reach = Fraction(1, 2 ** st.k) + Fraction(2 * st.N, st.n)
        touches = st.k > 1 and reach > Fraction(1, 2 ** (st.k - 1))
        passed = ratio >= guaranteed
        cert = DivergenceCertificate(st.k, st.n, wq, w, ratio, guaranteed, chain,
                                     wq ** q >= chain * (1 - 1e-12), bool(touches), passed)
        out.append(cert)
        if not passed:
            failed.append(cert)
    if strict and failed:
        st = failed[0]
        raise CertificationFailure(
            f"stage {st.k}: ratio {st.ratio:.6g} below guaranteed {st.guaranteed:.6g}"
        )
    return out
