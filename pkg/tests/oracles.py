"""Independent brute-force oracles.

Nothing here calls the search, candidate-set or closed-form code it checks;
only the data types and the weight sequences are shared.
"""
import itertools
import math

import numpy as np

from lambdabv.stepfn import StepFunction, eval_at


def all_grid_families(npoints):
    """Every family of nondegenerate, interior-disjoint index intervals."""
    def rec(start):
        yield []
        for a in range(start, npoints - 1):
            for b in range(a + 1, npoints):
                for rest in rec(b):
                    yield [(a, b)] + rest
    return rec(0)


def weighted_value(changes, lambdas, p):
    """Plain-Python sorted weighted p-sum (no numpy)."""
    ordered = sorted((abs(c) for c in changes), reverse=True)
    s = math.fsum(c ** p / lam for c, lam in zip(ordered, lambdas))
    return s ** (1.0 / p)


def brute_variation(f: StepFunction, seq, p):
    t = f.breakpoints
    vals = [eval_at(f, x) for x in t]
    lambdas = [float(v) for v in seq.lambdas(len(t))]
    best = 0.0
    for fam in all_grid_families(len(t)):
        best = max(best, weighted_value([vals[b] - vals[a] for a, b in fam], lambdas, p))
    return best


def assigned_value(changes, lambdas, perm, p):
    return math.fsum(abs(changes[i]) ** p / lambdas[j] for j, i in enumerate(perm)) ** (1.0 / p)


def riemann_shift_distance(f: StepFunction, gamma, q, cells=200_000):
    """Midpoint-rule L^q shift distance on a fine uniform grid."""
    hi = 1.0 if f.periodic else 1.0 - gamma
    if hi <= 0:
        return 0.0
    x = (np.arange(cells) + 0.5) * hi / cells
    y = x + gamma
    if f.periodic:
        y = np.mod(y, 1.0)
    d = np.abs(eval_at(f, y) - eval_at(f, x)) ** q
    return float(d.sum() * hi / cells) ** (1.0 / q)


def harmonic(k):
    from fractions import Fraction
    return sum(Fraction(1, i) for i in range(1, k + 1))


def grid_max_F(lambdas, r, budget, resolution):
    """Naive triple loop over the lattice, for tiny cases only."""
    n = len(lambdas)
    h = budget / resolution
    best = 0.0
    top = int(budget * lambdas[0] / h + 1e-9)
    for ks in itertools.product(range(top + 1), repeat=n):
        if any(a < b for a, b in zip(ks, ks[1:])):
            continue
        if sum(k * h / lam for k, lam in zip(ks, lambdas)) > budget * (1 + 1e-12):
            continue
        best = max(best, sum((k * h) ** r for k in ks))
    return best


def scan_shift_distances(f: StepFunction, gammas, q):
    """Exact L^q shift distance for many shifts at once, by broadcasting.

    For each shift the cut points of f and of its translate are merged and
    f is sampled at cell midpoints; no code from the modulus module is used.
    """
    g = np.asarray(gammas, dtype=np.float64)[:, None]
    t = np.asarray(f.breakpoints, dtype=np.float64)[None, :]
    if f.periodic:
        cuts = np.concatenate([np.broadcast_to(t, (g.shape[0], t.shape[1])), np.mod(t - g, 1.0)], axis=1)
        hi = np.ones_like(g)
    else:
        hi = 1.0 - g
        cuts = np.concatenate([np.broadcast_to(t, (g.shape[0], t.shape[1])), t - g, hi], axis=1)
        cuts = np.clip(cuts, 0.0, hi)
    cuts = np.sort(np.concatenate([np.zeros_like(g), cuts], axis=1), axis=1)
    width = np.diff(cuts, axis=1)
    mid = 0.5 * (cuts[:, 1:] + cuts[:, :-1])
    shifted = mid + g
    if f.periodic:
        shifted = np.mod(shifted, 1.0)
    else:
        shifted = np.minimum(shifted, 1.0)
    d = np.abs(eval_at(f, shifted) - eval_at(f, mid)) ** q
    return np.sum(np.where(width > 0, d * width, 0.0), axis=1) ** (1.0 / q)
