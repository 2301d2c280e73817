from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from lambdabv.errors import ArgumentError, ConstructionError, DivergenceNotWitnessed
from lambdabv.sequences import (
    ModulusOfContinuity,
    WatermanSequence,
    divergence_prefix,
    inv_partial_sum,
    lambda_at,
    omega_eval,
    parse_modulus,
    parse_sequence,
)
from oracles import harmonic
from strategies import sequences


def test_lambda_at_examples():
    assert lambda_at(WatermanSequence.power(1), 3) == 3
    assert lambda_at(WatermanSequence.constant(1), 10 ** 6) == 1
    assert lambda_at(WatermanSequence.explicit([1, 2, 5]), 7) == 5


@pytest.mark.parametrize("i", [0, -1, 1.5])
def test_lambda_at_rejects_bad_index(i):
    with pytest.raises(ArgumentError):
        lambda_at(WatermanSequence.power(1), i)


@pytest.mark.parametrize("k, expected", [(3, Fraction(11, 6)), (4, Fraction(25, 12))])
def test_harmonic_partial_sums(k, expected):
    assert harmonic(k) == expected
    assert inv_partial_sum(WatermanSequence.power(1), k) == pytest.approx(float(expected), rel=1e-15)


def test_constant_partial_sum():
    assert inv_partial_sum(WatermanSequence.constant(1), 5) == 5


def test_divergence_prefix():
    assert divergence_prefix(WatermanSequence.constant(1), 3) == 3
    # H_3 = 11/6 < 2 <= H_4 = 25/12
    assert divergence_prefix(WatermanSequence.power(1), 2) == 4
    with pytest.raises(DivergenceNotWitnessed):
        divergence_prefix(WatermanSequence.power(1), 100, k_max=10)


def test_cache_independent_of_query_order():
    a, b = WatermanSequence.power(0.5), WatermanSequence.power(0.5)
    for k in (3, 70, 1000, 5000):
        a.partial_sums(k)
    assert np.array_equal(a.partial_sums(5000), b.partial_sums(5000))


def test_cached_arrays_are_read_only():
    with pytest.raises(ValueError):
        WatermanSequence.power(1).partial_sums(10)[0] = 3


@given(sequences, st.integers(1, 3000))
def test_prefix_increments_and_monotonicity(seq, k):
    sums = seq.partial_sums(k + 1)
    lam = seq.lambdas(k + 1)
    assert sums[k] - sums[k - 1] == pytest.approx(1.0 / lam[k], rel=1e-12, abs=1e-12 * sums[k])
    assert lam[k] >= lam[k - 1]
    assert sums[k] > sums[k - 1]


@pytest.mark.parametrize("kind, params", [
    ("power", (1.5,)), ("power", (-0.1,)), ("constant", (0,)),
    ("explicit", (3, 2)), ("explicit", ()), ("bogus", (1,)),
])
def test_sequence_validation(kind, params):
    with pytest.raises(ConstructionError):
        WatermanSequence(kind, params)


def test_omega_examples():
    assert omega_eval(ModulusOfContinuity.power(0.5), 0.25) == 0.5
    tab = ModulusOfContinuity.tabulated([(0, 0), (0.5, 0.2), (1, 0.4)])
    assert omega_eval(tab, 0.25) == pytest.approx(0.1, rel=1e-15)
    for mod in (ModulusOfContinuity.power(2), ModulusOfContinuity.power_log(0.5, 1), tab):
        assert omega_eval(mod, 0) == 0
    with pytest.raises(ArgumentError):
        omega_eval(tab, 1.5)


@pytest.mark.parametrize("mod", [
    ModulusOfContinuity.power(0.3),
    ModulusOfContinuity.power(3),
    ModulusOfContinuity.power_log(0.5, 2),
    ModulusOfContinuity.power_log(1, -0.5),
    ModulusOfContinuity.tabulated([(0, 0), (0.1, 0.5), (1, 0.6)]),
])
def test_omega_nondecreasing_on_grid(mod):
    grid = np.linspace(0, 1, 5001)
    vals = mod(grid)
    assert vals[0] == 0
    assert np.all(np.diff(vals) >= 0)


@pytest.mark.parametrize("nodes", [
    [(0, 0), (0.5, 0.2), (0.5, 0.3), (1, 0.4)],   # jump
    [(0, 0.1), (1, 0.4)],                          # omega(0) != 0
    [(0, 0), (0.5, 0.3), (1, 0.2)],                # decreasing
    [(0, 0), (0.5, 0.3)],                          # does not reach 1
])
def test_tabulated_rejections(nodes):
    with pytest.raises(ConstructionError):
        ModulusOfContinuity.tabulated(nodes)


def test_power_log_rejects_decreasing():
    with pytest.raises(ConstructionError):
        ModulusOfContinuity.power_log(0.5, -1)


def test_parsing_round_trip():
    assert parse_sequence("power:0.5") == WatermanSequence.power(0.5)
    assert parse_sequence("explicit:1,2,5") == WatermanSequence.explicit([1, 2, 5])
    assert parse_sequence('{"kind": "constant", "c": 2}') == WatermanSequence.constant(2)
    assert parse_modulus("power-log:0.5,1") == ModulusOfContinuity.power_log(0.5, 1)
    tab = parse_modulus("tabulated:0:0,0.5:0.2,1:0.4")
    assert tab(0.25) == pytest.approx(0.1)
    for mod in (tab, ModulusOfContinuity.power(2).scaled(3)):
        import json
        assert parse_modulus(json.dumps(mod.to_dict())) == mod
    with pytest.raises(ConstructionError):
        parse_sequence("geometric:2")
