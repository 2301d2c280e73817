import numpy as np
from hypothesis import strategies as st

from lambdabv.sequences import WatermanSequence
from lambdabv.stepfn import StepFunction


@st.composite
def step_functions(draw, max_pieces=8, integer=False, periodic=False):
    m = draw(st.integers(1, max_pieces))
    cuts = draw(st.lists(st.floats(0.01, 0.99), min_size=m - 1, max_size=m - 1, unique=True))
    cuts = sorted(cuts)
    if any(b - a < 1e-6 for a, b in zip(cuts, cuts[1:])):
        cuts = [j / m for j in range(1, m)]
    if integer:
        vals = draw(st.lists(st.integers(-20, 20), min_size=m, max_size=m))
    else:
        vals = draw(st.lists(st.floats(-10, 10), min_size=m, max_size=m))
    if not isinstance(periodic, bool):
        periodic = draw(periodic)
    return StepFunction(tuple([0.0] + cuts + [1.0]), tuple(vals), periodic)


sequences = st.one_of(
    st.floats(0.25, 4).map(WatermanSequence.constant),
    st.floats(0, 1).map(WatermanSequence.power),
    st.lists(st.floats(0.5, 5), min_size=1, max_size=6).map(lambda v: WatermanSequence.explicit(sorted(v))),
)


def random_step(rng, max_pieces=8, periodic=False):
    m = int(rng.integers(1, max_pieces + 1))
    cuts = np.sort(rng.choice(np.arange(1, 1000), size=m - 1, replace=False)) / 1000.0
    vals = np.round(rng.normal(scale=5, size=m), 3)
    return StepFunction(tuple([0.0, *cuts.tolist(), 1.0]), tuple(vals.tolist()), periodic)


def random_sequence(rng):
    if rng.random() < 0.5:
        return WatermanSequence.constant(float(rng.uniform(0.5, 3)))
    return WatermanSequence.power(float(rng.uniform(0, 1)))
