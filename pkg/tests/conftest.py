import numpy as np
import pytest
from hypothesis import strategies as st

from qsodyn.core import SimplexPoint
from qsodyn.family import make_params

unit = st.floats(0.0, 1.0, allow_nan=False)


@st.composite
def params(draw, alpha=None, a=None, e_max=1.0):
    """Valid family parameters; ``alpha``/``a`` may be pinned."""
    a_ = draw(unit) if a is None else a
    al = draw(unit) if alpha is None else alpha
    e = draw(st.floats(0.0, e_max))
    c = draw(unit) * (1.0 - e)
    return make_params(a_, al, c, None, e)


@st.composite
def simplex_points(draw, interior=False):
    lo = 1e-6 if interior else 0.0
    w = [draw(st.floats(lo, 1.0)) for _ in range(3)]
    if sum(w) == 0.0:
        w = [1.0, 1.0, 1.0]
    return SimplexPoint.from_seq(w, renormalize=True)


def random_interior(rng, n):
    return [SimplexPoint.from_seq(v, renormalize=True) for v in rng.dirichlet([1.0, 1.0, 1.0], size=n)]


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)
