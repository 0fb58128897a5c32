"""Shared sample modules and documents."""

import numpy as np
import pytest

from presentations import Presentation

INTERVAL_PMOD = """pmod 1
field 2
dim 1
gen g 0
rel 2 : 1*g
"""

FREE_PMOD = """pmod 1
field 2
dim 1
gen g 0
"""

SHIFTED_FREE_PMOD = """pmod 1
field 2
dim 1
gen g 1
"""

EPATH_SAMPLE = """epath 1
field 2
dim 1
node 0 {
gen g 0
}
edit 1 rev {
category 1D
gridP ax 0 : 1
gridQ ax 0 : 0
f ax 0 : 1->0
g ax 0 : 0->1
W 0 : 1 1 1
}
node 1 {
gen g 1
}
"""

IPRES_SAMPLE = """ipres 1
field 2
dim 1
eps 1
w1:
gen u0 0
w2:
y1:
rel 4 : 1*w1.u0
y2:
rel 4 : 1*w1.u0
"""


def interval(birth, death=None, p=2, gid="g") -> Presentation:
    """The interval module [birth, death) (death None for an infinite bar)."""
    relations = [] if death is None else [([death], {gid: 1})]
    return Presentation.build(1, p, [(gid, [birth])], relations)


@pytest.fixture
def interval_module():
    return interval(0, 2)


@pytest.fixture
def square_module():
    """<g@(0,0) | r@(1,1) = g> in dimension 2."""
    return Presentation.build(2, 2, [("g", [0, 0])], [([1, 1], {"g": 1})])


@pytest.fixture
def two_bar_module():
    """<a@0, b@1 | r@2 = a + b> over F_2."""
    return Presentation.build(1, 2, [("a", [0]), ("b", [1])], [([2], {"a": 1, "b": 1})])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_presentation(rng, d=2, p=2, max_gens=4, max_rels=3, grades=(0, 1, 2, 3)) -> Presentation:
    """Random presentation with integer grades; relations sit above the join of their generators."""
    n = int(rng.integers(1, max_gens + 1))
    gens = [(f"g{i}", [int(rng.choice(grades)) for _ in range(d)]) for i in range(n)]
    relations = []
    for _ in range(int(rng.integers(0, max_rels + 1))):
        chosen = [i for i in range(n) if rng.random() < 0.6] or [int(rng.integers(0, n))]
        join = [max(gens[i][1][k] for i in chosen) for k in range(d)]
        grade = [c + int(rng.integers(0, 2)) for c in join]
        terms = {gens[i][0]: int(rng.integers(1, p)) for i in chosen}
        relations.append((grade, terms))
    return Presentation.build(d, p, gens, relations)


@pytest.fixture
def interval_pmod():
    return INTERVAL_PMOD


@pytest.fixture
def free_pmod():
    return FREE_PMOD
