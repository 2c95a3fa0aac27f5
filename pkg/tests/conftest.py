import random
from fractions import Fraction as F

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from masure.masure_sim import Masure, make_config, random_masure
from masure.rootsys import preset

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

PRESETS = ("a1", "affine-a1", "hyp23")


def fr(x):
    return F(x)


@pytest.fixture(scope="session")
def reals():
    return {name: preset(name) for name in PRESETS}


@pytest.fixture(scope="session")
def tables(reals):
    return {name: make_config(real, 20, 2, 4).table for name, real in reals.items()}


def small_masure(name, seed=3, words=8):
    real = preset(name)
    return random_masure(make_config(real, 20, 2, 4), random.Random(seed), n_words=words, root_height=4)


@pytest.fixture(scope="session")
def masures():
    return {name: small_masure(name) for name in PRESETS}


def a1_chain(levels=(0,), sheet=1):
    """The a1 masure with one chain of branches at the given levels."""
    m = Masure(make_config(preset("a1"), 20, 3, 4))
    word = ()
    for k in levels:
        word = m.branch(word, 0, k, sheet)
    return m, word


fractions = st.builds(F, st.integers(-12, 12), st.sampled_from([1, 2, 3]))


def coords(d):
    return st.tuples(*[fractions] * d)


def points(m):
    """Points of m: a registered word and coordinates, canonicalized."""
    return st.builds(lambda w, b: m._canon(w, b), st.sampled_from(m.apartments), coords(m.real.d))
