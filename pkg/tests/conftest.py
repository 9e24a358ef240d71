import json
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from blockforge.algebra import BasisKey, Element, SuperElement
from blockforge.brackets import BracketKernel
from blockforge.config import config_from_dict, shipped_config, shipped_config_names

settings.register_profile(
    "default",
    deadline=None,
    max_examples=40,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

DATA = Path(__file__).parent / "data"

COEFFS = [Fraction(1), Fraction(-1), Fraction(2), Fraction(-2), Fraction(1, 2), Fraction(-3, 2)]


def cfg_of(**d):
    return config_from_dict(d)


@pytest.fixture(scope="session")
def frozen():
    return json.loads((DATA / "frozen_oracles.json").read_text())


@pytest.fixture(scope="session")
def kernels():
    return {n: BracketKernel(shipped_config(n)) for n in shipped_config_names()}


def keys_st(cfg, A=2, K=2):
    alpha = st.tuples(*[st.integers(-A, A) for _ in range(cfg.rank)])
    idx = st.tuples(
        *[st.integers(0, K) if cfg.full(p) else st.just(0) for p in range(1, cfg.n + 1)]
    ).filter(lambda t: sum(t) <= K)
    return st.builds(BasisKey, alpha, idx)


def elements_st(cfg, A=2, K=2, max_size=3):
    return st.dictionaries(keys_st(cfg, A, K), st.sampled_from(COEFFS), min_size=1, max_size=max_size).map(Element)


def super_st(cfg, A=2, K=2, parity=None):
    e = elements_st(cfg, A, K)
    if parity == 0:
        return e.map(SuperElement.of_even)
    if parity == 1:
        return e.map(SuperElement.of_odd)
    return st.one_of(e.map(SuperElement.of_even), e.map(SuperElement.of_odd))


def terms_to_element(terms):
    return Element.from_json(terms)
