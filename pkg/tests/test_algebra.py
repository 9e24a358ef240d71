from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from blockforge.algebra import (
    BasisKey,
    Element,
    NonCentralQuotient,
    SuperElement,
    Window,
    derivation,
    eigendecompose_phi1,
    make_key,
    multiply,
    quotient_project,
    shift_alpha,
    support_diagnostics,
)
from blockforge.brackets import BracketKernel
from blockforge.config import ConfigError, shipped_config

from conftest import cfg_of, elements_st

F = Fraction
K = BasisKey
IDENT = cfg_of(**{"class": "class1", "rank": 2, "phi": [["1", "0"], ["0", "1"]], "profile": ["full", "full"]})
SKEW = shipped_config("class1_skew")


def test_multiply_adds_keys():
    u = Element({K((1, 0), (1, 0)): 2})
    v = Element({K((0, 1), (0, 2)): F(1, 2), K((1, 1), (0, 0)): -1})
    assert multiply(u, v) == Element({K((1, 1), (1, 2)): 1, K((2, 1), (1, 0)): -2})


def test_derivation_example():
    u = Element.basis(K((2, 3), (1, 1)))
    assert derivation(IDENT, 1, u) == Element({K((2, 3), (1, 1)): 2, K((2, 3), (0, 1)): 1})
    assert derivation(IDENT, 2, u) == Element({K((2, 3), (1, 1)): 3, K((2, 3), (1, 0)): 1})
    with pytest.raises(ValueError):
        derivation(IDENT, 3, u)


def test_eigendecompose_groups_by_phi1():
    u = Element({K((1, 0), (0, 0)): 1, K((1, 5), (0, 0)): 2, K((0, 1), (0, 0)): 3})
    parts = eigendecompose_phi1(IDENT, u)
    assert sorted(parts) == [0, 1]
    assert parts[1] == Element({K((1, 0), (0, 0)): 1, K((1, 5), (0, 0)): 2})
    assert sum(parts.values(), Element()) == u


def test_quotient_project_and_noncentral():
    kern = BracketKernel(shipped_config("class1_standard"))
    s1 = kern.special_key("sigma1")
    u = Element({s1: 3, K((1, 1), (0, 0)): 1})
    assert quotient_project(u, [s1], kern) == Element.basis(K((1, 1), (0, 0)))
    with pytest.raises(NonCentralQuotient):
        quotient_project(u, [K((1, 1), (0, 0))], kern)


def test_support_diagnostics():
    u = Element({K((0, 0), (1, 2)): 1, K((1, 0), (2, 1)): 1, K((0, 0), (0, 1)): 1})
    d = support_diagnostics(u)
    assert (d.max_i2, d.max_total_degree, d.distinct_alpha_at_top) == (2, 3, 2)
    assert support_diagnostics(Element()).max_total_degree == 0


def test_make_key_respects_profile():
    cfg = shipped_config("class1_rank1")
    assert make_key(cfg, [2], [0, 1]) == K((2,), (0, 1))
    with pytest.raises(ValueError):
        make_key(cfg, [2], [1, 0])
    with pytest.raises(ValueError):
        make_key(cfg, [2, 1], [0, 0])


def test_element_json_round_trip_and_errors():
    u = Element({K((1, -2), (0, 3)): F(-3, 4), K((0, 0), (0, 0)): 2})
    assert Element.from_json(u.to_json(), IDENT) == u
    S = SuperElement(u, Element.basis(K((1, 1), (0, 0))))
    assert SuperElement.from_json(S.to_json()) == S
    with pytest.raises(ConfigError):
        Element.from_json({"alpha": [0, 0]})
    with pytest.raises(ConfigError):
        Element.from_json([{"alpha": [0, 0], "idx": [0, 0], "coeff": 0.5}])


def test_window_enumeration():
    cfg = shipped_config("class1_rank1")
    w = Window(1, 2)
    assert len(w.keys(cfg)) == 3 * 3
    assert w.contains(K((1,), (0, 2))) and not w.contains(K((2,), (0, 0)))
    assert w.grow(2) == Window(3, 2)
    with pytest.raises(ValueError):
        Window(-1, 0)


# ------------------------------------------------------------ properties


@given(elements_st(SKEW), elements_st(SKEW), st.integers(1, 2))
def test_derivation_is_leibniz(u, v, p):
    assert derivation(SKEW, p, multiply(u, v)) == multiply(derivation(SKEW, p, u), v) + multiply(
        u, derivation(SKEW, p, v)
    )


@given(elements_st(SKEW))
def test_derivations_commute(u):
    d = lambda p, x: derivation(SKEW, p, x)
    assert d(1, d(2, u)) == d(2, d(1, u))


@given(elements_st(SKEW), elements_st(SKEW), elements_st(SKEW))
def test_product_commutative_associative(u, v, w):
    assert u * v == v * u
    assert (u * v) * w == u * (v * w)


@given(elements_st(SKEW), st.tuples(st.integers(-2, 2), st.integers(-2, 2)))
def test_shift_is_multiplication(u, d):
    assert shift_alpha(u, d) == u * Element.basis(K(d, (0, 0)))


@given(elements_st(SKEW, K=0))
def test_phi1_pieces_are_eigenvectors_in_degree_zero(u):
    # on multi-index zero the first derivation acts diagonally
    for lam, part in eigendecompose_phi1(SKEW, u).items():
        assert derivation(SKEW, 1, part) == part.scale(lam)
