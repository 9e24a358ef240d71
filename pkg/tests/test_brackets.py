import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from blockforge import operator_forms
from blockforge.algebra import BasisKey, Element, SuperElement, Window, derivation
from blockforge.brackets import EVEN, ODD, BracketKernel, window_columns
from blockforge.config import AlgebraClass, config_from_dict, shipped_config, shipped_config_names

from conftest import elements_st, super_st

K = BasisKey


def as_super(e: Element, parity: int) -> SuperElement:
    return SuperElement.of_even(e) if parity == EVEN else SuperElement.of_odd(e)


def evaluate(kern, entry):
    u, v = Element.from_json(entry["u"]), Element.from_json(entry["v"])
    if kern.is_super:
        res = kern.bracket(as_super(u, entry["pu"]), as_super(v, entry["pv"]))
        return res.odd if entry["parity"] == ODD else res.even, res
    return kern.bracket(u, v), None


def test_golden_values(frozen):
    for entry in frozen["golden"]:
        cfg = config_from_dict(entry["config"])
        kern = BracketKernel(cfg)
        if "derivation" in entry:
            d = entry["derivation"]
            assert derivation(cfg, d["p"], Element.from_json(d["u"])) == Element.from_json(d["expected"])
            continue
        got, full = evaluate(kern, entry)
        assert got == Element.from_json(entry["expected"]), entry["name"]
        if full is not None:
            other = full.even if entry["parity"] == ODD else full.odd
            assert not other, entry["name"]


def test_random_oracle_values(frozen):
    kerns = {}
    for entry in frozen["random"]:
        name = entry["config_name"]
        kern = kerns.setdefault(name, BracketKernel(shipped_config(name)))
        got, _ = evaluate(kern, entry)
        assert got == Element.from_json(entry["expected"]), entry["name"]


def test_oracle_covers_every_shipped_config(frozen):
    assert {e["config_name"] for e in frozen["random"]} == set(shipped_config_names())


def test_block0_pair_follows_the_printed_formula():
    cfg = config_from_dict({"class": "block0", "rank": 2, "phi": [["1", "0"], ["0", "1"]], "profile": ["zero", "zero"]})
    kern = BracketKernel(cfg)
    out = kern.bracket(Element.basis(K((1, 0), (0, 0))), Element.basis(K((0, 1), (0, 0))))
    assert out == Element({K((1, 1), (0, 0)): 2})
    with pytest.raises(ValueError):
        kern.key_bracket(K((1, 0), (1, 0)), K((0, 1), (0, 0)))


LIE = [n for n in shipped_config_names() if not n.startswith("class3")]
SUPER = [n for n in shipped_config_names() if n.startswith("class3")]


@pytest.mark.parametrize("name", LIE)
def test_antisymmetry_and_operator_path(name):
    cfg = shipped_config(name)
    kern = BracketKernel(cfg)

    @given(elements_st(cfg, A=2, K=1), elements_st(cfg, A=2, K=1))
    def check(u, v):
        uv = kern.bracket(u, v)
        assert uv == -kern.bracket(v, u)
        assert uv == operator_forms.bracket(cfg, u, v)

    check()


@pytest.mark.parametrize("name", SUPER)
def test_super_antisymmetry_and_operator_path(name):
    cfg = shipped_config(name)
    kern = BracketKernel(cfg)

    @given(st.integers(0, 1), st.integers(0, 1), st.data())
    def check(pu, pv, data):
        U = data.draw(super_st(cfg, A=2, K=1, parity=pu))
        V = data.draw(super_st(cfg, A=2, K=1, parity=pv))
        sign = -1 if pu == pv == 1 else 1
        UV = kern.bracket(U, V)
        VU = kern.bracket(V, U)
        assert UV.even == VU.even.scale(-sign) and UV.odd == VU.odd.scale(-sign)
        assert UV == operator_forms.superbracket(cfg, U, V)

    check()


def test_epsilon_one_even_part_is_the_poisson_bracket():
    d = shipped_config("class3_eps1").to_json()
    c3 = config_from_dict(d)
    c1 = config_from_dict({"class": "class1", "rank": d["rank"], "phi": d["phi"], "profile": d["profile"]})
    k3, k1 = BracketKernel(c3), BracketKernel(c1)

    @given(elements_st(c1, K=1), elements_st(c1, K=1))
    def check(u, v):
        assert k3.bracket(SuperElement.of_even(u), SuperElement.of_even(v)).even == k1.bracket(u, v)

    check()


@pytest.mark.parametrize("name", ["class1_standard", "class2_full", "class1_skew"])
def test_adjoint_of_one_is_upper_triangular_with_phi1_diagonal(name):
    kern = BracketKernel(shipped_config(name))
    w = Window(1, 1)
    ad = kern.adjoint(Element.basis(kern.one_key), w)
    for col in ad.columns:
        lam = kern.phi(col.alpha)[0]
        if kern.cfg.cls is AlgebraClass.CLASS_II:
            continue
        assert ad.entry(col, col) == lam
        for row in ad.entries.get(col, {}):
            assert row == col or sum(row.idx) < sum(col.idx)


def test_adjoint_of_a_central_key_vanishes():
    kern = BracketKernel(shipped_config("class1_standard"))
    s1 = kern.special_key("sigma1")
    ad = kern.adjoint(Element.basis(s1), Window(2, 1))
    assert not ad.entries and not ad.out_of_window


@pytest.mark.parametrize("name", shipped_config_names())
def test_quotient_keys_are_central_on_random_keys(name):
    from blockforge.sampling import make_rng, random_key

    kern = BracketKernel(shipped_config(name))
    rng = make_rng(7)
    w = Window(3, 2)
    for q in kern.quotient_keys():
        for _ in range(50):
            g = random_key(rng, kern.cfg, w)
            if kern.is_super:
                for p in (EVEN, ODD):
                    assert not kern.bracket(SuperElement.of_even(Element.basis(q)), as_super(Element.basis(g), p))
            else:
                assert not kern.bracket(Element.basis(q), Element.basis(g))


def test_super_epsilon_zero_unit_is_central_and_sigma1_acts_by_zero_on_odd():
    k0 = BracketKernel(shipped_config("class3_eps0"))
    one = SuperElement.of_even(Element.basis(k0.one_key))
    for col in window_columns(k0, Window(2, 0)):
        assert not k0.bracket(one, as_super(Element.basis(col[1]), col[0]))
    k1 = BracketKernel(shipped_config("class3_eps1"))
    s1 = k1.special_key("sigma1")
    assert s1 is not None
    for col in window_columns(k1, Window(2, 0)):
        assert not k1.bracket(SuperElement.of_even(Element.basis(s1)), as_super(Element.basis(col[1]), col[0]))


def test_special_elements_satisfy_their_equations():
    k = BracketKernel(shipped_config("class2_standard"))
    A = k.phi(k.cfg.alpha0)
    assert k.phi(k.special_key("sigma").alpha) == (0, 0, -A[2], -A[3])
    assert k.phi(k.special_key("rho").alpha) == (A[0], A[1], -2 * A[2], -2 * A[3])
    k1 = BracketKernel(shipped_config("class1_zero"))
    assert k1.phi(k1.special_key("sigma1").alpha) == (0, 1)
    assert k1.phi(k1.special_key("sigma2").alpha) == (0, 2)
    kk = BracketKernel(shipped_config("class3_kappa"))
    A = kk.A0
    assert kk.phi(kk.special_key("kappa").alpha) == (-A[0] / 2, (3 - A[1]) / 2)
    assert BracketKernel(shipped_config("class1_rank1")).special_key("sigma1") is None
    assert k.special_key("nope") is None
