"""Twist-operator engine: evaluation, closure, normalization, color maps."""

import json
import pathlib
import random

import pytest

from qhomfly import (
    QScalar,
    UnclosableFamilyError,
    cf,
    enumerate_corpus,
    eval_reduced,
    link_from_cf,
    row_colored,
    specialize_two_component,
)
from qhomfly import skein
from qhomfly.nestedsum import nested_eval
from qhomfly.qcomb import unknot_colored
from qhomfly.skein import SkeinState, close

FIXTURES = pathlib.Path(__file__).parent / "fixtures"

TREFOIL = link_from_cf(cf(3))
FIG8 = link_from_cf(cf(2, 2))
HOPF = link_from_cf(cf(2))


def test_anchor_values():
    assert eval_reduced(TREFOIL, 1).format_text() == "1 + q^4 - a^2 q^2"
    assert (
        eval_reduced(FIG8, 1).format_text()
        == "q^2 - a^2 + a^2 q^2 - a^2 q^4 + a^4 q^2"
    )


def test_color_zero_and_unknot_are_one():
    one = QScalar.from_int(1)
    for link in enumerate_corpus(5):
        assert eval_reduced(link, 0) == one
    unknot = link_from_cf(cf(1))
    for j in range(9):
        assert eval_reduced(unknot, j) == one


def test_canonical_is_canonicalized_raw():
    rng = random.Random(29)
    sample = rng.sample(enumerate_corpus(6), 8)
    for link in sample:
        raw = eval_reduced(link, 2, normalize="raw")
        assert eval_reduced(link, 2) == raw.canonicalize()


def test_matches_nested_sum_reference():
    rng = random.Random(31)
    sample = rng.sample(enumerate_corpus(4), 6)
    for link in sample:
        for j in (1, 2):
            got = eval_reduced(link, j, normalize="raw")
            want = nested_eval(link, j)
            assert got == want, (link.cf.entries, j)


def test_auto_start_matches_recorded_family():
    recorded = json.loads((FIXTURES / "start_families.json").read_text())
    rng = random.Random(43)
    keys = rng.sample(sorted(recorded), 10)
    for key in keys:
        link = link_from_cf(cf(*(int(x) for x in key.split(","))))
        want = recorded[key]["start"]
        auto = eval_reduced(link, 1, normalize="raw")
        explicit = eval_reduced(link, 1, start=want, normalize="raw")
        assert auto == explicit, key


def test_fast_close_matches_naive(monkeypatch):
    link = link_from_cf(cf(2, 1, 2, 1))
    assert link.components == 1
    naive = eval_reduced(link, 3, normalize="raw")
    monkeypatch.setattr(skein, "FAST_CLOSE_MIN_J", 0)
    assert eval_reduced(link, 3, normalize="raw") == naive
    monkeypatch.setattr(skein, "FAST_CLOSE_MIN_J", 10**9)
    assert eval_reduced(link, 3, normalize="raw") == naive


def test_late_s_substitution_order_is_equivalent():
    for entries in ((3,), (2, 2), (1, 1, 1), (3, 2)):
        link = link_from_cf(cf(*entries))
        assert link.components == 1
        for j in (1, 2):
            early = eval_reduced(link, j, normalize="raw")
            late = eval_reduced(link, j, normalize="raw", late_s=True)
            assert early == late, (entries, j)


def test_knot_values_are_s_free_and_integral():
    for entries in ((3,), (2, 2), (3, 2)):
        link = link_from_cf(cf(*entries))
        for j in (1, 2, 3):
            v = eval_reduced(link, j)
            assert not v.num.involves(2)
            assert v.is_integral()


def test_determinant_monomial_collapse():
    # a = q^j with s = 1 collapses every knot value to one signed monomial
    for entries in ((3,), (2, 2), (3, 2), (2, 1, 2, 1)):
        link = link_from_cf(cf(*entries))
        for j in (1, 2, 3):
            v = eval_reduced(link, j).substitute(a=(1, j), s=(1, 0))
            assert v.canonicalize().is_monomial(), (entries, j)


def test_fig8_amphichiral():
    for j in (1, 2):
        v = eval_reduced(FIG8, j)
        assert v.invert_variables().canonicalize() == v


def test_two_component_values_carry_s():
    v = eval_reduced(HOPF, 1, normalize="raw")
    assert v.num.involves(2)


def test_specialize_two_component():
    x = eval_reduced(HOPF, 1, normalize="raw")
    with pytest.raises(ValueError):
        specialize_two_component(x, 0, 1)
    same = specialize_two_component(x, 1, 1)
    assert same == x.substitute(s=(1, 0)) * unknot_colored(1)
    bigger = specialize_two_component(x, 3, 1)
    assert not bigger.num.involves(2)


def test_row_colored():
    v = eval_reduced(TREFOIL, 2)
    assert row_colored(row_colored(v, 2), 2) == v
    assert row_colored(row_colored(v, 3), 3) == v
    assert row_colored(v, 2) == v.substitute(q_inverse=True)
    assert row_colored(v, 3) == -v.substitute(q_inverse=True)
    with_s = eval_reduced(HOPF, 1, normalize="raw")
    with pytest.raises(ValueError):
        row_colored(with_s, 1)


def test_close_rejects_starred_families():
    one = QScalar.from_int(1)
    zero = QScalar.from_int(0)
    for family in ("UPs", "RIs"):
        state = SkeinState(1, family, (one, zero))
        with pytest.raises(UnclosableFamilyError):
            close(state)


def test_eval_input_validation():
    with pytest.raises(ValueError):
        eval_reduced(TREFOIL, -1)
    with pytest.raises(ValueError):
        eval_reduced(TREFOIL, 1, normalize="pretty")
