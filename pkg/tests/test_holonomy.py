"""Recurrence guessing and validation for color sequences."""

import random

import pytest

from qhomfly import (
    LaurentPoly,
    QScalar,
    RecurrenceOperator,
    SequenceWindow,
    apply_operator,
    cf,
    eval_reduced,
    guess_recurrence,
    link_from_cf,
    validate,
)

ONE = QScalar.from_int(1)
ZERO = QScalar.from_int(0)


def win(link_id, vals, start=0):
    return SequenceWindow(link_id, start, tuple(vals))


def qmono(c=1, ea=0, eq=0):
    return QScalar.from_poly(LaurentPoly.monomial(c, ea=ea, eq=eq))


def qfac_window(count=16):
    vals = [ONE]
    for n in range(1, count):
        f = LaurentPoly.from_int(1) - LaurentPoly.monomial(1, eq=n)
        vals.append(vals[-1] * QScalar.from_poly(f))
    return win("qfac", vals)


def test_constant_sequence_gives_l_minus_one():
    op = guess_recurrence(win("unknot", [ONE] * 12), 2, 2)
    assert op.order == 1 and op.mdeg == 0
    assert op.coeffs[0][0] == QScalar.from_int(-1)
    assert op.coeffs[1][0] == ONE


def test_geometric_sequence_minimal_operator():
    # f = q^n is annihilated by L - q; the guesser returns that, not the
    # larger L - M shape, because the scan is minimal-first
    w = win("geo", [qmono(eq=n) for n in range(14)])
    op = guess_recurrence(w, 2, 3)
    assert op.order == 1 and op.mdeg == 0
    assert op.coeffs[0][0] == QScalar.from_poly(LaurentPoly.monomial(-1, eq=1))


def test_qfactorial_needs_mdeg_one():
    w = qfac_window()
    op = guess_recurrence(w, 2, 2)
    assert op.order == 1 and op.mdeg == 1
    assert validate(op, w, 3).passed
    assert guess_recurrence(w, 1, 0) is None


def test_bivariate_coefficients():
    vals = [ONE]
    for n in range(1, 16):
        f = LaurentPoly.from_int(1) - LaurentPoly.monomial(1, ea=1, eq=n)
        vals.append(vals[-1] * QScalar.from_poly(f))
    w = win("apoch", vals)
    op = guess_recurrence(w, 2, 2)
    assert op.order == 1 and op.mdeg == 1
    assert any(c.num.involves(0) for row in op.coeffs for c in row)
    # no a-free operator exists in the same box
    assert guess_recurrence(w, 2, 2, a_free=True) is None


def test_a_free_mode_still_finds_a_free_operators():
    op = guess_recurrence(win("ones", [ONE] * 12), 1, 1, a_free=True)
    assert op.order == 1
    assert not any(c.num.involves(0) for row in op.coeffs for c in row)


def test_apply_operator_shift_and_multiplier():
    shift_m = RecurrenceOperator(0, 1, ((ZERO, ONE),))
    w = win("ones", [ONE] * 5)
    assert apply_operator(shift_m, w, 3) == qmono(eq=3)
    move_l = RecurrenceOperator(1, 0, ((ZERO,), (ONE,)))
    geo = win("geo", [qmono(eq=n) for n in range(6)])
    assert apply_operator(move_l, geo, 2) == qmono(eq=3)


def test_apply_operator_window_bounds():
    op = RecurrenceOperator(1, 0, ((ZERO,), (ONE,)))
    w = win("ones", [ONE] * 4, start=2)
    with pytest.raises(ValueError):
        apply_operator(op, w, 1)
    with pytest.raises(ValueError):
        apply_operator(op, w, 5)


def test_validate_reports_first_failure():
    bad = RecurrenceOperator(1, 0, ((QScalar.from_int(-1),), (ONE,)))
    w = win("geo", [qmono(eq=n) for n in range(8)])
    rep = validate(bad, w, 3)
    assert not rep.passed
    assert rep.first_failure == 4
    assert len(rep.checks) >= 1


def test_validate_scaling_invariance():
    rng = random.Random(7)
    w = qfac_window()
    base = guess_recurrence(w, 2, 2)
    for _ in range(3):
        c = qmono(rng.choice([1, -1, 2]), rng.randrange(-2, 3), rng.randrange(-2, 3))
        scaled = RecurrenceOperator(
            base.order,
            base.mdeg,
            tuple(tuple(c * x for x in row) for row in base.coeffs),
        )
        assert validate(scaled, w, 3).passed


def test_zero_sequence_gives_unit_operator():
    op = guess_recurrence(win("zero", [ZERO] * 10), 2, 2)
    assert op.order == 0 and op.mdeg == 0 and op.coeffs[0][0] == ONE


def test_minimal_first_over_shapes():
    op = guess_recurrence(win("ones", [ONE] * 12), 2, 0)
    assert op.order == 1


def test_operator_json_round_trip():
    op = guess_recurrence(qfac_window(), 2, 2)
    again = RecurrenceOperator.loads(op.dumps())
    assert again == op
    assert again.format_text() == op.format_text()


def test_window_rejects_s_dependence():
    hopf = link_from_cf(cf(2))
    v = eval_reduced(hopf, 1, normalize="raw")
    assert v.num.involves(2)
    with pytest.raises(ValueError):
        win("hopf", [v])


def test_window_too_short_raises():
    with pytest.raises(ValueError):
        guess_recurrence(win("short", [ONE] * 3), 4, 8)


def test_leading_coefficient_nonzero():
    # a_d must be nonzero as a bivariate polynomial in every returned operator
    w = qfac_window()
    op = guess_recurrence(w, 3, 2)
    top = op.coeffs[op.order]
    assert any(not c.is_zero() for c in top)


def test_unknot_color_sequence_recurrence():
    unknot = link_from_cf(cf(1))
    vals = [(n, eval_reduced(unknot, n)) for n in range(12)]
    w = SequenceWindow.from_pairs("1", vals)
    op = guess_recurrence(w, 2, 1)
    assert op.order == 1 and op.mdeg == 0
    assert validate(op, w, 3).passed
