"""Quantum integers, balanced q-binomials, the a-deformed binomial, and the
s-dependent closure factor products.

Conventions (balanced throughout):
    [l]            = (q^l - q^{-l}) / (q - q^{-1}),   [-l] = -[l]
    qbinom(n, m)   = prod_{t=1..m} [n-m+t] / [t]
    abinom(m, n)   = prod_{l=0..n-1} (a q^{m-l} - a^{-1} q^{l-m}) / (q^{l+1} - q^{-l-1})

qbinom is a Laurent polynomial in q, symmetric under q -> q^{-1}, computed by
the product with one exact balanced-factor division per step (each partial
product is itself a q-binomial up to sign, so every division is exact).
For n < 0 the same product applies, via [x] < 0 for x < 0; this extension is
exercised only by tests.
"""

from __future__ import annotations

import threading

from .kernel import qdiv
from .scalar import ONE, LaurentPoly, QScalar


def bal(l: int) -> LaurentPoly:
    """The balanced factor q^l - q^{-l} (antisymmetric in l, zero at 0)."""
    if l == 0:
        return LaurentPoly()
    return LaurentPoly({(0, l, 0): 1, (0, -l, 0): -1})


def quantum_int(l: int) -> LaurentPoly:
    """[l] = q^{l-1} + q^{l-3} + ... + q^{1-l}, with [-l] = -[l]."""
    if l == 0:
        return LaurentPoly()
    sign = 1 if l > 0 else -1
    n = abs(l)
    return LaurentPoly({(0, n - 1 - 2 * i, 0): sign for i in range(n)})


class QBinomTable:
    """Memo for balanced q-binomials; safe under concurrent lookups."""

    def __init__(self):
        self._memo: dict[tuple[int, int], LaurentPoly] = {}
        self._lock = threading.Lock()

    def get(self, n: int, m: int) -> LaurentPoly:
        key = (n, m)
        with self._lock:
            hit = self._memo.get(key)
        if hit is not None:
            return hit
        val = _qbinom_product(n, m)
        with self._lock:
            self._memo[key] = val
        return val


def _qbinom_product(n: int, m: int) -> LaurentPoly:
    if m < 0:
        return LaurentPoly()
    c = ONE
    for t in range(1, m + 1):
        c = c * bal(n - m + t)
        if c.is_zero():
            return c
        quo = qdiv(c.terms, t)
        if quo is None:
            raise ArithmeticError(f"q-binomial product step not exact at ({n},{m},{t})")
        c = LaurentPoly(quo)
    return c


_TABLE = QBinomTable()


def qbinom(n: int, m: int, table: QBinomTable | None = None) -> LaurentPoly:
    return (table or _TABLE).get(n, m)


def abinom(m: int, n: int) -> QScalar:
    """The a-deformed binomial {m brack n}_a as a QScalar."""
    if n < 0:
        raise ValueError(f"abinom needs n >= 0, got n={n}")
    num = ONE
    den: dict[int, int] = {}
    for l in range(n):
        num = num * LaurentPoly({(1, m - l, 0): 1, (-1, l - m, 0): -1})
        den[l + 1] = 1
    return QScalar(num, den)


def closure_s_factor(kind: str, count: int, j: int) -> QScalar:
    """Product of `count` s-dependent closure factors.

    kind "up": (a s^{-1} q^{-j-l} - a^{-1} s q^{l+j}) / (q^{l+1} - q^{-l-1})
    kind "op": (s q^{j-l} - s^{-1} q^{l-j}) / (q^{l+1} - q^{-l-1})
    """
    if count < 0:
        raise ValueError(f"closure factor count must be >= 0, got {count}")
    num = ONE
    den: dict[int, int] = {}
    for l in range(count):
        if kind == "up":
            f = LaurentPoly({(1, -j - l, -1): 1, (-1, l + j, 1): -1})
        elif kind == "op":
            f = LaurentPoly({(0, j - l, 1): 1, (0, l - j, -1): -1})
        else:
            raise ValueError(f"unknown closure factor kind {kind!r}")
        num = num * f
        den[l + 1] = 1
    return QScalar(num, den)


def unknot_colored(n: int) -> QScalar:
    """Colored unknot value P_n(unknot) = {0 brack n}_a."""
    return abinom(0, n)
