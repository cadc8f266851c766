"""Exact arithmetic for the coefficient ring Z[a^{±1}, s^{±1}](q).

Two layers:

* LaurentPoly — sparse Laurent polynomial in (a, q, s) with arbitrary-
  precision integer coefficients, stored as a dict from exponent triples
  (e_a, e_q, e_s) to nonzero ints.
* QScalar — a LaurentPoly numerator over a denominator that is a multiset of
  balanced quantum factors (q^l - q^{-l}).  Every denominator the skein
  calculus produces has this shape, so reduction is trial exact division by
  single factors and no polynomial GCD is ever needed.

All values are immutable by convention: no method mutates its receiver.
"""

from __future__ import annotations

import json

from .kernel import Accum, mul, qdiv


class LaurentPoly:
    """Sparse Laurent polynomial in (a, q, s) over Z."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        if terms:
            self.terms = {k: c for k, c in terms.items() if c}
        else:
            self.terms = {}

    # -- constructors -------------------------------------------------

    @staticmethod
    def from_int(c: int) -> "LaurentPoly":
        return LaurentPoly({(0, 0, 0): c} if c else None)

    @staticmethod
    def monomial(c: int, ea: int = 0, eq: int = 0, es: int = 0) -> "LaurentPoly":
        return LaurentPoly({(ea, eq, es): c} if c else None)

    # -- predicates ---------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self.terms == ({(0, 0, 0): other} if other else {})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    # -- ring operations ----------------------------------------------

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        acc = Accum()
        acc.add_poly(self.terms, 0, 0, 0, 1)
        acc.add_poly(other.terms, 0, 0, 0, 1)
        return LaurentPoly(acc.to_terms())

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        acc = Accum()
        acc.add_poly(self.terms, 0, 0, 0, 1)
        acc.add_poly(other.terms, 0, 0, 0, -1)
        return LaurentPoly(acc.to_terms())

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({k: -c for k, c in self.terms.items()})

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        return LaurentPoly(mul(self.terms, other.terms))

    def scale(self, c: int) -> "LaurentPoly":
        if not c:
            return LaurentPoly()
        return LaurentPoly({k: c * v for k, v in self.terms.items()})

    def shifted(self, da: int = 0, dq: int = 0, ds: int = 0) -> "LaurentPoly":
        if not (da or dq or ds):
            return self
        return LaurentPoly(
            {(ea + da, eq + dq, es + ds): c for (ea, eq, es), c in self.terms.items()}
        )

    # -- exponent ranges ----------------------------------------------

    def exp_range(self, axis: int) -> tuple[int, int]:
        """(min, max) exponent along axis 0=a, 1=q, 2=s; (0, 0) for 0."""
        if not self.terms:
            return (0, 0)
        exps = [k[axis] for k in self.terms]
        return (min(exps), max(exps))

    def involves(self, axis: int) -> bool:
        return any(k[axis] for k in self.terms)

    # -- substitutions ------------------------------------------------

    def subst_monomial(self, axis: int, sign: int, qexp: int) -> "LaurentPoly":
        """Substitute variable #axis (0=a, 2=s) by sign * q^qexp."""
        if axis not in (0, 2):
            raise ValueError("only a and s take monomial substitutions")
        out: dict = {}
        for (ea, eq, es), c in self.terms.items():
            e = ea if axis == 0 else es
            if sign < 0 and e % 2:
                c = -c
            key = (0, eq + qexp * e, es) if axis == 0 else (ea, eq + qexp * e, 0)
            v = out.get(key, 0) + c
            if v:
                out[key] = v
            elif key in out:
                del out[key]
        return LaurentPoly(out)

    def subst_q_inverse(self) -> "LaurentPoly":
        return LaurentPoly({(ea, -eq, es): c for (ea, eq, es), c in self.terms.items()})

    def eval_mod(self, a0: int, q0: int, s0: int, p: int) -> int:
        """Evaluate at integer points modulo prime p (negative exponents use
        pow's modular inverse)."""
        total = 0
        for (ea, eq, es), c in self.terms.items():
            v = c % p
            for base, e in ((a0, ea), (q0, eq), (s0, es)):
                if e:
                    v = v * pow(base, e, p) % p
            total = (total + v) % p
        return total

    # -- display ------------------------------------------------------

    def sorted_terms(self):
        """Terms sorted ascending by (e_a, e_s, e_q)."""
        return sorted(self.terms.items(), key=lambda t: (t[0][0], t[0][2], t[0][1]))

    def __repr__(self):
        return f"LaurentPoly({format_poly(self)})"


ZERO = LaurentPoly()
ONE = LaurentPoly.from_int(1)


def format_monomial(ea: int, eq: int, es: int) -> str:
    parts = []
    for name, e in (("a", ea), ("q", eq), ("s", es)):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return " ".join(parts)


def format_poly(x: LaurentPoly) -> str:
    if x.is_zero():
        return "0"
    chunks = []
    for (ea, eq, es), c in x.sorted_terms():
        mono = format_monomial(ea, eq, es)
        mag = abs(c)
        if mono and mag == 1:
            body = mono
        elif mono:
            body = f"{mag} {mono}"
        else:
            body = str(mag)
        if not chunks:
            chunks.append(body if c > 0 else f"-{body}")
        else:
            chunks.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(chunks)


class QScalar:
    """Element num / prod_l (q^l - q^{-l})^{den[l]} of Z[a^{±1}, s^{±1}](q)."""

    __slots__ = ("num", "den")

    def __init__(self, num: LaurentPoly, den: dict | None = None, normalized=False):
        if den:
            for l, m in den.items():
                if l < 1 or m < 1:
                    raise ValueError(f"bad denominator factor [{l}]^{m}")
        if num.is_zero():
            self.num = ZERO
            self.den = {}
            return
        self.num = num
        self.den = dict(den) if den else {}
        if not normalized:
            self._reduce()

    def _reduce(self) -> None:
        """Trial-divide den factors into num until none divides (fixpoint)."""
        num = self.num.terms
        den = self.den
        progress = True
        while progress and den:
            progress = False
            for l in sorted(den, reverse=True):
                while den.get(l, 0) > 0:
                    quo = qdiv(num, l)
                    if quo is None:
                        break
                    num = quo
                    den[l] -= 1
                    if not den[l]:
                        del den[l]
                    progress = True
        self.num = LaurentPoly(num)
        self.den = den

    # -- constructors -------------------------------------------------

    @staticmethod
    def from_int(c: int) -> "QScalar":
        return QScalar(LaurentPoly.from_int(c))

    @staticmethod
    def from_poly(x: LaurentPoly) -> "QScalar":
        return QScalar(x)

    # -- predicates ---------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_monomial(self) -> bool:
        return not self.den and self.num.is_monomial()

    def is_integral(self) -> bool:
        """True when the denominator has cleared completely."""
        return not self.den

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = QScalar.from_int(other)
        if not isinstance(other, QScalar):
            return NotImplemented
        if self.den == other.den:
            return self.num == other.num
        return (self - other).is_zero()

    def __hash__(self):
        raise TypeError("QScalar is not hashable (no unique representation)")

    # -- arithmetic ----------------------------------------------------

    def _den_complement(self, target: dict) -> dict:
        """Terms of prod target / prod self.den as a poly multiset product."""
        extra = {}
        for l, m in target.items():
            d = m - self.den.get(l, 0)
            if d:
                extra[l] = d
        return extra

    def __add__(self, other) -> "QScalar":
        if isinstance(other, int):
            other = QScalar.from_int(other)
        den = dict(self.den)
        for l, m in other.den.items():
            if m > den.get(l, 0):
                den[l] = m
        a = _scale_up(self.num, self._den_complement(den))
        b = _scale_up(other.num, other._den_complement(den))
        return QScalar(a + b, den)

    def __radd__(self, other):
        return self.__add__(other)

    def __sub__(self, other) -> "QScalar":
        if isinstance(other, int):
            other = QScalar.from_int(other)
        return self + (-other)

    def __neg__(self) -> "QScalar":
        return QScalar(-self.num, self.den, normalized=True)

    def __mul__(self, other) -> "QScalar":
        if isinstance(other, int):
            return QScalar(self.num.scale(other), self.den)
        if isinstance(other, LaurentPoly):
            return QScalar(self.num * other, self.den)
        den = dict(self.den)
        for l, m in other.den.items():
            den[l] = den.get(l, 0) + m
        return QScalar(self.num * other.num, den)

    def __rmul__(self, other):
        return self.__mul__(other)

    def div_quantum(self, l: int) -> "QScalar":
        """Exact division by the balanced factor (q^l - q^{-l})."""
        den = dict(self.den)
        den[l] = den.get(l, 0) + 1
        return QScalar(self.num, den)

    # -- substitution ---------------------------------------------------

    def substitute(self, a=None, s=None, q_inverse=False) -> "QScalar":
        """Substitute a and/or s by signed q-monomials (sign, exponent) and/or
        invert q.  Denominator factors are q-symmetric up to sign:
        (q^l - q^{-l}) -> -(q^l - q^{-l}), so inversion flips the numerator
        sign once per factor."""
        num = self.num
        if a is not None:
            num = num.subst_monomial(0, a[0], a[1])
        if s is not None:
            num = num.subst_monomial(2, s[0], s[1])
        if q_inverse:
            num = num.subst_q_inverse()
            if sum(self.den.values()) % 2:
                num = -num
        return QScalar(num, self.den)

    def invert_variables(self) -> "QScalar":
        """Value at (a, q, s) -> (a^{-1}, q^{-1}, s^{-1}).  Denominator
        factors are q-symmetric up to sign, so inversion flips the numerator
        sign once per factor."""
        num = LaurentPoly(
            {(-ea, -eq, -es): c for (ea, eq, es), c in self.num.terms.items()}
        )
        if sum(self.den.values()) % 2:
            num = -num
        return QScalar(num, self.den, normalized=True)

    # -- canonical form -------------------------------------------------

    def canonicalize(self) -> "QScalar":
        """Divide by the unique signed monomial ±a^α q^β s^γ that makes the
        numerator's minimal a-, s-, and q-exponents zero with the smallest
        (e_a, e_s, e_q) term positive.  Errors on zero."""
        if self.is_zero():
            raise ZeroDivisionError("canonicalize(0) is undefined")
        terms = self.num.terms
        da = min(k[0] for k in terms)
        dq = min(k[1] for k in terms)
        ds = min(k[2] for k in terms)
        shifted = {(ea - da, eq - dq, es - ds): c for (ea, eq, es), c in terms.items()}
        lead = min(shifted, key=lambda k: (k[0], k[2], k[1]))
        if shifted[lead] < 0:
            shifted = {k: -c for k, c in shifted.items()}
        return QScalar(LaurentPoly(shifted), self.den, normalized=True)

    # -- serialization ----------------------------------------------------

    def to_json_obj(self) -> dict:
        num = [
            {"a": ea, "q": eq, "s": es, "c": str(c)}
            for (ea, eq, es), c in self.num.sorted_terms()
        ]
        den = [{"l": l, "mult": m} for l, m in sorted(self.den.items())]
        return {"num": num, "den": den}

    @staticmethod
    def from_json_obj(obj: dict) -> "QScalar":
        terms = {(t["a"], t["q"], t["s"]): int(t["c"]) for t in obj["num"]}
        den = {d["l"]: d["mult"] for d in obj["den"]}
        return QScalar(LaurentPoly(terms), den, normalized=True)

    def dumps(self) -> str:
        return json.dumps(self.to_json_obj(), separators=(",", ":"))

    @staticmethod
    def loads(text: str) -> "QScalar":
        return QScalar.from_json_obj(json.loads(text))

    # -- display -----------------------------------------------------------

    def format_text(self) -> str:
        num = format_poly(self.num)
        if not self.den:
            return num
        den = " ".join(
            f"[{l}]^{m}" if m > 1 else f"[{l}]" for l, m in sorted(self.den.items())
        )
        if len(self.num.terms) > 1:
            num = f"({num})"
        return f"{num} / {den}"

    def __repr__(self):
        return f"QScalar({self.format_text()})"


def _scale_up(num: LaurentPoly, extra: dict) -> LaurentPoly:
    """num * prod_l (q^l - q^{-l})^extra[l]."""
    out = num
    for l, m in extra.items():
        f = LaurentPoly({(0, l, 0): 1, (0, -l, 0): -1})
        for _ in range(m):
            out = out * f
    return out


Q_ZERO = QScalar.from_int(0)
Q_ONE = QScalar.from_int(1)
