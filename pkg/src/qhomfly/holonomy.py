"""Guess and validate linear q-difference recurrences for color sequences.

A sequence f_0, f_1, ... of scalars satisfies a q-holonomic recurrence of
order d when there are polynomials a_0, ..., a_d in M (coefficients Laurent
in a and q, a_d != 0) with

    sum_{l=0}^{d} a_l(q, q^n) * f_{n+l} = 0        for every n,

i.e. the operator A = sum_l a_l(q, M) L^l annihilates f, where L shifts the
index and M scales by q^n (so L M = q M L).  `guess_recurrence` finds the
minimal such operator inside a given (order, M-degree) box by exact linear
algebra on a window of the sequence; `validate` re-checks a found operator
on held-out indices.  All arithmetic is exact.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass

from .scalar import LaurentPoly, QScalar, Q_ZERO

_SCREEN_PRIME = (1 << 61) - 1


class ResourceBudgetError(RuntimeError):
    """Raised when intermediate polynomial sizes exceed the configured cap."""


@dataclass(frozen=True)
class SequenceWindow:
    """Consecutive run of colored values f_start, ..., f_{start+n-1}.

    Values must already have the framing variable s specialized away
    (knot evaluations, or link evaluations after `specialize`).
    """

    link_id: str
    start: int
    values: tuple

    def __post_init__(self):
        if self.start < 0:
            raise ValueError("window start must be nonnegative")
        for i, v in enumerate(self.values):
            if not isinstance(v, QScalar):
                raise TypeError(f"value {i} is not a QScalar")
            if v.num.involves(2):
                raise ValueError(f"value at index {self.start + i} still involves s")

    @classmethod
    def from_pairs(cls, link_id: str, pairs) -> "SequenceWindow":
        pairs = sorted(pairs)
        for (j0, _), (j1, _) in zip(pairs, pairs[1:]):
            if j1 != j0 + 1:
                raise ValueError(f"window has a gap between colors {j0} and {j1}")
        return cls(link_id, pairs[0][0], tuple(v for _, v in pairs))

    def __len__(self) -> int:
        return len(self.values)

    @property
    def stop(self) -> int:
        return self.start + len(self.values)

    def value(self, n: int) -> QScalar:
        if not self.start <= n < self.stop:
            raise IndexError(f"color {n} outside window [{self.start}, {self.stop})")
        return self.values[n - self.start]

    def head(self, count: int) -> "SequenceWindow":
        return SequenceWindow(self.link_id, self.start, self.values[:count])


@dataclass(frozen=True)
class RecurrenceOperator:
    """Operator sum_l a_l(q, M) L^l; coeffs[l][m] is the M^m coefficient of a_l.

    Coefficients are stored cleared of common content (no shared monomial or
    integer factor, leading coefficient sign-normalized); the top coefficient
    a_d is nonzero.
    """

    order: int
    mdeg: int
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != self.order + 1:
            raise ValueError("coeffs must have order+1 rows")
        for a_l in self.coeffs:
            if len(a_l) != self.mdeg + 1:
                raise ValueError("each coefficient must have mdeg+1 M-powers")
            for c in a_l:
                if not isinstance(c, QScalar):
                    raise TypeError("coefficients must be QScalars")
                if c.num.involves(2):
                    raise ValueError("coefficients cannot involve s")
        if all(c.is_zero() for c in self.coeffs[self.order]):
            raise ValueError("top coefficient a_d must be nonzero")

    def coefficient_at(self, l: int, n: int) -> QScalar:
        """a_l evaluated at M = q^n."""
        out = Q_ZERO
        for m, c in enumerate(self.coeffs[l]):
            if not c.is_zero():
                out = out + c * LaurentPoly.monomial(1, eq=n * m)
        return out

    def to_json_obj(self) -> dict:
        return {
            "order": self.order,
            "mdeg": self.mdeg,
            "coeffs": [[c.to_json_obj() for c in a_l] for a_l in self.coeffs],
        }

    @staticmethod
    def from_json_obj(obj: dict) -> "RecurrenceOperator":
        coeffs = tuple(
            tuple(QScalar.from_json_obj(c) for c in a_l) for a_l in obj["coeffs"]
        )
        return RecurrenceOperator(obj["order"], obj["mdeg"], coeffs)

    def dumps(self) -> str:
        return json.dumps(self.to_json_obj(), separators=(",", ":"))

    @staticmethod
    def loads(text: str) -> "RecurrenceOperator":
        return RecurrenceOperator.from_json_obj(json.loads(text))

    def format_text(self) -> str:
        parts = []
        for l in range(self.order, -1, -1):
            terms = []
            for m, c in enumerate(self.coeffs[l]):
                if c.is_zero():
                    continue
                body = c.format_text()
                if len(c.num.terms) > 1 or c.den:
                    body = f"({body})"
                terms.append(body if m == 0 else
                             f"{body}*M" if m == 1 else f"{body}*M^{m}")
            if not terms:
                continue
            a_l = " + ".join(terms)
            if len(terms) > 1:
                a_l = f"({a_l})"
            parts.append(a_l if l == 0 else
                         f"{a_l}*L" if l == 1 else f"{a_l}*L^{l}")
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class ValidationReport:
    passed: bool
    checks: tuple  # pairs (n, residual_is_zero)

    @property
    def first_failure(self):
        for n, ok in self.checks:
            if not ok:
                return n
        return None


def apply_operator(op: RecurrenceOperator, window: SequenceWindow, n: int) -> QScalar:
    """sum_l a_l(q, q^n) * f_{n+l}, exact."""
    if n < window.start or n + op.order >= window.stop:
        raise ValueError(
            f"window [{window.start}, {window.stop}) does not cover "
            f"f_{n} .. f_{n + op.order}"
        )
    out = Q_ZERO
    for l in range(op.order + 1):
        c = op.coefficient_at(l, n)
        if not c.is_zero():
            out = out + c * window.value(n + l)
    return out


def validate(op: RecurrenceOperator, window: SequenceWindow, holdout: int) -> ValidationReport:
    """Check the recurrence at every n whose evaluation touches the last
    `holdout` window values (fit and holdout sets disjoint by construction)."""
    if holdout < 1:
        raise ValueError("holdout must be positive")
    if len(window) < op.order + holdout:
        raise ValueError("window too short for this holdout")
    lo = max(window.start, window.stop - holdout - op.order)
    hi = window.stop - op.order  # n + order ranges over the holdout block
    checks = []
    for n in range(lo, hi):
        checks.append((n, apply_operator(op, window, n).is_zero()))
    return ValidationReport(all(ok for _, ok in checks), tuple(checks))


# -- exact linear algebra over Z[a^{±1}, q^{±1}] -----------------------------

_ONE = LaurentPoly.from_int(1)


def _divexact(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    """Exact quotient f / g in the Laurent ring; raises if not divisible."""
    if g.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if f.is_zero():
        return LaurentPoly()
    if g.is_monomial():
        (gk, gc), = g.terms.items()
        out = {}
        for fk, fc in f.terms.items():
            q, r = divmod(fc, gc)
            if r:
                raise ArithmeticError("inexact coefficient division")
            out[(fk[0] - gk[0], fk[1] - gk[1], fk[2] - gk[2])] = q
        return LaurentPoly(out)
    lead = max(g.terms)  # lex order on (ea, eq, es), monomial-compatible
    gc = g.terms[lead]
    # for an exact quotient the term keys sit lex-between min(f)-min(g) and
    # max(f)-max(g); a candidate below the floor proves inexactness
    gmin = min(g.terms)
    fmin = min(f.terms)
    floor = (fmin[0] - gmin[0], fmin[1] - gmin[1], fmin[2] - gmin[2])
    rem = dict(f.terms)
    quo = {}
    steps = 0
    while rem:
        steps += 1
        if steps > 1_000_000:
            raise ArithmeticError("runaway polynomial division")
        fk = max(rem)
        q, r = divmod(rem[fk], gc)
        if r:
            raise ArithmeticError("inexact polynomial division")
        mk = (fk[0] - lead[0], fk[1] - lead[1], fk[2] - lead[2])
        if mk < floor:
            raise ArithmeticError("inexact polynomial division")
        quo[mk] = q
        for gk, c in g.terms.items():
            key = (mk[0] + gk[0], mk[1] + gk[1], mk[2] + gk[2])
            nc = rem.get(key, 0) - q * c
            if nc:
                rem[key] = nc
            else:
                rem.pop(key, None)
    return LaurentPoly(quo)


def _bareiss_echelon(rows, budget):
    """Fraction-free row echelon; returns (rows, pivot_cols, original_pivot_rows)."""
    m = len(rows)
    n = len(rows[0]) if rows else 0
    perm = list(range(m))
    prev = _ONE
    rank = 0
    pivot_cols = []
    for col in range(n):
        cand = [i for i in range(rank, m) if not rows[i][col].is_zero()]
        if not cand:
            continue
        piv = min(cand, key=lambda i: len(rows[i][col]))
        rows[rank], rows[piv] = rows[piv], rows[rank]
        perm[rank], perm[piv] = perm[piv], perm[rank]
        p = rows[rank][col]
        for i in range(rank + 1, m):
            a_ic = rows[i][col]
            new_row = []
            for j in range(n):
                t = p * rows[i][j]
                if not a_ic.is_zero() and not rows[rank][j].is_zero():
                    t = t - a_ic * rows[rank][j]
                new_row.append(t if prev is _ONE else _divexact(t, prev))
            rows[i] = new_row
        prev = p
        pivot_cols.append(col)
        rank += 1
        size = sum(len(e) for r in rows for e in r)
        if size > budget:
            raise ResourceBudgetError(
                f"elimination size {size} terms exceeds budget {budget}"
            )
        if rank == m:
            break
    return rows, pivot_cols, perm[:rank]


def _bareiss_det(rows, budget) -> LaurentPoly:
    """Fraction-free determinant of a square Laurent-polynomial matrix."""
    n = len(rows)
    if n == 0:
        return _ONE
    rows = [list(r) for r in rows]
    prev = _ONE
    sign = 1
    for col in range(n):
        cand = [i for i in range(col, n) if not rows[i][col].is_zero()]
        if not cand:
            return LaurentPoly()
        piv = min(cand, key=lambda i: len(rows[i][col]))
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            sign = -sign
        p = rows[col][col]
        for i in range(col + 1, n):
            a_ic = rows[i][col]
            new_row = [LaurentPoly()] * (col + 1)
            for j in range(col + 1, n):
                t = p * rows[i][j]
                if not a_ic.is_zero() and not rows[col][j].is_zero():
                    t = t - a_ic * rows[col][j]
                new_row.append(t if prev is _ONE else _divexact(t, prev))
            rows[i] = new_row
        prev = p
        size = sum(len(e) for r in rows for e in r)
        if size > budget:
            raise ResourceBudgetError(
                f"determinant size {size} terms exceeds budget {budget}"
            )
    det = rows[n - 1][n - 1]
    return -det if sign < 0 else det


def _mod_nullity(rows, p=_SCREEN_PRIME) -> int:
    """Nullity of an integer matrix mod p (witness: zero nullity here proves
    zero nullity exactly, since specialization cannot raise rank)."""
    rows = [r[:] for r in rows]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col] % p), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], p - 2, p)
        rows[rank] = [x * inv % p for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col] % p:
                f = rows[i][col]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[rank])]
        rank += 1
        if rank == len(rows):
            break
    return ncols - rank


def _content_cleared(vec):
    """Divide a Laurent-polynomial vector by its common monomial and integer
    content; flip sign so the last nonzero entry's sorted-first term is positive."""
    nonzero = [v for v in vec if not v.is_zero()]
    if not nonzero:
        raise ValueError("zero vector has no content")
    da = min(min(k[0] for k in v.terms) for v in nonzero)
    dq = min(min(k[1] for k in v.terms) for v in nonzero)
    ds = min(min(k[2] for k in v.terms) for v in nonzero)
    g = 0
    for v in nonzero:
        for c in v.terms.values():
            g = math.gcd(g, c)
    out = []
    for v in vec:
        if v.is_zero():
            out.append(v)
        else:
            out.append(LaurentPoly(
                {(k[0] - da, k[1] - dq, k[2] - ds): c // g for k, c in v.terms.items()}
            ))
    last = next(v for v in reversed(out) if not v.is_zero())
    if last.terms[min(last.terms)] < 0:
        out = [-v for v in out]
    return out


def _clear_row(values):
    """Turn QScalar values f_n, ..., f_{n+d} into Laurent-polynomial entries
    sharing one cleared denominator."""
    common = {}
    for v in values:
        for l, mult in v.den.items():
            if mult > common.get(l, 0):
                common[l] = mult
    row = []
    for v in values:
        poly = v.num
        for l, mult in common.items():
            extra = mult - v.den.get(l, 0)
            if extra:
                bracket = LaurentPoly({(0, l, 0): 1, (0, -l, 0): -1})
                for _ in range(extra):
                    poly = poly * bracket
        row.append(poly)
    return row


def guess_recurrence(
    window: SequenceWindow,
    d_max: int,
    mdeg_max: int,
    *,
    a_free: bool = False,
    margin: int = 4,
    term_budget: int = 4_000_000,
    seed: int = 0,
):
    """Search (order, M-degree) boxes in minimal-(order, then M-degree) order
    for an operator annihilating the window; return it content-cleared, or
    None when every searchable shape admits only the trivial solution.

    A shape (d, m) is searchable only when the window supplies at least
    (d+1)(m+1) + margin equations; smaller windows cannot separate genuine
    operators from fitting noise, so such shapes are skipped.  With `a_free`
    the M-coefficients are restricted to q only (no a), and each equation is
    required to hold separately in every a-degree.

    Each candidate shape is first screened modulo a large prime at a random
    evaluation point: zero nullity there proves zero nullity exactly (rank
    cannot rise under specialization), so the exact elimination only runs on
    shapes that genuinely admit candidates.  Returned operators are re-checked
    exactly against the entire window.
    """
    if d_max < 0 or mdeg_max < 0:
        raise ValueError("bounds must be nonnegative")
    rng = random.Random(seed)
    p = _SCREEN_PRIME
    a0 = rng.randrange(2, p - 1)
    q0 = rng.randrange(2, p - 1)
    fmod = []
    for v in window.values:
        num = v.num.eval_mod(a0, q0, 1, p)
        den = 1
        for l, mult in v.den.items():
            b = (pow(q0, l, p) - pow(q0, -l, p)) % p
            den = den * pow(b, mult, p) % p
        fmod.append(num * pow(den, p - 2, p) % p)

    any_searchable = False
    for d in range(0, d_max + 1):
        for mdeg in range(0, mdeg_max + 1):
            ncols = (d + 1) * (mdeg + 1)
            neqs = len(window) - d
            if neqs < ncols + margin:
                continue
            any_searchable = True
            op = _fit_shape(window, d, mdeg, a_free, fmod, q0, p, term_budget)
            if op is not None:
                return op
    if not any_searchable:
        raise ValueError(
            f"window of {len(window)} values cannot certify any shape within "
            f"(order <= {d_max}, mdeg <= {mdeg_max}) at margin {margin}"
        )
    return None


def _fit_shape(window, d, mdeg, a_free, fmod, q0, p, budget):
    start, stop = window.start, window.stop
    ns = range(start, stop - d)

    mod_rows = []
    for n in ns:
        if a_free:
            break
        row = []
        for l in range(d + 1):
            base = fmod[n + l - start]
            for m in range(mdeg + 1):
                row.append(pow(q0, n * m, p) * base % p)
        mod_rows.append(row)
    if not a_free and _mod_nullity(mod_rows, p) == 0:
        return None

    rows = []
    for n in ns:
        values = [window.value(n + l) for l in range(d + 1)]
        cleared = _clear_row(values)
        if a_free:
            strata = sorted({k[0] for poly in cleared for k in poly.terms})
            for alpha in strata:
                row = []
                for l in range(d + 1):
                    part = LaurentPoly(
                        {(0, k[1], k[2]): c for k, c in cleared[l].terms.items()
                         if k[0] == alpha}
                    )
                    for m in range(mdeg + 1):
                        row.append(part.shifted(dq=n * m))
                rows.append(row)
        else:
            row = []
            for l in range(d + 1):
                for m in range(mdeg + 1):
                    row.append(cleared[l].shifted(dq=n * m))
            rows.append(row)

    if a_free:
        a_rows = [[e.eval_mod(1, q0, 1, p) for e in r] for r in rows]
        if len(a_rows) < len(rows[0]) + 1 or _mod_nullity(a_rows, p) == 0:
            return None

    work = [list(r) for r in rows]
    work, pivot_cols, pivot_rows = _bareiss_echelon(work, budget)
    ncols = len(rows[0])
    free_cols = [c for c in range(ncols) if c not in pivot_cols]
    if not free_cols:
        return None

    base = [rows[i] for i in pivot_rows]
    rank = len(pivot_cols)
    for fc in free_cols:
        support = sorted(pivot_cols + [fc])
        vec = [LaurentPoly()] * ncols
        for i, col in enumerate(support):
            keep = [c for c in support if c != col]
            minor = [[base[r][c] for c in keep] for r in range(rank)]
            det = _bareiss_det(minor, budget)
            if i % 2:
                det = -det
            vec[col] = det
        if all(v.is_zero() for v in vec):
            continue
        top = vec[d * (mdeg + 1): (d + 1) * (mdeg + 1)]
        if all(v.is_zero() for v in top):
            continue
        for r in rows:
            acc = LaurentPoly()
            for e, v in zip(r, vec):
                if not e.is_zero() and not v.is_zero():
                    acc = acc + e * v
            if not acc.is_zero():
                raise RuntimeError("kernel reconstruction failed exact re-check")
        vec = _content_cleared(vec)
        coeffs = tuple(
            tuple(QScalar.from_poly(vec[l * (mdeg + 1) + m]) for m in range(mdeg + 1))
            for l in range(d + 1)
        )
        return RecurrenceOperator(d, mdeg, coeffs)
    return None
