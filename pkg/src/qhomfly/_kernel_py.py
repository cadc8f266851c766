"""Pure-Python term kernel for sparse Laurent polynomials in (a, q, s).

A polynomial is a plain dict mapping exponent triples (e_a, e_q, e_s) to
nonzero Python ints.  The compiled twin (_ckernel) implements the same three
entry points with identical semantics; kernel.py picks one at import time.

Hot paths are written against dict primitives only, no helper calls per term.
"""

from __future__ import annotations


def mul(A: dict, B: dict) -> dict:
    """Product of two term dicts."""
    if not A or not B:
        return {}
    if len(A) < len(B):
        A, B = B, A
    out: dict = {}
    get = out.get
    items = list(B.items())
    for (ea, eq, es), ca in A.items():
        for (fa, fq, fs), cb in items:
            key = (ea + fa, eq + fq, es + fs)
            v = get(key, 0) + ca * cb
            if v:
                out[key] = v
            elif key in out:
                del out[key]
    return out


class Accum:
    """Multiply-accumulate buffer: acc += coeff * a^da q^dq s^ds * A (* B)."""

    __slots__ = ("buf",)

    def __init__(self):
        self.buf = {}

    def add_poly(self, A: dict, da: int, dq: int, ds: int, coeff: int) -> None:
        if not coeff or not A:
            return
        buf = self.buf
        get = buf.get
        for (ea, eq, es), c in A.items():
            key = (ea + da, eq + dq, es + ds)
            v = get(key, 0) + coeff * c
            if v:
                buf[key] = v
            elif key in buf:
                del buf[key]

    def add_mul(self, A: dict, B: dict, da: int, dq: int, ds: int, coeff: int) -> None:
        if not coeff or not A or not B:
            return
        if len(A) < len(B):
            A, B = B, A
        buf = self.buf
        get = buf.get
        items = [(fa + da, fq + dq, fs + ds, coeff * cb)
                 for (fa, fq, fs), cb in B.items()]
        for (ea, eq, es), ca in A.items():
            for fa, fq, fs, cb in items:
                key = (ea + fa, eq + fq, es + fs)
                v = get(key, 0) + ca * cb
                if v:
                    buf[key] = v
                elif key in buf:
                    del buf[key]

    def to_terms(self) -> dict:
        return dict(self.buf)


def qdiv(A: dict, l: int) -> dict | None:
    """Exact quotient A / (q^l - q^{-l}), or None when division leaves a
    remainder.

    Works stratum by stratum in (e_a, e_s): each stratum is a Laurent
    polynomial in q alone, and divisibility by (q^l - q^{-l}) is equivalent
    to divisibility of the min-shifted ordinary polynomial by x^{2l} - 1,
    which is synthetic division chained along residue classes mod 2l.
    """
    if l < 1:
        raise ValueError(f"quantum factor index must be >= 1, got {l}")
    if not A:
        return {}
    strata: dict = {}
    for (ea, eq, es), c in A.items():
        strata.setdefault((ea, es), {})[eq] = c
    step = 2 * l
    out: dict = {}
    for (ea, es), col in strata.items():
        lo = min(col)
        # residue classes of e - lo mod 2l that actually occur
        classes: dict = {}
        for e in col:
            classes.setdefault((e - lo) % step, []).append(e)
        for r, exps in classes.items():
            # v * q^e = v * q^{e-l} * (q^l - q^{-l}) + v * q^{e-2l}:
            # emit quotient at e-l, carry v down to e-2l, until the lowest
            # slot of the class, whose total must vanish.
            floor = lo + r
            carry = 0
            e = max(exps)
            while e > floor:
                carry += col.get(e, 0)
                if carry:
                    out[(ea, e - l, es)] = carry
                e -= step
            if carry + col.get(floor, 0) != 0:
                return None
    return out
