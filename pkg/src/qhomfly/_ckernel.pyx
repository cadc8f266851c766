# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled term kernel for sparse Laurent polynomials in (a, q, s).

Same three entry points and semantics as _kernel_py: term dicts map exponent
triples to nonzero ints.  Internally each triple is packed into one signed
64-bit key (14 bits e_a, 35 bits e_q, 14 bits e_s, all sign-biased), so the
hot accumulation loops do C integer adds instead of building and hashing
tuples.  Input exponents outside |e_a|, |e_s| < 4096 or |e_q| < 2^33 raise
OverflowError; each field keeps one headroom bit so any pairwise product of
in-range terms stays in range.  The engine sits orders of magnitude below
these bounds at any feasible color.  Coefficients remain arbitrary-precision
Python ints.
"""

cdef long long LIM_AS = 4096            # inputs: |e_a|, |e_s| < 2^12
cdef long long LIM_Q = 8589934592       # inputs: |e_q| < 2^33
cdef long long BIAS_AS = 8192           # field bias 2^13, width 14 bits
cdef long long BIAS_Q = 17179869184     # field bias 2^34, width 35 bits
cdef int SHIFT_Q = 14
cdef int SHIFT_A = 49
cdef long long MASK_AS = 16383          # 2^14 - 1
cdef long long MASK_Q = 34359738367    # 2^35 - 1
cdef long long ORIGIN = (BIAS_AS << SHIFT_A) | (BIAS_Q << SHIFT_Q) | BIAS_AS


cdef inline long long _pack(long long ea, long long eq, long long es) except? -1:
    if ea <= -LIM_AS or ea >= LIM_AS or es <= -LIM_AS or es >= LIM_AS \
            or eq <= -LIM_Q or eq >= LIM_Q:
        raise OverflowError(
            f"exponent ({ea}, {eq}, {es}) outside the packed 14/35/14-bit range"
        )
    return ((ea + BIAS_AS) << SHIFT_A) | ((eq + BIAS_Q) << SHIFT_Q) | (es + BIAS_AS)


cdef inline tuple _unpack(long long key):
    return (
        (key >> SHIFT_A) - BIAS_AS,
        ((key >> SHIFT_Q) & MASK_Q) - BIAS_Q,
        (key & MASK_AS) - BIAS_AS,
    )


cdef dict _packed(dict A, long long da, long long dq, long long ds, coeff):
    """{packed(key + delta): coeff * c} for a tuple-keyed term dict."""
    cdef dict out = {}
    cdef long long ea, eq, es
    for (ea, eq, es), c in A.items():
        out[_pack(ea + da, eq + dq, es + ds)] = coeff * c
    return out


cdef _accumulate_product(dict buf, dict A, dict B):
    """buf += A * B, all three packed-keyed; B's values already scaled."""
    cdef long long ka, kb, key, da
    cdef list items = list(B.items())
    for ka, ca in A.items():
        da = ka - ORIGIN
        for kb, cb in items:
            key = da + kb
            v = buf.get(key, 0) + ca * cb
            if v:
                buf[key] = v
            elif key in buf:
                del buf[key]


def mul(dict A, dict B) -> dict:
    """Product of two term dicts."""
    if not A or not B:
        return {}
    if len(A) < len(B):
        A, B = B, A
    cdef dict pa = _packed(A, 0, 0, 0, 1)
    cdef dict pb = _packed(B, 0, 0, 0, 1)
    cdef dict buf = {}
    _accumulate_product(buf, pa, pb)
    cdef dict out = {}
    cdef long long key
    for key, c in buf.items():
        out[_unpack(key)] = c
    return out


cdef class Accum:
    """Multiply-accumulate buffer: acc += coeff * a^da q^dq s^ds * A (* B)."""

    cdef dict buf

    def __cinit__(self):
        self.buf = {}

    def add_poly(self, dict A, long long da, long long dq, long long ds, coeff):
        if not coeff or not A:
            return
        cdef dict buf = self.buf
        cdef long long ea, eq, es, key
        for (ea, eq, es), c in A.items():
            key = _pack(ea + da, eq + dq, es + ds)
            v = buf.get(key, 0) + coeff * c
            if v:
                buf[key] = v
            elif key in buf:
                del buf[key]

    def add_mul(self, dict A, dict B, long long da, long long dq, long long ds, coeff):
        if not coeff or not A or not B:
            return
        if len(A) < len(B):
            A, B = B, A
        # fold the shift and coefficient into the shorter factor
        cdef dict pa = _packed(A, 0, 0, 0, 1)
        cdef dict pb = _packed(B, da, dq, ds, coeff)
        _accumulate_product(self.buf, pa, pb)

    def to_terms(self) -> dict:
        cdef dict out = {}
        cdef long long key
        for key, c in self.buf.items():
            out[_unpack(key)] = c
        return out


def qdiv(dict A, int l):
    """Exact quotient A / (q^l - q^{-l}), or None when division leaves a
    remainder.  Same residue-class synthetic division as the pure kernel."""
    if l < 1:
        raise ValueError(f"quantum factor index must be >= 1, got {l}")
    if not A:
        return {}
    cdef dict strata = {}
    cdef long long ea, eq, es
    for (ea, eq, es), c in A.items():
        strata.setdefault((ea, es), {})[eq] = c
    cdef long long step = 2 * l
    cdef dict out = {}
    cdef long long lo, floor, e, r
    for (ea, es), col in strata.items():
        lo = min(col)
        classes = {}
        for e in col:
            classes.setdefault((e - lo) % step, []).append(e)
        for r, exps in classes.items():
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
