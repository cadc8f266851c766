"""Brute-force one-index-per-crossing evaluator, used as a cross-check oracle.

Evaluates the reduced colored invariant as the literal multi-dimensional sum:
one summation index per crossing, a signed monomial and a q-binomial per
crossing, and a closure factor on the last index.  Exponentially slower than
the engine's state-vector walk; written straight from the twist-rule table so
the two share no evaluation code beyond the scalar ring and q-combinatorics
primitives.
"""

from qhomfly.qcomb import abinom, closure_s_factor, qbinom
from qhomfly.scalar import LaurentPoly, QScalar, Q_ZERO
from qhomfly.twobridge import TwoBridgeLink, strand_pattern

# (kind, family) -> (next family, e_a, e_q, e_s) with h the new index and
# k the previous one; the crossing contributes (-1)^h a^e_a q^e_q s^e_s
# times a q-binomial ([h k] for top twists, [j-h k-h] for right twists)
_CROSSING = {
    ("T", "UP"): ("UPs", lambda j, h, k: (0, h * (k + 1), k)),
    ("T", "UPs"): ("UP", lambda j, h, k: (0, h * (k + 1), h)),
    ("T", "OPs"): ("RI", lambda j, h, k: (k, -2 * j * k + h * (k + 1), h - k)),
    ("T", "OP"): ("RIs", lambda j, h, k: (k, -2 * j * k + h * (k + 1), -k)),
    ("T", "RI"): ("OPs", lambda j, h, k: (h, h * (k + 1 - 2 * j), k - h)),
    ("T", "RIs"): ("OP", lambda j, h, k: (h, h * (k + 1 - 2 * j), -h)),
    ("R", "UP"): ("OP", lambda j, h, k: (h, j * k + h * (1 - k - j), k - h)),
    ("R", "UPs"): ("OPs", lambda j, h, k: (h, j * k + h * (1 - k - j), -h)),
    ("R", "OP"): ("UP", lambda j, h, k: (k, -j * k + h * (1 + j - k), h - k)),
    ("R", "OPs"): ("UPs", lambda j, h, k: (k, -j * k + h * (1 + j - k), -k)),
    ("R", "RI"): ("RIs", lambda j, h, k: (0, j * k + h * (1 + j - k), k)),
    ("R", "RIs"): ("RI", lambda j, h, k: (0, j * k + h * (1 + j - k), h)),
}

_VERTICAL = {"UP", "OP"}
_PARTNER = {"UP": "RI", "RI": "UP", "OP": "OPs", "OPs": "OP"}


def _closure(family: str, j: int, k: int, knot: bool) -> QScalar:
    if family == "UP":
        f = abinom(-k, j - k) * closure_s_factor("up", k, j)
    elif family == "OP":
        f = abinom(-k, j - k) * closure_s_factor("op", k, j)
    elif family == "RI":
        f = abinom(k - j, k) * closure_s_factor("up", j - k, j)
    elif family == "OPs":
        f = abinom(k - j, k) * closure_s_factor("op", j - k, j)
    else:
        raise ValueError(f"family {family} has no closure")
    return f.substitute(s=(1, 0)) if knot else f


def nested_eval(link: TwoBridgeLink, j: int, start: str = "auto") -> QScalar:
    """Raw reduced value of the link at color j by exhaustive summation."""
    entries = link.cf.entries
    knot = link.components == 1
    if start == "auto":
        start = strand_pattern(link.cf) or "UP"
    # crossing kinds in application order: a_1 top twists, a_2 right, ...
    kinds = []
    for pos, count in enumerate(reversed(entries)):
        kinds.extend(["T", "R"][pos % 2] * count)

    # the family track is index-independent, so it is fixed once
    families = [start]
    for kind in kinds:
        families.append(_CROSSING[(kind, families[-1])][0])
    final = families[-1]
    if knot and final in ("UPs", "RIs"):
        final = {"UPs": "UP", "RIs": "RI"}[final]
    need_vertical = len(entries) % 2 == 1
    if (final in _VERTICAL) != need_vertical:
        if not knot:
            raise ValueError(f"misaligned two-component closure for {entries}")
        final = _PARTNER[final]

    total = Q_ZERO
    stack = [(0, 0, LaurentPoly.from_int(1))]  # (depth, prev index, monomial product)
    while stack:
        depth, k, prod = stack.pop()
        if depth == len(kinds):
            total = total + QScalar(prod) * _closure(final, j, k, knot)
            continue
        kind = kinds[depth]
        fam = families[depth]
        rng = range(k, j + 1) if kind == "T" else range(0, k + 1)
        for h in rng:
            e_a, e_q, e_s = _CROSSING[(kind, fam)][1](j, h, k)
            binom = qbinom(h, k) if kind == "T" else qbinom(j - h, k - h)
            if binom.is_zero():
                continue
            mono = LaurentPoly.monomial(
                (-1) ** h, ea=e_a, eq=e_q, es=0 if knot else e_s
            )
            stack.append((depth + 1, h, prod * mono * binom))
    return total
