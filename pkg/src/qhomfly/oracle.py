"""Diagram-level invariants of two-bridge links, computed classically.

Everything here works on the closed plat diagram itself — crossings plus
wiring, oriented by tracing the strands — so the values come straight from
the defining relations: the HOMFLY polynomial by skein recursion down to
descending diagrams, the Jones polynomial by the Kauffman bracket state sum.
Neither touches the twist-operator engine, which makes them fit to vet it.

Conventions are pinned by three module constants (which through-path crosses
on top for each twist kind, and the sign of the framing variable's exponent
in the skein relation).  They are calibrated once against the right-handed
torus knots and frozen; the test suite asserts the calibration.
"""

from __future__ import annotations

from dataclasses import dataclass

from .scalar import LaurentPoly, QScalar, Q_ONE
from .twobridge import ContinuedFraction, plat_graph, traverse_cycles

# Through-path "A" joins slots 0-3, path "B" joins slots 1-2.  For a top
# twist, path A runs lower-left to upper-right; for a right twist it runs
# upper-left to lower-right.  Which path crosses on top, per twist kind:
# both twist groups glue copies of the same crossing picture, one rotated a
# quarter turn, so the strand on top switches between A and B.  Calibrated
# so [3] is the right trefoil and [2,2] the (amphichiral) figure eight.
T_OVER = "A"
R_OVER = "B"
# The skein relation used is a^E P(L+) - a^{-E} P(L-) = (q - q^{-1}) P(L0)
# with E below, normalized to 1 on the unknot.
A_EXP = 1

_Z = LaurentPoly({(0, 1, 0): 1, (0, -1, 0): -1})


@dataclass
class Diagram:
    """A closed oriented link diagram: crossings plus port wiring.

    kinds[i] is "T" or "R" (geometry of crossing i); over[i] names the
    through-path on top; dirs[i] gives the walk direction of paths A and B
    (+1 means entered at slot 0, resp. 1); wires maps each port to the port
    its arc reaches; loops counts crossing-free circles.
    """

    kinds: tuple[str, ...]
    over: dict
    dirs: dict
    wires: dict
    loops: int = 0
    pattern: str | None = None
    components: int = 1


def build_diagram(c: ContinuedFraction, pattern: str | None = None) -> Diagram:
    """Oriented plat diagram of a continued fraction.

    The component carrying the left bridge strand runs it upward.  For a
    two-component link, pattern "UP" (default) also runs the right bridge
    upward and "OP" runs it downward — the two relative orientations.  For
    a knot the pattern is intrinsic and the argument must be None or agree.
    """
    kinds, wires, tags = plat_graph(c)
    cycles = traverse_cycles(wires, tags)
    dirs: dict = {}
    realized = pattern or "UP"
    for ports, passes in cycles:
        net = dict(passes)
        if "L" in net and "R" in net:
            flip = net["L"] < 0
            realized = "UP" if net["L"] * net["R"] > 0 else "OP"
            if pattern not in (None, realized):
                raise ValueError(
                    f"[{c}] is a knot with intrinsic pattern {realized}"
                )
        elif "L" in net:
            flip = net["L"] < 0
        else:
            flip = net["R"] != (-1 if pattern == "OP" else 1)
        for p in ports:
            cid, slot = p
            if flip:
                slot = 3 - slot
            d = dirs.setdefault(cid, [0, 0])
            if slot in (0, 3):
                d[0] = 1 if slot == 0 else -1
            else:
                d[1] = 1 if slot == 1 else -1
    return Diagram(
        kinds=kinds,
        over={i: T_OVER if k == "T" else R_OVER for i, k in enumerate(kinds)},
        dirs={i: tuple(d) for i, d in dirs.items()},
        wires=wires,
        loops=0,
        pattern=realized,
        components=len(cycles),
    )


def _sign(kind: str, over: str, dirs: tuple[int, int]) -> int:
    """Crossing sign: +1 when the under direction rotated a quarter turn
    counterclockwise gives the over direction."""
    da, db = dirs
    if kind == "T":
        va, vb = (da, da), (-db, db)
    else:
        va, vb = (da, -da), (db, db)
    vo, vu = (va, vb) if over == "A" else (vb, va)
    return 1 if vo == (-vu[1], vu[0]) else -1


def writhe(d: Diagram) -> int:
    return sum(_sign(d.kinds[i], d.over[i], d.dirs[i]) for i in d.over)


def _excise(wires: dict, cid: int, pairing, loops: int):
    """Remove a crossing, rejoining its four wires through the given slot
    pairing; circles this closes off are counted into loops."""
    arc = {}
    for i, j in pairing:
        arc[(cid, i)] = (cid, j)
        arc[(cid, j)] = (cid, i)
    new_wires = []
    visited: set = set()
    for p0 in list(arc):
        if p0 in visited:
            continue
        visited.add(p0)
        visited.add(arc[p0])
        ends = []
        for q0 in (arc[p0], p0):
            q, end = q0, None
            while True:
                x = wires[q]
                if x[0] != cid:
                    end = x
                    break
                if x in visited:
                    break
                visited.add(x)
                q = arc[x]
                visited.add(q)
            ends.append(end)
        if ends[0] is None or ends[1] is None:
            loops += 1
        else:
            new_wires.append(ends)
    out = {p: x for p, x in wires.items() if p[0] != cid and x[0] != cid}
    for u, v in new_wires:
        out[u] = v
        out[v] = u
    return out, loops


def _scan(over: dict, dirs: dict, wires: dict):
    """Traverse all strands from canonical base points.

    Returns (components, bad): the cycle count and the first crossing whose
    first visit runs along its under-path (None when the diagram is
    descending, i.e. an unlink)."""
    entries = {}
    for cid, (da, db) in dirs.items():
        entries[(cid, 0 if da > 0 else 3)] = "A"
        entries[(cid, 1 if db > 0 else 2)] = "B"
    seen: set = set()
    first: set = set()
    bad = None
    comps = 0
    for start in sorted(entries):
        if start in seen:
            continue
        comps += 1
        p = start
        while True:
            seen.add(p)
            cid, slot = p
            if cid not in first:
                first.add(cid)
                path = "A" if slot in (0, 3) else "B"
                if bad is None and path != over[cid]:
                    bad = cid
            p = wires[(cid, 3 - slot)]
            if p == start:
                break
    return comps, bad


def _delta_pow(k: int) -> QScalar:
    """Reduced value of a (k+1)-component unlink."""
    if k <= 0:
        return Q_ONE
    num = LaurentPoly.from_int(1)
    ring = LaurentPoly({(A_EXP, 0, 0): 1, (-A_EXP, 0, 0): -1})
    for _ in range(k):
        num = num * ring
    return QScalar(num, {1: k})


def homfly(d: Diagram) -> QScalar:
    """Reduced HOMFLY polynomial (unknot = 1) by skein recursion.

    At the first crossing met on its under-path, the relation
    a^E P(L+) - a^{-E} P(L-) = (q - q^{-1}) P(L0) trades the diagram for
    the switched and smoothed ones; switched diagrams move toward
    descending, smoothed ones drop a crossing, and descending diagrams are
    unlinks."""
    memo: dict = {}

    def value(over, dirs, wires, loops):
        key = (
            tuple(sorted(over.items())),
            tuple(sorted(dirs.items())),
            tuple(sorted((u, v) for u, v in wires.items() if u < v)),
            loops,
        )
        hit = memo.get(key)
        if hit is not None:
            return hit
        comps, bad = _scan(over, dirs, wires)
        if bad is None:
            out = _delta_pow(comps + loops - 1)
        else:
            sigma = _sign(d.kinds[bad], over[bad], dirs[bad])
            flipped = dict(over)
            flipped[bad] = "B" if over[bad] == "A" else "A"
            da, db = dirs[bad]
            pairing = ((0, 2), (1, 3)) if da == db else ((0, 1), (2, 3))
            wires0, loops0 = _excise(wires, bad, pairing, loops)
            over0 = {k: v for k, v in over.items() if k != bad}
            dirs0 = {k: v for k, v in dirs.items() if k != bad}
            sw = value(flipped, dirs, wires, loops)
            sm = value(over0, dirs0, wires0, loops0)
            e = A_EXP if sigma > 0 else -A_EXP
            out = sw * LaurentPoly.monomial(1, ea=-2 * e) + sm * (
                LaurentPoly.monomial(sigma, ea=-e) * _Z
            )
        memo[key] = out
        return out

    return value(dict(d.over), dict(d.dirs), dict(d.wires), d.loops)


def reduced_homfly(c: ContinuedFraction, pattern: str | None = None) -> QScalar:
    return homfly(build_diagram(c, pattern))


def kauffman_f(d: Diagram) -> QScalar:
    """Writhe-normalized Kauffman bracket, reduced (unknot = 1).

    A Laurent polynomial in the frame variable A, carried on the q axis.
    The A-smoothing of a crossing opens the two regions swept by turning
    the over strand counterclockwise onto the under strand."""
    ids = sorted(d.over)
    delta = LaurentPoly({(0, 2, 0): -1, (0, -2, 0): -1})
    total = LaurentPoly()
    for mask in range(1 << len(ids)):
        wires, loops = d.wires, d.loops
        exp = 0
        for k, cid in enumerate(ids):
            a_first = d.over[cid] == "A"
            if (mask >> k) & 1:
                exp -= 1
                pairing = ((0, 1), (2, 3)) if a_first else ((0, 2), (1, 3))
            else:
                exp += 1
                pairing = ((0, 2), (1, 3)) if a_first else ((0, 1), (2, 3))
            wires, loops = _excise(wires, cid, pairing, loops)
        term = LaurentPoly.monomial(1, eq=exp)
        for _ in range(loops - 1):
            term = term * delta
        total = total + term
    w = writhe(d)
    return QScalar(total * LaurentPoly.monomial(-1 if w % 2 else 1, eq=-3 * w))


def jones(c: ContinuedFraction, pattern: str | None = None) -> QScalar:
    """Reduced Jones polynomial from the bracket state sum, on the doubled
    q axis where it equals doubled_q(homfly @ a = q^2): the classical
    identification t = A^{-4} puts the bracket variable at A = q^{-1}."""
    return kauffman_f(build_diagram(c, pattern)).substitute(q_inverse=True)


def doubled_q(x: QScalar) -> QScalar:
    """Substitute q -> q^2 exactly (denominator factors double along)."""
    num = LaurentPoly(
        {(ea, 2 * eq, es): v for (ea, eq, es), v in x.num.terms.items()}
    )
    return QScalar(num, {2 * l: m for l, m in x.den.items()}, normalized=True)
