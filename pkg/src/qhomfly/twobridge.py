"""2-bridge link model: continued fractions, twist-operator words, component
counting, and corpus enumeration.

A continued fraction [a_r, ..., a_1] (display order, all entries positive)
encodes the rational tangle built by a_1 twists on top, then a_2 on the
right, then a_3 on top, and so on; its value is
p/q = a_r + 1/(a_{r-1} + 1/(... + 1/a_1)).  The tangle is closed by two arcs:
side arcs when the last twist group sits on top (r odd), top-and-bottom arcs
when it sits on the right (r even) — the choice that keeps the final twists
from being undone.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

# tangle endpoints
NW, NE, SW, SE = "NW", "NE", "SW", "SE"


@dataclass(frozen=True)
class ContinuedFraction:
    """Entries [a_r, ..., a_1] in display order; a_1 is the first twist group."""

    entries: tuple[int, ...]

    def __post_init__(self):
        if not self.entries:
            raise ValueError("continued fraction needs at least one entry")
        if any(e < 1 for e in self.entries):
            raise ValueError(f"entries must be positive: {self.entries}")

    @property
    def crossings(self) -> int:
        return sum(self.entries)

    def __str__(self):
        return ",".join(str(e) for e in self.entries)


@dataclass(frozen=True)
class TwoBridgeLink:
    cf: ContinuedFraction
    fraction: tuple[int, int]
    crossings: int
    components: int


def cf(*entries: int) -> ContinuedFraction:
    return ContinuedFraction(tuple(entries))


def cf_to_fraction(c: ContinuedFraction) -> tuple[int, int]:
    """Value p/q of [a_r, ..., a_1] = a_r + 1/(a_{r-1} + 1/(... + 1/a_1))."""
    inner = reversed(c.entries)
    x = Fraction(next(inner))
    for v in inner:
        x = v + 1 / x
    return (x.numerator, x.denominator)


def fraction_to_cf(p: int, q: int) -> ContinuedFraction:
    """All-positive continued fraction of p/q by the Euclidean algorithm."""
    if p < 1 or q < 1 or gcd(p, q) != 1 or (q != 1 and p <= q):
        raise ValueError(f"need coprime p > q >= 1 or q = 1, got {p}/{q}")
    digits = []
    while q:
        digits.append(p // q)
        p, q = q, p % q
    return ContinuedFraction(tuple(digits))


def operator_word(c: ContinuedFraction) -> tuple[tuple[str, int], ...]:
    """Twist groups [(T, a_1), (R, a_2), ...] in application order."""
    kinds = ("T", "R")
    return tuple(
        (kinds[i % 2], count) for i, count in enumerate(reversed(c.entries))
    )


def _traced_matching(word) -> dict:
    """Endpoint matching of the open tangle after the twist word.

    A top crossing rewires through the two upper endpoints, a right crossing
    through the two right ones; each acts on the matching by conjugation with
    the corresponding endpoint transposition.
    """
    m = {NW: SW, SW: NW, NE: SE, SE: NE}
    for kind, count in word:
        if count % 2 == 0:
            continue
        x, y = (NW, NE) if kind == "T" else (NE, SE)
        swap = {x: y, y: x}
        m = {
            swap.get(u, u): swap.get(v, v)
            for u, v in m.items()
        }
    return m


def closure_arcs(c: ContinuedFraction) -> tuple[tuple[str, str], tuple[str, str]]:
    """The two plat closure arcs: side arcs for odd group count, top/bottom
    arcs for even."""
    if len(c.entries) % 2 == 1:
        return ((NW, SW), (NE, SE))
    return ((NW, NE), (SW, SE))


def plat_graph(c: ContinuedFraction):
    """Crossing kinds and port wiring of the closed plat diagram.

    Crossings are numbered in application order; each has four ports
    (crossing, slot).  Slots 0 and 1 attach to the two leads the twist
    consumes, slots 2 and 3 become the replacement leads, and the strand
    entering slot 0 exits at slot 3 while the one entering slot 1 exits at
    slot 2.  For a top twist, slot 0 takes the old upper-left lead and
    slot 2 is the new upper-left; for a right twist, slot 0 takes the old
    upper-right lead and slot 2 is the new upper-right.

    Returns (kinds, wires, tags): kinds[i] is "T" or "R", wires maps each
    port to the port its wire arc reaches, and tags[p] lists the passes over
    the two original bridge strands ("L"/"R", each signed +1 for upward)
    made when walking the wire from p to wires[p].
    """
    partner: dict = {}
    tags: dict = {}

    def reversed_tag(tag):
        return tuple((name, -d) for name, d in reversed(tag))

    def new_wire(u, v, tag):
        partner[u] = v
        partner[v] = u
        tags[u] = tag
        tags[v] = reversed_tag(tag)

    def fuse(u, v):
        # u and v are loose ends of two distinct wires; merge them into one
        pu, pv = partner[u], partner[v]
        tag = tags[pu] + tags[v]
        for x in (u, v):
            del partner[x], tags[x]
        new_wire(pu, pv, tag)

    new_wire("Lb", "Lt", (("L", 1),))
    new_wire("Rb", "Rt", (("R", 1),))
    kinds: list[str] = []
    leads = {"tl": "Lt", "tr": "Rt", "bl": "Lb", "br": "Rb"}
    stub = 0
    for kind, count in operator_word(c):
        for _ in range(count):
            i = len(kinds)
            kinds.append(kind)
            consumed = ("tl", "tr") if kind == "T" else ("tr", "br")
            for slot in range(4):
                tok = ("stub", stub)
                stub += 1
                new_wire(tok, (i, slot), ())
                if slot < 2:
                    fuse(leads[consumed[slot]], tok)
                else:
                    leads[consumed[slot - 2]] = tok
    if len(c.entries) % 2:
        pairs = (("tl", "bl"), ("tr", "br"))
    else:
        pairs = (("tl", "tr"), ("bl", "br"))
    for u, v in pairs:
        fuse(leads[u], leads[v])
    return tuple(kinds), partner, tags


def traverse_cycles(wires, tags):
    """Strand cycles of a plat graph, walking wire arcs and crossing
    through-paths alternately.

    Each cycle is reported as (ports, passes): the crossing ports entered in
    walk order (slot 0 or 1 means the through-path is walked forward) and
    the signed bridge-strand passes collected along the way.  The walk
    direction per cycle is arbitrary; reversing a cycle replaces each
    entered port by its through-partner and negates the passes.
    """
    unseen = set(wires)
    cycles = []
    while unseen:
        start = min(unseen)
        ports: list = []
        passes: list = []
        p = start
        while True:
            unseen.discard(p)
            passes.extend(tags[p])
            p = wires[p]
            unseen.discard(p)
            ports.append(p)
            p = (p[0], 3 - p[1])
            if p == start:
                break
        cycles.append((ports, tuple(passes)))
    return cycles


def strand_pattern(c: ContinuedFraction) -> str | None:
    """Orientation pattern of the two bridge strands in the closed plat.

    "UP" when one traversal of the knot runs both bridge strands in the
    same direction (parallel bridges), "OP" when it runs them oppositely.
    None for two-component links, where each bridge lies on its own
    component and the relative orientation is a free choice.
    """
    kinds, wires, tags = plat_graph(c)
    if not wires:
        return None
    cycles = traverse_cycles(wires, tags)
    if len(cycles) != 1:
        return None
    dirs = dict(cycles[0][1])
    return "UP" if dirs["L"] * dirs["R"] > 0 else "OP"


def component_count(c: ContinuedFraction) -> int:
    """Number of components of the closed diagram (1 or 2)."""
    m = _traced_matching(operator_word(c))
    arcs = dict(closure_arcs(c))
    arcs.update({v: k for k, v in dict(closure_arcs(c)).items()})
    seen: set[str] = set()
    cycles = 0
    for start in (NW, NE, SW, SE):
        if start in seen:
            continue
        cycles += 1
        x = start
        while True:
            seen.add(x)
            y = m[x]
            seen.add(y)
            x = arcs[y]
            if x == start:
                break
    return cycles


def link_from_cf(c: ContinuedFraction) -> TwoBridgeLink:
    return TwoBridgeLink(
        cf=c,
        fraction=cf_to_fraction(c),
        crossings=c.crossings,
        components=component_count(c),
    )


def enumerate_corpus(max_crossings: int) -> list[TwoBridgeLink]:
    """All CFs with entry sum <= max_crossings (compositions into positive
    parts), as links.  CFs of isotopic links are kept separate."""
    if max_crossings < 1:
        raise ValueError("max_crossings must be >= 1")
    out = []
    for total in range(1, max_crossings + 1):
        for comp in _compositions(total):
            out.append(link_from_cf(ContinuedFraction(comp)))
    return out


def _compositions(total: int) -> list[tuple[int, ...]]:
    if total == 0:
        return [()]
    out = []
    for first in range(1, total + 1):
        for rest in _compositions(total - first):
            out.append((first,) + rest)
    return out


def parse_cf(text: str) -> ContinuedFraction:
    try:
        entries = tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise ValueError(f"bad continued fraction {text!r}") from exc
    return ContinuedFraction(entries)


def parse_fraction(text: str) -> tuple[int, int]:
    parts = text.split("/")
    if len(parts) != 2:
        raise ValueError(f"bad fraction {text!r} (want p/q)")
    try:
        p, q = int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise ValueError(f"bad fraction {text!r}") from exc
    return (p, q)
