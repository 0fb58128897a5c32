"""
Barcodes and Bottleneck Distance

For one-parameter modules the barcode is a complete invariant and the
bottleneck distance between barcodes equals the interleaving distance. This
module computes barcodes of d=1 presentations by column reduction and the
bottleneck distance by binary search over candidate costs with bipartite
matching, giving an exact oracle for the d=1 test suites.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Tuple

import networkx as nx
from networkx.algorithms import bipartite

from order_core import to_rational
from pm_utils import INFINITY, ExtRational, format_rational, log_event, measure_time
from presentations import Presentation, PresentationError

Bar = Tuple[Fraction, ExtRational]


def _endpoint(value) -> ExtRational:
    if isinstance(value, float) and value == INFINITY:
        return INFINITY
    if isinstance(value, str) and value.strip() in ("inf", "+inf", "∞"):
        return INFINITY
    return to_rational(value)


@dataclass(frozen=True)
class Barcode:
    """Finite multiset of bars [birth, death) with death possibly infinite."""

    bars: Tuple[Bar, ...]

    def __post_init__(self):
        normalized = []
        for birth, death in self.bars:
            b, d = to_rational(birth), _endpoint(death)
            if not b < d:
                raise ValueError(f"Bar [{format_rational(b)}, {format_rational(d)}) is empty")
            normalized.append((b, d))
        object.__setattr__(self, "bars", tuple(sorted(normalized)))

    @classmethod
    def of(cls, bars: Iterable[Tuple]) -> "Barcode":
        return cls(tuple(bars))

    def __len__(self) -> int:
        return len(self.bars)

    def __iter__(self):
        return iter(self.bars)

    def finite(self) -> List[Bar]:
        return [bar for bar in self.bars if bar[1] != INFINITY]

    def infinite(self) -> List[Bar]:
        return [bar for bar in self.bars if bar[1] == INFINITY]

    def describe(self) -> str:
        return "{" + ", ".join(f"[{format_rational(b)}, {format_rational(d)})" for b, d in self.bars) + "}"


def barcode_1d(m: Presentation) -> Barcode:
    """
    Barcode of a one-parameter presentation.

    Relations are reduced left to right in grade order; a relation column whose
    lowest nonzero entry sits at generator i kills that generator, giving the
    bar [grade(g_i), grade(r)). Surviving generators give infinite bars.

    Args:
        m: Presentation with dimension 1

    Returns:
        The barcode, zero-length bars dropped
    """
    if m.dimension != 1:
        raise PresentationError(f"barcode_1d needs dimension 1, got {m.dimension}")
    p = m.p
    row_of = {gid: i for i, gid in enumerate(m.generators.ids)}
    births = [g.grade[0] for g in m.generators]
    reduced: List[dict] = []
    low_owner = {}
    pairs = []
    for r in m.relations:
        column = {row_of[gid]: coeff for gid, coeff in r.terms}
        while column:
            low = max(column)
            if low not in low_owner:
                break
            other = reduced[low_owner[low]]
            factor = column[low] * pow(other[low], -1, p) % p
            for row, value in other.items():
                updated = (column.get(row, 0) - factor * value) % p
                if updated:
                    column[row] = updated
                else:
                    column.pop(row, None)
        reduced.append(column)
        if column:
            low = max(column)
            low_owner[low] = len(reduced) - 1
            pairs.append((low, r.grade[0]))
    killed = {low for low, _ in pairs}
    bars = [(births[low], death) for low, death in pairs if births[low] < death]
    bars.extend((births[i], INFINITY) for i in range(len(births)) if i not in killed)
    log_event("BARCODE", f"{len(bars)} bars from {len(births)} generators and {len(m.relations)} relations")
    return Barcode(tuple(bars))


def barcode_presentation(barcode: Barcode, p: int = 2, prefix: str = "b") -> Presentation:
    """The direct sum of interval presentations, one generator (and relation) per bar."""
    generators = []
    relations = []
    for i, (birth, death) in enumerate(barcode.bars):
        gid = f"{prefix}{i}"
        generators.append((gid, [birth]))
        if death != INFINITY:
            relations.append(([death], {gid: 1}))
    return Presentation.build(1, p, generators, relations)


def bar_distance(a: Bar, b: Bar) -> ExtRational:
    """l-infinity distance between bars, with inf - inf = 0."""
    births = abs(a[0] - b[0])
    if a[1] == INFINITY and b[1] == INFINITY:
        return births
    if a[1] == INFINITY or b[1] == INFINITY:
        return INFINITY
    return max(births, abs(a[1] - b[1]))


def half_length(bar: Bar) -> ExtRational:
    if bar[1] == INFINITY:
        return INFINITY
    return (bar[1] - bar[0]) / 2


def _matching_graph(b1: List[Bar], b2: List[Bar], delta: ExtRational) -> Tuple[nx.Graph, list]:
    """Bars of b1 plus diagonal copies of b2 on the left, the mirror image on the right."""
    graph = nx.Graph()
    left = [("L", i) for i in range(len(b1))] + [("LD", j) for j in range(len(b2))]
    right = [("R", j) for j in range(len(b2))] + [("RD", i) for i in range(len(b1))]
    graph.add_nodes_from(left, bipartite=0)
    graph.add_nodes_from(right, bipartite=1)
    for i, x in enumerate(b1):
        for j, y in enumerate(b2):
            if bar_distance(x, y) <= delta:
                graph.add_edge(("L", i), ("R", j))
        if half_length(x) <= delta:
            graph.add_edge(("L", i), ("RD", i))
    for j, y in enumerate(b2):
        if half_length(y) <= delta:
            graph.add_edge(("LD", j), ("R", j))
        for i in range(len(b1)):
            graph.add_edge(("LD", j), ("RD", i))
    return graph, left


def _perfect_matching_exists(b1: List[Bar], b2: List[Bar], delta: ExtRational) -> bool:
    graph, left = _matching_graph(b1, b2, delta)
    if not left:
        return True
    matching = bipartite.hopcroft_karp_matching(graph, top_nodes=left)
    return len(matching) // 2 == len(left)


@measure_time
def bottleneck(b1: Barcode, b2: Barcode) -> ExtRational:
    """
    Bottleneck distance between barcodes.

    Minimizes, over partial matchings, the largest of the matched bar
    distances and the half-lengths of unmatched bars.

    Returns:
        Exact Fraction, or INFINITY when the infinite bar counts differ
    """
    if len(b1.infinite()) != len(b2.infinite()):
        return INFINITY
    bars1, bars2 = list(b1.bars), list(b2.bars)
    candidates = {Fraction(0)}
    for x in bars1:
        for y in bars2:
            candidates.add(bar_distance(x, y))
    for bar in bars1 + bars2:
        candidates.add(half_length(bar))
    ordered = sorted(c for c in candidates if c != INFINITY)
    lo, hi = 0, len(ordered) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _perfect_matching_exists(bars1, bars2, ordered[mid]):
            hi = mid
        else:
            lo = mid + 1
    result = ordered[lo]
    log_event("BARCODE", f"bottleneck {b1.describe()} vs {b2.describe()} = {format_rational(result)}")
    return result


def optimal_matching(b1: Barcode, b2: Barcode) -> Optional[List[Tuple[int, int]]]:
    """
    Index pairs (i, j) of bars matched at the bottleneck cost; bars left out go to the diagonal.

    Returns None when the distance is infinite.
    """
    delta = bottleneck(b1, b2)
    if delta == INFINITY:
        return None
    graph, left = _matching_graph(list(b1.bars), list(b2.bars), delta)
    if not left:
        return []
    matching = bipartite.hopcroft_karp_matching(graph, top_nodes=left)
    return sorted(
        (node[1], matching[node][1])
        for node in left
        if node[0] == "L" and matching.get(node, ("RD",))[0] == "R"
    )
