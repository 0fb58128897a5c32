"""
Finite Posets, Grids and Galois Connections

Finite posets embedded in Q^d with the product order, d-grids, monotone maps,
Galois connections between finite posets, floor functions, distortion and
injectivity radius. These are the indexing objects and morphisms of the edit
categories JS^d and (1D)^d.

Coordinates are exact Fractions throughout; the adjoined bottom element is the
BOTTOM sentinel, never a coordinate point.
"""

import abc
import bisect
import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import networkx as nx

from pm_utils import INFINITY, ExtRational, format_point, format_rational, log_event

Point = Tuple[Fraction, ...]
AxisMap = Dict[Fraction, Fraction]


class OrderError(ValueError):
    """Raised for dimension mismatches, empty inputs and mismatched connections."""


class _Bottom:
    """The element adjoined below every point of a poset."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "BOTTOM"

    def __reduce__(self):
        return (_Bottom, ())


BOTTOM = _Bottom()
MaybePoint = Union[Point, _Bottom]


def to_rational(value) -> Fraction:
    """Exact rational from an int, Fraction or literal string ("3/4", "0.25")."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(str(value).strip())


def as_point(coords: Iterable) -> Point:
    point = tuple(to_rational(c) for c in coords)
    if not point:
        raise OrderError("Points must have dimension d >= 1")
    return point


def diagonal(r, d: int) -> Point:
    """The point (r, r, ..., r) in Q^d."""
    value = to_rational(r)
    return tuple(value for _ in range(d))


def shift(p: MaybePoint, r) -> MaybePoint:
    """p + r-vector; BOTTOM stays BOTTOM."""
    if p is BOTTOM:
        return BOTTOM
    value = to_rational(r)
    return tuple(c + value for c in p)


def leq(a: MaybePoint, b: MaybePoint) -> bool:
    """Product order extended by BOTTOM <= everything."""
    if a is BOTTOM:
        return True
    if b is BOTTOM:
        return False
    if len(a) != len(b):
        raise OrderError(f"Dimension mismatch comparing {a} and {b}")
    return all(x <= y for x, y in zip(a, b))


def linf(a: Point, b: Point) -> Fraction:
    if len(a) != len(b):
        raise OrderError(f"Dimension mismatch measuring {a} and {b}")
    return max((abs(x - y) for x, y in zip(a, b)), default=Fraction(0))


def componentwise_max(a: Point, b: Point) -> Point:
    return tuple(max(x, y) for x, y in zip(a, b))


def componentwise_min(a: Point, b: Point) -> Point:
    return tuple(min(x, y) for x, y in zip(a, b))


def describe(p: MaybePoint) -> str:
    return "BOTTOM" if p is BOTTOM else format_point(p)


# --------------------------------------------------------------------------------------
# Posets
# --------------------------------------------------------------------------------------

class EmbeddedPoset(abc.ABC):
    """Abstract base for finite posets embedded in Q^d with the product order."""

    POSET_KIND: str = "base"

    @property
    @abc.abstractmethod
    def points(self) -> Tuple[Point, ...]:
        """All points, in lexicographic order."""

    @property
    @abc.abstractmethod
    def dimension(self) -> int:
        """Ambient dimension d."""

    @abc.abstractmethod
    def __contains__(self, x) -> bool:
        pass

    @abc.abstractmethod
    def cover_pairs(self) -> List[Tuple[Point, Point]]:
        """Pairs (p, q) with q covering p."""

    def __iter__(self) -> Iterator[Point]:
        return iter(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def maximum(self, candidates: Sequence[Point]) -> Optional[Point]:
        """The element of candidates above all others, if there is one."""
        for m in candidates:
            if all(leq(c, m) for c in candidates):
                return m
        return None

    def minimum(self, candidates: Sequence[Point]) -> Optional[Point]:
        for m in candidates:
            if all(leq(m, c) for c in candidates):
                return m
        return None

    def top(self) -> Optional[Point]:
        return self.maximum(self.points)

    def bottom(self) -> Optional[Point]:
        return self.minimum(self.points)

    def floor(self, x: MaybePoint) -> Optional[MaybePoint]:
        """
        Greatest point below x, BOTTOM when nothing lies below x.

        Returns None when the points below x have no maximum (the poset is not
        join-closed there).
        """
        if x is BOTTOM:
            return BOTTOM
        below = [p for p in self.points if leq(p, x)]
        if not below:
            return BOTTOM
        return self.maximum(below)


class FinitePoset(EmbeddedPoset):
    """A finite set of points of Q^d with the inherited product order."""

    POSET_KIND = "poset"

    def __init__(self, points: Iterable[Iterable], dimension: Optional[int] = None):
        """
        Initialize the poset.

        Args:
            points: Distinct points of equal dimension
            dimension: Ambient dimension, required when points is empty
        """
        normalized = [as_point(p) for p in points]
        if len(set(normalized)) != len(normalized):
            raise OrderError("Poset points must be pairwise distinct")
        dims = {len(p) for p in normalized}
        if len(dims) > 1:
            raise OrderError(f"Poset points have mixed dimensions {sorted(dims)}")
        if dims:
            d = dims.pop()
            if dimension is not None and dimension != d:
                raise OrderError(f"Declared dimension {dimension} but points have dimension {d}")
        elif dimension is None:
            raise OrderError("An empty poset needs an explicit dimension")
        else:
            d = dimension
        self._points = tuple(sorted(normalized))
        self._point_set = frozenset(self._points)
        self._dimension = d

    @property
    def points(self) -> Tuple[Point, ...]:
        return self._points

    @property
    def dimension(self) -> int:
        return self._dimension

    def __contains__(self, x) -> bool:
        return x in self._point_set

    def __eq__(self, other) -> bool:
        if isinstance(other, Grid):
            return other == self
        return isinstance(other, FinitePoset) and self._points == other._points and self._dimension == other._dimension

    def __hash__(self) -> int:
        return hash(("FinitePoset", self._points))

    def __repr__(self) -> str:
        return f"FinitePoset({[describe(p) for p in self._points]})"

    def cover_pairs(self) -> List[Tuple[Point, Point]]:
        order = nx.DiGraph()
        order.add_nodes_from(self._points)
        for a, b in itertools.permutations(self._points, 2):
            if leq(a, b):
                order.add_edge(a, b)
        reduction = nx.transitive_reduction(order)
        return sorted(reduction.edges())


@dataclass(frozen=True)
class Grid(EmbeddedPoset):
    """
    A d-grid: the cartesian product of d finite nonempty sets of rationals.

    Grids are finite lattices; floor, top and bottom are computed axis by axis.
    """

    axes: Tuple[Tuple[Fraction, ...], ...]

    POSET_KIND = "grid"

    def __post_init__(self):
        if not self.axes:
            raise OrderError("A grid needs at least one axis")
        normalized = []
        for axis in self.axes:
            values = tuple(sorted(set(to_rational(v) for v in axis)))
            if not values:
                raise OrderError("Grid axes must be nonempty")
            normalized.append(values)
        object.__setattr__(self, "axes", tuple(normalized))

    def __eq__(self, other) -> bool:
        if isinstance(other, Grid):
            return self.axes == other.axes
        if isinstance(other, FinitePoset):
            return self.points == other.points
        return NotImplemented

    def __hash__(self) -> int:
        return hash(("Grid", self.axes))

    def __repr__(self) -> str:
        return "Grid(" + " x ".join("{" + ", ".join(format_rational(v) for v in axis) + "}" for axis in self.axes) + ")"

    @property
    def dimension(self) -> int:
        return len(self.axes)

    @cached_property
    def points(self) -> Tuple[Point, ...]:
        return tuple(itertools.product(*self.axes))

    @cached_property
    def _axis_sets(self) -> Tuple[frozenset, ...]:
        return tuple(frozenset(axis) for axis in self.axes)

    def __len__(self) -> int:
        size = 1
        for axis in self.axes:
            size *= len(axis)
        return size

    def __contains__(self, x) -> bool:
        if x is BOTTOM or not isinstance(x, tuple) or len(x) != self.dimension:
            return False
        return all(c in s for c, s in zip(x, self._axis_sets))

    def top(self) -> Point:
        return tuple(axis[-1] for axis in self.axes)

    def bottom(self) -> Point:
        return tuple(axis[0] for axis in self.axes)

    def floor(self, x: MaybePoint) -> MaybePoint:
        if x is BOTTOM:
            return BOTTOM
        if len(x) != self.dimension:
            raise OrderError(f"Point {describe(x)} does not match grid dimension {self.dimension}")
        result = []
        for axis, c in zip(self.axes, x):
            idx = bisect.bisect_right(axis, c) - 1
            if idx < 0:
                return BOTTOM
            result.append(axis[idx])
        return tuple(result)

    def successor(self, p: Point, i: int) -> Optional[Point]:
        """Next grid point along axis i, or None at the top of that axis."""
        axis = self.axes[i]
        idx = bisect.bisect_left(axis, p[i])
        if idx + 1 >= len(axis):
            return None
        return p[:i] + (axis[idx + 1],) + p[i + 1:]

    def cover_pairs(self) -> List[Tuple[Point, Point]]:
        pairs = []
        for p in self.points:
            for i in range(self.dimension):
                q = self.successor(p, i)
                if q is not None:
                    pairs.append((p, q))
        return pairs

    def refine(self, other: "Grid") -> "Grid":
        """Smallest grid containing both grids."""
        if other.dimension != self.dimension:
            raise OrderError("Cannot refine grids of different dimensions")
        return Grid(tuple(tuple(set(a) | set(b)) for a, b in zip(self.axes, other.axes)))

    def with_values(self, extra: Sequence[Iterable[Fraction]]) -> "Grid":
        return Grid(tuple(tuple(set(axis) | set(values)) for axis, values in zip(self.axes, extra)))


class _EmptySupport:
    """Support marker of the presentation with no generators and no relations."""

    def __repr__(self) -> str:
        return "EMPTY_SUPPORT"


EMPTY_SUPPORT = _EmptySupport()


def origin_grid(d: int) -> Grid:
    """The one-point grid {0-vector}, indexing poset of free modules."""
    return Grid(tuple((Fraction(0),) for _ in range(d)))


def smallest_grid(points: Iterable[Iterable]) -> Grid:
    """
    Smallest grid containing a finite point set: the product of its projections.

    Args:
        points: Nonempty collection of points of equal dimension

    Returns:
        The grid prod_i pi_i(points)
    """
    normalized = [as_point(p) for p in points]
    if not normalized:
        raise OrderError("smallest_grid needs at least one point")
    d = len(normalized[0])
    if any(len(p) != d for p in normalized):
        raise OrderError("smallest_grid points have mixed dimensions")
    return Grid(tuple(tuple({p[i] for p in normalized}) for i in range(d)))


def floor(g: Grid, p: MaybePoint) -> MaybePoint:
    """Floor function of a grid: the maximum grid point <= p, else BOTTOM."""
    return g.floor(p)


# --------------------------------------------------------------------------------------
# Monotone maps
# --------------------------------------------------------------------------------------

@dataclass(frozen=True)
class NoAdjoint:
    """The adjoint does not exist; reason names the first witness point."""

    reason: str

    def __bool__(self) -> bool:
        return False


class MonotoneMap:
    """
    A function between finite embedded posets.

    Grid morphisms carry an axis-wise form (one value map per axis) and are
    evaluated without materializing the point table.
    """

    def __init__(
        self,
        source: EmbeddedPoset,
        target: EmbeddedPoset,
        mapping: Optional[Mapping[Point, Point]] = None,
        axis_maps: Optional[Sequence[Mapping[Fraction, Fraction]]] = None
    ):
        """
        Initialize the map.

        Args:
            source: Domain poset
            target: Codomain poset
            mapping: Point table (required unless axis_maps is given)
            axis_maps: Per-axis value maps for grid morphisms
        """
        if mapping is None and axis_maps is None:
            raise OrderError("A monotone map needs a point table or axis maps")
        self.source = source
        self.target = target
        self.axis_maps: Optional[Tuple[AxisMap, ...]] = None
        if axis_maps is not None:
            if not (isinstance(source, Grid) and isinstance(target, Grid)):
                raise OrderError("Axis maps require grid source and target")
            if len(axis_maps) != source.dimension or target.dimension != source.dimension:
                raise OrderError("Axis maps must have one map per grid axis")
            normalized = []
            for i, amap in enumerate(axis_maps):
                table = {to_rational(k): to_rational(v) for k, v in amap.items()}
                if set(table) != set(source.axes[i]):
                    raise OrderError(f"Axis map {i} is not total on the source axis")
                if not set(table.values()) <= set(target.axes[i]):
                    raise OrderError(f"Axis map {i} leaves the target axis")
                normalized.append(table)
            self.axis_maps = tuple(normalized)
        self._mapping: Optional[Dict[Point, Point]] = None
        if mapping is not None:
            table = {as_point(k): as_point(v) for k, v in mapping.items()}
            if set(table) != set(source.points):
                raise OrderError("Point table is not total on the source")
            for value in table.values():
                if value not in target:
                    raise OrderError(f"Image {describe(value)} is not a target point")
            self._mapping = table

    @classmethod
    def from_function(cls, source: EmbeddedPoset, target: EmbeddedPoset, fn: Callable[[Point], Point]) -> "MonotoneMap":
        return cls(source, target, mapping={p: fn(p) for p in source.points})

    @classmethod
    def from_axis_maps(cls, source: Grid, target: Grid, axis_maps: Sequence[Mapping]) -> "MonotoneMap":
        return cls(source, target, axis_maps=axis_maps)

    @classmethod
    def identity(cls, poset: EmbeddedPoset) -> "MonotoneMap":
        if isinstance(poset, Grid):
            return cls(poset, poset, axis_maps=[{v: v for v in axis} for axis in poset.axes])
        return cls(poset, poset, mapping={p: p for p in poset.points})

    def __call__(self, p: MaybePoint) -> MaybePoint:
        if p is BOTTOM:
            return BOTTOM
        if self.axis_maps is not None:
            try:
                return tuple(amap[c] for amap, c in zip(self.axis_maps, p))
            except KeyError:
                raise OrderError(f"{describe(p)} is not a source point") from None
        try:
            return self._mapping[p]
        except KeyError:
            raise OrderError(f"{describe(p)} is not a source point") from None

    @property
    def mapping(self) -> Dict[Point, Point]:
        if self._mapping is None:
            self._mapping = {p: self(p) for p in self.source.points}
        return self._mapping

    def __eq__(self, other) -> bool:
        if not isinstance(other, MonotoneMap):
            return NotImplemented
        if self.source != other.source or self.target != other.target:
            return False
        if self.axis_maps is not None and other.axis_maps is not None:
            return self.axis_maps == other.axis_maps
        return self.mapping == other.mapping

    __hash__ = None

    def __repr__(self) -> str:
        if self.axis_maps is not None:
            return f"MonotoneMap(axes={[{format_rational(k): format_rational(v) for k, v in m.items()} for m in self.axis_maps]})"
        return f"MonotoneMap({ {describe(k): describe(v) for k, v in self.mapping.items()} })"

    def is_monotone(self) -> bool:
        if self.axis_maps is not None:
            for axis, amap in zip(self.source.axes, self.axis_maps):
                images = [amap[v] for v in axis]
                if any(a > b for a, b in zip(images, images[1:])):
                    return False
            return True
        return all(leq(self(a), self(b)) for a, b in self.source.cover_pairs())


def axis_form(f: MonotoneMap) -> Optional[Tuple[AxisMap, ...]]:
    """Per-axis value maps of f when f is a product of axis maps, else None."""
    if f.axis_maps is not None:
        return f.axis_maps
    if not (isinstance(f.source, Grid) and isinstance(f.target, Grid)):
        return None
    if f.source.dimension != f.target.dimension:
        return None
    maps: List[AxisMap] = [dict() for _ in range(f.source.dimension)]
    for p in f.source.points:
        image = f(p)
        for i, (c, v) in enumerate(zip(p, image)):
            if maps[i].setdefault(c, v) != v:
                return None
    return tuple(maps)


def is_grid_morphism(f: MonotoneMap) -> bool:
    """
    True iff each output coordinate depends only on the matching input coordinate.

    Raises:
        OrderError: when either end is not a grid
    """
    if not (isinstance(f.source, Grid) and isinstance(f.target, Grid)):
        raise OrderError("is_grid_morphism needs grids at both ends")
    return axis_form(f) is not None


def compose(outer: MonotoneMap, inner: MonotoneMap) -> MonotoneMap:
    """outer after inner."""
    if inner.target != outer.source:
        raise OrderError("Cannot compose: inner target differs from outer source")
    if inner.axis_maps is not None and outer.axis_maps is not None:
        maps = [{k: o[v] for k, v in i.items()} for i, o in zip(inner.axis_maps, outer.axis_maps)]
        return MonotoneMap.from_axis_maps(inner.source, outer.target, maps)
    return MonotoneMap(inner.source, outer.target, mapping={p: outer(inner(p)) for p in inner.source.points})


# --------------------------------------------------------------------------------------
# Galois connections
# --------------------------------------------------------------------------------------

def _axis_adjoint(values: Sequence[Fraction], amap: AxisMap, targets: Sequence[Fraction], right: bool) -> Union[AxisMap, NoAdjoint]:
    adjoint: AxisMap = {}
    for b in targets:
        if right:
            below = [a for a in values if amap[a] <= b]
            if not below:
                return NoAdjoint(f"no source value maps below {format_rational(b)}")
            adjoint[b] = max(below)
        else:
            above = [a for a in values if b <= amap[a]]
            if not above:
                return NoAdjoint(f"no source value maps above {format_rational(b)}")
            adjoint[b] = min(above)
    return adjoint


def right_adjoint(f: MonotoneMap) -> Union[MonotoneMap, NoAdjoint]:
    """
    Right adjoint g(q) = max f^-1(q-downset).

    Args:
        f: Monotone map between finite posets

    Returns:
        The right adjoint, or NoAdjoint naming a point where the maximum fails
    """
    maps = axis_form(f)
    if maps is not None and all(
        all(a <= b for a, b in zip([m[v] for v in axis], [m[v] for v in axis][1:]))
        for axis, m in zip(f.source.axes, maps)
    ):
        adjoint_maps = []
        for axis, target_axis, amap in zip(f.source.axes, f.target.axes, maps):
            adjoint = _axis_adjoint(axis, amap, target_axis, right=True)
            if isinstance(adjoint, NoAdjoint):
                return adjoint
            adjoint_maps.append(adjoint)
        return MonotoneMap.from_axis_maps(f.target, f.source, adjoint_maps)
    table = {}
    for q in f.target.points:
        preimage = [p for p in f.source.points if leq(f(p), q)]
        top = f.source.maximum(preimage)
        if top is None:
            log_event("ORDER", f"right adjoint fails at {describe(q)}")
            return NoAdjoint(f"f^-1({describe(q)} downset) has no maximum")
        table[q] = top
    return MonotoneMap(f.target, f.source, mapping=table)


def left_adjoint(g: MonotoneMap) -> Union[MonotoneMap, NoAdjoint]:
    """Left adjoint f(p) = min g^-1(p-upset); dual of right_adjoint."""
    maps = axis_form(g)
    if maps is not None and all(
        all(a <= b for a, b in zip([m[v] for v in axis], [m[v] for v in axis][1:]))
        for axis, m in zip(g.source.axes, maps)
    ):
        adjoint_maps = []
        for axis, target_axis, amap in zip(g.source.axes, g.target.axes, maps):
            adjoint = _axis_adjoint(axis, amap, target_axis, right=False)
            if isinstance(adjoint, NoAdjoint):
                return adjoint
            adjoint_maps.append(adjoint)
        return MonotoneMap.from_axis_maps(g.target, g.source, adjoint_maps)
    table = {}
    for p in g.target.points:
        preimage = [q for q in g.source.points if leq(p, g(q))]
        bottom = g.source.minimum(preimage)
        if bottom is None:
            log_event("ORDER", f"left adjoint fails at {describe(p)}")
            return NoAdjoint(f"g^-1({describe(p)} upset) has no minimum")
        table[p] = bottom
    return MonotoneMap(g.target, g.source, mapping=table)


def check_galois(f: MonotoneMap, g: MonotoneMap) -> bool:
    """
    Adjunction law f(a) <= b iff a <= g(b) for all a in P, b in Q.

    Grid morphism pairs are checked axis by axis, which is equivalent to the
    pointwise law on products of nonempty chains.
    """
    if f.source != g.target or f.target != g.source:
        raise OrderError("check_galois needs f: P -> Q and g: Q -> P")
    f_maps = axis_form(f)
    g_maps = axis_form(g) if f_maps is not None else None
    if f_maps is not None and g_maps is not None:
        for source_axis, target_axis, fm, gm in zip(f.source.axes, f.target.axes, f_maps, g_maps):
            for a in source_axis:
                for b in target_axis:
                    if (fm[a] <= b) != (a <= gm[b]):
                        return False
        return True
    for a in f.source.points:
        fa = f(a)
        for b in f.target.points:
            if leq(fa, b) != leq(a, g(b)):
                return False
    return True


def compose_connection(
    c1: Tuple[MonotoneMap, MonotoneMap],
    c2: Tuple[MonotoneMap, MonotoneMap]
) -> Tuple[MonotoneMap, MonotoneMap]:
    """
    Compose f1: P <-> Q: g1 with f2: Q <-> R: g2 into (f2 f1, g1 g2).
    """
    f1, g1 = c1
    f2, g2 = c2
    if f1.target != f2.source or g2.target != g1.source:
        raise OrderError("Connections do not align")
    return compose(f2, f1), compose(g1, g2)


# --------------------------------------------------------------------------------------
# Lattice predicates
# --------------------------------------------------------------------------------------

def join(poset: EmbeddedPoset, a: Point, b: Point) -> Optional[Point]:
    """Least upper bound of a and b inside poset, if it exists."""
    if isinstance(poset, Grid):
        return componentwise_max(a, b)
    uppers = [c for c in poset.points if leq(a, c) and leq(b, c)]
    return poset.minimum(uppers)


def meet(poset: EmbeddedPoset, a: Point, b: Point) -> Optional[Point]:
    if isinstance(poset, Grid):
        return componentwise_min(a, b)
    lowers = [c for c in poset.points if leq(c, a) and leq(c, b)]
    return poset.maximum(lowers)


def is_js_object(p: EmbeddedPoset) -> bool:
    """
    Finite join-semilattice whose inclusion into R^d preserves joins.

    Equivalent to: the componentwise maximum of every pair is a point of p.
    """
    if isinstance(p, Grid):
        return True
    return all(componentwise_max(a, b) in p for a, b in itertools.combinations(p.points, 2))


def preserves_joins_and_bottom(f: MonotoneMap) -> bool:
    """Criterion for a right adjoint out of a finite lattice."""
    source, target = f.source, f.target
    bottom = source.bottom()
    if bottom is not None and f(bottom) != target.bottom():
        return False
    for a, b in itertools.combinations(source.points, 2):
        j = join(source, a, b)
        if j is None:
            continue
        if join(target, f(a), f(b)) != f(j):
            return False
    return True


def preserves_meets_and_top(g: MonotoneMap) -> bool:
    """Criterion for a left adjoint out of a finite lattice."""
    source, target = g.source, g.target
    top = source.top()
    if top is not None and g(top) != target.top():
        return False
    for a, b in itertools.combinations(source.points, 2):
        m = meet(source, a, b)
        if m is None:
            continue
        if meet(target, g(a), g(b)) != g(m):
            return False
    return True


# --------------------------------------------------------------------------------------
# Metric quantities
# --------------------------------------------------------------------------------------

def distortion(f: MonotoneMap) -> Fraction:
    """
    Maximal l-infinity displacement max_p ||p - f(p)||.

    Raises:
        OrderError: when source and target live in different dimensions
    """
    if f.source.dimension != f.target.dimension:
        raise OrderError("distortion needs source and target in the same R^d")
    if f.axis_maps is not None:
        return max(
            (abs(k - v) for amap in f.axis_maps for k, v in amap.items()),
            default=Fraction(0)
        )
    return max((linf(p, f(p)) for p in f.source.points), default=Fraction(0))


def injectivity_radius(points: Iterable[Iterable]) -> ExtRational:
    """
    Half the smallest nonzero coordinate gap, over all axes.

    Returns:
        Exact Fraction, or INFINITY when no coordinates differ
    """
    normalized = [as_point(p) for p in points]
    best: ExtRational = INFINITY
    if not normalized:
        return best
    for i in range(len(normalized[0])):
        values = sorted({p[i] for p in normalized})
        for a, b in zip(values, values[1:]):
            gap = (b - a) / 2
            if gap < best:
                best = gap
    return best
