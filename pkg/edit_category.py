"""
Edits, Edit Paths and Natural Isomorphisms

An edit is a morphism of represented modules: a monotone map f: P -> Q with
right adjoint g, together with a witness natural isomorphism from the source
module restricted along g to the target module on Q. Edit paths chain edits in
either direction; their length is the summed distortion of the f maps.

This module validates edits and paths, searches for natural isomorphisms when
no witness is supplied, and computes the path-component invariant
dim M(top).
"""

from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Tuple, Union

import numpy as np

from exactlin import PrimeField, enumerate_coefficients, kron, stack_rows
from order_core import (
    BOTTOM,
    EMPTY_SUPPORT,
    EmbeddedPoset,
    Grid,
    MonotoneMap,
    NoAdjoint,
    OrderError,
    Point,
    check_galois,
    describe,
    distortion,
    is_grid_morphism,
    is_js_object,
    origin_grid,
    right_adjoint
)
from pm_utils import ExtRational, config_value, default_seed, format_rational, log_event, log_operation, measure_time
from presentations import Presentation, dim_at, free_module, structure_map, support_grid

CATEGORIES = ("1D", "JS")
DIRECTIONS = ("fwd", "rev")


class InvalidEditError(ValueError):
    """Raised when an operation needs a validated edit and gets a failing one."""


class InvalidPathError(ValueError):
    """Raised when path nodes and steps do not line up."""


class ValidationReport:
    """
    Ordered pass/fail checks with an operation log.

    Reports render as deterministic text lines, one per check.
    """

    def __init__(self, subject: str):
        self.subject = subject
        self.checks: List[Dict[str, Any]] = []
        self.operation_log: List[Dict[str, Any]] = []

    def add(self, name: str, passed: bool, detail: str = "") -> bool:
        self.checks.append({"name": name, "passed": bool(passed), "detail": detail})
        log_operation(self.operation_log, "CHECK", "PASS" if passed else "FAIL", {"check": name, "detail": detail})
        return bool(passed)

    def extend(self, other: "ValidationReport", prefix: str) -> None:
        for check in other.checks:
            self.add(f"{prefix}.{check['name']}", check["passed"], check["detail"])

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.checks)

    def failed_checks(self) -> List[str]:
        return [c["name"] for c in self.checks if not c["passed"]]

    def get_operation_log(self) -> List[Dict[str, Any]]:
        return self.operation_log

    def lines(self) -> List[str]:
        out = []
        for c in self.checks:
            status = "PASS" if c["passed"] else "FAIL"
            out.append(f"check {c['name']}: {status}" + (f" ({c['detail']})" if c["detail"] else ""))
        out.append(f"{self.subject}: {'PASS' if self.passed else 'FAIL'}")
        return out

    def __bool__(self) -> bool:
        return self.passed


@dataclass(frozen=True)
class NotFound:
    """No witness was produced; provably_none separates disproof from budget exhaustion."""

    reason: str
    provably_none: bool

    def __bool__(self) -> bool:
        return False


# --------------------------------------------------------------------------------------
# Modules over finite posets
# --------------------------------------------------------------------------------------

class ModuleOverPoset:
    """
    A module restricted to a finite poset: dimensions at points plus the
    structure maps along cover pairs.
    """

    def __init__(
        self,
        field: PrimeField,
        poset: EmbeddedPoset,
        dims: Dict[Point, int],
        maps: Dict[Tuple[Point, Point], np.ndarray]
    ):
        self.field = field
        self.poset = poset
        self.dims = dims
        self.maps = maps
        self.covers = list(maps.keys())

    @classmethod
    def from_presentation(
        cls,
        m: Presentation,
        poset: EmbeddedPoset,
        reindex: Optional[MonotoneMap] = None
    ) -> "ModuleOverPoset":
        """
        Restrict m to poset, optionally precomposed with a monotone map.

        Args:
            m: Presentation
            poset: Indexing poset
            reindex: Map from poset into the points m is evaluated at
        """
        at = (lambda x: reindex(x)) if reindex is not None else (lambda x: x)
        dims = {x: dim_at(m, at(x)) for x in poset.points}
        maps = {(x, y): structure_map(m, at(x), at(y)) for x, y in poset.cover_pairs()}
        return cls(m.field, poset, dims, maps)

    def same_as(self, other: "ModuleOverPoset") -> bool:
        if self.dims != other.dims or set(self.maps) != set(other.maps):
            return False
        return all(self.field.equal(self.maps[k], other.maps[k]) for k in self.maps)


def naturality_failure(
    a: ModuleOverPoset,
    b: ModuleOverPoset,
    transform: Dict[Point, np.ndarray]
) -> Optional[str]:
    """
    First cover pair (x, y) where T_y a_xy != b_xy T_x, or a shape error; None when natural.
    """
    field = a.field
    for x in a.poset.points:
        if x not in transform:
            return f"missing component at {describe(x)}"
        shape = (b.dims[x], a.dims[x])
        if tuple(transform[x].shape) != shape:
            return f"component at {describe(x)} has shape {tuple(transform[x].shape)}, expected {shape}"
    for x, y in a.covers:
        left = field.mul(transform[y], a.maps[(x, y)])
        right = field.mul(b.maps[(x, y)], transform[x])
        if not field.equal(left, right):
            return f"square {describe(x)} -> {describe(y)} does not commute"
    return None


def invertibility_failure(field: PrimeField, transform: Dict[Point, np.ndarray]) -> Optional[str]:
    for x in sorted(transform):
        if not field.is_invertible(transform[x]):
            return f"component at {describe(x)} is not invertible"
    return None


def _transformation_space(a: ModuleOverPoset, b: ModuleOverPoset) -> Tuple[np.ndarray, Dict[Point, Tuple[int, int]]]:
    """Kernel basis of the naturality system, with each point's slice of the unknown vector."""
    field = a.field
    offsets: Dict[Point, Tuple[int, int]] = {}
    total = 0
    for x in a.poset.points:
        size = b.dims[x] * a.dims[x]
        offsets[x] = (total, total + size)
        total += size
    blocks = []
    for x, y in a.covers:
        ax, ay = a.dims[x], a.dims[y]
        bx, by = b.dims[x], b.dims[y]
        rows = by * ax
        if rows == 0:
            continue
        block = field.zeros(rows, total)
        # vec(T_y A) - vec(B T_x), row-major vectorization
        lo, hi = offsets[y]
        if hi > lo:
            block[:, lo:hi] = field.reduce(kron(field.identity(by), a.maps[(x, y)].T))
        lo, hi = offsets[x]
        if hi > lo:
            block[:, lo:hi] = field.sub(block[:, lo:hi], kron(b.maps[(x, y)], field.identity(ax)))
        blocks.append(block)
    system = stack_rows(blocks, total)
    return field.nullspace_basis(system), offsets


def _unpack(vector: np.ndarray, a: ModuleOverPoset, b: ModuleOverPoset, offsets) -> Dict[Point, np.ndarray]:
    return {
        x: vector[lo:hi].reshape(b.dims[x], a.dims[x])
        for x, (lo, hi) in offsets.items()
    }


@measure_time
def find_natural_iso(
    a: ModuleOverPoset,
    b: ModuleOverPoset,
    seed: Optional[int] = None,
    samples: Optional[int] = None,
    budget: Optional[int] = None
) -> Union[Dict[Point, np.ndarray], NotFound]:
    """
    Search for a natural isomorphism a -> b over their common poset.

    The naturality equations are linear; the solution space is sampled at
    random and, when small enough, enumerated exhaustively for an
    everywhere-invertible element.

    Args:
        a: Source module
        b: Target module
        seed: Sampler seed (defaults to PMEDIT_SEED)
        samples: Random trials (defaults to natural_iso.random_samples)
        budget: Largest solution space enumerated exhaustively

    Returns:
        Witness components per point, or NotFound
    """
    if a.poset != b.poset:
        raise OrderError("find_natural_iso needs modules over the same poset")
    for x in a.poset.points:
        if a.dims[x] != b.dims[x]:
            return NotFound(
                f"dimension vectors differ at {describe(x)}: {a.dims[x]} vs {b.dims[x]}",
                provably_none=True
            )
    field = a.field
    if a.same_as(b):
        return {x: field.identity(a.dims[x]) for x in a.poset.points}

    seed = default_seed() if seed is None else seed
    samples = config_value("natural_iso", "random_samples") if samples is None else samples
    budget = config_value("natural_iso", "enumeration_budget") if budget is None else budget

    basis, offsets = _transformation_space(a, b)
    k = basis.shape[1]
    log_event("EDIT", f"natural transformation space has dimension {k} over F_{field.p}")

    def candidate(coeffs) -> Optional[Dict[Point, np.ndarray]]:
        vector = field.reduce(basis @ np.asarray(coeffs, dtype=np.int64)) if k else field.zeros(basis.shape[0], 1)[:, 0]
        transform = _unpack(vector, a, b, offsets)
        if invertibility_failure(field, transform) is None:
            return transform
        return None

    rng = np.random.default_rng(seed)
    for _ in range(samples if k else 1):
        found = candidate(rng.integers(0, field.p, size=k, dtype=np.int64))
        if found is not None:
            return found

    if field.p ** k <= budget:
        for coeffs in enumerate_coefficients(field.p, k):
            found = candidate(coeffs)
            if found is not None:
                return found
        return NotFound("no invertible natural transformation exists", provably_none=True)
    return NotFound(
        f"sampling budget exhausted ({samples} samples, space of size {field.p}^{k})",
        provably_none=False
    )


# --------------------------------------------------------------------------------------
# Edits
# --------------------------------------------------------------------------------------

@dataclass
class EditRecord:
    """
    One edit from src to dst.

    src is P-constructible, dst is Q-constructible, f: P -> Q has right adjoint
    g, and witness[q] maps src at g(q) isomorphically onto dst at q.
    """

    src: Presentation
    dst: Presentation
    P: EmbeddedPoset
    Q: EmbeddedPoset
    f: MonotoneMap
    g: MonotoneMap
    witness: Dict[Point, np.ndarray]
    category: str = "1D"

    def __post_init__(self):
        if self.category not in CATEGORIES:
            raise InvalidEditError(f"Unknown edit category {self.category!r}")

    @property
    def cost(self) -> Fraction:
        return distortion(self.f)


@dataclass
class EditPath:
    """Nodes M_0..M_m and steps (edit, direction); fwd edits go node k-1 -> node k."""

    nodes: List[Presentation]
    steps: List[Tuple[EditRecord, str]] = dataclass_field(default_factory=list)


def check_constructible(m: Presentation, poset: EmbeddedPoset) -> Optional[str]:
    """
    Decide whether m is the floor extension of its restriction to poset.

    Returns:
        None when constructible, else a description of the first failing point
    """
    d = m.dimension
    if len(poset) and poset.dimension != d:
        return f"poset dimension {poset.dimension} differs from module dimension {d}"
    axes = [set() for _ in range(d)]
    for x in poset.points:
        for i, c in enumerate(x):
            axes[i].add(c)
    support = support_grid(m)
    if support is not EMPTY_SUPPORT:
        for i, axis in enumerate(support.axes):
            axes[i].update(axis)
    for axis in axes:
        if not axis:
            axis.add(Fraction(0))
        axis.update({min(axis) - 1, max(axis) + 1})
    refinement = Grid(tuple(tuple(a) for a in axes))
    for x in refinement.points:
        base = poset.floor(x) if len(poset) else BOTTOM
        if base is None:
            return f"no floor in the indexing poset below {describe(x)}"
        if base is BOTTOM:
            if dim_at(m, x) != 0:
                return f"nonzero at {describe(x)} below the indexing poset"
            continue
        if not m.field.is_invertible(structure_map(m, base, x)):
            return f"structure map {describe(base)} -> {describe(x)} is not an isomorphism"
    return None


@measure_time
def validate_edit(e: EditRecord) -> ValidationReport:
    """
    Validate an edit.

    Checks, in order: constructibility of both ends, the Galois connection,
    category membership, witness naturality, witness invertibility.

    Args:
        e: The edit

    Returns:
        ValidationReport with one entry per check
    """
    report = ValidationReport("edit")

    src_failure = check_constructible(e.src, e.P)
    dst_failure = check_constructible(e.dst, e.Q)
    report.add(
        "constructible",
        src_failure is None and dst_failure is None,
        "; ".join(s for s in (src_failure and f"src: {src_failure}", dst_failure and f"dst: {dst_failure}") if s)
    )

    galois_detail = ""
    galois_ok = e.f.source == e.P and e.f.target == e.Q and e.g.source == e.Q and e.g.target == e.P
    if not galois_ok:
        galois_detail = "f or g does not run between P and Q"
    elif not e.f.is_monotone():
        galois_ok, galois_detail = False, "f is not monotone"
    else:
        adjoint = right_adjoint(e.f)
        if isinstance(adjoint, NoAdjoint):
            galois_ok, galois_detail = False, adjoint.reason
        elif adjoint != e.g:
            galois_ok, galois_detail = False, "g is not the right adjoint of f"
        elif not check_galois(e.f, e.g):
            galois_ok, galois_detail = False, "adjunction law fails"
    report.add("galois", galois_ok, galois_detail)

    if e.category == "1D":
        member = isinstance(e.P, Grid) and isinstance(e.Q, Grid)
        member_detail = "" if member else "1D edits need grid indexing posets"
        if member and not (is_grid_morphism(e.f) and is_grid_morphism(e.g)):
            member, member_detail = False, "f and g must be grid morphisms"
    else:
        member = is_js_object(e.P) and is_js_object(e.Q)
        member_detail = "" if member else "indexing poset is not join-closed in R^d"
    report.add("membership", member, member_detail)

    if e.g.source == e.Q and e.g.target == e.P:
        try:
            a = ModuleOverPoset.from_presentation(e.src, e.Q, reindex=e.g)
            b = ModuleOverPoset.from_presentation(e.dst, e.Q)
            natural_failure = naturality_failure(a, b, e.witness)
        except ValueError as exc:
            natural_failure = str(exc)
    else:
        natural_failure = "g does not map Q into P"
    report.add("naturality", natural_failure is None, natural_failure or "")

    inverse_failure = invertibility_failure(e.src.field, {q: e.witness[q] for q in e.witness})
    missing = [q for q in e.Q.points if q not in e.witness]
    if missing:
        inverse_failure = f"missing component at {describe(missing[0])}"
    report.add("invertible", inverse_failure is None, inverse_failure or "")

    log_event("EDIT", f"validated edit of cost {format_rational(e.cost) if galois_ok else '?'}: {report.passed}")
    return report


def identity_edit(m: Presentation) -> EditRecord:
    """The identity edit of m over its support grid."""
    grid = support_grid(m)
    if grid is EMPTY_SUPPORT:
        grid = origin_grid(m.dimension)
    ident = MonotoneMap.identity(grid)
    return EditRecord(
        src=m, dst=m, P=grid, Q=grid, f=ident, g=MonotoneMap.identity(grid),
        witness={x: m.field.identity(dim_at(m, x)) for x in grid.points},
        category="1D"
    )


def collapse_edit(m: Presentation) -> EditRecord:
    """
    The edit from m to the free module F^n at the origin, n = dim m(top).

    f sends the support grid to the one-point grid; its right adjoint picks the top.
    """
    grid = support_grid(m)
    if grid is EMPTY_SUPPORT:
        grid = origin_grid(m.dimension)
    point = origin_grid(m.dimension)
    zero = point.points[0]
    f = MonotoneMap.from_axis_maps(grid, point, [{v: zero[i] for v in axis} for i, axis in enumerate(grid.axes)])
    g = MonotoneMap.from_axis_maps(point, grid, [{zero[i]: axis[-1]} for i, axis in enumerate(grid.axes)])
    n = component(m)
    target = free_module(n, m.dimension, m.p)
    return EditRecord(src=m, dst=target, P=grid, Q=point, f=f, g=g, witness={zero: m.field.identity(n)}, category="1D")


def component(m: Presentation) -> int:
    """Path-component invariant: dim of m at the top of its support grid (0 when empty)."""
    grid = support_grid(m)
    if grid is EMPTY_SUPPORT:
        return 0
    return dim_at(m, grid.top())


# --------------------------------------------------------------------------------------
# Paths
# --------------------------------------------------------------------------------------

def check_path_structure(path: EditPath) -> None:
    """
    Raises:
        InvalidPathError: when a step does not connect its neighbouring nodes
    """
    if len(path.nodes) != len(path.steps) + 1:
        raise InvalidPathError(f"{len(path.nodes)} nodes cannot bound {len(path.steps)} steps")
    for k, (record, direction) in enumerate(path.steps, start=1):
        if direction not in DIRECTIONS:
            raise InvalidPathError(f"Step {k} has unknown direction {direction!r}")
        before, after = path.nodes[k - 1], path.nodes[k]
        expected = (before, after) if direction == "fwd" else (after, before)
        if (record.src, record.dst) != expected:
            raise InvalidPathError(f"Step {k} ({direction}) does not connect nodes {k - 1} and {k}")


def path_cost(path: EditPath) -> Fraction:
    """Summed distortion of the steps; 0 for the empty path."""
    check_path_structure(path)
    return sum((distortion(record.f) for record, _ in path.steps), Fraction(0))


@measure_time
def validate_path(path: EditPath) -> ValidationReport:
    """Structure check plus validate_edit for every step and the component invariant."""
    report = ValidationReport("path")
    try:
        check_path_structure(path)
        report.add("structure", True)
    except InvalidPathError as exc:
        report.add("structure", False, str(exc))
        return report
    for k, (record, _) in enumerate(path.steps, start=1):
        report.extend(validate_edit(record), f"step{k}")
    components = [component(node) for node in path.nodes]
    report.add(
        "component",
        len(set(components)) <= 1,
        "" if len(set(components)) <= 1 else f"values {components}"
    )
    return report


def edit_stability_report(
    path: EditPath,
    distance: Callable[[Presentation, Presentation], ExtRational]
) -> ValidationReport:
    """
    Check that a distance is bounded by the distortion of every single edit of a path.

    When it is, the distance is bounded by the edit distance; the report also
    compares the end-to-end distance with the path cost.
    """
    check_path_structure(path)
    report = ValidationReport("stability")
    for k, (record, _) in enumerate(path.steps, start=1):
        value = distance(path.nodes[k - 1], path.nodes[k])
        bound = distortion(record.f)
        report.add(f"step{k}", value <= bound, f"{format_rational(value)} <= {format_rational(bound)}")
    if path.nodes:
        total = distance(path.nodes[0], path.nodes[-1])
        cost = path_cost(path)
        report.add("endpoints", total <= cost, f"{format_rational(total)} <= {format_rational(cost)}")
    return report
