"""
Interleavings

An eps-interleaving of M and N is a pair of morphisms F: M -> N(eps) and
G: N -> M(eps) whose composites are the 2 eps structure maps. Components are
stored only at the support-grid points of the source module; at any other
point a component is obtained by factoring through the floor of that grid.

Provides the verifier, a brute-force search for tiny instances, and the
construction turning a validated edit into an interleaving of the same cost.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np

from edit_category import (
    EditRecord,
    InvalidEditError,
    ModuleOverPoset,
    NotFound,
    ValidationReport,
    naturality_failure,
    validate_edit
)
from exactlin import PrimeField, enumerate_coefficients, kron, stack_rows
from order_core import BOTTOM, EMPTY_SUPPORT, MaybePoint, Point, describe, distortion, shift, to_rational
from pm_utils import config_value, default_seed, format_rational, log_event, log_operation, measure_time
from presentations import Presentation, dim_at, structure_map, support_grid


class SearchBudgetError(ValueError):
    """Raised when an instance is too large for exhaustive interleaving search."""


@dataclass
class InterleavingWitness:
    """eps with F components at M's support grid and G components at N's support grid."""

    eps: Fraction
    F: Dict[Point, np.ndarray]
    G: Dict[Point, np.ndarray]
    p: Optional[int] = None
    dimension: Optional[int] = None


def swap_witness(w: InterleavingWitness) -> InterleavingWitness:
    """The same interleaving read from the other side: (N, M) instead of (M, N)."""
    return InterleavingWitness(eps=w.eps, F=dict(w.G), G=dict(w.F), p=w.p, dimension=w.dimension)


def grid_points(m: Presentation) -> Tuple[Point, ...]:
    grid = support_grid(m)
    return () if grid is EMPTY_SUPPORT else grid.points


def grid_floor(m: Presentation, x: MaybePoint) -> MaybePoint:
    grid = support_grid(m)
    return BOTTOM if grid is EMPTY_SUPPORT else grid.floor(x)


def extended_component(
    src: Presentation,
    dst: Presentation,
    components: Dict[Point, np.ndarray],
    eps: Fraction,
    x: Point
) -> np.ndarray:
    """
    Component at an arbitrary point x of a morphism src -> dst(eps) given on src's grid.

    Returns:
        dim dst(x + eps) x dim src(x) matrix
    """
    field = src.field
    base = grid_floor(src, x)
    target_dim = dim_at(dst, shift(x, eps))
    if base is BOTTOM:
        return field.zeros(target_dim, dim_at(src, x))
    into = field.inverse(structure_map(src, base, x))
    if into is None:
        raise ValueError(f"Module is not constructible over its support grid at {describe(x)}")
    return field.mul(structure_map(dst, shift(base, eps), shift(x, eps)), components[base], into)


def _shape_failure(src: Presentation, dst: Presentation, components: Dict[Point, np.ndarray], eps: Fraction) -> Optional[str]:
    points = grid_points(src)
    if set(components) != set(points):
        extra = sorted(set(components) - set(points))
        missing = sorted(set(points) - set(components))
        where = missing[0] if missing else extra[0]
        return f"components do not match the support grid at {describe(where)}"
    for x in points:
        expected = (dim_at(dst, shift(x, eps)), dim_at(src, x))
        if tuple(components[x].shape) != expected:
            return f"component at {describe(x)} has shape {tuple(components[x].shape)}, expected {expected}"
    return None


def _shifted_module(m: Presentation, grid_of: Presentation, eps: Fraction) -> ModuleOverPoset:
    """m(eps) restricted to the support grid of grid_of."""
    grid = support_grid(grid_of)
    field = m.field
    dims = {x: dim_at(m, shift(x, eps)) for x in grid.points}
    maps = {(x, y): structure_map(m, shift(x, eps), shift(y, eps)) for x, y in grid.cover_pairs()}
    return ModuleOverPoset(field, grid, dims, maps)


def _triangle_failure(
    src: Presentation,
    dst: Presentation,
    forward: Dict[Point, np.ndarray],
    backward: Dict[Point, np.ndarray],
    eps: Fraction
) -> Optional[str]:
    """First grid point x of src where backward(x + eps) forward(x) differs from src(x -> x + 2 eps)."""
    field = src.field
    for x in grid_points(src):
        there = shift(x, eps)
        back = extended_component(dst, src, backward, eps, there)
        composite = field.mul(back, forward[x])
        expected = structure_map(src, x, shift(x, 2 * eps))
        if not field.equal(composite, expected):
            return f"triangle fails at {describe(x)}"
    return None


@measure_time
def verify_interleaving(m: Presentation, n: Presentation, w: InterleavingWitness) -> ValidationReport:
    """
    Check an eps-interleaving witness.

    Args:
        m: First module
        n: Second module
        w: Witness with F on m's grid and G on n's grid

    Returns:
        ValidationReport with shape, naturality and both triangle checks
    """
    report = ValidationReport("interleaving")
    eps = to_rational(w.eps)
    compatible = m.dimension == n.dimension and m.field == n.field and eps >= 0
    if w.p is not None and w.p != m.p:
        compatible = False
    if w.dimension is not None and w.dimension != m.dimension:
        compatible = False
    report.add(
        "compatible",
        compatible,
        "" if compatible else "modules and witness must share field and dimension and eps must be nonnegative"
    )
    if not compatible:
        return report

    shapes = _shape_failure(m, n, w.F, eps) or _shape_failure(n, m, w.G, eps)
    report.add("shapes", shapes is None, shapes or "")
    if shapes is not None:
        return report

    failure_f = None
    if grid_points(m):
        failure_f = naturality_failure(
            ModuleOverPoset.from_presentation(m, support_grid(m)), _shifted_module(n, m, eps), w.F
        )
    report.add("natural-F", failure_f is None, failure_f or "")
    failure_g = None
    if grid_points(n):
        failure_g = naturality_failure(
            ModuleOverPoset.from_presentation(n, support_grid(n)), _shifted_module(m, n, eps), w.G
        )
    report.add("natural-G", failure_g is None, failure_g or "")

    triangle_m = _triangle_failure(m, n, w.F, w.G, eps)
    report.add("triangle-M", triangle_m is None, triangle_m or "")
    triangle_n = _triangle_failure(n, m, w.G, w.F, eps)
    report.add("triangle-N", triangle_n is None, triangle_n or "")
    log_event("INTERLEAVE", f"verified witness at eps {format_rational(eps)}: {report.passed}")
    return report


def relax_witness(m: Presentation, n: Presentation, w: InterleavingWitness, eps) -> InterleavingWitness:
    """Push a witness at w.eps forward to a larger eps through the structure maps."""
    eps = to_rational(eps)
    if eps < w.eps:
        raise ValueError(f"Cannot relax eps {format_rational(w.eps)} down to {format_rational(eps)}")
    F = {x: n.field.mul(structure_map(n, shift(x, w.eps), shift(x, eps)), c) for x, c in w.F.items()}
    G = {x: m.field.mul(structure_map(m, shift(x, w.eps), shift(x, eps)), c) for x, c in w.G.items()}
    return InterleavingWitness(eps=eps, F=F, G=G, p=w.p, dimension=w.dimension)


# --------------------------------------------------------------------------------------
# Edit -> interleaving
# --------------------------------------------------------------------------------------

def interleave_from_edit(e: EditRecord, check: bool = True) -> InterleavingWitness:
    """
    Build an interleaving of (e.src, e.dst) at eps = distortion(e.f).

    F routes src through g after flooring on Q and applies the witness; G
    inverts the witness and moves up through src's structure maps.

    Args:
        e: A validated edit
        check: Validate the edit first

    Returns:
        Witness with F on src's support grid and G on dst's support grid
    """
    if check:
        report = validate_edit(e)
        if not report.passed:
            raise InvalidEditError(f"Edit fails checks: {', '.join(report.failed_checks())}")
    eps = distortion(e.f)
    src, dst = e.src, e.dst
    field = src.field

    def floor_p(x):
        return e.P.floor(x) if len(e.P) else BOTTOM

    def floor_q(x):
        return e.Q.floor(x) if len(e.Q) else BOTTOM

    def inv(matrix):
        result = field.inverse(matrix)
        if result is None:
            raise InvalidEditError("Structure map expected to be an isomorphism is singular")
        return result

    F: Dict[Point, np.ndarray] = {}
    for a in grid_points(src):
        up = shift(a, eps)
        base = floor_p(a)
        top = floor_q(up)
        if base is BOTTOM or top is BOTTOM:
            F[a] = field.zeros(dim_at(dst, up), dim_at(src, a))
            continue
        routed = e.g(top)
        F[a] = field.mul(
            structure_map(dst, top, up),
            e.witness[top],
            structure_map(src, base, routed),
            inv(structure_map(src, base, a))
        )

    G: Dict[Point, np.ndarray] = {}
    for b in grid_points(dst):
        up = shift(b, eps)
        base = floor_q(b)
        top = floor_p(up)
        if base is BOTTOM or top is BOTTOM:
            G[b] = field.zeros(dim_at(src, up), dim_at(dst, b))
            continue
        routed = e.g(base)
        G[b] = field.mul(
            structure_map(src, top, up),
            structure_map(src, routed, top),
            inv(e.witness[base]),
            inv(structure_map(dst, base, b))
        )
    log_event("INTERLEAVE", f"edit converted to interleaving at eps {format_rational(eps)}")
    return InterleavingWitness(eps=eps, F=F, G=G, p=field.p, dimension=src.dimension)


# --------------------------------------------------------------------------------------
# Brute-force search
# --------------------------------------------------------------------------------------

class InterleavingSearch:
    """
    Exhaustive search for an eps-interleaving on tiny instances.

    F ranges over the natural transformations M -> N(eps), enumerated in
    lexicographic coefficient order; for each F the remaining conditions are
    linear in G and solved directly.
    """

    def __init__(
        self,
        m: Presentation,
        n: Presentation,
        eps,
        budget: Optional[int] = None,
        seed: Optional[int] = None
    ):
        """
        Initialize the search.

        Args:
            m: First module
            n: Second module
            eps: Interleaving parameter
            budget: Cap on total pointwise dimension over both support grids
            seed: Seed for sampling when the F space is too large to enumerate
        """
        if m.dimension != n.dimension or m.field != n.field:
            raise ValueError("Modules must share field and dimension")
        self.m = m
        self.n = n
        self.eps = to_rational(eps)
        if self.eps < 0:
            raise ValueError("eps must be nonnegative")
        self.field: PrimeField = m.field
        self.budget = config_value("interleaving_search", "dimension_budget") if budget is None else budget
        self.enumeration_budget = config_value("interleaving_search", "enumeration_budget")
        self.seed = default_seed() if seed is None else seed
        self.operation_log: List[Dict[str, Any]] = []

    def _log_operation(self, op_type: str, details: Dict[str, Any]) -> None:
        log_operation(self.operation_log, "INTERLEAVE", op_type, details)

    def get_operation_log(self) -> List[Dict[str, Any]]:
        return self.operation_log

    def total_dimension(self) -> int:
        return sum(dim_at(self.m, x) for x in grid_points(self.m)) + sum(dim_at(self.n, x) for x in grid_points(self.n))

    def _offsets(self, src: Presentation, dst: Presentation) -> Tuple[Dict[Point, Tuple[int, int]], int]:
        offsets = {}
        total = 0
        for x in grid_points(src):
            size = dim_at(dst, shift(x, self.eps)) * dim_at(src, x)
            offsets[x] = (total, total + size)
            total += size
        return offsets, total

    def _unpack(self, vector, src, dst, offsets) -> Dict[Point, np.ndarray]:
        return {
            x: vector[lo:hi].reshape(dim_at(dst, shift(x, self.eps)), dim_at(src, x))
            for x, (lo, hi) in offsets.items()
        }

    def _naturality_blocks(self, src: Presentation, dst: Presentation, offsets, total) -> List[np.ndarray]:
        """Rows of vec(T_y src_xy) - vec(dst(eps)_xy T_x) over cover pairs of src's grid."""
        field = self.field
        blocks = []
        if not offsets:
            return blocks
        for x, y in support_grid(src).cover_pairs():
            a = structure_map(src, x, y)
            b = structure_map(dst, shift(x, self.eps), shift(y, self.eps))
            rows = b.shape[0] * a.shape[1]
            if rows == 0:
                continue
            block = field.zeros(rows, total)
            lo, hi = offsets[y]
            if hi > lo:
                block[:, lo:hi] = field.reduce(kron(field.identity(b.shape[0]), a.T))
            lo, hi = offsets[x]
            if hi > lo:
                block[:, lo:hi] = field.sub(block[:, lo:hi], kron(b, field.identity(a.shape[1])))
            blocks.append(block)
        return blocks

    def _solve_g(self, F: Dict[Point, np.ndarray], g_offsets, g_total, g_blocks) -> Optional[Dict[Point, np.ndarray]]:
        """Solve for G given F, or None when the linear system is inconsistent."""
        field = self.field
        m, n, eps = self.m, self.n, self.eps
        rows: List[np.ndarray] = list(g_blocks)
        rhs: List[np.ndarray] = [field.zeros(block.shape[0], 1) for block in g_blocks]

        # triangle at grid points of m: G^(p+eps) F_p = m(p -> p + 2 eps)
        for p in grid_points(m):
            there = shift(p, eps)
            expected = structure_map(m, p, shift(p, 2 * eps))
            base = grid_floor(n, there)
            if base is BOTTOM:
                if not field.is_zero(expected):
                    return None
                continue
            if expected.size == 0:
                continue
            into = field.inverse(structure_map(n, base, there))
            left = structure_map(m, shift(base, eps), shift(there, eps))
            right = field.mul(into, F[p])
            block = field.zeros(expected.size, g_total)
            lo, hi = g_offsets[base]
            if hi > lo:
                block[:, lo:hi] = field.reduce(kron(left, right.T))
            rows.append(block)
            rhs.append(expected.reshape(-1, 1))

        # triangle at grid points of n: F^(q+eps) G_q = n(q -> q + 2 eps)
        for q in grid_points(n):
            expected = structure_map(n, q, shift(q, 2 * eps))
            after = extended_component(m, n, F, eps, shift(q, eps))
            if expected.size == 0:
                continue
            block = field.zeros(expected.size, g_total)
            lo, hi = g_offsets[q]
            if hi > lo:
                block[:, lo:hi] = field.reduce(kron(after, field.identity(dim_at(n, q))))
            rows.append(block)
            rhs.append(expected.reshape(-1, 1))

        system = stack_rows(rows, g_total)
        target = stack_rows(rhs, 1)
        if system.shape[0] == 0:
            return self._unpack(field.zeros(g_total, 1)[:, 0], n, m, g_offsets)
        solution = field.solve(system, target)
        if solution is None:
            return None
        return self._unpack(solution[:, 0], n, m, g_offsets)

    @measure_time
    def run(self) -> Union[InterleavingWitness, NotFound]:
        """
        Search for a witness.

        Returns:
            The first verifying witness in enumeration order, or NotFound

        Raises:
            SearchBudgetError: when the instance exceeds the dimension budget
        """
        total = self.total_dimension()
        if total > self.budget:
            raise SearchBudgetError(f"Total pointwise dimension {total} exceeds search budget {self.budget}")
        field = self.field
        m, n = self.m, self.n
        f_offsets, f_total = self._offsets(m, n)
        g_offsets, g_total = self._offsets(n, m)
        f_system = stack_rows(self._naturality_blocks(m, n, f_offsets, f_total), f_total)
        f_basis = field.nullspace_basis(f_system)
        g_blocks = self._naturality_blocks(n, m, g_offsets, g_total)
        k = f_basis.shape[1]
        self._log_operation("SEARCH", {"eps": format_rational(self.eps), "total_dimension": total, "f_space": k})

        exhaustive = field.p ** k <= self.enumeration_budget
        if exhaustive:
            candidates = enumerate_coefficients(field.p, k)
        else:
            rng = np.random.default_rng(self.seed)
            samples = config_value("natural_iso", "random_samples")
            candidates = (tuple(rng.integers(0, field.p, size=k)) for _ in range(samples))

        tried = 0
        for coeffs in candidates:
            tried += 1
            vector = field.reduce(f_basis @ np.asarray(coeffs, dtype=np.int64)) if k else field.zeros(f_total, 1)[:, 0]
            F = self._unpack(vector, m, n, f_offsets)
            G = self._solve_g(F, g_offsets, g_total, g_blocks)
            if G is None:
                continue
            witness = InterleavingWitness(eps=self.eps, F=F, G=G, p=field.p, dimension=m.dimension)
            if verify_interleaving(m, n, witness).passed:
                self._log_operation("FOUND", {"candidates_tried": tried})
                return witness
        self._log_operation("NOT_FOUND", {"candidates_tried": tried, "exhaustive": exhaustive})
        if exhaustive:
            return NotFound(f"no {format_rational(self.eps)}-interleaving exists", provably_none=True)
        return NotFound(f"sampling budget exhausted after {tried} candidates", provably_none=False)


def search_interleaving(
    m: Presentation,
    n: Presentation,
    eps,
    budget: Optional[int] = None,
    seed: Optional[int] = None
) -> Union[InterleavingWitness, NotFound]:
    """Run InterleavingSearch; see that class for the method."""
    return InterleavingSearch(m, n, eps, budget=budget, seed=seed).run()
