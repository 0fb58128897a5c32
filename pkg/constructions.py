"""
Edits from Interleavings

The constructive side of the edit/interleaving correspondence:

- easy_edit turns a cheap presentation bijection (cost below the injectivity
  radius of the source grades) into a validated grid edit
- family_at slides an interleaving presentation pair from the M side (t = 0)
  to the N side (t = eps)
- schedule picks exact rational times along the family such that every
  consecutive step is an easy edit
- interleaving_to_path assembles the resulting certified edit path
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from barcodes import Barcode, bar_distance, half_length, optimal_matching
from edit_category import (
    EditPath,
    EditRecord,
    ModuleOverPoset,
    NotFound,
    ValidationReport,
    find_natural_iso,
    identity_edit,
    naturality_failure
)
from exactlin import PrimeField
from order_core import (
    EMPTY_SUPPORT,
    Grid,
    MonotoneMap,
    Point,
    as_point,
    check_galois,
    describe,
    injectivity_radius,
    leq,
    linf,
    shift,
    smallest_grid,
    to_rational
)
from pm_utils import INFINITY, ExtRational, format_rational, log_event, measure_time
from presentations import (
    GradedSet,
    HomogeneousElement,
    Presentation,
    PresentationBijection,
    PresentationError,
    bijection_cost,
    class_vector,
    dim_at,
    evaluate,
    support_grid,
    validate_bijection
)

TAGS = ("w1", "w2")


class EasyEditHypothesisError(ValueError):
    """Raised when a bijection's cost is not below the injectivity radius of the source grades."""


class ScheduleError(ValueError):
    """Raised for out-of-range times and degenerate interleaving pairs."""


# --------------------------------------------------------------------------------------
# Easy edits
# --------------------------------------------------------------------------------------

def _unique_partner(values: Sequence[Fraction], v: Fraction, eps: Fraction) -> Fraction:
    near = [u for u in values if abs(u - v) <= eps]
    if len(near) != 1:
        raise EasyEditHypothesisError(f"value {format_rational(v)} has {len(near)} partners within {format_rational(eps)}")
    return near[0]


@measure_time
def easy_edit(m1: Presentation, m2: Presentation, b: PresentationBijection) -> EditRecord:
    """
    Edit between m1 and m2 of distortion at most cost(b).

    P is the smallest grid on m1's grades; Q adds m1's grades shifted up by
    eps and m2's grades. beta(p) = p + eps and alpha sends q to the unique
    point of P within eps. The edit runs from m2 (indexed by Q) to m1
    (indexed by P) with f = alpha and g = beta.

    Args:
        m1: Source presentation of the bijection
        m2: Target presentation of the bijection
        b: Bijection whose relation correspondence covers both relation sets

    Returns:
        EditRecord with src = m2, dst = m1

    Raises:
        BijectionError: invalid bijection
        EasyEditHypothesisError: cost >= injectivity radius of m1's grades
    """
    validate_bijection(b, m1, m2, require_surjective=True)
    eps = bijection_cost(b, m1, m2)
    grades1 = m1.all_grades()
    radius = injectivity_radius(grades1)
    if not eps < radius:
        raise EasyEditHypothesisError(
            f"cost {format_rational(eps)} is not below the injectivity radius {format_rational(radius)}"
        )
    if not grades1:
        return identity_edit(m1)

    P = smallest_grid(grades1)
    Q = smallest_grid([shift(x, eps) for x in grades1] + m2.all_grades())
    beta = MonotoneMap.from_axis_maps(P, Q, [{u: u + eps for u in axis} for axis in P.axes])
    alpha = MonotoneMap.from_axis_maps(
        Q, P, [{v: _unique_partner(P.axes[i], v, eps) for v in axis} for i, axis in enumerate(Q.axes)]
    )

    back = {target: source for source, target in b.gen_map}
    witness: Dict[Point, np.ndarray] = {}
    for p in P.points:
        target_fiber = evaluate(m1, p)
        source_fiber = evaluate(m2, shift(p, eps))
        columns = [class_vector(target_fiber, back[h]) for h in source_fiber.basis]
        if columns:
            witness[p] = np.column_stack(columns).astype(np.int64)
        else:
            witness[p] = m1.field.zeros(target_fiber.dimension, 0)
    log_event("CONSTRUCT", f"easy edit of cost {format_rational(eps)} below radius {format_rational(radius)}")
    return EditRecord(src=m2, dst=m1, P=Q, Q=P, f=alpha, g=beta, witness=witness, category="1D")


def easy_edit_claims(e: EditRecord, eps) -> ValidationReport:
    """
    Independent checks on an easy_edit output.

    C1: every point of the larger grid has exactly one partner within eps.
    C2: alpha is left adjoint to beta.
    C3: dimensions agree along beta and the witness is natural.
    """
    eps = to_rational(eps)
    report = ValidationReport("claims")
    alpha, beta = e.f, e.g
    c1_detail = ""
    for q in e.P.points:
        near = [p for p in e.Q.points if linf(p, q) <= eps]
        if len(near) != 1 or near[0] != alpha(q):
            c1_detail = f"{describe(q)} has {len(near)} partners"
            break
    report.add("C1", not c1_detail, c1_detail)
    report.add("C2", check_galois(alpha, beta))
    c3_detail = ""
    for p in e.Q.points:
        if dim_at(e.dst, p) != dim_at(e.src, beta(p)):
            c3_detail = f"dimensions differ at {describe(p)}"
            break
    if not c3_detail:
        failure = naturality_failure(
            ModuleOverPoset.from_presentation(e.src, e.Q, reindex=beta),
            ModuleOverPoset.from_presentation(e.dst, e.Q),
            e.witness
        )
        c3_detail = failure or ""
    report.add("C3", not c3_detail, c3_detail)
    return report


# --------------------------------------------------------------------------------------
# Interleaving presentation pairs
# --------------------------------------------------------------------------------------

def _split_ref(ref: str) -> Tuple[str, str]:
    tag, _, gid = ref.partition(".")
    if tag not in TAGS or not gid:
        raise PresentationError(f"Generator reference {ref!r} must carry a w1. or w2. tag")
    return tag, gid


@dataclass(frozen=True)
class InterleavingPresentationPair:
    """
    Graded sets W1, W2 and relation sets Y1, Y2 presenting an eps-interleaved pair.

    M = <W1, W2(-eps) | Y1, Y2(-eps)> and N = <W1(-eps), W2 | Y1(-eps), Y2>.
    Y terms reference generators as "w1.<id>" or "w2.<id>".
    """

    eps: Fraction
    dimension: int
    field: PrimeField
    W1: GradedSet
    W2: GradedSet
    Y1: Tuple[HomogeneousElement, ...]
    Y2: Tuple[HomogeneousElement, ...]

    def __post_init__(self):
        object.__setattr__(self, "eps", to_rational(self.eps))
        object.__setattr__(self, "Y1", tuple(sorted(self.Y1)))
        object.__setattr__(self, "Y2", tuple(sorted(self.Y2)))
        if self.eps < 0:
            raise ScheduleError("Interleaving pairs need eps >= 0")
        grades = {"w1": self.W1.grade_of, "w2": self.W2.grade_of}
        for block, own in (("y1", "w1"), ("y2", "w2")):
            for element in getattr(self, block.upper()):
                if len(element.grade) != self.dimension:
                    raise PresentationError(f"{block} element at {describe(element.grade)} is outside dimension {self.dimension}")
                for ref, _ in element.terms:
                    tag, gid = _split_ref(ref)
                    if gid not in grades[tag]:
                        raise PresentationError(f"{block} element references unknown generator {ref}")
                    lift = 0 if tag == own else self.eps
                    if not leq(shift(grades[tag][gid], lift), element.grade):
                        raise PresentationError(
                            f"Grade condition violated: {ref} is not below {block} element at {describe(element.grade)}"
                        )
        for g in list(self.W1) + list(self.W2):
            if len(g.grade) != self.dimension:
                raise PresentationError(f"Generator {g.id} is outside dimension {self.dimension}")

    @classmethod
    def build(
        cls,
        eps,
        dimension: int,
        p: int,
        W1: Iterable[Tuple[str, Iterable]],
        W2: Iterable[Tuple[str, Iterable]],
        Y1: Iterable[Tuple[Iterable, Dict[str, int]]] = (),
        Y2: Iterable[Tuple[Iterable, Dict[str, int]]] = ()
    ) -> "InterleavingPresentationPair":
        field = PrimeField(p)
        return cls(
            eps=to_rational(eps),
            dimension=dimension,
            field=field,
            W1=GradedSet.build(W1),
            W2=GradedSet.build(W2),
            Y1=tuple(HomogeneousElement.build(g, t, field.p) for g, t in Y1),
            Y2=tuple(HomogeneousElement.build(g, t, field.p) for g, t in Y2)
        )


def _family_parts(pair: InterleavingPresentationPair, t: Fraction):
    t = to_rational(t)
    if not 0 <= t <= pair.eps:
        raise ScheduleError(f"t = {format_rational(t)} is outside [0, {format_rational(pair.eps)}]")
    up1, up2 = t, pair.eps - t
    generators = [(f"w1.{g.id}", shift(g.grade, up1)) for g in pair.W1]
    generators += [(f"w2.{g.id}", shift(g.grade, up2)) for g in pair.W2]
    relations = [HomogeneousElement(grade=shift(y.grade, up1), terms=y.terms) for y in pair.Y1]
    relations += [HomogeneousElement(grade=shift(y.grade, up2), terms=y.terms) for y in pair.Y2]
    return generators, relations


def family_at(pair: InterleavingPresentationPair, t) -> Presentation:
    """
    F_t = <W1(-t), W2(-eps+t) | Y1(-t), Y2(-eps+t)>; F_0 is M and F_eps is N.

    Raises:
        ScheduleError: t outside [0, eps]
    """
    generators, relations = _family_parts(pair, t)
    return Presentation(
        dimension=pair.dimension,
        field=pair.field,
        generators=GradedSet.build(generators),
        relations=tuple(relations)
    )


def _canonical_positions(relations: List[HomogeneousElement]) -> List[int]:
    """Position of each listed relation in the presentation's sorted relation order."""
    order = sorted(range(len(relations)), key=lambda k: relations[k])
    positions = [0] * len(relations)
    for position, k in enumerate(order):
        positions[k] = position
    return positions


def translation_bijection(pair: InterleavingPresentationPair, a, b) -> PresentationBijection:
    """Bijection F_a -> F_b matching every generator and relation with its own translate; cost |a - b|."""
    gens_a, rels_a = _family_parts(pair, a)
    _, rels_b = _family_parts(pair, b)
    pos_a = _canonical_positions(rels_a)
    pos_b = _canonical_positions(rels_b)
    return PresentationBijection.build(
        {gid: gid for gid, _ in gens_a},
        [(pos_a[k], pos_b[k]) for k in range(len(rels_a))]
    )


def radius_at(pair: InterleavingPresentationPair, t) -> ExtRational:
    """Injectivity radius of all generator and relation grades of F_t."""
    generators, relations = _family_parts(pair, t)
    return injectivity_radius([grade for _, grade in generators] + [r.grade for r in relations])


def breakpoints(pair: InterleavingPresentationPair) -> List[Fraction]:
    """
    Times in (0, eps) where a W1/Y1 coordinate meets a W2/Y2 coordinate.

    Along the family W1/Y1 grades move up at unit speed and W2/Y2 grades move
    down, so each cross difference vanishes at most once.
    """
    eps = pair.eps
    rising = [g.grade for g in pair.W1] + [y.grade for y in pair.Y1]
    falling = [g.grade for g in pair.W2] + [y.grade for y in pair.Y2]
    times = set()
    for x in rising:
        for z in falling:
            for xi, zi in zip(x, z):
                t = (zi + eps - xi) / 2
                if 0 < t < eps:
                    times.add(t)
    return sorted(times)


@dataclass(frozen=True)
class Schedule:
    """Times 0 = t_0 < ... < t_k = eps and, per step, "forward" (from t_{i-1}) or "backward" (from t_i)."""

    times: Tuple[Fraction, ...]
    directions: Tuple[str, ...]

    def steps(self) -> List[Tuple[Fraction, Fraction, str]]:
        return [(a, b, d) for a, b, d in zip(self.times, self.times[1:], self.directions)]


MAX_SCHEDULE_STEPS = 100000


@measure_time
def schedule(pair: InterleavingPresentationPair) -> Schedule:
    """
    Cover [0, eps] by steps that each satisfy the easy-edit hypothesis.

    Mandatory times are 0, eps and the breakpoints. Each gap [a, b] becomes one
    step when b - a < r(a) (forward) or b - a < r(b) (backward), and is
    bisected otherwise.

    Raises:
        ScheduleError: eps <= 0, or the radius degenerates
    """
    eps = pair.eps
    if eps <= 0:
        raise ScheduleError("schedule needs eps > 0")
    mandatory = [Fraction(0)] + breakpoints(pair) + [eps]
    radius_cache: Dict[Fraction, ExtRational] = {}

    def r(t: Fraction) -> ExtRational:
        if t not in radius_cache:
            radius_cache[t] = radius_at(pair, t)
        return radius_cache[t]

    steps: List[Tuple[Fraction, Fraction, str]] = []
    pending = [(a, b) for a, b in zip(mandatory, mandatory[1:])]
    pending.reverse()
    while pending:
        a, b = pending.pop()
        if b - a < r(a):
            steps.append((a, b, "forward"))
        elif b - a < r(b):
            steps.append((a, b, "backward"))
        else:
            mid = (a + b) / 2
            pending.append((mid, b))
            pending.append((a, mid))
        if len(steps) + len(pending) > MAX_SCHEDULE_STEPS:
            raise ScheduleError("injectivity radius degenerates along the family (corrupt pair)")
    times = (steps[0][0],) + tuple(b for _, b, _ in steps)
    log_event("CONSTRUCT", f"schedule with {len(steps)} steps and {len(mandatory) - 2} breakpoints")
    return Schedule(times=times, directions=tuple(d for _, _, d in steps))


def schedule_violations(pair: InterleavingPresentationPair, sched: Schedule) -> List[str]:
    """Steps whose size is not below the radius at their source time, plus coverage errors."""
    problems = []
    if not sched.times or sched.times[0] != 0 or sched.times[-1] != pair.eps:
        problems.append("times do not run from 0 to eps")
    for a, b, direction in sched.steps():
        source = a if direction == "forward" else b
        if not (0 < b - a < radius_at(pair, source)):
            problems.append(f"step [{format_rational(a)}, {format_rational(b)}] violates the radius bound")
    return problems


@measure_time
def interleaving_to_path(pair: InterleavingPresentationPair) -> EditPath:
    """
    Certified edit path from F_0 to F_eps.

    Forward steps apply easy_edit to (F_a, F_b), producing an edit F_b -> F_a
    ("rev" in the path); backward steps apply it to (F_b, F_a), producing
    F_a -> F_b ("fwd").

    Returns:
        EditPath whose cost is exactly eps (the one-node path when eps = 0)
    """
    if pair.eps == 0:
        return EditPath(nodes=[family_at(pair, 0)], steps=[])
    sched = schedule(pair)
    nodes = [family_at(pair, t) for t in sched.times]
    steps: List[Tuple[EditRecord, str]] = []
    for k, (a, b, direction) in enumerate(sched.steps(), start=1):
        bijection = translation_bijection(pair, a, b)
        if direction == "forward":
            steps.append((easy_edit(nodes[k - 1], nodes[k], bijection), "rev"))
        else:
            steps.append((easy_edit(nodes[k], nodes[k - 1], bijection.inverse()), "fwd"))
    return EditPath(nodes=nodes, steps=steps)


def _endpoint_check(report: ValidationReport, name: str, built: Presentation, given: Presentation) -> None:
    if built.dimension != given.dimension or built.field != given.field:
        report.add(name, False, "field or dimension differs")
        return
    grids = [g for g in (support_grid(built), support_grid(given)) if g is not EMPTY_SUPPORT]
    if not grids:
        report.add(name, True, "both modules are zero")
        return
    grid = grids[0]
    for other in grids[1:]:
        grid = grid.refine(other)
    result = find_natural_iso(
        ModuleOverPoset.from_presentation(built, grid),
        ModuleOverPoset.from_presentation(given, grid)
    )
    if isinstance(result, NotFound):
        report.add(name, False, result.reason)
    else:
        report.add(name, True)


def lesnick_pair_check(pair: InterleavingPresentationPair, m: Presentation, n: Presentation) -> ValidationReport:
    """Check that the pair's endpoints F_0 and F_eps are isomorphic to m and n."""
    report = ValidationReport("pair")
    _endpoint_check(report, "M-endpoint", family_at(pair, 0), m)
    _endpoint_check(report, "N-endpoint", family_at(pair, pair.eps), n)
    return report


# --------------------------------------------------------------------------------------
# d = 1 encoding
# --------------------------------------------------------------------------------------

def encode_barcode_pair(
    b1: Barcode,
    b2: Barcode,
    eps,
    matching: Optional[List[Tuple[int, int]]] = None,
    p: int = 2
) -> InterleavingPresentationPair:
    """
    Encode two barcodes as an eps-interleaving presentation pair.

    A matched bar pair shares one generator when the births differ by exactly
    eps (two generators glued by relations otherwise); deaths are imposed by a
    y1 relation at the M death and a y2 relation at the N death. Unmatched
    bars get one generator on their own side and a second relation that kills
    them immediately on the other side.

    Args:
        b1: Barcode of M
        b2: Barcode of N
        eps: Interleaving parameter, at least the bottleneck distance
        matching: Bar index pairs; defaults to an optimal matching
        p: Field characteristic

    Raises:
        ValueError: when a matched pair or unmatched bar is too far for eps
    """
    eps = to_rational(eps)
    if matching is None:
        matching = optimal_matching(b1, b2)
        if matching is None:
            raise ValueError("Barcodes are at infinite bottleneck distance")
    minus_one = p - 1
    W1: List[Tuple[str, List]] = []
    W2: List[Tuple[str, List]] = []
    Y1: List[Tuple[List, Dict[str, int]]] = []
    Y2: List[Tuple[List, Dict[str, int]]] = []
    used1 = {i for i, _ in matching}
    used2 = {j for _, j in matching}

    for k, (i, j) in enumerate(sorted(matching)):
        (b, d), (b_, d_) = b1.bars[i], b2.bars[j]
        if bar_distance((b, d), (b_, d_)) > eps:
            raise ValueError(f"Matched bars {i} and {j} are farther apart than eps")
        if b_ - b == eps:
            ref_m = ref_n = f"w1.u{k}"
            W1.append((f"u{k}", [b]))
        elif b - b_ == eps:
            ref_m = ref_n = f"w2.v{k}"
            W2.append((f"v{k}", [b_]))
        else:
            ref_m, ref_n = f"w1.u{k}", f"w2.v{k}"
            W1.append((f"u{k}", [b]))
            W2.append((f"v{k}", [b_]))
            glue = {ref_m: 1, ref_n: minus_one}
            Y1.append(([max(b, b_ + eps)], glue))
            Y2.append(([max(b + eps, b_)], glue))
        if d != INFINITY:
            Y1.append(([d], {ref_m: 1}))
            Y2.append(([d_], {ref_n: 1}))

    for i, (b, d) in enumerate(b1.bars):
        if i in used1:
            continue
        if half_length((b, d)) > eps:
            raise ValueError(f"Unmatched bar {i} of the first barcode is longer than 2 eps")
        W1.append((f"a{i}", [b]))
        Y1.append(([d], {f"w1.a{i}": 1}))
        Y2.append(([b + eps], {f"w1.a{i}": 1}))

    for j, (b, d) in enumerate(b2.bars):
        if j in used2:
            continue
        if half_length((b, d)) > eps:
            raise ValueError(f"Unmatched bar {j} of the second barcode is longer than 2 eps")
        W2.append((f"c{j}", [b]))
        Y2.append(([d], {f"w2.c{j}": 1}))
        Y1.append(([b + eps], {f"w2.c{j}": 1}))

    return InterleavingPresentationPair.build(eps, 1, p, W1, W2, Y1, Y2)
