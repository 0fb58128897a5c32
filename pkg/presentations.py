"""
Finite Presentations of d-Graded Modules

A presentation <G|R> lists graded generators and homogeneous relations over a
prime field. This module evaluates presentations pointwise (the vector space
M_p and its deterministic basis), computes structure maps M_p -> M_q,
translations, support grids, and presentation bijections with their cost.

Basis rule: generators are ordered by (grade lexicographic, id); at each point
the generators that are not pivots of the reduced relation matrix form the
basis of M_p.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from exactlin import PrimeField
from order_core import (
    BOTTOM,
    EMPTY_SUPPORT,
    Grid,
    MaybePoint,
    Point,
    as_point,
    describe,
    leq,
    linf,
    shift,
    smallest_grid,
    to_rational
)
from pm_utils import log_event


class PresentationError(ValueError):
    """Raised for grade-condition violations, unknown or duplicate generator ids."""


class BijectionError(ValueError):
    """Raised when a presentation bijection is invalid; the message names the first violated condition."""


@dataclass(frozen=True, order=True)
class Generator:
    grade: Point
    id: str


@dataclass(frozen=True)
class GradedSet:
    """Finite set of generator ids with grades in Q^d, kept in (grade, id) order."""

    elements: Tuple[Generator, ...]

    def __post_init__(self):
        ordered = tuple(sorted(self.elements))
        ids = [g.id for g in ordered]
        if len(set(ids)) != len(ids):
            duplicates = sorted({i for i in ids if ids.count(i) > 1})
            raise PresentationError(f"Duplicate generator ids: {', '.join(duplicates)}")
        object.__setattr__(self, "elements", ordered)

    @classmethod
    def build(cls, items: Iterable[Tuple[str, Iterable]]) -> "GradedSet":
        return cls(tuple(Generator(grade=as_point(grade), id=str(gid)) for gid, grade in items))

    def __iter__(self) -> Iterator[Generator]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    @cached_property
    def ids(self) -> Tuple[str, ...]:
        return tuple(g.id for g in self.elements)

    @cached_property
    def grade_of(self) -> Dict[str, Point]:
        return {g.id: g.grade for g in self.elements}

    def grades(self) -> List[Point]:
        return [g.grade for g in self.elements]

    def shifted(self, eps) -> "GradedSet":
        """G(eps): every grade moved by -eps."""
        delta = -to_rational(eps)
        return GradedSet(tuple(Generator(grade=shift(g.grade, delta), id=g.id) for g in self.elements))


@dataclass(frozen=True, order=True)
class HomogeneousElement:
    """
    A homogeneous element of the free module: sum of c_g * x^(grade - gr(g)) * g.

    terms holds (generator id, nonzero coefficient) pairs sorted by id.
    """

    grade: Point
    terms: Tuple[Tuple[str, int], ...]

    @classmethod
    def build(cls, grade: Iterable, terms: Union[Mapping[str, int], Iterable[Tuple[str, int]]], p: int) -> "HomogeneousElement":
        """
        Build an element, merging repeated ids and dropping zero coefficients mod p.

        Args:
            grade: Element grade
            terms: Generator id -> coefficient (mapping or pairs)
            p: Field characteristic
        """
        items = terms.items() if isinstance(terms, Mapping) else terms
        merged: Dict[str, int] = {}
        for gid, coeff in items:
            merged[str(gid)] = (merged.get(str(gid), 0) + int(coeff)) % p
        return cls(grade=as_point(grade), terms=tuple(sorted((k, v) for k, v in merged.items() if v)))

    @property
    def coefficients(self) -> Dict[str, int]:
        return dict(self.terms)

    def shifted(self, eps) -> "HomogeneousElement":
        return HomogeneousElement(grade=shift(self.grade, -to_rational(eps)), terms=self.terms)

    def renamed(self, gen_map: Mapping[str, str]) -> "HomogeneousElement":
        return HomogeneousElement(grade=self.grade, terms=tuple(sorted((gen_map[k], v) for k, v in self.terms)))


@dataclass(frozen=True)
class Presentation:
    """
    <G|R> over F_p in dimension d.

    Relations are sorted canonically at construction, so equal modules written
    in different orders compare equal and relation indices are stable.
    """

    dimension: int
    field: PrimeField
    generators: GradedSet
    relations: Tuple[HomogeneousElement, ...]

    def __post_init__(self):
        if self.dimension < 1:
            raise PresentationError(f"Dimension must be at least 1, got {self.dimension}")
        grades = self.generators.grade_of
        for g in self.generators:
            if len(g.grade) != self.dimension:
                raise PresentationError(f"Generator {g.id} has grade {describe(g.grade)} outside dimension {self.dimension}")
        for r in self.relations:
            if len(r.grade) != self.dimension:
                raise PresentationError(f"Relation at {describe(r.grade)} is outside dimension {self.dimension}")
            for gid, coeff in r.terms:
                if gid not in grades:
                    raise PresentationError(f"Relation at {describe(r.grade)} references unknown generator {gid}")
                if not 0 < coeff < self.field.p:
                    raise PresentationError(f"Relation at {describe(r.grade)} has unreduced coefficient {coeff} for {gid}")
                if not leq(grades[gid], r.grade):
                    raise PresentationError(
                        f"Grade condition violated: generator {gid} at {describe(grades[gid])} "
                        f"is not below relation grade {describe(r.grade)}"
                    )
        object.__setattr__(self, "relations", tuple(sorted(self.relations)))

    @classmethod
    def build(
        cls,
        dimension: int,
        p: Union[int, PrimeField],
        generators: Iterable[Tuple[str, Iterable]],
        relations: Iterable[Tuple[Iterable, Mapping[str, int]]] = ()
    ) -> "Presentation":
        """
        Convenience constructor from plain data.

        Args:
            dimension: Ambient dimension d
            p: Prime or PrimeField
            generators: (id, grade) pairs
            relations: (grade, {id: coeff}) pairs
        """
        field = p if isinstance(p, PrimeField) else PrimeField(p)
        return cls(
            dimension=dimension,
            field=field,
            generators=GradedSet.build(generators),
            relations=tuple(HomogeneousElement.build(grade, terms, field.p) for grade, terms in relations)
        )

    def __repr__(self) -> str:
        gens = ", ".join(f"{g.id}@{describe(g.grade)}" for g in self.generators)
        rels = ", ".join(
            f"{describe(r.grade)}=" + "+".join(f"{c}*{k}" for k, c in r.terms) for r in self.relations
        )
        return f"<{gens} | {rels}> over F_{self.field.p}"

    @property
    def p(self) -> int:
        return self.field.p

    def all_grades(self) -> List[Point]:
        """Grades of G union R, the set whose injectivity radius gates easy edits."""
        return self.generators.grades() + [r.grade for r in self.relations]

    def is_empty(self) -> bool:
        return len(self.generators) == 0


def free_module(n: int, d: int, p: int = 2) -> Presentation:
    """F_d^n: n generators at the origin, no relations."""
    return Presentation.build(d, p, [(f"g{i}", [0] * d) for i in range(n)])


def translate(m: Presentation, eps) -> Presentation:
    """
    M(eps): shift every generator and relation grade by -eps.

    Args:
        m: Presentation
        eps: Rational shift

    Returns:
        The translated presentation with unchanged coefficients
    """
    return Presentation(
        dimension=m.dimension,
        field=m.field,
        generators=m.generators.shifted(eps),
        relations=tuple(r.shifted(eps) for r in m.relations)
    )


# --------------------------------------------------------------------------------------
# Evaluation
# --------------------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Fiber:
    """
    The vector space M_p of a presentation.

    active lists G^p in canonical order; basis is the non-pivot part of
    active; class_matrix has one column per active generator holding the
    coordinates of its class in the basis.
    """

    active: Tuple[str, ...]
    basis: Tuple[str, ...]
    rel_matrix: np.ndarray
    class_matrix: np.ndarray

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @cached_property
    def index(self) -> Dict[str, int]:
        return {gid: j for j, gid in enumerate(self.active)}

    def __iter__(self):
        # (dimension, basis, rel_matrix) unpacking
        return iter((self.dimension, self.basis, self.rel_matrix))


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@lru_cache(maxsize=16384)
def _fiber_from_masks(m: Presentation, gen_mask: Tuple[bool, ...], rel_mask: Tuple[bool, ...]) -> Fiber:
    field = m.field
    active = tuple(g.id for g, on in zip(m.generators, gen_mask) if on)
    index = {gid: j for j, gid in enumerate(active)}
    relations = [r for r, on in zip(m.relations, rel_mask) if on]
    rel_matrix = field.zeros(len(active), len(relations))
    for k, r in enumerate(relations):
        for gid, coeff in r.terms:
            rel_matrix[index[gid], k] = coeff
    reduced, pivots = field.rref(rel_matrix.T)
    pivot_set = set(pivots)
    free = [j for j in range(len(active)) if j not in pivot_set]
    class_matrix = field.zeros(len(free), len(active))
    for row, j in enumerate(free):
        class_matrix[row, j] = 1
    for row, j in enumerate(pivots):
        class_matrix[:, j] = (-reduced[row, free]) % field.p
    return Fiber(
        active=active,
        basis=tuple(active[j] for j in free),
        rel_matrix=_frozen(rel_matrix),
        class_matrix=_frozen(class_matrix)
    )


def evaluate(m: Presentation, p: MaybePoint) -> Fiber:
    """
    Evaluate M at a point: M_p = <G^p | R^p> as an F_p-vector space.

    Args:
        m: Presentation
        p: Point of Q^d, or BOTTOM (the zero space)

    Returns:
        Fiber carrying dimension, basis ids and the |G^p| x |R^p| relation matrix
    """
    if p is BOTTOM:
        return _fiber_from_masks(m, tuple(False for _ in m.generators), tuple(False for _ in m.relations))
    if len(p) != m.dimension:
        raise PresentationError(f"Point {describe(p)} does not match dimension {m.dimension}")
    gen_mask = tuple(leq(g.grade, p) for g in m.generators)
    rel_mask = tuple(leq(r.grade, p) for r in m.relations)
    return _fiber_from_masks(m, gen_mask, rel_mask)


def dim_at(m: Presentation, p: MaybePoint) -> int:
    return evaluate(m, p).dimension


def class_vector(fiber: Fiber, gen_id: str) -> np.ndarray:
    """Coordinates of the class of an active generator in the fiber basis."""
    if gen_id not in fiber.index:
        raise PresentationError(f"Generator {gen_id} is not active at this point")
    return fiber.class_matrix[:, fiber.index[gen_id]]


def structure_map(m: Presentation, p: MaybePoint, q: MaybePoint) -> np.ndarray:
    """
    Matrix of M_{p <= q}, sending the class of g to the class of g.

    Args:
        m: Presentation
        p: Source point (or BOTTOM)
        q: Target point with p <= q

    Returns:
        dim M_q x dim M_p matrix in the deterministic bases
    """
    if not leq(p, q):
        raise PresentationError(f"structure_map needs p <= q, got {describe(p)} and {describe(q)}")
    source = evaluate(m, p)
    target = evaluate(m, q)
    columns = [target.index[gid] for gid in source.basis]
    return target.class_matrix[:, columns]


def support_grid(m: Presentation):
    """
    Smallest grid containing supp(G union R), or EMPTY_SUPPORT for <0|0>.
    """
    grades = m.all_grades()
    if not grades:
        return EMPTY_SUPPORT
    return smallest_grid(grades)


def dimension_vector(m: Presentation, points: Iterable[Point]) -> Dict[Point, int]:
    return {x: dim_at(m, x) for x in points}


# --------------------------------------------------------------------------------------
# Presentation bijections
# --------------------------------------------------------------------------------------

@dataclass(frozen=True)
class PresentationBijection:
    """
    A generator bijection plus a relation correspondence S in R1 x R2.

    Relation indices refer to the canonical relation order of each presentation.
    """

    gen_map: Tuple[Tuple[str, str], ...]
    rel_corr: FrozenSet[Tuple[int, int]]

    @classmethod
    def build(cls, gen_map: Mapping[str, str], rel_corr: Iterable[Tuple[int, int]]) -> "PresentationBijection":
        return cls(
            gen_map=tuple(sorted((str(k), str(v)) for k, v in gen_map.items())),
            rel_corr=frozenset((int(i), int(j)) for i, j in rel_corr)
        )

    @classmethod
    def identity(cls, m: Presentation) -> "PresentationBijection":
        return cls.build({gid: gid for gid in m.generators.ids}, [(i, i) for i in range(len(m.relations))])

    @cached_property
    def mapping(self) -> Dict[str, str]:
        return dict(self.gen_map)

    def inverse(self) -> "PresentationBijection":
        return PresentationBijection.build({v: k for k, v in self.gen_map}, [(j, i) for i, j in self.rel_corr])


def check_essentially_same(r1: HomogeneousElement, r2: HomogeneousElement, gen_map: Mapping[str, str]) -> bool:
    """
    True iff renaming r1's generators through gen_map yields r2's coefficients.

    Grades are ignored: this compares the images of both elements once every
    monomial is sent to 1.
    """
    renamed: Dict[str, int] = {}
    for gid, coeff in r1.terms:
        if gid not in gen_map:
            return False
        renamed[gen_map[gid]] = coeff
    return renamed == r2.coefficients


def validate_bijection(
    b: PresentationBijection,
    m1: Presentation,
    m2: Presentation,
    require_surjective: bool = False
) -> None:
    """
    Check a bijection against its presentations.

    Raises:
        BijectionError: naming the first violated condition
    """
    if m1.field != m2.field:
        raise BijectionError(f"Field mismatch: F_{m1.p} vs F_{m2.p}")
    if m1.dimension != m2.dimension:
        raise BijectionError(f"Dimension mismatch: {m1.dimension} vs {m2.dimension}")
    mapping = b.mapping
    ids1 = set(m1.generators.ids)
    ids2 = set(m2.generators.ids)
    if set(mapping) != ids1:
        missing = sorted(ids1 - set(mapping)) or sorted(set(mapping) - ids1)
        raise BijectionError(f"Generator map is not total on the source generators (first offending id {missing[0]})")
    images = list(mapping.values())
    if len(set(images)) != len(images):
        raise BijectionError("Generator map is not injective")
    if set(images) != ids2:
        missing = sorted(ids2 - set(images)) or sorted(set(images) - ids2)
        raise BijectionError(f"Generator map is not onto the target generators (first offending id {missing[0]})")
    n1, n2 = len(m1.relations), len(m2.relations)
    for i, j in sorted(b.rel_corr):
        if not (0 <= i < n1 and 0 <= j < n2):
            raise BijectionError(f"Relation pair ({i}, {j}) is out of range")
        if not check_essentially_same(m1.relations[i], m2.relations[j], mapping):
            raise BijectionError(f"Relations {i} and {j} are not essentially the same under the generator map")
    if require_surjective:
        left = {i for i, _ in b.rel_corr}
        right = {j for _, j in b.rel_corr}
        for i in range(n1):
            if i not in left:
                raise BijectionError(f"Source relation {i} has no partner")
        for j in range(n2):
            if j not in right:
                raise BijectionError(f"Target relation {j} has no partner")


def bijection_cost(b: PresentationBijection, m1: Presentation, m2: Presentation) -> Fraction:
    """
    Cost of (f, S): the largest grade displacement over generators and paired relations.

    Args:
        b: The bijection
        m1: Source presentation
        m2: Target presentation

    Returns:
        Exact rational cost (0 when both presentations are empty)
    """
    validate_bijection(b, m1, m2)
    grade1 = m1.generators.grade_of
    grade2 = m2.generators.grade_of
    cost = Fraction(0)
    for src, dst in b.gen_map:
        cost = max(cost, linf(grade1[src], grade2[dst]))
    for i, j in b.rel_corr:
        cost = max(cost, linf(m1.relations[i].grade, m2.relations[j].grade))
    log_event("PRESENT", f"bijection cost {cost}")
    return cost
