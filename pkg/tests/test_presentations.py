from fractions import Fraction

import pytest

from conftest import interval, random_presentation
from order_core import BOTTOM, EMPTY_SUPPORT, Grid, as_point, leq
from presentations import (
    BijectionError,
    HomogeneousElement,
    Presentation,
    PresentationBijection,
    PresentationError,
    bijection_cost,
    check_essentially_same,
    class_vector,
    dim_at,
    dimension_vector,
    evaluate,
    free_module,
    structure_map,
    support_grid,
    translate,
    validate_bijection
)


def test_grade_condition_is_enforced():
    with pytest.raises(PresentationError, match="Grade condition"):
        Presentation.build(1, 2, [("g", [3])], [([2], {"g": 1})])


def test_unknown_and_duplicate_generators():
    with pytest.raises(PresentationError, match="unknown generator"):
        Presentation.build(1, 2, [("g", [0])], [([2], {"h": 1})])
    with pytest.raises(PresentationError, match="Duplicate"):
        Presentation.build(1, 2, [("g", [0]), ("g", [1])])


def test_coefficients_are_reduced():
    m = Presentation.build(1, 3, [("a", [0]), ("b", [0])], [([1], {"a": 4, "b": 3})])
    assert m.relations[0].terms == (("a", 1),)


def test_relations_are_canonically_ordered():
    gens = [("a", [0]), ("b", [0])]
    one = Presentation.build(1, 2, gens, [([3], {"a": 1}), ([1], {"b": 1})])
    two = Presentation.build(1, 2, list(reversed(gens)), [([1], {"b": 1}), ([3], {"a": 1})])
    assert one == two


def test_translate_examples(interval_module):
    assert translate(interval_module, 0) == interval_module
    assert translate(interval_module, Fraction(1, 2)) == interval("-1/2", "3/2")
    assert translate(translate(interval_module, "1/3"), "1/4") == translate(interval_module, Fraction(7, 12))


def test_evaluate_examples(square_module, two_bar_module):
    assert dim_at(square_module, as_point((0, 0))) == 1
    assert dim_at(square_module, as_point((1, 1))) == 0
    assert dim_at(square_module, as_point((5, 0))) == 1
    assert dim_at(two_bar_module, as_point((2,))) == 1
    assert dim_at(two_bar_module, BOTTOM) == 0
    assert evaluate(two_bar_module, as_point((2,))).basis == ("b",)


def test_class_vector(two_bar_module):
    fiber = evaluate(two_bar_module, as_point((2,)))
    assert class_vector(fiber, "a").tolist() == [1]
    assert class_vector(fiber, "b").tolist() == [1]
    with pytest.raises(PresentationError):
        class_vector(evaluate(two_bar_module, as_point((0,))), "b")


def test_structure_map_examples(interval_module):
    zero, one, two = as_point((0,)), as_point((1,)), as_point((2,))
    assert structure_map(interval_module, zero, zero).tolist() == [[1]]
    assert structure_map(interval_module, zero, one).tolist() == [[1]]
    assert structure_map(interval_module, zero, two).shape == (0, 1)
    assert structure_map(interval_module, BOTTOM, one).shape == (1, 0)
    with pytest.raises(PresentationError):
        structure_map(interval_module, two, zero)


def test_structure_maps_are_functorial(rng):
    for _ in range(500):
        d = int(rng.integers(1, 4))
        m = random_presentation(rng, d=d, p=int(rng.choice([2, 3, 5])), max_gens=6, max_rels=6)
        grid = support_grid(m)
        points = grid.points
        for _ in range(10):
            p, q, r = sorted(points[int(i)] for i in rng.integers(0, len(points), size=3))
            if not (leq(p, q) and leq(q, r)):
                continue
            direct = structure_map(m, p, r)
            composed = m.field.mul(structure_map(m, q, r), structure_map(m, p, q))
            assert m.field.equal(direct, composed)


def test_constructibility_at_midpoints(rng):
    for _ in range(500):
        m = random_presentation(rng, d=2, max_gens=6, max_rels=6)
        grid = support_grid(m)
        for _ in range(6):
            x = tuple(Fraction(int(rng.integers(-2, 10)), 2) for _ in range(2))
            below = grid.floor(x)
            assert dim_at(m, x) == dim_at(m, below)
            if below is not BOTTOM:
                assert m.field.is_invertible(structure_map(m, below, x))


def test_translation_equivariance(rng):
    eps = Fraction(1, 3)
    for _ in range(30):
        m = random_presentation(rng, d=2)
        shifted = translate(m, eps)
        for x in support_grid(m).points:
            moved = tuple(c - eps for c in x)
            assert dim_at(shifted, moved) == dim_at(m, x)


def test_support_grid_examples(square_module):
    square = Presentation.build(2, 2, [("g", [0, 0])], [([1, 2], {"g": 1})])
    assert support_grid(square) == Grid(((0, 1), (0, 2)))
    assert len(support_grid(free_module(1, 2))) == 1
    assert support_grid(Presentation.build(1, 2, [])) is EMPTY_SUPPORT
    assert dimension_vector(square_module, support_grid(square_module).points)[as_point((1, 1))] == 0


def test_free_module():
    m = free_module(3, 2, 5)
    assert m.generators.ids == ("g0", "g1", "g2")
    assert dim_at(m, as_point((0, 0))) == 3
    assert not m.relations


def test_identity_and_translation_bijection_costs(interval_module):
    ident = PresentationBijection.identity(interval_module)
    assert bijection_cost(ident, interval_module, interval_module) == 0
    eps = Fraction(3, 4)
    assert bijection_cost(ident, interval_module, translate(interval_module, eps)) == eps
    assert ident.inverse() == ident


def test_validate_bijection_names_first_failure(interval_module):
    other = interval(0, 2, gid="h")
    with pytest.raises(BijectionError, match="not onto"):
        validate_bijection(PresentationBijection.identity(interval_module), interval_module, other)
    unpaired = PresentationBijection.build({"g": "g"}, [])
    validate_bijection(unpaired, interval_module, interval_module)
    with pytest.raises(BijectionError, match="no partner"):
        validate_bijection(unpaired, interval_module, interval_module, require_surjective=True)
    with pytest.raises(BijectionError, match="out of range"):
        validate_bijection(PresentationBijection.build({"g": "g"}, [(0, 3)]), interval_module, interval_module)


def test_check_essentially_same():
    r = HomogeneousElement.build([2], {"a": 1, "b": 1}, 2)
    assert check_essentially_same(r, r.shifted(5), {"a": "a", "b": "b"})
    assert not check_essentially_same(r, HomogeneousElement.build([2], {"a": 1}, 2), {"a": "a", "b": "b"})
    two_a = HomogeneousElement.build([0], {"a": 2}, 3)
    two_x = HomogeneousElement.build([7], {"x": 2}, 3)
    assert check_essentially_same(two_a, two_x, {"a": "x"})
