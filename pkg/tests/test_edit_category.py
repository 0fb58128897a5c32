from fractions import Fraction

import pytest

from barcodes import barcode_1d, bottleneck
from conftest import interval
from edit_category import (
    EditPath,
    EditRecord,
    InvalidEditError,
    InvalidPathError,
    ModuleOverPoset,
    NotFound,
    ValidationReport,
    check_constructible,
    collapse_edit,
    component,
    edit_stability_report,
    find_natural_iso,
    identity_edit,
    naturality_failure,
    path_cost,
    validate_edit,
    validate_path
)
from order_core import Grid, MonotoneMap
from presentations import Presentation, free_module


def chain(*values) -> Grid:
    return Grid((tuple(values),))


def test_report_lines():
    report = ValidationReport("edit")
    report.add("galois", True)
    report.add("naturality", False, "square 0 -> 1 does not commute")
    assert not report.passed
    assert report.failed_checks() == ["naturality"]
    assert report.lines() == [
        "check galois: PASS",
        "check naturality: FAIL (square 0 -> 1 does not commute)",
        "edit: FAIL"
    ]
    assert len(report.get_operation_log()) == 2


def test_not_found_is_falsy():
    assert not NotFound("nothing", provably_none=True)


@pytest.mark.parametrize("module, expected", [
    (interval(0), 1),
    (interval(0, 2), 0),
    (Presentation.build(1, 2, [("a", [0]), ("b", [1])], [([2], {"a": 1, "b": 1})]), 1),
    (free_module(1, 2), 1),
    (free_module(2, 3), 2),
    (free_module(3, 2), 3),
    (Presentation.build(2, 2, []), 0),
])
def test_component(module, expected):
    assert component(module) == expected


def test_check_constructible(interval_module):
    assert check_constructible(interval_module, chain(0, 2)) is None
    assert check_constructible(interval_module, chain(0, 1, 2, 5)) is None
    assert "not an isomorphism" in check_constructible(interval_module, chain(0))
    assert "below the indexing poset" in check_constructible(interval_module, chain(1, 2))


def test_identity_edit_passes(square_module):
    edit = identity_edit(square_module)
    report = validate_edit(edit)
    assert report.passed, report.lines()
    assert edit.cost == 0


def test_collapse_edit_costs_shift():
    m = interval(1)
    edit = collapse_edit(m)
    assert validate_edit(edit).passed
    assert edit.cost == 1
    assert edit.dst == free_module(1, 1)


def test_collapse_of_finite_bar_is_zero_module(interval_module):
    edit = collapse_edit(interval_module)
    assert validate_edit(edit).passed
    assert edit.dst.is_empty()


def test_singular_witness_fails_invertibility():
    edit = collapse_edit(interval(1))
    zero = next(iter(edit.witness))
    edit.witness = {zero: edit.src.field.zeros(1, 1)}
    report = validate_edit(edit)
    assert report.failed_checks() == ["invertible"]


def test_wrong_adjoint_fails_galois():
    m = interval(0)
    P, Q = chain(0, 1), chain(0)
    f = MonotoneMap.from_axis_maps(P, Q, [{0: 0, 1: 0}])
    not_adjoint = MonotoneMap.from_axis_maps(Q, P, [{0: 0}])
    edit = EditRecord(src=m, dst=m, P=P, Q=Q, f=f, g=not_adjoint, witness={(Fraction(0),): m.field.identity(1)})
    report = validate_edit(edit)
    assert "galois" in report.failed_checks()


def test_unknown_category():
    m = interval(0)
    grid = chain(0)
    ident = MonotoneMap.identity(grid)
    with pytest.raises(InvalidEditError):
        EditRecord(src=m, dst=m, P=grid, Q=grid, f=ident, g=ident, witness={}, category="2D")


def test_find_natural_iso_between_presentations_of_one_module():
    grid = chain(0, 1, 2)
    first = Presentation.build(1, 2, [("a", [0]), ("b", [1])], [([2], {"a": 1, "b": 1})])
    second = Presentation.build(1, 2, [("a", [0]), ("b", [1])], [([2], {"b": 1})])
    a = ModuleOverPoset.from_presentation(first, grid)
    b = ModuleOverPoset.from_presentation(second, grid)
    found = find_natural_iso(a, b, seed=7)
    assert isinstance(found, dict)
    assert naturality_failure(a, b, found) is None


def test_find_natural_iso_disproves_isomorphism():
    grid = chain(0, 1)
    free = ModuleOverPoset.from_presentation(interval(0), grid)
    dying = Presentation.build(1, 2, [("a", [0]), ("b", [1])], [([1], {"a": 1})])
    result = find_natural_iso(free, ModuleOverPoset.from_presentation(dying, grid))
    assert isinstance(result, NotFound)
    assert result.provably_none


def test_find_natural_iso_dimension_mismatch(interval_module):
    grid = chain(0, 2)
    result = find_natural_iso(
        ModuleOverPoset.from_presentation(interval(0), grid),
        ModuleOverPoset.from_presentation(interval_module, grid)
    )
    assert isinstance(result, NotFound)
    assert "dimension vectors differ" in result.reason


def test_paths_follow_directions():
    m = interval(1)
    edit = collapse_edit(m)
    forward = EditPath(nodes=[m, edit.dst], steps=[(edit, "fwd")])
    backward = EditPath(nodes=[edit.dst, m], steps=[(edit, "rev")])
    assert path_cost(forward) == 1
    assert path_cost(backward) == 1
    assert validate_path(backward).passed
    assert path_cost(EditPath(nodes=[m])) == 0
    with pytest.raises(InvalidPathError):
        path_cost(EditPath(nodes=[m, edit.dst], steps=[(edit, "rev")]))
    with pytest.raises(InvalidPathError):
        path_cost(EditPath(nodes=[m], steps=[(edit, "fwd")]))


def test_nodes_without_steps_are_malformed():
    m = interval(0)
    path = EditPath(nodes=[m, interval(0, 2)], steps=[])
    report = validate_path(path)
    assert report.failed_checks() == ["structure"]


def test_bottleneck_is_edit_stable():
    m = interval(1)
    edit = collapse_edit(m)
    path = EditPath(nodes=[m, edit.dst], steps=[(edit, "fwd")])
    report = edit_stability_report(path, lambda a, b: bottleneck(barcode_1d(a), barcode_1d(b)))
    assert report.passed, report.lines()
