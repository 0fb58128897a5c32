from fractions import Fraction

import pytest

from barcodes import Barcode, barcode_presentation, bottleneck
from conftest import interval
from constructions import InterleavingPresentationPair, family_at
from edit_category import NotFound, collapse_edit, identity_edit
from interleaving import (
    InterleavingSearch,
    InterleavingWitness,
    SearchBudgetError,
    interleave_from_edit,
    relax_witness,
    search_interleaving,
    swap_witness,
    verify_interleaving
)
from presentations import Presentation, free_module


def test_identity_edit_gives_zero_interleaving(square_module):
    w = interleave_from_edit(identity_edit(square_module))
    assert w.eps == 0
    assert w.p == 2 and w.dimension == 2
    assert verify_interleaving(square_module, square_module, w).passed


def test_collapse_edit_gives_interleaving_of_its_cost():
    m = interval(1)
    edit = collapse_edit(m)
    w = interleave_from_edit(edit)
    assert w.eps == 1
    report = verify_interleaving(m, edit.dst, w)
    assert report.passed, report.lines()
    assert verify_interleaving(edit.dst, m, swap_witness(w)).passed


def test_relax_witness():
    m = interval(1)
    edit = collapse_edit(m)
    w = interleave_from_edit(edit)
    relaxed = relax_witness(m, edit.dst, w, Fraction(5, 2))
    assert relaxed.eps == Fraction(5, 2)
    assert verify_interleaving(m, edit.dst, relaxed).passed
    with pytest.raises(ValueError):
        relax_witness(m, edit.dst, w, 0)


def test_witness_field_must_match():
    m = interval(1)
    edit = collapse_edit(m)
    w = interleave_from_edit(edit)
    w.p = 3
    report = verify_interleaving(m, edit.dst, w)
    assert report.failed_checks() == ["compatible"]


def test_missing_component_fails_shapes():
    m = interval(0, 4)
    w = InterleavingWitness(eps=Fraction(1), F={}, G={})
    report = verify_interleaving(m, m, w)
    assert report.failed_checks() == ["shapes"]


def test_zero_witness_fails_triangle():
    m = interval(0, 4)
    field = m.field
    zero = {(Fraction(0),): field.zeros(1, 1), (Fraction(4),): field.zeros(0, 0)}
    w = InterleavingWitness(eps=Fraction(1), F=dict(zero), G=dict(zero))
    report = verify_interleaving(m, m, w)
    assert "triangle-M" in report.failed_checks()
    assert "natural-F" not in report.failed_checks()


def test_search_finds_shifted_bar():
    first, second = interval(0, 4), interval(1, 4)
    found = search_interleaving(first, second, 1)
    assert isinstance(found, InterleavingWitness)
    assert verify_interleaving(first, second, found).passed
    missing = search_interleaving(first, second, Fraction(1, 2))
    assert isinstance(missing, NotFound)
    assert missing.provably_none


def test_search_against_zero_module(interval_module):
    zero = Presentation.build(1, 2, [])
    assert isinstance(search_interleaving(interval_module, zero, 1), InterleavingWitness)
    assert isinstance(search_interleaving(interval_module, zero, Fraction(1, 2)), NotFound)


def test_search_budget_and_compatibility():
    with pytest.raises(SearchBudgetError):
        search_interleaving(free_module(3, 1), free_module(3, 1), 0, budget=1)
    with pytest.raises(ValueError):
        InterleavingSearch(interval(0), interval(0, p=3), 0)
    with pytest.raises(ValueError):
        InterleavingSearch(interval(0), interval(0), -1)


def _tiny_enough(m, n, eps) -> bool:
    return InterleavingSearch(m, n, eps).total_dimension() <= 12


def test_search_agrees_with_bottleneck(rng):
    def random_barcode():
        bars = []
        for _ in range(int(rng.integers(0, 3))):
            birth = int(rng.integers(0, 3))
            bars.append((birth, birth + int(rng.integers(1, 4))))
        return Barcode.of(bars)

    checked = 0
    while checked < 50:
        first, second = random_barcode(), random_barcode()
        m, n = barcode_presentation(first), barcode_presentation(second)
        if not _tiny_enough(m, n, 0):
            continue
        distance = bottleneck(first, second)
        for eps in (distance, Fraction(int(rng.integers(0, 13)), 4)):
            result = search_interleaving(m, n, eps)
            assert isinstance(result, InterleavingWitness) == (distance <= eps)
            if isinstance(result, InterleavingWitness):
                assert verify_interleaving(m, n, result).passed
        checked += 1


def _random_plane_pair(rng):
    eps = Fraction(int(rng.integers(1, 3)), 2)

    def grade():
        return [int(rng.integers(0, 2)) for _ in range(2)]

    W1 = [("u", grade())]
    W2 = [("v", grade())] if rng.random() < 0.5 else []
    refs = {"w1.u": [Fraction(c) for c in W1[0][1]]}
    if W2:
        refs["w2.v"] = [Fraction(c) for c in W2[0][1]]

    def relations(own):
        block = []
        if rng.random() < 0.5:
            chosen = [ref for ref in refs if rng.random() < 0.7] or ["w1.u"]
            lifted = [[c + (0 if ref.startswith(own) else eps) for c in refs[ref]] for ref in chosen]
            top = [max(column) + int(rng.integers(0, 2)) for column in zip(*lifted)]
            block.append((top, {ref: 1 for ref in chosen}))
        return block

    return InterleavingPresentationPair.build(eps, 2, 2, W1=W1, W2=W2, Y1=relations("w1"), Y2=relations("w2"))


def test_search_finds_plane_pair_interleavings(rng):
    checked = 0
    for _ in range(400):
        pair = _random_plane_pair(rng)
        m, n = family_at(pair, 0), family_at(pair, pair.eps)
        if not _tiny_enough(m, n, pair.eps):
            continue
        found = search_interleaving(m, n, pair.eps)
        assert isinstance(found, InterleavingWitness)
        assert verify_interleaving(m, n, found).passed
        checked += 1
        if checked == 25:
            break
    assert checked == 25
