from fractions import Fraction

import pytest

from barcodes import Barcode, barcode_1d, barcode_presentation, bottleneck, half_length, optimal_matching
from conftest import interval
from pm_utils import INFINITY
from presentations import Presentation, PresentationError


def test_interval_barcode(interval_module):
    assert barcode_1d(interval_module).bars == ((0, 2),)


def test_elder_rule(two_bar_module):
    assert barcode_1d(two_bar_module).bars == ((0, INFINITY), (1, 2))


def test_zero_length_bars_are_dropped():
    m = Presentation.build(1, 3, [("a", [1])], [([1], {"a": 2})])
    assert len(barcode_1d(m)) == 0


def test_barcode_needs_one_parameter(square_module):
    with pytest.raises(PresentationError):
        barcode_1d(square_module)


def test_empty_bar_rejected():
    with pytest.raises(ValueError):
        Barcode.of([(2, 2)])


def test_infinite_endpoints_parse():
    assert Barcode.of([(0, "inf")]).infinite() == [(0, INFINITY)]
    assert half_length((Fraction(0), INFINITY)) == INFINITY


@pytest.mark.parametrize("first, second, expected", [
    ([(0, 4)], [(1, 4)], Fraction(1)),
    ([(0, 2)], [], Fraction(1)),
    ([(0, 10)], [(0, 1)], Fraction(5)),
    ([(0, "inf"), (1, 3)], [(0, "inf"), (1, 3)], Fraction(0)),
    ([(0, "inf")], [(2, "inf")], Fraction(2)),
    ([(0, "inf")], [], INFINITY),
])
def test_bottleneck_examples(first, second, expected):
    assert bottleneck(Barcode.of(first), Barcode.of(second)) == expected


def test_bottleneck_is_a_metric(rng):
    def random_barcode():
        bars = []
        for _ in range(int(rng.integers(0, 4))):
            birth = int(rng.integers(0, 6))
            bars.append((birth, birth + int(rng.integers(1, 5))))
        return Barcode.of(bars)

    for _ in range(40):
        a, b, c = random_barcode(), random_barcode(), random_barcode()
        assert bottleneck(a, a) == 0
        assert bottleneck(a, b) == bottleneck(b, a)
        assert bottleneck(a, c) <= bottleneck(a, b) + bottleneck(b, c)


def test_optimal_matching():
    assert optimal_matching(Barcode.of([(0, 4)]), Barcode.of([(1, 4)])) == [(0, 0)]
    assert optimal_matching(Barcode.of([(0, 2)]), Barcode.of([])) == []
    assert optimal_matching(Barcode.of([(0, "inf")]), Barcode.of([])) is None


def test_barcode_presentation_recovers_bars():
    barcode = Barcode.of([(0, "inf"), (1, 3), (Fraction(1, 2), 2)])
    m = barcode_presentation(barcode, p=3)
    assert m.p == 3
    assert barcode_1d(m) == barcode
    assert barcode_1d(interval(0, 2)) == Barcode.of([(0, 2)])
