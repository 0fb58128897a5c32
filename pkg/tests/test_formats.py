from fractions import Fraction

import pytest

from barcodes import Barcode
from conftest import EPATH_SAMPLE, INTERVAL_PMOD, IPRES_SAMPLE, interval, random_presentation
from constructions import encode_barcode_pair, interleaving_to_path
from document_format_base import FormatError, tokenize
from edit_category import collapse_edit, path_cost, validate_path
from format_epath import EditPathFormat
from format_ipres import PairFormat
from format_iwit import WitnessFormat
from format_pmod import PresentationFormat, emit_pmod, parse_pmod
from interleaving import InterleavingWitness, interleave_from_edit, verify_interleaving


def error_of(fmt, text) -> FormatError:
    with pytest.raises(FormatError) as info:
        fmt.parse(text)
    return info.value


def test_tokenize_drops_comments_and_blank_lines():
    lines = tokenize("# header\n\npmod 1   # magic\n  field 2\n")
    assert [line.number for line in lines] == [3, 4]
    assert lines[1].tokens[0].column == 3


def test_pmod_parse_and_canonical_emit():
    fmt = PresentationFormat()
    m = fmt.parse(INTERVAL_PMOD)
    assert m == interval(0, 2)
    assert fmt.emit(m) == INTERVAL_PMOD
    assert [entry["type"] for entry in fmt.get_operation_log()] == ["PARSE", "EMIT"]


def test_pmod_emission_sorts_and_reduces():
    text = "pmod 1\nfield 3\ndim 1\ngen b 1\ngen a 0\nrel 3/2 : 4*a 2*b\n"
    fmt = PresentationFormat()
    assert fmt.emit(fmt.parse(text)) == "pmod 1\nfield 3\ndim 1\ngen a 0\ngen b 1\nrel 3/2 : 1*a 2*b\n"


def test_emission_is_stable_on_large_random_files(rng):
    grades = (0, Fraction(1, 4), Fraction(1, 2), 1, Fraction(7, 3))
    m = random_presentation(rng, d=2, p=5, max_gens=50, max_rels=20, grades=grades)
    text = emit_pmod(m)
    assert parse_pmod(text) == m
    assert emit_pmod(parse_pmod(text)) == text


@pytest.mark.parametrize("text, line, column, fragment", [
    ("pmod 2\nfield 2\ndim 1\n", 1, 6, "Unsupported version"),
    ("ipres 1\nfield 2\ndim 1\n", 1, 1, "Expected magic"),
    ("pmod 1\nfield 4\ndim 1\n", 2, 7, "prime"),
    ("pmod 1\nfield 2\ndim 0\n", 3, 5, "at least 1"),
    ("pmod 1\nfield 2\ndim 1\ngen g 3\nrel 2 : 1*g\n", 5, 1, "Grade condition"),
    ("pmod 1\nfield 2\ndim 1\ngen g 0\nrel 2 : 1*h\n", 5, 1, "Unknown generator"),
    ("pmod 1\nfield 2\ndim 1\ngen g 0\ngen g 1\n", 5, 5, "Duplicate"),
    ("pmod 1\nfield 2\ndim 1\ngen g x\n", 4, 7, "Invalid rational"),
    ("pmod 1\nfield 2\ndim 1\nrel 2 1*g\n", 4, 7, "Expected ':'"),
    ("pmod 1\nfield 2\n", 3, None, "end of document"),
])
def test_pmod_errors_carry_positions(text, line, column, fragment):
    err = error_of(PresentationFormat(), text)
    assert err.line == line
    assert err.column == column
    assert fragment in str(err)


def test_ipres_matches_encoded_pair():
    fmt = PairFormat()
    pair = fmt.parse(IPRES_SAMPLE)
    assert pair == encode_barcode_pair(Barcode.of([(0, 4)]), Barcode.of([(1, 4)]), 1)
    assert fmt.emit(pair) == IPRES_SAMPLE


def test_ipres_errors():
    fmt = PairFormat()
    cross = IPRES_SAMPLE.replace("w2:\n", "w2:\ngen v 0\n").replace("y1:\n", "y1:\nrel 0 : 1*w2.v\n")
    err = error_of(fmt, cross)
    assert err.line == 10
    assert "Grade condition" in str(err)
    untagged = IPRES_SAMPLE.replace("rel 4 : 1*w1.u0\ny2:", "rel 4 : 1*u0\ny2:")
    assert "tag" in str(error_of(fmt, untagged))
    swapped = IPRES_SAMPLE.replace("w1:\ngen u0 0\nw2:\n", "w2:\nw1:\ngen u0 0\n")
    assert "out of order" in str(error_of(fmt, swapped))
    assert error_of(fmt, IPRES_SAMPLE.replace("eps 1", "eps -1")).line == 4


def test_iwit_round_trip_of_edit_witness():
    m = interval(1)
    edit = collapse_edit(m)
    w = interleave_from_edit(edit)
    fmt = WitnessFormat()
    text = fmt.emit(w)
    assert text.startswith("iwit 1\nfield 2\ndim 1\neps 1\n")
    parsed = fmt.parse(text)
    assert parsed.eps == 1
    assert verify_interleaving(m, edit.dst, parsed).passed


def test_iwit_errors():
    fmt = WitnessFormat()
    head = "iwit 1\nfield 2\ndim 1\neps 1/2\n"
    assert "entries" in str(error_of(fmt, head + "F 0 : 1 1 1 0\n"))
    assert error_of(fmt, head + "H 0 : 1 1 1\n").line == 5
    assert "same point" in str(error_of(fmt, head + "F 0 : 1 1 1\nF 0 : 1 1 0\n"))
    with pytest.raises(ValueError):
        fmt.emit(InterleavingWitness(eps=Fraction(0), F={}, G={}))


def test_epath_sample_validates():
    fmt = EditPathFormat()
    path = fmt.parse(EPATH_SAMPLE)
    assert len(path.nodes) == 2
    assert path.steps[0][1] == "rev"
    assert path.steps[0][0].src == path.nodes[1]
    assert validate_path(path).passed
    assert path_cost(path) == 1
    assert fmt.emit(path) == EPATH_SAMPLE


def test_epath_accepts_unicode_arrows():
    path = EditPathFormat().parse(EPATH_SAMPLE.replace("1->0", "1→0"))
    assert path_cost(path) == 1


def test_epath_emits_constructed_paths():
    pair = encode_barcode_pair(Barcode.of([(0, 4)]), Barcode.of([(1, 4)]), 1)
    path = interleaving_to_path(pair)
    fmt = EditPathFormat()
    parsed = fmt.parse(fmt.emit(path))
    assert parsed.nodes == path.nodes
    assert validate_path(parsed).passed
    assert path_cost(parsed) == 1


@pytest.mark.parametrize("edit, fragment", [
    (lambda t: t.replace("edit 1 rev", "edit 1 back"), "Direction"),
    (lambda t: t.replace("gridQ ax 0 : 0\n", ""), "lacks 'gridQ ax 0'"),
    (lambda t: t.replace("edit 1 rev", "edit 2 rev"), "edit number 1"),
    (lambda t: t.replace("category 1D", "category 3D"), "Category"),
    (lambda t: t.rstrip("}\n"), "closing the block"),
    (lambda t: t.split("node 1")[0], "cannot bound"),
])
def test_epath_errors(edit, fragment):
    assert fragment in str(error_of(EditPathFormat(), edit(EPATH_SAMPLE)))
