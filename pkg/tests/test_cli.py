import pytest

from cli import EXIT_FAIL, EXIT_INPUT_ERROR, EXIT_PASS, cli_dispatch, create_format, parse_point
from conftest import EPATH_SAMPLE, FREE_PMOD, INTERVAL_PMOD, IPRES_SAMPLE, SHIFTED_FREE_PMOD


@pytest.fixture
def write(tmp_path):
    def _write(name: str, text: str) -> str:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)
    return _write


def run(capsys, *argv):
    code = cli_dispatch(list(argv))
    out, err = capsys.readouterr()
    return code, out.splitlines(), err


def bar_pmod(birth, death) -> str:
    return f"pmod 1\nfield 2\ndim 1\ngen g {birth}\nrel {death} : 1*g\n"


def test_parse_point():
    assert parse_point(["1,3/2"]) == parse_point(["1", "3/2"])
    with pytest.raises(ValueError):
        parse_point(["x"])
    with pytest.raises(ValueError):
        parse_point([])


def test_create_format_uses_config_registry():
    assert create_format("epath").FORMAT_ID == "epath"
    with pytest.raises(ValueError):
        create_format("json")


def test_validate(capsys, write):
    code, out, _ = run(capsys, "validate", write("m.pmod", INTERVAL_PMOD))
    assert code == EXIT_PASS
    assert out == ["field 2", "dim 1", "generators 1", "relations 1", "presentation: PASS"]


def test_eval_and_dims(capsys, write):
    path = write("m.pmod", INTERVAL_PMOD)
    code, out, _ = run(capsys, "eval", path, "--at", "1")
    assert code == EXIT_PASS
    assert out == ["point (1)", "dim 1", "basis g"]
    code, out, _ = run(capsys, "dims", path)
    assert out == ["grid {0 2}", "(0) : 1", "(2) : 0"]
    code, _, err = run(capsys, "eval", path, "--at", "1", "2")
    assert code == EXIT_INPUT_ERROR
    assert err.startswith("[CLI] error:")


def test_barcode_bottleneck_component(capsys, write):
    two_bar = write("two.pmod", "pmod 1\nfield 2\ndim 1\ngen a 0\ngen b 1\nrel 2 : 1*a 1*b\n")
    assert run(capsys, "barcode", two_bar)[1] == ["bar 0 inf", "bar 1 2"]
    code, out, _ = run(capsys, "bottleneck", write("a.pmod", bar_pmod(0, 4)), write("b.pmod", bar_pmod(1, 4)))
    assert code == EXIT_PASS and out == ["1"]
    assert run(capsys, "component", write("free.pmod", FREE_PMOD))[1] == ["1"]
    assert run(capsys, "component", write("m.pmod", INTERVAL_PMOD))[1] == ["0"]


def test_edit_verify_and_cost(capsys, write):
    path = write("p.epath", EPATH_SAMPLE)
    code, out, _ = run(capsys, "edit-verify", path)
    assert code == EXIT_PASS
    assert out[0] == "cost 1"
    assert out[-1] == "path: PASS"
    assert run(capsys, "edit-cost", path)[1] == ["1"]


def test_edit_verify_reports_singular_witness(capsys, write):
    path = write("p.epath", EPATH_SAMPLE.replace("W 0 : 1 1 1", "W 0 : 1 1 0"))
    code, out, _ = run(capsys, "edit-verify", path)
    assert code == EXIT_FAIL
    assert "check step1.invertible: FAIL (component at (0) is not invertible)" in out
    assert out[-1] == "path: FAIL"
    code, out, _ = run(capsys, "edit-to-interleaving", path, "--step", "1")
    assert code == EXIT_FAIL


def test_edit_to_interleaving_then_verify(capsys, write):
    path = write("p.epath", EPATH_SAMPLE)
    code, out, _ = run(capsys, "edit-to-interleaving", path, "--step", "1")
    assert code == EXIT_PASS
    assert out[:4] == ["iwit 1", "field 2", "dim 1", "eps 1"]
    witness = write("w.iwit", "\n".join(out) + "\n")
    code, out, _ = run(
        capsys, "interleaving-verify", write("a.pmod", FREE_PMOD), write("b.pmod", SHIFTED_FREE_PMOD), witness
    )
    assert code == EXIT_PASS
    assert out[0] == "eps 1"
    assert out[-1] == "interleaving: PASS"
    code, _, err = run(capsys, "edit-to-interleaving", path, "--step", "2")
    assert code == EXIT_INPUT_ERROR
    assert "--step" in err


def test_zero_witness_fails_verification(capsys, write):
    m = write("m.pmod", bar_pmod(0, 4))
    witness = write("w.iwit", "iwit 1\nfield 2\ndim 1\neps 1\nF 0 : 1 1 0\nF 4 : 0 0\nG 0 : 1 1 0\nG 4 : 0 0\n")
    code, out, _ = run(capsys, "interleaving-verify", m, m, witness)
    assert code == EXIT_FAIL
    assert "check triangle-M: FAIL (triangle fails at (0))" in out


def test_path_from_pair_round_trip(capsys, write):
    code, out, _ = run(capsys, "path-from-pair", write("pair.ipres", IPRES_SAMPLE))
    assert code == EXIT_PASS
    assert out[0] == "epath 1"
    path = write("built.epath", "\n".join(out) + "\n")
    code, out, _ = run(capsys, "edit-verify", path)
    assert code == EXIT_PASS
    assert out[0] == "cost 1"


def test_pair_check(capsys, write):
    pair = write("pair.ipres", IPRES_SAMPLE)
    code, out, _ = run(capsys, "pair-check", pair, write("m.pmod", bar_pmod(0, 4)), write("n.pmod", bar_pmod(1, 4)))
    assert code == EXIT_PASS
    assert out[0] == "eps 1"
    assert out[-1] == "pair: PASS"
    code, out, _ = run(capsys, "pair-check", pair, write("m.pmod", bar_pmod(0, 4)), write("n.pmod", bar_pmod(0, 4)))
    assert code == EXIT_FAIL


def test_search_interleaving(capsys, write):
    first, second = write("a.pmod", FREE_PMOD), write("b.pmod", SHIFTED_FREE_PMOD)
    code, out, _ = run(capsys, "search-interleaving", first, second, "--eps", "1")
    assert code == EXIT_PASS
    assert out[:4] == ["iwit 1", "field 2", "dim 1", "eps 1"]
    code, out, _ = run(capsys, "search-interleaving", first, second, "--eps", "1/2", "--seed", "5")
    assert code == EXIT_FAIL
    assert out[1:] == ["provably none: yes", "seed 5"]


def test_input_errors_exit_two(capsys, write, tmp_path):
    code, _, err = run(capsys, "validate", write("bad.pmod", "pmod 1\nfield 4\ndim 1\n"))
    assert code == EXIT_INPUT_ERROR
    assert "line 2, column 7" in err
    code, _, err = run(capsys, "validate", str(tmp_path / "missing.pmod"))
    assert code == EXIT_INPUT_ERROR
    code, _, _ = run(capsys, "barcode", write("plane.pmod", "pmod 1\nfield 2\ndim 2\ngen g 0 0\n"))
    assert code == EXIT_INPUT_ERROR
