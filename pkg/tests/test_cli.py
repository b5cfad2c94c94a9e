import json

import pytest

from domcount import cli
from domcount.engine import GraphSpec, domination_polynomial
from domcount.errors import VerificationError
from domcount.rings import Ring


def run(argv, capsys):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_poly_text(capsys):
    code, out, _ = run(["poly", "--family", "grid", "-m", "2", "-n", "2"], capsys)
    assert code == 0
    assert out == "6z^2 + 4z^3 + z^4\n"


def test_poly_json(capsys):
    code, out, _ = run(["poly", "--family", "grid", "-m", "2", "-n", "2",
                        "--format", "json"], capsys)
    assert code == 0
    assert json.loads(out) == {"minDegree": 2, "coefficients": ["6", "4", "1"]}


def test_poly_csv(capsys):
    code, out, _ = run(["poly", "--family", "king", "-m", "2", "-n", "2",
                        "--format", "csv"], capsys)
    assert code == 0
    assert out == "degree,coefficient\n1,4\n2,6\n3,4\n4,1\n"


def test_poly_mod(capsys):
    code, out, _ = run(["poly", "--family", "grid", "-m", "3", "-n", "3",
                        "--mod", "7", "--format", "json"], capsys)
    assert code == 0
    exact = domination_polynomial(GraphSpec("grid", 3, 3))
    got = json.loads(out)
    assert got["minDegree"] == 3
    reduced = domination_polynomial(GraphSpec("grid", 3, 3), ring=Ring(7))
    assert [int(c) for c in got["coefficients"]] == \
        list(reduced.coefficients[reduced.min_degree():])
    assert int(got["coefficients"][0]) == exact.coefficient(3) % 7


def test_poly_crt_equals_exact(capsys):
    code, crt_out, _ = run(["poly", "--family", "grid", "-m", "4", "-n", "4",
                            "--crt"], capsys)
    assert code == 0
    code, plain_out, _ = run(["poly", "--family", "grid", "-m", "4", "-n", "4"],
                             capsys)
    assert code == 0
    assert crt_out == plain_out


def test_poly_checkpoint_dir(tmp_path, capsys):
    args = ["poly", "--family", "grid", "-m", "2", "-n", "3"]
    code, plain_out, _ = run(args, capsys)
    code2, out, _ = run(args + ["--checkpoint-dir", str(tmp_path)], capsys)
    assert (code, code2) == (0, 0)
    assert out == plain_out
    assert sorted(f.name for f in tmp_path.glob("*.chk")) == \
        ["row_0001.chk", "row_0002.chk", "row_0003.chk"]


def test_torus_checkpoint_is_an_error(tmp_path, capsys):
    code, out, err = run(["poly", "--family", "torus", "-m", "2", "-n", "2",
                          "--checkpoint-dir", str(tmp_path)], capsys)
    assert code == 4
    assert out == ""
    assert "error" in err


def test_count(capsys):
    code, out, _ = run(["count", "--family", "grid", "-m", "3", "-n", "3"], capsys)
    assert code == 0
    assert out == "291\n"


def test_table_gamma_csv(cylinder_gamma, capsys):
    code, out, _ = run(["table", "gamma", "--family", "cylinder",
                        "--m-range", "1:3", "--n-range", "1:4"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "n/m,1,2,3"
    for row, n in zip(lines[1:], range(1, 5)):
        want = [str(n)] + [str(cylinder_gamma(m, n)) for m in (1, 2, 3)]
        assert row == ",".join(want)


def test_table_total_json(grid_totals, capsys):
    code, out, _ = run(["table", "total", "--family", "grid",
                        "--m-range", "1:2", "--n-range", "1:2",
                        "--format", "json"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["kind"] == "total"
    assert payload["m_values"] == [1, 2] and payload["n_values"] == [1, 2]
    assert payload["rows"][0][0] == "1"
    assert payload["rows"][1][1] == str(grid_totals[2])


def test_growth_json(capsys):
    code, out, _ = run(["growth", "--family", "grid", "--m-range", "3:5",
                        "--digits", "8", "--workers", "1"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert [s["m"] for s in payload["samples"]] == [3, 4, 5]
    assert 1.9 < float(payload["mu"]) < 2.0


def test_growth_text(capsys):
    code, out, _ = run(["growth", "--family", "grid", "--m-range", "3:5",
                        "--digits", "8", "--workers", "1",
                        "--format", "text"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("m=3 ")
    assert lines[-1].startswith("mu = ")


def test_growth_that_cannot_converge_exits_2(capsys):
    code, _, err = run(["growth", "--family", "grid", "--m-range", "3:5",
                        "--digits", "13", "--n-cap", "4", "--workers", "1"],
                       capsys)
    assert code == 2
    assert "aborted" in err


def test_oeis_signature_counts(capsys):
    code, out, _ = run(["oeis", "A001333", "--limit", "5"], capsys)
    assert code == 0
    assert out == "1 3\n2 7\n3 17\n4 41\n5 99\n"
    code, out, _ = run(["oeis", "A078057", "--limit", "4"], capsys)
    assert code == 0
    assert out == "0 1\n1 3\n2 7\n3 17\n"


def test_oeis_grid_gamma_diagonal(appendix_poly, capsys):
    code, out, _ = run(["oeis", "A104519", "--limit", "5"], capsys)
    assert code == 0
    expected = []
    for n in range(1, 6):
        coeffs = appendix_poly("grid", n)
        expected.append(next(d for d, c in enumerate(coeffs) if c))
    assert out == "".join(f"{n} {v}\n" for n, v in enumerate(expected, start=1))


def test_oeis_unknown_id(capsys):
    code, _, err = run(["oeis", "A000001"], capsys)
    assert code == 4
    assert "unknown sequence" in err


def test_verify_small(capsys):
    code, out, _ = run(["verify", "--max-cells", "6"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert "ok oracle grid 1x1" in lines
    assert lines[-1].endswith("checks passed")
    assert not any(line.startswith("FAIL") for line in lines)


def test_verification_error_maps_to_exit_3(monkeypatch, capsys):
    def boom(max_cells):
        raise VerificationError("forced mismatch")

    monkeypatch.setattr(cli, "cmd_verify", boom)
    code, _, err = run(["verify"], capsys)
    assert code == 3
    assert "mismatch" in err


def test_argument_errors_exit_4(capsys):
    for argv in (
        [],
        ["poly", "--family", "moebius", "-m", "2", "-n", "2"],
        ["poly", "--family", "grid", "-m", "2", "-n", "2", "--mod", "7", "--crt"],
    ):
        with pytest.raises(SystemExit) as info:
            cli.main(argv)
        assert info.value.code == 4
        capsys.readouterr()


def test_bad_values_exit_4(capsys):
    for argv in (
        ["poly", "--family", "grid", "-m", "0", "-n", "2"],
        ["table", "ngamma", "--family", "grid", "--m-range", "two:3"],
        ["table", "ngamma", "--family", "grid", "--m-range", "5:3"],
    ):
        code, _, err = run(argv, capsys)
        assert code == 4
        assert "error" in err


def test_guard_exits_2(capsys):
    code, _, err = run(["poly", "--family", "grid", "-m", "12", "-n", "12",
                        "--max-states", "10"], capsys)
    assert code == 2
    assert "guard" in err


def test_memory_env_override(monkeypatch, capsys):
    monkeypatch.setenv("DOMCOUNT_MAX_MEM", "1000")
    code, _, err = run(["poly", "--family", "grid", "-m", "8", "-n", "8"], capsys)
    assert code == 2
    assert "guard" in err


def test_progress_goes_to_stderr(capsys):
    code, out, err = run(["poly", "--family", "grid", "-m", "2", "-n", "200"],
                         capsys)
    assert code == 0
    assert err.splitlines()[-1] == "row 200/200"
    assert len(err.splitlines()) == 200
    assert "row" not in out


def test_output_is_deterministic(capsys):
    argv = ["poly", "--family", "torus", "-m", "3", "-n", "4", "--format", "json"]
    _, first, _ = run(argv, capsys)
    _, second, _ = run(argv, capsys)
    assert first == second
