import json
from fractions import Fraction

import pytest

from nflab import __version__, cli
from nflab.hitting import HittingReport

BASIS = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
OPEN = BASIS + [[1, 1, 0, 0]]


@pytest.fixture
def functions(write_json):
    def write(tables, name="functions.json"):
        return write_json(
            name,
            {"domain_size": 4, "codomain": ["0", "1"], "functions": tables},
        )

    return write


def _run(capsys, *argv):
    code = cli.main([str(arg) for arg in argv])
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def _report(capsys, *argv):
    code, out, err = _run(capsys, *argv)
    return code, json.loads(out) if out else None, err


def test_check_cup_closed(capsys, functions):
    code, report, _ = _report(capsys, "check-cup", functions(BASIS))
    assert code == cli.EXIT_OK
    assert report["tool"] == "nflab"
    assert report["version"] == __version__
    assert report["config"]["command"] == "check-cup"
    result = report["result"]
    assert result["closed"] is True
    assert [c["histogram"] for c in result["classes"]] == [[3, 1]]


def test_check_cup_open(capsys, functions):
    code, report, _ = _report(capsys, "check-cup", functions(OPEN))
    assert code == cli.EXIT_NOT_CLOSED
    assert report["result"]["witness"] == {
        "function": [1, 1, 0, 0],
        "permutation": [0, 2, 1, 3],
        "image": [1, 0, 1, 0],
    }


def test_check_cup_is_json_only(capsys, functions):
    code, out, err = _run(
        capsys, "check-cup", functions(BASIS), "--format", "csv"
    )
    assert code == cli.EXIT_INPUT
    assert out == ""
    assert "JSON" in err


def test_closure_output_is_an_input(capsys, tmp_path, functions):
    closed = tmp_path / "closed.json"
    source = functions([[1, 0, 0, 0], [1, 1, 0, 0]])
    assert cli.main(["closure", source, "--out", str(closed)]) == 0
    document = json.loads(closed.read_text(encoding="utf-8"))
    assert len(document["functions"]) == 10
    code, report, _ = _report(capsys, "check-cup", str(closed))
    assert code == cli.EXIT_OK


def test_verify_nfl_closed(capsys, functions):
    code, report, _ = _report(
        capsys,
        "verify-nfl",
        functions(BASIS),
        "--family",
        "lex,order:3210,rand:7",
        "--m",
        "1,2",
    )
    assert code == cli.EXIT_OK
    result = report["result"]
    assert result["closed"] is True
    assert result["equal"] is True
    assert result["algorithms"] == ["lex", "order:3-2-1-0", "rand:7"]
    assert len(result["distributions"]) == 3 * 2 * 2
    assert "counterexample" not in result
    assert report["config"]["ms"] == [1, 2]


def test_verify_nfl_open(capsys, functions):
    code, report, _ = _report(capsys, "verify-nfl", functions(OPEN))
    assert code == cli.EXIT_OK
    result = report["result"]
    assert result["closed"] is False
    counterexample = result["counterexample"]
    assert counterexample["left_mass"] == "1/1"
    assert counterexample["right_mass"] == "0/1"


def test_verify_nfl_csv(capsys, functions):
    code, out, _ = _run(
        capsys,
        "verify-nfl",
        functions(BASIS),
        "--family",
        "lex",
        "--m",
        "4",
        "--measures",
        "min-so-far",
        "--format",
        "csv",
    )
    assert code == cli.EXIT_OK
    assert out.splitlines() == [
        "algorithm,m,measure,k,mass",
        "lex,4,min-so-far,0/1,4/1",
    ]


def _probs(write_json, weights):
    return write_json(
        "probs.json", {"weights": [str(Fraction(w)) for w in weights]}
    )


def test_verify_nfl_with_compliant_probabilities(
    capsys, functions, write_json
):
    probs = _probs(write_json, [Fraction(1, 16)] * 16)
    code, report, _ = _report(
        capsys, "verify-nfl", functions(BASIS), "--probs", probs
    )
    assert code == cli.EXIT_OK
    result = report["result"]
    assert result["condition"]["holds"] is True
    assert result["equal"] is True
    assert probs in report["config"]["inputs"]


def test_verify_nfl_with_violating_probabilities(
    capsys, functions, write_json
):
    weights = [0] * 16
    # lexicographic indices of (1,0,0,0) and (0,1,0,0)
    weights[8] = weights[4] = Fraction(1, 2)
    probs = _probs(write_json, weights)
    code, report, _ = _report(
        capsys, "verify-nfl", functions(BASIS), "--probs", probs
    )
    assert code == cli.EXIT_OK
    result = report["result"]
    assert result["condition"]["holds"] is False
    assert result["counterexample"]["left_mass"] == "1/2"
    assert result["counterexample"]["right_mass"] == "0/1"


def test_verify_nfl_rejects_short_probabilities(
    capsys, functions, write_json
):
    probs = _probs(write_json, [1])
    code, _, err = _run(
        capsys, "verify-nfl", functions(BASIS), "--probs", probs
    )
    assert code == cli.EXIT_INPUT
    assert probs in err


def test_count(capsys):
    code, report, _ = _report(capsys, "count", 4, 2)
    assert code == cli.EXIT_OK
    result = report["result"]
    assert result["histogram_count"] == 5
    assert result["cup_subsets"] == 31
    assert result["all_subsets"] == 65535
    assert result["fraction_exact"] == "31/65535"
    assert report["config"]["parameters"]["x"] == 4


def test_count_beyond_the_exact_guard(capsys):
    code, report, _ = _report(capsys, "count", 8, 4, "--guard-exact", 1000)
    assert code == cli.EXIT_OK
    assert "all_subsets" not in report["result"]
    assert report["config"]["guards"]["max_functions"] == 1000

    code, out, err = _run(
        capsys, "count", 8, 4, "--guard-exact", 1000, "--exact"
    )
    assert code == cli.EXIT_GUARD
    assert out == ""
    assert "guard exceeded" in err


def test_count_rejects_empty_sizes(capsys):
    code, _, _ = _run(capsys, "count", 0, 2)
    assert code == cli.EXIT_INPUT


def test_fraction_curve_defaults_to_csv(capsys, tmp_path):
    code, out, _ = _run(capsys, "fraction-curve")
    assert code == cli.EXIT_OK
    lines = out.splitlines()
    assert len(lines) == 25
    assert lines[0].startswith("x,y,histogram_count")

    target = tmp_path / "curve.csv"
    assert cli.main(["fraction-curve", "--out", str(target)]) == 0
    assert target.read_text(encoding="utf-8") == out


def test_fraction_curve_json(capsys):
    code, report, _ = _report(
        capsys, "fraction-curve", "--x-max", 3, "--y", "2", "--format", "json"
    )
    assert code == cli.EXIT_OK
    assert [row["x"] for row in report["result"]["rows"]] == [1, 2, 3]


def test_hitting_time(capsys):
    code, report, _ = _report(
        capsys, "hitting-time", 6, 2, "--family", "lex,rand:3"
    )
    assert code == cli.EXIT_OK
    reports = report["result"]["reports"]
    assert [r["mean"] for r in reports] == ["7/3", "7/3"]
    assert all(r["matches"] for r in reports)


def test_hitting_time_csv(capsys):
    code, out, _ = _run(capsys, "hitting-time", 5, 1, "--format", "csv")
    assert code == cli.EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "algorithm,x,n,mean,formula,matches"
    assert all(line.endswith(",3/1,3/1,true") for line in lines[1:])


def test_hitting_time_rejects_n_zero(capsys):
    code, _, err = _run(capsys, "hitting-time", 4, 0)
    assert code == cli.EXIT_INPUT
    assert "n" in err


def test_hitting_time_inconsistency(capsys, monkeypatch):
    def broken(a, x, n, seeds=None, guards=None, record=False):
        return HittingReport(
            algorithm=a.name,
            x=x,
            n=n,
            mean=Fraction(3),
            formula=Fraction(x + 1, n + 1),
            matches=False,
        )

    monkeypatch.setattr(cli, "mean_first_hit", broken)
    code, out, err = _run(capsys, "hitting-time", 4, 1, "--family", "lex")
    assert code == cli.EXIT_INCONSISTENT
    assert out == ""
    assert "lex" in err


def test_analyze(capsys, functions, write_json):
    neighborhood = write_json(
        "cube.json", {"type": "hypercube", "param": 2}
    )
    code, report, _ = _report(
        capsys,
        "analyze",
        functions([[0, 1, 1, 0], [1, 0, 0, 0]]),
        neighborhood,
        "--minima-bound",
        "1",
    )
    assert code == cli.EXIT_OK
    result = report["result"]
    assert result["neighborhood"] == "hypercube"
    assert [f["local_minima"] for f in result["functions"]] == [2, 0]
    (certificate,) = result["certificates"]
    assert certificate["kind"] == "minima"
    assert certificate["closed"] is False
    assert report["config"]["parameters"]["minima_bound"] == "1/1"


def test_analyze_size_mismatch(capsys, functions, write_json):
    neighborhood = write_json("ring.json", {"type": "ring", "param": 5})
    code, _, err = _run(capsys, "analyze", functions(BASIS), neighborhood)
    assert code == cli.EXIT_INPUT
    assert neighborhood in err


def test_malformed_json_is_anchored(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"domain_size": 4,', encoding="utf-8")
    code, out, err = _run(capsys, "check-cup", path)
    assert code == cli.EXIT_INPUT
    assert out == ""
    assert f"{path}:1:" in err


def test_schema_errors_are_anchored(capsys, write_json):
    path = write_json(
        "bad.json", {"domain_size": 4, "codomain": [0, 1], "functions": []}
    )
    code, _, err = _run(capsys, "check-cup", path)
    assert code == cli.EXIT_INPUT
    assert f"{path}#/codomain" in err


def test_unknown_command():
    with pytest.raises(SystemExit) as exc_info:
        cli.main(["frobnicate"])
    assert exc_info.value.code == 2
