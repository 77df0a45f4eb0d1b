import json
import warnings
from fractions import Fraction

import numpy as np

from twindual.cache import MatrixCache, cache_key, decode_matrix, encode_matrix
from twindual.cli import main
from twindual.linalg import Matrix


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_cache_roundtrip_exact(tmp_path):
    cache = MatrixCache(tmp_path)
    m = Matrix.exact([[Fraction(-7, 3), 0], [Fraction(10 ** 30), Fraction(1, 2 ** 70)]])
    key = cache_key(kind="test", n=4)
    cache.store(key, m)
    back = cache.lookup(key)
    assert back is not None and back.equals(m)


def test_cache_roundtrip_approx(tmp_path):
    cache = MatrixCache(tmp_path)
    m = Matrix.approx(np.array([[1.5 + 2j, -0.25], [0, 3e-12]]))
    key = cache_key(kind="test-approx", tolerance=1e-9)
    cache.store(key, m)
    back = cache.lookup(key)
    assert back is not None and back.equals(m, 0)


def test_cache_key_sensitivity(tmp_path):
    cache = MatrixCache(tmp_path)
    cache.store(cache_key(kind="k", q="4"), Matrix.identity(2))
    assert cache.lookup(cache_key(kind="k", q="9")) is None
    assert cache.lookup(cache_key(kind="k", q="4", tolerance=1e-6)) is None


def test_cache_corruption_recovers(tmp_path):
    cache = MatrixCache(tmp_path)
    key = cache_key(kind="corrupt")
    path = cache.store(key, Matrix.identity(2))
    path.write_bytes(path.read_bytes()[:-5] + b"junk!")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        assert cache.lookup(key) is None
    assert any("corrupt" in str(w.message) for w in caught)
    calls = []

    def builder():
        calls.append(1)
        return Matrix.identity(2)

    rebuilt = cache.get_or_build(key, builder)
    assert calls and rebuilt.is_identity()
    assert cache.lookup(key) is not None


def test_cache_bit_identical_exact(tmp_path):
    m = Matrix.exact([[Fraction(355, 113), Fraction(-2)]])
    assert encode_matrix(m) == encode_matrix(decode_matrix(encode_matrix(m)))


def test_cache_env_override(tmp_path, monkeypatch):
    monkeypatch.setenv("TWINDUAL_CACHE", str(tmp_path / "envcache"))
    cache = MatrixCache()
    cache.store("x", Matrix.identity(1))
    assert (tmp_path / "envcache").exists()


def test_cli_admissible_ok(capsys):
    code, out, _ = run_cli(capsys, "admissible", "--n", "4", "--q", "4/1", "--sqrt-q", "2/1")
    assert code == 0
    payload = json.loads(out)
    assert payload["schema"] == 1
    assert payload["report"]["admissible"] is True


def test_cli_admissible_inadmissible_exit1(capsys):
    code, out, _ = run_cli(capsys, "admissible", "--n", "3", "--q", "1")
    assert code == 1
    assert json.loads(out)["report"]["excluded_check"] == "fail"


def test_cli_rep_all_checks(capsys):
    code, out, _ = run_cli(capsys, "rep", "--n", "4", "--q", "4", "--sqrt-q", "2")
    assert code == 0
    payload = json.loads(out)
    assert payload["ok"] is True
    assert {r["title"] for r in payload["reports"]}


def test_cli_rep_single_check_approx(capsys):
    code, out, _ = run_cli(capsys, "rep", "--n", "4", "--approx", "2,1", "--check", "twin")
    assert code == 0
    assert json.loads(out)["ok"] is True


def test_cli_density(capsys):
    code, out, _ = run_cli(
        capsys, "density", "--n", "4", "--q", "4", "--check", "rodrigues",
        "--check", "order", "--kmax", "200",
    )
    assert code == 0
    payload = json.loads(out)
    assert all(o["agree"] for o in payload["orders"])


def test_cli_diagrams_presentation(capsys):
    code, out, _ = run_cli(
        capsys, "diagrams", "--r", "3", "--verify-presentation",
        "--delta", "3", "--delta-prime", "1",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["counts"]["all"] == 76
    assert payload["presentation"]["ok"] is True


def test_cli_duality_exact(capsys):
    code, out, _ = run_cli(
        capsys, "duality", "--n", "4", "--q", "4/1", "--sqrt-q", "2/1", "--r", "2", "--center",
    )
    assert code == 0
    payload = json.loads(out)
    rep = payload["reports"][0]
    assert rep["dim_commutant"] == 10 and rep["center_dim"] == 4


def test_cli_duality_refuses_q1(capsys):
    code, out, err = run_cli(capsys, "duality", "--n", "4", "--q", "1", "--r", "2")
    assert code == 3
    refusal = json.loads(err)
    assert refusal["refused"] is True


def test_cli_duality_forced_q1(capsys):
    code, out, _ = run_cli(capsys, "duality", "--n", "4", "--q", "1", "--r", "2", "--force")
    assert code == 1  # runs, but the double-centralizer equality fails at q = 1
    rep = json.loads(out)["reports"][0]
    assert rep["forced"] is True
    assert rep["double_centralizer_ok"] is False


def test_cli_duality_csv_sweep(capsys):
    code, out, _ = run_cli(
        capsys, "duality", "--n", "4", "--q", "4", "--r", "1,2", "--output", "csv",
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("n,r,")
    assert len(lines) == 3


def test_cli_duality_on_f(capsys):
    code, out, _ = run_cli(
        capsys, "duality", "--n", "5", "--q", "4", "--mode", "approx", "--r", "2", "--on", "F",
    )
    assert code == 0
    rep = json.loads(out)["reports"][0]
    assert rep["dim_commutant"] == 3 and rep["faithful"] is True


def test_cli_action_emits_and_caches(capsys, tmp_path):
    argv = ["action", "--n", "4", "--q", "4", "--r", "2", "--delta-prime", "7",
            "--emit", "s:1", "--emit", "e:1", "--emit", "p:2",
            "--emit", "diagram:1-2,1'-2'", "--cache-dir", str(tmp_path)]
    code, out, _ = run_cli(capsys, *argv)
    assert code == 0
    payload = json.loads(out)
    assert set(payload["matrices"]) == {"s:1", "e:1", "p:2", "diagram:1-2,1'-2'"}
    assert payload["matrices"]["s:1"]["rows"] == 16
    assert len(list(tmp_path.glob("*.twm"))) == 4
    # second run hits the cache and reproduces the same bytes
    code2, out2, _ = run_cli(capsys, *argv)
    assert code2 == 0 and out2 == out


def test_cli_exact_reports_are_deterministic(capsys):
    _, out1, _ = run_cli(capsys, "duality", "--n", "4", "--q", "4", "--r", "2")
    _, out2, _ = run_cli(capsys, "duality", "--n", "4", "--q", "4", "--r", "2")
    assert out1 == out2


def test_cli_usage_errors(capsys):
    code, _, err = run_cli(capsys, "rep", "--n", "4", "--q", "2")
    assert code == 2  # q = 2 is not a perfect square and no sqrt given
    assert "sqrt" in err
    code, _, _ = run_cli(capsys, "rep", "--n", "4", "--q", "4", "--sqrt-q", "3")
    assert code == 2


def test_cli_module_runs_as_subprocess():
    import subprocess
    import sys

    proc = subprocess.run(
        [sys.executable, "-m", "twindual.cli", "admissible", "--n", "4", "--q", "4"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["ok"] is True


def test_cli_pretty_output(capsys):
    code, out, _ = run_cli(capsys, "admissible", "--n", "4", "--q", "4", "--output", "pretty")
    assert code == 0
    assert "admissible" in out


def test_cli_out_file(capsys, tmp_path):
    target = tmp_path / "report.json"
    code, out, _ = run_cli(capsys, "admissible", "--n", "4", "--q", "4", "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["ok"] is True
