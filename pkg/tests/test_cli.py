import json
import subprocess
import sys

import pytest

from belgauge.cli import main
from belgauge.coherent import CSV_HEADER
from belgauge.numlin import BipartiteShape
from belgauge.states import dump_state, maximally_entangled, product_state, random_density, random_pure_state


@pytest.fixture
def files(tmp_path):
    paths = {
        "bell": tmp_path / "bell.json",
        "product": tmp_path / "product.json",
        "mixed": tmp_path / "mixed.json",
        "big": tmp_path / "big.json",
    }
    dump_state(maximally_entangled(2), paths["bell"])
    dump_state(product_state([1, 0], [0, 1]), paths["product"])
    dump_state(random_density(BipartiteShape(2, 3), 0), paths["mixed"])
    dump_state(random_pure_state(BipartiteShape(4, 4), 1), paths["big"])
    return paths


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestAnalyze:
    def test_bell(self, capsys, files):
        code, out, _ = run(capsys, "analyze", "--input", str(files["bell"]), "--settings", "2", "2")
        doc = json.loads(out)
        assert code == 0 and doc["pass"]
        lo, hi = doc["nonlocality"]["bracket"]
        assert lo == pytest.approx(2**0.5, abs=1e-9) and hi == pytest.approx(3.0)
        assert doc["entanglement"]["relation_residuals"]["eq49"] == pytest.approx(0.3964466, abs=1e-6)

    def test_product(self, capsys, files):
        code, out, _ = run(capsys, "analyze", "--input", str(files["product"]))
        assert code == 0
        assert json.loads(out)["nonlocality"]["bracket"] == [1.0, 1.0]

    def test_mixed(self, capsys, files):
        code, out, _ = run(capsys, "analyze", "--input", str(files["mixed"]), "--settings", "3", "3")
        doc = json.loads(out)
        assert code == 0
        assert doc["kind"] == "density" and doc["entanglement"]["concurrence"] is None

    def test_malformed_input(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"d1": 2, "kind": "pure", "data": []}')
        code, _, err = run(capsys, "analyze", "--input", str(bad))
        assert code == 1 and "d2" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, _ = run(capsys, "analyze", "--input", str(tmp_path / "nope.json"))
        assert code == 1

    def test_bad_settings(self, capsys, files):
        code, _, _ = run(capsys, "analyze", "--input", str(files["bell"]), "--settings", "0", "2")
        assert code == 1


class TestCoherentScan:
    def test_csv(self, capsys):
        code, out, _ = run(capsys, "coherent-scan", "--alpha", "1", "3", "3")
        lines = out.strip().split("\n")
        assert code == 0
        assert lines[0] == ",".join(CSV_HEADER)
        assert [float(line.split(",")[0]) for line in lines[1:]] == [1.0, 2.0, 3.0]

    def test_json(self, capsys):
        code, out, _ = run(capsys, "coherent-scan", "--alpha", "0.5", "1", "2", "--family", "2", "--format", "json")
        doc = json.loads(out)
        assert code == 0 and doc["pass"] and len(doc["rows"]) == 2

    def test_bad_grid(self, capsys):
        code, _, _ = run(capsys, "coherent-scan", "--alpha", "1", "3", "1")
        assert code == 1

    def test_usage_error_exits_one(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["coherent-scan"])
        assert exc.value.code == 1


class TestSourceOp:
    def test_bell(self, capsys, files):
        code, out, _ = run(capsys, "source-op", "--input", str(files["bell"]), "--s", "2", "--trials", "20")
        doc = json.loads(out)
        assert code == 0 and doc["pass"] and doc["trace_norm_within_bound"]
        assert doc["dilated_dim"] == 8

    def test_cap(self, capsys, files):
        code, _, err = run(capsys, "source-op", "--input", str(files["big"]), "--s", "6")
        assert code == 1 and "cap" in err

    def test_mixed_rejected(self, capsys, files):
        code, _, _ = run(capsys, "source-op", "--input", str(files["mixed"]), "--s", "2")
        assert code == 1


def test_chsh_command(capsys, files):
    code, out, _ = run(capsys, "chsh", "--input", str(files["bell"]), "--restarts", "5")
    doc = json.loads(out)
    assert code == 0
    assert doc["violation_ratio"] == pytest.approx(2**0.5, abs=1e-6)
    assert set(doc["observables"]) == {"A1", "A2", "B1", "B2"}


class TestSelftest:
    def test_passes_and_is_reproducible(self, capsys):
        code, first, _ = run(capsys, "selftest", "--seed", "3")
        _, second, _ = run(capsys, "selftest", "--seed", "3")
        assert code == 0
        assert first == second
        assert json.loads(first)["failed"] == 0

    def test_tight_tolerance_fails(self, capsys):
        code, out, _ = run(capsys, "selftest", "--tol", "oracle=1e-20")
        assert code == 2
        assert json.loads(out)["failed"] >= 1

    def test_unknown_tolerance(self, capsys):
        code, _, _ = run(capsys, "selftest", "--tol", "bogus=1")
        assert code == 1


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "belgauge.cli", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and "belgauge" in proc.stdout
