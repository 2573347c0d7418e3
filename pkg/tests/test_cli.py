import json
import shutil
import subprocess

import pytest

from crsing.cli import InputError, RunConfig, main
from crsing.demos import SURFACES


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(p)


class TestCertify:
    def test_demo_passes(self, capsys):
        code, out, _ = run(capsys, "certify", "--demo", "zbar3")
        rep = json.loads(out)
        assert code == 0 and rep["certificate"]["passed"]
        assert rep["certificate"]["selected"]["sizeRhs"] == pytest.approx(0.6339746, abs=1e-6)

    def test_failing_surface_exit_one(self, capsys):
        code, out, _ = run(capsys, "certify", "--demo", "zbar3-fail")
        assert code == 1 and not json.loads(out)["certificate"]["passed"]

    def test_file_input_and_out(self, tmp_path, capsys):
        src = write(tmp_path, "s.json", SURFACES["tilted-zbar4"])
        dst = tmp_path / "r.json"
        code, out, _ = run(capsys, "certify", src, "--out", str(dst))
        assert code == 0 and out == ""
        assert json.loads(dst.read_text())["certificate"]["M"] == 4

    def test_samples(self, capsys):
        code, out, _ = run(capsys, "certify", "--demo", "tilted-zbar4", "--samples", "32768")
        lhs = json.loads(out)["certificate"]["selected"]["derivLhs"]
        assert abs(lhs - (1.2 + 0.6 / 0.7)) < 1e-3


class TestErrors:
    def test_schema_error_writes_nothing(self, tmp_path, capsys):
        bad = dict(SURFACES["zbar3"], residual=[{"a": 1, "b": 2, "re": 1, "im": 0}])
        dst = tmp_path / "r.json"
        code, out, err = run(capsys, "certify", write(tmp_path, "b.json", bad), "--out", str(dst))
        assert code == 2 and out == "" and "residual[0]" in err
        assert not dst.exists()

    def test_decode_error_is_line_anchored(self, tmp_path, capsys):
        path = write(tmp_path, "b.json", '{\n  "k": 3,\n}')
        code, _, err = run(capsys, "certify", path)
        assert code == 2 and f"{path}:3:1" in err

    def test_missing_file(self, tmp_path, capsys):
        code, _, err = run(capsys, "certify", str(tmp_path / "nope.json"))
        assert code == 2 and "nope.json" in err

    def test_both_inputs(self, tmp_path, capsys):
        code, _, _ = run(capsys, "certify", write(tmp_path, "s.json", SURFACES["zbar3"]), "--demo", "zbar3")
        assert code == 2

    @pytest.mark.parametrize(
        "kw",
        [
            dict(command="certify", demo="zbar3", samples=10),
            dict(command="approximate", demo="conj", max_degree=0),
            dict(command="certify", demo="nope"),
            dict(command="certify", demo="zbar3", tolerances={"hull": 0}),
        ],
    )
    def test_config_validation(self, kw):
        with pytest.raises(InputError):
            RunConfig(**kw)

    def test_hull_probe_needs_probe(self, capsys):
        code, _, err = run(capsys, "hull-probe", "--demo", "shear")
        assert code == 2 and "probe" in err

    def test_unknown_command(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate", "--demo", "zbar3"])
        assert exc.value.code == 2


class TestTools:
    def test_sector_scan(self, capsys):
        code, out, _ = run(capsys, "sector-scan", "--demo", "conj", "--samples", "15")
        assert code == 0 and json.loads(out)["scan"]["maxSpread"] <= 1e-9

    def test_sector_scan_elliptic_fails(self, capsys):
        code, out, _ = run(capsys, "sector-scan", "--demo", "elliptic", "--samples", "15")
        assert code == 1 and json.loads(out)["scan"]["fiberFlags"]

    def test_approximate_csv(self, tmp_path, capsys):
        csv = tmp_path / "curve.csv"
        code, out, _ = run(
            capsys, "approximate", "--demo", "conj", "--max-degree", "2", "--samples", "32", "--csv", str(csv)
        )
        assert code == 0
        lines = csv.read_text().splitlines()
        assert lines[0] == "a_max,b_max,sup_error" and len(lines) == 4
        errors = json.loads(out)["report"]["errors"]
        assert errors[-1] < 1e-8

    def test_hull_probe(self, capsys):
        code, out, _ = run(capsys, "hull-probe", "--demo", "conj", "--max-degree", "2", "--samples", "32")
        assert code == 0 and json.loads(out)["result"]["verdict"] == "OUTSIDE"

    def test_surface_as_function_input(self, capsys):
        code, out, _ = run(capsys, "sector-scan", "--demo", "zbar3", "--samples", "11")
        assert code in (0, 1) and "scan" in json.loads(out)


class TestPipeline:
    def test_failing_surface_stops_early(self, capsys):
        code, out, _ = run(capsys, "pipeline", "--demo", "zbar3-fail")
        rep = json.loads(out)
        assert code == 1 and not rep["passed"]

    def test_deterministic_bytes(self, tmp_path, capsys):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        for dst in (a, b):
            assert main(["pipeline", "--demo", "zbar3", "--max-degree", "2", "--out", str(dst)]) == 0
        assert a.read_bytes() == b.read_bytes()
        rep = json.loads(a.read_text())
        assert rep["passed"] and rep["epsilon"] > 0


@pytest.mark.skipif(shutil.which("crsing") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["crsing", "certify", "--demo", "zbar3"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["certificate"]["passed"]
