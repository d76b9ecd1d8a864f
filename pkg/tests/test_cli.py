import json
import shutil
import subprocess
import sys

import pytest

from mcforms import cli
from mcforms.render import from_json_obj


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_compute_text(capsys):
    code, out, _ = run(capsys, "compute", "--h", "1", "--max-degree", "1", "--object", "K")
    assert code == 0
    assert out.splitlines()[0] == "K_1[0] = omega_1"


def test_compute_json_roundtrip(capsys):
    code, out, _ = run(capsys, "compute", "--h", "2", "--max-degree", "2", "--object", "g",
                       "--format", "json")
    assert code == 0
    from mcforms import engine as E
    assert from_json_obj(json.loads(out)) == E.compute_g(2, 2)[0]


def test_compute_several_json(capsys):
    code, out, _ = run(capsys, "compute", "--h", "2", "--max-degree", "1", "--object", "lambda",
                       "--format", "json")
    assert code == 0
    assert sorted(json.loads(out)) == ["Lambda_1", "Lambda_2", "Lambda_3", "Lambda_4"]


def test_compute_latex_alias(capsys):
    code, out, _ = run(capsys, "compute", "--h", "1", "--n", "2", "--max-degree", "2",
                       "--object", "J", "--format", "latex")
    assert code == 0 and "J^{[1]}" in out


def test_omega_word(capsys):
    code, out, _ = run(capsys, "compute", "--h", "1", "--max-degree", "2",
                       "--object", "omega-word", "--word", "1 1")
    assert code == 0 and out.startswith("omegaw{1 1} = ")


@pytest.mark.parametrize("argv", [
    ["compute", "--h", "0", "--object", "g"],
    ["compute", "--n", "0", "--object", "g"],
    ["compute", "--max-degree", "0", "--object", "g"],
    ["compute", "--max-degree", "5", "--object", "g"],
    ["compute", "--object", "nonsense"],
    ["compute", "--object", "omega-word"],
    ["compute", "--h", "1", "--object", "omega-word", "--word", "2"],
    ["compute", "--h", "2", "--object", "K", "--j", "3"],
    ["verify", "--suite", "nonsense"],
    ["verify", "--suite", "diagram", "--trials", "0"],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert "error" in err


def test_verify_suite(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "diagram", "--h", "1", "--max-degree", "2")
    assert code == 0
    assert out and all(l.startswith("PASS") for l in out.splitlines())


def test_fixtures_check_committed(capsys, fixtures_dir):
    code, out, _ = run(capsys, "fixtures", "check", "--fixtures-dir", str(fixtures_dir))
    assert code == 0, out
    assert out.count("PASS fixture") == 6


def test_fixtures_write_then_check(capsys, tmp_path):
    d = tmp_path / "fx"
    assert run(capsys, "fixtures", "write", "--fixtures-dir", str(d))[0] == 0
    assert run(capsys, "fixtures", "check", "--fixtures-dir", str(d))[0] == 0


def test_fixtures_check_detects_tampering(capsys, tmp_path, fixtures_dir):
    d = tmp_path / "fx"
    shutil.copytree(fixtures_dir, d)
    obj = json.loads((d / "g.json").read_text())
    obj["terms"] = obj["terms"][1:]
    (d / "g.json").write_text(json.dumps(obj, sort_keys=True, indent=1) + "\n")
    code, out, _ = run(capsys, "fixtures", "check", "--fixtures-dir", str(d))
    assert code == 1
    assert "FAIL fixture g" in out


def test_fixtures_check_missing_dir(capsys, tmp_path):
    assert run(capsys, "fixtures", "check", "--fixtures-dir", str(tmp_path / "nope"))[0] == 2


def test_fixture_path_stays_inside(tmp_path):
    with pytest.raises(cli.UsageError):
        cli._fixture_path(tmp_path.resolve(), "../escape")


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "mcforms", "compute", "--h", "1",
                        "--max-degree", "1", "--object", "g"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.startswith("g[0] = 1")
