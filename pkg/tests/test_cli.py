import json
import subprocess
import sys

import pytest

from commtensor.mtcli.cli import main

BAD = "cat B = table { objects z ; a : z -> z ; b : z -> z ; a.a = b ; a.b = a ; b.a = b ; b.b = b }\n"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_tensor_of_arrows(capsys):
    code, out, _ = run(capsys, "tensor", "categories.spec:arrow", "categories.spec:arrow", "--json")
    rep = json.loads(out)
    assert code == 0 and rep["status"] == "pass"
    assert rep["result"]["morphisms"] == 9 and rep["result"]["objects"] == 4


def test_json_is_deterministic(capsys):
    argv = ("classify", "categories.spec:arrow", "categories.spec:arrow", "categories.spec:idem", "--json")
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    assert json.loads(first)["result"] == {"commuting_sesquifunctors": 10, "tensor_functors": 10}


def test_truncated_exit_code(capsys):
    code, out, _ = run(capsys, "funny-tensor", "categories.spec:z2", "categories.spec:z2")
    assert code == 2 and "truncated" in out


def test_usage_errors(capsys):
    code, _, err = run(capsys, "tensor", "nonexistent.spec")
    assert code == 3 and "no such spec file" in err
    with pytest.raises(SystemExit) as exc:
        main(["not-a-command"])
    assert exc.value.code == 3


def test_failure_with_witness(capsys, tmp_path, monkeypatch):
    (tmp_path / "bad.spec").write_text(BAD)
    monkeypatch.setenv("MT_CORPUS", str(tmp_path))
    code, out, _ = run(capsys, "laws", "bad.spec", "--json")
    rep = json.loads(out)
    assert code == 1 and rep["status"] == "fail"
    assert any("associativity" in w for c in rep["checks"] for w in c.get("witness", []))


def test_flags_between_files(capsys):
    code, _, _ = run(capsys, "hexagon", "categories.spec:arrow", "--budget", "8", "categories.spec:arrow")
    assert code == 0


def test_compose_profunctors(capsys):
    code, out, _ = run(capsys, "compose", "profunctors.spec:Fc", "profunctors.spec:Fs", "--json")
    assert code == 0 and json.loads(out)["result"]["elements"] == 3


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "commtensor.mtcli.cli", "tensor",
                           "categories.spec:arrow", "categories.spec:arrow"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("tensor: pass")
