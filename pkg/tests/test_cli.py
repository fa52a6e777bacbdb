import io
import json
from pathlib import Path

import pytest

from eightvertex import cli

GOLDEN = Path(__file__).parent / "golden" / "rmat_q0.5_o8.json"


def run(argv):
    out = io.StringIO()
    code = cli.run(argv, stdout=out)
    return code, out.getvalue()


def test_golden_rmat():
    code, text = run(["rmat", "--q", "0.5", "--order", "8", "--golden", str(GOLDEN)])
    assert code == 0
    assert json.loads(text) == json.loads(GOLDEN.read_text())


def test_golden_mismatch_exits_2(capsys):
    code, _ = run(["rmat", "--q", "0.51", "--order", "8", "--golden", str(GOLDEN)])
    assert code == 2
    assert "golden" in capsys.readouterr().err


def test_output_is_deterministic():
    assert run(["twistor", "--factors", "2"]) == run(["twistor", "--factors", "2"])


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.run(["rmat", "--bogus"])
    assert exc.value.code == 1
    assert run(["rmat", "--q", "1"])[0] == 1
    assert run(["rmat", "--eps", "1.5"])[0] == 1


def test_config_precedence(tmp_path, monkeypatch):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"q": [0.4, 0.0], "order_x": 6}))
    monkeypatch.setenv(cli.CONFIG_ENV, str(cfg))
    args = cli.build_parser().parse_args(["rmat", "--order", "5"])
    resolved = cli.resolve_config(args)
    assert resolved.q == 0.4 and resolved.order_x == 5  # flag beats file


def test_unknown_config_key(tmp_path, monkeypatch):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"colour": 1}))
    monkeypatch.setenv(cli.CONFIG_ENV, str(cfg))
    assert run(["rmat"])[0] == 1


def test_csv_and_output_file(tmp_path):
    target = tmp_path / "ybe.csv"
    code, text = run(["ybe-check", "--order", "16", "--format", "csv", "-o", str(target)])
    assert code == 0 and text == ""
    lines = target.read_text().splitlines()
    assert lines[0].startswith("identity") or "identity" in lines[0]
    assert len(lines) == 4


def test_qkz_and_kz_commands():
    for argv in (["qkz", "solve2", "--flavor", "g", "--order", "12"], ["qkz", "check3"], ["kz", "flat", "--grid", "3"]):
        code, text = run(argv)
        assert code == 0, argv
        json.loads(text)


def test_elliptic_compare_random_points():
    code, text = run(["elliptic-compare", "--points", "3", "--seed", "7"])
    assert code == 0
    assert len(json.loads(text)["points"]) == 3
