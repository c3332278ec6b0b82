import json

import jsonschema
import pytest

from integrable import cli

SCHEMA_PATH = "src/integrable/schemas/run_report.schema.json"


def _run(capsys, argv):
    code = cli.main(argv)
    out = capsys.readouterr().out
    return code, out


def _schema():
    import importlib.resources as res

    with res.files("integrable").joinpath(
        "schemas/run_report.schema.json"
    ).open() as fh:
        return json.load(fh)


def test_verify_ybe_pass_exit_zero(capsys):
    code, out = _run(
        capsys,
        ["verify", "ybe", "--family", "r-alpha-beta", "--alpha", "0.5",
         "--beta", "1.0"],
    )
    assert code == 0
    report = json.loads(out)
    assert report["pass"] is True
    jsonschema.validate(report, _schema())


def test_verify_ybe_generic_point_exit_one(capsys):
    code, out = _run(
        capsys,
        ["verify", "ybe", "--family", "r-alpha-beta", "--alpha", "0.5",
         "--beta", "0.5"],
    )
    assert code == 1
    assert json.loads(out)["pass"] is False


def test_usage_error_exit_two(capsys):
    code, _ = _run(capsys, ["verify", "nonsense"])
    assert code == 2
    code, _ = _run(capsys, ["rep-check", "--m", "2"])  # missing --q
    assert code == 2


def test_parameter_error_exit_two(capsys):
    # fused weights at a spectral-ladder pole must refuse, not emit output
    code, out = _run(
        capsys, ["fuse", "--l", "2", "--m", "1", "--z", "0.25", "--q", "0.5"]
    )
    assert code == 2
    assert out == ""


def test_deterministic_json_output(capsys):
    argv = ["mpa", "--L", "3", "--q", "0.5", "--alpha", "0.6", "--beta",
            "0.4", "--gamma", "0.1", "--delta", "0.2"]
    _, out1 = _run(capsys, argv)
    _, out2 = _run(capsys, argv)
    assert out1 == out2
    assert json.loads(out1)["wall_time"] is None


def test_timing_flag_populates_wall_time(capsys):
    code, out = _run(capsys, ["--timing", "rep-check", "--m", "2", "--q", "0.5"])
    assert code == 0
    assert json.loads(out)["wall_time"] > 0


def test_sample6v_deterministic_csv(capsys):
    argv = ["sample6v", "--b1", "0.4", "--b2", "0.7", "--width", "5",
            "--height", "4", "--seed", "3"]
    _, out1 = _run(capsys, argv)
    _, out2 = _run(capsys, argv)
    assert out1 == out2
    assert out1.splitlines()[1] == "x,y,j1,k1,j2,k2"


def test_every_json_subcommand_validates(capsys):
    schema = _schema()
    for argv in (
        ["verify", "spectral", "--q", "0.4"],
        ["verify", "hecke", "--q", "0.7"],
        ["verify", "markov", "--q", "0.4"],
        ["verify", "reflection", "--q", "0.5", "--alpha", "0.6", "--gamma",
         "0.15", "--beta", "0.4", "--delta", "0.2"],
        ["rep-check", "--m", "3", "--q", "0.6"],
        ["universal-r", "--l", "1", "--m", "2", "--q", "0.6"],
        ["asep", "stationary", "--L", "3", "--q", "0.5", "--alpha", "0.6",
         "--beta", "0.4", "--gamma", "0.1", "--delta", "0.2", "--open"],
        ["fuse", "--l", "2", "--m", "2", "--z", "0.3", "--q", "0.5"],
        ["twprob", "--t", "0.5", "--q", "0.4", "--y", "0", "--x", "1"],
        ["oscillator", "hermite", "--n", "4", "--x", "0.3"],
        ["oscillator", "fock", "--cutoff", "6"],
        ["oscillator", "js", "--cutoff", "6"],
    ):
        code, out = _run(capsys, argv)
        assert code == 0, (argv, out)
        jsonschema.validate(json.loads(out), schema)


def test_fuse_csv_table(capsys):
    code, out = _run(
        capsys,
        ["fuse", "--l", "2", "--m", "1", "--z", "0.3", "--q", "0.5", "--csv"],
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("j1,k1,j2,k2")
    # only conserving transitions are listed
    for line in lines[1:]:
        j1, k1, j2, k2 = (int(v) for v in line.split(",")[:4])
        assert j1 + k1 == j2 + k2
