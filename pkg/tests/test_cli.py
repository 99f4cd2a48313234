import json

import numpy as np
import pytest

from nda.cli import RunRecord, main


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_catalog_lists_every_state(capsys):
    code, out, _ = run(["catalog"], capsys)
    assert code == 0
    for name in ["2P_2p", "3S_1s2s", "1S_1s2_2p2", "harmonic_exact"]:
        assert name in out


def test_compute_json_roundtrip(capsys):
    code, out, _ = run(["compute", "--state", "2P_2p", "--components", "pot,kin",
                        "--samples", "8e4", "--format", "json"], capsys)
    assert code == 0
    rec = RunRecord.from_json(out)
    assert rec.state == "2P_2p"
    assert set(rec.estimates) == {"pot", "kin", "sum"}
    pot = rec.estimates["pot"]
    assert abs(pot["mean"] - (-1 / 6)) < 4 * pot["stderr"]
    assert rec.estimates["sum"]["exact"]["rational"] == "-1/8"
    # sigma_deviation is |mean - exact| / stderr
    assert pot["sigma_deviation"] == pytest.approx(
        abs(pot["mean"] + 1 / 6) / pot["stderr"])


def test_compute_csv_columns(capsys):
    code, out, _ = run(["compute", "--state", "3P_2p2", "--components", "kin",
                        "--method", "quadrature", "--format", "csv"], capsys)
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "state,component,method,mean,stderr,exact,sigma_deviation"
    row = lines[1].split(",")
    assert row[0] == "3P_2p2" and row[2] == "quadrature"
    assert float(row[3]) == pytest.approx(1 / 12, abs=1e-8)
    assert float(row[4]) == 0.0


def test_same_flags_same_output(capsys):
    argv = ["compute", "--state", "3S_1s2s", "--components", "pot",
            "--samples", "4e4", "--format", "json"]
    _, out1, _ = run(argv, capsys)
    _, out2, _ = run(argv, capsys)
    a, b = json.loads(out1), json.loads(out2)
    assert a["estimates"] == b["estimates"]


def test_out_writes_file_and_keeps_stdout_quiet(tmp_path, capsys):
    target = tmp_path / "record.json"
    code, out, _ = run(["compute", "--state", "2P_2p", "--components", "pot",
                        "--samples", "2e4", "--out", str(target)], capsys)
    assert code == 0
    assert out == ""
    rec = RunRecord.from_json(target.read_text())
    assert rec.estimates["pot"]["status"] == "ok"


def test_usage_errors_exit_2(capsys):
    assert run(["compute", "--state", "no_such_state", "--components", "pot"],
               capsys)[0] == 2
    assert run(["frobnicate"], capsys)[0] == 2
    assert run(["compute", "--state", "2P_2p", "--components", "entropy"],
               capsys)[0] == 2
    # surface kinetic requested for a state without a parametrized node
    assert run(["compute", "--state", "2P_2p", "--method", "shell",
                "--chains", "1", "--components", "kin"], capsys)[0] == 2


def test_unconverged_shell_exits_3(capsys):
    code, out, _ = run(["compute", "--state", "2P_2p", "--components", "kin",
                        "--method", "shell", "--chains", "2", "--steps", "400"],
                       capsys)
    assert code == 3
    assert "unconverged" in out


def test_verify_tables_quadrature_passes(capsys):
    code, out, _ = run(["verify-tables", "--method", "quadrature"], capsys)
    assert code == 0
    assert "[PASS]" in out and "FAIL" not in out


def test_verify_tables_flags_large_deviations(capsys, monkeypatch):
    # poison one exact reference value; a correct sampler must now land
    # more than 4 sigma away from it and the command must exit 1
    import dataclasses
    import nda.cli as cli
    real = cli.get_state

    def poisoned(name, **kw):
        s = real(name, **kw)
        return dataclasses.replace(s, exact_nda={"kin": s.exact_nda["kin"],
                                                 "pot": -0.5})
    monkeypatch.setattr(cli, "get_state", poisoned)
    code, out, _ = run(["verify-tables", "--only", "2P_2p", "--samples", "1e5"],
                       capsys)
    assert code == 1
    assert "[FAIL]" in out


def test_domains_command(capsys):
    code, out, _ = run(["domains", "--state", "3P_2p2", "--points", "4000"],
                       capsys)
    assert code == 0
    assert "2 nodal domains" in out


def test_equiv_command_flip(capsys):
    code, out, _ = run(["equiv", "--a", "1D_2p2", "--b", "3P_2p2",
                        "--flip", "x:2", "--points", "20000"], capsys)
    assert code == 0
    assert "equivalent" in out and "1.000000" in out


def test_equiv_flip_and_transform_conflict(capsys):
    code, _, err = run(["equiv", "--a", "1D_2p2", "--b", "3P_2p2",
                        "--flip", "x:2", "--transform", "identity"], capsys)
    assert code == 2


def test_equiv_bad_flip_syntax(capsys):
    code, *_ = run(["equiv", "--a", "1D_2p2", "--b", "3P_2p2",
                    "--flip", "w:9"], capsys)
    assert code == 2


def test_z_override(capsys):
    code, out, _ = run(["compute", "--state", "2P_2p", "--Z", "2",
                        "--components", "kin", "--method", "quadrature",
                        "--format", "csv"], capsys)
    assert code == 0
    kin = float(out.strip().splitlines()[1].split(",")[3])
    assert kin == pytest.approx(4 / 24, abs=1e-8)
