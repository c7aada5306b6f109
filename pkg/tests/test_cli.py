import csv
import io
import json
from pathlib import Path

import pytest

from secrecy_region import cli
from secrecy_region.optima import critical_power
from secrecy_region.model import ChannelParams

GOLDEN = Path(__file__).parent / "golden"
FIG2 = ["--a", "1", "--ac", "0.05", "--n", "1"]


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_maxmin(capsys):
    code, out, _ = run(capsys, "maxmin", *FIG2, "--p", "100")
    assert code == 0
    (row,) = rows(out)
    assert float(row["r_min_star"]) == pytest.approx(2.4627, abs=5e-5)
    assert float(row["p_min_star"]) == pytest.approx(18.1, abs=0.05)
    assert row["power_limited"] == "false"


def test_maxmin_power_limited(capsys):
    code, out, _ = run(capsys, "maxmin", *FIG2, "--p", "10")
    (row,) = rows(out)
    assert code == 0 and row["power_limited"] == "true" and row["p_star"] == "10"


def test_maxmin_lambda_choice(capsys):
    code, out, _ = run(capsys, "maxmin", *FIG2, "--p", "100", "--lambda", "0.02")
    (row,) = rows(out)
    assert code == 0 and float(row["chosen_lambda"]) == 0.02


@pytest.mark.parametrize("cmd", ["maxmin", "single-user", "critical", "verify"])
def test_rejects_weak_direct_channel(capsys, cmd):
    code, _, err = run(capsys, cmd, "--a", "0.5", "--ac", "0.6", "--n", "1", "--p", "10")
    assert code == cli.EXIT_INPUT
    assert "direct gain must exceed cross gain" in err


def test_bad_lambda_exit_code(capsys):
    code, _, err = run(capsys, "maxmin", *FIG2, "--p", "100", "--lambda", "0.5")
    assert code == cli.EXIT_INPUT and "admissible" in err


def test_single_user(capsys):
    code, out, _ = run(capsys, "single-user", *FIG2, "--p", "100")
    (row,) = rows(out)
    assert code == 0
    assert float(row["r_su_star"]) == pytest.approx(5.544, abs=5e-4)
    assert (row["p1"], row["lambda1"], row["lambda2"]) == ("100", "0", "1")
    code, out2, _ = run(capsys, "single-user", *FIG2, "--p", "100", "--user", "2")
    (row2,) = rows(out2)
    assert row2["r_su_star"] == row["r_su_star"]
    assert (row2["p1"], row2["p2"]) == (row["p2"], row["p1"])


def test_critical(capsys):
    P_c = critical_power(ChannelParams(1.0, 0.05, 1.0))
    code, out, _ = run(capsys, "critical", *FIG2, "--p-list", f"30,{P_c!r},100")
    assert code == 0
    table = rows(out)
    assert [r["mode"] for r in table] == ["maxmin", "tie", "timeshare"]
    assert float(table[0]["p_c"]) == pytest.approx(53.2, abs=0.05)


def test_critical_default_row(capsys):
    code, out, _ = run(capsys, "critical", *FIG2)
    (row,) = rows(out)
    assert row["mode"] == "tie"


def test_critical_near_equal_gains(capsys):
    code, out, _ = run(capsys, "critical", "--a", "1", "--ac", "0.999999", "--n", "1")
    assert float(rows(out)[0]["p_c"]) < 1e-5


def test_json_output(capsys):
    code, out, _ = run(capsys, "maxmin", *FIG2, "--p-list", "10,100", "--format", "json")
    doc = json.loads(out)
    assert [r["power_limited"] for r in doc["rows"]] == [True, False]
    assert doc["config"]["ac"] == 0.05


def test_config_file_and_override(tmp_path, capsys):
    conf = tmp_path / "run.conf"
    conf.write_text("# fig 2 channel\na = 1\nac = 0.05\nn = 1\np-list = 10,100\n")
    code, out, _ = run(capsys, "maxmin", "--config", str(conf))
    assert [r["p"] for r in rows(out)] == ["10", "100"]
    code, out, _ = run(capsys, "maxmin", "--config", str(conf), "--p-list", "50")
    assert [r["p"] for r in rows(out)] == ["50"]


def test_config_unknown_key(tmp_path, capsys):
    conf = tmp_path / "run.conf"
    conf.write_text("colour = blue\n")
    code, _, err = run(capsys, "maxmin", "--config", str(conf))
    assert code == cli.EXIT_INPUT and "colour" in err


def test_out_file(tmp_path, capsys):
    target = tmp_path / "mm.csv"
    code, out, _ = run(capsys, "maxmin", *FIG2, "--p", "100", "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_text().startswith("a,ac,n,p,r_min_star")


def test_deterministic_bytes(capsys):
    outs = [run(capsys, "maxmin", *FIG2, "--p-list", "10,30,100", "--format", "json")[1]
            for _ in range(2)]
    assert outs[0] == outs[1]


def _region(tmp_path, capsys, *extra):
    code, out, _ = run(capsys, "region", "--grid-power", "11", "--grid-lambda", "5",
                       "--out", str(tmp_path), *extra)
    assert code == 0
    return out


@pytest.mark.parametrize("sweep,args", [
    ("fig2", [*FIG2, "--p-list", "30,100"]),
    ("fig3", ["--a", "1", "--n", "1", "--p", "100", "--ac-list", "0.01,0.2"]),
])
def test_region_golden(tmp_path, capsys, sweep, args):
    index = rows(_region(tmp_path, capsys, *args))
    golden = sorted(p.name for p in (GOLDEN / sweep).iterdir())
    assert sorted(r["file"] for r in index) == golden
    for name in golden:
        assert (tmp_path / name).read_text() == (GOLDEN / sweep / name).read_text()


def test_region_schema(tmp_path, capsys):
    _region(tmp_path, capsys, *FIG2, "--p", "30")
    text = (tmp_path / "region_a1_ac0.05_n1_p30_an.csv").read_text()
    table = rows(text)
    assert text.splitlines()[0] == "r1,r2,kind"
    assert {r["kind"] for r in table} == {"frontier", "hull"}


def test_region_zero_power(tmp_path, capsys):
    index = rows(_region(tmp_path, capsys, *FIG2, "--p", "0", "--no-an"))
    (entry,) = index
    table = rows((tmp_path / entry["file"]).read_text())
    assert {(r["r1"], r["r2"]) for r in table} == {("0", "0")}


def test_region_json(tmp_path, capsys):
    _region(tmp_path, capsys, *FIG2, "--p", "100", "--format", "json")
    doc = json.loads((tmp_path / "region_a1_ac0.05_n1_p100_an.json").read_text())
    assert doc["with_artificial_noise"] is True
    assert doc["hull"][0] == [0.0, 0.0]
    assert doc["config"]["p"] == 100.0
    assert doc["grid"]["n_power"] == 11


def test_region_plot(tmp_path, capsys):
    index = rows(_region(tmp_path, capsys, *FIG2, "--p-list", "30,100", "--plot"))
    assert index[-1]["file"] == "region_p_sweep.png"
    assert (tmp_path / "region_p_sweep.png").read_bytes()[:4] == b"\x89PNG"


def test_region_needs_power(tmp_path, capsys):
    code, _, err = run(capsys, "region", *FIG2, "--out", str(tmp_path))
    assert code == cli.EXIT_INPUT


def test_verify_passes(capsys):
    code, out, _ = run(capsys, "verify", *FIG2, "--p", "100", "--draws", "2", "--seed", "3")
    assert code == cli.EXIT_OK
    assert out.splitlines()[-1] == "PASS overall"
    assert not any(line.startswith("FAIL") for line in out.splitlines())


def test_verify_failure_exit_code(capsys, monkeypatch):
    from secrecy_region import optima, verify

    def wrong_maxmin(ch, P, lambda_choice=None):
        sol = optima.maxmin_point(ch, P, lambda_choice)
        return sol.__class__(**{**sol.__dict__, "r_min_star": sol.r_min_star * 1.01})

    monkeypatch.setattr(verify, "run_checks", _rebind(verify.run_checks, wrong_maxmin))
    code, out, _ = run(capsys, "verify", *FIG2, "--p", "100")
    assert code == cli.EXIT_VERIFY
    assert "FAIL maxmin-vs-oracle" in out and out.splitlines()[-1] == "FAIL overall"


def _rebind(fn, maxmin_fn):
    def wrapped(*args, **kwargs):
        kwargs["maxmin_fn"] = maxmin_fn
        return fn(*args, **kwargs)
    return wrapped
