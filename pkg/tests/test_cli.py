import json
from importlib import resources

import pytest

from amdahl_lens.cli import main

FIXTURE = str(resources.files("amdahl_lens").joinpath("data/top500_fixture.csv"))


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


class TestAlpha:
    def test_fugaku(self, capsys):
        rep = run_json(capsys, "alpha", "--efficiency", "0.808", "--cores", "7299072")
        assert rep["command"] == "alpha"
        assert rep["results"]["one_minus_alpha"] == pytest.approx(3.25e-8, rel=0.02)

    def test_full_efficiency(self, capsys):
        rep = run_json(capsys, "alpha", "--efficiency", "1", "--cores", "100")
        assert rep["results"]["alpha"] == 1

    def test_summit_from_rmax(self, capsys):
        rep = run_json(capsys, "alpha", "--rmax", "74", "--rpeak", "100", "--cores", "2414592")
        assert rep["results"]["one_minus_alpha"] == pytest.approx(14.7e-8, rel=0.02)

    def test_conflicting_flags(self, capsys):
        assert run(capsys, "alpha", "--efficiency", "0.5", "--speedup", "2", "--cores", "4")[0] == 2

    def test_inconsistent(self, capsys):
        assert run(capsys, "alpha", "--efficiency", "0.001", "--cores", "100")[0] == 3

    def test_unknown_flag(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["alpha", "--bogus"])
        assert info.value.code == 2


class TestBounds:
    def test_all(self, capsys):
        rep = run_json(capsys, "bounds", "--cores", "1000000", "--cluster", "100")
        kinds = {b["kind"] for b in rep["results"]["bounds"]}
        assert {"ClockQuantum", "Propagation", "Addressing", "OsContextSwitch", "InstructionAccess"} <= kinds

    def test_clock(self, capsys):
        rep = run_json(capsys, "bounds", "--kind", "clock")
        (b,) = rep["results"]["bounds"]
        assert 0.5e-13 <= b["one_minus_alpha_bound"] <= 2e-13

    def test_bad_cluster(self, capsys):
        assert run(capsys, "bounds", "--kind", "addressing", "--cores", "10", "--cluster", "20")[0] == 3


class TestDecompose:
    def test_serial_times(self, capsys):
        rep = run_json(capsys, "decompose", "--model", "serial", "--time64", "14.7e-8", "--time16", "11.0e-8")
        assert rep["results"]["f16"] == pytest.approx(1.23e-8, rel=0.01)

    def test_from_efficiencies(self, capsys):
        rep = run_json(capsys, "decompose", "--model", "timeaware", "--eff64", "0.808", "--eff16", "0.691",
                       "--cores", "7299072", "--perf-ratio", "3.42")
        assert rep["results"]["model"] == "timeaware"

    def test_equal_times(self, capsys):
        rep = run_json(capsys, "decompose", "--model", "serial", "--time64", "2e-8", "--time16", "2e-8")
        assert rep["results"]["f16"] == 0

    def test_out_of_band(self, capsys):
        assert run(capsys, "decompose", "--model", "serial", "--time64", "5", "--time16", "1")[0] == 3

    def test_missing_inputs(self, capsys):
        assert run(capsys, "decompose", "--model", "serial", "--time64", "5")[0] == 2


class TestSimulate:
    def test_two_workers(self, capsys):
        rep = run_json(capsys, "simulate", "--n", "2", "--payload", "100")
        assert rep["results"]["total_cycles"] == 104
        assert rep["results"]["alpha_eff"] == pytest.approx(0.96)

    def test_config_file(self, capsys, tmp_path):
        cfg = tmp_path / "sim.json"
        cfg.write_text(json.dumps({"n": 2, "payload_cycles": 100}))
        rep = run_json(capsys, "simulate", "--config", str(cfg))
        assert rep["results"]["total_cycles"] == 104

    def test_sweep(self, capsys):
        rep = run_json(capsys, "simulate", "--payload", "1000", "--looping", "linear", "--lam", "1e-6",
                       "--sweep-log", "2:4194304:64")
        assert 10_000 < rep["results"]["argmax_n"] < 100_000

    def test_sweep_csv(self, capsys):
        code, out, _ = run(capsys, "simulate", "--sweep", "1,2,4", "--format", "csv")
        assert code == 0
        assert len(out.strip().splitlines()) == 4

    def test_missing_config_file(self, capsys, tmp_path):
        assert run(capsys, "simulate", "--config", str(tmp_path / "nope.json"))[0] == 4


class TestPredict:
    def test_surface(self, capsys):
        rep = run_json(capsys, "predict", "--surface", "--n-max", "1e6", "--points", "4", "--oma-points", "3")
        assert len(rep["results"]["surface"]) == 12

    def test_curve_from_fixture(self, capsys):
        rep = run_json(capsys, "predict", "--curve", "--in", FIXTURE, "--points", "8")
        assert len(rep["results"]["curves"]) == 5
        assert rep["warnings"]

    def test_second_order(self, capsys):
        rep = run_json(capsys, "predict", "--curve", "--one-minus-alpha", "1e-7", "--p-single", "1e9",
                       "--looping", "linear", "--lam", "1e-9")
        assert 1 < rep["results"]["curves"][0]["argmax_n"] < 1e9

    def test_validate(self, capsys, tmp_path):
        path = tmp_path / "daint.csv"
        path.write_text("name,epoch,workload,cores_total,cores_used,rpeak_flops,rmax_flops\n"
                        "D,2013-06,HPL,1000,1000,1e13,9e12\nD,2014-06,HPL,2000,2000,2e13,1.7e13\n")
        rep = run_json(capsys, "predict", "--validate", "--in", str(path))
        (row,) = rep["results"]["validation"]
        assert row["n_later"] == 2000

    def test_needs_one_mode(self, capsys):
        assert run(capsys, "predict", "--curve", "--surface")[0] == 2


class TestIngest:
    def test_json(self, capsys):
        rep = run_json(capsys, "ingest", "--in", FIXTURE)
        assert len(rep["results"]["records"]) == 5
        assert {p["name"] for p in rep["results"]["pairs"]} == {"Fugaku", "Summit"}

    def test_csv_columns(self, capsys):
        code, out, _ = run(capsys, "ingest", "--in", FIXTURE, "--format", "csv")
        header = out.splitlines()[0].split(",")
        assert header[:7] == ["name", "epoch", "workload", "cores_total", "cores_used", "rpeak_flops", "rmax_flops"]
        assert {"efficiency", "one_minus_alpha", "corrected_efficiency"} <= set(header)

    def test_missing_file(self, capsys, tmp_path):
        assert run(capsys, "ingest", "--in", str(tmp_path / "none.csv"))[0] == 4

    def test_parse_error(self, capsys, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("name,epoch,workload,cores_total,cores_used,rpeak_flops,rmax_flops\nA,2020-06,HPL,10,10,1,2\n")
        code, _, err = run(capsys, "ingest", "--in", str(bad))
        assert code == 3 and "line 2" in err

    def test_out_file_and_determinism(self, capsys, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        assert main(["ingest", "--in", FIXTURE, "--out", str(a)]) == 0
        assert main(["ingest", "--in", FIXTURE, "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_unwritable_out(self, capsys, tmp_path):
        assert run(capsys, "ingest", "--in", FIXTURE, "--out", str(tmp_path / "no" / "dir.json"))[0] == 4

    def test_digest_tracks_content(self, capsys, tmp_path):
        copy = tmp_path / "copy.csv"
        copy.write_bytes(open(FIXTURE, "rb").read())
        assert run_json(capsys, "ingest", "--in", FIXTURE)["inputs_digest"] == \
            run_json(capsys, "ingest", "--in", str(copy))["inputs_digest"]
        copy.write_text(copy.read_text().replace("2.926e15", "2.927e15"))
        assert run_json(capsys, "ingest", "--in", FIXTURE)["inputs_digest"] != \
            run_json(capsys, "ingest", "--in", str(copy))["inputs_digest"]
