import json

import pytest

from salemcensus.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCensusCommands:
    def test_deg2_prints_count(self, capsys):
        code, out, _ = run(capsys, "census", "deg2", "--qmax", "10")
        assert code == 0 and out.strip() == "8"

    def test_sr_csv(self, capsys):
        code, out, _ = run(capsys, "census", "sr", "--qmax", "3")
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "a,b,k,lambda,source"
        assert lines[1] == "-1,-3,1,2.36920540709,direct"

    def test_deg4_json_strings_for_integers(self, capsys):
        code, out, _ = run(capsys, "census", "deg4", "--qmax", "2", "--format", "json")
        assert code == 0
        objs = json.loads(out)
        assert {"a": "-1", "b": "-1", "k": None,
                "lambda": pytest.approx(1.722083805739043),
                "source": "direct"} in [
            {**o, "lambda": pytest.approx(o["lambda"])} for o in objs]

    def test_dry_run_plan(self, capsys):
        code, out, _ = run(capsys, "census", "deg4", "--qmax", "1000000", "--dry-run")
        assert code == 0
        assert out.startswith("plan command=census-deg4 qmax=1000000")
        assert "est_items=" in out and "workers=" in out

    def test_plot_data(self, capsys):
        code, out, _ = run(capsys, "census", "sr", "--qmax", "64", "--plot-data")
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "Q,normalized_count"
        assert lines[-1].startswith("64,")


class TestExitCodes:
    def test_usage_error_is_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["census", "deg2"])  # missing --qmax
        assert exc.value.code == 2

    def test_domain_error_is_3(self, capsys):
        code, _, err = run(capsys, "bianchi", "--d", "12", "--qmax", "100")
        assert code == 3
        assert err.count("\n") == 1 and "kind=domain" in err

    def test_qmax_too_small_is_3(self, capsys):
        code, _, err = run(capsys, "census", "deg4", "--qmax", "1")
        assert code == 3 and "kind=domain" in err

    def test_capacity_error_is_4(self, capsys):
        code, _, err = run(capsys, "report", "multiplicity", "--n", "4",
                           "--ell-max", "1000", "--step", "1000")
        assert code == 4 and "kind=capacity" in err


class TestBianchiCommand:
    def test_csv(self, capsys):
        code, out, _ = run(capsys, "bianchi", "--d", "1", "--qmax", "50")
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "A,B,a_lift,b_lift,k,lambda,num_witness_traces"
        assert any(line.startswith("-5,-8,-41,16,10,") for line in lines)

    def test_json_witnesses(self, capsys):
        code, out, _ = run(capsys, "bianchi", "--d", "1", "--qmax", "50",
                           "--format", "json")
        objs = json.loads(out)
        assert code == 0 and all("witnesses" in o for o in objs)


class TestCocompactCommand:
    def test_csv_header_comment(self, capsys):
        code, out, _ = run(capsys, "cocompact", "--field", "2", "--qmax", "10")
        assert code == 0
        lines = out.split("\n")
        assert lines[0] == "# field=2 qmax=10"
        assert lines[1] == "a_u,a_v,k_u,k_v,b_u,b_v,branch,verified"
        assert len(lines) > 400  # 447 solutions

    def test_verified_column(self, capsys):
        code, out, _ = run(capsys, "cocompact", "--field", "2", "--qmax", "5",
                           "--verified")
        assert code == 0
        rows = out.strip().split("\n")[2:]
        assert all(row.rsplit(",", 1)[1] in ("0", "1") for row in rows)


class TestConstantsCommand:
    def test_omega_exact_rational(self, capsys):
        code, out, _ = run(capsys, "constants", "--omega", "1")
        assert code == 0 and out.strip() == "2/1"
        code, out, _ = run(capsys, "constants", "--omega", "2")
        assert out.strip() == "32/9"

    def test_marklof(self, capsys):
        code, out, _ = run(capsys, "constants", "--marklof-c", "1")
        assert code == 0 and out.strip() == "0.785398163397"

    def test_c2_bound(self, capsys):
        code, out, _ = run(capsys, "constants", "--c2-bound", "5")
        assert code == 0 and out.strip().startswith("328.706")

    def test_volume_with_mc(self, capsys):
        code, out, _ = run(capsys, "constants", "--volume", "2", "0", "1")
        assert code == 0 and out.strip() == "volume_leading=128"
        code, out, _ = run(capsys, "constants", "--volume", "2", "1.0", "100",
                           "--mc-samples", "20000", "--seed", "5")
        assert code == 0 and "mc_estimate=" in out and "seed=5" in out

    def test_requires_exactly_one(self, capsys):
        code, _, err = run(capsys, "constants")
        assert code == 3 and "kind=domain" in err

    def test_dry_run(self, capsys):
        code, out, _ = run(capsys, "constants", "--omega", "3", "--dry-run")
        assert code == 0 and out.strip() == "plan command=constants which=omega"


class TestFitCommand:
    def test_deg2_series_is_linear(self, capsys):
        code, out, _ = run(capsys, "fit", "--series", "deg2",
                           "--qgrid", "100,200,400,800,1600")
        assert code == 0
        val = dict(tok.split("=") for tok in out.strip().split("\n")[0].split())
        assert abs(float(val["exponent"]) - 1.0) < 0.02
        assert val["points_used"] == "5"

    def test_plot_data_appended(self, capsys):
        code, out, _ = run(capsys, "fit", "--series", "sr",
                           "--qgrid", "50,100,200", "--plot-data")
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[1] == "Q,normalized_count"
        assert len(lines) == 5

    def test_bianchi_series_requires_d(self, capsys):
        code, _, err = run(capsys, "fit", "--series", "bianchi",
                           "--qgrid", "100,200,400")
        assert code == 3 and "kind=domain" in err


class TestReportCommand:
    def test_multiplicity_csv(self, capsys):
        code, out, _ = run(capsys, "report", "multiplicity", "--n", "4",
                           "--ell-max", "6", "--step", "2")
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "ell,geodesic_count,salem_bound,mean_mult_lower"
        assert len(lines) == 4

    def test_multiplicity_json(self, capsys):
        code, out, _ = run(capsys, "report", "multiplicity", "--n", "6",
                           "--ell-max", "4", "--step", "1", "--format", "json")
        objs = json.loads(out)
        assert code == 0 and len(objs) == 4
        assert all(o["mean_mult_lower"] > 0 for o in objs)


class TestDeterminism:
    def test_workers_env_default(self, capsys, monkeypatch):
        monkeypatch.setenv("SALEM_WORKERS", "2")
        import importlib

        from salemcensus import cli as cli_mod
        importlib.reload(cli_mod)
        code = cli_mod.main(["census", "sr", "--qmax", "100", "--dry-run"])
        out = capsys.readouterr().out
        assert code == 0 and "workers=2" in out
        monkeypatch.delenv("SALEM_WORKERS")
        importlib.reload(cli_mod)

    def test_byte_identical_files_across_workers(self, capsys, tmp_path):
        f1, f2 = tmp_path / "w1.csv", tmp_path / "w2.csv"
        assert main(["census", "sr", "--qmax", "200", "--out", str(f1),
                     "--workers", "1"]) == 0
        assert main(["census", "sr", "--qmax", "200", "--out", str(f2),
                     "--workers", "3"]) == 0
        assert f1.read_bytes() == f2.read_bytes()

    def test_out_files_are_lf_utf8(self, capsys, tmp_path):
        path = tmp_path / "out.csv"
        assert main(["census", "deg4", "--qmax", "5", "--out", str(path)]) == 0
        data = path.read_bytes()
        assert b"\r" not in data and data.endswith(b"\n")
