import json
import os

import pytest

import main
from fibnormal.checkpoint.checkpoint_manager import CheckpointPolicy
from fibnormal.engine.stream import stream_analyze


@pytest.fixture(autouse=True)
def no_output_dir(monkeypatch):
    monkeypatch.delenv("FIBNORMAL_OUTPUT_DIR", raising=False)


def run_json(capsys, *argv):
    status = main.main(["--quiet", *argv, "--format", "json"])
    out = capsys.readouterr().out
    return status, json.loads(out)


def test_analyze_json(capsys):
    status, report = run_json(capsys, "analyze", "--base", "10", "--terms", "10", "--k-max", "2")
    assert status == main.EXIT_OK
    assert report["schema_version"] == 1
    assert report["command"] == "analyze"
    assert report["summary"]["D"] == 14
    digits = report["tables"]["digits"]
    assert [row["count"] for row in digits] == [0, 4, 2, 3, 1, 3, 0, 0, 1, 0]
    blocks = report["tables"]["blocks"]
    assert [b["k"] for b in blocks] == [1, 2]
    assert round(blocks[0]["naive_chi2"], 2) == 14.57


def test_analyze_positional_text(capsys):
    status = main.main(["--quiet", "analyze", "--base", "2", "--terms", "50", "--k-max", "2",
                        "--positional", "--format", "text"])
    out = capsys.readouterr().out
    assert status == main.EXIT_OK
    assert out.startswith("fibnormal analyze")
    assert "[positional]" in out and "[top_boundary_blocks]" in out


def test_analyze_csv_sections(capsys):
    status = main.main(["--quiet", "analyze", "--terms", "20", "--k-max", "1", "--format", "csv"])
    out = capsys.readouterr().out
    assert status == main.EXIT_OK
    assert out.startswith("# digits\ndigit,count,frequency,deviation,z_score\n")
    assert "\n# blocks\n" in out


def test_scientific_term_counts():
    assert main._int_arg("1e3") == 1000
    assert main._int_arg("10**4") == 10000
    assert main._int_arg("1_000") == 1000


def test_partitioned_analyze_matches_sequential(capsys):
    _, sequential = run_json(capsys, "analyze", "--terms", "200", "--k-max", "2")
    _, partitioned = run_json(capsys, "analyze", "--terms", "200", "--k-max", "2", "--partitions", "2")
    assert partitioned["tables"]["digits"] == sequential["tables"]["digits"]
    assert partitioned["tables"]["blocks"] == sequential["tables"]["blocks"]


def test_evolution_with_fit(capsys):
    status, report = run_json(capsys, "evolution", "--base", "2", "--points", "10,100,1000")
    assert status == main.EXIT_OK
    assert [row["D"] for row in report["tables"]["evolution"]] == [34, 3442, 346809]
    assert report["summary"]["exponent"] < 0


def test_per_term(capsys):
    status, report = run_json(capsys, "per-term", "--terms", "300", "--epsilons", "0.05,0.01")
    assert status == main.EXIT_OK
    assert [row["epsilon"] for row in report["tables"]["census"]] == [0.05, 0.01]
    assert "baseline_ratio" in report["tables"]


def test_regress_points(capsys):
    status, report = run_json(capsys, "regress", "--point", "100,0.1", "--point", "10000,0.01",
                              "--point", "1000000,0.001")
    assert status == main.EXIT_OK
    assert report["summary"]["exponent"] == pytest.approx(-0.5)
    assert report["summary"]["points"] == 3


def test_regress_points_file(capsys, tmp_path):
    path = tmp_path / "points.txt"
    path.write_text("D,dev\n# deviation table\n1071,2.98e-02\n104750,2.11e-03\n10451934,2.87e-04\n")
    status, report = run_json(capsys, "regress", "--points-file", str(path))
    assert status == main.EXIT_OK
    assert report["summary"]["points"] == 3


def test_counterexample(capsys):
    status, report = run_json(capsys, "counterexample", "--columns", "100")
    assert status == main.EXIT_OK
    assert report["summary"]["off_diagonal_count"] == 99
    assert len(report["tables"]["digits"]) == 10


def test_sigma_census(capsys):
    status, report = run_json(capsys, "sigma-census", "--max-index", "40", "--value-cap", "1e9")
    assert status == main.EXIT_OK
    rows = report["tables"]["census"]
    assert rows[5] == {"n": 6, "F_n": 8, "in_range": True, "witness": 7, "index_multiple_of_6": True,
                       "multiple_of_6": False, "exception": False}
    assert report["summary"]["hits"] == sum(r["in_range"] for r in rows)


def test_baselines_and_criterion(capsys):
    status, report = run_json(capsys, "baselines", "--base", "10", "--terms", "100")
    assert status == main.EXIT_OK
    assert report["summary"]["pisano_period"] == 60
    assert report["tables"]["trailing"][0]["fraction"] == "1/15"
    status, report = run_json(capsys, "criterion", "--base", "10", "--terms", "1000")
    assert status == main.EXIT_OK
    assert report["summary"]["total_digits"] == 104750


def test_output_dir_from_environment(capsys, monkeypatch, tmp_path):
    monkeypatch.setenv("FIBNORMAL_OUTPUT_DIR", str(tmp_path))
    status = main.main(["--quiet", "criterion", "--terms", "100", "--format", "json"])
    assert status == main.EXIT_OK
    assert capsys.readouterr().out == ""
    with open(tmp_path / "criterion.json", encoding="utf-8") as f:
        assert json.load(f)["summary"]["total_digits"] == 1071


def test_explicit_output_path(tmp_path):
    target = tmp_path / "out" / "report.csv"
    assert main.main(["--quiet", "counterexample", "--columns", "10", "--output", str(target),
                      "--format", "csv"]) == main.EXIT_OK
    assert os.path.exists(target)


def test_config_file_supplies_defaults(capsys, tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"analysis": {"base": 2, "terms": 10, "k_max": 1}}))
    status, report = run_json(capsys, "--config", str(path), "analyze")
    assert status == main.EXIT_OK
    assert report["summary"]["D"] == 34


def test_usage_errors(capsys):
    assert main.main([]) == main.EXIT_USAGE
    assert main.main(["--quiet", "analyze", "--base", "1", "--terms", "10"]) == main.EXIT_USAGE
    assert main.main(["--quiet", "analyze", "--terms", "10", "--resume"]) == main.EXIT_USAGE
    with pytest.raises(SystemExit) as info:
        main.main(["analyze", "--terms", "ten"])
    assert info.value.code == 2


def test_bad_config_file(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    assert main.main(["--quiet", "--config", str(path), "criterion"]) == main.EXIT_USAGE


def test_capacity_errors():
    assert main.main(["--quiet", "analyze", "--base", "256", "--terms", "10", "--k-max", "4"]) == main.EXIT_CAPACITY
    assert main.main(["--quiet", "sigma-census", "--max-index", "40", "--value-cap", "1000"]) == main.EXIT_CAPACITY


def test_checkpoint_errors(tmp_path):
    path = tmp_path / "state.ckpt"
    path.write_bytes(b"FIBCKPT\0garbage")
    argv = ["--quiet", "analyze", "--terms", "50", "--k-max", "2", "--checkpoint", str(path), "--resume"]
    assert main.main(argv) == main.EXIT_IO


def test_checkpointed_analyze_resumes(capsys, tmp_path):
    path = str(tmp_path / "state.ckpt")
    stream_analyze(10, 40, k_max=2, checkpoint_policy=CheckpointPolicy(path))
    _, resumed = run_json(capsys, "analyze", "--terms", "80", "--k-max", "2", "--checkpoint", path, "--resume")
    _, fresh = run_json(capsys, "analyze", "--terms", "80", "--k-max", "2")
    assert resumed["tables"]["digits"] == fresh["tables"]["digits"]


@pytest.mark.slow
def test_golden_suite(capsys):
    status = main.main(["--quiet", "--golden", "--golden-terms", "1000"])
    out = capsys.readouterr().out
    assert status == main.EXIT_OK, out
    assert "failed" in out


def write_analyze(path, *argv):
    assert main.main(["--quiet", "analyze", "--k-max", "2", *argv, "--format", "json",
                      "--output", str(path)]) == main.EXIT_OK
    return path.read_bytes()


def test_equal_runs_write_identical_reports(tmp_path):
    first = write_analyze(tmp_path / "a.json", "--terms", "2000")
    second = write_analyze(tmp_path / "b.json", "--terms", "2000")
    assert first == second
    assert b"digits_per_second" not in first


def test_resumed_report_is_byte_identical(tmp_path):
    state = str(tmp_path / "state.ckpt")
    write_analyze(tmp_path / "half.json", "--terms", "1000", "--checkpoint", state)
    resumed = write_analyze(tmp_path / "resumed.json", "--terms", "2000", "--checkpoint", state, "--resume")
    fresh = write_analyze(tmp_path / "fresh.json", "--terms", "2000")
    assert resumed == fresh


@pytest.mark.parametrize("base, k_max", [(10, 3), (2, 4)])
def test_positional_rows_carry_serial_statistic(capsys, base, k_max):
    status, report = run_json(capsys, "analyze", "--base", str(base), "--terms", "300",
                              "--k-max", str(k_max), "--positional")
    assert status == main.EXIT_OK
    rows = {(row["k"], row["category"]): row for row in report["tables"]["positional"]}
    for (k, category), row in rows.items():
        if k == 1:
            assert row.get("good_delta_chi2") is None
            continue
        assert row["good_df"] == base ** k - base ** (k - 1)
        previous = rows[(k - 1, category)]
        chi2_prev = previous["chi2"] if previous["count"] else 0.0
        assert row["good_delta_chi2"] == pytest.approx(row["chi2"] - chi2_prev)
    if base == 10:
        assert rows[(2, "middle")]["good_df"] == 90
        assert rows[(3, "middle")]["good_df"] == 900


@pytest.mark.parametrize("flag", ["--max-index", "--value-cap"])
def test_sigma_census_rejects_zero(capsys, flag):
    assert main.main(["--quiet", "sigma-census", flag, "0", "--format", "json"]) == main.EXIT_USAGE
    assert capsys.readouterr().out == ""


def test_golden_report_formats(capsys, tmp_path):
    status = main.main(["--quiet", "--golden", "--golden-terms", "100", "--format", "json"])
    report = json.loads(capsys.readouterr().out)
    assert status == main.EXIT_OK
    assert report["command"] == "golden"
    assert report["summary"]["failed"] == 0
    target = tmp_path / "golden.csv"
    assert main.main(["--quiet", "--golden", "--golden-terms", "100", "--format", "csv",
                      "--output", str(target)]) == main.EXIT_OK
    assert target.read_text().startswith("name,expected,observed,passed\n")


def test_format_before_subcommand(capsys):
    status = main.main(["--quiet", "--format", "json", "criterion", "--terms", "100"])
    assert status == main.EXIT_OK
    assert json.loads(capsys.readouterr().out)["summary"]["total_digits"] == 1071
