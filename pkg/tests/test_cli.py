"""Command-line entry points, exercised in process through main()."""

import json

import yaml

from drivebench.harness.cli import main

FAST_RUN = {
    "scenario": {
        "route": [0.0, 40.0],
        "max_ticks": 100,
        "traffic": {"n_vehicles": 0},
    }
}


def write_yaml(path, data):
    path.write_text(yaml.safe_dump(data))
    return str(path)


def test_run_prints_scores_and_exits_zero(tmp_path, capsys):
    config = write_yaml(tmp_path / "run.yaml", FAST_RUN)
    code = main(["run", "--config", config])
    out = capsys.readouterr().out
    assert code == 0
    assert "termination: goal_reached" in out
    assert "aggregate" in out


def test_run_writes_outputs_and_honours_overrides(tmp_path, capsys):
    config = write_yaml(tmp_path / "run.yaml", FAST_RUN)
    out_dir = tmp_path / "artifacts"
    code = main(
        [
            "run",
            "--config",
            config,
            "--weather",
            "fog",
            "--rig",
            "3cam+lidar",
            "--seed",
            "9",
            "--output-dir",
            str(out_dir),
        ]
    )
    assert code == 0
    assert "outputs:" in capsys.readouterr().out
    report = json.loads((out_dir / "report.json").read_text())
    assert report["config"]["weather"]["name"] == "fog"
    assert report["config"]["rig"]["name"] == "3cam+lidar"
    assert report["config"]["scenario"]["seed"] == 9


def test_run_timeout_exit_code(tmp_path, capsys):
    data = {"scenario": {"route": [0.0, 500.0], "max_ticks": 20}}
    config = write_yaml(tmp_path / "run.yaml", data)
    assert main(["run", "--config", config]) == 3
    assert "termination: timeout" in capsys.readouterr().out


def test_run_with_unstartable_agent_exits_four(tmp_path, capsys):
    config = write_yaml(tmp_path / "run.yaml", FAST_RUN)
    code = main(
        ["run", "--config", config, "--agent", "proc:/no/such/binary-anywhere"]
    )
    assert code == 4
    assert "agent channel unusable" in capsys.readouterr().err


def test_run_rejects_bad_config(tmp_path, capsys):
    config = write_yaml(tmp_path / "run.yaml", {"weather": "blizzard"})
    assert main(["run", "--config", config]) == 1
    assert capsys.readouterr().err.startswith("error:")


def test_print_config_round_trips(capsys):
    assert main(["print-config"]) == 0
    out = capsys.readouterr().out
    data = yaml.safe_load(out)
    assert data["weather"] == "good"
    assert data["rig"] == "6cam"
    assert data["agent"] == "builtin:baseline"
    assert data["scenario"]["seed"] == 1


def test_rescore_to_stdout_matches_report(tmp_path, capsys):
    config = write_yaml(tmp_path / "run.yaml", FAST_RUN)
    out_dir = tmp_path / "artifacts"
    main(["run", "--config", config, "--output-dir", str(out_dir)])
    capsys.readouterr()
    assert main(["rescore", "--log", str(out_dir / "trajectory.jsonl")]) == 0
    rendered = capsys.readouterr().out
    assert rendered == (out_dir / "report.json").read_text()


def test_rescore_with_overrides_to_file(tmp_path, capsys):
    config = write_yaml(tmp_path / "run.yaml", FAST_RUN)
    out_dir = tmp_path / "artifacts"
    main(["run", "--config", config, "--output-dir", str(out_dir)])
    capsys.readouterr()
    dest = tmp_path / "rescored.json"
    code = main(
        [
            "rescore",
            "--log",
            str(out_dir / "trajectory.jsonl"),
            "--tau-th",
            "8.0",
            "--style",
            "cautious",
            "--v-limit",
            "10.0",
            "--out",
            str(dest),
        ]
    )
    assert code == 0
    report = json.loads(dest.read_text())
    assert report["params"]["ttc_threshold"] == 8.0
    assert report["params"]["comfort_refs"]["accel"] == 1.0
    assert report["params"]["speed_limit"] == 10.0


def test_rescore_missing_log_is_a_plain_error(tmp_path, capsys):
    assert main(["rescore", "--log", str(tmp_path / "nope.jsonl")]) == 1
    assert capsys.readouterr().err.startswith("error:")


def test_batch_and_compare_flow(tmp_path, capsys):
    spec = write_yaml(
        tmp_path / "spec.yaml",
        {
            "presets": ["good", "storm"],
            "rigs": ["6cam"],
            "seeds": [1],
            "output_dir": str(tmp_path / "grid"),
            "base": FAST_RUN,
        },
    )
    assert main(["batch", "--spec", spec]) == 0
    out = capsys.readouterr().out
    assert "good__6cam__s1" in out
    assert "index:" in out

    reports = [
        str(tmp_path / "grid" / "good__6cam__s1" / "report.json"),
        str(tmp_path / "grid" / "storm__6cam__s1" / "report.json"),
    ]
    assert main(["compare", *reports]) == 0
    table = capsys.readouterr().out
    assert "safety mean" in table
    assert "pairwise CDF dominance" in table


def test_compare_with_one_report_fails(tmp_path, capsys):
    report = tmp_path / "r.json"
    report.write_text("{}")
    assert main(["compare", str(report)]) == 1
    assert "at least 2" in capsys.readouterr().err
