"""Batch grid execution: layout, worker parity, cell isolation."""

import json

from drivebench.harness.batch import cell_dir_name, run_batch
from drivebench.harness.config import BatchSpec

FAST_BASE = {
    "scenario": {
        "route": [0.0, 40.0],
        "max_ticks": 100,
        "traffic": {"n_vehicles": 2},
    }
}


def small_spec(out, workers=1, **kwargs):
    values = dict(
        presets=("good", "fog"),
        rigs=("6cam",),
        seeds=(1,),
        base=FAST_BASE,
        output_dir=out,
        workers=workers,
    )
    values.update(kwargs)
    return BatchSpec(**values)


def test_cell_dir_name():
    assert cell_dir_name("heavy_rain", "3cam_lidar", 7) == "heavy_rain__3cam_lidar__s7"


def test_cells_enumerate_in_grid_order():
    spec = small_spec(None, presets=("a", "b"), rigs=("r1", "r2"), seeds=(1, 2))
    assert spec.cells() == [
        ("a", "r1", 1),
        ("a", "r1", 2),
        ("a", "r2", 1),
        ("a", "r2", 2),
        ("b", "r1", 1),
        ("b", "r1", 2),
        ("b", "r2", 1),
        ("b", "r2", 2),
    ]


def test_batch_writes_index_reports_and_comparison(tmp_path):
    index = run_batch(small_spec(tmp_path / "out"))
    assert index["grid"] == {
        "presets": ["good", "fog"],
        "rigs": ["6cam"],
        "seeds": [1],
    }
    assert [cell["dir"] for cell in index["cells"]] == [
        "good__6cam__s1",
        "fog__6cam__s1",
    ]
    for cell in index["cells"]:
        assert cell["error"] is None
        assert cell["termination"] == "goal_reached"
        report_path = tmp_path / "out" / cell["report"]
        assert report_path.exists()
        report = json.loads(report_path.read_text())
        assert report["config"]["weather"]["name"] == cell["preset"]
    on_disk = json.loads((tmp_path / "out" / "index.json").read_text())
    assert on_disk == index
    comparison = (tmp_path / "out" / "comparison.csv").read_text().splitlines()
    assert len(comparison) == 3
    assert comparison[0].startswith("report,safety_mean")


def test_workers_do_not_change_the_bytes(tmp_path):
    run_batch(small_spec(tmp_path / "seq", workers=1))
    run_batch(small_spec(tmp_path / "par", workers=4))
    for name in (
        "index.json",
        "comparison.csv",
        "good__6cam__s1/report.json",
        "good__6cam__s1/trajectory.jsonl",
        "fog__6cam__s1/report.json",
        "fog__6cam__s1/trajectory.jsonl",
    ):
        seq_bytes = (tmp_path / "seq" / name).read_bytes()
        par_bytes = (tmp_path / "par" / name).read_bytes()
        assert seq_bytes == par_bytes, name


def test_failing_cell_is_isolated(tmp_path, caplog):
    # 50 vehicles cannot spawn on a 60 m road, so the cell raises.
    bad_base = {
        "scenario": {
            "route": [0.0, 40.0],
            "road": {"segments": [{"kind": "straight", "length": 60.0}]},
            "traffic": {"n_vehicles": 50},
        }
    }
    spec = small_spec(tmp_path / "out", base=bad_base)
    with caplog.at_level("ERROR"):
        index = run_batch(spec)
    for cell in index["cells"]:
        assert cell["error"] is not None
        assert cell["error"].startswith("ValueError")
        assert cell["report"] is None
        assert cell["termination"] is None
    assert "failed" in caplog.text
    # No usable reports, so no comparison table.
    assert not (tmp_path / "out" / "comparison.csv").exists()
    assert (tmp_path / "out" / "index.json").exists()


def test_dead_agent_cell_still_produces_a_report(tmp_path):
    bad_base = dict(FAST_BASE, agent="proc:false")
    spec = small_spec(tmp_path / "out", base=bad_base, presets=("good",))
    index = run_batch(spec)
    (cell,) = index["cells"]
    assert cell["error"] is None
    assert cell["termination"] == "agent_failure"
    assert (tmp_path / "out" / cell["report"]).exists()
