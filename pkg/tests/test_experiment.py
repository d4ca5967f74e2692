"""Run loop, metrics reconstruction, CSV rendering, and artifact files."""

import json
import os

import numpy as np
import pytest

from allosym import experiment, learning
from allosym.agent import init_agent
from allosym.config import RunConfig

# independent mpmath evaluation of jsd(softmax(scores_A), softmax(scores_B))
# for the default preference templates (beta_energy=4, beta_temp=0.5,
# temperature targets 5 and 0)
JSD_C_INITIAL = 0.2646716084161982


def small_cfg(**overrides) -> RunConfig:
    base = dict(seed=0, total_steps=20, snapshot_interval=5)
    base.update(overrides)
    return RunConfig(**base)


def test_zero_steps_yields_empty_log_and_initial_snapshot():
    res = experiment.run(small_cfg(total_steps=0, snapshot_interval=1))
    assert res.logs == []
    assert len(res.snapshots) == 1
    assert res.snapshots[0]["step"] == 0
    assert np.array_equal(res.E, np.full((5, 15), 0.2))


def test_double_exchange_rows_and_roles():
    n = 12
    res = experiment.run(small_cfg(total_steps=n, snapshot_interval=n))
    assert len(res.logs) == 2 * n
    for i, log in enumerate(res.logs):
        assert log.step == i // 2
        assert log.exchange == i % 2
        if i % 2 == 0:
            assert (log.listener_id, log.speaker_id) == ("A", "B")
        else:
            assert (log.listener_id, log.speaker_id) == ("B", "A")


def test_alternate_steps_rows_and_roles():
    n = 10
    res = experiment.run(
        small_cfg(total_steps=n, snapshot_interval=n, role_scheme="alternate_steps")
    )
    assert len(res.logs) == n
    for i, log in enumerate(res.logs):
        assert log.step == i
        assert log.exchange == 0
        expected = ("A", "B") if i % 2 == 0 else ("B", "A")
        assert (log.listener_id, log.speaker_id) == expected


def test_frozen_rates_keep_preferences_and_interpretation_fixed():
    cfg = small_cfg(total_steps=40, snapshot_interval=20, eta_C=0.0, eta_E=0.0)
    res = experiment.run(cfg)
    init_C = {aid: init_agent(cfg, aid).C for aid in ("A", "B")}
    for aid in ("A", "B"):
        assert np.array_equal(res.agents[aid].C, init_C[aid])
    assert np.array_equal(res.E, np.full((5, 15), 0.2))
    for log in res.logs:
        assert log.jsd_C == pytest.approx(JSD_C_INITIAL, abs=1e-12)
    # likelihood counts still accumulate: one unit of mass per listen
    for aid in ("A", "B"):
        assert res.agents[aid].a_counts.sum() == pytest.approx(
            36 * 36 * cfg.init_count + cfg.total_steps, abs=1e-9
        )


def test_same_seed_reproduces_csv_and_snapshots():
    cfg = small_cfg(total_steps=30, snapshot_interval=10)
    res1 = experiment.run(cfg)
    res2 = experiment.run(cfg)
    assert experiment.render_csv(res1.logs) == experiment.render_csv(res2.logs)
    assert len(res1.snapshots) == len(res2.snapshots)
    for s1, s2 in zip(res1.snapshots, res2.snapshots):
        assert s1["step"] == s2["step"]
        assert np.array_equal(s1["E"], s2["E"])
        for aid in ("A", "B"):
            for key in ("A", "C", "C_scores", "phi"):
                assert np.array_equal(s1["agents"][aid][key], s2["agents"][aid][key])


def test_different_seed_changes_log():
    csv0 = experiment.render_csv(experiment.run(small_cfg(seed=0)).logs)
    csv1 = experiment.render_csv(experiment.run(small_cfg(seed=1)).logs)
    assert csv0 != csv1


def test_metrics_stream_rebuilds_logged_series():
    res = experiment.run(small_cfg(total_steps=50, snapshot_interval=50))
    stream = experiment.metrics_stream(res.logs)
    assert np.array_equal(stream["step"], [log.step for log in res.logs])
    assert np.array_equal(stream["jsd_C"], [log.jsd_C for log in res.logs])
    assert np.array_equal(stream["entA_A"], [log.entA_A for log in res.logs])
    assert np.array_equal(stream["entA_B"], [log.entA_B for log in res.logs])
    assert np.array_equal(
        stream["acceptance_rate"], [log.acc_rate_200 for log in res.logs]
    )


def test_metrics_stream_window_truncates():
    res = experiment.run(small_cfg(total_steps=50, snapshot_interval=50))
    stream = experiment.metrics_stream(res.logs, window=5)
    accepted = np.array([log.accepted for log in res.logs], dtype=float)
    for i in range(len(accepted)):
        lo = max(0, i - 4)
        assert stream["acceptance_rate"][i] == pytest.approx(
            accepted[lo : i + 1].mean(), abs=1e-15
        )


def test_metrics_stream_rejects_empty():
    with pytest.raises(ValueError):
        experiment.metrics_stream([])


def test_phase_column_follows_schedule():
    cfg = small_cfg(total_steps=8, snapshot_interval=8, T_phase=3, first_phase="C")
    res = experiment.run(cfg)
    for log in res.logs:
        expected = "C" if (log.step // 3) % 2 == 0 else "E"
        assert log.phase == expected


def test_render_csv_format_round_trips():
    res = experiment.run(small_cfg(total_steps=5, snapshot_interval=5))
    text = experiment.render_csv(res.logs)
    lines = text.split("\n")
    assert lines[0] == "# columns: " + ",".join(experiment.CSV_COLUMNS)
    assert lines[1] == ",".join(experiment.CSV_COLUMNS)
    assert lines[-1] == ""  # trailing newline
    rows = lines[2:-1]
    assert len(rows) == len(res.logs)
    for row, log in zip(rows, res.logs):
        fields = row.split(",")
        assert len(fields) == len(experiment.CSV_COLUMNS)
        named = dict(zip(experiment.CSV_COLUMNS, fields))
        assert named["accepted"] in ("0", "1")
        assert named["gate_sp"] in ("0", "1")
        assert named["phase"] in ("C", "E")
        # repr floats must round-trip exactly
        assert float(named["r"]) == log.r
        assert float(named["jsd_C"]) == log.jsd_C
        assert int(named["step"]) == log.step
        assert int(named["action"]) == log.action


def test_snapshot_schedule_and_contents():
    res = experiment.run(small_cfg(total_steps=20, snapshot_interval=4))
    assert [s["step"] for s in res.snapshots] == [0, 4, 8, 12, 16, 20]
    first = res.snapshots[0]
    for aid in ("A", "B"):
        assert np.allclose(first["agents"][aid]["A"], 1 / 36, atol=1e-15)
        assert np.array_equal(first["agents"][aid]["phi"], np.full(36, 1 / 36))
    assert np.array_equal(first["E"], np.full((5, 15), 0.2))
    # snapshots are copies, not views of live state
    res.snapshots[-1]["E"][0, 0] = -1.0
    assert res.E[0, 0] != -1.0


def test_write_artifacts_layout(tmp_path):
    cfg = small_cfg(total_steps=10, snapshot_interval=5)
    res = experiment.run(cfg)
    out = str(tmp_path / "run")
    experiment.write_artifacts(res, out)

    with open(os.path.join(out, "meta.json"), encoding="utf-8") as fh:
        meta = json.load(fh)
    assert meta == {"config": cfg.to_dict()}

    with open(os.path.join(out, "log.csv"), encoding="utf-8") as fh:
        assert fh.read() == experiment.render_csv(res.logs)

    expected_files = {
        experiment.snapshot_filename(step, aid)
        for step in (0, 5, 10)
        for aid in ("A", "B")
    }
    assert expected_files == {"snap_000000_A.json", "snap_000000_B.json",
                              "snap_000005_A.json", "snap_000005_B.json",
                              "snap_000010_A.json", "snap_000010_B.json"}
    listed = {name for name in os.listdir(out) if name.startswith("snap_")}
    assert listed == expected_files

    for snap in res.snapshots:
        for aid in ("A", "B"):
            path = os.path.join(out, experiment.snapshot_filename(snap["step"], aid))
            with open(path, encoding="utf-8") as fh:
                payload = json.load(fh)
            assert set(payload) == {"step", "agent", "E"}
            assert set(payload["agent"]) == {"A", "C", "C_scores", "phi"}
            assert payload["step"] == snap["step"]
            assert np.array_equal(payload["E"], snap["E"])
            for key in ("A", "C", "C_scores", "phi"):
                assert np.array_equal(payload["agent"][key], snap["agents"][aid][key])


def test_run_and_write_honors_env_override(tmp_path, monkeypatch):
    target = str(tmp_path / "override")
    monkeypatch.setenv("ALLOSYM_OUT_DIR", target)
    cfg = small_cfg(total_steps=5, snapshot_interval=5)
    out = experiment.run_and_write(cfg)
    assert out == target
    assert os.path.exists(os.path.join(target, "log.csv"))
    assert os.path.exists(os.path.join(target, "meta.json"))


def test_on_exchange_callback_sees_every_exchange():
    seen = []

    def cb(sim, log):
        seen.append((log.step, log.exchange, log.listener_id))
        assert isinstance(sim, experiment.Simulation)

    experiment.run(small_cfg(total_steps=4, snapshot_interval=4), on_exchange=cb)
    assert seen == [
        (0, 0, "A"), (0, 1, "B"),
        (1, 0, "A"), (1, 1, "B"),
        (2, 0, "A"), (2, 1, "B"),
        (3, 0, "A"), (3, 1, "B"),
    ]


def test_gate_column_reflects_speaker_entropy():
    cfg = small_cfg(total_steps=6, snapshot_interval=6)
    res = experiment.run(cfg)
    # fresh agents have mean column entropy ln(36) >> H_thres, so the
    # gate flag must be False on every early row
    assert all(not log.gate_sp for log in res.logs)
