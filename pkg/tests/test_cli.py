import json
import subprocess
import sys

from slimenet import experiment as exp
from slimenet.cli import main
from slimenet.experiment import read_records
from slimenet.generators import Scenario
from slimenet.graph import load_network
from slimenet.physarum import SingularNetworkError


def test_grid_command(tmp_path, capsys):
    code = main(["grid", "--grid", "3x3", "--centers", "0,0;1,1",
                 "--nodes", str(tmp_path / "n.csv"), "--edges", str(tmp_path / "e.csv")])
    assert code == 0
    net = load_network(tmp_path / "n.csv", tmp_path / "e.csv")
    assert net.n_edges == 20 and net.center_ids() == [0, 8]
    assert "9 nodes, 20 edges" in capsys.readouterr().out


def test_generate_each_generator(tmp_path, capsys):
    Scenario([(0.1, 0.2), (0.8, 0.3), (0.4, 0.9)], seed=5).save(tmp_path / "s.json")
    for gen in ("tree", "complete", "slime"):
        prefix = tmp_path / gen
        code = main(["generate", "--scenario", str(tmp_path / "s.json"), "--generator", gen,
                     "--grid", "8x8", "--tf", "400", "--density", "--out", str(prefix)])
        assert code == 0
        out = json.loads(capsys.readouterr().out)
        assert out["generator"] == gen
        assert (tmp_path / f"{gen}.svg").exists()
        net = load_network(f"{prefix}_nodes.csv", f"{prefix}_edges.csv")
        assert net.n_edges == out["edges"]
    assert out["connected"]


def test_run_with_trajectory(tmp_path, capsys):
    main(["grid", "--grid", "5x5", "--centers", "0,0;1,1;0,1",
          "--nodes", str(tmp_path / "n.csv"), "--edges", str(tmp_path / "e.csv")])
    capsys.readouterr()
    code = main(["run", "--nodes", str(tmp_path / "n.csv"), "--edges", str(tmp_path / "e.csv"),
                 "--tf", "30", "--seed", "3", "--trajectory", str(tmp_path / "t.csv"),
                 "--out", str(tmp_path / "r")])
    assert code == 0
    assert json.loads(capsys.readouterr().out)["iterations"] == 30
    lines = (tmp_path / "t.csv").read_text().splitlines()
    assert lines[0] == "step,total_abs_change,visible_length" and len(lines) == 31
    assert (tmp_path / "r_diameters.csv").exists() and (tmp_path / "r_design.svg").exists()


def experiment_args(tmp_path, name, workers=1):
    return ["experiment", "--lhs", "2", "--reps", "2", "--n-min", "2", "--n-max", "3",
            "--grid", "5x5", "--tf", "20", "--seed", "4", "--workers", str(workers),
            "--out", str(tmp_path / name)]


def test_experiment_pareto_render(tmp_path, capsys):
    assert main(experiment_args(tmp_path, "a.csv")) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["complete"]["runs"] == 4
    assert len(read_records(tmp_path / "a.csv")) == 12
    assert main(["pareto", "--in", str(tmp_path / "a.csv"), "--out", str(tmp_path / "f.csv")]) == 0
    assert main(["render", "scatter", "--in", str(tmp_path / "a.csv"), "--front",
                 "--out", str(tmp_path / "s.svg")]) == 0
    assert 'class="front"' in (tmp_path / "s.svg").read_text()


def test_experiment_invalid_runs_exit_3(tmp_path, monkeypatch):
    def boom(*a, **k):
        raise SingularNetworkError("disconnected")

    monkeypatch.setattr(exp, "slime_network", boom)
    assert main(experiment_args(tmp_path, "b.csv")) == 3


def test_render_network(tmp_path):
    main(["grid", "--grid", "3x3", "--nodes", str(tmp_path / "n.csv"), "--edges", str(tmp_path / "e.csv")])
    assert main(["render", "network", "--nodes", str(tmp_path / "n.csv"), "--edges", str(tmp_path / "e.csv"),
                 "--out", str(tmp_path / "g.svg")]) == 0
    assert (tmp_path / "g.svg").read_text().count("<line") == 20


def test_exit_codes(tmp_path, capsys):
    assert main(["experiment", "--lhs", "0", "--out", str(tmp_path / "x.csv")]) == 1
    assert main(["pareto", "--in", str(tmp_path / "missing.csv"), "--out", str(tmp_path / "f.csv")]) == 2
    (tmp_path / "n.csv").write_text("id,x,y,kind\n0,0,0,regular\n")
    (tmp_path / "e.csv").write_text("src,dst\n0,5\n")
    assert main(["render", "network", "--nodes", str(tmp_path / "n.csv"), "--edges", str(tmp_path / "e.csv"),
                 "--out", str(tmp_path / "g.svg")]) == 2
    assert "e.csv:2" in capsys.readouterr().err
    assert main(["render", "scatter", "--out", str(tmp_path / "s.svg")]) == 1


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "slimenet", "--help"], capture_output=True, text=True)
    assert out.returncode == 0 and "experiment" in out.stdout
