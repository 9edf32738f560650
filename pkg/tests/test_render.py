import re

import pytest

from slimenet.experiment import RunRecord, extract_pareto, write_records
from slimenet.generators import Scenario
from slimenet.graph import CENTER, Edge, Node, SpatialNetwork, build_grid, snap_centers
from slimenet.render import render_pareto_svg, render_svg


def count(tag, text):
    return len(re.findall(rf"<{tag}\b", text))


def test_two_node_network(tmp_path):
    net = SpatialNetwork.from_parts(
        [Node(0, 0.1, 0.1, CENTER), Node(1, 0.9, 0.8, CENTER)], [Edge(0, 1, 1.0, 0.5)]
    )
    render_svg(net, tmp_path / "a.svg")
    text = (tmp_path / "a.svg").read_text()
    assert count("line", text) == 1
    assert count("circle", text) == 2
    assert 'stroke-width="6"' in text


def test_grid_lines_and_determinism(tmp_path):
    net = snap_centers(build_grid(3, 3), [(0, 0)])
    net.set_diameters(0.2)
    render_svg(net, tmp_path / "a.svg")
    render_svg(net, tmp_path / "b.svg")
    text = (tmp_path / "a.svg").read_text()
    assert count("line", text) == 20
    assert (tmp_path / "a.svg").read_bytes() == (tmp_path / "b.svg").read_bytes()


def test_density_background(tmp_path):
    sc = Scenario([(0.2, 0.2), (0.7, 0.6)], density_resolution=8)
    net = snap_centers(build_grid(3, 3), [(0, 0)])
    render_svg(net, tmp_path / "d.svg", sc, show_density=True)
    text = (tmp_path / "d.svg").read_text()
    assert text.count('<g id="density">') == 1
    assert count("rect", text) == 1 + 64
    with pytest.raises(ValueError):
        render_svg(net, tmp_path / "x.svg", None, show_density=True)


def test_unwritable_path(tmp_path):
    net = build_grid(2, 2)
    with pytest.raises(OSError):
        render_svg(net, tmp_path / "missing" / "a.svg")


def _rec(i, gen, length, perf, gamma=1.2, valid=True):
    return RunRecord(i, 0, 1, 3, gamma, gen, length, perf, valid)


def test_scatter_colors_and_invalid(tmp_path):
    rows = [_rec(0, "slime", 0.5, 1.1), _rec(0, "tree", 0.4, 1.2), _rec(0, "complete", 1.0, 1.0),
            _rec(1, "slime", 0.2, 1.3, valid=False)]
    write_records(rows, tmp_path / "r.csv")
    n = render_pareto_svg(tmp_path / "r.csv", tmp_path / "s.svg")
    text = (tmp_path / "s.svg").read_text()
    assert n == 3
    circles = re.findall(r'<circle class="(\w+)"[^>]*fill="(#\w+)"', text)
    assert len(circles) == 3
    assert len({fill for _, fill in circles}) == 3
    assert "relative network length" in text and "relative performance" in text


def test_scatter_radius_tracks_gamma(tmp_path):
    rows = [_rec(0, "slime", 0.5, 1.1, gamma=0.5), _rec(1, "slime", 0.6, 1.0, gamma=2.5)]
    write_records(rows, tmp_path / "r.csv")
    render_pareto_svg(tmp_path / "r.csv", tmp_path / "s.svg")
    radii = [float(r) for r in re.findall(r'class="slime"[^>]* r="([\d.]+)"', (tmp_path / "s.svg").read_text())]
    assert radii[0] < radii[1]


def test_scatter_front_overlay(tmp_path):
    rows = [_rec(k, g, l, p) for k, (g, l, p) in enumerate(
        [("slime", 0.5, 1.1), ("tree", 0.4, 1.2), ("tree", 0.6, 1.3), ("complete", 1.0, 1.0),
         ("slime", 0.45, 1.12)]
    )]
    write_records(rows, tmp_path / "r.csv")
    render_pareto_svg(tmp_path / "r.csv", tmp_path / "s.svg", show_front=True)
    rings = (tmp_path / "s.svg").read_text().count('class="front"')
    assert rings == len(extract_pareto(tmp_path / "r.csv")) == 4
