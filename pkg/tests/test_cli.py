import json
import subprocess
import sys

import numpy as np
import pytest

from kcluster.cli import main
from kcluster.filtration import compute_k_cluster, read_diagram
from kcluster.graph import PointCloud, point_cloud_to_graph, write_edge_list, write_point_cloud


@pytest.fixture
def path_file(tmp_path):
    p = tmp_path / "path.csv"
    p.write_text("# a-b-c-d\n0,1,1\n1,2,3\n2,3,2\n")
    return p


@pytest.fixture
def cloud(tmp_path):
    pc = PointCloud(np.random.default_rng(0).random((60, 2)))
    p = tmp_path / "pts.csv"
    write_point_cloud(p, pc)
    return pc, p


def lines(p):
    return p.read_text().splitlines()


def test_pd_path(path_file, tmp_path):
    out = tmp_path / "o"
    assert main(["pd", str(path_file), "--k", "2", "--out", str(out)]) == 0
    assert lines(out / "diagram.csv") == ["birth,death,representative", "2,3,2", "1,inf,0"]
    assert lines(out / "filtration.csv")[1:] == ["0,1", "1,1", "2,2", "3,2"]
    assert lines(out / "mst.csv")[0] == "u,v,w"
    assert len(lines(out / "mst.csv")) == 4


def test_pd_k1_standard(path_file, tmp_path):
    main(["pd", str(path_file), "--k", "1", "--out", str(tmp_path / "o")])
    dgm = read_diagram(tmp_path / "o" / "diagram.csv")
    assert [p[:2] for p in dgm.finite_points()] == [(0, 1), (0, 2), (0, 3)]


def test_pd_points_matches_edge_list(cloud, tmp_path):
    pc, p = cloud
    edges = tmp_path / "e.csv"
    write_edge_list(edges, point_cloud_to_graph(pc))
    main(["pd", str(p), "--points", "--k", "4", "--out", str(tmp_path / "a")])
    main(["pd", str(edges), "--k", "4", "--out", str(tmp_path / "b")])
    for name in ("diagram.csv", "filtration.csv", "mst.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


@pytest.mark.parametrize("body,line", [("0,1,1\n1,1,2\n", 2), ("0,1,1\n0,1,2\n", 2), ("0,1,1\n2,x,1\n", 2)])
def test_malformed_input(tmp_path, capsys, body, line):
    bad = tmp_path / "bad.csv"
    bad.write_text(body)
    out = tmp_path / "never"
    assert main(["pd", str(bad), "--out", str(out)]) != 0
    assert f"line {line}:" in capsys.readouterr().err
    assert not out.exists()


def test_knn_warns(cloud, tmp_path, capsys):
    _, p = cloud
    assert main(["pd", str(p), "--points", "--mode", "knn=5", "--k", "3", "--out", str(tmp_path / "o")]) == 0
    assert "warning" in capsys.readouterr().err


def test_torus_metric(tmp_path):
    p = tmp_path / "t.csv"
    p.write_text("0.1\n0.9\n")
    main(["pd", str(p), "--points", "--metric", "torus", "--k", "1", "--out", str(tmp_path / "o")])
    assert float(lines(tmp_path / "o" / "mst.csv")[1].split(",")[2]) == pytest.approx(0.2)


def test_degree(path_file, tmp_path):
    main(["degree", str(path_file), "--k", "2", "--out", str(tmp_path / "o")])
    assert lines(tmp_path / "o" / "filtration.csv")[1:] == ["0,inf", "1,3", "2,3", "3,inf"]


class TestCluster:
    def test_alpha(self, tmp_path):
        g = tmp_path / "g.csv"
        g.write_text("0,1,1\n2,3,2\n1,2,10\n")
        main(["cluster", str(g), "--k", "2", "--alpha", "3", "--out", str(tmp_path / "o")])
        assert lines(tmp_path / "o" / "labels.csv")[2:] == ["0,0", "1,0", "2,2", "3,2"]

    def test_alpha_one_maximal(self, cloud, tmp_path):
        pc, p = cloud
        main(["cluster", str(p), "--points", "--k", "3", "--alpha", "1", "--out", str(tmp_path / "o")])
        labels = [ln.split(",")[1] for ln in lines(tmp_path / "o" / "labels.csv")[2:]]
        dgm = compute_k_cluster(point_cloud_to_graph(pc), 3).diagram
        assert len(set(labels) - {"NOISE"}) == len(dgm)

    def test_num_clusters(self, cloud, tmp_path):
        _, p = cloud
        main(["cluster", str(p), "--points", "--k", "3", "--num-clusters", "2", "--out", str(tmp_path / "o")])
        labels = {ln.split(",")[1] for ln in lines(tmp_path / "o" / "labels.csv")[2:]}
        assert len(labels - {"NOISE"}) == 2

    def test_gamma_report(self, tmp_path):
        pts = tmp_path / "b.csv"
        main(["sample", "blobs", "--n", "1000", "--seed", "3", "--out", str(pts)])
        main(["cluster", str(pts), "--points", "--k", "10", "--gamma", "0.05", "--out", str(tmp_path / "o")])
        rep = json.loads((tmp_path / "o" / "report.json").read_text())
        labels = {ln.split(",")[1] for ln in lines(tmp_path / "o" / "labels.csv")[2:]}
        assert rep["cluster_count"] == len(labels - {"NOISE"}) == 3

    @pytest.mark.parametrize("flags", [["--alpha", "2", "--gamma", "0.1"], ["--alpha", "2", "--num-clusters", "2"]])
    def test_conflicting(self, path_file, tmp_path, flags):
        out = tmp_path / "o"
        assert main(["cluster", str(path_file), "--out", str(out), *flags]) != 0
        assert not out.exists()

    def test_alpha_below_one(self, path_file, tmp_path):
        assert main(["cluster", str(path_file), "--alpha", "0.5", "--out", str(tmp_path / "o")]) != 0


def _run_twice(tmp_path, argv):
    outs = []
    for tag in ("a", "b"):
        out = tmp_path / tag
        assert main([*argv, "--out", str(out)]) == 0
        outs.append(out)
    return outs


@pytest.mark.parametrize(
    "argv",
    [
        ["simulate", "gnp", "--n", "300", "--trials", "3", "--seed", "5"],
        ["simulate", "rgg", "--n", "300", "--trials", "3", "--seed", "5"],
        ["simulate", "maxpi", "--grid", "64,128", "--trials", "2", "--seed", "5"],
        ["simulate", "addone", "--n", "12", "--k", "3", "--trials", "5", "--seed", "5"],
        ["simulate", "limitpd", "--grid", "4,6", "--trials", "2", "--seed", "5"],
        ["universality", "--n", "300", "--trials", "2", "--seed", "5"],
    ],
)
def test_reproducible_with_seed_header(tmp_path, argv):
    a, b = _run_twice(tmp_path, argv)
    names = sorted(x.name for x in a.iterdir())
    assert names == sorted(x.name for x in b.iterdir())
    for name in names:
        assert (a / name).read_bytes() == (b / name).read_bytes()
    csv = next(a.glob("*.csv"))
    assert csv.read_text().startswith("#") and "seed=5" in csv.read_text().splitlines()[0]


def test_sample_reproducible(tmp_path):
    for tag in ("a", "b"):
        main(["sample", "two-moons", "--n", "50", "--seed", "3", "--out", str(tmp_path / f"{tag}.csv")])
    a = (tmp_path / "a.csv").read_bytes()
    assert a == (tmp_path / "b.csv").read_bytes()
    assert a.startswith(b"# kind=two-moons") and b"seed=3" in a.splitlines()[0]


def test_invalid_model():
    with pytest.raises(SystemExit):
        main(["simulate", "percolation"])


def test_unknown_distribution(tmp_path):
    out = tmp_path / "o"
    assert main(["universality", "--dists", "uniform,cauchy", "--out", str(out)]) != 0
    assert not out.exists()


def test_console_entry(path_file, tmp_path):
    r = subprocess.run(
        [sys.executable, "-m", "kcluster.cli", "pd", str(path_file), "--k", "2", "--out", str(tmp_path / "o")],
        capture_output=True, text=True,
    )
    assert r.returncode == 0, r.stderr
