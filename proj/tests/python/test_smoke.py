import json
import pathlib

import pytest

import netsight

DATA = pathlib.Path(__file__).resolve().parents[2] / "data" / "networks"
FIXTURES = pathlib.Path(__file__).resolve().parents[1] / "fixtures"


@pytest.fixture(scope="module")
def karate():
    return netsight.Graph.load(DATA / "karate.txt")


def test_graph_round_trip():
    g = netsight.Graph.from_edges([(10, 20), (20, 30), (30, 10), (40, 50)])
    assert g.node_count == 5
    assert g.edge_count == 4
    assert g.nodes() == [10, 20, 30, 40, 50]
    assert g.degree(20) == 2
    assert sorted(g.neighbors(10)) == [20, 30]
    assert netsight.Graph.from_edges(g.edges(), keep_lcc=True).node_count == 3
    assert netsight.has_cycle(g)
    assert netsight.shortest_distance(g, 10, 40) is None
    with pytest.raises(ValueError):
        g.degree(99)


def test_parse_errors_are_value_errors():
    with pytest.raises(netsight.ParseError):
        netsight.Graph.parse("1 2\n3\n")


def test_karate_metrics(karate):
    assert karate.node_count == 34 and karate.edge_count == 78
    deg = netsight.centrality(karate, "degree")
    assert max(deg, key=deg.get) == 33
    bc = netsight.centrality(karate, "betweenness")
    assert max(bc, key=bc.get) == 0
    pr = netsight.centrality(karate, "pagerank")
    assert sum(pr.values()) == pytest.approx(1.0)
    assert netsight.largest_component_size(karate.without_nodes([0])) == 27
    assert netsight.heuristic_seeds(karate, "degree", 3) == [33, 0, 32]


def test_communities(karate):
    labels = netsight.detect_communities(karate)
    assert len(set(labels.values())) == 3
    assert netsight.modularity(karate, labels) == pytest.approx(0.3807, abs=1e-3)
    merged = netsight.merge_communities(karate, labels, 2)
    assert len(set(merged.values())) == 2


def test_visualize(karate):
    out = netsight.visualize(karate, target_communities=2, size=512, iterations=50, png=True)
    assert out["svg"].startswith("<?xml") or out["svg"].startswith("<svg")
    assert out["png"][:8] == b"\x89PNG\r\n\x1a\n"
    assert len(set(out["communities"].values())) == 2
    assert out["detected_count"] == 3
    again = netsight.visualize(karate, target_communities=2, size=512, iterations=50, png=True)
    assert again["content_hash"] == out["content_hash"]
    pos = netsight.layout(karate, "circle")
    assert len(pos) == 34


def test_spread_and_local_search():
    star = netsight.Graph.from_edges([(0, i) for i in range(1, 7)])
    s = netsight.expected_spread(star, [0], p=1.0, trials=100)
    assert s["mean"] == 7.0 and s["std_error"] == 0.0
    r = netsight.local_search(star, [4], p=0.5, trials=2000)
    assert r["seeds"] == [0]
    assert r["accepted_spreads"] == sorted(r["accepted_spreads"])


def test_run_im_from_fixture(karate):
    replies = json.loads((FIXTURES / "karate_im_replies.json").read_text())
    if isinstance(replies, dict):
        replies = replies["replies"]
    doc = netsight.run_im(karate, replies, k=5, attempts=2, trials=5000, ls_trials=500, network_id="karate")
    assert netsight.check_result_schema(doc) == []
    assert len(doc["metrics"]["best_seeds"]) == 5


def test_dismantle(karate):
    doc = netsight.dismantle(karate, "hd", network_id="karate")
    assert netsight.check_result_schema(doc) == []
    assert doc["metrics"]["auc"] == pytest.approx(4.0735, abs=1e-4)
    curve = doc["trace"]["lcc_curve"]
    assert netsight.auc(curve, 34) == pytest.approx(doc["metrics"]["auc"])
    assert netsight.auc(curve, 34, "step_sum") < netsight.auc(curve, 34)
    via_selector = netsight.dismantle(karate, "degree", network_id="karate")
    assert via_selector["trace"]["removal_sequence"][0] == 33


def test_benchmark_and_tasks():
    g = netsight.generate("ws", "easy", seed=3)
    truth, admissible = netsight.solve_task(g, "cycle_detection")
    assert truth == "True" and truth in admissible
    assert netsight.encode_text(g, "adjacency").count("\n") == g.node_count - 1
    doc = netsight.benchmark_oracle("er", "easy", n_instances=4)
    assert netsight.check_result_schema(doc) == []
    assert all(c["accuracy"] == 1.0 for c in doc["metrics"]["cells"])
