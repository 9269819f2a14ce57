import pytest

from utils.errors import CacheError
from utils.graph_store import NeighbourGraph


def _level_11_graph():
    graph = NeighbourGraph(prime=2)
    graph.add_class(0, {"norm": "1", "unit_count": 4})
    graph.add_class(1, {"norm": "2", "unit_count": 6})
    for target in (0, 1, 1):
        graph.add_neighbour(0, target)
    for target in (0, 0, 0):
        graph.add_neighbour(1, target)
    return graph


def test_adjacency_counts_parallel_edges():
    graph = _level_11_graph()
    assert graph.adjacency_matrix().tolist() == [[1, 2], [3, 0]]
    assert graph.out_degrees() == {0: 3, 1: 3}
    assert graph.neighbours_of(0) == [0, 1, 1]


def test_completeness_and_connectivity():
    graph = _level_11_graph()
    assert graph.is_complete()
    assert graph.is_connected()
    partial = NeighbourGraph(prime=2)
    partial.add_class(0, {})
    partial.add_class(1, {})
    partial.add_neighbour(0, 1)
    assert not partial.is_complete()
    assert not partial.is_connected()
    assert not NeighbourGraph().is_connected()


def test_statistics():
    stats = _level_11_graph().get_statistics()
    assert stats["prime"] == 2
    assert stats["num_nodes"] == 2
    assert stats["num_edges"] == 6
    assert stats["self_loops"] == 1
    assert stats["min_out_degree"] == stats["max_out_degree"] == 3


def test_save_and_load(tmp_path):
    path = tmp_path / "graph.json"
    _level_11_graph().save(str(path))
    loaded = NeighbourGraph.load(str(path))
    assert loaded.prime == 2
    assert loaded.adjacency_matrix().tolist() == [[1, 2], [3, 0]]
    assert loaded.graph.nodes[1]["unit_count"] == 6


def test_load_corrupt_file_raises_cache_error(tmp_path):
    path = tmp_path / "graph.json"
    path.write_text("{truncated")
    with pytest.raises(CacheError):
        NeighbourGraph.load(str(path))
    path.write_text("[1, 2]")
    with pytest.raises(CacheError):
        NeighbourGraph.load(str(path))
