"""
Neighbour Graph - NetworkX multigraph of the p-neighbour relation between
left ideal classes, with JSON persistence
"""

import json
import logging
from typing import Dict, List, Optional

import networkx as nx
import numpy as np

from utils.errors import CacheError

logger = logging.getLogger(__name__)


class NeighbourGraph:
    """Classes as nodes, one directed edge per p-neighbour.

    An edge i -> j means one of the p + 1 neighbours of I_i lies in the class
    of I_j, so the edge multiplicities reproduce the Brandt matrix B_p.
    """

    def __init__(self, prime: Optional[int] = None):
        self.graph = nx.MultiDiGraph()  # parallel edges carry multiplicity
        self.prime = prime

    def add_class(self, index: int, class_data: Dict):
        """Add ideal class as graph node"""
        self.graph.add_node(index, **class_data)

    def add_neighbour(self, source: int, target: int, attributes: Dict = None):
        """Add one neighbour edge"""
        attrs = attributes or {}
        self.graph.add_edge(source, target, **attrs)

    def out_degrees(self) -> Dict[int, int]:
        return {node: self.graph.out_degree(node) for node in sorted(self.graph.nodes)}

    def adjacency_matrix(self) -> np.ndarray:
        """Integer matrix whose (i, j) entry is the number of edges i -> j"""
        n = self.graph.number_of_nodes()
        mat = np.zeros((n, n), dtype=np.int64)
        for source, target in self.graph.edges():
            mat[source, target] += 1
        return mat

    def is_complete(self) -> bool:
        """Every class has exactly p + 1 recorded neighbours"""
        if self.prime is None:
            return False
        return all(d == self.prime + 1 for d in self.out_degrees().values())

    def is_connected(self) -> bool:
        if self.graph.number_of_nodes() == 0:
            return False
        return nx.is_strongly_connected(self.graph)

    def neighbours_of(self, index: int) -> List[int]:
        """Target classes of the neighbours of I_index, with repetition"""
        return sorted(target for _, target in self.graph.out_edges(index))

    def save(self, filepath: str):
        """Save graph to JSON file"""
        data = nx.node_link_data(self.graph)
        data["prime"] = self.prime

        with open(filepath, "w", encoding="utf-8") as f:
            json.dump(data, f, indent=2)

        logger.info(f"Neighbour graph saved to {filepath}")

    @classmethod
    def load(cls, filepath: str) -> "NeighbourGraph":
        """Load graph from JSON file; unreadable or malformed files raise CacheError"""
        try:
            with open(filepath, "r", encoding="utf-8") as f:
                data = json.load(f)
            store = cls(prime=data.pop("prime", None))
            store.graph = nx.node_link_graph(data, directed=True, multigraph=True)
        except (OSError, json.JSONDecodeError, AttributeError, KeyError, TypeError, nx.NetworkXError) as e:
            raise CacheError(f"unreadable neighbour graph {filepath}: {e}") from e

        logger.info(f"Neighbour graph loaded from {filepath}")
        return store

    def get_statistics(self) -> Dict:
        """Get graph statistics"""
        degrees = list(self.out_degrees().values())
        return {
            "prime": self.prime,
            "num_nodes": self.graph.number_of_nodes(),
            "num_edges": self.graph.number_of_edges(),
            "is_connected": self.is_connected(),
            "num_connected_components": nx.number_weakly_connected_components(self.graph),
            "self_loops": nx.number_of_selfloops(self.graph),
            "min_out_degree": min(degrees) if degrees else 0,
            "max_out_degree": max(degrees) if degrees else 0,
            "density": nx.density(self.graph),
        }
