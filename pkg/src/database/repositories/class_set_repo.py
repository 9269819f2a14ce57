"""
Repository for ideal class set operations
"""
import json
import logging
import os
from fractions import Fraction

from database.connection import cache_path, open_cache, remove_cache
from utils.config import CACHE_VERSION
from utils.errors import CacheError
from utils.graph_store import NeighbourGraph
from utils.order import IdealClassSet, LeftIdeal, OrderLattice, build_class_set, class_invariant, neighbour_graph
from utils.qform import LevelConfig, mass
from utils.quatalg import QuaternionAlgebra

logger = logging.getLogger(__name__)


def _encode_basis(basis):
    return [f"{x.numerator}/{x.denominator}" for row in basis for x in row]


def _decode_basis(values):
    if len(values) != 16:
        raise CacheError(f"basis has {len(values)} entries, expected 16")
    xs = [Fraction(v) for v in values]
    return tuple(tuple(xs[4 * r: 4 * r + 4]) for r in range(4))


class ClassSetRepository:

    @staticmethod
    def to_dict(classes: IdealClassSet):
        """Serializable form of a class set"""
        cfg = classes.cfg
        return {
            "version": CACHE_VERSION,
            "ramified": list(cfg.ramified),
            "M": cfg.M.value,
            "algebra": {"a": classes.algebra.a, "b": classes.algebra.b},
            "order": _encode_basis(classes.order.basis),
            "neighbour_prime": classes.neighbour_prime,
            "classes": [
                {
                    "basis": _encode_basis(I.basis),
                    "norm": f"{I.norm.numerator}/{I.norm.denominator}",
                    "e": e,
                    "w": e // 2,
                }
                for I, e in zip(classes.ideals, classes.unit_counts)
            ],
        }

    @staticmethod
    def from_dict(data, cfg: LevelConfig) -> IdealClassSet:
        """Rebuild a class set and re-certify it against the mass formula"""
        if data.get("version") != CACHE_VERSION:
            raise CacheError(f"cache version {data.get('version')} != {CACHE_VERSION}")
        if data["ramified"] != list(cfg.ramified) or data["M"] != cfg.M.value:
            raise CacheError(f"cache is for ramified={data['ramified']}, M={data['M']}, not {cfg}")

        algebra = QuaternionAlgebra(data["algebra"]["a"], data["algebra"]["b"])
        if algebra.ramified != cfg.ramified:
            raise CacheError(f"cached algebra is ramified at {list(algebra.ramified)}")
        order = OrderLattice(algebra, _decode_basis(data["order"]))

        ideals = []
        unit_counts = []
        invariants = []
        for entry in data["classes"]:
            ideal = LeftIdeal(order, _decode_basis(entry["basis"]), Fraction(entry["norm"]))
            invariant = class_invariant(ideal)
            if invariant[1] != entry["e"]:
                raise CacheError(f"unit count {invariant[1]} != cached {entry['e']}")
            ideals.append(ideal)
            unit_counts.append(entry["e"])
            invariants.append(invariant)

        classes = IdealClassSet(
            cfg=cfg,
            order=order,
            ideals=ideals,
            right_orders=[I.right_order for I in ideals],
            unit_counts=unit_counts,
            neighbour_prime=data["neighbour_prime"],
            invariants=invariants,
        )
        if classes.mass_sum() != mass(cfg):
            raise CacheError(f"cached classes have mass {classes.mass_sum()}, expected {mass(cfg)}")
        return classes

    @staticmethod
    def save(classes: IdealClassSet, directory: str = None):
        """Write class set (and its neighbour graph) to the cache"""
        path = cache_path(classes.cfg.key, directory=directory)
        with open_cache(path, "w") as f:
            json.dump(ClassSetRepository.to_dict(classes), f, indent=2)
        if classes.graph is not None:
            classes.graph.save(cache_path(classes.cfg.key, "graph.json", directory))
        logger.info(f"Saved {classes.n} classes for {classes.cfg} to {path}")
        return path

    @staticmethod
    def load(cfg: LevelConfig, directory: str = None):
        """Load a cached class set; None if there is no cache file"""
        path = cache_path(cfg.key, directory=directory)
        if not os.path.exists(path):
            return None
        try:
            with open_cache(path, "r") as f:
                data = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            raise CacheError(f"unreadable cache file {path}: {e}") from e
        try:
            classes = ClassSetRepository.from_dict(data, cfg)
        except (KeyError, TypeError, ValueError) as e:
            raise CacheError(f"malformed cache file {path}: {e}") from e
        graph_path = cache_path(cfg.key, "graph.json", directory)
        if os.path.exists(graph_path):
            try:
                graph = NeighbourGraph.load(graph_path)
                if graph.graph.number_of_nodes() != classes.n or not graph.is_complete():
                    raise CacheError(f"neighbour graph {graph_path} does not cover {classes.n} classes")
                classes.graph = graph
            except CacheError as e:
                logger.warning(f"Rebuilding neighbour graph for {cfg}: {e}")
                classes.graph = neighbour_graph(classes)
                classes.graph.save(graph_path)
        logger.info(f"Cache hit for {cfg}: {classes.n} classes")
        return classes

    @staticmethod
    def get_or_build(cfg: LevelConfig, directory: str = None, use_cache: bool = True) -> IdealClassSet:
        """Cached class set if it validates, otherwise build and store"""
        if use_cache:
            try:
                classes = ClassSetRepository.load(cfg, directory)
                if classes is not None:
                    return classes
            except CacheError as e:
                logger.warning(f"Discarding cache for {cfg}: {e}")
                ClassSetRepository.delete(cfg, directory)
        classes = build_class_set(cfg)
        if use_cache:
            ClassSetRepository.save(classes, directory)
        return classes

    @staticmethod
    def delete(cfg: LevelConfig, directory: str = None):
        """Delete cache files of a configuration"""
        removed = remove_cache(cache_path(cfg.key, directory=directory))
        remove_cache(cache_path(cfg.key, "graph.json", directory))
        return removed
