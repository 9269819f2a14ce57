"""
The weight-3/2 side: trace-zero lattices S_i^0 of Z + 2R_i, their theta
series g_i, the Cohen-Eisenstein series H = sum g_i / w_i, the cusp-side
series G = sum (v_i / w_i) g_i and optimal embedding counts.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from tqdm import tqdm

from utils.arith import discriminant, discriminant_decompositions, is_discriminant, mobius
from utils.brandt import BrandtMatrix, EigenSystem, QSeries
from utils.config import SHOW_PROGRESS, WORKERS
from utils.errors import EmbeddingCountError
from utils.lattice import determinant, hnf_basis, integer_kernel, norm_counts, row_times
from utils.order import IdealClassSet
from utils.qform import LevelConfig, closed_form_H, embedding_number, mass, unit_factor

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TernaryLattice:
    class_index: int
    basis: Tuple[Tuple[Fraction, ...], ...]
    gram: Tuple[Tuple[Fraction, ...], ...]

    @property
    def determinant(self) -> Fraction:
        return determinant(self.gram)


@dataclass
class HalfIntegralSeries(QSeries):
    kind: str = "g"

    def support_violations(self) -> List[int]:
        """Indices D = 1, 2 mod 4 with a nonzero coefficient"""
        return [D for D, c in self.items() if D % 4 in (1, 2) and c != 0]


def ternary_lattice(classes: IdealClassSet, i: int) -> TernaryLattice:
    """Trace-zero part of Z + 2R_i (0-based class index)"""
    R = classes.right_orders[i]
    B = classes.algebra
    one = (Fraction(1), Fraction(0), Fraction(0), Fraction(0))
    L = hnf_basis([one] + [tuple(2 * x for x in b) for b in R.basis])
    traces = [int(2 * b[0]) for b in L]
    kernel = integer_kernel(traces)
    basis = tuple(tuple(row_times([Fraction(c) for c in k], L)) for k in kernel)
    gram = tuple(tuple(B.bilinear(x, y) for y in basis) for x in basis)
    return TernaryLattice(i, basis, gram)


def _counts(args) -> np.ndarray:
    gram, bound = args
    return norm_counts([list(row) for row in gram], bound)


def theta_counts(classes: IdealClassSet, D_max: int, workers: int = WORKERS) -> List[np.ndarray]:
    """r_i(D) = #{b in S_i^0 : nrd(b) = D} for every class, 0 <= D <= D_max"""
    lattices = [ternary_lattice(classes, i) for i in range(classes.n)]
    jobs = [(lat.gram, D_max) for lat in lattices]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            counts = list(executor.map(_counts, jobs))
    else:
        counts = [_counts(job) for job in tqdm(jobs, desc="Ternary sweeps", disable=not SHOW_PROGRESS)]
    logger.info(f"theta counts for {classes.n} ternary lattices up to D={D_max}")
    return counts


def g_coefficients(lat: TernaryLattice, D_max: int) -> HalfIntegralSeries:
    counts = _counts((lat.gram, D_max))
    return HalfIntegralSeries([Fraction(int(c), 2) for c in counts], label=f"g_{lat.class_index + 1}", kind="g")


def cohen_H(classes: IdealClassSet, D_max: int, counts: Optional[Sequence[np.ndarray]] = None) -> HalfIntegralSeries:
    """H(D) = sum_i r_i(D) / (2 w_i)"""
    counts = counts if counts is not None else theta_counts(classes, D_max)
    e = classes.unit_counts
    coefficients = [
        sum((Fraction(int(c[D]), e[i]) for i, c in enumerate(counts)), Fraction(0)) for D in range(D_max + 1)
    ]
    return HalfIntegralSeries(coefficients, label="H", kind="H")


def cusp_G(
    classes: IdealClassSet, eig: EigenSystem, D_max: int, counts: Optional[Sequence[np.ndarray]] = None
) -> HalfIntegralSeries:
    """G(D) = sum_i (v_i / w_i) r_i(D) / 2"""
    counts = counts if counts is not None else theta_counts(classes, D_max)
    y = eig.y
    coefficients = [
        sum((Fraction(y[i] * int(c[D]), 2) for i, c in enumerate(counts)), Fraction(0)) for D in range(D_max + 1)
    ]
    return HalfIntegralSeries(coefficients, label="G", kind="G")


def closed_form_series(cfg: LevelConfig, D_max: int) -> HalfIntegralSeries:
    """Class-number side, with H(0) = mass"""
    coefficients = [mass(cfg)] + [closed_form_H(D, cfg) for D in range(1, D_max + 1)]
    return HalfIntegralSeries(coefficients, label="H_closed", kind="H")


# ============================================================================
# Optimal embeddings
# ============================================================================

def primitive_counts(counts: np.ndarray) -> np.ndarray:
    """Vectors with coprime coordinates, by Moebius inversion over b = f b'"""
    bound = len(counts) - 1
    prim = np.zeros(bound + 1, dtype=np.int64)
    for D in range(1, bound + 1):
        total = 0
        for f in range(1, isqrt(D) + 1):
            if D % (f * f) == 0:
                mu = mobius(f)
                if mu:
                    total += mu * int(counts[D // (f * f)])
        prim[D] = total
    return prim


def optimal_embedding_count(
    classes: IdealClassSet, i: int, d: int, primitive: Optional[np.ndarray] = None
) -> int:
    """h(O_d, R_i) = u(d) / w_i * #{primitive b in S_i^0 : nrd(b) = |d|}"""
    discriminant(d)
    if primitive is None:
        lat = ternary_lattice(classes, i)
        primitive = primitive_counts(_counts((lat.gram, -d)))
    value = Fraction(unit_factor(d) * int(primitive[-d]), classes.w[i])
    if value.denominator != 1:
        raise EmbeddingCountError(f"class {i + 1}, d={d}: embedding count {value} is not an integer")
    return int(value)


@dataclass
class EmbeddingRow:
    d: int
    per_class: List[int]
    total: int
    expected: int

    @property
    def ok(self) -> bool:
        return self.total == self.expected


def embedding_sum_check(
    classes: IdealClassSet, d_max: int, counts: Optional[Sequence[np.ndarray]] = None
) -> List[EmbeddingRow]:
    """sum_i h(O_d, R_i) against h(d) prod(1 - {d/p}) prod(1 + {d/q})"""
    counts = counts if counts is not None else theta_counts(classes, d_max)
    primitive = [primitive_counts(c[: d_max + 1]) for c in counts]
    rows = []
    for D in range(3, d_max + 1):
        d = -D
        if not is_discriminant(d):
            continue
        per_class = [optimal_embedding_count(classes, i, d, primitive[i]) for i in range(classes.n)]
        rows.append(EmbeddingRow(d, per_class, sum(per_class), embedding_number(d, classes.cfg)))
    return rows


@dataclass
class RepresentationRow:
    D: int
    class_index: int
    represented: int  # r_i(D) = 2 a_i(D)
    from_embeddings: Fraction

    @property
    def ok(self) -> bool:
        return self.represented == self.from_embeddings


def representation_check(
    classes: IdealClassSet, D_max: int, counts: Optional[Sequence[np.ndarray]] = None
) -> List[RepresentationRow]:
    """r_i(D) = w_i * sum over -D = d f^2 of h(O_d, R_i) / u(d).

    r_i counts every b, so with g_i = (1/2) sum q^nrd(b) this is the identity
    for 2 a_i(D).
    """
    counts = counts if counts is not None else theta_counts(classes, D_max)
    primitive = [primitive_counts(c[: D_max + 1]) for c in counts]
    w = classes.w
    rows = []
    for D in range(1, D_max + 1):
        decompositions = discriminant_decompositions(D)
        for i in range(classes.n):
            total = Fraction(0)
            for disc, _ in decompositions:
                h = optimal_embedding_count(classes, i, disc.d, primitive[i])
                total += Fraction(h, unit_factor(disc.d))
            rows.append(RepresentationRow(D, i, int(counts[i][D]), w[i] * total))
    return rows


# ============================================================================
# Trace identity
# ============================================================================

@dataclass
class TraceRow:
    m: int
    trace: Fraction
    class_number_sum: Fraction

    @property
    def ok(self) -> bool:
        return self.trace == self.class_number_sum


def trace_identity_check(matrices: Sequence[BrandtMatrix], H: QSeries, m_max: int) -> List[TraceRow]:
    """Tr(B_m) = sum over s^2 <= 4m of H(4m - s^2)"""
    if H.bound < 4 * m_max:
        raise ValueError(f"H must be known up to {4 * m_max}, got {H.bound}")
    rows = []
    for m in range(m_max + 1):
        rhs = Fraction(0)
        r = isqrt(4 * m)
        for s in range(-r, r + 1):
            rhs += H[4 * m - s * s]
        rows.append(TraceRow(m, matrices[m].trace(), rhs))
    return rows


def determinant_profile(classes: IdealClassSet) -> Dict[int, Fraction]:
    """det of the ternary Gram matrix per class; 4 N^2 at level N"""
    return {i: ternary_lattice(classes, i).determinant for i in range(classes.n)}
