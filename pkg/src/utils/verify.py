"""
Verification suites.

Every check returns rows; a failing identity is a row with ok=False, never an
exception. Only violated preconditions (an even l, an l dividing some w_i)
raise.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import isprime

from utils.arith import is_fundamental_discriminant, primes_not_dividing, rational_mod
from utils.brandt import BrandtMatrix, EigenSystem, QSeries, expected_row_sum, hecke_eigenvalues
from utils.errors import CongruencePreconditionError
from utils.order import IdealClassSet, reduced_discriminant
from utils.qform import (
    LevelConfig,
    class_number,
    corollary_H,
    gross_H,
    is_admissible,
    mass,
    ramified_count,
    unit_factor,
)
from utils.theta32 import EmbeddingRow, RepresentationRow, TraceRow

logger = logging.getLogger(__name__)


@dataclass
class CheckRow:
    suite: str
    name: str
    index: int
    expected: str
    actual: str
    ok: bool


def _row(suite: str, name: str, index: int, expected, actual) -> CheckRow:
    return CheckRow(suite, name, index, str(expected), str(actual), expected == actual)


def all_passed(rows: Sequence) -> bool:
    return all(r.ok for r in rows)


def as_check_row(row) -> CheckRow:
    """One row schema for suites that mix row types"""
    if isinstance(row, CheckRow):
        return row
    if isinstance(row, CorollaryRow):
        return CheckRow("corollary", f"s={row.s}", row.D, str(row.predicted), str(row.H), row.ok)
    if isinstance(row, EmbeddingRow):
        return CheckRow("embedding", "class_sum", row.d, str(row.expected), str(row.total), row.ok)
    if isinstance(row, RepresentationRow):
        return CheckRow("embedding", f"class_{row.class_index}", row.D, str(row.from_embeddings), str(row.represented), row.ok)
    if isinstance(row, TraceRow):
        return CheckRow("trace", "trace_identity", row.m, str(row.class_number_sum), str(row.trace), row.ok)
    raise TypeError(f"no check-row form for {type(row).__name__}")


# ============================================================================
# Structure suites
# ============================================================================

def mass_check(classes: IdealClassSet) -> List[CheckRow]:
    cfg = classes.cfg
    rows = [_row("mass", "mass_formula", 0, mass(cfg), classes.mass_sum())]
    for i, (e, R) in enumerate(zip(classes.unit_counts, classes.right_orders)):
        rows.append(_row("mass", "unit_count_even", i, 0, e % 2))
        rows.append(_row("mass", "w_divides_12", i, 0, 12 % (e // 2) if e >= 2 else e))
        rows.append(_row("mass", "right_order_level", i, cfg.N, reduced_discriminant(R)))
    return rows


def rowsum_check(matrices: Sequence[BrandtMatrix], cfg: LevelConfig) -> List[CheckRow]:
    rows = [
        _row("rowsum", "B0_trace", 0, mass(cfg), matrices[0].trace()),
        _row("rowsum", "B1_identity", 1, True, matrices[1].is_identity()),
    ]
    for B in matrices[1:]:
        expected = Fraction(expected_row_sum(B.m, cfg))
        sums = set(B.row_sums())
        actual = sums.pop() if len(sums) == 1 else sorted(sums)
        rows.append(_row("rowsum", "row_sum", B.m, expected, actual))
    return rows


def hecke_check(
    matrices: Sequence[BrandtMatrix],
    classes: IdealClassSet,
    eig: Optional[EigenSystem] = None,
    pair_limit: int = 20,
) -> List[CheckRow]:
    """Eigenvector u, weighted symmetry, commutativity, multiplicativity, |a_p| <= 2 sqrt(p)"""
    cfg = classes.cfg
    m_max = len(matrices) - 1
    ones = [1] * classes.n
    rows = []
    for B in matrices[1:]:
        b = expected_row_sum(B.m, cfg)
        rows.append(_row("hecke", "u_eigenvector", B.m, [Fraction(b)] * classes.n, B.apply(ones)))
        rows.append(_row("hecke", "weighted_symmetry", B.m, True, B.is_weighted_symmetric(classes.w)))

    limit = min(pair_limit, m_max)
    for m1, m2 in combinations_with_replacement(range(1, limit + 1), 2):
        if m1 == m2:
            continue
        commutes = (matrices[m1] @ matrices[m2]) == (matrices[m2] @ matrices[m1])
        rows.append(_row("hecke", "commute", m1 * 1000 + m2, True, commutes))

    for m1 in range(2, m_max + 1):
        for m2 in range(m1 + 1, m_max // m1 + 1):
            if gcd(m1, m2) != 1 or gcd(m1 * m2, cfg.N) != 1:
                continue
            product = matrices[m1] @ matrices[m2]
            rows.append(_row("hecke", "multiplicative", m1 * m2, matrices[m1 * m2].entries, product))

    if eig is not None:
        for p, a_p in eig.eigenvalues.items():
            rows.append(_row("hecke", "ramanujan_bound", p, True, a_p * a_p <= 4 * p))
    return rows


# ============================================================================
# Theta side against class numbers
# ============================================================================

def main_identity_check(H_theta: QSeries, H_closed: QSeries) -> List[CheckRow]:
    bound = min(H_theta.bound, H_closed.bound)
    return [_row("hseries", "theta_vs_closed", D, H_closed[D], H_theta[D]) for D in range(bound + 1)]


def plus_space_check(series: QSeries) -> List[CheckRow]:
    return [
        _row("plus_space", series.label, D, Fraction(0), c)
        for D, c in series.items()
        if D % 4 in (1, 2)
    ]


@dataclass
class CorollaryRow:
    D: int
    s: int
    factor: Fraction  # 2^(omega(N) - 1 - s(D))
    h: int
    u: int
    H: Fraction
    predicted: Fraction

    @property
    def ok(self) -> bool:
        return self.H == self.predicted


def corollary_check(H: QSeries, cfg: LevelConfig) -> List[CorollaryRow]:
    """H(D) = 2^(omega(N) - 1 - s(D)) h(-D) / u(-D) over admissible D"""
    rows = []
    for D in range(3, H.bound + 1):
        if not is_admissible(D, cfg):
            continue
        s = ramified_count(D, cfg)
        rows.append(
            CorollaryRow(
                D=D,
                s=s,
                factor=Fraction(2) ** (cfg.omega - 1 - s),
                h=class_number(-D),
                u=unit_factor(-D),
                H=H[D],
                predicted=corollary_H(D, cfg),
            )
        )
    return rows


def gross_check(H: QSeries, cfg: LevelConfig) -> List[CheckRow]:
    """Prime level, M = 1: H(D) = (1 - (-D/N)) / 2 * h(-D) / u(-D) for fundamental -D"""
    if cfg.omega != 1 or cfg.M.value != 1:
        raise ValueError(f"{cfg} is not a prime level")
    N = cfg.N
    return [
        _row("gross", "prime_level", D, gross_H(D, N), H[D])
        for D in range(3, H.bound + 1)
        if is_fundamental_discriminant(-D)
    ]


def level_table(rows: Sequence[CorollaryRow]) -> List[Dict]:
    """Piecewise display: one line per number s(D) of ramified level primes"""
    table = {}
    for r in rows:
        entry = table.setdefault(r.s, {"s": r.s, "factor": str(r.factor), "count": 0, "exceptions": 0})
        entry["count"] += 1
        entry["exceptions"] += 0 if r.ok else 1
    return [table[s] for s in sorted(table)]


# ============================================================================
# Congruences
# ============================================================================

@dataclass
class CongruenceReport:
    suite: str
    l: int
    lam: Optional[int]
    checked_range: Tuple[int, int]
    failures: List[Tuple[int, int, int]] = field(default_factory=list)
    reason: Optional[str] = None
    candidate: Optional[int] = None

    @property
    def ok(self) -> bool:
        return not self.failures and self.reason is None


def _check_l(l: int):
    if l == 2 or not isprime(l):
        raise CongruencePreconditionError(f"l={l} must be an odd prime")


def eigenvalue_congruence(
    eig: EigenSystem,
    cfg: LevelConfig,
    l: int,
    p_max: int,
    matrices: Optional[Sequence[BrandtMatrix]] = None,
) -> CongruenceReport:
    """a_p = b_p (mod l) for good primes p <= p_max"""
    _check_l(l)
    if any(w % l == 0 for w in eig.w):
        raise CongruencePreconditionError(f"l={l} divides some w_i in {list(eig.w)}")
    primes = primes_not_dividing(cfg.N, upto=p_max)
    eigenvalues = dict(eig.eigenvalues)
    missing = [p for p in primes if p not in eigenvalues]
    if missing:
        if matrices is None or len(matrices) <= max(missing):
            raise ValueError(f"Brandt matrices up to {max(missing)} are needed")
        eigenvalues.update(hecke_eigenvalues(eig, matrices, missing))
    failures = []
    for p in primes:
        lhs = eigenvalues[p] % l
        rhs = expected_row_sum(p, cfg) % l
        if lhs != rhs:
            failures.append((p, lhs, rhs))
    report = CongruenceReport("eigenvalue", l, None, (2, p_max), failures)
    logger.info(f"eigenvalue congruence mod {l}: {len(failures)} failures over {len(primes)} primes")
    return report


def coefficient_congruence(H: QSeries, G: QSeries, l: int) -> CongruenceReport:
    """lambda G = H (mod l) coefficientwise, lambda taken from the first index
    where both sides are nonzero mod l"""
    _check_l(l)
    bound = min(H.bound, G.bound)
    try:
        h = [rational_mod(H[D], l) for D in range(bound + 1)]
        g = [rational_mod(G[D], l) for D in range(bound + 1)]
    except ValueError as e:
        raise CongruencePreconditionError(str(e)) from e

    candidate = None
    for D in range(bound + 1):
        if h[D] and g[D]:
            candidate = h[D] * pow(g[D], -1, l) % l
            break
    if candidate is None:
        if not any(h) and not any(g):
            return CongruenceReport("coefficient", l, None, (0, bound), reason="indeterminate")
        failures = [(D, g[D], h[D]) for D in range(bound + 1) if bool(h[D]) != bool(g[D])]
        return CongruenceReport("coefficient", l, None, (0, bound), failures, reason="inconsistent")

    failures = [(D, candidate * g[D] % l, h[D]) for D in range(bound + 1) if candidate * g[D] % l != h[D]]
    if failures:
        logger.info(f"coefficient congruence mod {l}: candidate {candidate} fails at {len(failures)} indices")
        return CongruenceReport("coefficient", l, None, (0, bound), failures, "inconsistent", candidate)
    logger.info(f"coefficient congruence mod {l}: lambda = {candidate} on 0..{bound}")
    return CongruenceReport("coefficient", l, candidate, (0, bound), candidate=candidate)


def congruence_findings(eigen_report: CongruenceReport, coefficient_report: CongruenceReport) -> List[str]:
    """Mismatches between the weight-2 and weight-3/2 suites"""
    findings = []
    if coefficient_report.ok and not eigen_report.ok:
        findings.append(
            f"l={eigen_report.l}: lambda G = H holds but a_p = b_p fails at "
            f"{[f[0] for f in eigen_report.failures]}"
        )
    if eigen_report.ok and not coefficient_report.ok:
        findings.append(f"l={eigen_report.l}: a_p = b_p holds but no lambda ({coefficient_report.reason})")
    return findings


@dataclass
class DivisibilityRow:
    D: int
    fundamental: bool
    s: int
    h: int
    h_mod_l: int
    m_D: int
    m_mod_l: int
    agree: bool


def divisibility_table(cfg: LevelConfig, l: int, D_max: int, G: QSeries) -> List[DivisibilityRow]:
    """l | m_D against l | h(-D) over fundamental -D under the Kronecker condition"""
    _check_l(l)
    rows = []
    for D in range(3, min(D_max, G.bound) + 1):
        if not is_admissible(D, cfg):
            continue
        h = class_number(-D)
        m = G[D]
        if m.denominator != 1:
            raise ValueError(f"m_D at D={D} is not an integer: {m}")
        m = int(m)
        rows.append(
            DivisibilityRow(
                D=D,
                fundamental=True,
                s=ramified_count(D, cfg),
                h=h,
                h_mod_l=h % l,
                m_D=m,
                m_mod_l=m % l,
                agree=(h % l == 0) == (m % l == 0),
            )
        )
    return rows


def divisibility_summary(rows: Sequence[DivisibilityRow]) -> Dict:
    total = len(rows)
    agree = sum(1 for r in rows if r.agree)
    return {
        "rows": total,
        "agree": agree,
        "disagree": total - agree,
        "agreement_rate": agree / total if total else 1.0,
    }
