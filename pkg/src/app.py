"""
Command-line front end for the Cohen-Eisenstein coefficient toolkit.

    python src/app.py hseries --ramified 11 --M 1 --dmax 300
    python src/app.py verify --suite trace --ramified 2,3,11 --mmax 30
    python src/app.py shatable --ramified 11 --l 5 --dmax 500
    python src/app.py classnum --dmax 2000

Exit codes: 0 success / all checks pass, 1 a verification failed,
2 invalid configuration.
"""

import argparse
import logging
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

from sympy import isprime

from database.repositories import ClassSetRepository
from utils.arith import is_discriminant, is_fundamental_discriminant, primes_not_dividing
from utils.brandt import brandt_series, rational_eigensystem
from utils.config import (
    CACHE_DIR,
    DEFAULT_D_MAX,
    DEFAULT_M_MAX,
    DEFAULT_P_MAX,
    LOG_LEVEL,
    SUPPORTED_FORMATS,
    VERIFY_SUITES,
    WORKERS,
)
from utils.errors import CohenEisensteinError, ConfigError, CongruencePreconditionError, NoRationalSplittingError
from utils.order import IdealClassSet, neighbour_graph
from utils.qform import LevelConfig, class_number, ramified_count, unit_factor
from utils.report_formatter import ReportFormatter
from utils.theta32 import (
    closed_form_series,
    cohen_H,
    cusp_G,
    embedding_sum_check,
    representation_check,
    theta_counts,
    trace_identity_check,
)
from utils.verify import (
    as_check_row,
    coefficient_congruence,
    congruence_findings,
    corollary_check,
    divisibility_summary,
    divisibility_table,
    eigenvalue_congruence,
    gross_check,
    hecke_check,
    level_table,
    mass_check,
    plus_space_check,
    rowsum_check,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2


@dataclass
class RunConfig:
    ramified: List[int]
    M: int = 1
    d_max: int = DEFAULT_D_MAX
    m_max: int = DEFAULT_M_MAX
    p_max: int = DEFAULT_P_MAX
    l: Optional[int] = None
    format: str = "csv"
    cache_dir: str = CACHE_DIR
    out: Optional[str] = None
    workers: int = WORKERS
    use_cache: bool = True

    def validate(self) -> LevelConfig:
        level = LevelConfig.from_primes(self.ramified, self.M)
        for name in ("d_max", "m_max", "p_max", "workers"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be positive")
        if self.format not in SUPPORTED_FORMATS:
            raise ConfigError(f"unsupported format {self.format}")
        if self.l is not None and (self.l == 2 or not isprime(self.l)):
            raise ConfigError(f"l={self.l} must be an odd prime")
        return level


def parse_primes(text: str) -> List[int]:
    try:
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError as e:
        raise ConfigError(f"cannot parse prime list {text!r}") from e


def run_config(args) -> RunConfig:
    return RunConfig(
        ramified=parse_primes(args.ramified),
        M=args.M,
        d_max=args.dmax,
        m_max=args.mmax,
        p_max=args.pmax,
        l=args.l,
        format=args.format,
        cache_dir=args.cache_dir,
        out=args.out,
        workers=args.workers,
        use_cache=not args.no_cache,
    )


def load_classes(run: RunConfig, level: LevelConfig) -> IdealClassSet:
    directory = run.cache_dir if run.use_cache else None
    return ClassSetRepository.get_or_build(level, directory=directory, use_cache=run.use_cache)


def emit(run: RunConfig, rows):
    ReportFormatter(run.format).write(rows, run.out)


# ============================================================================
# Commands
# ============================================================================

def cmd_hseries(run: RunConfig) -> int:
    level = run.validate()
    classes = load_classes(run, level)
    counts = theta_counts(classes, run.d_max, workers=run.workers)
    H = cohen_H(classes, run.d_max, counts)
    closed = closed_form_series(level, run.d_max)

    rows = []
    for D in range(run.d_max + 1):
        discriminant_ok = D > 0 and is_discriminant(-D)
        rows.append({
            "D": D,
            "H_theta": H[D],
            "H_closed": closed[D],
            "equal": H[D] == closed[D],
            "fundamental": D > 0 and is_fundamental_discriminant(-D),
            "s": ramified_count(D, level) if D > 0 else None,
            "h": class_number(-D) if discriminant_ok else None,
            "u": unit_factor(-D) if discriminant_ok else None,
        })
    emit(run, rows)
    failures = [r["D"] for r in rows if not r["equal"]]
    print(f"{level}: {len(rows) - len(failures)}/{len(rows)} coefficients agree", file=sys.stderr)
    return EXIT_OK if not failures else EXIT_FAILED


def _eigensystem(classes, matrices):
    if classes.n < 2:
        return None
    try:
        return rational_eigensystem(classes, matrices)
    except NoRationalSplittingError as e:
        logger.warning(f"no rational eigenvector for {classes.cfg}: {e}")
        return None


def suite_rows(suite: str, run: RunConfig, level: LevelConfig, classes: IdealClassSet):
    if suite == "mass":
        return mass_check(classes)

    if suite == "rowsum":
        return rowsum_check(brandt_series(classes, run.m_max, run.workers), level)

    if suite == "trace":
        matrices = brandt_series(classes, run.m_max, run.workers)
        bound = 4 * run.m_max
        H = cohen_H(classes, bound, theta_counts(classes, bound, run.workers))
        return trace_identity_check(matrices, H, run.m_max)

    if suite == "hecke":
        good = primes_not_dividing(level.N, upto=max(run.m_max, 2))
        matrices = brandt_series(classes, max([run.m_max] + good), run.workers)
        return hecke_check(matrices, classes, _eigensystem(classes, matrices))

    if suite == "congruence":
        if run.l is None:
            raise ConfigError("the congruence suite needs --l")
        matrices = brandt_series(classes, run.p_max, run.workers)
        eig = _eigensystem(classes, matrices)
        if eig is None:
            raise ConfigError(f"{level} has no rational cusp eigenvector")
        eigen_report = eigenvalue_congruence(eig, level, run.l, run.p_max, matrices)
        counts = theta_counts(classes, run.d_max, run.workers)
        H = cohen_H(classes, run.d_max, counts)
        G = cusp_G(classes, eig, run.d_max, counts)
        coefficient_report = coefficient_congruence(H, G, run.l)
        for finding in congruence_findings(eigen_report, coefficient_report):
            logger.warning(finding)
        return [
            {
                "suite": r.suite,
                "l": r.l,
                "lambda": r.lam,
                "checked_range": list(r.checked_range),
                "failures": len(r.failures),
                "first_failures": [list(f) for f in r.failures[:5]],
                "reason": r.reason,
                "ok": r.ok,
            }
            for r in (eigen_report, coefficient_report)
        ]

    if suite == "corollary":
        counts = theta_counts(classes, run.d_max, run.workers)
        H = cohen_H(classes, run.d_max, counts)
        rows = corollary_check(H, level)
        for entry in level_table(rows):
            print(f"s={entry['s']} factor={entry['factor']} rows={entry['count']} "
                  f"exceptions={entry['exceptions']}", file=sys.stderr)
        rows = list(rows) + plus_space_check(H)
        if level.omega == 1 and level.M.value == 1:
            rows += gross_check(H, level)
        return [as_check_row(r) for r in rows]

    if suite == "embedding":
        counts = theta_counts(classes, run.d_max, run.workers)
        rows = list(embedding_sum_check(classes, run.d_max, counts)) + list(
            representation_check(classes, run.d_max, counts)
        )
        return [as_check_row(r) for r in rows]

    raise ConfigError(f"unknown suite {suite}")


def cmd_verify(run: RunConfig, suite: str) -> int:
    level = run.validate()
    classes = load_classes(run, level)
    rows = suite_rows(suite, run, level, classes)
    emit(run, rows)
    ok = all(r["ok"] if isinstance(r, dict) else r.ok for r in rows)
    print(f"{level}: suite {suite} {'PASS' if ok else 'FAIL'} ({len(rows)} checks)", file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAILED


def cmd_shatable(run: RunConfig) -> int:
    level = run.validate()
    if run.l is None:
        raise ConfigError("shatable needs --l")
    classes = load_classes(run, level)
    eig = _eigensystem(classes, None)
    if eig is None:
        raise ConfigError(f"{level} has no rational cusp eigenvector")
    G = cusp_G(classes, eig, run.d_max, theta_counts(classes, run.d_max, run.workers))
    rows = divisibility_table(level, run.l, run.d_max, G)
    emit(run, rows)
    summary = divisibility_summary(rows)
    print(f"{level}, l={run.l}: {summary['agree']}/{summary['rows']} rows agree "
          f"({100 * summary['agreement_rate']:.1f}%)", file=sys.stderr)
    return EXIT_OK


def cmd_classnum(d_max: int, fmt: str, out: Optional[str]) -> int:
    if d_max < 3:
        raise ConfigError("classnum needs --dmax >= 3")
    rows = [
        {"D": D, "fundamental": is_fundamental_discriminant(-D), "h": class_number(-D), "u": unit_factor(-D)}
        for D in range(3, d_max + 1)
        if is_discriminant(-D)
    ]
    ReportFormatter(fmt).write(rows, out)
    return EXIT_OK


def cmd_graph(run: RunConfig) -> int:
    level = run.validate()
    classes = load_classes(run, level)
    graph = classes.graph if classes.graph is not None else neighbour_graph(classes)
    matrices = brandt_series(classes, graph.prime, run.workers)
    adjacency = graph.adjacency_matrix()
    B_p = matrices[graph.prime]
    matches = all(Fraction(int(adjacency[i, j])) == B_p[i, j] for i in range(classes.n) for j in range(classes.n))
    stats = graph.get_statistics()
    stats["complete"] = graph.is_complete()
    stats["adjacency_equals_brandt"] = matches
    stats["ok"] = matches and stats["is_connected"] and stats["complete"]
    emit(run, [stats])
    return EXIT_OK if stats["ok"] else EXIT_FAILED


# ============================================================================
# Entry point
# ============================================================================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Weight-3/2 Cohen-Eisenstein coefficients at square-free level")
    sub = parser.add_subparsers(dest="command", required=True)

    def level_args(p):
        p.add_argument("--ramified", required=True, help="Ramified primes, comma separated (odd count)")
        p.add_argument("--M", type=int, default=1, help="Square-free Eichler level part (default: 1)")
        p.add_argument("--dmax", type=int, default=DEFAULT_D_MAX, help="Weight-3/2 truncation")
        p.add_argument("--mmax", type=int, default=DEFAULT_M_MAX, help="Brandt matrix truncation")
        p.add_argument("--pmax", type=int, default=DEFAULT_P_MAX, help="Largest prime for eigenvalue sweeps")
        p.add_argument("--l", type=int, default=None, help="Odd prime for congruence suites")
        p.add_argument("--format", choices=SUPPORTED_FORMATS, default="csv")
        p.add_argument("--cache-dir", default=CACHE_DIR)
        p.add_argument("--no-cache", action="store_true", help="Recompute ideal classes, write nothing")
        p.add_argument("--workers", type=int, default=WORKERS)
        p.add_argument("--out", default=None, help="Output file (default: stdout)")

    level_args(sub.add_parser("hseries", help="H from theta series against the class-number formula"))
    verify = sub.add_parser("verify", help="Run a verification suite")
    level_args(verify)
    verify.add_argument("--suite", choices=VERIFY_SUITES, required=True)
    level_args(sub.add_parser("shatable", help="l | m_D against l | h(-D)"))
    level_args(sub.add_parser("graph", help="Neighbour graph statistics"))

    classnum = sub.add_parser("classnum", help="Class numbers h(-D) and u(-D)")
    classnum.add_argument("--dmax", type=int, default=DEFAULT_D_MAX)
    classnum.add_argument("--format", choices=SUPPORTED_FORMATS, default="csv")
    classnum.add_argument("--out", default=None)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(
        level=getattr(logging, LOG_LEVEL.upper(), logging.WARNING),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    args = build_parser().parse_args(argv)
    try:
        if args.command == "classnum":
            return cmd_classnum(args.dmax, args.format, args.out)
        run = run_config(args)
        if args.command == "hseries":
            return cmd_hseries(run)
        if args.command == "verify":
            return cmd_verify(run, args.suite)
        if args.command == "shatable":
            return cmd_shatable(run)
        if args.command == "graph":
            return cmd_graph(run)
    except (ConfigError, CongruencePreconditionError) as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except CohenEisensteinError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_FAILED
    return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
