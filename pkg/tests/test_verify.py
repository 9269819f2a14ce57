from fractions import Fraction

import pytest

from utils.brandt import QSeries, brandt_series, rational_eigensystem
from utils.errors import CongruencePreconditionError
from utils.theta32 import closed_form_series, cohen_H, cusp_G, theta_counts
from utils.verify import (
    all_passed,
    coefficient_congruence,
    congruence_findings,
    corollary_check,
    divisibility_summary,
    divisibility_table,
    eigenvalue_congruence,
    gross_check,
    hecke_check,
    level_table,
    main_identity_check,
    mass_check,
    plus_space_check,
    rowsum_check,
)


@pytest.fixture(scope="module")
def setup11(level11):
    matrices = brandt_series(level11, 50)
    eig = rational_eigensystem(level11, matrices)
    counts = theta_counts(level11, 300)
    H = cohen_H(level11, 300, counts)
    G = cusp_G(level11, eig, 300, counts)
    return matrices, eig, H, G


def test_mass_check(level2, level11, level66, level6):
    for classes in (level2, level11, level66, level6):
        assert all_passed(mass_check(classes))


@pytest.mark.slow
def test_mass_check_level_210(level210):
    rows = mass_check(level210)
    assert all_passed(rows)
    assert level210.mass_sum() == 3


def test_rowsum_check(level11, setup11):
    matrices = setup11[0]
    rows = rowsum_check(matrices, level11.cfg)
    assert len(rows) == 2 + 50
    assert all_passed(rows)


def test_hecke_check(level11, setup11):
    matrices, eig = setup11[0], setup11[1]
    rows = hecke_check(matrices, level11, eig)
    assert all_passed(rows)
    names = {r.name for r in rows}
    assert names == {"u_eigenvector", "weighted_symmetry", "commute", "multiplicative", "ramanujan_bound"}


def test_rowsum_and_hecke_check_level_66(level66):
    matrices = brandt_series(level66, 30)
    rows = rowsum_check(matrices, level66.cfg)
    assert len(rows) == 2 + 30
    assert all_passed(rows)
    assert all_passed(hecke_check(matrices, level66))


def test_main_identity_and_plus_space(level11, setup11):
    H = setup11[2]
    rows = main_identity_check(H, closed_form_series(level11.cfg, 300))
    assert len(rows) == 301
    assert all_passed(rows)
    assert all_passed(plus_space_check(H))
    bad = QSeries([Fraction(0), Fraction(1)], label="bad")
    assert not all_passed(plus_space_check(bad))


def test_corollary_level_66(level66):
    H = cohen_H(level66, 300)
    rows = corollary_check(H, level66.cfg)
    assert rows and all(r.ok for r in rows)
    table = level_table(rows)
    assert [entry["s"] for entry in table] == sorted(entry["s"] for entry in table)
    assert sum(entry["count"] for entry in table) == len(rows)
    assert all(entry["exceptions"] == 0 for entry in table)
    for r in rows:
        assert r.factor == Fraction(2) ** (3 - 1 - r.s)


def test_gross_prime_level(level11, setup11):
    assert all_passed(gross_check(setup11[2], level11.cfg))


def test_gross_rejects_composite_level(level66):
    with pytest.raises(ValueError):
        gross_check(cohen_H(level66, 20), level66.cfg)


def test_eigenvalue_congruence(level11, setup11):
    matrices, eig = setup11[0], setup11[1]
    report = eigenvalue_congruence(eig, level11.cfg, 5, 50, matrices)
    assert report.ok
    assert report.checked_range == (2, 50)
    control = eigenvalue_congruence(eig, level11.cfg, 7, 50, matrices)
    assert not control.ok


def test_eigenvalue_congruence_preconditions(level11, setup11):
    matrices, eig = setup11[0], setup11[1]
    with pytest.raises(CongruencePreconditionError):
        eigenvalue_congruence(eig, level11.cfg, 3, 50, matrices)  # w = 3
    with pytest.raises(CongruencePreconditionError):
        eigenvalue_congruence(eig, level11.cfg, 9, 50, matrices)


def test_coefficient_congruence(level11, setup11):
    H, G = setup11[2], setup11[3]
    report = coefficient_congruence(H, G, 5)
    assert report.ok
    assert report.lam == (3 if level11.w[0] == 2 else 2)
    assert report.checked_range == (0, 300)

    control = coefficient_congruence(H, G, 7)
    assert not control.ok
    assert control.reason == "inconsistent"
    assert control.failures


def test_coefficient_congruence_edge_cases():
    zero = QSeries([Fraction(0)] * 5)
    assert coefficient_congruence(zero, zero, 5).reason == "indeterminate"
    with pytest.raises(CongruencePreconditionError):
        coefficient_congruence(QSeries([Fraction(1, 5)]), QSeries([Fraction(1)]), 5)
    with pytest.raises(CongruencePreconditionError):
        coefficient_congruence(zero, zero, 2)


def test_congruence_findings(level11, setup11):
    matrices, eig, H, G = setup11
    eigen = eigenvalue_congruence(eig, level11.cfg, 5, 50, matrices)
    coeff = coefficient_congruence(H, G, 5)
    assert congruence_findings(eigen, coeff) == []
    broken = eigenvalue_congruence(eig, level11.cfg, 7, 50, matrices)
    assert len(congruence_findings(broken, coeff)) == 1


def test_divisibility_table(level11, setup11):
    G = setup11[3]
    rows = divisibility_table(level11.cfg, 5, 300, G)
    assert rows
    assert all(r.fundamental for r in rows)
    assert rows[0].D == 3
    assert rows[0].m_D in (1, -1)
    summary = divisibility_summary(rows)
    assert summary["rows"] == len(rows)
    assert summary["agree"] + summary["disagree"] == len(rows)
    assert divisibility_summary([])["agreement_rate"] == 1.0


@pytest.mark.slow
def test_corollary_level_210(level210):
    H = cohen_H(level210, 2000)
    assert H[0] == 3
    rows = corollary_check(H, level210.cfg)
    table = level_table(rows)
    assert table and all(entry["exceptions"] == 0 for entry in table)
    for entry in table:
        assert entry["factor"] == str(Fraction(2) ** (4 - 1 - entry["s"]))


@pytest.mark.slow
def test_level_66_table_to_2000(level66):
    rows = corollary_check(cohen_H(level66, 2000), level66.cfg)
    table = level_table(rows)
    assert {entry["s"] for entry in table} <= {0, 1, 2, 3}
    assert all(entry["exceptions"] == 0 for entry in table)
    assert all(r.factor == Fraction(2) ** (2 - r.s) for r in rows)


@pytest.mark.parametrize("level", ["level11", "level66"])
def test_divisibility_table_full_agreement(request, level):
    classes = request.getfixturevalue(level)
    eig = rational_eigensystem(classes)
    G = cusp_G(classes, eig, 500)
    rows = divisibility_table(classes.cfg, 5, 500, G)
    assert rows
    assert max(r.D for r in rows) <= 500
    summary = divisibility_summary(rows)
    assert summary["disagree"] == 0
    assert summary["agreement_rate"] == 1.0
