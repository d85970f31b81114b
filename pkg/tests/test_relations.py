import random
from fractions import Fraction

import pytest

from siegel_hecke.binform import BinQF, reduced_classes
from siegel_hecke.errors import NotEigenform, PrimeNotInS, UnsupportedPrime
from siegel_hecke.exact import RealCharacter
from siegel_hecke.relations import (
    RelationReport,
    build_eta_kappa,
    coefficients_read,
    eigenvalues,
    eta_of_p,
    negative_controls,
    u_range,
    verify_duality,
    verify_prop32,
    verify_prop33,
    verify_thm11a,
    verify_thm11b,
    verify_thm11c,
    verify_thm12,
)
from siegel_hecke.series import FourierExpansion, coeff

TRIV = RealCharacter.trivial(1)


def a(f, n):
    return coeff(f, (n, 0, n))


def test_eta_of_p():
    assert eta_of_p(5, 4, TRIV) == 2
    assert eta_of_p(3, 4, TRIV) == 0 and eta_of_p(2, 4, TRIV) == 1
    assert eta_of_p(5, 5, RealCharacter.trivial(4)) == 0  # eps = 0
    assert eta_of_p(3, 10, TRIV, base=3) == 1
    assert eta_of_p(5, 10, TRIV, base=3) == 0  # (-3|5) = -1
    with pytest.raises(UnsupportedPrime):
        eta_of_p(7, 10, TRIV, base=3)  # (-3|7) = +1
    with pytest.raises(UnsupportedPrime):
        eta_of_p(2, 10, TRIV, base=3)


def test_eta_kappa_rows():
    t = build_eta_kappa(3, 2, 4, TRIV, 280, 1012)
    assert t.eta[:2] == [0, 0] and t.kappa[:2] == [1, 280]
    # alpha(I; 3) = 0, so eta(9) = lambda~1(9)
    assert t.eta[2] == 1012
    assert t.kappa[2] == 280 * 280 - 3 ** 5 - 3 ** 2 * 1012
    with pytest.raises(ValueError):
        build_eta_kappa(3, 2, 4, TRIV, 280)
    assert build_eta_kappa(2, 0, 4, TRIV, 45).to_json()["kappa"] == ["1"]


def test_kappa_predicts_scaled_coefficients(e8):
    lam, lam1 = eigenvalues(e8, 2)
    t = build_eta_kappa(2, 3, 4, TRIV, lam, lam1)
    assert t.kappa[1] == lam - 4
    assert a(e8, 2) == t.kappa[1] * a(e8, 1)
    assert a(e8, 4) == t.kappa[2] * a(e8, 1)
    assert a(e8, 8) == t.kappa[3] * a(e8, 1)


def test_prop32_examples(e8):
    reports = verify_prop32(e8, 5, 1, 1)
    eq1 = [r for r in reports if r.identity == "prop32-eq1"]
    assert eq1[0].lhs == 0 and eq1[0].passed
    assert eq1[1].lhs == 2 * a(e8, 1) and eq1[1].passed
    eq2 = verify_prop32(e8, 2, 3, 1)[-1]
    assert eq2.lhs == a(e8, 6) and eq2.passed
    assert all(r.passed for r in verify_prop32(e8, 3, 1, 1, base=3, lam=280))  # diag(1, 3) base


def test_thm11a_examples(e8):
    first, second = verify_thm11a(e8, 2, 1)
    assert first.lhs == 45 * a(e8, 1) and first.rhs == 4 * a(e8, 1) + a(e8, 2)
    assert second.passed and second.checks[0]["residual"] == 0
    (first,) = verify_thm11a(e8, 3, 1, parts=("first",))
    assert first.rhs == a(e8, 3)


def test_u_range():
    assert u_range(2) == [] and u_range(3) == [1] and u_range(5) == [1]
    assert u_range(13) == [1, 2, 3, 4, 6]


def test_thm11b_readings(e8, e8_15):
    rep = verify_thm11b(e8, 5, 1, 1)
    assert rep.passed and BinQF(2, 2, 13) in rep.indices  # u = 1 class (2, 10, 25)
    printed = [x for x in rep.readings if x["reading"].startswith("printed-sign")]
    assert all(x["residual"] != 0 for x in printed)
    rep = verify_thm11b(e8_15, 2, 1, 3)
    status = {x["reading"]: x["residual"] for x in rep.readings}
    assert status == {
        "printed-sign/eps-terms-scaled-by-m": -18994674327552000,
        "printed-sign/eps-terms-unscaled": -135193411584000,
        "derived-sign/eps-terms-scaled-by-m": 18859480915968000,
        "derived-sign/eps-terms-unscaled": 0,
    }
    assert rep.passed and rep.reading == "derived-sign/eps-terms-unscaled"


def test_prop33(e8, e8_15):
    for p, r in [(2, 1), (2, 2), (3, 1)]:
        assert verify_prop33(e8, p, r).passed
    rep = verify_prop33(e8, 2, 1)
    assert rep.rhs == -2 * coeff(e8, (1, 0, 4))
    rep = verify_prop33(e8_15, 2, 1, 3)
    assert rep.passed and rep.reading == "m-scaled"
    assert [x["residual"] for x in rep.readings] == [0, 556839360]


def test_prop33_odd_parity():
    pytest.skip("no eigenform with chi(-1)(-1)^k = -1 is generated; the eps = 0 case is not exercised")


def test_thm11c(e8):
    assert verify_thm11c(e8, 5, 1).passed
    rep = verify_thm11c(e8, 2, 3)
    assert rep.passed and rep.lhs == a(e8, 1) * a(e8, 6)
    with pytest.raises(ValueError):
        verify_thm11c(e8, 2, 4)
    bad = dict(e8.coeffs)
    bad[BinQF(6, 0, 6)] += 1
    broken = FourierExpansion(4, 1, TRIV, e8.bound, bad, e8.degenerate, e8.extra)
    with pytest.raises(NotEigenform):
        verify_thm11c(broken, 2, 3)  # the T(3) extraction sees a(6I) first
    rep = verify_thm11c(broken, 2, 3, eigen={3: eigenvalues(e8, 3)})
    assert not rep.passed and rep.residual == a(e8, 1)


def test_thm12_prime_conditions(chi10):
    assert verify_thm12(chi10, 3, 2, 1).passed
    with pytest.raises(PrimeNotInS):
        verify_thm12(chi10, 3, 2, 7)
    with pytest.raises(PrimeNotInS):
        verify_thm12(chi10, 3, 5, 2)
    rep = verify_thm12(chi10, 3, 2, 5)
    assert rep.passed and rep.params == {"m": 2, "n": 5, "base": 3}


def test_homogeneity(e8):
    for s in (-3, 7):
        g = e8.scaled(s)
        assert all(r.passed for r in verify_prop32(g, 2, 1, 2))
        assert verify_thm11b(g, 2, 1, 1).passed and verify_thm11c(g, 2, 3).passed
        assert eigenvalues(g, 3) == eigenvalues(e8, 3)


def test_consistency_triangle(e8):
    lam, _ = eigenvalues(e8, 2, tilde=False)
    for m in (1, 3):
        from_11a = Fraction(4 * a(e8, m) + a(e8, 2 * m), a(e8, m))
        assert from_11a == lam
    kappa = build_eta_kappa(2, 1, 4, TRIV, lam).kappa[1]
    assert kappa == Fraction(a(e8, 2), a(e8, 1)) == lam - 4


def test_duality_holds_for_arbitrary_expansions():
    rng = random.Random(5)
    classes = reduced_classes(12)
    f = FourierExpansion(4, 1, TRIV, 12, {t: rng.randint(-9, 9) for t in classes})
    tested = 0
    for t in classes:
        for p in (2, 3):
            try:
                rep = verify_duality(f, t, p, 1)
            except KeyError:
                continue
            assert rep.passed
            tested += 1
    assert tested > 50


def test_non_eigenform_raises_with_report(e8):
    bad = dict(e8.coeffs)
    bad[BinQF(1, 1, 2)] += 1
    f = FourierExpansion(4, 1, TRIV, e8.bound, bad, e8.degenerate, e8.extra)
    with pytest.raises(NotEigenform) as err:
        verify_prop32(f, 2, 1, 1)
    rep = err.value.report
    assert not rep.passed and rep.residual != 0 and rep.identity == "eigen-tp"


def test_negative_control_harness(e8):
    checks = {"thm11c": lambda F: verify_thm11c(F, 2, 3)}
    result = negative_controls(e8, checks)
    read = coefficients_read(checks["thm11c"], e8)
    assert {BinQF(n, 0, n) for n in (1, 2, 3, 6)} <= read  # plus the T(3) extraction window
    assert set(result.detected) == read and not result.undetected
    assert len(result.unread) == result.total - len(read) and not result.all_detected


def test_report_json():
    rep = RelationReport("x", {"p": 2}, lhs=Fraction(1, 2), rhs=Fraction(1, 2))
    data = rep.to_json()
    assert data["residual"] == "0" and data["lhs"] == "1/2"
