import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from siegel_hecke.binform import BinQF, has_improper_automorphism, reduced_classes
from siegel_hecke.errors import OutOfBound
from siegel_hecke.exact import RealCharacter
from siegel_hecke.generators import e8_lattice, enumerate_vectors, pair_count
from siegel_hecke.series import (
    FourierExpansion,
    RawSeries,
    assert_class_consistency,
    coeff,
    coeff_scaled,
    multiply,
    one_series,
)


def expansion(values, bound=3, weight=4, chi=None, extra=None):
    chi = chi or RealCharacter.trivial(1)
    classes = reduced_classes(bound)
    coeffs = {t: values[i % len(values)] for i, t in enumerate(classes)}
    return FourierExpansion(weight, chi.modulus, chi, bound, coeffs, {0: values[0]}, extra or {})


@st.composite
def expansions(draw):
    bound = draw(st.integers(1, 4))
    n = len(reduced_classes(bound))
    values = draw(st.lists(st.integers(-(10**30), 10**30), min_size=n, max_size=n))
    weight, chi = draw(st.sampled_from([(4, RealCharacter.trivial(1)), (3, RealCharacter.trivial(4)),
                                         (5, RealCharacter.kronecker_symbol(-4, 4))]))
    coeffs = {t: (0 if weight % 2 and chi(-1) == 1 and has_improper_automorphism(t) else v)
              for t, v in zip(reduced_classes(bound), values)}
    extra = {BinQF(1, 0, bound + 2): draw(st.integers(-5, 5))} if draw(st.booleans()) else {}
    return FourierExpansion(weight, chi.modulus, chi, bound, coeffs, {0: 1, 1: 0}, extra)


def test_totality_and_keys():
    with pytest.raises(ValueError):
        FourierExpansion(4, 1, RealCharacter.trivial(1), 2, {BinQF(1, 0, 1): 1})
    full = {t: 1 for t in reduced_classes(1)}
    with pytest.raises(ValueError):
        FourierExpansion(4, 1, RealCharacter.trivial(1), 1, {**full, BinQF(1, 0, 2): 1})
    with pytest.raises(ValueError):
        FourierExpansion(4, 1, RealCharacter.trivial(1), 1, full, extra={BinQF(1, 0, 1): 3})


def test_coeff_lookup_and_bound():
    f = expansion([7, 11, 13], bound=2, extra={BinQF(1, 0, 4): 99})
    assert coeff(f, (1, 0, 1)) == 7 and coeff(f, (1, 2, 2)) == 7
    assert coeff(f, (1, 2, 5)) == coeff(f, (1, 0, 4)) == 99
    with pytest.raises(OutOfBound):
        coeff(f, (1, 0, 3))
    assert coeff_scaled(f, (2, 0, 2), 1, 2) == 7
    assert coeff_scaled(f, (1, 0, 1), 1, 2) == 0


def test_oriented_sign():
    chi = RealCharacter.trivial(4)
    f = FourierExpansion(3, 4, chi, 2, {t: (0 if has_improper_automorphism(t) else 5) for t in reduced_classes(2)})
    assert f.oriented and f.parity == -1
    # (2, -1, 2) reaches (2, 1, 2) by a det -1 matrix; (2,1,2) is ambiguous so it stores 0
    assert coeff(f, (2, -1, 2)) == 0
    g = FourierExpansion(3, 4, chi, 3, {t: (0 if has_improper_automorphism(t) else 5) for t in reduced_classes(3)})
    assert coeff(g, (2, 1, 3)) == 5 and coeff(g, (2, -1, 3)) == -5


@given(expansions())
@settings(max_examples=60)
def test_round_trip_bit_exact(f):
    text = f.dumps()
    g = FourierExpansion.loads(text)
    assert g == f and g.dumps() == text and g.checksum() == f.checksum()


def test_orientation_flag_checked():
    f = expansion([1, 2])
    data = f.to_json()
    data["oriented"] = True
    with pytest.raises(ValueError):
        FourierExpansion.from_json(data)
    assert json.loads(f.dumps())["coeffs"][0] == [1, 0, 1, "1"]


def test_arithmetic():
    f, g = expansion([1, 2, 3]), expansion([5, 0, -1])
    h = f + g
    assert h.coeffs[BinQF(1, 0, 1)] == 6
    assert (h - g) == f.restrict(f.bound) or (h - g).coeffs == f.coeffs
    assert f.scaled(3).coeffs[BinQF(1, 1, 1)] == 6
    assert f.restrict(1).bound == 1
    with pytest.raises(OutOfBound):
        f.restrict(5)


def test_class_consistency_against_pair_counts():
    lat = e8_lattice()
    vectors = enumerate_vectors(lat, 6)
    coeffs = {t: pair_count(vectors, lat.gram, t) for t in reduced_classes(3)}
    f = FourierExpansion(4, 1, RealCharacter.trivial(1), 3, coeffs)

    def evaluator(t):
        return pair_count(vectors, lat.gram, t) if max(t.a, t.c) <= 3 else None

    report = assert_class_consistency(f, evaluator, samples=4, seed=1)
    assert report.passed and report.checked > 0
    bad = dict(coeffs)
    bad[BinQF(1, 1, 2)] += 1
    report = assert_class_consistency(f.like(bad, 3), evaluator, samples=4, seed=1)
    assert not report.passed and report.failures[0]["rule"] == "transformation-law"


def test_multiply():
    x = RawSeries(1, {(1, 0, 0): 1, (0, 0, 1): 2}, 3)
    y = RawSeries(1, {(0, 0, 0): 1, (1, 1, 1): -1}, 3)
    assert multiply(x, y).terms == multiply(y, x).terms
    assert multiply(x, one_series(1)).terms == x.terms
    sq = multiply(x, x)
    assert sq.terms == {(2, 0, 0): 1, (1, 0, 1): 4, (0, 0, 2): 4}
    assert multiply(sq, y, trace_bound=2).terms == sq.terms
    assert sq.coefficient(1, 0, 1) == 4
    with pytest.raises(ValueError):
        multiply(x, RawSeries(8, {}, 3))
