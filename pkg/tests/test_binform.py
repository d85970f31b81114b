import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from siegel_hecke.binform import (
    BinQF,
    automorphisms,
    det,
    equivalent,
    has_improper_automorphism,
    reduce,
    reduced_classes,
    transform,
    vectors_up_to,
)
from siegel_hecke.errors import NotPositiveDefinite
from siegel_hecke.series import random_unimodular

reduced = st.integers(1, 12).flatmap(
    lambda c: st.integers(1, c).flatmap(lambda a: st.integers(0, a).map(lambda b: BinQF(a, b, c))))


def test_reduce_example():
    key, g = reduce((5, 14, 10))
    assert key.form == (1, 0, 1)
    assert g == ((-1, -3), (1, 2))
    assert transform((5, 14, 10), g) == (1, 0, 1)


def test_reduce_rejects_indefinite():
    with pytest.raises(NotPositiveDefinite):
        reduce((1, 3, 1))
    with pytest.raises(NotPositiveDefinite):
        reduce((0, 0, 1))


@given(reduced, st.integers(0, 10**6))
def test_reduction_recovers_class(t, seed):
    g = random_unimodular(random.Random(seed))
    u = transform(t, g)
    key, h = reduce(u)
    assert key.form == t
    assert abs(det(h)) == 1 and transform(u, h) == t
    assert u.disc == t.disc


@given(reduced, st.integers(0, 10**6))
def test_proper_reduction(t, seed):
    g = random_unimodular(random.Random(seed))
    key, h = reduce(transform(t, g), proper=True)
    a, b, c = key.form
    assert det(h) == 1
    assert -a < b <= a <= c and (b >= 0 or a != c)
    assert key.form in (t, BinQF(t.a, -t.b, t.c))


def test_proper_classes_split():
    # (2, 1, 3) has no improper automorphism, so it and its mirror are properly inequivalent
    assert reduce((2, 1, 3), proper=True)[0] != reduce((2, -1, 3), proper=True)[0]
    assert equivalent((2, 1, 3), (2, -1, 3)) == ((1, 0), (0, -1))
    assert equivalent((2, 1, 3), (2, -1, 3), proper=True) is None
    assert equivalent((1, 0, 1), (1, 0, 2)) is None


@pytest.mark.parametrize("t, order", [((1, 0, 1), 8), ((1, 1, 1), 12), ((2, 1, 5), 2), ((2, 0, 5), 4), ((2, 2, 5), 4), ((3, 1, 5), 2)])
def test_automorphism_orders(t, order):
    autos = automorphisms(t)
    assert len(autos) == order
    assert all(transform(t, g) == BinQF(*t) for g in autos)


def test_ambiguity():
    assert has_improper_automorphism((1, 0, 1)) and has_improper_automorphism((2, 2, 5))
    assert has_improper_automorphism((2, 1, 2))
    assert not has_improper_automorphism((3, 1, 5))


@given(reduced, st.integers(1, 40))
def test_vectors_match_brute_force(t, bound):
    r = 8
    brute = sorted((x, y) for x, y in itertools.product(range(-r, r + 1), repeat=2)
                   if (x, y) != (0, 0) and t.value(x, y) <= bound)
    assert sorted(vectors_up_to(t, bound)) == brute


def test_reduced_classes_listing():
    classes = reduced_classes(3)
    assert classes[:4] == [(1, 0, 1), (1, 1, 1), (1, 0, 2), (1, 1, 2)]
    assert len(classes) == sum(a + 1 for c in range(1, 4) for a in range(1, c + 1))
    assert all(reduce(t)[0].form == t for t in classes)
