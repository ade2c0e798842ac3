import math

import pytest
from hypothesis import given, settings, strategies as st

from edsmodel.errors import IndexOutOfRange, NoPrimitivePart
from edsmodel.primesets import DivisorVector, PrimeSets
from edsmodel.ledger import FactorLedger
from edsmodel.curve import Curve, CurveConfig

FROZEN_INDICATORS = {
    (2, 1): 5, (3, 1): 19, (2, 2): 383, (5, 1): 2069, (7, 1): 1487809,
    (2, 3): 111721, (3, 2): 40032130339, (11, 1): 1436582649813763,
}
UNSPLIT_ORIGINS = [13, 16, 17, 19, 23, 25, 27, 29, 31, 32, 37, 41, 43, 47]


def test_indicator_table(sets):
    for (l, j), value in FROZEN_INDICATORS.items():
        atom = sets.indicator(l, j)
        assert atom.value == value and atom.kind == "IdentifiedPrime"
    for n in UNSPLIT_ORIGINS:
        from edsmodel import arith

        l, j = arith.is_prime_power(n)
        assert sets.indicator(l, j).label == f"UNSPLIT({n})"


def test_indicator_is_largest_primitive_atom(sets, ledger):
    for (l, j) in FROZEN_INDICATORS:
        atoms = ledger.primitive_atoms(l**j)
        assert sets.indicator(l, j).value == max(a.value for a in atoms)


def test_m0_is_one(sets):
    rep = sets.compute_m0()
    assert rep.m0 == 1 and rep.empty == []
    assert rep.horizon[2] == 5 and rep.horizon[3] == 3 and rep.horizon[47] == 1


def test_classification(sets):
    assert sets.classify_prime(2).tag == "Bad"
    assert sets.classify_prime(5).tag == "Indicator"
    assert sets.classify_prime(5).origin == (2, 1)
    assert sets.classify_prime(7).tag == "Inverted"  # primitive at 7 but not the largest
    assert sets.classify_prime(29).tag == "Inverted"  # primitive at 5
    assert sets.classify_prime(101).tag == "Inverted"  # primitive at 17 next to the block
    assert sets.classify_prime(37).tag == "Unclassified"  # rank 49, outside the ledger
    assert sets.classify("c13").tag == "Indicator"
    n_ind = len(sets.indicator_atoms())
    assert n_ind == len(FROZEN_INDICATORS) + len(UNSPLIT_ORIGINS)


def test_c_and_f_divisors(sets):
    assert sets.c_divisor(1).is_one()
    assert sets.c_divisor(2) == DivisorVector({"p5": 2})
    assert sets.f_divisor(6) == DivisorVector({"p5": 2, "p19": 2})
    assert sets.y_set(12) == frozenset({"p5", "p19", "p383"})
    with pytest.raises(IndexOutOfRange):
        sets.c_divisor(49)


def test_supports(sets):
    assert sets.support(2) == frozenset({"p5"})
    assert sets.primitive_support(3) == frozenset({"p19"})
    with pytest.raises(IndexOutOfRange):
        sets.support(0)


def test_missing_primitive_part_raises():
    # [1]P integral: den_x(1) = 1 has no primitive atom
    sets = PrimeSets(FactorLedger(Curve(CurveConfig(n_max=4))))
    with pytest.raises(NoPrimitivePart):
        sets.indicator(1, 1)


vectors = st.dictionaries(st.sampled_from(["p5", "p19", "p383", "c13"]), st.integers(1, 6)).map(DivisorVector)


@given(vectors, vectors, vectors)
def test_divisor_vector_lattice(a, b, c):
    assert a.divides(a * b) and b.divides(a * b)
    assert a.gcd(b).divides(a) and a.gcd(b).divides(b)
    assert (a * b) * c == a * (b * c)
    assert a.gcd(b) == b.gcd(a)
    if a.divides(b) and b.divides(c):
        assert a.divides(c)
    assert (a**3).support() == a.support()


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 48), st.integers(1, 48))
def test_f_support_gcd(sets, m, n):
    assert sets.y_set(m) & sets.y_set(n) == sets.y_set(math.gcd(m, n))
