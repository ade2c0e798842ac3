import pytest
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from edsmodel.errors import Unclassifiable
from edsmodel.ring import IN_RING, NOT_IN_RING, UNCLASSIFIABLE

# generators of the ring's multiplicative structure at small scale
INVERTIBLE = [2, 3, 7, 11, 29, 71, 107]  # bad or inverted primes
INDICATORS = [5, 19, 383]


def test_membership_examples(ring):
    assert ring.contains(mpq(1, 7))
    assert ring.contains(mpq(1, 6))
    assert ring.contains(mpq(1, 107))  # rank 108 is not a prime power
    assert not ring.contains(mpq(1, 5))
    assert not ring.contains(mpq(3, 19))
    assert ring.contains(0) and ring.contains(-12)


def test_unclassifiable_denominators(ring):
    for q in (37, 79):  # ranks 49 and 97: prime powers beyond the horizon
        m = ring.membership(mpq(1, q))
        assert m.status == UNCLASSIFIABLE
        with pytest.raises(Unclassifiable):
            ring.contains(mpq(1, q))


def test_block_in_denominator(ring, ledger):
    block = ledger.atom("c13")
    m = ring.membership(mpq(1, block.radical))
    assert m.status == NOT_IN_RING and m.valuations["c13"] < 0


def test_valuations(ring):
    assert ring.valuations(mpq(25 * 7, 19)) == {"p5": 2, "p19": -1}
    assert ring.non_inverted_part(mpq(25 * 19, 7)) == {"p5": 2, "p19": 1}


def test_divides_and_coprime(ring):
    assert ring.divides(5, 95)
    assert not ring.divides(25, 95)
    assert ring.divides(5, mpq(5, 7))  # 7 is a unit
    assert ring.coprime(5, 19)
    assert not ring.coprime(5, 10)
    assert ring.coprime(7, 14)  # they share only units
    v = ring.divides_verdict(5, 95)
    assert v.verdict and v.valuations == {"p19": [0, 1], "p5": [1, 1]}
    with pytest.raises(ValueError):
        ring.divides_verdict(mpq(1, 5), 1)
    with pytest.raises(ValueError):
        ring.divides(0, 5)


def test_member_verdict_is_not_an_error(ring):
    v = ring.member_verdict(mpq(1, 5))
    assert v.verdict is False and v.valuations["status"] == NOT_IN_RING
    assert ring.member_verdict(mpq(1, 7)).valuations["status"] == IN_RING


elements = st.builds(
    lambda sign, inv, ind, den: mpq(sign * inv * ind, den),
    st.sampled_from([1, -1]),
    st.lists(st.sampled_from(INVERTIBLE), max_size=3).map(lambda xs: _prod(xs)),
    st.lists(st.sampled_from(INDICATORS), max_size=3).map(lambda xs: _prod(xs)),
    st.lists(st.sampled_from(INVERTIBLE), max_size=3).map(lambda xs: _prod(xs)),
)


def _prod(xs):
    out = 1
    for x in xs:
        out *= x
    return out


@settings(max_examples=100, deadline=None)
@given(elements, elements)
def test_ring_closed_and_valuations_additive(ring, a, b):
    assert ring.contains(a) and ring.contains(b)
    assert ring.contains(a * b) and ring.contains(a - b)
    va, vb, vab = ring.valuations(a), ring.valuations(b), ring.valuations(a * b)
    for k in set(va) | set(vb):
        assert vab.get(k, 0) == va.get(k, 0) + vb.get(k, 0)


@settings(max_examples=100, deadline=None)
@given(elements, elements, elements)
def test_divisibility_is_a_preorder(ring, a, b, c):
    assert ring.divides(a, a * b)
    if ring.divides(a, b) and ring.divides(b, c):
        assert ring.divides(a, c)
    assert ring.coprime(a, b) == ring.coprime(b, a)
