import json
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from edsmodel import arith
from edsmodel.apparition import _denominator_valuation
from edsmodel.errors import BadPrimeError

import oracles

GOLDEN = json.loads((Path(__file__).parent / "data" / "golden.json").read_text())


def test_orders_match_frozen_table(apparition):
    for q, n_q in GOLDEN["orders"].items():
        assert apparition.rank_of_apparition(int(q)).n_q == n_q


def test_orders_match_naive_walk(apparition):
    for q in oracles.primes_below(1500)[2:]:
        assert apparition.rank_of_apparition(q).n_q == oracles.order_mod(0, -2, 3, 5, q)


def test_examples(apparition):
    assert apparition.rank_of_apparition(5).n_q == 2
    assert apparition.rank_of_apparition(19).n_q == 3
    rec = apparition.rank_of_apparition(7)
    assert (rec.n_q, rec.base_val) == (7, 4)
    assert apparition.rank_of_apparition(383).n_q == 4


def test_bad_and_composite_rejected(apparition):
    for q in (2, 3):
        with pytest.raises(BadPrimeError):
            apparition.rank_of_apparition(q)
    with pytest.raises(ValueError):
        apparition.rank_of_apparition(15)


def test_sieve_skips_bad_primes(apparition):
    recs = apparition.sieve(100)
    assert [r.q for r in recs] == [p for p in oracles.primes_below(100) if p > 3]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([p for p in oracles.primes_below(400) if p > 3]), st.integers(1, 48))
def test_valuation_equals_exact_denominator(curve, apparition, q, n):
    assert apparition.valuation(q, n) == arith.valuation(curve.den_x(n), q)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([5, 7, 19, 29, 43, 71]), st.integers(1, 12))
def test_order_change_law_beyond_horizon(curve, apparition, q, k):
    rec = apparition.rank_of_apparition(q)
    n = rec.n_q * k * (q if k % 2 else 1)
    # direct q-adic valuation of the multiple, independent of the law
    assert _denominator_valuation(curve, q, n) == rec.base_val + 2 * arith.valuation(n // rec.n_q, q)
