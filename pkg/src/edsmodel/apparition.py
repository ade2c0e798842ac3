"""Rank of apparition of good primes, computed on the reduced curve.

This module is deliberately independent of the factor ledger: it is the
oracle the ledger is cross-checked against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import arith
from .curve import Curve
from .errors import BadPrimeError, LawViolation


@dataclass(frozen=True)
class ApparitionRecord:
    q: int
    n_q: int
    base_val: int


def _order_mod_q(curve: Curve, q: int) -> int:
    a = int(curve.a) % q
    g = curve.generator
    x0 = int(g.x.numerator) * pow(int(g.x.denominator), -1, q) % q
    y0 = int(g.y.numerator) * pow(int(g.y.denominator), -1, q) % q
    limit = q + 1 + 2 * math.isqrt(q) + 2
    x, y = x0, y0
    for n in range(1, limit + 1):
        # (x, y) holds [n]P mod q; test whether adding P lands on O
        if x == x0:
            if (y + y0) % q == 0:
                return n + 1
            lam = (3 * x * x + a) * pow(2 * y, -1, q) % q
        else:
            lam = (y0 - y) * pow(x0 - x, -1, q) % q
        x3 = (lam * lam - x - x0) % q
        y = (lam * (x - x3) - y) % q
        x = x3
    raise LawViolation(f"order of P mod {q} exceeds the Hasse bound")


class _QAdic:
    """Homogeneous projective arithmetic on E over Z/q^K with precision tracking."""

    def __init__(self, curve: Curve, q: int, digits: int):
        self.q, self.a = q, int(curve.a)
        self.mod = q**digits
        g = curve.generator
        m = self.mod
        self.gen = (
            int(g.x.numerator) * pow(int(g.x.denominator), -1, m) % m,
            int(g.y.numerator) * pow(int(g.y.denominator), -1, m) % m,
            1,
            digits,
        )

    def _normalize(self, X, Y, Z, prec):
        q = self.q
        m = q**prec
        X, Y, Z = X % m, Y % m, Z % m
        while prec > 0 and X % q == 0 and Y % q == 0 and Z % q == 0:
            X, Y, Z, prec = X // q, Y // q, Z // q, prec - 1
        if prec <= 0:
            raise ArithmeticError("q-adic precision exhausted")
        return X, Y, Z, prec

    def double(self, p):
        X, Y, Z, prec = p
        W = self.a * Z * Z + 3 * X * X
        S = Y * Z
        B = X * Y * S
        H = W * W - 8 * B
        return self._normalize(2 * H * S, W * (4 * B - H) - 8 * Y * Y * S * S, 8 * S**3, prec)

    def add(self, p1, p2):
        X1, Y1, Z1, e1 = p1
        X2, Y2, Z2, e2 = p2
        u = Y2 * Z1 - Y1 * Z2
        v = X2 * Z1 - X1 * Z2
        A = u * u * Z1 * Z2 - v**3 - 2 * v * v * X1 * Z2
        X3 = v * A
        Y3 = u * (v * v * X1 * Z2 - A) - v**3 * Y1 * Z2
        return self._normalize(X3, Y3, v**3 * Z1 * Z2, min(e1, e2))

    def multiple(self, n):
        acc, run = None, self.gen
        while n:
            if n & 1:
                acc = run if acc is None else self.add(acc, run)
            n >>= 1
            if n:
                run = self.double(run)
        return acc


def _denominator_valuation(curve: Curve, q: int, n: int) -> int:
    digits = 48
    while digits <= 4096:
        try:
            X, Y, Z, prec = _QAdic(curve, q, digits).multiple(n)
        except ArithmeticError:
            digits *= 2
            continue
        if Z % q**prec == 0:
            digits *= 2
            continue
        v = arith.valuation(Z, q) - (arith.valuation(X, q) if X % q**prec else prec)
        return max(v, 0)
    raise LawViolation(f"could not resolve ord_{q} of den x_{n}")


class Apparition:
    def __init__(self, curve: Curve):
        self.curve = curve
        self.bad = curve.bad_primes()
        self._records = {}

    def _check(self, q):
        if q in self.bad:
            raise BadPrimeError(f"{q} is a bad prime")
        if not arith.is_probable_prime(q):
            raise ValueError(f"{q} is not prime")

    def rank_of_apparition(self, q: int) -> ApparitionRecord:
        self._check(q)
        rec = self._records.get(q)
        if rec is None:
            n_q = _order_mod_q(self.curve, q)
            rec = ApparitionRecord(q, n_q, _denominator_valuation(self.curve, q, n_q))
            self._records[q] = rec
        return rec

    def valuation(self, q: int, n: int) -> int:
        """ord_q den_x(n) from the apparition data and the +2 order-change law."""
        rec = self.rank_of_apparition(q)
        n = abs(n)
        if n % rec.n_q:
            return 0
        return rec.base_val + 2 * arith.valuation(n // rec.n_q, q)

    def sieve(self, qmax: int) -> list:
        return [self.rank_of_apparition(q) for q in arith.primes_up_to(qmax) if q not in self.bad]
