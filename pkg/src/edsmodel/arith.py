"""Integer plumbing: sieving, valuations, probable-prime tests, budgeted factoring.

All big-integer work goes through gmpy2; results are handed back as plain
Python ints so they serialize and hash predictably.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import gmpy2
from gmpy2 import mpq, mpz

PRIME_ROUNDS = 64
_DETERMINISTIC_LIMIT = 1 << 64


@dataclass(frozen=True)
class FactorBudget:
    trial_bound: int = 10**6
    rho_iterations: int = 1 << 16
    rounds: int = PRIME_ROUNDS

    def as_dict(self):
        return {
            "trial_bound": self.trial_bound,
            "rho_iterations": self.rho_iterations,
            "prime_rounds": self.rounds,
        }


@dataclass
class Factorization:
    """Outcome of a budgeted factoring attempt: n == prod(p**e) * prod(unsplit)."""

    primes: dict = field(default_factory=dict)
    unsplit: list = field(default_factory=list)

    @property
    def complete(self):
        return not self.unsplit


@lru_cache(maxsize=8)
def primes_up_to(bound: int) -> tuple:
    if bound < 2:
        return ()
    sieve = bytearray([1]) * (bound + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(bound) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, bound + 1, p)))
    return tuple(i for i, flag in enumerate(sieve) if flag)


@lru_cache(maxsize=4)
def _primorial(bound: int):
    return gmpy2.primorial(bound)


def prime_count(x: int) -> int:
    import bisect

    ps = primes_up_to(max(2, int(x)))
    return bisect.bisect_right(ps, x)


def is_probable_prime(n, rounds: int = PRIME_ROUNDS) -> bool:
    return n >= 2 and bool(gmpy2.is_prime(mpz(n), rounds))


def prime_status(n, rounds: int = PRIME_ROUNDS) -> str:
    if not is_probable_prime(n, rounds):
        return "composite-unsplit"
    # BPSW has no known counterexample and is verified below 2**64.
    return "proven-prime" if n < _DETERMINISTIC_LIMIT else "probable-prime"


def valuation(n, p) -> int:
    """Exponent of p in the nonzero integer n."""
    if n == 0:
        raise ValueError("valuation of zero")
    return int(gmpy2.remove(mpz(n), mpz(p))[1])


def strip(n, p):
    """Return (n with all factors p removed, exponent removed)."""
    rest, e = gmpy2.remove(mpz(n), mpz(p))
    return int(rest), int(e)


def is_prime_power(n: int):
    """Return (l, j) with n == l**j, l prime, or None."""
    if n < 2:
        return None
    for j in range(n.bit_length(), 0, -1):
        root, exact = gmpy2.iroot(mpz(n), j)
        if exact and is_probable_prime(root):
            return int(root), j
    return None


def divisors(n: int) -> list:
    small, large = [], []
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
    return small + large[::-1]


def integer_factor_small(n: int) -> dict:
    """Complete factorization of a small positive integer by trial division."""
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def trial_divide(n, bound: int):
    """Split off every prime <= bound from n; returns (primes dict, remaining cofactor)."""
    n = mpz(n)
    found = {}
    g = gmpy2.gcd(n, _primorial(bound))
    if g > 1:
        for p in primes_up_to(bound):
            if g % p == 0:
                n, e = gmpy2.remove(n, p)
                found[p] = int(e)
                g //= p
                if g == 1:
                    break
    return found, n


def pollard_brent(n, iterations: int, seed: int = 1):
    """Deterministic Brent-rho; returns a nontrivial factor or None within the cap."""
    n = mpz(n)
    if n % 2 == 0:
        return mpz(2)
    spent = 0
    c = mpz(seed)
    while spent < iterations:
        y, r, q, g = mpz(2), 1, mpz(1), mpz(1)
        x = ys = y
        while g == 1 and spent < iterations:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(128, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gmpy2.gcd(q, n)
                k += 128
            spent += r
            r *= 2
        if g == n:
            g = mpz(1)
            while g == 1:
                ys = (ys * ys + c) % n
                g = gmpy2.gcd(abs(x - ys), n)
        if 1 < g < n:
            return g
        c += 1
    return None


def factor(n, budget: FactorBudget) -> Factorization:
    """Trial division to budget.trial_bound, then rho on what remains."""
    result = Factorization()
    small, rest = trial_divide(n, budget.trial_bound)
    result.primes.update(small)
    stack = [rest] if rest > 1 else []
    while stack:
        m = stack.pop()
        root, exact = gmpy2.iroot(m, 2)
        if exact:
            sub = factor(root, budget)
            for p, e in sub.primes.items():
                result.primes[p] = result.primes.get(p, 0) + 2 * e
            result.unsplit.extend(u * u for u in sub.unsplit)
            continue
        if is_probable_prime(m, budget.rounds):
            p = int(m)
            result.primes[p] = result.primes.get(p, 0) + 1
            continue
        d = pollard_brent(m, budget.rho_iterations)
        if d is None:
            result.unsplit.append(int(m))
        else:
            stack.extend([d, m // d])
    result.unsplit.sort()
    result.primes = {int(p): e for p, e in sorted(result.primes.items())}
    return result


def to_mpq(value) -> mpq:
    if isinstance(value, str):
        return mpq(value.strip())
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    return mpq(value)


def to_fraction(value) -> Fraction:
    q = to_mpq(value)
    return Fraction(int(q.numerator), int(q.denominator))


def digits(n) -> int:
    return len(str(abs(mpz(n))))


def fmt_rational(value) -> str:
    q = to_mpq(value)
    # mpz formatting has no digit cap, unlike str(int)
    return str(q.numerator) if q.denominator == 1 else str(q)
