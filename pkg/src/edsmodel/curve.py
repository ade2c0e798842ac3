"""Exact chord-tangent arithmetic on y^2 = x^3 + a x + b over Q."""

from __future__ import annotations

import threading
from dataclasses import dataclass

import gmpy2
from gmpy2 import mpq, mpz

from . import arith
from .errors import ConfigError, IndexOutOfRange, NotOnCurve, TorsionCollision


@dataclass(frozen=True)
class CurveConfig:
    a: int = 0
    b: int = -2
    gen_x: object = 3
    gen_y: object = 5
    n_max: int = 48
    factor_budget: int = 10**6
    rho_iterations: int = 1 << 16

    def __post_init__(self):
        object.__setattr__(self, "gen_x", arith.to_mpq(self.gen_x))
        object.__setattr__(self, "gen_y", arith.to_mpq(self.gen_y))
        if 4 * self.a**3 + 27 * self.b**2 == 0:
            raise ConfigError("singular Weierstrass model (4a^3 + 27b^2 = 0)")
        x, y = self.gen_x, self.gen_y
        if y * y != x**3 + self.a * x + self.b:
            raise ConfigError(f"generator ({x}, {y}) is not on the curve")
        if self.n_max < 1:
            raise ConfigError("n_max must be positive")
        if self.n_max >= self.factor_budget:
            # cofactor primes must exceed every in-scope index
            raise ConfigError("guard rule violated: n_max must be < factor_budget")

    @property
    def discriminant(self) -> int:
        return -16 * (4 * self.a**3 + 27 * self.b**2)

    @property
    def budget(self) -> arith.FactorBudget:
        return arith.FactorBudget(self.factor_budget, self.rho_iterations)

    def fingerprint(self) -> dict:
        return {
            "a": str(self.a),
            "b": str(self.b),
            "gen": [arith.fmt_rational(self.gen_x), arith.fmt_rational(self.gen_y)],
        }


@dataclass(frozen=True)
class RationalPoint:
    x: object = None
    y: object = None

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __neg__(self):
        if self.is_infinity:
            return self
        return RationalPoint(self.x, -self.y)

    def __str__(self):
        if self.is_infinity:
            return "O"
        return f"({arith.fmt_rational(self.x)}, {arith.fmt_rational(self.y)})"


INFINITY = RationalPoint()


@dataclass(frozen=True)
class MultipleRecord:
    n: int
    point: RationalPoint
    den_x: int
    den_y: int


class Curve:
    def __init__(self, config: CurveConfig):
        self.config = config
        self.a = mpz(config.a)
        self.b = mpz(config.b)
        self.generator = RationalPoint(config.gen_x, config.gen_y)
        self._cache = {1: self.generator}
        self._lock = threading.Lock()

    @property
    def n_max(self) -> int:
        return self.config.n_max

    def contains(self, p: RationalPoint) -> bool:
        if p.is_infinity:
            return True
        return p.y * p.y == p.x**3 + self.a * p.x + self.b

    def point(self, x, y) -> RationalPoint:
        p = RationalPoint(arith.to_mpq(x), arith.to_mpq(y))
        if not self.contains(p):
            raise NotOnCurve(f"{p} is not on the curve")
        return p

    def add(self, p: RationalPoint, q: RationalPoint) -> RationalPoint:
        if p.is_infinity:
            return q
        if q.is_infinity:
            return p
        if p.x == q.x:
            if p.y == -q.y:
                return INFINITY
            lam = (3 * p.x * p.x + self.a) / (2 * p.y)
        else:
            lam = (q.y - p.y) / (q.x - p.x)
        x3 = lam * lam - p.x - q.x
        return RationalPoint(x3, lam * (p.x - x3) - p.y)

    def sub(self, p, q):
        return self.add(p, -q)

    def scale(self, p: RationalPoint, n: int) -> RationalPoint:
        """[n]p by double-and-add."""
        if n < 0:
            return -self.scale(p, -n)
        acc, run = INFINITY, p
        while n:
            if n & 1:
                acc = self.add(acc, run)
            n >>= 1
            if n:
                run = self.add(run, run)
        return acc

    def _positive_multiple(self, n: int) -> RationalPoint:
        hit = self._cache.get(n)
        if hit is not None:
            return hit
        prev = self._cache.get(n - 1)
        if prev is not None:
            pt = self.add(prev, self.generator)
        else:
            half = self._positive_multiple(n >> 1)
            pt = self.add(half, half)
            if n & 1:
                pt = self.add(pt, self.generator)
        if pt.is_infinity:
            raise TorsionCollision(f"[{n}]P is the point at infinity")
        with self._lock:
            pt = self._cache.setdefault(n, pt)
        return pt

    def multiple_point(self, n: int) -> RationalPoint:
        """[n]P with no horizon check; used for witnesses beyond n_max."""
        if n == 0:
            return INFINITY
        if n < 0:
            return -self._positive_multiple(-n)
        return self._positive_multiple(n)

    def multiple(self, n: int) -> MultipleRecord:
        if n == 0 or abs(n) > self.n_max:
            raise IndexOutOfRange(f"index {n} outside 0 < |n| <= {self.n_max}")
        for k in range(1, abs(n)):
            self._positive_multiple(k)
        pt = self.multiple_point(n)
        return MultipleRecord(n, pt, int(pt.x.denominator), int(pt.y.denominator))

    def den_x(self, n: int) -> int:
        return int(self.multiple_point(n).x.denominator)

    def bad_primes(self) -> frozenset:
        out = {2}
        disc = abs(4 * self.config.a**3 + 27 * self.config.b**2)
        out.update(arith.integer_factor_small(disc))
        for coord in (self.config.gen_x, self.config.gen_y):
            out.update(arith.integer_factor_small(int(coord.denominator)))
        out.discard(1)
        return frozenset(out)

    def torsion_scan(self, bound: int = 10**12) -> dict:
        """Lutz-Nagell search for rational torsion points.

        Only meaningful for an integral model (a, b integers); torsion points are
        integral with y = 0 or y^2 | 4a^3 + 27b^2.
        """
        d = abs(4 * self.config.a**3 + 27 * self.config.b**2)
        if d > bound:
            return {"status": "inconclusive", "candidates": []}
        ys = [0] + [y for y in arith.divisors(d) if d % (y * y) == 0 and y * y <= d]
        ys = sorted(set(ys))
        candidates = []
        for y in ys:
            for x in self._integer_roots(y * y):
                for sy in {y, -y}:
                    pt = RationalPoint(mpq(x), mpq(sy))
                    candidates.append(self._torsion_row(pt))
        candidates.sort(key=lambda r: (int(r["x"]), int(r["y"])))
        return {"status": "complete", "candidates": candidates}

    def _integer_roots(self, rhs: int) -> list:
        # integer x with x^3 + a x + b - rhs = 0
        a, c = self.config.a, self.config.b - rhs
        if c == 0:
            roots = {0}
            if a <= 0:
                r = gmpy2.isqrt(-a)
                if r * r == -a:
                    roots |= {int(r), -int(r)}
            return sorted(roots)
        return sorted(x for d in arith.divisors(abs(c)) for x in (d, -d) if x**3 + a * x + c == 0)

    def _torsion_row(self, pt: RationalPoint) -> dict:
        # Mazur: rational torsion orders are at most 12
        order, acc = None, INFINITY
        for m in range(1, 13):
            acc = self.add(acc, pt)
            if acc.is_infinity:
                order = m
                break
        return {
            "x": str(int(pt.x)),
            "y": str(int(pt.y)),
            "two_torsion": pt.y == 0,
            "order": order,
        }
