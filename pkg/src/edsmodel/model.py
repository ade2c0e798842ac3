"""Points of E as ring quadruples, and the index relations built on top.

Every relation here is decided from ring data (W-divisibility of the
denominators B) and exact group-law arithmetic.  Decoded indices are used
only as hints: to choose shift constants, to order a chain of additions,
and to report transcripts.  A wrong hint can make a check slower or make it
refuse to run, never make it accept.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from gmpy2 import mpq

from . import arith
from .curve import INFINITY, Curve, RationalPoint
from .errors import AmbiguousSquare, DecodeNotFound, HorizonExceeded, LawViolation, NoWitness, NotOnCurve
from .ring import Ring

# Shift targets k + c for the polarization step.  They need |k1| > 4 and
# k1(k1+1) inside the horizon; 5 is left out because the (k1-1) | (k4-1)
# test cannot separate 25 from the decoy -35 there (4 divides 36).
SQUARABLE = (-5, 6, -6)


@dataclass(frozen=True)
class Quadruple:
    U: object
    V: object
    X: object
    Y: object

    def __post_init__(self):
        for name in "UVXY":
            object.__setattr__(self, name, arith.to_mpq(getattr(self, name)))

    @classmethod
    def from_point(cls, pt: RationalPoint):
        if pt.is_infinity:
            raise ValueError("the point at infinity has no quadruple")
        return cls(pt.x.numerator, pt.x.denominator, pt.y.numerator, pt.y.denominator)

    def point(self) -> RationalPoint:
        if self.V == 0 or self.Y == 0:
            raise ValueError("V and Y must be nonzero")
        return RationalPoint(self.U / self.V, self.X / self.Y)

    def scaled(self, u, w=None):
        """(uU, uV, wX, wY); with unit u, w the represented point is unchanged."""
        u = arith.to_mpq(u)
        w = u if w is None else arith.to_mpq(w)
        return Quadruple(u * self.U, u * self.V, w * self.X, w * self.Y)

    def as_list(self):
        return [arith.fmt_rational(v) for v in (self.U, self.V, self.X, self.Y)]

    @classmethod
    def from_list(cls, items):
        return cls(*[arith.to_mpq(v) for v in items])


@dataclass(frozen=True)
class ReducedPair:
    A: object
    B: object

    def as_list(self):
        return [arith.fmt_rational(self.A), arith.fmt_rational(self.B)]


@dataclass
class SquareResult:
    k1: int
    k4: int
    point: RationalPoint
    transcript: dict = field(default_factory=dict)


@dataclass
class Verdict:
    verdict: bool
    relation: str
    transcript: dict = field(default_factory=dict)

    def as_dict(self):
        return {"relation": self.relation, "verdict": self.verdict, **self.transcript}


class Model:
    def __init__(self, ring: Ring, decode_limit: int | None = None):
        self.ring = ring
        self.curve: Curve = ring.ledger.curve
        self.m0 = ring.sets.m0
        self.n_max = self.curve.n_max
        self.horizon = self.n_max // self.m0
        self.decode_limit = decode_limit or self.n_max
        self.P = self.curve.multiple_point(self.m0)  # generator of the m0-multiples
        top = self.curve.den_x(self.n_max)
        self._height = _log(top) / self.n_max**2
        self._squares = {}
        self._polar = {}

    # -- encoding ---------------------------------------------------------

    def point_of(self, k: int) -> RationalPoint:
        return self.curve.multiple_point(self.m0 * k)

    def encode(self, k: int, bounded: bool = True) -> Quadruple:
        if k == 0:
            raise ValueError("index must be nonzero")
        if bounded and abs(k) > self.horizon:
            raise HorizonExceeded(f"|{self.m0}*{k}| exceeds n_max={self.n_max}")
        return Quadruple.from_point(self.point_of(k))

    def decode_point(self, pt: RationalPoint, limit: int | None = None) -> int:
        if pt.is_infinity:
            raise DecodeNotFound("the point at infinity has index 0")
        if not self.curve.contains(pt):
            raise NotOnCurve(f"{pt} is not on the curve")
        limit = limit or self.decode_limit
        den = int(pt.x.denominator)
        guess = round(math.sqrt(_log(den) / self._height)) if den > 1 else 1
        window = [n for n in range(guess - 3, guess + 4) if 1 <= n <= limit]
        seen = set()
        for n in window + list(range(1, limit + 1)):
            if n in seen:
                continue
            seen.add(n)
            cand = self.point_of(n)
            if cand.x == pt.x:
                return n if cand.y == pt.y else -n
        raise DecodeNotFound(f"{pt} is not [m0*k]P for any 0 < |k| <= {limit}")

    def decode(self, q: Quadruple, limit: int | None = None) -> int:
        return self.decode_point(q.point(), limit)

    def index(self, q: Quadruple, limit: int | None = None) -> int:
        """The index of q after checking q is a member of E."""
        if q.V == 0 or q.Y == 0:
            raise ValueError("V and Y must be nonzero")
        for v in (q.U, q.V, q.X, q.Y):
            if not self.ring.contains(v):
                raise ValueError(f"{arith.fmt_rational(v)} is not in the ring")
        return self.decode(q, limit)

    def in_E(self, q: Quadruple, limit: int | None = None) -> bool:
        try:
            self.index(q, limit)
        except (ValueError, DecodeNotFound, NotOnCurve):
            return False
        return True

    def quad_equiv(self, q1: Quadruple, q2: Quadruple) -> bool:
        return self.index(q1) == self.index(q2)

    def reduced_pair(self, q: Quadruple) -> ReducedPair:
        if q.U != 0 and self.ring.coprime(q.U, q.V):
            return ReducedPair(q.U, q.V)
        x = q.U / q.V
        return ReducedPair(mpq(x.numerator), mpq(x.denominator))

    def nn_B(self, q: Quadruple) -> dict:
        return self.ring.non_inverted_part(self.reduced_pair(q).B)

    # -- basic relations ----------------------------------------------------

    def plus_check(self, q1, q2, q3) -> Verdict:
        ks = [self.index(q) for q in (q1, q2, q3)]
        total = self.curve.add(q1.point(), q2.point())
        ok = total == q3.point()
        return Verdict(ok, "plus", {"indices": ks})

    def _B(self, q_or_pt):
        if isinstance(q_or_pt, RationalPoint):
            return mpq(q_or_pt.x.denominator)
        return self.reduced_pair(q_or_pt).B

    def _divides_B(self, b1, b2) -> bool:
        return self.ring.divides(b1, b2)

    def divide_check(self, q1, q2, limit: int | None = None) -> Verdict:
        ks = [self.index(q, limit) for q in (q1, q2)]
        b1, b2 = self._B(q1), self._B(q2)
        ok = self._divides_B(b1, b2)
        return Verdict(ok, "divide", {"indices": ks, "nn_B": [self._nn(b1), self._nn(b2)]})

    def _nn(self, b):
        return dict(sorted(self.ring.non_inverted_part(b).items()))

    def _product_conditions(self, b1, b2, b3):
        coprime = self.ring.coprime(b1, b2)
        lower = self._divides_B(b1 * b2, b3)
        upper = self._divides_B(b3, (b1 * b2) ** 3)
        return {"coprime": coprime, "B1B2|B3": lower, "B3|B1^3B2^3": upper}

    def direct_product_check(self, q1, q2, q3) -> Verdict:
        ks = [self.index(q) for q in (q1, q2, q3)]
        conds = self._product_conditions(*(self._B(q) for q in (q1, q2, q3)))
        return Verdict(all(conds.values()), "direct_product", {"indices": ks, "conditions": conds})

    # -- squaring -------------------------------------------------------------

    def _small_multiples(self):
        out = {}
        for m in range(1, 5):
            pt = self.point_of(m)
            out[pt], out[-pt] = m, -m
        return out

    def _index_divides(self, pt_a, pt_b) -> bool:
        # index 0 is divisible by everything
        return pt_b.is_infinity or self._divides_B(self._B(pt_a), self._B(pt_b))

    def square_of_index(self, q1: Quadruple, repair: bool = False) -> SquareResult:
        """Find k4 = k1^2 from k2 = k1 + 1, the product sandwich and (k1-1) | (k4-1).

        With repair=True the extra condition (k1+2) | (k4-4) is imposed as well;
        it is needed only at k1 = 5, where the decoy -k1^2-2k1 survives.
        """
        pt1 = q1.point()
        hit = self._squares.get((pt1, repair))
        if hit is not None:
            return hit
        k1 = self.index(q1)
        small = self._small_multiples()
        if pt1 in small:
            raise ValueError(f"squaring needs |k1| > 4, got a point of index {small[pt1]}")
        if abs(k1 * (k1 + 1)) > self.horizon:
            raise HorizonExceeded(f"k1(k1+1) = {k1 * (k1 + 1)} is beyond the search range {self.horizon}")
        pt2 = self.curve.add(pt1, self.P)
        b1 = self.reduced_pair(q1).B
        b2 = self._B(Quadruple.from_point(pt2))
        rows, survivors = [], []
        for k3 in [k for m in range(1, self.horizon + 1) for k in (m, -m)]:
            pt3 = self.point_of(k3)
            conds = self._product_conditions(b1, b2, self._B(pt3))
            conds.pop("coprime")
            if all(conds.values()):
                survivors.append((k3, pt3))
        coprime = self.ring.coprime(b1, b2)
        shifted1 = self.curve.sub(pt1, self.P)
        lifted1 = self.curve.add(pt1, self.curve.scale(self.P, 2))
        accepted = []
        for k3, pt3 in survivors:
            pt4 = self.curve.sub(pt3, pt1)
            if pt4.is_infinity:
                rows.append({"k3": k3, "k4": 0, "divide": None, "kept": False})
                continue
            div = self._index_divides(shifted1, self.curve.sub(pt4, self.P))
            row = {"k3": k3, "k4": k3 - k1, "divide": div}
            kept = div
            if repair:
                row["repair_divide"] = self._index_divides(lifted1, self.curve.sub(pt4, self.curve.scale(self.P, 4)))
                kept = kept and row["repair_divide"]
            row["kept"] = kept
            rows.append(row)
            if kept:
                accepted.append((k3 - k1, pt4))
        transcript = {
            "k1": k1,
            "k2": k1 + 1,
            "repair": repair,
            "coprime_B1_B2": coprime,
            "sandwich_survivors": [k for k, _ in survivors],
            "candidates": rows,
        }
        if not coprime or not accepted:
            raise NoWitness(f"no k3 in range {self.horizon} passes the squaring conditions for k1={k1}")
        if len(accepted) > 1:
            raise AmbiguousSquare(f"squaring of {k1} is ambiguous: k4 in {[k for k, _ in accepted]}", transcript)
        k4, pt4 = accepted[0]
        if k4 != k1 * k1 or self.decode_point(pt4, max(self.decode_limit, k4)) != k4:
            raise LawViolation(f"squaring of {k1} produced {k4}")
        res = SquareResult(k1, k4, pt4, transcript)
        self._squares[(pt1, repair)] = res
        return res

    # -- multiplication -------------------------------------------------------

    def _shift_for(self, k: int) -> int:
        return min((t - k for t in SQUARABLE), key=lambda c: (abs(c), c))

    def _shifted_square(self, pt: RationalPoint, hint: int):
        """Returns (T, c) with T = Sq(pt + [c]P), so [k^2]P = T - [2c]pt - [c^2]P."""
        if pt.is_infinity:
            return INFINITY, 0
        c = self._shift_for(hint)
        shifted = self.curve.add(pt, self.curve.scale(self.P, c))
        sq = self.square_of_index(Quadruple.from_point(shifted))
        return sq.point, c

    def _chain(self, terms):
        """Sum (point, index-hint) terms, picking the next term to keep the running index small."""
        acc, acc_idx = INFINITY, 0
        pending = list(terms)
        while pending:
            best = min(range(len(pending)), key=lambda i: (abs(acc_idx + pending[i][1]), i))
            pt, idx = pending.pop(best)
            acc, acc_idx = self.curve.add(acc, pt), acc_idx + idx
        return acc

    def _polarization(self, pt1, k1, pt2, k2):
        key = (pt1, pt2)
        hit = self._polar.get(key)
        if hit is not None:
            return hit
        pt12 = self.curve.add(pt1, pt2)
        t1, c1 = self._shifted_square(pt1, k1)
        t2, c2 = self._shifted_square(pt2, k2)
        t12, c12 = self._shifted_square(pt12, k1 + k2)
        e1, e2 = 2 * (c12 - c1), 2 * (c12 - c2)
        const = c12 * c12 - c1 * c1 - c2 * c2
        # [2k1k2]P = S(k1+k2) - S(k1) - S(k2), collected by which point is scaled
        terms = [
            (t12, (k1 + k2 + c12) ** 2),
            (-t1, -((k1 + c1) ** 2)),
            (-t2, -((k2 + c2) ** 2)),
            (self.curve.scale(pt1, -e1), -e1 * k1),
            (self.curve.scale(pt2, -e2), -e2 * k2),
            (self.curve.scale(self.P, -const), -const),
        ]
        out = (self._chain(terms), {"shifts": [c1, c2, c12]})
        self._polar[key] = out
        return out

    def times_check(self, q1, q2, q3, limit: int | None = None) -> Verdict:
        k1, k2, k3 = (self.index(q, limit) for q in (q1, q2, q3))
        pt1, pt2, pt3 = q1.point(), q2.point(), q3.point()
        twice_product, info = self._polarization(pt1, k1, pt2, k2)
        ok = self.curve.add(pt3, pt3) == twice_product
        return Verdict(ok, "times", {"indices": [k1, k2, k3], **info})


def _log(n: int) -> float:
    n = int(n)
    if n <= 1:
        return 0.0
    shift = max(0, n.bit_length() - 64)
    return math.log(n >> shift) + shift * math.log(2)
