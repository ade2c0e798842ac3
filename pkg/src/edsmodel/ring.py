"""Membership, divisibility and coprimality in the ring of W-integers.

W is the set of inverted primes: every prime except the indicator atoms.
A rational lies in the ring exactly when no indicator prime divides its
reduced denominator, so every query reduces to a gcd against the product
of indicator radicals, plus a certification that whatever is left over in
the denominator is inverted.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import gmpy2
from gmpy2 import mpz

from . import arith
from .apparition import Apparition
from .errors import LawViolation, Unclassifiable
from .primesets import PrimeSets

IN_RING = "InRing"
NOT_IN_RING = "NotInRing"
UNCLASSIFIABLE = "Unclassifiable"

# beyond this the E(F_p) walk for an unknown denominator prime is too slow
ORDER_LIMIT = 10**6


@dataclass
class Membership:
    status: str
    valuations: dict = field(default_factory=dict)  # indicator atom id -> signed valuation
    residual: list = field(default_factory=list)  # rows for primes outside the ledger
    reason: str = ""

    @property
    def in_ring(self) -> bool:
        return self.status == IN_RING

    def as_dict(self):
        return {
            "status": self.status,
            "valuations": dict(sorted(self.valuations.items())),
            "residual": self.residual,
            "reason": self.reason,
        }


@dataclass
class RingVerdict:
    verdict: bool
    op: str
    valuations: dict = field(default_factory=dict)

    def as_dict(self):
        return {"op": self.op, "verdict": self.verdict, "valuations": self.valuations}


def _product(values):
    out = mpz(1)
    for v in values:
        out *= v
    return out


def _remove(n, block):
    n, e = mpz(n), 0
    while n % block == 0:
        n //= block
        e += 1
    return n, e


class Ring:
    def __init__(self, sets: PrimeSets, apparition: Apparition | None = None, order_limit: int = ORDER_LIMIT):
        self.sets = sets
        self.ledger = sets.ledger
        self.apparition = apparition or Apparition(self.ledger.curve)
        self.order_limit = order_limit
        self.indicators = sets.indicator_atoms()
        self._ind_radical = _product(a.radical for a in self.indicators)
        self._inv_radical = _product(a.radical for a in sets.inverted_atoms())
        self.bad = self.ledger.bad

    # -- valuations -------------------------------------------------------

    def atom_valuation(self, atom, n) -> int:
        """Exponent of an indicator atom in the integer n (count of whole blocks)."""
        n = abs(mpz(n))
        if n == 0:
            raise ValueError("valuation of zero")
        if gmpy2.gcd(n, atom.radical) == 1:
            return 0
        if atom.kind == "IdentifiedPrime":
            return arith.valuation(n, atom.value)
        return _remove(n, atom.value)[1]

    def valuations(self, x) -> dict:
        """Signed indicator-atom valuations of a nonzero rational."""
        x = arith.to_mpq(x)
        num, den = x.numerator, x.denominator
        both = gmpy2.gcd(abs(num) * den, self._ind_radical)
        out = {}
        if both == 1:
            return out
        for atom in self.indicators:
            if both % atom.radical:
                continue
            v = self.atom_valuation(atom, num) - self.atom_valuation(atom, den)
            if v:
                out[atom.id] = v
        return out

    # -- membership -------------------------------------------------------

    def _classify_residual(self, den):
        rows, status = [], IN_RING
        fac = arith.factor(den, self.ledger.budget)
        for p in fac.primes:
            row = {"prime": str(p)}
            if p > self.order_limit:
                row["class"] = "unclassifiable"
                row["reason"] = "too large for an order computation"
                status = UNCLASSIFIABLE
            else:
                n_p = self.apparition.rank_of_apparition(p).n_q
                row["n_p"] = n_p
                if n_p <= self.sets.n_max:
                    raise LawViolation(f"{p} has rank {n_p} <= n_max but is missing from the ledger")
                if arith.is_prime_power(n_p):
                    row["class"] = "unclassifiable"
                    row["reason"] = "prime-power rank of apparition beyond n_max"
                    status = UNCLASSIFIABLE
                else:
                    row["class"] = "inverted"
            rows.append(row)
        for u in fac.unsplit:
            rows.append({"cofactor": str(u), "class": "unclassifiable", "reason": "unsplit within budget"})
            status = UNCLASSIFIABLE
        return status, rows

    def membership(self, x) -> Membership:
        x = arith.to_mpq(x)
        if x == 0:
            return Membership(IN_RING)
        den = x.denominator
        for p in self.bad:
            den = gmpy2.remove(den, p)[0]
        if gmpy2.gcd(den, self._ind_radical) != 1:
            vals = {a: v for a, v in self.valuations(x).items() if v < 0}
            culprit = [a.id for a in self.indicators if gmpy2.gcd(den, a.radical) != 1]
            for a in culprit:
                vals.setdefault(a, -1)  # a block only partially present still blocks membership
            return Membership(NOT_IN_RING, vals, reason="indicator atom in the denominator")
        while True:
            g = gmpy2.gcd(den, self._inv_radical)
            if g == 1:
                break
            den //= g
        if den == 1:
            return Membership(IN_RING)
        status, rows = self._classify_residual(den)
        reason = "" if status == IN_RING else "denominator prime could not be certified inverted"
        return Membership(status, residual=rows, reason=reason)

    def contains(self, x) -> bool:
        m = self.membership(x)
        if m.status == UNCLASSIFIABLE:
            raise Unclassifiable(f"{arith.fmt_rational(x)}: {m.reason}")
        return m.in_ring

    # -- divisibility -------------------------------------------------------

    def _require(self, *xs):
        for x in xs:
            if not self.contains(x):
                raise ValueError(f"{arith.fmt_rational(x)} is not in the ring")

    def divides(self, a, b) -> bool:
        a, b = arith.to_mpq(a), arith.to_mpq(b)
        if a == 0:
            raise ValueError("divisor must be nonzero")
        if b == 0:
            return True
        return self.contains(b / a)

    def divides_verdict(self, a, b) -> RingVerdict:
        a, b = arith.to_mpq(a), arith.to_mpq(b)
        self._require(a, b)
        verdict = self.divides(a, b)
        va = self.valuations(a)
        vb = self.valuations(b) if b != 0 else {}
        rows = {k: [va.get(k, 0), vb.get(k, 0)] for k in sorted(set(va) | set(vb))}
        return RingVerdict(verdict, "divides", rows)

    def coprime(self, a, b) -> bool:
        a, b = arith.to_mpq(a), arith.to_mpq(b)
        if a == 0 or b == 0:
            raise ValueError("coprimality needs nonzero arguments")
        g = gmpy2.gcd(a.numerator, b.numerator)
        return self.contains(gmpy2.mpq(1, g))

    def coprime_verdict(self, a, b) -> RingVerdict:
        a, b = arith.to_mpq(a), arith.to_mpq(b)
        self._require(a, b)
        verdict = self.coprime(a, b)
        va, vb = self.valuations(a), self.valuations(b)
        rows = {k: [va.get(k, 0), vb.get(k, 0)] for k in sorted(set(va) | set(vb))}
        return RingVerdict(verdict, "coprime", rows)

    def member_verdict(self, x) -> RingVerdict:
        m = self.membership(x)
        return RingVerdict(m.status == IN_RING, "member", m.as_dict())

    def non_inverted_part(self, x) -> dict:
        """nn_W(x): the indicator atoms with positive valuation."""
        return {a: v for a, v in self.valuations(x).items() if v > 0}

