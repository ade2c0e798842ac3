"""Finite census of indicator primes and the Hasse-bound certificate."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import arith
from .ledger import BLOCK
from .primesets import INDICATOR, PrimeSets


@dataclass(frozen=True)
class CensusRow:
    X: int
    indicator_count: int
    prime_count: int

    @property
    def ratio(self) -> Fraction:
        if self.prime_count == 0:
            return Fraction(0)
        return Fraction(self.indicator_count, self.prime_count)

    def as_dict(self):
        r = self.ratio
        return {
            "X": self.X,
            "indicator_count": self.indicator_count,
            "prime_count": self.prime_count,
            "ratio": f"{r.numerator}/{r.denominator}",
            "ratio_float": f"{float(r):.6g}",
        }


def hasse_check(sets: PrimeSets) -> dict:
    """Check l^j < 3p for every primitive prime of prime-power origin l^j.

    A rank of apparition l^j divides #E(F_p) <= p + 1 + 2 sqrt(p) < 3p.  Block
    atoms are certified by the budget: trial division removed every prime up
    to trial_bound, and trial_bound >= l^j.
    """
    ledger = sets.ledger
    bound = ledger.budget.trial_bound
    rows, ok = [], True
    for atom in sorted(ledger.atoms.values(), key=lambda a: (a.origin, a.kind, a.value)):
        pp = arith.is_prime_power(atom.origin)
        if pp is None:
            continue
        l, j = pp
        indicator = sets.classify(atom.id).tag == INDICATOR
        if atom.kind == BLOCK:
            passed = bound >= atom.origin
            how = f"all primes > {bound} >= {atom.origin}"
        else:
            passed = atom.origin < 3 * atom.value
            how = f"{atom.origin} < {3 * atom.value}"
        ok = ok and passed
        rows.append({
            "l": l,
            "j": j,
            "origin": atom.origin,
            "atom": atom.label,
            "indicator": indicator,
            "certificate": "budget" if atom.kind == BLOCK else "hasse",
            "check": how,
            "ok": passed,
        })
    return {"ok": ok, "rows": rows}


def census(sets: PrimeSets, xs) -> list:
    values = sorted(a.value for a in sets.indicator_atoms() if a.kind != BLOCK)
    rows = []
    for X in xs:
        count = sum(1 for v in values if v <= X)
        rows.append(CensusRow(int(X), count, arith.prime_count(int(X)) if X >= 2 else 0))
    return rows


def decay_report(rows) -> dict:
    """Whether the ratio is non-increasing past the largest indicator counted.

    Reported only; the density statement is asymptotic.
    """
    rows = sorted(rows, key=lambda r: r.X)
    if not rows:
        return {"tail_from": None, "non_increasing": True}
    final = rows[-1].indicator_count
    start = next(i for i, r in enumerate(rows) if r.indicator_count == final)
    tail = rows[start:]
    mono = all(a.ratio >= b.ratio for a, b in zip(tail, tail[1:]))
    return {"tail_from": tail[0].X, "non_increasing": mono}
