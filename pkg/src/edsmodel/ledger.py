"""Recursive factorization of den_x(n) into atoms, with JSON persistence.

An atom is either an identified prime or a primitive block: the unsplit
remainder of one index, kept whole.  Every prime inside a block exceeds the
factor budget, hence exceeds n_max, so its exponent never shifts inside the
horizon and the block behaves like a single prime as far as divisibility of
in-range denominators is concerned.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field

import gmpy2
from gmpy2 import mpz

from . import arith
from .curve import Curve
from .errors import CorruptLedger, FingerprintMismatch, IndexOutOfRange, LawViolation, LedgerMissing

PRIME = "IdentifiedPrime"
BLOCK = "PrimitiveCofactor"


@dataclass(frozen=True)
class Atom:
    id: str
    kind: str
    value: int
    origin: int
    status: str

    @property
    def radical(self) -> int:
        """Product of the distinct primes of the atom (value itself for a prime)."""
        if self.kind == PRIME:
            return self.value
        return int(gmpy2.isqrt(self.value))

    @property
    def label(self) -> str:
        return str(mpz(self.value)) if self.kind == PRIME else f"UNSPLIT({self.origin})"

    def as_dict(self):
        return {
            "id": self.id,
            "kind": self.kind,
            "value": str(mpz(self.value)),
            "origin": self.origin,
            "status": self.status,
        }


@dataclass
class DenominatorFactorization:
    n: int
    entries: dict = field(default_factory=dict)  # atom id -> exponent
    bad_part: dict = field(default_factory=dict)  # bad prime -> exponent

    def as_dict(self):
        return {
            "entries": [[a, e] for a, e in self.entries.items()],
            "bad": [[p, e] for p, e in sorted(self.bad_part.items())],
        }


def _atom_sort_key(atom):
    return (atom.origin, atom.kind != PRIME, atom.value)


class FactorLedger:
    def __init__(self, curve: Curve, budget: arith.FactorBudget | None = None):
        self.curve = curve
        self.budget = budget or curve.config.budget
        self.bad = sorted(curve.bad_primes())
        self.atoms = {}
        self.indices = {}
        self.truncated = False
        self._lock = threading.RLock()

    # -- construction -------------------------------------------------

    def build(self, n: int) -> DenominatorFactorization:
        n = abs(n)
        if n == 0 or n > self.curve.n_max:
            raise IndexOutOfRange(f"index {n} outside 1..{self.curve.n_max}")
        with self._lock:
            hit = self.indices.get(n)
            if hit is not None:
                return hit
            for d in arith.divisors(n)[:-1]:
                self.build(d)
            rec = self._factor_index(n)
            self.indices[n] = rec
            return rec

    def build_all(self, upto: int | None = None):
        for n in range(1, (upto or self.curve.n_max) + 1):
            self.build(n)
        return self

    def _predicted_exponent(self, atom: Atom, n: int) -> int:
        if n % atom.origin:
            return 0
        base = self.indices[atom.origin].entries[atom.id]
        if atom.kind == BLOCK:
            return base
        return base + 2 * arith.valuation(n // atom.origin, atom.value)

    def _factor_index(self, n: int) -> DenominatorFactorization:
        rest = mpz(self.curve.den_x(n))
        bad_part = {}
        for p in self.bad:
            rest, e = gmpy2.remove(rest, p)
            if e:
                bad_part[p] = int(e)
        entries = {}
        for atom in sorted(self.atoms.values(), key=_atom_sort_key):
            e = self._predicted_exponent(atom, n)
            if e:
                q, r = gmpy2.f_divmod(rest, mpz(atom.value) ** e)
                if r:
                    raise LawViolation(f"predicted {atom.id}^{e} does not divide den_x({n})")
                rest = q
                entries[atom.id] = e
            if gmpy2.gcd(rest, atom.radical) != 1:
                raise LawViolation(f"{atom.id} left over in den_x({n}) after the predicted part")
        if rest > 1:
            root, exact = gmpy2.iroot(rest, 2)
            if not exact:
                raise LawViolation(f"primitive part of den_x({n}) is not a square")
            fac = arith.factor(root, self.budget)
            for p, e in fac.primes.items():
                atom = Atom(f"p{p}", PRIME, p, n, arith.prime_status(p, self.budget.rounds))
                self.atoms[atom.id] = atom
                entries[atom.id] = 2 * e
            if fac.unsplit:
                radical = 1
                for u in fac.unsplit:
                    radical *= u
                atom = Atom(f"c{n}", BLOCK, radical * radical, n, "composite-unsplit")
                self.atoms[atom.id] = atom
                entries[atom.id] = 1
        return DenominatorFactorization(n, entries, bad_part)

    # -- queries --------------------------------------------------------

    def require(self, n: int) -> DenominatorFactorization:
        n = abs(n)
        rec = self.indices.get(n)
        if rec is None:
            if n == 0 or n > self.curve.n_max:
                raise IndexOutOfRange(f"index {n} outside 1..{self.curve.n_max}")
            raise LedgerMissing(f"index {n} has not been built")
        return rec

    def primitive_atoms(self, n: int) -> list:
        self.require(n)
        return sorted((a for a in self.atoms.values() if a.origin == abs(n)), key=_atom_sort_key)

    def primitive_cofactor(self, n: int) -> int:
        rec = self.require(n)
        out = 1
        for atom in self.primitive_atoms(n):
            out *= atom.value ** rec.entries[atom.id]
        return out

    def reconstruct(self, n: int) -> int:
        rec = self.require(n)
        out = mpz(1)
        for a, e in rec.entries.items():
            out *= mpz(self.atoms[a].value) ** e
        for p, e in rec.bad_part.items():
            out *= mpz(p) ** e
        return int(out)

    def atom(self, atom_id: str) -> Atom:
        return self.atoms[atom_id]

    # -- persistence ------------------------------------------------------

    def fingerprint(self) -> dict:
        return {"curve": self.curve.config.fingerprint(), "budget": self.budget.as_dict()}

    def to_json(self) -> str:
        atoms = sorted(self.atoms.values(), key=_atom_sort_key)
        doc = {
            **self.fingerprint(),
            "atoms": [a.as_dict() for a in atoms],
            "indices": {str(n): self.indices[n].as_dict() for n in sorted(self.indices)},
        }
        return json.dumps(doc, sort_keys=True, indent=1) + "\n"

    def persist(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_json())

    @classmethod
    def from_json(cls, text: str, curve: Curve, budget: arith.FactorBudget | None = None):
        led = cls(curve, budget)
        try:
            doc = json.loads(text)
            found = {"curve": doc["curve"], "budget": doc["budget"]}
        except (ValueError, KeyError, TypeError) as exc:
            raise CorruptLedger(f"unreadable ledger: {exc}") from exc
        if found != led.fingerprint():
            raise FingerprintMismatch(f"ledger was built for {found}, not {led.fingerprint()}")
        try:
            for row in doc["atoms"]:
                atom = Atom(row["id"], row["kind"], int(mpz(row["value"])), int(row["origin"]), row["status"])
                if atom.kind not in (PRIME, BLOCK):
                    raise ValueError(f"unknown atom kind {atom.kind}")
                led.atoms[atom.id] = atom
            for key, row in doc["indices"].items():
                n = int(key)
                entries = {a: int(e) for a, e in row["entries"]}
                missing = set(entries) - set(led.atoms)
                if missing:
                    raise ValueError(f"index {n} references unknown atoms {sorted(missing)}")
                led.indices[n] = DenominatorFactorization(n, entries, {int(p): int(e) for p, e in row["bad"]})
        except (ValueError, KeyError, TypeError) as exc:
            raise CorruptLedger(f"malformed ledger: {exc}") from exc
        if any(n > curve.n_max for n in led.indices):
            # a smaller horizon reads a prefix of a bigger ledger
            led.truncated = True
            led.indices = {n: r for n, r in led.indices.items() if n <= curve.n_max}
            led.atoms = {a: atom for a, atom in led.atoms.items() if atom.origin <= curve.n_max}
        for n in led.indices:
            if any(d not in led.indices for d in arith.divisors(n)):
                raise CorruptLedger(f"index {n} present without all of its divisors")
        return led

    @classmethod
    def load(cls, path, curve: Curve, budget: arith.FactorBudget | None = None):
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except FileNotFoundError as exc:
            raise LedgerMissing(f"no ledger at {path}") from exc
        return cls.from_json(text, curve, budget)

    def __eq__(self, other):
        if not isinstance(other, FactorLedger):
            return NotImplemented
        return self.to_json() == other.to_json()
