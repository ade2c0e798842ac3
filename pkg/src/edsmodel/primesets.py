"""Prime-set combinatorics over the ledger: supports, indicators, a_l, m0 and f_n."""

from __future__ import annotations

from dataclasses import dataclass, field

from . import arith
from .errors import IndexOutOfRange, NoPrimitivePart
from .ledger import Atom, FactorLedger

BAD = "Bad"
INVERTED = "Inverted"
INDICATOR = "Indicator"
UNCLASSIFIED = "Unclassified"


class DivisorVector:
    """Finite map atom-id -> nonnegative exponent, compared componentwise."""

    __slots__ = ("entries",)

    def __init__(self, entries=None):
        self.entries = {a: int(e) for a, e in (entries or {}).items() if e}
        if any(e < 0 for e in self.entries.values()):
            raise ValueError("divisor exponents must be nonnegative")

    def divides(self, other: DivisorVector) -> bool:
        return all(other.entries.get(a, 0) >= e for a, e in self.entries.items())

    def __mul__(self, other):
        out = dict(self.entries)
        for a, e in other.entries.items():
            out[a] = out.get(a, 0) + e
        return DivisorVector(out)

    def __pow__(self, k: int):
        return DivisorVector({a: e * k for a, e in self.entries.items()})

    def gcd(self, other):
        return DivisorVector({a: min(e, other.entries.get(a, 0)) for a, e in self.entries.items()})

    def is_one(self) -> bool:
        return not self.entries

    def support(self) -> frozenset:
        return frozenset(self.entries)

    def __eq__(self, other):
        return isinstance(other, DivisorVector) and self.entries == other.entries

    def __hash__(self):
        return hash(frozenset(self.entries.items()))

    def __repr__(self):
        return f"DivisorVector({dict(sorted(self.entries.items()))})"


@dataclass(frozen=True)
class Classification:
    tag: str
    origin: tuple | None = None  # (l, j) of the p_{l^j} this atom stands for


@dataclass
class M0Report:
    m0: int
    a: dict = field(default_factory=dict)  # l -> a_l
    horizon: dict = field(default_factory=dict)  # l -> largest j with l^j <= n_max
    empty: list = field(default_factory=list)  # (l, j) with no primitive part

    def as_dict(self):
        return {
            "m0": self.m0,
            "a": {str(l): v for l, v in sorted(self.a.items())},
            "horizon": {str(l): v for l, v in sorted(self.horizon.items())},
            "empty": [list(t) for t in self.empty],
            "assumed": "primitive parts of l^j beyond n_max are assumed nonempty",
        }


class PrimeSets:
    def __init__(self, ledger: FactorLedger):
        self.ledger = ledger
        self.n_max = ledger.curve.n_max
        ledger.build_all()
        self._m0 = None
        self._classes = None

    def _check(self, n):
        if n == 0 or abs(n) > self.n_max:
            raise IndexOutOfRange(f"index {n} outside 0 < |n| <= {self.n_max}")

    def support(self, n: int) -> frozenset:
        self._check(n)
        return frozenset(self.ledger.require(abs(n)).entries)

    def primitive_support(self, n: int) -> frozenset:
        return frozenset(a.id for a in self.ledger.primitive_atoms(n))

    def indicator(self, l: int, j: int) -> Atom:
        n = l**j
        self._check(n)
        atoms = self.ledger.primitive_atoms(n)
        if not atoms:
            raise NoPrimitivePart(f"index {l}^{j} has no primitive part")
        return max(atoms, key=lambda a: a.value)

    def compute_m0(self) -> M0Report:
        if self._m0 is None:
            report = M0Report(1)
            for l in arith.primes_up_to(self.n_max):
                top, a_l = 0, 1
                while l ** (top + 1) <= self.n_max:
                    top += 1
                    if not self.ledger.primitive_atoms(l**top):
                        report.empty.append((l, top))
                        a_l = top + 1
                report.a[l], report.horizon[l] = a_l, top
                report.m0 *= l ** (a_l - 1)
            self._m0 = report
        return self._m0

    @property
    def m0(self) -> int:
        return self.compute_m0().m0

    def _classify_all(self) -> dict:
        if self._classes is None:
            m0 = self.m0
            out = {}
            for atom in self.ledger.atoms.values():
                out[atom.id] = Classification(INVERTED)
            for l in arith.primes_up_to(self.n_max):
                shift = arith.valuation(m0, l)
                j = 1
                while l ** (j + shift) <= self.n_max:
                    try:
                        atom = self.indicator(l, j + shift)
                    except NoPrimitivePart:
                        atom = None
                    if atom is not None:
                        out[atom.id] = Classification(INDICATOR, (l, j + shift))
                    j += 1
            self._classes = out
        return self._classes

    def classify(self, atom_id: str) -> Classification:
        return self._classify_all().get(atom_id, Classification(UNCLASSIFIED))

    def classify_prime(self, p: int) -> Classification:
        if p in self.ledger.bad:
            return Classification(BAD)
        return self.classify(f"p{p}")

    def indicator_atoms(self) -> list:
        ids = [a for a, c in self._classify_all().items() if c.tag == INDICATOR]
        return sorted((self.ledger.atoms[a] for a in ids), key=lambda a: (a.origin, a.value))

    def inverted_atoms(self) -> list:
        ids = [a for a, c in self._classify_all().items() if c.tag == INVERTED]
        return sorted((self.ledger.atoms[a] for a in ids), key=lambda a: (a.origin, a.value))

    def q_indicator(self, l: int, j: int) -> Atom:
        """The shifted indicator q_{l^j} = p_{l^(j + ord_l m0)}."""
        return self.indicator(l, j + arith.valuation(self.m0, l))

    def c_divisor(self, n: int) -> DivisorVector:
        """Restriction of the factorization of den_x(n) to the non-inverted atoms."""
        self._check(n)
        rec = self.ledger.require(abs(n))
        classes = self._classify_all()
        return DivisorVector({a: e for a, e in rec.entries.items() if classes[a].tag == INDICATOR})

    def f_divisor(self, n: int) -> DivisorVector:
        self._check(self.m0 * n)
        return self.c_divisor(self.m0 * n)

    def y_set(self, k: int) -> frozenset:
        return self.f_divisor(k).support()
