"""Prover, verifier and challenger for the one-quantifier definition of Z.

A statement "z is the square of the index k1" is certified against a
challenge b by a witness: indices k2 (a multiple of m1, with b^2 dividing
B2) and k3 = k1 k2, their quadruples and reduced pairs, and the cofactor C
of the congruence (A3 B2 z - B3 A2)^2 = B2^3 C.  A non-square z is refuted
by a power of an indicator prime larger than the numerator of z - k1^2.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import gmpy2
from gmpy2 import mpq

from . import arith
from .errors import EdsModelError, HorizonExceeded, SquareChallenge, Unclassifiable, UnknownAtom
from .model import Model, Quadruple, ReducedPair

H_K = 1


@dataclass(frozen=True)
class ProtocolConfig:
    m1: int = 1
    h_K: int = H_K
    challenge_atom: int = 19
    challenge_set: tuple = (1, 19)
    sieve_bound: int = 5000

    def __post_init__(self):
        if self.h_K != 1:
            raise ValueError("only h_K = 1 (the rational field) is supported")
        if self.m1 < 1:
            raise ValueError("m1 must be positive")


@dataclass
class Witness:
    k1: int
    k2: int
    k3: int
    quads: list  # three Quadruples
    pairs: list  # three ReducedPairs
    C: object

    def as_dict(self):
        return {
            "indices": [self.k1, self.k2, self.k3],
            "quadruples": [q.as_list() for q in self.quads],
            "pairs": [p.as_list() for p in self.pairs],
            "C": arith.fmt_rational(self.C),
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, doc):
        k1, k2, k3 = (int(k) for k in doc["indices"])
        quads = [Quadruple.from_list(q) for q in doc["quadruples"]]
        pairs = [ReducedPair(arith.to_mpq(a), arith.to_mpq(b)) for a, b in doc["pairs"]]
        if len(quads) != 3 or len(pairs) != 3:
            raise ValueError("a witness has exactly three quadruples and three pairs")
        return cls(k1, k2, k3, quads, pairs, arith.to_mpq(doc["C"]))

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


@dataclass
class VerifyResult:
    verdict: bool
    failed: str | None = None
    checks: dict = field(default_factory=dict)

    def as_dict(self):
        return {"verdict": self.verdict, "failed": self.failed, "checks": self.checks}


def power_difference(x, k, h: int):
    """x^h - k^(2h) and its factored form (x - k^2) * sum x^(h-1-r) k^(2r)."""
    x, k = arith.to_mpq(x), arith.to_mpq(k)
    expanded = x**h - k ** (2 * h)
    factored = (x - k * k) * sum(x ** (h - 1 - r) * k ** (2 * r) for r in range(h))
    return expanded, factored


class Protocol:
    def __init__(self, model: Model, config: ProtocolConfig | None = None, decode_limit: int | None = None):
        self.config = config or ProtocolConfig()
        self.model = model
        self.ring = model.ring
        self.ledger = self.ring.ledger
        self.curve = model.curve
        self.horizon = model.horizon
        self.decode_limit = decode_limit or 8 * self.curve.n_max
        if self.ring.sets.classify_prime(self.config.challenge_atom).tag != "Indicator":
            raise ValueError(f"challenge atom {self.config.challenge_atom} is not an indicator prime")
        self._validated = None

    # -- m1 ---------------------------------------------------------------

    def _check_atoms(self):
        bound = self.config.sieve_bound
        out = {a.id: a for a in self.ring.indicators}
        for a in self.ledger.atoms.values():
            if a.kind == "IdentifiedPrime" and a.value <= bound:
                out[a.id] = a
        return sorted(out.values(), key=lambda a: (a.origin, a.value))

    def validate_m1(self, m1: int | None = None, l_range=None, k_range=None) -> dict:
        m1 = m1 or self.config.m1
        n_max = self.curve.n_max
        atoms = self._check_atoms()
        ind_radical = self.ring._ind_radical
        pairs = []
        for l in l_range or range(1, n_max // m1 + 1):
            for k in k_range or range(1, n_max // (m1 * l) + 1):
                if l * k * m1 > n_max:
                    raise HorizonExceeded(f"l*k*m1 = {l * k * m1} exceeds n_max")
                pairs.append((l, k))
        checked = 0
        for l, k in pairs:
            small, big = l * m1, k * l * m1
            x_small, x_big = self.curve.multiple_point(small).x, self.curve.multiple_point(big).x
            diff = x_small / x_big - k * k
            num = abs(diff.numerator)
            den_small = self.ledger.require(small)
            for atom in atoms:
                e = den_small.entries.get(atom.id, 0)
                if not e or num == 0:
                    continue
                if atom.kind == "IdentifiedPrime":
                    ok = 2 * arith.valuation(num, atom.value) >= e
                else:
                    ok = (num * num) % atom.value**e == 0
                checked += 1
                if not ok:
                    return self._m1_report(m1, False, len(pairs), checked, {"l": l, "k": k, "atom": atom.id, "law": "ratio-congruence"})
            # companion: no non-inverted prime of dd(x_l) divides nn(x_kl)
            shared = gmpy2.gcd(gmpy2.gcd(x_small.denominator, ind_radical), x_big.numerator)
            if shared != 1:
                return self._m1_report(m1, False, len(pairs), checked, {"l": l, "k": k, "shared": str(shared), "law": "companion-coprime"})
        return self._m1_report(m1, True, len(pairs), checked, None)

    def _m1_report(self, m1, ok, pairs, checked, failure):
        return {"m1": m1, "ok": ok, "pairs": pairs, "atom_checks": checked, "failure": failure}

    def require_valid_m1(self):
        if self._validated is None:
            self._validated = self.validate_m1()
        if not self._validated["ok"]:
            raise EdsModelError(f"m1={self.config.m1} failed validation: {self._validated['failure']}")

    # -- index construction ---------------------------------------------------

    def index_for_divisor(self, divisor: dict) -> tuple:
        """Least index of the form lcm(n_q q^s) whose denominator the divisor divides.

        Returns (k, verified): verified means k <= n_max and the ledger confirmed it.
        """
        k = 1
        for atom_id, e in sorted(divisor.items()):
            if e <= 0:
                continue
            atom = self.ledger.atoms.get(atom_id)
            if atom is None:
                raise UnknownAtom(f"no atom {atom_id} in the ledger")
            base = self.ledger.require(atom.origin).entries[atom_id]
            if atom.kind == "IdentifiedPrime":
                s = max(0, math.ceil((e - base) / 2))
                need = atom.origin * atom.value**s
            else:
                if e > base:
                    raise UnknownAtom(f"{atom_id} is an unsplit block; exponent {e} > {base} needs its primes")
                need = atom.origin
            k = k * need // math.gcd(k, need)
        verified = False
        if k <= self.curve.n_max:
            rec = self.ledger.require(k)
            verified = all(rec.entries.get(a, 0) >= e for a, e in divisor.items())
        return k, verified

    # -- prover ---------------------------------------------------------------

    def _pair(self, q):
        return self.model.reduced_pair(q)

    def _congruence_C(self, z, pairs):
        (_, _), (a2, b2), (a3, b3) = [(p.A, p.B) for p in pairs]
        return (a3 * b2 * z - b3 * a2) ** 2 / b2**3

    def prove(self, z0: int, b) -> Witness:
        if z0 == 0 or int(z0) != z0:
            raise ValueError("z0 must be a nonzero integer")
        self.require_valid_m1()
        z0 = int(z0)
        b = arith.to_mpq(b)
        if b == 0 or not self.ring.contains(b):
            raise ValueError(f"challenge {arith.fmt_rational(b)} must be a nonzero ring element")
        if abs(z0) > self.horizon:
            raise HorizonExceeded(f"|k1| = {abs(z0)} beyond the horizon {self.horizon}")
        k, _ = self.index_for_divisor(self.ring.non_inverted_part(b * b))
        m1 = self.config.m1
        k2 = k * m1 // math.gcd(k, m1)
        if k2 > self.horizon:
            raise HorizonExceeded(f"k2 = {k2} needed for b = {arith.fmt_rational(b)} exceeds {self.horizon}")
        k3 = z0 * k2
        quads = [self.model.encode(z0), self.model.encode(k2), self.model.encode(k3, bounded=False)]
        pairs = [self._pair(q) for q in quads]
        C = self._congruence_C(mpq(z0 * z0), pairs)
        return Witness(z0, k2, k3, quads, pairs, C)

    # -- verifier -------------------------------------------------------------

    def verify(self, z, k1: int, b, w: Witness) -> VerifyResult:
        z, b = arith.to_mpq(z), arith.to_mpq(b)
        checks = {}
        res = VerifyResult(False, None, checks)

        def fail(tag, why):
            checks[tag] = why
            res.failed = tag
            return res

        stage = "pairs"
        try:
            # each (A, B) is a W-coprime pair for its quadruple
            for q, p in zip(w.quads, w.pairs):
                if q.V == 0 or p.B == 0 or p.A * q.V != q.U * p.B:
                    return fail(stage, "A/B differs from U/V")
                if not (self.ring.contains(p.A) and self.ring.contains(p.B)):
                    return fail(stage, "pair entries outside the ring")
                if p.A == 0 or not self.ring.coprime(p.A, p.B):
                    return fail(stage, "A and B share an indicator atom")
            checks[stage] = True
            stage = "b_divides"
            b2 = w.pairs[1].B
            if b == 0 or not self.ring.divides(b * b, b2):
                return fail(stage, "b^2 does not divide B2")
            checks[stage] = True
            stage = "congruence"
            a2, a3, b3 = w.pairs[1].A, w.pairs[2].A, w.pairs[2].B
            if (a3 * b2 * z - b3 * a2) ** 2 != b2**3 * w.C or not self.ring.contains(w.C):
                return fail(stage, "congruence fails or C outside the ring")
            checks[stage] = True
            # quadruples in E, the second in E1 (index divisible by m1)
            stage = "membership"
            q1, q2, q3 = w.quads
            if q1.point() != self.model.point_of(k1):
                return fail(stage, "first quadruple does not carry index k1")
            for q in w.quads:
                self.model.index(q, self.decode_limit)
            m1q = self.model.encode(self.config.m1)
            if not self.model.divide_check(m1q, q2, self.decode_limit).verdict:
                return fail(stage, "second quadruple not in E1")
            checks[stage] = True
            stage = "times"
            if not self.model.times_check(q1, q2, q3, self.decode_limit).verdict:
                return fail(stage, "times relation fails")
            checks[stage] = True
        except Unclassifiable:
            raise
        except (EdsModelError, ValueError) as exc:
            return fail(stage, f"{type(exc).__name__}: {exc}")
        res.verdict = True
        return res

    # -- challenger -------------------------------------------------------------

    def challenge(self, z, k1: int):
        z = arith.to_mpq(z)
        diff = z - k1 * k1
        if diff == 0:
            raise SquareChallenge(f"z = {k1}^2; no challenge refutes it")
        bound = abs(int(diff.numerator))
        q, m = self.config.challenge_atom, 1
        while q**m <= bound:
            m += 1
        return q**m

    def refute_exhaustively(self, z, k1: int, b) -> dict:
        """Try every canonical witness with 0 < |k2|, |k3| <= horizon against b."""
        z, b = arith.to_mpq(z), arith.to_mpq(b)
        model = self.model
        span = [k for m in range(1, self.horizon + 1) for k in (m, -m)]
        tried, passed_64, accepted = 0, 0, []
        quad1 = model.encode(k1) if abs(k1) <= self.horizon else model.encode(k1, bounded=False)
        pair1 = self._pair(quad1)
        for k2 in span:
            if k2 % self.config.m1:
                continue
            q2 = model.encode(k2)
            p2 = self._pair(q2)
            tried += len(span)
            if not self.ring.divides(b * b, p2.B):
                continue
            passed_64 += 1
            for k3 in span:
                q3 = model.encode(k3)
                p3 = self._pair(q3)
                C = self._congruence_C(z, [pair1, p2, p3])
                w = Witness(k1, k2, k3, [quad1, q2, q3], [pair1, p2, p3], C)
                if self.verify(z, k1, b, w).verdict:
                    accepted.append([k2, k3])
        return {"z": arith.fmt_rational(z), "k1": k1, "b": arith.fmt_rational(b), "witnesses": tried,
                "k2_passing_b_divides": passed_64, "accepted": accepted, "refuted": not accepted}

    # -- integrality test -------------------------------------------------------

    def integer_test(self, z0, challenges=None, k1_span: int = 6, exhaustive: bool = False) -> dict:
        z0 = arith.to_mpq(z0)
        challenges = tuple(challenges or self.config.challenge_set)
        if not self.ring.contains(z0):
            return {"z0": arith.fmt_rational(z0), "verdict": False, "reason": "not in the ring", "rounds": []}
        rounds, ok = [], True
        for j in range(2 * H_K + 1):
            root = z0 + j
            zj = root * root
            row = {"j": j, "z": arith.fmt_rational(zj)}
            if zj == 0:
                row.update(status="trivial", note="z_j = 0 is a square of the index-free point")
            elif root.denominator == 1:
                k1 = int(root)
                proofs = []
                for b in challenges:
                    w = self.prove(k1, b)
                    v = self.verify(zj, k1, b, w)
                    proofs.append({"b": arith.fmt_rational(arith.to_mpq(b)), "k2": w.k2, "k3": w.k3, "verdict": v.verdict})
                row.update(status="proved" if all(p["verdict"] for p in proofs) else "failed", k1=k1, proofs=proofs)
            else:
                refutations = []
                for k1 in [k for m in range(1, k1_span + 1) for k in (m, -m)]:
                    b = self.challenge(zj, k1)
                    entry = {"k1": k1, "b": str(b)}
                    if exhaustive:
                        entry["refuted"] = self.refute_exhaustively(zj, k1, b)["refuted"]
                    refutations.append(entry)
                row.update(status="refuted", challenges=refutations)
            if row["status"] in ("failed", "refuted"):
                ok = False
            rounds.append(row)
        closing = None
        if ok:
            # (z0+1)^2 - z0^2 = 2 z0 + 1 and z0^2 integral force z0 integral
            z_sq, z_next = z0 * z0, (z0 + 1) ** 2
            closing = {
                "z0^2": arith.fmt_rational(z_sq),
                "2z0+1": arith.fmt_rational(z_next - z_sq),
                "integral": z_sq.denominator == 1 and (z_next - z_sq).denominator == 1 and z0.denominator == 1,
            }
            ok = closing["integral"]
        return {"z0": arith.fmt_rational(z0), "verdict": ok, "rounds": rounds, "closing": closing}
