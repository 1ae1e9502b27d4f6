"""Sparse integer sequences and their vaporousness certificates.

A sequence here is always a finite truncation.  Certificates record what the
truncation shows (residues settle, consecutive ratios outgrow a linear bound)
and can be re-checked against the terms without repeating the search.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import NoThresholdError, VaporlabError

__all__ = [
    "SparseSequence",
    "ResidueCertificate",
    "GrowthCertificate",
    "VaporousReport",
    "factorials",
    "explicit",
    "steered",
    "pi_enclosure",
    "floor_pi_powers",
    "prime_powers",
    "crt_pair",
    "crt_schedule",
    "steering_step",
    "crt_steer",
    "residue_certificate",
    "growth_certificate",
    "vaporous_report",
]

KINDS = ("factorial", "steered", "explicit")


@dataclass(frozen=True)
class SparseSequence:
    """Strictly increasing truncation of a positive-integer sequence.

    ``start`` is set only for the factorial kind (the argument of the first
    factorial); ``base`` names what a steered sequence was built from.
    """

    kind: str
    terms: tuple[int, ...]
    start: int | None = None
    base: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(int(t) for t in self.terms))
        if self.kind not in KINDS:
            raise VaporlabError(f"unknown sequence kind {self.kind!r}")
        if not self.terms:
            raise VaporlabError("a sequence needs at least one term")
        if self.terms[0] < 1:
            raise VaporlabError(f"terms must be positive, got {self.terms[0]}")
        for i in range(len(self.terms) - 1):
            if self.terms[i + 1] <= self.terms[i]:
                raise VaporlabError(
                    f"terms not strictly increasing at index {i}: "
                    f"{self.terms[i]} then {self.terms[i + 1]}"
                )
        if self.kind == "factorial":
            if self.start is None or self.start < 1:
                raise VaporlabError("factorial sequences need start >= 1")
            f = math.factorial(self.start)
            for i, t in enumerate(self.terms):
                if t != f:
                    raise VaporlabError(f"term {i} is not ({self.start + i})!")
                f *= self.start + i + 1

    @property
    def length(self) -> int:
        return len(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __getitem__(self, i):
        return self.terms[i]

    def header(self) -> dict:
        head = {"kind": self.kind, "length": self.length, "start": self.start}
        if self.base is not None:
            head["base"] = self.base
        return head

    def to_dict(self) -> dict:
        return {**self.header(), "terms": list(self.terms)}

    @classmethod
    def from_dict(cls, data: dict) -> "SparseSequence":
        return cls(data["kind"], tuple(data["terms"]), data.get("start"), data.get("base"))

    def to_text(self) -> str:
        """One JSON header line, then one decimal term per line."""
        lines = [json.dumps(self.header(), sort_keys=True)]
        lines.extend(str(t) for t in self.terms)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "SparseSequence":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise VaporlabError("empty sequence file")
        if lines[0].startswith("{"):
            head = json.loads(lines[0])
            body = lines[1:]
        else:
            head = {"kind": "explicit"}
            body = lines
        terms = tuple(int(x) for x in body)
        if "length" in head and head["length"] != len(terms):
            raise VaporlabError(
                f"header says {head['length']} terms but file has {len(terms)}"
            )
        return cls(head.get("kind", "explicit"), terms, head.get("start"), head.get("base"))


def _terms(seq) -> tuple[int, ...]:
    if isinstance(seq, SparseSequence):
        return seq.terms
    return tuple(seq)


def factorials(start: int, count: int) -> SparseSequence:
    """``[start!, (start+1)!, ...]`` with ``count`` terms."""
    if start < 1:
        raise VaporlabError(
            f"start={start} breaks strict increase: 0! = 1! = 1; use start >= 1"
        )
    if count < 1:
        raise VaporlabError("count must be >= 1")
    terms = []
    f = math.factorial(start)
    for i in range(count):
        terms.append(f)
        f *= start + i + 1
    return SparseSequence("factorial", tuple(terms), start=start)


def explicit(terms: Iterable[int]) -> SparseSequence:
    return SparseSequence("explicit", tuple(terms))


def steered(base: Sequence[int], descriptor: str) -> SparseSequence:
    """Run :func:`crt_steer` on ``base`` and validate the result as a sequence.

    Raises if steering broke strict increase (slowly growing bases).
    """
    return SparseSequence("steered", tuple(crt_steer(base)), base=descriptor)


# -- certified floors of powers of pi ------------------------------------


def _arctan_inv(x: int, one: int) -> tuple[int, int]:
    """Fixed-point ``arctan(1/x) * one`` and an upper bound on its error."""
    x2 = x * x
    power = one // x
    total = 0
    k = 0
    while power:
        term = power // (2 * k + 1)
        total += -term if k & 1 else term
        power //= x2
        k += 1
    # each term is off by < 3 units; the dropped tail is < 2 units
    return total, 3 * k + 2


@lru_cache(maxsize=32)
def pi_enclosure(bits: int) -> tuple[Fraction, Fraction]:
    """Rational ``(lo, hi)`` with ``lo < pi < hi`` and ``hi - lo`` about ``2**-bits``.

    Machin's formula in integer fixed point with explicit error accounting.
    """
    guard = 16
    scale = 1 << (bits + guard)
    a5, e5 = _arctan_inv(5, scale)
    a239, e239 = _arctan_inv(239, scale)
    mid = 16 * a5 - 4 * a239
    err = 16 * e5 + 4 * e239 + 1
    return Fraction(mid - err, scale), Fraction(mid + err, scale)


def floor_pi_powers(count: int, start: int = 1) -> list[int]:
    """Exact ``floor(pi**n)`` for ``n = start, ..., start + count - 1``.

    Each floor is certified: ``pi**n`` is enclosed in a rational interval
    whose endpoints have the same integer part.  The working precision
    doubles until that happens.
    """
    if count < 1:
        raise VaporlabError("count must be >= 1")
    if start < 0:
        raise VaporlabError("exponents must be >= 0")
    bits = 64
    out = []
    for n in range(start, start + count):
        while True:
            lo, hi = pi_enclosure(bits)
            f_lo = lo.numerator**n // lo.denominator**n
            f_hi = hi.numerator**n // hi.denominator**n
            if f_lo == f_hi:
                out.append(f_lo)
                break
            bits *= 2
    return out


# -- prime powers and CRT steering -----------------------------------------


def prime_powers(count: int) -> list[int]:
    """The first ``count`` prime powers ``p**j`` (``j >= 1``) in increasing order."""
    if count < 1:
        raise VaporlabError("count must be >= 1")
    limit = 32
    while True:
        spf = list(range(limit + 1))
        for p in range(2, math.isqrt(limit) + 1):
            if spf[p] == p:
                for q in range(p * p, limit + 1, p):
                    if spf[q] == q:
                        spf[q] = p
        found = []
        for x in range(2, limit + 1):
            p = spf[x]
            y = x
            while y % p == 0:
                y //= p
            if y == 1:
                found.append(x)
                if len(found) == count:
                    return found
        limit *= 2


def crt_pair(a1: int, m1: int, a2: int, m2: int) -> tuple[int, int] | None:
    """Solve ``x = a1 (mod m1)``, ``x = a2 (mod m2)`` for arbitrary moduli.

    Returns ``(x, lcm)`` with ``0 <= x < lcm``, or ``None`` if inconsistent.
    """
    g = math.gcd(m1, m2)
    if (a2 - a1) % g:
        return None
    l = m1 // g * m2
    step = ((a2 - a1) // g * pow(m1 // g, -1, m2 // g)) % (m2 // g)
    return (a1 + step * m1) % l, l


@lru_cache(maxsize=None)
def _lcm_prefix(k: int) -> int:
    """``lcm(p_1, ..., p_k)``; 1 for ``k = 0``."""
    return math.lcm(*prime_powers(k)) if k else 1


def crt_schedule(k: int) -> int:
    """``N_0 = 0``, ``N_k = sum_{t<=k} (lcm(p_1..p_t) - 1)``."""
    if k < 0:
        raise VaporlabError("k must be >= 0")
    return sum(_lcm_prefix(t) - 1 for t in range(1, k + 1))


def _stage_count(n: int) -> int:
    """Largest ``k`` with ``N_k <= n``."""
    k = 0
    total = 0
    while True:
        nxt = total + _lcm_prefix(k + 1) - 1
        if nxt > n:
            return k
        total = nxt
        k += 1


def steering_step(b: int, k: int) -> int:
    """The shift ``r`` applied at stage ``k >= 1``.

    ``0 <= r < lcm(p_1..p_k)``, ``r = -b (mod p_k)`` and ``r = 0 (mod p_t)``
    for ``t < k``.  Requires ``b = 0 (mod p_t)`` for every ``t < k``.
    """
    if k < 1:
        raise VaporlabError("stages start at k = 1")
    p = prime_powers(k)[-1]
    sol = crt_pair(-b % p, p, 0, _lcm_prefix(k - 1))
    if sol is None:
        raise VaporlabError(
            f"{b} is not divisible by the earlier prime powers; stage {k} has no shift"
        )
    return sol[0]


def crt_steer(base: Sequence[int]) -> list[int]:
    """Shift each ``base[n]`` by at most ``n`` so every modulus eventually divides.

    Stage ``k`` is applied to ``base[n]`` once ``n >= N_k``; after it the term
    is divisible by ``p_1, ..., p_k``.  The result need not be increasing.
    """
    base = list(base)
    if not base:
        raise VaporlabError("base must be nonempty")
    out = []
    for n, b in enumerate(base):
        value = int(b)
        for k in range(1, _stage_count(n) + 1):
            value += steering_step(value, k)
        out.append(value)
    return out


# -- certificates ----------------------------------------------------------


@dataclass(frozen=True)
class ResidueCertificate:
    modulus: int
    stabilization_index: int
    stable_residue: int
    truncation_length: int

    @property
    def stabilized(self) -> bool:
        """At least two terms share the stable residue."""
        return self.stabilization_index <= self.truncation_length - 2

    def verify(self, seq) -> bool:
        terms = _terms(seq)
        m, n0 = self.modulus, self.stabilization_index
        if len(terms) != self.truncation_length or not 0 <= n0 < len(terms):
            return False
        if any(t % m != self.stable_residue for t in terms[n0:]):
            return False
        return n0 == 0 or terms[n0 - 1] % m != self.stable_residue

    def to_dict(self) -> dict:
        return {
            "modulus": self.modulus,
            "stabilization_index": self.stabilization_index,
            "stable_residue": self.stable_residue,
            "truncation_length": self.truncation_length,
            "stabilized": self.stabilized,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ResidueCertificate":
        return cls(
            data["modulus"],
            data["stabilization_index"],
            data["stable_residue"],
            data["truncation_length"],
        )


@dataclass(frozen=True)
class GrowthCertificate:
    """``terms[i+1] > t*terms[i] + r_abs`` for every ``k <= i < length-1``."""

    t: int
    r_abs: int
    k: int
    truncation_length: int

    def verify(self, seq) -> bool:
        terms = _terms(seq)
        t, r, k = self.t, self.r_abs, self.k
        if len(terms) != self.truncation_length or not 0 <= k < len(terms) - 1:
            return False
        if any(terms[i + 1] <= t * terms[i] + r for i in range(k, len(terms) - 1)):
            return False
        return k == 0 or terms[k] <= t * terms[k - 1] + r

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "r_abs": self.r_abs,
            "k": self.k,
            "truncation_length": self.truncation_length,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GrowthCertificate":
        return cls(data["t"], data["r_abs"], data["k"], data["truncation_length"])


@dataclass(frozen=True)
class VaporousReport:
    residue_certs: tuple[ResidueCertificate, ...]
    min_tail_ratio: Fraction
    tail_start: int
    generator_proved: bool
    unstabilized: tuple[int, ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "residue_certs": [c.to_dict() for c in self.residue_certs],
            "min_tail_ratio": str(self.min_tail_ratio),
            "tail_start": self.tail_start,
            "generator_proved": self.generator_proved,
            "unstabilized": list(self.unstabilized),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "VaporousReport":
        return cls(
            tuple(ResidueCertificate.from_dict(c) for c in data["residue_certs"]),
            Fraction(data["min_tail_ratio"]),
            data["tail_start"],
            data["generator_proved"],
            tuple(data["unstabilized"]),
        )


def residue_certificate(seq, m: int) -> ResidueCertificate:
    """Smallest ``n0`` after which every term has the final term's residue mod ``m``.

    Always succeeds; when only the last term is in its class the certificate
    is returned with ``stabilized == False``.
    """
    if m < 2:
        raise VaporlabError("modulus must be >= 2")
    terms = _terms(seq)
    if not terms:
        raise VaporlabError("empty sequence")
    stable = terms[-1] % m
    n0 = len(terms) - 1
    while n0 > 0 and terms[n0 - 1] % m == stable:
        n0 -= 1
    return ResidueCertificate(m, n0, stable, len(terms))


def growth_certificate(seq, t: int, r_abs: int) -> GrowthCertificate:
    """Minimal ``k`` with ``terms[i+1] > t*terms[i] + r_abs`` for all ``i >= k``."""
    if t < 1 or r_abs < 0:
        raise VaporlabError("need t >= 1 and r_abs >= 0")
    terms = _terms(seq)
    if len(terms) < 2:
        raise VaporlabError("growth certificates need at least two terms")
    k = len(terms) - 1
    for i in range(len(terms) - 2, -1, -1):
        if terms[i + 1] > t * terms[i] + r_abs:
            k = i
        else:
            break
    if k == len(terms) - 1:
        raise NoThresholdError(
            f"no threshold within truncation: terms[{k}] <= {t}*terms[{k - 1}] + {r_abs}"
        )
    return GrowthCertificate(t, r_abs, k, len(terms))


def vaporous_report(seq: SparseSequence, max_modulus: int, tail_start: int) -> VaporousReport:
    terms = _terms(seq)
    if max_modulus < 2:
        raise VaporlabError("max_modulus must be >= 2")
    if not 0 <= tail_start < len(terms) - 1:
        raise VaporlabError(f"tail_start must lie in [0, {len(terms) - 1})")
    certs = tuple(residue_certificate(terms, m) for m in range(2, max_modulus + 1))
    ratio = min(Fraction(terms[n + 1], terms[n]) for n in range(tail_start, len(terms) - 1))
    proved = isinstance(seq, SparseSequence) and seq.kind == "factorial"
    return VaporousReport(
        certs,
        ratio,
        tail_start,
        proved,
        tuple(c.modulus for c in certs if not c.stabilized),
    )
