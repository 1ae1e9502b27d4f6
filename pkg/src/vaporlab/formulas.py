"""Atomic Presburger formulas and eventual-indiscernibility checks.

Only two atomic shapes are handled: ``x_1+..+x_m = y_1+..+y_n + r`` and
``x = r (mod m)``.  Tuples are drawn from a tail of a sequence: "the tail after
``k``" always means indices strictly greater than ``k``, and ``k = -1``
selects the whole sequence.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from math import comb, perm
from typing import Iterator, Sequence, Union

from .errors import (
    ExtractionError,
    FalsificationError,
    NoThresholdError,
    PatternUnstableError,
    VaporlabError,
)
from .sequences import _terms, growth_certificate, residue_certificate
from .solver import combination_solutions

__all__ = [
    "LinearEq",
    "Congruence",
    "AtomicFormula",
    "parse_formula",
    "formula_from_dict",
    "evaluate",
    "Threshold",
    "threshold",
    "tail_agreement",
    "EIEntry",
    "IndiscernibilityReport",
    "ei_check",
    "set_partitions",
    "PatternTable",
    "equality_pattern_table",
    "ExtractionResult",
    "extract_ei_subsequence",
]

MODES = ("increasing", "injective")


@dataclass(frozen=True)
class LinearEq:
    m: int
    n: int
    r: int

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise VaporlabError("lineq needs m, n >= 1")

    @property
    def arity(self) -> int:
        return self.m + self.n

    def variables(self) -> list[str]:
        return [f"x{i}" for i in range(1, self.m + 1)] + [f"y{j}" for j in range(1, self.n + 1)]

    def holds(self, values: Sequence[int]) -> bool:
        return sum(values[: self.m]) == sum(values[self.m :]) + self.r

    def coefficients(self) -> list[int]:
        return [1] * self.m + [-1] * self.n

    def __str__(self) -> str:
        return f"lineq {self.m} {self.n} {self.r}"

    def to_dict(self) -> dict:
        return {"type": "lineq", "m": self.m, "n": self.n, "r": self.r}


@dataclass(frozen=True)
class Congruence:
    modulus: int
    residue: int

    def __post_init__(self):
        if self.modulus < 2 or not 0 <= self.residue < self.modulus:
            raise VaporlabError("cong needs modulus >= 2 and 0 <= residue < modulus")

    arity = 1

    def variables(self) -> list[str]:
        return ["x"]

    def holds(self, values: Sequence[int]) -> bool:
        return values[0] % self.modulus == self.residue

    def __str__(self) -> str:
        return f"cong {self.modulus} {self.residue}"

    def to_dict(self) -> dict:
        return {"type": "cong", "modulus": self.modulus, "residue": self.residue}


AtomicFormula = Union[LinearEq, Congruence]


def parse_formula(text: str) -> AtomicFormula:
    """Parse ``lineq M N R`` or ``cong M R``."""
    parts = text.split()
    try:
        if parts and parts[0] == "lineq" and len(parts) == 4:
            return LinearEq(int(parts[1]), int(parts[2]), int(parts[3]))
        if parts and parts[0] == "cong" and len(parts) == 3:
            return Congruence(int(parts[1]), int(parts[2]))
    except ValueError as exc:
        raise VaporlabError(f"bad formula {text!r}: {exc}") from None
    raise VaporlabError(f"bad formula {text!r}; expected 'lineq m n r' or 'cong m r'")


def formula_from_dict(data: dict) -> AtomicFormula:
    if data["type"] == "lineq":
        return LinearEq(data["m"], data["n"], data["r"])
    return Congruence(data["modulus"], data["residue"])


def evaluate(phi: AtomicFormula, x_tuple: Sequence[int], y_tuple: Sequence[int] = ()) -> bool:
    if isinstance(phi, LinearEq):
        if len(x_tuple) != phi.m or len(y_tuple) != phi.n:
            raise VaporlabError(
                f"arity mismatch: {phi} takes {phi.m} x-values and {phi.n} y-values, "
                f"got {len(x_tuple)} and {len(y_tuple)}"
            )
        return phi.holds(list(x_tuple) + list(y_tuple))
    if len(x_tuple) != 1 or len(y_tuple) != 0:
        raise VaporlabError(f"arity mismatch: {phi} takes exactly one x-value")
    return phi.holds(x_tuple)


# -- thresholds --------------------------------------------------------------


@dataclass(frozen=True)
class Threshold:
    formula: AtomicFormula
    k_phi: int
    tail_value: bool
    certificate: dict

    def to_dict(self) -> dict:
        return {
            "formula": str(self.formula),
            "k_phi": self.k_phi,
            "tail_value": self.tail_value,
            "certificate": self.certificate,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Threshold":
        return cls(parse_formula(data["formula"]), data["k_phi"], data["tail_value"], data["certificate"])


def _mode_solutions(tail: Sequence[int], phi: LinearEq, mode: str) -> Iterator[tuple[int, ...]]:
    sols = combination_solutions(tail, phi.coefficients(), phi.r)
    if mode == "injective":
        return sols
    return (s for s in sols if all(s[i] < s[i + 1] for i in range(len(s) - 1)))


def tail_agreement(seq, phi: AtomicFormula, k: int, mode: str = "injective") -> tuple[bool, bool | None, int, int]:
    """Check that every ``mode`` tuple from indices ``> k`` gives ``phi`` one value.

    Returns ``(agree, value, n_true, n_tuples)``; ``value`` is ``None`` when
    the tail is too short to realize any tuple.
    """
    if mode not in MODES:
        raise VaporlabError(f"mode must be one of {MODES}")
    terms = _terms(seq)
    if k < -1:
        raise VaporlabError("k must be >= -1")
    tail = terms[k + 1 :]
    if isinstance(phi, Congruence):
        hits = sum(phi.holds((v,)) for v in tail)
        total = len(tail)
    else:
        total = perm(len(tail), phi.arity) if mode == "injective" else comb(len(tail), phi.arity)
        hits = sum(1 for _ in _mode_solutions(tail, phi, mode))
    if total == 0:
        return True, None, 0, 0
    return hits in (0, total), hits == total, hits, total


def threshold(seq, phi: AtomicFormula) -> Threshold:
    """Certificate-backed index past which ``phi`` is constant on injective tuples.

    Linear equations use the growth certificate for ``(max(m, n), |r|)`` and
    are then confirmed false on every injective tuple of the tail.
    Congruences use the residue certificate for the modulus.
    """
    terms = _terms(seq)
    if isinstance(phi, LinearEq):
        cert = growth_certificate(terms, max(phi.m, phi.n), abs(phi.r))
        k = cert.k
        witness = next(iter(combination_solutions(terms[k + 1 :], phi.coefficients(), phi.r)), None)
        if witness is not None:
            idx = [k + 1 + i for i in witness]
            raise FalsificationError(f"{phi} holds at injective indices {idx} beyond k={k}")
        return Threshold(phi, k, False, {"growth": cert.to_dict()})
    cert = residue_certificate(terms, phi.modulus)
    if not cert.stabilized:
        raise NoThresholdError(
            f"no stabilization within truncation modulo {phi.modulus}: "
            "only the last term carries the final residue"
        )
    return Threshold(phi, cert.stabilization_index, cert.stable_residue == phi.residue, {"residue": cert.to_dict()})


@dataclass(frozen=True)
class EIEntry:
    formula: AtomicFormula
    mode: str
    k_phi: int | None
    tail_value: bool | None
    ok: bool
    reason: str = ""

    def to_dict(self) -> dict:
        return {
            "formula": str(self.formula),
            "mode": self.mode,
            "k_phi": self.k_phi,
            "tail_value": self.tail_value,
            "ok": self.ok,
            "reason": self.reason,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "EIEntry":
        return cls(
            parse_formula(data["formula"]),
            data["mode"],
            data["k_phi"],
            data["tail_value"],
            data["ok"],
            data["reason"],
        )


@dataclass(frozen=True)
class IndiscernibilityReport:
    entries: tuple[EIEntry, ...]

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.entries)

    def to_dict(self) -> dict:
        return {"ok": self.ok, "entries": [e.to_dict() for e in self.entries]}

    @classmethod
    def from_dict(cls, data: dict) -> "IndiscernibilityReport":
        return cls(tuple(EIEntry.from_dict(e) for e in data["entries"]))


def ei_check(seq, formulas: Sequence[AtomicFormula], mode: str = "injective") -> IndiscernibilityReport:
    """Per formula: certificate threshold, then exhaustive agreement on the tail.

    A formula fails when its certificate does not exist in the truncation,
    when the tail is too short to realize a tuple, or when two tail tuples
    disagree.
    """
    if not formulas:
        raise VaporlabError("need at least one formula")
    if mode not in MODES:
        raise VaporlabError(f"mode must be one of {MODES}")
    terms = _terms(seq)
    entries = []
    for phi in formulas:
        try:
            th = threshold(terms, phi)
        except (NoThresholdError, FalsificationError) as exc:
            entries.append(EIEntry(phi, mode, None, None, False, str(exc)))
            continue
        agree, value, hits, total = tail_agreement(terms, phi, th.k_phi, mode)
        if value is None:
            entries.append(EIEntry(phi, mode, th.k_phi, None, False, "tail too short to realize a tuple"))
        elif not agree:
            entries.append(
                EIEntry(phi, mode, th.k_phi, None, False, f"{hits} of {total} tail tuples satisfy the formula")
            )
        else:
            entries.append(EIEntry(phi, mode, th.k_phi, value, True))
    return IndiscernibilityReport(tuple(entries))


# -- equality patterns ------------------------------------------------------


def set_partitions(n: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Set partitions of ``range(n)``, blocks ordered by least element."""

    def grow(i: int, blocks: list[list[int]]):
        if i == n:
            yield tuple(tuple(b) for b in blocks)
            return
        for b in blocks:
            b.append(i)
            yield from grow(i + 1, blocks)
            b.pop()
        blocks.append([i])
        yield from grow(i + 1, blocks)
        blocks.pop()

    yield from grow(0, [])


def _pattern_label(phi: AtomicFormula, blocks) -> str:
    names = phi.variables()
    return "|".join("=".join(names[p] for p in b) for b in blocks)


@dataclass(frozen=True)
class PatternTable:
    formula: AtomicFormula
    k: int
    entries: tuple[tuple[str, bool], ...]
    unrealized: tuple[str, ...]

    def as_map(self) -> dict[str, bool]:
        return dict(self.entries)

    def to_dict(self) -> dict:
        return {
            "formula": str(self.formula),
            "k": self.k,
            "patterns": [{"pattern": p, "value": v} for p, v in self.entries],
            "unrealized": list(self.unrealized),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PatternTable":
        return cls(
            parse_formula(data["formula"]),
            data["k"],
            tuple((e["pattern"], e["value"]) for e in data["patterns"]),
            tuple(data["unrealized"]),
        )


def _realize(blocks, block_values, arity) -> list[int]:
    vals = [0] * arity
    for b, v in zip(blocks, block_values):
        for p in b:
            vals[p] = v
    return vals


def equality_pattern_table(seq, phi: AtomicFormula, k: int) -> PatternTable:
    """Truth value of ``phi`` per equality pattern on tuples from indices ``> k``.

    Raises :class:`PatternUnstableError` with a disagreeing pair of tuples
    when some pattern is not constant on the tail.
    """
    terms = _terms(seq)
    if not -1 <= k < len(terms):
        raise VaporlabError(f"k must lie in [-1, {len(terms)})")
    tail = terms[k + 1 :]
    big = len(tail)
    entries = []
    unrealized = []
    for blocks in set_partitions(phi.arity):
        label = _pattern_label(phi, blocks)
        s = len(blocks)
        if big < s:
            unrealized.append(label)
            continue
        if isinstance(phi, Congruence):
            sols = [(i,) for i in range(big) if phi.holds((tail[i],))]
            live = [0]
            coeffs = [1]
            total = big
        else:
            signs = phi.coefficients()
            coeffs_all = [sum(signs[p] for p in b) for b in blocks]
            live = [i for i, c in enumerate(coeffs_all) if c]
            coeffs = [coeffs_all[i] for i in live]
            if not live:
                entries.append((label, phi.r == 0))
                continue
            sols = list(combination_solutions(tail, coeffs, phi.r))
            total = perm(big, len(live))
        if len(sols) in (0, total):
            entries.append((label, bool(sols)))
            continue
        true_pick = sols[0]
        hit = set(sols)
        false_pick = next(p for p in permutations(range(big), len(live)) if p not in hit)

        def full(pick):
            chosen = dict(zip(live, pick))
            spare = (i for i in range(big) if i not in pick)
            vals = [tail[chosen[b]] if b in chosen else tail[next(spare)] for b in range(s)]
            return _realize(blocks, vals, phi.arity)

        raise PatternUnstableError(
            f"pattern unstable at {k}: {label} is true on {full(true_pick)} "
            f"and false on {full(false_pick)}",
            label,
            full(true_pick),
            full(false_pick),
        )
    return PatternTable(phi, k, tuple(entries), tuple(unrealized))


# -- Ramsey extraction --------------------------------------------------------


@dataclass(frozen=True)
class ExtractionResult:
    indices: tuple[int, ...]
    colors: tuple[bool | None, ...]

    def to_dict(self) -> dict:
        return {"indices": list(self.indices), "colors": list(self.colors)}

    @classmethod
    def from_dict(cls, data: dict) -> "ExtractionResult":
        return cls(tuple(data["indices"]), tuple(data["colors"]))


def extract_ei_subsequence(
    base: Sequence[int],
    formulas: Sequence[AtomicFormula],
    target_tail: int,
    mode: str = "injective",
    budget: int = 1_000_000,
) -> ExtractionResult:
    """Indices of ``target_tail`` elements on which every formula is monochromatic.

    Monochromatic means every ``mode`` tuple of selected elements (pairwise
    distinct, or increasing in variable order) gets the same truth value.
    The search prefers late elements: the answer is the set whose
    descending index list is lexicographically greatest.  Each visited node
    costs one unit of ``budget``.
    """
    if mode not in MODES:
        raise VaporlabError(f"mode must be one of {MODES}")
    base = list(base)
    if any(base[i + 1] <= base[i] for i in range(len(base) - 1)):
        raise VaporlabError("base must be strictly increasing")
    if not formulas:
        raise VaporlabError("need at least one formula")
    arity = max(f.arity for f in formulas)
    if target_tail < arity:
        raise VaporlabError(f"target_tail must be >= the largest arity ({arity})")
    spent = 0

    def dfs(top: int, chosen: list[int], colors: list):
        nonlocal spent
        if len(chosen) == target_tail:
            return chosen, colors
        need = target_tail - len(chosen)
        for idx in range(top, need - 2, -1):
            spent += 1
            if spent > budget:
                raise ExtractionError(f"work budget of {budget} nodes exhausted")
            asc = chosen[::-1]
            new = list(colors)
            ok = True
            for fi, f in enumerate(formulas):
                if len(chosen) + 1 < f.arity:
                    continue
                for rest in combinations(asc, f.arity - 1):
                    group = (base[idx],) + tuple(base[j] for j in rest)
                    for vals in permutations(group) if mode == "injective" else (group,):
                        c = f.holds(vals)
                        if new[fi] is None:
                            new[fi] = c
                        elif new[fi] != c:
                            ok = False
                            break
                    if not ok:
                        break
                if not ok:
                    break
            if ok:
                found = dfs(idx - 1, chosen + [idx], new)
                if found:
                    return found
        return None

    found = dfs(len(base) - 1, [], [None] * len(formulas))
    if not found:
        raise ExtractionError(
            f"no qualifying subsequence of requested tail length {target_tail} within input "
            f"of length {len(base)}"
        )
    chosen, colors = found
    return ExtractionResult(tuple(sorted(chosen)), tuple(colors))
