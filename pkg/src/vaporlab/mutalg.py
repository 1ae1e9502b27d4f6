"""Mutual-algebraicity bounds for explicit finite relations."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from typing import Iterable

from .errors import FalsificationError, VaporlabError

__all__ = [
    "FiniteRelation",
    "MaBound",
    "MaProfile",
    "ma_bound",
    "ma_profile",
]


@dataclass(frozen=True)
class FiniteRelation:
    universe: frozenset[int]
    arity: int
    tuples: frozenset[tuple[int, ...]]

    def __post_init__(self):
        if self.arity < 1:
            raise VaporlabError("arity must be >= 1")
        for t in self.tuples:
            if len(t) != self.arity:
                raise VaporlabError(f"tuple {t} does not have arity {self.arity}")
            if not set(t) <= self.universe:
                raise VaporlabError(f"tuple {t} leaves the universe")

    @classmethod
    def build(cls, universe: Iterable[int], arity: int, tuples: Iterable[Iterable[int]]) -> "FiniteRelation":
        return cls(frozenset(universe), arity, frozenset(tuple(t) for t in tuples))

    @classmethod
    def graph(cls, edges: Iterable[tuple[int, int]], universe: Iterable[int] | None = None) -> "FiniteRelation":
        """Symmetric binary relation from an undirected edge list."""
        edges = [tuple(e) for e in edges]
        sym = {(u, v) for u, v in edges} | {(v, u) for u, v in edges}
        uni = set(universe) if universe is not None else {x for e in edges for x in e}
        return cls(frozenset(uni), 2, frozenset(sym))

    @classmethod
    def function_graph(cls, mapping: dict[int, int], universe: Iterable[int] | None = None) -> "FiniteRelation":
        uni = set(universe) if universe is not None else set(mapping) | set(mapping.values())
        return cls(frozenset(uni), 2, frozenset(mapping.items()))

    def is_symmetric(self) -> bool:
        return self.arity == 2 and all((b, a) in self.tuples for a, b in self.tuples)

    def is_function_graph(self) -> bool:
        """Binary and each first coordinate occurs at most once."""
        if self.arity != 2:
            return False
        firsts = Counter(a for a, _ in self.tuples)
        return all(c == 1 for c in firsts.values())

    def to_dict(self) -> dict:
        return {
            "universe": sorted(self.universe),
            "arity": self.arity,
            "tuples": [list(t) for t in sorted(self.tuples)],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "FiniteRelation":
        return cls.build(data["universe"], data["arity"], data["tuples"])

    @classmethod
    def from_json(cls, text: str) -> "FiniteRelation":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class MaBound:
    bound: int
    witness: tuple[int, int] | None
    degenerate: bool = False

    def to_dict(self) -> dict:
        return {
            "bound": self.bound,
            "witness": None if self.witness is None else {"position": self.witness[0], "element": self.witness[1]},
            "degenerate": self.degenerate,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "MaBound":
        w = data["witness"]
        return cls(data["bound"], None if w is None else (w["position"], w["element"]), data["degenerate"])


def _fiber_counts(r: FiniteRelation) -> list[Counter]:
    # tuples are distinct, so fixing coordinate i to b leaves one
    # (n-1)-tuple per tuple of R with b there
    return [Counter(t[i] for t in r.tuples) for i in range(r.arity)]


def fiber_size(r: FiniteRelation, position: int, element: int) -> int:
    """Re-count one fiber directly from the definition."""
    rest = {t[:position] + t[position + 1 :] for t in r.tuples if t[position] == element}
    return len(rest)


def ma_bound(r: FiniteRelation) -> MaBound:
    """Largest fiber over all positions and universe elements.

    The witness is the first (position, element) attaining it.  An empty
    relation gives bound 0 flagged ``degenerate``.
    """
    if not r.tuples:
        return MaBound(0, None, True)
    best = 0
    witness = None
    for i, counts in enumerate(_fiber_counts(r)):
        for b in sorted(counts):
            if counts[b] > best:
                best, witness = counts[b], (i, b)
    return MaBound(best, witness)


@dataclass(frozen=True)
class MaProfile:
    bound: MaBound
    per_position: tuple[int, ...]
    max_degree: int | None = None
    max_fiber: int | None = None

    def to_dict(self) -> dict:
        return {
            "bound": self.bound.to_dict(),
            "per_position": list(self.per_position),
            "max_degree": self.max_degree,
            "max_fiber": self.max_fiber,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "MaProfile":
        return cls(MaBound.from_dict(data["bound"]), tuple(data["per_position"]), data["max_degree"], data["max_fiber"])


def ma_profile(r: FiniteRelation) -> MaProfile:
    """Per-position bounds plus the graph and function characterizations.

    For a symmetric binary relation the bound must equal the maximum vertex
    degree; for a function graph it must equal ``max(1, largest preimage)``.
    A mismatch raises :class:`FalsificationError`.
    """
    mb = ma_bound(r)
    counts = _fiber_counts(r)
    per_position = tuple(max(c.values(), default=0) for c in counts)
    degree = fiber = None
    if r.is_symmetric():
        adjacency: dict[int, set[int]] = {v: set() for v in r.universe}
        for u, v in r.tuples:
            adjacency[u].add(v)
        degree = max((len(nb) for nb in adjacency.values()), default=0)
        if degree != mb.bound:
            raise FalsificationError(f"MA bound {mb.bound} differs from max degree {degree}")
    if r.is_function_graph() and r.tuples:
        preimages: dict[int, list[int]] = {}
        for x, y in sorted(r.tuples):
            preimages.setdefault(y, []).append(x)
        fiber = max(len(xs) for xs in preimages.values())
        if max(1, fiber) != mb.bound:
            raise FalsificationError(f"MA bound {mb.bound} differs from max(1, max fiber {fiber})")
    return MaProfile(mb, per_position, degree, fiber)
