"""Coding a graph on a sparse set into one unary set, and decoding it back.

``encode`` builds ``A = Q | {a + b : {a, b} an edge}``.  ``decode`` recovers
``Q`` as the elements of ``A`` that are not a sum of two distinct elements of
``A``, and the edges as pairs of recovered vertices whose sum lies in ``A``.
Decoding looks only at the value set; ground truth is used afterwards to
count exceptions and to check them against growth certificates.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement
from math import factorial
from typing import Iterable, Sequence

from .errors import NoThresholdError, VaporlabError
from .sequences import _terms, growth_certificate

__all__ = [
    "Graph",
    "parse_edge_list",
    "EncodedSet",
    "DecodeReport",
    "encode",
    "decode",
    "roundtrip",
    "sumset",
    "URankConstruction",
    "urank_construction",
    "multiset_sum_injectivity",
]

Pair = tuple[int, int]

# (m, n, r) equations whose growth thresholds bound the decoding exceptions
DECODE_EQUATIONS = ((1, 2, 0), (1, 3, 0), (1, 4, 0), (2, 1, 0), (2, 2, 0))


@dataclass(frozen=True)
class Graph:
    """Simple graph on indices into a sequence truncation."""

    vertices: tuple[int, ...]
    edges: frozenset[Pair]

    @classmethod
    def from_edges(cls, edges: Iterable[Sequence[int]], vertices: Iterable[int] | None = None) -> "Graph":
        clean = set()
        for e in edges:
            u, v = (int(x) for x in e)
            if u == v:
                raise VaporlabError(f"loop edge ({u}, {v}) rejected: graphs are irreflexive")
            clean.add((min(u, v), max(u, v)))
        if vertices is None:
            verts = sorted({x for e in clean for x in e})
        else:
            verts = sorted(set(vertices))
            missing = {x for e in clean for x in e} - set(verts)
            if missing:
                raise VaporlabError(f"edge endpoints {sorted(missing)} are not vertices")
        return cls(tuple(verts), frozenset(clean))

    @classmethod
    def on_sequence(cls, seq, edges: Iterable[Sequence[int]] = ()) -> "Graph":
        """Graph whose vertex set is every index of ``seq``."""
        return cls.from_edges(edges, range(len(_terms(seq))))

    def check_indices(self, length: int) -> None:
        bad = [v for v in self.vertices if not 0 <= v < length]
        if bad:
            raise VaporlabError(f"vertex indices {bad} outside truncation of length {length}")

    def to_dict(self) -> dict:
        return {"vertices": list(self.vertices), "edges": [list(e) for e in sorted(self.edges)]}

    @classmethod
    def from_dict(cls, data: dict) -> "Graph":
        return cls.from_edges(data["edges"], data.get("vertices"))


def parse_edge_list(text: str) -> list[Pair]:
    """Edges as ``u v`` per line (``;`` also separates edges); JSON lists accepted."""
    text = text.strip()
    if text.startswith("[") or text.startswith("{"):
        data = json.loads(text)
        if isinstance(data, dict):
            data = data["edges"]
        return [(int(u), int(v)) for u, v in data]
    edges = []
    for chunk in text.replace(";", "\n").splitlines():
        chunk = chunk.split("#", 1)[0].strip()
        if not chunk:
            continue
        parts = chunk.replace(",", " ").split()
        if len(parts) != 2:
            raise VaporlabError(f"bad edge line {chunk!r}; expected 'u v'")
        edges.append((int(parts[0]), int(parts[1])))
    return edges


@dataclass(frozen=True)
class EncodedSet:
    values: tuple[int, ...]
    q_values: tuple[int, ...]
    sum_values: tuple[int, ...]

    @property
    def collisions(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.q_values) & set(self.sum_values)))

    def to_dict(self) -> dict:
        return {
            "values": list(self.values),
            "q_values": list(self.q_values),
            "sum_values": list(self.sum_values),
            "collisions": list(self.collisions),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "EncodedSet":
        return cls(tuple(data["values"]), tuple(data["q_values"]), tuple(data["sum_values"]))


def encode(seq, g: Graph) -> EncodedSet:
    terms = _terms(seq)
    g.check_indices(len(terms))
    q = {terms[v] for v in g.vertices}
    sums = {terms[u] + terms[v] for u, v in g.edges}
    return EncodedSet(tuple(sorted(q | sums)), tuple(sorted(q)), tuple(sorted(sums)))


def _sorted_pairs(pairs: Iterable[Pair]) -> tuple[Pair, ...]:
    return tuple(sorted((min(p), max(p)) for p in pairs))


@dataclass(frozen=True)
class DecodeReport:
    q_hat: tuple[int, ...]
    e_hat: tuple[Pair, ...]
    flagged: tuple[int, ...]
    q_missing: tuple[int, ...] | None = None
    q_spurious: tuple[int, ...] | None = None
    e_missing: tuple[Pair, ...] | None = None
    e_spurious: tuple[Pair, ...] | None = None
    thresholds: dict = field(default_factory=dict)
    violations: tuple[str, ...] = ()

    @property
    def exact(self) -> bool:
        """Ground truth was supplied and all four exception sets are empty."""
        sets = (self.q_missing, self.q_spurious, self.e_missing, self.e_spurious)
        return all(s is not None and not s for s in sets)

    def to_dict(self) -> dict:
        def opt(xs):
            return None if xs is None else [list(x) if isinstance(x, tuple) else x for x in xs]

        return {
            "q_hat": list(self.q_hat),
            "e_hat": [list(e) for e in self.e_hat],
            "flagged": list(self.flagged),
            "q_missing": opt(self.q_missing),
            "q_spurious": opt(self.q_spurious),
            "e_missing": opt(self.e_missing),
            "e_spurious": opt(self.e_spurious),
            "thresholds": self.thresholds,
            "violations": list(self.violations),
            "exact": self.exact,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DecodeReport":
        def vals(xs):
            return None if xs is None else tuple(xs)

        def pairs(xs):
            return None if xs is None else tuple(tuple(p) for p in xs)

        return cls(
            tuple(data["q_hat"]),
            pairs(data["e_hat"]),
            tuple(data["flagged"]),
            vals(data["q_missing"]),
            vals(data["q_spurious"]),
            pairs(data["e_missing"]),
            pairs(data["e_spurious"]),
            data["thresholds"],
            tuple(data["violations"]),
        )


def _exception_thresholds(terms: Sequence[int]) -> dict:
    out = {}
    for m, n, r in DECODE_EQUATIONS:
        key = f"{m},{n},{r}"
        try:
            cert = growth_certificate(terms, max(m, n), abs(r))
        except (NoThresholdError, VaporlabError):
            out[key] = None
            continue
        out[key] = {**cert.to_dict(), "value": terms[cert.k]}
    return out


def decode(a, ground_truth: tuple | None = None) -> DecodeReport:
    """Recover ``(Q, E)`` from the value set ``a`` alone.

    ``a`` is an :class:`EncodedSet` or any iterable of positive integers.
    With ``ground_truth = (seq, graph)`` the exception sets are filled in and
    checked against the growth-certificate bounds; failed checks are listed
    in ``violations``.
    """
    values = a.values if isinstance(a, EncodedSet) else tuple(sorted(set(int(x) for x in a)))
    if any(v < 1 for v in values):
        raise VaporlabError("decode expects positive values")
    members = set(values)
    flagged = []
    q_hat = []
    for x in values:
        # x = u + v with u < v, both in A
        if any(x - u in members and x - u != u for u in values if 2 * u < x):
            flagged.append(x)
        else:
            q_hat.append(x)
    e_hat = [(x, y) for x, y in combinations(q_hat, 2) if x + y in members]
    if ground_truth is None:
        return DecodeReport(tuple(q_hat), tuple(e_hat), tuple(flagged))

    seq, g = ground_truth
    terms = _terms(seq)
    g.check_indices(len(terms))
    q_true = {terms[v] for v in g.vertices}
    e_true = {(terms[u], terms[v]) for u, v in g.edges}
    q_hat_set, e_hat_set = set(q_hat), set(e_hat)
    q_missing = tuple(sorted(q_true - q_hat_set))
    q_spurious = tuple(sorted(q_hat_set - q_true))
    e_missing = _sorted_pairs(e_true - e_hat_set)
    e_spurious = _sorted_pairs(e_hat_set - e_true)

    thresholds = _exception_thresholds(terms)
    violations = []
    if q_spurious:
        violations.append(f"q_spurious nonempty: {list(q_spurious)}")
    vertex_bound = thresholds["1,4,0"]
    if vertex_bound is not None:
        for q in q_missing:
            if q > vertex_bound["value"]:
                violations.append(f"missing vertex {q} exceeds terms[k]={vertex_bound['value']} for (1,4,0)")
    edge_bound = thresholds["2,2,0"]
    if edge_bound is not None:
        for x, y in e_spurious:
            if y > edge_bound["value"]:
                violations.append(f"spurious edge ({x}, {y}) exceeds terms[k]={edge_bound['value']} for (2,n,0)")
    lost = set(q_missing)
    for x, y in e_missing:
        if x not in lost and y not in lost:
            violations.append(f"missing edge ({x}, {y}) has both endpoints decoded as vertices")
    return DecodeReport(
        tuple(q_hat),
        tuple(e_hat),
        tuple(flagged),
        q_missing,
        q_spurious,
        e_missing,
        e_spurious,
        thresholds,
        tuple(violations),
    )


def roundtrip(seq, g: Graph) -> DecodeReport:
    return decode(encode(seq, g), (seq, g))


def sumset(seq, fold: int) -> list[int]:
    """Sums of all ``fold``-element multisets of terms."""
    if fold < 1:
        raise VaporlabError("fold must be >= 1")
    terms = _terms(seq)
    return sorted({sum(c) for c in combinations_with_replacement(terms, fold)})


@dataclass(frozen=True)
class URankConstruction:
    n: int
    q: tuple[int, ...]
    b: tuple[int, ...]
    a: tuple[int, ...]
    b_and_q: tuple[int, ...]
    degenerate: bool

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "q": list(self.q),
            "b": list(self.b),
            "a": list(self.a),
            "b_and_q": list(self.b_and_q),
            "degenerate": self.degenerate,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "URankConstruction":
        return cls(
            data["n"],
            tuple(data["q"]),
            tuple(data["b"]),
            tuple(data["a"]),
            tuple(data["b_and_q"]),
            data["degenerate"],
        )


def urank_construction(n: int, count: int) -> URankConstruction:
    """``Q = {k! : n <= k < n+count}``, ``B`` = n-fold multiset sums with max ``> n!``.

    ``n = 1`` is flagged degenerate: single elements are their own sums, so
    ``B`` lands inside ``Q``.
    """
    if n < 1 or count < 1:
        raise VaporlabError("need n >= 1 and count >= 1")
    q = [factorial(k) for k in range(n, n + count)]
    floor = factorial(n)
    b = sorted({sum(s) for s in combinations_with_replacement(q, n) if max(s) > floor})
    a = sorted(set(b) | set(q))
    both = sorted(set(b) & set(q))
    return URankConstruction(n, tuple(q), tuple(b), tuple(a), tuple(both), n == 1)


def multiset_sum_injectivity(seq, n: int):
    """Whether all ``n``-element multisets of terms have distinct sums.

    Returns ``(True, None)`` or ``(False, (earlier, later))`` for the first
    collision met in lexicographic multiset order.
    """
    if n < 1:
        raise VaporlabError("n must be >= 1")
    seen: dict[int, tuple[int, ...]] = {}
    for s in combinations_with_replacement(_terms(seq), n):
        total = sum(s)
        if total in seen:
            return False, (seen[total], s)
        seen[total] = s
    return True, None
