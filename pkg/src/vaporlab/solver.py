"""Exhaustive solution enumeration for linear equations over a truncation.

Two searches live here:

* :func:`enumerate_lineq_solutions` -- ``x_1+..+x_m = y_1+..+y_n + r`` with
  repetition allowed on each side.  It walks multisets side by side with
  interval pruning and expands them to ordered index tuples at the end.
* :func:`combination_solutions` -- ``sum c_i v_i = target`` over pairwise
  distinct values.  It walks the values from the largest down, deciding for
  each value which (if any) coefficient slot takes it.

Both need the values sorted increasing and positive, which every
:class:`~vaporlab.sequences.SparseSequence` guarantees.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Iterator, Sequence

from .errors import FalsificationError, NoThresholdError, VaporlabError
from .sequences import GrowthCertificate, _terms, growth_certificate

__all__ = [
    "SolutionSet",
    "enumerate_lineq_solutions",
    "combination_solutions",
    "solve_combination",
    "factorial_base",
    "from_factorial_base",
]

IndexTuple = tuple[int, ...]


@dataclass(frozen=True)
class SolutionSet:
    m: int
    n: int
    r: int
    require_max_differ: bool
    solutions: tuple[tuple[IndexTuple, IndexTuple], ...]
    max_index_bound: int | None
    truncation_length: int

    @property
    def bound_checked(self) -> bool:
        return self.require_max_differ and self.max_index_bound is not None

    def to_dict(self, terms: Sequence[int] | None = None) -> dict:
        out = {
            "equation": {"m": self.m, "n": self.n, "r": self.r},
            "require_max_differ": self.require_max_differ,
            "max_index_bound": self.max_index_bound,
            "bound_checked": self.bound_checked,
            "truncation_length": self.truncation_length,
            "solutions": [{"x": list(x), "y": list(y)} for x, y in self.solutions],
        }
        if terms is not None:
            for sol in out["solutions"]:
                sol["x_values"] = [terms[i] for i in sol["x"]]
                sol["y_values"] = [terms[j] for j in sol["y"]]
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "SolutionSet":
        eq = data["equation"]
        return cls(
            eq["m"],
            eq["n"],
            eq["r"],
            data["require_max_differ"],
            tuple((tuple(s["x"]), tuple(s["y"])) for s in data["solutions"]),
            data["max_index_bound"],
            data["truncation_length"],
        )


def _lineq_multisets(terms: Sequence[int], m: int, n: int, r: int):
    """Yield (x, y) index multisets, each nonincreasing, solving the equation."""
    top = len(terms) - 1
    a0, amax = terms[0], terms[-1]
    xs: list[int] = []
    ys: list[int] = []

    # d tracks sum(x) - sum(y) - r; a solution ends with d == 0
    def walk_y(left: int, cap: int, d: int):
        if left == 0:
            if d == 0:
                yield tuple(xs), tuple(ys)
            return
        rest = left - 1
        for j in range(cap, -1, -1):
            v = terms[j]
            d2 = d - v
            if d2 > rest * v:
                break
            if d2 < rest * a0:
                continue
            ys.append(j)
            yield from walk_y(rest, j, d2)
            ys.pop()

    def walk_x(left: int, cap: int, d: int):
        if left == 0:
            if n * a0 <= d <= n * amax:
                yield from walk_y(n, top, d)
            return
        rest = left - 1
        for i in range(cap, -1, -1):
            v = terms[i]
            d2 = d + v
            if d2 + rest * v < n * a0:
                break
            if d2 + rest * a0 > n * amax:
                continue
            xs.append(i)
            yield from walk_x(rest, i, d2)
            xs.pop()

    yield from walk_x(m, top, -r)


def _orderings(side: IndexTuple) -> list[IndexTuple]:
    return sorted(set(permutations(side)))


def enumerate_lineq_solutions(
    seq, m: int, n: int, r: int, require_max_differ: bool = True
) -> SolutionSet:
    """All ordered index tuples solving ``x_1+..+x_m = y_1+..+y_n + r``.

    With ``require_max_differ`` only solutions whose largest x-value differs
    from the largest y-value are kept, and every kept solution is checked to
    use indices ``<= k`` where ``k`` is the growth certificate for
    ``(max(m, n), |r|)``.  A violation raises :class:`FalsificationError`; a
    missing certificate leaves ``max_index_bound`` as ``None``.
    """
    if m < 1 or n < 1:
        raise VaporlabError("m and n must be >= 1")
    terms = _terms(seq)
    if not terms:
        raise VaporlabError("empty sequence")
    found = []
    for xm, ym in _lineq_multisets(terms, m, n, r):
        if require_max_differ and xm[0] == ym[0]:
            continue
        for x in _orderings(xm):
            for y in _orderings(ym):
                found.append((x, y))
    found.sort()

    bound = None
    if require_max_differ and len(terms) >= 2:
        try:
            cert: GrowthCertificate = growth_certificate(terms, max(m, n), abs(r))
        except NoThresholdError:
            cert = None
        if cert is not None:
            bound = cert.k
            for x, y in found:
                if max(x + y) > bound:
                    raise FalsificationError(
                        f"solution x={x} y={y} uses index {max(x + y)} > k={bound}"
                    )
    return SolutionSet(m, n, r, require_max_differ, tuple(found), bound, len(terms))


def combination_solutions(
    values: Sequence[int], coeffs: Sequence[int], target: int
) -> Iterator[IndexTuple]:
    """Index tuples ``(i_1..i_s)``, pairwise distinct, with ``sum c_j values[i_j] == target``.

    ``values`` must be positive and strictly increasing.  Output order is
    unspecified; callers sort.
    """
    s = len(coeffs)
    if s == 0:
        if target == 0:
            yield ()
        return
    if not values:
        return
    a0 = values[0]
    chosen = [-1] * s

    def walk(idx: int, open_slots: tuple[int, ...], rem: int):
        if not open_slots:
            if rem == 0:
                yield tuple(chosen)
            return
        if idx + 1 < len(open_slots):
            return
        v = values[idx]
        lo = hi = 0
        for j in open_slots:
            c = coeffs[j]
            if c > 0:
                lo += c * a0
                hi += c * v
            else:
                lo += c * v
                hi += c * a0
        if not lo <= rem <= hi:
            return
        for pos, j in enumerate(open_slots):
            chosen[j] = idx
            yield from walk(idx - 1, open_slots[:pos] + open_slots[pos + 1 :], rem - coeffs[j] * v)
        yield from walk(idx - 1, open_slots, rem)

    yield from walk(len(values) - 1, tuple(range(s)), target)


def solve_combination(seq, coeffs: Sequence[int], multiplier: int, target: int) -> list[tuple[int, ...]]:
    """Pairwise-distinct value tuples with ``multiplier*target == sum c_i v_i``."""
    if not coeffs or any(c == 0 for c in coeffs):
        raise VaporlabError("coefficients must be nonzero")
    if multiplier < 1:
        raise VaporlabError("multiplier must be positive")
    terms = _terms(seq)
    sols = {
        tuple(terms[i] for i in idx)
        for idx in combination_solutions(terms, list(coeffs), multiplier * target)
    }
    return sorted(sols)


def factorial_base(t: int) -> list[int]:
    """Digits ``[c_1, c_2, ...]`` with ``t = sum c_k k!`` and ``0 <= c_k <= k``."""
    if t < 0:
        raise VaporlabError("factorial base needs t >= 0")
    digits = []
    radix = 2
    while t:
        t, c = divmod(t, radix)
        digits.append(c)
        radix += 1
    return digits


def from_factorial_base(digits: Sequence[int]) -> int:
    total = 0
    f = 1
    for k, c in enumerate(digits, start=1):
        f *= k
        total += c * f
    return total
