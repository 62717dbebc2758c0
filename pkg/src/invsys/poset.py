"""Finite ordered index sets.

A poset is given by a list of distinct labels and a list of cover pairs
``(lower, upper)``.  The order is the reflexive-transitive closure of the
covers.  Everything here is finite and immutable after validation; the
finite analogue of "has a countable cofinal sequence" collapses to "has a
maximum", which is the only dichotomy a finite poset can exhibit.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

from .errors import CycleDetected, UnknownElement


class Poset:
    """Finite poset on opaque string labels.

    Instances are created through :func:`validate_poset`; direct construction
    assumes the closure has already been computed.
    """

    def __init__(self, elements: Sequence[str], covers: Sequence[tuple[str, str]],
                 up: dict[str, frozenset[str]]):
        self.elements = tuple(elements)
        self.covers = tuple(covers)
        self._up = up  # label -> set of labels >= label (reflexive)
        self._index = {e: i for i, e in enumerate(self.elements)}

    def __eq__(self, other):
        return (isinstance(other, Poset)
                and self.elements == other.elements
                and set(self.covers) == set(other.covers))

    def __hash__(self):
        return hash((self.elements, frozenset(self.covers)))

    def __repr__(self):
        return f"Poset({list(self.elements)!r}, covers={list(self.covers)!r})"

    # -- order predicates -------------------------------------------------

    def leq(self, a: str, b: str) -> bool:
        if a not in self._up or b not in self._up:
            raise UnknownElement(f"unknown element in leq({a!r}, {b!r})")
        return b in self._up[a]

    def lt(self, a: str, b: str) -> bool:
        return a != b and self.leq(a, b)

    def up_set(self, a: str) -> frozenset[str]:
        return self._up[a]

    def strict_uppers(self, a: str) -> list[str]:
        return [b for b in self.elements if self.lt(a, b)]

    def upper_bounds(self, a: str, b: str) -> list[str]:
        common = self._up[a] & self._up[b]
        return [e for e in self.elements if e in common]

    def is_directed(self) -> bool:
        """Every pair of elements has a common upper bound."""
        return all(self.upper_bounds(a, b)
                   for i, a in enumerate(self.elements)
                   for b in self.elements[i + 1:])

    def maximal_elements(self) -> list[str]:
        """All x with nothing strictly above; ties in declared label order."""
        return [x for x in self.elements if len(self._up[x]) == 1]

    def has_maximum(self) -> Optional[str]:
        """The unique top element, or None."""
        maxima = self.maximal_elements()
        if len(maxima) == 1 and all(self.leq(x, maxima[0]) for x in self.elements):
            return maxima[0]
        return None

    def cofinal_chain(self) -> Optional[list[str]]:
        """An ascending chain dominating every element, or None.

        For a finite poset such a chain exists iff a maximum exists; the
        returned chain walks covers from a minimal element up to the top.
        """
        top = self.has_maximum()
        if top is None:
            return None
        chain = [top]
        lowers = {u: [] for u in self.elements}
        for lo, hi in self.covers:
            lowers[hi].append(lo)
        cur = top
        while lowers[cur]:
            cur = min(lowers[cur], key=self._index.__getitem__)
            chain.append(cur)
        chain.reverse()
        return chain

    # -- structural helpers ----------------------------------------------

    def linear_extension(self) -> list[str]:
        """Deterministic topological order compatible with the poset order."""
        remaining = list(self.elements)
        out: list[str] = []
        placed: set[str] = set()
        while remaining:
            for e in remaining:
                if all(x in placed for x in self.elements
                       if x != e and self.leq(x, e)):
                    out.append(e)
                    placed.add(e)
                    remaining.remove(e)
                    break
            else:  # pragma: no cover - closure is acyclic by construction
                raise CycleDetected("no linear extension")
        return out

    def chains(self, length: int) -> list[tuple[str, ...]]:
        """All strictly increasing flags with `length` elements, lex order."""
        if length == 0:
            return [()]
        flags: list[tuple[str, ...]] = []

        def extend(flag: tuple[str, ...]):
            if len(flag) == length:
                flags.append(flag)
                return
            for e in self.elements:
                if not flag or self.lt(flag[-1], e):
                    extend(flag + (e,))

        extend(())
        return flags

    def longest_chain(self) -> int:
        """Number of elements in the longest strictly increasing chain."""
        depth: dict[str, int] = {}
        for e in self.linear_extension():
            below = [depth[x] for x in self.elements if self.lt(x, e)]
            depth[e] = 1 + max(below, default=0)
        return max(depth.values(), default=0)


def validate_poset(elements: Iterable[str], covers: Iterable[tuple[str, str]]) -> Poset:
    """Build a poset from labels and cover pairs.

    Raises UnknownElement for covers over undeclared labels, ValueError on
    duplicate labels, and CycleDetected when the closure is not antisymmetric.
    """
    elements = list(elements)
    if len(set(elements)) != len(elements):
        raise ValueError("duplicate element labels")
    covers = [(str(a), str(b)) for a, b in covers]
    known = set(elements)
    for lo, hi in covers:
        if lo not in known or hi not in known:
            raise UnknownElement(f"cover {lo} < {hi} references undeclared element")

    succ: dict[str, set[str]] = {e: set() for e in elements}
    for lo, hi in covers:
        succ[lo].add(hi)

    up: dict[str, frozenset[str]] = {}
    for e in elements:
        seen = {e}
        stack = [e]
        while stack:
            for n in succ[stack.pop()]:
                if n not in seen:
                    seen.add(n)
                    stack.append(n)
        up[e] = frozenset(seen)
    for a in elements:
        for b in up[a]:
            if b != a and a in up[b]:
                raise CycleDetected(f"{a} and {b} lie on a cycle")
    return Poset(elements, covers, up)


def chain_poset(n: int, prefix: str = "") -> Poset:
    """The chain 1 <= 2 <= ... <= n."""
    labels = [f"{prefix}{i}" for i in range(1, n + 1)]
    covers = [(labels[i], labels[i + 1]) for i in range(n - 1)]
    return validate_poset(labels, covers)


def grid_poset(rows: int, cols: int) -> Poset:
    """The componentwise-ordered grid {1..rows} x {1..cols}."""
    labels = [f"({i}_{j})" for i in range(1, rows + 1) for j in range(1, cols + 1)]
    covers = []
    for i in range(1, rows + 1):
        for j in range(1, cols + 1):
            if i < rows:
                covers.append((f"({i}_{j})", f"({i + 1}_{j})"))
            if j < cols:
                covers.append((f"({i}_{j})", f"({i}_{j + 1})"))
    return validate_poset(labels, covers)


def wedge_poset() -> Poset:
    """Three elements c <= a, c <= b with a, b incomparable."""
    return validate_poset(["a", "b", "c"], [("c", "a"), ("c", "b")])
