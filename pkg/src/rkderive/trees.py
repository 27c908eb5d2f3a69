"""Rooted trees and the order conditions sum_i b_i Phi_i(t) = 1/gamma(t)."""

from __future__ import annotations

from functools import cached_property, lru_cache
from itertools import combinations_with_replacement
from math import prod
from typing import List, Tuple


class RootedTree:
    """An unordered rooted tree, stored as the sorted tuple of its subtrees."""

    __slots__ = ("children", "__dict__")

    def __init__(self, children=()):
        self.children: Tuple[RootedTree, ...] = tuple(sorted(children, key=lambda t: t.key))

    @cached_property
    def key(self) -> tuple:
        return (self.order, tuple(c.key for c in self.children))

    @cached_property
    def order(self) -> int:
        return 1 + sum(c.order for c in self.children)

    @cached_property
    def density(self) -> int:
        """gamma(t) = r(t) * prod(gamma(subtree))."""
        return self.order * prod(c.density for c in self.children)

    @cached_property
    def symmetry(self) -> int:
        sigma = prod(c.symmetry for c in self.children)
        for c in set(self.children):
            sigma *= _factorial(self.children.count(c))
        return sigma

    def __eq__(self, other):
        return isinstance(other, RootedTree) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __lt__(self, other):
        return self.key < other.key

    def __str__(self):
        if not self.children:
            return "τ"
        return "[" + ",".join(str(c) for c in self.children) + "]"

    __repr__ = __str__


def _factorial(n):
    return prod(range(1, n + 1))


LEAF = RootedTree()


@lru_cache(maxsize=None)
def trees_of_order(n: int) -> Tuple[RootedTree, ...]:
    """All trees with exactly ``n`` nodes, sorted by canonical key."""
    if n < 1:
        return ()
    if n == 1:
        return (LEAF,)
    found = set()
    for forest in _forests(n - 1, n - 1):
        found.add(RootedTree(forest))
    return tuple(sorted(found))


def _forests(total: int, max_part: int):
    """Multisets of trees with orders summing to ``total``, parts <= ``max_part``."""
    if total == 0:
        yield ()
        return
    for part in range(min(total, max_part), 0, -1):
        for count in range(1, total // part + 1):
            for chosen in combinations_with_replacement(trees_of_order(part), count):
                for rest in _forests(total - part * count, part - 1):
                    yield chosen + rest


def enumerate_trees(p: int) -> List[RootedTree]:
    """All rooted trees of order 1..p, grouped by order."""
    if p < 1:
        raise ValueError("order must be at least 1")
    out: List[RootedTree] = []
    for n in range(1, p + 1):
        out.extend(trees_of_order(n))
    return out
