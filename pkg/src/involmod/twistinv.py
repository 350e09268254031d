"""
Twisted involutions {w : w* = w^-1} and their reduced I*-expressions.

The twisted product is s ⋉ w = sw when sw = ws*, and sws* otherwise.  Every
twisted involution z is reached from 1 by iterating it; the minimal number
of steps is the rank rho(z).  An I*-expression (s_1, ..., s_k) stands for
s_1 ⋉ (s_2 ⋉ (... ⋉ (s_k ⋉ 1))).

>>> from .coxeter import CoxeterSpec, enumerate_group
>>> g = enumerate_group(CoxeterSpec.preset("A2"))
>>> tw = enumerate_twisted(g)
>>> [g.word_str(z) for z in tw.elements], [tw.rho[z] for z in tw.elements]
(['1', 's1', 's2', 's1s2s1'], [0, 1, 1, 2])
>>> z = g.parse_word("s1s2s1")
>>> tw.expr[z], tw.completion[z], tw.ell_star[z]
((0, 1), (0, 1, 0), 1)
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .coxeter import GroupTable, format_word
from .errors import NotReducedExpression, NotTwistedInvolution, TruncatedTable

__all__ = [
    "TwistTable", "twist_product", "enumerate_twisted", "ell_star",
    "completion_word", "is_twisted_involution",
]


def is_twisted_involution(table: GroupTable, w: int) -> bool:
    return table.star[w] == table.inverse[w]


def commutes_twisted(table: GroupTable, s: int, w: int) -> bool:
    """Whether sw = ws*."""
    return table.left[w][s] == table.right[w][table.spec.star[s]]


def twist_product(table: GroupTable, s: int, w: int) -> int:
    if not is_twisted_involution(table, w):
        raise NotTwistedInvolution(f"{table.word_str(w)} is not a twisted involution")
    return _twist(table, s, w)


def _twist(table: GroupTable, s: int, w: int) -> int:
    sw = table.left[w][s]
    if sw == table.right[w][table.spec.star[s]]:
        return sw
    return table.right[sw][table.spec.star[s]]


@dataclass(eq=False)
class TwistTable:
    """Enumerated twisted involutions of a finite group.

    Per-element data is keyed by group index.  `elements` lists I* sorted by
    (rho, canonical expression); `position` inverts it.
    """

    group: GroupTable
    elements: list[int]
    position: dict[int, int]
    rho: dict[int, int]
    expr: dict[int, tuple[int, ...]]
    ell_star: dict[int, int]
    sigma: dict[int, int]
    completion: dict[int, tuple[int, ...]]
    _sigma_sets: dict[int, frozenset] = field(default_factory=dict, repr=False)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, w: int) -> bool:
        return w in self.position

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    def eps(self, z: int) -> int:
        return -1 if self.rho[z] % 2 else 1

    def twist(self, s: int, z: int) -> int:
        return _twist(self.group, s, z)

    def descents(self, z: int) -> list[int]:
        """Generators s with rho(s ⋉ z) = rho(z) - 1."""
        return self.group.left_descents(z)

    def by_rho(self) -> list[int]:
        return list(self.elements)

    def evaluate(self, expr: Sequence[int]) -> int:
        """s_1 ⋉ (... ⋉ (s_k ⋉ 1))."""
        z = 0
        for s in reversed(expr):
            z = _twist(self.group, s, z)
        return z

    def count_reduced(self, z: int, _memo: dict | None = None) -> int:
        """Number of reduced I*-expressions of z."""
        memo = {} if _memo is None else _memo
        if z == 0:
            return 1
        if z not in memo:
            memo[z] = sum(self.count_reduced(self.twist(s, z), memo) for s in self.descents(z))
        return memo[z]

    def reduced_expressions(self, z: int) -> Iterator[tuple[int, ...]]:
        """All reduced I*-expressions of z in lexicographic order."""
        if z == 0:
            yield ()
            return
        for s in self.descents(z):
            for rest in self.reduced_expressions(self.twist(s, z)):
                yield (s,) + rest

    def sample_expressions(self, z: int, count: int, rng: random.Random,
                           max_tries: int | None = None) -> list[tuple[int, ...]]:
        """Up to `count` distinct reduced I*-expressions of z.

        Exhaustive when z has at most `count` of them; otherwise random
        descent walks driven by `rng`.
        """
        total = self.count_reduced(z)
        if total <= count:
            return list(self.reduced_expressions(z))
        found: dict[tuple[int, ...], None] = {}
        tries = max_tries if max_tries is not None else 50 * count
        for _ in range(tries):
            w, word = z, []
            while w != 0:
                s = rng.choice(self.descents(w))
                word.append(s)
                w = self.twist(s, w)
            found[tuple(word)] = None
            if len(found) >= count:
                break
        return list(found)

    def sigma_set(self, z: int) -> frozenset:
        """{sigma'_z : sigma' a reduced I*-expression of z} as group indices."""
        got = self._sigma_sets.get(z)
        if got is not None:
            return got
        if z == 0:
            res = frozenset([0])
        else:
            g = self.group
            res = frozenset(g.left[x][s] for s in self.descents(z)
                            for x in self.sigma_set(self.twist(s, z)))
        self._sigma_sets[z] = res
        return res

    def rows(self) -> list[dict]:
        g = self.group
        out = []
        for i, z in enumerate(self.elements):
            out.append({
                "index": i,
                "word": g.word_str(z),
                "length": g.length[z],
                "rho": self.rho[z],
                "ell_star": self.ell_star[z],
                "expression": format_word(self.expr[z]),
                "sigma": g.word_str(self.sigma[z]),
                "completion": format_word(self.completion[z]),
            })
        return out


def enumerate_twisted(table: GroupTable) -> TwistTable:
    """BFS from 1 via ⋉ assigns rho; canonical expressions by greedy least descent."""
    if table.truncated:
        raise TruncatedTable("twisted involutions need a finite, fully enumerated group")
    rho = {0: 0}
    frontier = [0]
    while frontier:
        nxt = []
        for w in frontier:
            for s in table.generators:
                v = _twist(table, s, w)
                if v not in rho:
                    rho[v] = rho[w] + 1
                    nxt.append(v)
        frontier = nxt

    expr: dict[int, tuple[int, ...]] = {0: ()}
    for z in sorted(rho, key=rho.__getitem__):
        if z == 0:
            continue
        for s in table.generators:
            v = _twist(table, s, z)
            if rho[v] == rho[z] - 1:
                expr[z] = (s,) + expr[v]
                break
    elements = sorted(rho, key=lambda z: (rho[z], expr[z]))
    position = {z: i for i, z in enumerate(elements)}
    tw = TwistTable(table, elements, position, rho, expr, {}, {}, {})
    for z in elements:
        tw.ell_star[z] = ell_star(tw, z, expr[z])
        tw.sigma[z] = table.index_of_word(expr[z])
        tw.completion[z] = completion_word(tw, expr[z])
    return tw


def _check_reduced(tw: TwistTable, z: int, expr: Sequence[int]) -> list[int]:
    # the chain 1 = w_k, ..., w_0 = z climbing one rank per letter
    chain = [0]
    for s in reversed(expr):
        w = tw.twist(s, chain[-1])
        if tw.rho[w] != tw.rho[chain[-1]] + 1:
            raise NotReducedExpression(
                f"({format_word(expr)}) is not a reduced I*-expression")
        chain.append(w)
    if chain[-1] != z:
        raise NotReducedExpression(
            f"({format_word(expr)}) evaluates to {tw.group.word_str(chain[-1])},"
            f" not {tw.group.word_str(z)}")
    return chain


def ell_star(tw: TwistTable, z: int, expr: Sequence[int]) -> int:
    """Number of steps of the expression that take the sw = ws* branch."""
    chain = _check_reduced(tw, z, expr)
    g = tw.group
    # chain[j] is reached after the last j letters; step k applies expr[k]
    # to chain[len - k - 1]
    k = len(expr)
    return sum(1 for t, s in enumerate(expr) if commutes_twisted(g, s, chain[k - t - 1]))


def completion_word(tw: TwistTable, expr: Sequence[int]) -> tuple[int, ...]:
    """Reduced word of z extending the expression by the conjugating letters.

    Walking the expression from the right, each sws* step appends s* to the
    tail; the result (expr + tail) is a reduced word for z.
    """
    g = tw.group
    tail: list[int] = []
    w = 0
    for s in reversed(expr):
        if not commutes_twisted(g, s, w):
            tail.append(g.spec.star[s])
        w = _twist(g, s, w)
    return tuple(expr) + tuple(tail)
