"""
Finite Coxeter groups as fully enumerated index tables.

A group is described by a `CoxeterSpec` (Coxeter matrix plus a diagram
involution `star`) and enumerated by breadth-first search over its Cayley
graph in some faithful model.  Elements are then re-indexed by
(length, ShortLex reduced word), so the resulting `GroupTable` does not
depend on which model was used.

Models ("backends"):

* ``crystallographic``: the orbit of a regular dominant weight under the
  Weyl group of a generalized Cartan matrix; entries m_ij in {2, 3, 4, 6}
  (and 0 for infinity, which requires a length cutoff).
* ``dihedral``: rotation/reflection pairs (k mod m, f) for rank-2 groups
  with arbitrary m.
* ``permutation``: one-line permutations for type A_n.
* ``signed``: signed permutations for types B_n and D_n.

>>> t = enumerate_group(CoxeterSpec.preset("A2"))
>>> len(t), t.max_length
(6, 3)
>>> [t.word_str(w) for w in range(len(t))]
['1', 's1', 's2', 's1s2', 's2s1', 's1s2s1']
>>> t.bruhat_leq(t.parse_word("s1s2"), t.parse_word("s2s1"))
False
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Iterator, Sequence

from .errors import GroupTooLarge, InvalidCoxeterSpec, UnsupportedGroup

__all__ = [
    "CoxeterSpec", "GroupTable", "enumerate_group", "preset_matrix",
    "star_fixed_elements", "bruhat_leq",
]

INFINITY = 0  # matrix entry meaning m_ij = infinity


# -- specs -------------------------------------------------------------------


def _chain(n: int, bonds: Sequence[int]) -> list[list[int]]:
    m = [[2] * n for _ in range(n)]
    for i in range(n):
        m[i][i] = 1
    for i, b in enumerate(bonds):
        m[i][i + 1] = m[i + 1][i] = b
    return m


def _connect(m, i, j, b):
    m[i][j] = m[j][i] = b


def preset_matrix(name: str) -> tuple[list[list[int]], tuple[int, ...] | None]:
    """Coxeter matrix of a named type plus its standard diagram flip (0-based)."""
    key = name.strip().replace(" ", "")
    mt = re.fullmatch(r"I2\((\d+)\)|I2_(\d+)", key)
    if mt:
        m = int(mt.group(1) or mt.group(2))
        if m < 2:
            raise InvalidCoxeterSpec(f"I2(m) needs m >= 2, got {m}")
        return [[1, m], [m, 1]], (1, 0)
    mt = re.fullmatch(r"(~?)([A-HI])(\d+)", key)
    if not mt:
        raise InvalidCoxeterSpec(f"unknown preset {name!r}")
    affine, kind, n = mt.group(1), mt.group(2), int(mt.group(3))
    rev = tuple(range(n - 1, -1, -1))
    if affine:
        if kind != "A" or n < 1:
            raise InvalidCoxeterSpec(f"only affine type ~A_n is preset, got {name!r}")
        if n == 1:
            return [[1, INFINITY], [INFINITY, 1]], (1, 0)
        k = n + 1
        m = _chain(k, [3] * n)
        _connect(m, 0, k - 1, 3)
        return m, tuple((k - i) % k for i in range(k))
    if kind == "A" and n >= 1:
        return _chain(n, [3] * (n - 1)), rev
    if kind in "BC" and n >= 2:
        return _chain(n, [3] * (n - 2) + [4]), (rev if n == 2 else None)
    if kind == "D" and n >= 4:
        m = _chain(n - 1, [3] * (n - 2))
        for row in m:
            row.append(2)
        m.append([2] * n)
        m[n - 1][n - 1] = 1
        _connect(m, n - 3, n - 1, 3)
        flip = list(range(n))
        flip[n - 2], flip[n - 1] = n - 1, n - 2
        return m, tuple(flip)
    if kind == "E" and n in (6, 7, 8):
        # Bourbaki labels: 1-3-4-5-6-7-8 with 2 attached to 4
        m = [[2] * n for _ in range(n)]
        for i in range(n):
            m[i][i] = 1
        for i, j in [(0, 2), (2, 3), (3, 4), (1, 3)] + [(k, k + 1) for k in range(4, n - 1)]:
            _connect(m, i, j, 3)
        return m, ((5, 1, 4, 3, 2, 0) if n == 6 else None)
    if kind == "F" and n == 4:
        return _chain(4, [3, 4, 3]), rev
    if kind == "G" and n == 2:
        return [[1, 6], [6, 1]], (1, 0)
    if kind == "H" and n in (3, 4):
        return _chain(n, [5] + [3] * (n - 2)), None
    raise InvalidCoxeterSpec(f"unknown preset {name!r}")


@dataclass(frozen=True)
class CoxeterSpec:
    """A Coxeter matrix together with a compatible diagram involution.

    `star` is a 0-based permutation of the generators.  Matrix entries use
    0 for infinity.
    """

    matrix: tuple[tuple[int, ...], ...]
    star: tuple[int, ...]
    name: str | None = None

    def __post_init__(self):
        m = tuple(tuple(int(x) for x in row) for row in self.matrix)
        object.__setattr__(self, "matrix", m)
        n = len(m)
        if n == 0:
            raise InvalidCoxeterSpec("Coxeter matrix must be non-empty")
        if any(len(row) != n for row in m):
            raise InvalidCoxeterSpec("Coxeter matrix must be square")
        for i in range(n):
            if m[i][i] != 1:
                raise InvalidCoxeterSpec(f"diagonal entry m[{i+1}][{i+1}] must be 1")
            for j in range(n):
                if m[i][j] != m[j][i]:
                    raise InvalidCoxeterSpec(f"matrix not symmetric at ({i+1},{j+1})")
                if i != j and m[i][j] != INFINITY and m[i][j] < 2:
                    raise InvalidCoxeterSpec(
                        f"off-diagonal entry m[{i+1}][{j+1}] must be >= 2 (or 0 for infinity)")
        star = tuple(int(x) for x in self.star)
        object.__setattr__(self, "star", star)
        if sorted(star) != list(range(n)):
            raise InvalidCoxeterSpec(f"star {[x + 1 for x in star]} is not a permutation of 1..{n}")
        if any(star[star[i]] != i for i in range(n)):
            raise InvalidCoxeterSpec("star must be an involution (star o star = id)")
        for i in range(n):
            for j in range(n):
                if m[star[i]][star[j]] != m[i][j]:
                    raise InvalidCoxeterSpec(
                        f"star incompatible with matrix: m[{star[i]+1}][{star[j]+1}]"
                        f" != m[{i+1}][{j+1}]")

    @property
    def rank(self) -> int:
        return len(self.matrix)

    @classmethod
    def from_matrix(cls, matrix, star=None, name=None) -> CoxeterSpec:
        n = len(matrix)
        return cls(tuple(map(tuple, matrix)),
                   tuple(range(n)) if star is None else tuple(star), name)

    @classmethod
    def preset(cls, name: str, star=None) -> CoxeterSpec:
        """Named type, e.g. "A3", "B2", "D4", "I2(5)", "~A2".

        `star` may be None or "id" (identity), "flip" (the standard diagram
        flip of the type) or a 0-based permutation.
        """
        matrix, flip = preset_matrix(name)
        n = len(matrix)
        if star is None or star == "id":
            perm = tuple(range(n))
        elif star == "flip":
            if flip is None:
                raise InvalidCoxeterSpec(f"type {name} has no standard diagram flip")
            perm = flip
        else:
            perm = tuple(star)
        return cls(tuple(map(tuple, matrix)), perm, name)

    @classmethod
    def from_mapping(cls, data: dict, star=None) -> CoxeterSpec:
        """Parse the file/CLI form {"preset": ...} or {"matrix": ...}, "star" 1-based."""
        if "preset" in data and "matrix" in data:
            raise InvalidCoxeterSpec("'preset' and 'matrix' are mutually exclusive")
        raw_star = star if star is not None else data.get("star")
        perm = None
        if isinstance(raw_star, str):
            perm = raw_star
        elif raw_star is not None:
            perm = tuple(int(x) - 1 for x in raw_star)
        if "preset" in data:
            return cls.preset(str(data["preset"]), perm)
        if "matrix" in data:
            if perm == "flip":
                raise InvalidCoxeterSpec("'flip' needs a preset; give an explicit permutation")
            if perm == "id":
                perm = None
            return cls.from_matrix(data["matrix"], perm, data.get("name"))
        raise InvalidCoxeterSpec("group spec needs 'preset' or 'matrix'")

    def with_star(self, star) -> CoxeterSpec:
        return CoxeterSpec(self.matrix, tuple(star), self.name)

    def is_identity_star(self) -> bool:
        return all(i == s for i, s in enumerate(self.star))

    def compatible_stars(self) -> list[tuple[int, ...]]:
        """All diagram involutions compatible with the matrix, identity first."""
        n = self.rank
        m = self.matrix
        out = []

        def extend(perm: list[int | None], i: int):
            if i == n:
                p = tuple(perm)  # type: ignore[arg-type]
                if all(m[p[a]][p[b]] == m[a][b] for a in range(n) for b in range(n)):
                    out.append(p)
                return
            if perm[i] is not None:
                extend(perm, i + 1)
                return
            perm[i] = i
            extend(perm, i + 1)
            perm[i] = None
            for j in range(i + 1, n):
                if perm[j] is None:
                    perm[i], perm[j] = j, i
                    extend(perm, i + 1)
                    perm[i] = perm[j] = None

        extend([None] * n, 0)
        out.sort(key=lambda p: (p != tuple(range(n)), p))
        return out

    def to_json(self) -> dict:
        return {
            "matrix": [list(r) for r in self.matrix],
            "star": [s + 1 for s in self.star],
        }

    def label(self) -> str:
        base = self.name or "matrix" + str([list(r) for r in self.matrix])
        if self.is_identity_star():
            return base
        return f"{base} star={','.join(str(s + 1) for s in self.star)}"


# -- backends --------------------------------------------------------------


Action = tuple[Hashable, Callable[[Hashable, int], Hashable]]


def _cartan(matrix) -> list[list[int]]:
    n = len(matrix)
    a = [[0] * n for _ in range(n)]
    for i in range(n):
        a[i][i] = 2
        for j in range(i + 1, n):
            m = matrix[i][j]
            if m == 2:
                continue
            if m == 3:
                a[i][j] = a[j][i] = -1
            elif m == 4:
                a[i][j], a[j][i] = -1, -2
            elif m == 6:
                a[i][j], a[j][i] = -1, -3
            elif m == INFINITY:
                a[i][j] = a[j][i] = -2
            else:
                raise UnsupportedGroup(
                    f"m = {m} is not crystallographic; use the dihedral backend (rank 2 only)")
    return a


def _crystallographic(spec: CoxeterSpec) -> Action:
    a = _cartan(spec.matrix)
    n = spec.rank
    # s_i(v)_j = v_j - v_i * A[j][i], v in fundamental weight coordinates
    cols = [tuple(a[j][i] for j in range(n)) for i in range(n)]

    def act(v, i):
        c = v[i]
        if c == 0:
            return v
        col = cols[i]
        return tuple(x - c * y for x, y in zip(v, col))

    return (1,) * n, act


def _dihedral(spec: CoxeterSpec) -> Action:
    if spec.rank != 2:
        raise UnsupportedGroup("dihedral backend needs rank 2")
    m = spec.matrix[0][1]
    if m == INFINITY:
        raise UnsupportedGroup("dihedral backend needs finite m")
    # element r^k s^f with r = s1 s2; s1 = (0, 1), s2 = (-1, 1)
    shift = (0, -1)

    def act(x, i):
        k, f = x
        return ((shift[i] - k) % m, 1 - f)

    return (0, 0), act


def _same_matrix(spec: CoxeterSpec, name: str) -> bool:
    try:
        m, _ = preset_matrix(name)
    except InvalidCoxeterSpec:
        return False
    return tuple(map(tuple, m)) == spec.matrix


def _permutation(spec: CoxeterSpec) -> Action:
    n = spec.rank
    if not _same_matrix(spec, f"A{n}"):
        raise UnsupportedGroup("permutation backend needs type A_n in standard labelling")

    def act(p, i):
        # left multiplication by the transposition (i, i+1) on values
        return tuple(i + 1 if x == i else i if x == i + 1 else x for x in p)

    return tuple(range(n + 1)), act


def _signed(spec: CoxeterSpec) -> Action:
    n = spec.rank
    if _same_matrix(spec, f"B{n}"):
        kind = "B"
    elif n >= 4 and _same_matrix(spec, f"D{n}"):
        kind = "D"
    else:
        raise UnsupportedGroup("signed backend needs type B_n or D_n in standard labelling")

    def image(x, i):
        # the generator s_i acting on a signed value x in {+-1..+-n}
        a = abs(x)
        sign = 1 if x > 0 else -1
        if i < n - 1:
            if a == i + 1:
                return sign * (i + 2)
            if a == i + 2:
                return sign * (i + 1)
            return x
        if kind == "B":
            return -x if a == n else x
        # D_n: swap n-1 and n with both signs changed
        if a == n - 1:
            return -sign * n
        if a == n:
            return -sign * (n - 1)
        return x

    def act(p, i):
        return tuple(image(x, i) for x in p)

    return tuple(range(1, n + 1)), act


BACKENDS = {
    "crystallographic": _crystallographic,
    "dihedral": _dihedral,
    "permutation": _permutation,
    "signed": _signed,
}


def _auto_backend(spec: CoxeterSpec) -> str:
    entries = {spec.matrix[i][j] for i in range(spec.rank) for j in range(spec.rank) if i != j}
    if entries <= {2, 3, 4, 6, INFINITY}:
        return "crystallographic"
    if spec.rank == 2:
        return "dihedral"
    raise UnsupportedGroup(
        "only crystallographic entries {2,3,4,6} are supported beyond rank 2 (no H3/H4)")


# -- the table ---------------------------------------------------------------


@dataclass(eq=False)
class GroupTable:
    """An enumerated Coxeter group; element identity is the table index.

    Index 0 is the identity.  Indices are sorted by (length, word) where
    `word` is the ShortLex-least reduced word (0-based generator indices).
    Product entries are -1 when they fall outside a truncated table.
    """

    spec: CoxeterSpec
    length: list[int]
    words: list[tuple[int, ...]]
    left: list[tuple[int, ...]]     # left[w][s] = index of s*w
    right: list[tuple[int, ...]]    # right[w][s] = index of w*s
    inverse: list[int]
    star: list[int]
    truncated: bool = False
    cutoff: int | None = None
    _index: dict[tuple[int, ...], int] = field(default_factory=dict, repr=False)
    _ideals: dict[int, frozenset] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self._index:
            self._index = {w: i for i, w in enumerate(self.words)}

    def __len__(self) -> int:
        return len(self.length)

    @property
    def rank(self) -> int:
        return self.spec.rank

    @property
    def generators(self) -> range:
        return range(self.spec.rank)

    @property
    def max_length(self) -> int:
        return max(self.length)

    def gen(self, s: int) -> int:
        return self.left[0][s]

    def star_gen(self, s: int) -> int:
        return self.spec.star[s]

    def index_of_word(self, word: Iterable[int]) -> int:
        """Index of the product of a (not necessarily reduced) word."""
        w = 0
        for s in reversed(tuple(word)):
            w = self.left[w][s]
            if w < 0:
                raise IndexError("product leaves the truncated table")
        return w

    def mul(self, x: int, y: int) -> int:
        for s in self.words[y]:
            x = self.right[x][s]
            if x < 0:
                raise IndexError("product leaves the truncated table")
        return x

    def left_descents(self, w: int) -> list[int]:
        lw = self.length[w]
        return [s for s in self.generators if 0 <= self.left[w][s] and self.length[self.left[w][s]] < lw]

    def right_descents(self, w: int) -> list[int]:
        lw = self.length[w]
        return [s for s in self.generators if 0 <= self.right[w][s] and self.length[self.right[w][s]] < lw]

    def is_left_descent(self, s: int, w: int) -> bool:
        sw = self.left[w][s]
        return sw >= 0 and self.length[sw] < self.length[w]

    # -- words ---------------------------------------------------------------

    def word_str(self, w: int) -> str:
        return format_word(self.words[w])

    def parse_word(self, text: str) -> int:
        return self.index_of_word(parse_word(text, self.rank))

    def reduced_words(self, w: int) -> Iterator[tuple[int, ...]]:
        """All reduced words of w, in lexicographic order."""
        if self.length[w] == 0:
            yield ()
            return
        for s in self.left_descents(w):
            for rest in self.reduced_words(self.left[w][s]):
                yield (s,) + rest

    # -- order ----------------------------------------------------------------

    def bruhat_ideal(self, w: int) -> frozenset:
        """{x : x <= w} via: if s is a left descent of w, x <= w iff min(x, sx) <= sw."""
        got = self._ideals.get(w)
        if got is not None:
            return got
        if w == 0:
            res = frozenset([0])
        else:
            s = self.words[w][0]
            below = self.bruhat_ideal(self.left[w][s])
            res = below | frozenset(self.left[x][s] for x in below)
        self._ideals[w] = res
        return res

    def bruhat_leq(self, x: int, w: int) -> bool:
        if self.length[x] > self.length[w]:
            return False
        return x in self.bruhat_ideal(w)

    def star_fixed(self) -> list[int]:
        return [x for x in range(len(self)) if self.star[x] == x]

    def twisted_involutions(self) -> list[int]:
        """Brute-force filter {w : w* = w^-1}."""
        return [w for w in range(len(self)) if self.star[w] == self.inverse[w]]


def star_fixed_elements(table: GroupTable) -> list[int]:
    return table.star_fixed()


def bruhat_leq(table: GroupTable, x: int, w: int) -> bool:
    return table.bruhat_leq(x, w)


def format_word(word: Sequence[int]) -> str:
    """0-based word -> "s1s2s1"; the empty word is "1"."""
    return "".join(f"s{s + 1}" for s in word) or "1"


def parse_word(text: str, rank: int | None = None) -> tuple[int, ...]:
    """Parse "s1s2s1", "1,2,1" or "1"/"e"/"" (identity) into a 0-based word."""
    t = text.strip().replace(" ", "")
    if t in ("", "1", "e", "id"):
        return ()
    if t.startswith("s"):
        parts = t.split("s")[1:]
    else:
        parts = t.split(",")
    try:
        word = tuple(int(p) - 1 for p in parts)
    except ValueError:
        raise ValueError(f"cannot parse word {text!r}") from None
    if any(s < 0 or (rank is not None and s >= rank) for s in word):
        raise ValueError(f"generator index out of range in {text!r}")
    return word


# -- enumeration -------------------------------------------------------------


def enumerate_group(spec: CoxeterSpec, max_elements: int = 200_000,
                    max_length: int | None = None, backend: str = "auto") -> GroupTable:
    """Breadth-first enumeration of W by length.

    With `max_length` the enumeration stops after that layer and the table
    is marked truncated if any generator product leaves it.  Without it,
    exceeding `max_elements` raises GroupTooLarge.
    """
    name = _auto_backend(spec) if backend == "auto" else backend
    if name not in BACKENDS:
        raise UnsupportedGroup(f"unknown backend {backend!r}")
    identity, act = BACKENDS[name](spec)
    n = spec.rank

    states = [identity]
    index = {identity: 0}
    lengths = [0]
    raw_left: list[list[int]] = []
    frontier = deque([0])
    truncated = False
    while frontier:
        w = frontier.popleft()
        row = []
        for s in range(n):
            v = act(states[w], s)
            j = index.get(v)
            if j is None:
                if max_length is not None and lengths[w] + 1 > max_length:
                    truncated = True
                    row.append(-1)
                    continue
                j = len(states)
                if j >= max_elements:
                    raise GroupTooLarge(
                        f"more than {max_elements} elements without closure; pass a length cutoff")
                states.append(v)
                index[v] = j
                lengths.append(lengths[w] + 1)
                frontier.append(j)
            row.append(j)
        raw_left.append(row)

    # ShortLex words by greedy smallest left descent, layer by layer
    N = len(states)
    order = sorted(range(N), key=lambda i: lengths[i])
    words: list[tuple[int, ...] | None] = [None] * N
    words[0] = ()
    for w in order[1:]:
        for s in range(n):
            sw = raw_left[w][s]
            if sw >= 0 and lengths[sw] < lengths[w]:
                words[w] = (s,) + words[sw]  # type: ignore[operator]
                break
    perm = sorted(range(N), key=lambda i: (lengths[i], words[i]))
    new = [0] * N
    for k, i in enumerate(perm):
        new[i] = k
    length = [lengths[i] for i in perm]
    word_list = [words[i] for i in perm]
    left = [tuple(new[j] if j >= 0 else -1 for j in raw_left[i]) for i in perm]

    right: list[tuple[int, ...]] = [tuple(left[0])]  # 1*s = s
    inverse = [0]
    stars = [0]
    for w in range(1, N):
        t = word_list[w][0]
        rest = left[w][t]  # w = t * rest
        row = []
        for s in range(n):
            y = right[rest][s]
            row.append(left[y][t] if y >= 0 else -1)
        right.append(tuple(row))
        inv_rest = inverse[rest]
        inverse.append(right[inv_rest][t] if inv_rest >= 0 else -1)
        st = stars[rest]
        stars.append(left[st][spec.star[t]] if st >= 0 else -1)

    return GroupTable(spec, length, word_list, left, right, inverse, stars,  # type: ignore[arg-type]
                      truncated=truncated, cutoff=max_length if truncated else None)

