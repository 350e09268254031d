"""
The Iwahori-Hecke algebra H with parameter u^2, acting on itself by left
multiplication in the standard basis {T_w}.

Coefficients are `Localized` scalars; `LaurentPoly` and int coefficients
are accepted and promoted on arithmetic.

>>> from .coxeter import CoxeterSpec, enumerate_group
>>> H = HeckeAlgebra(enumerate_group(CoxeterSpec.preset("A1")))
>>> print(H.format(H.mult_Ts(0, H.T(1))))
(-1+u^{2})T_{s1} + (u^{2})T_{1}
"""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping

from .coxeter import GroupTable, parse_word
from .errors import TruncatedTable
from .exactring import LaurentPoly, Localized

__all__ = ["FreeElt", "HeckeElt", "HeckeAlgebra"]

U = LaurentPoly.u()
U2 = LaurentPoly({2: 1})
U2_MINUS_1 = LaurentPoly({0: -1, 2: 1})


class FreeElt:
    """Finite linear combination of basis indices with ring coefficients.

    Immutable; zero coefficients are dropped on construction.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[int, object] | None = None):
        self._c = {k: v for k, v in (coeffs or {}).items() if v}

    @classmethod
    def _raw(cls, c):
        x = object.__new__(cls)
        x._c = c
        return x

    @classmethod
    def basis(cls, i: int, coeff=1):
        return cls({i: coeff if isinstance(coeff, Localized) else Localized(coeff)})

    def coeff(self, i: int):
        return self._c.get(i, 0)

    def items(self):
        return self._c.items()

    def support(self) -> set[int]:
        return set(self._c)

    def __iter__(self) -> Iterator[int]:
        return iter(self._c)

    def __len__(self):
        return len(self._c)

    def __bool__(self):
        return bool(self._c)

    def __add__(self, other):
        if not isinstance(other, FreeElt):
            return NotImplemented
        c = dict(self._c)
        for k, v in other._c.items():
            w = c[k] + v if k in c else v
            if w:
                c[k] = w
            else:
                c.pop(k, None)
        return type(self)._raw(c)

    def __neg__(self):
        return type(self)._raw({k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        if not isinstance(other, FreeElt):
            return NotImplemented
        return self + (-other)

    def scale(self, r):
        if not r:
            return type(self)._raw({})
        return type(self)({k: r * v for k, v in self._c.items()})

    def __rmul__(self, r):
        if isinstance(r, (int, LaurentPoly, Localized)):
            return self.scale(r)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, FreeElt):
            return NotImplemented
        keys = set(self._c) | set(other._c)
        return all(self.coeff(k) == other.coeff(k) for k in keys)

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def __repr__(self):
        return f"{type(self).__name__}({self._c!r})"


class HeckeElt(FreeElt):
    """Element of H: map group index -> coefficient."""

    __slots__ = ()


def _add_to(c: dict, k: int, v) -> None:
    if k in c:
        w = c[k] + v
        if w:
            c[k] = w
        else:
            del c[k]
    elif v:
        c[k] = v


class HeckeAlgebra:
    """Left multiplication in H for a fixed group table."""

    def __init__(self, table: GroupTable):
        self.table = table

    def T(self, w: int, coeff=1) -> HeckeElt:
        return HeckeElt({w: coeff if isinstance(coeff, Localized) else Localized(coeff)})

    def one(self) -> HeckeElt:
        return self.T(0)

    def mult_Ts(self, s: int, h: FreeElt) -> HeckeElt:
        """T_s * h."""
        g = self.table
        out: dict = {}
        for w, c in h.items():
            sw = g.left[w][s]
            if sw < 0:
                raise TruncatedTable(
                    f"T_s{s + 1} T_{g.word_str(w)} leaves the length cutoff {g.cutoff}")
            if g.length[sw] > g.length[w]:
                _add_to(out, sw, c)
            else:
                _add_to(out, w, c * U2_MINUS_1)
                _add_to(out, sw, c * U2)
        return HeckeElt._raw(out)

    def mult_word(self, word: Iterable[int], h: FreeElt) -> HeckeElt:
        """T_{s_1} ... T_{s_k} * h for a word (s_1, ..., s_k)."""
        for s in reversed(tuple(word)):
            h = self.mult_Ts(s, h)
        return h if isinstance(h, HeckeElt) else HeckeElt(dict(h.items()))

    def mult_Tw(self, w: int, h: FreeElt) -> HeckeElt:
        """T_w * h via the canonical reduced word of w."""
        return self.mult_word(self.table.words[w], h)

    def mult(self, x: FreeElt, y: FreeElt) -> HeckeElt:
        out = HeckeElt()
        for w, c in x.items():
            out = out + self.mult_Tw(w, y).scale(c)
        return out

    def x_empty(self, allow_truncated: bool = False) -> HeckeElt:
        """Sum of u^-l(x) T_x over x with x* = x."""
        g = self.table
        if g.truncated and not allow_truncated:
            raise TruncatedTable("X_empty is an infinite sum on this group; pass allow_truncated")
        return HeckeElt({x: Localized(LaurentPoly({-g.length[x]: 1})) for x in g.star_fixed()})

    # -- i/o -----------------------------------------------------------------

    def format(self, h: FreeElt) -> str:
        g = self.table
        if not h:
            return "0"
        parts = [f"({c})T_{{{g.word_str(w)}}}" if c != 1 else f"T_{{{g.word_str(w)}}}"
                 for w, c in sorted(h.items(), key=lambda kv: (-g.length[kv[0]], kv[0]))]
        return " + ".join(parts)

    def to_json(self, h: FreeElt) -> dict:
        g = self.table
        return {"terms": [{"w": g.word_str(w), "coeff": Localized._coerce(c).to_json()}
                          for w, c in sorted(h.items())]}

    def from_json(self, data: dict) -> HeckeElt:
        out: dict = {}
        for term in data["terms"]:
            w = self.table.index_of_word(parse_word(term["w"], self.table.rank))
            _add_to(out, w, Localized.from_json(term["coeff"]))
        return HeckeElt._raw(out)

