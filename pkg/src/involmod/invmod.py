"""
The u-deformed involution module M with basis {a_z : z twisted involution}.

T_s acts on a_w by four rules depending on whether sw = ws* and whether
l(sw) > l(w).  Applying T_x to a_1 gives the structure polynomials L_z^x,
from which this module derives the twisted polynomials
Lt_z^x = (-1)^l(x) eps(z) bar(L_z^x), their values n_z^x at u^-1 = 0, the
map pi: W -> I*, the embedding mu(a_z) = sum_x Lt_z^x T_x into H, and the
expansion of a_z in the basis {T_{sigma_w} a_1}.

>>> from .coxeter import CoxeterSpec, enumerate_group
>>> from .twistinv import enumerate_twisted
>>> tw = enumerate_twisted(enumerate_group(CoxeterSpec.preset("A1")))
>>> lt = compute_L_table(tw)
>>> {tw.group.word_str(z): str(p) for z, p in lt.L[1].items()}
{'1': 'u', 's1': '1+u'}
>>> str(lt.Ltilde[1][1]), lt.pi[1]
('-u^{-1}+1', 1)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .coxeter import GroupTable
from .errors import (
    DenominatorOutsideAminus1, InvariantViolation, NotPolynomial, PiNotUnique,
)
from .exactring import LaurentPoly, Localized, eval_at_u_inverse_zero, eval_at_u_zero
from .hecke import FreeElt, HeckeElt, _add_to
from .twistinv import TwistTable, commutes_twisted

__all__ = [
    "ModuleElt", "InvolutionModule", "LTable", "compute_L_table", "derive_L_table",
    "mu_of_az", "mu", "pi_map", "express_az_in_Tsigma", "basis_change",
    "zero_hecke_act", "zero_hecke_word",
]

U = LaurentPoly.u()
U_PLUS_1 = LaurentPoly({0: 1, 1: 1})
U2 = LaurentPoly({2: 1})
U2_MINUS_1 = LaurentPoly({0: -1, 2: 1})
U2_MINUS_U = LaurentPoly({1: -1, 2: 1})
U2_MINUS_U_MINUS_1 = LaurentPoly({0: -1, 1: -1, 2: 1})


class ModuleElt(FreeElt):
    """Element of M: map (group index of z) -> coefficient of a_z."""

    __slots__ = ()


class InvolutionModule:
    """The left H-action on M for a fixed table of twisted involutions."""

    def __init__(self, twist: TwistTable):
        self.twist = twist
        self.group: GroupTable = twist.group

    def a(self, z: int, coeff=1) -> ModuleElt:
        if z not in self.twist:
            raise KeyError(f"{self.group.word_str(z)} is not a twisted involution")
        return ModuleElt({z: coeff if isinstance(coeff, Localized) else Localized(coeff)})

    def act_Ts(self, s: int, m: FreeElt) -> ModuleElt:
        g = self.group
        out: dict = {}
        for w, c in m.items():
            sw = g.left[w][s]
            up = g.length[sw] > g.length[w]
            if commutes_twisted(g, s, w):
                if up:
                    _add_to(out, w, c * U)
                    _add_to(out, sw, c * U_PLUS_1)
                else:
                    _add_to(out, w, c * U2_MINUS_U_MINUS_1)
                    _add_to(out, sw, c * U2_MINUS_U)
            else:
                sws = g.right[sw][g.spec.star[s]]
                if up:
                    _add_to(out, sws, c)
                else:
                    _add_to(out, w, c * U2_MINUS_1)
                    _add_to(out, sws, c * U2)
        return ModuleElt._raw(out)

    def act_word(self, word: Iterable[int], m: FreeElt) -> ModuleElt:
        """T_{s_1} ... T_{s_k} m."""
        for s in reversed(tuple(word)):
            m = self.act_Ts(s, m)
        return m if isinstance(m, ModuleElt) else ModuleElt(dict(m.items()))

    def act_Tw(self, w: int, m: FreeElt) -> ModuleElt:
        return self.act_word(self.group.words[w], m)

    def act(self, h: FreeElt, m: FreeElt) -> ModuleElt:
        """A general Hecke element acting on m."""
        out = ModuleElt()
        for w, c in h.items():
            out = out + self.act_Tw(w, m).scale(c)
        return out

    def format(self, m: FreeElt) -> str:
        g = self.group
        if not m:
            return "0"
        order = self.twist.position
        return " + ".join(f"({c})a_{{{g.word_str(z)}}}"
                          for z, c in sorted(m.items(), key=lambda kv: order[kv[0]]))


# -- structure polynomials -----------------------------------------------------


@dataclass(eq=False)
class LTable:
    """L_z^x with derived Lt_z^x, n_z^x and pi, for every x in W.

    Rows are keyed by the group index x; inner maps by the group index of z
    and store only nonzero entries.
    """

    twist: TwistTable
    L: list[dict[int, LaurentPoly]]
    Ltilde: list[dict[int, LaurentPoly]]
    n: list[dict[int, int]]
    pi: list[int]
    _columns: dict[int, dict[int, LaurentPoly]] = field(default_factory=dict, repr=False)

    @property
    def group(self) -> GroupTable:
        return self.twist.group

    def column(self, z: int) -> dict[int, LaurentPoly]:
        """x -> Lt_z^x (nonzero entries)."""
        col = self._columns.get(z)
        if col is None:
            col = {x: row[z] for x, row in enumerate(self.Ltilde) if z in row}
            self._columns[z] = col
        return col

    def Lcoeff(self, z: int, x: int) -> LaurentPoly:
        return self.L[x].get(z, LaurentPoly())

    def Tsigma_a1(self, z: int) -> dict[int, LaurentPoly]:
        """Coefficients of T_{sigma_z} a_1 in the a-basis."""
        return self.L[self.twist.sigma[z]]


def _derive(twist: TwistTable, rows: list[dict[int, LaurentPoly]]) -> LTable:
    g = twist.group
    Ltilde, ns, pi = [], [], []
    for x, row in enumerate(rows):
        sx = -1 if g.length[x] % 2 else 1
        trow, nrow = {}, {}
        for z, p in row.items():
            q = p.bar()
            if sx * twist.eps(z) < 0:
                q = -q
            trow[z] = q
            nz = eval_at_u_inverse_zero(q)
            if nz:
                nrow[z] = nz
        ones = [z for z, v in nrow.items() if v == 1]
        if len(ones) != 1 or any(v != 1 for v in nrow.values()):
            raise PiNotUnique(
                f"n^x_z for x = {g.word_str(x)} is {({g.word_str(z): v for z, v in nrow.items()})}")
        Ltilde.append(trow)
        ns.append(nrow)
        pi.append(ones[0])
    return LTable(twist, rows, Ltilde, ns, pi)


def compute_L_table(twist: TwistTable) -> LTable:
    """T_x a_1 for all x, by extending the stored row of the shorter prefix.

    x = t * rest with t the first letter of the canonical word, so
    T_x a_1 = T_t (T_rest a_1).
    """
    g = twist.group
    module = InvolutionModule(twist)
    rows: list[dict[int, LaurentPoly]] = [{0: LaurentPoly.const(1)}]
    for x in range(1, len(g)):
        t = g.words[x][0]
        rest = g.left[x][t]
        m = module.act_Ts(t, ModuleElt._raw(dict(rows[rest])))
        row = dict(m.items())
        for z, p in row.items():
            if not p.is_polynomial():
                raise NotPolynomial(f"L_{g.word_str(z)}^{g.word_str(x)} = {p} is not in Z[u]")
        rows.append(row)
    return _derive(twist, rows)


def derive_L_table(twist: TwistTable, rows: list[dict[int, LaurentPoly]]) -> LTable:
    """Rebuild Lt, n and pi from stored L rows (used when loading a cache)."""
    for x, row in enumerate(rows):
        for z, p in row.items():
            if not p.is_polynomial():
                raise NotPolynomial(f"L row {x} has a non-polynomial entry {p}")
    return _derive(twist, rows)


def mu_of_az(lt: LTable, z: int) -> HeckeElt:
    """mu(a_z) = sum_x Lt_z^x T_x."""
    return HeckeElt({x: Localized(p) for x, p in lt.column(z).items()})


def mu(lt: LTable, m: FreeElt) -> HeckeElt:
    out = HeckeElt()
    for z, c in m.items():
        out = out + mu_of_az(lt, z).scale(c)
    return out


def pi_map(lt: LTable, x: int) -> int:
    return lt.pi[x]


# -- change of basis -------------------------------------------------------------


def express_az_in_Tsigma(lt: LTable, z: int, _cache: dict | None = None) -> dict[int, Localized]:
    """xi with a_z = sum_w xi[w] T_{sigma_w} a_1.

    Back-substitution: a_z = (T_{sigma_z} a_1 - sum_{w != z} L_w^{sigma_z} a_w)
    / L_z^{sigma_z}, recursing on the lower a_w.
    """
    cache = {} if _cache is None else _cache
    if z in cache:
        return cache[z]
    tw = lt.twist
    g = tw.group
    col = lt.Tsigma_a1(z)
    diag = col.get(z)
    if not diag:
        raise InvariantViolation(f"a_{g.word_str(z)} missing from T_sigma a_1")
    acc: dict = {z: Localized(1)}
    for w, p in col.items():
        if w == z:
            continue
        if tw.rho[w] >= tw.rho[z]:
            raise InvariantViolation(
                f"T_sigma a_1 for z = {g.word_str(z)} involves a_{g.word_str(w)} of rank >= rho(z)")
        for v, c in express_az_in_Tsigma(lt, w, cache).items():
            _add_to(acc, v, -(c * p))
    inv = Localized(1) / Localized(diag)
    xi = {v: c * inv for v, c in acc.items() if c}
    for v, c in xi.items():
        if not c.in_A_minus1():
            raise DenominatorOutsideAminus1(
                f"xi_{g.word_str(z)}^{g.word_str(v)} = {c} has a (u-1) denominator")
    cache[z] = xi
    return xi


def basis_change(lt: LTable) -> dict[int, dict[int, Localized]]:
    cache: dict = {}
    return {z: express_az_in_Tsigma(lt, z, cache) for z in lt.twist.elements}


# -- the u = 0 degeneration ------------------------------------------------------


def zero_hecke_act(twist: TwistTable, s: int, m: dict[int, int]) -> dict[int, int]:
    """0-Hecke rule: a_{s ⋉ w} if l(sw) > l(w), else -a_w."""
    g = twist.group
    out: dict[int, int] = {}
    for w, c in m.items():
        sw = g.left[w][s]
        if g.length[sw] > g.length[w]:
            _add_to(out, twist.twist(s, w), c)
        else:
            _add_to(out, w, -c)
    return out


def zero_hecke_word(twist: TwistTable, word: Iterable[int], m: dict[int, int]) -> dict[int, int]:
    for s in reversed(tuple(word)):
        m = zero_hecke_act(twist, s, m)
    return m


def at_u_zero(coeffs: dict[int, LaurentPoly]) -> dict[int, int]:
    """Specialize polynomial coefficients at u = 0 (M_{A,u} -> M_0)."""
    out = {}
    for z, p in coeffs.items():
        v = eval_at_u_zero(p)
        if v:
            out[z] = v
    return out
