"""
Exact arithmetic over the Laurent ring Z[u, u^-1] and its localizations.

`LaurentPoly` is a sparse map exponent -> nonzero int.  `Localized` is an
element num / ((u+1)^a (u-1)^b) of Z[u, u^-1, (u+1)^-1, (u-1)^-1], kept in a
normal form where no (u+1) or (u-1) factor cancels.  The subrings with only
one of the two denominators allowed are recognized by the exponents a, b.

>>> u = LaurentPoly.u()
>>> print((u + 1) * (u - 1))
-1+u^{2}
>>> print((u + 1).bar())
-u^{-1}+1
>>> x = Localized(u * u - 1, a=1)
>>> print(x)
-1+u
>>> print(Localized(1) / (u + 1))
(1)/(u+1)
>>> specialize(Localized(1, a=1), Fraction(2))
Fraction(1, 3)
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .errors import (
    ForbiddenSpecialization,
    NegativeExponentPresent,
    NotDivisible,
    NotInvertible,
    PositiveExponentPresent,
)

__all__ = [
    "LaurentPoly", "Localized", "Residue", "FieldScalar",
    "specialize", "eval_at_u_inverse_zero", "eval_at_u_zero", "unit_split",
]


class LaurentPoly:
    """Integer Laurent polynomial in u, stored sparsely.

    Instances are immutable; the coefficient dict is never mutated after
    construction.
    """

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping[int, int] | None = None):
        c = {}
        if coeffs:
            for e, v in coeffs.items():
                if v:
                    c[int(e)] = int(v)
        self._c = c
        self._hash = None

    @classmethod
    def _raw(cls, c: dict) -> LaurentPoly:
        # c must already be free of zero coefficients
        p = object.__new__(cls)
        p._c = c
        p._hash = None
        return p

    @classmethod
    def const(cls, n: int) -> LaurentPoly:
        return cls._raw({0: n} if n else {})

    @classmethod
    def monomial(cls, coeff: int, exp: int) -> LaurentPoly:
        return cls._raw({exp: coeff} if coeff else {})

    @classmethod
    def u(cls) -> LaurentPoly:
        return cls._raw({1: 1})

    @classmethod
    def from_dense(cls, coeffs: Iterable[int], low: int = 0) -> LaurentPoly:
        """Build from ascending coefficients starting at exponent `low`."""
        return cls._raw({low + i: c for i, c in enumerate(coeffs) if c})

    # -- inspection ---------------------------------------------------------

    @property
    def coeffs(self) -> dict[int, int]:
        return dict(self._c)

    def terms(self) -> list[tuple[int, int]]:
        """(exponent, coefficient) pairs in ascending exponent order."""
        return sorted(self._c.items())

    def coeff(self, exp: int) -> int:
        return self._c.get(exp, 0)

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self) -> bool:
        return bool(self._c)

    def __len__(self) -> int:
        return len(self._c)

    @property
    def min_exp(self) -> int:
        if not self._c:
            raise ValueError("zero polynomial has no exponents")
        return min(self._c)

    @property
    def max_exp(self) -> int:
        if not self._c:
            raise ValueError("zero polynomial has no exponents")
        return max(self._c)

    def is_polynomial(self) -> bool:
        """True when all exponents are >= 0 (membership in Z[u])."""
        return all(e >= 0 for e in self._c)

    def is_monomial(self) -> bool:
        return len(self._c) == 1

    # -- arithmetic ---------------------------------------------------------

    @staticmethod
    def _coerce(x):
        if isinstance(x, LaurentPoly):
            return x
        if isinstance(x, int):
            return LaurentPoly.const(x)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o._c:
            return self
        if not self._c:
            return o
        c = dict(self._c)
        for e, v in o._c.items():
            w = c.get(e, 0) + v
            if w:
                c[e] = w
            else:
                c.pop(e, None)
        return LaurentPoly._raw(c)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({e: -v for e, v in self._c.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not self._c or not o._c:
            return LaurentPoly._raw({})
        a, b = self._c, o._c
        if len(a) < len(b):
            a, b = b, a
        if len(b) == 1:
            (eb, vb), = b.items()
            return LaurentPoly._raw({e + eb: v * vb for e, v in a.items()})
        c: dict[int, int] = {}
        for ea, va in a.items():
            for eb, vb in b.items():
                e = ea + eb
                c[e] = c.get(e, 0) + va * vb
        return LaurentPoly._raw({e: v for e, v in c.items() if v})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if not self.is_monomial() or abs(next(iter(self._c.values()))) != 1:
                raise NotDivisible(f"{self} is not a unit of Z[u,u^-1]")
            (e, v), = self._c.items()
            return LaurentPoly._raw({e * n: v if n % 2 else 1})
        result = LaurentPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def shift(self, k: int) -> LaurentPoly:
        """Multiply by u^k."""
        if k == 0:
            return self
        return LaurentPoly._raw({e + k: v for e, v in self._c.items()})

    def bar(self) -> LaurentPoly:
        """The ring involution u^n -> (-u)^(-n)."""
        return LaurentPoly._raw(
            {-e: (-v if e % 2 else v) for e, v in self._c.items()})

    def value_at_sign(self, r: int) -> int:
        """Evaluate at u = 1 or u = -1."""
        if r == 1:
            return sum(self._c.values())
        return sum(-v if e % 2 else v for e, v in self._c.items())

    def evaluate(self, x):
        """Evaluate at an element of a field (int, Fraction or Residue).

        Negative exponents use the inverse of x, so x must be invertible
        when they occur.
        """
        total = 0 * x
        for e, v in self._c.items():
            total = total + v * (x ** e)
        return total

    def _dense(self) -> tuple[int, list[int]]:
        lo = self.min_exp
        hi = self.max_exp
        d = [0] * (hi - lo + 1)
        for e, v in self._c.items():
            d[e - lo] = v
        return lo, d

    def deflate(self, r: int) -> LaurentPoly | None:
        """Return self / (u - r) for r in {1, -1}, or None if not divisible."""
        if not self._c:
            return self
        if self.value_at_sign(r) != 0:
            return None
        lo, d = self._dense()
        # synthetic division, top down
        q = [0] * (len(d) - 1)
        acc = 0
        for i in range(len(d) - 1, 0, -1):
            acc = d[i] + r * acc
            q[i - 1] = acc
        return LaurentPoly.from_dense(q, lo)

    def exact_div(self, other) -> LaurentPoly:
        """Quotient in Z[u,u^-1]; raises NotDivisible if it does not exist."""
        o = self._coerce(other)
        if o is None:
            raise TypeError(f"cannot divide by {other!r}")
        if not o._c:
            raise NotInvertible("division by zero")
        if not self._c:
            return self
        if o.is_monomial():
            (eb, vb), = o._c.items()
            c = {}
            for e, v in self._c.items():
                q, rem = divmod(v, vb)
                if rem:
                    raise NotDivisible(f"{self} / {o}")
                c[e - eb] = q
            return LaurentPoly._raw(c)
        lo_a, a = self._dense()
        lo_b, b = o._dense()
        if len(a) < len(b):
            raise NotDivisible(f"{self} / {o}")
        lead = b[-1]
        nb = len(b)
        q = [0] * (len(a) - nb + 1)
        for i in range(len(a) - 1, nb - 2, -1):
            v = a[i]
            if not v:
                continue
            k, rem = divmod(v, lead)
            if rem:
                raise NotDivisible(f"{self} / {o}")
            pos = i - nb + 1
            q[pos] = k
            for j in range(nb):
                a[pos + j] -= k * b[j]
        if any(a):
            raise NotDivisible(f"{self} / {o}")
        return LaurentPoly.from_dense(q, lo_a - lo_b)

    # -- comparison ---------------------------------------------------------

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, Localized):
                return other == self
            return NotImplemented
        return self._c == o._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    # -- text / json --------------------------------------------------------

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for e, v in self.terms():
            if e == 0:
                mono = str(abs(v))
            else:
                power = "u" if e == 1 else f"u^{{{e}}}"
                mono = power if abs(v) == 1 else f"{abs(v)}{power}"
            sign = "-" if v < 0 else "+"
            parts.append((sign, mono))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, mono in parts[1:]:
            out += sign + mono
        return out

    def __repr__(self):
        return f"LaurentPoly('{self}')"

    def to_json(self) -> list[list]:
        return [[e, str(v)] for e, v in self.terms()]

    @classmethod
    def from_json(cls, data) -> LaurentPoly:
        return cls({int(e): int(v) for e, v in data})


def _as_poly(x) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, int):
        return LaurentPoly.const(x)
    raise TypeError(f"expected LaurentPoly or int, got {type(x).__name__}")


_U_PLUS_1 = LaurentPoly({0: 1, 1: 1})
_U_MINUS_1 = LaurentPoly({0: -1, 1: 1})


def _strip(num: LaurentPoly, r: int, k: int) -> tuple[LaurentPoly, int]:
    # cancel up to k factors of (u - r) from num
    while k > 0:
        q = num.deflate(r)
        if q is None:
            break
        num = q
        k -= 1
    return num, k


class Localized:
    """An element num / ((u+1)^a (u-1)^b) of Z[u,u^-1,(u+1)^-1,(u-1)^-1].

    The stored triple is a normal form: when a > 0 the numerator is not
    divisible by (u+1), and likewise for b and (u-1).  Zero is (0, 0, 0).
    """

    __slots__ = ("num", "a", "b")

    def __init__(self, num=0, a: int = 0, b: int = 0):
        if a < 0 or b < 0:
            raise ValueError("denominator exponents must be natural numbers")
        num = _as_poly(num)
        if not num:
            a = b = 0
        else:
            if a:
                num, a = _strip(num, -1, a)
            if b:
                num, b = _strip(num, 1, b)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def __setattr__(self, name, value):
        raise AttributeError("Localized is immutable")

    @classmethod
    def _raw(cls, num, a, b) -> Localized:
        x = object.__new__(cls)
        object.__setattr__(x, "num", num)
        object.__setattr__(x, "a", a)
        object.__setattr__(x, "b", b)
        return x

    @staticmethod
    def _coerce(x):
        if isinstance(x, Localized):
            return x
        if isinstance(x, (LaurentPoly, int)):
            return Localized._raw(_as_poly(x), 0, 0)
        return None

    # -- predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def is_laurent(self) -> bool:
        """Membership in Z[u,u^-1]."""
        return self.a == 0 and self.b == 0

    def in_A_minus1(self) -> bool:
        """Membership in Z[u,u^-1,(u+1)^-1]."""
        return self.b == 0

    def in_A_plus1(self) -> bool:
        """Membership in Z[u,u^-1,(u-1)^-1]."""
        return self.a == 0

    def is_unit(self) -> bool:
        return bool(self.num) and unit_split(self.num)[3] == 1

    def as_laurent(self) -> LaurentPoly:
        if not self.is_laurent():
            raise NotDivisible(f"{self} is not a Laurent polynomial")
        return self.num

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.a == o.a and self.b == o.b:
            if self.a == 0 and self.b == 0:
                return Localized._raw(self.num + o.num, 0, 0)
            return Localized(self.num + o.num, self.a, self.b)
        A, B = max(self.a, o.a), max(self.b, o.b)
        n1 = self.num * (_U_PLUS_1 ** (A - self.a)) * (_U_MINUS_1 ** (B - self.b))
        n2 = o.num * (_U_PLUS_1 ** (A - o.a)) * (_U_MINUS_1 ** (B - o.b))
        return Localized(n1 + n2, A, B)

    __radd__ = __add__

    def __neg__(self):
        return Localized._raw(-self.num, self.a, self.b)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.a == self.b == o.a == o.b == 0:
            return Localized._raw(self.num * o.num, 0, 0)
        # cross-cancel before multiplying; each operand is already normal
        return Localized(self.num * o.num, self.a + o.a, self.b + o.b)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return Localized(1) / (self ** (-n))
        return Localized(self.num ** n, self.a * n, self.b * n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o.num:
            raise NotInvertible("division by zero")
        sign, k, c, rest = unit_split(o.num)
        # self / o = self.num (u+1)^o.a (u-1)^o.b / (sign u^k (u+1)^c (u-1)^d rest)
        num = self.num * (_U_PLUS_1 ** o.a) * (_U_MINUS_1 ** o.b)
        if rest != 1:
            num = num.exact_div(rest)
        num = num.shift(-k)
        if sign < 0:
            num = -num
        return Localized(num, self.a + c[0], self.b + c[1])

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    # -- comparison ---------------------------------------------------------

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b and self.num == o.num

    def __hash__(self):
        return hash((self.num, self.a, self.b))

    # -- text / json --------------------------------------------------------

    def __str__(self):
        if self.is_laurent():
            return str(self.num)
        den = []
        if self.a:
            den.append("(u+1)" if self.a == 1 else f"(u+1)^{{{self.a}}}")
        if self.b:
            den.append("(u-1)" if self.b == 1 else f"(u-1)^{{{self.b}}}")
        return f"({self.num})/{''.join(den)}"

    def __repr__(self):
        return f"Localized({self.num!r}, a={self.a}, b={self.b})"

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "a": self.a, "b": self.b}

    @classmethod
    def from_json(cls, data) -> Localized:
        return cls(LaurentPoly.from_json(data["num"]), int(data["a"]), int(data["b"]))


def unit_split(p: LaurentPoly) -> tuple[int, int, tuple[int, int], LaurentPoly]:
    """Split p = sign * u^k * (u+1)^c * (u-1)^d * rest.

    Returns (sign, k, (c, d), rest) where rest has positive leading
    coefficient, nonzero constant term and no (u+-1) factor.  p is a unit of
    the localized ring exactly when rest == 1.
    """
    if not p:
        raise NotDivisible("zero has no unit decomposition")
    k = p.min_exp
    rest = p.shift(-k)
    c = d = 0
    while True:
        q = rest.deflate(-1)
        if q is None:
            break
        rest, c = q, c + 1
    while True:
        q = rest.deflate(1)
        if q is None:
            break
        rest, d = q, d + 1
    sign = 1
    if rest.coeff(rest.max_exp) < 0:
        rest, sign = -rest, -1
    return sign, k, (c, d), rest


# -- field scalars --------------------------------------------------------------


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class Residue:
    """An element of the prime field F_p."""

    value: int
    p: int

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        object.__setattr__(self, "value", self.value % self.p)

    def _coerce(self, x):
        if isinstance(x, Residue):
            if x.p != self.p:
                raise ValueError("residues modulo different primes")
            return x
        if isinstance(x, int):
            return Residue(x, self.p)
        if isinstance(x, Fraction):
            return Residue(x.numerator, self.p) / Residue(x.denominator, self.p)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else Residue(self.value + o.value, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else Residue(self.value - o.value, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else Residue(o.value - self.value, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else Residue(self.value * o.value, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return Residue(-self.value, self.p)

    def inverse(self) -> Residue:
        if self.value == 0:
            raise NotInvertible(f"0 is not invertible mod {self.p}")
        return Residue(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return Residue(pow(self.value, n, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, Residue):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __bool__(self):
        return self.value != 0

    def __str__(self):
        return f"{self.value} mod {self.p}"


FieldScalar = Union[Fraction, Residue]


def check_parameter(lam) -> FieldScalar:
    """Validate a specialization parameter and return it as a field scalar."""
    if isinstance(lam, Residue):
        if lam.p <= 3:
            raise ForbiddenSpecialization(f"prime fields need p > 3, got p = {lam.p}")
        if lam.value in (0, 1, lam.p - 1):
            raise ForbiddenSpecialization(f"lambda = {lam} is one of 0, 1, -1")
        return lam
    lam = Fraction(lam)
    if lam in (0, 1, -1):
        raise ForbiddenSpecialization(f"lambda = {lam} is one of 0, 1, -1")
    return lam


def specialize(x, lam) -> FieldScalar:
    """Image of x under the ring map sending u to lam.

    lam is an int or Fraction (target Q) or a Residue (target F_p).
    """
    lam = check_parameter(lam)
    x = Localized._coerce(x)
    if x is None:
        raise TypeError("specialize expects a Localized, LaurentPoly or int")
    den = (lam + 1) ** x.a * (lam - 1) ** x.b
    if den == 0:
        raise NotInvertible(f"denominator of {x} vanishes at {lam}")
    return x.num.evaluate(lam) / den


def eval_at_u_inverse_zero(p: LaurentPoly) -> int:
    """Constant term of p in Z[u^-1], i.e. the value at u^-1 = 0."""
    if any(e > 0 for e, _ in p.terms()):
        raise PositiveExponentPresent(f"{p} has positive powers of u")
    return p.coeff(0)


def eval_at_u_zero(p: LaurentPoly) -> int:
    """Constant term of p in Z[u], i.e. the value at u = 0."""
    if not p.is_polynomial():
        raise NegativeExponentPresent(f"{p} has negative powers of u")
    return p.coeff(0)
