"""Small exact number fields Q[x]/(f), used for Hecke eigenvalue data."""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from iwrank import kernels
from iwrank.cyclotomic import _poly_divmod_frac, _poly_mul_frac, _poly_sub

_ZERO = Fraction(0)
_ONE = Fraction(1)

_red_cache: dict[tuple[int, ...], list[list[int]]] = {}


def _red_table(poly: tuple[int, ...]) -> list[list[int]]:
    tab = _red_cache.get(poly)
    if tab is not None:
        return tab
    deg = len(poly) - 1
    if poly[-1] != 1:
        raise ValueError("defining polynomial must be monic")
    tab = []
    if deg >= 1:
        row = [-c for c in poly[:deg]]
        tab.append(row)
        for _ in range(deg + 1, 2 * deg - 1):
            prev = tab[-1]
            over = prev[deg - 1]
            row = [0] + prev[: deg - 1]
            if over:
                first = tab[0]
                row = [row[t] + over * first[t] for t in range(deg)]
            tab.append(row)
    _red_cache[poly] = tab
    return tab


class NumberField:
    """Q[x]/(poly), poly monic with integer coefficients, low degree first."""

    def __init__(self, poly):
        self.poly = tuple(int(c) for c in poly)
        if len(self.poly) < 2:
            raise ValueError("defining polynomial must have degree >= 1")
        self.degree = len(self.poly) - 1
        self.red = _red_table(self.poly)

    def element(self, coeffs) -> "NFElement":
        return NFElement(self, coeffs)

    def zero(self) -> "NFElement":
        return NFElement(self, [])

    def one(self) -> "NFElement":
        return NFElement(self, [_ONE])

    def gen(self) -> "NFElement":
        if self.degree == 1:
            return NFElement(self, [Fraction(-self.poly[0])])
        return NFElement(self, [_ZERO, _ONE])

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.poly == other.poly

    def __repr__(self):
        return f"NumberField({list(self.poly)})"


class NFElement:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: NumberField, coeffs):
        cs = [c if isinstance(c, Fraction) else Fraction(c) for c in coeffs]
        if len(cs) > field.degree:
            raise ValueError("too many coefficients")
        cs += [_ZERO] * (field.degree - len(cs))
        self.field = field
        self.coeffs = tuple(cs)

    def _coerce(self, other):
        if isinstance(other, NFElement):
            if other.field != self.field:
                raise ValueError("mixed number fields")
            return other
        if isinstance(other, (int, Fraction)):
            return NFElement(self.field, [Fraction(other)])
        return None

    def __add__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return NFElement(self.field, [x + y for x, y in zip(self.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return NFElement(self.field, [-c for c in self.coeffs])

    def __sub__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return NFElement(self.field, [x - y for x, y in zip(self.coeffs, b.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            f = Fraction(other)
            return NFElement(self.field, [c * f for c in self.coeffs])
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        den = 1
        for c in self.coeffs + b.coeffs:
            den = den // gcd(den, c.denominator) * c.denominator
        av = [int(c * den) for c in self.coeffs]
        bv = [int(c * den) for c in b.coeffs]
        prod = kernels.convolve_reduce(av, bv, self.field.red, self.field.degree)
        d2 = den * den
        return NFElement(self.field, [Fraction(v, d2) for v in prod])

    __rmul__ = __mul__

    def inverse(self) -> "NFElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        r0 = [Fraction(c) for c in self.field.poly]
        r1 = list(self.coeffs)
        while len(r1) > 1 and r1[-1] == 0:
            r1.pop()
        s0, s1 = [_ZERO], [_ONE]
        while True:
            while len(r1) > 1 and r1[-1] == 0:
                r1.pop()
            if len(r1) == 1:
                break
            q, r = _poly_divmod_frac(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul_frac(q, s1))
        c = r1[0]
        if c == 0:
            raise ZeroDivisionError("not invertible (reducible defining polynomial?)")
        inv = [x / c for x in s1][: self.field.degree]
        return NFElement(self.field, inv)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            f = Fraction(other)
            return NFElement(self.field, [c / f for c in self.coeffs])
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return self * b.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = self.field.one()
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not rational")
        return self.coeffs[0]

    def reduce_mod(self, seed: int, p: int) -> int:
        """Image in F_p under x -> seed; denominators must be p-units."""
        acc = 0
        s = 1
        for c in self.coeffs:
            if c.denominator % p == 0:
                raise ValueError("denominator not a p-unit")
            acc = (acc + c.numerator * pow(c.denominator, -1, p) * s) % p
            s = s * seed % p
        return acc

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if not isinstance(other, NFElement):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __repr__(self):
        return f"NF{list(self.coeffs)}"
