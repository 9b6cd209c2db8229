"""Exact Laurent polynomials in v = q^{1/2} with rational coefficients.

QLaurent is the universal value type for volumes, epsilon-factor absolute
values and formal degrees: a finitely supported map exponent -> Fraction,
kept in canonical form (no zero coefficients stored).
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational


class QLaurent:
    __slots__ = ("_coeffs",)

    def __init__(self, coeffs=None):
        clean = {}
        if coeffs:
            for e, c in coeffs.items():
                c = Fraction(c)
                if c != 0:
                    clean[int(e)] = clean.get(int(e), Fraction(0)) + c
        self._coeffs = {e: c for e, c in clean.items() if c != 0}

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "QLaurent":
        return cls()

    @classmethod
    def one(cls) -> "QLaurent":
        return cls({0: 1})

    @classmethod
    def monomial(cls, exponent: int, coeff=1) -> "QLaurent":
        return cls({exponent: coeff})

    @classmethod
    def v(cls) -> "QLaurent":
        return cls({1: 1})

    @classmethod
    def q_power(cls, exponent: Fraction | int) -> "QLaurent":
        """q^e as a v-monomial; e may be a half-integer."""
        ve = 2 * Fraction(exponent)
        if ve.denominator != 1:
            raise ValueError(f"q^{exponent} is not a v-monomial with integer exponent")
        return cls({int(ve): 1})

    # -- structure ---------------------------------------------------------

    @property
    def coeffs(self) -> dict[int, Fraction]:
        return dict(self._coeffs)

    def is_zero(self) -> bool:
        return not self._coeffs

    def is_monomial(self) -> bool:
        return len(self._coeffs) == 1

    def monomial_parts(self) -> tuple[int, Fraction]:
        if not self.is_monomial():
            raise ValueError(f"not a monomial: {self}")
        ((e, c),) = self._coeffs.items()
        return e, c

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, QLaurent):
            return self._coeffs == other._coeffs
        if isinstance(other, (int, Rational)):
            return self == QLaurent({0: other})
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._coeffs.items()))

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other) -> "QLaurent":
        other = _coerce(other)
        out = dict(self._coeffs)
        for e, c in other._coeffs.items():
            out[e] = out.get(e, Fraction(0)) + c
        return QLaurent(out)

    __radd__ = __add__

    def __neg__(self) -> "QLaurent":
        return QLaurent({e: -c for e, c in self._coeffs.items()})

    def __sub__(self, other) -> "QLaurent":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "QLaurent":
        return _coerce(other) + (-self)

    def __mul__(self, other) -> "QLaurent":
        other = _coerce(other)
        out: dict[int, Fraction] = {}
        for e1, c1 in self._coeffs.items():
            for e2, c2 in other._coeffs.items():
                e = e1 + e2
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return QLaurent(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "QLaurent":
        if k < 0:
            e, c = self.monomial_parts()
            return QLaurent.monomial(e * k, Fraction(1, 1) / c ** (-k))
        out = QLaurent.one()
        for _ in range(k):
            out = out * self
        return out

    def monomial_inverse(self) -> "QLaurent":
        e, c = self.monomial_parts()
        return QLaurent.monomial(-e, Fraction(1) / c)

    def evaluate_at_one(self) -> Fraction:
        """Specialization v -> 1."""
        return sum(self._coeffs.values(), Fraction(0))

    # -- rendering ----------------------------------------------------------

    def to_sparse(self) -> dict[str, str]:
        """Canonical {"exponent": coefficient} dict for reports."""
        return {str(e): str(self._coeffs[e]) for e in sorted(self._coeffs)}

    def __str__(self) -> str:
        if not self._coeffs:
            return "0"
        parts = []
        for e in sorted(self._coeffs, reverse=True):
            c = self._coeffs[e]
            if e == 0:
                parts.append(str(c))
            else:
                ve = "v" if e == 1 else f"v^{e}"
                parts.append(ve if c == 1 else f"{c}*{ve}")
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


def _coerce(x) -> QLaurent:
    if isinstance(x, QLaurent):
        return x
    if isinstance(x, (int, Rational)):
        return QLaurent({0: x})
    raise TypeError(f"cannot coerce {type(x).__name__} into QLaurent")
