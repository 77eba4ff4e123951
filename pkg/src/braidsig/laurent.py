"""Exact Laurent polynomials in ``t`` over the integers, plus a fraction-free determinant."""
from __future__ import annotations

import re
from typing import Iterable, Sequence


class LaurentPoly:
    """``t**low * (c[0] + c[1] t + ...)`` with Python-int coefficients.

    Instances are immutable and kept trimmed: ``coeffs`` has nonzero first and
    last entries, and the zero polynomial is ``coeffs == ()``.
    """

    __slots__ = ("low", "coeffs")

    def __init__(self, coeffs: Iterable[int] = (), low: int = 0):
        c = [int(x) for x in coeffs]
        i = 0
        while i < len(c) and c[i] == 0:
            i += 1
        j = len(c)
        while j > i and c[j - 1] == 0:
            j -= 1
        object.__setattr__(self, "coeffs", tuple(c[i:j]))
        object.__setattr__(self, "low", low + i if j > i else 0)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly is immutable")

    @classmethod
    def monomial(cls, coeff: int, exp: int) -> "LaurentPoly":
        return cls((coeff,), exp)

    @classmethod
    def from_dict(cls, terms: dict[int, int]) -> "LaurentPoly":
        if not terms:
            return ZERO
        lo, hi = min(terms), max(terms)
        return cls([terms.get(e, 0) for e in range(lo, hi + 1)], lo)

    @staticmethod
    def coerce(x) -> "LaurentPoly":
        if isinstance(x, LaurentPoly):
            return x
        if isinstance(x, int):
            return LaurentPoly((x,))
        raise TypeError(f"cannot treat {type(x).__name__} as a Laurent polynomial")

    # -- structure --------------------------------------------------------

    @property
    def high(self) -> int:
        return self.low + len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def terms(self) -> dict[int, int]:
        return {self.low + i: c for i, c in enumerate(self.coeffs) if c}

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPoly((other,))
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.coeffs == other.coeffs and self.low == other.low

    def __hash__(self) -> int:
        return hash((self.low, self.coeffs))

    # -- arithmetic -------------------------------------------------------

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly([-c for c in self.coeffs], self.low)

    def __add__(self, other) -> "LaurentPoly":
        other = LaurentPoly.coerce(other)
        if not other.coeffs:
            return self
        if not self.coeffs:
            return other
        lo = min(self.low, other.low)
        hi = max(self.high, other.high)
        out = [0] * (hi - lo + 1)
        for i, c in enumerate(self.coeffs, self.low - lo):
            out[i] += c
        for i, c in enumerate(other.coeffs, other.low - lo):
            out[i] += c
        return LaurentPoly(out, lo)

    __radd__ = __add__

    def __sub__(self, other) -> "LaurentPoly":
        return self + (-LaurentPoly.coerce(other))

    def __rsub__(self, other) -> "LaurentPoly":
        return LaurentPoly.coerce(other) + (-self)

    def __mul__(self, other) -> "LaurentPoly":
        other = LaurentPoly.coerce(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return ZERO
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return LaurentPoly(out, self.low + other.low)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentPoly":
        if k < 0:
            if len(self.coeffs) == 1 and abs(self.coeffs[0]) == 1:
                return LaurentPoly(self.coeffs, -self.low) ** (-k)
            raise ValueError("only units have negative powers")
        out, base = ONE, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def divmod_exact(self, other: "LaurentPoly") -> "LaurentPoly":
        """The Laurent quotient ``self / other``; raises ArithmeticError if it is not exact."""
        other = LaurentPoly.coerce(other)
        if not other.coeffs:
            raise ZeroDivisionError("division by the zero polynomial")
        if not self.coeffs:
            return ZERO
        num = list(self.coeffs)
        den = other.coeffs
        dl = len(den)
        if len(num) < dl:
            raise ArithmeticError(f"{self} is not divisible by {other}")
        lead = den[-1]
        q = [0] * (len(num) - dl + 1)
        for k in range(len(q) - 1, -1, -1):
            c = num[k + dl - 1]
            if c:
                qk, r = divmod(c, lead)
                if r:
                    raise ArithmeticError(f"{self} is not divisible by {other}")
                q[k] = qk
                for j in range(dl):
                    num[k + j] -= qk * den[j]
        if any(num):
            raise ArithmeticError(f"{self} is not divisible by {other}")
        return LaurentPoly(q, self.low - other.low)

    def __truediv__(self, other) -> "LaurentPoly":
        return self.divmod_exact(LaurentPoly.coerce(other))

    def evaluate(self, x):
        if not self.coeffs:
            return 0 * x
        acc = 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc * x**self.low

    def normalized(self) -> "LaurentPoly":
        """Representative up to multiplication by ``+-t^k``: lowest exponent 0, positive lowest coefficient."""
        if not self.coeffs:
            return self
        sign = -1 if self.coeffs[0] < 0 else 1
        return LaurentPoly([sign * c for c in self.coeffs], 0)

    def equivalent(self, other: "LaurentPoly") -> bool:
        return self.normalized() == LaurentPoly.coerce(other).normalized()

    def conjugate(self) -> "LaurentPoly":
        """``t -> t^{-1}``."""
        return LaurentPoly(self.coeffs[::-1], -self.high) if self.coeffs else self

    # -- text -------------------------------------------------------------

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for e, c in sorted(self.terms().items()):
            parts.append(f"{c}*t^{e}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"LaurentPoly({str(self)!r})"

    @classmethod
    def parse(cls, text: str) -> "LaurentPoly":
        """Inverse of :meth:`__str__`; also accepts ``-`` separators and bare constants."""
        s = re.sub(r"(?<!\^)-", "+-", text.replace(" ", "").replace("+-", "-"))
        if s in ("", "0"):
            return ZERO
        terms: dict[int, int] = {}
        for part in filter(None, s.split("+")):
            m = _TERM.fullmatch(part)
            if not m or (not m.group(2) and m.group(3) is None):
                raise ValueError(f"cannot parse Laurent polynomial {text!r}")
            c = int(m.group(2)) if m.group(2) else 1
            if m.group(1):
                c = -c
            if m.group(3) is None:
                e = 0
            else:
                e = int(m.group(4)) if m.group(4) is not None else 1
            terms[e] = terms.get(e, 0) + c
        return cls.from_dict(terms)


_TERM = re.compile(r"(-?)(\d*)(\*?t(?:\^(-?\d+))?)?")

ZERO = LaurentPoly(())
ONE = LaurentPoly((1,))
T = LaurentPoly((1,), 1)


def poly_matrix(rows: Sequence[Sequence]) -> list[list[LaurentPoly]]:
    return [[LaurentPoly.coerce(x) for x in row] for row in rows]


def det(matrix: Sequence[Sequence[LaurentPoly]]) -> LaurentPoly:
    """Bareiss fraction-free elimination; every division is exact in Z[t, t^-1]."""
    m = [list(map(LaurentPoly.coerce, row)) for row in matrix]
    n = len(m)
    if n == 0:
        return ONE
    if any(len(row) != n for row in m):
        raise ValueError("determinant of a non-square matrix")
    sign = 1
    prev = ONE
    for k in range(n - 1):
        if not m[k][k]:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return ZERO
        pivot = m[k][k]
        rk = m[k]
        for i in range(k + 1, n):
            ri = m[i]
            a = ri[k]
            for j in range(k + 1, n):
                val = ri[j] * pivot
                if a and rk[j]:
                    val = val - a * rk[j]
                ri[j] = val.divmod_exact(prev) if prev != ONE else val
        prev = pivot
    out = m[n - 1][n - 1]
    return -out if sign < 0 else out
