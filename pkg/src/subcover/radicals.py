"""Square-root-free comparison of values of the form a + sqrt(b).

Free-space interval endpoints are roots of quadratics, so every reachability
decision reduces to ordering two such values.  Comparing them through
``math.sqrt`` rounds twice; the predicates here decide the order exactly
(up to float arithmetic on the inputs) using only +, -, *, / and comparisons.
"""

from __future__ import annotations

import math

LE = "LE"
GT = "GT"


def cmp_radical_const(a: float, b: float, c: float) -> str:
    """Decide a + sqrt(b) <= c without taking a square root.

    Returns LE or GT.  Requires b >= 0.
    """
    if b < 0:
        raise ValueError("b must be nonnegative")
    if a > c:
        return GT
    return LE if b <= (c - a) * (c - a) else GT


def cmp_radical(a: float, b: float, c: float, d: float) -> str:
    """Decide a + sqrt(b) <= c + sqrt(d) without taking square roots.

    Sign-case analysis on z = (c-a)^2 - b - d.  Returns LE or GT.
    Requires b, d >= 0.
    """
    if b < 0 or d < 0:
        raise ValueError("b and d must be nonnegative")
    if c >= a:
        if d >= b:
            return LE
        z = (c - a) * (c - a) - b - d
        if z >= 0 or z * z <= 4 * b * d:
            return LE
        return GT
    else:
        if d < b:
            return GT
        z = (c - a) * (c - a) - b - d
        if z > 0 or z * z < 4 * b * d:
            return GT
        return LE


def _le_mixed(a: float, b: float, c: float, d: float) -> bool:
    # a - sqrt(b) <= c + sqrt(d), i.e. a - c <= sqrt(b) + sqrt(d)
    w = a - c
    if w <= 0:
        return True
    z = w * w - b - d
    if z <= 0:
        return True
    return z * z <= 4 * b * d


class Radical:
    """Value a + sign*sqrt(b) with exact ordering.

    Interval endpoints keep this form through affine reparametrizations
    (nonnegative scale), so decisions downstream never compare rounded
    square roots against each other.
    """

    __slots__ = ("a", "b", "sign")

    def __init__(self, a: float, b: float, sign: int = 1):
        if b < 0:
            raise ValueError("b must be nonnegative")
        self.a = float(a)
        self.b = float(b)
        self.sign = 1 if sign >= 0 else -1

    @staticmethod
    def exact(x: float) -> "Radical":
        return Radical(x, 0.0, 1)

    def value(self) -> float:
        return self.a + self.sign * math.sqrt(self.b)

    __float__ = value

    def affine(self, scale: float, offset: float) -> "Radical":
        """Return offset + scale * self for scale >= 0 (order preserving)."""
        if scale < 0:
            raise ValueError("scale must be nonnegative")
        return Radical(offset + scale * self.a, scale * scale * self.b, self.sign)

    def reflect(self) -> "Radical":
        """Return 1 - self (used when mirroring a segment parameter)."""
        return Radical(1.0 - self.a, self.b, -self.sign)

    def le(self, other: "Radical") -> bool:
        sa, sb = self.sign, other.sign
        if sa > 0 and sb > 0:
            return cmp_radical(self.a, self.b, other.a, other.b) == LE
        if sa < 0 and sb < 0:
            # a - sqrt(b) <= c - sqrt(d)  <=>  a + sqrt(d) <= c + sqrt(b)
            return cmp_radical(self.a, other.b, other.a, self.b) == LE
        if sa < 0:  # self = a - sqrt(b), other = c + sqrt(d)
            return _le_mixed(self.a, self.b, other.a, other.b)
        # self = a + sqrt(b), other = c - sqrt(d): not (other < self)
        # other < self  <=>  other <= self and not self <= other; decide via
        # the mirrored mixed test: c - sqrt(d) >= a + sqrt(b) fails unless ...
        # a + sqrt(b) <= c - sqrt(d)  <=>  sqrt(b) + sqrt(d) <= c - a
        w = other.a - self.a
        if w < 0:
            return False
        z = w * w - self.b - other.b
        if z < 0:
            return False
        return 4 * self.b * other.b <= z * z

    def lt(self, other: "Radical") -> bool:
        return not other.le(self)

    def eq(self, other: "Radical") -> bool:
        return self.le(other) and other.le(self)

    def __repr__(self) -> str:  # pragma: no cover
        op = "+" if self.sign > 0 else "-"
        return f"Radical({self.a!r} {op} sqrt({self.b!r}))"


ZERO = Radical.exact(0.0)
ONE = Radical.exact(1.0)


def rad_min(*vals: Radical) -> Radical:
    best = vals[0]
    for v in vals[1:]:
        if v.lt(best):
            best = v
    return best


def rad_max(*vals: Radical) -> Radical:
    best = vals[0]
    for v in vals[1:]:
        if best.lt(v):
            best = v
    return best
