"""Exact arithmetic in Q[tau], tau = (1 + sqrt 5) / 2.

Every element is stored as ``(a + b*tau) / den`` with integers ``a``, ``b``
and a positive integer ``den``, reduced so that ``gcd(a, b, den) == 1``.
Elements of Z[tau] are exactly those with ``den == 1``.
"""
from __future__ import annotations

import ast
import math
import operator
from fractions import Fraction
from numbers import Rational

__all__ = [
    "GoldenRat",
    "ZERO",
    "ONE",
    "TAU",
    "SIGMA",
    "tau_pow",
    "galois_conj",
    "parse_golden",
    "as_golden",
]

_SQRT5 = math.sqrt(5.0)


def _sign_a_plus_b_sqrt5(x: int, y: int) -> int:
    """Sign of ``x + y*sqrt(5)`` for integers, without floating point."""
    if y == 0:
        return (x > 0) - (x < 0)
    if x == 0:
        return (y > 0) - (y < 0)
    if (x > 0) == (y > 0):
        return 1 if x > 0 else -1
    # opposite signs: compare x^2 with 5 y^2
    d = x * x - 5 * y * y
    if d == 0:  # pragma: no cover - sqrt 5 is irrational
        return 0
    dominant = x if d > 0 else y
    return 1 if dominant > 0 else -1


class GoldenRat:
    """An exact element ``(a + b*tau) / den`` of Q[tau].

    Instances are immutable and hashable. Integers, ``Fraction`` objects and
    other ``GoldenRat`` values mix freely in arithmetic.
    """

    __slots__ = ("a", "b", "den")

    a: int
    b: int
    den: int

    def __init__(self, a=0, b=0, den=1):
        if isinstance(a, Rational) and not isinstance(a, int) or isinstance(b, Rational) and not isinstance(b, int):
            fa, fb = Fraction(a), Fraction(b)
            common = fa.denominator * fb.denominator // math.gcd(fa.denominator, fb.denominator)
            a = fa.numerator * (common // fa.denominator)
            b = fb.numerator * (common // fb.denominator)
            den = den * common
        a, b, den = int(a), int(b), int(den)
        if den == 0:
            raise ZeroDivisionError("GoldenRat with zero denominator")
        if den < 0:
            a, b, den = -a, -b, -den
        g = math.gcd(math.gcd(a, b), den)
        if g > 1:
            a, b, den = a // g, b // g, den // g
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("GoldenRat is immutable")

    @classmethod
    def _raw(cls, a: int, b: int, den: int) -> "GoldenRat":
        # caller guarantees canonical form
        obj = object.__new__(cls)
        object.__setattr__(obj, "a", a)
        object.__setattr__(obj, "b", b)
        object.__setattr__(obj, "den", den)
        return obj

    # -- conversions ---------------------------------------------------------
    @property
    def rational_part(self) -> Fraction:
        return Fraction(self.a, self.den)

    @property
    def tau_part(self) -> Fraction:
        return Fraction(self.b, self.den)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_rational(self) -> bool:
        return self.b == 0

    def is_integer(self) -> bool:
        return self.b == 0 and self.den == 1

    def in_ztau(self) -> bool:
        """True for elements of the ring Z[tau]."""
        return self.den == 1

    def content(self) -> Fraction:
        """Largest positive rational ``c`` with ``self / c`` in Z[tau] and primitive."""
        return Fraction(math.gcd(self.a, self.b), self.den)

    def norm(self) -> Fraction:
        """Field norm ``x * conj(x)``, a rational number."""
        return Fraction(self.a * self.a + self.a * self.b - self.b * self.b, self.den * self.den)

    def __float__(self) -> float:
        return (self.a + self.b * (1.0 + _SQRT5) / 2.0) / self.den

    def sign(self) -> int:
        # value * 2 * den = 2a + b + b sqrt5
        return _sign_a_plus_b_sqrt5(2 * self.a + self.b, self.b)

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- arithmetic ----------------------------------------------------------
    @staticmethod
    def _coerce(other):
        if isinstance(other, GoldenRat):
            return other
        if isinstance(other, int):
            return GoldenRat._raw(other, 0, 1)
        if isinstance(other, Rational):
            return GoldenRat(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return GoldenRat(self.a + o.a, self.b + o.b, self.den)
        return GoldenRat(self.a * o.den + o.a * self.den, self.b * o.den + o.b * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return GoldenRat._raw(-self.a, -self.b, self.den)

    def __pos__(self):
        return self

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
        a, b, c, d = self.a, self.b, o.a, o.b
        # tau^2 = tau + 1
        return GoldenRat(a * c + b * d, a * d + b * c + b * d, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "GoldenRat":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q[tau]")
        # 1/(a + b tau) = (a + b - b tau) / (a^2 + ab - b^2)
        n = self.a * self.a + self.a * self.b - self.b * self.b
        return GoldenRat((self.a + self.b) * self.den, -self.b * self.den, n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conj(self) -> "GoldenRat":
        """Galois conjugate: tau -> sigma = 1 - tau."""
        return GoldenRat._raw(self.a + self.b, -self.b, self.den)

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- comparison ----------------------------------------------------------
    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b and self.den == o.den

    def __hash__(self):
        if self.b == 0:
            return hash(Fraction(self.a, self.den))
        return hash((self.a, self.b, self.den))

    def _cmp(self, other) -> int:
        o = self._coerce(other)
        if o is None:
            raise TypeError(f"cannot compare GoldenRat with {type(other).__name__}")
        return (self - o).sign()

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    # -- text and JSON -------------------------------------------------------
    def __repr__(self) -> str:
        return f"GoldenRat({self.a}, {self.b}, {self.den})"

    def __str__(self) -> str:
        if self.b == 0:
            body = str(self.a)
        else:
            if self.b == 1:
                tau = "tau"
            elif self.b == -1:
                tau = "-tau"
            else:
                tau = f"{self.b}*tau"
            if self.a == 0:
                body = tau
            else:
                body = f"{self.a}{'+' if self.b > 0 else ''}{tau}"
        if self.den == 1:
            return body
        if self.b == 0 or self.a == 0:
            return f"{body}/{self.den}"
        return f"({body})/{self.den}"

    def to_json(self) -> dict:
        return {"a": self.a, "b": self.b, "den": self.den}

    @classmethod
    def from_json(cls, obj) -> "GoldenRat":
        if isinstance(obj, (int, str)):
            return as_golden(obj)
        value = cls(obj["a"], obj.get("b", 0), obj.get("den", 1))
        if (value.a, value.b, value.den) != (obj["a"], obj.get("b", 0), obj.get("den", 1)):
            raise ValueError(f"GoldenRat JSON not in canonical form: {obj}")
        return value


ZERO = GoldenRat._raw(0, 0, 1)
ONE = GoldenRat._raw(1, 0, 1)
TAU = GoldenRat._raw(0, 1, 1)
SIGMA = GoldenRat._raw(1, -1, 1)


def galois_conj(x) -> GoldenRat:
    return as_golden(x).conj()


def tau_pow(k: int) -> GoldenRat:
    """Exact ``tau**k`` for any integer ``k``; uses ``1/tau = tau - 1``."""
    return TAU**k


def as_golden(x) -> GoldenRat:
    if isinstance(x, GoldenRat):
        return x
    if isinstance(x, str):
        return parse_golden(x)
    if isinstance(x, Rational):
        return GoldenRat(x)
    raise TypeError(f"cannot convert {type(x).__name__} to GoldenRat")


_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
}
_NAMES = {"tau": TAU, "t": TAU, "sigma": SIGMA, "phi": TAU}


def _eval(node):
    if isinstance(node, ast.Expression):
        return _eval(node.body)
    if isinstance(node, ast.Constant) and isinstance(node.value, int):
        return GoldenRat(node.value)
    if isinstance(node, ast.Name) and node.id in _NAMES:
        return _NAMES[node.id]
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval(node.operand)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_eval(node.left), _eval(node.right))
    if isinstance(node, ast.BinOp) and isinstance(node.op, ast.Pow):
        exp = node.right
        sign = 1
        if isinstance(exp, ast.UnaryOp) and isinstance(exp.op, ast.USub):
            sign, exp = -1, exp.operand
        if not (isinstance(exp, ast.Constant) and isinstance(exp.value, int)):
            raise ValueError("only integer exponents are allowed")
        return _eval(node.left) ** (sign * exp.value)
    raise ValueError(f"unsupported syntax in golden expression: {ast.dump(node)}")


def parse_golden(text: str) -> GoldenRat:
    """Parse expressions such as ``"tau"``, ``"(12-4*tau)/5"`` or ``"4/5*(tau-3)"``.

    Integer literals, ``tau``/``sigma``, ``+ - * /`` and integer powers are
    accepted; unicode ``τ``/``σ`` are mapped to their ASCII names.
    """
    text = text.strip().replace("τ", "tau").replace("σ", "sigma").replace("^", "**").replace("−", "-")
    if not text:
        raise ValueError("empty golden expression")
    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse golden expression {text!r}") from exc
    return _eval(tree)


def sqrt_golden(x: GoldenRat) -> GoldenRat | None:
    """Non-negative square root of ``x`` inside Q[tau], or ``None`` if it does not exist."""
    x = as_golden(x)
    if x.sign() < 0:
        return None
    if x.is_zero():
        return ZERO
    xc = x.conj()
    if xc.sign() < 0:
        return None
    big = math.sqrt(float(x))
    small = math.sqrt(float(xc))
    for s in (1, -1):
        # p + q tau = big, p + q sigma = s*small
        q = (big - s * small) / _SQRT5
        p = big - q * (1 + _SQRT5) / 2
        for limit in (10**3, 10**6, 10**9):
            cand = GoldenRat(Fraction(p).limit_denominator(limit), Fraction(q).limit_denominator(limit))
            if cand * cand == x and cand.sign() >= 0:
                return cand
    return None
