"""Exact scalars: rationals and rational functions in one formal parameter ε.

``Fraction`` from the standard library plays the role of the rationals.
:class:`EpsPoly` is a polynomial in ε with rational coefficients and
:class:`RatFunc` a reduced quotient of two of them.  Equal rational functions
always have identical representations, so ``==`` is an exact zero test.

Internally a :class:`RatFunc` keeps integer coefficient tuples (lowest degree
first) with the numerator and denominator coprime, jointly content-free and
the denominator's leading coefficient positive.  The public ``num``/``den``
accessors rescale this to a monic denominator.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import reduce
from numbers import Rational
from typing import Iterable, Mapping, Union

from .errors import DivisionByZero, PoleAtEpsilon, ZeroDenominator

__all__ = [
    "EpsPoly",
    "RatFunc",
    "EPS",
    "ONE",
    "ZERO",
    "as_ratfunc",
    "parse_rat",
    "ratfunc_normalize",
    "ratfunc_arith",
    "ratfunc_eval",
]

Scalar = Union["RatFunc", int, Fraction]

# ---------------------------------------------------------------------------
# integer polynomial kernel (tuples, lowest degree first, no trailing zeros)


def _trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _padd(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, x in enumerate(b):
        out[i] += x
    return _trim(out)


def _psub(a, b):
    n = max(len(a), len(b))
    out = [0] * n
    for i, x in enumerate(a):
        out[i] = x
    for i, x in enumerate(b):
        out[i] -= x
    return _trim(out)


def _pmul(a, b):
    if not a or not b:
        return ()
    if len(a) == 1:
        k = a[0]
        return tuple(k * x for x in b)
    if len(b) == 1:
        k = b[0]
        return tuple(k * x for x in a)
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return tuple(out)


def _content(a):
    return reduce(math.gcd, a, 0)


def _primitive(a):
    if not a:
        return a
    c = _content(a)
    if a[-1] < 0:
        c = -c
    if c == 1:
        return a
    return tuple(x // c for x in a)


def _prem(a, b):
    """Pseudo-remainder of ``a`` by ``b`` over the integers."""
    lb = b[-1]
    db = len(b) - 1
    r = list(a)
    while len(r) - 1 >= db and r:
        lr = r[-1]
        shift = len(r) - 1 - db
        r = [lb * x for x in r]
        for i, y in enumerate(b):
            r[i + shift] -= lr * y
        while r and r[-1] == 0:
            r.pop()
    return tuple(r)


def _pgcd(a, b):
    """Primitive gcd with positive leading coefficient."""
    if not a:
        return _primitive(b) if b else (1,)
    if not b:
        return _primitive(a)
    if len(a) == 1 or len(b) == 1:
        return (1,)
    if len(a) < len(b):
        a, b = b, a
    a, b = _primitive(a), _primitive(b)
    while b:
        if len(b) == 1:
            return (1,)
        a, b = b, _primitive(_prem(a, b))
    return _primitive(a)


def _pdiv_exact(a, b):
    """Quotient of ``a`` by ``b``; ``b`` must divide ``a`` with integer quotient."""
    if len(b) == 1:
        k = b[0]
        return tuple(x // k for x in a)
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    q = [0] * (len(a) - db)
    for k in range(len(q) - 1, -1, -1):
        c = r[k + db] // lb
        q[k] = c
        if c:
            for i, y in enumerate(b):
                r[k + i] -= c * y
    return tuple(q)


def _from_fractions(coeffs):
    """Scale a rational coefficient tuple to integers; return (ints, scale)."""
    den = 1
    for c in coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    return tuple(int(c * den) for c in coeffs), den


# ---------------------------------------------------------------------------


class EpsPoly:
    """Polynomial in ε with rational coefficients.

    Stored densely as a tuple of ``Fraction`` (lowest degree first); the zero
    polynomial is the empty tuple and has degree ``-inf``.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Rational] | Mapping[int, Rational] = ()):
        if isinstance(coeffs, Mapping):
            if any(k < 0 for k in coeffs):
                raise ValueError("negative degree in EpsPoly")
            n = max(coeffs, default=-1) + 1
            dense = [Fraction(0)] * n
            for k, v in coeffs.items():
                dense[k] = Fraction(v)
            coeffs = dense
        self.coeffs = _trim(Fraction(c) for c in coeffs)

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else -math.inf

    def items(self):
        return [(k, c) for k, c in enumerate(self.coeffs) if c != 0]

    def is_zero(self):
        return not self.coeffs

    def __call__(self, x: Rational) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        if isinstance(other, EpsPoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(("EpsPoly", self.coeffs))

    def __repr__(self):
        return f"EpsPoly({dict(self.items())!r})"

    def __str__(self):
        return _poly_str(self.coeffs)


def _fmt_coeff(c):
    return str(c)


def _poly_str(coeffs, var="ε"):
    terms = []
    for k, c in enumerate(coeffs):
        if c == 0:
            continue
        mag = abs(c)
        if k == 0:
            body = _fmt_coeff(mag)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            body = mono if mag == 1 else f"{_fmt_coeff(mag)}{mono}"
        terms.append((c < 0, body))
    if not terms:
        return "0"
    neg, body = terms[0]
    out = ("-" if neg else "") + body
    for neg, body in terms[1:]:
        out += (" - " if neg else " + ") + body
    return out


class RatFunc:
    """Element of ℚ(ε) in canonical reduced form.  Immutable."""

    __slots__ = ("_n", "_d", "_hash")

    def __init__(self, num: Scalar | EpsPoly = 0, den: Scalar | EpsPoly = 1):
        # Public constructor accepts scalars or EpsPoly; it always normalizes.
        if isinstance(num, RatFunc) or isinstance(den, RatFunc):
            value = as_ratfunc(num) / as_ratfunc(den)
            self._n, self._d = value._n, value._d
        else:
            n, sn = _int_coeffs(num)
            d, sd = _int_coeffs(den)
            if not d:
                raise ZeroDenominator("rational function with zero denominator")
            self._n, self._d = _canon(_pmul(n, (sd,)), _pmul(d, (sn,)))
        self._hash = None

    @classmethod
    def _raw(cls, n, d):
        obj = object.__new__(cls)
        obj._n = n
        obj._d = d
        obj._hash = None
        return obj

    @classmethod
    def eps(cls) -> "RatFunc":
        return cls._raw((0, 1), (1,))

    @classmethod
    def const(cls, value: Rational) -> "RatFunc":
        value = Fraction(value)
        if value == 0:
            return cls._raw((), (1,))
        return cls._raw((value.numerator,), (value.denominator,))

    # -- accessors ---------------------------------------------------------
    @property
    def num(self) -> EpsPoly:
        lc = self._d[-1]
        return EpsPoly(Fraction(x, lc) for x in self._n)

    @property
    def den(self) -> EpsPoly:
        lc = self._d[-1]
        return EpsPoly(Fraction(x, lc) for x in self._d)

    def integer_form(self):
        """(numerator, denominator) integer coefficient tuples, content-free."""
        return self._n, self._d

    def is_zero(self) -> bool:
        return not self._n

    def is_constant(self) -> bool:
        return len(self._n) <= 1 and len(self._d) == 1

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} depends on ε")
        if not self._n:
            return Fraction(0)
        return Fraction(self._n[0], self._d[0])

    def __bool__(self):
        return bool(self._n)

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return _add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return _add(self, -other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return _add(other, -self)

    def __neg__(self):
        if not self._n:
            return self
        return RatFunc._raw(tuple(-x for x in self._n), self._d)

    def __pos__(self):
        return self

    def __mul__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return _mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return _mul(self, other.inverse())

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return _mul(other, self.inverse())

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def inverse(self) -> "RatFunc":
        if not self._n:
            raise DivisionByZero("division by the zero rational function")
        n, d = self._d, self._n
        if d[-1] < 0:
            n = tuple(-x for x in n)
            d = tuple(-x for x in d)
        return RatFunc._raw(n, d)

    # -- comparison / hashing ---------------------------------------------
    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self._n == other._n and self._d == other._d
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self.constant_value())
            else:
                self._hash = hash((self._n, self._d))
        return self._hash

    # -- evaluation and I/O ------------------------------------------------
    def __call__(self, eps_value: Rational) -> Fraction:
        return ratfunc_eval(self, eps_value)

    def __repr__(self):
        return f"RatFunc({str(self)!r})"

    def __str__(self):
        num = _poly_str(self._n)
        if self._d == (1,):
            return num
        den = _poly_str(self._d)
        if len([c for c in self._n if c]) > 1:
            num = f"({num})"
        if len([c for c in self._d if c]) > 1:
            den = f"({den})"
        return f"{num}/{den}"

    def to_json(self):
        """``{"num": [[deg, "p/q"], ...], "den": [...]}`` with content-free integers."""
        return {
            "num": [[k, str(c)] for k, c in enumerate(self._n) if c],
            "den": [[k, str(c)] for k, c in enumerate(self._d) if c],
        }

    @classmethod
    def from_json(cls, data) -> "RatFunc":
        if isinstance(data, (int, str)):
            return cls.const(parse_rat(data))
        num = EpsPoly({int(k): parse_rat(v) for k, v in data.get("num", [])})
        den = EpsPoly({int(k): parse_rat(v) for k, v in data.get("den", [[0, "1"]])})
        return ratfunc_normalize(num, den)


def _int_coeffs(x):
    """Integer coefficient tuple and common denominator of a scalar or EpsPoly."""
    if isinstance(x, EpsPoly):
        return _from_fractions(x.coeffs)
    if isinstance(x, (int, Fraction)):
        x = Fraction(x)
        return _trim((x.numerator,)), x.denominator
    raise TypeError(f"cannot interpret {x!r} as a polynomial in ε")


def _canon(n, d):
    """Reduce integer polynomials ``n/d`` to canonical form."""
    if not d:
        raise ZeroDenominator("rational function with zero denominator")
    if not n:
        return (), (1,)
    if len(d) > 1 and len(n) > 1:
        g = _pgcd(n, d)
        if g != (1,):
            n = _pdiv_exact(n, g)
            d = _pdiv_exact(d, g)
    return _normalize_content(n, d)


def _normalize_content(n, d):
    c = math.gcd(_content(n), _content(d))
    if d[-1] < 0:
        c = -c
    if c != 1:
        n = tuple(x // c for x in n)
        d = tuple(x // c for x in d)
    return n, d


def _add(a: RatFunc, b: RatFunc) -> RatFunc:
    if not a._n:
        return b
    if not b._n:
        return a
    ad, bd = a._d, b._d
    if ad == bd:
        n = _padd(a._n, b._n)
        if not n:
            return ZERO
        if len(ad) == 1:
            return RatFunc._raw(*_normalize_content(n, ad))
        return RatFunc._raw(*_canon(n, ad))
    if len(ad) == 1 or len(bd) == 1:
        # one denominator constant: coprimality of the result is automatic
        n = _padd(_pmul(a._n, bd), _pmul(b._n, ad))
        if not n:
            return ZERO
        return RatFunc._raw(*_normalize_content(n, _pmul(ad, bd)))
    g = _pgcd(ad, bd)
    if g == (1,):
        n = _padd(_pmul(a._n, bd), _pmul(b._n, ad))
        if not n:
            return ZERO
        return RatFunc._raw(*_normalize_content(n, _pmul(ad, bd)))
    ad_g = _pdiv_exact(ad, g)
    bd_g = _pdiv_exact(bd, g)
    n = _padd(_pmul(a._n, bd_g), _pmul(b._n, ad_g))
    if not n:
        return ZERO
    return RatFunc._raw(*_canon(n, _pmul(ad_g, bd)))


def _mul(a: RatFunc, b: RatFunc) -> RatFunc:
    if not a._n or not b._n:
        return ZERO
    an, ad, bn, bd = a._n, a._d, b._n, b._d
    if len(bd) > 1 and len(an) > 1:
        g = _pgcd(an, bd)
        if g != (1,):
            an, bd = _pdiv_exact(an, g), _pdiv_exact(bd, g)
    if len(ad) > 1 and len(bn) > 1:
        g = _pgcd(bn, ad)
        if g != (1,):
            bn, ad = _pdiv_exact(bn, g), _pdiv_exact(ad, g)
    return RatFunc._raw(*_normalize_content(_pmul(an, bn), _pmul(ad, bd)))


def _coerce(x):
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, (int, Fraction)):
        return RatFunc.const(x)
    return None


def as_ratfunc(x) -> RatFunc:
    """Coerce an int, Fraction, rational string or RatFunc to RatFunc."""
    if isinstance(x, str):
        return RatFunc.const(parse_rat(x))
    if isinstance(x, EpsPoly):
        return ratfunc_normalize(x, EpsPoly([1]))
    r = _coerce(x)
    if r is None:
        raise TypeError(f"cannot convert {x!r} to RatFunc")
    return r


_RAT_RE = re.compile(r"^\s*[+-]?\d+(\s*/\s*[+-]?\d+)?\s*$")


def parse_rat(text) -> Fraction:
    """Parse ``"p/q"`` (or an int) into a Fraction."""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if not _RAT_RE.match(str(text)):
        raise ValueError(f"not a rational number: {text!r}")
    return Fraction(str(text).replace(" ", ""))


ZERO = RatFunc._raw((), (1,))
ONE = RatFunc._raw((1,), (1,))
EPS = RatFunc.eps()


def ratfunc_normalize(num: EpsPoly, den: EpsPoly) -> RatFunc:
    """Canonical form of ``num/den``."""
    if den.is_zero():
        raise ZeroDenominator("denominator is the zero polynomial")
    return RatFunc(num, den)


def ratfunc_arith(kind: str, a, b) -> RatFunc:
    a, b = as_ratfunc(a), as_ratfunc(b)
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    if kind == "div":
        return a / b
    raise ValueError(f"unknown arithmetic kind {kind!r}")


def _ieval(coeffs, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def ratfunc_eval(a, eps_value: Rational) -> Fraction:
    """Exact value of ``a`` at ε = ``eps_value``; raises PoleAtEpsilon at poles."""
    a = as_ratfunc(a)
    x = Fraction(eps_value)
    d = _ieval(a._d, x)
    if d == 0:
        raise PoleAtEpsilon(f"{a} has a pole at ε = {x}")
    return _ieval(a._n, x) / d
