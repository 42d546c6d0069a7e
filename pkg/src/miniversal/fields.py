"""Complete valued fields: complex numbers, truncated p-adics, truncated Laurent series.

Each backend is a :class:`Field` object that knows how to embed rationals,
measure absolute values and (de)serialize elements.  Elements themselves are
plain Python objects with arithmetic operators:

* ``ComplexField`` uses builtin ``complex``;
* ``PadicField`` uses :class:`PadicNumber`;
* ``LaurentField`` uses :class:`LaurentSeries`.

The truncated backends keep at most ``precision`` relative digits (terms) and
track how many of them are actually known.  A sum whose known digits all
cancel becomes a zero that remembers its absolute precision; such zeros count
as zero everywhere, but inverting one raises :class:`PrecisionExhausted`.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

import numpy as np

from .errors import DivisionByZero, PrecisionExhausted

DEFAULT_PRECISION = 64


def _as_fraction(q) -> Fraction:
    if isinstance(q, Fraction):
        return q
    if isinstance(q, (int, np.integer)):
        return Fraction(int(q))
    if isinstance(q, str):
        return Fraction(q.strip())
    if isinstance(q, Rational):
        return Fraction(q.numerator, q.denominator)
    raise TypeError(f"cannot read {q!r} as an exact rational")


def _valuation_int(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


class Field:
    """Interface shared by the three backends."""

    name = "field"
    exact = True
    dtype = object
    archimedean = False
    default_rank_tol = 0.0

    def zero(self):
        raise NotImplementedError

    def one(self):
        return self.embed(1)

    def embed(self, q):
        raise NotImplementedError

    def abs(self, x):
        return abs(x)

    def is_zero(self, x) -> bool:
        return x == 0

    def to_json(self, x):
        raise NotImplementedError

    def from_json(self, obj):
        raise NotImplementedError

    def config(self) -> dict:
        raise NotImplementedError

    def ulp(self) -> float:
        """Smallest absolute value still resolved relative to a unit."""
        return 0.0


# ---------------------------------------------------------------------------
# complex


class ComplexField(Field):
    name = "complex"
    exact = False
    dtype = np.complex128
    archimedean = True
    default_rank_tol = 1e-9

    def zero(self):
        return 0j

    def one(self):
        return 1 + 0j

    def embed(self, q):
        if isinstance(q, (complex, float)):
            return complex(q)
        if isinstance(q, (list, tuple)) and len(q) == 2:
            return complex(float(q[0]), float(q[1]))
        return complex(float(_as_fraction(q)))

    def abs(self, x):
        return abs(complex(x))

    def is_zero(self, x):
        return x == 0

    def to_json(self, x):
        x = complex(x)
        return [x.real, x.imag]

    def from_json(self, obj):
        if isinstance(obj, (list, tuple)):
            return complex(float(obj[0]), float(obj[1]))
        if isinstance(obj, (int, float)):
            return complex(obj)
        return self.embed(obj)

    def config(self):
        return {"kind": "complex"}

    def ulp(self):
        return np.finfo(float).eps

    def __eq__(self, other):
        return isinstance(other, ComplexField)

    def __hash__(self):
        return hash("complex")

    def __repr__(self):
        return "ComplexField()"


# ---------------------------------------------------------------------------
# p-adic


class PadicField(Field):
    """The p-adic numbers truncated to ``precision`` relative digits."""

    name = "padic"

    def __init__(self, p: int, precision: int = DEFAULT_PRECISION):
        if p < 2 or any(p % d == 0 for d in range(2, math.isqrt(p) + 1)):
            raise ValueError(f"p = {p} is not a prime")
        if precision < 1:
            raise ValueError("precision must be positive")
        self.p = p
        self.precision = precision
        self.magnitude_base = float(p)
        self._powers = [1]

    def pow(self, k: int) -> int:
        pw = self._powers
        while len(pw) <= k:
            pw.append(pw[-1] * self.p)
        return pw[k]

    # constructors -----------------------------------------------------------

    def zero(self, absprec=None):
        return PadicNumber(self, absprec, 0, 0)

    def _make(self, val, unit, prec):
        if prec < 1:
            raise PrecisionExhausted(f"no significant {self.p}-adic digits left")
        prec = min(prec, self.precision)
        return PadicNumber(self, val, unit % self.pow(prec), prec)

    def embed(self, q):
        if isinstance(q, PadicNumber):
            return q
        q = _as_fraction(q)
        if q == 0:
            return self.zero()
        p = self.p
        a = _valuation_int(q.numerator, p)
        b = _valuation_int(q.denominator, p)
        num = q.numerator // self.pow(a)
        den = q.denominator // self.pow(b)
        mod = self.pow(self.precision)
        return PadicNumber(self, a - b, num * pow(den, -1, mod) % mod, self.precision)

    def from_digits(self, z: int, digits, precision=None):
        digits = list(digits)
        prec = len(digits) if precision is None else precision
        unit = sum(int(d) * self.pow(i) for i, d in enumerate(digits))
        if unit == 0:
            return self.zero(z + prec)
        shift = _valuation_int(unit, self.p)
        return self._make(z + shift, unit // self.pow(shift), prec - shift)

    # interface --------------------------------------------------------------

    def abs(self, x):
        return x.absolute()

    def is_zero(self, x):
        if isinstance(x, PadicNumber):
            return x.unit == 0
        return x == 0

    def to_json(self, x):
        x = self.embed(x)
        if x.is_zero():
            return "0"
        q = x.to_rational()
        if q is not None:
            return str(q)
        return {"z": x.val, "digits": x.digits(), "precision": x.prec}

    def from_json(self, obj):
        if isinstance(obj, dict):
            return self.from_digits(int(obj["z"]), obj["digits"], obj.get("precision"))
        if isinstance(obj, float):
            raise TypeError("p-adic literals must be exact rationals, not floats")
        return self.embed(obj)

    def config(self):
        return {"kind": "padic", "p": self.p, "precision": self.precision}

    def ulp(self):
        return float(self.p) ** (-self.precision)

    def __eq__(self, other):
        return isinstance(other, PadicField) and (other.p, other.precision) == (
            self.p,
            self.precision,
        )

    def __hash__(self):
        return hash(("padic", self.p, self.precision))

    def __repr__(self):
        return f"PadicField(p={self.p}, precision={self.precision})"


class PadicNumber:
    """``p**val * unit`` with ``unit`` known modulo ``p**prec``.

    Zero is ``unit == 0``; its ``val`` then holds the absolute precision of
    the zero (``None`` for an exact zero).
    """

    __slots__ = ("K", "val", "unit", "prec")

    def __init__(self, K: PadicField, val, unit: int, prec: int):
        self.K = K
        self.val = val
        self.unit = unit
        self.prec = prec

    # helpers ----------------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, PadicNumber):
            if other.K.p != self.K.p:
                raise TypeError("mixing p-adic numbers for different primes")
            return other
        if isinstance(other, (int, Fraction, np.integer)):
            return self.K.embed(other)
        return None

    def is_zero(self) -> bool:
        return self.unit == 0

    @property
    def absprec(self):
        """Exponent of p beyond which digits are unknown (``None``: exact zero)."""
        if self.unit == 0:
            return self.val
        return self.val + self.prec

    def valuation(self):
        return math.inf if self.unit == 0 else self.val

    def absolute(self) -> Fraction:
        if self.unit == 0:
            return Fraction(0)
        if self.val >= 0:
            return Fraction(1, self.K.pow(self.val))
        return Fraction(self.K.pow(-self.val))

    __abs__ = absolute

    def digits(self) -> list[int]:
        p, u = self.K.p, self.unit
        out = []
        for _ in range(self.prec):
            u, d = divmod(u, p)
            out.append(d)
        return out

    def to_rational(self):
        """Smallest-height rational agreeing with the known digits, or None."""
        if self.unit == 0:
            return Fraction(0)
        mod = self.K.pow(self.prec)
        bound = math.isqrt(mod // 2)
        r0, r1, s0, s1 = mod, self.unit, 0, 1
        while r1 > bound:
            q = r0 // r1
            r0, r1 = r1, r0 - q * r1
            s0, s1 = s1, s0 - q * s1
        if s1 == 0 or abs(s1) > bound or math.gcd(r1, s1) != 1:
            return None
        q = Fraction(r1, s1)
        scale = Fraction(self.K.pow(self.val)) if self.val >= 0 else Fraction(1, self.K.pow(-self.val))
        return q * scale

    # arithmetic -------------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        K = self.K
        if self.unit == 0 or o.unit == 0:
            if self.unit == 0 and o.unit == 0:
                if self.val is None:
                    return o
                if o.val is None:
                    return self
                return K.zero(min(self.val, o.val))
            z, x = (self, o) if self.unit == 0 else (o, self)
            if z.val is None:
                return x
            if x.val >= z.val:
                return K.zero(z.val)
            return K._make(x.val, x.unit, min(x.prec, z.val - x.val))
        ap = min(self.val + self.prec, o.val + o.prec)
        zm = min(self.val, o.val)
        s = self.unit * K.pow(self.val - zm) + o.unit * K.pow(o.val - zm)
        s %= K.pow(ap - zm)
        if s == 0:
            return K.zero(ap)
        k = _valuation_int(s, K.p)
        return K._make(zm + k, s // K.pow(k), ap - zm - k)

    __radd__ = __add__

    def __neg__(self):
        if self.unit == 0:
            return self
        return PadicNumber(self.K, self.val, (-self.unit) % self.K.pow(self.prec), self.prec)

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
        K = self.K
        if self.unit == 0 or o.unit == 0:
            if (self.unit == 0 and self.val is None) or (o.unit == 0 and o.val is None):
                return K.zero()
            return K.zero(self.val + o.val)
        prec = min(self.prec, o.prec)
        return PadicNumber(K, self.val + o.val, self.unit * o.unit % K.pow(prec), prec)

    __rmul__ = __mul__

    def inverse(self):
        if self.unit == 0:
            if self.val is None:
                raise DivisionByZero("inverse of zero")
            raise PrecisionExhausted("inverse of a p-adic zero known only to finite precision")
        mod = self.K.pow(self.prec)
        return PadicNumber(self.K, -self.val, pow(self.unit, -1, mod), self.prec)

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
        if k < 0:
            return self.inverse() ** (-k)
        out = self.K.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return False
        if o is None:
            return NotImplemented
        return (self - o).unit == 0

    __hash__ = None

    def __bool__(self):
        return self.unit != 0

    def __repr__(self):
        if self.unit == 0:
            return "0" if self.val is None else f"O({self.K.p}^{self.val})"
        q = self.to_rational()
        tail = f" + O({self.K.p}^{self.val + self.prec})"
        if q is not None:
            return f"{q}{tail}"
        return f"{self.K.p}^{self.val}*({self.unit}){tail}"


# ---------------------------------------------------------------------------
# Laurent series


def _convolve(a, b, length: int, q):
    """First ``length`` terms of the product of two coefficient sequences.

    Rational coefficients are scaled to a common denominator so the inner
    loop runs on Python ints.
    """
    a, b = a[:length], b[:length]
    if q is None:
        da = math.lcm(*(c.denominator for c in a))
        db = math.lcm(*(c.denominator for c in b))
        ia = [c.numerator * (da // c.denominator) for c in a]
        ib = [c.numerator * (db // c.denominator) for c in b]
    else:
        ia, ib = list(a), list(b)
    out = [0] * length
    for i, x in enumerate(ia):
        if x:
            for j, y in enumerate(ib[: length - i]):
                out[i + j] += x * y
    if q is None:
        den = da * db
        if den == 1:
            return out
        return [Fraction(c, den) for c in out]
    return out




class LaurentField(Field):
    """Laurent series over the rationals or a prime field, truncated to ``precision`` terms."""

    name = "laurent"
    magnitude_base = 2.0

    def __init__(self, coeffs="rational", precision: int = DEFAULT_PRECISION):
        if precision < 1:
            raise ValueError("precision must be positive")
        if coeffs == "rational":
            self.q = None
        else:
            q = int(coeffs)
            if q < 2 or any(q % d == 0 for d in range(2, math.isqrt(q) + 1)):
                raise ValueError(f"{q} is not a prime")
            self.q = q
        self.precision = precision

    # coefficient domain -----------------------------------------------------

    def coeff(self, c):
        if self.q is None:
            c = _as_fraction(c)
            # integral coefficients stay ints, which keeps arithmetic off the slow Fraction path
            return c.numerator if c.denominator == 1 else c
        c = _as_fraction(c)
        if c.denominator % self.q == 0:
            raise DivisionByZero(f"denominator of {c} vanishes mod {self.q}")
        return c.numerator * pow(c.denominator, -1, self.q) % self.q

    def _cinv(self, c):
        if self.q is None:
            return Fraction(1, c) if isinstance(c, int) else 1 / c
        return pow(c, -1, self.q)

    def _reduce(self, c):
        return c if self.q is None else c % self.q

    # constructors -----------------------------------------------------------

    def zero(self, absprec=None):
        return LaurentSeries(self, absprec, (), 0)

    def _make(self, val, coeffs, prec):
        """Normalize: strip leading zeros, cap precision, drop trailing zeros."""
        k = 0
        n = len(coeffs)
        while k < n and coeffs[k] == 0:
            k += 1
        if k == n or k >= prec:
            return self.zero(val + prec)
        val += k
        prec = min(prec - k, self.precision)
        cs = list(coeffs[k : k + prec])
        while cs and cs[-1] == 0:
            cs.pop()
        if prec < 1:
            raise PrecisionExhausted("no significant Laurent terms left")
        return LaurentSeries(self, val, tuple(cs), prec)

    def embed(self, q):
        if isinstance(q, LaurentSeries):
            return q
        c = self.coeff(q)
        if c == 0:
            return self.zero()
        return LaurentSeries(self, 0, (c,), self.precision)

    def from_coeffs(self, z: int, coeffs, precision=None):
        cs = [self.coeff(c) for c in coeffs]
        prec = self.precision if precision is None else precision
        return self._make(z, cs, prec)

    def monomial(self, c, k: int):
        """``c * T**k`` as a series with full precision."""
        c = self.coeff(c)
        if c == 0:
            return self.zero()
        return LaurentSeries(self, k, (c,), self.precision)

    # interface --------------------------------------------------------------

    def abs(self, x):
        return x.absolute()

    def is_zero(self, x):
        if isinstance(x, LaurentSeries):
            return not x.coeffs
        return x == 0

    def to_json(self, x):
        x = self.embed(x)
        if x.is_zero():
            return "0"
        if x.val == 0 and len(x.coeffs) == 1:
            return str(x.coeffs[0])
        return {"z": x.val, "coeffs": [str(c) for c in x.coeffs], "precision": x.prec}

    def from_json(self, obj):
        if isinstance(obj, dict):
            return self.from_coeffs(int(obj["z"]), obj["coeffs"], obj.get("precision"))
        if isinstance(obj, float):
            raise TypeError("Laurent literals must be exact rationals, not floats")
        return self.embed(obj)

    def config(self):
        coeffs = "rational" if self.q is None else {"primefield": self.q}
        return {"kind": "laurent", "coeffs": coeffs, "precision": self.precision}

    def ulp(self):
        return 2.0 ** (-self.precision)

    def __eq__(self, other):
        return isinstance(other, LaurentField) and (other.q, other.precision) == (
            self.q,
            self.precision,
        )

    def __hash__(self):
        return hash(("laurent", self.q, self.precision))

    def __repr__(self):
        c = "rational" if self.q is None else f"GF({self.q})"
        return f"LaurentField(coeffs={c}, precision={self.precision})"


class LaurentSeries:
    """``T**val * (c0 + c1 T + ...)`` known modulo ``T**(val + prec)``.

    ``coeffs`` omits trailing zeros, so it may be shorter than ``prec``.
    Zero has empty ``coeffs`` and ``val`` equal to its absolute precision
    (``None`` when exact).
    """

    __slots__ = ("K", "val", "coeffs", "prec")

    def __init__(self, K: LaurentField, val, coeffs: tuple, prec: int):
        self.K = K
        self.val = val
        self.coeffs = coeffs
        self.prec = prec

    def _coerce(self, other):
        if isinstance(other, LaurentSeries):
            if other.K.q != self.K.q:
                raise TypeError("mixing Laurent series over different coefficient fields")
            return other
        if isinstance(other, (int, Fraction, np.integer)):
            return self.K.embed(other)
        return None

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def absprec(self):
        if not self.coeffs:
            return self.val
        return self.val + self.prec

    def valuation(self):
        return math.inf if not self.coeffs else self.val

    def absolute(self) -> Fraction:
        if not self.coeffs:
            return Fraction(0)
        if self.val >= 0:
            return Fraction(1, 1 << self.val)
        return Fraction(1 << -self.val)

    __abs__ = absolute

    def coefficient(self, k: int):
        """Coefficient of ``T**k`` (raises if beyond the known precision)."""
        ap = self.absprec
        if ap is not None and k >= ap:
            raise PrecisionExhausted(f"coefficient of T^{k} is beyond the known precision")
        if not self.coeffs or k < self.val:
            return self.K.coeff(0)
        i = k - self.val
        return self.coeffs[i] if i < len(self.coeffs) else self.K.coeff(0)

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        K = self.K
        if not self.coeffs or not o.coeffs:
            if not self.coeffs and not o.coeffs:
                if self.val is None:
                    return o
                if o.val is None:
                    return self
                return K.zero(min(self.val, o.val))
            z, x = (self, o) if not self.coeffs else (o, self)
            if z.val is None:
                return x
            if x.val >= z.val:
                return K.zero(z.val)
            return K._make(x.val, x.coeffs, min(x.prec, z.val - x.val))
        ap = min(self.val + self.prec, o.val + o.prec)
        zm = min(self.val, o.val)
        # only known nonzero terms need a slot; the precision is tracked separately
        length = min(ap, max(self.val + len(self.coeffs), o.val + len(o.coeffs))) - zm
        out = [0] * length
        for src in (self, o):
            off = src.val - zm
            for i, c in enumerate(src.coeffs):
                j = off + i
                if j >= length:
                    break
                out[j] = out[j] + c
        if K.q is not None:
            out = [c % K.q for c in out]
        return K._make(zm, out, ap - zm)

    __radd__ = __add__

    def __neg__(self):
        if not self.coeffs:
            return self
        K = self.K
        return LaurentSeries(K, self.val, tuple(K._reduce(-c) for c in self.coeffs), self.prec)

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
        K = self.K
        if not self.coeffs or not o.coeffs:
            if (not self.coeffs and self.val is None) or (not o.coeffs and o.val is None):
                return K.zero()
            return K.zero(self.val + o.val)
        prec = min(self.prec, o.prec)
        a, b = self.coeffs, o.coeffs
        if len(a) == 1:
            out = [a[0] * c for c in b[:prec]]
        elif len(b) == 1:
            out = [c * b[0] for c in a[:prec]]
        else:
            length = min(prec, len(a) + len(b) - 1)
            out = _convolve(a, b, length, K.q)
        if K.q is not None:
            out = [c % K.q for c in out]
        while out and out[-1] == 0:
            out.pop()
        return LaurentSeries(K, self.val + o.val, tuple(out), prec)

    __rmul__ = __mul__

    def inverse(self):
        if not self.coeffs:
            if self.val is None:
                raise DivisionByZero("inverse of zero")
            raise PrecisionExhausted("inverse of a Laurent zero known only to finite precision")
        K = self.K
        a = self.coeffs
        prec = self.prec
        inv0 = K._cinv(a[0])
        if len(a) == 1:
            return LaurentSeries(K, -self.val, (inv0,), prec)
        out = [inv0]
        for k in range(1, prec):
            s = 0
            for i in range(1, min(k, len(a) - 1) + 1):
                s = s + a[i] * out[k - i]
            out.append(K._reduce(-s * inv0))
        while out and out[-1] == 0:
            out.pop()
        return LaurentSeries(K, -self.val, tuple(out), prec)

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
        if k < 0:
            return self.inverse() ** (-k)
        out = self.K.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return False
        if o is None:
            return NotImplemented
        return not (self - o).coeffs

    __hash__ = None

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return "0" if self.val is None else f"O(T^{self.val})"
        terms = []
        for i, c in enumerate(self.coeffs[:6]):
            if c != 0:
                terms.append(f"({c})*T^{self.val + i}")
        more = " + ..." if len(self.coeffs) > 6 else ""
        return " + ".join(terms) + more + f" + O(T^{self.val + self.prec})"


# ---------------------------------------------------------------------------
# generic entry points


def field_from_config(cfg: dict, precision=None) -> Field:
    """Build a backend from its JSON configuration object."""
    kind = cfg.get("kind")
    if kind == "complex":
        return ComplexField()
    prec = precision if precision is not None else cfg.get("precision", DEFAULT_PRECISION)
    if kind == "padic":
        return PadicField(int(cfg["p"]), int(prec))
    if kind == "laurent":
        coeffs = cfg.get("coeffs", "rational")
        if isinstance(coeffs, dict):
            coeffs = int(coeffs["primefield"])
        return LaurentField(coeffs, int(prec))
    raise ValueError(f"unknown field kind {kind!r}")


def field_of(x) -> Field:
    if isinstance(x, (PadicNumber, LaurentSeries)):
        return x.K
    return ComplexField()


def field_add(x, y):
    return x + y


def field_mul(x, y):
    return x * y


def field_neg(x):
    return -x


def field_inv(x):
    if isinstance(x, (PadicNumber, LaurentSeries)):
        return x.inverse()
    if x == 0:
        raise DivisionByZero("inverse of zero")
    return 1 / x


def absolute_value(x):
    """|x|: a float on the complex backend, an exact Fraction on the others."""
    if isinstance(x, (PadicNumber, LaurentSeries)):
        return x.absolute()
    return abs(complex(x))
