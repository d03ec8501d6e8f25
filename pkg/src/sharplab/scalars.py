"""Scalar backends.

Two interchangeable representations of complex scalars are used throughout
the package:

* exact: :class:`GaussianRational`, a complex number whose real and imaginary
  parts are arbitrary-precision rationals;
* float: the builtin :class:`complex` (double precision).

Both support ``+ - * /``, ``conjugate()`` and equality, so numpy object
arrays of :class:`GaussianRational` and ``complex128`` arrays can be handled
by the same code paths.  The exact backend never takes square roots; anything
that would need one is carried around as a squared norm instead.
"""

from fractions import Fraction
from math import gcd, lcm
import numbers
import re

EXACT = "exact"
FLOAT = "float"
BACKENDS = (EXACT, FLOAT)

#: default absolute tolerance for float comparisons
DEFAULT_TOL = 1e-9


class GaussianRational:
    """Exact complex rational ``(re + im*i) / den`` stored as three ints.

    The representation is kept reduced (``gcd(re, im, den) == 1``) with a
    positive denominator, so structural equality is value equality.

    >>> GaussianRational(3, 4) / 5
    GaussianRational('3/5 + 4/5 i')
    >>> z = GaussianRational('3/5', '4/5')
    >>> z * z.conjugate()
    GaussianRational('1')
    """

    __slots__ = ("_re", "_im", "_den")

    def __init__(self, re=0, im=0):
        re = _to_fraction(re)
        im = _to_fraction(im)
        den = re.denominator * im.denominator // gcd(re.denominator, im.denominator)
        self._set(re.numerator * (den // re.denominator),
                  im.numerator * (den // im.denominator), den)

    def _set(self, a, b, d):
        g = gcd(gcd(a, b), d)
        if g != 1:
            a //= g
            b //= g
            d //= g
        self._re, self._im, self._den = a, b, d

    @classmethod
    def _raw(cls, a, b, d):
        z = object.__new__(cls)
        if d < 0:
            a, b, d = -a, -b, -d
        z._set(a, b, d)
        return z

    # -- accessors -------------------------------------------------------

    @property
    def real(self):
        return Fraction(self._re, self._den)

    @property
    def imag(self):
        return Fraction(self._im, self._den)

    def conjugate(self):
        z = object.__new__(GaussianRational)
        z._re, z._im, z._den = self._re, -self._im, self._den
        return z

    def abs2(self):
        """Squared modulus as a :class:`~fractions.Fraction`."""
        return Fraction(self._re * self._re + self._im * self._im, self._den * self._den)

    def is_real(self):
        return self._im == 0

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented if not isinstance(other, complex) else complex(self) + other
        return GaussianRational._raw(self._re * o._den + o._re * self._den,
                                     self._im * o._den + o._im * self._den,
                                     self._den * o._den)

    __radd__ = __add__

    def __neg__(self):
        z = object.__new__(GaussianRational)
        z._re, z._im, z._den = -self._re, -self._im, self._den
        return z

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented if not isinstance(other, complex) else complex(self) - other
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented if not isinstance(other, complex) else complex(self) * other
        return GaussianRational._raw(self._re * o._re - self._im * o._im,
                                     self._re * o._im + self._im * o._re,
                                     self._den * o._den)

    __rmul__ = __mul__

    def reciprocal(self):
        n = self._re * self._re + self._im * self._im
        if n == 0:
            raise ZeroDivisionError("reciprocal of exact zero")
        # 1/((a+bi)/d) = d(a-bi)/(a^2+b^2)
        return GaussianRational._raw(self._den * self._re, -self._den * self._im, n)

    def __truediv__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented if not isinstance(other, complex) else complex(self) / other
        return self * o.reciprocal()

    def __rtruediv__(self, other):
        if isinstance(other, complex):
            return other / complex(self)
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o * self.reciprocal()

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.reciprocal() ** (-n)
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- comparison / conversion -----------------------------------------

    def __eq__(self, other):
        if isinstance(other, complex):
            return complex(self) == other
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._re == o._re and self._im == o._im and self._den == o._den

    def __hash__(self):
        if self._im == 0:
            return hash(Fraction(self._re, self._den))
        return hash((self._re, self._im, self._den))

    def __bool__(self):
        return self._re != 0 or self._im != 0

    def __complex__(self):
        return complex(self._re / self._den, self._im / self._den)

    def __repr__(self):
        return f"GaussianRational({str(self)!r})"

    def __str__(self):
        return format_scalar(self)


def _to_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        # decimal reading, so 0.1 means 1/10 rather than its binary expansion
        return Fraction(repr(x))
    if isinstance(x, numbers.Rational):
        return Fraction(x.numerator, x.denominator)
    raise TypeError(f"cannot read {x!r} as a rational")


def _coerce(x):
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, int):
        return GaussianRational._raw(x, 0, 1)
    if isinstance(x, Fraction):
        return GaussianRational._raw(x.numerator, 0, x.denominator)
    if isinstance(x, numbers.Rational):  # numpy integers and friends
        return GaussianRational._raw(int(x.numerator), 0, int(x.denominator))
    return NotImplemented


ONE = GaussianRational(1)
ZERO = GaussianRational(0)
I = GaussianRational(0, 1)


def exact(x):
    """Convert ``x`` (int, Fraction, str, ``(re, im)`` pair or complex with
    dyadic parts) to a :class:`GaussianRational`."""
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, complex):
        return GaussianRational(Fraction(x.real), Fraction(x.imag))
    if isinstance(x, (tuple, list)):
        re_, im_ = x
        return GaussianRational(re_, im_)
    if isinstance(x, str):
        return parse_scalar(x)
    return GaussianRational(x)


def to_float(x):
    return complex(x)


def backend_of(x):
    return EXACT if isinstance(x, (GaussianRational, int, Fraction)) else FLOAT


def conjugate(s):
    """Complex conjugate on either backend."""
    if isinstance(s, (int, Fraction)):
        return s
    return s.conjugate()


def close(a, b, tol=DEFAULT_TOL):
    """Scalar equality: exact when both sides are exact, else ``|a-b| <= tol``."""
    if isinstance(a, (GaussianRational, int, Fraction)) and \
            isinstance(b, (GaussianRational, int, Fraction)):
        return a == b
    return abs(complex(a) - complex(b)) <= tol


def is_real(s, tol=DEFAULT_TOL):
    if isinstance(s, GaussianRational):
        return s.is_real()
    return abs(complex(s).imag) <= tol


def real_part(s):
    """Real part; a Fraction for exact scalars, a float otherwise."""
    if isinstance(s, GaussianRational):
        return s.real
    return complex(s).real


def is_probability(s, tol=DEFAULT_TOL):
    """True iff ``s`` is real and lies in [0, 1] (within ``tol`` for floats)."""
    if isinstance(s, GaussianRational):
        return s.is_real() and 0 <= s.real <= 1
    z = complex(s)
    return abs(z.imag) <= tol and -tol <= z.real <= 1 + tol


def is_positive(s, tol=DEFAULT_TOL):
    """True iff ``s`` is real and strictly positive (beyond ``tol`` for floats)."""
    if isinstance(s, GaussianRational):
        return s.is_real() and s.real > 0
    z = complex(s)
    return abs(z.imag) <= tol and z.real > tol


def format_scalar(s):
    """Text rendering used in reports and diagram files.

    Exact scalars render as ``a/b`` when real and ``a/b + c/d i`` otherwise;
    floats always render as ``x.xxxxxx + y.yyyyyy i``.
    """
    if isinstance(s, (int, Fraction)):
        s = exact(s)
    if isinstance(s, GaussianRational):
        re_, im_ = s.real, s.imag
        if im_ == 0:
            return str(re_)
        sign = "-" if im_ < 0 else "+"
        return f"{re_} {sign} {abs(im_)} i"
    z = complex(s)
    re_ = z.real + 0.0  # folds -0.0 into 0.0
    im_ = z.imag + 0.0
    sign = "-" if im_ < 0 else "+"
    return f"{re_:.6f} {sign} {abs(im_):.6f} i"


_SCALAR_RE = re.compile(
    r"^\s*(?P<re>[+-]?\s*[0-9./]+)?\s*(?:(?P<sign>[+-])\s*(?P<im>[0-9./]*)\s*i)?\s*$"
)


def parse_scalar(text, backend=EXACT):
    """Inverse of :func:`format_scalar` (also accepts plain numbers)."""
    m = _SCALAR_RE.match(text)
    if not m or (m.group("re") is None and m.group("sign") is None):
        raise ValueError(f"cannot parse scalar {text!r}")
    re_ = Fraction(m.group("re").replace(" ", "")) if m.group("re") else Fraction(0)
    im_ = Fraction(0)
    if m.group("sign"):
        im_ = Fraction(m.group("im") or 1)
        if m.group("sign") == "-":
            im_ = -im_
    if backend == EXACT:
        return GaussianRational(re_, im_)
    return complex(float(re_), float(im_))


def split_exact(values):
    """Integer parts of a sequence of Gaussian rationals over a common
    denominator: ``values[k] == (re[k] + i im[k]) / den``."""
    den = 1
    for x in values:
        den = lcm(den, x._den)
    re = [x._re * (den // x._den) for x in values]
    im = [x._im * (den // x._den) for x in values]
    return re, im, den


def join_exact(re, im, den):
    """Inverse of :func:`split_exact`, one reduced value per entry."""
    return [GaussianRational._raw(a, b, den) for a, b in zip(re, im)]
