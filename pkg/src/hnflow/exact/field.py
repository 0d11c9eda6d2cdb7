"""Exact scalars: rationals and elements of a real-embedded number field.

Rationals are plain :class:`fractions.Fraction` (or ``int``).  A number field
``Q(theta)`` is described by the minimal polynomial of ``theta`` together with
a rational isolating interval singling out one real root, which fixes the
real embedding.  Elements are :class:`NFElem` instances holding coordinates in
the power basis ``1, theta, ..., theta^(n-1)``.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction
from typing import Sequence, Union

__all__ = [
    "FieldMismatchError",
    "NumberField",
    "NFElem",
    "Scalar",
    "as_fraction",
    "field_of",
    "common_field",
    "is_rational",
    "real_value",
    "sign",
    "to_mpf",
]


class FieldMismatchError(ValueError):
    """Two scalars from different number-field contexts were combined."""


# --------------------------------------------------------------------------
# dense polynomials over Q, coefficient lists in ascending degree


def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _peval(p, x):
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _pderiv(p):
    return [i * p[i] for i in range(1, len(p))]


def _pmul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(out)


def _psub(a, b):
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    return _trim(out)


def _pdivmod(a, b):
    a = _trim(a)
    b = _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    r = [Fraction(c) for c in a]
    lead = b[-1]
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        c = r[-1] / lead
        q[shift] = c
        for i, bc in enumerate(b):
            r[shift + i] -= c * bc
        r = _trim(r)
    return _trim(q), r


def _sturm_sequence(p):
    seq = [_trim(p), _trim(_pderiv(p))]
    while seq[-1] and len(seq[-1]) > 1:
        _, r = _pdivmod(seq[-2], seq[-1])
        if not r:
            break
        seq.append([-c for c in r])
    return seq


def _sign_changes(seq, x):
    signs = []
    for q in seq:
        v = _peval(q, x)
        if v != 0:
            signs.append(v > 0)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _divisors(n):
    n = abs(n)
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i * i != n:
                large.append(n // i)
        i += 1
    return small + large[::-1]


def _has_rational_root(p):
    den = math.lcm(*[Fraction(c).denominator for c in p])
    ip = [int(Fraction(c) * den) for c in p]
    if ip[0] == 0:
        return True
    for num in _divisors(ip[0]):
        for dd in _divisors(ip[-1]):
            for s in (1, -1):
                if _peval(ip, Fraction(s * num, dd)) == 0:
                    return True
    return False


def _neg_log2(x: Fraction) -> int:
    """Integer close to ``-log2(x)`` for positive ``x`` without float underflow."""
    return x.denominator.bit_length() - x.numerator.bit_length()


def _dyadic_floor(x: Fraction, bits: int) -> Fraction:
    scale = 1 << bits
    return Fraction(math.floor(x * scale), scale)


def _dyadic_ceil(x: Fraction, bits: int) -> Fraction:
    scale = 1 << bits
    return Fraction(math.ceil(x * scale), scale)


# --------------------------------------------------------------------------


class NumberField:
    """``Q(theta)`` with ``theta`` the unique real root of ``minpoly`` in ``(lo, hi)``.

    ``minpoly`` lists coefficients in ascending degree, e.g. ``[-2, 0, 1]``
    for ``x**2 - 2``.  Irreducibility is checked for degree <= 3; higher
    degrees need ``trusted=True``, which is recorded on the instance.
    """

    def __init__(self, minpoly, interval, symbol: str = "t", trusted: bool = False):
        coeffs = _trim([Fraction(c) for c in minpoly])
        if len(coeffs) < 2:
            raise ValueError("minimal polynomial must have degree >= 1")
        lead = coeffs[-1]
        self.minpoly = tuple(c / lead for c in coeffs)
        self.degree = len(self.minpoly) - 1
        lo, hi = (Fraction(v) for v in interval)
        if not lo < hi:
            raise ValueError("isolating interval must satisfy lo < hi")
        self.symbol = symbol
        self.trusted = bool(trusted)
        if self.degree <= 3:
            if self.degree > 1 and _has_rational_root(self.minpoly):
                raise ValueError(f"minimal polynomial {list(self.minpoly)} is reducible over Q")
            self.irreducibility = "verified"
        elif trusted:
            self.irreducibility = "trusted"
        else:
            raise ValueError(
                "irreducibility is only verified up to degree 3; pass trusted=True to attest it"
            )
        p = list(self.minpoly)
        if _peval(p, lo) == 0 or _peval(p, hi) == 0:
            raise ValueError("isolating interval endpoints must not be roots")
        seq = _sturm_sequence(p)
        if _sign_changes(seq, lo) - _sign_changes(seq, hi) != 1:
            raise ValueError("interval does not isolate exactly one real root")
        self._interval = (lo, hi)
        self._lock = threading.Lock()
        if self.degree == 1:
            root = -self.minpoly[0]
            self._interval = (root, root)

    def __repr__(self):
        return f"NumberField(minpoly={[str(c) for c in self.minpoly]}, symbol={self.symbol!r})"

    # pickling (worker processes): the cache lock is recreated on arrival
    def __getstate__(self):
        state = dict(self.__dict__)
        del state["_lock"]
        return state

    def __setstate__(self, state):
        self.__dict__.update(state)
        self._lock = threading.Lock()

    # field elements ---------------------------------------------------------

    def element(self, coords) -> "NFElem":
        return NFElem(self, coords)

    def gen(self) -> "NFElem":
        coords = [0] * self.degree
        if self.degree == 1:
            return NFElem(self, [-self.minpoly[0]])
        coords[1] = 1
        return NFElem(self, coords)

    def reduce(self, poly) -> tuple:
        """Reduce an ascending coefficient list modulo the minimal polynomial."""
        r = [Fraction(c) for c in poly]
        n = self.degree
        m = self.minpoly
        for top in range(len(r) - 1, n - 1, -1):
            c = r[top]
            if c:
                for i in range(n):
                    r[top - n + i] -= c * m[i]
            r[top] = Fraction(0)
        r = r[:n] + [Fraction(0)] * (n - len(r))
        return tuple(r)

    # root isolation ---------------------------------------------------------

    def root_interval(self, width: Fraction) -> tuple:
        """Dyadic-refined isolating interval of width <= ``width``."""
        with self._lock:
            lo, hi = self._interval
        if hi - lo <= width:
            return lo, hi
        p = list(self.minpoly)
        dp = _pderiv(p)
        slo = _peval(p, lo) > 0
        step = 4  # Newton bracket half-width = w / 2**step
        while hi - lo > width:
            w = hi - lo
            mid = (lo + hi) / 2
            bits = max(8, _neg_log2(w) + 8)
            mid = _dyadic_floor(mid, bits)
            d = _peval(dp, mid)
            accepted = False
            if d != 0:
                newton = mid - _peval(p, mid) / d
                half = w / (1 << step)
                a = _dyadic_floor(newton - half, bits + step)
                b = _dyadic_ceil(newton + half, bits + step)
                if lo < a < b < hi:
                    sa = _peval(p, a)
                    sb = _peval(p, b)
                    if sa != 0 and sb != 0 and (sa > 0) == slo and (sb > 0) != slo:
                        lo, hi = a, b
                        step = min(2 * step, 256)
                        accepted = True
            if not accepted:
                step = 4
                if lo < mid < hi:
                    sm = _peval(p, mid)
                    if sm == 0:
                        raise ArithmeticError("rational root of an irreducible polynomial")
                    if (sm > 0) == slo:
                        lo = mid
                    else:
                        hi = mid
                else:
                    m2 = (lo + hi) / 2
                    if (_peval(p, m2) > 0) == slo:
                        lo = m2
                    else:
                        hi = m2
        with self._lock:
            if hi - lo < self._interval[1] - self._interval[0]:
                self._interval = (lo, hi)
        return lo, hi


Scalar = Union[int, Fraction, "NFElem"]


class NFElem:
    """Element of a :class:`NumberField`; immutable."""

    __slots__ = ("field", "coords")

    def __init__(self, field: NumberField, coords):
        coords = [Fraction(c) for c in coords]
        if len(coords) > field.degree:
            coords = list(field.reduce(coords))
        coords += [Fraction(0)] * (field.degree - len(coords))
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coords", tuple(coords))

    def __setattr__(self, key, value):
        raise AttributeError("NFElem is immutable")

    def __reduce__(self):
        return NFElem, (self.field, self.coords)

    # coercion ---------------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, NFElem):
            if other.field is not self.field:
                raise FieldMismatchError("scalars belong to different number fields")
            return other.coords
        if isinstance(other, (int, Fraction)):
            return (Fraction(other),) + (Fraction(0),) * (self.field.degree - 1)
        return None

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coords[1:])

    def __bool__(self):
        return any(self.coords)

    def __eq__(self, other):
        oc = self._coerce(other)
        if oc is None:
            return NotImplemented
        return self.coords == tuple(oc)

    def __hash__(self):
        if self.is_rational():
            return hash(self.coords[0])
        return hash((id(self.field), self.coords))

    def __repr__(self):
        s = self.field.symbol
        terms = []
        for i, c in enumerate(self.coords):
            if c == 0:
                continue
            mono = "" if i == 0 else (s if i == 1 else f"{s}**{i}")
            if i == 0:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            else:
                terms.append(f"({c})*{mono}")
        return " + ".join(terms) if terms else "0"

    __str__ = __repr__

    # arithmetic -------------------------------------------------------------

    def __neg__(self):
        return NFElem(self.field, [-c for c in self.coords])

    def __pos__(self):
        return self

    def __add__(self, other):
        oc = self._coerce(other)
        if oc is None:
            return NotImplemented
        return NFElem(self.field, [a + b for a, b in zip(self.coords, oc)])

    __radd__ = __add__

    def __sub__(self, other):
        oc = self._coerce(other)
        if oc is None:
            return NotImplemented
        return NFElem(self.field, [a - b for a, b in zip(self.coords, oc)])

    def __rsub__(self, other):
        oc = self._coerce(other)
        if oc is None:
            return NotImplemented
        return NFElem(self.field, [b - a for a, b in zip(self.coords, oc)])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return NFElem(self.field, [c * other for c in self.coords])
        oc = self._coerce(other)
        if oc is None:
            return NotImplemented
        return NFElem(self.field, self.field.reduce(_pmul(list(self.coords), list(oc)) or [0]))

    __rmul__ = __mul__

    def inverse(self) -> "NFElem":
        if not self:
            raise ZeroDivisionError("division by zero in number field")
        # extended Euclid: s*a + t*m = 1
        a = _trim(list(self.coords))
        m = list(self.field.minpoly)
        r0, r1 = m, a
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, r = _pdivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _psub(s0, _pmul(q, s1))
        if not r1:
            raise ArithmeticError("minimal polynomial is not irreducible")
        c = r1[0]
        return NFElem(self.field, self.field.reduce([x / c for x in s1] or [0]))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return NFElem(self.field, [c / other for c in self.coords])
        if isinstance(other, NFElem):
            self._coerce(other)
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        oc = self._coerce(other)
        if oc is None:
            return NotImplemented
        return NFElem(self.field, oc) * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = NFElem(self.field, [1])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result


# --------------------------------------------------------------------------
# helpers that accept any Scalar


def field_of(x) -> NumberField | None:
    return x.field if isinstance(x, NFElem) else None


def common_field(values) -> NumberField | None:
    """The shared number field of ``values`` (None if all rational)."""
    found = None
    for v in values:
        if isinstance(v, NFElem):
            if found is None:
                found = v.field
            elif v.field is not found:
                raise FieldMismatchError("scalars belong to different number fields")
    return found


def is_rational(x) -> bool:
    return not isinstance(x, NFElem) or x.is_rational()


def as_fraction(x) -> Fraction:
    if isinstance(x, NFElem):
        if not x.is_rational():
            raise ValueError(f"{x!r} is not rational")
        return x.coords[0]
    return Fraction(x)


def simplify(x):
    """Collapse rational number-field elements to Fraction."""
    if isinstance(x, NFElem) and x.is_rational():
        return x.coords[0]
    return x


def _interval_eval(coords, lo, hi):
    """Exact interval Horner evaluation of sum c_i theta^i on [lo, hi]."""
    a = b = Fraction(0)
    for c in reversed(coords):
        prods = (a * lo, a * hi, b * lo, b * hi)
        a = min(prods) + c
        b = max(prods) + c
    return a, b


def real_value(s, bits: int) -> tuple:
    """Dyadic interval ``(lo, hi)`` of width <= 2**-bits containing ``s``.

    Rationals and exact zeros come back as degenerate intervals.
    """
    if bits < 1:
        raise ValueError("bits must be >= 1")
    if not isinstance(s, NFElem):
        v = Fraction(s)
        return v, v
    if not s:
        return Fraction(0), Fraction(0)
    if s.is_rational():
        return s.coords[0], s.coords[0]
    target = Fraction(1, 1 << (bits + 1))
    field = s.field
    # derivative bound keeps the refinement loop short
    width = target
    while True:
        lo, hi = field.root_interval(width)
        a, b = _interval_eval(s.coords, lo, hi)
        if b - a <= target:
            return _dyadic_floor(a, bits + 2), _dyadic_ceil(b, bits + 2)
        width = width / max(2, int((b - a) / target) + 1)


def sign(s) -> int:
    """Exact sign of the real embedding."""
    if not isinstance(s, NFElem):
        v = Fraction(s)
        return (v > 0) - (v < 0)
    if not s:
        return 0
    bits = 16
    while True:
        lo, hi = real_value(s, bits)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        bits *= 2


def to_mpf(s, prec: int):
    """mpmath value of the embedding, accurate to about ``prec`` bits."""
    import mpmath

    with mpmath.workprec(prec + 8):
        if not isinstance(s, NFElem) or s.is_rational():
            v = as_fraction(s)
            return mpmath.mpf(v.numerator) / v.denominator
        if not s:
            return mpmath.mpf(0)
        # relative accuracy: size the absolute target from a coarse magnitude
        lo, hi = real_value(s, 16)
        mag = max(abs(lo), abs(hi), Fraction(1, 1 << 16))
        extra = max(0, _neg_log2(mag)) + 16
        lo, hi = real_value(s, prec + extra)
        mid = (lo + hi) / 2
        return mpmath.mpf(mid.numerator) / mid.denominator
