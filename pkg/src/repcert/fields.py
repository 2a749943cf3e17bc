"""Exact arithmetic in the tower Q < Q(r) < Q(r)(t).

``r`` is a real algebraic number given by a monic integer minimal polynomial
and an index into its sorted real roots; ``t`` is an optional transcendental.
Elements are stored as num/den polynomials in ``t`` whose coefficients live in
Q(r), kept in canonical form (coprime, monic denominator) after every
operation so equality is syntactic.

Real embeddings are certified: values are enclosed in rational intervals
obtained from a Sturm-isolated root interval and a mean-value bound.
"""
from __future__ import annotations

import re
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence, Union

__all__ = [
    "FieldDescriptor",
    "FieldElement",
    "RealInterval",
    "FieldError",
    "PrecisionError",
    "ParseError",
    "make_field",
    "rationals",
    "field_arithmetic",
    "embed_real",
    "apply_embedding",
    "poly_profile",
    "sign",
    "parse_element",
    "sturm_sequence",
    "count_real_roots",
]

Rational = Union[int, Fraction]

MAX_BITS = 4096


class FieldError(ValueError):
    pass


class PrecisionError(ArithmeticError):
    """A sign or enclosure could not be decided within MAX_BITS of refinement."""


class ParseError(ValueError):
    def __init__(self, message, token=None):
        super().__init__(message)
        self.token = token


# ---------------------------------------------------------------------------
# polynomials over Q: tuples of Fractions, lowest degree first, no trailing 0

def _qstrip(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def _qadd(p, q):
    n = max(len(p), len(q))
    return _qstrip((p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n))


def _qmul(p, q):
    if not p or not q:
        return ()
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return _qstrip(out)


def _qdivmod(p, q):
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    p = list(p)
    quot = [Fraction(0)] * max(len(p) - len(q) + 1, 0)
    lead = q[-1]
    while len(p) >= len(q) and p:
        c = Fraction(p[-1]) / lead
        k = len(p) - len(q)
        quot[k] = c
        for j, b in enumerate(q):
            p[k + j] -= c * b
        p = list(_qstrip(p))
    return _qstrip(quot), _qstrip(p)


def _qeval(p, x):
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _qderiv(p):
    return _qstrip(i * p[i] for i in range(1, len(p)))


def _qgcd(p, q):
    while q:
        p, q = q, _qdivmod(p, q)[1]
    if not p:
        return ()
    return tuple(c / p[-1] for c in p)


def sturm_sequence(p):
    p = _qstrip(Fraction(c) for c in p)
    seq = [p, _qderiv(p)]
    while seq[-1] and len(seq[-1]) > 1:
        r = _qdivmod(seq[-2], seq[-1])[1]
        if not r:
            break
        seq.append(tuple(-c for c in r))
    return seq


def _sign_changes(seq, x):
    signs = [v for v in (_qeval(s, x) for s in seq) if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))


def count_real_roots(p, lo=None, hi=None):
    """Number of real roots of a squarefree ``p`` in (lo, hi] (all if unbounded)."""
    seq = sturm_sequence(p)
    bound = _root_bound(seq[0])
    lo = -bound if lo is None else Fraction(lo)
    hi = bound if hi is None else Fraction(hi)
    return _sign_changes(seq, lo) - _sign_changes(seq, hi)


def _root_bound(p):
    lead = abs(p[-1])
    m = max((abs(c) / lead for c in p[:-1]), default=Fraction(0))
    b = 1
    while b <= 1 + m:
        b *= 2
    return Fraction(b)


def _isolate_real_roots(p):
    """Disjoint dyadic intervals (lo, hi], one per real root, ascending."""
    seq = sturm_sequence(p)
    bound = _root_bound(seq[0])
    out = []
    stack = [(-bound, bound)]
    while stack:
        lo, hi = stack.pop()
        n = _sign_changes(seq, lo) - _sign_changes(seq, hi)
        if n == 0:
            continue
        if n == 1:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        stack.append((mid, hi))
        stack.append((lo, mid))
    out.sort()
    return out


# ---------------------------------------------------------------------------
# certified real intervals

@dataclass(frozen=True)
class RealInterval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("empty interval: lo > hi")

    @property
    def width(self):
        return self.hi - self.lo

    @property
    def mid(self):
        return (self.lo + self.hi) / 2

    def contains(self, x):
        return self.lo <= x <= self.hi

    def __add__(self, other):
        other = _as_interval(other)
        return RealInterval(self.lo + other.lo, self.hi + other.hi)

    def __sub__(self, other):
        other = _as_interval(other)
        return RealInterval(self.lo - other.hi, self.hi - other.lo)

    def __mul__(self, other):
        other = _as_interval(other)
        ps = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return RealInterval(min(ps), max(ps))

    def __float__(self):
        return float(self.mid)

    def widen(self, eps):
        return RealInterval(self.lo - eps, self.hi + eps)

    def __repr__(self):
        return f"RealInterval([{float(self.lo):.12g}, {float(self.hi):.12g}])"


def _as_interval(x):
    if isinstance(x, RealInterval):
        return x
    x = Fraction(x)
    return RealInterval(x, x)


# ---------------------------------------------------------------------------
# coefficient layer Q(r)

class _RationalOps:
    """Q(r) with deg(minpoly) == 1: coefficients are plain Fractions."""

    degree = 1
    zero = Fraction(0)
    one = Fraction(1)

    def __init__(self, root):
        self.root = root

    def from_rational(self, q):
        return Fraction(q)

    def from_poly(self, coeffs):
        acc = Fraction(0)
        for c in reversed(coeffs):
            acc = acc * self.root + c
        return acc

    def to_poly(self, a):
        return (a,) if a else ()

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def sub(a, b):
        return a - b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def neg(a):
        return -a

    @staticmethod
    def inv(a):
        if not a:
            raise ZeroDivisionError("division by zero in Q")
        return 1 / a

    @staticmethod
    def is_zero(a):
        return a == 0

    def is_one(self, a):
        return a == 1

    @staticmethod
    def rational_value(a):
        return a


class _AlgebraicOps:
    """Q(r) = Q[x]/(m): coefficients are reduced tuples of Fractions."""

    def __init__(self, minpoly):
        self.m = tuple(Fraction(c) for c in minpoly)
        self.degree = n = len(minpoly) - 1
        self.zero = ()
        self.one = (Fraction(1),)
        # x^k mod m for n <= k <= 2n-2
        table = {}
        cur = tuple(-c for c in self.m[:-1])
        for k in range(n, 2 * n - 1):
            table[k] = _qstrip(cur)
            shifted = (Fraction(0),) + cur
            top = shifted[n] if len(shifted) > n else Fraction(0)
            cur = tuple(shifted[i] - top * self.m[i] for i in range(n))
        self._table = table

    def from_rational(self, q):
        q = Fraction(q)
        return (q,) if q else ()

    def from_poly(self, coeffs):
        return self._reduce(_qstrip(Fraction(c) for c in coeffs))

    def to_poly(self, a):
        return a

    def _reduce(self, p):
        n = self.degree
        if len(p) <= n:
            return p
        out = list(p[:n]) + [Fraction(0)] * (n - min(len(p), n))
        for k in range(n, len(p)):
            c = p[k]
            if c:
                if k in self._table:
                    for i, v in enumerate(self._table[k]):
                        out[i] += c * v
                else:
                    rem = _qdivmod((Fraction(0),) * k + (Fraction(1),), self.m)[1]
                    for i, v in enumerate(rem):
                        out[i] += c * v
        return _qstrip(out)

    @staticmethod
    def add(a, b):
        if not a:
            return b
        if not b:
            return a
        return _qadd(a, b)

    @staticmethod
    def sub(a, b):
        if not b:
            return a
        return _qadd(a, tuple(-c for c in b))

    def mul(self, a, b):
        if not a or not b:
            return ()
        return self._reduce(_qmul(a, b))

    @staticmethod
    def neg(a):
        return tuple(-c for c in a)

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("division by zero in Q(r)")
        # extended Euclid: s*a + k*m = 1
        r0, r1 = self.m, a
        s0, s1 = (), (Fraction(1),)
        while len(r1) > 1:
            q, r = _qdivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _qadd(s0, tuple(-c for c in _qmul(q, s1)))
        if not r1:
            raise FieldError("minimal polynomial is not irreducible: zero divisor found")
        return self._reduce(tuple(c / r1[0] for c in s1))

    @staticmethod
    def is_zero(a):
        return not a

    @staticmethod
    def is_one(a):
        return len(a) == 1 and a[0] == 1

    @staticmethod
    def rational_value(a):
        if len(a) > 1:
            return None
        return a[0] if a else Fraction(0)


# ---------------------------------------------------------------------------
# descriptor

_ROOT_CACHE = {}
_ROOT_LOCK = threading.Lock()


@dataclass(frozen=True)
class FieldDescriptor:
    """Q(r)(var): minimal polynomial of r (integers, lowest degree first),
    which real root r denotes, and an optional transcendental variable."""

    minpoly: tuple
    root_index: int
    var: str | None = None

    @cached_property
    def degree(self):
        return len(self.minpoly) - 1

    @cached_property
    def ops(self):
        if self.degree == 1:
            return _RationalOps(Fraction(-self.minpoly[0], self.minpoly[1]))
        return _AlgebraicOps(self.minpoly)

    @cached_property
    def _isolating(self):
        return _isolate_real_roots(tuple(Fraction(c) for c in self.minpoly))

    @property
    def real_root_count(self):
        return len(self._isolating)

    def root_interval(self, bits=0):
        """Rational interval of width <= 2**-bits containing r."""
        if self.degree == 1:
            v = self.ops.root
            return RealInterval(v, v)
        key = (self.minpoly, self.root_index)
        target = Fraction(1, 2 ** bits)
        with _ROOT_LOCK:
            lo, hi = _ROOT_CACHE.get(key) or self._isolating[self.root_index]
            if hi - lo > target:
                m = tuple(Fraction(c) for c in self.minpoly)
                slo = _qeval(m, lo)
                if slo == 0:  # never for irreducible m of degree > 1
                    hi = lo
                while hi - lo > target:
                    mid = (lo + hi) / 2
                    smid = _qeval(m, mid)
                    if smid == 0:
                        lo = hi = mid
                        break
                    if (smid > 0) == (slo > 0):
                        lo, slo = mid, smid
                    else:
                        hi = mid
                _ROOT_CACHE[key] = (lo, hi)
            return RealInterval(lo, hi)

    def with_root(self, root_index):
        if not 0 <= root_index < self.real_root_count:
            raise FieldError(
                f"root index {root_index} out of range: {self.real_root_count} real roots")
        return FieldDescriptor(self.minpoly, root_index, self.var)

    def without_var(self):
        return FieldDescriptor(self.minpoly, self.root_index, None)

    def to_json(self):
        d = {"minpoly": list(self.minpoly), "root": self.root_index}
        if self.var:
            d["var"] = self.var
        return d

    @classmethod
    def from_json(cls, d):
        return make_field(d["minpoly"], d.get("root", 0), d.get("var"),
                          check_irreducible=d.get("check", True))

    # element constructors
    def element(self, value):
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldError("descriptor mismatch")
            return value
        if isinstance(value, str):
            return parse_element(value, self)
        return FieldElement(self, (self.ops.from_rational(value),))

    def __call__(self, value):
        return self.element(value)

    @property
    def gen(self):
        """The algebraic generator r."""
        return FieldElement(self, (self.ops.from_poly((0, 1)),))

    @property
    def t(self):
        if not self.var:
            raise FieldError("field has no transcendental layer")
        return FieldElement(self, (self.ops.zero, self.ops.one))

    def zero(self):
        return FieldElement(self, ())

    def one(self):
        return FieldElement(self, (self.ops.one,))


def make_field(minpoly: Sequence[int], root_index: int = 0, transcendental: str | None = None,
               check_irreducible: bool = True) -> FieldDescriptor:
    """Descriptor for Q(r)(transcendental).

    ``minpoly`` lists integer coefficients from the constant term up and must
    be monic and squarefree. ``root_index`` selects r among the sorted real
    roots. Irreducibility is checked with sympy unless ``check_irreducible``
    is False (trusted input).
    """
    if any(Fraction(c) != int(c) for c in minpoly):
        raise FieldError("minimal polynomial must have integer coefficients")
    coeffs = tuple(int(c) for c in minpoly)
    if len(coeffs) < 2 or coeffs[-1] != 1:
        raise FieldError("minimal polynomial must be monic of degree >= 1")
    q = tuple(Fraction(c) for c in coeffs)
    if len(_qgcd(q, _qderiv(q))) > 1:
        raise FieldError("minimal polynomial is not squarefree")
    if check_irreducible and len(coeffs) > 2:
        import sympy

        x = sympy.Symbol("x")
        if not sympy.Poly(list(reversed(coeffs)), x, domain="QQ").is_irreducible:
            raise FieldError(f"minimal polynomial {list(coeffs)} is reducible over Q")
    if transcendental is not None and (not re.fullmatch(r"[a-z]", transcendental)
                                       or transcendental == "r"):
        raise FieldError("transcendental name must be a single lowercase letter other than r")
    desc = FieldDescriptor(coeffs, int(root_index), transcendental)
    if not 0 <= desc.root_index < desc.real_root_count:
        raise FieldError(
            f"root index {root_index} out of range: {desc.real_root_count} real roots")
    return desc


def rationals(var: str | None = None) -> FieldDescriptor:
    return make_field((-1, 1), 0, var)


# ---------------------------------------------------------------------------
# polynomials in t over Q(r): tuples of coefficients, no trailing zeros

def _pstrip(ops, p):
    p = list(p)
    while p and ops.is_zero(p[-1]):
        p.pop()
    return tuple(p)


def _padd(ops, p, q):
    if len(p) < len(q):
        p, q = q, p
    out = list(p)
    for i, c in enumerate(q):
        out[i] = ops.add(out[i], c)
    return _pstrip(ops, out)


def _psub(ops, p, q):
    out = list(p) + [ops.zero] * (len(q) - len(p))
    for i, c in enumerate(q):
        out[i] = ops.sub(out[i], c)
    return _pstrip(ops, out)


def _pmul(ops, p, q):
    if not p or not q:
        return ()
    if len(p) == 1 and len(q) == 1:
        return _pstrip(ops, (ops.mul(p[0], q[0]),))
    out = [ops.zero] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if ops.is_zero(a):
            continue
        for j, b in enumerate(q):
            if not ops.is_zero(b):
                out[i + j] = ops.add(out[i + j], ops.mul(a, b))
    return _pstrip(ops, out)


def _pscale(ops, p, c):
    return _pstrip(ops, (ops.mul(a, c) for a in p))


def _pdivmod(ops, p, q):
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = ops.inv(q[-1])
    p = list(p)
    quot = [ops.zero] * max(len(p) - len(q) + 1, 0)
    while len(p) >= len(q) and p:
        c = ops.mul(p[-1], inv_lead)
        k = len(p) - len(q)
        quot[k] = c
        for j, b in enumerate(q):
            p[k + j] = ops.sub(p[k + j], ops.mul(c, b))
        p = list(_pstrip(ops, p))
    return _pstrip(ops, quot), tuple(p)


def _pmonic_gcd(ops, p, q):
    while q:
        p, q = q, _pdivmod(ops, p, q)[1]
    if not p:
        return ()
    return _pscale(ops, p, ops.inv(p[-1]))


def _peval(ops, p, x):
    acc = ops.zero
    for c in reversed(p):
        acc = ops.add(ops.mul(acc, x), c)
    return acc


# ---------------------------------------------------------------------------
# field elements

class FieldElement:
    """num(t)/den(t) with coefficients in Q(r), canonical after construction."""

    __slots__ = ("field", "num", "den", "_hash")

    def __init__(self, field, num, den=None, *, canonical=False):
        self.field = field
        ops = field.ops
        num = _pstrip(ops, num)
        if den is None:
            self.num, self.den = num, (ops.one,)
        elif canonical:
            self.num, self.den = num, den
        else:
            self.num, self.den = _canonical(ops, num, _pstrip(ops, den))
        self._hash = None

    # -- construction helpers
    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldError("descriptor mismatch between operands")
            return other
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, (self.field.ops.from_rational(other),))
        return NotImplemented

    def _is_poly(self):
        return len(self.den) == 1 and self.field.ops.is_one(self.den[0])

    # -- arithmetic
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        ops = self.field.ops
        if self._is_poly() and other._is_poly():
            return FieldElement(self.field, _padd(ops, self.num, other.num))
        num = _padd(ops, _pmul(ops, self.num, other.den), _pmul(ops, other.num, self.den))
        return FieldElement(self.field, num, _pmul(ops, self.den, other.den))

    __radd__ = __add__

    def __neg__(self):
        ops = self.field.ops
        return FieldElement(self.field, tuple(ops.neg(c) for c in self.num), self.den,
                            canonical=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        ops = self.field.ops
        if self._is_poly() and other._is_poly():
            return FieldElement(self.field, _pmul(ops, self.num, other.num))
        return FieldElement(self.field, _pmul(ops, self.num, other.num),
                            _pmul(ops, self.den, other.den))

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise ZeroDivisionError("division by zero field element")
        return FieldElement(self.field, self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        out = self.field.one()
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- comparison / hashing
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self._coerce(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.field == other.field and self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field, self.num, self.den))
        return self._hash

    def is_zero(self):
        return not self.num

    def __bool__(self):
        return bool(self.num)

    # -- structure
    @property
    def is_constant(self):
        """No dependence on the transcendental variable."""
        return len(self.num) <= 1 and len(self.den) == 1

    def constant(self):
        """The Q(r) coefficient of a constant element."""
        if not self.is_constant:
            raise FieldError("element depends on the transcendental variable")
        return self.num[0] if self.num else self.field.ops.zero

    def rational_value(self):
        """Fraction if the element is rational, else None."""
        if not self.is_constant:
            return None
        return self.field.ops.rational_value(self.constant())

    def substitute(self, t_value):
        """Specialize the transcendental variable to ``t_value``."""
        if self.is_constant:
            return self
        ops = self.field.ops
        if isinstance(t_value, FieldElement):
            tv = t_value.constant()
        else:
            tv = ops.from_rational(t_value)
        den = _peval(ops, self.den, tv)
        if ops.is_zero(den):
            raise ZeroDivisionError(f"evaluation at a pole (t = {t_value})")
        num = _peval(ops, self.num, tv)
        return FieldElement(self.field, (ops.mul(num, ops.inv(den)),))

    def coefficients(self, which="num"):
        """Coefficients (as constant FieldElements) of the numerator or denominator."""
        poly = self.num if which == "num" else self.den
        return [FieldElement(self.field, (c,)) for c in poly]

    def __repr__(self):
        return f"FieldElement({self.to_string()!r})"

    def __str__(self):
        return self.to_string()

    def to_string(self):
        return format_element(self)


def _canonical(ops, num, den):
    if not den:
        raise ZeroDivisionError("zero denominator")
    if not num:
        return (), (ops.one,)
    if len(den) > 1:
        g = _pmonic_gcd(ops, num, den)
        if len(g) > 1:
            num = _pdivmod(ops, num, g)[0]
            den = _pdivmod(ops, den, g)[0]
    lead = den[-1]
    if not ops.is_one(lead):
        inv = ops.inv(lead)
        num = _pscale(ops, num, inv)
        den = _pscale(ops, den, inv)
    return num, den


# ---------------------------------------------------------------------------
# the operations

def field_arithmetic(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    if a.field != b.field:
        raise FieldError("descriptor mismatch")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


def _lipschitz_enclosure(field, coeffs, bits):
    """Enclosure of sum coeffs[i] * r**i using an interval of width 2**-bits for r."""
    iv = field.root_interval(bits)
    if not coeffs:
        return RealInterval(Fraction(0), Fraction(0))
    m = iv.mid
    val = _qeval(coeffs, m)
    if iv.width == 0:
        return RealInterval(val, val)
    big = max(abs(iv.lo), abs(iv.hi))
    lip = sum(i * abs(c) * big ** (i - 1) for i, c in enumerate(coeffs) if i)
    rad = lip * iv.width / 2
    return RealInterval(val - rad, val + rad)


def _round_out(x: RealInterval, bits):
    s = 2 ** bits
    lo = Fraction((x.lo * s).__floor__(), s)
    hi = Fraction(-((-x.hi * s).__floor__()), s)
    return RealInterval(lo, hi)


def embed_real(a: FieldElement, t_value: Rational | None = None,
               precision: Rational = Fraction(1, 10 ** 12)) -> RealInterval:
    """Interval of width <= ``precision`` containing the real value of ``a``
    under the descriptor's selected root (and t = ``t_value`` if given)."""
    if not a.is_constant:
        if t_value is None:
            raise FieldError("element depends on t: supply t_value")
        a = a.substitute(t_value)
    precision = Fraction(precision)
    if precision <= 0:
        raise ValueError("precision must be positive")
    coeffs = a.field.ops.to_poly(a.constant())
    if len(coeffs) <= 1:
        v = coeffs[0] if coeffs else Fraction(0)
        return RealInterval(v, v)
    bits = 8
    while bits <= MAX_BITS:
        enc = _lipschitz_enclosure(a.field, coeffs, bits)
        if enc.width <= precision / 2:
            out = _round_out(enc, max(bits, precision.denominator.bit_length() + 2))
            if out.width <= precision:
                return out
            return enc
        bits *= 2
    raise PrecisionError("enclosure did not reach requested precision")


def sign(a: FieldElement, t_value: Rational | None = None) -> int:
    """Exact sign of the real value of ``a`` (certified by interval refinement)."""
    if not a.is_constant:
        if t_value is None:
            raise FieldError("element depends on t: supply t_value")
        a = a.substitute(t_value)
    if a.is_zero():
        return 0
    coeffs = a.field.ops.to_poly(a.constant())
    if len(coeffs) == 1:
        return 1 if coeffs[0] > 0 else -1
    bits = 16
    while bits <= MAX_BITS:
        enc = _lipschitz_enclosure(a.field, coeffs, bits)
        if enc.lo > 0:
            return 1
        if enc.hi < 0:
            return -1
        bits *= 2
    raise PrecisionError("sign undecided at maximum refinement")


def apply_embedding(a: FieldElement, new_root_index: int) -> FieldElement:
    """Reinterpret ``a`` over the same minimal polynomial with another real root.

    The polynomial representation is unchanged; only the embedding moves, which
    is the field isomorphism r -> r' onto the conjugate field.
    """
    field = a.field.with_root(new_root_index)
    return FieldElement(field, a.num, a.den, canonical=True)


def poly_profile(a: FieldElement):
    """(degree of numerator in t, leading coefficient, degree of denominator)."""
    if not a.num:
        return (0, a.field.zero(), len(a.den) - 1)
    lead = FieldElement(a.field, (a.num[-1],))
    return (len(a.num) - 1, lead, len(a.den) - 1)


# ---------------------------------------------------------------------------
# literal grammar: + - * / ^ ( ) integers, r for the algebraic generator, var

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()])|(\S))")


def _tokenize(text):
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        pos = m.end()
        num, name, op, bad = m.groups()
        if bad is not None:
            if bad == ".":
                raise ParseError("floating-point literals are not accepted in exact contexts", bad)
            raise ParseError(f"unexpected character {bad!r}", bad)
        if num is not None:
            if pos < len(text) and text[pos] == ".":
                raise ParseError("floating-point literals are not accepted in exact contexts",
                                 num + ".")
            tokens.append(("num", num))
        elif name is not None:
            tokens.append(("name", name))
        else:
            tokens.append(("op", "^" if op == "**" else op))
    return tokens


class _Parser:
    def __init__(self, text, field):
        self.tokens = _tokenize(text)
        self.i = 0
        self.field = field

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def parse(self):
        if not self.tokens:
            raise ParseError("empty field-element literal", "")
        val = self.expr()
        if self.i != len(self.tokens):
            raise ParseError(f"unexpected token {self.peek()[1]!r}", self.peek()[1])
        return val

    def expr(self):
        val = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self):
        val = self.factor()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            rhs = self.factor()
            val = val * rhs if op == "*" else val / rhs
        return val

    def factor(self):
        if self.peek() == ("op", "-"):
            self.take()
            return -self.factor()
        if self.peek() == ("op", "+"):
            self.take()
            return self.factor()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            neg = False
            if self.peek() == ("op", "-"):
                self.take()
                neg = True
            kind, tok = self.take()
            if kind != "num":
                raise ParseError(f"exponent must be an integer, got {tok!r}", tok)
            k = int(tok)
            return base ** (-k if neg else k)
        return base

    def atom(self):
        kind, tok = self.take()
        if kind == "num":
            return self.field.element(int(tok))
        if kind == "name":
            if tok == "r":
                return self.field.gen
            if self.field.var and tok == self.field.var:
                return self.field.t
            raise ParseError(f"unknown symbol {tok!r}", tok)
        if (kind, tok) == ("op", "("):
            val = self.expr()
            if self.take() != ("op", ")"):
                raise ParseError("missing closing parenthesis", ")")
            return val
        if kind is None:
            raise ParseError("unexpected end of literal", "")
        raise ParseError(f"unexpected token {tok!r}", tok)


def parse_element(text: str, field: FieldDescriptor) -> FieldElement:
    """Parse an exact field-element literal such as ``"(2 - r^2)/(t + 1)"``."""
    if not isinstance(text, str):
        raise ParseError(f"expected a string literal, got {type(text).__name__}", repr(text))
    try:
        return _Parser(text, field).parse()
    except ZeroDivisionError as exc:
        raise ParseError(f"division by zero in literal {text!r}", "/") from exc


def _format_rational(q):
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _format_alg(field, c):
    coeffs = field.ops.to_poly(c)
    if field.degree == 1:
        return _format_rational(coeffs[0]) if coeffs else "0", 1
    terms = []
    for i, q in enumerate(coeffs):
        if not q:
            continue
        mon = "" if i == 0 else ("r" if i == 1 else f"r^{i}")
        if not mon:
            terms.append(_format_rational(q))
        elif q == 1:
            terms.append(mon)
        elif q == -1:
            terms.append("-" + mon)
        else:
            terms.append(f"{_format_rational(q)}*{mon}")
    if not terms:
        return "0", 1
    return " + ".join(terms).replace("+ -", "- "), len(terms)


def _format_poly(field, poly):
    if not poly:
        return "0"
    terms = []
    for j, c in enumerate(poly):
        if field.ops.is_zero(c):
            continue
        s, nterms = _format_alg(field, c)
        if j == 0:
            terms.append(s)
            continue
        mon = field.var if j == 1 else f"{field.var}^{j}"
        if s == "1":
            terms.append(mon)
        elif s == "-1":
            terms.append("-" + mon)
        elif nterms > 1:
            terms.append(f"({s})*{mon}")
        else:
            terms.append(f"{s}*{mon}")
    return " + ".join(terms).replace("+ -", "- ")


def format_element(a: FieldElement) -> str:
    num = _format_poly(a.field, a.num)
    if a._is_poly():
        return num
    return f"({num})/({_format_poly(a.field, a.den)})"


def elements(field: FieldDescriptor, values: Iterable) -> list:
    return [field.element(v) for v in values]
