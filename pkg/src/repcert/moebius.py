"""Projective 2x2 matrices, isometry types, and lifts of their boundary action.

The boundary circle of the upper half plane is parametrized by an angle
``theta`` with projective coordinate ``x = tan(theta)``, period pi.  A point
of the universal cover is stored exactly as ``LiftPoint(sheet, x)`` meaning
``theta = sheet * pi + phi(x)`` with ``phi(x)`` in ``[0, pi)``.  Lifted maps
act on these points using only exact sign decisions in the entry field, so
every translation number is an exact integer.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Mapping, Sequence

import mpmath

from .fields import (
    FieldDescriptor,
    FieldElement,
    FieldError,
    RealInterval,
    apply_embedding,
    embed_real,
    parse_element,
    sign,
)

# Sign relating the exact translation integer k of a lifted relator to the
# reported Euler number.  Pinned so that the genus-2 Fuchsian kernel group of
# the quadrilateral example has e = +2 (see obstruction.CONVENTION).
EULER_SIGN = -1


class NotIdentityError(ValueError):
    """A lifted word was expected to project to the identity of PSL2."""


@dataclass(frozen=True, eq=False)
class ProjMatrix:
    """[[a, b], [c, d]] over a field, considered up to nonzero scalars."""

    a: FieldElement
    b: FieldElement
    c: FieldElement
    d: FieldElement

    @classmethod
    def from_entries(cls, field: FieldDescriptor, rows) -> "ProjMatrix":
        (a, b), (c, d) = rows
        return cls(field.element(a), field.element(b), field.element(c), field.element(d))

    @classmethod
    def identity(cls, field: FieldDescriptor) -> "ProjMatrix":
        return cls(field.one(), field.zero(), field.zero(), field.one())

    @property
    def field(self):
        return self.a.field

    @property
    def entries(self):
        return (self.a, self.b, self.c, self.d)

    @property
    def det(self):
        return self.a * self.d - self.b * self.c

    @property
    def trace(self):
        return self.a + self.d

    @property
    def is_sl2(self):
        return self.det == 1

    def __matmul__(self, o):
        return ProjMatrix(self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
                          self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d)

    __mul__ = __matmul__

    def adjugate(self):
        return ProjMatrix(self.d, -self.b, -self.c, self.a)

    def inverse(self):
        det = self.det
        if det.is_zero():
            raise ZeroDivisionError("singular matrix")
        if det == 1:
            return self.adjugate()
        inv = det.inverse()
        return ProjMatrix(self.d * inv, -self.b * inv, -self.c * inv, self.a * inv)

    def scale(self, s):
        return ProjMatrix(self.a * s, self.b * s, self.c * s, self.d * s)

    def __neg__(self):
        return ProjMatrix(-self.a, -self.b, -self.c, -self.d)

    def is_scalar(self):
        return self.b.is_zero() and self.c.is_zero() and self.a == self.d and not self.a.is_zero()

    def scalar_value(self):
        if not self.is_scalar():
            raise NotIdentityError("matrix is not projectively the identity")
        return self.a

    def same_entries(self, other):
        return self.entries == other.entries

    def __eq__(self, other):
        if not isinstance(other, ProjMatrix):
            return NotImplemented
        p, q = self.entries, other.entries
        return all((p[i] * q[j] - p[j] * q[i]).is_zero()
                   for i in range(4) for j in range(i + 1, 4))

    def __hash__(self):
        for e in self.entries:
            if not e.is_zero():
                inv = e.inverse()
                return hash(tuple(x * inv for x in self.entries))
        return 0

    def trace_squared_over_det(self):
        """tr^2/det, the scale-invariant conjugacy datum (|tr|^2 after SL2 normalization)."""
        return self.trace * self.trace / self.det

    def square_trace(self):
        """Trace of the SL2 normalization of self**2 (sign-unambiguous)."""
        return self.trace_squared_over_det() - 2

    def specialize(self, t_value):
        if t_value is None:
            return self
        return ProjMatrix(*(e.substitute(t_value) for e in self.entries))

    def apply_embedding(self, root_index):
        return ProjMatrix(*(apply_embedding(e, root_index) for e in self.entries))

    def act(self, x):
        """Moebius action on a boundary point (None is infinity)."""
        if x is None:
            return None if self.c.is_zero() else self.a / self.c
        den = self.c * x + self.d
        if den.is_zero():
            return None
        return (self.a * x + self.b) / den

    def to_json(self):
        return [[self.a.to_string(), self.b.to_string()], [self.c.to_string(), self.d.to_string()]]

    @classmethod
    def from_json(cls, rows, field: FieldDescriptor):
        return cls(*(parse_element(s, field) for row in rows for s in row))

    def __repr__(self):
        return f"ProjMatrix({self.to_json()})"


def word_evaluate(images: Mapping[int, ProjMatrix], word: Sequence[int],
                  field: FieldDescriptor | None = None) -> ProjMatrix:
    """Exact product of generator images along ``word`` (letters +-i)."""
    if field is None:
        field = next(iter(images.values())).field
    inverses = {}
    out = ProjMatrix.identity(field)
    for letter in word:
        if letter > 0:
            m = images[letter]
        else:
            m = inverses.get(-letter)
            if m is None:
                m = inverses[-letter] = images[-letter].inverse()
        out = out @ m
    return out


# ---------------------------------------------------------------------------
# classification

@dataclass(frozen=True)
class IsometryClass:
    tag: str
    trace_squared: FieldElement | None = None
    abs_trace: RealInterval | None = None

    def to_json(self):
        d = {"tag": self.tag}
        if self.trace_squared is not None:
            d["trace_squared"] = self.trace_squared.to_string()
        if self.abs_trace is not None:
            d["abs_trace"] = [float(self.abs_trace.lo), float(self.abs_trace.hi)]
        return d


def _sqrt_interval(iv: RealInterval, bits=64):
    s = 2 ** bits
    lo = max(iv.lo, 0)
    lo_r = Fraction(isqrt((lo * s * s).__floor__()), s)
    hi_v = (iv.hi * s * s).__ceil__()
    r = isqrt(hi_v)
    if r * r < hi_v:
        r += 1
    return RealInterval(lo_r, Fraction(r, s))


def classify(m: ProjMatrix, t_value=None, precision=Fraction(1, 10 ** 9)) -> IsometryClass:
    """Identity / elliptic / parabolic / hyperbolic, decided exactly."""
    m = m.specialize(t_value)
    if m.is_scalar():
        return IsometryClass("identity")
    det = m.det
    if sign(det) <= 0:
        raise FieldError("matrix does not preserve orientation (det <= 0)")
    tr2 = m.trace_squared_over_det()
    s = sign(tr2 - 4)
    abs_tr = _sqrt_interval(embed_real(tr2, precision=precision))
    tag = {0: "parabolic", -1: "elliptic", 1: "hyperbolic"}[s]
    return IsometryClass(tag, tr2, abs_tr)


# ---------------------------------------------------------------------------
# lifts to the universal cover of the circle

@dataclass(frozen=True)
class LiftPoint:
    """theta = sheet*pi + phi(x), phi(x) in [0, pi) with tan(phi) = x; x None is pi/2."""

    sheet: int
    x: FieldElement | None

    def shifted(self, k):
        return LiftPoint(self.sheet + k, self.x)

    def angle(self, dps=30):
        """Numeric value of theta (display and sampling only)."""
        with mpmath.workdps(dps):
            if self.x is None:
                phi = mpmath.pi / 2
            else:
                iv = embed_real(self.x, precision=Fraction(1, 10 ** dps))
                v = mpmath.mpf(iv.mid.numerator) / iv.mid.denominator
                phi = mpmath.atan(v)
                if phi < 0:
                    phi += mpmath.pi
            return self.sheet * mpmath.pi + phi


def _region(x):
    if x is None:
        return 1
    return 0 if sign(x) >= 0 else 2


def _key_less(x, y):
    """phi(x) < phi(y) for boundary points x, y."""
    rx, ry = _region(x), _region(y)
    if rx != ry:
        return rx < ry
    if rx == 1:
        return False
    return sign(x - y) < 0


def point_less(p: LiftPoint, q: LiftPoint) -> bool:
    if p.sheet != q.sheet:
        return p.sheet < q.sheet
    return _key_less(p.x, q.x)


def point_equal(p: LiftPoint, q: LiftPoint) -> bool:
    if p.sheet != q.sheet:
        return False
    if p.x is None or q.x is None:
        return p.x is None and q.x is None
    return p.x == q.x


def _zero(field):
    return field.zero()


@dataclass(frozen=True)
class LiftedCircleMap:
    """T_{shift*pi} composed with the lift of ``matrix`` fixed by f(0) in [0, pi).

    ``matrix`` must have entries in Q(r) (no free t) and positive determinant.
    """

    matrix: ProjMatrix
    shift: int = 0

    def _base(self, p: LiftPoint) -> LiftPoint:
        m = self.matrix
        y0 = m.act(_zero(m.field))
        y = m.act(p.x)
        bump = 1 if _key_less(y, y0) else 0
        return LiftPoint(p.sheet + bump, y)

    def __call__(self, p: LiftPoint) -> LiftPoint:
        return self._base(p).shifted(self.shift)

    def offset(self, k):
        """Compose with the deck translation by k*pi."""
        return LiftedCircleMap(self.matrix, self.shift + k)

    def inverse(self) -> "LiftedCircleMap":
        m = self.matrix
        y0 = m.act(_zero(m.field))
        j = 0 if (y0 is not None and y0.is_zero()) else -1
        return LiftedCircleMap(m.inverse(), j - self.shift)

    def __matmul__(self, other: "LiftedCircleMap") -> "LiftedCircleMap":
        return lift_compose(self, other)


def _check_orientation(m: ProjMatrix):
    if sign(m.det) <= 0:
        raise FieldError("cannot lift an orientation-reversing matrix (det <= 0)")


def lift(m: ProjMatrix, t_value=None, anchor: LiftPoint | None = None) -> LiftedCircleMap:
    """The lift f of m with f(anchor) in [anchor, anchor + pi)."""
    m = m.specialize(t_value)
    for e in m.entries:
        if not e.is_constant:
            raise FieldError("matrix depends on t: supply t_value")
    _check_orientation(m)
    f = LiftedCircleMap(m, 0)
    if anchor is None:
        return f
    q = f(anchor)
    j = anchor.sheet - q.sheet + (1 if _key_less(q.x, anchor.x) else 0)
    return f.offset(j)


def lift_compose(f: LiftedCircleMap, g: LiftedCircleMap) -> LiftedCircleMap:
    """f o g, carrying its offset (not re-normalized)."""
    zero = LiftPoint(0, _zero(g.matrix.field))
    c = f._base(g._base(zero)).sheet
    return LiftedCircleMap(f.matrix @ g.matrix, f.shift + g.shift + c)


def translation_number(f: LiftedCircleMap) -> int:
    """The integer k with f = translation by k*pi; f must project to the identity."""
    if not f.matrix.is_scalar():
        raise NotIdentityError("lifted map does not project to the identity in PSL2")
    return f.shift


def compose_word(lifts: Mapping[int, LiftedCircleMap], word: Sequence[int],
                 field: FieldDescriptor) -> LiftedCircleMap:
    """Lifted image of a word; inverse letters use functional inverses."""
    inverses = {}
    out = LiftedCircleMap(ProjMatrix.identity(field), 0)
    for letter in word:
        if letter > 0:
            g = lifts[letter]
        else:
            g = inverses.get(-letter)
            if g is None:
                g = inverses[-letter] = lifts[-letter].inverse()
        out = lift_compose(out, g)
    return out


def deck(field: FieldDescriptor, k: int) -> LiftedCircleMap:
    return LiftedCircleMap(ProjMatrix.identity(field), k)
