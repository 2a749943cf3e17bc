"""A Fuchsian genus-2 group whose Galois twist has Euler number 0.

F = <x, y, z | x^2, y^2, z^2, (xyz)^3> acts by pi-rotations about the
vertices B, C, D of a hyperbolic quadrilateral ABCD with right angles at B,
C, D and angle pi/3 at A, where cosh^2 d(B, C) = c.  The kernel Gamma_0 of
F -> Z_3 x| (Z_2 + Z_2) is a closed genus-2 surface group.  For c = sqrt(2)
every matrix entry lies in K = Q(sqrt(2 - sqrt(2))); the embedding sigma with
sigma(sqrt(2)) = -sqrt(2) turns the hyperbolic element (yz)^2 elliptic, so
the twisted representation is not Fuchsian and its Euler number drops to 0.

Coordinates: C and B on the imaginary axis (C = i, B = i e^a), D on the unit
circle, then conjugated by diag(1/sqrt(4c - 3), 1) so the entries lie in
Q(c, sqrt(c^2 - c)).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .fields import FieldDescriptor, FieldElement, FieldError, embed_real, make_field, sign
from .moebius import ProjMatrix, classify, word_evaluate
from .obstruction import (
    CONVENTION,
    cover_edge_images,
    euler_number_cellular,
    stiefel_whitney_cellular,
)
from .words import (
    QUADRILATERAL_IMAGES,
    QUADRILATERAL_PRESENTATION,
    CoverPresentation,
    format_word,
    schreier_cover,
    semidirect_z3_klein,
)

MINPOLY = (2, 0, -4, 0, 1)  # r^4 - 4 r^2 + 2, r = sqrt(2 - sqrt(2))
ROOT_INDEX = 2              # sorted real roots: -1.848, -0.765, 0.765, 1.848
SIGMA_INDEX = 3             # r -> sqrt(2 + sqrt(2)), hence sqrt(2) -> -sqrt(2)

G0_WORD = (2, 1, 2, 1)      # (yx)^2
H0_WORD = (2, 3, 2, 3)      # (yz)^2


def default_field() -> FieldDescriptor:
    return make_field(MINPOLY, ROOT_INDEX)


def rotation_about(p, q) -> ProjMatrix:
    """The pi-rotation about p + q i: [[p/q, -(p^2+q^2)/q], [1/q, -p/q]]."""
    if not isinstance(p, FieldElement):
        raise TypeError("p must be a field element")
    q = p.field.element(q) if not isinstance(q, FieldElement) else q
    return ProjMatrix(p / q, -(p * p + q * q) / q, q.inverse(), -p / q)


def fixed_point(m: ProjMatrix):
    """(Re w, |w|^2) of the fixed point in the upper half plane of a trace-zero matrix."""
    if not m.trace.is_zero():
        raise ValueError("not a pi-rotation")
    return m.a / m.c, -m.b / m.c


@dataclass(frozen=True)
class QuadrilateralData:
    c: FieldElement
    root: FieldElement
    x: ProjMatrix
    y: ProjMatrix
    z: ProjMatrix
    convention: str = "primary"

    @property
    def field(self):
        return self.c.field

    @property
    def images(self) -> dict:
        return {1: self.x, 2: self.y, 3: self.z}

    @property
    def lam(self) -> FieldElement:
        """lambda = 2c - 1 - 2 sqrt(c^2 - c)."""
        return 2 * self.c - 1 - 2 * self.root

    def evaluate(self, word):
        return word_evaluate(self.images, word, self.field)

    def twist(self, root_index: int) -> "QuadrilateralData":
        ap = lambda e: FieldElement(e.field.with_root(root_index), e.num, e.den, canonical=True)
        return QuadrilateralData(ap(self.c), ap(self.root),
                                 *(m.apply_embedding(root_index) for m in (self.x, self.y, self.z)),
                                 convention=self.convention)

    def swapped(self) -> "QuadrilateralData":
        """The other labelling: the side CD, not BC, carries cosh^2 = c."""
        return QuadrilateralData(self.c, self.root, self.z, self.y, self.x, "swapped")

    def validate(self, check_positive=True) -> dict:
        """Exact relations and trace identities; each value is a bool."""
        c = self.c
        X, Y, Z = self.x, self.y, self.z
        out = {}
        out["trace_zero"] = all(m.trace.is_zero() for m in (X, Y, Z))
        if check_positive:
            out["orientation_preserving"] = all(sign(m.det) > 0 for m in (X, Y, Z))
        out["involutions"] = all((m @ m).is_scalar() for m in (X, Y, Z))
        xyz = X @ Y @ Z
        out["xyz_cubed_scalar"] = (xyz @ xyz @ xyz).is_scalar()
        out["xyz_order_3"] = xyz.trace_squared_over_det() == 1
        yx2 = self.evaluate(G0_WORD)
        lam = self.lam
        diag = ProjMatrix(lam, c.field.zero(), c.field.zero(), lam.inverse())
        out["g0_diagonal_lambda"] = yx2 == diag or yx2 == diag.inverse()
        out["g0_trace"] = (Y @ X).square_trace() == 2 * (2 * c - 1)
        out["h0_trace"] = (Y @ Z).square_trace() == 1 + c / (c - 1)
        out["right_angle_at_C"] = (X @ Z).trace_squared_over_det() == c * (4 * c - 3) / (c - 1)
        return out

    def to_json(self):
        return {"convention": self.convention, "c": self.c.to_string(),
                "sqrt_c2_minus_c": self.root.to_string(), "lambda": self.lam.to_string(),
                "x": self.x.to_json(), "y": self.y.to_json(), "z": self.z.to_json(),
                "fixed_points": {n: [v.to_string() for v in fixed_point(m)]
                                 for n, m in (("B", self.x), ("C", self.y), ("D", self.z))}}


def build_quadrilateral(c=None, root=None, field: FieldDescriptor | None = None) -> QuadrilateralData:
    """Rotation matrices for the quadrilateral with cosh^2 d(B, C) = c.

    ``root`` is the positive square root of c^2 - c and must lie in the field.
    Defaults: c = sqrt(2) = 2 - r^2 and root = r in K.
    """
    if field is None:
        field = c.field if isinstance(c, FieldElement) else default_field()
    if c is None:
        if field.degree != 4 or tuple(field.minpoly) != MINPOLY:
            raise ValueError("default c = sqrt(2) needs the field Q(sqrt(2 - sqrt(2)))")
        c = 2 - field.gen ** 2
        root = field.gen if root is None else root
    c = field.element(c) if not isinstance(c, FieldElement) else c
    if sign(c - 1) <= 0:
        raise ValueError("c must exceed 1 for a hyperbolic quadrilateral")
    if root is None:
        q = (c * c - c).rational_value()
        from .goldman import _rational_sqrt
        s = _rational_sqrt(q) if q is not None else None
        if s is None:
            raise FieldError("sqrt(c^2 - c) is not in the field; supply it explicitly")
        root = field.element(s)
    root = field.element(root) if not isinstance(root, FieldElement) else root
    if not (root * root == c * c - c) or sign(root) <= 0:
        raise FieldError("root is not the positive square root of c^2 - c")
    E = 2 * c - 1 + 2 * root   # e^{2 d(B,C)}
    R = 4 * c - 3
    zero, one = field.zero(), field.one()
    X = ProjMatrix(zero, -E, R, zero)
    Y = ProjMatrix(zero, -one, R, zero)
    Z = ProjMatrix(one, -one, R, -one)
    return QuadrilateralData(c, root, X, Y, Z)


def kernel_representation(data: QuadrilateralData):
    """The cover for Gamma_0 and the matrices of its edge (Schreier) words."""
    cover = schreier_cover(QUADRILATERAL_PRESENTATION, semidirect_z3_klein(), QUADRILATERAL_IMAGES)
    if cover.euler_characteristic != -2 or not cover.is_closed_surface():
        raise AssertionError("kernel cover is not a closed genus-2 surface")
    return cover, cover_edge_images(cover, data.images)


def twist(images, root_index: int = SIGMA_INDEX):
    """Apply the embedding r -> (root number ``root_index``) entrywise."""
    if isinstance(images, QuadrilateralData):
        return images.twist(root_index)
    if isinstance(images, dict):
        return {k: m.apply_embedding(root_index) for k, m in images.items()}
    return [m.apply_embedding(root_index) for m in images]


def quotient_membership(word) -> dict:
    q = semidirect_z3_klein()
    img = q.evaluate(QUADRILATERAL_IMAGES, word)
    return {"word": format_word(word), "image": [img[0], list(img[1])],
            "in_kernel": img == q.identity}


def _interval_json(iv):
    return [float(iv.lo), float(iv.hi)]


def section4_demo(data: QuadrilateralData | None = None, sigma_index: int = SIGMA_INDEX,
                  precision=Fraction(1, 10 ** 6)) -> dict:
    """Traces, classifications, Euler numbers and w2 before and after the twist."""
    data = data or build_quadrilateral()
    field = data.field
    checks = data.validate()
    swapped = data.swapped().validate()
    conventions = {"primary": all(checks.values()), "swapped": all(swapped.values())}
    twisted = data.twist(sigma_index)
    tw_checks = twisted.validate(check_positive=False)

    cover, edges = kernel_representation(data)
    tw_edges = twist(edges, sigma_index)
    e = euler_number_cellular(cover, edges)
    e_tw = euler_number_cellular(cover, tw_edges)
    w2 = stiefel_whitney_cellular(cover, edges)
    w2_tw = stiefel_whitney_cellular(cover, tw_edges)

    yz = data.y @ data.z
    tr_h = yz.square_trace()
    tr_h_tw = (twisted.y @ twisted.z).square_trace()
    h = data.evaluate(H0_WORD)
    h_tw = twisted.evaluate(H0_WORD)
    cls = classify(h, precision=precision)
    cls_tw = classify(h_tw, precision=precision)
    sqrt2 = 2 - field.gen ** 2 if field.degree == 4 else None
    report = {
        "field": field.to_json(),
        "sigma_root_index": sigma_index,
        "quadrilateral": data.to_json(),
        "validation": checks,
        "twisted_validation": tw_checks,
        "conventions_validating": conventions,
        "quotient": {
            "group": "Z3 x| (Z2 + Z2)",
            "images": {"x": [1, [1, 0]], "y": [0, [0, 1]], "z": [0, [1, 1]]},
            "g0": quotient_membership(G0_WORD),
            "g0_cubed": quotient_membership(G0_WORD * 3),
            "h0": quotient_membership(H0_WORD),
        },
        "cover": {"V": cover.n_vertices, "E": cover.n_edges, "F": cover.n_cells,
                  "euler_characteristic": cover.euler_characteristic, "genus": cover.genus,
                  "schreier_generators": len(cover.schreier)},
        "trace_h": tr_h.to_string(),
        "trace_h_sigma": tr_h_tw.to_string(),
        "trace_h_interval": _interval_json(embed_real(tr_h, precision=precision)),
        "trace_h_sigma_interval": _interval_json(embed_real(tr_h_tw, precision=precision)),
        "class_h": cls.tag,
        "class_h_sigma": cls_tw.tag,
        "euler": e,
        "euler_sigma": e_tw,
        "w2": w2,
        "w2_sigma": w2_tw,
        "parity_ok": e % 2 == w2 and e_tw % 2 == w2_tw,
        "same_parity_across_twist": (e - e_tw) % 2 == 0,
        "method": "cellular Euler number on the 22-cell kernel cover; w2 from cell scalars",
        "convention": CONVENTION,
    }
    if sqrt2 is not None:
        report["trace_h_is_3_plus_sqrt2"] = tr_h == 3 + sqrt2
        # sqrt(2) inside the twisted field: the positive square root of 2 there
        s = twisted.field.gen ** 2 - 2
        if not (s * s == 2 and sign(s) > 0):
            s = -s
        report["trace_h_sigma_is_3_minus_sqrt2"] = tr_h_tw == 3 - s
    return report
