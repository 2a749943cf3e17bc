from fractions import Fraction

import mpmath
import pytest

from repcert.fields import FieldError, embed_real, rationals, sign
from repcert.galois import (
    G0_WORD,
    H0_WORD,
    SIGMA_INDEX,
    build_quadrilateral,
    fixed_point,
    kernel_representation,
    quotient_membership,
    rotation_about,
    section4_demo,
    twist,
)
from repcert.moebius import ProjMatrix
from repcert.obstruction import euler_number_cellular


@pytest.fixture(scope="module")
def data():
    return build_quadrilateral()


@pytest.fixture(scope="module")
def demo(data):
    return section4_demo(data)


def _hyperbolic_distance(p, q):
    """Oracle: distance in the upper half plane from points (x, y) as floats."""
    (x1, y1), (x2, y2) = p, q
    return float(mpmath.acosh(1 + ((x1 - x2) ** 2 + (y1 - y2) ** 2) / (2 * y1 * y2)))


def _point(m):
    re, n2 = (float(embed_real(v).mid) for v in fixed_point(m))
    return re, (n2 - re * re) ** 0.5


def test_rotation_about_i():
    Q = rationals()
    m = rotation_about(Q.zero(), 1)
    assert m.to_json() == [["0", "-1"], ["1", "0"]]
    assert (m @ m).is_scalar()
    m = rotation_about(Q.element(2), 3)
    assert fixed_point(m) == (Q.element(2), Q.element(13))


def test_validation(data):
    assert all(data.validate().values())
    assert not all(data.swapped().validate().values())


def test_geometry_from_fixed_points(data):
    B, C, D = (_point(m) for m in (data.x, data.y, data.z))
    c = 2 ** 0.5
    assert abs(mpmath.cosh(_hyperbolic_distance(B, C)) ** 2 - c) < 1e-9
    # the angle at C is a right angle: Pythagoras in hyperbolic form
    bd = mpmath.cosh(_hyperbolic_distance(B, D))
    assert abs(bd - mpmath.cosh(_hyperbolic_distance(B, C)) * mpmath.cosh(_hyperbolic_distance(C, D))) < 1e-9


def test_traces(data, demo):
    r = data.field.gen
    sqrt2 = 2 - r * r
    assert (data.y @ data.z).square_trace() == 3 + sqrt2
    assert (data.y @ data.x).square_trace() == 2 * (2 * sqrt2 - 1)
    assert demo["trace_h_is_3_plus_sqrt2"] and demo["trace_h_sigma_is_3_minus_sqrt2"]
    lo, hi = demo["trace_h_sigma_interval"]
    assert lo <= 3 - 2 ** 0.5 <= hi and hi - lo <= 1e-6
    assert demo["class_h"] == "hyperbolic" and demo["class_h_sigma"] == "elliptic"


def test_quotient_memberships():
    assert not quotient_membership(G0_WORD)["in_kernel"]
    assert quotient_membership(G0_WORD * 3)["in_kernel"]
    assert quotient_membership(H0_WORD)["in_kernel"]
    assert quotient_membership(())["in_kernel"]


def test_euler_numbers(demo):
    assert demo["euler"] == 2
    assert demo["euler_sigma"] == 0
    assert demo["w2"] == 0 and demo["w2_sigma"] == 0
    assert demo["parity_ok"]
    assert demo["conventions_validating"] == {"primary": True, "swapped": False}
    assert demo["cover"]["F"] == 22 and demo["cover"]["genus"] == 2


def test_twist_twice_is_identity(data):
    back = twist(twist(data, SIGMA_INDEX), data.field.root_index)
    assert back.x.same_entries(data.x) and back.z.same_entries(data.z)
    tw = data.twist(SIGMA_INDEX)
    assert sign(tw.c) < 0        # sigma sends sqrt(2) to -sqrt(2)
    assert all(tw.validate(check_positive=False)[k] for k in ("involutions", "xyz_cubed_scalar"))


def test_cell_boundaries_scalar_before_and_after(data):
    cover, edges = kernel_representation(data)
    for imgs in (edges, twist(edges, SIGMA_INDEX)):
        inv = [m.inverse() for m in imgs]
        for cell in cover.cells:
            m = ProjMatrix.identity(imgs[0].field)
            for e, s in cell:
                m = m @ (imgs[e] if s > 0 else inv[e])
            assert m.is_scalar()


def test_rational_quadrilateral():
    Q = rationals()
    d = build_quadrilateral(Q.element(Fraction(9, 8)), None, Q)
    assert d.root == Fraction(3, 8)
    assert all(d.validate().values())
    cover, edges = kernel_representation(d)
    assert euler_number_cellular(cover, edges) == 2


def test_quadrilateral_errors():
    Q = rationals()
    with pytest.raises(ValueError):
        build_quadrilateral(Q.element(Fraction(1, 2)), None, Q)
    with pytest.raises(FieldError):
        build_quadrilateral(Q.element(2), None, Q)       # sqrt(2) not rational
    with pytest.raises(FieldError):
        build_quadrilateral(Q.element(Fraction(9, 8)), Q.element(Fraction(-3, 8)), Q)
