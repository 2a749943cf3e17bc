import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from repcert.fields import embed_real, rationals
from repcert.goldman import assemble, build_phi_A, build_phi_B
from repcert.moebius import ProjMatrix
from repcert.obstruction import (
    MilnorWoodViolation,
    ObstructionError,
    _check_milnor_wood,
    cover_edge_images,
    euler_number,
    euler_number_cellular,
    obstruction_report,
    stiefel_whitney,
    stiefel_whitney_cellular,
)
from repcert.words import SurfacePresentation, schreier_cover, trivial_group

Q = rationals()
G2 = SurfacePresentation(2)


def floats(m):
    return np.array([[float(embed_real(e).mid) for e in (m.a, m.b)],
                     [float(embed_real(e).mid) for e in (m.c, m.d)]])


def _angle_path(A, theta0, theta1, step=2e-3):
    """Continuous angle of A (sin s, cos s) for s from theta0 to theta1."""
    n = max(2, int(abs(theta1 - theta0) / step) + 1)
    s = np.linspace(theta0, theta1, n)
    v = A @ np.vstack([np.sin(s), np.cos(s)])
    return np.unwrap(np.arctan2(v[0], v[1]), period=np.pi)


class NumLift:
    """Floating-point lift: f(theta) = continuous image angle, pinned by f(0) in [0, pi)."""

    def __init__(self, A, base):
        self.A, self.base = A, base

    @classmethod
    def normalized(cls, A):
        a0 = math.atan2(*(A @ np.array([0.0, 1.0]))) % math.pi
        return cls(A, a0)

    def __call__(self, theta):
        path = _angle_path(self.A, 0.0, theta)
        return self.base + path[-1] - path[0]

    def inverse_at(self, phi):
        """The functional inverse, via the lift of A^-1 pinned so that it undoes f."""
        Ai = np.linalg.inv(self.A)
        g = NumLift.normalized(Ai)
        k = round(-g(self(0.0)) / math.pi)
        return g(phi) + k * math.pi


def numeric_euler(images, word, t):
    """Oracle: numeric lifted relator evaluated at 0, divided by pi, sign -1."""
    mats = {k: floats(m.specialize(t)) for k, m in images.items() if k > 0}
    lifts = {k: NumLift.normalized(A) for k, A in mats.items()}
    theta = 0.0
    for a in reversed(word):
        theta = lifts[a](theta) if a > 0 else lifts[-a].inverse_at(theta)
    return -round(theta / math.pi)


def bent(alpha, beta):
    phi_B = build_phi_B(alpha, beta)
    return assemble(build_phi_A(2, -phi_B.boundary_shift), phi_B)


def test_trivial_rep():
    imgs = {i: ProjMatrix.identity(Q) for i in range(1, 5)}
    assert euler_number(imgs, G2) == 0
    assert stiefel_whitney(imgs, G2) == 0
    rep = obstruction_report(imgs, G2)
    assert rep.milnor_wood_ok and rep.parity_ok


@pytest.mark.parametrize("t", [Fraction(0), Fraction(1), Fraction(5, 7), Fraction(13)])
def test_bent_family_euler_number(family, t):
    e = euler_number(family.images, G2, t)
    assert e == -1
    assert e == numeric_euler(family.images, G2.relator, t)
    assert stiefel_whitney(family.images, G2) == 1


def test_offsets_do_not_matter(family):
    rng = random.Random(2)
    for _ in range(8):
        off = {k: rng.randint(-4, 4) for k in range(1, 5)}
        assert euler_number(family.images, G2, Fraction(2, 3), off) == -1


def test_orientation_reversing_conjugation_flips_sign(family):
    J = ProjMatrix.from_entries(family.field, [[1, 0], [0, -1]])
    flipped = {k: J @ m @ J for k, m in family.images.items()}
    assert euler_number(flipped, G2, 1) == 1
    assert stiefel_whitney(flipped, G2) == 1


def test_other_parameters():
    for a, b in [(5, Fraction(1, 4)), (2, 2), (7, Fraction(1, 8))]:
        fam = bent(a, b)
        for t in (Fraction(0), Fraction(-3, 2)):
            e = euler_number(fam.images, G2, t)
            assert e == numeric_euler(fam.images, G2.relator, t)
            assert e % 2 == stiefel_whitney(fam.images, G2)


@given(st.tuples(*[st.integers(-5, 5)] * 4).filter(lambda v: v[0] * v[3] - v[1] * v[2] > 0),
       st.fractions(-10, 10, max_denominator=6))
@settings(max_examples=25)
def test_conjugation_invariance(family, g, t):
    G = ProjMatrix.from_entries(family.field, [[g[0], g[1]], [g[2], g[3]]])
    Gi = G.inverse()
    conj = {k: G @ m @ Gi for k, m in family.images.items()}
    assert euler_number(conj, G2, t) == -1


def test_cellular_agrees_on_one_cell_cover(family):
    cover = schreier_cover(G2.to_finite(), trivial_group(), {i: 0 for i in range(1, 5)})
    fam = family.specialize(Fraction(5, 7))
    edges = cover_edge_images(cover, fam.images)
    assert euler_number_cellular(cover, edges) == euler_number(fam.images, G2)
    assert stiefel_whitney_cellular(cover, edges) == stiefel_whitney(fam.images, G2)


def test_relator_not_identity_rejected():
    imgs = {1: ProjMatrix.from_entries(Q, [[2, 0], [0, 1]]),
            2: ProjMatrix.from_entries(Q, [[1, 1], [0, 1]]),
            3: ProjMatrix.identity(Q), 4: ProjMatrix.identity(Q)}
    with pytest.raises(ObstructionError):
        euler_number(imgs, G2)
    with pytest.raises(ObstructionError):
        stiefel_whitney(imgs, G2)


def test_milnor_wood_guard():
    _check_milnor_wood(2, 2)
    _check_milnor_wood(-2, 2)
    with pytest.raises(MilnorWoodViolation):
        _check_milnor_wood(3, 2)
    with pytest.raises(MilnorWoodViolation):
        _check_milnor_wood(-5, 3)
