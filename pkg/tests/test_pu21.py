import math
from fractions import Fraction

import numpy as np
import pytest

from repcert.pu21 import (
    closed_form_intersect,
    count_violations,
    order3_boundary_check,
    polygon_halfside,
    projected_distances,
    sample_ball,
    separation_report,
    toledo_target,
)


def cosh_halfside_float(n):
    """Oracle: plain float evaluation of the right-triangle relation."""
    return math.cos(math.pi / n) / math.sin(math.pi / (3 * n))


def test_polygon_constants():
    c4 = polygon_halfside(4).cosh_l
    c8 = polygon_halfside(8).cosh_l
    assert 2.73204 <= float(c4.a) and float(c4.b) <= 2.73206
    assert 7.078116 <= float(c8.a) and float(c8.b) <= 7.078117
    assert float(c4.b) - float(c4.a) < 1e-20
    for n in (4, 5, 8, 12):
        p = polygon_halfside(n)
        assert abs(float(p.cosh_l.mid) - cosh_halfside_float(n)) < 1e-12
        assert abs(math.cosh(float(p.l.mid)) - cosh_halfside_float(n)) < 1e-9
        th = math.tanh(float(p.l.mid) / 2) ** 2
        assert abs(float(p.tanh2_half.mid) - th) < 1e-12


def test_monotone_in_n():
    ls = [polygon_halfside(n).l for n in range(4, 20)]
    assert all(a.b < b.a for a, b in zip(ls, ls[1:]))


def test_polygon_errors():
    with pytest.raises(ValueError):
        polygon_halfside(3)
    with pytest.raises(ValueError):
        separation_report(2, samples=10)


def test_toledo():
    assert toledo_target(3) == Fraction(8, 3)
    assert toledo_target(4) == Fraction(14, 3)


def test_sampling_geometry():
    rng = np.random.default_rng(0)
    z1, z2 = sample_ball(10000, rng, 3.0)
    r = np.sqrt(np.abs(z1) ** 2 + np.abs(z2) ** 2)
    assert r.max() < 1 and r.max() > math.tanh(1.4)
    da, db = projected_distances(z1, z2)
    assert np.all(da >= 0) and np.all(db >= 0)


def test_closed_form_matches_sampling():
    p4, p8 = polygon_halfside(4), polygon_halfside(8)
    assert closed_form_intersect(p8, p4) is False
    assert closed_form_intersect(p4, p4) is True
    assert count_violations(float(p8.l.a), float(p4.l.a), 100000, seed=1) == 0
    assert count_violations(float(p4.l.b), float(p4.l.b), 100000, seed=1) > 0


def test_thread_determinism():
    a = count_violations(1.0, 1.0, 50000, seed=7, threads=1, block=8000)
    b = count_violations(1.0, 1.0, 50000, seed=7, threads=4, block=8000)
    assert a == b > 0


def test_order3_boundary():
    assert all(order3_boundary_check().values())


def test_report_small():
    rep = separation_report(3, samples=20000, seed=3)
    assert rep["r_a_at_least_l8"]
    assert rep["violations_at_r_a_r_b"] == 0 and rep["violations_at_l4_l4"] > 0
    assert rep["toledo_target"] == "8/3"
