"""Constants and a separation check for the PU(2,1) ping-pong construction.

The complex hyperbolic plane is the unit ball in C^2, normalized so complex
geodesics have curvature -1; v is the origin and the two orthogonal complex
geodesics through it are {z2 = 0} and {z1 = 0}.  Orthogonal projection onto
{z2 = 0} is (z1, z2) -> (z1, 0), and the distance from the origin within a
complex geodesic is 2 artanh|w|.  Hence S_a = {|z1| >= tanh(r_a/2)} and
S_b = {|z2| >= tanh(r_b/2)}, and they meet exactly when
tanh^2(r_a/2) + tanh^2(r_b/2) < 1.  Monte Carlo sampling checks this.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from mpmath import iv

DEFAULT_SAMPLES = 10 ** 6
DEFAULT_RADIUS_CAP = 5.0

SAMPLING_NOTE = ("Sampling is a check, not a proof: a finite sample can only exhibit "
                 "points of S_a and S_b in common, never certify that none exist.")


def _iv_pair(x):
    return [float(x.a), float(x.b)]


@dataclass(frozen=True)
class PolygonConstants:
    """Regular n-gon with vertex angles 2 pi/(3n); l is half its side length."""

    n: int
    cosh_l: object
    l: object
    tanh2_half: object  # tanh^2(l/2) = (cosh l - 1)/(cosh l + 1)

    @property
    def vertex_angle(self):
        return 2 * iv.pi / (3 * self.n)

    def to_json(self):
        return {"n": self.n, "cosh_l": _iv_pair(self.cosh_l), "l": _iv_pair(self.l),
                "tanh2_half_l": _iv_pair(self.tanh2_half)}


def polygon_halfside(n: int, dps: int = 30) -> PolygonConstants:
    """cosh(l_n) = cos(pi/n) / sin(pi/(3n)) as certified intervals."""
    if n < 4:
        raise ValueError("n must be at least 4")
    saved = iv.dps
    iv.dps = dps
    try:
        ch = iv.cos(iv.pi / n) / iv.sin(iv.pi / (3 * n))
        l = iv.log(ch + iv.sqrt(ch * ch - 1))
        t2 = (ch - 1) / (ch + 1)
    finally:
        iv.dps = saved
    return PolygonConstants(n, ch, l, t2)


def toledo_target(genus: int) -> Fraction:
    return Fraction(2 * genus - 2) - Fraction(4, 3)


def sample_ball(n: int, rng: np.random.Generator, radius_cap: float = DEFAULT_RADIUS_CAP):
    """Points tanh(rho/2) u with rho uniform on [0, cap] and u uniform on S^3."""
    g = rng.standard_normal((n, 4))
    u = g / np.linalg.norm(g, axis=1, keepdims=True)
    rho = rng.uniform(0.0, radius_cap, n)
    r = np.tanh(rho / 2)[:, None]
    z = r * u
    return z[:, 0] + 1j * z[:, 1], z[:, 2] + 1j * z[:, 3]


def projected_distances(z1, z2):
    """Distances from v of the projections to the two complex geodesics."""
    return 2 * np.arctanh(np.abs(z1)), 2 * np.arctanh(np.abs(z2))


def count_violations(r_a: float, r_b: float, samples: int = DEFAULT_SAMPLES, seed: int = 0,
                     radius_cap: float = DEFAULT_RADIUS_CAP, threads: int = 1,
                     block: int = 200_000) -> int:
    """Sampled points lying in both S_a and S_b.

    Samples come in fixed-size blocks, each with its own child seed, so the
    count is the same for any ``threads``.
    """
    seeds = np.random.SeedSequence(seed).spawn((samples + block - 1) // block)
    sizes = [min(block, samples - i * block) for i in range(len(seeds))]

    def run(args):
        ss, size = args
        z1, z2 = sample_ball(size, np.random.default_rng(ss), radius_cap)
        da, db = projected_distances(z1, z2)
        return int(np.count_nonzero((da >= r_a) & (db >= r_b)))

    jobs = list(zip(seeds, sizes))
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(threads) as ex:
            return sum(ex.map(run, jobs))
    return sum(map(run, jobs))


def closed_form_intersect(a: PolygonConstants, b: PolygonConstants):
    """True / False when tanh^2(r_a/2) + tanh^2(r_b/2) is certifiably < 1 / > 1."""
    s = a.tanh2_half + b.tanh2_half
    if s.b < 1:
        return True
    if s.a > 1:
        return False
    return None


def order3_boundary_check(tol: float = 1e-12) -> dict:
    """g = diag(w, w^2, 1) rotates by 2pi/3 and 4pi/3; the swap theta inverts it."""
    w = np.exp(2j * np.pi / 3)
    g = np.diag([w, w * w, 1.0])
    J = np.diag([1.0, 1.0, -1.0])
    theta = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 1]], dtype=complex)
    unitary = np.allclose(g.conj().T @ J @ g, J, atol=tol)
    order3 = np.allclose(np.linalg.matrix_power(g, 3), np.eye(3), atol=tol)
    inverted = np.allclose(theta @ g @ np.linalg.inv(theta), np.linalg.inv(g), atol=tol)
    return {"preserves_form": bool(unitary), "order_3": bool(order3),
            "theta_conjugates_to_inverse": bool(inverted)}


def separation_report(genus: int, samples: int = DEFAULT_SAMPLES, seed: int = 0,
                      radius_cap: float = DEFAULT_RADIUS_CAP, threads: int = 1) -> dict:
    if genus < 3:
        raise ValueError("genus must be at least 3")
    pa = polygon_halfside(4 * (genus - 1))
    pb = polygon_halfside(4)
    p8 = polygon_halfside(8)
    r_a, r_b = float(pa.l.mid), float(pb.l.mid)
    # push the float radii outward/inward by the interval width so sampling
    # errs towards finding violations in the separated case
    v_sep = count_violations(float(pa.l.a), float(pb.l.a), samples, seed, radius_cap, threads)
    v_bad = count_violations(float(pb.l.b), float(pb.l.b), samples, seed, radius_cap, threads)
    return {
        "genus": genus,
        "r_a": pa.to_json(),
        "r_b": pb.to_json(),
        "r_a_at_least_l8": bool(pa.l.a >= p8.l.a),
        "toledo_target": str(toledo_target(genus)),
        "samples": samples, "seed": seed, "radius_cap": radius_cap,
        "violations_at_r_a_r_b": v_sep,
        "violations_at_l4_l4": v_bad,
        "closed_form_intersect_at_r_a_r_b": closed_form_intersect(pa, pb),
        "closed_form_intersect_at_l4_l4": closed_form_intersect(pb, pb),
        "order3_boundary": order3_boundary_check(),
        "note": SAMPLING_NOTE,
    }
