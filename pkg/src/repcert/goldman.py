"""The bent family phi_t on the splitting A *_C B and its degree certificate.

phi_A is a Fuchsian punctured-torus pair with parabolic boundary, phi_B is the
solvable representation x -> diag(alpha, 1/alpha), y -> [[beta, 1], [0, 1/beta]],
and phi_t is phi_A on A and lambda_t phi_B lambda_t^-1 on B with
lambda_t = [[1, t], [0, 1]].  For a word a_1 b_1 ... a_l b_l the 2,2 entry of
phi_t(w) is a polynomial in t of degree exactly l, which proves phi_t(w) != 1
for transcendental t.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .fields import FieldDescriptor, FieldElement, FieldError, make_field, rationals
from .moebius import ProjMatrix, word_evaluate
from .words import (
    AmalgamWord,
    SurfacePresentation,
    amalgam_syllables,
    format_word,
    free_reduce,
    reduced_words,
    survival_hypotheses,
)

# beta (alpha^2 - 1) = 6 matches the exact punctured-torus boundary with d = 1,
# and the abelianization of B injects into the diagonal (3^(m+n) 4^-n = +-1 only
# for m = n = 0), so every b outside [B,B] maps to a hyperbolic element.
DEFAULT_ALPHA = Fraction(3)
DEFAULT_BETA = Fraction(3, 4)


class HypothesisError(ValueError):
    """A word does not satisfy the hypotheses of the degree argument."""


class DegreeAnomaly(AssertionError):
    """The degree law failed on a hypothesis-passing word (an implementation bug)."""


def _tdeg(e: FieldElement) -> int:
    """t-degree of a polynomial element (-1 for zero)."""
    if len(e.den) != 1:
        raise FieldError("entry is not a polynomial in t")
    return len(e.num) - 1


def _coeff(e: FieldElement, k: int) -> FieldElement:
    if k < 0 or k >= len(e.num):
        return e.field.zero()
    return FieldElement(e.field, (e.num[k],))


# ---------------------------------------------------------------------------
# phi_B

@dataclass(frozen=True)
class SolvableRep:
    alpha: FieldElement
    beta: FieldElement
    x: ProjMatrix
    y: ProjMatrix
    power_coincidences: tuple = ()
    power_bound: int = 0

    @property
    def commutator(self) -> ProjMatrix:
        return word_evaluate({1: self.x, 2: self.y}, (1, 2, -1, -2))

    @property
    def boundary_shift(self) -> FieldElement:
        """beta (alpha^2 - 1), the 1,2 entry of phi_B([x, y])."""
        return self.beta * (self.alpha * self.alpha - 1)

    def to_json(self):
        return {"alpha": self.alpha.to_string(), "beta": self.beta.to_string(),
                "x": self.x.to_json(), "y": self.y.to_json(),
                "commutator": self.commutator.to_json(),
                "beta_power_check": {"bound": self.power_bound,
                                     "coincidences": [list(p) for p in self.power_coincidences]}}


def build_phi_B(alpha=DEFAULT_ALPHA, beta=DEFAULT_BETA, field: FieldDescriptor | None = None,
                power_bound: int = 6) -> SolvableRep:
    """Solvable representation of B = <x, y> with parabolic commutator.

    ``power_coincidences`` lists coprime exponent pairs (p, q), 1 <= q <= power_bound,
    |p| <= power_bound, with beta^q = +-alpha^p.  Any such pair makes some element
    outside [B, B] map to +-I or a parabolic; the general condition that beta is
    not a rational power of alpha is not certified beyond that bound.
    """
    field = field or rationals("t")
    a = field.element(alpha)
    b = field.element(beta)
    if a == 1 or a == -1:
        raise ValueError("alpha must not be +-1 (the commutator would be trivial)")
    if a.is_zero() or b.is_zero():
        raise ValueError("alpha and beta must be nonzero")
    one, zero = field.one(), field.zero()
    x = ProjMatrix(a, zero, zero, a.inverse())
    y = ProjMatrix(b, one, zero, b.inverse())
    rep = SolvableRep(a, b, x, y)
    comm = rep.commutator
    expected = ProjMatrix(one, rep.boundary_shift, zero, one)
    if not comm.same_entries(expected):
        raise AssertionError(f"commutator formula failed: {comm}")
    a_pows = {0: one}
    ai = a.inverse()
    for p in range(1, power_bound + 1):
        a_pows[p] = a_pows[p - 1] * a
        a_pows[-p] = a_pows[-p + 1] * ai
    hits = []
    bq = one
    for q in range(1, power_bound + 1):
        bq = bq * b
        for p in range(-power_bound, power_bound + 1):
            if math.gcd(p, q) == 1 and (bq == a_pows[p] or bq == -a_pows[p]):
                hits.append((p, q))
    return SolvableRep(a, b, x, y, tuple(hits), power_bound)


# ---------------------------------------------------------------------------
# phi_A

_S = ((0, -1), (1, 0))
_X0 = ((1, 1), (1, 2))
_Y0 = ((1, -1), (-1, 2))


@dataclass(frozen=True)
class FuchsianBlock:
    genus: int
    images: Mapping[int, ProjMatrix]
    level: str
    boundary: ProjMatrix
    d: FieldElement

    def to_json(self):
        return {"genus": self.genus, "level": self.level,
                "images": {f"x{k}": m.to_json() for k, m in sorted(self.images.items())},
                "boundary": self.boundary.to_json(), "d": self.d.to_string()}


def _rational_sqrt(q: Fraction):
    if q < 0:
        return None
    n, m = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if n * n == q.numerator and m * m == q.denominator:
        return Fraction(n, m)
    return None


def build_phi_A(genus: int = 2, target=-6, field: FieldDescriptor | None = None,
                d=None) -> FuchsianBlock:
    """Exact punctured-torus pair whose commutator is [[1, target], [0, 1]].

    Starts from X0 = [[1,1],[1,2]], Y0 = [[1,-1],[-1,2]] (commutator trace -2),
    conjugates by S = [[0,-1],[1,0]] and then by diag(d, 1/d) with
    target = -6 d^2.  ``d`` may be supplied; otherwise it must be a rational
    square root of target / -6.
    """
    if genus != 2:
        raise ValueError("only genus 2 is available in exact mode")
    field = field or rationals("t")
    s = field.element(target)
    if s.is_zero():
        raise ValueError("target parabolic must be nontrivial")
    if d is None:
        q = (s / -6).rational_value()
        root = _rational_sqrt(q) if q is not None else None
        if root is None:
            raise ValueError(f"target {s} is not of the form -6 d^2 with d in the field")
        d = field.element(root)
    else:
        d = field.element(d)
        if not (d * d * -6 == s):
            raise ValueError("supplied d does not satisfy -6 d^2 = target")
    S = ProjMatrix.from_entries(field, _S)
    D = ProjMatrix(d, field.zero(), field.zero(), d.inverse())
    conj = D @ S
    conj_inv = conj.inverse()
    A1 = conj @ ProjMatrix.from_entries(field, _X0) @ conj_inv
    A2 = conj @ ProjMatrix.from_entries(field, _Y0) @ conj_inv
    comm = word_evaluate({1: A1, 2: A2}, (1, 2, -1, -2))
    boundary = ProjMatrix(field.one(), s, field.zero(), field.one())
    if not comm == boundary:
        raise AssertionError("punctured-torus boundary does not match the target")
    for m in (A1, A2):
        if m.c.is_zero():
            raise AssertionError("generator image has zero 2,1 entry")
    return FuchsianBlock(2, {1: A1, 2: A2}, "exact-g2", boundary, d)


# ---------------------------------------------------------------------------
# assembling the family

@dataclass(frozen=True)
class BentFamily:
    phi_A: FuchsianBlock
    phi_B: SolvableRep
    t: FieldElement
    images: Mapping[int, ProjMatrix]
    presentation: SurfacePresentation

    @property
    def field(self):
        return self.t.field

    @property
    def symbolic(self):
        return not self.t.is_constant

    def specialize(self, t_value) -> "BentFamily":
        """The same family at a rational value of t."""
        return assemble(self.phi_A, self.phi_B, t_value)

    def evaluate(self, word: Sequence[int]) -> ProjMatrix:
        return word_evaluate(self.images, word, self.field)

    def to_json(self):
        return {"genus": self.presentation.genus, "t": self.t.to_string(),
                "images": {f"x{k}": m.to_json() for k, m in sorted(self.images.items())},
                "phi_A": self.phi_A.to_json(), "phi_B": self.phi_B.to_json()}


def lambda_t(t: FieldElement) -> ProjMatrix:
    f = t.field
    return ProjMatrix(f.one(), t, f.zero(), f.one())


def assemble(phi_A: FuchsianBlock, phi_B: SolvableRep, t=None) -> BentFamily:
    """phi_t = phi_A on A, lambda_t phi_B lambda_t^-1 on B.

    ``t=None`` uses the transcendental generator of the field.  The surface
    relator [x1,x2][x3,x4] is checked to map to the projective identity.
    """
    field = phi_B.alpha.field
    tt = field.t if t is None else field.element(t)
    lam = lambda_t(tt)
    lam_inv = lam.inverse()
    comm_B = phi_B.commutator
    if not (lam @ comm_B @ lam_inv).same_entries(comm_B):
        raise AssertionError("lambda_t does not commute with the boundary parabolic")
    images = {1: phi_A.images[1], 2: phi_A.images[2],
              3: lam @ phi_B.x @ lam_inv, 4: lam @ phi_B.y @ lam_inv}
    pres = SurfacePresentation(2)
    rel = word_evaluate(images, pres.relator, field)
    if not rel.is_scalar():
        raise ValueError("boundary mismatch: phi_A([x1,x2]) phi_B([x3,x4]) is not the identity")
    return BentFamily(phi_A, phi_B, tt, images, pres)


def default_family(t=None, field: FieldDescriptor | None = None) -> BentFamily:
    phi_B = build_phi_B(DEFAULT_ALPHA, DEFAULT_BETA, field)
    phi_A = build_phi_A(2, -phi_B.boundary_shift, phi_B.alpha.field)
    return assemble(phi_A, phi_B, t)


# ---------------------------------------------------------------------------
# the degree certificate

@dataclass(frozen=True)
class DegreeProfile:
    word: tuple
    length: int
    degrees: tuple
    leading: FieldElement
    predicted: FieldElement
    verdict: str

    def to_json(self):
        return {"word": format_word(self.word), "syllable_pairs": self.length,
                "t_degrees": [list(r) for r in self.degrees],
                "leading_coefficient_22": self.leading.to_string(),
                "predicted_leading_coefficient": self.predicted.to_string(),
                "verdict": self.verdict}


def _syllable_data(family: BentFamily, w: AmalgamWord):
    """(c_i, u_i) per pair: 2,1 entry of phi_A(a_i) and 1,1 entry of phi_B(b_i)."""
    B = {3: family.phi_B.x, 4: family.phi_B.y}
    out = []
    for i, (a, b) in enumerate(w.pairs, 1):
        c = word_evaluate(family.phi_A.images, a.letters, family.field).c
        mb = word_evaluate(B, b.letters, family.field)
        if not mb.c.is_zero():
            raise AssertionError("phi_B image is not upper triangular")
        u = mb.a
        if c.is_zero():
            raise HypothesisError(f"phi_A(a_{i}) has zero 2,1 entry")
        if u == 1 or u == -1:
            raise HypothesisError(f"phi_B(b_{i}) is not hyperbolic (u = {u})")
        out.append((c, u))
    return out


def predicted_leading(family: BentFamily, w: AmalgamWord) -> FieldElement:
    out = family.field.one()
    for c, u in _syllable_data(family, w):
        out = out * c * (u.inverse() - u)
    return out


def degree_certificate(family: BentFamily, w) -> DegreeProfile:
    """Exact t-degree profile of phi_t(w) for w = a_1 b_1 ... a_l b_l."""
    if not isinstance(w, AmalgamWord):
        w = amalgam_syllables(w, family.presentation)
    verdict = survival_hypotheses(w)
    if not verdict.passed:
        raise HypothesisError("; ".join(verdict.diagnoses))
    if not family.symbolic:
        raise ValueError("degree certificate needs the symbolic family")
    l = w.length
    predicted = predicted_leading(family, w)
    m = family.evaluate(w.word)
    degs = ((_tdeg(m.a), _tdeg(m.b)), (_tdeg(m.c), _tdeg(m.d)))
    lead = _coeff(m.d, l)
    ok = (degs[1][1] == l and degs[0][1] <= l and degs[0][0] <= l - 1
          and degs[1][0] <= l - 1 and lead == predicted)
    if not ok:
        raise DegreeAnomaly(f"degree law violated for {format_word(w.word)}: "
                            f"degrees {degs}, leading {lead}, predicted {predicted}")
    return DegreeProfile(w.word, l, degs, lead, predicted, "survives")


# ---------------------------------------------------------------------------
# batched certification in machine integers

def _lcm_den(values):
    out = 1
    for v in values:
        out = out * v.denominator // math.gcd(out, v.denominator)
    return out


def _pair_tables(family: BentFamily, syllable_length: int):
    """Integer coefficient arrays D * phi_t(a b) and D * c (u^-1 - u) per pair."""
    pres = family.presentation
    a_words = [w for w in reduced_words(pres.a_generators, syllable_length)]
    b_words = [w for w in reduced_words(pres.b_generators, syllable_length)]
    mats = np.zeros((len(a_words) * len(b_words), 2, 2, 2), dtype=object)
    lead = np.zeros(len(a_words) * len(b_words), dtype=object)
    pairs = []
    for ia, a in enumerate(a_words):
        for ib, b in enumerate(b_words):
            w = amalgam_syllables(a + b, pres)
            k = ia * len(b_words) + ib
            pairs.append((w, survival_hypotheses(w).passed))
            m = family.evaluate(a + b)
            coeffs = []
            for e in m.entries:
                if len(e.den) != 1 or len(e.num) > 2:
                    raise AssertionError("pair image is not linear in t")
                coeffs.append([(_coeff(e, j).rational_value()) for j in range(2)])
            if not pairs[-1][1]:
                continue
            pred = predicted_leading(family, w).rational_value()
            D = _lcm_den([q for row in coeffs for q in row] + [pred])
            for idx, row in enumerate(coeffs):
                for j, q in enumerate(row):
                    mats[k, idx // 2, idx % 2, j] = int(q * D)
            lead[k] = int(pred * D)
    return pairs, mats, lead


def _poly_matmul(P, Q):
    """Batched product of polynomial matrices P[..., 2, 2, m] and Q[..., 2, 2, n]."""
    m, n = P.shape[-1], Q.shape[-1]
    shape = np.broadcast_shapes(P.shape[:-3], Q.shape[:-3]) + (2, 2, m + n - 1)
    out = np.zeros(shape, dtype=np.result_type(P, Q))
    for i in range(2):
        for j in range(2):
            for k in range(2):
                for p in range(m):
                    for q in range(n):
                        out[..., i, j, p + q] += P[..., i, k, p] * Q[..., k, j, q]
    return out


def _norm(mats):
    """Max row sum of coefficient l1 norms (submultiplicative)."""
    best = 0
    for M in mats:
        for i in range(2):
            best = max(best, sum(abs(int(x)) for k in range(2) for x in M[i, k]))
    return best


@dataclass
class BatchReport:
    checked: int = 0
    by_length: dict = field(default_factory=dict)
    anomalies: list = field(default_factory=list)
    excluded: int = 0
    dtype: str = "int64"

    def to_json(self):
        return {"checked": self.checked, "by_length": {str(k): v for k, v in self.by_length.items()},
                "anomalies": [format_word(w) for w in self.anomalies],
                "excluded_by_hypotheses": self.excluded, "integer_type": self.dtype}


def batch_degree_law(family: BentFamily, max_syllables: int = 3, syllable_length: int = 2,
                     chunk: int = 1024, max_anomalies: int = 20,
                     threads: int = 1) -> BatchReport:
    """Degree law for every hypothesis-passing alternating word, in integer arithmetic.

    Each pair a_i b_i is scaled by the common denominator D_i of phi_t(a_i b_i)
    and D_i c_i (u_i^-1 - u_i), so products are integer polynomial matrices;
    the check is exact.  int64 is used when an a-priori norm bound shows no
    overflow is possible, otherwise Python integers.
    """
    if not family.symbolic or family.field.degree != 1:
        raise ValueError("batched certification needs the symbolic family over Q(t)")
    pairs, mats, lead = _pair_tables(family, syllable_length)
    keep = np.array([p for _, p in pairs])
    report = BatchReport(excluded=0)
    npairs = len(pairs)
    total = sum(npairs ** n for n in range(1, max_syllables + 1))
    report.excluded = total - sum(int(keep.sum()) ** n for n in range(1, max_syllables + 1))
    idx = np.nonzero(keep)[0]
    bound = max(_norm(mats[idx]), max(abs(int(v)) for v in lead[idx])) ** max_syllables
    dtype = np.int64 if bound < 2 ** 62 else object
    report.dtype = "int64" if dtype is np.int64 else "python-int"
    T = mats[idx].astype(dtype)
    L = lead[idx].astype(dtype)
    prefix = np.zeros((1, 2, 2, 1), dtype=dtype)
    prefix[0, 0, 0, 0] = prefix[0, 1, 1, 0] = 1
    prefix_lead = np.ones(1, dtype=dtype)
    prefix_ids = [()]
    def check(l, s):
        prod = _poly_matmul(prefix[s:s + chunk, None], T[None])
        exp = prefix_lead[s:s + chunk, None] * L[None]
        bad = ((prod[..., 1, 1, l] != exp) | (exp == 0)
               | (prod[..., 0, 0, l] != 0) | (prod[..., 1, 0, l] != 0))
        return bad.size, [(s + int(pi), int(ti)) for pi, ti in zip(*np.nonzero(bad))]

    for l in range(1, max_syllables + 1):
        starts = range(0, len(prefix), chunk)
        if threads > 1:
            with ThreadPoolExecutor(threads) as ex:
                results = list(ex.map(lambda s: check(l, s), starts))
        else:
            results = [check(l, s) for s in starts]
        count = 0
        for n, bad in results:
            count += n
            for pi, ti in bad:
                if len(report.anomalies) < max_anomalies:
                    ids = prefix_ids[pi] + (idx[ti],)
                    report.anomalies.append(sum((pairs[j][0].word for j in ids), ()))
        report.by_length[l] = count
        report.checked += count
        if l < max_syllables:
            prefix = _poly_matmul(prefix[:, None], T[None]).reshape(-1, 2, 2, l + 1)
            prefix_lead = (prefix_lead[:, None] * L[None]).reshape(-1)
            prefix_ids = [p + (j,) for p in prefix_ids for j in idx]
    return report


# ---------------------------------------------------------------------------
# scanning

@dataclass
class ScanReport:
    max_syllables: int
    syllable_length: int
    enumerated: int = 0
    certified: int = 0
    anomalies: list = field(default_factory=list)
    kill_tested: int = 0
    killed: list = field(default_factory=list)
    extra: list = field(default_factory=list)
    integer_type: str = ""

    def to_json(self):
        return {"max_syllables": self.max_syllables, "syllable_length": self.syllable_length,
                "enumerated": self.enumerated, "certified_survivors": self.certified,
                "degree_anomalies": [format_word(w) for w in self.anomalies],
                "kill_tested": self.kill_tested,
                "killed": [format_word(w) for w in self.killed],
                "extra_words": self.extra, "integer_type": self.integer_type}


def is_killed(family: BentFamily, word: Sequence[int]) -> bool:
    """phi_t(word) = +-I exactly."""
    return family.evaluate(word).is_scalar()


def faithful_scan(family: BentFamily, max_syllables: int = 2, syllable_length: int = 2,
                  kill_test_length: int = 4, extra_words: Sequence[Sequence[int]] = (),
                  chunk: int = 1024, threads: int = 1) -> ScanReport:
    """Certify hypothesis-passing alternating words and kill-test the rest.

    Alternating words are certified by the degree law.  Every freely reduced
    word of length <= ``kill_test_length`` that fails the hypotheses, and
    each of ``extra_words``, is evaluated exactly and reported if it maps to
    the identity.
    """
    rep = ScanReport(max_syllables, syllable_length)
    batch = batch_degree_law(family, max_syllables, syllable_length, chunk, threads=threads)
    rep.enumerated = batch.checked + batch.excluded
    rep.certified = batch.checked - len(batch.anomalies)
    rep.anomalies = batch.anomalies
    rep.integer_type = batch.dtype
    pres = family.presentation
    for w in reduced_words(pres.generators, kill_test_length):
        if survival_hypotheses(amalgam_syllables(w, pres)).passed:
            continue
        rep.kill_tested += 1
        if is_killed(family, w):
            rep.killed.append(w)
    for w in extra_words:
        red = free_reduce(w)
        killed = is_killed(family, red)
        rep.kill_tested += 1
        if killed:
            rep.killed.append(tuple(w))
        rep.extra.append({"word": format_word(w), "freely_trivial": not red, "killed": killed})
    return rep
