"""Euler number and second Stiefel-Whitney class of surface group representations.

The Euler number is the deck translation of the lifted relator: lift every
generator to the universal cover of PSL2(R), compose along the relator
(inverse letters use functional inverses) and read off the integer k with
the composite equal to translation by k*pi.  On a cover of a presentation
complex the same is done cell by cell with one lift per edge and the
integers are summed.

w2 uses exact arithmetic only: a commutator does not see scalings, so the
product of commutators of the raw matrices already equals the product for
SL2 lifts, which is +I or -I.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .fields import FieldDescriptor, FieldElement
from .moebius import (
    EULER_SIGN,
    LiftedCircleMap,
    NotIdentityError,
    ProjMatrix,
    compose_word,
    lift,
    lift_compose,
    translation_number,
    word_evaluate,
)
from .words import CoverPresentation, SurfacePresentation

CONVENTION = {
    "circle": "boundary of the upper half plane, angle theta with x = tan(theta), period pi",
    "lift_normalization": "f(0) in [0, pi) per generator; inverse lifts are functional inverses",
    "euler_sign": EULER_SIGN,
    "orientation": "e = euler_sign * k where the lifted relator is translation by k*pi; "
                   "fixed so the genus-2 quadrilateral kernel group has e = +2",
}


class MilnorWoodViolation(AssertionError):
    """An Euler number outside [2 - 2g, 2g - 2]; always a bug."""


class ObstructionError(ValueError):
    pass


def _check_milnor_wood(e, genus):
    if genus is not None and not (2 - 2 * genus <= e <= 2 * genus - 2):
        raise MilnorWoodViolation(f"e = {e} violates the Milnor-Wood bound for genus {genus}")


def _specialize(images, t_value):
    return {k: m.specialize(t_value) for k, m in images.items()}


def _field(images):
    return next(iter(images.values())).field


def euler_number(images: Mapping[int, ProjMatrix], presentation: SurfacePresentation,
                 t_value=None, offsets: Mapping[int, int] | None = None) -> int:
    """e(phi) for a one-relator surface presentation.

    ``offsets`` composes the lift of generator i with the deck translation by
    offsets[i]*pi; the result does not depend on them.
    """
    imgs = _specialize(images, t_value)
    field = _field(imgs)
    if not word_evaluate(imgs, presentation.relator, field).is_scalar():
        raise ObstructionError("relator does not map to the identity")
    offsets = offsets or {}
    lifts = {k: lift(m).offset(offsets.get(k, 0)) for k, m in imgs.items()}
    k = translation_number(compose_word(lifts, presentation.relator, field))
    e = EULER_SIGN * k
    _check_milnor_wood(e, presentation.genus)
    return e


def cover_edge_images(cover: CoverPresentation, images: Mapping[int, ProjMatrix]) -> list:
    """Image of every edge word rep(g) s rep(gs)^-1 (identity on tree edges)."""
    field = _field(images)
    return [word_evaluate(images, cover.edge_word(e), field) for e in cover.edges]


def cell_translations(cover: CoverPresentation, edge_images: Sequence[ProjMatrix],
                      t_value=None, offsets: Sequence[int] | None = None) -> list:
    """Translation integer of the lifted boundary of every 2-cell."""
    mats = [m.specialize(t_value) for m in edge_images]
    offsets = offsets or [0] * len(mats)
    lifts = [lift(m).offset(k) for m, k in zip(mats, offsets)]
    inverses = [f.inverse() for f in lifts]
    field = mats[0].field
    out = []
    for i, cell in enumerate(cover.cells):
        f = LiftedCircleMap(ProjMatrix.identity(field), 0)
        for e, s in cell:
            f = lift_compose(f, lifts[e] if s > 0 else inverses[e])
        try:
            out.append(translation_number(f))
        except NotIdentityError:
            raise ObstructionError(f"boundary of cell {i} does not map to the identity") from None
    return out


def euler_number_cellular(cover: CoverPresentation, edge_images: Sequence[ProjMatrix],
                          t_value=None, offsets: Sequence[int] | None = None) -> int:
    """e as the sum over 2-cells of the lifted-boundary translation integers."""
    if not (cover.is_closed_surface() and cover.orientable):
        raise ObstructionError("cover is not a closed oriented surface complex")
    e = EULER_SIGN * sum(cell_translations(cover, edge_images, t_value, offsets))
    _check_milnor_wood(e, cover.genus)
    return e


def stiefel_whitney(images: Mapping[int, ProjMatrix], presentation: SurfacePresentation,
                    t_value=None) -> int:
    """w2 in {0, 1}: the sign of the lifted relator in SL2."""
    imgs = _specialize(images, t_value) if t_value is not None else images
    m = word_evaluate(imgs, presentation.relator, _field(imgs))
    if not m.is_scalar():
        raise ObstructionError("relator does not map to the identity")
    v = m.scalar_value()
    if v == 1:
        return 0
    if v == -1:
        return 1
    raise ObstructionError(f"relator evaluates to {v} * I, expected +-I")


def stiefel_whitney_cellular(cover: CoverPresentation, edge_images: Sequence[ProjMatrix]) -> int:
    """w2 on a cover: sign of the product of the cell scalars.

    Each edge occurs once in each direction, so rescaling an edge matrix
    cancels in the product and no square roots are needed.
    """
    if not cover.is_closed_surface():
        raise ObstructionError("cover is not a closed surface complex")
    field = edge_images[0].field
    inverses = [m.inverse() for m in edge_images]
    total = field.one()
    for i, cell in enumerate(cover.cells):
        m = ProjMatrix.identity(field)
        for e, s in cell:
            m = m @ (edge_images[e] if s > 0 else inverses[e])
        if not m.is_scalar():
            raise ObstructionError(f"boundary of cell {i} does not map to the identity")
        total = total * m.scalar_value()
    if total == 1:
        return 0
    if total == -1:
        return 1
    raise ObstructionError(f"cell scalars multiply to {total}, expected +-1")


@dataclass(frozen=True)
class ObstructionReport:
    euler: int | None
    w2: int | None
    genus: int
    method: str
    precision: str = "exact"
    notes: tuple = ()

    @property
    def milnor_wood_ok(self):
        return self.euler is None or 2 - 2 * self.genus <= self.euler <= 2 * self.genus - 2

    @property
    def parity_ok(self):
        if self.euler is None or self.w2 is None:
            return None
        return self.euler % 2 == self.w2

    def to_json(self):
        return {"euler": self.euler, "w2": self.w2, "genus": self.genus,
                "milnor_wood_ok": self.milnor_wood_ok, "parity_ok": self.parity_ok,
                "method": self.method, "precision": self.precision,
                "convention": CONVENTION, "notes": list(self.notes)}


def obstruction_report(images: Mapping[int, ProjMatrix], presentation: SurfacePresentation,
                       t_value=None, euler=True) -> ObstructionReport:
    w2 = stiefel_whitney(images, presentation, t_value)
    e = euler_number(images, presentation, t_value) if euler else None
    return ObstructionReport(e, w2, presentation.genus,
                             "commutator-relator + sl2-signs" if euler else "sl2-signs")


def cellular_report(cover: CoverPresentation, edge_images: Sequence[ProjMatrix],
                    euler=True) -> ObstructionReport:
    w2 = stiefel_whitney_cellular(cover, edge_images)
    e = euler_number_cellular(cover, edge_images) if euler else None
    return ObstructionReport(e, w2, cover.genus, "cellular + sl2-signs" if euler else "sl2-signs")
