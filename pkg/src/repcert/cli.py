"""The ``repcert`` command line.

Every subcommand prints one JSON document carrying ``schema_version`` and
exits 0; precondition violations print ``{"error": {...}}`` and exit 2.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from . import __version__
from .fields import FieldDescriptor, FieldError, ParseError, PrecisionError, parse_element, rationals
from .moebius import ProjMatrix
from .words import SurfacePresentation, WordError, free_reduce, parse_word

SCHEMA_VERSION = "1"
log = logging.getLogger("repcert")


class UsageError(ValueError):
    def __init__(self, message, token=None):
        super().__init__(message)
        self.token = token


@dataclass
class RunConfig:
    command: str
    options: dict = field(default_factory=dict)


def _field_arg(text, var="t"):
    if not text:
        return rationals(var)
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"field descriptor is not valid JSON: {exc}", text) from None
    d.setdefault("var", var)
    from .fields import make_field
    return make_field(d["minpoly"], d.get("root", 0), d.get("var"))


def _element(text, fld: FieldDescriptor):
    return parse_element(str(text), fld)


def _rational(text):
    if text is None:
        return None
    if any(ch in str(text) for ch in ".eE"):
        raise UsageError(f"decimal input is not exact; write {text!r} as p/q", text)
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not an exact rational: {text!r}", text) from None


def _presentation(name: str) -> SurfacePresentation:
    if not name.startswith("genus") or not name[5:].isdigit():
        raise UsageError(f"unknown presentation {name!r} (expected genusN)", name)
    return SurfacePresentation(int(name[5:]))


def _load_rep(path: str):
    with open(path) as fh:
        doc = json.load(fh)
    fld = FieldDescriptor.from_json(doc["field"]) if "field" in doc else rationals()
    images = {}
    for key, rows in doc["images"].items():
        if not key.startswith("x") or not key[1:].isdigit():
            raise UsageError(f"unknown generator {key!r}", key)
        images[int(key[1:])] = ProjMatrix.from_json(rows, fld)
    return images


def _family(opts):
    from .goldman import assemble, build_phi_A, build_phi_B
    if opts.genus != 2:
        raise UsageError("the exact bent family is available for genus 2 only", str(opts.genus))
    fld = _field_arg(opts.field)
    alpha = _element(opts.alpha, fld)
    beta = _element(opts.beta, fld)
    phi_B = build_phi_B(alpha, beta, fld)
    phi_A = build_phi_A(2, -phi_B.boundary_shift, fld)
    return assemble(phi_A, phi_B, None)


def cmd_goldman(opts):
    from .goldman import degree_certificate, is_killed
    from .moebius import classify
    from .words import amalgam_syllables, survival_hypotheses
    fam = _family(opts)
    word = parse_word(opts.word, fam.presentation.n_generators)
    aw = amalgam_syllables(word, fam.presentation)
    out = {"family": fam.to_json(), "decomposition": aw.to_json(),
           "hypotheses": survival_hypotheses(aw).to_json()}
    if opts.t is not None:
        g = fam.specialize(_rational(opts.t))
        m = g.evaluate(word)
        out["t"] = str(_rational(opts.t))
        out["image"] = m.to_json()
        out["is_identity"] = m.is_scalar()
        if not m.is_scalar():
            out["class"] = classify(m).to_json()
    else:
        out["degree_profile"] = degree_certificate(fam, aw).to_json()
        out["killed"] = is_killed(fam, word)
    out["method"] = "exact polynomial arithmetic in Q(t); degree certificate"
    return out


def cmd_scan(opts):
    from .goldman import faithful_scan
    fam = _family(opts)
    extra = [fam.presentation.relator] + [parse_word(w, 4) for w in opts.extra_word]
    rep = faithful_scan(fam, opts.max_syllables, opts.syllable_len, opts.kill_test_length,
                        extra, threads=opts.threads)
    return {"scan": rep.to_json(), "threads": opts.threads,
            "method": "batched exact integer degree law; exact kill tests"}


def _rep_for(opts):
    pres = _presentation(opts.presentation) if opts.presentation else SurfacePresentation(opts.genus)
    if opts.trivial:
        fld = rationals()
        return {i: ProjMatrix.identity(fld) for i in pres.generators}, pres, None
    if opts.rep:
        return _load_rep(opts.rep), pres, None
    if pres.genus != 2:
        raise UsageError("the bent family is available for genus 2 only", str(pres.genus))
    opts.genus = 2
    fam = _family(opts)
    t = _rational(opts.t) if opts.t is not None else Fraction(1)
    return fam.images, pres, t


def cmd_euler(opts):
    from .obstruction import obstruction_report
    images, pres, t = _rep_for(opts)
    return {"report": obstruction_report(images, pres, t).to_json(),
            "t": None if t is None else str(t)}


def cmd_w2(opts):
    from .obstruction import obstruction_report
    images, pres, t = _rep_for(opts)
    if opts.t is None and not opts.trivial and not opts.rep:
        t = None  # w2 is computed exactly with symbolic t
    return {"report": obstruction_report(images, pres, t, euler=False).to_json(),
            "t": None if t is None else str(t)}


def cmd_section4(opts):
    from .galois import SIGMA_INDEX, build_quadrilateral, default_field, section4_demo
    if opts.c is None:
        data = build_quadrilateral()
    else:
        fld = _field_arg(opts.field, None) if opts.field else default_field()
        c = _element(opts.c, fld)
        root = _element(opts.sqrt, fld) if opts.sqrt else None
        data = build_quadrilateral(c, root, fld)
    sigma = opts.sigma if opts.sigma is not None else SIGMA_INDEX
    if data.field.degree == 1:
        sigma = 0
    return {"section4": section4_demo(data, sigma)}


def cmd_pu21(opts):
    from .pu21 import separation_report
    return {"pu21": separation_report(opts.genus, opts.samples, opts.seed, opts.radius_cap,
                                      opts.threads)}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="repcert", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("--output", "-o", help="write JSON here instead of stdout")
    p.add_argument("--log-level", default="WARNING")
    sub = p.add_subparsers(dest="command", required=True)

    def family_args(sp):
        sp.add_argument("--genus", type=int, default=2)
        sp.add_argument("--alpha", default="3")
        sp.add_argument("--beta", default="3/4")
        sp.add_argument("--field", help='JSON descriptor, e.g. {"minpoly": [2,0,-4,0,1], "root": 2}')

    g = sub.add_parser("goldman", help="degree certificate for one word")
    family_args(g)
    g.add_argument("--word", required=True)
    g.add_argument("--symbolic-t", action="store_true", default=True)
    g.add_argument("--t", help="evaluate at this rational t instead")
    g.set_defaults(func=cmd_goldman)

    s = sub.add_parser("scan", help="faithfulness scan over alternating words")
    family_args(s)
    s.add_argument("--max-syllables", type=int, default=2)
    s.add_argument("--syllable-len", type=int, default=2)
    s.add_argument("--kill-test-length", type=int, default=4)
    s.add_argument("--extra-word", action="append", default=[])
    s.add_argument("--threads", type=int, default=1)
    s.set_defaults(func=cmd_scan)

    for name, func in (("euler", cmd_euler), ("w2", cmd_w2)):
        e = sub.add_parser(name, help=f"{name} of a surface group representation")
        family_args(e)
        e.add_argument("--presentation", help="genusN")
        e.add_argument("--rep", help="JSON file with field and generator images")
        e.add_argument("--trivial", action="store_true")
        e.add_argument("--t", help="rational t for the bent family (default 1)")
        e.set_defaults(func=func)

    q = sub.add_parser("section4", help="the Galois twist example")
    q.add_argument("--c", help="field element c > 1")
    q.add_argument("--sqrt", help="positive square root of c^2 - c")
    q.add_argument("--field", help="JSON field descriptor")
    q.add_argument("--sigma", type=int, help="root index of the twisting embedding")
    q.set_defaults(func=cmd_section4)

    u = sub.add_parser("pu21", help="PU(2,1) constants and separation sampling")
    u.add_argument("--genus", type=int, default=3)
    u.add_argument("--samples", type=int, default=10 ** 6)
    u.add_argument("--seed", type=int, default=0)
    u.add_argument("--radius-cap", type=float, default=5.0)
    u.add_argument("--threads", type=int, default=1)
    u.set_defaults(func=cmd_pu21)
    return p


def _emit(doc, path):
    text = json.dumps(doc, indent=2, sort_keys=True, default=str)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def dispatch(config: RunConfig, opts) -> int:
    try:
        body = opts.func(opts)
    except (UsageError, WordError, ParseError) as exc:
        _emit({"schema_version": SCHEMA_VERSION, "command": config.command,
               "error": {"type": type(exc).__name__, "message": str(exc),
                         "token": None if exc.token is None else str(exc.token)}}, opts.output)
        return 2
    except (FieldError, PrecisionError, ValueError, OSError, KeyError) as exc:
        _emit({"schema_version": SCHEMA_VERSION, "command": config.command,
               "error": {"type": type(exc).__name__, "message": str(exc), "token": None}},
              opts.output)
        return 2
    doc = {"schema_version": SCHEMA_VERSION, "command": config.command}
    doc.update(body)
    _emit(doc, opts.output)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    opts = parser.parse_args(argv)
    logging.basicConfig(level=opts.log_level.upper(), format="%(levelname)s %(message)s")
    config = RunConfig(opts.command, {k: v for k, v in vars(opts).items() if k != "func"})
    log.info("running %s", config.command)
    return dispatch(config, opts)


if __name__ == "__main__":
    sys.exit(main())
