"""Command-line driver ``qtx``.

Exit status: 0 success, 1 validation or check failure, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import QtoricError, QtxError, ValidationError
from .fan import FanError
from .numeric import (
    DEFAULT_SAMPLES,
    DEFAULT_TOL,
    check_equivariance,
    check_inverse_pair,
    check_well_defined,
)
from .quasifold import (
    FanTriple,
    blowup,
    build_atlas,
    build_chart,
    orbit_table,
    semigroup_basis,
    specialize,
    toric_morphism,
    transition_map,
    variable_names,
)
from .qtxfile import parse_fanfile, print_fanfile
from .render import render_svg
from .scalar import format_matrix, format_vector, parse_matrix, parse_vector


class UsageError(Exception):
    pass


class CheckFailed(Exception):
    pass


def _load(path: str) -> FanTriple:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return parse_fanfile(text)
    except QtxError as exc:
        exc.path = path
        raise


def _face(FT: FanTriple, text: str) -> frozenset:
    try:
        return FT.fan.parse_face(text)
    except FanError as exc:
        raise UsageError(str(exc)) from None


def _maximal(FT: FanTriple, name: str) -> str:
    if not FT.fan.has_cone(name):
        raise UsageError(f"{name!r} is not a maximal cone")
    return name


# -- subcommands ------------------------------------------------------------------

def cmd_validate(args, out):
    FT = _load(args.file)
    fan = FT.fan
    out.append(f"valid: dimension {fan.dim}, {len(fan.rays)} rays, {len(fan.cones)} maximal cones, "
               f"field {FT.field}, {len(FT.quasilattice.gens)} quasilattice generators")


def _triple_for(FT, cone: str, ambient: str | None):
    face = _face(FT, cone)
    if ambient is not None:
        amb = _maximal(FT, ambient)
        if not face <= set(FT.fan.cone(amb)):
            raise UsageError(f"{cone} is not a face of {ambient}")
        return FT.induced(face, amb)
    return FT.cone_triple(face)


def cmd_dual(args, out):
    FT = _load(args.file)
    T = _triple_for(FT, args.cone, args.ambient)
    out.append(f"cone {T.name} (rays {' '.join(T.rays) or 'none'})")
    out.append("basis:")
    for lab, b in zip(T.labels, T.basis):
        out.append(f"  {lab} = {format_vector(b)}")
    out.append("dual basis:")
    for lab, a in zip(T.labels, T.dual):
        out.append(f"  alpha_{lab} = {format_vector(a)}")
    others = [r for r in FT.fan.rays if r.id not in T.labels]
    if others:
        out.append("other rays in this basis:")
        for r in others:
            out.append(f"  {r.id} = {format_vector(T.coords(r.generator))}")


def cmd_gamma(args, out):
    FT = _load(args.file)
    T = _triple_for(FT, args.cone, args.ambient)
    G = build_chart(T).gamma
    out.append(f"Gamma of {T.name}: {G}")
    if G.finite and G.invariants:
        out.append("invariants: " + " x ".join(f"Z/{d}" for d in G.invariants))
    if G.generators:
        out.append("generators (fractional alpha-coordinates):")
        for g in G.generators:
            out.append(f"  {format_vector(g)}")


def cmd_chart(args, out):
    FT = _load(args.file)
    T = _triple_for(FT, args.cone, args.ambient)
    chart = build_chart(T)
    r, n = chart.shape
    out.append(f"chart {T.name}" + (f" in {args.ambient}" if args.ambient else ""))
    out.append(f"shape: ({r}, {n})  {chart.describe()}")
    out.append(f"coordinates: {' '.join(variable_names(T.labels))}")
    out.append(f"semigroup ring: {semigroup_basis(T).ring()}")
    out.append(f"Gamma: {chart.gamma}")


def cmd_transition(args, out):
    FT = _load(args.file)
    s, t = _maximal(FT, args.src), _maximal(FT, args.dst)
    face = frozenset(FT.fan.cone(s)) & frozenset(FT.fan.cone(t))
    M = transition_map(FT, (face, s), (face, t))
    out.append(f"transition {s} -> {t} on {FT.fan.face_label(face)}")
    out.append(f"E = {format_matrix(M.E)}")
    out.append(M.monomials())


def cmd_atlas(args, out):
    FT = _load(args.file)
    atlas = build_atlas(FT)
    fan = FT.fan
    out.append(f"charts: {len(atlas.charts)}")
    for (face, s), chart in atlas.charts.items():
        out.append(f"  X[{fan.face_label(face)} in {s}]  shape {chart.shape}  {chart.describe()}")
    out.append(f"transitions: {len(atlas.transitions)}")
    for (s, t), M in atlas.transitions.items():
        out.append(f"  {s} -> {t}: E = {format_matrix(M.E)}  {M.monomials()}")
    inverses = sum(1 for c in atlas.certificates if c[0] == "inverse")
    cocycles = sum(1 for c in atlas.certificates if c[0] == "cocycle")
    out.append(f"verified: {inverses} inverse pairs, {cocycles} cocycles")


def _morphism_table(morph, out, prefix=""):
    src, dst = morph.source.fan, morph.target.fan
    for (face, s), M in morph.charts.items():
        tface = morph.assignment[face]
        out.append(
            f"{prefix}X[{src.face_label(face)} in {s}] -> X[{dst.face_label(tface)} in {morph.ambient[s]}]: "
            f"E = {format_matrix(M.E)}  {M.monomials()}"
        )


def cmd_morphism(args, out):
    FT1 = _load(args.file)
    FT2 = _load(args.target)
    fld = FT1.field if FT1.field.param else FT2.field
    try:
        f = parse_matrix(args.map, fld)
    except QtxError as exc:
        raise UsageError(f"bad --map: {exc.message}") from None
    if len(f) != FT2.dim or len(f[0]) != FT1.dim:
        raise UsageError(f"--map must be {FT2.dim}x{FT1.dim}")
    morph = toric_morphism(f, FT1, FT2)
    _morphism_table(morph, out)
    out.append(f"compatibility squares verified: {morph.squares}")


def cmd_blowup(args, out):
    FT = _load(args.file)
    try:
        w = parse_vector(args.ray, FT.field)
    except QtxError as exc:
        raise UsageError(f"bad --ray: {exc.message}") from None
    cone = _maximal(FT, args.cone) if args.cone else None
    FT2, morph = blowup(FT, w, args.id, cone=cone)
    out.append(print_fanfile(FT2).rstrip("\n"))
    out.append("# blow-down morphism")
    _morphism_table(morph, out, prefix="# ")
    for e in morph.exceptional:
        out.append(f"# exceptional: {e.variable} = 0 in {e.cone} maps into {{"
                   f"{', '.join(x + ' = 0' for x in variable_names(e.forced_zero))}}} of {e.target}")


def cmd_specialize(args, out):
    FT = _load(args.file)
    name, _, value = args.set.partition("=")
    param = FT.field.param
    if param is None or name.strip() != param.name:
        raise UsageError(f"the file has no parameter named {name.strip()!r}")
    if param.kind != "transcendental":
        raise UsageError("only transcendental parameters can be specialized")
    try:
        q = Fraction(value.strip())
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"{value!r} is not a rational number") from None
    out.append(print_fanfile(specialize(FT, q)).rstrip("\n"))


def cmd_orbits(args, out):
    FT = _load(args.file)
    T = _triple_for(FT, args.cone, args.ambient)
    names = dict(zip(T.labels, variable_names(T.labels)))
    for orb in orbit_table(T):
        face = FT.fan.face_label(frozenset(orb.face))
        zero = ", ".join(names[x] for x in orb.zero) or "none"
        out.append(f"{face}: {orb.describe(T.labels)}  zero: {zero}")


def cmd_check(args, out):
    FT = _load(args.file)
    atlas = build_atlas(FT)
    failures = 0
    certs = 0
    for M in atlas.transitions.values():
        if not (M.verify_certificates() and M.verify_exponents()):
            failures += 1
        certs += 1
    out.append(f"exact: {len(atlas.certificates)} gluing identities, {certs} certified transitions")
    if args.numeric:
        rng = np.random.default_rng(args.seed)
        for (s, t), M in atlas.transitions.items():
            back = atlas.transitions[(t, s)]
            for rep in (
                check_equivariance(M, args.samples, args.tol, rng, f"equivariance {s}->{t}"),
                check_well_defined(M, args.samples, args.tol, rng, f"well-defined {s}->{t}"),
                check_inverse_pair(M, back, args.samples, args.tol, rng, f"inverse {s}->{t}->{s}"),
            ):
                out.append(str(rep))
                failures += 0 if rep.ok else 1
    if failures:
        out.append(f"{failures} checks failed")
        raise CheckFailed()
    out.append("all checks passed")


def cmd_render(args, out):
    FT = _load(args.file)
    svg = render_svg(FT.fan)
    with open(args.svg, "w", encoding="utf-8") as fh:
        fh.write(svg)
    out.append(f"wrote {args.svg}")


# -- parser -------------------------------------------------------------------

def _u64(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _positive_int(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qtx", description="Exact toric quasifold computations on .qtx fan files.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=func)
        return sp

    sp = add("validate", cmd_validate, "parse and validate a fan file")
    sp.add_argument("file")
    for name, func, help_ in (
        ("dual", cmd_dual, "basis and dual basis of a cone"),
        ("gamma", cmd_gamma, "the group Q/L of a cone"),
        ("chart", cmd_chart, "affine chart of a cone"),
        ("orbits", cmd_orbits, "orbit-cone table of a cone"),
    ):
        sp = add(name, func, help_)
        sp.add_argument("--cone", required=True)
        sp.add_argument("--ambient")
        sp.add_argument("file")
    sp = add("transition", cmd_transition, "gluing map between two maximal cones")
    sp.add_argument("--from", dest="src", required=True)
    sp.add_argument("--to", dest="dst", required=True)
    sp.add_argument("file")
    sp = add("atlas", cmd_atlas, "all charts, transitions and gluing checks")
    sp.add_argument("file")
    sp = add("morphism", cmd_morphism, "toric morphism induced by a linear map")
    sp.add_argument("--map", required=True)
    sp.add_argument("--target", required=True)
    sp.add_argument("file")
    sp = add("blowup", cmd_blowup, "star subdivision and blow-down morphism")
    sp.add_argument("--cone")
    sp.add_argument("--ray", required=True)
    sp.add_argument("--id", required=True)
    sp.add_argument("file")
    sp = add("specialize", cmd_specialize, "bind the parameter to a rational value")
    sp.add_argument("--set", required=True)
    sp.add_argument("file")
    sp = add("check", cmd_check, "exact and numeric consistency checks")
    sp.add_argument("--numeric", action="store_true")
    sp.add_argument("--seed", type=_u64, default=0)
    sp.add_argument("--tol", type=_positive_float, default=DEFAULT_TOL)
    sp.add_argument("--samples", type=_positive_int, default=DEFAULT_SAMPLES)
    sp.add_argument("file")
    sp = add("render", cmd_render, "draw a two-dimensional fan as SVG")
    sp.add_argument("--svg", required=True)
    sp.add_argument("file")
    return p


def run(argv: Sequence[str]) -> tuple[int, str, str]:
    """Run a command; returns (status, stdout text, stderr text)."""
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as exc:
        return int(exc.code or 0), "", ""
    out: list[str] = []
    try:
        args.func(args, out)
    except UsageError as exc:
        return 2, "", f"qtx: error: {exc}\n"
    except ValidationError as exc:
        return 1, "", exc.render(getattr(exc, "path", args.file)) + "\n"
    except QtxError as exc:
        return 2, "", exc.render(getattr(exc, "path", args.file)) + "\n"
    except CheckFailed:
        return 1, "\n".join(out) + "\n", ""
    except (QtoricError, FanError) as exc:
        text = "\n".join(out) + "\n" if out else ""
        return 1, text, f"qtx: {type(exc).__name__}: {exc}\n"
    return 0, "\n".join(out) + "\n", ""


def main(argv: Sequence[str] | None = None) -> int:
    status, stdout, stderr = run(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(stdout)
    sys.stderr.write(stderr)
    return status


if __name__ == "__main__":
    raise SystemExit(main())
