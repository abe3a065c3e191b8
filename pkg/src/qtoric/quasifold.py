"""Fan triples, affine charts, monomial maps, atlases and toric morphisms."""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from functools import cached_property, singledispatch
from itertools import combinations, permutations
from typing import Mapping, Sequence

from . import linalg as la
from .errors import (
    ChartMismatch,
    CocycleFailure,
    CompatibilityFailure,
    ConeNotMapped,
    DegenerateSpecialization,
    NegativeExponentOnVanishingCoordinate,
    NotASuperlattice,
    NotInQuasilattice,
    QuasilatticeNotMapped,
)
from .fan import OUTSIDE, Fan, FanError, Ray, fan_map_assign, fan_validate, star_subdivide
from .quasilattice import (
    ConeTriple,
    GammaGroup,
    Quasilattice,
    fmt,
    gamma_group,
    specialize_quasilattice,
    specialize_scalar,
    specialize_triple,
    specialize_vector,
)
from .scalar import Scalar


class InvalidFan(FanError):
    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


# -- fan triples -----------------------------------------------------------------

class FanTriple:
    """A validated fan with a quasilattice containing every ray generator."""

    def __init__(self, fan: Fan, quasilattice: Quasilattice | None = None,
                 hints: Mapping[frozenset, Sequence] | None = None, validate: bool = True):
        self.fan = fan
        if quasilattice is None:
            quasilattice = Quasilattice([r.generator for r in fan.rays])
        self.quasilattice = quasilattice
        self.hints = dict(hints or {})
        for r in fan.rays:
            if quasilattice.member(r.generator) is None:
                raise NotInQuasilattice(r.generator, f"generator of ray {r.id} is not in the quasilattice")
        if validate:
            report = fan_validate(fan)
            if not report.ok:
                raise InvalidFan(report.violations)
            self.report = report
        self._induced: dict = {}

    @property
    def field(self):
        return self.quasilattice.field

    @property
    def dim(self) -> int:
        return self.fan.dim

    @cached_property
    def maximal(self) -> dict[str, ConeTriple]:
        out = {}
        for name, ids in self.fan.cones:
            out[name] = ConeTriple.make(
                ids, [self.fan.generator(r) for r in ids], ids, range(len(ids)), self.quasilattice,
                name=name, ambient=name,
            )
        return out

    def induced(self, face: frozenset, ambient: str) -> ConeTriple:
        key = (face, ambient)
        if key not in self._induced:
            T = self.maximal[ambient]
            if not face <= set(T.rays):
                raise FanError(f"{self.fan.face_label(face)} is not a face of {ambient}")
            positions = [T.labels.index(r) for r in face]
            self._induced[key] = T.face(positions, name=self.fan.face_label(face))
        return self._induced[key]

    def cone_triple(self, face: frozenset, ambient: str | None = None) -> ConeTriple:
        if ambient is not None:
            return self.induced(face, ambient)
        for name, ids in self.fan.cones:
            if frozenset(ids) == face:
                return self.maximal[name]
        ids = self.fan.sort_rays(face)
        return ConeTriple.from_cone(
            [(r, self.fan.generator(r)) for r in ids], self.quasilattice,
            hints=self.hints.get(face, ()), name=self.fan.face_label(face),
        )

    def inclusions(self) -> list[tuple[frozenset, str]]:
        """All (face, maximal cone) pairs, ordered by cone then face."""
        return [(f, name) for name in self.fan.cone_names
                for f in sorted(self.fan.faces_of(name), key=self.fan.face_key)]

    def __eq__(self, other):
        return (isinstance(other, FanTriple) and self.fan == other.fan
                and self.quasilattice == other.quasilattice)


# -- charts and semigroups -----------------------------------------------------

@dataclass(frozen=True, eq=False)
class Chart:
    """Affine toric quasifold (C^r x (C*)^(n-r)) / Gamma of a cone triple."""

    triple: ConeTriple
    name: str = ""

    @property
    def shape(self) -> tuple[int, int]:
        return (self.triple.r, self.triple.dim)

    @cached_property
    def gamma(self) -> GammaGroup:
        return gamma_group(self.triple)

    def describe(self) -> str:
        parts = ["C" if i in self.triple.index else "C*" for i in range(self.triple.dim)]
        return "(" + " x ".join(parts) + ")/Gamma"


def build_chart(T: ConeTriple, name: str = "") -> Chart:
    return Chart(T, name or T.name)


@dataclass(frozen=True)
class SemigroupBasis:
    """Generators of S: alpha_i for cone positions, +-alpha_j for the rest."""

    triple: ConeTriple = dc_field(repr=False)
    generators: tuple  # (position, sign)

    def covectors(self) -> list[tuple]:
        return [tuple(s * x for x in self.triple.dual[i]) for i, s in self.generators]

    def ring(self) -> str:
        names = []
        for i, s in self.generators:
            names.append(f"xi{i + 1}" + ("" if s > 0 else "^-1"))
        return "C[" + ", ".join(names) + "]"


def semigroup_basis(T: ConeTriple) -> SemigroupBasis:
    gens = []
    for i in range(T.dim):
        gens.append((i, 1))
        if i not in T.index:
            gens.append((i, -1))
    return SemigroupBasis(T, tuple(gens))


# -- monomial maps ---------------------------------------------------------------

_DIGITS = re.compile(r"^[A-Za-z_]*?(\d+)$")


def variable_names(labels: Sequence[str]) -> list[str]:
    """z + trailing digits of each label when unambiguous, else z_label."""
    names = []
    for lab in labels:
        m = _DIGITS.match(lab)
        names.append("z" + m.group(1) if m else "z_" + lab)
    if len(set(names)) != len(names):
        names = ["z_" + lab for lab in labels]
    return names


def _exponent_text(e: Scalar) -> str:
    s = str(e)
    if re.fullmatch(r"\d+|[A-Za-z_]\w*", s):
        return s
    return f"({s})"


def format_monomials(E: Sequence[Sequence[Scalar]], names: Sequence[str]) -> str:
    rows = []
    for row in E:
        factors = []
        for e, z in zip(row, names):
            if e.is_zero():
                continue
            factors.append(z if e == 1 else f"{z}^{_exponent_text(e)}")
        rows.append("*".join(factors) if factors else "1")
    return "[" + " : ".join(rows) + "]"


@dataclass(frozen=True, eq=False)
class MonomialMap:
    """Exponent-matrix form of the map between charts induced by a linear map f.

    ``E[j][h] = alpha_j^target(f(v_h^source))``.  ``certificates[k]`` gives
    integer coefficients writing f(g_k) over the target generators, for each
    source quasilattice generator g_k.
    """

    E: tuple
    source: ConeTriple
    target: ConeTriple
    f: tuple
    certificates: tuple

    def monomials(self) -> str:
        return format_monomials(self.E, variable_names(self.source.labels))

    def verify_certificates(self) -> bool:
        Q1, Q2 = self.source.quasilattice, self.target.quasilattice
        if len(self.certificates) != len(Q1.gens):
            return False
        for g, c in zip(Q1.gens, self.certificates):
            if la.mat_vec(self.f, g) != Q2.combine(c):
                return False
        return True

    def verify_exponents(self) -> bool:
        """E applied to alpha-coordinates of each generator gives those of its image."""
        for g in self.source.quasilattice.gens:
            lhs = la.mat_vec(self.E, self.source.coords(g))
            if lhs != self.target.coords(la.mat_vec(self.f, g)):
                return False
        return True

    def is_identity(self) -> bool:
        return la.is_identity(self.E)


def exponent_matrix(f, T1: ConeTriple, T2: ConeTriple) -> tuple:
    images = [la.mat_vec(f, v) for v in T1.basis]
    return tuple(tuple(la.dot(alpha, img) for img in images) for alpha in T2.dual)


def affine_morphism(f, T1: ConeTriple, T2: ConeTriple) -> MonomialMap:
    fld = T1.field if T1.field.param else T2.field
    f = tuple(tuple(fld(x) for x in row) for row in f)
    for h in T1.index:
        img = la.mat_vec(f, T1.basis[h])
        if T2.contains(img).kind == OUTSIDE:
            raise ConeNotMapped(
                f"image {fmt(img)} of {T1.labels[h]} leaves the target cone {T2.name or ''}".rstrip()
            )
    certs = []
    same = T1.quasilattice == T2.quasilattice and la.is_identity(f)
    for k, g in enumerate(T1.quasilattice.gens):
        if same:
            c = [int(i == k) for i in range(len(T1.quasilattice.gens))]
        else:
            c = T2.quasilattice.member(la.mat_vec(f, g))
        if c is None:
            raise QuasilatticeNotMapped(g)
        certs.append(tuple(c))
    E = exponent_matrix(f, T1, T2)
    for h in T1.index:
        for j in range(len(E)):
            if E[j][h].sign() < 0:
                raise NegativeExponentOnVanishingCoordinate(
                    f"exponent E[{j}][{h}] = {E[j][h]} is negative on a vanishing coordinate"
                )
    return MonomialMap(E, T1, T2, f, tuple(certs))


def monomial_compose(M2: MonomialMap, M1: MonomialMap) -> MonomialMap:
    """The map induced by g o f, from the maps of f (M1) and g (M2)."""
    if M1.target != M2.source:
        raise ChartMismatch("target chart of the first map differs from the source of the second")
    E = la.mat_mul(M2.E, M1.E)
    f = la.mat_mul(M2.f, M1.f)
    certs = []
    for c in M1.certificates:
        total = [0] * len(M2.certificates[0]) if M2.certificates else []
        for ck, d in zip(c, M2.certificates):
            if ck:
                total = [t + ck * x for t, x in zip(total, d)]
        certs.append(tuple(total))
    return MonomialMap(E, M1.source, M2.target, f, tuple(certs))


def identity_map(T: ConeTriple) -> MonomialMap:
    return affine_morphism(la.identity(T.field, T.dim), T, T)


def transition_map(FT: FanTriple, src: tuple[frozenset, str], dst: tuple[frozenset, str]) -> MonomialMap:
    """Gluing map from X^sigma_(delta cap gamma) to X^tau_(delta cap gamma)."""
    (delta, sigma), (gamma, tau) = src, dst
    common = frozenset(delta) & frozenset(gamma)
    T1 = FT.induced(common, sigma)
    T2 = FT.induced(common, tau)
    return affine_morphism(la.identity(FT.field, FT.dim), T1, T2)


# -- atlas -------------------------------------------------------------------------

@dataclass
class Atlas:
    triple: FanTriple
    charts: dict  # (face, cone) -> Chart
    transitions: dict  # (sigma, tau) -> MonomialMap on the common face
    certificates: list = dc_field(default_factory=list)

    def transition(self, src, dst) -> MonomialMap:
        """h from ``src`` to ``dst``: maximal cone names, or (face, cone) pairs for smaller charts."""
        if isinstance(src, str) and isinstance(dst, str):
            return self.transitions[(src, dst)]
        return transition_map(self.triple, src, dst)


def build_atlas(FT: FanTriple) -> Atlas:
    fan = FT.fan
    charts = {(f, s): build_chart(FT.induced(f, s), f"X[{fan.face_label(f)} in {s}]")
              for f, s in FT.inclusions()}
    names = fan.cone_names
    common = {(s, t): frozenset(fan.cone(s)) & frozenset(fan.cone(t)) for s in names for t in names}
    trans = {}
    for s, t in permutations(names, 2):
        face = common[(s, t)]
        trans[(s, t)] = transition_map(FT, (face, s), (face, t))
    certs = []
    for s, t in combinations(names, 2):
        back = monomial_compose(trans[(t, s)], trans[(s, t)])
        forth = monomial_compose(trans[(s, t)], trans[(t, s)])
        if not (back.is_identity() and forth.is_identity()):
            raise CocycleFailure((s, t), f"transitions between {s} and {t} are not mutually inverse")
        certs.append(("inverse", s, t))
    for s, t, r in permutations(names, 3):
        face = common[(s, t)] & frozenset(fan.cone(r))
        h_ts = transition_map(FT, (face, s), (face, t))
        h_rt = transition_map(FT, (face, t), (face, r))
        h_rs = transition_map(FT, (face, s), (face, r))
        comp = monomial_compose(h_rt, h_ts)
        if comp.E != h_rs.E or comp.source != h_rs.source or comp.target != h_rs.target:
            raise CocycleFailure((s, t, r))
        certs.append(("cocycle", s, t, r))
    return Atlas(FT, charts, trans, certs)


# -- toric morphisms -----------------------------------------------------------------

@dataclass
class ExceptionalEntry:
    cone: str
    variable: str
    target: str
    forced_zero: tuple


@dataclass
class ToricMorphism:
    f: tuple
    source: FanTriple
    target: FanTriple
    assignment: dict  # face of source -> face of target
    ambient: dict  # maximal cone of source -> maximal cone of target
    charts: dict  # (face, cone) -> MonomialMap
    squares: int = 0
    exceptional: list = dc_field(default_factory=list)

    def chart_map(self, face, cone) -> MonomialMap:
        return self.charts[(face, cone)]


def _transition_E(T_from: ConeTriple, T_to: ConeTriple) -> tuple:
    return tuple(tuple(la.dot(alpha, v) for v in T_from.basis) for alpha in T_to.dual)


def toric_morphism(f, FT1: FanTriple, FT2: FanTriple) -> ToricMorphism:
    fld = FT1.field if FT1.field.param else FT2.field
    f = tuple(tuple(fld(x) for x in row) for row in f)
    assign = fan_map_assign(f, FT1.fan, FT2.fan)
    ambient = {}
    for name, ids in FT1.fan.cones:
        img = assign[frozenset(ids)]
        hosts = FT2.fan.maximal_containing(img)
        ambient[name] = hosts[0]
    for g in FT1.quasilattice.gens:
        if FT2.quasilattice.member(la.mat_vec(f, g)) is None:
            raise QuasilatticeNotMapped(g)
    charts = {}
    for face, sigma in FT1.inclusions():
        T1 = FT1.induced(face, sigma)
        T2 = FT2.induced(assign[face], ambient[sigma])
        charts[(face, sigma)] = affine_morphism(f, T1, T2)
    squares = 0
    names = FT1.fan.cone_names
    for s, t in permutations(names, 2):
        Ms = charts[(frozenset(FT1.fan.cone(s)), s)]
        Mt = charts[(frozenset(FT1.fan.cone(t)), t)]
        h1 = _transition_E(FT1.maximal[s], FT1.maximal[t])
        h2 = _transition_E(FT2.maximal[ambient[s]], FT2.maximal[ambient[t]])
        if la.mat_mul(h2, Ms.E) != la.mat_mul(Mt.E, h1):
            raise CompatibilityFailure(f"chart maps of {s} and {t} do not commute with the gluing")
        squares += 1
    return ToricMorphism(f, FT1, FT2, assign, ambient, charts, squares)


def quotient_morphism(T: ConeTriple, Qprime: Quasilattice, new_basis: Sequence | None = None) -> MonomialMap:
    """Identity-induced map from the triple over Q to a triple over a larger Q'."""
    for g in T.quasilattice.gens:
        if Qprime.member(g) is None:
            raise NotASuperlattice(f"generator {fmt(g)} of Q is not in Q'")
    basis = list(T.basis) if new_basis is None else [tuple(b) for b in new_basis]
    if len(basis) != T.dim:
        raise ValueError("the new basis must have n vectors")
    for i in T.index:
        old, new = T.basis[i], tuple(Qprime.field(x) for x in basis[i])
        if la.rank([old, new]) != 1 or la.dot(old, new).sign() <= 0:
            raise ValueError(f"new generator {fmt(new)} does not span the ray of {T.labels[i]}")
    T2 = ConeTriple.make(T.rays, basis, T.labels, T.index, Qprime, T.name, T.ambient)
    return affine_morphism(la.identity(Qprime.field, T.dim), T, T2)


def quotient_generators(Q: Quasilattice, Qprime: Quasilattice) -> list[tuple]:
    """Generators of Q' outside Q; their classes generate Q'/Q."""
    return [g for g in Qprime.gens if Q.member(g) is None]


# -- orbits ----------------------------------------------------------------------------

@dataclass(frozen=True)
class Orbit:
    face: tuple
    zero: tuple
    nonzero: tuple

    def describe(self, labels: Sequence[str]) -> str:
        parts = ["{0}" if lab in self.zero else "C*" for lab in labels]
        return "(" + " x ".join(parts) + ")/Gamma"


def orbit_table(T: ConeTriple) -> list[Orbit]:
    out = []
    for k in range(len(T.index) + 1):
        for sub in combinations(T.index, k):
            zero = tuple(T.labels[i] for i in sub)
            nonzero = tuple(T.labels[i] for i in range(T.dim) if i not in sub)
            out.append(Orbit(zero, zero, nonzero))
    return out


# -- blow-ups --------------------------------------------------------------------------

def blowup(FT: FanTriple, w: Sequence[Scalar], new_id: str, cone: str | None = None):
    """Star subdivision at w plus the blow-down morphism to the old triple."""
    w = tuple(FT.field(x) for x in w)
    if FT.quasilattice.member(w) is None:
        raise NotInQuasilattice(w)
    fan2 = star_subdivide(FT.fan, w, new_id, cone=cone)
    FT2 = FanTriple(fan2, FT.quasilattice, FT.hints)
    morph = toric_morphism(la.identity(FT.field, FT.dim), FT2, FT)
    for name, ids in fan2.cones:
        if new_id not in ids:
            continue
        face = frozenset(ids)
        M = morph.charts[(face, name)]
        h = M.source.labels.index(new_id)
        forced = []
        for j in M.target.index:
            if M.E[j][h].sign() <= 0:
                raise CompatibilityFailure(
                    f"exceptional coordinate of {name} does not force {M.target.labels[j]} to vanish"
                )
            forced.append(M.target.labels[j])
        morph.exceptional.append(ExceptionalEntry(
            name, variable_names(M.source.labels)[h], FT.fan.face_label(morph.assignment[face]), tuple(forced)
        ))
    return FT2, morph


# -- specialization -------------------------------------------------------------------

@singledispatch
def specialize(obj, value):
    if isinstance(obj, tuple):
        return tuple(specialize(x, value) for x in obj)
    raise TypeError(f"cannot specialize {type(obj).__name__}")


@specialize.register
def _(obj: Scalar, value):
    return specialize_scalar(obj, value)


@specialize.register
def _(obj: Quasilattice, value):
    return specialize_quasilattice(obj, value)


@specialize.register
def _(obj: ConeTriple, value):
    return specialize_triple(obj, value)


@specialize.register
def _(obj: FanTriple, value):
    fan = obj.fan
    rays = []
    for r in fan.rays:
        g = specialize_vector(r.generator, value)
        if all(x.is_zero() for x in g):
            raise DegenerateSpecialization(f"ray {r.id} collapses to zero")
        rays.append(Ray(r.id, g))
    fan2 = Fan.build(fan.dim, rays, fan.cones)
    Q = specialize_quasilattice(obj.quasilattice, value)
    hints = {k: [specialize_vector(v, value) for v in vs] for k, vs in obj.hints.items()}
    try:
        return FanTriple(fan2, Q, hints)
    except InvalidFan as exc:
        raise DegenerateSpecialization(f"fan degenerates: {exc}") from exc


@specialize.register
def _(obj: MonomialMap, value):
    f = tuple(specialize_vector(row, value) for row in obj.f)
    Q1 = specialize_quasilattice(obj.source.quasilattice, value)
    Q2 = Q1 if obj.target.quasilattice == obj.source.quasilattice else \
        specialize_quasilattice(obj.target.quasilattice, value)
    return affine_morphism(f, specialize_triple(obj.source, value, Q1), specialize_triple(obj.target, value, Q2))
