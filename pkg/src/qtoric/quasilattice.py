"""Quasilattices, cone triples and the groups Q/L of a cone."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property
from math import lcm, prod
from typing import Sequence

from . import _poly as P
from . import linalg as la
from .errors import DegenerateSpecialization, FieldMismatch, NotInQuasilattice, SingularBasis
from .fan import classify, complete_to_basis
from .scalar import QQ, Field, Scalar, common_field


class Quasilattice:
    """The Z-span of finitely many vectors spanning R^n.

    Membership is decided exactly: entries are expanded over the power
    basis of the field generator, cleared to integers and tested against a
    Hermite basis of the generators.
    """

    def __init__(self, gens: Sequence[Sequence[Scalar]]):
        gens = [tuple(g) for g in gens]
        if not gens:
            raise SingularBasis("a quasilattice needs generators")
        self.field = common_field([x for g in gens for x in g])
        self.gens = tuple(tuple(self.field(x) for x in g) for g in gens)
        self.dim = len(self.gens[0])
        if any(len(g) != self.dim for g in self.gens):
            raise SingularBasis("generators have different lengths")
        if la.rank(self.gens) != self.dim:
            raise SingularBasis("quasilattice generators do not span the ambient space")

    def __repr__(self):
        return f"Quasilattice({[tuple(str(x) for x in g) for g in self.gens]})"

    def __eq__(self, other):
        return isinstance(other, Quasilattice) and self.gens == other.gens

    def __hash__(self):
        return hash(self.gens)

    @cached_property
    def _embedding(self):
        flat = [x for g in self.gens for x in g]
        D, rows = expand_flat(flat, self.field)
        width = len(rows[0]) if rows else 1
        ints = []
        for k in range(len(self.gens)):
            ints.append([c for r in rows[k * self.dim:(k + 1) * self.dim] for c in r])
        L, ints = la.rational_rows_to_int(ints)
        return D, width, L, la.IntLattice(ints)

    def _int_vector(self, v: Sequence[Scalar]) -> list[int] | None:
        D, width, L, _ = self._embedding
        out = []
        for x in v:
            y = self.field(x) * D if D is not None else self.field(x)
            if y.den != P.ONE or len(y.num) > width:
                return None
            coeffs = tuple(y.num) + (Fraction(0),) * (width - len(y.num))
            for c in coeffs:
                c = c * L
                if c.denominator != 1:
                    return None
                out.append(int(c))
        return out

    def member(self, v: Sequence[Scalar]) -> list[int] | None:
        """Integer coefficients over ``gens`` reproducing v, or None."""
        if len(v) != self.dim:
            raise ValueError("dimension mismatch")
        try:
            iv = self._int_vector(v)
        except FieldMismatch:
            return None
        if iv is None:
            return None
        return self._embedding[3].coordinates(iv)

    def __contains__(self, v) -> bool:
        return self.member(v) is not None

    def combine(self, coeffs: Sequence[int]) -> tuple:
        return la.lin_comb([self.field(c) for c in coeffs], self.gens)

    def contains_lattice(self, other: "Quasilattice") -> bool:
        return all(self.member(g) is not None for g in other.gens)

    @property
    def is_rational(self) -> bool:
        return all(x.is_rational() for g in self.gens for x in g)

    def hnf_basis(self) -> "Quasilattice":
        """For rational generators: the Z-basis given by the Hermite form."""
        if not self.is_rational:
            raise ValueError("only rational quasilattices have a lattice basis")
        L, ints = la.rational_rows_to_int([[x.rational() for x in g] for g in self.gens])
        H, _ = la.hnf(ints)
        rows = [r for r in H if any(r)]
        return Quasilattice([tuple(QQ(Fraction(c, L)) for c in r) for r in rows])


def expand_flat(xs: Sequence[Scalar], fld: Field):
    """Power-basis rows of D*x for a common denominator D (None when D = 1)."""
    if fld.kind != "transcendental":
        rows = [x.expand() if fld.kind == "algebraic" else (x.rational(),) for x in xs]
        return None, rows
    den = P.ONE
    for x in xs:
        if x.den != P.ONE:
            g = P.gcd(den, x.den)
            den = P.mul(den, P.divmod_(x.den, g)[0])
    D = Scalar(fld, den)
    nums = [(x * D).num for x in xs]
    width = max([len(p) for p in nums] + [1])
    rows = [tuple(p) + (Fraction(0),) * (width - len(p)) for p in nums]
    return D, rows


@dataclass(frozen=True, eq=False)
class ConeTriple:
    """A cone with a quasilattice and a basis of R^n drawn from it.

    ``index`` lists the basis positions generating the cone; the remaining
    positions complete the basis.  ``labels`` name every position (ray ids
    for cone rays).  ``certificates[k]`` are the integer coefficients of
    basis vector k over the quasilattice generators.
    """

    rays: tuple
    basis: tuple
    labels: tuple
    index: tuple
    quasilattice: Quasilattice
    dual: tuple
    certificates: tuple
    name: str = ""
    ambient: str | None = None

    @classmethod
    def make(cls, rays, basis, labels, index, quasilattice: Quasilattice, name="", ambient=None) -> "ConeTriple":
        basis = tuple(tuple(quasilattice.field(x) for x in b) for b in basis)
        if len(basis) != quasilattice.dim:
            raise SingularBasis("basis size differs from the ambient dimension")
        dual = la.dual_basis(basis)
        certs = []
        for b in basis:
            c = quasilattice.member(b)
            if c is None:
                raise NotInQuasilattice(b, f"basis vector {fmt(b)} is not in the quasilattice")
            certs.append(tuple(c))
        return cls(tuple(rays), basis, tuple(labels), tuple(index), quasilattice, dual, tuple(certs), name, ambient)

    @classmethod
    def from_cone(cls, ray_vectors: Sequence[tuple[str, Sequence[Scalar]]], quasilattice: Quasilattice,
                  hints: Sequence[Sequence[Scalar]] = (), name: str = "") -> "ConeTriple":
        """Standalone triple: the rays followed by a greedy completion from hints then generators."""
        ids = [r for r, _ in ray_vectors]
        vecs = [tuple(v) for _, v in ray_vectors]
        basis = complete_to_basis(vecs, list(hints) + list(quasilattice.gens)) if len(vecs) < quasilattice.dim else vecs
        labels = ids + [f"u{k + 1}" for k in range(len(basis) - len(ids))]
        return cls.make(ids, basis, labels, range(len(ids)), quasilattice, name=name)

    def __eq__(self, other):
        return (
            isinstance(other, ConeTriple)
            and self.basis == other.basis
            and self.index == other.index
            and self.quasilattice == other.quasilattice
        )

    def __hash__(self):
        return hash((self.basis, self.index))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def field(self) -> Field:
        return self.quasilattice.field

    @property
    def r(self) -> int:
        return len(self.index)

    def face(self, positions: Sequence[int], name: str = "") -> "ConeTriple":
        """Induced triple on a face: same basis, smaller index set."""
        positions = tuple(sorted(positions))
        if not set(positions) <= set(self.index):
            raise ValueError("positions are not cone rays")
        rays = tuple(self.labels[i] for i in positions)
        return ConeTriple(rays, self.basis, self.labels, positions, self.quasilattice, self.dual,
                          self.certificates, name, self.ambient)

    def coords(self, v: Sequence[Scalar]) -> tuple:
        """alpha-coordinates (alpha_1(v), ..., alpha_n(v))."""
        return la.mat_vec(self.dual, v)

    def contains(self, v: Sequence[Scalar]):
        return classify(self.dual, self.index, self.labels, v)


def fmt(v) -> str:
    return "(" + ", ".join(str(x) for x in v) + ")"


# -- the group Q/L -------------------------------------------------------------

def gamma_reduce(v: Sequence[Scalar], T: ConeTriple) -> tuple:
    """Representative of [v] in Q/L as fractional alpha-coordinates in [0,1)^n."""
    if T.quasilattice.member(v) is None:
        raise NotInQuasilattice(tuple(v))
    return tuple(c.frac() for c in T.coords(v))


@dataclass(frozen=True)
class GammaGroup:
    triple: ConeTriple = dc_field(repr=False)
    generators: tuple
    finite: bool
    order: int | None
    invariants: tuple = ()

    def __str__(self):
        if not self.generators:
            return "trivial"
        if self.finite:
            return f"finite, order {self.order}"
        return "infinite"

    def contains_equal(self, x: Sequence[Scalar], y: Sequence[Scalar]) -> bool:
        """Elements given by coordinates agree iff their difference is integral."""
        return all((a - b).is_integer() for a, b in zip(x, y))


def gamma_group(T: ConeTriple) -> GammaGroup:
    gens = []
    for g in T.quasilattice.gens:
        red = gamma_reduce(g, T)
        if all(c.is_zero() for c in red) or red in gens:
            continue
        gens.append(red)
    finite = all(c.is_rational() for g in gens for c in g)
    order = None
    invariants: tuple = ()
    if finite:
        rows = [[c.rational() for c in g] for g in gens]
        n = T.dim
        D = lcm(1, *[x.denominator for r in rows for x in r])
        sup = [[int(x * D) for x in r] for r in rows] + [[D * (i == j) for j in range(n)] for i in range(n)]
        sub = [[D * (i == j) for j in range(n)] for i in range(n)]
        invariants = tuple(la.quotient_invariants(sup, sub))
        order = prod(invariants) if invariants else 1
    return GammaGroup(T, tuple(gens), finite, order, invariants)


def character_pairing(alpha_coords: Sequence, v: Sequence[Scalar], T: ConeTriple) -> Scalar:
    """Phase exponent -alpha(v) mod Z, with alpha given over the dual basis of T."""
    if T.quasilattice.member(v) is None:
        raise NotInQuasilattice(tuple(v))
    coords = T.coords(v)
    total = T.field.zero
    for c, x in zip(alpha_coords, coords):
        total = total + T.field(c) * x
    return (-total).frac()


# -- rational specialization ---------------------------------------------------

def specialize_scalar(x: Scalar, value) -> Scalar:
    return QQ(x.evaluate_at(value))


def specialize_vector(v: Sequence[Scalar], value) -> tuple:
    return tuple(specialize_scalar(x, value) for x in v)


def specialize_quasilattice(Q: Quasilattice, value) -> Quasilattice:
    gens = [specialize_vector(g, value) for g in Q.gens]
    if la.rank(gens) != Q.dim:
        raise DegenerateSpecialization("generators no longer span after specialization")
    return Quasilattice(gens).hnf_basis()


def specialize_triple(T: ConeTriple, value, Q: Quasilattice | None = None) -> ConeTriple:
    Q = Q or specialize_quasilattice(T.quasilattice, value)
    basis = [specialize_vector(b, value) for b in T.basis]
    if la.det(basis).is_zero():
        raise DegenerateSpecialization(f"basis of {T.name or 'the cone'} degenerates")
    return ConeTriple.make(T.rays, basis, T.labels, T.index, Q, T.name, T.ambient)
