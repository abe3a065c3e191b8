"""Simplicial cones and fans with exact generators.

Faces are frozensets of ray ids; the empty frozenset is the zero cone.
Inside a cone, basis positions follow the global ray order of the fan.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from . import linalg as la
from .errors import CannotComplete, NoTargetCone, NotInteriorPoint, QtoricError
from .scalar import Field, Scalar, common_field

INTERIOR = "interior"
BOUNDARY = "boundary"
OUTSIDE = "outside"


class FanError(QtoricError):
    """Structural problem with fan data (unknown ray, duplicate id, ...)."""


@dataclass(frozen=True)
class Ray:
    id: str
    generator: tuple


@dataclass(frozen=True)
class Containment:
    """Result of a cone membership test.

    ``face`` is the smallest face holding the point (a set of ray ids), or
    None when the point lies outside.
    """

    kind: str
    face: frozenset | None


def classify(dual: Sequence, index: Sequence[int], labels: Sequence[str], x: Sequence[Scalar]) -> Containment:
    """Locate ``x`` relative to the cone spanned by the basis positions ``index``.

    ``dual`` is the dual basis of a completed basis whose positions in
    ``index`` generate the cone; ``labels`` names each basis position.
    """
    coords = la.mat_vec(dual, x)
    inside = set(index)
    for i, c in enumerate(coords):
        if i not in inside and not c.is_zero():
            return Containment(OUTSIDE, None)
    face = []
    for i in index:
        s = coords[i].sign()
        if s < 0:
            return Containment(OUTSIDE, None)
        if s > 0:
            face.append(labels[i])
    kind = INTERIOR if len(face) == len(index) else BOUNDARY
    return Containment(kind, frozenset(face))


def complete_to_basis(vectors: Sequence[Sequence[Scalar]], pool: Iterable[Sequence[Scalar]]) -> list[tuple]:
    """Extend independent ``vectors`` to a basis greedily from ``pool``."""
    vectors = [tuple(v) for v in vectors]
    pool = [tuple(g) for g in pool]
    n = len(vectors[0]) if vectors else len(pool[0])
    basis = list(vectors)
    current = la.rank(basis) if basis else 0
    if current != len(basis):
        raise CannotComplete("the given vectors are linearly dependent")
    for g in pool:
        if current == n:
            break
        trial = basis + [tuple(g)]
        r = la.rank(trial)
        if r > current:
            basis, current = trial, r
    if current < n:
        raise CannotComplete("the candidate vectors do not span the ambient space")
    return basis


def standard_basis(fld: Field, n: int) -> list[tuple]:
    return [tuple(fld.one if i == j else fld.zero for j in range(n)) for i in range(n)]


@dataclass(frozen=True)
class Fan:
    """A simplicial fan given by its rays and named maximal cones."""

    dim: int
    rays: tuple  # tuple[Ray, ...]
    cones: tuple  # tuple[tuple[str, tuple[str, ...]], ...] (name, ray ids in ray order)
    _order: Mapping = dc_field(default=None, compare=False, repr=False)

    @classmethod
    def build(cls, dim: int, rays: Sequence[Ray], cones: Sequence[tuple[str, Sequence[str]]]) -> "Fan":
        order = {}
        for k, r in enumerate(rays):
            if r.id in order:
                raise FanError(f"duplicate ray id {r.id!r}")
            if len(r.generator) != dim:
                raise FanError(f"ray {r.id} has {len(r.generator)} coordinates, expected {dim}")
            order[r.id] = k
        names = set()
        norm = []
        for name, ids in cones:
            if name in names or name in order:
                raise FanError(f"duplicate cone id {name!r}")
            names.add(name)
            for rid in ids:
                if rid not in order:
                    raise FanError(f"cone {name} references unknown ray {rid!r}")
            if len(set(ids)) != len(ids):
                raise FanError(f"cone {name} repeats a ray")
            norm.append((name, tuple(sorted(ids, key=order.__getitem__))))
        fld = common_field([x for r in rays for x in r.generator])
        rays = tuple(Ray(r.id, tuple(fld(x) for x in r.generator)) for r in rays)
        return cls(dim, rays, tuple(norm), order)

    def __post_init__(self):
        if self._order is None:
            object.__setattr__(self, "_order", {r.id: k for k, r in enumerate(self.rays)})
        object.__setattr__(self, "_field", common_field([x for r in self.rays for x in r.generator]))
        object.__setattr__(self, "_frames", {})

    # -- lookups ---------------------------------------------------------

    @property
    def field(self) -> Field:
        return self._field

    @property
    def ray_ids(self) -> tuple[str, ...]:
        return tuple(r.id for r in self.rays)

    def generator(self, rid: str) -> tuple:
        return self.rays[self._order[rid]].generator

    def ray_index(self, rid: str) -> int:
        return self._order[rid]

    def sort_rays(self, ids: Iterable[str]) -> tuple[str, ...]:
        return tuple(sorted(ids, key=self._order.__getitem__))

    @property
    def cone_names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.cones)

    def cone(self, name: str) -> tuple[str, ...]:
        for cname, ids in self.cones:
            if cname == name:
                return ids
        raise KeyError(name)

    def has_cone(self, name: str) -> bool:
        return any(c == name for c, _ in self.cones)

    def faces_of(self, name: str) -> list[frozenset]:
        ids = self.cone(name)
        return [frozenset(s) for k in range(len(ids) + 1) for s in combinations(ids, k)]

    def faces(self) -> list[frozenset]:
        seen = set()
        out = []
        for name in self.cone_names:
            for f in self.faces_of(name):
                if f not in seen:
                    seen.add(f)
                    out.append(f)
        return sorted(out, key=self.face_key)

    def face_key(self, face: frozenset) -> tuple:
        return (len(face), tuple(sorted(self._order[r] for r in face)))

    def face_label(self, face: frozenset) -> str:
        if not face:
            return "0"
        for name, ids in self.cones:
            if frozenset(ids) == face:
                return name
        return "{" + ",".join(self.sort_rays(face)) + "}"

    def parse_face(self, text: str) -> frozenset:
        """Inverse of face_label; a bare ray id names its one-ray face."""
        text = text.strip()
        if text == "0":
            return frozenset()
        if self.has_cone(text):
            return frozenset(self.cone(text))
        if text in self._order:
            return frozenset([text])
        if text.startswith("{") and text.endswith("}"):
            ids = [s.strip() for s in text[1:-1].split(",") if s.strip()]
            face = frozenset(ids)
            if all(i in self._order for i in ids) and face in set(self.faces()):
                return face
        raise FanError(f"{text!r} is not a cone of the fan")

    def maximal_containing(self, face: frozenset) -> list[str]:
        return [name for name, ids in self.cones if face <= set(ids)]

    # -- geometry --------------------------------------------------------

    def cone_frame(self, ids: Sequence[str]) -> tuple[list[tuple], la.Matrix, list[str]]:
        """Completed basis, its dual and position labels for a cone."""
        ids = self.sort_rays(ids)
        cached = self._frames.get(ids)
        if cached is not None:
            return cached
        vecs = [self.generator(r) for r in ids]
        basis = complete_to_basis(vecs, standard_basis(self.field, self.dim))
        labels = list(ids) + [f"e{k + 1}" for k in range(self.dim - len(ids))]
        frame = (basis, la.dual_basis(basis), labels)
        self._frames[ids] = frame
        return frame

    def cone_contains(self, ids: Sequence[str], x: Sequence[Scalar]) -> Containment:
        ids = self.sort_rays(ids)
        _, dual, labels = self.cone_frame(ids)
        return classify(dual, range(len(ids)), labels, x)

    def locate(self, x: Sequence[Scalar]) -> frozenset | None:
        """Smallest cone of the fan holding ``x``, or None outside the support."""
        best = None
        for _, ids in self.cones:
            c = self.cone_contains(ids, x)
            if c.kind != OUTSIDE and (best is None or len(c.face) < len(best)):
                best = c.face
        return best


# -- validation --------------------------------------------------------------

@dataclass
class ValidationReport:
    violations: list[str] = dc_field(default_factory=list)
    separators: dict = dc_field(default_factory=dict)  # (cone, cone) -> covector

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


def _strict_feasible(rows: list[list[Scalar]], nvars: int) -> list[Scalar] | None:
    """A point y with r . y > 0 for every row, by Fourier-Motzkin elimination."""
    def contradictory(rs):
        return any(all(c.is_zero() for c in r) for r in rs)

    stages = []
    current = [list(r) for r in rows]
    if contradictory(current):
        return None
    for k in range(nvars):
        stages.append(current)
        pos = [r for r in current if r[k].sign() > 0]
        neg = [r for r in current if r[k].sign() < 0]
        nxt = [r for r in current if r[k].is_zero()]
        for p in pos:
            for q in neg:
                nxt.append([-q[k] * p[i] + p[k] * q[i] for i in range(nvars)])
        current = nxt
        if contradictory(current):
            return None
    fld = common_field([c for r in rows for c in r])
    y = [fld.zero] * nvars
    for k in range(nvars - 1, -1, -1):
        lo = hi = None
        for r in stages[k]:
            if r[k].is_zero():
                continue
            rest = fld.zero
            for i in range(k + 1, nvars):
                if not r[i].is_zero():
                    rest = rest + r[i] * y[i]
            bound = -rest / r[k]
            if r[k].sign() > 0:
                lo = bound if lo is None or bound > lo else lo
            else:
                hi = bound if hi is None or bound < hi else hi
        if lo is None and hi is None:
            y[k] = fld.zero
        elif hi is None:
            y[k] = lo + 1
        elif lo is None:
            y[k] = hi - 1
        else:
            y[k] = (lo + hi) / 2
    return y


def separating_functional(fan: Fan, s_ids: Sequence[str], t_ids: Sequence[str]) -> tuple | None:
    """Covector vanishing on the common rays, positive on the rest of s, negative on the rest of t."""
    common = set(s_ids) & set(t_ids)
    basis, dual, labels = fan.cone_frame(s_ids)
    n = fan.dim
    fld = fan.field
    # unknowns: y_i = l(b_i) for basis positions that are not common rays
    free = [i for i, lab in enumerate(labels) if lab not in common]
    rows = []
    for i in free:
        if labels[i] in s_ids:
            rows.append([fld.one if j == i else fld.zero for j in free])
    for rid in t_ids:
        if rid in common:
            continue
        coords = la.mat_vec(dual, fan.generator(rid))
        rows.append([-coords[j] for j in free])
    if not rows:
        y = [fld.zero] * len(free)
    else:
        y = _strict_feasible(rows, len(free))
        if y is None:
            return None
    full = [fld.zero] * n
    for j, i in enumerate(free):
        full[i] = y[j]
    return tuple(la.dot(full, [dual[i][c] for i in range(n)]) for c in range(n))


def fan_validate(fan: Fan) -> ValidationReport:
    rep = ValidationReport()
    n = fan.dim
    for r in fan.rays:
        if all(x.is_zero() for x in r.generator):
            rep.violations.append(f"ray {r.id}: zero generator")
    if rep.violations:
        return rep
    for a, b in combinations(fan.rays, 2):
        if la.rank([a.generator, b.generator]) == 1 and la.dot(a.generator, b.generator).sign() > 0:
            rep.violations.append(f"rays {a.id} and {b.id} span the same ray")
    sets = {name: set(ids) for name, ids in fan.cones}
    if not fan.cones:
        rep.violations.append("fan has no cones")
        return rep
    for name, ids in fan.cones:
        if la.rank([fan.generator(r) for r in ids]) != len(ids):
            rep.violations.append(f"cone {name}: generators are linearly dependent (not simplicial)")
        elif len(ids) != n:
            rep.violations.append(f"cone {name}: dimension {len(ids)} but support must be {n}-dimensional")
        for other, oids in fan.cones:
            if other != name and sets[name] < set(oids):
                rep.violations.append(f"cone {name} is a face of {other}, not maximal")
    if rep.violations:
        return rep
    for (s, sids), (t, tids) in combinations(fan.cones, 2):
        ell = separating_functional(fan, sids, tids)
        if ell is None:
            common = fan.face_label(frozenset(sids) & frozenset(tids))
            rep.violations.append(f"cones {s} and {t} overlap beyond their common face {common}")
        else:
            rep.separators[(s, t)] = ell
    if rep.violations:
        return rep
    # convex support: facets not shared must have every ray on one side
    counts: dict = {}
    for name, ids in fan.cones:
        for k in range(len(ids)):
            counts.setdefault(frozenset(ids[:k] + ids[k + 1:]), []).append((name, ids[k]))
    for facet, owners in sorted(counts.items(), key=lambda kv: fan.face_key(kv[0])):
        if len(owners) > 2:
            rep.violations.append(f"facet {fan.face_label(facet)} lies in {len(owners)} maximal cones")
        elif len(owners) == 1:
            name, opposite = owners[0]
            basis, dual, labels = fan.cone_frame(fan.cone(name))
            alpha = dual[labels.index(opposite)]
            for r in fan.rays:
                if la.dot(alpha, r.generator).sign() < 0:
                    rep.violations.append(
                        f"support is not convex: ray {r.id} lies beyond boundary facet "
                        f"{fan.face_label(facet)} of {name}"
                    )
                    break
    return rep


# -- constructions -----------------------------------------------------------

def star_subdivide(fan: Fan, w: Sequence[Scalar], new_id: str, cone: str | None = None) -> Fan:
    """Subdivide the fan along the ray through ``w``.

    ``w`` must lie in the relative interior of a cone of dimension >= 2;
    when ``cone`` is given that cone must be the one.
    """
    if new_id in fan.ray_ids or fan.has_cone(new_id):
        raise FanError(f"id {new_id!r} is already used")
    fld = fan.field
    w = tuple(fld(x) for x in w)
    if len(w) != fan.dim:
        raise NotInteriorPoint(f"{la_fmt(w)} has the wrong dimension")
    if all(x.is_zero() for x in w):
        raise NotInteriorPoint("the zero vector is not interior to any ray-bearing cone")
    delta = fan.locate(w)
    if delta is None:
        raise NotInteriorPoint(f"{la_fmt(w)} lies outside the support of the fan")
    if len(delta) == 1:
        (rid,) = delta
        raise NotInteriorPoint(f"{la_fmt(w)} lies on the existing ray {rid}")
    if cone is not None and frozenset(fan.cone(cone)) != delta:
        raise NotInteriorPoint(
            f"{la_fmt(w)} is interior to {fan.face_label(delta)}, not to {cone}"
        )
    rays = list(fan.rays) + [Ray(new_id, w)]
    cones = []
    order = {r.id: k for k, r in enumerate(rays)}
    for name, ids in fan.cones:
        if not delta <= set(ids):
            cones.append((name, ids))
            continue
        for r in sorted(delta, key=order.__getitem__):
            new_ids = [x for x in ids if x != r] + [new_id]
            cones.append((f"{name}_{r}", new_ids))
    return Fan.build(fan.dim, rays, cones)


def la_fmt(v) -> str:
    return "(" + ", ".join(str(x) for x in v) + ")"


def apply_linear(f: Sequence[Sequence[Scalar]], v: Sequence[Scalar]) -> tuple:
    return la.mat_vec(f, v)


def image_face(f, fan1: Fan, face: frozenset, fan2: Fan) -> frozenset:
    """Smallest cone of fan2 containing f(face); raises NoTargetCone."""
    images = [apply_linear(f, fan1.generator(r)) for r in fan1.sort_rays(face)]
    best = None
    for _, ids in fan2.cones:
        if images:
            basis, dual, labels = fan2.cone_frame(ids)
            found = set()
            ok = True
            for x in images:
                c = classify(dual, range(len(ids)), labels, x)
                if c.kind == OUTSIDE:
                    ok = False
                    break
                found |= c.face
            if not ok:
                continue
            cand = frozenset(found)
        else:
            cand = frozenset()
        if best is None or fan2.face_key(cand) < fan2.face_key(best):
            best = cand
    if best is None:
        raise NoTargetCone(fan1.face_label(face))
    return best


def fan_map_assign(f, fan1: Fan, fan2: Fan) -> dict:
    """Map every cone of fan1 (as a face) to the smallest cone of fan2 holding its image."""
    return {face: image_face(f, fan1, face, fan2) for face in fan1.faces()}
