"""Floating-point spot checks of monomial maps on explicit chart points.

A point keeps moduli and arguments separately, z_h = r_h * exp(2 pi i x_h),
so monomials with irrational exponents stay single valued.  Every equality
between representatives is tested against an explicit group-element witness.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import linalg as la
from .errors import ZeroSetMismatch
from .quasifold import MonomialMap
from .quasilattice import ConeTriple

DEFAULT_TOL = 1e-9
DEFAULT_SAMPLES = 100


@dataclass(frozen=True)
class ArgPoint:
    moduli: tuple
    args: tuple

    @property
    def zero_set(self) -> frozenset:
        return frozenset(i for i, r in enumerate(self.moduli) if r == 0.0)

    def complex(self) -> np.ndarray:
        return np.array(self.moduli) * np.exp(2j * np.pi * np.array(self.args))

    @classmethod
    def make(cls, moduli: Sequence[float], args: Sequence[float]) -> "ArgPoint":
        return cls(tuple(float(r) for r in moduli), tuple(float(x) for x in args))


def float_matrix(M: Sequence[Sequence]) -> np.ndarray:
    return np.array([[float(x) for x in row] for row in M], dtype=float)


def apply_exponents(E: np.ndarray, p: ArgPoint) -> ArgPoint:
    """Evaluate prod_h z_h^E[j][h] with 0^0 = 1."""
    r = np.array(p.moduli)
    x = np.array(p.args)
    zero = r == 0.0
    moduli, args = [], []
    for row in E:
        if np.any(row[zero] < 0):
            raise ValueError("negative exponent on a vanishing coordinate")
        if np.any(row[zero] > 0):
            moduli.append(0.0)
            args.append(0.0)
            continue
        live = ~zero
        moduli.append(float(np.prod(r[live] ** row[live])))
        args.append(float(np.dot(row[live], x[live])))
    return ArgPoint(tuple(moduli), tuple(args))


def apply_monomial(M: MonomialMap, p: ArgPoint) -> ArgPoint:
    return apply_exponents(float_matrix(M.E), p)


def gamma_act(coords: Sequence, p: ArgPoint) -> ArgPoint:
    """Act by the group element with alpha-coordinates ``coords``."""
    shift = [float(c) for c in coords]
    return ArgPoint(p.moduli, tuple(x + s for x, s in zip(p.args, shift)))


def torus_act(T: ConeTriple, u: Sequence[complex], p: ArgPoint) -> ArgPoint:
    """z_h -> exp(2 pi i alpha_h(u)) z_h for a complex vector u."""
    a = float_matrix(T.dual) @ np.asarray(u, dtype=complex)
    moduli = tuple(r * float(np.exp(-2 * np.pi * c.imag)) for r, c in zip(p.moduli, a))
    args = tuple(x + float(c.real) for x, c in zip(p.args, a))
    return ArgPoint(moduli, args)


def residual(p: ArgPoint, q: ArgPoint, witness: Sequence[float]) -> float:
    """Largest deviation from q = witness . p; raises on differing zero sets."""
    if p.zero_set != q.zero_set:
        raise ZeroSetMismatch(f"zero sets {sorted(p.zero_set)} and {sorted(q.zero_set)} differ")
    worst = 0.0
    for i, (rp, rq) in enumerate(zip(p.moduli, q.moduli)):
        worst = max(worst, abs(rp - rq) / max(1.0, abs(rp), abs(rq)))
        if rp != 0.0:
            d = q.args[i] - p.args[i] - float(witness[i])
            worst = max(worst, abs(d - round(d)))
    return worst


def orbit_equal(p: ArgPoint, q: ArgPoint, witness: Sequence[float], tol: float = DEFAULT_TOL) -> bool:
    return residual(p, q, witness) <= tol


@dataclass
class NumericReport:
    name: str
    passed: int = 0
    failed: int = 0
    max_residual: float = 0.0

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def record(self, res: float, tol: float):
        self.max_residual = max(self.max_residual, res)
        if res <= tol:
            self.passed += 1
        else:
            self.failed += 1

    def __str__(self):
        status = "ok" if self.ok else "FAILED"
        return f"{self.name}: {self.passed} passed, {self.failed} failed, max residual {self.max_residual:.3e} [{status}]"


def random_point(rng: np.random.Generator, T: ConeTriple, allow_zeros: bool = True) -> ArgPoint:
    n = T.dim
    moduli = rng.uniform(0.5, 2.0, size=n)
    if allow_zeros:
        for i in T.index:
            if rng.random() < 0.25:
                moduli[i] = 0.0
    args = rng.uniform(-1.0, 1.0, size=n)
    return ArgPoint.make(moduli, args)


def check_equivariance(M: MonomialMap, samples: int = DEFAULT_SAMPLES, tol: float = DEFAULT_TOL,
                       rng: np.random.Generator | None = None, name: str = "equivariance") -> NumericReport:
    """Phi(exp(u) . p) against exp(f(u)) . Phi(p) with witness 0.

    The right-hand side uses f and the target dual basis directly, so a
    wrong exponent matrix is caught.
    """
    rng = rng if rng is not None else np.random.default_rng(0)
    rep = NumericReport(name)
    f = float_matrix(M.f)
    E = float_matrix(M.E)
    n = M.source.dim
    zero = [0.0] * M.target.dim
    for _ in range(samples):
        p = random_point(rng, M.source)
        u = rng.uniform(-1, 1, size=n) + 1j * rng.uniform(-0.2, 0.2, size=n)
        lhs = apply_exponents(E, torus_act(M.source, u, p))
        rhs = torus_act(M.target, f @ u, apply_exponents(E, p))
        rep.record(residual(rhs, lhs, zero), tol)
    return rep


def check_well_defined(M: MonomialMap, samples: int = DEFAULT_SAMPLES, tol: float = DEFAULT_TOL,
                       rng: np.random.Generator | None = None, name: str = "well-defined") -> NumericReport:
    """Changing the source representative by a group element moves the image by the witness f(v)."""
    from .quasilattice import gamma_reduce

    rng = rng if rng is not None else np.random.default_rng(0)
    rep = NumericReport(name)
    E = float_matrix(M.E)
    S, T = M.source, M.target
    elements = []
    for g in S.quasilattice.gens:
        coords = gamma_reduce(g, S)
        v = la.lin_comb(coords, S.basis)  # the element of Q with exactly these coordinates
        witness = [float(c) for c in T.coords(la.mat_vec(M.f, v))]
        elements.append((coords, witness))
    if not elements:
        return rep
    for k in range(samples):
        coords, witness = elements[k % len(elements)]
        p = random_point(rng, S)
        q = gamma_act(coords, p)
        rep.record(residual(apply_exponents(E, p), apply_exponents(E, q), witness), tol)
    return rep


def check_inverse_pair(M: MonomialMap, N: MonomialMap, samples: int = DEFAULT_SAMPLES, tol: float = DEFAULT_TOL,
                       rng: np.random.Generator | None = None, name: str = "inverse pair") -> NumericReport:
    """N(M(p)) against p with witness 0 on points off the coordinate hyperplanes."""
    rng = rng if rng is not None else np.random.default_rng(0)
    rep = NumericReport(name)
    E1, E2 = float_matrix(M.E), float_matrix(N.E)
    zero = [0.0] * M.source.dim
    for _ in range(samples):
        p = random_point(rng, M.source, allow_zeros=False)
        rep.record(residual(p, apply_exponents(E2, apply_exponents(E1, p)), zero), tol)
    return rep


def corrupt(M: MonomialMap, delta=Fraction(1, 100), entry: tuple[int, int] = (0, 0)) -> MonomialMap:
    """Copy of M with one exponent shifted; a negative control for the checks above."""
    j, h = entry
    E = [list(row) for row in M.E]
    E[j][h] = E[j][h] + delta
    return replace(M, E=tuple(tuple(r) for r in E))
