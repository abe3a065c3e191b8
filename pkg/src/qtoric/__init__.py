"""Exact computations with algebraic toric quasifolds."""

from .errors import *  # noqa: F401,F403
from .fan import Fan, Ray, complete_to_basis, fan_map_assign, fan_validate, star_subdivide
from .linalg import dual_basis, hnf, lattice_membership, rank, snf
from .quasifold import (
    Atlas,
    Chart,
    FanTriple,
    MonomialMap,
    affine_morphism,
    blowup,
    build_atlas,
    build_chart,
    monomial_compose,
    orbit_table,
    quotient_morphism,
    semigroup_basis,
    specialize,
    toric_morphism,
    transition_map,
)
from .quasilattice import ConeTriple, GammaGroup, Quasilattice, character_pairing, gamma_group, gamma_reduce
from .qtxfile import canonical_text, parse_fanfile, print_fanfile
from .scalar import QQ, Field, Parameter, Scalar, expand_batch, parse_scalar, parse_vector

__version__ = "0.1.0"


def example_path(name: str) -> str:
    """Filesystem path of a shipped fan file, e.g. ``example_path("wps")``."""
    from importlib import resources

    return str(resources.files(__name__) / "data" / f"{name}.qtx")


def load_example(name: str) -> FanTriple:
    with open(example_path(name), encoding="utf-8") as fh:
        return parse_fanfile(fh.read())
