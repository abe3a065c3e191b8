import itertools
from fractions import Fraction

import pytest

from qtoric import linalg as la
from qtoric.errors import (
    ChartMismatch,
    ConeNotMapped,
    DegenerateSpecialization,
    NotASuperlattice,
    NotInQuasilattice,
    NotInteriorPoint,
    QuasilatticeNotMapped,
)
from qtoric.quasifold import (
    FanTriple,
    affine_morphism,
    blowup,
    build_atlas,
    build_chart,
    format_monomials,
    identity_map,
    monomial_compose,
    orbit_table,
    quotient_morphism,
    semigroup_basis,
    specialize,
    toric_morphism,
    transition_map,
    variable_names,
)
from qtoric.quasilattice import ConeTriple, Quasilattice
from qtoric.scalar import QQ, parse_matrix, parse_vector


def _transition(FT, s, t):
    face = frozenset(FT.fan.cone(s)) & frozenset(FT.fan.cone(t))
    return transition_map(FT, (face, s), (face, t))


# -- charts -----------------------------------------------------------------------

def test_chart_shapes(examples):
    S, W = examples["quasisphere"], examples["wps"]
    sigma = build_chart(S.maximal["sigma"])
    assert sigma.shape == (1, 1) and sigma.describe() == "(C)/Gamma"
    assert str(sigma.gamma) == "infinite"
    delta = build_chart(W.induced(frozenset({"v1"}), "tau"))
    assert delta.shape == (1, 2) and delta.describe() == "(C x C*)/Gamma"
    zero = build_chart(W.induced(frozenset(), "sigma"))
    assert zero.shape == (0, 2)


def test_semigroup_bases(examples):
    S, W = examples["quasisphere"], examples["wps"]
    assert semigroup_basis(W.maximal["sigma"]).ring() == "C[xi1, xi2]"
    T = W.induced(frozenset({"v1"}), "tau")
    sg = semigroup_basis(T)
    assert sg.ring() == "C[xi1, xi2, xi2^-1]"
    alpha = T.dual
    assert sg.covectors() == [alpha[0], alpha[1], la.vec_scale(T.field(-1), alpha[1])]
    assert semigroup_basis(S.induced(frozenset(), "sigma")).ring() == "C[xi1, xi1^-1]"


def test_orbit_tables(examples):
    W = examples["wps"]
    T = W.induced(frozenset({"v1"}), "tau")
    rows = [o.describe(T.labels) for o in orbit_table(T)]
    assert rows == ["(C* x C*)/Gamma", "({0} x C*)/Gamma"]
    assert len(orbit_table(W.maximal["sigma"])) == 4
    assert len(orbit_table(W.induced(frozenset(), "rho"))) == 1


def test_variable_names_and_monomials():
    assert variable_names(["v1", "v4", "w"]) == ["z1", "z4", "z_w"]
    E = [[QQ(1), QQ(0)], [QQ(-1), QQ(2)]]
    assert format_monomials(E, ["z1", "z2"]) == "[z1 : z1^(-1)*z2^2]"
    assert format_monomials([[QQ(0)]], ["z1"]) == "[1]"


# -- affine morphisms ------------------------------------------------------------

def test_identity_map(examples):
    T = examples["kite"].maximal["rho"]
    M = identity_map(T)
    assert M.is_identity()
    assert M.verify_certificates() and M.verify_exponents()
    other = affine_morphism(la.identity(T.field, 2), T, T)
    assert monomial_compose(other, M).E == other.E


def test_inclusions_into_tau(examples):
    hir, wps = examples["hirzebruch"], examples["wps"]
    ident = la.identity(hir.field, 2)
    eta = affine_morphism(ident, hir.maximal["eta"], wps.maximal["tau"])
    theta = affine_morphism(ident, hir.maximal["theta"], wps.maximal["tau"])
    assert eta.monomials() == "[z4^(1/a) : z2*z4^(1/a)]"
    assert theta.monomials() == "[z1*z4^(1/a) : z4^(1/a)]"
    assert eta.verify_exponents() and theta.verify_exponents()


def test_morphism_errors(examples):
    W = examples["wps"]
    fld = W.field
    ident = la.identity(fld, 2)
    with pytest.raises(ConeNotMapped):
        affine_morphism(ident, W.maximal["sigma"], W.maximal["tau"])
    half = [[fld(Fraction(1, 2)), fld(0)], [fld(0), fld(1)]]
    with pytest.raises(QuasilatticeNotMapped):
        affine_morphism(half, W.maximal["sigma"], W.maximal["sigma"])


def test_compose_mismatch(examples):
    W = examples["wps"]
    a = _transition(W, "sigma", "rho")
    with pytest.raises(ChartMismatch):
        monomial_compose(a, a)


def test_kite_round_trip(examples):
    K = examples["kite"]
    forth, back = _transition(K, "sigma", "tau"), _transition(K, "tau", "sigma")
    assert monomial_compose(back, forth).is_identity()
    S = examples["quasisphere"]
    assert monomial_compose(_transition(S, "tau", "sigma"), _transition(S, "sigma", "tau")).is_identity()


# -- atlas -----------------------------------------------------------------------

def test_atlas_sizes(examples):
    for name in ("quasisphere", "wps", "kite"):
        FT = examples[name]
        atlas = build_atlas(FT)
        n = len(FT.fan.cones)
        assert len(atlas.transitions) == n * (n - 1)
        # one chart per (face, maximal cone containing it)
        assert len(atlas.charts) == sum(len(FT.fan.faces_of(c)) for c in FT.fan.cone_names)
    atlas = build_atlas(examples["quasisphere"])
    assert atlas.transition("sigma", "tau").monomials() == "[z1^(-a)]"
    assert atlas.transition("tau", "sigma").monomials() == "[z2^(-1/a)]"
    kite = build_atlas(examples["kite"])
    assert kite.transition("sigma", "tau").E == parse_matrix("[[3 - beta^2, 0], [beta^2 - 3, 1]]",
                                                             examples["kite"].field)


def test_face_transitions_restrict(examples):
    W = examples["wps"]
    face = frozenset({"v1"})
    M = transition_map(W, (face, "sigma"), (face, "tau"))
    assert M.source.index == (0,) and M.target.index == (0,)
    assert M.E == _transition(W, "sigma", "tau").E


# -- toric morphisms ---------------------------------------------------------------

def test_identity_toric_morphism(examples):
    for name in ("wps", "kite"):
        FT = examples[name]
        morph = toric_morphism(la.identity(FT.field, FT.dim), FT, FT)
        assert all(M.is_identity() for M in morph.charts.values())
        n = len(FT.fan.cones)
        assert morph.squares == n * (n - 1)


def test_blow_down_charts(examples):
    hir, wps = examples["hirzebruch"], examples["wps"]
    morph = toric_morphism(la.identity(hir.field, 2), hir, wps)
    assert morph.ambient == {"sigma": "sigma", "rho": "rho", "eta": "tau", "theta": "tau"}
    for name in ("sigma", "rho"):
        assert morph.chart_map(frozenset(hir.fan.cone(name)), name).is_identity()


def test_blowup_errors(examples):
    W = examples["wps"]
    with pytest.raises(NotInteriorPoint):
        blowup(W, parse_vector("(1, 0)", W.field), "w")
    with pytest.raises(NotInQuasilattice):
        blowup(W, parse_vector("(0, -1/2)", W.field), "w")


def test_blowup_sigma_exceptional(examples):
    W = examples["wps"]
    FT2, morph = blowup(W, parse_vector("(1, 1)", W.field), "w", cone="sigma")
    assert len(FT2.fan.cones) == 4
    assert {e.forced_zero for e in morph.exceptional} == {("v1", "v3")}


# -- quotient morphisms -------------------------------------------------------------

def test_quotient_morphism(examples):
    S = examples["quasisphere"]
    fld = S.field
    a = fld.gen()
    T = ConeTriple.make(["v"], [[fld(1)]], ["v"], [0], Quasilattice([[fld(1)]]))
    M = quotient_morphism(T, Quasilattice([[fld(1)], [a]]), [[a]])
    assert M.E == ((1 / a,),) and M.verify_certificates()
    same = quotient_morphism(T, T.quasilattice)
    assert same.is_identity()
    with pytest.raises(NotASuperlattice):
        quotient_morphism(ConeTriple.make(["v"], [[a]], ["v"], [0], S.quasilattice), Quasilattice([[fld(1)]]))
    with pytest.raises(ValueError):
        quotient_morphism(T, Quasilattice([[fld(1)], [a]]), [[-a]])


# -- specialization -----------------------------------------------------------------

@pytest.mark.parametrize("n", [2, 3])
def test_specialized_examples(examples, n):
    W = specialize(examples["wps"], n)
    gammas = {name: str(build_chart(T).gamma) for name, T in W.maximal.items()}
    assert gammas == {"sigma": "trivial", "rho": "trivial", "tau": f"finite, order {n}"}
    H = specialize(examples["hirzebruch"], n)
    assert all(str(build_chart(T).gamma) == "trivial" for T in H.maximal.values())
    assert H.field == QQ


def test_specialization_commutes_with_transitions(examples):
    W = examples["wps"]
    M = _transition(W, "sigma", "tau")
    W3 = specialize(W, 3)
    assert specialize(M, 3).E == _transition(W3, "sigma", "tau").E


def test_degenerate_fan_specialization(examples):
    with pytest.raises(DegenerateSpecialization):
        specialize(examples["wps"], 0)


def test_fan_triple_rejects_rays_outside_q(examples):
    W = examples["wps"]
    with pytest.raises(NotInQuasilattice):
        FanTriple(W.fan, Quasilattice([parse_vector(t, W.field) for t in ("(1, 0)", "(0, 1)")]))


def test_cocycles_on_every_triple(examples):
    FT = examples["hirzebruch"]
    names = FT.fan.cone_names
    for s, t, r in itertools.permutations(names, 3):
        face = frozenset(FT.fan.cone(s)) & frozenset(FT.fan.cone(t)) & frozenset(FT.fan.cone(r))
        lhs = monomial_compose(transition_map(FT, (face, t), (face, r)), transition_map(FT, (face, s), (face, t)))
        assert lhs.E == transition_map(FT, (face, s), (face, r)).E
