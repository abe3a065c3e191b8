from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qtoric.errors import DivisionByZero, FieldMismatch, IndeterminateSign, QtxSyntaxError
from qtoric.scalar import (
    QQ,
    Field,
    Parameter,
    default_max_refine,
    expand_batch,
    format_matrix,
    format_vector,
    parse_matrix,
    parse_scalar,
    parse_vector,
)

PHI = Field(Parameter.algebraic("phi", [-1, -1, 1], Fraction(3, 2), Fraction(17, 10)))
A = Field(Parameter.transcendental("a", Fraction(3, 2), Fraction(8, 5)))
BETA = Field(Parameter.algebraic("beta", [5, 0, -5, 0, 1], Fraction(19, 10), 2))
phi, a, beta = PHI.gen(), A.gen(), BETA.gen()

small = st.fractions(min_value=-5, max_value=5, max_denominator=6)


def elements(fld, degree):
    return st.lists(small, min_size=1, max_size=degree).map(fld.poly)


def a_elements():
    return st.tuples(elements(A, 3), elements(A, 2)).filter(lambda p: not p[1].is_zero()).map(
        lambda p: p[0] / p[1]
    )


# -- arithmetic ----------------------------------------------------------------

def test_golden_ratio_square():
    assert phi * phi == phi + 1


def test_additive_identity_and_inverse_cancellation():
    assert a + 0 == a
    assert (1 / a) * a == A.one


def test_beta_relation_reduces():
    assert beta ** 4 == 5 * beta ** 2 - 5
    assert (beta ** 2 - 2) * (beta ** 2 - 3) == BETA.one  # phi * (1/phi)


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        a / A.zero
    with pytest.raises(DivisionByZero):
        (phi - phi).inverse()


def test_mixed_fields_rejected():
    with pytest.raises(FieldMismatch):
        a + phi
    assert (a + QQ(2)).field == A


@settings(max_examples=60, deadline=None)
@given(a_elements(), a_elements(), a_elements())
def test_field_axioms_transcendental(x, y, z):
    assert (x + y) * z == x * z + y * z
    assert (x * y) * z == x * (y * z)
    assert x - x == A.zero
    if not x.is_zero():
        assert x * x.inverse() == A.one


@settings(max_examples=60, deadline=None)
@given(elements(BETA, 4), elements(BETA, 4))
def test_field_axioms_algebraic(x, y):
    assert x * y == y * x
    if not y.is_zero():
        assert (x / y) * y == x


# -- signs and floors ---------------------------------------------------------

def test_signs():
    assert (phi - 1).sign() == 1
    assert PHI.zero.sign() == 0
    assert (1 - a).sign() == -1


def test_sign_undecidable_inside_anchor():
    with pytest.raises(IndeterminateSign):
        (a - Fraction(31, 20)).sign()


@settings(max_examples=80, deadline=None)
@given(elements(BETA, 4))
def test_algebraic_sign_matches_float(x):
    value = sum(float(c) * 1.9021130325903071 ** k for k, c in enumerate(x.expand()))
    if abs(value) > 1e-9:
        assert x.sign() == (1 if value > 0 else -1)
    elif x.is_zero():
        assert x.sign() == 0


def test_floors():
    assert (1 / a).floor() == (0, 1 / a)
    assert QQ(3).floor() == (3, QQ(0))
    assert (-phi).floor() == (-2, 2 - phi)


@settings(max_examples=60, deadline=None)
@given(elements(PHI, 2))
def test_floor_fraction_bounds(x):
    k, frac = x.floor()
    assert x == frac + k
    assert frac.sign() >= 0 and (frac - 1).sign() < 0


def test_max_refine_env(monkeypatch):
    monkeypatch.setenv("QTX_MAX_REFINE", "7")
    assert default_max_refine() == 7


# -- expansion ------------------------------------------------------------------

def test_expansions():
    assert A.poly([2, 3]).expand() == (2, 3)
    assert (phi + 1).expand() == (1, 1)
    assert (a * a - a).expand() == (0, -1, 1)


def test_expand_batch_common_denominator():
    D, rows = expand_batch([1 / a, a])
    assert D == a
    # rows share one width: 1/a = 1/D and a = a^2/D
    assert rows == [(1, 0, 0), (0, 0, 1)]


def test_evaluate_at():
    assert (1 / a + 2).evaluate_at(4) == Fraction(9, 4)


# -- text -----------------------------------------------------------------------

@pytest.mark.parametrize("text", ["-1/a", "a^2 - 3*a + 1/2", "(a + 1)/(a - 1)", "2"])
def test_parse_print_round_trip(text):
    x = parse_scalar(text, A)
    assert parse_scalar(str(x), A) == x


@settings(max_examples=60, deadline=None)
@given(a_elements())
def test_print_parse_round_trip_property(x):
    assert parse_scalar(str(x), A) == x


def test_vector_and_matrix_text():
    v = parse_vector("(1, -1/a)", A)
    assert format_vector(v) == "(1, -1/a)"
    M = parse_matrix("[[1, -1/a], [0, -1/a]]", A)
    assert format_matrix(M) == "[[1, -1/a], [0, -1/a]]"


def test_syntax_error_location():
    with pytest.raises(QtxSyntaxError) as info:
        parse_vector("(1, *)", A)
    assert (info.value.line, info.value.col) == (1, 5)
    assert info.value.expected


def test_parameter_validation():
    with pytest.raises(ValueError):
        Parameter.algebraic("x", [-4, 0, 1], 1, 3)  # reducible
    with pytest.raises(ValueError):
        Parameter.algebraic("x", [-2, 0, 1], -2, 2)  # two roots in the anchor
    with pytest.raises(ValueError):
        Parameter.transcendental("a", 2, 1)
