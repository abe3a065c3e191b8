"""Exact arithmetic in a real field Q(theta).

Equality is formal: a transcendental parameter is an indeterminate and an
algebraic one is reduced modulo its minimal polynomial.  Ordering is anchored:
the sign of a value is decided from a rational interval that pins down the
real number the parameter stands for.

The literal grammar shared with the fan file format::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("-" | "+") unary | power
    power  := atom ("^" ["-"] INT)?
    atom   := NUMBER | NAME | "(" expr ")"
"""

from __future__ import annotations

import math
import os
import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, NamedTuple, Sequence

from . import _poly as P
from .errors import (
    DegenerateSpecialization,
    DivisionByZero,
    FieldMismatch,
    IndeterminateSign,
    QtxSyntaxError,
)

DEFAULT_MAX_REFINE = 256


def default_max_refine() -> int:
    value = os.environ.get("QTX_MAX_REFINE")
    if value is None:
        return DEFAULT_MAX_REFINE
    try:
        depth = int(value)
    except ValueError:
        raise ValueError(f"QTX_MAX_REFINE must be an integer, got {value!r}") from None
    if depth < 0:
        raise ValueError("QTX_MAX_REFINE must be nonnegative")
    return depth


@dataclass(frozen=True)
class Parameter:
    """The single field generator of a workspace.

    ``anchor`` is a rational interval: for an algebraic parameter it isolates
    exactly one real root of ``minpoly``; for a transcendental one it merely
    contains the intended value.
    """

    name: str
    kind: str
    anchor: tuple[Fraction, Fraction]
    minpoly: tuple = ()
    max_refine: int = dc_field(default_factory=default_max_refine, compare=False, hash=False)

    def __post_init__(self):
        lo, hi = (Fraction(x) for x in self.anchor)
        object.__setattr__(self, "anchor", (lo, hi))
        object.__setattr__(self, "minpoly", P.trim(self.minpoly))
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", self.name):
            raise ValueError(f"bad parameter name {self.name!r}")
        if not lo < hi:
            raise ValueError("anchor must satisfy lo < hi")
        if self.kind == "transcendental":
            if self.minpoly:
                raise ValueError("a transcendental parameter has no minimal polynomial")
        elif self.kind == "algebraic":
            m = self.minpoly
            if P.degree(m) < 2:
                raise ValueError("minimal polynomial must have degree >= 2")
            object.__setattr__(self, "minpoly", P.monic(m))
            if not P.is_irreducible(m):
                raise ValueError("minimal polynomial must be irreducible over Q")
            fl, fh = P.evaluate(m, lo), P.evaluate(m, hi)
            if fl == 0 or fh == 0 or P.count_roots_open(m, lo, hi) != 1:
                raise ValueError("anchor must isolate exactly one root of the minimal polynomial")
        else:
            raise ValueError(f"unknown parameter kind {self.kind!r}")

    @property
    def degree(self) -> int:
        return P.degree(self.minpoly) if self.kind == "algebraic" else 0

    @classmethod
    def transcendental(cls, name: str, lo, hi, **kw) -> "Parameter":
        return cls(name, "transcendental", (Fraction(lo), Fraction(hi)), **kw)

    @classmethod
    def algebraic(cls, name: str, minpoly: Sequence, lo, hi, **kw) -> "Parameter":
        return cls(name, "algebraic", (Fraction(lo), Fraction(hi)), tuple(minpoly), **kw)


@dataclass(frozen=True)
class Field:
    """Q when ``param`` is None, otherwise Q(param)."""

    param: Parameter | None = None

    @property
    def kind(self) -> str:
        return "rational" if self.param is None else self.param.kind

    def __call__(self, value) -> "Scalar":
        if isinstance(value, Scalar):
            return value.coerce_to(self)
        return Scalar(self, P.const(Fraction(value)))

    def gen(self) -> "Scalar":
        if self.param is None:
            raise ValueError("the rational field has no generator")
        return Scalar(self, P.X)

    @property
    def zero(self) -> "Scalar":
        return Scalar(self, P.ZERO)

    @property
    def one(self) -> "Scalar":
        return Scalar(self, P.ONE)

    def poly(self, coeffs: Sequence) -> "Scalar":
        """Element with the given power-basis coefficients (lowest first)."""
        return Scalar(self, P.trim(coeffs))

    def vector(self, entries: Iterable) -> tuple:
        return tuple(self(e) for e in entries)

    def parse(self, text: str) -> "Scalar":
        return parse_scalar(text, self)

    def __str__(self):
        if self.param is None:
            return "Q"
        return f"Q({self.param.name})"


QQ = Field()


def _frac_str(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _poly_str(p, name: str) -> str:
    if not p:
        return "0"
    out = []
    for k in range(len(p) - 1, -1, -1):
        c = p[k]
        if c == 0:
            continue
        mag = abs(c)
        if k == 0:
            body = _frac_str(mag)
        else:
            base = name if k == 1 else f"{name}^{k}"
            body = base if mag == 1 else f"{_frac_str(mag)}*{base}"
        if not out:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)


def _nterms(p) -> int:
    return sum(1 for c in p if c != 0)


class Scalar:
    """An element of a field Q(theta) in canonical form.

    ``num``/``den`` are rational polynomials in theta; ``den`` is monic and is
    only non-trivial for transcendental fields.
    """

    __slots__ = ("field", "num", "den")

    def __init__(self, field: Field, num, den=P.ONE):
        kind = field.kind
        if kind == "rational":
            if len(num) > 1 or den != P.ONE:
                raise ValueError("non-constant element in the rational field")
        elif kind == "algebraic":
            if den != P.ONE:
                raise ValueError("algebraic elements carry no denominator")
            if len(num) > field.param.degree:
                num = P.divmod_(num, field.param.minpoly)[1]
        else:
            if not den:
                raise DivisionByZero("zero denominator")
            if not num:
                den = P.ONE
            elif den != P.ONE:
                g = P.gcd(num, den)
                if g != P.ONE:
                    num = P.divmod_(num, g)[0]
                    den = P.divmod_(den, g)[0]
                lead = den[-1]
                if lead != 1:
                    num = P.scale(num, 1 / lead)
                    den = P.scale(den, 1 / lead)
        self.field = field
        self.num = num
        self.den = den

    # -- structure -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.num

    def is_rational(self) -> bool:
        return len(self.num) <= 1 and self.den == P.ONE

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not a rational constant")
        return self.num[0] if self.num else Fraction(0)

    def is_integer(self) -> bool:
        return self.is_rational() and self.rational().denominator == 1

    def coerce_to(self, field: Field) -> "Scalar":
        if self.field == field:
            return self
        if self.is_rational():
            return Scalar(field, self.num)
        raise FieldMismatch(f"cannot move {self} from {self.field} to {field}")

    def _lift(self, other) -> tuple["Scalar", "Scalar"]:
        if isinstance(other, Scalar):
            if other.field == self.field:
                return self, other
            if other.is_rational():
                return self, other.coerce_to(self.field)
            if self.is_rational():
                return self.coerce_to(other.field), other
            raise FieldMismatch(f"mixing {self.field} and {other.field}")
        if isinstance(other, (int, Fraction)):
            return self, Scalar(self.field, P.const(other))
        return NotImplemented, NotImplemented

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        a, b = self._lift(other)
        if a is NotImplemented:
            return NotImplemented
        if a.den == b.den:
            return Scalar(a.field, P.add(a.num, b.num), a.den)
        return Scalar(a.field, P.add(P.mul(a.num, b.den), P.mul(b.num, a.den)), P.mul(a.den, b.den))

    __radd__ = __add__

    def __neg__(self):
        return Scalar(self.field, P.neg(self.num), self.den)

    def __pos__(self):
        return self

    def __sub__(self, other):
        a, b = self._lift(other)
        if a is NotImplemented:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._lift(other)
        if a is NotImplemented:
            return NotImplemented
        return Scalar(a.field, P.mul(a.num, b.num), P.mul(a.den, b.den))

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if not self.num:
            raise DivisionByZero("division by a formally zero scalar")
        kind = self.field.kind
        if kind == "transcendental":
            return Scalar(self.field, self.den, self.num)
        if kind == "rational":
            return Scalar(self.field, (1 / self.num[0],))
        g, s, _ = P.exgcd(self.num, self.field.param.minpoly)
        assert g == P.ONE
        return Scalar(self.field, s)

    def __truediv__(self, other):
        a, b = self._lift(other)
        if a is NotImplemented:
            return NotImplemented
        return a * b.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out = Scalar(self.field, P.ONE)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- comparison ------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.rational() == other
        if not isinstance(other, Scalar):
            return NotImplemented
        if self.field != other.field:
            return self.is_rational() and other.is_rational() and self.rational() == other.rational()
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self.is_rational():
            return hash(self.rational())
        return hash((self.field, self.num, self.den))

    def sign(self) -> int:
        if not self.num:
            return 0
        kind = self.field.kind
        if kind == "rational":
            return 1 if self.num[0] > 0 else -1
        if kind == "algebraic":
            return _algebraic_sign(self.num, self.field.param)
        return _transcendental_sign(self.num, self.den, self.field.param)

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __bool__(self):
        return bool(self.num)

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- numerics --------------------------------------------------------

    def approx(self) -> Fraction:
        """A rational close to the anchored value (not a certified bound)."""
        if self.is_rational():
            return self.rational()
        param = self.field.param
        if param.kind == "algebraic":
            lo, hi = _isolating_interval(param, min(64, max(param.max_refine, 1)))
            return P.evaluate(self.num, (lo + hi) / 2)
        lo, hi = param.anchor
        for t in (Fraction(1, 2), Fraction(1, 3), Fraction(2, 3)):
            x = lo + (hi - lo) * t
            d = P.evaluate(self.den, x)
            if d != 0:
                return P.evaluate(self.num, x) / d
        raise IndeterminateSign(f"cannot approximate {self}")

    def __float__(self):
        return float(self.approx())

    def floor(self) -> tuple[int, "Scalar"]:
        """(k, frac) with self = k + frac and 0 <= frac < 1 at the anchor."""
        if self.is_rational():
            k = math.floor(self.rational())
            return k, self - k
        m = math.floor(self.approx())
        while (self - m).sign() < 0:
            m -= 1
        while (self - (m + 1)).sign() >= 0:
            m += 1
        return m, self - m

    def frac(self) -> "Scalar":
        return self.floor()[1]

    def expand(self) -> tuple[Fraction, ...]:
        """Coordinates over the power basis 1, theta, theta^2, ..."""
        if self.den != P.ONE:
            raise ValueError(f"{self} is not a polynomial in the parameter; use expand_batch")
        width = max(self.field.param.degree, 1) if self.field.kind == "algebraic" else max(len(self.num), 1)
        return tuple(self.num) + (Fraction(0),) * (width - len(self.num))

    def evaluate_at(self, value) -> Fraction:
        """Value of a transcendental-field element with the parameter bound to ``value``."""
        if self.is_rational():
            return self.rational()
        if self.field.kind != "transcendental":
            raise DegenerateSpecialization("only transcendental parameters can be specialized")
        value = Fraction(value)
        d = P.evaluate(self.den, value)
        if d == 0:
            raise DegenerateSpecialization(f"{self} has a pole at {self.field.param.name} = {value}")
        return P.evaluate(self.num, value) / d

    # -- text ------------------------------------------------------------

    def __str__(self):
        name = self.field.param.name if self.field.param else "t"
        n = _poly_str(self.num, name)
        if self.den == P.ONE:
            return n
        d = _poly_str(self.den, name)
        if _nterms(self.num) > 1:
            n = f"({n})"
        if _nterms(self.den) > 1:
            d = f"({d})"
        return f"{n}/{d}"

    def __repr__(self):
        return f"Scalar({self})"


# -- sign determination ----------------------------------------------------

@lru_cache(maxsize=None)
def _refinements(param: Parameter) -> list:
    return [param.anchor]


def _isolating_interval(param: Parameter, k: int) -> tuple[Fraction, Fraction]:
    chain = _refinements(param)
    m = param.minpoly
    while len(chain) <= k:
        lo, hi = chain[-1]
        mid = (lo + hi) / 2
        fm = P.evaluate(m, mid)
        if (P.evaluate(m, lo) > 0) != (fm > 0):
            chain.append((lo, mid))
        else:
            chain.append((mid, hi))
    return chain[k]


def _algebraic_sign(num, param: Parameter) -> int:
    for k in range(param.max_refine + 1):
        lo, hi = P.eval_interval(num, *_isolating_interval(param, k))
        if lo > 0:
            return 1
        if hi < 0:
            return -1
    raise IndeterminateSign(f"sign undecided after {param.max_refine} bisections")


def _transcendental_sign(num, den, param: Parameter) -> int:
    lo, hi = param.anchor
    nlo, nhi = P.eval_interval(num, lo, hi)
    dlo, dhi = P.eval_interval(den, lo, hi)
    if (nlo > 0 or nhi < 0) and (dlo > 0 or dhi < 0):
        return (1 if nlo > 0 else -1) * (1 if dlo > 0 else -1)
    # exact decision: the value cannot change sign on the open anchor unless
    # numerator or denominator has a root there
    if P.count_roots_open(num, lo, hi) or P.count_roots_open(den, lo, hi):
        raise IndeterminateSign(
            f"anchor [{lo}, {hi}] of {param.name} does not separate the value from zero; tighten it"
        )
    mid = (lo + hi) / 2
    v = P.evaluate(num, mid) * P.evaluate(den, mid)
    return 1 if v > 0 else -1


def expand_batch(xs: Sequence[Scalar]) -> tuple[Scalar, list[tuple[Fraction, ...]]]:
    """Clear a common denominator D so every D*x is a polynomial in theta.

    Returns (D, rows) where rows[i] holds the power-basis coordinates of
    D*xs[i], all padded to a common width.
    """
    if not xs:
        return QQ.one, []
    field = _common_field(xs)
    xs = [x.coerce_to(field) for x in xs]
    den = P.ONE
    if field.kind == "transcendental":
        for x in xs:
            if x.den != P.ONE:
                g = P.gcd(den, x.den)
                den = P.mul(den, P.divmod_(x.den, g)[0])
    D = Scalar(field, den) if field.kind == "transcendental" else field.one
    nums = [(x * D).num for x in xs]
    if field.kind == "algebraic":
        width = field.param.degree
    else:
        width = max([len(p) for p in nums] + [1])
    rows = [tuple(p) + (Fraction(0),) * (width - len(p)) for p in nums]
    return D, rows


def _common_field(xs: Iterable[Scalar]) -> Field:
    found = QQ
    for x in xs:
        if x.field != QQ and not x.is_rational():
            if found != QQ and found != x.field:
                raise FieldMismatch(f"mixing {found} and {x.field}")
            found = x.field
        elif found == QQ and x.field != QQ:
            found = x.field
    return found


def common_field(xs: Iterable[Scalar]) -> Field:
    return _common_field(xs)


# -- literal parsing ---------------------------------------------------------

class Token(NamedTuple):
    kind: str  # NUM, NAME, OP, STR, EOF
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<comment>#.*)|(?P<num>\d+(?:\.\d+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^(),\[\]=:{}])"
)


def tokenize(text: str, line: int = 1) -> list[Token]:
    """Tokenize a single line (no newlines) of literal text."""
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise QtxSyntaxError(f"unexpected character {text[pos]!r}", line, pos + 1)
        kind = m.lastgroup
        if kind == "num":
            out.append(Token("NUM", m.group(), line, pos + 1))
        elif kind == "name":
            out.append(Token("NAME", m.group(), line, pos + 1))
        elif kind == "op":
            out.append(Token("OP", m.group(), line, pos + 1))
        pos = m.end()
    out.append(Token("EOF", "", line, len(text) + 1))
    return out


class TokenStream:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0

    @property
    def peek(self) -> Token:
        return self.tokens[self.i]

    def next(self) -> Token:
        tok = self.tokens[self.i]
        if tok.kind != "EOF":
            self.i += 1
        return tok

    def accept(self, text: str) -> Token | None:
        tok = self.peek
        if tok.kind in ("OP", "NAME") and tok.text == text:
            return self.next()
        return None

    def expect(self, text: str) -> Token:
        tok = self.peek
        if tok.kind in ("OP", "NAME") and tok.text == text:
            return self.next()
        raise QtxSyntaxError(f"unexpected {_describe(tok)}", tok.line, tok.col, (repr(text),))

    def expect_end(self):
        tok = self.peek
        if tok.kind != "EOF":
            raise QtxSyntaxError(f"unexpected {_describe(tok)}", tok.line, tok.col, ("end of line",))


def _describe(tok: Token) -> str:
    return "end of line" if tok.kind == "EOF" else repr(tok.text)


def _number(text: str) -> Fraction:
    return Fraction(text)


def parse_expr(ts: TokenStream, field: Field) -> Scalar:
    value = _parse_term(ts, field)
    while ts.peek.kind == "OP" and ts.peek.text in "+-":
        op = ts.next().text
        rhs = _parse_term(ts, field)
        value = value + rhs if op == "+" else value - rhs
    return value


def _parse_term(ts: TokenStream, field: Field) -> Scalar:
    value = _parse_unary(ts, field)
    while ts.peek.kind == "OP" and ts.peek.text in "*/":
        op = ts.next()
        rhs = _parse_unary(ts, field)
        if op.text == "*":
            value = value * rhs
        else:
            if rhs.is_zero():
                raise QtxSyntaxError("division by zero", op.line, op.col)
            value = value / rhs
    return value


def _parse_unary(ts: TokenStream, field: Field) -> Scalar:
    if ts.accept("-"):
        return -_parse_unary(ts, field)
    if ts.accept("+"):
        return _parse_unary(ts, field)
    return _parse_power(ts, field)


def _parse_power(ts: TokenStream, field: Field) -> Scalar:
    base = _parse_atom(ts, field)
    if ts.accept("^"):
        negative = ts.accept("-") is not None
        tok = ts.next()
        if tok.kind != "NUM" or not tok.text.isdigit():
            raise QtxSyntaxError(f"unexpected {_describe(tok)}", tok.line, tok.col, ("integer exponent",))
        k = int(tok.text)
        if k > 64:
            raise QtxSyntaxError("exponent too large", tok.line, tok.col)
        if negative and base.is_zero():
            raise QtxSyntaxError("division by zero", tok.line, tok.col)
        base = base ** (-k if negative else k)
    return base


def _parse_atom(ts: TokenStream, field: Field) -> Scalar:
    tok = ts.next()
    if tok.kind == "NUM":
        return field(_number(tok.text))
    if tok.kind == "NAME":
        if field.param is not None and tok.text == field.param.name:
            return field.gen()
        raise QtxSyntaxError(f"unknown name {tok.text!r}", tok.line, tok.col)
    if tok.kind == "OP" and tok.text == "(":
        value = parse_expr(ts, field)
        ts.expect(")")
        return value
    raise QtxSyntaxError(f"unexpected {_describe(tok)}", tok.line, tok.col, ("number", "parameter", "'('"))


def parse_scalar(text: str, field: Field = QQ) -> Scalar:
    ts = TokenStream(tokenize(text))
    value = parse_expr(ts, field)
    ts.expect_end()
    return value


def parse_vector_tokens(ts: TokenStream, field: Field) -> tuple[Scalar, ...]:
    ts.expect("(")
    entries = [parse_expr(ts, field)]
    while ts.accept(","):
        entries.append(parse_expr(ts, field))
    ts.expect(")")
    return tuple(entries)


def parse_vector(text: str, field: Field = QQ) -> tuple[Scalar, ...]:
    ts = TokenStream(tokenize(text))
    vec = parse_vector_tokens(ts, field)
    ts.expect_end()
    return vec


def parse_matrix(text: str, field: Field = QQ) -> tuple[tuple[Scalar, ...], ...]:
    """``[[a, b], [c, d]]`` (rows) in the literal grammar."""
    ts = TokenStream(tokenize(text))
    ts.expect("[")
    rows = []
    while True:
        ts.expect("[")
        row = [parse_expr(ts, field)]
        while ts.accept(","):
            row.append(parse_expr(ts, field))
        ts.expect("]")
        rows.append(tuple(row))
        if not ts.accept(","):
            break
    ts.expect("]")
    ts.expect_end()
    if len({len(r) for r in rows}) != 1:
        raise QtxSyntaxError("ragged matrix", 1, 1)
    return tuple(rows)


def format_vector(v: Sequence[Scalar]) -> str:
    return "(" + ", ".join(str(x) for x in v) + ")"


def format_matrix(rows: Sequence[Sequence[Scalar]]) -> str:
    return "[" + ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in rows) + "]"
