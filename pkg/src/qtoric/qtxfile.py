"""Reader and writer for the line-oriented ``.qtx`` fan description format.

Each non-blank line is one statement::

    param a transcendental anchor 771/500 193/125
    param beta algebraic minpoly beta^4 - 5*beta^2 + 5 anchor 19/10 2
    quasilattice (1, 0) (0, 1) (0, a)
    ray v1 (1, 0)
    cone sigma v1 v3
    hint {v1} (0, 1)

``#`` starts a comment.  ``param`` (at most one) must come first; the
quasilattice defaults to the span of the ray generators.  Only maximal cones
are declared.  ``hint`` lists preferred basis-completion vectors for a face.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from . import _poly as P
from .errors import (
    DuplicateId,
    IndeterminateSign,
    QtoricError,
    QtxError,
    QtxSyntaxError,
    UnknownRay,
    ValidationError,
)
from .fan import Fan, FanError, Ray
from .quasifold import FanTriple, InvalidFan
from .quasilattice import Quasilattice
from .scalar import (
    QQ,
    Field,
    Parameter,
    Scalar,
    Token,
    TokenStream,
    format_vector,
    parse_expr,
    parse_vector_tokens,
    tokenize,
)

KEYWORDS = ("param", "quasilattice", "ray", "cone", "hint")


@dataclass
class _Doc:
    param: Parameter | None = None
    param_line: int = 0
    field: Field = QQ
    quasilattice: list | None = None
    quasilattice_line: int = 0
    rays: list = dc_field(default_factory=list)  # (Token id, vector, Token at vector)
    cones: list = dc_field(default_factory=list)  # (Token id, [Token ray])
    hints: list = dc_field(default_factory=list)  # ([Token ray], Token face start, [vectors])
    dim: int | None = None
    ids: dict = dc_field(default_factory=dict)  # id -> Token of declaration


def _name(ts: TokenStream, what: str) -> Token:
    tok = ts.next()
    if tok.kind != "NAME":
        shown = "end of line" if tok.kind == "EOF" else repr(tok.text)
        raise QtxSyntaxError(f"unexpected {shown}", tok.line, tok.col, (what,))
    return tok


def _rational(ts: TokenStream) -> Fraction:
    """A signed rational literal ``[-]p[/q]`` (no arithmetic)."""
    negative = ts.accept("-") is not None
    tok = ts.next()
    if tok.kind != "NUM":
        shown = "end of line" if tok.kind == "EOF" else repr(tok.text)
        raise QtxSyntaxError(f"unexpected {shown}", tok.line, tok.col, ("rational number",))
    value = Fraction(tok.text)
    if ts.accept("/"):
        den = ts.next()
        if den.kind != "NUM" or Fraction(den.text) == 0:
            raise QtxSyntaxError("bad denominator", den.line, den.col, ("nonzero number",))
        value /= Fraction(den.text)
    return -value if negative else value


def _check_dim(doc: _Doc, vec: tuple, tok: Token):
    if doc.dim is None:
        doc.dim = len(vec)
    elif len(vec) != doc.dim:
        raise ValidationError(f"vector has {len(vec)} coordinates, expected {doc.dim}", tok.line, tok.col)


def _vector(ts: TokenStream, doc: _Doc) -> tuple:
    start = ts.peek
    vec = parse_vector_tokens(ts, doc.field)
    _check_dim(doc, vec, start)
    return vec


def _declare(doc: _Doc, tok: Token):
    if tok.text in KEYWORDS:
        raise QtxSyntaxError(f"{tok.text!r} is a reserved word", tok.line, tok.col, ("identifier",))
    if tok.text in doc.ids:
        first = doc.ids[tok.text]
        raise DuplicateId(f"{tok.text!r} already declared at line {first.line}", tok.line, tok.col)
    if doc.param is not None and tok.text == doc.param.name:
        raise DuplicateId(f"{tok.text!r} is the parameter name", tok.line, tok.col)
    doc.ids[tok.text] = tok


def _param(ts: TokenStream, doc: _Doc, head: Token):
    if doc.param is not None:
        raise DuplicateId("only one param declaration is allowed", head.line, head.col)
    if doc.rays or doc.quasilattice is not None or doc.cones or doc.hints:
        raise QtxSyntaxError("param must precede all other statements", head.line, head.col)
    name = _name(ts, "parameter name")
    if name.text in KEYWORDS:
        raise QtxSyntaxError(f"{name.text!r} is a reserved word", name.line, name.col, ("identifier",))
    kind = _name(ts, "'transcendental' or 'algebraic'")
    minpoly = ()
    if kind.text == "algebraic":
        ts.expect("minpoly")
        tmp = Field(Parameter.transcendental(name.text, 0, 1))
        start = ts.peek
        poly = parse_expr(ts, tmp)
        if poly.den != P.ONE:
            raise ValidationError("minimal polynomial must be a polynomial", start.line, start.col)
        minpoly = poly.num
    elif kind.text != "transcendental":
        raise QtxSyntaxError(f"unexpected {kind.text!r}", kind.line, kind.col,
                             ("'transcendental'", "'algebraic'"))
    ts.expect("anchor")
    lo_tok = ts.peek
    lo = _rational(ts)
    hi = _rational(ts)
    ts.expect_end()
    try:
        doc.param = Parameter(name.text, kind.text, (lo, hi), minpoly)
    except ValueError as exc:
        raise ValidationError(str(exc), lo_tok.line, lo_tok.col) from None
    doc.param_line = head.line
    doc.field = Field(doc.param)


def _statement(ts: TokenStream, doc: _Doc):
    head = ts.next()
    if head.kind != "NAME" or head.text not in KEYWORDS:
        shown = "end of line" if head.kind == "EOF" else repr(head.text)
        raise QtxSyntaxError(f"unexpected {shown}", head.line, head.col, tuple(f"'{k}'" for k in KEYWORDS))
    kw = head.text
    if kw == "param":
        _param(ts, doc, head)
        return
    if kw == "quasilattice":
        if doc.quasilattice is not None:
            raise DuplicateId("only one quasilattice declaration is allowed", head.line, head.col)
        gens = [_vector(ts, doc)]
        while ts.peek.kind != "EOF":
            gens.append(_vector(ts, doc))
        doc.quasilattice = gens
        doc.quasilattice_line = head.line
    elif kw == "ray":
        rid = _name(ts, "ray id")
        _declare(doc, rid)
        start = ts.peek
        vec = _vector(ts, doc)
        ts.expect_end()
        doc.rays.append((rid, vec, start))
    elif kw == "cone":
        cid = _name(ts, "cone id")
        _declare(doc, cid)
        members = [_name(ts, "ray id")]
        while ts.peek.kind != "EOF":
            members.append(_name(ts, "ray id"))
        doc.cones.append((cid, members))
    else:
        start = ts.peek
        if ts.accept("{"):
            members = [_name(ts, "ray id")]
            while ts.accept(","):
                members.append(_name(ts, "ray id"))
            ts.expect("}")
        else:
            members = [_name(ts, "ray id or '{'")]
        vecs = [_vector(ts, doc)]
        while ts.peek.kind != "EOF":
            vecs.append(_vector(ts, doc))
        doc.hints.append((members, start, vecs))
    ts.expect_end()


def _line_of_cone(doc: _Doc, message: str) -> tuple[int, int]:
    for cid, _ in doc.cones:
        if re.search(rf"\b{re.escape(cid.text)}\b", message):
            return cid.line, cid.col
    for rid, _, _ in doc.rays:
        if re.search(rf"\b{re.escape(rid.text)}\b", message):
            return rid.line, rid.col
    return 1, 1


def _build(doc: _Doc) -> FanTriple:
    if not doc.rays:
        raise ValidationError("no rays declared", 1, 1)
    if not doc.cones:
        raise ValidationError("no cones declared", 1, 1)
    ray_ids = {rid.text for rid, _, _ in doc.rays}
    for rid, vec, start in doc.rays:
        if all(x.is_zero() for x in vec):
            raise ValidationError(f"ray {rid.text} has a zero generator", start.line, start.col)
    for cid, members in doc.cones:
        seen = set()
        for m in members:
            if m.text not in ray_ids:
                raise UnknownRay(f"cone {cid.text} uses undeclared ray {m.text!r}", m.line, m.col)
            if m.text in seen:
                raise DuplicateId(f"ray {m.text} repeated in cone {cid.text}", m.line, m.col)
            seen.add(m.text)
    fan = Fan.build(doc.dim, [Ray(rid.text, vec) for rid, vec, _ in doc.rays],
                    [(cid.text, [m.text for m in members]) for cid, members in doc.cones])
    faces = set(fan.faces())
    hints = {}
    for members, start, vecs in doc.hints:
        for m in members:
            if m.text not in ray_ids:
                raise UnknownRay(f"hint uses undeclared ray {m.text!r}", m.line, m.col)
        face = frozenset(m.text for m in members)
        if face not in faces:
            raise ValidationError("hint does not name a cone of the fan", start.line, start.col)
        if face in hints:
            raise DuplicateId("second hint for the same face", start.line, start.col)
        hints[face] = [tuple(v) for v in vecs]
    if doc.quasilattice is not None:
        try:
            Q = Quasilattice(doc.quasilattice)
        except QtoricError as exc:
            raise ValidationError(str(exc), doc.quasilattice_line, 1) from None
    else:
        try:
            Q = Quasilattice([r.generator for r in fan.rays])
        except QtoricError:
            raise ValidationError("ray generators do not span; declare a quasilattice", 1, 1) from None
    for rid, vec, start in doc.rays:
        if Q.member(vec) is None:
            raise ValidationError(f"generator of ray {rid.text} is not in the quasilattice", start.line, start.col)
    for members, start, vecs in doc.hints:
        for v in vecs:
            if Q.member(v) is None:
                raise ValidationError(f"hint vector {format_vector(v)} is not in the quasilattice",
                                      start.line, start.col)
    try:
        return FanTriple(fan, Q, hints)
    except InvalidFan as exc:
        line, col = _line_of_cone(doc, exc.violations[0])
        raise ValidationError("; ".join(exc.violations), line, col) from None
    except IndeterminateSign as exc:
        line = doc.param_line or 1
        raise ValidationError(str(exc), line, 1) from None


def parse_fanfile(text: str) -> FanTriple:
    """Parse and validate a fan file; every failure is a located QtxError."""
    doc = _Doc()
    try:
        for lineno, raw in enumerate(text.split("\n"), start=1):
            tokens = tokenize(raw, lineno)
            if tokens[0].kind == "EOF":
                continue
            _statement(TokenStream(tokens), doc)
        if not doc.ids and doc.param is None and doc.quasilattice is None:
            raise QtxSyntaxError("empty fan file", 1, 1, ("'param'", "'quasilattice'", "'ray'"))
        return _build(doc)
    except QtxError:
        raise
    except RecursionError:
        raise QtxSyntaxError("expression nested too deeply", 1, 1) from None
    except (FanError, QtoricError, ValueError, ZeroDivisionError) as exc:
        raise ValidationError(str(exc) or type(exc).__name__, 1, 1) from None


def read_fanfile(path: str) -> FanTriple:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        return parse_fanfile(text)
    except QtxError as exc:
        exc.path = path
        raise


# -- printing -------------------------------------------------------------------

def _param_line(param: Parameter) -> str:
    lo, hi = param.anchor
    if param.kind == "transcendental":
        return f"param {param.name} transcendental anchor {lo} {hi}"
    tmp = Field(Parameter.transcendental(param.name, 0, 1))
    poly = Scalar(tmp, param.minpoly)
    return f"param {param.name} algebraic minpoly {poly} anchor {lo} {hi}"


def print_fanfile(FT: FanTriple, cone_names: dict | None = None) -> str:
    fan = FT.fan
    lines = []
    param = FT.field.param
    if param is not None:
        lines.append(_param_line(param))
    lines.append("quasilattice " + " ".join(format_vector(g) for g in FT.quasilattice.gens))
    for r in fan.rays:
        lines.append(f"ray {r.id} {format_vector(r.generator)}")
    cones = list(fan.cones)
    if cone_names is not None:
        cones = sorted(((cone_names[n], ids) for n, ids in cones), key=lambda c: fan.face_key(frozenset(c[1])))
    for name, ids in cones:
        lines.append(f"cone {name} {' '.join(ids)}")
    for face in sorted(FT.hints, key=fan.face_key):
        vecs = " ".join(format_vector(v) for v in FT.hints[face])
        lines.append(f"hint {{{','.join(fan.sort_rays(face))}}} {vecs}")
    return "\n".join(lines) + "\n"


def canonical_text(FT: FanTriple) -> str:
    """Printer output with cones renamed after their rays and sorted."""
    names = {name: "c_" + "_".join(ids) for name, ids in FT.fan.cones}
    return print_fanfile(FT, names)
