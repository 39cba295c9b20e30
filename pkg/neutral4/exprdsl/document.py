"""Geometry definition documents.

A document declares one neutral 4-geometry in either the coordinate backend
(metric entries are expressions in four chart coordinates) or the frame
backend (an invariant frame with constant structure constants and a constant
frame metric). See docs/grammar.ebnf for the grammar; `to_text` writes a
document back in canonical form so that ``parse_geometry(to_text(d)) == d``.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

from neutral4.errors import DocumentError, ExprSyntaxError
from neutral4.exprdsl.expr import ZERO, Const, Expr, add, is_const, mul, pretty, sub
from neutral4.exprdsl.parser import (
    NUMBER_RE,
    IDENT_RE,
    RESERVED,
    SymbolTable,
    byte_offset,
    parse_expression,
)

logger = logging.getLogger(__name__)

DIM = 4
PUNCTUATION = "{}()[];,=*+-^"
KEYWORDS = frozenset(
    {"geometry", "backend", "coords", "frame", "domain", "param", "metric", "diag",
     "bracket", "field", "form", "coordinate"}
)

Combination = Tuple[Tuple[float, str], ...]
WedgeSum = Tuple[Tuple[float, str, str], ...]


class Backend(str, Enum):
    COORDINATE = "coordinate"
    FRAME = "frame"


@dataclass(frozen=True)
class ParamDecl:
    name: str
    default: float
    doc: str = ""


@dataclass(frozen=True)
class DomainDecl:
    name: str
    low: float
    high: float


@dataclass(frozen=True)
class BracketDecl:
    """``[left, right] = terms`` over frame names."""

    left: str
    right: str
    terms: Combination


@dataclass(frozen=True)
class FieldDecl:
    name: str
    components: Tuple[Expr, ...]
    terms: Optional[Combination] = None


@dataclass(frozen=True)
class FormDecl:
    """A 1-form (four components) or a 2-form (antisymmetric 4x4 built from wedge terms)."""

    name: str
    degree: int
    components: Tuple
    terms: Optional[WedgeSum] = None


@dataclass(frozen=True)
class GeometryDocument:
    name: str
    backend: Backend
    names: Tuple[str, ...]
    metric: Tuple[Tuple[Expr, ...], ...]
    domain: Tuple[DomainDecl, ...] = ()
    params: Tuple[ParamDecl, ...] = ()
    brackets: Tuple[BracketDecl, ...] = ()
    fields: Tuple[FieldDecl, ...] = ()
    forms: Tuple[FormDecl, ...] = ()

    @property
    def is_frame(self) -> bool:
        return self.backend == Backend.FRAME

    def param_defaults(self) -> Dict[str, float]:
        return {p.name: p.default for p in self.params}

    def symbol_table(self) -> SymbolTable:
        coordinates = () if self.is_frame else self.names
        return SymbolTable.build(coordinates, (p.name for p in self.params))

    def field(self, name: str) -> FieldDecl:
        for decl in self.fields:
            if decl.name == name:
                return decl
        raise KeyError(name)

    def form(self, name: str) -> FormDecl:
        for decl in self.forms:
            if decl.name == name:
                return decl
        raise KeyError(name)


# Tokens ------------------------------------------------------------------


@dataclass(frozen=True)
class _Token:
    kind: str  # "ident", "number", "string", "punct" or "end"
    text: str
    offset: int


def _tokenize(document: str) -> List[_Token]:
    tokens: List[_Token] = []
    idx = 0
    while idx < len(document):
        c = document[idx]
        if c == "#":
            end = document.find("\n", idx)
            idx = len(document) if end < 0 else end
            continue
        if c.isspace():
            idx += 1
            continue
        offset = byte_offset(document, idx)
        if not c.isascii():
            raise ExprSyntaxError(f"non-ASCII character {c!r}", offset, "parse_geometry")
        if c == '"':
            end = document.find('"', idx + 1)
            if end < 0:
                raise ExprSyntaxError("unterminated string", offset, "parse_geometry")
            tokens.append(_Token("string", document[idx + 1 : end], offset))
            idx = end + 1
            continue
        if c.isdigit() or c == ".":
            match = NUMBER_RE.match(document, idx)
            if match is None:
                raise ExprSyntaxError(f"unexpected character {c!r}", offset, "parse_geometry")
            tokens.append(_Token("number", match.group(0), offset))
            idx = match.end()
            continue
        if c.isalpha() or c == "_":
            match = IDENT_RE.match(document, idx)
            assert match is not None
            tokens.append(_Token("ident", match.group(0), offset))
            idx = match.end()
            continue
        if c in PUNCTUATION:
            tokens.append(_Token("punct", c, offset))
            idx += 1
            continue
        raise ExprSyntaxError(f"unexpected character {c!r}", offset, "parse_geometry")
    tokens.append(_Token("end", "", byte_offset(document, len(document))))
    return tokens


# Raw statements, collected before any expression is parsed ---------------


@dataclass
class _Raw:
    name: str = ""
    backend: Optional[Backend] = None
    coords: Optional[List[str]] = None
    frame: Optional[List[str]] = None
    domain: List[DomainDecl] = field(default_factory=list)
    params: List[ParamDecl] = field(default_factory=list)
    metric_entries: List[Tuple[int, int, _Token]] = field(default_factory=list)
    metric_diag: Optional[List[float]] = None
    metric_seen: bool = False
    brackets: List[BracketDecl] = field(default_factory=list)
    # ("field"|"form", name, payload, offset); payload is a token tuple or a term list
    declarations: List[Tuple[str, str, object, int]] = field(default_factory=list)


class _DocumentParser:
    def __init__(self, document: str):
        self.tokens = _tokenize(document)
        self.pos = 0
        self.raw = _Raw()

    # token helpers

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def fail(self, message: str, token: Optional[_Token] = None) -> ExprSyntaxError:
        token = token or self.peek()
        found = "end of input" if token.kind == "end" else f"'{token.text}'"
        return ExprSyntaxError(f"{message}, found {found}", token.offset, "parse_geometry")

    def is_punct(self, text: str) -> bool:
        token = self.peek()
        return token.kind == "punct" and token.text == text

    def accept(self, text: str) -> bool:
        if self.is_punct(text):
            self.pos += 1
            return True
        return False

    def expect(self, text: str) -> _Token:
        if not self.is_punct(text):
            raise self.fail(f"expected '{text}'")
        return self.advance()

    def expect_kind(self, kind: str, what: str) -> _Token:
        if self.peek().kind != kind:
            raise self.fail(f"expected {what}")
        return self.advance()

    def keyword(self, word: str) -> _Token:
        token = self.peek()
        if token.kind != "ident" or token.text != word:
            raise self.fail(f"expected '{word}'")
        return self.advance()

    def signed_number(self) -> float:
        sign = -1.0 if self.accept("-") else 1.0
        return sign * float(self.expect_kind("number", "a number").text)

    def integer(self) -> int:
        token = self.expect_kind("number", "an integer")
        if not token.text.isdigit():
            raise self.fail("expected an integer", token)
        return int(token.text)

    def name_list(self) -> List[str]:
        names = []
        while self.peek().kind == "ident":
            names.append(self.advance().text)
        return names

    def combination(self) -> List[Tuple[float, str]]:
        terms = []
        sign = -1.0 if self.accept("-") else 1.0
        while True:
            coef = 1.0
            if self.peek().kind == "number":
                coef = float(self.advance().text)
                self.expect("*")
            terms.append((sign * coef, self.expect_kind("ident", "a name").text))
            if self.accept("+"):
                sign = 1.0
            elif self.accept("-"):
                sign = -1.0
            else:
                return terms

    def wedge_sum(self) -> List[Tuple[float, str, str]]:
        terms = []
        sign = -1.0 if self.accept("-") else 1.0
        while True:
            coef = 1.0
            if self.peek().kind == "number":
                coef = float(self.advance().text)
                self.expect("*")
            left = self.expect_kind("ident", "a 1-form name").text
            self.expect("^")
            right = self.expect_kind("ident", "a 1-form name").text
            terms.append((sign * coef, left, right))
            if self.accept("+"):
                sign = 1.0
            elif self.accept("-"):
                sign = -1.0
            else:
                return terms

    # statements

    def document(self) -> _Raw:
        self.keyword("geometry")
        self.raw.name = self.expect_kind("string", "a geometry name").text
        self.expect("{")
        while not self.is_punct("}"):
            self.statement()
        self.expect("}")
        if self.peek().kind != "end":
            raise self.fail("expected end of document")
        return self.raw

    def statement(self) -> None:
        token = self.expect_kind("ident", "a statement keyword")
        word = token.text
        raw = self.raw
        if word == "backend":
            choice = self.expect_kind("ident", "'coordinate' or 'frame'")
            if choice.text not in ("coordinate", "frame"):
                raise self.fail("expected 'coordinate' or 'frame'", choice)
            if raw.backend is not None:
                raise DocumentError("backend declared twice")
            raw.backend = Backend(choice.text)
        elif word == "coords":
            if raw.coords is not None:
                raise DocumentError("coords declared twice")
            raw.coords = self.name_list()
        elif word == "frame":
            if raw.frame is not None:
                raise DocumentError("frame declared twice")
            raw.frame = self.name_list()
        elif word == "domain":
            name = self.expect_kind("ident", "a coordinate name").text
            self.expect("(")
            low = self.signed_number()
            self.expect(",")
            high = self.signed_number()
            self.expect(")")
            if not low < high:
                raise DocumentError(f"empty domain interval for '{name}'")
            raw.domain.append(DomainDecl(name, low, high))
        elif word == "param":
            name = self.expect_kind("ident", "a parameter name").text
            self.expect("=")
            default = self.signed_number()
            doc = self.advance().text if self.peek().kind == "string" else ""
            raw.params.append(ParamDecl(name, default, doc))
        elif word == "metric":
            self.metric()
            self.accept(";")
            return
        elif word == "bracket":
            self.expect("[")
            left = self.expect_kind("ident", "a frame name").text
            self.expect(",")
            right = self.expect_kind("ident", "a frame name").text
            self.expect("]")
            self.expect("=")
            raw.brackets.append(BracketDecl(left, right, tuple(self.combination())))
        elif word in ("field", "form"):
            name = self.expect_kind("ident", f"a {word} name").text
            self.expect("=")
            if self.is_punct("("):
                payload: object = self.component_tuple()
            elif word == "field":
                payload = tuple(self.combination())
            else:
                payload = tuple(self.wedge_sum())
            raw.declarations.append((word, name, payload, token.offset))
        else:
            raise self.fail("expected a statement keyword", token)
        self.expect(";")

    def component_tuple(self) -> Tuple[_Token, ...]:
        self.expect("(")
        items = [self.expect_kind("string", "a quoted expression")]
        while self.accept(","):
            items.append(self.expect_kind("string", "a quoted expression"))
        self.expect(")")
        return tuple(items)

    def metric(self) -> None:
        raw = self.raw
        if raw.metric_seen:
            raise DocumentError("metric declared twice")
        raw.metric_seen = True
        if self.peek().kind == "ident" and self.peek().text == "diag":
            self.advance()
            self.expect("(")
            values = [self.signed_number()]
            while self.accept(","):
                values.append(self.signed_number())
            self.expect(")")
            if len(values) != DIM:
                raise DocumentError(f"metric diag needs {DIM} entries, got {len(values)}")
            raw.metric_diag = values
            return
        self.expect("{")
        while not self.is_punct("}"):
            self.expect("[")
            i = self.integer()
            self.expect("]")
            self.expect("[")
            j = self.integer()
            self.expect("]")
            self.expect("=")
            text = self.expect_kind("string", "a quoted expression")
            self.expect(";")
            if i >= DIM or j >= DIM:
                raise DocumentError(f"metric index [{i}][{j}] outside a {DIM}x{DIM} matrix")
            raw.metric_entries.append((i, j, text))
        self.expect("}")


# Resolution --------------------------------------------------------------


def _expression(token: _Token, table: SymbolTable, label: str) -> Expr:
    return parse_expression(token.text, table, base_offset=token.offset + 1, source=label)


def _combine(
    terms: Sequence[Tuple[float, str]], vectors: Dict[str, Tuple[Expr, ...]], what: str
) -> Tuple[Expr, ...]:
    result: List[Expr] = [ZERO] * DIM
    for coef, name in terms:
        if name not in vectors:
            raise DocumentError(f"unknown {what} '{name}'")
        result = [add(r, mul(Const(coef), c)) for r, c in zip(result, vectors[name])]
    return tuple(result)


def _wedge(
    terms: Sequence[Tuple[float, str, str]], one_forms: Dict[str, Tuple[Expr, ...]]
) -> Tuple[Tuple[Expr, ...], ...]:
    rows = [[ZERO] * DIM for _ in range(DIM)]
    for coef, left, right in terms:
        for name in (left, right):
            if name not in one_forms:
                raise DocumentError(f"unknown 1-form '{name}' in wedge")
        a, b = one_forms[left], one_forms[right]
        for i in range(DIM):
            for j in range(DIM):
                if i == j:
                    continue
                rows[i][j] = add(rows[i][j], mul(Const(coef), sub(mul(a[i], b[j]), mul(a[j], b[i]))))
    return tuple(tuple(row) for row in rows)


def _resolve(raw: _Raw) -> GeometryDocument:
    if raw.backend is None:
        raise DocumentError("missing backend declaration")
    frame = raw.backend == Backend.FRAME
    names = raw.frame if frame else raw.coords
    if (raw.coords if frame else raw.frame) is not None:
        other = "coords" if frame else "frame"
        raise DocumentError(f"'{other}' is not allowed in the {raw.backend.value} backend")
    if names is None:
        raise DocumentError("missing 'frame' declaration" if frame else "missing 'coords' declaration")
    if len(names) != DIM:
        raise DocumentError(f"expected {DIM} {'frame' if frame else 'coordinate'} names, got {len(names)}")
    if frame and raw.domain:
        raise DocumentError("'domain' is only allowed in the coordinate backend")
    if not frame and raw.brackets:
        raise DocumentError("'bracket' is only allowed in the frame backend")
    if not raw.metric_seen:
        raise DocumentError("missing metric")

    seen: Dict[str, str] = {}

    def declare(name: str, kind: str) -> None:
        if name in RESERVED or name in KEYWORDS:
            raise DocumentError(f"{kind} name '{name}' is reserved")
        if name in seen:
            raise DocumentError(f"duplicate name '{name}' ({seen[name]} and {kind})")
        seen[name] = kind

    for name in names:
        declare(name, "frame field" if frame else "coordinate")
    for param in raw.params:
        declare(param.name, "parameter")
    for kind, name, _, _ in raw.declarations:
        declare(name, kind)

    domain_names = set()
    for decl in raw.domain:
        if decl.name not in names:
            raise DocumentError(f"domain for undeclared coordinate '{decl.name}'")
        if decl.name in domain_names:
            raise DocumentError(f"duplicate domain for '{decl.name}'")
        domain_names.add(decl.name)

    table = SymbolTable.build(() if frame else names, (p.name for p in raw.params))

    metric: List[List[Expr]] = [[ZERO] * DIM for _ in range(DIM)]
    if raw.metric_diag is not None:
        for i, value in enumerate(raw.metric_diag):
            metric[i][i] = Const(value)
    else:
        given: Dict[Tuple[int, int], Expr] = {}
        for i, j, token in raw.metric_entries:
            if (i, j) in given:
                raise DocumentError(f"duplicate metric entry [{i}][{j}]")
            expr = _expression(token, table, f"metric[{i}][{j}]")
            if (j, i) in given and given[(j, i)] != expr:
                raise DocumentError(f"metric entry [{i}][{j}] differs from [{j}][{i}]")
            given[(i, j)] = expr
            metric[i][j] = metric[j][i] = expr

    brackets: List[BracketDecl] = []
    if frame:
        pairs = set()
        for decl in raw.brackets:
            for name in (decl.left, decl.right):
                if name not in names:
                    raise DocumentError(f"bracket of unknown frame field '{name}'")
            if decl.left == decl.right:
                raise DocumentError(f"bracket [{decl.left},{decl.right}] must vanish")
            key = frozenset((decl.left, decl.right))
            if key in pairs:
                raise DocumentError(f"duplicate bracket [{decl.left},{decl.right}]")
            pairs.add(key)
            for _, name in decl.terms:
                if name not in names:
                    raise DocumentError(f"bracket value uses unknown frame field '{name}'")
            brackets.append(decl)

    vectors: Dict[str, Tuple[Expr, ...]] = {}
    if frame:
        for k, name in enumerate(names):
            vectors[name] = tuple(Const(1.0) if m == k else ZERO for m in range(DIM))
    one_forms: Dict[str, Tuple[Expr, ...]] = {}
    fields: List[FieldDecl] = []
    forms: List[FormDecl] = []
    for kind, name, payload, _ in raw.declarations:
        if isinstance(payload, tuple) and payload and isinstance(payload[0], _Token):
            if len(payload) != DIM:
                raise DocumentError(f"{kind} '{name}' needs {DIM} components, got {len(payload)}")
            components = tuple(
                _expression(tok, table, f"{kind} {name}[{k}]") for k, tok in enumerate(payload)
            )
            if kind == "field":
                vectors[name] = components
                fields.append(FieldDecl(name, components))
            else:
                one_forms[name] = components
                forms.append(FormDecl(name, 1, components))
        elif kind == "field":
            terms = tuple(payload)  # type: ignore[arg-type]
            components = _combine(terms, vectors, "vector field")
            vectors[name] = components
            fields.append(FieldDecl(name, components, terms))
        else:
            wedge_terms = tuple(payload)  # type: ignore[arg-type]
            forms.append(FormDecl(name, 2, _wedge(wedge_terms, one_forms), wedge_terms))

    return GeometryDocument(
        name=raw.name,
        backend=raw.backend,
        names=tuple(names),
        metric=tuple(tuple(row) for row in metric),
        domain=tuple(raw.domain),
        params=tuple(raw.params),
        brackets=tuple(brackets),
        fields=tuple(fields),
        forms=tuple(forms),
    )


def parse_geometry(document: str) -> GeometryDocument:
    """
    Parse a geometry document.

    Args:
        document: Document text

    Returns:
        Fully resolved GeometryDocument with a symmetric metric

    Raises:
        ExprSyntaxError: malformed document or entry, with a byte offset into `document`
        UnknownSymbolError: an entry refers to an undeclared name
        DocumentError: dimension, duplicate-name, backend or metric-symmetry violations
    """
    raw = _DocumentParser(document).document()
    doc = _resolve(raw)
    logger.debug(f"Parsed geometry '{doc.name}' ({doc.backend.value} backend)")
    return doc


# Serialization -----------------------------------------------------------


def _number(value: float) -> str:
    if float(value).is_integer() and abs(value) < 1e15:
        return str(int(value))
    return repr(float(value))


def _terms_text(terms: Sequence[Tuple[float, str]]) -> str:
    parts = []
    for k, (coef, name) in enumerate(terms):
        magnitude = abs(coef)
        body = name if magnitude == 1.0 else f"{_number(magnitude)} * {name}"
        if k == 0:
            parts.append(("-" if coef < 0 else "") + body)
        else:
            parts.append(("- " if coef < 0 else "+ ") + body)
    return " ".join(parts)


def _wedge_text(terms: Sequence[Tuple[float, str, str]]) -> str:
    return _terms_text([(coef, f"{a} ^ {b}") for coef, a, b in terms])


def _quoted(components: Sequence[Expr]) -> str:
    return "(" + ", ".join(f'"{pretty(c)}"' for c in components) + ")"


def to_text(doc: GeometryDocument) -> str:
    """Canonical document text; parsing it reproduces `doc`."""
    lines = [f'geometry "{doc.name}" {{', f"    backend {doc.backend.value};"]
    lines.append(f"    {'frame' if doc.is_frame else 'coords'} {' '.join(doc.names)};")
    for decl in doc.domain:
        lines.append(f"    domain {decl.name} ({_number(decl.low)}, {_number(decl.high)});")
    for param in doc.params:
        doc_text = f' "{param.doc}"' if param.doc else ""
        lines.append(f"    param {param.name} = {_number(param.default)}{doc_text};")

    off_diagonal = [doc.metric[i][j] for i in range(DIM) for j in range(DIM) if i != j]
    diagonal = [doc.metric[i][i] for i in range(DIM)]
    if all(is_const(e, 0.0) for e in off_diagonal) and all(isinstance(e, Const) for e in diagonal):
        values = ", ".join(_number(e.value) for e in diagonal)  # type: ignore[attr-defined]
        lines.append(f"    metric diag({values});")
    else:
        lines.append("    metric {")
        for i in range(DIM):
            for j in range(i, DIM):
                if not is_const(doc.metric[i][j], 0.0):
                    lines.append(f'        [{i}][{j}] = "{pretty(doc.metric[i][j])}";')
        lines.append("    }")

    for bracket in doc.brackets:
        lines.append(f"    bracket [{bracket.left},{bracket.right}] = {_terms_text(bracket.terms)};")
    for decl in _declaration_order(doc):
        if isinstance(decl, FieldDecl):
            body = _terms_text(decl.terms) if decl.terms is not None else _quoted(decl.components)
            lines.append(f"    field {decl.name} = {body};")
        else:
            body = _wedge_text(decl.terms) if decl.terms is not None else _quoted(decl.components)
            lines.append(f"    form {decl.name} = {body};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _declaration_order(doc: GeometryDocument) -> List[object]:
    # fields never depend on forms and vice versa, so fields-then-forms resolves identically
    return [*doc.fields, *doc.forms]
