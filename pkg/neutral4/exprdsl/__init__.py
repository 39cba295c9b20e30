"""Scalar expressions, exact jets and the geometry definition language."""

from neutral4.exprdsl.document import (
    Backend,
    BracketDecl,
    DomainDecl,
    FieldDecl,
    FormDecl,
    GeometryDocument,
    ParamDecl,
    parse_geometry,
    to_text,
)
from neutral4.exprdsl.expr import (
    Binary,
    Const,
    Coord,
    Expr,
    Param,
    Pow,
    Unary,
    differentiate,
    evaluate_value,
    free_symbols,
    pretty,
)
from neutral4.exprdsl.jet import Jet2, evaluate_jet2
from neutral4.exprdsl.parser import SymbolTable, parse_expression

__all__ = [
    "Backend",
    "Binary",
    "BracketDecl",
    "Const",
    "Coord",
    "DomainDecl",
    "Expr",
    "FieldDecl",
    "FormDecl",
    "GeometryDocument",
    "Jet2",
    "Param",
    "ParamDecl",
    "Pow",
    "SymbolTable",
    "Unary",
    "differentiate",
    "evaluate_jet2",
    "evaluate_value",
    "free_symbols",
    "parse_expression",
    "parse_geometry",
    "pretty",
    "to_text",
]
