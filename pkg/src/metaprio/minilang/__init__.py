"""MiniLang front-end: lexer, parser, type checker, printer and CFGs."""

from .cfg import ENTRY, EXIT, Cfg, build_cfg, count_operators, operator_counts
from .nodes import Function, Program
from .parser import parse, parse_expression
from .printer import format_expr, pretty_print

__all__ = [
    "ENTRY",
    "EXIT",
    "Cfg",
    "Function",
    "Program",
    "build_cfg",
    "count_operators",
    "format_expr",
    "operator_counts",
    "parse",
    "parse_expression",
    "pretty_print",
]
