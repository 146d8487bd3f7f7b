"""Recursive-descent parser for MiniLang.

Grammar (``;`` after simple statements is optional)::

    program   := function*
    function  := "fn" NAME "(" [param ("," param)*] ")" ["->" type] block
    param     := NAME ":" type
    type      := "int" | "bool" | "[" "int" "]"
    block     := "{" statement* "}"
    statement := "if" "(" expr ")" block ["else" (block | if-statement)]
               | "while" "(" expr ")" block
               | "return" expr
               | NAME "=" expr | NAME "[" expr "]" "=" expr | call

Expression precedence, loosest first: ``||``, ``&&``, equality, relational,
additive, multiplicative, unary (``-`` ``!``), postfix/atoms.
"""

import hashlib

from ..errors import DuplicateFunction, MiniSyntaxError
from . import nodes as n
from .lexer import tokenize

_PRECEDENCE = [
    ("||",),
    ("&&",),
    ("==", "!="),
    ("<", "<=", ">", ">="),
    ("+", "-"),
    ("*", "/", "%"),
]


class _Parser:
    def __init__(self, source):
        self.tokens = tokenize(source)
        self.pos = 0
        self.next_sid = 1

    # token helpers

    @property
    def tok(self):
        return self.tokens[self.pos]

    def at(self, text):
        t = self.tok
        return t.kind in ("op", "kw") and t.text == text

    def error(self, message, tok=None):
        tok = tok or self.tok
        if tok.kind == "eof":
            message = f"{message} at end of input"
        raise MiniSyntaxError(message, tok.line, tok.col)

    def expect(self, text):
        if not self.at(text):
            found = self.tok.text or "EOF"
            self.error(f"expected {text!r}, found {found!r}")
        return self.advance()

    def expect_name(self):
        if self.tok.kind != "name":
            found = self.tok.text or "EOF"
            self.error(f"expected identifier, found {found!r}")
        return self.advance()

    def advance(self):
        t = self.tok
        self.pos += 1
        return t

    def take_sid(self):
        sid = self.next_sid
        self.next_sid += 1
        return sid

    # declarations

    def program(self):
        functions = []
        while self.tok.kind != "eof":
            functions.append(self.function())
        return functions

    def function(self):
        start = self.expect("fn")
        name = self.expect_name().text
        self.expect("(")
        params = []
        if not self.at(")"):
            params.append(self.param())
            while self.at(","):
                self.advance()
                params.append(self.param())
        self.expect(")")
        returns = n.INT
        if self.at("->"):
            self.advance()
            returns = self.type_()
        body = self.block()
        return n.Function(name, tuple(params), body, returns, start.line, start.col)

    def param(self):
        name = self.expect_name().text
        self.expect(":")
        return n.Param(name, self.type_())

    def type_(self):
        if self.at("int") or self.at("bool"):
            return self.advance().text
        if self.at("["):
            self.advance()
            self.expect("int")
            self.expect("]")
            return n.ARRAY
        self.error(f"expected a type, found {self.tok.text or 'EOF'!r}")

    # statements

    def block(self):
        self.expect("{")
        body = []
        while not self.at("}"):
            if self.tok.kind == "eof":
                self.error("unterminated block")
            body.append(self.statement())
        self.advance()
        return tuple(body)

    def statement(self):
        t = self.tok
        if self.at("if"):
            return self.if_statement()
        if self.at("while"):
            self.advance()
            sid = self.take_sid()
            self.expect("(")
            cond = self.expr()
            self.expect(")")
            return n.While(sid, cond, self.block(), t.line, t.col)
        if self.at("return"):
            self.advance()
            sid = self.take_sid()
            stmt = n.Return(sid, self.expr(), t.line, t.col)
        elif t.kind == "name":
            stmt = self.simple_statement()
        else:
            self.error(f"expected a statement, found {t.text or 'EOF'!r}")
        if self.at(";"):
            self.advance()
        return stmt

    def if_statement(self):
        t = self.expect("if")
        sid = self.take_sid()
        self.expect("(")
        cond = self.expr()
        self.expect(")")
        then = self.block()
        orelse = ()
        if self.at("else"):
            self.advance()
            orelse = (self.if_statement(),) if self.at("if") else self.block()
        return n.If(sid, cond, then, orelse, t.line, t.col)

    def simple_statement(self):
        name = self.advance()
        sid = self.take_sid()
        if self.at("="):
            self.advance()
            return n.Assign(sid, name.text, self.expr(), name.line, name.col)
        if self.at("["):
            self.advance()
            index = self.expr()
            self.expect("]")
            self.expect("=")
            return n.ArrayWrite(sid, name.text, index, self.expr(), name.line, name.col)
        if self.at("("):
            call = self.call_rest(name)
            return n.CallStmt(sid, call, name.line, name.col)
        self.error(f"expected '=', '[' or '(' after {name.text!r}")

    # expressions

    def expr(self, level=0):
        if level == len(_PRECEDENCE):
            return self.unary()
        left = self.expr(level + 1)
        while self.tok.kind == "op" and self.tok.text in _PRECEDENCE[level]:
            op = self.advance()
            right = self.expr(level + 1)
            left = n.BinOp(op.text, left, right, op.line, op.col)
        return left

    def unary(self):
        t = self.tok
        if self.at("-"):
            self.advance()
            if self.tok.kind == "int":
                lit = self.advance()
                return n.IntLit(-int(lit.text), t.line, t.col)
            return n.Unary("-", self.unary(), t.line, t.col)
        if self.at("!"):
            self.advance()
            return n.Unary("!", self.unary(), t.line, t.col)
        return self.atom()

    def atom(self):
        t = self.tok
        if t.kind == "int":
            self.advance()
            return n.IntLit(int(t.text), t.line, t.col)
        if self.at("true") or self.at("false"):
            self.advance()
            return n.BoolLit(t.text == "true", t.line, t.col)
        if self.at("("):
            self.advance()
            inner = self.expr()
            self.expect(")")
            return inner
        if t.kind == "name":
            self.advance()
            if self.at("("):
                return self.call_rest(t)
            if self.at("["):
                self.advance()
                index = self.expr()
                self.expect("]")
                return n.Index(t.text, index, t.line, t.col)
            return n.Var(t.text, t.line, t.col)
        self.error(f"expected an expression, found {t.text or 'EOF'!r}")

    def call_rest(self, name):
        self.expect("(")
        args = []
        if not self.at(")"):
            args.append(self.expr())
            while self.at(","):
                self.advance()
                args.append(self.expr())
        self.expect(")")
        return n.Call(name.text, tuple(args), name.line, name.col)


def digest(text):
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def parse(source_text, version_label="v0", check=True):
    """Parse MiniLang source into a :class:`Program`.

    Statement ids are dense, program-global and assigned in source order
    starting at 1.  With ``check`` (the default) the program is also
    type-checked.
    """
    parser = _Parser(source_text)
    functions = parser.program()
    seen = set()
    for f in functions:
        if f.name in seen:
            raise DuplicateFunction(f"{f.line}:{f.col}: duplicate function {f.name!r}")
        seen.add(f.name)
    program = n.Program(tuple(functions), version_label, digest(source_text))
    if check:
        from .typecheck import check_program

        check_program(program)
    return program


def parse_expression(text):
    """Parse a standalone expression (used for custom relations)."""
    parser = _Parser(text)
    expr = parser.expr()
    if parser.tok.kind != "eof":
        parser.error(f"unexpected {parser.tok.text!r} after expression")
    return expr
