"""Canonical pretty printer; ``parse(pretty_print(p)) == p``."""

from . import nodes as n

_LEVEL = {"||": 0, "&&": 1, "==": 2, "!=": 2}
_LEVEL.update({op: 3 for op in ("<", "<=", ">", ">=")})
_LEVEL.update({"+": 4, "-": 4, "*": 5, "/": 5, "%": 5})
_UNARY = 6


def format_expr(e, parent=-1, right_side=False):
    if isinstance(e, n.IntLit):
        text = str(e.value)
        # a negative literal binds like a unary operator
        return f"({text})" if e.value < 0 and parent >= _UNARY else text
    if isinstance(e, n.BoolLit):
        return "true" if e.value else "false"
    if isinstance(e, n.Var):
        return e.name
    if isinstance(e, n.Index):
        return f"{e.name}[{format_expr(e.index)}]"
    if isinstance(e, n.Call):
        return f"{e.name}({', '.join(format_expr(a) for a in e.args)})"
    if isinstance(e, n.Unary):
        inner = format_expr(e.operand, _UNARY)
        if isinstance(e.operand, n.IntLit) and e.operand.value >= 0:
            # keep "-(5)" from folding into the literal -5
            inner = f"({inner})"
        return f"{e.op}{inner}"
    if isinstance(e, n.BinOp):
        level = _LEVEL[e.op]
        text = (
            f"{format_expr(e.left, level)} {e.op} "
            f"{format_expr(e.right, level, right_side=True)}"
        )
        # operators are left-associative: parenthesize equal-level right operands
        if level < parent or (level == parent and right_side):
            return f"({text})"
        return text
    raise TypeError(f"not an expression: {e!r}")


def _format_block(body, indent):
    if not body:
        return "{}"
    lines = ["{"]
    for stmt in body:
        lines.extend(_format_stmt(stmt, indent + 1))
    lines.append("    " * indent + "}")
    return "\n".join(lines)


def _format_stmt(s, indent):
    pad = "    " * indent
    if isinstance(s, n.Assign):
        return [f"{pad}{s.target} = {format_expr(s.value)}"]
    if isinstance(s, n.ArrayWrite):
        return [f"{pad}{s.target}[{format_expr(s.index)}] = {format_expr(s.value)}"]
    if isinstance(s, n.Return):
        return [f"{pad}return {format_expr(s.value)}"]
    if isinstance(s, n.CallStmt):
        return [f"{pad}{format_expr(s.call)}"]
    if isinstance(s, n.While):
        return [f"{pad}while ({format_expr(s.cond)}) {_format_block(s.body, indent)}"]
    if isinstance(s, n.If):
        text = f"{pad}if ({format_expr(s.cond)}) {_format_block(s.then, indent)}"
        if s.orelse:
            text += f" else {_format_block(s.orelse, indent)}"
        return [text]
    raise TypeError(f"not a statement: {s!r}")


def pretty_print(program) -> str:
    chunks = []
    for f in program.functions:
        params = ", ".join(f"{p.name}: {p.type}" for p in f.params)
        chunks.append(f"fn {f.name}({params}) -> {f.returns} {_format_block(f.body, 0)}")
    return "\n\n".join(chunks) + "\n"
