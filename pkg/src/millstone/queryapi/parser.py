"""Parser for the query-language subset the API accepts.

Covers: an optional ``query Name($var: Type!, ...)`` header, a single
operation call with literal or ``$variable`` arguments, and nested selection
sets. No fragments, directives or mutations. Token positions are kept so
syntax errors point at a line and column.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

from ..errors import (
    MissingVariable,
    QuerySyntaxError,
    TypeMismatch,
    UnknownField,
    UnknownOperation,
)
from .schema import OPERATIONS

_PUNCT = set("{}():$![],=")


@dataclass(frozen=True)
class Token:
    kind: str  # "name" | "string" | "int" | "float" | "punct" | "eof"
    value: Any
    line: int
    col: int


def _tokenize(text: str) -> list[Token]:
    tokens = []
    line, col, i = 1, 1, 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r,":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        start_line, start_col = line, col
        if ch == '"':
            i += 1
            col += 1
            buf = []
            while i < n and text[i] != '"':
                if text[i] == "\n":
                    raise QuerySyntaxError("unterminated string", start_line, start_col)
                if text[i] == "\\" and i + 1 < n:
                    esc = text[i + 1]
                    buf.append({"n": "\n", "t": "\t", '"': '"', "\\": "\\"}.get(esc, esc))
                    i += 2
                    col += 2
                else:
                    buf.append(text[i])
                    i += 1
                    col += 1
            if i >= n:
                raise QuerySyntaxError("unterminated string", start_line, start_col)
            i += 1
            col += 1
            tokens.append(Token("string", "".join(buf), start_line, start_col))
            continue
        if ch.isdigit() or (ch == "-" and i + 1 < n and text[i + 1].isdigit()):
            j = i + 1
            while j < n and (text[j].isdigit() or text[j] in ".eE+-"):
                if text[j] in "+-" and text[j - 1] not in "eE":
                    break
                j += 1
            lexeme = text[i:j]
            try:
                value = int(lexeme)
                kind = "int"
            except ValueError:
                try:
                    value = float(lexeme)
                    kind = "float"
                except ValueError:
                    raise QuerySyntaxError(f"bad number {lexeme!r}", start_line, start_col)
            tokens.append(Token(kind, value, start_line, start_col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token("name", text[i:j], start_line, start_col))
            col += j - i
            i = j
            continue
        if ch in _PUNCT:
            tokens.append(Token("punct", ch, start_line, start_col))
            i += 1
            col += 1
            continue
        raise QuerySyntaxError(f"unexpected character {ch!r}", start_line, start_col)
    tokens.append(Token("eof", None, line, col))
    return tokens


@dataclass(frozen=True)
class VarRef:
    name: str


@dataclass(frozen=True)
class VarDecl:
    name: str
    type_name: str
    required: bool


@dataclass
class Field:
    name: str
    args: dict[str, Any] = field(default_factory=dict)
    selections: list["Field"] = field(default_factory=list)
    line: int = 0
    col: int = 0


@dataclass
class QueryAst:
    query_name: Optional[str]  # name after the `query` keyword, if any
    var_decls: list[VarDecl]
    operation: Field

    @property
    def operation_name(self) -> str:
        return self.operation.name


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    @property
    def cur(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.cur
        self.pos += 1
        return tok

    def expect(self, kind: str, value=None) -> Token:
        tok = self.cur
        if tok.kind != kind or (value is not None and tok.value != value):
            want = value if value is not None else kind
            raise QuerySyntaxError(f"expected {want!r}, found {tok.value!r}", tok.line, tok.col)
        return self.advance()

    def parse_document(self) -> QueryAst:
        query_name = None
        var_decls: list[VarDecl] = []
        if self.cur.kind == "name" and self.cur.value == "query":
            self.advance()
            query_name = self.expect("name").value
            if self.cur.kind == "punct" and self.cur.value == "(":
                var_decls = self.parse_var_decls()
        selections = self.parse_selection_set()
        if len(selections) != 1:
            tok = self.cur
            raise QuerySyntaxError(
                f"expected exactly one operation, found {len(selections)}", tok.line, tok.col
            )
        self.expect("eof")
        return QueryAst(query_name, var_decls, selections[0])

    def parse_var_decls(self) -> list[VarDecl]:
        self.expect("punct", "(")
        decls = []
        while not (self.cur.kind == "punct" and self.cur.value == ")"):
            self.expect("punct", "$")
            name = self.expect("name").value
            self.expect("punct", ":")
            type_name = self.parse_type_name()
            required = False
            if self.cur.kind == "punct" and self.cur.value == "!":
                self.advance()
                required = True
            decls.append(VarDecl(name, type_name, required))
        self.advance()
        return decls

    def parse_type_name(self) -> str:
        if self.cur.kind == "punct" and self.cur.value == "[":
            self.advance()
            inner = self.parse_type_name()
            if self.cur.kind == "punct" and self.cur.value == "!":
                self.advance()
                inner += "!"
            self.expect("punct", "]")
            return f"[{inner}]"
        return self.expect("name").value

    def parse_selection_set(self) -> list[Field]:
        self.expect("punct", "{")
        fields = []
        while not (self.cur.kind == "punct" and self.cur.value == "}"):
            fields.append(self.parse_field())
        self.advance()
        if not fields:
            tok = self.cur
            raise QuerySyntaxError("empty selection set", tok.line, tok.col)
        return fields

    def parse_field(self) -> Field:
        tok = self.expect("name")
        node = Field(tok.value, line=tok.line, col=tok.col)
        if self.cur.kind == "punct" and self.cur.value == "(":
            node.args = self.parse_args()
        if self.cur.kind == "punct" and self.cur.value == "{":
            node.selections = self.parse_selection_set()
        return node

    def parse_args(self) -> dict[str, Any]:
        self.expect("punct", "(")
        args: dict[str, Any] = {}
        while not (self.cur.kind == "punct" and self.cur.value == ")"):
            name = self.expect("name").value
            self.expect("punct", ":")
            args[name] = self.parse_value()
        self.advance()
        return args

    def parse_value(self):
        tok = self.cur
        if tok.kind in ("string", "int", "float"):
            return self.advance().value
        if tok.kind == "name":
            keyword = {"true": True, "false": False, "null": None}
            if tok.value in keyword:
                self.advance()
                return keyword[tok.value]
            raise QuerySyntaxError(f"unexpected name {tok.value!r} in value", tok.line, tok.col)
        if tok.kind == "punct" and tok.value == "$":
            self.advance()
            return VarRef(self.expect("name").value)
        if tok.kind == "punct" and tok.value == "[":
            self.advance()
            items = []
            while not (self.cur.kind == "punct" and self.cur.value == "]"):
                items.append(self.parse_value())
            self.advance()
            return items
        if tok.kind == "punct" and tok.value == "{":
            self.advance()
            obj = {}
            while not (self.cur.kind == "punct" and self.cur.value == "}"):
                key_tok = self.cur
                if key_tok.kind == "string":
                    key = self.advance().value
                else:
                    key = self.expect("name").value
                self.expect("punct", ":")
                obj[key] = self.parse_value()
            self.advance()
            return obj
        raise QuerySyntaxError(f"unexpected token {tok.value!r}", tok.line, tok.col)


def _validate_selections(op_name: str, selections: list[Field], allowed, path: str):
    if allowed is None:
        if selections:
            f = selections[0]
            raise UnknownField(
                f"{path or op_name} returns a scalar and takes no selection set"
            )
        return
    if not selections:
        raise QuerySyntaxError(f"{path or op_name} requires a selection set", 0, 0)
    for f in selections:
        if isinstance(allowed, dict):
            if f.name not in allowed:
                raise UnknownField(f"unknown field {f.name!r} under {path or op_name}")
            _validate_selections(op_name, f.selections, allowed[f.name], f.name)
        else:  # tuple of leaf names
            if f.name not in allowed:
                raise UnknownField(f"unknown field {f.name!r} under {path or op_name}")
            if f.selections:
                raise UnknownField(f"field {f.name!r} takes no selection set")


def parse_query(text: str) -> QueryAst:
    """Parse and validate one operation against the static schema."""
    ast = _Parser(_tokenize(text)).parse_document()
    op = ast.operation
    spec = OPERATIONS.get(op.name)
    if spec is None:
        raise UnknownOperation(f"unknown operation {op.name!r} at {op.line}:{op.col}")
    for arg in op.args:
        if arg not in spec["args"]:
            raise UnknownField(f"operation {op.name} has no argument {arg!r}")
    _validate_selections(op.name, op.selections, spec["fields"], "")
    return ast


_SCALAR_CHECKS = {
    "String": lambda v: isinstance(v, str),
    "Int": lambda v: isinstance(v, int) and not isinstance(v, bool),
    "Float": lambda v: isinstance(v, (int, float)) and not isinstance(v, bool),
    "Boolean": lambda v: isinstance(v, bool),
}


def _check_type(name: str, type_name: str, value):
    if value is None:
        return
    base = type_name.rstrip("!")
    if base.startswith("["):
        if not isinstance(value, list):
            raise TypeMismatch(f"variable ${name} must be a list of {base[1:-1]}")
        for item in value:
            _check_type(name, base[1:-1], item)
        return
    check = _SCALAR_CHECKS.get(base)
    if check is not None:
        if not check(value):
            raise TypeMismatch(f"variable ${name} must be of type {base}")
        return
    # Input object types (EncodeObject, DocumentKey, ...) must be JSON objects.
    if not isinstance(value, dict):
        raise TypeMismatch(f"variable ${name} must be an object of type {base}")


def bind_variables(ast: QueryAst, variables: Optional[dict]) -> tuple[QueryAst, list[str]]:
    """Substitute every $var; returns (bound ast, warnings for unused variables)."""
    variables = variables or {}
    declared = {d.name: d for d in ast.var_decls}
    for decl in ast.var_decls:
        if decl.required and variables.get(decl.name) is None:
            raise MissingVariable(f"required variable ${decl.name} not provided")
        if decl.name in variables:
            _check_type(decl.name, decl.type_name, variables[decl.name])

    used: set[str] = set()

    def subst(value):
        if isinstance(value, VarRef):
            if value.name not in variables:
                if value.name in declared and not declared[value.name].required:
                    return None
                raise MissingVariable(f"variable ${value.name} not provided")
            used.add(value.name)
            return variables[value.name]
        if isinstance(value, list):
            return [subst(v) for v in value]
        if isinstance(value, dict):
            return {k: subst(v) for k, v in value.items()}
        return value

    def bind_field(f: Field) -> Field:
        return Field(
            f.name,
            {k: subst(v) for k, v in f.args.items()},
            [bind_field(s) for s in f.selections],
            f.line,
            f.col,
        )

    bound = QueryAst(ast.query_name, ast.var_decls, bind_field(ast.operation))
    warnings = [f"unused variable ${name}" for name in variables if name not in used]
    return bound, warnings


def _print_value(value) -> str:
    import json

    if isinstance(value, VarRef):
        return f"${value.name}"
    if isinstance(value, list):
        return "[" + ", ".join(_print_value(v) for v in value) + "]"
    if isinstance(value, dict):
        return "{" + ", ".join(f"{k}: {_print_value(v)}" for k, v in value.items()) + "}"
    return json.dumps(value)


def _print_field(f: Field, indent: int) -> str:
    pad = "  " * indent
    out = pad + f.name
    if f.args:
        out += "(" + ", ".join(f"{k}: {_print_value(v)}" for k, v in f.args.items()) + ")"
    if f.selections:
        out += " {\n"
        out += "\n".join(_print_field(s, indent + 1) for s in f.selections)
        out += "\n" + pad + "}"
    return out


def print_query(ast: QueryAst) -> str:
    """Canonical pretty-printer; parse_query(print_query(ast)) reproduces the AST."""
    header = ""
    if ast.query_name:
        header = f"query {ast.query_name}"
        if ast.var_decls:
            decls = ", ".join(
                f"${d.name}: {d.type_name}{'!' if d.required else ''}" for d in ast.var_decls
            )
            header += f"({decls})"
        header += " "
    return header + "{\n" + _print_field(ast.operation, 1) + "\n}"
