"""Logic terms, variable standardization, and the tokenized trie form.

Terms are immutable values.  A trie path spells a term as a preorder
sequence of tokens: a functor token followed by its arguments, a cons
marker before each list element, and a nil marker closing a list.
"""
from __future__ import annotations

import re
import sys
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, NamedTuple, Sequence, Union

INT_MIN = -(2**63)
INT_MAX = 2**63 - 1


@dataclass(frozen=True, slots=True)
class Atom:
    name: str

    def __post_init__(self):
        object.__setattr__(self, "name", sys.intern(self.name))


@dataclass(frozen=True, slots=True)
class Int:
    value: int


@dataclass(frozen=True, slots=True)
class Var:
    name: str


@dataclass(frozen=True, slots=True)
class StdVar:
    index: int


def _ground(t) -> bool:
    if isinstance(t, (Var, StdVar)):
        return False
    return getattr(t, "ground", True)


@dataclass(frozen=True, slots=True)
class Compound:
    name: str
    args: tuple
    ground: bool = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if not self.args:
            raise ValueError(f"compound {self.name!r} needs at least one argument")
        object.__setattr__(self, "name", sys.intern(self.name))
        object.__setattr__(self, "args", tuple(self.args))
        object.__setattr__(self, "ground", all(_ground(a) for a in self.args))

    @property
    def arity(self) -> int:
        return len(self.args)


@dataclass(frozen=True, slots=True)
class List:
    elements: tuple
    ground: bool = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        object.__setattr__(self, "ground", all(_ground(e) for e in self.elements))


Term = Union[Atom, Int, Var, StdVar, Compound, List]

NIL = List(())


def is_simple(t: Term) -> bool:
    """Atoms, integers, variables and the empty list."""
    if isinstance(t, Compound):
        return False
    if isinstance(t, List):
        return not t.elements
    return True


# -- tokens -----------------------------------------------------------------

ATOM = "atom"
INT = "int"
VAR = "var"
FUNCTOR = "functor"
CONS = "list"
NILTOK = "nil"
REF = "ref"
ROOT = "root"


class Token(NamedTuple):
    """One trie edge label.  ``kind`` leads so different kinds never compare equal."""

    kind: str
    value: object = None
    arity: int = 0

    def __str__(self):
        if self.kind == FUNCTOR:
            return f"{self.value}/{self.arity}"
        if self.kind == VAR:
            return f"VAR{self.value}"
        if self.kind == CONS:
            return "[|]"
        if self.kind == NILTOK:
            return "[]"
        if self.kind == REF:
            return f"ref@{id(self.value):x}"
        if self.kind == ROOT:
            return "ROOT"
        return str(self.value)


CONS_TOKEN = Token(CONS)
NIL_TOKEN = Token(NILTOK)
# never produced by tokenize
ROOT_TOKEN = Token(ROOT)


def atom_token(name: str) -> Token:
    return Token(ATOM, sys.intern(name))


def int_token(value: int) -> Token:
    return Token(INT, value)


def var_token(index: int) -> Token:
    return Token(VAR, index)


def functor_token(name: str, arity: int) -> Token:
    if arity < 1:
        raise ValueError("functor arity must be >= 1")
    return Token(FUNCTOR, sys.intern(name), arity)


def ref_token(leaf) -> Token:
    return Token(REF, leaf)


def simple_token(t: Term) -> Token:
    if isinstance(t, Int):
        return Token(INT, t.value)
    if isinstance(t, Atom):
        return Token(ATOM, t.name)
    if isinstance(t, StdVar):
        return Token(VAR, t.index)
    if isinstance(t, List) and not t.elements:
        return NIL_TOKEN
    if isinstance(t, Var):
        raise ValueError(f"variable {t.name} is not standardized")
    raise TypeError(f"not a simple term: {t!r}")


def tokenize(t: Term) -> list[Token]:
    out: list[Token] = []
    _tokenize_into(t, out)
    return out


def _tokenize_into(t: Term, out: list[Token]) -> None:
    if isinstance(t, Compound):
        out.append(Token(FUNCTOR, t.name, len(t.args)))
        for a in t.args:
            _tokenize_into(a, out)
    elif isinstance(t, List):
        for e in t.elements:
            out.append(CONS_TOKEN)
            _tokenize_into(e, out)
        out.append(NIL_TOKEN)
    else:
        out.append(simple_token(t))


def tokenize_all(terms: Iterable[Term]) -> list[Token]:
    out: list[Token] = []
    for t in terms:
        _tokenize_into(t, out)
    return out


def detokenize(
    tokens: Sequence[Token],
    count: int,
    resolve_ref: Callable[[object], Term] | None = None,
) -> list[Term]:
    """Read ``count`` consecutive terms back from a token sequence.

    Reference tokens are handed to ``resolve_ref``.  Trailing tokens are an error.
    """
    pos = 0

    def read() -> Term:
        nonlocal pos
        tok = tokens[pos]
        pos += 1
        kind = tok.kind
        if kind == INT:
            return Int(tok.value)
        if kind == ATOM:
            return Atom(tok.value)
        if kind == VAR:
            return StdVar(tok.value)
        if kind == NILTOK:
            return NIL
        if kind == FUNCTOR:
            return Compound(tok.value, tuple(read() for _ in range(tok.arity)))
        if kind == CONS:
            elems = [read()]
            while tokens[pos].kind == CONS:
                pos += 1
                elems.append(read())
            if tokens[pos].kind != NILTOK:
                raise ValueError("list not closed by nil token")
            pos += 1
            return List(tuple(elems))
        if kind == REF:
            if resolve_ref is None:
                raise ValueError("reference token without a resolver")
            return resolve_ref(tok.value)
        raise ValueError(f"unexpected token {tok!r}")

    terms = [read() for _ in range(count)]
    if pos != len(tokens):
        raise ValueError(f"{len(tokens) - pos} trailing tokens")
    return terms


def token_length(t: Term) -> int:
    if isinstance(t, Compound):
        return 1 + sum(token_length(a) for a in t.args)
    if isinstance(t, List):
        return len(t.elements) + sum(token_length(e) for e in t.elements) + 1
    return 1


# -- standardization --------------------------------------------------------

def standardize(value):
    """Rename variables to ``StdVar(i)`` by order of first appearance.

    ``value`` is a term or a sequence of terms (numbered jointly, left to
    right, depth first).  Returns ``(standardized, var_count)``.
    """
    mapping: dict = {}

    def walk(t):
        if getattr(t, "ground", False):
            return t
        if isinstance(t, (Var, StdVar)):
            key = (type(t), t.name if isinstance(t, Var) else t.index)
            if key[1] == "_" and isinstance(t, Var):
                key = (Var, object())
            idx = mapping.get(key)
            if idx is None:
                idx = mapping[key] = len(mapping)
            return StdVar(idx)
        if isinstance(t, Compound):
            args = tuple(walk(a) for a in t.args)
            return t if all(x is y for x, y in zip(args, t.args)) else Compound(t.name, args)
        if isinstance(t, List):
            elems = tuple(walk(e) for e in t.elements)
            return t if all(x is y for x, y in zip(elems, t.elements)) else List(elems)
        return t

    if isinstance(value, (tuple, list)):
        out = type(value)(walk(t) for t in value)
    else:
        out = walk(value)
    return out, len(mapping)


def variables(t: Term) -> Iterator[Term]:
    """Variables of ``t`` in first-appearance order, without repeats."""
    seen = set()
    stack = [t]
    while stack:
        x = stack.pop()
        if isinstance(x, (Var, StdVar)):
            if x not in seen:
                seen.add(x)
                yield x
        elif isinstance(x, Compound):
            stack.extend(reversed(x.args))
        elif isinstance(x, List):
            stack.extend(reversed(x.elements))


@dataclass(frozen=True)
class CallSignature:
    name: str
    args: tuple

    @property
    def arity(self) -> int:
        return len(self.args)

    @classmethod
    def of(cls, name: str, args: Iterable[Term]) -> tuple["CallSignature", int]:
        std, count = standardize(tuple(args))
        return cls(sys.intern(name), std), count

    def __str__(self):
        if not self.args:
            return self.name
        return f"{self.name}({', '.join(format_term(a) for a in self.args)})"


# -- text form --------------------------------------------------------------

class TermSyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at column {pos + 1}: {text!r}")
        self.pos = pos


_LEXER = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<int>-?[0-9]+)
  | (?P<atom>[a-z][A-Za-z0-9_]*)
  | (?P<var>[A-Z_][A-Za-z0-9_]*)
  | (?P<punct>[(),\[\]|.])
    """,
    re.VERBOSE,
)


def _lex(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _LEXER.match(text, pos)
        if m is None:
            raise TermSyntaxError(f"unexpected character {text[pos]!r}", text, pos)
        if m.lastgroup != "ws":
            toks.append((m.lastgroup, m.group(), pos))
        pos = m.end()
    toks.append(("eof", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _lex(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def next(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, val, pos = self.next()
        if val != value or kind in ("atom", "var", "int"):
            found = val or "end of input"
            raise TermSyntaxError(f"expected {value!r}, found {found!r}", self.text, pos)

    def term(self) -> Term:
        kind, val, pos = self.next()
        if kind == "int":
            n = int(val)
            if not INT_MIN <= n <= INT_MAX:
                raise TermSyntaxError("integer outside the signed 64-bit range", self.text, pos)
            return Int(n)
        if kind == "var":
            return Var(val)
        if kind == "atom":
            if self.peek()[1] != "(" or self.peek()[0] != "punct":
                return Atom(val)
            self.next()
            if self.peek()[1] == ")":
                raise TermSyntaxError(f"compound {val!r} with no arguments", self.text, pos)
            args = [self.term()]
            while self.peek()[1] == ",":
                self.next()
                args.append(self.term())
            self.expect(")")
            return Compound(val, tuple(args))
        if val == "[":
            if self.peek()[1] == "]":
                self.next()
                return NIL
            elems = [self.term()]
            while self.peek()[1] == ",":
                self.next()
                elems.append(self.term())
            if self.peek()[1] == "|":
                raise TermSyntaxError("partial lists are not supported", self.text, self.peek()[2])
            self.expect("]")
            return List(tuple(elems))
        raise TermSyntaxError(f"unexpected {val or 'end of input'!r}", self.text, pos)


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    kind, val, pos = p.peek()
    if kind != "eof":
        raise TermSyntaxError(f"trailing input {val!r}", text, pos)
    return t


_FACT = re.compile(r"^\s*term\s*\((?P<body>.*)\)\s*\.\s*$")


def parse_fact_file(lines: Iterable[str]) -> list[Term]:
    """Terms of ``term(<term>).`` lines; ``%`` comments and blank lines skipped."""
    out = []
    for lineno, line in enumerate(lines, 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("%"):
            continue
        m = _FACT.match(stripped)
        if m is None:
            raise TermSyntaxError(f"line {lineno}: expected term(...).", stripped, 0)
        out.append(parse_term(m.group("body")))
    return out


def format_term(t: Term) -> str:
    if isinstance(t, Atom):
        return t.name
    if isinstance(t, Int):
        return str(t.value)
    if isinstance(t, Var):
        return t.name
    if isinstance(t, StdVar):
        return f"_G{t.index}"
    if isinstance(t, Compound):
        return f"{t.name}({','.join(format_term(a) for a in t.args)})"
    if isinstance(t, List):
        return f"[{','.join(format_term(e) for e in t.elements)}]"
    raise TypeError(f"not a term: {t!r}")
