"""Query language: lexer, recursive-descent parser, and canonical printer.

Grammar sketch (whitespace-separated juxtaposition means AND):

    query  := clause+
    clause := ["-"] (group | opcall | field | phrase | term) ["OR" clause]
    group  := "(" query ")"
    opcall := NAME "(" (query | STRING "," "input" | INT "," query ["," sort]) ")"

Operator names: useful, reviews, trending, similar, references, citations,
topn, docs. Fields: author, year, bibcode, bibstem, full, abs, title,
keyword, inst, property, collection, entdate, orcid, docs. ``object:`` is
recognized but deliberately unsupported. All parse errors carry the byte
offset into the input.

One normalization happens at parse time: several positive ``bibcode:``
filters juxtaposed in the same AND group select the union of the named
records (a record has exactly one bibcode, so intersection could never
match), and are therefore merged into a single OR node.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from soograph.errors import ParseError, UnknownFieldError, UnsupportedFieldError
from soograph.soo import SortSpec

SUPPORTED_FIELDS = frozenset({
    "author", "year", "bibcode", "bibstem", "full", "abs", "title", "keyword",
    "inst", "property", "collection", "entdate", "orcid", "docs",
})
UNSUPPORTED_FIELDS = frozenset({"object"})
OP_NAMES = frozenset({"useful", "reviews", "trending", "similar",
                      "references", "citations"})
SORT_KEYS = frozenset({"score", "citation_count", "read_count", "date", "first_author"})


# ----------------------------------------------------------------------
# AST
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class Term:
    text: str


@dataclass(frozen=True)
class Phrase:
    text: str


@dataclass(frozen=True)
class Field:
    name: str
    value: str
    anchored: bool = False


@dataclass(frozen=True)
class YearRange:
    lo: int
    hi: int


@dataclass(frozen=True)
class DateRange:
    lo: str   # ISO date, NOW, NOW-nDAYS, or *
    hi: str


@dataclass(frozen=True)
class And:
    children: tuple


@dataclass(frozen=True)
class Or:
    children: tuple


@dataclass(frozen=True)
class Not:
    child: object


@dataclass(frozen=True)
class OpCall:
    kind: str
    child: object = None
    raw_text: str | None = None


@dataclass(frozen=True)
class TopN:
    n: int
    child: object
    sort: SortSpec = field(default_factory=SortSpec)


@dataclass(frozen=True)
class Docs:
    library: str


# ----------------------------------------------------------------------
# Lexer
# ----------------------------------------------------------------------

LPAREN, RPAREN, COMMA, MINUS, OR, WORD, QUOTED, RANGE, EOF = (
    "LPAREN", "RPAREN", "COMMA", "MINUS", "OR", "WORD", "QUOTED", "RANGE", "EOF")

_PUNCT = {"(": LPAREN, ")": RPAREN, ",": COMMA}
_WORD_STOP = set(' \t\r\n(),"[]')


@dataclass(frozen=True)
class _Token:
    kind: str
    value: str
    offset: int  # byte offset into the UTF-8 input


def _lex(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    i = 0
    byte = 0
    n = len(text)

    def advance(k: int) -> None:
        nonlocal i, byte
        byte += len(text[i:i + k].encode("utf-8"))
        i += k

    while i < n:
        ch = text[i]
        if ch.isspace():
            advance(1)
            continue
        start = byte
        if ch in _PUNCT:
            tokens.append(_Token(_PUNCT[ch], ch, start))
            advance(1)
        elif ch == '"':
            end = text.find('"', i + 1)
            if end < 0:
                raise ParseError("unterminated string", start, {"'\"'"})
            tokens.append(_Token(QUOTED, text[i + 1:end], start))
            advance(end + 1 - i)
        elif ch == "[":
            end = text.find("]", i + 1)
            if end < 0:
                raise ParseError("unterminated range", start, {"']'"})
            tokens.append(_Token(RANGE, text[i + 1:end], start))
            advance(end + 1 - i)
        elif ch == "]":
            raise ParseError("unexpected ']'", start)
        elif ch == "-":
            tokens.append(_Token(MINUS, ch, start))
            advance(1)
        else:
            j = i
            while j < n and text[j] not in _WORD_STOP:
                j += 1
            word = text[i:j]
            kind = OR if word.upper() == "OR" else WORD
            tokens.append(_Token(kind, word, start))
            advance(j - i)
    tokens.append(_Token(EOF, "", byte))
    return tokens


# ----------------------------------------------------------------------
# Parser
# ----------------------------------------------------------------------

class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _lex(text)
        self.pos = 0

    def peek(self, ahead: int = 0) -> _Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != EOF:
            self.pos += 1
        return tok

    def expect(self, kind: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(f"expected {kind}, found {tok.kind} {tok.value!r}",
                             tok.offset, {kind})
        return self.next()

    # -- grammar ------------------------------------------------------

    def parse(self):
        node = self.query()
        tok = self.peek()
        if tok.kind != EOF:
            raise ParseError(f"unexpected {tok.kind} {tok.value!r}", tok.offset, {EOF})
        return node

    def query(self):
        clauses = []
        while self.peek().kind not in (EOF, RPAREN, COMMA):
            clauses.append(self.clause())
        if not clauses:
            tok = self.peek()
            raise ParseError("empty query", tok.offset,
                             {WORD, QUOTED, LPAREN, MINUS})
        clauses = _merge_bibcodes(clauses)
        return clauses[0] if len(clauses) == 1 else And(tuple(clauses))

    def clause(self):
        negate = False
        if self.peek().kind == MINUS:
            self.next()
            negate = True
        node = self.atom()
        if negate:
            node = Not(node)
        if self.peek().kind == OR:
            self.next()
            right = self.clause()
            left = list(node.children) if isinstance(node, Or) else [node]
            right_children = list(right.children) if isinstance(right, Or) else [right]
            node = Or(tuple(left + right_children))
        return node

    def atom(self):
        tok = self.peek()
        if tok.kind == LPAREN:
            self.next()
            node = self.query()
            self.expect(RPAREN)
            return node
        if tok.kind == QUOTED:
            self.next()
            return Phrase(tok.value)
        if tok.kind == WORD:
            nxt = self.peek(1)
            if nxt.kind == LPAREN:
                if tok.value in OP_NAMES:
                    return self.opcall()
                if tok.value == "topn":
                    return self.topn()
                if tok.value == "docs":
                    return self.docs_call()
                adjacent = nxt.offset == tok.offset + len(tok.value.encode("utf-8"))
                if adjacent and ":" not in tok.value:
                    raise ParseError(f"unknown operator: {tok.value}", tok.offset,
                                     OP_NAMES | {"topn", "docs"})
            if ":" in tok.value:
                name = tok.value.split(":", 1)[0]
                if name.isalpha() and name.islower():
                    return self.field_node()
            self.next()
            return Term(tok.value)
        raise ParseError(f"unexpected {tok.kind} {tok.value!r}", tok.offset,
                         {WORD, QUOTED, LPAREN})

    def opcall(self) -> OpCall:
        name_tok = self.next()
        self.expect(LPAREN)
        kind = name_tok.value
        if kind == "similar" and self.peek().kind == QUOTED and self.peek(1).kind == COMMA:
            raw = self.next().value
            self.next()  # comma
            marker = self.expect(WORD)
            if marker.value.lower() != "input":
                raise ParseError("expected 'input' after raw text", marker.offset, {"input"})
            self.expect(RPAREN)
            return OpCall(kind, raw_text=raw)
        child = self.query()
        self.expect(RPAREN)
        return OpCall(kind, child=child)

    def topn(self) -> TopN:
        self.next()  # topn
        self.expect(LPAREN)
        n_tok = self.expect(WORD)
        if not n_tok.value.isdigit():
            raise ParseError(f"expected integer, found {n_tok.value!r}", n_tok.offset, {"INT"})
        n = int(n_tok.value)
        if not 1 <= n <= 1000:
            raise ParseError(f"topn count out of range [1, 1000]: {n}", n_tok.offset)
        self.expect(COMMA)
        child = self.query()
        sort = SortSpec()
        if self.peek().kind == COMMA:
            self.next()
            sort = self.sortspec()
        self.expect(RPAREN)
        return TopN(n, child, sort)

    def sortspec(self) -> SortSpec:
        key_tok = self.expect(WORD)
        key = key_tok.value.lower()
        if key not in SORT_KEYS:
            raise ParseError(f"unknown sort key: {key}", key_tok.offset, SORT_KEYS)
        direction = "desc"
        if self.peek().kind == WORD and self.peek().value.lower() in ("asc", "desc"):
            direction = self.next().value.lower()
        return SortSpec(key, direction)

    def docs_call(self) -> Docs:
        self.next()  # docs
        self.expect(LPAREN)
        arg = self.expect(WORD)
        name = arg.value
        if name.startswith("library/"):
            name = name[len("library/"):]
        if not name:
            raise ParseError("empty library name", arg.offset)
        self.expect(RPAREN)
        return Docs(name)

    def field_node(self):
        tok = self.next()
        name, value = tok.value.split(":", 1)
        if name in UNSUPPORTED_FIELDS:
            raise UnsupportedFieldError(name, tok.offset)
        if name not in SUPPORTED_FIELDS:
            raise UnknownFieldError(name, tok.offset)
        if not value:
            nxt = self.peek()
            if nxt.kind == QUOTED:
                value = self.next().value
            elif nxt.kind == RANGE and name == "entdate":
                return self.date_range(self.next())
            else:
                raise ParseError(f"missing value for field {name}", nxt.offset,
                                 {QUOTED, WORD})
        if name == "year":
            return self.year_range(value, tok.offset)
        if name == "entdate":
            _validate_date_expr(value, tok.offset)
            return DateRange(value, value)
        if name == "docs":
            lib = value[len("library/"):] if value.startswith("library/") else value
            return Docs(lib)
        anchored = False
        if name == "author" and value.startswith("^"):
            anchored = True
            value = value[1:]
        return Field(name, value, anchored)

    def year_range(self, value: str, offset: int) -> YearRange:
        parts = value.split("-")
        if len(parts) == 1 and parts[0].isdigit():
            year = int(parts[0])
            return YearRange(year, year)
        if len(parts) == 2 and parts[0].isdigit() and parts[1].isdigit():
            lo, hi = int(parts[0]), int(parts[1])
            if lo > hi:
                raise ParseError(f"year range reversed: {value}", offset)
            return YearRange(lo, hi)
        raise ParseError(f"bad year value: {value!r}", offset)

    def date_range(self, tok: _Token) -> DateRange:
        parts = tok.value.split()
        if len(parts) != 3 or parts[1].upper() != "TO":
            raise ParseError(f"bad date range: [{tok.value}] (expected [X TO Y])",
                             tok.offset, {"TO"})
        lo, hi = parts[0], parts[2]
        _validate_date_expr(lo, tok.offset)
        _validate_date_expr(hi, tok.offset)
        return DateRange(lo, hi)


def _validate_date_expr(expr: str, offset: int) -> None:
    import re

    if expr == "*" or expr.upper() == "NOW":
        return
    if re.fullmatch(r"NOW-\d+DAYS", expr.upper()):
        return
    if re.fullmatch(r"\d{4}-\d{2}-\d{2}", expr):
        return
    raise ParseError(f"bad date expression: {expr!r}", offset)


def _merge_bibcodes(clauses: list) -> list:
    """Merge juxtaposed positive bibcode filters into one OR (union)."""
    bibs = [c for c in clauses if isinstance(c, Field) and c.name == "bibcode"]
    if len(bibs) < 2:
        return clauses
    merged = Or(tuple(bibs))
    out: list = []
    placed = False
    for c in clauses:
        if isinstance(c, Field) and c.name == "bibcode":
            if not placed:
                out.append(merged)
                placed = True
        else:
            out.append(c)
    return out


def parse(text: str):
    """Parse a query string into its AST. Raises ParseError subtypes with
    byte offsets on any malformed input."""
    return _Parser(text).parse()


# ----------------------------------------------------------------------
# Canonical printing
# ----------------------------------------------------------------------

_SAFE_VALUE = None


def _value_needs_quotes(value: str) -> bool:
    import re

    global _SAFE_VALUE
    if _SAFE_VALUE is None:
        _SAFE_VALUE = re.compile(r"[0-9A-Za-z._/+-]+\Z")
    return not _SAFE_VALUE.match(value)


def _wrap(node, text: str) -> str:
    if isinstance(node, (And, Or)):
        return f"({text})"
    return text


def to_canonical_string(node) -> str:
    """Deterministic printing; parse(print(parse(s))) == parse(s)."""
    if isinstance(node, Term):
        return node.text
    if isinstance(node, Phrase):
        return f'"{node.text}"'
    if isinstance(node, Field):
        value = ("^" if node.anchored else "") + node.value
        if node.anchored or _value_needs_quotes(value):
            value = f'"{value}"'
        return f"{node.name}:{value}"
    if isinstance(node, YearRange):
        if node.lo == node.hi:
            return f"year:{node.lo}"
        return f"year:{node.lo}-{node.hi}"
    if isinstance(node, DateRange):
        if node.lo == node.hi:
            return f"entdate:{node.lo}"
        return f"entdate:[{node.lo} TO {node.hi}]"
    if isinstance(node, And):
        return " ".join(_wrap(c, to_canonical_string(c)) for c in node.children)
    if isinstance(node, Or):
        return " OR ".join(_wrap(c, to_canonical_string(c)) for c in node.children)
    if isinstance(node, Not):
        return "-" + _wrap(node.child, to_canonical_string(node.child))
    if isinstance(node, OpCall):
        if node.raw_text is not None:
            return f'{node.kind}("{node.raw_text}",input)'
        return f"{node.kind}({to_canonical_string(node.child)})"
    if isinstance(node, TopN):
        return f"topn({node.n},{to_canonical_string(node.child)},{node.sort})"
    if isinstance(node, Docs):
        return f"docs(library/{node.library})"
    raise TypeError(f"not a query node: {node!r}")
