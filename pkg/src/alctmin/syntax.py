"""Concepts, knowledge bases and their text format.

The abstract syntax is the core fragment only: concept names, negation,
conjunction, existential restriction and the indexed typicality operator
``T_i(A)``.  Disjunction, universal restriction, top and bottom are sugar
and are desugared while parsing::

    C | D        ->  !(!C & !D)
    forall r. C  ->  !exists r. !C
    top          ->  !(__top & !__top)
    bot          ->  !top

``Box`` nodes exist only for evaluation; the parser never produces them.

Text format (UTF-8, line oriented, ``#`` starts a comment)::

    operators: 2
    minimize T1: Bird, Penguin
    tbox:
      Penguin <= Bird
      T1(Bird) <= Fly
    abox:
      Penguin(e)
      likes(e, f)

Precedence is ``!`` (and the quantifiers) over ``&`` over ``|``.  A
quantifier body is a unary expression, so ``exists r. A & B`` reads as
``(exists r. A) & B``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from typing import Iterable, Iterator, Union

RESERVED_PREFIX = "__"
TOP_NAME = "__top"


class ParseError(ValueError):
    """Raised on malformed input, with a 1-based line and column."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.message = message
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True, slots=True)
class Name:
    name: str


@dataclass(frozen=True, slots=True)
class Not:
    arg: "Concept"


@dataclass(frozen=True, slots=True)
class And:
    left: "Concept"
    right: "Concept"


@dataclass(frozen=True, slots=True)
class Exists:
    role: str
    arg: "Concept"


@dataclass(frozen=True, slots=True)
class Typical:
    index: int
    arg: "Concept"


@dataclass(frozen=True, slots=True)
class Box:
    index: int
    arg: "Concept"


Concept = Union[Name, Not, And, Exists, Typical, Box]

TOP: Concept = Not(And(Name(TOP_NAME), Not(Name(TOP_NAME))))
BOTTOM: Concept = Not(TOP)


def Or(left: Concept, right: Concept) -> Concept:
    return Not(And(Not(left), Not(right)))


def Forall(role: str, arg: Concept) -> Concept:
    return Not(Exists(role, Not(arg)))


def conjunction(parts: Iterable[Concept]) -> Concept:
    """Left-nested conjunction of ``parts``; the empty conjunction is top."""
    result = None
    for part in parts:
        result = part if result is None else And(result, part)
    return TOP if result is None else result


def subconcepts(c: Concept) -> Iterator[Concept]:
    yield c
    if isinstance(c, (Not, Exists, Typical, Box)):
        yield from subconcepts(c.arg)
    elif isinstance(c, And):
        yield from subconcepts(c.left)
        yield from subconcepts(c.right)


def is_classical(c: Concept) -> bool:
    return not any(isinstance(s, (Typical, Box)) for s in subconcepts(c))


def concept_size(c: Concept) -> int:
    return sum(1 for _ in subconcepts(c))


# ---------------------------------------------------------------------------
# Knowledge bases


@dataclass(frozen=True, slots=True)
class GCI:
    lhs: Concept
    rhs: Concept


@dataclass(frozen=True, slots=True)
class ConceptAssertion:
    concept: Concept
    individual: str


@dataclass(frozen=True, slots=True)
class RoleAssertion:
    role: str
    subject: str
    object: str


Assertion = Union[ConceptAssertion, RoleAssertion]


@dataclass(frozen=True)
class KnowledgeBase:
    """An ALC+T+ knowledge base with ``k`` typicality operators.

    ``minimize[i - 1]`` is the minimization set of ``T_i``; ``None`` means
    "not given", in which case :meth:`minimization_set` falls back to the
    names ``A`` with ``T_i(A)`` occurring in the knowledge base.
    """

    tbox: tuple[GCI, ...] = ()
    abox: tuple[Assertion, ...] = ()
    k: int = 0
    minimize: tuple[frozenset[str] | None, ...] = ()

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("operator count must be non-negative")
        minimize = tuple(self.minimize) + (None,) * (self.k - len(self.minimize))
        if len(minimize) != self.k:
            raise ValueError(
                f"{len(self.minimize)} minimization sets given for {self.k} operators"
            )
        minimize = tuple(None if m is None else frozenset(m) for m in minimize)
        object.__setattr__(self, "tbox", tuple(self.tbox))
        object.__setattr__(self, "abox", tuple(self.abox))
        object.__setattr__(self, "minimize", minimize)

    def minimization_set(self, i: int) -> frozenset[str]:
        if not 1 <= i <= self.k:
            raise ValueError(f"operator index {i} out of range 1..{self.k}")
        given = self.minimize[i - 1]
        if given is not None:
            return given
        return frozenset(a for j, a in compute_signature(self).typicality if j == i)

    def minimization_sets(self) -> tuple[frozenset[str], ...]:
        return tuple(self.minimization_set(i) for i in range(1, self.k + 1))

    def concepts(self) -> Iterator[Concept]:
        for ax in self.tbox:
            yield ax.lhs
            yield ax.rhs
        for a in self.abox:
            if isinstance(a, ConceptAssertion):
                yield a.concept

    def individuals(self) -> tuple[str, ...]:
        seen: dict[str, None] = {}
        for a in self.abox:
            if isinstance(a, ConceptAssertion):
                seen[a.individual] = None
            else:
                seen[a.subject] = None
                seen[a.object] = None
        return tuple(sorted(seen))

    def extend(
        self,
        tbox: Iterable[GCI] = (),
        abox: Iterable[Assertion] = (),
        k: int | None = None,
        minimize: Iterable[frozenset[str] | None] | None = None,
    ) -> "KnowledgeBase":
        return replace(
            self,
            tbox=self.tbox + tuple(tbox),
            abox=self.abox + tuple(abox),
            k=self.k if k is None else k,
            minimize=self.minimize if minimize is None else tuple(minimize),
        )


def kb_size(kb: KnowledgeBase) -> int:
    """Symbol count: concept nodes of every axiom plus minimization entries."""
    size = 0
    for ax in kb.tbox:
        size += concept_size(ax.lhs) + concept_size(ax.rhs)
    for a in kb.abox:
        size += concept_size(a.concept) + 1 if isinstance(a, ConceptAssertion) else 3
    return size + sum(len(m) for m in kb.minimization_sets())


# ---------------------------------------------------------------------------
# Signatures


@dataclass(frozen=True)
class Signature:
    concepts: frozenset[str] = frozenset()
    roles: frozenset[str] = frozenset()
    typicality: frozenset[tuple[int, str]] = frozenset()

    def alc_reduct(self) -> "Signature":
        return Signature(self.concepts, self.roles)

    def __or__(self, other: "Signature") -> "Signature":
        return Signature(
            self.concepts | other.concepts,
            self.roles | other.roles,
            self.typicality | other.typicality,
        )

    def __le__(self, other: "Signature") -> bool:
        return (
            self.concepts <= other.concepts
            and self.roles <= other.roles
            and self.typicality <= other.typicality
        )


def _concept_signature(c: Concept) -> Signature:
    concepts, roles, atoms = set(), set(), set()
    for s in subconcepts(c):
        if isinstance(s, Name):
            if s.name != TOP_NAME:
                concepts.add(s.name)
        elif isinstance(s, Exists):
            roles.add(s.role)
        elif isinstance(s, Typical) and isinstance(s.arg, Name):
            atoms.add((s.index, s.arg.name))
    return Signature(frozenset(concepts), frozenset(roles), frozenset(atoms))


def compute_signature(*items: KnowledgeBase | Concept) -> Signature:
    """``sig(E_1, ..., E_m)``: names occurring in the given KBs and concepts.

    The placeholder used to spell ``top`` is left out; its extension never
    affects the value of the tautology it sits in.
    """
    sig = Signature()
    for item in items:
        if isinstance(item, KnowledgeBase):
            for c in item.concepts():
                sig = sig | _concept_signature(c)
            roles = {a.role for a in item.abox if isinstance(a, RoleAssertion)}
            sig = sig | Signature(roles=frozenset(roles))
        else:
            sig = sig | _concept_signature(item)
    return sig


# ---------------------------------------------------------------------------
# Rendering

_PREC_OR, _PREC_AND, _PREC_UNARY = 0, 1, 2


def _or_parts(c: Concept):
    if isinstance(c, Not) and isinstance(c.arg, And):
        left, right = c.arg.left, c.arg.right
        if isinstance(left, Not) and isinstance(right, Not):
            return left.arg, right.arg
    return None


def render_concept(c: Concept, prec: int = _PREC_OR) -> str:
    """Render ``c`` so that :func:`parse_concept` gives back the same AST."""
    if c == TOP:
        return "top"
    if c == BOTTOM:
        return "bot"
    if isinstance(c, Name):
        return c.name
    if isinstance(c, Typical):
        return f"T{c.index}({render_concept(c.arg)})"
    if isinstance(c, Box):
        return f"box{c.index}({render_concept(c.arg)})"
    parts = _or_parts(c)
    if parts is not None:
        text = f"{render_concept(parts[0], _PREC_OR)} | {render_concept(parts[1], _PREC_AND)}"
        return text if prec <= _PREC_OR else f"({text})"
    if isinstance(c, And):
        text = f"{render_concept(c.left, _PREC_AND)} & {render_concept(c.right, _PREC_UNARY)}"
        return text if prec <= _PREC_AND else f"({text})"
    if isinstance(c, Not):
        if isinstance(c.arg, Exists) and isinstance(c.arg.arg, Not):
            return f"forall {c.arg.role}. {render_concept(c.arg.arg.arg, _PREC_UNARY)}"
        return f"!{render_concept(c.arg, _PREC_UNARY)}"
    if isinstance(c, Exists):
        return f"exists {c.role}. {render_concept(c.arg, _PREC_UNARY)}"
    raise TypeError(f"not a concept: {c!r}")


def render_assertion(a: Assertion) -> str:
    if isinstance(a, RoleAssertion):
        return f"{a.role}({a.subject}, {a.object})"
    body = render_concept(a.concept)
    if not isinstance(a.concept, (Name, Typical)) and body not in ("top", "bot"):
        body = f"({body})"
    return f"{body}({a.individual})"


def render_blocks(kb_tbox, kb_abox) -> list[str]:
    lines = ["tbox:"]
    lines += [f"  {render_concept(ax.lhs)} <= {render_concept(ax.rhs)}" for ax in kb_tbox]
    lines.append("abox:")
    lines += [f"  {render_assertion(a)}" for a in kb_abox]
    return lines


def render_kb(kb: KnowledgeBase) -> str:
    lines = [f"operators: {kb.k}"]
    for i, m in enumerate(kb.minimize, start=1):
        if m is not None:
            lines.append(f"minimize T{i}: {', '.join(sorted(m))}")
    lines += render_blocks(kb.tbox, kb.abox)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Parsing

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<sym><=|==|[!&|().,¬⊓⊔∃∀⊤⊥]))"
)
_UNICODE = {"¬": "!", "⊓": "&", "⊔": "|", "∃": "exists", "∀": "forall", "⊤": "top", "⊥": "bot"}
_TYPICAL_RE = re.compile(r"T([0-9]+)")


@dataclass
class _Tok:
    kind: str
    text: str
    col: int


def _tokenize(text: str, line: int, offset: int) -> list[_Tok]:
    toks, pos = [], 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, offset + pos + 1)
        if m.group("ident"):
            toks.append(_Tok("ident", m.group("ident"), offset + m.start("ident") + 1))
        else:
            sym = m.group("sym")
            sym = _UNICODE.get(sym, sym)
            kind = "ident" if sym.isalpha() else sym
            toks.append(_Tok(kind, sym, offset + m.start("sym") + 1))
        pos = m.end()
    return toks


class _ConceptParser:
    def __init__(self, text: str, line: int, offset: int, k: int | None, allow_reserved: bool):
        self.toks = _tokenize(text, line, offset)
        self.pos = 0
        self.line = line
        self.end_col = offset + len(text) + 1
        self.k = k
        self.allow_reserved = allow_reserved

    def error(self, msg: str, tok: _Tok | None = None):
        col = tok.col if tok else self.end_col
        raise ParseError(msg, self.line, col)

    def peek(self) -> _Tok | None:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def next(self) -> _Tok:
        tok = self.peek()
        if tok is None:
            self.error("unexpected end of input")
        self.pos += 1
        return tok

    def expect(self, kind: str) -> _Tok:
        tok = self.peek()
        if tok is None or tok.kind != kind:
            self.error(f"expected {kind!r}", tok)
        self.pos += 1
        return tok

    def name(self, tok: _Tok) -> str:
        if tok.kind != "ident" or tok.text in ("exists", "forall", "top", "bot"):
            self.error(f"expected a name, got {tok.text!r}", tok)
        if tok.text.startswith(RESERVED_PREFIX) and not self.allow_reserved:
            self.error(f"names starting with {RESERVED_PREFIX!r} are reserved", tok)
        return tok.text

    def parse_all(self) -> Concept:
        c = self.parse_or()
        tok = self.peek()
        if tok is not None:
            self.error(f"unexpected {tok.text!r}", tok)
        return c

    def parse_or(self) -> Concept:
        c = self.parse_and()
        while (tok := self.peek()) is not None and tok.kind == "|":
            self.pos += 1
            c = Or(c, self.parse_and())
        return c

    def parse_and(self) -> Concept:
        c = self.parse_unary()
        while (tok := self.peek()) is not None and tok.kind == "&":
            self.pos += 1
            c = And(c, self.parse_unary())
        return c

    def parse_unary(self) -> Concept:
        tok = self.next()
        if tok.kind == "!":
            return Not(self.parse_unary())
        if tok.kind == "(":
            c = self.parse_or()
            self.expect(")")
            return c
        if tok.kind != "ident":
            self.error(f"unexpected {tok.text!r}", tok)
        if tok.text in ("exists", "forall"):
            role = self.name(self.next())
            self.expect(".")
            body = self.parse_unary()
            return Exists(role, body) if tok.text == "exists" else Forall(role, body)
        if tok.text == "top":
            return TOP
        if tok.text == "bot":
            return BOTTOM
        m = _TYPICAL_RE.fullmatch(tok.text)
        after = self.peek()
        if m and after is not None and after.kind == "(":
            index = int(m.group(1))
            if index < 1:
                self.error("typicality operators are numbered from 1", tok)
            if self.k is not None and index > self.k:
                self.error(f"operator T{index} not declared (operators: {self.k})", tok)
            self.pos += 1
            arg = self.parse_or()
            self.expect(")")
            return Typical(index, arg)
        return Name(self.name(tok))


def parse_concept(
    text: str, k: int | None = None, allow_reserved: bool = False, *, line: int = 1, offset: int = 0
) -> Concept:
    """Parse a single (extended) concept."""
    return _ConceptParser(text, line, offset, k, allow_reserved).parse_all()


_ROLE_ASSERTION_RE = re.compile(r"^(\w+)\s*\(\s*(\w+)\s*,\s*(\w+)\s*\)\s*$")
_CONCEPT_ASSERTION_RE = re.compile(r"^(.*)\(\s*(\w+)\s*\)\s*$")
_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


def _check_ident(name: str, line: int, col: int, allow_reserved: bool) -> str:
    if not _IDENT_RE.fullmatch(name):
        raise ParseError(f"invalid name {name!r}", line, col)
    if name.startswith(RESERVED_PREFIX) and not allow_reserved:
        raise ParseError(f"names starting with {RESERVED_PREFIX!r} are reserved", line, col)
    return name


def parse_assertion(
    text: str, k: int | None = None, allow_reserved: bool = False, *, line: int = 1, offset: int = 0
) -> Assertion:
    """Parse ``C(a)`` or ``r(a, b)``."""
    m = _ROLE_ASSERTION_RE.match(text)
    if m:
        role, a, b = m.groups()
        for g in (1, 2, 3):
            _check_ident(m.group(g), line, offset + m.start(g) + 1, allow_reserved)
        return RoleAssertion(role, a, b)
    m = _CONCEPT_ASSERTION_RE.match(text)
    if not m or not m.group(1).strip():
        raise ParseError("expected an assertion C(a) or r(a, b)", line, offset + 1)
    ind = _check_ident(m.group(2), line, offset + m.start(2) + 1, allow_reserved)
    concept = parse_concept(m.group(1), k, allow_reserved, line=line, offset=offset)
    return ConceptAssertion(concept, ind)


def parse_gcis(
    text: str, k: int | None = None, allow_reserved: bool = False, *, line: int = 1, offset: int = 0
) -> list[GCI]:
    """Parse ``C <= D`` (one GCI) or ``C == D`` (two GCIs)."""
    m = re.search(r"<=|⊑|==|≡", text)
    if not m:
        raise ParseError("expected '<=' in subsumption", line, offset + 1)
    lhs = parse_concept(text[: m.start()], k, allow_reserved, line=line, offset=offset)
    rhs = parse_concept(text[m.end():], k, allow_reserved, line=line, offset=offset + m.end())
    if m.group() in ("==", "≡"):
        return [GCI(lhs, rhs), GCI(rhs, lhs)]
    return [GCI(lhs, rhs)]


@dataclass
class _Document:
    headers: list[tuple[str, str, int, int]] = field(default_factory=list)
    tbox_lines: list[tuple[str, int, int]] = field(default_factory=list)
    abox_lines: list[tuple[str, int, int]] = field(default_factory=list)


_HEADER_RE = re.compile(r"^([A-Za-z][A-Za-z0-9 ]*?)\s*:(.*)$")


def split_document(text: str) -> _Document:
    doc = _Document()
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        stripped = body.strip()
        if not stripped:
            continue
        offset = len(body) - len(body.lstrip())
        if stripped in ("tbox:", "abox:"):
            section = stripped[:-1]
            continue
        if section is None:
            m = _HEADER_RE.match(stripped)
            if not m:
                raise ParseError("expected a header line or a 'tbox:'/'abox:' block", lineno, offset + 1)
            value_offset = offset + m.start(2)
            doc.headers.append((m.group(1).strip(), m.group(2), lineno, value_offset))
        elif section == "tbox":
            doc.tbox_lines.append((stripped, lineno, offset))
        else:
            doc.abox_lines.append((stripped, lineno, offset))
    return doc


def parse_name_list(value: str, lineno: int, offset: int, allow_reserved: bool) -> frozenset[str]:
    names = set()
    pos = 0
    for part in value.split(","):
        stripped = part.strip()
        col = offset + pos + (len(part) - len(part.lstrip())) + 1
        pos += len(part) + 1
        if not stripped:
            continue
        names.add(_check_ident(stripped, lineno, col, allow_reserved))
    return frozenset(names)


_MINIMIZE_RE = re.compile(r"^minimize T([0-9]+)$")


def parse_kb(text: str, allow_reserved: bool = False) -> KnowledgeBase:
    """Parse the KB text format into a :class:`KnowledgeBase`.

    ``operators: k`` may be omitted, in which case ``k`` is the largest
    operator index used anywhere in the file.
    """
    doc = split_document(text)
    k = None
    minimize: dict[int, frozenset[str]] = {}
    pending_minimize = []
    for key, value, lineno, offset in doc.headers:
        if key == "operators":
            if k is not None:
                raise ParseError("duplicate 'operators' declaration", lineno, 1)
            if not value.strip().isdigit():
                raise ParseError("operator count must be a non-negative integer", lineno, offset + 1)
            k = int(value.strip())
        elif m := _MINIMIZE_RE.match(key):
            i = int(m.group(1))
            if i in minimize:
                raise ParseError(f"duplicate minimization set for T{i}", lineno, 1)
            if i < 1:
                raise ParseError("typicality operators are numbered from 1", lineno, 1)
            minimize[i] = parse_name_list(value, lineno, offset, allow_reserved)
            pending_minimize.append((i, lineno))
        else:
            raise ParseError(f"unknown header {key!r}", lineno, 1)
    tbox: list[GCI] = []
    for line_text, lineno, offset in doc.tbox_lines:
        tbox.extend(parse_gcis(line_text, k, allow_reserved, line=lineno, offset=offset))
    abox = [
        parse_assertion(line_text, k, allow_reserved, line=lineno, offset=offset)
        for line_text, lineno, offset in doc.abox_lines
    ]
    used = max(
        [s.index for ax in tbox for c in (ax.lhs, ax.rhs) for s in subconcepts(c) if isinstance(s, Typical)]
        + [s.index for a in abox if isinstance(a, ConceptAssertion) for s in subconcepts(a.concept)
           if isinstance(s, Typical)]
        + [0],
    )
    if k is None:
        k = max([used] + list(minimize))
    for i, lineno in pending_minimize:
        if i > k:
            raise ParseError(f"minimize T{i}: operator not declared (operators: {k})", lineno, 1)
    return KnowledgeBase(tuple(tbox), tuple(abox), k, tuple(minimize.get(i) for i in range(1, k + 1)))


# ---------------------------------------------------------------------------
# Validation


@dataclass(frozen=True)
class Issue:
    kind: str
    message: str
    severity: str = "error"


@dataclass
class ValidationReport:
    issues: list[Issue] = field(default_factory=list)

    @property
    def errors(self) -> list[Issue]:
        return [i for i in self.issues if i.severity == "error"]

    @property
    def warnings(self) -> list[Issue]:
        return [i for i in self.issues if i.severity == "warning"]

    @property
    def ok(self) -> bool:
        return not self.errors

    def kinds(self) -> set[str]:
        return {i.kind for i in self.issues}

    def __bool__(self) -> bool:
        return bool(self.issues)


def _under_role(c: Concept, inside: bool = False) -> bool:
    if isinstance(c, Typical):
        return inside
    if isinstance(c, (Not, Box)):
        return _under_role(c.arg, inside)
    if isinstance(c, And):
        return _under_role(c.left, inside) or _under_role(c.right, inside)
    if isinstance(c, Exists):
        return _under_role(c.arg, True)
    return False


def _concept_issues(c: Concept, where: str, k: int) -> list[Issue]:
    issues = []
    for s in subconcepts(c):
        if isinstance(s, Box):
            issues.append(Issue("box", f"{where}: box modality is not surface syntax"))
        if isinstance(s, (Typical, Box)) and not 1 <= s.index <= k:
            issues.append(Issue("index", f"{where}: operator index {s.index} outside 1..{k}"))
        if isinstance(s, Typical):
            if not isinstance(s.arg, Name):
                issues.append(Issue("typical-arg", f"{where}: typicality applied to a complex concept"))
            elif s.arg == Name(TOP_NAME):
                issues.append(Issue("typical-arg", f"{where}: typicality applied to a reserved name"))
            if not is_classical(s.arg):
                issues.append(Issue("typical-nested", f"{where}: typicality argument is not classical"))
    if _under_role(c):
        issues.append(Issue("typical-under-role", f"{where}: typicality under a role"))
    return issues


def validate_kb(kb: KnowledgeBase) -> ValidationReport:
    """Report every shape violation of ``kb``; never raises."""
    report = ValidationReport()
    for n, ax in enumerate(kb.tbox, start=1):
        where = f"GCI {n} ({render_concept(ax.lhs)} <= {render_concept(ax.rhs)})"
        report.issues += _concept_issues(ax.lhs, where, kb.k)
        report.issues += _concept_issues(ax.rhs, where, kb.k)
        if not is_classical(ax.rhs):
            report.issues.append(Issue("typical-rhs", f"{where}: typicality on rhs"))
        if not is_classical(ax.lhs) and not isinstance(ax.lhs, Typical):
            report.issues.append(
                Issue("extended-lhs", f"{where}: extended lhs must be a single T_i(A)")
            )
    for n, a in enumerate(kb.abox, start=1):
        if isinstance(a, ConceptAssertion):
            report.issues += _concept_issues(a.concept, f"assertion {n}", kb.k)
    occurring = compute_signature(kb).concepts
    for i, m in enumerate(kb.minimize, start=1):
        for name in sorted((m or frozenset()) - occurring):
            report.issues.append(
                Issue(
                    "minimize-absent",
                    f"minimize T{i}: {name} does not occur in the knowledge base",
                    "warning",
                )
            )
    return report


# ---------------------------------------------------------------------------
# Normalization


def used_names(kb: KnowledgeBase) -> set[str]:
    sig = compute_signature(kb)
    names = set(sig.concepts) | set(sig.roles) | set(kb.individuals())
    for m in kb.minimize:
        names |= set(m or ())
    return names


def fresh_name(base: str, taken: set[str]) -> str:
    """Reserved-prefix name built from ``base`` that is not in ``taken``."""
    candidate = f"{RESERVED_PREFIX}{base}"
    n = 1
    while candidate in taken:
        n += 1
        candidate = f"{RESERVED_PREFIX}{base}_{n}"
    taken.add(candidate)
    return candidate


def normalize_typicality_args(kb: KnowledgeBase) -> KnowledgeBase:
    """Rewrite every ``T_i(C)`` with complex ``C`` into ``T_i(A_C)``.

    Each distinct complex ``C`` gets one fresh name ``A_C`` together with
    ``A_C <= C`` and ``C <= A_C``.
    """
    taken = used_names(kb)
    fresh: dict[Concept, str] = {}

    def rewrite(c: Concept) -> Concept:
        if isinstance(c, Typical):
            if isinstance(c.arg, Name):
                return c
            if not is_classical(c.arg):
                raise ValueError("typicality argument must be a classical concept")
            if c.arg not in fresh:
                fresh[c.arg] = fresh_name(f"C{len(fresh)}", taken)
            return Typical(c.index, Name(fresh[c.arg]))
        if isinstance(c, Not):
            return Not(rewrite(c.arg))
        if isinstance(c, Box):
            return Box(c.index, rewrite(c.arg))
        if isinstance(c, And):
            return And(rewrite(c.left), rewrite(c.right))
        if isinstance(c, Exists):
            return Exists(c.role, rewrite(c.arg))
        return c

    tbox = [GCI(rewrite(ax.lhs), rewrite(ax.rhs)) for ax in kb.tbox]
    abox = [
        ConceptAssertion(rewrite(a.concept), a.individual) if isinstance(a, ConceptAssertion) else a
        for a in kb.abox
    ]
    if not fresh:
        return kb
    for c, name in fresh.items():
        tbox += [GCI(Name(name), c), GCI(c, Name(name))]
    return replace(kb, tbox=tuple(tbox), abox=tuple(abox))
