"""Manchester-syntax reader and writer for the supported fragment.

The surface syntax is frame based:

    Prefix: : <http://example.org/ontology#>

    Class: Professor
        SubClassOf: teaches some Course
        DisjointWith: Student

    ObjectProperty: teaches
        Domain: Professor
        Range: Course

    Individual: alice
        Types: Student
        Facts: enrolledIn aiCourse

Comments run from ``#`` to the end of the line. ``Thing`` and ``Nothing``
(also ``owl:Thing`` / ``owl:Nothing``) denote the top and bottom class.
Unqualified names resolve against the default prefix; any other prefix must
be declared or parsing fails. Files use the ``.omn`` extension, UTF-8, and
are newline-agnostic.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .model import (
    BOTTOM,
    DEFAULT_NAMESPACE,
    TOP,
    And,
    AtMost,
    Axiom,
    Bottom,
    ClassAssertion,
    ClassExpression,
    Declaration,
    DisjointClasses,
    Domain,
    EntityKind,
    EntityName,
    EquivalentClasses,
    InverseProperties,
    Named,
    Not,
    Only,
    Ontology,
    Or,
    PropertyAssertion,
    Range,
    Role,
    Some,
    SubClassOf,
    SubPropertyOf,
    Top,
)

FRAME_KEYWORDS = {"Prefix:", "Class:", "ObjectProperty:", "Individual:"}
CLASS_CLAUSES = {"SubClassOf:", "EquivalentTo:", "DisjointWith:"}
PROPERTY_CLAUSES = {"Domain:", "Range:", "SubPropertyOf:", "InverseOf:"}
INDIVIDUAL_CLAUSES = {"Types:", "Facts:"}
CLAUSE_KEYWORDS = CLASS_CLAUSES | PROPERTY_CLAUSES | INDIVIDUAL_CLAUSES
RESERVED_WORDS = {"some", "only", "and", "or", "not", "max", "inverse", "Thing", "Nothing"}


class ParseError(Exception):
    """Parse failure with a 1-based source position.

    The position points at the offending token (or at end of input), never
    before it, and is reproducible for identical input.
    """

    def __init__(self, line: int, column: int, expected: str, found: str):
        self.line = line
        self.column = column
        self.expected = expected
        self.found = found
        super().__init__(f"{line}:{column}: expected {expected}, found {found!r}")


@dataclass
class Frame:
    kind: EntityKind
    subject: EntityName
    clauses: list[tuple[str, object]] = field(default_factory=list)


@dataclass(frozen=True)
class _Token:
    kind: str  # 'framekw' | 'clausekw' | 'name' | 'pname' | 'colon' | 'iri' | 'int' | 'lparen' | 'rparen' | 'comma' | 'eof'
    text: str
    line: int
    column: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<iri><[^<>\s]*>)
  | (?P<pname>[A-Za-z_][\w.\-]*:[A-Za-z_][\w.\-]*)
  | (?P<kw>[A-Za-z_][\w.\-]*:)
  | (?P<name>[A-Za-z_][\w.\-]*)
  | (?P<int>\d+)
  | (?P<lparen>\()
  | (?P<rparen>\))
  | (?P<comma>,)
  | (?P<colon>:)
    """,
    re.VERBOSE,
)


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    line = 1
    col = 1
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(line, col, "a token", text[pos])
        kind = m.lastgroup or ""
        lexeme = m.group()
        if kind not in ("ws", "comment"):
            if kind == "kw":
                tok_kind = (
                    "framekw"
                    if lexeme in FRAME_KEYWORDS
                    else "clausekw"
                    if lexeme in CLAUSE_KEYWORDS
                    else "kw"
                )
                tokens.append(_Token(tok_kind, lexeme, line, col))
            else:
                tokens.append(_Token(kind, lexeme, line, col))
        newlines = lexeme.count("\n")
        if newlines:
            line += newlines
            col = len(lexeme) - lexeme.rfind("\n")
        else:
            col += len(lexeme)
        pos = m.end()
    tokens.append(_Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, text: str, ontology_id: str):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.ontology_id = ontology_id
        self.prefixes: dict[str, str] = {}
        self.default_prefix: str | None = None
        self.frames: list[Frame] = []

    # -- token plumbing ----------------------------------------------------

    def peek(self, ahead: int = 0) -> _Token:
        idx = min(self.pos + ahead, len(self.tokens) - 1)
        return self.tokens[idx]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def fail(self, expected: str, tok: _Token | None = None) -> ParseError:
        tok = tok or self.peek()
        found = tok.text if tok.kind != "eof" else "end of input"
        return ParseError(tok.line, tok.column, expected, found)

    def expect(self, kind: str, expected: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise self.fail(expected)
        return self.advance()

    # -- names -------------------------------------------------------------

    def resolve_name(self, kind: EntityKind) -> EntityName:
        tok = self.peek()
        if tok.kind == "iri":
            self.advance()
            iri = tok.text[1:-1]
            if not iri:
                raise self.fail("a non-empty IRI", tok)
            from .model import split_iri

            _, local = split_iri(iri)
            if not local:
                raise self.fail("an IRI with a local part", tok)
            return EntityName(kind, iri, local)
        if tok.kind == "pname":
            self.advance()
            prefix, local = tok.text.split(":", 1)
            if prefix == "owl":
                raise self.fail("Thing or Nothing after the owl prefix", tok)
            ns = self.prefixes.get(prefix)
            if ns is None:
                raise self.fail(f"a declared prefix (unknown prefix {prefix!r})", tok)
            return EntityName(kind, ns + local, local)
        if tok.kind == "name":
            if tok.text in RESERVED_WORDS:
                raise self.fail("an entity name (not a reserved word)", tok)
            self.advance()
            ns = self.default_prefix if self.default_prefix is not None else DEFAULT_NAMESPACE
            return EntityName(kind, ns + tok.text, tok.text)
        raise self.fail("an entity name")

    # -- expressions -------------------------------------------------------

    def parse_expression(self) -> ClassExpression:
        return self.parse_or()

    def parse_or(self) -> ClassExpression:
        parts = [self.parse_and()]
        while self.peek().kind == "name" and self.peek().text == "or":
            self.advance()
            parts.append(self.parse_and())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def parse_and(self) -> ClassExpression:
        parts = [self.parse_unary()]
        while self.peek().kind == "name" and self.peek().text == "and":
            self.advance()
            parts.append(self.parse_unary())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def parse_unary(self) -> ClassExpression:
        tok = self.peek()
        if tok.kind == "name" and tok.text == "not":
            self.advance()
            return Not(self.parse_unary())
        return self.parse_primary()

    def _starts_primary(self) -> bool:
        tok = self.peek()
        if tok.kind in ("lparen", "iri", "pname"):
            return True
        if tok.kind == "name":
            return tok.text not in ("and", "or", "some", "only", "max")
        return False

    def parse_primary(self) -> ClassExpression:
        tok = self.peek()
        if tok.kind == "lparen":
            self.advance()
            inner = self.parse_expression()
            if self.peek().kind != "rparen":
                raise self.fail("a closing parenthesis")
            self.advance()
            return inner
        if tok.kind == "name" and tok.text == "inverse":
            role = self.parse_role()
            return self.parse_restriction(role)
        if tok.kind == "name" and tok.text in ("Thing", "Nothing"):
            self.advance()
            return TOP if tok.text == "Thing" else BOTTOM
        if tok.kind == "pname" and tok.text in ("owl:Thing", "owl:Nothing"):
            self.advance()
            return TOP if tok.text == "owl:Thing" else BOTTOM
        if tok.kind in ("name", "pname", "iri"):
            nxt = self.peek(1)
            if nxt.kind == "name" and nxt.text in ("some", "only", "max"):
                role = self.parse_role()
                return self.parse_restriction(role)
            return Named(self.resolve_name(EntityKind.CLASS))
        raise self.fail("a class expression")

    def parse_role(self) -> Role:
        tok = self.peek()
        inverse = False
        if tok.kind == "name" and tok.text == "inverse":
            self.advance()
            inverse = True
        name = self.resolve_name(EntityKind.OBJECT_PROPERTY)
        return Role(name, inverse)

    def parse_restriction(self, role: Role) -> ClassExpression:
        tok = self.peek()
        if tok.kind != "name" or tok.text not in ("some", "only", "max"):
            raise self.fail("some, only or max after a property")
        self.advance()
        if tok.text == "some":
            return Some(role, self.parse_unary())
        if tok.text == "only":
            return Only(role, self.parse_unary())
        count_tok = self.expect("int", "a cardinality after max")
        filler = self.parse_unary() if self._starts_primary() else TOP
        return AtMost(int(count_tok.text), role, filler)

    # -- frames ------------------------------------------------------------

    def parse_document(self) -> Ontology:
        while self.peek().kind != "eof":
            tok = self.peek()
            if tok.kind != "framekw":
                raise self.fail("a frame keyword (Prefix:, Class:, ObjectProperty:, Individual:)")
            if tok.text == "Prefix:":
                self.parse_prefix()
            else:
                self.parse_frame(tok.text)
        return Ontology(self.ontology_id, tuple(self.build_axioms()))

    def parse_prefix(self) -> None:
        self.advance()
        tok = self.peek()
        if tok.kind == "colon":
            self.advance()
            label = ""
        elif tok.kind == "kw":
            self.advance()
            label = tok.text[:-1]
        else:
            raise self.fail("a prefix label ending in a colon")
        iri_tok = self.expect("iri", "an IRI in angle brackets")
        ns = iri_tok.text[1:-1]
        if label == "":
            self.default_prefix = ns
        else:
            self.prefixes[label] = ns

    def parse_frame(self, keyword: str) -> None:
        self.advance()
        kind = {
            "Class:": EntityKind.CLASS,
            "ObjectProperty:": EntityKind.OBJECT_PROPERTY,
            "Individual:": EntityKind.INDIVIDUAL,
        }[keyword]
        subject = self.resolve_name(kind)
        frame = Frame(kind, subject)
        allowed = {
            EntityKind.CLASS: CLASS_CLAUSES,
            EntityKind.OBJECT_PROPERTY: PROPERTY_CLAUSES,
            EntityKind.INDIVIDUAL: INDIVIDUAL_CLAUSES,
        }[kind]
        while self.peek().kind == "clausekw":
            clause_tok = self.peek()
            if clause_tok.text not in allowed:
                raise self.fail(
                    f"one of {sorted(allowed)} inside a {kind.value} frame", clause_tok
                )
            self.advance()
            self.parse_clause(frame, clause_tok.text)
        nxt = self.peek()
        if nxt.kind == "kw":
            raise self.fail("a supported frame or clause keyword", nxt)
        self.frames.append(frame)

    def parse_clause(self, frame: Frame, keyword: str) -> None:
        while True:
            if keyword in ("SubClassOf:", "EquivalentTo:", "Types:"):
                payload: object = self.parse_expression()
            elif keyword == "DisjointWith:":
                payload = self.resolve_name(EntityKind.CLASS)
            elif keyword in ("Domain:", "Range:"):
                payload = self.resolve_name(EntityKind.CLASS)
            elif keyword in ("SubPropertyOf:", "InverseOf:"):
                payload = self.resolve_name(EntityKind.OBJECT_PROPERTY)
            elif keyword == "Facts:":
                prop = self.resolve_name(EntityKind.OBJECT_PROPERTY)
                target = self.resolve_name(EntityKind.INDIVIDUAL)
                payload = (prop, target)
            else:  # pragma: no cover - keyword set is closed
                raise self.fail("a supported clause keyword")
            frame.clauses.append((keyword, payload))
            if self.peek().kind == "comma":
                self.advance()
                continue
            break

    # -- frame to axiom mapping ---------------------------------------------

    def build_axioms(self) -> list[Axiom]:
        axioms: list[Axiom] = []
        declared: set[EntityName] = set()
        for frame in self.frames:
            if frame.subject not in declared:
                declared.add(frame.subject)
                axioms.append(Declaration(frame.subject))
            s = frame.subject
            for keyword, payload in frame.clauses:
                if keyword == "SubClassOf:":
                    axioms.append(SubClassOf(Named(s), payload))  # type: ignore[arg-type]
                elif keyword == "EquivalentTo:":
                    axioms.append(EquivalentClasses(s, payload))  # type: ignore[arg-type]
                elif keyword == "DisjointWith:":
                    axioms.append(DisjointClasses(s, payload))  # type: ignore[arg-type]
                elif keyword == "Domain:":
                    axioms.append(Domain(s, payload))  # type: ignore[arg-type]
                elif keyword == "Range:":
                    axioms.append(Range(s, payload))  # type: ignore[arg-type]
                elif keyword == "SubPropertyOf:":
                    axioms.append(SubPropertyOf(s, payload))  # type: ignore[arg-type]
                elif keyword == "InverseOf:":
                    axioms.append(InverseProperties(s, payload))  # type: ignore[arg-type]
                elif keyword == "Types:":
                    axioms.append(ClassAssertion(s, payload))  # type: ignore[arg-type]
                elif keyword == "Facts:":
                    prop, target = payload  # type: ignore[misc]
                    axioms.append(PropertyAssertion(prop, s, target))
        return axioms


def parse(text: str, *, ontology_id: str = "ontology") -> Ontology:
    """Parse a Manchester document into an Ontology.

    Raises ParseError on any malformed input; never silently drops input.
    """
    try:
        return _Parser(text, ontology_id).parse_document()
    except ParseError:
        raise
    except ValueError as exc:
        # invariant violations from model constructors (e.g. DisjointWith on
        # the frame subject itself) surface as parse errors at end of input
        tail = _tokenize(text)[-1]
        raise ParseError(tail.line, tail.column, "a well-formed ontology", str(exc)) from exc


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def _namespace_of(entity: EntityName) -> str:
    iri = entity.iri
    if iri.endswith(entity.local):
        return iri[: len(iri) - len(entity.local)]
    return iri


def _choose_prefixes(names: list[EntityName]) -> tuple[str, dict[str, str]]:
    counts: dict[str, int] = {}
    for n in names:
        ns = _namespace_of(n)
        counts[ns] = counts.get(ns, 0) + 1
    if not counts:
        return DEFAULT_NAMESPACE, {}
    default = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[0][0]
    others = sorted(ns for ns in counts if ns != default)
    return default, {ns: f"p{i + 1}" for i, ns in enumerate(others)}


class _Writer:
    def __init__(self, ontology: Ontology):
        self.ontology = ontology
        names = sorted(ontology.signature, key=lambda n: n.sort_key)
        self.default_ns, self.prefix_of = _choose_prefixes(names)

    def name(self, entity: EntityName) -> str:
        ns = _namespace_of(entity)
        if ns == self.default_ns:
            return entity.local
        return f"{self.prefix_of[ns]}:{entity.local}"

    def role(self, role: Role) -> str:
        return ("inverse " + self.name(role.name)) if role.inverse else self.name(role.name)

    def atom(self, expr: ClassExpression) -> str:
        """Render as a primary, parenthesizing anything non-atomic."""
        if isinstance(expr, Named):
            return self.name(expr.name)
        if isinstance(expr, Top):
            return "Thing"
        if isinstance(expr, Bottom):
            return "Nothing"
        return "(" + self.expr(expr) + ")"

    def expr(self, expr: ClassExpression, level: int = 0) -> str:
        # level 0 allows 'or', level 1 allows 'and', level 2 is unary
        if isinstance(expr, Or):
            text = " or ".join(self.expr(a, 1) for a in expr.args)
            return f"({text})" if level > 0 else text
        if isinstance(expr, And):
            text = " and ".join(self.expr(a, 2) for a in expr.args)
            return f"({text})" if level > 1 else text
        if isinstance(expr, Not):
            return "not " + self.atom(expr.expr)
        if isinstance(expr, Some):
            return f"{self.role(expr.role)} some {self.atom(expr.filler)}"
        if isinstance(expr, Only):
            return f"{self.role(expr.role)} only {self.atom(expr.filler)}"
        if isinstance(expr, AtMost):
            return f"{self.role(expr.role)} max {expr.n} {self.atom(expr.filler)}"
        return self.atom(expr)

    def write(self) -> str:
        lines = [f"Prefix: : <{self.default_ns}>"]
        for ns, label in sorted(self.prefix_of.items(), key=lambda kv: kv[1]):
            lines.append(f"Prefix: {label}: <{ns}>")

        frame_kw = {
            EntityKind.CLASS: "Class:",
            EntityKind.OBJECT_PROPERTY: "ObjectProperty:",
            EntityKind.INDIVIDUAL: "Individual:",
        }
        order: list[EntityName] = []
        clauses: dict[EntityName, list[str]] = {}

        def frame_for(entity: EntityName) -> list[str]:
            if entity not in clauses:
                clauses[entity] = []
                order.append(entity)
            return clauses[entity]

        for axiom in self.ontology.axioms:
            if isinstance(axiom, Declaration):
                frame_for(axiom.entity)
            elif isinstance(axiom, SubClassOf):
                if not isinstance(axiom.sub, Named):
                    raise ValueError("cannot serialize a complex subclass left-hand side")
                frame_for(axiom.sub.name).append(f"SubClassOf: {self.expr(axiom.sup)}")
            elif isinstance(axiom, EquivalentClasses):
                frame_for(axiom.a).append(f"EquivalentTo: {self.expr(axiom.b)}")
            elif isinstance(axiom, DisjointClasses):
                frame_for(axiom.a).append(f"DisjointWith: {self.name(axiom.b)}")
            elif isinstance(axiom, Domain):
                frame_for(axiom.prop).append(f"Domain: {self.name(axiom.cls)}")
            elif isinstance(axiom, Range):
                frame_for(axiom.prop).append(f"Range: {self.name(axiom.cls)}")
            elif isinstance(axiom, SubPropertyOf):
                frame_for(axiom.sub).append(f"SubPropertyOf: {self.name(axiom.sup)}")
            elif isinstance(axiom, InverseProperties):
                frame_for(axiom.a).append(f"InverseOf: {self.name(axiom.b)}")
            elif isinstance(axiom, ClassAssertion):
                frame_for(axiom.individual).append(f"Types: {self.expr(axiom.expr)}")
            elif isinstance(axiom, PropertyAssertion):
                frame_for(axiom.subject).append(
                    f"Facts: {self.name(axiom.prop)} {self.name(axiom.object)}"
                )
            else:  # pragma: no cover - axiom set is closed
                raise ValueError(f"cannot serialize {axiom!r}")

        for entity in order:
            lines.append("")
            lines.append(f"{frame_kw[entity.kind]} {self.name(entity)}")
            for clause in clauses[entity]:
                lines.append(f"    {clause}")
        return "\n".join(lines) + "\n"


def serialize(ontology: Ontology) -> str:
    """Deterministic text form; re-parsing yields an equal axiom multiset.

    Exact round-tripping assumes every entity used as a frame subject is
    declared, which holds for everything the generator and the module
    extractor emit.
    """
    return _Writer(ontology).write()
