"""Rule-language front end: AST types, parser, safety check, and canonical rendering.

The concrete syntax is the small DLV-style dialect used throughout this
project: `|` for head disjunction, `:-` for implication, `not` for default
negation, `:~ body. [w:l]` for weak constraints, `%` line comments, and
builtin comparisons (`=`, `!=`/`<>`, `<`, `>`, `<=`, `>=`) whose sides may be
a term or a single binary sum `t + u`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError, SafetyError

VARIABLE_RE = re.compile(r"[A-Z_][A-Za-z0-9_]*$")
SYMBOL_RE = re.compile(r"[a-z][A-Za-z0-9_]*$")

COMPARISON_OPS = ("=", "!=", "<", ">", "<=", ">=")


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class Variable:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class Constant:
    """Symbolic constant. Quoted-string constants keep their quotes in `name`."""

    name: str

    @property
    def is_quoted(self) -> bool:
        return self.name.startswith('"')

    @property
    def unquoted(self) -> str:
        return self.name[1:-1] if self.is_quoted else self.name

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class Integer:
    value: int

    def __str__(self) -> str:
        return str(self.value)


Term = Variable | Constant | Integer


@dataclass(frozen=True, slots=True)
class Sum:
    """Single binary `+`, only allowed inside builtins."""

    lhs: Term
    rhs: Term

    def __str__(self) -> str:
        return f"{self.lhs} + {self.rhs}"


@dataclass(frozen=True, slots=True)
class Atom:
    predicate: str
    terms: tuple[Term, ...] = ()

    @property
    def arity(self) -> int:
        return len(self.terms)

    @property
    def signature(self) -> tuple[str, int]:
        return (self.predicate, len(self.terms))

    @property
    def is_ground(self) -> bool:
        return not any(isinstance(t, Variable) for t in self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return self.predicate
        return f"{self.predicate}({','.join(str(t) for t in self.terms)})"


@dataclass(frozen=True, slots=True)
class Literal:
    atom: Atom
    negated: bool = False

    def __str__(self) -> str:
        return f"not {self.atom}" if self.negated else str(self.atom)


@dataclass(frozen=True, slots=True)
class Builtin:
    op: str  # one of COMPARISON_OPS; `<>` is normalized to `!=` at parse time
    lhs: Term | Sum
    rhs: Term | Sum

    def __str__(self) -> str:
        return f"{self.lhs} {self.op} {self.rhs}"


BodyElement = Literal | Builtin


@dataclass(frozen=True, slots=True)
class Rule:
    head: tuple[Atom, ...] = ()
    body: tuple[BodyElement, ...] = ()

    @property
    def is_constraint(self) -> bool:
        return not self.head

    @property
    def is_fact(self) -> bool:
        """Single ground head atom and empty body."""
        return len(self.head) == 1 and not self.body and self.head[0].is_ground

    def positive_body_atoms(self) -> tuple[Atom, ...]:
        return tuple(e.atom for e in self.body if isinstance(e, Literal) and not e.negated)

    def negative_body_atoms(self) -> tuple[Atom, ...]:
        return tuple(e.atom for e in self.body if isinstance(e, Literal) and e.negated)

    def builtins(self) -> tuple[Builtin, ...]:
        return tuple(e for e in self.body if isinstance(e, Builtin))

    def variables(self) -> list[str]:
        """All variable names, in first-occurrence order."""
        seen: list[str] = []
        for atom in self.head:
            _collect_vars(atom.terms, seen)
        for elem in self.body:
            if isinstance(elem, Literal):
                _collect_vars(elem.atom.terms, seen)
            else:
                _collect_vars(_operand_terms(elem.lhs) + _operand_terms(elem.rhs), seen)
        return seen

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True, slots=True)
class WeakConstraint:
    body: tuple[BodyElement, ...]
    weight: Term
    level: Term

    def positive_body_atoms(self) -> tuple[Atom, ...]:
        return tuple(e.atom for e in self.body if isinstance(e, Literal) and not e.negated)

    def negative_body_atoms(self) -> tuple[Atom, ...]:
        return tuple(e.atom for e in self.body if isinstance(e, Literal) and e.negated)

    def builtins(self) -> tuple[Builtin, ...]:
        return tuple(e for e in self.body if isinstance(e, Builtin))

    def variables(self) -> list[str]:
        seen: list[str] = []
        for elem in self.body:
            if isinstance(elem, Literal):
                _collect_vars(elem.atom.terms, seen)
            else:
                _collect_vars(_operand_terms(elem.lhs) + _operand_terms(elem.rhs), seen)
        _collect_vars((self.weight, self.level), seen)
        return seen

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True, slots=True)
class Program:
    rules: tuple[Rule, ...] = ()
    weak_constraints: tuple[WeakConstraint, ...] = ()

    def facts(self) -> tuple[Atom, ...]:
        return tuple(r.head[0] for r in self.rules if r.is_fact)

    def __str__(self) -> str:
        return render(self)


def _operand_terms(operand: Term | Sum) -> tuple[Term, ...]:
    if isinstance(operand, Sum):
        return (operand.lhs, operand.rhs)
    return (operand,)


def _collect_vars(terms, seen: list[str]) -> None:
    for t in terms:
        if isinstance(t, Variable) and t.name not in seen:
            seen.append(t.name)


# ---------------------------------------------------------------------------
# Lexer
# ---------------------------------------------------------------------------

_PUNCT = [
    (":-", "IMPLIES"),
    (":~", "WEAK"),
    ("<>", "OP"),
    ("<=", "OP"),
    (">=", "OP"),
    ("!=", "OP"),
    ("=", "OP"),
    ("<", "OP"),
    (">", "OP"),
    ("(", "LPAREN"),
    (")", "RPAREN"),
    ("[", "LBRACKET"),
    ("]", "RBRACKET"),
    (":", "COLON"),
    (",", "COMMA"),
    (".", "DOT"),
    ("|", "PIPE"),
    ("+", "PLUS"),
]


@dataclass(frozen=True, slots=True)
class _Token:
    kind: str
    value: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "%":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch == '"':
            j = text.find('"', i + 1)
            if j < 0:
                raise ParseError("unterminated string", line, col)
            if "\n" in text[i:j]:
                raise ParseError("newline in string", line, col)
            tokens.append(_Token("STRING", text[i : j + 1], line, col))
            col += j + 1 - i
            i = j + 1
            continue
        if ch.isdigit() or (ch == "-" and i + 1 < n and text[i + 1].isdigit()):
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(_Token("INTEGER", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ("a" <= ch <= "z") or ("A" <= ch <= "Z") or ch == "_":
            j = i + 1
            while j < n and (text[j].isascii() and (text[j].isalnum() or text[j] == "_")):
                j += 1
            word = text[i:j]
            if word == "not":
                kind = "NOT"
            elif word[0].isupper() or word[0] == "_":
                kind = "VARIABLE"
            else:
                kind = "IDENT"
            tokens.append(_Token(kind, word, line, col))
            col += j - i
            i = j
            continue
        for punct, kind in _PUNCT:
            if text.startswith(punct, i):
                tokens.append(_Token(kind, punct, line, col))
                col += len(punct)
                i += len(punct)
                break
        else:
            raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(_Token("EOF", "", line, col))
    return tokens


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0
        # Anonymous `_` occurrences become fresh variables; pick names that do
        # not collide with any variable written out in the source.
        self.taken_names = {t.value for t in tokens if t.kind == "VARIABLE"}
        self.fresh_counter = 0

    def peek(self, ahead: int = 0) -> _Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def expect(self, kind: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(f"expected {kind}, found {tok.value!r}", tok.line, tok.column)
        return self.next()

    def error(self, message: str) -> ParseError:
        tok = self.peek()
        return ParseError(message, tok.line, tok.column)

    def fresh_variable(self) -> Variable:
        while True:
            self.fresh_counter += 1
            name = f"_{self.fresh_counter}"
            if name not in self.taken_names:
                self.taken_names.add(name)
                return Variable(name)

    # --- grammar ---

    def parse_statements(self) -> tuple[list[Rule], list[WeakConstraint], list[int]]:
        rules: list[Rule] = []
        weaks: list[WeakConstraint] = []
        weak_indices: list[int] = []
        index = 0
        while self.peek().kind != "EOF":
            if self.peek().kind == "WEAK":
                weaks.append(self.parse_weak_constraint())
                weak_indices.append(index)
            else:
                rules.append(self.parse_rule())
            index += 1
        return rules, weaks, weak_indices

    def parse_rule(self) -> Rule:
        head: list[Atom] = []
        if self.peek().kind != "IMPLIES":
            head.append(self.parse_atom())
            while self.peek().kind == "PIPE":
                self.next()
                head.append(self.parse_atom())
        body: tuple[BodyElement, ...] = ()
        if self.peek().kind == "IMPLIES":
            self.next()
            body = self.parse_body()
        elif not head:
            raise self.error("expected a rule head or `:-`")
        self.expect("DOT")
        return Rule(head=tuple(head), body=body)

    def parse_weak_constraint(self) -> WeakConstraint:
        self.expect("WEAK")
        body = self.parse_body()
        self.expect("DOT")
        self.expect("LBRACKET")
        weight = self.parse_term()
        self.expect("COLON")
        level = self.parse_term()
        self.expect("RBRACKET")
        for term in (weight, level):
            if isinstance(term, Integer) and term.value < 0:
                raise self.error("weak constraint weight and level must be non-negative")
        return WeakConstraint(body=body, weight=weight, level=level)

    def parse_body(self) -> tuple[BodyElement, ...]:
        elems = [self.parse_body_element()]
        while self.peek().kind == "COMMA":
            self.next()
            elems.append(self.parse_body_element())
        return tuple(elems)

    def parse_body_element(self) -> BodyElement:
        tok = self.peek()
        if tok.kind == "NOT":
            self.next()
            return Literal(self.parse_atom(), negated=True)
        if tok.kind in ("VARIABLE", "INTEGER", "STRING"):
            return self.parse_builtin()
        if tok.kind == "IDENT":
            # A lone lowercase identifier is a builtin operand when followed
            # by a comparison or `+`, and an atom otherwise.
            follow = self.peek(1).kind
            if follow in ("OP", "PLUS") :
                return self.parse_builtin()
            return Literal(self.parse_atom())
        raise self.error(f"expected a literal or builtin, found {tok.value!r}")

    def parse_builtin(self) -> Builtin:
        lhs = self.parse_operand()
        op_tok = self.expect("OP")
        rhs = self.parse_operand()
        op = "!=" if op_tok.value == "<>" else op_tok.value
        return Builtin(op=op, lhs=lhs, rhs=rhs)

    def parse_operand(self) -> Term | Sum:
        left = self.parse_term()
        if self.peek().kind == "PLUS":
            self.next()
            right = self.parse_term()
            return Sum(left, right)
        return left

    def parse_atom(self) -> Atom:
        name = self.expect("IDENT")
        terms: list[Term] = []
        if self.peek().kind == "LPAREN":
            self.next()
            terms.append(self.parse_term())
            while self.peek().kind == "COMMA":
                self.next()
                terms.append(self.parse_term())
            self.expect("RPAREN")
        return Atom(predicate=name.value, terms=tuple(terms))

    def parse_term(self) -> Term:
        tok = self.peek()
        if tok.kind == "VARIABLE":
            self.next()
            if tok.value == "_":
                return self.fresh_variable()
            return Variable(tok.value)
        if tok.kind == "INTEGER":
            self.next()
            return Integer(int(tok.value))
        if tok.kind == "STRING":
            self.next()
            return Constant(tok.value)
        if tok.kind == "IDENT":
            self.next()
            return Constant(tok.value)
        raise self.error(f"expected a term, found {tok.value!r}")


def parse_program(text: str, check_safety: bool = True) -> Program:
    """Parse program text into a :class:`Program`.

    Statement order is preserved (rules and weak constraints each keep their
    relative order). With ``check_safety`` every statement is safety-checked
    and the first offender raises :class:`SafetyError`.
    """
    rules, weaks, weak_indices = _Parser(_tokenize(text)).parse_statements()
    program = Program(rules=tuple(rules), weak_constraints=tuple(weaks))
    if check_safety:
        weak_set = set(weak_indices)
        rule_iter = iter(rules)
        weak_iter = iter(weaks)
        total = len(rules) + len(weaks)
        for index in range(total):
            stmt = next(weak_iter) if index in weak_set else next(rule_iter)
            unsafe = safety_check(stmt)
            if unsafe:
                raise SafetyError(index, unsafe, render(stmt))
    return program


# ---------------------------------------------------------------------------
# Safety
# ---------------------------------------------------------------------------

def safety_check(rule: Rule | WeakConstraint) -> list[str]:
    """Unsafe variable names of ``rule`` in first-occurrence order.

    A variable is safe when it occurs in a positive non-builtin body literal,
    or when it is the left side of an assignment ``X = s + t`` (or ``X = t``)
    whose right-side variables are all safe already; the latter is closed
    under a fixpoint.
    """
    safe: set[str] = set()
    for atom in rule.positive_body_atoms():
        for t in atom.terms:
            if isinstance(t, Variable):
                safe.add(t.name)

    assignments = [
        b for b in rule.builtins()
        if b.op == "=" and isinstance(b.lhs, Variable)
    ]
    changed = True
    while changed:
        changed = False
        for b in assignments:
            if b.lhs.name in safe:
                continue
            rhs_vars = {t.name for t in _operand_terms(b.rhs) if isinstance(t, Variable)}
            if rhs_vars <= safe:
                safe.add(b.lhs.name)
                changed = True

    return [name for name in rule.variables() if name not in safe]


# ---------------------------------------------------------------------------
# EDB / IDB classification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PredicatePartition:
    edb: frozenset[tuple[str, int]]
    idb: frozenset[tuple[str, int]]


def classify_predicates(program: Program) -> PredicatePartition:
    """Partition predicate signatures into EDB and IDB.

    IDB predicates are those defined by non-fact rules (they occur in the
    head of at least one rule that is not a fact); every other predicate of
    the program is EDB.
    """
    all_sigs: set[tuple[str, int]] = set()
    idb: set[tuple[str, int]] = set()
    for rule in program.rules:
        for atom in rule.head:
            all_sigs.add(atom.signature)
            if not rule.is_fact:
                idb.add(atom.signature)
        for elem in rule.body:
            if isinstance(elem, Literal):
                all_sigs.add(elem.atom.signature)
    for weak in program.weak_constraints:
        for elem in weak.body:
            if isinstance(elem, Literal):
                all_sigs.add(elem.atom.signature)
    return PredicatePartition(edb=frozenset(all_sigs - idb), idb=frozenset(idb))


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------

def render(x) -> str:
    """Canonical text for any AST node.

    Canonical form: no space inside atom argument lists, a single space after
    body commas, ``|`` between head atoms, ``:-`` separator, terminating dot.
    ``parse_program(render(p))`` is structurally equal to ``p``.
    """
    if isinstance(x, Program):
        parts = [render(r) for r in x.rules] + [render(w) for w in x.weak_constraints]
        return "\n".join(parts)
    if isinstance(x, Rule):
        head = " | ".join(str(a) for a in x.head)
        if not x.body:
            return f"{head}."
        body = ", ".join(str(e) for e in x.body)
        if not head:
            return f":- {body}."
        return f"{head} :- {body}."
    if isinstance(x, WeakConstraint):
        body = ", ".join(str(e) for e in x.body)
        return f":~ {body}. [{x.weight}:{x.level}]"
    if isinstance(x, (Atom, Literal, Builtin, Sum, Variable, Constant, Integer)):
        return str(x)
    raise TypeError(f"cannot render {type(x).__name__}")
