"""Two-way translation between application records and ground facts.

Schemas are registered explicitly: a schema names a predicate, and for each
record field the 1-based term position it occupies and the value kind it
carries. No runtime introspection is involved; a language without reflection
can express the same mapping this way.
"""

from __future__ import annotations

import logging
import threading
from dataclasses import dataclass
from pathlib import Path

from .errors import DuplicateSchema, FieldKindMismatch, InvalidSchema, TermKindMismatch
from .syntax import SYMBOL_RE, Atom, Constant, Integer

log = logging.getLogger(__name__)

KINDS = ("integer", "symbol", "quoted_string")


@dataclass(frozen=True, slots=True)
class SchemaField:
    field_id: str
    term_position: int  # 1-based
    value_kind: str  # one of KINDS


@dataclass(frozen=True)
class PredicateSchema:
    predicate: str
    fields: tuple[SchemaField, ...]

    @property
    def arity(self) -> int:
        return len(self.fields)

    @property
    def signature(self) -> tuple[str, int]:
        return (self.predicate, len(self.fields))

    def validate(self) -> None:
        if not SYMBOL_RE.match(self.predicate or ""):
            raise InvalidSchema(f"invalid predicate name {self.predicate!r}")
        positions = sorted(f.term_position for f in self.fields)
        if positions != list(range(1, len(self.fields) + 1)):
            raise InvalidSchema(
                f"term positions of {self.predicate!r} must be a permutation "
                f"of 1..{len(self.fields)}, got {positions}"
            )
        ids = [f.field_id for f in self.fields]
        if len(set(ids)) != len(ids):
            raise InvalidSchema(f"duplicate field ids in {self.predicate!r}")
        for f in self.fields:
            if f.value_kind not in KINDS:
                raise InvalidSchema(f"unknown value kind {f.value_kind!r}")


def schema(predicate: str, **fields: tuple[int, str]) -> PredicateSchema:
    """Shorthand: ``schema("cell", row=(1, "integer"), ...)``."""
    specs = tuple(SchemaField(name, pos, kind) for name, (pos, kind) in fields.items())
    s = PredicateSchema(predicate, specs)
    s.validate()
    return s


@dataclass(frozen=True)
class MappedRecord:
    schema: PredicateSchema
    values: dict[str, int | str]


@dataclass(frozen=True, slots=True)
class Skipped:
    """Outcome for an atom whose predicate has no registered schema."""

    atom: Atom
    message: str


class SchemaRegistry:
    """Schemas keyed by (predicate, arity); at most one per key.

    Registration happens up front; afterwards the registry is only read, so
    sharing it across threads is fine. The warning counter tracks skipped
    translations and is the one piece of mutable state (lock-protected).
    """

    def __init__(self, schemas: list[PredicateSchema] | None = None):
        self._schemas: dict[tuple[str, int], PredicateSchema] = {}
        self._warnings = 0
        self._lock = threading.Lock()
        for s in schemas or []:
            self.register(s)

    def register(self, s: PredicateSchema) -> "SchemaRegistry":
        s.validate()
        if s.signature in self._schemas:
            raise DuplicateSchema(f"schema for {s.predicate}/{s.arity} already registered")
        self._schemas[s.signature] = s
        return self

    def lookup(self, signature: tuple[str, int]) -> PredicateSchema | None:
        return self._schemas.get(signature)

    @property
    def warning_count(self) -> int:
        return self._warnings

    def _warn(self, message: str) -> None:
        with self._lock:
            self._warnings += 1
        log.warning(message)


def record(s: PredicateSchema, **values) -> MappedRecord:
    return MappedRecord(schema=s, values=dict(values))


def record_to_fact(s: PredicateSchema, r: MappedRecord) -> Atom:
    """Build the ground atom for a record; terms placed by declared position."""
    terms: list = [None] * len(s.fields)
    for f in s.fields:
        if f.field_id not in r.values:
            raise FieldKindMismatch(f"{s.predicate}: missing value for field {f.field_id!r}")
        value = r.values[f.field_id]
        if f.value_kind == "integer":
            if not isinstance(value, int) or isinstance(value, bool):
                raise FieldKindMismatch(
                    f"{s.predicate}.{f.field_id}: expected an integer, got {value!r}"
                )
            term = Integer(value)
        elif f.value_kind == "symbol":
            if not isinstance(value, str) or not SYMBOL_RE.match(value):
                raise FieldKindMismatch(
                    f"{s.predicate}.{f.field_id}: expected a symbolic constant, got {value!r}"
                )
            term = Constant(value)
        else:  # quoted_string; stored unquoted, quoted only in the fact
            if not isinstance(value, str) or '"' in value or "\n" in value:
                raise FieldKindMismatch(
                    f"{s.predicate}.{f.field_id}: expected a plain string, got {value!r}"
                )
            term = Constant(f'"{value}"')
        terms[f.term_position - 1] = term
    return Atom(s.predicate, tuple(terms))


def fact_to_record(reg: SchemaRegistry, atom: Atom) -> MappedRecord | Skipped:
    """Translate a ground atom back into a record.

    An atom without a matching schema is skipped: a warning is counted on the
    registry and the atom stays available to the caller untouched.
    """
    s = reg.lookup(atom.signature)
    if s is None:
        message = f"no schema registered for {atom.predicate}/{atom.arity}; atom {atom} ignored"
        reg._warn(message)
        return Skipped(atom=atom, message=message)
    values: dict[str, int | str] = {}
    for f in s.fields:
        term = atom.terms[f.term_position - 1]
        if f.value_kind == "integer":
            if not isinstance(term, Integer):
                raise TermKindMismatch(
                    f"{s.predicate}.{f.field_id}: expected an integer term, got {term}"
                )
            values[f.field_id] = term.value
        elif f.value_kind == "symbol":
            if not isinstance(term, Constant) or term.is_quoted:
                raise TermKindMismatch(
                    f"{s.predicate}.{f.field_id}: expected a symbolic constant, got {term}"
                )
            values[f.field_id] = term.name
        else:
            if not isinstance(term, Constant) or not term.is_quoted:
                raise TermKindMismatch(
                    f"{s.predicate}.{f.field_id}: expected a quoted string, got {term}"
                )
            values[f.field_id] = term.unquoted
    return MappedRecord(schema=s, values=values)


def answer_set_to_records(reg: SchemaRegistry, atoms) -> tuple[list[MappedRecord], int]:
    """Map every atom of an interpretation; returns (records, skipped count).

    Atoms are visited in canonical order so the result is deterministic.
    """
    records: list[MappedRecord] = []
    skipped = 0
    for atom in sorted(atoms, key=str):
        outcome = fact_to_record(reg, atom)
        if isinstance(outcome, Skipped):
            skipped += 1
        else:
            records.append(outcome)
    return records, skipped


def load_schema_manifest(source: str | Path) -> SchemaRegistry:
    """Parse a schema manifest: one schema per line, `%` comments.

    Line format: ``predicate/arity field:pos:kind ...`` with one field spec
    per term position.
    """
    text = source.read_text() if isinstance(source, Path) else source
    registry = SchemaRegistry()
    for raw in text.splitlines():
        line = raw.split("%", 1)[0].strip()
        if not line:
            continue
        head, *field_specs = line.split()
        name, _, arity_text = head.partition("/")
        if not arity_text.isdigit():
            raise InvalidSchema(f"bad schema header {head!r}")
        fields = []
        for spec in field_specs:
            parts = spec.split(":")
            if len(parts) != 3 or not parts[1].isdigit():
                raise InvalidSchema(f"bad field spec {spec!r}")
            fields.append(SchemaField(parts[0], int(parts[1]), parts[2]))
        if len(fields) != int(arity_text):
            raise InvalidSchema(f"{head}: {len(fields)} field specs for arity {arity_text}")
        registry.register(PredicateSchema(name, tuple(fields)))
    return registry
