"""Core orchestration: collect programs and options, run a solver, deliver output.

A :class:`Handler` owns input programs and solver options, keyed by stable
ids, plus the solver to run them on. Execution is synchronous
(:meth:`Handler.start_sync`) or asynchronous (:meth:`Handler.start_async`,
which snapshots the handler state, runs on a worker thread, and invokes the
callback exactly once, also on failure). Solver-side failures are reported
inside :class:`Output`; bad input (unmappable records, unreadable files)
raises in the caller for both modes.
"""

from __future__ import annotations

import logging
import threading
import uuid
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from .errors import (
    AspkitError,
    FileReadError,
    MalformedOutput,
    MappingError,
    NonzeroExit,
    SolverNotFound,
    SolverTimeout,
)
from .mapper import MappedRecord, SchemaRegistry, record_to_fact
from .refeval import DEFAULT_LIMITS, EvaluationLimits

log = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Input programs and options
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class RawText:
    text: str


@dataclass(frozen=True, slots=True)
class MappedFacts:
    records: tuple[MappedRecord, ...]


@dataclass(frozen=True, slots=True)
class FilePath:
    path: str


Part = RawText | MappedFacts | FilePath


class InputProgram:
    """Ordered program parts; assembly order equals insertion order."""

    def __init__(self, text: str | None = None):
        self.parts: list[Part] = []
        if text is not None:
            self.add_text(text)

    def add_text(self, text: str) -> "InputProgram":
        self.parts.append(RawText(text))
        return self

    def add_records(self, records) -> "InputProgram":
        self.parts.append(MappedFacts(tuple(records)))
        return self

    def add_file(self, path: str | Path) -> "InputProgram":
        self.parts.append(FilePath(str(path)))
        return self


@dataclass(frozen=True, slots=True)
class OptionDescriptor:
    """One solver option, already rendered as text.

    ``separator`` splits the text into separate command-line arguments; with
    the empty separator the option is passed as a single argument, so values
    containing spaces never leak into neighbouring arguments.
    """

    option_text: str
    separator: str = ""

    def as_args(self) -> list[str]:
        if not self.separator:
            return [self.option_text]
        return [part for part in self.option_text.split(self.separator) if part]


# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class SolverFailure:
    kind: str  # solver_not_found | timeout | nonzero_exit | malformed_output | evaluation_error
    message: str
    exit_code: int | None = None
    stderr: str | None = None


@dataclass(frozen=True)
class Output:
    """Result of one solver execution: raw text plus either parsed sets or an error."""

    raw: str
    answer_sets: "AnswerSets | None" = None  # aspkit.systems.AnswerSets
    error: SolverFailure | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


# ---------------------------------------------------------------------------
# Handler
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class _Snapshot:
    parts: tuple[Part, ...]
    options: tuple[OptionDescriptor, ...]


class Handler:
    """Mediates between the caller and a solver.

    Mutation (adding/removing programs and options) is single-owner; started
    jobs work on a snapshot and are unaffected by later changes.
    """

    def __init__(
        self,
        solver,  # aspkit.systems.SolverSpec
        registry: SchemaRegistry | None = None,
        limits: EvaluationLimits = DEFAULT_LIMITS,
    ):
        self.solver = solver
        self.registry = registry
        self.limits = limits
        self._programs: dict[int, InputProgram] = {}
        self._options: dict[int, OptionDescriptor] = {}
        self._next_id = 0

    def _new_id(self) -> int:
        self._next_id += 1
        return self._next_id

    def add_program(self, program: InputProgram | str) -> int:
        if isinstance(program, str):
            program = InputProgram(program)
        ident = self._new_id()
        self._programs[ident] = program
        return ident

    def add_option(self, option: OptionDescriptor | str) -> int:
        if isinstance(option, str):
            option = OptionDescriptor(option)
        ident = self._new_id()
        self._options[ident] = option
        return ident

    def remove(self, ident: int) -> bool:
        if ident in self._programs:
            del self._programs[ident]
            return True
        if ident in self._options:
            del self._options[ident]
            return True
        return False

    # --- assembly ---

    def _snapshot(self) -> _Snapshot:
        parts: list[Part] = []
        for key in sorted(self._programs):
            parts.extend(self._programs[key].parts)
        return _Snapshot(
            parts=tuple(parts),
            options=tuple(self._options[key] for key in sorted(self._options)),
        )

    def assemble_input(self) -> str:
        return _assemble(self._snapshot().parts)

    # --- execution ---

    def start_sync(self, timeout: float | None = None) -> Output:
        """Run the solver and block until it finishes (or times out)."""
        snapshot = self._snapshot()
        text = _assemble(snapshot.parts)
        return self._execute(text, snapshot.options, timeout)

    def start_async(self, callback: Callable[[Output], None], timeout: float | None = None) -> str:
        """Run the solver on a worker thread; the callback fires exactly once.

        The handler state is snapshotted and assembled before this returns,
        so assembly problems raise here and later mutation cannot affect the
        job. Solver failures are delivered through the callback's Output.
        """
        snapshot = self._snapshot()
        text = _assemble(snapshot.parts)
        job_id = uuid.uuid4().hex

        def run() -> None:
            output = self._execute(text, snapshot.options, timeout)
            try:
                callback(output)
            except Exception:
                log.exception("callback for job %s raised", job_id)

        threading.Thread(target=run, name=f"aspkit-job-{job_id[:8]}", daemon=True).start()
        return job_id

    def _execute(self, text: str, options, timeout: float | None) -> Output:
        from . import systems  # deferred: systems imports OptionDescriptor from here

        all_options = list(self.solver.default_options) + list(options)
        try:
            raw = systems.invoke_solver(
                self.solver, text, all_options, timeout=timeout, limits=self.limits
            )
        except SolverNotFound as exc:
            return Output(raw="", error=SolverFailure("solver_not_found", str(exc)))
        except SolverTimeout as exc:
            return Output(raw="", error=SolverFailure("timeout", str(exc)))
        except NonzeroExit as exc:
            return Output(
                raw="",
                error=SolverFailure(
                    "nonzero_exit", str(exc), exit_code=exc.code, stderr=exc.stderr
                ),
            )
        except AspkitError as exc:  # reference-evaluation errors: parse, safety, limits
            return Output(raw="", error=SolverFailure("evaluation_error", str(exc)))
        try:
            parsed = systems.parse_output(self.solver, raw)
        except MalformedOutput as exc:
            return Output(raw=raw, error=SolverFailure("malformed_output", str(exc)))
        return Output(raw=raw, answer_sets=parsed)


def _assemble(parts) -> str:
    """Concatenate parts in order; mapped records become one fact per line."""
    chunks: list[str] = []
    for part in parts:
        if isinstance(part, RawText):
            chunks.append(part.text)
        elif isinstance(part, MappedFacts):
            try:
                rendered = "".join(
                    f"{record_to_fact(r.schema, r)}.\n" for r in part.records
                )
            except AspkitError as exc:
                raise MappingError(str(exc)) from exc
            chunks.append(rendered)
        else:
            try:
                chunks.append(Path(part.path).read_text())
            except OSError as exc:
                raise FileReadError(f"cannot read {part.path}: {exc}") from exc
    return "".join(chunks)
