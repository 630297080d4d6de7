"""Reference evaluator: naive grounding and exhaustive answer-set enumeration.

Semantics implemented here, over ground programs:

* an interpretation is a set of ground atoms;
* a rule is satisfied when its head intersects the interpretation or its body
  is false;
* the reduct w.r.t. I keeps exactly the rules whose whole body is true
  w.r.t. I, bodies untouched;
* I is an answer set when it is a model of the reduct of the grounding and no
  proper subset of it is;
* weak constraints charge their weight at their level when their body holds,
  and answer sets are ranked lexicographically by level, higher levels first.

Everything is computed by brute force over an explicitly bounded candidate
space; this module trades speed for being small enough to audit, and doubles
as the test oracle for the rest of the package.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from enum import Enum

from .errors import LimitExceeded, SolverTimeout
from .syntax import Atom, Builtin, Constant, Integer, Program, Sum, Term, Variable


@dataclass(frozen=True)
class EvaluationLimits:
    """Hard bounds checked before any enumeration starts."""

    max_herbrand_base: int = 5000
    max_candidate_atoms: int = 22
    max_ground_rules: int = 200_000

    def __post_init__(self):
        for name in ("max_herbrand_base", "max_candidate_atoms", "max_ground_rules"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


DEFAULT_LIMITS = EvaluationLimits()

# Upper bound on raw substitutions tried while grounding; grounding a rule is
# |universe| ** #variables even when most instances are deleted again.
_SUBSTITUTION_FACTOR = 25


@dataclass(frozen=True, slots=True)
class GroundRule:
    head: frozenset[Atom]
    pos: frozenset[Atom]
    neg: frozenset[Atom]

    @property
    def is_fact(self) -> bool:
        return len(self.head) == 1 and not self.pos and not self.neg

    def render(self) -> str:
        head = " | ".join(sorted(str(a) for a in self.head))
        body = ", ".join(
            sorted(str(a) for a in self.pos) + sorted(f"not {a}" for a in self.neg)
        )
        if not body:
            return f"{head}."
        if not head:
            return f":- {body}."
        return f"{head} :- {body}."


@dataclass(frozen=True, slots=True)
class GroundWeakConstraint:
    pos: frozenset[Atom]
    neg: frozenset[Atom]
    weight: int
    level: int

    def render(self) -> str:
        body = ", ".join(
            sorted(str(a) for a in self.pos) + sorted(f"not {a}" for a in self.neg)
        )
        return f":~ {body}. [{self.weight}:{self.level}]"


@dataclass(frozen=True)
class GroundProgram:
    rules: tuple[GroundRule, ...] = ()
    weak_constraints: tuple[GroundWeakConstraint, ...] = ()


@dataclass(frozen=True, eq=True)
class AnswerSet:
    atoms: frozenset[Atom]
    cost: dict[int, int] = field(default_factory=dict)


class Verdict(Enum):
    YES = "yes"
    NOT_A_MODEL = "not_a_model"
    NOT_MINIMAL = "not_minimal"


def render_interpretation(atoms) -> str:
    return "{" + ", ".join(sorted(str(a) for a in atoms)) + "}"


# ---------------------------------------------------------------------------
# Herbrand universe and base
# ---------------------------------------------------------------------------

def _operand_constants(operand: Term | Sum) -> list[Term]:
    terms = (operand.lhs, operand.rhs) if isinstance(operand, Sum) else (operand,)
    return [t for t in terms if isinstance(t, (Constant, Integer))]


def herbrand_universe(program: Program) -> frozenset[Term]:
    """All constants appearing in the program.

    Integers produced by evaluating `+` do not extend the universe; only
    constants written in the program text count.
    """
    out: set[Term] = set()

    def from_body(body) -> None:
        for elem in body:
            if isinstance(elem, Builtin):
                out.update(_operand_constants(elem.lhs))
                out.update(_operand_constants(elem.rhs))
            else:
                out.update(t for t in elem.atom.terms if isinstance(t, (Constant, Integer)))

    for rule in program.rules:
        for atom in rule.head:
            out.update(t for t in atom.terms if isinstance(t, (Constant, Integer)))
        from_body(rule.body)
    for weak in program.weak_constraints:
        from_body(weak.body)
        out.update(t for t in (weak.weight, weak.level) if isinstance(t, (Constant, Integer)))
    return frozenset(out)


def _signatures(program: Program) -> set[tuple[str, int]]:
    sigs: set[tuple[str, int]] = set()
    for rule in program.rules:
        for atom in rule.head:
            sigs.add(atom.signature)
        for atom in rule.positive_body_atoms() + rule.negative_body_atoms():
            sigs.add(atom.signature)
    for weak in program.weak_constraints:
        for atom in weak.positive_body_atoms() + weak.negative_body_atoms():
            sigs.add(atom.signature)
    return sigs


def herbrand_base(program: Program, limits: EvaluationLimits = DEFAULT_LIMITS) -> frozenset[Atom]:
    """Every atom formable from the program's predicates over its universe."""
    universe = sorted(herbrand_universe(program), key=_term_sort_key)
    sigs = _signatures(program)
    count = sum(len(universe) ** arity for _, arity in sigs)
    if count > limits.max_herbrand_base:
        raise LimitExceeded("herbrand base atoms", count, limits.max_herbrand_base)
    base: set[Atom] = set()
    for name, arity in sigs:
        for combo in itertools.product(universe, repeat=arity):
            base.add(Atom(name, combo))
    return frozenset(base)


def _term_sort_key(t: Term):
    if isinstance(t, Integer):
        return (0, "", t.value)
    return (1, t.name, 0)


# ---------------------------------------------------------------------------
# Grounding
# ---------------------------------------------------------------------------

def _ground_value(term: Term, sub: dict[str, Term]) -> Term:
    return sub[term.name] if isinstance(term, Variable) else term


def _operand_value(operand: Term | Sum, sub: dict[str, Term]):
    """('int', n) or ('sym', name), or None if the operand has no value.

    A sum only has a value when both sides are integers.
    """
    if isinstance(operand, Sum):
        lhs = _ground_value(operand.lhs, sub)
        rhs = _ground_value(operand.rhs, sub)
        if isinstance(lhs, Integer) and isinstance(rhs, Integer):
            return ("int", lhs.value + rhs.value)
        return None
    value = _ground_value(operand, sub)
    if isinstance(value, Integer):
        return ("int", value.value)
    return ("sym", value.name)


def eval_builtin(builtin: Builtin, sub: dict[str, Term]) -> bool:
    """Truth of a builtin under a grounding substitution.

    `=`/`!=` compare values structurally; the order comparisons are only
    defined between integers and are false otherwise, as is any comparison
    against a sum that does not evaluate to an integer.
    """
    lhs = _operand_value(builtin.lhs, sub)
    rhs = _operand_value(builtin.rhs, sub)
    if lhs is None or rhs is None:
        return False
    if builtin.op == "=":
        return lhs == rhs
    if builtin.op == "!=":
        return lhs != rhs
    if lhs[0] != "int" or rhs[0] != "int":
        return False
    a, b = lhs[1], rhs[1]
    return {"<": a < b, ">": a > b, "<=": a <= b, ">=": a >= b}[builtin.op]


def _instantiate(atom: Atom, sub: dict[str, Term], cache: dict) -> Atom:
    terms = tuple(_ground_value(t, sub) for t in atom.terms)
    key = (atom.predicate, terms)
    got = cache.get(key)
    if got is None:
        got = Atom(atom.predicate, terms)
        cache[key] = got
    return got


def ground_program(
    program: Program,
    limits: EvaluationLimits = DEFAULT_LIMITS,
    deadline: float | None = None,
) -> GroundProgram:
    """Instantiate every rule under all substitutions over the universe.

    Builtins are then evaluated away: a false builtin deletes the instance, a
    true one is dropped from the body. Ground weak constraints additionally
    require weight and level to come out as non-negative integers; other
    instances are discarded. Exact duplicate weak-constraint instances are
    kept once (they are a set; duplicates would double-charge costs).
    """
    universe = sorted(herbrand_universe(program), key=_term_sort_key)
    nconst = len(universe)

    substitution_budget = max(2_000_000, _SUBSTITUTION_FACTOR * limits.max_ground_rules)
    total_subs = 0
    for stmt in list(program.rules) + list(program.weak_constraints):
        nvars = len(stmt.variables())
        total_subs += nconst**nvars if nvars else 1
        if total_subs > substitution_budget:
            raise LimitExceeded("grounding substitutions", total_subs, substitution_budget)

    cache: dict = {}
    rules: list[GroundRule] = []
    weaks: list[GroundWeakConstraint] = []
    seen_weaks: set = set()
    retained = 0
    ticks = 0

    def check_deadline():
        if deadline is not None and time.monotonic() > deadline:
            raise SolverTimeout("grounding deadline exceeded")

    def substitutions(stmt):
        nonlocal ticks
        names = stmt.variables()
        if not names:
            yield {}
            return
        for combo in itertools.product(universe, repeat=len(names)):
            ticks += 1
            if ticks % 8192 == 0:
                check_deadline()
            yield dict(zip(names, combo))

    for rule in program.rules:
        builtins = rule.builtins()
        pos_atoms = rule.positive_body_atoms()
        neg_atoms = rule.negative_body_atoms()
        for sub in substitutions(rule):
            if any(not eval_builtin(b, sub) for b in builtins):
                continue
            retained += 1
            if retained > limits.max_ground_rules:
                raise LimitExceeded("ground rule instances", retained, limits.max_ground_rules)
            rules.append(
                GroundRule(
                    head=frozenset(_instantiate(a, sub, cache) for a in rule.head),
                    pos=frozenset(_instantiate(a, sub, cache) for a in pos_atoms),
                    neg=frozenset(_instantiate(a, sub, cache) for a in neg_atoms),
                )
            )

    for weak in program.weak_constraints:
        builtins = weak.builtins()
        pos_atoms = weak.positive_body_atoms()
        neg_atoms = weak.negative_body_atoms()
        for sub in substitutions(weak):
            weight = _ground_value(weak.weight, sub)
            level = _ground_value(weak.level, sub)
            if not isinstance(weight, Integer) or not isinstance(level, Integer):
                continue
            if weight.value < 0 or level.value < 0:
                continue
            if any(not eval_builtin(b, sub) for b in builtins):
                continue
            instance = GroundWeakConstraint(
                pos=frozenset(_instantiate(a, sub, cache) for a in pos_atoms),
                neg=frozenset(_instantiate(a, sub, cache) for a in neg_atoms),
                weight=weight.value,
                level=level.value,
            )
            if instance in seen_weaks:
                continue
            seen_weaks.add(instance)
            retained += 1
            if retained > limits.max_ground_rules:
                raise LimitExceeded("ground rule instances", retained, limits.max_ground_rules)
            weaks.append(instance)

    return GroundProgram(rules=tuple(rules), weak_constraints=tuple(weaks))


# ---------------------------------------------------------------------------
# Models and reducts
# ---------------------------------------------------------------------------

def body_true(rule: GroundRule, interpretation: frozenset[Atom]) -> bool:
    return rule.pos <= interpretation and not (rule.neg & interpretation)


def _rule_satisfied(rule: GroundRule, interpretation: frozenset[Atom]) -> bool:
    return bool(rule.head & interpretation) or not body_true(rule, interpretation)


def is_model(interpretation: frozenset[Atom], gp: GroundProgram) -> bool:
    return all(_rule_satisfied(r, interpretation) for r in gp.rules)


def reduct(gp: GroundProgram, interpretation: frozenset[Atom]) -> GroundProgram:
    """Rules of ``gp`` whose body is true w.r.t. the interpretation.

    Bodies are kept intact; weak constraints never take part in reducts.
    """
    kept = tuple(r for r in gp.rules if body_true(r, interpretation))
    return GroundProgram(rules=kept, weak_constraints=())


def cost(interpretation: frozenset[Atom], gwcs) -> dict[int, int]:
    """Total violated weight per level; levels with zero total are absent."""
    totals: dict[int, int] = {}
    for wc in dict.fromkeys(gwcs):  # set semantics: exact duplicates count once
        if wc.pos <= interpretation and not (wc.neg & interpretation):
            totals[wc.level] = totals.get(wc.level, 0) + wc.weight
    return {lvl: w for lvl, w in totals.items() if w != 0}


# ---------------------------------------------------------------------------
# Enumeration machinery
# ---------------------------------------------------------------------------

def _forced_atoms(gp: GroundProgram) -> frozenset[Atom]:
    """Atoms every model must contain: heads of single-head rules with empty body."""
    return frozenset(next(iter(r.head)) for r in gp.rules if r.is_fact)


def _possible_atoms(gp: GroundProgram) -> frozenset[Atom]:
    """Least set closed under: head atoms of rules whose positive body is possible.

    Negative literals are ignored, so this over-approximates every answer
    set; atoms outside it can never be derived.
    """
    possible: set[Atom] = set()
    pending = [r for r in gp.rules if r.head]
    changed = True
    while changed:
        changed = False
        remaining = []
        for rule in pending:
            if rule.pos <= possible:
                before = len(possible)
                possible.update(rule.head)
                if len(possible) != before:
                    changed = True
            else:
                remaining.append(rule)
        pending = remaining
    return frozenset(possible)


class _MaskSpace:
    """Candidate atoms as bit positions; forced atoms folded away."""

    def __init__(self, candidates: list[Atom], forced: frozenset[Atom], possible: frozenset[Atom]):
        self.candidates = candidates
        self.forced = forced
        self.possible = possible
        self.bit = {atom: 1 << i for i, atom in enumerate(candidates)}

    def mask_of(self, atoms) -> int:
        m = 0
        for a in atoms:
            m |= self.bit[a]
        return m

    def atoms_of(self, mask: int) -> frozenset[Atom]:
        return frozenset(a for a in self.candidates if mask & self.bit[a]) | self.forced

    def fold_rules(self, rules) -> list[tuple[int, int, int]]:
        """(head, pos, neg) masks for rules that can distinguish candidates.

        Rules whose positive body mentions an impossible atom can never fire;
        rules with a forced head atom or a forced negative literal are
        satisfied by every candidate. Duplicates are collapsed.
        """
        folded: list[tuple[int, int, int]] = []
        seen: set[tuple[int, int, int]] = set()
        for r in rules:
            if not r.pos <= self.possible:
                continue
            if r.neg & self.forced:
                continue
            if r.head & self.forced:
                continue
            triple = (
                self.mask_of(a for a in r.head if a in self.bit),
                self.mask_of(a for a in r.pos if a not in self.forced),
                self.mask_of(a for a in r.neg if a in self.bit),
            )
            if triple in seen:
                continue
            seen.add(triple)
            folded.append(triple)
        # cheap-to-violate rules first: early exit for non-models
        folded.sort(key=lambda t: (t[0].bit_count() + t[1].bit_count(), t))
        return folded

    def fold_weaks(self, weaks) -> list[tuple[int, int, int, int]]:
        """(pos, neg, weight, level) for weak constraints that can ever fire.

        Folding may make distinct instances coincide; they stay distinct here
        (a list, not a set) because each ground instance charges separately.
        """
        out = []
        for wc in weaks:
            if not wc.pos <= self.possible:
                continue
            if wc.neg & self.forced:
                continue
            out.append(
                (
                    self.mask_of(a for a in wc.pos if a not in self.forced),
                    self.mask_of(a for a in wc.neg if a in self.bit),
                    wc.weight,
                    wc.level,
                )
            )
        return out


def _is_model_mask(m: int, folded) -> bool:
    for head, pos, neg in folded:
        if (m & pos) == pos and not (m & neg) and not (m & head):
            return False
    return True


def _has_smaller_model(m: int, folded, deadline: float | None) -> bool:
    """Any proper submask of ``m`` that models the reduct w.r.t. ``m``?"""
    reduct_masks = [
        (head, pos, neg)
        for head, pos, neg in folded
        if (m & pos) == pos and not (m & neg)
    ]
    sub = m
    ticks = 0
    while sub:
        sub = (sub - 1) & m
        ticks += 1
        if deadline is not None and ticks % 8192 == 0 and time.monotonic() > deadline:
            raise SolverTimeout("enumeration deadline exceeded")
        if _is_model_mask(sub, reduct_masks):
            return True
        if sub == 0:
            break
    return False


def _cost_of_mask(m: int, folded_weaks) -> dict[int, int]:
    totals: dict[int, int] = {}
    for pos, neg, weight, level in folded_weaks:
        if (m & pos) == pos and not (m & neg):
            totals[level] = totals.get(level, 0) + weight
    return {lvl: w for lvl, w in totals.items() if w != 0}


# ---------------------------------------------------------------------------
# Minimal models, answer sets
# ---------------------------------------------------------------------------

def minimal_models(
    gp: GroundProgram,
    limits: EvaluationLimits = DEFAULT_LIMITS,
    deadline: float | None = None,
) -> list[frozenset[Atom]]:
    """All subset-minimal models of the ground rules, by subset enumeration.

    Candidates range over every atom occurring in the program (facts forced
    in); returned in canonical rendering order.
    """
    occurring: set[Atom] = set()
    for r in gp.rules:
        occurring |= r.head | r.pos | r.neg
    forced = _forced_atoms(gp)
    candidates = sorted(occurring - forced, key=str)
    if len(candidates) > limits.max_candidate_atoms:
        raise LimitExceeded("candidate atoms", len(candidates), limits.max_candidate_atoms)

    # Everything occurring is a "possible" atom here: plain models need no
    # derivability, so only the forced folding applies.
    space = _MaskSpace(candidates, forced, frozenset(occurring) | forced)
    folded = space.fold_rules(gp.rules)

    models: list[int] = []
    for m in range(1 << len(candidates)):
        if deadline is not None and m % 4096 == 0 and time.monotonic() > deadline:
            raise SolverTimeout("enumeration deadline exceeded")
        if _is_model_mask(m, folded):
            models.append(m)

    minimal: list[int] = []
    for m in sorted(models, key=lambda x: x.bit_count()):
        if not any((k & m) == k for k in minimal):
            minimal.append(m)
    return sorted((space.atoms_of(m) for m in minimal), key=render_interpretation)


def is_answer_set(
    interpretation: frozenset[Atom],
    program: Program,
    limits: EvaluationLimits = DEFAULT_LIMITS,
) -> Verdict:
    """Check one interpretation: model of its reduct, and minimal among subsets."""
    gp = ground_program(program, limits)
    interpretation = frozenset(interpretation)
    if not is_model(interpretation, gp):
        return Verdict.NOT_A_MODEL

    facts = _forced_atoms(gp)
    removable = sorted(interpretation - facts, key=str)
    if len(removable) > limits.max_candidate_atoms:
        raise LimitExceeded("candidate atoms", len(removable), limits.max_candidate_atoms)
    bit = {atom: 1 << i for i, atom in enumerate(removable)}

    # Reduct w.r.t. the interpretation: bodies are true, so positive atoms are
    # within interpretation and negatives are outside it; for subsets the
    # negative literals stay true and can be dropped.
    reduct_masks: list[tuple[int, int]] = []
    for r in gp.rules:
        if not body_true(r, interpretation):
            continue
        if r.head & facts:
            continue
        head = sum(bit[a] for a in r.head if a in bit)
        pos = sum(bit[a] for a in r.pos if a in bit)
        reduct_masks.append((head, pos))

    full = (1 << len(removable)) - 1
    sub = full
    while sub:
        sub = (sub - 1) & full
        if all((sub & pos) != pos or (sub & head) for head, pos in reduct_masks):
            return Verdict.NOT_MINIMAL
        if sub == 0:
            break
    return Verdict.YES


def answer_sets(
    program: Program,
    limits: EvaluationLimits = DEFAULT_LIMITS,
    deadline: float | None = None,
) -> list[AnswerSet]:
    """Every answer set exactly once, with its cost, in canonical render order.

    Candidates are the subsets of the derivable (positively reachable) atoms
    of the grounding with facts forced in; every candidate is checked to be a
    model of the grounding and minimal among the models of its own reduct.
    The derivability restriction is sound because answer-set atoms need rules
    with true bodies deriving them; the oracle-equivalence tests validate it
    against unpruned enumeration.
    """
    gp = ground_program(program, limits, deadline=deadline)
    return _answer_sets_of_ground(gp, limits, deadline)


def _answer_sets_of_ground(
    gp: GroundProgram,
    limits: EvaluationLimits,
    deadline: float | None = None,
) -> list[AnswerSet]:
    possible = _possible_atoms(gp)
    forced = _forced_atoms(gp)
    candidates = sorted(possible - forced, key=str)
    if len(candidates) > limits.max_candidate_atoms:
        raise LimitExceeded("candidate atoms", len(candidates), limits.max_candidate_atoms)

    space = _MaskSpace(candidates, forced, possible)
    folded = space.fold_rules(gp.rules)
    folded_weaks = space.fold_weaks(gp.weak_constraints)

    found: list[AnswerSet] = []
    for m in range(1 << len(candidates)):
        if deadline is not None and m % 2048 == 0 and time.monotonic() > deadline:
            raise SolverTimeout("enumeration deadline exceeded")
        if not _is_model_mask(m, folded):
            continue
        if _has_smaller_model(m, folded, deadline):
            continue
        found.append(AnswerSet(atoms=space.atoms_of(m), cost=_cost_of_mask(m, folded_weaks)))

    found.sort(key=lambda s: render_interpretation(s.atoms))
    return found


def compare_costs(a: dict[int, int], b: dict[int, int]) -> int:
    """Lexicographic cost order, higher levels first: -1, 0, or 1."""
    for level in sorted(set(a) | set(b), reverse=True):
        wa, wb = a.get(level, 0), b.get(level, 0)
        if wa != wb:
            return -1 if wa < wb else 1
    return 0


def optimal_answer_sets(
    program: Program,
    limits: EvaluationLimits = DEFAULT_LIMITS,
    deadline: float | None = None,
) -> list[AnswerSet]:
    """The answer sets whose cost is lexicographically minimal."""
    sets = answer_sets(program, limits, deadline)
    if not sets:
        return []
    best = sets[0].cost
    for s in sets[1:]:
        if compare_costs(s.cost, best) < 0:
            best = s.cost
    return [s for s in sets if compare_costs(s.cost, best) == 0]
