"""Bundled example encodings, writable through the CLI.

Each bundle is a list of self-contained program files (encoding plus
instance facts), sized so the reference evaluator can enumerate them,
except the full 9x9 sudoku, which needs an external solver.
"""

from __future__ import annotations

from pathlib import Path

_THREE_COL_RULES = """\
% Graph 3-coloring, guess-and-check style: every node takes one of three
% colors, and adjacent nodes may not share one.
color(X,r) | color(X,y) | color(X,g) :- node(X).
:- arc(X,Y), color(X,C), color(Y,C).
"""

THREE_COL_K3 = _THREE_COL_RULES + """
% triangle instance
node(1). node(2). node(3).
arc(1,2). arc(2,3). arc(1,3).
"""

THREE_COL_K3_ISOLATED = _THREE_COL_RULES + """
% triangle plus one node with no arcs
node(1). node(2). node(3). node(4).
arc(1,2). arc(2,3). arc(1,3).
"""

THREE_COL_K4 = _THREE_COL_RULES + """
% complete graph on four nodes: not 3-colorable
node(1). node(2). node(3). node(4).
arc(1,2). arc(1,3). arc(1,4). arc(2,3). arc(2,4). arc(3,4).
"""

_RAMSEY_RULES = """\
% Two-coloring of a complete graph's edges; answer sets exist exactly when
% some coloring avoids both a red triangle and a blue 4-clique.
blue(X,Y) | red(X,Y) :- edge(X,Y).
:- red(X,Y), red(X,Z), red(Y,Z).
:- blue(X,Y), blue(X,Z), blue(Y,Z), blue(X,W), blue(Y,W), blue(Z,W).
"""


def _complete_graph(n: int) -> str:
    lines = [f"node({i})." for i in range(1, n + 1)]
    lines += [f"edge({i},{j})." for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    return "\n".join(lines) + "\n"


RAMSEY_N3 = _RAMSEY_RULES + "\n% complete graph, n=3\n" + _complete_graph(3)
RAMSEY_N9 = _RAMSEY_RULES + "\n% complete graph, n=9\n" + _complete_graph(9)

SUDOKU_RULES = """\
% Sudoku: guess a symbol for every position, forbid repeats in any row,
% column, or block.
cell(X,Y,N) | nocell(X,Y,N) :- pos(X), pos(Y), symbol(N).
:- cell(X,Y,N), cell(X,Y,N1), N1 <> N.
assigned(X,Y) :- cell(X,Y,N).
:- pos(X), pos(Y), not assigned(X,Y).
:- cell(X,Y1,Z), cell(X,Y2,Z), Y1 <> Y2.
:- cell(X1,Y,Z), cell(X2,Y,Z), X1 <> X2.
:- cell(X1,Y1,Z), cell(X2,Y2,Z), Y1 <> Y2, sameblock(X1,Y1,X2,Y2).
:- cell(X1,Y1,Z), cell(X2,Y2,Z), X1 <> X2, sameblock(X1,Y1,X2,Y2).
"""


def _sudoku_9x9_facts() -> str:
    lines = [f"pos({i})." for i in range(1, 10)]
    lines += [f"symbol({i})." for i in range(1, 10)]
    for bx in range(3):
        for by in range(3):
            positions = [
                (x, y)
                for x in range(3 * bx + 1, 3 * bx + 4)
                for y in range(3 * by + 1, 3 * by + 4)
            ]
            for x1, y1 in positions:
                for x2, y2 in positions:
                    lines.append(f"sameblock({x1},{y1},{x2},{y2}).")
    return "\n".join(lines) + "\n"


SUDOKU_9X9 = (
    SUDOKU_RULES
    + "\n% 9x9 grid (empty board; too large for the reference evaluator)\n"
    + _sudoku_9x9_facts()
)

SUDOKU_TOY = SUDOKU_RULES + """
% 2x2 grid with two symbols and no blocks: the two order-2 Latin squares
pos(0). pos(1).
symbol(1). symbol(2).
"""

SUDOKU_TOY_GIVEN = SUDOKU_TOY + """
% one given cell pins the solution
cell(0,0,1).
"""

# Workout planner. The guess and the weak constraints follow the usual
# guess/check/optimize shape; the admissibility checks are expressed against
# precomputed duration-triple tables because this rule language has neither
# aggregates nor multiplication. The tables below are frozen text, derived
# from the instance's burn rates (bicycle 5, walking 2, running 11 calories
# per minute), the 200..300 calorie window, and the 20 minute cap; the test
# suite recomputes them independently.
DLVFIT_FRAGMENT = """\
% Pick at most one duration per activity.
activity_to_do(A, HL) | not_activity_to_do(A, HL) :- how_long(A, HL).
:- activity_to_do(A, HL1), activity_to_do(A, HL2), HL1 != HL2.

% Effective daily duration, zero for skipped activities.
daily_duration(A, HL) :- activity_to_do(A, HL).
daily_duration(A, 0) :- not_activity_to_do(A, 10), not_activity_to_do(A, 20).

% Admissibility: burn within the calorie window, stay under the time cap.
:- daily_duration("ON_BICYCLE", DB), daily_duration("WALKING", DW),
   daily_duration("RUNNING", DR), burns_too_few(DB, DW, DR).
:- daily_duration("ON_BICYCLE", DB), daily_duration("WALKING", DW),
   daily_duration("RUNNING", DR), burns_too_many(DB, DW, DR).
:- daily_duration("ON_BICYCLE", DB), daily_duration("WALKING", DW),
   daily_duration("RUNNING", DR), takes_too_long(DB, DW, DR).

% Preferences: doing an activity costs its stated weight; spending time
% costs the minutes at the stated level.
:~ optimize(A, W, P), activity_to_do(A, _). [W:P]
:~ optimize(time, _, P), activity_to_do(_, HL). [HL:P]

% Duration triples (bicycle, walking, running) violating each check.
burns_too_few(0,0,0).  burns_too_few(0,0,10).  burns_too_few(0,10,0).
burns_too_few(0,10,10).  burns_too_few(0,20,0).  burns_too_few(0,20,10).
burns_too_few(10,0,0).  burns_too_few(10,0,10).  burns_too_few(10,10,0).
burns_too_few(10,10,10).  burns_too_few(10,20,0).  burns_too_few(20,0,0).
burns_too_few(20,10,0).  burns_too_few(20,20,0).
burns_too_many(10,20,20).  burns_too_many(20,0,20).  burns_too_many(20,10,20).
burns_too_many(20,20,20).
takes_too_long(0,10,20).  takes_too_long(0,20,10).  takes_too_long(0,20,20).
takes_too_long(10,0,20).  takes_too_long(10,10,10).  takes_too_long(10,10,20).
takes_too_long(10,20,0).  takes_too_long(10,20,10).  takes_too_long(10,20,20).
takes_too_long(20,0,10).  takes_too_long(20,0,20).  takes_too_long(20,10,0).
takes_too_long(20,10,10).  takes_too_long(20,10,20).  takes_too_long(20,20,0).
takes_too_long(20,20,10).  takes_too_long(20,20,20).

% Instance facts.
calories_burnt_per_activity("ON_BICYCLE", 5).
calories_burnt_per_activity("WALKING", 2).
calories_burnt_per_activity("RUNNING", 11).

remaining_calories_to_burn(200).

how_long("ON_BICYCLE", 10).
how_long("ON_BICYCLE", 20).
how_long("WALKING", 10).
how_long("WALKING", 20).
how_long("RUNNING", 10).
how_long("RUNNING", 20).

max_time(20).

surplus(100).

optimize("RUNNING", 1, 3).
optimize("ON_BICYCLE", 3, 3).
optimize("WALKING", 2, 3).

optimize(time,0,2).

optimize(activities, 0, 1).
"""

BUNDLES: dict[str, list[tuple[str, str]]] = {
    "3col": [
        ("3col-k3.lp", THREE_COL_K3),
        ("3col-k3-isolated.lp", THREE_COL_K3_ISOLATED),
        ("3col-k4.lp", THREE_COL_K4),
    ],
    "ramsey": [
        ("ramsey-n3.lp", RAMSEY_N3),
        ("ramsey-n9.lp", RAMSEY_N9),
    ],
    "sudoku": [
        ("sudoku.lp", SUDOKU_9X9),
    ],
    "sudoku-toy": [
        ("sudoku-toy.lp", SUDOKU_TOY),
        ("sudoku-toy-given.lp", SUDOKU_TOY_GIVEN),
    ],
    "dlvfit": [
        ("dlvfit-fragment.lp", DLVFIT_FRAGMENT),
    ],
}


def write_bundle(name: str, dest: str | Path = ".") -> list[Path]:
    """Write the named bundle's files into ``dest``; returns the paths."""
    files = BUNDLES[name]
    dest_dir = Path(dest)
    dest_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for filename, text in files:
        path = dest_dir / filename
        path.write_text(text)
        written.append(path)
    return written
