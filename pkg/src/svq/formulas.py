"""Propositional formulas and their supervaluational evaluation.

A formula whose atoms all carry determinate values is evaluated classically.
Gap atoms are handled by enumerating every Boolean completion of them: the
formula is TRUE when classically true under all completions, FALSE when
false under all, and GAP otherwise. Classical tautologies therefore stay
true no matter how many atoms have gaps.

Completions treat gap atoms as independent Booleans; no compatibility
constraints between atoms are imposed.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Mapping, Union

from .config import config
from .errors import PrecisificationBlowup, UnknownAtom
from .lattice import TruthValue


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Not:
    operand: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


Formula = Union[Atom, Not, And, Or, Implies]


def formula_atoms(f: Formula) -> tuple[str, ...]:
    """Atom names in first-occurrence order."""
    seen: dict[str, None] = {}

    def walk(node: Formula) -> None:
        if isinstance(node, Atom):
            seen.setdefault(node.name)
        elif isinstance(node, Not):
            walk(node.operand)
        else:
            walk(node.left)
            walk(node.right)

    walk(f)
    return tuple(seen)


def evaluate_classical(f: Formula, assignment: Mapping[str, bool]) -> bool:
    """Two-valued evaluation under a total Boolean assignment."""
    if isinstance(f, Atom):
        try:
            return bool(assignment[f.name])
        except KeyError:
            raise UnknownAtom(f"atom {f.name!r} has no assigned value") from None
    if isinstance(f, Not):
        return not evaluate_classical(f.operand, assignment)
    if isinstance(f, And):
        return evaluate_classical(f.left, assignment) and evaluate_classical(f.right, assignment)
    if isinstance(f, Or):
        return evaluate_classical(f.left, assignment) or evaluate_classical(f.right, assignment)
    if isinstance(f, Implies):
        return (not evaluate_classical(f.left, assignment)) or evaluate_classical(f.right, assignment)
    raise TypeError(f"not a formula node: {f!r}")


def evaluate_super(
    f: Formula,
    atomics: Mapping[str, TruthValue],
    cap: int | None = None,
) -> TruthValue:
    """Supervaluational truth value of a formula under a gappy valuation.

    Raises UnknownAtom when a leaf is missing from atomics, and
    PrecisificationBlowup, before enumerating anything, when the number of
    gap atoms exceeds the cap (config.gap_cap by default).
    """
    names = formula_atoms(f)
    for name in names:
        if name not in atomics:
            raise UnknownAtom(f"atom {name!r} is not in the valuation map")
    gaps = [n for n in names if atomics[n] is TruthValue.GAP]
    cap = config.gap_cap if cap is None else cap
    if len(gaps) > cap:
        raise PrecisificationBlowup(
            f"{len(gaps)} gap atoms exceed the completion cap of {cap}"
        )
    base = {n: atomics[n] is TruthValue.TRUE for n in names if atomics[n].is_determinate}
    outcomes: set[bool] = set()
    for bits in product((False, True), repeat=len(gaps)):
        assignment = dict(base)
        assignment.update(zip(gaps, bits))
        outcomes.add(evaluate_classical(f, assignment))
        if len(outcomes) == 2:
            return TruthValue.GAP
    return TruthValue.from_bool(outcomes.pop())
