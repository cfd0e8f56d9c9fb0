"""Exhaustive computation of models and optimal (extended) models.

Optimality is computed two independent ways: by descending-level argmax /
argmin filtering, and by the pairwise domination relation.  The two must
always agree.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .core import ExtendedInterpretation, check_cap, enumerate_evaluations, enumerate_interpretations
from .ewsys import MAX, MIN, SENSES, CostVector, EwSystem, level_cost, level_cost_extended, levels


def _check_sense(sense: str) -> None:
    if sense not in SENSES:
        raise ValueError(f"sense must be one of {SENSES}, got {sense!r}")


def state_space_size(system: EwSystem, cap: int | None = None) -> int:
    """``2^|atoms| * prod(|domain|)``, refused when above the cap."""
    size = (1 << len(system.vocabulary)) * system.specification.size()
    return check_cap(size, cap)


def _chunks(items: list, n: int) -> list[list]:
    if n <= 1 or len(items) <= 1:
        return [items]
    step = -(-len(items) // n)
    return [items[i:i + step] for i in range(0, len(items), step)]


def enumerate_extended_models(system: EwSystem, cap: int | None = None, threads: int = 1) -> list[ExtendedInterpretation]:
    """Extended models of the hard part, interpretations outer, evaluations inner."""
    state_space_size(system, cap)
    hard = system.hard.modules
    prop = [m for m in hard if not m.specification.variables]
    rest = [m for m in hard if m.specification.variables]
    evaluations = list(enumerate_evaluations(system.specification))

    def scan(interps):
        out = []
        for i in interps:
            if not all(m.contains(i) for m in prop):
                continue
            out.extend(ExtendedInterpretation(i, nu) for nu in evaluations if all(m.contains(i, nu) for m in rest))
        return out

    interps = list(enumerate_interpretations(system.vocabulary))
    parts = _chunks(interps, threads)
    if len(parts) == 1:
        return scan(parts[0])
    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = list(pool.map(scan, parts))
    return [x for part in results for x in part]


def enumerate_models(system: EwSystem, cap: int | None = None, threads: int = 1, extended_models=None) -> list[frozenset]:
    """Interpretations admitting at least one evaluation that satisfies the hard part."""
    if extended_models is None:
        extended_models = enumerate_extended_models(system, cap, threads)
    return list(dict.fromkeys(e.interpretation for e in extended_models))


def _best(values, sense):
    return max(values) if sense == MAX else min(values)


def optimal_models(system: EwSystem, sense: str = MAX, cap: int | None = None, threads: int = 1, models=None) -> list[frozenset]:
    """Models that are l-optimal (l-min-optimal) at every level, greatest level first."""
    _check_sense(sense)
    survivors = enumerate_models(system, cap, threads) if models is None else list(models)
    for level in reversed(levels(system)):
        if not survivors:
            break
        costs = [level_cost(i, system, level) for i in survivors]
        best = _best(costs, sense)
        survivors = [i for i, c in zip(survivors, costs) if c == best]
    return survivors


def optimal_extended_models(system: EwSystem, sense: str = MAX, cap: int | None = None, threads: int = 1,
                            extended_models=None) -> list[ExtendedInterpretation]:
    _check_sense(sense)
    survivors = enumerate_extended_models(system, cap, threads) if extended_models is None else list(extended_models)
    for level in reversed(levels(system)):
        if not survivors:
            break
        costs = [level_cost_extended(i, nu, system, level) for i, nu in survivors]
        best = _best(costs, sense)
        survivors = [e for e, c in zip(survivors, costs) if c == best]
    return survivors


def _dominates_costs(better: dict, worse: dict, level_set: list[int], sense: str) -> bool:
    """Some level is strictly better for ``better`` while every greater level ties."""
    for l in level_set:
        if not all(better[k] == worse[k] for k in level_set if k > l):
            continue
        if sense == MAX and better[l] > worse[l]:
            return True
        if sense == MIN and better[l] < worse[l]:
            return True
    return False


def _plain_costs(system, interp, level_set):
    return {l: level_cost(interp, system, l) for l in level_set}


def _extended_costs(system, interp, nu, level_set):
    return {l: level_cost_extended(interp, nu, system, l) for l in level_set}


def dominates(challenger, interp, system: EwSystem, sense: str = MAX, models=None) -> bool:
    """Whether model ``challenger`` max- (or min-) dominates model ``interp``."""
    _check_sense(sense)
    model_set = set(enumerate_models(system) if models is None else models)
    for x in (challenger, interp):
        if frozenset(x) not in model_set:
            raise ValueError(f"{sorted(x)} is not a model of the system")
    ls = levels(system)
    return _dominates_costs(_plain_costs(system, challenger, ls), _plain_costs(system, interp, ls), ls, sense)


def dominates_extended(challenger, target, system: EwSystem, sense: str = MAX, extended_models=None) -> bool:
    _check_sense(sense)
    model_set = set(enumerate_extended_models(system) if extended_models is None else extended_models)
    challenger, target = ExtendedInterpretation(*challenger), ExtendedInterpretation(*target)
    for x in (challenger, target):
        if x not in model_set:
            raise ValueError(f"{x} is not an extended model of the system")
    ls = levels(system)
    return _dominates_costs(_extended_costs(system, *challenger, ls), _extended_costs(system, *target, ls), ls, sense)


def _undominated(candidates, cost_of, level_set, sense):
    # domination depends on costs only, so compare each distinct cost profile once
    profiles: dict[tuple, dict] = {}
    keys = []
    for c in candidates:
        costs = cost_of(c)
        key = tuple(costs[l] for l in level_set)
        profiles.setdefault(key, costs)
        keys.append(key)
    distinct = list(profiles.items())
    undominated = set()
    for key, costs in distinct:
        if not any(_dominates_costs(other, costs, level_set, sense) for _, other in distinct):
            undominated.add(key)
    return [c for c, k in zip(candidates, keys) if k in undominated]


def optimal_models_by_domination(system: EwSystem, sense: str = MAX, cap: int | None = None, threads: int = 1,
                                 models=None) -> list[frozenset]:
    """Models no other model dominates."""
    _check_sense(sense)
    models = enumerate_models(system, cap, threads) if models is None else list(models)
    ls = levels(system)
    return _undominated(models, lambda i: _plain_costs(system, i, ls), ls, sense)


def optimal_extended_models_by_domination(system: EwSystem, sense: str = MAX, cap: int | None = None, threads: int = 1,
                                          extended_models=None) -> list[ExtendedInterpretation]:
    _check_sense(sense)
    ext = enumerate_extended_models(system, cap, threads) if extended_models is None else list(extended_models)
    ls = levels(system)
    return _undominated(ext, lambda e: _extended_costs(system, e.interpretation, e.evaluation, ls), ls, sense)


@dataclass
class SolveResult:
    """Everything one exhaustive run learns about a system."""

    sense: str
    extended: bool
    models: list[frozenset]
    extended_models: list[ExtendedInterpretation]
    optimal: list
    costs: dict = field(default_factory=dict)
    stats: dict = field(default_factory=dict)


def solve(system: EwSystem, sense: str = MAX, extended: bool = False, cap: int | None = None, threads: int = 1,
          all_costs: bool = False) -> SolveResult:
    """Enumerate, then compute the optimal set by both definitions and insist they agree."""
    _check_sense(sense)
    start = time.perf_counter()
    states = state_space_size(system, cap)
    ext = enumerate_extended_models(system, cap, threads)
    models = enumerate_models(system, extended_models=ext)
    if extended:
        optimal = optimal_extended_models(system, sense, extended_models=ext)
        check = optimal_extended_models_by_domination(system, sense, extended_models=ext)
        candidates = ext if all_costs else optimal
        costs = {e: CostVector.of_extended(e.interpretation, e.evaluation, system, sense) for e in candidates}
    else:
        optimal = optimal_models(system, sense, models=models)
        check = optimal_models_by_domination(system, sense, models=models)
        candidates = models if all_costs else optimal
        costs = {i: CostVector.of_model(i, system, sense) for i in candidates}
    if set(optimal) != set(check):
        raise AssertionError("optimality definitions disagree; this is a bug")
    stats = {
        "states": states,
        "models": len(models),
        "extended_models": len(ext),
        "optimal": len(optimal),
        "seconds": time.perf_counter() - start,
    }
    return SolveResult(sense, extended, models, ext, optimal, costs, stats)


__all__ = [
    "MAX", "MIN", "SolveResult", "dominates", "dominates_extended", "enumerate_extended_models",
    "enumerate_models", "optimal_extended_models", "optimal_extended_models_by_domination",
    "optimal_models", "optimal_models_by_domination", "solve", "state_space_size",
]
