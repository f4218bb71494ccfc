"""
Enumeración de órdenes candidatos de visita a las metas.

Dos metas acotadas cuyas ventanas no se solapan fijan un orden: la que
termina antes va primero (b_i <= a_j). Las metas sin cota no generan
restricciones pero sí participan en las permutaciones.
"""
from __future__ import annotations

import logging
from typing import Dict, List, Sequence, Set, Tuple

from django.conf import settings

from apps.core.exceptions import ErrorCode, PlanCapExceededError
from apps.stl.formula import TimeInterval
from apps.stl.fragment import FragmentSpec

logger = logging.getLogger(__name__)

PlanOrder = Tuple[int, ...]

DEFAULT_MAX_GOALS = 8


def no_time_overlap(first: TimeInterval, second: TimeInterval) -> bool:
    """True si los intervalos no comparten puntos interiores (tocarse en un extremo no es solapamiento)."""
    return first.b <= second.a or second.b <= first.a


def precedence_pairs(intervals: Sequence[TimeInterval]) -> Set[Tuple[int, int]]:
    """
    Pares (i, j) tales que i debe visitarse antes que j.

    Dos ventanas de ancho cero en el mismo instante se preceden mutuamente;
    el ciclo se rompe por identificador y queda el orden trivial i < j.
    """
    pairs = set()
    for i, first in enumerate(intervals):
        for j, second in enumerate(intervals):
            if i == j or not (first.bounded and second.bounded):
                continue
            if first.b <= second.a and not (second.b <= first.a and j < i):
                pairs.add((i, j))
    return pairs


def respects_precedence(order: Sequence[int], pairs: Set[Tuple[int, int]]) -> bool:
    position = {goal: k for k, goal in enumerate(order)}
    return all(position[i] < position[j] for i, j in pairs)


def _max_goals() -> int:
    return int(getattr(settings, 'PLANNER_TASKPLAN_MAX_GOALS', DEFAULT_MAX_GOALS))


def plans_for_intervals(intervals: Sequence[TimeInterval]) -> List[PlanOrder]:
    """
    Extensiones lineales del orden de precedencia en orden lexicográfico.

    Raises:
        PlanCapExceededError: más metas que PLANNER_TASKPLAN_MAX_GOALS
    """
    count = len(intervals)
    cap = _max_goals()
    if count > cap:
        raise PlanCapExceededError(
            ErrorCode.PLAN_CAP_EXCEEDED,
            f"{count} metas superan el máximo de {cap} para enumerar órdenes",
            {'goals': count, 'cap': cap},
        )

    predecessors: Dict[int, Set[int]] = {k: set() for k in range(count)}
    for i, j in precedence_pairs(intervals):
        predecessors[j].add(i)

    plans: List[PlanOrder] = []
    prefix: List[int] = []
    placed: Set[int] = set()

    def extend():
        if len(prefix) == count:
            plans.append(tuple(prefix))
            return
        for goal in range(count):
            if goal in placed or not predecessors[goal] <= placed:
                continue
            prefix.append(goal)
            placed.add(goal)
            extend()
            placed.discard(goal)
            prefix.pop()

    extend()
    return plans


def candidate_plans(fragment: FragmentSpec) -> List[PlanOrder]:
    """
    Órdenes de visita compatibles con las ventanas temporales del fragmento.

    Args:
        fragment: Metas acotadas y no acotadas

    Returns:
        list: órdenes (tuplas de identificadores) en orden lexicográfico
    """
    plans = plans_for_intervals([goal.interval for goal in fragment.goals])
    logger.debug(f"{len(plans)} órdenes candidatos para {len(fragment)} metas")
    return plans


def describe_plans(fragment: FragmentSpec, plans: Sequence[PlanOrder]) -> str:
    """Listado de órdenes para la CLI."""
    goals = fragment.goals
    lines = [f"{len(plans)} órdenes candidatos para {len(goals)} metas"]
    for k, order in enumerate(plans):
        steps = ' -> '.join(f"{g}{goals[g].interval if goals[g].bounded else ''}" for g in order)
        lines.append(f"  [{k}] {steps}")
    return '\n'.join(lines)
