"""
Extracción del fragmento de planificación: conjunción de metas
F[a,b](disco) acotadas y F(disco) no acotadas.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

from apps.core.exceptions import FragmentError

from .formula import (
    And,
    DiskPredicate,
    Eventually,
    EventuallyUnbounded,
    Formula,
    Pred,
    TimeInterval,
    UNBOUNDED,
    format_formula,
)


@dataclass(frozen=True)
class FragmentGoal:
    """Meta del fragmento con su identificador (acotadas primero)."""

    identifier: int
    region: DiskPredicate
    interval: TimeInterval

    @property
    def bounded(self) -> bool:
        return self.interval.bounded


@dataclass(frozen=True)
class FragmentSpec:
    bounded_goals: Tuple[Tuple[DiskPredicate, TimeInterval], ...]
    unbounded_goals: Tuple[DiskPredicate, ...]

    @property
    def goals(self) -> Tuple[FragmentGoal, ...]:
        """Metas en orden de identificador: acotadas y luego no acotadas."""
        bounded = [
            FragmentGoal(i, region, interval)
            for i, (region, interval) in enumerate(self.bounded_goals)
        ]
        offset = len(bounded)
        unbounded = [
            FragmentGoal(offset + j, region, UNBOUNDED)
            for j, region in enumerate(self.unbounded_goals)
        ]
        return tuple(bounded + unbounded)

    def __len__(self) -> int:
        return len(self.bounded_goals) + len(self.unbounded_goals)

    @property
    def min_window_width(self) -> float:
        widths = [interval.width for _, interval in self.bounded_goals]
        return min(widths) if widths else math.inf

    @property
    def horizon(self) -> float:
        """Mayor extremo superior de las ventanas acotadas; 0 si no hay."""
        return max((interval.b for _, interval in self.bounded_goals), default=0.0)


def _goal_region(phi: Formula, context: Formula) -> DiskPredicate:
    if isinstance(phi, Pred) and isinstance(phi.predicate, DiskPredicate):
        if phi.predicate.axes != (0, 1):
            raise FragmentError("Las metas se definen sobre (x, y)", format_formula(context))
        return phi.predicate
    raise FragmentError(
        "La meta debe ser un predicado de disco dentro de un operador F",
        format_formula(context),
    )


def extract_fragment(phi: Formula) -> FragmentSpec:
    """
    Extrae las metas acotadas y no acotadas en orden textual.

    Raises:
        FragmentError: subfórmula fuera del fragmento o regiones solapadas
    """
    parts = phi.children if isinstance(phi, And) else (phi,)
    bounded, unbounded = [], []
    for part in parts:
        if isinstance(part, EventuallyUnbounded):
            unbounded.append(_goal_region(part.child, part))
        elif isinstance(part, Eventually):
            region = _goal_region(part.child, part)
            if part.interval.bounded:
                bounded.append((region, part.interval))
            elif part.interval.a == 0.0:
                unbounded.append(region)
            else:
                raise FragmentError(
                    "Un intervalo sin cota superior debe empezar en 0",
                    format_formula(part),
                )
        else:
            raise FragmentError(
                "Solo se admiten conjunciones de F[a,b](disco) y F(disco)",
                format_formula(part),
            )

    regions = [r for r, _ in bounded] + unbounded
    for i in range(len(regions)):
        for j in range(i + 1, len(regions)):
            a, b = regions[i], regions[j]
            gap = math.hypot(a.center[0] - b.center[0], a.center[1] - b.center[1])
            if gap <= a.radius + b.radius:
                raise FragmentError(
                    "Las regiones meta deben ser discos disjuntos",
                    f"{a} / {b}",
                )
    return FragmentSpec(tuple(bounded), tuple(unbounded))
