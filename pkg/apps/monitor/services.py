"""
Monitor incremental de robustez parcial sobre el árbol del planificador.

Cada operador temporal de la fórmula tiene una ranura en la anotación del
nodo. ``None`` representa ★ (todavía sin observación en la ventana).
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from apps.core.exceptions import ErrorCode, ValidationError
from apps.stl.formula import (
    And,
    Eventually,
    EventuallyUnbounded,
    Formula,
    Pred,
    format_formula,
    is_temporal_free,
)

logger = logging.getLogger(__name__)

STAR = None

Annotation = Tuple[Optional[float], ...]


@dataclass(frozen=True)
class _Slot:
    """Operador temporal con su ventana; b es inf para F sin cota."""

    child: Formula
    a: float
    b: float


@dataclass(frozen=True)
class _Node:
    """Nodo del árbol de plegado: hoja = índice de ranura, interno = conjunción."""

    slot: int = -1
    children: Tuple['_Node', ...] = ()


def _star_min(values):
    real = [v for v in values if v is not None]
    return min(real) if real else STAR


def _evaluate(phi: Formula, state: Sequence[float]) -> float:
    """Robustez de la subfórmula sin operadores temporales en un estado."""
    if isinstance(phi, Pred):
        return phi.predicate.robustness(state)
    return min(_evaluate(c, state) for c in phi.children)


class MonitorTemplate:
    """
    Plantilla inmutable del monitor construida a partir de una fórmula del fragmento.

    Solo admite predicados, conjunciones y F acotado o no acotado cuyo
    argumento no contenga operadores temporales.
    """

    def __init__(self, phi: Formula):
        self.formula = phi
        slots = []
        self._root = self._build(phi, slots)
        self.slots: Tuple[_Slot, ...] = tuple(slots)
        if not self.slots:
            raise ValidationError(
                ErrorCode.MONITOR_UNSUPPORTED,
                "La fórmula no contiene operadores temporales",
                {'formula': format_formula(phi)},
            )
        logger.debug(f"Plantilla de monitor con {len(self.slots)} ranuras: {format_formula(phi)}")

    def _build(self, phi: Formula, slots) -> _Node:
        if isinstance(phi, And):
            return _Node(children=tuple(self._build(c, slots) for c in phi.children))
        if isinstance(phi, (Eventually, EventuallyUnbounded)):
            if not is_temporal_free(phi.child) or not self._conjunctive(phi.child):
                raise ValidationError(
                    ErrorCode.MONITOR_UNSUPPORTED,
                    "El argumento de F debe ser una conjunción de predicados",
                    {'subformula': format_formula(phi)},
                )
            if isinstance(phi, Eventually):
                slots.append(_Slot(phi.child, phi.interval.a, phi.interval.b))
            else:
                slots.append(_Slot(phi.child, 0.0, float('inf')))
            return _Node(slot=len(slots) - 1)
        raise ValidationError(
            ErrorCode.MONITOR_UNSUPPORTED,
            f"Operador no soportado por el monitor: {type(phi).__name__}",
            {'subformula': format_formula(phi)},
        )

    def _conjunctive(self, phi: Formula) -> bool:
        if isinstance(phi, Pred):
            return True
        if isinstance(phi, And):
            return all(self._conjunctive(c) for c in phi.children)
        return False

    def __len__(self) -> int:
        return len(self.slots)

    def fold(self, ann: Annotation) -> Optional[float]:
        """Plegado de la anotación por la conjunción; ★ se omite."""
        return self._fold(self._root, ann)

    def _fold(self, node: _Node, ann: Annotation) -> Optional[float]:
        if node.slot >= 0:
            return ann[node.slot]
        return _star_min(self._fold(c, ann) for c in node.children)


def annotate_root(template: MonitorTemplate, state: Sequence[float], t: float = 0.0) -> Annotation:
    """Anotación del nodo raíz."""
    values = []
    for slot in template.slots:
        if slot.a <= t <= slot.b:
            values.append(_evaluate(slot.child, state))
        else:
            values.append(STAR)
    return tuple(values)


def annotate_child(template: MonitorTemplate, parent: Annotation,
                   state: Sequence[float], t: float) -> Annotation:
    """
    Anotación de un hijo a partir de la del padre y del (estado, t) actual.

    Antes de la ventana la ranura es ★; dentro acumula el máximo; después
    conserva el valor del padre.
    """
    values = []
    for slot, previous in zip(template.slots, parent):
        if t < slot.a or t > slot.b:
            values.append(previous)
            continue
        current = _evaluate(slot.child, state)
        values.append(current if previous is None or current > previous else previous)
    return tuple(values)


def node_cost(template: MonitorTemplate, ann: Annotation) -> float:
    """J = -min(rho, 0); una anotación completamente ★ cuesta 0."""
    folded = template.fold(ann)
    if folded is None or folded >= 0.0:
        return 0.0
    return -folded


def is_complete(ann: Annotation) -> bool:
    """True si ninguna ranura sigue en ★."""
    return all(v is not None for v in ann)


def observed_count(ann: Annotation) -> int:
    return sum(v is not None for v in ann)


def is_satisfied(template: MonitorTemplate, ann: Annotation) -> bool:
    """Todas las ranuras observadas y robustez plegada no negativa."""
    if not is_complete(ann):
        return False
    return template.fold(ann) >= 0.0
