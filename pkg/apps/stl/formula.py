"""
Árbol de sintaxis de fórmulas STL e impresión en la gramática concreta.

Todos los nodos son dataclasses inmutables; dos fórmulas son iguales si su
estructura es igual, lo que permite comparar ``parse(print(parse(texto)))``
con ``parse(texto)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence, Tuple, Union

from apps.core.exceptions import ErrorCode, IntervalError, ValidationError

# Variables de estado del vehículo, en el orden del vector de estado
STATE_VARIABLES: Tuple[str, ...] = ('x', 'y', 'theta')


def format_number(value: float) -> str:
    """Número en la forma más corta que se vuelve a leer igual."""
    if math.isinf(value):
        return 'inf' if value > 0 else '-inf'
    if float(value).is_integer() and abs(value) < 1e15:
        return str(int(value))
    return repr(float(value))


@dataclass(frozen=True)
class TimeInterval:
    """Intervalo cerrado [a, b] en segundos; b puede ser +inf."""

    a: float
    b: float

    def __post_init__(self):
        if math.isnan(self.a) or math.isnan(self.b):
            raise IntervalError("Los extremos del intervalo no pueden ser NaN")
        if math.isinf(self.a) or self.a < 0:
            raise IntervalError(
                f"El extremo inferior debe ser finito y >= 0 (a={self.a})",
                {'a': self.a, 'b': self.b},
            )
        if self.a > self.b:
            raise IntervalError(
                f"Intervalo inválido [{format_number(self.a)},{format_number(self.b)}]: a > b",
                {'a': self.a, 'b': self.b},
            )

    @property
    def bounded(self) -> bool:
        return not math.isinf(self.b)

    @property
    def width(self) -> float:
        return self.b - self.a

    def contains(self, t: float) -> bool:
        return self.a <= t <= self.b

    def __str__(self) -> str:
        return f"[{format_number(self.a)},{format_number(self.b)}]"


UNBOUNDED = TimeInterval(0.0, math.inf)


class Relation(Enum):
    GE = '>='
    GT = '>'
    LE = '<='
    LT = '<'

    @property
    def lower_bound(self) -> bool:
        """True si el predicado exige proyección por encima del umbral."""
        return self in (Relation.GE, Relation.GT)


@dataclass(frozen=True)
class LinearPredicate:
    """Predicado c·s ~ mu sobre las variables de estado."""

    coefficients: Tuple[float, ...]
    relation: Relation
    threshold: float
    variables: Tuple[str, ...] = STATE_VARIABLES

    def __post_init__(self):
        if len(self.coefficients) != len(self.variables):
            raise ValidationError(
                ErrorCode.VALIDATION_ERROR,
                "Número de coeficientes distinto al número de variables",
            )
        if not any(c != 0.0 for c in self.coefficients):
            raise ValidationError(
                ErrorCode.VALIDATION_ERROR,
                "El predicado lineal necesita al menos un coeficiente no nulo",
            )

    def projection(self, state: Sequence[float]) -> float:
        return sum(c * s for c, s in zip(self.coefficients, state) if c != 0.0)

    def robustness(self, state: Sequence[float]) -> float:
        value = self.projection(state)
        if self.relation.lower_bound:
            return value - self.threshold
        return self.threshold - value

    def holds(self, state: Sequence[float]) -> bool:
        value = self.projection(state)
        if self.relation is Relation.GE:
            return value >= self.threshold
        if self.relation is Relation.GT:
            return value > self.threshold
        if self.relation is Relation.LE:
            return value <= self.threshold
        return value < self.threshold

    def __str__(self) -> str:
        terms = []
        for coefficient, name in zip(self.coefficients, self.variables):
            if coefficient == 0.0:
                continue
            sign = '-' if coefficient < 0 else '+'
            magnitude = abs(coefficient)
            term = name if magnitude == 1.0 else f"{format_number(magnitude)}*{name}"
            if not terms:
                terms.append(term if sign == '+' else f"-{term}")
            else:
                terms.append(f"{sign} {term}")
        return f"{' '.join(terms)} {self.relation.value} {format_number(self.threshold)}"


@dataclass(frozen=True)
class DiskPredicate:
    """Predicado d((x,y) - c) <= r sobre dos componentes del estado."""

    center: Tuple[float, float]
    radius: float
    axes: Tuple[int, int] = (0, 1)
    variables: Tuple[str, ...] = STATE_VARIABLES

    def __post_init__(self):
        if not self.radius > 0:
            raise ValidationError(
                ErrorCode.VALIDATION_ERROR,
                f"El radio del disco debe ser positivo (r={self.radius})",
            )

    def distance(self, state: Sequence[float]) -> float:
        i, j = self.axes
        return math.hypot(state[i] - self.center[0], state[j] - self.center[1])

    def robustness(self, state: Sequence[float]) -> float:
        return self.radius - self.distance(state)

    def holds(self, state: Sequence[float]) -> bool:
        return self.distance(state) <= self.radius

    def __str__(self) -> str:
        i, j = self.axes
        cx, cy = self.center
        return (
            f"dist({self.variables[i]},{self.variables[j]}; "
            f"{format_number(cx)},{format_number(cy)}) <= {format_number(self.radius)}"
        )


Predicate = Union[LinearPredicate, DiskPredicate]


# Nodos del árbol

@dataclass(frozen=True)
class TrueFormula:
    pass


@dataclass(frozen=True)
class Pred:
    predicate: Predicate


@dataclass(frozen=True)
class Not:
    child: 'Formula'


@dataclass(frozen=True)
class And:
    children: Tuple['Formula', ...]


@dataclass(frozen=True)
class Or:
    children: Tuple['Formula', ...]


@dataclass(frozen=True)
class Until:
    left: 'Formula'
    right: 'Formula'
    interval: TimeInterval


@dataclass(frozen=True)
class Eventually:
    child: 'Formula'
    interval: TimeInterval


@dataclass(frozen=True)
class EventuallyUnbounded:
    child: 'Formula'


@dataclass(frozen=True)
class Globally:
    child: 'Formula'
    interval: TimeInterval


Formula = Union[TrueFormula, Pred, Not, And, Or, Until, Eventually, EventuallyUnbounded, Globally]

TEMPORAL_NODES = (Until, Eventually, EventuallyUnbounded, Globally)


def make_and(parts: Sequence[Formula]) -> Formula:
    """Conjunción aplanada; una sola parte se devuelve tal cual."""
    flat = []
    for part in parts:
        if isinstance(part, And):
            flat.extend(part.children)
        else:
            flat.append(part)
    return flat[0] if len(flat) == 1 else And(tuple(flat))


def make_or(parts: Sequence[Formula]) -> Formula:
    """Disyunción aplanada; una sola parte se devuelve tal cual."""
    flat = []
    for part in parts:
        if isinstance(part, Or):
            flat.extend(part.children)
        else:
            flat.append(part)
    return flat[0] if len(flat) == 1 else Or(tuple(flat))


# Precedencias de impresión: mayor número, liga más fuerte
_PREC_OR = 1
_PREC_AND = 2
_PREC_UNTIL = 3
_PREC_UNARY = 4
_PREC_ATOM = 5


def _precedence(phi: Formula) -> int:
    if isinstance(phi, Or):
        return _PREC_OR
    if isinstance(phi, And):
        return _PREC_AND
    if isinstance(phi, Until):
        return _PREC_UNTIL
    if isinstance(phi, (Not, Eventually, EventuallyUnbounded, Globally)):
        return _PREC_UNARY
    return _PREC_ATOM


def _wrap(phi: Formula, minimum: int) -> str:
    text = format_formula(phi)
    return f"({text})" if _precedence(phi) < minimum else text


def format_formula(phi: Formula) -> str:
    """Imprime la fórmula en la gramática concreta documentada."""
    if isinstance(phi, TrueFormula):
        return 'true'
    if isinstance(phi, Pred):
        # Los predicados lineales llevan relación propia; se agrupan para
        # que un operador unario no se mezcle con la expresión
        return f"({phi.predicate})"
    if isinstance(phi, Not):
        return f"!{_wrap(phi.child, _PREC_UNARY)}"
    if isinstance(phi, And):
        return ' & '.join(_wrap(c, _PREC_UNTIL) for c in phi.children)
    if isinstance(phi, Or):
        return ' | '.join(_wrap(c, _PREC_AND) for c in phi.children)
    if isinstance(phi, Until):
        return (
            f"{_wrap(phi.left, _PREC_UNARY)} U{phi.interval} "
            f"{_wrap(phi.right, _PREC_UNARY)}"
        )
    if isinstance(phi, Eventually):
        return f"F{phi.interval} {_wrap(phi.child, _PREC_UNARY)}"
    if isinstance(phi, EventuallyUnbounded):
        return f"F {_wrap(phi.child, _PREC_UNARY)}"
    if isinstance(phi, Globally):
        return f"G{phi.interval} {_wrap(phi.child, _PREC_UNARY)}"
    raise TypeError(f"Nodo de fórmula desconocido: {type(phi).__name__}")


def iter_subformulas(phi: Formula):
    """Recorrido en preorden de la fórmula."""
    yield phi
    if isinstance(phi, (Not, Eventually, EventuallyUnbounded, Globally)):
        yield from iter_subformulas(phi.child)
    elif isinstance(phi, (And, Or)):
        for child in phi.children:
            yield from iter_subformulas(child)
    elif isinstance(phi, Until):
        yield from iter_subformulas(phi.left)
        yield from iter_subformulas(phi.right)


def is_temporal_free(phi: Formula) -> bool:
    return not any(isinstance(node, TEMPORAL_NODES) for node in iter_subformulas(phi))
