"""
Semántica booleana y robustez cuantitativa sobre trazas muestreadas.

La evaluación es puntual en los instantes de muestreo: F[a,b] en t toma el
máximo sobre las muestras t' con t + a <= t' <= t + b. Una ventana acotada
sin muestras hace la robustez indefinida y se reporta como error.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Iterable, Sequence, Tuple

import numpy as np

from apps.core.exceptions import ErrorCode, EvaluationError, ValidationError

from .formula import (
    And,
    Eventually,
    EventuallyUnbounded,
    Formula,
    Globally,
    Not,
    Or,
    Pred,
    TimeInterval,
    TrueFormula,
    Until,
    format_formula,
)

# Tolerancia para reconocer un instante de muestreo
TIME_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Trace:
    """Prefijo muestreado de una señal: tiempos estrictamente crecientes desde 0."""

    times: Tuple[float, ...]
    states: Tuple[Tuple[float, ...], ...]

    def __post_init__(self):
        if not self.times:
            raise ValidationError(ErrorCode.TRACE_INVALID, "La traza no puede estar vacía")
        if len(self.times) != len(self.states):
            raise ValidationError(ErrorCode.TRACE_INVALID, "Tiempos y estados con longitudes distintas")
        if self.times[0] != 0.0:
            raise ValidationError(ErrorCode.TRACE_INVALID, "La traza debe empezar en t=0")
        if any(b <= a for a, b in zip(self.times, self.times[1:])):
            raise ValidationError(ErrorCode.TRACE_INVALID, "Los tiempos deben ser estrictamente crecientes")
        dimension = len(self.states[0])
        if any(len(s) != dimension for s in self.states):
            raise ValidationError(ErrorCode.TRACE_INVALID, "Todos los estados deben tener la misma dimensión")

    @classmethod
    def from_samples(cls, samples: Iterable[Tuple[float, Sequence[float]]]) -> 'Trace':
        times, states = [], []
        for t, state in samples:
            times.append(float(t))
            states.append(tuple(float(v) for v in state))
        return cls(tuple(times), tuple(states))

    def __len__(self) -> int:
        return len(self.times)

    def index_of(self, t: float) -> int:
        times = np.asarray(self.times)
        i = int(np.searchsorted(times, t - TIME_TOLERANCE, side='left'))
        if i < len(times) and abs(times[i] - t) <= TIME_TOLERANCE:
            return i
        raise ValidationError(
            ErrorCode.TRACE_INVALID,
            f"t={t} no es un instante de muestreo de la traza",
        )

    def window(self, start: int, interval: TimeInterval) -> range:
        """Índices de las muestras dentro de t_start + [a, b]."""
        times = np.asarray(self.times)
        t = self.times[start]
        lo = int(np.searchsorted(times, t + interval.a, side='left'))
        if interval.bounded:
            hi = int(np.searchsorted(times, t + interval.b, side='right'))
        else:
            hi = len(times)
        return range(lo, hi)


class _Evaluator:
    """Evaluación recursiva con memoria por (nodo, índice)."""

    def __init__(self, trace: Trace, quantitative: bool):
        self.trace = trace
        self.quantitative = quantitative
        self._memo: Dict[Tuple[int, int], object] = {}

    def value(self, phi: Formula, i: int):
        key = (id(phi), i)
        if key not in self._memo:
            self._memo[key] = self._compute(phi, i)
        return self._memo[key]

    def _empty(self, phi: Formula, interval: TimeInterval, i: int):
        if self.quantitative:
            raise EvaluationError(
                ErrorCode.EMPTY_WINDOW,
                f"La ventana {interval} desde t={self.trace.times[i]} no contiene muestras "
                f"en '{format_formula(phi)}'",
                {'interval': [interval.a, interval.b], 't': self.trace.times[i]},
            )

    def _compute(self, phi: Formula, i: int):
        q = self.quantitative
        if isinstance(phi, TrueFormula):
            return math.inf if q else True
        if isinstance(phi, Pred):
            state = self.trace.states[i]
            return phi.predicate.robustness(state) if q else phi.predicate.holds(state)
        if isinstance(phi, Not):
            v = self.value(phi.child, i)
            return -v if q else not v
        if isinstance(phi, And):
            values = [self.value(c, i) for c in phi.children]
            return min(values) if q else all(values)
        if isinstance(phi, Or):
            values = [self.value(c, i) for c in phi.children]
            return max(values) if q else any(values)
        if isinstance(phi, (Eventually, Globally)):
            window = self.trace.window(i, phi.interval)
            if not window:
                self._empty(phi, phi.interval, i)
                return isinstance(phi, Globally)
            values = [self.value(phi.child, k) for k in window]
            if isinstance(phi, Eventually):
                return max(values) if q else any(values)
            return min(values) if q else all(values)
        if isinstance(phi, EventuallyUnbounded):
            values = [self.value(phi.child, k) for k in range(i, len(self.trace))]
            return max(values) if q else any(values)
        if isinstance(phi, Until):
            return self._until(phi, i)
        raise TypeError(f"Nodo de fórmula desconocido: {type(phi).__name__}")

    def _until(self, phi: Until, i: int):
        q = self.quantitative
        window = self.trace.window(i, phi.interval)
        if not window:
            self._empty(phi, phi.interval, i)
            return False
        best = -math.inf if q else False
        # prefijo de phi1 sobre [t, t'), acumulado al avanzar t'
        prefix = math.inf if q else True
        k = i
        for j in window:
            while k < j:
                left = self.value(phi.left, k)
                prefix = min(prefix, left) if q else (prefix and left)
                k += 1
            right = self.value(phi.right, j)
            if q:
                best = max(best, min(right, prefix))
            elif right and prefix:
                return True
        return best


def boolean_sat(trace: Trace, phi: Formula, t: float = 0.0) -> bool:
    """Satisfacción booleana de phi en el instante t de la traza."""
    return bool(_Evaluator(trace, quantitative=False).value(phi, trace.index_of(t)))


def robustness(trace: Trace, phi: Formula, t: float = 0.0) -> float:
    """
    Grado de robustez de phi en el instante t de la traza.

    Raises:
        EvaluationError: si alguna ventana acotada necesaria no tiene muestras
    """
    return float(_Evaluator(trace, quantitative=True).value(phi, trace.index_of(t)))
