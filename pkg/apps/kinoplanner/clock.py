"""
Relojes del planificador.

El reloj de iteraciones convierte iteraciones en segundos simulados, de modo
que presupuestos y métricas no dependen de la máquina.
"""
import time

from django.conf import settings

DEFAULT_ITERATION_HZ = 2000.0


class WallClock:
    """Tiempo real transcurrido desde la creación."""

    deterministic = False

    def __init__(self):
        self._start = time.perf_counter()

    def elapsed(self, iterations: int) -> float:
        return time.perf_counter() - self._start


class IterationClock:
    """iterations / hz segundos simulados."""

    deterministic = True

    def __init__(self, hz: float = None):
        self.hz = float(hz or getattr(settings, 'PLANNER_ITERATION_CLOCK_HZ', DEFAULT_ITERATION_HZ))

    def elapsed(self, iterations: int) -> float:
        return iterations / self.hz


def make_clock(deterministic: bool = False):
    return IterationClock() if deterministic else WallClock()
