"""
Factories de resultados de benchmark para tests
"""
import math

import factory

from apps.bench.models import BenchmarkRun, Planificador
from apps.bench.services import RunMetrics, SeriesSample


def _series(best_cost, states):
    return (
        SeriesSample(0.0, math.inf, 1, False),
        SeriesSample(1.0, best_cost, states, best_cost == 0.0),
    )


class RunMetricsFactory(factory.Factory):
    """Corrida con dos muestras: sin costo en t = 0 y ``best_cost`` en t = 1"""

    class Meta:
        model = RunMetrics

    class Params:
        best_cost = 0.0
        states = 10

    planner = Planificador.LG.value
    scenario = 'demo'
    run = factory.Sequence(lambda n: n)
    seed = factory.LazyAttribute(lambda o: 100 + o.run)
    series = factory.LazyAttribute(lambda o: _series(o.best_cost, o.states))
    satisfied = factory.LazyAttribute(lambda o: o.best_cost == 0.0)
    sound = factory.LazyAttribute(lambda o: True if o.best_cost == 0.0 else None)
    iterations = 2000


class BenchmarkRunFactory(factory.django.DjangoModelFactory):
    """Corrida guardada"""

    class Meta:
        model = BenchmarkRun

    scenario = 'exp1'
    planner = Planificador.BASELINE
    run = factory.Sequence(lambda n: n)
    seed = factory.SelfAttribute('run')
    satisfied = False
    sound = None
    best_cost = 1.5
    states = 500
    iterations = 10000
    wall_s = 5.0
    series = factory.LazyFunction(lambda: [[0.0, None, 1, False], [5.0, 1.5, 500, False]])
