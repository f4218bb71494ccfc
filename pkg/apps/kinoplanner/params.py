"""
Parámetros del planificador cinodinámico.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, replace

from django.conf import settings

from apps.core.exceptions import ErrorCode, ValidationError

logger = logging.getLogger(__name__)

_POSITIVE = ('s_r', 'r_prop', 't_max', 'n_max', 'time_budget', 'dt',
             'delta_v', 'delta_s', 'goal_epsilon', 'metric_period')


@dataclass(frozen=True)
class PlannerParams:
    """
    Radios, presupuestos y opciones de una corrida.

    theta_weight escala theta en la métrica (x, y, w*theta) de selección y
    de testigos. Con time_weight > 0 la métrica suma la coordenada w_t*t y
    las muestras llevan un instante en [0, horizonte]: nodos en el mismo
    lugar pero en instantes lejanos dejan de competir por un testigo.
    """

    s_r: float = 1.0
    r_prop: float = 1.5
    t_max: float = 1.0
    n_max: int = 1_000_000
    time_budget: float = 60.0
    dt: float = 0.05
    delta_v: float = 0.5
    delta_s: float = 0.25
    goal_epsilon: float = 0.3
    theta_weight: float = 0.3
    time_weight: float = 0.0
    metric_period: int = 1000
    layer_restricted_selection: bool = True
    anytime: bool = True

    def __post_init__(self):
        for name in _POSITIVE:
            if not getattr(self, name) > 0:
                raise ValidationError(
                    ErrorCode.PLANNER_PARAMS_INVALID,
                    f"planner.{name} debe ser positivo (se recibió {getattr(self, name)})",
                    {'field': f'planner.{name}'},
                )
        if self.theta_weight < 0:
            raise ValidationError(ErrorCode.PLANNER_PARAMS_INVALID, "planner.theta_weight no puede ser negativo")
        if self.time_weight < 0:
            raise ValidationError(ErrorCode.PLANNER_PARAMS_INVALID, "planner.time_weight no puede ser negativo")
        if not self.delta_s < self.delta_v:
            raise ValidationError(
                ErrorCode.PLANNER_PARAMS_INVALID,
                f"planner.delta_s ({self.delta_s}) debe ser menor que delta_v ({self.delta_v})",
                {'field': 'planner.delta_s'},
            )
        if self.r_prop < self.s_r:
            logger.warning(
                f"r_prop ({self.r_prop}) menor que s_r ({self.s_r}): "
                "parte de las muestras quedará fuera del radio de propagación"
            )

    @classmethod
    def from_settings(cls, **overrides) -> 'PlannerParams':
        values = dict(getattr(settings, 'PLANNER_DEFAULTS', {}))
        values.update(overrides)
        return cls(**values)

    def with_budget(self, seconds: float) -> 'PlannerParams':
        return replace(self, time_budget=seconds)
