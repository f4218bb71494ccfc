"""
Modelo de dirección Ackermann y propagación numérica con RK4 de paso fijo.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Tuple

import numpy as np
from django.conf import settings

from apps.core.exceptions import ErrorCode, ValidationError

# Margen para no crear un subpaso residual por redondeo de duration / dt
STEP_ROUNDING = 1e-6


class CarState(NamedTuple):
    x: float
    y: float
    theta: float


class CarControl(NamedTuple):
    v: float
    delta: float


def normalize_angle(theta: float) -> float:
    """Ángulo en (-pi, pi]."""
    wrapped = math.remainder(theta, 2.0 * math.pi)
    return math.pi if wrapped <= -math.pi else wrapped


@dataclass(frozen=True)
class DynamicsParams:
    """Parámetros del vehículo: distancia entre ejes y límites de control."""

    wheelbase: float = 0.3
    v_min: float = 0.0
    v_max: float = 2.0
    delta_max: float = 0.5

    def __post_init__(self):
        if not self.wheelbase > 0:
            raise ValidationError(ErrorCode.CONTROL_BOUNDS_INVALID, "wheelbase debe ser positivo")
        if self.v_min > self.v_max:
            raise ValidationError(
                ErrorCode.CONTROL_BOUNDS_INVALID,
                f"v_min ({self.v_min}) mayor que v_max ({self.v_max})",
            )
        if not 0 <= self.delta_max < math.pi / 2:
            raise ValidationError(
                ErrorCode.CONTROL_BOUNDS_INVALID,
                f"delta_max debe estar en [0, pi/2) (se recibió {self.delta_max})",
            )

    @classmethod
    def from_settings(cls, **overrides) -> 'DynamicsParams':
        values = dict(getattr(settings, 'DYNAMICS_DEFAULTS', {}))
        values.update(overrides)
        return cls(**values)

    def contains(self, u: CarControl) -> bool:
        return self.v_min <= u.v <= self.v_max and abs(u.delta) <= self.delta_max


@dataclass(frozen=True)
class PropagationResult:
    """Subpasos del integrador, incluido el estado inicial en t=0."""

    times: Tuple[float, ...]
    states: Tuple[CarState, ...]

    def __len__(self) -> int:
        return len(self.times)

    @property
    def final(self) -> CarState:
        return self.states[-1]

    @property
    def duration(self) -> float:
        return self.times[-1]

    def positions(self) -> np.ndarray:
        return np.array([(s.x, s.y) for s in self.states], dtype=float)


def derivative(state: CarState, u: CarControl, wheelbase: float) -> Tuple[float, float, float]:
    """Lado derecho del modelo: (v cos th, v sin th, v tan(delta) / L)."""
    theta = state[2]
    return (
        u.v * math.cos(theta),
        u.v * math.sin(theta),
        u.v * math.tan(u.delta) / wheelbase,
    )


def _rk4_step(state: CarState, u: CarControl, h: float, wheelbase: float) -> CarState:
    x, y, th = state
    k1 = derivative((x, y, th), u, wheelbase)
    k2 = derivative((x + 0.5 * h * k1[0], y + 0.5 * h * k1[1], th + 0.5 * h * k1[2]), u, wheelbase)
    k3 = derivative((x + 0.5 * h * k2[0], y + 0.5 * h * k2[1], th + 0.5 * h * k2[2]), u, wheelbase)
    k4 = derivative((x + h * k3[0], y + h * k3[1], th + h * k3[2]), u, wheelbase)
    return CarState(
        x + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        y + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        normalize_angle(th + h / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2])),
    )


def substep_times(duration: float, dt: float) -> Tuple[float, ...]:
    """Instantes k*dt; el último coincide con duration (puede ser un paso más corto)."""
    if duration <= 0.0:
        return (0.0,)
    steps = max(1, math.ceil(duration / dt - STEP_ROUNDING))
    return tuple(k * dt for k in range(steps)) + (float(duration),)


def propagate(state: CarState, u: CarControl, duration: float, dt: float,
              wheelbase: float) -> PropagationResult:
    """
    Integra el modelo bajo control constante durante ``duration`` segundos.

    Args:
        state: Estado inicial
        u: Control constante
        duration: Duración total (>= 0)
        dt: Paso del integrador
        wheelbase: Distancia entre ejes L

    Returns:
        PropagationResult: subpasos incluido el inicial y el final
    """
    if duration < 0 or not dt > 0:
        raise ValidationError(
            ErrorCode.VALIDATION_ERROR,
            f"Propagación inválida: duration={duration}, dt={dt}",
        )
    times = substep_times(duration, dt)
    current = CarState(float(state[0]), float(state[1]), normalize_angle(float(state[2])))
    states = [current]
    for previous, t in zip(times, times[1:]):
        current = _rk4_step(current, u, t - previous, wheelbase)
        states.append(current)
    return PropagationResult(times, tuple(states))


def sample_control(rng: np.random.Generator, params: DynamicsParams) -> CarControl:
    """Control uniforme sobre [v_min, v_max] x [-delta_max, delta_max]."""
    v = float(rng.uniform(params.v_min, params.v_max))
    delta = float(rng.uniform(-params.delta_max, params.delta_max))
    return CarControl(v, delta)


def sample_duration(rng: np.random.Generator, t_max: float) -> float:
    """Duración uniforme en [0, t_max]."""
    return float(rng.uniform(0.0, t_max))
