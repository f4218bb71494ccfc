"""Parámetros del RRT* del camino guía."""
from __future__ import annotations

from dataclasses import dataclass

from django.conf import settings

from apps.core.exceptions import ErrorCode, ValidationError


@dataclass(frozen=True)
class LeadParams:
    iterations: int = 5000
    goal_bias: float = 0.05
    step: float = 0.5
    sampler_attempts: int = 1000

    def __post_init__(self):
        if self.iterations < 1 or self.sampler_attempts < 1:
            raise ValidationError(ErrorCode.VALIDATION_ERROR, "lead: iterations y sampler_attempts deben ser >= 1")
        if not 0.0 <= self.goal_bias <= 1.0:
            raise ValidationError(ErrorCode.VALIDATION_ERROR, "lead: goal_bias debe estar en [0, 1]")
        if not self.step > 0:
            raise ValidationError(ErrorCode.VALIDATION_ERROR, "lead: step debe ser positivo")

    @classmethod
    def from_settings(cls, **overrides) -> 'LeadParams':
        values = dict(getattr(settings, 'LEAD_DEFAULTS', {}))
        values.update(overrides)
        return cls(**values)
