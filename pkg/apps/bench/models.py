"""
Modelos para corridas de benchmark
"""
import math
import uuid

from django.db import models


class Planificador(models.TextChoices):
    """Planificadores comparados"""
    LG = 'lg', 'LG-SST-STL'
    BASELINE = 'baseline', 'SST-STL'


class BenchmarkRun(models.Model):
    """
    Resultado de una corrida sembrada de un planificador sobre un escenario
    """
    id = models.UUIDField(primary_key=True, default=uuid.uuid4, editable=False)

    scenario = models.CharField(max_length=100, verbose_name="Escenario", db_index=True)
    planner = models.CharField(max_length=20, choices=Planificador.choices, verbose_name="Planificador")
    run = models.PositiveIntegerField(verbose_name="Corrida")
    seed = models.BigIntegerField(verbose_name="Semilla")

    satisfied = models.BooleanField(default=False, verbose_name="Satisfecha")
    sound = models.BooleanField(null=True, blank=True, verbose_name="Verificada")
    best_cost = models.FloatField(
        null=True,
        blank=True,
        verbose_name="Mejor Costo",
        help_text="Vacío cuando la corrida no tuvo nodos completos"
    )
    states = models.PositiveIntegerField(default=0, verbose_name="Estados")
    iterations = models.PositiveIntegerField(default=0, verbose_name="Iteraciones")
    wall_s = models.FloatField(default=0.0, verbose_name="Tiempo (s)")
    deterministic = models.BooleanField(default=False, verbose_name="Reloj Determinista")

    series = models.JSONField(
        default=list,
        blank=True,
        verbose_name="Serie",
        help_text="Muestras [wall_s, best_cost, states, satisfied]"
    )

    created_at = models.DateTimeField(auto_now_add=True, verbose_name="Fecha de Creación")

    class Meta:
        verbose_name = "Corrida de Benchmark"
        verbose_name_plural = "Corridas de Benchmark"
        ordering = ['-created_at', 'scenario', 'planner', 'run']
        indexes = [
            models.Index(fields=['scenario', 'planner']),
        ]

    def __str__(self):
        return f"{self.scenario}/{self.planner} #{self.run} (semilla {self.seed})"

    @classmethod
    def from_metrics(cls, metrics) -> 'BenchmarkRun':
        """Construye (sin guardar) una corrida a partir de RunMetrics."""
        cost = metrics.final_best_cost
        last = metrics.series[-1] if metrics.series else None
        return cls(
            scenario=metrics.scenario,
            planner=metrics.planner,
            run=metrics.run,
            seed=metrics.seed,
            satisfied=metrics.satisfied,
            sound=metrics.sound,
            best_cost=cost if math.isfinite(cost) else None,
            states=metrics.final_states,
            iterations=metrics.iterations,
            wall_s=last.wall_s if last else 0.0,
            deterministic=metrics.deterministic,
            series=[
                [s.wall_s, s.best_cost if math.isfinite(s.best_cost) else None, s.states, s.satisfied]
                for s in metrics.series
            ],
        )
