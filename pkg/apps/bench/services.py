"""
Benchmark: corridas sembradas de ambos planificadores, métricas de costo en
el tiempo y exportación a CSV y JSON.

La corrida i usa la semilla ``base_seed + i``. Las corridas lg ejecutan el
flujo completo de resolución (órdenes, guías y presupuesto por orden); sus
series se concatenan desplazando el tiempo de cada orden.
"""
from __future__ import annotations

import csv
import json
import logging
import math
from dataclasses import asdict, dataclass, field, replace
from multiprocessing import Pool
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import yaml
from django.conf import settings

from apps.core.exceptions import ErrorCode, PlanningError, ValidationError
from apps.highlevel.services import PLANNERS, solve
from apps.kinoplanner.services import check_soundness
from apps.world.scenario import resolve_scenario

logger = logging.getLogger(__name__)

CSV_COLUMNS = ('run', 'seed', 'wall_s', 'best_cost', 'states', 'satisfied')
SUMMARY_SCHEMA = 1


def _defaults() -> Dict:
    return dict(getattr(settings, 'BENCHMARK_DEFAULTS', {}))


def default_output_dir() -> Path:
    return Path(getattr(settings, 'PLANNER_OUTPUT_DIR', 'results'))


@dataclass(frozen=True)
class BenchmarkConfig:
    """Configuración de un benchmark (ver configs/desk_scale.yaml)."""

    scenarios: Tuple[str, ...]
    planners: Tuple[str, ...] = PLANNERS
    runs: int = 20
    time_budget: float = 60.0
    sample_period: float = 1.0
    output_dir: Path = field(default_factory=default_output_dir)
    base_seed: int = 0
    workers: int = 1
    deterministic: bool = False

    def __post_init__(self):
        if not self.scenarios:
            raise ValidationError(ErrorCode.BENCHMARK_CONFIG_INVALID, "Se requiere al menos un escenario")
        unknown = [p for p in self.planners if p not in PLANNERS]
        if unknown or not self.planners:
            raise ValidationError(
                ErrorCode.BENCHMARK_CONFIG_INVALID,
                f"Planificadores desconocidos: {unknown} (válidos: {list(PLANNERS)})",
            )
        if self.runs < 1:
            raise ValidationError(ErrorCode.BENCHMARK_CONFIG_INVALID, f"runs debe ser >= 1 (se recibió {self.runs})")
        if not self.time_budget > 0 or not self.sample_period > 0:
            raise ValidationError(ErrorCode.BENCHMARK_CONFIG_INVALID, "time_budget y sample_period deben ser positivos")
        if self.workers < 1:
            raise ValidationError(ErrorCode.BENCHMARK_CONFIG_INVALID, "workers debe ser >= 1")
        object.__setattr__(self, 'output_dir', Path(self.output_dir))

    @classmethod
    def from_dict(cls, data: Dict, base_dir: Optional[Path] = None) -> 'BenchmarkConfig':
        if not isinstance(data, dict):
            raise ValidationError(ErrorCode.BENCHMARK_CONFIG_INVALID, "La configuración debe ser un mapa")
        defaults = _defaults()
        known = {'scenarios', 'planners', 'runs', 'time_budget', 'sample_period',
                 'output_dir', 'base_seed', 'workers', 'deterministic'}
        extra = set(data) - known - {'schema'}
        if extra:
            raise ValidationError(ErrorCode.BENCHMARK_CONFIG_INVALID, f"Campos desconocidos: {sorted(extra)}")
        scenarios = data.get('scenarios') or []
        if base_dir is not None:
            # rutas relativas al archivo de configuración; los nombres sueltos son escenarios incluidos
            scenarios = [
                str(base_dir / s) if (base_dir / s).is_file() else s
                for s in scenarios
            ]
        try:
            return cls(
                scenarios=tuple(str(s) for s in scenarios),
                planners=tuple(data.get('planners') or PLANNERS),
                runs=int(data.get('runs', defaults.get('runs', 20))),
                time_budget=float(data.get('time_budget', defaults.get('time_budget', 60.0))),
                sample_period=float(data.get('sample_period', defaults.get('sample_period', 1.0))),
                output_dir=Path(data['output_dir']) if data.get('output_dir') else default_output_dir(),
                base_seed=int(data.get('base_seed', defaults.get('base_seed', 0))),
                workers=int(data.get('workers', defaults.get('workers', 1))),
                deterministic=bool(data.get('deterministic', False)),
            )
        except (TypeError, ValueError) as exc:
            raise ValidationError(ErrorCode.BENCHMARK_CONFIG_INVALID, f"Valor inválido: {exc}") from exc

    @classmethod
    def load(cls, path: Union[str, Path]) -> 'BenchmarkConfig':
        path = Path(path)
        if not path.is_file():
            raise ValidationError(ErrorCode.BENCHMARK_CONFIG_INVALID, f"No existe el archivo {path}")
        try:
            data = yaml.safe_load(path.read_text(encoding='utf-8'))
        except yaml.YAMLError as exc:
            raise ValidationError(ErrorCode.BENCHMARK_CONFIG_INVALID, f"YAML inválido: {exc}") from exc
        return cls.from_dict(data, base_dir=path.parent)

    def full_scale(self) -> 'BenchmarkConfig':
        defaults = _defaults()
        return replace(self, runs=int(defaults.get('full_runs', 60)),
                       time_budget=float(defaults.get('full_time_budget', 300.0)))

    def run_specs(self) -> List[Dict]:
        """Especificaciones de corrida como diccionarios planos (serializables para Celery)."""
        return [
            {
                'scenario': scenario,
                'planner': planner,
                'run': i,
                'seed': self.base_seed + i,
                'time_budget': self.time_budget,
                'deterministic': self.deterministic,
            }
            for scenario in self.scenarios
            for planner in self.planners
            for i in range(self.runs)
        ]


@dataclass(frozen=True)
class SeriesSample:
    wall_s: float
    best_cost: float
    states: int
    satisfied: bool


@dataclass(frozen=True)
class RunMetrics:
    """Serie de una corrida: costo no creciente y estados no decrecientes."""

    planner: str
    scenario: str
    run: int
    seed: int
    series: Tuple[SeriesSample, ...]
    satisfied: bool
    sound: Optional[bool] = None
    iterations: int = 0
    deterministic: bool = False

    @property
    def final_best_cost(self) -> float:
        return self.series[-1].best_cost if self.series else math.inf

    @property
    def final_states(self) -> int:
        return self.series[-1].states if self.series else 0

    def cost_at(self, t: float) -> float:
        """Mejor costo registrado hasta t (función escalón)."""
        value = math.inf
        for sample in self.series:
            if sample.wall_s > t:
                break
            value = sample.best_cost
        return value

    def to_dict(self) -> Dict:
        data = asdict(self)
        data['series'] = [asdict(s) for s in self.series]
        return data

    @classmethod
    def from_dict(cls, data: Dict) -> 'RunMetrics':
        data = dict(data)
        data['series'] = tuple(SeriesSample(**s) for s in data['series'])
        return cls(**data)


def _series_from_attempts(attempts) -> Tuple[List[SeriesSample], int]:
    """Concatena las series de los órdenes con desplazamiento de tiempo y de estados."""
    series: List[SeriesSample] = []
    offset_t, offset_states, best, satisfied, iterations = 0.0, 0, math.inf, False, 0
    for attempt in attempts:
        result = attempt.result
        if result is None:
            continue
        for m in result.metrics:
            best = min(best, m.best_cost)
            satisfied = satisfied or m.satisfied
            series.append(SeriesSample(offset_t + m.elapsed, best, offset_states + m.states, satisfied))
        offset_t += result.elapsed
        offset_states += result.states
        iterations += result.iterations
    return series, iterations


def execute_run(spec: Dict) -> RunMetrics:
    """Ejecuta una corrida descrita por un diccionario de ``run_specs``."""
    scenario = resolve_scenario(spec['scenario'])
    report = solve(
        scenario,
        seed=spec['seed'],
        budget=spec['time_budget'],
        planner=spec['planner'],
        deterministic=spec['deterministic'],
    )
    series, iterations = _series_from_attempts(report.attempts)
    if not series:
        series = [SeriesSample(0.0, math.inf, 0, False)]
    satisfied = report.winner is not None
    sound = None
    if satisfied:
        soundness = check_soundness(report.winning_attempt.result.trajectory, scenario)
        sound = soundness.sound
        if not sound:
            logger.error(
                f"Corrida {spec['run']} de {scenario.name}/{spec['planner']}: solución no verificada",
                extra={'details': {'robustness': soundness.robustness, 'seed': spec['seed']}},
            )
    metrics = RunMetrics(
        planner=spec['planner'],
        scenario=scenario.name,
        run=spec['run'],
        seed=spec['seed'],
        series=tuple(series),
        satisfied=satisfied,
        sound=sound,
        iterations=iterations,
        deterministic=spec['deterministic'],
    )
    logger.info(
        f"Corrida {metrics.run} {metrics.scenario}/{metrics.planner} (semilla {metrics.seed}): "
        f"satisfecha={satisfied}, costo {metrics.final_best_cost:g}, {metrics.final_states} estados"
    )
    return metrics


def metrics_to_payload(metrics: RunMetrics) -> Dict:
    """RunMetrics como JSON estricto (inf -> None) para el transporte de Celery."""
    return _sanitize(metrics.to_dict())


def payload_to_metrics(data: Dict) -> RunMetrics:
    data = dict(data)
    data['series'] = [
        {**s, 'best_cost': math.inf if s['best_cost'] is None else s['best_cost']}
        for s in data['series']
    ]
    return RunMetrics.from_dict(data)


def _run_celery(specs: Sequence[Dict]) -> List[RunMetrics]:
    from celery import group

    from .tasks import ejecutar_corrida_benchmark

    job = group(ejecutar_corrida_benchmark.s(spec) for spec in specs)
    return [payload_to_metrics(data) for data in job.apply_async().get()]


def run_benchmark(config: BenchmarkConfig, backend: str = 'local', store: bool = False,
                  write: bool = True) -> List[RunMetrics]:
    """
    Ejecuta todas las corridas y escribe los resultados.

    Args:
        config: Configuración del benchmark
        backend: 'local' (pool de procesos) o 'celery'
        store: Guardar cada corrida en la base de datos
        write: Escribir CSV y JSON en ``config.output_dir``

    Returns:
        list: RunMetrics ordenadas por (escenario, planificador, corrida)
    """
    specs = config.run_specs()
    logger.info(
        f"Benchmark: {len(specs)} corridas ({len(config.scenarios)} escenarios x "
        f"{len(config.planners)} planificadores x {config.runs}), presupuesto {config.time_budget:g} s"
    )
    if backend == 'celery':
        results = _run_celery(specs)
    elif config.workers > 1:
        with Pool(processes=config.workers) as pool:
            results = pool.map(execute_run, specs)
    else:
        results = [execute_run(spec) for spec in specs]

    results.sort(key=lambda r: (r.scenario, r.planner, r.run))
    if write:
        write_results(config, results)
    if store:
        store_results(results)
    return results


# Exportación

def _format_float(value: float) -> str:
    if math.isinf(value):
        return 'inf' if value > 0 else '-inf'
    return '%.17g' % value


def _finite_or_none(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def _sanitize(data):
    if isinstance(data, dict):
        return {k: _sanitize(v) for k, v in data.items()}
    if isinstance(data, (list, tuple)):
        return [_sanitize(v) for v in data]
    if isinstance(data, (np.floating, float)):
        return _finite_or_none(float(data))
    if isinstance(data, np.integer):
        return int(data)
    return data


def group_results(results: Iterable[RunMetrics]) -> Dict[Tuple[str, str], List[RunMetrics]]:
    groups: Dict[Tuple[str, str], List[RunMetrics]] = {}
    for r in results:
        groups.setdefault((r.scenario, r.planner), []).append(r)
    return groups


def time_grid(time_budget: float, period: float) -> np.ndarray:
    steps = int(math.floor(time_budget / period + 1e-9))
    return np.arange(steps + 1) * period


def cost_curves(runs: Sequence[RunMetrics], grid: np.ndarray) -> Dict[str, List[float]]:
    """Media, mediana, mínimo y máximo del mejor costo sobre la grilla."""
    matrix = np.array([[r.cost_at(t) for t in grid] for r in runs], dtype=float)
    with np.errstate(invalid='ignore'):
        return {
            'time': grid.tolist(),
            'mean': matrix.mean(axis=0).tolist(),
            'median': np.median(matrix, axis=0).tolist(),
            'min': matrix.min(axis=0).tolist(),
            'max': matrix.max(axis=0).tolist(),
        }


def summarize(config: BenchmarkConfig, results: Sequence[RunMetrics]) -> Dict:
    grid = time_grid(config.time_budget, config.sample_period)
    summary = {
        'schema': SUMMARY_SCHEMA,
        'config': {
            'scenarios': list(config.scenarios),
            'planners': list(config.planners),
            'runs': config.runs,
            'time_budget': config.time_budget,
            'sample_period': config.sample_period,
            'base_seed': config.base_seed,
            'deterministic': config.deterministic,
        },
        'results': {},
        'soundness_violations': sum(1 for r in results if r.satisfied and r.sound is False),
    }
    for (scenario, planner), runs in sorted(group_results(results).items()):
        satisfied = sum(1 for r in runs if r.satisfied)
        summary['results'].setdefault(scenario, {})[planner] = {
            'runs': len(runs),
            'satisfied_runs': satisfied,
            'satisfaction_rate': satisfied / len(runs),
            'median_final_states': float(np.median([r.final_states for r in runs])),
            'median_final_best_cost': float(np.median([r.final_best_cost for r in runs])),
            'curves': cost_curves(runs, grid),
        }
    return summary


def csv_name(scenario: str, planner: str) -> str:
    return f"{scenario}__{planner}.csv"


def write_results(config: BenchmarkConfig, results: Sequence[RunMetrics]) -> List[Path]:
    """Un CSV por (escenario, planificador) y summary.json."""
    out = Path(config.output_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        written = []
        for (scenario, planner), runs in sorted(group_results(results).items()):
            path = out / csv_name(scenario, planner)
            with path.open('w', newline='', encoding='utf-8') as handle:
                writer = csv.writer(handle, lineterminator='\n')
                writer.writerow(CSV_COLUMNS)
                for r in runs:
                    for s in r.series:
                        writer.writerow([
                            r.run, r.seed, _format_float(s.wall_s), _format_float(s.best_cost),
                            s.states, int(s.satisfied),
                        ])
            written.append(path)
        summary_path = out / 'summary.json'
        summary_path.write_text(
            json.dumps(_sanitize(summarize(config, results)), sort_keys=True, indent=2, allow_nan=False) + '\n',
            encoding='utf-8',
        )
        written.append(summary_path)
    except OSError as exc:
        raise PlanningError(ErrorCode.OUTPUT_IO, f"No se pudo escribir en {out}: {exc}") from exc
    logger.info(f"Resultados escritos en {out}")
    return written


def read_results_csv(path: Union[str, Path], scenario: str, planner: str) -> List[RunMetrics]:
    """Reconstruye las RunMetrics de un CSV del benchmark (para graficar)."""
    rows: Dict[Tuple[int, int], List[SeriesSample]] = {}
    with Path(path).open(newline='', encoding='utf-8') as handle:
        reader = csv.DictReader(handle)
        if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
            raise ValidationError(ErrorCode.FILE_FORMAT_INVALID, f"Columnas inesperadas en {path}")
        for row in reader:
            key = (int(row['run']), int(row['seed']))
            rows.setdefault(key, []).append(SeriesSample(
                float(row['wall_s']), float(row['best_cost']), int(row['states']), row['satisfied'] == '1',
            ))
    return [
        RunMetrics(planner, scenario, run, seed, tuple(series), series[-1].satisfied)
        for (run, seed), series in sorted(rows.items())
    ]


def store_results(results: Sequence[RunMetrics]):
    """Persiste cada corrida como BenchmarkRun."""
    from .models import BenchmarkRun

    objects = [BenchmarkRun.from_metrics(r) for r in results]
    BenchmarkRun.objects.bulk_create(objects)
    logger.info(f"{len(objects)} corridas guardadas")
    return objects
