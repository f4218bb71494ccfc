"""
Criterios de aceptación a escala de escritorio.

Tardan horas; solo corren con PLANNER_RUN_ACCEPTANCE=True en el entorno.
"""
import os
import statistics

import pytest
from django.conf import settings

from apps.bench.services import BenchmarkConfig, run_benchmark
from apps.highlevel.services import solve
from apps.kinoplanner.audit import audit_tree
from apps.kinoplanner.services import PLANNER_BASELINE, PLANNER_LG
from apps.world.geometry import polyline_self_intersects
from apps.world.scenario import resolve_scenario

pytestmark = [
    pytest.mark.acceptance,
    pytest.mark.slow,
    pytest.mark.skipif(not settings.PLANNER_RUN_ACCEPTANCE, reason="PLANNER_RUN_ACCEPTANCE desactivado"),
]

WORKERS = max(1, (os.cpu_count() or 2) - 1)


def benchmark(tmp_path, scenario, runs, budget, planners=(PLANNER_LG, PLANNER_BASELINE)):
    config = BenchmarkConfig(scenarios=(scenario,), planners=planners, runs=runs, time_budget=budget,
                             output_dir=tmp_path, workers=WORKERS)
    results = run_benchmark(config, write=False)
    return {planner: [r for r in results if r.planner == planner] for planner in planners}


def rate(runs):
    return sum(r.satisfied for r in runs) / len(runs)


def first_solution_time(run):
    return next((s.wall_s for s in run.series if s.satisfied), None)


class TestAcceptance:
    """Test tasas de éxito, esfuerzo y verificación de soluciones"""

    def test_two_goals_both_planners(self, tmp_path):
        """Test exp1: ambos planificadores en al menos 90% de corridas"""
        runs = benchmark(tmp_path, 'exp1', runs=20, budget=60.0)
        assert rate(runs[PLANNER_LG]) >= 0.9
        assert rate(runs[PLANNER_BASELINE]) >= 0.9
        assert all(r.sound for group in runs.values() for r in group if r.satisfied)

    def test_windows_with_obstacle(self, tmp_path):
        """Test exp2: la guía resuelve y explora mucho menos"""
        runs = benchmark(tmp_path, 'exp2', runs=20, budget=60.0)
        assert rate(runs[PLANNER_LG]) >= 0.8
        assert rate(runs[PLANNER_BASELINE]) <= 0.2
        lg_states = statistics.median(r.final_states for r in runs[PLANNER_LG])
        baseline_states = statistics.median(r.final_states for r in runs[PLANNER_BASELINE])
        assert lg_states * 5 <= baseline_states
        assert all(r.sound for r in runs[PLANNER_LG] if r.satisfied)

    def test_crossing_orders(self, tmp_path):
        """Test exp3: éxito de la guía y primera solución antes que un baseline fallido"""
        runs = benchmark(tmp_path, 'exp3', runs=10, budget=180.0)
        assert rate(runs[PLANNER_LG]) >= 0.7
        assert all(r.sound for r in runs[PLANNER_LG] if r.satisfied)
        failed_baseline = [r.series[-1].wall_s for r in runs[PLANNER_BASELINE] if not r.satisfied]
        solved = [first_solution_time(r) for r in runs[PLANNER_LG] if r.satisfied]
        if failed_baseline:
            assert min(solved) < max(failed_baseline)

    def test_crossing_order_trajectory_self_intersects(self):
        """Test exp3: la trayectoria ganadora se cruza a sí misma"""
        scenario = resolve_scenario('exp3')
        report = solve(scenario, seed=0, budget=180.0)
        assert report.winner is not None
        points = [point.state[:2] for point in report.winning_attempt.result.trajectory]
        assert polyline_self_intersects(points)

    @pytest.mark.parametrize('seed', range(5))
    def test_guided_trees_pass_audit(self, seed):
        """Test árboles lg sin violaciones en exp2"""
        scenario = resolve_scenario('exp2')
        report = solve(scenario, seed=seed, budget=30.0, deterministic=True, debug=True)
        for attempt in report.attempts:
            if attempt.result is None:
                continue
            assert audit_tree(attempt.result.snapshot, scenario, attempt.lead) == []
