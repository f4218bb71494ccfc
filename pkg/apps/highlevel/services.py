"""
Orquestación: órdenes candidatos, camino guía y planificador por orden.

El orden k usa la semilla ``seed + k`` (flujo de guía para el RRT* y flujo
de planificador para el SST). Cada orden recibe el tiempo restante dividido
entre los órdenes pendientes, de modo que el tiempo no usado pasa al
siguiente.
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, replace
from multiprocessing import Pool
from typing import List, Optional, Tuple

from apps.core.exceptions import NoPathError
from apps.core.seeding import STREAM_PLANNER, make_rng
from apps.geolead.services import LeadPath, build_lead
from apps.kinoplanner.services import PLANNER_BASELINE, PLANNER_LG, PlanResult, baseline_sst_stl, lg_sst_stl
from apps.monitor.services import MonitorTemplate
from apps.taskplan.services import PlanOrder, candidate_plans

logger = logging.getLogger(__name__)

PLANNERS = (PLANNER_LG, PLANNER_BASELINE)


@dataclass(frozen=True)
class OrderAttempt:
    index: int
    order: PlanOrder
    budget: float
    lead_error: Optional[str] = None
    result: Optional[PlanResult] = None
    lead: Optional[LeadPath] = None

    @property
    def satisfied(self) -> bool:
        return self.result is not None and self.result.satisfied


@dataclass(frozen=True)
class SolveReport:
    scenario: str
    planner: str
    seed: int
    candidate_count: int
    attempts: Tuple[OrderAttempt, ...]
    winner: Optional[int]
    total_wall_s: float

    @property
    def winning_attempt(self) -> Optional[OrderAttempt]:
        if self.winner is None:
            return None
        return next(a for a in self.attempts if a.index == self.winner)

    @property
    def states(self) -> int:
        return sum(a.result.states for a in self.attempts if a.result is not None)


def _attempt_order(args) -> OrderAttempt:
    """Guía y planificador para un orden; también se ejecuta en procesos del pool."""
    scenario, template, index, order, seed, budget, deterministic, anytime, debug, parallel_leads = args
    try:
        lead = build_lead(order, scenario.fragment, scenario.workspace, scenario.start,
                          seed + index, scenario.lead, parallel=parallel_leads)
    except NoPathError as exc:
        logger.warning(f"Orden {index} {tuple(order)} descartado: {exc.message}",
                       extra={'error_code': exc.error_code.value, 'details': exc.details})
        return OrderAttempt(index, tuple(order), budget, lead_error=exc.message)
    params = scenario.planner.with_budget(budget)
    if not anytime:
        params = replace(params, anytime=False)
    result = lg_sst_stl(scenario, lead, template, params, make_rng(seed + index, STREAM_PLANNER),
                        deterministic=deterministic, debug=debug)
    return OrderAttempt(index, tuple(order), budget, result=result, lead=lead)


def solve(scenario, seed: Optional[int] = None, budget: Optional[float] = None,
          planner: str = PLANNER_LG, deterministic: bool = False, anytime: bool = True,
          concurrent: bool = False, workers: Optional[int] = None, debug: bool = False,
          parallel_leads: bool = False) -> SolveReport:
    """
    Recorre los órdenes candidatos hasta el primero satisfecho.

    Args:
        scenario: Escenario validado
        seed: Semilla base (por defecto la del escenario)
        budget: Presupuesto total en segundos (por defecto el del escenario)
        planner: 'lg' o 'baseline' (una sola corrida sin guía)
        deterministic: Reloj de iteraciones
        anytime: False detiene cada corrida en su primera solución
        concurrent: Intentar todos los órdenes en un pool de procesos
        workers: Tamaño del pool
        debug: Conservar el árbol de cada corrida
        parallel_leads: Tramos de la guía en hilos

    Returns:
        SolveReport: intentos, ganador (si hay) y tiempo total
    """
    started = time.perf_counter()
    seed = scenario.seed if seed is None else int(seed)
    total = float(budget if budget is not None else scenario.planner.time_budget)
    template = MonitorTemplate(scenario.formula)

    if planner == PLANNER_BASELINE:
        params = scenario.planner.with_budget(total)
        if not anytime:
            params = replace(params, anytime=False)
        result = baseline_sst_stl(scenario, template, params, make_rng(seed, STREAM_PLANNER),
                                  deterministic=deterministic, debug=debug)
        attempt = OrderAttempt(0, (), total, result=result)
        return SolveReport(scenario.name, planner, seed, 1, (attempt,),
                           0 if result.satisfied else None, time.perf_counter() - started)

    plans = candidate_plans(scenario.fragment)
    count = len(plans)
    logger.info(f"{scenario.name}: {count} órdenes candidatos, presupuesto {total:g} s")
    attempts: List[OrderAttempt] = []
    winner = None

    if concurrent:
        share = total / count
        jobs = [(scenario, template, k, order, seed, share, deterministic, anytime, debug, parallel_leads)
                for k, order in enumerate(plans)]
        with Pool(processes=workers) as pool:
            attempts = pool.map(_attempt_order, jobs)
        winner = next((a.index for a in attempts if a.satisfied), None)
    else:
        remaining = total
        for k, order in enumerate(plans):
            share = remaining / (count - k)
            if share <= 0.0:
                logger.info(f"{scenario.name}: presupuesto agotado antes del orden {k}")
                break
            lead_started = time.perf_counter()
            attempt = _attempt_order(
                (scenario, template, k, order, seed, share, deterministic, anytime, debug, parallel_leads)
            )
            attempts.append(attempt)
            if attempt.result is not None:
                spent = attempt.result.elapsed
                if not deterministic:
                    spent = time.perf_counter() - lead_started
                remaining = max(0.0, remaining - spent)
                logger.info(
                    f"Orden {k} {tuple(order)}: satisfecha={attempt.satisfied}, "
                    f"costo {attempt.result.best_cost:g}, {attempt.result.states} estados"
                )
            if attempt.satisfied:
                winner = k
                break

    report = SolveReport(scenario.name, planner, seed, count, tuple(attempts), winner,
                         time.perf_counter() - started)
    logger.info(f"{scenario.name}: ganador={winner}, {report.total_wall_s:.2f} s")
    return report


def describe_report(report: SolveReport) -> str:
    """Resumen del reporte para la CLI."""
    lines = [
        f"Escenario {report.scenario} | planificador {report.planner} | semilla {report.seed}",
        f"Órdenes candidatos: {report.candidate_count}",
    ]
    for a in report.attempts:
        label = f"  [{a.index}] {a.order if a.order else '-'} presupuesto {a.budget:.2f} s: "
        if a.lead_error:
            lines.append(label + f"sin guía ({a.lead_error})")
            continue
        r = a.result
        lines.append(
            label + f"{'SATISFECHA' if r.satisfied else 'no satisfecha'}, costo {r.best_cost:g}, "
            f"{r.states} estados, {r.iterations} iteraciones"
        )
    if report.winner is None:
        lines.append("Sin solución")
    else:
        win = report.winning_attempt.result
        lines.append(
            f"Ganador: orden {report.winner}, robustez {win.robustness:g}, "
            f"duración {win.trajectory[-1].t:.2f} s"
        )
    lines.append(f"Tiempo total: {report.total_wall_s:.2f} s")
    return '\n'.join(lines)
