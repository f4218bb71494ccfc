"""
Planificador cinodinámico SST con costo STL, guiado por capas (lg) o
con muestreo uniforme (baseline).

Cada iteración muestrea un punto, elige un nodo por BestNear, propaga un
control aleatorio y, si la propagación pasa las compuertas, pliega la
anotación del monitor en cada subpaso y aplica la regla de testigos SST.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from apps.core.exceptions import ErrorCode, EvaluationError, SamplerExhaustedError, ValidationError
from apps.dynamics.services import (
    CarControl,
    CarState,
    DynamicsParams,
    propagate,
    sample_control,
    sample_duration,
)
from apps.geolead.services import LeadPath, dist_to_lead, layer_assign, sample_near_layer
from apps.monitor.services import (
    MonitorTemplate,
    annotate_child,
    annotate_root,
    is_complete,
    is_satisfied,
    node_cost,
)
from apps.stl.semantics import Trace, boolean_sat, robustness

from .clock import make_clock
from .params import PlannerParams
from .tree import SearchTree, TreeNode

logger = logging.getLogger(__name__)

PLANNER_LG = 'lg'
PLANNER_BASELINE = 'baseline'

TRAJECTORY_SCHEMA = 1
TRAJECTORY_HEADER = (
    f"# trajectory schema: {TRAJECTORY_SCHEMA}\n"
    "# columns: t x y theta v delta (s, m, m, rad, m/s, rad)\n"
    "# (v, delta) se aplica en [t_k, t_k+1); la última fila lleva 0 0\n"
)

STOP_CONTROL = CarControl(0.0, 0.0)


@dataclass(frozen=True)
class TrajectoryPoint:
    """Estado en t y control aplicado durante ``duration`` segundos a partir de t."""

    t: float
    state: CarState
    control: CarControl
    duration: float = 0.0


Trajectory = Tuple[TrajectoryPoint, ...]


@dataclass(frozen=True)
class MetricSample:
    iteration: int
    elapsed: float
    best_cost: float
    states: int
    satisfied: bool


@dataclass(frozen=True)
class NodeRecord:
    """Copia inmutable de un nodo para auditoría y volcado."""

    index: int
    parent: int
    state: CarState
    t: float
    control: Optional[CarControl]
    duration: float
    layer: int
    cost: float
    active: bool
    removed: bool
    witness: int


@dataclass(frozen=True)
class WitnessRecord:
    partition: int
    identifier: int
    location: Tuple[float, ...]
    representative: int


@dataclass(frozen=True)
class TreeSnapshot:
    planner: str
    nodes: Tuple[NodeRecord, ...]
    witnesses: Tuple[WitnessRecord, ...]

    def to_dict(self) -> dict:
        return {
            'schema': 1,
            'planner': self.planner,
            'nodes': [
                {
                    'index': n.index,
                    'parent': n.parent,
                    'state': [float(v) for v in n.state],
                    't': float(n.t),
                    'control': [float(v) for v in n.control] if n.control else None,
                    'duration': float(n.duration),
                    'layer': n.layer,
                    'cost': float(n.cost),
                    'active': n.active,
                    'removed': n.removed,
                    'witness': n.witness,
                }
                for n in self.nodes
            ],
            'witnesses': [
                {
                    'partition': w.partition,
                    'id': w.identifier,
                    'location': list(w.location),
                    'representative': w.representative,
                }
                for w in self.witnesses
            ],
        }


@dataclass(frozen=True)
class PlanResult:
    """
    Resultado de una corrida: mejor trayectoria, robustez plegada y serie de
    métricas. ``states`` es el número de nodos aceptados en el grafo.
    """

    planner: str
    trajectory: Trajectory
    robustness: Optional[float]
    cost: float
    satisfied: bool
    metrics: Tuple[MetricSample, ...]
    states: int
    iterations: int
    elapsed: float
    first_solution_iteration: Optional[int] = None
    snapshot: Optional[TreeSnapshot] = None

    @property
    def best_cost(self) -> float:
        return self.metrics[-1].best_cost if self.metrics else math.inf


def reconstruct(node: TreeNode) -> Trajectory:
    """Trayectoria raíz-nodo; el control de cada punto es el del tramo siguiente."""
    chain: List[TreeNode] = []
    while node is not None:
        chain.append(node)
        node = node.parent
    chain.reverse()
    points = []
    for k, current in enumerate(chain):
        if k + 1 < len(chain):
            control, duration = chain[k + 1].control, chain[k + 1].duration
        else:
            control, duration = STOP_CONTROL, 0.0
        points.append(TrajectoryPoint(current.t, current.state, control, duration))
    return tuple(points)


class _SSTPlanner:
    """Una corrida del planificador; muta su árbol en el lugar."""

    def __init__(self, scenario, template: MonitorTemplate, params: PlannerParams,
                 rng: np.random.Generator, lead: Optional[LeadPath] = None,
                 deterministic: bool = False, debug: bool = False):
        self.scenario = scenario
        self.workspace = scenario.workspace
        self.dynamics: DynamicsParams = scenario.dynamics
        self.template = template
        self.params = params
        self.rng = rng
        self.lead = lead
        self.guided = lead is not None
        self.clock = make_clock(deterministic)
        self.debug = debug
        self.name = PLANNER_LG if self.guided else PLANNER_BASELINE
        self.tree = SearchTree(params.theta_weight, params.delta_s, params.time_weight)
        self.horizon = scenario.fragment.horizon
        self.metrics: List[MetricSample] = []
        self.best: Optional[TreeNode] = None
        self.best_key = None
        self.best_cost = math.inf
        self.satisfied = False
        self.first_solution: Optional[int] = None
        self.iterations = 0
        self.attempts = scenario.lead.sampler_attempts

    # Criterios

    def _accepted(self, node: TreeNode) -> bool:
        if not is_satisfied(self.template, node.annotation):
            return False
        if node.is_root or not self.guided:
            return True
        if node.layer != self.lead.layer_count - 1:
            return False
        cx, cy = self.lead.centers[-1]
        gap = math.hypot(node.state.x - cx, node.state.y - cy) - self.lead.radii[-1]
        return max(0.0, gap) <= self.params.goal_epsilon

    def _consider(self, node: TreeNode) -> bool:
        """Actualiza mejor nodo y mejor costo; True si alguna métrica mejoró."""
        accepted = self._accepted(node)
        complete = is_complete(node.annotation)
        improved = False
        if complete and node.cost < self.best_cost:
            self.best_cost = node.cost
            improved = True
        key = (0 if accepted else 1, 0 if complete else 1, node.cost, node.t)
        if self.best_key is None or key < self.best_key:
            self.best, self.best_key = node, key
        if accepted and not self.satisfied:
            self.satisfied = True
            self.first_solution = self.iterations
            improved = True
            logger.debug(f"{self.name}: primera solución en la iteración {self.iterations}")
        return improved

    def _sample(self):
        if self.guided:
            layer = int(self.rng.integers(self.lead.layer_count))
            x, y = sample_near_layer(self.lead, layer, self.params.s_r, self.workspace,
                                     self.rng, self.attempts)
        else:
            layer = 0
            x_min, x_max, y_min, y_max = self.workspace.bounds
            x, y = self.rng.uniform(x_min, x_max), self.rng.uniform(y_min, y_max)
        theta = self.rng.uniform(-math.pi, math.pi)
        point = [x, y, self.params.theta_weight * theta]
        if self.tree.dimension == 4:
            point.append(self.params.time_weight * self.rng.uniform(0.0, self.horizon))
        return layer, np.array(point)

    def _record(self):
        self.metrics.append(MetricSample(
            iteration=self.iterations,
            elapsed=self.clock.elapsed(self.iterations),
            best_cost=self.best_cost,
            states=self.tree.size,
            satisfied=self.satisfied,
        ))

    # Bucle principal

    def _root(self) -> TreeNode:
        start = self.scenario.start
        annotation = annotate_root(self.template, start, 0.0)
        layer = layer_assign(start[:2], self.lead) if self.guided else 0
        root = TreeNode(
            index=0, state=start, t=0.0, parent=None, control=None, duration=0.0,
            layer=layer, annotation=annotation, cost=node_cost(self.template, annotation),
        )
        return self.tree.insert_root(root, layer if self.guided else 0)

    def _extend(self) -> Optional[TreeNode]:
        try:
            target_layer, target = self._sample()
        except SamplerExhaustedError:
            logger.debug(f"{self.name}: muestreador agotado en la iteración {self.iterations}")
            return None

        if self.guided and self.params.layer_restricted_selection:
            candidates = self.tree.candidates(target_layer - 1, target_layer + 1)
        else:
            candidates = self.tree.candidates()
        near = self.tree.best_near(target, self.params.delta_v, candidates)
        if near is None:
            return None

        control = sample_control(self.rng, self.dynamics)
        duration = sample_duration(self.rng, self.params.t_max)
        if duration <= 0.0:
            return None
        motion = propagate(near.state, control, duration, self.params.dt, self.dynamics.wheelbase)
        if not self.workspace.path_free(motion.positions()):
            return None

        end = motion.final
        layer = 0
        if self.guided:
            if dist_to_lead(end[:2], self.lead) > self.params.r_prop:
                return None
            layer = layer_assign(end[:2], self.lead)
            if abs(layer - near.layer) > 1:
                return None

        annotation = near.annotation
        for sub_t, state in zip(motion.times[1:], motion.states[1:]):
            annotation = annotate_child(self.template, annotation, state, near.t + sub_t)
        child = TreeNode(
            index=-1, state=end, t=near.t + motion.duration, parent=near,
            control=control, duration=duration, layer=layer,
            annotation=annotation, cost=node_cost(self.template, annotation),
        )
        if not self.tree.try_insert(child, layer if self.guided else 0):
            return None
        return child

    def run(self) -> PlanResult:
        params = self.params
        root = self._root()
        self._consider(root)
        self._record()
        logger.info(
            f"{self.name}: inicio (presupuesto {params.time_budget:g} s, "
            f"reloj {'de iteraciones' if self.clock.deterministic else 'real'})"
        )

        while self.iterations < params.n_max:
            if self.satisfied and not params.anytime:
                break
            if self.clock.elapsed(self.iterations) >= params.time_budget:
                break
            self.iterations += 1
            child = self._extend()
            improved = child is not None and self._consider(child)
            if improved or self.iterations % params.metric_period == 0:
                self._record()

        if self.metrics[-1].iteration != self.iterations:
            self._record()
        best = self.best
        result = PlanResult(
            planner=self.name,
            trajectory=reconstruct(best),
            robustness=self.template.fold(best.annotation),
            cost=best.cost,
            satisfied=self.satisfied,
            metrics=tuple(self.metrics),
            states=self.tree.size,
            iterations=self.iterations,
            elapsed=self.clock.elapsed(self.iterations),
            first_solution_iteration=self.first_solution,
            snapshot=self.snapshot() if self.debug else None,
        )
        logger.info(
            f"{self.name}: fin tras {self.iterations} iteraciones, {result.states} estados, "
            f"mejor costo {self.best_cost:g}, satisfecha={self.satisfied}"
        )
        return result

    def snapshot(self) -> TreeSnapshot:
        nodes = tuple(
            NodeRecord(
                index=n.index,
                parent=n.parent.index if n.parent is not None else -1,
                state=n.state, t=n.t, control=n.control, duration=n.duration,
                layer=n.layer, cost=n.cost, active=n.active, removed=n.removed,
                witness=n.witness,
            )
            for n in self.tree.nodes
        )
        witnesses = tuple(WitnessRecord(*record) for record in self.tree.witness_records())
        return TreeSnapshot(self.name, nodes, witnesses)


def lg_sst_stl(scenario, lead: LeadPath, template: MonitorTemplate, params: PlannerParams,
               rng: np.random.Generator, deterministic: bool = False, debug: bool = False) -> PlanResult:
    """
    Planificador guiado por capas.

    Args:
        scenario: Escenario validado
        lead: Camino guía de un orden candidato
        template: Monitor de la fórmula del escenario
        params: Parámetros de la corrida
        rng: Generador propio de la corrida
        deterministic: Usar el reloj de iteraciones
        debug: Conservar una copia del árbol para auditoría

    Returns:
        PlanResult: mejor esfuerzo; ``satisfied`` indica si hubo solución
    """
    return _SSTPlanner(scenario, template, params, rng, lead, deterministic, debug).run()


def baseline_sst_stl(scenario, template: MonitorTemplate, params: PlannerParams,
                     rng: np.random.Generator, deterministic: bool = False,
                     debug: bool = False) -> PlanResult:
    """SST con costo STL y muestreo uniforme, sin guía ni capas."""
    return _SSTPlanner(scenario, template, params, rng, None, deterministic, debug).run()


# Re-simulación y verificación

@dataclass(frozen=True)
class Resimulation:
    trace: Trace
    states: Tuple[CarState, ...]


def resimulate(trajectory: Sequence[TrajectoryPoint], x_init, dynamics: DynamicsParams,
               dt: float) -> Resimulation:
    """
    Vuelve a integrar los controles de la trayectoria desde x_init.

    Devuelve la traza completa de subpasos (los instantes coinciden con los
    que usa el monitor) y el estado re-simulado en cada punto.
    """
    current = CarState(*x_init)
    t = 0.0
    samples = [(0.0, tuple(current))]
    states = [current]
    for point in trajectory[:-1]:
        motion = propagate(current, point.control, point.duration, dt, dynamics.wheelbase)
        for sub_t, state in zip(motion.times[1:], motion.states[1:]):
            samples.append((t + sub_t, tuple(state)))
        t = t + motion.duration
        current = motion.final
        states.append(current)
    return Resimulation(Trace.from_samples(samples), tuple(states))


@dataclass(frozen=True)
class SoundnessReport:
    robustness: Optional[float]
    boolean: bool
    max_state_error: float

    @property
    def sound(self) -> bool:
        return self.boolean and self.robustness is not None and self.robustness >= 0.0


def check_soundness(trajectory: Sequence[TrajectoryPoint], scenario) -> SoundnessReport:
    """Re-simula la trayectoria y evalúa la fórmula del escenario fuera de línea."""
    replay = resimulate(trajectory, scenario.start, scenario.dynamics, scenario.planner.dt)
    error = max(
        (max(abs(a - b) for a, b in zip(p.state[:2], s[:2])) for p, s in zip(trajectory, replay.states)),
        default=0.0,
    )
    try:
        rho = robustness(replay.trace, scenario.formula)
    except EvaluationError:
        rho = None
    return SoundnessReport(rho, boolean_sat(replay.trace, scenario.formula), float(error))


# Archivo de trayectoria

def write_trajectory(trajectory: Sequence[TrajectoryPoint], path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    rows = [TRAJECTORY_HEADER]
    for p in trajectory:
        values = (p.t, p.state.x, p.state.y, p.state.theta, p.control.v, p.control.delta)
        rows.append(' '.join('%.17g' % v for v in values) + '\n')
    path.write_text(''.join(rows), encoding='utf-8')
    return path


def load_trajectory(path: Union[str, Path]) -> Trajectory:
    """
    Lee un archivo de trayectoria; la duración de cada control se deduce de
    los tiempos consecutivos.
    """
    path = Path(path)
    if not path.is_file():
        raise ValidationError(ErrorCode.NOT_FOUND, f"No existe el archivo {path}")
    rows = []
    for number, line in enumerate(path.read_text(encoding='utf-8').splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith('#'):
            continue
        try:
            values = [float(v) for v in line.split()]
        except ValueError as exc:
            raise ValidationError(ErrorCode.FILE_FORMAT_INVALID, f"Línea {number}: {exc}") from exc
        if len(values) != 6:
            raise ValidationError(
                ErrorCode.FILE_FORMAT_INVALID,
                f"Línea {number}: se esperaban 6 columnas (t x y theta v delta)",
            )
        rows.append(values)
    if not rows:
        raise ValidationError(ErrorCode.FILE_FORMAT_INVALID, f"{path} no contiene filas")
    points = []
    for k, (t, x, y, theta, v, delta) in enumerate(rows):
        duration = rows[k + 1][0] - t if k + 1 < len(rows) else 0.0
        points.append(TrajectoryPoint(t, CarState(x, y, theta), CarControl(v, delta), duration))
    return tuple(points)
