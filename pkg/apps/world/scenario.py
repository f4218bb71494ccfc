"""
Lectura, validación y presentación de escenarios (YAML, ``schema: 1``).

Distancias en metros, tiempos en segundos y ángulos en radianes. Ver
docs/scenario-format.md.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

import yaml

from apps.core.exceptions import ErrorCode, PlanningError, ScenarioError
from apps.dynamics.services import CarState, DynamicsParams
from apps.geolead.params import LeadParams
from apps.kinoplanner.params import PlannerParams
from apps.stl.formula import Formula, format_formula, format_number
from apps.stl.fragment import FragmentSpec, extract_fragment
from apps.stl.parser import parse_formula

from .geometry import GoalRegion, Workspace, point_free

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
SCENARIO_SUFFIX = '.scenario'
SCENARIO_DIR = Path(__file__).resolve().parent / 'scenarios'


@dataclass(frozen=True)
class Scenario:
    """Escenario completo y validado."""

    name: str
    workspace: Workspace
    formula_text: str
    formula: Formula
    fragment: FragmentSpec
    start: CarState
    dynamics: DynamicsParams
    planner: PlannerParams
    lead: LeadParams
    seed: int = 0
    reconstructed: bool = False
    description: str = ''
    source: Optional[str] = None

    @property
    def goals(self) -> Tuple[GoalRegion, ...]:
        """Regiones meta en orden de identificador."""
        return tuple(GoalRegion.from_goal(goal) for goal in self.fragment.goals)

    def with_planner(self, **changes) -> 'Scenario':
        return replace(self, planner=replace(self.planner, **changes))

    def with_seed(self, seed: int) -> 'Scenario':
        return replace(self, seed=int(seed))


# Lectura de campos con ruta para los mensajes de error

def _parse_error(field: str, message: str) -> ScenarioError:
    return ScenarioError(ErrorCode.SCENARIO_PARSE, message, field=field)


def _mapping(value: Any, field: str) -> Dict[str, Any]:
    if value is None:
        return {}
    if not isinstance(value, dict):
        raise _parse_error(field, "se esperaba un mapa de campos")
    return value


def _number(value: Any, field: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise _parse_error(field, f"se esperaba un número (se recibió {value!r})")
    if math.isnan(value):
        raise _parse_error(field, "NaN no es un valor válido")
    return float(value)


def _point(value: Any, field: str) -> Tuple[float, float]:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise _parse_error(field, "se esperaba un punto [x, y]")
    return _number(value[0], f'{field}[0]'), _number(value[1], f'{field}[1]')


def _section(data: Dict[str, Any], name: str, target) -> Dict[str, Any]:
    """Campos de una sección de parámetros convertidos al tipo del dataclass destino."""
    section = _mapping(data.get(name), name)
    known = {f.name: f for f in fields(target)}
    values = {}
    for key, raw in section.items():
        where = f'{name}.{key}'
        if key not in known:
            raise _parse_error(where, "campo desconocido")
        kind = known[key].type
        if kind in ('bool', bool):
            if not isinstance(raw, bool):
                raise _parse_error(where, "se esperaba true o false")
            values[key] = raw
        elif kind in ('int', int):
            number = _number(raw, where)
            if number != int(number):
                raise _parse_error(where, "se esperaba un entero")
            values[key] = int(number)
        else:
            values[key] = _number(raw, where)
    return values


def _workspace(data: Dict[str, Any]) -> Workspace:
    section = _mapping(data.get('workspace'), 'workspace')
    bounds = section.get('bounds')
    if not isinstance(bounds, (list, tuple)) or len(bounds) != 4:
        raise _parse_error('workspace.bounds', "se esperaba [x_min, x_max, y_min, y_max]")
    bounds = tuple(_number(v, f'workspace.bounds[{i}]') for i, v in enumerate(bounds))
    obstacles = []
    for k, polygon in enumerate(section.get('obstacles') or []):
        where = f'workspace.obstacles[{k}]'
        if not isinstance(polygon, (list, tuple)):
            raise _parse_error(where, "se esperaba una lista de vértices")
        obstacles.append(tuple(_point(v, f'{where}[{i}]') for i, v in enumerate(polygon)))
    return Workspace(bounds, tuple(obstacles))


def _start(data: Dict[str, Any]) -> CarState:
    section = _mapping(data.get('start'), 'start')
    for key in section:
        if key not in ('x', 'y', 'theta'):
            raise _parse_error(f'start.{key}', "campo desconocido")
    if 'x' not in section or 'y' not in section:
        raise _parse_error('start', "se requieren x e y")
    return CarState(
        _number(section['x'], 'start.x'),
        _number(section['y'], 'start.y'),
        _number(section.get('theta', 0.0), 'start.theta'),
    )


def _with_field(exc: PlanningError, section: str) -> ScenarioError:
    if exc.message.startswith(f'{section}.'):
        error = ScenarioError(ErrorCode.SCENARIO_INVALID, exc.message, details=exc.details)
        error.field = exc.details.get('field', section)
        return error
    return ScenarioError(ErrorCode.SCENARIO_INVALID, exc.message, field=section, details=exc.details)


def _build_params(data: Dict[str, Any], section: str, target):
    values = _section(data, section, target)
    try:
        return target.from_settings(**values)
    except ScenarioError:
        raise
    except PlanningError as exc:
        raise _with_field(exc, section) from exc


def parse_scenario(data: Any, source: Optional[str] = None) -> Scenario:
    """
    Construye un escenario desde el documento ya deserializado.

    Raises:
        ScenarioError: campo mal formado o regla de validación violada
        FormulaSyntaxError, FragmentError: fórmula inválida
    """
    data = _mapping(data, '(raíz)')
    schema = data.get('schema')
    if schema != SCHEMA_VERSION:
        raise _parse_error('schema', f"versión no soportada: {schema!r} (se espera {SCHEMA_VERSION})")

    formula_text = data.get('formula')
    if not isinstance(formula_text, str) or not formula_text.strip():
        raise _parse_error('formula', "se esperaba el texto de la fórmula")
    seed = data.get('seed', 0)
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise _parse_error('seed', "se esperaba un entero")

    workspace = _workspace(data)
    start = _start(data)
    formula = parse_formula(formula_text)
    fragment = extract_fragment(formula)

    dynamics = _build_params(data, 'dynamics', DynamicsParams)
    planner = _build_params(data, 'planner', PlannerParams)
    lead = _build_params(data, 'lead', LeadParams)

    scenario = Scenario(
        name=str(data.get('name') or (Path(source).stem if source else 'scenario')),
        workspace=workspace,
        formula_text=formula_text.strip(),
        formula=formula,
        fragment=fragment,
        start=start,
        dynamics=dynamics,
        planner=planner,
        lead=lead,
        seed=seed,
        reconstructed=bool(data.get('reconstructed', False)),
        description=str(data.get('description') or '').strip(),
        source=source,
    )
    validate_scenario(scenario)
    return scenario


def validate_scenario(scenario: Scenario) -> None:
    """
    Reglas que cruzan secciones: ventanas, inicio libre y metas libres.

    Raises:
        ScenarioError: primera regla violada, con la ruta del campo
    """
    planner = scenario.planner
    if planner.dt > planner.t_max:
        raise ScenarioError(
            ErrorCode.SCENARIO_INVALID,
            f"dt ({planner.dt}) no puede superar t_max ({planner.t_max})",
            field='planner.dt',
        )
    window = scenario.fragment.min_window_width
    if planner.t_max > window:
        raise ScenarioError(
            ErrorCode.SCENARIO_INVALID,
            f"t_max ({planner.t_max}) supera la ventana acotada más estrecha ({window})",
            field='planner.t_max',
        )
    if not point_free(scenario.workspace, scenario.start[:2]):
        raise ScenarioError(ErrorCode.SCENARIO_INVALID, "El estado inicial no está en espacio libre", field='start')
    for goal, region in zip(scenario.fragment.goals, scenario.goals):
        where = f'formula.goals[{goal.identifier}]'
        if not scenario.workspace.in_bounds(region.center)[0]:
            raise ScenarioError(ErrorCode.SCENARIO_INVALID, "El centro de la meta está fuera de los límites", field=where)
        if not region.disjoint_from(scenario.workspace):
            raise ScenarioError(
                ErrorCode.SCENARIO_INVALID,
                f"La meta {goal.region} toca un obstáculo",
                field=where,
            )
    regions = scenario.goals
    for i in range(len(regions)):
        for j in range(i + 1, len(regions)):
            gap = math.dist(regions[i].center, regions[j].center)
            if gap <= regions[i].radius + regions[j].radius:
                raise ScenarioError(
                    ErrorCode.SCENARIO_INVALID,
                    f"Las metas {i} y {j} se solapan",
                    field=f'formula.goals[{j}]',
                )


def load_scenario(path: Union[str, Path]) -> Scenario:
    """
    Lee y valida un archivo de escenario.

    Raises:
        ScenarioError: archivo inexistente, YAML inválido o escenario inválido
    """
    path = Path(path)
    if not path.is_file():
        raise ScenarioError(ErrorCode.SCENARIO_NOT_FOUND, f"No existe el archivo {path}")
    try:
        data = yaml.safe_load(path.read_text(encoding='utf-8'))
    except yaml.YAMLError as exc:
        mark = getattr(exc, 'problem_mark', None)
        where = f" (línea {mark.line + 1}, columna {mark.column + 1})" if mark else ''
        raise ScenarioError(ErrorCode.SCENARIO_PARSE, f"YAML inválido{where}: {exc}") from exc
    scenario = parse_scenario(data, source=str(path))
    logger.debug(f"Escenario cargado: {scenario.name} ({len(scenario.fragment)} metas)")
    return scenario


def bundled_scenario_path(name: str) -> Path:
    """Ruta de un escenario incluido (``exp1``, ``exp2``, ...)."""
    stem = name[:-len(SCENARIO_SUFFIX)] if name.endswith(SCENARIO_SUFFIX) else name
    path = SCENARIO_DIR / f'{stem}{SCENARIO_SUFFIX}'
    if not path.is_file():
        available = sorted(p.stem for p in SCENARIO_DIR.glob(f'*{SCENARIO_SUFFIX}'))
        raise ScenarioError(
            ErrorCode.SCENARIO_NOT_FOUND,
            f"Escenario incluido desconocido: '{name}'",
            details={'available': available},
        )
    return path


def resolve_scenario(reference: Union[str, Path]) -> Scenario:
    """Carga desde una ruta existente o, si no existe, desde los escenarios incluidos."""
    path = Path(reference)
    if path.is_file():
        return load_scenario(path)
    return load_scenario(bundled_scenario_path(str(reference)))


def describe_scenario(scenario: Scenario) -> str:
    """Resumen legible del escenario para la CLI."""
    x_min, x_max, y_min, y_max = scenario.workspace.bounds
    lines = [
        f"Escenario: {scenario.name}" + (" (reconstruido)" if scenario.reconstructed else ''),
        f"  Límites: x [{format_number(x_min)}, {format_number(x_max)}], "
        f"y [{format_number(y_min)}, {format_number(y_max)}]",
        f"  Obstáculos: {len(scenario.workspace.obstacles)}",
        f"  Inicio: x={scenario.start.x:g}, y={scenario.start.y:g}, theta={scenario.start.theta:g}",
        f"  Fórmula: {format_formula(scenario.formula)}",
        "  Metas:",
    ]
    for goal in scenario.fragment.goals:
        kind = str(goal.interval) if goal.bounded else 'sin cota'
        lines.append(f"    [{goal.identifier}] {goal.region}  ventana {kind}")
    d, p, l = scenario.dynamics, scenario.planner, scenario.lead
    lines += [
        f"  Dinámica: L={d.wheelbase:g}, v=[{d.v_min:g}, {d.v_max:g}], delta_max={d.delta_max:g}",
        f"  Planificador: s_r={p.s_r:g}, r_prop={p.r_prop:g}, t_max={p.t_max:g}, dt={p.dt:g}, "
        f"delta_v={p.delta_v:g}, delta_s={p.delta_s:g}, presupuesto={p.time_budget:g} s",
        f"  Guía: {l.iterations} iteraciones, goal_bias={l.goal_bias:g}, step={l.step:g}",
        f"  Semilla: {scenario.seed}",
    ]
    if scenario.description:
        lines.append(f"  {scenario.description}")
    return '\n'.join(lines)
