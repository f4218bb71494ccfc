"""
Camino guía: concatenación de tramos RRT* a través de las metas ordenadas,
descomposición en 2n-1 capas y consultas de distancia.

Las capas pares son regiones (la región 0 es el punto inicial, de radio 0);
las impares son los tramos que unen la región i con la i+1.
"""
from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import yaml

from apps.core.exceptions import (
    ErrorCode,
    NoPathError,
    SamplerExhaustedError,
    ValidationError,
)
from apps.core.seeding import STREAM_LEAD, make_rng
from apps.stl.fragment import FragmentSpec
from apps.world.geometry import GoalRegion, Point, Workspace, point_segment_distance

from .params import LeadParams
from .rrt_star import rrt_star

logger = logging.getLogger(__name__)

LEAD_SCHEMA = 1


@dataclass(frozen=True)
class LayerSpan:
    """Rango de waypoints [first, last] de una capa."""

    layer: int
    first: int
    last: int

    @property
    def is_region(self) -> bool:
        return self.layer % 2 == 0


@dataclass(frozen=True)
class LeadPath:
    """
    Poligonal guía con sus capas.

    ``centers`` y ``radii`` describen las n regiones en orden de visita,
    empezando por el punto inicial.
    """

    polyline: Tuple[Point, ...]
    layer_spans: Tuple[LayerSpan, ...]
    centers: Tuple[Point, ...]
    radii: Tuple[float, ...]
    order: Tuple[int, ...] = ()
    _points: np.ndarray = field(init=False, repr=False, compare=False)
    _arc: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        points = np.asarray(self.polyline, dtype=float).reshape(-1, 2)
        if len(self.layer_spans) != 2 * len(self.centers) - 1:
            raise ValidationError(
                ErrorCode.LAYER_INVALID,
                f"{len(self.layer_spans)} capas para {len(self.centers)} regiones",
            )
        steps = np.hypot(*np.diff(points, axis=0).T) if len(points) > 1 else np.zeros(0)
        object.__setattr__(self, '_points', points)
        object.__setattr__(self, '_arc', np.concatenate([[0.0], np.cumsum(steps)]))

    @property
    def layer_count(self) -> int:
        """L_max = 2n - 1."""
        return len(self.layer_spans)

    @property
    def region_count(self) -> int:
        return len(self.centers)

    @property
    def length(self) -> float:
        return float(self._arc[-1])

    def span(self, layer: int) -> LayerSpan:
        if not 0 <= layer < self.layer_count:
            raise ValidationError(
                ErrorCode.LAYER_INVALID,
                f"Capa {layer} fuera de rango [0, {self.layer_count - 1}]",
            )
        return self.layer_spans[layer]

    def span_points(self, layer: int) -> np.ndarray:
        s = self.span(layer)
        return self._points[s.first:s.last + 1]

    def waypoint_layers(self) -> List[int]:
        """Capa de cada waypoint: las entradas de región reciben su capa par."""
        labels = [0] * len(self.polyline)
        for s in self.layer_spans:
            if not s.is_region:
                for k in range(s.first + 1, s.last):
                    labels[k] = s.layer
        for s in self.layer_spans:
            if s.is_region:
                labels[s.first] = s.layer
        return labels

    def to_dict(self) -> Dict:
        labels = self.waypoint_layers()
        return {
            'schema': LEAD_SCHEMA,
            'order': list(self.order),
            'layer_count': self.layer_count,
            'regions': [
                {'center': [float(c[0]), float(c[1])], 'radius': float(r)}
                for c, r in zip(self.centers, self.radii)
            ],
            'spans': [[s.layer, s.first, s.last] for s in self.layer_spans],
            'waypoints': [[float(p[0]), float(p[1]), label] for p, label in zip(self.polyline, labels)],
        }

    @classmethod
    def from_dict(cls, data: Dict) -> 'LeadPath':
        if not isinstance(data, dict) or data.get('schema') != LEAD_SCHEMA:
            raise ValidationError(ErrorCode.FILE_FORMAT_INVALID, "Archivo de guía sin 'schema: 1'")
        try:
            return cls(
                polyline=tuple((float(w[0]), float(w[1])) for w in data['waypoints']),
                layer_spans=tuple(LayerSpan(int(a), int(b), int(c)) for a, b, c in data['spans']),
                centers=tuple((float(r['center'][0]), float(r['center'][1])) for r in data['regions']),
                radii=tuple(float(r['radius']) for r in data['regions']),
                order=tuple(int(g) for g in data.get('order', ())),
            )
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise ValidationError(ErrorCode.FILE_FORMAT_INVALID, f"Archivo de guía mal formado: {exc}") from exc


def _polyline_distance(point: np.ndarray, points: np.ndarray) -> float:
    if len(points) == 1:
        return float(np.hypot(*(point - points[0])))
    return float(point_segment_distance(point[None, :], points[:-1], points[1:]).min())


def _layer_distances(p: Point, lead: LeadPath, signed: bool) -> np.ndarray:
    point = np.asarray(p, dtype=float)
    out = np.empty(lead.layer_count)
    for s in lead.layer_spans:
        if s.is_region:
            i = s.layer // 2
            cx, cy = lead.centers[i]
            d = math.hypot(point[0] - cx, point[1] - cy) - lead.radii[i]
            out[s.layer] = d if signed else max(0.0, d)
        else:
            out[s.layer] = _polyline_distance(point, lead._points[s.first:s.last + 1])
    return out


def layer_assign(p: Point, lead: LeadPath) -> int:
    """
    Capa más cercana a p; empates hacia el índice menor.

    Para las regiones se usa la distancia con signo al disco (negativa
    dentro), de modo que un punto dentro de la región i queda en la capa 2i.
    """
    return int(np.argmin(_layer_distances(p, lead, signed=True)))


def dist_to_layer(p: Point, lead: LeadPath, layer: int) -> float:
    """Distancia no negativa de p al soporte geométrico de la capa."""
    lead.span(layer)
    return float(_layer_distances(p, lead, signed=False)[layer])


def dist_to_lead(p: Point, lead: LeadPath) -> float:
    """Distancia exacta de p a la poligonal completa."""
    return _polyline_distance(np.asarray(p, dtype=float), lead._points)


def sample_near_layer(lead: LeadPath, layer: int, s_r: float, workspace: Workspace,
                      rng: np.random.Generator, attempts: int = 1000) -> Point:
    """
    Punto libre a distancia <= s_r de la capa.

    Se elige un punto uniforme por longitud de arco del tramo (o el centro
    para las capas de región) y se le suma un desplazamiento uniforme en un
    disco de radio s_r; se rechaza contra obstáculos y límites.

    Raises:
        SamplerExhaustedError: ningún intento produjo un punto libre
    """
    span = lead.span(layer)
    if span.is_region:
        base_points = lead._points[span.first:span.first + 1]
        arc = np.zeros(1)
    else:
        base_points = lead._points[span.first:span.last + 1]
        arc = lead._arc[span.first:span.last + 1] - lead._arc[span.first]
    total = float(arc[-1])

    for _ in range(attempts):
        if total > 0.0:
            s = rng.uniform(0.0, total)
            k = min(int(np.searchsorted(arc, s, side='right')) - 1, len(arc) - 2)
            seg = arc[k + 1] - arc[k]
            ratio = (s - arc[k]) / seg if seg > 0 else 0.0
            base = base_points[k] + ratio * (base_points[k + 1] - base_points[k])
        else:
            base = base_points[0]
        r = s_r * math.sqrt(rng.random())
        angle = rng.uniform(-math.pi, math.pi)
        candidate = (float(base[0] + r * math.cos(angle)), float(base[1] + r * math.sin(angle)))
        if workspace.points_free(np.asarray([candidate]))[0]:
            return candidate

    raise SamplerExhaustedError(
        ErrorCode.SAMPLER_EXHAUSTED,
        f"Sin punto libre cerca de la capa {layer} tras {attempts} intentos",
        {'layer': layer, 's_r': s_r, 'attempts': attempts},
    )


def _leg(workspace: Workspace, start: Point, target: GoalRegion, seed: int, leg: int,
         params: LeadParams, order: Sequence[int]) -> List[Point]:
    rng = make_rng(seed + leg, STREAM_LEAD)
    try:
        path = rrt_star(workspace, start, target, rng, params.iterations, params.goal_bias, params.step)
    except NoPathError as exc:
        raise NoPathError(
            ErrorCode.LEAD_NO_PATH,
            f"Tramo {leg} del orden {tuple(order)}: {exc.message}",
            {**exc.details, 'leg': leg, 'order': list(order)},
        ) from exc
    logger.debug(f"Tramo {leg}: {len(path)} waypoints")
    return path


def build_lead(order: Sequence[int], fragment: FragmentSpec, workspace: Workspace, x_init,
               seed: int, params: Optional[LeadParams] = None, parallel: bool = False) -> LeadPath:
    """
    Construye el camino guía que visita las metas en el orden dado.

    El tramo j usa el generador de semilla ``seed + j``; cada tramo parte del
    centro de la región anterior, por lo que los tramos son independientes y
    pueden calcularse en paralelo.

    Args:
        order: Identificadores de meta en orden de visita
        fragment: Fragmento con las metas
        workspace: Espacio de trabajo
        x_init: Estado inicial (se usan x, y)
        seed: Semilla del orden
        params: Parámetros del RRT*
        parallel: Calcular los tramos en un pool de hilos

    Raises:
        NoPathError: algún tramo no encontró camino (indica el tramo)
    """
    params = params or LeadParams.from_settings()
    goals = fragment.goals
    if sorted(order) != list(range(len(goals))):
        raise ValidationError(
            ErrorCode.VALIDATION_ERROR,
            f"El orden {tuple(order)} no es una permutación de las {len(goals)} metas",
        )
    targets = [GoalRegion.from_goal(goals[g]) for g in order]
    centers: List[Point] = [(float(x_init[0]), float(x_init[1]))] + [t.center for t in targets]
    radii = [0.0] + [t.radius for t in targets]

    legs = range(len(targets))
    if parallel and len(targets) > 1:
        with ThreadPoolExecutor(max_workers=min(len(targets), os.cpu_count() or 1)) as pool:
            futures = [
                pool.submit(_leg, workspace, centers[j], targets[j], seed, j, params, order)
                for j in legs
            ]
            paths = [f.result() for f in futures]
    else:
        paths = [_leg(workspace, centers[j], targets[j], seed, j, params, order) for j in legs]

    polyline: List[Point] = [centers[0]]
    entries = [0]
    for j, path in enumerate(paths):
        polyline.extend(path[1:])
        if polyline[-1] != centers[j + 1]:
            polyline.append(centers[j + 1])
        entries.append(len(polyline) - 1)

    spans = []
    for i, k in enumerate(entries):
        spans.append(LayerSpan(2 * i, k, k))
        if i + 1 < len(entries):
            spans.append(LayerSpan(2 * i + 1, k, entries[i + 1]))

    lead = LeadPath(tuple(polyline), tuple(spans), tuple(centers), tuple(radii), tuple(order))
    logger.info(
        f"Guía para el orden {tuple(order)}: {lead.layer_count} capas, "
        f"{len(polyline)} waypoints, longitud {lead.length:.2f} m"
    )
    return lead


def save_lead(lead: LeadPath, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(yaml.safe_dump(lead.to_dict(), sort_keys=False), encoding='utf-8')
    return path


def load_lead(path: Union[str, Path]) -> LeadPath:
    path = Path(path)
    if not path.is_file():
        raise ValidationError(ErrorCode.NOT_FOUND, f"No existe el archivo {path}")
    try:
        data = yaml.safe_load(path.read_text(encoding='utf-8'))
    except yaml.YAMLError as exc:
        raise ValidationError(ErrorCode.FILE_FORMAT_INVALID, f"YAML inválido: {exc}") from exc
    return LeadPath.from_dict(data)
