"""
Geometría del espacio de trabajo: límites, obstáculos convexos y
verificación de colisiones de puntos y segmentos.

El contacto cuenta como colisión: un segmento que roza una arista choca.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Tuple

import numpy as np

from apps.core.exceptions import ErrorCode, ScenarioError
from apps.stl.formula import TimeInterval, UNBOUNDED

Point = Tuple[float, float]
Polygon = Tuple[Point, ...]


def _signed_area(vertices: np.ndarray) -> float:
    x, y = vertices[:, 0], vertices[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def _is_convex(vertices: np.ndarray) -> bool:
    edges = np.roll(vertices, -1, axis=0) - vertices
    nxt = np.roll(edges, -1, axis=0)
    cross = edges[:, 0] * nxt[:, 1] - edges[:, 1] * nxt[:, 0]
    return bool(np.all(cross > 0))


def point_segment_distance(points: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """
    Distancia de cada punto (N×2) a cada segmento (M×2, M×2); devuelve N×M.

    Los segmentos de longitud cero se tratan como puntos.
    """
    points = np.atleast_2d(points)
    d = b - a
    length2 = np.einsum('ij,ij->i', d, d)
    rel = points[:, None, :] - a[None, :, :]
    safe = np.where(length2 > 0.0, length2, 1.0)
    t = np.einsum('nmk,mk->nm', rel, d) / safe
    t = np.clip(np.where(length2 > 0.0, t, 0.0), 0.0, 1.0)
    closest = a[None, :, :] + t[:, :, None] * d[None, :, :]
    return np.hypot(points[:, None, 0] - closest[:, :, 0], points[:, None, 1] - closest[:, :, 1])


@dataclass(frozen=True)
class Workspace:
    """
    Rectángulo de trabajo (x_min, x_max, y_min, y_max) con obstáculos
    convexos en sentido antihorario.
    """

    bounds: Tuple[float, float, float, float]
    obstacles: Tuple[Polygon, ...] = ()
    _vertices: Tuple[np.ndarray, ...] = field(init=False, repr=False, compare=False)
    _normals: Tuple[np.ndarray, ...] = field(init=False, repr=False, compare=False)
    _extent: Tuple[Tuple[np.ndarray, np.ndarray], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        x_min, x_max, y_min, y_max = (float(v) for v in self.bounds)
        if not (x_min < x_max and y_min < y_max):
            raise ScenarioError(ErrorCode.GEOMETRY_INVALID, "Límites degenerados", field='workspace.bounds')
        object.__setattr__(self, 'bounds', (x_min, x_max, y_min, y_max))

        polygons, vertices, normals, extent = [], [], [], []
        for k, polygon in enumerate(self.obstacles):
            where = f'workspace.obstacles[{k}]'
            verts = np.asarray(polygon, dtype=float)
            if verts.ndim != 2 or verts.shape[0] < 3 or verts.shape[1] != 2:
                raise ScenarioError(ErrorCode.GEOMETRY_INVALID, "Se requieren al menos 3 vértices (x, y)", field=where)
            if _signed_area(verts) < 0:
                verts = verts[::-1].copy()
            if not _is_convex(verts):
                raise ScenarioError(ErrorCode.GEOMETRY_INVALID, "El polígono debe ser convexo", field=where)
            if (verts[:, 0].min() < x_min or verts[:, 0].max() > x_max
                    or verts[:, 1].min() < y_min or verts[:, 1].max() > y_max):
                raise ScenarioError(ErrorCode.GEOMETRY_INVALID, "El polígono sale de los límites", field=where)
            edges = np.roll(verts, -1, axis=0) - verts
            outward = np.stack([edges[:, 1], -edges[:, 0]], axis=1)
            projection = verts @ outward.T
            polygons.append(tuple((float(x), float(y)) for x, y in verts))
            vertices.append(verts)
            normals.append(outward)
            extent.append((projection.min(axis=0), projection.max(axis=0)))

        object.__setattr__(self, 'obstacles', tuple(polygons))
        object.__setattr__(self, '_vertices', tuple(vertices))
        object.__setattr__(self, '_normals', tuple(normals))
        object.__setattr__(self, '_extent', tuple(extent))

    @property
    def area(self) -> float:
        x_min, x_max, y_min, y_max = self.bounds
        return (x_max - x_min) * (y_max - y_min)

    def in_bounds(self, points: np.ndarray) -> np.ndarray:
        points = np.atleast_2d(points)
        x_min, x_max, y_min, y_max = self.bounds
        return ((points[:, 0] >= x_min) & (points[:, 0] <= x_max)
                & (points[:, 1] >= y_min) & (points[:, 1] <= y_max))

    def points_free(self, points: np.ndarray) -> np.ndarray:
        """Vector booleano: punto dentro de límites y estrictamente fuera de todo obstáculo."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        free = self.in_bounds(points)
        for verts, normals in zip(self._vertices, self._normals):
            # dentro o sobre el borde si ninguna arista lo separa
            side = np.einsum('nk,vk->nv', points, normals) - np.einsum('vk,vk->v', verts, normals)
            free &= np.any(side > 0.0, axis=1)
        return free

    def segments_free(self, starts: np.ndarray, ends: np.ndarray) -> np.ndarray:
        """Vector booleano por segmento cerrado (prueba de ejes separadores)."""
        p = np.atleast_2d(np.asarray(starts, dtype=float))
        q = np.atleast_2d(np.asarray(ends, dtype=float))
        free = self.in_bounds(p) & self.in_bounds(q)
        if not self._vertices:
            return free
        d = q - p
        seg_normal = np.stack([-d[:, 1], d[:, 0]], axis=1)
        seg_offset = np.einsum('ij,ij->i', p, seg_normal)
        for verts, normals, (pmin, pmax) in zip(self._vertices, self._normals, self._extent):
            sp = p @ normals.T
            sq = q @ normals.T
            separated = ((np.maximum(sp, sq) < pmin) | (np.minimum(sp, sq) > pmax)).any(axis=1)
            vproj = verts @ seg_normal.T
            separated |= (seg_offset < vproj.min(axis=0)) | (seg_offset > vproj.max(axis=0))
            free &= separated
        return free

    def path_free(self, points: np.ndarray) -> bool:
        """True si la poligonal completa está libre de colisión."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if len(points) == 1:
            return bool(self.points_free(points)[0])
        return bool(np.all(self.segments_free(points[:-1], points[1:])))

    def distance_to_obstacles(self, point: Point) -> float:
        """Distancia del punto al borde más cercano de un obstáculo (0 si está dentro)."""
        if not self._vertices:
            return math.inf
        p = np.asarray([point], dtype=float)
        best = math.inf
        for verts, normals in zip(self._vertices, self._normals):
            side = p @ normals.T - np.einsum('vk,vk->v', verts, normals)
            if not np.any(side > 0.0):
                return 0.0
            edges_end = np.roll(verts, -1, axis=0)
            best = min(best, float(point_segment_distance(p, verts, edges_end).min()))
        return best


def point_free(workspace: Workspace, p: Point) -> bool:
    """True si p está dentro de los límites y estrictamente fuera de todo obstáculo."""
    return bool(workspace.points_free(np.asarray([p], dtype=float))[0])


def segment_free(workspace: Workspace, p: Point, q: Point) -> bool:
    """True si el segmento cerrado pq no toca obstáculos y no sale de los límites."""
    return bool(workspace.segments_free(np.asarray([p], dtype=float), np.asarray([q], dtype=float))[0])


def _orientation(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    return (b[..., 0] - a[..., 0]) * (c[..., 1] - a[..., 1]) - (b[..., 1] - a[..., 1]) * (c[..., 0] - a[..., 0])


def _on_segment(a, b, c) -> np.ndarray:
    """c colineal con ab y dentro de su caja."""
    return ((np.minimum(a[..., 0], b[..., 0]) <= c[..., 0]) & (c[..., 0] <= np.maximum(a[..., 0], b[..., 0]))
            & (np.minimum(a[..., 1], b[..., 1]) <= c[..., 1]) & (c[..., 1] <= np.maximum(a[..., 1], b[..., 1])))


def polyline_self_intersects(points: Sequence[Point]) -> bool:
    """
    True si dos segmentos no consecutivos de la poligonal se tocan o cruzan.

    Los puntos repetidos consecutivos se descartan antes de comparar.
    """
    pts = np.asarray(points, dtype=float)
    if len(pts) < 4:
        return False
    keep = np.ones(len(pts), dtype=bool)
    keep[1:] = np.any(pts[1:] != pts[:-1], axis=1)
    pts = pts[keep]
    starts, ends = pts[:-1], pts[1:]
    count = len(starts)
    for i in range(count - 2):
        a, b = starts[i], ends[i]
        c, d = starts[i + 2:], ends[i + 2:]
        o1 = _orientation(a, b, c)
        o2 = _orientation(a, b, d)
        o3 = _orientation(c, d, a)
        o4 = _orientation(c, d, b)
        proper = (o1 * o2 < 0) & (o3 * o4 < 0)
        touch = (((o1 == 0) & _on_segment(a, b, c)) | ((o2 == 0) & _on_segment(a, b, d))
                 | ((o3 == 0) & _on_segment(c, d, a)) | ((o4 == 0) & _on_segment(c, d, b)))
        if np.any(proper | touch):
            return True
    return False


@dataclass(frozen=True)
class GoalRegion:
    """Disco meta con su ventana temporal."""

    center: Point
    radius: float
    interval: TimeInterval = UNBOUNDED

    def __post_init__(self):
        if not self.radius > 0:
            raise ScenarioError(ErrorCode.GEOMETRY_INVALID, "El radio de la meta debe ser positivo")

    @classmethod
    def from_goal(cls, goal) -> 'GoalRegion':
        return cls(tuple(goal.region.center), goal.region.radius, goal.interval)

    def distance(self, p: Point) -> float:
        """Distancia al disco (0 dentro)."""
        return max(0.0, math.hypot(p[0] - self.center[0], p[1] - self.center[1]) - self.radius)

    def contains(self, p: Point) -> bool:
        return math.hypot(p[0] - self.center[0], p[1] - self.center[1]) <= self.radius

    def disjoint_from(self, workspace: Workspace) -> bool:
        return workspace.distance_to_obstacles(self.center) > self.radius
