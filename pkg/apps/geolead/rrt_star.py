"""
RRT* geométrico en el plano con radio de vecindad decreciente.
"""
from __future__ import annotations

import logging
import math
from typing import List, Tuple

import numpy as np

from apps.core.exceptions import ErrorCode, NoPathError
from apps.world.geometry import GoalRegion, Point, Workspace, point_free

logger = logging.getLogger(__name__)


def _sample_in_disk(rng: np.random.Generator, center: Point, radius: float) -> np.ndarray:
    r = radius * math.sqrt(rng.random())
    angle = rng.uniform(-math.pi, math.pi)
    return np.array([center[0] + r * math.cos(angle), center[1] + r * math.sin(angle)])


class _Tree:
    """Árbol en arreglos preasignados: posiciones, padres, costos e hijos."""

    def __init__(self, root: Point, capacity: int):
        self.positions = np.empty((capacity + 1, 2), dtype=float)
        self.parents = np.full(capacity + 1, -1, dtype=int)
        self.costs = np.zeros(capacity + 1, dtype=float)
        self.children: List[List[int]] = [[]]
        self.positions[0] = root
        self.size = 1

    def add(self, point: np.ndarray, parent: int, cost: float) -> int:
        index = self.size
        self.positions[index] = point
        self.parents[index] = parent
        self.costs[index] = cost
        self.children.append([])
        self.children[parent].append(index)
        self.size += 1
        return index

    def reparent(self, index: int, parent: int, cost: float) -> None:
        self.children[int(self.parents[index])].remove(index)
        self.children[parent].append(index)
        self.parents[index] = parent
        delta = self.costs[index] - cost
        stack = [index]
        while stack:
            k = stack.pop()
            self.costs[k] -= delta
            stack.extend(self.children[k])

    def path_to(self, index: int) -> List[Point]:
        points = []
        while index >= 0:
            x, y = self.positions[index]
            points.append((float(x), float(y)))
            index = int(self.parents[index])
        return points[::-1]


def rrt_star(workspace: Workspace, start: Point, goal: GoalRegion, rng: np.random.Generator,
             iterations: int = 5000, goal_bias: float = 0.05, step: float = 0.5) -> List[Point]:
    """
    Camino libre de colisión desde ``start`` hasta un punto dentro del disco meta.

    Ejecuta todo el presupuesto de iteraciones y devuelve el camino de menor
    longitud que termina dentro del disco.

    Raises:
        NoPathError: ningún nodo alcanzó el disco meta
    """
    start = (float(start[0]), float(start[1]))
    if goal.contains(start):
        return [start]

    x_min, x_max, y_min, y_max = workspace.bounds
    gamma = 2.0 * math.sqrt(1.5) * math.sqrt(workspace.area / math.pi)
    tree = _Tree(start, iterations)

    for _ in range(iterations):
        if rng.random() < goal_bias:
            target = _sample_in_disk(rng, goal.center, goal.radius)
        else:
            target = np.array([rng.uniform(x_min, x_max), rng.uniform(y_min, y_max)])

        positions = tree.positions[:tree.size]
        offsets = positions - target
        distances = np.hypot(offsets[:, 0], offsets[:, 1])
        nearest = int(np.argmin(distances))
        gap = distances[nearest]
        if gap == 0.0:
            continue
        origin = positions[nearest]
        new = target if gap <= step else origin + (target - origin) * (step / gap)
        if not point_free(workspace, (new[0], new[1])):
            continue

        count = tree.size
        radius = min(gamma * math.sqrt(math.log(count + 1) / (count + 1)), step)
        offsets = positions - new
        distances = np.hypot(offsets[:, 0], offsets[:, 1])
        near = np.flatnonzero(distances <= radius)
        if nearest not in near:
            near = np.append(near, nearest)
        free = workspace.segments_free(positions[near], np.repeat(new[None, :], len(near), axis=0))
        if not free.any():
            continue
        near = near[free]
        via = tree.costs[near] + distances[near]
        best = int(np.argmin(via))
        index = tree.add(new, int(near[best]), float(via[best]))

        # recableado de los vecinos a través del nuevo nodo
        new_cost = tree.costs[index]
        for k in near:
            k = int(k)
            if k == tree.parents[index]:
                continue
            candidate = new_cost + distances[k]
            if candidate < tree.costs[k]:
                tree.reparent(k, index, candidate)

    positions = tree.positions[:tree.size]
    inside = np.hypot(positions[:, 0] - goal.center[0], positions[:, 1] - goal.center[1]) <= goal.radius
    if not inside.any():
        raise NoPathError(
            ErrorCode.LEAD_NO_PATH,
            f"RRT* no alcanzó la meta en {goal.center} tras {iterations} iteraciones",
            {'goal': list(goal.center), 'iterations': iterations, 'nodes': tree.size},
        )
    candidates = np.flatnonzero(inside)
    best = int(candidates[np.argmin(tree.costs[candidates])])
    logger.debug(f"RRT*: {tree.size} nodos, longitud {tree.costs[best]:.3f}")
    return tree.path_to(best)
