"""
Árbol del planificador con esparcimiento SST por testigos.

Los nodos activos viven además en arreglos numpy (posición ponderada
(x, y, w*theta) y, si el peso temporal es positivo, w_t*t; costo, capa,
actividad) para las búsquedas vectorizadas.
Los testigos se agrupan por partición (la capa en el planificador guiado).
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from apps.dynamics.services import CarControl, CarState
from apps.monitor.services import Annotation, observed_count

logger = logging.getLogger(__name__)

INITIAL_CAPACITY = 1024


@dataclass(eq=False)
class TreeNode:
    index: int
    state: CarState
    t: float
    parent: Optional['TreeNode']
    control: Optional[CarControl]
    duration: float
    layer: int
    annotation: Annotation
    cost: float
    active: bool = True
    removed: bool = False
    children: int = 0
    witness: int = -1

    @property
    def is_root(self) -> bool:
        return self.parent is None


def _outranks(node: TreeNode, peer: TreeNode) -> bool:
    if node.cost != peer.cost:
        return node.cost < peer.cost
    return observed_count(node.annotation) > observed_count(peer.annotation)


@dataclass
class _Witnesses:
    """Testigos de una partición: ubicaciones ponderadas y representante."""

    locations: List[np.ndarray] = field(default_factory=list)
    representatives: List[int] = field(default_factory=list)
    ids: List[int] = field(default_factory=list)
    _array: Optional[np.ndarray] = None

    def nearest(self, point: np.ndarray) -> Tuple[int, float]:
        if not self.locations:
            return -1, np.inf
        if self._array is None or len(self._array) != len(self.locations):
            self._array = np.asarray(self.locations)
        d = np.linalg.norm(self._array - point, axis=1)
        k = int(np.argmin(d))
        return k, float(d[k])


class SearchTree:
    """
    Árbol de búsqueda con selección BestNear y poda SST.

    ``size`` cuenta todos los nodos aceptados alguna vez y nunca decrece.
    """

    def __init__(self, theta_weight: float, delta_s: float, time_weight: float = 0.0):
        self.theta_weight = theta_weight
        self.time_weight = time_weight
        self.delta_s = delta_s
        self.dimension = 4 if time_weight > 0 else 3
        self.nodes: List[TreeNode] = []
        self._positions = np.zeros((INITIAL_CAPACITY, self.dimension))
        self._costs = np.zeros(INITIAL_CAPACITY)
        self._layers = np.zeros(INITIAL_CAPACITY, dtype=int)
        self._active = np.zeros(INITIAL_CAPACITY, dtype=bool)
        self._partitions: Dict[int, _Witnesses] = {}
        self._witness_count = 0

    @property
    def size(self) -> int:
        return len(self.nodes)

    @property
    def active_count(self) -> int:
        return int(self._active[:self.size].sum())

    def weighted(self, state, t: float = 0.0) -> np.ndarray:
        point = [state[0], state[1], self.theta_weight * state[2]]
        if self.dimension == 4:
            point.append(self.time_weight * t)
        return np.array(point, dtype=float)

    def _grow(self):
        capacity = 2 * len(self._costs)
        for name in ('_positions', '_costs', '_layers', '_active'):
            old = getattr(self, name)
            new = np.zeros((capacity,) + old.shape[1:], dtype=old.dtype)
            new[:len(old)] = old
            setattr(self, name, new)

    def candidates(self, low: Optional[int] = None, high: Optional[int] = None) -> np.ndarray:
        """Índices de nodos activos, opcionalmente con capa en [low, high]."""
        n = self.size
        mask = self._active[:n].copy()
        if low is not None:
            layers = self._layers[:n]
            mask &= (layers >= low) & (layers <= high)
        return np.flatnonzero(mask)

    def best_near(self, point: np.ndarray, delta_v: float, candidates: np.ndarray) -> Optional[TreeNode]:
        """
        Menor costo dentro de delta_v (empates por distancia); si no hay
        ninguno, el candidato más cercano.
        """
        if len(candidates) == 0:
            return None
        d = np.linalg.norm(self._positions[candidates] - point, axis=1)
        within = d <= delta_v
        if within.any():
            pool = candidates[within]
            order = np.lexsort((d[within], self._costs[pool]))
            return self.nodes[int(pool[order[0]])]
        return self.nodes[int(candidates[int(np.argmin(d))])]

    def _register(self, node: TreeNode) -> None:
        if self.size == len(self._costs):
            self._grow()
        node.index = self.size
        self.nodes.append(node)
        k = node.index
        self._positions[k] = self.weighted(node.state, node.t)
        self._costs[k] = node.cost
        self._layers[k] = node.layer
        self._active[k] = True
        if node.parent is not None:
            node.parent.children += 1

    def _deactivate(self, node: TreeNode) -> None:
        node.active = False
        self._active[node.index] = False
        # las hojas inactivas se eliminan hacia la raíz
        while node is not None and not node.active and node.children == 0 and not node.removed:
            node.removed = True
            parent = node.parent
            if parent is not None:
                parent.children -= 1
            node = parent

    def insert_root(self, node: TreeNode, partition: int = 0) -> TreeNode:
        self._register(node)
        self._new_witness(node, partition)
        return node

    def _new_witness(self, node: TreeNode, partition: int) -> None:
        witnesses = self._partitions.setdefault(partition, _Witnesses())
        witnesses.locations.append(self.weighted(node.state, node.t))
        witnesses.representatives.append(node.index)
        witnesses.ids.append(self._witness_count)
        node.witness = self._witness_count
        self._witness_count += 1

    def try_insert(self, node: TreeNode, partition: int = 0) -> bool:
        """
        Aplica la regla de testigos: el nodo entra si crea un testigo nuevo o
        si su costo es estrictamente menor que el del representante actual.
        A igual costo gana el nodo con más ranuras observadas.
        """
        witnesses = self._partitions.setdefault(partition, _Witnesses())
        point = self.weighted(node.state, node.t)
        k, distance = witnesses.nearest(point)
        if k < 0 or distance > self.delta_s:
            self._register(node)
            self._new_witness(node, partition)
            return True

        peer_index = witnesses.representatives[k]
        peer = self.nodes[peer_index] if peer_index >= 0 else None
        if peer is not None and peer.active and not _outranks(node, peer):
            return False
        self._register(node)
        node.witness = witnesses.ids[k]
        witnesses.representatives[k] = node.index
        if peer is not None and peer.active:
            self._deactivate(peer)
        return True

    def witness_records(self):
        """(partición, id, ubicación ponderada, índice del representante)."""
        for partition in sorted(self._partitions):
            witnesses = self._partitions[partition]
            for wid, location, rep in zip(witnesses.ids, witnesses.locations, witnesses.representatives):
                yield partition, wid, tuple(float(v) for v in location), rep
