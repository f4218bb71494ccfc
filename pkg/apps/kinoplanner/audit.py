"""
Auditoría de invariantes del árbol sobre la copia de depuración de una corrida.
"""
from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from apps.dynamics.services import propagate
from apps.geolead.services import LeadPath, dist_to_lead

from .services import TreeSnapshot

logger = logging.getLogger(__name__)

STATE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class AuditViolation:
    rule: str
    node: int
    message: str


def audit_tree(snapshot: TreeSnapshot, scenario, lead: Optional[LeadPath] = None) -> List[AuditViolation]:
    """
    Revisa los nodos no eliminados y los testigos.

    Reglas: adyacencia de capas entre padre e hijo, radio de propagación,
    colisión en cada subpaso (re-propagando el control guardado), tiempo
    creciente y esparcimiento de testigos (a lo sumo un nodo activo por
    testigo, a distancia <= delta_s).
    """
    params = scenario.planner
    nodes = {n.index: n for n in snapshot.nodes}
    violations: List[AuditViolation] = []

    def report(rule, node, message):
        violations.append(AuditViolation(rule, node, message))

    for n in snapshot.nodes:
        if n.removed or n.parent < 0:
            continue
        parent = nodes[n.parent]
        if lead is not None:
            if abs(n.layer - parent.layer) > 1:
                report('layer_adjacency', n.index, f"capa {parent.layer} -> {n.layer}")
            gap = dist_to_lead(n.state[:2], lead)
            if gap > params.r_prop:
                report('r_prop', n.index, f"distancia a la guía {gap:.4f} > {params.r_prop}")
        if not n.t > parent.t:
            report('time', n.index, f"t={n.t} no supera a t_padre={parent.t}")
        motion = propagate(parent.state, n.control, n.duration, params.dt, scenario.dynamics.wheelbase)
        if not scenario.workspace.path_free(motion.positions()):
            report('collision', n.index, "algún subpaso choca o sale de los límites")
        drift = max(abs(a - b) for a, b in zip(motion.final, n.state))
        if drift > STATE_TOLERANCE:
            report('resimulation', n.index, f"el estado re-simulado difiere en {drift:.3g}")

    members = defaultdict(list)
    for n in snapshot.nodes:
        if n.active:
            members[n.witness].append(n)
    locations = {w.identifier: w for w in snapshot.witnesses}
    weight = params.theta_weight
    time_weight = params.time_weight
    for wid, group in members.items():
        if len(group) > 1:
            report('sparsity', group[0].index, f"{len(group)} nodos activos en el testigo {wid}")
        witness = locations.get(wid)
        if witness is None:
            report('sparsity', group[0].index, f"testigo {wid} inexistente")
            continue
        if witness.representative not in {g.index for g in group}:
            report('sparsity', group[0].index, f"el testigo {wid} representa a otro nodo")
        for g in group:
            coordinates = [g.state[0], g.state[1], weight * g.state[2]]
            if time_weight > 0:
                coordinates.append(time_weight * g.t)
            point = np.array(coordinates)
            if np.linalg.norm(point - np.asarray(witness.location)) > params.delta_s + STATE_TOLERANCE:
                report('sparsity', g.index, f"nodo fuera del radio delta_s de su testigo {wid}")

    if violations:
        logger.warning(f"Auditoría del árbol: {len(violations)} violaciones")
    return violations
