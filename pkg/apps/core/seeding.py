"""
Reglas de derivación de semillas.

Cada corrida posee su propio generador; las semillas derivadas siguen reglas
fijas para que cualquier corrida sea reproducible por separado:

- orden candidato k de un escenario con semilla s: ``s + k``
- tramo j del camino guía construido con semilla s: ``s + j``
- corrida i de un benchmark con semilla base s: ``s + i``

El tramo y el planificador de un mismo orden usan flujos distintos del mismo
entero, separados por la etiqueta de flujo.
"""
import numpy as np

STREAM_PLANNER = 0
STREAM_LEAD = 1


def make_rng(seed: int, stream: int = STREAM_PLANNER) -> np.random.Generator:
    """Generador independiente para (semilla, flujo)."""
    return np.random.default_rng([int(seed), int(stream)])
