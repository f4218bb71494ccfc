"""
Configuración global de pytest para el proyecto
"""
import os
import django

# Configurar Django antes de importar cualquier cosa
os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'planner_platform.settings')
django.setup()

import pytest
from django.test import override_settings

from apps.core.seeding import make_rng
from apps.dynamics.services import CarState, DynamicsParams
from apps.kinoplanner.params import PlannerParams
from apps.world.geometry import Workspace
from apps.world.scenario import parse_scenario, resolve_scenario


@pytest.fixture
def empty_workspace():
    """Espacio de trabajo de 10 x 10 sin obstáculos"""
    return Workspace((0.0, 10.0, 0.0, 10.0))


@pytest.fixture
def block_workspace():
    """Espacio de trabajo con un bloque cuadrado en el centro"""
    return Workspace((0.0, 10.0, 0.0, 10.0), (((4.0, 4.0), (6.0, 4.0), (6.0, 6.0), (4.0, 6.0)),))


@pytest.fixture
def dynamics_params():
    """Parámetros del automóvil por defecto"""
    return DynamicsParams()


@pytest.fixture
def start_state():
    return CarState(1.0, 5.0, 0.0)


@pytest.fixture
def small_planner_params():
    """Parámetros de planificador con presupuesto corto"""
    return PlannerParams(time_budget=2.0, metric_period=100)


@pytest.fixture
def rng():
    return make_rng(7)


@pytest.fixture
def start_in_goal_scenario():
    return resolve_scenario('start_in_goal')


@pytest.fixture
def walled_scenario():
    return resolve_scenario('walled')


@pytest.fixture
def open_field_scenario():
    """Espacio vacío con una meta sin cota a 5 m del inicio"""
    return parse_scenario({
        'schema': 1,
        'name': 'open_field',
        'workspace': {'bounds': [0, 10, 0, 10]},
        'formula': 'F(dist(x,y; 7.5,5) <= 0.5)',
        'start': {'x': 2.5, 'y': 5.0, 'theta': 0.0},
        'planner': {'anytime': False},
    })


@pytest.fixture
def exp1_scenario():
    return resolve_scenario('exp1')


@pytest.fixture
def exp2_scenario():
    return resolve_scenario('exp2')


@pytest.fixture
def exp3_scenario():
    return resolve_scenario('exp3')


@pytest.fixture
def output_dir(tmp_path):
    """Directorio de resultados aislado por test"""
    with override_settings(PLANNER_OUTPUT_DIR=tmp_path):
        yield tmp_path


@pytest.fixture(autouse=True)
def use_test_celery():
    """Usar Celery en modo eager para tests"""
    with override_settings(
        CELERY_TASK_ALWAYS_EAGER=True,
        CELERY_TASK_EAGER_PROPAGATES=True
    ):
        yield
