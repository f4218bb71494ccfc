"""
Tests de lectura y validación de escenarios
"""
import copy

import pytest

from apps.core.exceptions import ErrorCode, FormulaSyntaxError, FragmentError, ScenarioError
from apps.world.scenario import (
    bundled_scenario_path,
    describe_scenario,
    load_scenario,
    parse_scenario,
    resolve_scenario,
)

BASE = {
    'schema': 1,
    'name': 'prueba',
    'seed': 4,
    'workspace': {
        'bounds': [0, 10, 0, 10],
        'obstacles': [[[4, 4], [6, 4], [6, 6], [4, 6]]],
    },
    'formula': 'F[0,10](dist(x,y; 2,8) <= 0.5) & F(dist(x,y; 8,8) <= 0.5)',
    'start': {'x': 1.0, 'y': 1.0, 'theta': 0.0},
    'planner': {'time_budget': 5, 'delta_v': 0.6},
}


def scenario_data(**changes):
    data = copy.deepcopy(BASE)
    for key, value in changes.items():
        data[key] = value
    return data


@pytest.mark.unit
class TestParseScenario:
    """Tests de parse_scenario"""

    def test_valid_scenario(self):
        """Test escenario válido con valores por defecto"""
        scenario = parse_scenario(scenario_data())

        assert scenario.name == 'prueba'
        assert scenario.seed == 4
        assert len(scenario.goals) == 2
        assert scenario.planner.time_budget == 5.0
        assert scenario.planner.delta_v == 0.6
        assert scenario.planner.s_r == 1.0
        assert scenario.dynamics.wheelbase == 0.3

    def test_schema_version(self):
        """Test versión de esquema no soportada"""
        with pytest.raises(ScenarioError) as exc_info:
            parse_scenario(scenario_data(schema=2))

        assert exc_info.value.error_code == ErrorCode.SCENARIO_PARSE
        assert exc_info.value.field == 'schema'

    def test_unknown_planner_field(self):
        """Test campo desconocido en una sección"""
        with pytest.raises(ScenarioError) as exc_info:
            parse_scenario(scenario_data(planner={'speed': 3}))

        assert exc_info.value.field == 'planner.speed'

    def test_wrong_type(self):
        """Test tipo incorrecto"""
        with pytest.raises(ScenarioError) as exc_info:
            parse_scenario(scenario_data(planner={'anytime': 'si'}))

        assert exc_info.value.field == 'planner.anytime'

    def test_invalid_dynamics(self):
        """Test límites de control inválidos"""
        with pytest.raises(ScenarioError) as exc_info:
            parse_scenario(scenario_data(dynamics={'v_min': 3.0, 'v_max': 1.0}))

        assert exc_info.value.error_code == ErrorCode.SCENARIO_INVALID
        assert exc_info.value.field == 'dynamics'

    def test_invalid_planner_params_keep_field(self):
        """Test parámetros de planificador con ruta de campo"""
        with pytest.raises(ScenarioError) as exc_info:
            parse_scenario(scenario_data(planner={'delta_s': 0.9}))

        assert exc_info.value.field == 'planner.delta_s'

    def test_formula_errors_propagate(self):
        """Test errores de fórmula"""
        with pytest.raises(FormulaSyntaxError):
            parse_scenario(scenario_data(formula='F[0,1] (x >= '))
        with pytest.raises(FragmentError):
            parse_scenario(scenario_data(formula='G[0,1](dist(x,y; 2,8) <= 0.5)'))


@pytest.mark.unit
class TestValidateScenario:
    """Tests de las reglas de validación"""

    def test_start_inside_obstacle(self):
        """Test inicio dentro de un obstáculo"""
        with pytest.raises(ScenarioError) as exc_info:
            parse_scenario(scenario_data(start={'x': 5.0, 'y': 5.0}))

        assert exc_info.value.field == 'start'

    def test_goal_touching_obstacle(self):
        """Test meta que toca un obstáculo"""
        with pytest.raises(ScenarioError) as exc_info:
            parse_scenario(scenario_data(formula='F(dist(x,y; 3.8,5) <= 0.5)'))

        assert exc_info.value.field == 'formula.goals[0]'

    def test_goal_outside_bounds(self):
        """Test centro de la meta fuera de los límites"""
        with pytest.raises(ScenarioError):
            parse_scenario(scenario_data(formula='F(dist(x,y; 12,5) <= 0.5)'))

    def test_t_max_wider_than_window(self):
        """Test t_max mayor que la ventana más estrecha"""
        with pytest.raises(ScenarioError) as exc_info:
            parse_scenario(scenario_data(formula='F[2,2.5](dist(x,y; 2,8) <= 0.5)'))

        assert exc_info.value.field == 'planner.t_max'

    def test_dt_above_t_max(self):
        """Test dt mayor que t_max"""
        with pytest.raises(ScenarioError) as exc_info:
            parse_scenario(scenario_data(planner={'dt': 0.5, 't_max': 0.2}))

        assert exc_info.value.field == 'planner.dt'


@pytest.mark.unit
class TestLoadScenario:
    """Tests de archivos de escenario"""

    def test_missing_file(self, tmp_path):
        """Test archivo inexistente"""
        with pytest.raises(ScenarioError) as exc_info:
            load_scenario(tmp_path / 'nada.scenario')

        assert exc_info.value.error_code == ErrorCode.SCENARIO_NOT_FOUND

    def test_invalid_yaml_reports_position(self, tmp_path):
        """Test YAML mal formado con línea y columna"""
        path = tmp_path / 'roto.scenario'
        path.write_text('schema: 1\nworkspace: [\n', encoding='utf-8')

        with pytest.raises(ScenarioError) as exc_info:
            load_scenario(path)

        assert exc_info.value.error_code == ErrorCode.SCENARIO_PARSE
        assert 'línea' in exc_info.value.message

    def test_name_defaults_to_file_stem(self, tmp_path):
        """Test nombre tomado del archivo"""
        data = scenario_data()
        del data['name']
        path = tmp_path / 'mi_escenario.scenario'
        path.write_text(__import__('yaml').safe_dump(data), encoding='utf-8')

        assert load_scenario(path).name == 'mi_escenario'

    def test_unknown_bundled_scenario(self):
        """Test escenario incluido desconocido"""
        with pytest.raises(ScenarioError) as exc_info:
            bundled_scenario_path('exp9')

        assert 'exp1' in exc_info.value.details['available']

    @pytest.mark.parametrize('name', ['exp1', 'exp2', 'exp3', 'start_in_goal', 'walled'])
    def test_bundled_scenarios_are_valid(self, name):
        """Test todos los escenarios incluidos validan"""
        scenario = resolve_scenario(name)

        assert scenario.name == name
        assert name in describe_scenario(scenario)

    def test_experiment_geometry_is_marked_reconstructed(self, exp3_scenario):
        """Test los experimentos declaran geometría reconstruida"""
        assert exp3_scenario.reconstructed
        assert len(exp3_scenario.goals) == 6
