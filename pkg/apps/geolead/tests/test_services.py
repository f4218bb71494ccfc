"""
Tests del camino guía: RRT*, capas y consultas de distancia
"""
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from apps.core.exceptions import (
    ErrorCode,
    NoPathError,
    SamplerExhaustedError,
    ValidationError,
)
from apps.core.seeding import make_rng
from apps.geolead.params import LeadParams
from apps.geolead.rrt_star import rrt_star
from apps.geolead.services import (
    LayerSpan,
    LeadPath,
    build_lead,
    dist_to_lead,
    dist_to_layer,
    layer_assign,
    load_lead,
    sample_near_layer,
    save_lead,
)
from apps.world.geometry import GoalRegion, Workspace


def straight_lead():
    """Guía (0,0) -> (8,0) con una meta de radio 0.5 al final"""
    return LeadPath(
        polyline=((0.0, 0.0), (8.0, 0.0)),
        layer_spans=(LayerSpan(0, 0, 0), LayerSpan(1, 0, 1), LayerSpan(2, 1, 1)),
        centers=((0.0, 0.0), (8.0, 0.0)),
        radii=(0.0, 0.5),
        order=(0,),
    )


def zigzag_lead():
    """Guía con dos metas y dos tramos de dos segmentos"""
    return LeadPath(
        polyline=((0.0, 0.0), (2.0, 1.0), (4.0, 0.0), (6.0, 2.0), (8.0, 0.0)),
        layer_spans=(
            LayerSpan(0, 0, 0), LayerSpan(1, 0, 2), LayerSpan(2, 2, 2),
            LayerSpan(3, 2, 4), LayerSpan(4, 4, 4),
        ),
        centers=((0.0, 0.0), (4.0, 0.0), (8.0, 0.0)),
        radii=(0.0, 0.5, 0.5),
        order=(0, 1),
    )


@pytest.fixture
def fast_lead_params():
    return LeadParams(iterations=1500)


@pytest.mark.unit
class TestLeadPath:
    """Tests de la estructura de capas"""

    def test_layer_count(self):
        """Test L_max = 2n - 1"""
        lead = zigzag_lead()
        assert lead.region_count == 3
        assert lead.layer_count == 5
        assert lead.length == pytest.approx(2 * math.sqrt(5) + 2 * math.sqrt(8))

    def test_wrong_number_of_spans(self):
        """Test número de capas inconsistente"""
        with pytest.raises(ValidationError) as exc_info:
            LeadPath(((0.0, 0.0), (1.0, 0.0)), (LayerSpan(0, 0, 0),), ((0.0, 0.0), (1.0, 0.0)), (0.0, 0.5))
        assert exc_info.value.error_code == ErrorCode.LAYER_INVALID

    def test_span_out_of_range(self):
        """Test capa inexistente"""
        with pytest.raises(ValidationError) as exc_info:
            straight_lead().span(3)
        assert exc_info.value.error_code == ErrorCode.LAYER_INVALID

    def test_span_points(self):
        """Test waypoints de un tramo"""
        points = zigzag_lead().span_points(3)
        assert points.tolist() == [[4.0, 0.0], [6.0, 2.0], [8.0, 0.0]]

    def test_waypoint_layers(self):
        """Test las entradas de región llevan su capa par"""
        assert zigzag_lead().waypoint_layers() == [0, 1, 2, 3, 4]

    def test_dict_round_trip(self):
        """Test to_dict y from_dict"""
        lead = zigzag_lead()
        assert LeadPath.from_dict(lead.to_dict()) == lead

    def test_from_dict_requires_schema(self):
        """Test archivo sin esquema"""
        data = zigzag_lead().to_dict()
        data.pop('schema')
        with pytest.raises(ValidationError) as exc_info:
            LeadPath.from_dict(data)
        assert exc_info.value.error_code == ErrorCode.FILE_FORMAT_INVALID

    def test_from_dict_malformed(self):
        """Test archivo con campos ausentes"""
        data = zigzag_lead().to_dict()
        del data['regions']
        with pytest.raises(ValidationError) as exc_info:
            LeadPath.from_dict(data)
        assert exc_info.value.error_code == ErrorCode.FILE_FORMAT_INVALID

    def test_save_and_load(self, tmp_path):
        """Test escritura y lectura en YAML"""
        lead = zigzag_lead()
        path = save_lead(lead, tmp_path / 'leads' / 'zigzag.yaml')
        assert load_lead(path) == lead

    def test_load_missing_file(self, tmp_path):
        """Test lectura de un archivo inexistente"""
        with pytest.raises(ValidationError) as exc_info:
            load_lead(tmp_path / 'missing.yaml')
        assert exc_info.value.error_code == ErrorCode.NOT_FOUND


@pytest.mark.unit
class TestLayerQueries:
    """Tests de asignación de capa y distancias"""

    def test_tie_goes_to_lower_layer(self):
        """Test empate entre tramo y región"""
        # distancia 2 al tramo y 2.5 - 0.5 = 2 a la meta
        assert layer_assign((6.5, 2.0), straight_lead()) == 1

    def test_point_inside_region(self):
        """Test un punto dentro de la meta queda en su capa"""
        assert layer_assign((8.0, 0.2), straight_lead()) == 2

    def test_point_near_start(self):
        """Test la región inicial tiene radio cero"""
        assert layer_assign((0.0, 0.0), straight_lead()) == 0

    def test_dist_to_layer_is_non_negative(self):
        """Test distancia a región desde dentro"""
        lead = straight_lead()
        assert dist_to_layer((8.0, 0.2), lead, 2) == 0.0
        assert dist_to_layer((8.0, 0.2), lead, 1) == pytest.approx(0.2)

    def test_dist_to_layer_out_of_range(self):
        """Test capa inválida"""
        with pytest.raises(ValidationError):
            dist_to_layer((0.0, 0.0), straight_lead(), 5)

    def test_dist_to_lead(self):
        """Test distancia a la poligonal"""
        lead = zigzag_lead()
        assert dist_to_lead((2.0, 3.0), lead) == pytest.approx(2.0)
        assert dist_to_lead((4.0, 0.0), lead) == 0.0

    @pytest.mark.property
    @settings(max_examples=200, deadline=None, derandomize=True)
    @given(st.floats(-2, 10), st.floats(-3, 4))
    def test_lead_distance_is_min_over_transits(self, x, y):
        """Test la poligonal es la unión de los tramos"""
        lead = zigzag_lead()
        transits = min(dist_to_layer((x, y), lead, layer) for layer in (1, 3))
        assert dist_to_lead((x, y), lead) == pytest.approx(transits, abs=1e-12)

    @pytest.mark.property
    @settings(max_examples=100, deadline=None, derandomize=True)
    @given(st.floats(0, 0.45), st.floats(-math.pi, math.pi))
    def test_region_interior_assigns_region_layer(self, r, angle):
        """Test los puntos interiores de la meta 1 quedan en la capa 2"""
        point = (4.0 + r * math.cos(angle), r * math.sin(angle))
        assert layer_assign(point, zigzag_lead()) == 2


@pytest.mark.unit
class TestSampleNearLayer:
    """Tests del muestreo alrededor de una capa"""

    def test_samples_stay_near_transit(self, rng):
        """Test las muestras respetan s_r"""
        lead = zigzag_lead()
        workspace = Workspace((-2.0, 10.0, -3.0, 4.0))
        for _ in range(50):
            p = sample_near_layer(lead, 3, 0.7, workspace, rng)
            assert dist_to_layer(p, lead, 3) <= 0.7 + 1e-9
            assert workspace.points_free(np.asarray([p]))[0]

    def test_samples_near_region(self, rng):
        """Test capa de región: disco de radio s_r alrededor del centro"""
        lead = zigzag_lead()
        workspace = Workspace((-2.0, 10.0, -3.0, 4.0))
        for _ in range(50):
            p = sample_near_layer(lead, 2, 0.3, workspace, rng)
            assert math.hypot(p[0] - 4.0, p[1]) <= 0.3 + 1e-9

    def test_exhausted(self, block_workspace, rng):
        """Test capa enterrada en un obstáculo"""
        lead = LeadPath(((5.0, 5.0),), (LayerSpan(0, 0, 0),), ((5.0, 5.0),), (0.0,))
        with pytest.raises(SamplerExhaustedError) as exc_info:
            sample_near_layer(lead, 0, 0.5, block_workspace, rng, attempts=50)
        assert exc_info.value.error_code == ErrorCode.SAMPLER_EXHAUSTED
        assert exc_info.value.details['attempts'] == 50


@pytest.mark.unit
class TestRrtStar:
    """Tests del RRT* geométrico"""

    def test_start_in_goal(self, empty_workspace, rng):
        """Test inicio dentro de la meta"""
        assert rrt_star(empty_workspace, (5.0, 5.0), GoalRegion((5.0, 5.0), 0.5), rng) == [(5.0, 5.0)]

    def test_path_is_free_and_reaches_goal(self, block_workspace):
        """Test camino alrededor del bloque"""
        goal = GoalRegion((8.0, 5.0), 0.4)
        path = rrt_star(block_workspace, (2.0, 5.0), goal, make_rng(3), iterations=2000)
        assert path[0] == (2.0, 5.0)
        assert goal.contains(path[-1])
        assert block_workspace.path_free(np.asarray(path))

    def test_corridor_length_close_to_straight_line(self):
        """Test en un corredor libre la longitud se acerca a la recta"""
        workspace = Workspace((-0.5, 10.5, -1.5, 1.5))
        goal = GoalRegion((10.0, 0.0), 0.3)
        path = rrt_star(workspace, (0.0, 0.0), goal, make_rng(11), iterations=5000)
        length = float(np.hypot(*np.diff(np.asarray(path), axis=0).T).sum())
        assert 9.7 - 1e-9 <= length <= 1.05 * 10.0

    def test_enclosed_goal(self, walled_scenario):
        """Test meta encerrada por muros"""
        goal = walled_scenario.goals[0]
        with pytest.raises(NoPathError) as exc_info:
            rrt_star(walled_scenario.workspace, (2.0, 5.0), goal, make_rng(0), iterations=300)
        assert exc_info.value.error_code == ErrorCode.LEAD_NO_PATH


@pytest.mark.unit
class TestBuildLead:
    """Tests de la construcción de la guía por orden"""

    def test_layers_follow_order(self, exp1_scenario, fast_lead_params):
        """Test capas y regiones en orden de visita"""
        scenario = exp1_scenario
        lead = build_lead((1, 0), scenario.fragment, scenario.workspace, scenario.start, seed=4,
                          params=fast_lead_params)
        assert lead.layer_count == 5
        assert lead.order == (1, 0)
        assert lead.polyline[0] == (scenario.start.x, scenario.start.y)
        assert lead.centers[1] == scenario.goals[1].center
        assert lead.centers[2] == scenario.goals[0].center
        for i, center in enumerate(lead.centers):
            span = lead.span(2 * i)
            assert span.first == span.last
            assert lead.polyline[span.first] == center
        for layer in (1, 3):
            span = lead.span(layer)
            assert span.first == lead.span(layer - 1).last
            assert span.last == lead.span(layer + 1).first
        assert scenario.workspace.path_free(np.asarray(lead.polyline))

    def test_same_seed_same_lead(self, exp1_scenario, fast_lead_params):
        """Test reproducibilidad por semilla"""
        scenario = exp1_scenario
        args = ((0, 1), scenario.fragment, scenario.workspace, scenario.start)
        first = build_lead(*args, seed=2, params=fast_lead_params)
        second = build_lead(*args, seed=2, params=fast_lead_params)
        assert first.polyline == second.polyline

    def test_parallel_matches_sequential(self, exp1_scenario, fast_lead_params):
        """Test cada tramo tiene su propio generador"""
        scenario = exp1_scenario
        args = ((0, 1), scenario.fragment, scenario.workspace, scenario.start)
        sequential = build_lead(*args, seed=5, params=fast_lead_params)
        parallel = build_lead(*args, seed=5, params=fast_lead_params, parallel=True)
        assert parallel == sequential

    def test_order_must_be_permutation(self, exp1_scenario):
        """Test orden que repite una meta"""
        scenario = exp1_scenario
        with pytest.raises(ValidationError):
            build_lead((0, 0), scenario.fragment, scenario.workspace, scenario.start, seed=0)

    def test_start_in_goal(self, start_in_goal_scenario):
        """Test guía de un solo waypoint"""
        scenario = start_in_goal_scenario
        lead = build_lead((0,), scenario.fragment, scenario.workspace, scenario.start, seed=0,
                          params=scenario.lead)
        assert lead.polyline == ((5.0, 5.0),)
        assert lead.layer_count == 3
        assert lead.length == 0.0

    def test_no_path_names_the_leg(self, walled_scenario):
        """Test el error indica el tramo"""
        scenario = walled_scenario
        with pytest.raises(NoPathError) as exc_info:
            build_lead((0,), scenario.fragment, scenario.workspace, scenario.start, seed=0,
                       params=scenario.lead)
        assert exc_info.value.details['leg'] == 0
        assert exc_info.value.details['order'] == [0]


@pytest.mark.unit
class TestLeadParams:
    """Tests de parámetros del RRT*"""

    @pytest.mark.parametrize('overrides', [
        {'iterations': 0},
        {'goal_bias': 1.5},
        {'step': 0.0},
        {'sampler_attempts': 0},
    ])
    def test_invalid(self, overrides):
        """Test valores fuera de rango"""
        with pytest.raises(ValidationError):
            LeadParams(**overrides)

    def test_from_settings_overrides(self):
        """Test sobrescritura sobre LEAD_DEFAULTS"""
        assert LeadParams.from_settings(iterations=10).iterations == 10
