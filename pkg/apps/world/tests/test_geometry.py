"""
Tests de geometría del espacio de trabajo
"""
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from apps.core.exceptions import ErrorCode, ScenarioError
from apps.stl.formula import TimeInterval
from apps.world.geometry import (
    GoalRegion,
    Workspace,
    point_free,
    point_segment_distance,
    polyline_self_intersects,
    segment_free,
)

from .factories import BlockWorkspaceFactory, GoalRegionFactory, WorkspaceFactory

SQUARE = ((4.0, 4.0), (6.0, 4.0), (6.0, 6.0), (4.0, 6.0))


@pytest.mark.unit
class TestWorkspace:
    """Tests de construcción del espacio de trabajo"""

    def test_clockwise_polygon_is_reoriented(self):
        """Test polígono horario se invierte"""
        ws = Workspace((0, 10, 0, 10), (tuple(reversed(SQUARE)),))

        assert not point_free(ws, (5.0, 5.0))
        assert point_free(ws, (3.0, 5.0))

    def test_non_convex_polygon(self):
        """Test polígono no convexo"""
        with pytest.raises(ScenarioError) as exc_info:
            Workspace((0, 10, 0, 10), (((0, 0), (4, 0), (2, 1), (4, 4), (0, 4)),))

        assert exc_info.value.error_code == ErrorCode.GEOMETRY_INVALID
        assert exc_info.value.field == 'workspace.obstacles[0]'

    def test_polygon_outside_bounds(self):
        """Test polígono fuera de los límites"""
        with pytest.raises(ScenarioError):
            Workspace((0, 10, 0, 10), (((8, 8), (11, 8), (11, 9)),))

    def test_degenerate_bounds(self):
        """Test límites degenerados"""
        with pytest.raises(ScenarioError):
            Workspace((0, 0, 0, 10))

    def test_area(self):
        """Test área del rectángulo"""
        assert Workspace((0, 12, 0, 8)).area == 96.0


@pytest.mark.unit
class TestCollision:
    """Tests de colisión de puntos y segmentos"""

    def test_point_on_edge_collides(self, block_workspace):
        """Test el borde del obstáculo cuenta como colisión"""
        assert not point_free(block_workspace, (4.0, 5.0))

    def test_point_out_of_bounds(self, block_workspace):
        """Test punto fuera de los límites"""
        assert not point_free(block_workspace, (-0.1, 5.0))

    def test_segment_crossing_block(self, block_workspace):
        """Test segmento que atraviesa el bloque"""
        assert not segment_free(block_workspace, (1.0, 5.0), (9.0, 5.0))

    def test_segment_grazing_edge_collides(self, block_workspace):
        """Test segmento que roza una arista"""
        assert not segment_free(block_workspace, (1.0, 6.0), (9.0, 6.0))

    def test_segment_passing_above(self, block_workspace):
        """Test segmento que pasa por encima"""
        assert segment_free(block_workspace, (1.0, 6.5), (9.0, 6.5))

    def test_diagonal_near_corner(self, block_workspace):
        """Test diagonal que pasa junto a la esquina sin tocarla"""
        assert segment_free(block_workspace, (3.0, 6.2), (4.2, 7.4))
        assert not segment_free(block_workspace, (3.0, 5.0), (5.0, 7.0))

    def test_segments_free_is_vectorized(self, block_workspace):
        """Test evaluación de varios segmentos a la vez"""
        starts = np.array([[1.0, 5.0], [1.0, 8.0]])
        ends = np.array([[9.0, 5.0], [9.0, 8.0]])

        assert block_workspace.segments_free(starts, ends).tolist() == [False, True]

    def test_path_free(self, block_workspace):
        """Test poligonal que rodea el bloque"""
        path = [(1, 1), (9, 1), (9, 9)]

        assert block_workspace.path_free(path)
        assert not block_workspace.path_free([(1, 1), (9, 9)])

    def test_distance_to_obstacles(self, block_workspace, empty_workspace):
        """Test distancia al obstáculo más cercano"""
        assert block_workspace.distance_to_obstacles((2.0, 5.0)) == pytest.approx(2.0)
        assert block_workspace.distance_to_obstacles((5.0, 5.0)) == 0.0
        assert empty_workspace.distance_to_obstacles((5.0, 5.0)) == math.inf


@pytest.mark.unit
class TestHelpers:
    """Tests de utilidades geométricas"""

    def test_point_segment_distance(self):
        """Test distancia punto-segmento con proyección recortada"""
        d = point_segment_distance(
            np.array([[0.0, 1.0], [3.0, 0.0]]),
            np.array([[0.0, 0.0]]),
            np.array([[2.0, 0.0]]),
        )

        assert d[:, 0].tolist() == pytest.approx([1.0, 1.0])

    def test_points_against_many_segments(self):
        """Test matriz N x M de distancias contra varios segmentos"""
        points = np.array([[0.0, 1.0], [3.0, 0.0], [1.0, -2.0]])
        starts = np.array([[0.0, 0.0], [0.0, 0.0]])
        ends = np.array([[2.0, 0.0], [0.0, 4.0]])

        d = point_segment_distance(points, starts, ends)

        assert d.shape == (3, 2)
        assert d[:, 0].tolist() == pytest.approx([1.0, 1.0, 2.0])
        assert d[:, 1].tolist() == pytest.approx([0.0, 3.0, math.hypot(1.0, 2.0)])

    def test_zero_length_segment(self):
        """Test segmento de longitud cero"""
        d = point_segment_distance(np.array([[3.0, 4.0]]), np.array([[0.0, 0.0]]), np.array([[0.0, 0.0]]))

        assert d[0, 0] == pytest.approx(5.0)

    def test_crossing_polyline(self):
        """Test poligonal con cruce"""
        assert polyline_self_intersects([(0, 0), (2, 2), (2, 0), (0, 2)])

    def test_simple_polyline(self):
        """Test poligonal sin cruces"""
        assert not polyline_self_intersects([(0, 0), (1, 0), (2, 1), (3, 3)])

    def test_repeated_points_are_ignored(self):
        """Test puntos repetidos consecutivos"""
        assert not polyline_self_intersects([(0, 0), (1, 0), (1, 0), (2, 1), (3, 3)])


@pytest.mark.unit
class TestGoalRegion:
    """Tests de la región meta"""

    def test_contains_and_distance(self):
        """Test pertenencia y distancia al disco"""
        goal = GoalRegion((0.0, 0.0), 1.0, TimeInterval(0, 5))

        assert goal.contains((0.5, 0.5))
        assert goal.distance((3.0, 0.0)) == pytest.approx(2.0)
        assert goal.distance((0.2, 0.0)) == 0.0

    def test_disjoint_from_obstacles(self, block_workspace):
        """Test meta que toca un obstáculo"""
        assert GoalRegion((2.0, 5.0), 1.0).disjoint_from(block_workspace)
        assert not GoalRegion((3.5, 5.0), 1.0).disjoint_from(block_workspace)

    def test_radius_must_be_positive(self):
        """Test radio no positivo"""
        with pytest.raises(ScenarioError):
            GoalRegion((0.0, 0.0), 0.0)


@pytest.mark.property
class TestFactoryWorkspaces:
    """Tests sobre espacios generados con factories"""

    @settings(max_examples=50, deadline=None, derandomize=True)
    @given(st.floats(0.2, 6.0), st.floats(-0.09, 0.09))
    def test_block_always_blocks_the_midline(self, side, dy):
        """Test un segmento horizontal por el centro siempre choca"""
        ws = BlockWorkspaceFactory(side=side)
        assert not segment_free(ws, (0.5, 5.0 + dy), (9.5, 5.0 + dy))
        assert not point_free(ws, (5.0, 5.0))

    def test_goal_row_is_clear_of_block(self):
        """Test metas de la fila superior lejos del bloque"""
        ws = BlockWorkspaceFactory()
        goals = GoalRegionFactory.build_batch(5)
        assert all(goal.disjoint_from(ws) for goal in goals)
        assert len({goal.center for goal in goals}) == 5

    def test_empty_factory(self):
        """Test espacio sin obstáculos"""
        ws = WorkspaceFactory()
        assert ws.area == 100.0
        assert math.isinf(ws.distance_to_obstacles((5.0, 5.0)))
