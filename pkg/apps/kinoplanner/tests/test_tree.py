"""
Tests del árbol SST: BestNear, testigos y poda
"""
import numpy as np
import pytest
from django.test import override_settings

from apps.dynamics.services import CarState
from apps.kinoplanner.clock import IterationClock, WallClock, make_clock
from apps.kinoplanner.tree import INITIAL_CAPACITY, SearchTree, TreeNode


def node(x, y, cost, parent=None, layer=0):
    return TreeNode(
        index=-1, state=CarState(x, y, 0.0), t=0.0 if parent is None else parent.t + 1.0,
        parent=parent, control=None, duration=1.0, layer=layer, annotation=(), cost=cost,
    )


@pytest.fixture
def tree():
    tree = SearchTree(theta_weight=0.3, delta_s=0.25)
    tree.insert_root(node(0.0, 0.0, 1.0))
    return tree


@pytest.mark.unit
class TestWitnessRule:
    """Tests de la regla de testigos"""

    def test_far_node_creates_witness(self, tree):
        """Test nodo lejos de todo testigo"""
        root = tree.nodes[0]
        child = node(1.0, 0.0, 5.0, parent=root)
        assert tree.try_insert(child)
        assert child.witness != root.witness
        assert tree.size == 2
        assert tree.active_count == 2

    def test_worse_node_is_rejected(self, tree):
        """Test costo mayor o igual al representante"""
        root = tree.nodes[0]
        assert not tree.try_insert(node(0.1, 0.0, 1.0, parent=root))
        assert tree.size == 1

    def test_better_node_replaces_representative(self, tree):
        """Test costo menor: el representante se desactiva"""
        root = tree.nodes[0]
        far = node(2.0, 0.0, 0.5, parent=root)
        tree.try_insert(far)
        close = node(2.1, 0.0, 0.1, parent=root)
        assert tree.try_insert(close)
        assert close.witness == far.witness
        assert not far.active
        assert far.removed
        assert tree.size == 3
        assert tree.active_count == 2

    def test_inactive_node_with_children_is_kept(self, tree):
        """Test un nodo inactivo con hijos no se elimina"""
        root = tree.nodes[0]
        middle = node(2.0, 0.0, 0.5, parent=root)
        tree.try_insert(middle)
        tree.try_insert(node(4.0, 0.0, 0.5, parent=middle))
        tree.try_insert(node(2.05, 0.0, 0.2, parent=root))
        assert not middle.active
        assert not middle.removed

    def test_partitions_are_independent(self, tree):
        """Test testigos por capa"""
        root = tree.nodes[0]
        other_layer = node(0.05, 0.0, 5.0, parent=root, layer=1)
        assert tree.try_insert(other_layer, partition=1)
        assert root.active
        records = list(tree.witness_records())
        assert [r[0] for r in records] == [0, 1]

    def test_equal_cost_more_observed_slots_wins(self, tree):
        """Test a igual costo gana el nodo con más ranuras observadas"""
        root = tree.nodes[0]
        waiting = node(2.0, 0.0, 0.0, parent=root)
        waiting.annotation = (0.1, None)
        arrived = node(2.05, 0.0, 0.0, parent=root)
        arrived.annotation = (0.1, 0.2)
        late = node(2.1, 0.0, 0.0, parent=root)
        late.annotation = (0.1, None)

        assert tree.try_insert(waiting)
        assert tree.try_insert(arrived)
        assert arrived.witness == waiting.witness
        assert not waiting.active
        assert not tree.try_insert(late)

    def test_capacity_grows(self, tree):
        """Test crecimiento de los arreglos"""
        root = tree.nodes[0]
        for k in range(INITIAL_CAPACITY + 5):
            tree.try_insert(node(1.0 + k, 0.0, 1.0, parent=root))
        assert tree.size == INITIAL_CAPACITY + 6
        assert len(tree.candidates()) == tree.size


@pytest.mark.unit
class TestSpaceTimeWitnesses:
    """Tests de testigos con coordenada temporal"""

    @pytest.fixture
    def timed_tree(self):
        tree = SearchTree(theta_weight=0.3, delta_s=0.25, time_weight=0.1)
        tree.insert_root(node(0.0, 0.0, 0.0))
        return tree

    def test_same_place_later_time_gets_own_witness(self, timed_tree):
        """Test mismo lugar diez segundos después"""
        root = timed_tree.nodes[0]
        later = node(0.05, 0.0, 5.0, parent=root)
        later.t = 10.0

        assert timed_tree.try_insert(later)
        assert later.witness != root.witness
        assert root.active
        locations = [r[2] for r in timed_tree.witness_records()]
        assert [len(loc) for loc in locations] == [4, 4]
        assert locations[1][3] == pytest.approx(1.0)

    def test_close_in_time_still_competes(self, timed_tree):
        """Test un segundo después sigue en el radio del testigo"""
        root = timed_tree.nodes[0]
        assert not timed_tree.try_insert(node(0.05, 0.0, 5.0, parent=root))

    def test_best_near_uses_time(self, timed_tree):
        """Test BestNear con muestra en cuatro dimensiones"""
        root = timed_tree.nodes[0]
        later = node(0.0, 0.0, 5.0, parent=root)
        later.t = 20.0
        timed_tree.try_insert(later)

        assert timed_tree.best_near(np.array([0.0, 0.0, 0.0, 1.9]), 0.5, timed_tree.candidates()) is later
        assert timed_tree.best_near(np.array([0.0, 0.0, 0.0, 0.1]), 0.5, timed_tree.candidates()) is root


@pytest.mark.unit
class TestBestNear:
    """Tests de la selección BestNear"""

    def test_lowest_cost_within_delta_v(self, tree):
        """Test menor costo dentro del radio"""
        root = tree.nodes[0]
        cheap = node(0.4, 0.0, 0.2, parent=root)
        tree.try_insert(cheap)
        chosen = tree.best_near(np.zeros(3), 0.5, tree.candidates())
        assert chosen is cheap

    def test_nearest_when_none_within(self, tree):
        """Test sin nodos en el radio se elige el más cercano"""
        root = tree.nodes[0]
        tree.try_insert(node(3.0, 0.0, 0.1, parent=root))
        chosen = tree.best_near(np.array([-2.0, 0.0, 0.0]), 0.5, tree.candidates())
        assert chosen is root

    def test_layer_window(self, tree):
        """Test candidatos restringidos por capa"""
        root = tree.nodes[0]
        tree.try_insert(node(3.0, 0.0, 0.1, parent=root, layer=2), partition=2)
        assert tree.candidates(1, 3).tolist() == [1]
        assert tree.candidates(0, 1).tolist() == [0]

    def test_no_candidates(self, tree):
        """Test conjunto vacío"""
        assert tree.best_near(np.zeros(3), 0.5, np.array([], dtype=int)) is None


@pytest.mark.unit
class TestClocks:
    """Tests de relojes"""

    def test_iteration_clock(self):
        """Test iteraciones a segundos"""
        assert IterationClock(hz=1000).elapsed(500) == 0.5

    @override_settings(PLANNER_ITERATION_CLOCK_HZ=100)
    def test_iteration_clock_from_settings(self):
        """Test frecuencia desde settings"""
        assert IterationClock().elapsed(50) == 0.5

    def test_make_clock(self):
        """Test elección del reloj"""
        assert isinstance(make_clock(True), IterationClock)
        assert isinstance(make_clock(False), WallClock)
        assert make_clock(False).elapsed(10 ** 6) < 60.0
