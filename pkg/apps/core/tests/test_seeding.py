"""
Tests de derivación de generadores
"""
import pytest

from apps.core.seeding import STREAM_LEAD, STREAM_PLANNER, make_rng


@pytest.mark.unit
class TestMakeRng:
    """Tests de make_rng"""

    def test_same_seed_same_stream(self):
        """Test reproducibilidad"""
        assert make_rng(5).random(4).tolist() == make_rng(5).random(4).tolist()

    def test_streams_are_independent(self):
        """Test el flujo separa guía y planificador"""
        planner = make_rng(5, STREAM_PLANNER).random(4).tolist()
        lead = make_rng(5, STREAM_LEAD).random(4).tolist()
        assert planner != lead

    def test_offset_seeds_differ(self):
        """Test semillas consecutivas dan secuencias distintas"""
        assert make_rng(5).random(4).tolist() != make_rng(6).random(4).tolist()
