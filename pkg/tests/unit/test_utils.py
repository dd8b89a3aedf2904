"""Unit tests for the utils module"""

import time
from unittest.mock import patch

import pytest

from src.wavecv.utils import PerformanceTracker, performance_monitor


class TestPerformanceMonitor:
    """Test the performance_monitor decorator."""

    def test_performance_monitor_decorator(self):
        """Return values pass through and the duration is logged once."""

        @performance_monitor
        def smooth():
            return "estimate"

        with patch("src.wavecv.utils.logger") as mock_logger:
            assert smooth() == "estimate"
            mock_logger.debug.assert_called_once()
            message = mock_logger.debug.call_args[0][0]
            assert "smooth took" in message
            assert "seconds" in message

    def test_performance_monitor_with_exception(self):
        """The duration is logged even when the call raises."""

        @performance_monitor
        def failing():
            raise ValueError("bad input")

        with patch("src.wavecv.utils.logger") as mock_logger:
            with pytest.raises(ValueError, match="bad input"):
                failing()
            mock_logger.debug.assert_called_once()

    def test_performance_monitor_preserves_metadata(self):
        @performance_monitor
        def documented(a, b=2):
            """Docstring."""
            return a + b

        assert documented.__name__ == "documented"
        assert documented.__doc__ == "Docstring."
        assert documented(1, b=3) == 4


class TestPerformanceTracker:
    """Test the PerformanceTracker context manager."""

    def test_elapsed_is_recorded(self):
        with patch("src.wavecv.utils.logger") as mock_logger:
            with PerformanceTracker("cell wave/n=64") as tracker:
                time.sleep(0.01)
            assert tracker.elapsed >= 0.01
            message = mock_logger.debug.call_args[0][0]
            assert "cell wave/n=64 took" in message

    def test_elapsed_before_exit(self):
        tracker = PerformanceTracker("idle")
        assert tracker.elapsed == 0.0
