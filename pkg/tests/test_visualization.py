"""Tests for Visualization class."""

from unittest.mock import patch

import matplotlib.pyplot as plt
import pytest

from src.adaptiveprep.simulation.histogram import ShotHistogram
from src.adaptiveprep.visualization.charts import Visualization


class TestVisualization:
    """Test cases for Visualization class."""

    def setup_method(self) -> None:
        """Set up test fixtures."""
        self.visualization = Visualization()
        self.histogram = ShotHistogram({"0000": 40, "1111": 38, "0100": 3}, rejected=0)

    def teardown_method(self) -> None:
        plt.close('all')

    def test_create_hamming_histogram(self) -> None:
        """Test the Hamming-weight bar chart."""
        with patch('matplotlib.pyplot.bar') as mock_bar, \
             patch('matplotlib.pyplot.title') as mock_title, \
             patch('matplotlib.pyplot.show') as mock_show:

            self.visualization.create_hamming_histogram(self.histogram, title="GHZ")

            mock_bar.assert_called_once()
            weights, heights = mock_bar.call_args[0][:2]
            assert list(weights) == [0, 1, 2, 3, 4]
            assert list(heights) == [40, 3, 0, 0, 38]
            assert mock_title.call_args[0][0] == "GHZ"
            mock_show.assert_called_once()

    def test_bitstring_view(self) -> None:
        with patch('matplotlib.pyplot.bar') as mock_bar, \
             patch('matplotlib.pyplot.show'):
            self.visualization.create_hamming_histogram(self.histogram, by="bitstring")
            assert list(mock_bar.call_args[0][1]) == [40, 3, 38]

    def test_acceptance_in_title(self) -> None:
        """Test that postselected histograms report their acceptance."""
        histogram = ShotHistogram({"0100": 25}, rejected=75)
        with patch('matplotlib.pyplot.title') as mock_title, \
             patch('matplotlib.pyplot.show'):
            self.visualization.create_hamming_histogram(histogram, title="W")
            assert mock_title.call_args[0][0] == "W (acceptance 0.250)"

    def test_empty_histogram(self) -> None:
        with pytest.raises(ValueError, match="no accepted shots"):
            self.visualization.create_hamming_histogram(ShotHistogram(rejected=10))

    def test_save_histogram(self, tmp_path) -> None:
        """Test that a save path writes the file instead of showing."""
        path = tmp_path / "histogram.svg"
        with patch('matplotlib.pyplot.show') as mock_show:
            self.visualization.create_hamming_histogram(self.histogram, save_path=str(path))
            mock_show.assert_not_called()
        assert path.exists()

    def test_create_crossover_chart(self) -> None:
        with patch('matplotlib.pyplot.plot') as mock_plot, \
             patch('matplotlib.pyplot.axhline') as mock_axhline, \
             patch('matplotlib.pyplot.legend'), \
             patch('matplotlib.pyplot.show'):

            self.visualization.create_crossover_chart([(14, 1.6), (15, 2.1)], ratio=1.89)

            assert mock_plot.call_args[0][0] == (14, 15)
            assert mock_axhline.call_args[0][0] == 1.89

    def test_crossover_chart_without_ratio(self) -> None:
        with patch('matplotlib.pyplot.axhline') as mock_axhline, \
             patch('matplotlib.pyplot.show'):
            self.visualization.create_crossover_chart([(2, -3.0), (3, -1.5)])
            mock_axhline.assert_not_called()

    def test_crossover_chart_needs_data(self) -> None:
        with pytest.raises(ValueError, match="No thresholds"):
            self.visualization.create_crossover_chart([])

    def test_create_success_chart(self) -> None:
        with patch('matplotlib.pyplot.semilogy') as mock_semilogy, \
             patch('matplotlib.pyplot.legend'), \
             patch('matplotlib.pyplot.show'):
            self.visualization.create_success_chart(
                [8, 16], [("linear", [0.5, 0.1]), ("adaptive", [0.4, 0.2])]
            )
            assert mock_semilogy.call_count == 2

    def test_success_chart_length_mismatch(self) -> None:
        with pytest.raises(ValueError, match="same length"):
            self.visualization.create_success_chart([8, 16], [("linear", [0.5])])
