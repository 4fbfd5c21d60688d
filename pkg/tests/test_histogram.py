"""Tests for shot histograms."""

import pytest

from src.adaptiveprep.simulation.histogram import ShotHistogram, bitstring


class TestShotHistogram:
    """Test cases for ShotHistogram."""

    def setup_method(self) -> None:
        """Set up test fixtures."""
        self.histogram = ShotHistogram({"000": 5, "111": 3, "010": 2}, rejected=10)

    def test_totals(self) -> None:
        assert self.histogram.shots == 10
        assert self.histogram.total == 20
        assert self.histogram.acceptance_rate == pytest.approx(0.5)

    def test_hamming_view(self) -> None:
        assert self.histogram.hamming() == {0: 5, 1: 2, 3: 3}

    def test_probabilities(self) -> None:
        assert self.histogram.probabilities()["000"] == pytest.approx(0.5)
        assert ShotHistogram().probabilities() == {}
        assert ShotHistogram().acceptance_rate == 0.0

    def test_unequal_lengths_rejected(self) -> None:
        with pytest.raises(ValueError, match="same length"):
            self.histogram.add("0101")

    def test_negative_counts_rejected(self) -> None:
        with pytest.raises(ValueError, match="non-negative"):
            ShotHistogram({"0": -1})
        with pytest.raises(ValueError, match="non-negative"):
            ShotHistogram(rejected=-1)

    def test_merge(self) -> None:
        merged = self.histogram.merge(ShotHistogram({"111": 1}, rejected=2))
        assert merged.counts["111"] == 4
        assert merged.rejected == 12

    def test_bitstring(self) -> None:
        assert bitstring(5, 4) == "0101"
        assert bitstring(0, 0) == ""

    def test_csv_round_trip(self, tmp_path) -> None:
        """Test that leading zeros survive the CSV file."""
        path = tmp_path / "counts.csv"
        self.histogram.to_csv(path)
        again = ShotHistogram.from_csv(path)
        assert again.counts == self.histogram.counts

    def test_hamming_csv_cannot_be_read_back(self, tmp_path) -> None:
        path = tmp_path / "weights.csv"
        self.histogram.to_csv(path, by="hamming")
        assert path.read_text().splitlines()[0] == "hamming_weight,count"
        with pytest.raises(ValueError, match="Hamming-weight table"):
            ShotHistogram.from_csv(path)

    def test_unknown_view(self) -> None:
        with pytest.raises(ValueError, match="Unknown histogram view"):
            self.histogram.to_frame("weight")
