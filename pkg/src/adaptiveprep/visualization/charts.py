"""Charts for shot histograms and crossover thresholds."""

import logging
from typing import List, Optional, Sequence, Tuple

import matplotlib.pyplot as plt
import numpy as np

from ..simulation.histogram import BY_BITSTRING, BY_HAMMING, ShotHistogram

logger = logging.getLogger(__name__)


class Visualization:
    """Create matplotlib charts from simulation and crossover results.

    Every method saves the figure when ``save_path`` is given (the format
    follows the file extension, e.g. ``.svg``) and shows it otherwise.
    """

    def __init__(self) -> None:
        plt.style.use('default')

    def _finish(self, save_path: Optional[str]) -> None:
        plt.tight_layout()
        if save_path:
            plt.savefig(save_path, dpi=300, bbox_inches='tight')
            plt.close()
            logger.info("Saved chart to %s", save_path)
        else:
            plt.show()

    def create_hamming_histogram(
        self,
        histogram: ShotHistogram,
        title: str = "Measurement outcomes",
        by: str = BY_HAMMING,
        save_path: Optional[str] = None,
    ) -> None:
        """Bar chart of shot counts per Hamming weight or per bitstring.

        Args:
            histogram: Shot histogram to plot
            title: Chart title
            by: ``hamming`` or ``bitstring``
            save_path: Optional path to save the chart

        Raises:
            ValueError: If the histogram is empty or ``by`` is unknown
        """
        if histogram.shots == 0:
            raise ValueError("Histogram has no accepted shots")
        frame = histogram.to_frame(by)
        plt.figure(figsize=(10, 6))
        if by == BY_HAMMING:
            width = len(next(iter(histogram.counts)))
            counts = dict(zip(frame["hamming_weight"], frame["count"]))
            weights = np.arange(width + 1)
            plt.bar(weights, [counts.get(w, 0) for w in weights], color='skyblue', edgecolor='black')
            plt.xticks(weights)
            plt.xlabel('Hamming weight', fontsize=12)
        else:
            positions = np.arange(len(frame))
            plt.bar(positions, frame["count"], color='skyblue', edgecolor='black')
            plt.xticks(positions, frame[BY_BITSTRING], rotation=90, fontsize=8)
            plt.xlabel('Bitstring', fontsize=12)
        plt.ylabel('Shots', fontsize=12)
        if histogram.rejected:
            title = f"{title} (acceptance {histogram.acceptance_rate:.3f})"
        plt.title(title, fontsize=14, fontweight='bold')
        plt.grid(True, axis='y', alpha=0.3)
        self._finish(save_path)

    def create_crossover_chart(
        self,
        thresholds: List[Tuple[int, float]],
        ratio: Optional[float] = None,
        title: str = "Adaptive crossover threshold",
        save_path: Optional[str] = None,
    ) -> None:
        """Threshold T(n) against n, with the device's cost ratio as a horizontal line.

        The adaptive preparation wins wherever the ratio lies on or below the curve.

        Raises:
            ValueError: If no thresholds are given
        """
        if not thresholds:
            raise ValueError("No thresholds to plot")
        sizes, values = zip(*thresholds)
        plt.figure(figsize=(10, 6))
        plt.plot(sizes, values, 'b-o', linewidth=2, markersize=4, label='Threshold T(n)')
        if ratio is not None:
            plt.axhline(ratio, color='red', linestyle='--', linewidth=2, label=f'Cost ratio {ratio:.3f}')
        plt.xlabel('Number of qubits n', fontsize=12)
        plt.ylabel('log p_d / log p_id', fontsize=12)
        plt.title(title, fontsize=14, fontweight='bold')
        plt.grid(True, alpha=0.3)
        plt.legend()
        self._finish(save_path)

    def create_success_chart(
        self,
        sizes: Sequence[int],
        series: List[Tuple[str, Sequence[float]]],
        title: str = "Worst-case success probability",
        save_path: Optional[str] = None,
    ) -> None:
        """Success probability of several preparations against n on a log axis.

        Raises:
            ValueError: If a series length differs from the sizes
        """
        plt.figure(figsize=(10, 6))
        for label, values in series:
            if len(values) != len(sizes):
                raise ValueError("Sizes and values must have the same length")
            plt.semilogy(sizes, values, linewidth=2, label=label)
        plt.xlabel('Number of qubits n', fontsize=12)
        plt.ylabel('Success probability', fontsize=12)
        plt.title(title, fontsize=14, fontweight='bold')
        plt.grid(True, alpha=0.3)
        plt.legend()
        self._finish(save_path)
