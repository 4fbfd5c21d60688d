"""Shot histograms over measured bitstrings, with Hamming-weight views and CSV export."""

from pathlib import Path
from typing import Dict, Optional, Union

import pandas as pd

BY_BITSTRING = "bitstring"
BY_HAMMING = "hamming"


def bitstring(index: int, width: int) -> str:
    """Binary string of ``index`` with the most significant bit first."""
    return format(index, f"0{width}b") if width else ""


class ShotHistogram:
    """Counts per bitstring plus the number of shots rejected by postselection."""

    def __init__(self, counts: Optional[Dict[str, int]] = None, rejected: int = 0) -> None:
        """Initialize a histogram.

        Raises:
            ValueError: On negative counts or bitstrings of unequal length
        """
        self.counts: Dict[str, int] = {}
        self.rejected = rejected
        if rejected < 0:
            raise ValueError("Rejected shot count must be non-negative")
        for key, count in (counts or {}).items():
            self.add(key, count)

    def add(self, key: str, count: int = 1) -> None:
        if count < 0:
            raise ValueError("Counts must be non-negative")
        if self.counts and len(key) != len(next(iter(self.counts))):
            raise ValueError("All bitstrings must have the same length")
        if count:
            self.counts[key] = self.counts.get(key, 0) + count

    @property
    def shots(self) -> int:
        """Accepted shots."""
        return sum(self.counts.values())

    @property
    def total(self) -> int:
        return self.shots + self.rejected

    @property
    def acceptance_rate(self) -> float:
        return self.shots / self.total if self.total else 0.0

    def hamming(self) -> Dict[int, int]:
        """Counts per Hamming weight."""
        weights: Dict[int, int] = {}
        for key, count in self.counts.items():
            weight = key.count("1")
            weights[weight] = weights.get(weight, 0) + count
        return dict(sorted(weights.items()))

    def probabilities(self) -> Dict[str, float]:
        shots = self.shots
        return {key: count / shots for key, count in sorted(self.counts.items())} if shots else {}

    def support(self) -> set:
        return set(self.counts)

    def merge(self, other: "ShotHistogram") -> "ShotHistogram":
        merged = ShotHistogram(self.counts, self.rejected + other.rejected)
        for key, count in other.counts.items():
            merged.add(key, count)
        return merged

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, ShotHistogram)
            and self.counts == other.counts
            and self.rejected == other.rejected
        )

    def __repr__(self) -> str:
        return f"ShotHistogram(shots={self.shots}, rejected={self.rejected}, outcomes={len(self.counts)})"

    def to_frame(self, by: str = BY_BITSTRING) -> pd.DataFrame:
        """Table with columns ``bitstring,count`` or ``hamming_weight,count``."""
        if by == BY_BITSTRING:
            rows = sorted(self.counts.items())
            return pd.DataFrame(rows, columns=["bitstring", "count"])
        if by == BY_HAMMING:
            return pd.DataFrame(list(self.hamming().items()), columns=["hamming_weight", "count"])
        raise ValueError(f"Unknown histogram view {by!r}; use 'bitstring' or 'hamming'")

    def to_csv(self, path: Union[str, Path], by: str = BY_BITSTRING) -> None:
        self.to_frame(by).to_csv(path, index=False)

    @classmethod
    def from_csv(cls, path: Union[str, Path]) -> "ShotHistogram":
        """Read a ``bitstring,count`` table written by ``to_csv``.

        Raises:
            ValueError: If the file is a Hamming-weight table or lacks the columns
        """
        frame = pd.read_csv(path, dtype={"bitstring": str})
        if "hamming_weight" in frame.columns:
            raise ValueError("Cannot rebuild bitstring counts from a Hamming-weight table")
        if list(frame.columns) != ["bitstring", "count"]:
            raise ValueError("Histogram CSV must have columns bitstring,count")
        return cls({str(b): int(c) for b, c in zip(frame["bitstring"], frame["count"])})
