from __future__ import annotations

from dataclasses import dataclass

import numpy as np

AMPLITUDE_RANGE = (0.0, 256.0)
DEFAULT_BINS = 32


@dataclass(frozen=True, eq=False)
class BinningScheme:
    """Amplitude bins given by ``bin_count + 1`` strictly increasing edges."""

    edges: np.ndarray

    def __post_init__(self):
        edges = np.asarray(self.edges, dtype=float)
        if edges.ndim != 1 or edges.size < 3:
            raise ValueError("need at least 2 bins (3 edges)")
        if not np.all(np.diff(edges) > 0):
            raise ValueError("bin edges must be strictly increasing")
        edges.setflags(write=False)
        object.__setattr__(self, "edges", edges)

    @classmethod
    def uniform(cls, bin_count: int = DEFAULT_BINS, lo: float = AMPLITUDE_RANGE[0], hi: float = AMPLITUDE_RANGE[1]):
        if bin_count < 2:
            raise ValueError("bin_count must be >= 2")
        return cls(np.linspace(lo, hi, bin_count + 1))

    @property
    def bin_count(self) -> int:
        return self.edges.size - 1

    @property
    def min_width(self) -> float:
        return float(np.min(np.diff(self.edges)))

    def index(self, values) -> np.ndarray:
        """Bin index of each value; out-of-range values clamp to the extreme bins."""
        idx = np.searchsorted(self.edges, np.asarray(values, dtype=float), side="right") - 1
        return np.clip(idx, 0, self.bin_count - 1)

    def __eq__(self, other):
        return isinstance(other, BinningScheme) and np.array_equal(self.edges, other.edges)

    def __hash__(self):
        return hash(self.edges.tobytes())

    def to_json_dict(self) -> dict:
        return {"edges": self.edges.tolist()}

    @classmethod
    def from_json_dict(cls, d) -> "BinningScheme":
        if isinstance(d, int):
            return cls.uniform(d)
        if "edges" in d:
            return cls(np.asarray(d["edges"], dtype=float))
        lo, hi = d.get("range", AMPLITUDE_RANGE)
        return cls.uniform(int(d["bins"]), lo, hi)
