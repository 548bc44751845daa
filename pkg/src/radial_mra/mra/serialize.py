"""JSON export of sampled scaling/wavelet families.

Document layout (all arrays flattened in C order):

    {
      "format": "radial-mra-family/1",
      "rank": n,
      "name": str,
      "calibration_constant": float,       # |H phi(0)|
      "frequency_grid": {"nodes_per_axis": N, "half_width": h},   # midpoints of [-h, h)^n
      "symbol_grid": {"nodes_per_axis": m},                        # midpoints of [0, 2 pi)^n
      "frequency": {"phi": {"re": [...], "im": [...]}, "psi1": ..., ...},
      "symbols": {"row0": {"re": [...], "im": [...]}, "row1": ..., ...}
    }

"row i" holds beta^i(xi) delta(xi), which stays bounded where delta has poles.
Floats are written with ``repr`` precision, so a round trip is exact.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Dict

import numpy as np

from .filters import WaveletFamily
from .periodic import torus_nodes

__all__ = ["FORMAT", "FamilySamples", "sample_family", "to_json", "from_json"]

FORMAT = "radial-mra-family/1"


@dataclass(frozen=True)
class FamilySamples:
    rank: int
    name: str
    calibration_constant: float
    freq_nodes: int
    half_width: float
    symbol_nodes: int
    frequency: Dict[str, np.ndarray]
    symbols: Dict[str, np.ndarray]

    def frequency_points(self) -> np.ndarray:
        h, m = self.half_width, self.freq_nodes
        t = 2 * h * (np.arange(m) + 0.5) / m - h
        return np.stack(np.meshgrid(*([t] * self.rank), indexing="ij"), axis=-1).reshape(-1, self.rank)

    def symbol_points(self) -> np.ndarray:
        return torus_nodes(self.rank, self.symbol_nodes)

    def equals(self, other: "FamilySamples") -> bool:
        """Bitwise equality of all arrays and metadata."""
        if (self.rank, self.name, self.calibration_constant, self.freq_nodes, self.half_width, self.symbol_nodes) != (
                other.rank, other.name, other.calibration_constant, other.freq_nodes, other.half_width, other.symbol_nodes):
            return False
        for a, b in ((self.frequency, other.frequency), (self.symbols, other.symbols)):
            if a.keys() != b.keys():
                return False
            if not all(a[k].tobytes() == b[k].tobytes() for k in a):
                return False
        return True


def sample_family(family: WaveletFamily, freq_nodes: int = 32, half_width: float = 2 * np.pi,
                  symbol_nodes: int = 32) -> FamilySamples:
    n = family.n
    fs = FamilySamples(n, family.name, 0.0, freq_nodes, float(half_width), symbol_nodes, {}, {})
    fpts = fs.frequency_points()
    spts = fs.symbol_points()
    frequency = {"phi": np.asarray(family.phi(fpts), dtype=complex)}
    for i, prof in enumerate(family.profiles, start=1):
        frequency[f"psi{i}"] = np.asarray(prof(fpts), dtype=complex)
    symbols = {f"row{i}": np.asarray(row(spts), dtype=complex) for i, row in enumerate(family.rows)}
    kappa = float(abs(family.phi(np.zeros((1, n)))[0]))
    return FamilySamples(n, family.name, kappa, freq_nodes, float(half_width), symbol_nodes, frequency, symbols)


def _pack(arr: np.ndarray) -> dict:
    return {"re": [float(v) for v in arr.real], "im": [float(v) for v in arr.imag]}


def _unpack(d: dict) -> np.ndarray:
    re = np.asarray(d["re"], dtype=float)
    out = np.empty(re.shape, dtype=complex)
    out.real = re
    out.imag = np.asarray(d["im"], dtype=float)
    return out


def to_json(samples: FamilySamples) -> str:
    doc = {
        "format": FORMAT,
        "rank": samples.rank,
        "name": samples.name,
        "calibration_constant": samples.calibration_constant,
        "frequency_grid": {"nodes_per_axis": samples.freq_nodes, "half_width": samples.half_width},
        "symbol_grid": {"nodes_per_axis": samples.symbol_nodes},
        "frequency": {k: _pack(v) for k, v in samples.frequency.items()},
        "symbols": {k: _pack(v) for k, v in samples.symbols.items()},
    }
    return json.dumps(doc, allow_nan=False, sort_keys=True)


def from_json(text: str) -> FamilySamples:
    doc = json.loads(text)
    if doc.get("format") != FORMAT:
        raise ValueError(f"unsupported format {doc.get('format')!r}")
    return FamilySamples(
        int(doc["rank"]),
        doc["name"],
        float(doc["calibration_constant"]),
        int(doc["frequency_grid"]["nodes_per_axis"]),
        float(doc["frequency_grid"]["half_width"]),
        int(doc["symbol_grid"]["nodes_per_axis"]),
        {k: _unpack(v) for k, v in doc["frequency"].items()},
        {k: _unpack(v) for k, v in doc["symbols"].items()},
    )
