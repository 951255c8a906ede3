"""Periodic sampled fields on a uniform grid in one or two dimensions.

The grid covers [0, L)^d with n points per axis; x = 0 is index 0.  The
spectrum approximates the continuous Fourier transform,
F(xi_k) = dx^d * sum_j f(x_j) e^{-i xi_k x_j}, on the lattice xi_k = 2 pi k / L.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


@dataclass(frozen=True)
class GridSpec:
    n: int
    length: float
    dim: int = 1

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ValueError(f"dim must be 1 or 2, got {self.dim}")
        if self.n < 2 or self.length <= 0:
            raise ValueError("need n >= 2 and length > 0")

    @property
    def shape(self):
        return (self.n,) * self.dim

    @property
    def dx(self):
        return self.length / self.n

    @property
    def dxi(self):
        """Lattice spacing in wavenumber space."""
        return 2.0 * np.pi / self.length

    def coords(self):
        x = np.arange(self.n) * self.dx
        return np.meshgrid(*([x] * self.dim), indexing="ij")

    def lattice(self):
        """Integer wavevector indices k, one array per axis (FFT ordering)."""
        k = np.fft.fftfreq(self.n, d=1.0 / self.n).round().astype(np.int64)
        return np.meshgrid(*([k] * self.dim), indexing="ij")

    def wavevectors(self):
        return [self.dxi * k for k in self.lattice()]

    def lattice_norm2(self):
        """|k|^2 in integer lattice units (exact, used for grouping by |xi|)."""
        return sum(k * k for k in self.lattice())

    def wavenumbers(self):
        return self.dxi * np.sqrt(self.lattice_norm2().astype(float))

    def to_dict(self):
        return {"n": self.n, "length": self.length, "dim": self.dim}


@dataclass
class GridField:
    spec: GridSpec
    values: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != self.spec.shape:
            raise ValueError(f"values shape {self.values.shape} != grid {self.spec.shape}")
        self._spectrum = None

    @classmethod
    def from_spectrum(cls, spec: GridSpec, spectrum, meta=None):
        spectrum = np.asarray(spectrum, dtype=complex)
        values = np.fft.ifftn(spectrum) / spec.dx**spec.dim
        out = cls(spec, values, dict(meta or {}))
        out._spectrum = spectrum.copy()
        return out

    @property
    def spectrum(self):
        if self._spectrum is None:
            self._spectrum = np.fft.fftn(self.values) * self.spec.dx**self.spec.dim
        return self._spectrum

    def inverse(self):
        """Values recomputed from the spectrum (round-trip check)."""
        return np.fft.ifftn(self.spectrum) / self.spec.dx**self.spec.dim

    def norm(self, p=2.0):
        """Grid approximation of the L_p norm over the periodic box."""
        w = self.spec.dx**self.spec.dim
        if np.isinf(p):
            return float(np.abs(self.values).max())
        return float((np.sum(np.abs(self.values) ** p) * w) ** (1.0 / p))

    def spectral_norm(self):
        """L_2 norm computed from the spectrum (Parseval)."""
        return float(np.sqrt(np.sum(np.abs(self.spectrum) ** 2) / self.spec.length**self.spec.dim))

    def support(self, rel=1e-12):
        """Mask of spectral coefficients above rel * max."""
        mag = np.abs(self.spectrum)
        top = mag.max()
        return mag > rel * top if top > 0 else np.zeros(mag.shape, dtype=bool)

    def scaled(self, factor):
        return GridField(self.spec, self.values * factor, dict(self.meta))

    def save(self, stem, extra=None):
        """Write <stem>.bin (little-endian float64, interleaved re/im) and <stem>.json."""
        stem = Path(stem)
        data = np.empty(self.values.shape + (2,), dtype="<f8")
        data[..., 0] = self.values.real
        data[..., 1] = self.values.imag
        bin_path = stem.with_suffix(".bin")
        json_path = stem.with_suffix(".json")
        atomic_write(bin_path, data.tobytes(order="C"))
        side = {
            "dims": list(self.values.shape),
            "L": self.spec.length,
            "dtype": "<f8",
            "layout": "interleaved-complex, C order",
            **self.meta,
            **(extra or {}),
        }
        atomic_write(json_path, (json.dumps(side, indent=2, sort_keys=True) + "\n").encode())
        return bin_path, json_path

    @classmethod
    def load(cls, stem):
        stem = Path(stem)
        side = json.loads(stem.with_suffix(".json").read_text())
        dims = tuple(side["dims"])
        raw = np.frombuffer(stem.with_suffix(".bin").read_bytes(), dtype="<f8")
        raw = raw.reshape(dims + (2,))
        spec = GridSpec(dims[0], float(side["L"]), len(dims))
        meta = {k: v for k, v in side.items() if k not in ("dims", "L", "dtype", "layout")}
        return cls(spec, raw[..., 0] + 1j * raw[..., 1], meta)


def atomic_write(path, data: bytes):
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(data)
    tmp.replace(path)
