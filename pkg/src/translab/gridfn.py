"""Vector-valued functions sampled on a truncated periodic line.

The line is modeled as the circle ``[-R, R)`` with ``N`` equispaced samples.
Each sample is a ``d``-dimensional complex vector (the fiber), measured with
its own exponent; the Bochner exponent of the outer ``L^p`` norm is chosen
per call.  Functions are treated as trigonometric polynomials, so shifts and
derivatives are done on the frequency side and are exact in that model.
"""

from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import measure as msr


@dataclass(frozen=True)
class GridSpec:
    half_length: float
    samples: int
    fiber_dim: int = 1
    fiber_exponent: float = 2.0
    fiber_weight: float = 1.0

    def __post_init__(self):
        n = self.samples
        if self.half_length <= 0:
            raise ValueError("half_length must be positive")
        if n < 8 or n & (n - 1):
            raise ValueError("samples must be a power of two, at least 8")
        if self.fiber_dim < 1:
            raise ValueError("fiber_dim must be at least 1")
        if self.fiber_exponent < 1:
            raise ValueError("fiber exponent must lie in [1, inf]")

    @property
    def h(self) -> float:
        return 2.0 * self.half_length / self.samples

    @property
    def t(self) -> np.ndarray:
        return -self.half_length + self.h * np.arange(self.samples)

    @property
    def xi(self) -> np.ndarray:
        """Angular frequencies in FFT order."""
        return 2.0 * math.pi * np.fft.fftfreq(self.samples, d=self.h)

    @property
    def nyquist(self) -> float:
        return math.pi / self.h

    def refined(self) -> "GridSpec":
        """Double both the window and the sample count (spacing unchanged)."""
        return GridSpec(2 * self.half_length, 2 * self.samples, self.fiber_dim,
                        self.fiber_exponent, self.fiber_weight)

    def with_fiber(self, dim: int, exponent: float | None = None,
                   weight: float | None = None) -> "GridSpec":
        return GridSpec(self.half_length, self.samples, dim,
                        self.fiber_exponent if exponent is None else exponent,
                        self.fiber_weight if weight is None else weight)


@dataclass(frozen=True, eq=False)
class GridFunction:
    spec: GridSpec
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.ndim == 1:
            v = v[:, None]
        if v.shape != (self.spec.samples, self.spec.fiber_dim):
            raise ValueError(f"values have shape {v.shape}, expected "
                             f"{(self.spec.samples, self.spec.fiber_dim)}")
        if not np.all(np.isfinite(v)):
            raise ValueError("grid function has non-finite entries")
        object.__setattr__(self, "values", v)

    @classmethod
    def sample(cls, spec: GridSpec, fn) -> "GridFunction":
        return cls(spec, fn(spec.t))

    @classmethod
    def zeros(cls, spec: GridSpec) -> "GridFunction":
        return cls(spec, np.zeros((spec.samples, spec.fiber_dim), dtype=complex))

    def spectrum(self) -> np.ndarray:
        return np.fft.fft(self.values, axis=0)

    @classmethod
    def from_spectrum(cls, spec: GridSpec, spec_values: np.ndarray) -> "GridFunction":
        return cls(spec, np.fft.ifft(spec_values, axis=0))

    def __add__(self, other):
        return GridFunction(self.spec, self.values + other.values)

    def __sub__(self, other):
        return GridFunction(self.spec, self.values - other.values)

    def __mul__(self, c):
        return GridFunction(self.spec, self.values * c)

    __rmul__ = __mul__


def fiber_norms(spec: GridSpec, values: np.ndarray) -> np.ndarray:
    v = np.abs(values)
    pf = spec.fiber_exponent
    if math.isinf(pf):
        out = v.max(axis=-1)
    else:
        out = (v ** pf).sum(axis=-1) ** (1.0 / pf)
    return spec.fiber_weight * out


def lp_norm(f: GridFunction, p: float) -> float:
    """Discrete Bochner norm ``(h sum_t |f(t)|^p)^{1/p}``; max of fiber norms for ``p = inf``."""
    nrm = fiber_norms(f.spec, f.values)
    if math.isinf(p):
        return float(nrm.max())
    return float((f.spec.h * np.sum(nrm ** p)) ** (1.0 / p))


def derivative(f: GridFunction) -> GridFunction:
    """Spectral derivative (spectrum times ``i xi``)."""
    xi = f.spec.xi[:, None]
    return GridFunction.from_spectrum(f.spec, 1j * xi * f.spectrum())


def sobolev_norm(f: GridFunction, p: float) -> float:
    """``||f||_p + ||f'||_p``."""
    return lp_norm(f, p) + lp_norm(derivative(f), p)


def translate(f: GridFunction, a: float) -> GridFunction:
    """``t -> f(t - a)`` via a frequency-side phase shift."""
    xi = f.spec.xi[:, None]
    return GridFunction.from_spectrum(f.spec, np.exp(-1j * a * xi) * f.spectrum())


def convolve_measure(mu: msr.Measure, f: GridFunction) -> GridFunction:
    """``(mu * f)(t) = int f(t - s) mu(ds)`` on the periodic grid.

    Each frequency is multiplied by the Fourier transform of ``mu``, which is
    exact for trigonometric polynomials and makes off-grid atoms exact shifts.
    """
    lo, hi = mu.support()
    if max(abs(lo), abs(hi)) > 0.5 * f.spec.half_length:
        warnings.warn("measure support exceeds half the grid window; periodic wrap-around likely",
                      RuntimeWarning, stacklevel=2)
    symbol = msr.fourier(mu, f.spec.xi)[:, None]
    return GridFunction.from_spectrum(f.spec, symbol * f.spectrum())


# -- CSV --------------------------------------------------------------------


def to_csv(f: GridFunction) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    header = ["t"]
    for k in range(1, f.spec.fiber_dim + 1):
        header += [f"re_{k}", f"im_{k}"]
    w.writerow(header)
    for t, row in zip(f.spec.t, f.values):
        rec = [repr(float(t))]
        for c in row:
            rec += [repr(float(c.real)), repr(float(c.imag))]
        w.writerow(rec)
    return buf.getvalue()


def from_csv(text: str, fiber_exponent: float = 2.0, fiber_weight: float = 1.0) -> GridFunction:
    rows = list(csv.reader(io.StringIO(text)))
    header, body = rows[0], [r for r in rows[1:] if r]
    if header[0] != "t" or (len(header) - 1) % 2:
        raise ValueError("expected columns t, re_1, im_1, ...")
    d = (len(header) - 1) // 2
    data = np.array([[float(x) for x in r] for r in body])
    t = data[:, 0]
    n = t.size
    h = float(t[1] - t[0])
    spec = GridSpec(0.5 * n * h, n, d, fiber_exponent, fiber_weight)
    if not np.allclose(t, spec.t, atol=1e-9 * max(1.0, spec.half_length)):
        raise ValueError("sample points do not form a centered periodic grid")
    vals = data[:, 1::2] + 1j * data[:, 2::2]
    return GridFunction(spec, vals)
