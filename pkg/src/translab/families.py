"""Random test objects shared by the experiments and the test-suite.

Measures come with a closed-form Fourier transform so that quadrature
results can be compared against an independent route.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import measure as msr
from .besov import MultiplierSymbol
from .gridfn import GridSpec
from .groups import MatrixGroup, MultiplicationGroup, ShiftGroup, symbol_sine


@dataclass(frozen=True)
class Mixture:
    """Atoms, Gaussian bumps and two-sided exponentials with complex weights."""

    atoms: tuple = ()  # (location, weight)
    gaussians: tuple = ()  # (center, variance, weight)
    exponentials: tuple = ()  # (rate, weight)

    def reach(self) -> float:
        r = [abs(a) for a, _ in self.atoms]
        r += [abs(c) + 8.0 * math.sqrt(v) for c, v, _ in self.gaussians]
        r += [36.0 / rate for rate, _ in self.exponentials]
        return max(r, default=0.0)

    def decay(self) -> float:
        if self.exponentials:
            return min(rate for rate, _ in self.exponentials) * (1 - 1e-9)
        return math.inf

    def measure(self, h: float = 0.01, half_width: float | None = None) -> msr.Measure:
        if not (self.gaussians or self.exponentials):
            return msr.Measure(tuple(self.atoms), None, math.inf)
        hw = half_width if half_width is not None else math.ceil(self.reach() + 1.0)
        n = int(math.floor(2 * hw / h + 1e-9))
        n -= n % 2  # samples on [-hw, hw), even count

        def density(s):
            out = np.zeros_like(s, dtype=complex)
            for c, v, w in self.gaussians:
                out += w * np.exp(-0.5 * (s - c) ** 2 / v) / math.sqrt(2 * math.pi * v)
            for rate, w in self.exponentials:
                out += w * 0.5 * rate * np.exp(-rate * np.abs(s))
            return out

        return msr.from_function(density, -hw, h, n, self.decay(), atoms=tuple(self.atoms))

    def fourier(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros_like(z)
        for a, w in self.atoms:
            out += w * np.exp(-1j * a * z)
        for c, v, w in self.gaussians:
            out += w * np.exp(-1j * c * z - 0.5 * v * z * z)
        for rate, w in self.exponentials:
            out += w * rate * rate / (rate * rate + z * z)
        return out

    def fourier_derivative(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros_like(z)
        for a, w in self.atoms:
            out += -1j * a * w * np.exp(-1j * a * z)
        for c, v, w in self.gaussians:
            out += (-1j * c - v * z) * w * np.exp(-1j * c * z - 0.5 * v * z * z)
        for rate, w in self.exponentials:
            out += -2 * z * w * rate * rate / (rate * rate + z * z) ** 2
        return out

    def symbol(self) -> MultiplierSymbol:
        return MultiplierSymbol(self.fourier, self.fourier_derivative)

    def weighted_symbol(self, omega: float) -> MultiplierSymbol:
        """Transform of ``cosh(omega s) mu(ds)``: the mean of the transform at ``z +- i omega``."""
        if not omega < self.decay():
            raise ValueError(f"cosh weight {omega:g} needs decay above it")
        w = 1j * omega
        return MultiplierSymbol(
            lambda z: 0.5 * (self.fourier(np.asarray(z) + w) + self.fourier(np.asarray(z) - w)),
            lambda z: 0.5 * (self.fourier_derivative(np.asarray(z) + w) + self.fourier_derivative(np.asarray(z) - w)))


def _weight(rng: np.random.Generator, scale: float = 1.0) -> complex:
    return complex(scale * rng.standard_normal(), scale * rng.standard_normal())


def random_mixture(rng: np.random.Generator, atoms: int = 2, gaussians: int = 2,
                   exponentials: int = 0, spread: float = 2.0,
                   variance: tuple[float, float] = (0.1, 0.6)) -> Mixture:
    """Random mixture whose atoms and bump centres lie in ``[-spread, spread]``."""
    return Mixture(
        tuple((float(rng.uniform(-spread, spread)), _weight(rng)) for _ in range(atoms)),
        tuple((float(rng.uniform(-spread / 2, spread / 2)), float(rng.uniform(*variance)), _weight(rng))
              for _ in range(gaussians)),
        tuple((float(rng.uniform(1.5, 4.0)), _weight(rng)) for _ in range(exponentials)),
    )


def bounded_mixture(rng: np.random.Generator, n: float, bumps: int = 2) -> Mixture:
    """Atoms and narrow bumps that stay (numerically) inside ``[-n, n]``."""
    atoms = tuple((float(rng.uniform(-n, n)), _weight(rng)) for _ in range(2))
    gs = []
    for _ in range(bumps):
        v = float(rng.uniform(0.01, 0.03))
        c = float(rng.uniform(-n + 8 * math.sqrt(v), n - 8 * math.sqrt(v)))
        gs.append((c, v, _weight(rng)))
    return Mixture(atoms, tuple(gs))


def truncated(mix: Mixture, n: float, h: float = 0.005) -> msr.Measure:
    """Sample the mixture's density only on ``[-n, n]``."""
    return mix.measure(h=h, half_width=n)


# -- groups ----------------------------------------------------------------


def diagonal_group(rng: np.random.Generator, d: int = 16, spread: float = 5.0) -> MatrixGroup:
    return MatrixGroup(np.diag(rng.uniform(-spread, spread, d)))


def nonnormal_group(rng: np.random.Generator, d: int = 6, spread: float = 3.0,
                    skew: float = 0.4, growth: float = 0.0) -> MatrixGroup:
    """``V diag(a) V^{-1}`` with real ``a`` (plus imaginary parts up to ``growth``)."""
    v = np.eye(d) + skew * rng.standard_normal((d, d))
    a = rng.uniform(-spread, spread, d).astype(complex)
    if growth:
        a += 1j * rng.uniform(-growth, growth, d)
        a[0] = a[0].real + 1j * growth
    return MatrixGroup(v @ np.diag(a) @ np.linalg.inv(v))


def jordan_group(rng: np.random.Generator, d: int = 4, shift: float | None = None,
                 coupling: float | None = None) -> MatrixGroup:
    """One Jordan block: polynomially growing, type zero, not bounded."""
    a = float(rng.uniform(-2, 2)) if shift is None else shift
    e = float(rng.uniform(0.3, 1.5)) if coupling is None else coupling
    return MatrixGroup(a * np.eye(d) + e * np.diag(np.ones(d - 1), 1))


def jordan_oracle(matrix: np.ndarray, derivatives) -> np.ndarray:
    """``f(J) = sum_n f^(n)(a) N^n / n!`` for ``J = a I + N`` upper bidiagonal."""
    d = matrix.shape[0]
    a = matrix[0, 0]
    nil = matrix - a * np.eye(d)
    out = np.zeros((d, d), dtype=complex)
    power = np.eye(d, dtype=complex)
    for n in range(d):
        out += derivatives(n, a) / math.factorial(n) * power
        power = power @ nil
    return out


def rational_derivative(lam: complex, power: int, scale: complex = 1.0):
    """``n``-th derivative of ``scale (lam - z)^{-power}``."""
    def deriv(n: int, z):
        coeff = math.factorial(power + n - 1) / math.factorial(power - 1)
        return scale * coeff * (lam - z) ** (-power - n)
    return deriv


# -- grid functions -----------------------------------------------------------


@dataclass(frozen=True)
class WavePacket:
    """Sum of modulated Gaussians; defined on the whole line."""

    terms: tuple = field(default_factory=tuple)  # (center, width, frequency, weight)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape, dtype=complex)
        for c, w, nu, a in self.terms:
            out += a * np.exp(-0.5 * ((t - c) / w) ** 2 + 1j * nu * t)
        return out


def random_packet(rng: np.random.Generator, max_frequency: float, centers: float = 2.0,
                  widths: tuple[float, float] = (0.4, 1.0)) -> WavePacket:
    k = int(rng.integers(1, 4))
    return WavePacket(tuple((float(rng.uniform(-centers, centers)), float(rng.uniform(*widths)),
                             float(rng.uniform(-max_frequency, max_frequency)), _weight(rng))
                            for _ in range(k)))


def shift_group(spec: GridSpec) -> ShiftGroup:
    return ShiftGroup(spec, 2.0)


def multiplication_group(spec: GridSpec) -> MultiplicationGroup:
    return MultiplicationGroup(spec, symbol_sine(2.0, 1.0), 2.0)
