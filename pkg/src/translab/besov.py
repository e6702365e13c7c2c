"""Littlewood-Paley blocks, inhomogeneous Besov norms and Fourier multipliers."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import optimize

from . import bump
from .errors import MissingDerivative
from .gridfn import GridFunction, GridSpec, lp_norm


def phi(k: int, xi) -> np.ndarray:
    """Weight of dyadic block ``k`` at frequency ``xi`` (any real array)."""
    a = np.abs(np.asarray(xi, dtype=float))
    if k == 0:
        return bump.smoothstep(a)
    return bump.lp_profile(a / 2.0 ** k)


def max_block(nyquist: float) -> int:
    """Smallest ``K`` with ``2^K >= nyquist`` (so blocks ``0..K`` sum to one below it)."""
    return max(1, int(math.ceil(math.log2(max(nyquist, 1.0)))))


@dataclass(frozen=True, eq=False)
class DyadicPartition:
    spec: GridSpec
    k_max: int
    weights: np.ndarray  # (k_max + 1, N) in FFT order

    def block(self, f: GridFunction, k: int) -> GridFunction:
        return GridFunction.from_spectrum(f.spec, self.weights[k][:, None] * f.spectrum())


def build_partition(spec: GridSpec) -> DyadicPartition:
    k_max = max_block(spec.nyquist)
    xi = spec.xi
    w = np.stack([phi(k, xi) for k in range(k_max + 1)])
    return DyadicPartition(spec, k_max, w)


def _lq(values: np.ndarray, q: float) -> float:
    if math.isinf(q):
        return float(np.max(values))
    return float(np.sum(values ** q) ** (1.0 / q))


def block_norms(f: GridFunction, p: float, partition: DyadicPartition | None = None) -> np.ndarray:
    part = partition or build_partition(f.spec)
    spec_f = f.spectrum()
    out = np.empty(part.k_max + 1)
    for k in range(part.k_max + 1):
        blk = GridFunction.from_spectrum(f.spec, part.weights[k][:, None] * spec_f)
        out[k] = lp_norm(blk, p)
    return out


def besov_norm(f: GridFunction, r: float, p: float, q: float,
               partition: DyadicPartition | None = None) -> float:
    """``|| (2^{kr} ||block_k f||_p)_k ||_{l^q}``."""
    norms = block_norms(f, p, partition)
    return _lq(2.0 ** (r * np.arange(norms.size)) * norms, q)


# -- multipliers ------------------------------------------------------------


@dataclass(frozen=True)
class MultiplierSymbol:
    value: Callable
    derivative: Callable | None = None
    band: float = math.inf  # frequencies beyond this are not represented faithfully

    @classmethod
    def constant(cls, c: complex) -> "MultiplierSymbol":
        return cls(lambda s: np.full(np.shape(s), c, dtype=complex),
                   lambda s: np.zeros(np.shape(s), dtype=complex))

    @classmethod
    def of_measure(cls, mu) -> "MultiplierSymbol":
        """Quadrature transform; a sampled density is only resolved below its Nyquist frequency."""
        from . import measure as msr
        band = math.pi / mu.density.h if mu.density is not None else math.inf
        return cls(lambda s: msr.fourier(mu, s), lambda s: msr.fourier_derivative(mu, s), band)


def multiplier_apply(m: MultiplierSymbol, f: GridFunction) -> GridFunction:
    symbol = np.asarray(m.value(f.spec.xi), dtype=complex)[:, None]
    return GridFunction.from_spectrum(f.spec, symbol * f.spectrum())


def default_search_grid() -> np.ndarray:
    lin = np.linspace(-64.0, 64.0, 16385)
    logs = np.geomspace(1e-4, 1e6, 4001)
    return np.unique(np.concatenate([lin, logs, -logs, [0.0]]))


def mikhlin_norm(m: MultiplierSymbol, grid: np.ndarray | None = None) -> float:
    """``sup_s |m(s)| + (1 + |s|) |m'(s)|`` by grid search with local refinement."""
    if m.derivative is None:
        raise MissingDerivative("Mikhlin norm needs the symbol's derivative")
    s = default_search_grid() if grid is None else np.sort(np.asarray(grid, dtype=float))
    s = s[np.abs(s) <= m.band]

    def objective(x):
        x = np.asarray(x, dtype=float)
        return np.abs(m.value(x)) + (1.0 + np.abs(x)) * np.abs(m.derivative(x))

    vals = objective(s)
    i = int(np.argmax(vals))
    inner = 1 if i == 0 else s.size - 2
    if grid is None and math.isinf(m.band) and i in (0, s.size - 1) and vals[i] > vals[inner]:
        return math.inf  # still growing at |s| = 1e6: the weight (1 + |s|) wins
    best = float(vals[i])
    lo, hi = s[max(i - 1, 0)], s[min(i + 1, s.size - 1)]
    if hi > lo:
        res = optimize.minimize_scalar(lambda x: -float(objective(np.array([x]))[0]),
                                       bounds=(lo, hi), method="bounded",
                                       options={"xatol": 1e-10 * max(1.0, abs(s[i]))})
        best = max(best, -float(res.fun))
    return best


# -- Girardi-Weis functional -------------------------------------------------

FINE_GRID = GridSpec(64.0, 4096)


def _dilation_window(k: int, fine: GridSpec) -> tuple[float, float]:
    """Range of ``log a`` keeping the dilated block inside and resolved on ``fine``."""
    outer = 2.0 if k == 0 else 2.0 ** (k + 1)
    scale = 1.0 if k == 0 else 2.0 ** (k - 1)
    a_lo = outer / (0.9 * fine.half_length)
    a_hi = scale / (16.0 * fine.h)
    lim = 20.0 * math.log(2.0)
    return max(math.log(a_lo), -lim), min(math.log(a_hi), lim)


def _dilated_block_norm(m: MultiplierSymbol, k: int, log_a: float, fine: GridSpec,
                        fine_partition: DyadicPartition) -> float:
    a = math.exp(log_a)
    x = a * fine.t
    vals = phi(k, x) * np.asarray(m.value(x), dtype=complex)
    return besov_norm(GridFunction(fine, vals), 0.5, 2.0, 1.0, fine_partition)


def block_infima(m: MultiplierSymbol, spec: GridSpec, fine: GridSpec = FINE_GRID,
                 scan: int = 33) -> np.ndarray:
    """``inf_a ||(phi_k m)(a .)||_{B^{1/2}_{2,1}}`` for each block of ``spec``."""
    fine_partition = build_partition(fine)
    k_max = max_block(spec.nyquist)
    out = np.empty(k_max + 1)
    for k in range(k_max + 1):
        lo, hi = _dilation_window(k, fine)
        grid = np.linspace(lo, hi, scan)
        vals = np.array([_dilated_block_norm(m, k, g, fine, fine_partition) for g in grid])
        j = int(np.argmin(vals))
        best = float(vals[j])
        a, b = grid[max(j - 1, 0)], grid[min(j + 1, scan - 1)]
        res = optimize.minimize_scalar(
            lambda g: _dilated_block_norm(m, k, g, fine, fine_partition),
            bounds=(a, b), method="bounded", options={"xatol": 1e-4})
        out[k] = min(best, float(res.fun))
    return out


def girardi_weis_bound(m: MultiplierSymbol, spec: GridSpec, fine: GridSpec = FINE_GRID) -> float:
    """``sup_k inf_a ||(phi_k m)(a .)||_{B^{1/2}_{2,1}}`` over the blocks of ``spec``."""
    return float(np.max(block_infima(m, spec, fine)))


# -- operator norms by probing ----------------------------------------------


def band_limited_probes(spec: GridSpec, count: int, rng: np.random.Generator,
                        fraction: float = 0.5) -> list[GridFunction]:
    """Random complex-Gaussian spectra supported below ``fraction`` of Nyquist."""
    mask = (np.abs(spec.xi) <= fraction * spec.nyquist)[:, None]
    probes = []
    for _ in range(count):
        shape = (spec.samples, spec.fiber_dim)
        z = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
        probes.append(GridFunction.from_spectrum(spec, z * mask))
    return probes


def multiplier_norm_lower(m: MultiplierSymbol, spec: GridSpec, r: float, p: float, q: float,
                          probes: int = 64, seed: int = 0) -> float:
    """Probe lower bound for ``||T_m||`` on ``B^r_{p,q}``.

    Random band-limited probes are complemented by pure exponentials at the
    grid frequency where ``|m|`` peaks and at each block center.
    """
    rng = np.random.default_rng(seed)
    part = build_partition(spec)
    candidates = band_limited_probes(spec, probes, rng)
    xi = spec.xi
    mvals = np.abs(np.asarray(m.value(xi)))
    picks = {int(np.argmax(mvals))}
    for k in range(part.k_max):
        picks.add(int(np.argmin(np.abs(xi - 2.0 ** k))))
        picks.add(int(np.argmin(np.abs(xi + 2.0 ** k))))
    vec = np.ones(spec.fiber_dim)
    for j in sorted(picks):
        candidates.append(GridFunction.sample(spec, lambda t, w=xi[j]: np.exp(1j * w * t)[:, None] * vec))
    best = 0.0
    for f in candidates:
        den = besov_norm(f, r, p, q, part)
        if den > 0:
            best = max(best, besov_norm(multiplier_apply(m, f), r, p, q, part) / den)
    return best
