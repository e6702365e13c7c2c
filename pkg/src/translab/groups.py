"""Concrete groups ``U(s) = exp(-isA)`` acting on flat complex state vectors.

Three models are provided.  ``ShiftGroup`` translates functions on the
periodic grid (``Af = i f'``), ``MultiplicationGroup`` multiplies by
``exp(-is a(t))`` for a real symbol ``a``, and ``MatrixGroup`` exponentiates
a square matrix.  Grid models store a function with values of shape
``(N, d)`` as the flattened vector of length ``N d``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
from scipy import optimize

from . import interp
from .errors import DimensionMismatch, NearSpectrum
from .gridfn import GridFunction, GridSpec, fiber_norms

_CHUNK = 1 << 21  # complex entries per batched evaluation


# -- operator norms ----------------------------------------------------------


@dataclass(frozen=True)
class NormEstimate:
    lower: float
    upper: float

    @property
    def value(self) -> float:
        return self.upper if self.upper - self.lower <= 1e-9 * max(self.upper, 1e-300) else self.lower


def _vec_pnorm(v: np.ndarray, p: float) -> float:
    return float(np.linalg.norm(v, ord=p))


def matrix_norm(m: np.ndarray, p: float, restarts: int = 8, seed: int = 0) -> NormEstimate:
    """Induced ``l^p -> l^p`` norm of a materialized matrix.

    Exact for ``p`` in ``{1, 2, inf}``.  Other exponents get a lower bound from
    a nonlinear power iteration (the dual-pairing fixed point used for
    ``p``-norm estimation) and the Riesz-Thorin upper bound from the
    ``l^1`` and ``l^inf`` norms.
    """
    m = np.asarray(m, dtype=complex)
    if m.size == 0:
        return NormEstimate(0.0, 0.0)
    if p == 1:
        v = float(np.abs(m).sum(axis=0).max())
        return NormEstimate(v, v)
    if math.isinf(p):
        v = float(np.abs(m).sum(axis=1).max())
        return NormEstimate(v, v)
    if p == 2:
        v = float(np.linalg.norm(m, 2))
        return NormEstimate(v, v)
    n1 = float(np.abs(m).sum(axis=0).max())
    ninf = float(np.abs(m).sum(axis=1).max())
    upper = n1 ** (1 / p) * ninf ** (1 - 1 / p)
    q = p / (p - 1)
    rng = np.random.default_rng(seed)
    best = 0.0
    starts = [np.eye(m.shape[1])[int(np.argmax(np.abs(m).sum(axis=0)))]]
    starts += [rng.standard_normal(m.shape[1]) + 1j * rng.standard_normal(m.shape[1])
               for _ in range(restarts)]
    for x in starts:
        x = x / _vec_pnorm(x, p)
        for _ in range(200):
            y = m @ x
            ny = _vec_pnorm(y, p)
            if ny == 0:
                break
            best = max(best, ny)
            # dual vector of y, pulled back and mapped to the primal sphere
            dy = np.abs(y / ny) ** (p - 1) * np.exp(1j * np.angle(y))
            z = m.conj().T @ dy
            nz = _vec_pnorm(z, q)
            if nz == 0:
                break
            xn = np.abs(z / nz) ** (q - 1) * np.exp(1j * np.angle(z))
            xn /= _vec_pnorm(xn, p)
            if np.linalg.norm(xn - x) < 1e-13:
                break
            x = xn
    return NormEstimate(min(best, upper), upper)


def materialize(op: Callable, dim: int) -> np.ndarray:
    cols = [op(col) for col in np.eye(dim, dtype=complex)]
    return np.stack(cols, axis=1)


# -- base model --------------------------------------------------------------


class GroupModel:
    """Shared interface; subclasses fill in the spectral data."""

    dim: int
    p: float
    growth_bound: float  # exponential type of the group, exact where known

    def _check(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=complex).reshape(-1)
        if x.size != self.dim:
            raise DimensionMismatch(f"state has length {x.size}, group acts on length {self.dim}")
        return x

    def apply(self, s: float, x) -> np.ndarray:
        return self.apply_many(np.array([s], dtype=float), x)[0]

    def apply_many(self, s: np.ndarray, x) -> np.ndarray:
        raise NotImplementedError

    def generator(self, x) -> np.ndarray:
        raise NotImplementedError

    def spectrum(self) -> np.ndarray:
        raise NotImplementedError

    def _solve(self, lam: complex, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def resolvent(self, lam: complex, x) -> np.ndarray:
        """``(lam - A)^{-1} x``."""
        x = self._check(x)
        spec = self.spectrum()
        dist = float(np.min(np.abs(spec - lam))) if spec.size else math.inf
        if dist <= 1e-10 * max(1.0, abs(lam)):
            raise NearSpectrum(f"lambda = {lam} lies within {dist:.2e} of the spectrum")
        return self._solve(lam, x)

    def norm(self, x) -> float:
        raise NotImplementedError

    def domain_norm(self, x) -> float:
        x = self._check(x)
        return self.norm(x) + self.norm(self.generator(x))

    def structured_norms(self) -> tuple[Callable, Callable, Callable | None]:
        """``(norm_X, norm_Y, embed)`` in the coordinates used by the couple."""
        raise NotImplementedError

    def generator_norm_bound(self) -> float:
        """An upper bound for ``||A||_X``."""
        raise NotImplementedError

    def couple(self, options: interp.SolverOptions | None = None) -> interp.InterpCouple:
        """The couple ``(X, D(A))``."""
        nx, ny, embed = self.structured_norms()
        return interp.InterpCouple(self.dim, nx, ny, 1.0, 1.0 + self.generator_norm_bound(),
                                   options or interp.SolverOptions(), embed)

    def operator_norm(self, op: Callable, seed: int = 0) -> NormEstimate:
        """``||op||`` on ``X``, through the matrix of ``op`` in the standard basis."""
        return self._norm_of_matrix(materialize(op, self.dim), seed)

    def _norm_of_matrix(self, m: np.ndarray, seed: int) -> NormEstimate:
        return matrix_norm(m, self.p, seed=seed)

    def group_norm(self, s: float, seed: int = 0) -> NormEstimate:
        return self.operator_norm(lambda x: self.apply(s, x), seed)


# -- grid models -------------------------------------------------------------


class _GridModel(GroupModel):
    spec: GridSpec

    def to_state(self, f: GridFunction) -> np.ndarray:
        if f.spec != self.spec:
            raise DimensionMismatch("grid function lives on a different grid")
        return f.values.reshape(-1).copy()

    def to_grid(self, x) -> GridFunction:
        return GridFunction(self.spec, self._check(x).reshape(self.spec.samples, self.spec.fiber_dim))

    def norm(self, x) -> float:
        x = np.asarray(x, dtype=complex).reshape(self.spec.samples, self.spec.fiber_dim)
        nrm = fiber_norms(self.spec, x)
        if math.isinf(self.p):
            return float(nrm.max())
        return float((self.spec.h * np.sum(nrm ** self.p)) ** (1 / self.p))

    def _norm_of_matrix(self, m: np.ndarray, seed: int) -> NormEstimate:
        # the h^{1/p} weights cancel; fibers other than l^p need the sphere search
        if self.spec.fiber_dim == 1 or self.spec.fiber_exponent == self.p:
            return matrix_norm(m, self.p, seed=seed)
        lower = 0.0
        rng = np.random.default_rng(seed)
        for _ in range(16):
            v = rng.standard_normal(self.dim) + 1j * rng.standard_normal(self.dim)
            lower = max(lower, self.norm(m @ v) / self.norm(v))
        return NormEstimate(lower, math.inf)

    def _block_shape(self):
        return self.spec.samples, self.spec.fiber_dim

    def _mixed_params(self) -> tuple[float, int, float]:
        s = self.spec
        scale = s.fiber_weight * (s.h ** (1 / self.p) if math.isfinite(self.p) else 1.0)
        return scale, s.fiber_dim, s.fiber_exponent


@dataclass(eq=False)
class ShiftGroup(_GridModel):
    """``U(s) f(t) = f(t + s)`` on the periodic grid; the generator is ``i d/dt``."""

    spec: GridSpec
    p: float = 2.0
    growth_bound: float = field(default=0.0, init=False)

    def __post_init__(self):
        self.dim = self.spec.samples * self.spec.fiber_dim
        self._symbol = -self.spec.xi  # A acts on the spectrum as multiplication by -xi

    def _fft(self, x):
        return np.fft.fft(np.asarray(x).reshape(self._block_shape()), axis=0)

    def _ifft(self, y):
        return np.fft.ifft(y, axis=0).reshape(-1)

    def apply_many(self, s, x) -> np.ndarray:
        x = self._check(x)
        s = np.atleast_1d(np.asarray(s, dtype=float))
        xh = self._fft(x)
        xi = self.spec.xi
        out = np.empty((s.size, self.dim), dtype=complex)
        step = max(1, _CHUNK // self.dim)
        for i in range(0, s.size, step):
            ph = np.exp(1j * np.outer(s[i:i + step], xi))[:, :, None] * xh[None]
            out[i:i + step] = np.fft.ifft(ph, axis=1).reshape(ph.shape[0], -1)
        return out

    def multiplier(self, symbol: np.ndarray, x) -> np.ndarray:
        """Multiply the spectrum by ``symbol`` (given at the grid frequencies)."""
        return self._ifft(np.asarray(symbol)[:, None] * self._fft(self._check(x)))

    def generator(self, x) -> np.ndarray:
        return self.multiplier(self._symbol, x)

    def spectrum(self) -> np.ndarray:
        return self._symbol.astype(complex)

    def _solve(self, lam, x):
        return self.multiplier(1.0 / (lam - self._symbol), x)

    def generator_norm_bound(self) -> float:
        if self.p == 2 and self.spec.fiber_exponent == 2:
            return float(np.max(np.abs(self._symbol)))
        mat = materialize(self.generator, self.dim)
        n1 = float(np.abs(mat).sum(axis=0).max())
        ninf = float(np.abs(mat).sum(axis=1).max())
        if self.spec.fiber_dim > 1:
            return n1 * ninf  # crude but safe for mixed fibers
        if math.isinf(self.p):
            return ninf
        return n1 ** (1 / self.p) * ninf ** (1 - 1 / self.p)

    def structured_norms(self):
        scale, blk, inner = self._mixed_params()
        n = self.spec.samples
        if self.p == 2 and inner == 2:
            # Parseval: work with spectra, where A is diagonal
            c = self.spec.fiber_weight * math.sqrt(self.spec.h / n)
            op = sp.kron(sp.diags(self._symbol), sp.eye(blk), format="csr")
            nx = interp.lp_norm(2.0, c)
            ny = interp.graph_norm(op, 2.0, c)
            return nx, ny, lambda x: self._fft(x).reshape(-1)
        dense = materialize(self.generator, self.dim)
        nx = interp.lp_norm(self.p, scale, blk, inner)
        ny = interp.graph_norm(dense, self.p, scale, blk, inner)
        return nx, ny, None

    def group_norm(self, s: float, seed: int = 0) -> NormEstimate:
        if self.p == 2 and self.spec.fiber_exponent == 2:
            return NormEstimate(1.0, 1.0)
        return super().group_norm(s, seed)


# -- multiplication groups ---------------------------------------------------


def symbol_affine(offset: float = 0.0, slope: float = 1.0) -> Callable:
    return lambda t: offset + slope * np.asarray(t, dtype=float)


def symbol_sine(amplitude: float = 1.0, frequency: float = 1.0) -> Callable:
    return lambda t: amplitude * np.sin(frequency * np.asarray(t, dtype=float))


def symbol_step(low: float = -1.0, high: float = 1.0, at: float = 0.0) -> Callable:
    return lambda t: np.where(np.asarray(t, dtype=float) < at, low, high).astype(float)


SYMBOLS = {"affine": symbol_affine, "sine": symbol_sine, "step": symbol_step}


@dataclass(eq=False)
class MultiplicationGroup(_GridModel):
    """``U(s) f(t) = exp(-is a(t)) f(t)`` for a real symbol ``a``; isometric for every ``p``."""

    spec: GridSpec
    symbol: Callable
    p: float = 2.0
    growth_bound: float = field(default=0.0, init=False)

    def __post_init__(self):
        self.dim = self.spec.samples * self.spec.fiber_dim
        a = np.asarray(self.symbol(self.spec.t), dtype=float)
        if a.shape != (self.spec.samples,) or not np.all(np.isfinite(a)):
            raise ValueError("symbol must give one finite real value per grid point")
        self._a = np.repeat(a, self.spec.fiber_dim)

    def apply_many(self, s, x) -> np.ndarray:
        x = self._check(x)
        s = np.atleast_1d(np.asarray(s, dtype=float))
        out = np.empty((s.size, self.dim), dtype=complex)
        step = max(1, _CHUNK // self.dim)
        for i in range(0, s.size, step):
            out[i:i + step] = np.exp(-1j * np.outer(s[i:i + step], self._a)) * x[None]
        return out

    def generator(self, x) -> np.ndarray:
        return self._a * self._check(x)

    def spectrum(self) -> np.ndarray:
        return np.unique(self._a).astype(complex)

    def _solve(self, lam, x):
        return x / (lam - self._a)

    def generator_norm_bound(self) -> float:
        return float(np.max(np.abs(self._a)))

    def structured_norms(self):
        scale, blk, inner = self._mixed_params()
        nx = interp.lp_norm(self.p, scale, blk, inner)
        ny = interp.graph_norm(sp.diags(self._a.astype(complex), format="csr"), self.p, scale, blk, inner)
        return nx, ny, None

    def group_norm(self, s: float, seed: int = 0) -> NormEstimate:
        return NormEstimate(1.0, 1.0)


# -- matrix groups -----------------------------------------------------------


@dataclass(eq=False)
class MatrixGroup(GroupModel):
    """``U(s) = exp(-isA)`` on ``C^d`` with the ``l^p`` norm."""

    matrix: np.ndarray
    p: float = 2.0
    condition_limit: float = 1e8

    def __post_init__(self):
        a = np.asarray(self.matrix, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionMismatch("generator must be a square matrix")
        self.matrix = a
        self.dim = a.shape[0]
        evals, vecs = np.linalg.eig(a)
        self._evals = evals
        cond = np.linalg.cond(vecs)
        if math.isfinite(cond) and cond < self.condition_limit:
            self._vecs, self._inv = vecs, np.linalg.inv(vecs)
            self.diagonalizable = True
        else:
            self._vecs = self._inv = None
            self.diagonalizable = False
        self.growth_bound = float(np.max(np.abs(evals.imag))) if evals.size else 0.0

    def expm(self, s: np.ndarray) -> np.ndarray:
        """Stack of ``exp(-is A)`` for the given ``s`` values."""
        s = np.atleast_1d(np.asarray(s, dtype=float))
        if self.diagonalizable:
            ph = np.exp(-1j * np.outer(s, self._evals))
            return np.einsum("ij,sj,jk->sik", self._vecs, ph, self._inv)
        return sla.expm(-1j * s[:, None, None] * self.matrix[None])

    def apply_many(self, s, x) -> np.ndarray:
        x = self._check(x)
        s = np.atleast_1d(np.asarray(s, dtype=float))
        if self.diagonalizable:
            c = self._inv @ x
            ph = np.exp(-1j * np.outer(s, self._evals))
            return (ph * c[None]) @ self._vecs.T
        out = np.empty((s.size, self.dim), dtype=complex)
        step = max(1, _CHUNK // (self.dim * self.dim))
        for i in range(0, s.size, step):
            out[i:i + step] = self.expm(s[i:i + step]) @ x
        return out

    def generator(self, x) -> np.ndarray:
        return self.matrix @ self._check(x)

    def spectrum(self) -> np.ndarray:
        return self._evals

    def _solve(self, lam, x):
        return np.linalg.solve(lam * np.eye(self.dim) - self.matrix, x)

    def norm(self, x) -> float:
        return _vec_pnorm(np.asarray(x, dtype=complex).reshape(-1), self.p)

    def generator_norm_bound(self) -> float:
        return matrix_norm(self.matrix, self.p).upper

    def structured_norms(self):
        return interp.lp_norm(self.p), interp.graph_norm(self.matrix, self.p), None

    def group_norm(self, s: float, seed: int = 0) -> NormEstimate:
        return matrix_norm(self.expm(np.array([s]))[0], self.p, seed=seed)


# -- group type --------------------------------------------------------------


@dataclass(frozen=True)
class GroupTypeEstimate:
    M_hat: float
    theta_hat: float
    polynomial_growth_flag: bool
    residual: float
    s: np.ndarray
    norms: np.ndarray


def estimate_group_type(g: GroupModel, s_max: float = 10.0, samples: int = 41,
                        seed: int = 0) -> GroupTypeEstimate:
    """Fit ``log ||U(s)|| ~ log M + w s + k log s`` on the upper half of ``[0, s_max]``.

    ``||U(s)||`` is the larger of the norms at ``s`` and ``-s``.  The
    logarithmic regressor absorbs polynomial (Jordan-block) growth so that it
    is not mistaken for exponential growth; fitting only the upper half keeps
    the transient near ``s = 0`` out of the slope.  ``M_hat`` is then the
    smallest constant with ``||U(s)|| <= M_hat exp(theta_hat |s|)`` on all
    samples.
    """
    if not s_max > 0:
        raise ValueError("s_max must be positive")
    s = np.linspace(0.0, s_max, samples)
    norms = np.array([max(g.group_norm(v, seed).value, g.group_norm(-v, seed).value) for v in s])
    upper = s >= 0.5 * s_max
    su, lu = s[upper], np.log(norms[upper])
    design = np.column_stack([np.ones_like(su), su, np.log(su)])
    fit = optimize.lsq_linear(design, lu, bounds=([-np.inf, 0, 0], [np.inf, np.inf, np.inf]))
    omega = float(fit.x[1])
    residual = float(np.sqrt(np.mean((design @ fit.x - lu) ** 2)))
    m_hat = max(1.0, float(np.max(norms * np.exp(-omega * s))))
    grows = norms[-1] > 1.5 * norms[0]
    return GroupTypeEstimate(m_hat, omega, bool(omega < 0.01 and grows), residual, s, norms)


def strip_resolvent_sup(g: GroupModel, omega: float, real_extent: float = 50.0,
                        points: int = 201, seed: int = 0) -> float:
    """Largest sampled ``||R(lam, A)||`` over ``|Im lam| = omega`` (and twice that)."""
    best = 0.0
    for height in (omega, -omega, 2 * omega, -2 * omega):
        for re in np.linspace(-real_extent, real_extent, points):
            lam = complex(re, height)
            best = max(best, g.operator_norm(lambda x, l=lam: g.resolvent(l, x), seed).value)
    return best
