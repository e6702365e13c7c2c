"""Transference: ``U_mu = P o L_mu o iota`` through functions on the line.

``iota x(s) = psi(-s) U(-s) x`` embeds a state into a function, ``L_mu`` is
convolution with ``mu`` and ``P F = int phi(s) U(s) F(s) ds`` averages back.
The factorization holds when ``psi * phi = 1`` on the support of ``mu``
(bounded kernels) or ``psi * phi = 1 / cosh(omega .)`` with ``L_mu`` replaced
by ``L_{cosh(omega .) mu}`` (unbounded kernels).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import besov, bump, interp
from . import measure as msr
from .calculus import phillips
from .errors import CheckFailed, DimensionMismatch, GridTooShort, ParameterOrder, SupportViolation
from .gridfn import GridFunction, GridSpec, convolve_measure, lp_norm
from .groups import GroupModel, MatrixGroup, MultiplicationGroup, ShiftGroup, _GridModel


@dataclass(frozen=True, eq=False)
class TransferKernels:
    mode: str  # "bounded" or "unbounded"
    spec: GridSpec
    psi: np.ndarray  # samples of the embedding window on spec.t
    phi: np.ndarray  # samples of the averaging window on spec.t
    params: dict

    def psi_fn(self, s):
        return self.params["psi_fn"](s)

    def phi_fn(self, s):
        return self.params["phi_fn"](s)


def build_kernels_bounded(n: float, alpha: float | None = None, beta: float | None = None,
                          spec: GridSpec | None = None) -> TransferKernels:
    """Windows for measures supported in ``[-n, n]``; ``alpha = beta = n / 4`` unless given."""
    alpha = n / 4 if alpha is None else alpha
    beta = n / 4 if beta is None else beta
    if min(n, alpha, beta) <= 0:
        raise ValueError("n, alpha and beta must be positive")
    reach = n + 3 * alpha + beta
    if spec is None:
        spec = GridSpec(float(2 ** math.ceil(math.log2(2 * reach))), 4096)
    if spec.half_length < 2 * reach:
        raise GridTooShort(f"grid half-length {spec.half_length:g} is below 2(N + 3a + b) = {2 * reach:g}")
    half = alpha + beta

    def psi_fn(s):
        return bump.mollified_indicator(s, reach, alpha)

    def phi_fn(s):
        return bump.mollified_indicator(s, half, alpha) / (2 * half)

    t = spec.t
    psi = psi_fn(t)
    flat = np.abs(t) <= 2 * alpha + n + beta
    flat_residual = float(np.max(np.abs(psi[flat] - 1.0)))
    if flat_residual > 1e-8:
        raise GridTooShort(f"embedding window deviates from 1 by {flat_residual:.3g} on its flat part")
    return TransferKernels("bounded", spec, psi, phi_fn(t),
                           {"N": n, "alpha": alpha, "beta": beta, "psi_fn": psi_fn, "phi_fn": phi_fn,
                            "flat_residual": flat_residual})


def build_kernels_unbounded(omega: float, alpha: float | None = None,
                            spec: GridSpec | None = None) -> TransferKernels:
    """``psi = 1/cosh(alpha s)`` and ``phi = (sqrt 8 omega / pi) cosh(omega s) / cosh(2 omega s)``.

    Their convolution equals ``1/cosh(omega s)`` exactly when ``alpha = 2 omega``,
    which is therefore the default; other ``alpha > omega`` are accepted but
    the factorization then carries a kernel mismatch.
    """
    alpha = 2 * omega if alpha is None else alpha
    if not alpha > omega > 0:
        raise ParameterOrder(f"need alpha > omega > 0 (got alpha={alpha:g}, omega={omega:g})")
    if spec is None:
        spec = GridSpec(128.0, 4096)
    c = math.sqrt(8.0) * omega / math.pi

    def psi_fn(s):
        return 1.0 / np.cosh(alpha * np.asarray(s, dtype=float))

    def phi_fn(s):
        s = np.asarray(s, dtype=float)
        # cosh(w s)/cosh(2 w s) written to avoid overflow for large |s|
        a = np.abs(omega * s)
        return c * (np.exp(-a) + np.exp(-3 * a)) / (1 + np.exp(-4 * a))

    t = spec.t
    return TransferKernels("unbounded", spec, psi_fn(t), phi_fn(t),
                           {"omega": omega, "alpha": alpha, "psi_fn": psi_fn, "phi_fn": phi_fn})


def kernel_identity_residual(k: TransferKernels, window: float | None = None) -> float:
    """``max |psi * phi - target|`` on ``[-window, window]`` (target 1 or ``sech(omega .)``)."""
    spec = k.spec
    conv = np.real(np.fft.ifft(np.fft.fft(np.fft.ifftshift(k.phi)) * np.fft.fft(k.psi))) * spec.h
    t = spec.t
    if k.mode == "bounded":
        window = k.params["N"] if window is None else window
        target = np.ones_like(t)
    else:
        window = 0.25 * spec.half_length if window is None else window
        target = 1.0 / np.cosh(k.params["omega"] * t)
    sel = np.abs(t) <= window + 1e-12
    return float(np.max(np.abs(conv[sel] - target[sel])))


# -- the maps ---------------------------------------------------------------


def fiber_spec(k: TransferKernels, g: GroupModel) -> GridSpec:
    """Grid for ``X``-valued functions: same line grid, fiber measured by ``X``'s norm."""
    s = k.spec
    if isinstance(g, _GridModel):
        inner = g.spec
        if inner.fiber_dim != 1:
            raise DimensionMismatch("transference supports scalar grid models only")
        weight = inner.fiber_weight * (inner.h ** (1 / g.p) if math.isfinite(g.p) else 1.0)
        return GridSpec(s.half_length, s.samples, g.dim, g.p, weight)
    return GridSpec(s.half_length, s.samples, g.dim, g.p, 1.0)


def apply_each(g: GroupModel, s: np.ndarray, rows: np.ndarray) -> np.ndarray:
    """Rows ``U(s_j) F_j``."""
    s = np.asarray(s, dtype=float)
    rows = np.asarray(rows, dtype=complex)
    if isinstance(g, MatrixGroup) and g.diagonalizable:
        c = rows @ g._inv.T
        return (np.exp(-1j * np.outer(s, g._evals)) * c) @ g._vecs.T
    if isinstance(g, MultiplicationGroup):
        return np.exp(-1j * np.outer(s, g._a)) * rows
    if isinstance(g, ShiftGroup):
        spec_r = np.fft.fft(rows, axis=1)
        return np.fft.ifft(np.exp(1j * np.outer(s, g.spec.xi)) * spec_r, axis=1)
    return np.stack([g.apply(v, r) for v, r in zip(s, rows)])


def iota_map(k: TransferKernels, g: GroupModel, x) -> GridFunction:
    x = g._check(x)
    t = k.spec.t
    vals = k.psi_fn(-t)[:, None] * g.apply_many(-t, x)
    return GridFunction(fiber_spec(k, g), vals)


def p_map(k: TransferKernels, g: GroupModel, f: GridFunction) -> np.ndarray:
    if f.spec.fiber_dim != g.dim:
        raise DimensionMismatch(f"function fiber {f.spec.fiber_dim} does not match state size {g.dim}")
    t = k.spec.t
    rows = apply_each(g, t, f.values)
    return (k.phi * k.spec.h) @ rows


def transfer_measure(k: TransferKernels, mu: msr.Measure) -> msr.Measure:
    """The measure convolved in the middle of the factorization."""
    if k.mode == "bounded":
        lo, hi = mu.support()
        n = k.params["N"]
        if lo < -n - 1e-12 or hi > n + 1e-12:
            raise SupportViolation(f"support [{lo:g}, {hi:g}] leaves [-{n:g}, {n:g}]")
        return mu
    return msr.cosh_weight(mu, k.params["omega"])


def factorize_apply(k: TransferKernels, g: GroupModel, mu: msr.Measure, x) -> np.ndarray:
    nu = transfer_measure(k, mu)
    return p_map(k, g, convolve_measure(nu, iota_map(k, g, x)))


def random_states(g: GroupModel, count: int, rng: np.random.Generator) -> list[np.ndarray]:
    """Complex Gaussian probes, band-limited to half Nyquist on grid models."""
    out = []
    for _ in range(count):
        v = rng.standard_normal(g.dim) + 1j * rng.standard_normal(g.dim)
        if isinstance(g, _GridModel):
            spec = g.spec
            mask = np.abs(spec.xi) <= 0.5 * spec.nyquist
            v = np.fft.ifft(np.fft.fft(v.reshape(spec.samples, -1), axis=0) * mask[:, None], axis=0).reshape(-1)
        out.append(v / g.norm(v))
    return out


@dataclass
class FactorizationReport:
    residuals: list[float]
    max_residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tolerance


def factorization_check(k: TransferKernels, g: GroupModel, mu: msr.Measure, probes: int = 5,
                        seed: int = 0, tol: float = 1e-5) -> FactorizationReport:
    """Relative residuals ``||U_mu x - P L iota x|| / ||x||`` over random probes."""
    if k.mode == "unbounded" and not k.params["omega"] > g.growth_bound:
        raise ParameterOrder("kernel omega must exceed the group's growth bound")
    transfer_measure(k, mu)  # support / weight checks before any work
    rng = np.random.default_rng(seed)
    res = []
    for x in random_states(g, probes, rng):
        lhs = phillips(g, mu, x)
        rhs = factorize_apply(k, g, mu, x)
        res.append(g.norm(lhs - rhs) / g.norm(x))
    return FactorizationReport(res, max(res), tol)


# -- transference inequality ----------------------------------------------------


@dataclass
class TransferenceReport:
    lhs: list[float]
    rhs: list[float]
    ratios: list[float]
    max_ratio: float
    convolution_norm_lower: float
    girardi_weis: float
    bound: float

    @property
    def passed(self) -> bool:
        return self.max_ratio <= self.bound


def transference_check(k: TransferKernels, g: GroupModel, mu: msr.Measure, theta: float, q: float,
                       p: float = 2.0, probes: int = 8, seed: int = 0, c_cal: float = 1.0,
                       m_hat: float = 1.0, besov_grid: GridSpec | None = None,
                       quad: interp.Quadrature = interp.Quadrature(),
                       raise_on_failure: bool = True,
                       symbol: besov.MultiplierSymbol | None = None) -> TransferenceReport:
    """Per-probe ratio ``||U_mu x||_{theta,q} / (||L||_{B^theta_{p,q}} ||x||_{theta,q})``.

    ``||L||`` is the probe lower bound for the convolution operator (with
    ``cosh(omega .) mu`` for unbounded kernels) on the scalar Besov space; a
    lower bound keeps the ratio conservative.  The Girardi-Weis functional of
    the same symbol is reported next to it.  Pass ``symbol`` when the
    transform of the (weighted) measure is known in closed form; the
    quadrature transform is slow on the dilation grid and aliases there.
    """
    factorization_check(k, g, mu, probes=1, seed=seed)
    nu = transfer_measure(k, mu)
    grid = besov_grid or GridSpec(16.0, 256)
    if symbol is None:
        symbol = besov.MultiplierSymbol.of_measure(nu)
    l_norm = besov.multiplier_norm_lower(symbol, grid, theta, p, q, seed=seed)
    gw = besov.girardi_weis_bound(symbol, grid)
    c = g.couple()
    rng = np.random.default_rng(seed)
    lhs, rhs, ratios = [], [], []
    for x in random_states(g, probes, rng):
        num = interp.interp_norm(c, phillips(g, mu, x), theta, q, quad)
        den = l_norm * interp.interp_norm(c, x, theta, q, quad)
        lhs.append(num)
        rhs.append(den)
        ratios.append(num / den if den > 0 else math.inf)
    bound = c_cal * m_hat ** 2
    report = TransferenceReport(lhs, rhs, ratios, max(ratios), l_norm, gw, bound)
    if raise_on_failure and not report.passed:
        worst = int(np.argmax(ratios))
        raise CheckFailed(f"transference ratio {ratios[worst]:.6g} exceeds {bound:.6g}", probe=worst)
    return report


def sigma_prime_l1(alpha: float, points: int = 200001) -> float:
    """``||sigma'||_1`` for ``sigma(s) = rho(s / alpha) / alpha`` by quadrature."""
    s = np.linspace(-alpha, alpha, points)
    vals = np.abs(bump.rho_prime(s / alpha)) / alpha ** 2
    return float(np.trapezoid(vals, s))


def kernel_norms(k: TransferKernels, p: float) -> dict:
    """``L^p`` and ``W^{1,p}`` norms of both windows with the dual exponent for ``phi``."""
    spec = k.spec
    pd = math.inf if p == 1 else (1.0 if math.isinf(p) else p / (p - 1))
    psi = GridFunction(spec, k.psi)
    phi = GridFunction(spec, k.phi)
    from .gridfn import sobolev_norm
    return {"psi_p": lp_norm(psi, p), "phi_pdual": lp_norm(phi, pd),
            "psi_1p": sobolev_norm(psi, p), "phi_1pdual": sobolev_norm(phi, pd)}
