"""Functional calculi for group generators.

* ``phillips``: ``U_mu x = int U(s) x mu(ds)`` by quadrature over the measure.
* ``cauchy_strip``: contour integral of ``f(z) R(z, A) x`` over the boundary
  of a strip, for holomorphic ``f`` with polynomial decay of order > 1.
* ``regularized_calculus``: bounded ``f`` through ``f tau_k`` with
  ``tau_k(z) = -k^2 (ik - z)^{-2}``.
* ``hinf1_norm``, ``pv_group_integral`` and ``sector_pullback`` round out
  the toolkit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import optimize

from . import measure as msr
from .errors import GrowthMismatch, NoConvergence, NotElementary, StripOrder
from .groups import GroupModel, MatrixGroup, MultiplicationGroup, ShiftGroup


# -- strip functions ---------------------------------------------------------


@dataclass(frozen=True)
class StripFunction:
    """Holomorphic ``f`` on ``|Im z| < width`` with its derivative.

    ``decay_order`` is set to some ``alpha > 1`` when ``|f(z)| = O(|z|^-alpha)``
    along the strip, which makes the Cauchy-integral calculus available.
    """

    eval: Callable
    deriv: Callable
    width: float
    decay_order: float | None = None
    name: str = "f"

    def __call__(self, z):
        return self.eval(z)

    def times(self, other: "StripFunction") -> "StripFunction":
        orders = [o for o in (self.decay_order, other.decay_order) if o is not None]
        return StripFunction(
            lambda z: self.eval(z) * other.eval(z),
            lambda z: self.deriv(z) * other.eval(z) + self.eval(z) * other.deriv(z),
            min(self.width, other.width),
            sum(orders) if orders else None,
            f"{self.name}*{other.name}",
        )

    def cauchy_riemann_residual(self, samples: int = 20, seed: int = 0, h: float = 1e-5) -> float:
        """Worst relative mismatch between x- and y-difference quotients in the strip."""
        rng = np.random.default_rng(seed)
        w = min(self.width, 5.0) * (1 - 1e-3)
        z = rng.uniform(-5, 5, samples) + 1j * rng.uniform(-w + h, w - h, samples) * (1 - 2 * h)
        dx = (self.eval(z + h) - self.eval(z - h)) / (2 * h)
        dy = (self.eval(z + 1j * h) - self.eval(z - 1j * h)) / (2j * h)
        scale = np.maximum(1.0, np.abs(dx))
        return float(np.max(np.abs(dx - dy) / scale))


def const(c: complex = 1.0) -> StripFunction:
    return StripFunction(lambda z: np.full(np.shape(z), c, dtype=complex),
                         lambda z: np.zeros(np.shape(z), dtype=complex), math.inf, None, f"const({c})")


def tau(k: float) -> StripFunction:
    """``-k^2 (ik - z)^{-2}``; decays like ``|z|^-2`` and tends to 1 as ``k`` grows."""
    ik = 1j * k
    return StripFunction(lambda z: -k * k / (ik - np.asarray(z)) ** 2,
                         lambda z: -2 * k * k / (ik - np.asarray(z)) ** 3,
                         float(k), 2.0, f"tau_{k:g}")


def inv_shift(lam: complex, power: int = 1) -> StripFunction:
    """``(lam - z)^{-power}``, holomorphic on the strip below ``|Im lam|``."""
    if lam.imag == 0:
        raise ValueError("pole must lie off the real line")
    return StripFunction(lambda z: (lam - np.asarray(z)) ** (-power),
                         lambda z: power * (lam - np.asarray(z)) ** (-power - 1),
                         abs(lam.imag), float(power) if power > 1 else None, f"inv_shift({lam},{power})")


def gauss(width: float = 2.0) -> StripFunction:
    """``exp(-z^2)``; entire, so the strip width is a free choice.

    It decays faster than every power on a strip; the order recorded here
    only feeds the tail estimate of the contour integral.
    """
    return StripFunction(lambda z: np.exp(-np.asarray(z) ** 2),
                         lambda z: -2 * np.asarray(z) * np.exp(-np.asarray(z) ** 2),
                         width, 8.0, "gauss")


def exp_i(a: float, width: float = 1.0) -> StripFunction:
    return StripFunction(lambda z: np.exp(1j * a * np.asarray(z)),
                         lambda z: 1j * a * np.exp(1j * a * np.asarray(z)), width, None, f"exp_i({a})")


# -- Hille-Phillips ----------------------------------------------------------


def _bounded(g: GroupModel) -> bool:
    if isinstance(g, MultiplicationGroup):
        return True
    if isinstance(g, ShiftGroup):
        return g.p == 2 and g.spec.fiber_exponent == 2
    if isinstance(g, MatrixGroup):
        return g.diagonalizable and g.growth_bound <= 1e-14
    return False


def check_growth(g: GroupModel, mu: msr.Measure) -> None:
    lo, hi = mu.support()
    compact = math.isinf(mu.decay_weight)
    if compact or mu.decay_weight > g.growth_bound:
        return
    if mu.decay_weight == 0 and g.growth_bound == 0 and _bounded(g):
        return
    raise GrowthMismatch(f"measure decay {mu.decay_weight:g} does not dominate group growth "
                         f"{g.growth_bound:g} (support [{lo:g}, {hi:g}])")


def phillips(g: GroupModel, mu: msr.Measure, x) -> np.ndarray:
    """``sum_j w_j U(s_j) x`` over atoms and trapezoid nodes of the density."""
    check_growth(g, mu)
    x = g._check(x)
    locs, wts = mu.nodes()
    out = np.zeros(g.dim, dtype=complex)
    step = max(1, (1 << 20) // max(g.dim, 1))
    for i in range(0, locs.size, step):
        out += wts[i:i + step] @ g.apply_many(locs[i:i + step], x)
    return out


# -- resolvent batches -------------------------------------------------------


def resolvent_many(g: GroupModel, zs: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Rows ``R(z_i, A) x``; callers keep the nodes away from the spectrum."""
    zs = np.asarray(zs, dtype=complex)
    x = g._check(x)
    if isinstance(g, MatrixGroup):
        if g.diagonalizable:
            c = g._inv @ x
            return (c[None] / (zs[:, None] - g._evals[None])) @ g._vecs.T
        eye = np.eye(g.dim)
        out = np.empty((zs.size, g.dim), dtype=complex)
        step = 4096
        for i in range(0, zs.size, step):
            mats = zs[i:i + step, None, None] * eye[None] - g.matrix[None]
            out[i:i + step] = np.linalg.solve(mats, np.broadcast_to(x, (mats.shape[0], g.dim))[..., None])[..., 0]
        return out
    if isinstance(g, ShiftGroup):
        xh = g._fft(x)
        sym = g._symbol
        out = np.empty((zs.size, g.dim), dtype=complex)
        step = max(1, (1 << 20) // g.dim)
        for i in range(0, zs.size, step):
            blk = xh[None] / (zs[i:i + step, None, None] - sym[None, :, None])
            out[i:i + step] = np.fft.ifft(blk, axis=1).reshape(blk.shape[0], -1)
        return out
    if isinstance(g, MultiplicationGroup):
        return x[None] / (zs[:, None] - g._a[None])
    return np.stack([g._solve(z, x) for z in zs])


def _weighted_resolvent_sum(g: GroupModel, zs, weights, x) -> np.ndarray:
    out = np.zeros(g.dim, dtype=complex)
    step = 8192
    for i in range(0, zs.size, step):
        out += weights[i:i + step] @ resolvent_many(g, zs[i:i + step], x)
    return out


# -- Cauchy integral over the strip boundary ---------------------------------


@dataclass(frozen=True)
class CauchyResult:
    value: np.ndarray
    tail_bound: float
    trunc: float
    nodes: int


def _spectral_extent(g: GroupModel) -> tuple[float, float]:
    spec = g.spectrum()
    if spec.size == 0:
        return 0.0, 0.0
    return float(np.max(np.abs(spec.real))), float(np.max(np.abs(spec.imag)))


def cauchy_strip(g: GroupModel, f: StripFunction, omega_prime: float, x, trunc: float | None = None,
                 nodes: int = 4096, tail_tol: float = 1e-8) -> CauchyResult:
    """``(1/2 pi i) int f(z) R(z, A) x dz`` over ``Im z = +-omega_prime``.

    The lines are parametrized by ``Re z = c sinh(u)`` and integrated with the
    trapezoid rule in ``u`` (doubly exponential decay of the node spacing
    toward the truncation points), which is the trapezoid rule on the lines
    with a graded mesh.  The node count grows when the spectrum or a pole of
    ``f`` comes close to a line.  Without ``trunc`` the truncation doubles
    until the estimated tail falls below ``tail_tol * max(1, ||f||_inf) ||x||``.
    """
    if f.decay_order is None or f.decay_order <= 1:
        raise NotElementary(f"{f.name} has no decay of order above one")
    if not g.growth_bound < omega_prime < f.width:
        raise StripOrder(f"need growth {g.growth_bound:g} < omega' = {omega_prime:g} < width {f.width:g}")
    x = g._check(x)
    re_max, im_max = _spectral_extent(g)
    scale = 1.0 + re_max
    gap = min(omega_prime - im_max, f.width - omega_prime)
    alpha = f.decay_order
    xnorm = g.norm(x)
    fsize = max(1.0, float(np.max(np.abs(f.eval(np.linspace(-scale, scale, 201) + 1j * omega_prime)))))

    def end_size(t_end: float) -> float:
        pts = np.array([t_end - 1j * omega_prime, -t_end - 1j * omega_prime,
                        t_end + 1j * omega_prime, -t_end + 1j * omega_prime])
        vals = np.abs(f.eval(pts))
        res = resolvent_many(g, pts, x)
        return float(sum(v * g.norm(r) for v, r in zip(vals, res)))

    def bound(t_end: float) -> float:
        # |f| ~ |Re z|^-alpha and ||R x|| ~ |Re z|^-1 beyond t_end
        return end_size(t_end) * t_end / alpha / (2 * math.pi)

    if trunc is None:
        trunc = 8.0 * scale
        target = tail_tol * fsize * max(xnorm, 1e-300)
        while bound(trunc) > target and trunc < 1e12:
            trunc *= 2.0
    tail = bound(trunc)

    u_max = math.asinh(trunc / scale)
    du_needed = 2 * math.pi * gap / math.hypot(scale, re_max) / 30.0
    n = max(nodes, int(math.ceil(2 * u_max / du_needed)) + 1)
    n += 1 - n % 2
    u = np.linspace(-u_max, u_max, n)
    du = u[1] - u[0]
    xs = scale * np.sinh(u)
    jac = scale * np.cosh(u) * du
    w = np.full(n, 1.0)
    w[0] = w[-1] = 0.5
    total = np.zeros(g.dim, dtype=complex)
    for sign in (-1.0, 1.0):
        z = xs + 1j * sign * omega_prime
        orient = 1.0 if sign < 0 else -1.0  # lower line left to right, upper line back
        weights = orient * w * jac * f.eval(z)
        total += _weighted_resolvent_sum(g, z, weights, x)
    return CauchyResult(total / (2j * math.pi), tail, trunc, n)


# -- regularization ----------------------------------------------------------


@dataclass
class RegularizedResult:
    value: np.ndarray
    raw: list[np.ndarray]
    accelerated: list[np.ndarray]
    raw_residuals: list[float]
    residuals: list[float]
    ks: list[float]
    used_ks: list[float]
    tail_bounds: list[float]


def regularized_calculus(g: GroupModel, f: StripFunction, x, k_schedule: Sequence[float] = (8, 16, 32, 64, 128),
                         omega_prime: float | None = None, tol: float = 1e-4,
                         raise_on_failure: bool = True) -> RegularizedResult:
    """``f(A) x`` as the limit of ``(f tau_k)(A) x``.

    ``tau_k(a) = (1 + ia/k)^{-2}`` is analytic in ``h = 1/k`` for ``|a| < k``,
    so the iterates are polynomial-extrapolated to ``h = 0`` (Neville's
    scheme; for a doubling schedule this is the Richardson table) over the
    levels with ``k`` above the spectral radius.  Every extrapolant is a fixed
    linear combination of the ``(f tau_k)(A) x``, i.e. the calculus applied
    with a combined regularizer whose coefficients sum to one.  Convergence
    is declared when the last two extrapolants differ by less than ``tol``
    relative to ``max(||f(A) x||, ||x||)``.
    """
    ks = [float(k) for k in k_schedule]
    if any(b <= a for a, b in zip(ks, ks[1:])):
        raise ValueError("k schedule must increase")
    re_max, im_max = _spectral_extent(g)
    if omega_prime is None:
        top = min(f.width, ks[0])
        omega_prime = g.growth_bound + 0.5 * min(top - g.growth_bound, 1.0)
    x = g._check(x)
    raw, tails = [], []
    for k in ks:
        res = cauchy_strip(g, f.times(tau(k)), omega_prime, x)
        raw.append(res.value)
        tails.append(res.tail_bound)
    radius = float(np.max(np.abs(g.spectrum()))) if g.spectrum().size else 0.0
    usable = [i for i, k in enumerate(ks) if k > radius] or [len(ks) - 1]
    acc = extrapolate_to_zero([1.0 / ks[i] for i in usable], [raw[i] for i in usable])
    scale = max(float(np.linalg.norm(acc[-1])), float(np.linalg.norm(x)), 1e-300)
    raw_res = [float(np.linalg.norm(b - a)) / scale for a, b in zip(raw, raw[1:])]
    res_acc = [float(np.linalg.norm(b - a)) / scale for a, b in zip(acc, acc[1:])]
    out = RegularizedResult(acc[-1], raw, acc, raw_res, res_acc, ks, [ks[i] for i in usable], tails)
    if raise_on_failure and (not res_acc or res_acc[-1] >= tol):
        last = res_acc[-1] if res_acc else float("nan")
        raise NoConvergence(f"regularized iterates still move by {last:.3g} (tolerance {tol:g})")
    return out


def extrapolate_to_zero(h: Sequence[float], values: Sequence[np.ndarray]) -> list[np.ndarray]:
    """Neville extrapolants at ``h = 0``; entry ``m`` interpolates the first ``m + 1`` samples."""
    out = []
    for m in range(1, len(h) + 1):
        col = [np.asarray(v, dtype=complex) for v in values[:m]]
        for j in range(1, m):
            for i in range(m - 1, j - 1, -1):
                col[i] = (h[i] * col[i - 1] - h[i - j] * col[i]) / (h[i] - h[i - j])
        out.append(col[m - 1])
    return out


# -- H-infinity-one norm ------------------------------------------------------


@dataclass(frozen=True)
class HInfNorm:
    value: float
    infinite: bool
    argmax: complex
    trend: float  # ratio of the edge value to the value halfway to the edge

    def __float__(self):
        return math.inf if self.infinite else self.value


def _real_axis(extent: float, dense: int) -> np.ndarray:
    lin = np.linspace(-min(extent, 64.0), min(extent, 64.0), dense)
    logs = np.geomspace(1e-3, extent, dense // 2)
    return np.unique(np.concatenate([lin, logs, -logs, [0.0]]))


def hinf1_norm(f: StripFunction, omega: float, extent: float = 1e6, dense: int = 4097,
               rows: int = 17) -> HInfNorm:
    """``sup |f(z)| + (1 + |z|) |f'(z)|`` over ``|Im z| < omega``.

    Sampled on the two lines ``Im z = +-omega (1 - 1e-6)`` and an interior
    lattice, refined locally around the best sample.  When the largest values
    sit at the truncation edge and are still growing there, the result is
    flagged infinite instead of returning a large number.
    """
    if omega > f.width:
        raise StripOrder(f"omega {omega:g} exceeds the strip width {f.width:g}")
    y_edge = omega * (1 - 1e-6)
    xs = _real_axis(extent, dense)
    ys = np.unique(np.concatenate([np.linspace(-y_edge, y_edge, rows), [0.0]]))
    zz = xs[None, :] + 1j * ys[:, None]

    def objective(z):
        # far-out samples of pulled-back functions overflow to nan; they carry no information
        with np.errstate(all="ignore"):
            v = np.abs(f.eval(z)) + (1 + np.abs(z)) * np.abs(f.deriv(z))
        return np.where(np.isnan(v), -np.inf, v)

    vals = objective(zz)
    i, j = np.unravel_index(int(np.argmax(vals)), vals.shape)
    best, arg = float(vals[i, j]), complex(zz[i, j])
    edge = np.max(vals[:, [0, -1]])
    half = np.max(objective(np.array([0.5 * extent, -0.5 * extent])[None, :] + 1j * ys[:, None]))
    trend = float(edge / half) if half > 0 else 1.0
    at_edge = j in (0, xs.size - 1)
    if at_edge and trend > 1.0 + 1e-6:
        return HInfNorm(math.inf, True, arg, trend)

    def neg(v):
        z = complex(v[0], float(np.clip(v[1], -y_edge, y_edge)))
        return -float(objective(np.array([z]))[0])

    jl, jr = max(j - 1, 0), min(j + 1, xs.size - 1)
    res = optimize.minimize(neg, x0=[arg.real, arg.imag], method="Nelder-Mead",
                            options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 4000,
                                     "initial_simplex": [[arg.real, arg.imag],
                                                         [xs[jr] if jr != j else arg.real + 1e-3, arg.imag],
                                                         [arg.real, float(np.clip(arg.imag + (ys[1] - ys[0]) if ys.size > 1 else 1e-3, -y_edge, y_edge))]]})
    if -res.fun > best:
        best = -float(res.fun)
        arg = complex(res.x[0], float(np.clip(res.x[1], -y_edge, y_edge)))
    # also refine along the nearer boundary line, where the sup usually lives
    for y in (y_edge, -y_edge):
        lo, hi = xs[jl], xs[jr]
        if hi > lo:
            r1 = optimize.minimize_scalar(lambda t: -float(objective(np.array([t + 1j * y]))[0]),
                                          bounds=(lo, hi), method="bounded", options={"xatol": 1e-10})
            if -r1.fun > best:
                best, arg = -float(r1.fun), complex(r1.x, y)
    return HInfNorm(best, False, arg, trend)


# -- principal value ---------------------------------------------------------


@dataclass
class PVResult:
    limit: np.ndarray
    values: list[np.ndarray]
    eps: list[float]
    residuals: list[float]
    contraction: list[float]


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(20)


def _panels(a: float, b: float, radius: float) -> list[tuple[float, float]]:
    """Dyadic panels on ``[a, b]``, each split so ``length * radius <= 2``."""
    out = []
    right = b
    while right > a * (1 + 1e-15):
        left = max(a, 0.5 * right)
        pieces = max(1, int(math.ceil((right - left) * radius / 2.0)))
        edges = np.linspace(left, right, pieces + 1)
        out += list(zip(edges[:-1], edges[1:]))
        right = left
    return out


def _spectral_radius(g: GroupModel) -> float:
    spec = g.spectrum()
    return float(np.max(np.abs(spec))) if spec.size else 0.0


def pv_group_integral(g: GroupModel, gfun: Callable, x, eps_schedule: Sequence[float] = (1e-1, 1e-2, 1e-3, 1e-4, 1e-5),
                      raise_on_failure: bool = True) -> PVResult:
    """``lim_{eps -> 0} int_{eps <= |s| <= 1} g(s) U(s) x ds / s`` for even ``g``.

    Each truncated integral is computed from the paired integrand
    ``g(s) (U(s) - U(-s)) x / s`` on ``[eps, 1]`` with 20-point Gauss-Legendre
    panels.  The limit is extrapolated from the last two truncations assuming
    the remainder is linear in ``eps``.
    """
    x = g._check(x)
    eps = [float(e) for e in eps_schedule]
    if any(b >= a for a, b in zip(eps, eps[1:])) or eps[-1] <= 0:
        raise ValueError("eps schedule must decrease to a positive value")
    radius = _spectral_radius(g)

    def piece(a: float, b: float) -> np.ndarray:
        acc = np.zeros(g.dim, dtype=complex)
        for lo, hi in _panels(a, b, radius):
            s = 0.5 * (hi - lo) * _GL_NODES + 0.5 * (hi + lo)
            w = 0.5 * (hi - lo) * _GL_WEIGHTS * np.asarray(gfun(s), dtype=complex) / s
            acc += w @ (g.apply_many(s, x) - g.apply_many(-s, x))
        return acc

    values = []
    running = piece(eps[0], 1.0)
    values.append(running.copy())
    for a, b in zip(eps[1:], eps[:-1]):
        running = running + piece(a, b)
        values.append(running.copy())
    residuals = [float(g.norm(b - a)) for a, b in zip(values, values[1:])]
    contraction = [r0 / r1 if r1 > 0 else math.inf for r0, r1 in zip(residuals, residuals[1:])]
    if len(values) >= 2:
        r = eps[-2] / eps[-1]
        limit = (r * values[-1] - values[-2]) / (r - 1)
    else:
        limit = values[-1]
    scale = max(g.norm(limit), g.norm(x), 1e-300)
    ok = all(c >= 2.0 for c in contraction) or (residuals and residuals[-1] <= 1e-13 * scale)
    if raise_on_failure and not ok:
        raise NoConvergence(f"principal-value residuals {residuals} do not contract")
    return PVResult(limit, values, eps, residuals, contraction)


# -- sectors -----------------------------------------------------------------


@dataclass(frozen=True)
class SectorFunction:
    eval: Callable
    deriv: Callable
    name: str = "f"


def sector_rational(kind: str = "w/(1+w)^2") -> SectorFunction:
    table = {
        "w/(1+w)^2": (lambda w: w / (1 + w) ** 2, lambda w: (1 - w) / (1 + w) ** 3),
        "1/(1+w)": (lambda w: 1 / (1 + w), lambda w: -1 / (1 + w) ** 2),
        "w/(1+w)": (lambda w: w / (1 + w), lambda w: 1 / (1 + w) ** 2),
        "w^2/(1+w)^3": (lambda w: w ** 2 / (1 + w) ** 3, lambda w: w * (2 - w) / (1 + w) ** 4),
        "(1-w)/(2+w)": (lambda w: (1 - w) / (2 + w), lambda w: -3 / (2 + w) ** 2),
        "w/(1+w+w^2)": (lambda w: w / (1 + w + w * w), lambda w: (1 - w * w) / (1 + w + w * w) ** 2),
        "1": (lambda w: np.ones(np.shape(w), dtype=complex), lambda w: np.zeros(np.shape(w), dtype=complex)),
    }
    if kind not in table:
        raise KeyError(f"unknown sector function {kind!r}; choose from {sorted(table)}")
    f, df = table[kind]
    return SectorFunction(lambda w: f(np.asarray(w, dtype=complex)),
                          lambda w: df(np.asarray(w, dtype=complex)), kind)


def sector_pullback(fs: SectorFunction, psi: float) -> StripFunction:
    """``z -> f(exp z)`` on the strip of half-width ``psi``."""
    if not 0 < psi < math.pi:
        raise ValueError("sector half-angle must lie in (0, pi)")
    return StripFunction(lambda z: fs.eval(np.exp(np.asarray(z))),
                         lambda z: np.exp(np.asarray(z)) * fs.deriv(np.exp(np.asarray(z))),
                         psi, None, f"{fs.name}∘exp")


def hlog_norm(fs: SectorFunction, psi: float, radii: int = 4001, angles: int = 41,
              extent: float = 1e6) -> float:
    """``sup |f(w)| + (1 + |log w|) |w f'(w)|`` over the sector ``|arg w| < psi``.

    Sampled in polar coordinates (radius log-spaced in ``[1/extent, extent]``),
    then refined with Nelder-Mead in ``(log r, arg)``.
    """
    a_edge = psi * (1 - 1e-6)
    r = np.geomspace(1.0 / extent, extent, radii)
    phi = np.linspace(-a_edge, a_edge, angles)
    w = r[None, :] * np.exp(1j * phi[:, None])

    def objective(w):
        return np.abs(fs.eval(w)) + (1 + np.abs(np.log(w))) * np.abs(w * fs.deriv(w))

    vals = objective(w)
    i, j = np.unravel_index(int(np.argmax(vals)), vals.shape)
    best = float(vals[i, j])

    def neg(v):
        ang = float(np.clip(v[1], -a_edge, a_edge))
        return -float(objective(np.array([math.exp(v[0]) * np.exp(1j * ang)]))[0])

    res = optimize.minimize(neg, x0=[math.log(r[j]), phi[i]], method="Nelder-Mead",
                            options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 4000})
    best = max(best, -float(res.fun))
    for ang in (a_edge, -a_edge):
        lo, hi = math.log(r[max(j - 1, 0)]), math.log(r[min(j + 1, radii - 1)])
        r1 = optimize.minimize_scalar(
            lambda v: -float(objective(np.array([math.exp(v) * np.exp(1j * ang)]))[0]),
            bounds=(lo, hi), method="bounded", options={"xatol": 1e-10})
        best = max(best, -float(r1.fun))
    return best
