"""The compactly supported bump ``rho`` and the cutoffs built from it.

One bump serves two purposes: it is the mollifier of the bounded
transference kernels and, through its cumulative integral, the smooth step
from which the Littlewood-Paley profile is made.
"""

from __future__ import annotations

import functools
import math

import numpy as np
from scipy import integrate, interpolate

_TABLE_INTERVALS = 1 << 15


def _raw_bump(s):
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    inside = np.abs(s) < 1.0
    out[inside] = np.exp(1.0 / (s[inside] ** 2 - 1.0))
    return out


@functools.lru_cache(maxsize=None)
def bump_constant() -> float:
    """``c1`` such that ``rho`` integrates to one."""
    val, _ = integrate.quad(lambda s: math.exp(1.0 / (s * s - 1.0)), -1.0, 1.0,
                            epsabs=1e-14, epsrel=1e-13, limit=200)
    return 1.0 / val


def rho(s):
    """``c1 exp(1/(s^2-1))`` on ``|s| < 1``, zero elsewhere."""
    return bump_constant() * _raw_bump(s)


def rho_prime(s):
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    inside = np.abs(s) < 1.0
    si = s[inside]
    out[inside] = rho(si) * (-2.0 * si / (si * si - 1.0) ** 2)
    return out


@functools.lru_cache(maxsize=None)
def _cdf_spline():
    nodes = np.linspace(-1.0, 1.0, _TABLE_INTERVALS + 1)
    vals = rho(nodes)
    cdf = integrate.cumulative_simpson(vals, x=nodes, initial=0.0)
    # the total is 1 up to quadrature error; pin it exactly
    cdf = cdf / cdf[-1]
    return interpolate.CubicHermiteSpline(nodes, cdf, vals)


def rho_cdf(u):
    """``int_{-1}^{u} rho``, clamped to 0 and 1 outside ``[-1, 1]``."""
    u = np.asarray(u, dtype=float)
    out = np.where(u >= 1.0, 1.0, 0.0)
    inside = np.abs(u) < 1.0
    if np.any(inside):
        out = out.astype(float)
        out[inside] = _cdf_spline()(u[inside])
    return out


def smoothstep(s):
    """Smooth cutoff equal to 1 on ``(-inf, 1]`` and 0 on ``[2, inf)``."""
    s = np.asarray(s, dtype=float)
    return 1.0 - rho_cdf(2.0 * s - 3.0)


def lp_profile(s):
    """Littlewood-Paley profile ``chi(s) - chi(2s)`` on ``s > 0``, extended evenly.

    Supported in ``1/2 <= |s| <= 2``.
    """
    a = np.abs(np.asarray(s, dtype=float))
    out = smoothstep(a) - smoothstep(2.0 * a)
    return np.where(a > 0, out, 0.0)


def mollified_indicator(s, half_width, alpha):
    """``sigma * 1_[-L, L]`` with ``sigma = rho(./alpha)/alpha``, in closed form."""
    s = np.asarray(s, dtype=float)
    return rho_cdf((s + half_width) / alpha) - rho_cdf((s - half_width) / alpha)
