"""Complex Borel measures on the line: finitely many atoms plus a sampled density.

A measure carries a declared exponential decay weight ``omega``; it then
belongs to the weighted class of measures ``e^{-omega|s|} nu`` with ``nu``
finite.  Densities are integrated with the trapezoid rule on their grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import signal

from .errors import GridOverflow, StripViolation

MAX_SAMPLES = 1 << 16
_STRIP_SLACK = 1e-12


class Extended(NamedTuple):
    """A nonnegative real that may be flagged as infinite."""

    value: float
    infinite: bool = False

    def __float__(self):
        return math.inf if self.infinite else self.value


@dataclass(frozen=True, eq=False)
class Density:
    left: float
    h: float
    samples: np.ndarray

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=complex)
        if self.h <= 0:
            raise ValueError("density spacing must be positive")
        if samples.ndim != 1 or samples.size == 0 or samples.size % 2:
            raise ValueError("density needs a nonempty, even number of samples")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)

    @property
    def n(self) -> int:
        return self.samples.size

    @property
    def locations(self) -> np.ndarray:
        return self.left + self.h * np.arange(self.n)

    @property
    def right(self) -> float:
        return self.left + self.h * (self.n - 1)

    def quadrature_weights(self) -> np.ndarray:
        w = np.full(self.n, self.h)
        w[0] = w[-1] = 0.5 * self.h
        return w


@dataclass(frozen=True, eq=False)
class Measure:
    atoms: tuple = ()
    density: Density | None = None
    decay_weight: float = 0.0

    def __post_init__(self):
        atoms = tuple((float(s), complex(w)) for s, w in self.atoms)
        object.__setattr__(self, "atoms", atoms)
        if self.decay_weight < 0:
            raise ValueError("decay weight must be nonnegative")
        if math.isfinite(self.decay_weight):
            tv = total_variation_weighted(self, self.decay_weight)
            if tv.infinite or not math.isfinite(tv.value):
                raise ValueError("weighted total variation is not finite")

    @property
    def atom_locations(self) -> np.ndarray:
        return np.array([s for s, _ in self.atoms], dtype=float)

    @property
    def atom_weights(self) -> np.ndarray:
        return np.array([w for _, w in self.atoms], dtype=complex)

    def support(self) -> tuple[float, float]:
        """Smallest interval containing the atoms and the density grid."""
        pts = list(self.atom_locations)
        if self.density is not None:
            pts += [self.density.left, self.density.right]
        if not pts:
            return (0.0, 0.0)
        return (min(pts), max(pts))

    def nodes(self) -> tuple[np.ndarray, np.ndarray]:
        """Locations and quadrature weights covering atoms and density together."""
        locs = [self.atom_locations]
        wts = [self.atom_weights]
        if self.density is not None:
            d = self.density
            locs.append(d.locations)
            wts.append(d.samples * d.quadrature_weights())
        return np.concatenate(locs), np.concatenate(wts)

    def reflect(self) -> "Measure":
        """The image measure under ``s -> -s``."""
        atoms = tuple((-s, w) for s, w in self.atoms)
        dens = None
        if self.density is not None:
            d = self.density
            dens = Density(-d.right, d.h, d.samples[::-1])
        return Measure(atoms, dens, self.decay_weight)

    def adjoint(self) -> "Measure":
        """Reflected and conjugated measure (adjoint of ``U_mu`` for unitary groups)."""
        r = self.reflect()
        atoms = tuple((s, w.conjugate()) for s, w in r.atoms)
        dens = None
        if r.density is not None:
            dens = Density(r.density.left, r.density.h, r.density.samples.conj())
        return Measure(atoms, dens, self.decay_weight)

    def scaled(self, c: complex) -> "Measure":
        atoms = tuple((s, c * w) for s, w in self.atoms)
        dens = None
        if self.density is not None:
            d = self.density
            dens = Density(d.left, d.h, c * d.samples)
        return Measure(atoms, dens, self.decay_weight)


# -- constructors ---------------------------------------------------------


def dirac(a: float = 0.0, weight: complex = 1.0) -> Measure:
    return Measure(((a, weight),), None, math.inf)


def from_function(fn, left: float, h: float, n: int, decay_weight: float = math.inf,
                  atoms=()) -> Measure:
    locs = left + h * np.arange(n)
    return Measure(tuple(atoms), Density(left, h, fn(locs)), decay_weight)


def gaussian(variance: float = 1.0, center: float = 0.0, half_width: float = 20.0,
             h: float = 0.01, weight: complex = 1.0) -> Measure:
    """Normal density sampled on ``[center - half_width, center + half_width)``."""
    n = int(round(2 * half_width / h))
    n += n % 2
    sd = math.sqrt(variance)

    def fn(s):
        return weight * np.exp(-0.5 * ((s - center) / sd) ** 2) / (sd * math.sqrt(2 * math.pi))

    return from_function(fn, center - half_width, h, n)


def two_sided_exponential(rate: float, half_width: float = 30.0, h: float = 0.01) -> Measure:
    """``(rate/2) e^{-rate|s|} ds``; its Fourier transform is ``rate^2/(rate^2+xi^2)``."""
    n = int(round(2 * half_width / h))
    n += n % 2
    return from_function(lambda s: 0.5 * rate * np.exp(-rate * np.abs(s)), -half_width, h, n,
                         decay_weight=rate * (1 - 1e-9))


# -- operations -------------------------------------------------------------


def _check_strip(mu: Measure, z: np.ndarray) -> None:
    im = np.abs(np.imag(z))
    bad = im > mu.decay_weight + _STRIP_SLACK
    if np.any(bad & (im > 0)):
        raise StripViolation(
            f"|Im z| = {float(np.max(im)):g} exceeds decay weight {mu.decay_weight:g}")


def _transform(mu: Measure, z, power: int):
    zz = np.asarray(z, dtype=complex)
    _check_strip(mu, zz)
    locs, wts = mu.nodes()
    flat = zz.ravel()
    out = np.empty(flat.shape, dtype=complex)
    coef = wts * (-1j * locs) ** power
    chunk = max(1, (1 << 22) // max(locs.size, 1))
    for i in range(0, flat.size, chunk):
        zs = flat[i:i + chunk]
        out[i:i + chunk] = np.exp(-1j * np.outer(zs, locs)) @ coef
    out = out.reshape(zz.shape)
    return out[()] if out.ndim == 0 else out


def fourier(mu: Measure, z):
    """``int e^{-isz} mu(ds)`` for ``z`` in the closed strip of width ``decay_weight``."""
    return _transform(mu, z, 0)


def fourier_derivative(mu: Measure, z):
    """Derivative in ``z`` of :func:`fourier`."""
    return _transform(mu, z, 1)


def _fractional_shift(samples: np.ndarray, frac: float) -> np.ndarray:
    """Band-limited shift ``x(j - frac)``; the output gains two trailing samples."""
    n = samples.size
    m = 1 << int(math.ceil(math.log2(2 * n + 4)))
    buf = np.zeros(m, dtype=complex)
    buf[:n] = samples
    k = np.fft.fftfreq(m) * m
    out = np.fft.ifft(np.fft.fft(buf) * np.exp(-2j * math.pi * k * frac / m))
    return out[:n + 2]


class _GridAccumulator:
    """Sums sampled densities onto the grid of the first one added."""

    def __init__(self):
        self.left = None
        self.h = None
        self.pieces: list[tuple[int, np.ndarray]] = []

    def add(self, left: float, h: float, samples: np.ndarray) -> None:
        if self.left is None:
            self.left, self.h = left, h
            self.pieces.append((0, samples))
            return
        offset = (left - self.left) / self.h
        m = math.floor(offset)
        frac = offset - m
        if 1 - frac <= 1e-9:
            m, frac = m + 1, 0.0
        if frac > 1e-9:
            samples = _fractional_shift(samples, frac)
        self.pieces.append((m, samples))

    def density(self, max_samples: int) -> Density | None:
        if self.left is None:
            return None
        lo = min(m for m, _ in self.pieces)
        hi = max(m + s.size for m, s in self.pieces)
        n = hi - lo
        n += n % 2
        if n > max_samples:
            raise GridOverflow(f"convolved density needs {n} samples (cap {max_samples})")
        out = np.zeros(n, dtype=complex)
        for m, s in self.pieces:
            out[m - lo:m - lo + s.size] += s
        return Density(self.left + lo * self.h, self.h, out)


def convolve(mu: Measure, nu: Measure, max_samples: int = MAX_SAMPLES) -> Measure:
    """Convolution of two measures; densities must share their spacing."""
    atoms: dict[float, complex] = {}
    for s, w in mu.atoms:
        for r, v in nu.atoms:
            atoms[s + r] = atoms.get(s + r, 0) + w * v
    acc = _GridAccumulator()
    dm, dn = mu.density, nu.density
    if dm is not None and dn is not None:
        if not math.isclose(dm.h, dn.h, rel_tol=1e-12):
            raise ValueError("density convolution needs equal spacings")
        full = signal.fftconvolve(dm.samples, dn.samples) * dm.h
        acc.add(dm.left + dn.left, dm.h, full)
    for d, other in ((dm, nu), (dn, mu)):
        if d is None:
            continue
        for s, w in other.atoms:
            acc.add(d.left + s, d.h, w * d.samples)
    dens = acc.density(max_samples)
    return Measure(tuple(sorted(atoms.items())), dens, min(mu.decay_weight, nu.decay_weight))


def _kink_correction(d: Density, f: np.ndarray) -> float:
    """Euler-Maclaurin term for the corner of ``f`` at a grid node ``s = 0``.

    The weight ``e^{omega|s|}`` (and many densities) has a derivative jump at
    the origin, which caps the plain trapezoid rule at O(h^2).  Adding
    ``h^2/12 (f'(0+) - f'(0-))`` with one-sided second-order differences
    restores O(h^4) there.
    """
    j = -d.left / d.h
    i = int(round(j))
    if abs(j - i) > 1e-9 or i < 2 or i > d.n - 3:
        return 0.0
    right = (-3 * f[i] + 4 * f[i + 1] - f[i + 2]) / (2 * d.h)
    left = (3 * f[i] - 4 * f[i - 1] + f[i - 2]) / (2 * d.h)
    return float(d.h * d.h / 12.0 * (right - left))


def total_variation_weighted(mu: Measure, omega: float) -> Extended:
    """``sum |w_j| e^{omega|s_j|} + int |density| e^{omega|s|}``.

    Beyond the declared decay weight the answer is flagged infinite when the
    weighted density still grows toward an edge of its grid.
    """
    if omega < 0:
        raise ValueError("omega must be nonnegative")
    total = float(np.sum(np.abs(mu.atom_weights) * np.exp(omega * np.abs(mu.atom_locations))))
    d = mu.density
    if d is not None:
        weighted = np.abs(d.samples) * np.exp(omega * np.abs(d.locations))
        total += float(np.sum(weighted * d.quadrature_weights())) + _kink_correction(d, weighted)
        if omega > mu.decay_weight and weighted.size >= 8:
            edge = max(1, weighted.size // 20)
            for tail in (weighted[:edge][::-1], weighted[-edge:]):
                if tail[-1] > 0 and tail[-1] >= tail[0] and tail[-1] >= 1e-3 * weighted.max():
                    return Extended(total, True)
    if not math.isfinite(total):
        return Extended(math.inf, True)
    return Extended(total, False)


def cosh_weight(mu: Measure, omega: float) -> Measure:
    """``cosh(omega s) mu(ds)``; needs ``omega`` strictly below the decay weight."""
    if omega >= mu.decay_weight:
        raise StripViolation(f"cosh weight {omega:g} needs decay weight above it "
                             f"(have {mu.decay_weight:g})")
    atoms = tuple((s, w * math.cosh(omega * s)) for s, w in mu.atoms)
    dens = None
    if mu.density is not None:
        d = mu.density
        dens = Density(d.left, d.h, d.samples * np.cosh(omega * d.locations))
    return Measure(atoms, dens, mu.decay_weight - omega)


# -- text format ------------------------------------------------------------


def to_text(mu: Measure) -> str:
    lines = [f"decay {mu.decay_weight!r}"]
    for s, w in mu.atoms:
        lines.append(f"atom {s!r} {w.real!r} {w.imag!r}")
    if mu.density is not None:
        d = mu.density
        lines.append(f"density {d.left!r} {d.h!r} {d.n}")
        lines.extend(f"{float(c.real)!r} {float(c.imag)!r}" for c in d.samples)
    return "\n".join(lines) + "\n"


def from_text(text: str) -> Measure:
    atoms = []
    dens = None
    decay = 0.0
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    i = 0
    while i < len(lines):
        parts = lines[i].split()
        key = parts[0]
        try:
            if key == "decay":
                decay = float(parts[1])
            elif key == "atom":
                atoms.append((float(parts[1]), complex(float(parts[2]), float(parts[3]))))
            elif key == "density":
                left, h, n = float(parts[1]), float(parts[2]), int(parts[3])
                block = lines[i + 1:i + 1 + n]
                if len(block) != n:
                    raise ValueError(f"density block declares {n} samples, found {len(block)}")
                samples = np.array([complex(*map(float, b.split())) for b in block])
                dens = Density(left, h, samples)
                i += n
            else:
                raise ValueError(f"unknown record {key!r}")
        except (IndexError, TypeError) as exc:
            raise ValueError(f"malformed line {i + 1}: {lines[i]!r}") from exc
        i += 1
    return Measure(tuple(atoms), dens, decay)
