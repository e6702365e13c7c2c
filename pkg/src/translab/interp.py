"""K-functionals and real interpolation norms for finite-dimensional couples.

A couple is a pair of norms on ``C^n``.  When both norms are sums of mixed
``l^p(l^r)`` norms of linear images (``StructuredNorm``) with exponents in
``{1, 2, inf}``, the K-functional is a second-order cone program and is handed
to Clarabel.  Anything else goes through a projected subgradient method.

Two exact regimes are used whenever the couple carries comparison constants:
``K(t, z) = ||z||_X`` once ``t >= sup ||y||_X / ||y||_Y`` and
``K(t, z) = t ||z||_Y`` once ``t <= 1 / sup ||y||_Y / ||y||_X``.
"""

from __future__ import annotations

import math
import weakref
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import CheckFailed, SolverDiverged

_EXACT = (1.0, 2.0, math.inf)


# -- structured norms --------------------------------------------------------


def _mixed(w: np.ndarray, outer: float, inner: float, block: int) -> float:
    a = np.abs(w).reshape(-1, block)
    e = a.max(axis=1) if math.isinf(inner) else (a ** inner).sum(axis=1) ** (1.0 / inner)
    if math.isinf(outer):
        return float(e.max(initial=0.0))
    return float((e ** outer).sum() ** (1.0 / outer))


@dataclass(frozen=True, eq=False)
class NormTerm:
    """``scale * || (||(op x)_g||_inner)_g ||_exponent`` over consecutive blocks ``g``."""

    exponent: float = 2.0
    op: object = None
    block: int = 1
    inner: float = 2.0
    scale: float = 1.0

    def apply(self, x: np.ndarray) -> np.ndarray:
        return x if self.op is None else self.op @ x

    def value(self, x: np.ndarray) -> float:
        return self.scale * _mixed(self.apply(x), self.exponent, self.inner, self.block)

    def gradient(self, x: np.ndarray) -> np.ndarray:
        """A subgradient ``g`` with ``d value = Re(conj(g) . dx)``."""
        w = self.apply(x)
        gw = self._grad_mixed(w)
        if self.op is None:
            return self.scale * gw
        return self.scale * (self.op.conj().T @ gw)

    def _grad_mixed(self, w: np.ndarray) -> np.ndarray:
        wb = w.reshape(-1, self.block)
        a = np.abs(wb)
        sgn = np.where(a > 0, wb / np.where(a > 0, a, 1.0), 0.0)
        r, p = self.inner, self.exponent
        if math.isinf(r):
            e = a.max(axis=1)
            inner_g = np.zeros_like(wb)
            j = a.argmax(axis=1)
            inner_g[np.arange(wb.shape[0]), j] = sgn[np.arange(wb.shape[0]), j]
        else:
            e = (a ** r).sum(axis=1) ** (1.0 / r)
            safe = np.where(e > 0, e, 1.0)
            inner_g = (a / safe[:, None]) ** (r - 1.0) * sgn
        if math.isinf(p):
            outer_g = np.zeros_like(e)
            outer_g[int(np.argmax(e))] = 1.0
        else:
            tot = (e ** p).sum() ** (1.0 / p)
            outer_g = (e / tot) ** (p - 1.0) if tot > 0 else np.zeros_like(e)
        return (outer_g[:, None] * inner_g).reshape(-1)

    @property
    def conic(self) -> bool:
        return self.exponent in _EXACT and (self.block == 1 or self.inner in _EXACT)


@dataclass(frozen=True, eq=False)
class StructuredNorm:
    terms: tuple[NormTerm, ...]

    def __call__(self, x) -> float:
        x = np.asarray(x, dtype=complex)
        return float(sum(term.value(x) for term in self.terms))

    def gradient(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=complex)
        return sum(term.gradient(x) for term in self.terms)

    @property
    def conic(self) -> bool:
        return all(term.conic for term in self.terms)


def lp_norm(p: float, scale: float = 1.0, block: int = 1, inner: float = 2.0) -> StructuredNorm:
    return StructuredNorm((NormTerm(p, None, block, inner, scale),))


def graph_norm(op, p: float, scale: float = 1.0, block: int = 1, inner: float = 2.0) -> StructuredNorm:
    """``||x|| + ||op x||`` in the same mixed norm."""
    return StructuredNorm((NormTerm(p, None, block, inner, scale), NormTerm(p, op, block, inner, scale)))


# -- couples -----------------------------------------------------------------


@dataclass(frozen=True)
class SolverOptions:
    iterations: int = 2000
    tolerance: float = 1e-10
    method: str = "auto"  # auto | conic | subgradient


@dataclass(frozen=True, eq=False)
class InterpCouple:
    """A pair of norms on ``C^dim``.

    ``x_over_y`` bounds ``||y||_X / ||y||_Y`` and ``y_over_x`` bounds
    ``||y||_Y / ||y||_X``.  Either may be ``None`` when unknown; they only
    enable the exact regimes.  ``embed``, when given, is a linear isometric
    change of coordinates (an FFT, say) applied before the norms are taken.
    """

    dim: int
    norm_x: Callable
    norm_y: Callable
    x_over_y: float | None = None
    y_over_x: float | None = None
    options: SolverOptions = field(default_factory=SolverOptions)
    embed: Callable | None = None

    def coordinates(self, z) -> np.ndarray:
        """Vector in the coordinates the two norms are written in."""
        z = np.asarray(z, dtype=complex).reshape(-1)
        if self.embed is not None:
            z = np.asarray(self.embed(z), dtype=complex).reshape(-1)
        return z

    @property
    def t_high(self) -> float:
        return math.inf if self.x_over_y is None else self.x_over_y

    @property
    def t_low(self) -> float:
        return 0.0 if self.y_over_x is None else 1.0 / self.y_over_x


def identical_couple(dim: int, norm: Callable) -> InterpCouple:
    return InterpCouple(dim, norm, norm, 1.0, 1.0)


# -- conic route -------------------------------------------------------------


def _realify(op, n: int):
    if op is None:
        return sp.eye(2 * n, format="csr")
    m = sp.csr_matrix(op) if sp.issparse(op) else np.asarray(op)
    if sp.issparse(m):
        return sp.bmat([[m.real, -m.imag], [m.imag, m.real]], format="csr")
    return sp.csr_matrix(np.block([[m.real, -m.imag], [m.imag, m.real]]))


class _Program:
    """Conic program ``min (c_x + t c_y).x  s.t.  b - A x in K`` for one couple.

    Variables are ``[Re y, Im y, Re z, Im z, aux...]``; ``z`` is pinned by a
    trailing zero cone, so ``A`` and the cones are shared by every ``(t, z)``.
    """

    def __init__(self, n: int):
        self.n = n
        self.nvar = 4 * n
        self.cost = ({}, {})
        self.rows: list[sp.csr_matrix] = []
        self.rhs: list[np.ndarray] = []
        self.cones: list = []
        self._frozen = None

    def new(self, k: int) -> np.ndarray:
        idx = np.arange(self.nvar, self.nvar + k)
        self.nvar += k
        return idx

    def add_cost(self, idx, c: float, side: int) -> None:
        book = self.cost[side]
        for i in np.atleast_1d(idx):
            book[int(i)] = book.get(int(i), 0.0) + c

    def add(self, a: sp.spmatrix, b: np.ndarray, cone) -> None:
        self.rows.append(sp.csr_matrix(a))
        self.rhs.append(np.asarray(b, dtype=float))
        self.cones.append(cone)

    def selector(self, idx, sign: float = -1.0) -> sp.csr_matrix:
        idx = np.atleast_1d(idx)
        return sp.csr_matrix((np.full(idx.size, sign), (np.arange(idx.size), idx)),
                             shape=(idx.size, self.nvar))

    def freeze(self) -> None:
        import clarabel

        n, nv = self.n, self.nvar
        pin = sp.csr_matrix((np.ones(2 * n), (np.arange(2 * n), 2 * n + np.arange(2 * n))),
                            shape=(2 * n, nv))
        a = sp.vstack([_widen(r, nv) for r in self.rows] + [pin], format="csc")
        b = np.concatenate(self.rhs + [np.zeros(2 * n)])
        cones = self.cones + [clarabel.ZeroConeT(2 * n)]
        qs = []
        for book in self.cost:
            q = np.zeros(nv)
            for i, c in book.items():
                q[i] = c
            qs.append(q)
        self._frozen = (a, b, cones, qs[0], qs[1])

    def solve(self, z: np.ndarray, t: float, tol: float) -> np.ndarray:
        import clarabel

        if self._frozen is None:
            self.freeze()
        a, b, cones, qx, qy = self._frozen
        n = self.n
        b = b.copy()
        b[-2 * n:] = np.concatenate([z.real, z.imag])
        settings = clarabel.DefaultSettings()
        settings.verbose = False
        settings.tol_gap_abs = tol
        settings.tol_gap_rel = tol
        settings.tol_feas = tol
        settings.max_iter = 200
        nv = self.nvar
        solver = clarabel.DefaultSolver(sp.csc_matrix((nv, nv)), qx + t * qy, a, b, cones, settings)
        x = np.asarray(solver.solve().x)
        return x[:n] + 1j * x[n:2 * n]


def _widen(m, n: int) -> sp.csr_matrix:
    m = sp.csr_matrix(m)
    return sp.csr_matrix((m.data, m.indices, m.indptr), shape=(m.shape[0], n))


def _add_term(prog: _Program, term: NormTerm, side: int) -> None:
    """Epigraph of ``term(z - y)`` (side 0) or ``term(y)`` (side 1)."""
    import clarabel

    n = prog.n
    mr = _realify(term.op, n)
    m = mr.shape[0] // 2
    if side == 0:
        a_w = sp.hstack([mr, -mr], format="csr")
    else:
        a_w = sp.hstack([-mr, sp.csr_matrix(mr.shape)], format="csr")
    b_w = np.zeros(2 * m)
    c = term.scale
    blk = term.block
    groups = m // blk

    def w_rows(entries: np.ndarray):
        rows = np.concatenate([entries, m + entries])
        return a_w[rows], b_w[rows]

    if term.exponent == 2.0 and (blk == 1 or term.inner == 2.0):
        u = prog.new(1)
        prog.add_cost(u, c, side)
        aw, bw = w_rows(np.arange(m))
        _append(prog, [(u, aw, bw)], clarabel.SecondOrderConeT(2 * m + 1))
        return

    e = prog.new(groups)
    if blk == 1 or term.inner == 2.0:
        pieces = []
        for g in range(groups):
            aw, bw = w_rows(np.arange(g * blk, (g + 1) * blk))
            pieces.append((e[g:g + 1], aw, bw))
        _append_many(prog, pieces, 2 * blk + 1)
    elif math.isinf(term.inner):
        pieces = []
        for g in range(groups):
            for j in range(g * blk, (g + 1) * blk):
                aw, bw = w_rows(np.array([j]))
                pieces.append((e[g:g + 1], aw, bw))
        _append_many(prog, pieces, 3)
    else:  # inner exponent 1
        s = prog.new(m)
        pieces = []
        for j in range(m):
            aw, bw = w_rows(np.array([j]))
            pieces.append((s[j:j + 1], aw, bw))
        _append_many(prog, pieces, 3)
        lin = sp.lil_matrix((groups, prog.nvar))
        for g in range(groups):
            lin[g, e[g]] = -1.0
            lin[g, s[g * blk:(g + 1) * blk]] = 1.0
        prog.add(lin.tocsr(), np.zeros(groups), clarabel.NonnegativeConeT(groups))

    if term.exponent == 1.0:
        prog.add_cost(e, c, side)
    elif term.exponent == 2.0:
        u = prog.new(1)
        prog.add_cost(u, c, side)
        prog.add(sp.vstack([prog.selector(u), prog.selector(e)]), np.zeros(groups + 1),
                 clarabel.SecondOrderConeT(groups + 1))
    else:
        u = prog.new(1)
        prog.add_cost(u, c, side)
        rows = prog.selector(np.repeat(u, groups)) - prog.selector(e)
        prog.add(rows, np.zeros(groups), clarabel.NonnegativeConeT(groups))


def _append(prog: _Program, pieces, cone) -> None:
    for head, aw, bw in pieces:
        prog.add(sp.vstack([prog.selector(head), _widen(aw, prog.nvar)]),
                 np.concatenate([[0.0], bw]), cone)


def _append_many(prog: _Program, pieces, size: int) -> None:
    import clarabel

    heads = sp.vstack([prog.selector(h) for h, _, _ in pieces], format="csr")
    body = sp.vstack([_widen(aw, prog.nvar) for _, aw, _ in pieces], format="csr")
    k = len(pieces)
    width = size - 1
    order = np.empty(k * size, dtype=int)
    order[0::size] = np.arange(k)
    for j in range(width):
        order[1 + j::size] = k + np.arange(k) * width + j
    full = sp.vstack([_widen(heads, prog.nvar), _widen(body, prog.nvar)], format="csr")
    rhs = np.concatenate([np.zeros(k), np.concatenate([bw for _, _, bw in pieces])])
    prog.rows.append(full[order])
    prog.rhs.append(rhs[order])
    prog.cones.extend(clarabel.SecondOrderConeT(size) for _ in range(k))


_PROGRAMS: "weakref.WeakKeyDictionary[InterpCouple, _Program]" = weakref.WeakKeyDictionary()


def _program(c: InterpCouple) -> _Program:
    prog = _PROGRAMS.get(c)
    if prog is None:
        prog = _Program(c.dim)
        for term in c.norm_x.terms:
            _add_term(prog, term, 0)
        for term in c.norm_y.terms:
            _add_term(prog, term, 1)
        prog.freeze()
        _PROGRAMS[c] = prog
    return prog


def _conic_minimizer(c: InterpCouple, z: np.ndarray, t: float) -> np.ndarray:
    return _program(c).solve(z, t, c.options.tolerance)


# -- subgradient route -------------------------------------------------------


def _numeric_gradient(fn: Callable, y: np.ndarray) -> np.ndarray:
    h = 1e-7 * max(1.0, float(np.max(np.abs(y), initial=0.0)))
    g = np.empty(y.size, dtype=complex)
    for k in range(y.size):
        e = np.zeros(y.size, dtype=complex)
        e[k] = h
        dr = (fn(y + e) - fn(y - e)) / (2 * h)
        di = (fn(y + 1j * e) - fn(y - 1j * e)) / (2 * h)
        g[k] = dr + 1j * di
    return g


def _subgradient_minimizer(c: InterpCouple, z: np.ndarray, t: float) -> np.ndarray:
    def objective(y):
        return c.norm_x(z - y) + t * c.norm_y(y)

    def grad(y):
        if isinstance(c.norm_x, StructuredNorm) and isinstance(c.norm_y, StructuredNorm):
            return -c.norm_x.gradient(z - y) + t * c.norm_y.gradient(y)
        return _numeric_gradient(objective, y)

    bound = 10.0 * c.norm_x(z) + 1e-300
    best_y, best = np.zeros_like(z), objective(np.zeros_like(z))
    for start in (np.zeros_like(z), z.copy(), 0.5 * z):
        y = start
        f_best = objective(y)
        y_best = y
        delta = 0.1 * max(f_best, 1e-300)
        stall = 0
        for _ in range(c.options.iterations):
            g = grad(y)
            gg = float(np.vdot(g, g).real)
            if gg == 0.0:
                break
            y = y - (objective(y) - (f_best - delta)) / gg * g
            if c.norm_x(y) > bound:
                raise SolverDiverged(f"iterate left the ball of radius {bound:.3g}")
            f = objective(y)
            if f < f_best - 1e-15 * abs(f_best):
                f_best, y_best, stall = f, y, 0
            else:
                stall += 1
                if stall >= 20:
                    delta *= 0.5
                    y, stall = y_best, 0
            if delta < c.options.tolerance * max(f_best, 1e-300):
                break
        if f_best < best:
            best, best_y = f_best, y_best
    return best_y


def _minimizer(c: InterpCouple, z: np.ndarray, t: float) -> np.ndarray:
    method = c.options.method
    if method == "auto":
        structured = isinstance(c.norm_x, StructuredNorm) and isinstance(c.norm_y, StructuredNorm)
        method = "conic" if structured and c.norm_x.conic and c.norm_y.conic else "subgradient"
    if method == "conic":
        return _conic_minimizer(c, z, t)
    return _subgradient_minimizer(c, z, t)


def k_functional(c: InterpCouple, z, t: float) -> float:
    """``inf_y ||z - y||_X + t ||y||_Y``, never above ``min(||z||_X, t ||z||_Y)``."""
    if not t > 0:
        raise ValueError("t must be positive")
    return _k(c, c.coordinates(z), t)


def _k(c: InterpCouple, z: np.ndarray, t: float) -> float:
    zx = c.norm_x(z)
    if t >= c.t_high:
        return zx
    zy = c.norm_y(z)
    if t <= c.t_low:
        return t * zy
    trivial = min(zx, t * zy)
    if trivial == 0.0:
        return 0.0
    y = _minimizer(c, z, t)
    return min(trivial, c.norm_x(z - y) + t * c.norm_y(y))


# -- interpolation norms -----------------------------------------------------


@dataclass(frozen=True)
class Quadrature:
    octaves: int = 20
    per_octave: int = 8


@dataclass(frozen=True)
class KProfile:
    """K sampled on a log-uniform node set plus the data for the two tails."""

    nodes: np.ndarray
    values: np.ndarray
    norm_x: float
    norm_y: float
    exact_low: bool
    exact_high: bool

    def interp_norm(self, theta: float, q: float) -> float:
        if not 0.0 < theta < 1.0:
            raise ValueError("theta must lie in (0, 1)")
        lo, hi = self.nodes[0], self.nodes[-1]
        if math.isinf(q):
            inner = float(np.max(self.nodes ** -theta * self.values))
            low_tail = lo ** (1 - theta) * self.norm_y  # t^{1-theta} ||z||_Y increases up to lo
            high_tail = hi ** -theta * self.norm_x
            return max(inner, low_tail, high_tail)
        u = np.log(self.nodes)
        g = (self.nodes ** -theta * self.values) ** q
        total = float(np.trapezoid(g, u)) if u.size > 1 else 0.0
        total += lo ** ((1 - theta) * q) * self.norm_y ** q / ((1 - theta) * q)
        total += hi ** (-theta * q) * self.norm_x ** q / (theta * q)
        return total ** (1.0 / q)


def k_profile(c: InterpCouple, z, quad: Quadrature = Quadrature()) -> KProfile:
    z = c.coordinates(z)
    if z.size != c.dim:
        raise ValueError(f"vector has length {z.size}, couple expects {c.dim}")
    zx, zy = c.norm_x(z), c.norm_y(z)
    exact_low, exact_high = c.t_low > 0, math.isfinite(c.t_high)
    lo = c.t_low if exact_low else 2.0 ** -quad.octaves
    hi = c.t_high if exact_high else 2.0 ** quad.octaves
    if hi <= lo:
        nodes = np.array([lo])
    else:
        count = max(2, int(math.ceil(quad.per_octave * math.log2(hi / lo))) + 1)
        nodes = np.geomspace(lo, hi, count)
    values = np.array([_k(c, z, t) for t in nodes])
    return KProfile(nodes, values, zx, zy, exact_low, exact_high)


def interp_norm(c: InterpCouple, z, theta: float, q: float, quad: Quadrature = Quadrature()) -> float:
    """``|| t^{-theta} K(t, z) ||_{L^q(dt/t)}``.

    Between the exact regimes the integral is a trapezoid rule in ``log t``.
    Outside them the closed forms are integrated exactly; without comparison
    constants the window ``[2^-J, 2^J]`` is used and the tails are replaced
    by the upper bounds ``K <= t ||z||_Y`` and ``K <= ||z||_X``.
    """
    return k_profile(c, z, quad).interp_norm(theta, q)


def closed_form_identical(theta: float, q: float) -> float:
    """``(X, X)_{theta, q}`` norm of a unit vector."""
    if math.isinf(q):
        return 1.0
    return (1.0 / ((1 - theta) * q) + 1.0 / (theta * q)) ** (1.0 / q)


# -- interpolation inequality ----------------------------------------------


@dataclass
class InequalityReport:
    ratios: list[float]
    worst_ratio: float
    worst_probe: int
    bound: float
    violations: int


def interp_inequality_check(c: InterpCouple, op, b_x: float, b_y: float, theta: float, q: float,
                            probes: int | Sequence[np.ndarray] = 100, seed: int = 0,
                            tol: float = 1e-6, quad: Quadrature = Quadrature(),
                            raise_on_violation: bool = True) -> InequalityReport:
    """Check ``||T z||_{theta,q} <= b_x^{1-theta} b_y^theta ||z||_{theta,q}`` probe by probe."""
    apply = op if callable(op) else (lambda v, m=np.asarray(op): m @ v)
    if isinstance(probes, int):
        rng = np.random.default_rng(seed)
        probe_list = [rng.standard_normal(c.dim) + 1j * rng.standard_normal(c.dim) for _ in range(probes)]
    else:
        probe_list = [np.asarray(p, dtype=complex) for p in probes]
    factor = b_x ** (1 - theta) * b_y ** theta
    ratios = []
    for z in probe_list:
        den = interp_norm(c, z, theta, q, quad)
        num = interp_norm(c, apply(z), theta, q, quad)
        ratios.append(num / (factor * den) if den > 0 else 0.0)
    worst = int(np.argmax(ratios))
    violations = sum(r > 1 + tol for r in ratios)
    report = InequalityReport(ratios, ratios[worst], worst, factor, violations)
    if violations and raise_on_violation:
        raise CheckFailed(f"{violations} probes violate the interpolation inequality "
                          f"(worst ratio {ratios[worst]:.9g})", probe=probe_list[worst])
    return report
