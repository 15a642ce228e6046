"""Pluggable nonlinearities F(x, s, t) with partial derivatives and the
metadata the interval computations consume (growth bound, radial envelope).

Both built-in families are specified through piecewise partial derivatives
that are even functions of s (and t).  F itself is recovered by integrating
those partials from the origin, which makes F odd in each variable and keeps
F_s(x, 0, t) equal to the displayed first-branch value rather than zero.
On the nonnegative axis this integral coincides with the published closed
antiderivative table; construction cross-checks the two with high-order
quadrature and refuses models where they disagree.

Evaluators are numpy-vectorized in (s, t).  A model either looks the same
from every vertex (``support is None``) or vanishes off a single support
vertex; that is enough for the bundled families and tabulated custom models.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import BadParam, InconsistentDerivative
from .graph import WeightedGraph

Evaluator = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class GrowthData:
    """Witness for the sub-(p, q) growth bound F <= f1 |s|^alpha + f2 |t|^beta + g.

    The constants live on the support vertex when the model has one and on
    every vertex otherwise.
    """

    alpha: float
    beta: float
    f1: float
    f2: float
    g: float


@dataclass(frozen=True)
class EnvelopeData:
    """Radial envelope a(|(s, t)|) with b the indicator of the support vertex."""

    a: Callable[[np.ndarray], np.ndarray]
    support: str


@dataclass(frozen=True)
class DerivativeCheck:
    samples_used: int
    max_discrepancy: float
    max_tolerance_ratio: float
    passed: bool


@dataclass(frozen=True)
class NonlinearityModel:
    name: str
    F: Evaluator
    Fs: Evaluator
    Ft: Evaluator
    support: Optional[str] = None
    growth: Optional[GrowthData] = None
    envelope: Optional[EnvelopeData] = None
    seams_s: tuple[float, ...] = ()
    seams_t: tuple[float, ...] = ()
    monotone_box: bool = False
    s_scale: float = 1.0
    t_scale: float = 0.0
    cross_check_gap: float = 0.0
    requires_derivative_check: bool = False  # tabulated models, before solving
    params: dict = field(default_factory=dict)

    # -- vertex-aware evaluation (the module contract) ----------------------

    def _at(self, x: str, fn: Evaluator, s, t):
        if self.support is not None and x != self.support:
            return np.zeros_like(np.asarray(s, dtype=float) + np.asarray(t, dtype=float))
        return fn(np.asarray(s, dtype=float), np.asarray(t, dtype=float))

    def eval_F(self, x: str, s, t):
        return self._at(x, self.F, s, t)

    def eval_Fs(self, x: str, s, t):
        return self._at(x, self.Fs, s, t)

    def eval_Ft(self, x: str, s, t):
        return self._at(x, self.Ft, s, t)

    # -- vectorized per-graph paths -----------------------------------------

    def _on(self, g: WeightedGraph, fn: Evaluator, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        if self.support is None:
            return fn(u, v)
        out = np.zeros(g.n_vertices)
        i = g.index(self.support)
        out[i] = fn(u[i], v[i])
        return out

    def F_on(self, g: WeightedGraph, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        return self._on(g, self.F, u, v)

    def Fs_on(self, g: WeightedGraph, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        return self._on(g, self.Fs, u, v)

    def Ft_on(self, g: WeightedGraph, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        return self._on(g, self.Ft, u, v)

    def zero_is_excluded(self) -> bool:
        """True when F_s or F_t is nonzero at the origin at some vertex, so
        the zero state cannot solve the system for any positive parameter."""
        z = np.array(0.0)
        return bool(abs(float(self.Fs(z, z))) > 0.0 or abs(float(self.Ft(z, z))) > 0.0)


def _odd(fabs: Callable[[np.ndarray], np.ndarray]) -> Callable[[np.ndarray], np.ndarray]:
    def wrapped(s):
        if np.ndim(s) == 0:  # scalar fast path, hot in the solver
            s = float(s)
            return -fabs(-s) if s < 0.0 else fabs(s)
        return np.sign(s) * fabs(np.abs(s))
    return wrapped


def _even(fabs: Callable[[np.ndarray], np.ndarray]) -> Callable[[np.ndarray], np.ndarray]:
    def wrapped(s):
        if np.ndim(s) == 0:
            return fabs(abs(float(s)))
        return fabs(np.abs(s))
    return wrapped


def _branchwise(bounds: tuple[float, ...], closed: tuple[bool, ...], fns: tuple) -> Callable:
    """Piecewise evaluator on k >= 0: fns[i] applies up to bounds[i]
    (inclusive when closed[i]); the last fn is the unbounded tail.  Scalars
    take a plain-python branch, arrays go through np.select."""
    def evaluate(k):
        if np.ndim(k) == 0:
            k = float(k)
            for bound, shut, fn in zip(bounds, closed, fns):
                if k <= bound if shut else k < bound:
                    return fn(k)
            return fns[-1](k)
        conds = [k <= b if shut else k < b for b, shut in zip(bounds, closed)]
        return np.select(conds, [fn(k) for fn in fns[:-1]], default=fns[-1](k))
    return evaluate


def _cross_check_antiderivative(fprime, fabs, seams: tuple[float, ...],
                                name: str, nodes: int = 64) -> float:
    """Verify that fabs is the integral of fprime from 0 on the positive axis.

    Integrates branch by branch with Gauss-Legendre so seams never sit inside
    a panel; raises when the displayed antiderivative and the integrated
    partial disagree.
    """
    xs, ws = np.polynomial.legendre.leggauss(nodes)
    checkpoints = sorted(set(list(seams) + [1.5 * max(seams), 3.0 * max(seams)]))
    cuts = [0.0] + [c for c in checkpoints if c > 0.0]
    total = 0.0
    worst = 0.0
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        half = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        total += half * float(np.dot(ws, fprime(mid + half * xs)))
        ref = float(fabs(np.asarray(hi)))
        worst = max(worst, abs(total - ref) / (1.0 + abs(ref)))
    if worst > 1e-8:
        raise InconsistentDerivative(
            f"{name}: closed antiderivative and integrated partials disagree "
            f"(relative gap {worst:.3e})")
    return worst


# ---------------------------------------------------------------------------
# built-in family 1: the coupled model behind the finite 9-vertex fixture
# ---------------------------------------------------------------------------

def builtin_example_6_1(omega1: float, omega2: float,
                        r1: float = 2.0, r2: float = 3.0) -> NonlinearityModel:
    """Coupled nonlinearity with three radial branches in each variable.

    dF/ds is (w1 - |s|) up to |s| = w1, then |s|^3 - w1^3, then the tempered
    tail (4 w1)^r1 |s|^(3-r1) - w1^3; dF/dt follows the same pattern with
    (w2, fourth powers, 5 w2, r2).  Requires w1, w2 > 0 and
    (r1, r2) in (1, 2] x (1, 3].
    """
    w1, w2 = float(omega1), float(omega2)
    r1, r2 = float(r1), float(r2)
    if w1 <= 0.0 or w2 <= 0.0:
        raise BadParam(f"omega parameters must be positive, got ({w1}, {w2})")
    if not (1.0 < r1 <= 2.0):
        raise BadParam(f"r1 must lie in (1, 2], got {r1}")
    if not (1.0 < r2 <= 3.0):
        raise BadParam(f"r2 must lie in (1, 3], got {r2}")

    c1 = 0.5 * w1 ** 2 + 0.25 * (4 * w1) ** 4 + 0.75 * w1 ** 4 - (4 * w1) ** 4 / (4 - r1)
    c2 = (0.5 * w2 ** 2 + (5 * w2) ** 5 / 5.0 + 0.8 * w2 ** 5
          - (5 * w2) ** 5 / (5 - r2))

    # the seam |s| = 4 w1 (and |t| = 5 w2) belongs to the outer branch
    f1p = _branchwise(
        (w1, 4 * w1), (True, False),
        (lambda k: w1 - k,
         lambda k: k ** 3 - w1 ** 3,
         lambda k: (4 * w1) ** r1 * k ** (3 - r1) - w1 ** 3))
    f1abs = _branchwise(
        (w1, 4 * w1), (True, False),
        (lambda k: w1 * k - 0.5 * k ** 2,
         lambda k: 0.5 * w1 ** 2 + 0.25 * k ** 4 - w1 ** 3 * k + 0.75 * w1 ** 4,
         lambda k: c1 + (4 * w1) ** r1 * k ** (4 - r1) / (4 - r1) - w1 ** 3 * k))
    f2p = _branchwise(
        (w2, 5 * w2), (True, False),
        (lambda k: w2 - k,
         lambda k: k ** 4 - w2 ** 4,
         lambda k: (5 * w2) ** r2 * k ** (4 - r2) - w2 ** 4))
    f2abs = _branchwise(
        (w2, 5 * w2), (True, False),
        (lambda k: w2 * k - 0.5 * k ** 2,
         lambda k: 0.5 * w2 ** 2 + 0.2 * k ** 5 - w2 ** 4 * k + 0.8 * w2 ** 5,
         lambda k: c2 + (5 * w2) ** r2 * k ** (5 - r2) / (5 - r2) - w2 ** 4 * k))

    gap = max(
        _cross_check_antiderivative(f1p, f1abs, (w1, 4 * w1), "builtin_example_6_1/s"),
        _cross_check_antiderivative(f2p, f2abs, (w2, 5 * w2), "builtin_example_6_1/t"))

    part_s, part_t = _odd(f1abs), _odd(f2abs)
    even_s, even_t = _even(f1p), _even(f2p)
    growth = GrowthData(
        alpha=4.0 - r1, beta=5.0 - r2,
        f1=(4 * w1) ** r1 / (4 - r1), f2=(5 * w2) ** r2 / (5 - r2),
        g=(0.5 * w1 ** 2 + 0.25 * (4 * w1) ** 4 + 0.75 * w1 ** 4
           + 0.5 * w2 ** 2 + (5 * w2) ** 5 / 5.0 + 0.8 * w2 ** 5))

    def eval_fs(s, t):
        if np.ndim(s) == 0 and np.ndim(t) == 0:
            return even_s(s)
        return even_s(s) * np.ones_like(np.asarray(t, dtype=float))

    def eval_ft(s, t):
        if np.ndim(s) == 0 and np.ndim(t) == 0:
            return even_t(t)
        return even_t(t) * np.ones_like(np.asarray(s, dtype=float))

    return NonlinearityModel(
        name="example_6_1",
        F=lambda s, t: part_s(s) + part_t(t),
        Fs=eval_fs,
        Ft=eval_ft,
        growth=growth,
        seams_s=(0.0, w1, 4 * w1),
        seams_t=(0.0, w2, 5 * w2),
        monotone_box=True,
        s_scale=4 * w1,
        t_scale=5 * w2,
        cross_check_gap=gap,
        params={"omega1": w1, "omega2": w2, "r1": r1, "r2": r2})


# ---------------------------------------------------------------------------
# built-in family 2: the scalar model supported at a single vertex
# ---------------------------------------------------------------------------

def builtin_example_6_2(omega: float, r: float = 5.0, support: str = "x0") -> NonlinearityModel:
    """Scalar nonlinearity living on one vertex, zero everywhere else.

    f(x0, s) is (w - |s|) up to |s| = w, then |s|^5 - w^5 on (w, 6 w], then
    the tempered tail (6 w)^r |s|^(5-r) - w^5.  Requires w > 0 and
    r in (3, 5].  Ships the radial envelope (a, b) with b the indicator of
    the support vertex.
    """
    w = float(omega)
    r = float(r)
    if w <= 0.0:
        raise BadParam(f"omega must be positive, got {w}")
    if not (3.0 < r <= 5.0):
        raise BadParam(f"r must lie in (3, 5], got {r}")

    c3 = (0.5 * w ** 2 + (6 ** 6 + 5) / 6.0 * w ** 6 - (6 * w) ** 6 / (6 - r))

    # the middle branch is closed at |s| = 6 w
    fp = _branchwise(
        (w, 6 * w), (True, True),
        (lambda k: w - k,
         lambda k: k ** 5 - w ** 5,
         lambda k: (6 * w) ** r * k ** (5 - r) - w ** 5))
    fabs = _branchwise(
        (w, 6 * w), (True, True),
        (lambda k: w * k - 0.5 * k ** 2,
         lambda k: 0.5 * w ** 2 + k ** 6 / 6.0 - w ** 5 * k + 5.0 / 6.0 * w ** 6,
         lambda k: c3 + (6 * w) ** r * k ** (6 - r) / (6 - r) - w ** 5 * k))

    gap = _cross_check_antiderivative(fp, fabs, (w, 6 * w), "builtin_example_6_2")

    part = _odd(fabs)
    even_fp = _even(fp)
    envelope = EnvelopeData(a=_even(lambda k: fabs(k) + 1.0), support=str(support))
    growth = GrowthData(
        alpha=6.0 - r, beta=0.0,
        f1=(6 * w) ** r / (6 - r), f2=0.0,
        g=0.5 * w ** 2 + (6 ** 6 + 5) / 6.0 * w ** 6)

    def eval_f(s, t):
        if np.ndim(s) == 0 and np.ndim(t) == 0:
            return part(s)
        return part(s) + 0.0 * np.asarray(t, dtype=float)

    def eval_fs(s, t):
        if np.ndim(s) == 0 and np.ndim(t) == 0:
            return even_fp(s)
        return even_fp(s) + 0.0 * np.asarray(t, dtype=float)

    def eval_ft(s, t):
        if np.ndim(s) == 0 and np.ndim(t) == 0:
            return 0.0
        return np.zeros_like(np.asarray(s, dtype=float) + np.asarray(t, dtype=float))

    return NonlinearityModel(
        name="example_6_2",
        F=eval_f,
        Fs=eval_fs,
        Ft=eval_ft,
        support=str(support),
        growth=growth,
        envelope=envelope,
        seams_s=(0.0, w, 6 * w),
        seams_t=(),
        monotone_box=True,
        s_scale=6 * w,
        t_scale=0.0,
        cross_check_gap=gap,
        params={"omega": w, "r": r, "support": str(support)})


# ---------------------------------------------------------------------------
# tabulated custom models
# ---------------------------------------------------------------------------

def tabulated_model(s_grid, t_grid, values, name: str = "table") -> NonlinearityModel:
    """Bilinear interpolation of F over an (s, t) grid; partials are the exact
    cell-wise derivatives of the interpolant.  Arguments are clamped to the
    grid hull.  Run derivative_consistency before solving with one of these.
    """
    s = np.asarray(s_grid, dtype=float)
    t = np.asarray(t_grid, dtype=float)
    z = np.asarray(values, dtype=float)
    if s.ndim != 1 or t.ndim != 1 or len(s) < 2 or len(t) < 2:
        raise BadParam("table needs at least a 2x2 grid")
    if np.any(np.diff(s) <= 0) or np.any(np.diff(t) <= 0):
        raise BadParam("table grids must be strictly increasing")
    if z.shape != (len(s), len(t)):
        raise BadParam(f"table values must have shape {(len(s), len(t))}, got {z.shape}")

    def _locate(grid, x):
        x = np.clip(x, grid[0], grid[-1])
        i = np.clip(np.searchsorted(grid, x, side="right") - 1, 0, len(grid) - 2)
        frac = (x - grid[i]) / (grid[i + 1] - grid[i])
        return i, frac, x

    def _corners(si, ti):
        return z[si, ti], z[si + 1, ti], z[si, ti + 1], z[si + 1, ti + 1]

    def F(sv, tv):
        sv, tv = np.broadcast_arrays(np.asarray(sv, dtype=float), np.asarray(tv, dtype=float))
        si, sf, _ = _locate(s, sv)
        ti, tf, _ = _locate(t, tv)
        z00, z10, z01, z11 = _corners(si, ti)
        return ((1 - sf) * (1 - tf) * z00 + sf * (1 - tf) * z10
                + (1 - sf) * tf * z01 + sf * tf * z11)

    def Fs(sv, tv):
        sv, tv = np.broadcast_arrays(np.asarray(sv, dtype=float), np.asarray(tv, dtype=float))
        si, _, _ = _locate(s, sv)
        ti, tf, _ = _locate(t, tv)
        z00, z10, z01, z11 = _corners(si, ti)
        slope = ((1 - tf) * (z10 - z00) + tf * (z11 - z01)) / (s[si + 1] - s[si])
        return np.where((sv < s[0]) | (sv > s[-1]), 0.0, slope)  # clamped outside

    def Ft(sv, tv):
        sv, tv = np.broadcast_arrays(np.asarray(sv, dtype=float), np.asarray(tv, dtype=float))
        si, sf, _ = _locate(s, sv)
        ti, _, _ = _locate(t, tv)
        z00, z10, z01, z11 = _corners(si, ti)
        slope = ((1 - sf) * (z01 - z00) + sf * (z11 - z10)) / (t[ti + 1] - t[ti])
        return np.where((tv < t[0]) | (tv > t[-1]), 0.0, slope)

    return NonlinearityModel(
        name=name, F=F, Fs=Fs, Ft=Ft,
        seams_s=tuple(abs(x) for x in s),
        seams_t=tuple(abs(x) for x in t),
        s_scale=float(np.max(np.abs(s))),
        t_scale=float(np.max(np.abs(t))),
        requires_derivative_check=True,
        params={"s": s.tolist(), "t": t.tolist()})


def nonlinearity_from_doc(doc: dict) -> NonlinearityModel:
    """Build a model from its JSON document: a named builtin or a table."""
    if "builtin" in doc:
        params = dict(doc.get("params", {}))
        kind = doc["builtin"]
        if kind == "example_6_1":
            return builtin_example_6_1(**params)
        if kind == "example_6_2":
            return builtin_example_6_2(**params)
        raise BadParam(f"unknown builtin nonlinearity {kind!r}")
    if "table" in doc:
        tab = doc["table"]
        return tabulated_model(tab["s"], tab["t"], tab["values"])
    raise BadParam("nonlinearity document needs a 'builtin' or 'table' entry")


def nonlinearity_to_doc(model: NonlinearityModel) -> dict:
    if model.name in ("example_6_1", "example_6_2"):
        return {"builtin": model.name, "params": dict(model.params)}
    if "s" in model.params:
        raise BadParam("tabulated models round-trip through their defining table")
    raise BadParam(f"model {model.name!r} has no document form")


# ---------------------------------------------------------------------------
# numerical validation
# ---------------------------------------------------------------------------

def _sample_axis(rng, span: float, seams: tuple[float, ...], count: int,
                 exclusion: float) -> np.ndarray:
    """Uniform samples in [-span, span] with |x| kept clear of every seam."""
    if span <= 0.0:
        return np.zeros(count)
    out = np.empty(0)
    while len(out) < count:
        cand = rng.uniform(-span, span, size=4 * count)
        if seams:
            dist = np.min(np.abs(np.abs(cand)[:, None] - np.asarray(seams)), axis=1)
            cand = cand[dist > exclusion]
        out = np.concatenate([out, cand])
    return out[:count]


def derivative_consistency(model: NonlinearityModel, samples: int = 1000,
                           step: float = 1e-5) -> DerivativeCheck:
    """Compare central differences of F against the declared partials.

    Points within 10*step of a piecewise seam are excluded.  The tolerance at
    each point is max(1e-6, 1e-4 |partial|); exceeding it raises
    InconsistentDerivative.
    """
    if samples < 1:
        raise BadParam("samples must be >= 1")
    if step <= 0.0:
        raise BadParam("step must be positive")
    rng = np.random.default_rng(170)
    s_span = 1.5 * max((model.s_scale,) + model.seams_s) if model.s_scale else 0.0
    t_span = 1.5 * max((model.t_scale,) + model.seams_t) if model.t_scale else 0.0
    s = _sample_axis(rng, s_span, model.seams_s, samples, 10 * step)
    t = _sample_axis(rng, t_span, model.seams_t, samples, 10 * step)

    worst = 0.0
    worst_ratio = 0.0
    for fn, dfn, axis in ((model.F, model.Fs, "s"), (model.F, model.Ft, "t")):
        if axis == "s":
            hi, lo = fn(s + step, t), fn(s - step, t)
        else:
            if t_span == 0.0:
                continue
            hi, lo = fn(s, t + step), fn(s, t - step)
        fd = (hi - lo) / (2.0 * step)
        exact = dfn(s, t)
        gap = np.abs(fd - exact)
        tol = np.maximum(1e-6, 1e-4 * np.abs(exact))
        worst = max(worst, float(np.max(gap)))
        worst_ratio = max(worst_ratio, float(np.max(gap / tol)))
    passed = worst_ratio <= 1.0
    report = DerivativeCheck(samples_used=samples, max_discrepancy=worst,
                             max_tolerance_ratio=worst_ratio, passed=passed)
    if not passed:
        raise InconsistentDerivative(
            f"partials disagree with finite differences of F "
            f"(max discrepancy {worst:.3e}, {worst_ratio:.2f}x tolerance)")
    return report


def growth_bound_gap(model: NonlinearityModel, points: int = 10000,
                     span_factor: float = 4.0, seed: int = 411) -> float:
    """Largest violation of F <= f1 |s|^alpha + f2 |t|^beta + g on a random
    grid (nonpositive return means the bound held everywhere sampled)."""
    if model.growth is None:
        raise BadParam("model declares no growth data")
    gr = model.growth
    rng = np.random.default_rng(seed)
    s = rng.uniform(-span_factor * max(model.s_scale, 1.0),
                    span_factor * max(model.s_scale, 1.0), points)
    tspan = span_factor * max(model.t_scale, 1.0) if model.t_scale else 0.0
    t = rng.uniform(-tspan, tspan, points) if tspan else np.zeros(points)
    bound = gr.f1 * np.abs(s) ** gr.alpha + gr.f2 * np.abs(t) ** gr.beta + gr.g
    return float(np.max(model.F(s, t) - bound))


def envelope_bound_gap(model: NonlinearityModel, points: int = 10000,
                       span_factor: float = 4.0, seed: int = 412) -> float:
    """Largest violation of |F| <= a(|(s, t)|) at the support vertex.

    This is the part of the envelope hypothesis that the admissible-interval
    numerator actually uses.
    """
    if model.envelope is None:
        raise BadParam("model declares no envelope")
    rng = np.random.default_rng(seed)
    s = rng.uniform(-span_factor * max(model.s_scale, 1.0),
                    span_factor * max(model.s_scale, 1.0), points)
    tspan = span_factor * max(model.t_scale, 1.0) if model.t_scale else 0.0
    t = rng.uniform(-tspan, tspan, points) if tspan else np.zeros(points)
    rho = np.hypot(s, t)
    return float(np.max(np.abs(model.F(s, t)) - model.envelope.a(rho)))
