"""Admissible-parameter intervals for the three-solution results.

For the coupled system on a finite graph the interval is (1/L2, 1/L1) with

    L1 = max over the box {|s| <= s_max, |t| <= t_max} of F(x, s, t) |V|
         / (gamma1^p + gamma2^q),
    L2 = inf_x F(x, delta1, delta2) |V|
         / (delta1^p/p int h1 + delta2^q/q int h2),

where s_max = (p gamma1^p + p gamma2^q)^(1/p) / (h1_min mu_min)^(1/p) and
t_max analogously with q and h2.  On locally finite graphs (orders 1, with
Dirichlet truncation) the endpoints use the radial envelope a and the local
masses M1, M2 concentrated at the support vertex x0.  The scalar reductions
follow the same pattern with a single (gamma, delta).

Each report carries per-hypothesis verdicts with witnesses.  Growth and
smoothness hypotheses are checked by sampling (a heuristic, not a proof);
membership/floor hypotheses are exact finite checks on the stored data.
Endpoints are plain 64-bit arithmetic; emitted reports carry 12 significant
digits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import BadParam, InconsistentDerivative, MissingEnvelope
from .functionals import ProblemSpec, ScalarProblem
from .graph import VertexFunction, WeightedGraph, integrate
from .nonlinearity import (
    NonlinearityModel,
    derivative_consistency,
    envelope_bound_gap,
    growth_bound_gap,
)

GRID_POINTS = 513
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class HypothesisCheck:
    name: str
    passed: bool
    witness: str


@dataclass(frozen=True)
class LocalMass:
    """Local norm masses of the one-vertex test states at x0; M2 is None for
    scalar problems."""

    M1: float
    M2: Optional[float] = None


@dataclass(frozen=True)
class IntervalReport:
    theorem: str
    kappa: tuple[float, ...]
    box: tuple[float, ...]
    lambda_lo: float
    lambda_hi: float
    hypotheses: tuple[HypothesisCheck, ...]
    valid: bool
    refinement_gap: float = 0.0
    notes: tuple[str, ...] = field(default_factory=tuple)

    def to_doc(self) -> dict:
        def num(x: float):
            if not math.isfinite(x):
                return None
            return float(f"{x:.12g}")

        return {
            "theorem": self.theorem,
            "kappa": [num(k) for k in self.kappa],
            "box": [num(b) for b in self.box],
            "lambda_lo": num(self.lambda_lo),
            "lambda_hi": num(self.lambda_hi),
            "hypotheses": [
                {"name": h.name, "pass": h.passed, "witness": h.witness}
                for h in self.hypotheses
            ],
            "valid": self.valid,
            "refinement_gap": num(self.refinement_gap),
            "notes": list(self.notes),
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "IntervalReport":
        def num(x) -> float:
            return math.inf if x is None else float(x)

        return cls(
            theorem=str(doc["theorem"]),
            kappa=tuple(float(k) for k in doc["kappa"]),
            box=tuple(float(b) for b in doc["box"]),
            lambda_lo=num(doc["lambda_lo"]),
            lambda_hi=num(doc["lambda_hi"]),
            hypotheses=tuple(
                HypothesisCheck(h["name"], bool(h["pass"]), h["witness"])
                for h in doc["hypotheses"]),
            valid=bool(doc["valid"]),
            refinement_gap=num(doc.get("refinement_gap", 0.0)),
            notes=tuple(doc.get("notes", ())),
        )


# ---------------------------------------------------------------------------
# constants kappa and local masses
# ---------------------------------------------------------------------------

def kappa_finite(prob: ProblemSpec) -> tuple[float, float]:
    """kappa_i = ((1/p) int h1 dmu)^(-1/p) and the q-analogue."""
    g = prob.graph
    k1 = (integrate(g, prob.h1) / prob.p) ** (-1.0 / prob.p)
    k2 = (integrate(g, prob.h2) / prob.q) ** (-1.0 / prob.q)
    return float(k1), float(k2)


def kappa_scalar_finite(prob: ScalarProblem) -> float:
    return float((integrate(prob.graph, prob.h) / prob.p) ** (-1.0 / prob.p))


def _mass_one(g: WeightedGraph, i0: int, expo: float, h_arr: np.ndarray) -> float:
    mu0 = g.mu[i0]
    total = (g.degrees()[i0] / (2.0 * mu0)) ** (expo / 2.0) * mu0 + h_arr[i0] * mu0
    for (a, b), w in zip(g.edge_index, g.edge_weight):
        if a == i0 or b == i0:
            j = b if a == i0 else a
            total += (w / (2.0 * g.mu[j])) ** (expo / 2.0) * g.mu[j]
    return float(total)


def local_mass(g: WeightedGraph, x0: str, p: float, q: Optional[float],
               h1: VertexFunction, h2: Optional[VertexFunction] = None) -> LocalMass:
    """The W-norm mass of a height-1 spike at x0:
    (deg(x0)/2mu(x0))^(p/2) mu(x0) + h1(x0) mu(x0)
    + sum over neighbors y of (w_{x0 y}/2mu(y))^(p/2) mu(y),
    and the q-analogue with h2 when a second component is present."""
    i0 = g.index(x0)
    m1 = _mass_one(g, i0, float(p), h1.values)
    if q is None:
        return LocalMass(M1=m1)
    if h2 is None:
        raise BadParam("h2 is required when q is given")
    return LocalMass(M1=m1, M2=_mass_one(g, i0, float(q), h2.values))


# ---------------------------------------------------------------------------
# box maxima
# ---------------------------------------------------------------------------

def _golden_max(fn, lo: float, hi: float, iters: int = 80) -> float:
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = fn(c), fn(d)
    for _ in range(iters):
        if fc < fd:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = fn(d)
        else:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = fn(c)
    return max(fn(0.5 * (a + b)), fc, fd)


def _grid_max_1d(fn, lo: float, hi: float, n: int) -> float:
    xs = np.linspace(lo, hi, n)
    vals = np.asarray(fn(xs), dtype=float)
    i = int(np.argmax(vals))
    h = (hi - lo) / (n - 1)
    a, b = max(lo, xs[i] - h), min(hi, xs[i] + h)
    refined = _golden_max(lambda x: float(fn(np.asarray(x))), a, b)
    return max(float(vals[i]), refined)


def _grid_max_2d(fn, s_max: float, t_max: float, n: int) -> float:
    s = np.linspace(-s_max, s_max, n)
    t = np.linspace(-t_max, t_max, n)
    vals = np.asarray(fn(s[:, None], t[None, :]), dtype=float)
    i, j = np.unravel_index(int(np.argmax(vals)), vals.shape)
    best = float(vals[i, j])
    bs, bt = float(s[i]), float(t[j])
    hs, ht = 2.0 * s_max / (n - 1), 2.0 * t_max / (n - 1)
    for _ in range(3):
        bs_lo, bs_hi = max(-s_max, bs - hs), min(s_max, bs + hs)
        bs = _argmax_1d(lambda x: float(fn(np.asarray(x), np.asarray(bt))), bs_lo, bs_hi)
        bt_lo, bt_hi = max(-t_max, bt - ht), min(t_max, bt + ht)
        bt = _argmax_1d(lambda x: float(fn(np.asarray(bs), np.asarray(x))), bt_lo, bt_hi)
    return max(best, float(fn(np.asarray(bs), np.asarray(bt))))


def _argmax_1d(fn, lo: float, hi: float, iters: int = 80) -> float:
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = fn(c), fn(d)
    for _ in range(iters):
        if fc < fd:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = fn(d)
        else:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = fn(c)
    return 0.5 * (a + b)


def box_max_F(model: NonlinearityModel, s_max: float, t_max: float,
              strategy: str = "grid") -> float:
    """Maximum of F over the closed box |s| <= s_max, |t| <= t_max.

    The default strategy is a 513-point-per-axis grid followed by
    golden-section refinement around the best cell; "corner" evaluates only
    the corners and axis extremes, exact for models that are monotone in
    |s| and |t|.
    """
    if s_max <= 0.0 or t_max < 0.0:
        raise BadParam(f"box bounds must be positive, got ({s_max}, {t_max})")
    if strategy == "corner":
        pts_s = np.array([-s_max, 0.0, s_max])
        pts_t = np.array([-t_max, 0.0, t_max]) if t_max > 0 else np.array([0.0])
        return float(np.max(model.F(pts_s[:, None], pts_t[None, :])))
    if strategy != "grid":
        raise BadParam(f"unknown box_max strategy {strategy!r}")
    if t_max == 0.0:
        return _grid_max_1d(lambda s: model.F(s, np.zeros_like(s)),
                            -s_max, s_max, GRID_POINTS)
    return _grid_max_2d(model.F, s_max, t_max, GRID_POINTS)


def envelope_max(model: NonlinearityModel, rho_max: float,
                 strategy: str = "grid") -> float:
    """Maximum of the radial envelope a over [0, rho_max]."""
    if model.envelope is None:
        raise MissingEnvelope("model has no (a, b) envelope")
    if rho_max <= 0.0:
        raise BadParam(f"radius must be positive, got {rho_max}")
    if strategy == "corner":
        return float(np.max(model.envelope.a(np.array([0.0, rho_max]))))
    if strategy != "grid":
        raise BadParam(f"unknown box_max strategy {strategy!r}")
    return _grid_max_1d(model.envelope.a, 0.0, rho_max, GRID_POINTS)


def _refinement_gap_box(model, s_max, t_max) -> float:
    if t_max == 0.0:
        v1 = _grid_max_1d(lambda s: model.F(s, np.zeros_like(s)), -s_max, s_max, GRID_POINTS)
        v2 = _grid_max_1d(lambda s: model.F(s, np.zeros_like(s)), -s_max, s_max,
                          2 * GRID_POINTS - 1)
    else:
        v1 = _grid_max_2d(model.F, s_max, t_max, GRID_POINTS)
        v2 = _grid_max_2d(model.F, s_max, t_max, 2 * GRID_POINTS - 1)
    return abs(v2 - v1) / max(1.0, abs(v2))


def _refinement_gap_envelope(model, rho_max) -> float:
    v1 = _grid_max_1d(model.envelope.a, 0.0, rho_max, GRID_POINTS)
    v2 = _grid_max_1d(model.envelope.a, 0.0, rho_max, 2 * GRID_POINTS - 1)
    return abs(v2 - v1) / max(1.0, abs(v2))


# ---------------------------------------------------------------------------
# shared hypothesis helpers
# ---------------------------------------------------------------------------

def _check_smoothness(model: NonlinearityModel) -> HypothesisCheck:
    try:
        rep = derivative_consistency(model, samples=400, step=1e-5)
        return HypothesisCheck(
            "F0", True,
            f"sampled partials consistent (max gap {rep.max_discrepancy:.3e})")
    except InconsistentDerivative as exc:
        return HypothesisCheck("F0", False, str(exc))


def _check_zero_level(model: NonlinearityModel, g: WeightedGraph) -> HypothesisCheck:
    zero = np.zeros(g.n_vertices)
    val = float(np.dot(g.mu, model.F_on(g, zero, zero)))
    ok = abs(val) <= 1e-12 * (1.0 + g.total_measure())
    return HypothesisCheck("F1", ok, f"integral of F(x,0,0) = {val:.3e}")


def _check_growth(model: NonlinearityModel, p: float, q: float) -> HypothesisCheck:
    if model.growth is None:
        return HypothesisCheck("F2", False, "no growth data declared")
    gap = growth_bound_gap(model)
    tol = 1e-9 * (1.0 + abs(model.growth.g))
    ok = gap <= tol
    witness = (f"sampled bound gap {gap:.3e} with alpha={model.growth.alpha:g}, "
               f"beta={model.growth.beta:g}")
    if model.growth.alpha >= p or model.growth.beta >= q:
        witness += (f"; warning: exponents not strictly below ({p:g}, {q:g}),"
                    " coercivity is not implied")
    return HypothesisCheck("F2", ok, witness)


def _finish(theorem, kappa, box, lo, hi, checks, refinement_gap, notes=()):
    valid = all(c.passed for c in checks) and math.isfinite(lo) and lo < hi
    return IntervalReport(theorem=theorem, kappa=tuple(kappa), box=tuple(box),
                          lambda_lo=lo, lambda_hi=hi, hypotheses=tuple(checks),
                          valid=valid, refinement_gap=refinement_gap,
                          notes=tuple(notes))


def _endpoints_to_lambdas(big_lo: float, big_hi: float) -> tuple[float, float]:
    """Convert the (L1, L2) pair into the open parameter interval bounds.

    L2 <= 0 degenerates the lower endpoint to +inf (empty interval); L1 <= 0
    means no upper constraint.
    """
    lo = math.inf if big_hi <= 0.0 else 1.0 / big_hi
    hi = math.inf if big_lo <= 0.0 else 1.0 / big_lo
    return lo, hi


# ---------------------------------------------------------------------------
# the four interval computations
# ---------------------------------------------------------------------------

def interval_finite(prob: ProblemSpec, gamma1: float, gamma2: float,
                    delta1: float, delta2: float,
                    strategy: str = "grid") -> IntervalReport:
    """Admissible interval for the coupled system on a finite graph.

    Returns the report even when hypotheses fail (valid=False); it never
    raises for a hypothesis failure.
    """
    for name, val in (("gamma1", gamma1), ("gamma2", gamma2),
                      ("delta1", delta1), ("delta2", delta2)):
        if val <= 0.0:
            raise BadParam(f"{name} must be positive, got {val}")
    g = prob.graph
    p, q = prob.p, prob.q
    model = prob.nonlinearity
    vol = g.total_measure()
    mu_min = float(np.min(g.mu))
    h1_min = float(np.min(prob.h1.values))
    h2_min = float(np.min(prob.h2.values))

    gp = gamma1 ** p + gamma2 ** q
    s_max = (p * gp) ** (1.0 / p) / (h1_min * mu_min) ** (1.0 / p)
    t_max = (q * gp) ** (1.0 / q) / (h2_min * mu_min) ** (1.0 / q)

    max_f = box_max_F(model, s_max, t_max, strategy=strategy)
    gap = _refinement_gap_box(model, s_max, t_max) if strategy == "grid" else 0.0
    inf_f = float(model.F(np.asarray(delta1), np.asarray(delta2)))
    if model.support is not None and g.n_vertices > 1:
        max_f = max(max_f, 0.0)
        inf_f = min(inf_f, 0.0)

    int_h1, int_h2 = integrate(g, prob.h1), integrate(g, prob.h2)
    phi_const = delta1 ** p / p * int_h1 + delta2 ** q / q * int_h2
    big_l1 = max_f * vol / gp
    big_l2 = inf_f * vol / phi_const
    lo, hi = _endpoints_to_lambdas(big_l1, big_l2)

    k1, k2 = kappa_finite(prob)
    checks = [
        HypothesisCheck("H", h1_min > 0.0 and h2_min > 0.0,
                        f"min h1 = {h1_min:g}, min h2 = {h2_min:g}"),
        _check_smoothness(model),
        _check_zero_level(model, g),
        _check_growth(model, p, q),
        HypothesisCheck(
            "F3",
            delta1 > gamma1 * k1 and delta2 > gamma2 * k2
            and big_l2 > 0.0 and big_l1 < big_l2,
            f"delta1/(gamma1 kappa1) = {delta1 / (gamma1 * k1):.6g}, "
            f"delta2/(gamma2 kappa2) = {delta2 / (gamma2 * k2):.6g}, "
            f"L1 = {big_l1:.6g}, L2 = {big_l2:.6g}"),
        HypothesisCheck("r_lt_phi", phi_const > gp,
                        f"Phi at the constant pair = {phi_const:.6g} vs r = {gp:.6g}"),
    ]
    return _finish("T1.1", (k1, k2), (s_max, t_max), lo, hi, checks, gap)


def interval_locally_finite(prob: ProblemSpec, x0: str, gamma1: float, gamma2: float,
                            delta1: float, delta2: float, h0: float, mu0: float,
                            strategy: str = "grid") -> IntervalReport:
    """Admissible interval for the order-1 coupled system on a locally finite
    graph, evaluated on its Dirichlet truncation.

    The endpoint quantities (local masses, envelope integral) are exactly
    local to x0, so any truncation containing x0 and its neighbors gives the
    same numbers.  Floors h0, mu0 are hypotheses about the full graph and are
    taken as inputs.
    """
    if prob.m1 != 1 or prob.m2 != 1:
        raise BadParam("locally finite mode requires orders m1 = m2 = 1")
    for name, val in (("gamma1", gamma1), ("gamma2", gamma2), ("delta1", delta1),
                      ("delta2", delta2), ("h0", h0), ("mu0", mu0)):
        if val <= 0.0:
            raise BadParam(f"{name} must be positive, got {val}")
    g = prob.graph
    model = prob.nonlinearity
    if model.envelope is None:
        raise MissingEnvelope("locally finite intervals need envelope data (a, b)")
    i0 = g.index(x0)
    p, q = prob.p, prob.q

    gp = gamma1 ** p + gamma2 ** q
    rho = ((p * gp) ** (1.0 / p) / (h0 * mu0) ** (1.0 / p)
           + (q * gp) ** (1.0 / q) / (h0 * mu0) ** (1.0 / q))
    max_a = envelope_max(model, rho, strategy=strategy)
    gap = _refinement_gap_envelope(model, rho) if strategy == "grid" else 0.0
    int_b = float(g.mu[i0])  # b is the indicator of x0

    masses = local_mass(g, x0, p, q, prob.h1, prob.h2)
    k1 = (masses.M1 / p) ** (-1.0 / p)
    k2 = (masses.M2 / q) ** (-1.0 / q)
    f_spike = float(model.eval_F(x0, delta1, delta2))
    phi_spike = delta1 ** p * masses.M1 / p + delta2 ** q * masses.M2 / q
    big_t1 = max_a * int_b / gp
    big_t2 = f_spike / phi_spike
    lo, hi = _endpoints_to_lambdas(big_t1, big_t2)

    env_gap = envelope_bound_gap(model)
    zero_spike = float(model.eval_F(x0, 0.0, 0.0))
    checks = [
        HypothesisCheck("M", bool(np.min(g.mu) >= mu0),
                        f"min mu = {float(np.min(g.mu)):g} vs floor {mu0:g}"),
        HypothesisCheck("H1",
                        bool(min(np.min(prob.h1.values), np.min(prob.h2.values)) >= h0),
                        f"min h = {min(float(np.min(prob.h1.values)), float(np.min(prob.h2.values))):g} "
                        f"vs floor {h0:g}"),
        HypothesisCheck(
            "F0", _check_smoothness(model).passed and env_gap <= 1e-9,
            f"sampled |F| <= a b gap {env_gap:.3e} (bound on the partials not checked; "
            "only the F bound enters the endpoint)"),
        HypothesisCheck(
            "F1", abs(zero_spike) == 0.0 and _check_zero_level(model, g).passed,
            f"F(x0, 0, 0) = {zero_spike:g}"),
        _check_growth(model, p, q),
        HypothesisCheck(
            "F3",
            delta1 > gamma1 * k1 and delta2 > gamma2 * k2
            and big_t2 > 0.0 and big_t1 < big_t2,
            f"delta1/(gamma1 kappa1) = {delta1 / (gamma1 * k1):.6g}, "
            f"delta2/(gamma2 kappa2) = {delta2 / (gamma2 * k2):.6g}, "
            f"T1 = {big_t1:.6g}, T2 = {big_t2:.6g}"),
        HypothesisCheck("r_lt_phi", phi_spike > gp,
                        f"Phi at the spike pair = {phi_spike:.6g} vs r = {gp:.6g}"),
    ]
    return _finish("T1.2", (k1, k2), (rho,), lo, hi, checks, gap)


def interval_scalar(prob: ScalarProblem, gamma: float, delta: float,
                    mode: str = "finite", x0: Optional[str] = None,
                    h0: Optional[float] = None, mu0: Optional[float] = None,
                    strategy: str = "grid") -> IntervalReport:
    """Scalar analogues of the two interval computations.

    mode="finite" mirrors the finite coupled case with a single (gamma,
    delta); mode="locally_finite" uses the envelope and the local mass M at
    x0, with kappa = (M/p)^(-1/p) (a potential-integral kappa would diverge
    on infinite graphs; see report notes).
    """
    if gamma <= 0.0 or delta <= 0.0:
        raise BadParam(f"gamma and delta must be positive, got ({gamma}, {delta})")
    g = prob.graph
    p = prob.p
    model = prob.nonlinearity
    gp = gamma ** p

    if mode == "finite":
        vol = g.total_measure()
        mu_min = float(np.min(g.mu))
        h_min = float(np.min(prob.h.values))
        s_max = (p * gp) ** (1.0 / p) / (h_min * mu_min) ** (1.0 / p)
        max_f = box_max_F(model, s_max, 0.0, strategy=strategy)
        gap = _refinement_gap_box(model, s_max, 0.0) if strategy == "grid" else 0.0
        inf_f = float(model.F(np.asarray(delta), np.asarray(0.0)))
        if model.support is not None and g.n_vertices > 1:
            max_f = max(max_f, 0.0)
            inf_f = min(inf_f, 0.0)
        int_h = integrate(g, prob.h)
        phi_const = delta ** p / p * int_h
        big_l1 = max_f * vol / gp
        big_l2 = inf_f * vol / phi_const
        lo, hi = _endpoints_to_lambdas(big_l1, big_l2)
        kappa = kappa_scalar_finite(prob)
        checks = [
            HypothesisCheck("H", h_min > 0.0, f"min h = {h_min:g}"),
            _check_smoothness(model),
            _check_zero_level(model, g),
            _check_growth(model, p, math.inf),
            HypothesisCheck(
                "F3", delta > gamma * kappa and big_l2 > 0.0 and big_l1 < big_l2,
                f"delta/(gamma kappa) = {delta / (gamma * kappa):.6g}, "
                f"L1 = {big_l1:.6g}, L2 = {big_l2:.6g}"),
            HypothesisCheck("r_lt_phi", phi_const > gp,
                            f"Phi at the constant = {phi_const:.6g} vs r = {gp:.6g}"),
        ]
        return _finish("T5.1", (kappa,), (s_max,), lo, hi, checks, gap)

    if mode != "locally_finite":
        raise BadParam(f"unknown mode {mode!r}")
    if prob.m != 1:
        raise BadParam("locally finite mode requires order m = 1")
    if x0 is None or h0 is None or mu0 is None:
        raise BadParam("locally finite mode needs x0 and the floors h0, mu0")
    if h0 <= 0.0 or mu0 <= 0.0:
        raise BadParam(f"floors must be positive, got h0={h0}, mu0={mu0}")
    if model.envelope is None:
        raise MissingEnvelope("locally finite intervals need envelope data (a, b)")
    i0 = g.index(x0)

    rho = (p * gp) ** (1.0 / p) / (h0 * mu0) ** (1.0 / p)
    max_a = envelope_max(model, rho, strategy=strategy)
    gap = _refinement_gap_envelope(model, rho) if strategy == "grid" else 0.0
    int_b = float(g.mu[i0])
    mass = local_mass(g, x0, p, None, prob.h).M1
    kappa = (mass / p) ** (-1.0 / p)
    f_spike = float(model.eval_F(x0, delta, 0.0))
    phi_spike = delta ** p * mass / p
    big_t1 = max_a * int_b / gp
    big_t2 = f_spike / phi_spike
    lo, hi = _endpoints_to_lambdas(big_t1, big_t2)

    env_gap = envelope_bound_gap(model)
    zero_spike = float(model.eval_F(x0, 0.0, 0.0))
    checks = [
        HypothesisCheck("M", bool(np.min(g.mu) >= mu0),
                        f"min mu = {float(np.min(g.mu)):g} vs floor {mu0:g}"),
        HypothesisCheck("H1", bool(np.min(prob.h.values) >= h0),
                        f"min h = {float(np.min(prob.h.values)):g} vs floor {h0:g}"),
        HypothesisCheck(
            "F0", _check_smoothness(model).passed and env_gap <= 1e-9,
            f"sampled |F| <= a b gap {env_gap:.3e} (bound on the partials not checked; "
            "only the F bound enters the endpoint)"),
        HypothesisCheck("F1", abs(zero_spike) == 0.0 and _check_zero_level(model, g).passed,
                        f"F(x0, 0) = {zero_spike:g}"),
        _check_growth(model, p, math.inf),
        HypothesisCheck(
            "F3", delta > gamma * kappa and big_t2 > 0.0 and big_t1 < big_t2,
            f"delta/(gamma kappa) = {delta / (gamma * kappa):.6g}, "
            f"T1 = {big_t1:.6g}, T2 = {big_t2:.6g}"),
        HypothesisCheck("r_lt_phi", phi_spike > gp,
                        f"Phi at the spike = {phi_spike:.6g} vs r = {gp:.6g}"),
    ]
    notes = (
        "kappa follows the local-mass convention (M/p)^(-1/p); a "
        "potential-integral kappa has no finite value on infinite graphs.",
        "the lower-endpoint numerator is F(x0, delta), matching the coupled case.",
    )
    return _finish("T5.2", (kappa,), (rho,), lo, hi, checks, gap, notes)
