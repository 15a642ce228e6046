"""Variational energies for the coupled two-component system and its scalar
reduction, together with their exact gradients.

The action for a parameter lam > 0 is

    action(u, v) = (1/p) ||u||^p_{W^{m1,p}} + (1/q) ||v||^q_{W^{m2,q}}
                   - lam * integral of F(x, u, v)

and its Gateaux derivative is represented pointwise: the returned gradient
pair (G_u, G_v) satisfies

    d/de action(u + e phi1, v + e phi2) |_{e=0}
        = integral of G_u phi1 + integral of G_v phi2

so a state is a critical point exactly when the pointwise system residual
vanishes; the solver's convergence metric and the equation defect are one
object.  The operator term follows the weak-form sign convention throughout
(L_{1,p} = -Delta_p), which keeps the two formulations of the system
consistent.

Both problem classes also expose a flat-vector view (pack/unpack, action,
euclidean gradient) used by the numerical solver; euclidean gradients carry
the vertex measure, pointwise residuals do not.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .calculus import m_grad_norm_arr, poly_lap_apply_arr, signed_power
from .errors import BadParam
from .graph import VertexFunction, WeightedGraph, check_domain
from .nonlinearity import NonlinearityModel
from .sobolev import SobolevSpec, _check_potential


def _w_power_arr(g: WeightedGraph, arr: np.ndarray, m: int, l: float,
                 h_arr: np.ndarray) -> float:
    gn = m_grad_norm_arr(g, arr, m)
    return float(np.dot(g.mu, gn ** l + h_arr * np.abs(arr) ** l))


def _phi_grad_arr(g: WeightedGraph, arr: np.ndarray, m: int, l: float,
                  h_arr: np.ndarray) -> np.ndarray:
    """Pointwise representative of the derivative of (1/l) ||.||^l_{W^{m,l}}."""
    return poly_lap_apply_arr(g, arr, m, l) + h_arr * signed_power(arr, l)


@dataclass
class StatePair:
    """A candidate state (u, v) of the coupled system."""

    u: VertexFunction
    v: VertexFunction


@dataclass(frozen=True)
class ProblemSpec:
    """The coupled system on a finite graph: orders (m1, m2), exponents
    (p, q) > 1, strictly positive potentials (h1, h2), and a nonlinearity.
    The parameter lam is per-call, not stored."""

    graph: WeightedGraph
    m1: int
    m2: int
    p: float
    q: float
    h1: VertexFunction
    h2: VertexFunction
    nonlinearity: NonlinearityModel

    def __post_init__(self):
        if int(self.m1) < 1 or int(self.m2) < 1:
            raise BadParam(f"orders must be >= 1, got ({self.m1}, {self.m2})")
        if float(self.p) <= 1.0 or float(self.q) <= 1.0:
            raise BadParam(f"exponents must exceed 1, got ({self.p}, {self.q})")
        check_domain(self.graph, self.h1, self.h2)
        _check_potential(self.h1.values)
        _check_potential(self.h2.values)

    # -- spec views ----------------------------------------------------------

    def spec_u(self) -> SobolevSpec:
        return SobolevSpec(self.m1, self.p, self.h1)

    def spec_v(self) -> SobolevSpec:
        return SobolevSpec(self.m2, self.q, self.h2)

    def check_state(self, w: StatePair) -> None:
        check_domain(self.graph, w.u, w.v)

    # -- flat-vector view (solver interface) ----------------------------------

    @property
    def n_dofs(self) -> int:
        return 2 * self.graph.n_vertices

    def pack_state(self, w: StatePair) -> np.ndarray:
        self.check_state(w)
        return np.concatenate([w.u.values, w.v.values])

    def unpack_state(self, z: np.ndarray) -> StatePair:
        n = self.graph.n_vertices
        return StatePair(VertexFunction(self.graph, z[:n].copy()),
                         VertexFunction(self.graph, z[n:].copy()))

    def _split(self, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        n = self.graph.n_vertices
        return z[:n], z[n:]

    def action_vec(self, lam: float, z: np.ndarray) -> float:
        g = self.graph
        u, v = self._split(z)
        val = (_w_power_arr(g, u, self.m1, self.p, self.h1.values) / self.p
               + _w_power_arr(g, v, self.m2, self.q, self.h2.values) / self.q)
        if lam != 0.0:
            val -= lam * float(np.dot(g.mu, self.nonlinearity.F_on(g, u, v)))
        return val

    def residual_vec(self, lam: float, z: np.ndarray) -> np.ndarray:
        """Pointwise defect of both equations, concatenated."""
        g = self.graph
        u, v = self._split(z)
        gu = _phi_grad_arr(g, u, self.m1, self.p, self.h1.values)
        gv = _phi_grad_arr(g, v, self.m2, self.q, self.h2.values)
        if lam != 0.0:
            gu = gu - lam * self.nonlinearity.Fs_on(g, u, v)
            gv = gv - lam * self.nonlinearity.Ft_on(g, u, v)
        return np.concatenate([gu, gv])

    def gradient_vec(self, lam: float, z: np.ndarray) -> np.ndarray:
        """Euclidean gradient of action_vec: the residual weighted by mu."""
        mu2 = np.concatenate([self.graph.mu, self.graph.mu])
        return mu2 * self.residual_vec(lam, z)

    def wnorm_vec(self, z: np.ndarray) -> float:
        g = self.graph
        u, v = self._split(z)
        return (_w_power_arr(g, u, self.m1, self.p, self.h1.values) ** (1.0 / self.p)
                + _w_power_arr(g, v, self.m2, self.q, self.h2.values) ** (1.0 / self.q))

    @property
    def start_scale(self) -> float:
        m = self.nonlinearity
        return max(m.s_scale, m.t_scale, 1.0)

    @property
    def solver_exponents(self) -> tuple[float, ...]:
        return (self.p, self.q)


@dataclass(frozen=True)
class ScalarProblem:
    """The single-unknown reduction: one order m, exponent p, potential h,
    and a nonlinearity whose t-slot is ignored."""

    graph: WeightedGraph
    m: int
    p: float
    h: VertexFunction
    nonlinearity: NonlinearityModel

    def __post_init__(self):
        if int(self.m) < 1:
            raise BadParam(f"order must be >= 1, got {self.m}")
        if float(self.p) <= 1.0:
            raise BadParam(f"exponent must exceed 1, got {self.p}")
        check_domain(self.graph, self.h)
        _check_potential(self.h.values)

    def spec_u(self) -> SobolevSpec:
        return SobolevSpec(self.m, self.p, self.h)

    def check_state(self, u: VertexFunction) -> None:
        check_domain(self.graph, u)

    @property
    def n_dofs(self) -> int:
        return self.graph.n_vertices

    def pack_state(self, u: VertexFunction) -> np.ndarray:
        self.check_state(u)
        return u.values.copy()

    def unpack_state(self, z: np.ndarray) -> VertexFunction:
        return VertexFunction(self.graph, z.copy())

    def action_vec(self, lam: float, z: np.ndarray) -> float:
        g = self.graph
        val = _w_power_arr(g, z, self.m, self.p, self.h.values) / self.p
        if lam != 0.0:
            zero = np.zeros_like(z)
            val -= lam * float(np.dot(g.mu, self.nonlinearity.F_on(g, z, zero)))
        return val

    def residual_vec(self, lam: float, z: np.ndarray) -> np.ndarray:
        g = self.graph
        out = _phi_grad_arr(g, z, self.m, self.p, self.h.values)
        if lam != 0.0:
            out = out - lam * self.nonlinearity.Fs_on(g, z, np.zeros_like(z))
        return out

    def gradient_vec(self, lam: float, z: np.ndarray) -> np.ndarray:
        return self.graph.mu * self.residual_vec(lam, z)

    def wnorm_vec(self, z: np.ndarray) -> float:
        return _w_power_arr(self.graph, z, self.m, self.p, self.h.values) ** (1.0 / self.p)

    @property
    def start_scale(self) -> float:
        return max(self.nonlinearity.s_scale, 1.0)

    @property
    def solver_exponents(self) -> tuple[float, ...]:
        return (self.p,)


# ---------------------------------------------------------------------------
# public energy / gradient operations on the coupled system
# ---------------------------------------------------------------------------

def _check_lambda(lam: float) -> float:
    lam = float(lam)
    if lam < 0.0:
        raise BadParam(f"the parameter must be nonnegative, got {lam}")
    return lam


def phi_energy(prob: ProblemSpec, w: StatePair) -> float:
    """(1/p) ||u||^p + (1/q) ||v||^q; zero exactly at the zero state."""
    prob.check_state(w)
    g = prob.graph
    return (_w_power_arr(g, w.u.values, prob.m1, prob.p, prob.h1.values) / prob.p
            + _w_power_arr(g, w.v.values, prob.m2, prob.q, prob.h2.values) / prob.q)


def psi_energy(prob: ProblemSpec, w: StatePair) -> float:
    """Integral of F(x, u(x), v(x)) against the vertex measure."""
    prob.check_state(w)
    g = prob.graph
    return float(np.dot(g.mu, prob.nonlinearity.F_on(g, w.u.values, w.v.values)))


def action(prob: ProblemSpec, lam: float, w: StatePair) -> float:
    """phi_energy - lam * psi_energy (lam = 0 is allowed for testing)."""
    lam = _check_lambda(lam)
    prob.check_state(w)
    return prob.action_vec(lam, prob.pack_state(w))


def action_gradient(prob: ProblemSpec, lam: float, w: StatePair) -> StatePair:
    """Pointwise gradient pair (G_u, G_v) of the action at w.

    G_u = L_{m1,p} u + h1 |u|^{p-2} u - lam F_s(x, u, v), and symmetrically
    for G_v; pairing G against a direction with `integrate` reproduces the
    directional derivative of `action`.
    """
    lam = _check_lambda(lam)
    prob.check_state(w)
    res = prob.residual_vec(lam, prob.pack_state(w))
    n = prob.graph.n_vertices
    return StatePair(VertexFunction(prob.graph, res[:n].copy()),
                     VertexFunction(prob.graph, res[n:].copy()))


def monotonicity_gap(prob: ProblemSpec, w1: StatePair, w2: StatePair) -> float:
    """Pairing of Phi'(w1) - Phi'(w2) against w1 - w2 (lam-independent).

    The uniform-monotonicity lower bounds hold for exponents p, q >= 2, so
    that is the accepted range.
    """
    if prob.p < 2.0 or prob.q < 2.0:
        raise BadParam(
            f"monotonicity gap is defined for p, q >= 2, got ({prob.p}, {prob.q})")
    prob.check_state(w1)
    prob.check_state(w2)
    z1, z2 = prob.pack_state(w1), prob.pack_state(w2)
    diff = prob.residual_vec(0.0, z1) - prob.residual_vec(0.0, z2)
    mu2 = np.concatenate([prob.graph.mu, prob.graph.mu])
    return float(np.dot(mu2 * diff, z1 - z2))


def monotonicity_modulus(p: float, q: float, t: float) -> float:
    """The modulus a(t) with gap >= a(||dw||) ||dw||: exponent max(p,q)-1 up
    to t = 1 and min(p,q)-1 beyond, scaled by min(c_p, c_q) / 2^(max(p,q)-1)
    with c_r = 2^(2-r)."""
    c = min(2.0 ** (2.0 - p), 2.0 ** (2.0 - q))
    hi, lo = max(p, q), min(p, q)
    expo = hi - 1.0 if t <= 1.0 else lo - 1.0
    return c / 2.0 ** (hi - 1.0) * t ** expo


def w_distance(prob: ProblemSpec, w1: StatePair, w2: StatePair) -> float:
    """Product-space distance ||u1-u2||_{W^{m1,p}} + ||v1-v2||_{W^{m2,q}}."""
    prob.check_state(w1)
    prob.check_state(w2)
    return prob.wnorm_vec(prob.pack_state(w1) - prob.pack_state(w2))
