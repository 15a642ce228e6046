"""Numerical critical-point finder for the graph systems.

Strategy: multistart gradient descent with Armijo backtracking drives each
random start into a basin; once the residual is small a damped Newton polish
(finite-difference Hessian, Levenberg damping) finishes to the target
tolerance.  Additional critical points, including saddle-type ones, come
from Newton iterations on the deflated residual

    R(z) = G(z) * prod_k (1 / ||z - z_k||^power + shift),

which removes already-found zeros z_k from the basin structure.  Distinct-
ness of solutions is always measured in the product Sobolev norm; the
deflation factor itself uses the plain euclidean distance, which keeps its
gradient trivial.

Reproducibility: start k draws its coordinates from a counter-based
generator keyed by (seed, k), so results do not depend on scheduling.
Multistart branches may run on a small thread pool capped by the
GRAPHVAR_THREADS environment variable; results are merged in start-index
order either way.

Exponents below 2 are rejected (the zero-order term |s|^(p-2) s is not
Lipschitz there); interval computations alone support the full range.
"""

from __future__ import annotations

import json
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .errors import BadParam, ConvergedToKnown, SingularExponent
from .functionals import ProblemSpec, ScalarProblem, StatePair
from .graph import VertexFunction
from .nonlinearity import derivative_consistency

Problem = Union[ProblemSpec, ScalarProblem]
State = Union[StatePair, VertexFunction]

NEWTON_SWITCH = 1e-3
ARMIJO_C = 1e-4
DIVERGE_ACTION = -1e12
DIVERGE_NORM = 1e8
FD_SCALE = 1e-6


@dataclass(frozen=True)
class SolverConfig:
    starts: int = 64
    max_iters: int = 10000
    grad_tol: float = 1e-8
    distinct_tol: float = 1e-4
    seed: int = 0
    deflation_power: float = 2.0
    deflation_shift: float = 1.0

    def __post_init__(self):
        if self.starts < 1:
            raise BadParam(f"starts must be >= 1, got {self.starts}")
        if self.grad_tol <= 0.0 or self.distinct_tol <= 0.0:
            raise BadParam("tolerances must be positive")
        if self.max_iters < 1:
            raise BadParam(f"max_iters must be >= 1, got {self.max_iters}")


@dataclass
class CriticalPoint:
    state: State
    action_value: float
    residual_sup: float
    kind: str  # minimizer | saddle | unclassified
    iterations: int
    converged: bool


@dataclass
class SolutionSet:
    lam: float
    seed: int
    points: list[CriticalPoint]
    distances: np.ndarray
    nontrivial: list[bool]
    zero_excluded: bool

    @property
    def found_three(self) -> bool:
        return len(self.points) >= 3


def _check_problem(prob: Problem) -> None:
    for e in prob.solver_exponents:
        if e < 2.0:
            raise SingularExponent(
                f"the solver requires exponents >= 2, got {e} "
                "(interval computations alone support the full range)")
    isolated = int(np.sum(prob.graph.degrees() == 0.0))
    if isolated:
        warnings.warn(f"{isolated} isolated vertex(es); gradients vanish there, "
                      "proceeding", UserWarning, stacklevel=3)
    if prob.nonlinearity.requires_derivative_check:
        derivative_consistency(prob.nonlinearity)  # mandatory for tabulated F


def _check_lam(lam: float) -> float:
    lam = float(lam)
    if lam <= 0.0:
        raise BadParam(f"the parameter must be positive, got {lam}")
    return lam


def _thread_cap() -> int:
    try:
        return max(1, int(os.environ.get("GRAPHVAR_THREADS", "1")))
    except ValueError:
        return 1


def _mu_stack(prob: Problem) -> np.ndarray:
    mu = prob.graph.mu
    reps = prob.n_dofs // len(mu)
    return np.concatenate([mu] * reps)


def _sup(res: np.ndarray) -> float:
    val = float(np.max(np.abs(res)))
    return val if np.isfinite(val) else np.inf


def _fd_jacobian(fn, z: np.ndarray, h: float) -> np.ndarray:
    """Central-difference Jacobian of a vector map, one column per coordinate."""
    n = len(z)
    cols = np.empty((n, n))
    for j in range(n):
        zp, zm = z.copy(), z.copy()
        zp[j] += h
        zm[j] -= h
        cols[:, j] = (fn(zp) - fn(zm)) / (2.0 * h)
    return cols


def _hessian(prob: Problem, lam: float, z: np.ndarray) -> np.ndarray:
    h = FD_SCALE * (1.0 + float(np.linalg.norm(z)))
    jac = _fd_jacobian(lambda y: prob.gradient_vec(lam, y), z, h)
    return 0.5 * (jac + jac.T)


def _classify(prob: Problem, lam: float, z: np.ndarray,
              hess: Optional[np.ndarray] = None) -> str:
    if hess is None:
        hess = _hessian(prob, lam, z)
    eig_min = float(np.min(np.linalg.eigvalsh(hess)))
    return "saddle" if eig_min < -1e-6 else "minimizer"


@dataclass
class _RawPoint:
    z: np.ndarray
    action: float
    residual_sup: float
    iterations: int
    converged: bool
    hess: Optional[np.ndarray] = None


def _finalize(prob: Problem, lam: float, raw: _RawPoint) -> CriticalPoint:
    kind = "unclassified"
    if raw.converged:
        kind = _classify(prob, lam, raw.z, raw.hess)
    return CriticalPoint(
        state=prob.unpack_state(raw.z),
        action_value=raw.action,
        residual_sup=raw.residual_sup,
        kind=kind,
        iterations=raw.iterations,
        converged=raw.converged,
    )


def _diverged(prob: Problem, lam: float, z: np.ndarray, iters: int) -> _RawPoint:
    with np.errstate(all="ignore"):
        act = prob.action_vec(lam, z)
        rsup = _sup(prob.residual_vec(lam, z))
    act = act if np.isfinite(act) else -np.inf
    return _RawPoint(z=z, action=act, residual_sup=rsup, iterations=iters, converged=False)


DESCENT_BUDGET = 1500  # ill-conditioned basins are finished by the Newton polish


def _minimize_z(prob: Problem, lam: float, z0: np.ndarray, cfg: SolverConfig) -> _RawPoint:
    z = np.asarray(z0, dtype=float).copy()
    mu = _mu_stack(prob)
    iters = 0
    t_warm = 1.0
    prev_z = None
    prev_grad = None
    budget = min(cfg.max_iters, DESCENT_BUDGET)
    with np.errstate(over="ignore", invalid="ignore"):
        a_val = prob.action_vec(lam, z)
        # phase 1: gradient descent, Armijo backtracking (halving), with a
        # Barzilai-Borwein guess seeding each line search
        while iters < budget:
            res = prob.residual_vec(lam, z)
            rsup = _sup(res)
            if rsup < NEWTON_SWITCH:
                break
            grad = mu * res
            gg = float(np.dot(grad, grad))
            t = min(2.0 * t_warm, 1e6)
            if prev_grad is not None:
                dg = grad - prev_grad
                dgg = float(np.dot(dg, dg))
                if dgg > 0.0:
                    bb = float(np.dot(z - prev_z, dg)) / dgg
                    if np.isfinite(bb) and bb > 0.0:
                        t = min(bb, 1e6)
            accepted = False
            while t > 1e-17:
                cand = z - t * grad
                c_val = prob.action_vec(lam, cand)
                if np.isfinite(c_val) and c_val <= a_val - ARMIJO_C * t * gg:
                    accepted = True
                    break
                t *= 0.5
            if not accepted:
                break  # stalled line search; give Newton a chance
            prev_z, prev_grad = z, grad
            z, a_val, t_warm = cand, c_val, t
            iters += 1
            if a_val < DIVERGE_ACTION or float(np.max(np.abs(z))) > DIVERGE_NORM:
                return _diverged(prob, lam, z, iters)
        return _newton_polish(prob, lam, z, cfg, iters)


def _newton_polish(prob: Problem, lam: float, z: np.ndarray,
                   cfg: SolverConfig, iters: int) -> _RawPoint:
    """Levenberg-damped Newton on the gradient, polishing to the tolerance.

    Once below the acceptance tolerance it keeps stepping only while each
    step at least halves the residual, so quadratic basins finish near
    machine precision without spinning at a noise floor.
    """
    nu = 1e-6
    hess = None
    target_soft = 0.3 * cfg.grad_tol
    target_hard = max(1e-4 * cfg.grad_tol, 1e-15)
    stalls = 0
    fast = True
    with np.errstate(over="ignore", invalid="ignore"):
        res = prob.residual_vec(lam, z)
        rsup = _sup(res)
        while rsup > target_hard and iters < cfg.max_iters and stalls < 3:
            if rsup <= target_soft and not fast:
                break
            hess = _hessian(prob, lam, z)
            grad = _mu_stack(prob) * res
            moved = False
            for _ in range(25):
                try:
                    step = np.linalg.solve(hess + nu * np.eye(len(z)), -grad)
                except np.linalg.LinAlgError:
                    nu = max(nu, 1e-12) * 10.0
                    continue
                cand = z + step
                cres = prob.residual_vec(lam, cand)
                crsup = _sup(cres)
                if np.isfinite(crsup) and crsup < rsup:
                    fast = crsup < 0.5 * rsup
                    z, res, rsup = cand, cres, crsup
                    nu = max(nu / 4.0, 1e-14)
                    moved = True
                    break
                nu = max(nu, 1e-12) * 4.0
            stalls = 0 if moved else stalls + 1
            iters += 1
        act = prob.action_vec(lam, z)
    return _RawPoint(z=z, action=float(act), residual_sup=rsup, iterations=iters,
                     converged=rsup <= cfg.grad_tol, hess=hess)


def minimize(prob: Problem, lam: float, start: State, cfg: SolverConfig) -> CriticalPoint:
    """Descend the action from `start`; returns the polished point.

    A point is accepted (``converged=True``) when the pointwise residual
    drops to grad_tol; on budget exhaustion the best iterate is returned
    tagged ``converged=False``.
    """
    lam = _check_lam(lam)
    _check_problem(prob)
    raw = _minimize_z(prob, lam, prob.pack_state(start), cfg)
    return _finalize(prob, lam, raw)


def residual(prob: Problem, lam: float, state: State) -> float:
    """Sup-norm of the pointwise defect of the system equations at `state`."""
    lam = _check_lam(lam)
    return _sup(prob.residual_vec(lam, prob.pack_state(state)))


# ---------------------------------------------------------------------------
# deflation
# ---------------------------------------------------------------------------

def _deflation_factor(z: np.ndarray, knowns: Sequence[np.ndarray],
                      power: float, shift: float) -> tuple[float, np.ndarray]:
    """Value and euclidean gradient of the deflation multiplier."""
    m = 1.0
    grad = np.zeros_like(z)
    for zk in knowns:
        d = z - zk
        dist = float(np.linalg.norm(d))
        dist = max(dist, 1e-300)
        rho = dist ** (-power) + shift
        m *= rho
        grad += (-power * dist ** (-power - 2.0) / rho) * d
    return m, m * grad


def _deflated_newton(prob: Problem, lam: float, knowns: Sequence[np.ndarray],
                     z0: np.ndarray, cfg: SolverConfig) -> _RawPoint:
    z = np.asarray(z0, dtype=float).copy()
    nu = 1e-6
    cap = min(cfg.max_iters, 200)
    h_base = FD_SCALE
    target_soft = 0.3 * cfg.grad_tol
    target_hard = max(1e-4 * cfg.grad_tol, 1e-15)
    fast = True
    with np.errstate(over="ignore", invalid="ignore"):
        res = prob.residual_vec(lam, z)
        m, dm = _deflation_factor(z, knowns, cfg.deflation_power, cfg.deflation_shift)
        defres = m * res
        iters = 0
        stalls = 0
        while _sup(res) > target_hard and iters < cap and stalls < 4:
            if _sup(res) <= target_soft and not fast:
                break
            h = h_base * (1.0 + float(np.linalg.norm(z)))
            jac_g = _fd_jacobian(lambda y: prob.residual_vec(lam, y), z, h)
            jac = m * jac_g + np.outer(res, dm)
            rhs = -defres
            moved = False
            for _ in range(25):
                try:
                    step = np.linalg.solve(jac + nu * np.eye(len(z)), rhs)
                except np.linalg.LinAlgError:
                    nu = max(nu, 1e-12) * 10.0
                    continue
                cand = z + step
                cres = prob.residual_vec(lam, cand)
                cm, cdm = _deflation_factor(cand, knowns, cfg.deflation_power,
                                            cfg.deflation_shift)
                cdef = cm * cres
                if (np.isfinite(cdef).all()
                        and np.linalg.norm(cdef) < np.linalg.norm(defres)):
                    fast = _sup(cres) < 0.5 * _sup(res)
                    z, res, m, dm, defres = cand, cres, cm, cdm, cdef
                    nu = max(nu / 4.0, 1e-14)
                    moved = True
                    break
                nu = max(nu, 1e-12) * 4.0
            stalls = 0 if moved else stalls + 1
            iters += 1
            if float(np.max(np.abs(z))) > DIVERGE_NORM:
                return _diverged(prob, lam, z, iters)
        rsup = _sup(res)
        act = prob.action_vec(lam, z)
    return _RawPoint(z=z, action=float(act), residual_sup=rsup, iterations=iters,
                     converged=rsup <= cfg.grad_tol)


def deflated_solve(prob: Problem, lam: float, known: Sequence[State],
                   start: State, cfg: SolverConfig) -> CriticalPoint:
    """Newton on the deflated residual; seeks a critical point of the
    original action away from every state in `known`.

    Raises ConvergedToKnown when the start or the limit lies within
    distinct_tol (product-norm) of a known point; on budget exhaustion the
    best iterate is returned tagged ``converged=False``.
    """
    lam = _check_lam(lam)
    _check_problem(prob)
    z0 = prob.pack_state(start)
    knowns = [prob.pack_state(k) for k in known]
    for zk in knowns:
        if prob.wnorm_vec(z0 - zk) <= cfg.distinct_tol:
            raise ConvergedToKnown("start lies within distinct_tol of a known point")
    raw = _deflated_newton(prob, lam, knowns, z0, cfg)
    if raw.converged:
        for zk in knowns:
            if prob.wnorm_vec(raw.z - zk) <= cfg.distinct_tol:
                raise ConvergedToKnown(
                    "deflated iteration converged to an already-known point")
    return _finalize(prob, lam, raw)


# ---------------------------------------------------------------------------
# multistart + deflation pipeline
# ---------------------------------------------------------------------------

def _start_vector(prob: Problem, cfg: SolverConfig, index: int, radius: float) -> np.ndarray:
    if index == 0:
        return np.zeros(prob.n_dofs)
    gen = np.random.Generator(np.random.Philox(key=cfg.seed, counter=[0, 0, 0, index]))
    return gen.uniform(-radius, radius, prob.n_dofs)


def _perturbation(cfg: SolverConfig, attempt: int, size: int, radius: float) -> np.ndarray:
    gen = np.random.Generator(np.random.Philox(key=cfg.seed, counter=[0, 0, 1, attempt]))
    return gen.uniform(-radius, radius, size)


def find_three(prob: Problem, lam: float, cfg: SolverConfig,
               start_radius: Optional[float] = None) -> SolutionSet:
    """Multistart minimization plus deflation until three distinct critical
    points are found (or the budget runs out; the set is returned either way
    and ``found_three`` reports the outcome).

    The caller is responsible for choosing lam inside a valid admissible
    interval; outside it, fewer points are expected and documented.
    """
    lam = _check_lam(lam)
    _check_problem(prob)
    radius = float(start_radius) if start_radius is not None else 1.0 + prob.start_scale

    indices = range(cfg.starts + 1)  # index 0 is the deterministic origin start

    def run(i: int) -> _RawPoint:
        return _minimize_z(prob, lam, _start_vector(prob, cfg, i, radius), cfg)

    workers = _thread_cap()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            raws = list(pool.map(run, indices))
    else:
        raws = [run(i) for i in indices]

    accepted: list[_RawPoint] = []
    for raw in raws:  # start-index order keeps the merge deterministic
        if not raw.converged:
            continue
        if all(prob.wnorm_vec(raw.z - kept.z) > cfg.distinct_tol for kept in accepted):
            accepted.append(raw)

    attempts = max(32, cfg.starts)
    attempt = 0
    while len(accepted) < 3 and attempt < attempts:
        if accepted:
            base = accepted[attempt % len(accepted)].z
        else:
            base = np.zeros(prob.n_dofs)
        scale = (0.25, 0.5, 1.0, 2.0)[attempt % 4]
        z0 = base + _perturbation(cfg, attempt, prob.n_dofs, scale * radius)
        attempt += 1
        knowns = [a.z for a in accepted]
        raw = _deflated_newton(prob, lam, knowns, z0, cfg)
        if not raw.converged:
            continue
        if all(prob.wnorm_vec(raw.z - zk) > cfg.distinct_tol for zk in knowns):
            accepted.append(raw)

    accepted.sort(key=lambda r: r.action)
    points = [_finalize(prob, lam, raw) for raw in accepted]
    k = len(points)
    dist = np.zeros((k, k))
    for i in range(k):
        for j in range(i + 1, k):
            d = prob.wnorm_vec(accepted[i].z - accepted[j].z)
            dist[i, j] = dist[j, i] = d
    nontrivial = [prob.wnorm_vec(raw.z) > cfg.distinct_tol for raw in accepted]
    return SolutionSet(
        lam=lam,
        seed=cfg.seed,
        points=points,
        distances=dist,
        nontrivial=nontrivial,
        zero_excluded=prob.nonlinearity.zero_is_excluded(),
    )


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def solution_set_to_doc(sset: SolutionSet) -> dict:
    points = []
    for pt, flag in zip(sset.points, sset.nontrivial):
        entry: dict = {}
        if isinstance(pt.state, StatePair):
            entry["u"] = pt.state.u.as_dict()
            entry["v"] = pt.state.v.as_dict()
        else:
            entry["u"] = pt.state.as_dict()
        entry.update({
            "action": pt.action_value,
            "residual": pt.residual_sup,
            "kind": pt.kind,
            "iterations": pt.iterations,
            "nontrivial": bool(flag),
        })
        points.append(entry)
    return {
        "lambda": sset.lam,
        "seed": sset.seed,
        "found_three": sset.found_three,
        "zero_excluded": sset.zero_excluded,
        "points": points,
        "distances": [[float(d) for d in row] for row in sset.distances],
    }


def solution_set_to_json(sset: SolutionSet) -> str:
    return json.dumps(solution_set_to_doc(sset), sort_keys=True, indent=2) + "\n"


def solution_set_from_doc(prob: Problem, doc: dict) -> SolutionSet:
    """Rebuild a solution set from its document, bound to `prob`'s graph."""
    g = prob.graph
    points = []
    nontrivial = []
    for entry in doc["points"]:
        u = VertexFunction.from_dict(g, entry["u"])
        if "v" in entry:
            state: State = StatePair(u, VertexFunction.from_dict(g, entry["v"]))
        else:
            state = u
        points.append(CriticalPoint(
            state=state,
            action_value=float(entry["action"]),
            residual_sup=float(entry["residual"]),
            kind=str(entry["kind"]),
            iterations=int(entry.get("iterations", 0)),
            converged=True,
        ))
        nontrivial.append(bool(entry.get("nontrivial", True)))
    return SolutionSet(
        lam=float(doc["lambda"]),
        seed=int(doc.get("seed", 0)),
        points=points,
        distances=np.asarray(doc["distances"], dtype=float).reshape(
            len(points), len(points)),
        nontrivial=nontrivial,
        zero_excluded=bool(doc.get("zero_excluded", False)),
    )
