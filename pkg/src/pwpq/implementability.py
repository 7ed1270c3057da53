"""Physical implementability of Wigner-positivity-preserving state conversions.

The quasi-operation ``N = N1 - N2`` is split into two CP, Wigner-positive parts
with ``tr_B J1 = c I`` and ``tr_B J2 = (c - 1) I``; the cost ``2c - 1`` is the
l1 weight of the decomposition and ``nu = log2(2c - 1)``.

The solver sits behind :func:`solve_conic`, which only needs a cvxpy problem
and returns status, objective and duality gap. Clarabel is the default.
"""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass

import cvxpy as cp
import numpy as np

from .channels import apply_choi, classify, map_from_wigner
from .phase_space import DimSpec, phase_point_operators
from .wigner import Choi, check_state, wigner_of_map, wigner_of_operator

__all__ = [
    "SdpModel",
    "SdpOutcome",
    "SolverError",
    "build_sdp",
    "solve_conic",
    "physical_implementability",
    "feasibility_threshold",
    "forced_zeros",
    "is_physical",
    "certificate_residuals",
    "sampling_bound",
    "sampling_cost",
]

GAP_TOL = 1e-7
ZERO_TOL = 1e-12
FACE_TOL = 1e-9
NU_TOL = 1e-6
C_MAX_DEFAULT = 1e6
# stronger static regularisation keeps the KKT solves stable on the
# rank-deficient optima (J2 = 0 whenever nu = 0)
CLARABEL_OPTS = {"static_regularization_constant": 1e-7}


class SolverError(RuntimeError):
    pass


@dataclass
class SdpModel:
    """The implementability program plus the small Wigner-only screening program.

    ``screen`` has a single variable ``w_screen`` (the Wigner matrix of the net
    map) and decides feasibility; ``problem`` carries the full two-term
    decomposition. ``eps`` is ``None`` for the exact program.
    """

    problem: cp.Problem
    j1: cp.Variable
    j2: cp.Variable
    c: cp.Variable
    c_max: cp.Parameter
    screen: cp.Problem
    w_screen: cp.Variable
    eps: cp.Parameter | None
    dims_in: DimSpec
    dims_out: DimSpec

    @property
    def exact(self) -> bool:
        return self.eps is None

    def set_eps(self, eps: float) -> None:
        if self.eps is None:
            if eps != 0:
                raise ValueError("exact model only admits eps = 0")
            return
        if not eps > 0:
            raise ValueError("parametrised model needs eps > 0")
        self.eps.value = float(eps)


@dataclass
class SdpOutcome:
    status: str  # "optimal" | "infeasible" | "solver_error"
    c_star: float = math.nan
    nu: float = math.nan
    choi_pair: tuple[Choi, Choi] | None = None
    duality_gap: float = math.nan
    solve_time_ms: float = 0.0
    message: str = ""

    @property
    def feasible(self) -> bool:
        return self.status == "optimal"

    @property
    def gamma(self) -> float:
        return 2 * self.c_star - 1

    @property
    def choi(self) -> Choi | None:
        if self.choi_pair is None:
            return None
        j1, j2 = self.choi_pair
        return Choi(j1.matrix - j2.matrix, j1.dims_in, j1.dims_out)


def _wigner_map_operator(dims_in: DimSpec, dims_out: DimSpec) -> np.ndarray:
    """Matrix ``K`` with ``vec_C(W_N) = K @ vec_F(J)``."""
    a_in = phase_point_operators(dims_in)
    a_out = phase_point_operators(dims_out)
    # kron(A_u^T, A_v)[(i,k),(j,l)] = A_u[j,i] A_v[k,l]; tr[M J] = vec_C(M) . vec_F(J)
    k = np.einsum("uji,vkl->vuikjl", a_in, a_out)
    n_rows = a_out.shape[0] * a_in.shape[0]
    return k.reshape(n_rows, -1) / dims_out.total


def forced_zeros(p: np.ndarray, q: np.ndarray) -> np.ndarray | None:
    """Entries every column-stochastic ``W`` with ``W p = q`` must leave at zero.

    Only non-trivial when ``||p||_1 == ||q||_1``: then ``W p+`` and ``W p-``
    need disjoint supports, so ``W[v, u] = 0`` whenever the signs of ``q_v``
    and ``p_u`` cannot be reconciled. Returns ``None`` otherwise.
    """
    if abs(np.abs(p).sum() - np.abs(q).sum()) > FACE_TOL:
        return None
    ps = np.where(np.abs(p) <= ZERO_TOL, 0, np.sign(p))
    qs = np.where(np.abs(q) <= ZERO_TOL, 0, np.sign(q))
    mask = (qs[:, None] * ps[None, :] < 0) | ((qs[:, None] == 0) & (ps[None, :] != 0))
    return mask if mask.any() else None


def _transform_constraints(wn, p, q, eps_param, dims_out: DimSpec) -> list:
    resid = wn @ p - q
    if eps_param is None:
        # the dropped row is implied: 1^T W_N p = sum(p) = 1 = sum(q)
        cons = [resid[:-1] == 0]
        mask = forced_zeros(p, q)
        if mask is not None:
            cons.append(wn[mask] == 0)
        return cons
    db = dims_out.total
    a_out = phase_point_operators(dims_out)
    # N(rho) - sigma = sum_v resid_v A_v
    err = cp.reshape(a_out.reshape(dims_out.n_points, -1).T @ resid, (db, db), order="C")
    err = (err + err.H) / 2
    eye = np.eye(db)
    return [eps_param * eye - err >> 0, eps_param * eye + err >> 0]


def build_sdp(rho: np.ndarray, sigma: np.ndarray, eps: float = 0.0, dims_rho=None, dims_sigma=None) -> SdpModel:
    """cvxpy model of the two-term implementability program.

    Minimise ``2c - 1`` over ``J1, J2 >= 0`` with ``tr_B J1 = c I``,
    ``tr_B J2 = (c - 1) I``, entrywise non-negative ``W_N1``, ``W_N2``,
    ``W_N`` for ``N = N1 - N2``, and ``-eps I <= N(rho) - sigma <= eps I``.

    ``eps == 0`` gives the exact program with an equality constraint; any
    positive ``eps`` gives a parametrised model whose tolerance can be changed
    with :meth:`SdpModel.set_eps` without rebuilding.
    """
    dims_in = check_state(rho, dims_rho)
    dims_out = check_state(sigma, dims_sigma)
    if eps < 0:
        raise ValueError("eps must be non-negative")
    n = dims_in.total * dims_out.total
    n_out, n_in = dims_out.n_points, dims_in.n_points
    p = wigner_of_operator(rho, dims_in)
    q = wigner_of_operator(sigma, dims_out)
    eps_param = None if eps == 0 else cp.Parameter(nonneg=True, value=float(eps), name="eps")

    j1 = cp.Variable((n, n), hermitian=True, name="J1")
    j2 = cp.Variable((n, n), hermitian=True, name="J2")
    c = cp.Variable(name="c")
    c_max = cp.Parameter(nonneg=True, value=C_MAX_DEFAULT, name="c_max")
    kmat = _wigner_map_operator(dims_in, dims_out)

    def wig(j):
        return cp.reshape(cp.real(kmat @ cp.vec(j, order="F")), (n_out, n_in), order="C")

    w1, w2 = wig(j1), wig(j2)
    wn = w1 - w2
    ones = np.ones(n_out)
    # Column sums of W_N are tr N(A_u), and the A_u^T span the input space,
    # so the partial-trace conditions are column-sum conditions. This avoids
    # the duplicated rows of a Hermitian matrix equality.
    cons = [
        j1 >> 0,
        j2 >> 0,
        ones @ w1 == c * np.ones(n_in),
        ones @ w2 == (c - 1) * np.ones(n_in),
        w1 >= 0,
        w2 >= 0,
        wn >= 0,
        c <= c_max,
    ]
    cons += _transform_constraints(wn, p, q, eps_param, dims_out)
    problem = cp.Problem(cp.Minimize(2 * c - 1), cons)

    w_screen = cp.Variable((n_out, n_in), nonneg=True, name="W")
    screen_cons = [ones @ w_screen == np.ones(n_in)]
    screen_cons += _transform_constraints(w_screen, p, q, eps_param, dims_out)
    screen = cp.Problem(cp.Minimize(0), screen_cons)
    return SdpModel(problem, j1, j2, c, c_max, screen, w_screen, eps_param, dims_in, dims_out)


def solve_conic(problem: cp.Problem, solver: str = "CLARABEL", solver_opts: dict | None = None) -> tuple[str, float]:
    """Solve ``problem`` in place and return ``(cvxpy status, duality gap)``.

    For Clarabel the gap is read from the raw primal/dual objectives; other
    solvers report ``nan`` for the gap.
    """
    if solver_opts is None:
        solver_opts = CLARABEL_OPTS if solver == "CLARABEL" else {}
    opts = dict(solver_opts)
    if solver != "CLARABEL":
        problem.solve(solver=solver, **opts)
        return problem.status, math.nan
    data, chain, inverse = problem.get_problem_data(solver)
    raw = chain.solver.solve_via_data(data, False, False, opts)
    with warnings.catch_warnings():
        # inaccurate solves are surfaced through the returned status
        warnings.simplefilter("ignore", UserWarning)
        problem.unpack_results(raw, chain, inverse)
    gap = abs(raw.obj_val - raw.obj_val_dual) if problem.status == cp.OPTIMAL else math.nan
    return problem.status, gap


def _depolarizing_shift(w_net: np.ndarray, dims_in: DimSpec, dims_out: DimSpec) -> float:
    """``c`` of the decomposition ``N1 = N + k D``, ``N2 = k D`` with ``D`` fully depolarizing."""
    j = map_from_wigner(w_net, dims_in, dims_out).matrix
    lam = np.linalg.eigvalsh((j + j.conj().T) / 2).min()
    return 1 + max(0.0, -lam) * dims_out.total


def _solve_model(model: SdpModel, solver: str, solver_opts: dict | None) -> SdpOutcome:
    t0 = time.perf_counter()

    def elapsed() -> float:
        return 1e3 * (time.perf_counter() - t0)

    try:
        status, _ = solve_conic(model.screen, solver, solver_opts)
        if status in (cp.INFEASIBLE, cp.INFEASIBLE_INACCURATE):
            return SdpOutcome("infeasible", solve_time_ms=elapsed(), message=status)
        if status not in (cp.OPTIMAL, cp.OPTIMAL_INACCURATE):
            return SdpOutcome("solver_error", solve_time_ms=elapsed(), message=f"screening returned {status}")
        # any feasible net map gives an explicit feasible c; the bound only
        # removes the unbounded direction c -> inf
        model.c_max.value = _depolarizing_shift(model.w_screen.value, model.dims_in, model.dims_out) + 1.0
        status, gap = solve_conic(model.problem, solver, solver_opts)
    except cp.error.SolverError as exc:
        return SdpOutcome("solver_error", solve_time_ms=elapsed(), message=str(exc))
    ms = elapsed()
    if status != cp.OPTIMAL:
        return SdpOutcome("solver_error", solve_time_ms=ms, message=f"solver returned {status}")
    c_star = float(model.c.value)
    pair = (
        Choi(model.j1.value, model.dims_in, model.dims_out),
        Choi(model.j2.value, model.dims_in, model.dims_out),
    )
    # 2c - 1 >= 1 holds exactly; guard rounding just below it
    nu = math.log2(max(2 * c_star - 1, 1e-300))
    out = SdpOutcome("optimal", c_star, nu, pair, gap, ms)
    if not math.isnan(gap) and gap > GAP_TOL:
        out.status = "solver_error"
        out.message = f"duality gap {gap:.2e} exceeds {GAP_TOL:.0e}"
    return out


def physical_implementability(
    rho: np.ndarray,
    sigma: np.ndarray,
    eps: float = 0.0,
    dims_rho=None,
    dims_sigma=None,
    solver: str = "CLARABEL",
    solver_opts: dict | None = None,
    model: SdpModel | None = None,
) -> SdpOutcome:
    """Minimal ``nu = log2(2c - 1)`` for converting ``rho`` into ``sigma`` within ``eps``.

    Feasibility is settled first on the Wigner matrix of the net map alone;
    only feasible instances go on to the full decomposition. Pass a prebuilt
    parametrised ``model`` to reuse it across positive ``eps`` values.
    """
    if model is None or (eps == 0) != model.exact:
        model = build_sdp(rho, sigma, eps, dims_rho, dims_sigma)
    model.set_eps(eps)
    return _solve_model(model, solver, solver_opts)


def feasibility_threshold(
    rho: np.ndarray,
    sigma: np.ndarray,
    lo: float,
    hi: float,
    tol: float = 1e-4,
    dims_rho=None,
    dims_sigma=None,
) -> float:
    """Bisect for the smallest feasible ``eps`` in ``[lo, hi]`` to within ``tol``.

    ``lo`` must be infeasible and ``hi`` feasible; returns the upper end of the
    final bracket. Only the screening program is solved.
    """
    model = build_sdp(rho, sigma, max(hi, tol), dims_rho, dims_sigma)

    def feasible(eps: float) -> bool:
        model.set_eps(eps)
        status, _ = solve_conic(model.screen)
        if status in (cp.OPTIMAL, cp.OPTIMAL_INACCURATE):
            return True
        if status in (cp.INFEASIBLE, cp.INFEASIBLE_INACCURATE):
            return False
        raise SolverError(f"screening returned {status}")

    while hi - lo > tol:
        mid = (lo + hi) / 2
        if mid > 0 and feasible(mid):
            hi = mid
        else:
            lo = mid
    return hi


def certificate_residuals(outcome: SdpOutcome, rho: np.ndarray, sigma: np.ndarray, eps: float) -> dict[str, float]:
    """Constraint slacks of an optimal certificate; all should be ``>= -tol``.

    Keys: ``psd1``, ``psd2`` (min eigenvalues), ``tp1``, ``tp2`` (negated max
    deviation of the output partial traces), ``wigner`` (min entry over the
    three Wigner matrices), ``transform`` (``eps`` minus the operator-norm error).
    """
    if outcome.choi_pair is None:
        raise ValueError("outcome carries no certificate")
    j1, j2 = outcome.choi_pair
    jn = outcome.choi
    c = outcome.c_star
    da = j1.d_in

    def tp_dev(j: Choi, target: float) -> float:
        part = np.einsum("ikjk->ij", j.tensor())
        return -float(np.abs(part - target * np.eye(da)).max())

    err = apply_choi(jn, rho) - sigma
    err = (err + err.conj().T) / 2
    return {
        "psd1": float(np.linalg.eigvalsh((j1.matrix + j1.matrix.conj().T) / 2).min()),
        "psd2": float(np.linalg.eigvalsh((j2.matrix + j2.matrix.conj().T) / 2).min()),
        "tp1": tp_dev(j1, c),
        "tp2": tp_dev(j2, c - 1),
        "wigner": float(min(np.real(wigner_of_map(j, strict=False)).min() for j in (j1, j2, jn))),
        "transform": float(eps - np.abs(np.linalg.eigvalsh(err)).max()),
    }


def is_physical(outcome: SdpOutcome, tol: float = 1e-6) -> bool:
    """Whether the ``J1`` part of an optimal certificate is a CPTP Wigner-positive channel."""
    if outcome.choi_pair is None:
        return False
    return classify(outcome.choi_pair[0], tol).cptp_pwp


def sampling_bound(nu: float, eps_est: float, delta: float) -> float:
    """Hoeffding sample count ``2 gamma**2 ln(2/delta) / eps**2`` with ``gamma = 2**nu``, unrounded."""
    if not eps_est > 0:
        raise ValueError("estimation error must be positive")
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    if not math.isfinite(nu) or nu < -NU_TOL:
        raise ValueError("nu must be a finite non-negative number")
    nu = max(nu, 0.0)
    # 4**nu rather than (2**nu)**2 keeps half-integer nu exact
    return 2 * 4.0**nu * math.log(2 / delta) / eps_est**2


def sampling_cost(nu: float, eps_est: float, delta: float) -> int:
    return math.ceil(sampling_bound(nu, eps_est, delta))
