"""LMI relaxation, its dual and the fixed-weight inner problem.

Relaxation (primal), for A = R̂ + γI:

    maximize    tr(R̂_s Y) − ε t
    subject to  tr(A W) = 1,  W ⪰ 0,  W − Y ⪰ 0,  ‖Y‖ ≤ t

Dual:

    minimize    z
    subject to  ‖Z − R̂_s‖ ≤ ε,  z A − Z ⪰ 0,  Z ⪰ 0

Inner problem for a fixed PSD matrix W_f:

    maximize    tr(R̂_s Y) − ε ‖Y‖   subject to  W_f − Y ⪰ 0

whose dual is min tr(W_f Z) over the same Z set, i.e. the worst-case numerator
over the Frobenius uncertainty ball when W_f = wwᴴ.

Both programs are equilibrated (A, R̂_s and W_f scaled to unit size) before the
engine runs and mapped back afterwards.

Two cases skip the engine. For N = 1 both programs have exact closed forms. When
ε is small enough that the pair Y = W, Z = R̂_s closes the duality gap to within
the gap tolerance, that pair is returned directly; its gap is ε‖W‖. The same
pair is the fallback, at degraded status, when the engine fails and ε‖W‖ is
within the degraded tolerance.
"""

import logging
import math
from contextlib import contextmanager
from typing import Optional

import numpy as np
import scipy.linalg

from linalg import (
    HermitianMatrix, as_hermitian, eig_hermitian, is_psd, inv_sqrt_pd, frob_norm
)
from .cones import HermitianPacking, PsdBlock, SocBlock, ProductCone
from .errors import SolverInputError, SolverFailure, SolverNumericalError
from .ipm import ConicProgram, PrimalDualSolver, EngineResult
from .models import (
    RelaxationProblem, SolverOptions, ConicSolution, InnerSolution, KktReport,
    ConicIterate, SolveStatus
)

logger = logging.getLogger(__name__)

INPUT_PSD_TOL = 1e-9


def _trace(m: np.ndarray) -> float:
    return float(np.trace(m).real)


def _negative_part(m: np.ndarray) -> float:
    return max(0.0, -eig_hermitian(m).smallest)


def _check_eps(eps: float) -> float:
    eps = float(eps)
    if not math.isfinite(eps) or eps <= 0.0:
        raise SolverInputError('eps', f"must be a positive finite number, got {eps}")
    return eps


def _check_psd_input(name: str, matrix: HermitianMatrix) -> None:
    if not is_psd(matrix, INPUT_PSD_TOL):
        raise SolverInputError(name, "matrix must be positive semidefinite")


def validate_problem(problem: RelaxationProblem) -> None:
    """
    Check the relaxation data.

    Raises:
        SolverInputError: On dimension mismatch, ε ≤ 0, A not positive definite or
            R̂_s not PSD
    """
    if problem.Rs_hat.dim != problem.A.dim:
        raise SolverInputError(
            'Rs_hat', f"dimension {problem.Rs_hat.dim} does not match A ({problem.A.dim})"
        )
    _check_eps(problem.eps)
    smallest = eig_hermitian(problem.A).smallest
    if smallest <= 0.0:
        raise SolverInputError('A', f"must be positive definite (smallest eigenvalue {smallest:.3e})")
    _check_psd_input('Rs_hat', problem.Rs_hat)


@contextmanager
def numerical_guard(what: str):
    """Re-raise linear algebra faults from numpy and scipy as SolverNumericalError."""
    try:
        yield
    except (np.linalg.LinAlgError, ValueError, FloatingPointError) as exc:
        raise SolverNumericalError(message=f"{what}: {exc}", iterations=0) from exc


def _finish(result: EngineResult, what: str, build_best):
    if result.status == SolveStatus.FAILED:
        error = SolverNumericalError if result.breakdown else SolverFailure
        raise error(
            message=f"{what}: {result.breakdown}" if result.breakdown else f"{what} did not converge",
            iterations=result.iterations,
            best=build_best(result.iterate),
            residuals={'primal': result.primal_residual, 'dual': result.dual_residual,
                       'gap': result.gap}
        )
    if result.status == SolveStatus.DEGRADED:
        logger.warning(
            f"{what} returned at degraded accuracy after {result.iterations} iterations "
            f"(pres={result.primal_residual:.2e}, dres={result.dual_residual:.2e}, gap={result.gap:.2e})"
        )


def _gap_within(gap: float, value: float, tol: float) -> bool:
    return gap <= tol * max(1.0, abs(value))


def _scalar_relaxation(problem: RelaxationProblem) -> ConicSolution:
    """Exact N = 1 optimum: W = 1/a, Y = W if r_s > ε else 0, z = max(r_s − ε, 0)/a."""
    a = float(problem.A.data[0, 0].real)
    rs = float(problem.Rs_hat.data[0, 0].real)
    level = max(rs - problem.eps, 0.0)
    y = 1.0 / a if rs > problem.eps else 0.0
    return ConicSolution(
        W=HermitianMatrix([[1.0 / a]]), Y=HermitianMatrix([[y]]), t=y, z=level / a,
        Z=HermitianMatrix([[level]]), primal_value=level * y, dual_value=level / a
    )


def _principal_pair(problem: RelaxationProblem) -> ConicSolution:
    """
    W = Y = wwᴴ with w the principal generalized eigenvector of (R̂_s, A), wᴴAw = 1,
    against z = λ₁(R̂_s A⁻¹), Z = R̂_s. Both sides are feasible; the gap is ε‖w‖².
    """
    root = inv_sqrt_pd(problem.A).data
    pair = eig_hermitian(root @ problem.Rs_hat.data @ root)
    W = HermitianMatrix.outer(root @ pair.vector(0))
    t = frob_norm(W)
    z = pair.largest
    return ConicSolution(W=W, Y=W, t=t, z=z, Z=problem.Rs_hat,
                         primal_value=problem.Rs_hat.inner(W) - problem.eps * t, dual_value=z)


def _closed_form(solution: ConicSolution, problem: RelaxationProblem, what: str,
                 status: SolveStatus = SolveStatus.OPTIMAL) -> ConicSolution:
    solution.status = status
    solution.residuals = check_kkt(solution, problem)
    logger.info(
        f"Relaxation solved (N={problem.dim}) by the {what}: "
        f"value={solution.primal_value:.10g}, gap={solution.residuals.r_gap:.2e}"
    )
    return solution


def solve_relaxation(problem: RelaxationProblem,
                     opts: Optional[SolverOptions] = None) -> ConicSolution:
    """
    Solve the LMI relaxation and its dual.

    Args:
        problem: Relaxation data (R̂_s, A = R̂ + γI, ε)
        opts: Solver options (defaults: 200 iterations, 1e-8 tolerances)

    Returns:
        ConicSolution with residuals populated

    Raises:
        SolverInputError: If the data is invalid
        SolverFailure: If the degraded tolerance is not reached; carries the best iterate
        SolverNumericalError: If the iteration breaks down on non-finite or singular data
    """
    opts = opts or SolverOptions()
    validate_problem(problem)
    with numerical_guard("LMI relaxation"):
        return _relaxation(problem, opts)


def _relaxation(problem: RelaxationProblem, opts: SolverOptions) -> ConicSolution:
    n = problem.dim
    if n == 1:
        return _closed_form(_scalar_relaxation(problem), problem, "scalar closed form")
    principal = _principal_pair(problem)
    principal_gap = principal.dual_value - principal.primal_value
    if _gap_within(principal_gap, principal.primal_value, opts.gap_tol):
        return _closed_form(principal, problem, "principal eigenvector pair")

    Rs = problem.Rs_hat.data
    A = problem.A.data
    a_scale = frob_norm(A)
    r_scale = frob_norm(Rs) or 1.0
    A_t = A / a_scale
    Rs_t = Rs / r_scale
    eps_t = problem.eps / r_scale

    pk = HermitianPacking(n)
    q = pk.size
    nx = 2 * q + 1
    cone = ProductCone([PsdBlock(n), PsdBlock(n), SocBlock(q + 1)])

    eye_q = np.eye(q)
    G = np.zeros((cone.size, nx))
    G[0:q, 0:q] = -eye_q
    G[q:2 * q, 0:q] = -eye_q
    G[q:2 * q, q:2 * q] = eye_q
    G[2 * q, 2 * q] = -1.0
    G[2 * q + 1:, q:2 * q] = -eye_q
    h = np.zeros(cone.size)
    c = np.concatenate([np.zeros(q), -pk.pack(Rs_t), [eps_t]])
    A_eq = np.concatenate([pk.pack(A_t), np.zeros(q + 1)])[None, :]
    program = ConicProgram(c=c, G=G, h=h, cone=cone, A=A_eq, b=np.ones(1))

    # strictly feasible primal start
    W0 = np.eye(n) / _trace(A_t)
    x0 = np.concatenate([pk.pack(W0), np.zeros(q), [1.0]])
    s0 = h - G @ x0

    # strictly feasible dual start
    Z0 = Rs_t + eps_t * np.eye(n) / math.sqrt(n + 1)
    bound = float(scipy.linalg.eigh(Z0, A_t, eigvals_only=True)[-1])
    y0 = (1.0 + opts.initial_centering) * max(bound, 0.0) + opts.initial_centering
    z0 = np.concatenate([pk.pack(y0 * A_t - Z0), pk.pack(Z0), [eps_t], pk.pack(Z0 - Rs_t)])

    ratio = r_scale / a_scale
    engine = PrimalDualSolver(program, opts, objective_sign=-1.0, objective_scale=ratio)
    result = engine.solve(ConicIterate(x=x0, s=s0, y=np.array([y0]), z=z0))

    def build(iterate: ConicIterate) -> ConicSolution:
        W = HermitianMatrix(pk.unpack(iterate.x[:q]) / a_scale)
        Y = HermitianMatrix(pk.unpack(iterate.x[q:2 * q]) / a_scale)
        t = float(iterate.x[2 * q]) / a_scale
        z = float(iterate.y[0]) * ratio
        Z = HermitianMatrix(pk.unpack(iterate.z[q:2 * q]) * r_scale)
        primal = problem.Rs_hat.inner(Y) - problem.eps * t
        return ConicSolution(W=W, Y=Y, t=t, z=z, Z=Z, primal_value=primal, dual_value=z,
                             status=result.status, iterations=result.iterations,
                             history=result.history)

    if result.status == SolveStatus.FAILED and _gap_within(
            principal_gap, principal.primal_value, opts.degraded_tol):
        logger.warning(
            f"LMI relaxation did not converge after {result.iterations} iterations; "
            f"using the principal eigenvector pair (gap {principal_gap:.2e})"
        )
        return _closed_form(principal, problem, "principal eigenvector pair", SolveStatus.DEGRADED)

    _finish(result, "LMI relaxation", build)
    solution = build(result.iterate)
    solution.residuals = check_kkt(solution, problem)
    logger.info(
        f"Relaxation solved (N={n}) in {result.iterations} iterations: "
        f"value={solution.primal_value:.10g}, gap={solution.residuals.r_gap:.2e}"
    )
    return solution


def solve_inner(Wfixed, Rs_hat, eps: float,
                opts: Optional[SolverOptions] = None) -> InnerSolution:
    """
    Solve the fixed-weight inner problem and its dual.

    Args:
        Wfixed: PSD matrix (typically R·w wᴴ or wwᴴ)
        Rs_hat: Presumed signal covariance
        eps: Radius of the signal covariance uncertainty ball

    Returns:
        InnerSolution (unpacks as (Y, value)); Z is the dual certificate

    Raises:
        SolverInputError: On invalid data
        SolverFailure: If the degraded tolerance is not reached
        SolverNumericalError: If the iteration breaks down on non-finite or singular data
    """
    opts = opts or SolverOptions()
    Wf = as_hermitian(Wfixed)
    Rs_h = as_hermitian(Rs_hat)
    eps = _check_eps(eps)
    if Wf.dim != Rs_h.dim:
        raise SolverInputError('Wfixed', f"dimension {Wf.dim} does not match Rs_hat ({Rs_h.dim})")
    _check_psd_input('Wfixed', Wf)
    _check_psd_input('Rs_hat', Rs_h)
    with numerical_guard("Inner problem"):
        return _inner(Wf, Rs_h, eps, opts)


def _inner(Wf: HermitianMatrix, Rs_h: HermitianMatrix, eps: float, opts: SolverOptions) -> InnerSolution:
    n = Wf.dim
    omega = Wf.trace()
    if omega <= np.finfo(float).tiny:
        return InnerSolution(Y=HermitianMatrix.zeros(n), value=0.0, Z=Rs_h, t=0.0,
                             dual_value=0.0)
    if n == 1:
        return _scalar_inner(Wf, Rs_h, eps)
    nominal = _nominal_inner(Wf, Rs_h, eps)
    nominal_gap = nominal.dual_value - nominal.value
    if _gap_within(nominal_gap, nominal.value, opts.gap_tol):
        return nominal

    r_scale = frob_norm(Rs_h) or 1.0
    W_t = Wf.data / omega
    Rs_t = Rs_h.data / r_scale
    eps_t = eps / r_scale

    pk = HermitianPacking(n)
    q = pk.size
    cone = ProductCone([PsdBlock(n), SocBlock(q + 1)])
    G = np.zeros((cone.size, q + 1))
    G[0:q, 0:q] = np.eye(q)
    G[q, q] = -1.0
    G[q + 1:, 0:q] = -np.eye(q)
    h = np.concatenate([pk.pack(W_t), np.zeros(q + 1)])
    c = np.concatenate([-pk.pack(Rs_t), [eps_t]])
    program = ConicProgram(c=c, G=G, h=h, cone=cone)

    Y0 = -np.eye(n) / n
    x0 = np.concatenate([pk.pack(Y0), [1.0 + 1.0 / math.sqrt(n)]])
    s0 = h - G @ x0
    Z0 = Rs_t + eps_t * np.eye(n) / math.sqrt(n + 1)
    z0 = np.concatenate([pk.pack(Z0), [eps_t], pk.pack(Z0 - Rs_t)])

    scale = omega * r_scale
    engine = PrimalDualSolver(program, opts, objective_sign=-1.0, objective_scale=scale)
    result = engine.solve(ConicIterate(x=x0, s=s0, y=np.zeros(0), z=z0))

    def build(iterate: ConicIterate) -> InnerSolution:
        Y = HermitianMatrix(pk.unpack(iterate.x[:q]) * omega)
        Z = HermitianMatrix(pk.unpack(iterate.z[:q]) * r_scale)
        value = Rs_h.inner(Y) - eps * frob_norm(Y)
        return InnerSolution(Y=Y, value=value, Z=Z, t=float(iterate.x[q]) * omega,
                             dual_value=Wf.inner(Z), status=result.status,
                             iterations=result.iterations)

    if result.status == SolveStatus.FAILED and _gap_within(nominal_gap, nominal.value, opts.degraded_tol):
        logger.warning(
            f"Inner problem did not converge after {result.iterations} iterations; "
            f"using Y = W_f (gap {nominal_gap:.2e})"
        )
        nominal.status = SolveStatus.DEGRADED
        return nominal

    _finish(result, "Inner problem", build)
    solution = build(result.iterate)
    logger.debug(
        f"Inner problem solved (N={n}) in {result.iterations} iterations: value={solution.value:.10g}"
    )
    return solution


def _scalar_inner(Wf: HermitianMatrix, Rs_h: HermitianMatrix, eps: float) -> InnerSolution:
    """Exact N = 1 optimum max(r_s − ε, 0)·w_f, attained by Y = w_f (or 0) and Z = max(r_s − ε, 0)."""
    wf = float(Wf.data[0, 0].real)
    rs = float(Rs_h.data[0, 0].real)
    level = max(rs - eps, 0.0)
    y = wf if rs > eps else 0.0
    return InnerSolution(Y=HermitianMatrix([[y]]), value=level * wf, Z=HermitianMatrix([[level]]),
                         t=y, dual_value=level * wf)


def _nominal_inner(Wf: HermitianMatrix, Rs_h: HermitianMatrix, eps: float) -> InnerSolution:
    """Y = W_f against Z = R̂_s; feasible on both sides with gap ε‖W_f‖."""
    t = frob_norm(Wf)
    return InnerSolution(Y=Wf, value=Rs_h.inner(Wf) - eps * t, Z=Rs_h, t=t, dual_value=Wf.inner(Rs_h))


def compact_form_residual(W, Y, z: float, Z, Rs_hat, eps: float) -> float:
    """Max pairwise deviation among z, tr(WZ), tr(YZ) and tr(Y R̂_s) − ε‖Y‖."""
    W, Y, Z, Rs = (as_hermitian(m) for m in (W, Y, Z, Rs_hat))
    quantities = [
        float(z),
        W.inner(Z),
        Y.inner(Z),
        Y.inner(Rs) - eps * frob_norm(Y)
    ]
    return max(quantities) - min(quantities)


def check_kkt(sol: ConicSolution, problem: RelaxationProblem) -> KktReport:
    """Evaluate complementary slackness and feasibility residuals of a primal-dual pair."""
    Rs = problem.Rs_hat.data
    A = problem.A.data
    eps = problem.eps
    W, Y, Z = sol.W.data, sol.Y.data, sol.Z.data
    t, z = float(sol.t), float(sol.z)
    y_norm = frob_norm(Y)

    primal = _trace(Rs @ Y) - eps * t
    return KktReport(
        r_comp1=abs(eps * t + _trace(Y @ (Z - Rs))),
        r_comp2=abs(_trace((z * A - Z) @ W)),
        r_comp3=abs(_trace((W - Y) @ Z)),
        r_compact=compact_form_residual(sol.W, sol.Y, z, sol.Z, problem.Rs_hat, eps),
        r_primal=max(abs(_trace(A @ W) - 1.0), _negative_part(W), _negative_part(W - Y),
                     max(0.0, y_norm - t)),
        r_dual=max(max(0.0, frob_norm(Z - Rs) - eps), _negative_part(z * A - Z),
                   _negative_part(Z)),
        r_gap=abs(primal - z) / max(1.0, abs(primal))
    )


def dual_eigen_value(Z, A) -> float:
    """λ₁(Z A⁻¹), computed as λ_max(A^(−1/2) Z A^(−1/2))."""
    root = inv_sqrt_pd(A).data
    return eig_hermitian(root @ as_hermitian(Z).data @ root).largest
