"""Dense primal-dual interior-point engine for small conic programs.

Solves

    minimize    cᵀx
    subject to  G x + s = h,  A x = b,  s ∈ K

together with its dual

    maximize    −hᵀz − bᵀy
    subject to  Gᵀz + Aᵀy + c = 0,  z ∈ K

where K is a ProductCone of Hermitian PSD and second-order cone blocks. Each
iteration uses Nesterov–Todd scaling and a Mehrotra predictor-corrector step; the
reduced KKT system is factored once per iteration and shared by both solves.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
import scipy.linalg

from .cones import ProductCone
from .models import ConicIterate, SolverOptions, SolveStatus, IterationRecord

logger = logging.getLogger(__name__)


@dataclass
class ConicProgram:
    c: np.ndarray
    G: np.ndarray
    h: np.ndarray
    cone: ProductCone
    A: Optional[np.ndarray] = None
    b: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.A is None:
            self.A = np.zeros((0, self.c.size))
            self.b = np.zeros(0)


@dataclass
class EngineResult:
    iterate: ConicIterate
    status: SolveStatus
    iterations: int
    pcost: float
    dcost: float
    primal_residual: float
    dual_residual: float
    gap: float
    history: List[IterationRecord] = field(default_factory=list)
    # Set when the loop ended on a failed Newton step rather than the iteration cap.
    breakdown: Optional[str] = None


class PrimalDualSolver:
    """Single-use solver instance; not shareable across threads mid-solve."""

    def __init__(self, program: ConicProgram, options: Optional[SolverOptions] = None,
                 objective_sign: float = -1.0, objective_scale: float = 1.0):
        """
        Args:
            program: Conic program in minimization form
            options: Tolerances and iteration limits
            objective_sign, objective_scale: map engine costs to the caller's frame for
                the iteration history (the relaxations are maximizations)
        """
        self.program = program
        self.options = options or SolverOptions()
        self.objective_sign = objective_sign
        self.objective_scale = objective_scale

        self._resx0 = max(1.0, float(np.linalg.norm(program.c)))
        self._resy0 = max(1.0, float(np.linalg.norm(program.b)))
        self._resz0 = max(1.0, float(np.linalg.norm(program.h)))

    def _measures(self, it: ConicIterate):
        p = self.program
        rx = p.G.T @ it.z + p.A.T @ it.y + p.c
        ry = p.A @ it.x - p.b
        rz = p.G @ it.x + it.s - p.h
        pcost = float(p.c @ it.x)
        dcost = float(-p.h @ it.z - p.b @ it.y)
        pres = max(float(np.linalg.norm(ry)) / self._resy0, float(np.linalg.norm(rz)) / self._resz0)
        dres = float(np.linalg.norm(rx)) / self._resx0
        gap = float(it.s @ it.z)
        rel_gap = max(gap, abs(pcost - dcost)) / max(1.0, abs(pcost))
        return rx, ry, rz, pcost, dcost, pres, dres, gap, rel_gap

    def _factor(self, Gs: np.ndarray):
        p = self.program
        n, m = p.c.size, p.A.shape[0]
        kkt = np.zeros((n + m, n + m))
        kkt[:n, :n] = Gs.T @ Gs
        kkt[:n, n:] = p.A.T
        kkt[n:, :n] = p.A
        return kkt, scipy.linalg.lu_factor(kkt, check_finite=False)

    def _solve_reduced(self, kkt, factor, rhs):
        sol = scipy.linalg.lu_solve(factor, rhs, check_finite=False)
        # one step of iterative refinement
        sol += scipy.linalg.lu_solve(factor, rhs - kkt @ sol, check_finite=False)
        return sol

    def _direction(self, scaling, Gs, kkt, factor, bx, by, bz, bs):
        """Solve the scaled Newton system; returns dx, dy and scaled ds̃, dz̃."""
        n = self.program.c.size
        t = scaling.inv_product(bs)
        r = scaling.apply(bz, 'Winvt') - t
        sol = self._solve_reduced(kkt, factor, np.concatenate([bx + Gs.T @ r, by]))
        dx, dy = sol[:n], sol[n:]
        dz_scaled = Gs @ dx - r
        ds_scaled = t - dz_scaled
        return dx, dy, ds_scaled, dz_scaled

    def solve(self, start: ConicIterate) -> EngineResult:
        """
        Run path-following iterations from a strictly interior start.

        Returns:
            EngineResult whose status is OPTIMAL, DEGRADED (only the degraded tolerance
            was reached) or FAILED; the iterate is the best one seen.
        """
        p = self.program
        opts = self.options
        cone = p.cone
        e = cone.identity()
        it = start.copy()
        history: List[IterationRecord] = []

        best = None
        best_merit = math.inf
        breakdown = None
        step = 0.0
        iteration = 0

        for iteration in range(opts.max_iterations + 1):
            rx, ry, rz, pcost, dcost, pres, dres, gap, rel_gap = self._measures(it)
            history.append(IterationRecord(
                iteration=iteration,
                primal_objective=self.objective_sign * self.objective_scale * pcost,
                dual_objective=self.objective_sign * self.objective_scale * dcost,
                primal_residual=pres,
                dual_residual=dres,
                gap=gap,
                step=step
            ))
            logger.debug(
                f"it {iteration:3d}: pcost={pcost: .10e} dcost={dcost: .10e} "
                f"gap={gap:.2e} pres={pres:.2e} dres={dres:.2e} step={step:.3f}"
            )

            merit = max(pres, dres, rel_gap)
            if merit < best_merit:
                best_merit = merit
                best = (it.copy(), pcost, dcost, pres, dres, gap)

            if pres <= opts.feas_tol and dres <= opts.feas_tol and rel_gap <= opts.gap_tol:
                return EngineResult(it, SolveStatus.OPTIMAL, iteration, pcost, dcost,
                                    pres, dres, gap, history)
            if iteration == opts.max_iterations:
                break

            try:
                scaling = cone.scaling(it.s, it.z)
                lam = scaling.lam
                Gs = scaling.apply(p.G, 'Winvt')
                kkt, factor = self._factor(Gs)

                # predictor
                lam_sq = cone.jordan(lam, lam)
                dx, dy, ds_a, dz_a = self._direction(scaling, Gs, kkt, factor, -rx, -ry, -rz, -lam_sq)
                alpha_aff = min(1.0, scaling.max_step(ds_a), scaling.max_step(dz_a))
                mu = float(lam @ lam) / cone.degree
                mu_aff = float((lam + alpha_aff * ds_a) @ (lam + alpha_aff * dz_a)) / cone.degree
                sigma = min(1.0, max(0.0, mu_aff / mu)) ** opts.centering_exponent if mu > 0 else 0.0

                # corrector
                bs = -lam_sq - cone.jordan(ds_a, dz_a) + sigma * mu * e
                dx, dy, ds_s, dz_s = self._direction(scaling, Gs, kkt, factor, -rx, -ry, -rz, bs)
                if not all(np.all(np.isfinite(d)) for d in (dx, dy, ds_s, dz_s)):
                    breakdown = f"non-finite Newton direction at iteration {iteration}"
                    logger.warning(breakdown)
                    break
                step = min(1.0, opts.step_fraction * min(scaling.max_step(ds_s), scaling.max_step(dz_s)))
            except (np.linalg.LinAlgError, ValueError, FloatingPointError) as exc:
                breakdown = f"Newton step failed at iteration {iteration}: {exc}"
                logger.warning(breakdown)
                break

            if not math.isfinite(step) or step <= 1e-14:
                logger.warning(f"Step length collapsed at iteration {iteration} (step={step:.2e})")
                break

            it.x = it.x + step * dx
            it.y = it.y + step * dy
            it.s = scaling.apply(lam + step * ds_s, 'Wt')
            it.z = scaling.apply(lam + step * dz_s, 'Winv')

        best_it, pcost, dcost, pres, dres, gap = best
        if best_merit <= min(opts.feas_tol, opts.gap_tol):
            status = SolveStatus.OPTIMAL
        elif best_merit <= opts.degraded_tol:
            status = SolveStatus.DEGRADED
        else:
            status = SolveStatus.FAILED
        return EngineResult(best_it, status, iteration, pcost, dcost, pres, dres, gap, history, breakdown)
