"""Single robust solve and re-certification of stored solutions."""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from beamforming import (
    Algorithm1Diagnostics, BeamWeights, BeamformerOptions, CertificateReport, UncertaintyModel,
    algorithm1, check_certificates, construct_rank_one_certificate, loaded_covariance
)
from linalg import HermitianMatrix, MatrixInputError, as_hermitian, format_matrix, parse_matrix
from solver import ConicSolution, KktReport, RelaxationProblem, check_kkt, solve_inner

logger = logging.getLogger(__name__)

REPORT_VERSION = 1


def _vector_to_text(w: np.ndarray) -> List[str]:
    return [repr(complex(x)) for x in w]


def _vector_from_text(items: List[str]) -> np.ndarray:
    try:
        return np.array([complex(item) for item in items], dtype=np.complex128)
    except (TypeError, ValueError) as e:
        raise MatrixInputError('w', items, f"stored beamvector does not parse: {e}") from e


@dataclass
class SolveReport:
    """Result of one robust solve on explicit covariance matrices."""
    R_hat: HermitianMatrix
    Rs_hat: HermitianMatrix
    uncertainty: UncertaintyModel
    w: BeamWeights
    diagnostics: Algorithm1Diagnostics

    @property
    def kkt(self) -> KktReport:
        return self.diagnostics.solution.residuals

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready report; matrices use the matrix text format."""
        solution = self.diagnostics.solution
        return {
            'version': REPORT_VERSION,
            'gamma': self.uncertainty.gamma,
            'eps': self.uncertainty.eps,
            'w': _vector_to_text(self.w.w),
            'diagnostics': self.diagnostics.to_dict(),
            'R_hat': format_matrix(self.R_hat),
            'Rs_hat': format_matrix(self.Rs_hat),
            'solution': {
                'W': format_matrix(solution.W),
                'Y': format_matrix(solution.Y),
                'Z': format_matrix(solution.Z),
                't': solution.t,
                'z': solution.z,
                'primal_value': solution.primal_value,
                'dual_value': solution.dual_value,
                'status': solution.status.value,
                'iterations': solution.iterations
            }
        }

    def to_lines(self) -> List[str]:
        d = self.diagnostics
        lines = [
            f"gamma = {self.uncertainty.gamma!r}",
            f"eps = {self.uncertainty.eps!r}",
            "w =",
            *(f"  {entry}" for entry in _vector_to_text(self.w.w)),
            f"relaxation_value = {d.relaxation_value!r}",
            f"achieved_value = {d.achieved_value!r}",
            f"rank_of_W = {d.rank_of_W}",
            f"output_source = {d.output_source}",
            f"per_branch_values = {', '.join(repr(v) for v in d.per_branch_values)}",
            f"selected_index = {d.selected_index}",
            f"dual_eigen_value = {d.dual_eigen_value!r}"
        ]
        if d.borderline:
            lines.append("borderline_rank = true")
        lines.append("kkt:")
        lines.extend(f"  {k} = {v:.3e}" for k, v in self.kkt.to_dict().items())
        lines.extend(_certificate_lines(d.certificate))
        return lines


@dataclass
class CertifyReport:
    """Re-evaluated residuals and certificates of a stored solution."""
    kkt: KktReport
    certificate: CertificateReport
    stored_achieved: float
    recomputed_achieved: float
    tolerance: float
    # Residuals are absolute; they are compared against tolerance·max(1, |v*|).
    value_scale: float = 1.0
    notes: List[str] = field(default_factory=list)

    @property
    def kkt_ok(self) -> bool:
        return self.kkt.worst <= self.tolerance * self.value_scale

    @property
    def achieved_ok(self) -> bool:
        scale = max(1.0, abs(self.stored_achieved))
        return abs(self.recomputed_achieved - self.stored_achieved) <= self.tolerance * scale

    @property
    def ok(self) -> bool:
        return self.kkt_ok and self.achieved_ok

    def to_dict(self) -> Dict[str, Any]:
        return {
            'ok': self.ok,
            'kkt_ok': self.kkt_ok,
            'achieved_ok': self.achieved_ok,
            'tolerance': self.tolerance,
            'value_scale': self.value_scale,
            'kkt': self.kkt.to_dict(),
            'certificate': self.certificate.to_dict(),
            'stored_achieved': self.stored_achieved,
            'recomputed_achieved': self.recomputed_achieved,
            'notes': list(self.notes)
        }

    def to_lines(self) -> List[str]:
        lines = [f"{'✓' if self.kkt_ok else '✗'} KKT residuals (worst {self.kkt.worst:.3e}, tol {self.tolerance:.1e})"]
        lines.extend(f"  {k} = {v:.3e}" for k, v in self.kkt.to_dict().items())
        lines.append(
            f"{'✓' if self.achieved_ok else '✗'} achieved value {self.recomputed_achieved!r} "
            f"(stored {self.stored_achieved!r})"
        )
        lines.extend(_certificate_lines(self.certificate))
        lines.extend(self.notes)
        return lines


def _certificate_lines(report: CertificateReport) -> List[str]:
    def flag(value: bool) -> str:
        return 'true' if value else 'false'

    lines = [
        "certificates:",
        f"  applicable = {flag(report.applicable)}",
        f"  rank_one_at_solver = {flag(report.rank_one_at_solver)}",
        f"  thm42 = {flag(report.thm42_holds)}",
        f"  cor43 = {flag(report.cor43_holds)}",
        f"  cor44 = {flag(report.cor44_holds)}",
        f"  constructed = {flag(report.constructed_optimal)}"
    ]
    lines.extend(f"  {k} = {v!r}" for k, v in report.lhs_rhs_values.items())
    return lines


def run_single(R_hat, Rs_hat, gamma: float, eps: float,
               opts: Optional[BeamformerOptions] = None) -> SolveReport:
    """
    Robust beamformer for explicit covariances.

    Raises:
        MatrixInputError: If the matrices differ in dimension
        SolverInputError: If γ or ε is not positive or the data is invalid
        SolverNumericalError: If the solver's linear algebra breaks down
        SolverFailure: If the relaxation does not converge
        DecompositionFailure: If the rank-one decomposition does not converge
    """
    R_hat, Rs_hat = as_hermitian(R_hat), as_hermitian(Rs_hat)
    if R_hat.dim != Rs_hat.dim:
        raise MatrixInputError('Rs_hat', Rs_hat.dim, f"dimension differs from R_hat ({R_hat.dim})")
    u = UncertaintyModel(gamma=gamma, eps=eps)
    w, diagnostics = algorithm1(R_hat, Rs_hat, u, opts)
    return SolveReport(R_hat=R_hat, Rs_hat=Rs_hat, uncertainty=u, w=w, diagnostics=diagnostics)


def certify_stored(stored: Dict[str, Any], opts: Optional[BeamformerOptions] = None) -> CertifyReport:
    """
    Re-check a stored solve report without re-solving the relaxation.

    KKT residuals and certificates are recomputed from the stored primal-dual blocks;
    the achieved value is recomputed from the stored beamvector by one inner solve.

    Raises:
        MatrixInputError: If a stored field is missing or malformed
    """
    opts = opts or BeamformerOptions()
    try:
        block = stored['solution']
        R_hat = parse_matrix(stored['R_hat'], 'R_hat')
        Rs_hat = parse_matrix(stored['Rs_hat'], 'Rs_hat')
        u = UncertaintyModel(gamma=float(stored['gamma']), eps=float(stored['eps']))
        solution = ConicSolution(
            W=parse_matrix(block['W'], 'W'),
            Y=parse_matrix(block['Y'], 'Y'),
            Z=parse_matrix(block['Z'], 'Z'),
            t=float(block['t']),
            z=float(block['z']),
            primal_value=float(block['primal_value']),
            dual_value=float(block['dual_value'])
        )
        w = BeamWeights(_vector_from_text(stored['w']))
        stored_achieved = float(stored['diagnostics']['achieved_value'])
    except (KeyError, TypeError) as e:
        raise MatrixInputError('solution', str(e), 'stored solution is missing a field') from e

    A = loaded_covariance(R_hat, u.gamma)
    kkt = check_kkt(solution, RelaxationProblem(Rs_hat=Rs_hat, A=A, eps=u.eps))
    certificate = check_certificates(solution.W, solution.Y, solution.primal_value, Rs_hat, R_hat, u)
    notes = []
    constructed = construct_rank_one_certificate(
        solution.W, solution.Y, A, solution.Z, opts.certificate_psd_tol, opts.rank_tol
    )
    if constructed is not None:
        certificate.constructed_optimal = True
        notes.append("rank-one optimal vector reconstructed from W")

    recomputed = solve_inner(w.canonical(A).outer(), Rs_hat, u.eps, opts.solver).value
    report = CertifyReport(
        kkt=kkt,
        certificate=certificate,
        stored_achieved=stored_achieved,
        recomputed_achieved=recomputed,
        tolerance=opts.solver.degraded_tol,
        value_scale=max(1.0, abs(solution.primal_value)),
        notes=notes
    )
    logger.info(f"Certified stored solution: kkt worst {kkt.worst:.2e}, ok={report.ok}")
    return report
