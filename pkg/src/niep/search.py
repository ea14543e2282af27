"""Numerical realization search with certificate-grade output.

Two search families share one philosophy: parameterize so that the hard
constraint is built in, keep the objective smooth, and hand every
success to the exact verifier before claiming anything.

General search minimizes the weighted characteristic-coefficient misfit

    F(B) = sum_k [ (c_k(A(B)) - a_k) / w_k ]^2,

where ``A = B*B`` entrywise, so nonnegativity is automatic, and
optionally (default) A is the row-normalized form ``A_ij = rho b_ij^2 /
sum_j b_ij^2`` which pins the row sums to the spectral radius.  That
slice loses no witnesses: a realizable spectrum always has a realization
with constant row sums equal to its spectral radius, with entries
bounded by it.  Derivatives flow through the Faddeev-LeVerrier
recurrence in reverse mode and the solver is trust-region least squares.

Symmetric search works on a Givens-angle chart of the orthogonal group:
``U(theta)`` is an ordered product of plane rotations, ``A = U D U^T``
has the exact target spectrum by construction, and the objective is the
negativity penalty ``G = sum min(A_ij, 0)^2`` minimized by L-BFGS with
an analytic gradient assembled from prefix/suffix products of the
rotation chain.  Sign flips of U's columns do not change ``U D U^T``,
so a chart of the special orthogonal group covers every candidate.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import least_squares, minimize

from .conditions import (
    RULE_DIRECT_MATRIX,
    DeductionStep,
    RealizationCertificate,
    Verdict,
    VerdictTag,
    first_violation,
    verify_certificate,
)
from .spectra import Spectrum, char_coeff_jacobian, char_coeffs, elementary_coeffs, l1_distance

__all__ = [
    "SearchConfig",
    "SearchResult",
    "CurveLiftResult",
    "find_realization",
    "find_symmetric_realization",
    "curve_lift",
    "objective_gradient",
    "coefficient_objective",
    "negativity_objective",
    "orthogonal_from_angles",
    "angles_from_orthogonal",
]


@dataclass
class SearchConfig:
    """Budgets and knobs shared by the search entry points.

    ``objective_tol`` is the success gate on the final objective value;
    ``certificate_tol`` is passed to the verifier.  ``clamp_tol`` bounds
    the magnitude of negative entries a symmetric candidate may carry
    into clamping.  Randomness is fully determined by ``rng_seed``.
    """

    restarts: int = 64
    max_iters: int = 2000
    objective_tol: float = 1e-16
    rng_seed: int = 0
    use_row_sum_slice: bool = True
    box_bound: float = 1.0
    certificate_tol: float = 1e-8
    clamp_tol: float = 1e-10
    polish_rounds: int = 200
    depth: int = 4

    def validate(self) -> None:
        if self.restarts < 1:
            raise ValueError("restarts must be at least 1")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        if not (self.objective_tol > 0.0):
            raise ValueError("objective_tol must be positive")
        if not (self.box_bound > 0.0):
            raise ValueError("box_bound must be positive")
        if not (self.certificate_tol > 0.0):
            raise ValueError("certificate_tol must be positive")
        if not (0.0 < self.clamp_tol <= 1e-6):
            raise ValueError("clamp_tol must be in (0, 1e-6]")
        if self.polish_rounds < 0:
            raise ValueError("polish_rounds must be nonnegative")
        if self.depth < 1:
            raise ValueError("depth must be at least 1")


@dataclass
class SearchResult:
    """Outcome of one search call.

    ``verdict.tag`` is Realizable only when a verified certificate is
    attached, and then ``best_objective <= objective_tol`` holds.
    ``parameters``/``mode`` carry an opaque warm-start payload for
    continuation along curves.
    """

    verdict: Verdict
    best_objective: float
    restarts_used: int
    iterations: int
    wall_time: float
    parameters: np.ndarray | None = None
    mode: str = ""


@dataclass
class CurveLiftResult:
    """Certificates along a sampled curve of spectra."""

    certificates: list[RealizationCertificate]
    failed_index: int | None
    max_jump: float
    total_iterations: int
    cold_iterations: int | None = None
    notes: list[str] = field(default_factory=list)


# ---------------------------------------------------------------------------
# General search: coefficient matching over squared parameterizations
# ---------------------------------------------------------------------------

def _matrix_from_params(x: np.ndarray, n: int, rho: float, mode: str) -> np.ndarray:
    b = x.reshape(n, n)
    sq = b * b
    if mode == "plain":
        return sq
    s = np.sum(sq, axis=1, keepdims=True)
    s = np.maximum(s, 1e-100)
    return rho * sq / s


def _coefficient_residuals(
    x: np.ndarray, n: int, rho: float, mode: str, target: np.ndarray, weights: np.ndarray
) -> np.ndarray:
    A = _matrix_from_params(x, n, rho, mode)
    return (char_coeffs(A) - target) / weights


def _coefficient_jacobian(
    x: np.ndarray, n: int, rho: float, mode: str, target: np.ndarray, weights: np.ndarray
) -> np.ndarray:
    b = x.reshape(n, n)
    sq = b * b
    if mode == "plain":
        A = sq
    else:
        s = np.maximum(np.sum(sq, axis=1, keepdims=True), 1e-100)
        A = rho * sq / s
    _, dcdA = char_coeff_jacobian(A)
    jac = np.empty((n, n * n))
    for k in range(n):
        G = dcdA[k]
        if mode == "plain":
            dk = G * (2.0 * b)
        else:
            row_dot = np.sum(G * A, axis=1, keepdims=True)
            dk = (2.0 * b / s) * (rho * G - row_dot)
        jac[k] = dk.ravel() / weights[k]
    return jac


def coefficient_objective(
    x: np.ndarray, spectrum: Spectrum, use_row_sum_slice: bool = True
) -> tuple[float, np.ndarray]:
    """Value and gradient of the coefficient-matching objective.

    ``x`` is the flattened n-by-n parameter matrix B.  The weights are
    ``w_k = max(1, rho^k)`` so every residual is O(1) at the scale of
    the spectrum.
    """
    lam = spectrum.array
    n = spectrum.n
    if x.shape != (n * n,):
        raise ValueError(f"parameter vector must have length {n * n}, got {x.shape}")
    rho = float(np.max(np.abs(lam)))
    mode = "slice" if use_row_sum_slice else "plain"
    target = elementary_coeffs(spectrum)
    weights = np.maximum(1.0, rho ** np.arange(1, n + 1))
    r = _coefficient_residuals(x, n, rho, mode, target, weights)
    J = _coefficient_jacobian(x, n, rho, mode, target, weights)
    return float(r @ r), 2.0 * (J.T @ r)


# ---------------------------------------------------------------------------
# Symmetric search: Givens chart of the orthogonal group
# ---------------------------------------------------------------------------

def _rotation_pairs(n: int) -> list[tuple[int, int]]:
    """Adjacent-plane rotation schedule, one angle per (column, row) stop.

    The order is the classical Givens annihilation sweep (columns left
    to right, rows bottom up), which makes the chart exactly invertible
    by :func:`angles_from_orthogonal`.
    """
    pairs = []
    for j in range(n - 1):
        for i in range(n - 1, j, -1):
            pairs.append((i - 1, i))
    return pairs


def _rotation_matrices(angles: np.ndarray, n: int) -> list[np.ndarray]:
    mats = []
    for (p, _), theta in zip(_rotation_pairs(n), angles):
        c, s = math.cos(theta), math.sin(theta)
        R = np.eye(n)
        R[p, p] = c
        R[p, p + 1] = -s
        R[p + 1, p] = s
        R[p + 1, p + 1] = c
        mats.append(R)
    return mats


def orthogonal_from_angles(angles: Sequence[float] | np.ndarray, n: int) -> np.ndarray:
    """Ordered product of plane rotations; a chart of SO(n).

    Requires ``len(angles) == n(n-1)/2``.
    """
    angles = np.asarray(angles, dtype=float)
    m = n * (n - 1) // 2
    if angles.shape != (m,):
        raise ValueError(f"need {m} angles for n={n}, got shape {angles.shape}")
    U = np.eye(n)
    for R in _rotation_matrices(angles, n):
        U = U @ R
    return U


def angles_from_orthogonal(Q: np.ndarray) -> np.ndarray:
    """Invert the Givens chart on SO(n).

    For orthogonal input with determinant -1 the last column is flipped
    first; conjugation ``U D U^T`` is invariant under column sign flips,
    so the flip never changes the matrix the chart is used to produce.
    """
    Q = np.asarray(Q, dtype=float)
    n = Q.shape[0]
    if Q.shape != (n, n):
        raise ValueError("Q must be square")
    R = Q.copy()
    if np.linalg.det(R) < 0.0:
        R[:, -1] = -R[:, -1]
    angles = []
    for j in range(n - 1):
        for i in range(n - 1, j, -1):
            a, b = R[i - 1, j], R[i, j]
            theta = math.atan2(b, a)
            angles.append(theta)
            c, s = math.cos(theta), math.sin(theta)
            rows = R[[i - 1, i], :].copy()
            R[i - 1, :] = c * rows[0] + s * rows[1]
            R[i, :] = -s * rows[0] + c * rows[1]
    return np.asarray(angles)


def negativity_objective(
    angles: np.ndarray, spectrum: Spectrum
) -> tuple[float, np.ndarray]:
    """Negativity penalty of ``U D U^T`` and its angle gradient.

    With ``U = A_0 ... A_{m-1}`` the derivative against angle k is
    ``<P_k' W S_k'>`` restricted to the rotated plane, where W is the
    matrix gradient ``4 min(A,0) U D`` and P/S are prefix/suffix
    products of the rotation chain.
    """
    lam = spectrum.array
    n = spectrum.n
    m = n * (n - 1) // 2
    angles = np.asarray(angles, dtype=float)
    if angles.shape != (m,):
        raise ValueError(f"need {m} angles for n={n}, got shape {angles.shape}")
    pairs = _rotation_pairs(n)
    mats = _rotation_matrices(angles, n)

    prefixes = [np.eye(n)]
    for R in mats:
        prefixes.append(prefixes[-1] @ R)
    suffixes = [np.eye(n)] * (m + 1)
    for k in range(m - 1, -1, -1):
        suffixes[k] = mats[k] @ suffixes[k + 1]
    U = prefixes[m]

    A = (U * lam) @ U.T
    N = np.minimum(A, 0.0)
    value = float(np.sum(N * N))
    W = 4.0 * (N @ (U * lam))
    grad = np.empty(m)
    for k, (p, _) in enumerate(pairs):
        T = prefixes[k].T @ W @ suffixes[k + 1].T
        c, s = math.cos(angles[k]), math.sin(angles[k])
        grad[k] = (
            -s * (T[p, p] + T[p + 1, p + 1]) - c * T[p, p + 1] + c * T[p + 1, p]
        )
    return value, grad


def objective_gradient(
    x: np.ndarray,
    spectrum: Spectrum,
    kind: str = "coefficient",
    use_row_sum_slice: bool = True,
) -> np.ndarray:
    """Analytic gradient of either search objective at ``x``."""
    if kind == "coefficient":
        return coefficient_objective(np.asarray(x, dtype=float), spectrum, use_row_sum_slice)[1]
    if kind == "negativity":
        return negativity_objective(np.asarray(x, dtype=float), spectrum)[1]
    raise ValueError(f"unknown objective kind {kind!r}")


# ---------------------------------------------------------------------------
# Entry points
# ---------------------------------------------------------------------------

def _elapsed(t0: float) -> float:
    return time.perf_counter() - t0


def _trivial_result(spec: Spectrum, cfg: SearchConfig, t0: float) -> SearchResult | None:
    """Dimension-1 and zero spectra need no optimizer."""
    lam = spec.array
    if spec.n == 1:
        cert = RealizationCertificate(
            spectrum=spec,
            matrix=np.array([[lam[0]]]),
            symmetric=True,
            residual=math.inf,
            provenance=[
                DeductionStep(RULE_DIRECT_MATRIX, {"method": "diagonal"}, None)
            ],
        )
        if verify_certificate(cert, cfg.certificate_tol):
            return SearchResult(
                Verdict(VerdictTag.REALIZABLE, witness=cert),
                0.0, 0, 0, _elapsed(t0),
            )
        return None
    if float(np.max(np.abs(lam))) == 0.0:
        cert = RealizationCertificate(
            spectrum=spec,
            matrix=np.zeros((spec.n, spec.n)),
            symmetric=True,
            residual=math.inf,
            provenance=[
                DeductionStep(RULE_DIRECT_MATRIX, {"method": "diagonal"}, None)
            ],
        )
        verify_certificate(cert, cfg.certificate_tol)
        return SearchResult(
            Verdict(VerdictTag.REALIZABLE, witness=cert), 0.0, 0, 0, _elapsed(t0)
        )
    return None


def find_realization(
    spec: Spectrum,
    config: SearchConfig | None = None,
    warm_start: tuple[str, np.ndarray] | None = None,
) -> SearchResult:
    """Search for a nonnegative matrix with the given spectrum.

    Deterministic for a fixed ``config.rng_seed``.  Restart seeds, in
    order: the warm start when given, the companion matrix when it is
    nonnegative, then seeded random draws.  Each restart runs
    trust-region least squares on the coefficient misfit; the first
    iterate passing the objective gate and independent certificate
    verification wins.  A violated necessary condition short-circuits to
    NotRealizable before any optimization.
    """
    cfg = config or SearchConfig()
    cfg.validate()
    t0 = time.perf_counter()

    proof = first_violation(spec, cfg.depth)
    if proof is not None:
        return SearchResult(
            Verdict(VerdictTag.NOT_REALIZABLE, proof=proof),
            math.inf, 0, 0, _elapsed(t0),
        )
    trivial = _trivial_result(spec, cfg, t0)
    if trivial is not None:
        return trivial

    n = spec.n
    lam = spec.array
    rho = float(np.max(np.abs(lam)))
    target = elementary_coeffs(spec)
    weights = np.maximum(1.0, rho ** np.arange(1, n + 1))
    default_mode = "slice" if cfg.use_row_sum_slice else "plain"

    seeds: list[tuple[str, np.ndarray]] = []
    if warm_start is not None:
        mode, x0 = warm_start
        if mode in ("slice", "plain") and np.asarray(x0).shape == (n * n,):
            seeds.append((mode, np.asarray(x0, dtype=float)))
    if float(np.max(target)) <= 0.0:
        # The companion matrix already solves the system exactly; seed
        # it in the unnormalized mode so the objective starts at zero.
        companion = np.zeros((n, n))
        if n > 1:
            companion[np.arange(n - 1), np.arange(1, n)] = 1.0
        companion[-1, :] = -target[::-1]
        seeds.append(("plain", np.sqrt(companion).ravel()))
    rng = np.random.default_rng(np.random.SeedSequence([cfg.rng_seed, n, 0x5EA2C4]))
    while len(seeds) < cfg.restarts:
        if default_mode == "slice":
            x0 = rng.uniform(0.1, 1.0, n * n)
        else:
            x0 = np.sqrt(rng.uniform(0.0, cfg.box_bound * max(rho, 1e-6), n * n))
        seeds.append((default_mode, x0))
    seeds = seeds[: cfg.restarts]

    best = math.inf
    iterations = 0
    for r, (mode, x0) in enumerate(seeds):
        res = least_squares(
            _coefficient_residuals,
            x0,
            jac=_coefficient_jacobian,
            args=(n, rho, mode, target, weights),
            method="trf",
            max_nfev=cfg.max_iters,
            xtol=1e-15,
            ftol=1e-15,
            gtol=1e-15,
        )
        iterations += int(res.nfev)
        value = float(res.fun @ res.fun)
        best = min(best, value)
        if value <= cfg.objective_tol:
            A = _matrix_from_params(res.x, n, rho, mode)
            cert = RealizationCertificate(
                spectrum=spec,
                matrix=A,
                symmetric=False,
                residual=math.inf,
                provenance=[
                    DeductionStep(
                        RULE_DIRECT_MATRIX,
                        {
                            "method": "coefficient-match",
                            "mode": mode,
                            "objective": value,
                            "restart": r,
                            "seed": cfg.rng_seed,
                        },
                        None,
                    )
                ],
            )
            if verify_certificate(cert, cfg.certificate_tol):
                return SearchResult(
                    Verdict(VerdictTag.REALIZABLE, witness=cert),
                    value, r + 1, iterations, _elapsed(t0),
                    parameters=res.x.copy(), mode=mode,
                )
    return SearchResult(
        Verdict(
            VerdictTag.UNKNOWN,
            note=(
                f"search budget exhausted ({len(seeds)} restarts); "
                f"best objective {best:.3e}"
            ),
        ),
        best, len(seeds), iterations, _elapsed(t0),
    )


def _feasibility_polish(A: np.ndarray, lam: np.ndarray, rounds: int) -> np.ndarray:
    """Alternate clamping with exact-spectrum reconstruction.

    Each round projects onto the nonnegative cone, then rebuilds a
    symmetric matrix with exactly the target spectrum from the clamped
    matrix's eigenvectors.  Near a feasible point this contracts the
    residual negativity to solver precision while the spectrum stays
    exact by construction.
    """
    asc = np.sort(lam)
    for _ in range(rounds):
        if float(np.min(A)) >= -1e-14:
            break
        B = np.maximum(A, 0.0)
        B = 0.5 * (B + B.T)
        try:
            _, Q = np.linalg.eigh(B)
        except np.linalg.LinAlgError:
            break
        A = (Q * asc) @ Q.T
        A = 0.5 * (A + A.T)
    return A


def _symmetric_snap(A: np.ndarray, spec: Spectrum) -> np.ndarray:
    """Refit A as an entrywise square, matching coefficients exactly.

    Boundary realizations (a threshold spectrum, say) leave the
    projection polish hovering at 1e-9 negativity.  Reparameterizing the
    upper triangle as squares makes nonnegativity and symmetry exact by
    construction, and a short trust-region fit of the characteristic
    coefficients recovers the spectrum to solver precision.  Multiple
    eigenvalues then agree with their targets in cluster mean, which is
    what the verifier checks.
    """
    n = spec.n
    iu = np.triu_indices(n)
    target = elementary_coeffs(spec)
    rho = max(1.0, float(np.max(np.abs(spec.array))))
    weights = np.maximum(1.0, rho ** np.arange(1, n + 1))

    def build(b: np.ndarray) -> np.ndarray:
        M = np.zeros((n, n))
        M[iu] = b * b
        return M + np.triu(M, 1).T

    def resid(b: np.ndarray) -> np.ndarray:
        return (char_coeffs(build(b)) - target) / weights

    def jac(b: np.ndarray) -> np.ndarray:
        _, grads = char_coeff_jacobian(build(b))
        J = np.empty((n, b.size))
        for k in range(n):
            Gk = grads[k] + grads[k].T
            np.fill_diagonal(Gk, np.diag(grads[k]))
            J[k] = 2.0 * b * Gk[iu]
        return J / weights[:, None]

    b0 = np.sqrt(np.maximum(A, 0.0))[iu]
    fit = least_squares(
        resid, b0, jac=jac, method="trf",
        xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=400,
    )
    return build(fit.x)


def find_symmetric_realization(
    spec: Spectrum,
    config: SearchConfig | None = None,
    warm_start: tuple[str, np.ndarray] | None = None,
) -> SearchResult:
    """Search for a symmetric nonnegative matrix with the given spectrum.

    Moves on the Givens-angle chart, so every candidate has the exact
    target spectrum and only nonnegativity is optimized.  Restart seeds:
    warm start, the identity (which alone settles spectra that are
    already nonnegative), then alternating random angles and charts of
    eigenvector bases of random symmetric nonnegative matrices.  A
    success is polished by alternating projections before clamping and
    verification.
    """
    cfg = config or SearchConfig()
    cfg.validate()
    t0 = time.perf_counter()

    proof = first_violation(spec, cfg.depth)
    if proof is not None:
        return SearchResult(
            Verdict(VerdictTag.NOT_REALIZABLE, proof=proof),
            math.inf, 0, 0, _elapsed(t0),
        )
    trivial = _trivial_result(spec, cfg, t0)
    if trivial is not None:
        return trivial

    n = spec.n
    lam = spec.array
    m = n * (n - 1) // 2

    def seed_iter():
        if warm_start is not None:
            mode, x0 = warm_start
            if mode == "givens" and np.asarray(x0).shape == (m,):
                yield np.asarray(x0, dtype=float)
        yield np.zeros(m)
        rng = np.random.default_rng(
            np.random.SeedSequence([cfg.rng_seed, n, 0x51A3E7])
        )
        while True:
            yield rng.uniform(-math.pi, math.pi, m)
            M = rng.uniform(0.0, 1.0, (n, n))
            M = 0.5 * (M + M.T)
            _, Q = np.linalg.eigh(M)
            yield angles_from_orthogonal(Q[:, ::-1])

    best = math.inf
    iterations = 0
    restarts = 0
    polish_gate = max(cfg.objective_tol, 1e-9)
    for x0 in seed_iter():
        if restarts >= cfg.restarts:
            break
        restarts += 1
        res = minimize(
            negativity_objective,
            x0,
            args=(spec,),
            jac=True,
            method="L-BFGS-B",
            options={"maxiter": cfg.max_iters, "ftol": 1e-18, "gtol": 1e-14, "maxcor": 30},
        )
        iterations += int(res.nit)
        value = float(res.fun)
        best = min(best, value)
        if value > polish_gate:
            continue
        U = orthogonal_from_angles(res.x, n)
        A = (U * lam) @ U.T
        A = 0.5 * (A + A.T)
        A = _feasibility_polish(A, lam, cfg.polish_rounds)
        worst = float(np.min(A))
        penalty = float(np.sum(np.minimum(A, 0.0) ** 2))
        method = "orthogonal-conjugation"
        if penalty > cfg.objective_tol or worst < -cfg.clamp_tol:
            A = _symmetric_snap(A, spec)
            worst = float(np.min(A))
            penalty = float(np.sum(np.minimum(A, 0.0) ** 2))
            method = "orthogonal-conjugation+coefficient-snap"
        best = min(best, penalty)
        if penalty > cfg.objective_tol or worst < -cfg.clamp_tol:
            continue
        witness = np.maximum(A, 0.0)
        cert = RealizationCertificate(
            spectrum=spec,
            matrix=witness,
            symmetric=True,
            residual=math.inf,
            provenance=[
                DeductionStep(
                    RULE_DIRECT_MATRIX,
                    {
                        "method": method,
                        "objective": penalty,
                        "clamped_at": abs(worst),
                        "restart": restarts - 1,
                        "seed": cfg.rng_seed,
                    },
                    None,
                )
            ],
        )
        if verify_certificate(cert, cfg.certificate_tol):
            return SearchResult(
                Verdict(VerdictTag.REALIZABLE, witness=cert),
                penalty, restarts, iterations, _elapsed(t0),
                parameters=res.x.copy(), mode="givens",
            )
    return SearchResult(
        Verdict(
            VerdictTag.UNKNOWN,
            note=(
                f"symmetric search budget exhausted ({restarts} restarts); "
                f"best objective {best:.3e}"
            ),
        ),
        best, restarts, iterations, _elapsed(t0),
    )


def curve_lift(
    samples: Sequence[Spectrum],
    config: SearchConfig | None = None,
    symmetric: bool = False,
    step_bound: float | None = None,
    compare_cold: bool = False,
) -> CurveLiftResult:
    """Certify a sampled curve of spectra with warm-started continuation.

    Solves the first sample cold, then reuses each solution as the
    leading restart for the next sample.  Fails soft: on the first
    sample that does not certify, returns the certificates gathered so
    far and the failing index.  ``max_jump`` is the largest Frobenius
    distance between consecutive witness matrices.  With
    ``compare_cold`` the whole curve is re-solved without warm starts
    and the iteration totals are reported side by side.
    """
    if not samples:
        raise ValueError("sample list must be non-empty")
    n = samples[0].n
    for s in samples:
        if s.n != n:
            raise ValueError("all samples must have the same length")
    if step_bound is not None:
        for a, b in zip(samples, samples[1:]):
            gap = l1_distance(a, b)
            if gap > step_bound:
                raise ValueError(
                    f"consecutive l1 gap {gap:.6g} exceeds step bound {step_bound:.6g}"
                )
    solver: Callable[..., SearchResult] = (
        find_symmetric_realization if symmetric else find_realization
    )

    def run(warmed: bool) -> tuple[list[RealizationCertificate], int | None, int]:
        certs: list[RealizationCertificate] = []
        warm: tuple[str, np.ndarray] | None = None
        total = 0
        for idx, spec in enumerate(samples):
            res = solver(spec, config, warm_start=warm if warmed else None)
            total += res.iterations
            if res.verdict.tag is not VerdictTag.REALIZABLE:
                return certs, idx, total
            certs.append(res.verdict.witness)
            if res.parameters is not None:
                warm = (res.mode, res.parameters)
        return certs, None, total

    certs, failed_index, total = run(warmed=True)
    max_jump = 0.0
    for a, b in zip(certs, certs[1:]):
        if a.matrix is not None and b.matrix is not None:
            max_jump = max(max_jump, float(np.linalg.norm(a.matrix - b.matrix)))
    cold_total = None
    notes = []
    if compare_cold:
        _, cold_failed, cold_total = run(warmed=False)
        notes.append(
            f"warm-start iterations {total} vs cold {cold_total}"
            + ("" if cold_failed is None else f" (cold failed at index {cold_failed})")
        )
    if failed_index is not None:
        notes.append(f"continuation stopped at sample {failed_index}")
    return CurveLiftResult(
        certificates=certs,
        failed_index=failed_index,
        max_jump=max_jump,
        total_iterations=total,
        cold_iterations=cold_total,
        notes=notes,
    )
