"""Exact realizability reasoning: verdicts, proofs, and certificates.

Everything in this module is either exact arithmetic on spectra or
verification of explicitly stored evidence.  The three currencies are

* :class:`NonRealizabilityProof` -- a re-checkable reason a spectrum is
  not the spectrum of any nonnegative matrix (a violated necessary
  condition, or exhaustion of every candidate block partition),
* :class:`RealizationCertificate` -- evidence of realizability, either a
  stored nonnegative matrix or a chain of deduction steps rooted in one
  (or in the zero spectrum), and
* :class:`Verdict` -- Realizable / NotRealizable / Unknown with the
  matching evidence attached.

The prover side leans on block structure: the spectrum of a nonnegative
matrix is the multiset union of the spectra of the irreducible diagonal
blocks of its triangular block form, and each irreducible block has a
simple positive dominant eigenvalue (with at most one eigenvalue at its
negative).  If no partition of the given multiset into plausible block
spectra survives, the spectrum is not realizable.

The deduction side implements two perturbation rules: the additive rule
(raise the leading slot by the total absolute tail perturbation) and a
leading-slot raise.  The raise is only self-certifying when the result
re-enters the cone ``lambda_1 >= sum |tail|``; outside that cone it must
be requested with an explicit ``assume_threshold`` flag and the
assumption is recorded in the provenance.
"""

from __future__ import annotations

import enum
import hashlib
import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

import numpy as np

from .spectra import (
    Spectrum,
    as_square_matrix,
    char_coeffs,
    eigenvalues,
    elementary_coeffs,
    make_spectrum,
    power_sums,
)

__all__ = [
    "VerdictTag",
    "Verdict",
    "ConditionResult",
    "NonRealizabilityProof",
    "DeductionStep",
    "RealizationCertificate",
    "DeductionError",
    "BudgetExceededError",
    "RULE_ZERO_BASE",
    "RULE_DIRECT_MATRIX",
    "RULE_COMPANION",
    "RULE_COROLLARY1",
    "RULE_PERRON_RAISE",
    "spectrum_digest",
    "check_necessary",
    "first_violation",
    "partition_prover",
    "decide_exact",
    "companion_matrix",
    "companion_realizer",
    "zero_certificate",
    "matrix_certificate",
    "corollary1_step",
    "perron_raise",
    "reachable",
    "verify_certificate",
    "verify_proof",
    "certificate_to_dict",
    "certificate_from_dict",
    "proof_to_dict",
    "proof_from_dict",
    "verdict_to_dict",
]


class DeductionError(ValueError):
    """A deduction step was requested with unsatisfied preconditions."""


class BudgetExceededError(RuntimeError):
    """An exact procedure refused to run because its input is too large."""


class VerdictTag(str, enum.Enum):
    REALIZABLE = "Realizable"
    NOT_REALIZABLE = "NotRealizable"
    UNKNOWN = "Unknown"


# Deduction rule names; these strings are part of the certificate JSON schema.
RULE_ZERO_BASE = "ZeroBase"
RULE_DIRECT_MATRIX = "DirectMatrix"
RULE_COMPANION = "CompanionConstruction"
RULE_COROLLARY1 = "Corollary1"
RULE_PERRON_RAISE = "PerronRaise"

_ROOT_RULES = (RULE_ZERO_BASE, RULE_DIRECT_MATRIX, RULE_COMPANION)
_DEDUCTION_RULES = (RULE_COROLLARY1, RULE_PERRON_RAISE)

# Slotwise tolerance when replaying deduction arithmetic.  Each step is
# float add/subtract of user-supplied values, so the slack per chain is
# a few ulp; 1e-11 leaves room for long chains without admitting any
# materially different spectrum.
_REPLAY_TOL = 1e-11

# Matrix entries in (-CLAMP, 0) are treated as exact zeros during
# verification; anything more negative fails.
_NEGATIVITY_CLAMP = 1e-12

_SYMMETRY_TOL = 1e-12


@dataclass
class ConditionResult:
    """Outcome of one necessary condition.

    ``slack`` is the margin by which the condition holds; negative slack
    means violation.  Violations only count when they clear a small
    roundoff guard, so spectra that are realizable up to eigensolver
    noise are never pushed into NotRealizable.
    """

    name: str
    passed: bool
    slack: float
    detail: str = ""


@dataclass
class NonRealizabilityProof:
    """Re-checkable evidence that a spectrum is not realizable."""

    kind: str
    detail: dict[str, Any]

    def spectrum(self) -> Spectrum:
        return make_spectrum(self.detail["spectrum"])


@dataclass(frozen=True)
class DeductionStep:
    """One link in a certificate's provenance chain.

    ``rule`` is one of the RULE_* constants.  ``parameters`` holds the
    JSON-serializable data needed to replay the step.  ``base`` is the
    digest of the spectrum the step started from (None for roots).
    """

    rule: str
    parameters: dict[str, Any]
    base: str | None = None


@dataclass
class RealizationCertificate:
    """Evidence that a spectrum is realizable.

    Either ``matrix`` holds an explicit nonnegative witness, or the
    provenance chain replays from a root (stored matrix or the zero
    spectrum) through deduction steps to the claimed spectrum.
    ``residual`` is refreshed by :func:`verify_certificate`.
    """

    spectrum: Spectrum
    matrix: np.ndarray | None
    symmetric: bool
    residual: float
    provenance: list[DeductionStep] = field(default_factory=list)


@dataclass
class Verdict:
    """Realizability verdict with the evidence that backs it."""

    tag: VerdictTag
    witness: RealizationCertificate | None = None
    proof: NonRealizabilityProof | None = None
    note: str = ""

    def __post_init__(self) -> None:
        if self.tag is VerdictTag.REALIZABLE and self.witness is None:
            raise ValueError("Realizable verdict requires a witness certificate")
        if self.tag is VerdictTag.NOT_REALIZABLE and self.proof is None:
            raise ValueError("NotRealizable verdict requires a proof")
        if self.tag is VerdictTag.UNKNOWN and (self.witness or self.proof):
            raise ValueError("Unknown verdict carries no evidence")


def spectrum_digest(values: Spectrum | Iterable[float]) -> str:
    """Short stable digest of a value vector, used to link provenance."""
    arr = values.array if isinstance(values, Spectrum) else np.asarray(values, dtype=float)
    text = ",".join(f"{v:.17g}" for v in arr)
    return "sha256:" + hashlib.sha256(text.encode()).hexdigest()[:16]


# ---------------------------------------------------------------------------
# Necessary conditions
# ---------------------------------------------------------------------------

def check_necessary(spec: Spectrum, depth: int = 4) -> list[ConditionResult]:
    """Evaluate the exact necessary battery on a spectrum.

    Conditions, in order: dominance of the leading slot over every
    |lambda_i|; nonnegativity of the power sums p_k for k = 1..depth
    (k = 1 is the trace); and the moment inequalities
    p_1^m <= n^(m-1) p_m for m = 2..depth.  All hold for the spectrum
    of any nonnegative matrix, so a cleared violation is a proof of
    non-realizability.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    lam = spec.array
    n = spec.n
    results: list[ConditionResult] = []

    max_abs = float(np.max(np.abs(lam)))
    guard = 1e-9 * max(1.0, max_abs)
    slack = float(lam[0] - max_abs)
    results.append(
        ConditionResult(
            name="perron-dominance",
            passed=slack >= -guard,
            slack=slack,
            detail=f"leading value {lam[0]:.12g} vs spectral radius {max_abs:.12g}",
        )
    )

    p = power_sums(lam, depth)
    for k in range(1, depth + 1):
        scale = float(np.sum(np.abs(lam) ** k))
        guard = 1e-9 * max(1.0, scale)
        name = "trace" if k == 1 else f"power-sum-{k}"
        results.append(
            ConditionResult(
                name=name,
                passed=p[k - 1] >= -guard,
                slack=float(p[k - 1]),
                detail=f"p_{k} = {p[k - 1]:.12g}",
            )
        )

    for m in range(2, depth + 1):
        lhs = p[0] ** m
        rhs = n ** (m - 1) * p[m - 1]
        guard = 1e-9 * max(1.0, abs(lhs), abs(rhs))
        slack = float(rhs - lhs)
        results.append(
            ConditionResult(
                name=f"jll-{m}",
                passed=slack >= -guard,
                slack=slack,
                detail=f"p_1^{m} = {lhs:.12g} vs n^{m - 1} p_{m} = {rhs:.12g}",
            )
        )
    return results


_PROOF_KIND_BY_CONDITION = {
    "perron-dominance": "PerronViolation",
    "trace": "TraceViolation",
}


def _condition_proof_kind(name: str) -> str:
    if name in _PROOF_KIND_BY_CONDITION:
        return _PROOF_KIND_BY_CONDITION[name]
    if name.startswith("power-sum-"):
        return "PowerSumViolation"
    if name.startswith("jll-"):
        return "JLLViolation"
    raise ValueError(f"unknown condition name: {name}")


def first_violation(spec: Spectrum, depth: int = 4) -> NonRealizabilityProof | None:
    """Proof object for the first violated necessary condition, if any."""
    for result in check_necessary(spec, depth):
        if not result.passed:
            return NonRealizabilityProof(
                kind=_condition_proof_kind(result.name),
                detail={
                    "condition": result.name,
                    "slack": result.slack,
                    "spectrum": list(spec.values),
                    "depth": depth,
                },
            )
    return None


# ---------------------------------------------------------------------------
# Partition prover
# ---------------------------------------------------------------------------

def _multiset(spec: Spectrum) -> tuple[tuple[float, int], ...]:
    items: list[tuple[float, int]] = []
    for v in spec.values:
        if items and items[-1][0] == v:
            items[-1] = (v, items[-1][1] + 1)
        else:
            items.append((v, 1))
    return tuple(items)


def _part_viability(part: tuple[float, ...], depth: int) -> tuple[bool, str]:
    """Can ``part`` be the spectrum of an irreducible nonnegative block?

    ``part`` is sorted non-increasing.  A 1x1 block allows any single
    nonnegative number.  A larger irreducible block needs a positive
    dominant value that is simple, strictly dominates every other
    magnitude except possibly one copy of its own negative, and clears
    the necessary battery.
    """
    if part == (0.0,):
        return True, ""
    top = part[0]
    if not top > 0.0:
        return False, "no positive dominant value"
    if part.count(top) != 1:
        return False, "dominant value is not simple"
    if -part[-1] > top:
        return False, "a magnitude exceeds the dominant value"
    if part.count(-top) > 1:
        return False, "negative of the dominant value is repeated"
    for result in check_necessary(Spectrum(part), depth):
        if not result.passed:
            return False, f"necessary condition {result.name} violated"
    return True, ""


def _subparts_of_rest(
    rest: tuple[tuple[float, int], ...],
) -> Iterable[tuple[tuple[float, int], ...]]:
    """All sub-multisets of ``rest``, lexicographic in the count vector."""
    if not rest:
        yield ()
        return
    (value, count), tail = rest[0], rest[1:]
    for sub in _subparts_of_rest(tail):
        for take in range(count + 1):
            yield ((value, take),) + sub if take else sub


def partition_prover(
    spec: Spectrum, depth: int = 4, max_size: int = 12
) -> Verdict:
    """Exhaust block partitions of the spectrum multiset.

    Tries to split the multiset into parts each of which could be the
    spectrum of an irreducible nonnegative block.  If some partition
    survives, returns Unknown (with the partition in the note); if every
    partition fails, returns NotRealizable with a PartitionExhaustion
    proof.  Never returns Realizable: a surviving partition is only a
    failure to disprove.

    Raises :class:`BudgetExceededError` when ``spec.n > max_size``; the
    caller is expected to skip exact proving in that case.
    """
    if spec.n > max_size:
        raise BudgetExceededError(
            f"partition prover budget: n={spec.n} exceeds max_size={max_size}"
        )

    part_memo: dict[tuple[float, ...], tuple[bool, str]] = {}
    state_memo: dict[tuple[tuple[float, int], ...], tuple[float, ...] | None] = {}

    def part_check(part: tuple[float, ...]) -> tuple[bool, str]:
        if part not in part_memo:
            part_memo[part] = _part_viability(part, depth)
        return part_memo[part]

    def expand(counts: tuple[tuple[float, int], ...]) -> tuple[float, ...]:
        out: list[float] = []
        for value, count in counts:
            out.extend([value] * count)
        return tuple(out)

    def search(ms: tuple[tuple[float, int], ...]):
        """First viable partition of ``ms`` as a list of parts, or None."""
        if not ms:
            return []
        if ms in state_memo:
            hit = state_memo[ms]
            return None if hit is None else hit
        # The current maximum must sit in some part as its dominant
        # element; a viable part never repeats its dominant value, so
        # exactly one copy of the max is taken (the all-zero part is the
        # one exception and only survives as a singleton anyway).
        (top, top_count), rest = ms[0], ms[1:]
        remaining_top = ((top, top_count - 1),) if top_count > 1 else ()
        for sub in _subparts_of_rest(rest):
            part = (top,) + expand(sub)
            viable, _ = part_check(part)
            if not viable:
                continue
            leftover_counts: list[tuple[float, int]] = list(remaining_top)
            taken = dict(sub)
            for value, count in rest:
                keep = count - taken.get(value, 0)
                if keep:
                    leftover_counts.append((value, keep))
            solution = search(tuple(leftover_counts))
            if solution is not None:
                found = [part] + solution
                state_memo[ms] = part
                return found
        state_memo[ms] = None
        return None

    partition = search(_multiset(spec))
    if partition is not None:
        parts_text = " | ".join(
            "(" + ", ".join(f"{v:g}" for v in part) + ")" for part in partition
        )
        return Verdict(
            tag=VerdictTag.UNKNOWN,
            note=f"viable block partition found: {parts_text}",
        )

    failed_parts = [
        {"part": list(part), "reason": reason}
        for part, (viable, reason) in sorted(part_memo.items())
        if not viable
    ]
    proof = NonRealizabilityProof(
        kind="PartitionExhaustion",
        detail={
            "spectrum": list(spec.values),
            "depth": depth,
            "parts_tested": len(part_memo),
            "failed_parts": failed_parts[:200],
        },
    )
    return Verdict(tag=VerdictTag.NOT_REALIZABLE, proof=proof)


# ---------------------------------------------------------------------------
# Companion construction
# ---------------------------------------------------------------------------

def companion_matrix(coeffs: Sequence[float] | np.ndarray) -> np.ndarray:
    """Companion matrix of ``x^n + c_1 x^(n-1) + ... + c_n``.

    Bottom-row orientation: ones on the superdiagonal, last row
    ``(-c_n, ..., -c_1)``.  Nonnegative exactly when every ``c_k <= 0``.
    """
    c = np.asarray(coeffs, dtype=float)
    if c.ndim != 1 or c.size == 0:
        raise ValueError("coefficient vector must be non-empty and one-dimensional")
    n = c.size
    C = np.zeros((n, n))
    if n > 1:
        C[np.arange(n - 1), np.arange(1, n)] = 1.0
    C[-1, :] = -c[::-1]
    return C


def companion_realizer(spec: Spectrum) -> Verdict:
    """Try the companion matrix of the spectrum's polynomial as a witness.

    Realizable when every non-leading characteristic coefficient is
    nonpositive (then the companion matrix is a nonnegative matrix with
    exactly the requested spectrum); Unknown otherwise.  This is only a
    sufficient route: a positive coefficient says nothing about other
    realizations.
    """
    coeffs = elementary_coeffs(spec)
    worst = float(np.max(coeffs))
    if worst > 0.0:
        return Verdict(
            tag=VerdictTag.UNKNOWN,
            note=f"companion not nonnegative: max coefficient {worst:.6g} > 0",
        )
    C = companion_matrix(coeffs)
    cert = RealizationCertificate(
        spectrum=spec,
        matrix=C,
        symmetric=spec.n == 1,
        residual=math.inf,
        provenance=[
            DeductionStep(
                rule=RULE_COMPANION,
                parameters={"coefficients": [float(v) for v in coeffs]},
                base=None,
            )
        ],
    )
    if not verify_certificate(cert):
        return Verdict(
            tag=VerdictTag.UNKNOWN,
            note="companion witness failed verification",
        )
    return Verdict(tag=VerdictTag.REALIZABLE, witness=cert)


def decide_exact(
    spec: Spectrum, depth: int = 4, max_size: int = 12
) -> Verdict:
    """Run the exact stack: necessary battery, companion, partition prover.

    Returns the first decisive verdict; partition budget overruns are
    treated as a skipped prover, not an error.
    """
    proof = first_violation(spec, depth)
    if proof is not None:
        return Verdict(tag=VerdictTag.NOT_REALIZABLE, proof=proof)
    companion = companion_realizer(spec)
    if companion.tag is VerdictTag.REALIZABLE:
        return companion
    try:
        verdict = partition_prover(spec, depth, max_size)
        if verdict.tag is VerdictTag.NOT_REALIZABLE:
            return verdict
        note = verdict.note
    except BudgetExceededError:
        note = f"partition prover skipped (n={spec.n} over budget)"
    return Verdict(tag=VerdictTag.UNKNOWN, note=note or companion.note)


# ---------------------------------------------------------------------------
# Matrix witnesses
# ---------------------------------------------------------------------------

def _clamp_small_negatives(A: np.ndarray) -> np.ndarray | None:
    """Zero out entries in (-clamp, 0); None if anything is more negative."""
    if float(np.min(A)) < -_NEGATIVITY_CLAMP:
        return None
    return np.where(A < 0.0, 0.0, A)


def _target_clusters(target: np.ndarray) -> list[tuple[float, int]]:
    clusters: list[tuple[float, int]] = []
    for v in target:
        if clusters and clusters[-1][0] == v:
            clusters[-1] = (v, clusters[-1][1] + 1)
        else:
            clusters.append((float(v), 1))
    return clusters


def _match_spectrum(
    eigs: np.ndarray, target: np.ndarray, tol: float, matrix_scale: float
) -> tuple[bool, float, str]:
    """Pair computed eigenvalues with target values, multiplicity-aware.

    Targets are grouped by exact equality; each computed eigenvalue is
    assigned to the nearest group value and group counts must match the
    multiplicities.  The residual is the largest |cluster mean - target|;
    cluster means of multiple eigenvalues are linearly stable even when
    the eigenvalue itself splits like eps^(1/m) for a defective block,
    which is why plain entrywise pairing is not used.  Cluster spread is
    gated by a multiplicity-aware backward-error bound so a genuinely
    different spectrum cannot hide inside a cluster.
    """
    clusters = _target_clusters(target)
    centers = np.array([c[0] for c in clusters])
    assignment = np.argmin(np.abs(eigs[:, None] - centers[None, :]), axis=1)
    counts = np.bincount(assignment, minlength=len(clusters))
    if not np.array_equal(counts, [c[1] for c in clusters]):
        # Nearest-value assignment can misroute when two distinct target
        # values nearly coincide; fall back to plain sorted pairing.
        paired = np.sort_complex(eigs)
        target_sorted = np.sort(target)
        residual = float(np.max(np.abs(paired - target_sorted)))
        if residual <= tol:
            return True, residual, ""
        return False, residual, (
            f"eigenvalue clusters do not match multiplicities and sorted "
            f"pairing misses by {residual:.3e}"
        )
    residual = 0.0
    for idx, (value, mult) in enumerate(clusters):
        members = eigs[assignment == idx]
        mean = complex(np.mean(members))
        dev = abs(mean - value)
        residual = max(residual, dev)
        if dev > tol:
            return False, residual, (
                f"cluster at {value:.12g} has mean offset {dev:.3e} > {tol:.1e}"
            )
        if mult > 1:
            spread = float(np.max(np.abs(members - mean)))
            allowed = max(tol, 10.0 * (1e-13 * matrix_scale) ** (1.0 / mult))
            if spread > allowed:
                return False, residual, (
                    f"cluster at {value:.12g} (multiplicity {mult}) has spread "
                    f"{spread:.3e} > {allowed:.3e}"
                )
    return True, residual, ""


def _matrix_realizes(
    matrix: np.ndarray,
    target: np.ndarray,
    symmetric: bool,
    tol: float,
) -> tuple[bool, float, str, np.ndarray | None]:
    """Check one stored matrix against one target spectrum.

    Returns (ok, residual, why, clamped matrix).  Combines the
    eigenvalue cluster match with an independent characteristic
    coefficient gate; the coefficient route does not suffer eigenvalue
    splitting, so the two must agree for acceptance.
    """
    try:
        A = as_square_matrix(matrix)
    except ValueError as exc:
        return False, math.inf, str(exc), None
    n = target.size
    if A.shape[0] != n:
        return False, math.inf, f"matrix is {A.shape[0]}x{A.shape[0]}, spectrum has {n}", None
    clamped = _clamp_small_negatives(A)
    if clamped is None:
        return False, math.inf, f"matrix has entry {float(np.min(A)):.3e} < -{_NEGATIVITY_CLAMP:.0e}", None
    if symmetric:
        asym = float(np.max(np.abs(A - A.T)))
        if asym > _SYMMETRY_TOL:
            return False, math.inf, f"matrix asymmetry {asym:.3e} exceeds {_SYMMETRY_TOL:.0e}", None
    try:
        eigs = eigenvalues(clamped)
    except np.linalg.LinAlgError as exc:
        return False, math.inf, f"eigensolver failed: {exc}", None
    scale = max(1.0, float(np.max(np.sum(np.abs(clamped), axis=1))))
    ok, residual, why = _match_spectrum(eigs, target, tol, scale)
    if not ok:
        return False, residual, why, None
    want = elementary_coeffs(target)
    got = char_coeffs(clamped)
    gate = tol * n * np.maximum(1.0, np.abs(want))
    coeff_err = np.abs(got - want)
    if np.any(coeff_err > gate):
        k = int(np.argmax(coeff_err - gate))
        return False, residual, (
            f"characteristic coefficient {k + 1} off by {coeff_err[k]:.3e} "
            f"(gate {gate[k]:.3e})"
        ), None
    return True, residual, "", clamped


def matrix_certificate(
    spectrum: Spectrum,
    matrix: np.ndarray,
    symmetric: bool = False,
    rule: str = RULE_DIRECT_MATRIX,
    parameters: dict[str, Any] | None = None,
    tol: float = 1e-8,
) -> RealizationCertificate:
    """Wrap an explicit witness matrix as a verified certificate.

    Raises :class:`DeductionError` if the matrix does not pass
    verification against the spectrum at tolerance ``tol``.
    """
    cert = RealizationCertificate(
        spectrum=spectrum,
        matrix=as_square_matrix(matrix),
        symmetric=symmetric,
        residual=math.inf,
        provenance=[DeductionStep(rule=rule, parameters=dict(parameters or {}), base=None)],
    )
    if not verify_certificate(cert, tol):
        raise DeductionError("witness matrix does not realize the spectrum")
    return cert


def zero_certificate(n: int) -> RealizationCertificate:
    """The n-point zero spectrum, realized by the zero matrix."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return RealizationCertificate(
        spectrum=Spectrum((0.0,) * n),
        matrix=np.zeros((n, n)),
        symmetric=True,
        residual=0.0,
        provenance=[DeductionStep(rule=RULE_ZERO_BASE, parameters={"n": n}, base=None)],
    )


# ---------------------------------------------------------------------------
# Deduction steps
# ---------------------------------------------------------------------------

def _anchor_parameters(base: RealizationCertificate) -> dict[str, Any]:
    """Data a new deduction step needs to replay from ``base``.

    If the base already replays from its own provenance (zero root or an
    earlier deduction chain) nothing is embedded; a matrix-only base has
    its witness copied into the step so the chain stays self-contained.
    """
    if any(step.rule in _DEDUCTION_RULES for step in base.provenance):
        return {}
    if base.provenance and base.provenance[0].rule == RULE_ZERO_BASE:
        return {}
    if base.matrix is None:
        raise DeductionError("base certificate has neither matrix nor deduction chain")
    return {
        "base_matrix": [[float(v) for v in row] for row in base.matrix],
        "base_symmetric": bool(base.symmetric),
    }


def corollary1_step(
    base: RealizationCertificate, epsilon: Sequence[float]
) -> RealizationCertificate:
    """Additive perturbation rule.

    Precondition: ``epsilon`` pairs slotwise with the base spectrum and
    its leading entry equals the total absolute tail perturbation,
    ``epsilon_1 = sum_{i>=2} |epsilon_i|`` (within 1e-12).  The deduced
    spectrum ``base + epsilon`` (re-sorted) is then realizable whenever
    the base is, and the returned certificate records the step.
    """
    eps = np.asarray(epsilon, dtype=float)
    lam = base.spectrum.array
    if eps.shape != lam.shape:
        raise DeductionError(
            f"epsilon has {eps.size} slots, base spectrum has {lam.size}"
        )
    required = float(np.sum(np.abs(eps[1:])))
    if abs(eps[0] - required) > 1e-12:
        raise DeductionError(
            f"leading perturbation must equal the absolute tail sum: "
            f"epsilon_1 = {eps[0]:.17g}, required {required:.17g}"
        )
    deduced = make_spectrum(lam + eps)
    params: dict[str, Any] = {
        "epsilon": [float(v) for v in eps],
        "base_spectrum": [float(v) for v in lam],
    }
    params.update(_anchor_parameters(base))
    step = DeductionStep(
        rule=RULE_COROLLARY1, parameters=params, base=spectrum_digest(base.spectrum)
    )
    return RealizationCertificate(
        spectrum=deduced,
        matrix=None,
        symmetric=False,
        residual=0.0,
        provenance=list(base.provenance) + [step],
    )


def perron_raise(
    base: RealizationCertificate,
    delta: float,
    assume_threshold: bool = False,
) -> RealizationCertificate:
    """Raise the leading slot of a certified spectrum by ``delta >= 0``.

    Self-certifying when the result satisfies
    ``lambda_1 >= sum |tail|``: such a spectrum follows from the zero
    matrix by one additive step, independent of the base.  Outside that
    cone the raise is only valid if realizability above the base is
    monotone in the leading slot, which must be requested explicitly via
    ``assume_threshold=True``; the assumption is recorded in the step.
    """
    if delta < -1e-15:
        raise DeductionError(f"delta must be nonnegative, got {delta:.3e}")
    delta = max(float(delta), 0.0)
    lam = base.spectrum.array
    result = lam.copy()
    result[0] += delta
    tail_sum = float(np.sum(np.abs(result[1:]))) if result.size > 1 else 0.0
    safe = result[0] + 1e-12 >= tail_sum
    if not safe and not assume_threshold:
        raise DeductionError(
            f"raised leading value {result[0]:.12g} stays below the absolute "
            f"tail sum {tail_sum:.12g}; pass assume_threshold=True to record "
            f"the monotonicity assumption"
        )
    params: dict[str, Any] = {
        "delta": delta,
        "base_spectrum": [float(v) for v in lam],
        "assumed_threshold": bool(not safe),
    }
    params.update(_anchor_parameters(base))
    step = DeductionStep(
        rule=RULE_PERRON_RAISE, parameters=params, base=spectrum_digest(base.spectrum)
    )
    return RealizationCertificate(
        spectrum=Spectrum(tuple(float(v) for v in result)),
        matrix=None,
        symmetric=False,
        residual=0.0,
        provenance=list(base.provenance) + [step],
    )


def reachable(
    base: RealizationCertificate,
    target: Spectrum,
    assume_threshold: bool = False,
) -> tuple[bool, RealizationCertificate | None]:
    """Is ``target`` reachable from the certified base by the two rules?

    Reachable exactly when the leading increase covers the total
    absolute tail change: ``target_1 - base_1 >= sum_{i>=2}
    |target_i - base_i|``.  When true, emits a certificate: one additive
    step, then a leading-slot raise for whatever increase is left over.
    If the leftover raise would leave the self-certifying cone and
    ``assume_threshold`` is False, returns (True, None).
    """
    lam = base.spectrum.array
    tgt = target.array
    if lam.shape != tgt.shape:
        raise DeductionError(
            f"target has {tgt.size} slots, base spectrum has {lam.size}"
        )
    tail_change = float(np.sum(np.abs(tgt[1:] - lam[1:]))) if lam.size > 1 else 0.0
    lead_change = float(tgt[0] - lam[0])
    if lead_change < tail_change - 1e-12:
        return False, None

    eps = np.concatenate([[tail_change], tgt[1:] - lam[1:]])
    intermediate = corollary1_step(base, eps)
    delta = float(tgt[0] - intermediate.spectrum[0])
    if delta <= 1e-12:
        cert = intermediate
    else:
        raised = intermediate.spectrum.array
        tail_sum = float(np.sum(np.abs(raised[1:]))) if raised.size > 1 else 0.0
        if tgt[0] + 1e-12 < tail_sum and not assume_threshold:
            return True, None
        cert = perron_raise(intermediate, delta, assume_threshold=assume_threshold)
    if float(np.max(np.abs(cert.spectrum.array - tgt))) > _REPLAY_TOL:
        raise DeductionError("deduction arithmetic drifted away from the target")
    cert.spectrum = target
    return True, cert


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------

def _replay_chain(cert: RealizationCertificate, tol: float) -> tuple[bool, str]:
    """Re-run a deduction-only certificate from its root."""
    current: np.ndarray | None = None
    for step in cert.provenance:
        if step.rule == RULE_ZERO_BASE:
            n = int(step.parameters["n"])
            current = np.zeros(n)
            continue
        if step.rule in (RULE_DIRECT_MATRIX, RULE_COMPANION):
            # Root marker; the consuming deduction step carries the
            # anchor matrix, so there is nothing to do here.
            continue
        if step.rule not in _DEDUCTION_RULES:
            return False, f"unknown deduction rule {step.rule!r}"

        base = np.asarray(step.parameters.get("base_spectrum", ()), dtype=float)
        if base.size == 0:
            return False, "deduction step lacks base_spectrum"
        if current is None:
            anchor = step.parameters.get("base_matrix")
            if anchor is None:
                return False, "deduction step has no anchored base"
            ok, _, why, _ = _matrix_realizes(
                np.asarray(anchor, dtype=float),
                base,
                bool(step.parameters.get("base_symmetric", False)),
                tol,
            )
            if not ok:
                return False, f"anchor matrix fails: {why}"
        else:
            if current.shape != base.shape or float(
                np.max(np.abs(np.sort(current)[::-1] - base))
            ) > _REPLAY_TOL:
                return False, "chain mismatch: step base differs from deduced spectrum"

        if step.rule == RULE_COROLLARY1:
            eps = np.asarray(step.parameters.get("epsilon", ()), dtype=float)
            if eps.shape != base.shape:
                return False, "epsilon shape mismatch"
            required = float(np.sum(np.abs(eps[1:])))
            if abs(eps[0] - required) > 1e-12:
                return False, (
                    f"epsilon constraint violated: leading {eps[0]:.17g}, "
                    f"required {required:.17g}"
                )
            current = np.sort(base + eps)[::-1]
        else:
            delta = float(step.parameters.get("delta", -1.0))
            if delta < 0.0:
                return False, "negative raise delta"
            result = base.copy()
            result[0] += delta
            tail_sum = float(np.sum(np.abs(result[1:]))) if result.size > 1 else 0.0
            safe = result[0] + 1e-12 >= tail_sum
            if not safe and not step.parameters.get("assumed_threshold", False):
                return False, "raise leaves the self-certifying cone without recorded assumption"
            current = result

    if current is None:
        return False, "provenance contains no deduction"
    target = cert.spectrum.array
    if current.shape != target.shape:
        return False, "deduced spectrum has wrong length"
    drift = float(np.max(np.abs(np.sort(current)[::-1] - target)))
    if drift > _REPLAY_TOL:
        return False, f"deduced spectrum differs from claim by {drift:.3e}"
    return True, ""


def verify_certificate(cert: RealizationCertificate, tol: float = 1e-8) -> bool:
    """Re-check a certificate from scratch.

    Matrix-bearing certificates are checked directly (nonnegativity
    after clamping tiny negatives, symmetry when flagged, eigenvalue
    cluster match at ``tol``, characteristic coefficient match);
    deduction-only certificates are replayed from their root.  On
    success the certificate's ``residual`` is refreshed (and a verified
    matrix has its tiny negative entries clamped in place).
    """
    if not cert.provenance:
        return False
    if cert.matrix is not None:
        ok, residual, _, clamped = _matrix_realizes(
            cert.matrix, cert.spectrum.array, cert.symmetric, tol
        )
        if ok:
            cert.residual = residual
            cert.matrix = clamped
        return ok
    ok, _ = _replay_chain(cert, tol)
    if ok:
        cert.residual = 0.0
    return ok


def verify_proof(proof: NonRealizabilityProof) -> bool:
    """Re-derive a non-realizability proof from its stored data."""
    try:
        spec = proof.spectrum()
    except (KeyError, ValueError):
        return False
    depth = int(proof.detail.get("depth", 4))
    if proof.kind == "PartitionExhaustion":
        try:
            verdict = partition_prover(spec, depth)
        except BudgetExceededError:
            return False
        return verdict.tag is VerdictTag.NOT_REALIZABLE
    condition = proof.detail.get("condition")
    for result in check_necessary(spec, depth):
        if result.name == condition:
            return (not result.passed) and _condition_proof_kind(condition) == proof.kind
    return False


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

_CERT_SCHEMA = "niep.certificate/1"
_PROOF_SCHEMA = "niep.proof/1"


def certificate_to_dict(cert: RealizationCertificate) -> dict[str, Any]:
    return {
        "schema": _CERT_SCHEMA,
        "n": cert.spectrum.n,
        "spectrum": [float(v) for v in cert.spectrum.values],
        "matrix": None
        if cert.matrix is None
        else [[float(v) for v in row] for row in cert.matrix],
        "symmetric": bool(cert.symmetric),
        "residual": float(cert.residual),
        "provenance": [
            {"rule": s.rule, "parameters": s.parameters, "base": s.base}
            for s in cert.provenance
        ],
    }


def certificate_from_dict(data: dict[str, Any]) -> RealizationCertificate:
    if data.get("schema") != _CERT_SCHEMA:
        raise ValueError(f"not a certificate payload: schema={data.get('schema')!r}")
    spectrum = Spectrum(tuple(float(v) for v in data["spectrum"]))
    matrix = data.get("matrix")
    return RealizationCertificate(
        spectrum=spectrum,
        matrix=None if matrix is None else as_square_matrix(matrix),
        symmetric=bool(data.get("symmetric", False)),
        residual=float(data.get("residual", math.inf)),
        provenance=[
            DeductionStep(
                rule=s["rule"],
                parameters=dict(s.get("parameters", {})),
                base=s.get("base"),
            )
            for s in data.get("provenance", [])
        ],
    )


def proof_to_dict(proof: NonRealizabilityProof) -> dict[str, Any]:
    return {"schema": _PROOF_SCHEMA, "kind": proof.kind, "detail": proof.detail}


def proof_from_dict(data: dict[str, Any]) -> NonRealizabilityProof:
    if data.get("schema") != _PROOF_SCHEMA:
        raise ValueError(f"not a proof payload: schema={data.get('schema')!r}")
    return NonRealizabilityProof(kind=data["kind"], detail=dict(data["detail"]))


def verdict_to_dict(verdict: Verdict) -> dict[str, Any]:
    return {
        "verdict": verdict.tag.value,
        "witness": None if verdict.witness is None else certificate_to_dict(verdict.witness),
        "proof": None if verdict.proof is None else proof_to_dict(verdict.proof),
        "note": verdict.note,
    }
