"""Threshold estimation for the leading slot over a fixed tail.

For a fixed tail of n-1 real values, the object of interest is the
threshold g(tail): above it every leading value yields a realizable
spectrum, below it none of the certified machinery can succeed.  The
estimator brackets that threshold between

* a certified lower bound: the closed form
  ``max(max|tail_i|, -sum(tail_i), 0)`` (dominance and trace force it),
  raised further only by exact disproofs at probe points (a violated
  necessary condition or partition exhaustion at t proves t <= g by the
  threshold property), and
* a certified upper bound: the smallest leading value carrying an
  actual realizability certificate.  ``sum |tail_i|`` always works for
  the general class via one additive deduction from the zero matrix, so
  the general bracket starts finite; the symmetric bracket starts at
  the first leading value where symmetric search succeeds.

Between the two edges runs a bisection whose probes are decided by the
exact stack first and numerical search last.  Search failures move only
the heuristic edge of the bracket, never the certified bounds.

The audits turn single estimates into families: ``lipschitz_audit``
enforces the 1-Lipschitz transfer bound ``g(x) <= g(y) + |x - y|_1``
across a family of general estimates (tightening any estimate that
violates it, with a transferred certificate as evidence), and
``closedness_audit`` checks a convergent sequence of certified spectra
against its limit.  There is no certified transfer rule for the
symmetric class, so symmetric estimates are never tightened.
"""

from __future__ import annotations

import copy
import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .conditions import (
    BudgetExceededError,
    RealizationCertificate,
    Verdict,
    VerdictTag,
    certificate_from_dict,
    certificate_to_dict,
    companion_realizer,
    corollary1_step,
    decide_exact,
    first_violation,
    partition_prover,
    perron_raise,
    verify_certificate,
    zero_certificate,
)
from .search import SearchConfig, find_realization, find_symmetric_realization
from .spectra import Spectrum, Tail, l1_distance, make_tail

__all__ = [
    "ProbeRecord",
    "GuoEstimate",
    "LipschitzReport",
    "ClosednessReport",
    "certified_bounds",
    "estimate_g",
    "estimate_gs",
    "lipschitz_audit",
    "closedness_audit",
    "estimate_to_dict",
    "estimate_from_dict",
]


@dataclass
class ProbeRecord:
    """One tested leading value during estimation."""

    t: float
    verdict: str
    objective: float
    method: str


@dataclass
class GuoEstimate:
    """Two-sided threshold estimate for one tail.

    ``certified_lower <= g <= certified_upper`` with evidence: the lower
    bound is closed-form plus exact disproofs, the upper bound carries
    ``witness``.  ``bracket`` is the raw bisection state (heuristic fail
    edge, certified success edge); its upper edge equals
    ``certified_upper``, its lower edge is merely the largest tested
    failure and certifies nothing.
    """

    tail: Tail
    symmetric: bool
    certified_lower: float
    certified_upper: float
    bracket: tuple[float, float]
    resolution: float
    witness: RealizationCertificate | None
    probes: list[ProbeRecord] = field(default_factory=list)
    truncated: bool = False
    notes: list[str] = field(default_factory=list)


@dataclass
class LipschitzReport:
    """Outcome of enforcing the transfer bound across estimates."""

    pre_modulus: float
    post_modulus: float
    max_violation: float
    passed: bool
    transfers: list[dict[str, Any]]
    estimates: list[GuoEstimate]


@dataclass
class ClosednessReport:
    """Outcome of auditing a convergent certified sequence."""

    gaps: list[float]
    all_verified: bool
    limit_verdict: Verdict
    transfer_upper: float
    transfer_witness: RealizationCertificate | None
    closed_form_lower: float
    consistent: bool
    notes: list[str] = field(default_factory=list)


def _closed_form_lower(tail: Tail) -> float:
    lam = tail.array
    return float(max(np.max(np.abs(lam)), -np.sum(lam), 0.0))


def _abs_sum(tail: Tail) -> float:
    return float(np.sum(np.abs(tail.array)))


def _general_start_witness(t: float, tail: Tail) -> RealizationCertificate:
    """Deduction certificate for (t, tail) when ``t >= sum |tail|``.

    One additive step from the zero matrix lands on (sum|tail|, tail);
    a leading-slot raise (safe inside this cone) covers the rest.
    """
    n = tail.n + 1
    base = zero_certificate(n)
    s_abs = _abs_sum(tail)
    eps = np.concatenate([[s_abs], tail.array])
    cert = corollary1_step(base, eps)
    delta = float(t) - float(cert.spectrum[0])
    if delta > 0.0:
        cert = perron_raise(cert, delta)
    return cert


def certified_bounds(
    tail: Tail, symmetric: bool = False, config: SearchConfig | None = None
) -> tuple[float, float]:
    """Certified starting bracket for the threshold of ``tail``.

    General class: closed forms on both sides, no search.  Symmetric
    class: the lower bound is the same closed form, while the upper
    bound is the first leading value (growing from ``sum |tail|``) where
    symmetric search produces a certificate; ``inf`` when the expansion
    budget runs out.
    """
    lower = _closed_form_lower(tail)
    if not symmetric:
        return lower, _abs_sum(tail)
    upper, _, _, _ = _symmetric_upper_start(tail, config or SearchConfig())
    return lower, upper


def _symmetric_upper_start(
    tail: Tail, cfg: SearchConfig
) -> tuple[float, RealizationCertificate | None, list[ProbeRecord], tuple[str, np.ndarray] | None]:
    s_abs = _abs_sum(tail)
    cap = max(10.0 * s_abs, 10.0)
    t = s_abs
    probes: list[ProbeRecord] = []
    while t <= cap:
        res = find_symmetric_realization(tail.with_leading(t), cfg)
        probes.append(
            ProbeRecord(
                t=float(t),
                verdict=res.verdict.tag.value,
                objective=res.best_objective,
                method="expansion",
            )
        )
        if res.verdict.tag is VerdictTag.REALIZABLE:
            warm = None if res.parameters is None else (res.mode, res.parameters)
            return float(t), res.verdict.witness, probes, warm
        t = 1.5 * t if t > 0.0 else 1.0
    return math.inf, None, probes, None


def _estimate(
    tail: Tail,
    symmetric: bool,
    cfg: SearchConfig,
    resolution: float,
    max_probes: int,
    lower_floor: float | None,
) -> GuoEstimate:
    if resolution <= 0.0:
        raise ValueError("resolution must be positive")
    if max_probes < 1:
        raise ValueError("max_probes must be at least 1")
    notes: list[str] = []
    probes: list[ProbeRecord] = []
    lower = _closed_form_lower(tail)
    certified_lower = lower
    if lower_floor is not None and lower_floor > certified_lower:
        certified_lower = float(lower_floor)
        notes.append(
            f"lower bound inherited from general-class estimate: {lower_floor:.12g}"
        )

    if symmetric:
        upper, witness, probes, warm = _symmetric_upper_start(tail, cfg)
        if not math.isfinite(upper):
            notes.append("symmetric expansion found no certificate; estimate truncated")
            return GuoEstimate(
                tail=tail,
                symmetric=True,
                certified_lower=certified_lower,
                certified_upper=math.inf,
                bracket=(certified_lower, math.inf),
                resolution=resolution,
                witness=None,
                probes=probes,
                truncated=True,
                notes=notes,
            )
    else:
        upper = _abs_sum(tail)
        witness = _general_start_witness(upper, tail)
        warm = None

    lo = certified_lower
    hi = float(upper)
    if hi <= lo:
        # Exact collapse: the closed-form bounds already coincide.
        return GuoEstimate(
            tail=tail,
            symmetric=symmetric,
            certified_lower=certified_lower,
            certified_upper=hi if hi > lo else lo,
            bracket=(lo, hi if hi > lo else lo),
            resolution=resolution,
            witness=witness,
            probes=probes,
            truncated=False,
            notes=notes,
        )

    while hi - lo > resolution and len(probes) < max_probes:
        t = 0.5 * (lo + hi)
        spec = tail.with_leading(t)

        proof = first_violation(spec, cfg.depth)
        if proof is not None:
            certified_lower = max(certified_lower, t)
            lo = t
            probes.append(ProbeRecord(t, "NotRealizable", math.nan, "necessary"))
            continue
        try:
            prover = partition_prover(spec, cfg.depth)
        except BudgetExceededError:
            prover = None
        if prover is not None and prover.tag is VerdictTag.NOT_REALIZABLE:
            certified_lower = max(certified_lower, t)
            lo = t
            probes.append(ProbeRecord(t, "NotRealizable", math.nan, "partition"))
            continue

        if not symmetric:
            companion = companion_realizer(spec)
            if companion.tag is VerdictTag.REALIZABLE:
                hi = t
                witness = companion.witness
                warm = None
                probes.append(ProbeRecord(t, "Realizable", math.nan, "companion"))
                continue
            res = find_realization(spec, cfg, warm_start=warm)
        else:
            res = find_symmetric_realization(spec, cfg, warm_start=warm)
        if res.verdict.tag is VerdictTag.REALIZABLE:
            hi = t
            witness = res.verdict.witness
            if res.parameters is not None:
                warm = (res.mode, res.parameters)
            probes.append(ProbeRecord(t, "Realizable", res.best_objective, "search"))
        else:
            lo = t
            probes.append(ProbeRecord(t, "Unknown", res.best_objective, "search"))

    truncated = hi - lo > resolution
    if truncated:
        notes.append(
            f"probe budget ({max_probes}) exhausted with bracket width {hi - lo:.6g}"
        )
    if certified_lower > lower:
        notes.append(
            f"exact disproofs raised the certified lower bound from {lower:.12g} "
            f"to {certified_lower:.12g}"
        )
    return GuoEstimate(
        tail=tail,
        symmetric=symmetric,
        certified_lower=certified_lower,
        certified_upper=hi,
        bracket=(lo, hi),
        resolution=resolution,
        witness=witness,
        probes=probes,
        truncated=truncated,
        notes=notes,
    )


def estimate_g(
    tail: Tail,
    config: SearchConfig | None = None,
    resolution: float = 0.01,
    neighbors: Sequence[GuoEstimate] = (),
    max_probes: int = 200,
) -> GuoEstimate:
    """Bracket the general-class threshold of ``tail`` to ``resolution``.

    ``neighbors`` are previously computed general estimates for other
    tails; each is offered as a Lipschitz transfer source and can only
    tighten the certified upper bound (with a transferred certificate).
    Deterministic for a fixed config seed.
    """
    cfg = config or SearchConfig()
    cfg.validate()
    est = _estimate(tail, False, cfg, resolution, max_probes, None)
    for nb in neighbors:
        if nb.symmetric:
            raise ValueError("symmetric estimates cannot transfer to a general estimate")
        if nb.witness is None or not math.isfinite(nb.certified_upper):
            continue
        dist = l1_distance(nb.tail, tail)
        if nb.certified_upper + dist < est.certified_upper - 1e-15:
            new_upper, cert = _transfer_witness(nb, tail)
            if new_upper < est.certified_upper:
                est.notes.append(
                    f"upper bound tightened by transfer from tail {list(nb.tail.values)}: "
                    f"{est.certified_upper:.12g} -> {new_upper:.12g}"
                )
                est.certified_upper = new_upper
                est.witness = cert
                est.bracket = (min(est.bracket[0], new_upper), new_upper)
    return est


def estimate_gs(
    tail: Tail,
    config: SearchConfig | None = None,
    resolution: float = 0.01,
    general_estimate: GuoEstimate | None = None,
    max_probes: int = 200,
) -> GuoEstimate:
    """Bracket the symmetric-class threshold of ``tail``.

    The symmetric threshold dominates the general one, so a general
    estimate for the same tail can seed the certified lower bound.  All
    upper-bound movement comes from symmetric search certificates; there
    is no deduction shortcut in the symmetric class.
    """
    cfg = config or SearchConfig()
    cfg.validate()
    floor = None
    if general_estimate is not None:
        if general_estimate.symmetric:
            raise ValueError("general_estimate must be a general-class estimate")
        if tuple(general_estimate.tail.values) != tuple(tail.values):
            raise ValueError("general_estimate is for a different tail")
        floor = general_estimate.certified_lower
    return _estimate(tail, True, cfg, resolution, max_probes, floor)


def _transfer_witness(
    src: GuoEstimate, dst_tail: Tail
) -> tuple[float, RealizationCertificate]:
    """Certificate for ``(src_upper + l1 gap, dst_tail)`` by one additive step.

    The perturbation pairs the two tails slot by slot in their stored
    order, then routes through the sorted slots of the witness spectrum.
    """
    if src.witness is None:
        raise ValueError("source estimate has no witness")
    s = src.tail.array
    d = dst_tail.array
    if s.shape != d.shape:
        raise ValueError("tails must have equal length")
    diffs = d - s
    order = np.argsort(-s, kind="stable")
    eps_tail = diffs[order]
    base_tail = src.witness.spectrum.array[1:]
    if not np.array_equal(base_tail, s[order]):
        raise ValueError("witness spectrum does not match the source tail")
    eps0 = float(np.sum(np.abs(eps_tail)))
    eps = np.concatenate([[eps0], eps_tail])
    cert = corollary1_step(src.witness, eps)
    return float(src.witness.spectrum[0] + eps0), cert


def lipschitz_audit(estimates: Sequence[GuoEstimate]) -> LipschitzReport:
    """Enforce ``u_j <= u_i + |tail_i - tail_j|_1`` across general estimates.

    Reports the worst pre-tightening modulus ``|u_i - u_j| / d_ij``,
    relaxes every violated pair by transferring certificates (shortest
    path style, to a fixed point), verifies each transferred witness,
    and reports the post state.  Raises on symmetric estimates (no
    certified transfer rule) and on mixed resolutions or tail lengths.
    """
    ests = list(estimates)
    if len(ests) < 2:
        raise ValueError("need at least two estimates to audit")
    if any(e.symmetric for e in ests):
        raise ValueError("symmetric estimates have no certified transfer rule")
    res0 = ests[0].resolution
    n0 = ests[0].tail.n
    for e in ests:
        if e.resolution != res0:
            raise ValueError(
                f"resolution mismatch: {e.resolution} vs {res0}"
            )
        if e.tail.n != n0:
            raise ValueError("tail length mismatch")
        if not math.isfinite(e.certified_upper):
            raise ValueError("cannot audit a truncated estimate without an upper bound")

    ests = [copy.deepcopy(e) for e in ests]
    k = len(ests)
    dist = np.zeros((k, k))
    for i in range(k):
        for j in range(i + 1, k):
            dist[i, j] = dist[j, i] = l1_distance(ests[i].tail, ests[j].tail)

    def modulus() -> float:
        worst = 0.0
        for i in range(k):
            for j in range(k):
                if i == j:
                    continue
                gap = ests[j].certified_upper - ests[i].certified_upper
                if dist[i, j] > 0.0:
                    worst = max(worst, abs(gap) / dist[i, j])
                elif abs(gap) > 1e-12:
                    worst = math.inf
        return worst

    pre_modulus = modulus()
    transfers: list[dict[str, Any]] = []
    for _ in range(k):
        changed = False
        for j in range(k):
            for i in range(k):
                if i == j:
                    continue
                cand = ests[i].certified_upper + dist[i, j]
                # a transfer may land on the lower bound (bracket of width
                # zero) but never below it; below would mean one of the two
                # certified bounds is wrong, and the violation must stand
                if cand < ests[j].certified_upper - 1e-15 and cand >= ests[j].certified_lower - 1e-12:
                    new_upper, cert = _transfer_witness(ests[i], ests[j].tail)
                    if new_upper >= ests[j].certified_upper:
                        continue
                    if not verify_certificate(cert):
                        raise RuntimeError("transferred certificate failed verification")
                    transfers.append(
                        {
                            "to": j,
                            "from": i,
                            "old_upper": ests[j].certified_upper,
                            "new_upper": new_upper,
                        }
                    )
                    ests[j].certified_upper = new_upper
                    ests[j].witness = cert
                    ests[j].bracket = (min(ests[j].bracket[0], new_upper), new_upper)
                    ests[j].notes.append(
                        f"upper bound tightened by audit transfer: {new_upper:.12g}"
                    )
                    changed = True
        if not changed:
            break

    max_violation = 0.0
    for i in range(k):
        for j in range(k):
            if i != j:
                max_violation = max(
                    max_violation,
                    ests[j].certified_upper - (ests[i].certified_upper + dist[i, j]),
                )
    return LipschitzReport(
        pre_modulus=pre_modulus,
        post_modulus=modulus(),
        max_violation=max_violation,
        passed=max_violation <= 1e-12,
        transfers=transfers,
        estimates=ests,
    )


def closedness_audit(
    certificates: Sequence[RealizationCertificate],
    limit: Spectrum,
    config: SearchConfig | None = None,
    convergence_tol: float = 0.5,
) -> ClosednessReport:
    """Audit a convergent sequence of certified spectra against its limit.

    Re-verifies every certificate, requires the l1 gaps to the limit to
    come down below ``convergence_tol`` without growing overall (raises
    ValueError otherwise), certifies the limit itself (exact stack, then
    search), and reports the best transferred upper bound for the
    limit tail's threshold together with its witness.
    """
    if not certificates:
        raise ValueError("certificate list must be non-empty")
    cfg = config or SearchConfig()
    notes: list[str] = []

    all_verified = True
    for idx, cert in enumerate(certificates):
        if cert.spectrum.n != limit.n:
            raise ValueError(f"certificate {idx} has wrong dimension")
        if not verify_certificate(cert, cfg.certificate_tol):
            all_verified = False
            notes.append(f"certificate {idx} failed re-verification")

    gaps = [l1_distance(c.spectrum, limit) for c in certificates]
    if min(gaps) > convergence_tol or gaps[-1] > gaps[0] + 1e-12:
        raise ValueError(
            f"sequence does not converge to the limit: gaps {gaps[0]:.6g} .. "
            f"{gaps[-1]:.6g} vs tolerance {convergence_tol:.6g}"
        )

    limit_verdict = decide_exact(limit, cfg.depth)
    if limit_verdict.tag is VerdictTag.UNKNOWN:
        res = find_realization(limit, cfg)
        limit_verdict = res.verdict

    limit_tail = make_tail(limit.values[1:])
    closed_form_lower = _closed_form_lower(limit_tail)
    best_upper = math.inf
    best_cert: RealizationCertificate | None = None
    for cert in certificates:
        lead = float(cert.spectrum[0])
        tail_gap = float(
            np.sum(np.abs(cert.spectrum.array[1:] - limit.array[1:]))
        )
        cand = lead + tail_gap
        if cand < best_upper:
            eps = np.concatenate([[tail_gap], limit.array[1:] - cert.spectrum.array[1:]])
            best_cert = corollary1_step(cert, eps)
            best_upper = float(best_cert.spectrum[0])
    if limit_verdict.tag is VerdictTag.REALIZABLE and float(limit[0]) < best_upper:
        best_upper = float(limit[0])
        best_cert = limit_verdict.witness
        notes.append("limit's own certificate provides the best threshold bound")

    consistent = (
        all_verified
        and limit_verdict.tag is VerdictTag.REALIZABLE
        and best_upper >= closed_form_lower - 1e-12
        and float(limit[0]) >= closed_form_lower - 1e-12
    )
    return ClosednessReport(
        gaps=gaps,
        all_verified=all_verified,
        limit_verdict=limit_verdict,
        transfer_upper=best_upper,
        transfer_witness=best_cert,
        closed_form_lower=closed_form_lower,
        consistent=consistent,
        notes=notes,
    )


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

_ESTIMATE_SCHEMA = "niep.guo/1"


def _finite_or_none(v: float) -> float | None:
    return float(v) if math.isfinite(v) else None


def estimate_to_dict(est: GuoEstimate) -> dict[str, Any]:
    return {
        "schema": _ESTIMATE_SCHEMA,
        "tail": [float(v) for v in est.tail.values],
        "symmetric": bool(est.symmetric),
        "certified_lower": float(est.certified_lower),
        "certified_upper": _finite_or_none(est.certified_upper),
        "bracket": [_finite_or_none(est.bracket[0]), _finite_or_none(est.bracket[1])],
        "resolution": float(est.resolution),
        "truncated": bool(est.truncated),
        "witness": None if est.witness is None else certificate_to_dict(est.witness),
        "probes": [
            {
                "t": p.t,
                "verdict": p.verdict,
                "objective": None if math.isnan(p.objective) else p.objective,
                "method": p.method,
            }
            for p in est.probes
        ],
        "notes": list(est.notes),
    }


def estimate_from_dict(data: dict[str, Any]) -> GuoEstimate:
    if data.get("schema") != _ESTIMATE_SCHEMA:
        raise ValueError(f"not an estimate payload: schema={data.get('schema')!r}")

    def back(v: float | None) -> float:
        return math.inf if v is None else float(v)

    return GuoEstimate(
        tail=make_tail(data["tail"]),
        symmetric=bool(data["symmetric"]),
        certified_lower=float(data["certified_lower"]),
        certified_upper=back(data.get("certified_upper")),
        bracket=(back(data["bracket"][0]), back(data["bracket"][1])),
        resolution=float(data["resolution"]),
        witness=None
        if data.get("witness") is None
        else certificate_from_dict(data["witness"]),
        probes=[
            ProbeRecord(
                t=float(p["t"]),
                verdict=str(p["verdict"]),
                objective=math.nan if p.get("objective") is None else float(p["objective"]),
                method=str(p["method"]),
            )
            for p in data.get("probes", [])
        ],
        truncated=bool(data.get("truncated", False)),
        notes=list(data.get("notes", [])),
    )
