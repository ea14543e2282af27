"""Necessary conditions, the partition prover, and certificates."""

import numpy as np
import pytest

from niep.conditions import (
    BudgetExceededError,
    DeductionError,
    VerdictTag,
    certificate_from_dict,
    certificate_to_dict,
    check_necessary,
    companion_matrix,
    companion_realizer,
    corollary1_step,
    decide_exact,
    first_violation,
    matrix_certificate,
    partition_prover,
    perron_raise,
    proof_from_dict,
    proof_to_dict,
    reachable,
    verify_certificate,
    verify_proof,
    zero_certificate,
)
from niep.spectra import make_spectrum


def test_necessary_battery_names_and_count() -> None:
    results = check_necessary(make_spectrum([4, 3, -2, -2, -2]), depth=4)
    names = [r.name for r in results]
    assert names == [
        "perron-dominance",
        "trace",
        "power-sum-2",
        "power-sum-3",
        "power-sum-4",
        "jll-2",
        "jll-3",
        "jll-4",
    ]
    assert all(r.passed for r in results)


def test_perron_violation() -> None:
    proof = first_violation(make_spectrum([1, 1, -3]))
    assert proof is not None and proof.kind == "PerronViolation"
    assert verify_proof(proof)


def test_trace_violation() -> None:
    proof = first_violation(make_spectrum([2, -1, -1.5]))
    assert proof is not None and proof.kind == "TraceViolation"
    assert verify_proof(proof)


def test_power_sum_violation() -> None:
    # p_1 = 0 but the two large negatives dominate the cubes
    spec = make_spectrum([3, 0.7, 0.7, 0.7, 0.7, -2.9, -2.9])
    proof = first_violation(spec)
    assert proof is not None and proof.kind == "PowerSumViolation"
    assert proof.detail["condition"] == "power-sum-3"
    assert verify_proof(proof)


def test_roundoff_guard_tolerates_eigenvalue_noise() -> None:
    # spectra of actual symmetric nonnegative matrices must never trip
    rng = np.random.default_rng(17)
    for _ in range(50):
        n = int(rng.integers(2, 8))
        B = rng.uniform(0.0, 1.0, (n, n))
        lam = np.linalg.eigvalsh(0.5 * (B + B.T))
        assert first_violation(make_spectrum(lam)) is None


def test_partition_prover_disproves_double_perron() -> None:
    verdict = partition_prover(make_spectrum([3, 3, -2, -2, -2]))
    assert verdict.tag is VerdictTag.NOT_REALIZABLE
    assert verdict.proof is not None
    assert verdict.proof.kind == "PartitionExhaustion"
    assert verdict.proof.detail["parts_tested"] >= 1
    assert verify_proof(verdict.proof)


def test_partition_prover_unknown_above_double_root() -> None:
    # below the true threshold yet beyond what moments can see
    verdict = partition_prover(make_spectrum([3.3, 3, -2, -2, -2]))
    assert verdict.tag is VerdictTag.UNKNOWN


def test_partition_prover_budget() -> None:
    spec = make_spectrum([1.0] * 13)
    with pytest.raises(BudgetExceededError):
        partition_prover(spec, max_size=12)


def test_partition_prover_accepts_zero_blocks() -> None:
    assert partition_prover(make_spectrum([0.0, 0.0, 0.0])).tag is VerdictTag.UNKNOWN


def test_partition_prover_keeps_viable_pair() -> None:
    # (1,-1) is realized by the swap matrix; the single block is viable
    assert partition_prover(make_spectrum([1.0, -1.0])).tag is VerdictTag.UNKNOWN


def test_companion_realizer_nonpositive_coefficients() -> None:
    verdict = companion_realizer(make_spectrum([5, -1, -1, -1, -1, -1]))
    assert verdict.tag is VerdictTag.REALIZABLE
    cert = verdict.witness
    assert cert is not None and verify_certificate(cert)
    assert float(np.min(cert.matrix)) >= 0.0


def test_companion_realizer_triple_root_cluster() -> None:
    # (x-6)(x+2)^3 has a defective companion; verification must pass
    verdict = companion_realizer(make_spectrum([6, -2, -2, -2]))
    assert verdict.tag is VerdictTag.REALIZABLE
    assert verdict.witness.residual <= 1e-8


def test_companion_realizer_declines_positive_coefficient() -> None:
    # a_4 = +88 here, so the companion matrix is not nonnegative
    verdict = companion_realizer(make_spectrum([4, 3, -2, -2, -2]))
    assert verdict.tag is VerdictTag.UNKNOWN


def test_companion_matrix_orientation() -> None:
    C = companion_matrix(np.array([-1.0, -6.0]))
    # char poly x^2 - x - 6 = (x-3)(x+2)
    vals = np.sort(np.linalg.eigvals(C).real)
    assert np.allclose(vals, [-2.0, 3.0], atol=1e-12)


def test_decide_exact_dispatch() -> None:
    assert decide_exact(make_spectrum([1, 1, -3])).tag is VerdictTag.NOT_REALIZABLE
    assert decide_exact(make_spectrum([6, -2, -2, -2])).tag is VerdictTag.REALIZABLE
    assert decide_exact(make_spectrum([3, 3, -2, -2, -2])).tag is VerdictTag.NOT_REALIZABLE
    assert decide_exact(make_spectrum([4, 3, -2, -2, -2])).tag is VerdictTag.UNKNOWN


def test_matrix_certificate_rejects_negative_entries() -> None:
    with pytest.raises(DeductionError):
        matrix_certificate(make_spectrum([3, 1, -2]), np.diag([3.0, 1.0, -2.0]))


def test_matrix_certificate_diagonal() -> None:
    cert = matrix_certificate(make_spectrum([3, 2, 1]), np.diag([1.0, 3.0, 2.0]))
    assert verify_certificate(cert)
    assert cert.residual <= 1e-10


def test_tampered_matrix_fails_verification() -> None:
    cert = matrix_certificate(make_spectrum([3, 2, 1]), np.diag([3.0, 2.0, 1.0]))
    cert.matrix[0, 0] = 2.5
    assert not verify_certificate(cert)


def test_tampered_spectrum_fails_verification() -> None:
    cert = matrix_certificate(make_spectrum([3, 2, 1]), np.diag([3.0, 2.0, 1.0]))
    cert.spectrum = make_spectrum([3, 2, 0.5])
    assert not verify_certificate(cert)


def test_corollary1_step_constraint() -> None:
    base = zero_certificate(4)
    cert = corollary1_step(base, [6.0, -2.0, -2.0, -2.0])
    assert cert.spectrum.values == (6.0, -2.0, -2.0, -2.0)
    assert not cert.symmetric
    assert verify_certificate(cert)
    with pytest.raises(DeductionError):
        corollary1_step(base, [1.0, -2.0, 0.0, 0.0])
    with pytest.raises(DeductionError):
        corollary1_step(base, [1.0, -2.0])


def test_corollary1_chain_replays() -> None:
    cert = corollary1_step(zero_certificate(3), [3.0, -1.0, -2.0])
    cert = corollary1_step(cert, [1.0, 0.5, -0.5])
    assert cert.spectrum.values == (4.0, -0.5, -2.5)
    assert verify_certificate(cert)
    # tampering with a recorded step must break the replay
    cert.provenance[-1].parameters["epsilon"][0] = 2.0
    assert not verify_certificate(cert)


def test_perron_raise_safety() -> None:
    base = corollary1_step(zero_certificate(4), [6.0, -2.0, -2.0, -2.0])
    raised = perron_raise(base, 1.0)
    assert raised.spectrum.values == (7.0, -2.0, -2.0, -2.0)
    assert verify_certificate(raised)
    with pytest.raises(DeductionError):
        perron_raise(base, -0.5)


def test_perron_raise_needs_assumption_below_tail_sum() -> None:
    # use a genuine matrix witness whose lead sits below the tail mass
    from niep.search import SearchConfig, find_realization

    res = find_realization(make_spectrum([4, 3, -2, -2, -2]), SearchConfig(restarts=8))
    assert res.verdict.tag is VerdictTag.REALIZABLE
    base = res.verdict.witness
    with pytest.raises(DeductionError):
        perron_raise(base, 0.5)
    raised = perron_raise(base, 0.5, assume_threshold=True)
    assert raised.provenance[-1].parameters["assumed_threshold"] is True
    assert verify_certificate(raised)


def test_reachable_gate() -> None:
    base = corollary1_step(zero_certificate(3), [4.0, -2.0, -2.0])
    ok, cert = reachable(base, make_spectrum([5.0, -2.5, -2.5]))
    assert ok and cert is not None
    assert cert.spectrum.values == (5.0, -2.5, -2.5)
    assert verify_certificate(cert)
    ok2, cert2 = reachable(base, make_spectrum([4.1, -2.5, -2.5]))
    assert not ok2 and cert2 is None


def test_certificate_round_trip_matrix() -> None:
    cert = matrix_certificate(make_spectrum([3, 2, 1]), np.diag([3.0, 2.0, 1.0]))
    back = certificate_from_dict(certificate_to_dict(cert))
    assert back.spectrum.values == cert.spectrum.values
    assert np.array_equal(back.matrix, cert.matrix)
    assert verify_certificate(back)


def test_certificate_round_trip_deduction() -> None:
    cert = perron_raise(
        corollary1_step(zero_certificate(4), [6.0, -2.0, -2.0, -2.0]), 2.0
    )
    back = certificate_from_dict(certificate_to_dict(cert))
    assert back.spectrum.values == cert.spectrum.values
    assert len(back.provenance) == len(cert.provenance)
    assert verify_certificate(back)


def test_proof_round_trip() -> None:
    proof = first_violation(make_spectrum([1, 1, -3]))
    back = proof_from_dict(proof_to_dict(proof))
    assert back.kind == proof.kind
    assert verify_proof(back)
    verdict = partition_prover(make_spectrum([3, 3, -2, -2, -2]))
    back2 = proof_from_dict(proof_to_dict(verdict.proof))
    assert verify_proof(back2)
