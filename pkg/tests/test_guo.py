"""Threshold estimation, transfer audits, serialization."""

import copy
import math

import numpy as np
import pytest

from niep.conditions import VerdictTag, verify_certificate
from niep.guo import (
    GuoEstimate,
    certified_bounds,
    closedness_audit,
    corollary1_step,
    estimate_from_dict,
    estimate_g,
    estimate_gs,
    estimate_to_dict,
    lipschitz_audit,
    zero_certificate,
)
from niep.search import SearchConfig
from niep.spectra import make_spectrum, make_tail

FAST = SearchConfig(restarts=8, max_iters=600, rng_seed=0)


def test_collapse_exact_for_nonpositive_tails() -> None:
    rng = np.random.default_rng(11)
    for _ in range(20):
        k = int(rng.integers(1, 8))
        tail = make_tail(rng.uniform(-10.0, 0.0, k))
        est = estimate_g(tail, FAST)
        s_abs = float(np.sum(np.abs(tail.array)))
        assert est.certified_lower == s_abs
        assert est.certified_upper == s_abs
        assert est.probes == []
        assert not est.truncated
        assert est.witness is not None and verify_certificate(est.witness)


def test_certified_bounds_closed_forms() -> None:
    assert certified_bounds(make_tail([1, -2])) == (2.0, 3.0)
    assert certified_bounds(make_tail([-2, -2, -2])) == (6.0, 6.0)
    lo, hi = certified_bounds(make_tail([-1]), symmetric=True, config=FAST)
    assert lo == 1.0 and hi == 1.0


def test_estimate_g_brackets_double_root_tail() -> None:
    est = estimate_g(make_tail([3, -2, -2, -2]), FAST, resolution=0.5)
    assert est.certified_lower == 3.0
    assert est.certified_upper <= 4.5
    assert est.bracket[1] - est.bracket[0] <= 0.5
    assert not est.truncated
    assert est.witness is not None and verify_certificate(est.witness)
    assert est.certified_upper == est.bracket[1]


def test_estimate_g_nonneg_tail_hits_dominance_edge() -> None:
    est = estimate_g(make_tail([2, 1]), FAST, resolution=0.25)
    assert est.certified_lower == 2.0
    assert est.certified_upper <= 2.25
    assert all(p.verdict in ("Realizable", "Unknown") for p in est.probes)


def test_estimate_g_validates_arguments() -> None:
    with pytest.raises(ValueError):
        estimate_g(make_tail([-1]), FAST, resolution=0.0)
    with pytest.raises(ValueError):
        estimate_g(make_tail([-1]), FAST, max_probes=0)


def test_estimate_g_truncates_on_budget() -> None:
    est = estimate_g(make_tail([3, -2, -2, -2]), FAST, resolution=0.01, max_probes=1)
    assert est.truncated
    assert len(est.probes) == 1
    assert est.bracket[1] - est.bracket[0] > 0.01
    assert any("budget" in note for note in est.notes)


def test_estimate_gs_collapse_with_expansion_probe() -> None:
    est = estimate_gs(make_tail([-1]), FAST)
    assert est.symmetric
    assert est.certified_lower == 1.0
    assert est.certified_upper == 1.0
    assert [p.method for p in est.probes] == ["expansion"]
    cert = est.witness
    assert cert is not None and cert.symmetric and verify_certificate(cert)


def test_estimate_gs_floor_from_general() -> None:
    tail = make_tail([2, 1])
    floor = GuoEstimate(
        tail=tail,
        symmetric=False,
        certified_lower=2.6,
        certified_upper=3.0,
        bracket=(2.6, 3.0),
        resolution=0.25,
        witness=None,
    )
    est = estimate_gs(tail, FAST, resolution=0.25, general_estimate=floor)
    assert est.certified_lower == 2.6
    assert any("inherited" in note for note in est.notes)
    assert est.certified_upper >= 2.6


def test_estimate_gs_rejects_wrong_seed_estimate() -> None:
    tail = make_tail([2, 1])
    sym = estimate_gs(tail, FAST, resolution=0.5)
    with pytest.raises(ValueError):
        estimate_gs(tail, FAST, general_estimate=sym)
    other = estimate_g(make_tail([-1, -1, -1]), FAST)
    with pytest.raises(ValueError):
        estimate_gs(tail, FAST, general_estimate=other)


def test_neighbor_transfer_tightens_coarse_estimate() -> None:
    # a budget-starved estimate accepts a bound routed from a close tail
    coarse = estimate_g(make_tail([1, -2]), FAST, resolution=0.05, max_probes=1)
    fine = estimate_g(make_tail([1, -2.01]), FAST, resolution=0.01)
    est = estimate_g(
        make_tail([1, -2]), FAST, resolution=0.05, max_probes=1, neighbors=[fine]
    )
    assert est.certified_upper < coarse.certified_upper
    assert est.certified_upper <= fine.certified_upper + 0.01 + 1e-12
    assert est.witness is not None and verify_certificate(est.witness)
    assert any("transfer" in note for note in est.notes)


def test_neighbor_must_be_general() -> None:
    sym = estimate_gs(make_tail([-1]), FAST)
    with pytest.raises(ValueError):
        estimate_g(make_tail([-1]), FAST, neighbors=[sym])


def test_lipschitz_audit_passes_on_collapsed_pair() -> None:
    a = estimate_g(make_tail([-2, -1]), FAST)
    b = estimate_g(make_tail([-2.2, -1.1]), FAST)
    report = lipschitz_audit([a, b])
    assert report.passed
    assert report.pre_modulus <= 1.0 + 1e-12
    assert report.max_violation <= 1e-12
    assert report.transfers == []


def test_lipschitz_audit_repairs_forced_violation() -> None:
    a = estimate_g(make_tail([-2, -1]), FAST)
    b = estimate_g(make_tail([-2.2, -1.1]), FAST)
    loose = copy.deepcopy(b)
    loose.certified_upper += 0.4
    loose.bracket = (loose.bracket[0], loose.certified_upper)
    report = lipschitz_audit([a, loose])
    assert report.passed
    assert len(report.transfers) == 1
    fixed = report.estimates[1]
    assert fixed.certified_upper == pytest.approx(3.0 + 0.3, abs=1e-12)
    assert verify_certificate(fixed.witness)
    # inputs are not mutated in place
    assert loose.certified_upper == pytest.approx(3.3 + 0.4, abs=1e-12)


def test_lipschitz_audit_refusals() -> None:
    a = estimate_g(make_tail([-2, -1]), FAST)
    b = estimate_g(make_tail([-2.2, -1.1]), FAST)
    with pytest.raises(ValueError):
        lipschitz_audit([a])
    sym = estimate_gs(make_tail([-1]), FAST)
    sym2 = estimate_gs(make_tail([-1.5]), FAST)
    with pytest.raises(ValueError, match="no certified transfer rule"):
        lipschitz_audit([sym, sym2])
    odd = copy.deepcopy(b)
    odd.resolution = 0.5
    with pytest.raises(ValueError, match="resolution"):
        lipschitz_audit([a, odd])
    short = estimate_g(make_tail([-3]), FAST)
    with pytest.raises(ValueError, match="length"):
        lipschitz_audit([a, short])
    cut = copy.deepcopy(b)
    cut.certified_upper = math.inf
    with pytest.raises(ValueError, match="truncated"):
        lipschitz_audit([a, cut])


def _deduction_cert(values):
    spec = make_spectrum(values)
    eps = np.concatenate([[float(np.sum(np.abs(spec.array[1:])))], spec.array[1:]])
    cert = corollary1_step(zero_certificate(spec.n), eps)
    if spec[0] > cert.spectrum[0]:
        from niep.conditions import perron_raise

        cert = perron_raise(cert, float(spec[0] - cert.spectrum[0]))
    return cert


def test_closedness_audit_accepts_convergent_family() -> None:
    certs = [
        _deduction_cert([6 + 3.0 / k, -2 - 1.0 / k, -2 - 1.0 / k, -2 - 1.0 / k])
        for k in (2, 4, 8, 16)
    ]
    limit = make_spectrum([6, -2, -2, -2])
    report = closedness_audit(certs, limit, FAST)
    assert report.all_verified
    assert report.limit_verdict.tag is VerdictTag.REALIZABLE
    assert report.consistent
    assert report.gaps == pytest.approx([3.0, 1.5, 0.75, 0.375])
    assert report.closed_form_lower == 6.0
    assert report.transfer_upper == 6.0
    assert verify_certificate(report.transfer_witness)
    assert any("limit's own certificate" in n for n in report.notes)


def test_closedness_audit_transfer_bound_without_limit_shortcut() -> None:
    # limit below the deduction cone: transfer bound comes from the family
    certs = [
        _deduction_cert([9 + 1.0 / k, -2 - 1.0 / k, -3, -4])
        for k in (4, 8, 16)
    ]
    limit = make_spectrum([9, -2, -3, -4])
    report = closedness_audit(certs, limit, FAST)
    assert report.all_verified
    assert report.transfer_upper == pytest.approx(9.0, abs=0.2)
    assert report.transfer_upper >= report.closed_form_lower - 1e-12
    assert verify_certificate(report.transfer_witness)


def test_closedness_audit_rejections() -> None:
    certs = [
        _deduction_cert([6 + 3.0 / k, -2 - 1.0 / k, -2 - 1.0 / k, -2 - 1.0 / k])
        for k in (2, 4, 8, 16)
    ]
    limit = make_spectrum([6, -2, -2, -2])
    with pytest.raises(ValueError):
        closedness_audit([], limit, FAST)
    with pytest.raises(ValueError, match="converge"):
        closedness_audit(list(reversed(certs)), limit, FAST)
    with pytest.raises(ValueError, match="converge"):
        closedness_audit(certs[:1], limit, FAST, convergence_tol=0.5)
    with pytest.raises(ValueError, match="dimension"):
        closedness_audit(certs, make_spectrum([6, -2, -2]), FAST)


def test_estimate_round_trip() -> None:
    est = estimate_g(make_tail([1, -2]), FAST, resolution=0.25)
    back = estimate_from_dict(estimate_to_dict(est))
    assert back.tail.values == est.tail.values
    assert back.certified_lower == est.certified_lower
    assert back.certified_upper == est.certified_upper
    assert back.bracket == est.bracket
    assert back.resolution == est.resolution
    assert back.symmetric == est.symmetric
    assert len(back.probes) == len(est.probes)
    assert verify_certificate(back.witness)


def test_estimate_round_trip_truncated_infinite() -> None:
    est = GuoEstimate(
        tail=make_tail([-1, -1]),
        symmetric=True,
        certified_lower=2.0,
        certified_upper=math.inf,
        bracket=(2.0, math.inf),
        resolution=0.01,
        witness=None,
        truncated=True,
        notes=["symmetric expansion found no certificate; estimate truncated"],
    )
    payload = estimate_to_dict(est)
    assert payload["certified_upper"] is None
    back = estimate_from_dict(payload)
    assert math.isinf(back.certified_upper)
    assert math.isinf(back.bracket[1])
    assert back.truncated


def test_estimate_from_dict_rejects_foreign_payload() -> None:
    with pytest.raises(ValueError, match="schema"):
        estimate_from_dict({"schema": "other/9"})
