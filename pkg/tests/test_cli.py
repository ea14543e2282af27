"""Command line contract: arguments, exit codes, output payloads."""

import json
import subprocess
import sys

import pytest

from niep.cli import (
    EXIT_CONSTRAINT,
    EXIT_PARSE,
    canonical_string,
    main,
    parse_number,
    parse_values,
    _parse_range,
)
from niep.conditions import certificate_from_dict, verify_certificate
from niep.guo import estimate_from_dict

FAST = ["--restarts", "8", "--max-iters", "600"]


def _run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def _run_json(argv, capsys):
    code, out, err = _run(argv, capsys)
    return code, json.loads(out), err


def test_parse_number_forms() -> None:
    assert parse_number("7/40") == 0.175
    assert parse_number("-2") == -2.0
    assert parse_number("1e-3") == 0.001
    with pytest.raises(ValueError):
        parse_number("abc")
    with pytest.raises(ValueError):
        parse_number("1/0")


def test_parse_values_round_trip() -> None:
    vals = parse_values("3,3,-2,-2.5,-2")
    assert vals == [3.0, 3.0, -2.0, -2.5, -2.0]
    text = canonical_string(vals)
    assert parse_values(text) == vals


def test_parse_range() -> None:
    assert _parse_range("3:5:3") == [3.0, 4.0, 5.0]
    assert _parse_range("2:2:1") == [2.0]
    with pytest.raises(Exception):
        _parse_range("5:3")


def test_version(capsys) -> None:
    code, out, _ = _run(["--version"], capsys)
    assert code == 0
    assert out.strip().startswith("niep ")


def test_no_subcommand_is_a_usage_error(capsys) -> None:
    code, _, err = _run([], capsys)
    assert code == EXIT_PARSE


def test_check_exit_codes(capsys) -> None:
    code, payload, _ = _run_json(["check", "6,-2,-2,-2"], capsys)
    assert code == 0
    assert payload["verdict"]["verdict"] == "Realizable"
    assert payload["method"] == "companion"

    code, payload, _ = _run_json(["check", "3,3,-2,-2,-2"], capsys)
    assert code == 1
    assert payload["verdict"]["proof"]["kind"] == "PartitionExhaustion"

    code, payload, _ = _run_json(["check", "1,1,-3"], capsys)
    assert code == 1
    assert payload["verdict"]["proof"]["kind"] == "PerronViolation"

    code, payload, _ = _run_json(["check", "4,3,-2,-2,-2"], capsys)
    assert code == 2
    assert "--search" in payload["verdict"]["note"]


def test_check_with_search(capsys) -> None:
    code, payload, _ = _run_json(["check", "4,3,-2,-2,-2", "--search"] + FAST, capsys)
    assert code == 0
    assert payload["method"] == "search"
    cert = certificate_from_dict(payload["verdict"]["witness"])
    assert verify_certificate(cert)


def test_check_budget_exit(capsys) -> None:
    code, _, err = _run(["check", "4,3,-2,-2,-2", "--max-size", "3"], capsys)
    assert code == 65
    assert "budget" in err.lower()


def test_parse_failures_exit_64(capsys) -> None:
    assert _run(["check", "3,,2"], capsys)[0] == EXIT_PARSE
    assert _run(["check", "abc"], capsys)[0] == EXIT_PARSE
    assert _run(["scan", "t,3,-2"], capsys)[0] == EXIT_PARSE  # missing --x
    assert _run(["scan", "3,-2", "--x", "0:1:2"], capsys)[0] == EXIT_PARSE  # no free slot
    assert _run(["frobnicate"], capsys)[0] == EXIT_PARSE


def test_sentinel_allows_negative_leading_token(capsys) -> None:
    code, payload, _ = _run_json(["check", "--", "-2,-2,-2"], capsys)
    assert code == 1
    assert payload["verdict"]["proof"]["detail"]["condition"] == "perron-dominance"


def test_realize_writes_verifiable_certificate(tmp_path, capsys) -> None:
    out = tmp_path / "cert.json"
    code, _, _ = _run(["realize", "6,-2,-2,-2", "--out", str(out)] + FAST, capsys)
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["manifest"]["command"] == "realize"
    cert = certificate_from_dict(payload["certificate"])
    assert verify_certificate(cert)
    assert payload["verdict"] == "Realizable"


def test_realize_disproof_and_unknown(capsys) -> None:
    # the search pre-gate proves cheap violations on its own
    code, payload, _ = _run_json(["realize", "1,1,-3"] + FAST, capsys)
    assert code == 1
    assert payload["proof"]["kind"] == "PerronViolation"

    # but search alone cannot disprove; the partition argument lives in check
    code, payload, _ = _run_json(
        ["realize", "3,3,-2,-2,-2", "--restarts", "4", "--max-iters", "200"], capsys
    )
    assert code == 2
    assert payload["certificate"] is None
    assert payload["proof"] is None


def test_guo_payload_and_exit(capsys) -> None:
    code, payload, _ = _run_json(
        ["guo", "--resolution", "0.5"] + FAST + ["--", "3,-2,-2,-2"], capsys
    )
    assert code == 0
    est = estimate_from_dict(payload["estimate"])
    assert est.certified_lower == 3.0
    assert est.certified_upper <= 4.5
    assert verify_certificate(est.witness)


def test_guo_truncation_exit_3(capsys) -> None:
    code, payload, _ = _run_json(
        ["guo", "--resolution", "0.01", "--max-probes", "1"] + FAST + ["--", "1,-2"],
        capsys,
    )
    assert code == 3
    assert payload["estimate"]["truncated"] is True


def test_perturb_chain(tmp_path, capsys) -> None:
    base = tmp_path / "base.json"
    code, _, _ = _run(["realize", "6,-2,-2,-2", "--out", str(base)] + FAST, capsys)
    assert code == 0

    out = tmp_path / "derived.json"
    code, _, _ = _run(
        ["perturb", str(base), "1,0.5,-0.25,-0.25", "--out", str(out)], capsys
    )
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["spectrum"] == [7.0, -1.5, -2.25, -2.25]
    cert = certificate_from_dict(payload["certificate"])
    assert verify_certificate(cert)

    # wrong leading slot: must name the required value and exit 66
    code, _, err = _run(["perturb", str(base), "1,0.5,0,0"], capsys)
    assert code == EXIT_CONSTRAINT
    assert "required" in err

    code, _, err = _run(["perturb", str(base)], capsys)
    assert code == EXIT_PARSE

    code, _, err = _run(["perturb", str(tmp_path / "missing.json"), "1,-1"], capsys)
    assert code == EXIT_PARSE


def test_perturb_raise_safety(tmp_path, capsys) -> None:
    base = tmp_path / "base.json"
    code, _, _ = _run(["realize", "4,3,-2,-2,-2", "--out", str(base)] + FAST, capsys)
    assert code == 0

    # lead 4.5 would still sit below the absolute tail sum 9
    code, _, err = _run(["perturb", str(base), "--raise", "0.5"], capsys)
    assert code == EXIT_CONSTRAINT
    assert "assume" in err.lower()

    out = tmp_path / "raised.json"
    code, _, _ = _run(
        ["perturb", str(base), "--raise", "0.5", "--assume-threshold", "--out", str(out)],
        capsys,
    )
    assert code == 0
    payload = json.loads(out.read_text())
    cert = certificate_from_dict(payload["certificate"])
    assert verify_certificate(cert)
    assert cert.provenance[-1].parameters["assumed_threshold"] is True


def test_scan_rows_and_determinism(tmp_path, capsys) -> None:
    a = tmp_path / "a.csv"
    b = tmp_path / "deeper" / "b.csv"
    b.parent.mkdir()
    code, _, _ = _run(["scan", "t,3,-2,-2,-2", "--x", "3:5:3", "--out", str(a)], capsys)
    assert code == 0
    code, _, _ = _run(["scan", "t,3,-2,-2,-2", "--x", "3:5:3", "--out", str(b)], capsys)
    assert code == 0
    assert a.read_bytes() == b.read_bytes()

    lines = a.read_text().splitlines()
    assert lines[0].startswith("# manifest: ")
    assert "--out" not in lines[0]
    assert lines[1] == "x,y,verdict,method,objective"
    assert lines[2] == "3.0,,NotRealizable,partition,"
    assert lines[3] == "4.0,,Unknown,none,"
    assert lines[4] == "5.0,,Unknown,none,"

    sidecar = json.loads((tmp_path / "a.csv.manifest.json").read_text())
    assert sidecar["command"] == "scan"
    assert "started_at" in sidecar


def test_scan_two_slots_with_search(tmp_path, capsys) -> None:
    out = tmp_path / "grid.csv"
    code, _, _ = _run(
        ["scan", "s,t,-2,-2", "--x", "5:6:2", "--y=-1:0:2", "--search", "--out", str(out)]
        + FAST,
        capsys,
    )
    assert code == 0
    rows = [l.split(",") for l in out.read_text().splitlines()[2:]]
    assert len(rows) == 4
    assert all(r[2] in ("Realizable", "NotRealizable", "Unknown") for r in rows)
    # lead 5 or 6 over a tail bounded by 5 in absolute sum: all realizable
    assert all(r[2] == "Realizable" for r in rows)


def test_lift_segment(capsys) -> None:
    code, payload, _ = _run_json(
        ["lift", "6,-2,-2,-2", "5,-1.5,-1.5,-2", "--steps", "3"] + FAST, capsys
    )
    assert code == 0
    assert payload["failed_index"] is None
    assert len(payload["certificates"]) == 3
    for cert_payload in payload["certificates"]:
        assert verify_certificate(certificate_from_dict(cert_payload))


def test_lift_nonpositive_tail_to_its_tight_endpoint(capsys) -> None:
    # the endpoint lead equals the absolute tail sum, the additive
    # deduction bound, and the companion construction certifies it
    code, payload, _ = _run_json(
        ["lift", "9,-2,-2,-2", "6,-2,-2,-2", "--steps", "10"] + FAST, capsys
    )
    assert code == 0
    assert payload["failed_index"] is None
    assert len(payload["certificates"]) == 10
    last = certificate_from_dict(payload["certificates"][-1])
    assert verify_certificate(last)
    assert last.spectrum.values == (6.0, -2.0, -2.0, -2.0)


def test_lift_reports_failure(capsys) -> None:
    code, payload, _ = _run_json(
        ["lift", "6,-2,-2,-2", "3,-2.9,-2.9,-2.9", "--steps", "4", "--restarts", "4"],
        capsys,
    )
    assert code == 2
    assert payload["failed_index"] is not None


def test_example1_skip_search(capsys) -> None:
    code, out, _ = _run(["example1", "--skip-search"], capsys)
    assert code == 0
    assert "step 1 (prove non-realizability): ok" in out
    assert "search skipped" in out


def test_console_script_subprocess() -> None:
    proc = subprocess.run(
        ["niep", "check", "3,3,-2,-2,-2"], capture_output=True, text=True, timeout=30
    )
    assert proc.returncode == 1
    payload = json.loads(proc.stdout)
    assert payload["verdict"]["verdict"] == "NotRealizable"
