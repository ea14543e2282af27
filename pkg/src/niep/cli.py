"""Command line front end: checks, searches, thresholds, scans, reports.

Exit code contract, shared by every subcommand:

* 0    Realizable, or normal completion
* 1    NotRealizable
* 2    Unknown at the given budget (no proof either way)
* 3    guo only: probe budget exhausted before the bracket closed
* 64   usage or parse failure
* 65   budget or configuration failure
* 66   perturb only: a deduction constraint was violated
* 20+i example1 only: pipeline step i failed

Spectra and tails are comma separated reals ("4,3,-2,-2,-2"); tokens
may be simple fractions ("7/40"); a bare "--" keeps a leading negative
away from the flag parser ("niep guo -- -2,-2,-2").  All randomness
derives from --seed, and every output embeds a run manifest.  Scan CSV
output is byte reproducible for a fixed command line; its manifest
comment line therefore omits timestamps, which live in the sidecar
manifest written next to --out.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from typing import Any, Sequence

import numpy as np

from . import __version__
from .conditions import (
    BudgetExceededError,
    DeductionError,
    RealizationCertificate,
    Verdict,
    VerdictTag,
    certificate_from_dict,
    certificate_to_dict,
    companion_realizer,
    corollary1_step,
    first_violation,
    partition_prover,
    perron_raise,
    proof_to_dict,
    verdict_to_dict,
    verify_certificate,
)
from .manifest import RunManifest, atomic_write_json, atomic_write_text, file_digest
from .spectra import Spectrum, Tail, make_spectrum, make_tail

EXIT_REALIZABLE = 0
EXIT_NOT_REALIZABLE = 1
EXIT_UNKNOWN = 2
EXIT_TRUNCATED = 3
EXIT_PARSE = 64
EXIT_CONFIG = 65
EXIT_CONSTRAINT = 66
EXIT_EXAMPLE1_BASE = 20

_TAG_EXIT = {
    VerdictTag.REALIZABLE: EXIT_REALIZABLE,
    VerdictTag.NOT_REALIZABLE: EXIT_NOT_REALIZABLE,
    VerdictTag.UNKNOWN: EXIT_UNKNOWN,
}


class CliError(Exception):
    """Carries an exit code and a message for the user."""

    def __init__(self, code: int, message: str) -> None:
        super().__init__(message)
        self.code = code
        self.message = message


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> Any:  # noqa: ANN401 (argparse contract)
        self.print_usage(sys.stderr)
        raise CliError(EXIT_PARSE, f"{self.prog}: {message}")


# ---------------------------------------------------------------------------
# Value parsing
# ---------------------------------------------------------------------------

def parse_number(token: str) -> float:
    """One real number; simple fractions like 7/40 are accepted."""
    token = token.strip()
    if "/" in token:
        num, _, den = token.partition("/")
        d = float(den)
        if d == 0.0:
            raise ValueError(f"zero denominator in {token!r}")
        return float(num) / d
    return float(token)


def parse_values(text: str) -> list[float]:
    tokens = [t.strip() for t in text.split(",")]
    # an empty slot is a typo, not a shorter list
    if not tokens or any(t == "" for t in tokens):
        raise ValueError(f"bad value list {text!r}")
    return [parse_number(t) for t in tokens]


def canonical_string(values: Sequence[float]) -> str:
    """Shortest round-trip text form; parsing it back is the identity."""
    return ",".join(repr(float(v)) for v in values)


def _spectrum_arg(text: str) -> Spectrum:
    try:
        return make_spectrum(parse_values(text))
    except ValueError as exc:
        raise CliError(EXIT_PARSE, f"bad spectrum {text!r}: {exc}") from None


def _tail_arg(text: str) -> Tail:
    try:
        return make_tail(parse_values(text))
    except ValueError as exc:
        raise CliError(EXIT_PARSE, f"bad tail {text!r}: {exc}") from None


def _parse_range(text: str) -> list[float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise CliError(EXIT_PARSE, f"range must be LO:HI:STEPS, got {text!r}")
    try:
        lo, hi = parse_number(parts[0]), parse_number(parts[1])
        steps = int(parts[2])
    except ValueError as exc:
        raise CliError(EXIT_PARSE, f"bad range {text!r}: {exc}") from None
    if steps < 1:
        raise CliError(EXIT_PARSE, "range needs at least one step")
    if lo == hi:
        return [lo]
    if steps < 2:
        raise CliError(EXIT_PARSE, "a non-degenerate range needs at least two steps")
    return [float(v) for v in np.linspace(lo, hi, steps)]


# ---------------------------------------------------------------------------
# Shared plumbing
# ---------------------------------------------------------------------------

def _search_config(args: argparse.Namespace) -> "Any":
    from .search import SearchConfig

    cfg = SearchConfig(
        restarts=args.restarts,
        max_iters=args.max_iters,
        rng_seed=args.seed,
        certificate_tol=args.tol,
        depth=args.depth,
    )
    try:
        cfg.validate()
    except ValueError as exc:
        raise CliError(EXIT_CONFIG, f"bad configuration: {exc}") from None
    return cfg


def _manifest(args: argparse.Namespace, command: str, parameters: dict[str, Any]) -> RunManifest:
    manifest = RunManifest(
        command=command,
        argv=list(getattr(args, "_argv", [])),
        parameters=parameters,
        seed=getattr(args, "seed", None),
    )
    manifest.start()
    return manifest


def _emit(payload: dict[str, Any], out: str | None) -> None:
    if out:
        atomic_write_json(out, payload)
    else:
        print(json.dumps(payload, indent=2, sort_keys=True))


def _exact_stage(
    spec: Spectrum,
    depth: int,
    max_size: int,
    symmetric: bool,
    budget_is_error: bool,
) -> tuple[Verdict | None, str]:
    """Necessary battery, companion, partition, in that order.

    The companion witness is skipped for the symmetric class (it is not
    a symmetric matrix).  Budget overruns either raise CliError(65) or
    report an undecided stage, depending on the caller.
    """
    proof = first_violation(spec, depth)
    if proof is not None:
        return Verdict(tag=VerdictTag.NOT_REALIZABLE, proof=proof), "necessary"
    if not symmetric:
        companion = companion_realizer(spec)
        if companion.tag is VerdictTag.REALIZABLE:
            return companion, "companion"
    try:
        verdict = partition_prover(spec, depth, max_size)
    except BudgetExceededError as exc:
        if budget_is_error:
            raise CliError(EXIT_CONFIG, str(exc)) from None
        return None, "budget"
    if verdict.tag is VerdictTag.NOT_REALIZABLE:
        return verdict, "partition"
    return None, ""


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def _cmd_check(args: argparse.Namespace) -> int:
    spec = _spectrum_arg(args.spectrum)
    manifest = _manifest(
        args,
        "check",
        {
            "spectrum": list(spec.values),
            "symmetric": args.symmetric,
            "search": args.search,
            "depth": args.depth,
            "max_size": args.max_size,
        },
    )
    t0 = time.perf_counter()
    verdict, method = _exact_stage(
        spec, args.depth, args.max_size, args.symmetric, budget_is_error=True
    )
    search_stats: dict[str, Any] | None = None
    if verdict is None and args.search:
        from .search import find_realization, find_symmetric_realization

        cfg = _search_config(args)
        run = find_symmetric_realization(spec, cfg) if args.symmetric else find_realization(spec, cfg)
        verdict, method = run.verdict, "search"
        search_stats = {
            "best_objective": run.best_objective,
            "restarts_used": run.restarts_used,
            "iterations": run.iterations,
        }
    if verdict is None:
        note = "exact stack undecided"
        if not args.search:
            note += "; pass --search to look for a numerical witness"
        verdict, method = Verdict(tag=VerdictTag.UNKNOWN, note=note), "none"
    manifest.duration_seconds = time.perf_counter() - t0
    payload = {
        "manifest": manifest.to_dict(),
        "spectrum": list(spec.values),
        "class": "symmetric" if args.symmetric else "general",
        "method": method,
        "verdict": verdict_to_dict(verdict),
    }
    if search_stats is not None:
        payload["search"] = search_stats
    _emit(payload, args.out)
    return _TAG_EXIT[verdict.tag]


def _cmd_realize(args: argparse.Namespace) -> int:
    spec = _spectrum_arg(args.spectrum)
    cfg = _search_config(args)
    manifest = _manifest(
        args,
        "realize",
        {
            "spectrum": list(spec.values),
            "symmetric": args.symmetric,
            "restarts": cfg.restarts,
            "max_iters": cfg.max_iters,
            "tol": cfg.certificate_tol,
        },
    )
    from .search import find_realization, find_symmetric_realization

    t0 = time.perf_counter()
    run = find_symmetric_realization(spec, cfg) if args.symmetric else find_realization(spec, cfg)
    manifest.duration_seconds = time.perf_counter() - t0
    verdict = run.verdict
    payload = {
        "manifest": manifest.to_dict(),
        "spectrum": list(spec.values),
        "class": "symmetric" if args.symmetric else "general",
        "verdict": verdict.tag.value,
        "search": {
            "best_objective": run.best_objective,
            "restarts_used": run.restarts_used,
            "iterations": run.iterations,
            "wall_time": run.wall_time,
        },
        "certificate": None
        if verdict.witness is None
        else certificate_to_dict(verdict.witness),
        "proof": None if verdict.proof is None else proof_to_dict(verdict.proof),
        "note": verdict.note,
    }
    _emit(payload, args.out)
    return _TAG_EXIT[verdict.tag]


def _cmd_guo(args: argparse.Namespace) -> int:
    tail = _tail_arg(args.tail)
    if args.resolution <= 0.0:
        raise CliError(EXIT_CONFIG, "resolution must be positive")
    if args.max_probes < 1:
        raise CliError(EXIT_CONFIG, "max-probes must be at least 1")
    cfg = _search_config(args)
    manifest = _manifest(
        args,
        "guo",
        {
            "tail": list(tail.values),
            "symmetric": args.symmetric,
            "resolution": args.resolution,
            "max_probes": args.max_probes,
            "restarts": cfg.restarts,
        },
    )
    from .guo import estimate_g, estimate_gs, estimate_to_dict

    t0 = time.perf_counter()
    if args.symmetric:
        est = estimate_gs(tail, cfg, args.resolution, max_probes=args.max_probes)
    else:
        est = estimate_g(tail, cfg, args.resolution, max_probes=args.max_probes)
    manifest.duration_seconds = time.perf_counter() - t0
    payload = {"manifest": manifest.to_dict(), "estimate": estimate_to_dict(est)}
    _emit(payload, args.out)
    return EXIT_TRUNCATED if est.truncated else 0


def _load_certificate(path: str) -> RealizationCertificate:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(EXIT_PARSE, f"cannot read certificate file {path!r}: {exc}") from None
    if isinstance(data, dict) and "certificate" in data and data["certificate"] is not None:
        data = data["certificate"]
    try:
        return certificate_from_dict(data)
    except (ValueError, KeyError, TypeError) as exc:
        raise CliError(EXIT_PARSE, f"bad certificate payload: {exc}") from None


def _cmd_perturb(args: argparse.Namespace) -> int:
    if args.epsilons is None and args.raise_delta is None:
        raise CliError(EXIT_PARSE, "nothing to do: pass EPSILONS and/or --raise DELTA")
    cert = _load_certificate(args.certificate)
    if not verify_certificate(cert, args.tol):
        raise CliError(EXIT_PARSE, "base certificate failed verification")
    manifest = _manifest(
        args,
        "perturb",
        {
            "base_spectrum": list(cert.spectrum.values),
            "epsilons": args.epsilons,
            "raise_delta": args.raise_delta,
            "assume_threshold": args.assume_threshold,
        },
    )
    manifest.input_digests[args.certificate] = file_digest(args.certificate)
    t0 = time.perf_counter()
    try:
        if args.epsilons is not None:
            eps = parse_values(args.epsilons)
            cert = corollary1_step(cert, eps)
        if args.raise_delta is not None:
            cert = perron_raise(cert, args.raise_delta, args.assume_threshold)
    except DeductionError as exc:
        raise CliError(EXIT_CONSTRAINT, f"deduction rejected: {exc}") from None
    except ValueError as exc:
        raise CliError(EXIT_PARSE, f"bad epsilons: {exc}") from None
    if not verify_certificate(cert, args.tol):
        raise CliError(EXIT_CONSTRAINT, "derived certificate failed verification")
    manifest.duration_seconds = time.perf_counter() - t0
    payload = {
        "manifest": manifest.to_dict(),
        "spectrum": list(cert.spectrum.values),
        "certificate": certificate_to_dict(cert),
    }
    _emit(payload, args.out)
    return 0


def _cmd_scan(args: argparse.Namespace) -> int:
    tokens = [t.strip() for t in args.template.split(",") if t.strip()]
    if not tokens:
        raise CliError(EXIT_PARSE, "empty template")
    slots: list[float | None] = []
    free_names: list[str] = []
    for tok in tokens:
        try:
            slots.append(parse_number(tok))
        except ValueError:
            slots.append(None)
            free_names.append(tok)
    if len(free_names) not in (1, 2):
        raise CliError(
            EXIT_PARSE,
            f"template must leave one or two slots free, found {len(free_names)}",
        )
    if args.x is None:
        raise CliError(EXIT_PARSE, "--x LO:HI:STEPS is required")
    xs = _parse_range(args.x)
    ys: list[float] | None = None
    if len(free_names) == 2:
        if args.y is None:
            raise CliError(EXIT_PARSE, "--y LO:HI:STEPS is required for two free slots")
        ys = _parse_range(args.y)
    elif args.y is not None:
        raise CliError(EXIT_PARSE, "--y given but the template has only one free slot")

    manifest = _manifest(
        args,
        "scan",
        {
            "template": tokens,
            "free": free_names,
            "x": args.x,
            "y": args.y,
            "search": args.search,
            "symmetric": args.symmetric,
            "depth": args.depth,
            "max_size": args.max_size,
            "restarts": args.restarts,
        },
    )
    cfg = _search_config(args) if args.search else None
    if args.search:
        from .search import find_realization, find_symmetric_realization

    warm: tuple[str, Any] | None = None

    def classify(values: list[float]) -> tuple[str, str, str]:
        nonlocal warm
        try:
            spec = make_spectrum(values)
        except ValueError:
            return "Unknown", "invalid", ""
        verdict, method = _exact_stage(
            spec, args.depth, args.max_size, args.symmetric, budget_is_error=False
        )
        if verdict is not None:
            return verdict.tag.value, method, ""
        if method == "budget":
            return "Unknown", "budget", ""
        if cfg is None:
            return "Unknown", "none", ""
        run = (
            find_symmetric_realization(spec, cfg, warm_start=warm)
            if args.symmetric
            else find_realization(spec, cfg, warm_start=warm)
        )
        if run.parameters is not None:
            warm = (run.mode, run.parameters)
        return run.verdict.tag.value, "search", repr(float(run.best_objective))

    # The CSV must be byte reproducible for a fixed scientific command,
    # so the embedded manifest drops the output path.
    core = manifest.deterministic_core()
    argv_clean: list[str] = []
    skip = False
    for tok in core["argv"]:
        if skip:
            skip = False
            continue
        if tok == "--out":
            skip = True
            continue
        if tok.startswith("--out="):
            continue
        argv_clean.append(tok)
    core["argv"] = argv_clean

    t0 = time.perf_counter()
    lines = [
        "# manifest: " + json.dumps(core, sort_keys=True),
        "x,y,verdict,method,objective",
    ]
    free_positions = [i for i, s in enumerate(slots) if s is None]
    for xv in xs:
        for yv in ys if ys is not None else [None]:
            values = [v for v in slots]
            values[free_positions[0]] = xv
            if yv is not None:
                values[free_positions[1]] = yv
            tag, method, objective = classify([float(v) for v in values])
            ytxt = "" if yv is None else repr(float(yv))
            lines.append(f"{repr(float(xv))},{ytxt},{tag},{method},{objective}")
    manifest.duration_seconds = time.perf_counter() - t0
    text = "\n".join(lines) + "\n"
    if args.out:
        atomic_write_text(args.out, text)
        atomic_write_json(args.out + ".manifest.json", manifest.to_dict())
    else:
        sys.stdout.write(text)
    return 0


def _cmd_lift(args: argparse.Namespace) -> int:
    try:
        start = parse_values(args.start)
        end = parse_values(args.end)
    except ValueError as exc:
        raise CliError(EXIT_PARSE, f"bad endpoint: {exc}") from None
    if len(start) != len(end):
        raise CliError(EXIT_PARSE, "endpoints must have equal length")
    if args.steps < 2:
        raise CliError(EXIT_PARSE, "need at least two steps")
    a, b = np.asarray(start, dtype=float), np.asarray(end, dtype=float)
    try:
        samples = [
            make_spectrum((1.0 - th) * a + th * b)
            for th in np.linspace(0.0, 1.0, args.steps)
        ]
    except ValueError as exc:
        raise CliError(EXIT_PARSE, f"bad interpolated spectrum: {exc}") from None
    cfg = _search_config(args)
    manifest = _manifest(
        args,
        "lift",
        {
            "start": start,
            "end": end,
            "steps": args.steps,
            "symmetric": args.symmetric,
            "compare_cold": args.compare_cold,
            "restarts": cfg.restarts,
        },
    )
    from .search import curve_lift

    t0 = time.perf_counter()
    try:
        result = curve_lift(
            samples, cfg, symmetric=args.symmetric, compare_cold=args.compare_cold
        )
    except ValueError as exc:
        raise CliError(EXIT_CONFIG, f"lift rejected: {exc}") from None
    manifest.duration_seconds = time.perf_counter() - t0
    payload = {
        "manifest": manifest.to_dict(),
        "samples": [list(s.values) for s in samples],
        "failed_index": result.failed_index,
        "max_jump": result.max_jump,
        "total_iterations": result.total_iterations,
        "cold_iterations": result.cold_iterations,
        "notes": result.notes,
        "certificates": [certificate_to_dict(c) for c in result.certificates],
    }
    _emit(payload, args.out)
    return 0 if result.failed_index is None else EXIT_UNKNOWN


def _cmd_example1(args: argparse.Namespace) -> int:
    cfg = _search_config(args)
    manifest = _manifest(
        args,
        "example1",
        {
            "k": args.k,
            "resolution": args.resolution,
            "max_probes": args.max_probes,
            "restarts": cfg.restarts,
            "skip_search": args.skip_search,
        },
    )
    t0 = time.perf_counter()
    lam = make_spectrum((3.0, 3.0, -2.0, -2.0, -2.0))
    tail = make_tail((3.0, -2.0, -2.0, -2.0))
    lines: list[str] = []
    steps: list[dict[str, Any]] = []
    artifacts: dict[str, Any] = {}

    def record(index: int, name: str, ok: bool, detail: str) -> None:
        steps.append({"index": index, "name": name, "ok": ok, "detail": detail})
        lines.append(f"step {index} ({name}): {'ok' if ok else 'FAILED'}; {detail}")

    def finish(code: int) -> int:
        manifest.duration_seconds = time.perf_counter() - t0
        report = "\n".join(lines) + "\n"
        sys.stdout.write(report)
        if args.out:
            atomic_write_json(
                args.out,
                {
                    "manifest": manifest.to_dict(),
                    "steps": steps,
                    "artifacts": artifacts,
                    "report": lines,
                },
            )
        return code

    # Step 1: the double Perron root makes (3,3,-2,-2,-2) non-realizable;
    # the partition prover certifies that by exhaustion.
    try:
        verdict = partition_prover(lam, cfg.depth)
    except BudgetExceededError as exc:
        record(1, "prove non-realizability", False, str(exc))
        return finish(EXIT_EXAMPLE1_BASE + 1)
    if verdict.tag is not VerdictTag.NOT_REALIZABLE or verdict.proof is None:
        record(1, "prove non-realizability", False, f"prover returned {verdict.tag.value}")
        return finish(EXIT_EXAMPLE1_BASE + 1)
    detail = verdict.proof.detail
    record(
        1,
        "prove non-realizability",
        True,
        f"(3,3,-2,-2,-2) is not realizable; {detail.get('parts_tested', '?')} "
        f"candidate blocks exhausted (certified)",
    )
    artifacts["non_realizability_proof"] = proof_to_dict(verdict.proof)

    from .guo import certified_bounds

    lower0, upper0 = certified_bounds(tail)
    lines.append(
        f"closed-form threshold bounds for tail (3,-2,-2,-2): "
        f"[{lower0:.6g}, {upper0:.6g}] (certified)"
    )
    if args.skip_search:
        lines.append("search skipped; steps 2 to 6 omitted")
        return finish(0)

    from .search import find_realization, find_symmetric_realization
    from .guo import estimate_g, estimate_gs, estimate_to_dict

    # Step 2: both certificates at the known-good spectrum (4,3,-2,-2,-2).
    spec4 = make_spectrum((4.0, 3.0, -2.0, -2.0, -2.0))
    gen = find_realization(spec4, cfg)
    sym = find_symmetric_realization(spec4, cfg)
    ok = (
        gen.verdict.tag is VerdictTag.REALIZABLE
        and sym.verdict.tag is VerdictTag.REALIZABLE
    )
    if not ok:
        record(
            2,
            "certify (4,3,-2,-2,-2)",
            False,
            f"general={gen.verdict.tag.value}, symmetric={sym.verdict.tag.value}",
        )
        return finish(EXIT_EXAMPLE1_BASE + 2)
    record(
        2,
        "certify (4,3,-2,-2,-2)",
        True,
        f"general residual {gen.verdict.witness.residual:.2e}, "
        f"symmetric residual {sym.verdict.witness.residual:.2e} (both certified)",
    )
    artifacts["general_certificate"] = certificate_to_dict(gen.verdict.witness)
    artifacts["symmetric_certificate"] = certificate_to_dict(sym.verdict.witness)

    # Step 3: bracket the general threshold and extract t-hat.
    g_est = estimate_g(tail, cfg, args.resolution, max_probes=args.max_probes)
    t_hat = g_est.certified_upper - 3.0
    if not (g_est.certified_upper < 4.0 and 0.0 < t_hat < 1.0):
        record(
            3,
            "bracket general threshold",
            False,
            f"certified upper {g_est.certified_upper:.6g} not inside (3,4)",
        )
        return finish(EXIT_EXAMPLE1_BASE + 3)
    record(
        3,
        "bracket general threshold",
        True,
        f"g bracket [{g_est.certified_lower:.6g}, {g_est.certified_upper:.6g}] "
        f"(lower and upper certified); minimal certified t-hat = {t_hat:.6g} < 1; "
        f"(3+t-hat,3,-2,-2,-2) carries a verified witness",
    )
    artifacts["g_estimate"] = estimate_to_dict(g_est)

    # Step 4: bracket the symmetric threshold near 4.
    gs_est = estimate_gs(
        tail, cfg, args.resolution, general_estimate=g_est, max_probes=args.max_probes
    )
    if not math.isfinite(gs_est.certified_upper):
        record(4, "bracket symmetric threshold", False, "no symmetric certificate found")
        return finish(EXIT_EXAMPLE1_BASE + 4)
    record(
        4,
        "bracket symmetric threshold",
        True,
        f"g_s certified upper {gs_est.certified_upper:.6g}; certified lower "
        f"{gs_est.certified_lower:.6g}; heuristic fail edge {gs_est.bracket[0]:.6g} "
        f"(symmetric search failures are not proofs)",
    )
    artifacts["gs_estimate"] = estimate_to_dict(gs_est)

    # Step 5: perturb the threshold witness into a pairwise-distinct
    # certified spectrum whose dominant entry stays below 4.
    k = args.k
    perron = 3.0 + t_hat + 7.0 / k
    if not perron < 4.0:
        record(
            5,
            "build distinct certified spectrum",
            False,
            f"3 + t-hat + 7/k = {perron:.6g} is not below 4; raise --k",
        )
        return finish(EXIT_EXAMPLE1_BASE + 5)
    if g_est.witness is None:
        record(5, "build distinct certified spectrum", False, "threshold witness missing")
        return finish(EXIT_EXAMPLE1_BASE + 5)
    eps = [7.0 / k, 1.0 / k, 1.0 / k, 2.0 / k, 3.0 / k]
    try:
        sigma_cert = corollary1_step(g_est.witness, eps)
    except DeductionError as exc:
        record(5, "build distinct certified spectrum", False, str(exc))
        return finish(EXIT_EXAMPLE1_BASE + 5)
    sigma = sigma_cert.spectrum
    gaps = np.diff(np.asarray(sigma.values))
    distinct = bool(np.all(gaps < 0.0))
    verified = verify_certificate(sigma_cert, cfg.certificate_tol)
    if not (distinct and verified and sigma[0] < 4.0):
        record(
            5,
            "build distinct certified spectrum",
            False,
            f"distinct={distinct}, verified={verified}, perron={sigma[0]:.6g}",
        )
        return finish(EXIT_EXAMPLE1_BASE + 5)
    record(
        5,
        "build distinct certified spectrum",
        True,
        f"sigma = ({canonical_string(sigma.values)}) certified realizable "
        f"(deduction from the threshold witness); entries pairwise distinct; "
        f"dominant entry {sigma[0]:.6g} < 4",
    )
    artifacts["sigma_certificate"] = certificate_to_dict(sigma_cert)
    lines.append(
        "note: the perturbed tail is also consistent with the sign variant "
        f"(3+1/k, -2+1/k, -2-2/k, -2+3/k); both perturbations carry l1 mass 7/k "
        f"and the constructed sigma uses (+1/k, +1/k, +2/k, +3/k)"
    )

    # Step 6: heuristic evidence that sigma has no symmetric witness.
    sym_sigma = find_symmetric_realization(sigma, cfg)
    found = sym_sigma.verdict.tag is VerdictTag.REALIZABLE
    margin = gs_est.bracket[0] - float(sigma[0])
    evidence = (
        f"symmetric search at sigma's dominant entry {sigma[0]:.6g} "
        f"{'unexpectedly SUCCEEDED' if found else 'failed'} after "
        f"{sym_sigma.restarts_used} restarts (best objective "
        f"{sym_sigma.best_objective:.3e}); the symmetric threshold bracket for "
        f"the unperturbed tail is [{gs_est.bracket[0]:.6g}, "
        f"{gs_est.certified_upper:.6g}] and sigma's tail sits within l1 distance "
        f"{6.0 / k:.6g} of it"
    )
    record(
        6,
        "heuristic symmetric exclusion",
        not found,
        evidence + "; HEURISTIC ONLY, this is evidence, not a proof",
    )
    if found:
        lines.append(
            "warning: a verified symmetric witness for sigma contradicts the "
            "expected threshold placement; inspect artifacts"
        )
        artifacts["unexpected_symmetric_certificate"] = certificate_to_dict(
            sym_sigma.verdict.witness
        )
    lines.append(
        f"summary: t-hat = {t_hat:.6g} (certified upper edge minus 3), sigma is "
        f"certified realizable with pairwise distinct entries and dominant entry "
        f"{sigma[0]:.6g} < 4; symmetric non-realizability of sigma remains "
        f"heuristic (dominant entry sits {margin:.6g} below the heuristic "
        f"symmetric fail edge)"
    )
    return finish(0)


# ---------------------------------------------------------------------------
# Parser assembly
# ---------------------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser, resolution_default: float | None = None) -> None:
    p.add_argument("--seed", type=int, default=0, help="seed for all randomness")
    p.add_argument("--restarts", type=int, default=64, help="search restarts")
    p.add_argument("--max-iters", type=int, default=2000, help="iterations per restart")
    p.add_argument("--tol", type=float, default=1e-8, help="certificate residual tolerance")
    p.add_argument("--depth", type=int, default=4, help="power-sum and moment depth")
    p.add_argument("--max-size", type=int, default=12, help="partition prover size budget")
    p.add_argument("--out", type=str, default=None, help="output file (stdout if omitted)")
    if resolution_default is not None:
        p.add_argument(
            "--resolution",
            type=float,
            default=resolution_default,
            help="target bracket width",
        )


def build_parser() -> _Parser:
    parser = _Parser(prog="niep", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("check", help="decide realizability with the exact stack")
    p.add_argument("spectrum", help="comma separated spectrum, e.g. 3,3,-2,-2,-2")
    p.add_argument("--symmetric", action="store_true", help="ask about the symmetric class")
    p.add_argument("--search", action="store_true", help="fall back to numerical search")
    _add_common(p)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("realize", help="search for a certified witness matrix")
    p.add_argument("spectrum", help="comma separated spectrum")
    p.add_argument("--symmetric", action="store_true", help="search symmetric matrices")
    _add_common(p)
    p.set_defaults(func=_cmd_realize)

    p = sub.add_parser("guo", help="bracket the leading-slot threshold of a tail")
    p.add_argument("tail", help="comma separated tail, e.g. 3,-2,-2,-2")
    p.add_argument("--symmetric", action="store_true", help="symmetric-class threshold")
    p.add_argument("--max-probes", type=int, default=200, help="probe budget")
    _add_common(p, resolution_default=0.01)
    p.set_defaults(func=_cmd_guo)

    p = sub.add_parser("perturb", help="derive a certificate by additive perturbation")
    p.add_argument("certificate", help="JSON file with the base certificate")
    p.add_argument(
        "epsilons",
        nargs="?",
        default=None,
        help="comma separated perturbation; leading slot must equal the "
        "absolute sum of the rest",
    )
    p.add_argument(
        "--raise",
        dest="raise_delta",
        type=float,
        default=None,
        metavar="DELTA",
        help="raise the leading value by DELTA after the perturbation",
    )
    p.add_argument(
        "--assume-threshold",
        action="store_true",
        help="record a monotonicity assumption when the raise is not self-certifying",
    )
    _add_common(p)
    p.set_defaults(func=_cmd_perturb)

    p = sub.add_parser("scan", help="classify a grid of spectra into CSV")
    p.add_argument(
        "template",
        help="comma separated slots; one or two non-numeric names mark the axes, "
        'e.g. "t,s,-2,-2,-2"',
    )
    p.add_argument(
        "--x",
        type=str,
        default=None,
        help="LO:HI:STEPS for the first free slot (write --x=-2:0:5 for negative LO)",
    )
    p.add_argument(
        "--y", type=str, default=None, help="LO:HI:STEPS for the second free slot"
    )
    p.add_argument("--search", action="store_true", help="search undecided grid points")
    p.add_argument("--symmetric", action="store_true", help="classify the symmetric class")
    _add_common(p)
    p.set_defaults(func=_cmd_scan)

    p = sub.add_parser("lift", help="follow a segment of spectra with warm starts")
    p.add_argument("start", help="comma separated start spectrum")
    p.add_argument("end", help="comma separated end spectrum")
    p.add_argument("--steps", type=int, default=10, help="number of samples on the segment")
    p.add_argument("--symmetric", action="store_true", help="lift symmetric witnesses")
    p.add_argument(
        "--compare-cold",
        action="store_true",
        help="also run without warm starts and report both iteration counts",
    )
    _add_common(p)
    p.set_defaults(func=_cmd_lift)

    p = sub.add_parser("example1", help="run the five-point counterexample pipeline")
    p.add_argument("--k", type=int, default=40, help="perturbation denominator")
    p.add_argument("--max-probes", type=int, default=200, help="probe budget per estimate")
    p.add_argument(
        "--skip-search",
        action="store_true",
        help="stop after the exact proof and the closed-form bounds",
    )
    _add_common(p, resolution_default=0.05)
    p.set_defaults(func=_cmd_example1)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args._argv = argv
        return int(args.func(args))
    except CliError as exc:
        print(exc.message, file=sys.stderr)
        return exc.code
    except SystemExit as exc:
        code = exc.code
        return int(code) if isinstance(code, int) else 0
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
