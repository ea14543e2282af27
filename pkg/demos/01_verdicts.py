"""Exact verdicts on small spectra.

Walks the exact stack (necessary conditions, companion construction,
partition pruning) over a handful of five-point spectra and prints what
each layer can and cannot decide.
"""

from niep import (
    check_necessary,
    companion_realizer,
    decide_exact,
    first_violation,
    make_spectrum,
    partition_prover,
)


def show(values) -> None:
    spec = make_spectrum(values)
    verdict = decide_exact(spec)
    print(f"{str(tuple(spec.values)):34s} -> {verdict.tag.value}")
    if verdict.proof is not None:
        print(f"    proof: {verdict.proof.kind} {verdict.proof.detail.get('condition', '')}")
    if verdict.witness is not None:
        print(f"    witness residual: {verdict.witness.residual:.2e}")


def main() -> None:
    print("quick verdicts from the exact stack")
    print("-" * 60)
    show([6, -2, -2, -2])        # companion matrix is nonnegative
    show([1, 1, -3])             # dominance fails
    show([2, -1, -1.5])          # trace is negative
    show([3, 3, -2, -2, -2])     # the partition argument disproves it
    show([4, 3, -2, -2, -2])     # exact layers cannot decide; search can

    print()
    print("layer by layer on (3,3,-2,-2,-2):")
    spec = make_spectrum([3, 3, -2, -2, -2])
    for result in check_necessary(spec):
        print(f"    {result.name:16s} passed={result.passed} slack={result.slack:+.3f}")
    print(f"    first_violation -> {first_violation(spec)}")
    print(f"    companion_realizer -> {companion_realizer(spec).tag.value}")
    verdict = partition_prover(spec)
    print(
        f"    partition_prover -> {verdict.tag.value} "
        f"({verdict.proof.detail['parts_tested']} candidate blocks exhausted)"
    )


if __name__ == "__main__":
    main()
