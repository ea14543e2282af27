"""A certified spectrum that separates the two realizability classes.

The walkthrough mirrors the `niep example1` pipeline at library level:

1.  (3,3,-2,-2,-2) is provably not realizable (partition exhaustion).
2.  (4,3,-2,-2,-2) is realizable in both classes (verified witnesses).
3.  The general threshold over the tail (3,-2,-2,-2) is strictly below 4,
    so some t in (0,1) makes (3+t,3,-2,-2,-2) realizable.
4.  A small additive perturbation with leading slot 7/k turns the
    threshold witness into a certified spectrum sigma with pairwise
    distinct entries and dominant entry still below 4.
5.  Symmetric search at sigma fails, which is evidence (not proof) that
    sigma separates the general class from the symmetric one.

Run with a smaller k or coarser resolution to trade sharpness for speed.
"""

import numpy as np

from niep import (
    SearchConfig,
    VerdictTag,
    corollary1_step,
    estimate_g,
    find_symmetric_realization,
    make_spectrum,
    make_tail,
    partition_prover,
    verify_certificate,
)


def main(k: int = 40) -> None:
    cfg = SearchConfig(restarts=16, rng_seed=0)

    lam = make_spectrum([3, 3, -2, -2, -2])
    verdict = partition_prover(lam)
    assert verdict.tag is VerdictTag.NOT_REALIZABLE
    print(f"1. {tuple(lam.values)} is not realizable "
          f"({verdict.proof.detail['parts_tested']} candidate blocks exhausted)")

    tail = make_tail([3, -2, -2, -2])
    est = estimate_g(tail, cfg, resolution=0.1)
    t_hat = est.certified_upper - 3.0
    print(f"2. general threshold bracket over {tail.values}: "
          f"[{est.certified_lower:.4g}, {est.certified_upper:.4g}]")
    print(f"3. certified t-hat = {t_hat:.4g} in (0,1): "
          f"(3+t-hat,3,-2,-2,-2) carries a verified witness")

    eps = [7.0 / k, 1.0 / k, 1.0 / k, 2.0 / k, 3.0 / k]
    sigma_cert = corollary1_step(est.witness, eps)
    sigma = np.asarray(sigma_cert.spectrum.values)
    assert verify_certificate(sigma_cert)
    assert np.all(np.diff(sigma) < 0)
    print(f"4. sigma = {tuple(round(float(v), 6) for v in sigma)}")
    print(f"   certified realizable, pairwise distinct, dominant entry "
          f"{sigma[0]:.6g} < 4")

    sym = find_symmetric_realization(sigma_cert.spectrum, cfg)
    print(f"5. symmetric search at sigma: {sym.verdict.tag.value} "
          f"(best objective {sym.best_objective:.2e} after "
          f"{sym.restarts_used} restarts)")
    print("   heuristic only: failures of a one-sided search prove nothing,")
    print("   but the symmetric threshold for this tail sits at 4, above")
    print(f"   sigma's dominant entry {sigma[0]:.6g}")


if __name__ == "__main__":
    main()
