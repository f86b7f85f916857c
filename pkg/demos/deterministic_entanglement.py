"""Deterministic maximal entanglement from a |1,1> photon input.

Two emitters detuned by exactly one linewidth, probed at the midpoint
frequency, herald a maximally entangled spin state for *every* detector
signature: the protocol succeeds deterministically.  Compare with the
single-photon protocol, which reaches C_avg = 0.5 at the same operating
point.
"""

import numpy as np

from mzherald import (EmitterParams, SystemParams, single_photon_monochromatic,
                      two_photon_monochromatic_identical)


def show(result, title):
    print(f"\n{title}")
    print(f"{'signature':>10} {'probability':>13} {'concurrence':>13}")
    for out in result.outcomes:
        print(f"{str(out.signature):>10} {out.probability:>13.6f} "
              f"{out.concurrence:>13.6f}")
    print(f"average concurrence: {result.c_avg:.6f}")


def main():
    gamma = 1.0                       # ueV
    sys_params = SystemParams(EmitterParams(0.0, gamma),
                              EmitterParams(gamma, gamma))
    midpoint = sys_params.midpoint

    show(two_photon_monochromatic_identical(sys_params, midpoint),
         "|1,1> input, delta = Gamma, photon at the midpoint")
    show(single_photon_monochromatic(sys_params, midpoint),
         "|1,0> input at the same operating point")

    print("\nC_avg of the two-photon protocol vs detuning (midpoint probe):")
    for delta in np.linspace(0.0, 3.0, 7):
        sys_d = SystemParams(EmitterParams(0.0, gamma),
                             EmitterParams(float(delta), gamma))
        c = two_photon_monochromatic_identical(sys_d, sys_d.midpoint).c_avg
        print(f"  delta/Gamma = {delta:4.1f}   C_avg = {c:.4f}")


if __name__ == "__main__":
    main()
