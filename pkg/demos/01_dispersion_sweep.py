"""Sweep the dispersion relation across frequency and look at the decay rate.

Runs the root finders over seven decades of frequency modulus for a few
surface-tension exponents, prints the per-mode decay rate Re(rho) together
with the normalized rate kappa = Re(rho) |xi| / mu, and checks that kappa
settles into its universal high-frequency band.
"""

import numpy as np

from slabdecay import (KAPPA_MINUS, KAPPA_PLUS, SlabParams, Symbol,
                       sweep_dispersion)


def main():
    moduli = list(np.geomspace(1e-3, 1e4, 22))
    for r in (0.0, 0.5, 1.0):
        slab = SlabParams(ell=1.0, dim=3,
                          symbol=Symbol(family="fractional", g=1.0, sigma=1.0, r=r))
        print(f"\n== fractional symbol, r = {r} ==")
        print(f"{'|xi|':>10}  {'method':>8}  {'Re rho':>12}  {'kappa_eff':>10}")
        rows = sweep_dispersion(slab, moduli)
        kaps = []
        for k, res in rows:
            if isinstance(res, Exception):
                print(f"{k:10.3e}  {type(res).__name__}")
                continue
            kap = res.rho.real * k / slab.mu(k)
            print(f"{k:10.3e}  {res.method:>8}  {res.rho.real:12.5e}  {kap:10.6f}")
            if res.method == "bracket":
                kaps.append(kap)
        # the high-frequency rows should all land in the kappa band; at finite
        # frequency the root can undershoot the lower endpoint by O(1e-5)
        assert all(KAPPA_MINUS * (1 - 1e-3) <= k <= KAPPA_PLUS for k in kaps)
        print(f"high-frequency kappa range: [{min(kaps):.6f}, {max(kaps):.6f}]"
              f"  (band: [{KAPPA_MINUS:.6f}, {KAPPA_PLUS:.6f}])")


if __name__ == "__main__":
    main()
