"""Total-energy decay laws on the torus for different symbol families.

Synthesizes the total surface-plus-fluid energy over the frequency lattice
for three symbols and fits the matching decay law to each tail:

  * fractional r = 1 with smooth data        -> clean exponential
  * fractional r = 0 with Sobolev-type data  -> algebraic t^(-(s + 1/2) / ...)
  * log-corrected symbol                     -> exponential with log correction

This is the slow demo (a few minutes single-threaded); pass --jobs to spread
the per-mode integrations over processes.
"""

import argparse
import math

from slabdecay import (InitialDataSpec, SlabParams, Symbol, fit_decay_law,
                       synthesize_torus)


def run(name, slab, data, law, T, lattice_radius, tail_radius, window, jobs):
    res = synthesize_torus(slab, data, lattice_radius=lattice_radius, T=T,
                           dt=math.inf, tail_radius=tail_radius, law="none",
                           fit_window=None, jobs=jobs)
    fit = fit_decay_law(res.curve, law, window)
    print(f"\n== {name} ==")
    print(f"law = {fit.law}, exponent = {fit.exponent:.4f}, "
          f"quality R^2 = {fit.quality:.5f}")
    if fit.alpha is not None:
        print(f"stretch/correction parameter alpha = {fit.alpha:.4f}")
    return fit


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--jobs", type=int, default=None)
    args = ap.parse_args()

    smooth = InitialDataSpec(family="sobolev_h", s=4.0)
    sobolev = InitialDataSpec(family="sobolev_h", s=2.0)

    run("r = 1, smooth data (expect exponential)",
        SlabParams(ell=1.0, dim=3, symbol=Symbol(family="fractional", r=1.0)),
        smooth, "exponential", T=6.0, lattice_radius=12, tail_radius=None,
        window=(0.5, 6.0), jobs=args.jobs)

    run("r = 0, Sobolev data (expect algebraic)",
        SlabParams(ell=1.0, dim=3, symbol=Symbol(family="fractional", r=0.0)),
        sobolev, "algebraic", T=1e3, lattice_radius=16, tail_radius=1e3,
        window=(10.0, 1e3), jobs=args.jobs)

    run("log-corrected symbol (expect log-corrected exponential)",
        SlabParams(ell=1.0, dim=3,
                   symbol=Symbol(family="log_corrected", alpha=1.0)),
        sobolev, "log_corrected_exp", T=200.0, lattice_radius=16,
        tail_radius=1e4, window=(5.0, 200.0), jobs=args.jobs)


if __name__ == "__main__":
    main()
