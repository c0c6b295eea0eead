"""Long-run occupation of a simulated path against the stationary tail.

    python3 demos/occupation.py [horizon]

A horizon of 1000 time units with 64 paths takes a few seconds.
"""

import sys

from stablefi import Weight
from stablefi.simulate import PathConfig, ergodic_tail_estimate, simulate_ensemble

if __name__ == "__main__":
    horizon = float(sys.argv[1]) if len(sys.argv) > 1 else 1000.0
    w = Weight.poly(1.5, 2.0)
    cfg = PathConfig(1.5, w, dt=0.01, steps=int(horizon / 0.01), seed=0)
    ens = simulate_ensemble(cfg, 64)
    probes = [0.5, 1.0, 2.0, 5.0]
    st = ergodic_tail_estimate(ens, probes)
    print("   x   simulated   +- 3 s.e.   exact tail")
    for x, e, h in zip(probes, st.estimate, st.halfwidth):
        print(f"{x:4g}   {e:9.4f}   {h:9.4f}   {w.tail(x):10.4f}")
